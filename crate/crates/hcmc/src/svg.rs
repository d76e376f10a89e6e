//! Self-contained SVG contour plots of vertex fields.
//!
//! The input is a field CSV in the documented schema; the point cloud is
//! re-triangulated (Delaunay — the domains are convex, so this reproduces a
//! valid mesh), contours are extracted by marching triangles, and the output
//! is a standalone SVG with the domain boundary, level polylines, and the
//! detected critical point of the plotted column marked. Deterministic up to
//! the generator-version comment line.

use std::path::Path;

use thiserror::Error;

use crate::contour::{level_segments, polylines};
use crate::csvio::{CsvError, FieldTable};
use crate::geometry::{delaunay_triangulation, Mesh, Point2};

#[derive(Debug, Error)]
pub enum SvgError {
    #[error(transparent)]
    Csv(#[from] CsvError),
    #[error("field `{0}` not present in the CSV")]
    MissingColumn(String),
    #[error("field is constant; no contours to draw")]
    ConstantField,
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Rebuild a mesh from CSV points (boundary parameters are synthesised from
/// the polar angle around the centroid, valid for convex domains).
pub fn mesh_from_table(table: &FieldTable) -> Mesh {
    let triangles = delaunay_triangulation(&table.points);
    let n = table.points.len();
    let cx = table.points.iter().map(|p| p.x).sum::<f64>() / n as f64;
    let cy = table.points.iter().map(|p| p.y).sum::<f64>() / n as f64;
    let boundary_t: Vec<f64> = table
        .points
        .iter()
        .zip(&table.boundary)
        .map(|(p, &b)| {
            if b {
                (p.y - cy).atan2(p.x - cx).rem_euclid(std::f64::consts::TAU)
            } else {
                f64::NAN
            }
        })
        .collect();
    // Median edge length stands in for the original h.
    let mut lens: Vec<f64> = triangles
        .iter()
        .flat_map(|t| {
            [
                table.points[t[0]].dist(table.points[t[1]]),
                table.points[t[1]].dist(table.points[t[2]]),
                table.points[t[2]].dist(table.points[t[0]]),
            ]
        })
        .collect();
    lens.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let h = lens.get(lens.len() / 2).copied().unwrap_or(1.0);
    Mesh {
        vertices: table.points.clone(),
        triangles,
        is_boundary: table.boundary.clone(),
        boundary_t,
        h,
    }
}

/// Contour levels: `count` levels strictly between min and max.
fn levels(min: f64, max: f64, count: usize) -> Vec<f64> {
    (1..=count)
        .map(|k| min + (max - min) * k as f64 / (count + 1) as f64)
        .collect()
}

pub struct PlotOptions {
    pub column: String,
    pub level_count: usize,
    /// Explicit levels override `level_count`.
    pub explicit_levels: Option<Vec<f64>>,
}

impl Default for PlotOptions {
    fn default() -> Self {
        Self {
            column: "u".into(),
            level_count: 12,
            explicit_levels: None,
        }
    }
}

/// Render a contour plot of one CSV column into `out`.
pub fn render_contours(table: &FieldTable, opts: &PlotOptions, out: &Path) -> Result<(), SvgError> {
    let field = table
        .column(&opts.column)
        .ok_or_else(|| SvgError::MissingColumn(opts.column.clone()))?
        .to_vec();
    let mesh = mesh_from_table(table);

    let (mut fmin, mut fmax) = (f64::INFINITY, f64::NEG_INFINITY);
    for &v in &field {
        fmin = fmin.min(v);
        fmax = fmax.max(v);
    }
    if !(fmax > fmin) {
        return Err(SvgError::ConstantField);
    }
    let level_values = opts
        .explicit_levels
        .clone()
        .unwrap_or_else(|| levels(fmin, fmax, opts.level_count));

    // Geometry → viewport transform.
    let (mut min_x, mut min_y) = (f64::INFINITY, f64::INFINITY);
    let (mut max_x, mut max_y) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in &mesh.vertices {
        min_x = min_x.min(p.x);
        min_y = min_y.min(p.y);
        max_x = max_x.max(p.x);
        max_y = max_y.max(p.y);
    }
    let span = (max_x - min_x).max(max_y - min_y);
    let margin = 0.05 * span;
    let width = 640.0;
    let scale = width / (span + 2.0 * margin);
    let to_px = |p: Point2| -> (f64, f64) {
        (
            (p.x - min_x + margin) * scale,
            // SVG y grows downward.
            (max_y - p.y + margin) * scale,
        )
    };
    let w_px = (max_x - min_x + 2.0 * margin) * scale;
    let h_px = (max_y - min_y + 2.0 * margin) * scale;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w_px:.0}\" height=\"{h_px:.0}\" viewBox=\"0 0 {w_px:.2} {h_px:.2}\">\n"
    ));
    // Documented generator line: the single piece of output allowed to vary
    // between versions.
    svg.push_str(&format!(
        "<!-- generator: hcmc {} -->\n",
        env!("CARGO_PKG_VERSION")
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // Domain boundary: boundary vertices ordered by angle.
    let loop_ = mesh.boundary_loop();
    if loop_.len() >= 3 {
        svg.push_str("<path d=\"");
        for (i, &v) in loop_.iter().enumerate() {
            let (x, y) = to_px(mesh.vertices[v]);
            svg.push_str(&format!("{}{x:.2} {y:.2} ", if i == 0 { "M" } else { "L" }));
        }
        svg.push_str("Z\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n");
    }

    for (li, &level) in level_values.iter().enumerate() {
        let segs = level_segments(&mesh, &field, level);
        if segs.is_empty() {
            continue;
        }
        let t = li as f64 / (level_values.len().max(2) - 1) as f64;
        let color = format!(
            "rgb({},{},{})",
            (40.0 + 200.0 * t) as u8,
            (60.0 + 40.0 * (1.0 - t)) as u8,
            (220.0 - 180.0 * t) as u8
        );
        for chain in polylines(&segs) {
            svg.push_str("<polyline points=\"");
            for p in &chain {
                let (x, y) = to_px(*p);
                svg.push_str(&format!("{x:.2},{y:.2} "));
            }
            svg.push_str(&format!(
                "\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1\"/>\n"
            ));
        }
    }

    // Critical point of the plotted field: vertex minimizing the recovered
    // |Dfield| (meaningful for u; harmless decoration otherwise).
    if let Some(cp) = critical_of_column(&mesh, &field) {
        let (x, y) = to_px(cp);
        svg.push_str(&format!(
            "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"4\" fill=\"none\" stroke=\"red\" stroke-width=\"1.5\"/>\n<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"red\" stroke-width=\"1\"/>\n<line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"red\" stroke-width=\"1\"/>\n",
            x - 6.0,
            x + 6.0,
            y - 6.0,
            y + 6.0
        ));
    }

    svg.push_str("</svg>\n");
    std::fs::write(out, svg).map_err(|source| SvgError::Io {
        path: out.display().to_string(),
        source,
    })
}

/// Interior vertex minimizing the recovered gradient norm of the field.
fn critical_of_column(mesh: &Mesh, field: &[f64]) -> Option<Point2> {
    let elements = crate::solver::element_data(mesh);
    let mut grad = vec![Point2::default(); mesh.vertex_count()];
    let mut weight = vec![0.0; mesh.vertex_count()];
    for el in &elements {
        let g = el.grads[0] * field[el.tri[0]]
            + el.grads[1] * field[el.tri[1]]
            + el.grads[2] * field[el.tri[2]];
        for &v in &el.tri {
            grad[v] = grad[v] + g * el.area;
            weight[v] += el.area;
        }
    }
    mesh.interior_vertices()
        .min_by(|&a, &b| {
            let qa = (grad[a] * (1.0 / weight[a])).norm();
            let qb = (grad[b] * (1.0 / weight[b])).norm();
            qa.partial_cmp(&qb).unwrap()
        })
        .map(|v| mesh.vertices[v])
}
