//! Boundary-conforming triangulation of a strictly convex domain.
//!
//! Boundary vertices are placed exactly on the curve at uniform arclength
//! spacing ≈ h; interior vertices come from a hexagonal lattice of pitch h,
//! culled near the boundary to keep element quality. The combined point set
//! is Delaunay-triangulated; convexity guarantees the triangulation fills the
//! boundary polygon without constraint enforcement. Everything is
//! deterministic for a given `(domain, h)`.

use super::{delaunay_triangulation, triangle_area, DomainSpec, GeometryError, Point2};

/// Hard cap on the number of triangles a single mesh may use.
pub const MAX_ELEMENT_BUDGET: usize = 400_000;

/// Fraction of `h`: interior lattice points closer than this to the boundary
/// are culled so boundary-adjacent elements stay well shaped.
const CULL_FRACTION: f64 = 0.55;

/// Conforming triangle mesh with boundary markers.
#[derive(Clone, Debug)]
pub struct Mesh {
    pub vertices: Vec<Point2>,
    /// CCW-oriented index triples.
    pub triangles: Vec<[usize; 3]>,
    pub is_boundary: Vec<bool>,
    /// Boundary-curve parameter per vertex (NaN for interior vertices).
    pub boundary_t: Vec<f64>,
    /// Target edge length the mesh was built for.
    pub h: f64,
}

impl Mesh {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        triangle_area(self.vertices[a], self.vertices[b], self.vertices[c])
    }

    pub fn interior_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertex_count()).filter(|&v| !self.is_boundary[v])
    }

    /// Boundary vertex indices ordered cyclically along the curve.
    pub fn boundary_loop(&self) -> Vec<usize> {
        let mut loop_: Vec<usize> = (0..self.vertex_count())
            .filter(|&v| self.is_boundary[v])
            .collect();
        loop_.sort_by(|&a, &b| self.boundary_t[a].partial_cmp(&self.boundary_t[b]).unwrap());
        loop_
    }

    /// Lumped mass per vertex: one third of the area of its star.
    pub fn lumped_masses(&self) -> Vec<f64> {
        let mut m = vec![0.0; self.vertex_count()];
        for t in 0..self.triangle_count() {
            let area = self.triangle_area(t);
            for &v in &self.triangles[t] {
                m[v] += area / 3.0;
            }
        }
        m
    }

    /// Vertex-to-vertex adjacency (sorted, deduplicated).
    pub fn vertex_neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for t in &self.triangles {
            for (i, j) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        adj
    }

    pub fn max_edge_length(&self) -> f64 {
        let mut max = 0.0f64;
        for t in &self.triangles {
            for (i, j) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                max = max.max(self.vertices[i].dist(self.vertices[j]));
            }
        }
        max
    }

    /// Locate the triangle containing `p`; returns the triangle index and
    /// barycentric coordinates. Brute-force scan — meshes here are small.
    pub fn locate(&self, p: Point2) -> Option<(usize, [f64; 3])> {
        const EPS: f64 = -1e-12;
        for (ti, t) in self.triangles.iter().enumerate() {
            let (a, b, c) = (self.vertices[t[0]], self.vertices[t[1]], self.vertices[t[2]]);
            let area = triangle_area(a, b, c);
            let w0 = triangle_area(p, b, c) / area;
            let w1 = triangle_area(a, p, c) / area;
            let w2 = triangle_area(a, b, p) / area;
            if w0 >= EPS && w1 >= EPS && w2 >= EPS {
                return Some((ti, [w0, w1, w2]));
            }
        }
        None
    }

    /// Linear interpolation of a vertex field at `p`.
    pub fn interpolate(&self, p: Point2, field: &[f64]) -> Option<f64> {
        let (ti, w) = self.locate(p)?;
        let t = self.triangles[ti];
        Some(w[0] * field[t[0]] + w[1] * field[t[1]] + w[2] * field[t[2]])
    }
}

/// Build a conforming mesh of `domain` with target edge length `h`.
pub fn triangulate(domain: &DomainSpec, h: f64) -> Result<Mesh, GeometryError> {
    let diam = domain.diameter();
    // Relative slop keeps h = diam/4 exactly admissible (the diameter itself
    // is sampled).
    if !(h > 0.0 && h.is_finite()) || h > diam / 4.0 * (1.0 + 1e-4) {
        return Err(GeometryError::MeshSizeTooLarge { h, limit: diam / 4.0 });
    }

    // Element estimate: hex lattice density ≈ area / (√3/2 h²), ~2 triangles
    // per vertex, plus the boundary ring.
    let samples = domain.boundary_samples();
    let area: f64 = 0.5
        * (0..samples.len())
            .map(|i| samples[i].cross(samples[(i + 1) % samples.len()]))
            .sum::<f64>();
    let est_vertices = (area.abs() / (0.866 * h * h) + domain.perimeter() / h) as usize;
    let est_elements = est_vertices * 2 + 16;
    if est_elements > MAX_ELEMENT_BUDGET {
        return Err(GeometryError::MeshBudgetExceeded {
            h,
            estimate: est_elements,
            budget: MAX_ELEMENT_BUDGET,
        });
    }

    // Boundary ring: uniform arclength, vertices exactly on the curve.
    let perimeter = domain.perimeter();
    let n_boundary = ((perimeter / h).ceil() as usize).max(12);
    let mut vertices = Vec::with_capacity(est_vertices);
    let mut boundary_t = Vec::with_capacity(est_vertices);
    for k in 0..n_boundary {
        let s = perimeter * k as f64 / n_boundary as f64;
        let t = domain.param_at_arclength(s);
        vertices.push(domain.curve().point(t));
        boundary_t.push(t);
    }
    let n_b = vertices.len();

    // Interior hexagonal lattice centred on the bounding box midpoint.
    let (mut min_x, mut min_y) = (f64::INFINITY, f64::INFINITY);
    let (mut max_x, mut max_y) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in samples {
        min_x = min_x.min(p.x);
        min_y = min_y.min(p.y);
        max_x = max_x.max(p.x);
        max_y = max_y.max(p.y);
    }
    let cx = 0.5 * (min_x + max_x);
    let cy = 0.5 * (min_y + max_y);
    let row_step = h * 3f64.sqrt() / 2.0;
    let n_rows = ((max_y - min_y) / (2.0 * row_step)).ceil() as i64 + 1;
    let n_cols = ((max_x - min_x) / (2.0 * h)).ceil() as i64 + 1;
    let cull = CULL_FRACTION * h;
    for row in -n_rows..=n_rows {
        let y = cy + row as f64 * row_step;
        let offset = if row.rem_euclid(2) == 0 { 0.0 } else { 0.5 * h };
        for col in -n_cols..=n_cols {
            let p = Point2::new(cx + col as f64 * h + offset, y);
            if domain.contains(p) && domain.boundary_distance(p) >= cull {
                vertices.push(p);
                boundary_t.push(f64::NAN);
            }
        }
    }

    let triangles = delaunay_triangulation(&vertices);

    // Sort vertices lexicographically by (y, x) to keep the assembled system
    // bandwidth near the lattice row width; remap triangles accordingly.
    let mut order: Vec<usize> = (0..vertices.len()).collect();
    order.sort_by(|&a, &b| {
        (vertices[a].y, vertices[a].x)
            .partial_cmp(&(vertices[b].y, vertices[b].x))
            .unwrap()
    });
    let mut rank = vec![0usize; vertices.len()];
    for (new, &old) in order.iter().enumerate() {
        rank[old] = new;
    }
    let new_vertices: Vec<Point2> = order.iter().map(|&o| vertices[o]).collect();
    let new_boundary_t: Vec<f64> = order.iter().map(|&o| boundary_t[o]).collect();
    let is_boundary: Vec<bool> = order.iter().map(|&o| o < n_b).collect();
    let mut new_triangles: Vec<[usize; 3]> = triangles
        .iter()
        .map(|t| [rank[t[0]], rank[t[1]], rank[t[2]]])
        .collect();
    for t in &mut new_triangles {
        let k = (0..3).min_by_key(|&i| t[i]).unwrap();
        t.rotate_left(k);
    }
    new_triangles.sort_unstable();

    let mesh = Mesh {
        vertices: new_vertices,
        triangles: new_triangles,
        is_boundary,
        boundary_t: new_boundary_t,
        h,
    };

    debug_assert!((0..mesh.triangle_count()).all(|t| mesh.triangle_area(t) > 0.0));
    Ok(mesh)
}
