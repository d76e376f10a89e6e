//! Critical-point detection with sub-grid refinement.
//!
//! Interior local minima of the recovered |Du| below a tolerance are
//! candidate critical points; each is refined below mesh resolution by
//! fitting a quadratic to `u` on the two-ring of the minimizing vertex and
//! taking its stationary point. Minima that refine to the same location are
//! merged.

use crate::geometry::Point2;
use crate::solver::SolutionField;

/// One detected critical point.
#[derive(Clone, Copy, Debug)]
pub struct CriticalPoint {
    pub position: Point2,
    /// Interpolated solution value at the point.
    pub u: f64,
    /// Interpolated |Du| at the point.
    pub grad_norm: f64,
}

#[derive(Clone, Debug)]
pub struct CriticalPointSet {
    pub points: Vec<CriticalPoint>,
    /// True when |Du| is below tolerance on a large fraction of the interior
    /// (e.g. the horosphere), so "critical point" loses meaning.
    pub degenerate: bool,
}

impl CriticalPointSet {
    pub fn count(&self) -> usize {
        self.points.len()
    }
}

/// Default detection tolerance: |Du| scales linearly with distance from a
/// nondegenerate critical point, so the nearest vertex sits at O(h).
pub fn default_tolerance(mesh_h: f64) -> f64 {
    2.0 * mesh_h
}

/// Find interior critical points of the solution: local minima of the
/// recovered |Du| below `tol`, refined by a local quadratic fit.
pub fn find_critical_points(s: &SolutionField, tol: f64) -> CriticalPointSet {
    let mesh = s.mesh();
    let q: Vec<f64> = s.gradient_norms();
    let adjacency = mesh.vertex_neighbors();

    let interior: Vec<usize> = mesh.interior_vertices().collect();
    let below: usize = interior.iter().filter(|&&v| q[v] < tol).count();
    if !interior.is_empty() && below as f64 > 0.5 * interior.len() as f64 {
        return CriticalPointSet {
            points: Vec::new(),
            degenerate: true,
        };
    }

    let mut refined: Vec<CriticalPoint> = Vec::new();
    for &v in &interior {
        if q[v] >= tol {
            continue;
        }
        if adjacency[v].iter().any(|&w| q[w] < q[v]) {
            continue; // not a local minimum
        }
        let position = refine_stationary_point(s, v, &adjacency).unwrap_or(mesh.vertices[v]);
        let u = mesh.interpolate(position, s.values()).unwrap_or(s.values()[v]);
        let grad_norm = mesh.interpolate(position, &q).unwrap_or(q[v]);
        // Merge duplicates: flat discrete minima refine to the same spot.
        if !refined
            .iter()
            .any(|c| c.position.dist(position) < mesh.h)
        {
            refined.push(CriticalPoint {
                position,
                u,
                grad_norm,
            });
        }
    }

    CriticalPointSet {
        points: refined,
        degenerate: false,
    }
}

/// Stationary point of the least-squares quadratic of `u` over the two-ring
/// of `center`. Falls back to `None` when the fit is rank-deficient or the
/// stationary point escapes the neighbourhood.
fn refine_stationary_point(
    s: &SolutionField,
    center: usize,
    adjacency: &[Vec<usize>],
) -> Option<Point2> {
    let mesh = s.mesh();
    let mut ring: Vec<usize> = vec![center];
    for &n1 in &adjacency[center] {
        ring.push(n1);
        for &n2 in &adjacency[n1] {
            ring.push(n2);
        }
    }
    ring.sort_unstable();
    ring.dedup();
    if ring.len() < 6 {
        return None;
    }

    let origin = mesh.vertices[center];
    // u ≈ c₀ + c₁ x + c₂ y + c₃ x² + c₄ xy + c₅ y², normal equations.
    let mut ata = [[0.0f64; 6]; 6];
    let mut atb = [0.0f64; 6];
    for &v in &ring {
        let p = mesh.vertices[v] - origin;
        let row = [1.0, p.x, p.y, p.x * p.x, p.x * p.y, p.y * p.y];
        for i in 0..6 {
            for j in 0..6 {
                ata[i][j] += row[i] * row[j];
            }
            atb[i] += row[i] * s.values()[v];
        }
    }
    let c = solve6(&mut ata, &mut atb)?;
    // Stationary point: [2c₃ c₄; c₄ 2c₅]·x = −[c₁; c₂].
    let det = 4.0 * c[3] * c[5] - c[4] * c[4];
    if det.abs() < 1e-14 {
        return None;
    }
    let x = (-c[1] * 2.0 * c[5] + c[2] * c[4]) / det;
    let y = (-c[2] * 2.0 * c[3] + c[1] * c[4]) / det;
    let offset = Point2::new(x, y);
    if offset.norm() > 2.0 * mesh.h {
        return None;
    }
    Some(origin + offset)
}

/// In-place Gaussian elimination with partial pivoting for the 6×6 fit.
fn solve6(a: &mut [[f64; 6]; 6], b: &mut [f64; 6]) -> Option<[f64; 6]> {
    for k in 0..6 {
        let piv = (k..6).max_by(|&i, &j| a[i][k].abs().partial_cmp(&a[j][k].abs()).unwrap())?;
        if a[piv][k].abs() < 1e-300 {
            return None;
        }
        a.swap(k, piv);
        b.swap(k, piv);
        for i in (k + 1)..6 {
            let f = a[i][k] / a[k][k];
            for j in k..6 {
                a[i][j] -= f * a[k][j];
            }
            b[i] -= f * b[k];
        }
    }
    let mut x = [0.0; 6];
    for k in (0..6).rev() {
        let mut acc = b[k];
        for j in (k + 1)..6 {
            acc -= a[k][j] * x[j];
        }
        x[k] = acc / a[k][k];
    }
    Some(x)
}
