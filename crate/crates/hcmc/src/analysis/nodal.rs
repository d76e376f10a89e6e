//! Nodal sets of directional derivatives `v(θ) = Du · (cos θ, sin θ)`.
//!
//! For a solution on a strictly convex domain with a unique critical point,
//! the zero set of `v(θ)` is a single arc meeting the boundary at exactly the
//! two points where the outward normal is orthogonal to the direction. The
//! summary counts both: sign changes of `v(θ)` around the boundary loop and
//! connected components of the interior zero set.

use super::AnalysisError;
use crate::contour::{component_count, level_segments};
use crate::solver::SolutionField;

#[derive(Clone, Copy, Debug)]
pub struct NodalSummary {
    pub theta: f64,
    /// Sign changes of v(θ) along the boundary loop.
    pub boundary_zero_count: usize,
    /// Connected components of the zero level set in the closed domain.
    pub component_count: usize,
}

/// Dead-band for boundary zero counting, relative to max |v| on the boundary:
/// strict convexity makes the zeros simple analytically, but floating point
/// needs a band to avoid double counts at near-zeros.
const DEADBAND_REL: f64 = 1e-8;

/// Directional derivative of the solution at every vertex.
pub fn directional_derivative(s: &SolutionField, theta: f64) -> Vec<f64> {
    let (c, sn) = (theta.cos(), theta.sin());
    s.vertex_gradients()
        .iter()
        .map(|g| g.x * c + g.y * sn)
        .collect()
}

/// Zero-set summary of `v(θ)`. Errors on fields where `v` vanishes
/// identically within tolerance (no direction information).
pub fn nodal_summary(s: &SolutionField, theta: f64) -> Result<NodalSummary, AnalysisError> {
    let v = directional_derivative(s, theta);
    let vmax = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if vmax < 1e-13 * (1.0 + s.boundary_height()) {
        return Err(AnalysisError::DegenerateField);
    }

    // Boundary zeros: classify each boundary vertex as +, −, or 0 (within the
    // dead-band) and count +/− transitions cyclically, skipping zeros.
    let loop_ = s.mesh().boundary_loop();
    let band = DEADBAND_REL * vmax;
    let signs: Vec<i8> = loop_
        .iter()
        .map(|&b| {
            let x = v[b];
            if x > band {
                1
            } else if x < -band {
                -1
            } else {
                0
            }
        })
        .collect();
    let nonzero: Vec<i8> = signs.iter().copied().filter(|&s| s != 0).collect();
    let mut boundary_zero_count = 0usize;
    for i in 0..nonzero.len() {
        if nonzero[i] != nonzero[(i + 1) % nonzero.len()] {
            boundary_zero_count += 1;
        }
    }

    let segments = level_segments(s.mesh(), &v, 0.0);
    Ok(NodalSummary {
        theta,
        boundary_zero_count,
        component_count: component_count(&segments),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DomainSpec;
    use crate::solver::{solve_dirichlet, SolverConfig};

    #[test]
    fn radial_cap_nodal_line_is_a_diameter() {
        let d = DomainSpec::disc(1.0).unwrap();
        let s = solve_dirichlet(&d, 0.0, 1.0, 0.05, &SolverConfig::default()).unwrap();
        for k in 0..4 {
            let theta = std::f64::consts::PI * k as f64 / 4.0;
            let n = nodal_summary(&s, theta).unwrap();
            assert_eq!(n.boundary_zero_count, 2, "θ = {theta}");
            assert_eq!(n.component_count, 1, "θ = {theta}");
        }
    }

    #[test]
    fn ellipse_nodal_structure() {
        let d = DomainSpec::ellipse(0.5, 0.4).unwrap();
        let s = solve_dirichlet(&d, -1.0, 1.0, 0.05, &SolverConfig::default()).unwrap();
        let n = nodal_summary(&s, 0.0).unwrap();
        assert_eq!(n.boundary_zero_count, 2);
        assert_eq!(n.component_count, 1);
    }

    #[test]
    fn theta_and_theta_plus_pi_agree() {
        // v(θ+π) = −v(θ): identical zero sets, identical counts.
        let d = DomainSpec::ellipse(0.5, 0.4).unwrap();
        let s = solve_dirichlet(&d, -1.0, 1.0, 0.06, &SolverConfig::default()).unwrap();
        for k in 0..8 {
            let theta = std::f64::consts::PI * k as f64 / 8.0;
            let a = nodal_summary(&s, theta).unwrap();
            let b = nodal_summary(&s, theta + std::f64::consts::PI).unwrap();
            assert_eq!(a.boundary_zero_count, b.boundary_zero_count, "θ = {theta}");
            assert_eq!(a.component_count, b.component_count, "θ = {theta}");
            let va = directional_derivative(&s, theta);
            let vb = directional_derivative(&s, theta + std::f64::consts::PI);
            for (x, y) in va.iter().zip(&vb) {
                assert!((x + y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn horosphere_is_degenerate() {
        let d = DomainSpec::disc(1.0).unwrap();
        let s = solve_dirichlet(&d, 1.0, 1.0, 0.1, &SolverConfig::default()).unwrap();
        assert!(matches!(
            nodal_summary(&s, 0.3),
            Err(AnalysisError::DegenerateField)
        ));
    }
}
