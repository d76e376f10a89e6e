//! The Payne–Philippin-style auxiliary function
//! `Φ(x; α) = log( (1+q²) / (1 − H√(1+q²))² · u^{2α} )`, `q = |Du|`.
//!
//! Φ satisfies a maximum principle at α = 2 (maximum at the critical point
//! of `u`) and a minimum principle for α ∈ [1, 2] (minimum on the boundary
//! for non-radial solutions); both are checked numerically downstream. The
//! quantity is defined where `ρ = 1 − H√(1+q²) > 0`; for `H ≤ 0` that is
//! automatic, for `0 < H < 1` it holds at solutions up to discretization
//! error, so vertices violating it beyond an O(h) allowance are flagged.

use super::{slack, AnalysisError};
use crate::solver::SolutionField;

#[derive(Clone, Debug)]
pub struct PhiField {
    pub alpha: f64,
    /// Per-vertex Φ values; NaN where `1 − H√(1+q²) ≤ 0`.
    pub values: Vec<f64>,
    /// Vertices where positivity of ρ fails beyond the O(h) allowance.
    pub flagged: Vec<bool>,
    pub mean_curvature: f64,
    pub boundary_height: f64,
}

/// Pointwise Φ value.
pub fn phi_value(q: f64, u: f64, mean_curvature: f64, alpha: f64) -> f64 {
    let w = (1.0 + q * q).sqrt();
    let rho = 1.0 - mean_curvature * w;
    if rho <= 0.0 {
        return f64::NAN;
    }
    ((1.0 + q * q) / (rho * rho) * u.powf(2.0 * alpha)).ln()
}

/// Evaluate Φ(·; α) on a solution. Fails when more than 1% of vertices
/// violate ρ-positivity beyond the discretization allowance — the solution
/// is then outside the regime the estimates cover.
pub fn phi(s: &SolutionField, alpha: f64) -> Result<PhiField, AnalysisError> {
    let h = s.mesh().h;
    let hm = s.mean_curvature();
    let n = s.mesh().vertex_count();
    let mut values = Vec::with_capacity(n);
    let mut flagged = vec![false; n];
    let mut n_flagged = 0usize;
    for (v, g) in s.vertex_gradients().iter().enumerate() {
        let q = g.norm();
        let w = (1.0 + q * q).sqrt();
        let rho = 1.0 - hm * w;
        if rho <= -slack::RHO_POSITIVITY * h {
            flagged[v] = true;
            n_flagged += 1;
        }
        values.push(phi_value(q, s.values()[v], hm, alpha));
    }
    let fraction = n_flagged as f64 / n as f64;
    if fraction > 0.01 {
        return Err(AnalysisError::RhoPositivityFailed { fraction });
    }
    Ok(PhiField {
        alpha,
        values,
        flagged,
        mean_curvature: hm,
        boundary_height: s.boundary_height(),
    })
}

impl PhiField {
    /// Indices with usable (finite, unflagged) values.
    pub fn valid_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.values.len()).filter(|&v| !self.flagged[v] && self.values[v].is_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DomainSpec;
    use crate::solver::{solve_dirichlet, SolverConfig};
    use approx::assert_relative_eq;

    #[test]
    fn phi_at_critical_point_closed_form() {
        // q = 0, u = u_M, H = 0, α = 2 → Φ = log(u_M⁴) = 4 log u_M.
        let u_m = 1.7;
        assert_relative_eq!(phi_value(0.0, u_m, 0.0, 2.0), 4.0 * u_m.ln(), epsilon = 1e-12);
        // General closed form at the critical point: log(u_M^{2α}/(1−H)²).
        let (h, alpha, u) = (-0.6, 1.5, 1.3);
        assert_relative_eq!(
            phi_value(0.0, u, h, alpha),
            (u.powf(2.0 * alpha) / (1.0 - h) / (1.0 - h)).ln(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn phi_alpha_one_constant_on_radial_minimal_solution() {
        // Exact identity: (1+w'²) w² = m² for the H = 0 cap, so Φ(·;1) = log m².
        let d = DomainSpec::disc(1.0).unwrap();
        let h = 0.05;
        let s = solve_dirichlet(&d, 0.0, 1.0, h, &SolverConfig::default()).unwrap();
        let f = phi(&s, 1.0).unwrap();
        let expect = 2f64.ln(); // m² = 2
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in f.valid_vertices() {
            lo = lo.min(f.values[v]);
            hi = hi.max(f.values[v]);
        }
        assert!(
            (lo - expect).abs() < 2.0 * h && (hi - expect).abs() < 2.0 * h,
            "Φ(;1) range [{lo}, {hi}] not within O(h) of log 2 = {expect}"
        );
    }

    #[test]
    fn phi_alpha_two_peaks_at_center_for_radial_cap() {
        let d = DomainSpec::disc(1.0).unwrap();
        let h = 0.05;
        let s = solve_dirichlet(&d, 0.0, 1.0, h, &SolverConfig::default()).unwrap();
        let f = phi(&s, 2.0).unwrap();
        let argmax = f
            .valid_vertices()
            .max_by(|&a, &b| f.values[a].partial_cmp(&f.values[b]).unwrap())
            .unwrap();
        let p = s.mesh().vertices[argmax];
        assert!(p.norm() <= 2.0 * h, "argmax Φ(;2) at {p:?}, not near the center");
    }

    #[test]
    fn no_flags_for_nonpositive_mean_curvature() {
        let d = DomainSpec::disc(0.6).unwrap();
        let s = solve_dirichlet(&d, -1.0, 1.0, 0.08, &SolverConfig::default()).unwrap();
        let f = phi(&s, 1.0).unwrap();
        assert!(f.flagged.iter().all(|&b| !b));
        assert_eq!(f.valid_vertices().count(), s.mesh().vertex_count());
    }
}
