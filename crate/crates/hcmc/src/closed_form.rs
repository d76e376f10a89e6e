//! Exact radial solutions and explicit bounds.
//!
//! Over a disc of radius `R`, the graph of (part of) a Euclidean sphere
//! `w(r) = c₀ + √(m² − r²)` has constant hyperbolic mean curvature `H` when
//! `c₀ = −mH` and `w(R) = a`; it is the analytic oracle for the solver and
//! the comparison barrier behind every height bound here. The remaining
//! functions evaluate the closed-form estimates: the gradient bound in terms
//! of `sup u`, the `|Du|` bound for `0 < H < 1`, the solvability window for
//! `−1 ≤ H < 0`, and the two-sided bounds on the solution maximum.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClosedFormError {
    #[error("no spherical-cap graph exists for H = {mean_curvature}, R = {radius} (requires H > -a/R within this family)")]
    NoAdmissibleCap { mean_curvature: f64, radius: f64 },
    #[error("mean curvature H = {0} is outside [-1, 0), where the existence window is defined")]
    WindowOutOfRange(f64),
    #[error("height condition violated: 1 + H·C = {one_plus_hc:.6e} ≤ 0, the gradient bound is undefined")]
    HeightConditionViolated { one_plus_hc: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Spherical-cap graph `w(r) = c₀ + √(m² − r²)` over the disc `r ≤ R` with
/// `w(R) = a`, solving the constant-mean-curvature equation exactly.
#[derive(Clone, Copy, Debug)]
pub struct RadialCap {
    /// Prescribed hyperbolic mean curvature (`< 1`).
    pub mean_curvature: f64,
    /// Disc radius the cap is a graph over.
    pub radius: f64,
    /// Boundary height `a = w(R)`.
    pub boundary_height: f64,
    /// Euclidean radius `m` of the sphere; `m > R`.
    pub sphere_radius: f64,
    /// Height `c₀ = −mH` of the sphere centre.
    pub center_height: f64,
}

/// Switch to the linear-in-m branch when `|1 − H²|` is below this relative
/// threshold; the quadratic degenerates at `H = −1` (and `H = 1` is outside
/// the family anyway).
const DEGENERATE_QUADRATIC_TOL: f64 = 1e-8;

impl RadialCap {
    /// Construct the cap for mean curvature `H < 1` over a disc of radius
    /// `radius` with boundary height `boundary_height`.
    ///
    /// Internally normalises to boundary height 1 (vertical dilations are
    /// hyperbolic isometries) and rescales: `m` and `c₀` both scale linearly,
    /// and `c₀ = −mH` holds at any scale. The sphere radius solves
    /// `(1 − H²) m² − 2Hm − (1 + R²) = 0` with `w(R) = 1`; the admissible
    /// root is the one that satisfies the unsquared equation
    /// `−mH + √(m² − R²) = 1` with `m > R`.
    pub fn new(
        mean_curvature: f64,
        radius: f64,
        boundary_height: f64,
    ) -> Result<Self, ClosedFormError> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(ClosedFormError::InvalidArgument(format!(
                "disc radius must be positive, got {radius}"
            )));
        }
        if !(boundary_height.is_finite() && boundary_height > 0.0) {
            return Err(ClosedFormError::InvalidArgument(format!(
                "boundary height must be positive, got {boundary_height}"
            )));
        }
        if !(mean_curvature < 1.0) {
            return Err(ClosedFormError::InvalidArgument(format!(
                "spherical-cap graphs require H < 1, got {mean_curvature}"
            )));
        }

        let h = mean_curvature;
        let r = radius / boundary_height;
        let lead = 1.0 - h * h;

        let mut candidates: Vec<f64> = Vec::with_capacity(2);
        if lead.abs() < DEGENERATE_QUADRATIC_TOL {
            // (1-H²) ≈ 0: the equation is linear, 2|H| m = 1 + R².
            candidates.push((1.0 + r * r) / (2.0 * h.abs()));
        } else {
            let disc = 1.0 + lead * r * r;
            if disc >= 0.0 {
                let sq = disc.sqrt();
                candidates.push((h + sq) / lead);
                candidates.push((h - sq) / lead);
            }
        }

        // Keep roots that solve the original (unsquared) boundary condition.
        let mut best: Option<f64> = None;
        for m in candidates {
            if !(m.is_finite() && m > r) {
                continue;
            }
            let residual = (-m * h + (m * m - r * r).sqrt() - 1.0).abs();
            if residual < 1e-9 * m.max(1.0) && best.map_or(true, |b| m > b) {
                best = Some(m);
            }
        }
        let m = best.ok_or(ClosedFormError::NoAdmissibleCap {
            mean_curvature,
            radius,
        })?;

        let sphere_radius = m * boundary_height;
        Ok(Self {
            mean_curvature,
            radius,
            boundary_height,
            sphere_radius,
            center_height: -sphere_radius * h,
        })
    }

    /// Cap height at radius `r ∈ [0, R]`.
    pub fn height(&self, r: f64) -> f64 {
        self.center_height + (self.sphere_radius * self.sphere_radius - r * r).sqrt()
    }

    /// Maximum height `w(0) = c₀ + m = m(1 − H)`.
    pub fn max_height(&self) -> f64 {
        self.center_height + self.sphere_radius
    }

    /// Radial slope magnitude `|w'(r)| = r/√(m² − r²)`.
    pub fn slope(&self, r: f64) -> f64 {
        r / (self.sphere_radius * self.sphere_radius - r * r).sqrt()
    }

    /// Residual of the mean-curvature equation at radius `r`, using analytic
    /// derivatives:
    /// `(1/r)(r w'/W)' + (2/w)(1/W − H)` with `W = √(1+w'²)`.
    /// Identically zero for an exact cap.
    pub fn equation_residual(&self, r: f64) -> f64 {
        let m = self.sphere_radius;
        let h = self.mean_curvature;
        let w = self.height(r);
        // w' = −r/√(m²−r²) gives W = m/√(m²−r²) and r w'/W = −r²/m,
        // so div(Dw/W) = (1/r)(r w'/W)' = −2/m for every r (including r = 0).
        let div_term = -2.0 / m;
        let root = (m * m - r * r).sqrt();
        div_term + (2.0 / w) * (root / m - h)
    }
}

/// Right-hand side of the solvability window: for `−1 ≤ H < 0` a solution
/// exists on every strictly convex domain whose circumradius satisfies
/// `R² < −2 − 1/H + 2√(H/(H−1))`.
pub fn existence_window(mean_curvature: f64) -> Result<f64, ClosedFormError> {
    let h = mean_curvature;
    if !(-1.0..0.0).contains(&h) {
        return Err(ClosedFormError::WindowOutOfRange(h));
    }
    Ok(-2.0 - 1.0 / h + 2.0 * (h / (h - 1.0)).sqrt())
}

/// Gradient estimate in terms of the solution maximum: with
/// `C = u_M²/((1−H) a²)`, every solution on a strictly convex domain obeys
/// `|Du| ≤ √(C² − (1+HC)²)/(1+HC)` provided `1 + HC > 0` (automatic for
/// `0 ≤ H < 1`; equivalent to `u_M < √((H−1)/H)·a` for `H < 0`).
pub fn gradient_bound(
    mean_curvature: f64,
    u_max: f64,
    boundary_height: f64,
) -> Result<f64, ClosedFormError> {
    let h = mean_curvature;
    let a = boundary_height;
    if !(h < 1.0) {
        return Err(ClosedFormError::InvalidArgument(format!(
            "gradient bound requires H < 1, got {h}"
        )));
    }
    if !(a > 0.0) || !(u_max >= a) {
        return Err(ClosedFormError::InvalidArgument(format!(
            "need u_max ≥ a > 0, got u_max = {u_max}, a = {a}"
        )));
    }
    let c = u_max * u_max / ((1.0 - h) * a * a);
    let one_plus_hc = 1.0 + h * c;
    if one_plus_hc <= 0.0 {
        return Err(ClosedFormError::HeightConditionViolated { one_plus_hc });
    }
    Ok((c * c - one_plus_hc * one_plus_hc).max(0.0).sqrt() / one_plus_hc)
}

/// Gradient bound `|Du| ≤ √(1−H²)/H` valid for `0 < H < 1` on strictly
/// convex domains; `+∞` (no constraint) outside that range.
pub fn small_height_gradient_bound(mean_curvature: f64) -> f64 {
    let h = mean_curvature;
    if h > 0.0 && h < 1.0 {
        (1.0 - h * h).sqrt() / h
    } else {
        f64::INFINITY
    }
}

/// Lower bound `u_M ≥ (1−H)/κ₀` on the solution maximum, with `κ₀` the
/// maximum boundary curvature.
pub fn u_max_lower_bound(mean_curvature: f64, kappa_max: f64) -> Result<f64, ClosedFormError> {
    if !(mean_curvature < 1.0) || !(kappa_max > 0.0) {
        return Err(ClosedFormError::InvalidArgument(format!(
            "lower bound requires H < 1 and κ₀ > 0, got H = {mean_curvature}, κ₀ = {kappa_max}"
        )));
    }
    Ok((1.0 - mean_curvature) / kappa_max)
}

/// Upper bound `u_M < m(1−H)` from the spherical cap over the circumscribed
/// disc of radius `circumradius`.
pub fn u_max_upper_bound(
    mean_curvature: f64,
    circumradius: f64,
    boundary_height: f64,
) -> Result<f64, ClosedFormError> {
    let cap = RadialCap::new(mean_curvature, circumradius, boundary_height)?;
    Ok(cap.max_height())
}

/// All explicit bounds evaluated for one problem instance; entries are `NaN`
/// or `+∞` where the corresponding hypothesis fails.
#[derive(Clone, Copy, Debug)]
pub struct BoundSet {
    /// `C = u_M²/((1−H) a²)`.
    pub height_ratio: f64,
    /// Gradient estimate from `C`; `NaN` when `1 + HC ≤ 0`.
    pub grad_bound: f64,
    /// `√(1−H²)/H` for `0 < H < 1`, else `+∞`.
    pub small_height_bound: f64,
    /// `(1−H)/κ₀`.
    pub u_max_lower: f64,
    /// `m(1−H)` from the circumscribed cap; `NaN` when no cap exists.
    pub u_max_upper: f64,
    /// Existence window for `−1 ≤ H < 0`, else `+∞` (no constraint used).
    pub window_r2: f64,
}

impl BoundSet {
    pub fn evaluate(
        mean_curvature: f64,
        boundary_height: f64,
        circumradius: f64,
        kappa_max: f64,
        u_max: f64,
    ) -> Self {
        let h = mean_curvature;
        let a = boundary_height;
        let height_ratio = u_max * u_max / ((1.0 - h) * a * a);
        BoundSet {
            height_ratio,
            grad_bound: gradient_bound(h, u_max, a).unwrap_or(f64::NAN),
            small_height_bound: small_height_gradient_bound(h),
            u_max_lower: (1.0 - h) / kappa_max,
            u_max_upper: u_max_upper_bound(h, circumradius, a).unwrap_or(f64::NAN),
            window_r2: existence_window(h).unwrap_or(f64::INFINITY),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn minimal_cap_over_unit_disc() {
        // H = 0, R = 1: c₀ = 0, m² = 1 + R² = 2.
        let cap = RadialCap::new(0.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(cap.sphere_radius, 2f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(cap.center_height, 0.0, epsilon = 1e-12);
        assert_relative_eq!(cap.max_height(), 1.41421, epsilon = 1e-5);
        assert_relative_eq!(cap.height(1.0), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn degenerate_quadratic_at_h_minus_one() {
        // H = −1 kills the quadratic's leading term; m = (1+R²)/2.
        let cap = RadialCap::new(-1.0, 0.6, 1.0).unwrap();
        assert_relative_eq!(cap.sphere_radius, 0.68, epsilon = 1e-12);
        assert_relative_eq!(cap.center_height, 0.68, epsilon = 1e-12);
        assert_relative_eq!(cap.max_height(), 1.36, epsilon = 1e-12);
        // Continuity across the degenerate-branch switch.
        let near = RadialCap::new(-1.0 + 1e-10, 0.6, 1.0).unwrap();
        assert_relative_eq!(near.sphere_radius, 0.68, epsilon = 1e-6);
    }

    #[test]
    fn positive_mean_curvature_cap() {
        // H = 0.5, R = 1: positive root of 0.75 m² − m − 2 = 0.
        let cap = RadialCap::new(0.5, 1.0, 1.0).unwrap();
        assert_relative_eq!(cap.sphere_radius, 2.43050, epsilon = 1e-5);
        assert_relative_eq!(cap.center_height, -1.21525, epsilon = 1e-5);
        assert_relative_eq!(cap.max_height(), 1.21525, epsilon = 1e-5);
    }

    #[test]
    fn no_cap_outside_family() {
        // H ≤ −1/R: the hemisphere limit; no graph with w(R) = 1.
        assert!(matches!(
            RadialCap::new(-1.0, 1.0, 1.0),
            Err(ClosedFormError::NoAdmissibleCap { .. })
        ));
        assert!(matches!(
            RadialCap::new(-2.0, 1.0, 1.0),
            Err(ClosedFormError::NoAdmissibleCap { .. })
        ));
        assert!(RadialCap::new(1.5, 1.0, 1.0).is_err());
    }

    #[test]
    fn boundary_height_scaling_is_a_dilation() {
        let unit = RadialCap::new(-0.5, 0.6, 1.0).unwrap();
        let scaled = RadialCap::new(-0.5, 1.2, 2.0).unwrap();
        assert_relative_eq!(scaled.sphere_radius, 2.0 * unit.sphere_radius, epsilon = 1e-12);
        assert_relative_eq!(scaled.center_height, 2.0 * unit.center_height, epsilon = 1e-12);
        assert_relative_eq!(scaled.max_height(), 2.0 * unit.max_height(), epsilon = 1e-12);
        assert_relative_eq!(scaled.height(scaled.radius), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn existence_window_reference_values() {
        assert_relative_eq!(existence_window(-1.0).unwrap(), 2f64.sqrt() - 1.0, epsilon = 1e-12);
        assert_relative_eq!(existence_window(-1.0).unwrap(), 0.41421, epsilon = 1e-5);
        assert_relative_eq!(existence_window(-0.5).unwrap(), 2.0 / 3f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(existence_window(-0.5).unwrap(), 1.15470, epsilon = 1e-5);
        let near_zero = existence_window(-0.01).unwrap();
        assert_relative_eq!(near_zero, 98.199, max_relative = 1e-4);
        assert!(near_zero > existence_window(-0.5).unwrap());
        assert!(existence_window(0.0).is_err());
        assert!(existence_window(-1.01).is_err());
        assert!(existence_window(0.3).is_err());
    }

    #[test]
    fn gradient_bound_reference_values() {
        // H = 0, u_M = √2: C = 2, bound = √3. The exact cap's boundary slope
        // 1.0 sits below it.
        let b = gradient_bound(0.0, 2f64.sqrt(), 1.0).unwrap();
        assert_relative_eq!(b, 3f64.sqrt(), epsilon = 1e-12);
        let cap = RadialCap::new(0.0, 1.0, 1.0).unwrap();
        assert!(cap.slope(1.0) <= b);

        // H = −1, u_M = 1.36: C = 0.9248, bound ≈ 12.257; cap slope 1.875.
        let b = gradient_bound(-1.0, 1.36, 1.0).unwrap();
        assert_relative_eq!(b, 12.257, max_relative = 1e-4);
        let cap = RadialCap::new(-1.0, 0.6, 1.0).unwrap();
        assert_relative_eq!(cap.slope(0.6), 1.875, epsilon = 1e-12);
        assert!(cap.slope(0.6) <= b);

        // u_M ≥ √((H−1)/H)·a makes 1 + HC ≤ 0: undefined, reported as such.
        assert!(matches!(
            gradient_bound(-0.5, 1.8, 1.0),
            Err(ClosedFormError::HeightConditionViolated { .. })
        ));
    }

    #[test]
    fn small_height_gradient_bound_values() {
        assert_relative_eq!(small_height_gradient_bound(0.5), 3f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(small_height_gradient_bound(0.8), 0.75, epsilon = 1e-12);
        assert!(small_height_gradient_bound(-0.3).is_infinite());
        assert!(small_height_gradient_bound(1.0).is_infinite());
    }

    #[test]
    fn u_max_bounds_reference_values() {
        // κ₀ = 1/0.6, H = −1: lower bound 1.2; the cap's maximum 1.36 obeys it.
        let lb = u_max_lower_bound(-1.0, 1.0 / 0.6).unwrap();
        assert_relative_eq!(lb, 1.2, epsilon = 1e-12);
        assert!(RadialCap::new(-1.0, 0.6, 1.0).unwrap().max_height() >= lb);

        let lb = u_max_lower_bound(0.0, 1.0).unwrap();
        assert_relative_eq!(lb, 1.0, epsilon = 1e-12);
        assert!(2f64.sqrt() >= lb);

        let lb = u_max_lower_bound(0.5, 1.0).unwrap();
        assert_relative_eq!(lb, 0.5, epsilon = 1e-12);
        assert!(RadialCap::new(0.5, 1.0, 1.0).unwrap().max_height() >= lb);

        assert_relative_eq!(u_max_upper_bound(-1.0, 0.6, 1.0).unwrap(), 1.36, epsilon = 1e-12);
        assert!(u_max_upper_bound(-1.0, 0.6, 1.0).unwrap() < 2f64.sqrt());
        assert_relative_eq!(
            u_max_upper_bound(0.0, 1.0, 1.0).unwrap(),
            2f64.sqrt(),
            epsilon = 1e-12
        );
        // Near the horosphere the bound stays small and positive.
        let ub = u_max_upper_bound(0.99, 1.0, 1.0).unwrap();
        assert!(ub > 1.0 && ub < 1.2, "u_max upper bound = {ub}");
    }

    #[test]
    fn bound_set_collects_everything() {
        let b = BoundSet::evaluate(-1.0, 1.0, 0.6, 1.0 / 0.6, 1.36);
        assert_relative_eq!(b.u_max_lower, 1.2, epsilon = 1e-12);
        assert_relative_eq!(b.u_max_upper, 1.36, epsilon = 1e-12);
        assert_relative_eq!(b.grad_bound, 12.257, max_relative = 1e-4);
        assert!(b.small_height_bound.is_infinite());
        assert_relative_eq!(b.window_r2, 2f64.sqrt() - 1.0, epsilon = 1e-12);
    }

    proptest! {
        /// Substitution identity: an exact cap satisfies the equation to
        /// near machine precision at every radius.
        #[test]
        fn cap_satisfies_equation(
            h in -0.99f64..0.95,
            radius in 0.2f64..2.0,
            frac in 0.0f64..1.0,
        ) {
            prop_assume!(h > -1.0 / radius + 0.05);
            let cap = RadialCap::new(h, radius, 1.0).unwrap();
            let r = frac * radius;
            prop_assert!(cap.equation_residual(r).abs() < 1e-10,
                "residual {} at r = {}", cap.equation_residual(r), r);
        }

        /// The window bound is always below 1/H² (so the circumscribed disc
        /// admits a cap: R² < 1/H² means −1/R < H).
        #[test]
        fn window_below_inverse_h_squared(h in -1.0f64..-0.01) {
            let w = existence_window(h).unwrap();
            prop_assert!(w < 1.0 / (h * h), "window {} ≥ 1/H² = {}", w, 1.0 / (h * h));
        }

        /// Inside the window the cap satisfies m < 1/√(H² − H), which is the
        /// chain that makes the gradient estimate applicable at u_M = m(1−H).
        #[test]
        fn cap_radius_chain_inside_window(h in -1.0f64..-0.01, frac in 0.05f64..0.95) {
            let w = existence_window(h).unwrap();
            let radius = (frac * w).sqrt();
            let cap = RadialCap::new(h, radius, 1.0).unwrap();
            prop_assert!(cap.sphere_radius < 1.0 / (h * h - h).sqrt(),
                "m = {} breaks the chain at H = {}, R = {}", cap.sphere_radius, h, radius);
            // Equivalent form: the cap's maximum stays below √((H−1)/H).
            prop_assert!(cap.max_height() < ((h - 1.0) / h).sqrt() + 1e-12);
        }

        /// Lower height bound never exceeds the cap maximum on discs
        /// (κ₀ = 1/R there, and m > R).
        #[test]
        fn height_bounds_are_ordered_on_discs(h in -0.95f64..0.95, radius in 0.2f64..2.0) {
            prop_assume!(h > -1.0 / radius + 0.05);
            let cap = RadialCap::new(h, radius, 1.0).unwrap();
            let lower = u_max_lower_bound(h, 1.0 / radius).unwrap();
            prop_assert!(lower <= cap.max_height() + 1e-12);
        }
    }
}
