//! Strictly convex planar domains and their triangulations.
//!
//! A domain is described by a closed parameterized boundary curve with two
//! continuous derivatives. Construction validates strict convexity (signed
//! curvature positive everywhere) by dense sampling; everything downstream —
//! curvature extrema, circumradius, meshing — works off the same curve.

mod curve;
mod delaunay;
mod enclosing;
mod mesh;
mod spline;

pub use curve::BoundaryCurve;
pub use delaunay::delaunay_triangulation;
pub use enclosing::{enclosing_circle, Circle};
pub use mesh::{triangulate, Mesh, MAX_ELEMENT_BUDGET};
pub use spline::PeriodicSpline;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Number of dense boundary samples used for convexity checks, the
/// circumradius, diameter, and distance queries.
const BOUNDARY_SAMPLES: usize = 2048;

/// Relative convexity tolerance: curvature must exceed `CONVEXITY_RTOL / diam`
/// at every sample. Rejects flat segments while admitting boundaries whose
/// curvature is merely close to zero.
const CONVEXITY_RTOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("boundary curve is not strictly convex: min sampled curvature {min_kappa:.6e} is below the tolerance {tol:.6e}")]
    NotStrictlyConvex { min_kappa: f64, tol: f64 },
    #[error("degenerate domain: {0}")]
    Degenerate(String),
    #[error("boundary curve is not simple: total turning is {turning:.6} rad, expected 2π")]
    NotSimple { turning: f64 },
    #[error("boundary point list needs at least {min} points, got {got}")]
    TooFewPoints { min: usize, got: usize },
    #[error("mesh size h = {h} must be below diameter/4 = {limit:.6}")]
    MeshSizeTooLarge { h: f64, limit: f64 },
    #[error("mesh size h = {h} would need roughly {estimate} elements, over the budget of {budget}")]
    MeshBudgetExceeded { h: f64, estimate: usize, budget: usize },
}

/// A point (or vector) in the Euclidean plane.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the cross product, positive when `o` is
    /// counter-clockwise from `self`.
    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn dist(self, o: Point2) -> f64 {
        (self - o).norm()
    }
}

impl std::ops::Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl std::ops::Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl std::ops::Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

impl std::ops::Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

/// Signed area of the triangle `(p0, p1, p2)`, positive when counter-clockwise.
pub fn triangle_area(p0: Point2, p1: Point2, p2: Point2) -> f64 {
    0.5 * (p1 - p0).cross(p2 - p0)
}

/// Domain family, kept for reporting and configuration echo.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainKind {
    Disc,
    Ellipse,
    GenericCurve,
}

/// A bounded strictly convex planar domain, represented by its boundary curve.
///
/// Holds a dense boundary sample (uniform in the curve parameter) used by the
/// convexity validation, the circumradius, the diameter, and point queries.
#[derive(Clone, Debug)]
pub struct DomainSpec {
    kind: DomainKind,
    curve: BoundaryCurve,
    samples: Vec<Point2>,
    /// Cumulative arclength at the dense samples; last entry is the perimeter.
    cum_arclen: Vec<f64>,
    diameter: f64,
    kappa_min: f64,
    kappa_max: f64,
}

impl DomainSpec {
    /// Disc of the given radius centred at the origin.
    pub fn disc(radius: f64) -> Result<Self, GeometryError> {
        Self::disc_at(radius, Point2::default())
    }

    pub fn disc_at(radius: f64, center: Point2) -> Result<Self, GeometryError> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(GeometryError::Degenerate(format!(
                "disc radius must be positive, got {radius}"
            )));
        }
        Self::from_curve(DomainKind::Disc, BoundaryCurve::Circle { radius, center })
    }

    /// Axis-aligned ellipse `x²/p² + y²/q² = 1` centred at the origin.
    pub fn ellipse(semi_x: f64, semi_y: f64) -> Result<Self, GeometryError> {
        Self::ellipse_at(semi_x, semi_y, Point2::default())
    }

    pub fn ellipse_at(semi_x: f64, semi_y: f64, center: Point2) -> Result<Self, GeometryError> {
        if !(semi_x.is_finite() && semi_y.is_finite() && semi_x > 0.0 && semi_y > 0.0) {
            return Err(GeometryError::Degenerate(format!(
                "ellipse semi-axes must be positive, got ({semi_x}, {semi_y})"
            )));
        }
        Self::from_curve(
            DomainKind::Ellipse,
            BoundaryCurve::Ellipse {
                semi_x,
                semi_y,
                center,
            },
        )
    }

    /// Domain bounded by a closed curve through the given points, interpolated
    /// with a periodic cubic spline (chord-length parameterization). The point
    /// list is closed implicitly; orientation is normalised to
    /// counter-clockwise.
    pub fn from_boundary_points(points: &[Point2]) -> Result<Self, GeometryError> {
        let spline = PeriodicSpline::new(points)?;
        Self::from_curve(DomainKind::GenericCurve, BoundaryCurve::Spline(spline))
    }

    fn from_curve(kind: DomainKind, curve: BoundaryCurve) -> Result<Self, GeometryError> {
        let n = BOUNDARY_SAMPLES;
        let period = curve.period();
        let mut samples = Vec::with_capacity(n);
        let mut speeds = Vec::with_capacity(n + 1);
        let mut kappa_min = f64::INFINITY;
        let mut kappa_max = f64::NEG_INFINITY;
        let mut turning = 0.0;
        let dt = period / n as f64;
        for i in 0..n {
            let t = i as f64 * dt;
            samples.push(curve.point(t));
            let speed = curve.velocity(t).norm();
            if speed <= 0.0 || !speed.is_finite() {
                return Err(GeometryError::Degenerate(
                    "boundary parameterization has a stationary or non-finite point".into(),
                ));
            }
            speeds.push(speed);
            let k = curve.curvature(t);
            kappa_min = kappa_min.min(k);
            kappa_max = kappa_max.max(k);
            // dθ/dt = κ |γ'|: integrating gives the total turning angle.
            turning += k * speed * dt;
        }
        speeds.push(speeds[0]);

        let mut diameter = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                diameter = diameter.max(samples[i].dist(samples[j]));
            }
        }
        if diameter <= 0.0 {
            return Err(GeometryError::Degenerate("boundary has zero diameter".into()));
        }

        let tol = CONVEXITY_RTOL / diameter;
        if !(kappa_min > tol) {
            return Err(GeometryError::NotStrictlyConvex {
                min_kappa: kappa_min,
                tol,
            });
        }
        // A closed curve with κ > 0 everywhere is simple iff its total turning
        // is exactly one full revolution.
        if (turning - std::f64::consts::TAU).abs() > 1e-3 {
            return Err(GeometryError::NotSimple { turning });
        }

        // Trapezoidal cumulative arclength on the sample grid.
        let mut cum_arclen = Vec::with_capacity(n + 1);
        let mut acc = 0.0;
        cum_arclen.push(0.0);
        for i in 0..n {
            acc += 0.5 * (speeds[i] + speeds[i + 1]) * dt;
            cum_arclen.push(acc);
        }

        Ok(Self {
            kind,
            curve,
            samples,
            cum_arclen,
            diameter,
            kappa_min,
            kappa_max,
        })
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    pub fn curve(&self) -> &BoundaryCurve {
        &self.curve
    }

    /// Dense boundary sample, uniform in the curve parameter.
    pub fn boundary_samples(&self) -> &[Point2] {
        &self.samples
    }

    pub fn perimeter(&self) -> f64 {
        *self.cum_arclen.last().unwrap()
    }

    /// Maximum pairwise distance of boundary points.
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// `(κ_min, κ₀)` over the boundary, accurate to the sampling resolution.
    pub fn curvature_extrema(&self) -> (f64, f64) {
        (self.kappa_min, self.kappa_max)
    }

    /// Minimum enclosing circle of the dense boundary sample.
    pub fn circumcircle(&self) -> Circle {
        enclosing_circle(&self.samples)
    }

    /// Radius of the minimum enclosing circle of the boundary.
    pub fn circumradius(&self) -> f64 {
        self.circumcircle().radius
    }

    /// Curve parameter at a prescribed arclength from the parameter origin,
    /// by inversion of the cumulative arclength table.
    pub fn param_at_arclength(&self, s: f64) -> f64 {
        let total = self.perimeter();
        let s = s.rem_euclid(total);
        let n = self.samples.len();
        let idx = match self
            .cum_arclen
            .binary_search_by(|probe| probe.partial_cmp(&s).unwrap())
        {
            Ok(i) => i,
            Err(i) => i.saturating_sub(1),
        };
        let idx = idx.min(n - 1);
        let s0 = self.cum_arclen[idx];
        let s1 = self.cum_arclen[idx + 1];
        let frac = if s1 > s0 { (s - s0) / (s1 - s0) } else { 0.0 };
        let dt = self.curve.period() / n as f64;
        (idx as f64 + frac) * dt
    }

    /// True when `p` lies inside the (open) domain.
    pub fn contains(&self, p: Point2) -> bool {
        match &self.curve {
            BoundaryCurve::Circle { radius, center } => p.dist(*center) < *radius,
            BoundaryCurve::Ellipse {
                semi_x,
                semi_y,
                center,
            } => {
                let dx = (p.x - center.x) / semi_x;
                let dy = (p.y - center.y) / semi_y;
                dx * dx + dy * dy < 1.0
            }
            BoundaryCurve::Spline(_) => {
                // Crossing-number test against the dense boundary polygon.
                let mut inside = false;
                let n = self.samples.len();
                let mut j = n - 1;
                for i in 0..n {
                    let (a, b) = (self.samples[i], self.samples[j]);
                    if (a.y > p.y) != (b.y > p.y) {
                        let x_cross = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                        if p.x < x_cross {
                            inside = !inside;
                        }
                    }
                    j = i;
                }
                inside
            }
        }
    }

    /// Distance from `p` to the boundary curve (via the dense polygon; the
    /// chord error is far below any mesh scale).
    pub fn boundary_distance(&self, p: Point2) -> f64 {
        match &self.curve {
            BoundaryCurve::Circle { radius, center } => (p.dist(*center) - radius).abs(),
            _ => {
                let n = self.samples.len();
                let mut best = f64::INFINITY;
                for i in 0..n {
                    let a = self.samples[i];
                    let b = self.samples[(i + 1) % n];
                    best = best.min(point_segment_distance(p, a, b));
                }
                best
            }
        }
    }
}

fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let ab = b - a;
    let len_sq = ab.norm_sq();
    if len_sq == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len_sq).clamp(0.0, 1.0);
    p.dist(a + ab * t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn disc_curvature_is_inverse_radius() {
        let d = DomainSpec::disc(1.0).unwrap();
        let (kmin, kmax) = d.curvature_extrema();
        assert_relative_eq!(kmin, 1.0, max_relative = 1e-12);
        assert_relative_eq!(kmax, 1.0, max_relative = 1e-12);

        let d = DomainSpec::disc(0.6).unwrap();
        let (kmin, kmax) = d.curvature_extrema();
        // 1/0.6 to four significant digits.
        assert_relative_eq!(kmin, 1.6667, max_relative = 5e-5);
        assert_relative_eq!(kmax, 1.6667, max_relative = 5e-5);
    }

    #[test]
    fn ellipse_curvature_at_axis_endpoints() {
        let d = DomainSpec::ellipse(2.0, 1.0).unwrap();
        // κ = pq / (p² sin²t + q² cos²t)^{3/2}: 2.0 at (±2, 0), 0.25 at (0, ±1).
        assert_relative_eq!(d.curve().curvature(0.0), 2.0, max_relative = 1e-12);
        assert_relative_eq!(
            d.curve().curvature(std::f64::consts::FRAC_PI_2),
            0.25,
            max_relative = 1e-12
        );
        let (kmin, kmax) = d.curvature_extrema();
        assert_relative_eq!(kmin, 0.25, max_relative = 1e-6);
        assert_relative_eq!(kmax, 2.0, max_relative = 1e-6);
    }

    #[test]
    fn unit_ellipse_reduces_to_circle() {
        let d = DomainSpec::ellipse(1.0, 1.0).unwrap();
        let (kmin, kmax) = d.curvature_extrema();
        assert_relative_eq!(kmin, 1.0, max_relative = 1e-10);
        assert_relative_eq!(kmax, 1.0, max_relative = 1e-10);
    }

    #[test]
    fn degenerate_ellipse_is_rejected() {
        assert!(matches!(
            DomainSpec::ellipse(1.0, 0.0),
            Err(GeometryError::Degenerate(_))
        ));
        assert!(matches!(
            DomainSpec::disc(-1.0),
            Err(GeometryError::Degenerate(_))
        ));
    }

    #[test]
    fn curvature_matches_finite_differences_of_parameterization() {
        // Central finite differences of the parameterization converge at
        // O(spacing²) to the analytic curvature.
        let d = DomainSpec::ellipse(2.0, 1.0).unwrap();
        let curve = d.curve();
        let kappa_fd = |t: f64, s: f64| {
            let p0 = curve.point(t - s);
            let p1 = curve.point(t);
            let p2 = curve.point(t + s);
            let v = (p2 - p0) * (0.5 / s);
            let acc = (p2 - p1 + p0 - p1) * (1.0 / (s * s));
            v.cross(acc) / v.norm().powi(3)
        };
        let t = 0.7;
        let exact = curve.curvature(t);
        let e1 = (kappa_fd(t, 1e-3) - exact).abs();
        let e2 = (kappa_fd(t, 5e-4) - exact).abs();
        assert!(e1 < 1e-4, "coarse FD error too large: {e1}");
        // Halving spacing should reduce the error by ≈4.
        assert!(e2 < e1 / 2.5, "FD curvature not O(s²): e1={e1}, e2={e2}");
    }

    #[test]
    fn circumradius_of_standard_domains() {
        assert_relative_eq!(DomainSpec::disc(1.0).unwrap().circumradius(), 1.0, epsilon = 1e-9);
        assert_relative_eq!(
            DomainSpec::ellipse(2.0, 1.0).unwrap().circumradius(),
            2.0,
            epsilon = 1e-7
        );
        assert_relative_eq!(
            DomainSpec::ellipse(0.5, 0.4).unwrap().circumradius(),
            0.5,
            epsilon = 1e-7
        );
    }

    #[test]
    fn spline_domain_from_ellipse_samples() {
        let n = 64;
        let pts: Vec<Point2> = (0..n)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / n as f64;
                Point2::new(2.0 * t.cos(), t.sin())
            })
            .collect();
        let d = DomainSpec::from_boundary_points(&pts).unwrap();
        assert_eq!(d.kind(), DomainKind::GenericCurve);
        let (kmin, kmax) = d.curvature_extrema();
        assert_relative_eq!(kmin, 0.25, max_relative = 2e-2);
        assert_relative_eq!(kmax, 2.0, max_relative = 2e-2);
        assert_relative_eq!(d.circumradius(), 2.0, max_relative = 1e-4);
    }

    #[test]
    fn non_convex_point_curve_is_rejected() {
        // A five-pointed star: wildly non-convex.
        let n = 40;
        let pts: Vec<Point2> = (0..n)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / n as f64;
                let r = 1.0 + 0.5 * (5.0 * t).cos();
                Point2::new(r * t.cos(), r * t.sin())
            })
            .collect();
        assert!(matches!(
            DomainSpec::from_boundary_points(&pts),
            Err(GeometryError::NotStrictlyConvex { .. })
        ));
    }

    #[test]
    fn contains_and_boundary_distance() {
        let d = DomainSpec::ellipse(0.5, 0.4).unwrap();
        assert!(d.contains(Point2::new(0.0, 0.0)));
        assert!(!d.contains(Point2::new(0.6, 0.0)));
        assert_relative_eq!(
            d.boundary_distance(Point2::new(0.0, 0.0)),
            0.4,
            max_relative = 1e-5
        );
    }

    proptest! {
        /// The minimum enclosing circle must cover the two farthest-apart
        /// boundary points, so its radius is at least half the diameter.
        #[test]
        fn circumradius_dominates_half_diameter(p in 0.3f64..3.0, q in 0.3f64..3.0) {
            let d = DomainSpec::ellipse(p, q).unwrap();
            let r = d.circumradius();
            prop_assert!(r >= d.diameter() / 2.0 - 1e-9,
                "R = {} < diameter/2 = {}", r, d.diameter() / 2.0);
        }
    }
}
