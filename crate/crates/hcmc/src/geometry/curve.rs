//! Closed boundary curves with two derivatives: circles, axis-aligned
//! ellipses, and splined point lists.

use super::{Point2, PeriodicSpline};

#[derive(Clone, Debug)]
pub enum BoundaryCurve {
    Circle {
        radius: f64,
        center: Point2,
    },
    /// `(cx + p cos t, cy + q sin t)`, counter-clockwise.
    Ellipse {
        semi_x: f64,
        semi_y: f64,
        center: Point2,
    },
    Spline(PeriodicSpline),
}

impl BoundaryCurve {
    /// Length of the parameter interval (2π for the analytic curves, total
    /// chord length for splines).
    pub fn period(&self) -> f64 {
        match self {
            BoundaryCurve::Circle { .. } | BoundaryCurve::Ellipse { .. } => std::f64::consts::TAU,
            BoundaryCurve::Spline(s) => s.period(),
        }
    }

    pub fn point(&self, t: f64) -> Point2 {
        match self {
            BoundaryCurve::Circle { radius, center } => {
                Point2::new(center.x + radius * t.cos(), center.y + radius * t.sin())
            }
            BoundaryCurve::Ellipse {
                semi_x,
                semi_y,
                center,
            } => Point2::new(center.x + semi_x * t.cos(), center.y + semi_y * t.sin()),
            BoundaryCurve::Spline(s) => s.point(t),
        }
    }

    pub fn velocity(&self, t: f64) -> Point2 {
        match self {
            BoundaryCurve::Circle { radius, .. } => {
                Point2::new(-radius * t.sin(), radius * t.cos())
            }
            BoundaryCurve::Ellipse { semi_x, semi_y, .. } => {
                Point2::new(-semi_x * t.sin(), semi_y * t.cos())
            }
            BoundaryCurve::Spline(s) => s.velocity(t),
        }
    }

    pub fn acceleration(&self, t: f64) -> Point2 {
        match self {
            BoundaryCurve::Circle { radius, .. } => {
                Point2::new(-radius * t.cos(), -radius * t.sin())
            }
            BoundaryCurve::Ellipse { semi_x, semi_y, .. } => {
                Point2::new(-semi_x * t.cos(), -semi_y * t.sin())
            }
            BoundaryCurve::Spline(s) => s.acceleration(t),
        }
    }

    /// Signed curvature; positive for counter-clockwise convex curves.
    pub fn curvature(&self, t: f64) -> f64 {
        match self {
            BoundaryCurve::Circle { radius, .. } => 1.0 / radius,
            _ => {
                let v = self.velocity(t);
                let a = self.acceleration(t);
                v.cross(a) / v.norm().powi(3)
            }
        }
    }

    /// Outward unit normal for counter-clockwise curves.
    pub fn outward_normal(&self, t: f64) -> Point2 {
        let v = self.velocity(t);
        let n = Point2::new(v.y, -v.x);
        n * (1.0 / n.norm())
    }
}
