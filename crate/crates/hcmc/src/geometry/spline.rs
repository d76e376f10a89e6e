//! Periodic cubic spline through a closed list of plane points.
//!
//! Chord-length parameterization; the closing segment from the last point
//! back to the first is implicit. C² everywhere, which is exactly what the
//! curvature computation needs.

use super::{GeometryError, Point2};

#[derive(Clone, Debug)]
pub struct PeriodicSpline {
    points: Vec<Point2>,
    /// Knot parameters, `knots[i]` at `points[i]`; `knots[n]` is the period.
    knots: Vec<f64>,
    /// Second derivatives at the knots, one per point (periodic).
    second: Vec<Point2>,
}

impl PeriodicSpline {
    pub fn new(points: &[Point2]) -> Result<Self, GeometryError> {
        const MIN_POINTS: usize = 8;
        if points.len() < MIN_POINTS {
            return Err(GeometryError::TooFewPoints {
                min: MIN_POINTS,
                got: points.len(),
            });
        }
        // Normalise orientation to counter-clockwise (positive shoelace area).
        let mut pts: Vec<Point2> = points.to_vec();
        let area2: f64 = (0..pts.len())
            .map(|i| pts[i].cross(pts[(i + 1) % pts.len()]))
            .sum();
        if area2 == 0.0 {
            return Err(GeometryError::Degenerate(
                "boundary point list encloses zero area".into(),
            ));
        }
        if area2 < 0.0 {
            pts.reverse();
        }

        let n = pts.len();
        let mut knots = Vec::with_capacity(n + 1);
        knots.push(0.0);
        for i in 0..n {
            let step = pts[i].dist(pts[(i + 1) % n]);
            if step <= 0.0 {
                return Err(GeometryError::Degenerate(format!(
                    "repeated boundary point at index {i}"
                )));
            }
            knots.push(knots[i] + step);
        }

        // Periodic spline second derivatives: cyclic tridiagonal system
        //   (h_{i-1}/6) M_{i-1} + ((h_{i-1}+h_i)/3) M_i + (h_i/6) M_{i+1} = d_i
        // solved per coordinate.
        let h = |i: usize| knots[i + 1] - knots[i];
        let mut sub = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut sup = vec![0.0; n];
        let mut rhs_x = vec![0.0; n];
        let mut rhs_y = vec![0.0; n];
        for i in 0..n {
            let prev = (i + n - 1) % n;
            let hp = h(prev);
            let hi = h(i);
            sub[i] = hp / 6.0;
            diag[i] = (hp + hi) / 3.0;
            sup[i] = hi / 6.0;
            let next = (i + 1) % n;
            let d = (pts[next] - pts[i]) * (1.0 / hi) - (pts[i] - pts[prev]) * (1.0 / hp);
            rhs_x[i] = d.x;
            rhs_y[i] = d.y;
        }
        let mx = cyclic_tridiagonal(&sub, &diag, &sup, &rhs_x);
        let my = cyclic_tridiagonal(&sub, &diag, &sup, &rhs_y);
        let second = mx
            .into_iter()
            .zip(my)
            .map(|(x, y)| Point2::new(x, y))
            .collect();

        Ok(Self {
            points: pts,
            knots,
            second,
        })
    }

    pub fn period(&self) -> f64 {
        *self.knots.last().unwrap()
    }

    fn segment(&self, t: f64) -> (usize, f64) {
        let period = self.period();
        let t = t.rem_euclid(period);
        // knots is sorted; find i with knots[i] <= t < knots[i+1].
        let mut i = match self
            .knots
            .binary_search_by(|probe| probe.partial_cmp(&t).unwrap())
        {
            Ok(i) => i,
            Err(i) => i.saturating_sub(1),
        };
        if i >= self.points.len() {
            i = self.points.len() - 1;
        }
        (i, t - self.knots[i])
    }

    pub fn point(&self, t: f64) -> Point2 {
        let (i, s) = self.segment(t);
        let n = self.points.len();
        let h = self.knots[i + 1] - self.knots[i];
        let (p0, p1) = (self.points[i], self.points[(i + 1) % n]);
        let (m0, m1) = (self.second[i], self.second[(i + 1) % n]);
        let r = h - s;
        m0 * (r * r * r / (6.0 * h))
            + m1 * (s * s * s / (6.0 * h))
            + (p0 * (1.0 / h) - m0 * (h / 6.0)) * r
            + (p1 * (1.0 / h) - m1 * (h / 6.0)) * s
    }

    pub fn velocity(&self, t: f64) -> Point2 {
        let (i, s) = self.segment(t);
        let n = self.points.len();
        let h = self.knots[i + 1] - self.knots[i];
        let (p0, p1) = (self.points[i], self.points[(i + 1) % n]);
        let (m0, m1) = (self.second[i], self.second[(i + 1) % n]);
        let r = h - s;
        m0 * (-r * r / (2.0 * h))
            + m1 * (s * s / (2.0 * h))
            + (p1 - p0) * (1.0 / h)
            + (m0 - m1) * (h / 6.0)
    }

    pub fn acceleration(&self, t: f64) -> Point2 {
        let (i, s) = self.segment(t);
        let n = self.points.len();
        let h = self.knots[i + 1] - self.knots[i];
        let (m0, m1) = (self.second[i], self.second[(i + 1) % n]);
        m0 * ((h - s) / h) + m1 * (s / h)
    }
}

/// Solve a cyclic tridiagonal system by the Sherman–Morrison correction of
/// two ordinary Thomas solves. `sub[i]` couples unknown `i` to `i-1` (with
/// `sub[0]` the corner entry to `n-1`), `sup[i]` to `i+1` (with `sup[n-1]`
/// the corner entry to `0`).
fn cyclic_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    assert!(n >= 3);
    let alpha = sub[0]; // corner (0, n-1)
    let beta = sup[n - 1]; // corner (n-1, 0)
    let gamma = -diag[0];

    let mut d = diag.to_vec();
    d[0] -= gamma;
    d[n - 1] -= alpha * beta / gamma;

    let x = thomas(&sub[1..], &d, &sup[..n - 1], rhs);

    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = beta;
    let z = thomas(&sub[1..], &d, &sup[..n - 1], &u);

    let factor = (x[0] + alpha * x[n - 1] / gamma) / (1.0 + z[0] + alpha * z[n - 1] / gamma);
    x.iter().zip(z.iter()).map(|(xi, zi)| xi - factor * zi).collect()
}

/// Plain Thomas algorithm; `sub` and `sup` have length `n-1`.
fn thomas(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - sub[i - 1] * c[i - 1];
        if i < n - 1 {
            c[i] = sup[i] / m;
        }
        d[i] = (rhs[i] - sub[i - 1] * d[i - 1]) / m;
    }
    for i in (0..n - 1).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn circle_points(n: usize, r: f64) -> Vec<Point2> {
        (0..n)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / n as f64;
                Point2::new(r * t.cos(), r * t.sin())
            })
            .collect()
    }

    #[test]
    fn interpolates_given_points() {
        let pts = circle_points(32, 1.5);
        let s = PeriodicSpline::new(&pts).unwrap();
        for (i, p) in pts.iter().enumerate() {
            let t = s.knots[i];
            assert_relative_eq!(s.point(t).x, p.x, epsilon = 1e-12);
            assert_relative_eq!(s.point(t).y, p.y, epsilon = 1e-12);
        }
    }

    #[test]
    fn circle_spline_curvature_close_to_exact() {
        let pts = circle_points(128, 2.0);
        let s = PeriodicSpline::new(&pts).unwrap();
        for k in 0..50 {
            let t = s.period() * k as f64 / 50.0;
            let v = s.velocity(t);
            let a = s.acceleration(t);
            let kappa = v.cross(a) / v.norm().powi(3);
            assert_relative_eq!(kappa, 0.5, max_relative = 1e-3);
        }
    }

    #[test]
    fn clockwise_input_is_reversed() {
        let mut pts = circle_points(32, 1.0);
        pts.reverse();
        let s = PeriodicSpline::new(&pts).unwrap();
        let v = s.velocity(0.1);
        let a = s.acceleration(0.1);
        assert!(v.cross(a) > 0.0, "orientation not normalised to CCW");
    }

    #[test]
    fn too_few_points_rejected() {
        let pts = circle_points(5, 1.0);
        assert!(matches!(
            PeriodicSpline::new(&pts),
            Err(GeometryError::TooFewPoints { .. })
        ));
    }

    #[test]
    fn cyclic_tridiagonal_solves_reference_system() {
        // 4x4 cyclic system checked against a dense solve by hand.
        let sub = [1.0, 1.0, 1.0, 1.0];
        let diag = [4.0, 4.0, 4.0, 4.0];
        let sup = [1.0, 1.0, 1.0, 1.0];
        let rhs = [1.0, 2.0, 3.0, 4.0];
        let x = cyclic_tridiagonal(&sub, &diag, &sup, &rhs);
        // Verify A x = rhs.
        let n = 4;
        for i in 0..n {
            let ax = sub[i] * x[(i + n - 1) % n] + diag[i] * x[i] + sup[i] * x[(i + 1) % n];
            assert_relative_eq!(ax, rhs[i], epsilon = 1e-12);
        }
    }
}
