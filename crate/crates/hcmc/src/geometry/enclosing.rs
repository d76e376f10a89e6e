//! Minimum enclosing circle (Welzl-style incremental algorithm).
//!
//! Deterministic: the input is shuffled with a fixed-seed splitmix64 stream so
//! the expected-linear behaviour holds even for points given in convex
//! position (boundary samples are), while results stay reproducible.

use super::Point2;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Circle {
    pub center: Point2,
    pub radius: f64,
}

impl Circle {
    fn contains(&self, p: Point2) -> bool {
        // Multiplicative slack keeps cocircular inputs (disc boundaries) stable.
        self.center.dist(p) <= self.radius * (1.0 + 1e-14) + 1e-30
    }
}

/// Smallest circle enclosing all points. Panics on an empty slice.
pub fn enclosing_circle(points: &[Point2]) -> Circle {
    assert!(!points.is_empty(), "enclosing_circle of no points");
    let mut pts = points.to_vec();
    shuffle(&mut pts);

    let mut c = Circle {
        center: pts[0],
        radius: 0.0,
    };
    for i in 1..pts.len() {
        if !c.contains(pts[i]) {
            c = circle_with_one(&pts[..=i], pts[i]);
        }
    }
    c
}

/// Smallest circle of `points` with `p` known to lie on its boundary.
fn circle_with_one(points: &[Point2], p: Point2) -> Circle {
    let mut c = Circle {
        center: p,
        radius: 0.0,
    };
    for i in 0..points.len() {
        let q = points[i];
        if !c.contains(q) {
            c = if c.radius == 0.0 {
                diameter_circle(p, q)
            } else {
                circle_with_two(&points[..=i], p, q)
            };
        }
    }
    c
}

/// Smallest circle of `points` with `p`, `q` both on its boundary.
fn circle_with_two(points: &[Point2], p: Point2, q: Point2) -> Circle {
    let circ = diameter_circle(p, q);
    let mut left: Option<Circle> = None;
    let mut right: Option<Circle> = None;
    let pq = q - p;
    for &r in points {
        if circ.contains(r) {
            continue;
        }
        let cross = pq.cross(r - p);
        let Some(c) = circumcircle(p, q, r) else {
            continue;
        };
        let d = pq.cross(c.center - p);
        if cross > 0.0 && left.map_or(true, |l| d > pq.cross(l.center - p)) {
            left = Some(c);
        } else if cross < 0.0 && right.map_or(true, |rr| d < pq.cross(rr.center - p)) {
            right = Some(c);
        }
    }
    match (left, right) {
        (None, None) => circ,
        (Some(l), None) => l,
        (None, Some(r)) => r,
        (Some(l), Some(r)) => {
            if l.radius <= r.radius {
                l
            } else {
                r
            }
        }
    }
}

fn diameter_circle(a: Point2, b: Point2) -> Circle {
    let center = (a + b) * 0.5;
    Circle {
        center,
        radius: center.dist(a).max(center.dist(b)),
    }
}

fn circumcircle(a: Point2, b: Point2, c: Point2) -> Option<Circle> {
    // Shift to the bounding-box midpoint for conditioning.
    let ox = (a.x.min(b.x).min(c.x) + a.x.max(b.x).max(c.x)) / 2.0;
    let oy = (a.y.min(b.y).min(c.y) + a.y.max(b.y).max(c.y)) / 2.0;
    let (ax, ay) = (a.x - ox, a.y - oy);
    let (bx, by) = (b.x - ox, b.y - oy);
    let (cx, cy) = (c.x - ox, c.y - oy);
    let d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
    if d == 0.0 {
        return None;
    }
    let x = ((ax * ax + ay * ay) * (by - cy)
        + (bx * bx + by * by) * (cy - ay)
        + (cx * cx + cy * cy) * (ay - by))
        / d;
    let y = ((ax * ax + ay * ay) * (cx - bx)
        + (bx * bx + by * by) * (ax - cx)
        + (cx * cx + cy * cy) * (bx - ax))
        / d;
    let center = Point2::new(x + ox, y + oy);
    let radius = center.dist(a).max(center.dist(b)).max(center.dist(c));
    Some(Circle { center, radius })
}

/// Fisher–Yates with a fixed splitmix64 stream.
fn shuffle(pts: &mut [Point2]) {
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut next = move || {
        state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    };
    for i in (1..pts.len()).rev() {
        let j = (next() % (i as u64 + 1)) as usize;
        pts.swap(i, j);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn encloses_every_input_point() {
        let pts: Vec<Point2> = (0..200)
            .map(|i| {
                let t = i as f64 * 0.7;
                Point2::new(t.sin() * 3.0 + 0.2 * (3.1 * t).cos(), t.cos() * 1.5)
            })
            .collect();
        let c = enclosing_circle(&pts);
        for p in &pts {
            assert!(c.center.dist(*p) <= c.radius * (1.0 + 1e-12) + 1e-12);
        }
    }

    #[test]
    fn cocircular_points_give_their_circle() {
        let pts: Vec<Point2> = (0..512)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / 512.0;
                Point2::new(1.7 * t.cos() + 0.3, 1.7 * t.sin() - 0.1)
            })
            .collect();
        let c = enclosing_circle(&pts);
        assert_relative_eq!(c.radius, 1.7, epsilon = 1e-9);
        assert_relative_eq!(c.center.x, 0.3, epsilon = 1e-9);
        assert_relative_eq!(c.center.y, -0.1, epsilon = 1e-9);
    }

    #[test]
    fn two_points_give_diameter_circle() {
        let c = enclosing_circle(&[Point2::new(-1.0, 0.0), Point2::new(1.0, 0.0)]);
        assert_relative_eq!(c.radius, 1.0, epsilon = 1e-12);
        assert_relative_eq!(c.center.x, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn deterministic_across_calls() {
        let pts: Vec<Point2> = (0..100)
            .map(|i| Point2::new((i as f64 * 1.3).sin(), (i as f64 * 0.9).cos()))
            .collect();
        let a = enclosing_circle(&pts);
        let b = enclosing_circle(&pts);
        assert_eq!(a, b);
    }
}
