//! Bowyer–Watson Delaunay triangulation with adjacency-walk point location.
//!
//! Points are inserted into a super-triangle; each insertion walks from the
//! last created triangle to the one containing the point, flood-fills the
//! connected set of triangles whose circumcircle contains it, and fans the
//! star-shaped cavity. Near-linear for spatially coherent input (boundary
//! rings and lattice rows are), with a linear-scan fallback if a walk ever
//! fails to terminate.
//!
//! For points in convex position plus interior points (the meshing use case)
//! the result covers the convex hull of the input, so no edge constraints
//! are needed: the hull edges of a strictly convex boundary sample are
//! exactly the boundary polygon edges.

use super::{triangle_area, Point2};

/// Neighbor slot: triangle index and the edge index within it.
type Neighbor = Option<(usize, usize)>;

struct Triangulation {
    points: Vec<Point2>,
    tris: Vec<[usize; 3]>,
    /// `adj[t][e]` is the triangle across edge `(tris[t][e], tris[t][(e+1)%3])`.
    adj: Vec<[Neighbor; 3]>,
    alive: Vec<bool>,
    hint: usize,
}

impl Triangulation {
    fn orient(&self, a: usize, b: usize, p: Point2) -> f64 {
        triangle_area(self.points[a], self.points[b], p)
    }

    /// Walk from the hint to a triangle containing `p` (boundary counts as
    /// inside). Falls back to a linear scan if the walk does not terminate.
    fn locate(&self, p: Point2) -> usize {
        let mut t = self.hint;
        if !self.alive[t] {
            t = (0..self.tris.len()).rfind(|&i| self.alive[i]).expect("live triangle");
        }
        let mut steps = 0usize;
        let max_steps = 4 * self.tris.len() + 64;
        'walk: loop {
            let tri = self.tris[t];
            for e in 0..3 {
                let (a, b) = (tri[e], tri[(e + 1) % 3]);
                if self.orient(a, b, p) < 0.0 {
                    if let Some((n, _)) = self.adj[t][e] {
                        t = n;
                        steps += 1;
                        if steps > max_steps {
                            break 'walk;
                        }
                        continue 'walk;
                    }
                    // Outside the hull of the current triangulation: cannot
                    // happen inside the super-triangle; fall back.
                    break 'walk;
                }
            }
            return t;
        }
        // Robustness fallback: exhaustive containment scan.
        (0..self.tris.len())
            .find(|&i| {
                self.alive[i] && {
                    let tri = self.tris[i];
                    (0..3).all(|e| self.orient(tri[e], tri[(e + 1) % 3], p) >= 0.0)
                }
            })
            .expect("point must lie inside the super-triangle")
    }

    fn in_circumcircle(&self, t: usize, p: Point2) -> bool {
        let [ia, ib, ic] = self.tris[t];
        let (a, b, c) = (self.points[ia], self.points[ib], self.points[ic]);
        let (ax, ay) = (a.x - p.x, a.y - p.y);
        let (bx, by) = (b.x - p.x, b.y - p.y);
        let (cx, cy) = (c.x - p.x, c.y - p.y);
        let det = (ax * ax + ay * ay) * (bx * cy - cx * by)
            - (bx * bx + by * by) * (ax * cy - cx * ay)
            + (cx * cx + cy * cy) * (ax * by - bx * ay);
        det > 0.0
    }

    fn insert(&mut self, p_idx: usize) {
        let p = self.points[p_idx];
        let start = self.locate(p);

        // Flood-fill the connected bad set from the containing triangle. The
        // containing triangle always joins the cavity (the point must split
        // it even in cocircular tie cases).
        let mut bad = vec![start];
        let mut bad_mark = vec![false; self.tris.len()];
        bad_mark[start] = true;
        let mut stack = vec![start];
        while let Some(t) = stack.pop() {
            for e in 0..3 {
                if let Some((n, _)) = self.adj[t][e] {
                    if !bad_mark[n] && self.alive[n] && self.in_circumcircle(n, p) {
                        bad_mark[n] = true;
                        bad.push(n);
                        stack.push(n);
                    }
                }
            }
        }

        // Cavity boundary: edges of bad triangles whose neighbor is outside
        // the bad set. Oriented CCW around the cavity because triangles are.
        struct Rim {
            a: usize,
            b: usize,
            outside: Neighbor,
        }
        let mut rim = Vec::with_capacity(bad.len() + 2);
        for &t in &bad {
            for e in 0..3 {
                let outside = self.adj[t][e];
                let is_boundary = match outside {
                    Some((n, _)) => !bad_mark[n],
                    None => true,
                };
                if is_boundary {
                    rim.push(Rim {
                        a: self.tris[t][e],
                        b: self.tris[t][(e + 1) % 3],
                        outside,
                    });
                }
            }
        }

        for &t in &bad {
            self.alive[t] = false;
        }

        // Fan the cavity; link fans to the outside and to each other.
        let mut fan_of_start = std::collections::HashMap::with_capacity(rim.len());
        let mut fans = Vec::with_capacity(rim.len());
        for r in &rim {
            let t = self.tris.len();
            self.tris.push([r.a, r.b, p_idx]);
            self.adj.push([r.outside, None, None]);
            self.alive.push(true);
            if let Some((n, ne)) = r.outside {
                self.adj[n][ne] = Some((t, 0));
            }
            fan_of_start.insert(r.a, t);
            fans.push(t);
        }
        for &f in &fans {
            let b = self.tris[f][1];
            let next = fan_of_start[&b];
            // Edge 1 of f is (b, p); edge 2 of next is (p, b).
            self.adj[f][1] = Some((next, 2));
            self.adj[next][2] = Some((f, 1));
        }
        self.hint = *fans.last().expect("cavity has at least three rim edges");
    }
}

/// Triangles as CCW-oriented index triples into `points`, in a canonical
/// deterministic order.
pub fn delaunay_triangulation(points: &[Point2]) -> Vec<[usize; 3]> {
    let n = points.len();
    assert!(n >= 3, "need at least 3 points to triangulate");

    let (mut min_x, mut min_y) = (f64::INFINITY, f64::INFINITY);
    let (mut max_x, mut max_y) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        min_x = min_x.min(p.x);
        min_y = min_y.min(p.y);
        max_x = max_x.max(p.x);
        max_y = max_y.max(p.y);
    }
    let span = (max_x - min_x).max(max_y - min_y).max(1e-12);
    let cx = 0.5 * (min_x + max_x);
    let cy = 0.5 * (min_y + max_y);

    let mut all_points = points.to_vec();
    all_points.push(Point2::new(cx - 20.0 * span, cy - 10.0 * span));
    all_points.push(Point2::new(cx + 20.0 * span, cy - 10.0 * span));
    all_points.push(Point2::new(cx, cy + 20.0 * span));

    let mut tr = Triangulation {
        points: all_points,
        tris: vec![[n, n + 1, n + 2]],
        adj: vec![[None; 3]],
        alive: vec![true],
        hint: 0,
    };
    for p_idx in 0..n {
        tr.insert(p_idx);
    }

    let mut out: Vec<[usize; 3]> = tr
        .tris
        .iter()
        .zip(&tr.alive)
        .filter(|(t, &alive)| alive && t.iter().all(|&v| v < n))
        .map(|(t, _)| *t)
        .collect();
    for t in &mut out {
        if triangle_area(points[t[0]], points[t[1]], points[t[2]]) < 0.0 {
            t.swap(1, 2);
        }
        let k = (0..3).min_by_key(|&i| t[i]).unwrap();
        t.rotate_left(k);
    }
    out.sort_unstable();
    out
}
