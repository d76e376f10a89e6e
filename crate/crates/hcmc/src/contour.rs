//! Level-set extraction on triangulations (marching triangles).
//!
//! Each triangle crossed by the level contributes one segment with endpoints
//! on the crossed edges; endpoints are keyed by the edge they sit on, so
//! segments chain into polylines and connected components without any
//! floating-point point matching.

use crate::geometry::{Mesh, Point2};
use std::collections::HashMap;

/// Canonical edge identifier (sorted vertex pair).
pub type EdgeKey = (usize, usize);

#[derive(Clone, Copy, Debug)]
pub struct Segment {
    pub a: Point2,
    pub b: Point2,
    pub key_a: EdgeKey,
    pub key_b: EdgeKey,
}

fn edge_key(i: usize, j: usize) -> EdgeKey {
    (i.min(j), i.max(j))
}

/// Segments of the level set `{field = level}` by linear interpolation on
/// each triangle. Vertex values equal to the level count as above it, which
/// keeps the classification consistent across neighbouring triangles.
pub fn level_segments(mesh: &Mesh, field: &[f64], level: f64) -> Vec<Segment> {
    assert_eq!(field.len(), mesh.vertex_count());
    let mut out = Vec::new();
    for t in &mesh.triangles {
        let above: Vec<bool> = t.iter().map(|&v| field[v] >= level).collect();
        let n_above = above.iter().filter(|&&b| b).count();
        if n_above == 0 || n_above == 3 {
            continue;
        }
        // The "lone" vertex sits on the minority side; the crossing edges are
        // the two incident to it.
        let lone = (0..3)
            .find(|&i| above[i] == (n_above == 1))
            .expect("one vertex must be on the minority side");
        let (i, j, k) = (t[lone], t[(lone + 1) % 3], t[(lone + 2) % 3]);
        let cross = |p: usize, q: usize| -> (Point2, EdgeKey) {
            let fp = field[p];
            let fq = field[q];
            let w = ((level - fp) / (fq - fp)).clamp(0.0, 1.0);
            (
                mesh.vertices[p] + (mesh.vertices[q] - mesh.vertices[p]) * w,
                edge_key(p, q),
            )
        };
        let (a, key_a) = cross(i, j);
        let (b, key_b) = cross(i, k);
        out.push(Segment { a, b, key_a, key_b });
    }
    out
}

/// Number of connected components of the level set (union-find over the edge
/// keys the segments touch).
pub fn component_count(segments: &[Segment]) -> usize {
    if segments.is_empty() {
        return 0;
    }
    let mut index: HashMap<EdgeKey, usize> = HashMap::new();
    for s in segments {
        let next = index.len();
        index.entry(s.key_a).or_insert(next);
        let next = index.len();
        index.entry(s.key_b).or_insert(next);
    }
    let mut parent: Vec<usize> = (0..index.len()).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for s in segments {
        let (a, b) = (index[&s.key_a], index[&s.key_b]);
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    }
    let mut roots: Vec<usize> = segments
        .iter()
        .map(|s| {
            let a = index[&s.key_a];
            find(&mut parent, a)
        })
        .collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

/// Chain segments into polylines by walking shared edge keys. Open chains
/// start at endpoints whose key is touched exactly once.
pub fn polylines(segments: &[Segment]) -> Vec<Vec<Point2>> {
    let mut key_use: HashMap<EdgeKey, Vec<usize>> = HashMap::new();
    for (si, s) in segments.iter().enumerate() {
        key_use.entry(s.key_a).or_default().push(si);
        key_use.entry(s.key_b).or_default().push(si);
    }
    let mut used = vec![false; segments.len()];
    let mut chains = Vec::new();

    // Deterministic iteration: process segments in index order; prefer to
    // start from segments with a free (boundary) endpoint so open chains are
    // traced end to end.
    let mut starts: Vec<usize> = (0..segments.len()).collect();
    starts.sort_by_key(|&si| {
        let s = &segments[si];
        let free =
            key_use[&s.key_a].len() == 1 || key_use[&s.key_b].len() == 1;
        (!free, si)
    });

    for start in starts {
        if used[start] {
            continue;
        }
        used[start] = true;
        let s = &segments[start];
        // Orient the chain so it begins at a free endpoint when one exists.
        let (mut chain, mut tail_key) = if key_use[&s.key_a].len() == 1 {
            (vec![s.a, s.b], s.key_b)
        } else {
            (vec![s.b, s.a], s.key_a)
        };
        loop {
            let Some(next) = key_use[&tail_key]
                .iter()
                .copied()
                .find(|&si| !used[si])
            else {
                break;
            };
            used[next] = true;
            let seg = &segments[next];
            if seg.key_a == tail_key {
                chain.push(seg.b);
                tail_key = seg.key_b;
            } else {
                chain.push(seg.a);
                tail_key = seg.key_a;
            }
        }
        chains.push(chain);
    }
    chains
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{triangulate, DomainSpec};

    #[test]
    fn circle_level_sets_of_radial_field() {
        let d = DomainSpec::disc(1.0).unwrap();
        let mesh = triangulate(&d, 0.1).unwrap();
        let field: Vec<f64> = mesh.vertices.iter().map(|p| p.norm_sq()).collect();
        let segs = level_segments(&mesh, &field, 0.25);
        assert!(!segs.is_empty());
        assert_eq!(component_count(&segs), 1);
        // All crossing points sit near the radius-0.5 circle.
        for s in &segs {
            assert!((s.a.norm() - 0.5).abs() < 0.05);
            assert!((s.b.norm() - 0.5).abs() < 0.05);
        }
        let chains = polylines(&segs);
        assert_eq!(chains.len(), 1);
    }

    #[test]
    fn diameter_zero_set_touches_boundary() {
        let d = DomainSpec::disc(1.0).unwrap();
        let mesh = triangulate(&d, 0.1).unwrap();
        // field = x: zero set is the vertical diameter.
        let field: Vec<f64> = mesh.vertices.iter().map(|p| p.x).collect();
        let segs = level_segments(&mesh, &field, 0.0);
        assert_eq!(component_count(&segs), 1);
        let chains = polylines(&segs);
        assert_eq!(chains.len(), 1);
        let chain = &chains[0];
        let ends = [chain[0], *chain.last().unwrap()];
        for e in ends {
            assert!(e.norm() > 0.9, "chain end {e:?} not near the boundary");
        }
    }

    #[test]
    fn two_component_field() {
        let d = DomainSpec::disc(1.0).unwrap();
        let mesh = triangulate(&d, 0.08).unwrap();
        // Two bumps: the 0.5 level set has two closed components.
        let field: Vec<f64> = mesh
            .vertices
            .iter()
            .map(|p| {
                let l = (*p - Point2::new(-0.45, 0.0)).norm_sq();
                let r = (*p - Point2::new(0.45, 0.0)).norm_sq();
                (-l / 0.02).exp() + (-r / 0.02).exp()
            })
            .collect();
        let segs = level_segments(&mesh, &field, 0.5);
        assert_eq!(component_count(&segs), 2);
    }

    #[test]
    fn empty_when_level_outside_range() {
        let d = DomainSpec::disc(1.0).unwrap();
        let mesh = triangulate(&d, 0.2).unwrap();
        let field: Vec<f64> = vec![1.0; mesh.vertex_count()];
        assert!(level_segments(&mesh, &field, 2.0).is_empty());
        assert_eq!(component_count(&[]), 0);
    }
}
