//! Piecewise-linear finite-element assembly for the mean-curvature operator.
//!
//! Weak form on each triangle, with `W = √(1+|Du|²)` and centroid quadrature
//! for the zeroth-order term:
//!
//! ```text
//! R_i(u) = Σ_T |T| (Du·Dφ_i)/W − |T| (2/(3 u_c)) (1/W − H),
//! ```
//!
//! Dirichlet rows are replaced by `u_i − a`. The Jacobian is the exact
//! derivative of this residual; its principal (gradient) block is symmetric
//! and its zeroth-order block carries the sign that makes the continuation
//! argument monotone for `H < 0`.

use crate::geometry::{Mesh, Point2};

use super::SolverError;

/// Per-element constants: area and the (constant) P1 basis gradients.
#[derive(Clone, Debug)]
pub struct ElementData {
    pub tri: [usize; 3],
    pub area: f64,
    pub grads: [Point2; 3],
}

pub fn element_data(mesh: &Mesh) -> Vec<ElementData> {
    mesh.triangles
        .iter()
        .map(|&tri| {
            let [a, b, c] = tri;
            let (pa, pb, pc) = (mesh.vertices[a], mesh.vertices[b], mesh.vertices[c]);
            let area2 = (pb - pa).cross(pc - pa);
            let inv = 1.0 / area2;
            // Dφ_i = rot90(p_{i+2} − p_{i+1}) / (2A).
            let grads = [
                Point2::new(pb.y - pc.y, pc.x - pb.x) * inv,
                Point2::new(pc.y - pa.y, pa.x - pc.x) * inv,
                Point2::new(pa.y - pb.y, pb.x - pa.x) * inv,
            ];
            ElementData {
                tri,
                area: 0.5 * area2,
                grads,
            }
        })
        .collect()
}

fn check_positive(u: &[f64]) -> Result<(), SolverError> {
    if let Some((i, &v)) = u.iter().enumerate().find(|(_, &v)| !(v > 0.0)) {
        return Err(SolverError::NonPositiveField { vertex: i, value: v });
    }
    Ok(())
}

/// Weak-form residual vector; Dirichlet rows hold `u_i − a`. This is the
/// function the Newton iteration drives to zero and whose exact derivative
/// [`jacobian`] returns.
pub fn weak_residual(
    mesh: &Mesh,
    elements: &[ElementData],
    u: &[f64],
    mean_curvature: f64,
    boundary_height: f64,
) -> Result<Vec<f64>, SolverError> {
    check_positive(u)?;
    let mut r = vec![0.0; mesh.vertex_count()];
    for el in elements {
        let [i0, i1, i2] = el.tri;
        let du = el.grads[0] * u[i0] + el.grads[1] * u[i1] + el.grads[2] * u[i2];
        let w = (1.0 + du.norm_sq()).sqrt();
        let u_c = (u[i0] + u[i1] + u[i2]) / 3.0;
        let source = el.area * (2.0 / (3.0 * u_c)) * (1.0 / w - mean_curvature);
        for (local, &v) in el.tri.iter().enumerate() {
            r[v] += el.area * du.dot(el.grads[local]) / w - source;
        }
    }
    for v in 0..mesh.vertex_count() {
        if mesh.is_boundary[v] {
            r[v] = u[v] - boundary_height;
        }
    }
    Ok(r)
}

/// Nodal residual: the weak residual scaled by the lumped mass, approximating
/// the strong-form defect `div(Du/W) + (2/u)(1/W − H)` at interior vertices.
/// Dirichlet rows stay `u_i − a`.
pub fn residual(
    mesh: &Mesh,
    u: &[f64],
    mean_curvature: f64,
    boundary_height: f64,
) -> Result<Vec<f64>, SolverError> {
    let elements = element_data(mesh);
    let mut r = weak_residual(mesh, &elements, u, mean_curvature, boundary_height)?;
    let masses = mesh.lumped_masses();
    for v in 0..mesh.vertex_count() {
        if !mesh.is_boundary[v] {
            r[v] /= masses[v];
        }
    }
    Ok(r)
}

/// Sparse Jacobian of [`weak_residual`] in triplet form.
#[derive(Clone, Debug)]
pub struct JacobianMatrix {
    pub n: usize,
    /// `(row, col, value)` triplets; duplicate entries accumulate.
    pub triplets: Vec<(usize, usize, f64)>,
}

impl JacobianMatrix {
    /// Dense matrix–vector product, for derivative checks.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for &(i, j, v) in &self.triplets {
            y[i] += v * x[j];
        }
        y
    }

    /// Largest |row − col| over all entries.
    pub fn bandwidth(&self) -> usize {
        self.triplets
            .iter()
            .map(|&(i, j, _)| i.abs_diff(j))
            .max()
            .unwrap_or(0)
    }
}

/// Exact Jacobian of the weak residual. Boundary rows are identity.
pub fn jacobian(
    mesh: &Mesh,
    elements: &[ElementData],
    u: &[f64],
    mean_curvature: f64,
) -> Result<JacobianMatrix, SolverError> {
    let (mut principal, low_order) = jacobian_parts(mesh, elements, u, mean_curvature)?;
    principal.triplets.extend(low_order.triplets);
    for v in 0..mesh.vertex_count() {
        if mesh.is_boundary[v] {
            principal.triplets.push((v, v, 1.0));
        }
    }
    Ok(principal)
}

/// The two blocks of the Jacobian, without Dirichlet rows:
/// the principal part `d/du_j [ |T| (Du·Dφ_i)/W ]` (symmetric) and the
/// lower-order part from the `(2/u)(1/W − H)` source.
///
/// The source's dependence on the centroid value contributes
/// `+|T| (2/(9 u_c²))(1/W − H)` to every (i, j) pair of the element; for
/// `H < 0` that term is positive here, equivalently the underlying operator
/// is non-increasing in `u` — the monotonicity the continuation method rests
/// on. [`zeroth_order_diagonal`] exposes it with that orientation.
pub fn jacobian_parts(
    mesh: &Mesh,
    elements: &[ElementData],
    u: &[f64],
    mean_curvature: f64,
) -> Result<(JacobianMatrix, JacobianMatrix), SolverError> {
    check_positive(u)?;
    let n = mesh.vertex_count();
    let mut principal = Vec::with_capacity(elements.len() * 9);
    let mut low_order = Vec::with_capacity(elements.len() * 9);
    for el in elements {
        let [i0, i1, i2] = el.tri;
        let du = el.grads[0] * u[i0] + el.grads[1] * u[i1] + el.grads[2] * u[i2];
        let w2 = 1.0 + du.norm_sq();
        let w = w2.sqrt();
        let w3 = w2 * w;
        let u_c = (u[i0] + u[i1] + u[i2]) / 3.0;
        let rho = 1.0 / w - mean_curvature;
        for (li, &vi) in el.tri.iter().enumerate() {
            if mesh.is_boundary[vi] {
                continue;
            }
            let du_dot_gi = du.dot(el.grads[li]);
            for (lj, &vj) in el.tri.iter().enumerate() {
                let du_dot_gj = du.dot(el.grads[lj]);
                // d/du_j of |T| (Du·Dφ_i)/W.
                let p = el.area
                    * (el.grads[li].dot(el.grads[lj]) / w - du_dot_gi * du_dot_gj / w3);
                principal.push((vi, vj, p));
                // d/du_j of −|T| (2/(3u_c)) (1/W − H):
                //   centroid factor: +|T| (2/(9 u_c²)) (1/W − H)
                //   W factor:        +|T| (2/(3 u_c)) (Du·Dφ_j)/W³
                let l = el.area
                    * (2.0 / (9.0 * u_c * u_c) * rho + 2.0 / (3.0 * u_c) * du_dot_gj / w3);
                low_order.push((vi, vj, l));
            }
        }
    }
    Ok((
        JacobianMatrix {
            n,
            triplets: principal,
        },
        JacobianMatrix {
            n,
            triplets: low_order,
        },
    ))
}

/// Per-vertex diagonal of the zeroth-order Jacobian block in the
/// divergence-form orientation `∂/∂u [div(Du/W) + (2/u)(1/W − H)]`, i.e.
/// `−Σ_T |T| (2/(9 u_c²))(1/W − H)` over the star. Non-positive at every
/// vertex when `H < 0`.
pub fn zeroth_order_diagonal(
    mesh: &Mesh,
    elements: &[ElementData],
    u: &[f64],
    mean_curvature: f64,
) -> Result<Vec<f64>, SolverError> {
    check_positive(u)?;
    let mut diag = vec![0.0; mesh.vertex_count()];
    for el in elements {
        let [i0, i1, i2] = el.tri;
        let du = el.grads[0] * u[i0] + el.grads[1] * u[i1] + el.grads[2] * u[i2];
        let w = (1.0 + du.norm_sq()).sqrt();
        let u_c = (u[i0] + u[i1] + u[i2]) / 3.0;
        let contrib = -el.area * 2.0 / (9.0 * u_c * u_c) * (1.0 / w - mean_curvature);
        for &v in &el.tri {
            diag[v] += contrib;
        }
    }
    Ok(diag)
}
