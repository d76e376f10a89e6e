//! Damped Newton solver with mean-curvature continuation.
//!
//! The Dirichlet problem is solved along the family with mean curvature
//! `τH`, stepping `τ` from 0 to 1 and warm-starting every step. Each step
//! runs Newton on the weak residual with a backtracking line search; steps
//! that would drive any vertex value to `u ≤ a/2` are rejected to protect
//! the `1/u` singularity of the equation.

mod assemble;
mod banded;

pub use assemble::{
    element_data, jacobian, jacobian_parts, residual, weak_residual, zeroth_order_diagonal,
    ElementData, JacobianMatrix,
};
pub use banded::{BandedMatrix, LinearSolveError};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::closed_form::RadialCap;
use crate::geometry::{triangulate, DomainSpec, GeometryError, Mesh, Point2};

#[derive(Debug, Error)]
pub enum SolverError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("field is non-positive at vertex {vertex} (u = {value}); the equation has a 1/u singularity")]
    NonPositiveField { vertex: usize, value: f64 },
    #[error("no solution found: continuation stalled at τ = {tau} after {iterations} Newton iterations (residual {residual_norm:.3e})")]
    NonConvergence {
        tau: f64,
        iterations: usize,
        residual_norm: f64,
        /// Last iterate, for inspection.
        last_iterate: Vec<f64>,
    },
    #[error("linear solve failed at τ = {tau}: {source}")]
    LinearSolve {
        tau: f64,
        #[source]
        source: LinearSolveError,
    },
    #[error("invalid solver input: {0}")]
    InvalidInput(String),
}

/// Starting iterate for the first continuation step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialGuess {
    /// `u ≡ a`.
    BoundaryConstant,
    /// The spherical cap over the circumscribed disc (falls back to the
    /// constant when no cap exists).
    RadialCap,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Newton stop: ‖weak residual‖₂ / (vertex count) below this.
    pub newton_tol: f64,
    pub max_newton_iters: usize,
    /// Number of τ increments from 0 to 1.
    pub continuation_steps: usize,
    /// Backtracking factor in (0, 1).
    pub damping: f64,
    pub initial_guess: InitialGuess,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            newton_tol: 1e-10,
            max_newton_iters: 50,
            continuation_steps: 10,
            damping: 0.5,
            initial_guess: InitialGuess::BoundaryConstant,
        }
    }
}

impl SolverConfig {
    fn validate(&self) -> Result<(), SolverError> {
        if !(self.newton_tol > 0.0) {
            return Err(SolverError::InvalidInput("newton_tol must be positive".into()));
        }
        if self.continuation_steps == 0 {
            return Err(SolverError::InvalidInput("continuation_steps must be ≥ 1".into()));
        }
        if !(self.damping > 0.0 && self.damping < 1.0) {
            return Err(SolverError::InvalidInput("damping must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

/// Minimum line-search step before the solve is declared stalled.
const MIN_LINE_SEARCH_STEP: f64 = 1.0 / (1 << 20) as f64;

#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct SolveDiagnostics {
    /// Total Newton iterations across all continuation steps.
    pub newton_iterations: usize,
    /// ‖weak residual‖₂ / n at the accepted solution.
    pub final_residual_norm: f64,
    /// Configured number of continuation steps.
    pub continuation_steps: usize,
}

/// A converged solution on a mesh, with recovered vertex gradients.
#[derive(Clone, Debug)]
pub struct SolutionField {
    mesh: Mesh,
    u: Vec<f64>,
    mean_curvature: f64,
    boundary_height: f64,
    diagnostics: SolveDiagnostics,
    /// Area-weighted average of adjacent element gradients, per vertex.
    vertex_gradients: Vec<Point2>,
}

impl SolutionField {
    /// Assemble a field from parts, recovering vertex gradients. Values must
    /// be positive and equal to the boundary height on the boundary.
    pub fn from_values(
        mesh: Mesh,
        u: Vec<f64>,
        mean_curvature: f64,
        boundary_height: f64,
        diagnostics: SolveDiagnostics,
    ) -> Result<Self, SolverError> {
        if u.len() != mesh.vertex_count() {
            return Err(SolverError::InvalidInput(format!(
                "value count {} does not match vertex count {}",
                u.len(),
                mesh.vertex_count()
            )));
        }
        if let Some((i, &v)) = u.iter().enumerate().find(|(_, &v)| !(v > 0.0)) {
            return Err(SolverError::NonPositiveField { vertex: i, value: v });
        }
        let vertex_gradients = recover_vertex_gradients(&mesh, &u);
        Ok(Self {
            mesh,
            u,
            mean_curvature,
            boundary_height,
            diagnostics,
            vertex_gradients,
        })
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn values(&self) -> &[f64] {
        &self.u
    }

    pub fn mean_curvature(&self) -> f64 {
        self.mean_curvature
    }

    pub fn boundary_height(&self) -> f64 {
        self.boundary_height
    }

    pub fn diagnostics(&self) -> &SolveDiagnostics {
        &self.diagnostics
    }

    /// Recovered gradient vector at each vertex.
    pub fn vertex_gradients(&self) -> &[Point2] {
        &self.vertex_gradients
    }

    /// `|Du|` at each vertex (norm of the recovered gradient).
    pub fn gradient_norms(&self) -> Vec<f64> {
        self.vertex_gradients.iter().map(|g| g.norm()).collect()
    }

    /// Piecewise-constant gradient per triangle.
    pub fn element_gradients(&self) -> Vec<Point2> {
        element_data(&self.mesh)
            .iter()
            .map(|el| {
                el.grads[0] * self.u[el.tri[0]]
                    + el.grads[1] * self.u[el.tri[1]]
                    + el.grads[2] * self.u[el.tri[2]]
            })
            .collect()
    }

    pub fn u_max(&self) -> f64 {
        self.u.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn argmax_u(&self) -> usize {
        (0..self.u.len())
            .max_by(|&a, &b| self.u[a].partial_cmp(&self.u[b]).unwrap())
            .unwrap()
    }

    pub fn grad_norm_max(&self) -> f64 {
        self.vertex_gradients
            .iter()
            .map(|g| g.norm())
            .fold(0.0, f64::max)
    }

    /// Discrete mean-curvature recovery at interior vertices:
    /// `1/W + (u/2)·div_h(Du/W)` with the divergence taken against the P1
    /// test functions and lumped masses. Returns `(vertex, value)` pairs.
    pub fn recovered_mean_curvature(&self) -> Vec<(usize, f64)> {
        let elements = element_data(&self.mesh);
        let masses = self.mesh.lumped_masses();
        let mut div = vec![0.0; self.mesh.vertex_count()];
        for el in &elements {
            let du = el.grads[0] * self.u[el.tri[0]]
                + el.grads[1] * self.u[el.tri[1]]
                + el.grads[2] * self.u[el.tri[2]];
            let w = (1.0 + du.norm_sq()).sqrt();
            let flux = du * (1.0 / w);
            for (local, &v) in el.tri.iter().enumerate() {
                div[v] -= el.area * flux.dot(el.grads[local]);
            }
        }
        self.mesh
            .interior_vertices()
            .map(|v| {
                let q = self.vertex_gradients[v].norm();
                let w = (1.0 + q * q).sqrt();
                (v, 1.0 / w + 0.5 * self.u[v] * div[v] / masses[v])
            })
            .collect()
    }
}

fn recover_vertex_gradients(mesh: &Mesh, u: &[f64]) -> Vec<Point2> {
    let mut grad = vec![Point2::default(); mesh.vertex_count()];
    let mut weight = vec![0.0; mesh.vertex_count()];
    for el in element_data(mesh) {
        let du = el.grads[0] * u[el.tri[0]] + el.grads[1] * u[el.tri[1]] + el.grads[2] * u[el.tri[2]];
        for &v in &el.tri {
            grad[v] = grad[v] + du * el.area;
            weight[v] += el.area;
        }
    }
    for v in 0..grad.len() {
        grad[v] = grad[v] * (1.0 / weight[v]);
    }
    grad
}

fn l2_scaled(r: &[f64]) -> f64 {
    (r.iter().map(|x| x * x).sum::<f64>()).sqrt() / r.len() as f64
}

/// Solve the Dirichlet problem for mean curvature `H ≤ 1` and boundary
/// height `a > 0` on `domain`, meshed at target edge length `mesh_size`.
///
/// `H = 1` is the horosphere case: `u ≡ a` solves exactly and is returned
/// without Newton iterations. For `H < 1` the continuation family with
/// curvature `τH` is traced from `τ = 0`, each step Newton-solved to
/// `newton_tol` and warm-starting the next.
pub fn solve_dirichlet(
    domain: &DomainSpec,
    mean_curvature: f64,
    boundary_height: f64,
    mesh_size: f64,
    config: &SolverConfig,
) -> Result<SolutionField, SolverError> {
    config.validate()?;
    if !(boundary_height > 0.0 && boundary_height.is_finite()) {
        return Err(SolverError::InvalidInput(format!(
            "boundary height must be positive, got {boundary_height}"
        )));
    }
    if !(mean_curvature <= 1.0) {
        return Err(SolverError::InvalidInput(format!(
            "mean curvature must satisfy H ≤ 1, got {mean_curvature}"
        )));
    }

    let mesh = triangulate(domain, mesh_size)?;
    let n = mesh.vertex_count();
    let a = boundary_height;

    if mean_curvature == 1.0 {
        // Horosphere: u ≡ a satisfies the equation identically.
        return SolutionField::from_values(
            mesh,
            vec![a; n],
            mean_curvature,
            a,
            SolveDiagnostics {
                newton_iterations: 0,
                final_residual_norm: 0.0,
                continuation_steps: 0,
            },
        );
    }

    let elements = element_data(&mesh);
    let mut u = match config.initial_guess {
        InitialGuess::BoundaryConstant => vec![a; n],
        InitialGuess::RadialCap => {
            let circ = domain.circumcircle();
            match RadialCap::new(0.0, circ.radius, a) {
                Ok(cap) => mesh
                    .vertices
                    .iter()
                    .map(|p| cap.height(p.dist(circ.center).min(circ.radius)))
                    .collect(),
                Err(_) => vec![a; n],
            }
        }
    };
    // Boundary rows are pinned exactly.
    for v in 0..n {
        if mesh.is_boundary[v] {
            u[v] = a;
        }
    }

    let mut total_iterations = 0usize;
    let mut final_norm = 0.0;
    let steps = config.continuation_steps;
    let mut previous_target = f64::NAN;
    for k in 0..=steps {
        let tau = k as f64 / steps as f64;
        let target_h = tau * mean_curvature;
        if target_h == previous_target {
            continue;
        }
        previous_target = target_h;
        final_norm = newton_solve(
            &mesh,
            &elements,
            &mut u,
            target_h,
            a,
            config,
            tau,
            &mut total_iterations,
        )?;
    }

    SolutionField::from_values(
        mesh,
        u,
        mean_curvature,
        a,
        SolveDiagnostics {
            newton_iterations: total_iterations,
            final_residual_norm: final_norm,
            continuation_steps: steps,
        },
    )
}

#[allow(clippy::too_many_arguments)]
fn newton_solve(
    mesh: &Mesh,
    elements: &[ElementData],
    u: &mut Vec<f64>,
    target_h: f64,
    a: f64,
    config: &SolverConfig,
    tau: f64,
    total_iterations: &mut usize,
) -> Result<f64, SolverError> {
    let n = mesh.vertex_count();
    let mut r = weak_residual(mesh, elements, u, target_h, a)?;
    let mut norm = l2_scaled(&r);

    for _ in 0..config.max_newton_iters {
        if norm <= config.newton_tol {
            return Ok(norm);
        }
        *total_iterations += 1;

        let jac = jacobian(mesh, elements, u, target_h)?;
        let bw = jac.bandwidth();
        let mut banded = BandedMatrix::zeros(n, bw, bw);
        for &(i, j, v) in &jac.triplets {
            banded
                .add(i, j, v)
                .map_err(|source| SolverError::LinearSolve { tau, source })?;
        }
        let mut delta: Vec<f64> = r.iter().map(|x| -x).collect();
        banded
            .solve_in_place(&mut delta)
            .map_err(|source| SolverError::LinearSolve { tau, source })?;

        // Backtracking line search on the residual norm; trial iterates with
        // any u ≤ a/2 are rejected outright.
        let mut step = 1.0;
        loop {
            let trial: Vec<f64> = u
                .iter()
                .zip(&delta)
                .enumerate()
                .map(|(v, (ui, di))| {
                    if mesh.is_boundary[v] {
                        a
                    } else {
                        ui + step * di
                    }
                })
                .collect();
            let admissible = trial.iter().all(|&v| v > 0.5 * a);
            if admissible {
                if let Ok(r_trial) = weak_residual(mesh, elements, &trial, target_h, a) {
                    let trial_norm = l2_scaled(&r_trial);
                    if trial_norm < norm * (1.0 - 1e-4 * step) {
                        *u = trial;
                        r = r_trial;
                        norm = trial_norm;
                        break;
                    }
                }
            }
            step *= config.damping;
            if step < MIN_LINE_SEARCH_STEP {
                return Err(SolverError::NonConvergence {
                    tau,
                    iterations: *total_iterations,
                    residual_norm: norm,
                    last_iterate: u.clone(),
                });
            }
        }
    }

    if norm <= config.newton_tol {
        Ok(norm)
    } else {
        Err(SolverError::NonConvergence {
            tau,
            iterations: *total_iterations,
            residual_norm: norm,
            last_iterate: u.clone(),
        })
    }
}
