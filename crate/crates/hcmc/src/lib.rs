//! Numerical solver and verification harness for the Dirichlet problem of the
//! constant-mean-curvature graph equation in hyperbolic 3-space.
//!
//! In the upper half-space model of ℍ³ a graph `x₃ = u(x)`, `u > 0`, over a
//! bounded planar domain Ω has constant (hyperbolic) mean curvature `H` with
//! respect to the upward orientation exactly when
//!
//! ```text
//! div(Du / √(1+|Du|²)) + (2/u) (1/√(1+|Du|²) − H) = 0   in Ω,
//! u = a > 0                                              on ∂Ω.
//! ```
//!
//! The crate is organised around that equation:
//!
//! * [`geometry`] — strictly convex planar domains (disc, ellipse, splined
//!   point curves), boundary curvature, circumradius, and conforming
//!   Delaunay triangulations.
//! * [`closed_form`] — exact radial spherical-cap solutions over discs and
//!   every explicit bound: the gradient estimate, the existence window for
//!   `−1 ≤ H < 0`, and upper/lower height bounds. These are the analytic
//!   oracles for the solver.
//! * [`solver`] — piecewise-linear finite elements, damped Newton with
//!   backtracking line search, and continuation in the mean-curvature
//!   parameter from `τ = 0` to `τ = 1`.
//! * [`analysis`] — the Φ-function `log((1+q²)/(1−H√(1+q²))² · u^{2α})`,
//!   critical-point location, nodal sets of directional derivatives, and a
//!   battery of theorem checks producing machine-readable reports.
//! * [`cli`] — the `hcmc` command-line harness (`solve`, `verify`, `sweep`,
//!   `plot`, `radial`) with CSV/JSON/SVG outputs.
//!
//! All numeric kernels are deterministic: identical inputs produce
//! byte-identical CSV and JSON artifacts.

pub mod analysis;
pub mod cli;
pub mod closed_form;
pub mod config;
pub mod contour;
pub mod csvio;
pub mod geometry;
pub mod solver;
pub mod svg;

pub use analysis::{verify_all, TheoremReport};
pub use closed_form::RadialCap;
pub use geometry::{DomainSpec, Mesh, Point2};
pub use solver::{solve_dirichlet, SolutionField, SolverConfig};
