//! C ABI for the solver: opaque handles, integer status codes, and a
//! cbindgen-generated header (`include/hcmc.h`).
//!
//! Conventions:
//! * every fallible call returns [`HcmcStatus`]; outputs go through pointers;
//! * `HcmcDomain` / `HcmcSolution` are opaque and freed with their `_free`;
//! * strings returned by the library are freed with [`hcmc_string_free`];
//! * the last error detail is retrievable per thread via
//!   [`hcmc_last_error_message`];
//! * panics never cross the boundary (caught and mapped to
//!   `HCMC_STATUS_INTERNAL`).

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hcmc::analysis::{all_applicable_pass, reports_to_json, verify_all};
use hcmc::closed_form::{self, RadialCap};
use hcmc::geometry::Point2;
use hcmc::solver::{solve_dirichlet, SolverConfig};
use hcmc::{DomainSpec, SolutionField};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HcmcStatus {
    HcmcStatusOk = 0,
    HcmcStatusNullPointer = 1,
    HcmcStatusInvalidArgument = 2,
    HcmcStatusNotConvex = 3,
    HcmcStatusMesh = 4,
    HcmcStatusNoCap = 5,
    HcmcStatusBoundUndefined = 6,
    HcmcStatusNoConvergence = 7,
    HcmcStatusAnalysis = 8,
    HcmcStatusBufferTooSmall = 9,
    HcmcStatusInternal = 10,
    /// All verification checks ran; at least one applicable check failed.
    HcmcStatusChecksFailed = 11,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let c = CString::new(message.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Detail message for the most recent failure on this thread, or NULL.
/// The pointer stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn hcmc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map_or(ptr::null(), |c| c.as_ptr())
    })
}

/// Opaque strictly convex planar domain.
pub struct HcmcDomain {
    inner: DomainSpec,
}

/// Opaque converged solution field.
pub struct HcmcSolution {
    inner: SolutionField,
}

fn geometry_status(e: &hcmc::geometry::GeometryError) -> HcmcStatus {
    use hcmc::geometry::GeometryError::*;
    match e {
        NotStrictlyConvex { .. } | NotSimple { .. } => HcmcStatus::HcmcStatusNotConvex,
        MeshSizeTooLarge { .. } | MeshBudgetExceeded { .. } => HcmcStatus::HcmcStatusMesh,
        Degenerate(_) | TooFewPoints { .. } => HcmcStatus::HcmcStatusInvalidArgument,
    }
}

fn guard<F: FnOnce() -> HcmcStatus>(f: F) -> HcmcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            HcmcStatus::HcmcStatusInternal
        }
    }
}

fn domain_out(
    out: *mut *mut HcmcDomain,
    build: impl FnOnce() -> Result<DomainSpec, hcmc::geometry::GeometryError>,
) -> HcmcStatus {
    if out.is_null() {
        set_error("output pointer is NULL");
        return HcmcStatus::HcmcStatusNullPointer;
    }
    clear_error();
    match build() {
        Ok(inner) => {
            let boxed = Box::new(HcmcDomain { inner });
            unsafe { *out = Box::into_raw(boxed) };
            HcmcStatus::HcmcStatusOk
        }
        Err(e) => {
            set_error(e.to_string());
            unsafe { *out = ptr::null_mut() };
            geometry_status(&e)
        }
    }
}

/// Disc of radius `radius` centred at `(cx, cy)`.
#[no_mangle]
pub extern "C" fn hcmc_domain_new_disc(
    radius: f64,
    cx: f64,
    cy: f64,
    out: *mut *mut HcmcDomain,
) -> HcmcStatus {
    guard(|| domain_out(out, || DomainSpec::disc_at(radius, Point2::new(cx, cy))))
}

/// Axis-aligned ellipse with semi-axes `(semi_x, semi_y)` centred at `(cx, cy)`.
#[no_mangle]
pub extern "C" fn hcmc_domain_new_ellipse(
    semi_x: f64,
    semi_y: f64,
    cx: f64,
    cy: f64,
    out: *mut *mut HcmcDomain,
) -> HcmcStatus {
    guard(|| domain_out(out, || DomainSpec::ellipse_at(semi_x, semi_y, Point2::new(cx, cy))))
}

/// Domain bounded by a closed curve through `n` points given as interleaved
/// `x0, y0, x1, y1, …` (2n doubles), splined periodically.
///
/// # Safety
/// `xy` must point to `2 * n` readable doubles.
#[no_mangle]
pub unsafe extern "C" fn hcmc_domain_new_curve(
    xy: *const f64,
    n: usize,
    out: *mut *mut HcmcDomain,
) -> HcmcStatus {
    guard(|| {
        if xy.is_null() {
            set_error("point array is NULL");
            return HcmcStatus::HcmcStatusNullPointer;
        }
        let slice = unsafe { std::slice::from_raw_parts(xy, 2 * n) };
        let pts: Vec<Point2> = slice
            .chunks_exact(2)
            .map(|c| Point2::new(c[0], c[1]))
            .collect();
        domain_out(out, || DomainSpec::from_boundary_points(&pts))
    })
}

/// # Safety
/// `domain` must have been returned by a `hcmc_domain_new_*` call and not
/// freed yet; NULL is allowed and ignored.
#[no_mangle]
pub unsafe extern "C" fn hcmc_domain_free(domain: *mut HcmcDomain) {
    if !domain.is_null() {
        drop(unsafe { Box::from_raw(domain) });
    }
}

/// Radius of the minimum enclosing circle of the boundary.
///
/// # Safety
/// `domain` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hcmc_domain_circumradius(
    domain: *const HcmcDomain,
    out: *mut f64,
) -> HcmcStatus {
    guard(|| {
        if domain.is_null() || out.is_null() {
            set_error("NULL pointer");
            return HcmcStatus::HcmcStatusNullPointer;
        }
        clear_error();
        unsafe { *out = (*domain).inner.circumradius() };
        HcmcStatus::HcmcStatusOk
    })
}

/// Minimum and maximum boundary curvature.
///
/// # Safety
/// `domain` must be a live handle; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn hcmc_domain_curvature_extrema(
    domain: *const HcmcDomain,
    kappa_min: *mut f64,
    kappa_max: *mut f64,
) -> HcmcStatus {
    guard(|| {
        if domain.is_null() || kappa_min.is_null() || kappa_max.is_null() {
            set_error("NULL pointer");
            return HcmcStatus::HcmcStatusNullPointer;
        }
        clear_error();
        let (lo, hi) = unsafe { (*domain).inner.curvature_extrema() };
        unsafe {
            *kappa_min = lo;
            *kappa_max = hi;
        }
        HcmcStatus::HcmcStatusOk
    })
}

/// Closed-form spherical cap over a disc, by value.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct HcmcRadialCap {
    pub mean_curvature: f64,
    pub radius: f64,
    pub boundary_height: f64,
    pub sphere_radius: f64,
    pub center_height: f64,
    pub max_height: f64,
}

/// Exact radial cap for mean curvature `< 1` over a disc of radius `radius`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hcmc_radial_cap(
    mean_curvature: f64,
    radius: f64,
    boundary_height: f64,
    out: *mut HcmcRadialCap,
) -> HcmcStatus {
    guard(|| {
        if out.is_null() {
            set_error("output pointer is NULL");
            return HcmcStatus::HcmcStatusNullPointer;
        }
        clear_error();
        match RadialCap::new(mean_curvature, radius, boundary_height) {
            Ok(cap) => {
                unsafe {
                    *out = HcmcRadialCap {
                        mean_curvature: cap.mean_curvature,
                        radius: cap.radius,
                        boundary_height: cap.boundary_height,
                        sphere_radius: cap.sphere_radius,
                        center_height: cap.center_height,
                        max_height: cap.max_height(),
                    };
                }
                HcmcStatus::HcmcStatusOk
            }
            Err(e) => {
                set_error(e.to_string());
                match e {
                    closed_form::ClosedFormError::NoAdmissibleCap { .. } => {
                        HcmcStatus::HcmcStatusNoCap
                    }
                    _ => HcmcStatus::HcmcStatusInvalidArgument,
                }
            }
        }
    })
}

/// Solvability window for `−1 ≤ H < 0`: solutions exist whenever the squared
/// circumradius is below the returned value.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hcmc_existence_window(
    mean_curvature: f64,
    out: *mut f64,
) -> HcmcStatus {
    guard(|| {
        if out.is_null() {
            set_error("output pointer is NULL");
            return HcmcStatus::HcmcStatusNullPointer;
        }
        clear_error();
        match closed_form::existence_window(mean_curvature) {
            Ok(w) => {
                unsafe { *out = w };
                HcmcStatus::HcmcStatusOk
            }
            Err(e) => {
                set_error(e.to_string());
                HcmcStatus::HcmcStatusInvalidArgument
            }
        }
    })
}

/// Gradient bound from the solution maximum (`NaN`-free: errors instead).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hcmc_gradient_bound(
    mean_curvature: f64,
    u_max: f64,
    boundary_height: f64,
    out: *mut f64,
) -> HcmcStatus {
    guard(|| {
        if out.is_null() {
            set_error("output pointer is NULL");
            return HcmcStatus::HcmcStatusNullPointer;
        }
        clear_error();
        match closed_form::gradient_bound(mean_curvature, u_max, boundary_height) {
            Ok(b) => {
                unsafe { *out = b };
                HcmcStatus::HcmcStatusOk
            }
            Err(e) => {
                set_error(e.to_string());
                match e {
                    closed_form::ClosedFormError::HeightConditionViolated { .. } => {
                        HcmcStatus::HcmcStatusBoundUndefined
                    }
                    _ => HcmcStatus::HcmcStatusInvalidArgument,
                }
            }
        }
    })
}

/// Solve the Dirichlet problem with default solver settings.
///
/// # Safety
/// `domain` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hcmc_solve(
    domain: *const HcmcDomain,
    mean_curvature: f64,
    boundary_height: f64,
    mesh_size: f64,
    out: *mut *mut HcmcSolution,
) -> HcmcStatus {
    guard(|| {
        if domain.is_null() || out.is_null() {
            set_error("NULL pointer");
            return HcmcStatus::HcmcStatusNullPointer;
        }
        clear_error();
        let d = unsafe { &(*domain).inner };
        match solve_dirichlet(
            d,
            mean_curvature,
            boundary_height,
            mesh_size,
            &SolverConfig::default(),
        ) {
            Ok(inner) => {
                unsafe { *out = Box::into_raw(Box::new(HcmcSolution { inner })) };
                HcmcStatus::HcmcStatusOk
            }
            Err(e) => {
                set_error(e.to_string());
                unsafe { *out = ptr::null_mut() };
                use hcmc::solver::SolverError::*;
                match e {
                    Geometry(g) => geometry_status(&g),
                    NonConvergence { .. } | LinearSolve { .. } => {
                        HcmcStatus::HcmcStatusNoConvergence
                    }
                    NonPositiveField { .. } => HcmcStatus::HcmcStatusInternal,
                    InvalidInput(_) => HcmcStatus::HcmcStatusInvalidArgument,
                }
            }
        }
    })
}

/// # Safety
/// `solution` must have been returned by [`hcmc_solve`] and not freed yet;
/// NULL is allowed and ignored.
#[no_mangle]
pub unsafe extern "C" fn hcmc_solution_free(solution: *mut HcmcSolution) {
    if !solution.is_null() {
        drop(unsafe { Box::from_raw(solution) });
    }
}

/// Number of mesh vertices (0 for NULL).
///
/// # Safety
/// `solution` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn hcmc_solution_vertex_count(solution: *const HcmcSolution) -> usize {
    if solution.is_null() {
        return 0;
    }
    unsafe { (*solution).inner.mesh().vertex_count() }
}

unsafe fn copy_out(src: &[f64], dst: *mut f64, len: usize) -> HcmcStatus {
    if dst.is_null() {
        set_error("output buffer is NULL");
        return HcmcStatus::HcmcStatusNullPointer;
    }
    if len < src.len() {
        set_error(format!("buffer holds {len} values, need {}", src.len()));
        return HcmcStatus::HcmcStatusBufferTooSmall;
    }
    unsafe { ptr::copy_nonoverlapping(src.as_ptr(), dst, src.len()) };
    HcmcStatus::HcmcStatusOk
}

/// Copy vertex coordinates as interleaved `x0, y0, x1, y1, …` (needs
/// `2 * vertex_count` doubles).
///
/// # Safety
/// `solution` must be a live handle; `xy` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn hcmc_solution_copy_vertices(
    solution: *const HcmcSolution,
    xy: *mut f64,
    len: usize,
) -> HcmcStatus {
    guard(|| {
        if solution.is_null() {
            set_error("solution is NULL");
            return HcmcStatus::HcmcStatusNullPointer;
        }
        clear_error();
        let mesh = unsafe { (*solution).inner.mesh() };
        let flat: Vec<f64> = mesh.vertices.iter().flat_map(|p| [p.x, p.y]).collect();
        unsafe { copy_out(&flat, xy, len) }
    })
}

/// Copy the solution heights (needs `vertex_count` doubles).
///
/// # Safety
/// `solution` must be a live handle; `u` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn hcmc_solution_copy_heights(
    solution: *const HcmcSolution,
    u: *mut f64,
    len: usize,
) -> HcmcStatus {
    guard(|| {
        if solution.is_null() {
            set_error("solution is NULL");
            return HcmcStatus::HcmcStatusNullPointer;
        }
        clear_error();
        unsafe { copy_out((*solution).inner.values(), u, len) }
    })
}

/// Maximum height and maximum gradient norm of the solution.
///
/// # Safety
/// `solution` must be a live handle; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn hcmc_solution_extrema(
    solution: *const HcmcSolution,
    u_max: *mut f64,
    grad_max: *mut f64,
) -> HcmcStatus {
    guard(|| {
        if solution.is_null() || u_max.is_null() || grad_max.is_null() {
            set_error("NULL pointer");
            return HcmcStatus::HcmcStatusNullPointer;
        }
        clear_error();
        unsafe {
            *u_max = (*solution).inner.u_max();
            *grad_max = (*solution).inner.grad_norm_max();
        }
        HcmcStatus::HcmcStatusOk
    })
}

/// Run every theorem check and return the JSON report (free it with
/// [`hcmc_string_free`]). `HCMC_STATUS_CHECKS_FAILED` means the report was
/// produced but an applicable check failed.
///
/// # Safety
/// Both handles must be live; `json_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hcmc_verify_json(
    solution: *const HcmcSolution,
    domain: *const HcmcDomain,
    json_out: *mut *mut c_char,
) -> HcmcStatus {
    guard(|| {
        if solution.is_null() || domain.is_null() || json_out.is_null() {
            set_error("NULL pointer");
            return HcmcStatus::HcmcStatusNullPointer;
        }
        clear_error();
        let reports =
            unsafe { verify_all(&(*solution).inner, &(*domain).inner) };
        let json = reports_to_json(&reports);
        let c = match CString::new(json) {
            Ok(c) => c,
            Err(_) => {
                set_error("report contained an interior NUL");
                return HcmcStatus::HcmcStatusInternal;
            }
        };
        unsafe { *json_out = c.into_raw() };
        if all_applicable_pass(&reports) {
            HcmcStatus::HcmcStatusOk
        } else {
            HcmcStatus::HcmcStatusChecksFailed
        }
    })
}

/// Free a string returned by this library.
///
/// # Safety
/// `s` must have been returned by an hcmc function and not freed yet; NULL is
/// allowed and ignored.
#[no_mangle]
pub unsafe extern "C" fn hcmc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}
