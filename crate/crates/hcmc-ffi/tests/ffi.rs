//! Exercises the C ABI exactly as a foreign caller would: through raw
//! pointers and status codes.

use std::ffi::CStr;
use std::ptr;

use hcmc_ffi::*;

#[test]
fn disc_solve_matches_radial_cap() {
    unsafe {
        let mut domain: *mut HcmcDomain = ptr::null_mut();
        assert_eq!(
            hcmc_domain_new_disc(1.0, 0.0, 0.0, &mut domain),
            HcmcStatus::HcmcStatusOk
        );
        assert!(!domain.is_null());

        let mut r = 0.0;
        assert_eq!(
            hcmc_domain_circumradius(domain, &mut r),
            HcmcStatus::HcmcStatusOk
        );
        assert!((r - 1.0).abs() < 1e-8);

        let mut solution: *mut HcmcSolution = ptr::null_mut();
        assert_eq!(
            hcmc_solve(domain, 0.0, 1.0, 0.1, &mut solution),
            HcmcStatus::HcmcStatusOk
        );
        let n = hcmc_solution_vertex_count(solution);
        assert!(n > 100);

        let mut u_max = 0.0;
        let mut grad_max = 0.0;
        assert_eq!(
            hcmc_solution_extrema(solution, &mut u_max, &mut grad_max),
            HcmcStatus::HcmcStatusOk
        );
        assert!((u_max - 2f64.sqrt()).abs() < 2e-2, "u_max = {u_max}");

        let mut heights = vec![0.0; n];
        assert_eq!(
            hcmc_solution_copy_heights(solution, heights.as_mut_ptr(), n),
            HcmcStatus::HcmcStatusOk
        );
        assert!(heights.iter().all(|&u| u >= 1.0 - 1e-12));

        let mut xy = vec![0.0; 2 * n];
        assert_eq!(
            hcmc_solution_copy_vertices(solution, xy.as_mut_ptr(), 2 * n),
            HcmcStatus::HcmcStatusOk
        );
        assert!(xy.chunks(2).all(|c| c[0].hypot(c[1]) < 1.0 + 1e-9));

        // Undersized buffer is rejected without writing.
        assert_eq!(
            hcmc_solution_copy_heights(solution, heights.as_mut_ptr(), n - 1),
            HcmcStatus::HcmcStatusBufferTooSmall
        );

        hcmc_solution_free(solution);
        hcmc_domain_free(domain);
    }
}

#[test]
fn verify_json_round_trips() {
    unsafe {
        let mut domain: *mut HcmcDomain = ptr::null_mut();
        assert_eq!(
            hcmc_domain_new_ellipse(0.5, 0.4, 0.0, 0.0, &mut domain),
            HcmcStatus::HcmcStatusOk
        );
        let mut solution: *mut HcmcSolution = ptr::null_mut();
        assert_eq!(
            hcmc_solve(domain, -1.0, 1.0, 0.06, &mut solution),
            HcmcStatus::HcmcStatusOk
        );
        let mut json: *mut std::ffi::c_char = ptr::null_mut();
        let status = hcmc_verify_json(solution, domain, &mut json);
        assert_eq!(status, HcmcStatus::HcmcStatusOk, "checks failed");
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        hcmc_string_free(json);
        assert!(text.contains("\"grad_estimate_1_1\""));
        assert!(text.contains("\"status\""));
        hcmc_solution_free(solution);
        hcmc_domain_free(domain);
    }
}

#[test]
fn closed_form_entry_points() {
    unsafe {
        let mut cap = std::mem::zeroed::<HcmcRadialCap>();
        assert_eq!(
            hcmc_radial_cap(-1.0, 0.6, 1.0, &mut cap),
            HcmcStatus::HcmcStatusOk
        );
        assert!((cap.sphere_radius - 0.68).abs() < 1e-12);
        assert!((cap.max_height - 1.36).abs() < 1e-12);

        assert_eq!(
            hcmc_radial_cap(-2.0, 1.0, 1.0, &mut cap),
            HcmcStatus::HcmcStatusNoCap
        );
        let msg = hcmc_last_error_message();
        assert!(!msg.is_null());
        assert!(CStr::from_ptr(msg).to_str().unwrap().contains("cap"));

        let mut w = 0.0;
        assert_eq!(hcmc_existence_window(-1.0, &mut w), HcmcStatus::HcmcStatusOk);
        assert!((w - (2f64.sqrt() - 1.0)).abs() < 1e-12);
        assert_eq!(
            hcmc_existence_window(0.5, &mut w),
            HcmcStatus::HcmcStatusInvalidArgument
        );

        let mut b = 0.0;
        assert_eq!(
            hcmc_gradient_bound(0.0, 2f64.sqrt(), 1.0, &mut b),
            HcmcStatus::HcmcStatusOk
        );
        assert!((b - 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(
            hcmc_gradient_bound(-0.5, 1.8, 1.0, &mut b),
            HcmcStatus::HcmcStatusBoundUndefined
        );
    }
}

#[test]
fn error_paths_and_null_safety() {
    unsafe {
        let mut domain: *mut HcmcDomain = ptr::null_mut();
        assert_eq!(
            hcmc_domain_new_disc(-1.0, 0.0, 0.0, &mut domain),
            HcmcStatus::HcmcStatusInvalidArgument
        );
        assert!(domain.is_null());
        assert!(!hcmc_last_error_message().is_null());

        assert_eq!(
            hcmc_domain_new_disc(1.0, 0.0, 0.0, ptr::null_mut()),
            HcmcStatus::HcmcStatusNullPointer
        );
        let mut r = 0.0;
        assert_eq!(
            hcmc_domain_circumradius(ptr::null(), &mut r),
            HcmcStatus::HcmcStatusNullPointer
        );
        assert_eq!(hcmc_solution_vertex_count(ptr::null()), 0);
        hcmc_domain_free(ptr::null_mut());
        hcmc_solution_free(ptr::null_mut());
        hcmc_string_free(ptr::null_mut());

        // Star-shaped (non-convex) point curve is rejected with NOT_CONVEX.
        let n = 64usize;
        let mut xy = Vec::with_capacity(2 * n);
        for i in 0..n {
            let t = std::f64::consts::TAU * i as f64 / n as f64;
            let radius = 1.0 + 0.5 * (5.0 * t).cos();
            xy.push(radius * t.cos());
            xy.push(radius * t.sin());
        }
        let mut d2: *mut HcmcDomain = ptr::null_mut();
        assert_eq!(
            hcmc_domain_new_curve(xy.as_ptr(), n, &mut d2),
            HcmcStatus::HcmcStatusNotConvex
        );
    }
}

#[test]
fn generated_header_exports_the_api() {
    let header = std::fs::read_to_string(
        std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("include/hcmc.h"),
    )
    .expect("header generated by build.rs");
    for symbol in [
        "hcmc_domain_new_disc",
        "hcmc_domain_new_ellipse",
        "hcmc_domain_new_curve",
        "hcmc_domain_free",
        "hcmc_domain_circumradius",
        "hcmc_domain_curvature_extrema",
        "hcmc_radial_cap",
        "hcmc_existence_window",
        "hcmc_gradient_bound",
        "hcmc_solve",
        "hcmc_solution_free",
        "hcmc_solution_vertex_count",
        "hcmc_solution_copy_vertices",
        "hcmc_solution_copy_heights",
        "hcmc_solution_extrema",
        "hcmc_verify_json",
        "hcmc_string_free",
        "hcmc_last_error_message",
        "HCMC_STATUS_OK",
        "HcmcRadialCap",
    ] {
        assert!(header.contains(symbol), "header missing `{symbol}`");
    }
}
