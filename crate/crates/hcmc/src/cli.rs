//! Command-line harness.
//!
//! Subcommands: `solve`, `verify`, `sweep`, `plot`, `radial`. Exit codes are
//! part of the contract: 0 = success / all checks pass, 2 = solver
//! non-convergence, 3 = theorem-check failure, 4 = configuration error,
//! 1 = I/O or internal error.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{
    all_applicable_pass, directional_derivative, phi, reports_to_json, verify_all, TheoremReport,
};
use crate::closed_form::{self, BoundSet, RadialCap};
use crate::config::{ExperimentConfig, OutputFormat, ScalarOrList};
use crate::csvio::{fmt17, read_field_csv, write_solution_csv, write_table_csv};
use crate::geometry::DomainSpec;
use crate::solver::{solve_dirichlet, SolutionField, SolverError};
use crate::svg::{render_contours, PlotOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NONCONVERGENCE: i32 = 2;
pub const EXIT_CHECK_FAILURE: i32 = 3;
pub const EXIT_CONFIG: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "hcmc",
    version,
    about = "Constant-mean-curvature graphs in hyperbolic 3-space: solve, verify, sweep, plot"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct RunArgs {
    /// Experiment configuration (TOML).
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Override the output directory.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Override output formats (comma separated: csv,json,svg).
    #[arg(long, value_delimiter = ',')]
    format: Option<Vec<String>>,
    /// Override the mesh size h.
    #[arg(long = "h", value_name = "VALUE")]
    mesh_size: Option<f64>,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, value_name = "N")]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one Dirichlet problem and write the solution field.
    Solve(RunArgs),
    /// Solve, run every applicable theorem check, and write the report.
    Verify(RunArgs),
    /// Sweep over lists of H (and disc radii), one CSV row per case.
    Sweep(RunArgs),
    /// Render an SVG contour plot from a field CSV.
    Plot {
        /// Input field CSV (documented schema).
        #[arg(long, value_name = "PATH")]
        input: PathBuf,
        /// Output directory.
        #[arg(long, value_name = "DIR", default_value = "out")]
        out: PathBuf,
        /// Column to contour.
        #[arg(long, default_value = "u")]
        column: String,
        /// Number of contour levels.
        #[arg(long, default_value_t = 12)]
        levels: usize,
    },
    /// Print the closed-form radial cap and every explicit bound.
    Radial {
        /// Mean curvature H (< 1).
        #[arg(short = 'H', long = "mean-curvature", allow_hyphen_values = true)]
        mean_curvature: f64,
        /// Disc radius R.
        #[arg(short = 'R', long)]
        radius: f64,
        /// Boundary height a.
        #[arg(short, long, default_value_t = 1.0)]
        a: f64,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
}

/// Entry point used by `main`; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    dispatch(cli)
}

/// Same as [`run`] but parsing the given arguments (for tests).
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => dispatch(cli),
        Err(e) => {
            eprintln!("{e}");
            EXIT_CONFIG
        }
    }
}

fn dispatch(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Solve(args) => cmd_solve(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Sweep(args) => cmd_sweep(&args),
        Command::Plot {
            input,
            out,
            column,
            levels,
        } => cmd_plot(&input, &out, &column, levels),
        Command::Radial {
            mean_curvature,
            radius,
            a,
            json,
        } => cmd_radial(mean_curvature, radius, a, json),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            e.exit_code
        }
    }
}

/// Error with an exit code attached; conversions pick the contract code.
#[derive(Debug)]
struct CliError {
    message: String,
    exit_code: i32,
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<crate::config::ConfigError> for CliError {
    fn from(e: crate::config::ConfigError) -> Self {
        CliError {
            message: e.to_string(),
            exit_code: EXIT_CONFIG,
        }
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        let exit_code = match &e {
            SolverError::NonConvergence { .. } | SolverError::LinearSolve { .. } => {
                EXIT_NONCONVERGENCE
            }
            SolverError::Geometry(_) | SolverError::InvalidInput(_) => EXIT_CONFIG,
            SolverError::NonPositiveField { .. } => EXIT_ERROR,
        };
        // The existence theory gives sufficient conditions only: report a
        // failed search, never nonexistence.
        let message = match &e {
            SolverError::NonConvergence { tau, .. } => format!(
                "no solution found (continuation stalled at τ = {tau}); this does not prove nonexistence"
            ),
            other => other.to_string(),
        };
        CliError { message, exit_code }
    }
}

impl From<crate::csvio::CsvError> for CliError {
    fn from(e: crate::csvio::CsvError) -> Self {
        CliError {
            message: e.to_string(),
            exit_code: EXIT_ERROR,
        }
    }
}

impl From<crate::svg::SvgError> for CliError {
    fn from(e: crate::svg::SvgError) -> Self {
        CliError {
            message: e.to_string(),
            exit_code: EXIT_ERROR,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError {
            message: e.to_string(),
            exit_code: EXIT_ERROR,
        }
    }
}

fn invalid_config(message: impl Into<String>) -> CliError {
    CliError {
        message: message.into(),
        exit_code: EXIT_CONFIG,
    }
}

/// Diagnostics JSON written next to the solution CSV. Deterministic: no
/// timestamps or timings.
#[derive(Serialize)]
struct SolveReport<'a> {
    domain_kind: &'a str,
    mean_curvature: f64,
    boundary_height: f64,
    mesh_size: f64,
    vertices: usize,
    triangles: usize,
    boundary_vertices: usize,
    newton_iterations: usize,
    final_residual_norm: f64,
    continuation_steps: usize,
    u_max: f64,
    grad_max: f64,
}

fn domain_kind_name(d: &DomainSpec) -> &'static str {
    match d.kind() {
        crate::geometry::DomainKind::Disc => "disc",
        crate::geometry::DomainKind::Ellipse => "ellipse",
        crate::geometry::DomainKind::GenericCurve => "generic-curve",
    }
}

struct LoadedRun {
    cfg: ExperimentConfig,
    domain: DomainSpec,
    out_dir: PathBuf,
    formats: Vec<OutputFormat>,
}

fn load_run(args: &RunArgs) -> Result<LoadedRun, CliError> {
    let (mut cfg, cfg_dir) = ExperimentConfig::load(&args.config)?;
    if let Some(h) = args.mesh_size {
        cfg.problem.h = ScalarOrList::Scalar(h);
    }
    if let Some(dir) = &args.out {
        cfg.output.dir = dir.clone();
    }
    if let Some(fmts) = &args.format {
        let mut parsed = Vec::new();
        for f in fmts {
            parsed.push(match f.as_str() {
                "csv" => OutputFormat::Csv,
                "json" => OutputFormat::Json,
                "svg" => OutputFormat::Svg,
                other => return Err(invalid_config(format!("unknown format `{other}`"))),
            });
        }
        cfg.output.formats = parsed;
    }
    cfg.validate()?;
    let domain = cfg.domain.build(&cfg_dir)?;
    let out_dir = cfg.output.dir.clone();
    std::fs::create_dir_all(&out_dir)?;
    let formats = cfg.output.formats.clone();
    Ok(LoadedRun {
        cfg,
        domain,
        out_dir,
        formats,
    })
}

fn scalar_problem(cfg: &ExperimentConfig) -> Result<(f64, f64), CliError> {
    let h_mean = cfg.problem.mean_curvature.scalar().ok_or_else(|| {
        invalid_config("H is a list; use the `sweep` subcommand for sweeps")
    })?;
    let mesh_h = cfg
        .problem
        .h
        .scalar()
        .ok_or_else(|| invalid_config("h is a list; use the `sweep` subcommand for sweeps"))?;
    Ok((h_mean, mesh_h))
}

fn write_solution_artifacts(
    run: &LoadedRun,
    solution: &SolutionField,
) -> Result<(), CliError> {
    let csv_path = run.out_dir.join("solution.csv");
    if run.formats.contains(&OutputFormat::Csv) {
        write_solution_csv(&csv_path, solution, None)?;
        if let Some(alpha) = run.cfg.output.phi_alpha {
            let f = phi(solution, alpha).map_err(|e| CliError {
                message: e.to_string(),
                exit_code: EXIT_ERROR,
            })?;
            write_solution_csv(&run.out_dir.join("phi.csv"), solution, Some(("phi", &f.values)))?;
        }
        if let Some(theta) = run.cfg.output.v_theta {
            let v = directional_derivative(solution, theta);
            write_solution_csv(&run.out_dir.join("v_theta.csv"), solution, Some(("v_theta", &v)))?;
        }
    }
    if run.formats.contains(&OutputFormat::Json) {
        let report = SolveReport {
            domain_kind: domain_kind_name(&run.domain),
            mean_curvature: solution.mean_curvature(),
            boundary_height: solution.boundary_height(),
            mesh_size: solution.mesh().h,
            vertices: solution.mesh().vertex_count(),
            triangles: solution.mesh().triangle_count(),
            boundary_vertices: solution
                .mesh()
                .is_boundary
                .iter()
                .filter(|&&b| b)
                .count(),
            newton_iterations: solution.diagnostics().newton_iterations,
            final_residual_norm: solution.diagnostics().final_residual_norm,
            continuation_steps: solution.diagnostics().continuation_steps,
            u_max: solution.u_max(),
            grad_max: solution.grad_norm_max(),
        };
        let json = serde_json::to_string_pretty(&report).expect("report serializes");
        std::fs::write(run.out_dir.join("diagnostics.json"), json)?;
    }
    if run.formats.contains(&OutputFormat::Svg) {
        // The SVG path goes through the CSV schema so plots and solve output
        // can never drift apart.
        write_solution_csv(&csv_path, solution, None)?;
        let table = read_field_csv(&csv_path)?;
        render_contours(
            &table,
            &PlotOptions::default(),
            &run.out_dir.join("solution.svg"),
        )?;
    }
    Ok(())
}

fn cmd_solve(args: &RunArgs) -> Result<i32, CliError> {
    let run = load_run(args)?;
    let (h_mean, mesh_h) = scalar_problem(&run.cfg)?;
    let solution = solve_dirichlet(&run.domain, h_mean, run.cfg.problem.a, mesh_h, &run.cfg.solver)?;
    write_solution_artifacts(&run, &solution)?;
    eprintln!(
        "solved: {} vertices, u_max = {:.6}, max|Du| = {:.6}, {} Newton iterations",
        solution.mesh().vertex_count(),
        solution.u_max(),
        solution.grad_norm_max(),
        solution.diagnostics().newton_iterations
    );
    Ok(EXIT_OK)
}

fn filter_reports(cfg: &ExperimentConfig, reports: Vec<TheoremReport>) -> Vec<TheoremReport> {
    if cfg.checks.ids.is_empty() {
        reports
    } else {
        reports
            .into_iter()
            .filter(|r| cfg.checks.ids.contains(&r.theorem_id))
            .collect()
    }
}

fn cmd_verify(args: &RunArgs) -> Result<i32, CliError> {
    let run = load_run(args)?;
    let (h_mean, mesh_h) = scalar_problem(&run.cfg)?;
    let solution = solve_dirichlet(&run.domain, h_mean, run.cfg.problem.a, mesh_h, &run.cfg.solver)?;
    write_solution_artifacts(&run, &solution)?;

    let reports = filter_reports(&run.cfg, verify_all(&solution, &run.domain));
    std::fs::write(run.out_dir.join("report.json"), reports_to_json(&reports))?;
    for r in &reports {
        eprintln!(
            "{:<22} {:<14} margin {:+.6e}  {}",
            r.theorem_id.name(),
            format!("{:?}", r.status),
            r.margin,
            r.details
        );
    }
    if all_applicable_pass(&reports) {
        Ok(EXIT_OK)
    } else {
        Ok(EXIT_CHECK_FAILURE)
    }
}

/// One sweep case (H, R, h) and its outcome row.
fn sweep_row(
    domain: &DomainSpec,
    h_mean: f64,
    a: f64,
    mesh_h: f64,
    solver: &crate::solver::SolverConfig,
) -> Vec<f64> {
    let radius = domain.circumradius();
    let (_, kappa_max) = domain.curvature_extrema();
    let window = closed_form::existence_window(h_mean).unwrap_or(f64::INFINITY);
    match solve_dirichlet(domain, h_mean, a, mesh_h, solver) {
        Ok(s) => {
            let u_max = s.u_max();
            let grad_max = s.grad_norm_max();
            let bounds = BoundSet::evaluate(h_mean, a, radius, kappa_max, u_max);
            vec![
                h_mean,
                radius,
                mesh_h,
                1.0,
                u_max,
                grad_max,
                window,
                bounds.grad_bound,
                bounds.small_height_bound,
                bounds.u_max_lower,
                bounds.u_max_upper,
                bounds.grad_bound - grad_max,
                u_max - bounds.u_max_lower,
                bounds.u_max_upper - u_max,
            ]
        }
        Err(_) => vec![
            h_mean,
            radius,
            mesh_h,
            0.0,
            f64::NAN,
            f64::NAN,
            window,
            f64::NAN,
            f64::NAN,
            f64::NAN,
            f64::NAN,
            f64::NAN,
            f64::NAN,
            f64::NAN,
        ],
    }
}

const SWEEP_HEADER: [&str; 14] = [
    "H",
    "R",
    "h",
    "converged",
    "u_max",
    "grad_max",
    "window_r2",
    "grad_bound",
    "lemma22_bound",
    "um_lower",
    "um_upper",
    "grad_margin",
    "um_lower_margin",
    "um_upper_margin",
];

fn cmd_sweep(args: &RunArgs) -> Result<i32, CliError> {
    let run = load_run(args)?;
    let h_means = run.cfg.problem.mean_curvature.values();
    let mesh_sizes = run.cfg.problem.h.values();
    let a = run.cfg.problem.a;

    // Case list in input order; rows are computed in parallel but assembled
    // in this order, so permuting the input permutes the rows and nothing
    // else.
    enum CaseDomain<'a> {
        Shared(&'a DomainSpec),
        Disc(f64),
    }
    let mut cases: Vec<(CaseDomain, f64, f64)> = Vec::new();
    match &run.cfg.sweep.radius {
        Some(radii) => {
            for &r in radii {
                for &hm in &h_means {
                    for &mh in &mesh_sizes {
                        cases.push((CaseDomain::Disc(r), hm, mh));
                    }
                }
            }
        }
        None => {
            for &hm in &h_means {
                for &mh in &mesh_sizes {
                    cases.push((CaseDomain::Shared(&run.domain), hm, mh));
                }
            }
        }
    }
    if cases.len() == 1 {
        eprintln!("note: sweep over a single case; lists in H, h, or sweep.radius add rows");
    }

    let compute = |case: &(CaseDomain, f64, f64)| -> Result<Vec<f64>, CliError> {
        let (domain_spec, hm, mh) = case;
        match domain_spec {
            CaseDomain::Shared(d) => Ok(sweep_row(d, *hm, a, *mh, &run.cfg.solver)),
            CaseDomain::Disc(r) => {
                let d = DomainSpec::disc(*r).map_err(crate::config::ConfigError::Domain)?;
                Ok(sweep_row(&d, *hm, a, *mh, &run.cfg.solver))
            }
        }
    };

    let rows: Result<Vec<Vec<f64>>, CliError> = if let Some(n) = args.threads {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError {
                message: e.to_string(),
                exit_code: EXIT_ERROR,
            })?;
        pool.install(|| cases.par_iter().map(compute).collect())
    } else {
        cases.par_iter().map(compute).collect()
    };
    let rows = rows?;

    write_table_csv(&run.out_dir.join("sweep.csv"), &SWEEP_HEADER, &rows)?;
    let failures = rows.iter().filter(|r| r[3] == 0.0).count();
    eprintln!("sweep: {} rows, {} non-converged", rows.len(), failures);
    if failures > 0 {
        Ok(EXIT_NONCONVERGENCE)
    } else {
        Ok(EXIT_OK)
    }
}

fn cmd_plot(input: &Path, out: &Path, column: &str, levels: usize) -> Result<i32, CliError> {
    let table = read_field_csv(input)?;
    std::fs::create_dir_all(out)?;
    let stem = input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "field".into());
    let out_path = out.join(format!("{stem}_{column}.svg"));
    render_contours(
        &table,
        &PlotOptions {
            column: column.to_string(),
            level_count: levels,
            explicit_levels: None,
        },
        &out_path,
    )?;
    eprintln!("wrote {}", out_path.display());
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct RadialReport {
    mean_curvature: f64,
    radius: f64,
    boundary_height: f64,
    sphere_radius: f64,
    center_height: f64,
    max_height: f64,
    boundary_slope: f64,
    window_r2: f64,
    inside_window: Option<bool>,
    grad_bound_at_max: f64,
    lemma22_bound: f64,
    um_lower_with_disc_kappa: f64,
}

fn cmd_radial(h_mean: f64, radius: f64, a: f64, json: bool) -> Result<i32, CliError> {
    let cap = RadialCap::new(h_mean, radius, a).map_err(|e| invalid_config(e.to_string()))?;
    let window = closed_form::existence_window(h_mean).ok();
    let report = RadialReport {
        mean_curvature: h_mean,
        radius,
        boundary_height: a,
        sphere_radius: cap.sphere_radius,
        center_height: cap.center_height,
        max_height: cap.max_height(),
        boundary_slope: cap.slope(radius),
        window_r2: window.unwrap_or(f64::INFINITY),
        inside_window: window.map(|w| radius * radius < w),
        grad_bound_at_max: closed_form::gradient_bound(h_mean, cap.max_height(), a)
            .unwrap_or(f64::NAN),
        lemma22_bound: closed_form::small_height_gradient_bound(h_mean),
        um_lower_with_disc_kappa: (1.0 - h_mean) * radius,
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&report).expect("serializes"));
    } else {
        println!("spherical cap    H = {h_mean}, R = {radius}, a = {a}");
        println!("  sphere radius m   = {}", fmt17(report.sphere_radius));
        println!("  center height c0  = {}", fmt17(report.center_height));
        println!("  max height w(0)   = {}", fmt17(report.max_height));
        println!("  boundary slope    = {}", fmt17(report.boundary_slope));
        match report.inside_window {
            Some(inside) => println!(
                "  window R^2 < {}  ({})",
                fmt17(report.window_r2),
                if inside { "inside" } else { "outside" }
            ),
            None => println!("  window            n/a (needs -1 <= H < 0)"),
        }
        println!("  grad bound @ w_M  = {}", fmt17(report.grad_bound_at_max));
        println!("  |Du| bound (2.3)  = {}", fmt17(report.lemma22_bound));
        println!("  u_M lower (disc)  = {}", fmt17(report.um_lower_with_disc_kappa));
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_are_stable() {
        assert_eq!(EXIT_OK, 0);
        assert_eq!(EXIT_NONCONVERGENCE, 2);
        assert_eq!(EXIT_CHECK_FAILURE, 3);
        assert_eq!(EXIT_CONFIG, 4);
    }

    #[test]
    fn radial_subcommand_prints_closed_form() {
        let code = run_from([
            "hcmc", "radial", "-H", "-1", "-R", "0.6", "-a", "1", "--json",
        ]);
        assert_eq!(code, EXIT_OK);
    }

    #[test]
    fn unknown_flags_exit_with_config_code() {
        let code = run_from(["hcmc", "solve", "--nonsense"]);
        assert_eq!(code, EXIT_CONFIG);
    }
}
