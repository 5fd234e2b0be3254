//! `ghl`: hierarchy printing, closed-form sampling, residual verification,
//! pseudospectral evolution, the norm-separation experiment, the periodic
//! solver, and the acceptance suite.
//!
//! Exit codes: 0 success/pass, 1 verification failure, 2 usage error.
//! Every run writes a manifest next to its primary output. `GHL_THREADS`
//! caps sweep parallelism.

use clap::{Args, Parser, Subcommand};
use ghl::closedform::{
    commensurability_solve, BreatherParams, MkdvBreatherParams, PeriodicBreatherParams,
    SolitonParams, Solution,
};
use ghl::evolve::{conservation_drift, evolve, EvolveConfig};
use ghl::functionals::{
    critical_point_expansion, energy, higher_energy, lyapunov, mass, miura_residual,
    ode_residual, pde_residual, DerivativeRoute, SpectralCoefficients,
};
use ghl::hierarchy::{gardner_rhs, mkdv_rhs};
use ghl::illposed::{sweep, IllposedConfig};
use ghl::numerics::{sample_solution, Grid, GridFunction};
use ghl::report::{write_csv, write_json, RunManifest, VerificationReport};
use serde::Deserialize;
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "ghl", version, about = "Gardner/mKdV hierarchy verification tool")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a generated hierarchy member in canonical text form.
    Hierarchy {
        #[command(subcommand)]
        action: HierarchyAction,
    },
    /// Sample a closed-form solution onto a grid and emit CSV.
    Solution {
        #[command(subcommand)]
        action: SolutionAction,
    },
    /// Residual and identity certificates for the closed forms.
    Verify {
        #[command(subcommand)]
        action: VerifyAction,
    },
    /// Pseudospectral time integration from closed-form or file data.
    Evolve(EvolveArgs),
    /// Low-regularity norm-separation experiment (sweeps over alpha).
    Illposed(IllposedArgs),
    /// Solve the period-commensurability conditions and certify the
    /// resulting periodic breather.
    Periodic(PeriodicArgs),
    /// Run acceptance criteria.
    Suite(SuiteArgs),
}

#[derive(Subcommand)]
enum HierarchyAction {
    Print(HierarchyPrintArgs),
}

#[derive(Args)]
struct HierarchyPrintArgs {
    /// hierarchy index (order 2n+1)
    #[arg(long)]
    n: u32,
    /// print the mu = 0 member
    #[arg(long)]
    mu0: bool,
    #[arg(long, default_value = "text")]
    format: String,
}

#[derive(Subcommand)]
enum SolutionAction {
    Sample(SolutionSampleArgs),
}

#[derive(Args)]
struct SolutionSampleArgs {
    /// soliton | breather | mkdv-breather | periodic
    #[arg(long)]
    kind: String,
    /// JSON parameter bundle, e.g. '{"n":2,"alpha":0.9,"beta":1.1,"mu":0.25}'
    #[arg(long)]
    params: String,
    /// grid as L,N (domain [-L, L) with N points)
    #[arg(long, default_value = "40,2048")]
    grid: String,
    #[arg(long, default_value_t = 0.0)]
    t: f64,
    /// output CSV path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Clone)]
struct SolutionSpecArgs {
    /// hierarchy index
    #[arg(long, default_value_t = 1)]
    n: u32,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    mu: f64,
    /// soliton shape parameter
    #[arg(long)]
    c: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    x1: f64,
    #[arg(long, default_value_t = 0.0)]
    x2: f64,
}

#[derive(Subcommand)]
enum VerifyAction {
    /// Flow residual du/dt - F[u] of a closed form.
    Pde(VerifyPdeArgs),
    /// The one fourth-order stationary equation shared by all breathers.
    Ode(VerifyOdeArgs),
    /// Quadratic numerator/denominator identity of the breather.
    Miura(VerifyMiuraArgs),
    /// Constancy of the four functionals on the exact breather.
    Conserved(VerifyConservedArgs),
    /// First-variation and cubic-remainder diagnostics at the breather.
    CriticalPoint(VerifyCriticalArgs),
}

#[derive(Args)]
struct VerifyPdeArgs {
    /// breather | soliton | mkdv-breather | periodic
    #[arg(long, default_value = "breather")]
    kind: String,
    #[command(flatten)]
    spec: SolutionSpecArgs,
    /// periodic order (5 or 7) and elliptic parameter for kind=periodic
    #[arg(long)]
    order: Option<u32>,
    #[arg(long)]
    k: Option<f64>,
    #[arg(long, default_value_t = 0.3)]
    t: f64,
    #[arg(long, default_value = "40,2048")]
    grid: String,
    /// analytic | spectral derivative route
    #[arg(long, default_value = "analytic")]
    route: String,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyOdeArgs {
    #[command(flatten)]
    spec: SolutionSpecArgs,
    #[arg(long, default_value_t = 0.35)]
    t: f64,
    #[arg(long, default_value = "40,2048")]
    grid: String,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyMiuraArgs {
    #[command(flatten)]
    spec: SolutionSpecArgs,
    #[arg(long, default_value_t = 0.27)]
    t: f64,
    #[arg(long, default_value = "30,256")]
    grid: String,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyConservedArgs {
    #[command(flatten)]
    spec: SolutionSpecArgs,
    #[arg(long, default_value = "40,2048")]
    grid: String,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyCriticalArgs {
    #[command(flatten)]
    spec: SolutionSpecArgs,
    #[arg(long, default_value = "40,2048")]
    grid: String,
    /// seed for the perturbation direction
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct EvolveArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = 0.0)]
    mu: f64,
    /// breather | soliton | file:<csv with one value per line>
    #[arg(long)]
    init: String,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    t_end: f64,
    /// step size; defaults to the stability-budget step
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long, default_value = "25,1024")]
    grid: String,
    #[arg(long, default_value_t = true)]
    dealias: bool,
    /// output directory (checkpoint CSVs + drift JSON + manifest)
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct IllposedArgs {
    #[arg(long, default_value_t = 2)]
    n: u32,
    #[arg(long)]
    s: f64,
    /// one or more carrier frequencies, comma separated
    #[arg(long, value_delimiter = ',')]
    alpha: Vec<f64>,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    #[arg(long, default_value_t = 0.5)]
    mu: f64,
    /// observation time (defaults to the index-scaled waiting time)
    #[arg(long)]
    t_final: Option<f64>,
    #[arg(long)]
    report: PathBuf,
}

#[derive(Args)]
struct PeriodicArgs {
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    k: f64,
    #[arg(long, default_value_t = 5)]
    order: u32,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct SuiteArgs {
    /// run every criterion
    #[arg(long)]
    all: bool,
    /// comma-separated criterion ids
    #[arg(long, value_delimiter = ',')]
    criteria: Vec<u32>,
    #[arg(long)]
    report: Option<PathBuf>,
}

fn parse_grid(text: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("grid must be L,N; got {text:?}"));
    }
    let l: f64 = parts[0].trim().parse().map_err(|e| format!("bad L: {e}"))?;
    let n: usize = parts[1].trim().parse().map_err(|e| format!("bad N: {e}"))?;
    Grid::new(l, n).map_err(|e| e.to_string())
}

#[derive(Deserialize)]
struct SolitonSpec {
    n: u32,
    c: f64,
    #[serde(default)]
    mu: f64,
}

#[derive(Deserialize)]
struct BreatherSpec {
    n: u32,
    alpha: f64,
    beta: f64,
    #[serde(default)]
    mu: f64,
    #[serde(default)]
    x1: f64,
    #[serde(default)]
    x2: f64,
}

#[derive(Deserialize)]
struct PeriodicSpec {
    order: u32,
    beta: f64,
    k: f64,
    #[serde(default)]
    x1: f64,
    #[serde(default)]
    x2: f64,
}

fn solution_from_json(kind: &str, params: &str) -> Result<Solution, String> {
    match kind {
        "soliton" => {
            let s: SolitonSpec = serde_json::from_str(params).map_err(|e| e.to_string())?;
            Ok(Solution::Soliton(
                SolitonParams::new(s.n, s.c, s.mu).map_err(|e| e.to_string())?,
            ))
        }
        "breather" => {
            let s: BreatherSpec = serde_json::from_str(params).map_err(|e| e.to_string())?;
            Ok(Solution::Breather(
                BreatherParams::new(s.n, s.alpha, s.beta, s.mu, s.x1, s.x2)
                    .map_err(|e| e.to_string())?,
            ))
        }
        "mkdv-breather" => {
            let s: BreatherSpec = serde_json::from_str(params).map_err(|e| e.to_string())?;
            Ok(Solution::MkdvBreather(
                MkdvBreatherParams::new(s.n, s.alpha, s.beta, s.x1, s.x2)
                    .map_err(|e| e.to_string())?,
            ))
        }
        "periodic" => {
            let s: PeriodicSpec = serde_json::from_str(params).map_err(|e| e.to_string())?;
            Ok(Solution::Periodic(
                PeriodicBreatherParams::new(s.order, s.beta, s.k, s.x1, s.x2)
                    .map_err(|e| e.to_string())?,
            ))
        }
        other => Err(format!("unknown solution kind {other:?}")),
    }
}

fn breather_from_spec(spec: &SolutionSpecArgs) -> Result<BreatherParams, String> {
    let alpha = spec.alpha.ok_or("--alpha is required")?;
    let beta = spec.beta.ok_or("--beta is required")?;
    BreatherParams::new(spec.n, alpha, beta, spec.mu, spec.x1, spec.x2).map_err(|e| e.to_string())
}

fn emit_report(
    report: &VerificationReport,
    path: &Option<PathBuf>,
    command: &str,
) -> Result<(), String> {
    println!(
        "{}: residual_inf = {:.3e}, residual_l2 = {:.3e}, tolerance = {:.1e} -> {}",
        report.test,
        report.residual_inf,
        report.residual_l2,
        report.tolerance,
        if report.pass { "pass" } else { "FAIL" }
    );
    if let Some(p) = path {
        write_json(p, report).map_err(|e| e.to_string())?;
        RunManifest::new(command, report.params.clone(), &[p])
            .write_beside(p)
            .map_err(|e| e.to_string())?;
        println!("report written to {}", p.display());
    }
    Ok(())
}

fn residual_l2(field: &GridFunction) -> f64 {
    field.map(|v| v * v).quadrature().sqrt()
}

fn run() -> Result<bool, String> {
    if let Ok(threads) = std::env::var("GHL_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .ok();
        }
    }
    let cli = Cli::parse();
    match cli.command {
        Command::Hierarchy {
            action: HierarchyAction::Print(args),
        } => {
            let eq = if args.mu0 {
                mkdv_rhs(args.n)
            } else {
                gardner_rhs(args.n)
            }
            .map_err(|e| e.to_string())?;
            let text = eq.rhs.neg().canonical_text('u');
            match args.format.as_str() {
                "text" => {
                    println!("u_t {text} = 0");
                    println!(
                        "# dispersion coefficients: {:?}; removed transport coefficient: {}",
                        eq.dispersion
                            .iter()
                            .map(|a| a.to_string())
                            .collect::<Vec<_>>(),
                        eq.transport
                    );
                }
                "json" => {
                    let value = json!({
                        "n": eq.n,
                        "order": eq.order(),
                        "layout": "u_t + (terms) = 0",
                        "terms": text,
                        "dispersion": eq.dispersion.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
                        "transport": eq.transport.to_string(),
                    });
                    println!("{}", serde_json::to_string_pretty(&value).unwrap());
                }
                other => return Err(format!("unknown format {other:?}")),
            }
            Ok(true)
        }

        Command::Solution {
            action: SolutionAction::Sample(args),
        } => {
            let grid = parse_grid(&args.grid)?;
            let sol = solution_from_json(&args.kind, &args.params)?;
            let f = sample_solution(&sol, args.t, grid, 0.0);
            let rows: Vec<Vec<f64>> = (0..grid.len())
                .map(|i| vec![grid.point(i), f.values()[i]])
                .collect();
            write_csv(&args.out, &["x", "value"], &rows).map_err(|e| e.to_string())?;
            RunManifest::new(
                "solution sample",
                json!({"kind": args.kind, "params": args.params, "grid": args.grid, "t": args.t}),
                &[&args.out],
            )
            .write_beside(&args.out)
            .map_err(|e| e.to_string())?;
            println!("wrote {} samples to {}", grid.len(), args.out.display());
            Ok(true)
        }

        Command::Verify { action } => match action {
            VerifyAction::Pde(args) => {
                let grid = parse_grid(&args.grid)?;
                let (sol, mu, eq) = match args.kind.as_str() {
                    "breather" => {
                        let p = breather_from_spec(&args.spec)?;
                        (
                            Solution::Breather(p),
                            p.mu,
                            gardner_rhs(args.spec.n).map_err(|e| e.to_string())?,
                        )
                    }
                    "mkdv-breather" => {
                        let p = MkdvBreatherParams::new(
                            args.spec.n,
                            args.spec.alpha.ok_or("--alpha is required")?,
                            args.spec.beta.ok_or("--beta is required")?,
                            args.spec.x1,
                            args.spec.x2,
                        )
                        .map_err(|e| e.to_string())?;
                        (
                            Solution::MkdvBreather(p),
                            0.0,
                            mkdv_rhs(args.spec.n).map_err(|e| e.to_string())?,
                        )
                    }
                    "soliton" => {
                        let p = SolitonParams::new(
                            args.spec.n,
                            args.spec.c.ok_or("--c is required")?,
                            args.spec.mu,
                        )
                        .map_err(|e| e.to_string())?;
                        (
                            Solution::Soliton(p),
                            args.spec.mu,
                            gardner_rhs(args.spec.n).map_err(|e| e.to_string())?,
                        )
                    }
                    "periodic" => {
                        let order = args.order.ok_or("--order is required")?;
                        let p = PeriodicBreatherParams::new(
                            order,
                            args.spec.beta.ok_or("--beta is required")?,
                            args.k.ok_or("--k is required")?,
                            args.spec.x1,
                            args.spec.x2,
                        )
                        .map_err(|e| e.to_string())?;
                        let grid =
                            Grid::new(p.period / 2.0, 1024).map_err(|e| e.to_string())?;
                        let eq = mkdv_rhs((order - 1) / 2).map_err(|e| e.to_string())?;
                        let route = DerivativeRoute::Analytic;
                        let r = pde_residual(&eq, &Solution::Periodic(p), args.t, grid, 0.0, route);
                        let rep = VerificationReport {
                            test: "pde".into(),
                            params: json!({"kind": "periodic", "order": order, "beta": args.spec.beta, "k": args.k, "t": args.t}),
                            residual_inf: r.max_abs(),
                            residual_l2: residual_l2(&r.field),
                            tolerance: 1e-6 * r.scale,
                            pass: r.relative() < 1e-6,
                        };
                        emit_report(&rep, &args.report, "verify pde")?;
                        return Ok(rep.pass);
                    }
                    other => return Err(format!("unknown kind {other:?}")),
                };
                let route = match args.route.as_str() {
                    "analytic" => DerivativeRoute::Analytic,
                    "spectral" => DerivativeRoute::Spectral,
                    other => return Err(format!("unknown route {other:?}")),
                };
                let r = pde_residual(&eq, &sol, args.t, grid, mu, route);
                let rep = VerificationReport {
                    test: "pde".into(),
                    params: json!({
                        "kind": args.kind, "n": args.spec.n, "alpha": args.spec.alpha,
                        "beta": args.spec.beta, "mu": mu, "c": args.spec.c,
                        "t": args.t, "route": args.route,
                    }),
                    residual_inf: r.max_abs(),
                    residual_l2: residual_l2(&r.field),
                    tolerance: 1e-6 * r.scale,
                    pass: r.relative() < 1e-6,
                };
                emit_report(&rep, &args.report, "verify pde")?;
                Ok(rep.pass)
            }

            VerifyAction::Ode(args) => {
                let p = breather_from_spec(&args.spec)?;
                let grid = parse_grid(&args.grid)?;
                let sol = Solution::Breather(p);
                let b = sample_solution(&sol, args.t, grid, sol.envelope_center(args.t));
                let r = ode_residual(&b, p.mu, p.alpha, p.beta);
                let rep = VerificationReport {
                    test: "ode".into(),
                    params: json!({"n": p.n, "alpha": p.alpha, "beta": p.beta, "mu": p.mu, "t": args.t}),
                    residual_inf: r.max_abs(),
                    residual_l2: residual_l2(&r.field),
                    tolerance: 1e-7 * r.scale,
                    pass: r.relative() < 1e-7,
                };
                emit_report(&rep, &args.report, "verify ode")?;
                Ok(rep.pass)
            }

            VerifyAction::Miura(args) => {
                let p = breather_from_spec(&args.spec)?;
                let grid = parse_grid(&args.grid)?;
                let r = miura_residual(&p, args.t, grid);
                let rep = VerificationReport {
                    test: "miura".into(),
                    params: json!({"n": p.n, "alpha": p.alpha, "beta": p.beta, "mu": p.mu, "t": args.t}),
                    residual_inf: r.max_abs(),
                    residual_l2: residual_l2(&r),
                    tolerance: 1e-9,
                    pass: r.max_abs() < 1e-9,
                };
                emit_report(&rep, &args.report, "verify miura")?;
                Ok(rep.pass)
            }

            VerifyAction::Conserved(args) => {
                let p = breather_from_spec(&args.spec)?;
                let grid = parse_grid(&args.grid)?;
                let w = SpectralCoefficients::new(p.alpha, p.beta);
                let sol = Solution::Breather(p);
                let mut drift: f64 = 0.0;
                let mut base = [0.0f64; 4];
                for (i, &t) in [0.0, 0.11, 0.23, 0.37, 0.5].iter().enumerate() {
                    let b = sample_solution(&sol, t, grid, sol.envelope_center(t));
                    let vals = [
                        mass(&b),
                        energy(&b, p.mu),
                        higher_energy(&b, p.mu),
                        lyapunov(&b, p.mu, w),
                    ];
                    if i == 0 {
                        base = vals;
                    } else {
                        for (v, b0) in vals.iter().zip(&base) {
                            drift = drift.max((v - b0).abs() / b0.abs().max(1.0));
                        }
                    }
                }
                let rep = VerificationReport {
                    test: "conserved".into(),
                    params: json!({"n": p.n, "alpha": p.alpha, "beta": p.beta, "mu": p.mu}),
                    residual_inf: drift,
                    residual_l2: drift,
                    tolerance: 1e-8,
                    pass: drift < 1e-8,
                };
                emit_report(&rep, &args.report, "verify conserved")?;
                Ok(rep.pass)
            }

            VerifyAction::CriticalPoint(args) => {
                let p = breather_from_spec(&args.spec)?;
                let grid = parse_grid(&args.grid)?;
                let sol = Solution::Breather(p);
                let b = sample_solution(&sol, 0.0, grid, 0.0);
                // deterministic direction from the seed
                let mut state = args.seed.wrapping_mul(0x9e3779b97f4a7c15).max(1);
                let mut next = move || {
                    state ^= state << 13;
                    state ^= state >> 7;
                    state ^= state << 17;
                    (state >> 11) as f64 / (1u64 << 53) as f64
                };
                let (a, x0, wdt, k) = (
                    2.0 * next() - 1.0,
                    6.0 * next() - 3.0,
                    2.0 + 4.0 * next(),
                    0.4 + 1.1 * next(),
                );
                let z = GridFunction::from_fn(grid, |x| {
                    a * (-(x - x0) * (x - x0) / wdt).exp() * (k * x).cos()
                });
                let z = z.scale(1.0 / z.sobolev_norm(2.0));
                let eps: Vec<f64> = (0..9).map(|i| 1e-3 * 10f64.powf(i as f64 / 4.0)).collect();
                let w = SpectralCoefficients::new(p.alpha, p.beta);
                let rep_cp = critical_point_expansion(&b, &z, p.mu, w, &eps);
                let pass = rep_cp.first_variation.abs() < 1e-6 * rep_cp.z_norm
                    && (rep_cp.slope - 3.0).abs() <= 0.1;
                let rep = VerificationReport {
                    test: "critical-point".into(),
                    params: json!({
                        "n": p.n, "alpha": p.alpha, "beta": p.beta, "mu": p.mu,
                        "seed": args.seed, "slope": rep_cp.slope,
                        "difference_quotient": rep_cp.difference_quotient,
                    }),
                    residual_inf: rep_cp.first_variation.abs(),
                    residual_l2: rep_cp.first_variation.abs(),
                    tolerance: 1e-6 * rep_cp.z_norm,
                    pass,
                };
                emit_report(&rep, &args.report, "verify critical-point")?;
                println!("remainder slope: {:.3} (cubic expected)", rep_cp.slope);
                Ok(rep.pass)
            }
        },

        Command::Evolve(args) => {
            let grid = parse_grid(&args.grid)?;
            let eq = gardner_rhs(args.n).map_err(|e| e.to_string())?;
            let (u0, exact): (GridFunction, Option<Solution>) = match args.init.as_str() {
                "breather" => {
                    let p = BreatherParams::new(
                        args.n,
                        args.alpha.ok_or("--alpha is required")?,
                        args.beta.ok_or("--beta is required")?,
                        args.mu,
                        0.0,
                        0.0,
                    )
                    .map_err(|e| e.to_string())?;
                    let sol = Solution::Breather(p);
                    (sample_solution(&sol, 0.0, grid, 0.0), Some(sol))
                }
                "soliton" => {
                    let p = SolitonParams::new(args.n, args.c.ok_or("--c is required")?, args.mu)
                        .map_err(|e| e.to_string())?;
                    let sol = Solution::Soliton(p);
                    (sample_solution(&sol, 0.0, grid, 0.0), Some(sol))
                }
                other => {
                    let path = other
                        .strip_prefix("file:")
                        .ok_or_else(|| format!("unknown init {other:?}"))?;
                    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
                    let values: Vec<f64> = text
                        .lines()
                        .filter(|l| !l.trim().is_empty())
                        .map(|l| l.trim().parse().map_err(|e| format!("{e}")))
                        .collect::<Result<_, _>>()?;
                    (
                        GridFunction::from_values(grid, values).map_err(|e| e.to_string())?,
                        None,
                    )
                }
            };
            let amp = 1.25 * u0.max_abs();
            let dt = args
                .dt
                .unwrap_or_else(|| EvolveConfig::default_dt(&eq, args.mu, grid, amp));
            let cfg = EvolveConfig::new(eq, args.mu, grid, dt, args.t_end, args.dealias, amp)
                .map_err(|e| e.to_string())?;
            let traj = evolve(&cfg, &u0).map_err(|e| e.to_string())?;
            std::fs::create_dir_all(&args.out).map_err(|e| e.to_string())?;
            let mut outputs = Vec::new();
            for (i, (t, u)) in traj.checkpoints.iter().enumerate() {
                let path = args.out.join(format!("checkpoint_{i:02}.csv"));
                let rows: Vec<Vec<f64>> = (0..grid.len())
                    .map(|j| vec![grid.point(j), u.values()[j]])
                    .collect();
                write_csv(&path, &["x", "value"], &rows).map_err(|e| e.to_string())?;
                let _ = t;
                outputs.push(path);
            }
            let w = SpectralCoefficients::new(args.alpha.unwrap_or(1.0), args.beta.unwrap_or(1.0));
            let drift = conservation_drift(&traj, args.mu, w);
            let mut summary = json!({
                "dt": dt,
                "t_end": args.t_end,
                "checkpoints": traj.checkpoints.iter().map(|(t, _)| *t).collect::<Vec<_>>(),
                "drift": {
                    "mass": drift.mass,
                    "energy": drift.energy,
                    "higher_energy": drift.higher_energy,
                    "lyapunov": drift.lyapunov,
                },
            });
            if let Some(sol) = exact {
                let reference = sample_solution(&sol, args.t_end, grid, 0.0);
                summary["error_vs_closed_form"] =
                    json!(traj.final_state().sub(&reference).max_abs());
            }
            let drift_path = args.out.join("drift.json");
            write_json(&drift_path, &summary).map_err(|e| e.to_string())?;
            RunManifest::new(
                "evolve",
                json!({"n": args.n, "mu": args.mu, "init": args.init, "dt": dt,
                       "t_end": args.t_end, "grid": args.grid, "dealias": args.dealias}),
                &[&drift_path],
            )
            .write_beside(&drift_path)
            .map_err(|e| e.to_string())?;
            println!(
                "evolved to t = {} in {} checkpoints; max drift {:.3e}; outputs in {}",
                args.t_end,
                traj.checkpoints.len(),
                drift.max(),
                args.out.display()
            );
            Ok(true)
        }

        Command::Illposed(args) => {
            if args.alpha.is_empty() {
                return Err("at least one --alpha is required".into());
            }
            let base = IllposedConfig {
                n: args.n,
                s: args.s,
                alpha: args.alpha[0],
                delta_sep: args.delta,
                mu: args.mu,
                t_final: args.t_final,
            };
            let reports = sweep(&base, &args.alpha);
            let mut rows = Vec::new();
            let mut all = Vec::new();
            for r in reports {
                let r = r.map_err(|e| e.to_string())?;
                println!(
                    "alpha = {:>6.1}: d0 = {:.4}, dT = {:.4}, ratio = {:.2} (T = {:.3})",
                    r.alpha, r.d_initial, r.d_final, r.ratio, r.t_final
                );
                rows.push(vec![r.alpha, r.s, r.d_initial, r.d_final, r.ratio]);
                all.push(r);
            }
            write_json(&args.report, &all).map_err(|e| e.to_string())?;
            let csv_path = args.report.with_extension("csv");
            write_csv(&csv_path, &["alpha", "s", "d0", "dT", "ratio"], &rows)
                .map_err(|e| e.to_string())?;
            RunManifest::new(
                "illposed",
                json!({"n": args.n, "s": args.s, "alpha": args.alpha, "delta": args.delta, "mu": args.mu}),
                &[&args.report, &csv_path],
            )
            .write_beside(&args.report)
            .map_err(|e| e.to_string())?;
            Ok(true)
        }

        Command::Periodic(args) => {
            if !(args.k > 0.0 && args.k < 1.0) {
                return Err(format!("k must lie in (0, 1); got {}", args.k));
            }
            let (alpha, m, period) =
                commensurability_solve(args.beta, args.k).map_err(|e| e.to_string())?;
            println!("alpha = {alpha:.15}, m = {m:.15}, period = {period:.15}");
            let p = PeriodicBreatherParams::new(args.order, args.beta, args.k, 0.0, 0.0)
                .map_err(|e| e.to_string())?;
            let grid = Grid::new(p.period / 2.0, 1024).map_err(|e| e.to_string())?;
            let eq = mkdv_rhs((args.order - 1) / 2).map_err(|e| e.to_string())?;
            let r = pde_residual(
                &eq,
                &Solution::Periodic(p),
                0.2,
                grid,
                0.0,
                DerivativeRoute::Analytic,
            );
            let rep = VerificationReport {
                test: "periodic".into(),
                params: json!({"order": args.order, "beta": args.beta, "k": args.k,
                               "alpha": alpha, "m": m, "period": period}),
                residual_inf: r.max_abs(),
                residual_l2: residual_l2(&r.field),
                tolerance: 1e-6 * r.scale,
                pass: r.relative() < 1e-6,
            };
            emit_report(&rep, &args.report, "periodic")?;
            Ok(rep.pass)
        }

        Command::Suite(args) => {
            let ids: Vec<u32> = if args.all || args.criteria.is_empty() {
                (1..=10).collect()
            } else {
                args.criteria.clone()
            };
            let mut reports = Vec::new();
            let mut all_pass = true;
            for id in ids {
                let rep = ghl::suite::run_one(id).ok_or(format!("no criterion {id}"))?;
                println!(
                    "criterion {:>2} [{}] {} ({:.2} s)",
                    rep.id,
                    if rep.pass { "PASS" } else { "FAIL" },
                    rep.name,
                    rep.seconds
                );
                for line in &rep.details {
                    println!("    {line}");
                }
                all_pass &= rep.pass;
                reports.push(rep);
            }
            if let Some(path) = args.report {
                write_json(&path, &reports).map_err(|e| e.to_string())?;
                RunManifest::new("suite", json!({"all": args.all}), &[&path])
                    .write_beside(&path)
                    .map_err(|e| e.to_string())?;
            }
            println!(
                "suite: {}",
                if all_pass { "all criteria pass" } else { "FAILURES present" }
            );
            Ok(all_pass)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
