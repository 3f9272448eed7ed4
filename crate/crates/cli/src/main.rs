//! `ireg` — experiment runner for Lanczos-bidiagonalization regularization
//! studies on the classical discrete ill-posed test problems.
//!
//! Subcommands: `gen`, `solve`, `diagnose`, `classify`, `compare`.
//! Exit codes: 0 success, 1 usage error, 2 numerical precondition failure,
//! 3 io failure.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use ireg_core::bidiag::{bidiagonalize, Reorth};
use ireg_core::diagnostics::compute_report;
use ireg_core::linalg::svd;
use ireg_core::noise::{add_white_noise, estimate_k0};
use ireg_core::problems::{classify_decay, generate, ProblemName};
use ireg_core::solvers::{
    cgls_run, hybrid_solve, lsqr_trace_from_factors, semi_convergence_index,
    tikhonov_lambda_grid, tikhonov_run, tsvd_run, Method, SolveTrace,
};
use ireg_core::Error;

use config::{resolve, FileConfig, Overrides, Resolved};

#[derive(Parser)]
#[command(name = "ireg", version, about = "Krylov regularization experiment runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// JSON config file; flags override file values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Test problem: shaw | wing | heat | phillips | deriv2.
    #[arg(long)]
    problem: Option<String>,
    /// Problem dimension (>= 8).
    #[arg(long)]
    n: Option<usize>,
    /// Relative noise level in (0, 1).
    #[arg(long)]
    eps: Option<f64>,
    /// Noise seed; repeat for a seed sweep.
    #[arg(long = "seed")]
    seeds: Vec<u64>,
    /// Iteration / truncation limit.
    #[arg(long)]
    kmax: Option<usize>,
    /// Reorthogonalization: full | none.
    #[arg(long)]
    reorth: Option<String>,
    /// Output directory.
    #[arg(long = "out")]
    outputs: Option<PathBuf>,
    /// Output format: csv | json.
    #[arg(long)]
    format: Option<String>,
    /// Signal/noise separation factor for the transition index.
    #[arg(long = "k0-threshold")]
    k0_threshold: Option<f64>,
    /// Relative breakdown tolerance for the bidiagonalization.
    #[arg(long = "breakdown-tol")]
    breakdown_tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a test problem and write A, x_true, b_hat and metadata.
    Gen(CommonArgs),
    /// Run a regularized solver and write per-seed iteration traces.
    Solve {
        #[command(flatten)]
        common: CommonArgs,
        /// Solver: lsqr | cgls | tsvd | tikhonov | hybrid.
        #[arg(long)]
        solver: Option<String>,
    },
    /// Write the full per-k diagnostics report per seed.
    Diagnose(CommonArgs),
    /// Print the degree of ill-posedness via bidiagonal entries and via the SVD.
    Classify(CommonArgs),
    /// Aligned LSQR-vs-TSVD error curves plus a summary.
    Compare(CommonArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version are not errors
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Gen(c) => run_gen(c),
        Command::Solve { common, solver } => run_solve(common, solver),
        Command::Diagnose(c) => run_diagnose(c),
        Command::Classify(c) => run_classify(c),
        Command::Compare(c) => run_compare(c),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::UnknownProblem(_) => 1,
        Error::Io(_) | Error::Parse(_) => 3,
        _ => 2,
    }
}

fn common_to_resolved(c: &CommonArgs, solver: Option<String>) -> Result<Resolved, Error> {
    let file = match &c.config {
        Some(path) => FileConfig::load(path).map_err(Error::Parse)?,
        None => FileConfig::default(),
    };
    Ok(resolve(
        file,
        Overrides {
            problem: c.problem.clone(),
            n: c.n,
            eps: c.eps,
            seeds: c.seeds.clone(),
            solver,
            kmax: c.kmax,
            reorth: c.reorth.clone(),
            outputs: c.outputs.clone(),
            format: c.format.clone(),
            k0_threshold: c.k0_threshold,
            breakdown_tol: c.breakdown_tol,
        },
    ))
}

fn parse_reorth(s: &str) -> Result<Reorth, Error> {
    match s {
        "full" => Ok(Reorth::Full),
        "none" => Ok(Reorth::None),
        other => Err(Error::InvalidParameter(format!("reorth must be full|none, got {other:?}"))),
    }
}

fn command_line() -> String {
    std::env::args().collect::<Vec<_>>().join(" ")
}

fn run_gen(c: CommonArgs) -> Result<(), Error> {
    let cfg = common_to_resolved(&c, None)?;
    let name = ProblemName::from_str(&cfg.problem)?;
    let p = generate(name, cfg.n)?;
    std::fs::create_dir_all(&cfg.outputs)?;
    ireg_core::io::write_matrix_binary(&cfg.outputs.join("A.iregmat"), &p.a)?;
    ireg_core::io::write_vector_csv(&cfg.outputs.join("x_true.csv"), &p.x_true)?;
    ireg_core::io::write_vector_csv(&cfg.outputs.join("b_hat.csv"), &p.b_hat)?;
    output::write_meta(
        &cfg.outputs.join("meta.json"),
        &cfg,
        "gen",
        &command_line(),
        serde_json::json!({ "files": ["A.iregmat", "x_true.csv", "b_hat.csv"] }),
    )?;
    println!("wrote {}", cfg.outputs.display());
    Ok(())
}

fn run_solve(c: CommonArgs, solver: Option<String>) -> Result<(), Error> {
    let cfg = common_to_resolved(&c, solver)?;
    let name = ProblemName::from_str(&cfg.problem)?;
    let method = Method::from_str(&cfg.solver)?;
    let reorth = parse_reorth(&cfg.reorth)?;
    let p = generate(name, cfg.n)?;
    let needs_svd = matches!(method, Method::Tsvd | Method::Tikhonov);
    let fsvd = if needs_svd { Some(svd(&p.a)?) } else { None };
    std::fs::create_dir_all(&cfg.outputs)?;

    for &seed in &cfg.seeds {
        let np = add_white_noise(&p, cfg.eps, seed)?;
        let trace = match method {
            Method::Lsqr => {
                let f = bidiagonalize(&p.a, &np.b, cfg.kmax, reorth, cfg.breakdown_tol)?;
                lsqr_trace_from_factors(&p.a, &np.b, Some(&p.x_true), &f)?
            }
            Method::Cgls => cgls_run(&p.a, &np.b, Some(&p.x_true), cfg.kmax)?,
            Method::Tsvd => {
                tsvd_run(&p.a, fsvd.as_ref().unwrap(), &np.b, Some(&p.x_true), cfg.kmax)?
            }
            Method::Tikhonov => {
                let grid = tikhonov_lambda_grid(fsvd.as_ref().unwrap(), 40);
                tikhonov_run(&p.a, fsvd.as_ref().unwrap(), &np.b, Some(&p.x_true), &grid)?
            }
            Method::Hybrid => hybrid_trace(&p, &np.b, &cfg, reorth)?,
        };
        let stem = format!("trace_{}_seed{}", method.as_str(), seed);
        output::write_trace_csv(
            &cfg.outputs.join(format!("{stem}.csv")),
            &trace,
            &cfg,
            seed,
            &command_line(),
        )?;
        let kstar = semi_convergence_index(&trace).ok();
        output::write_meta(
            &cfg.outputs.join(format!("{stem}.json")),
            &cfg,
            "solve",
            &command_line(),
            serde_json::json!({
                "seed": seed,
                "method": method.as_str(),
                "iterations": trace.len(),
                "best_index": kstar,
                "best_rel_error": kstar
                    .and_then(|k| trace.rel_errors.as_ref().map(|e| e[k - 1])),
            }),
        )?;
    }
    println!("wrote {} trace(s) to {}", cfg.seeds.len(), cfg.outputs.display());
    Ok(())
}

/// Hybrid trace: fix k = k* + 5 from an LSQR pilot run, then sweep the
/// projected truncation j = 1..=k.
fn hybrid_trace(
    p: &ireg_core::problems::Problem,
    b: &ireg_core::Vector,
    cfg: &Resolved,
    reorth: Reorth,
) -> Result<SolveTrace, Error> {
    let f = bidiagonalize(&p.a, b, cfg.kmax, reorth, cfg.breakdown_tol)?;
    let pilot = lsqr_trace_from_factors(&p.a, b, Some(&p.x_true), &f)?;
    let kstar = semi_convergence_index(&pilot)?;
    let k = (kstar + 5).min(f.k);
    let bnorm = b.norm();
    let mut iterates = Vec::with_capacity(k);
    let mut residual_norms = Vec::with_capacity(k);
    let mut solution_norms = Vec::with_capacity(k);
    let mut rel_errors = Vec::with_capacity(k);
    for j in 1..=k {
        let x = hybrid_solve(&f, bnorm, k, j)?;
        residual_norms.push((&p.a * &x - b).norm());
        solution_norms.push(x.norm());
        rel_errors.push((&x - &p.x_true).norm() / p.x_true.norm());
        iterates.push(x);
    }
    Ok(SolveTrace {
        method: Method::Hybrid,
        iterates,
        residual_norms,
        solution_norms,
        rel_errors: Some(rel_errors),
        ritz: None,
        lambdas: None,
    })
}

fn run_diagnose(c: CommonArgs) -> Result<(), Error> {
    let cfg = common_to_resolved(&c, None)?;
    let name = ProblemName::from_str(&cfg.problem)?;
    let reorth = parse_reorth(&cfg.reorth)?;
    let p = generate(name, cfg.n)?;
    let fsvd = svd(&p.a)?;
    std::fs::create_dir_all(&cfg.outputs)?;
    for &seed in &cfg.seeds {
        let np = add_white_noise(&p, cfg.eps, seed)?;
        let k0 = estimate_k0(&fsvd, &np.b, np.eta, cfg.k0_threshold)?;
        let f = bidiagonalize(&p.a, &np.b, cfg.kmax, reorth, cfg.breakdown_tol)?;
        let report = compute_report(&p.a, &fsvd, &f, &np.b)?;
        let stem = format!("diagnostics_seed{seed}");
        output::write_diagnostics_csv(
            &cfg.outputs.join(format!("{stem}.csv")),
            &report,
            &cfg,
            seed,
            &command_line(),
        )?;
        output::write_meta(
            &cfg.outputs.join(format!("{stem}.json")),
            &cfg,
            "diagnose",
            &command_line(),
            serde_json::json!({
                "seed": seed,
                "k0": k0,
                "steps": f.k,
                "entry_class": report.entry_class.as_ref().map(output::class_json),
            }),
        )?;
    }
    println!("wrote {} report(s) to {}", cfg.seeds.len(), cfg.outputs.display());
    Ok(())
}

fn run_classify(c: CommonArgs) -> Result<(), Error> {
    let cfg = common_to_resolved(&c, None)?;
    let name = ProblemName::from_str(&cfg.problem)?;
    let reorth = parse_reorth(&cfg.reorth)?;
    let p = generate(name, cfg.n)?;
    let seed = cfg.seeds.first().copied().unwrap_or(1);
    let np = add_white_noise(&p, cfg.eps, seed)?;

    // Entry route: no SVD involved.
    let f = bidiagonalize(&p.a, &np.b, cfg.kmax, reorth, cfg.breakdown_tol)?;
    let m = f.alpha.len().min(f.beta.len());
    let sums: Vec<f64> = (0..m).map(|i| f.alpha[i] + f.beta[i]).collect();
    let entry_class = classify_decay(&sums)?;
    println!("entry route ({} bidiagonal entries): {}", m, output::class_line(&entry_class));

    let fsvd = svd(&p.a)?;
    let sigma: Vec<f64> = fsvd.sigma.iter().copied().collect();
    let svd_class = classify_decay(&sigma)?;
    println!("svd route   ({} singular values):    {}", sigma.len(), output::class_line(&svd_class));

    if cfg.outputs != PathBuf::from(".") {
        std::fs::create_dir_all(&cfg.outputs)?;
        output::write_entries_csv(
            &cfg.outputs.join("entries.csv"),
            &f.alpha,
            &f.beta,
            &cfg,
            seed,
            &command_line(),
        )?;
        output::write_meta(
            &cfg.outputs.join("classify.json"),
            &cfg,
            "classify",
            &command_line(),
            serde_json::json!({
                "seed": seed,
                "entry_route": output::class_json(&entry_class),
                "svd_route": output::class_json(&svd_class),
            }),
        )?;
    }
    Ok(())
}

fn run_compare(c: CommonArgs) -> Result<(), Error> {
    let cfg = common_to_resolved(&c, None)?;
    let name = ProblemName::from_str(&cfg.problem)?;
    let reorth = parse_reorth(&cfg.reorth)?;
    let p = generate(name, cfg.n)?;
    let fsvd = svd(&p.a)?;
    std::fs::create_dir_all(&cfg.outputs)?;

    let mut summary_rows = Vec::new();
    for &seed in &cfg.seeds {
        let np = add_white_noise(&p, cfg.eps, seed)?;
        let f = bidiagonalize(&p.a, &np.b, cfg.kmax, reorth, cfg.breakdown_tol)?;
        let lsqr = lsqr_trace_from_factors(&p.a, &np.b, Some(&p.x_true), &f)?;
        let tsvd = tsvd_run(&p.a, &fsvd, &np.b, Some(&p.x_true), cfg.kmax)?;
        output::write_compare_csv(
            &cfg.outputs.join(format!("compare_seed{seed}.csv")),
            &lsqr,
            &tsvd,
            &cfg,
            seed,
            &command_line(),
        )?;
        let lk = semi_convergence_index(&lsqr)?;
        let tk = semi_convergence_index(&tsvd)?;
        let le = lsqr.rel_errors.as_ref().unwrap()[lk - 1];
        let te = tsvd.rel_errors.as_ref().unwrap()[tk - 1];
        summary_rows.push(serde_json::json!({
            "seed": seed,
            "lsqr_best_index": lk,
            "lsqr_best_rel_error": le,
            "tsvd_best_index": tk,
            "tsvd_best_rel_error": te,
            "error_ratio": le / te,
        }));
    }
    let agg = |key: &str| -> serde_json::Value {
        let mut v: Vec<f64> =
            summary_rows.iter().map(|r| r[key].as_f64().unwrap()).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        serde_json::json!({
            "median": v[v.len() / 2],
            "min": v[0],
            "max": v[v.len() - 1],
        })
    };
    let summary = serde_json::json!({
        "per_seed": summary_rows,
        "lsqr_best_rel_error": agg("lsqr_best_rel_error"),
        "tsvd_best_rel_error": agg("tsvd_best_rel_error"),
        "lsqr_best_index": agg("lsqr_best_index"),
        "tsvd_best_index": agg("tsvd_best_index"),
    });
    output::write_meta(
        &cfg.outputs.join("compare_summary.json"),
        &cfg,
        "compare",
        &command_line(),
        summary,
    )?;
    println!("wrote comparison for {} seed(s) to {}", cfg.seeds.len(), cfg.outputs.display());
    Ok(())
}
