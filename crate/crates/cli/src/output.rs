//! CSV and JSON sidecar writers. CSV bodies are byte-deterministic for a
//! fixed config and seed; the timestamp lives only in the JSON sidecar.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use ireg_core::diagnostics::DiagnosticsReport;
use ireg_core::problems::IllPosednessClass;
use ireg_core::solvers::SolveTrace;
use ireg_core::Error;

use crate::config::Resolved;

fn provenance(cfg: &Resolved, seed: u64, cmd: &str) -> String {
    format!(
        "# problem={} n={} eps={:e} seed={} cmd={:?}\n",
        cfg.problem, cfg.n, cfg.eps, seed, cmd
    )
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:?}")).unwrap_or_default()
}

pub fn write_trace_csv(
    path: &Path,
    trace: &SolveTrace,
    cfg: &Resolved,
    seed: u64,
    cmd: &str,
) -> Result<(), Error> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(provenance(cfg, seed, cmd).as_bytes())?;
    let param_col = match trace.lambdas {
        Some(_) => ",lambda",
        None => "",
    };
    writeln!(w, "k,res_norm,sol_norm,rel_err{param_col}")?;
    for i in 0..trace.len() {
        let err = trace.rel_errors.as_ref().map(|e| e[i]);
        write!(
            w,
            "{},{:?},{:?},{}",
            i + 1,
            trace.residual_norms[i],
            trace.solution_norms[i],
            fmt_opt(err)
        )?;
        if let Some(l) = &trace.lambdas {
            write!(w, ",{:?}", l[i])?;
        }
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_diagnostics_csv(
    path: &Path,
    report: &DiagnosticsReport,
    cfg: &Resolved,
    seed: u64,
    cmd: &str,
) -> Result<(), Error> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(provenance(cfg, seed, cmd).as_bytes())?;
    writeln!(
        w,
        "k,gamma,sigma_next,near_best,sin_theta,tan_theta,delta_norm,L_max,xi,theta_min,theta_max,interlace_ok,alpha_next,beta_next2,decay_ok"
    )?;
    for r in &report.rows {
        writeln!(
            w,
            "{},{:?},{:?},{},{:?},{:?},{},{},{},{:?},{:?},{},{},{},{}",
            r.k,
            r.gamma,
            r.sigma_next,
            r.near_best,
            r.sin_theta,
            r.tan_theta,
            fmt_opt(r.delta_norm),
            fmt_opt(r.l_max),
            fmt_opt(r.xi),
            r.theta_min,
            r.theta_max,
            r.interlace_ok,
            fmt_opt(r.alpha_next),
            fmt_opt(r.beta_next2),
            r.decay_ok
        )?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_compare_csv(
    path: &Path,
    lsqr: &SolveTrace,
    tsvd: &SolveTrace,
    cfg: &Resolved,
    seed: u64,
    cmd: &str,
) -> Result<(), Error> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(provenance(cfg, seed, cmd).as_bytes())?;
    writeln!(w, "k,lsqr_rel_err,lsqr_res_norm,tsvd_rel_err,tsvd_res_norm")?;
    let rows = lsqr.len().max(tsvd.len());
    let le = lsqr.rel_errors.as_ref().unwrap();
    let te = tsvd.rel_errors.as_ref().unwrap();
    for i in 0..rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            i + 1,
            if i < le.len() { format!("{:?}", le[i]) } else { String::new() },
            if i < lsqr.len() { format!("{:?}", lsqr.residual_norms[i]) } else { String::new() },
            if i < te.len() { format!("{:?}", te[i]) } else { String::new() },
            if i < tsvd.len() { format!("{:?}", tsvd.residual_norms[i]) } else { String::new() },
        )?;
    }
    w.flush()?;
    Ok(())
}

/// Bidiagonal entry sequences as CSV columns `k, alpha, beta`.
pub fn write_entries_csv(
    path: &Path,
    alpha: &[f64],
    beta: &[f64],
    cfg: &Resolved,
    seed: u64,
    cmd: &str,
) -> Result<(), Error> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(provenance(cfg, seed, cmd).as_bytes())?;
    writeln!(w, "k,alpha,beta")?;
    for (i, &a) in alpha.iter().enumerate() {
        writeln!(w, "{},{:?},{}", i + 1, a, fmt_opt(beta.get(i).copied()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn class_line(c: &IllPosednessClass) -> String {
    match c.kind {
        ireg_core::problems::DecayKind::Severe => format!(
            "severe (rho = {:.4}, fit residual {:.3}, range {}..={})",
            c.rho.unwrap(),
            c.fit_residual,
            c.fit_range.0,
            c.fit_range.1
        ),
        _ => format!(
            "{} (alpha = {:.4}, fit residual {:.3}, range {}..={})",
            c.kind,
            c.alpha.unwrap(),
            c.fit_residual,
            c.fit_range.0,
            c.fit_range.1
        ),
    }
}

pub fn class_json(c: &IllPosednessClass) -> serde_json::Value {
    serde_json::json!({
        "kind": c.kind.to_string(),
        "rho": c.rho,
        "alpha": c.alpha,
        "zeta": c.zeta,
        "fit_range": [c.fit_range.0, c.fit_range.1],
        "fit_residual": c.fit_residual,
    })
}

pub fn write_meta(
    path: &Path,
    cfg: &Resolved,
    command: &str,
    cmd_line: &str,
    extra: serde_json::Value,
) -> Result<(), Error> {
    let timestamp = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let meta = serde_json::json!({
        "command": command,
        "command_line": cmd_line,
        "problem": cfg.problem,
        "n": cfg.n,
        "eps": cfg.eps,
        "seeds": cfg.seeds,
        "solver": cfg.solver,
        "kmax": cfg.kmax,
        "reorth": cfg.reorth,
        "format": cfg.format,
        "k0_threshold": cfg.k0_threshold,
        "breakdown_tol": cfg.breakdown_tol,
        "timestamp_unix": timestamp,
        "result": extra,
    });
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, &meta)
        .map_err(|e| Error::Parse(format!("json write: {e}")))?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}
