//! Quantities the regularization theory bounds, and the bound checks
//! themselves: rank-k approximation errors `gamma_k`, near-best flags,
//! Krylov-vs-singular-subspace angles (two independent routes), Lagrange
//! weights, Ritz-value interlacing, bidiagonal entry decay, and the
//! extremal Rayleigh quotient.

use crate::bidiag::{ritz_values, BidiagFactors};
use crate::error::{Error, Result};
use crate::linalg::{two_norm, Mat, SvdFactors, Vector};
use crate::problems::{classify_decay, IllPosednessClass};

/// Coefficient products below this magnitude make the Lagrange route for
/// `Delta_k` meaningless; factor-based angles are used instead.
pub const DELTA_UNDERFLOW_GUARD: f64 = 1e-280;

/// `gamma_k = || A (I - Q_k Q_k^T) ||` for `k = 1..=f.k`.
pub fn gamma_seq(a: &Mat, f: &BidiagFactors) -> Vec<f64> {
    (1..=f.k)
        .map(|k| {
            let qk = f.q.columns(0, k);
            let m = a - (a * qk) * qk.transpose();
            two_norm(&m)
        })
        .collect()
}

/// Equivalent form `gamma_k = || A - P_{k+1} B_k Q_k^T ||`; used to
/// cross-check [`gamma_seq`].
pub fn gamma_seq_projected(a: &Mat, f: &BidiagFactors) -> Result<Vec<f64>> {
    (1..=f.k)
        .map(|k| {
            let bk = f.b_matrix(k)?;
            let pcols = (k + 1).min(f.p.ncols());
            let pk = f.p.columns(0, pcols);
            let bk = bk.rows(0, pcols).into_owned();
            let m = a - pk * bk * f.q.columns(0, k).transpose();
            Ok(two_norm(&m))
        })
        .collect()
}

/// Near-best rank-k flags: `gamma_k < (sigma_k + sigma_{k+1}) / 2`.
pub fn near_best_flags(gamma: &[f64], sigma: &[f64]) -> Vec<bool> {
    gamma
        .iter()
        .enumerate()
        .map(|(i, &g)| {
            let k = i + 1;
            if k < sigma.len() {
                g < (sigma[k - 1] + sigma[k]) / 2.0
            } else {
                false
            }
        })
        .collect()
}

/// The coupling matrix `Delta_k` ((n-k) x k) whose norm is the tangent of
/// the largest angle between the k-th Krylov subspace and the dominant
/// right singular subspace.
///
/// Entry (i, j) is `(sigma_{k+i} c_{k+i}) / (sigma_j c_j) * L_j(sigma_{k+i}^2)`
/// with `c = U^T b` and `L_j` the j-th Lagrange polynomial on the abscissas
/// `sigma_1^2..sigma_k^2`. Everything is accumulated in log magnitude with
/// separate sign tracking; the Vandermonde block this represents is never
/// inverted.
pub fn delta_matrix(sigma: &[f64], coeffs: &[f64], k: usize) -> Result<Mat> {
    let n = sigma.len();
    if k == 0 || k >= n || coeffs.len() != n {
        return Err(Error::OutOfRange(format!("delta matrix k={k} for n={n}")));
    }
    for j in 0..k {
        if coeffs[j] == 0.0 {
            return Err(Error::InvalidParameter(format!(
                "zero leading coefficient u_{}^T b",
                j + 1
            )));
        }
        if j + 1 < n && sigma[j] <= sigma[j + 1] {
            return Err(Error::InvalidParameter("singular values must be strictly descending".into()));
        }
    }
    let s2: Vec<f64> = sigma.iter().map(|s| s * s).collect();
    // DEN_j = sum_{l != j} ln |s2_j - s2_l|, l = 1..k
    let den: Vec<f64> = (0..k)
        .map(|j| {
            (0..k)
                .filter(|&l| l != j)
                .map(|l| (s2[j] - s2[l]).abs().ln())
                .sum()
        })
        .collect();
    let mut d = Mat::zeros(n - k, k);
    for i in 0..n - k {
        let (si, ci) = (sigma[k + i], coeffs[k + i]);
        if si == 0.0 || ci == 0.0 {
            continue;
        }
        // NUM_i = sum_{l<=k} ln |s2_{k+i} - s2_l|; all factors negative
        let num: f64 = (0..k).map(|l| (s2[k + i] - s2[l]).abs().ln()).sum();
        for j in 0..k {
            let log_l = num - (s2[k + i] - s2[j]).abs().ln() - den[j];
            let log_mag = si.ln() + ci.abs().ln() + log_l - sigma[j].ln() - coeffs[j].abs().ln();
            let sign_l = if (k - 1 - j) % 2 == 0 { 1.0 } else { -1.0 };
            let sign = sign_l * ci.signum() * coeffs[j].signum();
            d[(i, j)] = sign * log_mag.clamp(-745.0, 700.0).exp();
        }
    }
    Ok(d)
}

/// `sin Theta` from a coupling-matrix norm.
pub fn sin_theta_from_delta(delta_norm: f64) -> f64 {
    delta_norm / (1.0 + delta_norm * delta_norm).sqrt()
}

/// Largest canonical angle between `span(Q_k)` and `span(v_1..v_k)`,
/// computed directly from the factors: `sin = ||(V_k^perp)^T Q_k||`,
/// `tan = sin / sqrt(1 - sin^2)` (infinite when the spaces share no
/// direction at all).
pub fn subspace_angles(svd: &SvdFactors, f: &BidiagFactors, k: usize) -> Result<(f64, f64)> {
    let n = svd.v.ncols();
    if k == 0 || k > f.k || k >= n {
        return Err(Error::OutOfRange(format!("subspace angles k={k}")));
    }
    let vperp = svd.v.columns(k, n - k);
    let m = vperp.tr_mul(&f.q.columns(0, k).into_owned());
    let sin = two_norm(&m).min(1.0);
    let c2 = (1.0 - sin * sin).max(0.0);
    let tan = if c2 == 0.0 { f64::INFINITY } else { sin / c2.sqrt() };
    Ok((sin, tan))
}

/// `|L_j^{(k)}(0)| = prod_{i != j, i <= k} sigma_i^2 / |sigma_j^2 - sigma_i^2|`
/// for `j = 1..=k`, accumulated in log space. Requires `k >= 2`.
pub fn lagrange_weights(sigma: &[f64], k: usize) -> Result<Vec<f64>> {
    if k < 2 {
        return Err(Error::InvalidParameter("Lagrange weights require k >= 2".into()));
    }
    if k > sigma.len() {
        return Err(Error::OutOfRange(format!("k={k} exceeds {} singular values", sigma.len())));
    }
    let s2: Vec<f64> = sigma[..k].iter().map(|s| s * s).collect();
    for j in 1..k {
        if s2[j - 1] <= s2[j] {
            return Err(Error::InvalidParameter("singular values must be strictly descending".into()));
        }
    }
    Ok((0..k)
        .map(|j| {
            let log_w: f64 = (0..k)
                .filter(|&i| i != j)
                .map(|i| s2[i].ln() - (s2[j] - s2[i]).abs().ln())
                .sum();
            log_w.clamp(-745.0, 700.0).exp()
        })
        .collect())
}

/// `xi_k = sqrt((||Delta|| / (1 + ||Delta||^2))^2 + 1)` for `||Delta|| < 1`;
/// capped at `sqrt(5)/2` beyond.
pub fn xi_factor(delta_norm: f64) -> f64 {
    if delta_norm >= 1.0 {
        5.0f64.sqrt() / 2.0
    } else {
        let r = delta_norm / (1.0 + delta_norm * delta_norm);
        (r * r + 1.0).sqrt()
    }
}

/// Strict natural-order interlacing flags per step: `sigma_{i+1} <
/// theta_i^{(k)} < sigma_i` for all `i <= k`, with `1e-12 sigma_1` slack.
pub fn interlacing_report(
    f: &BidiagFactors,
    sigma: &[f64],
    k_range: std::ops::RangeInclusive<usize>,
) -> Result<Vec<bool>> {
    let slack = 1e-12 * sigma[0];
    let mut flags = Vec::new();
    for k in k_range {
        if k > f.k || k >= sigma.len() {
            return Err(Error::OutOfRange(format!("interlacing at k={k}")));
        }
        let theta = ritz_values(f, k)?;
        let ok = (0..k)
            .all(|i| sigma[i + 1] - slack < theta[i] && theta[i] < sigma[i] + slack);
        flags.push(ok);
    }
    Ok(flags)
}

/// Entry-decay checks per step k (all with `1e-12 sigma_1` slack):
/// `alpha_{k+1} < gamma_k`, `beta_{k+2} < gamma_k`,
/// `alpha_{k+1} beta_{k+2} <= gamma_k^2 / 2`, `gamma_{k+1} < gamma_k`.
#[derive(Debug, Clone)]
pub struct EntryDecayChecks {
    pub k: usize,
    pub alpha_ok: Option<bool>,
    pub beta_ok: Option<bool>,
    pub prod_ok: Option<bool>,
    pub gamma_mono_ok: Option<bool>,
}

impl EntryDecayChecks {
    /// True when every applicable inequality holds.
    pub fn all_ok(&self) -> bool {
        [self.alpha_ok, self.beta_ok, self.prod_ok, self.gamma_mono_ok]
            .iter()
            .all(|f| f.unwrap_or(true))
    }
}

#[derive(Debug, Clone)]
pub struct EntryDecayReport {
    pub checks: Vec<EntryDecayChecks>,
    /// The sequence `alpha_k + beta_{k+1}` fed to the decay classifier.
    pub entry_sums: Vec<f64>,
    /// Degree of ill-posedness fitted from the entry sums; absent when
    /// fewer than eight entries survive the rounding floor.
    pub class: Option<IllPosednessClass>,
}

pub fn entry_decay_report(f: &BidiagFactors, gamma: &[f64], sigma1: f64) -> EntryDecayReport {
    let slack = 1e-12 * sigma1;
    let kmax = gamma.len().min(f.k);
    let mut checks = Vec::new();
    for k in 1..=kmax {
        let g = gamma[k - 1];
        let alpha_next = f.alpha.get(k);
        let beta_next2 = f.beta.get(k);
        checks.push(EntryDecayChecks {
            k,
            alpha_ok: alpha_next.map(|&a| a < g + slack),
            beta_ok: beta_next2.map(|&b| b < g + slack),
            prod_ok: alpha_next
                .zip(beta_next2)
                .map(|(&a, &b)| a * b <= g * g / 2.0 + slack * sigma1),
            gamma_mono_ok: gamma.get(k).map(|&gn| gn < g + slack),
        });
    }
    let m = f.alpha.len().min(f.beta.len());
    let entry_sums: Vec<f64> = (0..m).map(|i| f.alpha[i] + f.beta[i]).collect();
    let class = classify_decay(&entry_sums).ok();
    EntryDecayReport { checks, entry_sums, class }
}

/// The unit vector in `span(Q_k)` closest to the subdominant right singular
/// subspace, its Rayleigh quotient with `A^T A`, and the split
/// `sin^2 Theta = 1 - eps_k^2`.
#[derive(Debug, Clone)]
pub struct RayleighExtremal {
    pub q_tilde: Vector,
    /// `q~^T A^T A q~`.
    pub rq: f64,
    pub sin_theta: f64,
    pub eps_k: f64,
}

pub fn rayleigh_extremal(
    a: &Mat,
    f: &BidiagFactors,
    svd: &SvdFactors,
    k: usize,
) -> Result<RayleighExtremal> {
    let n = svd.v.ncols();
    if k == 0 || k > f.k || k >= n {
        return Err(Error::OutOfRange(format!("rayleigh extremal k={k}")));
    }
    let vperp = svd.v.columns(k, n - k);
    let qk = f.q.columns(0, k).into_owned();
    let m = vperp.tr_mul(&qk);
    let msvd = m.svd(true, true);
    let vt = msvd.v_t.as_ref().expect("svd with vectors");
    let sin = msvd.singular_values[0].min(1.0);
    let c = vt.row(0).transpose();
    let q_tilde = &qk * c;
    let rq = (a * &q_tilde).norm_squared();
    let eps_k = (1.0 - sin * sin).max(0.0).sqrt();
    Ok(RayleighExtremal { q_tilde, rq, sin_theta: sin, eps_k })
}

/// One row of the per-k diagnostics table.
#[derive(Debug, Clone)]
pub struct DiagRow {
    pub k: usize,
    pub gamma: f64,
    pub sigma_next: f64,
    pub near_best: bool,
    pub sin_theta: f64,
    pub tan_theta: f64,
    /// Lagrange-route quantities; absent when the coefficient products
    /// underflow the [`DELTA_UNDERFLOW_GUARD`].
    pub delta_norm: Option<f64>,
    pub l_max: Option<f64>,
    pub xi: Option<f64>,
    pub theta_min: f64,
    pub theta_max: f64,
    pub interlace_ok: bool,
    pub alpha_next: Option<f64>,
    pub beta_next2: Option<f64>,
    pub decay_ok: bool,
}

#[derive(Debug, Clone)]
pub struct DiagnosticsReport {
    pub rows: Vec<DiagRow>,
    pub entry_class: Option<IllPosednessClass>,
}

/// Assemble the full per-k diagnostics table for a factorization of `(A, b)`.
pub fn compute_report(
    a: &Mat,
    svd: &SvdFactors,
    f: &BidiagFactors,
    b: &Vector,
) -> Result<DiagnosticsReport> {
    let sigma: Vec<f64> = svd.sigma.iter().copied().collect();
    let coeffs: Vec<f64> = svd.coefficients(b).iter().copied().collect();
    let gamma = gamma_seq(a, f);
    let nb = near_best_flags(&gamma, &sigma);
    let decay = entry_decay_report(f, &gamma, sigma[0]);
    let n = sigma.len();

    let mut rows = Vec::with_capacity(f.k);
    for k in 1..=f.k {
        if k >= n {
            break;
        }
        let (sin_theta, tan_theta) = subspace_angles(svd, f, k)?;
        let delta_route_ok = sigma[k - 1] * coeffs[k - 1].abs() > DELTA_UNDERFLOW_GUARD
            && coeffs[..k].iter().all(|&c| c != 0.0);
        let delta_norm = if delta_route_ok {
            Some(two_norm(&delta_matrix(&sigma, &coeffs, k)?))
        } else {
            None
        };
        let l_max = if k >= 2 {
            lagrange_weights(&sigma, k)
                .ok()
                .map(|w| w.into_iter().fold(0.0f64, f64::max))
        } else {
            None
        };
        let theta = ritz_values(f, k)?;
        let interlace = interlacing_report(f, &sigma, k..=k)?[0];
        rows.push(DiagRow {
            k,
            gamma: gamma[k - 1],
            sigma_next: sigma[k],
            near_best: nb[k - 1],
            sin_theta,
            tan_theta,
            delta_norm,
            l_max,
            xi: delta_norm.map(xi_factor),
            theta_min: theta[k - 1],
            theta_max: theta[0],
            interlace_ok: interlace,
            alpha_next: f.alpha.get(k).copied(),
            beta_next2: f.beta.get(k).copied(),
            decay_ok: decay.checks[k - 1].all_ok(),
        });
    }
    Ok(DiagnosticsReport { rows, entry_class: decay.class })
}
