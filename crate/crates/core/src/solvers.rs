//! Regularized solvers: LSQR (projected bidiagonal solve), CGLS, truncated
//! SVD, Tikhonov, and the hybrid projected-TSVD variant, all recording full
//! per-iteration traces.

use crate::bidiag::{bidiagonalize, ritz_values, BidiagFactors, Reorth};
use crate::error::{Error, Result};
use crate::linalg::{solve_lower_bidiagonal, Mat, SvdFactors, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Lsqr,
    Cgls,
    Tsvd,
    Tikhonov,
    Hybrid,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Lsqr => "lsqr",
            Method::Cgls => "cgls",
            Method::Tsvd => "tsvd",
            Method::Tikhonov => "tikhonov",
            Method::Hybrid => "hybrid",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lsqr" => Ok(Method::Lsqr),
            "cgls" => Ok(Method::Cgls),
            "tsvd" => Ok(Method::Tsvd),
            "tikhonov" => Ok(Method::Tikhonov),
            "hybrid" => Ok(Method::Hybrid),
            other => Err(Error::InvalidParameter(format!("unknown solver {other:?}"))),
        }
    }
}

/// Per-iteration record of a regularized solve. Index `i` of each column
/// holds the iterate for regularization parameter `k = i + 1` (or the i-th
/// lambda for Tikhonov).
#[derive(Debug, Clone)]
pub struct SolveTrace {
    pub method: Method,
    pub iterates: Vec<Vector>,
    pub residual_norms: Vec<f64>,
    pub solution_norms: Vec<f64>,
    /// `||x^(k) - x_true|| / ||x_true||` when the true solution is known.
    pub rel_errors: Option<Vec<f64>>,
    /// Ritz values per step, for Krylov methods.
    pub ritz: Option<Vec<Vec<f64>>>,
    /// Lambda grid, for Tikhonov traces.
    pub lambdas: Option<Vec<f64>>,
}

impl SolveTrace {
    pub fn len(&self) -> usize {
        self.iterates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.iterates.is_empty()
    }
}

fn rel_error(x: &Vector, x_true: &Vector) -> f64 {
    (x - x_true).norm() / x_true.norm()
}

/// LSQR via the explicit projected solve: `x^(k) = Q_k y^(k)` where `y^(k)`
/// minimizes `|| B_k y - ||b|| e_1 ||`. The bidiagonal factors are needed by
/// every diagnostic anyway, so the coupled short-recurrence form buys
/// nothing here.
pub fn lsqr_run(
    a: &Mat,
    b: &Vector,
    x_true: Option<&Vector>,
    kmax: usize,
    reorth: Reorth,
    breakdown_tol: f64,
) -> Result<(SolveTrace, BidiagFactors)> {
    let factors = bidiagonalize(a, b, kmax, reorth, breakdown_tol)?;
    let trace = lsqr_trace_from_factors(a, b, x_true, &factors)?;
    Ok((trace, factors))
}

/// Build the LSQR trace from precomputed factors.
pub fn lsqr_trace_from_factors(
    a: &Mat,
    b: &Vector,
    x_true: Option<&Vector>,
    factors: &BidiagFactors,
) -> Result<SolveTrace> {
    let bnorm = b.norm();
    let mut iterates = Vec::with_capacity(factors.k);
    let mut residual_norms = Vec::with_capacity(factors.k);
    let mut solution_norms = Vec::with_capacity(factors.k);
    let mut rel_errors = x_true.map(|_| Vec::with_capacity(factors.k));
    let mut ritz = Vec::with_capacity(factors.k);

    for k in 1..=factors.k {
        let nbeta = factors.beta.len().min(k);
        let mut beta = factors.beta[..nbeta].to_vec();
        beta.resize(k, 0.0);
        let mut rhs = vec![0.0; k + 1];
        rhs[0] = bnorm;
        let (y, _) = solve_lower_bidiagonal(&factors.alpha[..k], &beta, &rhs)?;
        let x = factors.q.columns(0, k) * &y;
        residual_norms.push((a * &x - b).norm());
        solution_norms.push(x.norm());
        if let (Some(errs), Some(xt)) = (rel_errors.as_mut(), x_true) {
            errs.push(rel_error(&x, xt));
        }
        ritz.push(ritz_values(factors, k)?.iter().copied().collect());
        iterates.push(x);
    }

    Ok(SolveTrace {
        method: Method::Lsqr,
        iterates,
        residual_norms,
        solution_norms,
        rel_errors,
        ritz: Some(ritz),
        lambdas: None,
    })
}

/// Classical CGLS: CG on the normal equations `A^T A x = A^T b` from
/// `x^(0) = 0`, no reorthogonalization. Mathematically the iterates equal
/// LSQR's; in floating point they drift apart once the iteration reaches
/// the noise floor.
pub fn cgls_run(a: &Mat, b: &Vector, x_true: Option<&Vector>, kmax: usize) -> Result<SolveTrace> {
    if b.norm() == 0.0 {
        return Err(Error::ZeroVector);
    }
    let n = a.ncols();
    let mut x = Vector::zeros(n);
    let mut r = b.clone();
    let mut s = a.tr_mul(&r);
    let mut p = s.clone();
    let mut gamma = s.norm_squared();

    let mut iterates = Vec::with_capacity(kmax);
    let mut residual_norms = Vec::with_capacity(kmax);
    let mut solution_norms = Vec::with_capacity(kmax);
    let mut rel_errors = x_true.map(|_| Vec::with_capacity(kmax));

    for _ in 0..kmax {
        let q = a * &p;
        let qn = q.norm_squared();
        if qn == 0.0 || gamma == 0.0 {
            break;
        }
        let step = gamma / qn;
        x += step * &p;
        r -= step * q;
        s = a.tr_mul(&r);
        let gnew = s.norm_squared();
        p = &s + (gnew / gamma) * p;
        gamma = gnew;

        residual_norms.push(r.norm());
        solution_norms.push(x.norm());
        if let (Some(errs), Some(xt)) = (rel_errors.as_mut(), x_true) {
            errs.push(rel_error(&x, xt));
        }
        iterates.push(x.clone());
    }

    Ok(SolveTrace {
        method: Method::Cgls,
        iterates,
        residual_norms,
        solution_norms,
        rel_errors,
        ritz: None,
        lambdas: None,
    })
}

/// Truncated-SVD solution `sum_{i<=k} (u_i^T b / sigma_i) v_i`.
pub fn tsvd_solve(svd: &SvdFactors, b: &Vector, k: usize) -> Result<Vector> {
    let n = svd.sigma.len();
    if k == 0 || k > n {
        return Err(Error::OutOfRange(format!("tsvd truncation k={k}, n={n}")));
    }
    let c = svd.coefficients(b);
    let mut x = Vector::zeros(svd.v.nrows());
    for i in 0..k {
        x += (c[i] / svd.sigma[i]) * svd.v.column(i).into_owned();
    }
    Ok(x)
}

/// TSVD trace over truncation indices `k = 1..=kmax`.
pub fn tsvd_run(
    a: &Mat,
    svd: &SvdFactors,
    b: &Vector,
    x_true: Option<&Vector>,
    kmax: usize,
) -> Result<SolveTrace> {
    let n = svd.sigma.len();
    let kmax = kmax.min(n);
    let c = svd.coefficients(b);
    let mut x = Vector::zeros(svd.v.nrows());
    let mut iterates = Vec::with_capacity(kmax);
    let mut residual_norms = Vec::with_capacity(kmax);
    let mut solution_norms = Vec::with_capacity(kmax);
    let mut rel_errors = x_true.map(|_| Vec::with_capacity(kmax));
    for i in 0..kmax {
        x += (c[i] / svd.sigma[i]) * svd.v.column(i).into_owned();
        residual_norms.push((a * &x - b).norm());
        solution_norms.push(x.norm());
        if let (Some(errs), Some(xt)) = (rel_errors.as_mut(), x_true) {
            errs.push(rel_error(&x, xt));
        }
        iterates.push(x.clone());
    }
    Ok(SolveTrace {
        method: Method::Tsvd,
        iterates,
        residual_norms,
        solution_norms,
        rel_errors,
        ritz: None,
        lambdas: None,
    })
}

/// Tikhonov solution with filters `f_i = sigma_i^2 / (sigma_i^2 + lambda^2)`.
pub fn tikhonov_solve(svd: &SvdFactors, b: &Vector, lambda: f64) -> Result<Vector> {
    if lambda < 0.0 {
        return Err(Error::InvalidParameter(format!("lambda must be >= 0, got {lambda}")));
    }
    let c = svd.coefficients(b);
    let mut x = Vector::zeros(svd.v.nrows());
    for i in 0..svd.sigma.len() {
        let s2 = svd.sigma[i] * svd.sigma[i];
        let f = s2 / (s2 + lambda * lambda);
        x += (f * c[i] / svd.sigma[i]) * svd.v.column(i).into_owned();
    }
    Ok(x)
}

/// Logarithmic lambda grid from `sigma_n` up to `sigma_1`.
pub fn tikhonov_lambda_grid(svd: &SvdFactors, points: usize) -> Vec<f64> {
    let n = svd.sigma.len();
    let lo = svd.sigma[n - 1].max(f64::MIN_POSITIVE).ln();
    let hi = svd.sigma[0].ln();
    (0..points)
        .map(|i| {
            let t = if points > 1 { i as f64 / (points - 1) as f64 } else { 0.0 };
            (lo + t * (hi - lo)).exp()
        })
        .collect()
}

/// Tikhonov trace over a lambda grid.
pub fn tikhonov_run(
    a: &Mat,
    svd: &SvdFactors,
    b: &Vector,
    x_true: Option<&Vector>,
    lambdas: &[f64],
) -> Result<SolveTrace> {
    let mut iterates = Vec::with_capacity(lambdas.len());
    let mut residual_norms = Vec::with_capacity(lambdas.len());
    let mut solution_norms = Vec::with_capacity(lambdas.len());
    let mut rel_errors = x_true.map(|_| Vec::with_capacity(lambdas.len()));
    for &lambda in lambdas {
        let x = tikhonov_solve(svd, b, lambda)?;
        residual_norms.push((a * &x - b).norm());
        solution_norms.push(x.norm());
        if let (Some(errs), Some(xt)) = (rel_errors.as_mut(), x_true) {
            errs.push(rel_error(&x, xt));
        }
        iterates.push(x);
    }
    Ok(SolveTrace {
        method: Method::Tikhonov,
        iterates,
        residual_norms,
        solution_norms,
        rel_errors,
        ritz: None,
        lambdas: Some(lambdas.to_vec()),
    })
}

/// Hybrid iterate: rank-`j` TSVD solution of the k-dimensional projected
/// problem `min || B_k y - ||b|| e_1 ||`, mapped back through `Q_k`.
pub fn hybrid_solve(f: &BidiagFactors, b_norm: f64, k: usize, j: usize) -> Result<Vector> {
    if k == 0 || k > f.k || j == 0 || j > k {
        return Err(Error::OutOfRange(format!("hybrid indices j={j}, k={k}, steps {}", f.k)));
    }
    let bk = f.b_matrix(k)?;
    let svd = bk.svd(true, true);
    let u = svd.u.as_ref().expect("svd with vectors");
    let vt = svd.v_t.as_ref().expect("svd with vectors");
    // singular values are sorted descending by nalgebra's svd()
    let mut y = Vector::zeros(k);
    for i in 0..j {
        let coef = u[(0, i)] * b_norm / svd.singular_values[i];
        y += coef * vt.row(i).transpose();
    }
    Ok(f.q.columns(0, k) * y)
}

/// LSQR/CGLS filter factors `f_i = 1 - prod_j (theta_j^2 - sigma_i^2) / theta_j^2`.
///
/// Evaluated as written; once Ritz values have converged to singular values
/// at rounding level the products are astronomically ill-conditioned, which
/// callers must expect for `k` past the noise floor.
pub fn filter_factors(theta: &[f64], sigma: &[f64]) -> Result<Vec<f64>> {
    if theta.iter().any(|&t| t == 0.0) {
        return Err(Error::InvalidParameter("zero Ritz value in filter factors".into()));
    }
    Ok(sigma
        .iter()
        .map(|&s| {
            let mut prod = 1.0;
            for &t in theta {
                prod *= (t * t - s * s) / (t * t);
            }
            1.0 - prod
        })
        .collect())
}

/// Filtered SVD expansion `sum_i f_i (u_i^T b / sigma_i) v_i`.
pub fn reconstruct_from_filters(svd: &SvdFactors, b: &Vector, f: &[f64]) -> Result<Vector> {
    let n = svd.sigma.len();
    if f.len() != n {
        return Err(Error::Dimension(format!("filter vector length {} != n {}", f.len(), n)));
    }
    let c = svd.coefficients(b);
    let mut x = Vector::zeros(svd.v.nrows());
    for i in 0..n {
        x += (f[i] * c[i] / svd.sigma[i]) * svd.v.column(i).into_owned();
    }
    Ok(x)
}

/// Semi-convergence index: 1-based argmin of the relative error history,
/// smallest index on ties.
pub fn semi_convergence_index(trace: &SolveTrace) -> Result<usize> {
    let errs = trace
        .rel_errors
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter("trace has no relative errors".into()))?;
    if errs.is_empty() {
        return Err(Error::InvalidParameter("empty error history".into()));
    }
    let mut best = 0;
    for (i, &e) in errs.iter().enumerate() {
        if e < errs[best] {
            best = i;
        }
    }
    Ok(best + 1)
}
