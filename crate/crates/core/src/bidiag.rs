//! Golub-Kahan Lanczos bidiagonalization with optional full
//! reorthogonalization, and Ritz values of the projected bidiagonal.
//!
//! Starting from `p_1 = b/||b||`, k steps produce column-orthonormal
//! `P_{k+1}` (m x (k+1)) and `Q_k` (n x k) and a lower bidiagonal `B_k`
//! with diagonal `alpha_1..alpha_k` and subdiagonal `beta_2..beta_{k+1}`
//! such that `A Q_k = P_{k+1} B_k` and `B_k = P_{k+1}^T A Q_k`.

use crate::error::{Error, Result};
use crate::linalg::{Mat, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reorth {
    /// Two modified Gram-Schmidt passes against all stored vectors per new
    /// vector; keeps the bases orthonormal to roughly machine precision.
    Full,
    /// Plain three-term recurrence.
    None,
}

/// Default relative breakdown tolerance for `alpha`/`beta`.
pub const DEFAULT_BREAKDOWN_TOL: f64 = 1e-13;

/// Factors of a k-step Lanczos bidiagonalization.
#[derive(Debug, Clone)]
pub struct BidiagFactors {
    /// Left vectors; m x (k+1) normally, m x k if the run broke down before
    /// producing the trailing left vector.
    pub p: Mat,
    /// Right vectors, n x k.
    pub q: Mat,
    /// Diagonal entries `alpha_1..alpha_k`, all positive.
    pub alpha: Vec<f64>,
    /// Subdiagonal entries `beta_2..beta_{k+1}`; `beta[j]` sits below
    /// `alpha[j]`. One entry shorter than `alpha` after a beta-breakdown.
    pub beta: Vec<f64>,
    /// Completed steps.
    pub k: usize,
    /// Step at which a breakdown was detected, if any.
    pub terminated_early: Option<usize>,
}

impl BidiagFactors {
    /// The leading `(k+1) x k` block `B_k` (missing trailing entries are
    /// zero after an early termination).
    pub fn b_matrix(&self, k: usize) -> Result<Mat> {
        if k == 0 || k > self.k {
            return Err(Error::OutOfRange(format!("B_k block k={k}, have {} steps", self.k)));
        }
        let mut b = Mat::zeros(k + 1, k);
        for j in 0..k {
            b[(j, j)] = self.alpha[j];
            b[(j + 1, j)] = *self.beta.get(j).unwrap_or(&0.0);
        }
        Ok(b)
    }
}

fn orthogonalize(v: &mut Vector, basis: &Mat, cols: usize) {
    if cols == 0 {
        return;
    }
    let q = basis.columns(0, cols);
    for _ in 0..2 {
        let proj = q.tr_mul(&*v);
        *v -= q * proj;
    }
}

/// Run `kmax` steps of Lanczos bidiagonalization on `(A, b)`.
///
/// Stops early, with `terminated_early` set, when a new `alpha` or `beta`
/// falls to `breakdown_tol * ||A||_F`: the Krylov subspace is then
/// numerically invariant and further vectors would be noise.
pub fn bidiagonalize(
    a: &Mat,
    b: &Vector,
    kmax: usize,
    reorth: Reorth,
    breakdown_tol: f64,
) -> Result<BidiagFactors> {
    let (m, n) = (a.nrows(), a.ncols());
    if b.len() != m {
        return Err(Error::Dimension(format!("b has length {}, A has {m} rows", b.len())));
    }
    let bnorm = b.norm();
    if bnorm == 0.0 {
        return Err(Error::ZeroVector);
    }
    let kmax = kmax.min(n);
    let scale = a.norm(); // Frobenius; an upper bound on the 2-norm
    let tol = breakdown_tol * scale;

    let mut p = Mat::zeros(m, kmax + 1);
    let mut q = Mat::zeros(n, kmax);
    let mut alpha = Vec::with_capacity(kmax);
    let mut beta = Vec::with_capacity(kmax);
    p.column_mut(0).copy_from(&(b / bnorm));

    let mut terminated = None;
    let mut k = 0;
    for j in 0..kmax {
        // r = A^T p_j - beta_j q_{j-1}
        let mut r = a.tr_mul(&p.column(j).into_owned());
        if j > 0 {
            r -= beta[j - 1] * q.column(j - 1).into_owned();
        }
        if reorth == Reorth::Full {
            orthogonalize(&mut r, &q, j);
        }
        let aj = r.norm();
        if aj <= tol {
            terminated = Some(j + 1);
            break;
        }
        alpha.push(aj);
        q.column_mut(j).copy_from(&(r / aj));
        k = j + 1;

        // z = A q_j - alpha_j p_j
        let mut z = a * q.column(j).into_owned();
        z -= aj * p.column(j).into_owned();
        if reorth == Reorth::Full {
            orthogonalize(&mut z, &p, j + 1);
        }
        let bj = z.norm();
        if bj <= tol {
            terminated = Some(j + 1);
            break;
        }
        beta.push(bj);
        p.column_mut(j + 1).copy_from(&(z / bj));
    }

    let pcols = if beta.len() == k { k + 1 } else { k };
    Ok(BidiagFactors {
        p: p.columns(0, pcols).into_owned(),
        q: q.columns(0, k).into_owned(),
        alpha,
        beta,
        k,
        terminated_early: terminated,
    })
}

/// Ritz values `theta_1 > ... > theta_k`: the singular values of the
/// leading `(k+1) x k` block of the bidiagonal.
pub fn ritz_values(f: &BidiagFactors, k: usize) -> Result<Vector> {
    let b = f.b_matrix(k)?;
    let mut sv: Vec<f64> = b.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(Vector::from_vec(sv))
}
