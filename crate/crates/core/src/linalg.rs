//! Dense matrix kernels: SVD, spectral norm, bidiagonal least squares.
//!
//! The SVD is the analysis oracle everything else is checked against, so it
//! has to be deterministic and accurate on severely ill-conditioned inputs.
//! Symmetric matrices take a symmetric-eigendecomposition fast path (the
//! large test matrices are symmetric); the general path uses implicit-shift
//! bidiagonal QR. Right singular vectors are sign-fixed so that repeated
//! factorizations of the same matrix are identical and subspace comparisons
//! are well defined.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Dense column-major f64 matrix.
pub type Mat = DMatrix<f64>;
/// Dense f64 vector.
pub type Vector = DVector<f64>;

/// Singular value decomposition `A = U diag(sigma) V^T` with thin `U` and
/// square `V`, singular values sorted in strictly decreasing order.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    pub u: Mat,
    pub sigma: Vector,
    pub v: Mat,
}

impl SvdFactors {
    /// Signed expansion coefficients `u_i^T b`, i = 1..n.
    pub fn coefficients(&self, b: &Vector) -> Vector {
        self.u.tr_mul(b)
    }

    /// `sigma_1 / sigma_n`.
    pub fn cond(&self) -> f64 {
        self.sigma[0] / self.sigma[self.sigma.len() - 1]
    }

    pub fn rank_dim(&self) -> usize {
        self.sigma.len()
    }
}

fn all_finite(m: &Mat) -> bool {
    m.iter().all(|x| x.is_finite())
}

fn is_symmetric(m: &Mat) -> bool {
    if m.nrows() != m.ncols() {
        return false;
    }
    let scale = m.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
    if scale == 0.0 {
        return true;
    }
    for j in 0..m.ncols() {
        for i in 0..j {
            if (m[(i, j)] - m[(j, i)]).abs() > 1e-13 * scale {
                return false;
            }
        }
    }
    true
}

/// Make the largest-magnitude entry of each right singular vector positive,
/// flipping the paired left vector to keep the product unchanged. Ties take
/// the smallest row index.
fn fix_signs(u: &mut Mat, v: &mut Mat) {
    for j in 0..v.ncols() {
        let mut arg = 0;
        let mut best = -1.0;
        for i in 0..v.nrows() {
            let a = v[(i, j)].abs();
            if a > best {
                best = a;
                arg = i;
            }
        }
        if v[(arg, j)] < 0.0 {
            v.column_mut(j).neg_mut();
            u.column_mut(j).neg_mut();
        }
    }
}

/// Full SVD of a dense matrix, deterministic for a fixed input.
///
/// Symmetric inputs are factorized as `A = W diag(lambda) W^T` and converted
/// (`sigma_i = |lambda_i|`, `u_i = sign(lambda_i) w_i`, `v_i = w_i`), which is
/// both faster and exact for the symmetric test problems.
pub fn svd(m: &Mat) -> Result<SvdFactors> {
    if !all_finite(m) {
        return Err(Error::NonFinite);
    }
    if m.nrows() == 0 || m.ncols() == 0 {
        return Err(Error::Dimension("empty matrix".into()));
    }

    let (mut u, sigma, mut v) = if is_symmetric(m) {
        let eig = m.clone().symmetric_eigen();
        let n = m.ncols();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            eig.eigenvalues[b]
                .abs()
                .partial_cmp(&eig.eigenvalues[a].abs())
                .unwrap()
                .then(a.cmp(&b))
        });
        let mut u = Mat::zeros(n, n);
        let mut v = Mat::zeros(n, n);
        let mut s = Vector::zeros(n);
        for (dst, &src) in order.iter().enumerate() {
            let lambda = eig.eigenvalues[src];
            s[dst] = lambda.abs();
            let w = eig.eigenvectors.column(src);
            v.column_mut(dst).copy_from(&w);
            u.column_mut(dst).copy_from(&w);
            if lambda < 0.0 {
                u.column_mut(dst).neg_mut();
            }
        }
        (u, s, v)
    } else {
        let f = m.clone().svd(true, true);
        let u = f.u.ok_or_else(|| Error::Dimension("svd failed".into()))?;
        let vt = f.v_t.ok_or_else(|| Error::Dimension("svd failed".into()))?;
        (u, f.singular_values, vt.transpose())
    };

    fix_signs(&mut u, &mut v);
    Ok(SvdFactors { u, sigma, v })
}

/// Spectral norm (largest singular value).
pub fn two_norm(m: &Mat) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    let sv = m.clone().singular_values();
    sv.iter().fold(0.0f64, |a, &x| a.max(x))
}

/// Minimum-residual solution of `min_y || B y - rhs ||` for a lower
/// bidiagonal `B` given by its diagonal `alpha` (length k) and subdiagonal
/// `beta` (length k, `beta[j]` sits below `alpha[j]`), `rhs` of length k+1.
///
/// Eliminates the subdiagonal with Givens rotations; `B^T B` is never formed.
/// Returns the solution and the residual norm.
pub(crate) fn solve_lower_bidiagonal(
    alpha: &[f64],
    beta: &[f64],
    rhs: &[f64],
) -> Result<(Vector, f64)> {
    let k = alpha.len();
    if beta.len() < k || rhs.len() != k + 1 {
        return Err(Error::Dimension(format!(
            "bidiagonal solve: alpha {}, beta {}, rhs {}",
            k,
            beta.len(),
            rhs.len()
        )));
    }
    if alpha.iter().take(k).any(|&a| a == 0.0) {
        return Err(Error::Breakdown("zero diagonal in bidiagonal solve".into()));
    }
    let mut d: Vec<f64> = alpha.to_vec(); // rotated diagonal
    let mut sup = vec![0.0f64; k]; // superdiagonal fill-in
    let mut g: Vec<f64> = rhs.to_vec();
    for j in 0..k {
        let r = d[j].hypot(beta[j]);
        let (c, s) = (d[j] / r, beta[j] / r);
        d[j] = r;
        if j + 1 < k {
            sup[j] = s * alpha[j + 1];
            d[j + 1] = c * alpha[j + 1];
        }
        let gj = g[j];
        g[j] = c * gj + s * g[j + 1];
        g[j + 1] = -s * gj + c * g[j + 1];
    }
    let mut y = Vector::zeros(k);
    for j in (0..k).rev() {
        let mut t = g[j];
        if j + 1 < k {
            t -= sup[j] * y[j + 1];
        }
        y[j] = t / d[j];
    }
    Ok((y, g[k].abs()))
}

/// Least-squares solve for an explicit `(k+1) x k` lower bidiagonal matrix.
pub fn lstsq_lower_bidiagonal(b: &Mat, rhs: &Vector) -> Result<Vector> {
    let k = b.ncols();
    if b.nrows() != k + 1 {
        return Err(Error::Dimension(format!(
            "expected (k+1) x k lower bidiagonal, got {} x {}",
            b.nrows(),
            k
        )));
    }
    for j in 0..k {
        for i in 0..k + 1 {
            if b[(i, j)] != 0.0 && i != j && i != j + 1 {
                return Err(Error::Dimension("matrix is not lower bidiagonal".into()));
            }
        }
    }
    let alpha: Vec<f64> = (0..k).map(|j| b[(j, j)]).collect();
    let beta: Vec<f64> = (0..k).map(|j| b[(j + 1, j)]).collect();
    if alpha.iter().any(|&a| a == 0.0) {
        return Err(Error::Breakdown("zero column in bidiagonal matrix".into()));
    }
    let rhs: Vec<f64> = rhs.iter().copied().collect();
    solve_lower_bidiagonal(&alpha, &beta, &rhs).map(|(y, _)| y)
}
