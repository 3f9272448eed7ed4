//! The five classical discrete ill-posed test problems, plus classification
//! of singular-value decay (exponential vs power law).
//!
//! All generators discretize a first-kind Fredholm kernel on n midpoint
//! nodes, `A[i][j] = w * k(s_i, t_j)` with uniform weight `w`, except `heat`,
//! which is a Volterra convolution collocated at right endpoints so that its
//! Toeplitz diagonal stays inside the kernel support. Generation is pure
//! arithmetic and bitwise deterministic.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{Mat, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemName {
    Shaw,
    Wing,
    Heat,
    Phillips,
    Deriv2,
}

impl ProblemName {
    pub const ALL: [ProblemName; 5] = [
        ProblemName::Shaw,
        ProblemName::Wing,
        ProblemName::Heat,
        ProblemName::Phillips,
        ProblemName::Deriv2,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ProblemName::Shaw => "shaw",
            ProblemName::Wing => "wing",
            ProblemName::Heat => "heat",
            ProblemName::Phillips => "phillips",
            ProblemName::Deriv2 => "deriv2",
        }
    }
}

impl fmt::Display for ProblemName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProblemName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "shaw" => Ok(ProblemName::Shaw),
            "wing" => Ok(ProblemName::Wing),
            "heat" => Ok(ProblemName::Heat),
            "phillips" => Ok(ProblemName::Phillips),
            "deriv2" => Ok(ProblemName::Deriv2),
            other => Err(Error::UnknownProblem(other.into())),
        }
    }
}

/// Exact test instance: matrix, true solution, and noise-free right-hand
/// side `b_hat = A x_true`.
#[derive(Debug, Clone)]
pub struct Problem {
    pub name: ProblemName,
    pub n: usize,
    pub a: Mat,
    pub x_true: Vector,
    pub b_hat: Vector,
}

/// Build the named test problem at dimension `n >= 8`.
pub fn generate(name: ProblemName, n: usize) -> Result<Problem> {
    if n < 8 {
        return Err(Error::InvalidParameter(format!(
            "problem dimension must be at least 8, got {n}"
        )));
    }
    let (a, x_true) = match name {
        ProblemName::Shaw => shaw(n),
        ProblemName::Wing => wing(n),
        ProblemName::Heat => heat(n),
        ProblemName::Phillips => phillips(n),
        ProblemName::Deriv2 => deriv2(n),
    };
    let b_hat = &a * &x_true;
    Ok(Problem { name, n, a, x_true, b_hat })
}

fn midpoints(lo: f64, hi: f64, n: usize) -> (f64, Vec<f64>) {
    let h = (hi - lo) / n as f64;
    let t = (0..n).map(|i| lo + (i as f64 + 0.5) * h).collect();
    (h, t)
}

fn shaw(n: usize) -> (Mat, Vector) {
    let (h, t) = midpoints(-std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2, n);
    let a = Mat::from_fn(n, n, |i, j| {
        let u = std::f64::consts::PI * (t[i].sin() + t[j].sin());
        let sinc = if u == 0.0 { 1.0 } else { u.sin() / u };
        let c = (t[i].cos() + t[j].cos()) * sinc;
        h * c * c
    });
    let x = Vector::from_iterator(
        n,
        t.iter()
            .map(|&ti| 2.0 * (-6.0 * (ti - 0.8).powi(2)).exp() + (-2.0 * (ti + 0.5).powi(2)).exp()),
    );
    (a, x)
}

fn wing(n: usize) -> (Mat, Vector) {
    let (h, t) = midpoints(0.0, 1.0, n);
    let a = Mat::from_fn(n, n, |i, j| h * t[j] * (-t[i] * t[j] * t[j]).exp());
    let x = Vector::from_iterator(
        n,
        t.iter().map(|&ti| if ti > 1.0 / 3.0 && ti < 2.0 / 3.0 { 1.0 } else { 0.0 }),
    );
    (a, x)
}

fn heat(n: usize) -> (Mat, Vector) {
    // Volterra kernel kbar(tau) = tau^{-3/2}/(2 sqrt(pi)) exp(-1/(4 tau)),
    // collocation points s_i = i h, quadrature nodes t_j = (j - 1/2) h, so
    // the Toeplitz column samples kbar at (i - j + 1/2) h > 0.
    let h = 1.0 / n as f64;
    let col: Vec<f64> = (0..n)
        .map(|d| {
            let tau = (d as f64 + 0.5) * h;
            h * tau.powf(-1.5) / (2.0 * std::f64::consts::PI.sqrt()) * (-1.0 / (4.0 * tau)).exp()
        })
        .collect();
    let a = Mat::from_fn(n, n, |i, j| if j <= i { col[i - j] } else { 0.0 });
    let mut x = Vector::zeros(n);
    for i in 1..=n / 2 {
        let ti = i as f64 * 20.0 / n as f64;
        x[i - 1] = if ti < 2.0 {
            0.75 * ti * ti / 4.0
        } else if ti < 3.0 {
            0.75 + (ti - 2.0) * (3.0 - ti)
        } else {
            0.75 * (-2.0 * (ti - 3.0)).exp()
        };
    }
    (a, x)
}

fn phillips(n: usize) -> (Mat, Vector) {
    let (h, t) = midpoints(-6.0, 6.0, n);
    let third_pi = std::f64::consts::PI / 3.0;
    let a = Mat::from_fn(n, n, |i, j| {
        let d = t[i] - t[j];
        if d.abs() < 3.0 {
            h * (1.0 + (third_pi * d).cos())
        } else {
            0.0
        }
    });
    let x = Vector::from_iterator(
        n,
        t.iter()
            .map(|&ti| if ti.abs() < 3.0 { 1.0 + (third_pi * ti).cos() } else { 0.0 }),
    );
    (a, x)
}

fn deriv2(n: usize) -> (Mat, Vector) {
    // Green's function of the second derivative; example-3 hat profile.
    let (h, t) = midpoints(0.0, 1.0, n);
    let a = Mat::from_fn(n, n, |i, j| {
        let (s, tt) = (t[i], t[j]);
        if s <= tt { h * s * (tt - 1.0) } else { h * tt * (s - 1.0) }
    });
    let x = Vector::from_iterator(n, t.iter().map(|&ti| if ti < 0.5 { ti } else { 1.0 - ti }));
    (a, x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecayKind {
    Severe,
    Moderate,
    Mild,
}

impl fmt::Display for DecayKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecayKind::Severe => "severe",
            DecayKind::Moderate => "moderate",
            DecayKind::Mild => "mild",
        })
    }
}

/// Result of fitting the decay of a positive, (roughly) descending sequence.
#[derive(Debug, Clone)]
pub struct IllPosednessClass {
    pub kind: DecayKind,
    /// Exponential rate `sigma_j ~ zeta rho^{-j}` when severe.
    pub rho: Option<f64>,
    /// Power-law exponent `sigma_j ~ zeta j^{-alpha}` when moderate/mild.
    pub alpha: Option<f64>,
    /// Fitted multiplicative constant of the winning model.
    pub zeta: f64,
    /// 1-based inclusive index interval used by the fit.
    pub fit_range: (usize, usize),
    /// RMS log-residual of the winning model.
    pub fit_residual: f64,
}

/// First fitted index; leading transients are skipped.
const FIT_START: usize = 3;
/// Values below `sigma_1 * FLOOR_REL` are treated as rounding noise.
const FLOOR_REL: f64 = 1e-13;
/// The exponential model wins only when clearly better than the power model.
const EXP_MARGIN: f64 = 0.9;
/// An exponential fit with rate this close to 1 is not a genuine geometric
/// decay; curved sub-exponential spectra otherwise masquerade as severe.
const MIN_SEVERE_RHO: f64 = 1.5;

/// Classify the decay of a singular-value-like sequence by least-squares
/// fits of `log sigma_j` against `j` (exponential) and against `log j`
/// (power law) over the pre-rounding-floor range.
pub fn classify_decay(sigma: &[f64]) -> Result<IllPosednessClass> {
    if sigma.is_empty() || sigma[0] <= 0.0 {
        return Err(Error::InvalidParameter("empty or non-positive sequence".into()));
    }
    let floor = (sigma[0] * FLOOR_REL).max(f64::MIN_POSITIVE);
    let mut jmax = 0;
    for &s in sigma {
        if s >= floor {
            jmax += 1;
        } else {
            break;
        }
    }
    if jmax < 8 {
        return Err(Error::InvalidParameter(format!(
            "only {jmax} usable values above the rounding floor; need at least 8"
        )));
    }

    let js: Vec<f64> = (FIT_START..=jmax).map(|j| j as f64).collect();
    let ys: Vec<f64> = (FIT_START..=jmax).map(|j| sigma[j - 1].ln()).collect();
    let (int_e, slope_e, res_e) = fit_line(&js, &ys);
    let logj: Vec<f64> = js.iter().map(|j| j.ln()).collect();
    let (int_p, slope_p, res_p) = fit_line(&logj, &ys);

    let rho = (-slope_e).exp();
    if res_e < EXP_MARGIN * res_p && rho >= MIN_SEVERE_RHO {
        return Ok(IllPosednessClass {
            kind: DecayKind::Severe,
            rho: Some(rho),
            alpha: None,
            zeta: int_e.exp(),
            fit_range: (FIT_START, jmax),
            fit_residual: res_e,
        });
    }
    let alpha = -slope_p;
    Ok(IllPosednessClass {
        kind: if alpha > 1.0 { DecayKind::Moderate } else { DecayKind::Mild },
        rho: None,
        alpha: Some(alpha),
        zeta: int_p.exp(),
        fit_range: (FIT_START, jmax),
        fit_residual: res_p,
    })
}

/// Least squares `y = intercept + slope * x`; returns RMS residual.
fn fit_line(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|&xi| (xi - mx) * (xi - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(&xi, &yi)| (xi - mx) * (yi - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = x
        .iter()
        .zip(y)
        .map(|(&xi, &yi)| {
            let r = yi - (intercept + slope * xi);
            r * r
        })
        .sum();
    (intercept, slope, (rss / n).sqrt())
}

/// Least-squares Picard exponent: slope of `log |u_i^T b|` versus
/// `log sigma_i` over the 1-based inclusive index range, minus one.
pub fn fit_picard_beta(sigma: &[f64], coeffs: &[f64], range: (usize, usize)) -> Result<f64> {
    let (lo, hi) = range;
    if lo < 1 || hi > sigma.len().min(coeffs.len()) || lo >= hi {
        return Err(Error::OutOfRange(format!("picard fit range {lo}..={hi}")));
    }
    let mut x = Vec::with_capacity(hi - lo + 1);
    let mut y = Vec::with_capacity(hi - lo + 1);
    for i in lo..=hi {
        let (s, c) = (sigma[i - 1], coeffs[i - 1].abs());
        if s <= 0.0 || c <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "non-positive value at index {i} in picard fit range"
            )));
        }
        x.push(s.ln());
        y.push(c.ln());
    }
    let (_, slope, _) = fit_line(&x, &y);
    Ok(slope - 1.0)
}
