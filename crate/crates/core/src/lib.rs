//! Lanczos-bidiagonalization based regularization of discrete ill-posed
//! problems, with the diagnostics needed to study how well the underlying
//! Krylov subspaces capture the dominant SVD components.
//!
//! The crate provides:
//! - dense SVD / spectral-norm / bidiagonal least-squares kernels ([`linalg`]),
//! - the five classical Fredholm test problems and singular-value decay
//!   classification ([`problems`]),
//! - calibrated white-noise injection and transition-index estimation
//!   ([`noise`]),
//! - Golub-Kahan Lanczos bidiagonalization with optional full
//!   reorthogonalization and Ritz values ([`bidiag`]),
//! - LSQR, CGLS, TSVD, Tikhonov and hybrid (projected-TSVD) solvers with per
//!   iteration traces ([`solvers`]),
//! - rank-k approximation quality, subspace angles, interlacing and entry
//!   decay diagnostics ([`diagnostics`]).

pub mod bidiag;
pub mod diagnostics;
pub mod error;
pub mod io;
pub mod linalg;
pub mod noise;
pub mod problems;
pub mod solvers;

pub use error::{Error, Result};
pub use linalg::{Mat, SvdFactors, Vector};
