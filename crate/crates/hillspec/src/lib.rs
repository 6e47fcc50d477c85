//! Point spectrum of the 2D Euler equations linearised about the shear flow
//! `cos(p₁x + p₂y)` on the torus.
//!
//! Each class `k` of Fourier modes reduces to a Hill equation
//! `g'' + sin η/(c + sin η) g = μ g` with `c = iλ/k`. Its eigenvalues are the
//! zeros of the per-class Evans function `E(c; θ, d) = 2cos 2πθ − Δ(d²; c)`,
//! where `Δ` is the Hill discriminant.
//!
//! [`hill`] evaluates `Δ` from a truncated Hill determinant. [`evans`] counts
//! and locates the zeros, and [`euler`] assembles all classes of a given `p`.
//! Two independent oracles cross-check the chain: [`monodromy`] integrates
//! the ODE directly, and [`jacobi`] diagonalises a truncated recursion
//! operator of the class.
//!
//! The numerics are generic over [`Real`] (`f32`, `f64`); the aliases below fix `f64`.

pub mod conformal;
pub mod error;
pub mod euler;
pub mod evans;
pub mod hill;
pub mod jacobi;
pub mod lattice;
pub mod linalg;
pub mod monodromy;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type C64 = num_complex::Complex<f64>;
pub type SpectralParam64 = conformal::SpectralParam<f64>;
pub type MonodromyResult64 = monodromy::MonodromyResult<f64>;
