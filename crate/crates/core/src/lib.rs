//! Numerical laboratory for the quadratic Schrodinger equation
//! `i u_t + u_xx = u conj(u)` on the line.
//!
//! The crate is organised bottom-up:
//!
//! * [`spectral_core`]: lattices, continuum-normalised transforms, dyadic shells, the time bump.
//! * [`norms`]: weighted, dyadic and sum-space norms plus embedding checks.
//! * [`evolution`]: free propagator, Duhamel operator, Picard tower, fixed-point solver, scaling.
//! * [`illposedness`]: probe data families, closed-form second iterate, growth-exponent sweeps.
//! * [`estimates`]: Strichartz, trilinear multiplier and bilinear ratio experiments.
//! * [`cli`]: configuration ingestion, orchestration and CSV/plot-data emission.
//!
//! All frequency-side integrals use the measure `dxi/(2 pi)` (and `dtau/(2 pi)`), so that
//! Parseval reads `sum |u|^2 dx = sum |u_hat|^2 dxi/(2 pi)`.

pub mod cli;
pub mod error;
pub mod estimates;
pub mod evolution;
pub mod fit;
pub mod illposedness;
pub mod norms;
pub mod rng;
pub mod spectral_core;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
