//! Chirped wave packets under free Schrödinger evolution (`hbar = m = 1`).
//!
//! A quadratic phase `exp(i alpha x^2)` on an initial profile `phi` turns
//! free evolution into a chirp times a squeeze of `phi`, up to a residual
//! propagator `exp(i f4 p^2)` whose strength `f4` vanishes as alpha grows.
//! This crate computes the exact evolution (closed forms and a spectral
//! reference), the zeroth- and first-order approximants, and the data
//! behind the comparison figures.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod experiments;
pub mod factorization;
pub mod gridfield;
pub mod propagators;
pub mod selftest;
pub mod specfun;
pub mod spectral;
pub mod state;

pub use error::{Error, Result};
pub use factorization::{factor_coeffs, FactorCoeffs};
pub use gridfield::{default_grid, make_grid, Grid, WaveField};
pub use propagators::{EvolvedField, Method, Propagator, PropagatorRegistry};
pub use specfun::QuadratureSpec;
pub use state::InitialState;
