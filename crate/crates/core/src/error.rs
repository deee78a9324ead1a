use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("reference field has zero norm")]
    ZeroReference,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("factorization singular: 1 + 2*alpha*t = {value} <= 0 (alpha={alpha}, t={t})")]
    FactorizationSingular { alpha: f64, t: f64, value: f64 },

    #[error("aliasing guard: {0}")]
    Aliasing(String),

    #[error("quadrature did not converge ({what}): last difference {diff:e} after {panels} panels")]
    QuadratureNotConverged {
        what: &'static str,
        diff: f64,
        panels: usize,
    },

    #[error("quadrature residual imaginary part {residual:e} exceeds tolerance {tol:e}")]
    ResidualImaginary { residual: f64, tol: f64 },

    #[error("no closed form for state {0}")]
    NoClosedForm(String),

    #[error("unknown propagator '{0}'")]
    UnknownPropagator(String),

    #[error("experiment cell alpha={alpha}, t={t}: {source}")]
    Cell {
        alpha: f64,
        t: f64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerical guards (aliasing, quadrature),
    /// as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Aliasing(_)
            | Error::QuadratureNotConverged { .. }
            | Error::ResidualImaginary { .. }
            | Error::FactorizationSingular { .. } => true,
            Error::Cell { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}
