//! Time-evolution paths behind one interface. Each path is a
//! [`Propagator`] registered by name; the CLI selects one with `--method`.

pub mod approx;
pub mod closed_form;
pub mod oracle;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::factorization::FactorCoeffs;
use crate::gridfield::{Grid, WaveField};
use crate::specfun::QuadratureSpec;

pub use crate::state::InitialState;
pub use approx::{psi0, psi0_at, psi1, psi1_generic};
pub use closed_form::{
    airy_exact, airy_gauss_exact, bessel_exact, bessel_psi0, bessel_psi1, exact_closed_form,
    sinc_exact, sinc_psi0, sinc_psi1,
};
pub use oracle::{chirped_oracle, factorized_evolution, spectral_free_step};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Oracle,
    ExactClosedForm,
    Factorized,
    Psi0,
    Psi1,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Oracle => "oracle",
            Method::ExactClosedForm => "exact_closed_form",
            Method::Factorized => "factorized",
            Method::Psi0 => "psi0",
            Method::Psi1 => "psi1",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolvedField {
    pub field: WaveField,
    pub method: Method,
    pub coeffs: FactorCoeffs,
    /// State descriptor in the CLI grammar.
    pub state: String,
}

impl EvolvedField {
    pub fn new(field: WaveField, method: Method, coeffs: FactorCoeffs, state: &InitialState) -> Self {
        EvolvedField {
            field,
            method,
            coeffs,
            state: state.to_string(),
        }
    }

    pub fn t(&self) -> f64 {
        self.coeffs.t
    }

    pub(crate) fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }
}

pub trait Propagator: Send + Sync {
    fn name(&self) -> &'static str;

    fn describe(&self) -> &'static str;

    fn evolve(
        &self,
        state: &InitialState,
        alpha: f64,
        t: f64,
        grid: &Grid,
        quad: &QuadratureSpec,
    ) -> Result<EvolvedField>;
}

type EvolveFn = fn(&InitialState, f64, f64, &Grid, &QuadratureSpec) -> Result<EvolvedField>;

/// A propagator backed by a plain function.
struct FnPropagator {
    name: &'static str,
    describe: &'static str,
    run: EvolveFn,
}

impl Propagator for FnPropagator {
    fn name(&self) -> &'static str {
        self.name
    }

    fn describe(&self) -> &'static str {
        self.describe
    }

    fn evolve(
        &self,
        state: &InitialState,
        alpha: f64,
        t: f64,
        grid: &Grid,
        quad: &QuadratureSpec,
    ) -> Result<EvolvedField> {
        (self.run)(state, alpha, t, grid, quad)
    }
}

pub struct PropagatorRegistry {
    entries: BTreeMap<&'static str, Box<dyn Propagator>>,
}

impl PropagatorRegistry {
    pub fn empty() -> Self {
        PropagatorRegistry {
            entries: BTreeMap::new(),
        }
    }

    /// Replaces any propagator already registered under the same name.
    pub fn register(&mut self, p: Box<dyn Propagator>) {
        self.entries.insert(p.name(), p);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Propagator> {
        self.entries
            .get(name)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::UnknownPropagator(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Propagator> {
        self.entries.values().map(|b| b.as_ref())
    }
}

impl Default for PropagatorRegistry {
    fn default() -> Self {
        let builtins: [(&'static str, &'static str, EvolveFn); 6] = [
            ("oracle", "chirp, then spectral free evolution", chirped_oracle),
            ("exact", "closed-form solution", exact_closed_form),
            (
                "factorized",
                "chirp . squeeze . spectral exp(i f4 p^2)",
                factorized_evolution,
            ),
            ("psi0", "zeroth-order structure-invariant approximant", psi0),
            ("psi1", "first-order approximant, closed form when available", psi1),
            ("psi1-spectral", "first-order approximant, spectral p^2", psi1_generic),
        ];
        let mut reg = PropagatorRegistry::empty();
        for (name, describe, run) in builtins {
            reg.register(Box::new(FnPropagator {
                name,
                describe,
                run,
            }));
        }
        reg
    }
}
