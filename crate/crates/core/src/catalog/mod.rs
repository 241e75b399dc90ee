//! The four concrete systems: charts, parameters, vector fields, integrals,
//! divergences, densities and initial-state samplers.

mod chart;
mod fields;
mod params;
mod relations;
mod sample;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use chart::{complex_to_real, pushforward, real_to_complex, REALITY_TOL};
pub use fields::{divergence, field_complex, vector_field, weighted_divergence_fd};
pub(crate) use relations::pair;
pub use params::{eps_sing_from_env, SystemParams, EPS_SING_ENV};
pub use relations::{
    integral_set, measure_density, project_onto_relations, relation_coefficients, separation_family,
    IntegralValue, RelationKind,
};
pub use sample::{sample_generic_state, sample_initial_state, MAX_SAMPLE_ATTEMPTS};

pub type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SystemId {
    #[serde(rename = "S1_REAL")]
    S1Real,
    #[serde(rename = "S1_COMPLEX")]
    S1Complex,
    #[serde(rename = "S2_TWOPARAM")]
    S2TwoParam,
    #[serde(rename = "S3_CUBIC")]
    S3Cubic,
}

impl SystemId {
    pub const ALL: [SystemId; 4] = [SystemId::S1Real, SystemId::S1Complex, SystemId::S2TwoParam, SystemId::S3Cubic];

    pub fn name(self) -> &'static str {
        match self {
            SystemId::S1Real => "S1_REAL",
            SystemId::S1Complex => "S1_COMPLEX",
            SystemId::S2TwoParam => "S2_TWOPARAM",
            SystemId::S3Cubic => "S3_CUBIC",
        }
    }

    pub fn is_complex(self) -> bool {
        self != SystemId::S1Real
    }

    /// Length of the flat real state vector.
    pub fn real_dim(self) -> usize {
        if self.is_complex() {
            12
        } else {
            6
        }
    }

    pub fn variables(self) -> [&'static str; 6] {
        match self {
            SystemId::S1Real => ["p", "q", "r", "gamma1", "gamma2", "gamma3"],
            _ => ["x1", "x2", "e1", "e2", "r", "gamma3"],
        }
    }

    /// Names of the quantities returned by [`integral_set`], in order.
    pub fn integral_names(self) -> &'static [&'static str] {
        match self {
            SystemId::S3Cubic => &["a_hat", "b_hat", "c_hat", "d_hat_sq"],
            _ => &["R1", "R2", "R3", "R4"],
        }
    }
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SystemId {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SystemId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| CatalogError::UnknownSystem(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("unknown system {0:?}")]
    UnknownSystem(String),
    #[error("singular state: |{guard}| = {value:e} is below eps_sing")]
    SingularState { guard: &'static str, value: f64 },
    #[error("no known invariant density for {0}")]
    NoKnownDensity(SystemId),
    #[error("state violates the reality conditions of the real chart: {0}")]
    NotReal(String),
    #[error("no consistent state found after {attempts} attempts")]
    NoConsistentState { attempts: usize },
    #[error("state for {system} must have {expected} components, found {found}")]
    DimensionMismatch {
        system: SystemId,
        expected: usize,
        found: usize,
    },
}

/// A point in the phase space of one system. Complex charts store
/// interleaved `(re, im)` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct State {
    pub system: SystemId,
    pub values: Vec<f64>,
}

impl State {
    pub fn new(system: SystemId, values: Vec<f64>) -> Result<Self, CatalogError> {
        if values.len() != system.real_dim() {
            return Err(CatalogError::DimensionMismatch {
                system,
                expected: system.real_dim(),
                found: values.len(),
            });
        }
        Ok(State { system, values })
    }

    pub fn from_complex(system: SystemId, z: &[C; 6]) -> Self {
        let values = if system.is_complex() {
            z.iter().flat_map(|c| [c.re, c.im]).collect()
        } else {
            z.iter().map(|c| c.re).collect()
        };
        State { system, values }
    }

    /// Components as complex numbers (imaginary parts zero on the real chart).
    pub fn complex(&self) -> [C; 6] {
        if self.system.is_complex() {
            std::array::from_fn(|i| C::new(self.values[2 * i], self.values[2 * i + 1]))
        } else {
            std::array::from_fn(|i| C::new(self.values[i], 0.0))
        }
    }
}

fn guard(name: &'static str, v: C, eps: f64) -> Result<(), CatalogError> {
    let value = v.norm();
    if value < eps || !value.is_finite() {
        Err(CatalogError::SingularState { guard: name, value })
    } else {
        Ok(())
    }
}
