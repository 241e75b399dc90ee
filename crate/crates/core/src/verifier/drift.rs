use serde::{Deserialize, Serialize};

use super::VerifierError;
use crate::catalog::{integral_set, RelationKind, SystemId, C};
use crate::integrator::Trajectory;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegralDrift {
    pub name: String,
    #[serde(with = "crate::catalog::pair")]
    pub initial: C,
    /// `max_t |v(t) - v(0)|`.
    pub drift: f64,
    /// `max_t |v(t)|`; the quantity to watch for relation residuals.
    pub max_abs: f64,
    pub residual: bool,
    pub kind: Option<RelationKind>,
    /// Largest change of the value under relative state perturbations of a
    /// few ulps; drift below this is evaluation rounding.
    #[serde(default)]
    pub rounding: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriftReport {
    pub system: SystemId,
    pub samples: usize,
    pub integrals: Vec<IntegralDrift>,
}

impl DriftReport {
    pub fn get(&self, name: &str) -> Option<&IntegralDrift> {
        self.integrals.iter().find(|d| d.name == name)
    }

    pub fn max_rounding(&self) -> f64 {
        self.integrals.iter().map(|d| d.rounding).fold(0.0, f64::max)
    }

    pub fn max_drift(&self) -> f64 {
        self.integrals.iter().map(|d| d.drift).fold(0.0, f64::max)
    }

    /// Largest `max_abs` over the relation residuals.
    pub fn max_residual(&self) -> f64 {
        self.integrals
            .iter()
            .filter(|d| d.residual)
            .map(|d| d.max_abs)
            .fold(0.0, f64::max)
    }
}

/// Relative size of the perturbations used for [`IntegralDrift::rounding`].
pub const ROUNDING_ULPS: f64 = 4.0;

fn perturbed(values: &[f64], alternate: bool) -> Vec<f64> {
    let d = ROUNDING_ULPS * f64::EPSILON;
    values
        .iter()
        .enumerate()
        .map(|(j, v)| if alternate && j % 2 == 1 { v * (1.0 - d) } else { v * (1.0 + d) })
        .collect()
}

pub fn drift_report(traj: &Trajectory) -> Result<DriftReport, VerifierError> {
    let mut integrals: Vec<IntegralDrift> = Vec::new();
    for i in 0..traj.len() {
        let state = traj.state(i);
        let vals = integral_set(traj.system, &traj.params, &state)?;
        let mut rounding = vec![0.0f64; vals.len()];
        for alternate in [false, true] {
            let mut moved = state.clone();
            moved.values = perturbed(&state.values, alternate);
            for (r, (a, b)) in rounding
                .iter_mut()
                .zip(vals.iter().zip(integral_set(traj.system, &traj.params, &moved)?))
            {
                *r = r.max((a.value - b.value).norm());
            }
        }
        if i == 0 {
            integrals = vals
                .iter()
                .map(|v| IntegralDrift {
                    name: v.name.clone(),
                    initial: v.value,
                    drift: 0.0,
                    max_abs: v.value.norm(),
                    residual: v.residual,
                    kind: v.kind,
                    rounding: 0.0,
                })
                .collect();
        }
        for (d, r) in integrals.iter_mut().zip(&rounding) {
            d.rounding = d.rounding.max(*r);
        }
        if i == 0 {
            continue;
        }
        for (d, v) in integrals.iter_mut().zip(vals) {
            d.drift = d.drift.max((v.value - d.initial).norm());
            d.max_abs = d.max_abs.max(v.value.norm());
        }
    }
    Ok(DriftReport {
        system: traj.system,
        samples: traj.len(),
        integrals,
    })
}
