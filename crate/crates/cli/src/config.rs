//! The run configuration: one JSON document, unknown keys rejected.

use std::fs;
use std::path::{Path, PathBuf};

use kowtype::catalog::{sample_initial_state, CatalogError, State, SystemId, SystemParams, C};
use kowtype::integrator::TolSpec;
use serde::{Deserialize, Serialize};

use crate::{CliError, Target};

/// Ratio of `atol` to `rtol` when `--tol` sets both.
pub const ATOL_PER_RTOL: f64 = 1e-2;

/// How the initial state is chosen. Either `state` (flat real layout, as in
/// trajectory exports) or a seeded draw; `seed` falls back to the run seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InitialSpec {
    pub state: Option<Vec<f64>>,
    pub seed: Option<u64>,
    pub on_invariant_set: bool,
}

impl Default for InitialSpec {
    fn default() -> Self {
        InitialSpec {
            state: None,
            seed: None,
            on_invariant_set: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub system: SystemId,
    pub params: SystemParams,
    pub initial: InitialSpec,
    pub t_end: f64,
    pub tol: TolSpec,
    pub sample_dt: f64,
    /// Seed for every random draw made by the checks.
    pub seed: u64,
    pub out: Option<PathBuf>,
    /// Targets run by `verify` when none is named on the command line.
    /// Empty means all.
    pub verify: Vec<Target>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            system: SystemId::S3Cubic,
            params: SystemParams {
                g2: C::new(0.5, 0.0),
                ..Default::default()
            },
            initial: InitialSpec::default(),
            t_end: 5.0,
            tol: TolSpec::default(),
            sample_dt: 0.01,
            seed: 0,
            out: None,
            verify: Vec::new(),
        }
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub system: Option<SystemId>,
    pub seed: Option<u64>,
    pub t_end: Option<f64>,
    pub tol: Option<f64>,
    pub sample_dt: Option<f64>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_json_str(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            CliError::Config {
                location: if path == "." { "document root".into() } else { path },
                message: e.into_inner().to_string(),
            }
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Config {
            location: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_json_str(&text)
    }

    /// Apply command-line overrides and the `eps_sing` environment override.
    pub fn resolve(mut self, o: &Overrides) -> Result<Self, CliError> {
        if let Some(system) = o.system {
            self.system = system;
        }
        if let Some(seed) = o.seed {
            self.seed = seed;
            self.initial.seed = None;
        }
        if let Some(t) = o.t_end {
            self.t_end = t;
        }
        if let Some(rtol) = o.tol {
            self.tol.rtol = rtol;
            self.tol.atol = rtol * ATOL_PER_RTOL;
        }
        if let Some(dt) = o.sample_dt {
            self.sample_dt = dt;
        }
        if let Some(out) = &o.out {
            self.out = Some(out.clone());
        }
        self.params = self.params.with_env_eps();
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |location: &str, message: String| {
            Err(CliError::Config {
                location: location.into(),
                message,
            })
        };
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return bad("t_end", format!("must be positive and finite, got {}", self.t_end));
        }
        if !(self.sample_dt > 0.0 && self.sample_dt.is_finite()) {
            return bad("sample_dt", format!("must be positive and finite, got {}", self.sample_dt));
        }
        if !(self.params.eps_sing > 0.0 && self.params.eps_sing.is_finite()) {
            return bad("params.eps_sing", format!("must be positive, got {}", self.params.eps_sing));
        }
        if let Err(e) = self.tol.validate() {
            return bad("tol", e.to_string());
        }
        if let Some(values) = &self.initial.state {
            if self.initial.seed.is_some() {
                return bad("initial", "give either `state` or `seed`, not both".into());
            }
            if values.len() != self.system.real_dim() {
                return bad(
                    "initial.state",
                    format!("{} needs {} values, found {}", self.system, self.system.real_dim(), values.len()),
                );
            }
            if values.iter().any(|v| !v.is_finite()) {
                return bad("initial.state", "values must be finite".into());
            }
        }
        Ok(())
    }

    pub fn initial_seed(&self) -> u64 {
        self.initial.seed.unwrap_or(self.seed)
    }

    /// Initial state and the parameters to integrate with. Seeded draws may
    /// fill in conserved-value labels.
    pub fn initial_state(&self) -> Result<(State, SystemParams), CatalogError> {
        match &self.initial.state {
            Some(values) => Ok((State::new(self.system, values.clone())?, self.params)),
            None => sample_initial_state(self.system, &self.params, self.initial_seed(), self.initial.on_invariant_set),
        }
    }
}
