//! The three commands: `catalog`, `simulate` and `verify`.

use std::fs;
use std::path::{Path, PathBuf};

use kowtype::catalog::SystemId;
use kowtype::integrator::{integrate, IntegratorError, StepStats, Termination, Trajectory};
use kowtype::verifier::{drift_report, DriftReport};
use serde::Serialize;

use crate::checks::{quadrature, run_targets};
use crate::config::RunConfig;
use crate::report::VerifyReport;
use crate::{CliError, Target, EXIT_OK, EXIT_SINGULAR};

/// Output directory used by `simulate` when none is configured.
pub const DEFAULT_OUT: &str = "kowtype-out";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub id: SystemId,
    pub description: &'static str,
    pub chart: &'static str,
    pub real_dim: usize,
    pub variables: [&'static str; 6],
    pub params: &'static [&'static str],
    pub integrals: Vec<IntegralEntry>,
    pub density: Option<&'static str>,
    pub divergence: &'static str,
    pub singular_locus: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralEntry {
    pub name: &'static str,
    pub form: &'static str,
}

fn forms(id: SystemId) -> [&'static str; 4] {
    match id {
        SystemId::S1Real | SystemId::S1Complex => [
            "r² - 2/(x1+x2) - (e1+e2)/(x1+x2)²",
            "rγ3 - (4x1x2-g2)/(4(x1+x2)) + (x2²e1+x1²e2)/(x1+x2)²",
            "γ3² + x1x2g2/(2(x1+x2)) - (x2⁴e1+x1⁴e2)/(x1+x2)² + g3/2",
            "e1e2 - k²",
        ],
        SystemId::S2TwoParam => [
            "r² - 2((x1+x2)(x1²+x2²-g2/2) - g3)/(x1²-x2²)² - (e1+e2)/(x1+x2)²",
            "rγ3 - ((x1+x2)³(g2-4x1x2) + 4g3(x1²+x2²))/(4(x1²-x2²)²) + (x2²e1+x1²e2)/(x1+x2)²",
            "γ3² - (8x1³x2³(x1+x2) - g2x1x2(x1+x2)(x1²+x2²) - g3(x1²+x2²)²)/(2(x1²-x2²)²) - (x2⁴e1+x1⁴e2)/(x1+x2)²",
            "e1e2 - k²",
        ],
        SystemId::S3Cubic => [
            "r² - 2(x1+x2) - e1 - e2",
            "2(rγ3 + x1x2 + x2e1 + x1e2)",
            "γ3² - x2²e1 - x1²e2",
            "e1e2",
        ],
    }
}

pub fn catalog_entries() -> Vec<CatalogEntry> {
    SystemId::ALL
        .into_iter()
        .map(|id| {
            let (description, params, density, divergence, singular_locus) = match id {
                SystemId::S1Real => (
                    "modal system on (p, q, r, γ1, γ2, γ3)",
                    &["g2", "g3", "k"][..],
                    Some("1/(4p²)"),
                    "2qr",
                    "p = 0",
                ),
                SystemId::S1Complex => (
                    "the modal system after x_{1,2} = p ± iq, e_{1,2} = x_{1,2}² + γ1 ± iγ2",
                    &["g2", "g3", "k"][..],
                    Some("1/(x1+x2)²"),
                    "finite differences",
                    "x1 + x2 = 0",
                ),
                SystemId::S2TwoParam => (
                    "two-parameter system with the auxiliary function m",
                    &["g2", "g3", "k"][..],
                    None,
                    "finite differences",
                    "x1 + x2 = 0, x1 - x2 = 0, r = 0, γ3 = 0, vanishing bracket of m",
                ),
                SystemId::S3Cubic => (
                    "system of the cubic family; parameter free, integrals take the values a, b, c, d²",
                    &[][..],
                    Some("1 (standard measure)"),
                    "0",
                    "none",
                ),
            };
            CatalogEntry {
                id,
                description,
                chart: if id.is_complex() { "complex" } else { "real" },
                real_dim: id.real_dim(),
                variables: id.variables(),
                params,
                integrals: id
                    .integral_names()
                    .iter()
                    .zip(forms(id))
                    .map(|(name, form)| IntegralEntry { name, form })
                    .collect(),
                density,
                divergence,
                singular_locus,
            }
        })
        .collect()
}

pub fn catalog(json: bool) -> Result<String, CliError> {
    let entries = catalog_entries();
    if json {
        return Ok(serde_json::to_string_pretty(&entries)? + "\n");
    }
    let mut out = String::new();
    for e in &entries {
        out.push_str(&format!("{}  ({} chart, {} reals)\n", e.id, e.chart, e.real_dim));
        out.push_str(&format!("  {}\n", e.description));
        out.push_str(&format!("  variables: {}\n", e.variables.join(", ")));
        let params = if e.params.is_empty() { "none".to_string() } else { e.params.join(", ") };
        out.push_str(&format!("  params: {params}\n"));
        for i in &e.integrals {
            out.push_str(&format!("  {} = {}\n", i.name, i.form));
        }
        out.push_str(&format!("  density: {}\n", e.density.unwrap_or("unknown")));
        out.push_str(&format!("  divergence: {}\n", e.divergence));
        out.push_str(&format!("  singular locus: {}\n", e.singular_locus));
    }
    Ok(out)
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::io(format!("writing {}", path.display()), e))
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(format!("creating {}", dir.display()), e))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulateOutcome {
    pub system: SystemId,
    pub samples: usize,
    pub t_last: f64,
    pub termination: Termination,
    pub max_drift: Option<f64>,
    pub files: Vec<PathBuf>,
    pub exit_code: i32,
    pub message: Option<String>,
}

/// Integrate the configured run and write `trajectory.csv`,
/// `trajectory.json` and `drift.json`. A singular start is written as a
/// one-sample trajectory ending in a singularity.
pub fn simulate(cfg: &RunConfig) -> Result<SimulateOutcome, CliError> {
    let (state0, params) = cfg.initial_state()?;
    let mut message = None;
    let traj = match integrate(cfg.system, &params, &state0, cfg.t_end, &cfg.tol, cfg.sample_dt) {
        Ok(t) => t,
        Err(e @ IntegratorError::SingularStart(_)) => {
            message = Some(e.to_string());
            Trajectory {
                system: cfg.system,
                params,
                tol: cfg.tol,
                sample_dt: cfg.sample_dt,
                t_end: cfg.t_end,
                times: vec![0.0],
                states: vec![state0.values.clone()],
                stats: StepStats::default(),
                termination: Termination::Singularity,
            }
        }
        Err(e) => return Err(e.into()),
    };
    if message.is_none() && traj.termination != Termination::Completed {
        message = traj.ensure_completed().err().map(|e| e.to_string());
    }
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    ensure_dir(&dir)?;
    let mut files = Vec::new();
    let csv_path = dir.join("trajectory.csv");
    write_file(&csv_path, traj.to_csv_string()?.as_bytes())?;
    files.push(csv_path);
    let json_path = dir.join("trajectory.json");
    write_file(&json_path, (traj.to_json_string()? + "\n").as_bytes())?;
    files.push(json_path);
    let drift: Option<DriftReport> = drift_report(&traj).ok();
    if let Some(d) = &drift {
        let path = dir.join("drift.json");
        write_file(&path, (serde_json::to_string_pretty(d)? + "\n").as_bytes())?;
        files.push(path);
    }
    let exit_code = match traj.termination {
        Termination::Completed => EXIT_OK,
        Termination::Singularity => EXIT_SINGULAR,
        _ => crate::EXIT_CHECK_FAILED,
    };
    Ok(SimulateOutcome {
        system: traj.system,
        samples: traj.len(),
        t_last: traj.last_time(),
        termination: traj.termination,
        max_drift: drift.as_ref().map(DriftReport::max_drift),
        files,
        exit_code,
        message,
    })
}

impl SimulateOutcome {
    pub fn render_text(&self) -> String {
        let mut out = format!(
            "{}: {} samples to t = {}, {:?}\n",
            self.system, self.samples, self.t_last, self.termination
        );
        if let Some(d) = self.max_drift {
            out.push_str(&format!("max drift {d:e}\n"));
        }
        if let Some(m) = &self.message {
            out.push_str(&format!("{m}\n"));
        }
        for f in &self.files {
            out.push_str(&format!("wrote {}\n", f.display()));
        }
        out
    }
}

/// A verify report together with the resolved configuration that
/// produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyOutput {
    pub config: RunConfig,
    #[serde(flatten)]
    pub report: VerifyReport,
}

/// Targets selected by the command line, else by the config, else all.
pub fn select_targets(cli: Option<Vec<Target>>, cfg: &RunConfig) -> Vec<Target> {
    match cli {
        Some(t) if !t.is_empty() => t,
        _ if !cfg.verify.is_empty() => cfg.verify.clone(),
        _ => Target::ALL.to_vec(),
    }
}

/// Run the selected targets. With an output directory, writes
/// `report.json` and, for the quadrature target, `quadrature.csv`.
pub fn verify(targets: &[Target], cfg: &RunConfig) -> Result<VerifyOutput, CliError> {
    let report = VerifyReport::assemble(run_targets(targets, cfg));
    let output = VerifyOutput {
        config: cfg.clone(),
        report,
    };
    if let Some(dir) = &cfg.out {
        ensure_dir(dir)?;
        write_file(&dir.join("report.json"), (serde_json::to_string_pretty(&output)? + "\n").as_bytes())?;
        if targets.contains(&Target::Quadrature) {
            if let Ok(csv) = quadrature::table(cfg) {
                write_file(&dir.join("quadrature.csv"), csv.as_bytes())?;
            }
        }
    }
    Ok(output)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_lists_four_systems_in_order() {
        let e = catalog_entries();
        assert_eq!(e.iter().map(|e| e.id).collect::<Vec<_>>(), SystemId::ALL.to_vec());
        assert!(e.iter().all(|e| e.integrals.len() == 4));
        let text = catalog(false).unwrap();
        assert_eq!(text.lines().filter(|l| !l.starts_with(' ')).count(), 4);
        let json: serde_json::Value = serde_json::from_str(&catalog(true).unwrap()).unwrap();
        assert_eq!(json.as_array().unwrap().len(), 4);
        assert_eq!(json[3]["id"], "S3_CUBIC");
    }

    #[test]
    fn target_selection_precedence() {
        let mut cfg = RunConfig::default();
        assert_eq!(select_targets(None, &cfg), Target::ALL.to_vec());
        cfg.verify = vec![Target::Theorem];
        assert_eq!(select_targets(None, &cfg), vec![Target::Theorem]);
        assert_eq!(select_targets(Some(vec![Target::Chart]), &cfg), vec![Target::Chart]);
    }
}
