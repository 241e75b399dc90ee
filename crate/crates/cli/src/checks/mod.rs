//! The verification targets. Each target turns a run configuration into a
//! list of [`Check`]s; targets are independent and may run concurrently.

pub mod chart;
pub mod integrals;
pub mod measure;
pub mod quadrature;
pub mod separability;
pub mod theorem;

use kowtype::catalog::CatalogError;
use kowtype::integrator::IntegratorError;
use kowtype::poly::Rational;
use kowtype::verifier::VerifierError;
use num_traits::Zero;
use rand::Rng;

use crate::config::RunConfig;
use crate::report::{Check, TargetReport};
use crate::Target;

/// Why a target stopped before producing all of its checks.
#[derive(Debug, Clone, PartialEq)]
pub enum Abort {
    Singular(String),
    Error(String),
}

impl From<CatalogError> for Abort {
    fn from(e: CatalogError) -> Self {
        match e {
            CatalogError::SingularState { .. } => Abort::Singular(e.to_string()),
            _ => Abort::Error(e.to_string()),
        }
    }
}

impl From<IntegratorError> for Abort {
    fn from(e: IntegratorError) -> Self {
        match e {
            IntegratorError::SingularStart(_) | IntegratorError::Singularity { .. } => Abort::Singular(e.to_string()),
            _ => Abort::Error(e.to_string()),
        }
    }
}

impl From<VerifierError> for Abort {
    fn from(e: VerifierError) -> Self {
        match e {
            VerifierError::Catalog(c) => c.into(),
            VerifierError::Integrator(i) => i.into(),
            other => Abort::Error(other.to_string()),
        }
    }
}

/// Checks collected so far plus the reason the target stopped, if it did.
pub type Partial = (Vec<Check>, Option<Abort>);

pub fn run_target(target: Target, cfg: &RunConfig) -> TargetReport {
    let (checks, abort) = match target {
        Target::Chart => chart::run(cfg),
        Target::Integrals => integrals::run(cfg),
        Target::Measure => measure::run(cfg),
        Target::Quadrature => quadrature::run(cfg),
        Target::Separability => separability::run(cfg),
        Target::Theorem => theorem::run(cfg),
    };
    let mut report = TargetReport::new(target, checks);
    match abort {
        Some(Abort::Singular(msg)) => {
            report.singular = true;
            report.aborted = Some(msg);
        }
        Some(Abort::Error(msg)) => report.aborted = Some(msg),
        None => {}
    }
    report
}

/// Run `targets` concurrently; the result is ordered by target.
pub fn run_targets(targets: &[Target], cfg: &RunConfig) -> Vec<TargetReport> {
    let mut unique = targets.to_vec();
    unique.sort();
    unique.dedup();
    let mut reports: Vec<TargetReport> = std::thread::scope(|scope| {
        let handles: Vec<_> = unique
            .iter()
            .map(|&t| scope.spawn(move || run_target(t, cfg)))
            .collect();
        handles
            .into_iter()
            .zip(&unique)
            .map(|(h, &t)| {
                h.join().unwrap_or_else(|_| {
                    let mut r = TargetReport::new(t, Vec::new());
                    r.aborted = Some("target panicked".into());
                    r
                })
            })
            .collect()
    });
    reports.sort_by_key(|r| r.target);
    reports
}

/// Small random rational `n/d` with `|n| ≤ 9`, `1 ≤ d ≤ 5`.
pub fn random_rational(rng: &mut impl Rng) -> Rational {
    Rational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=5).into())
}

pub fn random_nonzero_rational(rng: &mut impl Rng) -> Rational {
    loop {
        let r = random_rational(rng);
        if !r.is_zero() {
            return r;
        }
    }
}
