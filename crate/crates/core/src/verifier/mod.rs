//! Measured residuals along trajectories: integral drift, relation
//! classification, separation variables, Viète and velocity identities, and
//! the quadrature relations.

mod branch;
mod classify;
mod drift;
mod quadrature;
mod separation;

use thiserror::Error;

use crate::catalog::{field_complex, pushforward, real_to_complex, CatalogError, State, SystemId, SystemParams, C};
use crate::integrator::{ExportError, IntegratorError};

pub use branch::{BranchTracker, MAX_PHASE_JUMP};
pub use classify::{classify_relation, directional_derivative, Classification, CLASSIFY_SAMPLES, CLASSIFY_TOL};
pub use drift::{drift_report, DriftReport, IntegralDrift, ROUNDING_ULPS};
pub use quadrature::{
    convergence_order, is_moving, kowch_residuals, quadrature_csv, quadrature_residuals, quadrature_study,
    KowchSeries, QuadratureSeries, QuadratureStudy, MIN_MOTION,
};
pub use separation::{
    quadratic_roots, separation_roots, velocity_identity, viete_residuals, SeparationTrack, VelocityResiduals,
    VieteResiduals,
};

#[derive(Debug, Error)]
pub enum VerifierError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Integrator(#[from] IntegratorError),
    #[error(transparent)]
    Export(#[from] ExportError),
    #[error("degenerate separation quadratic at t = {t}: |A| = {value:e}")]
    DegenerateQuadratic { t: f64, value: f64 },
    #[error("lost the branch of sqrt({quantity}) at t = {t}: phase jump {jump:.3} rad")]
    BranchTrackingLost { t: f64, quantity: String, jump: f64 },
    #[error("{op} is not available for {system}")]
    Unsupported { op: &'static str, system: SystemId },
    #[error("need at least {needed} uniformly spaced samples, found {found}")]
    TooFewSamples { needed: usize, found: usize },
    #[error("relation index {index} out of range for {system}")]
    NoSuchRelation { system: SystemId, index: usize },
    #[error("track and trajectory are not aligned")]
    Misaligned,
}

/// Complex-chart coordinates `(x1, x2, e1, e2, r, γ3)` of any state.
pub fn complex_coords(state: &State) -> [C; 6] {
    match state.system {
        SystemId::S1Real => {
            let v = &state.values;
            real_to_complex(&[v[0], v[1], v[2], v[3], v[4], v[5]])
        }
        _ => state.complex(),
    }
}

/// Velocity in complex-chart coordinates; the real chart is pushed forward.
pub fn complex_velocity(params: &SystemParams, state: &State) -> Result<[C; 6], CatalogError> {
    let dz = field_complex(state.system, params, &state.complex())?;
    Ok(match state.system {
        SystemId::S1Real => {
            let v = &state.values;
            pushforward(&[v[0], v[1], v[2], v[3], v[4], v[5]], &dz.map(|c| c.re))
        }
        _ => dz,
    })
}
