//! Divergence and invariant-measure identities at random states.

use kowtype::catalog::{
    divergence, measure_density, sample_generic_state, weighted_divergence_fd, CatalogError, State, SystemId,
    SystemParams, C,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Partial;
use crate::config::RunConfig;
use crate::report::Check;
use crate::Target;

pub const STATES: usize = 1000;
pub const THRESHOLD: f64 = 1e-8;

const T: Target = Target::Measure;

type Density = Box<dyn Fn(&State) -> Result<C, CatalogError>>;

/// Worst `|residual(state)|` over [`STATES`] generic states of `id`.
fn worst(
    id: SystemId,
    rng: &mut ChaCha8Rng,
    residual: impl Fn(&State) -> Result<C, CatalogError>,
) -> Result<f64, CatalogError> {
    let mut max: f64 = 0.0;
    for _ in 0..STATES {
        let st = State::from_complex(id, &sample_generic_state(id, rng));
        max = max.max(residual(&st)?.norm());
    }
    Ok(max)
}

fn density_flux(id: SystemId, p: &SystemParams, st: &State) -> Result<C, CatalogError> {
    weighted_divergence_fd(id, p, st, |z| measure_density(id, p, &State::from_complex(id, z)))
}

pub fn run(cfg: &RunConfig) -> Partial {
    let p = cfg.params;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut checks = Vec::new();
    let one = |_: &[C; 6]| Ok(C::new(1.0, 0.0));
    let cases: [(SystemId, &str, &str, Density); 4] = [
        (
            SystemId::S1Real,
            "s1_real.density",
            "div(ρX) = 0 with ρ = 1/(4p²)",
            Box::new(move |st| density_flux(SystemId::S1Real, &p, st)),
        ),
        (
            SystemId::S1Complex,
            "s1_complex.density",
            "div(μX) = 0 with μ = 1/(x1+x2)²",
            Box::new(move |st| density_flux(SystemId::S1Complex, &p, st)),
        ),
        (
            SystemId::S1Real,
            "s1_real.divergence",
            "div X = 2qr",
            Box::new(move |st| Ok(weighted_divergence_fd(SystemId::S1Real, &p, st, one)? - divergence(SystemId::S1Real, &p, st)?)),
        ),
        (
            SystemId::S3Cubic,
            "s3_cubic.divergence",
            "div X = 0",
            Box::new(move |st| weighted_divergence_fd(SystemId::S3Cubic, &p, st, one)),
        ),
    ];
    for (id, name, identity, residual) in cases {
        match worst(id, &mut rng, residual) {
            Ok(v) => checks.push(
                Check::at_most(T, name, identity, v, THRESHOLD)
                    .with_detail(format!("max over {STATES} random states, Richardson central differences")),
            ),
            Err(e) => checks.push(Check::failed(T, name, identity, e.to_string())),
        }
    }
    (checks, None)
}
