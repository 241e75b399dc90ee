//! Consistency of the real and complex charts of the first system.

use kowtype::catalog::{
    complex_to_real, field_complex, pushforward, real_to_complex, sample_generic_state, CatalogError, SystemId,
    SystemParams,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Partial;
use crate::config::RunConfig;
use crate::report::Check;
use crate::Target;

pub const STATES: usize = 100;
pub const ROUND_TRIP_TOL: f64 = 1e-14;
pub const PUSHFORWARD_TOL: f64 = 1e-12;

const T: Target = Target::Chart;

const COMPONENTS: [&str; 6] = ["x1", "x2", "e1", "e2", "r", "gamma3"];

/// Components whose pushforward mismatch is a documented property of the
/// transcribed complex field rather than a defect.
const DOCUMENTED_MISMATCH: [&str; 3] = ["e1", "e2", "gamma3"];

/// Worst relative round-trip error and per-component relative pushforward
/// residuals over the sampled states.
pub fn measure(params: &SystemParams, seed: u64) -> Result<(f64, [f64; 6]), CatalogError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut round: f64 = 0.0;
    let mut push = [0.0f64; 6];
    for _ in 0..STATES {
        let z = sample_generic_state(SystemId::S1Real, &mut rng);
        let y: [f64; 6] = std::array::from_fn(|i| z[i].re);
        let back = complex_to_real(&real_to_complex(&y))?;
        for (a, b) in y.iter().zip(&back) {
            round = round.max((a - b).abs() / (1.0 + a.abs()));
        }
        let v = field_complex(SystemId::S1Real, params, &z)?;
        let pushed = pushforward(&y, &v.map(|c| c.re));
        let direct = field_complex(SystemId::S1Complex, params, &real_to_complex(&y))?;
        for j in 0..6 {
            push[j] = push[j].max((pushed[j] - direct[j]).norm() / (1.0 + direct[j].norm()));
        }
    }
    Ok((round, push))
}

pub fn run(cfg: &RunConfig) -> Partial {
    let (round, push) = match measure(&cfg.params, cfg.seed) {
        Ok(m) => m,
        Err(e) => return (Vec::new(), Some(e.into())),
    };
    let mut checks = vec![Check::at_most(
        T,
        "round_trip",
        "complex_to_real(real_to_complex(y)) = y",
        round,
        ROUND_TRIP_TOL,
    )
    .with_detail(format!("relative, max over {STATES} random states"))];
    for (j, name) in COMPONENTS.iter().enumerate() {
        let c = Check::at_most(
            T,
            format!("pushforward.{name}"),
            format!("chart differential of the real field equals the complex field ({name} component)"),
            push[j],
            PUSHFORWARD_TOL,
        )
        .with_detail(format!("relative, max over {STATES} random states"));
        checks.push(if DOCUMENTED_MISMATCH.contains(name) { c.finding_if_failed() } else { c });
    }
    (checks, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_shared_components_pass() {
        let (checks, abort) = run(&RunConfig::default());
        assert!(abort.is_none());
        for c in &checks {
            let documented = DOCUMENTED_MISMATCH.iter().any(|n| c.name.ends_with(n));
            assert!(documented || c.passed(), "{c:?}");
        }
    }
}
