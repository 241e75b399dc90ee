//! Separation variables along a first-system trajectory that starts on its
//! invariant set: the quadratic, Viète and velocity identities, and the
//! convergence of the differential relations as the sampling step halves.

use kowtype::catalog::{sample_initial_state, separation_family, State, SystemId, SystemParams};
use kowtype::integrator::integrate;
use kowtype::verifier::{quadrature_csv, quadrature_residuals, quadrature_study, separation_roots, QuadratureStudy};

use super::{Abort, Partial};
use crate::config::RunConfig;
use crate::report::Check;
use crate::Target;

pub const VIETE_TOL: f64 = 1e-9;
pub const VELOCITY_TOL: f64 = 1e-8;
pub const QUADRATIC_TOL: f64 = 1e-10;
pub const CONTINUITY_MAX: f64 = 0.5;
pub const MIN_ORDER: f64 = 1.8;

const T: Target = Target::Quadrature;

/// The configured initial state when the run is on the complex first
/// system, otherwise a seeded on-set draw for it.
pub fn initial(cfg: &RunConfig) -> Result<(State, SystemParams), Abort> {
    if cfg.system == SystemId::S1Complex {
        Ok(cfg.initial_state()?)
    } else {
        Ok(sample_initial_state(SystemId::S1Complex, &cfg.params, cfg.initial_seed(), true)?)
    }
}

pub fn study_checks(s: &QuadratureStudy) -> Vec<Check> {
    let mut checks = vec![
        Check::at_most(T, "quadratic", "A s_i² + B s_i + C = 0", s.quadratic_residual, QUADRATIC_TOL),
        Check::at_most(
            T,
            "continuity",
            "per-step root motion below half the root gap",
            s.continuity_ratio,
            CONTINUITY_MAX,
        ),
        Check::at_most(T, "viete.sum", "s1 + s2 = -B/A", s.viete_max_sum, VIETE_TOL),
        Check::at_most(T, "viete.diff", "(s2 - s1) A = √(4 P(x1) P(x2))", s.viete_max_diff, VIETE_TOL),
        Check::at_most(T, "velocity", "-4 ẋ_i² = P(x_i) + (x1 - x2)² e_i", s.velocity_max, VELOCITY_TOL),
    ];
    let orders = [
        ("order.res1", "ds1/√Φ(s1) + ds2/√Φ(s2) = 0", s.order_res1, s.coarse.max_res1, s.fine.max_res1),
        ("order.res2", "s1 ds1/√Φ(s1) + s2 ds2/√Φ(s2) = i dt", s.order_res2, s.coarse.max_res2, s.fine.max_res2),
        (
            "order.separation1",
            "dx1/√P(x1) + dx2/√P(x2) = ds1/√P(s1)",
            s.order_kowch1,
            s.coarse.kowch_max1,
            s.fine.kowch_max1,
        ),
        (
            "order.separation2",
            "dx1/√P(x1) - dx2/√P(x2) = -ds2/√P(s2)",
            s.order_kowch2,
            s.coarse.kowch_max2,
            s.fine.kowch_max2,
        ),
    ];
    for (name, identity, order, coarse, fine) in orders {
        let c = Check::at_least(T, name, identity, order, MIN_ORDER).with_detail(format!(
            "max residual {coarse:e} at dt {} -> {fine:e} at dt {}",
            s.coarse.dt, s.fine.dt
        ));
        checks.push(if s.moving {
            c
        } else {
            c.finding_if_failed()
                .with_detail("excluded: trajectory is below the minimum-motion filter".to_string())
        });
    }
    checks
}

pub fn run(cfg: &RunConfig) -> Partial {
    let (state0, params) = match initial(cfg) {
        Ok(v) => v,
        Err(a) => return (Vec::new(), Some(a)),
    };
    match quadrature_study(&params, &state0, cfg.t_end, &cfg.tol, cfg.sample_dt) {
        Ok(s) => (study_checks(&s), None),
        Err(e) => (Vec::new(), Some(e.into())),
    }
}

/// CSV of `t, s1, s2, res1, res2` at the configured sampling step.
pub fn table(cfg: &RunConfig) -> Result<String, Abort> {
    let (state0, params) = initial(cfg)?;
    let traj = integrate(SystemId::S1Complex, &params, &state0, cfg.t_end, &cfg.tol, cfg.sample_dt)?;
    traj.ensure_completed()?;
    let family = separation_family(SystemId::S1Complex, &params)
        .ok_or_else(|| Abort::Error("no separation quadratic".into()))?;
    let track = separation_roots(&traj, &family)?;
    let series = quadrature_residuals(&track, &traj)?;
    quadrature_csv(&track, &series).map_err(|e| Abort::Error(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> RunConfig {
        RunConfig {
            system: SystemId::S1Complex,
            t_end: 1.0,
            sample_dt: 0.02,
            ..Default::default()
        }
    }

    #[test]
    fn short_run_passes() {
        let (checks, abort) = run(&cfg());
        assert!(abort.is_none(), "{abort:?}");
        assert_eq!(checks.len(), 9);
        assert!(checks.iter().all(Check::passed), "{checks:?}");
    }

    #[test]
    fn table_has_a_row_per_sample() {
        let csv = table(&cfg()).unwrap();
        let rows = csv.lines().count();
        assert!(rows > 40, "{rows}");
        assert!(csv.starts_with("t,"));
    }
}
