//! Adaptive explicit Runge–Kutta integration of the catalog systems.
//!
//! Complex charts are integrated as their interleaved real form. A
//! singularity guard tripping anywhere inside a step ends the run with
//! [`Termination::Singularity`]; the samples up to the last accepted step are
//! kept.

mod dopri;
mod export;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{field_complex, CatalogError, State, SystemId, SystemParams, C};

pub use dopri::{integrate_raw, DenseStep, RawSolution};
pub use export::{csv_header, ExportError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntegratorError {
    #[error("initial state is singular: {0}")]
    SingularStart(CatalogError),
    #[error("invalid tolerance specification: {0}")]
    InvalidTolerance(String),
    #[error("invalid time span: {0}")]
    InvalidSpan(String),
    #[error("step size fell below h_min at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("integration stopped at a singularity near t = {t}")]
    Singularity { t: f64 },
    #[error("step limit reached at t = {t}")]
    StepLimit { t: f64 },
    #[error("state does not belong to {expected}")]
    WrongSystem { expected: SystemId },
}

/// `dy/dt = f(t, y)` on a flat real vector.
pub trait OdeSystem {
    fn dim(&self) -> usize;

    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) -> Result<(), CatalogError>;
}

/// A catalog system in its flat real layout.
#[derive(Debug, Clone, Copy)]
pub struct CatalogSystem {
    pub id: SystemId,
    pub params: SystemParams,
}

impl OdeSystem for CatalogSystem {
    fn dim(&self) -> usize {
        self.id.real_dim()
    }

    fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) -> Result<(), CatalogError> {
        let z: [C; 6] = if self.id.is_complex() {
            std::array::from_fn(|i| C::new(y[2 * i], y[2 * i + 1]))
        } else {
            std::array::from_fn(|i| C::new(y[i], 0.0))
        };
        let f = field_complex(self.id, &self.params, &z)?;
        if self.id.is_complex() {
            for (i, v) in f.iter().enumerate() {
                dy[2 * i] = v.re;
                dy[2 * i + 1] = v.im;
            }
        } else {
            for (i, v) in f.iter().enumerate() {
                dy[i] = v.re;
            }
        }
        Ok(())
    }
}

/// The time-reversed flow `dy/dt = -f(y)`.
pub struct Reversed<'a, S: OdeSystem>(pub &'a S);

impl<S: OdeSystem> OdeSystem for Reversed<'_, S> {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) -> Result<(), CatalogError> {
        self.0.rhs(-t, y, dy)?;
        dy.iter_mut().for_each(|v| *v = -*v);
        Ok(())
    }
}

/// What the embedded error estimate is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorControl {
    /// Local error per step.
    PerStep,
    /// Local error per unit step; global error shrinks faster than the tolerance.
    #[default]
    PerUnitStep,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TolSpec {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    pub h_min: f64,
    pub h_max: f64,
    pub max_steps: usize,
    pub control: ErrorControl,
}

impl Default for TolSpec {
    fn default() -> Self {
        TolSpec {
            rtol: 1e-10,
            atol: 1e-12,
            h_init: 1e-3,
            h_min: 1e-12,
            h_max: 0.5,
            max_steps: 2_000_000,
            control: ErrorControl::PerUnitStep,
        }
    }
}

impl TolSpec {
    pub fn validate(&self) -> Result<(), IntegratorError> {
        let bad = |m: &str| Err(IntegratorError::InvalidTolerance(m.to_string()));
        if !(self.rtol > 0.0 && self.atol > 0.0) {
            return bad("rtol and atol must be positive");
        }
        if !(0.0 < self.h_min && self.h_min <= self.h_init && self.h_init <= self.h_max) {
            return bad("need 0 < h_min <= h_init <= h_max");
        }
        if self.max_steps == 0 {
            return bad("max_steps must be positive");
        }
        Ok(())
    }

    /// Tolerances divided by `factor`.
    pub fn tightened(&self, factor: f64) -> Self {
        TolSpec {
            rtol: self.rtol / factor,
            atol: self.atol / factor,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub min_step: f64,
    pub max_step: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Completed,
    Singularity,
    StepUnderflow,
    StepLimit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Trajectory {
    pub system: SystemId,
    pub params: SystemParams,
    pub tol: TolSpec,
    pub sample_dt: f64,
    pub t_end: f64,
    pub times: Vec<f64>,
    /// Flat real state vectors, one per sample.
    pub states: Vec<Vec<f64>>,
    pub stats: StepStats,
    pub termination: Termination,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn state(&self, i: usize) -> State {
        State {
            system: self.system,
            values: self.states[i].clone(),
        }
    }

    pub fn complex_states(&self) -> Vec<[C; 6]> {
        (0..self.len()).map(|i| self.state(i).complex()).collect()
    }

    pub fn last_time(&self) -> f64 {
        self.times.last().copied().unwrap_or(0.0)
    }

    /// `Ok` for completed runs, otherwise the termination as an error.
    pub fn ensure_completed(&self) -> Result<(), IntegratorError> {
        let t = self.last_time();
        match self.termination {
            Termination::Completed => Ok(()),
            Termination::Singularity => Err(IntegratorError::Singularity { t }),
            Termination::StepUnderflow => Err(IntegratorError::StepUnderflow { t }),
            Termination::StepLimit => Err(IntegratorError::StepLimit { t }),
        }
    }

    /// Re-integrate from the same initial state with tolerances divided by
    /// `factor`.
    pub fn refine(&self, factor: f64) -> Result<Trajectory, IntegratorError> {
        if !(factor > 1.0) {
            return Err(IntegratorError::InvalidTolerance("refinement factor must exceed 1".into()));
        }
        integrate(
            self.system,
            &self.params,
            &self.state(0),
            self.t_end,
            &self.tol.tightened(factor),
            self.sample_dt,
        )
    }
}

/// Sample grid `0, dt, 2dt, …` up to `t_end`, with `t_end` appended when it
/// is not on the grid.
pub fn sample_grid(t_end: f64, sample_dt: f64) -> Vec<f64> {
    let n = (t_end / sample_dt + 1e-9).floor() as usize;
    let mut grid: Vec<f64> = (0..=n).map(|k| k as f64 * sample_dt).collect();
    if let Some(&last) = grid.last() {
        if t_end - last > 1e-9 * sample_dt {
            grid.push(t_end);
        } else {
            *grid.last_mut().unwrap() = t_end;
        }
    }
    grid
}

pub fn integrate(
    id: SystemId,
    params: &SystemParams,
    state0: &State,
    t_end: f64,
    tol: &TolSpec,
    sample_dt: f64,
) -> Result<Trajectory, IntegratorError> {
    if state0.system != id {
        return Err(IntegratorError::WrongSystem { expected: id });
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(IntegratorError::InvalidSpan("t_end must be positive".into()));
    }
    if !(sample_dt > 0.0 && sample_dt.is_finite()) {
        return Err(IntegratorError::InvalidSpan("sample_dt must be positive".into()));
    }
    let sys = CatalogSystem { id, params: *params };
    let grid = sample_grid(t_end, sample_dt);
    let mut times = vec![0.0];
    let mut states = vec![state0.values.clone()];
    let mut next = 1;
    let raw = integrate_raw(&sys, 0.0, &state0.values, t_end, tol, |step| {
        while next < grid.len() && grid[next] <= step.t1() {
            times.push(grid[next]);
            states.push(step.eval(grid[next]));
            next += 1;
        }
    })?;
    Ok(Trajectory {
        system: id,
        params: *params,
        tol: *tol,
        sample_dt,
        t_end,
        times,
        states,
        stats: raw.stats,
        termination: raw.termination,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Harmonic;

    impl OdeSystem for Harmonic {
        fn dim(&self) -> usize {
            2
        }

        fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) -> Result<(), CatalogError> {
            dy[0] = y[1];
            dy[1] = -y[0];
            Ok(())
        }
    }

    fn final_state(sys: &dyn OdeSystem, y0: &[f64], t_end: f64, tol: &TolSpec) -> Vec<f64> {
        let mut last = y0.to_vec();
        integrate_raw(sys, 0.0, y0, t_end, tol, |s| last = s.eval(s.t1())).unwrap();
        last
    }

    #[test]
    fn harmonic_oscillator_accuracy() {
        let y = final_state(&Harmonic, &[1.0, 0.0], 10.0, &TolSpec::default());
        assert!((y[0] - 10f64.cos()).abs() < 1e-9);
        assert!((y[1] + 10f64.sin()).abs() < 1e-9);
    }

    #[test]
    fn both_error_controls_converge() {
        let err = |control, rtol: f64| {
            let tol = TolSpec { rtol, atol: rtol * 1e-2, control, ..Default::default() };
            (final_state(&Harmonic, &[1.0, 0.0], 10.0, &tol)[0] - 10f64.cos()).abs()
        };
        for control in [ErrorControl::PerStep, ErrorControl::PerUnitStep] {
            assert!(err(control, 1e-8) < 1e-6, "{control:?}");
        }
        let ratio = err(ErrorControl::PerUnitStep, 1e-7) / err(ErrorControl::PerUnitStep, 1e-8);
        assert!(ratio > 10.0, "{ratio}");
    }

    #[test]
    fn dense_output_is_accurate_inside_steps() {
        let tol = TolSpec {
            h_max: 0.5,
            ..Default::default()
        };
        let mut worst: f64 = 0.0;
        integrate_raw(&Harmonic, 0.0, &[1.0, 0.0], 5.0, &tol, |s| {
            for j in 1..10 {
                let t = s.t0 + s.h * j as f64 / 10.0;
                worst = worst.max((s.eval(t)[0] - t.cos()).abs());
            }
        })
        .unwrap();
        assert!(worst < 1e-8, "{worst}");
    }

    #[test]
    fn dense_output_hits_endpoints_exactly() {
        integrate_raw(&Harmonic, 0.0, &[1.0, 0.0], 1.0, &TolSpec::default(), |s| {
            assert_eq!(s.eval(s.t0), s.start_state());
            assert_eq!(s.eval(s.t1()), s.end_state());
        })
        .unwrap();
    }

    #[test]
    fn grid_includes_end() {
        assert_eq!(sample_grid(1.0, 0.25), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(sample_grid(1.0, 0.3).last(), Some(&1.0));
        assert_eq!(sample_grid(1.0, 0.3).len(), 5);
    }

    #[test]
    fn tolerance_validation() {
        let bad = TolSpec {
            h_min: 1.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        assert!(TolSpec::default().validate().is_ok());
    }

    #[test]
    fn equilibrium_stays_constant() {
        let st = State::new(SystemId::S1Real, vec![1.0, 0.0, 0.0, 5.0, 0.0, 0.0]).unwrap();
        let tr = integrate(SystemId::S1Real, &SystemParams::default(), &st, 10.0, &TolSpec::default(), 0.5).unwrap();
        assert_eq!(tr.termination, Termination::Completed);
        assert_eq!(tr.stats.rejected, 0);
        assert!(tr.states.iter().all(|s| *s == st.values));
        assert_eq!(tr.times.len(), 21);
    }

    #[test]
    fn singular_start_is_an_error() {
        let st = State::new(SystemId::S1Real, vec![1e-9, 1.0, 1.0, 0.0, 0.0, 0.0]).unwrap();
        let err = integrate(SystemId::S1Real, &SystemParams::default(), &st, 1.0, &TolSpec::default(), 0.1);
        assert!(matches!(err, Err(IntegratorError::SingularStart(_))));
    }

    fn s3_example() -> (State, SystemParams) {
        let z = [1.0, 0.0, 1.0, 1.0, 1.0, 0.0].map(|v| C::new(v, 0.0));
        (State::from_complex(SystemId::S3Cubic, &z), SystemParams::default())
    }

    fn product_drift(tr: &Trajectory) -> f64 {
        tr.complex_states()
            .iter()
            .map(|z| (z[2] * z[3] - 1.0).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn cubic_product_is_conserved() {
        let (st, p) = s3_example();
        let tr = integrate(SystemId::S3Cubic, &p, &st, 5.0, &TolSpec::default(), 0.05).unwrap();
        tr.ensure_completed().unwrap();
        assert!(product_drift(&tr) <= 1e-9, "{}", product_drift(&tr));
    }

    #[test]
    fn forward_then_backward_returns() {
        let (st, p) = s3_example();
        let sys = CatalogSystem { id: SystemId::S3Cubic, params: p };
        let fwd = final_state(&sys, &st.values, 3.0, &TolSpec::default());
        let back = final_state(&Reversed(&sys), &fwd, 3.0, &TolSpec::default());
        let err = back.iter().zip(&st.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-7, "{err}");
    }

    #[test]
    fn refinement_keeps_termination_and_reduces_drift() {
        let (st, p) = s3_example();
        let tol = TolSpec { rtol: 1e-7, atol: 1e-9, ..Default::default() };
        let tr = integrate(SystemId::S3Cubic, &p, &st, 5.0, &tol, 0.05).unwrap();
        let fine = tr.refine(10.0).unwrap();
        assert_eq!(fine.termination, tr.termination);
        assert_eq!(fine.tol.rtol, 1e-8);
        assert!(product_drift(&fine) <= product_drift(&tr));
        assert!(tr.refine(1.0).is_err());
    }

    #[test]
    fn complex_chart_matches_hand_rolled_real_system() {
        struct Flat(CatalogSystem);
        impl OdeSystem for Flat {
            fn dim(&self) -> usize {
                12
            }
            fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) -> Result<(), CatalogError> {
                self.0.rhs(t, y, dy)
            }
        }
        let (st, p) = s3_example();
        let sys = CatalogSystem { id: SystemId::S3Cubic, params: p };
        let a = final_state(&sys, &st.values, 1.0, &TolSpec::default());
        let b = final_state(&Flat(sys), &st.values, 1.0, &TolSpec::default());
        assert_eq!(a, b);
    }
}
