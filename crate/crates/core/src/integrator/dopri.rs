//! Dormand–Prince 5(4) with PI step-size control and 4th-order dense output.

use serde::{Deserialize, Serialize};

use super::{ErrorControl, IntegratorError, OdeSystem, StepStats, Termination, TolSpec};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const BETA: f64 = 0.04;

/// Interpolant over one accepted step `[t0, t0 + h]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseStep {
    pub t0: f64,
    pub h: f64,
    y0: Vec<f64>,
    y1: Vec<f64>,
    r2: Vec<f64>,
    r3: Vec<f64>,
    r4: Vec<f64>,
    r5: Vec<f64>,
}

impl DenseStep {
    pub fn start_state(&self) -> &[f64] {
        &self.y0
    }

    pub fn end_state(&self) -> &[f64] {
        &self.y1
    }

    pub fn t1(&self) -> f64 {
        self.t0 + self.h
    }

    /// Interpolated state at `t`; exact step endpoints at `t0` and `t0 + h`.
    pub fn eval(&self, t: f64) -> Vec<f64> {
        if t == self.t0 {
            return self.y0.clone();
        }
        if t == self.t1() {
            return self.y1.clone();
        }
        let th = (t - self.t0) / self.h;
        let th1 = 1.0 - th;
        (0..self.y0.len())
            .map(|i| self.y0[i] + th * (self.r2[i] + th1 * (self.r3[i] + th * (self.r4[i] + th1 * self.r5[i]))))
            .collect()
    }
}

fn axpy(y: &[f64], h: f64, terms: &[(f64, &[f64])]) -> Vec<f64> {
    (0..y.len())
        .map(|i| y[i] + h * terms.iter().map(|(c, k)| c * k[i]).sum::<f64>())
        .collect()
}

pub struct RawSolution {
    pub stats: StepStats,
    pub termination: Termination,
}

/// Integrate from `t0` to `t_end`, handing every accepted step to `on_step`.
pub fn integrate_raw(
    sys: &dyn OdeSystem,
    t0: f64,
    y0: &[f64],
    t_end: f64,
    tol: &TolSpec,
    mut on_step: impl FnMut(&DenseStep),
) -> Result<RawSolution, IntegratorError> {
    tol.validate()?;
    let n = sys.dim();
    let mut k1 = vec![0.0; n];
    sys.rhs(t0, y0, &mut k1).map_err(IntegratorError::SingularStart)?;
    let mut stats = StepStats::default();
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut h = tol.h_init.min(tol.h_max).min(t_end - t0);
    let mut facold: f64 = 1e-4;
    let mut rejected_last = false;
    let (per_unit, expo1) = match tol.control {
        ErrorControl::PerStep => (false, 0.2 - BETA * 0.75),
        ErrorControl::PerUnitStep => (true, 0.25 - BETA * 0.75),
    };
    let mut buf: [Vec<f64>; 6] = std::array::from_fn(|_| vec![0.0; n]);

    while t < t_end {
        if stats.accepted + stats.rejected >= tol.max_steps {
            return Ok(RawSolution {
                stats,
                termination: Termination::StepLimit,
            });
        }
        if h < tol.h_min {
            return Ok(RawSolution {
                stats,
                termination: Termination::StepUnderflow,
            });
        }
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }
        let [k2, k3, k4, k5, k6, k7] = &mut buf;
        let stages = (|| -> Result<Vec<f64>, crate::catalog::CatalogError> {
            sys.rhs(t + C2 * h, &axpy(&y, h, &[(A21, &k1)]), k2)?;
            sys.rhs(t + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, k2)]), k3)?;
            sys.rhs(t + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, k2), (A43, k3)]), k4)?;
            sys.rhs(t + C5 * h, &axpy(&y, h, &[(A51, &k1), (A52, k2), (A53, k3), (A54, k4)]), k5)?;
            let ys = axpy(&y, h, &[(A61, &k1), (A62, k2), (A63, k3), (A64, k4), (A65, k5)]);
            sys.rhs(t + h, &ys, k6)?;
            let y1 = axpy(&y, h, &[(A71, &k1), (A73, k3), (A74, k4), (A75, k5), (A76, k6)]);
            sys.rhs(t + h, &y1, k7)?;
            Ok(y1)
        })();
        let y1 = match stages {
            Ok(y1) => y1,
            Err(_) => {
                return Ok(RawSolution {
                    stats,
                    termination: Termination::Singularity,
                })
            }
        };
        let mut err = 0.0;
        for i in 0..n {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sk = tol.atol + tol.rtol * y[i].abs().max(y1[i].abs());
            err += (e / sk) * (e / sk);
        }
        let mut err = (err / n as f64).sqrt();
        if per_unit {
            err /= h;
        }
        if !err.is_finite() {
            stats.rejected += 1;
            h *= FAC_MIN;
            rejected_last = true;
            continue;
        }
        let fac11 = err.powf(expo1);
        if err <= 1.0 {
            let fac = (fac11 / facold.powf(BETA) / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
            facold = err.max(1e-4);
            let ydiff: Vec<f64> = (0..n).map(|i| y1[i] - y[i]).collect();
            let r3: Vec<f64> = (0..n).map(|i| h * k1[i] - ydiff[i]).collect();
            let r4: Vec<f64> = (0..n).map(|i| ydiff[i] - h * k7[i] - r3[i]).collect();
            let r5: Vec<f64> = (0..n)
                .map(|i| h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]))
                .collect();
            let t1 = if last { t_end } else { t + h };
            let step = DenseStep {
                t0: t,
                h: t1 - t,
                y0: y.clone(),
                y1: y1.clone(),
                r2: ydiff,
                r3,
                r4,
                r5,
            };
            stats.accepted += 1;
            stats.min_step = if stats.accepted == 1 { h } else { stats.min_step.min(h) };
            stats.max_step = stats.max_step.max(h);
            on_step(&step);
            t = t1;
            y = y1;
            k1.clone_from(k7);
            let mut hnew = (h / fac).min(tol.h_max);
            if rejected_last {
                hnew = hnew.min(h);
            }
            rejected_last = false;
            h = hnew;
        } else {
            stats.rejected += 1;
            h /= (fac11 / SAFETY).min(1.0 / FAC_MIN);
            rejected_last = true;
        }
    }
    Ok(RawSolution {
        stats,
        termination: Termination::Completed,
    })
}
