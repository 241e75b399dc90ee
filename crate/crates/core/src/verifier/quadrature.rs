use serde::{Deserialize, Serialize};

use super::branch::BranchTracker;
use super::separation::{separation_roots, velocity_identity, viete_residuals};
use super::{complex_coords, complex_velocity, SeparationTrack, VerifierError};
use crate::catalog::{separation_family, State, SystemId, SystemParams, C};
use crate::fixtures::QuadraticFamily;
use crate::integrator::{integrate, ExportError, TolSpec, Trajectory};

const I: C = C::new(0.0, 1.0);

/// Trajectories whose initial speed is below this are treated as rest
/// points and left out of quadrature checks.
pub const MIN_MOTION: f64 = 1e-6;

pub fn is_moving(traj: &Trajectory) -> Result<bool, VerifierError> {
    if traj.is_empty() {
        return Ok(false);
    }
    let v = complex_velocity(&traj.params, &traj.state(0))?;
    Ok(v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt() >= MIN_MOTION)
}

/// `log2(coarse / fine)` for a halved step.
pub fn convergence_order(coarse: f64, fine: f64) -> f64 {
    if fine == 0.0 {
        return f64::INFINITY;
    }
    (coarse / fine).log2()
}

fn check_first_family(traj: &Trajectory, op: &'static str) -> Result<QuadraticFamily<C>, VerifierError> {
    match traj.system {
        SystemId::S1Real | SystemId::S1Complex => Ok(separation_family(traj.system, &traj.params).expect("first family")),
        system => Err(VerifierError::Unsupported { op, system }),
    }
}

/// Indices with uniformly spaced neighbours on both sides.
fn interior(traj: &Trajectory) -> Result<Vec<usize>, VerifierError> {
    let dt = traj.sample_dt;
    let ok = |a: f64, b: f64| ((b - a) - dt).abs() <= 1e-9 * dt;
    let idx: Vec<usize> = (1..traj.len().saturating_sub(1))
        .filter(|&j| ok(traj.times[j - 1], traj.times[j]) && ok(traj.times[j], traj.times[j + 1]))
        .collect();
    if idx.is_empty() {
        return Err(VerifierError::TooFewSamples {
            needed: 3,
            found: traj.len(),
        });
    }
    Ok(idx)
}

fn central(v: &[C], j: usize) -> C {
    (v[j + 1] - v[j - 1]) / 2.0
}

fn max_norm(v: &[C]) -> f64 {
    v.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSeries {
    /// Sample indices the residuals belong to.
    pub indices: Vec<usize>,
    pub times: Vec<f64>,
    /// `ds1/√Φ(s1) + ds2/√Φ(s2)`.
    pub res1: Vec<C>,
    /// `s1 ds1/√Φ(s1) + s2 ds2/√Φ(s2) - i dt`.
    pub res2: Vec<C>,
    pub max_res1: f64,
    pub max_res2: f64,
    pub dt: f64,
    pub k: C,
    /// Signs applied to the continued `√Φ(s1)`, `√Φ(s2)`.
    pub signs: [f64; 2],
}

/// Quadrature residuals of the separated motion with `Φ(s) = P(s)(s - k)(s + k)`,
/// `k² = e1 e2` from the initial sample, and differentials `ds_i` from
/// central differences on the track. The square roots are continued along
/// the track; their signs are fixed at the first interior sample by
/// minimizing `|res1| + |res2|` there.
pub fn quadrature_residuals(track: &SeparationTrack, traj: &Trajectory) -> Result<QuadratureSeries, VerifierError> {
    let family = check_first_family(traj, "quadrature_residuals")?;
    if track.len() != traj.len() {
        return Err(VerifierError::Misaligned);
    }
    let idx = interior(traj)?;
    let z0 = complex_coords(&traj.state(0));
    let k = (z0[2] * z0[3]).sqrt();
    let phi = |s: C| family.p.eval(&s) * (s - k) * (s + k);
    let w1 = BranchTracker::track("Phi(s1)", &track.times, track.s1.iter().map(|&s| phi(s)))?;
    let w2 = BranchTracker::track("Phi(s2)", &track.times, track.s2.iter().map(|&s| phi(s)))?;
    let dt = traj.sample_dt;
    let raw = |j: usize, sg: [f64; 2]| {
        let (d1, d2) = (central(&track.s1, j) / (w1[j] * sg[0]), central(&track.s2, j) / (w2[j] * sg[1]));
        (d1 + d2, track.s1[j] * d1 + track.s2[j] * d2 - I * dt)
    };
    let j0 = idx[0];
    let signs = [[1.0, 1.0], [1.0, -1.0], [-1.0, 1.0], [-1.0, -1.0]]
        .into_iter()
        .min_by(|a, b| {
            let score = |sg: [f64; 2]| {
                let (r1, r2) = raw(j0, sg);
                r1.norm() + r2.norm()
            };
            score(*a).total_cmp(&score(*b))
        })
        .expect("four candidates");
    let (res1, res2): (Vec<C>, Vec<C>) = idx.iter().map(|&j| raw(j, signs)).unzip();
    Ok(QuadratureSeries {
        times: idx.iter().map(|&j| traj.times[j]).collect(),
        indices: idx,
        max_res1: max_norm(&res1),
        max_res2: max_norm(&res2),
        res1,
        res2,
        dt,
        k,
        signs,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KowchSeries {
    pub indices: Vec<usize>,
    /// `dx1/√P(x1) + dx2/√P(x2) - ds_a/√P(s_a)`.
    pub res1: Vec<C>,
    /// `dx1/√P(x1) - dx2/√P(x2) + ds_b/√P(s_b)`.
    pub res2: Vec<C>,
    pub max_res1: f64,
    pub max_res2: f64,
    /// `true` when `(a, b) = (2, 1)` rather than `(1, 2)`.
    pub labels_swapped: bool,
    /// Signs applied to the continued `√P(x1)`, `√P(x2)`, `√P(s1)`, `√P(s2)`.
    pub signs: [f64; 4],
}

/// Residuals of the differential relations between `x1, x2` and the
/// separation roots implied by strong separability. The root labels and
/// square-root signs are fixed at the first interior sample.
pub fn kowch_residuals(
    track: &SeparationTrack,
    traj: &Trajectory,
    family: &QuadraticFamily<C>,
) -> Result<KowchSeries, VerifierError> {
    if track.len() != traj.len() {
        return Err(VerifierError::Misaligned);
    }
    let idx = interior(traj)?;
    let zs: Vec<[C; 6]> = (0..traj.len()).map(|i| complex_coords(&traj.state(i))).collect();
    let x1: Vec<C> = zs.iter().map(|z| z[0]).collect();
    let x2: Vec<C> = zs.iter().map(|z| z[1]).collect();
    let p = |v: &C| family.p.eval(v);
    let t = &track.times;
    let wx1 = BranchTracker::track("P(x1)", t, x1.iter().map(p))?;
    let wx2 = BranchTracker::track("P(x2)", t, x2.iter().map(p))?;
    let ws1 = BranchTracker::track("P(s1)", t, track.s1.iter().map(p))?;
    let ws2 = BranchTracker::track("P(s2)", t, track.s2.iter().map(p))?;
    let raw = |j: usize, swap: bool, sg: [f64; 4]| {
        let u = central(&x1, j) / (wx1[j] * sg[0]);
        let v = central(&x2, j) / (wx2[j] * sg[1]);
        let g1 = central(&track.s1, j) / (ws1[j] * sg[2]);
        let g2 = central(&track.s2, j) / (ws2[j] * sg[3]);
        let (ga, gb) = if swap { (g2, g1) } else { (g1, g2) };
        (u + v - ga, u - v + gb)
    };
    let j0 = idx[0];
    let mut best = (f64::INFINITY, false, [1.0; 4]);
    for swap in [false, true] {
        for m in 0..16u32 {
            let sg: [f64; 4] = std::array::from_fn(|b| if m >> b & 1 == 1 { -1.0 } else { 1.0 });
            let (r1, r2) = raw(j0, swap, sg);
            let score = r1.norm() + r2.norm();
            if score < best.0 {
                best = (score, swap, sg);
            }
        }
    }
    let (_, swap, signs) = best;
    let (res1, res2): (Vec<C>, Vec<C>) = idx.iter().map(|&j| raw(j, swap, signs)).unzip();
    Ok(KowchSeries {
        indices: idx,
        max_res1: max_norm(&res1),
        max_res2: max_norm(&res2),
        res1,
        res2,
        labels_swapped: swap,
        signs,
    })
}

/// CSV of `t, s1, s2, res1, res2` over the quadrature samples.
pub fn quadrature_csv(track: &SeparationTrack, series: &QuadratureSeries) -> Result<String, ExportError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["t", "s1_re", "s1_im", "s2_re", "s2_im", "res1_re", "res1_im", "res2_re", "res2_im"])?;
    for (n, &j) in series.indices.iter().enumerate() {
        let vals = [track.s1[j], track.s2[j], series.res1[n], series.res2[n]];
        let mut row = vec![track.times[j].to_string()];
        for v in vals {
            row.push(v.re.to_string());
            row.push(v.im.to_string());
        }
        w.write_record(&row)?;
    }
    let buf = w.into_inner().map_err(|e| ExportError::Io(e.into_error()))?;
    String::from_utf8(buf).map_err(|e| ExportError::Malformed(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StudyLevel {
    pub dt: f64,
    pub samples: usize,
    pub max_res1: f64,
    pub max_res2: f64,
    pub kowch_max1: f64,
    pub kowch_max2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureStudy {
    pub system: SystemId,
    pub moving: bool,
    pub coarse: StudyLevel,
    pub fine: StudyLevel,
    pub order_res1: f64,
    pub order_res2: f64,
    pub order_kowch1: f64,
    pub order_kowch2: f64,
    pub viete_max_sum: f64,
    pub viete_max_diff: f64,
    pub velocity_max: f64,
    pub quadratic_residual: f64,
    pub continuity_ratio: f64,
    pub kowch_labels_swapped: bool,
}

/// Integrate from `state0` at sampling steps `dt` and `dt/2`, measure all
/// separation, velocity and quadrature residuals, and the convergence
/// orders of the differential relations.
pub fn quadrature_study(
    params: &SystemParams,
    state0: &State,
    t_end: f64,
    tol: &TolSpec,
    dt: f64,
) -> Result<QuadratureStudy, VerifierError> {
    let id = state0.system;
    let mut levels = Vec::with_capacity(2);
    let mut fine_extras = None;
    for h in [dt, dt / 2.0] {
        let traj = integrate(id, params, state0, t_end, tol, h)?;
        traj.ensure_completed()?;
        let family = check_first_family(&traj, "quadrature_study")?;
        let track = separation_roots(&traj, &family)?;
        let q = quadrature_residuals(&track, &traj)?;
        let kw = kowch_residuals(&track, &traj, &family)?;
        levels.push(StudyLevel {
            dt: h,
            samples: traj.len(),
            max_res1: q.max_res1,
            max_res2: q.max_res2,
            kowch_max1: kw.max_res1,
            kowch_max2: kw.max_res2,
        });
        if h < dt {
            let v = viete_residuals(&track, &traj, &family)?;
            let vel = velocity_identity(&traj, &family)?;
            fine_extras = Some((v, vel, track, kw.labels_swapped, is_moving(&traj)?));
        }
    }
    let (coarse, fine) = (levels[0], levels[1]);
    let (viete, vel, track, swapped, moving) = fine_extras.expect("fine level ran");
    Ok(QuadratureStudy {
        system: id,
        moving,
        coarse,
        fine,
        order_res1: convergence_order(coarse.max_res1, fine.max_res1),
        order_res2: convergence_order(coarse.max_res2, fine.max_res2),
        order_kowch1: convergence_order(coarse.kowch_max1, fine.kowch_max1),
        order_kowch2: convergence_order(coarse.kowch_max2, fine.kowch_max2),
        viete_max_sum: viete.max_sum,
        viete_max_diff: viete.max_diff,
        velocity_max: vel.max,
        quadratic_residual: track.max_quadratic_residual,
        continuity_ratio: track.max_continuity_ratio,
        kowch_labels_swapped: swapped,
    })
}
