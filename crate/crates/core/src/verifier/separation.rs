use serde::{Deserialize, Serialize};

use super::branch::BranchTracker;
use super::{complex_coords, complex_velocity, VerifierError};
use crate::catalog::{SystemId, C};
use crate::fixtures::QuadraticFamily;
use crate::integrator::Trajectory;

/// Roots of `a s² + b s + c`, the first from the `-√` branch of the
/// quadratic formula with the principal square root, computed without
/// cancellation.
pub fn quadratic_roots(a: C, b: C, c: C) -> (C, C) {
    let d = (b * b - a * c * 4.0).sqrt();
    if (b.conj() * d).re >= 0.0 {
        let q = -(b + d) / 2.0;
        let s1 = q / a;
        let s2 = if q.norm() == 0.0 { s1 } else { c / q };
        (s1, s2)
    } else {
        let q = (d - b) / 2.0;
        let s2 = q / a;
        let s1 = if q.norm() == 0.0 { s2 } else { c / q };
        (s1, s2)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationTrack {
    pub times: Vec<f64>,
    pub s1: Vec<C>,
    pub s2: Vec<C>,
    /// `true` where the fresh roots were swapped to stay continuous.
    pub swapped: Vec<bool>,
    /// `max_t |A s_i² + B s_i + C|`.
    pub max_quadratic_residual: f64,
    /// `max_t max_i |s_i(t_j) - s_i(t_{j-1})| / |s1 - s2|`.
    pub max_continuity_ratio: f64,
}

impl SeparationTrack {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Roots of `F(x1(t), x2(t), s) = 0` along the trajectory, continued by
/// nearest match.
pub fn separation_roots(traj: &Trajectory, family: &QuadraticFamily<C>) -> Result<SeparationTrack, VerifierError> {
    let eps = traj.params.eps_sing;
    let mut track = SeparationTrack {
        times: traj.times.clone(),
        s1: Vec::with_capacity(traj.len()),
        s2: Vec::with_capacity(traj.len()),
        swapped: Vec::with_capacity(traj.len()),
        max_quadratic_residual: 0.0,
        max_continuity_ratio: 0.0,
    };
    for i in 0..traj.len() {
        let z = complex_coords(&traj.state(i));
        let (a, b, c) = (family.a.eval(&z[0], &z[1]), family.b.eval(&z[0], &z[1]), family.c.eval(&z[0], &z[1]));
        if a.norm() < eps {
            return Err(VerifierError::DegenerateQuadratic {
                t: traj.times[i],
                value: a.norm(),
            });
        }
        let (mut s1, mut s2) = quadratic_roots(a, b, c);
        let mut swap = false;
        if let (Some(&p1), Some(&p2)) = (track.s1.last(), track.s2.last()) {
            if (s1 - p2).norm() + (s2 - p1).norm() < (s1 - p1).norm() + (s2 - p2).norm() {
                std::mem::swap(&mut s1, &mut s2);
                swap = true;
            }
            let gap = (s1 - s2).norm();
            let step = (s1 - p1).norm().max((s2 - p2).norm());
            if step > 0.0 {
                track.max_continuity_ratio = track.max_continuity_ratio.max(step / gap);
            }
        }
        for s in [s1, s2] {
            track.max_quadratic_residual = track.max_quadratic_residual.max((a * s * s + b * s + c).norm());
        }
        track.s1.push(s1);
        track.s2.push(s2);
        track.swapped.push(swap);
    }
    Ok(track)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VieteResiduals {
    /// `|s1 + s2 + B/A|` per sample.
    pub sum: Vec<f64>,
    /// `|(s2 - s1) A - √(4 P(x1) P(x2))|` per sample.
    pub diff: Vec<f64>,
    pub max_sum: f64,
    pub max_diff: f64,
}

/// The sum and difference of the separation roots against the
/// coefficients and the discriminant factorization `4 P(x1) P(x2)`. The
/// square root is continued along the track, starting from the sign that
/// matches the first sample.
pub fn viete_residuals(
    track: &SeparationTrack,
    traj: &Trajectory,
    family: &QuadraticFamily<C>,
) -> Result<VieteResiduals, VerifierError> {
    if track.len() != traj.len() {
        return Err(VerifierError::Misaligned);
    }
    let mut tracker = BranchTracker::new("4 P(x1) P(x2)");
    let mut out = VieteResiduals {
        sum: Vec::with_capacity(track.len()),
        diff: Vec::with_capacity(track.len()),
        max_sum: 0.0,
        max_diff: 0.0,
    };
    let mut sign = 1.0;
    for i in 0..track.len() {
        let z = complex_coords(&traj.state(i));
        let (a, b) = (family.a.eval(&z[0], &z[1]), family.b.eval(&z[0], &z[1]));
        let root = tracker.next(track.times[i], family.p.eval(&z[0]) * family.p.eval(&z[1]) * 4.0)?;
        let lhs = (track.s2[i] - track.s1[i]) * a;
        if i == 0 && (lhs + root).norm() < (lhs - root).norm() {
            sign = -1.0;
        }
        let sum = (track.s1[i] + track.s2[i] + b / a).norm();
        let diff = (lhs - root * sign).norm();
        out.max_sum = out.max_sum.max(sum);
        out.max_diff = out.max_diff.max(diff);
        out.sum.push(sum);
        out.diff.push(diff);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VelocityResiduals {
    /// `|-4 ẋ1² - P(x1) - (x1 - x2)² e1|` per sample.
    pub x1: Vec<f64>,
    /// `|-4 ẋ2² - P(x2) - (x1 - x2)² e2|` per sample.
    pub x2: Vec<f64>,
    pub max: f64,
}

/// Velocity identities of the first family, with `ẋ` taken from the vector
/// field.
pub fn velocity_identity(traj: &Trajectory, family: &QuadraticFamily<C>) -> Result<VelocityResiduals, VerifierError> {
    if !matches!(traj.system, SystemId::S1Real | SystemId::S1Complex) {
        return Err(VerifierError::Unsupported {
            op: "velocity_identity",
            system: traj.system,
        });
    }
    let mut out = VelocityResiduals {
        x1: Vec::with_capacity(traj.len()),
        x2: Vec::with_capacity(traj.len()),
        max: 0.0,
    };
    for i in 0..traj.len() {
        let st = traj.state(i);
        let z = complex_coords(&st);
        let dz = complex_velocity(&traj.params, &st)?;
        let a = (z[0] - z[1]) * (z[0] - z[1]);
        let r1 = (dz[0] * dz[0] * -4.0 - family.p.eval(&z[0]) - a * z[2]).norm();
        let r2 = (dz[1] * dz[1] * -4.0 - family.p.eval(&z[1]) - a * z[3]).norm();
        out.max = out.max.max(r1).max(r2);
        out.x1.push(r1);
        out.x2.push(r2);
    }
    Ok(out)
}
