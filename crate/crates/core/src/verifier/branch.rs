use std::f64::consts::FRAC_PI_2;

use super::VerifierError;
use crate::catalog::C;

/// Largest accepted change of phase of a tracked square root between
/// consecutive samples.
pub const MAX_PHASE_JUMP: f64 = FRAC_PI_2;

/// Continuous square root along a sequence of radicands: each new root is
/// the sign of `√v` nearest in phase to the previous one.
#[derive(Debug, Clone)]
pub struct BranchTracker {
    name: String,
    prev: Option<C>,
}

impl BranchTracker {
    pub fn new(name: impl Into<String>) -> Self {
        BranchTracker {
            name: name.into(),
            prev: None,
        }
    }

    pub fn next(&mut self, t: f64, radicand: C) -> Result<C, VerifierError> {
        let mut w = radicand.sqrt();
        if let Some(p) = self.prev {
            if (w - p).norm() > (w + p).norm() {
                w = -w;
            }
            let jump = if w.norm() == 0.0 || p.norm() == 0.0 {
                0.0
            } else {
                (w / p).arg().abs()
            };
            if !jump.is_finite() || !w.is_finite() || jump >= MAX_PHASE_JUMP {
                return Err(VerifierError::BranchTrackingLost {
                    t,
                    quantity: self.name.clone(),
                    jump,
                });
            }
        }
        self.prev = Some(w);
        Ok(w)
    }

    /// Track a whole sequence.
    pub fn track(name: &str, times: &[f64], radicands: impl IntoIterator<Item = C>) -> Result<Vec<C>, VerifierError> {
        let mut tr = BranchTracker::new(name);
        times.iter().zip(radicands).map(|(&t, v)| tr.next(t, v)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn follows_the_unit_circle_past_the_cut() {
        let n = 200;
        let times: Vec<f64> = (0..=n).map(|j| j as f64).collect();
        let rad = (0..=n).map(|j| C::from_polar(1.0, 4.0 * std::f64::consts::PI * j as f64 / n as f64));
        let w = BranchTracker::track("z", &times, rad).unwrap();
        // two full turns of the radicand are one full turn of the root
        assert!((w[n] - C::new(1.0, 0.0)).norm() < 1e-12);
        assert!((w[n / 2] - C::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn large_jumps_are_reported() {
        let mut tr = BranchTracker::new("z");
        tr.next(0.0, C::new(1.0, 0.0)).unwrap();
        let err = tr.next(1.0, C::new(-1.0, 0.0)).unwrap_err();
        assert!(matches!(err, VerifierError::BranchTrackingLost { t, .. } if t == 1.0));
    }
}
