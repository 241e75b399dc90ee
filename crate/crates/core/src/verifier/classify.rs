use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::VerifierError;
use crate::catalog::{
    integral_set, sample_generic_state, sample_initial_state, vector_field, CatalogError, RelationKind, State,
    SystemId, SystemParams, C, MAX_SAMPLE_ATTEMPTS,
};

pub const CLASSIFY_SAMPLES: usize = 200;

/// Largest accepted ratio of `|dR/dt|` to the sum of the magnitudes of its
/// coordinate contributions.
pub const CLASSIFY_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub system: SystemId,
    pub relation: String,
    pub index: usize,
    pub kind: RelationKind,
    /// Worst relative derivative over generic states.
    pub generic_max: f64,
    /// Worst relative derivative over states on the joint zero set.
    pub projected_max: f64,
    pub samples: usize,
}

fn integral_value(id: SystemId, params: &SystemParams, values: &[f64], index: usize) -> Result<C, CatalogError> {
    let st = State {
        system: id,
        values: values.to_vec(),
    };
    Ok(integral_set(id, params, &st)?[index].value)
}

/// Derivative of `g(ε) = R(y + ε v)` at 0 from central differences at `h`
/// and `h/2`, Richardson-combined.
fn richardson(g: impl Fn(f64) -> Result<C, CatalogError>, h: f64) -> Result<C, CatalogError> {
    let central = |h: f64| -> Result<C, CatalogError> { Ok((g(h)? - g(-h)?) / (2.0 * h)) };
    let coarse = central(h)?;
    let fine = central(h / 2.0)?;
    Ok((fine * 4.0 - coarse) / 3.0)
}

/// Derivative of integral `index` along the flow at `state`, together with
/// the sum of the magnitudes of its per-coordinate contributions.
pub fn directional_derivative(
    id: SystemId,
    params: &SystemParams,
    state: &State,
    index: usize,
) -> Result<(C, f64), VerifierError> {
    if index >= id.integral_names().len() {
        return Err(VerifierError::NoSuchRelation { system: id, index });
    }
    let y = &state.values;
    let v = vector_field(id, params, state)?.values;
    let along = |dir: &[f64]| -> Result<C, CatalogError> {
        let norm = dir.iter().map(|d| d * d).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Ok(C::new(0.0, 0.0));
        }
        let ynorm = y.iter().map(|d| d * d).sum::<f64>().sqrt();
        let h = 1e-3 * ynorm.max(1.0) / norm;
        let g = |eps: f64| {
            let pt: Vec<f64> = y.iter().zip(dir).map(|(a, b)| a + eps * b).collect();
            integral_value(id, params, &pt, index)
        };
        richardson(g, h)
    };
    let total = along(&v)?;
    let width = if id.is_complex() { 2 } else { 1 };
    let mut scale = 0.0;
    for j in 0..6 {
        let mut dir = vec![0.0; v.len()];
        dir[j * width..(j + 1) * width].copy_from_slice(&v[j * width..(j + 1) * width]);
        scale += along(&dir)?.norm();
    }
    Ok((total, scale))
}

fn relative(d: C, scale: f64) -> f64 {
    if d.norm() == 0.0 {
        0.0
    } else {
        d.norm() / scale.max(f64::MIN_POSITIVE)
    }
}

/// Classify integral `index` of system `id` by its derivative along the
/// flow at [`CLASSIFY_SAMPLES`] generic and as many on-set states.
pub fn classify_relation(
    id: SystemId,
    params: &SystemParams,
    index: usize,
    seed: u64,
) -> Result<Classification, VerifierError> {
    let names = id.integral_names();
    if index >= names.len() {
        return Err(VerifierError::NoSuchRelation { system: id, index });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut generic_max: f64 = 0.0;
    for _ in 0..CLASSIFY_SAMPLES {
        let mut found = None;
        for _ in 0..MAX_SAMPLE_ATTEMPTS {
            let st = State::from_complex(id, &sample_generic_state(id, &mut rng));
            if let Ok(d) = directional_derivative(id, params, &st, index) {
                found = Some(d);
                break;
            }
        }
        let (d, scale) = found.ok_or(CatalogError::NoConsistentState {
            attempts: MAX_SAMPLE_ATTEMPTS,
        })?;
        generic_max = generic_max.max(relative(d, scale));
    }
    let mut projected_max: f64 = 0.0;
    for i in 0..CLASSIFY_SAMPLES as u64 {
        let sub = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i);
        let (st, p) = sample_initial_state(id, params, sub, true)?;
        let (d, scale) = directional_derivative(id, &p, &st, index)?;
        projected_max = projected_max.max(relative(d, scale));
    }
    let kind = if generic_max <= CLASSIFY_TOL {
        RelationKind::FirstIntegral
    } else if projected_max <= CLASSIFY_TOL {
        RelationKind::InvariantRelation
    } else {
        RelationKind::NotInvariant
    };
    Ok(Classification {
        system: id,
        relation: names[index].to_string(),
        index,
        kind,
        generic_max,
        projected_max,
        samples: CLASSIFY_SAMPLES,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> SystemParams {
        SystemParams {
            g2: C::new(0.6, 0.0),
            g3: C::new(-0.2, 0.0),
            k: C::new(0.7, 0.0),
            ..Default::default()
        }
    }

    #[test]
    fn cubic_quantities_are_first_integrals() {
        for index in 0..4 {
            let c = classify_relation(SystemId::S3Cubic, &params(), index, 1).unwrap();
            assert_eq!(c.kind, RelationKind::FirstIntegral, "{c:?}");
        }
    }

    #[test]
    fn product_is_a_first_integral_everywhere() {
        for id in [SystemId::S1Complex, SystemId::S2TwoParam, SystemId::S3Cubic] {
            let c = classify_relation(id, &params(), 3, 2).unwrap();
            assert_eq!(c.kind, RelationKind::FirstIntegral, "{c:?}");
        }
    }

    #[test]
    fn first_family_relations_are_preserved() {
        for index in 0..3 {
            let c = classify_relation(SystemId::S1Complex, &params(), index, 3).unwrap();
            assert_ne!(c.kind, RelationKind::NotInvariant, "{c:?}");
        }
    }

    #[test]
    fn a_non_integral_is_detected() {
        let z = [C::new(0.7, 0.1), C::new(1.5, -0.2), C::new(0.3, 0.2), C::new(-0.4, 0.5), C::new(0.9, 0.1), C::new(0.2, 0.3)];
        let st = State::from_complex(SystemId::S2TwoParam, &z);
        let (d, scale) = directional_derivative(SystemId::S2TwoParam, &params(), &st, 1).unwrap();
        assert!(relative(d, scale) > CLASSIFY_TOL);
    }

    #[test]
    fn out_of_range_index() {
        assert!(matches!(
            classify_relation(SystemId::S3Cubic, &params(), 4, 0),
            Err(VerifierError::NoSuchRelation { .. })
        ));
    }
}
