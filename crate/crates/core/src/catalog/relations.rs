use serde::{Deserialize, Serialize};

use super::chart::real_to_complex;
use super::{guard, CatalogError, State, SystemId, SystemParams, C};
use crate::fixtures::{cubic_family, weierstrass_family, QuadraticFamily};
use crate::theorem::Coefficients;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationKind {
    FirstIntegral,
    InvariantRelation,
    NotInvariant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegralValue {
    pub name: String,
    #[serde(with = "pair")]
    pub value: C,
    /// `true` when `value` is a residual expected to be zero; otherwise a
    /// conserved quantity expected to keep its initial value.
    pub residual: bool,
    /// Filled in by relation classification, never assumed.
    pub kind: Option<RelationKind>,
}

pub(crate) mod pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

/// Coefficients of the relations
/// `r² = E + p₂e₁ + p₁e₂`, `rγ₃ = F − q₂e₁ − q₁e₂`, `γ₃² = G + r₂e₁ + r₁e₂`
/// as the systems state them.
pub fn relation_coefficients(
    id: SystemId,
    params: &SystemParams,
    x1: C,
    x2: C,
) -> Result<Coefficients<C>, CatalogError> {
    let s = x1 + x2;
    let s2 = s * s;
    let (x12, x22) = (x1 * x1, x2 * x2);
    let (g2, g3) = (params.g2, params.g3);
    match id {
        SystemId::S1Real | SystemId::S1Complex => {
            guard("x1 + x2", s, params.eps_sing)?;
            Ok(Coefficients {
                e: 2.0 / s,
                p1: 1.0 / s2,
                p2: 1.0 / s2,
                f: (x1 * x2 * 4.0 - g2) / (s * 4.0),
                q1: x12 / s2,
                q2: x22 / s2,
                g: -(x1 * x2 * g2) / (s * 2.0) - g3 / 2.0,
                r1: x12 * x12 / s2,
                r2: x22 * x22 / s2,
            })
        }
        SystemId::S2TwoParam => {
            guard("x1 + x2", s, params.eps_sing)?;
            guard("x1 - x2", x1 - x2, params.eps_sing)?;
            let dd = (x12 - x22) * (x12 - x22);
            let sq = x12 + x22;
            Ok(Coefficients {
                e: ((s * (sq - g2 / 2.0)) * 2.0 - g3 * 2.0) / dd,
                p1: 1.0 / s2,
                p2: 1.0 / s2,
                f: (s.powu(3) * g2 + sq * g3 * 4.0 - x1 * x2 * s.powu(3) * 4.0) / (dd * 4.0),
                q1: x12 / s2,
                q2: x22 / s2,
                g: (-(x1 * x2 * s * sq * g2) - sq * sq * g3 + x1.powu(3) * x2.powu(3) * s * 8.0) / (dd * 2.0),
                r1: -(x12 * x12) / s2,
                r2: -(x22 * x22) / s2,
            })
        }
        SystemId::S3Cubic => Ok(Coefficients {
            e: s * 2.0 + params.a,
            p1: C::new(1.0, 0.0),
            p2: C::new(1.0, 0.0),
            f: -(x1 * x2) + params.b / 2.0,
            q1: x1,
            q2: x2,
            g: params.c,
            r1: x12,
            r2: x22,
        }),
    }
}

/// Complex-chart coordinates of any state.
fn complex_coords(state: &State) -> [C; 6] {
    match state.system {
        SystemId::S1Real => {
            let v = &state.values;
            real_to_complex(&[v[0], v[1], v[2], v[3], v[4], v[5]])
        }
        _ => state.complex(),
    }
}

fn relation_residuals(id: SystemId, params: &SystemParams, z: &[C; 6]) -> Result<[C; 3], CatalogError> {
    let [x1, x2, e1, e2, r, g] = *z;
    let cf = relation_coefficients(id, params, x1, x2)?;
    Ok([
        r * r - (cf.e + cf.p2 * e1 + cf.p1 * e2),
        r * g - (cf.f - cf.q2 * e1 - cf.q1 * e2),
        g * g - (cf.g + cf.r2 * e1 + cf.r1 * e2),
    ])
}

/// Integrals and relation residuals at `state`, named as in
/// [`SystemId::integral_names`].
pub fn integral_set(id: SystemId, params: &SystemParams, state: &State) -> Result<Vec<IntegralValue>, CatalogError> {
    let z = complex_coords(state);
    let [x1, x2, e1, e2, r, g] = z;
    let names = id.integral_names();
    let values: Vec<(C, bool)> = match id {
        SystemId::S3Cubic => vec![
            (r * r - (x1 + x2) * 2.0 - e1 - e2, false),
            ((r * g + x1 * x2 + x2 * e1 + x1 * e2) * 2.0, false),
            (g * g - x2 * x2 * e1 - x1 * x1 * e2, false),
            (e1 * e2, false),
        ],
        _ => {
            let [r1, r2, r3] = relation_residuals(id, params, &z)?;
            vec![(r1, true), (r2, true), (r3, true), (e1 * e2 - params.k * params.k, true)]
        }
    };
    Ok(names
        .iter()
        .zip(values)
        .map(|(name, (value, residual))| IntegralValue {
            name: name.to_string(),
            value,
            residual,
            kind: None,
        })
        .collect())
}

/// Density of the known invariant measure.
pub fn measure_density(id: SystemId, params: &SystemParams, state: &State) -> Result<C, CatalogError> {
    let z = state.complex();
    match id {
        SystemId::S1Real => {
            guard("p", z[0], params.eps_sing)?;
            Ok(1.0 / (z[0] * z[0] * 4.0))
        }
        SystemId::S1Complex => {
            let s = z[0] + z[1];
            guard("x1 + x2", s, params.eps_sing)?;
            Ok(1.0 / (s * s))
        }
        _ => Err(CatalogError::NoKnownDensity(id)),
    }
}

/// Given `x1, x2, e1`, choose `e2, r, γ₃` so the three quadratic relations
/// hold, returning all solutions. The compatibility condition
/// `(r²)(γ₃²) = (rγ₃)²` is at most quadratic in `e2`; `r` takes the root with
/// non-negative real part.
pub fn project_onto_relations(
    id: SystemId,
    params: &SystemParams,
    x1: C,
    x2: C,
    e1: C,
) -> Result<Vec<[C; 6]>, CatalogError> {
    let cf = relation_coefficients(id, params, x1, x2)?;
    // r² = u0 + u1 e2, rγ = v0 - v1 e2, γ² = w0 + w1 e2
    let (u0, u1) = (cf.e + cf.p2 * e1, cf.p1);
    let (v0, v1) = (cf.f - cf.q2 * e1, cf.q1);
    let (w0, w1) = (cf.g + cf.r2 * e1, cf.r1);
    let qa = u1 * w1 - v1 * v1;
    let qb = u0 * w1 + u1 * w0 + v0 * v1 * 2.0;
    let qc = u0 * w0 - v0 * v0;
    let scale = qa.norm().max(qb.norm()).max(qc.norm()).max(f64::MIN_POSITIVE);
    let roots: Vec<C> = if qa.norm() <= 1e-12 * scale {
        if qb.norm() <= 1e-12 * scale {
            return Ok(Vec::new());
        }
        vec![-qc / qb]
    } else {
        let disc = (qb * qb - qa * qc * 4.0).sqrt();
        vec![(-qb - disc) / (qa * 2.0), (-qb + disc) / (qa * 2.0)]
    };
    let mut out = Vec::new();
    for e2 in roots {
        let mut r = (u0 + u1 * e2).sqrt();
        if r.re < 0.0 {
            r = -r;
        }
        if r.norm() < params.eps_sing {
            continue;
        }
        let g = (v0 - v1 * e2) / r;
        out.push([x1, x2, e1, e2, r, g]);
    }
    Ok(out)
}

/// The quadratic `F(x1, x2, s)` whose roots separate the motion, for the
/// systems that have one.
pub fn separation_family(id: SystemId, params: &SystemParams) -> Option<QuadraticFamily<C>> {
    match id {
        SystemId::S1Real | SystemId::S1Complex => Some(weierstrass_family(&params.g2, &params.g3)),
        SystemId::S3Cubic => Some(cubic_family(&params.a, &params.b, &params.c)),
        SystemId::S2TwoParam => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::weierstrass_family;
    use crate::theorem::{BFunction, Branch, CoefficientSet, ExponentProfile};

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn s3_integrals_example() {
        let st = State::from_complex(SystemId::S3Cubic, &[1.0, 0.0, 1.0, 1.0, 1.0, 0.0].map(|v| c(v, 0.0)));
        let vals: Vec<C> = integral_set(SystemId::S3Cubic, &SystemParams::default(), &st)
            .unwrap()
            .into_iter()
            .map(|v| v.value)
            .collect();
        assert_eq!(vals, vec![c(-3.0, 0.0), c(2.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn s1_coefficients_match_theorem_plus_branch() {
        let params = SystemParams {
            g2: c(0.7, 0.0),
            g3: c(-0.3, 0.2),
            ..Default::default()
        };
        let fam = weierstrass_family(&params.g2, &params.g3);
        let cs = CoefficientSet::new(
            ExponentProfile::new(2, 0, 2, 0).unwrap(),
            fam.a,
            fam.c,
            fam.p,
            BFunction::Polynomial(fam.b),
            Branch::Plus,
        );
        let (x1, x2) = (c(0.8, 0.3), c(1.4, -0.6));
        let thm = cs.eval(&x1, &x2).unwrap();
        let cat = relation_coefficients(SystemId::S1Complex, &params, x1, x2).unwrap();
        for (a, b) in [
            (thm.e, cat.e),
            (thm.f, cat.f),
            (thm.g, cat.g),
            (thm.p1, cat.p1),
            (thm.q2, cat.q2),
            (thm.r1, cat.r1),
        ] {
            assert!((a - b).norm() < 1e-13, "{a} vs {b}");
        }
    }

    #[test]
    fn projection_lands_on_relations() {
        for id in [SystemId::S1Complex, SystemId::S2TwoParam] {
            let params = SystemParams {
                g2: c(0.5, 0.0),
                g3: c(0.2, 0.0),
                ..Default::default()
            };
            let sols = project_onto_relations(id, &params, c(0.7, 0.2), c(1.6, -0.3), c(0.4, -0.5)).unwrap();
            assert!(!sols.is_empty());
            for z in sols {
                let res = relation_residuals(id, &params, &z).unwrap();
                assert!(res.iter().all(|v| v.norm() < 1e-10), "{id}: {res:?}");
            }
        }
    }

    #[test]
    fn densities() {
        let p = SystemParams::default();
        let st = State::new(SystemId::S1Real, vec![-2.0, 0.3, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(measure_density(SystemId::S1Real, &p, &st).unwrap(), c(1.0 / 16.0, 0.0));
        let s3 = State::from_complex(SystemId::S3Cubic, &[c(1.0, 0.0); 6]);
        assert!(matches!(
            measure_density(SystemId::S3Cubic, &p, &s3),
            Err(CatalogError::NoKnownDensity(_))
        ));
    }
}
