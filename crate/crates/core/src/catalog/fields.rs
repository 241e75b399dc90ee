use super::{guard, CatalogError, State, SystemId, SystemParams, C};

const I: C = C::new(0.0, 1.0);

/// Right-hand side in complex coordinates. For the real chart the input is
/// `(p, q, r, γ1, γ2, γ3)`, extended holomorphically.
pub fn field_complex(id: SystemId, params: &SystemParams, z: &[C; 6]) -> Result<[C; 6], CatalogError> {
    match id {
        SystemId::S1Real => s1_real(params, z),
        SystemId::S1Complex => s1_complex(params, z),
        SystemId::S2TwoParam => s2(params, z),
        SystemId::S3Cubic => Ok(s3(z)),
    }
}

pub fn vector_field(id: SystemId, params: &SystemParams, state: &State) -> Result<State, CatalogError> {
    let dz = field_complex(id, params, &state.complex())?;
    Ok(State::from_complex(id, &dz))
}

fn s1_real(params: &SystemParams, y: &[C; 6]) -> Result<[C; 6], CatalogError> {
    let [p, q, r, g1, g2, g3] = *y;
    guard("p", p, params.eps_sing)?;
    let p2 = p * p;
    let q2 = q * q;
    let sum = p2 + q2;
    Ok([
        p * q * r,
        -((p2 - q2) * r + g3) / 2.0,
        -(p * q - q * sum + q * g1 - p * g2) / (p2 * 2.0),
        sum * q * r + p * r * g2 * 2.0 - q * g3,
        -p * q2 * r * 2.0 + p * g3 - p * r * g1,
        (params.g2 * p * q + q * sum * sum * 4.0 + q * g1 * (p2 * 3.0 - q2) * 4.0 + p * g2 * (p2 - q2 * 3.0) * 4.0)
            / (p2 * 8.0),
    ])
}

fn s1_complex(params: &SystemParams, z: &[C; 6]) -> Result<[C; 6], CatalogError> {
    let [x1, x2, e1, e2, r, g3] = *z;
    let s = x1 + x2;
    guard("x1 + x2", s, params.eps_sing)?;
    let s2 = s * s;
    Ok([
        -I / 2.0 * (x1 * x1 * r + g3),
        I / 2.0 * (x2 * x2 * r + g3),
        -I * s * r * e1,
        I * s * r * e2,
        I / 2.0 * (x1 * x1 - x2 * x2 + e2 * x1 * 2.0 - e1 * x2 * 2.0) / s2,
        -I / 8.0 * (params.g2 * (x1 * x1 - x2 * x2) + e2 * x1.powu(3) * 8.0 - e1 * x2.powu(3) * 8.0) / s2,
    ])
}

/// The function `m` of the two-parameter system, transcribed term by term.
fn s2_m(params: &SystemParams, z: &[C; 6]) -> Result<C, CatalogError> {
    let [x1, x2, e1, e2, r, g] = *z;
    let (g2, g3) = (params.g2, params.g3);
    let s = x1 + x2;
    let bracket = (x2 * x2 * r + g).powu(2) * e1 - (x1 * x1 * r + g).powu(2) * e2;
    guard("(x2^2 r + gamma3)^2 e1 - (x1^2 r + gamma3)^2 e2", bracket, params.eps_sing)?;
    let (x1p, x2p) = (|n: u32| x1.powu(n), |n: u32| x2.powu(n));
    let (r2, r3) = (r * r, r * r * r);
    let (gg, ggg) = (g * g, g * g * g);

    let g2_part = s.powu(3)
        * (x1p(2) * x2p(2) * s * s * r3 * 2.0
            + g * (x1p(2) * x2 * (x2 + 1.0) * 6.0 + x1 * x2 * (x1p(2) + x2p(2)) * 4.0 + x2p(4) * 5.0 - x2p(2) * 3.0
                + x1p(4) * 2.0)
                * r2
            + gg * ((x1p(2) + x2p(2)) * 5.0 + x1 * x2 * 2.0) * r * 2.0
            + ggg * 8.0)
        * g2;
    let g3_part = (x1p(2) * x2p(2) * (x1p(2) + x2p(2)) * s * s * r3 * 8.0
        + g * (x2p(6) * 2.0 - x1p(2) * x2p(2) + x1p(6) + x1p(3) * x2p(2) * 2.0 + x1p(4) * x2p(2) * 3.0
            + x2p(3) * x1p(2) * 2.0
            - x1 * x2p(3)
            - x2p(4)
            + x1p(4) * x2 * 2.0
            + x2p(5) * x1 * 3.0
            + x1p(5) * x2 * 2.0
            + x2p(4) * x1p(2) * 4.0
            + x2p(3) * x1p(3) * 6.0)
            * r2
            * 8.0
        + gg * (x2p(4) * 4.0 + x1p(2) * x2p(2) * 4.0 - x2p(2) + x1p(3) * x2 * 6.0 + x1 * x2p(3) * 6.0
            + x1p(4) * 3.0
            + x2 * x1p(2) * 2.0)
            * r
            * 8.0
        + ggg * s * s * 16.0)
        * g3;
    let free_part = s.powu(3)
        * (r3 * x1p(4) * x2p(4) * 8.0
            + x1 * x2p(2) * g * (-x1p(2) * x2 * 2.0 + x1 * x2p(2) * 5.0 - x2 * 2.0 + x2p(3) * 2.0 + x1p(3) * 5.0
                + x1p(2) * 4.0)
                * r2
                * 2.0
            + gg * (x1p(4) * 2.0 + x1p(3) * x2 * 4.0 + x2p(4) + x2p(2) - x1p(2) * x2 * 2.0 + x1 * x2p(3) * 4.0
                + x1p(2) * x2p(2) * 14.0)
                * r
            + ggg * s * s * 2.0)
        * 4.0;
    let big = g2_part + g3_part - free_part;
    Ok(s * r * I + big / (I * 4.0 * s * s * (x1 - x2).powu(3) * bracket))
}

fn s2(params: &SystemParams, z: &[C; 6]) -> Result<[C; 6], CatalogError> {
    let [x1, x2, e1, e2, r, g] = *z;
    let eps = params.eps_sing;
    let s = x1 + x2;
    guard("x1 + x2", s, eps)?;
    guard("x1 - x2", x1 - x2, eps)?;
    guard("r", r, eps)?;
    guard("gamma3", g, eps)?;
    let (g2, g3) = (params.g2, params.g3);
    let m = s2_m(params, z)?;
    let s2 = s * s;
    let d = x2 - x1;
    let (x12, x22) = (x1 * x1, x2 * x2);

    let rdot = -I * e1 * (r * d - I * m) / (s2 * r * 2.0) - I * e2 * (r * d + I * m) / (s2 * r * 2.0)
        + I * g2 * ((x12 + x22) * r * 3.0 - x1 * x2 * r * 2.0 + g * 4.0) / (d.powu(3) * s * r * 4.0)
        + I * ((x12 - x1 * x2 + x22) * r + g) * g3 * 2.0 / (r * s2 * d.powu(3))
        - I * ((x1.powu(4) + x2.powu(4) + x12 * x22 * 6.0) * r + s2 * g * 2.0) / (d.powu(3) * s * r * 2.0);
    let e = x1 - x2;
    let gdot = I * (s * x2 * r + m * I * x2 + g * 2.0) * x2.powu(3) * e1 / (g * s2)
        - I * (s * x1 * r + m * I * x1 + g * 2.0) * x1.powu(3) * e2 / (g * s2)
        - I * (r * x1 * x2 + g) * (x1 - I * x2) * (x1 + I * x2) * x1 * x2 * g3 / (g * s2 * e.powu(3))
        - I * ((x1.powu(4) + x12 * x22 * 6.0 + x2.powu(4)) * g + x12 * x22 * s2 * r * 2.0) * g2
            / (g * s * e.powu(3) * 8.0)
        + I * ((x12 + x22) * g * 3.0 - x1 * x2 * g * 2.0 + x12 * x22 * r * 4.0) * x12 * x22 / (g * s * e.powu(3));
    Ok([
        -I / 2.0 * (x12 * r + g),
        I / 2.0 * (x22 * r + g),
        -m * e1,
        m * e2,
        rdot,
        gdot,
    ])
}

fn s3(z: &[C; 6]) -> [C; 6] {
    let [x1, x2, e1, e2, r, g] = *z;
    [
        -I / 2.0 * (r * x1 + g),
        I / 2.0 * (r * x2 + g),
        -I * r * e1,
        I * r * e2,
        I / 2.0 * (x2 - x1 + e2 - e1),
        I / 2.0 * (e1 * x2 - e2 * x1),
    ]
}

/// Divergence of the vector field: closed form where one is known
/// (`2qr` on the real chart, `0` for the cubic system), otherwise the
/// Richardson-extrapolated central-difference value.
pub fn divergence(id: SystemId, params: &SystemParams, state: &State) -> Result<C, CatalogError> {
    let z = state.complex();
    // evaluate once so singular states are reported consistently
    field_complex(id, params, &z)?;
    match id {
        SystemId::S1Real => Ok(z[1] * z[2] * 2.0),
        SystemId::S3Cubic => Ok(C::new(0.0, 0.0)),
        _ => weighted_divergence_fd(id, params, state, |_| Ok(C::new(1.0, 0.0))),
    }
}

/// `Σ_j ∂(w X_j)/∂z_j` by central differences with steps `h` and `h/2`,
/// combined by Richardson extrapolation. Complex charts use holomorphic
/// derivatives along the real direction of each coordinate.
pub fn weighted_divergence_fd(
    id: SystemId,
    params: &SystemParams,
    state: &State,
    weight: impl Fn(&[C; 6]) -> Result<C, CatalogError>,
) -> Result<C, CatalogError> {
    let z = state.complex();
    let flux = |pt: &[C; 6], j: usize| -> Result<C, CatalogError> { Ok(weight(pt)? * field_complex(id, params, pt)?[j]) };
    let central = |j: usize, h: f64| -> Result<C, CatalogError> {
        let mut plus = z;
        let mut minus = z;
        plus[j] += h;
        minus[j] -= h;
        Ok((flux(&plus, j)? - flux(&minus, j)?) / (2.0 * h))
    };
    let mut total = C::new(0.0, 0.0);
    for (j, zj) in z.iter().enumerate() {
        let h = 1e-3 * zj.norm().max(1.0);
        let coarse = central(j, h)?;
        let fine = central(j, h / 2.0)?;
        total += (fine * 4.0 - coarse) / 3.0;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::chart::{pushforward, real_to_complex};

    fn params() -> SystemParams {
        SystemParams::default()
    }

    #[test]
    fn s1_real_example() {
        let st = State::new(SystemId::S1Real, vec![1.0, 1.0, 1.0, 0.0, 0.0, 0.0]).unwrap();
        let d = vector_field(SystemId::S1Real, &params(), &st).unwrap();
        assert_eq!(d.values, vec![1.0, 0.0, 0.5, 2.0, -2.0, 2.0]);
        assert_eq!(divergence(SystemId::S1Real, &params(), &st).unwrap(), C::new(2.0, 0.0));
    }

    #[test]
    fn s1_real_equilibria() {
        let st = State::new(SystemId::S1Real, vec![-1.3, 0.0, 0.0, 0.7, 0.0, 0.0]).unwrap();
        let d = vector_field(SystemId::S1Real, &params().with_g2(0.4), &st).unwrap();
        assert!(d.values.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn s1_real_singular() {
        let st = State::new(SystemId::S1Real, vec![1e-8, 1.0, 1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            vector_field(SystemId::S1Real, &params(), &st),
            Err(CatalogError::SingularState { guard: "p", .. })
        ));
    }

    #[test]
    fn s3_example() {
        let z = [1.0, 0.0, 1.0, 1.0, 1.0, 0.0].map(|v| C::new(v, 0.0));
        let d = field_complex(SystemId::S3Cubic, &params(), &z).unwrap();
        let expect = [
            C::new(0.0, -0.5),
            C::new(0.0, 0.0),
            C::new(0.0, -1.0),
            C::new(0.0, 1.0),
            C::new(0.0, -0.5),
            C::new(0.0, -0.5),
        ];
        assert_eq!(d, expect);
    }

    #[test]
    fn s3_fd_divergence_vanishes() {
        let z = [C::new(0.3, 0.2), C::new(1.1, -0.4), C::new(-0.5, 0.9), C::new(0.2, 0.1), C::new(0.7, -0.3), C::new(-0.2, 0.6)];
        let st = State::from_complex(SystemId::S3Cubic, &z);
        let d = weighted_divergence_fd(SystemId::S3Cubic, &params(), &st, |_| Ok(C::new(1.0, 0.0))).unwrap();
        assert!(d.norm() < 1e-10);
    }

    #[test]
    fn complex_field_shares_x_equations_with_real_chart() {
        // the x1, x2 and r components of the two charts agree; the e and gamma3
        // components do not, see the chart-consistency acceptance check
        let y = [0.8, -0.3, 0.4, 0.2, -0.6, 0.5];
        let p = params().with_g2(0.7);
        let v = field_complex(SystemId::S1Real, &p, &y.map(|t| C::new(t, 0.0))).unwrap();
        let pushed = pushforward(&y, &v.map(|c| c.re));
        let direct = field_complex(SystemId::S1Complex, &p, &real_to_complex(&y)).unwrap();
        for j in [0, 1, 4] {
            assert!((pushed[j] - direct[j]).norm() < 1e-14, "component {j}");
        }
    }

    #[test]
    fn s2_guards() {
        let mut z = [C::new(0.7, 0.1), C::new(1.5, -0.2), C::new(0.3, 0.2), C::new(-0.4, 0.5), C::new(0.6, 0.1), C::new(0.3, -0.2)];
        assert!(field_complex(SystemId::S2TwoParam, &params(), &z).is_ok());
        z[5] = C::new(0.0, 0.0);
        assert!(matches!(
            field_complex(SystemId::S2TwoParam, &params(), &z),
            Err(CatalogError::SingularState { guard: "gamma3", .. })
        ));
    }
}
