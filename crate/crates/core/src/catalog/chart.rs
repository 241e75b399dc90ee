//! The bridge between the real chart `(p, q, r, γ1, γ2, γ3)` and the
//! complex chart `(x1, x2, e1, e2, r, γ3)`.

use super::{CatalogError, C};

/// Relative tolerance for the reality conditions of the inverse map.
pub const REALITY_TOL: f64 = 1e-10;

pub fn real_to_complex(y: &[f64; 6]) -> [C; 6] {
    let [p, q, r, g1, g2, g3] = *y;
    let x1 = C::new(p, q);
    let x2 = C::new(p, -q);
    [
        x1,
        x2,
        x1 * x1 + C::new(g1, g2),
        x2 * x2 + C::new(g1, -g2),
        C::new(r, 0.0),
        C::new(g3, 0.0),
    ]
}

/// Inverse of [`real_to_complex`]; rejects points off the real slice.
pub fn complex_to_real(z: &[C; 6]) -> Result<[f64; 6], CatalogError> {
    let [x1, x2, e1, e2, r, g3] = *z;
    let check = |name: &str, a: C, b: C| {
        let scale = 1.0 + a.norm().max(b.norm());
        if (a - b.conj()).norm() > REALITY_TOL * scale {
            Err(CatalogError::NotReal(format!("{name}: {a} vs conjugate of {b}")))
        } else {
            Ok(())
        }
    };
    check("x2 = conj(x1)", x1, x2)?;
    check("e2 = conj(e1)", e1, e2)?;
    for (name, v) in [("r", r), ("gamma3", g3)] {
        if v.im.abs() > REALITY_TOL * (1.0 + v.norm()) {
            return Err(CatalogError::NotReal(format!("{name} has imaginary part {}", v.im)));
        }
    }
    let p = ((x1 + x2) / 2.0).re;
    let q = ((x1 - x2) / C::new(0.0, 2.0)).re;
    let gam = e1 - x1 * x1;
    Ok([p, q, r.re, gam.re, gam.im, g3.re])
}

/// Image of the real-chart tangent vector `v` at `y` under the chart map.
pub fn pushforward(y: &[f64; 6], v: &[f64; 6]) -> [C; 6] {
    let z = real_to_complex(y);
    let dx1 = C::new(v[0], v[1]);
    let dx2 = C::new(v[0], -v[1]);
    [
        dx1,
        dx2,
        z[0] * dx1 * 2.0 + C::new(v[3], v[4]),
        z[1] * dx2 * 2.0 + C::new(v[3], -v[4]),
        C::new(v[2], 0.0),
        C::new(v[5], 0.0),
    ]
}
