//! Concrete polynomial families used by the catalog systems.
//!
//! Each family is a quadratic `F(x1, x2, s) = A s² + B s + C` together with
//! the univariate polynomial its discriminants are built from. The families
//! are generic over the coefficient field so the same constructors serve
//! exact identity checks and complex-valued numerics.

use crate::poly::{BiPoly, Coeff, TriQuadPoly, UniPoly};

/// `F = A s² + B s + C` with its companion polynomial `P`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticFamily<T> {
    pub a: BiPoly<T>,
    pub b: BiPoly<T>,
    pub c: BiPoly<T>,
    pub p: UniPoly<T>,
}

impl<T: Coeff> QuadraticFamily<T> {
    pub fn f(&self) -> TriQuadPoly<T> {
        TriQuadPoly::from_quadratic_in_s(&self.a, &self.b, &self.c).expect("family coefficients have degree ≤ 2")
    }
}

fn half<T: Coeff>(v: &T) -> T {
    v.clone() / T::from_i64(2)
}

fn terms<T: Coeff>(t: Vec<(usize, usize, T)>) -> BiPoly<T> {
    BiPoly::from_terms(t).expect("family terms within bivariate cap")
}

/// `(x1 - x2)²`, the leading coefficient shared by both cubic families.
pub fn diff_square<T: Coeff>() -> BiPoly<T> {
    BiPoly::from_int_terms(&[(2, 0, 1), (1, 1, -2), (0, 2, 1)])
}

/// Family with `P(x) = 2x³ - (g2/2) x - g3/2`.
///
/// `B = -2x1x2(x1+x2) + (g2/2)(x1+x2) + g3`,
/// `C = x1²x2² + (g2/2)x1x2 + g3(x1+x2) + g2²/16`.
pub fn weierstrass_family<T: Coeff>(g2: &T, g3: &T) -> QuadraticFamily<T> {
    let one = T::one;
    let h2 = half(g2);
    let b = terms(vec![
        (2, 1, T::from_i64(-2)),
        (1, 2, T::from_i64(-2)),
        (1, 0, h2.clone()),
        (0, 1, h2.clone()),
        (0, 0, g3.clone()),
    ]);
    let c = terms(vec![
        (2, 2, one()),
        (1, 1, h2),
        (1, 0, g3.clone()),
        (0, 1, g3.clone()),
        (0, 0, g2.clone() * g2.clone() / T::from_i64(16)),
    ]);
    let p = UniPoly::new(vec![-half(g3), -half(g2), T::zero(), T::from_i64(2)]).expect("cubic");
    QuadraticFamily {
        a: diff_square(),
        b,
        c,
        p,
    }
}

/// Family with `P(x) = 2x³ + a x² + b x + c`.
///
/// `B = 2x1x2(x1+x2) + 2a x1x2 + b(x1+x2) + 2c`,
/// `C = x1²x2² - b x1x2 - 2c(x1+x2) + b²/4 - ac`.
pub fn cubic_family<T: Coeff>(a: &T, b: &T, c: &T) -> QuadraticFamily<T> {
    let two = || T::from_i64(2);
    let bb = terms(vec![
        (2, 1, two()),
        (1, 2, two()),
        (1, 1, two() * a.clone()),
        (1, 0, b.clone()),
        (0, 1, b.clone()),
        (0, 0, two() * c.clone()),
    ]);
    let cc = terms(vec![
        (2, 2, T::one()),
        (1, 1, -b.clone()),
        (1, 0, -(two() * c.clone())),
        (0, 1, -(two() * c.clone())),
        (0, 0, b.clone() * b.clone() / T::from_i64(4) - a.clone() * c.clone()),
    ]);
    let p = UniPoly::new(vec![c.clone(), b.clone(), a.clone(), two()]).expect("cubic");
    QuadraticFamily {
        a: diff_square(),
        b: bb,
        c: cc,
        p,
    }
}

/// The classical Kowalevski fundamental quadratic with its quartic `P` and
/// cubic `J`, for constants `(l1, l, c, k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KowalevskiFixture<T> {
    pub q: TriQuadPoly<T>,
    pub r: BiPoly<T>,
    pub r1: BiPoly<T>,
    pub p: UniPoly<T>,
    pub j: UniPoly<T>,
}

/// `Q = (x1-x2)² s² - 2R s - R1` with
/// `R = -x1²x2² + 6l1 x1x2 + 2lc(x1+x2) + c² - k²` and
/// `R1 = -6l1 x1²x2² - (c²-k²)(x1+x2)² - 4lc x1x2(x1+x2) + 6l1(c²-k²) - 4c²l²`.
pub fn kowalevski_fundamental<T: Coeff>(l1: &T, l: &T, c: &T, k: &T) -> KowalevskiFixture<T> {
    let n = |v: i64| T::from_i64(v);
    let ck = c.clone() * c.clone() - k.clone() * k.clone();
    let lc = l.clone() * c.clone();
    let r = terms(vec![
        (2, 2, n(-1)),
        (1, 1, n(6) * l1.clone()),
        (1, 0, n(2) * lc.clone()),
        (0, 1, n(2) * lc.clone()),
        (0, 0, ck.clone()),
    ]);
    let r1 = terms(vec![
        (2, 2, n(-6) * l1.clone()),
        (2, 0, -ck.clone()),
        (1, 1, n(-2) * ck.clone()),
        (0, 2, -ck.clone()),
        (2, 1, n(-4) * lc.clone()),
        (1, 2, n(-4) * lc.clone()),
        (0, 0, n(6) * l1.clone() * ck.clone() - n(4) * c.clone() * c.clone() * l.clone() * l.clone()),
    ]);
    let q = TriQuadPoly::from_quadratic_in_s(&diff_square(), &r.scale(&n(-2)), &-&r1).expect("degree ≤ 2");
    let p = UniPoly::new(vec![ck.clone(), n(4) * lc, n(6) * l1.clone(), T::zero(), n(-1)]).expect("quartic");
    let j = UniPoly::new(vec![
        n(3) * l1.clone() * ck.clone() - n(2) * l.clone() * l.clone() * c.clone() * c.clone(),
        ck,
        n(3) * l1.clone(),
        T::one(),
    ])
    .expect("cubic");
    KowalevskiFixture { q, r, r1, p, j }
}
