//! Closed forms as they are usually printed for the two coefficient
//! families, kept verbatim so the computed coefficient sets can be compared
//! against them term by term.

use kowtype::poly::{int, Rational};
use kowtype::theorem::Coefficients;

fn sq(v: &Rational) -> Rational {
    v * v
}

/// First family, profile `(2,0,2,0)`:
/// `r² = 2/(x1+x2) + (e1+e2)/(x1+x2)²`,
/// `rγ3 = (4x1x2-g2)/(4(x1+x2)) - (x2²e1+x1²e2)/(x1+x2)²`,
/// `γ3² = -x1x2g2/(2(x1+x2)) + (x2⁴e1+x1⁴e2)/(x1+x2)² + g3/2`.
pub fn first_family(g2: &Rational, g3: &Rational, x1: &Rational, x2: &Rational) -> Coefficients<Rational> {
    let s = x1 + x2;
    let s2 = sq(&s);
    Coefficients {
        e: int(2) / &s,
        p1: int(1) / &s2,
        p2: int(1) / &s2,
        f: (int(4) * x1 * x2 - g2) / (int(4) * &s),
        q1: sq(x1) / &s2,
        q2: sq(x2) / &s2,
        g: -(x1 * x2 * g2) / (int(2) * &s) + g3 / int(2),
        r1: sq(&sq(x1)) / &s2,
        r2: sq(&sq(x2)) / &s2,
    }
}

fn cubic_pqr(x1: &Rational, x2: &Rational, e: Rational, f: Rational, g: Rational) -> Coefficients<Rational> {
    Coefficients {
        p1: int(1),
        p2: int(1),
        q1: x1.clone(),
        q2: x2.clone(),
        r1: sq(x1),
        r2: sq(x2),
        e,
        f,
        g,
    }
}

/// Cubic family, profile `(1,0,1,0)`, first set:
/// `E = 2x1+2x2+a`, `F = -x1x2+b/2`, `G = c`.
pub fn cubic_first(a: &Rational, b: &Rational, c: &Rational, x1: &Rational, x2: &Rational) -> Coefficients<Rational> {
    cubic_pqr(x1, x2, int(2) * x1 + int(2) * x2 + a, -(x1 * x2) + b / int(2), c.clone())
}

/// Cubic family, profile `(1,0,1,0)`, second set with `d = (x1-x2)²`:
///
/// ```text
/// E = (2(x1+x2)(x1²+x2²) + a(x1+x2)² + 2b(x1+x2) + 4c) / d
/// F = -(2x1x2(3x1²+2x1x2+3x2²) + 4a x1x2(x1+x2)) / (2d)
///     + (b(x1²+6x1x2+x2²) + 4c(x1+x2)) / (2d)
/// G = (4x1²x2²(x1+x2+a) + 2b x1x2(x1+x2) + c(x1+x2)²) / d
/// ```
///
/// `None` on the diagonal `x1 = x2`.
pub fn cubic_second(
    a: &Rational,
    b: &Rational,
    c: &Rational,
    x1: &Rational,
    x2: &Rational,
) -> Option<Coefficients<Rational>> {
    let d = sq(&(x1 - x2));
    if d == int(0) {
        return None;
    }
    let s = x1 + x2;
    let p = x1 * x2;
    let e = (int(2) * &s * (sq(x1) + sq(x2)) + a * sq(&s) + int(2) * b * &s + int(4) * c) / &d;
    let f = -(int(2) * &p * (int(3) * sq(x1) + int(2) * &p + int(3) * sq(x2)) + int(4) * a * &p * &s)
        / (int(2) * &d)
        + (b * (sq(x1) + int(6) * &p + sq(x2)) + int(4) * c * &s) / (int(2) * &d);
    let g = (int(4) * sq(&p) * (&s + a) + int(2) * b * &p * &s + c * sq(&s)) / &d;
    Some(cubic_pqr(x1, x2, e, f, g))
}

/// Names of the coefficients in which `left` and `right` differ, in the
/// order `E, F, G, p1, p2, q1, q2, r1, r2`.
pub fn differing(left: &Coefficients<Rational>, right: &Coefficients<Rational>) -> Vec<&'static str> {
    let pairs = [
        ("E", &left.e, &right.e),
        ("F", &left.f, &right.f),
        ("G", &left.g, &right.g),
        ("p1", &left.p1, &right.p1),
        ("p2", &left.p2, &right.p2),
        ("q1", &left.q1, &right.q1),
        ("q2", &left.q2, &right.q2),
        ("r1", &left.r1, &right.r1),
        ("r2", &left.r2, &right.r2),
    ];
    pairs.iter().filter(|(_, l, r)| l != r).map(|(n, _, _)| *n).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use kowtype::poly::rat;

    #[test]
    fn first_family_at_a_point() {
        let cf = first_family(&int(0), &int(2), &int(1), &int(2));
        assert_eq!(cf.e, rat(2, 3));
        assert_eq!(cf.g, int(1));
        assert_eq!(cf.r2, rat(16, 9));
    }

    #[test]
    fn cubic_second_at_a_point() {
        // a = b = c = 0, (x1, x2) = (1, 2): d = 1
        let cf = cubic_second(&int(0), &int(0), &int(0), &int(1), &int(2)).unwrap();
        assert_eq!(cf.e, int(30));
        assert_eq!(cf.f, int(-2 * 2 * (3 + 4 + 12)) / int(2));
        assert_eq!(cf.g, int(48));
        assert!(cubic_second(&int(0), &int(0), &int(0), &int(1), &int(1)).is_none());
    }

    #[test]
    fn differing_lists_names() {
        let a = cubic_first(&int(1), &int(2), &int(3), &int(1), &int(2));
        let mut b = a.clone();
        assert!(differing(&a, &b).is_empty());
        b.g = int(0);
        assert_eq!(differing(&a, &b), vec!["G"]);
    }
}
