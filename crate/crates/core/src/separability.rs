//! Certificates of discriminant separability.
//!
//! A quadratic `F(x1, x2, s)` is discriminantly separable when each of its
//! three discriminants factors as a product of univariate polynomials in the
//! two remaining variables. Factors are normalized to be monic; the scalar
//! multiplier carries the scale, so `D = λ · P₁ · P₂` exactly.

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::poly::{BiPoly, Coeff, PolyJson, Rational, TriQuadPoly, UniPoly, Var};

/// Integer sections tried before giving up on a degenerate discriminant.
pub const SECTION_POINTS: std::ops::RangeInclusive<i64> = 1..=8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeparabilityError {
    #[error("discriminant is identically zero")]
    ZeroDiscriminant,
    #[error("discriminant is not a product of univariate factors ({residual_terms} residual term(s))")]
    NotSeparable { residual_terms: usize },
    #[error("every sampled section of the discriminant loses degree")]
    AllSectionsDegenerate,
}

/// `D(u, v) = multiplier · first(u) · second(v)` with monic factors.
#[derive(Debug, Clone, PartialEq)]
pub struct Factorization {
    pub first: UniPoly<Rational>,
    pub second: UniPoly<Rational>,
    pub multiplier: Rational,
}

impl Factorization {
    pub fn product(&self) -> BiPoly<Rational> {
        BiPoly::outer(&self.first, &self.second)
            .expect("factors come from a capped bivariate polynomial")
            .scale(&self.multiplier)
    }
}

/// Monic candidate factors read off the sections `D(·, v)` and `D(u, ·)`.
/// `None` when either section drops below the full degree.
pub fn section_factors(
    d: &BiPoly<Rational>,
    u: &Rational,
    v: &Rational,
) -> Option<(UniPoly<Rational>, UniPoly<Rational>)> {
    let first = d.fix_second(v);
    let second = d.fix_first(u);
    if first.degree() != d.degree_first() || second.degree() != d.degree_second() {
        return None;
    }
    Some((first.monic()?.0, second.monic()?.0))
}

/// Factor `D` as `λ · P₁(u) · P₂(v)` and verify the identity coefficient-wise.
pub fn factor_as_product(d: &BiPoly<Rational>) -> Result<Factorization, SeparabilityError> {
    if d.is_zero() {
        return Err(SeparabilityError::ZeroDiscriminant);
    }
    let pick = |degree: isize, section: &dyn Fn(&Rational) -> UniPoly<Rational>| {
        SECTION_POINTS
            .map(Rational::from_i64)
            .map(|t| section(&t))
            .find(|p| p.degree() == degree)
            .and_then(|p| p.monic())
            .map(|(m, _)| m)
    };
    let first = pick(d.degree_first(), &|v| d.fix_second(v)).ok_or(SeparabilityError::AllSectionsDegenerate)?;
    let second = pick(d.degree_second(), &|u| d.fix_first(u)).ok_or(SeparabilityError::AllSectionsDegenerate)?;
    let multiplier = d.get(first.degree() as usize, second.degree() as usize);
    let candidate = Factorization {
        first,
        second,
        multiplier,
    };
    let residual = d - &candidate.product();
    match residual.terms().count() {
        0 => Ok(candidate),
        n => Err(SeparabilityError::NotSeparable { residual_terms: n }),
    }
}

/// Separability result for the discriminant in one variable.
#[derive(Debug, Clone, PartialEq)]
pub struct VariableEntry {
    pub var: Var,
    /// Variables of `factorization.first` and `.second`, in that order.
    pub factor_vars: (Var, Var),
    pub discriminant: BiPoly<Rational>,
    pub degenerate_quadratic: bool,
    pub factorization: Result<Factorization, SeparabilityError>,
}

impl VariableEntry {
    pub fn exact_identity_holds(&self) -> bool {
        self.factorization.is_ok()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparabilityReport {
    /// Entries for `s`, `x1`, `x2`, in that order.
    pub entries: [VariableEntry; 3],
    pub is_separable: bool,
    /// All six monic factors coincide (equality up to a scalar multiple).
    pub is_strong: bool,
    /// Strong, and additionally all three multipliers are equal, i.e. the
    /// factors coincide without rescaling.
    pub is_strong_equal_multipliers: bool,
}

pub const NORMALIZATION: &str = "monic factors; the multiplier carries all scale";

impl SeparabilityReport {
    pub fn entry(&self, var: Var) -> &VariableEntry {
        self.entries.iter().find(|e| e.var == var).expect("all three variables present")
    }

    pub fn to_json(&self) -> SeparabilityReportJson {
        SeparabilityReportJson {
            normalization: NORMALIZATION,
            is_separable: self.is_separable,
            is_strong: self.is_strong,
            is_strong_equal_multipliers: self.is_strong_equal_multipliers,
            entries: self
                .entries
                .iter()
                .map(|e| {
                    let (u, v) = e.factor_vars;
                    let (factor1, factor2, multiplier, error) = match &e.factorization {
                        Ok(f) => (
                            Some(PolyJson::from_uni(&f.first, u.name())),
                            Some(PolyJson::from_uni(&f.second, v.name())),
                            Some(f.multiplier.to_string()),
                            None,
                        ),
                        Err(err) => (None, None, None, Some(err.to_string())),
                    };
                    EntryJson {
                        var: e.var,
                        discriminant: PolyJson::from_bi(&e.discriminant, [u.name(), v.name()]),
                        degenerate_quadratic: e.degenerate_quadratic,
                        exact_identity_holds: e.exact_identity_holds(),
                        factor1,
                        factor2,
                        multiplier,
                        error,
                    }
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SeparabilityReportJson {
    pub normalization: &'static str,
    pub is_separable: bool,
    pub is_strong: bool,
    pub is_strong_equal_multipliers: bool,
    pub entries: Vec<EntryJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EntryJson {
    pub var: Var,
    pub discriminant: PolyJson,
    pub degenerate_quadratic: bool,
    pub exact_identity_holds: bool,
    pub factor1: Option<PolyJson>,
    pub factor2: Option<PolyJson>,
    pub multiplier: Option<String>,
    pub error: Option<String>,
}

pub fn check_separable(f: &TriQuadPoly<Rational>) -> SeparabilityReport {
    let entries = [Var::S, Var::X1, Var::X2].map(|var| {
        let disc = f.discriminant_in(var);
        VariableEntry {
            var,
            factor_vars: var.others(),
            factorization: factor_as_product(&disc.poly),
            discriminant: disc.poly,
            degenerate_quadratic: disc.degenerate,
        }
    });
    let is_separable = entries.iter().all(VariableEntry::exact_identity_holds);
    let mut is_strong = false;
    let mut is_strong_equal_multipliers = false;
    if is_separable {
        let facs: Vec<&Factorization> = entries.iter().map(|e| e.factorization.as_ref().unwrap()).collect();
        let reference = &facs[0].first;
        is_strong = facs.iter().all(|f| f.first == *reference && f.second == *reference);
        is_strong_equal_multipliers = is_strong && facs.iter().all(|f| f.multiplier == facs[0].multiplier);
    }
    SeparabilityReport {
        entries,
        is_separable,
        is_strong,
        is_strong_equal_multipliers,
    }
}

/// `(∂F/∂v)² - D_v F` at `point = (x1, x2, s)` for each variable `v`, in
/// `(x1, x2, s)` order. On the surface `F = 0` every entry vanishes; with a
/// rational surface point the result is exactly zero.
pub fn gradient_identity_at<T: Coeff>(f: &TriQuadPoly<T>, point: &[T; 3]) -> [T; 3] {
    let coord = |v: Var| match v {
        Var::X1 => point[0].clone(),
        Var::X2 => point[1].clone(),
        Var::S => point[2].clone(),
    };
    Var::ALL.map(|var| {
        let grad = f.partial(var).eval_point(point);
        let (u, w) = var.others();
        let disc = f.discriminant_in(var).poly.eval(&coord(u), &coord(w));
        grad.clone() * grad - disc
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfaceResidual {
    /// 0 for the `-√` root in `s`, 1 for the `+√` root.
    pub root: usize,
    pub var: Var,
    pub residual: f64,
    /// `|D_v F|` at the point, for relative comparisons.
    pub scale: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurfaceCheck {
    /// Set when `F` has no `s²` term at `(x1, x2)`; residuals are then empty.
    pub degenerate: bool,
    pub roots: Vec<Complex64>,
    pub residuals: Vec<SurfaceResidual>,
}

impl SurfaceCheck {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.residual).fold(0.0, f64::max)
    }
}

/// Solve `F(x1, x2, s) = 0` for `s` (complex arithmetic) and check the
/// gradient–discriminant identity at each surface point, in all three
/// variables.
pub fn surface_gradient_check<T: Coeff>(f: &TriQuadPoly<T>, x1: &T, x2: &T) -> SurfaceCheck {
    let fc = f.map(Coeff::to_complex);
    let (z1, z2) = (x1.to_complex(), x2.to_complex());
    let [a, b, c] = fc.quadratic_in(Var::S).map(|p| p.eval(&z1, &z2));
    if a == Complex64::new(0.0, 0.0) {
        return SurfaceCheck {
            degenerate: true,
            roots: Vec::new(),
            residuals: Vec::new(),
        };
    }
    let sq = (b * b - a * c * 4.0).sqrt();
    let roots = vec![(-b - sq) / (a * 2.0), (-b + sq) / (a * 2.0)];
    let mut residuals = Vec::new();
    for (root, s) in roots.iter().enumerate() {
        let point = [z1, z2, *s];
        let ident = gradient_identity_at(&fc, &point);
        for (i, var) in Var::ALL.into_iter().enumerate() {
            let (u, w) = var.others();
            let pick = |v: Var| point[Var::ALL.iter().position(|x| *x == v).unwrap()];
            let scale = fc.discriminant_in(var).poly.eval(&pick(u), &pick(w)).norm();
            residuals.push(SurfaceResidual {
                root,
                var,
                residual: ident[i].norm(),
                scale,
            });
        }
    }
    SurfaceCheck {
        degenerate: false,
        roots,
        residuals,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{cubic_family, kowalevski_fundamental, weierstrass_family};
    use crate::poly::{int, rat};

    #[test]
    fn monomial_discriminant() {
        let d = BiPoly::from_int_terms(&[(3, 3, 16)]);
        let f = factor_as_product(&d).unwrap();
        assert_eq!(f.first, UniPoly::from_ints(&[0, 0, 0, 1]));
        assert_eq!(f.second, UniPoly::from_ints(&[0, 0, 0, 1]));
        assert_eq!(f.multiplier, int(16));
    }

    #[test]
    fn non_separable_discriminant() {
        // x1²x2² - 4
        let d = BiPoly::from_int_terms(&[(2, 2, 1), (0, 0, -4)]);
        assert!(matches!(
            factor_as_product(&d),
            Err(SeparabilityError::NotSeparable { .. })
        ));
        assert_eq!(factor_as_product(&BiPoly::zero()), Err(SeparabilityError::ZeroDiscriminant));
    }

    #[test]
    fn sections_all_on_roots_are_degenerate() {
        // (x2 - 1)(x2 - 2)...(x2 - 8) does not fit; use a section killer in the
        // leading coefficient instead: x1 · (x2-1)(x2-2)(x2-3)(x2-4) has every
        // section at 1..=4 dropping degree, but 5..=8 survive.
        let roots = UniPoly::<Rational>::from_ints(&[24, -50, 35, -10, 1]);
        let d = BiPoly::outer(&UniPoly::from_ints(&[0, 1]), &roots).unwrap();
        let f = factor_as_product(&d).unwrap();
        assert_eq!(f.second, roots);
        assert!(section_factors(&d, &int(1), &int(5)).is_some());
        // first-variable sections lose degree only where roots(v) = 0
        assert!(section_factors(&d, &int(1), &int(2)).is_none());
    }

    #[test]
    fn weierstrass_family_is_strongly_separable() {
        let fam = weierstrass_family(&rat(3, 2), &rat(-5, 7));
        let report = check_separable(&fam.f());
        assert!(report.is_separable);
        assert!(report.is_strong);
        assert!(report.is_strong_equal_multipliers);
        let (monic, lead) = fam.p.monic().unwrap();
        for e in &report.entries {
            let f = e.factorization.as_ref().unwrap();
            assert_eq!(f.first, monic);
            // D = 4 P P = 4 lc² (monic)(monic)
            assert_eq!(f.multiplier, int(4) * lead.clone() * lead.clone());
        }
        assert_eq!(
            report.entry(Var::S).discriminant,
            BiPoly::outer(&fam.p, &fam.p).unwrap().scale(&int(4))
        );
    }

    #[test]
    fn degenerate_weierstrass_discriminant_is_a_monomial() {
        let fam = weierstrass_family(&int(0), &int(0));
        let d = fam.f().discriminant_in(Var::S).poly;
        assert_eq!(d, BiPoly::from_int_terms(&[(3, 3, 16)]));
    }

    #[test]
    fn cubic_family_discriminants() {
        // D_s F = 4 P(x1) P(x2); D_x1 F = 4 P(x2) P(-s).
        let (a, b, c) = (rat(1, 3), int(-2), rat(5, 4));
        let fam = cubic_family(&a, &b, &c);
        let report = check_separable(&fam.f());
        assert!(report.is_separable);
        assert!(!report.is_strong, "P(-s) is not proportional to P(s) for a, c ≠ 0");
        let s_entry = report.entry(Var::S);
        assert_eq!(s_entry.discriminant, BiPoly::outer(&fam.p, &fam.p).unwrap().scale(&int(4)));
        let x1_entry = report.entry(Var::X1);
        assert_eq!(
            x1_entry.discriminant,
            BiPoly::outer(&fam.p, &fam.p.reflect()).unwrap().scale(&int(4))
        );
        assert_eq!(s_entry.factorization.as_ref().unwrap().multiplier, int(16));
    }

    #[test]
    fn cubic_family_with_odd_p_is_strong() {
        let fam = cubic_family(&int(0), &int(3), &int(0));
        let report = check_separable(&fam.f());
        assert!(report.is_strong);
        // multipliers 16 and -16: factors coincide only up to scale
        assert!(!report.is_strong_equal_multipliers);
    }

    #[test]
    fn kowalevski_fixture_is_separable_but_not_strong() {
        let fx = kowalevski_fundamental(&int(1), &int(1), &int(2), &int(1));
        let report = check_separable(&fx.q);
        assert!(report.is_separable);
        assert!(!report.is_strong);
        assert_eq!(
            report.entry(Var::S).discriminant,
            BiPoly::outer(&fx.p, &fx.p).unwrap().scale(&int(4))
        );
        // D_x1 Q = 8 P(x2) J(s); entry stores (x2, s)
        assert_eq!(
            report.entry(Var::X1).discriminant,
            BiPoly::outer(&fx.p, &fx.j).unwrap().scale(&int(8))
        );
        let f = report.entry(Var::X1).factorization.clone().unwrap();
        assert_eq!(f.multiplier, int(-8), "8 · (-1 lead of P) · (1 lead of J)");
        let d = fx.q.discriminant_in(Var::S).poly;
        assert_eq!(
            d.eval(&int(1), &int(-1)),
            int(4) * fx.p.eval(&int(1)) * fx.p.eval(&int(-1))
        );
    }

    #[test]
    fn surface_check_at_irrational_roots() {
        let fam = weierstrass_family::<Rational>(&int(0), &int(0));
        let chk = surface_gradient_check(&fam.f(), &int(1), &int(2));
        let r32 = 32f64.sqrt();
        assert!((chk.roots[0].re - (6.0 - r32)).abs() < 1e-12);
        assert!((chk.roots[1].re - (6.0 + r32)).abs() < 1e-12);
        assert_eq!(chk.residuals.len(), 6);
        assert!(chk.max_residual() < 1e-10);
        let s_scale = chk.residuals.iter().find(|r| r.var == Var::S).unwrap().scale;
        assert!((s_scale - 128.0).abs() < 1e-12);
    }

    #[test]
    fn surface_check_cubic_family() {
        let fam = cubic_family::<Rational>(&int(0), &int(0), &int(0));
        let chk = surface_gradient_check(&fam.f(), &int(1), &int(2));
        assert!(chk.max_residual() < 1e-10);
        // D_s F(1,2) = 4 P(1) P(2) = 4 · 2 · 16
        let s_scale = chk.residuals.iter().find(|r| r.var == Var::S).unwrap().scale;
        assert!((s_scale - 128.0).abs() < 1e-12);
    }

    #[test]
    fn double_root_point() {
        // F = (s - x1)^2: every discriminant vanishes on the surface
        let f = TriQuadPoly::<Rational>::from_terms([
            ([0, 0, 2], int(1)),
            ([1, 0, 1], int(-2)),
            ([2, 0, 0], int(1)),
        ])
        .unwrap();
        let ident = gradient_identity_at(&f, &[int(3), int(7), int(3)]);
        assert_eq!(ident, [int(0), int(0), int(0)]);
        assert_eq!(f.partial(Var::S).eval(&int(3), &int(7), &int(3)), int(0));
        let chk = surface_gradient_check(&f, &int(3), &int(7));
        assert_eq!(chk.max_residual(), 0.0);
    }

    #[test]
    fn report_serializes() {
        let fam = weierstrass_family(&int(1), &int(2));
        let v = serde_json::to_value(check_separable(&fam.f()).to_json()).unwrap();
        assert_eq!(v["entries"].as_array().unwrap().len(), 3);
        assert_eq!(v["entries"][0]["var"], "s");
        assert_eq!(v["entries"][0]["multiplier"], "16");
    }
}
