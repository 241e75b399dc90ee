//! First-integral coefficient sets for Kowalevski-type systems.
//!
//! For a reduced system with `f_i = x_i^{m_i} r + x_i^{n_i} γ₃` and data
//! `(A, C, P)`, the relations
//!
//! ```text
//! r²   = E + p₂ e₁ + p₁ e₂
//! r γ₃ = F - q₂ e₁ - q₁ e₂
//! γ₃²  = G + r₂ e₁ + r₁ e₂
//! ```
//!
//! hold for the coefficient functions computed here. Everything is evaluated
//! pointwise; exponents may be negative.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{BiPoly, Coeff, UniPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoremError {
    #[error("exponent profile ({m1},{n1},{m2},{n2}) needs m1 != n1 or m2 != n2")]
    DegenerateProfile { m1: i32, n1: i32, m2: i32, n2: i32 },
    #[error("evaluation at the singular locus ({0})")]
    EvaluationAtSingularLocus(&'static str),
    #[error("B has no square root in the coefficient field at this point")]
    NoSquareRoot,
}

/// Exponents of `f_i = x_i^{m_i} r + x_i^{n_i} γ₃`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentProfile {
    pub m1: i32,
    pub n1: i32,
    pub m2: i32,
    pub n2: i32,
}

impl ExponentProfile {
    pub fn new(m1: i32, n1: i32, m2: i32, n2: i32) -> Result<Self, TheoremError> {
        if m1 == n1 && m2 == n2 {
            return Err(TheoremError::DegenerateProfile { m1, n1, m2, n2 });
        }
        Ok(ExponentProfile { m1, n1, m2, n2 })
    }
}

/// Sign in front of `B` in the formula for `E`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign<T: Coeff>(self) -> T {
        match self {
            Branch::Plus => T::one(),
            Branch::Minus => -T::one(),
        }
    }
}

/// Source of `B(x1, x2)`, which must satisfy `B² = 4AC + 4P(x1)P(x2)`.
#[derive(Debug, Clone, PartialEq)]
pub enum BFunction<T> {
    Polynomial(BiPoly<T>),
    /// `±√(4AC + 4P(x1)P(x2))`, principal root when `negate` is false.
    SquareRoot { negate: bool },
}

/// Values of all nine coefficient functions at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct Coefficients<T> {
    pub p1: T,
    pub p2: T,
    pub q1: T,
    pub q2: T,
    pub r1: T,
    pub r2: T,
    pub e: T,
    pub f: T,
    pub g: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSet<T> {
    pub profile: ExponentProfile,
    pub a: BiPoly<T>,
    pub c: BiPoly<T>,
    pub p: UniPoly<T>,
    pub b: BFunction<T>,
    pub branch: Branch,
}

fn pow<T: Coeff>(x: &T, e: i32) -> Result<T, TheoremError> {
    x.powi(e).ok_or(TheoremError::EvaluationAtSingularLocus("zero base with negative exponent"))
}

fn div<T: Coeff>(num: T, den: T, what: &'static str) -> Result<T, TheoremError> {
    if den.is_zero() {
        Err(TheoremError::EvaluationAtSingularLocus(what))
    } else {
        Ok(num / den)
    }
}

/// Powers of `x1` and `x2` needed by every formula, computed once.
struct Powers<T> {
    x1m: T,
    x1n: T,
    x2m: T,
    x2n: T,
    /// `x1^{m1} x2^{n2} - x2^{m2} x1^{n1}`
    d: T,
}

impl<T: Coeff> Powers<T> {
    fn new(pr: &ExponentProfile, x1: &T, x2: &T) -> Result<Self, TheoremError> {
        let x1m = pow(x1, pr.m1)?;
        let x1n = pow(x1, pr.n1)?;
        let x2m = pow(x2, pr.m2)?;
        let x2n = pow(x2, pr.n2)?;
        let d = x1m.clone() * x2n.clone() - x2m.clone() * x1n.clone();
        if d.is_zero() {
            return Err(TheoremError::EvaluationAtSingularLocus("x1^m1 x2^n2 = x2^m2 x1^n1"));
        }
        Ok(Powers { x1m, x1n, x2m, x2n, d })
    }
}

impl<T: Coeff> CoefficientSet<T> {
    pub fn new(
        profile: ExponentProfile,
        a: BiPoly<T>,
        c: BiPoly<T>,
        p: UniPoly<T>,
        b: BFunction<T>,
        branch: Branch,
    ) -> Self {
        CoefficientSet {
            profile,
            a,
            c,
            p,
            b,
            branch,
        }
    }

    pub fn b_at(&self, x1: &T, x2: &T) -> Result<T, TheoremError> {
        match &self.b {
            BFunction::Polynomial(b) => Ok(b.eval(x1, x2)),
            BFunction::SquareRoot { negate } => {
                let four = T::from_i64(4);
                let sq = four.clone() * self.a.eval(x1, x2) * self.c.eval(x1, x2)
                    + four * self.p.eval(x1) * self.p.eval(x2);
                let root = sq.sqrt_in_field().ok_or(TheoremError::NoSquareRoot)?;
                Ok(if *negate { -root } else { root })
            }
        }
    }

    /// `B² - 4AC - 4P(x1)P(x2)`; zero when `B` is consistent with the data.
    pub fn b_consistency(&self, x1: &T, x2: &T) -> Result<T, TheoremError> {
        let b = self.b_at(x1, x2)?;
        let four = T::from_i64(4);
        Ok(b.clone() * b
            - four.clone() * self.a.eval(x1, x2) * self.c.eval(x1, x2)
            - four * self.p.eval(x1) * self.p.eval(x2))
    }

    fn e_at(&self, w: &Powers<T>, x1: &T, x2: &T) -> Result<T, TheoremError> {
        let (px1, px2) = (self.p.eval(x1), self.p.eval(x2));
        let num = w.x2n.clone() * w.x2n.clone() * px1
            + w.x1n.clone() * w.x1n.clone() * px2
            + self.branch.sign::<T>() * self.b_at(x1, x2)? * w.x1n.clone() * w.x2n.clone();
        div(num, w.d.clone() * w.d.clone(), "denominator of E")
    }

    /// Evaluate all coefficients, with `F` and `G` from the closed forms in
    /// terms of `E`.
    pub fn eval(&self, x1: &T, x2: &T) -> Result<Coefficients<T>, TheoremError> {
        let w = Powers::new(&self.profile, x1, x2)?;
        let a = self.a.eval(x1, x2);
        let d2 = w.d.clone() * w.d.clone();
        let over = |num: T| div(a.clone() * num, d2.clone(), "coefficient denominator");
        let (px1, px2) = (self.p.eval(x1), self.p.eval(x2));
        let e = self.e_at(&w, x1, x2)?;
        let two = T::from_i64(2);
        let Powers { x1m, x1n, x2m, x2n, .. } = &w;
        let sq = |v: &T| v.clone() * v.clone();

        let f_num = e.clone() * (sq(x1m) * sq(x2n) - sq(x1n) * sq(x2m)) + sq(x1n) * px2.clone() - sq(x2n) * px1.clone();
        let f_den = two * x1n.clone() * x2n.clone() * (x1n.clone() * x2m.clone() - x1m.clone() * x2n.clone());
        let g_num = e.clone() * x1m.clone() * x2m.clone() * w.d.clone() + x1m.clone() * x1n.clone() * px2
            - x2m.clone() * x2n.clone() * px1;
        let g_den = x1n.clone() * x2n.clone() * w.d.clone();
        Ok(Coefficients {
            p1: over(sq(x1n))?,
            p2: over(sq(x2n))?,
            q1: over(x1n.clone() * x1m.clone())?,
            q2: over(x2n.clone() * x2m.clone())?,
            r1: over(sq(x1m))?,
            r2: over(sq(x2m))?,
            f: div(f_num, f_den, "denominator of F")?,
            g: div(g_num, g_den, "denominator of G")?,
            e,
        })
    }

    /// `(F, G)` from the forms obtained by solving the linear system for
    /// `F` and `G` directly.
    pub fn eval_solved_fg(&self, x1: &T, x2: &T) -> Result<(T, T), TheoremError> {
        let w = Powers::new(&self.profile, x1, x2)?;
        let e = self.e_at(&w, x1, x2)?;
        let (px1, px2) = (self.p.eval(x1), self.p.eval(x2));
        let Powers { x1m, x1n, x2m, x2n, .. } = &w;
        let sq = |v: &T| v.clone() * v.clone();
        let den = sq(x1n) * x2m.clone() * x2n.clone() - sq(x2n) * x1m.clone() * x1n.clone();
        let f_num = (sq(x2n) * sq(x1m) - sq(x1n) * sq(x2m)) * e.clone() + sq(x1n) * px2.clone() - sq(x2n) * px1.clone();
        let g_num = (x2m.clone() * x2n.clone() * sq(x1m) - sq(x2m) * x1m.clone() * x1n.clone()) * e
            - x2m.clone() * x2n.clone() * px1
            + x1m.clone() * x1n.clone() * px2;
        let f = div(f_num, T::from_i64(2) * den.clone(), "denominator of solved F")?;
        let g = div(-g_num, den, "denominator of solved G")?;
        Ok((f, g))
    }

    /// Residuals of the six linear equations obtained by matching powers of
    /// `e_i` in `f_i² = P(x_i) + e_i A`.
    pub fn verify_coefficient_system(&self, x1: &T, x2: &T) -> Result<[T; 6], TheoremError> {
        let cf = self.eval(x1, x2)?;
        system_residuals(&self.profile, &self.a, &self.p, &cf, x1, x2)
    }

    /// `φ(E) + C·A / d²`, zero for both roots of the quadratic in `E`.
    pub fn verify_e_quadratic(&self, x1: &T, x2: &T) -> Result<T, TheoremError> {
        let w = Powers::new(&self.profile, x1, x2)?;
        let e = self.e_at(&w, x1, x2)?;
        let pr = &self.profile;
        let (px1, px2) = (self.p.eval(x1), self.p.eval(x2));
        let (two, four) = (T::from_i64(2), T::from_i64(4));
        let x1n2 = w.x1n.clone() * w.x1n.clone();
        let x2n2 = w.x2n.clone() * w.x2n.clone();
        let diff = pow(x1, pr.m1 - pr.n1)? - pow(x2, pr.m2 - pr.n2)?;
        let cross = w.x1n.clone() * w.x2m.clone() - w.x1m.clone() * w.x2n.clone();
        let spread = px1.clone() * x2n2.clone() - px2.clone() * x1n2.clone();
        let phi = -(e.clone() * e.clone() * diff.clone() * diff) / four.clone()
            + e * (div(px1, x1n2.clone(), "x1^(2 n1)")? + div(px2, x2n2.clone(), "x2^(2 n2)")?) / two
            - div(
                spread.clone() * spread,
                four * x1n2 * x2n2 * cross.clone() * cross,
                "denominator of φ",
            )?;
        let ca = div(
            self.c.eval(x1, x2) * self.a.eval(x1, x2),
            w.d.clone() * w.d.clone(),
            "denominator of CA",
        )?;
        Ok(phi + ca)
    }
}

/// The six equations for explicitly supplied coefficient values, in order:
/// the `e₂`, `e₁` and constant parts of the `x1` equation, then the `e₁`,
/// `e₂` and constant parts of the `x2` equation.
pub fn system_residuals<T: Coeff>(
    profile: &ExponentProfile,
    a: &BiPoly<T>,
    p: &UniPoly<T>,
    cf: &Coefficients<T>,
    x1: &T,
    x2: &T,
) -> Result<[T; 6], TheoremError> {
    let two = T::from_i64(2);
    let av = a.eval(x1, x2);
    let row = |x: &T, m: i32, n: i32| -> Result<[T; 3], TheoremError> {
        Ok([pow(x, 2 * m)?, pow(x, m + n)?, pow(x, 2 * n)?])
    };
    let [a1, b1, c1] = row(x1, profile.m1, profile.n1)?;
    let [a2, b2, c2] = row(x2, profile.m2, profile.n2)?;
    let quad = |u: &T, v: &T, w: &T, pa: &T, pb: &T, pc: &T| {
        u.clone() * pa.clone() - two.clone() * v.clone() * pb.clone() + w.clone() * pc.clone()
    };
    let constant = |pa: &T, pb: &T, pc: &T| {
        cf.e.clone() * pa.clone() + two.clone() * cf.f.clone() * pb.clone() + cf.g.clone() * pc.clone()
    };
    Ok([
        quad(&cf.p2, &cf.q2, &cf.r2, &a1, &b1, &c1) - av.clone(),
        quad(&cf.p1, &cf.q1, &cf.r1, &a1, &b1, &c1),
        constant(&a1, &b1, &c1) - p.eval(x1),
        quad(&cf.p1, &cf.q1, &cf.r1, &a2, &b2, &c2) - av,
        quad(&cf.p2, &cf.q2, &cf.r2, &a2, &b2, &c2),
        constant(&a2, &b2, &c2) - p.eval(x2),
    ])
}
