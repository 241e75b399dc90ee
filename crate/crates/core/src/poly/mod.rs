//! Dense polynomials in one, two and three variables.
//!
//! Every shape has a hard degree cap. Arithmetic that would exceed a cap
//! returns [`PolyError::DegreeOverflow`] instead of truncating. The
//! coefficient type picks the arithmetic mode: [`Rational`] for exact
//! identity checks, `f64` or [`Complex64`] inside numerical code.

mod bi;
mod json;
mod tri;
mod uni;

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use bi::BiPoly;
pub use json::PolyJson;
pub use tri::{Discriminant, TriQuadPoly, Var};
pub use uni::UniPoly;

/// Exact rational scalar with arbitrary-size numerator and denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("arity mismatch: polynomial has {expected} variable(s), point has {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("degree overflow: result needs degree {needed} in variable {var}, storage cap is {cap}")]
    DegreeOverflow {
        var: &'static str,
        needed: usize,
        cap: usize,
    },
    #[error("malformed polynomial document: {0}")]
    Format(String),
}

/// Coefficient field for the polynomial shapes.
pub trait Coeff:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(v: i64) -> Self;

    /// Absolute value as a float, used for tolerance comparisons.
    fn magnitude(&self) -> f64;

    fn to_complex(&self) -> Complex64;

    /// A square root inside the field, if one exists. Rationals only
    /// return perfect squares; reals only non-negative inputs.
    fn sqrt_in_field(&self) -> Option<Self>;

    /// `self^exp` for any integer exponent. `None` for zero to a negative power.
    fn powi(&self, exp: i32) -> Option<Self> {
        if exp < 0 {
            if self.is_zero() {
                return None;
            }
            return Some(Self::one() / self.powi(-exp)?);
        }
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = exp as u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        Some(acc)
    }
}

impl Coeff for Rational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn sqrt_in_field(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer();
        let d = self.denom();
        let rn = n.sqrt();
        let rd = d.sqrt();
        (&rn * &rn == *n && &rd * &rd == *d).then(|| BigRational::new(rn, rd))
    }
}

impl Coeff for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }

    fn sqrt_in_field(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }
}

impl Coeff for Complex64 {
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }

    fn sqrt_in_field(&self) -> Option<Self> {
        Some(self.sqrt())
    }
}

/// Evaluation at a point given as a slice, for callers that only learn the
/// arity at run time (e.g. polynomials read from JSON).
pub trait Evaluate<T> {
    fn arity(&self) -> usize;

    fn evaluate(&self, point: &[T]) -> Result<T, PolyError>;
}

fn check_arity(expected: usize, found: usize) -> Result<(), PolyError> {
    if expected == found {
        Ok(())
    } else {
        Err(PolyError::ArityMismatch { expected, found })
    }
}

impl<T: Coeff> Evaluate<T> for UniPoly<T> {
    fn arity(&self) -> usize {
        1
    }

    fn evaluate(&self, point: &[T]) -> Result<T, PolyError> {
        check_arity(1, point.len())?;
        Ok(self.eval(&point[0]))
    }
}

impl<T: Coeff> Evaluate<T> for BiPoly<T> {
    fn arity(&self) -> usize {
        2
    }

    fn evaluate(&self, point: &[T]) -> Result<T, PolyError> {
        check_arity(2, point.len())?;
        Ok(self.eval(&point[0], &point[1]))
    }
}

impl<T: Coeff> Evaluate<T> for TriQuadPoly<T> {
    fn arity(&self) -> usize {
        3
    }

    fn evaluate(&self, point: &[T]) -> Result<T, PolyError> {
        check_arity(3, point.len())?;
        Ok(self.eval(&point[0], &point[1], &point[2]))
    }
}

/// `n/d` as an exact rational. Panics on a zero denominator.
pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer as an exact rational.
pub fn int(n: i64) -> Rational {
    Rational::from_i64(n)
}

/// Exact rational value of a finite double.
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    BigRational::from_float(x)
}
