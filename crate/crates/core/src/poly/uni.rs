use std::ops::{Add, Neg, Sub};

use super::{Coeff, PolyError};

/// Dense univariate polynomial, `coeffs[i]` multiplies `x^i`.
///
/// Trailing zeros are always trimmed, so the zero polynomial has an empty
/// coefficient list and degree `-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct UniPoly<T> {
    coeffs: Vec<T>,
}

impl<T: Coeff> UniPoly<T> {
    pub const MAX_DEGREE: usize = 8;

    pub fn new(coeffs: Vec<T>) -> Result<Self, PolyError> {
        let mut p = UniPoly { coeffs };
        p.trim();
        if p.coeffs.len() > Self::MAX_DEGREE + 1 {
            return Err(PolyError::DegreeOverflow {
                var: "x",
                needed: p.coeffs.len() - 1,
                cap: Self::MAX_DEGREE,
            });
        }
        Ok(p)
    }

    /// Build from integer coefficients, lowest power first.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| T::from_i64(c)).collect())
            .expect("integer literal polynomial within degree cap")
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c]).expect("constant fits")
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::new(vec![T::zero(), T::one()]).expect("degree one fits")
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// Evaluate at a point of another field, mapping coefficients through `f`.
    pub fn eval_with<U: Coeff>(&self, x: &U, f: impl Fn(&T) -> U) -> U {
        self.coeffs
            .iter()
            .rev()
            .fold(U::zero(), |acc, c| acc * x.clone() + f(c))
    }

    pub fn scale(&self, k: &T) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * k.clone()).collect())
            .expect("scaling never raises degree")
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * T::from_i64(i as i64))
                .collect(),
        )
        .expect("derivative lowers degree")
    }

    /// Split into a monic polynomial and its leading coefficient.
    pub fn monic(&self) -> Option<(Self, T)> {
        let lead = self.leading()?.clone();
        Some((self.scale(&(T::one() / lead.clone())), lead))
    }

    /// `p(-x)`.
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        )
        .expect("reflection keeps degree")
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> UniPoly<U> {
        UniPoly::new(self.coeffs.iter().map(f).collect()).expect("map keeps degree")
    }

    /// `Some(k)` with `self == k * other`, `None` if not proportional.
    /// Both zero counts as proportional with `k = 1`.
    pub fn proportionality(&self, other: &Self) -> Option<T> {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Some(T::one()),
            (true, false) | (false, true) => return None,
            _ => {}
        }
        if self.degree() != other.degree() {
            return None;
        }
        let k = self.leading()?.clone() / other.leading()?.clone();
        (*self == other.scale(&k)).then_some(k)
    }
}

impl<T: Coeff> Add for &UniPoly<T> {
    type Output = UniPoly<T>;

    fn add(self, rhs: Self) -> UniPoly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
            .expect("sum within degree cap")
    }
}

impl<T: Coeff> Sub for &UniPoly<T> {
    type Output = UniPoly<T>;

    fn sub(self, rhs: Self) -> UniPoly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
            .expect("difference within degree cap")
    }
}

impl<T: Coeff> Neg for &UniPoly<T> {
    type Output = UniPoly<T>;

    fn neg(self) -> UniPoly<T> {
        UniPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect()).expect("same degree")
    }
}
