use std::ops::{Add, Neg, Sub};

use super::{Coeff, PolyError, UniPoly};

const N: usize = BiPoly::<f64>::MAX_DEGREE + 1;

/// Dense bivariate polynomial with degree at most 4 in each variable.
///
/// Coefficient `(i, j)` multiplies `u^i v^j` where `u` is the first and `v`
/// the second variable. Which named variables `u` and `v` stand for is up to
/// the caller (see [`Var::others`](super::Var::others)).
#[derive(Debug, Clone, PartialEq)]
pub struct BiPoly<T> {
    coeffs: Vec<T>,
}

impl<T: Coeff> BiPoly<T> {
    pub const MAX_DEGREE: usize = 4;

    pub fn zero() -> Self {
        BiPoly {
            coeffs: vec![T::zero(); N * N],
        }
    }

    /// Build from `(i, j, c)` terms; repeated exponents accumulate.
    pub fn from_terms(terms: impl IntoIterator<Item = (usize, usize, T)>) -> Result<Self, PolyError> {
        let mut p = Self::zero();
        for (i, j, c) in terms {
            check_cap("u", i)?;
            check_cap("v", j)?;
            let slot = &mut p.coeffs[i * N + j];
            *slot = slot.clone() + c;
        }
        Ok(p)
    }

    pub fn from_int_terms(terms: &[(usize, usize, i64)]) -> Self {
        Self::from_terms(terms.iter().map(|&(i, j, c)| (i, j, T::from_i64(c))))
            .expect("integer literal polynomial within degree cap")
    }

    pub fn constant(c: T) -> Self {
        Self::from_terms([(0, 0, c)]).expect("constant fits")
    }

    /// A univariate polynomial read in the first variable.
    pub fn from_first(p: &UniPoly<T>) -> Result<Self, PolyError> {
        Self::from_terms(p.coeffs().iter().cloned().enumerate().map(|(i, c)| (i, 0, c)))
    }

    /// A univariate polynomial read in the second variable.
    pub fn from_second(p: &UniPoly<T>) -> Result<Self, PolyError> {
        Self::from_terms(p.coeffs().iter().cloned().enumerate().map(|(j, c)| (0, j, c)))
    }

    /// `p(u) * q(v)`.
    pub fn outer(p: &UniPoly<T>, q: &UniPoly<T>) -> Result<Self, PolyError> {
        let mut terms = Vec::new();
        for (i, a) in p.coeffs().iter().enumerate() {
            for (j, b) in q.coeffs().iter().enumerate() {
                terms.push((i, j, a.clone() * b.clone()));
            }
        }
        Self::from_terms(terms)
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        if i < N && j < N {
            self.coeffs[i * N + j].clone()
        } else {
            T::zero()
        }
    }

    /// Nonzero terms in `(i, j)` lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k / N, k % N, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Degree in the first variable, `-1` for the zero polynomial.
    pub fn degree_first(&self) -> isize {
        self.terms().map(|(i, _, _)| i as isize).max().unwrap_or(-1)
    }

    /// Degree in the second variable, `-1` for the zero polynomial.
    pub fn degree_second(&self) -> isize {
        self.terms().map(|(_, j, _)| j as isize).max().unwrap_or(-1)
    }

    pub fn eval(&self, u: &T, v: &T) -> T {
        (0..N).rev().fold(T::zero(), |acc, i| {
            let row = (0..N)
                .rev()
                .fold(T::zero(), |r, j| r * v.clone() + self.coeffs[i * N + j].clone());
            acc * u.clone() + row
        })
    }

    /// Evaluate at a point of another field, mapping coefficients through `f`.
    pub fn eval_with<U: Coeff>(&self, u: &U, v: &U, f: impl Fn(&T) -> U) -> U {
        (0..N).rev().fold(U::zero(), |acc, i| {
            let row = (0..N)
                .rev()
                .fold(U::zero(), |r, j| r * v.clone() + f(&self.coeffs[i * N + j]));
            acc * u.clone() + row
        })
    }

    /// The section `u ↦ D(u, v)` at a fixed second argument.
    pub fn fix_second(&self, v: &T) -> UniPoly<T> {
        UniPoly::new(
            (0..N)
                .map(|i| {
                    (0..N)
                        .rev()
                        .fold(T::zero(), |r, j| r * v.clone() + self.coeffs[i * N + j].clone())
                })
                .collect(),
        )
        .expect("section within univariate cap")
    }

    /// The section `v ↦ D(u, v)` at a fixed first argument.
    pub fn fix_first(&self, u: &T) -> UniPoly<T> {
        UniPoly::new(
            (0..N)
                .map(|j| {
                    (0..N)
                        .rev()
                        .fold(T::zero(), |r, i| r * u.clone() + self.coeffs[i * N + j].clone())
                })
                .collect(),
        )
        .expect("section within univariate cap")
    }

    pub fn scale(&self, k: &T) -> Self {
        BiPoly {
            coeffs: self.coeffs.iter().map(|c| c.clone() * k.clone()).collect(),
        }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        let mut out = vec![T::zero(); N * N];
        for (i, j, a) in self.terms() {
            for (k, l, b) in other.terms() {
                check_cap("u", i + k)?;
                check_cap("v", j + l)?;
                let slot = &mut out[(i + k) * N + j + l];
                *slot = slot.clone() + a.clone() * b.clone();
            }
        }
        Ok(BiPoly { coeffs: out })
    }

    /// Swap the roles of the two variables.
    pub fn transpose(&self) -> Self {
        let mut out = Self::zero();
        for i in 0..N {
            for j in 0..N {
                out.coeffs[j * N + i] = self.coeffs[i * N + j].clone();
            }
        }
        out
    }

    /// Largest coefficient-wise difference, for float-mode comparisons.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a.clone() - b.clone()).magnitude())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> BiPoly<U> {
        BiPoly {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }
}

fn check_cap(var: &'static str, degree: usize) -> Result<(), PolyError> {
    if degree > BiPoly::<f64>::MAX_DEGREE {
        Err(PolyError::DegreeOverflow {
            var,
            needed: degree,
            cap: BiPoly::<f64>::MAX_DEGREE,
        })
    } else {
        Ok(())
    }
}

impl<T: Coeff> Add for &BiPoly<T> {
    type Output = BiPoly<T>;

    fn add(self, rhs: Self) -> BiPoly<T> {
        BiPoly {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<T: Coeff> Sub for &BiPoly<T> {
    type Output = BiPoly<T>;

    fn sub(self, rhs: Self) -> BiPoly<T> {
        BiPoly {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<T: Coeff> Neg for &BiPoly<T> {
    type Output = BiPoly<T>;

    fn neg(self) -> BiPoly<T> {
        BiPoly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}
