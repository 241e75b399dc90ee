use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::{BiPoly, Coeff, PolyError};

const N: usize = TriQuadPoly::<f64>::MAX_DEGREE + 1;

/// The three variables of a [`TriQuadPoly`], in storage order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    X1,
    X2,
    S,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::X1, Var::X2, Var::S];

    fn index(self) -> usize {
        match self {
            Var::X1 => 0,
            Var::X2 => 1,
            Var::S => 2,
        }
    }

    /// The remaining two variables, in the order a discriminant in `self`
    /// stores them as (first, second).
    pub fn others(self) -> (Var, Var) {
        match self {
            Var::X1 => (Var::X2, Var::S),
            Var::X2 => (Var::X1, Var::S),
            Var::S => (Var::X1, Var::X2),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X1 => "x1",
            Var::X2 => "x2",
            Var::S => "s",
        }
    }
}

/// Dense polynomial in `(x1, x2, s)` of degree at most 2 in each variable.
#[derive(Debug, Clone, PartialEq)]
pub struct TriQuadPoly<T> {
    coeffs: Vec<T>,
}

/// Discriminant `b^2 - 4ac` of a [`TriQuadPoly`] read as a quadratic in one
/// variable. `degenerate` is set when the leading coefficient `a` vanishes
/// identically, in which case `poly` is just `b^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Discriminant<T> {
    pub var: Var,
    pub poly: BiPoly<T>,
    pub degenerate: bool,
}

impl<T: Coeff> TriQuadPoly<T> {
    pub const MAX_DEGREE: usize = 2;

    pub fn zero() -> Self {
        TriQuadPoly {
            coeffs: vec![T::zero(); N * N * N],
        }
    }

    fn slot(i: usize, j: usize, k: usize) -> usize {
        (i * N + j) * N + k
    }

    /// Build from `([e_x1, e_x2, e_s], c)` terms; repeated exponents accumulate.
    pub fn from_terms(terms: impl IntoIterator<Item = ([usize; 3], T)>) -> Result<Self, PolyError> {
        let mut p = Self::zero();
        for (e, c) in terms {
            for v in Var::ALL {
                check_cap(v, e[v.index()])?;
            }
            let slot = &mut p.coeffs[Self::slot(e[0], e[1], e[2])];
            *slot = slot.clone() + c;
        }
        Ok(p)
    }

    /// `a(x1,x2) s^2 + b(x1,x2) s + c(x1,x2)`.
    pub fn from_quadratic_in_s(a: &BiPoly<T>, b: &BiPoly<T>, c: &BiPoly<T>) -> Result<Self, PolyError> {
        let mut terms = Vec::new();
        for (k, part) in [c, b, a].into_iter().enumerate() {
            for (i, j, v) in part.terms() {
                terms.push(([i, j, k], v.clone()));
            }
        }
        Self::from_terms(terms)
    }

    pub fn get(&self, e: [usize; 3]) -> T {
        if e.iter().all(|&d| d < N) {
            self.coeffs[Self::slot(e[0], e[1], e[2])].clone()
        } else {
            T::zero()
        }
    }

    /// Nonzero terms as `(exponents, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = ([usize; 3], &T)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| ([k / (N * N), (k / N) % N, k % N], c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn degree_in(&self, var: Var) -> isize {
        self.terms().map(|(e, _)| e[var.index()] as isize).max().unwrap_or(-1)
    }

    pub fn eval(&self, x1: &T, x2: &T, s: &T) -> T {
        self.eval_with(x1, x2, s, T::clone)
    }

    /// Evaluate at a point of another field, mapping coefficients through `f`.
    pub fn eval_with<U: Coeff>(&self, x1: &U, x2: &U, s: &U, f: impl Fn(&T) -> U) -> U {
        (0..N).rev().fold(U::zero(), |acc, i| {
            let plane = (0..N).rev().fold(U::zero(), |p, j| {
                let row = (0..N)
                    .rev()
                    .fold(U::zero(), |r, k| r * s.clone() + f(&self.coeffs[Self::slot(i, j, k)]));
                p * x2.clone() + row
            });
            acc * x1.clone() + plane
        })
    }

    /// Evaluate with the point given in `(x1, x2, s)` order.
    pub fn eval_point(&self, p: &[T; 3]) -> T {
        self.eval(&p[0], &p[1], &p[2])
    }

    /// Coefficients `(a, b, c)` of `F = a·var² + b·var + c`, each a
    /// bivariate polynomial in `var.others()`.
    pub fn quadratic_in(&self, var: Var) -> [BiPoly<T>; 3] {
        let (u, v) = var.others();
        let mut parts: [Vec<(usize, usize, T)>; 3] = Default::default();
        for (e, c) in self.terms() {
            parts[e[var.index()]].push((e[u.index()], e[v.index()], c.clone()));
        }
        let [c, b, a] = parts.map(|t| BiPoly::from_terms(t).expect("degree ≤ 2 fits bivariate storage"));
        [a, b, c]
    }

    pub fn discriminant_in(&self, var: Var) -> Discriminant<T> {
        let [a, b, c] = self.quadratic_in(var);
        let b2 = b.checked_mul(&b).expect("degree ≤ 4 fits");
        let ac = a.checked_mul(&c).expect("degree ≤ 4 fits");
        Discriminant {
            var,
            degenerate: a.is_zero(),
            poly: &b2 - &ac.scale(&T::from_i64(4)),
        }
    }

    /// Formal partial derivative.
    pub fn partial(&self, var: Var) -> Self {
        let idx = var.index();
        let terms = self.terms().filter(|(e, _)| e[idx] > 0).map(|(mut e, c)| {
            let k = e[idx];
            e[idx] -= 1;
            (e, c.clone() * T::from_i64(k as i64))
        });
        Self::from_terms(terms.collect::<Vec<_>>()).expect("derivative lowers degree")
    }

    pub fn scale(&self, k: &T) -> Self {
        TriQuadPoly {
            coeffs: self.coeffs.iter().map(|c| c.clone() * k.clone()).collect(),
        }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        let mut terms = Vec::new();
        for (e, a) in self.terms() {
            for (f, b) in other.terms() {
                terms.push(([e[0] + f[0], e[1] + f[1], e[2] + f[2]], a.clone() * b.clone()));
            }
        }
        Self::from_terms(terms)
    }

    /// Substitute `s -> -s`.
    pub fn reflect_s(&self) -> Self {
        let terms = self.terms().map(|(e, c)| {
            let c = if e[2] % 2 == 1 { -c.clone() } else { c.clone() };
            (e, c)
        });
        Self::from_terms(terms.collect::<Vec<_>>()).expect("same degrees")
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> TriQuadPoly<U> {
        TriQuadPoly {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }
}

fn check_cap(var: Var, degree: usize) -> Result<(), PolyError> {
    if degree > TriQuadPoly::<f64>::MAX_DEGREE {
        Err(PolyError::DegreeOverflow {
            var: var.name(),
            needed: degree,
            cap: TriQuadPoly::<f64>::MAX_DEGREE,
        })
    } else {
        Ok(())
    }
}

impl<T: Coeff> Add for &TriQuadPoly<T> {
    type Output = TriQuadPoly<T>;

    fn add(self, rhs: Self) -> TriQuadPoly<T> {
        TriQuadPoly {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<T: Coeff> Sub for &TriQuadPoly<T> {
    type Output = TriQuadPoly<T>;

    fn sub(self, rhs: Self) -> TriQuadPoly<T> {
        TriQuadPoly {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<T: Coeff> Neg for &TriQuadPoly<T> {
    type Output = TriQuadPoly<T>;

    fn neg(self) -> TriQuadPoly<T> {
        TriQuadPoly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}
