use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{BiPoly, PolyError, Rational, TriQuadPoly, UniPoly};

/// Wire form shared by every polynomial shape:
/// `{"vars": [...], "coeffs": [[[e1, e2, ...], "num", "den"], ...]}`.
///
/// Numerators and denominators are decimal strings so arbitrarily large
/// integers survive the round trip; plain JSON integers are accepted on input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub coeffs: Vec<(Vec<usize>, IntLit, IntLit)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntLit {
    Str(String),
    Int(i64),
}

impl IntLit {
    fn parse(&self) -> Result<BigInt, PolyError> {
        match self {
            IntLit::Str(s) => {
                BigInt::from_str(s).map_err(|_| PolyError::Format(format!("not an integer: {s:?}")))
            }
            IntLit::Int(i) => Ok(BigInt::from(*i)),
        }
    }
}

impl PolyJson {
    fn push(&mut self, exps: Vec<usize>, c: &Rational) {
        self.coeffs.push((
            exps,
            IntLit::Str(c.numer().to_string()),
            IntLit::Str(c.denom().to_string()),
        ));
    }

    fn terms(&self, arity: usize) -> Result<Vec<(Vec<usize>, Rational)>, PolyError> {
        if self.vars.len() != arity {
            return Err(PolyError::ArityMismatch {
                expected: arity,
                found: self.vars.len(),
            });
        }
        self.coeffs
            .iter()
            .map(|(e, n, d)| {
                if e.len() != arity {
                    return Err(PolyError::Format(format!(
                        "exponent list {e:?} does not match {arity} variable(s)"
                    )));
                }
                let d = d.parse()?;
                if d == BigInt::from(0) {
                    return Err(PolyError::Format("zero denominator".into()));
                }
                Ok((e.clone(), BigRational::new(n.parse()?, d)))
            })
            .collect()
    }

    pub fn from_uni(p: &UniPoly<Rational>, var: &str) -> Self {
        let mut out = PolyJson {
            vars: vec![var.to_string()],
            coeffs: Vec::new(),
        };
        for (i, c) in p.coeffs().iter().enumerate().filter(|(_, c)| !num_traits::Zero::is_zero(*c)) {
            out.push(vec![i], c);
        }
        out
    }

    pub fn from_bi(p: &BiPoly<Rational>, vars: [&str; 2]) -> Self {
        let mut out = PolyJson {
            vars: vars.iter().map(|v| v.to_string()).collect(),
            coeffs: Vec::new(),
        };
        for (i, j, c) in p.terms() {
            out.push(vec![i, j], c);
        }
        out
    }

    pub fn from_tri(p: &TriQuadPoly<Rational>) -> Self {
        let mut out = PolyJson {
            vars: vec!["x1".into(), "x2".into(), "s".into()],
            coeffs: Vec::new(),
        };
        for (e, c) in p.terms() {
            out.push(e.to_vec(), c);
        }
        out
    }

    pub fn to_uni(&self) -> Result<UniPoly<Rational>, PolyError> {
        let terms = self.terms(1)?;
        let len = terms.iter().map(|(e, _)| e[0] + 1).max().unwrap_or(0);
        let mut coeffs = vec![num_traits::Zero::zero(); len];
        for (e, c) in terms {
            coeffs[e[0]] += c;
        }
        UniPoly::new(coeffs)
    }

    pub fn to_bi(&self) -> Result<BiPoly<Rational>, PolyError> {
        BiPoly::from_terms(self.terms(2)?.into_iter().map(|(e, c)| (e[0], e[1], c)))
    }

    pub fn to_tri(&self) -> Result<TriQuadPoly<Rational>, PolyError> {
        TriQuadPoly::from_terms(self.terms(3)?.into_iter().map(|(e, c)| ([e[0], e[1], e[2]], c)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn parses_mixed_integer_literals() {
        let doc = r#"{"vars":["x"],"coeffs":[[[0],"-3","4"],[[2],5,1]]}"#;
        let p: PolyJson = serde_json::from_str(doc).unwrap();
        let u = p.to_uni().unwrap();
        assert_eq!(u.coeffs(), &[rat(-3, 4), rat(0, 1), rat(5, 1)]);
    }

    #[test]
    fn rejects_bad_documents() {
        let wrong_arity: PolyJson = serde_json::from_str(r#"{"vars":["x","y"],"coeffs":[]}"#).unwrap();
        assert!(matches!(wrong_arity.to_uni(), Err(PolyError::ArityMismatch { .. })));
        let zero_den: PolyJson = serde_json::from_str(r#"{"vars":["x"],"coeffs":[[[0],"1","0"]]}"#).unwrap();
        assert!(zero_den.to_uni().is_err());
        assert!(serde_json::from_str::<PolyJson>(r#"{"vars":[],"coeffs":[],"extra":1}"#).is_err());
    }

    #[test]
    fn huge_coefficients_survive() {
        let big = BigRational::new(
            BigInt::from_str("123456789012345678901234567890").unwrap(),
            BigInt::from_str("987654321098765432109876543211").unwrap(),
        );
        let p = BiPoly::from_terms([(4, 3, big)]).unwrap();
        let text = serde_json::to_string(&PolyJson::from_bi(&p, ["x1", "x2"])).unwrap();
        let back: PolyJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_bi().unwrap(), p);
    }
}
