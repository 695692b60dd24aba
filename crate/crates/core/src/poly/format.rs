//! JSON and text forms of rational polynomials.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::RationalPolynomial;

use super::{Monomial, Polynomial, VARIABLE_NAMES};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub num: String,
    pub den: String,
}

/// Wire form: `{"nvars": n, "terms": [{"exp": [...], "num": "...", "den": "..."}]}`
/// with terms sorted lexicographically by exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub nvars: usize,
    pub terms: Vec<TermJson>,
}

impl From<&RationalPolynomial> for PolynomialJson {
    fn from(p: &RationalPolynomial) -> Self {
        let terms = p
            .terms()
            .map(|(m, c)| TermJson {
                exp: m[..p.nvars()].to_vec(),
                num: c.numer().to_string(),
                den: c.denom().to_string(),
            })
            .collect();
        Self {
            nvars: p.nvars(),
            terms,
        }
    }
}

impl TryFrom<&PolynomialJson> for RationalPolynomial {
    type Error = Error;

    fn try_from(j: &PolynomialJson) -> Result<Self> {
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in &j.terms {
            if t.exp.len() != j.nvars {
                return Err(Error::Format(format!(
                    "exponent vector of length {} for {} variables",
                    t.exp.len(),
                    j.nvars
                )));
            }
            let num: BigInt = t
                .num
                .parse()
                .map_err(|_| Error::Format(format!("bad numerator {:?}", t.num)))?;
            let den: BigInt = t
                .den
                .parse()
                .map_err(|_| Error::Format(format!("bad denominator {:?}", t.den)))?;
            if !den.is_positive() {
                return Err(Error::Format("denominator must be positive".into()));
            }
            let mut m: Monomial = [0; 3];
            m[..j.nvars].copy_from_slice(&t.exp);
            terms.push((m, BigRational::new(num, den)));
        }
        Polynomial::from_terms(j.nvars, terms)
    }
}

impl RationalPolynomial {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&PolynomialJson::from(self)).expect("plain data serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: PolynomialJson = serde_json::from_str(s)?;
        Self::try_from(&j)
    }
}

/// Ascending total degree; within a degree, higher powers of earlier
/// variables first. The constant term leads: `2 - 4*x + 2*x^2 - 2*y^2`.
fn display_order(nvars: usize, a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| b[..nvars].cmp(&a[..nvars]))
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial, nvars: usize) -> fmt::Result {
    let mut first = true;
    for (v, &e) in m[..nvars].iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        f.write_str(VARIABLE_NAMES[v])?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut terms: Vec<_> = self.terms().collect();
        terms.sort_by(|a, b| display_order(self.nvars(), a.0, b.0));
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let is_const = m.iter().all(Zero::is_zero);
            if is_const {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                write_monomial(f, m, self.nvars())?;
            }
        }
        Ok(())
    }
}
