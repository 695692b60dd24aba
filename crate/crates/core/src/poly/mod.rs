//! Sparse multivariate polynomials in up to three variables `(x, y, z)`.

mod construct;
mod det;
mod eval;
mod format;

use std::collections::BTreeMap;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::FromPrimitive;

use crate::error::{Error, Result};
use crate::scalar::Coefficient;

pub use construct::{
    chmutov_real, folding_complex, folding_matrix, folding_real, tchebychev, MatrixFlavor,
    PolyMatrix, MAX_CONSTRUCTION_DEGREE,
};
pub use det::{bareiss_determinant, hessenberg_determinant};
pub use eval::FloatPolynomial;
pub use format::{PolynomialJson, TermJson};

/// Exponent vector in the fixed variable order `(x, y, z)`.
///
/// Slots at or beyond the polynomial's `nvars` are always zero, so the
/// derived lexicographic order agrees with lex order on the used prefix.
pub type Monomial = [u32; 3];

pub const MAX_VARS: usize = 3;
pub const VARIABLE_NAMES: [&str; MAX_VARS] = ["x", "y", "z"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial<C> {
    nvars: usize,
    terms: BTreeMap<Monomial, C>,
}

fn check_nvars(nvars: usize) -> Result<()> {
    if (1..=MAX_VARS).contains(&nvars) {
        Ok(())
    } else {
        Err(Error::VariableCount(nvars))
    }
}

fn degree_of(m: &Monomial) -> u32 {
    m.iter().sum()
}

impl<C: Coefficient> Polynomial<C> {
    pub fn zero(nvars: usize) -> Result<Self> {
        check_nvars(nvars)?;
        Ok(Self {
            nvars,
            terms: BTreeMap::new(),
        })
    }

    pub fn constant(nvars: usize, c: C) -> Result<Self> {
        Self::monomial(nvars, [0; 3], c)
    }

    /// The coordinate function of variable `index`.
    pub fn variable(nvars: usize, index: usize) -> Result<Self> {
        if index >= nvars {
            return Err(Error::VariableCount(index + 1));
        }
        let mut exp = [0; 3];
        exp[index] = 1;
        Self::monomial(nvars, exp, C::one())
    }

    pub fn monomial(nvars: usize, exp: Monomial, c: C) -> Result<Self> {
        let mut p = Self::zero(nvars)?;
        if exp[nvars..].iter().any(|&e| e != 0) {
            return Err(Error::VariableCount(nvars));
        }
        p.add_term(exp, c);
        Ok(p)
    }

    /// Build from `(exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, C)>,
    {
        let mut p = Self::zero(nvars)?;
        for (exp, c) in terms {
            if exp[nvars..].iter().any(|&e| e != 0) {
                return Err(Error::VariableCount(nvars));
            }
            p.add_term(exp, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, exp: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&exp) {
            Some(old) => {
                let sum = old + c;
                if !sum.is_zero() {
                    self.terms.insert(exp, sum);
                }
            }
            None => {
                self.terms.insert(exp, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending lexicographic order of exponent vectors.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &Monomial) -> C {
        self.terms.get(exp).cloned().unwrap_or_else(C::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(degree_of).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m[var]).max()
    }

    /// Lex-leading term.
    pub fn leading_term(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            Err(Error::VariableMismatch {
                left: self.nvars,
                right: other.nvars,
            })
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = Self {
            nvars: self.nvars,
            terms: BTreeMap::new(),
        };
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self {
            nvars: self.nvars,
            terms: BTreeMap::new(),
        };
        for (e, a) in &self.terms {
            out.add_term(*e, a.clone() * c.clone());
        }
        out
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(self.nvars, C::one()).expect("nvars already validated");
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn map_coefficients<D, F>(&self, mut f: F) -> Polynomial<D>
    where
        D: Coefficient,
        F: FnMut(&C) -> D,
    {
        let mut out = Polynomial {
            nvars: self.nvars,
            terms: BTreeMap::new(),
        };
        for (e, c) in &self.terms {
            out.add_term(*e, f(c));
        }
        out
    }

    /// Fallible coefficient conversion; the error names the offending monomial.
    pub fn try_map_coefficients<D, F>(&self, mut f: F) -> Result<Polynomial<D>>
    where
        D: Coefficient,
        F: FnMut(&Monomial, &C) -> Result<D>,
    {
        let mut out = Polynomial {
            nvars: self.nvars,
            terms: BTreeMap::new(),
        };
        for (e, c) in &self.terms {
            out.add_term(*e, f(e, c)?);
        }
        Ok(out)
    }

    /// Re-embed into `nvars` variables, sending variable `i` to `targets[i]`.
    pub fn embed(&self, nvars: usize, targets: &[usize]) -> Result<Self> {
        check_nvars(nvars)?;
        if targets.len() != self.nvars || targets.iter().any(|&t| t >= nvars) {
            return Err(Error::VariableMismatch {
                left: self.nvars,
                right: targets.len(),
            });
        }
        let mut out = Self::zero(nvars)?;
        for (e, c) in &self.terms {
            let mut m = [0; 3];
            for (i, &t) in targets.iter().enumerate() {
                m[t] += e[i];
            }
            out.add_term(m, c.clone());
        }
        Ok(out)
    }

    pub fn swap_variables(&self, i: usize, j: usize) -> Self {
        let mut out = Self {
            nvars: self.nvars,
            terms: BTreeMap::new(),
        };
        for (e, c) in &self.terms {
            let mut m = *e;
            m.swap(i, j);
            out.add_term(m, c.clone());
        }
        out
    }

    /// Substitute polynomial `args[i]` for variable `i` (Horner scheme, one
    /// variable at a time, highest slot innermost).
    pub fn substitute(&self, args: &[Polynomial<C>]) -> Result<Polynomial<C>> {
        if args.len() != self.nvars {
            return Err(Error::PointDimension {
                expected: self.nvars,
                got: args.len(),
            });
        }
        let target = args[0].nvars;
        for a in args {
            if a.nvars != target {
                return Err(Error::VariableMismatch {
                    left: target,
                    right: a.nvars,
                });
            }
        }
        let terms: Vec<(Monomial, C)> = self.terms.iter().map(|(e, c)| (*e, c.clone())).collect();
        Ok(horner_substitute(&terms, 0, args, target))
    }

    /// Exact evaluation at a point with coordinates in the coefficient ring.
    pub fn eval_exact(&self, point: &[C]) -> Result<C> {
        if point.len() != self.nvars {
            return Err(Error::PointDimension {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let mut acc = C::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &k) in point.iter().zip(e.iter()) {
                for _ in 0..k {
                    t = t * v.clone();
                }
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    /// Exact division; fails unless `divisor` divides `self`.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self>
    where
        C: Div<Output = C>,
    {
        self.check_same(divisor)?;
        let (lead_exp, lead_c) = match divisor.leading_term() {
            Some((e, c)) => (*e, c.clone()),
            None => return Err(Error::InexactDivision),
        };
        let mut rem = self.clone();
        let mut quotient = Self::zero(self.nvars)?;
        while let Some((e, c)) = rem.leading_term().map(|(e, c)| (*e, c.clone())) {
            if (0..3).any(|i| e[i] < lead_exp[i]) {
                return Err(Error::InexactDivision);
            }
            let qe = [e[0] - lead_exp[0], e[1] - lead_exp[1], e[2] - lead_exp[2]];
            let qc = c / lead_c.clone();
            let step = Self::monomial(self.nvars, qe, qc.clone())?;
            rem = rem.try_sub(&(&step * divisor))?;
            quotient.add_term(qe, qc);
        }
        Ok(quotient)
    }
}

impl<C: Coefficient + FromPrimitive> Polynomial<C> {
    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self {
            nvars: self.nvars,
            terms: BTreeMap::new(),
        };
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut m = *e;
            m[var] -= 1;
            let k = C::from_u32(e[var]).expect("exponent fits coefficient ring");
            out.add_term(m, c.clone() * k);
        }
        out
    }
}

fn horner_substitute<C: Coefficient>(
    terms: &[(Monomial, C)],
    var: usize,
    args: &[Polynomial<C>],
    target: usize,
) -> Polynomial<C> {
    let zero = || Polynomial {
        nvars: target,
        terms: BTreeMap::new(),
    };
    if terms.is_empty() {
        return zero();
    }
    if var == args.len() {
        let mut p = zero();
        for (_, c) in terms {
            p.add_term([0; 3], c.clone());
        }
        return p;
    }
    let mut groups: BTreeMap<u32, Vec<(Monomial, C)>> = BTreeMap::new();
    for (e, c) in terms {
        groups.entry(e[var]).or_default().push((*e, c.clone()));
    }
    let top = *groups.keys().next_back().unwrap();
    let mut acc = zero();
    for k in (0..=top).rev() {
        acc = &acc * &args[var];
        if let Some(g) = groups.get(&k) {
            let inner = horner_substitute(g, var + 1, args, target);
            acc = &acc + &inner;
        }
    }
    acc
}

macro_rules! binop {
    ($tr:ident, $method:ident, $op:ident) => {
        impl<C: Coefficient> $tr for &Polynomial<C> {
            type Output = Polynomial<C>;
            /// Panics on a variable-count mismatch; use the `try_` form to recover.
            fn $method(self, rhs: Self) -> Polynomial<C> {
                self.$op(rhs).expect("polynomial variable counts must match")
            }
        }

        impl<C: Coefficient> $tr for Polynomial<C> {
            type Output = Polynomial<C>;
            fn $method(self, rhs: Self) -> Polynomial<C> {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl<C: Coefficient> Neg for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        self.map_coefficients(|c| -c.clone())
    }
}

impl<C: Coefficient> Neg for Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        -&self
    }
}
