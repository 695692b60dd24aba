//! Floating evaluation with compensated (double-word) accumulation.

use crate::error::{Error, Result};
use crate::scalar::{Coefficient, DoubleDouble, FloatScalar, ToFloatPair};

use super::{Monomial, Polynomial};

/// A polynomial whose coefficients have been rounded to `hi + lo` pairs,
/// ready for repeated evaluation.
///
/// Powers, products and the running sum are all carried as double-word
/// values, so the result is accurate to roughly `eps^2` times the size of the
/// largest term rather than `eps` times it.
#[derive(Clone, Debug)]
pub struct FloatPolynomial<T> {
    nvars: usize,
    terms: Vec<(Monomial, DoubleDouble<T>)>,
    max_exp: [u32; 3],
}

impl<T: FloatScalar> FloatPolynomial<T> {
    pub fn new<C: Coefficient + ToFloatPair>(p: &Polynomial<C>) -> Self {
        let terms: Vec<_> = p.terms().map(|(m, c)| (*m, c.to_float_pair())).collect();
        let mut max_exp = [0; 3];
        for (m, _) in &terms {
            for i in 0..3 {
                max_exp[i] = max_exp[i].max(m[i]);
            }
        }
        Self {
            nvars: p.nvars(),
            terms,
            max_exp,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    fn check(&self, point: &[T]) -> Result<()> {
        if point.len() == self.nvars {
            Ok(())
        } else {
            Err(Error::PointDimension {
                expected: self.nvars,
                got: point.len(),
            })
        }
    }

    pub fn eval(&self, point: &[T]) -> Result<T> {
        self.check(point)?;
        Ok(self.eval_pair(point).value())
    }

    /// Evaluation returning the unrounded `hi + lo` pair.
    pub fn eval_pair(&self, point: &[T]) -> DoubleDouble<T> {
        debug_assert_eq!(point.len(), self.nvars);
        let powers: Vec<Vec<DoubleDouble<T>>> = (0..self.nvars)
            .map(|v| {
                let mut row = Vec::with_capacity(self.max_exp[v] as usize + 1);
                row.push(DoubleDouble::one());
                for k in 0..self.max_exp[v] as usize {
                    row.push(row[k].mul_scalar(point[v]));
                }
                row
            })
            .collect();
        let mut acc = DoubleDouble::zero();
        for (m, c) in &self.terms {
            let mut t = *c;
            for (v, row) in powers.iter().enumerate() {
                if m[v] > 0 {
                    t = t.mul(row[m[v] as usize]);
                }
            }
            acc = acc.add(t);
        }
        acc
    }

    /// Plain working-precision evaluation, kept for comparison.
    pub fn eval_naive(&self, point: &[T]) -> Result<T> {
        self.check(point)?;
        let mut acc = T::zero();
        for (m, c) in &self.terms {
            let mut t = c.hi;
            for (v, &x) in point.iter().enumerate() {
                t = t * x.powi(m[v] as i32);
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    /// Sum of absolute term values at `point`; the natural scale for
    /// judging a residual.
    pub fn magnitude(&self, point: &[T]) -> Result<T> {
        self.check(point)?;
        let mut acc = T::zero();
        for (m, c) in &self.terms {
            let mut t = c.hi.abs();
            for (v, &x) in point.iter().enumerate() {
                t = t * x.abs().powi(m[v] as i32);
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    /// Largest absolute coefficient.
    pub fn max_coefficient(&self) -> T {
        self.terms
            .iter()
            .fold(T::zero(), |acc, (_, c)| acc.max(c.hi.abs()))
    }
}

impl<C: Coefficient + ToFloatPair> Polynomial<C> {
    /// One-shot compensated evaluation; prefer [`FloatPolynomial`] in loops.
    pub fn eval<T: FloatScalar>(&self, point: &[T]) -> Result<T> {
        FloatPolynomial::new(self).eval(point)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{folding_real, tchebychev};
    use num_rational::BigRational;
    use num_traits::ToPrimitive;

    #[test]
    fn tchebychev_at_one() {
        let t3 = tchebychev(3).unwrap();
        assert_eq!(t3.eval(&[1.0_f64]).unwrap(), 1.0);
        assert_eq!(t3.eval(&[1.0_f32]).unwrap(), 1.0);
    }

    #[test]
    fn folding_zeros() {
        assert_eq!(folding_real(1).unwrap().eval(&[-1.0, 7.0]).unwrap(), 0.0);
        assert_eq!(folding_real(2).unwrap().eval(&[1.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn wrong_dimension() {
        let f = FloatPolynomial::<f64>::new(&folding_real(2).unwrap());
        assert!(matches!(
            f.eval(&[1.0]),
            Err(Error::PointDimension { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn compensated_matches_exact_rational_evaluation() {
        let f = folding_real(15).unwrap();
        let fp = FloatPolynomial::<f64>::new(&f);
        for &(x, y) in &[(0.123_456_789, -1.987_654_321), (2.5, 0.75), (-2.9, 0.01)] {
            let exact = f
                .eval_exact(&[
                    BigRational::from_float(x).unwrap(),
                    BigRational::from_float(y).unwrap(),
                ])
                .unwrap()
                .to_f64()
                .unwrap();
            let got = fp.eval(&[x, y]).unwrap();
            assert!((got - exact).abs() <= 1e-15 * exact.abs().max(1.0), "{got} vs {exact}");
        }
    }
}
