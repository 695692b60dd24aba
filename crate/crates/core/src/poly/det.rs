//! Exact determinants of square matrices with polynomial entries.

use std::ops::Div;

use crate::error::{Error, Result};
use crate::scalar::Coefficient;

use super::Polynomial;

/// Square matrix of polynomials, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix<C> {
    entries: Vec<Vec<Polynomial<C>>>,
}

impl<C: Coefficient> PolyMatrix<C> {
    pub fn from_rows(entries: Vec<Vec<Polynomial<C>>>) -> Result<Self> {
        let n = entries.len();
        let nvars = entries.first().and_then(|r| r.first()).map(|p| p.nvars());
        for row in &entries {
            if row.len() != n {
                return Err(Error::Format(format!(
                    "matrix row of length {} in a {n}x{n} matrix",
                    row.len()
                )));
            }
            for p in row {
                if Some(p.nvars()) != nvars {
                    return Err(Error::VariableMismatch {
                        left: nvars.unwrap_or(0),
                        right: p.nvars(),
                    });
                }
            }
        }
        Ok(Self { entries })
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, row: usize, col: usize) -> &Polynomial<C> {
        &self.entries[row][col]
    }

    pub fn rows(&self) -> &[Vec<Polynomial<C>>] {
        &self.entries
    }

    /// Entry `(i, j)` vanishes whenever `j > i + 1`.
    pub fn is_lower_hessenberg(&self) -> bool {
        self.entries
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().skip(i + 2).all(Polynomial::is_zero))
    }
}

/// Determinant of a lower-Hessenberg matrix through its leading principal
/// minors: `D_k = a_kk D_{k-1} + sum_j (-1)^{k-j} a_kj (prod_{m=j}^{k-1} a_{m,m+1}) D_{j-1}`.
///
/// Uses O(n^2) polynomial products. Fails if the matrix is not Hessenberg.
pub fn hessenberg_determinant<C: Coefficient>(m: &PolyMatrix<C>) -> Result<Polynomial<C>> {
    if !m.is_lower_hessenberg() {
        return Err(Error::Format("matrix is not lower Hessenberg".into()));
    }
    let n = m.size();
    let nvars = if n == 0 { 1 } else { m.get(0, 0).nvars() };
    let mut minors = vec![Polynomial::constant(nvars, C::one())?];
    for k in 0..n {
        let mut dk = m.get(k, k) * &minors[k];
        // walk j downwards so the superdiagonal product grows one factor at a time
        let mut chain = Polynomial::constant(nvars, C::one())?;
        for j in (0..k).rev() {
            chain = &chain * m.get(j, j + 1);
            let a = m.get(k, j);
            if a.is_zero() || chain.is_zero() {
                continue;
            }
            let term = &(a * &chain) * &minors[j];
            dk = if (k - j) % 2 == 0 { &dk + &term } else { &dk - &term };
        }
        minors.push(dk);
    }
    Ok(minors.pop().unwrap())
}

/// Fraction-free (Bareiss) elimination with exact polynomial division.
pub fn bareiss_determinant<C>(m: &PolyMatrix<C>) -> Result<Polynomial<C>>
where
    C: Coefficient + Div<Output = C>,
{
    let n = m.size();
    if n == 0 {
        return Polynomial::constant(1, C::one());
    }
    let nvars = m.get(0, 0).nvars();
    let mut a: Vec<Vec<Polynomial<C>>> = m.rows().to_vec();
    let mut prev = Polynomial::constant(nvars, C::one())?;
    let mut negate = false;
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return Polynomial::zero(nvars),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev)?;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if negate { -det } else { det })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn c(n: i64) -> Polynomial<Q> {
        Polynomial::constant(2, Q::from_integer(n.into())).unwrap()
    }

    #[test]
    fn constant_matrix_routes_agree() {
        let m = PolyMatrix::from_rows(vec![
            vec![c(2), c(1), c(0)],
            vec![c(4), c(3), c(1)],
            vec![c(5), c(7), c(6)],
        ])
        .unwrap();
        // 2(18-7) - 1(24-5) = 22 - 19 = 3
        assert_eq!(hessenberg_determinant(&m).unwrap(), c(3));
        assert_eq!(bareiss_determinant(&m).unwrap(), c(3));
    }

    #[test]
    fn bareiss_pivots_past_zero() {
        let m = PolyMatrix::from_rows(vec![vec![c(0), c(1)], vec![c(1), c(0)]]).unwrap();
        assert_eq!(bareiss_determinant(&m).unwrap(), c(-1));
    }

    #[test]
    fn non_hessenberg_rejected() {
        let m = PolyMatrix::from_rows(vec![
            vec![c(1), c(0), c(1)],
            vec![c(0), c(1), c(0)],
            vec![c(0), c(0), c(1)],
        ])
        .unwrap();
        assert!(hessenberg_determinant(&m).is_err());
        assert_eq!(bareiss_determinant(&m).unwrap(), c(1));
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(PolyMatrix::from_rows(vec![vec![c(1), c(2)], vec![c(3)]]).is_err());
    }
}
