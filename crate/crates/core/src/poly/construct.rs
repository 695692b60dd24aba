//! Constructors for the Tchebychev, A2 folding and surface polynomials.

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::{GaussianPolynomial, RationalPolynomial};

use super::det::{bareiss_determinant, hessenberg_determinant};
use super::Polynomial;

pub use super::det::PolyMatrix;

/// Largest degree accepted by the constructors.
pub const MAX_CONSTRUCTION_DEGREE: usize = 50;

/// Largest size at which the elimination route re-checks the determinant.
const CROSS_CHECK_MAX: usize = 8;

/// Which variable sits on the diagonal of the folding matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixFlavor {
    XMajor,
    YMajor,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn check_degree(d: usize, min: usize) -> Result<()> {
    if d < min || d > MAX_CONSTRUCTION_DEGREE {
        Err(Error::DegreeOutOfRange {
            degree: d,
            min,
            max: MAX_CONSTRUCTION_DEGREE,
        })
    } else {
        Ok(())
    }
}

/// `T_0 = 1`, `T_1 = z`, `T_d = 2 z T_{d-1} - T_{d-2}` in one variable.
pub fn tchebychev(d: usize) -> Result<RationalPolynomial> {
    check_degree(d, 0)?;
    let one = Polynomial::constant(1, rat(1))?;
    let z = Polynomial::variable(1, 0)?;
    let two_z = z.scale(&rat(2));
    let (mut prev, mut cur) = (one.clone(), z);
    if d == 0 {
        return Ok(one);
    }
    for _ in 1..d {
        let next = &(&two_z * &cur) - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

/// The `d x d` folding matrix: diagonal `x`, superdiagonal `1`, `(2,1) = 2y`,
/// `(3,1) = 3`, subdiagonal `y` from the third row and `1` on the
/// sub-subdiagonal from the fourth row (1-based, x-major; roles of `x` and
/// `y` exchanged for y-major). Smaller sizes truncate the pattern.
pub fn folding_matrix(d: usize, flavor: MatrixFlavor) -> Result<PolyMatrix<BigRational>> {
    check_degree(d, 1)?;
    let (diag_var, other_var) = match flavor {
        MatrixFlavor::XMajor => (0, 1),
        MatrixFlavor::YMajor => (1, 0),
    };
    let diag = Polynomial::variable(2, diag_var)?;
    let other = Polynomial::variable(2, other_var)?;
    let constant = |n: i64| Polynomial::constant(2, rat(n));
    let mut rows = Vec::with_capacity(d);
    for i in 0..d {
        let mut row = Vec::with_capacity(d);
        for j in 0..d {
            let entry = if j == i {
                diag.clone()
            } else if j == i + 1 {
                constant(1)?
            } else if i == 1 && j == 0 {
                other.scale(&rat(2))
            } else if i == 2 && j == 0 {
                constant(3)?
            } else if i >= 2 && j + 1 == i {
                other.clone()
            } else if i >= 3 && j + 2 == i {
                constant(1)?
            } else {
                Polynomial::zero(2)?
            };
            row.push(entry);
        }
        rows.push(row);
    }
    PolyMatrix::from_rows(rows)
}

fn folding_determinant(d: usize, flavor: MatrixFlavor) -> Result<RationalPolynomial> {
    let m = folding_matrix(d, flavor)?;
    let det = hessenberg_determinant(&m)?;
    if d <= CROSS_CHECK_MAX && bareiss_determinant(&m)? != det {
        return Err(Error::DeterminantMismatch(d));
    }
    Ok(det)
}

/// `F_d(x, y) = 2 + det(x-major) + det(y-major)`, integer coefficients.
pub fn folding_complex(d: usize) -> Result<RationalPolynomial> {
    let two = Polynomial::constant(2, rat(2))?;
    let dx = folding_determinant(d, MatrixFlavor::XMajor)?;
    let dy = folding_determinant(d, MatrixFlavor::YMajor)?;
    Ok(&(&two + &dx) + &dy)
}

/// `F_d(x + iy, x - iy)` computed over Gaussian rationals. Every imaginary
/// part must cancel exactly; a survivor is reported as an error.
pub fn folding_real(d: usize) -> Result<RationalPolynomial> {
    let f = folding_complex(d)?;
    let lifted: GaussianPolynomial = f.map_coefficients(|c| Complex::new(c.clone(), BigRational::zero()));
    let i = Complex::new(BigRational::zero(), BigRational::one());
    let x = GaussianPolynomial::variable(2, 0)?;
    let iy = GaussianPolynomial::variable(2, 1)?.scale(&i);
    let substituted = lifted.substitute(&[&x + &iy, &x - &iy])?;
    substituted.try_map_coefficients(|m, c| {
        if c.im.is_zero() {
            Ok(c.re.clone())
        } else {
            Err(Error::ImaginaryResidue {
                monomial: m[..2].to_vec(),
            })
        }
    })
}

/// `F_{R,d}(x, y) + (T_d(z) + 1) / 2` in three variables.
pub fn chmutov_real(d: usize) -> Result<RationalPolynomial> {
    let f = folding_real(d)?.embed(3, &[0, 1])?;
    let t = tchebychev(d)?.embed(3, &[2])?;
    let one = Polynomial::constant(3, rat(1))?;
    let half = BigRational::new(1.into(), 2.into());
    Ok(&f + &(&t + &one).scale(&half))
}
