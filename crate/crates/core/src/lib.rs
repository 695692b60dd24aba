//! Exact construction of Tchebychev and A2 folding polynomials, the real
//! nodal surfaces built from them, and the line arrangements they cut out,
//! together with certified numerical censuses of their critical points and
//! nodes.
//!
//! Polynomial construction is generic over the coefficient ring and runs in
//! exact arithmetic ([`RationalPolynomial`], [`GaussianPolynomial`]).
//! Numerical evaluation is generic over the float type; the certification
//! pipelines (`critpoints`, `arrangement`, `surface`) run in `f64`.

pub mod arrangement;
pub mod bounds;
pub mod critpoints;
pub mod error;
pub mod poly;
pub mod scalar;
pub mod surface;
pub mod trig;

use num_complex::Complex;
use num_rational::BigRational;

pub use error::{Error, Result};
pub use poly::{FloatPolynomial, Monomial, Polynomial};

/// Exact rational scalar used for every constructed polynomial.
pub type Rational = BigRational;
/// Gaussian rational `re + i·im`, used while substituting `x ± iy`.
pub type GaussianRational = Complex<BigRational>;

/// Polynomial with exact rational coefficients.
pub type RationalPolynomial = Polynomial<Rational>;
/// Polynomial with Gaussian-rational coefficients.
pub type GaussianPolynomial = Polynomial<GaussianRational>;

/// Compensated `f64` evaluator.
pub type FloatPolynomial64 = FloatPolynomial<f64>;
/// Compensated `f32` evaluator.
pub type FloatPolynomial32 = FloatPolynomial<f32>;

pub type CriticalPoint = critpoints::CriticalPoint;

pub type TrigPoint = trig::TrigPoint<f64>;
