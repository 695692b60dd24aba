//! The trigonometric chart `h1` and the pulled-back folding function `G`.
//!
//! `h1(u, v)` is the real/imaginary split of
//! `e^{2πi(u+v)} + e^{-2πiu} + e^{-2πiv}`, and the real folding polynomial
//! composed with it equals
//! `G_d(u, v) = 2cos(2πdu) + 2cos(2πdv) + 2cos(2πd(u+v)) + 2`.

use serde::{Deserialize, Serialize};

use crate::scalar::FloatScalar;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrigPoint<T> {
    pub u: T,
    pub v: T,
}

impl<T: FloatScalar> TrigPoint<T> {
    pub fn new(u: T, v: T) -> Self {
        Self { u, v }
    }
}

fn tau<T: FloatScalar>() -> T {
    T::TAU()
}

/// The chart `(u, v) -> (x, y)`; both components lie in `[-3, 3]`.
pub fn h1<T: FloatScalar>(p: TrigPoint<T>) -> (T, T) {
    let t = tau::<T>();
    let (a, b, s) = (t * p.u, t * p.v, t * (p.u + p.v));
    (
        s.cos() + a.cos() + b.cos(),
        s.sin() - a.sin() - b.sin(),
    )
}

/// Jacobian of `h1`, rows are `(dx/du, dx/dv)` and `(dy/du, dy/dv)`.
pub fn h1_jacobian<T: FloatScalar>(p: TrigPoint<T>) -> [[T; 2]; 2] {
    let t = tau::<T>();
    let (a, b, s) = (t * p.u, t * p.v, t * (p.u + p.v));
    [
        [-t * (s.sin() + a.sin()), -t * (s.sin() + b.sin())],
        [t * (s.cos() - a.cos()), t * (s.cos() - b.cos())],
    ]
}

pub fn eval_g<T: FloatScalar>(d: usize, p: TrigPoint<T>) -> T {
    let two = T::one() + T::one();
    let k = tau::<T>() * T::from_usize(d).unwrap();
    two * ((k * p.u).cos() + (k * p.v).cos() + (k * (p.u + p.v)).cos()) + two
}

pub fn grad_g<T: FloatScalar>(d: usize, p: TrigPoint<T>) -> (T, T) {
    let k = tau::<T>() * T::from_usize(d).unwrap();
    let scale = -(k + k);
    let s = (k * (p.u + p.v)).sin();
    (scale * ((k * p.u).sin() + s), scale * ((k * p.v).sin() + s))
}

/// Threshold below which a lattice point counts as a critical point of `G`.
pub const LATTICE_GRADIENT_TOL: f64 = 1e-9;

/// All `(p/(6d), q/(6d))`, `0 <= p, q < 6d`, at which `∇G` vanishes.
///
/// Every critical point of `G` lies on this lattice: `sin α = sin β =
/// -sin(α+β)` forces `α, β` to multiples of `π/3` (with `α = 2πdu`,
/// `β = 2πdv`). Returned in row-major `(p, q)` order.
pub fn lattice_seeds<T: FloatScalar>(d: usize) -> Vec<TrigPoint<T>> {
    let n = 6 * d;
    let tol = T::from_f64(LATTICE_GRADIENT_TOL).unwrap();
    let denom = T::from_usize(n).unwrap();
    let mut out = Vec::new();
    for p in 0..n {
        for q in 0..n {
            let pt = TrigPoint::new(
                T::from_usize(p).unwrap() / denom,
                T::from_usize(q).unwrap() / denom,
            );
            let (gu, gv) = grad_g(d, pt);
            if gu.hypot(gv) < tol {
                out.push(pt);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn h1_examples() {
        let (x, y) = h1(TrigPoint::new(0.0_f64, 0.0));
        assert_eq!((x, y), (3.0, 0.0));
        let (x, y) = h1(TrigPoint::new(1.0 / 3.0_f64, 1.0 / 3.0));
        assert_abs_diff_eq!(x, -1.5, epsilon = 1e-14);
        assert_abs_diff_eq!(y, -1.5 * 3f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn h1_is_periodic() {
        for &(u, v) in &[(0.1, 0.7), (0.33, 0.01), (0.9, 0.45)] {
            let a = h1(TrigPoint::new(u, v));
            let b = h1(TrigPoint::new(u + 1.0, v));
            assert_abs_diff_eq!(a.0, b.0, epsilon = 1e-13);
            assert_abs_diff_eq!(a.1, b.1, epsilon = 1e-13);
        }
    }

    #[test]
    fn g_examples() {
        for d in 1..10 {
            assert_abs_diff_eq!(eval_g(d, TrigPoint::new(0.0, 0.0)), 8.0);
        }
        assert_abs_diff_eq!(eval_g(1, TrigPoint::new(0.5, 0.5)), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(eval_g(3, TrigPoint::new(1.0 / 9.0, 1.0 / 9.0)), -1.0, epsilon = 1e-14);
    }

    #[test]
    fn g_gradient_matches_finite_differences() {
        let h = 1e-6;
        for d in [1, 4, 9] {
            let p = TrigPoint::new(0.137_f64, 0.291);
            let (gu, gv) = grad_g(d, p);
            let fu = (eval_g(d, TrigPoint::new(p.u + h, p.v)) - eval_g(d, TrigPoint::new(p.u - h, p.v))) / (2.0 * h);
            let fv = (eval_g(d, TrigPoint::new(p.u, p.v + h)) - eval_g(d, TrigPoint::new(p.u, p.v - h))) / (2.0 * h);
            assert!((gu - fu).abs() < 1e-5 * (1.0 + gu.abs()));
            assert!((gv - fv).abs() < 1e-5 * (1.0 + gv.abs()));
        }
    }

    #[test]
    fn h1_jacobian_matches_finite_differences() {
        let h = 1e-6;
        let p = TrigPoint::new(0.21, 0.05);
        let j = h1_jacobian(p);
        let (xp, yp) = h1(TrigPoint::new(p.u + h, p.v));
        let (xm, ym) = h1(TrigPoint::new(p.u - h, p.v));
        assert_abs_diff_eq!(j[0][0], (xp - xm) / (2.0 * h), epsilon = 1e-6);
        assert_abs_diff_eq!(j[1][0], (yp - ym) / (2.0 * h), epsilon = 1e-6);
    }

    #[test]
    fn lattice_contains_known_critical_points() {
        let seeds = lattice_seeds::<f64>(1);
        let has = |u: f64, v: f64| {
            seeds
                .iter()
                .any(|s| (s.u - u).abs() < 1e-12 && (s.v - v).abs() < 1e-12)
        };
        assert!(has(1.0 / 3.0, 1.0 / 3.0));
        assert!(has(0.5, 0.5));
        for d in 1..=6 {
            for s in lattice_seeds::<f64>(d) {
                let (gu, gv) = grad_g(d, s);
                assert!(gu.hypot(gv) < LATTICE_GRADIENT_TOL);
            }
        }
    }

    #[test]
    fn works_in_single_precision() {
        let (x, _) = h1(TrigPoint::new(0.0_f32, 0.0));
        assert_eq!(x, 3.0);
        assert!((eval_g(2, TrigPoint::new(0.25_f32, 0.25)) - 0.0).abs() < 1e-5);
    }
}
