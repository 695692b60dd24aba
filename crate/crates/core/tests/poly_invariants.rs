use nodalforge::poly::{
    folding_complex, folding_matrix, folding_real, hessenberg_determinant, tchebychev,
    MatrixFlavor,
};
use nodalforge::trig::{eval_g, h1, TrigPoint};
use nodalforge::{FloatPolynomial, RationalPolynomial};
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Leibniz expansion over all permutations; independent of both
/// determinant routes in the library.
fn leibniz(rows: &[Vec<RationalPolynomial>]) -> RationalPolynomial {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for i in 0..n {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }
    let n = rows.len();
    let mut acc = RationalPolynomial::zero(2).unwrap();
    for p in perms(n) {
        let inversions = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| p[i] > p[j])
            .count();
        let mut term = RationalPolynomial::constant(2, BigRational::from_integer(1.into())).unwrap();
        for (r, &c) in p.iter().enumerate() {
            term = &term * &rows[r][c];
        }
        acc = if inversions % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

#[test]
fn hessenberg_route_matches_leibniz() {
    for d in 1..=6 {
        for flavor in [MatrixFlavor::XMajor, MatrixFlavor::YMajor] {
            let m = folding_matrix(d, flavor).unwrap();
            assert_eq!(hessenberg_determinant(&m).unwrap(), leibniz(m.rows()), "d = {d}");
        }
    }
}

#[test]
fn tchebychev_trigonometric_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let thetas: Vec<f64> = (0..1000).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
    for d in 0..=30 {
        let t = FloatPolynomial::<f64>::new(&tchebychev(d).unwrap());
        let worst = thetas
            .iter()
            .map(|&th| (t.eval(&[th.cos()]).unwrap() - (d as f64 * th).cos()).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-12, "d = {d}: {worst:e}");
    }
}

#[test]
fn real_coefficients_up_to_thirty() {
    // folding_real fails on any surviving imaginary part
    for d in 1..=30 {
        let f = folding_real(d).unwrap();
        assert_eq!(f.total_degree(), Some(d as u32));
        assert!(f.terms().all(|(m, _)| m[1] % 2 == 0));
    }
}

/// `F_{R,d}(h1(u, v))` against the closed trigonometric form.
#[test]
fn g_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let samples: Vec<TrigPoint<f64>> = (0..1000)
        .map(|_| TrigPoint::new(rng.gen::<f64>(), rng.gen::<f64>()))
        .collect();
    for d in 1..=15 {
        let f = FloatPolynomial::<f64>::new(&folding_real(d).unwrap());
        let scale = f.max_coefficient().max(1.0);
        let worst = samples
            .iter()
            .map(|&p| {
                let (x, y) = h1(p);
                (f.eval(&[x, y]).unwrap() - eval_g(d, p)).abs() / scale
            })
            .fold(0.0, f64::max);
        assert!(worst < 1e-8, "d = {d}: {worst:e}");
    }
}

#[test]
fn g_identity_in_single_precision() {
    let f = FloatPolynomial::<f32>::new(&folding_real(4).unwrap());
    for &(u, v) in &[(0.1_f32, 0.2_f32), (0.7, 0.05), (0.33, 0.9)] {
        let p = TrigPoint::new(u, v);
        let (x, y) = h1(p);
        assert!((f.eval(&[x, y]).unwrap() - eval_g(4, p)).abs() < 1e-3);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn folding_complex_symmetric(d in 1usize..20) {
        let f = folding_complex(d).unwrap();
        prop_assert_eq!(f.swap_variables(0, 1), f);
    }

    #[test]
    fn folding_real_even_in_y(d in 1usize..25, x in -3i64..4, y in -3i64..4) {
        let f = folding_real(d).unwrap();
        let q = |n: i64| BigRational::from_integer(n.into());
        prop_assert_eq!(f.eval_exact(&[q(x), q(y)]).unwrap(), f.eval_exact(&[q(x), q(-y)]).unwrap());
    }
}
