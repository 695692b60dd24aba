//! Locating, refining and classifying the real critical points of the real
//! folding polynomials, and the census against the closed-form counts.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{eight_count, minus_one_count, pairs};
use crate::error::{Error, Result};
use crate::poly::{folding_real, FloatPolynomial};
use crate::trig::{h1, lattice_seeds};
use crate::RationalPolynomial;

pub const MIN_DEGREE: usize = 2;
pub const MAX_DEGREE: usize = 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeedMode {
    /// Lattice seeds, falling back to the dense grid if they miss points.
    LatticeAndGrid,
    GridOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CritConfig {
    /// Newton stops once `‖∇F‖` drops below this.
    pub newton_tol: f64,
    pub max_iterations: usize,
    pub dedupe_radius: f64,
    /// Allowed distance of a critical value from its nominal class value.
    pub value_tol: f64,
    /// Relative threshold on the Hessian determinant for degeneracy.
    pub degeneracy_tol: f64,
    pub seed_mode: SeedMode,
}

impl Default for CritConfig {
    fn default() -> Self {
        Self {
            newton_tol: 1e-10,
            max_iterations: 50,
            dedupe_radius: 1e-6,
            value_tol: 1e-8,
            degeneracy_tol: 1e-8,
            seed_mode: SeedMode::LatticeAndGrid,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ValueClass {
    Zero,
    MinusOne,
    Eight,
}

impl ValueClass {
    pub const ALL: [ValueClass; 3] = [ValueClass::Zero, ValueClass::MinusOne, ValueClass::Eight];

    pub fn nominal(self) -> f64 {
        match self {
            ValueClass::Zero => 0.0,
            ValueClass::MinusOne => -1.0,
            ValueClass::Eight => 8.0,
        }
    }

    pub fn classify(value: f64, tol: f64) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|c| (value - c.nominal()).abs() < tol)
    }
}

impl fmt::Display for ValueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ValueClass::Zero => "ZERO",
            ValueClass::MinusOne => "MINUS_ONE",
            ValueClass::Eight => "EIGHT",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SeedOrigin {
    Lattice,
    Grid,
}

/// Counts of positive and negative Hessian eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub plus: u8,
    pub minus: u8,
}

impl Signature {
    pub const SADDLE: Signature = Signature { plus: 1, minus: 1 };
    pub const MINIMUM: Signature = Signature { plus: 2, minus: 0 };
    pub const MAXIMUM: Signature = Signature { plus: 0, minus: 2 };
}

/// Signature of a symmetric 2x2 matrix `[[a, b], [b, c]]` from the signs of
/// its determinant and trace. `None` when `|det| < tol · scale²`.
pub fn signature_2x2(a: f64, b: f64, c: f64, tol: f64) -> Option<Signature> {
    let det = a * c - b * b;
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale == 0.0 || det.abs() < tol * scale * scale {
        return None;
    }
    Some(if det < 0.0 {
        Signature::SADDLE
    } else if a + c > 0.0 {
        Signature::MINIMUM
    } else {
        Signature::MAXIMUM
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub x: f64,
    pub y: f64,
    pub value: f64,
    pub gradient_norm: f64,
    pub signature: Signature,
    pub value_class: ValueClass,
    pub seed_origin: SeedOrigin,
}

/// Gradient and Hessian evaluators of a bivariate polynomial.
#[derive(Clone, Debug)]
pub struct GradientSystem {
    f: FloatPolynomial<f64>,
    fx: FloatPolynomial<f64>,
    fy: FloatPolynomial<f64>,
    fxx: FloatPolynomial<f64>,
    fxy: FloatPolynomial<f64>,
    fyy: FloatPolynomial<f64>,
}

impl GradientSystem {
    pub fn new(p: &RationalPolynomial) -> Result<Self> {
        if p.nvars() != 2 {
            return Err(Error::VariableMismatch {
                left: 2,
                right: p.nvars(),
            });
        }
        let px = p.derivative(0);
        let py = p.derivative(1);
        let f = |q: &RationalPolynomial| FloatPolynomial::new(q);
        Ok(Self {
            f: f(p),
            fxx: f(&px.derivative(0)),
            fxy: f(&px.derivative(1)),
            fyy: f(&py.derivative(1)),
            fx: f(&px),
            fy: f(&py),
        })
    }

    pub fn value(&self, x: f64, y: f64) -> f64 {
        self.f.eval_pair(&[x, y]).value()
    }

    pub fn gradient(&self, x: f64, y: f64) -> (f64, f64) {
        let p = [x, y];
        (self.fx.eval_pair(&p).value(), self.fy.eval_pair(&p).value())
    }

    /// `(f_xx, f_xy, f_yy)`.
    pub fn hessian(&self, x: f64, y: f64) -> (f64, f64, f64) {
        let p = [x, y];
        (
            self.fxx.eval_pair(&p).value(),
            self.fxy.eval_pair(&p).value(),
            self.fyy.eval_pair(&p).value(),
        )
    }

    /// Newton iteration on `∇f = 0`. `None` on divergence, a singular step,
    /// or no convergence within the iteration budget.
    pub fn newton(&self, x0: f64, y0: f64, tol: f64, max_iter: usize) -> Option<(f64, f64)> {
        let (mut x, mut y) = (x0, y0);
        for _ in 0..=max_iter {
            let (gx, gy) = self.gradient(x, y);
            if !gx.is_finite() || !gy.is_finite() {
                return None;
            }
            if gx.hypot(gy) < tol {
                return Some((x, y));
            }
            let (a, b, c) = self.hessian(x, y);
            let det = a * c - b * b;
            if det == 0.0 || !det.is_finite() {
                return None;
            }
            x -= (c * gx - b * gy) / det;
            y -= (a * gy - b * gx) / det;
            if x.abs() > 1e3 || y.abs() > 1e3 {
                return None;
            }
        }
        None
    }
}

fn lex_cmp(a: (f64, f64), b: (f64, f64)) -> std::cmp::Ordering {
    a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1))
}

/// Collapse points closer than `radius`, keeping the lexicographically
/// smallest representative of each cluster. Input order is irrelevant.
pub fn dedupe<T: Clone>(mut items: Vec<T>, radius: f64, key: impl Fn(&T) -> (f64, f64)) -> Vec<T> {
    use std::collections::HashMap;
    items.sort_by(|a, b| lex_cmp(key(a), key(b)));
    let cell = |v: f64| (v / radius).floor() as i64;
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    let mut kept: Vec<T> = Vec::new();
    for item in items {
        let (x, y) = key(&item);
        let (cx, cy) = (cell(x), cell(y));
        let dup = (-1..=1).any(|dx| {
            (-1..=1).any(|dy| {
                buckets.get(&(cx + dx, cy + dy)).is_some_and(|ids| {
                    ids.iter().any(|&i| {
                        let (kx, ky) = key(&kept[i]);
                        (kx - x).hypot(ky - y) < radius
                    })
                })
            })
        });
        if !dup {
            buckets.entry((cx, cy)).or_default().push(kept.len());
            kept.push(item);
        }
    }
    kept
}

/// Grid over `[-3.5, 3.5]²` with spacing `1/(4d)`.
pub fn grid_seeds(d: usize) -> Vec<(f64, f64)> {
    let steps = 28 * d;
    let h = 1.0 / (4.0 * d as f64);
    let mut out = Vec::with_capacity((steps + 1) * (steps + 1));
    for i in 0..=steps {
        for j in 0..=steps {
            out.push((-3.5 + i as f64 * h, -3.5 + j as f64 * h));
        }
    }
    out
}

/// Refine seeds to critical points of `system`, deduplicated and sorted.
/// Points whose value fits no class are returned as an error.
fn refine(
    system: &GradientSystem,
    seeds: &[(f64, f64)],
    origin: SeedOrigin,
    config: &CritConfig,
) -> Vec<((f64, f64), SeedOrigin)> {
    let converged: Vec<_> = seeds
        .par_iter()
        .filter_map(|&(x, y)| {
            system
                .newton(x, y, config.newton_tol, config.max_iterations)
                .map(|p| (p, origin))
        })
        .collect();
    dedupe(converged, config.dedupe_radius, |(p, _)| *p)
}

fn classify(
    system: &GradientSystem,
    (x, y): (f64, f64),
    origin: SeedOrigin,
    config: &CritConfig,
) -> Result<CriticalPoint> {
    let value = system.value(x, y);
    let (gx, gy) = system.gradient(x, y);
    let (a, b, c) = system.hessian(x, y);
    let signature =
        signature_2x2(a, b, c, config.degeneracy_tol).ok_or(Error::Degenerate { x, y })?;
    let value_class = ValueClass::classify(value, config.value_tol)
        .ok_or(Error::UnexpectedValue { x, y, value })?;
    Ok(CriticalPoint {
        x,
        y,
        value,
        gradient_norm: gx.hypot(gy),
        signature,
        value_class,
        seed_origin: origin,
    })
}

/// Every real critical point of the degree-`d` real folding polynomial.
///
/// Seeds are the `h1` images of the critical lattice of `G`, with the dense
/// grid as fallback (or exclusively, in [`SeedMode::GridOnly`]). The result
/// must contain exactly `(d-1)²` points; otherwise a census error carrying
/// the partial counts is returned.
pub fn find_critical_points(d: usize, config: &CritConfig) -> Result<Vec<CriticalPoint>> {
    if !(MIN_DEGREE..=MAX_DEGREE).contains(&d) {
        return Err(Error::DegreeOutOfRange {
            degree: d,
            min: MIN_DEGREE,
            max: MAX_DEGREE,
        });
    }
    let system = GradientSystem::new(&folding_real(d)?)?;
    let expected = (d - 1) * (d - 1);

    let mut found = Vec::new();
    if config.seed_mode == SeedMode::LatticeAndGrid {
        let seeds: Vec<(f64, f64)> = lattice_seeds::<f64>(d).into_iter().map(h1).collect();
        found = refine(&system, &seeds, SeedOrigin::Lattice, config);
    }
    if found.len() < expected {
        let mut grid = refine(&system, &grid_seeds(d), SeedOrigin::Grid, config);
        grid.extend(found);
        found = dedupe(grid, config.dedupe_radius, |(p, _)| *p);
    }

    let points = found
        .into_iter()
        .map(|(p, origin)| classify(&system, p, origin, config))
        .collect::<Result<Vec<_>>>()?;

    if points.len() != expected {
        return Err(Error::Census {
            found: points.len(),
            expected,
            partial: Box::new(census(d, &points)),
        });
    }
    Ok(points)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CritCensus {
    pub d: usize,
    pub count_zero: i64,
    pub count_minus_one: i64,
    pub count_eight: i64,
    pub expected_zero: i64,
    pub expected_minus_one: i64,
    pub expected_eight: i64,
    pub pass: bool,
}

pub fn census(d: usize, points: &[CriticalPoint]) -> CritCensus {
    let count = |c: ValueClass| points.iter().filter(|p| p.value_class == c).count() as i64;
    let (count_zero, count_minus_one, count_eight) = (
        count(ValueClass::Zero),
        count(ValueClass::MinusOne),
        count(ValueClass::Eight),
    );
    let (expected_zero, expected_minus_one, expected_eight) =
        (pairs(d), minus_one_count(d), eight_count(d));
    CritCensus {
        d,
        count_zero,
        count_minus_one,
        count_eight,
        expected_zero,
        expected_minus_one,
        expected_eight,
        pass: (count_zero, count_minus_one, count_eight)
            == (expected_zero, expected_minus_one, expected_eight),
    }
}

/// Interior critical point `z_k = cos(kπ/d)` of `T_d`, where `T_d = (-1)^k`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TchebCritical {
    pub k: usize,
    pub z: f64,
    pub value: i8,
}

pub fn tcheb_critical_points(d: usize) -> Vec<TchebCritical> {
    (1..d)
        .map(|k| TchebCritical {
            k,
            z: (k as f64 * std::f64::consts::PI / d as f64).cos(),
            value: if k % 2 == 0 { 1 } else { -1 },
        })
        .collect()
}

pub const CSV_HEADER: &str = "x,y,value,class,n_plus,n_minus,grad_norm";

/// CSV with 17 significant digits per float.
pub fn to_csv(points: &[CriticalPoint]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for p in points {
        out.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{},{},{},{:.16e}\n",
            p.x, p.y, p.value, p.value_class, p.signature.plus, p.signature.minus, p.gradient_norm
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signature_cases() {
        assert_eq!(signature_2x2(1.0, 0.0, -1.0, 1e-8), Some(Signature::SADDLE));
        assert_eq!(signature_2x2(2.0, 1.0, 2.0, 1e-8), Some(Signature::MINIMUM));
        assert_eq!(signature_2x2(-2.0, 1.0, -2.0, 1e-8), Some(Signature::MAXIMUM));
        assert_eq!(signature_2x2(1.0, 1.0, 1.0, 1e-8), None);
        assert_eq!(signature_2x2(0.0, 0.0, 0.0, 1e-8), None);
    }

    #[test]
    fn value_classes() {
        assert_eq!(ValueClass::classify(-1.0 + 1e-10, 1e-8), Some(ValueClass::MinusOne));
        assert_eq!(ValueClass::classify(7.999_999_999_5, 1e-8), Some(ValueClass::Eight));
        assert_eq!(ValueClass::classify(0.5, 1e-8), None);
    }

    #[test]
    fn dedupe_keeps_smallest_and_ignores_order() {
        let pts = vec![(1.0, 1.0), (0.0, 0.0), (1.0 + 1e-8, 1.0), (1e-9, -1e-9)];
        let mut rev = pts.clone();
        rev.reverse();
        let a = dedupe(pts, 1e-6, |p| *p);
        let b = dedupe(rev, 1e-6, |p| *p);
        assert_eq!(a, b);
        assert_eq!(a, vec![(0.0, 0.0), (1.0, 1.0)]);
    }

    #[test]
    fn degree_two_has_a_single_saddle() {
        let pts = find_critical_points(2, &CritConfig::default()).unwrap();
        assert_eq!(pts.len(), 1);
        let p = &pts[0];
        assert!((p.x - 1.0).abs() < 1e-12 && p.y.abs() < 1e-12);
        assert!(p.value.abs() < 1e-12);
        assert_eq!(p.signature, Signature::SADDLE);
        assert_eq!(p.value_class, ValueClass::Zero);
    }

    #[test]
    fn degree_three_census() {
        let pts = find_critical_points(3, &CritConfig::default()).unwrap();
        let c = census(3, &pts);
        assert_eq!((c.expected_zero, c.expected_minus_one, c.expected_eight), (3, 0, 1));
        assert!(c.pass);
    }

    #[test]
    fn grid_only_reaches_the_same_points() {
        let lattice = find_critical_points(5, &CritConfig::default()).unwrap();
        let cfg = CritConfig {
            seed_mode: SeedMode::GridOnly,
            ..CritConfig::default()
        };
        let grid = find_critical_points(5, &cfg).unwrap();
        assert_eq!(lattice.len(), grid.len());
        for a in &lattice {
            let b = grid
                .iter()
                .find(|b| (a.x - b.x).hypot(a.y - b.y) < 1e-9)
                .expect("grid run misses a lattice point");
            assert_eq!(a.value_class, b.value_class);
            assert_eq!(b.seed_origin, SeedOrigin::Grid);
        }
    }

    #[test]
    fn out_of_range_degrees() {
        assert!(find_critical_points(1, &CritConfig::default()).is_err());
        assert!(find_critical_points(16, &CritConfig::default()).is_err());
    }

    #[test]
    fn starved_newton_reports_census_error() {
        let cfg = CritConfig {
            max_iterations: 0,
            seed_mode: SeedMode::LatticeAndGrid,
            newton_tol: 0.0,
            ..CritConfig::default()
        };
        match find_critical_points(4, &cfg) {
            Err(Error::Census { found, expected, partial }) => {
                assert_eq!(expected, 9);
                assert_eq!(found, 0);
                assert!(!partial.pass);
            }
            other => panic!("expected census error, got {other:?}"),
        }
    }

    #[test]
    fn tchebychev_critical_points() {
        let t2 = tcheb_critical_points(2);
        assert_eq!(t2.len(), 1);
        assert!(t2[0].z.abs() < 1e-15 && t2[0].value == -1);
        let t3 = tcheb_critical_points(3);
        assert!((t3[0].z - 0.5).abs() < 1e-15 && t3[0].value == -1);
        assert!((t3[1].z + 0.5).abs() < 1e-15 && t3[1].value == 1);
        let t9 = tcheb_critical_points(9);
        assert_eq!(t9.iter().filter(|t| t.value == 1).count(), 4);
        assert_eq!(t9.iter().filter(|t| t.value == -1).count(), 4);
    }

    #[test]
    fn csv_layout() {
        let pts = find_critical_points(2, &CritConfig::default()).unwrap();
        let csv = to_csv(&pts);
        let line = csv.lines().nth(1).unwrap();
        assert!(line.contains(",ZERO,1,1,"));
        let x: f64 = line.split(',').next().unwrap().parse().unwrap();
        assert_eq!(x, pts[0].x);
        assert_eq!(line.split(',').count(), 7);
    }
}
