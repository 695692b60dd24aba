//! Nodes of the real Chmutov-type surfaces `F_{R,d}(x,y) + (T_d(z)+1)/2`.
//!
//! The surface is singular exactly where a critical value of the plane part
//! and one of `(T_d + 1)/2` sum to zero: value-0 critical points over the
//! `z_k` with `T_d(z_k) = -1`, and value-(-1) points over those with
//! `T_d(z_k) = +1`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::node_count_formula;
use crate::critpoints::{find_critical_points, tcheb_critical_points, CritConfig, CriticalPoint, ValueClass};
use crate::error::{Error, Result};
use crate::poly::{chmutov_real, FloatPolynomial};

pub const MIN_DEGREE: usize = 2;
pub const MAX_DEGREE: usize = 12;

/// Certification thresholds: residual and gradient must fall below these.
pub const RESIDUAL_TOL: f64 = 1e-8;
pub const GRADIENT_TOL: f64 = 1e-8;
/// Relative determinant threshold for a rank-3 Hessian.
pub const RANK_TOL: f64 = 1e-8;
/// Minimum separation between distinct nodes.
pub const SEPARATION: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature3 {
    pub plus: u8,
    pub minus: u8,
}

impl Signature3 {
    /// Mixed signature: a conical node rather than a solitary point.
    pub fn is_conical(&self) -> bool {
        self.plus + self.minus == 3 && (1..=2).contains(&self.plus)
    }
}

fn sign_changes(coeffs: &[f64]) -> u8 {
    let mut last = 0.0;
    let mut n = 0;
    for &c in coeffs {
        if c == 0.0 {
            continue;
        }
        if last != 0.0 && (c > 0.0) != (last > 0.0) {
            n += 1;
        }
        last = c;
    }
    n
}

/// Signature of a symmetric 3x3 matrix from its characteristic polynomial
/// `λ³ - tr·λ² + m·λ - det` (`m` the sum of principal 2x2 minors).
///
/// All roots are real, so Descartes' rule of signs counts the positive
/// roots exactly, and the same rule on `p(-λ)` counts the negative ones.
/// `None` when the determinant is negligible at the matrix scale.
pub fn signature_sym3(h: &[[f64; 3]; 3], tol: f64) -> Option<Signature3> {
    let tr = h[0][0] + h[1][1] + h[2][2];
    let m = h[0][0] * h[1][1] - h[0][1] * h[1][0] + h[0][0] * h[2][2] - h[0][2] * h[2][0]
        + h[1][1] * h[2][2]
        - h[1][2] * h[2][1];
    let det = h[0][0] * (h[1][1] * h[2][2] - h[1][2] * h[2][1])
        - h[0][1] * (h[1][0] * h[2][2] - h[1][2] * h[2][0])
        + h[0][2] * (h[1][0] * h[2][1] - h[1][1] * h[2][0]);
    let scale = h.iter().flatten().fold(0.0_f64, |a, v| a.max(v.abs()));
    if scale == 0.0 || det.abs() < tol * scale.powi(3) {
        return None;
    }
    let plus = sign_changes(&[1.0, -tr, m, -det]);
    let minus = sign_changes(&[-1.0, -tr, -m, -det]);
    Some(Signature3 { plus, minus })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub location: [f64; 3],
    pub surface_residual: f64,
    pub gradient_norm: f64,
    pub signature: Signature3,
    /// Index of the plane critical point in the sorted critical-point list.
    pub crit_id: usize,
    /// Tchebychev index `k` of `z_k = cos(kπ/d)`.
    pub k: usize,
}

/// Value, gradient and Hessian of the surface polynomial.
struct SurfaceSystem {
    f: FloatPolynomial<f64>,
    grad: [FloatPolynomial<f64>; 3],
    hess: [[FloatPolynomial<f64>; 3]; 3],
}

impl SurfaceSystem {
    fn new(d: usize) -> Result<Self> {
        let p = chmutov_real(d)?;
        let g = [p.derivative(0), p.derivative(1), p.derivative(2)];
        let fp = FloatPolynomial::new;
        let hess = std::array::from_fn(|i| std::array::from_fn(|j| fp(&g[i].derivative(j))));
        Ok(Self {
            f: fp(&p),
            grad: std::array::from_fn(|i| fp(&g[i])),
            hess,
        })
    }

    fn gradient(&self, p: &[f64; 3]) -> [f64; 3] {
        std::array::from_fn(|i| self.grad[i].eval_pair(p).value())
    }

    fn hessian(&self, p: &[f64; 3]) -> [[f64; 3]; 3] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.hess[i][j].eval_pair(p).value()))
    }

    /// One Newton step; the Hessian is block diagonal (`xy` block and `zz`).
    fn newton_step(&self, p: [f64; 3]) -> Option<[f64; 3]> {
        let g = self.gradient(&p);
        let h = self.hessian(&p);
        let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
        if det == 0.0 || h[2][2] == 0.0 {
            return None;
        }
        Some([
            p[0] - (h[1][1] * g[0] - h[0][1] * g[1]) / det,
            p[1] - (h[0][0] * g[1] - h[1][0] * g[0]) / det,
            p[2] - g[2] / h[2][2],
        ])
    }

    fn certify(&self, start: [f64; 3], crit_id: usize, k: usize) -> Result<NodeRecord> {
        let location = self.newton_step(start).ok_or_else(|| {
            Error::NodeCertification(format!("singular Hessian at {start:?} (crit {crit_id}, k {k})"))
        })?;
        let surface_residual = self.f.eval_pair(&location).value().abs();
        let g = self.gradient(&location);
        let gradient_norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        let signature = signature_sym3(&self.hessian(&location), RANK_TOL).ok_or_else(|| {
            Error::NodeCertification(format!("rank-deficient Hessian at {location:?}"))
        })?;
        if surface_residual >= RESIDUAL_TOL || gradient_norm >= GRADIENT_TOL {
            return Err(Error::NodeCertification(format!(
                "node at {location:?} has residual {surface_residual:e}, gradient {gradient_norm:e}"
            )));
        }
        Ok(NodeRecord {
            location,
            surface_residual,
            gradient_norm,
            signature,
            crit_id,
            k,
        })
    }
}

/// Enumerate and certify all affine real nodes for `2 <= d <= 12`, sorted by
/// `(x, y, z)`.
pub fn enumerate_nodes(d: usize, config: &CritConfig) -> Result<Vec<NodeRecord>> {
    if !(MIN_DEGREE..=MAX_DEGREE).contains(&d) {
        return Err(Error::DegreeOutOfRange {
            degree: d,
            min: MIN_DEGREE,
            max: MAX_DEGREE,
        });
    }
    let points = find_critical_points(d, config)?;
    enumerate_nodes_from(d, &points)
}

/// Node enumeration over an already computed critical-point list.
pub fn enumerate_nodes_from(d: usize, points: &[CriticalPoint]) -> Result<Vec<NodeRecord>> {
    let system = SurfaceSystem::new(d)?;
    let levels = tcheb_critical_points(d);
    let mut candidates = Vec::new();
    for (id, p) in points.iter().enumerate() {
        let wanted = match p.value_class {
            ValueClass::Zero => -1,
            ValueClass::MinusOne => 1,
            ValueClass::Eight => continue,
        };
        for t in levels.iter().filter(|t| t.value == wanted) {
            candidates.push(([p.x, p.y, t.z], id, t.k));
        }
    }
    let mut nodes = candidates
        .par_iter()
        .map(|&(start, id, k)| system.certify(start, id, k))
        .collect::<Result<Vec<_>>>()?;
    nodes.sort_by(|a, b| {
        a.location
            .iter()
            .zip(&b.location)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(nodes)
}

/// Smallest distance between two node locations (infinite for < 2 nodes).
pub fn min_separation(nodes: &[NodeRecord]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, a) in nodes.iter().enumerate() {
        for b in &nodes[i + 1..] {
            let dist = a
                .location
                .iter()
                .zip(&b.location)
                .map(|(p, q)| (p - q) * (p - q))
                .sum::<f64>()
                .sqrt();
            best = best.min(dist);
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeCount {
    pub d: usize,
    pub enumerated: i64,
    pub formula: i64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

pub fn node_count(d: usize, config: &CritConfig) -> NodeCount {
    let formula = node_count_formula(d);
    match enumerate_nodes(d, config) {
        Ok(nodes) => NodeCount {
            d,
            enumerated: nodes.len() as i64,
            formula,
            pass: nodes.len() as i64 == formula,
            error: None,
        },
        Err(e) => NodeCount {
            d,
            enumerated: 0,
            formula,
            pass: false,
            error: Some(e.to_string()),
        },
    }
}

/// Compare enumerated node counts with the closed form over a degree range.
pub fn verify_counts(d_min: usize, d_max: usize, config: &CritConfig) -> Vec<NodeCount> {
    (d_min..=d_max).map(|d| node_count(d, config)).collect()
}

pub const CSV_HEADER: &str = "x,y,z,residual,n_plus,n_minus,crit_id,k";

pub fn to_csv(nodes: &[NodeRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for n in nodes {
        out.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{},{},{},{}\n",
            n.location[0],
            n.location[1],
            n.location[2],
            n.surface_residual,
            n.signature.plus,
            n.signature.minus,
            n.crit_id,
            n.k
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descartes_signature() {
        let diag = |a: f64, b: f64, c: f64| [[a, 0.0, 0.0], [0.0, b, 0.0], [0.0, 0.0, c]];
        assert_eq!(signature_sym3(&diag(1.0, 2.0, 3.0), 1e-8), Some(Signature3 { plus: 3, minus: 0 }));
        assert_eq!(signature_sym3(&diag(1.0, -2.0, 3.0), 1e-8), Some(Signature3 { plus: 2, minus: 1 }));
        assert_eq!(signature_sym3(&diag(-1.0, -2.0, 3.0), 1e-8), Some(Signature3 { plus: 1, minus: 2 }));
        assert_eq!(signature_sym3(&diag(-1.0, -2.0, -3.0), 1e-8), Some(Signature3 { plus: 0, minus: 3 }));
        assert_eq!(signature_sym3(&diag(1.0, 0.0, 3.0), 1e-8), None);
        // a non-diagonal case: eigenvalues of [[2,1,0],[1,2,0],[0,0,-1]] are 3, 1, -1
        let h = [[2.0, 1.0, 0.0], [1.0, 2.0, 0.0], [0.0, 0.0, -1.0]];
        assert_eq!(signature_sym3(&h, 1e-8), Some(Signature3 { plus: 2, minus: 1 }));
        assert!(Signature3 { plus: 2, minus: 1 }.is_conical());
        assert!(!Signature3 { plus: 3, minus: 0 }.is_conical());
    }

    #[test]
    fn degree_two_single_node() {
        let nodes = enumerate_nodes(2, &CritConfig::default()).unwrap();
        assert_eq!(nodes.len(), 1);
        let [x, y, z] = nodes[0].location;
        assert!((x - 1.0).abs() < 1e-12 && y.abs() < 1e-12 && z.abs() < 1e-12);
        assert!(nodes[0].signature.is_conical());
    }

    #[test]
    fn degree_three_nodes_share_height() {
        let nodes = enumerate_nodes(3, &CritConfig::default()).unwrap();
        assert_eq!(nodes.len(), 3);
        assert!(nodes.iter().all(|n| (n.location[2] - 0.5).abs() < 1e-12));
    }

    #[test]
    fn counts_pass_for_small_degrees() {
        for c in verify_counts(2, 6, &CritConfig::default()) {
            assert!(c.pass, "{c:?}");
        }
        assert_eq!(node_count(6, &CritConfig::default()).enumerated, 57);
    }

    #[test]
    fn range_errors_are_reported_in_flags() {
        let c = node_count(13, &CritConfig::default());
        assert!(!c.pass);
        assert!(c.error.is_some());
    }

    #[test]
    fn csv_layout() {
        let nodes = enumerate_nodes(3, &CritConfig::default()).unwrap();
        let csv = to_csv(&nodes);
        assert!(csv.starts_with(CSV_HEADER));
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.lines().skip(1).all(|l| l.split(',').count() == 8));
    }
}
