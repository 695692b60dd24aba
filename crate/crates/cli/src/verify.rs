//! The full invariant suite for one degree.

use nodalforge::arrangement::{
    build_arrangement, extract_lines, match_cells_to_critical_points, product_residual,
    sample_points, two_color, vertex_census, Arrangement,
};
use nodalforge::bounds::{
    harborth_bound, harborth_hypothetical, minus_one_count, mu_upper, node_count_formula, pairs,
    two_level_bound,
};
use nodalforge::critpoints::{census, find_critical_points, Signature, ValueClass};
use nodalforge::poly::{folding_complex, folding_real};
use nodalforge::surface::{self, enumerate_nodes_from, min_separation, NodeRecord};
use nodalforge::trig::{eval_g, h1, TrigPoint};
use nodalforge::{CriticalPoint, FloatPolynomial64, RationalPolynomial};
use serde_json::{json, Value};

use crate::config::RunConfig;

pub const IDENTITY_SAMPLES: usize = 1000;
pub const IDENTITY_TOL: f64 = 1e-8;
pub const PRODUCT_SAMPLES: usize = 200;
pub const PRODUCT_TOL: f64 = 1e-7;
pub const VERTEX_TOL: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub detail: String,
    pub pass: bool,
}

impl Check {
    fn new(name: &'static str, pass: bool, detail: impl Into<String>) -> Self {
        Check { name, detail: detail.into(), pass }
    }

    pub fn line(&self) -> String {
        if self.pass {
            format!("{} {}", self.name, self.detail)
        } else {
            format!("{} {} FAILED", self.name, self.detail)
        }
    }
}

pub struct Outcome {
    pub d: usize,
    pub checks: Vec<Check>,
    pub folding: RationalPolynomial,
    pub points: Vec<CriticalPoint>,
    pub arrangement: Arrangement,
    pub nodes: Option<Vec<NodeRecord>>,
}

impl Outcome {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn report(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| json!({ "name": c.name, "detail": c.detail, "pass": c.pass }))
            .collect();
        json!({ "d": self.d, "pass": self.pass(), "checks": checks })
    }
}

/// Worst `|F(h1(u, v)) - G(u, v)|` over the unit square, scaled by the largest coefficient.
pub fn identity_error(f: &RationalPolynomial, d: usize, samples: usize) -> nodalforge::Result<f64> {
    let fp = FloatPolynomial64::new(f);
    let scale = fp.max_coefficient().max(1.0);
    let mut worst = 0.0_f64;
    for [u, v] in sample_points(samples, 0.0, 1.0) {
        let p = TrigPoint::new(u, v);
        let (x, y) = h1(p);
        worst = worst.max((fp.eval(&[x, y])? - eval_g(d, p)).abs() / scale);
    }
    Ok(worst)
}

fn expected_signature(c: ValueClass) -> Option<Signature> {
    match c {
        ValueClass::Zero => Some(Signature::SADDLE),
        ValueClass::MinusOne => Some(Signature::MINIMUM),
        ValueClass::Eight => None,
    }
}

pub fn run(d: usize, cfg: &RunConfig) -> nodalforge::Result<Outcome> {
    let mut checks = Vec::new();

    let folding = folding_real(d)?;
    let symmetric = {
        let fc = folding_complex(d)?;
        fc.swap_variables(0, 1) == fc
    };
    let deg = folding.total_degree().unwrap_or(0) as usize;
    checks.push(Check::new(
        "polynomial",
        deg == d && symmetric,
        format!("degree {deg} symmetric {symmetric}"),
    ));

    let err = identity_error(&folding, d, IDENTITY_SAMPLES)?;
    checks.push(Check::new("identity", err < IDENTITY_TOL, format!("{err:.3e}")));

    // a census mismatch aborts the run with an error
    let points = find_critical_points(d, &cfg.crit())?;
    let c = census(d, &points);
    checks.push(Check::new(
        "census",
        c.pass,
        format!(
            "{}/{}/{} expected {}/{}/{}",
            c.count_zero, c.count_minus_one, c.count_eight, c.expected_zero, c.expected_minus_one, c.expected_eight
        ),
    ));
    let worst_value = points
        .iter()
        .map(|p| (p.value - p.value_class.nominal()).abs())
        .fold(0.0, f64::max);
    checks.push(Check::new(
        "values",
        worst_value <= cfg.value_tol,
        format!("{worst_value:.3e}"),
    ));
    let morse_ok = points
        .iter()
        .all(|p| expected_signature(p.value_class).is_none_or(|s| p.signature == s));
    checks.push(Check::new("morse", morse_ok, if morse_ok { "ok" } else { "mismatch" }));

    let lines = extract_lines(d)?;
    checks.push(Check::new("lines", lines.len() == d, format!("{}/{}", lines.len(), d)));
    let (_, residual) = product_residual(&folding, &lines, &sample_points(PRODUCT_SAMPLES, -3.0, 3.0));
    checks.push(Check::new("product", residual < PRODUCT_TOL, format!("{residual:.3e}")));

    let arrangement = two_color(build_arrangement(&lines)?, &folding)?;
    let bounded = arrangement.bounded_count() as i64;
    checks.push(Check::new(
        "bounded",
        bounded == pairs(d - 1),
        format!("{}/{}", bounded, pairs(d - 1)),
    ));
    let bb = arrangement.bounded_black_count() as i64;
    checks.push(Check::new("black", bb == minus_one_count(d), format!("{}/{}", bb, minus_one_count(d))));
    let euler = arrangement.euler_characteristic();
    let colored = arrangement.is_properly_colored();
    checks.push(Check::new(
        "topology",
        euler == 2 && colored,
        format!("euler {euler} proper {colored}"),
    ));
    let (vertices_ok, vertex_dist) = vertex_census(&arrangement, &points);
    checks.push(Check::new(
        "vertices",
        vertices_ok && vertex_dist < VERTEX_TOL,
        format!("{} {vertex_dist:.3e}", arrangement.vertices.len()),
    ));
    let matching = match_cells_to_critical_points(&arrangement, &points);
    checks.push(Check::new(
        "matching",
        matching.is_bijection(),
        format!("{} pairs {} violations", matching.pairs.len(), matching.violations.len()),
    ));
    // two crossing lines always make two black cells; both bounds need d >= 3
    if d >= 3 {
        let black = arrangement.black_count() as i64;
        checks.push(Check::new(
            "harborth",
            black <= harborth_bound(d),
            format!("{}<={}", black, harborth_bound(d)),
        ));
        checks.push(Check::new(
            "two-level",
            pairs(d) + bb <= two_level_bound(d),
            format!("{}<={}", pairs(d) + bb, two_level_bound(d)),
        ));
    }

    let formula = node_count_formula(d);
    let cross = harborth_hypothetical(d, minus_one_count(d));
    checks.push(Check::new(
        "formula",
        // the closed-form upper bound rounds to 0 at d = 2, below the cone's one node
        cross == formula && (d < 3 || formula <= mu_upper(d)),
        format!("{formula} upper {}", mu_upper(d)),
    ));

    let nodes = if d <= surface::MAX_DEGREE {
        let nodes = enumerate_nodes_from(d, &points)?;
        checks.push(Check::new(
            "nodes",
            nodes.len() as i64 == formula,
            format!("{}/{}", nodes.len(), formula),
        ));
        let conical = nodes.iter().all(|n| n.signature.is_conical());
        let worst = nodes.iter().map(|n| n.surface_residual.abs()).fold(0.0, f64::max);
        checks.push(Check::new(
            "conical",
            conical && worst < cfg.residual_tol,
            format!("{} residual {worst:.3e}", if conical { "all" } else { "not all" }),
        ));
        let sep = min_separation(&nodes);
        checks.push(Check::new("separation", sep > surface::SEPARATION, format!("{sep:.3e}")));
        Some(nodes)
    } else {
        None
    };

    Ok(Outcome { d, checks, folding, points, arrangement, nodes })
}
