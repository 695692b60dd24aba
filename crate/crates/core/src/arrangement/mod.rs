//! Real line arrangements: recovering the lines of a real folding
//! polynomial, the planar cell decomposition, its two-colouring by sign, and
//! the correspondence between bounded cells and critical points.

mod svg;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::critpoints::{CriticalPoint, ValueClass};
use crate::error::{Error, Result};
use crate::poly::FloatPolynomial;
use crate::trig::{h1, TrigPoint};
use crate::RationalPolynomial;

pub use svg::{to_svg, SvgOptions};

pub type Point = [f64; 2];

/// Tolerances for the floating geometry predicates.
pub const PARALLEL_TOL: f64 = 1e-9;
pub const CONCURRENCY_TOL: f64 = 1e-7;
pub const FIT_TOL: f64 = 1e-8;
pub const ON_LINE_TOL: f64 = 1e-8;
pub const SIGN_TOL: f64 = 1e-10;
/// Margin between the outermost vertex and the bounding box.
pub const BOX_MARGIN: f64 = 1.0;
const LINE_DEDUPE_TOL: f64 = 1e-6;
const FIT_SAMPLES: usize = 16;

/// `a·x + b·y + c = 0` with `a² + b² = 1` and `b > 0`, or `b = 0, a > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Line {
    /// Normalize `a·x + b·y + c = 0`; `None` if `(a, b)` vanishes.
    pub fn new(a: f64, b: f64, c: f64) -> Option<Self> {
        let n = a.hypot(b);
        if !(n > 0.0) || !n.is_finite() {
            return None;
        }
        let (a, b, c) = (a / n, b / n, c / n);
        let flip = if b.abs() > 1e-12 { b < 0.0 } else { a < 0.0 };
        Some(if flip {
            Self { a: -a, b: -b, c: -c }
        } else {
            Self { a, b, c }
        })
    }

    /// Signed distance of `p` from the line.
    pub fn eval(&self, p: Point) -> f64 {
        self.a * p[0] + self.b * p[1] + self.c
    }

    pub fn direction(&self) -> Point {
        [-self.b, self.a]
    }

    /// Foot of the perpendicular from the origin.
    pub fn anchor(&self) -> Point {
        [-self.a * self.c, -self.b * self.c]
    }

    pub fn at(&self, t: f64) -> Point {
        let (p, d) = (self.anchor(), self.direction());
        [p[0] + t * d[0], p[1] + t * d[1]]
    }

    pub fn param(&self, p: Point) -> f64 {
        let d = self.direction();
        p[0] * d[0] + p[1] * d[1]
    }

    pub fn intersect(&self, other: &Line) -> Option<Point> {
        let det = self.a * other.b - self.b * other.a;
        if det.abs() < PARALLEL_TOL {
            return None;
        }
        Some([
            (self.b * other.c - other.b * self.c) / det,
            (other.a * self.c - self.a * other.c) / det,
        ])
    }

    /// Total-least-squares fit; returns the line and the largest distance
    /// of a sample from it.
    pub fn fit(points: &[Point]) -> Option<(Line, f64)> {
        if points.len() < 2 {
            return None;
        }
        let n = points.len() as f64;
        let mx = points.iter().map(|p| p[0]).sum::<f64>() / n;
        let my = points.iter().map(|p| p[1]).sum::<f64>() / n;
        let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
        for p in points {
            let (dx, dy) = (p[0] - mx, p[1] - my);
            sxx += dx * dx;
            sxy += dx * dy;
            syy += dy * dy;
        }
        let theta = 0.5 * (2.0 * sxy).atan2(sxx - syy);
        let (a, b) = (-theta.sin(), theta.cos());
        let line = Line::new(a, b, -(a * mx + b * my))?;
        let residual = points.iter().map(|p| line.eval(*p).abs()).fold(0.0, f64::max);
        Some((line, residual))
    }

    fn same_as(&self, other: &Line, tol: f64) -> bool {
        let d = |s: f64| {
            (self.a - s * other.a)
                .abs()
                .max((self.b - s * other.b).abs())
                .max((self.c - s * other.c).abs())
        };
        d(1.0).min(d(-1.0)) < tol
    }
}

/// The `d` zero lines of the degree-`d` real folding polynomial.
///
/// `G_d` factors as `8 cos(πdu) cos(πdv) cos(πd(u+v))`, so its zero set is
/// the union of the loci `u`, `v` or `u + v` equal to `(2k+1)/(2d)`. Each
/// locus is sampled, pushed through `h1`, fitted by a line, and the three
/// families are merged.
pub fn extract_lines(d: usize) -> Result<Vec<Line>> {
    if !(1..=crate::critpoints::MAX_DEGREE).contains(&d) {
        return Err(Error::DegreeOutOfRange {
            degree: d,
            min: 1,
            max: crate::critpoints::MAX_DEGREE,
        });
    }
    let mut lines: Vec<Line> = Vec::new();
    for family in 0..3 {
        for k in 0..d {
            let level = (2 * k + 1) as f64 / (2 * d) as f64;
            let samples: Vec<Point> = (0..FIT_SAMPLES)
                .map(|j| {
                    let t = j as f64 / FIT_SAMPLES as f64;
                    let (u, v) = match family {
                        0 => (level, t),
                        1 => (t, level),
                        _ => (t, level - t),
                    };
                    let (x, y) = h1(TrigPoint::new(u, v));
                    [x, y]
                })
                .collect();
            let (line, residual) = Line::fit(&samples).ok_or(Error::LineFit {
                residual: f64::INFINITY,
            })?;
            if residual > FIT_TOL {
                return Err(Error::LineFit { residual });
            }
            if !lines.iter().any(|l| l.same_as(&line, LINE_DEDUPE_TOL)) {
                lines.push(line);
            }
        }
    }
    if lines.len() != d {
        return Err(Error::LineCount {
            d,
            found: lines.len(),
        });
    }
    lines.sort_by(|p, q| {
        p.a.total_cmp(&q.a)
            .then(p.b.total_cmp(&q.b))
            .then(p.c.total_cmp(&q.c))
    });
    Ok(lines)
}

/// Product of the normalized line forms at `p`.
pub fn line_product(lines: &[Line], p: Point) -> f64 {
    lines.iter().map(|l| l.eval(p)).product()
}

/// Fit `λ` with `f = λ · Π lines` at `samples[0]` and return `(λ, max
/// relative error over the remaining samples)`.
pub fn product_residual(f: &RationalPolynomial, lines: &[Line], samples: &[Point]) -> (f64, f64) {
    let fp = FloatPolynomial::<f64>::new(f);
    let (first, rest) = samples.split_first().expect("at least one sample");
    let lambda = fp.eval_pair(first).value() / line_product(lines, *first);
    let worst = rest
        .iter()
        .map(|p| {
            let exact = fp.eval_pair(p).value();
            let model = lambda * line_product(lines, *p);
            let scale = exact.abs().max(model.abs());
            if scale == 0.0 {
                0.0
            } else {
                (exact - model).abs() / scale
            }
        })
        .fold(0.0, f64::max);
    (lambda, worst)
}

/// Deterministic well-spread points in `[lo, hi]²` (additive recurrence
/// with the plastic-number constants).
pub fn sample_points(n: usize, lo: f64, hi: f64) -> Vec<Point> {
    const G: f64 = 1.324_717_957_244_746;
    let (a1, a2) = (1.0 / G, 1.0 / (G * G));
    (1..=n)
        .map(|i| {
            let s = ((0.5 + a1 * i as f64).fract(), (0.5 + a2 * i as f64).fract());
            [lo + (hi - lo) * s.0, lo + (hi - lo) * s.1]
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Color {
    Black,
    White,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Vertex {
    pub point: Point,
    pub lines: (usize, usize),
}

/// A piece of line between consecutive vertices, or a ray clipped at the
/// bounding box. `cells` are the two incident cells.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub line: usize,
    pub from: Point,
    pub to: Point,
    pub ray: bool,
    pub cells: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub id: usize,
    pub bounded: bool,
    /// Counter-clockwise ring; for unbounded cells it is clipped by the
    /// bounding box.
    pub boundary_vertices: Vec<Point>,
    pub interior_point: Point,
    pub color: Option<Color>,
    /// Side of each line: `true` where the normalized form is positive.
    pub sides: Vec<bool>,
}

impl Cell {
    /// Strict containment (distance `> tol` from every boundary edge).
    pub fn contains(&self, p: Point, tol: f64) -> bool {
        convex_contains(&self.boundary_vertices, p, tol)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub min: Point,
    pub max: Point,
}

impl BoundingBox {
    fn ring(&self) -> Vec<Point> {
        vec![
            self.min,
            [self.max[0], self.min[1]],
            self.max,
            [self.min[0], self.max[1]],
        ]
    }

    fn on_boundary(&self, p: Point, tol: f64) -> bool {
        (p[0] - self.min[0]).abs() < tol
            || (p[0] - self.max[0]).abs() < tol
            || (p[1] - self.min[1]).abs() < tol
            || (p[1] - self.max[1]).abs() < tol
    }

    /// Parameter interval of `line` inside the box.
    pub fn clip(&self, line: &Line) -> Option<(f64, f64)> {
        let (p, d) = (line.anchor(), line.direction());
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for axis in 0..2 {
            if d[axis].abs() < 1e-15 {
                if p[axis] < self.min[axis] || p[axis] > self.max[axis] {
                    return None;
                }
                continue;
            }
            let t1 = (self.min[axis] - p[axis]) / d[axis];
            let t2 = (self.max[axis] - p[axis]) / d[axis];
            lo = lo.max(t1.min(t2));
            hi = hi.min(t1.max(t2));
        }
        (lo < hi).then_some((lo, hi))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Arrangement {
    pub d: usize,
    pub lines: Vec<Line>,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub cells: Vec<Cell>,
    pub bbox: BoundingBox,
}

fn polygon_area(ring: &[Point]) -> f64 {
    let n = ring.len();
    (0..n)
        .map(|i| {
            let (p, q) = (ring[i], ring[(i + 1) % n]);
            p[0] * q[1] - q[0] * p[1]
        })
        .sum::<f64>()
        * 0.5
}

fn convex_contains(ring: &[Point], p: Point, tol: f64) -> bool {
    let n = ring.len();
    if n < 3 {
        return false;
    }
    (0..n).all(|i| {
        let (a, b) = (ring[i], ring[(i + 1) % n]);
        let (ex, ey) = (b[0] - a[0], b[1] - a[1]);
        let len = ex.hypot(ey);
        len > 0.0 && (ex * (p[1] - a[1]) - ey * (p[0] - a[0])) / len > tol
    })
}

/// Keep the part of a convex ring where `side · line(p) >= 0`.
fn clip_half_plane(ring: &[Point], line: &Line, positive: bool) -> Vec<Point> {
    let s = if positive { 1.0 } else { -1.0 };
    let n = ring.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let (p, q) = (ring[i], ring[(i + 1) % n]);
        let (fp, fq) = (s * line.eval(p), s * line.eval(q));
        if fp >= 0.0 {
            out.push(p);
        }
        if (fp >= 0.0) != (fq >= 0.0) {
            let t = fp / (fp - fq);
            out.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
        }
    }
    // drop near-duplicate consecutive points introduced by clipping through vertices
    let mut cleaned: Vec<Point> = Vec::with_capacity(out.len());
    for p in out {
        if cleaned
            .last()
            .is_none_or(|q: &Point| (q[0] - p[0]).hypot(q[1] - p[1]) > 1e-12)
        {
            cleaned.push(p);
        }
    }
    if cleaned.len() > 1 {
        let (f, l) = (cleaned[0], cleaned[cleaned.len() - 1]);
        if (f[0] - l[0]).hypot(f[1] - l[1]) <= 1e-12 {
            cleaned.pop();
        }
    }
    cleaned
}

fn centroid(ring: &[Point]) -> Point {
    let n = ring.len() as f64;
    [
        ring.iter().map(|p| p[0]).sum::<f64>() / n,
        ring.iter().map(|p| p[1]).sum::<f64>() / n,
    ]
}

fn area_centroid(ring: &[Point]) -> Point {
    let a = polygon_area(ring);
    if a.abs() < 1e-300 {
        return centroid(ring);
    }
    let n = ring.len();
    let (mut cx, mut cy) = (0.0, 0.0);
    for i in 0..n {
        let (p, q) = (ring[i], ring[(i + 1) % n]);
        let w = p[0] * q[1] - q[0] * p[1];
        cx += (p[0] + q[0]) * w;
        cy += (p[1] + q[1]) * w;
    }
    [cx / (6.0 * a), cy / (6.0 * a)]
}

/// Planar subdivision of a simple arrangement.
///
/// Cells are discovered from the edges: the sign vector at an edge midpoint
/// fixes every side except that of the edge's own line, which yields the
/// two incident cells. Each cell's ring is the bounding box clipped by its
/// half-planes.
pub fn build_arrangement(lines: &[Line]) -> Result<Arrangement> {
    let n = lines.len();
    if n < 2 {
        return Err(Error::TooFewLines);
    }
    let mut vertices = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let p = lines[i].intersect(&lines[j]).ok_or_else(|| {
                Error::NotSimple(format!("lines {i} and {j} are parallel"))
            })?;
            if let Some(k) = (0..n).find(|&k| k != i && k != j && lines[k].eval(p).abs() < CONCURRENCY_TOL) {
                return Err(Error::NotSimple(format!(
                    "lines {i}, {j} and {k} meet at ({}, {})",
                    p[0], p[1]
                )));
            }
            vertices.push(Vertex {
                point: p,
                lines: (i, j),
            });
        }
    }

    let (mut min, mut max) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for v in &vertices {
        for a in 0..2 {
            min[a] = min[a].min(v.point[a]);
            max[a] = max[a].max(v.point[a]);
        }
    }
    let bbox = BoundingBox {
        min: [min[0] - BOX_MARGIN, min[1] - BOX_MARGIN],
        max: [max[0] + BOX_MARGIN, max[1] + BOX_MARGIN],
    };

    let sides_at = |p: Point, skip: usize| -> Vec<bool> {
        lines
            .iter()
            .enumerate()
            .map(|(k, l)| k != skip && l.eval(p) > 0.0)
            .collect()
    };

    // edges along each line, in order of the line parameter
    let mut raw_edges: Vec<(usize, Point, Point, bool, Vec<bool>)> = Vec::new();
    for (i, line) in lines.iter().enumerate() {
        let (t_lo, t_hi) = bbox
            .clip(line)
            .ok_or_else(|| Error::NotSimple(format!("line {i} misses the bounding box")))?;
        let mut ts: Vec<f64> = vertices
            .iter()
            .filter(|v| v.lines.0 == i || v.lines.1 == i)
            .map(|v| line.param(v.point))
            .collect();
        ts.sort_by(f64::total_cmp);
        let mut stops = vec![t_lo];
        stops.extend(ts);
        stops.push(t_hi);
        for w in 0..stops.len() - 1 {
            let (from, to) = (line.at(stops[w]), line.at(stops[w + 1]));
            let ray = w == 0 || w == stops.len() - 2;
            let mid = line.at(0.5 * (stops[w] + stops[w + 1]));
            raw_edges.push((i, from, to, ray, sides_at(mid, i)));
        }
    }

    let mut keys: BTreeSet<Vec<bool>> = BTreeSet::new();
    for (i, _, _, _, s) in &raw_edges {
        let mut lo = s.clone();
        lo[*i] = false;
        let mut hi = s.clone();
        hi[*i] = true;
        keys.insert(lo);
        keys.insert(hi);
    }
    let keys: Vec<Vec<bool>> = keys.into_iter().collect();
    let id_of = |k: &Vec<bool>| keys.binary_search(k).expect("cell key registered");

    let edges = raw_edges
        .into_iter()
        .map(|(i, from, to, ray, s)| {
            let mut lo = s.clone();
            lo[i] = false;
            let mut hi = s;
            hi[i] = true;
            Edge {
                line: i,
                from,
                to,
                ray,
                cells: (id_of(&lo), id_of(&hi)),
            }
        })
        .collect();

    let box_ring = bbox.ring();
    let mut cells = Vec::with_capacity(keys.len());
    for (id, key) in keys.iter().enumerate() {
        let mut ring = box_ring.clone();
        for (line, &side) in lines.iter().zip(key) {
            ring = clip_half_plane(&ring, line, side);
            if ring.len() < 3 {
                break;
            }
        }
        if ring.len() < 3 || polygon_area(&ring).abs() < 1e-14 {
            return Err(Error::NotSimple(format!("cell {id} is empty after clipping")));
        }
        let bounded = !ring.iter().any(|p| bbox.on_boundary(*p, 1e-9));
        let interior_point = centroid(&ring);
        cells.push(Cell {
            id,
            bounded,
            boundary_vertices: ring,
            interior_point,
            color: None,
            sides: key.clone(),
        });
    }

    Ok(Arrangement {
        d: n,
        lines: lines.to_vec(),
        vertices,
        edges,
        cells,
        bbox,
    })
}

impl Arrangement {
    pub fn bounded_cells(&self) -> impl Iterator<Item = &Cell> + '_ {
        self.cells.iter().filter(|c| c.bounded)
    }

    pub fn bounded_count(&self) -> usize {
        self.bounded_cells().count()
    }

    pub fn black_count(&self) -> usize {
        self.cells
            .iter()
            .filter(|c| c.color == Some(Color::Black))
            .count()
    }

    pub fn bounded_black_count(&self) -> usize {
        self.bounded_cells()
            .filter(|c| c.color == Some(Color::Black))
            .count()
    }

    /// `V - E + F` of the subdivision compactified by the bounding box
    /// (ray ends and box corners become vertices, the outside one face).
    pub fn euler_characteristic(&self) -> i64 {
        let rays = self.edges.iter().filter(|e| e.ray).count() as i64;
        let v = self.vertices.len() as i64 + rays + 4;
        let e = self.edges.len() as i64 + rays + 4;
        let f = self.cells.len() as i64 + 1;
        v - e + f
    }

    /// No edge separates two cells of the same colour.
    pub fn is_properly_colored(&self) -> bool {
        self.edges.iter().all(|e| {
            let (a, b) = (&self.cells[e.cells.0], &self.cells[e.cells.1]);
            a.color.is_some() && a.color != b.color
        })
    }

    pub fn cells_json(&self) -> String {
        #[derive(Serialize)]
        struct CellJson {
            id: usize,
            bounded: bool,
            color: Option<Color>,
            interior_point: Point,
        }
        let rows: Vec<CellJson> = self
            .cells
            .iter()
            .map(|c| CellJson {
                id: c.id,
                bounded: c.bounded,
                color: c.color,
                interior_point: c.interior_point,
            })
            .collect();
        serde_json::to_string_pretty(&rows).expect("plain data serializes")
    }
}

/// Colour every cell by the sign of `f` at its interior point (black where
/// negative). `f` must vanish on every line of the arrangement.
pub fn two_color(mut arr: Arrangement, f: &RationalPolynomial) -> Result<Arrangement> {
    let fp = FloatPolynomial::<f64>::new(f);
    for e in &arr.edges {
        let mid = [(e.from[0] + e.to[0]) * 0.5, (e.from[1] + e.to[1]) * 0.5];
        let scale = fp.magnitude(&mid)?.max(1.0);
        let residual = fp.eval(&mid)?.abs() / scale;
        if residual > ON_LINE_TOL {
            return Err(Error::NotOnLine {
                index: e.line,
                residual,
            });
        }
    }
    for cell in &mut arr.cells {
        let candidates = [
            cell.interior_point,
            area_centroid(&cell.boundary_vertices),
        ];
        let mut chosen = None;
        for p in candidates {
            if !cell.contains(p, 0.0) {
                continue;
            }
            let v = fp.eval(&p)?;
            if v.abs() >= SIGN_TOL {
                chosen = Some((p, v));
                break;
            }
        }
        let (p, v) = chosen.ok_or(Error::InteriorPoint(cell.id))?;
        cell.interior_point = p;
        cell.color = Some(if v < 0.0 { Color::Black } else { Color::White });
    }
    if !arr.is_properly_colored() {
        return Err(Error::NotSimple("adjacent cells share a colour".into()));
    }
    Ok(arr)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MatchReport {
    /// `(cell id, index into the critical-point list)`.
    pub pairs: Vec<(usize, usize)>,
    pub black_to_minus_one: usize,
    pub white_to_eight: usize,
    pub violations: Vec<String>,
}

impl MatchReport {
    pub fn is_bijection(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Pair bounded cells with the non-zero critical points inside them.
pub fn match_cells_to_critical_points(arr: &Arrangement, points: &[CriticalPoint]) -> MatchReport {
    let mut report = MatchReport::default();
    let candidates: Vec<usize> = (0..points.len())
        .filter(|&i| points[i].value_class != ValueClass::Zero)
        .collect();
    let mut used = vec![0usize; points.len()];
    for cell in arr.bounded_cells() {
        let inside: Vec<usize> = candidates
            .iter()
            .copied()
            .filter(|&i| cell.contains([points[i].x, points[i].y], 0.0))
            .collect();
        if inside.len() != 1 {
            report.violations.push(format!(
                "bounded cell {} contains {} critical points",
                cell.id,
                inside.len()
            ));
            continue;
        }
        let i = inside[0];
        used[i] += 1;
        report.pairs.push((cell.id, i));
        match (cell.color, points[i].value_class) {
            (Some(Color::Black), ValueClass::MinusOne) => report.black_to_minus_one += 1,
            (Some(Color::White), ValueClass::Eight) => report.white_to_eight += 1,
            (color, class) => report.violations.push(format!(
                "cell {} coloured {:?} holds a point of class {}",
                cell.id, color, class
            )),
        }
    }
    for &i in &candidates {
        if used[i] != 1 {
            report.violations.push(format!(
                "critical point {} at ({}, {}) lies in {} bounded cells",
                i, points[i].x, points[i].y, used[i]
            ));
        }
    }
    report
}

/// Every vertex paired with the nearest value-0 critical point; returns
/// the largest such distance and whether the counts agree.
pub fn vertex_census(arr: &Arrangement, points: &[CriticalPoint]) -> (bool, f64) {
    let zeros: Vec<&CriticalPoint> = points
        .iter()
        .filter(|p| p.value_class == ValueClass::Zero)
        .collect();
    let worst = arr
        .vertices
        .iter()
        .map(|v| {
            zeros
                .iter()
                .map(|p| (p.x - v.point[0]).hypot(p.y - v.point[1]))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    (zeros.len() == arr.vertices.len(), worst)
}
