//! Closed-form counts and bounds: critical-point census formulas, node
//! counts of the real Chmutov surfaces, the two-colouring bound on black
//! cells, and the rows of the bounds table.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

fn floor_ratio(num: i64, den: i64) -> i64 {
    Ratio::new(num, den).floor().to_integer()
}

/// `C(n, 2)`.
pub fn pairs(n: usize) -> i64 {
    let n = n as i64;
    n * (n - 1) / 2
}

/// Number of critical points with value `-1` of the degree-`d` real folding
/// polynomial: `d²/3 - d` when `3 | d`, otherwise `d²/3 - d + 2/3`.
pub fn minus_one_count(d: usize) -> i64 {
    let d = d as i64;
    if d % 3 == 0 {
        (d * d - 3 * d) / 3
    } else {
        (d * d - 3 * d + 2) / 3
    }
}

/// Remaining critical points (value `8`): `(d-1)² - C(d,2) - N₋₁(d)`.
pub fn eight_count(d: usize) -> i64 {
    let m = d as i64 - 1;
    m * m - pairs(d) - minus_one_count(d)
}

/// Critical points of the degree-`d` Tchebychev polynomial with value `-1`
/// and `+1` respectively: `⌈(d-1)/2⌉` and `⌊(d-1)/2⌋`.
pub fn tchebychev_level_counts(d: usize) -> (i64, i64) {
    let m = d.saturating_sub(1) as i64;
    ((m + 1) / 2, m / 2)
}

/// Real nodes of the degree-`d` Chmutov-type surface, four branches by `d mod 6`.
pub fn node_count_formula(d: usize) -> i64 {
    let d = d as i64;
    let (d2, d3) = (d * d, d * d * d);
    let num = match d % 6 {
        0 => 5 * d3 - 13 * d2 + 12 * d,
        2 | 4 => 5 * d3 - 13 * d2 + 16 * d - 8,
        1 | 5 => 5 * d3 - 14 * d2 + 13 * d - 4,
        _ => 5 * d3 - 14 * d2 + 9 * d,
    };
    debug_assert_eq!(num % 12, 0);
    num / 12
}

/// `⌊4/9 · d (d-1)²⌋`.
pub fn mu_upper(d: usize) -> i64 {
    let d = d as i64;
    floor_ratio(4 * d * (d - 1) * (d - 1), 9)
}

/// Upper bound on black cells of a simple arrangement of `d` lines:
/// `⌊d²/3 + d/3⌋` for odd `d`, `⌊d²/3 + d/6⌋` for even `d`.
pub fn harborth_bound(d: usize) -> i64 {
    let d = d as i64;
    if d % 2 == 1 {
        floor_ratio(d * d + d, 3)
    } else {
        floor_ratio(2 * d * d + d, 6)
    }
}

/// Maximum number of critical points on two levels: `C(d,2) + M_b(d) - d`.
pub fn two_level_bound(d: usize) -> i64 {
    pairs(d) + harborth_bound(d) - d as i64
}

/// Node count of a surface built from an arrangement with `black_bounded`
/// bounded black cells, if all its negative critical values coincided.
pub fn harborth_hypothetical(d: usize, black_bounded: i64) -> i64 {
    let (minus, plus) = tchebychev_level_counts(d);
    pairs(d) * minus + black_bounded * plus
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsRow {
    pub d: usize,
    pub mu_upper_formula: i64,
    pub chm_lower: i64,
    pub harborth_bound: i64,
    pub two_level_bound: i64,
    pub asymptotic_ratio: f64,
}

pub const TABLE_MAX_DEGREE: usize = 500;

pub fn table_row(d: usize) -> BoundsRow {
    let chm = node_count_formula(d);
    BoundsRow {
        d,
        mu_upper_formula: mu_upper(d),
        chm_lower: chm,
        harborth_bound: harborth_bound(d),
        two_level_bound: two_level_bound(d),
        asymptotic_ratio: chm as f64 / (d as f64).powi(3),
    }
}

/// Rows for `d_min..=d_max`, clamped to `1..=500`.
pub fn table_report(d_min: usize, d_max: usize) -> Vec<BoundsRow> {
    let lo = d_min.max(1);
    let hi = d_max.min(TABLE_MAX_DEGREE);
    (lo..=hi).map(table_row).collect()
}

/// Published upper-bound row for degrees 1..=13, for comparison only.
pub const PUBLISHED_UPPER: [i64; 13] = [0, 1, 4, 16, 31, 65, 104, 174, 246, 360, 480, 645, 832];
/// Published lower-bound row for degrees 1..=13, for comparison only.
pub const PUBLISHED_LOWER: [i64; 13] = [0, 1, 4, 16, 31, 65, 99, 168, 216, 345, 425, 600, 732];

/// Degree, formula value and published value wherever `⌊4/9·d(d-1)²⌋`
/// differs from the published upper-bound row.
pub fn upper_row_mismatches() -> Vec<(usize, i64, i64)> {
    PUBLISHED_UPPER
        .iter()
        .enumerate()
        .map(|(i, &p)| (i + 1, mu_upper(i + 1), p))
        .filter(|(_, f, p)| f != p)
        .collect()
}

pub const CSV_HEADER: &str =
    "d,mu_upper_formula,chm_lower,harborth_bound,two_level_bound,asymptotic_ratio";

pub fn to_csv(rows: &[BoundsRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{:.17e}\n",
            r.d, r.mu_upper_formula, r.chm_lower, r.harborth_bound, r.two_level_bound, r.asymptotic_ratio
        ));
    }
    out
}

pub fn to_markdown(rows: &[BoundsRow]) -> String {
    let mut out = String::from(
        "| d | mu_upper_formula | chm_lower | harborth_bound | two_level_bound | asymptotic_ratio |\n",
    );
    out.push_str("|---:|---:|---:|---:|---:|---:|\n");
    for r in rows {
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} | {:.6} |\n",
            r.d, r.mu_upper_formula, r.chm_lower, r.harborth_bound, r.two_level_bound, r.asymptotic_ratio
        ));
    }
    out
}
