//! Acceptance suite. Prints one PASS/FAIL line per criterion, then fails if any did.

use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use nodalforge::arrangement::{
    build_arrangement, extract_lines, match_cells_to_critical_points, product_residual,
    sample_points, two_color,
};
use nodalforge::bounds::{
    harborth_hypothetical, minus_one_count, mu_upper, node_count_formula, pairs,
    upper_row_mismatches,
};
use nodalforge::critpoints::{census, find_critical_points, CritConfig, ValueClass};
use nodalforge::poly::folding_real;
use nodalforge::surface::enumerate_nodes;
use nodalforge::trig::{eval_g, h1, TrigPoint};
use nodalforge::FloatPolynomial64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run_verify(d: usize, dir: &Path) -> Result<String, String> {
    let o = Command::new(env!("CARGO_BIN_EXE_nodalforge"))
        .args(["verify", "--d", &d.to_string(), "--out-dir"])
        .arg(dir)
        .output()
        .map_err(|e| e.to_string())?;
    let text = String::from_utf8_lossy(&o.stdout).into_owned();
    ensure(o.status.success(), || format!("verify --d {d} exited {:?}:\n{text}", o.status.code()))?;
    Ok(text)
}

fn node_counts() -> Outcome {
    let mut worst = Duration::ZERO;
    for d in 2..=12 {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let t = Instant::now();
        let text = run_verify(d, dir.path())?;
        let elapsed = t.elapsed();
        worst = worst.max(elapsed);
        let want = format!("nodes {0}/{0}", node_count_formula(d));
        ensure(text.lines().any(|l| l == want), || format!("d = {d}: no line `{want}`"))?;
        ensure(elapsed <= Duration::from_secs(60), || format!("d = {d} took {elapsed:?}"))?;
    }
    Ok(format!(
        "d=9 -> {}, d=11 -> {}, slowest {worst:.2?}",
        node_count_formula(9),
        node_count_formula(11)
    ))
}

fn critical_census() -> Outcome {
    let cfg = CritConfig::default();
    let mut worst = 0.0_f64;
    let mut nine = None;
    for d in 2..=12 {
        let pts = find_critical_points(d, &cfg).map_err(|e| e.to_string())?;
        let c = census(d, &pts);
        ensure(c.pass, || format!("d = {d}: {c:?}"))?;
        ensure(c.count_zero == pairs(d) && c.count_minus_one == minus_one_count(d), || {
            format!("d = {d}: {c:?}")
        })?;
        for p in &pts {
            let dist = [0.0, -1.0, 8.0].iter().map(|v| (p.value - v).abs()).fold(f64::MAX, f64::min);
            worst = worst.max(dist);
        }
        if d == 9 {
            nine = Some((c.count_zero, c.count_minus_one, c.count_eight));
        }
    }
    ensure(worst < 1e-8, || format!("critical value off by {worst:e}"))?;
    ensure(nine == Some((36, 18, 10)), || format!("d = 9 gave {nine:?}"))?;
    Ok(format!("d=9 -> (36, 18, 10), worst value error {worst:.1e}"))
}

fn g_identity() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let samples: Vec<TrigPoint<f64>> =
        (0..1000).map(|_| TrigPoint::new(rng.gen(), rng.gen())).collect();
    let mut worst = 0.0_f64;
    for d in 1..=15 {
        let f = FloatPolynomial64::new(&folding_real(d).map_err(|e| e.to_string())?);
        let scale = f.max_coefficient().max(1.0);
        for &p in &samples {
            let (x, y) = h1(p);
            let err = (f.eval(&[x, y]).map_err(|e| e.to_string())? - eval_g(d, p)).abs() / scale;
            worst = worst.max(err);
        }
    }
    let elapsed = t.elapsed();
    ensure(worst < 1e-8, || format!("scaled error {worst:e}"))?;
    ensure(elapsed <= Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("max scaled error {worst:.1e} in {elapsed:.2?}"))
}

fn arrangements() -> Outcome {
    let cfg = CritConfig::default();
    let samples = sample_points(200, -3.0, 3.0);
    let mut worst_residual = 0.0_f64;
    let mut slowest = Duration::ZERO;
    for d in 2..=12 {
        let t = Instant::now();
        let err = |e: nodalforge::Error| format!("d = {d}: {e}");
        let f = folding_real(d).map_err(err)?;
        let lines = extract_lines(d).map_err(err)?;
        ensure(lines.len() == d, || format!("d = {d}: {} lines", lines.len()))?;
        let (_, residual) = product_residual(&f, &lines, &samples);
        ensure(residual < 1e-7, || format!("d = {d}: product residual {residual:e}"))?;
        worst_residual = worst_residual.max(residual);
        let arr = two_color(build_arrangement(&lines).map_err(err)?, &f).map_err(err)?;
        ensure(arr.bounded_count() as i64 == pairs(d - 1), || {
            format!("d = {d}: {} bounded cells", arr.bounded_count())
        })?;
        ensure(arr.bounded_black_count() as i64 == minus_one_count(d), || {
            format!("d = {d}: {} bounded black cells", arr.bounded_black_count())
        })?;
        let pts = find_critical_points(d, &cfg).map_err(err)?;
        let report = match_cells_to_critical_points(&arr, &pts);
        ensure(report.is_bijection(), || format!("d = {d}: {:?}", report.violations))?;
        let elapsed = t.elapsed();
        ensure(elapsed <= Duration::from_secs(30), || format!("d = {d} took {elapsed:?}"))?;
        slowest = slowest.max(elapsed);
    }
    Ok(format!("worst product residual {worst_residual:.1e}, slowest {slowest:.2?}"))
}

fn cross_identity() -> Outcome {
    let t = Instant::now();
    for d in 1..=500usize {
        let want = pairs(d) * (d as i64 / 2) + minus_one_count(d) * ((d as i64 - 1) / 2);
        ensure(node_count_formula(d) == want, || {
            format!("d = {d}: {} != {want}", node_count_formula(d))
        })?;
    }
    let elapsed = t.elapsed();
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("d = 1..500 in {elapsed:.2?}"))
}

fn what_if() -> Outcome {
    let got = [harborth_hypothetical(13, 47), harborth_hypothetical(9, 21), harborth_hypothetical(7, 11)];
    ensure(got == [750, 228, 96], || format!("{got:?}"))?;
    Ok("750, 228, 96".into())
}

fn bound_rows() -> Outcome {
    let got: Vec<i64> = [4, 8, 10, 12, 13].iter().map(|&d| mu_upper(d)).collect();
    ensure(got == [16, 174, 360, 645, 832], || format!("{got:?}"))?;
    let listed: Vec<String> = upper_row_mismatches()
        .iter()
        .map(|(d, ours, theirs)| format!("d={d}:{ours}/{theirs}"))
        .collect();
    Ok(format!("16, 174, 360, 645, 832; differing rows {}", listed.join(" ")))
}

fn conical() -> Outcome {
    let mut total = 0;
    let mut worst = 0.0_f64;
    for d in 2..=12 {
        let nodes = enumerate_nodes(d, &CritConfig::default()).map_err(|e| format!("d = {d}: {e}"))?;
        for n in &nodes {
            ensure(n.signature.is_conical(), || format!("d = {d}: {n:?}"))?;
            ensure(n.surface_residual.abs() < 1e-8, || format!("d = {d}: {n:?}"))?;
            worst = worst.max(n.surface_residual.abs());
        }
        total += nodes.len();
    }
    Ok(format!("{total} nodes, worst residual {worst:.1e}"))
}

fn determinism() -> Outcome {
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    run_verify(9, a.path())?;
    run_verify(9, b.path())?;
    let mut names: Vec<_> = fs::read_dir(a.path())
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    ensure(!names.is_empty(), || "no artifacts".into())?;
    for name in &names {
        let x = fs::read(a.path().join(name)).map_err(|e| e.to_string())?;
        let y = fs::read(b.path().join(name)).map_err(|e| format!("{name:?}: {e}"))?;
        ensure(x == y, || format!("{name:?} differs"))?;
    }
    Ok(format!("{} artifacts identical", names.len()))
}

#[test]
fn acceptance() {
    // sanity on the class tolerance used by the census criterion
    assert_eq!(ValueClass::classify(-1.0 + 5e-9, 1e-8), Some(ValueClass::MinusOne));
    let criteria: [Criterion; 9] = [
        ("node-count reproduction", node_counts),
        ("critical-point census", critical_census),
        ("G-identity", g_identity),
        ("arrangement certification", arrangements),
        ("formula cross-identity", cross_identity),
        ("what-if reproduction", what_if),
        ("bound rows", bound_rows),
        ("conical certification", conical),
        ("determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                println!("FAIL {} {name}: {why}", i + 1);
                failed.push(*name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
