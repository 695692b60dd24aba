//! `nodalforge`: build folding polynomials and nodal surfaces, verify their counts.

mod config;
mod verify;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use nodalforge::arrangement::{self, build_arrangement, extract_lines, two_color, SvgOptions};
use nodalforge::bounds::{self, harborth_hypothetical, table_report};
use nodalforge::critpoints::{self, census, find_critical_points};
use nodalforge::poly::{chmutov_real, folding_complex, folding_real, tchebychev};
use nodalforge::surface::{self, enumerate_nodes_from};
use nodalforge::{Error, RationalPolynomial};

use config::{parse_formats, parse_seed_mode, Format, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "nodalforge", version, about = "Folding polynomials, line arrangements and nodal surfaces")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// `key = value` config file; flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Directory for artifacts [default: nodalforge-out]
    #[arg(long, global = true, value_name = "DIR")]
    out_dir: Option<PathBuf>,
    /// Artifact kinds to write, comma separated (json,csv,svg,md).
    #[arg(long, global = true, value_name = "LIST")]
    emit: Option<String>,
    /// Newton stopping tolerance on the gradient norm [default: 1e-10]
    #[arg(long, global = true)]
    tol_newton: Option<f64>,
    /// Radius below which critical points merge [default: 1e-6]
    #[arg(long, global = true)]
    dedupe_radius: Option<f64>,
    /// Allowed deviation of critical values from 0, -1, 8 [default: 1e-8]
    #[arg(long, global = true)]
    tol_value: Option<f64>,
    /// Allowed surface residual at a node [default: 1e-8]
    #[arg(long, global = true)]
    tol_residual: Option<f64>,
    /// lattice+grid or grid-only
    #[arg(long, global = true)]
    seed_mode: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PolyKind {
    Tcheb,
    Folding,
    FoldingReal,
    Chmutov,
}

impl PolyKind {
    fn stem(self) -> &'static str {
        match self {
            PolyKind::Tcheb => "tcheb",
            PolyKind::Folding => "folding",
            PolyKind::FoldingReal => "folding_real",
            PolyKind::Chmutov => "chmutov",
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableFormat {
    Md,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a polynomial and write it as JSON.
    Poly {
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, value_enum, default_value = "folding-real")]
        kind: PolyKind,
    },
    /// Critical points of the real folding polynomial.
    Crit {
        #[arg(long)]
        d: Option<usize>,
    },
    /// Line arrangement, cells and colouring.
    Arrange {
        #[arg(long)]
        d: Option<usize>,
    },
    /// Enumerate and certify the nodes of the surface.
    Nodes {
        #[arg(long)]
        d: Option<usize>,
    },
    /// Table of bounds for a degree range.
    Bounds {
        #[arg(long, default_value_t = 1)]
        from: usize,
        #[arg(long, default_value_t = 13)]
        to: usize,
        #[arg(long, value_enum, default_value = "md")]
        format: TableFormat,
    },
    /// Run every invariant for one degree; exit 0 iff all pass.
    Verify {
        #[arg(long)]
        d: Option<usize>,
    },
    /// Node count a hypothetical arrangement with `black` bounded black cells would give.
    WhatIf {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        black: i64,
    },
}

impl Command {
    fn degree(&self) -> Option<usize> {
        match self {
            Command::Poly { d, .. }
            | Command::Crit { d }
            | Command::Arrange { d }
            | Command::Nodes { d }
            | Command::Verify { d } => *d,
            _ => None,
        }
    }
}

/// Failures mapped to the documented exit codes.
enum Failure {
    Verification,
    Usage(anyhow::Error),
    Internal(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<Error>() {
            Some(Error::DegreeOutOfRange { .. }) => Failure::Usage(e),
            _ => Failure::Internal(e),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::from(anyhow::Error::from(e))
    }
}

fn build_config(g: &GlobalArgs, cmd: &Command) -> anyhow::Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &g.config {
        cfg.load_file(path)?;
    }
    let mut set = |key: &str, v: Option<String>| -> anyhow::Result<()> {
        match v {
            Some(v) => cfg.set(key, &v),
            None => Ok(()),
        }
    };
    set("tol_newton", g.tol_newton.map(|x| x.to_string()))?;
    set("dedupe_radius", g.dedupe_radius.map(|x| x.to_string()))?;
    set("tol_value", g.tol_value.map(|x| x.to_string()))?;
    set("tol_residual", g.tol_residual.map(|x| x.to_string()))?;
    set("d", cmd.degree().map(|d| d.to_string()))?;
    if let Some(dir) = &g.out_dir {
        cfg.output_dir = dir.clone();
    }
    if let Some(list) = &g.emit {
        cfg.formats = parse_formats(list)?;
    }
    if let Some(mode) = &g.seed_mode {
        cfg.seed_mode = parse_seed_mode(mode)?;
    }
    Ok(cfg)
}

fn degree(cfg: &RunConfig) -> anyhow::Result<usize> {
    cfg.degree
        .ok_or_else(|| anyhow::anyhow!("no degree given (use --d or `d = ...` in the config file)"))
}

struct Writer<'a> {
    cfg: &'a RunConfig,
}

impl Writer<'_> {
    fn write(&self, kind: Format, name: &str, contents: &str) -> anyhow::Result<()> {
        if !self.cfg.wants(kind) {
            return Ok(());
        }
        let dir = &self.cfg.output_dir;
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let path: PathBuf = Path::new(dir).join(name);
        fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))
    }
}

fn to_json(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values always serialize");
    s.push('\n');
    s
}

fn polynomial(kind: PolyKind, d: usize) -> nodalforge::Result<RationalPolynomial> {
    match kind {
        PolyKind::Tcheb => tchebychev(d),
        PolyKind::Folding => folding_complex(d),
        PolyKind::FoldingReal => folding_real(d),
        PolyKind::Chmutov => chmutov_real(d),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = build_config(&cli.global, &cli.command).map_err(Failure::Usage)?;
    let out = Writer { cfg: &cfg };
    match cli.command {
        Command::Poly { kind, .. } => {
            let d = degree(&cfg).map_err(Failure::Usage)?;
            let p = polynomial(kind, d)?;
            println!("{p}");
            out.write(Format::Json, &format!("{}_d{d}.json", kind.stem()), &p.to_json())?;
        }
        Command::Crit { .. } => {
            let d = degree(&cfg).map_err(Failure::Usage)?;
            let points = find_critical_points(d, &cfg.crit())?;
            let c = census(d, &points);
            println!("critical points {} (expected {})", points.len(), (d - 1) * (d - 1));
            println!("value 0: {}/{}", c.count_zero, c.expected_zero);
            println!("value -1: {}/{}", c.count_minus_one, c.expected_minus_one);
            println!("value 8: {}/{}", c.count_eight, c.expected_eight);
            out.write(Format::Csv, &format!("crit_d{d}.csv"), &critpoints::to_csv(&points))?;
            out.write(
                Format::Json,
                &format!("census_d{d}.json"),
                &to_json(&serde_json::to_value(&c).map_err(Error::from)?),
            )?;
            if !c.pass {
                return Err(Failure::Verification);
            }
        }
        Command::Arrange { .. } => {
            let d = degree(&cfg).map_err(Failure::Usage)?;
            let f = folding_real(d)?;
            let arr = two_color(build_arrangement(&extract_lines(d)?)?, &f)?;
            println!("lines {}", arr.lines.len());
            println!("vertices {}", arr.vertices.len());
            println!("cells {} bounded {}", arr.cells.len(), arr.bounded_count());
            println!("black {} bounded black {}", arr.black_count(), arr.bounded_black_count());
            out.write(Format::Json, &format!("cells_d{d}.json"), &arr.cells_json())?;
            if cfg.wants(Format::Svg) {
                let points = find_critical_points(d, &cfg.crit())?;
                let svg = arrangement::to_svg(&arr, &points, SvgOptions::default());
                out.write(Format::Svg, &format!("arrangement_d{d}.svg"), &svg)?;
            }
        }
        Command::Nodes { .. } => {
            let d = degree(&cfg).map_err(Failure::Usage)?;
            let points = find_critical_points(d, &cfg.crit())?;
            let nodes = enumerate_nodes_from(d, &points)?;
            let formula = bounds::node_count_formula(d);
            let conical = nodes.iter().filter(|n| n.signature.is_conical()).count();
            println!("nodes {}/{}", nodes.len(), formula);
            println!("conical {}/{}", conical, nodes.len());
            out.write(Format::Csv, &format!("nodes_d{d}.csv"), &surface::to_csv(&nodes))?;
            out.write(Format::Json, &format!("chmutov_d{d}.json"), &chmutov_real(d)?.to_json())?;
            if nodes.len() as i64 != formula || conical != nodes.len() {
                return Err(Failure::Verification);
            }
        }
        Command::Bounds { from, to, format } => {
            if from < 1 || to < from || to > bounds::TABLE_MAX_DEGREE {
                return Err(Failure::Usage(anyhow::anyhow!(
                    "degree range must satisfy 1 <= from <= to <= {}",
                    bounds::TABLE_MAX_DEGREE
                )));
            }
            let rows = table_report(from, to);
            let md = bounds::to_markdown(&rows);
            let csv = bounds::to_csv(&rows);
            match format {
                TableFormat::Md => print!("{md}"),
                TableFormat::Csv => print!("{csv}"),
            }
            out.write(Format::Md, &format!("bounds_{from}_{to}.md"), &md)?;
            out.write(Format::Csv, &format!("bounds_{from}_{to}.csv"), &csv)?;
        }
        Command::Verify { .. } => {
            let d = degree(&cfg).map_err(Failure::Usage)?;
            let outcome = verify::run(d, &cfg)?;
            for c in &outcome.checks {
                println!("{}", c.line());
            }
            if outcome.nodes.is_none() {
                println!("nodes skipped (d > {})", surface::MAX_DEGREE);
            }
            out.write(Format::Json, &format!("verify_d{d}.json"), &to_json(&outcome.report()))?;
            out.write(Format::Json, &format!("folding_real_d{d}.json"), &outcome.folding.to_json())?;
            out.write(Format::Csv, &format!("crit_d{d}.csv"), &critpoints::to_csv(&outcome.points))?;
            out.write(Format::Json, &format!("cells_d{d}.json"), &outcome.arrangement.cells_json())?;
            let svg = arrangement::to_svg(&outcome.arrangement, &outcome.points, SvgOptions::default());
            out.write(Format::Svg, &format!("arrangement_d{d}.svg"), &svg)?;
            if let Some(nodes) = &outcome.nodes {
                out.write(Format::Csv, &format!("nodes_d{d}.csv"), &surface::to_csv(nodes))?;
            }
            let failed = outcome.checks.iter().filter(|c| !c.pass).count();
            if failed == 0 {
                println!("verify d={d}: {} checks passed", outcome.checks.len());
            } else {
                println!("verify d={d}: {failed} of {} checks FAILED", outcome.checks.len());
                return Err(Failure::Verification);
            }
        }
        Command::WhatIf { d, black } => {
            if d < 1 || black < 0 {
                return Err(Failure::Usage(anyhow::anyhow!("need d >= 1 and black >= 0")));
            }
            println!("{}", harborth_hypothetical(d, black));
        }
    }
    Ok(())
}

fn init_threads() -> anyhow::Result<()> {
    let Ok(raw) = std::env::var("NODALFORGE_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .with_context(|| format!("NODALFORGE_THREADS must be a non-negative integer, got `{raw}`"))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
