//! Run configuration: defaults, then a `key = value` file, then flags.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use nodalforge::critpoints::{CritConfig, SeedMode};
use nodalforge::surface::RESIDUAL_TOL;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Format {
    Json,
    Csv,
    Svg,
    Md,
}

impl Format {
    pub fn parse(s: &str) -> anyhow::Result<Self> {
        Ok(match s.trim() {
            "json" => Format::Json,
            "csv" => Format::Csv,
            "svg" => Format::Svg,
            "md" => Format::Md,
            other => bail!("unknown format `{other}` (expected json, csv, svg or md)"),
        })
    }
}

pub fn parse_formats(s: &str) -> anyhow::Result<BTreeSet<Format>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(Format::parse)
        .collect()
}

pub fn parse_seed_mode(s: &str) -> anyhow::Result<SeedMode> {
    Ok(match s.trim() {
        "lattice+grid" | "lattice-and-grid" => SeedMode::LatticeAndGrid,
        "grid-only" | "grid" => SeedMode::GridOnly,
        other => bail!("unknown seed mode `{other}` (expected lattice+grid or grid-only)"),
    })
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub degree: Option<usize>,
    pub newton_tol: f64,
    pub dedupe_radius: f64,
    pub value_tol: f64,
    pub residual_tol: f64,
    pub output_dir: PathBuf,
    pub formats: BTreeSet<Format>,
    pub seed_mode: SeedMode,
}

impl Default for RunConfig {
    fn default() -> Self {
        let crit = CritConfig::default();
        Self {
            degree: None,
            newton_tol: crit.newton_tol,
            dedupe_radius: crit.dedupe_radius,
            value_tol: crit.value_tol,
            residual_tol: RESIDUAL_TOL,
            output_dir: PathBuf::from("nodalforge-out"),
            formats: [Format::Json, Format::Csv, Format::Svg, Format::Md].into_iter().collect(),
            seed_mode: crit.seed_mode,
        }
    }
}

fn positive(key: &str, value: &str) -> anyhow::Result<f64> {
    let x: f64 = value
        .trim()
        .parse()
        .with_context(|| format!("`{key}` expects a number, got `{value}`"))?;
    if !(x > 0.0 && x.is_finite()) {
        bail!("`{key}` must be positive and finite, got {x}");
    }
    Ok(x)
}

impl RunConfig {
    /// Apply one `key = value` setting. Keys accept `-` or `_`.
    pub fn set(&mut self, key: &str, value: &str) -> anyhow::Result<()> {
        let key = key.trim().replace('-', "_");
        match key.as_str() {
            "d" | "degree" => {
                self.degree = Some(value.trim().parse().with_context(|| format!("bad degree `{value}`"))?)
            }
            "tol_newton" | "newton_tol" => self.newton_tol = positive(&key, value)?,
            "dedupe_radius" => self.dedupe_radius = positive(&key, value)?,
            "tol_value" | "value_tol" => self.value_tol = positive(&key, value)?,
            "tol_residual" | "residual_tol" => self.residual_tol = positive(&key, value)?,
            "out_dir" | "output_dir" => self.output_dir = PathBuf::from(value.trim()),
            "emit" | "formats" => self.formats = parse_formats(value)?,
            "seed_mode" => self.seed_mode = parse_seed_mode(value)?,
            _ => bail!("unknown config key `{key}`"),
        }
        Ok(())
    }

    pub fn load_file(&mut self, path: &Path) -> anyhow::Result<()> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        self.apply_text(&text)
            .with_context(|| format!("in config file {}", path.display()))
    }

    pub fn apply_text(&mut self, text: &str) -> anyhow::Result<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                bail!("line {}: expected `key = value`", n + 1);
            };
            self.set(k, v).with_context(|| format!("line {}", n + 1))?;
        }
        Ok(())
    }

    pub fn crit(&self) -> CritConfig {
        CritConfig {
            newton_tol: self.newton_tol,
            dedupe_radius: self.dedupe_radius,
            value_tol: self.value_tol,
            seed_mode: self.seed_mode,
            ..CritConfig::default()
        }
    }

    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_override() {
        let mut c = RunConfig::default();
        c.apply_text("# run\nd = 7\ntol-newton = 1e-11\nemit = csv, json\nseed_mode = grid-only\n")
            .unwrap();
        assert_eq!(c.degree, Some(7));
        assert_eq!(c.newton_tol, 1e-11);
        assert!(c.wants(Format::Csv) && !c.wants(Format::Svg));
        assert_eq!(c.seed_mode, SeedMode::GridOnly);
        c.set("d", "9").unwrap();
        assert_eq!(c.degree, Some(9));
    }

    #[test]
    fn rejects_bad_values() {
        let mut c = RunConfig::default();
        assert!(c.set("tol_value", "-1").is_err());
        assert!(c.set("tol_value", "nan").is_err());
        assert!(c.set("colour", "1").is_err());
        assert!(c.apply_text("d 5").is_err());
        assert!(parse_formats("json,png").is_err());
    }
}
