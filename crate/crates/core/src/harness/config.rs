//! Experiment configuration from `key = value` files and command-line flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::ring::CostMode;

/// Flat `key = value` settings. Keys are normalised to kebab case so
/// `alpha_grid` and `alpha-grid` name the same setting.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

fn normalize_key(key: &str) -> String {
    key.trim().replace('_', "-")
}

impl Settings {
    pub fn new() -> Self {
        Settings::default()
    }

    /// Parses `key = value` lines; blank lines and lines starting with `#`
    /// are skipped. Later keys replace earlier ones.
    pub fn parse(text: &str) -> Result<Self> {
        let mut settings = Settings::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`, got `{line}`", lineno + 1)))?;
            if key.trim().is_empty() {
                return Err(Error::Config(format!("line {}: empty key", lineno + 1)));
            }
            settings.set(key, value.trim());
        }
        Ok(settings)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        Settings::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.values.insert(normalize_key(key), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(&normalize_key(key)).map(String::as_str)
    }

    /// Overlays `other` on top of `self`.
    pub fn merge(&mut self, other: &Settings) {
        for (k, v) in &other.values {
            self.values.insert(k.clone(), v.clone());
        }
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }

    pub fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|e| Error::Config(format!("invalid value `{raw}` for `{key}`: {e}"))),
        }
    }

    pub fn require<T: std::str::FromStr>(&self, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        self.parsed(key)?
            .ok_or_else(|| Error::Config(format!("missing required setting `{key}`")))
    }
}

/// Parses `a:b:step` (inclusive of `b`) or a comma-separated list.
pub fn parse_alpha_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = |why: &str| Error::Config(format!("invalid alpha grid `{spec}`: {why}"));
    let grid: Vec<f64> = if spec.contains(':') {
        let parts: Vec<f64> = spec
            .split(':')
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad("expected numbers")))
            .collect::<Result<_>>()?;
        let [start, end, step] = parts[..] else {
            return Err(bad("expected start:end:step"));
        };
        if !(step > 0.0) || end < start {
            return Err(bad("need step > 0 and end >= start"));
        }
        let count = ((end - start) / step + 1e-9).floor() as usize;
        (0..=count)
            .map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12)
            .collect()
    } else {
        spec.split(',')
            .filter(|p| !p.trim().is_empty())
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad("expected numbers")))
            .collect::<Result<_>>()?
    };
    if grid.is_empty() {
        return Err(bad("empty"));
    }
    if let Some(a) = grid.iter().find(|a| !(0.0..1.0).contains(*a)) {
        return Err(bad(&format!("{a} is outside [0, 1)")));
    }
    Ok(grid)
}

/// Parses a comma-separated list of ring sizes.
pub fn parse_n_list(spec: &str) -> Result<Vec<usize>> {
    let list: Vec<usize> = spec
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| Error::Config(format!("invalid ring size `{p}` in `{spec}`")))
        })
        .collect::<Result<_>>()?;
    if list.is_empty() {
        return Err(Error::Config("empty n list".into()));
    }
    if let Some(n) = list.iter().find(|&&n| n < 2) {
        return Err(Error::Config(format!("ring size {n} is below 2")));
    }
    Ok(list)
}

/// A simulation experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub name: String,
    pub n: usize,
    pub reps: usize,
    pub mode: CostMode,
    pub master_seed: u64,
    /// Drops per trajectory; `n - 1` fills the ring.
    pub drops: usize,
    pub alpha_grid: Vec<f64>,
    pub out: Option<PathBuf>,
    pub alpha_out: Option<PathBuf>,
    pub moments_out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(n: usize, reps: usize, mode: CostMode, master_seed: u64) -> Result<Self> {
        let config = ExperimentConfig {
            name: "experiment".into(),
            n,
            reps,
            mode,
            master_seed,
            drops: n.saturating_sub(1),
            alpha_grid: Vec::new(),
            out: None,
            alpha_out: None,
            moments_out: None,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_alpha_grid(mut self, grid: Vec<f64>) -> Result<Self> {
        self.alpha_grid = grid;
        self.validate()?;
        Ok(self)
    }

    pub fn with_drops(mut self, drops: usize) -> Result<Self> {
        self.drops = drops;
        self.validate()?;
        Ok(self)
    }

    /// Builds a configuration from settings with keys `name`, `n`, `reps`,
    /// `mode`, `seed`, `m`, `alpha-grid`, `out`, `alpha-out`, `moments-out`.
    pub fn from_settings(settings: &Settings) -> Result<Self> {
        let n: usize = settings.require("n")?;
        let reps: usize = settings.require("reps")?;
        let mode: CostMode = settings.parsed("mode")?.unwrap_or(CostMode::ExactWalk);
        let seed: u64 = settings.require("seed")?;
        let drops = settings.parsed("m")?.unwrap_or(n.saturating_sub(1));
        let alpha_grid = match settings.get("alpha-grid") {
            Some(spec) => parse_alpha_grid(spec)?,
            None => Vec::new(),
        };
        let config = ExperimentConfig {
            name: settings.get("name").unwrap_or("experiment").to_string(),
            n,
            reps,
            mode,
            master_seed: seed,
            drops,
            alpha_grid,
            out: settings.get("out").map(PathBuf::from),
            alpha_out: settings.get("alpha-out").map(PathBuf::from),
            moments_out: settings.get("moments-out").map(PathBuf::from),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Config(format!("n must be at least 2, got {}", self.n)));
        }
        if self.reps == 0 {
            return Err(Error::Config("reps must be at least 1".into()));
        }
        if self.drops == 0 || self.drops > self.n - 1 {
            return Err(Error::Config(format!("m must lie in 1..={}, got {}", self.n - 1, self.drops)));
        }
        if let Some(a) = self.alpha_grid.iter().find(|a| !(0.0..1.0).contains(*a)) {
            return Err(Error::Config(format!("alpha {a} is outside [0, 1)")));
        }
        Ok(())
    }
}
