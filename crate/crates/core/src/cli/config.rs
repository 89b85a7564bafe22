//! Run configuration: defaults, plain `key = value` files, and flag
//! overrides. Unknown keys are hard errors; silent typo tolerance here has
//! burned too many sweep-hours elsewhere.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::hamiltonians::{AnnealParams, Model};

/// Environment variable supplying the default worker count.
pub const WORKERS_ENV: &str = "CAVITY_ANNEAL_WORKERS";

/// Fully resolved configuration of one CLI invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: AnnealParams,
    /// Models to run where a command accepts several (ramp scans);
    /// `params.model` is always `models[0]`.
    pub models: Vec<Model>,
    pub out_dir: PathBuf,
    /// 0 delegates to the global worker pool.
    pub workers: usize,
    pub cadence: usize,
    pub plots: bool,
    pub grid_u: Vec<f64>,
    pub grid_v: Vec<f64>,
    pub tf_grid: Vec<f64>,
    pub nc_set: Vec<usize>,
    /// Spectrum levels including the ground row.
    pub levels: usize,
    /// Spectrum grid resolution in s.
    pub grid_points: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            params: AnnealParams::default(),
            models: vec![Model::Full],
            out_dir: PathBuf::from("out"),
            workers: 0,
            cadence: 100,
            plots: true,
            grid_u: range_grid(0.0, 1.0, 0.05),
            grid_v: range_grid(1.0, 1.2, 0.01),
            tf_grid: vec![100.0, 200.0, 400.0, 800.0, 1300.0, 2000.0],
            nc_set: vec![1, 2, 3],
            levels: 11,
            grid_points: 201,
        }
    }
}

/// Inclusive `a..=b` with uniform step.
pub fn range_grid(a: f64, b: f64, step: f64) -> Vec<f64> {
    let n = ((b - a) / step + 1e-9).floor() as usize + 1;
    (0..n).map(|i| a + i as f64 * step).collect()
}

fn parse_f64(key: &str, value: &str) -> Result<f64> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("key '{key}': '{value}' is not a number")))
}

fn parse_usize(key: &str, value: &str) -> Result<usize> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("key '{key}': '{value}' is not a non-negative integer")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "on" | "true" | "1" | "yes" => Ok(true),
        "off" | "false" | "0" | "no" => Ok(false),
        other => Err(Error::Config(format!(
            "key '{key}': expected on/off, got '{other}'"
        ))),
    }
}

/// `a:b:step` range or a comma-separated list.
pub fn parse_grid(key: &str, value: &str) -> Result<Vec<f64>> {
    if value.contains(':') {
        let parts: Vec<&str> = value.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Config(format!(
                "key '{key}': expected a:b:step, got '{value}'"
            )));
        }
        let a = parse_f64(key, parts[0])?;
        let b = parse_f64(key, parts[1])?;
        let step = parse_f64(key, parts[2])?;
        if step <= 0.0 || b < a {
            return Err(Error::Config(format!(
                "key '{key}': need a <= b and step > 0 in '{value}'"
            )));
        }
        Ok(range_grid(a, b, step))
    } else {
        value
            .split(',')
            .map(|v| parse_f64(key, v.trim()))
            .collect()
    }
}

fn parse_usize_list(key: &str, value: &str) -> Result<Vec<usize>> {
    value
        .split(',')
        .map(|v| parse_usize(key, v.trim()))
        .collect()
}

fn parse_models(value: &str) -> Result<Vec<Model>> {
    value.split(',').map(|m| m.trim().parse()).collect()
}

impl RunConfig {
    /// Defaults with the worker-count environment variable applied.
    pub fn from_env() -> Result<Self> {
        let mut config = Self::default();
        if let Ok(value) = std::env::var(WORKERS_ENV) {
            config.workers = parse_usize(WORKERS_ENV, value.trim())?;
        }
        Ok(config)
    }

    /// Apply one `key = value` assignment. Unknown keys are errors.
    pub fn apply_key(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "J" => self.params.hopping = parse_f64(key, value)?,
            "U" => self.params.onsite = parse_f64(key, value)?,
            "V" => self.params.impurity = parse_f64(key, value)?,
            "Jt" => self.params.pump_final = parse_f64(key, value)?,
            "Delta" => self.params.detuning = parse_f64(key, value)?,
            "kappa" => self.params.kappa = parse_f64(key, value)?,
            "nc" => self.params.photon_cutoff = parse_usize(key, value)?,
            "L" => self.params.sites = parse_usize(key, value)?,
            "N" => self.params.particles = parse_usize(key, value)?,
            "t_f" => self.params.t_final = parse_f64(key, value)?,
            "dt" => self.params.dt = parse_f64(key, value)?,
            "model" => {
                self.models = parse_models(value)?;
                self.params.model = self.models[0];
            }
            "out" => self.out_dir = PathBuf::from(value),
            "workers" => self.workers = parse_usize(key, value)?,
            "cadence" => self.cadence = parse_usize(key, value)?,
            "plots" => self.plots = parse_bool(key, value)?,
            "grid-U" => self.grid_u = parse_grid(key, value)?,
            "grid-V" => self.grid_v = parse_grid(key, value)?,
            "tf-grid" => self.tf_grid = parse_grid(key, value)?,
            "nc-set" => self.nc_set = parse_usize_list(key, value)?,
            "levels" => self.levels = parse_usize(key, value)?,
            "grid-points" => self.grid_points = parse_usize(key, value)?,
            other => {
                return Err(Error::Config(format!("unknown config key '{other}'")));
            }
        }
        Ok(())
    }

    /// Merge a config file; later lines override earlier ones.
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::Config(format!("cannot read config file {}: {e}", path.display()))
        })?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config(format!(
                    "{}:{}: expected 'key = value', got '{line}'",
                    path.display(),
                    lineno + 1
                )));
            };
            self.apply_key(key.trim(), value.trim())?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.models.is_empty() {
            return Err(Error::Config("no model selected".into()));
        }
        if self.cadence == 0 {
            return Err(Error::Config("cadence must be >= 1".into()));
        }
        if self.levels == 0 {
            return Err(Error::Config("levels must be >= 1".into()));
        }
        if self.grid_points < 2 {
            return Err(Error::Config("grid-points must be >= 2".into()));
        }
        if self.grid_u.is_empty() || self.grid_v.is_empty() {
            return Err(Error::Config("grids must be non-empty".into()));
        }
        if self.nc_set.is_empty() {
            return Err(Error::Config("nc-set must be non-empty".into()));
        }
        if self.tf_grid.is_empty()
            || self.tf_grid.iter().any(|&t| t <= 0.0)
            || self.tf_grid.windows(2).any(|w| w[1] <= w[0])
        {
            return Err(Error::Config(
                "tf-grid must be positive and strictly ascending".into(),
            ));
        }
        for &v in &self.grid_v {
            if v < 1.0 {
                return Err(Error::Config(format!("grid-V value {v} below 1")));
            }
        }
        Ok(())
    }

    /// Ordered `key = value` pairs covering every resolved setting. Writing
    /// them as `# `-prefixed header lines and stripping that prefix yields a
    /// config file that reproduces the run.
    pub fn provenance_entries(&self) -> Vec<(String, String)> {
        let p = &self.params;
        let float = |x: f64| format!("{x}");
        let list = |xs: &[f64]| {
            xs.iter()
                .map(|x| format!("{x}"))
                .collect::<Vec<_>>()
                .join(",")
        };
        vec![
            ("J".into(), float(p.hopping)),
            ("U".into(), float(p.onsite)),
            ("V".into(), float(p.impurity)),
            ("Jt".into(), float(p.pump_final)),
            ("Delta".into(), float(p.detuning)),
            ("kappa".into(), float(p.kappa)),
            ("nc".into(), p.photon_cutoff.to_string()),
            ("L".into(), p.sites.to_string()),
            ("N".into(), p.particles.to_string()),
            ("t_f".into(), float(p.t_final)),
            ("dt".into(), float(p.dt)),
            (
                "model".into(),
                self.models
                    .iter()
                    .map(|m| m.as_str())
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            ("out".into(), self.out_dir.display().to_string()),
            ("workers".into(), self.workers.to_string()),
            ("cadence".into(), self.cadence.to_string()),
            ("plots".into(), if self.plots { "on" } else { "off" }.into()),
            ("grid-U".into(), list(&self.grid_u)),
            ("grid-V".into(), list(&self.grid_v)),
            ("tf-grid".into(), list(&self.tf_grid)),
            (
                "nc-set".into(),
                self.nc_set
                    .iter()
                    .map(|n| n.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            ("levels".into(), self.levels.to_string()),
            ("grid-points".into(), self.grid_points.to_string()),
        ]
    }
}
