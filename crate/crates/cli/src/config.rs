//! Run configuration: defaults, then a `key = value` file, then
//! `BIALG_PRECISION`, then command-line flags.

use std::path::Path;

use anyhow::{bail, Context, Result};
use bialg_core::verify::{FitTolerances, VerifyCfg};
use bialg_core::weierstrass::PrecisionCfg;
use serde::Serialize;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub precision: u32,
    pub max_deg: usize,
    pub samples: usize,
    pub height_bound: i64,
    pub seed: u64,
    pub window: f64,
    pub snap_height: i64,
    pub tol: FitTolerances,
    #[serde(skip)]
    pub format: Option<Format>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let v = VerifyCfg::default();
        RunConfig {
            precision: v.precision.digits,
            max_deg: v.max_deg,
            samples: v.n,
            height_bound: 5,
            seed: v.seed,
            window: v.window,
            snap_height: v.snap_height,
            tol: v.tol,
            format: None,
        }
    }
}

/// Values given on the command line; `None` means "not given".
#[derive(Clone, Debug, Default, clap::Args)]
pub struct Overrides {
    /// `key = value` configuration file
    #[arg(long, global = true)]
    pub config: Option<std::path::PathBuf>,
    /// Decimal working precision (also BIALG_PRECISION)
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    #[arg(long, global = true)]
    pub max_deg: Option<usize>,
    /// Number of sampled points
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Height bound for CM line directions
    #[arg(long, global = true)]
    pub height_bound: Option<i64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Half-length of the sampling window in units of |ω₁| + |ω₂|
    #[arg(long, global = true)]
    pub window: Option<f64>,
    /// Height bound for snapping fitted coefficients to integers
    #[arg(long, global = true)]
    pub snap_height: Option<i64>,
    /// Singular-value ratio below which a relation is accepted
    #[arg(long, global = true)]
    pub tol_low: Option<f64>,
    /// Singular-value ratio above which no relation is declared
    #[arg(long, global = true)]
    pub tol_high: Option<f64>,
    /// Largest accepted residual on held-out points
    #[arg(long, global = true)]
    pub tol_hold: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn load(o: &Overrides, env_precision: Option<&str>) -> Result<Self> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &o.config {
            cfg.apply_file(path)?;
        }
        if let Some(p) = env_precision {
            cfg.set("precision", p).context("BIALG_PRECISION")?;
        }
        macro_rules! flag {
            ($field:ident) => {
                if let Some(v) = o.$field {
                    cfg.$field = v;
                }
            };
        }
        flag!(precision);
        flag!(max_deg);
        flag!(samples);
        flag!(height_bound);
        flag!(seed);
        flag!(window);
        flag!(snap_height);
        if let Some(v) = o.tol_low {
            cfg.tol.low = v;
        }
        if let Some(v) = o.tol_high {
            cfg.tol.high = v;
        }
        if let Some(v) = o.tol_hold {
            cfg.tol.hold = v;
        }
        if o.format.is_some() {
            cfg.format = o.format;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                bail!("{}:{}: expected key = value", path.display(), i + 1);
            };
            let v = v.trim().trim_matches('"');
            self.set(k.trim(), v).with_context(|| format!("{}:{}", path.display(), i + 1))?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, v: &str) -> Result<()> {
        fn p<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse().map_err(|_| anyhow::anyhow!("invalid value {v:?} for {key}"))
        }
        match key {
            "precision" => self.precision = p(key, v)?,
            "max_deg" => self.max_deg = p(key, v)?,
            "samples" => self.samples = p(key, v)?,
            "height_bound" => self.height_bound = p(key, v)?,
            "seed" => self.seed = p(key, v)?,
            "window" => self.window = p(key, v)?,
            "snap_height" => self.snap_height = p(key, v)?,
            "tol_low" => self.tol.low = p(key, v)?,
            "tol_high" => self.tol.high = p(key, v)?,
            "tol_hold" => self.tol.hold = p(key, v)?,
            "format" => {
                self.format = Some(match v {
                    "json" => Format::Json,
                    "csv" => Format::Csv,
                    _ => bail!("invalid value {v:?} for format"),
                })
            }
            _ => bail!("unknown configuration key {key:?}"),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.precision < 15 {
            bail!("precision must be at least 15 digits, got {}", self.precision);
        }
        if self.max_deg == 0 || self.samples == 0 || self.height_bound <= 0 || self.snap_height <= 0 {
            bail!("max_deg, samples, height_bound and snap_height must be positive");
        }
        let t = &self.tol;
        if !(self.window > 0.0 && t.low > 0.0 && t.high > 0.0 && t.hold > 0.0) {
            bail!("window and tolerances must be positive");
        }
        if t.low >= t.high {
            bail!("tol_low must be below tol_high");
        }
        Ok(())
    }

    pub fn precision_cfg(&self) -> PrecisionCfg {
        PrecisionCfg::with_digits(self.precision)
    }

    pub fn verify_cfg(&self) -> VerifyCfg {
        VerifyCfg {
            precision: self.precision_cfg(),
            n: self.samples,
            max_deg: self.max_deg,
            tol: self.tol,
            seed: self.seed,
            snap_height: self.snap_height,
            window: self.window,
            ..VerifyCfg::default()
        }
    }
}
