use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::ValueEnum;
use hillspec::euler::EulerConfig;
use hillspec::evans::EvansConfig;
use hillspec::hill::DiscriminantConfig;
use hillspec::monodromy::MonodromyConfig;
use serde::{Deserialize, Serialize};

/// Points at a JSON file whose fields override the built-in defaults.
pub const DEFAULTS_ENV: &str = "HILLSPEC_DEFAULTS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub half_width: usize,
    pub tail_cutoff: usize,
    pub integrator_tol: f64,
    pub root_tol: f64,
    pub c_max: f64,
    pub normalize: bool,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let d = DiscriminantConfig::default();
        let e = EvansConfig::default();
        Self {
            half_width: d.half_width,
            tail_cutoff: d.tail_cutoff,
            integrator_tol: MonodromyConfig::default().tol,
            root_tol: e.root_tol,
            c_max: e.c_max,
            normalize: false,
            output: None,
            format: None,
        }
    }
}

/// Command-line overrides; `None` keeps the value from the defaults file.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct Overrides {
    /// Hill matrix half-width N.
    #[arg(long, global = true)]
    pub half_width: Option<usize>,
    /// Upper index of the explicit tail product.
    #[arg(long, global = true)]
    pub tail_cutoff: Option<usize>,
    /// Monodromy integrator tolerance.
    #[arg(long, global = true)]
    pub integrator_tol: Option<f64>,
    /// Newton stopping tolerance on |E|.
    #[arg(long, global = true)]
    pub root_tol: Option<f64>,
    /// Half-size of the root search box in the c-plane.
    #[arg(long, global = true)]
    pub c_max: Option<f64>,
    /// Divide Evans factors by their modulus at infinity.
    #[arg(long, global = true)]
    pub normalize: bool,
    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn load(path: Option<&Path>, ov: &Overrides) -> anyhow::Result<Self> {
        let mut cfg = match path {
            Some(p) => {
                let text =
                    std::fs::read_to_string(p).with_context(|| format!("reading defaults file {}", p.display()))?;
                serde_json::from_str(&text).with_context(|| format!("parsing defaults file {}", p.display()))?
            }
            None => RunConfig::default(),
        };
        if let Some(v) = ov.half_width {
            cfg.half_width = v;
        }
        if let Some(v) = ov.tail_cutoff {
            cfg.tail_cutoff = v;
        }
        if let Some(v) = ov.integrator_tol {
            cfg.integrator_tol = v;
        }
        if let Some(v) = ov.root_tol {
            cfg.root_tol = v;
        }
        if let Some(v) = ov.c_max {
            cfg.c_max = v;
        }
        cfg.normalize |= ov.normalize;
        if ov.output.is_some() {
            cfg.output = ov.output.clone();
        }
        if ov.format.is_some() {
            cfg.format = ov.format;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.half_width < 1 {
            bail!("half-width must be at least 1");
        }
        for (name, v) in [("integrator-tol", self.integrator_tol), ("root-tol", self.root_tol), ("c-max", self.c_max)] {
            if !(v > 0.0 && v.is_finite()) {
                bail!("{name} must be positive, got {v}");
            }
        }
        self.disc().validate()?;
        Ok(())
    }

    pub fn disc(&self) -> DiscriminantConfig {
        DiscriminantConfig {
            half_width: self.half_width,
            tail_cutoff: self.tail_cutoff,
            max_half_width: DiscriminantConfig::default().max_half_width.max(self.half_width),
            ..DiscriminantConfig::default()
        }
    }

    pub fn evans(&self) -> EvansConfig {
        let base = EvansConfig::default();
        EvansConfig {
            disc: DiscriminantConfig { adapt_tol: base.disc.adapt_tol, ..self.disc() },
            c_max: self.c_max,
            root_tol: self.root_tol,
            ..base
        }
    }

    pub fn monodromy(&self) -> MonodromyConfig {
        MonodromyConfig::with_tol(self.integrator_tol)
    }

    pub fn euler(&self, count_only: bool) -> EulerConfig {
        EulerConfig { evans: EvansConfig { refine: !count_only, ..self.evans() }, normalize: self.normalize }
    }

    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}
