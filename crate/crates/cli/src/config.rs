//! The run configuration document.

use std::fmt;
use std::path::{Path, PathBuf};

use hdmac::gaussian::{GaussianParams, PowerPolicy};
use hdmac::optimizer::SearchConfig;
use hdmac::polytope::cooperative::{RegionForm, SplitRates};
use hdmac::polytope::DEFAULT_ROW_LIMIT;
use hdmac::SlotSchedule;
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Region,
    Frontier,
    Compare,
    FmeVerify,
    Exponent,
    DmcBounds,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Region => "region",
            Mode::Frontier => "frontier",
            Mode::Compare => "compare",
            Mode::FmeVerify => "fme-verify",
            Mode::Exponent => "exponent",
            Mode::DmcBounds => "dmc-bounds",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Option<Mode>,
    pub gaussian: Option<GaussianParams>,
    pub schedule: Option<SlotSchedule>,
    pub policy: Option<PowerPolicy>,
    #[serde(default)]
    pub search: SearchConfig,
    pub dmc: Option<DmcSource>,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub compare: CompareConfig,
    #[serde(default)]
    pub fme: FmeConfig,
    #[serde(default)]
    pub exponent: ExponentConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DmcSource {
    /// Channel document, relative to the config file.
    pub path: PathBuf,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CompareConfig {
    /// Frontier CSV from another tool, with `r1` and `r2` columns.
    pub external: Option<PathBuf>,
    pub tolerance: f64,
}

impl Default for CompareConfig {
    fn default() -> Self {
        Self { external: None, tolerance: 1e-3 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FmeConfig {
    pub split: SplitRates,
    /// Template to compare against; the six-row form when absent.
    pub form: RegionForm,
    pub row_limit: usize,
    pub samples: usize,
}

impl Default for FmeConfig {
    fn default() -> Self {
        Self { split: SplitRates::Unconstrained, form: RegionForm::SixRow, row_limit: DEFAULT_ROW_LIMIT, samples: 200 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExponentConfig {
    pub rho_points: usize,
    pub step: f64,
    pub tolerance: f64,
}

impl Default for ExponentConfig {
    fn default() -> Self {
        Self { rho_points: 21, step: 1e-5, tolerance: 1e-4 }
    }
}

impl RunConfig {
    /// Reads, parses and resolves relative paths against the config's directory.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let mut cfg: RunConfig =
            toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        if let Some(d) = &mut cfg.dmc {
            d.path = base.join(&d.path);
        }
        if let Some(e) = &mut cfg.compare.external {
            *e = base.join(&*e);
        }
        Ok(cfg)
    }

    /// Checks that the sections `mode` needs are present and that every
    /// referenced file exists.
    pub fn validate(&self, mode: Mode) -> Result<(), CliError> {
        let need = |present: bool, section: &str| {
            if present {
                Ok(())
            } else {
                Err(CliError::Config(format!("mode `{mode}` needs a [{section}] section")))
            }
        };
        match mode {
            Mode::Region => {
                if self.dmc.is_none() {
                    need(self.gaussian.is_some(), "gaussian")?;
                    need(self.policy.is_some(), "policy")?;
                }
                need(self.schedule.is_some(), "schedule")?;
            }
            Mode::Frontier | Mode::Compare => need(self.gaussian.is_some(), "gaussian")?,
            Mode::FmeVerify => {
                if self.fme.samples == 0 {
                    return Err(CliError::Config("fme.samples must be positive".into()));
                }
            }
            Mode::Exponent | Mode::DmcBounds => {
                need(self.dmc.is_some(), "dmc")?;
                need(self.schedule.is_some(), "schedule")?;
            }
        }
        if let Some(p) = &self.gaussian {
            p.validate().map_err(|e| CliError::Config(format!("[gaussian]: {e}")))?;
        }
        if let Some(p) = &self.policy {
            p.validate().map_err(|e| CliError::Config(format!("[policy]: {e}")))?;
        }
        self.search.validate().map_err(|e| CliError::Config(format!("[search]: {e}")))?;
        if !(self.compare.tolerance.is_finite() && self.compare.tolerance >= 0.0) {
            return Err(CliError::Config(format!("compare.tolerance must be non-negative, got {}", self.compare.tolerance)));
        }
        let x = &self.exponent;
        if x.rho_points < 2 {
            return Err(CliError::Config(format!("exponent.rho_points must be at least 2, got {}", x.rho_points)));
        }
        if !(x.step > 0.0 && x.step <= 1e-3) {
            return Err(CliError::Config(format!("exponent.step must lie in (0, 1e-3], got {}", x.step)));
        }
        for (key, path) in [("dmc.path", self.dmc.as_ref().map(|d| &d.path)), ("compare.external", self.compare.external.as_ref())] {
            if let Some(p) = path {
                if !p.is_file() {
                    return Err(CliError::Config(format!("{key}: no such file {}", p.display())));
                }
            }
        }
        Ok(())
    }
}
