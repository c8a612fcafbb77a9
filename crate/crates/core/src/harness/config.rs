//! Named sweep profiles and a flat TOML configuration file.
//!
//! ```toml
//! profile = "desk"
//! models = "linear:N+U, cubic:L+L"   # or "all"
//! i_values = "grid:0.1:10"           # "grid", or "0.1, 0.5, 2"
//! estimators = "HSIC, SH_KNN"        # or "all"
//! repetitions = 20
//! samples = 1000
//! seed = 7
//! workers = 4
//! cubic_fit = "cubed-cause"         # or "cbrt", "identity"
//! train_fraction = 0.8
//! ```

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;

use super::{CubicFit, ModelKey, SweepConfig, TrialOptions};
use crate::error::{Error, Result};
use crate::resit::{EstimatorKind, SplitConfig};
use crate::synth::{i_grid, IFactor};

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    /// Full grid, 100 repetitions of 1000 samples for every model and estimator.
    Paper,
    /// Eleven i-factors spanning the grid, 20 repetitions.
    Desk,
    /// Like `Paper`, but meant to be narrowed by explicit options.
    Custom,
}

const DESK_TICKS: [u32; 11] = [5, 10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10000];

impl Profile {
    pub fn name(self) -> &'static str {
        match self {
            Profile::Paper => "paper",
            Profile::Desk => "desk",
            Profile::Custom => "custom",
        }
    }

    pub fn sweep(self) -> SweepConfig {
        let workers = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
        let mut c = SweepConfig {
            models: ModelKey::all(),
            i_values: i_grid(),
            estimators: EstimatorKind::ALL.to_vec(),
            repetitions: 100,
            n_samples: 1000,
            base_seed: DEFAULT_SEED,
            workers,
            options: TrialOptions::default(),
        };
        if self == Profile::Desk {
            c.i_values = DESK_TICKS.iter().map(|&t| IFactor::from_hundredths(t)).collect();
            c.repetitions = 20;
        }
        c
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "paper" => Ok(Profile::Paper),
            "desk" => Ok(Profile::Desk),
            "custom" => Ok(Profile::Custom),
            other => Err(Error::Config(format!("unknown profile {other:?}"))),
        }
    }
}

fn items(list: &str) -> impl Iterator<Item = &str> {
    list.split(',').map(str::trim).filter(|s| !s.is_empty())
}

/// `all`, or a comma-separated list of `linear:N+U`-style keys.
pub fn parse_models(list: &str) -> Result<Vec<ModelKey>> {
    if list.trim().eq_ignore_ascii_case("all") {
        return Ok(ModelKey::all());
    }
    let mut v: Vec<ModelKey> = items(list).map(str::parse).collect::<Result<_>>()?;
    v.sort();
    v.dedup();
    Ok(v)
}

/// `all`, or a comma-separated list of estimator names.
pub fn parse_estimators(list: &str) -> Result<Vec<EstimatorKind>> {
    if list.trim().eq_ignore_ascii_case("all") {
        return Ok(EstimatorKind::ALL.to_vec());
    }
    let mut v: Vec<EstimatorKind> = items(list).map(str::parse).collect::<Result<_>>()?;
    v.sort();
    v.dedup();
    Ok(v)
}

/// `grid`, `grid:LO:HI` (grid points within the closed interval), or a
/// comma-separated list of i-factors.
pub fn parse_i_values(list: &str) -> Result<Vec<IFactor>> {
    let t = list.trim();
    let mut v: Vec<IFactor> = if t.eq_ignore_ascii_case("grid") {
        i_grid()
    } else if let Some(range) = t.strip_prefix("grid:") {
        let (lo, hi) = range
            .split_once(':')
            .ok_or_else(|| Error::Config(format!("expected grid:LO:HI, got {t:?}")))?;
        let (lo, hi): (IFactor, IFactor) = (lo.parse()?, hi.parse()?);
        i_grid().into_iter().filter(|i| (lo..=hi).contains(i)).collect()
    } else {
        items(t).map(str::parse).collect::<Result<_>>()?
    };
    v.sort();
    v.dedup();
    if v.is_empty() {
        return Err(Error::Config(format!("i-factor list {t:?} selects nothing")));
    }
    Ok(v)
}

/// Contents of a sweep configuration file. Absent keys keep the profile's
/// values.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub profile: Option<String>,
    pub models: Option<String>,
    pub i_values: Option<String>,
    pub estimators: Option<String>,
    pub repetitions: Option<u64>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub cubic_fit: Option<String>,
    pub train_fraction: Option<f64>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Starting profile named in the file, if any.
    pub fn profile(&self) -> Result<Option<Profile>> {
        self.profile.as_deref().map(str::parse).transpose()
    }

    /// Overrides fields of `config` with the keys present in the file.
    pub fn apply(&self, config: &mut SweepConfig) -> Result<()> {
        if let Some(m) = &self.models {
            config.models = parse_models(m)?;
        }
        if let Some(i) = &self.i_values {
            config.i_values = parse_i_values(i)?;
        }
        if let Some(e) = &self.estimators {
            config.estimators = parse_estimators(e)?;
        }
        if let Some(r) = self.repetitions {
            config.repetitions = r;
        }
        if let Some(n) = self.samples {
            config.n_samples = n;
        }
        if let Some(s) = self.seed {
            config.base_seed = s;
        }
        if let Some(w) = self.workers {
            config.workers = w;
        }
        if let Some(t) = &self.cubic_fit {
            config.options.cubic = t.parse::<CubicFit>()?;
        }
        if let Some(f) = self.train_fraction {
            config.options.split = SplitConfig { train_fraction: f };
            config.options.split.train_len(config.n_samples)?;
        }
        config.validate()
    }

    /// The profile named in the file (default `paper`) with the file applied.
    pub fn to_sweep(&self) -> Result<SweepConfig> {
        let mut c = self.profile()?.unwrap_or(Profile::Paper).sweep();
        self.apply(&mut c)?;
        Ok(c)
    }
}
