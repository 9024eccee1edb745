//! Flat `key=value` campaign configuration.

use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use sixv_core::{validate_params, ModelParams};

use crate::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Output {
    Raw,
    Holes,
    HeightVariance,
    EdgeCdf,
}

impl FromStr for Output {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "raw" => Ok(Output::Raw),
            "holes" => Ok(Output::Holes),
            "height-variance" => Ok(Output::HeightVariance),
            "edge-cdf" => Ok(Output::EdgeCdf),
            other => Err(CliError::Config(format!("unknown output {other:?}"))),
        }
    }
}

impl fmt::Display for Output {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Output::Raw => "raw",
            Output::Holes => "holes",
            Output::HeightVariance => "height-variance",
            Output::EdgeCdf => "edge-cdf",
        })
    }
}

/// Homogeneous model parameters plus campaign settings.
#[derive(Debug, Clone, PartialEq)]
pub struct CampaignConfig {
    pub q: f64,
    pub u: f64,
    pub v: f64,
    pub n: usize,
    pub m: usize,
    pub n_samples: u64,
    pub seed: u64,
    pub outputs: BTreeSet<Output>,
    pub out_dir: PathBuf,
    /// Worker threads; `None` uses the rayon default. `SIXV_THREADS` overrides.
    pub threads: Option<usize>,
    /// Columns recorded by the holes output.
    pub holes_k: usize,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            q: 0.5,
            u: 1.5,
            v: 0.6,
            n: 100,
            m: 100,
            n_samples: 1,
            seed: 1,
            outputs: BTreeSet::from([Output::Raw]),
            out_dir: PathBuf::from("."),
            threads: None,
            holes_k: 3,
        }
    }
}

fn num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value.trim().parse().map_err(|_| CliError::Config(format!("{key}: cannot parse {value:?}")))
}

impl CampaignConfig {
    /// Parses `key=value` lines on top of the defaults; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = CampaignConfig::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key=value", i + 1)))?;
            c.set(k.trim(), v.trim())?;
        }
        Ok(c)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "q" => self.q = num(key, value)?,
            "u" => self.u = num(key, value)?,
            "v" => self.v = num(key, value)?,
            "N" => self.n = num(key, value)?,
            "M" => self.m = num(key, value)?,
            "n_samples" => self.n_samples = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "outputs" => {
                self.outputs = value.split(',').filter(|s| !s.trim().is_empty()).map(str::parse).collect::<Result<_>>()?
            }
            "out_dir" => self.out_dir = PathBuf::from(value),
            "threads" => self.threads = Some(num(key, value)?),
            "holes_k" => self.holes_k = num(key, value)?,
            _ => return Err(CliError::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Applies a `key=value` override.
    pub fn set_pair(&mut self, pair: &str) -> Result<()> {
        let (k, v) = pair.split_once('=').ok_or_else(|| CliError::Config(format!("expected key=value, got {pair:?}")))?;
        self.set(k.trim(), v.trim())
    }

    pub fn params(&self) -> Result<ModelParams> {
        let p = ModelParams::homogeneous(self.q, self.u, self.v, self.n, self.m)?;
        validate_params(&p).map_err(|e| CliError::Config(e.to_string()))?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(CliError::Config("n_samples must be at least 1".into()));
        }
        if self.outputs.is_empty() {
            return Err(CliError::Config("no outputs selected".into()));
        }
        if self.outputs.contains(&Output::Holes) && (self.holes_k == 0 || self.holes_k > self.n) {
            return Err(CliError::Config(format!("holes_k = {} not in 1..={}", self.holes_k, self.n)));
        }
        self.params().map(|_| ())
    }

    /// Thread count after the `SIXV_THREADS` override.
    pub fn effective_threads(&self) -> Result<Option<usize>> {
        match std::env::var("SIXV_THREADS") {
            Ok(s) if !s.trim().is_empty() => {
                let t: usize = num("SIXV_THREADS", &s)?;
                Ok(Some(t))
            }
            _ => Ok(self.threads),
        }
    }
}
