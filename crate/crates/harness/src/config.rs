//! Sweep configuration.
//!
//! A configuration is assembled in layers: built-in defaults, then an
//! optional TOML file, then an optional preset, then command-line flags.
//! Every layer is a [`ConfigLayer`] whose unset fields leave the previous
//! value in place.
//!
//! ```toml
//! n = [100000]
//! c = [0.5, 1, 2, 4]          # or c_min / c_max / c_steps
//! delta = [0.3]
//! lbar = 1.75
//! trials = 50
//! seed = 7
//! lprime = 2
//! jmax = 40
//! alpha = "auto"              # or a number
//! merge_mode = "maximal-run"  # or "strict-overlap"
//! ```

use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;
use sse_core::channel::ChannelParams;
use sse_core::stats::default_alpha;
use sse_core::MergeMode;

use crate::error::HarnessError;

/// Tail constant `α` for the reads-per-island check.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Alpha {
    /// `2·(-1/log2(1 - e^{-c}))` at the nominal coverage of each row.
    #[default]
    Auto,
    Value(f64),
}

impl Alpha {
    pub fn resolve(self, c: f64) -> f64 {
        match self {
            Alpha::Auto => default_alpha(c),
            Alpha::Value(a) => a,
        }
    }
}

impl FromStr for Alpha {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Alpha::Auto);
        }
        s.parse::<f64>()
            .map(Alpha::Value)
            .map_err(|_| format!("alpha must be \"auto\" or a number, got {s:?}"))
    }
}

pub fn parse_merge_mode(s: &str) -> Result<MergeMode, String> {
    match s {
        "maximal-run" => Ok(MergeMode::MaximalRun),
        "strict-overlap" => Ok(MergeMode::StrictOverlap),
        other => Err(format!(
            "merge mode must be maximal-run or strict-overlap, got {other:?}"
        )),
    }
}

pub fn merge_mode_name(mode: MergeMode) -> &'static str {
    match mode {
        MergeMode::MaximalRun => "maximal-run",
        MergeMode::StrictOverlap => "strict-overlap",
    }
}

/// A fully resolved sweep configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub n_values: Vec<usize>,
    pub c_values: Vec<f64>,
    pub delta_values: Vec<f64>,
    pub lbar: f64,
    pub trials: usize,
    pub master_seed: u64,
    pub l_prime: usize,
    pub j_max: usize,
    pub alpha: Alpha,
    pub merge_mode: MergeMode,
    /// `None` writes to standard output.
    pub output_path: Option<String>,
    /// Worker threads; `None` lets the pool pick.
    pub threads: Option<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            n_values: vec![100_000],
            c_values: vec![1.0],
            delta_values: vec![0.0, 0.2, 0.3],
            lbar: 1.75,
            trials: 50,
            master_seed: 0,
            l_prime: 2,
            j_max: 40,
            alpha: Alpha::Auto,
            merge_mode: MergeMode::MaximalRun,
            output_path: None,
            threads: None,
        }
    }
}

/// `count` evenly spaced points from `min` to `max` inclusive.
pub fn linspace(min: f64, max: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![min],
        _ => (0..count)
            .map(|i| min + (max - min) * i as f64 / (count - 1) as f64)
            .collect(),
    }
}

/// Named parameter sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// `λ̄ = 1.75`, `δ ∈ {0, 0.2, 0.3}`, 200 values of `c` in `[0.05, 10]`.
    Fig2,
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fig2" => Ok(Preset::Fig2),
            other => Err(format!("unknown preset {other:?} (known: fig2)")),
        }
    }
}

impl Preset {
    pub fn layer(self) -> ConfigLayer {
        match self {
            Preset::Fig2 => ConfigLayer {
                lbar: Some(1.75),
                delta: Some(vec![0.0, 0.2, 0.3]),
                c_min: Some(0.05),
                c_max: Some(10.0),
                c_steps: Some(200),
                ..ConfigLayer::default()
            },
        }
    }
}

/// Partial configuration as read from a file, a preset or the command line.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigLayer {
    pub n: Option<Vec<usize>>,
    pub c: Option<Vec<f64>>,
    pub c_min: Option<f64>,
    pub c_max: Option<f64>,
    pub c_steps: Option<usize>,
    pub delta: Option<Vec<f64>>,
    pub lbar: Option<f64>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub lprime: Option<usize>,
    pub jmax: Option<usize>,
    pub alpha: Option<AlphaValue>,
    pub merge_mode: Option<String>,
    pub out: Option<String>,
    pub threads: Option<usize>,
}

/// `alpha` as it may appear in a TOML file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum AlphaValue {
    Number(f64),
    Text(String),
}

impl ConfigLayer {
    pub fn from_toml_str(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn from_file(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|source| HarnessError::ReadConfig {
            path: path.to_owned(),
            source,
        })?;
        Self::from_toml_str(&text).map_err(|source| HarnessError::ParseConfig {
            path: path.to_owned(),
            source,
        })
    }
}

/// Accumulates layers on top of the defaults.
#[derive(Debug, Clone)]
pub struct ConfigBuilder {
    config: SweepConfig,
    c_min: Option<f64>,
    c_max: Option<f64>,
    c_steps: Option<usize>,
    explicit_c: bool,
}

impl Default for ConfigBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl ConfigBuilder {
    pub fn new() -> Self {
        ConfigBuilder {
            config: SweepConfig::default(),
            c_min: None,
            c_max: None,
            c_steps: None,
            explicit_c: false,
        }
    }

    /// Applies a layer; set fields replace earlier values.
    pub fn apply(mut self, layer: ConfigLayer) -> Result<Self, HarnessError> {
        let cfg = &mut self.config;
        if let Some(v) = layer.n {
            cfg.n_values = v;
        }
        if let Some(v) = layer.c {
            cfg.c_values = v;
            self.explicit_c = true;
            self.c_min = None;
            self.c_max = None;
            self.c_steps = None;
        }
        if layer.c_min.is_some() || layer.c_max.is_some() || layer.c_steps.is_some() {
            self.explicit_c = false;
        }
        self.c_min = layer.c_min.or(self.c_min);
        self.c_max = layer.c_max.or(self.c_max);
        self.c_steps = layer.c_steps.or(self.c_steps);
        if let Some(v) = layer.delta {
            cfg.delta_values = v;
        }
        if let Some(v) = layer.lbar {
            cfg.lbar = v;
        }
        if let Some(v) = layer.trials {
            cfg.trials = v;
        }
        if let Some(v) = layer.seed {
            cfg.master_seed = v;
        }
        if let Some(v) = layer.lprime {
            cfg.l_prime = v;
        }
        if let Some(v) = layer.jmax {
            cfg.j_max = v;
        }
        if let Some(v) = layer.alpha {
            cfg.alpha = match v {
                AlphaValue::Number(a) => Alpha::Value(a),
                AlphaValue::Text(s) => s.parse().map_err(HarnessError::Config)?,
            };
        }
        if let Some(v) = layer.merge_mode {
            cfg.merge_mode = parse_merge_mode(&v).map_err(HarnessError::Config)?;
        }
        if let Some(v) = layer.out {
            cfg.output_path = Some(v);
        }
        if let Some(v) = layer.threads {
            cfg.threads = Some(v);
        }
        Ok(self)
    }

    /// Resolves the coverage grid and validates the result.
    pub fn build(mut self) -> Result<SweepConfig, HarnessError> {
        if !self.explicit_c && (self.c_min.is_some() || self.c_max.is_some() || self.c_steps.is_some()) {
            let min = self.c_min.or(self.c_max).unwrap_or(1.0);
            let max = self.c_max.unwrap_or(min);
            let steps = self.c_steps.unwrap_or(if min == max { 1 } else { 100 });
            if min > max {
                return Err(HarnessError::Config(format!("c-min {min} exceeds c-max {max}")));
            }
            self.config.c_values = linspace(min, max, steps);
        }
        self.config.validate()?;
        Ok(self.config)
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |msg: String| Err(HarnessError::Config(msg));
        if self.n_values.is_empty() {
            return bad("the n grid is empty".into());
        }
        if self.c_values.is_empty() {
            return bad("the coverage grid is empty".into());
        }
        if self.delta_values.is_empty() {
            return bad("the delta grid is empty".into());
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.l_prime == 0 {
            return bad("lprime must be at least 1".into());
        }
        if self.j_max < 2 {
            return bad("jmax must be at least 2".into());
        }
        if let Alpha::Value(a) = self.alpha {
            if !(a > 0.0 && a.is_finite()) {
                return bad(format!("alpha must be positive, got {a}"));
            }
        }
        if self.threads == Some(0) {
            return bad("threads must be at least 1".into());
        }
        if !(self.lbar > 0.0 && self.lbar.is_finite()) {
            return bad(format!("lbar must be positive, got {}", self.lbar));
        }
        for &c in &self.c_values {
            if !(c > 0.0 && c.is_finite()) {
                return bad(format!("coverage depths must be positive, got {c}"));
            }
        }
        for &d in &self.delta_values {
            if !(0.0..1.0).contains(&d) {
                return bad(format!("delta must lie in [0, 1), got {d}"));
            }
        }
        for &n in &self.n_values {
            for &c in &self.c_values {
                self.params(n, c, self.delta_values[0])?;
            }
        }
        Ok(())
    }

    pub fn params(&self, n: usize, c: f64, delta: f64) -> Result<ChannelParams, HarnessError> {
        ChannelParams::derive(n, c, self.lbar, delta)
            .map_err(|source| HarnessError::Params { n, c, delta, source })
    }
}
