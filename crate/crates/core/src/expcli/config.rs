use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channels::{ChannelKind, FamilyTier, ZzFeatureMap};
use crate::simcore::NoiseModel;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Detection,
    Sample,
    Drift,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Detection => "detection",
            ExperimentKind::Sample => "sample",
            ExperimentKind::Drift => "drift",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "detection" => Ok(ExperimentKind::Detection),
            "sample" => Ok(ExperimentKind::Sample),
            "drift" => Ok(ExperimentKind::Drift),
            other => Err(Error::Config(format!("unknown experiment {other:?}"))),
        }
    }
}

/// Everything an experiment run depends on. Loaded from JSON with every field
/// except `seed` optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    /// Master seed; required, there is no wall-clock fallback.
    pub seed: Option<u64>,
    /// Shots per observable (`n_O`).
    pub shots: u64,
    /// Use exact expectation values instead of sampling.
    pub exact: bool,
    /// Restrict the detection contract to one tier; `None` means weak and complete.
    pub family: Option<FamilyTier>,
    /// Adversarial channel; defaults to the full sneaky channel for detection
    /// and the weakened one for the sample-complexity sweep.
    pub adversary: Option<ChannelKind>,
    pub noise: NoiseModel,
    pub feature_map: ZzFeatureMap,
    pub epsilon: f64,
    pub delta: f64,
    pub eta: f64,
    pub trials: usize,
    /// Shots per observable of the clean reference; `None` uses exact values.
    pub reference_shots: Option<u64>,
    pub budget_divisors: Vec<u64>,
    /// Pairwise targets `(d12, d13, d23)` for the drift timepoints.
    pub drift_targets: Vec<f64>,
    pub delta_min: f64,
    pub frame_bound: f64,
    /// Largest drift angle magnitude the scale search may use.
    pub drift_angle_cap: f64,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            experiment: ExperimentKind::Detection,
            seed: None,
            shots: 2280,
            exact: false,
            family: None,
            adversary: None,
            noise: NoiseModel::default(),
            feature_map: ZzFeatureMap::default(),
            epsilon: 0.15,
            delta: 0.5,
            eta: 0.05,
            trials: 100,
            reference_shots: Some(100_000),
            budget_divisors: vec![1, 10, 100],
            drift_targets: vec![0.067, 0.067, 0.046],
            delta_min: 0.5,
            frame_bound: 3f64.sqrt(),
            drift_angle_cap: PI,
            out: None,
        }
    }
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind, seed: u64) -> Self {
        ExperimentConfig {
            experiment,
            seed: Some(seed),
            ..Default::default()
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn seed(&self) -> Result<u64> {
        self.seed
            .ok_or_else(|| Error::Config("a master seed is required".into()))
    }

    pub fn adversary(&self) -> ChannelKind {
        self.adversary.unwrap_or(match self.experiment {
            ExperimentKind::Sample => ChannelKind::WeakenedSneaky,
            _ => ChannelKind::Sneaky,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        self.seed()?;
        if self.shots == 0 {
            return bad("shots must be at least 1".into());
        }
        self.noise
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        if self.feature_map.reps == 0 || !self.feature_map.phase_scale.is_finite() {
            return bad("feature map needs reps >= 1 and a finite phase scale".into());
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 2.0) {
            return bad(format!("epsilon {} outside (0, 2]", self.epsilon));
        }
        if !(self.delta > 0.0 && self.delta_min > 0.0 && self.frame_bound > 0.0) {
            return bad("delta, delta_min and frame_bound must be positive".into());
        }
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return bad(format!("eta {} outside (0, 1)", self.eta));
        }
        if self.reference_shots == Some(0) {
            return bad("reference_shots must be positive (omit it for exact)".into());
        }
        if let Some(ChannelKind::Drifted(d)) = &self.adversary {
            d.validate().map_err(|e| Error::Config(e.to_string()))?;
        }
        match self.experiment {
            ExperimentKind::Detection => {}
            ExperimentKind::Sample => {
                if self.trials < 20 {
                    return bad(format!("trials = {} but at least 20 are required", self.trials));
                }
                if self.budget_divisors.is_empty() || self.budget_divisors.contains(&0) {
                    return bad("budget divisors must be non-empty and positive".into());
                }
            }
            ExperimentKind::Drift => {
                if self.drift_targets.len() != 3 {
                    return bad(format!(
                        "drift needs 3 pairwise targets (d12, d13, d23), got {}",
                        self.drift_targets.len()
                    ));
                }
                if self.drift_targets.iter().any(|d| !(*d >= 0.0 && *d <= 2.0)) {
                    return bad("drift targets must lie in [0, 2]".into());
                }
                if !(self.drift_angle_cap > 0.0 && self.drift_angle_cap <= PI) {
                    return bad("drift_angle_cap must lie in (0, π]".into());
                }
            }
        }
        Ok(())
    }
}
