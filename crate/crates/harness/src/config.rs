use std::fmt;
use std::str::FromStr;

use aheft_core::hamiltonian::Model;
use aheft_core::training::ScheduleConfig;
use serde::{Deserialize, Serialize};

use crate::error::HarnessError;

pub const DESK_MAX_QUBITS: usize = 8;
pub const DESK_MAX_SEEDS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ExperimentId {
    AT1,
    AT2,
    AT3,
    AT4,
    AT5,
    AT6,
    AT7,
    AT8,
    AT9,
    AT10,
    AT11,
    AT12,
    AT13,
    AT14,
    AT15,
    AT16,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 16] = [
        Self::AT1,
        Self::AT2,
        Self::AT3,
        Self::AT4,
        Self::AT5,
        Self::AT6,
        Self::AT7,
        Self::AT8,
        Self::AT9,
        Self::AT10,
        Self::AT11,
        Self::AT12,
        Self::AT13,
        Self::AT14,
        Self::AT15,
        Self::AT16,
    ];

    pub fn number(self) -> usize {
        Self::ALL.iter().position(|&e| e == self).unwrap() + 1
    }

    pub fn title(self) -> &'static str {
        match self {
            Self::AT1 => "gradient variance scaling in both phases",
            Self::AT2 => "gradient variance across initialization scales",
            Self::AT3 => "gradient-norm timeline across the phase switch",
            Self::AT4 => "convergence of adaptive, static and HEA training",
            Self::AT5 => "final energy against system size",
            Self::AT6 => "ground-state fidelity against depth",
            Self::AT7 => "reference-state gap against system size",
            Self::AT8 => "effective-dimension timeline",
            Self::AT9 => "half-chain entanglement entropy against depth",
            Self::AT10 => "ensemble purity against depth",
            Self::AT11 => "depolarizing-noise sweep",
            Self::AT12 => "shot-noise scaling of sampled gradients",
            Self::AT13 => "switch-threshold sweep",
            Self::AT14 => "growth-rate sweep",
            Self::AT15 => "three-way statistical comparison",
            Self::AT16 => "Heisenberg chain suite",
        }
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at{}", self.number())
    }
}

impl FromStr for ExperimentId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        lower
            .strip_prefix("at")
            .and_then(|d| d.parse::<usize>().ok())
            .filter(|k| (1..=16).contains(k))
            .map(|k| Self::ALL[k - 1])
            .ok_or_else(|| format!("unknown experiment '{s}' (expected at1..at16)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Desk,
    Paper,
}

impl FromStr for Scale {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "desk" => Ok(Scale::Desk),
            "paper" => Ok(Scale::Paper),
            _ => Err(format!("unknown scale '{s}' (expected desk or paper)")),
        }
    }
}

/// A point of an initialization-scale sweep, resolved per `(N, L)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaPoint {
    Sigma0,
    /// `factor · σ_crit`.
    Crit(f64),
    Value(f64),
}

impl SigmaPoint {
    pub fn resolve(self, sigma0: f64, sigma_crit: f64) -> f64 {
        match self {
            SigmaPoint::Sigma0 => sigma0,
            SigmaPoint::Crit(f) => f * sigma_crit,
            SigmaPoint::Value(v) => v,
        }
    }

    pub fn label(self) -> String {
        match self {
            SigmaPoint::Sigma0 => "sigma0".into(),
            SigmaPoint::Crit(f) if f == 1.0 => "sigma_crit".into(),
            SigmaPoint::Crit(f) => format!("{f}*sigma_crit"),
            SigmaPoint::Value(v) => format!("{v}"),
        }
    }
}

/// Optional per-experiment sweep grids. Empty lists mean "not swept".
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Sweep {
    pub sigma: Vec<SigmaPoint>,
    pub delta_switch: Vec<f64>,
    pub lambda: Vec<f64>,
    pub noise_p: Vec<f64>,
    pub shots: Vec<u64>,
    /// Random circuits per point for sampling experiments.
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment_id: ExperimentId,
    pub hamiltonian: Model,
    pub n_list: Vec<usize>,
    pub l_list: Vec<usize>,
    pub n_seeds: usize,
    pub master_seed: u64,
    pub schedule: ScheduleConfig,
    pub sweep: Sweep,
    pub scale: Scale,
}

impl ExperimentConfig {
    /// Registry defaults for one experiment at one scale.
    pub fn defaults(id: ExperimentId, scale: Scale) -> Self {
        use ExperimentId::*;
        let paper = scale == Scale::Paper;
        let pick = |desk: &[usize], full: &[usize]| if paper { full.to_vec() } else { desk.to_vec() };
        let seeds = |desk: usize, full: usize| if paper { full } else { desk };
        let mut c = ExperimentConfig {
            experiment_id: id,
            hamiltonian: Model::Tfim,
            n_list: vec![4],
            l_list: vec![4],
            n_seeds: 1,
            master_seed: 0,
            schedule: ScheduleConfig::default(),
            sweep: Sweep::default(),
            scale,
        };
        match id {
            AT1 => {
                c.n_list = pick(&[2, 4, 6, 8], &[2, 4, 6, 8, 10, 12, 14]);
                c.l_list = pick(&[2, 4, 8], &[2, 4, 8, 14]);
                c.n_seeds = seeds(20, 50);
            }
            AT2 => {
                c.n_list = pick(&[8], &[14]);
                c.l_list = pick(&[8], &[14]);
                c.n_seeds = seeds(20, 50);
                c.sweep.sigma = vec![
                    SigmaPoint::Sigma0,
                    SigmaPoint::Crit(0.5),
                    SigmaPoint::Crit(1.0),
                    SigmaPoint::Value(0.1),
                    SigmaPoint::Value(0.3),
                    SigmaPoint::Value(1.0),
                ];
            }
            AT3 | AT8 => {
                c.n_list = vec![8];
                c.l_list = vec![8];
                c.n_seeds = if id == AT8 { seeds(3, 5) } else { 1 };
            }
            AT4 => {
                c.n_list = pick(&[4, 8], &[4, 8, 12]);
                c.l_list = vec![4];
            }
            AT5 => {
                c.n_list = pick(&[2, 4, 6, 8], &[2, 4, 6, 8, 10, 12, 14]);
                c.l_list = vec![2];
            }
            AT6 => {
                c.n_list = pick(&[6], &[8]);
                c.l_list = pick(&[2, 4, 6, 8], &[2, 4, 6, 8, 10, 12, 14]);
                c.n_seeds = 5;
            }
            AT7 => {
                c.n_list = pick(&[2, 4, 6, 8], &[2, 4, 6, 8, 10, 12, 14]);
                c.l_list = vec![1];
            }
            AT9 => {
                c.n_list = vec![8];
                c.l_list = pick(&[2, 4, 8, 14], &[2, 4, 6, 8, 10, 12, 14]);
                c.n_seeds = 15;
            }
            AT10 => {
                c.n_list = vec![6];
                c.l_list = pick(&[2, 4, 6, 8, 10], &[2, 4, 6, 8, 10, 12, 14]);
                c.sweep.samples = Some(500);
            }
            AT11 => {
                c.n_list = pick(&[4], &[8]);
                c.l_list = pick(&[4], &[8]);
                c.n_seeds = seeds(3, 5);
                c.sweep.noise_p = vec![0.0, 1e-4, 1e-3, 1e-2];
            }
            AT12 => {
                c.n_list = vec![4];
                c.l_list = vec![2];
                c.n_seeds = seeds(20, 50);
                c.sweep.shots = vec![100, 1000, 10_000];
                c.sweep.samples = Some(20);
            }
            AT13 => {
                c.n_list = pick(&[4], &[8]);
                c.l_list = pick(&[4], &[8]);
                c.n_seeds = seeds(5, 10);
                c.sweep.delta_switch = vec![1e-4, 1e-3, 5e-3];
            }
            AT14 => {
                c.n_list = pick(&[4], &[8]);
                c.l_list = pick(&[4], &[8]);
                c.n_seeds = seeds(5, 10);
                c.sweep.lambda = vec![0.01, 0.02, 0.1];
            }
            AT15 => {
                c.n_list = pick(&[4], &[4, 8, 12]);
                c.l_list = vec![4];
                c.n_seeds = seeds(20, 50);
            }
            AT16 => {
                c.hamiltonian = Model::Xxz;
                c.n_list = pick(&[4], &[4, 8, 12]);
                c.l_list = vec![4];
                c.n_seeds = 5;
            }
        }
        c
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.n_list.is_empty() || self.l_list.is_empty() {
            return Err(HarnessError::Usage("qubit and layer lists must be non-empty".into()));
        }
        if self.n_seeds == 0 {
            return Err(HarnessError::Usage("at least one seed is required".into()));
        }
        if let Some(&n) = self.n_list.iter().find(|&&n| !(2..=aheft_core::MAX_QUBITS).contains(&n)) {
            return Err(HarnessError::Resource(format!(
                "N = {n} outside the supported range 2..={}",
                aheft_core::MAX_QUBITS
            )));
        }
        if self.l_list.contains(&0) {
            return Err(HarnessError::Usage("layer counts must be at least 1".into()));
        }
        if self.scale == Scale::Desk {
            if let Some(&n) = self.n_list.iter().find(|&&n| n > DESK_MAX_QUBITS) {
                return Err(HarnessError::Resource(format!(
                    "desk scale caps N at {DESK_MAX_QUBITS}, got {n} (use --scale paper)"
                )));
            }
            if self.n_seeds > DESK_MAX_SEEDS {
                return Err(HarnessError::Resource(format!(
                    "desk scale caps seeds at {DESK_MAX_SEEDS}, got {} (use --scale paper)",
                    self.n_seeds
                )));
            }
        }
        if self.experiment_id == ExperimentId::AT11 && self.n_list.iter().any(|&n| n > aheft_core::MAX_MIXED_QUBITS) {
            return Err(HarnessError::Resource(format!(
                "noisy simulation caps N at {}",
                aheft_core::MAX_MIXED_QUBITS
            )));
        }
        self.schedule.validate().map_err(|e| HarnessError::Usage(e.to_string()))?;
        Ok(())
    }
}
