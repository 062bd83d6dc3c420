use std::path::Path;

use aprxlik_core::ising::Boundary;
use aprxlik_core::twolevel::MnReading;
use serde::{Deserialize, Serialize};

use crate::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    TwolevelFigure,
    IsingBbeta,
    IsingContour,
    IsingTrapezium,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::TwolevelFigure => "twolevel-figure",
            Experiment::IsingBbeta => "ising-bbeta",
            Experiment::IsingContour => "ising-contour",
            Experiment::IsingTrapezium => "ising-trapezium",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.lo + self.step * i as f64).collect()
    }
}

/// Parameters of one experiment run. Every field except `experiment` has a
/// desk-scale default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub seed: u64,
    pub replicates: usize,

    pub n_list: Vec<u64>,
    pub a_list: Vec<f64>,
    pub theta0: f64,
    pub mn_reading: MnReading,
    /// Posterior and grid-start grid for `theta`.
    pub grid: GridSpec,
    pub level: f64,
    /// Largest share of failed replicates tolerated per `(n, a)` cell.
    pub max_failure_rate: f64,

    pub m_list: Vec<usize>,
    pub k_list: Vec<usize>,
    pub alpha: f64,
    pub beta: f64,
    #[serde(rename = "K_proxy")]
    pub k_proxy: usize,
    pub boundary: Boundary,

    pub beta_grid: GridSpec,
    pub trapezium_betas: Vec<f64>,
    pub trapezium_n: Vec<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            experiment: Experiment::TwolevelFigure,
            seed: 1,
            replicates: 500,
            n_list: vec![1000, 2154, 4642, 10000],
            a_list: vec![0.2, 0.25, 0.3],
            theta0: 0.5,
            mn_reading: MnReading::ClampBelow,
            grid: GridSpec {
                lo: 0.05,
                hi: 3.0,
                step: 0.005,
            },
            level: 0.9,
            max_failure_rate: 0.02,
            m_list: vec![50, 60, 70, 80, 90, 100, 110, 120],
            k_list: (2..=10).collect(),
            alpha: 0.1,
            beta: 0.3,
            k_proxy: 16,
            boundary: Boundary::Free,
            beta_grid: GridSpec {
                lo: 0.05,
                hi: 0.43,
                step: 0.005,
            },
            trapezium_betas: vec![0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4],
            trapezium_n: (4..=16).collect(),
        }
    }
}

impl ExperimentConfig {
    pub fn for_experiment(experiment: Experiment) -> Self {
        ExperimentConfig {
            experiment,
            ..Default::default()
        }
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            HarnessError::Config(format!("cannot read config file {}: {e}", path.display()))
        })?;
        let cfg: ExperimentConfig = serde_json::from_str(&text).map_err(|e| {
            HarnessError::Config(format!("invalid config file {}: {e}", path.display()))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |msg: String| Err(HarnessError::Config(msg));
        if self.replicates == 0 {
            return bad("replicates must be positive".into());
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return bad(format!("level must lie in (0, 1), got {}", self.level));
        }
        if !(self.max_failure_rate >= 0.0 && self.max_failure_rate < 1.0) {
            return bad("max_failure_rate must lie in [0, 1)".into());
        }
        for (name, grid) in [("grid", &self.grid), ("beta_grid", &self.beta_grid)] {
            if !(grid.step > 0.0 && grid.hi > grid.lo) {
                return bad(format!("{name} needs lo < hi and a positive step"));
            }
        }
        match self.experiment {
            Experiment::TwolevelFigure => {
                if self.n_list.is_empty() || self.a_list.is_empty() {
                    return bad("n_list and a_list must be nonempty".into());
                }
                if self.theta0.is_nan() || self.theta0 <= 0.0 {
                    return bad("theta0 must be positive".into());
                }
                if self.grid.lo <= 0.0 {
                    return bad("the theta grid must be positive".into());
                }
            }
            Experiment::IsingContour => {
                if self.m_list.is_empty() || self.k_list.is_empty() {
                    return bad("m_list and k_list must be nonempty".into());
                }
                let kmax = *self.k_list.iter().max().expect("nonempty");
                if self.k_proxy <= kmax + 1 || self.k_proxy > 16 {
                    return bad(format!(
                        "K_proxy must satisfy max(k_list) + 1 < K_proxy <= 16 for the K - 1 stability rerun, got {}",
                        self.k_proxy
                    ));
                }
                if let Some(m) = self.m_list.iter().find(|&&m| m < self.k_proxy) {
                    return bad(format!("m={m} is smaller than K_proxy"));
                }
            }
            Experiment::IsingTrapezium => {
                if self.trapezium_betas.is_empty() || self.trapezium_n.len() < 4 {
                    return bad(
                        "trapezium_betas must be nonempty and trapezium_n needs four values".into(),
                    );
                }
            }
            Experiment::IsingBbeta => {}
        }
        Ok(())
    }
}
