//! Experiment configuration: scenario, kernel, function set, sweep values,
//! and output options. Loadable from a JSON document, with presets for the
//! two standard scenarios.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use smi_core::{
    preset_by_name, KernelConfig, LabeledDataset, PsiKind, ScenarioConfig, SmiConfig,
};

use crate::error::{HarnessError, Result};

/// Kernel selection with an optional bandwidth; omitting the bandwidth for
/// RBF selects the median heuristic at run time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    #[serde(default)]
    pub kind: KernelKind,
    #[serde(default)]
    pub bandwidth: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelKind {
    #[default]
    Rbf,
    CosineShifted,
}

impl Default for KernelSpec {
    fn default() -> Self {
        Self {
            kind: KernelKind::Rbf,
            bandwidth: None,
        }
    }
}

impl KernelSpec {
    pub fn resolve(&self, dataset: &LabeledDataset) -> Result<KernelConfig> {
        let kernel = match self.kind {
            KernelKind::Rbf => match self.bandwidth {
                Some(bandwidth) => KernelConfig::Rbf { bandwidth },
                None => KernelConfig::rbf_median(dataset)?,
            },
            KernelKind::CosineShifted => KernelConfig::CosineShifted,
        };
        kernel.validate()?;
        Ok(kernel)
    }
}

/// Everything one experiment run needs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub scenario: ScenarioConfig,
    #[serde(default)]
    pub kernel: KernelSpec,
    #[serde(default = "default_functions")]
    pub functions: Vec<SmiConfig>,
    #[serde(default = "default_eta_sweep")]
    pub eta_sweep: Vec<f64>,
    #[serde(default = "default_outputs")]
    pub outputs: PathBuf,
    #[serde(default = "default_emit_plots")]
    pub emit_plots: bool,
}

pub fn default_functions() -> Vec<SmiConfig> {
    vec![
        SmiConfig::flvmi(1.0),
        SmiConfig::flqmi(1.0),
        SmiConfig::gcmi(1.0),
        SmiConfig::com(1.0, PsiKind::Sqrt),
    ]
}

fn default_eta_sweep() -> Vec<f64> {
    vec![1.0, 3.0, 10.0]
}

fn default_outputs() -> PathBuf {
    PathBuf::from("out")
}

fn default_emit_plots() -> bool {
    true
}

impl ExperimentConfig {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let config: ExperimentConfig = serde_json::from_str(text)
            .map_err(|e| HarnessError::Config(format!("experiment config parse error: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialization cannot fail")
    }

    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        if self.functions.is_empty() {
            return Err(HarnessError::Config(
                "at least one SMI function is required".into(),
            ));
        }
        for f in &self.functions {
            f.validate()?;
        }
        if self.eta_sweep.iter().any(|&e| !e.is_finite() || e <= 0.0) {
            return Err(HarnessError::Config(
                "eta sweep values must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Standard experiment for a named preset scenario.
///
/// The two-target preset pins its RBF bandwidth: its trend behavior is
/// calibrated against that similarity scale. The one-target preset uses
/// the median heuristic.
pub fn preset_experiment(
    name: &str,
    seed: u64,
    samples: usize,
    outputs: PathBuf,
) -> Option<ExperimentConfig> {
    let scenario = preset_by_name(name, seed, samples)?;
    let kernel = match name {
        "two-target" => KernelSpec {
            kind: KernelKind::Rbf,
            bandwidth: Some(7.0),
        },
        _ => KernelSpec::default(),
    };
    Some(ExperimentConfig {
        scenario,
        kernel,
        functions: default_functions(),
        eta_sweep: default_eta_sweep(),
        outputs,
        emit_plots: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_json_round_trip() {
        let config = preset_experiment("two-target", 7, 100, PathBuf::from("out")).unwrap();
        let text = config.to_json_string();
        let back = ExperimentConfig::from_json_str(&text).unwrap();
        assert_eq!(back.scenario, config.scenario);
        assert_eq!(back.functions, config.functions);
        assert_eq!(back.kernel, config.kernel);
    }

    #[test]
    fn minimal_config_fills_defaults() {
        let text = r#"{
            "scenario": {
                "name": "tiny",
                "clusters": [
                    {"mean": [1.0], "covariance": [0.1], "count": 6,
                     "role": "targeted", "query_count": 2},
                    {"mean": [-1.0], "covariance": [0.1], "count": 6,
                     "role": "untargeted"}
                ],
                "budget": 2,
                "seed": 1,
                "samples": 10
            }
        }"#;
        let config = ExperimentConfig::from_json_str(text).unwrap();
        assert_eq!(config.functions.len(), 4);
        assert_eq!(config.eta_sweep, vec![1.0, 3.0, 10.0]);
        assert!(config.emit_plots);
        assert_eq!(config.kernel, KernelSpec::default());
    }

    #[test]
    fn bad_eta_rejected() {
        let mut config = preset_experiment("one-target", 1, 10, PathBuf::from("out")).unwrap();
        config.functions[0].eta = -1.0;
        assert!(config.validate().is_err());
    }
}
