//! Experiment configuration.
//!
//! ```json
//! {"instance": "inst.json" | {"family": "max-entropy", "m": 3},
//!  "algorithms": ["exp-gap"], "deltas": [0.01], "trials": 1000, "seed": 0,
//!  "permute": true, "budget_cap": 1000000000, "threads": 4}
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use bestarm_core::generators::apply_permutation;
use bestarm_core::sampling::DEFAULT_BUDGET_CAP;
use bestarm_core::{Algorithm, BanditInstance, InstanceSpec};
use serde::{Deserialize, Serialize};

use crate::error::HarnessError;
use crate::schema::load_instance;

/// Largest δ the harness accepts; values above 0.1 only produce a warning.
pub const MAX_DELTA: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GeneratorSpec {
    TwoArm {
        gap: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        permutation_seed: Option<u64>,
    },
    Clustered {
        sizes: Vec<usize>,
        gaps: Vec<f64>,
        #[serde(default = "default_base_mean")]
        base_mean: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        permutation_seed: Option<u64>,
    },
    MaxEntropy {
        m: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        permutation_seed: Option<u64>,
    },
    Random {
        n: usize,
        gap_min: f64,
        gap_max: f64,
        seed: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        permutation_seed: Option<u64>,
    },
    Explicit {
        means: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        permutation_seed: Option<u64>,
    },
}

fn default_base_mean() -> f64 {
    1.0
}

impl GeneratorSpec {
    fn parts(&self) -> (InstanceSpec, Option<u64>) {
        match self.clone() {
            GeneratorSpec::TwoArm { gap, permutation_seed } => {
                (InstanceSpec::TwoArm { gap }, permutation_seed)
            }
            GeneratorSpec::Clustered { sizes, gaps, base_mean, permutation_seed } => {
                (InstanceSpec::Clustered { sizes, gaps, base_mean }, permutation_seed)
            }
            GeneratorSpec::MaxEntropy { m, permutation_seed } => {
                (InstanceSpec::MaxEntropy { m }, permutation_seed)
            }
            GeneratorSpec::Random { n, gap_min, gap_max, seed, permutation_seed } => {
                (InstanceSpec::Random { n, gap_min, gap_max, seed }, permutation_seed)
            }
            GeneratorSpec::Explicit { means, name, permutation_seed } => {
                (InstanceSpec::Explicit { means, name }, permutation_seed)
            }
        }
    }

    pub fn build(&self) -> Result<BanditInstance, HarnessError> {
        let (spec, permutation) = self.parts();
        let instance = spec.build()?;
        Ok(match permutation {
            Some(seed) => apply_permutation(&instance, seed),
            None => instance,
        })
    }

    /// Parse the compact command-line form:
    /// `two-arm:GAP`, `max-entropy:M`, `clustered:SIZExGAP,...`,
    /// `random:N:GAP_MIN:GAP_MAX:SEED`.
    pub fn parse_compact(s: &str) -> Option<Result<Self, HarnessError>> {
        let (family, rest) = s.split_once(':')?;
        let bad = || HarnessError::Config(format!("malformed generator spec {s:?}"));
        let num = |x: &str| x.trim().parse::<f64>().map_err(|_| bad());
        let int = |x: &str| x.trim().parse::<u64>().map_err(|_| bad());
        let parsed = match family {
            "two-arm" => num(rest).map(|gap| GeneratorSpec::TwoArm { gap, permutation_seed: None }),
            "max-entropy" => int(rest).and_then(|m| {
                u32::try_from(m).map_err(|_| bad()).map(|m| GeneratorSpec::MaxEntropy {
                    m,
                    permutation_seed: None,
                })
            }),
            "clustered" => rest
                .split(',')
                .map(|part| {
                    let (size, gap) = part.split_once('x').ok_or_else(bad)?;
                    Ok((int(size)? as usize, num(gap)?))
                })
                .collect::<Result<Vec<_>, HarnessError>>()
                .map(|pairs| GeneratorSpec::Clustered {
                    sizes: pairs.iter().map(|p| p.0).collect(),
                    gaps: pairs.iter().map(|p| p.1).collect(),
                    base_mean: 1.0,
                    permutation_seed: None,
                }),
            "random" => {
                let f: Vec<&str> = rest.split(':').collect();
                if f.len() != 4 {
                    Err(bad())
                } else {
                    (|| {
                        Ok(GeneratorSpec::Random {
                            n: int(f[0])? as usize,
                            gap_min: num(f[1])?,
                            gap_max: num(f[2])?,
                            seed: int(f[3])?,
                            permutation_seed: None,
                        })
                    })()
                }
            }
            _ => return None,
        };
        Some(parsed)
    }
}

/// Where the experiment's instance comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InstanceSource {
    File(PathBuf),
    Generator(GeneratorSpec),
}

impl InstanceSource {
    /// A generator spec in compact form, or else a file path.
    pub fn from_arg(arg: &str) -> Result<Self, HarnessError> {
        match GeneratorSpec::parse_compact(arg) {
            Some(spec) => Ok(InstanceSource::Generator(spec?)),
            None => Ok(InstanceSource::File(PathBuf::from(arg))),
        }
    }

    pub fn load(&self) -> Result<BanditInstance, HarnessError> {
        match self {
            InstanceSource::File(path) => {
                let instance = load_instance(path)?;
                Ok(match instance.name() {
                    Some(_) => instance,
                    None => {
                        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("instance");
                        instance.with_name(stem)
                    }
                })
            }
            InstanceSource::Generator(spec) => spec.build(),
        }
    }
}

fn default_algorithms() -> Vec<String> {
    vec![Algorithm::ExpGap.name().to_owned()]
}
fn default_deltas() -> Vec<f64> {
    vec![0.01]
}
fn default_trials() -> u64 {
    1000
}
fn default_permute() -> bool {
    true
}
fn default_budget_cap() -> u64 {
    DEFAULT_BUDGET_CAP
}
fn default_threads() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub instance: InstanceSource,
    #[serde(default = "default_algorithms")]
    pub algorithms: Vec<String>,
    #[serde(default = "default_deltas")]
    pub deltas: Vec<f64>,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_permute")]
    pub permute: bool,
    #[serde(default = "default_budget_cap")]
    pub budget_cap: u64,
    #[serde(default = "default_threads")]
    pub threads: usize,
}

impl ExperimentConfig {
    pub fn new(instance: InstanceSource) -> Self {
        Self {
            instance,
            algorithms: default_algorithms(),
            deltas: default_deltas(),
            trials: default_trials(),
            seed: 0,
            permute: default_permute(),
            budget_cap: default_budget_cap(),
            threads: default_threads(),
        }
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = fs::read_to_string(path)
            .map_err(|source| HarnessError::Read { path: path.to_owned(), source })?;
        serde_json::from_str(&text)
            .map_err(|source| HarnessError::Parse { path: path.to_owned(), source })
    }

    /// Check ranges and resolve algorithm names. Returns warnings for δ above 0.1.
    pub fn validate(&self) -> Result<(Vec<Algorithm>, Vec<String>), HarnessError> {
        if self.trials == 0 {
            return Err(HarnessError::Config("trials must be at least 1".into()));
        }
        if self.threads == 0 {
            return Err(HarnessError::Config("threads must be at least 1".into()));
        }
        if self.deltas.is_empty() {
            return Err(HarnessError::Config("at least one delta is required".into()));
        }
        if self.algorithms.is_empty() {
            return Err(HarnessError::Config("at least one algorithm is required".into()));
        }
        let mut warnings = Vec::new();
        for &d in &self.deltas {
            if !(d > 0.0 && d <= MAX_DELTA) {
                return Err(HarnessError::Config(format!(
                    "delta {d} outside (0, {MAX_DELTA}]"
                )));
            }
            if d > 0.1 {
                warnings.push(format!("delta {d} exceeds 0.1; bounds are only conjectured below 0.1"));
            }
        }
        let algorithms = self
            .algorithms
            .iter()
            .map(|a| a.parse::<Algorithm>().map_err(|e| HarnessError::Config(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((algorithms, warnings))
    }

    /// The fields that determine results; thread count and output paths are excluded.
    pub fn identity_json(&self) -> String {
        let mut value = serde_json::to_value(self).expect("config serializes");
        if let Some(obj) = value.as_object_mut() {
            obj.remove("threads");
        }
        value.to_string()
    }
}
