//! TOML pipeline configuration.
//!
//! ```toml
//! seed = 0
//! reader = "ccg"          # ccg | cups | spiders
//! rewrite = []
//!
//! [ansatz]
//! kind = "spider"         # iqp | tensor | mps | spider
//! d = { n = 2, s = 2 }
//!
//! [backend]
//! kind = "exact"          # or: kind = "shots", shots = 8192, noise = 0.01
//!
//! [optimizer]
//! kind = "adam"           # or "spsa" with a, c, A, alpha, gamma
//! iterations = 100
//! ```

use std::collections::BTreeMap;

use qnlp_core::ansatz::{AnsatzConfig, TypeSizes, DEFAULT_BOND_DIM};
use qnlp_core::training::{AdamConfig, Backend, Optimizer, SpsaConfig, TrainConfig};
use qnlp_core::AtomicType;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ReaderKind {
    Ccg,
    Cups,
    Spiders,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum AnsatzSection {
    Iqp {
        q: BTreeMap<String, usize>,
        #[serde(default = "one")]
        layers: usize,
    },
    Tensor {
        d: BTreeMap<String, usize>,
    },
    Mps {
        d: BTreeMap<String, usize>,
        #[serde(default = "default_bond")]
        bond: usize,
        #[serde(default = "three")]
        max_order: usize,
    },
    Spider {
        d: BTreeMap<String, usize>,
        #[serde(default = "two")]
        max_order: usize,
    },
}

fn one() -> usize {
    1
}

fn two() -> usize {
    2
}

fn three() -> usize {
    3
}

fn default_bond() -> usize {
    DEFAULT_BOND_DIM
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum BackendSection {
    #[default]
    Exact,
    Shots {
        shots: u64,
        #[serde(default)]
        noise: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum OptimizerSection {
    Adam {
        iterations: usize,
        lr: Option<f64>,
        beta1: Option<f64>,
        beta2: Option<f64>,
        eps: Option<f64>,
    },
    Spsa {
        iterations: usize,
        a: Option<f64>,
        c: Option<f64>,
        #[serde(rename = "A")]
        big_a: Option<f64>,
        alpha: Option<f64>,
        gamma: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    #[serde(default)]
    pub seed: u64,
    pub reader: ReaderKind,
    #[serde(default)]
    pub rewrite: Vec<String>,
    pub ansatz: AnsatzSection,
    #[serde(default)]
    pub backend: BackendSection,
    pub optimizer: OptimizerSection,
}

/// Builds type sizes from `name = size` pairs.
pub fn type_sizes(map: &BTreeMap<String, usize>) -> Result<TypeSizes> {
    if map.is_empty() {
        return Err(Error::Config("no type sizes given".into()));
    }
    let mut sizes = TypeSizes::new();
    for (name, &size) in map {
        sizes = sizes.with(AtomicType::new(name.clone()), size)?;
    }
    Ok(sizes)
}

/// Parses `n=1,s=1`.
pub fn parse_sizes(text: &str) -> Result<BTreeMap<String, usize>> {
    let mut out = BTreeMap::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| Error::Config(format!("`{part}` is not name=size")))?;
        let v: usize = v.trim().parse().map_err(|_| Error::Config(format!("`{v}` is not a size")))?;
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}

impl AnsatzSection {
    pub fn to_config(&self) -> Result<AnsatzConfig> {
        Ok(match self {
            AnsatzSection::Iqp { q, layers } => AnsatzConfig::Iqp { qubits: type_sizes(q)?, layers: *layers },
            AnsatzSection::Tensor { d } => AnsatzConfig::Tensor { dims: type_sizes(d)? },
            AnsatzSection::Mps { d, bond, max_order } => {
                AnsatzConfig::Mps { dims: type_sizes(d)?, bond_dim: *bond, max_order: *max_order }
            }
            AnsatzSection::Spider { d, max_order } => AnsatzConfig::Spider { dims: type_sizes(d)?, max_order: *max_order },
        })
    }
}

impl OptimizerSection {
    pub fn iterations(&self) -> usize {
        match self {
            OptimizerSection::Adam { iterations, .. } | OptimizerSection::Spsa { iterations, .. } => *iterations,
        }
    }

    pub fn set_iterations(&mut self, n: usize) {
        match self {
            OptimizerSection::Adam { iterations, .. } | OptimizerSection::Spsa { iterations, .. } => *iterations = n,
        }
    }

    /// Unset fields take the library defaults.
    pub fn to_optimizer(&self) -> Optimizer {
        match *self {
            OptimizerSection::Adam { lr, beta1, beta2, eps, .. } => {
                let d = AdamConfig::default();
                Optimizer::Adam(AdamConfig {
                    lr: lr.unwrap_or(d.lr),
                    beta1: beta1.unwrap_or(d.beta1),
                    beta2: beta2.unwrap_or(d.beta2),
                    eps: eps.unwrap_or(d.eps),
                })
            }
            OptimizerSection::Spsa { iterations, a, c, big_a, alpha, gamma } => {
                let d = SpsaConfig::for_iterations(iterations);
                Optimizer::Spsa(SpsaConfig {
                    a: a.unwrap_or(d.a),
                    c: c.unwrap_or(d.c),
                    big_a: big_a.unwrap_or(d.big_a),
                    alpha: alpha.unwrap_or(d.alpha),
                    gamma: gamma.unwrap_or(d.gamma),
                })
            }
        }
    }
}

impl PipelineConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: PipelineConfig = toml::from_str(text).map_err(|e| Error::Parse {
            offset: e.span().map_or(0, |s| s.start),
            reason: e.message().to_string(),
        })?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Rejects combinations the pipeline cannot run.
    pub fn check(&self) -> Result<()> {
        let ansatz = self.ansatz.to_config()?;
        ansatz.validate()?;
        if ansatz.is_circuit() {
            if self.reader == ReaderKind::Spiders {
                return Err(Error::Config("the iqp ansatz cannot compile spider diagrams".into()));
            }
        } else if self.backend != BackendSection::Exact {
            return Err(Error::Config("tensor-network ansatze need the exact backend".into()));
        }
        if matches!(self.optimizer, OptimizerSection::Adam { .. }) && ansatz.is_circuit() {
            return Err(Error::Config("adam needs a tensor-network ansatz; use spsa for circuits".into()));
        }
        self.train_config().validate()?;
        Ok(())
    }

    pub fn backend(&self) -> Backend {
        match self.backend {
            BackendSection::Exact => Backend::Exact,
            BackendSection::Shots { shots, noise } => Backend::Shots { n_shots: shots, noise },
        }
    }

    pub fn train_config(&self) -> TrainConfig {
        TrainConfig {
            optimizer: self.optimizer.to_optimizer(),
            iterations: self.optimizer.iterations(),
            seed: self.seed,
            backend: self.backend(),
        }
    }
}
