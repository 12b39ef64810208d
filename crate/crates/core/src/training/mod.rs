//! Datasets, losses, optimisers and the full-batch training loop.

mod dataset;
mod optim;

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Normal};

use crate::ansatz::{compile, AnsatzConfig, Compiled};
use crate::backends::{contract, contract_grad, evaluate, sample, ParameterStore, Tensor};
use crate::diagram::Diagram;
use crate::error::{Error, Result};

pub use dataset::{
    dataset_derivation, generate_dataset, LabeledDataset, Topic, DATASET_SIZE, FOOD, IT, SEED_SENTENCES,
    SPLIT_PER_CLASS,
};
pub use optim::{adam_step, bce_grad, bce_loss, spsa_step, AdamConfig, AdamState, SpsaConfig, CLAMP};

/// How compiled sentences are evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Backend {
    Exact,
    Shots { n_shots: u64, noise: Option<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Optimizer {
    Adam(AdamConfig),
    Spsa(SpsaConfig),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub optimizer: Optimizer,
    pub iterations: usize,
    pub seed: u64,
    pub backend: Backend,
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        match self.optimizer {
            Optimizer::Adam(a) => {
                if !(a.lr > 0.0 && a.eps > 0.0 && (0.0..1.0).contains(&a.beta1) && (0.0..1.0).contains(&a.beta2)) {
                    return bad(format!("invalid Adam settings {a:?}"));
                }
            }
            Optimizer::Spsa(s) => {
                if !(s.a > 0.0 && s.c > 0.0 && s.big_a >= 0.0 && s.alpha > 0.0 && s.gamma > 0.0) {
                    return bad(format!("invalid SPSA settings {s:?}"));
                }
            }
        }
        if let Backend::Shots { n_shots, noise } = self.backend {
            if n_shots == 0 {
                return bad("shot count must be positive".into());
            }
            if let Some(p) = noise {
                if !(0.0..=1.0).contains(&p) {
                    return bad(format!("noise probability {p} is outside [0, 1]"));
                }
            }
        }
        Ok(())
    }
}

/// Metrics after one optimisation step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Record {
    pub iter: usize,
    pub train_loss: f64,
    pub train_acc: f64,
    pub dev_loss: f64,
    pub dev_acc: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainResult {
    pub params: ParameterStore,
    pub history: Vec<Record>,
    pub test_loss: f64,
    pub test_acc: f64,
}

/// Compiles every sentence, reporting all failures at once.
pub fn compile_dataset<F>(ds: &LabeledDataset, mut diagram: F, ansatz: &AnsatzConfig) -> Result<Vec<Compiled>>
where
    F: FnMut(usize, &str) -> Result<Diagram>,
{
    let mut out = Vec::with_capacity(ds.items.len());
    let mut failures: Vec<String> = Vec::new();
    for (i, (text, _)) in ds.items.iter().enumerate() {
        match diagram(i, text).and_then(|d| compile(&d, ansatz)) {
            Ok(c) => out.push(c),
            Err(e) => failures.push(format!("`{text}`: {e}")),
        }
    }
    if let Some(first) = failures.first() {
        return Err(Error::Compile { count: failures.len(), first: first.clone() });
    }
    Ok(out)
}

/// Angles uniform in `[0, 2π)`; tensor entries normal with standard
/// deviation `1/√d`, `d` being the largest leg dimension.
pub fn init_params(models: &[Compiled], seed: u64) -> Result<ParameterStore> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ps = ParameterStore::new();
    for m in models {
        ps.extend_with(m.symbols(), |sym| {
            if sym.shape.is_empty() {
                vec![rng.random_range(0.0..core::f64::consts::TAU)]
            } else {
                let d = sym.shape.iter().copied().max().unwrap_or(1) as f64;
                let normal = Normal::new(0.0, 1.0 / libm::sqrt(d)).expect("positive deviation");
                (0..sym.size()).map(|_| normal.sample(&mut rng)).collect()
            }
        })?;
    }
    Ok(ps)
}

/// `v₁² / (v₀² + v₁²)` for a two-dimensional sentence vector.
pub fn p1_from_vector(v: &[f64]) -> Result<f64> {
    let [v0, v1] = v else {
        return Err(Error::InvalidConfig(format!(
            "sentence space must have dimension 2 to classify, got {}",
            v.len()
        )));
    };
    let norm = v0 * v0 + v1 * v1;
    if norm < 1e-300 {
        return Err(Error::ZeroNorm(norm));
    }
    Ok(v1 * v1 / norm)
}

/// Probability of label 1. Degenerate evaluations (vanishing norm, every
/// shot discarded) give 0.5 and a warning.
pub fn predict(model: &Compiled, ps: &ParameterStore, backend: Backend, seed: u64) -> Result<f64> {
    let raw = match (model, backend) {
        (Compiled::Network(tn), Backend::Exact) => contract(tn, ps).and_then(|t| p1_from_vector(&t.data)),
        (Compiled::Network(_), Backend::Shots { .. }) => {
            return Err(Error::InvalidConfig("tensor networks are evaluated exactly".into()))
        }
        (Compiled::Circuit(c), Backend::Exact) => evaluate(c, ps).map(|d| d.marginal_one(0)),
        (Compiled::Circuit(c), Backend::Shots { n_shots, noise }) => {
            sample(c, ps, n_shots, seed, noise).map(|k| k.marginal_one(0))
        }
    };
    match raw {
        Err(e @ (Error::ZeroNorm(_) | Error::AllShotsDiscarded(_))) => {
            log::warn!("degenerate prediction ({e}); using 0.5");
            Ok(0.5)
        }
        other => other,
    }
}

/// Mean loss and accuracy of `ps` on the given items.
pub fn score(
    models: &[Compiled],
    ds: &LabeledDataset,
    idx: &[usize],
    ps: &ParameterStore,
    backend: Backend,
    seed_of: impl Fn(usize) -> u64,
) -> Result<(f64, f64)> {
    if idx.is_empty() {
        return Ok((0.0, 0.0));
    }
    let mut loss = 0.0;
    let mut correct = 0usize;
    for &i in idx {
        let p = predict(&models[i], ps, backend, seed_of(i))?;
        let y = ds.label(i);
        loss += bce_loss(p, y);
        if (p > 0.5) == (y == 1) {
            correct += 1;
        }
    }
    let n = idx.len() as f64;
    Ok((loss / n, correct as f64 / n))
}

/// Deterministic seed for one (iteration, sentence, purpose) triple.
pub fn derive_seed(base: u64, iter: u64, item: u64, purpose: u64) -> u64 {
    let mut z = base;
    for x in [iter, item, purpose] {
        z = splitmix(z ^ splitmix(x.wrapping_add(0x9E37_79B9_7F4A_7C15)));
    }
    z
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const TRAIN_EVAL: u64 = 0;
const SPSA_EVAL: u64 = 1;
const DEV_EVAL: u64 = 2;
const TEST_EVAL: u64 = 3;
const SPSA_DIRECTION: u64 = 4;

/// Mean training loss and its exact gradient for tensor models.
fn loss_and_grad(models: &[Compiled], ds: &LabeledDataset, ps: &ParameterStore) -> Result<(f64, Vec<f64>)> {
    let mut grad = vec![0.0; ps.len()];
    let mut loss = 0.0;
    let n = ds.train.len().max(1) as f64;
    for &i in &ds.train {
        let Compiled::Network(tn) = &models[i] else {
            return Err(Error::InvalidConfig("Adam needs tensor-network models".into()));
        };
        let v = contract(tn, ps)?;
        let y = ds.label(i);
        let p = match p1_from_vector(&v.data) {
            Ok(p) => p,
            Err(Error::ZeroNorm(_)) => {
                loss += bce_loss(0.5, y) / n;
                continue;
            }
            Err(e) => return Err(e),
        };
        loss += bce_loss(p, y) / n;
        let dl_dp = bce_grad(p, y) / n;
        let (v0, v1) = (v.data[0], v.data[1]);
        let norm = v0 * v0 + v1 * v1;
        let dp = [-2.0 * v0 * v1 * v1 / (norm * norm), 2.0 * v1 * v0 * v0 / (norm * norm)];
        let upstream = Tensor::new(v.shape.clone(), vec![dl_dp * dp[0], dl_dp * dp[1]])?;
        for (g, x) in grad.iter_mut().zip(contract_grad(tn, ps, &upstream)?) {
            *g += x;
        }
    }
    Ok((loss, grad))
}

/// Full-batch training from a seeded initialisation.
pub fn train(models: &[Compiled], ds: &LabeledDataset, cfg: &TrainConfig) -> Result<TrainResult> {
    cfg.validate()?;
    ds.validate()?;
    if models.len() != ds.items.len() {
        return Err(Error::InvalidConfig(format!(
            "{} compiled models for {} sentences",
            models.len(),
            ds.items.len()
        )));
    }
    if models.iter().any(|m| matches!(m, Compiled::Network(_))) && cfg.backend != Backend::Exact {
        return Err(Error::InvalidConfig("tensor networks are evaluated exactly".into()));
    }
    let mut ps = init_params(models, cfg.seed)?;
    let seeds = |iter: usize, purpose: u64| move |i: usize| derive_seed(cfg.seed, iter as u64, i as u64, purpose);
    let mut history = Vec::with_capacity(cfg.iterations);
    let mut adam = AdamState::new(ps.len());

    for k in 0..cfg.iterations {
        match cfg.optimizer {
            Optimizer::Adam(a) => {
                let (_, grad) = loss_and_grad(models, ds, &ps)?;
                adam_step(ps.values_mut(), &grad, &mut adam, &a);
            }
            Optimizer::Spsa(s) => {
                let mut values = ps.values().to_vec();
                let mut failure = None;
                let seed_of = seeds(k, SPSA_EVAL);
                spsa_step(
                    &mut values,
                    |theta| {
                        let trial = ps.with_values(theta.to_vec()).expect("same layout");
                        match score(models, ds, &ds.train, &trial, cfg.backend, seed_of) {
                            Ok((loss, _)) => loss,
                            Err(e) => {
                                failure.get_or_insert(e);
                                0.0
                            }
                        }
                    },
                    k,
                    &s,
                    derive_seed(cfg.seed, k as u64, 0, SPSA_DIRECTION),
                );
                if let Some(e) = failure {
                    return Err(e);
                }
                ps.values_mut().copy_from_slice(&values);
            }
        }
        let (train_loss, train_acc) = score(models, ds, &ds.train, &ps, cfg.backend, seeds(k, TRAIN_EVAL))?;
        let (dev_loss, dev_acc) = score(models, ds, &ds.dev, &ps, cfg.backend, seeds(k, DEV_EVAL))?;
        log::debug!("iter {} train {train_loss:.4}/{train_acc:.3} dev {dev_loss:.4}/{dev_acc:.3}", k + 1);
        history.push(Record { iter: k + 1, train_loss, train_acc, dev_loss, dev_acc });
    }
    let (test_loss, test_acc) = score(models, ds, &ds.test, &ps, cfg.backend, seeds(cfg.iterations, TEST_EVAL))?;
    Ok(TrainResult { params: ps, history, test_loss, test_acc })
}

/// Test metrics for trained parameters, evaluated exactly as at the end of
/// [`train`].
pub fn evaluate_test(models: &[Compiled], ds: &LabeledDataset, ps: &ParameterStore, cfg: &TrainConfig) -> Result<(f64, f64)> {
    score(models, ds, &ds.test, ps, cfg.backend, |i| {
        derive_seed(cfg.seed, cfg.iterations as u64, i as u64, TEST_EVAL)
    })
}

/// First iteration from which the mean development accuracy over a window
/// of `window` records reaches `threshold`.
pub fn converged_at(history: &[Record], threshold: f64, window: usize) -> Option<usize> {
    let w = window.max(1);
    if history.len() < w {
        return None;
    }
    (0..=history.len() - w)
        .find(|&s| history[s..s + w].iter().map(|r| r.dev_acc).sum::<f64>() / w as f64 >= threshold)
        .map(|s| history[s].iter)
}

/// Settling iteration of the development accuracy: the first iteration
/// from which the mean over every later window of `window` records stays
/// within `band` of the final window's mean.
pub fn settled_at(history: &[Record], window: usize, band: f64) -> Option<usize> {
    let w = window.max(1);
    if history.len() < w {
        return None;
    }
    let means: Vec<f64> =
        history.windows(w).map(|r| r.iter().map(|r| r.dev_acc).sum::<f64>() / w as f64).collect();
    let last = *means.last()?;
    let first_inside = means.iter().rposition(|m| (m - last).abs() > band).map_or(0, |i| i + 1);
    Some(history[first_inside].iter)
}
