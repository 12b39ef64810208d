use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Predictions are clamped to `[CLAMP, 1 - CLAMP]` before taking logs.
pub const CLAMP: f64 = 1e-9;

/// Binary cross entropy of the predicted probability of label 1.
pub fn bce_loss(p1: f64, y: u8) -> f64 {
    let p = p1.clamp(CLAMP, 1.0 - CLAMP);
    if y == 1 {
        -libm::log(p)
    } else {
        -libm::log(1.0 - p)
    }
}

/// Derivative of [`bce_loss`] in `p1`; zero where the clamp is active.
pub fn bce_grad(p1: f64, y: u8) -> f64 {
    if !(CLAMP..=1.0 - CLAMP).contains(&p1) {
        return 0.0;
    }
    if y == 1 {
        -1.0 / p1
    } else {
        1.0 / (1.0 - p1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamConfig {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig { lr: 0.05, beta1: 0.9, beta2: 0.999, eps: 1e-8 }
    }
}

/// First and second moment estimates plus the step count.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AdamState {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub t: u64,
}

impl AdamState {
    pub fn new(n: usize) -> Self {
        AdamState { m: vec![0.0; n], v: vec![0.0; n], t: 0 }
    }
}

/// One bias-corrected Adam update of `params` in place.
pub fn adam_step(params: &mut [f64], grad: &[f64], state: &mut AdamState, cfg: &AdamConfig) {
    if state.m.len() != params.len() {
        *state = AdamState::new(params.len());
    }
    state.t += 1;
    let t = state.t as f64;
    let c1 = 1.0 - libm::pow(cfg.beta1, t);
    let c2 = 1.0 - libm::pow(cfg.beta2, t);
    for i in 0..params.len() {
        let g = grad[i];
        state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * g;
        state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * g * g;
        let m_hat = state.m[i] / c1;
        let v_hat = state.v[i] / c2;
        params[i] -= cfg.lr * m_hat / (libm::sqrt(v_hat) + cfg.eps);
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpsaConfig {
    pub a: f64,
    pub c: f64,
    /// Stability constant, usually a tenth of the iteration budget.
    pub big_a: f64,
    pub alpha: f64,
    pub gamma: f64,
}

impl SpsaConfig {
    pub fn for_iterations(iterations: usize) -> Self {
        SpsaConfig { a: 0.05, c: 0.06, big_a: 0.1 * iterations as f64, alpha: 0.602, gamma: 0.101 }
    }

    pub fn gains(&self, k: usize) -> (f64, f64) {
        let k = k as f64;
        let a_k = self.a / libm::pow(self.big_a + k + 1.0, self.alpha);
        let c_k = self.c / libm::pow(k + 1.0, self.gamma);
        (a_k, c_k)
    }
}

/// One SPSA update of `params` in place, using exactly two loss
/// evaluations. Returns the gradient estimate.
pub fn spsa_step<F>(params: &mut [f64], mut loss: F, k: usize, cfg: &SpsaConfig, seed: u64) -> Vec<f64>
where
    F: FnMut(&[f64]) -> f64,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let delta: Vec<f64> = (0..params.len()).map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 }).collect();
    let (a_k, c_k) = cfg.gains(k);
    let shifted = |sign: f64| -> Vec<f64> { params.iter().zip(&delta).map(|(p, d)| p + sign * c_k * d).collect() };
    let up = loss(&shifted(1.0));
    let down = loss(&shifted(-1.0));
    let diff = (up - down) / (2.0 * c_k);
    let grad: Vec<f64> = delta.iter().map(|d| diff / d).collect();
    for (p, g) in params.iter_mut().zip(&grad) {
        *p -= a_k * g;
    }
    grad
}
