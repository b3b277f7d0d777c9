//! Hybrid regularizer `ψ_t(x) = Σ_i β_i(t) φ_i(x_i)` and its adaptive weights.
//!
//! With `w = z / n_i` and `γ = log T`,
//!
//! ```text
//! φ_i(z) = n_i (w − 1 − log w + γ (w + (1 − w) log(1 − w)))
//! β_i(t) = sqrt((1 + ε_i/n_i)² + (1/γ) Σ_{s<t} α_i(s))
//! α_i(s) = (a_i/n_i)² (k_i − q_i)² min{1, 2(1 − x_i/n_i) / ((x_i/n_i)² γ)}
//! ```

use crate::error::{Error, Result};

fn xlogx(w: f64) -> f64 {
    if w == 0.0 {
        0.0
    } else {
        w * w.ln()
    }
}

/// `φ(z)` on `(0, n]`, using `0 log 0 = 0` at `z = n`; `+∞` elsewhere.
pub fn phi(z: f64, n: f64, gamma: f64) -> f64 {
    if !(z > 0.0 && z <= n) {
        return f64::INFINITY;
    }
    let w = z / n;
    n * (w - 1.0 - w.ln() + gamma * (w + xlogx(1.0 - w)))
}

/// `φ'(z) = 1 − n/z − γ log(1 − z/n)` on `(0, n)`.
pub fn phi_prime(z: f64, n: f64, gamma: f64) -> f64 {
    1.0 - n / z - gamma * (-z / n).ln_1p()
}

/// `φ''(z) = n/z² + γ/(n − z)` on `(0, n)`.
pub fn phi_second(z: f64, n: f64, gamma: f64) -> f64 {
    n / (z * z) + gamma / (n - z)
}

/// Adaptive regularization state: per-arm `ε_i`, running `Σ α_i` and `γ = log T`.
#[derive(Debug, Clone)]
pub struct RegState {
    caps: Vec<f64>,
    epsilon: Vec<f64>,
    alpha_sum: Vec<f64>,
    last_alpha: Vec<f64>,
    gamma: f64,
}

impl RegState {
    /// `ε_i = epsilon_fraction · n_i` with `epsilon_fraction ∈ (0, ½]`.
    pub fn new(caps: &[u32], epsilon_fraction: f64, horizon: u64) -> Result<Self> {
        if !(epsilon_fraction > 0.0 && epsilon_fraction <= 0.5) {
            return Err(Error::Config(format!(
                "epsilon fraction {epsilon_fraction} outside (0, 0.5]"
            )));
        }
        if horizon == 0 {
            return Err(Error::Config("horizon must be at least 1".into()));
        }
        let caps: Vec<f64> = caps.iter().map(|&c| f64::from(c)).collect();
        Ok(Self {
            epsilon: caps.iter().map(|n| epsilon_fraction * n).collect(),
            alpha_sum: vec![0.0; caps.len()],
            last_alpha: vec![0.0; caps.len()],
            gamma: (horizon as f64).ln(),
            caps,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn caps(&self) -> &[f64] {
        &self.caps
    }

    pub fn beta(&self, i: usize) -> f64 {
        let base = 1.0 + self.epsilon[i] / self.caps[i];
        // γ = 0 only when T = 1, where the sum is still empty.
        let adaptive = if self.gamma > 0.0 {
            self.alpha_sum[i] / self.gamma
        } else {
            0.0
        };
        (base * base + adaptive).sqrt()
    }

    pub fn betas(&self) -> Vec<f64> {
        (0..self.caps.len()).map(|i| self.beta(i)).collect()
    }

    /// `α_i` of the most recent update.
    pub fn last_alpha(&self) -> &[f64] {
        &self.last_alpha
    }

    pub fn alpha_sums(&self) -> &[f64] {
        &self.alpha_sum
    }

    /// Single-round summand `α_i`; zero when the arm was not played.
    pub fn alpha(&self, i: usize, plays: u32, k: Option<f64>, q: f64, x: f64) -> f64 {
        let Some(k) = k.filter(|_| plays > 0) else {
            return 0.0;
        };
        let n = self.caps[i];
        let share = f64::from(plays) / n;
        let w = x / n;
        let damping = if self.gamma > 0.0 {
            (2.0 * (1.0 - w) / (w * w * self.gamma)).min(1.0)
        } else {
            1.0
        };
        share * share * (k - q) * (k - q) * damping
    }

    /// Accumulates `α_i(t)` so that `β_i(t + 1)` is available.
    pub fn update(&mut self, plays: &[u32], x: &[f64], k: &[Option<f64>], q: &[f64]) {
        for i in 0..self.caps.len() {
            let alpha = self.alpha(i, plays[i], k[i], q[i], x[i]);
            self.last_alpha[i] = alpha;
            self.alpha_sum[i] += alpha;
        }
    }

    /// `(ψ_t(x), ∇ψ_t(x))` at a strictly interior `x`.
    pub fn value_grad(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        regularizer_value_grad(x, &self.caps, &self.betas(), self.gamma)
    }
}

/// `(Σ β_i φ_i(x_i), (β_i φ_i'(x_i))_i)`; every `x_i` must lie in `(0, n_i)`.
pub fn regularizer_value_grad(
    x: &[f64],
    caps: &[f64],
    betas: &[f64],
    gamma: f64,
) -> Result<(f64, Vec<f64>)> {
    if x.len() != caps.len() || betas.len() != caps.len() {
        return Err(Error::DimensionMismatch {
            expected: caps.len(),
            actual: x.len(),
        });
    }
    let mut value = 0.0;
    let mut grad = Vec::with_capacity(x.len());
    for (arm, ((&z, &n), &beta)) in x.iter().zip(caps).zip(betas).enumerate() {
        if !(z > 0.0 && z < n) {
            return Err(Error::Domain { arm, value: z });
        }
        value += beta * phi(z, n, gamma);
        grad.push(beta * phi_prime(z, n, gamma));
    }
    Ok((value, grad))
}
