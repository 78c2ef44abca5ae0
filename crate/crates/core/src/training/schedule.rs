use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hyperparameters of the two-phase protocol and its baselines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScheduleConfig {
    pub kappa: f64,
    pub lambda: f64,
    pub c1: f64,
    pub c2: f64,
    pub delta_switch: f64,
    pub burn_in: usize,
    pub total_steps: usize,
    pub phase1_cap: usize,
    pub eta: f64,
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        Self {
            kappa: 0.1,
            lambda: 0.02,
            c1: 2.0,
            c2: 0.5,
            delta_switch: 1e-3,
            burn_in: 10,
            total_steps: 200,
            phase1_cap: 100,
            eta: 0.01,
        }
    }
}

impl ScheduleConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("kappa", self.kappa),
            ("c2", self.c2),
            ("delta_switch", self.delta_switch),
            ("eta", self.eta),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::domain(format!("lambda must be non-negative, got {}", self.lambda)));
        }
        if !(self.c1 > 0.0 && self.c1.is_finite()) {
            return Err(Error::domain(format!("c1 must be positive, got {}", self.c1)));
        }
        if self.burn_in > self.phase1_cap {
            return Err(Error::domain(format!("burn_in {} exceeds phase1_cap {}", self.burn_in, self.phase1_cap)));
        }
        if self.phase1_cap > self.total_steps {
            return Err(Error::domain(format!(
                "phase1_cap {} exceeds total_steps {}",
                self.phase1_cap, self.total_steps
            )));
        }
        Ok(())
    }
}

/// `σ₀ = κ / (L N)`.
pub fn sigma_zero(n_qubits: usize, layers: usize, kappa: f64) -> f64 {
    kappa / (layers * n_qubits) as f64
}

/// `σ_crit = c₂ / √(L N)`.
pub fn sigma_crit(n_qubits: usize, layers: usize, c2: f64) -> f64 {
    c2 / ((layers * n_qubits) as f64).sqrt()
}

/// Initialization scale at step `t`: `σ₀` before the switch, then
/// `min(σ₀ e^{λ(t − t_switch)}, σ_crit)`.
pub fn sigma_schedule(t: usize, t_switch: usize, sigma0: f64, lambda: f64, sigma_crit: f64) -> f64 {
    if t < t_switch {
        sigma0
    } else {
        clamped_growth(t as f64 - t_switch as f64, sigma0, lambda, sigma_crit)
    }
}

/// `min(σ₀ e^{λ Δt}, σ_crit)` for any real `Δt`, including the `Δt = −1`
/// evaluated for the previous scale on the first expansion step.
pub(crate) fn clamped_growth(dt: f64, sigma0: f64, lambda: f64, sigma_crit: f64) -> f64 {
    (sigma0 * (lambda * dt).exp()).min(sigma_crit)
}

/// Diagnostic constants of the critical-cutoff analysis for one `(N, L)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheoryConstants {
    /// `M_tot = c₁ L N`.
    pub m_tot: f64,
    /// `δ_eff = 3 c₁ c₂ √(L N)`.
    pub delta_eff: f64,
    /// `w_max = ⌊δ_eff⌋`.
    pub w_max: u64,
    /// `κ_lb = B² w_max² / (4 e² N²)`.
    pub kappa_lb: f64,
    /// `κ_lb / (L N)²`, the per-parameter variance floor.
    pub variance_floor: f64,
    /// Union bound `4 L N e^{−9/2}` on some `|θ_k| > 3σ`.
    pub union_bound: f64,
    /// `Σ_{w ≤ min(w_max, N)} C(N, w)`, the effective-dimension ceiling.
    pub deff_ceiling: f64,
}

pub fn theory_constants(n_qubits: usize, layers: usize, c1: f64, c2: f64, b: f64) -> TheoryConstants {
    let n = n_qubits as f64;
    let ln = (layers * n_qubits) as f64;
    let delta_eff = 3.0 * c1 * c2 * ln.sqrt();
    let w_max = delta_eff.floor().max(0.0) as u64;
    let e2 = std::f64::consts::E * std::f64::consts::E;
    let kappa_lb = b * b * (w_max as f64).powi(2) / (4.0 * e2 * n * n);
    let top = (w_max as usize).min(n_qubits);
    let mut binom = 1.0f64;
    let mut ceiling = 1.0f64;
    for w in 1..=top {
        binom = binom * (n_qubits + 1 - w) as f64 / w as f64;
        ceiling += binom;
    }
    TheoryConstants {
        m_tot: c1 * ln,
        delta_eff,
        w_max,
        kappa_lb,
        variance_floor: kappa_lb / (ln * ln),
        union_bound: 4.0 * ln * (-4.5f64).exp(),
        deff_ceiling: ceiling,
    }
}

/// Hamming-weight ceiling during expansion:
/// `⌊3 c₁ c₂ √(LN) e^{λ(t − t_switch)}⌋`, clamped at `⌊3 c₁ c₂ √(LN)⌋`.
pub fn w_max_at(t: usize, t_switch: usize, n_qubits: usize, layers: usize, c1: f64, c2: f64, lambda: f64) -> u64 {
    let base = 3.0 * c1 * c2 * ((layers * n_qubits) as f64).sqrt();
    let dt = t.saturating_sub(t_switch) as f64;
    (base * (lambda * dt).exp()).min(base).floor() as u64
}
