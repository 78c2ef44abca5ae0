use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::adam::{Phase, TrainState};
use super::schedule::{clamped_growth, sigma_crit, sigma_zero, ScheduleConfig};
use crate::ansatz::{init_params, prepare_state, AnsatzKind, AnsatzSpec, ParamVector};
use crate::error::{Error, Result};
use crate::gradient::{energy, gradient_exact_noisy, GradientVector};
use crate::hamiltonian::PauliSum;
use crate::metrics::{effective_dimension, DEFAULT_DEFF_THRESHOLD};
use crate::rng::SeedStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Adaptive,
    Static,
    Hea,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Adaptive => "adaptive",
            Method::Static => "static",
            Method::Hea => "hea",
        }
    }
}

/// Extra knobs that do not belong to the schedule itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunOptions {
    /// Two-qubit depolarizing probability after each CNOT; 0 uses the statevector.
    pub noise_p: f64,
    /// Log `d_eff` of the noiseless state every this many steps.
    pub deff_every: Option<usize>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { noise_p: 0.0, deff_every: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t: usize,
    pub energy: f64,
    pub grad_norm2: f64,
    /// Initialization scale in force at this step; 0 for HEA.
    pub sigma: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub d_eff: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub method: Method,
    pub steps: Vec<StepRecord>,
    pub final_theta: ParamVector,
    pub t_switch: Option<usize>,
    pub forced_switch: bool,
    pub failed: Option<String>,
}

impl TrajectoryRecord {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn final_energy(&self) -> Option<f64> {
        self.steps.last().map(|s| s.energy)
    }
}

/// Two-phase adaptive training.
pub fn run_adaptive(spec: &AnsatzSpec, h: &PauliSum, config: &ScheduleConfig, seed: &SeedStream) -> Result<TrajectoryRecord> {
    run_with(Method::Adaptive, spec, h, config, seed, &RunOptions::default())
}

/// Fixed-σ₀ baseline: plain Adam from the narrow Gaussian initialization.
pub fn run_static(spec: &AnsatzSpec, h: &PauliSum, config: &ScheduleConfig, seed: &SeedStream) -> Result<TrajectoryRecord> {
    run_with(Method::Static, spec, h, config, seed, &RunOptions::default())
}

/// Hardware-efficient baseline with uniform initialization.
pub fn run_hea(spec: &AnsatzSpec, h: &PauliSum, config: &ScheduleConfig, seed: &SeedStream) -> Result<TrajectoryRecord> {
    run_with(Method::Hea, spec, h, config, seed, &RunOptions::default())
}

/// Shared loop behind the three methods.
///
/// Steps run `t = 0..=T`; each logs the cost and gradient at the current
/// parameters, and all but the last are followed by one Adam update, so a
/// complete record has `T + 1` entries. Initialization draws from the
/// `("init", 0)` child of `seed` and the Phase-II kick at step `t` from
/// `("xi", t)`, which makes `λ = 0` adaptive and static runs identical.
pub fn run_with(
    method: Method,
    spec: &AnsatzSpec,
    h: &PauliSum,
    config: &ScheduleConfig,
    seed: &SeedStream,
    opts: &RunOptions,
) -> Result<TrajectoryRecord> {
    config.validate()?;
    let want = if method == Method::Hea { AnsatzKind::Hea } else { AnsatzKind::HeftSpin };
    if spec.kind() != want {
        return Err(Error::domain(format!("{} training needs a {} ansatz, got {}", method.as_str(), want, spec.kind())));
    }
    if h.n_qubits() != spec.n_qubits() {
        return Err(Error::size(format!(
            "{}-qubit Hamiltonian for a {}-qubit ansatz",
            h.n_qubits(),
            spec.n_qubits()
        )));
    }
    if opts.deff_every == Some(0) {
        return Err(Error::domain("deff_every must be at least 1"));
    }
    let (n, l) = (spec.n_qubits(), spec.layers());
    let s0 = sigma_zero(n, l, config.kappa);
    let crit = sigma_crit(n, l, config.c2);
    if method != Method::Hea && s0 > crit {
        return Err(Error::domain(format!("sigma0 = {s0} exceeds sigma_crit = {crit}")));
    }
    // Validates noise_p and the register cap before any work.
    let theta0 = init_params(spec, s0, &mut seed.child("init", 0).rng())?;
    energy(spec, &theta0, h, opts.noise_p)?;

    let total = config.total_steps;
    let mut state = TrainState::new(theta0, if method == Method::Hea { 0.0 } else { s0 });
    let mut record = TrajectoryRecord {
        method,
        steps: Vec::with_capacity(total + 1),
        final_theta: state.theta.clone(),
        t_switch: None,
        forced_switch: false,
        failed: None,
    };

    let evaluate = |theta: &ParamVector| -> Result<(f64, GradientVector)> {
        let e = energy(spec, theta, h, opts.noise_p)?;
        if !e.is_finite() {
            return Err(Error::numeric(format!("non-finite energy {e}")));
        }
        Ok((e, gradient_exact_noisy(spec, theta, h, opts.noise_p)?))
    };
    let kick = |state: &mut TrainState, t: usize, ts: usize| -> Result<()> {
        state.sigma_current = phase_two_kick(&mut state.theta, t, ts, s0, config.lambda, crit, seed)?;
        Ok(())
    };

    let body = |state: &mut TrainState, record: &mut TrajectoryRecord| -> Result<()> {
        for t in 0..=total {
            if method == Method::Adaptive && state.phase == Phase::One && t >= config.phase1_cap {
                state.phase = Phase::Two;
                state.t_switch = Some(t);
                record.forced_switch = true;
            }
            if let (Phase::Two, Some(ts), true) = (state.phase, state.t_switch, t < total) {
                kick(state, t, ts)?;
            }
            let (mut e, mut g) = evaluate(&state.theta)?;
            if method == Method::Adaptive
                && state.phase == Phase::One
                && t >= config.burn_in
                && t < total
                && g.norm() < config.delta_switch
            {
                state.phase = Phase::Two;
                state.t_switch = Some(t);
                kick(state, t, t)?;
                (e, g) = evaluate(&state.theta)?;
            }
            let d_eff = match opts.deff_every {
                Some(k) if t % k == 0 => {
                    Some(effective_dimension(&prepare_state(spec, &state.theta)?, DEFAULT_DEFF_THRESHOLD)?)
                }
                _ => None,
            };
            record.steps.push(StepRecord {
                t,
                energy: e,
                grad_norm2: g.norm_sqr(),
                sigma: state.sigma_current,
                d_eff,
            });
            if t == total {
                break;
            }
            state.adam_step(&g, config.eta)?;
        }
        Ok(())
    };

    if let Err(e) = body(&mut state, &mut record) {
        record.failed = Some(e.to_string());
    }
    record.final_theta = state.theta;
    record.t_switch = state.t_switch;
    Ok(record)
}

/// Adds the Phase-II perturbation for step `t` to `theta` and returns the new
/// scale `σ_new`.
///
/// `ξ ~ N(0, (σ_new² − σ_prev²) I)` with `σ_new = min(σ₀ e^{λ(t − t_s)}, σ_crit)`
/// and `σ_prev` the same expression at `t − 1`. A zero variance draws nothing.
pub fn phase_two_kick(
    theta: &mut ParamVector,
    t: usize,
    t_switch: usize,
    sigma0: f64,
    lambda: f64,
    sigma_crit: f64,
    seed: &SeedStream,
) -> Result<f64> {
    let dt = t as f64 - t_switch as f64;
    let new = clamped_growth(dt, sigma0, lambda, sigma_crit);
    let prev = clamped_growth(dt - 1.0, sigma0, lambda, sigma_crit);
    let var = new * new - prev * prev;
    if var > 0.0 {
        let normal = Normal::new(0.0, var.sqrt()).map_err(|e| Error::numeric(e.to_string()))?;
        let mut rng = seed.child("xi", t as u64).rng();
        for x in theta.values_mut() {
            *x += normal.sample(&mut rng);
        }
    }
    Ok(new)
}
