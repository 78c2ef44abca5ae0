use serde::{Deserialize, Serialize};

use crate::ansatz::ParamVector;
use crate::error::{Error, Result};
use crate::gradient::GradientVector;

pub const ADAM_BETA1: f64 = 0.9;
pub const ADAM_BETA2: f64 = 0.999;
pub const ADAM_EPS: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    One,
    Two,
}

/// Optimizer state carried across steps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainState {
    pub theta: ParamVector,
    pub adam_m: Vec<f64>,
    pub adam_v: Vec<f64>,
    /// Number of Adam updates applied so far.
    pub step: usize,
    pub phase: Phase,
    pub sigma_current: f64,
    pub t_switch: Option<usize>,
}

impl TrainState {
    pub fn new(theta: ParamVector, sigma: f64) -> Self {
        let p = theta.len();
        Self {
            theta,
            adam_m: vec![0.0; p],
            adam_v: vec![0.0; p],
            step: 0,
            phase: Phase::One,
            sigma_current: sigma,
            t_switch: None,
        }
    }

    /// One bias-corrected Adam update with learning rate `eta`.
    pub fn adam_step(&mut self, grad: &GradientVector, eta: f64) -> Result<()> {
        if grad.len() != self.theta.len() {
            return Err(Error::size(format!(
                "gradient has {} entries, parameters {}",
                grad.len(),
                self.theta.len()
            )));
        }
        if let Some(bad) = grad.values().iter().find(|g| !g.is_finite()) {
            return Err(Error::numeric(format!("non-finite gradient entry {bad}")));
        }
        self.step += 1;
        let t = self.step as i32;
        let c1 = 1.0 - ADAM_BETA1.powi(t);
        let c2 = 1.0 - ADAM_BETA2.powi(t);
        let params = self.theta.values_mut();
        for (k, &g) in grad.values().iter().enumerate() {
            let m = ADAM_BETA1 * self.adam_m[k] + (1.0 - ADAM_BETA1) * g;
            let v = ADAM_BETA2 * self.adam_v[k] + (1.0 - ADAM_BETA2) * g * g;
            self.adam_m[k] = m;
            self.adam_v[k] = v;
            params[k] -= eta * (m / c1) / ((v / c2).sqrt() + ADAM_EPS);
        }
        Ok(())
    }
}

/// Functional form of [`TrainState::adam_step`].
pub fn adam_step(state: &TrainState, grad: &GradientVector, eta: f64) -> Result<TrainState> {
    let mut next = state.clone();
    next.adam_step(grad, eta)?;
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grad(v: Vec<f64>) -> GradientVector {
        GradientVector::new(v).unwrap()
    }

    #[test]
    fn zero_gradient_is_a_fixed_point() {
        let s = TrainState::new(ParamVector::new(vec![0.3, -0.2]), 0.1);
        let next = adam_step(&s, &grad(vec![0.0, 0.0]), 0.01).unwrap();
        assert_eq!(next.theta, s.theta);
        assert_eq!(next.step, 1);

        let mut warm = s.clone();
        warm.adam_m = vec![0.5, -0.5];
        warm.adam_v = vec![0.25, 0.25];
        let next = adam_step(&warm, &grad(vec![0.0, 0.0]), 0.01).unwrap();
        assert!((next.adam_m[0] - 0.45).abs() < 1e-15);
        assert!((next.adam_v[1] - 0.24975).abs() < 1e-15);
    }

    #[test]
    fn first_step_moves_eta_against_gradient() {
        let s = TrainState::new(ParamVector::new(vec![0.0, 0.0, 0.0]), 0.1);
        let next = adam_step(&s, &grad(vec![3.0, -0.2, 1e-3]), 0.01).unwrap();
        for (x, sign) in next.theta.values().iter().zip([-1.0, 1.0, -1.0]) {
            assert!((x - sign * 0.01).abs() < 1e-7, "{x}");
        }
    }

    #[test]
    fn quadratic_converges() {
        // f(θ) = θ², f' = 2θ, from θ = 1 with η = 0.01.
        let mut s = TrainState::new(ParamVector::new(vec![1.0]), 0.0);
        for _ in 0..500 {
            let g = 2.0 * s.theta.values()[0];
            s.adam_step(&grad(vec![g]), 0.01).unwrap();
        }
        assert!(s.theta.values()[0].powi(2) < 1e-2);
    }

    #[test]
    fn mismatched_gradient() {
        let mut s = TrainState::new(ParamVector::new(vec![0.0]), 0.0);
        assert!(matches!(s.adam_step(&grad(vec![1.0, 2.0]), 0.01), Err(Error::Size(_))));
    }
}
