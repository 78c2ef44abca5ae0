//! Cost evaluation and parameter-shift gradients.
//!
//! Every generator in both ansätze (`Y/2`, `Z/2`, and `ZZ/2` for the
//! entangler) has eigenvalues `±1/2`, so the two-term rule
//! `∂_j C = ½ [C(θ + π/2 e_j) − C(θ − π/2 e_j)]` is exact for every
//! parameter, entangler angles included.

use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ansatz::{build_circuit, prepare_state, AnsatzSpec, ParamVector};
use crate::error::{Error, Result};
use crate::hamiltonian::{expectation, expectation_mixed, PauliSum};
use crate::sim::{apply_depolarizing_pair, zero_state, GateOp, MixedState};
use crate::MAX_MIXED_QUBITS;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GradientVector(Vec<f64>);

impl GradientVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::numeric(format!("non-finite gradient entry {bad}")));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|g| g * g).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, g| m.max(g.abs()))
    }
}

fn check_dims(spec: &AnsatzSpec, theta: &ParamVector, h: &PauliSum) -> Result<()> {
    theta.check(spec)?;
    if h.n_qubits() != spec.n_qubits() {
        return Err(Error::size(format!(
            "{}-qubit Hamiltonian for a {}-qubit ansatz",
            h.n_qubits(),
            spec.n_qubits()
        )));
    }
    Ok(())
}

fn check_noise(p: f64, n_qubits: usize) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("noise probability {p} outside [0, 1]")));
    }
    if p > 0.0 && n_qubits > MAX_MIXED_QUBITS {
        return Err(Error::Resource(format!(
            "noisy simulation capped at {MAX_MIXED_QUBITS} qubits, got {n_qubits}"
        )));
    }
    Ok(())
}

/// `C(θ) = <ψ(θ)|H|ψ(θ)>`. `noise_p > 0` switches to the density-matrix path
/// with a two-qubit depolarizing channel after every CNOT.
pub fn energy(spec: &AnsatzSpec, theta: &ParamVector, h: &PauliSum, noise_p: f64) -> Result<f64> {
    check_dims(spec, theta, h)?;
    check_noise(noise_p, spec.n_qubits())?;
    if noise_p == 0.0 {
        expectation(h, &prepare_state(spec, theta)?)
    } else {
        energy_density(spec, theta, h, noise_p)
    }
}

/// Density-matrix evaluation regardless of `noise_p`, so `p = 0` can be
/// cross-checked against the statevector path.
pub fn energy_density(spec: &AnsatzSpec, theta: &ParamVector, h: &PauliSum, noise_p: f64) -> Result<f64> {
    check_dims(spec, theta, h)?;
    check_noise(noise_p, spec.n_qubits())?;
    let rho = prepare_mixed(spec, theta, noise_p)?;
    expectation_mixed(h, &rho)
}

/// Noisy output state `ρ(θ)`.
pub fn prepare_mixed(spec: &AnsatzSpec, theta: &ParamVector, noise_p: f64) -> Result<MixedState> {
    let mut rho = MixedState::from_pure(&zero_state(spec.n_qubits())?)?;
    for gate in build_circuit(spec, theta)? {
        rho.apply(&gate)?;
        if let GateOp::Cnot { control, target } = gate {
            apply_depolarizing_pair(&mut rho, control, target, noise_p)?;
        }
    }
    Ok(rho)
}

fn shifted(theta: &ParamVector, j: usize, delta: f64) -> ParamVector {
    let mut t = theta.clone();
    t.values_mut()[j] += delta;
    t
}

/// Exact parameter-shift gradient of the noiseless cost.
pub fn gradient_exact(spec: &AnsatzSpec, theta: &ParamVector, h: &PauliSum) -> Result<GradientVector> {
    gradient_exact_noisy(spec, theta, h, 0.0)
}

/// Exact parameter-shift gradient of the (possibly noisy) cost.
pub fn gradient_exact_noisy(
    spec: &AnsatzSpec,
    theta: &ParamVector,
    h: &PauliSum,
    noise_p: f64,
) -> Result<GradientVector> {
    check_dims(spec, theta, h)?;
    check_noise(noise_p, spec.n_qubits())?;
    let values = (0..theta.len())
        .into_par_iter()
        .map(|j| {
            let plus = energy(spec, &shifted(theta, j, FRAC_PI_2), h, noise_p)?;
            let minus = energy(spec, &shifted(theta, j, -FRAC_PI_2), h, noise_p)?;
            Ok(0.5 * (plus - minus))
        })
        .collect::<Result<Vec<_>>>()?;
    GradientVector::new(values)
}

/// Finite-shot estimate of `C(θ)`: each Pauli term is measured `shots` times
/// independently, its ±1 outcomes drawn from the exact outcome distribution.
pub fn sampled_energy<R: Rng + ?Sized>(
    spec: &AnsatzSpec,
    theta: &ParamVector,
    h: &PauliSum,
    shots: u64,
    rng: &mut R,
) -> Result<f64> {
    check_dims(spec, theta, h)?;
    if shots == 0 {
        return Err(Error::domain("shot count must be at least 1"));
    }
    let state = prepare_state(spec, theta)?;
    let amps = state.amplitudes();
    let mut total = 0.0;
    for term in h.terms() {
        let mean = term.expectation_unweighted(amps).re.clamp(-1.0, 1.0);
        let p_plus = 0.5 * (1.0 + mean);
        let plus = Binomial::new(shots, p_plus)
            .map_err(|e| Error::numeric(e.to_string()))?
            .sample(rng);
        total += term.coefficient() * (2.0 * plus as f64 / shots as f64 - 1.0);
    }
    Ok(total)
}

/// Parameter-shift gradient with every shifted cost estimated from `shots`
/// measurements per Pauli term.
///
/// One `u64` is drawn from `rng`; shift `(j, ±)` then uses its own ChaCha
/// stream keyed by that value, so the result does not depend on evaluation
/// order.
pub fn gradient_sampled<R: Rng + ?Sized>(
    spec: &AnsatzSpec,
    theta: &ParamVector,
    h: &PauliSum,
    shots: u64,
    rng: &mut R,
) -> Result<GradientVector> {
    check_dims(spec, theta, h)?;
    if shots == 0 {
        return Err(Error::domain("shot count must be at least 1"));
    }
    let base: u64 = rng.random();
    let values = (0..theta.len())
        .into_par_iter()
        .map(|j| {
            let mut est = [0.0; 2];
            for (s, delta) in [FRAC_PI_2, -FRAC_PI_2].into_iter().enumerate() {
                let mut sub = ChaCha8Rng::seed_from_u64(base);
                sub.set_stream((2 * j + s) as u64);
                est[s] = sampled_energy(spec, &shifted(theta, j, delta), h, shots, &mut sub)?;
            }
            Ok(0.5 * (est[0] - est[1]))
        })
        .collect::<Result<Vec<_>>>()?;
    GradientVector::new(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{build_tfim, build_xxz, PauliString};
    use rand::SeedableRng;

    fn single_qubit_z() -> PauliSum {
        PauliSum::new(2, vec![PauliString::parse(1.0, "ZI").unwrap()]).unwrap()
    }

    #[test]
    fn reference_state_energies() {
        let spec = AnsatzSpec::heft(4, 2).unwrap();
        let zero = ParamVector::zeros(&spec);
        assert_eq!(energy(&spec, &zero, &build_tfim(4).unwrap(), 0.0).unwrap(), -4.0);
        assert_eq!(energy(&spec, &zero, &build_xxz(4).unwrap(), 0.0).unwrap(), 4.0);
    }

    #[test]
    fn ry_only_derivative_is_minus_sine() {
        // HEA on 2 qubits, one layer: qubit 0 sees RY(θ0) then CNOT(0,1),
        // and <Z0> = cos θ0 is unaffected by the CNOT.
        let spec = AnsatzSpec::hea(2, 1).unwrap();
        let h = single_qubit_z();
        for (t, expect) in [(0.0, 0.0), (FRAC_PI_2, -1.0), (0.7, -(0.7f64).sin())] {
            let g = gradient_exact(&spec, &ParamVector::new(vec![t, 0.3]), &h).unwrap();
            assert!((g.values()[0] - expect).abs() < 1e-12, "θ={t}: {}", g.values()[0]);
            assert!(g.values()[1].abs() < 1e-12);
        }
    }

    #[test]
    fn noise_domain_and_resource_errors() {
        let spec = AnsatzSpec::heft(2, 1).unwrap();
        let theta = ParamVector::zeros(&spec);
        let h = build_tfim(2).unwrap();
        assert!(matches!(energy(&spec, &theta, &h, 1.2), Err(Error::Domain(_))));
        let big = AnsatzSpec::heft(11, 1).unwrap();
        let err = energy(&big, &ParamVector::zeros(&big), &build_tfim(11).unwrap(), 0.01).unwrap_err();
        assert!(matches!(err, Error::Resource(_)));
    }

    #[test]
    fn dimension_mismatch() {
        let spec = AnsatzSpec::heft(3, 1).unwrap();
        let err = energy(&spec, &ParamVector::zeros(&spec), &build_tfim(4).unwrap(), 0.0).unwrap_err();
        assert!(matches!(err, Error::Size(_)));
    }

    #[test]
    fn zero_shots_rejected() {
        let spec = AnsatzSpec::heft(2, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let err = gradient_sampled(&spec, &ParamVector::zeros(&spec), &build_tfim(2).unwrap(), 0, &mut rng);
        assert!(matches!(err, Err(Error::Domain(_))));
    }

    #[test]
    fn non_finite_gradient_rejected() {
        assert!(GradientVector::new(vec![0.0, f64::NAN]).is_err());
    }
}
