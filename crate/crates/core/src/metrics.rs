//! Observables aggregated by the experiments.

use std::f64::consts::TAU;

use rand::Rng;
use rand_distr::Uniform;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ansatz::{gaussian_params, prepare_state, AnsatzSpec, ParamVector};
use crate::error::{Error, Result};
use crate::gradient::GradientVector;
use crate::hamiltonian::GroundSolution;
use crate::sim::{overlap, reduced_density, vn_entropy, PureState};

pub const DEFAULT_DEFF_THRESHOLD: f64 = 1e-6;

/// Gradient statistics over a set of seeds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GVReport {
    /// Sample mean of `‖∇C‖²`.
    pub mean_sq_norm: f64,
    /// `mean_sq_norm / P`, the mean squared partial derivative.
    pub mean_sq_per_param: f64,
    /// Unbiased `Var[∂_j C]` across seeds.
    pub per_param_variance: Vec<f64>,
    pub n_seeds: usize,
    /// Standard error of `mean_sq_norm`.
    pub std_err: f64,
}

pub fn gv_report(gradients: &[GradientVector]) -> Result<GVReport> {
    let n = gradients.len();
    if n < 2 {
        return Err(Error::domain(format!("gradient statistics need at least 2 samples, got {n}")));
    }
    let p = gradients[0].len();
    if let Some(g) = gradients.iter().find(|g| g.len() != p) {
        return Err(Error::size(format!("gradient lengths differ: {} vs {p}", g.len())));
    }
    let norms: Vec<f64> = gradients.iter().map(GradientVector::norm_sqr).collect();
    let mean = norms.iter().sum::<f64>() / n as f64;
    let var = norms.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let per_param_variance = (0..p)
        .map(|j| {
            let m = gradients.iter().map(|g| g.values()[j]).sum::<f64>() / n as f64;
            gradients.iter().map(|g| (g.values()[j] - m).powi(2)).sum::<f64>() / (n - 1) as f64
        })
        .collect();
    Ok(GVReport {
        mean_sq_norm: mean,
        mean_sq_per_param: if p == 0 { 0.0 } else { mean / p as f64 },
        per_param_variance,
        n_seeds: n,
        std_err: (var / n as f64).sqrt(),
    })
}

/// Number of basis amplitudes with magnitude above `eps_thr`.
pub fn effective_dimension(state: &PureState, eps_thr: f64) -> Result<usize> {
    if !(eps_thr > 0.0) {
        return Err(Error::domain(format!("threshold must be positive, got {eps_thr}")));
    }
    Ok(state.amplitudes().iter().filter(|a| a.norm() > eps_thr).count())
}

/// Weight of `state` in the ground space.
pub fn fidelity_to_ground(state: &PureState, gs: &GroundSolution) -> Result<f64> {
    gs.projection_weight(state)
}

/// Von Neumann entropy in bits of the first `cut` qubits.
pub fn half_chain_entropy(state: &PureState, cut: usize) -> Result<f64> {
    if cut == 0 || cut >= state.n_qubits() {
        return Err(Error::domain(format!("cut {cut} must split a {}-qubit chain", state.n_qubits())));
    }
    let keep: Vec<usize> = (0..cut).collect();
    Ok(vn_entropy(&reduced_density(state, &keep)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Sampler {
    Gaussian(f64),
    Uniform,
}

pub fn sample_params<R: Rng + ?Sized>(spec: &AnsatzSpec, sampler: Sampler, rng: &mut R) -> Result<ParamVector> {
    match sampler {
        Sampler::Gaussian(sigma) => gaussian_params(spec.param_count(), sigma, rng),
        Sampler::Uniform => {
            let dist = Uniform::new(0.0, TAU).map_err(|e| Error::numeric(e.to_string()))?;
            Ok(ParamVector::new((0..spec.param_count()).map(|_| rng.sample(dist)).collect()))
        }
    }
}

/// Pairwise estimate of `Tr(ρ̄²)` for the ensemble `ρ̄ = E[|ψ(θ)><ψ(θ)|]`:
/// the mean of `|<ψ_i|ψ_j>|²` over ordered pairs `i ≠ j`.
pub fn expressibility_purity<R: Rng + ?Sized>(
    spec: &AnsatzSpec,
    sampler: Sampler,
    n_samples: usize,
    rng: &mut R,
) -> Result<f64> {
    if n_samples < 2 {
        return Err(Error::domain(format!("purity estimate needs at least 2 samples, got {n_samples}")));
    }
    let params = (0..n_samples)
        .map(|_| sample_params(spec, sampler, rng))
        .collect::<Result<Vec<_>>>()?;
    let states = params
        .par_iter()
        .map(|p| prepare_state(spec, p))
        .collect::<Result<Vec<_>>>()?;
    let sum = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut acc = 0.0;
            for j in i + 1..n_samples {
                acc += overlap(&states[i], &states[j])?.norm_sqr();
            }
            Ok(acc)
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .sum::<f64>();
    Ok(2.0 * sum / (n_samples * (n_samples - 1)) as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightRatio {
    pub weight: usize,
    pub max_amplitude: f64,
    pub bound: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeBoundReport {
    pub max_ratio: f64,
    /// Smallest Hamming weight whose amplitudes exceed the bound.
    pub violating_weight: Option<usize>,
    pub per_weight: Vec<WeightRatio>,
}

/// Compares the largest amplitude at each Hamming weight `w ≥ 1` with
/// `(M_tot σ)^w / w!`.
pub fn amplitude_bound_report(state: &PureState, m_tot: f64, sigma: f64) -> Result<AmplitudeBoundReport> {
    if !(sigma > 0.0) {
        return Err(Error::domain(format!("sigma must be positive, got {sigma}")));
    }
    let n = state.n_qubits();
    let mut max_amp = vec![0.0f64; n + 1];
    for (b, a) in state.amplitudes().iter().enumerate() {
        let w = b.count_ones() as usize;
        max_amp[w] = max_amp[w].max(a.norm());
    }
    let x = m_tot * sigma;
    let mut bound = 1.0;
    let mut report = AmplitudeBoundReport { max_ratio: 0.0, violating_weight: None, per_weight: Vec::with_capacity(n) };
    for (w, &amp) in max_amp.iter().enumerate().skip(1) {
        bound *= x / w as f64;
        let ratio = if amp == 0.0 { 0.0 } else { amp / bound };
        if ratio > 1.0 && report.violating_weight.is_none() {
            report.violating_weight = Some(w);
        }
        report.max_ratio = report.max_ratio.max(ratio);
        report.per_weight.push(WeightRatio { weight: w, max_amplitude: amp, bound, ratio });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::{build_circuit, init_params};
    use crate::hamiltonian::{build_tfim, build_xxz, ground_state, reference_gap};
    use crate::rng::SeedStream;
    use crate::sim::{zero_state, GateOp};
    use num_complex::Complex64;

    fn g(v: &[f64]) -> GradientVector {
        GradientVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn gv_hand_values() {
        let r = gv_report(&[g(&[1.0, 0.0]), g(&[-1.0, 0.0])]).unwrap();
        assert_eq!(r.mean_sq_norm, 1.0);
        assert_eq!(r.per_param_variance, vec![2.0, 0.0]);
        assert_eq!(r.mean_sq_per_param, 0.5);
        assert_eq!(r.std_err, 0.0);
        let z = gv_report(&[g(&[0.0; 3]), g(&[0.0; 3])]).unwrap();
        assert_eq!(z.mean_sq_norm, 0.0);
        assert!(matches!(gv_report(&[g(&[1.0])]), Err(Error::Domain(_))));
        assert!(matches!(gv_report(&[g(&[1.0]), g(&[1.0, 2.0])]), Err(Error::Size(_))));
    }

    #[test]
    fn deff_examples() {
        assert_eq!(effective_dimension(&zero_state(5).unwrap(), 1e-6).unwrap(), 1);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = PureState::from_amplitudes(vec![
            Complex64::new(h, 0.0),
            Complex64::default(),
            Complex64::default(),
            Complex64::new(h, 0.0),
        ])
        .unwrap();
        assert_eq!(effective_dimension(&bell, 1e-6).unwrap(), 2);
        assert!(effective_dimension(&bell, 0.0).is_err());
    }

    #[test]
    fn fidelity_examples() {
        for h in [build_tfim(4).unwrap(), build_xxz(4).unwrap()] {
            let gs = ground_state(&h).unwrap();
            let f0 = fidelity_to_ground(&zero_state(4).unwrap(), &gs).unwrap();
            assert!((f0 - (1.0 - reference_gap(&h).unwrap())).abs() < 1e-10);
            assert!((fidelity_to_ground(&gs.basis[0], &gs).unwrap() - 1.0).abs() < 1e-10);
        }
        // |0000> is orthogonal to the XXZ ground space (Δ_ref = 1).
        let gs = ground_state(&build_xxz(4).unwrap()).unwrap();
        assert!(fidelity_to_ground(&zero_state(4).unwrap(), &gs).unwrap() < 1e-20);
        assert!(matches!(fidelity_to_ground(&zero_state(3).unwrap(), &gs), Err(Error::Size(_))));
    }

    #[test]
    fn purity_examples() {
        let mut rng = SeedStream::new(3).rng();
        let spec = AnsatzSpec::heft(4, 2).unwrap();
        assert_eq!(expressibility_purity(&spec, Sampler::Gaussian(0.0), 10, &mut rng).unwrap(), 1.0);
        assert!(expressibility_purity(&spec, Sampler::Uniform, 1, &mut rng).is_err());

        // K = 2 reduces to a single overlap.
        let mut a = SeedStream::new(9).rng();
        let mut b = a.clone();
        let p = expressibility_purity(&spec, Sampler::Uniform, 2, &mut a).unwrap();
        let s1 = prepare_state(&spec, &sample_params(&spec, Sampler::Uniform, &mut b).unwrap()).unwrap();
        let s2 = prepare_state(&spec, &sample_params(&spec, Sampler::Uniform, &mut b).unwrap()).unwrap();
        assert!((p - overlap(&s1, &s2).unwrap().norm_sqr()).abs() < 1e-15);
    }

    #[test]
    fn amplitude_bound_examples() {
        let r = amplitude_bound_report(&zero_state(4).unwrap(), 10.0, 0.1).unwrap();
        assert_eq!(r.max_ratio, 0.0);
        assert_eq!(r.violating_weight, None);

        let mut s = zero_state(1).unwrap();
        s.apply(&GateOp::Ry { qubit: 0, angle: 0.2 }).unwrap();
        let r = amplitude_bound_report(&s, 1.0, 0.2).unwrap();
        assert!(r.max_ratio < 1.0);
        assert!((r.per_weight[0].max_amplitude - 0.1f64.sin()).abs() < 1e-15);
        assert!(amplitude_bound_report(&s, 1.0, 0.0).is_err());
    }

    #[test]
    fn entropy_of_product_and_bell() {
        let spec = AnsatzSpec::heft(4, 1).unwrap();
        let theta = init_params(&spec, 0.0, &mut SeedStream::new(0).rng()).unwrap();
        assert_eq!(build_circuit(&spec, &theta).unwrap().len(), 4 + 3 * 3);
        let s = prepare_state(&spec, &theta).unwrap();
        assert!(half_chain_entropy(&s, 2).unwrap().abs() < 1e-12);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = PureState::from_amplitudes(vec![
            Complex64::new(h, 0.0),
            Complex64::default(),
            Complex64::default(),
            Complex64::new(h, 0.0),
        ])
        .unwrap();
        assert!((half_chain_entropy(&bell, 1).unwrap() - 1.0).abs() < 1e-12);
        assert!(half_chain_entropy(&bell, 2).is_err());
    }
}
