//! Circuit families: the spin-mode EFT ansatz and the hardware-efficient
//! baseline.
//!
//! Spin-mode layer: `RY(θ)` on every qubit, then the ZZ entangler
//! `CNOT · RZ(φ) · CNOT` on each open-chain neighbour pair `(i, i+1)`,
//! giving `2N − 1` parameters per layer. HEA layer: `RY` on every qubit then
//! a CNOT chain, `N` parameters per layer.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Normal, Uniform};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::{zero_state, GateOp, PureState};
use crate::MAX_QUBITS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AnsatzKind {
    #[serde(rename = "heft_spin")]
    HeftSpin,
    #[serde(rename = "hea")]
    Hea,
}

impl FromStr for AnsatzKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "heft_spin" | "heft" => Ok(AnsatzKind::HeftSpin),
            "hea" => Ok(AnsatzKind::Hea),
            other => Err(Error::domain(format!("unknown ansatz {other:?}"))),
        }
    }
}

impl fmt::Display for AnsatzKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AnsatzKind::HeftSpin => "heft_spin",
            AnsatzKind::Hea => "hea",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AnsatzSpec {
    kind: AnsatzKind,
    n_qubits: usize,
    layers: usize,
}

impl AnsatzSpec {
    pub fn new(kind: AnsatzKind, n_qubits: usize, layers: usize) -> Result<Self> {
        if !(2..=MAX_QUBITS).contains(&n_qubits) {
            return Err(Error::size(format!("ansatz needs 2..={MAX_QUBITS} qubits, got {n_qubits}")));
        }
        if layers == 0 {
            return Err(Error::domain("ansatz needs at least one layer"));
        }
        Ok(Self {
            kind,
            n_qubits,
            layers,
        })
    }

    pub fn heft(n_qubits: usize, layers: usize) -> Result<Self> {
        Self::new(AnsatzKind::HeftSpin, n_qubits, layers)
    }

    pub fn hea(n_qubits: usize, layers: usize) -> Result<Self> {
        Self::new(AnsatzKind::Hea, n_qubits, layers)
    }

    pub fn kind(&self) -> AnsatzKind {
        self.kind
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn layers(&self) -> usize {
        self.layers
    }

    pub fn params_per_layer(&self) -> usize {
        match self.kind {
            AnsatzKind::HeftSpin => 2 * self.n_qubits - 1,
            AnsatzKind::Hea => self.n_qubits,
        }
    }

    pub fn param_count(&self) -> usize {
        self.layers * self.params_per_layer()
    }

    /// Number of CNOTs in the circuit.
    pub fn two_qubit_gate_count(&self) -> usize {
        let per_pair = match self.kind {
            AnsatzKind::HeftSpin => 2,
            AnsatzKind::Hea => 1,
        };
        self.layers * (self.n_qubits - 1) * per_pair
    }
}

pub fn param_count(spec: &AnsatzSpec) -> usize {
    spec.param_count()
}

/// Flat parameter vector, ordered layer by layer: RY angles for qubits
/// `0..N`, then (spin mode) entangler angles for pairs `(0,1) … (N−2,N−1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParamVector(Vec<f64>);

impl ParamVector {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn zeros(spec: &AnsatzSpec) -> Self {
        Self(vec![0.0; spec.param_count()])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub(crate) fn check(&self, spec: &AnsatzSpec) -> Result<()> {
        if self.0.len() != spec.param_count() {
            return Err(Error::size(format!(
                "parameter vector has {} entries, {} expects {}",
                self.0.len(),
                spec.kind,
                spec.param_count()
            )));
        }
        Ok(())
    }
}

impl From<Vec<f64>> for ParamVector {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

/// Expands the circuit into primitive gates in application order.
pub fn build_circuit(spec: &AnsatzSpec, theta: &ParamVector) -> Result<Vec<GateOp>> {
    theta.check(spec)?;
    let n = spec.n_qubits;
    let per_layer = spec.params_per_layer();
    let mut gates = Vec::with_capacity(spec.layers * (n + 3 * (n - 1)));
    for layer in theta.values().chunks(per_layer) {
        for (q, &angle) in layer[..n].iter().enumerate() {
            gates.push(GateOp::Ry { qubit: q, angle });
        }
        for i in 0..n - 1 {
            let cnot = GateOp::Cnot {
                control: i,
                target: i + 1,
            };
            match spec.kind {
                AnsatzKind::HeftSpin => {
                    gates.push(cnot);
                    gates.push(GateOp::Rz {
                        qubit: i + 1,
                        angle: layer[n + i],
                    });
                    gates.push(cnot);
                }
                AnsatzKind::Hea => gates.push(cnot),
            }
        }
    }
    Ok(gates)
}

/// `U(θ)|0…0>`.
pub fn prepare_state(spec: &AnsatzSpec, theta: &ParamVector) -> Result<PureState> {
    let mut state = zero_state(spec.n_qubits)?;
    for gate in build_circuit(spec, theta)? {
        gate.apply_raw(state.amplitudes_mut(), spec.n_qubits, false);
    }
    Ok(state)
}

/// Initial parameters: i.i.d. `N(0, σ²)` for the spin ansatz, i.i.d.
/// `U[0, 2π)` for HEA (σ ignored).
pub fn init_params<R: Rng + ?Sized>(spec: &AnsatzSpec, sigma: f64, rng: &mut R) -> Result<ParamVector> {
    let p = spec.param_count();
    match spec.kind {
        AnsatzKind::HeftSpin => gaussian_params(p, sigma, rng),
        AnsatzKind::Hea => {
            let u = Uniform::new(0.0, TAU).expect("valid range");
            Ok(ParamVector((0..p).map(|_| u.sample(rng)).collect()))
        }
    }
}

pub(crate) fn gaussian_params<R: Rng + ?Sized>(count: usize, sigma: f64, rng: &mut R) -> Result<ParamVector> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::domain(format!("initialization scale {sigma} must be finite and >= 0")));
    }
    if sigma == 0.0 {
        return Ok(ParamVector(vec![0.0; count]));
    }
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::domain(e.to_string()))?;
    Ok(ParamVector((0..count).map(|_| normal.sample(rng)).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parameter_counts() {
        assert_eq!(AnsatzSpec::heft(8, 8).unwrap().param_count(), 120);
        assert_eq!(AnsatzSpec::heft(2, 1).unwrap().param_count(), 3);
        assert_eq!(AnsatzSpec::hea(4, 2).unwrap().param_count(), 8);
        assert!(AnsatzSpec::heft(1, 1).is_err());
        assert!(AnsatzSpec::heft(15, 1).is_err());
        assert!(AnsatzSpec::hea(4, 0).is_err());
    }

    #[test]
    fn gate_structure() {
        let spec = AnsatzSpec::hea(3, 1).unwrap();
        let gates = build_circuit(&spec, &ParamVector::zeros(&spec)).unwrap();
        let rys = gates.iter().filter(|g| matches!(g, GateOp::Ry { .. })).count();
        let cnots = gates.iter().filter(|g| g.is_two_qubit()).count();
        assert_eq!((rys, cnots, gates.len()), (3, 2, 5));

        let spec = AnsatzSpec::heft(4, 2).unwrap();
        let gates = build_circuit(&spec, &ParamVector::zeros(&spec)).unwrap();
        let rys = gates.iter().filter(|g| matches!(g, GateOp::Ry { .. })).count();
        let rzs = gates.iter().filter(|g| matches!(g, GateOp::Rz { .. })).count();
        let cnots = gates.iter().filter(|g| g.is_two_qubit()).count();
        assert_eq!((rys, rzs, cnots), (8, 6, 12));
        assert_eq!(gates.len(), 8 + 18);
        assert_eq!(cnots, spec.two_qubit_gate_count());
    }

    #[test]
    fn parameter_order_within_layer() {
        let spec = AnsatzSpec::heft(3, 1).unwrap();
        let theta = ParamVector::new(vec![0.1, 0.2, 0.3, 0.4, 0.5]);
        let gates = build_circuit(&spec, &theta).unwrap();
        assert_eq!(gates[0], GateOp::Ry { qubit: 0, angle: 0.1 });
        assert_eq!(gates[2], GateOp::Ry { qubit: 2, angle: 0.3 });
        assert_eq!(gates[4], GateOp::Rz { qubit: 1, angle: 0.4 });
        assert_eq!(gates[7], GateOp::Rz { qubit: 2, angle: 0.5 });
    }

    #[test]
    fn zero_parameters_give_identity() {
        for spec in [AnsatzSpec::heft(2, 1).unwrap(), AnsatzSpec::heft(5, 3).unwrap()] {
            let s = prepare_state(&spec, &ParamVector::zeros(&spec)).unwrap();
            let z = zero_state(spec.n_qubits()).unwrap();
            assert!((s.fidelity(&z).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn length_mismatch_is_size_error() {
        let spec = AnsatzSpec::heft(3, 2).unwrap();
        let err = build_circuit(&spec, &ParamVector::new(vec![0.0; 4])).unwrap_err();
        assert!(matches!(err, Error::Size(_)));
    }

    #[test]
    fn init_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let spec = AnsatzSpec::heft(8, 8).unwrap();
        let zero = init_params(&spec, 0.0, &mut rng).unwrap();
        assert!(zero.values().iter().all(|&x| x == 0.0));
        assert!(matches!(init_params(&spec, -0.1, &mut rng), Err(Error::Domain(_))));

        let hea = AnsatzSpec::hea(4, 3).unwrap();
        let u = init_params(&hea, -5.0, &mut rng).unwrap();
        assert!(u.values().iter().all(|&x| (0.0..TAU).contains(&x)));
    }

    #[test]
    fn gaussian_moments() {
        // 10^5 draws: mean within 4 standard errors, variance within 5
        // relative standard errors (relative s.e. of s² is sqrt(2/(n−1))).
        let sigma = 0.01;
        let n = 100_000;
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let draws = gaussian_params(n, sigma, &mut rng).unwrap();
        let v = draws.values();
        let mean = v.iter().sum::<f64>() / n as f64;
        assert!(mean.abs() < 4.0 * sigma / (n as f64).sqrt());
        let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let rel_se = (2.0 / (n - 1) as f64).sqrt();
        assert!(((var / (sigma * sigma)) - 1.0).abs() < 5.0 * rel_se);
    }
}
