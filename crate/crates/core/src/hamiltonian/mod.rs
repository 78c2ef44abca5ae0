//! Pauli-sum Hamiltonians and their exact ground spaces.

mod ground;

pub use ground::{
    ground_state, ground_state_dense, ground_state_iterative, reference_gap, GroundSolution,
    LanczosOptions,
};

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::{bit_of, MixedState, PureState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn from_char(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Real-weighted tensor product of single-qubit Paulis.
///
/// Acting on a basis state, `P|b> = i^{n_Y} (−1)^{|b ∧ z|} |b ⊕ x>` where `x`
/// marks X/Y positions and `z` marks Z/Y positions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PauliStringRepr", into = "PauliStringRepr")]
pub struct PauliString {
    coefficient: f64,
    letters: Vec<Pauli>,
    x_mask: usize,
    z_mask: usize,
    y_phase: Complex64,
}

#[derive(Serialize, Deserialize)]
struct PauliStringRepr {
    coefficient: f64,
    letters: String,
}

impl TryFrom<PauliStringRepr> for PauliString {
    type Error = Error;
    fn try_from(r: PauliStringRepr) -> Result<Self> {
        PauliString::parse(r.coefficient, &r.letters)
    }
}

impl From<PauliString> for PauliStringRepr {
    fn from(p: PauliString) -> Self {
        PauliStringRepr {
            coefficient: p.coefficient,
            letters: p.letters(),
        }
    }
}

impl PauliString {
    pub fn new(coefficient: f64, letters: Vec<Pauli>) -> Result<Self> {
        if !coefficient.is_finite() {
            return Err(Error::domain(format!("Pauli coefficient {coefficient} is not finite")));
        }
        if letters.is_empty() {
            return Err(Error::size("empty Pauli string"));
        }
        let n = letters.len();
        let mut x_mask = 0;
        let mut z_mask = 0;
        let mut n_y = 0;
        for (q, p) in letters.iter().enumerate() {
            let bit = bit_of(n, q);
            match p {
                Pauli::I => {}
                Pauli::X => x_mask |= bit,
                Pauli::Z => z_mask |= bit,
                Pauli::Y => {
                    x_mask |= bit;
                    z_mask |= bit;
                    n_y += 1;
                }
            }
        }
        let y_phase = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, -1.0),
        ][n_y % 4];
        Ok(Self {
            coefficient,
            letters,
            x_mask,
            z_mask,
            y_phase,
        })
    }

    /// Parses letters like `"ZZI"`.
    pub fn parse(coefficient: f64, letters: &str) -> Result<Self> {
        let parsed = letters
            .chars()
            .map(|c| Pauli::from_char(c).ok_or_else(|| Error::domain(format!("bad Pauli letter {c:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(coefficient, parsed)
    }

    /// `coefficient · Π_q P_q` on `n_qubits`, identity elsewhere.
    pub fn from_sparse(coefficient: f64, n_qubits: usize, ops: &[(usize, Pauli)]) -> Result<Self> {
        let mut letters = vec![Pauli::I; n_qubits];
        for &(q, p) in ops {
            if q >= n_qubits {
                return Err(Error::Index { index: q, n_qubits });
            }
            letters[q] = p;
        }
        Self::new(coefficient, letters)
    }

    pub fn coefficient(&self) -> f64 {
        self.coefficient
    }

    pub fn n_qubits(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> String {
        self.letters.iter().map(|p| p.as_char()).collect()
    }

    pub fn paulis(&self) -> &[Pauli] {
        &self.letters
    }

    /// Phase picked up by basis state `b`: `P|b> = phase · |b ⊕ x>`.
    #[inline]
    pub(crate) fn phase(&self, b: usize) -> Complex64 {
        if (b & self.z_mask).count_ones() % 2 == 1 {
            -self.y_phase
        } else {
            self.y_phase
        }
    }

    /// `<ψ|P|ψ>` without the coefficient.
    pub fn expectation_unweighted(&self, amps: &[Complex64]) -> Complex64 {
        amps.iter()
            .enumerate()
            .map(|(b, a)| amps[b ^ self.x_mask].conj() * self.phase(b) * a)
            .sum()
    }

    /// `Tr(P ρ)` without the coefficient.
    pub fn trace_with(&self, rho: &MixedState) -> Complex64 {
        (0..rho.dim())
            .map(|r| self.phase(r) * rho.get(r, r ^ self.x_mask))
            .sum()
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}·{}", self.coefficient, self.letters())
    }
}

/// Sum of Pauli strings on a common register. Terms are kept exactly as
/// supplied; duplicates are not merged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliSum {
    n_qubits: usize,
    terms: Vec<PauliString>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Tfim,
    Xxz,
}

impl FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tfim" => Ok(Model::Tfim),
            "xxz" | "heisenberg" => Ok(Model::Xxz),
            other => Err(Error::domain(format!("unknown Hamiltonian {other:?}"))),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Tfim => "tfim",
            Model::Xxz => "xxz",
        })
    }
}

impl Model {
    pub fn build(self, n_qubits: usize) -> Result<PauliSum> {
        match self {
            Model::Tfim => build_tfim(n_qubits),
            Model::Xxz => build_xxz(n_qubits),
        }
    }
}

impl PauliSum {
    pub fn new(n_qubits: usize, terms: Vec<PauliString>) -> Result<Self> {
        crate::sim::zero_state(n_qubits)?;
        if let Some(t) = terms.iter().find(|t| t.n_qubits() != n_qubits) {
            return Err(Error::size(format!(
                "term {t} has {} letters, register has {n_qubits}",
                t.n_qubits()
            )));
        }
        Ok(Self { n_qubits, terms })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[PauliString] {
        &self.terms
    }

    /// `Σ |c_k|`, an upper bound on the operator norm.
    pub fn op_norm_bound(&self) -> f64 {
        self.terms.iter().map(|t| t.coefficient.abs()).sum()
    }

    /// `H|v>` on a raw amplitude buffer.
    pub fn apply(&self, v: &[Complex64], out: &mut [Complex64]) {
        out.iter_mut().for_each(|o| *o = Complex64::new(0.0, 0.0));
        for t in &self.terms {
            let x = t.x_mask;
            for (b, a) in v.iter().enumerate() {
                out[b ^ x] += t.phase(b) * a * t.coefficient;
            }
        }
    }

    /// Dense `2^n × 2^n` matrix. Intended for n ≤ 10.
    pub fn to_dense(&self) -> nalgebra::DMatrix<Complex64> {
        let d = 1usize << self.n_qubits;
        let mut m = nalgebra::DMatrix::zeros(d, d);
        for t in &self.terms {
            for b in 0..d {
                m[(b ^ t.x_mask, b)] += t.phase(b) * t.coefficient;
            }
        }
        m
    }

    /// True when every term has an even number of Y factors, i.e. the matrix
    /// is real in the computational basis.
    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|t| t.y_phase.im == 0.0)
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

fn check_chain(n_qubits: usize) -> Result<()> {
    if n_qubits < 2 {
        return Err(Error::domain(format!("a periodic chain needs at least 2 sites, got {n_qubits}")));
    }
    crate::sim::zero_state(n_qubits).map(|_| ())
}

/// Periodic transverse-field Ising chain at `J = h = 1`:
/// `−Σ Z_i Z_{i+1 mod N} − Σ X_i`.
pub fn build_tfim(n_qubits: usize) -> Result<PauliSum> {
    check_chain(n_qubits)?;
    let n = n_qubits;
    let mut terms = Vec::with_capacity(2 * n);
    for i in 0..n {
        terms.push(PauliString::from_sparse(-1.0, n, &[(i, Pauli::Z), ((i + 1) % n, Pauli::Z)])?);
    }
    for i in 0..n {
        terms.push(PauliString::from_sparse(-1.0, n, &[(i, Pauli::X)])?);
    }
    PauliSum::new(n, terms)
}

/// Periodic isotropic Heisenberg chain `Σ (X_i X_{i+1} + Y_i Y_{i+1} + Z_i Z_{i+1})`.
pub fn build_xxz(n_qubits: usize) -> Result<PauliSum> {
    check_chain(n_qubits)?;
    let n = n_qubits;
    let mut terms = Vec::with_capacity(3 * n);
    for i in 0..n {
        for p in [Pauli::X, Pauli::Y, Pauli::Z] {
            terms.push(PauliString::from_sparse(1.0, n, &[(i, p), ((i + 1) % n, p)])?);
        }
    }
    PauliSum::new(n, terms)
}

/// `Σ|c_k|`.
pub fn op_norm_bound(h: &PauliSum) -> f64 {
    h.op_norm_bound()
}

/// Imaginary residue above which an expectation value is reported as a
/// numeric error rather than silently truncated.
const IMAG_RESIDUE_TOL: f64 = 1e-8;

/// `<ψ|H|ψ>`.
pub fn expectation(h: &PauliSum, state: &PureState) -> Result<f64> {
    if h.n_qubits != state.n_qubits() {
        return Err(Error::size(format!(
            "{}-qubit Hamiltonian against {}-qubit state",
            h.n_qubits,
            state.n_qubits()
        )));
    }
    let amps = state.amplitudes();
    let value: Complex64 = h
        .terms
        .iter()
        .map(|t| t.expectation_unweighted(amps) * t.coefficient)
        .sum();
    if value.im.abs() > IMAG_RESIDUE_TOL * (1.0 + h.op_norm_bound()) {
        return Err(Error::numeric(format!("expectation has imaginary residue {}", value.im)));
    }
    Ok(value.re)
}

/// `Tr(H ρ)`.
pub fn expectation_mixed(h: &PauliSum, rho: &MixedState) -> Result<f64> {
    if h.n_qubits != rho.n_qubits() {
        return Err(Error::size(format!(
            "{}-qubit Hamiltonian against {}-qubit density matrix",
            h.n_qubits,
            rho.n_qubits()
        )));
    }
    let value: Complex64 = h
        .terms
        .iter()
        .map(|t| t.trace_with(rho) * t.coefficient)
        .sum();
    if value.im.abs() > IMAG_RESIDUE_TOL * (1.0 + h.op_norm_bound()) {
        return Err(Error::numeric(format!("Tr(Hρ) has imaginary residue {}", value.im)));
    }
    Ok(value.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::zero_state;

    #[test]
    fn tfim_three_sites() {
        let h = build_tfim(3).unwrap();
        let letters: Vec<_> = h.terms().iter().map(|t| t.letters()).collect();
        assert_eq!(letters, ["ZZI", "IZZ", "ZIZ", "XII", "IXI", "IIX"]);
        assert!(h.terms().iter().all(|t| t.coefficient() == -1.0));
    }

    #[test]
    fn tfim_two_sites_keeps_duplicate_bond() {
        let h = build_tfim(2).unwrap();
        let letters: Vec<_> = h.terms().iter().map(|t| t.letters()).collect();
        assert_eq!(letters, ["ZZ", "ZZ", "XI", "IX"]);
        assert_eq!(expectation(&h, &zero_state(2).unwrap()).unwrap(), -2.0);
    }

    #[test]
    fn reference_energies() {
        for n in 3..=8 {
            let z = zero_state(n).unwrap();
            assert_eq!(expectation(&build_tfim(n).unwrap(), &z).unwrap(), -(n as f64));
            assert_eq!(expectation(&build_xxz(n).unwrap(), &z).unwrap(), n as f64);
        }
        let h = build_xxz(4).unwrap();
        assert_eq!(h.terms().len(), 12);
        assert!(h.terms().iter().all(|t| t.coefficient() == 1.0));
    }

    #[test]
    fn single_z() {
        let h = PauliSum::new(1, vec![PauliString::parse(1.0, "Z").unwrap()]).unwrap();
        assert_eq!(expectation(&h, &zero_state(1).unwrap()).unwrap(), 1.0);
    }

    #[test]
    fn norm_bounds() {
        assert_eq!(op_norm_bound(&build_tfim(8).unwrap()), 16.0);
        assert_eq!(op_norm_bound(&build_xxz(8).unwrap()), 24.0);
        let h = PauliSum::new(1, vec![PauliString::parse(3.0, "Z").unwrap()]).unwrap();
        assert_eq!(op_norm_bound(&h), 3.0);
    }

    #[test]
    fn build_errors() {
        assert!(matches!(build_tfim(1), Err(Error::Domain(_))));
        assert!(matches!(build_xxz(0), Err(Error::Domain(_))));
        assert!(PauliString::parse(f64::NAN, "Z").is_err());
        assert!(PauliString::parse(1.0, "ZQ").is_err());
        let bad = PauliSum::new(2, vec![PauliString::parse(1.0, "Z").unwrap()]);
        assert!(matches!(bad, Err(Error::Size(_))));
        assert!(matches!(
            expectation(&build_tfim(3).unwrap(), &zero_state(2).unwrap()),
            Err(Error::Size(_))
        ));
    }

    #[test]
    fn y_phases() {
        // Y|0> = i|1>, Y|1> = −i|0>.
        let y = PauliString::parse(1.0, "Y").unwrap();
        assert_eq!(y.phase(0), Complex64::new(0.0, 1.0));
        assert_eq!(y.phase(1), Complex64::new(0.0, -1.0));
        assert!(build_xxz(3).unwrap().is_real());
    }
}
