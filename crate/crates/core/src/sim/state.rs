use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::MAX_QUBITS;

/// Normalised amplitude vector over `2^n_qubits` basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

pub(crate) fn check_register(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::size(format!(
            "register of {n_qubits} qubits outside supported range 1..={MAX_QUBITS}"
        )));
    }
    Ok(())
}

/// `|0...0>` on `n_qubits` qubits.
pub fn zero_state(n_qubits: usize) -> Result<PureState> {
    check_register(n_qubits)?;
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
    amplitudes[0] = Complex64::new(1.0, 0.0);
    Ok(PureState {
        n_qubits,
        amplitudes,
    })
}

impl PureState {
    /// Wraps raw amplitudes; the vector is renormalised.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::size(format!("amplitude length {len} is not 2^n with n >= 1")));
        }
        let n_qubits = len.trailing_zeros() as usize;
        check_register(n_qubits)?;
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::numeric("cannot normalise a zero or non-finite amplitude vector"));
        }
        let amplitudes = amplitudes.into_iter().map(|a| a / norm).collect();
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Computational basis state `|index>`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_register(n_qubits)?;
        if index >= 1 << n_qubits {
            return Err(Error::size(format!("basis index {index} out of range")));
        }
        let mut s = zero_state(n_qubits)?;
        s.amplitudes[0] = Complex64::new(0.0, 0.0);
        s.amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `|<self|other>|²`, the phase-insensitive comparison used everywhere.
    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        Ok(overlap(self, other)?.norm_sqr())
    }
}

/// `<a|b>`.
pub fn overlap(a: &PureState, b: &PureState) -> Result<Complex64> {
    if a.n_qubits != b.n_qubits {
        return Err(Error::size(format!(
            "overlap of {}-qubit and {}-qubit states",
            a.n_qubits, b.n_qubits
        )));
    }
    Ok(a.amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_state_examples() {
        let s = zero_state(1).unwrap();
        assert_eq!(s.amplitudes(), &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        let s = zero_state(2).unwrap();
        assert_eq!(s.dim(), 4);
        assert_eq!(s.amplitudes()[0], Complex64::new(1.0, 0.0));
        assert!(s.amplitudes()[1..].iter().all(|a| a.norm() == 0.0));
        assert!(matches!(zero_state(15), Err(Error::Size(_))));
        assert!(matches!(zero_state(0), Err(Error::Size(_))));
    }

    #[test]
    fn overlap_examples() {
        let z = zero_state(3).unwrap();
        assert!((overlap(&z, &z).unwrap().re - 1.0).abs() < 1e-15);
        let one = PureState::basis(1, 1).unwrap();
        assert_eq!(overlap(&zero_state(1).unwrap(), &one).unwrap().norm(), 0.0);
        let mut ghz = vec![Complex64::new(0.0, 0.0); 8];
        ghz[0] = Complex64::new(1.0, 0.0);
        ghz[7] = Complex64::new(1.0, 0.0);
        let ghz = PureState::from_amplitudes(ghz).unwrap();
        assert!((z.fidelity(&ghz).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(overlap(&z, &one), Err(Error::Size(_))));
    }
}
