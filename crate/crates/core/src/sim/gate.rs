use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::kernel;
use super::state::PureState;
use crate::error::{Error, Result};

/// One primitive gate. Rotations follow `RY(θ) = exp(−iθY/2)` and
/// `RZ(φ) = exp(−iφZ/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GateOp {
    Ry { qubit: usize, angle: f64 },
    Rz { qubit: usize, angle: f64 },
    Cnot { control: usize, target: usize },
}

impl GateOp {
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let check = |q: usize| {
            if q >= n_qubits {
                Err(Error::Index {
                    index: q,
                    n_qubits,
                })
            } else {
                Ok(())
            }
        };
        match *self {
            GateOp::Ry { qubit, .. } | GateOp::Rz { qubit, .. } => check(qubit),
            GateOp::Cnot { control, target } => {
                check(control)?;
                check(target)?;
                if control == target {
                    return Err(Error::domain(format!("CNOT control and target both {control}")));
                }
                Ok(())
            }
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, GateOp::Cnot { .. })
    }

    /// Row-major 2×2 matrix of a single-qubit gate; `None` for CNOT.
    pub fn matrix(&self) -> Option<[Complex64; 4]> {
        match *self {
            GateOp::Ry { angle, .. } => {
                let (s, c) = (angle / 2.0).sin_cos();
                Some([c.into(), (-s).into(), s.into(), c.into()])
            }
            GateOp::Rz { angle, .. } => {
                let zero = Complex64::new(0.0, 0.0);
                Some([
                    Complex64::from_polar(1.0, -angle / 2.0),
                    zero,
                    zero,
                    Complex64::from_polar(1.0, angle / 2.0),
                ])
            }
            GateOp::Cnot { .. } => None,
        }
    }

    /// Applies the gate to a raw `n`-qubit amplitude buffer, or its complex
    /// conjugate when `conjugate` is set. Indices must already be validated.
    pub(crate) fn apply_raw(&self, amps: &mut [Complex64], n: usize, conjugate: bool) {
        match *self {
            GateOp::Ry { qubit, angle } => {
                let (s, c) = (angle / 2.0).sin_cos();
                kernel::apply_ry(amps, n, qubit, c, s);
            }
            GateOp::Rz { qubit, angle } => {
                let half = if conjugate { angle / 2.0 } else { -angle / 2.0 };
                kernel::apply_phase(
                    amps,
                    n,
                    qubit,
                    Complex64::from_polar(1.0, half),
                    Complex64::from_polar(1.0, -half),
                );
            }
            GateOp::Cnot { control, target } => kernel::apply_cnot(amps, n, control, target),
        }
    }
}

/// Applies `gate` to `state` in place.
pub fn apply_gate(state: &mut PureState, gate: &GateOp) -> Result<()> {
    let n = state.n_qubits();
    gate.validate(n)?;
    gate.apply_raw(state.amplitudes_mut(), n, false);
    Ok(())
}

/// `exp(−iφ Z_i Z_j / 2)` realised as CNOT(i,j) · RZ_j(φ) · CNOT(i,j).
pub fn apply_zz_entangler(state: &mut PureState, i: usize, j: usize, phi: f64) -> Result<()> {
    for gate in zz_entangler_gates(i, j, phi) {
        apply_gate(state, &gate)?;
    }
    Ok(())
}

pub(crate) fn zz_entangler_gates(i: usize, j: usize, phi: f64) -> [GateOp; 3] {
    [
        GateOp::Cnot {
            control: i,
            target: j,
        },
        GateOp::Rz {
            qubit: j,
            angle: phi,
        },
        GateOp::Cnot {
            control: i,
            target: j,
        },
    ]
}

impl PureState {
    pub fn apply(&mut self, gate: &GateOp) -> Result<()> {
        apply_gate(self, gate)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{overlap, zero_state};
    use std::f64::consts::PI;

    #[test]
    fn ry_pi_flips_zero_to_one() {
        let mut s = zero_state(1).unwrap();
        apply_gate(&mut s, &GateOp::Ry { qubit: 0, angle: PI }).unwrap();
        // cos(π/2) is 6e-17 in floating point; |1> amplitude is exactly 1.
        assert_eq!(s.amplitudes()[1], Complex64::new(1.0, 0.0));
        assert!(s.amplitudes()[0].norm() < 1e-16);
    }

    #[test]
    fn cnot_on_10_gives_11() {
        let mut s = PureState::basis(2, 0b10).unwrap();
        apply_gate(&mut s, &GateOp::Cnot { control: 0, target: 1 }).unwrap();
        assert_eq!(s, PureState::basis(2, 0b11).unwrap());
    }

    #[test]
    fn rz_on_zero_is_phase() {
        let phi = 0.83;
        let mut s = zero_state(1).unwrap();
        apply_gate(&mut s, &GateOp::Rz { qubit: 0, angle: phi }).unwrap();
        let expected = Complex64::from_polar(1.0, -phi / 2.0);
        assert!((s.amplitudes()[0] - expected).norm() < 1e-15);
        assert_eq!(s.amplitudes()[1].norm(), 0.0);
    }

    #[test]
    fn entangler_examples() {
        let mut s = zero_state(2).unwrap();
        apply_zz_entangler(&mut s, 0, 1, 0.0).unwrap();
        assert_eq!(s, zero_state(2).unwrap());

        let phi = 1.9;
        let z = zero_state(2).unwrap();
        let mut s = z.clone();
        apply_zz_entangler(&mut s, 0, 1, phi).unwrap();
        assert!((s.amplitudes()[0] - Complex64::from_polar(1.0, -phi / 2.0)).norm() < 1e-15);
        assert!((overlap(&z, &s).unwrap().norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn invalid_indices_are_rejected() {
        let mut s = zero_state(2).unwrap();
        assert_eq!(
            apply_gate(&mut s, &GateOp::Ry { qubit: 2, angle: 0.1 }),
            Err(Error::Index { index: 2, n_qubits: 2 })
        );
        assert!(matches!(
            apply_gate(&mut s, &GateOp::Cnot { control: 1, target: 1 }),
            Err(Error::Domain(_))
        ));
        assert!(apply_zz_entangler(&mut s, 0, 5, 0.2).is_err());
    }
}
