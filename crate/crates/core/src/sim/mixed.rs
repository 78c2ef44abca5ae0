use nalgebra::DMatrix;
use num_complex::Complex64;

use super::gate::GateOp;
use super::kernel::bit_of;
use super::state::PureState;
use crate::error::{Error, Result};
use crate::MAX_MIXED_QUBITS;

/// Density matrix on `n_qubits` qubits.
///
/// Stored row-major, which makes the buffer a `2n`-qubit vector whose first
/// `n` qubits index rows and last `n` index columns. `U ρ U†` is then `U` on
/// row qubit `q` followed by `conj(U)` on column qubit `n + q`, reusing the
/// pure-state kernels.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedState {
    n_qubits: usize,
    data: Vec<Complex64>,
}

fn check_mixed_register(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_MIXED_QUBITS {
        return Err(Error::Resource(format!(
            "density matrix on {n_qubits} qubits exceeds the {MAX_MIXED_QUBITS}-qubit cap"
        )));
    }
    Ok(())
}

impl MixedState {
    pub fn from_pure(state: &PureState) -> Result<Self> {
        let n = state.n_qubits();
        check_mixed_register(n)?;
        let amps = state.amplitudes();
        let mut data = Vec::with_capacity(amps.len() * amps.len());
        for r in amps {
            for c in amps {
                data.push(r * c.conj());
            }
        }
        Ok(Self { n_qubits: n, data })
    }

    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        check_mixed_register(n_qubits)?;
        let d = 1usize << n_qubits;
        let mut data = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            data[i * d + i] = Complex64::new(1.0 / d as f64, 0.0);
        }
        Ok(Self { n_qubits, data })
    }

    /// Builds from a dense matrix without checking physicality.
    pub fn from_matrix(m: &DMatrix<Complex64>) -> Result<Self> {
        let d = m.nrows();
        if d != m.ncols() || d < 2 || !d.is_power_of_two() {
            return Err(Error::size(format!("{}x{} is not a 2^n square matrix", m.nrows(), m.ncols())));
        }
        let n_qubits = d.trailing_zeros() as usize;
        check_mixed_register(n_qubits)?;
        let data = (0..d * d).map(|k| m[(k / d, k % d)]).collect();
        Ok(Self { n_qubits, data })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim() + col]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        let d = self.dim();
        DMatrix::from_fn(d, d, |r, c| self.get(r, c))
    }

    /// Largest `|ρ − ρ†|` entry.
    pub fn hermiticity_error(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for r in 0..d {
            for c in r..d {
                worst = worst.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.to_matrix().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// `ρ → U ρ U†`.
    pub fn apply(&mut self, gate: &GateOp) -> Result<()> {
        let n = self.n_qubits;
        gate.validate(n)?;
        let shifted = match *gate {
            GateOp::Ry { qubit, angle } => GateOp::Ry { qubit: qubit + n, angle },
            GateOp::Rz { qubit, angle } => GateOp::Rz { qubit: qubit + n, angle },
            GateOp::Cnot { control, target } => GateOp::Cnot {
                control: control + n,
                target: target + n,
            },
        };
        gate.apply_raw(&mut self.data, 2 * n, false);
        shifted.apply_raw(&mut self.data, 2 * n, true);
        Ok(())
    }
}

/// Two-qubit depolarizing channel on `(i, j)`:
/// `ρ → (1−p) ρ + p · (I₄/4)_{ij} ⊗ Tr_{ij} ρ`.
pub fn apply_depolarizing_pair(state: &mut MixedState, i: usize, j: usize, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("depolarizing probability {p} outside [0, 1]")));
    }
    let n = state.n_qubits;
    for q in [i, j] {
        if q >= n {
            return Err(Error::Index { index: q, n_qubits: n });
        }
    }
    if i == j {
        return Err(Error::domain("depolarizing pair needs two distinct qubits"));
    }
    if p == 0.0 {
        return Ok(());
    }
    let d = state.dim();
    let (mi, mj) = (bit_of(n, i), bit_of(n, j));
    let pair = mi | mj;
    let offsets = [0, mj, mi, mi | mj];
    let keep = 1.0 - p;
    for r in (0..d).filter(|r| r & pair == 0) {
        for c in (0..d).filter(|c| c & pair == 0) {
            let reduced: Complex64 = offsets
                .iter()
                .map(|&k| state.data[(r | k) * d + (c | k)])
                .sum();
            let mixed = reduced * (p / 4.0);
            for &k1 in &offsets {
                for &k2 in &offsets {
                    let idx = (r | k1) * d + (c | k2);
                    state.data[idx] *= keep;
                    if k1 == k2 {
                        state.data[idx] += mixed;
                    }
                }
            }
        }
    }
    Ok(())
}

/// Partial trace of `|ψ><ψ|` onto `keep`; kept qubits retain their relative
/// order, the lowest index becoming the most-significant bit.
pub fn reduced_density(state: &PureState, keep: &[usize]) -> Result<MixedState> {
    let n = state.n_qubits();
    if keep.is_empty() {
        return Err(Error::domain("reduced_density needs at least one kept qubit"));
    }
    let mut kept = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if let Some(&q) = kept.iter().find(|&&q| q >= n) {
        return Err(Error::Index { index: q, n_qubits: n });
    }
    check_mixed_register(kept.len())?;
    let traced: Vec<usize> = (0..n).filter(|q| !kept.contains(q)).collect();

    let scatter = |qubits: &[usize], value: usize| -> usize {
        let m = qubits.len();
        qubits
            .iter()
            .enumerate()
            .filter(|(pos, _)| value & (1 << (m - 1 - pos)) != 0)
            .fold(0, |acc, (_, &q)| acc | bit_of(n, q))
    };

    let dk = 1usize << kept.len();
    let de = 1usize << traced.len();
    let kept_idx: Vec<usize> = (0..dk).map(|a| scatter(&kept, a)).collect();
    let env_idx: Vec<usize> = (0..de).map(|e| scatter(&traced, e)).collect();
    let amps = state.amplitudes();

    let mut data = vec![Complex64::new(0.0, 0.0); dk * dk];
    for (a, &ia) in kept_idx.iter().enumerate() {
        for (b, &ib) in kept_idx.iter().enumerate().skip(a) {
            let v: Complex64 = env_idx.iter().map(|&e| amps[ia | e] * amps[ib | e].conj()).sum();
            data[a * dk + b] = v;
            data[b * dk + a] = v.conj();
        }
    }
    Ok(MixedState {
        n_qubits: kept.len(),
        data,
    })
}

/// Von Neumann entropy in bits; eigenvalues at or below 1e-12 are dropped.
pub fn vn_entropy(rho: &MixedState) -> f64 {
    rho.eigenvalues()
        .into_iter()
        .filter(|&l| l > 1e-12)
        .map(|l| -l * l.log2())
        .sum::<f64>()
        .max(0.0)
}

/// `Tr(ρ²)`, computed as the squared Frobenius norm of a Hermitian ρ.
pub fn purity(rho: &MixedState) -> f64 {
    rho.data.iter().map(|x| x.norm_sqr()).sum()
}
