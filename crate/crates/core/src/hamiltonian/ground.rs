use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::{expectation, PauliSum};
use crate::error::{Error, Result};
use crate::sim::{zero_state, PureState};

/// Relative width (in units of the spectral scale) of the window that counts
/// as the ground space.
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-9;

/// Registers above this size use the matrix-free solver.
const DENSE_MAX_QUBITS: usize = 10;

/// Lowest eigenvalue and an orthonormal basis of its eigenspace.
#[derive(Debug, Clone)]
pub struct GroundSolution {
    pub energy: f64,
    pub basis: Vec<PureState>,
    /// Absolute energy window used to collect `basis`.
    pub degeneracy_tol: f64,
}

impl GroundSolution {
    pub fn n_qubits(&self) -> usize {
        self.basis[0].n_qubits()
    }

    pub fn degeneracy(&self) -> usize {
        self.basis.len()
    }

    /// Squared norm of the projection of `state` onto the ground space.
    pub fn projection_weight(&self, state: &PureState) -> Result<f64> {
        let mut total = 0.0;
        for b in &self.basis {
            total += b.fidelity(state)?;
        }
        Ok(total.clamp(0.0, 1.0))
    }
}

/// Exact ground space: dense diagonalization up to 10 qubits, restarted
/// Lanczos above.
pub fn ground_state(h: &PauliSum) -> Result<GroundSolution> {
    if h.n_qubits() <= DENSE_MAX_QUBITS {
        ground_state_dense(h)
    } else {
        ground_state_iterative(h, &LanczosOptions::default())
    }
}

/// `1 − ‖P_ground |0…0>‖²`.
pub fn reference_gap(h: &PauliSum) -> Result<f64> {
    let gs = ground_state(h)?;
    let reference = zero_state(h.n_qubits())?;
    Ok(1.0 - gs.projection_weight(&reference)?)
}

pub fn ground_state_dense(h: &PauliSum) -> Result<GroundSolution> {
    if h.n_qubits() > DENSE_MAX_QUBITS {
        return Err(Error::Resource(format!(
            "dense diagonalization capped at {DENSE_MAX_QUBITS} qubits, got {}",
            h.n_qubits()
        )));
    }
    let dense = h.to_dense();
    let (values, vectors): (Vec<f64>, Vec<Vec<Complex64>>) = if h.is_real() {
        let real = dense.map(|z| z.re);
        let eig = SymmetricEigen::new(real);
        let cols = (0..eig.eigenvectors.ncols())
            .map(|k| eig.eigenvectors.column(k).iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        (eig.eigenvalues.iter().copied().collect(), cols)
    } else {
        let eig = SymmetricEigen::new(dense);
        let cols = (0..eig.eigenvectors.ncols())
            .map(|k| eig.eigenvectors.column(k).iter().copied().collect())
            .collect();
        (eig.eigenvalues.iter().copied().collect(), cols)
    };

    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tol = DEFAULT_DEGENERACY_TOL * (hi - lo).max(1.0);
    let basis = values
        .iter()
        .zip(vectors)
        .filter(|(&e, _)| e - lo <= tol)
        .map(|(_, v)| PureState::from_amplitudes(v))
        .collect::<Result<Vec<_>>>()?;
    Ok(GroundSolution {
        energy: lo,
        basis,
        degeneracy_tol: tol,
    })
}

#[derive(Debug, Clone)]
pub struct LanczosOptions {
    /// Krylov dimension before an explicit restart.
    pub max_krylov: usize,
    /// Residual `‖Hv − θv‖` at which a Ritz pair counts as converged.
    pub residual_tol: f64,
    pub max_restarts: usize,
    /// Cap on the number of degenerate ground vectors collected.
    pub max_degeneracy: usize,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            max_krylov: 120,
            residual_tol: 1e-9,
            max_restarts: 40,
            max_degeneracy: 16,
        }
    }
}

type CVec = Vec<Complex64>;

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn project_out(w: &mut [Complex64], basis: &[CVec]) {
    for q in basis {
        let c = dot(q, w);
        w.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
    }
}

/// Deterministic start vector with support on every basis state.
fn start_vector(dim: usize, salt: u64) -> CVec {
    let mut z = 0x2545_F491_4F6C_DD1Du64 ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    (0..dim)
        .map(|_| {
            z ^= z << 13;
            z ^= z >> 7;
            z ^= z << 17;
            let re = (z >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
            z ^= z << 13;
            z ^= z >> 7;
            z ^= z << 17;
            let im = (z >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
            Complex64::new(re, im)
        })
        .collect()
}

/// Lowest eigenpair of `H` restricted to the complement of `deflate`.
fn lowest_pair(h: &PauliSum, deflate: &[CVec], salt: u64, opts: &LanczosOptions) -> Result<(f64, CVec)> {
    let dim = 1usize << h.n_qubits();
    let free = dim - deflate.len();
    let m = opts.max_krylov.min(free).max(1);
    let mut start = start_vector(dim, salt);
    let mut last_residual = f64::INFINITY;
    let mut hv = vec![Complex64::new(0.0, 0.0); dim];

    for _restart in 0..=opts.max_restarts {
        project_out(&mut start, deflate);
        let n0 = norm(&start);
        if n0 == 0.0 {
            return Err(Error::numeric("Lanczos start vector vanished after deflation"));
        }
        let mut q: Vec<CVec> = vec![start.iter().map(|x| x / n0).collect()];
        let mut alpha: Vec<f64> = Vec::with_capacity(m);
        let mut beta: Vec<f64> = Vec::with_capacity(m);

        for j in 0..m {
            h.apply(&q[j], &mut hv);
            let mut w = hv.clone();
            let a = dot(&q[j], &w).re;
            alpha.push(a);
            // Two passes of full reorthogonalization.
            for _ in 0..2 {
                project_out(&mut w, deflate);
                project_out(&mut w, &q);
            }
            let b = norm(&w);

            let done = j + 1 == m || b < 1e-13 || (j + 1) % 8 == 0;
            if done {
                let k = alpha.len();
                let t = DMatrix::from_fn(k, k, |r, c| {
                    if r == c {
                        alpha[r]
                    } else if r + 1 == c {
                        beta[r]
                    } else if c + 1 == r {
                        beta[c]
                    } else {
                        0.0
                    }
                });
                let eig = SymmetricEigen::new(t);
                let (imin, &theta) = eig
                    .eigenvalues
                    .iter()
                    .enumerate()
                    .min_by(|a, b| a.1.total_cmp(b.1))
                    .expect("non-empty tridiagonal");
                let y = eig.eigenvectors.column(imin);
                let residual = b * y[k - 1].abs();
                last_residual = residual;
                if residual < opts.residual_tol || b < 1e-13 || j + 1 == m {
                    let mut ritz = vec![Complex64::new(0.0, 0.0); dim];
                    for (coef, qk) in y.iter().zip(&q) {
                        ritz.iter_mut().zip(qk).for_each(|(r, x)| *r += x * *coef);
                    }
                    project_out(&mut ritz, deflate);
                    let nr = norm(&ritz);
                    ritz.iter_mut().for_each(|x| *x /= nr);
                    if residual < opts.residual_tol || b < 1e-13 {
                        return Ok((theta, ritz));
                    }
                    start = ritz;
                    break;
                }
            }
            beta.push(b);
            q.push(w.iter().map(|x| x / b).collect());
        }
    }
    Err(Error::numeric(format!(
        "Lanczos did not converge after {} restarts of {} iterations (last residual {:.3e}, target {:.1e})",
        opts.max_restarts, m, last_residual, opts.residual_tol
    )))
}

/// Matrix-free ground space via restarted Lanczos with deflation for
/// degenerate levels.
pub fn ground_state_iterative(h: &PauliSum, opts: &LanczosOptions) -> Result<GroundSolution> {
    let (e0, v0) = lowest_pair(h, &[], 0, opts)?;
    let tol = DEFAULT_DEGENERACY_TOL * (2.0 * h.op_norm_bound()).max(1.0);
    let dim = 1usize << h.n_qubits();
    let mut found = vec![v0];
    while found.len() < opts.max_degeneracy.min(dim) {
        let (e, v) = lowest_pair(h, &found, found.len() as u64, opts)?;
        if e - e0 > tol {
            break;
        }
        found.push(v);
    }
    let basis = found
        .into_iter()
        .map(PureState::from_amplitudes)
        .collect::<Result<Vec<_>>>()?;
    // Report the Rayleigh quotient of the first vector; it is accurate to
    // residual², tighter than the Ritz value bookkeeping.
    let energy = expectation(h, &basis[0])?;
    Ok(GroundSolution {
        energy,
        basis,
        degeneracy_tol: tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{build_tfim, build_xxz, Pauli, PauliString};

    fn minus_sum_z(n: usize) -> PauliSum {
        let terms = (0..n)
            .map(|q| PauliString::from_sparse(-1.0, n, &[(q, Pauli::Z)]).unwrap())
            .collect();
        PauliSum::new(n, terms).unwrap()
    }

    #[test]
    fn diagonal_hamiltonian() {
        for n in [1, 3, 5] {
            let gs = ground_state(&minus_sum_z(n)).unwrap();
            assert!((gs.energy + n as f64).abs() < 1e-12);
            assert_eq!(gs.degeneracy(), 1);
            let z = zero_state(n).unwrap();
            assert!((gs.basis[0].fidelity(&z).unwrap() - 1.0).abs() < 1e-12);
            assert!(reference_gap(&minus_sum_z(n)).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn heisenberg_pair_singlet() {
        let gs = ground_state(&build_xxz(2).unwrap()).unwrap();
        assert!((gs.energy + 6.0).abs() < 1e-12);
        assert_eq!(gs.degeneracy(), 1);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let singlet = PureState::from_amplitudes(vec![0.0.into(), h.into(), (-h).into(), 0.0.into()]).unwrap();
        assert!((gs.basis[0].fidelity(&singlet).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_ground_space_is_collected() {
        // −Z0 alone on 3 qubits: ground space is 4-fold degenerate.
        let h = PauliSum::new(3, vec![PauliString::parse(-1.0, "ZII").unwrap()]).unwrap();
        let dense = ground_state_dense(&h).unwrap();
        assert_eq!(dense.degeneracy(), 4);
        let iter = ground_state_iterative(&h, &LanczosOptions::default()).unwrap();
        assert_eq!(iter.degeneracy(), 4);
        assert!((iter.energy + 1.0).abs() < 1e-10);
    }

    #[test]
    fn lanczos_matches_dense_small() {
        for n in [3, 5, 6] {
            let h = build_tfim(n).unwrap();
            let d = ground_state_dense(&h).unwrap();
            let l = ground_state_iterative(&h, &LanczosOptions::default()).unwrap();
            assert!((d.energy - l.energy).abs() < 1e-9, "n={n}: {} vs {}", d.energy, l.energy);
            assert!((d.basis[0].fidelity(&l.basis[0]).unwrap() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn lanczos_reports_non_convergence() {
        let opts = LanczosOptions {
            max_krylov: 2,
            residual_tol: 1e-14,
            max_restarts: 0,
            max_degeneracy: 1,
        };
        let err = ground_state_iterative(&build_tfim(6).unwrap(), &opts).unwrap_err();
        match err {
            Error::Numeric(msg) => assert!(msg.contains("residual")),
            other => panic!("unexpected {other:?}"),
        }
    }
}
