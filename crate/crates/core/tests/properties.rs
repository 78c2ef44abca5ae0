use aheft_core::ansatz::{prepare_state, AnsatzSpec, ParamVector};
use aheft_core::gradient::{gradient_exact, prepare_mixed};
use aheft_core::hamiltonian::{build_tfim, build_xxz, ground_state, GroundSolution, PauliString, PauliSum};
use aheft_core::metrics::{effective_dimension, fidelity_to_ground, half_chain_entropy};
use aheft_core::sim::{apply_depolarizing_pair, zero_state, GateOp, MixedState, PureState};
use aheft_core::stats::welch_test;
use aheft_core::training::{sigma_schedule, theory_constants};
use num_complex::Complex64;
use proptest::prelude::*;

fn gate(n: usize) -> impl Strategy<Value = GateOp> {
    let angle = -10.0..10.0f64;
    prop_oneof![
        (0..n, angle.clone()).prop_map(|(qubit, angle)| GateOp::Ry { qubit, angle }),
        (0..n, angle).prop_map(|(qubit, angle)| GateOp::Rz { qubit, angle }),
        (0..n, 1..n).prop_map(move |(c, d)| GateOp::Cnot { control: c, target: (c + d) % n }),
    ]
}

fn circuit() -> impl Strategy<Value = (usize, Vec<GateOp>)> {
    (2..6usize).prop_flat_map(|n| (Just(n), prop::collection::vec(gate(n), 1..30)))
}

fn params(n: usize, l: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.2..3.2f64, l * (2 * n - 1))
}

fn sample() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-50.0..50.0f64, 3..12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gates_preserve_norm((n, gates) in circuit()) {
        let mut s = zero_state(n).unwrap();
        for g in &gates {
            s.apply(g).unwrap();
        }
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn noisy_state_is_a_density_matrix(theta in params(3, 2), p in 0.0..1.0f64) {
        let spec = AnsatzSpec::heft(3, 2).unwrap();
        let rho = prepare_mixed(&spec, &ParamVector::new(theta), p).unwrap();
        prop_assert!((rho.trace() - 1.0).norm() < 1e-12);
        prop_assert!(rho.hermiticity_error() < 1e-12);
        prop_assert!(rho.eigenvalues().iter().all(|&e| e > -1e-12));
    }

    #[test]
    fn depolarizing_keeps_trace((n, gates) in circuit(), p in 0.0..1.0f64) {
        let mut s = zero_state(n).unwrap();
        for g in &gates {
            s.apply(g).unwrap();
        }
        let mut rho = MixedState::from_pure(&s).unwrap();
        apply_depolarizing_pair(&mut rho, 0, 1, p).unwrap();
        prop_assert!((rho.trace() - 1.0).norm() < 1e-12);
        prop_assert!(rho.hermiticity_error() < 1e-12);
    }

    #[test]
    fn entropy_within_bounds(theta in params(4, 3), cut in 1..4usize) {
        let spec = AnsatzSpec::heft(4, 3).unwrap();
        let s = prepare_state(&spec, &ParamVector::new(theta)).unwrap();
        let e = half_chain_entropy(&s, cut).unwrap();
        prop_assert!(e >= -1e-12 && e <= cut.min(4 - cut) as f64 + 1e-12);
    }

    #[test]
    fn deff_at_most_dimension(theta in params(4, 2)) {
        let spec = AnsatzSpec::heft(4, 2).unwrap();
        let s = prepare_state(&spec, &ParamVector::new(theta)).unwrap();
        let d = effective_dimension(&s, 1e-6).unwrap();
        prop_assert!((1..=16).contains(&d));
    }

    #[test]
    fn gradient_bounded_by_norm(theta in params(3, 2), xxz in any::<bool>()) {
        let spec = AnsatzSpec::heft(3, 2).unwrap();
        let h = if xxz { build_xxz(3).unwrap() } else { build_tfim(3).unwrap() };
        let g = gradient_exact(&spec, &ParamVector::new(theta), &h).unwrap();
        prop_assert!(g.max_abs() <= h.op_norm_bound() + 1e-12);
    }

    #[test]
    fn welch_antisymmetric(a in sample(), b in sample()) {
        let ab = welch_test(&a, &b).unwrap();
        let ba = welch_test(&b, &a).unwrap();
        prop_assert_eq!(ab.t_stat, -ba.t_stat);
        prop_assert!((ab.log10_p - ba.log10_p).abs() < 1e-12);
        prop_assert!(ab.log10_p <= 0.0 && ab.dof > 0.0);
    }

    #[test]
    fn welch_scale_invariant(a in sample(), b in sample(), c in 1e-3..1e3f64) {
        let r = welch_test(&a, &b).unwrap();
        let sa: Vec<f64> = a.iter().map(|x| x * c).collect();
        let sb: Vec<f64> = b.iter().map(|x| x * c).collect();
        let s = welch_test(&sa, &sb).unwrap();
        prop_assert!((r.t_stat - s.t_stat).abs() <= 1e-12 * r.t_stat.abs().max(1.0));
        prop_assert!((r.log10_p - s.log10_p).abs() <= 1e-12 * r.log10_p.abs().max(1.0));
    }

    #[test]
    fn schedule_clamped_and_monotone(
        ts in 0..300usize,
        s0 in 1e-5..0.1f64,
        lambda in 0.0..0.5f64,
        extra in 0.0..1.0f64,
    ) {
        let crit = s0 + extra;
        let mut last = 0.0;
        for t in 0..600 {
            let s = sigma_schedule(t, ts, s0, lambda, crit);
            prop_assert!(s <= crit + 1e-15);
            prop_assert!(s >= last);
            last = s;
        }
    }

    #[test]
    fn w_max_is_floor_of_delta(n in 1..20usize, l in 1..20usize, c1 in 0.1..5.0f64, c2 in 0.1..2.0f64) {
        let k = theory_constants(n, l, c1, c2, 2.0 * n as f64);
        prop_assert_eq!(k.w_max as f64, k.delta_eff.floor());
        prop_assert!(k.deff_ceiling <= 2f64.powi(n as i32));
    }

    #[test]
    fn fidelity_invariant_under_rebasis(theta in params(3, 1), a in -3.0..3.0f64, b in -3.0..3.0f64, c in -3.0..3.0f64) {
        // −Z₀ on three qubits: a 4-fold degenerate ground space.
        let h = PauliSum::new(3, vec![PauliString::parse(-1.0, "ZII").unwrap()]).unwrap();
        let gs = ground_state(&h).unwrap();
        prop_assert_eq!(gs.degeneracy(), 4);
        let spec = AnsatzSpec::heft(3, 1).unwrap();
        let psi = prepare_state(&spec, &ParamVector::new(theta)).unwrap();
        let rotated = GroundSolution { basis: rotate(&gs.basis, a, b, c), ..gs.clone() };
        let f1 = fidelity_to_ground(&psi, &gs).unwrap();
        let f2 = fidelity_to_ground(&psi, &rotated).unwrap();
        prop_assert!((f1 - f2).abs() < 1e-12);
    }
}

/// Mixes the basis by a product of complex Givens rotations.
fn rotate(basis: &[PureState], a: f64, b: f64, c: f64) -> Vec<PureState> {
    let mut vecs: Vec<Vec<Complex64>> = basis.iter().map(|s| s.amplitudes().to_vec()).collect();
    let k = vecs.len();
    for (idx, angle) in [a, b, c].into_iter().enumerate() {
        let (i, j) = (idx % k, (idx + 1) % k);
        let (cs, sn) = (angle.cos(), Complex64::from_polar(angle.sin(), angle * 0.7));
        let (vi, vj) = (vecs[i].clone(), vecs[j].clone());
        for x in 0..vi.len() {
            vecs[i][x] = vi[x] * cs - sn.conj() * vj[x];
            vecs[j][x] = sn * vi[x] + vj[x] * cs;
        }
    }
    vecs.into_iter().map(|v| PureState::from_amplitudes(v).unwrap()).collect()
}

#[test]
fn p_never_increases_with_separation() {
    use rand_distr::{Distribution, Normal};
    let mut rng = aheft_core::SeedStream::new(12).rng();
    let base: Vec<f64> = (0..30).map(|_| Normal::new(0.0, 1.0).unwrap().sample(&mut rng)).collect();
    let other: Vec<f64> = (0..25).map(|_| Normal::new(0.0, 1.5).unwrap().sample(&mut rng)).collect();
    let mut last = f64::INFINITY;
    for step in 0..200 {
        let shift = step as f64 * 0.05;
        let b: Vec<f64> = other.iter().map(|x| x + shift).collect();
        let r = welch_test(&base, &b).unwrap();
        if shift > 0.5 {
            assert!(r.log10_p <= last + 1e-12, "shift {shift}");
            last = r.log10_p;
        }
    }
    assert!(last < -20.0);
}
