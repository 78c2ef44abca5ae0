use aheft_core::ansatz::{AnsatzSpec, ParamVector};
use aheft_core::hamiltonian::{build_tfim, build_xxz};
use aheft_core::rng::SeedStream;
use aheft_core::training::*;
use aheft_core::Error;

fn short(total: usize) -> ScheduleConfig {
    ScheduleConfig { total_steps: total, phase1_cap: total / 2, burn_in: 5, ..Default::default() }
}

#[test]
fn lambda_zero_adaptive_equals_static() {
    let spec = AnsatzSpec::heft(4, 2).unwrap();
    let h = build_tfim(4).unwrap();
    let cfg = ScheduleConfig { lambda: 0.0, ..short(60) };
    let seed = SeedStream::new(7).child("seed", 0);
    let a = run_adaptive(&spec, &h, &cfg, &seed).unwrap();
    let s = run_static(&spec, &h, &cfg, &seed).unwrap();
    assert_eq!(a.steps, s.steps);
    assert_eq!(a.final_theta, s.final_theta);
    assert!(a.t_switch.is_some());
}

#[test]
fn trajectory_length_and_determinism() {
    let h = build_tfim(3).unwrap();
    let cfg = short(30);
    let seed = SeedStream::new(1);
    for (method, spec) in [
        (Method::Adaptive, AnsatzSpec::heft(3, 2).unwrap()),
        (Method::Static, AnsatzSpec::heft(3, 2).unwrap()),
        (Method::Hea, AnsatzSpec::hea(3, 2).unwrap()),
    ] {
        let opts = RunOptions { noise_p: 0.0, deff_every: Some(5) };
        let a = run_with(method, &spec, &h, &cfg, &seed, &opts).unwrap();
        let b = run_with(method, &spec, &h, &cfg, &seed, &opts).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 31);
        assert!(a.failed.is_none());
        assert_eq!(a.steps.iter().filter(|s| s.d_eff.is_some()).count(), 7);
        assert!(a.steps.iter().enumerate().all(|(t, s)| s.t == t));
    }
}

#[test]
fn schedule_invariants_along_a_run() {
    let spec = AnsatzSpec::heft(4, 2).unwrap();
    let h = build_xxz(4).unwrap();
    let cfg = ScheduleConfig { lambda: 0.3, ..short(80) };
    let r = run_adaptive(&spec, &h, &cfg, &SeedStream::new(3)).unwrap();
    let crit = sigma_crit(4, 2, cfg.c2);
    let s0 = sigma_zero(4, 2, cfg.kappa);
    let ts = r.t_switch.unwrap();
    assert!(ts >= cfg.burn_in && ts <= cfg.phase1_cap);
    for w in r.steps.windows(2) {
        assert!(w[1].sigma >= w[0].sigma);
    }
    for s in &r.steps {
        assert!(s.sigma <= crit + 1e-15);
        if s.t < ts {
            assert_eq!(s.sigma, s0);
        }
    }
    // λ = 0.3 reaches the clamp well before the end.
    assert_eq!(r.steps[r.len() - 2].sigma, crit);
}

#[test]
fn forced_switch_is_flagged() {
    let spec = AnsatzSpec::heft(4, 2).unwrap();
    let h = build_tfim(4).unwrap();
    let cfg = ScheduleConfig { delta_switch: 1e-12, ..short(40) };
    let r = run_adaptive(&spec, &h, &cfg, &SeedStream::new(0)).unwrap();
    assert!(r.forced_switch);
    assert_eq!(r.t_switch, Some(cfg.phase1_cap));
}

#[test]
fn loose_threshold_switches_at_burn_in() {
    let spec = AnsatzSpec::heft(4, 2).unwrap();
    let h = build_tfim(4).unwrap();
    let cfg = ScheduleConfig { delta_switch: 1e6, ..short(40) };
    let r = run_adaptive(&spec, &h, &cfg, &SeedStream::new(0)).unwrap();
    assert!(!r.forced_switch);
    assert_eq!(r.t_switch, Some(cfg.burn_in));
}

#[test]
fn kick_variance_matches_schedule() {
    let (s0, crit, lambda) = (0.01, 0.5, 0.1);
    let ts = 10;
    let mut sum_sq = 0.0;
    let mut expected = 0.0;
    let n = 10_000;
    for t in ts + 1..ts + 5 {
        let mut theta = ParamVector::new(vec![0.0; n / 4]);
        let new = phase_two_kick(&mut theta, t, ts, s0, lambda, crit, &SeedStream::new(t as u64)).unwrap();
        let prev = (s0 * (lambda * (t - ts - 1) as f64).exp()).min(crit);
        sum_sq += theta.values().iter().map(|x| x * x).sum::<f64>();
        expected += (new * new - prev * prev) * (n / 4) as f64;
    }
    // Sum of squares of n Gaussians has relative standard error √(2/n).
    let rel = (sum_sq - expected).abs() / expected;
    assert!(rel < 5.0 * (2.0 / n as f64).sqrt(), "rel {rel}");
}

#[test]
fn clamped_kick_draws_nothing() {
    let mut theta = ParamVector::new(vec![1.0; 8]);
    let s = phase_two_kick(&mut theta, 500, 0, 0.01, 0.1, 0.05, &SeedStream::new(0)).unwrap();
    assert_eq!(s, 0.05);
    assert_eq!(theta.values(), &[1.0; 8]);
}

#[test]
fn static_tfim_descends_past_reference() {
    let spec = AnsatzSpec::heft(4, 4).unwrap();
    let h = build_tfim(4).unwrap();
    let r = run_static(&spec, &h, &ScheduleConfig::default(), &SeedStream::new(7)).unwrap();
    let e = r.final_energy().unwrap();
    let e0 = aheft_core::hamiltonian::ground_state(&h).unwrap().energy;
    assert!(e >= e0 - 1e-10 && e < -3.0, "{e}");
}

#[test]
fn hea_on_two_qubits_runs() {
    let spec = AnsatzSpec::hea(2, 2).unwrap();
    let h = build_tfim(2).unwrap();
    let r = run_hea(&spec, &h, &short(50), &SeedStream::new(2)).unwrap();
    assert_eq!(r.len(), 51);
    assert!(r.steps.iter().all(|s| s.sigma == 0.0));
}

#[test]
fn invalid_inputs() {
    let heft = AnsatzSpec::heft(4, 2).unwrap();
    let hea = AnsatzSpec::hea(4, 2).unwrap();
    let h = build_tfim(4).unwrap();
    let cfg = short(10);
    let seed = SeedStream::new(0);
    assert!(matches!(run_hea(&heft, &h, &cfg, &seed), Err(Error::Domain(_))));
    assert!(matches!(run_static(&hea, &h, &cfg, &seed), Err(Error::Domain(_))));
    assert!(matches!(run_static(&heft, &build_tfim(3).unwrap(), &cfg, &seed), Err(Error::Size(_))));
    let bad = ScheduleConfig { phase1_cap: 20, ..cfg };
    assert!(run_adaptive(&heft, &h, &bad, &seed).is_err());
    let opts = RunOptions { noise_p: 2.0, deff_every: None };
    assert!(run_with(Method::Static, &heft, &h, &cfg, &seed, &opts).is_err());
}

#[test]
fn noisy_run_records_higher_energy() {
    let spec = AnsatzSpec::heft(3, 2).unwrap();
    let h = build_tfim(3).unwrap();
    let cfg = short(20);
    let seed = SeedStream::new(5);
    let clean = run_with(Method::Static, &spec, &h, &cfg, &seed, &RunOptions::default()).unwrap();
    let noisy = run_with(Method::Static, &spec, &h, &cfg, &seed, &RunOptions { noise_p: 0.05, deff_every: None }).unwrap();
    assert!(noisy.steps[0].energy > clean.steps[0].energy);
}
