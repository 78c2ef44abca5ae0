//! Acceptance and invariant suites.

use std::path::Path;
use std::time::{Duration, Instant};

use aheft_core::ansatz::{AnsatzSpec, ParamVector};
use aheft_core::gradient::{energy, energy_density, gradient_exact};
use aheft_core::hamiltonian::{build_tfim, build_xxz, reference_gap, Model};
use aheft_core::metrics::{sample_params, Sampler};
use aheft_core::sim::{apply_gate, apply_zz_entangler, overlap, zero_state, GateOp, PureState};
use aheft_core::stats::{cohens_d, welch_test};
use aheft_core::training::{sigma_crit, Method};
use aheft_core::SeedStream;
use num_complex::Complex64;

use crate::config::{ExperimentConfig, ExperimentId, Scale};
use crate::experiments::{run_experiment, seed_stream};
use crate::result::{summarize_records, ExperimentResult};

/// Outcome of one acceptance criterion or invariant.
#[derive(Debug, Clone)]
pub struct Check {
    pub id: String,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl Check {
    pub fn line(&self) -> String {
        let over = if self.elapsed > self.budget { " [over time budget]" } else { "" };
        format!(
            "{} {:>3} {:<28} {:>8.2}s  {}{}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.detail,
            over
        )
    }
}

fn timed(id: &str, name: &str, budget_s: u64, f: impl FnOnce() -> Result<(bool, String), String>) -> Check {
    let t = Instant::now();
    let (passed, detail) = match f() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    Check {
        id: id.into(),
        name: name.into(),
        passed,
        detail,
        elapsed: t.elapsed(),
        budget: Duration::from_secs(budget_s),
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn desk(id: ExperimentId, n: usize, l: usize, seeds: usize) -> ExperimentConfig {
    let mut c = ExperimentConfig::defaults(id, Scale::Desk);
    c.n_list = vec![n];
    c.l_list = vec![l];
    c.n_seeds = seeds;
    c.master_seed = 7;
    c
}

fn run(c: &ExperimentConfig) -> Result<ExperimentResult, String> {
    run_experiment(c).map_err(err)
}

fn mean_of(r: &ExperimentResult, key: &str, metric: &str) -> Result<f64, String> {
    r.summary(key, metric).map(|s| s.mean).ok_or_else(|| format!("missing summary {key}/{metric}"))
}

/// 1: entangler against `exp(−iφ ZZ/2)` and `RY(π)|0> = |1>`.
pub fn criterion_1() -> Check {
    timed("1", "gate algebra", 1, || {
        let mut rng = SeedStream::new(1).rng();
        let mut worst = 1.0f64;
        for case in 0..200 {
            let n = 2 + case % 3;
            let i = case % n;
            let j = (i + 1 + case / 3 % (n - 1)) % n;
            let phi = -7.0 + 14.0 * (case as f64 * 0.618_033_988_75).fract();
            let spec = AnsatzSpec::hea(n, 2).map_err(err)?;
            let theta = sample_params(&spec, Sampler::Uniform, &mut rng).map_err(err)?;
            let psi = aheft_core::ansatz::prepare_state(&spec, &theta).map_err(err)?;
            let mut got = psi.clone();
            apply_zz_entangler(&mut got, i, j, phi).map_err(err)?;
            // exp(−iφ Z_i Z_j / 2) is diagonal with phase e^{∓iφ/2} by parity.
            let want: Vec<_> = psi
                .amplitudes()
                .iter()
                .enumerate()
                .map(|(b, a)| {
                    let parity = ((b >> (n - 1 - i)) ^ (b >> (n - 1 - j))) & 1;
                    let s = if parity == 0 { -0.5 } else { 0.5 };
                    a * Complex64::from_polar(1.0, s * phi)
                })
                .collect();
            let want = PureState::from_amplitudes(want).map_err(err)?;
            worst = worst.min(overlap(&want, &got).map_err(err)?.norm_sqr());
        }
        let mut s = zero_state(1).map_err(err)?;
        apply_gate(&mut s, &GateOp::Ry { qubit: 0, angle: std::f64::consts::PI }).map_err(err)?;
        let flip = s.amplitudes()[1] == Complex64::new(1.0, 0.0);
        Ok((
            worst >= 1.0 - 1e-12 && flip,
            format!("min fidelity 1-{:.1e}; RY(pi)|0> = |1>: {flip}", 1.0 - worst),
        ))
    })
}

/// 2: parameter shift against central differences.
pub fn criterion_2() -> Check {
    timed("2", "gradient correctness", 10, || {
        let mut rng = SeedStream::new(2).rng();
        let mut worst = 0.0f64;
        for case in 0..20 {
            let n = 2 + case % 3;
            let l = 1 + case / 3 % 3;
            let spec = if case % 2 == 0 { AnsatzSpec::heft(n, l) } else { AnsatzSpec::hea(n, l) }.map_err(err)?;
            let h = if case % 4 < 2 { build_tfim(n) } else { build_xxz(n) }.map_err(err)?;
            let theta = sample_params(&spec, Sampler::Uniform, &mut rng).map_err(err)?;
            let g = gradient_exact(&spec, &theta, &h).map_err(err)?;
            for k in 0..theta.len() {
                let shift = |d: f64| -> Result<f64, String> {
                    let mut t = theta.clone();
                    t.values_mut()[k] += d;
                    energy(&spec, &t, &h, 0.0).map_err(err)
                };
                let fd = (shift(1e-5)? - shift(-1e-5)?) / 2e-5;
                worst = worst.max((fd - g.values()[k]).abs());
            }
        }
        Ok((worst <= 1e-6, format!("max |shift - fd| = {worst:.2e}")))
    })
}

/// 3: reference-state gaps.
pub fn criterion_3() -> Check {
    timed("3", "reference-state gap", 30, || {
        let want = [0.57, 0.67, 0.74, 0.79];
        let mut ok = true;
        let mut tfim = Vec::new();
        let mut xxz_worst = 0.0f64;
        for (k, n) in [2, 4, 6, 8].into_iter().enumerate() {
            let d = reference_gap(&build_tfim(n).map_err(err)?).map_err(err)?;
            ok &= (d - want[k]).abs() <= 0.01;
            tfim.push(format!("{d:.4}"));
            let x = reference_gap(&build_xxz(n).map_err(err)?).map_err(err)?;
            xxz_worst = xxz_worst.max((x - 1.0).abs());
        }
        ok &= xxz_worst <= 1e-10;
        Ok((ok, format!("TFIM ({}) XXZ max |d-1| = {xxz_worst:.1e}", tfim.join(", "))))
    })
}

/// 4: flat gradient scale up to `σ_crit`, collapse at `σ = 1`.
pub fn criterion_4() -> Check {
    timed("4", "critical-cutoff shape", 600, || {
        let r = run(&desk(ExperimentId::AT2, 8, 8, 20))?;
        let get = |label: &str| mean_of(&r, &format!("N=8,L=8,sigma={label}"), "grad_norm2");
        let flat = [get("sigma0")?, get("0.5*sigma_crit")?, get("sigma_crit")?];
        let (lo, hi) = flat.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
        let at_one = get("1")?;
        Ok((
            hi <= 2.0 * lo && at_one < flat[2],
            format!(
                "<|g|^2> at sigma0, crit/2, crit = {:.3}, {:.3}, {:.3} (ratio {:.2}); at 1.0 = {at_one:.3}",
                flat[0],
                flat[1],
                flat[2],
                hi / lo
            ),
        ))
    })
}

/// 5: `d_eff` saturation after the switch.
pub fn criterion_5() -> Check {
    timed("5", "d_eff dynamics", 300, || {
        let r = run(&desk(ExperimentId::AT8, 8, 8, 3))?;
        // Seed-averaged trace: non-decreasing up to 2% single-step dips.
        let avg = r.series("d_eff/N=8,L=8,method=adaptive").ok_or("missing d_eff series")?;
        let mut ok = avg.y.windows(2).all(|w| w[1] >= 0.98 * w[0]);
        let mut notes = vec![format!("mean d_eff {:.0} -> {:.0}", avg.y[0], avg.y[avg.y.len() - 1])];
        for rec in r.records("N=8,L=8,method=adaptive") {
            let tr = rec.trajectory.as_ref().ok_or("missing trajectory")?;
            let ts = tr.t_switch.ok_or("no switch")?;
            let pts: Vec<(usize, usize)> = tr.steps.iter().filter_map(|s| s.d_eff.map(|d| (s.t, d))).collect();
            let maxima: Vec<usize> = pts
                .iter()
                .scan(0, |m, &(_, d)| {
                    *m = d.max(*m);
                    Some(*m)
                })
                .collect();
            let monotone = maxima.windows(2).all(|w| w[1] >= w[0]);
            let first_full = pts.iter().find(|&&(t, d)| t >= ts && d == 256).map(|&(t, _)| t);
            let reached = first_full.is_some_and(|t| t <= ts + 10);
            let stays = first_full.is_some_and(|t0| pts.iter().filter(|&&(t, _)| t >= t0).all(|&(_, d)| d == 256));
            ok &= monotone && reached && stays;
            notes.push(format!("seed {}: switch {ts}, 256 at {:?}", rec.seed, first_full));
        }
        Ok((ok, notes.join("; ")))
    })
}

/// 6: Heisenberg chain, static stays positive while adaptive goes below −3.
pub fn criterion_6() -> Check {
    timed("6", "XXZ sign flip", 300, || {
        let r = run(&desk(ExperimentId::AT16, 4, 4, 5))?;
        let st = r.values("N=4,L=4,method=static", "final_energy");
        let ad = r.values("N=4,L=4,method=adaptive", "final_energy");
        let ok = st.len() == 5 && ad.len() == 5 && st.iter().all(|&e| e > 0.0) && ad.iter().all(|&e| e < -3.0);
        let fmt = |v: &[f64]| v.iter().map(|e| format!("{e:.2}")).collect::<Vec<_>>().join(", ");
        Ok((ok, format!("static [{}] adaptive [{}]", fmt(&st), fmt(&ad))))
    })
}

/// 7: adaptive beats static on TFIM with significance and effect size.
pub fn criterion_7() -> Check {
    timed("7", "statistical separation", 600, || {
        let r = run(&desk(ExperimentId::AT15, 4, 4, 20))?;
        let a = r.values("N=4,L=4,method=adaptive", "final_energy");
        let s = r.values("N=4,L=4,method=static", "final_energy");
        let w = welch_test(&a, &s).map_err(err)?;
        let d = cohens_d(&a, &s).map_err(err)?.d;
        let (ma, ms) = (a.iter().sum::<f64>() / a.len() as f64, s.iter().sum::<f64>() / s.len() as f64);
        let ok = ma <= ms - 0.5 && w.log10_p < -5.0 && d.abs() > 1.0;
        Ok((
            ok,
            format!("adaptive {ma:.4} static {ms:.4} log10 p {:.2} d {d:.2}", w.log10_p),
        ))
    })
}

/// 8: insensitivity to the switch threshold and the growth rate.
pub fn criterion_8() -> Check {
    timed("8", "hyperparameter flatness", 900, || {
        let mut worst = 0.0f64;
        let mut notes = Vec::new();
        for id in [ExperimentId::AT13, ExperimentId::AT14] {
            let r = run(&desk(id, 4, 4, 5))?;
            let spread = r.scalar("relative_spread/N=4,L=4").ok_or("missing spread")?;
            worst = worst.max(spread);
            notes.push(format!("{id} spread {:.3}%", 100.0 * spread));
        }
        Ok((worst < 0.02, notes.join("; ")))
    })
}

/// 9: density-matrix path and noise tolerance.
pub fn criterion_9() -> Check {
    timed("9", "noise consistency", 600, || {
        let mut c = desk(ExperimentId::AT11, 4, 4, 3);
        c.sweep.noise_p = vec![0.0, 1e-3, 1e-2];
        let r = run(&c)?;
        let disc = r
            .values("N=4,L=4,p=0", "density_path_discrepancy")
            .into_iter()
            .fold(0.0f64, f64::max);
        let clean = mean_of(&r, "N=4,L=4,p=0", "final_energy")?;
        let p3 = mean_of(&r, "N=4,L=4,p=0.001", "final_energy")?;
        let p2 = mean_of(&r, "N=4,L=4,p=0.01", "final_energy")?;
        let rel3 = (p3 - clean).abs() / clean.abs();
        let ok = disc <= 1e-10 && rel3 <= 0.05 && p2 > clean && p2 < 0.0;
        Ok((
            ok,
            format!(
                "|rho - psi| {disc:.1e}; E(0) {clean:.4} E(1e-3) {p3:.4} ({:.2}%) E(1e-2) {p2:.4}",
                100.0 * rel3
            ),
        ))
    })
}

/// 10: `MSE ∝ 1/M` for sampled gradients.
pub fn criterion_10() -> Check {
    timed("10", "shot scaling", 300, || {
        let r = run(&desk(ExperimentId::AT12, 4, 2, 20))?;
        let slope = r.scalar("log_mse_slope/N=4,L=2").ok_or("missing slope")?;
        Ok(((-1.2..=-0.8).contains(&slope), format!("log-log slope {slope:.3}")))
    })
}

/// Welch fixtures: `(a, b, t, dof, log10 p, d)` from an independent reference implementation.
pub const WELCH_FIXTURES: [(&[f64], &[f64], f64, f64, f64, f64); 10] = [
    (&[1.0, 2.0, 3.0, 4.0, 5.0], &[2.0, 3.0, 4.0, 5.0, 6.0], -1.0, 8.0, -0.46017957740558363, -0.6324555320336759),
    (&[0.0, 1.0, 2.0], &[0.0, 1.0, 2.0], 0.0, 4.0, 0.0, 0.0),
    (&[1.0, 2.0, 3.0], &[3.0, 4.0, 5.0], -2.449489742783178, 4.0, -1.1519094765194544, -2.0),
    (
        &[0.831, -1.468, 1.841, -2.974, 0.383, -0.239, -0.09, 1.639, 3.476, 2.648],
        &[0.882, 1.318, 0.878, 0.371, 0.364, 0.965, 0.823, 0.379, 0.546, 0.663],
        -0.18500438791390725,
        9.472506076898469,
        -0.06695513559725232,
        -0.08273647750224743,
    ),
    (
        &[-0.902, -0.956, -0.841, -0.816, -0.946],
        &[0.699, -3.314, -0.72, 1.307, -1.707, -0.988, -1.553, 0.167, 1.422],
        -0.7107104983752275,
        8.045432404240064,
        -0.3033412177682461,
        -0.2904438981292129,
    ),
    (
        &[-1.544, 0.295, -0.913, -2.494, -1.486, -2.808, -2.14, -1.051],
        &[-1.424, -1.27, -1.655, -1.823, -1.202],
        -0.11594466596047388,
        8.458178396445945,
        -0.0407666918941826,
        -0.053121587506391746,
    ),
    (
        &[0.855, 0.531, -0.219, -0.617, -5.012, -2.739, 0.028, -0.517, -2.665, 1.887],
        &[1.343, 1.617, 0.591, 0.75, 1.528, 2.744, -3.258, -0.914, 1.041, 1.664],
        -1.857447774495943,
        17.336619301443527,
        -1.0951877540876533,
        -0.8306758976857257,
    ),
    (
        &[2.191, 0.241, 2.606, 2.071, -1.445, -1.059],
        &[-0.605, 2.737, 3.249, -1.823, -1.377, 3.462],
        -0.1398243457093429,
        9.071015291526354,
        -0.04970613207098714,
        -0.08072762363455242,
    ),
    (
        &[-2.756, -2.52, -3.088, -3.191, -7.518, -0.98, -4.034, -5.287, 1.274, 1.962, -2.168],
        &[-1.251, -0.845, -1.358, -1.336],
        -1.67418415102956,
        10.422231878005132,
        -0.9072812882253578,
        -0.5810662353506003,
    ),
    (
        &[3.859, 0.522, -0.003],
        &[1.163, 4.207, 2.671, 2.711, 3.054, 1.142, 0.42],
        -0.5620802443904832,
        2.7230027025488632,
        -0.20973249651471818,
        -0.47295125950590483,
    ),
];

/// 11: Welch and Cohen's d against reference values, plus the p floor.
pub fn criterion_11() -> Check {
    timed("11", "statistics oracle", 1, || {
        let mut worst = 0.0f64;
        for (a, b, t, dof, lp, d) in WELCH_FIXTURES {
            let r = welch_test(a, b).map_err(err)?;
            let cd = cohens_d(a, b).map_err(err)?.d;
            for (got, want) in [(r.t_stat, t), (r.dof, dof), (r.log10_p, lp), (r.cohens_d, d), (cd, d)] {
                worst = worst.max((got - want).abs());
            }
        }
        let a: Vec<f64> = (0..20).map(|i| 1e-6 * i as f64).collect();
        let b: Vec<f64> = a.iter().map(|x| x + 50.0).collect();
        let floor = welch_test(&a, &b).map_err(err)?;
        Ok((
            worst <= 1e-9 && floor.p_floor_applied,
            format!("max fixture error {worst:.1e}; floor engaged: {}", floor.p_floor_applied),
        ))
    })
}

/// 12: two CLI invocations give the same document apart from `meta`.
pub fn criterion_12(exe: &Path) -> Check {
    timed("12", "determinism", 600, || {
        let dir = std::env::temp_dir().join(format!("aheft-determinism-{}", std::process::id()));
        std::fs::create_dir_all(&dir).map_err(err)?;
        let mut docs = Vec::new();
        for k in 0..2 {
            let out = dir.join(format!("at8_{k}.json"));
            let status = std::process::Command::new(exe)
                .args(["run", "--experiment", "at8", "--scale", "desk", "--master-seed", "7", "--out"])
                .arg(&out)
                .stdout(std::process::Stdio::null())
                .status()
                .map_err(err)?;
            if !status.success() {
                return Err(format!("run {k} exited with {status}"));
            }
            let text = std::fs::read_to_string(&out).map_err(err)?;
            docs.push(strip_meta(&text)?);
        }
        let _ = std::fs::remove_dir_all(&dir);
        let same = docs[0] == docs[1];
        Ok((same, format!("documents identical modulo meta: {same} ({} bytes)", docs[0].len())))
    })
}

/// Re-serializes a result document without its `meta` key.
pub fn strip_meta(text: &str) -> Result<String, String> {
    let mut v: serde_json::Value = serde_json::from_str(text).map_err(err)?;
    v.as_object_mut().ok_or("not a JSON object")?.remove("meta");
    serde_json::to_string(&v).map_err(err)
}

/// Runs all twelve criteria, printing one line each as they finish.
pub fn run_acceptance(exe: &Path, print: bool) -> Vec<Check> {
    let criteria: Vec<Box<dyn Fn() -> Check>> = vec![
        Box::new(criterion_1),
        Box::new(criterion_2),
        Box::new(criterion_3),
        Box::new(criterion_4),
        Box::new(criterion_5),
        Box::new(criterion_6),
        Box::new(criterion_7),
        Box::new(criterion_8),
        Box::new(criterion_9),
        Box::new(criterion_10),
        Box::new(criterion_11),
        Box::new(move || criterion_12(exe)),
    ];
    criteria
        .into_iter()
        .map(|f| {
            let c = f();
            if print {
                println!("{}", c.line());
            }
            c
        })
        .collect()
}

/// Harness-level invariants on small configurations.
pub fn run_invariants(print: bool) -> Vec<Check> {
    let mut checks = Vec::new();
    let mut push = |c: Check| {
        if print {
            println!("{}", c.line());
        }
        checks.push(c);
    };

    let small = {
        let mut c = desk(ExperimentId::AT15, 3, 2, 4);
        c.schedule.total_steps = 30;
        c.schedule.phase1_cap = 15;
        c.schedule.burn_in = 5;
        c
    };

    push(timed("I1", "reproducibility", 60, || {
        let a = run(&small)?;
        let b = run(&small)?;
        Ok((a.without_meta() == b.without_meta(), "identical documents modulo meta".into()))
    }));

    push(timed("I2", "aggregates recompute", 60, || {
        let r = run(&small)?;
        let again = summarize_records(&r.per_seed);
        let mut worst = 0.0f64;
        for (x, y) in r.aggregates.summaries.iter().zip(&again) {
            if x.key != y.key || x.metric != y.metric {
                return Ok((false, "summary keys differ".into()));
            }
            worst = worst.max((x.summary.mean - y.summary.mean).abs()).max((x.summary.std - y.summary.std).abs());
        }
        let ok = worst <= 1e-12 && again.len() == r.aggregates.summaries.len();
        Ok((ok, format!("max deviation {worst:.1e}")))
    }));

    push(timed("I3", "seed permutation", 60, || {
        let r = run(&small)?;
        let mut shuffled = r.per_seed.clone();
        shuffled.reverse();
        shuffled.rotate_left(3);
        let a = summarize_records(&r.per_seed);
        let b = summarize_records(&shuffled);
        let worst = a
            .iter()
            .zip(&b)
            .map(|(x, y)| (x.summary.mean - y.summary.mean).abs())
            .fold(0.0f64, f64::max);
        Ok((worst <= 1e-12 && a.len() == b.len(), format!("max deviation {worst:.1e}")))
    }));

    push(timed("I4", "schema keys", 60, || {
        let r = run(&small)?;
        let v = serde_json::to_value(&r).map_err(err)?;
        let keys = ["schema_version", "experiment_id", "config", "theory_constants", "per_seed", "aggregates", "series", "meta"];
        let missing: Vec<&str> = keys.iter().copied().filter(|k| v.get(k).is_none()).collect();
        let seeds_ok = v["per_seed"]
            .as_array()
            .is_some_and(|a| a.iter().all(|r| r.get("seed").is_some() && r.get("finals").is_some()));
        let series_ok = v["series"].as_array().is_some_and(|a| {
            a.iter().all(|s| ["name", "x", "y", "yerr"].iter().all(|k| s.get(k).is_some()))
        });
        Ok((missing.is_empty() && seeds_ok && series_ok, format!("missing {missing:?}")))
    }));

    push(timed("I5", "schedule clamp", 120, || {
        let mut c = desk(ExperimentId::AT3, 4, 4, 2);
        c.schedule.lambda = 0.1;
        let r = run(&c)?;
        let crit = sigma_crit(4, 4, c.schedule.c2);
        let mut ok = true;
        for rec in &r.per_seed {
            let tr = rec.trajectory.as_ref().ok_or("missing trajectory")?;
            ok &= tr.steps.iter().all(|s| s.sigma <= crit + 1e-15);
            ok &= tr.steps.windows(2).all(|w| w[1].sigma >= w[0].sigma);
            ok &= tr.t_switch.is_some_and(|t| t >= c.schedule.burn_in);
            ok &= tr.len() == c.schedule.total_steps + 1;
        }
        Ok((ok, format!("sigma <= {crit:.4}, monotone, T+1 entries")))
    }));

    push(timed("I6", "lambda zero equivalence", 60, || {
        let mut c = desk(ExperimentId::AT3, 3, 2, 1);
        c.schedule.lambda = 0.0;
        c.schedule.total_steps = 40;
        c.schedule.phase1_cap = 20;
        let h = Model::Tfim.build(3).map_err(err)?;
        let spec = AnsatzSpec::heft(3, 2).map_err(err)?;
        let seed = seed_stream(&c, 0);
        let opts = Default::default();
        let a = aheft_core::training::run_with(Method::Adaptive, &spec, &h, &c.schedule, &seed, &opts).map_err(err)?;
        let s = aheft_core::training::run_with(Method::Static, &spec, &h, &c.schedule, &seed, &opts).map_err(err)?;
        Ok((a.steps == s.steps, "adaptive with lambda = 0 reproduces static".into()))
    }));

    push(timed("I7", "density path at p = 0", 10, || {
        let spec = AnsatzSpec::heft(4, 2).map_err(err)?;
        let h = build_tfim(4).map_err(err)?;
        let mut rng = SeedStream::new(4).rng();
        let mut worst = 0.0f64;
        for _ in 0..10 {
            let theta: ParamVector = sample_params(&spec, Sampler::Uniform, &mut rng).map_err(err)?;
            let a = energy(&spec, &theta, &h, 0.0).map_err(err)?;
            let b = energy_density(&spec, &theta, &h, 0.0).map_err(err)?;
            worst = worst.max((a - b).abs());
        }
        Ok((worst <= 1e-10, format!("max discrepancy {worst:.1e}")))
    }));

    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn meta_is_ignored_when_comparing() {
        let a = strip_meta(r#"{"a": 1, "meta": {"duration_s": 1.0}}"#).unwrap();
        let b = strip_meta(r#"{"a": 1, "meta": {"duration_s": 2.5}}"#).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, strip_meta(r#"{"a": 2, "meta": {}}"#).unwrap());
        assert!(strip_meta("[1]").is_err());
    }

    #[test]
    fn check_line_format() {
        let c = Check {
            id: "3".into(),
            name: "reference-state gap".into(),
            passed: false,
            detail: "x".into(),
            elapsed: Duration::from_secs(2),
            budget: Duration::from_secs(1),
        };
        let line = c.line();
        assert!(line.starts_with("FAIL   3 reference-state gap"));
        assert!(line.ends_with("x [over time budget]"));
    }
}
