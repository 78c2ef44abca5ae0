//! Registry of the sixteen experiments.

use std::collections::{BTreeMap, HashMap};
use std::time::Instant;

use aheft_core::ansatz::{prepare_state, AnsatzKind, AnsatzSpec};
use aheft_core::gradient::{gradient_exact, gradient_sampled, GradientVector};
use aheft_core::hamiltonian::{ground_state, reference_gap, GroundSolution, Model, PauliSum};
use aheft_core::metrics::{
    amplitude_bound_report, expressibility_purity, fidelity_to_ground, gv_report, half_chain_entropy, sample_params,
    Sampler,
};
use aheft_core::stats::{summarize, welch_test};
use aheft_core::training::{
    run_with, sigma_crit, sigma_zero, theory_constants, Method, RunOptions, ScheduleConfig, TrajectoryRecord,
};
use aheft_core::SeedStream;
use rayon::prelude::*;

use crate::config::{ExperimentConfig, ExperimentId};
use crate::error::HarnessError;
use crate::result::{
    summarize_records, Aggregates, ExperimentResult, Meta, SeedRecord, Series, TestEntry, TheoryEntry, SCHEMA_VERSION,
};

type HResult<T> = Result<T, HarnessError>;

const METHODS: [Method; 3] = [Method::Adaptive, Method::Static, Method::Hea];

/// Everything an experiment produces before assembly.
#[derive(Default)]
struct Outcome {
    per_seed: Vec<SeedRecord>,
    series: Vec<Series>,
    tests: Vec<TestEntry>,
    scalars: BTreeMap<String, f64>,
    notes: BTreeMap<String, String>,
}

/// Runs `config` on the global rayon pool.
pub fn run_experiment(config: &ExperimentConfig) -> HResult<ExperimentResult> {
    run_experiment_with_workers(config, None)
}

/// Runs `config` on a pool of at most `workers` threads.
pub fn run_experiment_with_workers(config: &ExperimentConfig, workers: Option<usize>) -> HResult<ExperimentResult> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| HarnessError::Resource(format!("cannot build worker pool: {e}")))?;
    let start = chrono::Utc::now();
    let clock = Instant::now();
    let mut out = pool.install(|| dispatch(config))?;
    out.per_seed.sort_by(|a, b| a.seed.cmp(&b.seed).then_with(|| a.key.cmp(&b.key)));
    let aggregates = Aggregates { summaries: summarize_records(&out.per_seed), tests: out.tests, scalars: out.scalars };
    Ok(ExperimentResult {
        schema_version: SCHEMA_VERSION.into(),
        experiment_id: config.experiment_id.to_string(),
        config: config.clone(),
        theory_constants: theory_block(config)?,
        per_seed: out.per_seed,
        aggregates,
        series: out.series,
        meta: Meta {
            start_time: start.to_rfc3339(),
            duration_s: clock.elapsed().as_secs_f64(),
            version: format!("aheft {}", env!("CARGO_PKG_VERSION")),
            workers: pool.current_num_threads(),
            notes: out.notes,
        },
    })
}

fn dispatch(c: &ExperimentConfig) -> HResult<Outcome> {
    use ExperimentId::*;
    match c.experiment_id {
        AT1 => at1(c),
        AT2 => at2(c),
        AT3 => timeline(c, &[Method::Adaptive], None),
        AT4 => timeline(c, &METHODS, None),
        AT5 => final_energies(c, &METHODS, true),
        AT6 => at6(c),
        AT7 => at7(c),
        AT8 => timeline(c, &[Method::Adaptive], Some(5)),
        AT9 => at9(c),
        AT10 => at10(c),
        AT11 => at11(c),
        AT12 => at12(c),
        AT13 | AT14 => hyper_sweep(c),
        AT15 => final_energies(c, &METHODS, false),
        AT16 => at16(c),
    }
}

fn theory_block(c: &ExperimentConfig) -> HResult<Vec<TheoryEntry>> {
    let mut out = Vec::new();
    for &n in &c.n_list {
        let b = c.hamiltonian.build(n)?.op_norm_bound();
        for &l in &c.l_list {
            let s = &c.schedule;
            out.push(TheoryEntry {
                n,
                l,
                sigma_zero: sigma_zero(n, l, s.kappa),
                sigma_crit: sigma_crit(n, l, s.c2),
                b,
                constants: theory_constants(n, l, s.c1, s.c2, b),
            });
        }
    }
    Ok(out)
}

/// Root stream of seed `index`; independent of execution order.
pub fn seed_stream(c: &ExperimentConfig, index: usize) -> SeedStream {
    SeedStream::new(c.master_seed).child(&c.experiment_id.to_string(), 0).child("seed", index as u64)
}

fn nl(n: usize, l: usize) -> String {
    format!("N={n},L={l}")
}

fn grid(c: &ExperimentConfig) -> Vec<(usize, usize)> {
    c.n_list.iter().flat_map(|&n| c.l_list.iter().map(move |&l| (n, l))).collect()
}

fn hamiltonians(c: &ExperimentConfig) -> HResult<HashMap<usize, PauliSum>> {
    c.n_list.iter().map(|&n| Ok((n, c.hamiltonian.build(n)?))).collect()
}

fn spec_for(method: Method, n: usize, l: usize) -> HResult<AnsatzSpec> {
    let kind = if method == Method::Hea { AnsatzKind::Hea } else { AnsatzKind::HeftSpin };
    Ok(AnsatzSpec::new(kind, n, l)?)
}

/// One training run; a failed trajectory fails the experiment.
fn train(
    method: Method,
    n: usize,
    l: usize,
    h: &PauliSum,
    schedule: &ScheduleConfig,
    seed: &SeedStream,
    opts: &RunOptions,
) -> HResult<TrajectoryRecord> {
    let rec = run_with(method, &spec_for(method, n, l)?, h, schedule, seed, opts)?;
    if let Some(msg) = &rec.failed {
        return Err(HarnessError::Core(aheft_core::Error::Numeric(format!(
            "{} run at N={n}, L={l} failed: {msg}",
            method.as_str()
        ))));
    }
    Ok(rec)
}

fn trajectory_finals(rec: &TrajectoryRecord) -> BTreeMap<String, f64> {
    let mut f = BTreeMap::new();
    f.insert("final_energy".into(), rec.final_energy().unwrap_or(f64::NAN));
    f.insert("final_grad_norm2".into(), rec.steps.last().map_or(f64::NAN, |s| s.grad_norm2));
    if let Some(ts) = rec.t_switch {
        f.insert("t_switch".into(), ts as f64);
        f.insert("forced_switch".into(), if rec.forced_switch { 1.0 } else { 0.0 });
    }
    f
}

/// Runs `job` for every `(seed, item)` pair in parallel.
fn par_jobs<I, F>(c: &ExperimentConfig, items: &[I], job: F) -> HResult<Vec<SeedRecord>>
where
    I: Sync,
    F: Fn(usize, &I) -> HResult<SeedRecord> + Sync,
{
    let pairs: Vec<(usize, usize)> = (0..c.n_seeds).flat_map(|s| (0..items.len()).map(move |i| (s, i))).collect();
    pairs.par_iter().map(|&(s, i)| job(s, &items[i])).collect()
}

fn summary_lookup(records: &[SeedRecord]) -> impl Fn(&str, &str) -> (f64, f64, f64) {
    let sums: HashMap<(String, String), (f64, f64, f64)> = summarize_records(records)
        .into_iter()
        .map(|e| ((e.key, e.metric), (e.summary.mean, e.summary.std_err, e.summary.std)))
        .collect();
    move |k, m| sums.get(&(k.to_string(), m.to_string())).copied().unwrap_or((f64::NAN, f64::NAN, f64::NAN))
}

fn series_over<X: Copy>(
    name: String,
    xs: &[X],
    xval: impl Fn(X) -> f64,
    point: impl Fn(X) -> (f64, f64),
) -> Series {
    let mut s = Series { name, x: vec![], y: vec![], yerr: vec![] };
    for &x in xs {
        let (y, e) = point(x);
        s.x.push(xval(x));
        s.y.push(y);
        s.yerr.push(e);
    }
    s
}

fn welch_entry(name: &str, metric: &str, a_key: &str, a: &[f64], b_key: &str, b: &[f64]) -> HResult<TestEntry> {
    let r = welch_test(a, b)?;
    let finite = |x: f64| x.is_finite().then_some(x);
    Ok(TestEntry {
        name: name.into(),
        metric: metric.into(),
        a: a_key.into(),
        b: b_key.into(),
        t_stat: finite(r.t_stat),
        dof: r.dof,
        log10_p: r.log10_p,
        p_floor_applied: r.p_floor_applied,
        cohens_d: finite(r.cohens_d),
    })
}

fn grad_finals(g: &GradientVector, suffix: &str) -> [(String, f64); 2] {
    [
        (format!("grad_norm2{suffix}"), g.norm_sqr()),
        (format!("grad_sq_per_param{suffix}"), g.norm_sqr() / g.len() as f64),
    ]
}

/// Gradient-variance scaling at σ₀ (Phase I) and at a fresh draw at σ_crit (Phase II).
fn at1(c: &ExperimentConfig) -> HResult<Outcome> {
    let hs = hamiltonians(c)?;
    let cells = grid(c);
    let grads: Vec<(SeedRecord, [GradientVector; 2])> = {
        let pairs: Vec<(usize, usize)> =
            (0..c.n_seeds).flat_map(|s| (0..cells.len()).map(move |i| (s, i))).collect();
        pairs
            .par_iter()
            .map(|&(s, i)| {
                let (n, l) = cells[i];
                let spec = AnsatzSpec::heft(n, l)?;
                let seed = seed_stream(c, s).child(&nl(n, l), 0);
                let mut finals = BTreeMap::new();
                let mut gs = Vec::new();
                for (phase, sigma) in
                    [("phase1", sigma_zero(n, l, c.schedule.kappa)), ("phase2", sigma_crit(n, l, c.schedule.c2))]
                {
                    let theta = sample_params(&spec, Sampler::Gaussian(sigma), &mut seed.child(phase, 0).rng())?;
                    let g = gradient_exact(&spec, &theta, &hs[&n])?;
                    finals.extend(grad_finals(&g, &format!("_{phase}")));
                    gs.push(g);
                }
                let gs: [GradientVector; 2] = gs.try_into().expect("two phases");
                Ok((SeedRecord { seed: s, key: nl(n, l), trajectory: None, finals }, gs))
            })
            .collect::<HResult<_>>()?
    };
    let mut out = Outcome::default();
    for &(n, l) in &cells {
        for (p, phase) in ["phase1", "phase2"].iter().enumerate() {
            let gs: Vec<GradientVector> =
                grads.iter().filter(|(r, _)| r.key == nl(n, l)).map(|(_, g)| g[p].clone()).collect();
            if gs.len() >= 2 {
                let rep = gv_report(&gs)?;
                let mean_var = rep.per_param_variance.iter().sum::<f64>() / rep.per_param_variance.len() as f64;
                out.scalars.insert(format!("mean_param_variance_{phase}/{}", nl(n, l)), mean_var);
            }
        }
    }
    out.per_seed = grads.into_iter().map(|(r, _)| r).collect();
    let look = summary_lookup(&out.per_seed);
    for phase in ["phase1", "phase2"] {
        for &l in &c.l_list {
            out.series.push(series_over(
                format!("{phase}/L={l}"),
                &c.n_list,
                |n| n as f64,
                |n| {
                    let (m, se, _) = look(&nl(n, l), &format!("grad_sq_per_param_{phase}"));
                    (m, se)
                },
            ));
        }
    }
    out.notes.insert(
        "phase2".into(),
        "phase-II gradients are evaluated on fresh Gaussian draws at sigma_crit, not on trained parameters".into(),
    );
    out.notes.insert("normalization".into(), "series report the mean squared partial derivative, |grad|^2 / P".into());
    Ok(out)
}

/// Gradient statistics across a grid of initialization scales.
fn at2(c: &ExperimentConfig) -> HResult<Outcome> {
    let hs = hamiltonians(c)?;
    let items: Vec<(usize, usize, crate::config::SigmaPoint)> = grid(c)
        .into_iter()
        .flat_map(|(n, l)| c.sweep.sigma.iter().map(move |&p| (n, l, p)))
        .collect();
    let key = |n, l, p: crate::config::SigmaPoint| format!("{},sigma={}", nl(n, l), p.label());
    let per_seed = par_jobs(c, &items, |s, &(n, l, p)| {
        let spec = AnsatzSpec::heft(n, l)?;
        let sigma = p.resolve(sigma_zero(n, l, c.schedule.kappa), sigma_crit(n, l, c.schedule.c2));
        let theta = sample_params(&spec, Sampler::Gaussian(sigma), &mut seed_stream(c, s).child(&key(n, l, p), 0).rng())?;
        let g = gradient_exact(&spec, &theta, &hs[&n])?;
        let mut finals: BTreeMap<String, f64> = grad_finals(&g, "").into_iter().collect();
        finals.insert("sigma".into(), sigma);
        Ok(SeedRecord { seed: s, key: key(n, l, p), trajectory: None, finals })
    })?;
    let look = summary_lookup(&per_seed);
    let mut out = Outcome { per_seed, ..Default::default() };
    for (n, l) in grid(c) {
        let pts: Vec<_> = c.sweep.sigma.clone();
        out.series.push(series_over(
            format!("grad_sq_per_param/{}", nl(n, l)),
            &pts,
            |p| p.resolve(sigma_zero(n, l, c.schedule.kappa), sigma_crit(n, l, c.schedule.c2)),
            |p| {
                let (m, se, _) = look(&key(n, l, p), "grad_sq_per_param");
                (m, se)
            },
        ));
    }
    Ok(out)
}

/// Per-step traces of training runs (energy, gradient norm, σ and optionally `d_eff`).
fn timeline(c: &ExperimentConfig, methods: &[Method], deff_every: Option<usize>) -> HResult<Outcome> {
    let hs = hamiltonians(c)?;
    let items: Vec<(usize, usize, Method)> =
        grid(c).into_iter().flat_map(|(n, l)| methods.iter().map(move |&m| (n, l, m))).collect();
    let key = |n, l, m: Method| format!("{},method={}", nl(n, l), m.as_str());
    let opts = RunOptions { noise_p: 0.0, deff_every };
    let per_seed = par_jobs(c, &items, |s, &(n, l, m)| {
        let rec = train(m, n, l, &hs[&n], &c.schedule, &seed_stream(c, s), &opts)?;
        let mut finals = trajectory_finals(&rec);
        if deff_every.is_some() {
            let d: Vec<f64> = rec.steps.iter().filter_map(|st| st.d_eff).map(|d| d as f64).collect();
            finals.insert("d_eff_t0".into(), d.first().copied().unwrap_or(f64::NAN));
            finals.insert("d_eff_final".into(), d.last().copied().unwrap_or(f64::NAN));
            let spec = spec_for(m, n, l)?;
            let theta0 = aheft_core::ansatz::init_params(
                &spec,
                sigma_zero(n, l, c.schedule.kappa),
                &mut seed_stream(c, s).child("init", 0).rng(),
            )?;
            let report = amplitude_bound_report(
                &prepare_state(&spec, &theta0)?,
                c.schedule.c1 * (n * l) as f64,
                sigma_zero(n, l, c.schedule.kappa),
            )?;
            finals.insert("amp_bound_max_ratio_t0".into(), report.max_ratio);
        }
        Ok(SeedRecord { seed: s, key: key(n, l, m), trajectory: Some(rec), finals })
    })?;
    let mut out = Outcome::default();
    for &(n, l, m) in &items {
        let trajs: Vec<&TrajectoryRecord> =
            per_seed.iter().filter(|r| r.key == key(n, l, m)).filter_map(|r| r.trajectory.as_ref()).collect();
        let steps = trajs.iter().map(|t| t.len()).min().unwrap_or(0);
        let metrics: [(&str, fn(&aheft_core::training::StepRecord) -> Option<f64>); 4] = [
            ("energy", |s| Some(s.energy)),
            ("grad_norm2", |s| Some(s.grad_norm2)),
            ("sigma", |s| Some(s.sigma)),
            ("d_eff", |s| s.d_eff.map(|d| d as f64)),
        ];
        for (name, get) in metrics {
            let mut series = Series { name: format!("{name}/{}", key(n, l, m)), x: vec![], y: vec![], yerr: vec![] };
            for t in 0..steps {
                let ys: Vec<f64> = trajs.iter().filter_map(|tr| get(&tr.steps[t])).collect();
                if ys.len() == trajs.len() && !ys.is_empty() {
                    let sm = summarize(&ys)?;
                    series.x.push(t as f64);
                    series.y.push(sm.mean);
                    series.yerr.push(sm.std_err);
                }
            }
            if !series.x.is_empty() {
                out.series.push(series);
            }
        }
    }
    out.per_seed = per_seed;
    Ok(out)
}

/// Final energies per method, with Welch comparisons between methods.
fn final_energies(c: &ExperimentConfig, methods: &[Method], exact: bool) -> HResult<Outcome> {
    let hs = hamiltonians(c)?;
    let items: Vec<(usize, usize, Method)> =
        grid(c).into_iter().flat_map(|(n, l)| methods.iter().map(move |&m| (n, l, m))).collect();
    let key = |n, l, m: Method| format!("{},method={}", nl(n, l), m.as_str());
    let per_seed = par_jobs(c, &items, |s, &(n, l, m)| {
        let rec = train(m, n, l, &hs[&n], &c.schedule, &seed_stream(c, s), &RunOptions::default())?;
        Ok(SeedRecord { seed: s, key: key(n, l, m), trajectory: None, finals: trajectory_finals(&rec) })
    })?;
    let look = summary_lookup(&per_seed);
    let mut out = Outcome::default();
    for &l in &c.l_list {
        for &m in methods {
            out.series.push(series_over(
                format!("final_energy/L={l},method={}", m.as_str()),
                &c.n_list,
                |n| n as f64,
                |n| {
                    let (mean, se, _) = look(&key(n, l, m), "final_energy");
                    (mean, se)
                },
            ));
        }
    }
    if exact {
        let mut s = Series { name: "exact_ground_energy".into(), x: vec![], y: vec![], yerr: vec![] };
        for &n in &c.n_list {
            s.x.push(n as f64);
            s.y.push(ground_state(&hs[&n])?.energy);
            s.yerr.push(0.0);
        }
        out.series.push(s);
    }
    if c.n_seeds >= 2 {
        let vals = |k: &str| -> Vec<f64> {
            per_seed.iter().filter(|r| r.key == k).map(|r| r.finals["final_energy"]).collect()
        };
        for (n, l) in grid(c) {
            for (i, &a) in methods.iter().enumerate() {
                for &b in &methods[i + 1..] {
                    let (ka, kb) = (key(n, l, a), key(n, l, b));
                    out.tests.push(welch_entry(
                        &format!("{}_vs_{}/{}", a.as_str(), b.as_str(), nl(n, l)),
                        "final_energy",
                        &ka,
                        &vals(&ka),
                        &kb,
                        &vals(&kb),
                    )?);
                }
            }
        }
    }
    out.per_seed = per_seed;
    Ok(out)
}

/// Ground-state fidelity of the trained state against depth.
fn at6(c: &ExperimentConfig) -> HResult<Outcome> {
    let hs = hamiltonians(c)?;
    let gss: HashMap<usize, GroundSolution> =
        hs.iter().map(|(&n, h)| Ok((n, ground_state(h)?))).collect::<HResult<_>>()?;
    let items: Vec<(usize, usize, Method)> =
        grid(c).into_iter().flat_map(|(n, l)| METHODS.iter().map(move |&m| (n, l, m))).collect();
    let key = |n, l, m: Method| format!("{},method={}", nl(n, l), m.as_str());
    let per_seed = par_jobs(c, &items, |s, &(n, l, m)| {
        let rec = train(m, n, l, &hs[&n], &c.schedule, &seed_stream(c, s), &RunOptions::default())?;
        let mut finals = trajectory_finals(&rec);
        let psi = prepare_state(&spec_for(m, n, l)?, &rec.final_theta)?;
        finals.insert("fidelity".into(), fidelity_to_ground(&psi, &gss[&n])?);
        Ok(SeedRecord { seed: s, key: key(n, l, m), trajectory: None, finals })
    })?;
    let look = summary_lookup(&per_seed);
    let mut out = Outcome::default();
    for &n in &c.n_list {
        for m in METHODS {
            out.series.push(series_over(
                format!("fidelity/N={n},method={}", m.as_str()),
                &c.l_list,
                |l| l as f64,
                |l| {
                    let (mean, _, sd) = look(&key(n, l, m), "fidelity");
                    (mean, sd)
                },
            ));
        }
    }
    out.notes.insert("yerr".into(), "fidelity error bars are one sample standard deviation".into());
    out.per_seed = per_seed;
    Ok(out)
}

/// Reference-state gap by exact diagonalization.
fn at7(c: &ExperimentConfig) -> HResult<Outcome> {
    let per_seed = c
        .n_list
        .par_iter()
        .map(|&n| {
            let h = c.hamiltonian.build(n)?;
            let gs = ground_state(&h)?;
            let finals = BTreeMap::from([
                ("delta_ref".to_string(), reference_gap(&h)?),
                ("ground_energy".to_string(), gs.energy),
                ("degeneracy".to_string(), gs.degeneracy() as f64),
            ]);
            Ok(SeedRecord { seed: 0, key: format!("N={n}"), trajectory: None, finals })
        })
        .collect::<HResult<Vec<_>>>()?;
    let mut s = Series { name: format!("delta_ref/{}", c.hamiltonian), x: vec![], y: vec![], yerr: vec![] };
    for r in &per_seed {
        s.x.push(r.key[2..].parse::<f64>().unwrap_or(f64::NAN));
        s.y.push(r.finals["delta_ref"]);
        s.yerr.push(0.0);
    }
    Ok(Outcome { per_seed, series: vec![s], ..Default::default() })
}

fn ensembles(n: usize, l: usize, c: &ExperimentConfig) -> HResult<[(&'static str, AnsatzSpec, Sampler); 3]> {
    Ok([
        ("static", AnsatzSpec::heft(n, l)?, Sampler::Gaussian(sigma_zero(n, l, c.schedule.kappa))),
        ("adaptive_phase2", AnsatzSpec::heft(n, l)?, Sampler::Gaussian(sigma_crit(n, l, c.schedule.c2))),
        ("hea", AnsatzSpec::hea(n, l)?, Sampler::Uniform),
    ])
}

/// Half-chain entropy of random circuits from each initialization ensemble.
fn at9(c: &ExperimentConfig) -> HResult<Outcome> {
    let items: Vec<(usize, usize, usize)> =
        grid(c).into_iter().flat_map(|(n, l)| (0..3).map(move |e| (n, l, e))).collect();
    let per_seed = par_jobs(c, &items, |s, &(n, l, e)| {
        let (name, spec, sampler) = ensembles(n, l, c)?[e].clone();
        let key = format!("{},ensemble={name}", nl(n, l));
        let theta = sample_params(&spec, sampler, &mut seed_stream(c, s).child(&key, 0).rng())?;
        let entropy = half_chain_entropy(&prepare_state(&spec, &theta)?, n / 2)?;
        Ok(SeedRecord { seed: s, key, trajectory: None, finals: BTreeMap::from([("entropy".into(), entropy)]) })
    })?;
    let look = summary_lookup(&per_seed);
    let mut out = Outcome::default();
    for &n in &c.n_list {
        for name in ["static", "adaptive_phase2", "hea"] {
            out.series.push(series_over(
                format!("entropy/N={n},ensemble={name}"),
                &c.l_list,
                |l| l as f64,
                |l| {
                    let (m, se, _) = look(&format!("{},ensemble={name}", nl(n, l)), "entropy");
                    (m, se)
                },
            ));
        }
    }
    out.notes.insert("entropy".into(), "von Neumann entropy in bits across the cut after qubit floor(N/2)".into());
    out.per_seed = per_seed;
    Ok(out)
}

/// Pairwise-overlap ensemble purity against depth.
fn at10(c: &ExperimentConfig) -> HResult<Outcome> {
    let k = c.sweep.samples.unwrap_or(500);
    let items: Vec<(usize, usize, usize)> =
        grid(c).into_iter().flat_map(|(n, l)| (0..3).map(move |e| (n, l, e))).collect();
    let per_seed = par_jobs(c, &items, |s, &(n, l, e)| {
        let (name, spec, sampler) = ensembles(n, l, c)?[e].clone();
        let key = format!("{},ensemble={name}", nl(n, l));
        let purity = expressibility_purity(&spec, sampler, k, &mut seed_stream(c, s).child(&key, 0).rng())?;
        Ok(SeedRecord { seed: s, key, trajectory: None, finals: BTreeMap::from([("purity".into(), purity)]) })
    })?;
    let look = summary_lookup(&per_seed);
    let mut out = Outcome::default();
    for &n in &c.n_list {
        for name in ["static", "adaptive_phase2", "hea"] {
            out.series.push(series_over(
                format!("purity/N={n},ensemble={name}"),
                &c.l_list,
                |l| l as f64,
                |l| {
                    let (m, se, _) = look(&format!("{},ensemble={name}", nl(n, l)), "purity");
                    (m, if se.is_nan() { 0.0 } else { se })
                },
            ));
        }
        let dim = (1u64 << n) as f64;
        out.scalars.insert(format!("haar_purity_pairwise/N={n}"), 1.0 / dim);
        out.scalars.insert(format!("haar_purity_quoted/N={n}"), 2.0 / (dim + 1.0));
    }
    out.notes.insert(
        "haar".into(),
        "the pairwise estimator tends to 1/2^N for Haar states; the quoted 2/(2^N+1) is recorded for reference only"
            .into(),
    );
    out.per_seed = per_seed;
    Ok(out)
}

/// Adaptive training under two-qubit depolarizing noise.
fn at11(c: &ExperimentConfig) -> HResult<Outcome> {
    let hs = hamiltonians(c)?;
    let items: Vec<(usize, usize, f64)> =
        grid(c).into_iter().flat_map(|(n, l)| c.sweep.noise_p.iter().map(move |&p| (n, l, p))).collect();
    let key = |n, l, p: f64| format!("{},p={p}", nl(n, l));
    let per_seed = par_jobs(c, &items, |s, &(n, l, p)| {
        let opts = RunOptions { noise_p: p, deff_every: None };
        let rec = train(Method::Adaptive, n, l, &hs[&n], &c.schedule, &seed_stream(c, s), &opts)?;
        let mut finals = trajectory_finals(&rec);
        let spec = AnsatzSpec::heft(n, l)?;
        let pure = aheft_core::gradient::energy(&spec, &rec.final_theta, &hs[&n], 0.0)?;
        finals.insert("final_energy_noiseless_eval".into(), pure);
        if p == 0.0 {
            let dm = aheft_core::gradient::energy_density(&spec, &rec.final_theta, &hs[&n], 0.0)?;
            finals.insert("density_path_discrepancy".into(), (dm - pure).abs());
        }
        Ok(SeedRecord { seed: s, key: key(n, l, p), trajectory: None, finals })
    })?;
    let look = summary_lookup(&per_seed);
    let mut out = Outcome::default();
    for (n, l) in grid(c) {
        let ps = c.sweep.noise_p.clone();
        out.series.push(series_over(format!("final_energy/{}", nl(n, l)), &ps, |p| p, |p| {
            let (m, se, _) = look(&key(n, l, p), "final_energy");
            (m, se)
        }));
        let (clean, _, _) = look(&key(n, l, 0.0), "final_energy");
        for &p in &ps {
            let (m, _, _) = look(&key(n, l, p), "final_energy");
            out.scalars.insert(format!("relative_change/{}", key(n, l, p)), (m - clean) / clean.abs());
        }
    }
    out.per_seed = per_seed;
    Ok(out)
}

/// Mean squared error of the sampled gradient against the exact one.
fn at12(c: &ExperimentConfig) -> HResult<Outcome> {
    let hs = hamiltonians(c)?;
    let reps = c.sweep.samples.unwrap_or(20).max(1);
    let cells = grid(c);
    let per_seed = par_jobs(c, &cells, |s, &(n, l)| {
        let spec = AnsatzSpec::heft(n, l)?;
        let seed = seed_stream(c, s).child(&nl(n, l), 0);
        let theta = sample_params(&spec, Sampler::Uniform, &mut seed.child("theta", 0).rng())?;
        let exact = gradient_exact(&spec, &theta, &hs[&n])?;
        let mut finals = BTreeMap::new();
        for &m in &c.sweep.shots {
            let mut rng = seed.child("shots", m).rng();
            let mut acc = 0.0;
            for _ in 0..reps {
                let g = gradient_sampled(&spec, &theta, &hs[&n], m, &mut rng)?;
                acc += g.values().iter().zip(exact.values()).map(|(a, b)| (a - b).powi(2)).sum::<f64>()
                    / g.len() as f64;
            }
            finals.insert(format!("mse_M={m}"), acc / reps as f64);
        }
        Ok(SeedRecord { seed: s, key: nl(n, l), trajectory: None, finals })
    })?;
    let look = summary_lookup(&per_seed);
    let mut out = Outcome::default();
    for (n, l) in cells {
        let shots = c.sweep.shots.clone();
        let s = series_over(format!("mse/{}", nl(n, l)), &shots, |m| m as f64, |m| {
            let (mean, se, _) = look(&nl(n, l), &format!("mse_M={m}"));
            (mean, se)
        });
        if s.x.len() >= 2 {
            let lx: Vec<f64> = s.x.iter().map(|x| x.log10()).collect();
            let ly: Vec<f64> = s.y.iter().map(|y| y.log10()).collect();
            out.scalars.insert(format!("log_mse_slope/{}", nl(n, l)), ls_slope(&lx, &ly));
        }
        out.series.push(s);
    }
    out.per_seed = per_seed;
    Ok(out)
}

/// Least-squares slope of `y` on `x`.
pub fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// Adaptive final energy across switch thresholds (AT13) or growth rates (AT14).
fn hyper_sweep(c: &ExperimentConfig) -> HResult<Outcome> {
    let hs = hamiltonians(c)?;
    let (param, values) = if c.experiment_id == ExperimentId::AT13 {
        ("delta_switch", c.sweep.delta_switch.clone())
    } else {
        ("lambda", c.sweep.lambda.clone())
    };
    let values = if values.is_empty() {
        vec![if param == "lambda" { c.schedule.lambda } else { c.schedule.delta_switch }]
    } else {
        values
    };
    let items: Vec<(usize, usize, f64)> =
        grid(c).into_iter().flat_map(|(n, l)| values.iter().map(move |&v| (n, l, v))).collect();
    let key = |n, l, v: f64| format!("{},{param}={v}", nl(n, l));
    let per_seed = par_jobs(c, &items, |s, &(n, l, v)| {
        let mut sched = c.schedule;
        if param == "lambda" {
            sched.lambda = v;
        } else {
            sched.delta_switch = v;
        }
        let rec = train(Method::Adaptive, n, l, &hs[&n], &sched, &seed_stream(c, s), &RunOptions::default())?;
        Ok(SeedRecord { seed: s, key: key(n, l, v), trajectory: None, finals: trajectory_finals(&rec) })
    })?;
    let look = summary_lookup(&per_seed);
    let mut out = Outcome::default();
    for (n, l) in grid(c) {
        let s = series_over(format!("final_energy/{}", nl(n, l)), &values, |v| v, |v| {
            let (m, se, _) = look(&key(n, l, v), "final_energy");
            (m, se)
        });
        let max = s.y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = s.y.iter().copied().fold(f64::INFINITY, f64::min);
        let mean = s.y.iter().sum::<f64>() / s.y.len() as f64;
        out.scalars.insert(format!("relative_spread/{}", nl(n, l)), (max - min) / mean.abs());
        out.series.push(s);
    }
    out.per_seed = per_seed;
    Ok(out)
}

/// Heisenberg suite: adaptive vs static final energies and gradient scales.
fn at16(c: &ExperimentConfig) -> HResult<Outcome> {
    let mut c2 = c.clone();
    if c2.hamiltonian != Model::Xxz {
        c2.hamiltonian = Model::Xxz;
    }
    let mut out = final_energies(&c2, &[Method::Adaptive, Method::Static], false)?;
    let gv = at1(&c2)?;
    let mut by_key: HashMap<(usize, String), BTreeMap<String, f64>> =
        gv.per_seed.into_iter().map(|r| ((r.seed, r.key), r.finals)).collect();
    for r in &mut out.per_seed {
        let base = r.key.split(",method=").next().unwrap_or("").to_string();
        if r.key.ends_with("method=adaptive") {
            if let Some(f) = by_key.remove(&(r.seed, base)) {
                r.finals.extend(f);
            }
        }
    }
    out.series.extend(gv.series);
    out.notes.extend(gv.notes);
    Ok(out)
}

/// Writes `result` as pretty JSON, creating parent directories.
pub fn write_result(result: &ExperimentResult, path: &std::path::Path) -> HResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let mut text = serde_json::to_string_pretty(result)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}
