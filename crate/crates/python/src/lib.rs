//! Python module `aheft`: Hamiltonians, circuits, gradients, training runs,
//! statistics and experiments.

use pyo3::prelude::*;

#[pymodule]
mod aheft {
    use std::collections::HashMap;

    use aheft_core::ansatz::{prepare_state, AnsatzKind, ParamVector};
    use aheft_core::hamiltonian::{ground_state, reference_gap, Model};
    use aheft_core::training::{self, Method, RunOptions, ScheduleConfig};
    use aheft_core::gradient as grad;
    use aheft_core::{stats, Error, SeedStream};
    use aheft_harness::{ExperimentConfig, ExperimentId, Scale};
    use num_complex::Complex64;
    use pyo3::exceptions::{PyRuntimeError, PyValueError};
    use pyo3::prelude::*;

    fn py_err(e: Error) -> PyErr {
        match e {
            Error::Numeric(_) | Error::Resource(_) => PyRuntimeError::new_err(e.to_string()),
            _ => PyValueError::new_err(e.to_string()),
        }
    }

    fn parse<T: std::str::FromStr>(s: &str) -> PyResult<T>
    where
        T::Err: std::fmt::Display,
    {
        s.parse().map_err(|e: T::Err| PyValueError::new_err(e.to_string()))
    }

    /// A Hamiltonian as a sum of Pauli strings.
    #[pyclass(frozen)]
    pub struct PauliSum {
        inner: aheft_core::PauliSum,
    }

    #[pymethods]
    impl PauliSum {
        /// Builds `"tfim"` or `"xxz"` on `n` qubits.
        #[staticmethod]
        fn model(name: &str, n: usize) -> PyResult<Self> {
            let m: Model = parse(name)?;
            Ok(Self { inner: m.build(n).map_err(py_err)? })
        }

        /// From `(coefficient, letters)` pairs, e.g. `[(1.0, "ZZ"), (-0.5, "XI")]`.
        #[new]
        fn new(n_qubits: usize, terms: Vec<(f64, String)>) -> PyResult<Self> {
            let terms = terms
                .iter()
                .map(|(c, s)| aheft_core::PauliString::parse(*c, s))
                .collect::<Result<Vec<_>, _>>()
                .map_err(py_err)?;
            Ok(Self { inner: aheft_core::PauliSum::new(n_qubits, terms).map_err(py_err)? })
        }

        #[getter]
        fn n_qubits(&self) -> usize {
            self.inner.n_qubits()
        }

        fn op_norm_bound(&self) -> f64 {
            self.inner.op_norm_bound()
        }

        fn ground_energy(&self) -> PyResult<f64> {
            Ok(ground_state(&self.inner).map_err(py_err)?.energy)
        }

        fn reference_gap(&self) -> PyResult<f64> {
            reference_gap(&self.inner).map_err(py_err)
        }

        fn __repr__(&self) -> String {
            format!("PauliSum({})", self.inner)
        }
    }

    /// Circuit family (`"heft_spin"` or `"hea"`), width and depth.
    #[pyclass(frozen)]
    pub struct AnsatzSpec {
        inner: aheft_core::AnsatzSpec,
    }

    #[pymethods]
    impl AnsatzSpec {
        #[new]
        fn new(kind: &str, n_qubits: usize, layers: usize) -> PyResult<Self> {
            let kind: AnsatzKind = parse(kind)?;
            Ok(Self { inner: aheft_core::AnsatzSpec::new(kind, n_qubits, layers).map_err(py_err)? })
        }

        #[getter]
        fn param_count(&self) -> usize {
            self.inner.param_count()
        }

        #[getter]
        fn n_qubits(&self) -> usize {
            self.inner.n_qubits()
        }

        #[getter]
        fn layers(&self) -> usize {
            self.inner.layers()
        }

        fn two_qubit_gate_count(&self) -> usize {
            self.inner.two_qubit_gate_count()
        }

        fn __repr__(&self) -> String {
            format!("AnsatzSpec('{}', {}, {})", self.inner.kind(), self.inner.n_qubits(), self.inner.layers())
        }
    }

    #[pyfunction]
    fn statevector(spec: &AnsatzSpec, theta: Vec<f64>) -> PyResult<Vec<Complex64>> {
        let s = prepare_state(&spec.inner, &ParamVector::new(theta)).map_err(py_err)?;
        Ok(s.amplitudes().to_vec())
    }

    #[pyfunction]
    #[pyo3(signature = (spec, theta, h, noise_p = 0.0))]
    fn energy(spec: &AnsatzSpec, theta: Vec<f64>, h: &PauliSum, noise_p: f64) -> PyResult<f64> {
        grad::energy(&spec.inner, &ParamVector::new(theta), &h.inner, noise_p).map_err(py_err)
    }

    /// Parameter-shift gradient; `shots` switches to the sampled estimator.
    #[pyfunction]
    #[pyo3(signature = (spec, theta, h, noise_p = 0.0, shots = None, seed = 0))]
    fn gradient(
        spec: &AnsatzSpec,
        theta: Vec<f64>,
        h: &PauliSum,
        noise_p: f64,
        shots: Option<u64>,
        seed: u64,
    ) -> PyResult<Vec<f64>> {
        let theta = ParamVector::new(theta);
        let g = match shots {
            Some(m) => grad::gradient_sampled(&spec.inner, &theta, &h.inner, m, &mut SeedStream::new(seed).rng()),
            None => grad::gradient_exact_noisy(&spec.inner, &theta, &h.inner, noise_p),
        }
        .map_err(py_err)?;
        Ok(g.values().to_vec())
    }

    #[pyfunction]
    fn sigma_zero(n: usize, l: usize, kappa: f64) -> f64 {
        training::sigma_zero(n, l, kappa)
    }

    #[pyfunction]
    fn sigma_crit(n: usize, l: usize, c2: f64) -> f64 {
        training::sigma_crit(n, l, c2)
    }

    #[pyfunction]
    fn theory_constants(n: usize, l: usize, c1: f64, c2: f64, b: f64) -> HashMap<&'static str, f64> {
        let k = training::theory_constants(n, l, c1, c2, b);
        HashMap::from([
            ("m_tot", k.m_tot),
            ("delta_eff", k.delta_eff),
            ("w_max", k.w_max as f64),
            ("kappa_lb", k.kappa_lb),
            ("variance_floor", k.variance_floor),
            ("union_bound", k.union_bound),
            ("deff_ceiling", k.deff_ceiling),
        ])
    }

    /// Result of one training run.
    #[pyclass(frozen, get_all)]
    pub struct Trajectory {
        method: String,
        energy: Vec<f64>,
        grad_norm2: Vec<f64>,
        sigma: Vec<f64>,
        d_eff: Vec<Option<usize>>,
        final_theta: Vec<f64>,
        t_switch: Option<usize>,
        forced_switch: bool,
        failed: Option<String>,
    }

    #[pymethods]
    impl Trajectory {
        fn __len__(&self) -> usize {
            self.energy.len()
        }

        fn __repr__(&self) -> String {
            let opt = |v: Option<String>| v.unwrap_or_else(|| "None".into());
            format!(
                "Trajectory(method='{}', steps={}, final_energy={}, t_switch={})",
                self.method,
                self.energy.len(),
                opt(self.energy.last().map(f64::to_string)),
                opt(self.t_switch.map(|t| t.to_string()))
            )
        }
    }

    /// Trains `method` (`"adaptive"`, `"static"` or `"hea"`).
    #[pyfunction]
    #[pyo3(signature = (
        method, h, layers, seed = 0, steps = 200, lambda_ = 0.02, delta_switch = 1e-3,
        kappa = 0.1, c2 = 0.5, eta = 0.01, noise_p = 0.0, deff_every = None
    ))]
    #[allow(clippy::too_many_arguments)]
    fn train(
        py: Python<'_>,
        method: &str,
        h: &PauliSum,
        layers: usize,
        seed: u64,
        steps: usize,
        lambda_: f64,
        delta_switch: f64,
        kappa: f64,
        c2: f64,
        eta: f64,
        noise_p: f64,
        deff_every: Option<usize>,
    ) -> PyResult<Trajectory> {
        let method = match method {
            "adaptive" => Method::Adaptive,
            "static" => Method::Static,
            "hea" => Method::Hea,
            other => return Err(PyValueError::new_err(format!("unknown method {other:?}"))),
        };
        let kind = if method == Method::Hea { AnsatzKind::Hea } else { AnsatzKind::HeftSpin };
        let spec = aheft_core::AnsatzSpec::new(kind, h.inner.n_qubits(), layers).map_err(py_err)?;
        let defaults = ScheduleConfig::default();
        let cfg = ScheduleConfig {
            kappa,
            lambda: lambda_,
            c2,
            delta_switch,
            eta,
            total_steps: steps,
            phase1_cap: defaults.phase1_cap.min(steps),
            burn_in: defaults.burn_in.min(defaults.phase1_cap.min(steps)),
            ..defaults
        };
        let opts = RunOptions { noise_p, deff_every };
        let rec = py
            .detach(|| training::run_with(method, &spec, &h.inner, &cfg, &SeedStream::new(seed), &opts))
            .map_err(py_err)?;
        Ok(Trajectory {
            method: method.as_str().into(),
            energy: rec.steps.iter().map(|s| s.energy).collect(),
            grad_norm2: rec.steps.iter().map(|s| s.grad_norm2).collect(),
            sigma: rec.steps.iter().map(|s| s.sigma).collect(),
            d_eff: rec.steps.iter().map(|s| s.d_eff).collect(),
            final_theta: rec.final_theta.into_inner(),
            t_switch: rec.t_switch,
            forced_switch: rec.forced_switch,
            failed: rec.failed,
        })
    }

    /// Welch's t-test; returns `t_stat`, `dof`, `log10_p`, `p_floor_applied`, `cohens_d`.
    #[pyfunction]
    fn welch_test(a: Vec<f64>, b: Vec<f64>) -> PyResult<HashMap<&'static str, f64>> {
        let r = stats::welch_test(&a, &b).map_err(py_err)?;
        Ok(HashMap::from([
            ("t_stat", r.t_stat),
            ("dof", r.dof),
            ("log10_p", r.log10_p),
            ("p_floor_applied", if r.p_floor_applied { 1.0 } else { 0.0 }),
            ("cohens_d", r.cohens_d),
        ]))
    }

    #[pyfunction]
    fn cohens_d(a: Vec<f64>, b: Vec<f64>) -> PyResult<f64> {
        Ok(stats::cohens_d(&a, &b).map_err(py_err)?.d)
    }

    /// Runs a registered experiment and returns its JSON document.
    #[pyfunction]
    #[pyo3(signature = (experiment, scale = "desk", master_seed = 0, seeds = None))]
    fn run_experiment(
        py: Python<'_>,
        experiment: &str,
        scale: &str,
        master_seed: u64,
        seeds: Option<usize>,
    ) -> PyResult<String> {
        let id: ExperimentId = parse(experiment)?;
        let scale: Scale = parse(scale)?;
        let mut cfg = ExperimentConfig::defaults(id, scale);
        cfg.master_seed = master_seed;
        if let Some(s) = seeds {
            cfg.n_seeds = s;
        }
        let result = py
            .detach(|| aheft_harness::run_experiment(&cfg))
            .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
        serde_json::to_string(&result).map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }
}
