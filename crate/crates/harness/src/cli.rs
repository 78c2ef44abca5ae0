use std::path::PathBuf;

use aheft_core::hamiltonian::Model;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{ExperimentConfig, ExperimentId, Scale};
use crate::error::HarnessError;
use crate::experiments::{run_experiment_with_workers, write_result};
use crate::verify::{run_acceptance, run_invariants};

#[derive(Debug, Parser)]
#[command(name = "aheft", version, about = "Adaptive EFT-scale variational training experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one experiment and write its JSON result.
    Run(RunArgs),
    /// Run a check suite; exits 0 iff every check passes.
    Verify {
        #[arg(long, value_enum, default_value = "acceptance")]
        suite: Suite,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Suite {
    Acceptance,
    Invariants,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, value_parser = parse_experiment)]
    pub experiment: ExperimentId,
    #[arg(long, value_parser = parse_scale, default_value = "desk")]
    pub scale: Scale,
    #[arg(long, value_parser = parse_model)]
    pub hamiltonian: Option<Model>,
    /// Comma-separated qubit counts.
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    /// Comma-separated layer counts.
    #[arg(long, value_delimiter = ',')]
    pub layers: Option<Vec<usize>>,
    #[arg(long)]
    pub seeds: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub master_seed: u64,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub delta_switch: Option<f64>,
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub c2: Option<f64>,
    /// Depolarizing probabilities (comma-separated).
    #[arg(long, value_delimiter = ',')]
    pub noise_p: Option<Vec<f64>>,
    /// Shot counts (comma-separated).
    #[arg(long, value_delimiter = ',')]
    pub shots: Option<Vec<u64>>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub workers: Option<usize>,
}

fn parse_experiment(s: &str) -> Result<ExperimentId, String> {
    s.parse()
}

fn parse_scale(s: &str) -> Result<Scale, String> {
    s.parse()
}

fn parse_model(s: &str) -> Result<Model, String> {
    s.parse().map_err(|e: aheft_core::Error| e.to_string())
}

impl RunArgs {
    pub fn to_config(&self) -> ExperimentConfig {
        let mut c = ExperimentConfig::defaults(self.experiment, self.scale);
        c.master_seed = self.master_seed;
        if let Some(h) = self.hamiltonian {
            c.hamiltonian = h;
        }
        if let Some(n) = &self.n {
            c.n_list = n.clone();
        }
        if let Some(l) = &self.layers {
            c.l_list = l.clone();
        }
        if let Some(s) = self.seeds {
            c.n_seeds = s;
        }
        let s = &mut c.schedule;
        if let Some(t) = self.steps {
            s.total_steps = t;
            s.phase1_cap = s.phase1_cap.min(t);
            s.burn_in = s.burn_in.min(s.phase1_cap);
        }
        if let Some(v) = self.lambda {
            s.lambda = v;
            if self.experiment == ExperimentId::AT14 {
                c.sweep.lambda = vec![v];
            }
        }
        if let Some(v) = self.delta_switch {
            s.delta_switch = v;
            if self.experiment == ExperimentId::AT13 {
                c.sweep.delta_switch = vec![v];
            }
        }
        if let Some(v) = self.kappa {
            s.kappa = v;
        }
        if let Some(v) = self.c2 {
            s.c2 = v;
        }
        if let Some(p) = &self.noise_p {
            c.sweep.noise_p = p.clone();
        }
        if let Some(m) = &self.shots {
            c.sweep.shots = m.clone();
        }
        c
    }
}

fn execute(args: &RunArgs) -> Result<String, HarnessError> {
    let config = args.to_config();
    let result = run_experiment_with_workers(&config, args.workers)?;
    let out = args
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("results/{}.json", config.experiment_id)));
    write_result(&result, &out)?;
    Ok(format!(
        "{} ({}): {} records, {} series in {:.1}s -> {}",
        config.experiment_id,
        config.experiment_id.title(),
        result.per_seed.len(),
        result.series.len(),
        result.meta.duration_s,
        out.display()
    ))
}

/// Entry point; returns the process exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match cli.command {
        Command::Run(args) => match execute(&args) {
            Ok(line) => {
                println!("{line}");
                0
            }
            Err(e) => {
                eprintln!("aheft: {e}");
                e.exit_code()
            }
        },
        Command::Verify { suite } => {
            let checks = match suite {
                Suite::Acceptance => match std::env::current_exe() {
                    Ok(exe) => run_acceptance(&exe, true),
                    Err(e) => {
                        eprintln!("aheft: cannot locate own executable: {e}");
                        return 1;
                    }
                },
                Suite::Invariants => run_invariants(true),
            };
            let failed = checks.iter().filter(|c| !c.passed).count();
            println!("{} passed, {failed} failed", checks.len() - failed);
            i32::from(failed > 0)
        }
    }
}
