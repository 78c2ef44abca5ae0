//! Schedule, optimizer and training loops.

mod adam;
mod run;
mod schedule;

pub use adam::{adam_step, Phase, TrainState, ADAM_BETA1, ADAM_BETA2, ADAM_EPS};
pub use run::{phase_two_kick, run_adaptive, run_hea, run_static, run_with, Method, RunOptions, StepRecord, TrajectoryRecord};
pub use schedule::{sigma_crit, sigma_schedule, sigma_zero, theory_constants, w_max_at, ScheduleConfig, TheoryConstants};
