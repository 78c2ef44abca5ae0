//! Exact simulation and training machinery for EFT-scaled variational circuits.
//!
//! The crate is organised bottom-up:
//!
//! * [`sim`]: pure-state and density-matrix simulation of the `{RY, RZ, CNOT}`
//!   gate set, plus reduced states, entropy and purity.
//! * [`hamiltonian`]: Pauli sums, the periodic TFIM and Heisenberg chains,
//!   expectation values and exact ground spaces.
//! * [`ansatz`]: the spin-mode EFT circuit and the hardware-efficient baseline.
//! * [`gradient`]: parameter-shift gradients, exact and shot-sampled.
//! * [`training`]: the σ schedule, theory constants, Adam and the
//!   adaptive / static / HEA training loops.
//! * [`metrics`] and [`stats`]: the observables and significance tests the
//!   experiments aggregate.

pub mod ansatz;
pub mod error;
pub mod gradient;
pub mod hamiltonian;
pub mod metrics;
pub mod rng;
pub mod sim;
pub mod stats;
pub mod training;

pub use ansatz::{AnsatzKind, AnsatzSpec, ParamVector};
pub use error::{Error, Result};
pub use gradient::GradientVector;
pub use hamiltonian::{GroundSolution, PauliString, PauliSum};
pub use rng::SeedStream;
pub use sim::{GateOp, MixedState, PureState};
pub use training::{ScheduleConfig, TrainState, TrajectoryRecord};

/// Largest register the simulator accepts.
pub const MAX_QUBITS: usize = 14;

/// Largest register the density-matrix path accepts (4^10 complex entries).
pub const MAX_MIXED_QUBITS: usize = 10;
