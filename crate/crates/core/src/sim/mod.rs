//! Exact simulation of the `{RY, RZ, CNOT}` gate set.
//!
//! Basis convention: qubit 0 is the most-significant bit of the amplitude
//! index, so `|q0 q1 ... q_{n-1}>` maps to index `q0·2^{n-1} + ... + q_{n-1}`.

mod gate;
mod kernel;
mod mixed;
mod state;

pub use gate::{apply_gate, apply_zz_entangler, GateOp};
pub use mixed::{apply_depolarizing_pair, purity, reduced_density, vn_entropy, MixedState};
pub use state::{overlap, zero_state, PureState};

pub(crate) use kernel::bit_of;
