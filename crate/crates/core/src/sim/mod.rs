//! Pointer-register simulation of the zero-eigenvector filter and the
//! two-stage preparation protocol built on it.

mod filter;
mod pointer;
mod protocol;

pub use filter::{default_pointer_size, filter_stage, StageDiagnostics, StageParams, TimeRule};
pub use pointer::{
    evolve, init_pointer, postselect_zero, JointState, PointerRegister, PostSelected,
    ZERO_PROBABILITY_FLOOR,
};
pub use protocol::{
    acceptance_frequency, run_protocol, sample_stage_attempts, GapEstimate, Mode, ProtocolConfig,
    ProtocolResult, SPrime, StageReport, MAX_ATTEMPTS,
};
