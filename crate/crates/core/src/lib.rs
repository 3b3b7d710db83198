//! Desk-scale simulation and cost analysis of analog stationary-state preparation
//! for reversible ergodic Markov chains.
//!
//! * [`markov`]: chains, stationary distributions, spectral gap, mixing and hitting times.
//! * [`interpolation`]: the j-absorbing variant, `P(s)`, `s*` and `π(s)`.
//! * [`hamiltonian`]: a Hamiltonian with zero-eigenvector `√π` and spectrum in `[0, 1]`.
//! * [`sim`]: pointer-register evolution, post-selection and the two-stage protocol.
//! * [`cost`]: overlaps `α`, `β`, stage costs, the `A`/`B` coefficients and gap sensitivity.
//! * [`cli`]: the command layer behind the `qssamp` binary.
//!
//! ```
//! use qssamp::markov::{gen_family, Family};
//! use qssamp::sim::{run_protocol, ProtocolConfig};
//!
//! let chain = gen_family(Family::BirthDeath { up: 0.4, down: 0.25 }, 4, 0).unwrap();
//! let result = run_protocol(&chain, 0, &ProtocolConfig::new(0.05)).unwrap();
//! assert!(result.fidelity_sq >= 0.95);
//! ```

pub mod cli;
pub mod cost;
pub mod error;
pub mod hamiltonian;
pub mod interpolation;
mod linalg;
pub mod markov;
pub mod sim;

pub use error::{Error, Result};
