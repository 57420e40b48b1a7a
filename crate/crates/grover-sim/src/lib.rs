//! State-vector simulation engine for quantum amplitude-amplification search.
//!
//! The crate simulates the textbook unstructured-search loop — uniform
//! superposition, conditional phase flip, diffusion (inversion about the
//! average) — on a full `2^n`-amplitude register, and cross-checks three
//! independent formulations of every operator against each other:
//!
//! - [`transforms`] — fast Walsh-Hadamard butterflies, selective phase
//!   rotation, the closed-form diffusion kernel, the `W·R·W` factorization
//!   of diffusion, and dense small-`n` matrices for cross-validation.
//! - [`oracle`] — the marked-state predicate, record-table ("find the
//!   matching name") oracles, and the classical linear-scan baseline.
//! - [`grover`] — the search driver: iteration scheduling, trajectory
//!   capture, and degeneracy-range search for unknown target counts.
//! - [`analysis`] — the exact two-amplitude recurrence for the dynamics,
//!   with machine-checked verdicts for the amplitude-growth bound, sign
//!   recovery, and quadratic conservation.
//! - [`cli`] — the `grover-sim` binary: `run`, `scan`, `verify`, `bench`
//!   and `degeneracy` subcommands emitting JSON/CSV artifacts.
//!
//! Memory cost is `16 * 2^n` bytes per register (two `f64` per amplitude);
//! the default cap of 26 qubits keeps a register at 1 GiB.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod grover;
pub mod oracle;
pub mod statevec;
pub mod transforms;

mod sum;

pub use error::{Error, Result};
pub use oracle::{OracleSpec, RecordTable};
pub use statevec::StateVector;
