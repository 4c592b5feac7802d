//! Fingerprint-based floor localization with a simulated quantum binary
//! neuron.
//!
//! Heard/not-heard access-point patterns are encoded as ±1 amplitudes of an
//! `log2 N`-qubit register. One ancilla and a sign-flip (hypergraph-state)
//! circuit give the squared overlap between an online sample and each
//! fingerprint as the ancilla's probability of reading 1; the floor of the
//! best-scoring fingerprint is the estimate.
//!
//! Modules, bottom-up:
//! - [`statevector`]: dense simulator and shot sampling
//! - [`circuit`]: gate sequences and their text form
//! - [`sign`], [`encoder`]: sign vectors and U_Φ / U_Ψ synthesis
//! - [`neuron`]: the full activation circuit
//! - [`baselines`]: classical dot product, random classifier, swap test
//! - [`pipeline`]: survey ingestion and fingerprint databases
//! - [`eval`]: matching, floor-error CDFs, sweeps and resource tables

pub mod baselines;
pub mod circuit;
pub mod encoder;
mod error;
pub mod eval;
pub mod neuron;
pub mod pipeline;
pub mod sign;
pub mod statevector;

pub use baselines::{Method, Readout, SimilarityScore};
pub use circuit::{Circuit, GateCounts};
pub use error::{Error, Result};
pub use sign::{canonicalize, SignVector};
pub use statevector::{GateKind, GateOp, QuantumState, ShotConfig};
