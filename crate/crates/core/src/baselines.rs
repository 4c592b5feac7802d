//! Reference similarity measures: the classical dot product, a uniform
//! random floor classifier, and the swap-test overlap circuit that needs
//! 1 + 2·log2 N qubits.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, GateCounts};
use crate::encoder::synthesize_encoding;
use crate::error::{Error, Result};
use crate::sign::{canonicalize, SignVector};
use crate::statevector::{sample_bit, GateOp, ShotConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "classical")]
    ClassicalDot,
    #[serde(rename = "classical-abs")]
    ClassicalAbsDot,
    #[serde(rename = "quantum")]
    QuantumNeuron,
    #[serde(rename = "swap-test")]
    SwapTest,
    #[serde(rename = "random")]
    Random,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::ClassicalDot,
        Method::ClassicalAbsDot,
        Method::QuantumNeuron,
        Method::SwapTest,
        Method::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::ClassicalDot => "classical",
            Method::ClassicalAbsDot => "classical-abs",
            Method::QuantumNeuron => "quantum",
            Method::SwapTest => "swap-test",
            Method::Random => "random",
        }
    }

    /// Qubits needed for one similarity evaluation over `n_sources`
    /// entries; 0 for the classical methods.
    pub fn qubits(self, n_sources: usize) -> usize {
        let n = n_sources.trailing_zeros() as usize;
        match self {
            Method::QuantumNeuron => 1 + n,
            Method::SwapTest => 1 + 2 * n,
            _ => 0,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::UnknownMethod(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilarityScore {
    pub value: f64,
    pub method: Method,
}

/// How a quantum similarity is read out of the simulated state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Readout {
    /// Exact amplitudes.
    Exact,
    /// Binomial shot sampling of the exact ancilla probability.
    Shots(ShotConfig),
}

/// (1/N) Σ ψ_i φ_i, in [-1, 1].
pub fn classical_dot(phi: &SignVector, psi: &SignVector) -> Result<f64> {
    Ok(phi.dot(psi)? as f64 / phi.len() as f64)
}

pub fn classical_absdot(phi: &SignVector, psi: &SignVector) -> Result<f64> {
    classical_dot(phi, psi).map(f64::abs)
}

/// Swap test over `1 + 2n` qubits: register A (qubits `0..n`) holds |Φ⟩,
/// register B (`n..2n`) holds |Ψ⟩, qubit `2n` is the ancilla. Each
/// controlled swap is spelled CX(B→A)·CCX(anc, A→B)·CX(B→A).
pub fn build_swap_test_circuit(phi: &SignVector, psi: &SignVector) -> Result<Circuit> {
    if phi.len() != psi.len() {
        return Err(Error::LengthMismatch {
            left: phi.len(),
            right: psi.len(),
        });
    }
    let n = phi.num_qubits()?;
    let ancilla = 2 * n;
    let mut circuit = Circuit::new(2 * n + 1)?;
    circuit.append_shifted(&synthesize_encoding(phi)?, 0)?;
    circuit.append_shifted(&synthesize_encoding(psi)?, n)?;
    circuit.push(GateOp::h(ancilla))?;
    for j in 0..n {
        let (a, b) = (j, n + j);
        circuit.push(GateOp::cx([b], a))?;
        circuit.push(GateOp::cx([ancilla, a], b))?;
        circuit.push(GateOp::cx([b], a))?;
    }
    circuit.push(GateOp::h(ancilla))?;
    Ok(circuit)
}

/// Simulates the swap test on arbitrary-sign inputs and returns
/// P(ancilla = 0) = (1 + |⟨Ψ|Φ⟩|²) / 2 with the circuit's gate counts.
pub fn swap_test_probability_zero(
    phi: &SignVector,
    psi: &SignVector,
) -> Result<(f64, GateCounts)> {
    let (phi, _) = canonicalize(phi);
    let (psi, _) = canonicalize(psi);
    let circuit = build_swap_test_circuit(&phi, &psi)?;
    let ancilla = circuit.num_qubits() - 1;
    let state = circuit.simulate()?;
    let p0 = (1.0 - state.probability_one(ancilla)?).clamp(0.0, 1.0);
    Ok((p0, circuit.gate_count()))
}

/// Overlap magnitude recovered from the swap test, √max(0, 2·P0 − 1).
pub fn swap_test_similarity(
    phi: &SignVector,
    psi: &SignVector,
    readout: Readout,
) -> Result<SimilarityScore> {
    let (p0, _) = swap_test_probability_zero(phi, psi)?;
    let p0 = match readout {
        Readout::Exact => p0,
        Readout::Shots(cfg) => {
            let ones = sample_bit(1.0 - p0, &cfg)?;
            1.0 - ones as f64 / cfg.shots() as f64
        }
    };
    Ok(SimilarityScore {
        value: swap_overlap(p0),
        method: Method::SwapTest,
    })
}

pub(crate) fn swap_overlap(p0: f64) -> f64 {
    (2.0 * p0 - 1.0).max(0.0).sqrt().min(1.0)
}

/// Uniform draw from `floors`, deterministic per seed.
pub fn random_floor(floors: &BTreeSet<i32>, seed: u64) -> Result<i32> {
    if floors.is_empty() {
        return Err(Error::EmptyFloorSet);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pick = rng.random_range(0..floors.len());
    Ok(*floors.iter().nth(pick).expect("index in range"))
}
