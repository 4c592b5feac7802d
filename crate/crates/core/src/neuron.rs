//! The binary-neuron circuit: encoding stage, entangling stage and a final
//! multi-controlled NOT onto the ancilla.
//!
//! Data qubits are `0..n`, the ancilla is qubit `n`. After the entangling
//! stage the data register holds η = U_Ψ|Φ⟩ with η_{N-1} = ⟨Ψ|Φ⟩, and the
//! controlled NOT copies "data register is |N-1⟩" onto the ancilla, so
//! P(ancilla = 1) = |⟨Ψ|Φ⟩|².

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, GateCounts};
use crate::encoder::{synthesize_encoding, synthesize_entangling};
use crate::error::{Error, Result};
use crate::sign::{canonicalize, SignVector};
use crate::statevector::{sample_bit, GateOp, ShotConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActivationMode {
    Exact,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActivationResult {
    /// |⟨Ψ|Φ⟩| with both vectors normalized by 1/√N.
    pub activation_magnitude: f64,
    /// P(a = 1), the squared magnitude (or its shot estimate).
    pub probability_one: f64,
    pub mode: ActivationMode,
    /// 0 in exact mode.
    pub shots_used: u64,
}

/// Full circuit over `1 + log2 N` qubits. Both inputs must be canonical.
pub fn build_neuron_circuit(phi: &SignVector, psi: &SignVector) -> Result<Circuit> {
    if phi.len() != psi.len() {
        return Err(Error::LengthMismatch {
            left: phi.len(),
            right: psi.len(),
        });
    }
    let n = phi.num_qubits()?;
    let mut circuit = Circuit::new(n + 1)?;
    circuit.append_shifted(&synthesize_encoding(phi)?, 0)?;
    circuit.append_shifted(&synthesize_entangling(psi)?, 0)?;
    circuit.push(GateOp::cx((0..n).collect::<Vec<_>>(), n))?;
    Ok(circuit)
}

/// Simulates the neuron circuit for arbitrary-sign inputs. Returns the
/// magnitude |η_{N-1}|, the ancilla probability and the circuit's gate
/// counts.
pub fn simulate_neuron(phi: &SignVector, psi: &SignVector) -> Result<(f64, f64, GateCounts)> {
    let (phi, _) = canonicalize(phi);
    let (psi, _) = canonicalize(psi);
    let circuit = build_neuron_circuit(&phi, &psi)?;
    let n = phi.num_qubits()?;
    let state = circuit.simulate()?;
    // ancilla = 1 and data = N-1: every bit set
    let magnitude = state.amplitude((1 << (n + 1)) - 1)?.norm();
    let probability_one = state.probability_one(n)?;
    Ok((magnitude, probability_one, circuit.gate_count()))
}

/// Exact neuron activation from the simulated amplitude. Global signs of
/// the inputs are stripped; only the magnitude is observable.
pub fn activation_exact(phi: &SignVector, psi: &SignVector) -> Result<ActivationResult> {
    let (magnitude, probability_one, _) = simulate_neuron(phi, psi)?;
    Ok(ActivationResult {
        activation_magnitude: magnitude.min(1.0),
        probability_one: probability_one.clamp(0.0, 1.0),
        mode: ActivationMode::Exact,
        shots_used: 0,
    })
}

/// Shot-estimated activation: P(a = 1) is the fraction of `config.shots`
/// simulated measurements that read 1.
pub fn activation_sampled(
    phi: &SignVector,
    psi: &SignVector,
    config: &ShotConfig,
) -> Result<ActivationResult> {
    let exact = activation_exact(phi, psi)?;
    let ones = sample_bit(exact.probability_one, config)?;
    let probability_one = ones as f64 / config.shots() as f64;
    Ok(ActivationResult {
        activation_magnitude: probability_one.sqrt(),
        probability_one,
        mode: ActivationMode::Sampled,
        shots_used: config.shots(),
    })
}
