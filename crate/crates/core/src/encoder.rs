//! Hypergraph-state synthesis of the encoding unitary U_Φ and the
//! entangling unitary U_Ψ.
//!
//! Every sign pattern with a +1 first entry is reachable from the uniform
//! superposition by a product of (multi-controlled) Z gates. A Z-family
//! gate acting on the qubits set in index `i` negates exactly the basis
//! states whose index is a bitwise superset of `i`. Walking indices by
//! ascending Hamming weight and correcting each mismatch in turn never
//! disturbs an index that was already fixed, because a correction at `i`
//! only reaches supersets of `i`, which have strictly larger weight.

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::sign::SignVector;
use crate::statevector::GateOp;

fn check_synthesizable(v: &SignVector) -> Result<usize> {
    let n = v.num_qubits()?;
    if !v.is_canonical() {
        return Err(Error::NonCanonical);
    }
    Ok(n)
}

/// Diagonal ±1 part of the encoding: the Z-family gates that turn the
/// uniform superposition into the sign pattern of `v`. The product is
/// self-inverse.
pub fn sign_flip_gates(v: &SignVector) -> Result<Vec<GateOp>> {
    let n = check_synthesizable(v)?;
    let dim = v.len();
    let full = dim - 1;
    let target = v.entries();
    let mut tracked = vec![1i8; dim];
    let mut gates = Vec::new();

    for weight in 1..=n as u32 {
        for i in (1..dim).filter(|i| i.count_ones() == weight) {
            if tracked[i] == target[i] {
                continue;
            }
            let qubits: Vec<usize> = (0..n).filter(|q| i & (1 << q) != 0).collect();
            let (&top, rest) = qubits.split_last().expect("weight >= 1");
            gates.push(if rest.is_empty() {
                GateOp::z(top)
            } else {
                GateOp::cz(rest.to_vec(), top)
            });
            // negate every superset of i
            let free = full & !i;
            let mut sub = free;
            loop {
                tracked[i | sub] = -tracked[i | sub];
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & free;
            }
        }
    }
    debug_assert_eq!(tracked, target);
    Ok(gates)
}

/// U_Φ: maps |0⟩^n to (1/√N) Σ φ_i |i⟩.
pub fn synthesize_encoding(phi: &SignVector) -> Result<Circuit> {
    let n = check_synthesizable(phi)?;
    let mut circuit = Circuit::new(n)?;
    circuit.extend((0..n).map(GateOp::h))?;
    circuit.extend(sign_flip_gates(phi)?)?;
    Ok(circuit)
}

/// U_Ψ: maps (1/√N) Σ ψ_i |i⟩ to |1⟩^n.
pub fn synthesize_entangling(psi: &SignVector) -> Result<Circuit> {
    let n = check_synthesizable(psi)?;
    let mut circuit = Circuit::new(n)?;
    circuit.extend(sign_flip_gates(psi)?)?;
    circuit.extend((0..n).map(GateOp::h))?;
    circuit.extend((0..n).map(GateOp::x))?;
    Ok(circuit)
}
