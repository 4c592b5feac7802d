//! Gate sequences and their line-oriented text form.
//!
//! ```text
//! qubits 3
//! H q0
//! CZ q0 q1
//! CX q0,q1 q2
//! ```

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevector::{GateKind, GateOp, QuantumState};

/// Widest circuit the text format accepts. Simulation is further capped by
/// [`crate::statevector::MAX_QUBITS`].
pub const MAX_CIRCUIT_QUBITS: usize = 63;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<GateOp>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCounts {
    pub h: usize,
    pub x: usize,
    /// Z and every multi-controlled Z.
    pub z_family: usize,
    /// Every multi-controlled X (CNOT, Toffoli, ...).
    pub cx_family: usize,
    pub total: usize,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_CIRCUIT_QUBITS {
            return Err(Error::Capacity {
                requested: num_qubits,
                max: MAX_CIRCUIT_QUBITS,
            });
        }
        Ok(Self {
            num_qubits,
            gates: Vec::new(),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[GateOp] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: GateOp) -> Result<()> {
        gate.validate(self.num_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend<I: IntoIterator<Item = GateOp>>(&mut self, gates: I) -> Result<()> {
        for g in gates {
            self.push(g)?;
        }
        Ok(())
    }

    /// Appends all gates of `other`, moving its qubits up by `offset`.
    pub fn append_shifted(&mut self, other: &Circuit, offset: usize) -> Result<()> {
        self.extend(other.gates.iter().map(|g| g.shifted(offset)))
    }

    /// Applies every gate to `state`, in order.
    pub fn run(&self, state: &mut QuantumState) -> Result<()> {
        if state.num_qubits() != self.num_qubits {
            return Err(Error::LengthMismatch {
                left: self.num_qubits,
                right: state.num_qubits(),
            });
        }
        for g in &self.gates {
            state.apply(g)?;
        }
        Ok(())
    }

    /// Runs the circuit on |0…0⟩.
    pub fn simulate(&self) -> Result<QuantumState> {
        let mut state = QuantumState::zero(self.num_qubits)?;
        self.run(&mut state)?;
        Ok(state)
    }

    pub fn gate_count(&self) -> GateCounts {
        let mut counts = GateCounts::default();
        for g in &self.gates {
            match g.kind {
                GateKind::H => counts.h += 1,
                GateKind::X => counts.x += 1,
                GateKind::Z | GateKind::ControlledZ => counts.z_family += 1,
                GateKind::ControlledX => counts.cx_family += 1,
            }
        }
        counts.total = self.gates.len();
        counts
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qubits {}", self.num_qubits)?;
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

fn parse_qubit(token: &str, line: usize) -> Result<usize> {
    token
        .strip_prefix('q')
        .and_then(|d| {
            // reject "+1", " 1" and similar forms usize::from_str tolerates
            if !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()) {
                d.parse().ok()
            } else {
                None
            }
        })
        .ok_or_else(|| Error::Parse {
            line,
            reason: format!("expected a qubit like `q0`, got `{token}`"),
        })
}

impl FromStr for Circuit {
    type Err = Error;

    /// Blank lines and lines starting with `#` are skipped.
    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (line, header) = lines.next().ok_or(Error::EmptyInput)?;
        let num_qubits = match header.split_whitespace().collect::<Vec<_>>()[..] {
            ["qubits", n] => n.parse::<usize>().map_err(|e| Error::Parse {
                line,
                reason: format!("bad qubit count `{n}`: {e}"),
            })?,
            _ => {
                return Err(Error::Parse {
                    line,
                    reason: "expected header `qubits <n>`".into(),
                })
            }
        };
        let mut circuit = Circuit::new(num_qubits).map_err(|e| Error::Parse {
            line,
            reason: e.to_string(),
        })?;

        for (line, text) in lines {
            let tokens: Vec<&str> = text.split_whitespace().collect();
            let gate = match tokens[..] {
                [name @ ("H" | "X" | "Z"), q] => {
                    let target = parse_qubit(q, line)?;
                    match name {
                        "H" => GateOp::h(target),
                        "X" => GateOp::x(target),
                        _ => GateOp::z(target),
                    }
                }
                [name @ ("CZ" | "CX"), controls, q] => {
                    let controls = controls
                        .split(',')
                        .map(|c| parse_qubit(c, line))
                        .collect::<Result<Vec<_>>>()?;
                    let target = parse_qubit(q, line)?;
                    if name == "CZ" {
                        GateOp::cz(controls, target)
                    } else {
                        GateOp::cx(controls, target)
                    }
                }
                _ => {
                    return Err(Error::Parse {
                        line,
                        reason: format!("unrecognized gate line `{text}`"),
                    })
                }
            };
            circuit.push(gate).map_err(|e| Error::Parse {
                line,
                reason: e.to_string(),
            })?;
        }
        Ok(circuit)
    }
}
