//! Dense state-vector simulator for the small gate set used by the neuron
//! and swap-test circuits.
//!
//! Qubit `j` corresponds to bit `j` (least significant first) of a basis
//! index, so a Z on qubit 1 of a 2-qubit register negates indices 2 and 3.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest register the simulator will allocate (2^24 amplitudes).
pub const MAX_QUBITS: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl QuantumState {
    /// |0…0⟩ on `num_qubits` qubits.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(Error::Capacity {
                requested: num_qubits,
                max: MAX_QUBITS,
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Builds a state from explicit amplitudes. The vector must have length
    /// 2^n and unit norm (within 1e-10).
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(len));
        }
        let num_qubits = len.trailing_zeros() as usize;
        if num_qubits > MAX_QUBITS {
            return Err(Error::Capacity {
                requested: num_qubits,
                max: MAX_QUBITS,
            });
        }
        let state = Self {
            num_qubits,
            amplitudes,
        };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidGate(format!(
                "amplitudes are not normalized (sum of squares {norm})"
            )));
        }
        Ok(state)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Exact amplitude readout, no collapse.
    pub fn amplitude(&self, basis_index: usize) -> Result<Complex64> {
        self.amplitudes
            .get(basis_index)
            .copied()
            .ok_or(Error::BasisIndex {
                index: basis_index,
                dim: self.dim(),
            })
    }

    /// Probability that `qubit` reads 1 in a computational-basis measurement.
    pub fn probability_one(&self, qubit: usize) -> Result<f64> {
        self.check_index(qubit)?;
        let mask = 1usize << qubit;
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Applies `gate` in place. Requires exclusive access to the state.
    pub fn apply(&mut self, gate: &GateOp) -> Result<()> {
        gate.validate(self.num_qubits)?;
        let target = 1usize << gate.target;
        let controls = gate.control_mask();
        let amps = &mut self.amplitudes;
        match gate.kind {
            GateKind::H => {
                for i in 0..amps.len() {
                    if i & target == 0 {
                        let a = amps[i];
                        let b = amps[i | target];
                        amps[i] = (a + b) * FRAC_1_SQRT_2;
                        amps[i | target] = (a - b) * FRAC_1_SQRT_2;
                    }
                }
            }
            GateKind::X => {
                for i in 0..amps.len() {
                    if i & target == 0 {
                        amps.swap(i, i | target);
                    }
                }
            }
            GateKind::Z | GateKind::ControlledZ => {
                let mask = controls | target;
                for (i, a) in amps.iter_mut().enumerate() {
                    if i & mask == mask {
                        *a = -*a;
                    }
                }
            }
            GateKind::ControlledX => {
                for i in 0..amps.len() {
                    if i & target == 0 && i & controls == controls {
                        amps.swap(i, i | target);
                    }
                }
            }
        }
        Ok(())
    }

    /// Returns a new state with `gate` applied; `self` is untouched.
    pub fn applied(&self, gate: &GateOp) -> Result<Self> {
        let mut next = self.clone();
        next.apply(gate)?;
        Ok(next)
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.num_qubits {
            return Err(Error::QubitIndex {
                index,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    H,
    X,
    Z,
    ControlledZ,
    ControlledX,
}

/// One gate of a circuit. Controlled kinds carry at least one control; the
/// single-qubit kinds carry none.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GateOp {
    pub kind: GateKind,
    pub target: usize,
    pub controls: Vec<usize>,
}

impl GateOp {
    pub fn h(target: usize) -> Self {
        Self::single(GateKind::H, target)
    }

    pub fn x(target: usize) -> Self {
        Self::single(GateKind::X, target)
    }

    pub fn z(target: usize) -> Self {
        Self::single(GateKind::Z, target)
    }

    pub fn cz(controls: impl Into<Vec<usize>>, target: usize) -> Self {
        Self {
            kind: GateKind::ControlledZ,
            target,
            controls: controls.into(),
        }
    }

    pub fn cx(controls: impl Into<Vec<usize>>, target: usize) -> Self {
        Self {
            kind: GateKind::ControlledX,
            target,
            controls: controls.into(),
        }
    }

    fn single(kind: GateKind, target: usize) -> Self {
        Self {
            kind,
            target,
            controls: Vec::new(),
        }
    }

    /// Highest qubit index touched by this gate.
    pub fn max_qubit(&self) -> usize {
        self.controls
            .iter()
            .copied()
            .chain(std::iter::once(self.target))
            .max()
            .unwrap_or(self.target)
    }

    /// Same gate with every qubit index moved up by `offset`.
    pub fn shifted(&self, offset: usize) -> Self {
        Self {
            kind: self.kind,
            target: self.target + offset,
            controls: self.controls.iter().map(|c| c + offset).collect(),
        }
    }

    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        let controlled = matches!(self.kind, GateKind::ControlledZ | GateKind::ControlledX);
        if controlled && self.controls.is_empty() {
            return Err(Error::InvalidGate(format!(
                "{:?} needs at least one control",
                self.kind
            )));
        }
        if !controlled && !self.controls.is_empty() {
            return Err(Error::InvalidGate(format!(
                "{:?} takes no controls",
                self.kind
            )));
        }
        if self.target >= num_qubits {
            return Err(Error::QubitIndex {
                index: self.target,
                num_qubits,
            });
        }
        let mut seen = 1usize << self.target;
        for &c in &self.controls {
            if c >= num_qubits {
                return Err(Error::QubitIndex {
                    index: c,
                    num_qubits,
                });
            }
            if seen & (1 << c) != 0 {
                return Err(Error::InvalidGate(format!(
                    "qubit {c} used twice in one gate"
                )));
            }
            seen |= 1 << c;
        }
        Ok(())
    }

    fn control_mask(&self) -> usize {
        self.controls.iter().fold(0, |m, &c| m | (1 << c))
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::Z => "Z",
            GateKind::ControlledZ => "CZ",
            GateKind::ControlledX => "CX",
        };
        write!(f, "{name} ")?;
        if !self.controls.is_empty() {
            let controls: Vec<String> = self.controls.iter().map(|c| format!("q{c}")).collect();
            write!(f, "{} ", controls.join(","))?;
        }
        write!(f, "q{}", self.target)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotConfig {
    shots: u64,
    pub seed: u64,
}

impl ShotConfig {
    pub fn new(shots: u64, seed: u64) -> Result<Self> {
        if shots == 0 {
            return Err(Error::ZeroShots);
        }
        Ok(Self { shots, seed })
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }
}

/// Number of ones seen in `config.shots` Bernoulli trials with success
/// probability `probability_one`. Deterministic for a given seed.
pub fn sample_bit(probability_one: f64, config: &ShotConfig) -> Result<u64> {
    if !(0.0..=1.0).contains(&probability_one) {
        return Err(Error::Probability(probability_one));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let dist = Binomial::new(config.shots, probability_one)
        .map_err(|_| Error::Probability(probability_one))?;
    Ok(dist.sample(&mut rng))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform2() -> QuantumState {
        QuantumState::from_amplitudes(vec![Complex64::new(0.5, 0.0); 4]).unwrap()
    }

    fn re(state: &QuantumState) -> Vec<f64> {
        state.amplitudes().iter().map(|a| a.re).collect()
    }

    #[test]
    fn zero_state() {
        let s = QuantumState::zero(1).unwrap();
        assert_eq!(re(&s), vec![1.0, 0.0]);
        let s = QuantumState::zero(3).unwrap();
        assert_eq!(s.dim(), 8);
        assert_eq!(s.amplitude(0).unwrap(), Complex64::new(1.0, 0.0));
        assert!(matches!(
            QuantumState::zero(25),
            Err(Error::Capacity { requested: 25, .. })
        ));
        assert!(QuantumState::zero(0).is_err());
    }

    #[test]
    fn hadamard_on_zero() {
        let s = QuantumState::zero(1).unwrap().applied(&GateOp::h(0)).unwrap();
        for a in s.amplitudes() {
            assert!((a.re - FRAC_1_SQRT_2).abs() < 1e-15);
        }
    }

    #[test]
    fn cz_marks_last_basis_state() {
        let s = uniform2().applied(&GateOp::cz([0], 1)).unwrap();
        assert_eq!(re(&s), vec![0.5, 0.5, 0.5, -0.5]);
    }

    #[test]
    fn z_on_second_qubit_negates_upper_half() {
        let s = uniform2().applied(&GateOp::z(1)).unwrap();
        assert_eq!(re(&s), vec![0.5, 0.5, -0.5, -0.5]);
    }

    #[test]
    fn toffoli_flips_only_when_controls_set() {
        // |011⟩ -> |111⟩
        let mut s = QuantumState::zero(3).unwrap();
        s.apply(&GateOp::x(0)).unwrap();
        s.apply(&GateOp::x(1)).unwrap();
        s.apply(&GateOp::cx([0, 1], 2)).unwrap();
        assert_eq!(s.amplitude(7).unwrap().re, 1.0);
        // |001⟩ stays
        let mut s = QuantumState::zero(3).unwrap();
        s.apply(&GateOp::x(0)).unwrap();
        s.apply(&GateOp::cx([0, 1], 2)).unwrap();
        assert_eq!(s.amplitude(1).unwrap().re, 1.0);
    }

    #[test]
    fn amplitude_readout_bounds() {
        let s = QuantumState::zero(2).unwrap();
        assert_eq!(s.amplitude(0).unwrap().re, 1.0);
        assert!(matches!(s.amplitude(4), Err(Error::BasisIndex { .. })));
    }

    #[test]
    fn rejects_bad_gates() {
        let mut s = QuantumState::zero(2).unwrap();
        assert!(matches!(
            s.apply(&GateOp::h(2)),
            Err(Error::QubitIndex { index: 2, .. })
        ));
        assert!(s.apply(&GateOp::cz([1], 1)).is_err());
        assert!(s.apply(&GateOp::cx(Vec::new(), 1)).is_err());
        assert!(s.apply(&GateOp::cz([5], 0)).is_err());
        let bad = GateOp {
            kind: GateKind::H,
            target: 0,
            controls: vec![1],
        };
        assert!(s.apply(&bad).is_err());
    }

    #[test]
    fn probability_of_ancilla() {
        let mut s = QuantumState::zero(2).unwrap();
        s.apply(&GateOp::h(1)).unwrap();
        assert!((s.probability_one(1).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(s.probability_one(0).unwrap(), 0.0);
    }

    #[test]
    fn sampling_edges() {
        let cfg = ShotConfig::new(1000, 1).unwrap();
        assert_eq!(sample_bit(0.0, &cfg).unwrap(), 0);
        assert_eq!(sample_bit(1.0, &cfg).unwrap(), 1000);
        assert!(sample_bit(1.5, &cfg).is_err());
        assert!(sample_bit(-0.1, &cfg).is_err());
        assert!(sample_bit(f64::NAN, &cfg).is_err());
        assert!(ShotConfig::new(0, 1).is_err());
    }

    #[test]
    fn sampling_is_close_and_deterministic() {
        let cfg = ShotConfig::new(8192, 0xfeed).unwrap();
        let a = sample_bit(0.25, &cfg).unwrap();
        let b = sample_bit(0.25, &cfg).unwrap();
        assert_eq!(a, b);
        let p = a as f64 / 8192.0;
        assert!((p - 0.25).abs() <= 0.02, "p = {p}");
    }

    #[test]
    fn gate_display() {
        assert_eq!(GateOp::h(3).to_string(), "H q3");
        assert_eq!(GateOp::cz([0], 1).to_string(), "CZ q0 q1");
        assert_eq!(GateOp::cx([0, 1], 2).to_string(), "CX q0,q1 q2");
    }
}
