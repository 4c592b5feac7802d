//! Fingerprint matching and the evaluation reports built on it.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{
    classical_absdot, classical_dot, random_floor, swap_overlap, swap_test_probability_zero,
    Method, SimilarityScore,
};
use crate::error::{Error, Result};
use crate::neuron::simulate_neuron;
use crate::pipeline::{build_db, select_aps, FingerprintDb, RssRecord, SplitConfig, TestSet};
use crate::sign::SignVector;
use crate::statevector::{sample_bit, ShotConfig};

/// Scores within this distance of the maximum count as tied. Distinct
/// activations of ±1 vectors differ by at least 2/N, far above simulator
/// round-off.
pub const SCORE_TIE_EPS: f64 = 1e-9;

const FINGERPRINT_SEED_MIX: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    Exact,
    Shots(u64),
}

impl Mode {
    pub fn shots(self) -> u64 {
        match self {
            Mode::Exact => 0,
            Mode::Shots(k) => k,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::Shots(k) => write!(f, "shots:{k}"),
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "exact" {
            return Ok(Mode::Exact);
        }
        s.strip_prefix("shots:")
            .and_then(|k| k.parse::<u64>().ok())
            .filter(|&k| k > 0)
            .map(Mode::Shots)
            .ok_or_else(|| Error::InvalidMode(s.to_string()))
    }
}

/// Seed for the (test sample, fingerprint) pair; independent of evaluation
/// order.
pub fn pair_seed(base_seed: u64, sample_index: usize, fingerprint_index: usize) -> u64 {
    base_seed ^ sample_index as u64 ^ (fingerprint_index as u64).wrapping_mul(FINGERPRINT_SEED_MIX)
}

/// One similarity evaluation; returns the score and the number of gates in
/// the circuit that produced it (0 for classical methods).
pub fn score_pair(
    method: Method,
    phi: &SignVector,
    psi: &SignVector,
    mode: Mode,
    seed: u64,
) -> Result<(f64, usize)> {
    match method {
        Method::ClassicalDot => Ok((classical_dot(phi, psi)?, 0)),
        Method::ClassicalAbsDot => Ok((classical_absdot(phi, psi)?, 0)),
        Method::QuantumNeuron => {
            let (magnitude, p1, counts) = simulate_neuron(phi, psi)?;
            let value = match mode {
                Mode::Exact => magnitude.min(1.0),
                Mode::Shots(k) => {
                    let ones = sample_bit(p1.clamp(0.0, 1.0), &ShotConfig::new(k, seed)?)?;
                    (ones as f64 / k as f64).sqrt()
                }
            };
            Ok((value, counts.total))
        }
        Method::SwapTest => {
            let (p0, counts) = swap_test_probability_zero(phi, psi)?;
            let p0 = match mode {
                Mode::Exact => p0,
                Mode::Shots(k) => {
                    let ones = sample_bit(1.0 - p0, &ShotConfig::new(k, seed)?)?;
                    1.0 - ones as f64 / k as f64
                }
            };
            Ok((swap_overlap(p0), counts.total))
        }
        Method::Random => Err(Error::UnknownMethod(
            "random has no pairwise score".into(),
        )),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchResult {
    /// One score per fingerprint, in database order. Empty for `random`.
    pub scores: Vec<SimilarityScore>,
    /// Best fingerprint; `None` for `random`, which draws a floor directly.
    pub chosen_index: Option<usize>,
    pub estimated_floor: i32,
    pub true_floor: Option<i32>,
    pub gates_evaluated: usize,
}

/// Index of the highest score; the lowest index wins ties.
pub fn argmax_lowest(scores: &[f64]) -> Option<usize> {
    let best = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    scores.iter().position(|&s| s >= best - SCORE_TIE_EPS)
}

/// Scores `psi` against every fingerprint and reports the floor of the best
/// one. `sample_index` only feeds seed derivation.
pub fn match_sample(
    db: &FingerprintDb,
    psi: &SignVector,
    method: Method,
    mode: Mode,
    base_seed: u64,
    sample_index: usize,
) -> Result<MatchResult> {
    if db.samples.is_empty() {
        return Err(Error::EmptyDb);
    }
    if psi.len() != db.n() {
        return Err(Error::LengthMismatch {
            left: db.n(),
            right: psi.len(),
        });
    }
    if method == Method::Random {
        let floor = random_floor(&db.floors(), base_seed ^ sample_index as u64)?;
        return Ok(MatchResult {
            scores: Vec::new(),
            chosen_index: None,
            estimated_floor: floor,
            true_floor: None,
            gates_evaluated: 0,
        });
    }

    let mut values = Vec::with_capacity(db.m());
    let mut gates = 0;
    for (l, fp) in db.samples.iter().enumerate() {
        let seed = pair_seed(base_seed, sample_index, l);
        let (v, g) = score_pair(method, &fp.vector, psi, mode, seed)?;
        values.push(v);
        gates += g;
    }
    let chosen = argmax_lowest(&values).expect("db is non-empty");
    Ok(MatchResult {
        scores: values
            .into_iter()
            .map(|value| SimilarityScore { value, method })
            .collect(),
        chosen_index: Some(chosen),
        estimated_floor: db.samples[chosen].floor,
        true_floor: None,
        gates_evaluated: gates,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CdfPoint {
    pub error: u32,
    pub cumulative_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub method: Method,
    pub mode: String,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub test_size: usize,
    pub shots: u64,
    pub qubits_used: usize,
    pub total_gate_count: u64,
    pub accuracy: f64,
    pub cdf: Vec<CdfPoint>,
    pub floor_errors: Vec<u32>,
    pub estimated_floors: Vec<i32>,
    pub true_floors: Vec<i32>,
    pub chosen_indices: Vec<Option<usize>>,
}

impl EvalReport {
    /// `error,cumulative_fraction` rows for plotting.
    pub fn cdf_csv(&self) -> String {
        let mut out = String::from("error,cumulative_fraction\n");
        for p in &self.cdf {
            out.push_str(&format!("{},{}\n", p.error, p.cumulative_fraction));
        }
        out
    }
}

/// Empirical CDF over the distinct error values; ends at 1.0.
pub fn error_cdf(errors: &[u32]) -> Vec<CdfPoint> {
    let mut sorted = errors.to_vec();
    sorted.sort_unstable();
    let total = sorted.len() as f64;
    let mut points: Vec<CdfPoint> = Vec::new();
    for (i, &e) in sorted.iter().enumerate() {
        let fraction = (i + 1) as f64 / total;
        match points.last_mut() {
            Some(last) if last.error == e => last.cumulative_fraction = fraction,
            _ => points.push(CdfPoint {
                error: e,
                cumulative_fraction: fraction,
            }),
        }
    }
    points
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalSettings {
    pub method: Method,
    pub mode: Mode,
    pub seed: u64,
}

fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(f()),
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| Error::Config(format!("thread pool: {e}"))),
    }
}

/// Matches every test sample and summarizes the floor errors. `jobs` caps
/// the worker count (default: rayon's global pool). Results do not depend
/// on the worker count.
pub fn evaluate(
    db: &FingerprintDb,
    test: &TestSet,
    settings: EvalSettings,
    jobs: Option<usize>,
) -> Result<EvalReport> {
    if test.samples.is_empty() {
        return Err(Error::EmptyTestSet);
    }
    if db.samples.is_empty() {
        return Err(Error::EmptyDb);
    }
    db.check_compatible(test)?;

    let matches: Vec<MatchResult> = with_jobs(jobs, || {
        test.samples
            .par_iter()
            .enumerate()
            .map(|(i, s)| {
                match_sample(db, &s.vector, settings.method, settings.mode, settings.seed, i)
                    .map(|mut m| {
                        m.true_floor = Some(s.floor);
                        m
                    })
            })
            .collect::<Result<Vec<_>>>()
    })??;

    let true_floors: Vec<i32> = test.samples.iter().map(|s| s.floor).collect();
    let estimated_floors: Vec<i32> = matches.iter().map(|m| m.estimated_floor).collect();
    let floor_errors: Vec<u32> = estimated_floors
        .iter()
        .zip(&true_floors)
        .map(|(e, t)| e.abs_diff(*t))
        .collect();
    let correct = floor_errors.iter().filter(|&&e| e == 0).count();
    Ok(EvalReport {
        method: settings.method,
        mode: settings.mode.to_string(),
        seed: settings.seed,
        n: db.n(),
        m: db.m(),
        test_size: test.m(),
        shots: settings.mode.shots(),
        qubits_used: settings.method.qubits(db.n()),
        total_gate_count: matches.iter().map(|m| m.gates_evaluated as u64).sum(),
        accuracy: correct as f64 / test.m() as f64,
        cdf: error_cdf(&floor_errors),
        floor_errors,
        estimated_floors,
        true_floors,
        chosen_indices: matches.iter().map(|m| m.chosen_index).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexityRow {
    pub n: usize,
    pub m: u64,
    /// M·N memory units / operations for classical matching.
    pub classical_cost: u64,
    /// M·log2 N qubit-units for the neuron circuit.
    pub quantum_cost: u64,
    /// 1 + log2 N.
    pub qubits: usize,
    /// 1 + 2·log2 N, for the swap-test comparison.
    pub swap_test_qubits: usize,
    /// Mean wall time of one simulated neuron evaluation, in microseconds.
    /// Simulator cost, not quantum runtime.
    pub sim_time_us: Option<f64>,
}

/// Classical vs quantum cost model for each N. With `measure`, also times
/// the simulator on a seeded random pair at each N.
pub fn complexity_report(n_values: &[usize], m: u64, measure: bool) -> Result<Vec<ComplexityRow>> {
    let mut rows = Vec::with_capacity(n_values.len());
    for &n in n_values {
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(n));
        }
        let log_n = n.trailing_zeros() as usize;
        let sim_time_us = if measure {
            Some(time_neuron(n)?)
        } else {
            None
        };
        rows.push(ComplexityRow {
            n,
            m,
            classical_cost: m * n as u64,
            quantum_cost: m * log_n as u64,
            qubits: Method::QuantumNeuron.qubits(n),
            swap_test_qubits: Method::SwapTest.qubits(n),
            sim_time_us,
        });
    }
    Ok(rows)
}

fn time_neuron(n: usize) -> Result<f64> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
    let mut random_vec = || SignVector::from_heard((0..n).map(|_| rng.random_bool(0.5)));
    let (phi, psi) = (random_vec()?, random_vec()?);
    let reps = 5;
    let start = Instant::now();
    for _ in 0..reps {
        simulate_neuron(&phi, &psi)?;
    }
    Ok(start.elapsed().as_secs_f64() * 1e6 / reps as f64)
}

pub fn complexity_csv(rows: &[ComplexityRow]) -> String {
    let mut out =
        String::from("n,m,classical_cost,quantum_cost,qubits,swap_test_qubits,sim_time_us\n");
    for r in rows {
        let t = r.sim_time_us.map_or(String::new(), |t| format!("{t:.3}"));
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.n, r.m, r.classical_cost, r.quantum_cost, r.qubits, r.swap_test_qubits, t
        ));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub m: usize,
    pub test_size: usize,
    pub accuracy: f64,
}

/// Accuracy for each access-point budget N: pick the N most-heard access
/// points, rebuild the database with the same split, evaluate.
pub fn accuracy_vs_n(
    records: &[RssRecord],
    n_values: &[usize],
    settings: EvalSettings,
    split: SplitConfig,
    threshold: Option<f64>,
    jobs: Option<usize>,
) -> Result<Vec<SweepRow>> {
    n_values
        .iter()
        .map(|&n| {
            let aps = select_aps(records, n)?;
            let built = build_db(records, &aps, split, threshold)?;
            let report = evaluate(&built.db, &built.test, settings, jobs)?;
            Ok(SweepRow {
                n,
                m: report.m,
                test_size: report.test_size,
                accuracy: report.accuracy,
            })
        })
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("n,m,test_size,accuracy\n");
    for r in rows {
        out.push_str(&format!("{},{},{},{}\n", r.n, r.m, r.test_size, r.accuracy));
    }
    out
}
