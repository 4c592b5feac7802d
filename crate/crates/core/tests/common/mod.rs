//! Test-only reference implementations, kept independent of the simulator's
//! bit-twiddling gate kernels.
#![allow(dead_code)]

use qfloor::{Circuit, GateKind, GateOp, SignVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Matrix = Vec<Vec<f64>>;

fn identity(dim: usize) -> Matrix {
    (0..dim)
        .map(|r| (0..dim).map(|c| if r == c { 1.0 } else { 0.0 }).collect())
        .collect()
}

fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (ra, rb) = (a.len(), b.len());
    let mut out = vec![vec![0.0; ra * rb]; ra * rb];
    for i in 0..ra {
        for j in 0..ra {
            for k in 0..rb {
                for l in 0..rb {
                    out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] != 0.0 {
                for j in 0..n {
                    out[i][j] += a[i][k] * b[k][j];
                }
            }
        }
    }
    out
}

fn single(kind: GateKind) -> Matrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    match kind {
        GateKind::H => vec![vec![s, s], vec![s, -s]],
        GateKind::X | GateKind::ControlledX => vec![vec![0.0, 1.0], vec![1.0, 0.0]],
        GateKind::Z | GateKind::ControlledZ => vec![vec![1.0, 0.0], vec![0.0, -1.0]],
    }
}

/// Full 2^n x 2^n matrix of a gate, built from Kronecker products with
/// qubit 0 as the least significant factor. A controlled U is
/// I + |1..1><1..1|_controls ⊗ (U - I)_target.
pub fn gate_matrix(gate: &GateOp, num_qubits: usize) -> Matrix {
    let u = single(gate.kind);
    let one_proj = vec![vec![0.0, 0.0], vec![0.0, 1.0]];
    let i2 = identity(2);
    let u_minus_i: Matrix = (0..2)
        .map(|r| (0..2).map(|c| u[r][c] - i2[r][c]).collect())
        .collect();
    let factor = |q: usize, controlled: bool| -> Matrix {
        if q == gate.target {
            if controlled {
                u_minus_i.clone()
            } else {
                u.clone()
            }
        } else if controlled && gate.controls.contains(&q) {
            one_proj.clone()
        } else {
            i2.clone()
        }
    };
    let build = |controlled: bool| {
        let mut m = vec![vec![1.0]];
        for q in (0..num_qubits).rev() {
            m = kron(&m, &factor(q, controlled));
        }
        m
    };
    if gate.controls.is_empty() {
        build(false)
    } else {
        let delta = build(true);
        let mut m = identity(1 << num_qubits);
        for (r, row) in m.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v += delta[r][c];
            }
        }
        m
    }
}

/// Product of all gate matrices, applied to |0…0⟩.
pub fn brute_force_output(circuit: &Circuit) -> Vec<f64> {
    let n = circuit.num_qubits();
    let mut total = identity(1 << n);
    for g in circuit.gates() {
        total = matmul(&gate_matrix(g, n), &total);
    }
    total.iter().map(|row| row[0]).collect()
}

/// (1/N) Σ ψ_i φ_i computed straight from the entries.
pub fn normalized_dot(phi: &SignVector, psi: &SignVector) -> f64 {
    let s: i64 = phi
        .entries()
        .iter()
        .zip(psi.entries())
        .map(|(&a, &b)| i64::from(a) * i64::from(b))
        .sum();
    s as f64 / phi.len() as f64
}

/// Every sign vector of length `n` whose first entry is +1.
pub fn all_canonical(n: usize) -> Vec<SignVector> {
    (0..1usize << (n - 1))
        .map(|bits| {
            let mut v = vec![1i8];
            v.extend((0..n - 1).map(|k| if bits >> k & 1 == 1 { -1 } else { 1 }));
            SignVector::new(v).unwrap()
        })
        .collect()
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> SignVector {
    SignVector::from_heard((0..n).map(|_| rng.random_bool(0.5))).unwrap()
}

pub fn random_canonical(rng: &mut ChaCha8Rng, n: usize) -> SignVector {
    qfloor::canonicalize(&random_vector(rng, n)).0
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
