//! Independent dense-matrix oracle: circuits as explicit Kronecker-expanded
//! matrix products. Deliberately shares nothing with the statevector path
//! it cross-checks, so keep it free of `simulator` internals.

// shared by several test binaries; each uses a subset
#![allow(dead_code)]

use qnnlab_core::circuits::CircuitSpec;
use qnnlab_core::simulator::GateOp;

/// Row-major dense real matrix.
#[derive(Clone, Debug)]
pub struct Dense {
    pub dim: usize,
    pub data: Vec<f64>,
}

impl Dense {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = 1.0;
        }
        Dense { dim, data }
    }

    pub fn matmul(&self, other: &Dense) -> Dense {
        assert_eq!(self.dim, other.dim);
        let dim = self.dim;
        let mut data = vec![0.0; dim * dim];
        for r in 0..dim {
            for k in 0..dim {
                let a = self.data[r * dim + k];
                if a == 0.0 {
                    continue;
                }
                for c in 0..dim {
                    data[r * dim + c] += a * other.data[k * dim + c];
                }
            }
        }
        Dense { dim, data }
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.dim, v.len());
        (0..self.dim)
            .map(|r| {
                (0..self.dim)
                    .map(|c| self.data[r * self.dim + c] * v[c])
                    .sum()
            })
            .collect()
    }
}

type Two = [[f64; 2]; 2];

const I2: Two = [[1.0, 0.0], [0.0, 1.0]];
const X2: Two = [[0.0, 1.0], [1.0, 0.0]];
const Z2: Two = [[1.0, 0.0], [0.0, -1.0]];
const P0: Two = [[1.0, 0.0], [0.0, 0.0]];
const P1: Two = [[0.0, 0.0], [0.0, 1.0]];

fn ry2(theta: f64) -> Two {
    [[theta.cos(), -theta.sin()], [theta.sin(), theta.cos()]]
}

/// Kronecker product over per-qubit factors, qubit 1 leftmost.
fn kron_chain(factors: &[Two]) -> Dense {
    let mut out = Dense {
        dim: 1,
        data: vec![1.0],
    };
    for f in factors {
        let dim = out.dim * 2;
        let mut data = vec![0.0; dim * dim];
        for r1 in 0..out.dim {
            for c1 in 0..out.dim {
                let a = out.data[r1 * out.dim + c1];
                if a == 0.0 {
                    continue;
                }
                for r2 in 0..2 {
                    for c2 in 0..2 {
                        data[(r1 * 2 + r2) * dim + (c1 * 2 + c2)] = a * f[r2][c2];
                    }
                }
            }
        }
        out = Dense { dim, data };
    }
    out
}

/// Dense matrix of one gate on the full n-qubit space.
pub fn gate_matrix(n: usize, gate: &GateOp, params: &[f64]) -> Dense {
    let mut factors = vec![I2; n];
    match *gate {
        GateOp::Ry { qubit, slot, sign } => {
            let angle = params[slot] * f64::from(sign);
            factors[qubit - 1] = ry2(angle);
            kron_chain(&factors)
        }
        GateOp::X { qubit } => {
            factors[qubit - 1] = X2;
            kron_chain(&factors)
        }
        GateOp::Cnot { control, target } => {
            // P0 on control ⊗ I  +  P1 on control ⊗ X on target
            let mut rest = vec![I2; n];
            rest[control - 1] = P0;
            let mut flip = vec![I2; n];
            flip[control - 1] = P1;
            flip[target - 1] = X2;
            add(kron_chain(&rest), kron_chain(&flip))
        }
        GateOp::Cz { a, b } => {
            let mut rest = vec![I2; n];
            rest[a - 1] = P0;
            let mut phase = vec![I2; n];
            phase[a - 1] = P1;
            phase[b - 1] = Z2;
            add(kron_chain(&rest), kron_chain(&phase))
        }
    }
}

fn add(mut a: Dense, b: Dense) -> Dense {
    assert_eq!(a.dim, b.dim);
    for (x, y) in a.data.iter_mut().zip(&b.data) {
        *x += y;
    }
    a
}

/// Full circuit as one dense product, gates applied left to right.
pub fn circuit_matrix(circuit: &CircuitSpec, params: &[f64]) -> Dense {
    let mut out = Dense::identity(1 << circuit.n_qubits);
    for gate in &circuit.gates {
        out = gate_matrix(circuit.n_qubits, gate, params).matmul(&out);
    }
    out
}

/// Run a circuit through the dense oracle.
pub fn run_dense(circuit: &CircuitSpec, input: &[f64], params: &[f64]) -> Vec<f64> {
    circuit_matrix(circuit, params).apply(input)
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Random real product state cos t|0⟩ + sin t|1⟩ per qubit.
pub fn random_product_state(n: usize, rng: &mut impl rand::Rng) -> Vec<f64> {
    let mut amps = vec![1.0];
    for _ in 0..n {
        let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let mut next = Vec::with_capacity(amps.len() * 2);
        for &a in &amps {
            next.push(a * t.cos());
            next.push(a * t.sin());
        }
        amps = next;
    }
    amps
}
