//! Circuit construction for the structured QNN families.
//!
//! Gate placement follows the circuit diagrams exactly:
//!
//! * tree tensor (TT): binary-tree CNOT pattern; each merge keeps the upper
//!   qubit, which is the CNOT *target* and receives the next rotation;
//! * deformed tree tensor (DTT): the same tree over a non-power-of-two leaf
//!   count; subtrees that cannot pair at a level merge at a later one;
//! * step controlled (SC): a CNOT chain walking up from the last qubit,
//!   whose final `n_c` CNOTs all target the first qubit channel;
//! * alternating-layer encoder: RY layers interleaved with two CZ pairings,
//!   used to train approximate amplitude encodings.
//!
//! All of TT/DTT/SC expose exactly `2n − 1` parameters.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::real::Real;
use crate::simulator::{GateOp, SimulatorError, StateVector};

#[derive(Debug, Error, PartialEq)]
pub enum CircuitError {
    #[error("tree tensor circuits require a power-of-two qubit count, got {n}")]
    NotPowerOfTwo { n: usize },
    #[error("architecture requires at least {min} qubits, got {n}")]
    TooFewQubits { n: usize, min: usize },
    #[error("step controlled parameter n_c = {n_c} outside 1..={max}", max = n - 1)]
    InvalidNc { n_c: usize, n: usize },
    #[error("alternating-layer circuits require an even qubit count, got {n}")]
    OddQubits { n: usize },
    #[error("alternating-layer circuits require at least one layer")]
    ZeroLayers,
    #[error("random circuits require at least one RY gate")]
    NoRotations,
    #[error("parameter slot {slot} is unused (slots must cover 0..{n_params})")]
    UnusedSlot { slot: usize, n_params: usize },
    #[error("gate references slot {slot}, but the circuit declares {n_params} parameters")]
    SlotOutOfDeclaredRange { slot: usize, n_params: usize },
    #[error("encoder construction expects an alternating-layer circuit, got {found:?}")]
    NotAlternatingLayer { found: String },
    #[error(transparent)]
    Simulator(#[from] SimulatorError),
}

pub type Result<T> = std::result::Result<T, CircuitError>;

/// Which circuit family to build; carries the family's own parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ArchitectureKind {
    Tt,
    Dtt,
    Sc {
        n_c: usize,
    },
    Random {
        n_ry: usize,
        n_cnot: usize,
        seed: u64,
    },
    AlternatingW {
        layers: usize,
    },
    EncoderU {
        layers: usize,
    },
}

impl ArchitectureKind {
    pub fn tag(&self) -> &'static str {
        match self {
            ArchitectureKind::Tt => "tt",
            ArchitectureKind::Dtt => "dtt",
            ArchitectureKind::Sc { .. } => "sc",
            ArchitectureKind::Random { .. } => "random",
            ArchitectureKind::AlternatingW { .. } => "alternating-w",
            ArchitectureKind::EncoderU { .. } => "encoder-u",
        }
    }
}

/// Reporting label of one parameter slot, printed as θ_layer^(position).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotLabel {
    pub layer: usize,
    pub position: usize,
}

impl std::fmt::Display for SlotLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "θ_{}^({})", self.layer, self.position)
    }
}

/// Executable circuit: an ordered gate list over `n_params` parameter slots.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitSpec {
    pub n_qubits: usize,
    pub gates: Vec<GateOp>,
    pub n_params: usize,
    pub architecture: String,
    pub slot_labels: Vec<SlotLabel>,
}

impl CircuitSpec {
    fn assemble(
        n_qubits: usize,
        gates: Vec<GateOp>,
        slot_labels: Vec<SlotLabel>,
        architecture: String,
    ) -> Result<Self> {
        let spec = CircuitSpec {
            n_qubits,
            gates,
            n_params: slot_labels.len(),
            architecture,
            slot_labels,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Check the structural invariants: qubit indices in range, slots
    /// exactly 0..n_params with every slot used at least once.
    pub fn validate(&self) -> Result<()> {
        let mut used = vec![false; self.n_params];
        for gate in &self.gates {
            let (a, b) = gate.qubits();
            for q in std::iter::once(a).chain(b) {
                if q == 0 || q > self.n_qubits {
                    return Err(SimulatorError::QubitOutOfRange {
                        qubit: q,
                        n_qubits: self.n_qubits,
                    }
                    .into());
                }
            }
            if b == Some(a) {
                return Err(SimulatorError::DuplicateQubits { a, b: a }.into());
            }
            if let Some(slot) = gate.param_slot() {
                if slot >= self.n_params {
                    return Err(CircuitError::SlotOutOfDeclaredRange {
                        slot,
                        n_params: self.n_params,
                    });
                }
                used[slot] = true;
            }
        }
        if let Some(slot) = used.iter().position(|u| !u) {
            return Err(CircuitError::UnusedSlot {
                slot,
                n_params: self.n_params,
            });
        }
        Ok(())
    }

    /// Apply the circuit to `state` with the given parameter values.
    pub fn run<T: Real>(&self, state: &StateVector<T>, params: &[T]) -> Result<StateVector<T>> {
        if let Some(slot) = self
            .gates
            .iter()
            .filter_map(GateOp::param_slot)
            .find(|&s| s >= params.len())
        {
            return Err(SimulatorError::SlotOutOfRange {
                slot,
                len: params.len(),
            }
            .into());
        }
        let mut out = state.clone();
        for gate in &self.gates {
            out.apply_gate(gate, params)?;
        }
        Ok(out)
    }

    /// The dagger circuit: gates reversed, rotation signs negated.
    pub fn inverted(&self) -> CircuitSpec {
        let gates = self
            .gates
            .iter()
            .rev()
            .map(|g| match *g {
                GateOp::Ry { qubit, slot, sign } => GateOp::Ry {
                    qubit,
                    slot,
                    sign: -sign,
                },
                ref other => other.clone(),
            })
            .collect();
        CircuitSpec {
            n_qubits: self.n_qubits,
            gates,
            n_params: self.n_params,
            architecture: format!("inverse({})", self.architecture),
            slot_labels: self.slot_labels.clone(),
        }
    }

    /// Slots whose rotation acts on `qubit`, in gate order. For TT/SC/DTT
    /// with `qubit = 1` these are exactly the first-qubit-channel parameters
    /// appearing in the gradient-norm lower bounds.
    pub fn slots_on_qubit(&self, qubit: usize) -> Vec<usize> {
        self.gates
            .iter()
            .filter_map(|g| match *g {
                GateOp::Ry { qubit: q, slot, .. } if q == qubit => Some(slot),
                _ => None,
            })
            .collect()
    }

    /// Slot whose label is θ_layer^(1), if any.
    pub fn slot_for_layer(&self, layer: usize) -> Option<usize> {
        self.slot_labels
            .iter()
            .position(|l| l.layer == layer && l.position == 1)
    }

    pub fn ry_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g, GateOp::Ry { .. }))
            .count()
    }

    pub fn cnot_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g, GateOp::Cnot { .. }))
            .count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit serialization cannot fail")
    }

    pub fn from_json(s: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// Dispatch on the architecture kind.
pub fn build(arch: &ArchitectureKind, n: usize) -> Result<CircuitSpec> {
    match *arch {
        ArchitectureKind::Tt => build_tt(n),
        ArchitectureKind::Dtt => build_dtt(n),
        ArchitectureKind::Sc { n_c } => build_sc(n, n_c),
        ArchitectureKind::Random { n_ry, n_cnot, seed } => build_random(n, n_ry, n_cnot, seed),
        ArchitectureKind::AlternatingW { layers } => build_alternating_w(n, layers),
        ArchitectureKind::EncoderU { layers } => build_encoder_u(&build_alternating_w(n, layers)?),
    }
}

/// Small builder holding the running slot assignment.
struct Builder {
    gates: Vec<GateOp>,
    labels: Vec<SlotLabel>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            gates: Vec::new(),
            labels: Vec::new(),
        }
    }

    fn ry(&mut self, qubit: usize, layer: usize, position: usize) {
        let slot = self.labels.len();
        self.gates.push(GateOp::ry(qubit, slot));
        self.labels.push(SlotLabel { layer, position });
    }

    fn cnot(&mut self, control: usize, target: usize) {
        self.gates.push(GateOp::Cnot { control, target });
    }

    fn cz(&mut self, a: usize, b: usize) {
        self.gates.push(GateOp::Cz { a, b });
    }
}

fn ceil_log2(n: usize) -> usize {
    n.next_power_of_two().trailing_zeros() as usize
}

/// Shared TT/DTT tree construction. Level ℓ pairs subtree roots
/// `t = (j−1)·2^ℓ + 1` (target, kept) with `c = t + 2^(ℓ−1)` (control,
/// merged) for every j with c ≤ n, then rotates each surviving target.
/// Roots without a partner at a level merge at the first later level that
/// reaches them.
fn tree_circuit(n: usize) -> Builder {
    let mut b = Builder::new();
    for q in 1..=n {
        b.ry(q, 1, q);
    }
    let depth = ceil_log2(n);
    for level in 1..=depth {
        let step = 1usize << level;
        let half = step >> 1;
        let targets: Vec<usize> = (0..)
            .map(|j| j * step + 1)
            .take_while(|&t| t + half <= n)
            .collect();
        for &t in &targets {
            b.cnot(t + half, t);
        }
        for (j, &t) in targets.iter().enumerate() {
            b.ry(t, level + 1, j + 1);
        }
    }
    b
}

/// Tree tensor QNN; requires a power-of-two qubit count. Yields 2n−1
/// parameters across 1 + log₂ n rotation layers.
pub fn build_tt(n: usize) -> Result<CircuitSpec> {
    if n < 2 {
        return Err(CircuitError::TooFewQubits { n, min: 2 });
    }
    if !n.is_power_of_two() {
        return Err(CircuitError::NotPowerOfTwo { n });
    }
    let b = tree_circuit(n);
    CircuitSpec::assemble(n, b.gates, b.labels, "tt".to_string())
}

/// Deformed tree tensor QNN for arbitrary n ≥ 2; identical to TT when n is
/// a power of two. Always 2n−1 parameters and n−1 CNOTs.
pub fn build_dtt(n: usize) -> Result<CircuitSpec> {
    if n < 2 {
        return Err(CircuitError::TooFewQubits { n, min: 2 });
    }
    let b = tree_circuit(n);
    CircuitSpec::assemble(n, b.gates, b.labels, "dtt".to_string())
}

/// Step controlled QNN. The first `n−1−n_c` CNOTs run between adjacent
/// channels (control n+1−ℓ, target n−ℓ); the final `n_c` CNOTs target the
/// first channel. Each CNOT is followed by one rotation on its target, so
/// the first channel carries 1 + n_c parameters.
pub fn build_sc(n: usize, n_c: usize) -> Result<CircuitSpec> {
    if n < 2 {
        return Err(CircuitError::TooFewQubits { n, min: 2 });
    }
    if n_c == 0 || n_c > n - 1 {
        return Err(CircuitError::InvalidNc { n_c, n });
    }
    let mut b = Builder::new();
    for q in 1..=n {
        b.ry(q, 1, q);
    }
    for level in 1..n {
        let control = n + 1 - level;
        let target = if level <= n - 1 - n_c { n - level } else { 1 };
        b.cnot(control, target);
        b.ry(target, level + 1, 1);
    }
    CircuitSpec::assemble(n, b.gates, b.labels, format!("sc(n_c={n_c})"))
}

/// Baseline circuit with `n_ry` rotations on uniformly random qubits and
/// `n_cnot` CNOTs on uniformly random ordered distinct pairs, interleaved
/// in uniformly random order. Deterministic for a fixed seed.
pub fn build_random(n: usize, n_ry: usize, n_cnot: usize, seed: u64) -> Result<CircuitSpec> {
    if n_ry == 0 {
        return Err(CircuitError::NoRotations);
    }
    if n < 2 && n_cnot > 0 {
        return Err(CircuitError::TooFewQubits { n, min: 2 });
    }
    if n == 0 {
        return Err(CircuitError::TooFewQubits { n, min: 1 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<bool> = std::iter::repeat_n(true, n_ry)
        .chain(std::iter::repeat_n(false, n_cnot))
        .collect();
    order.shuffle(&mut rng);
    let mut b = Builder::new();
    let mut next_rotation = 1usize;
    for is_ry in order {
        if is_ry {
            let qubit = rng.gen_range(1..=n);
            b.ry(qubit, 1, next_rotation);
            next_rotation += 1;
        } else {
            let control = rng.gen_range(1..=n);
            let mut target = rng.gen_range(1..=n - 1);
            if target >= control {
                target += 1;
            }
            b.cnot(control, target);
        }
    }
    CircuitSpec::assemble(n, b.gates, b.labels, format!("random(seed={seed})"))
}

/// CZ pairing of the encoder's inner entangling layer: (2,3), (4,5), …,
/// (n−2,n−1) plus the wrap-around pair (n,1).
fn cz_inner_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut pairs: Vec<(usize, usize)> = (1..n / 2).map(|i| (2 * i, 2 * i + 1)).collect();
    pairs.push((n, 1));
    pairs
}

/// CZ pairing of the outer entangling layer: (1,2), (3,4), …, (n−1,n).
fn cz_outer_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n / 2).map(|i| (2 * i + 1, 2 * i + 2)).collect()
}

/// Alternating-layer circuit W(β): per layer a full RY column, the inner CZ
/// pairing, another RY column, and the outer CZ pairing; one trailing RY
/// column closes the stack. n·(2L+1) parameters, labeled β_j^(k).
pub fn build_alternating_w(n: usize, layers: usize) -> Result<CircuitSpec> {
    if layers == 0 {
        return Err(CircuitError::ZeroLayers);
    }
    if !n.is_multiple_of(2) {
        return Err(CircuitError::OddQubits { n });
    }
    if n < 4 {
        return Err(CircuitError::TooFewQubits { n, min: 4 });
    }
    let mut b = Builder::new();
    let inner = cz_inner_pairs(n);
    let outer = cz_outer_pairs(n);
    for layer in 0..layers {
        for q in 1..=n {
            b.ry(q, 2 * layer + 1, q);
        }
        for &(x, y) in &inner {
            b.cz(x, y);
        }
        for q in 1..=n {
            b.ry(q, 2 * layer + 2, q);
        }
        for &(x, y) in &outer {
            b.cz(x, y);
        }
    }
    for q in 1..=n {
        b.ry(q, 2 * layers + 1, q);
    }
    CircuitSpec::assemble(n, b.gates, b.labels, format!("alternating-w(L={layers})"))
}

/// Encoding circuit U(β) = W(β)† · X^⊗n: flip every qubit of |0…0⟩, then run
/// the inverted alternating circuit. Shares W's parameter slots and labels.
pub fn build_encoder_u(w_spec: &CircuitSpec) -> Result<CircuitSpec> {
    if !w_spec.architecture.starts_with("alternating-w") {
        return Err(CircuitError::NotAlternatingLayer {
            found: w_spec.architecture.clone(),
        });
    }
    let inverse = w_spec.inverted();
    let mut gates: Vec<GateOp> = (1..=w_spec.n_qubits)
        .map(|qubit| GateOp::X { qubit })
        .collect();
    gates.extend(inverse.gates);
    CircuitSpec::assemble(
        w_spec.n_qubits,
        gates,
        w_spec.slot_labels.clone(),
        w_spec.architecture.replace("alternating-w", "encoder-u"),
    )
}
