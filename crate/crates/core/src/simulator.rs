//! Real-amplitude statevector simulation.
//!
//! States are length-2^n real vectors; qubit 1 is the most significant bit
//! of the amplitude index. The gate set is {RY, X, CNOT, CZ}, which maps
//! real states to real states, so no complex storage is needed.
//!
//! RY uses the full-angle convention: `RY(θ)` is the generator exponential
//! with eigenvalues ±1, i.e. the 2×2 rotation
//! `[[cos θ, −sin θ], [sin θ, cos θ]]`. Most circuit libraries rotate by
//! θ/2 instead; the ±π/4 parameter-shift rule in [`crate::gradients`] is
//! exact only for the full-angle form, so the two must never be changed
//! independently.

use std::collections::BTreeMap;
use std::fmt;

use rand::distributions::{Distribution, Uniform};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::real::Real;

/// Tolerance on the squared norm of a state claiming to be normalized.
pub const NORM_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Error, PartialEq)]
pub enum SimulatorError {
    #[error("qubit index {qubit} out of range for {n_qubits}-qubit state (indices are 1-based)")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },
    #[error("two-qubit gate requires distinct qubits, got ({a}, {b})")]
    DuplicateQubits { a: usize, b: usize },
    #[error("parameter slot {slot} out of range for parameter vector of length {len}")]
    SlotOutOfRange { slot: usize, len: usize },
    #[error("bitstring has length {got}, expected {expected}")]
    BitstringLength { expected: usize, got: usize },
    #[error("bitstring may contain only '0' and '1', got {found:?}")]
    BadBit { found: char },
    #[error("amplitude vector has length {got}, expected 2^{n_qubits} = {expected}")]
    AmplitudeLength {
        n_qubits: usize,
        expected: usize,
        got: usize,
    },
    #[error(
        "state is not normalized: |ψ|² = {norm_sq} differs from 1 by more than {NORM_TOLERANCE}"
    )]
    NotNormalized { norm_sq: f64 },
    #[error("Pauli string has length {got}, state has {expected} qubits")]
    PauliLength { expected: usize, got: usize },
    #[error("unknown Pauli label {found:?}, expected one of I, X, Y, Z")]
    BadPauliLabel { found: char },
    #[error("shot count must be at least 1")]
    ZeroShots,
    #[error("n_qubits must be at least 1")]
    ZeroQubits,
}

pub type Result<T> = std::result::Result<T, SimulatorError>;

/// Single-qubit Pauli label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(c: char) -> Result<Self> {
        match c {
            'I' | 'i' => Ok(Pauli::I),
            'X' | 'x' => Ok(Pauli::X),
            'Y' | 'y' => Ok(Pauli::Y),
            'Z' | 'z' => Ok(Pauli::Z),
            found => Err(SimulatorError::BadPauliLabel { found }),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// A tensor product of single-qubit Paulis, one label per qubit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PauliString {
    labels: Vec<Pauli>,
}

impl PauliString {
    pub fn new(labels: Vec<Pauli>) -> Self {
        PauliString { labels }
    }

    /// Parse from a label string such as `"ZIIX"`.
    pub fn parse(s: &str) -> Result<Self> {
        let labels = s.chars().map(Pauli::from_char).collect::<Result<_>>()?;
        Ok(PauliString { labels })
    }

    /// The single Pauli `p` on qubit `qubit`, identity elsewhere.
    pub fn single(n_qubits: usize, qubit: usize, p: Pauli) -> Result<Self> {
        if qubit == 0 || qubit > n_qubits {
            return Err(SimulatorError::QubitOutOfRange { qubit, n_qubits });
        }
        let mut labels = vec![Pauli::I; n_qubits];
        labels[qubit - 1] = p;
        Ok(PauliString { labels })
    }

    /// σ₃ on the first qubit: the observable measured by every structured QNN.
    pub fn z_first(n_qubits: usize) -> Self {
        Self::single(n_qubits, 1, Pauli::Z).expect("qubit 1 always valid")
    }

    /// σ₁ on the first qubit.
    pub fn x_first(n_qubits: usize) -> Self {
        Self::single(n_qubits, 1, Pauli::X).expect("qubit 1 always valid")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Pauli] {
        &self.labels
    }

    /// True when the string contains only I and Z, so its expectation can be
    /// estimated from computational-basis shot counts.
    pub fn is_diagonal(&self) -> bool {
        self.labels.iter().all(|p| matches!(p, Pauli::I | Pauli::Z))
    }

    fn contains_y(&self) -> bool {
        self.labels.contains(&Pauli::Y)
    }

    /// Index mask of qubits carrying X (bit-flip part).
    fn x_mask(&self, n: usize) -> usize {
        let mut m = 0usize;
        for (i, p) in self.labels.iter().enumerate() {
            if *p == Pauli::X {
                m |= 1 << (n - 1 - i);
            }
        }
        m
    }

    /// Index mask of qubits carrying Z (sign part).
    fn z_mask(&self, n: usize) -> usize {
        let mut m = 0usize;
        for (i, p) in self.labels.iter().enumerate() {
            if *p == Pauli::Z {
                m |= 1 << (n - 1 - i);
            }
        }
        m
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.labels {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

/// One gate of the executable circuit form.
///
/// Qubit indices are 1-based; `slot` indexes a parameter vector; `sign`
/// multiplies the bound angle and is flipped by circuit inversion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GateOp {
    Ry { qubit: usize, slot: usize, sign: i8 },
    X { qubit: usize },
    Cnot { control: usize, target: usize },
    Cz { a: usize, b: usize },
}

impl GateOp {
    pub fn ry(qubit: usize, slot: usize) -> Self {
        GateOp::Ry {
            qubit,
            slot,
            sign: 1,
        }
    }

    /// Qubits touched by the gate.
    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            GateOp::Ry { qubit, .. } | GateOp::X { qubit } => (qubit, None),
            GateOp::Cnot { control, target } => (control, Some(target)),
            GateOp::Cz { a, b } => (a, Some(b)),
        }
    }

    pub fn param_slot(&self) -> Option<usize> {
        match *self {
            GateOp::Ry { slot, .. } => Some(slot),
            _ => None,
        }
    }

    fn validate(&self, n_qubits: usize) -> Result<()> {
        let (a, b) = self.qubits();
        for q in std::iter::once(a).chain(b) {
            if q == 0 || q > n_qubits {
                return Err(SimulatorError::QubitOutOfRange { qubit: q, n_qubits });
            }
        }
        if let Some(b) = b {
            if a == b {
                return Err(SimulatorError::DuplicateQubits { a, b });
            }
        }
        Ok(())
    }
}

/// Pure n-qubit state with real amplitudes. Qubit 1 is the most significant
/// bit of the amplitude index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateVector<T> {
    n_qubits: usize,
    amplitudes: Vec<T>,
}

impl<T: Real> StateVector<T> {
    /// |0…0⟩ on `n_qubits` qubits.
    pub fn zero_state(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(SimulatorError::ZeroQubits);
        }
        let mut amplitudes = vec![T::zero(); 1 << n_qubits];
        amplitudes[0] = T::one();
        Ok(StateVector {
            n_qubits,
            amplitudes,
        })
    }

    /// Computational basis state from a bitstring; bit i of the string is
    /// qubit i+1, so `"10"` puts qubit 1 in |1⟩.
    pub fn basis_state(n_qubits: usize, bits: &str) -> Result<Self> {
        if n_qubits == 0 {
            return Err(SimulatorError::ZeroQubits);
        }
        if bits.len() != n_qubits {
            return Err(SimulatorError::BitstringLength {
                expected: n_qubits,
                got: bits.len(),
            });
        }
        let mut index = 0usize;
        for c in bits.chars() {
            index <<= 1;
            match c {
                '0' => {}
                '1' => index |= 1,
                found => return Err(SimulatorError::BadBit { found }),
            }
        }
        let mut amplitudes = vec![T::zero(); 1 << n_qubits];
        amplitudes[index] = T::one();
        Ok(StateVector {
            n_qubits,
            amplitudes,
        })
    }

    /// Wrap raw amplitudes, enforcing length 2^n and unit norm.
    pub fn from_amplitudes(n_qubits: usize, amplitudes: Vec<T>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(SimulatorError::ZeroQubits);
        }
        let expected = 1usize << n_qubits;
        if amplitudes.len() != expected {
            return Err(SimulatorError::AmplitudeLength {
                n_qubits,
                expected,
                got: amplitudes.len(),
            });
        }
        let state = StateVector {
            n_qubits,
            amplitudes,
        };
        let norm_sq = state.norm_sq().to_f64().unwrap_or(f64::NAN);
        if (norm_sq - 1.0).abs() > NORM_TOLERANCE || norm_sq.is_nan() {
            return Err(SimulatorError::NotNormalized { norm_sq });
        }
        Ok(state)
    }

    /// Normalize an arbitrary nonzero vector into a state.
    pub fn encode_normalized(vector: &[T]) -> Result<Self> {
        let len = vector.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(SimulatorError::AmplitudeLength {
                n_qubits: 0,
                expected: 0,
                got: len,
            });
        }
        let n_qubits = len.trailing_zeros() as usize;
        let norm = vector.iter().map(|&x| x * x).sum::<T>().sqrt();
        if norm == T::zero() {
            return Err(SimulatorError::NotNormalized { norm_sq: 0.0 });
        }
        let amplitudes = vector.iter().map(|&x| x / norm).collect();
        Ok(StateVector {
            n_qubits,
            amplitudes,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[T] {
        &self.amplitudes
    }

    pub fn norm_sq(&self) -> T {
        self.amplitudes.iter().map(|&a| a * a).sum()
    }

    /// ⟨self|other⟩ for real states.
    pub fn inner(&self, other: &Self) -> T {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(&a, &b)| a * b)
            .sum()
    }

    #[inline]
    fn qubit_mask(&self, qubit: usize) -> usize {
        1 << (self.n_qubits - qubit)
    }

    /// Apply one gate in place. RY angles come from `params[slot] × sign`.
    pub fn apply_gate(&mut self, gate: &GateOp, params: &[T]) -> Result<()> {
        gate.validate(self.n_qubits)?;
        match *gate {
            GateOp::Ry { qubit, slot, sign } => {
                let angle = *params.get(slot).ok_or(SimulatorError::SlotOutOfRange {
                    slot,
                    len: params.len(),
                })?;
                let angle = if sign < 0 { -angle } else { angle };
                self.rotate_y(qubit, angle);
            }
            GateOp::X { qubit } => {
                let mask = self.qubit_mask(qubit);
                for base in 0..self.amplitudes.len() {
                    if base & mask == 0 {
                        self.amplitudes.swap(base, base | mask);
                    }
                }
            }
            GateOp::Cnot { control, target } => {
                let cmask = self.qubit_mask(control);
                let tmask = self.qubit_mask(target);
                for base in 0..self.amplitudes.len() {
                    if base & cmask != 0 && base & tmask == 0 {
                        self.amplitudes.swap(base, base | tmask);
                    }
                }
            }
            GateOp::Cz { a, b } => {
                let mask = self.qubit_mask(a) | self.qubit_mask(b);
                for (i, amp) in self.amplitudes.iter_mut().enumerate() {
                    if i & mask == mask {
                        *amp = -*amp;
                    }
                }
            }
        }
        Ok(())
    }

    fn rotate_y(&mut self, qubit: usize, angle: T) {
        let mask = self.qubit_mask(qubit);
        let (sin, cos) = angle.sin_cos();
        for base in 0..self.amplitudes.len() {
            if base & mask == 0 {
                let lo = self.amplitudes[base];
                let hi = self.amplitudes[base | mask];
                self.amplitudes[base] = cos * lo - sin * hi;
                self.amplitudes[base | mask] = sin * lo + cos * hi;
            }
        }
    }

    /// ⟨ψ|σ_(i₁,…,iₙ)|ψ⟩. Any Y label yields exactly 0 on real states (the
    /// matrix element is purely imaginary, and real expectations vanish);
    /// complex-valued operator algebra lives in [`crate::theory::densekit`].
    pub fn expectation(&self, obs: &PauliString) -> Result<T> {
        if obs.len() != self.n_qubits {
            return Err(SimulatorError::PauliLength {
                expected: self.n_qubits,
                got: obs.len(),
            });
        }
        if obs.contains_y() {
            return Ok(T::zero());
        }
        let xm = obs.x_mask(self.n_qubits);
        let zm = obs.z_mask(self.n_qubits);
        let mut acc = T::zero();
        for (i, &amp) in self.amplitudes.iter().enumerate() {
            let sign = if ((i & zm).count_ones() & 1) == 1 {
                -T::one()
            } else {
                T::one()
            };
            acc += amp * sign * self.amplitudes[i ^ xm];
        }
        Ok(acc)
    }

    /// Draw `shots` computational-basis outcomes from the Born distribution.
    pub fn sample<R: Rng + ?Sized>(&self, shots: u64, rng: &mut R) -> Result<ShotCounts> {
        if shots == 0 {
            return Err(SimulatorError::ZeroShots);
        }
        // Cumulative Born weights; the final entry absorbs rounding slack.
        let mut cumulative = Vec::with_capacity(self.amplitudes.len());
        let mut acc = T::zero();
        for &a in &self.amplitudes {
            acc += a * a;
            cumulative.push(acc);
        }
        let total = acc;
        let dist = Uniform::new(T::zero(), total);
        let mut counts: BTreeMap<String, u64> = BTreeMap::new();
        for _ in 0..shots {
            let u = dist.sample(rng);
            let idx = match cumulative
                .binary_search_by(|c| c.partial_cmp(&u).expect("amplitudes are finite"))
            {
                Ok(i) => i + 1,
                Err(i) => i,
            }
            .min(self.amplitudes.len() - 1);
            *counts.entry(self.index_to_bits(idx)).or_insert(0) += 1;
        }
        Ok(ShotCounts { counts, shots })
    }

    fn index_to_bits(&self, index: usize) -> String {
        (0..self.n_qubits)
            .map(|q| {
                if index & (1 << (self.n_qubits - 1 - q)) != 0 {
                    '1'
                } else {
                    '0'
                }
            })
            .collect()
    }
}

/// Histogram of measured bitstrings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotCounts {
    counts: BTreeMap<String, u64>,
    shots: u64,
}

impl ShotCounts {
    pub fn new(counts: BTreeMap<String, u64>) -> Self {
        let shots = counts.values().sum();
        ShotCounts { counts, shots }
    }

    pub fn counts(&self) -> &BTreeMap<String, u64> {
        &self.counts
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    /// Estimate ⟨(I+Z_qubit)/2⟩ = P(qubit reads 0), the per-qubit objective
    /// estimator used when measuring the first qubit channel.
    pub fn fraction_zero<T: Real>(&self, qubit: usize) -> Result<T> {
        if self.shots == 0 {
            return Err(SimulatorError::ZeroShots);
        }
        if qubit == 0 {
            return Err(SimulatorError::QubitOutOfRange {
                qubit,
                n_qubits: self.counts.keys().next().map_or(0, String::len),
            });
        }
        let mut zeros = 0u64;
        for (bits, &count) in &self.counts {
            match bits.chars().nth(qubit - 1) {
                Some('0') => zeros += count,
                Some('1') => {}
                _ => {
                    return Err(SimulatorError::QubitOutOfRange {
                        qubit,
                        n_qubits: bits.len(),
                    })
                }
            }
        }
        Ok(T::of(zeros as f64) / T::of(self.shots as f64))
    }

    /// Estimate the expectation of a diagonal (I/Z-only) Pauli string from
    /// the recorded outcomes.
    pub fn diagonal_expectation<T: Real>(&self, obs: &PauliString) -> Result<T> {
        if self.shots == 0 {
            return Err(SimulatorError::ZeroShots);
        }
        let mut acc = 0i64;
        for (bits, &count) in &self.counts {
            if bits.len() != obs.len() {
                return Err(SimulatorError::PauliLength {
                    expected: obs.len(),
                    got: bits.len(),
                });
            }
            let mut parity = 0u32;
            for (c, p) in bits.chars().zip(obs.labels()) {
                if *p == Pauli::Z && c == '1' {
                    parity ^= 1;
                }
            }
            acc += if parity == 1 {
                -(count as i64)
            } else {
                count as i64
            };
        }
        Ok(T::of(acc as f64) / T::of(self.shots as f64))
    }
}

/// Free-function form of [`ShotCounts::fraction_zero`].
pub fn estimate_f_from_shots<T: Real>(counts: &ShotCounts, qubit: usize) -> Result<T> {
    counts.fraction_zero(qubit)
}
