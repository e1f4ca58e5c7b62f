//! Expectations over uniformly distributed parameters, and the verifiers
//! for the gradient-norm bounds.
//!
//! The central device: restricted to any single parameter, the objective is
//! a trigonometric polynomial of degree ≤ 2 (each parameter enters exactly
//! one rotation), so its squares and squared shift-rule derivatives have
//! degree ≤ 4. An equispaced N-point rule integrates trigonometric
//! polynomials of degree ≤ N−1 exactly, hence a 5-point tensor grid turns
//! every "expectation over uniform angles" here into a finite *exact* sum.
//! Monte Carlo covers the parameter counts the grid cannot afford.

pub mod densekit;

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuits::{self, ArchitectureKind, CircuitError};
use crate::gradients::{GradientError, Objective};
use crate::real::Real;
use crate::simulator::{PauliString, SimulatorError, StateVector};

/// Grid points per parameter: exact for trig degree ≤ 4.
pub const GRID_POINTS: u32 = 5;
/// Highest per-parameter trig degree of any verified quantity.
pub const MAX_TRIG_DEGREE: u32 = 4;
/// Default cap on exact-grid evaluations before refusing.
pub const DEFAULT_BUDGET: u64 = 10_000_000;
/// Exact-mode tolerance of the derivative equality checks.
pub const EQUALITY_TOL: f64 = 1e-10;

#[derive(Debug, Error, PartialEq)]
pub enum TheoryError {
    #[error(
        "exact grid needs {required} evaluations, over the budget of {budget}; \
         use Monte Carlo for this instance"
    )]
    BudgetExceeded { required: u64, budget: u64 },
    #[error("Monte Carlo needs at least 2 samples, got {samples}")]
    TooFewSamples { samples: u64 },
    #[error("gradient-norm bounds are defined for tt, sc and dtt, got {found}")]
    UnsupportedArchitecture { found: String },
    #[error("layer {layer} does not hold a first-qubit-channel parameter for this architecture")]
    NotFirstChannel { layer: usize },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Gradient(#[from] GradientError),
    #[error(transparent)]
    Simulator(#[from] SimulatorError),
}

pub type Result<T> = std::result::Result<T, TheoryError>;

/// Estimate (or exact value) of an expectation over uniform parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectationReport<T> {
    pub mean: T,
    /// Zero in exact-grid mode.
    pub stderr: T,
    pub mode: ExpectationMode,
    pub evaluations: u64,
    pub seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExpectationMode {
    ExactGrid,
    MonteCarlo,
}

impl std::fmt::Display for ExpectationMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExpectationMode::ExactGrid => write!(f, "exact"),
            ExpectationMode::MonteCarlo => write!(f, "mc"),
        }
    }
}

/// How a verifier should take its expectation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum VerifyMode {
    Exact { budget: u64 },
    MonteCarlo { samples: u64, seed: u64 },
}

impl VerifyMode {
    pub fn exact() -> Self {
        VerifyMode::Exact {
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Compensated accumulator: grid sums reach ~5⁷ terms and the equality
/// checks compare them at 1e-10, which plain summation would eat into.
struct KahanSum<T> {
    sum: T,
    carry: T,
}

impl<T: Real> KahanSum<T> {
    fn new() -> Self {
        KahanSum {
            sum: T::zero(),
            carry: T::zero(),
        }
    }

    fn add(&mut self, value: T) {
        let y = value - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }
}

/// Iterate the full equispaced grid, handing each angle tuple to `visit`.
fn for_each_grid_point<T: Real>(
    n_params: usize,
    n_points: u32,
    budget: u64,
    mut visit: impl FnMut(&[T]),
) -> Result<u64> {
    let total = (n_points as u64)
        .checked_pow(n_params as u32)
        .filter(|&t| t <= budget)
        .ok_or(TheoryError::BudgetExceeded {
            required: (n_points as u64)
                .checked_pow(n_params as u32)
                .unwrap_or(u64::MAX),
            budget,
        })?;
    let nodes: Vec<T> = (0..n_points)
        .map(|i| T::of(2.0) * T::PI() * T::of(i as f64) / T::of(n_points as f64))
        .collect();
    let mut index = vec![0u32; n_params];
    let mut theta = vec![nodes[0]; n_params];
    for _ in 0..total {
        visit(&theta);
        for slot in 0..n_params {
            index[slot] += 1;
            if index[slot] < n_points {
                theta[slot] = nodes[index[slot] as usize];
                break;
            }
            index[slot] = 0;
            theta[slot] = nodes[0];
        }
    }
    Ok(total)
}

/// Exact expectation of `f` over uniform [0,2π) parameters, provided `f` is
/// a trig polynomial of degree ≤ `max_trig_degree` in each parameter
/// separately. Costs (degree+1)^n_params evaluations.
pub fn exact_param_expectation<T: Real>(
    mut f: impl FnMut(&[T]) -> T,
    n_params: usize,
    max_trig_degree: u32,
    budget: u64,
) -> Result<ExpectationReport<T>> {
    let n_points = max_trig_degree + 1;
    let mut acc = KahanSum::new();
    let total = for_each_grid_point(n_params, n_points, budget, |theta| acc.add(f(theta)))?;
    Ok(ExpectationReport {
        mean: acc.sum / T::of(total as f64),
        stderr: T::zero(),
        mode: ExpectationMode::ExactGrid,
        evaluations: total,
        seed: None,
    })
}

/// Monte Carlo estimate of the same expectation, i.i.d. uniform draws.
pub fn mc_param_expectation<T: Real>(
    mut f: impl FnMut(&[T]) -> T,
    n_params: usize,
    samples: u64,
    seed: u64,
) -> Result<ExpectationReport<T>> {
    if samples < 2 {
        return Err(TheoryError::TooFewSamples { samples });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tau = T::of(2.0) * T::PI();
    let dist = Uniform::new(T::zero(), tau);
    let mut theta = vec![T::zero(); n_params];
    let mut mean = T::zero();
    let mut m2 = T::zero();
    for i in 0..samples {
        for slot in theta.iter_mut() {
            *slot = dist.sample(&mut rng);
        }
        let value = f(&theta);
        let count = T::of((i + 1) as f64);
        let delta = value - mean;
        mean += delta / count;
        m2 += delta * (value - mean);
    }
    let n = T::of(samples as f64);
    let stderr = (m2 / (n - T::one()) / n).sqrt();
    Ok(ExpectationReport {
        mean,
        stderr,
        mode: ExpectationMode::MonteCarlo,
        evaluations: samples,
        seed: Some(seed),
    })
}

/// α(ρ) = ⟨X₁⟩² + ⟨Z₁⟩², the input-dependent factor of every lower bound.
/// Equals 1 for any real product state and for |0…0⟩ in particular.
pub fn alpha<T: Real>(state: &StateVector<T>) -> T {
    let n = state.n_qubits();
    let x = state
        .expectation(&PauliString::x_first(n))
        .expect("matching length by construction");
    let z = state
        .expectation(&PauliString::z_first(n))
        .expect("matching length by construction");
    x * x + z * z
}

/// A verified two-sided bound on an expectation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundReport<T> {
    pub architecture: String,
    pub n_qubits: usize,
    pub n_c: Option<usize>,
    pub layers: Option<usize>,
    /// α(ρ_in) of the verified input; None for the encoder bound,
    /// where α is the averaged quantity itself.
    pub alpha: Option<T>,
    pub lower_bound: T,
    pub upper_bound: T,
    pub estimate: ExpectationReport<T>,
    pub satisfied: bool,
}

impl<T: Real> BoundReport<T> {
    fn evaluate(mut self) -> Self {
        let three = T::of(3.0);
        let slack = three * self.estimate.stderr + T::of(1e-12);
        self.satisfied = self.lower_bound - slack <= self.estimate.mean
            && self.estimate.mean <= self.upper_bound + slack;
        self
    }

    pub fn csv_header() -> &'static str {
        "arch,n,n_c,layers,mode,mean,stderr,lower,upper,alpha,satisfied,seed"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.architecture,
            self.n_qubits,
            self.n_c.map_or(String::new(), |v| v.to_string()),
            self.layers.map_or(String::new(), |v| v.to_string()),
            self.estimate.mode,
            fmt_float(self.estimate.mean),
            fmt_float(self.estimate.stderr),
            fmt_float(self.lower_bound),
            fmt_float(self.upper_bound),
            self.alpha.map_or(String::new(), fmt_float),
            self.satisfied,
            self.estimate.seed.map_or(String::new(), |s| s.to_string()),
        )
    }
}

fn fmt_float<T: Real>(v: T) -> String {
    format!("{:.12e}", v.to_f64().unwrap_or(f64::NAN))
}

fn log2(n: usize) -> f64 {
    (n as f64).log2()
}

/// Theoretical lower bound on E‖∇f‖² for a structured architecture with
/// input factor α: (1+log₂n)/(2n), (1+n_c)/2^(1+n_c), (1+log₂n)/(4n) for
/// TT, SC, DTT respectively, each times α.
pub fn gradient_norm_lower_bound<T: Real>(
    arch: &ArchitectureKind,
    n: usize,
    alpha: T,
) -> Result<T> {
    let factor = match *arch {
        ArchitectureKind::Tt => (1.0 + log2(n)) / (2.0 * n as f64),
        ArchitectureKind::Dtt => (1.0 + log2(n)) / (4.0 * n as f64),
        ArchitectureKind::Sc { n_c } => (1.0 + n_c as f64) / f64::powi(2.0, 1 + n_c as i32),
        ref other => {
            return Err(TheoryError::UnsupportedArchitecture {
                found: other.tag().to_string(),
            })
        }
    };
    Ok(T::of(factor) * alpha)
}

fn squared_gradient_norm<T: Real>(obj: &Objective<T>) -> impl FnMut(&[T]) -> T + '_ {
    let shift = T::of(crate::gradients::SHIFT);
    let n_params = obj.n_params();
    let mut shifted = vec![T::zero(); n_params];
    move |theta: &[T]| {
        shifted.copy_from_slice(theta);
        let mut acc = T::zero();
        for j in 0..n_params {
            shifted[j] = theta[j] + shift;
            let plus = obj.value(&shifted).expect("validated objective");
            shifted[j] = theta[j] - shift;
            let minus = obj.value(&shifted).expect("validated objective");
            shifted[j] = theta[j];
            let d = plus - minus;
            acc += d * d;
        }
        acc
    }
}

fn expectation_of<T: Real>(
    f: impl FnMut(&[T]) -> T,
    n_params: usize,
    mode: VerifyMode,
) -> Result<ExpectationReport<T>> {
    match mode {
        VerifyMode::Exact { budget } => {
            exact_param_expectation(f, n_params, MAX_TRIG_DEGREE, budget)
        }
        VerifyMode::MonteCarlo { samples, seed } => {
            mc_param_expectation(f, n_params, samples, seed)
        }
    }
}

/// Verify lower ≤ E_θ‖∇f‖² ≤ 2n−1 for a structured architecture on the
/// given input state.
pub fn verify_gradient_norm_bound<T: Real>(
    arch: &ArchitectureKind,
    n: usize,
    input: &StateVector<T>,
    mode: VerifyMode,
) -> Result<BoundReport<T>> {
    let circuit = circuits::build(arch, n)?;
    let a = alpha(input);
    let lower_bound = gradient_norm_lower_bound(arch, n, a)?;
    let upper_bound = T::of((2 * n - 1) as f64);
    let objective = Objective::z_first(circuit, input.clone())?;
    let n_params = objective.n_params();
    let estimate = expectation_of(squared_gradient_norm(&objective), n_params, mode)?;
    Ok(BoundReport {
        architecture: arch.tag().to_string(),
        n_qubits: n,
        n_c: match *arch {
            ArchitectureKind::Sc { n_c } => Some(n_c),
            _ => None,
        },
        layers: None,
        alpha: Some(a),
        lower_bound,
        upper_bound,
        estimate,
        satisfied: false,
    }
    .evaluate())
}

/// Both sides of the first-channel derivative identity
/// E(∂f/∂θ_j^(1))² = 4·E(f−½)².
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EqualityReport<T> {
    pub architecture: String,
    pub n_qubits: usize,
    pub layer: usize,
    pub slot: usize,
    pub lhs: ExpectationReport<T>,
    pub rhs: ExpectationReport<T>,
    pub residual: T,
    pub tolerance: T,
    pub satisfied: bool,
}

/// Check E(∂f/∂θ_j^(1))² = 4E(f−½)² for the first-channel parameter of
/// layer `layer`. Valid layers are those whose leading rotation sits on
/// qubit 1: all layers for TT/DTT, layer 1 and the last n_c layers for SC.
pub fn verify_derivative_equality<T: Real>(
    arch: &ArchitectureKind,
    n: usize,
    layer: usize,
    input: &StateVector<T>,
    mode: VerifyMode,
) -> Result<EqualityReport<T>> {
    match arch {
        ArchitectureKind::Tt | ArchitectureKind::Dtt | ArchitectureKind::Sc { .. } => {}
        other => {
            return Err(TheoryError::UnsupportedArchitecture {
                found: other.tag().to_string(),
            })
        }
    }
    let circuit = circuits::build(arch, n)?;
    let slot = circuit
        .slot_for_layer(layer)
        .filter(|s| circuit.slots_on_qubit(1).contains(s))
        .ok_or(TheoryError::NotFirstChannel { layer })?;
    let objective = Objective::z_first(circuit, input.clone())?;
    let n_params = objective.n_params();
    let shift = T::of(crate::gradients::SHIFT);
    let half = T::of(0.5);
    let four = T::of(4.0);

    let mut shifted = vec![T::zero(); n_params];
    let both = |theta: &[T], shifted: &mut Vec<T>| {
        shifted.copy_from_slice(theta);
        shifted[slot] = theta[slot] + shift;
        let plus = objective.value(shifted).expect("validated objective");
        shifted[slot] = theta[slot] - shift;
        let minus = objective.value(shifted).expect("validated objective");
        shifted[slot] = theta[slot];
        let d = plus - minus;
        let f = objective.value(theta).expect("validated objective");
        (d * d, four * (f - half) * (f - half))
    };

    let (lhs, rhs, diff) = match mode {
        VerifyMode::Exact { budget } => {
            let mut acc_l = KahanSum::new();
            let mut acc_r = KahanSum::new();
            let total = for_each_grid_point(n_params, GRID_POINTS, budget, |theta: &[T]| {
                let (l, r) = both(theta, &mut shifted);
                acc_l.add(l);
                acc_r.add(r);
            })?;
            let scale = T::of(total as f64);
            let lhs = ExpectationReport {
                mean: acc_l.sum / scale,
                stderr: T::zero(),
                mode: ExpectationMode::ExactGrid,
                evaluations: total,
                seed: None,
            };
            let rhs = ExpectationReport {
                mean: acc_r.sum / scale,
                stderr: T::zero(),
                mode: ExpectationMode::ExactGrid,
                evaluations: total,
                seed: None,
            };
            (lhs, rhs, T::zero())
        }
        VerifyMode::MonteCarlo { samples, seed } => {
            // one shared stream: lhs, rhs and their difference are
            // estimated on the same parameter draws
            if samples < 2 {
                return Err(TheoryError::TooFewSamples { samples });
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let tau = T::of(2.0) * T::PI();
            let dist = Uniform::new(T::zero(), tau);
            let mut theta = vec![T::zero(); n_params];
            let mut stats = [(T::zero(), T::zero()); 3];
            for i in 0..samples {
                for t in theta.iter_mut() {
                    *t = dist.sample(&mut rng);
                }
                let (l, r) = both(&theta, &mut shifted);
                let count = T::of((i + 1) as f64);
                for (value, slot_stats) in [l, r, l - r].into_iter().zip(stats.iter_mut()) {
                    let delta = value - slot_stats.0;
                    slot_stats.0 += delta / count;
                    slot_stats.1 += delta * (value - slot_stats.0);
                }
            }
            let count = T::of(samples as f64);
            let to_report = |(mean, m2): (T, T)| ExpectationReport {
                mean,
                stderr: (m2 / (count - T::one()) / count).sqrt(),
                mode: ExpectationMode::MonteCarlo,
                evaluations: samples,
                seed: Some(seed),
            };
            (
                to_report(stats[0]),
                to_report(stats[1]),
                (stats[2].1 / (count - T::one()) / count).sqrt(),
            )
        }
    };

    let residual = (lhs.mean - rhs.mean).abs();
    let tolerance = match mode {
        VerifyMode::Exact { .. } => T::of(EQUALITY_TOL),
        VerifyMode::MonteCarlo { .. } => T::of(3.0) * diff,
    };
    Ok(EqualityReport {
        architecture: arch.tag().to_string(),
        n_qubits: n,
        layer,
        slot,
        satisfied: residual <= tolerance,
        lhs,
        rhs,
        residual,
        tolerance,
    })
}

/// Verify E_β α(U(β)|0…0⟩) ≥ 2^(−2L) for the L-layer encoding circuit.
pub fn verify_encoder_alpha_bound<T: Real>(
    n: usize,
    layers: usize,
    mode: VerifyMode,
) -> Result<BoundReport<T>> {
    let w = circuits::build_alternating_w(n, layers)?;
    let encoder = circuits::build_encoder_u(&w)?;
    let zero = StateVector::zero_state(n)?;
    let n_params = encoder.n_params;
    let f = |beta: &[T]| {
        let state = encoder.run(&zero, beta).expect("validated circuit");
        alpha(&state)
    };
    let estimate = expectation_of(f, n_params, mode)?;
    let lower_bound = T::of(f64::powi(0.5, 2 * layers as i32));
    Ok(BoundReport {
        architecture: "encoder-u".to_string(),
        n_qubits: n,
        n_c: None,
        layers: Some(layers),
        alpha: None,
        lower_bound,
        upper_bound: T::one(),
        estimate,
        satisfied: false,
    }
    .evaluate())
}

/// One row of the structured-vs-random gradient-norm comparison.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ContrastRow<T> {
    pub architecture: String,
    pub n_qubits: usize,
    pub n_ry: usize,
    pub n_cnot: usize,
    pub estimate: ExpectationReport<T>,
    pub lower_bound: Option<T>,
}

impl<T: Real> ContrastRow<T> {
    pub fn csv_header() -> &'static str {
        "arch,n,n_ry,n_cnot,mean,stderr,samples,lower,seed"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.architecture,
            self.n_qubits,
            self.n_ry,
            self.n_cnot,
            fmt_float(self.estimate.mean),
            fmt_float(self.estimate.stderr),
            self.estimate.evaluations,
            self.lower_bound.map_or(String::new(), fmt_float),
            self.estimate.seed.map_or(String::new(), |s| s.to_string()),
        )
    }
}

/// Monte Carlo E‖∇f‖² for structured circuits against deep random circuits
/// with `depth_factor·n²` rotations and as many CNOTs. Structured rows use
/// the first-qubit observable and carry their theoretical lower bound;
/// random rows use the uniform per-qubit Z average.
pub fn barren_plateau_contrast<T: Real>(
    n_list: &[usize],
    depth_factor: usize,
    samples: u64,
    seed: u64,
) -> Result<Vec<ContrastRow<T>>> {
    let mut rows = Vec::new();
    for (i, &n) in n_list.iter().enumerate() {
        let zero = StateVector::zero_state(n)?;
        let structured_arch = if n.is_power_of_two() {
            ArchitectureKind::Tt
        } else {
            ArchitectureKind::Dtt
        };
        let circuit = circuits::build(&structured_arch, n)?;
        let (n_ry, n_cnot) = (circuit.ry_count(), circuit.cnot_count());
        let objective = Objective::z_first(circuit, zero.clone())?;
        let n_params = objective.n_params();
        let estimate = mc_param_expectation(
            squared_gradient_norm(&objective),
            n_params,
            samples,
            seed.wrapping_add(2 * i as u64),
        )?;
        rows.push(ContrastRow {
            architecture: structured_arch.tag().to_string(),
            n_qubits: n,
            n_ry,
            n_cnot,
            lower_bound: Some(gradient_norm_lower_bound(
                &structured_arch,
                n,
                alpha(&zero),
            )?),
            estimate,
        });

        let gates = depth_factor * n * n;
        let random = circuits::build_random(n, gates, gates, seed.wrapping_add(1000 + i as u64))?;
        let objective = Objective::uniform_z(random, zero)?;
        let n_params = objective.n_params();
        let estimate = mc_param_expectation(
            squared_gradient_norm(&objective),
            n_params,
            samples,
            seed.wrapping_add(2 * i as u64 + 1),
        )?;
        rows.push(ContrastRow {
            architecture: "random".to_string(),
            n_qubits: n,
            n_ry: gates,
            n_cnot: gates,
            lower_bound: None,
            estimate,
        });
    }
    Ok(rows)
}
