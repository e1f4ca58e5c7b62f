//! Objective evaluation and gradients.
//!
//! The objective is `f(θ) = 1/2 + 1/2 Σᵢ wᵢ ⟨Oᵢ⟩` for weighted Pauli
//! observables with wᵢ ≥ 0, Σwᵢ = 1, so f always lands in [0, 1].
//!
//! Because every rotation uses the full-angle generator (eigenvalues ±1),
//! `∂f/∂θⱼ = f(θ + π/4·eⱼ) − f(θ − π/4·eⱼ)` holds exactly: f restricted to
//! one parameter is `a + b·cos 2θⱼ + c·sin 2θⱼ`, and the ±π/4 shift
//! difference reproduces its derivative identically, not approximately.
//! [`SHIFT`] must therefore change if and only if the rotation convention
//! in [`crate::simulator`] changes.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuits::{ArchitectureKind, CircuitError, CircuitSpec};
use crate::real::Real;
use crate::simulator::{PauliString, SimulatorError, StateVector};

/// Shift of the exact gradient rule, paired with the full-angle RY.
pub const SHIFT: f64 = std::f64::consts::FRAC_PI_4;

/// Default step of the central finite-difference oracle.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

#[derive(Debug, Error, PartialEq)]
pub enum GradientError {
    #[error("parameter vector has length {got}, circuit declares {expected}")]
    ParamLength { expected: usize, got: usize },
    #[error("observable {index} has length {got}, circuit has {expected} qubits")]
    ObservableLength {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("observable weights must be non-negative and sum to 1, got sum {sum}")]
    BadWeights { sum: f64 },
    #[error("objective needs at least one observable")]
    NoObservables,
    #[error("input state has {got} qubits, circuit has {expected}")]
    InputSize { expected: usize, got: usize },
    #[error("shot-based evaluation supports only diagonal (I/Z) observables")]
    NonDiagonalObservable,
    #[error("finite-difference step must be positive, got {h}")]
    BadStep { h: f64 },
    #[error("batch must be non-empty")]
    EmptyBatch,
    #[error("labels must be 0 or 1, got {label}")]
    BadLabel { label: u8 },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Simulator(#[from] SimulatorError),
}

pub type Result<T> = std::result::Result<T, GradientError>;

/// How objective values entering a gradient are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum EvalMode {
    Exact,
    Shots { shots: u64, seed: u64 },
}

/// Circuit plus weighted observables; the input state is supplied per call,
/// which is what the classifier loss needs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ObjectiveTemplate<T> {
    pub circuit: CircuitSpec,
    pub observables: Vec<(PauliString, T)>,
}

impl<T: Real> ObjectiveTemplate<T> {
    pub fn new(circuit: CircuitSpec, observables: Vec<(PauliString, T)>) -> Result<Self> {
        if observables.is_empty() {
            return Err(GradientError::NoObservables);
        }
        let mut sum = T::zero();
        for (index, (obs, weight)) in observables.iter().enumerate() {
            if obs.len() != circuit.n_qubits {
                return Err(GradientError::ObservableLength {
                    index,
                    expected: circuit.n_qubits,
                    got: obs.len(),
                });
            }
            if *weight < T::zero() {
                return Err(GradientError::BadWeights {
                    sum: weight.to_f64().unwrap_or(f64::NAN),
                });
            }
            sum += *weight;
        }
        if (sum - T::one()).abs() > T::of(1e-9) {
            return Err(GradientError::BadWeights {
                sum: sum.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(ObjectiveTemplate {
            circuit,
            observables,
        })
    }

    /// σ₃ on the first qubit with weight 1: the structured-QNN objective.
    pub fn z_first(circuit: CircuitSpec) -> Result<Self> {
        let obs = PauliString::z_first(circuit.n_qubits);
        Self::new(circuit, vec![(obs, T::one())])
    }

    /// Uniform 1/n weights over per-qubit σ₃: the random-QNN and encoder
    /// objective.
    pub fn uniform_z(circuit: CircuitSpec) -> Result<Self> {
        let n = circuit.n_qubits;
        let w = T::one() / T::of(n as f64);
        let observables = (1..=n)
            .map(|q| PauliString::single(n, q, crate::simulator::Pauli::Z).map(|obs| (obs, w)))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Self::new(circuit, observables)
    }

    /// The observable convention per architecture: Z on the first qubit for
    /// the structured families, the uniform per-qubit Z average otherwise.
    pub fn for_architecture(arch: &ArchitectureKind, circuit: CircuitSpec) -> Result<Self> {
        match arch {
            ArchitectureKind::Tt | ArchitectureKind::Dtt | ArchitectureKind::Sc { .. } => {
                Self::z_first(circuit)
            }
            _ => Self::uniform_z(circuit),
        }
    }

    pub fn n_params(&self) -> usize {
        self.circuit.n_params
    }

    pub fn is_diagonal(&self) -> bool {
        self.observables.iter().all(|(obs, _)| obs.is_diagonal())
    }

    fn check_theta(&self, theta: &[T]) -> Result<()> {
        if theta.len() != self.circuit.n_params {
            return Err(GradientError::ParamLength {
                expected: self.circuit.n_params,
                got: theta.len(),
            });
        }
        Ok(())
    }

    fn check_input(&self, input: &StateVector<T>) -> Result<()> {
        if input.n_qubits() != self.circuit.n_qubits {
            return Err(GradientError::InputSize {
                expected: self.circuit.n_qubits,
                got: input.n_qubits(),
            });
        }
        Ok(())
    }

    /// Exact f from the output statevector.
    pub fn value(&self, input: &StateVector<T>, theta: &[T]) -> Result<T> {
        self.check_theta(theta)?;
        self.check_input(input)?;
        let out = self.circuit.run(input, theta)?;
        let mut avg = T::zero();
        for (obs, weight) in &self.observables {
            avg += *weight * out.expectation(obs)?;
        }
        Ok((T::one() + avg) / T::of(2.0))
    }

    /// Shot-estimated f: one bitstring sample set per evaluation, shared by
    /// every observable, matching how hardware estimates them.
    pub fn value_sampled<R: Rng + ?Sized>(
        &self,
        input: &StateVector<T>,
        theta: &[T],
        shots: u64,
        rng: &mut R,
    ) -> Result<T> {
        self.check_theta(theta)?;
        self.check_input(input)?;
        if !self.is_diagonal() {
            return Err(GradientError::NonDiagonalObservable);
        }
        let out = self.circuit.run(input, theta)?;
        let counts = out.sample(shots, rng)?;
        let mut avg = T::zero();
        for (obs, weight) in &self.observables {
            avg += *weight * counts.diagonal_expectation(obs)?;
        }
        Ok((T::one() + avg) / T::of(2.0))
    }

    /// Exact parameter-shift gradient: 2·n_params circuit runs.
    pub fn shift_gradient(&self, input: &StateVector<T>, theta: &[T]) -> Result<Vec<T>> {
        self.check_theta(theta)?;
        let shift = T::of(SHIFT);
        let mut shifted = theta.to_vec();
        let mut grad = Vec::with_capacity(theta.len());
        for j in 0..theta.len() {
            shifted[j] = theta[j] + shift;
            let plus = self.value(input, &shifted)?;
            shifted[j] = theta[j] - shift;
            let minus = self.value(input, &shifted)?;
            shifted[j] = theta[j];
            grad.push(plus - minus);
        }
        Ok(grad)
    }

    /// Shot-estimated shift gradient; the two shifted evaluations of each
    /// slot draw independent sample sets.
    pub fn shift_gradient_sampled<R: Rng + ?Sized>(
        &self,
        input: &StateVector<T>,
        theta: &[T],
        shots: u64,
        rng: &mut R,
    ) -> Result<Vec<T>> {
        self.check_theta(theta)?;
        let shift = T::of(SHIFT);
        let mut shifted = theta.to_vec();
        let mut grad = Vec::with_capacity(theta.len());
        for j in 0..theta.len() {
            shifted[j] = theta[j] + shift;
            let plus = self.value_sampled(input, &shifted, shots, rng)?;
            shifted[j] = theta[j] - shift;
            let minus = self.value_sampled(input, &shifted, shots, rng)?;
            shifted[j] = theta[j];
            grad.push(plus - minus);
        }
        Ok(grad)
    }
}

/// Objective with its input state bound.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Objective<T> {
    pub template: ObjectiveTemplate<T>,
    pub input: StateVector<T>,
}

impl<T: Real> Objective<T> {
    pub fn new(
        circuit: CircuitSpec,
        observables: Vec<(PauliString, T)>,
        input: StateVector<T>,
    ) -> Result<Self> {
        let template = ObjectiveTemplate::new(circuit, observables)?;
        template.check_input(&input)?;
        Ok(Objective { template, input })
    }

    pub fn z_first(circuit: CircuitSpec, input: StateVector<T>) -> Result<Self> {
        let template = ObjectiveTemplate::z_first(circuit)?;
        template.check_input(&input)?;
        Ok(Objective { template, input })
    }

    pub fn uniform_z(circuit: CircuitSpec, input: StateVector<T>) -> Result<Self> {
        let template = ObjectiveTemplate::uniform_z(circuit)?;
        template.check_input(&input)?;
        Ok(Objective { template, input })
    }

    pub fn n_params(&self) -> usize {
        self.template.n_params()
    }

    pub fn value(&self, theta: &[T]) -> Result<T> {
        self.template.value(&self.input, theta)
    }
}

/// Gradient values with the mode that produced them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradientVector<T> {
    pub values: Vec<T>,
    pub mode: EvalMode,
}

impl<T: Real> GradientVector<T> {
    pub fn norm_sq(&self) -> T {
        self.values.iter().map(|&g| g * g).sum()
    }

    pub fn norm(&self) -> T {
        self.norm_sq().sqrt()
    }
}

/// f(θ) ∈ [0, 1].
pub fn objective_value<T: Real>(obj: &Objective<T>, theta: &[T]) -> Result<T> {
    obj.value(theta)
}

/// Exact gradient by the ±π/4 shift rule.
pub fn parameter_shift_grad<T: Real>(obj: &Objective<T>, theta: &[T]) -> Result<GradientVector<T>> {
    let values = obj.template.shift_gradient(&obj.input, theta)?;
    Ok(GradientVector {
        values,
        mode: EvalMode::Exact,
    })
}

/// Shot-estimated gradient; deterministic for a fixed seed.
pub fn parameter_shift_grad_sampled<T: Real>(
    obj: &Objective<T>,
    theta: &[T],
    shots: u64,
    seed: u64,
) -> Result<GradientVector<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = obj
        .template
        .shift_gradient_sampled(&obj.input, theta, shots, &mut rng)?;
    Ok(GradientVector {
        values,
        mode: EvalMode::Shots { shots, seed },
    })
}

/// Independent verification oracle: central differences
/// `(f(θ + h·eⱼ) − f(θ − h·eⱼ)) / 2h`.
pub fn finite_difference_grad<T: Real>(
    obj: &Objective<T>,
    theta: &[T],
    h: T,
) -> Result<GradientVector<T>> {
    if h <= T::zero() {
        return Err(GradientError::BadStep {
            h: h.to_f64().unwrap_or(f64::NAN),
        });
    }
    obj.template.check_theta(theta)?;
    let mut shifted = theta.to_vec();
    let mut values = Vec::with_capacity(theta.len());
    for j in 0..theta.len() {
        shifted[j] = theta[j] + h;
        let plus = obj.value(&shifted)?;
        shifted[j] = theta[j] - h;
        let minus = obj.value(&shifted)?;
        shifted[j] = theta[j];
        values.push((plus - minus) / (T::of(2.0) * h));
    }
    Ok(GradientVector {
        values,
        mode: EvalMode::Exact,
    })
}

fn check_batch<T: Real>(batch: &[(StateVector<T>, u8)]) -> Result<()> {
    if batch.is_empty() {
        return Err(GradientError::EmptyBatch);
    }
    for (_, label) in batch {
        if *label > 1 {
            return Err(GradientError::BadLabel { label: *label });
        }
    }
    Ok(())
}

/// Mean squared classification residual
/// `ℓ = (1/|batch|) Σᵢ (f(θ; ρᵢ) − yᵢ + b)²`.
pub fn classifier_loss<T: Real>(
    theta: &[T],
    bias: T,
    batch: &[(StateVector<T>, u8)],
    template: &ObjectiveTemplate<T>,
) -> Result<T> {
    check_batch(batch)?;
    let mut total = T::zero();
    for (state, label) in batch {
        let r = template.value(state, theta)? - T::of(*label as f64) + bias;
        total += r * r;
    }
    Ok(total / T::of(batch.len() as f64))
}

/// Chain-rule gradient of the classifier loss:
/// `∂ℓ/∂θⱼ = (2/s) Σᵢ rᵢ·∂fᵢ/∂θⱼ` and `∂ℓ/∂b = (2/s) Σᵢ rᵢ` with
/// `rᵢ = fᵢ − yᵢ + b`. Returns (∇θℓ, ∂ℓ/∂b).
pub fn classifier_loss_grad<T: Real>(
    theta: &[T],
    bias: T,
    batch: &[(StateVector<T>, u8)],
    template: &ObjectiveTemplate<T>,
    mode: EvalMode,
) -> Result<(GradientVector<T>, T)> {
    match mode {
        EvalMode::Exact => {
            let (grad, grad_b, _) =
                classifier_loss_grad_parts(theta, bias, batch, template, None, &mut None)?;
            Ok((
                GradientVector {
                    values: grad,
                    mode: EvalMode::Exact,
                },
                grad_b,
            ))
        }
        EvalMode::Shots { shots, seed } => {
            let mut rng = Some(ChaCha8Rng::seed_from_u64(seed));
            let (grad, grad_b, _) =
                classifier_loss_grad_parts(theta, bias, batch, template, Some(shots), &mut rng)?;
            Ok((GradientVector { values: grad, mode }, grad_b))
        }
    }
}

/// Shared worker also returning the batch loss at θ, so the training loop
/// logs the loss it actually descended. `shots: None` is exact mode.
pub(crate) fn classifier_loss_grad_parts<T: Real>(
    theta: &[T],
    bias: T,
    batch: &[(StateVector<T>, u8)],
    template: &ObjectiveTemplate<T>,
    shots: Option<u64>,
    rng: &mut Option<ChaCha8Rng>,
) -> Result<(Vec<T>, T, T)> {
    check_batch(batch)?;
    template.check_theta(theta)?;
    let size = T::of(batch.len() as f64);
    let two = T::of(2.0);
    let mut grad = vec![T::zero(); theta.len()];
    let mut grad_b = T::zero();
    let mut loss = T::zero();
    for (state, label) in batch {
        let f = match (shots, rng.as_mut()) {
            (Some(s), Some(r)) => template.value_sampled(state, theta, s, r)?,
            _ => template.value(state, theta)?,
        };
        let r = f - T::of(*label as f64) + bias;
        loss += r * r;
        grad_b += two * r;
        let df = match (shots, rng.as_mut()) {
            (Some(s), Some(rg)) => template.shift_gradient_sampled(state, theta, s, rg)?,
            _ => template.shift_gradient(state, theta)?,
        };
        for (g, d) in grad.iter_mut().zip(df) {
            *g += two * r * d;
        }
    }
    for g in grad.iter_mut() {
        *g /= size;
    }
    Ok((grad, grad_b / size, loss / size))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::{build_tt, CircuitSpec};
    use crate::simulator::Pauli;

    fn single_ry_objective() -> Objective<f64> {
        // one RY on one qubit, observable Z
        let gates = vec![crate::simulator::GateOp::ry(1, 0)];
        let labels = vec![crate::circuits::SlotLabel {
            layer: 1,
            position: 1,
        }];
        let circuit = CircuitSpec {
            n_qubits: 1,
            gates,
            n_params: 1,
            architecture: "ry".into(),
            slot_labels: labels,
        };
        Objective::z_first(circuit, StateVector::zero_state(1).unwrap()).unwrap()
    }

    #[test]
    fn single_ry_closed_form() {
        // f(θ) = 1/2 + 1/2 cos 2θ
        let obj = single_ry_objective();
        for theta in [0.0, 0.3, 1.2, 2.9] {
            let f = obj.value(&[theta]).unwrap();
            assert!((f - (0.5 + 0.5 * (2.0 * theta).cos())).abs() < 1e-12);
        }
    }

    #[test]
    fn shift_rule_matches_analytic_derivative() {
        let obj = single_ry_objective();
        // stationary point at θ = 0
        let g = parameter_shift_grad(&obj, &[0.0]).unwrap();
        assert!(g.values[0].abs() < 1e-12);
        // ∂f/∂θ = −sin 2θ = −sin(π/4) at θ = π/8
        let g = parameter_shift_grad(&obj, &[std::f64::consts::PI / 8.0]).unwrap();
        assert!((g.values[0] + std::f64::consts::FRAC_PI_4.sin()).abs() < 1e-12);
    }

    #[test]
    fn finite_difference_matches_analytic() {
        let obj = single_ry_objective();
        let g = finite_difference_grad(&obj, &[std::f64::consts::PI / 8.0], 1e-5).unwrap();
        assert!((g.values[0] + std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-9);
    }

    #[test]
    fn finite_difference_of_empty_circuit_is_zero() {
        let circuit = CircuitSpec {
            n_qubits: 1,
            gates: vec![],
            n_params: 0,
            architecture: "empty".into(),
            slot_labels: vec![],
        };
        let obj = Objective::z_first(circuit, StateVector::zero_state(1).unwrap()).unwrap();
        let g = finite_difference_grad(&obj, &[], 1e-5).unwrap();
        assert!(g.values.is_empty());
    }

    #[test]
    fn objective_stays_in_unit_interval() {
        let circuit = build_tt(2).unwrap();
        let obj = Objective::z_first(circuit, StateVector::zero_state(2).unwrap()).unwrap();
        assert_eq!(obj.value(&[0.0; 3]).unwrap(), 1.0);
        let f = obj.value(&[std::f64::consts::FRAC_PI_2, 0.0, 0.0]).unwrap();
        assert!(f.abs() < 1e-12);
    }

    #[test]
    fn weights_must_sum_to_one() {
        let circuit = build_tt(2).unwrap();
        let obs = vec![
            (PauliString::z_first(2), 0.5),
            (PauliString::single(2, 2, Pauli::Z).unwrap(), 0.25),
        ];
        assert!(matches!(
            ObjectiveTemplate::new(circuit, obs).unwrap_err(),
            GradientError::BadWeights { .. }
        ));
    }

    #[test]
    fn rejects_wrong_theta_length() {
        let circuit = build_tt(2).unwrap();
        let obj = Objective::z_first(circuit, StateVector::zero_state(2).unwrap()).unwrap();
        assert_eq!(
            obj.value(&[0.0]).unwrap_err(),
            GradientError::ParamLength {
                expected: 3,
                got: 1
            }
        );
    }

    #[test]
    fn classifier_loss_cases() {
        let circuit = build_tt(2).unwrap();
        let template = ObjectiveTemplate::<f64>::z_first(circuit).unwrap();
        let theta = vec![0.0; 3];
        // f(|00⟩) = 1 exactly, so label 1 with b = 0 fits perfectly
        let batch = vec![(StateVector::zero_state(2).unwrap(), 1u8)];
        let loss = classifier_loss(&theta, 0.0, &batch, &template).unwrap();
        assert!(loss.abs() < 1e-20);
        let (g, gb) =
            classifier_loss_grad(&theta, 0.0, &batch, &template, EvalMode::Exact).unwrap();
        assert!(gb.abs() < 1e-12);
        assert!(g.norm() < 1e-12);

        // single item, f = 1, y = 0, b = 0 → loss 1
        let batch = vec![(StateVector::zero_state(2).unwrap(), 0u8)];
        let loss = classifier_loss(&theta, 0.0, &batch, &template).unwrap();
        assert!((loss - 1.0).abs() < 1e-12);

        // single item with qubit 1 balanced: f = 0.5, y = 0, b = 0 → 0.25
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let balanced = StateVector::from_amplitudes(2, vec![r, 0.0, r, 0.0]).unwrap();
        let loss = classifier_loss(&theta, 0.0, &[(balanced, 0u8)], &template).unwrap();
        assert!((loss - 0.25).abs() < 1e-12);
    }

    #[test]
    fn shot_gradient_converges_to_exact_at_large_shot_counts() {
        // per-estimate binomial σ_f ≤ √(¼/shots) = 5e-4 at 10⁶ shots; each
        // gradient component combines three estimates (residual and the two
        // shifted values), so its σ stays below ~7σ_f ≈ 3.5e-3
        let circuit = build_tt(2).unwrap();
        let template = ObjectiveTemplate::<f64>::z_first(circuit).unwrap();
        let theta = vec![0.9, 2.2, 5.1];
        let bias = 0.02;
        let batch = vec![(StateVector::zero_state(2).unwrap(), 1u8)];
        let (exact, exact_b) =
            classifier_loss_grad(&theta, bias, &batch, &template, EvalMode::Exact).unwrap();
        let (shot, shot_b) = classifier_loss_grad(
            &theta,
            bias,
            &batch,
            &template,
            EvalMode::Shots {
                shots: 1_000_000,
                seed: 8,
            },
        )
        .unwrap();
        let three_sigma = 3.0 * 7.0 * (0.25f64 / 1_000_000.0).sqrt();
        for (s, e) in shot.values.iter().zip(&exact.values) {
            assert!((s - e).abs() < three_sigma, "shot {s} vs exact {e}");
        }
        assert!((shot_b - exact_b).abs() < three_sigma);
    }

    #[test]
    fn classifier_loss_arithmetic() {
        // losses are plain means of squared residuals; check by hand with
        // two basis inputs where f is 1 and 0
        let circuit = build_tt(2).unwrap();
        let template = ObjectiveTemplate::<f64>::z_first(circuit).unwrap();
        let theta = vec![0.0; 3];
        let batch = vec![
            (StateVector::basis_state(2, "00").unwrap(), 0u8), // f = 1, r = 1 + b
            (StateVector::basis_state(2, "10").unwrap(), 1u8), // f = 0, r = −1 + b
        ];
        let b = 0.1;
        let loss = classifier_loss(&theta, b, &batch, &template).unwrap();
        let want = ((1.0 + b) * (1.0 + b) + (-1.0 + b) * (-1.0 + b)) / 2.0;
        assert!((loss - want).abs() < 1e-12);
    }

    #[test]
    fn classifier_grad_matches_finite_differences() {
        let circuit = build_tt(2).unwrap();
        let template = ObjectiveTemplate::<f64>::z_first(circuit).unwrap();
        let theta = vec![0.7, 1.9, 0.4];
        let bias = 0.05;
        let batch: Vec<(StateVector<f64>, u8)> = vec![
            (StateVector::basis_state(2, "00").unwrap(), 0),
            (StateVector::basis_state(2, "01").unwrap(), 1),
            (StateVector::basis_state(2, "11").unwrap(), 1),
        ];
        let (grad, grad_b) =
            classifier_loss_grad(&theta, bias, &batch, &template, EvalMode::Exact).unwrap();
        let h = 1e-5;
        for j in 0..theta.len() {
            let mut tp = theta.clone();
            tp[j] += h;
            let mut tm = theta.clone();
            tm[j] -= h;
            let fd = (classifier_loss(&tp, bias, &batch, &template).unwrap()
                - classifier_loss(&tm, bias, &batch, &template).unwrap())
                / (2.0 * h);
            assert!((grad.values[j] - fd).abs() < 1e-8, "slot {j}");
        }
        let fd_b = (classifier_loss(&theta, bias + h, &batch, &template).unwrap()
            - classifier_loss(&theta, bias - h, &batch, &template).unwrap())
            / (2.0 * h);
        assert!((grad_b - fd_b).abs() < 1e-8);
    }

    #[test]
    fn shot_mode_is_seed_deterministic() {
        let circuit = build_tt(2).unwrap();
        let template = ObjectiveTemplate::<f64>::z_first(circuit).unwrap();
        let theta = vec![0.7, 1.9, 0.4];
        let batch = vec![(StateVector::zero_state(2).unwrap(), 1u8)];
        let mode = EvalMode::Shots {
            shots: 64,
            seed: 11,
        };
        let (a, ab) = classifier_loss_grad(&theta, 0.0, &batch, &template, mode).unwrap();
        let (b, bb) = classifier_loss_grad(&theta, 0.0, &batch, &template, mode).unwrap();
        assert_eq!(a, b);
        assert_eq!(ab, bb);
    }

    #[test]
    fn empty_batch_is_rejected() {
        let circuit = build_tt(2).unwrap();
        let template = ObjectiveTemplate::<f64>::z_first(circuit).unwrap();
        assert_eq!(
            classifier_loss(&[0.0; 3], 0.0, &[], &template).unwrap_err(),
            GradientError::EmptyBatch
        );
    }
}
