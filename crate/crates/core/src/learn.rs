//! Training: gradient descent for the encoder, minibatch SGD with a bias
//! term for the binary classifier, and evaluation metrics.

use rand::distributions::{Distribution, Uniform};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuits::{self, CircuitError};
use crate::data::RawDataset;
use crate::gradients::{classifier_loss_grad_parts, GradientError, ObjectiveTemplate};
use crate::real::Real;
use crate::simulator::{SimulatorError, StateVector};
use crate::theory::alpha;

#[derive(Debug, Error, PartialEq)]
pub enum LearnError {
    #[error("learning-rate schedule must be non-empty with positive rates")]
    BadSchedule,
    #[error("batch size {batch_size} exceeds dataset size {dataset}")]
    BatchTooLarge { batch_size: usize, dataset: usize },
    #[error("batch size must be at least 1")]
    ZeroBatch,
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("states and labels have different lengths: {states} vs {labels}")]
    LengthMismatch { states: usize, labels: usize },
    #[error("labels must be 0 or 1, got {label} at index {index}")]
    BadLabel { index: usize, label: u8 },
    #[error("dataset mixes state sizes: {a} and {b} qubits")]
    MixedSizes { a: usize, b: usize },
    #[error("input vector must be non-zero")]
    ZeroVector,
    #[error("model was trained for {expected} qubits, state has {got}")]
    ModelSize { expected: usize, got: usize },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Gradient(#[from] GradientError),
    #[error(transparent)]
    Simulator(#[from] SimulatorError),
}

pub type Result<T> = std::result::Result<T, LearnError>;

/// Iterations, batch size, the decayed learning-rate schedule (equal
/// segments over the run), shot counts (None = exact expectations), seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig<T> {
    pub iterations: usize,
    pub batch_size: usize,
    pub learning_rates: Vec<T>,
    pub shots_train: Option<u64>,
    pub shots_test: Option<u64>,
    pub seed: u64,
}

impl<T: Real> TrainConfig<T> {
    /// The classification protocol: 100 iterations, batch 20, rates
    /// {1.00, 0.75, 0.50, 0.25}, 200 training / 1000 test shots.
    pub fn classifier_defaults(seed: u64) -> Self {
        TrainConfig {
            iterations: 100,
            batch_size: 20,
            learning_rates: vec![T::of(1.0), T::of(0.75), T::of(0.5), T::of(0.25)],
            shots_train: Some(200),
            shots_test: Some(1000),
            seed,
        }
    }

    /// The encoder protocol: 100 full-gradient iterations, rates
    /// {0.100, 0.075, 0.050, 0.025}, exact expectations.
    pub fn encoder_defaults(seed: u64) -> Self {
        TrainConfig {
            iterations: 100,
            batch_size: 1,
            learning_rates: vec![T::of(0.100), T::of(0.075), T::of(0.050), T::of(0.025)],
            shots_train: None,
            shots_test: None,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.learning_rates.is_empty() || self.learning_rates.iter().any(|r| *r <= T::zero()) {
            return Err(LearnError::BadSchedule);
        }
        Ok(())
    }

    /// Rate for iteration `t`: the schedule splits [0, iterations) into
    /// equal segments, one per listed rate.
    pub fn rate_at(&self, t: usize) -> T {
        let segments = self.learning_rates.len();
        let index = (t * segments)
            .checked_div(self.iterations)
            .unwrap_or(0)
            .min(segments - 1);
        self.learning_rates[index]
    }
}

/// Encoded input states with their binary labels.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LabeledStateSet<T> {
    states: Vec<StateVector<T>>,
    labels: Vec<u8>,
}

impl<T: Real> LabeledStateSet<T> {
    pub fn new(states: Vec<StateVector<T>>, labels: Vec<u8>) -> Result<Self> {
        if states.len() != labels.len() {
            return Err(LearnError::LengthMismatch {
                states: states.len(),
                labels: labels.len(),
            });
        }
        if states.is_empty() {
            return Err(LearnError::EmptyDataset);
        }
        for (index, &label) in labels.iter().enumerate() {
            if label > 1 {
                return Err(LearnError::BadLabel { index, label });
            }
        }
        let n = states[0].n_qubits();
        if let Some(other) = states.iter().find(|s| s.n_qubits() != n) {
            return Err(LearnError::MixedSizes {
                a: n,
                b: other.n_qubits(),
            });
        }
        Ok(LabeledStateSet { states, labels })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn n_qubits(&self) -> usize {
        self.states[0].n_qubits()
    }

    pub fn states(&self) -> &[StateVector<T>] {
        &self.states
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn item(&self, index: usize) -> (&StateVector<T>, u8) {
        (&self.states[index], self.labels[index])
    }
}

/// Result of training the variational encoder for one input vector.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EncoderOutcome<T> {
    pub beta: Vec<T>,
    /// Raw objective (mean per-qubit ⟨Z⟩ of the mapped input, in [−1, 1])
    /// at each iteration before its update.
    pub objective_history: Vec<T>,
    /// |⟨x|U(β)|0…0⟩| of the final parameters.
    pub fidelity: T,
    pub alpha: T,
    /// U(β)|0…0⟩, the approximately encoded state.
    pub state: StateVector<T>,
}

/// Gradient-descend the encoder objective toward −1 for one input vector.
/// The raw mean-⟨Z⟩ objective is optimized, not its [0,1] rescaling, so the
/// gradient picks up a factor 2 relative to the template's value.
pub fn train_encoder<T: Real>(
    x_in: &[T],
    layers: usize,
    config: &TrainConfig<T>,
) -> Result<EncoderOutcome<T>> {
    config.validate()?;
    let target = StateVector::encode_normalized(x_in).map_err(|_| LearnError::ZeroVector)?;
    let n = target.n_qubits();
    let w = circuits::build_alternating_w(n, layers)?;
    let encoder = circuits::build_encoder_u(&w)?;
    let template = ObjectiveTemplate::<T>::uniform_z(w)?;

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let tau = T::of(2.0) * T::PI();
    let dist = Uniform::new(T::zero(), tau);
    let mut beta: Vec<T> = (0..template.n_params())
        .map(|_| dist.sample(&mut rng))
        .collect();

    let two = T::of(2.0);
    let mut objective_history = Vec::with_capacity(config.iterations);
    for t in 0..config.iterations {
        let value = template.value(&target, &beta)?;
        objective_history.push(two * value - T::one());
        let rate = config.rate_at(t);
        let grad = template.shift_gradient(&target, &beta)?;
        for (b, g) in beta.iter_mut().zip(grad) {
            *b -= rate * two * g;
        }
    }

    let zero = StateVector::zero_state(n)?;
    let state = encoder.run(&zero, &beta)?;
    let fidelity = target.inner(&state).abs();
    Ok(EncoderOutcome {
        alpha: alpha(&state),
        fidelity,
        beta,
        objective_history,
        state,
    })
}

/// How raw vectors become quantum states.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "encoding", rename_all = "snake_case")]
pub enum EncodingMode {
    /// Direct amplitude normalization; fidelity 1 by construction.
    Exact,
    /// Per-vector training of the variational encoder.
    Trained { layers: usize },
}

/// Per-vector record of how the encoding went; β is None in exact mode.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EncodeRecord<T> {
    pub fidelity: T,
    pub alpha: T,
    pub final_objective: Option<T>,
    pub beta: Option<Vec<T>>,
}

/// Encode a whole dataset. In trained mode each vector gets its own
/// encoder run, seeded from `config.seed` plus the vector index.
pub fn encode_dataset<T: Real>(
    data: &RawDataset<T>,
    mode: EncodingMode,
    config: &TrainConfig<T>,
) -> Result<(LabeledStateSet<T>, Vec<EncodeRecord<T>>)> {
    if data.vectors.is_empty() {
        return Err(LearnError::EmptyDataset);
    }
    let mut states = Vec::with_capacity(data.vectors.len());
    let mut records = Vec::with_capacity(data.vectors.len());
    for (index, vector) in data.vectors.iter().enumerate() {
        match mode {
            EncodingMode::Exact => {
                let state =
                    StateVector::encode_normalized(vector).map_err(|_| LearnError::ZeroVector)?;
                records.push(EncodeRecord {
                    fidelity: T::one(),
                    alpha: alpha(&state),
                    final_objective: None,
                    beta: None,
                });
                states.push(state);
            }
            EncodingMode::Trained { layers } => {
                let per_vector = TrainConfig {
                    seed: config.seed.wrapping_add(index as u64),
                    ..config.clone()
                };
                let outcome = train_encoder(vector, layers, &per_vector)?;
                records.push(EncodeRecord {
                    fidelity: outcome.fidelity,
                    alpha: outcome.alpha,
                    final_objective: outcome.objective_history.last().copied(),
                    beta: Some(outcome.beta),
                });
                states.push(outcome.state);
            }
        }
    }
    let set = LabeledStateSet::new(states, data.labels.clone())?;
    Ok((set, records))
}

/// Classifier parameters after SGD, with per-iteration logs. Histories
/// record the state at iteration start, before that step's update.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrainedModel<T> {
    pub theta: Vec<T>,
    pub bias: T,
    pub loss_history: Vec<T>,
    pub grad_norm_history: Vec<T>,
    /// Mean α(ρ) of each iteration's batch inputs.
    pub alpha_history: Vec<T>,
    /// Misclassification rate on the monitor set, when one was supplied.
    pub error_history: Vec<T>,
    pub objective: ObjectiveTemplate<T>,
    pub shots_train: Option<u64>,
    pub seed: u64,
}

/// Minibatch SGD on the squared-residual loss with trainable bias.
/// θ starts uniform in [0, 2π], b at 0; batches are drawn without
/// replacement each iteration. Shot mode estimates every objective value
/// with `shots_train` samples.
pub fn train_classifier<T: Real>(
    data: &LabeledStateSet<T>,
    template: &ObjectiveTemplate<T>,
    config: &TrainConfig<T>,
) -> Result<TrainedModel<T>> {
    train_classifier_monitored(data, template, config, None)
}

/// [`train_classifier`] that additionally scores a held-out monitor set
/// each iteration (with `shots_test`, on its own random stream), producing
/// the per-iteration error curve.
pub fn train_classifier_monitored<T: Real>(
    data: &LabeledStateSet<T>,
    template: &ObjectiveTemplate<T>,
    config: &TrainConfig<T>,
    monitor: Option<&LabeledStateSet<T>>,
) -> Result<TrainedModel<T>> {
    config.validate()?;
    if config.batch_size == 0 {
        return Err(LearnError::ZeroBatch);
    }
    if config.batch_size > data.len() {
        return Err(LearnError::BatchTooLarge {
            batch_size: config.batch_size,
            dataset: data.len(),
        });
    }

    // Independent ChaCha streams per role keep every draw reproducible and
    // insensitive to the others' consumption patterns.
    let mut init_rng = ChaCha8Rng::seed_from_u64(config.seed);
    init_rng.set_stream(0);
    let mut batch_rng = ChaCha8Rng::seed_from_u64(config.seed);
    batch_rng.set_stream(1);

    let tau = T::of(2.0) * T::PI();
    let dist = Uniform::new(T::zero(), tau);
    let mut theta: Vec<T> = (0..template.n_params())
        .map(|_| dist.sample(&mut init_rng))
        .collect();
    let mut bias = T::zero();

    let mut loss_history = Vec::with_capacity(config.iterations);
    let mut grad_norm_history = Vec::with_capacity(config.iterations);
    let mut alpha_history = Vec::with_capacity(config.iterations);
    let mut error_history = Vec::with_capacity(config.iterations);
    let mut shot_rng_opt = config.shots_train.map(|_| {
        let mut r = ChaCha8Rng::seed_from_u64(config.seed);
        r.set_stream(2);
        r
    });
    let mut monitor_rng = ChaCha8Rng::seed_from_u64(config.seed);
    monitor_rng.set_stream(4);

    for t in 0..config.iterations {
        let batch_indices =
            rand::seq::index::sample(&mut batch_rng, data.len(), config.batch_size).into_vec();
        let batch: Vec<(StateVector<T>, u8)> = batch_indices
            .iter()
            .map(|&i| {
                let (state, label) = data.item(i);
                (state.clone(), label)
            })
            .collect();
        let (grad, grad_b, loss) = classifier_loss_grad_parts(
            &theta,
            bias,
            &batch,
            template,
            config.shots_train,
            &mut shot_rng_opt,
        )?;

        let batch_alpha =
            batch.iter().map(|(state, _)| alpha(state)).sum::<T>() / T::of(batch.len() as f64);
        let grad_norm = grad.iter().map(|&g| g * g).sum::<T>().sqrt();
        loss_history.push(loss);
        grad_norm_history.push(grad_norm);
        alpha_history.push(batch_alpha);
        if let Some(set) = monitor {
            error_history.push(misclassification_rate(
                set,
                template,
                &theta,
                bias,
                config.shots_test,
                &mut monitor_rng,
            )?);
        }

        let rate = config.rate_at(t);
        for (p, g) in theta.iter_mut().zip(&grad) {
            *p -= rate * *g;
        }
        bias -= rate * grad_b;
    }

    Ok(TrainedModel {
        theta,
        bias,
        loss_history,
        grad_norm_history,
        alpha_history,
        error_history,
        objective: template.clone(),
        shots_train: config.shots_train,
        seed: config.seed,
    })
}

fn misclassification_rate<T: Real, R: Rng + ?Sized>(
    set: &LabeledStateSet<T>,
    template: &ObjectiveTemplate<T>,
    theta: &[T],
    bias: T,
    shots: Option<u64>,
    rng: &mut R,
) -> Result<T> {
    let mut wrong = 0usize;
    for index in 0..set.len() {
        let (state, label) = set.item(index);
        let f = match shots {
            Some(s) => template.value_sampled(state, theta, s, rng)?,
            None => template.value(state, theta)?,
        };
        let predicted = u8::from(f + bias >= T::of(0.5));
        if predicted != label {
            wrong += 1;
        }
    }
    Ok(T::of(wrong as f64 / set.len() as f64))
}

/// Threshold classification: class 0 iff f(ρ) + b < ½; ties go to class 1.
pub fn predict<T: Real, R: Rng + ?Sized>(
    state: &StateVector<T>,
    model: &TrainedModel<T>,
    shots: Option<u64>,
    rng: &mut R,
) -> Result<u8> {
    if state.n_qubits() != model.objective.circuit.n_qubits {
        return Err(LearnError::ModelSize {
            expected: model.objective.circuit.n_qubits,
            got: state.n_qubits(),
        });
    }
    let f = match shots {
        Some(s) => model.objective.value_sampled(state, &model.theta, s, rng)?,
        None => model.objective.value(state, &model.theta)?,
    };
    Ok(if f + model.bias < T::of(0.5) { 0 } else { 1 })
}

/// Accuracy, per-class F1 and raw confusion counts.
/// `confusion[actual][predicted]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metrics<T> {
    pub accuracy: T,
    pub f1_class0: T,
    pub f1_class1: T,
    /// False when the score's denominator was zero and 0 was reported.
    pub f1_class0_defined: bool,
    pub f1_class1_defined: bool,
    pub confusion: [[u64; 2]; 2],
}

fn f1_for<T: Real>(confusion: &[[u64; 2]; 2], positive: usize) -> (T, bool) {
    let tp = confusion[positive][positive] as f64;
    let fp = confusion[1 - positive][positive] as f64;
    let fn_ = confusion[positive][1 - positive] as f64;
    // precision is 0/0 without predicted positives, recall without actual
    // ones; either way the score is undefined and reported as flagged 0
    if tp + fp == 0.0 || tp + fn_ == 0.0 {
        (T::zero(), false)
    } else {
        (T::of(2.0 * tp / (2.0 * tp + fp + fn_)), true)
    }
}

/// Evaluate a trained model on a labeled test set. Shot-based prediction
/// uses a dedicated stream of the given seed.
pub fn evaluate<T: Real>(
    test: &LabeledStateSet<T>,
    model: &TrainedModel<T>,
    shots: Option<u64>,
    seed: u64,
) -> Result<Metrics<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(3);
    let mut confusion = [[0u64; 2]; 2];
    for index in 0..test.len() {
        let (state, label) = test.item(index);
        let predicted = predict(state, model, shots, &mut rng)?;
        confusion[label as usize][predicted as usize] += 1;
    }
    let correct = confusion[0][0] + confusion[1][1];
    let total = test.len() as f64;
    let (f1_class0, f1_class0_defined) = f1_for::<T>(&confusion, 0);
    let (f1_class1, f1_class1_defined) = f1_for::<T>(&confusion, 1);
    Ok(Metrics {
        accuracy: T::of(correct as f64 / total),
        f1_class0,
        f1_class1,
        f1_class0_defined,
        f1_class1_defined,
        confusion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::build_tt;
    use crate::data::generate_synthetic;

    #[test]
    fn rate_schedule_splits_into_equal_segments() {
        let config = TrainConfig::<f64>::classifier_defaults(0);
        assert_eq!(config.rate_at(0), 1.0);
        assert_eq!(config.rate_at(24), 1.0);
        assert_eq!(config.rate_at(25), 0.75);
        assert_eq!(config.rate_at(50), 0.5);
        assert_eq!(config.rate_at(75), 0.25);
        assert_eq!(config.rate_at(99), 0.25);
    }

    #[test]
    fn labeled_set_validates() {
        let s = StateVector::<f64>::zero_state(2).unwrap();
        assert!(matches!(
            LabeledStateSet::new(vec![s.clone()], vec![0, 1]).unwrap_err(),
            LearnError::LengthMismatch { .. }
        ));
        assert!(matches!(
            LabeledStateSet::new(vec![s.clone()], vec![2]).unwrap_err(),
            LearnError::BadLabel { .. }
        ));
        assert!(LabeledStateSet::new(vec![s], vec![1]).is_ok());
    }

    #[test]
    fn zero_iteration_training_returns_initialization() {
        let data = generate_synthetic::<f64>(4, 4, 4.0, 3);
        let (set, _) = encode_dataset(
            &data,
            EncodingMode::Exact,
            &TrainConfig::classifier_defaults(0),
        )
        .unwrap();
        let template = ObjectiveTemplate::<f64>::z_first(build_tt(4).unwrap()).unwrap();
        let config = TrainConfig {
            iterations: 0,
            batch_size: 2,
            shots_train: None,
            ..TrainConfig::classifier_defaults(5)
        };
        let model = train_classifier(&set, &template, &config).unwrap();
        assert!(model.loss_history.is_empty());
        assert!(model.grad_norm_history.is_empty());
        assert_eq!(model.bias, 0.0);
        assert_eq!(model.theta.len(), 7);
        // initialization depends only on the seed
        let again = train_classifier(&set, &template, &config).unwrap();
        assert_eq!(model.theta, again.theta);
    }

    #[test]
    fn training_is_bit_deterministic() {
        let data = generate_synthetic::<f64>(4, 10, 4.0, 3);
        let (set, _) = encode_dataset(
            &data,
            EncodingMode::Exact,
            &TrainConfig::classifier_defaults(0),
        )
        .unwrap();
        let template = ObjectiveTemplate::<f64>::z_first(build_tt(4).unwrap()).unwrap();
        let config = TrainConfig {
            iterations: 5,
            batch_size: 4,
            shots_train: Some(32),
            ..TrainConfig::classifier_defaults(17)
        };
        let a = train_classifier(&set, &template, &config).unwrap();
        let b = train_classifier(&set, &template, &config).unwrap();
        assert_eq!(a.theta, b.theta);
        assert_eq!(a.bias, b.bias);
        assert_eq!(a.loss_history, b.loss_history);
        assert_eq!(a.grad_norm_history, b.grad_norm_history);
    }

    #[test]
    fn monitored_training_tracks_error_per_iteration() {
        let data = generate_synthetic::<f64>(4, 10, 4.0, 3);
        let (set, _) = encode_dataset(
            &data,
            EncodingMode::Exact,
            &TrainConfig::classifier_defaults(0),
        )
        .unwrap();
        let template = ObjectiveTemplate::<f64>::z_first(build_tt(4).unwrap()).unwrap();
        let config = TrainConfig {
            iterations: 6,
            batch_size: 5,
            shots_train: None,
            shots_test: None,
            ..TrainConfig::classifier_defaults(23)
        };
        let model = train_classifier_monitored(&set, &template, &config, Some(&set)).unwrap();
        assert_eq!(model.error_history.len(), 6);
        for e in &model.error_history {
            assert!((0.0..=1.0).contains(e));
        }
        // unmonitored runs leave the curve empty but train identically
        let plain = train_classifier(&set, &template, &config).unwrap();
        assert!(plain.error_history.is_empty());
        assert_eq!(plain.theta, model.theta);
        assert_eq!(plain.bias, model.bias);
    }

    #[test]
    fn batch_size_larger_than_dataset_is_rejected() {
        let data = generate_synthetic::<f64>(4, 2, 4.0, 3);
        let (set, _) = encode_dataset(
            &data,
            EncodingMode::Exact,
            &TrainConfig::classifier_defaults(0),
        )
        .unwrap();
        let template = ObjectiveTemplate::<f64>::z_first(build_tt(4).unwrap()).unwrap();
        let config = TrainConfig {
            batch_size: 100,
            ..TrainConfig::classifier_defaults(0)
        };
        assert!(matches!(
            train_classifier(&set, &template, &config).unwrap_err(),
            LearnError::BatchTooLarge { .. }
        ));
    }

    #[test]
    fn logged_grad_norm_matches_recomputation_exact_mode() {
        let data = generate_synthetic::<f64>(4, 10, 4.0, 3);
        let (set, _) = encode_dataset(
            &data,
            EncodingMode::Exact,
            &TrainConfig::classifier_defaults(0),
        )
        .unwrap();
        let template = ObjectiveTemplate::<f64>::z_first(build_tt(4).unwrap()).unwrap();
        let config = TrainConfig {
            iterations: 1,
            batch_size: set.len(),
            shots_train: None,
            ..TrainConfig::classifier_defaults(11)
        };
        let model = train_classifier(&set, &template, &config).unwrap();

        // recompute at the logged θ: full-dataset batch makes it reproducible
        let mut init_rng = ChaCha8Rng::seed_from_u64(config.seed);
        init_rng.set_stream(0);
        let tau = 2.0 * std::f64::consts::PI;
        let dist = Uniform::new(0.0, tau);
        let theta0: Vec<f64> = (0..7).map(|_| dist.sample(&mut init_rng)).collect();
        let batch: Vec<_> = (0..set.len())
            .map(|i| {
                let (s, l) = set.item(i);
                (s.clone(), l)
            })
            .collect();
        let (grad, _, _) =
            classifier_loss_grad_parts(&theta0, 0.0, &batch, &template, None, &mut None).unwrap();
        let norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        assert!((model.grad_norm_history[0] - norm).abs() < 1e-10);
    }

    #[test]
    fn predict_thresholds_and_breaks_ties_to_class_one() {
        let template = ObjectiveTemplate::<f64>::z_first(build_tt(2).unwrap()).unwrap();
        let model = TrainedModel {
            theta: vec![0.0; 3],
            bias: 0.0,
            loss_history: vec![],
            grad_norm_history: vec![],
            alpha_history: vec![],
            error_history: vec![],
            objective: template,
            shots_train: None,
            seed: 0,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        // f(|00⟩) = 1 → class 1
        let s = StateVector::zero_state(2).unwrap();
        assert_eq!(predict(&s, &model, None, &mut rng).unwrap(), 1);
        // f(|10⟩) = 0 → class 0
        let s = StateVector::basis_state(2, "10").unwrap();
        assert_eq!(predict(&s, &model, None, &mut rng).unwrap(), 0);
        // f = ½ exactly (qubit 1 balanced): tie goes to class 1
        let amps = vec![
            std::f64::consts::FRAC_1_SQRT_2,
            0.0,
            std::f64::consts::FRAC_1_SQRT_2,
            0.0,
        ];
        let s = StateVector::from_amplitudes(2, amps).unwrap();
        assert_eq!(predict(&s, &model, None, &mut rng).unwrap(), 1);
    }

    #[test]
    fn metrics_handle_undefined_f1() {
        // all predicted class 1 on a balanced set: accuracy ½,
        // F1₀ undefined → 0 with flag, F1₁ = 2/3
        let confusion = [[0u64, 5], [0, 5]];
        let (f0, d0) = f1_for::<f64>(&confusion, 0);
        let (f1, d1) = f1_for::<f64>(&confusion, 1);
        assert_eq!(f0, 0.0);
        assert!(!d0);
        assert!((f1 - 2.0 / 3.0).abs() < 1e-12);
        assert!(d1);
    }

    #[test]
    fn perfect_predictions_give_unit_metrics() {
        let confusion = [[7u64, 0], [0, 3]];
        let (f0, d0) = f1_for::<f64>(&confusion, 0);
        let (f1, d1) = f1_for::<f64>(&confusion, 1);
        assert_eq!((f0, f1), (1.0, 1.0));
        assert!(d0 && d1);
    }

    #[test]
    fn encoder_rejects_zero_vector() {
        let config = TrainConfig::<f64>::encoder_defaults(0);
        assert_eq!(
            train_encoder(&[0.0; 16], 1, &config).unwrap_err(),
            LearnError::ZeroVector
        );
    }

    #[test]
    fn exact_encoding_reproduces_normalized_vectors() {
        let data = generate_synthetic::<f64>(4, 3, 4.0, 9);
        let (set, records) = encode_dataset(
            &data,
            EncodingMode::Exact,
            &TrainConfig::classifier_defaults(0),
        )
        .unwrap();
        for (i, record) in records.iter().enumerate() {
            assert_eq!(record.fidelity, 1.0);
            let norm: f64 = data.vectors[i].iter().map(|x| x * x).sum::<f64>().sqrt();
            for (a, x) in set.states()[i].amplitudes().iter().zip(&data.vectors[i]) {
                assert!((a - x / norm).abs() < 1e-12);
            }
        }
    }
}
