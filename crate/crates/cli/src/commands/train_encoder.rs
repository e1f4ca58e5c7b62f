//! `qnnlab train-encoder`: run the variational encoder for a single input
//! vector or for every vector of a synthetic dataset.

use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::Args;
use serde::{Deserialize, Serialize};

use qnnlab_core::data::generate_synthetic;
use qnnlab_core::learn::{encode_dataset, train_encoder, EncodingMode, TrainConfig};
use qnnlab_core::simulator::StateVector;
use qnnlab_core::theory::alpha;

use crate::config::{self, OutputFormat};
use crate::Outcome;

#[derive(Args, Debug)]
pub struct TrainEncoderArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// JSON file holding one input vector (array of 2^n numbers).
    #[arg(long = "input-vector")]
    pub input_vector: Option<PathBuf>,
    /// Use the first basis vector e₁ on n qubits as the input.
    #[arg(long = "basis-e1")]
    pub basis_e1: bool,
    /// Encode a synthetic dataset instead of a single vector.
    #[arg(long)]
    pub dataset: Option<String>,
    /// Qubit count (basis-e1 and synthetic inputs).
    #[arg(long)]
    pub n: Option<usize>,
    /// Samples per class of the synthetic dataset.
    #[arg(long = "per-class")]
    pub per_class: Option<usize>,
    /// Class separation of the synthetic dataset.
    #[arg(long)]
    pub separation: Option<f64>,
    /// Alternating layers L.
    #[arg(long = "layers", alias = "L")]
    pub layers: Option<usize>,
    /// Training iterations.
    #[arg(long)]
    pub iters: Option<usize>,
    /// Comma-separated decayed learning rates.
    #[arg(long = "lr-schedule", value_delimiter = ',')]
    pub lr_schedule: Option<Vec<f64>>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Skip training and use direct amplitude normalization.
    #[arg(long = "exact-encoding")]
    pub exact_encoding: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EncoderInput {
    Vector {
        path: String,
    },
    BasisE1 {
        n: usize,
    },
    Synthetic {
        n: usize,
        per_class: usize,
        separation: f64,
        seed: u64,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrainEncoderConfig {
    pub command: String,
    pub input: EncoderInput,
    pub layers: usize,
    pub iterations: usize,
    pub learning_rates: Vec<f64>,
    pub seed: u64,
    pub exact_encoding: bool,
    pub format: OutputFormat,
}

/// Everything needed to rebuild U(β*) and reproduce the encoded state.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EncoderResult {
    pub n_qubits: usize,
    pub layers: usize,
    pub mode: String,
    pub beta: Option<Vec<f64>>,
    pub fidelity: f64,
    pub alpha: f64,
    pub objective_history: Vec<f64>,
}

pub fn run(args: TrainEncoderArgs) -> anyhow::Result<Outcome> {
    let file: Option<TrainEncoderConfig> = config::load_config(&args.config)?;
    let seed = config::seed_or_random(args.seed.or(file.as_ref().map(|c| c.seed)));
    let input = if let Some(path) = &args.input_vector {
        EncoderInput::Vector {
            path: path.display().to_string(),
        }
    } else if args.basis_e1 {
        EncoderInput::BasisE1 {
            n: args.n.context("--basis-e1 requires --n")?,
        }
    } else if let Some(name) = &args.dataset {
        if name != "synthetic" {
            bail!("only the synthetic dataset is supported here, got {name:?}");
        }
        EncoderInput::Synthetic {
            n: args.n.context("--dataset synthetic requires --n")?,
            per_class: args.per_class.unwrap_or(10),
            separation: args.separation.unwrap_or(4.0),
            seed,
        }
    } else if let Some(cfg) = &file {
        cfg.input.clone()
    } else {
        bail!("one of --input-vector, --basis-e1 or --dataset is required");
    };

    let defaults = TrainConfig::<f64>::encoder_defaults(seed);
    let resolved = TrainEncoderConfig {
        command: "train-encoder".to_string(),
        input,
        layers: args.layers.or(file.as_ref().map(|c| c.layers)).unwrap_or(1),
        iterations: args
            .iters
            .or(file.as_ref().map(|c| c.iterations))
            .unwrap_or(defaults.iterations),
        learning_rates: args
            .lr_schedule
            .or(file.as_ref().map(|c| c.learning_rates.clone()))
            .unwrap_or_else(|| defaults.learning_rates.clone()),
        seed,
        exact_encoding: args.exact_encoding || file.as_ref().is_some_and(|c| c.exact_encoding),
        format: args
            .format
            .or(file.as_ref().map(|c| c.format))
            .unwrap_or_default(),
    };
    let out_dir = args.out.unwrap_or_else(crate::default_out_dir);
    config::write_snapshot(&out_dir, &resolved)?;

    let train_cfg = TrainConfig::<f64> {
        iterations: resolved.iterations,
        batch_size: 1,
        learning_rates: resolved.learning_rates.clone(),
        shots_train: None,
        shots_test: None,
        seed: resolved.seed,
    };

    match &resolved.input {
        EncoderInput::Synthetic {
            n,
            per_class,
            separation,
            seed,
        } => {
            let data = generate_synthetic::<f64>(*n, *per_class, *separation, *seed);
            let mode = if resolved.exact_encoding {
                EncodingMode::Exact
            } else {
                EncodingMode::Trained {
                    layers: resolved.layers,
                }
            };
            let (_, records) = encode_dataset(&data, mode, &train_cfg)?;
            match resolved.format {
                OutputFormat::Csv => {
                    let mut csv = String::from("index,label,fidelity,alpha,final_objective\n");
                    for (i, record) in records.iter().enumerate() {
                        csv.push_str(&format!(
                            "{},{},{},{},{}\n",
                            i,
                            data.labels[i],
                            config::fmt_f(record.fidelity),
                            config::fmt_f(record.alpha),
                            record.final_objective.map_or(String::new(), config::fmt_f),
                        ));
                    }
                    config::write_output(&out_dir, "encode_records.csv", &csv)?;
                }
                OutputFormat::Json => {
                    // full records including each vector's trained β
                    let mut text = serde_json::to_string_pretty(&records)?;
                    text.push('\n');
                    config::write_output(&out_dir, "encode_records.json", &text)?;
                }
            }
            let mean_fid = records.iter().map(|r| r.fidelity).sum::<f64>() / records.len() as f64;
            println!(
                "encoded {} vectors, mean fidelity {mean_fid:.4}",
                records.len()
            );
        }
        single => {
            let vector: Vec<f64> = match single {
                EncoderInput::Vector { path } => {
                    let text = std::fs::read_to_string(path)
                        .with_context(|| format!("reading input vector {path}"))?;
                    serde_json::from_str(&text)
                        .with_context(|| format!("parsing input vector {path}"))?
                }
                EncoderInput::BasisE1 { n } => {
                    let mut v = vec![0.0; 1 << n];
                    v[0] = 1.0;
                    v
                }
                EncoderInput::Synthetic { .. } => unreachable!("handled above"),
            };
            let result = if resolved.exact_encoding {
                let state = StateVector::encode_normalized(&vector)?;
                EncoderResult {
                    n_qubits: state.n_qubits(),
                    layers: resolved.layers,
                    mode: "exact".to_string(),
                    beta: None,
                    fidelity: 1.0,
                    alpha: alpha(&state),
                    objective_history: vec![],
                }
            } else {
                let outcome = train_encoder(&vector, resolved.layers, &train_cfg)?;
                EncoderResult {
                    n_qubits: outcome.state.n_qubits(),
                    layers: resolved.layers,
                    mode: "trained".to_string(),
                    fidelity: outcome.fidelity,
                    alpha: outcome.alpha,
                    beta: Some(outcome.beta),
                    objective_history: outcome.objective_history,
                }
            };
            println!(
                "encoder ({}): fidelity {:.6}, alpha {:.4}",
                result.mode, result.fidelity, result.alpha
            );
            let mut text = serde_json::to_string_pretty(&result)?;
            text.push('\n');
            config::write_output(&out_dir, "encoder_result.json", &text)?;
        }
    }

    Ok(Outcome::Pass)
}
