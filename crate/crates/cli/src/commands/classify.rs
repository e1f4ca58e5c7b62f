//! `qnnlab classify`: end-to-end binary classification — dataset, encoding,
//! SGD training, metrics, and the per-iteration histories the loss /
//! error / gradient-norm / alpha panels are plotted from.

use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::Args;
use serde::{Deserialize, Serialize};

use qnnlab_core::circuits::{self, ArchitectureKind};
use qnnlab_core::data::{downsample_and_filter, generate_synthetic, parse_idx, RawDataset};
use qnnlab_core::gradients::ObjectiveTemplate;
use qnnlab_core::learn::{
    encode_dataset, evaluate, train_classifier_monitored, EncodingMode, LabeledStateSet, Metrics,
    TrainConfig,
};

use crate::config::{self, fmt_f, OutputFormat};
use crate::Outcome;

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// synthetic | idx
    #[arg(long)]
    pub dataset: Option<String>,
    /// Qubit count (synthetic datasets; idx derives it from --side).
    #[arg(long)]
    pub n: Option<usize>,
    /// Samples per class per split of the synthetic dataset.
    #[arg(long = "per-class")]
    pub per_class: Option<usize>,
    /// Class separation of the synthetic dataset.
    #[arg(long)]
    pub separation: Option<f64>,
    /// IDX training images / labels and test images / labels.
    #[arg(long = "idx-train-images")]
    pub idx_train_images: Option<PathBuf>,
    #[arg(long = "idx-train-labels")]
    pub idx_train_labels: Option<PathBuf>,
    #[arg(long = "idx-test-images")]
    pub idx_test_images: Option<PathBuf>,
    #[arg(long = "idx-test-labels")]
    pub idx_test_labels: Option<PathBuf>,
    /// Class pair "a,b" to keep from the IDX label set.
    #[arg(long, value_delimiter = ',')]
    pub pair: Option<Vec<u8>>,
    /// Downsampling target side (side² = 2^n).
    #[arg(long)]
    pub side: Option<usize>,
    /// tt | dtt | sc | random
    #[arg(long)]
    pub arch: Option<String>,
    #[arg(long = "n-c")]
    pub n_c: Option<usize>,
    /// random only: copy RY/CNOT counts from this architecture (tt | sc).
    #[arg(long = "match")]
    pub match_arch: Option<String>,
    /// random only: explicit gate counts.
    #[arg(long = "n-ry")]
    pub n_ry: Option<usize>,
    #[arg(long = "n-cnot")]
    pub n_cnot: Option<usize>,
    /// exact | trained amplitude encoding.
    #[arg(long)]
    pub encoding: Option<String>,
    /// Alternating layers L of the trained encoder.
    #[arg(long = "layers", alias = "L")]
    pub layers: Option<usize>,
    #[arg(long)]
    pub iters: Option<usize>,
    #[arg(long)]
    pub batch: Option<usize>,
    /// Comma-separated decayed learning rates.
    #[arg(long = "lr-schedule", value_delimiter = ',')]
    pub lr_schedule: Option<Vec<f64>>,
    /// Measurement shots per objective estimate during training; "exact"
    /// disables sampling.
    #[arg(long = "shots-train")]
    pub shots_train: Option<String>,
    /// Measurement shots per prediction at test time; "exact" disables
    /// sampling.
    #[arg(long = "shots-test")]
    pub shots_test: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DatasetConfig {
    Synthetic {
        n: usize,
        per_class: usize,
        separation: f64,
        train_seed: u64,
        test_seed: u64,
    },
    Idx {
        train_images: String,
        train_labels: String,
        test_images: String,
        test_labels: String,
        pair: (u8, u8),
        side: usize,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ArchConfig {
    pub kind: String,
    pub n_c: Option<usize>,
    pub match_arch: Option<String>,
    pub n_ry: Option<usize>,
    pub n_cnot: Option<usize>,
    pub circuit_seed: Option<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassifyConfig {
    pub command: String,
    pub dataset: DatasetConfig,
    pub arch: ArchConfig,
    pub encoding: String,
    pub layers: usize,
    pub iterations: usize,
    pub batch_size: usize,
    pub learning_rates: Vec<f64>,
    pub shots_train: Option<u64>,
    pub shots_test: Option<u64>,
    pub seed: u64,
    pub format: OutputFormat,
}

fn parse_shots(arg: &Option<String>, fallback: Option<u64>) -> anyhow::Result<Option<u64>> {
    match arg.as_deref() {
        None => Ok(fallback),
        Some("exact") => Ok(None),
        Some(text) => Ok(Some(text.parse::<u64>().with_context(|| {
            format!("shot count {text:?} is neither an integer nor 'exact'")
        })?)),
    }
}

fn resolve(args: &ClassifyArgs, file: Option<ClassifyConfig>) -> anyhow::Result<ClassifyConfig> {
    let seed = config::seed_or_random(args.seed.or(file.as_ref().map(|c| c.seed)));
    let dataset = match args.dataset.as_deref() {
        Some("synthetic") => DatasetConfig::Synthetic {
            n: args.n.unwrap_or(4),
            per_class: args.per_class.unwrap_or(400),
            separation: args.separation.unwrap_or(4.0),
            train_seed: seed.wrapping_add(1),
            test_seed: seed.wrapping_add(2),
        },
        Some("idx") => {
            let path = |p: &Option<PathBuf>, name: &str| -> anyhow::Result<String> {
                Ok(p.as_ref()
                    .with_context(|| format!("--{name} is required for --dataset idx"))?
                    .display()
                    .to_string())
            };
            let pair = args
                .pair
                .as_ref()
                .context("--pair a,b is required for --dataset idx")?;
            if pair.len() != 2 {
                bail!("--pair wants exactly two labels");
            }
            DatasetConfig::Idx {
                train_images: path(&args.idx_train_images, "idx-train-images")?,
                train_labels: path(&args.idx_train_labels, "idx-train-labels")?,
                test_images: path(&args.idx_test_images, "idx-test-images")?,
                test_labels: path(&args.idx_test_labels, "idx-test-labels")?,
                pair: (pair[0], pair[1]),
                side: args.side.unwrap_or(16),
            }
        }
        Some(other) => bail!("unknown dataset {other:?}: expected synthetic or idx"),
        None => file
            .as_ref()
            .map(|c| c.dataset.clone())
            .context("--dataset (or --config) is required")?,
    };

    let arch = if let Some(kind) = args.arch.clone() {
        ArchConfig {
            kind,
            n_c: args.n_c,
            match_arch: args.match_arch.clone(),
            n_ry: args.n_ry,
            n_cnot: args.n_cnot,
            circuit_seed: Some(seed.wrapping_add(3)),
        }
    } else if let Some(cfg) = file.as_ref() {
        cfg.arch.clone()
    } else {
        ArchConfig {
            kind: "tt".to_string(),
            n_c: None,
            match_arch: None,
            n_ry: None,
            n_cnot: None,
            circuit_seed: Some(seed.wrapping_add(3)),
        }
    };

    let defaults = TrainConfig::<f64>::classifier_defaults(seed);
    Ok(ClassifyConfig {
        command: "classify".to_string(),
        dataset,
        arch,
        encoding: args
            .encoding
            .clone()
            .or(file.as_ref().map(|c| c.encoding.clone()))
            .unwrap_or_else(|| "exact".to_string()),
        layers: args.layers.or(file.as_ref().map(|c| c.layers)).unwrap_or(1),
        iterations: args
            .iters
            .or(file.as_ref().map(|c| c.iterations))
            .unwrap_or(defaults.iterations),
        batch_size: args
            .batch
            .or(file.as_ref().map(|c| c.batch_size))
            .unwrap_or(defaults.batch_size),
        learning_rates: args
            .lr_schedule
            .clone()
            .or(file.as_ref().map(|c| c.learning_rates.clone()))
            .unwrap_or(defaults.learning_rates),
        shots_train: parse_shots(
            &args.shots_train,
            file.as_ref()
                .map_or(defaults.shots_train, |c| c.shots_train),
        )?,
        shots_test: parse_shots(
            &args.shots_test,
            file.as_ref().map_or(defaults.shots_test, |c| c.shots_test),
        )?,
        seed,
        format: args
            .format
            .or(file.as_ref().map(|c| c.format))
            .unwrap_or_default(),
    })
}

/// The random baseline copies a structured family's gate counts
/// (2n−1 rotations, n−1 CNOTs) so the comparison is parameter-matched;
/// explicit --n-ry/--n-cnot override that.
fn resolve_architecture(cfg: &ClassifyConfig, n: usize) -> anyhow::Result<ArchitectureKind> {
    Ok(match cfg.arch.kind.as_str() {
        "tt" => ArchitectureKind::Tt,
        "dtt" => ArchitectureKind::Dtt,
        "sc" => ArchitectureKind::Sc {
            n_c: cfg.arch.n_c.context("--n-c is required for sc")?,
        },
        "random" => {
            let (n_ry, n_cnot) = match (cfg.arch.n_ry, cfg.arch.n_cnot) {
                (Some(r), Some(c)) => (r, c),
                _ => {
                    let reference = match cfg.arch.match_arch.as_deref() {
                        Some("sc") => circuits::build_sc(n, cfg.arch.n_c.unwrap_or(1))?,
                        Some("tt") | Some("dtt") | None => circuits::build_dtt(n)?,
                        Some(other) => {
                            bail!("--match expects tt, dtt or sc, got {other:?}")
                        }
                    };
                    (reference.ry_count(), reference.cnot_count())
                }
            };
            ArchitectureKind::Random {
                n_ry,
                n_cnot,
                seed: cfg.arch.circuit_seed.unwrap_or(cfg.seed.wrapping_add(3)),
            }
        }
        other => bail!("unknown architecture {other:?}: expected tt, dtt, sc or random"),
    })
}

fn load_raw(cfg: &ClassifyConfig) -> anyhow::Result<(RawDataset<f64>, RawDataset<f64>, String)> {
    match &cfg.dataset {
        DatasetConfig::Synthetic {
            n,
            per_class,
            separation,
            train_seed,
            test_seed,
        } => {
            let train = generate_synthetic::<f64>(*n, *per_class, *separation, *train_seed);
            let test = generate_synthetic::<f64>(*n, *per_class, *separation, *test_seed);
            Ok((train, test, "synthetic".to_string()))
        }
        DatasetConfig::Idx {
            train_images,
            train_labels,
            test_images,
            test_labels,
            pair,
            side,
        } => {
            let (imgs, labels) = parse_idx(train_images.as_ref(), train_labels.as_ref())?;
            let train = downsample_and_filter::<f64>(&imgs, &labels, *pair, *side)?;
            let (imgs, labels) = parse_idx(test_images.as_ref(), test_labels.as_ref())?;
            let test = downsample_and_filter::<f64>(&imgs, &labels, *pair, *side)?;
            Ok((train, test, format!("{}-{}", pair.0, pair.1)))
        }
    }
}

fn encode(
    raw: &RawDataset<f64>,
    cfg: &ClassifyConfig,
    train_cfg: &TrainConfig<f64>,
) -> anyhow::Result<LabeledStateSet<f64>> {
    let mode = match cfg.encoding.as_str() {
        "exact" => EncodingMode::Exact,
        "trained" => EncodingMode::Trained { layers: cfg.layers },
        other => bail!("unknown encoding {other:?}: expected exact or trained"),
    };
    // the per-vector encoder runs with its own protocol, not the
    // classifier's SGD settings
    let encoder_cfg = TrainConfig {
        seed: train_cfg.seed,
        ..TrainConfig::encoder_defaults(train_cfg.seed)
    };
    let (set, _) = encode_dataset(raw, mode, &encoder_cfg)?;
    Ok(set)
}

pub fn run(args: ClassifyArgs) -> anyhow::Result<Outcome> {
    let file: Option<ClassifyConfig> = config::load_config(&args.config)?;
    let resolved = resolve(&args, file)?;
    let out_dir = args.out.unwrap_or_else(crate::default_out_dir);
    config::write_snapshot(&out_dir, &resolved)?;

    let (train_raw, test_raw, pair_tag) = load_raw(&resolved)?;
    let n = train_raw.vectors[0].len().trailing_zeros() as usize;
    let arch = resolve_architecture(&resolved, n)?;
    let circuit = circuits::build(&arch, n)?;
    let template = ObjectiveTemplate::<f64>::for_architecture(&arch, circuit)?;

    let train_cfg = TrainConfig::<f64> {
        iterations: resolved.iterations,
        batch_size: resolved.batch_size,
        learning_rates: resolved.learning_rates.clone(),
        shots_train: resolved.shots_train,
        shots_test: resolved.shots_test,
        seed: resolved.seed,
    };
    let train_set = encode(&train_raw, &resolved, &train_cfg)?;
    let test_set = encode(&test_raw, &resolved, &train_cfg)?;

    let model = train_classifier_monitored(&train_set, &template, &train_cfg, Some(&test_set))?;
    let train_metrics = evaluate(&train_set, &model, resolved.shots_test, resolved.seed)?;
    let test_metrics = evaluate(&test_set, &model, resolved.shots_test, resolved.seed)?;

    println!(
        "{} n={n} pair={pair_tag}: train acc {:.4}, test acc {:.4} (F1 {:.4}, {:.4})",
        arch.tag(),
        train_metrics.accuracy,
        test_metrics.accuracy,
        test_metrics.f1_class0,
        test_metrics.f1_class1,
    );

    write_history(&out_dir, &model, &resolved)?;
    write_metrics(
        &out_dir,
        &resolved,
        &pair_tag,
        arch.tag(),
        n,
        &train_metrics,
        &test_metrics,
    )?;
    let mut model_json = serde_json::to_string_pretty(&model)?;
    model_json.push('\n');
    config::write_output(&out_dir, "model.json", &model_json)?;

    Ok(Outcome::Pass)
}

fn write_history(
    out_dir: &std::path::Path,
    model: &qnnlab_core::TrainedModel64,
    resolved: &ClassifyConfig,
) -> anyhow::Result<()> {
    match resolved.format {
        OutputFormat::Csv => {
            let mut csv = String::from("iteration,loss,test_error,grad_norm,alpha_mean\n");
            for i in 0..model.loss_history.len() {
                csv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    i,
                    fmt_f(model.loss_history[i]),
                    fmt_f(model.error_history[i]),
                    fmt_f(model.grad_norm_history[i]),
                    fmt_f(model.alpha_history[i]),
                ));
            }
            config::write_output(out_dir, "history.csv", &csv)?;
        }
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct History<'a> {
                loss: &'a [f64],
                test_error: &'a [f64],
                grad_norm: &'a [f64],
                alpha_mean: &'a [f64],
            }
            let mut text = serde_json::to_string_pretty(&History {
                loss: &model.loss_history,
                test_error: &model.error_history,
                grad_norm: &model.grad_norm_history,
                alpha_mean: &model.alpha_history,
            })?;
            text.push('\n');
            config::write_output(out_dir, "history.json", &text)?;
        }
    }
    Ok(())
}

fn write_metrics(
    out_dir: &std::path::Path,
    resolved: &ClassifyConfig,
    pair: &str,
    arch: &str,
    n: usize,
    train: &Metrics<f64>,
    test: &Metrics<f64>,
) -> anyhow::Result<()> {
    match resolved.format {
        OutputFormat::Csv => {
            let csv = format!(
                "pair,arch,n,train_acc,test_acc,f1_0,f1_1\n{pair},{arch},{n},{},{},{},{}\n",
                fmt_f(train.accuracy),
                fmt_f(test.accuracy),
                fmt_f(test.f1_class0),
                fmt_f(test.f1_class1),
            );
            config::write_output(out_dir, "metrics.csv", &csv)?;
        }
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Row<'a> {
                pair: &'a str,
                arch: &'a str,
                n: usize,
                train: &'a Metrics<f64>,
                test: &'a Metrics<f64>,
            }
            let mut text = serde_json::to_string_pretty(&Row {
                pair,
                arch,
                n,
                train,
                test,
            })?;
            text.push('\n');
            config::write_output(out_dir, "metrics.json", &text)?;
        }
    }
    Ok(())
}
