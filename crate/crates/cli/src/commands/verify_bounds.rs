//! `qnnlab verify-bounds`: gradient-norm bounds for tt/sc/dtt, or the
//! encoder alpha bound for `--arch encoder`.

use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::Args;
use serde::{Deserialize, Serialize};

use qnnlab_core::circuits::ArchitectureKind;
use qnnlab_core::simulator::StateVector;
use qnnlab_core::theory::{
    verify_encoder_alpha_bound, verify_gradient_norm_bound, BoundReport, VerifyMode, DEFAULT_BUDGET,
};

use crate::config::{self, OutputFormat};
use crate::Outcome;

#[derive(Args, Debug)]
pub struct VerifyBoundsArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// tt | sc | dtt | encoder
    #[arg(long)]
    pub arch: Option<String>,
    /// Qubit count.
    #[arg(long)]
    pub n: Option<usize>,
    /// SC only: number of CNOTs into the first qubit channel.
    #[arg(long = "n-c")]
    pub n_c: Option<usize>,
    /// Encoder only: alternating layers L.
    #[arg(long = "layers", alias = "L")]
    pub layers: Option<usize>,
    /// exact | mc
    #[arg(long)]
    pub mode: Option<String>,
    /// Monte Carlo sample count.
    #[arg(long)]
    pub samples: Option<u64>,
    /// Seed of the Monte Carlo stream.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Cap on exact-grid evaluations.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Input state: zeros | ones | basis:<bits> (gradient-norm bounds only).
    #[arg(long)]
    pub input: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyBoundsConfig {
    pub command: String,
    pub arch: String,
    pub n: usize,
    pub n_c: Option<usize>,
    pub layers: Option<usize>,
    pub mode: String,
    pub samples: u64,
    pub seed: u64,
    pub budget: u64,
    pub input: String,
    pub format: OutputFormat,
}

fn parse_input_state(spec: &str, n: usize) -> anyhow::Result<StateVector<f64>> {
    if spec == "zeros" {
        return Ok(StateVector::zero_state(n)?);
    }
    if spec == "ones" {
        return Ok(StateVector::basis_state(n, &"1".repeat(n))?);
    }
    if let Some(bits) = spec.strip_prefix("basis:") {
        return Ok(StateVector::basis_state(n, bits)?);
    }
    bail!("unknown input spec {spec:?}: expected zeros, ones or basis:<bits>");
}

pub fn run(args: VerifyBoundsArgs) -> anyhow::Result<Outcome> {
    let file: Option<VerifyBoundsConfig> = config::load_config(&args.config)?;
    let pick = |flag: Option<String>, from_file: Option<String>, default: &str| {
        flag.or(from_file).unwrap_or_else(|| default.to_string())
    };
    let resolved = VerifyBoundsConfig {
        command: "verify-bounds".to_string(),
        arch: pick(args.arch, file.as_ref().map(|c| c.arch.clone()), "tt"),
        n: args.n.or(file.as_ref().map(|c| c.n)).unwrap_or(2),
        n_c: args.n_c.or(file.as_ref().and_then(|c| c.n_c)),
        layers: args.layers.or(file.as_ref().and_then(|c| c.layers)),
        mode: pick(args.mode, file.as_ref().map(|c| c.mode.clone()), "exact"),
        samples: args
            .samples
            .or(file.as_ref().map(|c| c.samples))
            .unwrap_or(2000),
        seed: config::seed_or_random(args.seed.or(file.as_ref().map(|c| c.seed))),
        budget: args
            .budget
            .or(file.as_ref().map(|c| c.budget))
            .unwrap_or(DEFAULT_BUDGET),
        input: pick(args.input, file.as_ref().map(|c| c.input.clone()), "zeros"),
        format: args
            .format
            .or(file.as_ref().map(|c| c.format))
            .unwrap_or_default(),
    };
    let out_dir = args.out.unwrap_or_else(crate::default_out_dir);
    config::write_snapshot(&out_dir, &resolved)?;

    let mode = match resolved.mode.as_str() {
        "exact" => VerifyMode::Exact {
            budget: resolved.budget,
        },
        "mc" => VerifyMode::MonteCarlo {
            samples: resolved.samples,
            seed: resolved.seed,
        },
        other => bail!("unknown mode {other:?}: expected exact or mc"),
    };

    let report: BoundReport<f64> = match resolved.arch.as_str() {
        "encoder" => {
            let layers = resolved
                .layers
                .context("--layers is required for encoder")?;
            verify_encoder_alpha_bound(resolved.n, layers, mode)?
        }
        tag => {
            let arch = match tag {
                "tt" => ArchitectureKind::Tt,
                "dtt" => ArchitectureKind::Dtt,
                "sc" => ArchitectureKind::Sc {
                    n_c: resolved.n_c.context("--n-c is required for sc")?,
                },
                other => bail!("unknown architecture {other:?}: expected tt, sc, dtt or encoder"),
            };
            let input = parse_input_state(&resolved.input, resolved.n)?;
            verify_gradient_norm_bound(&arch, resolved.n, &input, mode)?
        }
    };

    println!(
        "{} n={}: mean {:.6} in [{:.6}, {:.6}] (stderr {:.2e}) → {}",
        report.architecture,
        report.n_qubits,
        report.estimate.mean,
        report.lower_bound,
        report.upper_bound,
        report.estimate.stderr,
        if report.satisfied {
            "satisfied"
        } else {
            "VIOLATED"
        }
    );

    match resolved.format {
        OutputFormat::Json => {
            let mut text = serde_json::to_string_pretty(&report)?;
            text.push('\n');
            config::write_output(&out_dir, "bound_report.json", &text)?;
        }
        OutputFormat::Csv => {
            let csv = format!(
                "{}\n{}\n",
                BoundReport::<f64>::csv_header(),
                report.csv_row()
            );
            config::write_output(&out_dir, "bound_report.csv", &csv)?;
        }
    }

    Ok(if report.satisfied {
        Outcome::Pass
    } else {
        Outcome::Fail
    })
}
