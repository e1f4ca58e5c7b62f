//! `qnnlab lemma-check`: the 16+16 conjugation cases and the 12×trials
//! random-operator integration cases.

use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};

use qnnlab_core::theory::densekit::{
    check_cnot_conjugation, check_cz_conjugation, check_integration_identities,
};

use crate::config::{self, OutputFormat};
use crate::Outcome;

#[derive(Args, Debug)]
pub struct LemmaCheckArgs {
    /// JSON config file; explicit flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Seed for the random operator pairs (the verdict must not depend on it).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Random operator pairs per (j, k) combination.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Output directory (default $QNNLAB_OUT or the working directory).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// csv or json case list.
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LemmaCheckConfig {
    pub command: String,
    pub seed: u64,
    pub trials: usize,
    pub format: OutputFormat,
}

pub fn run(args: LemmaCheckArgs) -> anyhow::Result<Outcome> {
    let file: Option<LemmaCheckConfig> = config::load_config(&args.config)?;
    let resolved = LemmaCheckConfig {
        command: "lemma-check".to_string(),
        seed: args.seed.or(file.as_ref().map(|c| c.seed)).unwrap_or(42),
        trials: args
            .trials
            .or(file.as_ref().map(|c| c.trials))
            .unwrap_or(20),
        format: args
            .format
            .or(file.as_ref().map(|c| c.format))
            .unwrap_or_default(),
    };
    let out_dir = args.out.unwrap_or_else(crate::default_out_dir);
    config::write_snapshot(&out_dir, &resolved)?;

    let cnot = check_cnot_conjugation::<f64>();
    let cz = check_cz_conjugation::<f64>();
    let integration = check_integration_identities::<f64>(resolved.trials, resolved.seed);

    println!("check                 cases  max residual  result");
    for (name, cases, max, pass) in [
        (
            "cnot-conjugation",
            cnot.cases.len(),
            cnot.max_residual,
            cnot.all_pass,
        ),
        (
            "cz-conjugation",
            cz.cases.len(),
            cz.max_residual,
            cz.all_pass,
        ),
        (
            "integration",
            integration.cases.len(),
            integration.max_residual,
            integration.all_pass,
        ),
    ] {
        println!(
            "{name:<21} {cases:<6} {max:<13.3e} {}",
            if pass { "pass" } else { "FAIL" }
        );
    }

    match resolved.format {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Combined<'a> {
                cnot: &'a qnnlab_core::theory::densekit::ConjugationReport<f64>,
                cz: &'a qnnlab_core::theory::densekit::ConjugationReport<f64>,
                integration: &'a qnnlab_core::theory::densekit::IntegrationReport<f64>,
            }
            let mut text = serde_json::to_string_pretty(&Combined {
                cnot: &cnot,
                cz: &cz,
                integration: &integration,
            })?;
            text.push('\n');
            config::write_output(&out_dir, "lemma_check.json", &text)?;
        }
        OutputFormat::Csv => {
            let mut csv = String::from("check,j,k,residual_plain,residual_deriv,pass\n");
            for report in [&cnot, &cz] {
                for case in &report.cases {
                    csv.push_str(&format!(
                        "{}-conjugation,{},{},{},,{}\n",
                        report.gate,
                        case.j,
                        case.k,
                        config::fmt_f(case.residual),
                        case.pass
                    ));
                }
            }
            for case in &integration.cases {
                csv.push_str(&format!(
                    "integration,{},{},{},{},{}\n",
                    case.pauli_j,
                    case.axis_k,
                    config::fmt_f(case.residual_plain),
                    config::fmt_f(case.residual_deriv),
                    case.pass
                ));
            }
            config::write_output(&out_dir, "lemma_check.csv", &csv)?;
        }
    }

    Ok(if cnot.all_pass && cz.all_pass && integration.all_pass {
        Outcome::Pass
    } else {
        Outcome::Fail
    })
}
