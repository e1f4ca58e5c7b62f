//! Config resolution shared by the subcommands: flags override the
//! `--config` file, which overrides defaults; the fully resolved struct is
//! snapshotted next to the outputs.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::{de::DeserializeOwned, Deserialize, Serialize};

/// File format of tabular outputs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// Load a config file if given.
pub fn load_config<C: DeserializeOwned>(path: &Option<PathBuf>) -> anyhow::Result<Option<C>> {
    match path {
        None => Ok(None),
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            let config = serde_json::from_str(&text)
                .with_context(|| format!("parsing config {}", path.display()))?;
            Ok(Some(config))
        }
    }
}

/// Write the resolved snapshot into the output directory.
pub fn write_snapshot<C: Serialize>(out_dir: &Path, config: &C) -> anyhow::Result<()> {
    fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;
    let path = out_dir.join("resolved_config.json");
    let mut text = serde_json::to_string_pretty(config)?;
    text.push('\n');
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Write one named output file.
pub fn write_output(out_dir: &Path, name: &str, contents: &str) -> anyhow::Result<PathBuf> {
    fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;
    let path = out_dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

/// Seeds are mandatory in snapshots; draw one from the OS when the user
/// did not pin it.
pub fn seed_or_random(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(rand::random)
}

/// Stable float formatting for CSV cells.
pub fn fmt_f(value: f64) -> String {
    format!("{value:.12e}")
}
