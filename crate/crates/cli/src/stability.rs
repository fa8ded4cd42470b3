//! `stability`: frozen-coefficient spectra over a list of grid sizes.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use burgers_core::stability::{stability_sweep, write_sweep_csv, SweepEntry};
use burgers_core::{FrozenPolicy, SweepModel};
use serde_json::json;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Frozen {
    Zero,
    Initial,
}

impl Frozen {
    fn policy(self) -> FrozenPolicy {
        match self {
            Frozen::Zero => FrozenPolicy::Zero,
            Frozen::Initial => FrozenPolicy::InitialCondition,
        }
    }
}

/// Parses `"10,17,24"`; an empty list is an error.
pub fn parse_sizes(text: &str) -> Result<Vec<usize>, CliError> {
    let sizes = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| CliError::config("invalid-sizes", format!("'{s}' is not a grid size")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if sizes.is_empty() {
        return Err(CliError::config("invalid-sizes", "the size list is empty"));
    }
    if let Some(s) = sizes.iter().find(|&&s| s < 4) {
        return Err(CliError::config("invalid-sizes", format!("sizes must be at least 4, got {s}")));
    }
    Ok(sizes)
}

pub fn run_stability(
    model: SweepModel,
    sizes: &[usize],
    nu_or_re: f64,
    frozen: Frozen,
    out_dir: &Path,
) -> Result<(Vec<SweepEntry>, serde_json::Value), CliError> {
    if sizes.is_empty() {
        return Err(CliError::config("invalid-sizes", "the size list is empty"));
    }
    if !(nu_or_re > 0.0) {
        return Err(CliError::config("invalid-value", format!("viscosity parameter must be positive, got {nu_or_re}")));
    }
    let entries = stability_sweep(model, sizes, nu_or_re, &frozen.policy())?;

    fs::create_dir_all(out_dir)?;
    let mut csv = BufWriter::new(File::create(out_dir.join("spectra.csv"))?);
    write_sweep_csv(&entries, &mut csv)?;
    csv.flush()?;

    let reports: Vec<_> = entries
        .iter()
        .map(|e| {
            json!({
                "size": e.size,
                "eigenvalues": e.report.eigenvalues.len(),
                "max_real_part": e.report.max_real_part,
                "tolerance": e.report.tolerance,
                "verdict": e.report.verdict,
            })
        })
        .collect();
    let (param, label) = match model {
        SweepModel::Burgers1d => (nu_or_re, "nu"),
        SweepModel::Coupled => (nu_or_re, "reynolds"),
    };
    let summary = json!({
        "model": model,
        label: param,
        "frozen": format!("{frozen:?}").to_lowercase(),
        "all_stable": entries.iter().all(|e| e.report.verdict),
        "reports": reports,
    });
    fs::write(out_dir.join("summary.json"), serde_json::to_string_pretty(&summary)? + "\n")?;
    Ok((entries, summary))
}
