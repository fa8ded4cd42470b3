//! Run configuration: a JSON document (file or stdin) overlaid with flags.

use std::io::Read;
use std::path::{Path, PathBuf};

use burgers_core::{CaseId, CaseParams, TimeConfig};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const DEFAULT_SAMPLE_EVERY: usize = 100;
pub const DEFAULT_OUTPUT_DIR: &str = "out";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Burgers1d,
    Burgers2d,
    Coupled,
}

impl Model {
    pub fn of_case(case: CaseId) -> Self {
        match case {
            CaseId::Wood1d | CaseId::Fourier1d | CaseId::Zero1d => Model::Burgers1d,
            CaseId::Burgers2d => Model::Burgers2d,
            CaseId::Coupled => Model::Coupled,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Model::Burgers1d => "burgers1d",
            Model::Burgers2d => "burgers2d",
            Model::Coupled => "coupled",
        }
    }
}

/// Every field optional, for merging a file with command-line flags.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigInput {
    pub model: Option<Model>,
    pub case_id: Option<String>,
    pub m_nodes: Option<usize>,
    pub mx: Option<usize>,
    pub my: Option<usize>,
    pub dt: Option<f64>,
    pub t_final: Option<f64>,
    pub sigma: Option<f64>,
    pub reynolds: Option<f64>,
    pub nu: Option<f64>,
    pub sample_every: Option<usize>,
    pub output_dir: Option<PathBuf>,
    pub emit_pointwise: Option<bool>,
}

impl ConfigInput {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::config("invalid-config", e.to_string()))
    }

    /// Reads a file, or standard input for `-`.
    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = if path == Path::new("-") {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            s
        } else {
            std::fs::read_to_string(path)
                .map_err(|e| CliError::config("config-unreadable", format!("{}: {e}", path.display())))?
        };
        Self::from_json(&text)
    }

    /// Fields set in `top` win.
    pub fn overlay(self, top: ConfigInput) -> ConfigInput {
        ConfigInput {
            model: top.model.or(self.model),
            case_id: top.case_id.or(self.case_id),
            m_nodes: top.m_nodes.or(self.m_nodes),
            mx: top.mx.or(self.mx),
            my: top.my.or(self.my),
            dt: top.dt.or(self.dt),
            t_final: top.t_final.or(self.t_final),
            sigma: top.sigma.or(self.sigma),
            reynolds: top.reynolds.or(self.reynolds),
            nu: top.nu.or(self.nu),
            sample_every: top.sample_every.or(self.sample_every),
            output_dir: top.output_dir.or(self.output_dir),
            emit_pointwise: top.emit_pointwise.or(self.emit_pointwise),
        }
    }
}

/// A validated run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: Model,
    pub case_id: CaseId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_nodes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mx: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub my: Option<usize>,
    pub dt: f64,
    pub t_final: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reynolds: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<f64>,
    pub sample_every: usize,
    pub output_dir: PathBuf,
    pub emit_pointwise: bool,
}

fn positive(name: &str, v: f64) -> Result<(), CliError> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(CliError::config("invalid-value", format!("{name} must be positive, got {v}")));
    }
    Ok(())
}

impl RunConfig {
    pub fn resolve(input: ConfigInput) -> Result<Self, CliError> {
        let case_text = input
            .case_id
            .ok_or_else(|| CliError::config("missing-field", "case_id (--case) is required"))?;
        let case_id: CaseId = case_text
            .parse()
            .map_err(|_| CliError::config("unknown-case", format!("unknown case '{case_text}'")))?;
        let model = Model::of_case(case_id);
        if let Some(m) = input.model {
            if m != model {
                return Err(CliError::config(
                    "model-mismatch",
                    format!("case {case_id} runs the {} model, not {}", model.as_str(), m.as_str()),
                ));
            }
        }

        match model {
            Model::Burgers1d => {
                if input.mx.is_some() || input.my.is_some() {
                    return Err(CliError::config("invalid-grid", "mx/my apply to 2D models only; use m_nodes"));
                }
                if input.m_nodes.is_none() {
                    return Err(CliError::config("missing-field", "m_nodes (--nodes) is required"));
                }
            }
            _ => {
                let per_axis = input.mx.is_some() || input.my.is_some();
                if input.m_nodes.is_some() && per_axis {
                    return Err(CliError::config("invalid-grid", "give either m_nodes or mx/my, not both"));
                }
                if input.m_nodes.is_none() && (input.mx.is_none() || input.my.is_none()) {
                    return Err(CliError::config(
                        "missing-field",
                        "m_nodes (--nodes), or both mx and my, is required",
                    ));
                }
            }
        }

        let dt = input
            .dt
            .ok_or_else(|| CliError::config("missing-field", "dt (--dt) is required"))?;
        let t_final = input
            .t_final
            .ok_or_else(|| CliError::config("missing-field", "t_final (--t-final) is required"))?;
        positive("dt", dt)?;
        positive("t_final", t_final)?;
        TimeConfig::new(dt, t_final).map_err(|e| {
            CliError::config("dt-must-divide-t-final", format!("dt must divide t_final: {e}"))
        })?;

        match (input.reynolds, input.nu) {
            (Some(_), Some(_)) => {
                return Err(CliError::config("viscosity-conflict", "give exactly one of reynolds and nu"))
            }
            (None, None) => {
                return Err(CliError::config("missing-field", "one of reynolds (--re) and nu (--nu) is required"))
            }
            (Some(re), None) => positive("reynolds", re)?,
            (None, Some(nu)) => positive("nu", nu)?,
        }
        if let Some(s) = input.sigma {
            if !(s > 1.0 && s.is_finite()) {
                return Err(CliError::config("invalid-value", format!("sigma must exceed 1, got {s}")));
            }
        } else if case_id == CaseId::Wood1d {
            return Err(CliError::config("missing-field", "sigma (--sigma) is required for 1d-wood"));
        }
        let sample_every = input.sample_every.unwrap_or(DEFAULT_SAMPLE_EVERY);
        if sample_every == 0 {
            return Err(CliError::config("invalid-value", "sample_every must be at least 1"));
        }
        let nodes_ok = [input.m_nodes, input.mx, input.my].iter().flatten().all(|&n| n >= 2);
        if !nodes_ok {
            return Err(CliError::config("invalid-grid", "node counts must be at least 2"));
        }

        Ok(Self {
            model,
            case_id,
            m_nodes: input.m_nodes,
            mx: input.mx,
            my: input.my,
            dt,
            t_final,
            sigma: input.sigma,
            reynolds: input.reynolds,
            nu: input.nu,
            sample_every,
            output_dir: input.output_dir.unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR)),
            emit_pointwise: input.emit_pointwise.unwrap_or(false),
        })
    }

    pub fn case_params(&self) -> CaseParams {
        CaseParams {
            sigma: self.sigma,
            nu: self.nu,
            reynolds: self.reynolds,
            nodes: self.m_nodes.or(self.mx).unwrap_or(0),
            nodes_y: self.m_nodes.or(self.my),
        }
    }

    pub fn time_config(&self) -> TimeConfig {
        TimeConfig::new(self.dt, self.t_final).expect("validated in resolve")
    }
}
