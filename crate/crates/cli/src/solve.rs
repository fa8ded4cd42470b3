//! `solve`: one march, written as `snapshots.csv` and `summary.json`.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::time::Instant;

use burgers_core::metrics::solution_errors;
use burgers_core::{problem_factory, ExactOracle, MarchOptions, Solution};
use serde_json::json;

use crate::config::RunConfig;
use crate::error::CliError;

pub const PROGRESS_EVERY: usize = 500;

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub solution: Solution,
    pub summary: serde_json::Value,
}

pub fn run_solve(cfg: &RunConfig, progress: bool) -> Result<SolveOutcome, CliError> {
    let params = cfg.case_params();
    let problem = problem_factory(cfg.case_id, &params)?;
    let oracle = ExactOracle::for_case(cfg.case_id, &params)?;
    let time = cfg.time_config();
    let opts = MarchOptions::every(cfg.sample_every);

    let start = Instant::now();
    let solution = problem.march_with_progress(&time, &opts, |step, total| {
        if progress && step % PROGRESS_EVERY == 0 {
            eprintln!("progress: step {step}/{total} t = {}", time.time(step));
        }
    })?;
    let wall = start.elapsed().as_secs_f64();

    fs::create_dir_all(&cfg.output_dir)?;
    let mut out = BufWriter::new(File::create(cfg.output_dir.join("snapshots.csv"))?);
    write_snapshots(&solution, &oracle, &mut out)?;
    out.flush()?;

    let t_end = *solution.times.last().expect("final snapshot is always recorded");
    let (u_err, v_err) = solution_errors(&solution, &oracle, t_end, cfg.emit_pointwise)?;
    if cfg.emit_pointwise {
        u_err.write_pointwise_csv(BufWriter::new(File::create(cfg.output_dir.join("errors_u.csv"))?))?;
        if let Some(v) = &v_err {
            v.write_pointwise_csv(BufWriter::new(File::create(cfg.output_dir.join("errors_v.csv"))?))?;
        }
    }

    let mut summary = json!({
        "config": cfg,
        "t_final": t_end,
        "steps": solution.config.steps(),
        "snapshots": solution.len(),
        "l2": u_err.l2,
        "linf": u_err.linf,
        "n_points": u_err.n_points,
        "max_residual": solution.max_residual,
        "wall_time_s": wall,
    });
    if let Some(v) = v_err {
        summary["v"] = v.summary_json();
    }
    fs::write(
        cfg.output_dir.join("summary.json"),
        serde_json::to_string_pretty(&summary)? + "\n",
    )?;
    Ok(SolveOutcome { solution, summary })
}

/// Columns `t, x[, y], u[, v], u_exact[, v_exact], abs_err`; for the coupled
/// model `abs_err` is the larger of the two component errors.
pub fn write_snapshots<W: Write>(solution: &Solution, oracle: &ExactOracle, out: &mut W) -> Result<(), CliError> {
    let coords = solution.grid.coords();
    let two_d = coords.first().is_some_and(|c| c.len() == 2);
    let coupled = solution.v.is_some();
    let mut header = vec!["t", "x"];
    if two_d {
        header.push("y");
    }
    header.push("u");
    if coupled {
        header.push("v");
    }
    header.push("u_exact");
    if coupled {
        header.push("v_exact");
    }
    header.push("abs_err");
    writeln!(out, "{}", header.join(","))?;

    for (idx, &t) in solution.times.iter().enumerate() {
        let u = &solution.u[idx];
        let v = solution.v.as_ref().map(|v| &v[idx]);
        for (k, c) in coords.iter().enumerate() {
            let (ue, ve) = oracle.eval(c, t)?;
            let mut row = Vec::with_capacity(8);
            row.push(t);
            row.extend_from_slice(c);
            row.push(u[k]);
            let mut err = (u[k] - ue).abs();
            if let Some(v) = v {
                row.push(v[k]);
            }
            row.push(ue);
            if let (Some(v), Some(ve)) = (v, ve) {
                row.push(ve);
                err = err.max((v[k] - ve).abs());
            }
            row.push(err);
            let cells: Vec<String> = row.iter().map(|x| format!("{x:.16e}")).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
    }
    Ok(())
}
