//! Error norms and point tables.
//!
//! `L2 = sqrt(sum |e_k|^2 / N)` and `L∞ = max |e_k|` over all `N` grid
//! nodes, boundaries included. Off-grid points are evaluated by barycentric
//! Lagrange interpolation through every node of the grid.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::exact::ExactOracle;
use crate::grid::{Grid1D, Grid2D};
use crate::stepper::{GridInfo, Solution};

fn check_pair(exact: &[f64], computed: &[f64]) -> Result<()> {
    check_len(exact.len(), computed.len())?;
    if exact.is_empty() {
        return Err(Error::InvalidArgument("error norms need at least one point".into()));
    }
    Ok(())
}

pub fn l2_error(exact: &[f64], computed: &[f64]) -> Result<f64> {
    check_pair(exact, computed)?;
    let sq: f64 = exact
        .iter()
        .zip(computed)
        .map(|(e, c)| (e - c) * (e - c))
        .sum();
    Ok((sq / exact.len() as f64).sqrt())
}

pub fn linf_error(exact: &[f64], computed: &[f64]) -> Result<f64> {
    check_pair(exact, computed)?;
    Ok(exact
        .iter()
        .zip(computed)
        .fold(0.0, |m, (e, c)| m.max((e - c).abs())))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointRow {
    pub coords: Vec<f64>,
    pub computed: f64,
    pub exact: f64,
    pub abs_error: f64,
}

impl PointRow {
    pub fn new(coords: Vec<f64>, computed: f64, exact: f64) -> Self {
        Self {
            coords,
            computed,
            exact,
            abs_error: (computed - exact).abs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub l2: f64,
    pub linf: f64,
    pub n_points: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pointwise: Option<Vec<PointRow>>,
}

#[derive(Serialize)]
struct Summary {
    l2: f64,
    linf: f64,
    n_points: usize,
}

impl ErrorReport {
    pub fn new(exact: &[f64], computed: &[f64]) -> Result<Self> {
        Ok(Self {
            l2: l2_error(exact, computed)?,
            linf: linf_error(exact, computed)?,
            n_points: exact.len(),
            pointwise: None,
        })
    }

    /// Report with a row per node; `coords` come from [`GridInfo::coords`].
    pub fn with_pointwise(coords: &[Vec<f64>], exact: &[f64], computed: &[f64]) -> Result<Self> {
        check_len(exact.len(), coords.len())?;
        let mut report = Self::new(exact, computed)?;
        report.pointwise = Some(
            coords
                .iter()
                .zip(exact.iter().zip(computed))
                .map(|(c, (e, u))| PointRow::new(c.clone(), *u, *e))
                .collect(),
        );
        Ok(report)
    }

    /// `{"l2": .., "linf": .., "n_points": ..}`.
    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::to_value(Summary {
            l2: self.l2,
            linf: self.linf,
            n_points: self.n_points,
        })
        .expect("plain numbers serialize")
    }

    /// Pointwise rows as CSV; writes only the header when there are none.
    pub fn write_pointwise_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let rows = self.pointwise.as_deref().unwrap_or(&[]);
        let dims = rows.first().map_or(1, |r| r.coords.len());
        let axes = ["x", "y", "z"];
        let mut header: Vec<&str> = axes[..dims.min(3)].to_vec();
        header.extend(["computed", "exact", "abs_error"]);
        writeln!(out, "{}", header.join(","))?;
        for r in rows {
            for c in &r.coords {
                write!(out, "{c:.16e},")?;
            }
            writeln!(out, "{:.16e},{:.16e},{:.16e}", r.computed, r.exact, r.abs_error)?;
        }
        Ok(())
    }
}

/// Errors of the `u` (and `v`) component of a snapshot against an oracle.
pub fn solution_errors(
    solution: &Solution,
    oracle: &ExactOracle,
    t: f64,
    pointwise: bool,
) -> Result<(ErrorReport, Option<ErrorReport>)> {
    let coords = solution.grid.coords();
    let mut eu = Vec::with_capacity(coords.len());
    let mut ev = Vec::with_capacity(coords.len());
    for c in &coords {
        let (u, v) = oracle.eval(c, t)?;
        eu.push(u);
        if let Some(v) = v {
            ev.push(v);
        }
    }
    let build = |exact: &[f64], computed: &[f64]| {
        if pointwise {
            ErrorReport::with_pointwise(&coords, exact, computed)
        } else {
            ErrorReport::new(exact, computed)
        }
    };
    let u_report = build(&eu, solution.u_at(t)?)?;
    let v_report = match (&solution.v, oracle.has_v()) {
        (Some(_), true) => Some(build(&ev, solution.v_at(t)?)?),
        _ => None,
    };
    Ok((u_report, v_report))
}

/// Barycentric Lagrange interpolation through a fixed node set.
#[derive(Debug, Clone)]
pub struct Barycentric {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Barycentric {
    pub fn new(nodes: &[f64]) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidArgument("interpolation needs nodes".into()));
        }
        let lo = nodes.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = nodes.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        // weights computed on [-1, 1] to keep the products in range
        let scale = if hi > lo { 2.0 / (hi - lo) } else { 1.0 };
        let mut weights = Vec::with_capacity(nodes.len());
        for (j, &xj) in nodes.iter().enumerate() {
            let mut p = 1.0;
            for (k, &xk) in nodes.iter().enumerate() {
                if k != j {
                    let d = (xj - xk) * scale;
                    if d == 0.0 {
                        return Err(Error::DegenerateGrid(format!("repeated node {xj}")));
                    }
                    p *= d;
                }
            }
            weights.push(1.0 / p);
        }
        Ok(Self {
            nodes: nodes.to_vec(),
            weights,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn eval(&self, values: &[f64], x: f64) -> Result<f64> {
        check_len(self.nodes.len(), values.len())?;
        let (mut num, mut den) = (0.0, 0.0);
        for ((&xj, &wj), &fj) in self.nodes.iter().zip(&self.weights).zip(values) {
            let d = x - xj;
            if d == 0.0 {
                return Ok(fj);
            }
            let c = wj / d;
            num += c * fj;
            den += c;
        }
        Ok(num / den)
    }
}

fn interpolate_1d(grid: &Grid1D, values: &[f64], x: f64) -> Result<f64> {
    if !grid.interval().contains(x) {
        return Err(Error::OutsideDomain(vec![x]));
    }
    Barycentric::new(grid.nodes())?.eval(values, x)
}

fn interpolate_2d(grid: &Grid2D, values: &[f64], x: f64, y: f64) -> Result<f64> {
    if !grid.gx().interval().contains(x) || !grid.gy().interval().contains(y) {
        return Err(Error::OutsideDomain(vec![x, y]));
    }
    check_len(grid.len(), values.len())?;
    let by = Barycentric::new(grid.gy().nodes())?;
    let along_y = (0..grid.mx())
        .map(|i| {
            let row = &values[grid.flatten(i, 0)..=grid.flatten(i, grid.my() - 1)];
            by.eval(row, y)
        })
        .collect::<Result<Vec<_>>>()?;
    Barycentric::new(grid.gx().nodes())?.eval(&along_y, x)
}

/// Value of grid data at an arbitrary point of the domain.
pub fn interpolate(grid: &GridInfo, values: &[f64], point: &[f64]) -> Result<f64> {
    match (grid, point) {
        (GridInfo::OneD(g), [x]) => interpolate_1d(g, values, *x),
        (GridInfo::TwoD(g), [x, y]) => interpolate_2d(g, values, *x, *y),
        (GridInfo::OneD(_), _) => Err(Error::DimensionMismatch {
            expected: 1,
            found: point.len(),
        }),
        (GridInfo::TwoD(_), _) => Err(Error::DimensionMismatch {
            expected: 2,
            found: point.len(),
        }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Component {
    U,
    V,
}

/// Computed vs exact values at named points of a recorded snapshot.
pub fn point_table(
    solution: &Solution,
    oracle: &ExactOracle,
    component: Component,
    points: &[Vec<f64>],
    t: f64,
) -> Result<Vec<PointRow>> {
    let values = match component {
        Component::U => solution.u_at(t)?,
        Component::V => solution.v_at(t)?,
    };
    points
        .iter()
        .map(|p| {
            let computed = interpolate(&solution.grid, values, p)?;
            let exact = match component {
                Component::U => oracle.u(p, t)?,
                Component::V => oracle.v(p, t)?,
            };
            Ok(PointRow::new(p.clone(), computed, exact))
        })
        .collect()
}
