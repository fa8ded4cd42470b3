//! Exact solutions of the benchmark problems and the problem factory that
//! wires their initial and boundary data into the stepper.
//!
//! | case          | model   | solution                                             |
//! |---------------|---------|------------------------------------------------------|
//! | `1d-wood`     | 1D      | `2 nu pi e^{-nu pi^2 t} sin(pi x) / (sigma + e^{-nu pi^2 t} cos(pi x))` |
//! | `1d-fourier`  | 1D      | Fourier-series ratio, initial condition `4x(1-x)`     |
//! | `1d-zero`     | 1D      | `u = 0`                                              |
//! | `2d`          | 2D      | `1 / (1 + e^{Re (x + y - t) / 2})`                   |
//! | `coupled`     | coupled | `3/4 -/+ 1 / (4 (1 + e^{Re (4y - 4x - t) / 32}))`     |
//!
//! All domains are the unit interval or the unit square.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{chebyshev_gauss_lobatto, tensor_grid, Interval};
use crate::stepper::{AnyProblem, EdgeBoundary, Problem1D, Problem2D, ProblemCoupled};

/// `1 / (1 + e^s)` without overflow for large `|s|`.
pub fn logistic(s: f64) -> f64 {
    if s > 0.0 {
        let e = (-s).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + s.exp())
    }
}

pub fn wood_exact(x: f64, t: f64, nu: f64, sigma: f64) -> Result<f64> {
    if !(sigma > 1.0) {
        return Err(Error::InvalidArgument(format!(
            "sigma must exceed 1, got {sigma}"
        )));
    }
    let decay = (-nu * PI * PI * t).exp();
    Ok(2.0 * nu * PI * decay * (PI * x).sin() / (sigma + decay * (PI * x).cos()))
}

/// Truncation and quadrature settings for the Fourier-series solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourierSeriesParams {
    pub nu: f64,
    pub n_terms: usize,
    /// Composite Simpson panels; even.
    pub quad_panels: usize,
}

impl FourierSeriesParams {
    pub const DEFAULT_TERMS: usize = 200;
    pub const DEFAULT_PANELS: usize = 1 << 16;

    pub fn new(nu: f64) -> Self {
        Self {
            nu,
            n_terms: Self::DEFAULT_TERMS,
            quad_panels: Self::DEFAULT_PANELS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.nu > 0.0 && self.nu.is_finite()) {
            return Err(Error::InvalidArgument(format!("nu must be positive, got {}", self.nu)));
        }
        if self.n_terms == 0 {
            return Err(Error::InvalidArgument("n_terms must be at least 1".into()));
        }
        if self.quad_panels < 2 || !self.quad_panels.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "quad_panels must be even and at least 2, got {}",
                self.quad_panels
            )));
        }
        Ok(())
    }
}

// Neumaier summation; the series ratio cancels heavily for small nu.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// `c_0 = ∫ g` and `c_n = 2 ∫ g cos(n pi x)` over `[0, 1]`, with
/// `g(x) = exp(-x^2 (3 - 2x) / (3 nu))`, by composite Simpson.
pub fn fourier_coefficients(params: &FourierSeriesParams) -> Result<(f64, Vec<f64>)> {
    params.validate()?;
    let panels = params.quad_panels;
    let h = 1.0 / panels as f64;
    // Simpson weights folded into the integrand samples.
    let weighted: Vec<(f64, f64)> = (0..=panels)
        .map(|i| {
            let x = i as f64 * h;
            let w = if i == 0 || i == panels {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            let g = (-(x * x * (3.0 - 2.0 * x)) / (3.0 * params.nu)).exp();
            (x, w * g)
        })
        .collect();
    let scale = h / 3.0;
    let c0 = scale * compensated_sum(weighted.iter().map(|(_, wg)| *wg));
    let cn = (1..=params.n_terms)
        .map(|n| {
            let k = n as f64 * PI;
            2.0 * scale * compensated_sum(weighted.iter().map(|(x, wg)| wg * (k * x).cos()))
        })
        .collect();
    Ok((c0, cn))
}

/// Fourier-series solution with its coefficients computed once.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSeries {
    params: FourierSeriesParams,
    c0: f64,
    cn: Vec<f64>,
    c_max: f64,
}

impl FourierSeries {
    pub fn new(params: FourierSeriesParams) -> Result<Self> {
        let (c0, cn) = fourier_coefficients(&params)?;
        let c_max = cn.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        Ok(Self {
            params,
            c0,
            cn,
            c_max,
        })
    }

    pub fn params(&self) -> &FourierSeriesParams {
        &self.params
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }

    pub fn cn(&self) -> &[f64] {
        &self.cn
    }

    /// Series value at `(x, t)`, `t > 0`. Summation stops once the
    /// remaining terms are bounded by `1e-15` of the running denominator.
    pub fn eval(&self, x: f64, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "the series solution needs t > 0, got {t}"
            )));
        }
        let nu = self.params.nu;
        let (mut num, mut den) = (0.0, self.c0);
        for (idx, c) in self.cn.iter().enumerate() {
            let n = (idx + 1) as f64;
            let decay = (-n * n * PI * PI * nu * t).exp();
            if n * decay * self.c_max < 1e-15 * den.abs() {
                break;
            }
            let a = c * decay;
            num += a * n * (n * PI * x).sin();
            den += a * (n * PI * x).cos();
        }
        if den.abs() < 1e-13 {
            return Err(Error::Evaluation(format!(
                "series denominator {den:e} at x = {x}, t = {t}"
            )));
        }
        Ok(2.0 * nu * PI * num / den)
    }
}

/// One-off evaluation; computes the coefficients on every call.
pub fn fourier_exact(x: f64, t: f64, params: &FourierSeriesParams) -> Result<f64> {
    FourierSeries::new(*params)?.eval(x, t)
}

pub fn exact_2d(x: f64, y: f64, t: f64, reynolds: f64) -> f64 {
    logistic(reynolds * (x + y - t) / 2.0)
}

pub fn exact_coupled(x: f64, y: f64, t: f64, reynolds: f64) -> (f64, f64) {
    let b = 0.25 * logistic(reynolds * (4.0 * y - 4.0 * x - t) / 32.0);
    (0.75 - b, 0.75 + b)
}

pub fn case2_initial(x: f64) -> f64 {
    4.0 * x * (1.0 - x)
}

/// The benchmark problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseId {
    #[serde(rename = "1d-wood")]
    Wood1d,
    #[serde(rename = "1d-fourier")]
    Fourier1d,
    #[serde(rename = "1d-zero")]
    Zero1d,
    #[serde(rename = "2d")]
    Burgers2d,
    #[serde(rename = "coupled")]
    Coupled,
}

impl CaseId {
    pub const ALL: [CaseId; 5] = [
        CaseId::Wood1d,
        CaseId::Fourier1d,
        CaseId::Zero1d,
        CaseId::Burgers2d,
        CaseId::Coupled,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CaseId::Wood1d => "1d-wood",
            CaseId::Fourier1d => "1d-fourier",
            CaseId::Zero1d => "1d-zero",
            CaseId::Burgers2d => "2d",
            CaseId::Coupled => "coupled",
        }
    }

    pub fn is_1d(&self) -> bool {
        matches!(self, CaseId::Wood1d | CaseId::Fourier1d | CaseId::Zero1d)
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CaseId::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown case '{s}'")))
    }
}

/// Parameters for [`problem_factory`]. Exactly one of `nu` and `reynolds`
/// is expected; the other is its reciprocal.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct CaseParams {
    pub sigma: Option<f64>,
    pub nu: Option<f64>,
    pub reynolds: Option<f64>,
    /// Nodes per direction (x for 2D grids).
    pub nodes: usize,
    /// Nodes in y; defaults to `nodes`.
    pub nodes_y: Option<usize>,
}

impl CaseParams {
    pub fn viscosity(&self) -> Result<f64> {
        let nu = match (self.nu, self.reynolds) {
            (Some(nu), None) => nu,
            (None, Some(re)) => 1.0 / re,
            (Some(_), Some(_)) => {
                return Err(Error::InvalidArgument(
                    "give either nu or reynolds, not both".into(),
                ))
            }
            (None, None) => return Err(Error::MissingParameter("nu or reynolds")),
        };
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(Error::InvalidArgument(format!("viscosity must be positive, got {nu}")));
        }
        Ok(nu)
    }

    pub fn reynolds(&self) -> Result<f64> {
        Ok(1.0 / self.viscosity()?)
    }

    fn sigma(&self) -> Result<f64> {
        let s = self.sigma.ok_or(Error::MissingParameter("sigma"))?;
        if !(s > 1.0) {
            return Err(Error::InvalidArgument(format!("sigma must exceed 1, got {s}")));
        }
        Ok(s)
    }
}

/// Exact `(u, v)` of a case at a point; `v` only for the coupled case.
#[derive(Debug, Clone)]
pub enum ExactOracle {
    Wood { nu: f64, sigma: f64 },
    Fourier(Arc<FourierSeries>),
    Zero,
    Burgers2d { reynolds: f64 },
    Coupled { reynolds: f64 },
}

impl ExactOracle {
    pub fn for_case(case: CaseId, params: &CaseParams) -> Result<Self> {
        Ok(match case {
            CaseId::Wood1d => ExactOracle::Wood {
                nu: params.viscosity()?,
                sigma: params.sigma()?,
            },
            CaseId::Fourier1d => ExactOracle::Fourier(Arc::new(FourierSeries::new(
                FourierSeriesParams::new(params.viscosity()?),
            )?)),
            CaseId::Zero1d => ExactOracle::Zero,
            CaseId::Burgers2d => ExactOracle::Burgers2d {
                reynolds: params.reynolds()?,
            },
            CaseId::Coupled => ExactOracle::Coupled {
                reynolds: params.reynolds()?,
            },
        })
    }

    pub fn has_v(&self) -> bool {
        matches!(self, ExactOracle::Coupled { .. })
    }

    /// `coords` is `[x]` or `[x, y]`.
    pub fn eval(&self, coords: &[f64], t: f64) -> Result<(f64, Option<f64>)> {
        let x = coords.first().copied().unwrap_or(0.0);
        let y = coords.get(1).copied().unwrap_or(0.0);
        Ok(match self {
            ExactOracle::Wood { nu, sigma } => (wood_exact(x, t, *nu, *sigma)?, None),
            ExactOracle::Fourier(series) => {
                if t == 0.0 {
                    (case2_initial(x), None)
                } else if x <= 0.0 || x >= 1.0 {
                    (0.0, None)
                } else {
                    (series.eval(x, t)?, None)
                }
            }
            ExactOracle::Zero => (0.0, None),
            ExactOracle::Burgers2d { reynolds } => (exact_2d(x, y, t, *reynolds), None),
            ExactOracle::Coupled { reynolds } => {
                let (u, v) = exact_coupled(x, y, t, *reynolds);
                (u, Some(v))
            }
        })
    }

    pub fn u(&self, coords: &[f64], t: f64) -> Result<f64> {
        self.eval(coords, t).map(|(u, _)| u)
    }

    pub fn v(&self, coords: &[f64], t: f64) -> Result<f64> {
        self.eval(coords, t)?
            .1
            .ok_or(Error::MissingParameter("v component"))
    }
}

/// Builds the problem for a benchmark case on the unit interval/square.
pub fn problem_factory(case: CaseId, params: &CaseParams) -> Result<AnyProblem> {
    let nodes_x = params.nodes;
    let unit = Interval::unit();
    if case.is_1d() {
        let grid = chebyshev_gauss_lobatto(unit, nodes_x)?;
        let zero = || -> crate::stepper::Fn1 { Arc::new(|_| 0.0) };
        let problem = match case {
            CaseId::Wood1d => {
                let nu = params.viscosity()?;
                let sigma = params.sigma()?;
                // boundary values are sin(0) = sin(pi) = 0 in closed form
                Problem1D {
                    grid,
                    nu,
                    ic: Arc::new(move |x| {
                        let d = sigma + (PI * x).cos();
                        2.0 * nu * PI * (PI * x).sin() / d
                    }),
                    bc_left: zero(),
                    bc_right: zero(),
                }
            }
            CaseId::Fourier1d => Problem1D {
                grid,
                nu: params.viscosity()?,
                ic: Arc::new(case2_initial),
                bc_left: zero(),
                bc_right: zero(),
            },
            _ => Problem1D {
                grid,
                nu: params.viscosity()?,
                ic: zero(),
                bc_left: zero(),
                bc_right: zero(),
            },
        };
        return Ok(AnyProblem::OneD(problem));
    }

    let nodes_y = params.nodes_y.unwrap_or(nodes_x);
    let grid = tensor_grid(
        chebyshev_gauss_lobatto(unit, nodes_x)?,
        chebyshev_gauss_lobatto(unit, nodes_y)?,
    );
    let re = params.reynolds()?;
    Ok(match case {
        CaseId::Burgers2d => {
            let bc = EdgeBoundary::from_fn(&grid, Arc::new(move |x, y, t| exact_2d(x, y, t, re)));
            AnyProblem::TwoD(Problem2D {
                nu: params.viscosity()?,
                ic: Arc::new(move |x, y| exact_2d(x, y, 0.0, re)),
                bc,
                grid,
            })
        }
        _ => {
            let bc_u = EdgeBoundary::from_fn(&grid, Arc::new(move |x, y, t| exact_coupled(x, y, t, re).0));
            let bc_v = EdgeBoundary::from_fn(&grid, Arc::new(move |x, y, t| exact_coupled(x, y, t, re).1));
            AnyProblem::Coupled(ProblemCoupled {
                reynolds: re,
                ic_u: Arc::new(move |x, y| exact_coupled(x, y, 0.0, re).0),
                ic_v: Arc::new(move |x, y| exact_coupled(x, y, 0.0, re).1),
                bc_u,
                bc_v,
                grid,
            })
        }
    })
}
