//! Linearly implicit BDF2 time stepping for the three Burgers' models.
//!
//! Each step solves one dense linear system
//!
//! ```text
//! [I - (2/3) dt nu L + (2/3) dt (diag(w) Dx + diag(eta) Dy)] u^{n+1} = (4/3) u^n - (1/3) u^{n-1}
//! ```
//!
//! with `w = 2u^n - u^{n-1}` (and `eta = 2v^n - v^{n-1}` for the coupled
//! system, which shares one matrix between `u` and `v`). Dirichlet rows are
//! replaced by unit rows carrying the boundary value at `t_{n+1}`. The first
//! step is backward Euler with the advection coefficient frozen at `u^0`.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::dqm::{DqMatrix, DqPair, Operator2D};
use crate::error::{check_len, Error, Result};
use crate::grid::{Grid1D, Grid2D};
use crate::linalg::{vec_inf_norm, LuFactor};

pub type Fn1 = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type Fn2 = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
pub type Fn3 = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

/// Accepted steps satisfy `‖C x - F‖∞ <= RESIDUAL_BOUND * (1 + ‖F‖∞)`.
pub const RESIDUAL_BOUND: f64 = 1e-8;

/// Constant step size and final time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeConfig {
    pub dt: f64,
    pub t_final: f64,
    /// `K_{n+1} / K_n`; the marcher only supports 1.
    pub step_ratio: f64,
}

impl TimeConfig {
    /// `t_final` must be a whole number of steps (to 1e-9 relative).
    pub fn new(dt: f64, t_final: f64) -> Result<Self> {
        let cfg = Self {
            dt,
            t_final,
            step_ratio: 1.0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "t_final must be positive, got {}",
                self.t_final
            )));
        }
        let ratio = self.t_final / self.dt;
        let n = ratio.round();
        if n < 1.0 || (ratio - n).abs() > 1e-9 * n.max(1.0) {
            return Err(Error::InvalidArgument(format!(
                "t_final / dt must be a positive integer: {} / {} = {ratio}",
                self.t_final, self.dt
            )));
        }
        if self.step_ratio != 1.0 {
            return Err(Error::InvalidArgument(format!(
                "only constant steps are supported (step ratio 1), got {}",
                self.step_ratio
            )));
        }
        Ok(())
    }

    /// Number of steps `N = t_final / dt`.
    pub fn steps(&self) -> usize {
        (self.t_final / self.dt).round() as usize
    }

    pub fn time(&self, n: usize) -> f64 {
        n as f64 * self.dt
    }

    /// Step index whose time matches `t`, if `t` lies on the time grid.
    pub fn step_of(&self, t: f64) -> Option<usize> {
        let r = t / self.dt;
        let n = r.round();
        (n >= 0.0 && (r - n).abs() <= 1e-9 * n.max(1.0)).then_some(n as usize)
    }
}

/// How `u^1` is produced from `u^0`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StartupKind {
    /// Backward Euler with the advection coefficient frozen at `u^0`.
    #[default]
    Implicit,
    /// Forward Euler, `u^1 = u^0 + dt (nu u0_xx - u0 u0_x)`.
    Explicit,
}

/// Dirichlet data on the four edges of a rectangle. `left`/`right` are
/// functions of `(y, t)` on `x = lo`/`x = hi`; `bottom`/`top` are functions
/// of `(x, t)` on `y = lo`/`y = hi`. Corners take the left/right value.
#[derive(Clone)]
pub struct EdgeBoundary {
    pub left: Fn2,
    pub right: Fn2,
    pub bottom: Fn2,
    pub top: Fn2,
}

impl EdgeBoundary {
    /// All four edges read from one function of `(x, y, t)`.
    pub fn from_fn(grid: &Grid2D, f: Fn3) -> Self {
        let (x0, x1) = (grid.gx().interval().lo(), grid.gx().interval().hi());
        let (y0, y1) = (grid.gy().interval().lo(), grid.gy().interval().hi());
        let edge = |g: Fn3, along_y: bool, fixed: f64| -> Fn2 {
            if along_y {
                Arc::new(move |y, t| g(fixed, y, t))
            } else {
                Arc::new(move |x, t| g(x, fixed, t))
            }
        };
        Self {
            left: edge(f.clone(), true, x0),
            right: edge(f.clone(), true, x1),
            bottom: edge(f.clone(), false, y0),
            top: edge(f, false, y1),
        }
    }

    pub fn constant(value: f64) -> Self {
        let c: Fn2 = Arc::new(move |_, _| value);
        Self {
            left: c.clone(),
            right: c.clone(),
            bottom: c.clone(),
            top: c,
        }
    }

    /// Boundary value at flat index `k` of `grid`. `None` for interior points.
    pub fn value(&self, grid: &Grid2D, k: usize, t: f64) -> Option<f64> {
        let (i, j) = grid.unflatten(k);
        let (x, y) = grid.point(k);
        if i == 0 {
            Some((self.left)(y, t))
        } else if i + 1 == grid.mx() {
            Some((self.right)(y, t))
        } else if j == 0 {
            Some((self.bottom)(x, t))
        } else if j + 1 == grid.my() {
            Some((self.top)(x, t))
        } else {
            None
        }
    }
}

/// `u_t + u u_x = nu u_xx` on a 1D Chebyshev grid with Dirichlet ends.
#[derive(Clone)]
pub struct Problem1D {
    pub grid: Grid1D,
    pub nu: f64,
    pub ic: Fn1,
    pub bc_left: Fn1,
    pub bc_right: Fn1,
}

impl fmt::Debug for Problem1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem1D")
            .field("nodes", &self.grid.len())
            .field("nu", &self.nu)
            .finish_non_exhaustive()
    }
}

/// `u_t + u u_x + u u_y = nu (u_xx + u_yy)` on a tensor grid.
#[derive(Clone)]
pub struct Problem2D {
    pub grid: Grid2D,
    pub nu: f64,
    pub ic: Fn2,
    pub bc: EdgeBoundary,
}

impl fmt::Debug for Problem2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem2D")
            .field("mx", &self.grid.mx())
            .field("my", &self.grid.my())
            .field("nu", &self.nu)
            .finish_non_exhaustive()
    }
}

/// Coupled system for `(u, v)` with diffusion coefficient `1 / Re`.
#[derive(Clone)]
pub struct ProblemCoupled {
    pub grid: Grid2D,
    pub reynolds: f64,
    pub ic_u: Fn2,
    pub ic_v: Fn2,
    pub bc_u: EdgeBoundary,
    pub bc_v: EdgeBoundary,
}

impl ProblemCoupled {
    pub fn nu(&self) -> f64 {
        1.0 / self.reynolds
    }
}

impl fmt::Debug for ProblemCoupled {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemCoupled")
            .field("mx", &self.grid.mx())
            .field("my", &self.grid.my())
            .field("reynolds", &self.reynolds)
            .finish_non_exhaustive()
    }
}

/// State vectors on the grid; `v` is present only for the coupled model.
#[derive(Debug, Clone, PartialEq)]
pub struct Fields {
    pub u: DVector<f64>,
    pub v: Option<DVector<f64>>,
}

impl Fields {
    pub fn scalar(u: DVector<f64>) -> Self {
        Self { u, v: None }
    }

    pub fn pair(u: DVector<f64>, v: DVector<f64>) -> Self {
        Self { u, v: Some(v) }
    }

    fn first_non_finite(&self) -> Option<(usize, f64)> {
        let bad = |x: &DVector<f64>| x.iter().position(|v| !v.is_finite()).map(|i| (i, x[i]));
        bad(&self.u).or_else(|| self.v.as_ref().and_then(bad))
    }
}

/// The two most recent time levels.
#[derive(Debug, Clone, PartialEq)]
pub struct BdfState {
    pub u_prev: DVector<f64>,
    pub u_curr: DVector<f64>,
    pub v_prev: Option<DVector<f64>>,
    pub v_curr: Option<DVector<f64>>,
    /// `n`, the index of `u_curr`.
    pub step_index: usize,
    pub time: f64,
}

impl BdfState {
    pub fn new(prev: Fields, curr: Fields, step_index: usize, dt: f64) -> Self {
        Self {
            u_prev: prev.u,
            u_curr: curr.u,
            v_prev: prev.v,
            v_curr: curr.v,
            step_index,
            time: step_index as f64 * dt,
        }
    }

    fn advance(&mut self, next: Fields, dt: f64) {
        self.u_prev = std::mem::replace(&mut self.u_curr, next.u);
        if let (Some(vc), Some(vn)) = (self.v_curr.as_mut(), next.v) {
            self.v_prev = Some(std::mem::replace(vc, vn));
        }
        self.step_index += 1;
        self.time = self.step_index as f64 * dt;
    }

    fn curr(&self) -> Fields {
        Fields {
            u: self.u_curr.clone(),
            v: self.v_curr.clone(),
        }
    }
}

/// One implicit step: `C x = f` (and `C y = g` for the coupled model).
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    pub c: DMatrix<f64>,
    pub f: DVector<f64>,
    pub g: Option<DVector<f64>>,
}

/// `(1 + ratio) u_curr - ratio u_prev`.
pub fn extrapolate(u_curr: &[f64], u_prev: &[f64], ratio: f64) -> Result<Vec<f64>> {
    check_len(u_curr.len(), u_prev.len())?;
    Ok(u_curr
        .iter()
        .zip(u_prev)
        .map(|(c, p)| (1.0 + ratio) * c - ratio * p)
        .collect())
}

fn extrapolate_vec(curr: &DVector<f64>, prev: &DVector<f64>) -> DVector<f64> {
    curr * 2.0 - prev
}

fn bdf2_rhs(curr: &DVector<f64>, prev: &DVector<f64>) -> DVector<f64> {
    curr * (4.0 / 3.0) - prev * (1.0 / 3.0)
}

/// `I - theta nu L + theta sum_k diag(w_k) D_k`.
fn implicit_matrix(
    theta: f64,
    nu: f64,
    diffusion: &[&DMatrix<f64>],
    advection: &[(&DVector<f64>, &DMatrix<f64>)],
) -> DMatrix<f64> {
    let n = diffusion
        .first()
        .map(|d| d.nrows())
        .or_else(|| advection.first().map(|(_, d)| d.nrows()))
        .unwrap_or(0);
    let mut c = DMatrix::<f64>::zeros(n, n);
    for d in diffusion {
        for (ci, di) in c.as_mut_slice().iter_mut().zip(d.as_slice()) {
            *ci -= theta * nu * di;
        }
    }
    for (w, d) in advection {
        for j in 0..n {
            let dst = c.column_mut(j);
            for ((ci, di), wi) in dst.into_iter().zip(d.column(j).iter()).zip(w.iter()) {
                *ci += theta * wi * di;
            }
        }
    }
    for i in 0..n {
        c[(i, i)] += 1.0;
    }
    c
}

fn set_unit_row(c: &mut DMatrix<f64>, k: usize) {
    c.row_mut(k).fill(0.0);
    c[(k, k)] = 1.0;
}

fn enforce_1d(sys: &mut LinearSystem, p: &Problem1D, t: f64) {
    let last = p.grid.len() - 1;
    set_unit_row(&mut sys.c, 0);
    set_unit_row(&mut sys.c, last);
    sys.f[0] = (p.bc_left)(t);
    sys.f[last] = (p.bc_right)(t);
}

fn enforce_2d(sys: &mut LinearSystem, grid: &Grid2D, bc_u: &EdgeBoundary, bc_v: Option<&EdgeBoundary>, t: f64) {
    for k in grid.boundary_indices() {
        set_unit_row(&mut sys.c, k);
        sys.f[k] = bc_u.value(grid, k, t).unwrap_or(0.0);
        if let (Some(g), Some(bv)) = (sys.g.as_mut(), bc_v) {
            g[k] = bv.value(grid, k, t).unwrap_or(0.0);
        }
    }
}

fn check_state(n: usize, state: &BdfState, coupled: bool) -> Result<()> {
    check_len(n, state.u_prev.len())?;
    check_len(n, state.u_curr.len())?;
    if coupled {
        let missing = || Error::MissingParameter("v state");
        check_len(n, state.v_prev.as_ref().ok_or_else(missing)?.len())?;
        check_len(n, state.v_curr.as_ref().ok_or_else(missing)?.len())?;
    }
    Ok(())
}

/// The BDF2 system producing `u^{n+1}` for the 1D model.
pub fn assemble_1d(
    problem: &Problem1D,
    a1: &DqMatrix,
    a2: &DqMatrix,
    cfg: &TimeConfig,
    state: &BdfState,
) -> Result<LinearSystem> {
    let n = problem.grid.len();
    check_len(n, a1.len())?;
    check_len(n, a2.len())?;
    check_state(n, state, false)?;
    let theta = 2.0 / 3.0 * cfg.dt;
    let w = extrapolate_vec(&state.u_curr, &state.u_prev);
    let mut sys = LinearSystem {
        c: implicit_matrix(theta, problem.nu, &[a2.entries()], &[(&w, a1.entries())]),
        f: bdf2_rhs(&state.u_curr, &state.u_prev),
        g: None,
    };
    enforce_1d(&mut sys, problem, cfg.time(state.step_index + 1));
    Ok(sys)
}

/// The BDF2 system for the 2D scalar model; `w` advects in both directions.
pub fn assemble_2d(
    problem: &Problem2D,
    ops: &Operator2D,
    cfg: &TimeConfig,
    state: &BdfState,
) -> Result<LinearSystem> {
    let n = problem.grid.len();
    check_len(n, ops.len())?;
    check_state(n, state, false)?;
    let theta = 2.0 / 3.0 * cfg.dt;
    let w = extrapolate_vec(&state.u_curr, &state.u_prev);
    let mut sys = LinearSystem {
        c: implicit_matrix(
            theta,
            problem.nu,
            &[&ops.dx2, &ops.dy2],
            &[(&w, &ops.dx1), (&w, &ops.dy1)],
        ),
        f: bdf2_rhs(&state.u_curr, &state.u_prev),
        g: None,
    };
    enforce_2d(&mut sys, &problem.grid, &problem.bc, None, cfg.time(state.step_index + 1));
    Ok(sys)
}

/// The shared BDF2 system for the coupled model, with right-hand sides for
/// both `u` and `v`.
pub fn assemble_coupled(
    problem: &ProblemCoupled,
    ops: &Operator2D,
    cfg: &TimeConfig,
    state: &BdfState,
) -> Result<LinearSystem> {
    let n = problem.grid.len();
    check_len(n, ops.len())?;
    check_state(n, state, true)?;
    let (vp, vc) = (state.v_prev.as_ref().unwrap(), state.v_curr.as_ref().unwrap());
    let theta = 2.0 / 3.0 * cfg.dt;
    let w = extrapolate_vec(&state.u_curr, &state.u_prev);
    let eta = extrapolate_vec(vc, vp);
    let mut sys = LinearSystem {
        c: implicit_matrix(
            theta,
            problem.nu(),
            &[&ops.dx2, &ops.dy2],
            &[(&w, &ops.dx1), (&eta, &ops.dy1)],
        ),
        f: bdf2_rhs(&state.u_curr, &state.u_prev),
        g: Some(bdf2_rhs(vc, vp)),
    };
    enforce_2d(
        &mut sys,
        &problem.grid,
        &problem.bc_u,
        Some(&problem.bc_v),
        cfg.time(state.step_index + 1),
    );
    Ok(sys)
}

/// Factors `C` once and solves for every right-hand side. One step of
/// iterative refinement is applied if the first residual misses the bound.
pub fn solve_linear(sys: &LinearSystem) -> Result<Fields> {
    let n = sys.c.nrows();
    check_len(n, sys.c.ncols())?;
    check_len(n, sys.f.len())?;
    if let Some(g) = &sys.g {
        check_len(n, g.len())?;
    }
    let lu = LuFactor::factor(sys.c.clone())?;
    let solve = |b: &DVector<f64>| -> Result<DVector<f64>> {
        let mut x = lu.solve(b)?;
        if x.iter().any(|v| !v.is_finite()) {
            // Left for the caller to report as divergence.
            return Ok(x);
        }
        let bound = RESIDUAL_BOUND * (1.0 + vec_inf_norm(b.as_slice()));
        let mut r = b - &sys.c * &x;
        if r.amax() > bound {
            x += lu.solve(&r)?;
            r = b - &sys.c * &x;
        }
        let residual = r.amax();
        if residual > bound || !residual.is_finite() {
            return Err(Error::ResidualTooLarge { residual, bound });
        }
        Ok(x)
    };
    Ok(Fields {
        u: solve(&sys.f)?,
        v: sys.g.as_ref().map(solve).transpose()?,
    })
}

/// `‖C x - F‖∞ / (1 + ‖F‖∞)`, maximized over the right-hand sides.
pub fn relative_residual(sys: &LinearSystem, x: &Fields) -> f64 {
    let one = |b: &DVector<f64>, x: &DVector<f64>| {
        (b - &sys.c * x).amax() / (1.0 + vec_inf_norm(b.as_slice()))
    };
    let mut r = one(&sys.f, &x.u);
    if let (Some(g), Some(v)) = (&sys.g, &x.v) {
        r = r.max(one(g, v));
    }
    r
}

/// Grid metadata carried by a [`Solution`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GridInfo {
    OneD(Grid1D),
    TwoD(Grid2D),
}

impl GridInfo {
    pub fn len(&self) -> usize {
        match self {
            GridInfo::OneD(g) => g.len(),
            GridInfo::TwoD(g) => g.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Coordinates of every node in storage order.
    pub fn coords(&self) -> Vec<Vec<f64>> {
        match self {
            GridInfo::OneD(g) => g.nodes().iter().map(|&x| vec![x]).collect(),
            GridInfo::TwoD(g) => g.points().map(|(x, y)| vec![x, y]).collect(),
        }
    }
}

/// A model that can be marched: the 1D, 2D and coupled problems.
pub trait BurgersModel {
    type Operators;

    fn operators(&self) -> Result<Self::Operators>;

    fn grid_info(&self) -> GridInfo;

    fn initial_fields(&self) -> Fields;

    /// Backward-Euler system for `u^1`, advection frozen at `u0`.
    fn startup_system(&self, ops: &Self::Operators, cfg: &TimeConfig, u0: &Fields) -> Result<LinearSystem>;

    /// Forward-Euler update for `u^1` with boundary values at `t_1`.
    fn explicit_startup(&self, ops: &Self::Operators, cfg: &TimeConfig, u0: &Fields) -> Result<Fields>;

    fn assemble(&self, ops: &Self::Operators, cfg: &TimeConfig, state: &BdfState) -> Result<LinearSystem>;
}

impl BurgersModel for Problem1D {
    type Operators = DqPair;

    fn operators(&self) -> Result<DqPair> {
        DqPair::new(&self.grid)
    }

    fn grid_info(&self) -> GridInfo {
        GridInfo::OneD(self.grid.clone())
    }

    fn initial_fields(&self) -> Fields {
        Fields::scalar(DVector::from_vec(self.grid.sample(|x| (self.ic)(x))))
    }

    fn startup_system(&self, ops: &DqPair, cfg: &TimeConfig, u0: &Fields) -> Result<LinearSystem> {
        check_len(self.grid.len(), u0.u.len())?;
        let mut sys = LinearSystem {
            c: implicit_matrix(cfg.dt, self.nu, &[ops.second.entries()], &[(&u0.u, ops.first.entries())]),
            f: u0.u.clone(),
            g: None,
        };
        enforce_1d(&mut sys, self, cfg.time(1));
        Ok(sys)
    }

    fn explicit_startup(&self, ops: &DqPair, cfg: &TimeConfig, u0: &Fields) -> Result<Fields> {
        check_len(self.grid.len(), u0.u.len())?;
        let u = &u0.u;
        let ux = ops.first.entries() * u;
        let uxx = ops.second.entries() * u;
        let mut next = u + (uxx * self.nu - ux.component_mul(u)) * cfg.dt;
        let last = next.len() - 1;
        next[0] = (self.bc_left)(cfg.time(1));
        next[last] = (self.bc_right)(cfg.time(1));
        Ok(Fields::scalar(next))
    }

    fn assemble(&self, ops: &DqPair, cfg: &TimeConfig, state: &BdfState) -> Result<LinearSystem> {
        assemble_1d(self, &ops.first, &ops.second, cfg, state)
    }
}

fn explicit_2d(
    ops: &Operator2D,
    nu: f64,
    dt: f64,
    u: &DVector<f64>,
    adv_x: &DVector<f64>,
    adv_y: &DVector<f64>,
) -> DVector<f64> {
    let lap = &ops.dx2 * u + &ops.dy2 * u;
    let adv = (&ops.dx1 * u).component_mul(adv_x) + (&ops.dy1 * u).component_mul(adv_y);
    u + (lap * nu - adv) * dt
}

impl BurgersModel for Problem2D {
    type Operators = Operator2D;

    fn operators(&self) -> Result<Operator2D> {
        Operator2D::from_grid(&self.grid)
    }

    fn grid_info(&self) -> GridInfo {
        GridInfo::TwoD(self.grid.clone())
    }

    fn initial_fields(&self) -> Fields {
        Fields::scalar(DVector::from_vec(self.grid.sample(|x, y| (self.ic)(x, y))))
    }

    fn startup_system(&self, ops: &Operator2D, cfg: &TimeConfig, u0: &Fields) -> Result<LinearSystem> {
        check_len(self.grid.len(), u0.u.len())?;
        let mut sys = LinearSystem {
            c: implicit_matrix(
                cfg.dt,
                self.nu,
                &[&ops.dx2, &ops.dy2],
                &[(&u0.u, &ops.dx1), (&u0.u, &ops.dy1)],
            ),
            f: u0.u.clone(),
            g: None,
        };
        enforce_2d(&mut sys, &self.grid, &self.bc, None, cfg.time(1));
        Ok(sys)
    }

    fn explicit_startup(&self, ops: &Operator2D, cfg: &TimeConfig, u0: &Fields) -> Result<Fields> {
        check_len(self.grid.len(), u0.u.len())?;
        let mut next = explicit_2d(ops, self.nu, cfg.dt, &u0.u, &u0.u, &u0.u);
        for k in self.grid.boundary_indices() {
            next[k] = self.bc.value(&self.grid, k, cfg.time(1)).unwrap_or(0.0);
        }
        Ok(Fields::scalar(next))
    }

    fn assemble(&self, ops: &Operator2D, cfg: &TimeConfig, state: &BdfState) -> Result<LinearSystem> {
        assemble_2d(self, ops, cfg, state)
    }
}

impl BurgersModel for ProblemCoupled {
    type Operators = Operator2D;

    fn operators(&self) -> Result<Operator2D> {
        Operator2D::from_grid(&self.grid)
    }

    fn grid_info(&self) -> GridInfo {
        GridInfo::TwoD(self.grid.clone())
    }

    fn initial_fields(&self) -> Fields {
        Fields::pair(
            DVector::from_vec(self.grid.sample(|x, y| (self.ic_u)(x, y))),
            DVector::from_vec(self.grid.sample(|x, y| (self.ic_v)(x, y))),
        )
    }

    fn startup_system(&self, ops: &Operator2D, cfg: &TimeConfig, u0: &Fields) -> Result<LinearSystem> {
        let n = self.grid.len();
        check_len(n, u0.u.len())?;
        let v0 = u0.v.as_ref().ok_or(Error::MissingParameter("v initial state"))?;
        check_len(n, v0.len())?;
        let mut sys = LinearSystem {
            c: implicit_matrix(
                cfg.dt,
                self.nu(),
                &[&ops.dx2, &ops.dy2],
                &[(&u0.u, &ops.dx1), (v0, &ops.dy1)],
            ),
            f: u0.u.clone(),
            g: Some(v0.clone()),
        };
        enforce_2d(&mut sys, &self.grid, &self.bc_u, Some(&self.bc_v), cfg.time(1));
        Ok(sys)
    }

    fn explicit_startup(&self, ops: &Operator2D, cfg: &TimeConfig, u0: &Fields) -> Result<Fields> {
        let n = self.grid.len();
        check_len(n, u0.u.len())?;
        let v0 = u0.v.as_ref().ok_or(Error::MissingParameter("v initial state"))?;
        check_len(n, v0.len())?;
        let mut u = explicit_2d(ops, self.nu(), cfg.dt, &u0.u, &u0.u, v0);
        let mut v = explicit_2d(ops, self.nu(), cfg.dt, v0, &u0.u, v0);
        let t1 = cfg.time(1);
        for k in self.grid.boundary_indices() {
            u[k] = self.bc_u.value(&self.grid, k, t1).unwrap_or(0.0);
            v[k] = self.bc_v.value(&self.grid, k, t1).unwrap_or(0.0);
        }
        Ok(Fields::pair(u, v))
    }

    fn assemble(&self, ops: &Operator2D, cfg: &TimeConfig, state: &BdfState) -> Result<LinearSystem> {
        assemble_coupled(self, ops, cfg, state)
    }
}

/// `u^1` by backward Euler with the advection coefficient frozen at `u0`.
pub fn bdf1_startup<M: BurgersModel>(
    model: &M,
    ops: &M::Operators,
    cfg: &TimeConfig,
    u0: &Fields,
) -> Result<Fields> {
    solve_linear(&model.startup_system(ops, cfg, u0)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarchOptions {
    /// Record a snapshot every this many steps (and always at `t_final`).
    pub sample_every: usize,
    pub startup: StartupKind,
}

impl Default for MarchOptions {
    fn default() -> Self {
        Self {
            sample_every: 1,
            startup: StartupKind::Implicit,
        }
    }
}

impl MarchOptions {
    pub fn every(sample_every: usize) -> Self {
        Self {
            sample_every,
            ..Self::default()
        }
    }
}

/// Time-indexed snapshots of a march.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub grid: GridInfo,
    pub config: TimeConfig,
    pub steps: Vec<usize>,
    pub times: Vec<f64>,
    pub u: Vec<Vec<f64>>,
    pub v: Option<Vec<Vec<f64>>>,
    /// Largest `‖C x - F‖∞ / (1 + ‖F‖∞)` over all implicit solves.
    pub max_residual: f64,
}

impl Solution {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Snapshot index recorded at time `t`.
    pub fn index_at(&self, t: f64) -> Option<usize> {
        let step = self.config.step_of(t)?;
        self.steps.iter().position(|&s| s == step)
    }

    pub fn u_at(&self, t: f64) -> Result<&[f64]> {
        self.index_at(t)
            .map(|i| self.u[i].as_slice())
            .ok_or(Error::TimeNotSampled(t))
    }

    pub fn v_at(&self, t: f64) -> Result<&[f64]> {
        let v = self.v.as_ref().ok_or(Error::MissingParameter("v snapshots"))?;
        self.index_at(t)
            .map(|i| v[i].as_slice())
            .ok_or(Error::TimeNotSampled(t))
    }

    pub fn final_u(&self) -> &[f64] {
        self.u.last().map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn final_v(&self) -> Option<&[f64]> {
        self.v.as_ref().and_then(|v| v.last()).map(Vec::as_slice)
    }

    fn record(&mut self, step: usize, fields: &Fields) {
        self.steps.push(step);
        self.times.push(self.config.time(step));
        self.u.push(fields.u.as_slice().to_vec());
        if let (Some(vs), Some(v)) = (self.v.as_mut(), fields.v.as_ref()) {
            vs.push(v.as_slice().to_vec());
        }
    }
}

fn diverged(step: usize, fields: &Fields) -> Option<Error> {
    fields
        .first_non_finite()
        .map(|(node, value)| Error::Divergence { step, node, value })
}

pub fn march<M: BurgersModel>(model: &M, cfg: &TimeConfig, opts: &MarchOptions) -> Result<Solution> {
    march_with_progress(model, cfg, opts, |_, _| {})
}

/// As [`march`], calling `progress(step, total)` after every step.
pub fn march_with_progress<M: BurgersModel>(
    model: &M,
    cfg: &TimeConfig,
    opts: &MarchOptions,
    mut progress: impl FnMut(usize, usize),
) -> Result<Solution> {
    cfg.validate()?;
    if opts.sample_every == 0 {
        return Err(Error::InvalidArgument("sample_every must be at least 1".into()));
    }
    let total = cfg.steps();
    let ops = model.operators()?;
    let u0 = model.initial_fields();
    if let Some(e) = diverged(0, &u0) {
        return Err(e);
    }

    let mut sol = Solution {
        grid: model.grid_info(),
        config: *cfg,
        steps: Vec::new(),
        times: Vec::new(),
        u: Vec::new(),
        v: u0.v.as_ref().map(|_| Vec::new()),
        max_residual: 0.0,
    };
    let wanted = |n: usize| n.is_multiple_of(opts.sample_every) || n == total;
    sol.record(0, &u0);

    let u1 = match opts.startup {
        StartupKind::Implicit => {
            let sys = model.startup_system(&ops, cfg, &u0)?;
            let x = solve_linear(&sys)?;
            sol.max_residual = sol.max_residual.max(relative_residual(&sys, &x));
            x
        }
        StartupKind::Explicit => model.explicit_startup(&ops, cfg, &u0)?,
    };
    if let Some(e) = diverged(1, &u1) {
        return Err(e);
    }
    if wanted(1) {
        sol.record(1, &u1);
    }
    progress(1, total);

    let mut state = BdfState::new(u0, u1, 1, cfg.dt);
    for n in 1..total {
        let sys = model.assemble(&ops, cfg, &state)?;
        let next = solve_linear(&sys)?;
        sol.max_residual = sol.max_residual.max(relative_residual(&sys, &next));
        if let Some(e) = diverged(n + 1, &next) {
            return Err(e);
        }
        state.advance(next, cfg.dt);
        if wanted(n + 1) {
            sol.record(n + 1, &state.curr());
        }
        progress(n + 1, total);
    }
    Ok(sol)
}

/// Any of the three models, for callers that pick one at run time.
#[derive(Debug, Clone)]
pub enum AnyProblem {
    OneD(Problem1D),
    TwoD(Problem2D),
    Coupled(ProblemCoupled),
}

impl AnyProblem {
    pub fn march_with_progress(
        &self,
        cfg: &TimeConfig,
        opts: &MarchOptions,
        progress: impl FnMut(usize, usize),
    ) -> Result<Solution> {
        match self {
            AnyProblem::OneD(p) => march_with_progress(p, cfg, opts, progress),
            AnyProblem::TwoD(p) => march_with_progress(p, cfg, opts, progress),
            AnyProblem::Coupled(p) => march_with_progress(p, cfg, opts, progress),
        }
    }

    pub fn march(&self, cfg: &TimeConfig, opts: &MarchOptions) -> Result<Solution> {
        self.march_with_progress(cfg, opts, |_, _| {})
    }

    pub fn grid_info(&self) -> GridInfo {
        match self {
            AnyProblem::OneD(p) => p.grid_info(),
            AnyProblem::TwoD(p) => p.grid_info(),
            AnyProblem::Coupled(p) => p.grid_info(),
        }
    }
}
