//! Frozen-coefficient stability analysis.
//!
//! Freezing the advecting velocity at a state `U` turns the interior
//! semi-discrete system into `dU/dt = P U + E`, with
//! `P = -alpha diag(U) A1 + nu A2` in 1D and the block-diagonal
//! `R = diag(A, B)` for the coupled system, where both blocks are
//! `-diag(U) Dx - diag(V) Dy + nu (Dxx + Dyy)` on interior nodes. The scheme
//! is stable when no eigenvalue has a positive real part.

use std::f64::consts::PI;
use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dqm::{interior_block, DqPair, Operator2D};
use crate::error::{check_len, Error, Result};
use crate::exact::exact_coupled;
use crate::grid::{chebyshev_gauss_lobatto, tensor_grid, Grid1D, Grid2D, Interval};
use crate::linalg::{eigenvalues, inf_norm};
use crate::stepper::{Fn2, GridInfo};

pub const MIN_NODES: usize = 4;

/// Verdict tolerance relative to `‖matrix‖∞`.
pub const RELATIVE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FrozenKind {
    #[serde(rename = "p-1d")]
    P1d,
    #[serde(rename = "r-coupled")]
    RCoupled,
    #[serde(rename = "a-block")]
    ABlock,
    #[serde(rename = "b-block")]
    BBlock,
}

#[derive(Debug, Clone)]
pub struct FrozenOperator {
    pub matrix: DMatrix<f64>,
    pub kind: FrozenKind,
    pub grid: GridInfo,
    pub nu: f64,
    pub frozen_u: Vec<f64>,
    pub frozen_v: Option<Vec<f64>>,
}

impl FrozenOperator {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

fn check_nodes(nodes: usize) -> Result<()> {
    if nodes < MIN_NODES {
        return Err(Error::GridTooSmall {
            nodes,
            min: MIN_NODES,
        });
    }
    Ok(())
}

fn check_viscosity(nu: f64) -> Result<()> {
    if !(nu >= 0.0 && nu.is_finite()) {
        return Err(Error::InvalidArgument(format!("viscosity must be finite and non-negative, got {nu}")));
    }
    Ok(())
}

pub fn assemble_p_1d(grid: &Grid1D, nu: f64, frozen_u: &[f64], alpha: f64) -> Result<FrozenOperator> {
    check_nodes(grid.len())?;
    check_len(grid.len(), frozen_u.len())?;
    check_viscosity(nu)?;
    let pair = DqPair::new(grid)?;
    let a1 = interior_block(pair.first.entries());
    let a2 = interior_block(pair.second.entries());
    let n = grid.len() - 2;
    let matrix = DMatrix::from_fn(n, n, |r, c| -alpha * frozen_u[r + 1] * a1[(r, c)] + nu * a2[(r, c)]);
    Ok(FrozenOperator {
        matrix,
        kind: FrozenKind::P1d,
        grid: GridInfo::OneD(grid.clone()),
        nu,
        frozen_u: frozen_u.to_vec(),
        frozen_v: None,
    })
}

fn coupled_block(grid: &Grid2D, nu: f64, frozen_u: &[f64], frozen_v: &[f64]) -> Result<DMatrix<f64>> {
    check_nodes(grid.mx().min(grid.my()))?;
    check_len(grid.len(), frozen_u.len())?;
    check_len(grid.len(), frozen_v.len())?;
    check_viscosity(nu)?;
    let ops = Operator2D::from_grid(grid)?;
    let idx = grid.interior_indices();
    let n = idx.len();
    Ok(DMatrix::from_fn(n, n, |r, c| {
        let (kr, kc) = (idx[r], idx[c]);
        -frozen_u[kr] * ops.dx1[(kr, kc)] - frozen_v[kr] * ops.dy1[(kr, kc)]
            + nu * (ops.dx2[(kr, kc)] + ops.dy2[(kr, kc)])
    }))
}

/// One diagonal block of `R`; the u and v equations share it.
pub fn assemble_block_coupled(
    grid: &Grid2D,
    reynolds: f64,
    frozen_u: &[f64],
    frozen_v: &[f64],
    kind: FrozenKind,
) -> Result<FrozenOperator> {
    if !matches!(kind, FrozenKind::ABlock | FrozenKind::BBlock) {
        return Err(Error::InvalidArgument(format!("{kind:?} is not a coupled block")));
    }
    let nu = reynolds_to_nu(reynolds)?;
    Ok(FrozenOperator {
        matrix: coupled_block(grid, nu, frozen_u, frozen_v)?,
        kind,
        grid: GridInfo::TwoD(grid.clone()),
        nu,
        frozen_u: frozen_u.to_vec(),
        frozen_v: Some(frozen_v.to_vec()),
    })
}

fn reynolds_to_nu(reynolds: f64) -> Result<f64> {
    if !(reynolds > 0.0) {
        return Err(Error::InvalidArgument(format!("Reynolds number must be positive, got {reynolds}")));
    }
    Ok(1.0 / reynolds)
}

/// `R = diag(A, B)`; `reynolds = inf` drops the diffusion.
pub fn assemble_r_coupled(
    grid: &Grid2D,
    reynolds: f64,
    frozen_u: &[f64],
    frozen_v: &[f64],
) -> Result<FrozenOperator> {
    let nu = reynolds_to_nu(reynolds)?;
    let block = coupled_block(grid, nu, frozen_u, frozen_v)?;
    let n = block.nrows();
    let mut matrix = DMatrix::zeros(2 * n, 2 * n);
    matrix.view_mut((0, 0), (n, n)).copy_from(&block);
    matrix.view_mut((n, n), (n, n)).copy_from(&block);
    Ok(FrozenOperator {
        matrix,
        kind: FrozenKind::RCoupled,
        grid: GridInfo::TwoD(grid.clone()),
        nu,
        frozen_u: frozen_u.to_vec(),
        frozen_v: Some(frozen_v.to_vec()),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub eigenvalues: Vec<Complex64>,
    pub max_real_part: f64,
    pub verdict: bool,
    pub tolerance: f64,
}

pub fn spectrum(op: &FrozenOperator) -> Result<StabilityReport> {
    spectrum_of(&op.matrix, RELATIVE_TOLERANCE * inf_norm(&op.matrix))
}

pub fn spectrum_of(matrix: &DMatrix<f64>, tolerance: f64) -> Result<StabilityReport> {
    let eigenvalues = eigenvalues(matrix)?;
    let max_real_part = eigenvalues
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(StabilityReport {
        verdict: eigenvalues.is_empty() || max_real_part <= tolerance,
        eigenvalues,
        max_real_part,
        tolerance,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepModel {
    Burgers1d,
    Coupled,
}

/// State the coefficients are frozen at.
#[derive(Clone, Default)]
pub enum FrozenPolicy {
    Zero,
    /// Wood initial data with `sigma = 2` in 1D; the exact coupled
    /// solution at `t = 0` for the coupled model.
    #[default]
    InitialCondition,
    /// Arbitrary fields `(x, y) -> value`; `y` is 0 in 1D.
    Field { u: Fn2, v: Fn2 },
}

impl std::fmt::Debug for FrozenPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FrozenPolicy::Zero => f.write_str("Zero"),
            FrozenPolicy::InitialCondition => f.write_str("InitialCondition"),
            FrozenPolicy::Field { .. } => f.write_str("Field"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub size: usize,
    pub report: StabilityReport,
}

/// One report per size; `size` is the node count per direction and
/// `nu_or_re` is `nu` in 1D and `Re` for the coupled model.
pub fn stability_sweep(
    model: SweepModel,
    sizes: &[usize],
    nu_or_re: f64,
    frozen: &FrozenPolicy,
) -> Result<Vec<SweepEntry>> {
    sizes
        .iter()
        .map(|&size| {
            let op = sweep_operator(model, size, nu_or_re, frozen)?;
            Ok(SweepEntry {
                size,
                report: spectrum(&op)?,
            })
        })
        .collect()
}

pub fn sweep_operator(
    model: SweepModel,
    size: usize,
    nu_or_re: f64,
    frozen: &FrozenPolicy,
) -> Result<FrozenOperator> {
    check_nodes(size)?;
    let grid = chebyshev_gauss_lobatto(Interval::unit(), size)?;
    match model {
        SweepModel::Burgers1d => {
            let nu = nu_or_re;
            let u = match frozen {
                FrozenPolicy::Zero => vec![0.0; size],
                FrozenPolicy::InitialCondition => {
                    grid.sample(|x| 2.0 * nu * PI * (PI * x).sin() / (2.0 + (PI * x).cos()))
                }
                FrozenPolicy::Field { u, .. } => grid.sample(|x| u(x, 0.0)),
            };
            assemble_p_1d(&grid, nu, &u, 1.0)
        }
        SweepModel::Coupled => {
            let re = nu_or_re;
            let grid = tensor_grid(grid.clone(), grid);
            let (u, v) = match frozen {
                FrozenPolicy::Zero => (vec![0.0; grid.len()], vec![0.0; grid.len()]),
                FrozenPolicy::InitialCondition => (
                    grid.sample(|x, y| exact_coupled(x, y, 0.0, re).0),
                    grid.sample(|x, y| exact_coupled(x, y, 0.0, re).1),
                ),
                FrozenPolicy::Field { u, v } => (grid.sample(|x, y| u(x, y)), grid.sample(|x, y| v(x, y))),
            };
            assemble_r_coupled(&grid, re, &u, &v)
        }
    }
}

/// Columns `size,eig_index,re,im,max_real_part,verdict`.
pub fn write_sweep_csv<W: Write>(entries: &[SweepEntry], mut out: W) -> std::io::Result<()> {
    writeln!(out, "size,eig_index,re,im,max_real_part,verdict")?;
    for e in entries {
        for (i, z) in e.report.eigenvalues.iter().enumerate() {
            writeln!(
                out,
                "{},{},{:.16e},{:.16e},{:.16e},{}",
                e.size, i, z.re, z.im, e.report.max_real_part, e.report.verdict
            )?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::LuFactor;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unit(m: usize) -> Grid1D {
        chebyshev_gauss_lobatto(Interval::unit(), m).unwrap()
    }

    fn square(m: usize) -> Grid2D {
        tensor_grid(unit(m), unit(m))
    }

    /// Greedy multiset match of two spectra.
    fn same_spectrum(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
        if a.len() != b.len() {
            return false;
        }
        let mut used = vec![false; b.len()];
        a.iter().all(|z| {
            let best = (0..b.len())
                .filter(|&j| !used[j])
                .min_by(|&i, &j| (b[i] - z).norm().total_cmp(&(b[j] - z).norm()));
            match best {
                Some(j) if (b[j] - z).norm() <= tol => {
                    used[j] = true;
                    true
                }
                _ => false,
            }
        })
    }

    #[test]
    fn p_1d_examples() {
        let g = unit(10);
        let zero = vec![0.0; 10];
        let op = assemble_p_1d(&g, 0.7, &zero, 1.0).unwrap();
        assert_eq!(op.dim(), 8);
        let a2 = interior_block(DqPair::new(&g).unwrap().second.entries());
        assert!((&op.matrix - a2 * 0.7).amax() < 1e-12);

        let op = assemble_p_1d(&g, 0.0, &zero, 1.0).unwrap();
        assert_eq!(op.matrix.amax(), 0.0);
        let rep = spectrum(&op).unwrap();
        assert!(rep.verdict && rep.eigenvalues.iter().all(|z| z.norm() == 0.0));

        let rep = spectrum(&assemble_p_1d(&g, 1.0, &zero, 1.0).unwrap()).unwrap();
        assert!(rep.max_real_part < 0.0 && rep.verdict);
        assert_eq!(rep.eigenvalues.len(), 8);
    }

    #[test]
    fn p_1d_advection_term() {
        let g = unit(6);
        let u: Vec<f64> = g.nodes().iter().map(|x| 1.0 + x).collect();
        let op = assemble_p_1d(&g, 0.0, &u, 2.0).unwrap();
        let a1 = DqPair::new(&g).unwrap().first.into_entries();
        assert!((op.matrix[(1, 3)] + 2.0 * u[2] * a1[(2, 4)]).abs() < 1e-14);
    }

    #[test]
    fn p_1d_errors() {
        assert!(matches!(
            assemble_p_1d(&unit(3), 1.0, &[0.0; 3], 1.0),
            Err(Error::GridTooSmall { nodes: 3, .. })
        ));
        assert!(assemble_p_1d(&unit(5), 1.0, &[0.0; 4], 1.0).is_err());
        assert!(assemble_p_1d(&unit(5), -1.0, &[0.0; 5], 1.0).is_err());
    }

    #[test]
    fn r_coupled_examples() {
        let g = square(6);
        let zero = vec![0.0; g.len()];
        let op = assemble_r_coupled(&g, 40.0, &zero, &zero).unwrap();
        assert_eq!(op.dim(), 2 * 4 * 4);
        let ops = Operator2D::from_grid(&g).unwrap();
        let idx = g.interior_indices();
        let lap = &ops.dx2 + &ops.dy2;
        let n = idx.len();
        for r in 0..n {
            for c in 0..n {
                let want = lap[(idx[r], idx[c])] / 40.0;
                assert!((op.matrix[(r, c)] - want).abs() < 1e-12);
                assert!((op.matrix[(r + n, c + n)] - want).abs() < 1e-12);
                assert_eq!(op.matrix[(r, c + n)], 0.0);
            }
        }
        let rep = spectrum(&op).unwrap();
        assert!(rep.verdict);
        assert!(rep.eigenvalues.iter().all(|z| z.re <= 0.0 && z.im.abs() <= rep.tolerance));

        let op = assemble_r_coupled(&g, f64::INFINITY, &zero, &zero).unwrap();
        assert_eq!(op.matrix.amax(), 0.0);

        assert!(assemble_r_coupled(&square(3), 10.0, &[0.0; 9], &[0.0; 9]).is_err());
        assert!(assemble_r_coupled(&g, 0.0, &zero, &zero).is_err());
        let b = assemble_block_coupled(&g, 40.0, &zero, &zero, FrozenKind::BBlock).unwrap();
        assert_eq!(b.matrix, op_block(&g, 40.0));
        assert!(assemble_block_coupled(&g, 40.0, &zero, &zero, FrozenKind::P1d).is_err());
    }

    fn op_block(g: &Grid2D, re: f64) -> DMatrix<f64> {
        let zero = vec![0.0; g.len()];
        let r = assemble_r_coupled(g, re, &zero, &zero).unwrap();
        let n = r.dim() / 2;
        r.matrix.view((0, 0), (n, n)).into_owned()
    }

    #[test]
    fn coupled_at_initial_data_is_stable() {
        let op = sweep_operator(SweepModel::Coupled, 10, 100.0, &FrozenPolicy::InitialCondition).unwrap();
        assert_eq!(op.dim(), 2 * 8 * 8);
        let rep = spectrum(&op).unwrap();
        assert!(rep.verdict, "max real part {}", rep.max_real_part);
    }

    #[test]
    fn spectrum_examples() {
        let rep = spectrum_of(&DMatrix::zeros(3, 3), 0.0).unwrap();
        assert!(rep.verdict && rep.max_real_part == 0.0);

        let rep = spectrum_of(&DMatrix::from_diagonal(&nalgebra::dvector![-1.0, -2.0]), 0.0).unwrap();
        assert_eq!(rep.max_real_part, -1.0);
        assert!(same_spectrum(&rep.eigenvalues, &[Complex64::new(-1.0, 0.0), Complex64::new(-2.0, 0.0)], 1e-14));

        let rep = spectrum_of(&DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]), 1e-8).unwrap();
        assert!(rep.max_real_part.abs() < 1e-15 && rep.verdict);
        assert!(same_spectrum(&rep.eigenvalues, &[Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0)], 1e-14));

        let rep = spectrum_of(&DMatrix::from_diagonal(&nalgebra::dvector![1e-3, -2.0]), 1e-8).unwrap();
        assert!(!rep.verdict);
    }

    fn random_operator(rng: &mut ChaCha8Rng, m: usize) -> DMatrix<f64> {
        let g = unit(m);
        let u: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
        assemble_p_1d(&g, rng.gen_range(0.01..1.0), &u, 1.0).unwrap().matrix
    }

    #[test]
    fn spectral_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for m in [5, 9, 14, 22] {
            let a = random_operator(&mut rng, m);
            let eig = spectrum_of(&a, 0.0).unwrap().eigenvalues;
            let scale = eig.iter().map(|z| z.norm()).fold(1.0, f64::max);

            let conj: Vec<Complex64> = eig.iter().map(|z| z.conj()).collect();
            assert!(same_spectrum(&eig, &conj, 1e-8 * scale), "m={m}");

            let sum: Complex64 = eig.iter().sum();
            assert!((sum.re - a.trace()).abs() <= 1e-6 * a.trace().abs().max(1.0));
            assert!(sum.im.abs() <= 1e-6 * scale);

            let prod: Complex64 = eig.iter().product();
            let det = LuFactor::factor(a.clone()).unwrap().determinant();
            assert!((prod.norm() - det.abs()).abs() <= 1e-4 * det.abs(), "m={m}");
        }
    }

    #[test]
    fn similarity_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [4usize, 11, 20] {
            let a = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
            let mut s = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-0.3..0.3));
            for i in 0..n {
                s[(i, i)] += 2.0;
            }
            let s_inv = s.clone().try_inverse().unwrap();
            let b = &s_inv * &a * &s;
            let ea = spectrum_of(&a, 0.0).unwrap().eigenvalues;
            let eb = spectrum_of(&b, 0.0).unwrap().eigenvalues;
            assert!(same_spectrum(&ea, &eb, 1e-6), "n={n}");
        }
    }

    #[test]
    fn sweeps() {
        let out = stability_sweep(SweepModel::Burgers1d, &[10, 17, 24, 31], 1.0, &FrozenPolicy::Zero).unwrap();
        assert_eq!(out.len(), 4);
        for e in &out {
            assert!(e.report.verdict, "size {}", e.size);
            assert!(e.report.eigenvalues.iter().all(|z| z.re < 0.0));
            assert_eq!(e.report.eigenvalues.len(), e.size - 2);
        }
        assert!(stability_sweep(SweepModel::Coupled, &[], 100.0, &FrozenPolicy::Zero)
            .unwrap()
            .is_empty());
        assert!(stability_sweep(SweepModel::Burgers1d, &[3], 1.0, &FrozenPolicy::Zero).is_err());

        let ic = stability_sweep(SweepModel::Burgers1d, &[12], 0.1, &FrozenPolicy::InitialCondition).unwrap();
        assert!(ic[0].report.verdict);

        let field = FrozenPolicy::Field {
            u: std::sync::Arc::new(|x, _| x),
            v: std::sync::Arc::new(|_, _| 0.0),
        };
        let op = sweep_operator(SweepModel::Burgers1d, 6, 0.0, &field).unwrap();
        assert_eq!(op.frozen_u, unit(6).nodes().to_vec());
    }

    #[test]
    fn sweep_csv_layout() {
        let out = stability_sweep(SweepModel::Burgers1d, &[4, 5], 1.0, &FrozenPolicy::Zero).unwrap();
        let mut buf = Vec::new();
        write_sweep_csv(&out, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "size,eig_index,re,im,max_real_part,verdict");
        assert_eq!(lines.len(), 1 + 2 + 3);
        assert!(lines[1].starts_with("4,0,") && lines[1].ends_with(",true"));
        assert!(lines[5].starts_with("5,2,"));
    }
}
