//! Generalized differential quadrature (GDQ) weighting matrices.
//!
//! The first-derivative weights come from differentiating the Lagrange
//! basis on the grid:
//!
//! ```text
//! a_ij = Q_i / ((x_i - x_j) Q_j),   i != j,     Q_i = prod_{k != i} (x_i - x_k)
//! a_ii = -sum_{j != i} a_ij
//! ```
//!
//! Higher orders are plain matrix powers, `A^(m) = A^m`. Two-dimensional
//! operators are Kronecker lifts under the x-major flattening of
//! [`crate::grid::Grid2D`].

use nalgebra::{DMatrix, DVector};

use crate::error::{check_len, Error, Result};
use crate::grid::{Grid1D, Grid2D};

/// Dense `M x M` differentiation matrix of a given derivative order.
#[derive(Debug, Clone, PartialEq)]
pub struct DqMatrix {
    entries: DMatrix<f64>,
    order: usize,
}

impl DqMatrix {
    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<f64> {
        self.entries
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of grid nodes `M`.
    pub fn len(&self) -> usize {
        self.entries.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    /// Largest absolute row sum; zero in exact arithmetic.
    pub fn max_row_sum(&self) -> f64 {
        self.entries
            .row_iter()
            .map(|r| r.sum().abs())
            .fold(0.0, f64::max)
    }
}

pub fn first_derivative_matrix(grid: &Grid1D) -> Result<DqMatrix> {
    let x = grid.nodes();
    let m = x.len();
    if m < 2 {
        return Err(Error::DegenerateGrid(format!("{m} nodes")));
    }

    let mut q = vec![1.0; m];
    for i in 0..m {
        for j in 0..m {
            if i != j {
                let d = x[i] - x[j];
                if d == 0.0 {
                    return Err(Error::DegenerateGrid(format!(
                        "nodes {i} and {j} coincide at {}",
                        x[i]
                    )));
                }
                q[i] *= d;
            }
        }
        if q[i] == 0.0 || !q[i].is_finite() {
            return Err(Error::DegenerateGrid(format!(
                "node product Q_{i} = {} is not representable",
                q[i]
            )));
        }
    }

    let mut a = DMatrix::zeros(m, m);
    for i in 0..m {
        let mut diag = 0.0;
        for j in 0..m {
            if i != j {
                let w = q[i] / ((x[i] - x[j]) * q[j]);
                a[(i, j)] = w;
                diag -= w;
            }
        }
        a[(i, i)] = diag;
    }
    Ok(DqMatrix {
        entries: a,
        order: 1,
    })
}

/// `A^order` by repeated multiplication of a first-derivative matrix.
pub fn higher_derivative_matrix(a1: &DqMatrix, order: usize) -> Result<DqMatrix> {
    if a1.order != 1 {
        return Err(Error::InvalidArgument(format!(
            "expected a first-derivative matrix, got order {}",
            a1.order
        )));
    }
    if order == 0 {
        return Err(Error::InvalidArgument(
            "derivative order must be at least 1".into(),
        ));
    }
    let mut p = a1.entries.clone();
    for _ in 1..order {
        p = &p * &a1.entries;
    }
    Ok(DqMatrix { entries: p, order })
}

pub fn apply_derivative(d: &DqMatrix, u: &[f64]) -> Result<Vec<f64>> {
    check_len(d.len(), u.len())?;
    let v = &d.entries * DVector::from_column_slice(u);
    Ok(v.as_slice().to_vec())
}

/// First- and second-derivative matrices on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DqPair {
    pub first: DqMatrix,
    pub second: DqMatrix,
}

impl DqPair {
    pub fn new(grid: &Grid1D) -> Result<Self> {
        let first = first_derivative_matrix(grid)?;
        let second = higher_derivative_matrix(&first, 2)?;
        Ok(Self { first, second })
    }
}

/// Full-grid partial derivative operators on a [`Grid2D`].
#[derive(Debug, Clone, PartialEq)]
pub struct Operator2D {
    pub dx1: DMatrix<f64>,
    pub dx2: DMatrix<f64>,
    pub dy1: DMatrix<f64>,
    pub dy2: DMatrix<f64>,
    pub grid: Grid2D,
}

impl Operator2D {
    /// Builds the lifted operators directly from a grid.
    pub fn from_grid(grid: &Grid2D) -> Result<Self> {
        let x = DqPair::new(grid.gx())?;
        let y = DqPair::new(grid.gy())?;
        lift_to_2d(&x.first, &x.second, &y.first, &y.second, grid)
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }
}

/// `Dx^(m) = A^(m) ⊗ I_My` and `Dy^(m) = I_Mx ⊗ B^(m)`.
pub fn lift_to_2d(
    ax1: &DqMatrix,
    ax2: &DqMatrix,
    by1: &DqMatrix,
    by2: &DqMatrix,
    grid: &Grid2D,
) -> Result<Operator2D> {
    let (mx, my) = (grid.mx(), grid.my());
    check_len(mx, ax1.len())?;
    check_len(mx, ax2.len())?;
    check_len(my, by1.len())?;
    check_len(my, by2.len())?;
    let ix = DMatrix::<f64>::identity(mx, mx);
    let iy = DMatrix::<f64>::identity(my, my);
    Ok(Operator2D {
        dx1: ax1.entries.kronecker(&iy),
        dx2: ax2.entries.kronecker(&iy),
        dy1: ix.kronecker(&by1.entries),
        dy2: ix.kronecker(&by2.entries),
        grid: grid.clone(),
    })
}

/// The `(M-2) x (M-2)` block of `m` on interior rows and columns.
pub fn interior_block(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    m.view((1, 1), (n.saturating_sub(2), n.saturating_sub(2)))
        .into_owned()
}
