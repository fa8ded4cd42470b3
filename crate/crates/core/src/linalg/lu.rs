//! Dense LU factorization with partial pivoting.
//!
//! The factors are stored in place over a column-major copy of the input;
//! the elimination and triangular solves walk columns so the inner loops run
//! over contiguous memory.

use nalgebra::{DMatrix, DVector};

use crate::error::{check_len, Error, Result};

/// Pivots smaller than this fraction of `‖A‖∞` are treated as singular.
pub const SINGULAR_PIVOT_RATIO: f64 = 1e-13;

/// Maximum absolute row sum.
pub fn inf_norm(a: &DMatrix<f64>) -> f64 {
    let (n, m) = a.shape();
    let mut sums = vec![0.0; n];
    for j in 0..m {
        for (s, v) in sums.iter_mut().zip(a.column(j).iter()) {
            *s += v.abs();
        }
    }
    sums.into_iter().fold(0.0, f64::max)
}

pub fn vec_inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[derive(Debug, Clone)]
pub struct LuFactor {
    lu: DMatrix<f64>,
    perm: Vec<usize>,
    swaps: usize,
}

impl LuFactor {
    /// Factors `a` as `P A = L U`.
    pub fn factor(a: DMatrix<f64>) -> Result<Self> {
        let (n, m) = a.shape();
        if n != m {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: m,
            });
        }
        let threshold = SINGULAR_PIVOT_RATIO * inf_norm(&a);
        let mut lu = a;
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        let data = lu.as_mut_slice();

        for k in 0..n {
            let col_k = &data[k * n..(k + 1) * n];
            let (mut p, mut best) = (k, col_k[k].abs());
            for (i, v) in col_k.iter().enumerate().skip(k + 1) {
                if v.abs() > best {
                    best = v.abs();
                    p = i;
                }
            }
            if best < threshold || best == 0.0 || !best.is_finite() {
                return Err(Error::SingularMatrix {
                    column: k,
                    pivot: best,
                    threshold,
                });
            }
            if p != k {
                for j in 0..n {
                    data.swap(j * n + k, j * n + p);
                }
                perm.swap(k, p);
                swaps += 1;
            }

            let pivot = data[k * n + k];
            for v in &mut data[k * n + k + 1..(k + 1) * n] {
                *v /= pivot;
            }

            let (head, tail) = data.split_at_mut((k + 1) * n);
            let lcol = &head[k * n + k + 1..(k + 1) * n];
            for col in tail.chunks_exact_mut(n) {
                let ukj = col[k];
                if ukj != 0.0 {
                    for (c, l) in col[k + 1..].iter_mut().zip(lcol) {
                        *c -= l * ukj;
                    }
                }
            }
        }
        Ok(Self { lu, perm, swaps })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &DVector<f64>) -> Result<DVector<f64>> {
        check_len(self.dim(), b.len())?;
        let mut x = b.clone();
        self.solve_in_place(x.as_mut_slice());
        Ok(x)
    }

    /// Overwrites `b` with the solution of `A x = b`. Panics on a length mismatch.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.dim();
        assert_eq!(b.len(), n, "right-hand side length");
        let permuted: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        b.copy_from_slice(&permuted);

        let data = self.lu.as_slice();
        for k in 0..n {
            let xk = b[k];
            if xk != 0.0 {
                let col = &data[k * n + k + 1..(k + 1) * n];
                for (bi, l) in b[k + 1..].iter_mut().zip(col) {
                    *bi -= l * xk;
                }
            }
        }
        for k in (0..n).rev() {
            b[k] /= data[k * n + k];
            let xk = b[k];
            if xk != 0.0 {
                let col = &data[k * n..k * n + k];
                for (bi, u) in b[..k].iter_mut().zip(col) {
                    *bi -= u * xk;
                }
            }
        }
    }

    pub fn determinant(&self) -> f64 {
        let d: f64 = self.lu.diagonal().iter().product();
        if self.swaps.is_multiple_of(2) {
            d
        } else {
            -d
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_and_diagonal() {
        let lu = LuFactor::factor(DMatrix::identity(3, 3)).unwrap();
        let b = DVector::from_vec(vec![1.0, -2.0, 3.5]);
        assert_eq!(lu.solve(&b).unwrap(), b);

        let lu = LuFactor::factor(DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 4.0])).unwrap();
        let x = lu.solve(&DVector::from_vec(vec![2.0, 8.0])).unwrap();
        assert_eq!(x.as_slice(), &[1.0, 2.0]);
        assert_eq!(lu.determinant(), 8.0);
    }

    #[test]
    fn pivoting_is_needed() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let lu = LuFactor::factor(a).unwrap();
        let x = lu.solve(&DVector::from_vec(vec![3.0, 5.0])).unwrap();
        assert_eq!(x.as_slice(), &[5.0, 3.0]);
        assert_eq!(lu.determinant(), -1.0);
    }

    #[test]
    fn singular_and_shape_errors() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(matches!(
            LuFactor::factor(a),
            Err(Error::SingularMatrix { column: 1, .. })
        ));
        assert!(matches!(
            LuFactor::factor(DMatrix::zeros(2, 3)),
            Err(Error::DimensionMismatch { .. })
        ));
        let lu = LuFactor::factor(DMatrix::identity(2, 2)).unwrap();
        assert!(lu.solve(&DVector::zeros(3)).is_err());
    }

    #[test]
    fn random_systems_have_small_residuals() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1, 2, 10, 37] {
            let mut a = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
            for i in 0..n {
                a[(i, i)] += n as f64;
            }
            let b = DVector::from_fn(n, |_, _| rng.gen_range(-5.0..5.0));
            let x = LuFactor::factor(a.clone()).unwrap().solve(&b).unwrap();
            let r = &a * &x - &b;
            assert!(r.amax() <= 1e-10 * b.amax(), "n={n}");
        }
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let a = DMatrix::from_row_slice(3, 3, &[2.0, -1.0, 0.5, 4.0, 3.0, -2.0, 1.0, 0.0, 6.0]);
        let cof = 2.0 * (3.0 * 6.0 - 0.0) - -(4.0 * 6.0 - (-2.0)) + 0.5 * (0.0 - 3.0);
        let det = LuFactor::factor(a).unwrap().determinant();
        assert!((det - cof).abs() < 1e-12);
    }
}
