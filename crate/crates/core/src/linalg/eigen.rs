//! Eigenvalues of dense real matrices.
//!
//! Balancing, Householder reduction to upper Hessenberg form, then the
//! Francis implicit double-shift QR iteration. Only eigenvalues are
//! computed; complex pairs come out as exact conjugates.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

const RADIX: f64 = 2.0;

/// Row-major square scratch matrix addressed with signed indices, which
/// keeps the QR sweep close to its textbook loop bounds.
struct Square {
    n: usize,
    d: Vec<f64>,
}

impl Square {
    fn from_matrix(a: &DMatrix<f64>) -> Self {
        let n = a.nrows();
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                d[i * n + j] = a[(i, j)];
            }
        }
        Self { n, d }
    }
}

impl std::ops::Index<(isize, isize)> for Square {
    type Output = f64;
    fn index(&self, (i, j): (isize, isize)) -> &f64 {
        &self.d[i as usize * self.n + j as usize]
    }
}

impl std::ops::IndexMut<(isize, isize)> for Square {
    fn index_mut(&mut self, (i, j): (isize, isize)) -> &mut f64 {
        &mut self.d[i as usize * self.n + j as usize]
    }
}

/// Diagonal similarity scaling by powers of two so that row and column
/// norms are comparable. Leaves the spectrum unchanged.
fn balance(a: &mut Square) {
    let n = a.n as isize;
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let (mut r, mut c) = (0.0, 0.0);
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / RADIX;
                let mut f = 1.0;
                let s = c + r;
                while c < g {
                    f *= RADIX;
                    c *= sqrdx;
                }
                g = r * RADIX;
                while c > g {
                    f /= RADIX;
                    c /= sqrdx;
                }
                if (c + r) / f < 0.95 * s {
                    done = false;
                    let g = 1.0 / f;
                    for j in 0..n {
                        a[(i, j)] *= g;
                    }
                    for j in 0..n {
                        a[(j, i)] *= f;
                    }
                }
            }
        }
    }
}

fn hessenberg(a: &mut Square) {
    let n = a.n;
    if n < 3 {
        return;
    }
    let mut v = vec![0.0; n];
    for k in 0..n - 2 {
        let ki = k as isize;
        let mut norm = 0.0;
        for i in k + 1..n {
            norm += a[(i as isize, ki)].powi(2);
        }
        let norm = norm.sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[(ki + 1, ki)];
        let alpha = if x0 >= 0.0 { -norm } else { norm };
        for i in k + 1..n {
            v[i] = a[(i as isize, ki)];
        }
        v[k + 1] -= alpha;
        let vnorm2: f64 = v[k + 1..n].iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm2;

        // A <- H A, H = I - beta v v^T acting on rows k+1..n
        for j in 0..n {
            let ji = j as isize;
            let mut s = 0.0;
            for i in k + 1..n {
                s += v[i] * a[(i as isize, ji)];
            }
            s *= beta;
            for i in k + 1..n {
                a[(i as isize, ji)] -= s * v[i];
            }
        }
        // A <- A H on columns k+1..n
        for i in 0..n {
            let ii = i as isize;
            let mut s = 0.0;
            for j in k + 1..n {
                s += a[(ii, j as isize)] * v[j];
            }
            s *= beta;
            for j in k + 1..n {
                a[(ii, j as isize)] -= s * v[j];
            }
        }
        a[(ki + 1, ki)] = alpha;
        for i in k + 2..n {
            a[(i as isize, ki)] = 0.0;
        }
    }
}

fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix.
fn hqr(a: &mut Square, max_iterations: usize) -> Result<Vec<Complex64>> {
    let n = a.n as isize;
    let mut wr = vec![0.0; a.n];
    let mut wi = vec![0.0; a.n];
    let eps = f64::EPSILON;

    let mut anorm = 0.0;
    for i in 0..n {
        for j in (i - 1).max(0)..n {
            anorm += a[(i, j)].abs();
        }
    }

    let mut total = 0usize;
    let mut nn = n - 1;
    let mut t = 0.0;
    let (mut p, mut q, mut r) = (0.0, 0.0, 0.0);
    while nn >= 0 {
        let mut its = 0usize;
        loop {
            let mut l = nn;
            while l >= 1 {
                let mut s = a[(l - 1, l - 1)].abs() + a[(l, l)].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[(l, l - 1)].abs() <= eps * s {
                    a[(l, l - 1)] = 0.0;
                    break;
                }
                l -= 1;
            }
            let mut x = a[(nn, nn)];
            if l == nn {
                wr[nn as usize] = x + t;
                wi[nn as usize] = 0.0;
                nn -= 1;
                break;
            }
            let mut y = a[(nn - 1, nn - 1)];
            let mut w = a[(nn, nn - 1)] * a[(nn - 1, nn)];
            if l == nn - 1 {
                p = 0.5 * (y - x);
                q = p * p + w;
                let mut z = q.abs().sqrt();
                x += t;
                let (i1, i2) = ((nn - 1) as usize, nn as usize);
                if q >= 0.0 {
                    z = p + sign(z, p);
                    wr[i1] = x + z;
                    wr[i2] = if z != 0.0 { x - w / z } else { x + z };
                    wi[i1] = 0.0;
                    wi[i2] = 0.0;
                } else {
                    wr[i1] = x + p;
                    wr[i2] = x + p;
                    wi[i1] = -z;
                    wi[i2] = z;
                }
                nn -= 2;
                break;
            }

            if its >= 60 || total >= max_iterations {
                return Err(Error::EigenFailure { iterations: total });
            }
            if its == 10 || its == 20 || its == 40 {
                // exceptional shift
                t += x;
                for i in 0..=nn {
                    a[(i, i)] -= x;
                }
                let s = a[(nn, nn - 1)].abs() + a[(nn - 1, nn - 2)].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;
            total += 1;

            let mut m = nn - 2;
            let mut z;
            while m >= l {
                z = a[(m, m)];
                r = x - z;
                let s = y - z;
                p = (r * s - w) / a[(m + 1, m)] + a[(m, m + 1)];
                q = a[(m + 1, m + 1)] - z - r - s;
                r = a[(m + 2, m + 1)];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[(m, m - 1)].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[(m - 1, m - 1)].abs() + z.abs() + a[(m + 1, m + 1)].abs());
                if u <= eps * v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=nn {
                a[(i, i - 2)] = 0.0;
                if i != m + 2 {
                    a[(i, i - 3)] = 0.0;
                }
            }
            let mut k = m;
            while k < nn {
                if k != m {
                    p = a[(k, k - 1)];
                    q = a[(k + 1, k - 1)];
                    r = 0.0;
                    if k + 1 != nn {
                        r = a[(k + 2, k - 1)];
                    }
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = sign((p * p + q * q + r * r).sqrt(), p);
                if s != 0.0 {
                    if k == m {
                        if l != m {
                            a[(k, k - 1)] = -a[(k, k - 1)];
                        }
                    } else {
                        a[(k, k - 1)] = -s * x;
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;
                    for j in k..=nn {
                        p = a[(k, j)] + q * a[(k + 1, j)];
                        if k + 1 != nn {
                            p += r * a[(k + 2, j)];
                            a[(k + 2, j)] -= p * z;
                        }
                        a[(k + 1, j)] -= p * y;
                        a[(k, j)] -= p * x;
                    }
                    let mmin = if nn < k + 3 { nn } else { k + 3 };
                    for i in l..=mmin {
                        p = x * a[(i, k)] + y * a[(i, k + 1)];
                        if k + 1 != nn {
                            p += z * a[(i, k + 2)];
                            a[(i, k + 2)] -= p * r;
                        }
                        a[(i, k + 1)] -= p * q;
                        a[(i, k)] -= p;
                    }
                }
                k += 1;
            }
            if l + 1 >= nn {
                break;
            }
        }
    }
    Ok(wr
        .into_iter()
        .zip(wi)
        .map(|(re, im)| Complex64::new(re, im))
        .collect())
}

/// All eigenvalues of a square real matrix. The total number of QR sweeps
/// is capped at `100 * dim`.
pub fn eigenvalues(a: &DMatrix<f64>) -> Result<Vec<Complex64>> {
    let (n, m) = a.shape();
    if n != m {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m,
        });
    }
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(
            "matrix has non-finite entries".into(),
        ));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut s = Square::from_matrix(a);
    balance(&mut s);
    hessenberg(&mut s);
    hqr(&mut s, 100 * n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    /// Greedy multiset match: every eigenvalue in `a` has a distinct
    /// partner in `b` within `tol`.
    fn multiset_close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
        let mut used = vec![false; b.len()];
        a.len() == b.len()
            && a.iter().all(|x| {
                let best = b
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !used[*i])
                    .min_by(|(_, p), (_, q)| (*p - x).norm().total_cmp(&(*q - x).norm()));
                match best {
                    Some((i, y)) if (y - x).norm() <= tol => {
                        used[i] = true;
                        true
                    }
                    _ => false,
                }
            })
    }

    #[test]
    fn trivial_matrices() {
        let z = eigenvalues(&DMatrix::zeros(3, 3)).unwrap();
        assert!(z.iter().all(|e| e.norm() == 0.0));

        let d = sorted(eigenvalues(&DMatrix::from_diagonal(&nalgebra::dvector![-1.0, -2.0])).unwrap());
        assert_eq!(d, vec![Complex64::new(-2.0, 0.0), Complex64::new(-1.0, 0.0)]);

        // companion matrix of l^2 + 1
        let c = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let e = sorted(eigenvalues(&c).unwrap());
        assert!((e[0] - Complex64::new(0.0, -1.0)).norm() < 1e-14);
        assert!((e[1] - Complex64::new(0.0, 1.0)).norm() < 1e-14);

        assert!(eigenvalues(&DMatrix::zeros(0, 0)).unwrap().is_empty());
        assert_eq!(
            eigenvalues(&DMatrix::from_element(1, 1, 3.5)).unwrap(),
            vec![Complex64::new(3.5, 0.0)]
        );
        assert!(eigenvalues(&DMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn triangular_matrix_diagonal() {
        let a = DMatrix::from_fn(6, 6, |i, j| if j >= i { (i + 2 * j) as f64 - 3.0 } else { 0.0 });
        let e = sorted(eigenvalues(&a).unwrap());
        let mut want: Vec<f64> = (0..6).map(|i| a[(i, i)]).collect();
        want.sort_by(f64::total_cmp);
        for (x, w) in e.iter().zip(want) {
            assert!((x.re - w).abs() < 1e-12 && x.im.abs() < 1e-12);
        }
    }

    #[test]
    fn agrees_with_schur_oracle_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [3, 5, 8, 17, 30, 64] {
            let a = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
            let mine = eigenvalues(&a).unwrap();
            let theirs: Vec<Complex64> = a
                .clone()
                .complex_eigenvalues()
                .iter()
                .map(|c| Complex64::new(c.re, c.im))
                .collect();
            assert!(multiset_close(&mine, &theirs, 1e-8), "n={n}");

            let trace: f64 = a.trace();
            let sum: f64 = mine.iter().map(|e| e.re).sum();
            assert!((sum - trace).abs() <= 1e-9 * (1.0 + trace.abs()));
        }
    }

    #[test]
    fn badly_scaled_matrix_is_balanced() {
        // Diagonally similar to tridiag(1, 1, 1): eigenvalues 1 and 1 +- sqrt(2).
        let a = DMatrix::from_row_slice(3, 3, &[1.0, 1e8, 0.0, 1e-8, 1.0, 1e8, 0.0, 1e-8, 1.0]);
        let e = eigenvalues(&a).unwrap();
        let r2 = std::f64::consts::SQRT_2;
        let want = [1.0 - r2, 1.0, 1.0 + r2].map(|re| Complex64::new(re, 0.0));
        assert!(multiset_close(&e, &want, 1e-12), "{e:?}");
    }
}
