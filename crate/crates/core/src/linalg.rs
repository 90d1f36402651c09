//! Minimal direct linear algebra: banded LU with partial pivoting (the
//! discretized operators are banded with bandwidth set by the grid ordering)
//! and a small dense solver for Newton systems.
//!
//! Band storage follows the LAPACK `dgbtrf` convention: entry `(i, j)` lives
//! in row `kl + ku + i - j` of a `(2 kl + ku + 1) x n` array, leaving `kl`
//! extra rows for pivoting fill-in.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct BandedMatrix {
    pub n: usize,
    pub kl: usize,
    pub ku: usize,
    data: Vec<f64>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        BandedMatrix {
            n,
            kl,
            ku,
            data: vec![0.0; (2 * kl + ku + 1) * n],
        }
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        (self.kl + self.ku + i - j) * self.n + j
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i.max(j) - i.min(j) <= if i > j { self.kl } else { self.ku });
        let s = self.slot(i, j);
        self.data[s] += v;
    }

    /// Copy of the band with every entry multiplied by `s`.
    pub fn scaled(&self, s: f64) -> BandedMatrix {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|v| *v *= s);
        out
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let lo = j.saturating_sub(self.ku);
        let hi = (j + self.kl).min(self.n - 1);
        if i < lo || i > hi {
            0.0
        } else {
            self.data[self.slot(i, j)]
        }
    }

    /// y = A x using the stored band.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        for j in 0..self.n {
            let lo = j.saturating_sub(self.ku);
            let hi = (j + self.kl).min(self.n - 1);
            let xj = x[j];
            if xj != 0.0 {
                for i in lo..=hi {
                    y[i] += self.data[self.slot(i, j)] * xj;
                }
            }
        }
    }

    /// In-place LU factorization with partial pivoting.
    pub fn factor(mut self) -> Result<BandedLu> {
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        let mut ipiv = vec![0usize; n];
        for j in 0..n {
            let km = kl.min(n - 1 - j);
            let mut jp = 0usize;
            let mut best = 0.0f64;
            for p in 0..=km {
                let v = self.data[(kl + ku + p) * n + j].abs();
                if v > best {
                    best = v;
                    jp = p;
                }
            }
            if best == 0.0 {
                return Err(Error::SolverDiverged {
                    iters: 0,
                    last_increment: f64::NAN,
                });
            }
            ipiv[j] = j + jp;
            let ju = (j + ku + kl).min(n - 1);
            if jp != 0 {
                for col in j..=ju {
                    let r1 = (kl + ku + j - col) * n + col;
                    let r2 = (kl + ku + j + jp - col) * n + col;
                    self.data.swap(r1, r2);
                }
            }
            if km > 0 {
                let piv = self.data[(kl + ku) * n + j];
                for p in 1..=km {
                    self.data[(kl + ku + p) * n + j] /= piv;
                }
                for col in j + 1..=ju {
                    let f = self.data[(kl + ku + j - col) * n + col];
                    if f != 0.0 {
                        for p in 1..=km {
                            let l = self.data[(kl + ku + p) * n + j];
                            self.data[(kl + ku + j + p - col) * n + col] -= l * f;
                        }
                    }
                }
            }
        }
        Ok(BandedLu {
            n,
            kl,
            ku,
            data: self.data,
            ipiv,
        })
    }
}

/// Factored form; `solve` overwrites the right-hand side with the solution.
#[derive(Debug, Clone)]
pub struct BandedLu {
    n: usize,
    kl: usize,
    ku: usize,
    data: Vec<f64>,
    ipiv: Vec<usize>,
}

impl BandedLu {
    pub fn solve(&self, b: &mut [f64]) {
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        for j in 0..n.saturating_sub(1) {
            let jp = self.ipiv[j];
            if jp != j {
                b.swap(j, jp);
            }
            let km = kl.min(n - 1 - j);
            let bj = b[j];
            if bj != 0.0 {
                for p in 1..=km {
                    b[j + p] -= self.data[(kl + ku + p) * n + j] * bj;
                }
            }
        }
        for j in (0..n).rev() {
            b[j] /= self.data[(kl + ku) * n + j];
            let lm = (kl + ku).min(j);
            let bj = b[j];
            if bj != 0.0 {
                for q in 1..=lm {
                    b[j - q] -= self.data[(kl + ku - q) * n + j] * bj;
                }
            }
        }
    }
}

/// Dense Gaussian elimination with partial pivoting for small Newton systems.
/// `a` is row-major `n x n`; returns the solution of `a x = b`.
pub fn solve_dense(a: &mut [f64], b: &mut [f64], n: usize) -> Result<()> {
    debug_assert_eq!(a.len(), n * n);
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if a[r * n + col].abs() > a[piv * n + col].abs() {
                piv = r;
            }
        }
        if a[piv * n + col].abs() < 1e-300 {
            return Err(Error::NewtonFailed {
                residual: f64::NAN,
                iters: 0,
            });
        }
        if piv != col {
            for c in 0..n {
                a.swap(col * n + c, piv * n + c);
            }
            b.swap(col, piv);
        }
        let d = a[col * n + col];
        for r in col + 1..n {
            let f = a[r * n + col] / d;
            if f != 0.0 {
                for c in col..n {
                    a[r * n + c] -= f * a[col * n + c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    for col in (0..n).rev() {
        let mut s = b[col];
        for c in col + 1..n {
            s -= a[col * n + c] * b[c];
        }
        b[col] = s / a[col * n + col];
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_banded(n: usize, kl: usize, ku: usize, rng: &mut ChaCha8Rng) -> BandedMatrix {
        let mut m = BandedMatrix::zeros(n, kl, ku);
        for i in 0..n {
            for j in i.saturating_sub(kl)..=(i + ku).min(n - 1) {
                m.add(i, j, rng.gen_range(-1.0..1.0));
            }
            // keep it comfortably nonsingular
            m.add(i, i, 6.0);
        }
        m
    }

    #[test]
    fn banded_lu_matches_nalgebra() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for &(n, kl, ku) in &[(1usize, 0usize, 0usize), (7, 2, 1), (40, 7, 7), (60, 5, 9)] {
            let m = random_banded(n, kl, ku, &mut rng);
            let dense = nalgebra::DMatrix::from_fn(n, n, |i, j| m.get(i, j));
            let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let exact = dense
                .clone()
                .lu()
                .solve(&nalgebra::DVector::from_column_slice(&b))
                .unwrap();
            let lu = m.factor().unwrap();
            let mut x = b.clone();
            lu.solve(&mut x);
            for i in 0..n {
                assert!(
                    (x[i] - exact[i]).abs() < 1e-10,
                    "n={n} kl={kl} ku={ku} i={i}: {} vs {}",
                    x[i],
                    exact[i]
                );
            }
        }
    }

    #[test]
    fn matvec_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random_banded(25, 4, 6, &mut rng);
        let dense = nalgebra::DMatrix::from_fn(25, 25, |i, j| m.get(i, j));
        let x: Vec<f64> = (0..25).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut y = vec![0.0; 25];
        m.matvec(&x, &mut y);
        let yd = dense * nalgebra::DVector::from_column_slice(&x);
        for i in 0..25 {
            assert!((y[i] - yd[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn singular_matrix_rejected() {
        let m = BandedMatrix::zeros(4, 1, 1);
        assert!(m.factor().is_err());
    }

    #[test]
    fn dense_solver_small_system() {
        let mut a = vec![2.0, 1.0, -1.0, -3.0, -1.0, 2.0, -2.0, 1.0, 2.0];
        let mut b = vec![8.0, -11.0, -3.0];
        solve_dense(&mut a, &mut b, 3).unwrap();
        assert!((b[0] - 2.0).abs() < 1e-12);
        assert!((b[1] - 3.0).abs() < 1e-12);
        assert!((b[2] + 1.0).abs() < 1e-12);
    }
}
