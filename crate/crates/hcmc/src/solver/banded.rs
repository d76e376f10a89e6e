//! Banded LU with partial pivoting.
//!
//! Row-major band storage with `kl` sub- and `ku` superdiagonals plus `kl`
//! extra superdiagonals for pivoting fill, i.e. row `i` holds columns
//! `i−kl ..= i+ku+kl`. Mesh vertices are ordered lexicographically by
//! coordinate, so FEM Jacobians here have bandwidth about one lattice row.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinearSolveError {
    #[error("matrix is numerically singular at elimination step {step} (pivot {pivot:.3e})")]
    Singular { step: usize, pivot: f64 },
    #[error("entry ({row}, {col}) is outside the band (kl = {kl}, ku = {ku})")]
    OutOfBand {
        row: usize,
        col: usize,
        kl: usize,
        ku: usize,
    },
}

#[derive(Clone, Debug)]
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    /// Row-major, width `2*kl + ku + 1`; entry (i, j) sits at
    /// `data[i * width + (j + kl − i)]`.
    data: Vec<f64>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        Self {
            n,
            kl,
            ku,
            data: vec![0.0; n * width],
        }
    }

    fn width(&self) -> usize {
        2 * self.kl + self.ku + 1
    }

    #[inline]
    fn idx(&self, row: usize, col: usize) -> usize {
        row * self.width() + (col + self.kl - row)
    }

    pub fn add(&mut self, row: usize, col: usize, value: f64) -> Result<(), LinearSolveError> {
        let lo = row.saturating_sub(self.kl);
        let hi = (row + self.ku).min(self.n - 1);
        if col < lo || col > hi {
            return Err(LinearSolveError::OutOfBand {
                row,
                col,
                kl: self.kl,
                ku: self.ku,
            });
        }
        let i = self.idx(row, col);
        self.data[i] += value;
        Ok(())
    }

    #[inline]
    fn get(&self, row: usize, col: usize) -> f64 {
        self.data[self.idx(row, col)]
    }

    #[inline]
    fn set(&mut self, row: usize, col: usize, v: f64) {
        let i = self.idx(row, col);
        self.data[i] = v;
    }

    /// Factor in place (Doolittle with partial pivoting) and solve `A x = b`.
    /// Consumes the matrix; `b` is overwritten with the solution.
    pub fn solve_in_place(mut self, b: &mut [f64]) -> Result<(), LinearSolveError> {
        assert_eq!(b.len(), self.n);
        let n = self.n;
        let kl = self.kl;
        let ku = self.ku;
        let mut ipiv = vec![0usize; n];

        for k in 0..n {
            // Pivot search within the subdiagonal reach.
            let i_max = (k + kl).min(n - 1);
            let mut piv_row = k;
            let mut piv_val = self.get(k, k).abs();
            for r in (k + 1)..=i_max {
                let v = self.get(r, k).abs();
                if v > piv_val {
                    piv_val = v;
                    piv_row = r;
                }
            }
            if piv_val < f64::MIN_POSITIVE * 1e10 {
                return Err(LinearSolveError::Singular {
                    step: k,
                    pivot: piv_val,
                });
            }
            ipiv[k] = piv_row;
            let j_max = (k + ku + kl).min(n - 1);
            if piv_row != k {
                // Columns below k of either row are already multipliers or
                // zero; swap only the active part.
                for j in k..=j_max {
                    let a = self.get(k, j);
                    let b2 = self.get(piv_row, j);
                    self.set(k, j, b2);
                    self.set(piv_row, j, a);
                }
            }
            let pivot = self.get(k, k);
            for i in (k + 1)..=i_max {
                let m = self.get(i, k) / pivot;
                self.set(i, k, m);
                if m != 0.0 {
                    for j in (k + 1)..=j_max {
                        let v = self.get(i, j) - m * self.get(k, j);
                        self.set(i, j, v);
                    }
                }
            }
        }

        // Forward substitution with the recorded row interchanges.
        for k in 0..n {
            b.swap(k, ipiv[k]);
            let i_max = (k + kl).min(n - 1);
            let bk = b[k];
            if bk != 0.0 {
                for i in (k + 1)..=i_max {
                    b[i] -= self.get(i, k) * bk;
                }
            }
        }
        // Back substitution.
        for k in (0..n).rev() {
            let j_max = (k + ku + kl).min(n - 1);
            let mut acc = b[k];
            for j in (k + 1)..=j_max {
                acc -= self.get(k, j) * b[j];
            }
            b[k] = acc / self.get(k, k);
        }
        Ok(())
    }
}
