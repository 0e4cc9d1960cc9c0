//! Dense integer matrices with exact Hermite and Smith reductions.
//!
//! All arithmetic is checked; an overflow surfaces as
//! [`Error::Overflow`] instead of a wrong answer.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

fn checked_sub_mul(a: i64, q: i64, b: i64) -> Result<i64> {
    q.checked_mul(b)
        .and_then(|p| a.checked_sub(p))
        .ok_or(Error::Overflow)
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Builds a matrix from rows; every row must have `cols` entries.
    pub fn from_rows(cols: usize, rows: &[Vec<i64>]) -> Self {
        let mut m = IntMatrix::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged row {i}");
            m.data[i * cols..(i + 1) * cols].copy_from_slice(row);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// `self · x` for a column vector `x`.
    pub fn mul_vec(&self, x: &[i64]) -> Result<Vec<i64>> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(x).try_fold(0i64, |acc, (a, b)| {
                    a.checked_mul(*b)
                        .and_then(|p| acc.checked_add(p))
                        .ok_or(Error::Overflow)
                })
            })
            .collect()
    }

    /// `x · self` for a row vector `x`.
    pub fn vec_mul(&self, x: &[i64]) -> Result<Vec<i64>> {
        self.transpose().mul_vec(x)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] -= q · row[source]
    fn row_sub(&mut self, target: usize, q: i64, source: usize) -> Result<()> {
        if q == 0 {
            return Ok(());
        }
        for j in 0..self.cols {
            let v = checked_sub_mul(self[(target, j)], q, self[(source, j)])?;
            self[(target, j)] = v;
        }
        Ok(())
    }

    /// col[target] -= q · col[source]
    fn col_sub(&mut self, target: usize, q: i64, source: usize) -> Result<()> {
        if q == 0 {
            return Ok(());
        }
        for i in 0..self.rows {
            let v = checked_sub_mul(self[(i, target)], q, self[(i, source)])?;
            self[(i, target)] = v;
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) -> Result<()> {
        for j in 0..self.cols {
            self[(i, j)] = self[(i, j)].checked_neg().ok_or(Error::Overflow)?;
        }
        Ok(())
    }

    /// Row-style Hermite normal form of the row lattice.
    pub fn hermite(&self) -> Result<Hermite> {
        let (m, n) = (self.rows, self.cols);
        let mut aug = IntMatrix::zeros(m, n + m);
        for i in 0..m {
            aug.data[i * (n + m)..i * (n + m) + n].copy_from_slice(self.row(i));
            aug[(i, n + i)] = 1;
        }
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..n {
            if r == m {
                break;
            }
            loop {
                let best = (r..m)
                    .filter(|&i| aug[(i, c)] != 0)
                    .min_by_key(|&i| aug[(i, c)].unsigned_abs());
                let Some(best) = best else { break };
                aug.swap_rows(r, best);
                let mut done = true;
                for i in r + 1..m {
                    if aug[(i, c)] != 0 {
                        let q = aug[(i, c)].div_euclid(aug[(r, c)]);
                        aug.row_sub(i, q, r)?;
                        done &= aug[(i, c)] == 0;
                    }
                }
                if done {
                    break;
                }
            }
            if aug[(r, c)] == 0 {
                continue;
            }
            if aug[(r, c)] < 0 {
                aug.negate_row(r)?;
            }
            for i in 0..r {
                let q = aug[(i, c)].div_euclid(aug[(r, c)]);
                aug.row_sub(i, q, r)?;
            }
            pivots.push(c);
            r += 1;
        }
        let mut basis = IntMatrix::zeros(r, n);
        let mut transform = IntMatrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                transform[(i, j)] = aug[(i, n + j)];
            }
            if i < r {
                for j in 0..n {
                    basis[(i, j)] = aug[(i, j)];
                }
            }
        }
        Ok(Hermite {
            basis,
            transform,
            pivots,
        })
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(self.hermite()?.pivots.len())
    }

    /// An integer row vector `x` with `x · self = v`, if one exists.
    pub fn solve_row_combination(&self, v: &[i64]) -> Result<Option<Vec<i64>>> {
        assert_eq!(v.len(), self.cols);
        let h = self.hermite()?;
        let mut rest = v.to_vec();
        let mut y = vec![0i64; h.pivots.len()];
        let mut next_pivot = 0;
        for c in 0..self.cols {
            if next_pivot < h.pivots.len() && h.pivots[next_pivot] == c {
                let p = h.basis[(next_pivot, c)];
                if rest[c] % p != 0 {
                    return Ok(None);
                }
                let q = rest[c] / p;
                for (j, r) in rest.iter_mut().enumerate() {
                    *r = checked_sub_mul(*r, q, h.basis[(next_pivot, j)])?;
                }
                y[next_pivot] = q;
                next_pivot += 1;
            } else if rest[c] != 0 {
                return Ok(None);
            }
        }
        let mut x = vec![0i64; self.rows];
        for (k, &yk) in y.iter().enumerate() {
            for (j, xj) in x.iter_mut().enumerate() {
                *xj = checked_sub_mul(*xj, -yk, h.transform[(k, j)])?;
            }
        }
        Ok(Some(x))
    }

    /// An integer column vector `x` with `self · x = v`, if one exists.
    pub fn solve_column_combination(&self, v: &[i64]) -> Result<Option<Vec<i64>>> {
        self.transpose().solve_row_combination(v)
    }

    /// Nonzero invariant factors `d_1 | d_2 | …` of the Smith normal form.
    pub fn smith_invariants(&self) -> Result<Vec<i64>> {
        let mut a = self.clone();
        let (m, n) = (a.rows, a.cols);
        let mut t = 0;
        while t < m.min(n) {
            let pivot = (t..m)
                .flat_map(|i| (t..n).map(move |j| (i, j)))
                .filter(|&(i, j)| a[(i, j)] != 0)
                .min_by_key(|&(i, j)| a[(i, j)].unsigned_abs());
            let Some((pi, pj)) = pivot else { break };
            a.swap_rows(t, pi);
            a.swap_cols(t, pj);
            loop {
                let p = a[(t, t)];
                let mut changed = false;
                for i in t + 1..m {
                    let q = a[(i, t)].div_euclid(p);
                    a.row_sub(i, q, t)?;
                    if a[(i, t)] != 0 {
                        changed = true;
                    }
                }
                for j in t + 1..n {
                    let q = a[(t, j)].div_euclid(p);
                    a.col_sub(j, q, t)?;
                    if a[(t, j)] != 0 {
                        changed = true;
                    }
                }
                if changed {
                    let small = (t..m)
                        .map(|i| (i, t))
                        .chain((t..n).map(|j| (t, j)))
                        .filter(|&(i, j)| a[(i, j)] != 0)
                        .min_by_key(|&(i, j)| a[(i, j)].unsigned_abs())
                        .expect("nonzero remains");
                    a.swap_rows(t, small.0);
                    a.swap_cols(t, small.1);
                    continue;
                }
                // divisibility of the remaining block
                let bad = (t + 1..m)
                    .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                    .find(|&(i, j)| a[(i, j)] % p != 0);
                match bad {
                    Some((i, _)) => {
                        for j in t..n {
                            let v = a[(t, j)].checked_add(a[(i, j)]).ok_or(Error::Overflow)?;
                            a[(t, j)] = v;
                        }
                    }
                    None => break,
                }
            }
            t += 1;
        }
        Ok((0..t).map(|i| a[(i, i)].abs()).collect())
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;

    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

/// Echelon basis of a row lattice with `basis = transform[..rank] · source`.
/// Rows of `transform` past the rank span the left kernel.
#[derive(Clone, Debug)]
pub struct Hermite {
    pub basis: IntMatrix,
    pub transform: IntMatrix,
    pub pivots: Vec<usize>,
}
