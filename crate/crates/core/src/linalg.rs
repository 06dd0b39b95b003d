//! Dense exact linear algebra over `Q`.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Row-major dense matrix of big rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows(rows: Vec<Vec<BigRational>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r);
        }
        Matrix { rows: n, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigRational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigRational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Pivot preference: integers first, then the smallest numerator.
    fn pivot_row(&self, col: usize, from: usize) -> Option<usize> {
        (from..self.rows)
            .filter(|&r| !self.get(r, col).is_zero())
            .min_by(|&a, &b| {
                let (x, y) = (self.get(a, col), self.get(b, col));
                (!x.is_integer(), x.numer().abs(), a).cmp(&(!y.is_integer(), y.numer().abs(), b))
            })
    }

    /// Reduces in place to reduced row echelon form and returns the pivot
    /// columns. Deterministic for a given input.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = self.pivot_row(col, row) else {
                continue;
            };
            self.swap_rows(p, row);
            let inv = BigRational::one() / self.get(row, col);
            for c in col..self.cols {
                let v = self.get(row, c) * &inv;
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r == row || self.get(r, col).is_zero() {
                    continue;
                }
                let factor = self.get(r, col).clone();
                for c in col..self.cols {
                    let pivot_entry = self.get(row, c);
                    if pivot_entry.is_zero() {
                        continue;
                    }
                    let v = self.get(r, c) - &factor * pivot_entry;
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of `{v : Mv = 0}`: one vector per free column, with a 1 in that
    /// column and zeros in the other free columns.
    pub fn nullspace(&self) -> Vec<Vec<BigRational>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![BigRational::zero(); self.cols];
                v[free] = BigRational::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -m.get(r, free).clone();
                }
                v
            })
            .collect()
    }

    /// Some solution of `Mx = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[BigRational]) -> Option<Vec<BigRational>> {
        assert_eq!(b.len(), self.rows, "right-hand side has the wrong length");
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![BigRational::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = aug.get(r, self.cols).clone();
        }
        Some(x)
    }
}

/// Coefficients expressing `v` in the span of `basis`, if it lies there.
pub fn span_coordinates(basis: &[Vec<BigRational>], v: &[BigRational]) -> Option<Vec<BigRational>> {
    let dim = v.len();
    let mut m = Matrix::zeros(dim, basis.len());
    for (j, b) in basis.iter().enumerate() {
        assert_eq!(b.len(), dim, "basis vector has the wrong length");
        for (i, x) in b.iter().enumerate() {
            m.set(i, j, x.clone());
        }
    }
    m.solve(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn m(rows: &[&[i64]]) -> Matrix {
        let cols = rows[0].len();
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect(), cols)
    }

    #[test]
    fn rank_and_nullspace() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 1);
        for r in 0..3 {
            let dot: BigRational = a.row(r).iter().zip(&ns[0]).map(|(x, y)| x * y).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn solve_consistent_and_not() {
        let a = m(&[&[1, 1], &[1, -1]]);
        assert_eq!(a.solve(&[rat(3), rat(1)]).unwrap(), vec![rat(2), rat(1)]);
        let b = m(&[&[1, 1], &[2, 2]]);
        assert!(b.solve(&[rat(1), rat(3)]).is_none());
    }

    #[test]
    fn span_membership() {
        let basis = vec![vec![rat(1), rat(0), rat(1)], vec![rat(0), rat(1), rat(1)]];
        assert!(span_coordinates(&basis, &[rat(2), rat(3), rat(5)]).is_some());
        assert!(span_coordinates(&basis, &[rat(2), rat(3), rat(4)]).is_none());
    }

    #[test]
    fn empty_matrix() {
        let z = Matrix::zeros(0, 3);
        assert_eq!(z.nullspace().len(), 3);
        assert_eq!(z.rank(), 0);
    }
}
