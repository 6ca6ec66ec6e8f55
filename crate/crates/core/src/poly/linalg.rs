//! Dense exact linear algebra over the rationals: reduced row echelon form,
//! rank and nullspace with deterministic pivoting (leftmost column, first
//! nonzero row).

use super::arith::Coef;
use num_traits::{One, Zero};

#[derive(Debug, Clone)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Coef>,
}

impl QMatrix {
    pub fn zero(rows: usize, cols: usize) -> QMatrix {
        QMatrix {
            rows,
            cols,
            data: vec![Coef::zero(); rows * cols],
        }
    }

    pub fn at(&self, r: usize, c: usize) -> &Coef {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Coef) {
        self.data[r * self.cols + c] = v;
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| !self.at(r, col).is_zero()) else {
                continue;
            };
            if pr != row {
                for c in 0..self.cols {
                    self.data.swap(row * self.cols + c, pr * self.cols + c);
                }
            }
            let inv = Coef::one() / self.at(row, col).clone();
            for c in col..self.cols {
                let v = self.at(row, c) * &inv;
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r == row || self.at(r, col).is_zero() {
                    continue;
                }
                let factor = self.at(r, col).clone();
                for c in col..self.cols {
                    let v = self.at(r, c) - &factor * self.at(row, c);
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(mut self) -> usize {
        self.rref().len()
    }

    /// Canonical nullspace basis: one vector per free column, with a 1 in
    /// the free position and the negated echelon entries in the pivot
    /// positions.
    pub fn nullspace(mut self) -> Vec<Vec<Coef>> {
        let pivots = self.rref();
        let pivot_of_col: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut vec = vec![Coef::zero(); self.cols];
            vec[free] = Coef::one();
            for (r, &pc) in pivots.iter().enumerate() {
                vec[pc] = -self.at(r, free).clone();
            }
            basis.push(vec);
        }
        basis
    }
}
