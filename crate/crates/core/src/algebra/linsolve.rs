//! Exact Gaussian elimination over the Gaussian rationals.

use num_traits::Zero;

use super::GaussRat;

/// Row-reduced form of an augmented system `A x = b`.
#[derive(Clone, Debug)]
pub struct Elimination {
    pub rank: usize,
    pub pivots: Vec<usize>,
    /// Rows whose left side reduced to zero but right side did not.
    pub inconsistent_rows: usize,
    reduced: Vec<Vec<GaussRat>>,
    cols: usize,
}

/// Reduces `[A | b]` to reduced row-echelon form.
pub fn eliminate(a: &[Vec<GaussRat>], b: &[GaussRat]) -> Elimination {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<GaussRat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for v in m[r].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !pv.is_zero() {
                    *v -= &(&f * pv);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let inconsistent_rows = m[r..].iter().filter(|row| !row[cols].is_zero()).count();
    Elimination { rank: r, pivots, inconsistent_rows, reduced: m, cols }
}

impl Elimination {
    pub fn full_column_rank(&self) -> bool {
        self.rank == self.cols
    }

    /// Unique solution when the system is consistent with full column rank.
    pub fn unique_solution(&self) -> Option<Vec<GaussRat>> {
        if !self.full_column_rank() || self.inconsistent_rows > 0 {
            return None;
        }
        Some((0..self.cols).map(|i| self.reduced[i][self.cols].clone()).collect())
    }

    /// Solution of the pivot rows for a full-column-rank system, ignoring
    /// any inconsistent surplus rows.
    pub fn pivot_solution(&self) -> Vec<GaussRat> {
        assert!(self.full_column_rank(), "pivot solution needs full column rank");
        (0..self.cols).map(|i| self.reduced[i][self.cols].clone()).collect()
    }

    /// Basis of the null space of `A` (ignores the right side).
    pub fn null_space(&self) -> Vec<Vec<GaussRat>> {
        let free: Vec<usize> = (0..self.cols).filter(|c| !self.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![GaussRat::zero(); self.cols];
                v[f] = num_traits::One::one();
                for (row, &pc) in self.pivots.iter().enumerate() {
                    v[pc] = -&self.reduced[row][f];
                }
                v
            })
            .collect()
    }
}

/// `A x` for exact matrices.
pub fn mat_vec(a: &[Vec<GaussRat>], x: &[GaussRat]) -> Vec<GaussRat> {
    a.iter().map(|row| row.iter().zip(x).fold(GaussRat::zero(), |acc, (c, v)| acc + c * v)).collect()
}
