//! Rank and invariant factors of large sparse matrices.
//!
//! Unit entries are eliminated first (each one contributes an invariant
//! factor 1 and shrinks the matrix by one row and one column); whatever core
//! remains is handed to the dense Smith reduction.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use super::matrix::IntMatrix;
use super::snf::dense_invariant_factors;

type Row = Vec<(usize, i64)>;

/// Merges `dst - f * src` for sorted sparse rows. `None` on overflow.
fn axpy(dst: &[(usize, i64)], f: i64, src: &[(usize, i64)]) -> Option<Row> {
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let (mut a, mut b) = (0, 0);
    while a < dst.len() || b < src.len() {
        let ca = dst.get(a).map_or(usize::MAX, |e| e.0);
        let cb = src.get(b).map_or(usize::MAX, |e| e.0);
        if ca < cb {
            out.push(dst[a]);
            a += 1;
        } else if cb < ca {
            let v = src[b].1.checked_mul(f)?.checked_neg()?;
            out.push((cb, v));
            b += 1;
        } else {
            let v = dst[a].1.checked_sub(src[b].1.checked_mul(f)?)?;
            if v != 0 {
                out.push((ca, v));
            }
            a += 1;
            b += 1;
        }
    }
    Some(out)
}

struct Eliminator {
    rows: Vec<Option<Row>>,
    cols: Vec<BTreeSet<usize>>,
    ncols: usize,
}

impl Eliminator {
    fn new(m: &IntMatrix) -> Option<Self> {
        let mut rows = Vec::with_capacity(m.rows());
        let mut cols = vec![BTreeSet::new(); m.cols()];
        for i in 0..m.rows() {
            let mut r = Vec::with_capacity(m.row(i).len());
            for (j, v) in m.row(i) {
                r.push((*j, v.to_i64()?));
                cols[*j].insert(i);
            }
            rows.push(Some(r));
        }
        Some(Eliminator { rows, cols, ncols: m.cols() })
    }

    /// Unit entry minimising the Markowitz fill estimate.
    fn pick_pivot(&self) -> Option<(usize, usize, i64)> {
        let mut best: Option<(usize, usize, usize, i64)> = None;
        for (i, r) in self.rows.iter().enumerate() {
            let Some(r) = r else { continue };
            for &(j, v) in r {
                if v != 1 && v != -1 {
                    continue;
                }
                let cost = (r.len() - 1) * (self.cols[j].len() - 1);
                if best.is_none_or(|b| cost < b.2) {
                    best = Some((i, j, cost, v));
                    if cost == 0 {
                        return Some((i, j, v));
                    }
                }
            }
        }
        best.map(|(i, j, _, v)| (i, j, v))
    }

    /// Returns the number of unit pivots eliminated, or `None` on overflow.
    fn eliminate_units(&mut self) -> Option<usize> {
        let mut pivots = 0;
        while let Some((p, c, u)) = self.pick_pivot() {
            let prow = self.rows[p].take().expect("active pivot row");
            let others: Vec<usize> = self.cols[c].iter().copied().filter(|&r| r != p).collect();
            for r in others {
                let row = self.rows[r].as_ref().expect("active row");
                let coef = row
                    .binary_search_by_key(&c, |e| e.0)
                    .map(|k| row[k].1)
                    .expect("entry in pivot column");
                let f = coef.checked_mul(u)?;
                let new_row = axpy(row, f, &prow)?;
                for &(j, _) in row.iter() {
                    self.cols[j].remove(&r);
                }
                for &(j, _) in &new_row {
                    self.cols[j].insert(r);
                }
                self.rows[r] = Some(new_row);
            }
            for &(j, _) in &prow {
                self.cols[j].remove(&p);
            }
            pivots += 1;
        }
        Some(pivots)
    }

    fn core(&self) -> IntMatrix {
        let live_rows: Vec<&Row> = self.rows.iter().flatten().filter(|r| !r.is_empty()).collect();
        let live_cols: Vec<usize> = (0..self.ncols).filter(|&j| !self.cols[j].is_empty()).collect();
        let mut pos = vec![usize::MAX; self.ncols];
        for (k, &j) in live_cols.iter().enumerate() {
            pos[j] = k;
        }
        let mut m = IntMatrix::zeros(live_rows.len(), live_cols.len());
        for (i, r) in live_rows.iter().enumerate() {
            for &(j, v) in r.iter() {
                m.set(i, pos[j], BigInt::from(v));
            }
        }
        m
    }
}

/// Nonzero invariant factors (positive, divisibility chain) of `m`.
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    if m.is_zero() {
        return Vec::new();
    }
    if let Some(mut e) = Eliminator::new(m) {
        if let Some(units) = e.eliminate_units() {
            let mut out = vec![BigInt::one(); units];
            let core = e.core();
            if !core.is_zero() {
                out.extend(dense_invariant_factors(&core));
            }
            out.sort();
            return out;
        }
    }
    dense_invariant_factors(m)
}

pub fn rank(m: &IntMatrix) -> usize {
    invariant_factors(m).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::snf::smith_normal_form;

    #[test]
    fn agrees_with_dense_reduction() {
        let cases = [
            IntMatrix::from_rows(3, 3, &[[1, 2, 3], [4, 5, 6], [7, 8, 9]]),
            IntMatrix::from_rows(2, 2, &[[2, 4], [6, 8]]),
            IntMatrix::from_rows(3, 4, &[[1, -1, 0, 0], [0, 1, -1, 0], [-1, 0, 1, 2]]),
            IntMatrix::from_rows(2, 3, &[[2, 0, 0], [0, 3, 0]]),
        ];
        for m in &cases {
            assert_eq!(invariant_factors(m), smith_normal_form(m).diagonal, "{m:?}");
        }
    }
}
