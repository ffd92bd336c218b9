use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// Smith normal form `U · M · V = S` with `U`, `V` unimodular.
///
/// `diagonal` holds the nonzero diagonal entries of `S`, positive and forming a
/// divisibility chain. Inverses of the transforms are kept because presenting
/// homology groups needs both directions.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
    pub diagonal: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }
}

struct Work {
    a: Vec<Vec<BigInt>>,
    m: usize,
    n: usize,
    track: bool,
    u: Vec<Vec<BigInt>>,
    u_inv: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
    v_inv: Vec<Vec<BigInt>>,
}

fn identity_dense(n: usize) -> Vec<Vec<BigInt>> {
    let mut d = vec![vec![BigInt::zero(); n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = BigInt::one();
    }
    d
}

fn row_axpy(rows: &mut [Vec<BigInt>], dst: usize, c: &BigInt, src: usize) {
    if c.is_zero() {
        return;
    }
    let (d, s) = if dst < src {
        let (lo, hi) = rows.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = rows.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in d.iter_mut().zip(s.iter()) {
        if !y.is_zero() {
            *x += c * y;
        }
    }
}

fn col_axpy(rows: &mut [Vec<BigInt>], dst: usize, c: &BigInt, src: usize) {
    if c.is_zero() {
        return;
    }
    for row in rows.iter_mut() {
        if !row[src].is_zero() {
            let t = c * &row[src];
            row[dst] += t;
        }
    }
}

impl Work {
    // row_i += c * row_k
    fn row_add(&mut self, i: usize, c: &BigInt, k: usize) {
        row_axpy(&mut self.a, i, c, k);
        if self.track {
            row_axpy(&mut self.u, i, c, k);
            col_axpy(&mut self.u_inv, k, &-c, i);
        }
    }

    fn row_swap(&mut self, i: usize, k: usize) {
        if i == k {
            return;
        }
        self.a.swap(i, k);
        if self.track {
            self.u.swap(i, k);
            for row in &mut self.u_inv {
                row.swap(i, k);
            }
        }
    }

    fn row_negate(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -core::mem::take(x);
        }
        if self.track {
            for x in &mut self.u[i] {
                *x = -core::mem::take(x);
            }
            for row in &mut self.u_inv {
                row[i] = -core::mem::take(&mut row[i]);
            }
        }
    }

    // col_j += c * col_k
    fn col_add(&mut self, j: usize, c: &BigInt, k: usize) {
        col_axpy(&mut self.a, j, c, k);
        if self.track {
            col_axpy(&mut self.v, j, c, k);
            row_axpy(&mut self.v_inv, k, &-c, j);
        }
    }

    fn col_swap(&mut self, j: usize, k: usize) {
        if j == k {
            return;
        }
        for row in &mut self.a {
            row.swap(j, k);
        }
        if self.track {
            for row in &mut self.v {
                row.swap(j, k);
            }
            self.v_inv.swap(j, k);
        }
    }

    /// Smallest nonzero magnitude in the trailing block, leftmost column first.
    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for j in t..self.n {
            for i in t..self.m {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                match best {
                    None => best = Some((i, j)),
                    Some((bi, bj)) => {
                        if x.abs() < self.a[bi][bj].abs() {
                            best = Some((i, j));
                        }
                    }
                }
            }
        }
        best
    }

    fn reduce(&mut self) {
        let mut t = 0;
        while t < self.m.min(self.n) {
            let Some((pi, pj)) = self.find_pivot(t) else { break };
            self.row_swap(t, pi);
            self.col_swap(t, pj);
            loop {
                // clear column t below the pivot
                for i in t + 1..self.m {
                    if self.a[i][t].is_zero() {
                        continue;
                    }
                    let q = &self.a[i][t] / &self.a[t][t];
                    self.row_add(i, &-q, t);
                }
                if let Some(i) = self.min_in_col(t) {
                    self.row_swap(t, i);
                    continue;
                }
                // clear row t right of the pivot
                for j in t + 1..self.n {
                    if self.a[t][j].is_zero() {
                        continue;
                    }
                    let q = &self.a[t][j] / &self.a[t][t];
                    self.col_add(j, &-q, t);
                }
                if let Some(j) = self.min_in_row(t) {
                    self.col_swap(t, j);
                    continue;
                }
                // enforce divisibility of the trailing block
                match self.non_divisible(t) {
                    Some(i) => {
                        let one = BigInt::one();
                        self.row_add(t, &one, i);
                    }
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.row_negate(t);
            }
            t += 1;
        }
    }

    fn min_in_col(&self, t: usize) -> Option<usize> {
        let mut best: Option<usize> = None;
        for i in t + 1..self.m {
            let x = &self.a[i][t];
            if !x.is_zero() && best.is_none_or(|b| x.abs() < self.a[b][t].abs()) {
                best = Some(i);
            }
        }
        best
    }

    fn min_in_row(&self, t: usize) -> Option<usize> {
        let mut best: Option<usize> = None;
        for j in t + 1..self.n {
            let x = &self.a[t][j];
            if !x.is_zero() && best.is_none_or(|b| x.abs() < self.a[t][b].abs()) {
                best = Some(j);
            }
        }
        best
    }

    fn non_divisible(&self, t: usize) -> Option<usize> {
        let p = &self.a[t][t];
        if p.abs().is_one() {
            return None;
        }
        for i in t + 1..self.m {
            for j in t + 1..self.n {
                if !self.a[i][j].is_multiple_of(p) {
                    return Some(i);
                }
            }
        }
        None
    }
}

fn run(m: &IntMatrix, track: bool) -> Work {
    let (rows, cols) = m.shape();
    let mut w = Work {
        a: m.to_dense(),
        m: rows,
        n: cols,
        track,
        u: if track { identity_dense(rows) } else { Vec::new() },
        u_inv: if track { identity_dense(rows) } else { Vec::new() },
        v: if track { identity_dense(cols) } else { Vec::new() },
        v_inv: if track { identity_dense(cols) } else { Vec::new() },
    };
    w.reduce();
    w
}

fn diagonal_of(w: &Work) -> Vec<BigInt> {
    (0..w.m.min(w.n))
        .map(|i| w.a[i][i].clone())
        .take_while(|x| !x.is_zero())
        .collect()
}

/// Smith normal form with unimodular transforms.
///
/// Pivots are chosen by smallest nonzero magnitude with a leftmost (then
/// topmost) tie-break, so the result is deterministic for a given input.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let w = run(m, true);
    let (rows, cols) = m.shape();
    let diagonal = diagonal_of(&w);
    SmithForm {
        u: IntMatrix::from_dense(rows, rows, &w.u),
        s: IntMatrix::from_dense(rows, cols, &w.a),
        v: IntMatrix::from_dense(cols, cols, &w.v),
        u_inv: IntMatrix::from_dense(rows, rows, &w.u_inv),
        v_inv: IntMatrix::from_dense(cols, cols, &w.v_inv),
        diagonal,
    }
}

/// Nonzero invariant factors of a dense matrix, without transforms.
pub fn dense_invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    diagonal_of(&run(m, false))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) -> SmithForm {
        let f = smith_normal_form(m);
        assert_eq!(f.u.mul(m).mul(&f.v), f.s);
        assert!(f.u.determinant().abs().is_one());
        assert!(f.v.determinant().abs().is_one());
        assert_eq!(f.u.mul(&f.u_inv), IntMatrix::identity(m.rows()));
        assert_eq!(f.v.mul(&f.v_inv), IntMatrix::identity(m.cols()));
        for w in f.diagonal.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        f
    }

    #[test]
    fn identity_is_its_own_form() {
        let f = check(&IntMatrix::identity(3));
        assert_eq!(f.s, IntMatrix::identity(3));
    }

    #[test]
    fn two_by_two_example() {
        let f = check(&IntMatrix::from_rows(2, 2, &[[2, 4], [6, 8]]));
        assert_eq!(f.diagonal, vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn zero_matrix() {
        let f = check(&IntMatrix::zeros(2, 3));
        assert!(f.s.is_zero());
        assert!(f.diagonal.is_empty());
    }

    #[test]
    fn divisibility_is_enforced() {
        // diag(2, 3) has invariant factors 1, 6
        let f = check(&IntMatrix::from_rows(2, 2, &[[2, 0], [0, 3]]));
        assert_eq!(f.diagonal, vec![BigInt::from(1), BigInt::from(6)]);
        let f = check(&IntMatrix::from_rows(3, 4, &[[4, 6, 0, 2], [0, 10, 4, 8], [6, 0, 12, 2]]));
        assert_eq!(f.diagonal.len(), 3);
    }
}
