use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Integer matrix with exact entries, stored row-wise and sparse.
///
/// Each row keeps `(column, value)` pairs sorted by column with no stored
/// zeros, so structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, BigInt)>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].push((i, BigInt::one()));
        }
        m
    }

    /// Builds a matrix from dense rows of small integers.
    pub fn from_rows<R: AsRef<[i64]>>(rows: usize, cols: usize, entries: &[R]) -> Self {
        assert_eq!(entries.len(), rows, "row count mismatch");
        let mut m = Self::zeros(rows, cols);
        for (i, row) in entries.iter().enumerate() {
            let row = row.as_ref();
            assert_eq!(row.len(), cols, "column count mismatch in row {i}");
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    m.data[i].push((j, BigInt::from(v)));
                }
            }
        }
        m
    }

    pub fn from_dense(rows: usize, cols: usize, entries: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, row) in entries.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    m.data[i].push((j, v.clone()));
                }
            }
        }
        m
    }

    /// Builds a matrix from unordered triplets; duplicate positions are summed.
    pub fn from_triplets(rows: usize, cols: usize, triplets: impl IntoIterator<Item = (usize, usize, BigInt)>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, j, v) in triplets {
            m.add_at(i, j, &v);
        }
        m
    }

    /// Column vector.
    pub fn column(v: &[BigInt]) -> Self {
        let mut m = Self::zeros(v.len(), 1);
        for (i, x) in v.iter().enumerate() {
            if !x.is_zero() {
                m.data[i].push((0, x.clone()));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn row(&self, i: usize) -> &[(usize, BigInt)] {
        &self.data[i]
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        match self.data[i].binary_search_by_key(&j, |e| e.0) {
            Ok(k) => self.data[i][k].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        let row = &mut self.data[i];
        match row.binary_search_by_key(&j, |e| e.0) {
            Ok(k) => {
                if v.is_zero() {
                    row.remove(k);
                } else {
                    row[k].1 = v;
                }
            }
            Err(k) => {
                if !v.is_zero() {
                    row.insert(k, (j, v));
                }
            }
        }
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &BigInt) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        if v.is_zero() {
            return;
        }
        let row = &mut self.data[i];
        match row.binary_search_by_key(&j, |e| e.0) {
            Ok(k) => {
                row[k].1 += v;
                if row[k].1.is_zero() {
                    row.remove(k);
                }
            }
            Err(k) => row.insert(k, (j, v.clone())),
        }
    }

    /// Iterates over the nonzero entries as `(row, col, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> + '_ {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut d = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (i, j, v) in self.entries() {
            d[i][j] = v.clone();
        }
        d
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (i, j, v) in self.entries() {
            t.data[j].push((i, v.clone()));
        }
        t
    }

    pub fn neg(&self) -> Self {
        let mut m = self.clone();
        for row in &mut m.data {
            for e in row.iter_mut() {
                e.1 = -core::mem::take(&mut e.1);
            }
        }
        m
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        if s.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        let mut m = self.clone();
        for row in &mut m.data {
            for e in row.iter_mut() {
                e.1 *= s;
            }
        }
        m
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in add");
        let mut m = self.clone();
        for (i, j, v) in other.entries() {
            m.add_at(i, j, v);
        }
        m
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut out = Self::zeros(self.rows, other.cols);
        let mut acc: Vec<BigInt> = vec![BigInt::zero(); other.cols];
        let mut touched: Vec<usize> = Vec::new();
        let mut mark = vec![false; other.cols];
        for i in 0..self.rows {
            for (k, a) in &self.data[i] {
                for (j, b) in &other.data[*k] {
                    if !mark[*j] {
                        mark[*j] = true;
                        touched.push(*j);
                    }
                    acc[*j] += a * b;
                }
            }
            touched.sort_unstable();
            for &j in &touched {
                mark[j] = false;
                let v = core::mem::take(&mut acc[j]);
                if !v.is_zero() {
                    out.data[i].push((j, v));
                }
            }
            touched.clear();
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "shape mismatch in mul_vec");
        self.data
            .iter()
            .map(|row| row.iter().fold(BigInt::zero(), |s, (j, a)| s + a * &v[*j]))
            .collect()
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for (i, j, a) in self.entries() {
            for (k, l, b) in other.entries() {
                out.data[i * other.rows + k].push((j * other.cols + l, a * b));
            }
        }
        for row in &mut out.data {
            row.sort_by_key(|e| e.0);
        }
        out
    }

    /// Writes `block` into `self` with its top-left corner at `(r0, c0)`, adding to
    /// existing entries.
    pub fn add_block(&mut self, r0: usize, c0: usize, block: &Self) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of range");
        for (i, j, v) in block.entries() {
            self.add_at(r0 + i, c0 + j, v);
        }
    }

    pub fn hstack(parts: &[&Self]) -> Self {
        let rows = parts.first().map_or(0, |p| p.rows);
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let mut c0 = 0;
        for p in parts {
            assert_eq!(p.rows, rows, "row mismatch in hstack");
            for (i, j, v) in p.entries() {
                out.data[i].push((c0 + j, v.clone()));
            }
            c0 += p.cols;
        }
        out
    }

    pub fn vstack(parts: &[&Self]) -> Self {
        let cols = parts.first().map_or(0, |p| p.cols);
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut out = Self::zeros(rows, cols);
        let mut r0 = 0;
        for p in parts {
            assert_eq!(p.cols, cols, "column mismatch in vstack");
            for i in 0..p.rows {
                out.data[r0 + i] = p.data[i].clone();
            }
            r0 += p.rows;
        }
        out
    }

    pub fn block_diag(parts: &[&Self]) -> Self {
        let rows = parts.iter().map(|p| p.rows).sum();
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for p in parts {
            for (i, j, v) in p.entries() {
                out.data[r0 + i].push((c0 + j, v.clone()));
            }
            r0 += p.rows;
            c0 += p.cols;
        }
        out
    }

    /// Sub-matrix on the given rows and columns (in the given order).
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut col_pos = vec![usize::MAX; self.cols];
        for (k, &c) in cols.iter().enumerate() {
            col_pos[c] = k;
        }
        let mut out = Self::zeros(rows.len(), cols.len());
        for (k, &r) in rows.iter().enumerate() {
            for (j, v) in &self.data[r] {
                if col_pos[*j] != usize::MAX {
                    out.data[k].push((col_pos[*j], v.clone()));
                }
            }
            out.data[k].sort_by_key(|e| e.0);
        }
        out
    }

    pub fn col_range(&self, start: usize, end: usize) -> Self {
        let cols: Vec<usize> = (start..end).collect();
        let rows: Vec<usize> = (0..self.rows).collect();
        self.select(&rows, &cols)
    }

    pub fn column_vec(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn max_abs(&self) -> BigInt {
        self.entries().map(|(_, _, v)| v.abs()).max().unwrap_or_else(BigInt::zero)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.to_dense();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for row in self.to_dense() {
            write!(f, " ")?;
            for v in row {
                write!(f, " {v:>3}")?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_and_kron_agree_on_small_cases() {
        let a = IntMatrix::from_rows(2, 2, &[[1, 2], [3, 4]]);
        let b = IntMatrix::from_rows(2, 2, &[[0, 1], [1, 0]]);
        assert_eq!(a.mul(&b), IntMatrix::from_rows(2, 2, &[[2, 1], [4, 3]]));
        let k = IntMatrix::identity(2).kron(&a);
        assert_eq!(k.get(2, 2), BigInt::from(1));
        assert_eq!(k.get(3, 3), BigInt::from(4));
        assert_eq!(k.get(0, 2), BigInt::zero());
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let a = IntMatrix::from_rows(3, 3, &[[2, -1, 0], [1, 3, 4], [0, 5, -2]]);
        // 2*(3*-2 - 4*5) - (-1)*(1*-2 - 0) + 0 = -52 - 2
        assert_eq!(a.determinant(), BigInt::from(-54));
        let b = IntMatrix::from_rows(2, 2, &[[0, 1], [1, 0]]);
        assert_eq!(b.determinant(), BigInt::from(-1));
    }

    #[test]
    fn set_removes_zeros() {
        let mut a = IntMatrix::identity(2);
        a.set(0, 0, BigInt::zero());
        assert_eq!(a.nnz(), 1);
        a.add_at(1, 1, &BigInt::from(-1));
        assert!(a.is_zero());
    }
}
