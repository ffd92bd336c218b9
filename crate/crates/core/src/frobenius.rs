//! The Frobenius algebra `V = Z[1, u]` and its structure maps on tensor powers.
//!
//! A basis vector of `V^{⊗k}` is an assignment of `1` or `u` to each circle
//! label; its index has one bit per label (`0` for `1`, `1` for `u`) with the
//! first label in the most significant position.

use alloc::vec::Vec;

use crate::diagram::{EdgeTransition, TransitionKind};
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TensorBasis {
    labels: Vec<u32>,
}

impl TensorBasis {
    pub fn new(labels: Vec<u32>) -> Self {
        TensorBasis { labels }
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn k(&self) -> usize {
        self.labels.len()
    }

    pub fn rank(&self) -> usize {
        1 << self.labels.len()
    }

    pub fn position(&self, label: u32) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    fn shift(&self, pos: usize) -> usize {
        self.labels.len() - 1 - pos
    }

    /// Basis with one extra circle appended.
    pub fn with(&self, label: u32) -> Self {
        let mut labels = self.labels.clone();
        labels.push(label);
        TensorBasis { labels }
    }
}

/// `m: V ⊗ V → V`.
pub fn mult() -> IntMatrix {
    IntMatrix::from_rows(2, 4, &[[1, 0, 0, 0], [0, 1, 1, 0]])
}

/// `Δ: V → V ⊗ V`.
pub fn comult() -> IntMatrix {
    IntMatrix::from_rows(4, 2, &[[0, 0], [1, 0], [1, 0], [0, 1]])
}

/// `ε: V → Z`.
pub fn counit() -> IntMatrix {
    IntMatrix::from_rows(1, 2, &[[0, 1]])
}

/// `ι: Z → V`.
pub fn unit() -> IntMatrix {
    IntMatrix::from_rows(2, 1, &[[1], [0]])
}

/// Extends `local: V^{⊗|src_aff|} → V^{⊗|dst_aff|}` by the identity on the circles
/// paired in `correspondence` (`(src label, dst label)`).
pub fn local_map(
    src: &TensorBasis,
    dst: &TensorBasis,
    src_aff: &[u32],
    dst_aff: &[u32],
    correspondence: &[(u32, u32)],
    local: &IntMatrix,
) -> Result<IntMatrix> {
    if local.shape() != (1 << dst_aff.len(), 1 << src_aff.len()) {
        return Err(Error::BasisMismatch("local map has the wrong shape".into()));
    }
    if src_aff.len() + correspondence.len() != src.k() || dst_aff.len() + correspondence.len() != dst.k() {
        return Err(Error::BasisMismatch("circle counts do not add up".into()));
    }
    let find = |b: &TensorBasis, l: u32| {
        b.position(l)
            .map(|p| b.shift(p))
            .ok_or_else(|| Error::BasisMismatch(alloc::format!("circle {l} missing from basis")))
    };
    let src_bits: Vec<usize> = src_aff.iter().map(|&l| find(src, l)).collect::<Result<_>>()?;
    let dst_bits: Vec<usize> = dst_aff.iter().map(|&l| find(dst, l)).collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = correspondence
        .iter()
        .map(|&(s, d)| Ok((find(src, s)?, find(dst, d)?)))
        .collect::<Result<_>>()?;
    let columns = local.transpose();
    let mut triplets = Vec::new();
    for s in 0..src.rank() {
        let mut li = 0usize;
        for &b in &src_bits {
            li = (li << 1) | ((s >> b) & 1);
        }
        let mut base = 0usize;
        for &(sb, db) in &pairs {
            base |= ((s >> sb) & 1) << db;
        }
        for (lo, coef) in columns.row(li) {
            let mut t = base;
            let n = dst_bits.len();
            for (k, &db) in dst_bits.iter().enumerate() {
                t |= ((lo >> (n - 1 - k)) & 1) << db;
            }
            triplets.push((t, s, coef.clone()));
        }
    }
    Ok(IntMatrix::from_triplets(dst.rank(), src.rank(), triplets))
}

/// Matrix of `F(x ≺ y): V^{⊗D(y)} → V^{⊗D(x)}` for a single cube edge.
pub fn edge_map_matrix(t: &EdgeTransition, src: &TensorBasis, dst: &TensorBasis) -> Result<IntMatrix> {
    let local = match t.kind {
        TransitionKind::Merge => mult(),
        TransitionKind::Split => comult(),
    };
    local_map(src, dst, &t.from, &t.to, &t.correspondence, &local)
}

/// `id ⊗ ι` from `src` into `src` plus the circle `new`.
pub fn unit_map_matrix(src: &TensorBasis, dst: &TensorBasis, new: u32) -> Result<IntMatrix> {
    let corr = identity_pairs(src);
    local_map(src, dst, &[], &[new], &corr, &unit())
}

/// `id ⊗ ε` from `src` (which contains `gone`) onto `dst`.
pub fn counit_map_matrix(src: &TensorBasis, dst: &TensorBasis, gone: u32) -> Result<IntMatrix> {
    let corr = identity_pairs(dst);
    local_map(src, dst, &[gone], &[], &corr, &counit())
}

pub fn identity_pairs(b: &TensorBasis) -> Vec<(u32, u32)> {
    b.labels.iter().map(|&l| (l, l)).collect()
}

/// Permutation matrix carrying the basis `src` to the basis `dst` along a
/// relabelling `(src label, dst label)`.
pub fn relabel_matrix(src: &TensorBasis, dst: &TensorBasis, relabel: &[(u32, u32)]) -> Result<IntMatrix> {
    local_map(src, dst, &[], &[], relabel, &IntMatrix::identity(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn frobenius_identities() {
        assert_eq!(mult().mul(&IntMatrix::kron(&unit(), &IntMatrix::identity(2))), IntMatrix::identity(2));
        assert_eq!(IntMatrix::kron(&counit(), &IntMatrix::identity(2)).mul(&comult()), IntMatrix::identity(2));
    }

    #[test]
    fn merge_with_spectator_is_kronecker() {
        let src = TensorBasis::new(vec![1, 2, 5]);
        let dst = TensorBasis::new(vec![1, 5]);
        let t = EdgeTransition {
            kind: TransitionKind::Merge,
            from: vec![1, 2],
            to: vec![1],
            correspondence: vec![(5, 5)],
        };
        let got = edge_map_matrix(&t, &src, &dst).unwrap();
        assert_eq!(got, IntMatrix::kron(&mult(), &IntMatrix::identity(2)));
    }

    #[test]
    fn unit_and_counit_on_one_circle() {
        let empty = TensorBasis::new(vec![]);
        let one = TensorBasis::new(vec![3]);
        assert_eq!(unit_map_matrix(&empty, &one, 3).unwrap(), unit());
        assert_eq!(counit_map_matrix(&one, &empty, 3).unwrap(), counit());
    }

    #[test]
    fn mismatched_basis_is_rejected() {
        let src = TensorBasis::new(vec![1]);
        let dst = TensorBasis::new(vec![1, 2]);
        let t = EdgeTransition {
            kind: TransitionKind::Split,
            from: vec![4],
            to: vec![1, 2],
            correspondence: vec![],
        };
        assert!(matches!(edge_map_matrix(&t, &src, &dst), Err(Error::BasisMismatch(_))));
    }
}
