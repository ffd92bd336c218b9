//! Kernels, integer solving, and exactness of sequences of finitely generated
//! abelian groups given by explicit presentations.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::complex::AbGroup;
use super::matrix::IntMatrix;
use super::snf::{smith_normal_form, SmithForm};
use super::sparse::invariant_factors;
use crate::error::{Error, Result};

/// Reusable integer solver for `M x = b`.
pub struct Solver {
    snf: SmithForm,
}

impl Solver {
    pub fn new(m: &IntMatrix) -> Self {
        Solver { snf: smith_normal_form(m) }
    }

    /// An integer solution, or `None` when `b` is outside the integer image.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        let ub = self.snf.u.mul_vec(b);
        let r = self.snf.rank();
        let mut y = alloc::vec![BigInt::zero(); self.snf.v.rows()];
        for (i, c) in ub.iter().enumerate() {
            if i < r {
                let (q, rem) = c.div_rem(&self.snf.diagonal[i]);
                if !rem.is_zero() {
                    return None;
                }
                y[i] = q;
            } else if !c.is_zero() {
                return None;
            }
        }
        Some(self.snf.v.mul_vec(&y))
    }

    pub fn rank(&self) -> usize {
        self.snf.rank()
    }

    pub fn form(&self) -> &SmithForm {
        &self.snf
    }
}

pub fn solve(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    Solver::new(m).solve(b)
}

/// Basis of the integer kernel of `m`, as columns.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let f = smith_normal_form(m);
    f.v.col_range(f.rank(), m.cols())
}

/// A lattice basis (as columns) for the span of the columns of `gens`, and its
/// left inverse on that span.
pub fn lattice_basis(gens: &IntMatrix) -> (IntMatrix, LatticeCoords) {
    let f = smith_normal_form(gens);
    let r = f.rank();
    let n = gens.rows();
    let mut basis = IntMatrix::zeros(n, r);
    for (i, s) in f.diagonal.iter().enumerate() {
        for (row, v) in f.u_inv.column_vec(i).into_iter().enumerate() {
            if !v.is_zero() {
                basis.set(row, i, v * s);
            }
        }
    }
    (basis, LatticeCoords { u: f.u, diagonal: f.diagonal })
}

/// True iff the columns of `a` and of `b` span the same sublattice.
pub fn same_span(a: &IntMatrix, b: &IntMatrix) -> bool {
    if a.rows() != b.rows() {
        return false;
    }
    let inside = |x: &IntMatrix, y: &IntMatrix| {
        let (_, coords) = lattice_basis(y);
        (0..x.cols()).all(|j| coords.coords(&x.column_vec(j)).is_some())
    };
    inside(a, b) && inside(b, a)
}

pub struct LatticeCoords {
    u: IntMatrix,
    diagonal: Vec<BigInt>,
}

impl LatticeCoords {
    /// Coordinates of `v` in the lattice basis, or `None` if `v` is not in the lattice.
    pub fn coords(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let y = self.u.mul_vec(v);
        let mut out = Vec::with_capacity(self.diagonal.len());
        for (i, c) in y.iter().enumerate() {
            if i < self.diagonal.len() {
                let (q, rem) = c.div_rem(&self.diagonal[i]);
                if !rem.is_zero() {
                    return None;
                }
                out.push(q);
            } else if !c.is_zero() {
                return None;
            }
        }
        Some(out)
    }
}

/// `Z^n` modulo the cyclic relations `orders[k]·e_k` (an order of 0 leaves `e_k` free).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presented {
    pub orders: Vec<BigInt>,
}

impl Presented {
    pub fn zero() -> Self {
        Presented { orders: Vec::new() }
    }

    pub fn free(n: usize) -> Self {
        Presented { orders: alloc::vec![BigInt::zero(); n] }
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn group(&self) -> AbGroup {
        AbGroup::from_orders(&self.orders)
    }

    /// Relation columns `orders[k]·e_k` for the finite orders.
    pub fn relations(&self) -> IntMatrix {
        let finite: Vec<(usize, &BigInt)> = self.orders.iter().enumerate().filter(|(_, o)| !o.is_zero()).collect();
        IntMatrix::from_triplets(
            self.len(),
            finite.len(),
            finite.iter().enumerate().map(|(c, (r, o))| (*r, c, (*o).clone())),
        )
    }

    /// Canonical representative of a coordinate vector.
    pub fn reduce(&self, v: &mut [BigInt]) {
        for (x, o) in v.iter_mut().zip(&self.orders) {
            if !o.is_zero() {
                *x = x.mod_floor(o);
            }
        }
    }

    pub fn is_trivial_element(&self, v: &[BigInt]) -> bool {
        v.iter()
            .zip(&self.orders)
            .all(|(x, o)| if o.is_zero() { x.is_zero() } else { x.is_multiple_of(o) })
    }
}

/// A homomorphism of presented groups, `matrix` acting on coordinates.
#[derive(Clone, Debug)]
pub struct GroupHom {
    pub src: Presented,
    pub dst: Presented,
    pub matrix: IntMatrix,
}

impl GroupHom {
    pub fn new(src: Presented, dst: Presented, matrix: IntMatrix) -> Self {
        assert_eq!(matrix.shape(), (dst.len(), src.len()));
        GroupHom { src, dst, matrix }
    }

    pub fn zero(src: Presented, dst: Presented) -> Self {
        let m = IntMatrix::zeros(dst.len(), src.len());
        GroupHom { src, dst, matrix: m }
    }

    pub fn is_zero_map(&self) -> bool {
        (0..self.src.len()).all(|j| self.dst.is_trivial_element(&self.matrix.column_vec(j)))
    }

    pub fn compose(&self, first: &GroupHom) -> GroupHom {
        GroupHom::new(first.src.clone(), self.dst.clone(), self.matrix.mul(&first.matrix))
    }

    /// Kernel of the map, as the quotient lattice of its preimage in `Z^src`.
    fn kernel_lattice(&self) -> IntMatrix {
        let rel = self.dst.relations();
        let stacked = IntMatrix::hstack(&[&self.matrix, &rel.neg()]);
        let k = kernel_basis(&stacked);
        let rows: Vec<usize> = (0..self.src.len()).collect();
        let cols: Vec<usize> = (0..k.cols()).collect();
        k.select(&rows, &cols)
    }

    /// True iff every element of the source has a preimage; certifies `coker = 0`.
    pub fn is_surjective(&self) -> bool {
        let gens = IntMatrix::hstack(&[&self.matrix, &self.dst.relations()]);
        let f = invariant_factors(&gens);
        f.len() == self.dst.len() && f.iter().all(One::is_one)
    }

    pub fn is_injective(&self) -> bool {
        let k = self.kernel_lattice();
        let span = IntMatrix::hstack(&[&k, &self.src.relations()]);
        quotient(&span, &self.src.relations()).is_some_and(|g| g.is_zero())
    }
}

/// The quotient of the lattice spanned by `outer` by the sublattice spanned by `inner`.
/// `None` if `inner` is not contained in `outer`.
fn quotient(outer: &IntMatrix, inner: &IntMatrix) -> Option<AbGroup> {
    let (basis, coords) = lattice_basis(outer);
    let r = basis.cols();
    let mut x = IntMatrix::zeros(r, inner.cols());
    for j in 0..inner.cols() {
        let c = coords.coords(&inner.column_vec(j))?;
        for (i, v) in c.into_iter().enumerate() {
            if !v.is_zero() {
                x.set(i, j, v);
            }
        }
    }
    let f = invariant_factors(&x);
    Some(AbGroup {
        rank: r - f.len(),
        torsion: f.into_iter().filter(|d| !d.is_one()).collect(),
    })
}

/// Homology `ker/im` at every interior position of a composable sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessCertificate {
    pub defects: Vec<AbGroup>,
}

impl ExactnessCertificate {
    pub fn is_exact(&self) -> bool {
        self.defects.iter().all(AbGroup::is_zero)
    }

    /// Index of the first interior position where exactness fails.
    pub fn first_failure(&self) -> Option<usize> {
        self.defects.iter().position(|g| !g.is_zero())
    }
}

/// Decides exactness of `G_0 → G_1 → … → G_k` at `G_1 … G_{k-1}`.
pub fn is_exact(seq: &[GroupHom]) -> Result<ExactnessCertificate> {
    let mut defects = Vec::new();
    for (p, w) in seq.windows(2).enumerate() {
        let (incoming, outgoing) = (&w[0], &w[1]);
        assert_eq!(incoming.dst.orders, outgoing.src.orders, "maps are not composable at {p}");
        if !outgoing.compose(incoming).is_zero_map() {
            return Err(Error::CompositeNonzero { position: p + 1 });
        }
        let ker = IntMatrix::hstack(&[&outgoing.kernel_lattice(), &outgoing.src.relations()]);
        let im = IntMatrix::hstack(&[&incoming.matrix, &incoming.dst.relations()]);
        let defect = quotient(&ker, &im).ok_or(Error::CompositeNonzero { position: p + 1 })?;
        defects.push(defect);
    }
    Ok(ExactnessCertificate { defects })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn free_hom(rows: usize, cols: usize, m: &[&[i64]]) -> GroupHom {
        GroupHom::new(Presented::free(cols), Presented::free(rows), IntMatrix::from_rows(rows, cols, m))
    }

    #[test]
    fn identity_sequence_is_exact() {
        let seq = [free_hom(1, 0, &[&[]]), free_hom(1, 1, &[&[1]]), free_hom(0, 1, &[])];
        assert!(is_exact(&seq).unwrap().is_exact());
    }

    #[test]
    fn doubling_has_cokernel() {
        let seq = [free_hom(1, 0, &[&[]]), free_hom(1, 1, &[&[2]]), free_hom(0, 1, &[])];
        let cert = is_exact(&seq).unwrap();
        assert!(!cert.is_exact());
        assert_eq!(cert.defects[1], AbGroup { rank: 0, torsion: vec![BigInt::from(2)] });
        assert_eq!(cert.defects[0], AbGroup::zero());
    }

    #[test]
    fn torsion_sequence() {
        // 0 → Z --2--> Z → Z/2 → 0
        let z2 = Presented { orders: vec![BigInt::from(2)] };
        let seq = [
            free_hom(1, 0, &[&[]]),
            free_hom(1, 1, &[&[2]]),
            GroupHom::new(Presented::free(1), z2.clone(), IntMatrix::from_rows(1, 1, &[[1]])),
            GroupHom::zero(z2, Presented::zero()),
        ];
        assert!(is_exact(&seq).unwrap().is_exact());
    }

    #[test]
    fn nonzero_composite_is_rejected() {
        let seq = [free_hom(1, 1, &[&[1]]), free_hom(1, 1, &[&[1]])];
        assert_eq!(is_exact(&seq), Err(Error::CompositeNonzero { position: 1 }));
    }

    #[test]
    fn solver_finds_integer_preimages() {
        let m = IntMatrix::from_rows(2, 2, &[[2, 0], [0, 3]]);
        let s = Solver::new(&m);
        assert_eq!(s.solve(&[BigInt::from(4), BigInt::from(9)]), Some(vec![BigInt::from(2), BigInt::from(3)]));
        assert_eq!(s.solve(&[BigInt::from(1), BigInt::from(0)]), None);
    }

    #[test]
    fn injectivity_and_surjectivity() {
        let z2 = Presented { orders: vec![BigInt::from(2)] };
        let q = GroupHom::new(Presented::free(1), z2, IntMatrix::from_rows(1, 1, &[[1]]));
        assert!(q.is_surjective());
        assert!(!q.is_injective());
        assert!(free_hom(1, 1, &[&[-1]]).is_injective());
    }
}
