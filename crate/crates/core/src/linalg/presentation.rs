//! Explicit homology presentations, chain maps, and the long exact sequence
//! of a short exact sequence of cochain complexes.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::complex::{AbGroup, CochainComplex};
use super::exact::{is_exact, ExactnessCertificate, GroupHom, Presented, Solver};
use super::matrix::IntMatrix;
use super::snf::smith_normal_form;
use super::sparse::invariant_factors;
use crate::error::{Error, Result};

/// `H^i` as `Z^g / (orders)` with cocycle representatives for the generators.
#[derive(Clone, Debug)]
pub struct HomologyPresentation {
    pub degree: i64,
    /// `dim C^i × g`; column `k` is a cocycle representing generator `k`.
    pub generators: IntMatrix,
    pub group: Presented,
    coord: IntMatrix,
}

impl HomologyPresentation {
    pub fn of(c: &CochainComplex, i: i64) -> Self {
        let dim = c.dim(i);
        let d_out = c.d(i);
        let d_in = c.d(i - 1);
        let kf = smith_normal_form(&d_out);
        let r = kf.rank();
        let z = kf.v.col_range(r, dim);
        let rows: Vec<usize> = (r..dim).collect();
        let all: Vec<usize> = (0..dim).collect();
        let z_left = kf.v_inv.select(&rows, &all);
        let b = z_left.mul(&d_in);
        let bf = smith_normal_form(&b);
        let nz = dim - r;
        let mut keep = Vec::new();
        let mut orders = Vec::new();
        for k in 0..nz {
            match bf.diagonal.get(k) {
                Some(e) if e.is_one() => {}
                Some(e) => {
                    keep.push(k);
                    orders.push(e.clone());
                }
                None => {
                    keep.push(k);
                    orders.push(BigInt::zero());
                }
            }
        }
        let all_z: Vec<usize> = (0..nz).collect();
        let generators = z.mul(&bf.u_inv.select(&all_z, &keep));
        let coord = bf.u.select(&keep, &all_z).mul(&z_left);
        HomologyPresentation { degree: i, generators, group: Presented { orders }, coord }
    }

    pub fn abelian_group(&self) -> AbGroup {
        self.group.group()
    }

    /// Coordinates of the class of a cocycle, reduced modulo the orders.
    pub fn coordinates(&self, cocycle: &[BigInt]) -> Vec<BigInt> {
        let mut v = self.coord.mul_vec(cocycle);
        self.group.reduce(&mut v);
        v
    }

    pub fn rank(&self) -> usize {
        self.generators.cols()
    }
}

/// Presentations for every degree in `lo..=hi`.
pub fn presentations(c: &CochainComplex, lo: i64, hi: i64) -> BTreeMap<i64, HomologyPresentation> {
    (lo..=hi).map(|i| (i, HomologyPresentation::of(c, i))).collect()
}

/// Degreewise matrices of a map between two cochain complexes; absent degrees are zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChainMap {
    components: BTreeMap<i64, IntMatrix>,
}

impl ChainMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, i: i64, m: IntMatrix) {
        self.components.insert(i, m);
    }

    pub fn identity(c: &CochainComplex) -> Self {
        let mut f = ChainMap::new();
        for i in c.lo()..=c.hi() {
            f.insert(i, IntMatrix::identity(c.dim(i)));
        }
        f
    }

    pub fn component(&self, i: i64, src: &CochainComplex, dst: &CochainComplex) -> IntMatrix {
        match self.components.get(&i) {
            Some(m) => {
                assert_eq!(m.shape(), (dst.dim(i), src.dim(i)), "chain map component {i} has the wrong shape");
                m.clone()
            }
            None => IntMatrix::zeros(dst.dim(i), src.dim(i)),
        }
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.components.keys().copied()
    }

    pub fn compose(&self, first: &ChainMap, a: &CochainComplex, b: &CochainComplex, c: &CochainComplex) -> ChainMap {
        let mut out = ChainMap::new();
        let lo = a.lo().min(c.lo());
        let hi = a.hi().max(c.hi());
        for i in lo..=hi {
            out.insert(i, self.component(i, b, c).mul(&first.component(i, a, b)));
        }
        out
    }

    /// Certifies `d f = f d` in every degree.
    pub fn check(&self, src: &CochainComplex, dst: &CochainComplex) -> Result<()> {
        let lo = src.lo().min(dst.lo()) - 1;
        let hi = src.hi().max(dst.hi());
        for i in lo..=hi {
            let left = dst.d(i).mul(&self.component(i, src, dst));
            let right = self.component(i + 1, src, dst).mul(&src.d(i));
            if left != right {
                return Err(Error::NotChainMap { degree: i });
            }
        }
        Ok(())
    }
}

/// Matrix of `f_*: H^i(src) → H^i(dst)` in the given presentations.
pub fn induced_map(
    f: &IntMatrix,
    src: &HomologyPresentation,
    dst: &HomologyPresentation,
) -> GroupHom {
    let images = f.mul(&src.generators);
    let mut m = IntMatrix::zeros(dst.rank(), src.rank());
    for j in 0..src.rank() {
        for (i, v) in dst.coordinates(&images.column_vec(j)).into_iter().enumerate() {
            if !v.is_zero() {
                m.set(i, j, v);
            }
        }
    }
    GroupHom::new(src.group.clone(), dst.group.clone(), m)
}

/// Induced map on all degrees of a common window.
pub fn induced_maps(f: &ChainMap, src: &CochainComplex, dst: &CochainComplex) -> Result<BTreeMap<i64, GroupHom>> {
    f.check(src, dst)?;
    let lo = src.lo().min(dst.lo());
    let hi = src.hi().max(dst.hi());
    let ps = presentations(src, lo, hi);
    let pd = presentations(dst, lo, hi);
    Ok((lo..=hi).map(|i| (i, induced_map(&f.component(i, src, dst), &ps[&i], &pd[&i]))).collect())
}

/// Which group of the short exact sequence an LES term belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum LesTerm {
    Sub,
    Total,
    Quotient,
}

/// `… → H^i(A) → H^i(B) → H^i(C) → H^{i+1}(A) → …`, flattened.
#[derive(Clone, Debug)]
pub struct LongExactSequence {
    /// `(degree, term)` of each group in order.
    pub terms: Vec<(i64, LesTerm)>,
    pub groups: Vec<AbGroup>,
    /// `maps[k]` goes from `terms[k]` to `terms[k + 1]`.
    pub maps: Vec<GroupHom>,
}

impl LongExactSequence {
    pub fn certify(&self) -> Result<ExactnessCertificate> {
        is_exact(&self.maps)
    }

    pub fn group(&self, degree: i64, term: LesTerm) -> AbGroup {
        self.terms
            .iter()
            .position(|t| *t == (degree, term))
            .map(|k| self.groups[k].clone())
            .unwrap_or_default()
    }

    /// The connecting homomorphism out of `H^i(C)`.
    pub fn connecting(&self, degree: i64) -> Option<&GroupHom> {
        let k = self.terms.iter().position(|t| *t == (degree, LesTerm::Quotient))?;
        self.maps.get(k)
    }
}

/// Certifies that `0 → A --f--> B --g--> C → 0` is split exact in every degree.
pub fn check_pointwise_ses(
    a: &CochainComplex,
    b: &CochainComplex,
    c: &CochainComplex,
    f: &ChainMap,
    g: &ChainMap,
) -> Result<()> {
    let lo = a.lo().min(b.lo()).min(c.lo());
    let hi = a.hi().max(b.hi()).max(c.hi());
    for i in lo..=hi {
        let fi = f.component(i, a, b);
        let gi = g.component(i, b, c);
        let ff = invariant_factors(&fi);
        let gf = invariant_factors(&gi);
        let ok = gi.mul(&fi).is_zero()
            && ff.len() == a.dim(i)
            && ff.iter().all(One::is_one)
            && gf.len() == c.dim(i)
            && gf.iter().all(One::is_one)
            && a.dim(i) + c.dim(i) == b.dim(i);
        if !ok {
            return Err(Error::NotExactPointwise { degree: i });
        }
    }
    Ok(())
}

/// Long exact sequence of a short exact sequence of complexes, with explicit
/// induced maps and connecting homomorphisms computed by lifting cocycles.
pub fn induced_and_connecting(
    a: &CochainComplex,
    b: &CochainComplex,
    c: &CochainComplex,
    f: &ChainMap,
    g: &ChainMap,
) -> Result<LongExactSequence> {
    f.check(a, b)?;
    g.check(b, c)?;
    check_pointwise_ses(a, b, c, f, g)?;
    let lo = a.lo().min(b.lo()).min(c.lo()) - 1;
    let hi = a.hi().max(b.hi()).max(c.hi()) + 1;
    let pa = presentations(a, lo, hi + 1);
    let pb = presentations(b, lo, hi);
    let pc = presentations(c, lo, hi);

    let mut terms = Vec::new();
    let mut groups = Vec::new();
    let mut maps = Vec::new();
    for i in lo..=hi {
        let fi = f.component(i, a, b);
        let gi = g.component(i, b, c);
        terms.push((i, LesTerm::Sub));
        groups.push(pa[&i].abelian_group());
        maps.push(induced_map(&fi, &pa[&i], &pb[&i]));
        terms.push((i, LesTerm::Total));
        groups.push(pb[&i].abelian_group());
        maps.push(induced_map(&gi, &pb[&i], &pc[&i]));
        terms.push((i, LesTerm::Quotient));
        groups.push(pc[&i].abelian_group());
        maps.push(connecting_map(b, &gi, &f.component(i + 1, a, b), &pc[&i], &pa[&(i + 1)], i)?);
    }
    terms.push((hi + 1, LesTerm::Sub));
    groups.push(pa[&(hi + 1)].abelian_group());
    Ok(LongExactSequence { terms, groups, maps })
}

fn connecting_map(
    b: &CochainComplex,
    gi: &IntMatrix,
    f_next: &IntMatrix,
    pc: &HomologyPresentation,
    pa_next: &HomologyPresentation,
    i: i64,
) -> Result<GroupHom> {
    let mut m = IntMatrix::zeros(pa_next.rank(), pc.rank());
    if pc.rank() > 0 && pa_next.rank() > 0 {
        let lift = Solver::new(gi);
        let back = Solver::new(f_next);
        let db = b.d(i);
        for j in 0..pc.rank() {
            let cocycle = pc.generators.column_vec(j);
            let bj = lift.solve(&cocycle).ok_or(Error::NotExactPointwise { degree: i })?;
            let dbj = db.mul_vec(&bj);
            let aj = back.solve(&dbj).ok_or(Error::NotExactPointwise { degree: i + 1 })?;
            for (r, v) in pa_next.coordinates(&aj).into_iter().enumerate() {
                if !v.is_zero() {
                    m.set(r, j, v);
                }
            }
        }
    }
    Ok(GroupHom::new(pc.group.clone(), pa_next.group.clone(), m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::complex::homology;
    use alloc::vec;

    #[test]
    fn presentation_matches_homology() {
        let d0 = IntMatrix::from_rows(2, 2, &[[2, 0], [0, 0]]);
        let d1 = IntMatrix::from_rows(1, 2, &[[0, 0]]);
        let c = CochainComplex::new(0, vec![2, 2, 1], vec![d0, d1]);
        let h = homology(&c).unwrap();
        for i in 0..=2 {
            assert_eq!(HomologyPresentation::of(&c, i).abelian_group(), h.get(i));
        }
    }

    #[test]
    fn doubling_connecting_map() {
        // A = [0 → Z], B = [Z --2--> Z], C = [Z → 0]; the connecting map is multiplication by 2
        let a = CochainComplex::new(0, vec![0, 1], vec![IntMatrix::zeros(1, 0)]);
        let b = CochainComplex::new(0, vec![1, 1], vec![IntMatrix::from_rows(1, 1, &[[2]])]);
        let c = CochainComplex::new(0, vec![1, 0], vec![IntMatrix::zeros(0, 1)]);
        let mut f = ChainMap::new();
        f.insert(1, IntMatrix::identity(1));
        let mut g = ChainMap::new();
        g.insert(0, IntMatrix::identity(1));
        let les = induced_and_connecting(&a, &b, &c, &f, &g).unwrap();
        assert!(les.certify().unwrap().is_exact());
        assert_eq!(les.group(1, LesTerm::Total), AbGroup { rank: 0, torsion: vec![BigInt::from(2)] });
        let delta = les.connecting(0).unwrap();
        assert_eq!(delta.matrix, IntMatrix::from_rows(1, 1, &[[2]]));
    }

    #[test]
    fn identity_inclusion() {
        let b = CochainComplex::new(0, vec![2], vec![]);
        let c = CochainComplex::new(0, vec![0], vec![]);
        let f = ChainMap::identity(&b);
        let mut g = ChainMap::new();
        g.insert(0, IntMatrix::zeros(0, 2));
        let les = induced_and_connecting(&b, &b, &c, &f, &g).unwrap();
        assert!(les.certify().unwrap().is_exact());
        assert!(les.connecting(0).unwrap().is_zero_map());
    }

    #[test]
    fn rejects_non_chain_maps() {
        let c = CochainComplex::new(0, vec![1, 1], vec![IntMatrix::from_rows(1, 1, &[[1]])]);
        let mut f = ChainMap::new();
        f.insert(0, IntMatrix::identity(1));
        assert_eq!(f.check(&c, &c), Err(Error::NotChainMap { degree: 0 }));
    }
}
