//! Presheaves of finitely generated free abelian groups on `B_n` and `B̂_n`, and
//! the two complexes computing their higher limits.
//!
//! A presheaf assigns `Z^{r(x)}` to each element and a matrix
//! `F(x ≺ y): Z^{r(y)} → Z^{r(x)}` to each cover.

mod khovanov;
mod random;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::linalg::{
    homology, induced_and_connecting, kernel_basis, same_span, ChainMap, CochainComplex, GradedAbGroup, IntMatrix,
    LongExactSequence,
};
use crate::poset::{Elem, Lattice};

pub use khovanov::{
    khovanov_presheaf, local_ses, skein_morphism, KhovanovPresheaf, LocalSes, LocalSesKind, SkeinMorphism,
};
pub use random::{random_extension, random_presheaf, random_ses, random_unimodular_twist};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LimitMethod {
    Cube,
    Nerve,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeAbPresheaf {
    lattice: Lattice,
    ranks: Vec<usize>,
    maps: BTreeMap<(Elem, Elem), IntMatrix>,
}

impl FreeAbPresheaf {
    /// Missing covers carry the zero map.
    pub fn new(lattice: Lattice, ranks: Vec<usize>, maps: BTreeMap<(Elem, Elem), IntMatrix>) -> Result<Self> {
        let f = Self::new_unchecked(lattice, ranks, maps)?;
        f.check_functorial()?;
        Ok(f)
    }

    pub(crate) fn new_unchecked(
        lattice: Lattice,
        ranks: Vec<usize>,
        maps: BTreeMap<(Elem, Elem), IntMatrix>,
    ) -> Result<Self> {
        if ranks.len() != lattice.len() {
            return Err(Error::Invalid(alloc::format!("{} ranks for {} elements", ranks.len(), lattice.len())));
        }
        for (&(x, y), m) in &maps {
            if x >= lattice.len() || y >= lattice.len() || !lattice.covers_above(x).contains(&y) {
                return Err(Error::Invalid(alloc::format!("{x} < {y} is not a cover")));
            }
            if m.shape() != (ranks[x], ranks[y]) {
                return Err(Error::Invalid(alloc::format!("map on the cover {x} < {y} has the wrong shape")));
            }
        }
        Ok(FreeAbPresheaf { lattice, ranks, maps })
    }

    /// Constant `Z` with identity maps; with `prime_zero` the value at `1′` is 0 instead.
    pub fn constant(lattice: Lattice, prime_zero: bool) -> Self {
        let ranks: Vec<usize> =
            lattice.elements().map(|x| usize::from(!(prime_zero && lattice.is_prime(x)))).collect();
        let maps = lattice
            .covers()
            .into_iter()
            .filter(|&(_, y)| ranks[y] == 1)
            .map(|c| (c, IntMatrix::identity(1)))
            .collect();
        FreeAbPresheaf { lattice, ranks, maps }
    }

    pub fn zero(lattice: Lattice) -> Self {
        FreeAbPresheaf { lattice, ranks: alloc::vec![0; lattice.len()], maps: BTreeMap::new() }
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn rank_at(&self, x: Elem) -> usize {
        self.ranks[x]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.iter().sum()
    }

    /// `F(x ≺ y)`.
    pub fn map(&self, x: Elem, y: Elem) -> IntMatrix {
        self.maps.get(&(x, y)).cloned().unwrap_or_else(|| IntMatrix::zeros(self.ranks[x], self.ranks[y]))
    }

    /// `F(x ≤ y)` along the canonical path.
    pub fn composite(&self, x: Elem, y: Elem) -> IntMatrix {
        let mut m = IntMatrix::identity(self.ranks[x]);
        let mut cur = x;
        for p in self.lattice.path(x, y) {
            m = m.mul(&self.map(cur, p));
            cur = p;
        }
        m
    }

    pub fn check_functorial(&self) -> Result<()> {
        for (x, z1, z2, y) in self.lattice.diamonds() {
            if self.map(x, z1).mul(&self.map(z1, y)) != self.map(x, z2).mul(&self.map(z2, y)) {
                return Err(Error::NotFunctorial { top: y });
            }
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.lattice != other.lattice {
            return Err(Error::Invalid("direct sum over different posets".into()));
        }
        let ranks = self.ranks.iter().zip(&other.ranks).map(|(a, b)| a + b).collect();
        let maps = self
            .lattice
            .covers()
            .into_iter()
            .map(|(x, y)| ((x, y), IntMatrix::block_diag(&[&self.map(x, y), &other.map(x, y)])))
            .collect();
        Ok(FreeAbPresheaf { lattice: self.lattice, ranks, maps })
    }

    /// The restriction to `B_n`, forgetting `1′`.
    pub fn restrict_to_boolean(&self) -> Self {
        let l = Lattice::boolean(self.lattice.rank());
        let ranks = self.ranks[..l.len()].to_vec();
        let maps = self.maps.iter().filter(|(&(_, y), _)| y < l.len()).map(|(&k, m)| (k, m.clone())).collect();
        FreeAbPresheaf { lattice: l, ranks, maps }
    }

    /// Offsets of each element inside its cube degree.
    fn cube_layout(&self) -> (Vec<Vec<Elem>>, Vec<usize>) {
        let l = &self.lattice;
        let by_dim: Vec<Vec<Elem>> = (0..=l.rank()).map(|k| l.of_dim(k)).collect();
        let mut offset = alloc::vec![0; l.len()];
        for layer in &by_dim {
            let mut o = 0;
            for &x in layer {
                offset[x] = o;
                o += self.ranks[x];
            }
        }
        (by_dim, offset)
    }

    /// The cube complex `K^k = ⊕_{dim x = k} F(x)` with `d = Σ [x, y] F(x ≺ y)`.
    /// Over `B_n` this is the cube complex of the extension by zero to `B̂_n`.
    pub fn cube_complex(&self) -> CochainComplex {
        let l = &self.lattice;
        let (by_dim, offset) = self.cube_layout();
        let dims: Vec<usize> = by_dim.iter().map(|layer| layer.iter().map(|&x| self.ranks[x]).sum()).collect();
        let mut diffs = Vec::new();
        for k in 0..l.rank() {
            let mut triplets = Vec::new();
            for &x in &by_dim[k + 1] {
                for y in l.covers_above(x) {
                    let s = BigInt::from(l.sign(x, y));
                    for (i, j, v) in self.map(x, y).entries() {
                        triplets.push((offset[x] + i, offset[y] + j, v * &s));
                    }
                }
            }
            diffs.push(IntMatrix::from_triplets(dims[k + 1], dims[k], triplets));
        }
        CochainComplex::new(0, dims, diffs)
    }

    /// Normalised cochains on the nerve: `C^k = ⊕_{x_0 < … < x_k} F(x_0)`.
    pub fn nerve_complex(&self) -> CochainComplex {
        let l = &self.lattice;
        let chains = l.strict_chains(l.rank() + 1);
        let top = chains.iter().map(Vec::len).max().unwrap_or(1) - 1;
        let mut index: Vec<BTreeMap<Vec<Elem>, usize>> = alloc::vec![BTreeMap::new(); top + 1];
        let mut dims = alloc::vec![0usize; top + 1];
        for c in chains {
            let k = c.len() - 1;
            let r = self.ranks[c[0]];
            index[k].insert(c, dims[k]);
            dims[k] += r;
        }
        let mut cache: BTreeMap<(Elem, Elem), IntMatrix> = BTreeMap::new();
        let mut diffs = Vec::new();
        for k in 0..top {
            let mut triplets = Vec::new();
            for (sigma, &row) in &index[k + 1] {
                let x0 = sigma[0];
                let tail = &sigma[1..];
                let col = index[k][tail];
                let m = cache.entry((x0, sigma[1])).or_insert_with(|| self.composite(x0, sigma[1]));
                for (i, j, v) in m.entries() {
                    triplets.push((row + i, col + j, v.clone()));
                }
                for i in 1..sigma.len() {
                    let mut face = sigma.clone();
                    face.remove(i);
                    let col = index[k][&face];
                    let s = if i % 2 == 0 { BigInt::from(1) } else { BigInt::from(-1) };
                    for t in 0..self.ranks[x0] {
                        triplets.push((row + t, col + t, s.clone()));
                    }
                }
            }
            diffs.push(IntMatrix::from_triplets(dims[k + 1], dims[k], triplets));
        }
        CochainComplex::new(0, dims, diffs)
    }

    /// Offset of each `F(x)` inside `∏_x F(x)`.
    fn product_offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.ranks.len());
        let mut o = 0;
        for &r in &self.ranks {
            out.push(o);
            o += r;
        }
        out
    }

    /// Basis (as columns of `∏_x F(x)`) of the compatible tuples
    /// `λ_x = F(x ≺ y) λ_y`.
    pub fn compatible_tuples(&self) -> IntMatrix {
        let off = self.product_offsets();
        let covers = self.lattice.covers();
        let mut triplets = Vec::new();
        let mut row = 0;
        for &(x, y) in &covers {
            for t in 0..self.ranks[x] {
                triplets.push((row + t, off[x] + t, BigInt::from(1)));
            }
            for (i, j, v) in self.map(x, y).entries() {
                triplets.push((row + i, off[y] + j, -v));
            }
            row += self.ranks[x];
        }
        kernel_basis(&IntMatrix::from_triplets(row, self.total_rank(), triplets))
    }

    /// Compares `lim⁰` as computed from compatible tuples, from `ker d⁰` of the
    /// nerve complex and from `ker d⁰` of the cube complex (over `B̂_n` only).
    pub fn lim0_agreement(&self) -> Lim0Agreement {
        let tuples = self.compatible_tuples();
        let nerve = kernel_basis(&self.nerve_complex().d(0));
        let nerve_matches = same_span(&tuples, &nerve);
        let cube_matches = self.lattice.is_modified().then(|| {
            let off = self.product_offsets();
            let mut rows = Vec::new();
            for x in self.lattice.of_dim(0) {
                rows.extend(off[x]..off[x] + self.ranks[x]);
            }
            let cols: Vec<usize> = (0..tuples.cols()).collect();
            let projected = tuples.select(&rows, &cols);
            let cube = kernel_basis(&self.cube_complex().d(0));
            same_span(&projected, &cube)
        });
        Lim0Agreement { rank: tuples.cols(), nerve_matches, cube_matches }
    }

    /// `lim^i F` for every `i`. The cube method needs `B̂_n` (or `n = 0`).
    pub fn higher_limits(&self, method: LimitMethod) -> Result<GradedAbGroup> {
        match method {
            LimitMethod::Cube => {
                if !self.lattice.is_modified() && self.lattice.rank() > 0 {
                    return Err(Error::Invalid("the cube complex computes limits only over the modified lattice".into()));
                }
                homology(&self.cube_complex())
            }
            LimitMethod::Nerve => homology(&self.nerve_complex()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Lim0Agreement {
    pub rank: usize,
    pub nerve_matches: bool,
    /// `None` over the unmodified lattice.
    pub cube_matches: Option<bool>,
}

impl Lim0Agreement {
    pub fn all_agree(&self) -> bool {
        self.nerve_matches && self.cube_matches != Some(false)
    }
}

/// A natural transformation, one matrix per element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresheafMorphism {
    components: Vec<IntMatrix>,
}

impl PresheafMorphism {
    pub fn new(src: &FreeAbPresheaf, dst: &FreeAbPresheaf, components: Vec<IntMatrix>) -> Result<Self> {
        if src.lattice != dst.lattice || components.len() != src.lattice.len() {
            return Err(Error::Invalid("morphism components do not match the poset".into()));
        }
        for (x, m) in components.iter().enumerate() {
            if m.shape() != (dst.ranks[x], src.ranks[x]) {
                return Err(Error::Invalid(alloc::format!("component at {x} has the wrong shape")));
            }
        }
        let f = PresheafMorphism { components };
        f.check_natural(src, dst)?;
        Ok(f)
    }

    pub fn identity(f: &FreeAbPresheaf) -> Self {
        PresheafMorphism { components: f.ranks.iter().map(|&r| IntMatrix::identity(r)).collect() }
    }

    pub fn zero(src: &FreeAbPresheaf, dst: &FreeAbPresheaf) -> Self {
        PresheafMorphism {
            components: src.ranks.iter().zip(&dst.ranks).map(|(&s, &d)| IntMatrix::zeros(d, s)).collect(),
        }
    }

    pub fn component(&self, x: Elem) -> &IntMatrix {
        &self.components[x]
    }

    pub fn check_natural(&self, src: &FreeAbPresheaf, dst: &FreeAbPresheaf) -> Result<()> {
        for (x, y) in src.lattice.covers() {
            if self.components[x].mul(&src.map(x, y)) != dst.map(x, y).mul(&self.components[y]) {
                return Err(Error::NotNatural { lower: x, upper: y });
            }
        }
        Ok(())
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &PresheafMorphism) -> PresheafMorphism {
        PresheafMorphism { components: self.components.iter().zip(&first.components).map(|(a, b)| a.mul(b)).collect() }
    }

    /// The induced chain map between cube complexes.
    pub fn cube_map(&self, src: &FreeAbPresheaf) -> ChainMap {
        let l = src.lattice;
        let mut f = ChainMap::new();
        for k in 0..=l.rank() {
            let blocks: Vec<&IntMatrix> = l.of_dim(k).into_iter().map(|x| &self.components[x]).collect();
            f.insert(k as i64, IntMatrix::block_diag(&blocks));
        }
        f
    }
}

/// `0 → sub --inc--> total --proj--> quotient → 0`, exact at every element.
#[derive(Clone, Debug)]
pub struct PresheafSes {
    pub sub: FreeAbPresheaf,
    pub total: FreeAbPresheaf,
    pub quotient: FreeAbPresheaf,
    pub inc: PresheafMorphism,
    pub proj: PresheafMorphism,
}

impl PresheafSes {
    /// The long exact sequence of `lim^*`, through the cube complexes.
    pub fn les(&self) -> Result<LongExactSequence> {
        let a = self.sub.cube_complex();
        let b = self.total.cube_complex();
        let c = self.quotient.cube_complex();
        induced_and_connecting(&a, &b, &c, &self.inc.cube_map(&self.sub), &self.proj.cube_map(&self.total))
    }
}

/// Glues `top → bottom` over `B̂_r` (both zero at `1′`) into one presheaf over
/// `B̂_{r+1}`: the new coordinate is the highest bit, `top` sits on the subsets
/// without it, `bottom` on the subsets with it, and the connecting map fills
/// the edges in the new direction.
pub fn two_layer_presheaf(
    top: &FreeAbPresheaf,
    bottom: &FreeAbPresheaf,
    connecting: &PresheafMorphism,
) -> Result<FreeAbPresheaf> {
    let l = top.lattice;
    if !l.is_modified() || bottom.lattice != l {
        return Err(Error::Invalid("layers must live on the same modified lattice".into()));
    }
    let p = l.prime().unwrap();
    if top.ranks[p] != 0 || bottom.ranks[p] != 0 {
        return Err(Error::Invalid("layers must vanish at the extra maximum".into()));
    }
    connecting.check_natural(top, bottom)?;
    let r = l.rank();
    let big = Lattice::modified(r + 1);
    let new = 1usize << r;
    let ranks = big
        .elements()
        .map(|x| {
            if big.is_prime(x) {
                0
            } else if x & new == 0 {
                top.ranks[x]
            } else {
                bottom.ranks[x & !new]
            }
        })
        .collect();
    let mut maps = BTreeMap::new();
    for (x, y) in big.covers() {
        if big.is_prime(y) {
            continue;
        }
        let m = match (x & new != 0, y & new != 0) {
            (false, false) => top.map(x, y),
            (true, true) => bottom.map(x & !new, y & !new),
            _ => connecting.components[y].clone(),
        };
        maps.insert((x, y), m);
    }
    FreeAbPresheaf::new(big, ranks, maps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::AbGroup;

    fn limits_of_constant(n: usize, prime_zero: bool, method: LimitMethod) -> GradedAbGroup {
        FreeAbPresheaf::constant(Lattice::modified(n), prime_zero).higher_limits(method).unwrap()
    }

    #[test]
    fn constant_sheaf_limits() {
        for n in 0..=3 {
            for m in [LimitMethod::Cube, LimitMethod::Nerve] {
                let h = limits_of_constant(n, false, m);
                let want = if n == 0 { 2 } else { 1 };
                assert_eq!(h.get(0), AbGroup::free(want), "n={n} {m:?}");
                assert_eq!(h.total_rank(), want, "n={n} {m:?}");
            }
        }
    }

    #[test]
    fn constant_vanishing_at_prime_is_acyclic() {
        for n in 1..=3 {
            for m in [LimitMethod::Cube, LimitMethod::Nerve] {
                assert!(limits_of_constant(n, true, m).is_zero(), "n={n} {m:?}");
            }
        }
    }

    #[test]
    fn nerve_over_plain_boolean_has_no_higher_limits() {
        let f = FreeAbPresheaf::constant(Lattice::boolean(3), false);
        let h = f.higher_limits(LimitMethod::Nerve).unwrap();
        assert_eq!(h.get(0), AbGroup::free(1));
        assert_eq!(h.total_rank(), 1);
        assert!(f.higher_limits(LimitMethod::Cube).is_err());
    }

    #[test]
    fn lim0_agrees_on_constants() {
        let a = FreeAbPresheaf::constant(Lattice::modified(2), false).lim0_agreement();
        assert_eq!(a.rank, 1);
        assert!(a.all_agree());
    }

    #[test]
    fn non_functorial_data_is_rejected() {
        let l = Lattice::modified(2);
        let mut maps = BTreeMap::new();
        for (x, y) in l.covers() {
            maps.insert((x, y), IntMatrix::identity(1));
        }
        maps.insert((0b11, 0b01), IntMatrix::from_rows(1, 1, &[[2]]));
        assert!(matches!(
            FreeAbPresheaf::new(l, alloc::vec![1; 5], maps),
            Err(Error::NotFunctorial { .. })
        ));
    }
}
