use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::One;

use super::matrix::IntMatrix;
use super::sparse::invariant_factors;
use crate::error::{Error, Result};

/// Finitely generated abelian group `Z^rank ⊕ Z/d_1 ⊕ … ⊕ Z/d_k` with
/// `d_1 | d_2 | …` and every `d_i ≥ 2`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbGroup {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbGroup {
    pub fn zero() -> Self {
        AbGroup::default()
    }

    pub fn free(rank: usize) -> Self {
        AbGroup { rank, torsion: Vec::new() }
    }

    /// Normalises arbitrary cyclic orders (0 meaning `Z`) into invariant-factor form.
    pub fn from_orders(orders: &[BigInt]) -> Self {
        let rank = orders.iter().filter(|o| o.sign() == num_bigint::Sign::NoSign).count();
        let finite: Vec<BigInt> = orders
            .iter()
            .filter(|o| o.sign() != num_bigint::Sign::NoSign)
            .cloned()
            .collect();
        let n = finite.len();
        let diag = IntMatrix::from_triplets(n, n, finite.into_iter().enumerate().map(|(i, o)| (i, i, o)));
        let torsion = invariant_factors(&diag).into_iter().filter(|d| !d.is_one()).collect();
        AbGroup { rank, torsion }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn direct_sum(&self, other: &AbGroup) -> AbGroup {
        let mut orders: Vec<BigInt> = self.torsion.iter().chain(other.torsion.iter()).cloned().collect();
        orders.extend(core::iter::repeat_n(BigInt::from(0), self.rank + other.rank));
        AbGroup::from_orders(&orders)
    }
}

impl fmt::Display for AbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// An abelian group in each integer degree; degrees not stored are zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GradedAbGroup {
    groups: BTreeMap<i64, AbGroup>,
}

impl GradedAbGroup {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets degree `i`; zero groups are kept so windows report explicit zeros.
    pub fn set(&mut self, i: i64, g: AbGroup) {
        self.groups.insert(i, g);
    }

    pub fn get(&self, i: i64) -> AbGroup {
        self.groups.get(&i).cloned().unwrap_or_default()
    }

    pub fn degrees(&self) -> impl Iterator<Item = (i64, &AbGroup)> + '_ {
        self.groups.iter().map(|(i, g)| (*i, g))
    }

    /// Nonzero degrees only.
    pub fn support(&self) -> BTreeMap<i64, AbGroup> {
        self.groups
            .iter()
            .filter(|(_, g)| !g.is_zero())
            .map(|(i, g)| (*i, g.clone()))
            .collect()
    }

    pub fn window(&self) -> Option<(i64, i64)> {
        Some((*self.groups.keys().next()?, *self.groups.keys().next_back()?))
    }

    pub fn is_zero(&self) -> bool {
        self.groups.values().all(AbGroup::is_zero)
    }

    /// `result^i = self^{i + shift}`.
    pub fn shifted(&self, shift: i64) -> Self {
        GradedAbGroup {
            groups: self.groups.iter().map(|(i, g)| (i - shift, g.clone())).collect(),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (i, g) in &other.groups {
            let cur = out.get(*i);
            out.groups.insert(*i, cur.direct_sum(g));
        }
        out
    }

    pub fn total_rank(&self) -> usize {
        self.groups.values().map(|g| g.rank).sum()
    }

    pub fn has_torsion(&self) -> bool {
        self.groups.values().any(|g| !g.torsion.is_empty())
    }
}

impl fmt::Display for GradedAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, g) in &self.groups {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "{i}: {g}")?;
        }
        Ok(())
    }
}

/// True iff `g^i ≅ h^{i + shift}` for every degree.
pub fn iso_check(g: &GradedAbGroup, h: &GradedAbGroup, shift: i64) -> bool {
    g.support() == h.shifted(shift).support()
}

/// Cochain complex of free abelian groups `C^lo → … → C^hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainComplex {
    lo: i64,
    dims: Vec<usize>,
    diffs: Vec<IntMatrix>,
}

impl CochainComplex {
    /// `dims[k]` is the rank of `C^{lo+k}`; `diffs[k]` maps degree `lo+k` to `lo+k+1`.
    pub fn new(lo: i64, dims: Vec<usize>, diffs: Vec<IntMatrix>) -> Self {
        assert_eq!(diffs.len() + 1, dims.len().max(1), "need one differential between consecutive degrees");
        for (k, d) in diffs.iter().enumerate() {
            assert_eq!(d.shape(), (dims[k + 1], dims[k]), "differential {k} has the wrong shape");
        }
        CochainComplex { lo, dims, diffs }
    }

    pub fn zero() -> Self {
        CochainComplex { lo: 0, dims: Vec::new(), diffs: Vec::new() }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.dims.len() as i64 - 1
    }

    pub fn dim(&self, i: i64) -> usize {
        if i < self.lo || i > self.hi() {
            return 0;
        }
        self.dims[(i - self.lo) as usize]
    }

    /// Differential out of degree `i`, as a `dim(i+1) × dim(i)` matrix.
    pub fn d(&self, i: i64) -> IntMatrix {
        if i >= self.lo && i < self.hi() {
            self.diffs[(i - self.lo) as usize].clone()
        } else {
            IntMatrix::zeros(self.dim(i + 1), self.dim(i))
        }
    }

    pub fn d_ref(&self, i: i64) -> Option<&IntMatrix> {
        if i >= self.lo && i < self.hi() {
            Some(&self.diffs[(i - self.lo) as usize])
        } else {
            None
        }
    }

    /// Re-indexes so that the new complex has `new^i = self^{i + shift}`.
    pub fn shifted(&self, shift: i64) -> Self {
        CochainComplex { lo: self.lo - shift, dims: self.dims.clone(), diffs: self.diffs.clone() }
    }

    /// Same complex on a wider degree window, padded with zero groups.
    pub fn widened(&self, lo: i64, hi: i64) -> Self {
        if self.dims.is_empty() {
            let dims = alloc::vec![0; (hi - lo + 1).max(0) as usize];
            let diffs = (lo..hi).map(|_| IntMatrix::zeros(0, 0)).collect();
            return CochainComplex { lo, dims, diffs };
        }
        let lo = lo.min(self.lo);
        let hi = hi.max(self.hi());
        let dims = (lo..=hi).map(|i| self.dim(i)).collect();
        let diffs = (lo..hi).map(|i| self.d(i)).collect();
        CochainComplex { lo, dims, diffs }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Certifies `d^{i+1} d^i = 0` in every degree.
    pub fn check(&self) -> Result<()> {
        for k in 1..self.diffs.len() {
            if !self.diffs[k].mul(&self.diffs[k - 1]).is_zero() {
                return Err(Error::NotAComplex { degree: self.lo + k as i64 - 1 });
            }
        }
        Ok(())
    }
}

/// Cohomology of a complex, with an entry for every degree in its window.
pub fn homology(c: &CochainComplex) -> Result<GradedAbGroup> {
    c.check()?;
    Ok(homology_unchecked(c))
}

pub(crate) fn homology_unchecked(c: &CochainComplex) -> GradedAbGroup {
    let mut out = GradedAbGroup::new();
    if c.dims.is_empty() {
        return out;
    }
    let factors: Vec<Vec<BigInt>> = c.diffs.iter().map(invariant_factors).collect();
    for i in c.lo()..=c.hi() {
        let k = (i - c.lo) as usize;
        let rank_out = if k < factors.len() { factors[k].len() } else { 0 };
        let incoming = if k > 0 { Some(&factors[k - 1]) } else { None };
        let rank_in = incoming.map_or(0, Vec::len);
        let torsion = incoming
            .map(|f| f.iter().filter(|d| !d.is_one()).cloned().collect())
            .unwrap_or_default();
        out.set(i, AbGroup { rank: c.dims[k] - rank_out - rank_in, torsion });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn zero_differential() {
        let c = CochainComplex::new(0, vec![2], vec![]);
        let h = homology(&c).unwrap();
        assert_eq!(h.get(0), AbGroup::free(2));
    }

    #[test]
    fn multiplication_by_two() {
        let c = CochainComplex::new(0, vec![1, 1], vec![IntMatrix::from_rows(1, 1, &[[2]])]);
        let h = homology(&c).unwrap();
        assert_eq!(h.get(0), AbGroup::zero());
        assert_eq!(h.get(1), AbGroup { rank: 0, torsion: vec![BigInt::from(2)] });
    }

    #[test]
    fn rejects_non_complex() {
        let d = IntMatrix::from_rows(1, 1, &[[1]]);
        let c = CochainComplex::new(0, vec![1, 1, 1], vec![d.clone(), d]);
        assert_eq!(homology(&c), Err(Error::NotAComplex { degree: 0 }));
    }

    #[test]
    fn shift_semantics() {
        let mut g = GradedAbGroup::new();
        g.set(0, AbGroup::free(2));
        let mut h = GradedAbGroup::new();
        h.set(1, AbGroup::free(2));
        assert!(iso_check(&g, &g, 0));
        assert!(iso_check(&g, &h, 1));
        assert!(!iso_check(&g, &h, 0));
    }

    #[test]
    fn orders_normalise() {
        let g = AbGroup::from_orders(&[BigInt::from(2), BigInt::from(3), BigInt::from(0)]);
        assert_eq!(g, AbGroup { rank: 1, torsion: vec![BigInt::from(6)] });
    }
}
