//! The Boolean lattice `B_n` under reverse inclusion and its modification
//! `B̂_n`, which adds a second maximal element `1′` above every nonempty subset.
//!
//! Subsets are bitmasks; `1′` is the sentinel `1 << n`. The cell of `x` has
//! dimension `|x|`, and `1′` is a 0-cell.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::linalg::{CochainComplex, IntMatrix};

pub type Elem = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    n: usize,
    modified: bool,
}

impl Lattice {
    pub fn boolean(n: usize) -> Self {
        assert!(n < 24, "rank {n} is too large to enumerate");
        Lattice { n, modified: false }
    }

    pub fn modified(n: usize) -> Self {
        assert!(n < 24, "rank {n} is too large to enumerate");
        Lattice { n, modified: true }
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn is_modified(&self) -> bool {
        self.modified
    }

    pub fn len(&self) -> usize {
        (1 << self.n) + self.modified as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The maximal element `1 = ∅`.
    pub fn top(&self) -> Elem {
        0
    }

    pub fn prime(&self) -> Option<Elem> {
        self.modified.then_some(1 << self.n)
    }

    pub fn is_prime(&self, x: Elem) -> bool {
        self.modified && x == 1 << self.n
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.len()
    }

    pub fn dim(&self, x: Elem) -> usize {
        if self.is_prime(x) {
            0
        } else {
            x.count_ones() as usize
        }
    }

    /// Elements of cube degree `k`, in increasing order with `1′` last.
    pub fn of_dim(&self, k: usize) -> Vec<Elem> {
        self.elements().filter(|&x| self.dim(x) == k).collect()
    }

    /// `x ≤ y`.
    pub fn leq(&self, x: Elem, y: Elem) -> bool {
        match (self.is_prime(x), self.is_prime(y)) {
            (true, _) => x == y,
            (false, true) => x != 0,
            (false, false) => y & !x == 0,
        }
    }

    pub fn lt(&self, x: Elem, y: Elem) -> bool {
        x != y && self.leq(x, y)
    }

    /// All `y` with `x ≺ y`.
    pub fn covers_above(&self, x: Elem) -> Vec<Elem> {
        if self.is_prime(x) {
            return Vec::new();
        }
        let mut out: Vec<Elem> = (0..self.n).filter(|j| x >> j & 1 == 1).map(|j| x & !(1 << j)).collect();
        if self.modified && x.count_ones() == 1 {
            out.push(1 << self.n);
        }
        out
    }

    /// All `x` with `x ≺ y`.
    pub fn covers_below(&self, y: Elem) -> Vec<Elem> {
        if self.is_prime(y) {
            return (0..self.n).map(|j| 1 << j).collect();
        }
        (0..self.n).filter(|j| y >> j & 1 == 0).map(|j| y | 1 << j).collect()
    }

    /// Every covering pair `(x, y)` with `x ≺ y`.
    pub fn covers(&self) -> Vec<(Elem, Elem)> {
        self.elements().flat_map(|x| self.covers_above(x).into_iter().map(move |y| (x, y))).collect()
    }

    /// Canonical chain of covers from `x` up to `y` (exclusive of `x`), removing
    /// the lowest missing bit first and reaching `1′` through the lowest singleton.
    pub fn path(&self, x: Elem, y: Elem) -> Vec<Elem> {
        debug_assert!(self.leq(x, y));
        let mut out = Vec::new();
        let target = if self.is_prime(y) && !self.is_prime(x) { 1 << x.trailing_zeros() } else { y };
        let mut cur = x;
        if !self.is_prime(x) {
            while cur != target {
                cur &= !(1 << (cur & !target).trailing_zeros());
                out.push(cur);
            }
        }
        if self.is_prime(y) && !self.is_prime(x) {
            out.push(y);
        }
        out
    }

    /// The incidence number `[x, y]` of a covering pair.
    pub fn sign(&self, x: Elem, y: Elem) -> i64 {
        if self.is_prime(y) {
            return -1;
        }
        let j = (x & !y).trailing_zeros();
        if (x & ((1 << j) - 1)).count_ones().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Every interval `x < y` of length two, with its two middle elements.
    pub fn diamonds(&self) -> Vec<(Elem, Elem, Elem, Elem)> {
        let mut out = Vec::new();
        for x in self.elements() {
            let mut tops: BTreeMap<Elem, Vec<Elem>> = BTreeMap::new();
            for z in self.covers_above(x) {
                for y in self.covers_above(z) {
                    tops.entry(y).or_default().push(z);
                }
            }
            for (y, zs) in tops {
                debug_assert_eq!(zs.len(), 2, "intervals of length two are diamonds");
                out.push((x, zs[0], zs[1], y));
            }
        }
        out
    }

    /// All strictly increasing chains with at most `max_len + 1` elements,
    /// grouped by length and in lexicographic order within a length.
    pub fn strict_chains(&self, max_len: usize) -> Vec<Vec<Elem>> {
        let mut by_len: Vec<Vec<Vec<Elem>>> = alloc::vec![self.elements().map(|x| alloc::vec![x]).collect()];
        for k in 1..=max_len {
            let mut next = Vec::new();
            for c in &by_len[k - 1] {
                let last = *c.last().unwrap();
                for y in self.elements() {
                    if self.lt(last, y) {
                        let mut d = c.clone();
                        d.push(y);
                        next.push(d);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            by_len.push(next);
        }
        by_len.into_iter().flatten().collect()
    }
}

/// Outcome of checking the incidence numbers exhaustively.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SignAudit {
    pub squares: usize,
    pub odd_squares: usize,
    pub incidence_failures: usize,
    pub prime_edges: usize,
    pub prime_failures: usize,
    pub cancelling_pairs: usize,
    pub cancelling_failures: usize,
}

impl SignAudit {
    pub fn passed(&self) -> bool {
        self.odd_squares == self.squares
            && self.incidence_failures == 0
            && self.prime_failures == 0
            && self.cancelling_failures == 0
    }
}

pub fn audit_signs(l: &Lattice) -> SignAudit {
    let mut a = SignAudit::default();
    for (x, z1, z2, y) in l.diamonds() {
        a.squares += 1;
        let s = [l.sign(x, z1), l.sign(z1, y), l.sign(x, z2), l.sign(z2, y)];
        if s.iter().filter(|&&v| v < 0).count() % 2 == 1 {
            a.odd_squares += 1;
        }
        if s[0] * s[1] + s[2] * s[3] != 0 {
            a.incidence_failures += 1;
        }
    }
    if let Some(p) = l.prime() {
        for x in l.covers_below(p) {
            a.prime_edges += 1;
            if l.sign(x, p) != -1 {
                a.prime_failures += 1;
            }
            a.cancelling_pairs += 1;
            if l.sign(x, l.top()) + l.sign(x, p) != 0 {
                a.cancelling_failures += 1;
            }
        }
    }
    a
}

/// The cellular chain complex `P_*(x)` of the closure of the cell `x`, placed in
/// nonpositive cochain degrees so that `H^{-k}` is `H_k`.
pub fn resolution_complex_at(l: &Lattice, x: Elem) -> CochainComplex {
    let cells: Vec<Elem> = l.elements().filter(|&y| l.leq(x, y)).collect();
    let top = l.dim(x);
    let by_dim: Vec<Vec<Elem>> = (0..=top).map(|k| cells.iter().copied().filter(|&y| l.dim(y) == k).collect()).collect();
    let index = |k: usize, y: Elem| by_dim[k].iter().position(|&z| z == y).expect("cell in closure");
    let dims: Vec<usize> = (0..=top).rev().map(|k| by_dim[k].len()).collect();
    let mut diffs = Vec::new();
    for k in (1..=top).rev() {
        let mut m = IntMatrix::zeros(by_dim[k - 1].len(), by_dim[k].len());
        for (j, &y) in by_dim[k].iter().enumerate() {
            for z in l.covers_above(y) {
                m.add_at(index(k - 1, z), j, &BigInt::from(l.sign(y, z)));
            }
        }
        diffs.push(m);
    }
    CochainComplex::new(-(top as i64), dims, diffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{homology, AbGroup};

    #[test]
    fn sizes_and_covers() {
        let l = Lattice::modified(1);
        assert_eq!(l.len(), 3);
        assert_eq!(l.covers(), alloc::vec![(1, 0), (1, 2)]);
        assert_eq!(Lattice::modified(3).len(), 9);
        assert!(Lattice::modified(0).covers().is_empty());
    }

    #[test]
    fn signs_in_rank_one_and_two() {
        let l = Lattice::modified(1);
        assert_eq!(l.sign(1, 0), 1);
        assert_eq!(l.sign(1, 2), -1);
        let l = Lattice::boolean(2);
        let prod = l.sign(3, 1) * l.sign(1, 0) * l.sign(3, 2) * l.sign(2, 0);
        assert_eq!(prod, -1);
    }

    #[test]
    fn audit_passes() {
        for n in 0..=6 {
            assert!(audit_signs(&Lattice::modified(n)).passed(), "rank {n}");
        }
    }

    #[test]
    fn chains_in_rank_one() {
        let l = Lattice::modified(1);
        let c = l.strict_chains(1);
        assert_eq!(c.iter().filter(|c| c.len() == 1).count(), 3);
        assert_eq!(c.iter().filter(|c| c.len() == 2).count(), 2);
    }

    #[test]
    fn balls_are_acyclic() {
        let l = Lattice::modified(3);
        for x in l.elements() {
            let h = homology(&resolution_complex_at(&l, x)).unwrap();
            for (i, g) in h.degrees() {
                let want = if i == 0 { AbGroup::free(1) } else { AbGroup::zero() };
                assert_eq!(*g, want, "cell {x} degree {i}");
            }
        }
    }

    #[test]
    fn canonical_paths() {
        let l = Lattice::modified(3);
        assert_eq!(l.path(0b111, 0), alloc::vec![0b110, 0b100, 0]);
        assert_eq!(l.path(0b110, 8), alloc::vec![0b010, 8]);
        assert_eq!(l.path(0b010, 0b010), alloc::vec![]);
    }
}
