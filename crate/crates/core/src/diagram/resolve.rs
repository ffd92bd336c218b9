use alloc::vec::Vec;

use super::PlanarCode;
use crate::error::{Error, Result};

/// The circles of a complete smoothing. Crossing `i` is 1-smoothed iff bit `i` of `state` is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolution {
    pub state: u64,
    /// Circle label of arc `a` at index `a - 1`.
    pub circle_of_arc: Vec<u32>,
    /// Sorted circle labels, crossingless components included.
    pub labels: Vec<u32>,
}

impl Resolution {
    pub fn circle_count(&self) -> usize {
        self.labels.len()
    }

    pub fn circle_of(&self, arc: u32) -> u32 {
        self.circle_of_arc[arc as usize - 1]
    }
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: u32) -> Self {
        UnionFind { parent: (0..=n).collect() }
    }

    fn find(&mut self, mut a: u32) -> u32 {
        while self.parent[a as usize] != a {
            let up = self.parent[self.parent[a as usize] as usize];
            self.parent[a as usize] = up;
            a = up;
        }
        a
    }

    /// The smaller root always wins, so every root is its class minimum.
    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra < rb {
            self.parent[rb as usize] = ra;
        } else if rb < ra {
            self.parent[ra as usize] = rb;
        }
    }
}

pub fn resolve<D: PlanarCode + ?Sized>(d: &D, state: u64) -> Resolution {
    let n = d.arc_count();
    let mut uf = UnionFind::new(n);
    for (i, &[a, b, c, e]) in d.crossings().iter().enumerate() {
        if state >> i & 1 == 1 {
            uf.union(a, e);
            uf.union(b, c);
        } else {
            uf.union(a, b);
            uf.union(c, e);
        }
    }
    let circle_of_arc: Vec<u32> = (1..=n).map(|a| uf.find(a)).collect();
    let mut labels: Vec<u32> = circle_of_arc.clone();
    labels.sort_unstable();
    labels.dedup();
    labels.extend((0..d.free_loops()).map(|i| n + 1 + i));
    Resolution { state, circle_of_arc, labels }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TransitionKind {
    Merge,
    Split,
}

/// Circle bookkeeping along a cube edge from `D(y)` to `D(x)`, `x = y ∪ {j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeTransition {
    pub kind: TransitionKind,
    /// Affected circles of `D(y)`.
    pub from: Vec<u32>,
    /// Affected circles of `D(x)`.
    pub to: Vec<u32>,
    /// `(label in D(y), label in D(x))` for every unaffected circle.
    pub correspondence: Vec<(u32, u32)>,
}

/// The transition for the covering pair `x ≺ y`.
pub fn edge_transition<D: PlanarCode + ?Sized>(d: &D, x: u64, y: u64) -> Result<EdgeTransition> {
    let diff = x ^ y;
    if diff.count_ones() != 1 || x & diff == 0 {
        return Err(Error::NotCovering(diff.count_ones() as usize));
    }
    let j = diff.trailing_zeros() as usize;
    let ry = resolve(d, y);
    let rx = resolve(d, x);
    Ok(transition_between(d, j, &ry, &rx))
}

pub(crate) fn transition_between<D: PlanarCode + ?Sized>(
    d: &D,
    j: usize,
    ry: &Resolution,
    rx: &Resolution,
) -> EdgeTransition {
    let local = d.crossings()[j];
    let mut from: Vec<u32> = local.iter().map(|&a| ry.circle_of(a)).collect();
    let mut to: Vec<u32> = local.iter().map(|&a| rx.circle_of(a)).collect();
    from.sort_unstable();
    from.dedup();
    to.sort_unstable();
    to.dedup();
    let correspondence = ry
        .labels
        .iter()
        .filter(|l| !from.contains(l))
        .map(|&l| (l, l))
        .collect();
    let kind = if from.len() == 2 { TransitionKind::Merge } else { TransitionKind::Split };
    debug_assert_eq!(from.len() + to.len(), 3);
    EdgeTransition { kind, from, to, correspondence }
}

/// A diagram with one crossing smoothed away; it carries no orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smoothed {
    crossings: Vec<[u32; 4]>,
    arc_count: u32,
    free_loops: u32,
    arc_map: Vec<u32>,
}

impl Smoothed {
    /// Label in the smoothed diagram of arc `a` of the original.
    pub fn image_of_arc(&self, a: u32) -> u32 {
        self.arc_map[a as usize - 1]
    }

    /// Label after smoothing of a circle label of the original diagram.
    pub fn image_of_label(&self, original_arcs: u32, l: u32) -> u32 {
        if l <= original_arcs {
            self.image_of_arc(l)
        } else {
            l - original_arcs + self.arc_count
        }
    }
}

impl PlanarCode for Smoothed {
    fn crossings(&self) -> &[[u32; 4]] {
        &self.crossings
    }

    fn arc_count(&self) -> u32 {
        self.arc_count
    }

    fn free_loops(&self) -> u32 {
        self.free_loops
    }
}

/// Smooths crossing `j` (the 1-smoothing when `one`), renumbering the merged
/// arcs by their smallest original label; closed strands become free loops
/// after the original ones.
pub fn smooth<D: PlanarCode + ?Sized>(d: &D, j: usize, one: bool) -> Smoothed {
    let n = d.arc_count();
    let mut uf = UnionFind::new(n);
    let [a, b, c, e] = d.crossings()[j];
    if one {
        uf.union(a, e);
        uf.union(b, c);
    } else {
        uf.union(a, b);
        uf.union(c, e);
    }
    let mut used = alloc::vec![false; n as usize + 1];
    for (i, q) in d.crossings().iter().enumerate() {
        if i != j {
            for &x in q {
                used[uf.find(x) as usize] = true;
            }
        }
    }
    let mut label = alloc::vec![0u32; n as usize + 1];
    let mut next = 1;
    for r in 1..=n {
        if uf.find(r) == r && used[r as usize] {
            label[r as usize] = next;
            next += 1;
        }
    }
    let arc_count = next - 1;
    let mut free_loops = d.free_loops();
    let mut closed = Vec::new();
    for r in 1..=n {
        if uf.find(r) == r && !used[r as usize] {
            closed.push(r);
        }
    }
    let mut free_label = alloc::vec![0u32; n as usize + 1];
    for &r in &closed {
        free_label[r as usize] = arc_count + free_loops + 1;
        free_loops += 1;
    }
    let arc_map = (1..=n)
        .map(|x| {
            let r = uf.find(x) as usize;
            if used[r] {
                label[r]
            } else {
                free_label[r]
            }
        })
        .collect();
    let crossings = d
        .crossings()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != j)
        .map(|(_, q)| q.map(|x| label[uf.find(x) as usize]))
        .collect();
    Smoothed { crossings, arc_count, free_loops, arc_map }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{parse_pd, PlanarCode};

    #[test]
    fn kink_resolutions() {
        let k = parse_pd("X(1,2,2,1)").unwrap();
        assert_eq!(resolve(&k, 0).circle_count(), 1);
        assert_eq!(resolve(&k, 1).circle_count(), 2);
        let t = edge_transition(&k, 1, 0).unwrap();
        assert_eq!(t.kind, TransitionKind::Split);
    }

    #[test]
    fn unknot_has_one_circle() {
        let u = parse_pd("U 1").unwrap();
        assert_eq!(resolve(&u, 0).labels, [1]);
    }

    #[test]
    fn non_covering_pairs_are_rejected() {
        let t = parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        assert_eq!(edge_transition(&t, 0b011, 0), Err(Error::NotCovering(2)));
        assert_eq!(edge_transition(&t, 0, 0b001), Err(Error::NotCovering(1)));
    }

    #[test]
    fn smoothing_a_kink() {
        let k = parse_pd("X(1,2,2,1)").unwrap();
        let s0 = smooth(&k, 0, false);
        assert_eq!((s0.arc_count(), s0.free_loops()), (0, 1));
        assert_eq!(resolve(&s0, 0).labels, [1]);
        let s1 = smooth(&k, 0, true);
        assert_eq!(resolve(&s1, 0).labels.len(), 2);
        let t = parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        for j in 0..3 {
            for one in [false, true] {
                let s = smooth(&t, j, one);
                assert_eq!(s.crossings().len(), 2);
                for state in 0..4u64 {
                    let full = if one { insert_bit(state, j) | 1 << j } else { insert_bit(state, j) };
                    assert_eq!(resolve(&s, state).circle_count(), resolve(&t, full).circle_count());
                }
            }
        }
    }

    fn insert_bit(x: u64, j: usize) -> u64 {
        (x >> j << (j + 1)) | (x & ((1 << j) - 1))
    }
}
