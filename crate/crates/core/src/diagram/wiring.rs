//! Slot-level representation used for rewriting diagrams.
//!
//! Slot `4c + p` is position `p` (counterclockwise) of crossing `c`. Each arc
//! joins a tail slot, where it leaves a crossing, to a head slot, where it
//! enters one.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::LinkDiagram;
use crate::error::Result;

pub(crate) type Slot = usize;

pub(crate) fn crossing_of(s: Slot) -> usize {
    s / 4
}

pub(crate) fn opposite(s: Slot) -> Slot {
    4 * (s / 4) + (s % 4 + 2) % 4
}

pub(crate) fn rot(s: Slot) -> Slot {
    4 * (s / 4) + (s % 4 + 1) % 4
}

#[derive(Clone, Debug)]
pub(crate) struct Wiring {
    pub under_in: Vec<usize>,
    pub over_in: Vec<usize>,
    /// `(tail, head)`.
    pub arcs: Vec<(Slot, Slot)>,
    pub free_loops: u32,
}

impl Wiring {
    pub fn from_diagram(d: &LinkDiagram) -> Self {
        let n = d.crossing_count();
        let under_in = vec![0; n];
        let over_in: Vec<usize> = (0..n).map(|c| d.over_in(c)).collect();
        let mut ends: Vec<Vec<Slot>> = vec![Vec::new(); d.arc_count() as usize];
        for (c, q) in d.crossings().iter().enumerate() {
            for (p, &a) in q.iter().enumerate() {
                ends[a as usize - 1].push(4 * c + p);
            }
        }
        let mut w = Wiring { under_in, over_in, arcs: Vec::new(), free_loops: d.free_loops() };
        w.arcs = ends.iter().map(|e| w.oriented(e[0], e[1])).collect();
        w
    }

    pub fn crossing_count(&self) -> usize {
        self.under_in.len()
    }

    pub fn is_in(&self, s: Slot) -> bool {
        let c = crossing_of(s);
        s % 4 == self.under_in[c] || s % 4 == self.over_in[c]
    }

    pub fn is_over(&self, s: Slot) -> bool {
        let c = crossing_of(s);
        (s % 4 + 4 - self.under_in[c]) % 2 == 1
    }

    pub fn sign(&self, c: usize) -> i8 {
        if (self.over_in[c] + 4 - self.under_in[c]) % 4 == 3 {
            1
        } else {
            -1
        }
    }

    /// Orders two slots as `(tail, head)` by their roles.
    pub fn oriented(&self, a: Slot, b: Slot) -> (Slot, Slot) {
        if self.is_in(a) {
            (b, a)
        } else {
            (a, b)
        }
    }

    pub fn arc_at(&self) -> Vec<usize> {
        let mut at = vec![usize::MAX; 4 * self.crossing_count()];
        for (k, &(t, h)) in self.arcs.iter().enumerate() {
            at[t] = k;
            at[h] = k;
        }
        at
    }

    pub fn partner(&self, at: &[usize], s: Slot) -> Slot {
        let (t, h) = self.arcs[at[s]];
        if t == s {
            h
        } else {
            t
        }
    }

    /// Faces as dart cycles; dart `s` runs from `s` to its partner with the face on its right.
    pub fn faces(&self) -> Vec<Vec<Slot>> {
        let at = self.arc_at();
        let mut seen = vec![false; at.len()];
        let mut faces = Vec::new();
        for s0 in 0..at.len() {
            if seen[s0] {
                continue;
            }
            let mut face = Vec::new();
            let mut s = s0;
            while !seen[s] {
                seen[s] = true;
                face.push(s);
                s = rot(self.partner(&at, s));
            }
            faces.push(face);
        }
        faces
    }

    /// Euler characteristic 2 on every connected piece.
    pub fn is_planar(&self) -> bool {
        let n = self.crossing_count();
        let mut root: Vec<usize> = (0..n).collect();
        fn find(r: &mut [usize], mut a: usize) -> usize {
            while r[a] != a {
                r[a] = r[r[a]];
                a = r[a];
            }
            a
        }
        for &(t, h) in &self.arcs {
            let (a, b) = (find(&mut root, crossing_of(t)), find(&mut root, crossing_of(h)));
            root[a] = b;
        }
        let mut chi: BTreeMap<usize, i64> = BTreeMap::new();
        for c in 0..n {
            *chi.entry(find(&mut root, c)).or_default() -= 1;
        }
        for f in self.faces() {
            *chi.entry(find(&mut root, crossing_of(f[0]))).or_default() += 1;
        }
        chi.values().all(|&x| x == 2)
    }

    /// Adds a crossing with no arcs attached yet and returns its index.
    pub fn add_crossing(&mut self, under_in: usize, over_in: usize) -> usize {
        self.under_in.push(under_in);
        self.over_in.push(over_in);
        self.under_in.len() - 1
    }

    /// Deletes crossings by letting both strands pass straight through them;
    /// strands that close up become free loops.
    pub fn dissolve(&mut self, remove: &[usize]) {
        let gone = |s: Slot| remove.contains(&crossing_of(s));
        let mut by_tail: BTreeMap<Slot, usize> = BTreeMap::new();
        for (k, &(t, _)) in self.arcs.iter().enumerate() {
            by_tail.insert(t, k);
        }
        let mut used = vec![false; self.arcs.len()];
        let mut new_arcs = Vec::new();
        for k in 0..self.arcs.len() {
            let (t, mut h) = self.arcs[k];
            if gone(t) {
                continue;
            }
            used[k] = true;
            while gone(h) {
                let next = by_tail[&opposite(h)];
                used[next] = true;
                h = self.arcs[next].1;
            }
            new_arcs.push((t, h));
        }
        for k in 0..self.arcs.len() {
            if used[k] {
                continue;
            }
            let mut j = k;
            while !used[j] {
                used[j] = true;
                j = by_tail[&opposite(self.arcs[j].1)];
            }
            self.free_loops += 1;
        }
        self.arcs = new_arcs;
        let mut keep = Vec::new();
        let mut index = vec![usize::MAX; self.crossing_count()];
        for c in 0..self.crossing_count() {
            if !remove.contains(&c) {
                index[c] = keep.len();
                keep.push(c);
            }
        }
        let remap = |s: Slot| 4 * index[crossing_of(s)] + s % 4;
        for a in &mut self.arcs {
            *a = (remap(a.0), remap(a.1));
        }
        self.under_in = keep.iter().map(|&c| self.under_in[c]).collect();
        self.over_in = keep.iter().map(|&c| self.over_in[c]).collect();
    }

    /// Disjoint union; returns the crossing offset of `other`.
    pub fn append(&mut self, other: &Wiring) -> usize {
        let off = self.crossing_count();
        self.under_in.extend(&other.under_in);
        self.over_in.extend(&other.over_in);
        self.arcs.extend(other.arcs.iter().map(|&(t, h)| (t + 4 * off, h + 4 * off)));
        self.free_loops += other.free_loops;
        off
    }

    pub fn reverse(&mut self) {
        for c in 0..self.crossing_count() {
            self.under_in[c] = (self.under_in[c] + 2) % 4;
            self.over_in[c] = (self.over_in[c] + 2) % 4;
        }
        for a in &mut self.arcs {
            *a = (a.1, a.0);
        }
    }

    /// Renumbers arcs consecutively along components and rotates each crossing to
    /// start at its incoming under-strand.
    pub fn to_diagram(&self) -> Result<LinkDiagram> {
        let n = self.crossing_count();
        let mut by_tail: BTreeMap<Slot, usize> = BTreeMap::new();
        for (k, &(t, _)) in self.arcs.iter().enumerate() {
            by_tail.insert(t, k);
        }
        let mut number = vec![0u32; self.arcs.len()];
        let mut next = 1u32;
        for (&_t, &k0) in &by_tail {
            if number[k0] != 0 {
                continue;
            }
            let mut k = k0;
            while number[k] == 0 {
                number[k] = next;
                next += 1;
                k = by_tail[&opposite(self.arcs[k].1)];
            }
        }
        let mut at = vec![0u32; 4 * n];
        for (k, &(t, h)) in self.arcs.iter().enumerate() {
            at[t] = number[k];
            at[h] = number[k];
        }
        let crossings: Vec<[u32; 4]> = (0..n)
            .map(|c| {
                let u = self.under_in[c];
                [0, 1, 2, 3].map(|k| at[4 * c + (u + k) % 4])
            })
            .collect();
        let signs = (0..n).map(|c| self.sign(c)).collect();
        LinkDiagram::new(crossings, self.free_loops, Some(signs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;

    #[test]
    fn corpus_is_planar() {
        for text in [
            "X(1,2,2,1)",
            "X(1,1,2,2)",
            "X(4,1,3,2) X(2,3,1,4)",
            "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)",
            "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)",
        ] {
            let d = parse_pd(text).unwrap();
            let w = Wiring::from_diagram(&d);
            assert!(w.is_planar(), "{text}");
            assert_eq!(w.faces().len(), d.crossing_count() + 2);
            let e = w.to_diagram().unwrap();
            assert_eq!(e.signs(), d.signs(), "{text}");
            assert_eq!(Wiring::from_diagram(&e).to_diagram().unwrap(), e, "{text}");
        }
    }

    #[test]
    fn dissolving_a_kink_leaves_a_loop() {
        let d = parse_pd("X(1,2,2,1)").unwrap();
        let mut w = Wiring::from_diagram(&d);
        w.dissolve(&[0]);
        assert_eq!(w.to_diagram().unwrap(), LinkDiagram::unlink(1));
    }
}
