//! Link diagrams as PD codes.
//!
//! A crossing `X(a,b,c,d)` lists its four arc ends counterclockwise starting
//! from the incoming under-strand, so the under-strand runs `a → c` and the
//! over-strand runs `b → d` or `d → b`. The crossing is positive exactly when
//! the over-strand enters at `d`.

mod moves;
mod parse;
mod resolve;
mod wiring;

use alloc::string::String;
use alloc::vec::Vec;

pub use moves::{
    apply_reidemeister, connected_sum, r1_sites, r2_sites, r3_sites, reverse_orientation, Dart, Move, Site,
};
pub use parse::{parse_pd, serialize};
pub(crate) use resolve::transition_between;
pub use resolve::{edge_transition, resolve, smooth, EdgeTransition, Resolution, Smoothed, TransitionKind};

use crate::error::{Error, Result};

/// The unoriented data a resolution needs.
pub trait PlanarCode {
    fn crossings(&self) -> &[[u32; 4]];
    fn arc_count(&self) -> u32;
    fn free_loops(&self) -> u32;
}

impl PlanarCode for LinkDiagram {
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

/// Unoriented crossings with loose circles.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlainCode {
    pub crossings: Vec<[u32; 4]>,
    pub arc_count: u32,
    pub free_loops: u32,
}

impl PlainCode {
    pub fn of<D: PlanarCode + ?Sized>(d: &D) -> Self {
        PlainCode { crossings: d.crossings().to_vec(), arc_count: d.arc_count(), free_loops: d.free_loops() }
    }

    /// The same diagram beside one more unknotted circle, labelled last.
    pub fn with_extra_loop<D: PlanarCode + ?Sized>(d: &D) -> Self {
        let mut c = Self::of(d);
        c.free_loops += 1;
        c
    }
}

impl PlanarCode for PlainCode {
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

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinkDiagram {
    crossings: Vec<[u32; 4]>,
    arc_count: u32,
    signs: Vec<i8>,
    components: Vec<Vec<u32>>,
    free_loops: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Role {
    In,
    Out,
}

impl LinkDiagram {
    /// The crossingless diagram of `n` unknotted circles.
    pub fn unlink(n: u32) -> Self {
        LinkDiagram {
            crossings: Vec::new(),
            arc_count: 0,
            signs: Vec::new(),
            components: (1..=n).map(|l| alloc::vec![l]).collect(),
            free_loops: n,
        }
    }

    /// Validates a PD code and derives orientation; `signs` fixes the direction of
    /// every over-strand when given.
    pub fn new(crossings: Vec<[u32; 4]>, free_loops: u32, signs: Option<Vec<i8>>) -> Result<Self> {
        let arc_count = validate_arcs(&crossings)?;
        if let Some(s) = &signs {
            if s.len() != crossings.len() {
                return Err(Error::MalformedPD(alloc::format!(
                    "{} signs given for {} crossings",
                    s.len(),
                    crossings.len()
                )));
            }
        }
        let over_in = orient(&crossings, arc_count, signs.as_deref())?;
        let signs: Vec<i8> = over_in.iter().map(|&p| if p == 3 { 1 } else { -1 }).collect();
        let mut components = trace_components(&crossings, &over_in, arc_count);
        for i in 0..free_loops {
            components.push(alloc::vec![arc_count + 1 + i]);
        }
        Ok(LinkDiagram { crossings, arc_count, signs, components, free_loops })
    }

    pub fn crossings(&self) -> &[[u32; 4]] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn arc_count(&self) -> u32 {
        self.arc_count
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn sign(&self, i: usize) -> i8 {
        self.signs[i]
    }

    /// Number of negative crossings.
    pub fn negative_count(&self) -> usize {
        self.signs.iter().filter(|&&s| s < 0).count()
    }

    pub fn positive_count(&self) -> usize {
        self.signs.iter().filter(|&&s| s > 0).count()
    }

    /// Link components as arc lists in traversal order; a crossingless
    /// component is the single label `arc_count + 1 + i`.
    pub fn components(&self) -> &[Vec<u32>] {
        &self.components
    }

    pub fn free_loops(&self) -> u32 {
        self.free_loops
    }

    /// Position (1 or 3) where the over-strand of crossing `i` enters.
    pub fn over_in(&self, i: usize) -> usize {
        if self.signs[i] > 0 {
            3
        } else {
            1
        }
    }

    /// Smallest label on the first component; the default splice point.
    pub fn marked_arc(&self) -> Result<u32> {
        self.components
            .first()
            .and_then(|c| c.iter().min().copied())
            .ok_or(Error::NoMarkedComponent)
    }

    pub fn summary(&self) -> String {
        alloc::format!(
            "{} crossings, {} components, {} negative",
            self.crossing_count(),
            self.components.len(),
            self.negative_count()
        )
    }
}

fn validate_arcs(crossings: &[[u32; 4]]) -> Result<u32> {
    let max = crossings.iter().flatten().copied().max().unwrap_or(0);
    let mut uses = alloc::vec![0usize; max as usize + 1];
    for &a in crossings.iter().flatten() {
        if a == 0 {
            return Err(Error::MalformedPD("arc identifiers start at 1".into()));
        }
        uses[a as usize] += 1;
    }
    for (arc, &u) in uses.iter().enumerate().skip(1) {
        if u == 0 {
            return Err(Error::MalformedPD(alloc::format!("arc {arc} is missing; identifiers must be 1..{max}")));
        }
        if u != 2 {
            return Err(Error::OpenDiagram { arc: arc as u32, uses: u });
        }
    }
    Ok(max)
}

/// Occurrences `(crossing, position)` of every arc.
fn arc_ends(crossings: &[[u32; 4]], arc_count: u32) -> Vec<[(usize, usize); 2]> {
    let mut ends = alloc::vec![[(usize::MAX, 0); 2]; arc_count as usize + 1];
    let mut seen = alloc::vec![0usize; arc_count as usize + 1];
    for (c, q) in crossings.iter().enumerate() {
        for (p, &a) in q.iter().enumerate() {
            ends[a as usize][seen[a as usize]] = (c, p);
            seen[a as usize] += 1;
        }
    }
    ends
}

/// Resolves the direction of every strand and returns the over-in position per crossing.
fn orient(crossings: &[[u32; 4]], arc_count: u32, signs: Option<&[i8]>) -> Result<Vec<usize>> {
    let n = crossings.len();
    let ends = arc_ends(crossings, arc_count);
    let mut role: Vec<Option<Role>> = alloc::vec![None; 4 * n];
    let mut queue: Vec<(usize, Role)> = Vec::new();
    for c in 0..n {
        queue.push((4 * c, Role::In));
        queue.push((4 * c + 2, Role::Out));
        if let Some(s) = signs {
            let (inn, out) = if s[c] > 0 { (3, 1) } else { (1, 3) };
            queue.push((4 * c + inn, Role::In));
            queue.push((4 * c + out, Role::Out));
        }
    }
    let conflict = || Error::MalformedPD("strand orientations are inconsistent".into());
    propagate(crossings, &ends, &mut role, queue).map_err(|_| conflict())?;

    let undetermined: Vec<usize> = (0..n).filter(|&c| role[4 * c + 1].is_none()).collect();
    if !undetermined.is_empty() {
        let seeds = consecutive_fallback(crossings, &ends, &undetermined)?;
        propagate(crossings, &ends, &mut role, seeds)
            .map_err(|_| Error::SignUnderivable("arc numbering contradicts itself".into()))?;
    }
    Ok((0..n)
        .map(|c| if role[4 * c + 3] == Some(Role::In) { 3 } else { 1 })
        .collect())
}

fn propagate(
    crossings: &[[u32; 4]],
    ends: &[[(usize, usize); 2]],
    role: &mut [Option<Role>],
    mut queue: Vec<(usize, Role)>,
) -> core::result::Result<(), ()> {
    let flip = |r: Role| if r == Role::In { Role::Out } else { Role::In };
    while let Some((slot, r)) = queue.pop() {
        match role[slot] {
            Some(old) if old == r => continue,
            Some(_) => return Err(()),
            None => role[slot] = Some(r),
        }
        let (c, p) = (slot / 4, slot % 4);
        queue.push((4 * c + (p + 2) % 4, flip(r)));
        let arc = crossings[c][p] as usize;
        for &(c2, p2) in &ends[arc] {
            if (c2, p2) != (c, p) {
                queue.push((4 * c2 + p2, flip(r)));
            }
        }
    }
    Ok(())
}

/// Orients over-only components by assuming consecutive numbering along them.
fn consecutive_fallback(
    crossings: &[[u32; 4]],
    ends: &[[(usize, usize); 2]],
    undetermined: &[usize],
) -> Result<Vec<(usize, Role)>> {
    let mut seeds = Vec::new();
    let mut visited = alloc::collections::BTreeSet::new();
    for &start in undetermined {
        if visited.contains(&start) {
            continue;
        }
        let mut arcs = Vec::new();
        let mut stack = alloc::vec![start];
        let mut members = Vec::new();
        while let Some(c) = stack.pop() {
            if !visited.insert(c) {
                continue;
            }
            members.push(c);
            for p in [1, 3] {
                let a = crossings[c][p];
                arcs.push(a);
                for &(c2, p2) in &ends[a as usize] {
                    if p2 % 2 == 1 {
                        stack.push(c2);
                    }
                }
            }
        }
        arcs.sort_unstable();
        arcs.dedup();
        let lo = arcs[0];
        let len = arcs.len() as u32;
        if arcs.iter().enumerate().any(|(k, &a)| a != lo + k as u32) || len < 2 {
            return Err(Error::SignUnderivable(alloc::format!(
                "component through crossing {start} never passes under and its arcs are not numbered consecutively"
            )));
        }
        let next = |a: u32| if a == lo + len - 1 { lo } else { a + 1 };
        for &c in &members {
            let (b, d) = (crossings[c][1], crossings[c][3]);
            if b == next(d) {
                seeds.push((4 * c + 3, Role::In));
            } else if d == next(b) {
                seeds.push((4 * c + 1, Role::In));
            } else {
                return Err(Error::SignUnderivable(alloc::format!(
                    "over-strand arcs {b} and {d} at crossing {c} are not consecutive"
                )));
            }
        }
    }
    Ok(seeds)
}

fn trace_components(crossings: &[[u32; 4]], over_in: &[usize], arc_count: u32) -> Vec<Vec<u32>> {
    let ends = arc_ends(crossings, arc_count);
    let is_in = |c: usize, p: usize| p == 0 || p == over_in[c];
    let mut done = alloc::vec![false; arc_count as usize + 1];
    let mut comps = Vec::new();
    for start in 1..=arc_count {
        if done[start as usize] {
            continue;
        }
        let mut comp = Vec::new();
        let mut a = start;
        while !done[a as usize] {
            done[a as usize] = true;
            comp.push(a);
            let &(c, p) = ends[a as usize].iter().find(|&&(c, p)| is_in(c, p)).expect("every arc has a head");
            a = crossings[c][(p + 2) % 4];
        }
        comps.push(comp);
    }
    comps
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn kinks_have_opposite_signs() {
        let neg = LinkDiagram::new(vec![[1, 2, 2, 1]], 0, None).unwrap();
        assert_eq!(neg.signs(), &[-1]);
        let pos = LinkDiagram::new(vec![[1, 1, 2, 2]], 0, None).unwrap();
        assert_eq!(pos.signs(), &[1]);
    }

    #[test]
    fn trefoil_is_left_handed() {
        let t = LinkDiagram::new(vec![[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]], 0, None).unwrap();
        assert_eq!(t.negative_count(), 3);
        assert_eq!(t.components().len(), 1);
        assert_eq!(t.arc_count(), 6);
    }

    #[test]
    fn hopf_link_has_two_components() {
        let h = LinkDiagram::new(vec![[4, 1, 3, 2], [2, 3, 1, 4]], 0, None).unwrap();
        assert_eq!(h.components().len(), 2);
        assert_eq!(h.negative_count(), 2);
    }

    #[test]
    fn open_diagram_is_rejected() {
        assert_eq!(
            LinkDiagram::new(vec![[1, 2, 3, 1]], 0, None),
            Err(Error::OpenDiagram { arc: 2, uses: 1 })
        );
    }

    #[test]
    fn inconsistent_annotation_is_rejected() {
        assert!(matches!(LinkDiagram::new(vec![[1, 2, 2, 1]], 0, Some(vec![1])), Err(Error::MalformedPD(_))));
    }
}
