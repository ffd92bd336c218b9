use alloc::vec::Vec;

use super::wiring::{crossing_of, opposite, Slot, Wiring};
use super::LinkDiagram;
use crate::error::{Error, Result};

/// An arc traversed along (`forward`) or against its orientation. The face on
/// the right of the traversal is the face the dart names.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dart {
    pub arc: u32,
    pub forward: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    R1Plus,
    R1Minus,
    R1Remove,
    R2,
    R2Remove,
    R3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Site {
    /// The face on the right of a dart; for R1 additions the kink goes on the dart's arc.
    Dart(Dart),
    Crossing(usize),
    /// The strand of `first` is pushed across the strand of `second`.
    Pair { first: Dart, second: Dart, first_over: bool },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum WDart {
    Slot(Slot),
    Loop(bool),
}

fn not_applicable(msg: &str) -> Error {
    Error::SiteNotApplicable(msg.into())
}

fn wiring_dart(d: &LinkDiagram, w: &Wiring, dart: Dart) -> Result<WDart> {
    let n = d.arc_count();
    if dart.arc >= 1 && dart.arc <= n {
        let (t, h) = w.arcs[dart.arc as usize - 1];
        Ok(WDart::Slot(if dart.forward { t } else { h }))
    } else if dart.arc > n && dart.arc <= n + d.free_loops() {
        Ok(WDart::Loop(dart.forward))
    } else {
        Err(not_applicable("no such arc"))
    }
}

fn face_of(w: &Wiring, s: Slot) -> Vec<Slot> {
    w.faces().into_iter().find(|f| f.contains(&s)).expect("every dart lies on a face")
}

pub fn apply_reidemeister(d: &LinkDiagram, mv: Move, site: Site) -> Result<LinkDiagram> {
    let mut w = Wiring::from_diagram(d);
    match (mv, site) {
        (Move::R1Plus | Move::R1Minus, Site::Dart(dart)) => {
            let wd = wiring_dart(d, &w, dart)?;
            add_kink(&mut w, wd, mv == Move::R1Plus);
        }
        (Move::R1Remove, Site::Crossing(c)) => {
            if c >= w.crossing_count() {
                return Err(not_applicable("no such crossing"));
            }
            let monogon = w.arcs.iter().any(|&(t, h)| {
                crossing_of(t) == c && crossing_of(h) == c && (t % 4 + 4 - h % 4) % 2 == 1
            });
            if !monogon {
                return Err(not_applicable("crossing does not bound a monogon"));
            }
            w.dissolve(&[c]);
        }
        (Move::R2, Site::Pair { first, second, first_over }) => {
            let a = wiring_dart(d, &w, first)?;
            let b = wiring_dart(d, &w, second)?;
            if first.arc == second.arc {
                return Err(not_applicable("both darts lie on the same arc"));
            }
            if let (WDart::Slot(s1), WDart::Slot(s2)) = (a, b) {
                if !face_of(&w, s1).contains(&s2) {
                    return Err(not_applicable("darts do not share a face"));
                }
            }
            let pattern = if first_over { Pattern::FirstOver } else { Pattern::SecondOver };
            push(&mut w, a, b, pattern);
        }
        (Move::R2Remove, Site::Dart(dart)) => {
            let WDart::Slot(s) = wiring_dart(d, &w, dart)? else {
                return Err(not_applicable("free loops bound no bigon"));
            };
            let face = face_of(&w, s);
            let at = w.arc_at();
            let (c1, c2) = (crossing_of(face[0]), crossing_of(face[face.len() - 1]));
            if face.len() != 2 || c1 == c2 {
                return Err(not_applicable("face is not a bigon"));
            }
            if w.is_over(face[0]) != w.is_over(w.partner(&at, face[0])) {
                return Err(not_applicable("bigon is a clasp"));
            }
            w.dissolve(&[c1, c2]);
        }
        (Move::R3, Site::Dart(dart)) => {
            let WDart::Slot(s) = wiring_dart(d, &w, dart)? else {
                return Err(not_applicable("free loops bound no triangle"));
            };
            triangle_move(&mut w, s)?;
        }
        _ => return Err(not_applicable("site kind does not match the move")),
    }
    debug_assert!(w.is_planar());
    w.to_diagram()
}

/// Positions `(e_in, e_out, loop_in, loop_out)` of a kink and its over-in position.
fn kink_pattern(positive: bool, loop_right: bool) -> ([usize; 4], usize) {
    match (positive, loop_right) {
        (true, false) => ([0, 1, 3, 2], 3),
        (true, true) => ([3, 2, 0, 1], 3),
        (false, true) => ([0, 3, 1, 2], 1),
        (false, false) => ([1, 2, 0, 3], 1),
    }
}

fn add_kink(w: &mut Wiring, dart: WDart, positive: bool) {
    let loop_right = match dart {
        WDart::Slot(s) => !w.is_in(s),
        WDart::Loop(forward) => forward,
    };
    let ([e_in, e_out, l_in, l_out], over_in) = kink_pattern(positive, loop_right);
    let c = w.add_crossing(0, over_in);
    let at = |p: usize| 4 * c + p;
    match dart {
        WDart::Slot(s) => {
            let k = w.arc_at()[s];
            let (t, h) = w.arcs[k];
            w.arcs[k] = (t, at(e_in));
            w.arcs.push((at(e_out), h));
        }
        WDart::Loop(_) => {
            w.free_loops -= 1;
            w.arcs.push((at(e_out), at(e_in)));
        }
    }
    w.arcs.push((at(l_out), at(l_in)));
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Pattern {
    FirstOver,
    SecondOver,
    /// First strand over at the first new crossing it meets, under at the second.
    Clasp(bool),
}

const E: usize = 0;
const N: usize = 1;
const W: usize = 2;
const S: usize = 3;

/// Pushes the strand of dart `a` across the strand of dart `b` through the face
/// they share, creating two crossings. Returns their indices in the order the
/// first strand meets them.
fn push(w: &mut Wiring, a: WDart, b: WDart, pattern: Pattern) -> (usize, usize) {
    let forward = |w: &Wiring, d: WDart| match d {
        WDart::Slot(s) => !w.is_in(s),
        WDart::Loop(f) => f,
    };
    let (f1, f2) = (forward(w, a), forward(w, b));
    let at = w.arc_at();
    let mut drop: Vec<usize> = Vec::new();
    let mut ends = |d: WDart| match d {
        WDart::Slot(s) => {
            drop.push(at[s]);
            Some((s, w.partner(&at, s)))
        }
        WDart::Loop(_) => None,
    };
    let (e1, e2) = (ends(a), ends(b));
    drop.sort_unstable();
    drop.dedup();
    for k in drop.into_iter().rev() {
        w.arcs.remove(k);
    }
    let p1 = w.add_crossing(0, 0);
    let p2 = w.add_crossing(0, 0);
    let slot = |c: usize, p: usize| 4 * c + p;
    let lay = |w: &mut Wiring, f: bool, segs: &[(Slot, Slot)]| {
        for &(x, y) in segs {
            w.arcs.push(if f { (x, y) } else { (y, x) });
        }
    };
    match e1 {
        Some((s1, q1)) => lay(w, f1, &[(s1, slot(p2, S)), (slot(p2, N), slot(p1, N)), (slot(p1, S), q1)]),
        None => {
            w.free_loops -= 1;
            lay(w, f1, &[(slot(p2, N), slot(p1, N)), (slot(p1, S), slot(p2, S))]);
        }
    }
    match e2 {
        Some((s2, q2)) => lay(w, f2, &[(s2, slot(p1, W)), (slot(p1, E), slot(p2, W)), (slot(p2, E), q2)]),
        None => {
            w.free_loops -= 1;
            lay(w, f2, &[(slot(p1, E), slot(p2, W)), (slot(p2, E), slot(p1, W))]);
        }
    }
    let in1_p2 = if f1 { S } else { N };
    let in1_p1 = if f1 { N } else { S };
    let in2 = if f2 { W } else { E };
    let (first_over_p2, first_over_p1) = match pattern {
        Pattern::FirstOver => (true, true),
        Pattern::SecondOver => (false, false),
        Pattern::Clasp(x) => (x, !x),
    };
    let set = |w: &mut Wiring, c: usize, in1: usize, first_over: bool| {
        let (u, o) = if first_over { (in2, in1) } else { (in1, in2) };
        w.under_in[c] = u;
        w.over_in[c] = o;
    };
    set(w, p2, in1_p2, first_over_p2);
    set(w, p1, in1_p1, first_over_p1);
    (p2, p1)
}

fn triangle_move(w: &mut Wiring, s: Slot) -> Result<()> {
    let face = face_of(w, s);
    if face.len() != 3 {
        return Err(not_applicable("face is not a triangle"));
    }
    let cs: Vec<usize> = face.iter().map(|&x| crossing_of(x)).collect();
    if cs[0] == cs[1] || cs[1] == cs[2] || cs[0] == cs[2] {
        return Err(not_applicable("triangle meets a crossing twice"));
    }
    let at = w.arc_at();
    let sides: Vec<(Slot, Slot)> = face.iter().map(|&x| (x, w.partner(&at, x))).collect();
    if !sides.iter().any(|&(p, q)| w.is_over(p) && w.is_over(q)) {
        return Err(not_applicable("no strand passes over both of its triangle crossings"));
    }
    let mut sigma: Vec<Slot> = (0..4 * w.crossing_count()).collect();
    for &(pt, qt) in &sides {
        let (po, qo) = (opposite(pt), opposite(qt));
        sigma[pt] = po;
        sigma[qt] = qo;
        sigma[po] = qt;
        sigma[qo] = pt;
    }
    let arcs: Vec<(Slot, Slot)> = w.arcs.iter().map(|&(t, h)| w.oriented(sigma[t], sigma[h])).collect();
    w.arcs = arcs;
    Ok(())
}

/// Reverses the orientation of every component.
pub fn reverse_orientation(d: &LinkDiagram) -> Result<LinkDiagram> {
    let mut w = Wiring::from_diagram(d);
    w.reverse();
    w.to_diagram()
}

/// Joins `d1` and `d2` at their marked arcs; `doubled` hooks them through a
/// two-crossing clasp with both new crossings positive.
pub fn connected_sum(d1: &LinkDiagram, d2: &LinkDiagram, doubled: bool) -> Result<LinkDiagram> {
    let (a1, a2) = (d1.marked_arc()?, d2.marked_arc()?);
    let w1 = Wiring::from_diagram(d1);
    let w2 = Wiring::from_diagram(d2);
    let fwd = |arc| Dart { arc, forward: true };
    let x1 = wiring_dart(d1, &w1, fwd(a1))?;
    let x2 = wiring_dart(d2, &w2, fwd(a2))?;
    let mut w = w1.clone();
    let off = w.append(&w2);
    let x2 = match x2 {
        WDart::Slot(s) => WDart::Slot(s + 4 * off),
        other => other,
    };
    if !doubled {
        match (x1, x2) {
            (WDart::Slot(s1), WDart::Slot(s2)) => {
                let at = w.arc_at();
                let (k1, k2) = (at[s1], at[s2]);
                let (t1, h1) = w.arcs[k1];
                let (t2, h2) = w.arcs[k2];
                w.arcs[k1] = (t1, h2);
                w.arcs[k2] = (t2, h1);
            }
            _ => w.free_loops -= 1,
        }
        return w.to_diagram();
    }
    for first_over in [true, false] {
        let mut v = w.clone();
        let (p, q) = push(&mut v, x1, x2, Pattern::Clasp(first_over));
        if v.sign(p) != v.sign(q) {
            return Err(Error::Invalid("clasp crossings have different signs".into()));
        }
        if v.sign(p) > 0 {
            return v.to_diagram();
        }
    }
    unreachable!("switching both clasp crossings flips their signs")
}

fn dart_of(w: &Wiring, s: Slot) -> Dart {
    let k = w.arc_at()[s];
    Dart { arc: k as u32 + 1, forward: w.arcs[k].0 == s }
}

/// Every R1 addition (both signs, both sides of every arc) and every R1 removal.
pub fn r1_sites(d: &LinkDiagram) -> Vec<(Move, Site)> {
    let mut out = Vec::new();
    for arc in 1..=d.arc_count() + d.free_loops() {
        for forward in [true, false] {
            for mv in [Move::R1Plus, Move::R1Minus] {
                out.push((mv, Site::Dart(Dart { arc, forward })));
            }
        }
    }
    for c in 0..d.crossing_count() {
        if apply_reidemeister(d, Move::R1Remove, Site::Crossing(c)).is_ok() {
            out.push((Move::R1Remove, Site::Crossing(c)));
        }
    }
    out
}

/// R2 additions for every pair of darts on a common face, and every removable bigon.
pub fn r2_sites(d: &LinkDiagram) -> Vec<(Move, Site)> {
    let w = Wiring::from_diagram(d);
    let mut out = Vec::new();
    for face in w.faces() {
        for (i, &x) in face.iter().enumerate() {
            for &y in &face[i + 1..] {
                let (a, b) = (dart_of(&w, x), dart_of(&w, y));
                if a.arc == b.arc {
                    continue;
                }
                for first_over in [true, false] {
                    out.push((Move::R2, Site::Pair { first: a, second: b, first_over }));
                }
            }
        }
        if face.len() == 2 {
            let site = Site::Dart(dart_of(&w, face[0]));
            if apply_reidemeister(d, Move::R2Remove, site).is_ok() {
                out.push((Move::R2Remove, site));
            }
        }
    }
    if d.free_loops() > 0 && d.arc_count() > 0 {
        let lp = Dart { arc: d.arc_count() + 1, forward: true };
        for arc in 1..=d.arc_count() {
            out.push((Move::R2, Site::Pair { first: lp, second: Dart { arc, forward: true }, first_over: true }));
        }
    }
    out
}

/// Every triangle on which an R3 move applies.
pub fn r3_sites(d: &LinkDiagram) -> Vec<(Move, Site)> {
    let w = Wiring::from_diagram(d);
    let mut out = Vec::new();
    for face in w.faces() {
        if face.len() == 3 {
            let site = Site::Dart(dart_of(&w, face[0]));
            if apply_reidemeister(d, Move::R3, site).is_ok() {
                out.push((Move::R3, site));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;

    #[test]
    fn kink_from_unknot() {
        let u = LinkDiagram::unlink(1);
        for forward in [true, false] {
            let k = apply_reidemeister(&u, Move::R1Plus, Site::Dart(Dart { arc: 1, forward })).unwrap();
            assert_eq!(k.signs(), &[1]);
            let k = apply_reidemeister(&u, Move::R1Minus, Site::Dart(Dart { arc: 1, forward })).unwrap();
            assert_eq!(k.signs(), &[-1]);
            let back = apply_reidemeister(&k, Move::R1Remove, Site::Crossing(0)).unwrap();
            assert_eq!(back, u);
        }
    }

    #[test]
    fn trefoil_r2_adds_one_crossing_of_each_sign() {
        let t = parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        let sites = r2_sites(&t);
        assert!(!sites.is_empty());
        for (mv, site) in sites.into_iter().filter(|s| s.0 == Move::R2) {
            let r = apply_reidemeister(&t, mv, site).unwrap();
            assert_eq!(r.crossing_count(), 5);
            assert_eq!(r.negative_count(), 4);
            assert_eq!(r.positive_count(), 1);
        }
    }

    #[test]
    fn plain_sum_with_unknot() {
        let u = LinkDiagram::unlink(1);
        assert_eq!(connected_sum(&u, &u, false).unwrap(), u);
    }

    #[test]
    fn doubled_sum_of_unknots_is_positive_hopf() {
        let u = LinkDiagram::unlink(1);
        let h = connected_sum(&u, &u, true).unwrap();
        assert_eq!(h.crossing_count(), 2);
        assert_eq!(h.positive_count(), 2);
        assert_eq!(h.components().len(), 2);
    }
}
