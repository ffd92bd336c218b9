use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{FreeAbPresheaf, PresheafMorphism, PresheafSes};
use crate::diagram::{resolve, smooth, transition_between, PlainCode, PlanarCode, Resolution};
use crate::error::{Error, Result};
use crate::frobenius::{comult, counit, edge_map_matrix, local_map, mult, relabel_matrix, unit, TensorBasis};
use crate::linalg::IntMatrix;
use crate::poset::Lattice;

const MAX_CROSSINGS: usize = 20;

/// `F_KH(D)` over `B̂_n`, together with the smoothings it was built from.
#[derive(Clone, Debug)]
pub struct KhovanovPresheaf {
    presheaf: FreeAbPresheaf,
    resolutions: Vec<Resolution>,
    bases: Vec<TensorBasis>,
    arc_count: u32,
}

impl KhovanovPresheaf {
    pub fn presheaf(&self) -> &FreeAbPresheaf {
        &self.presheaf
    }

    pub fn into_presheaf(self) -> FreeAbPresheaf {
        self.presheaf
    }

    pub fn basis(&self, state: usize) -> &TensorBasis {
        &self.bases[state]
    }

    pub fn resolution(&self, state: usize) -> &Resolution {
        &self.resolutions[state]
    }

    /// Label of the circle through `label` (an arc or a loose circle) in `state`.
    pub fn circle_through(&self, state: usize, label: u32) -> u32 {
        if label <= self.arc_count {
            self.resolutions[state].circle_of(label)
        } else {
            label
        }
    }
}

pub fn khovanov_presheaf<D: PlanarCode + ?Sized>(d: &D) -> Result<KhovanovPresheaf> {
    let n = d.crossings().len();
    if n > MAX_CROSSINGS {
        return Err(Error::Guard(alloc::format!("{n} crossings exceed the limit of {MAX_CROSSINGS}")));
    }
    let l = Lattice::modified(n);
    let states = 1usize << n;
    let resolutions: Vec<Resolution> = (0..states).map(|s| resolve(d, s as u64)).collect();
    let bases: Vec<TensorBasis> = resolutions.iter().map(|r| TensorBasis::new(r.labels.clone())).collect();
    let mut ranks: Vec<usize> = bases.iter().map(TensorBasis::rank).collect();
    ranks.push(0);
    let mut maps = BTreeMap::new();
    for x in 0..states {
        for y in l.covers_above(x) {
            if l.is_prime(y) {
                continue;
            }
            let j = (x ^ y).trailing_zeros() as usize;
            let t = transition_between(d, j, &resolutions[y], &resolutions[x]);
            maps.insert((x, y), edge_map_matrix(&t, &bases[y], &bases[x])?);
        }
    }
    let presheaf = FreeAbPresheaf::new(l, ranks, maps)?;
    Ok(KhovanovPresheaf { presheaf, resolutions, bases, arc_count: d.arc_count() })
}

/// The three local short exact sequences relating `D` to `D ⊔ O`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LocalSesKind {
    /// `F_D --id⊗ι--> F_{D⊔O} --id⊗ε--> F_D`.
    Unit,
    /// `F_D --j--> F_{D⊔O} --m--> F_D` with `j(a) = a(1⊗u − u⊗1)`.
    Merge,
    /// `F_D --Δ--> F_{D⊔O} --q--> F_D` with `q(a⊗1) = a`, `q(a⊗u) = −ua`.
    Split,
}

#[derive(Clone, Debug)]
pub struct LocalSes {
    pub kind: LocalSesKind,
    pub ses: PresheafSes,
}

/// Builds the sequence with the extra circle attached next to the circle through `marked`.
pub fn local_ses<D: PlanarCode + ?Sized>(d: &D, marked: u32, kind: LocalSesKind) -> Result<LocalSes> {
    let labels = d.arc_count() + d.free_loops();
    if labels == 0 {
        return Err(Error::NoMarkedComponent);
    }
    if marked == 0 || marked > labels {
        return Err(Error::SiteMismatch(alloc::format!("label {marked} is not on the diagram")));
    }
    let small = khovanov_presheaf(d)?;
    let big = khovanov_presheaf(&PlainCode::with_extra_loop(d))?;
    let o = labels + 1;
    let (inc_local, proj_local) = match kind {
        LocalSesKind::Unit => (unit(), counit()),
        LocalSesKind::Merge => (IntMatrix::from_rows(4, 2, &[[0, 0], [1, 0], [-1, 0], [0, 1]]), mult()),
        LocalSesKind::Split => (comult(), IntMatrix::from_rows(2, 4, &[[1, 0, 0, 0], [0, -1, 1, 0]])),
    };
    let l = small.presheaf.lattice();
    let mut inc = Vec::new();
    let mut proj = Vec::new();
    for x in l.elements() {
        if l.is_prime(x) {
            inc.push(IntMatrix::zeros(0, 0));
            proj.push(IntMatrix::zeros(0, 0));
            continue;
        }
        let (sb, bb) = (&small.bases[x], &big.bases[x]);
        if bb.labels().last() != Some(&o) {
            return Err(Error::SiteMismatch("extra circle is not labelled last".into()));
        }
        let c = small.circle_through(x, marked);
        match kind {
            LocalSesKind::Unit => {
                let pairs: Vec<(u32, u32)> = sb.labels().iter().map(|&l| (l, l)).collect();
                inc.push(local_map(sb, bb, &[], &[o], &pairs, &inc_local)?);
                proj.push(local_map(bb, sb, &[o], &[], &pairs, &proj_local)?);
            }
            LocalSesKind::Merge | LocalSesKind::Split => {
                let pairs: Vec<(u32, u32)> = sb.labels().iter().filter(|&&l| l != c).map(|&l| (l, l)).collect();
                inc.push(local_map(sb, bb, &[c], &[c, o], &pairs, &inc_local)?);
                proj.push(local_map(bb, sb, &[c, o], &[c], &pairs, &proj_local)?);
            }
        }
    }
    let inc = PresheafMorphism::new(&small.presheaf, &big.presheaf, inc)?;
    let proj = PresheafMorphism::new(&big.presheaf, &small.presheaf, proj)?;
    let ses = PresheafSes { sub: small.presheaf.clone(), total: big.presheaf, quotient: small.presheaf, inc, proj };
    Ok(LocalSes { kind, ses })
}

/// The map `F_KH(D_0) → F_KH(D_1)` between the two smoothings of crossing `j`,
/// given at each state by the edge map of `D` in direction `j`.
#[derive(Clone, Debug)]
pub struct SkeinMorphism {
    pub crossing: usize,
    pub zero: KhovanovPresheaf,
    pub one: KhovanovPresheaf,
    pub phi: PresheafMorphism,
}

fn insert_zero_bit(x: usize, j: usize) -> usize {
    (x >> j << (j + 1)) | (x & ((1 << j) - 1))
}

pub fn skein_morphism<D: PlanarCode + ?Sized>(d: &D, j: usize) -> Result<SkeinMorphism> {
    let n = d.crossings().len();
    if j >= n {
        return Err(Error::SiteNotApplicable(alloc::format!("crossing {j} does not exist")));
    }
    let s0 = smooth(d, j, false);
    let s1 = smooth(d, j, true);
    let zero = khovanov_presheaf(&s0)?;
    let one = khovanov_presheaf(&s1)?;
    let l = zero.presheaf.lattice();
    let arcs = d.arc_count();
    let mut phi = Vec::new();
    for x in l.elements() {
        if l.is_prime(x) {
            phi.push(IntMatrix::zeros(0, 0));
            continue;
        }
        let top = insert_zero_bit(x, j);
        let bottom = top | 1 << j;
        let (rt, rb) = (resolve(d, top as u64), resolve(d, bottom as u64));
        let (bt, bb) = (TensorBasis::new(rt.labels.clone()), TensorBasis::new(rb.labels.clone()));
        let edge = edge_map_matrix(&transition_between(d, j, &rt, &rb), &bt, &bb)?;
        let into_zero: Vec<(u32, u32)> =
            rt.labels.iter().map(|&c| (zero.circle_through(x, s0.image_of_label(arcs, c)), c)).collect();
        let into_one: Vec<(u32, u32)> =
            rb.labels.iter().map(|&c| (c, one.circle_through(x, s1.image_of_label(arcs, c)))).collect();
        let from_zero = relabel_matrix(zero.basis(x), &bt, &into_zero)?;
        let to_one = relabel_matrix(&bb, one.basis(x), &into_one)?;
        phi.push(to_one.mul(&edge).mul(&from_zero));
    }
    let phi = PresheafMorphism::new(&zero.presheaf, &one.presheaf, phi)?;
    Ok(SkeinMorphism { crossing: j, zero, one, phi })
}
