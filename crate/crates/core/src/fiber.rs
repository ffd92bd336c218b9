//! Homotopy types of presheaves of Eilenberg–Mac Lane spaces and their
//! homotopy fibers, computed through cube complexes.
//!
//! At ambient degree `n` the homotopy limit of `K(F, n)` has `π_i = lim^{n-i} F`.
//! Homotopy fibers are realised by the mapping fiber
//! `Fib^j = F^j ⊕ G^{j-1}`, `d(a, b) = (−da, fa + db)`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::diagram::PlanarCode;
use crate::error::{Error, Result};
use crate::linalg::{
    homology, induced_and_connecting, induced_maps, AbGroup, ChainMap, CochainComplex, ExactnessCertificate,
    GradedAbGroup, IntMatrix, LongExactSequence,
};
use crate::poset::Lattice;
use crate::presheaf::{
    khovanov_presheaf, random_extension, random_presheaf, random_ses, random_unimodular_twist, skein_morphism,
    two_layer_presheaf, FreeAbPresheaf, PresheafMorphism,
};

/// Homotopy groups of a space, indexed by degree. Looping may push groups into
/// negative degrees; they are kept so that delooping recovers them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedHomotopyType {
    n: i64,
    pi: BTreeMap<i64, AbGroup>,
}

impl GradedHomotopyType {
    /// `π_i = h^{n-i}`.
    pub fn from_cohomology(h: &GradedAbGroup, n: i64) -> Self {
        let pi = h.support().into_iter().map(|(j, g)| (n - j, g)).collect();
        GradedHomotopyType { n, pi }
    }

    pub fn ambient(&self) -> i64 {
        self.n
    }

    pub fn pi(&self, i: i64) -> AbGroup {
        self.pi.get(&i).cloned().unwrap_or_default()
    }

    /// Nonzero homotopy groups.
    pub fn groups(&self) -> &BTreeMap<i64, AbGroup> {
        &self.pi
    }

    /// `π_i` of the associated spectrum, `π_{i+n}` of the space.
    pub fn stable_pi(&self, i: i64) -> AbGroup {
        self.pi(i + self.n)
    }

    pub fn is_trivial(&self) -> bool {
        self.pi.is_empty()
    }

    /// Same homotopy groups in every degree, regardless of ambient degree.
    pub fn equivalent(&self, other: &Self) -> bool {
        self.pi == other.pi
    }

    /// `Ω^k`; negative `k` deloops and must be allowed explicitly.
    pub fn loop_space(&self, k: i64, allow_deloop: bool) -> Result<Self> {
        if k < 0 && !allow_deloop {
            return Err(Error::Invalid("delooping requires explicit permission".into()));
        }
        let pi = self.pi.iter().map(|(&i, g)| (i - k, g.clone())).collect();
        Ok(GradedHomotopyType { n: self.n - k, pi })
    }
}

pub fn min_ambient(l: &Lattice) -> i64 {
    l.rank() as i64 + 1
}

fn check_ambient(l: &Lattice, n: i64) -> Result<()> {
    let min = min_ambient(l);
    if n < min {
        return Err(Error::NTooSmall { n, min });
    }
    Ok(())
}

/// Homotopy type of `holim K(F, n)`.
pub fn homotopy_groups(f: &FreeAbPresheaf, n: i64) -> Result<GradedHomotopyType> {
    check_ambient(&f.lattice(), n)?;
    Ok(GradedHomotopyType::from_cohomology(&homology(&f.cube_complex())?, n))
}

/// The mapping fiber of `f: A → B` with its inclusion of `B[-1]` and its
/// projection onto `A` (which carries the sign `(−1)^j`).
pub fn mapping_fiber(a: &CochainComplex, b: &CochainComplex, f: &ChainMap) -> (CochainComplex, ChainMap, ChainMap) {
    let lo = a.lo().min(b.lo() + 1);
    let hi = a.hi().max(b.hi() + 1);
    let dims: Vec<usize> = (lo..=hi).map(|j| a.dim(j) + b.dim(j - 1)).collect();
    let diffs = (lo..hi)
        .map(|j| {
            let top = IntMatrix::hstack(&[&a.d(j).neg(), &IntMatrix::zeros(a.dim(j + 1), b.dim(j - 1))]);
            let bottom = IntMatrix::hstack(&[&f.component(j, a, b), &b.d(j - 1)]);
            IntMatrix::vstack(&[&top, &bottom])
        })
        .collect();
    let fib = CochainComplex::new(lo, dims, diffs);
    let mut inc = ChainMap::new();
    let mut proj = ChainMap::new();
    for j in lo..=hi {
        let (da, db) = (a.dim(j), b.dim(j - 1));
        inc.insert(j, IntMatrix::vstack(&[&IntMatrix::zeros(da, db), &IntMatrix::identity(db)]));
        let s = if j.rem_euclid(2) == 0 { BigInt::from(1) } else { BigInt::from(-1) };
        let p = IntMatrix::hstack(&[&IntMatrix::identity(da).scale(&s), &IntMatrix::zeros(da, db)]);
        proj.insert(j, p);
    }
    (fib, inc, proj)
}

#[derive(Clone, Debug)]
pub struct Hofiber {
    pub homotopy: GradedHomotopyType,
    pub cohomology: GradedAbGroup,
    /// `… → H^{j-1}(B) → H^j(Fib) → H^j(A) → H^j(B) → …`.
    pub les: LongExactSequence,
    pub certificate: ExactnessCertificate,
}

impl Hofiber {
    pub fn is_exact(&self) -> bool {
        self.certificate.is_exact()
    }
}

/// Homotopy fiber of `f: src → dst` at ambient degree `n`.
pub fn hofiber(src: &FreeAbPresheaf, dst: &FreeAbPresheaf, f: &PresheafMorphism, n: i64) -> Result<Hofiber> {
    check_ambient(&src.lattice(), n)?;
    f.check_natural(src, dst)?;
    let (a, b) = (src.cube_complex(), dst.cube_complex());
    hofiber_of_complexes(&a, &b, &f.cube_map(src), n)
}

pub fn hofiber_of_complexes(a: &CochainComplex, b: &CochainComplex, f: &ChainMap, n: i64) -> Result<Hofiber> {
    f.check(a, b)?;
    let (fib, inc, proj) = mapping_fiber(a, b, f);
    let cohomology = homology(&fib)?;
    let shifted = b.shifted(-1);
    let les = induced_and_connecting(&shifted, &fib, a, &inc, &proj)?;
    let certificate = les.certify()?;
    Ok(Hofiber { homotopy: GradedHomotopyType::from_cohomology(&cohomology, n), cohomology, les, certificate })
}

#[derive(Clone, Debug)]
pub struct TwoLayer {
    pub combined: FreeAbPresheaf,
    pub homotopy: GradedHomotopyType,
    pub fiber: Hofiber,
}

impl TwoLayer {
    /// The glued presheaf has the homotopy type of the fiber of its connecting map.
    pub fn agrees(&self) -> bool {
        self.homotopy.equivalent(&self.fiber.homotopy)
    }
}

/// Homotopy limit of a two-layer diagram, computed both on the glued presheaf
/// over the rank-`r+1` lattice and as the fiber of the connecting map.
pub fn two_layer_holim(
    top: &FreeAbPresheaf,
    bottom: &FreeAbPresheaf,
    connecting: &PresheafMorphism,
    n: i64,
) -> Result<TwoLayer> {
    let combined = two_layer_presheaf(top, bottom, connecting)?;
    let homotopy = homotopy_groups(&combined, n)?;
    let fiber = hofiber(top, bottom, connecting, n)?;
    Ok(TwoLayer { combined, homotopy, fiber })
}

/// True iff every induced map `lim^i src → lim^i dst` is an isomorphism.
pub fn induces_isomorphisms(src: &FreeAbPresheaf, dst: &FreeAbPresheaf, f: &PresheafMorphism) -> Result<bool> {
    let (a, b) = (src.cube_complex(), dst.cube_complex());
    let maps = induced_maps(&f.cube_map(src), &a, &b)?;
    Ok(maps.values().all(|m| m.is_injective() && m.is_surjective()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteCheck {
    pub trial: usize,
    pub seed: u64,
    pub name: &'static str,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub checks: Vec<SuiteCheck>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SuiteCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn trials(&self) -> usize {
        self.checks.iter().map(|c| c.trial + 1).max().unwrap_or(0)
    }
}

/// Randomised checks of the fiber sequences of a short exact sequence, the
/// acyclic-kernel and trivial-fiber criteria, and the degenerate two-layer cases.
/// Trial `t` draws from a generator seeded with `seed + t`.
pub fn verify_fiber_suite(seed: u64, trials: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::default();
    for trial in 0..trials {
        let s = seed.wrapping_add(trial as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let mut push = |name: &'static str, pass: bool| report.checks.push(SuiteCheck { trial, seed: s, name, pass });
        let r = 1 + trial % 3;
        let l = Lattice::modified(r);
        let n = min_ambient(&l) + 1;

        let ses = random_ses(&mut rng, l, 2);
        let fib_proj = hofiber(&ses.total, &ses.quotient, &ses.proj, n)?;
        push("fiber of the projection is the kernel", fib_proj.homotopy.equivalent(&homotopy_groups(&ses.sub, n)?));
        let fib_inc = hofiber(&ses.sub, &ses.total, &ses.inc, n)?;
        let looped = homotopy_groups(&ses.quotient, n)?.loop_space(1, false)?;
        push("fiber of the inclusion loops the cokernel", fib_inc.homotopy.equivalent(&looped));
        push("fiber sequences are exact", fib_proj.is_exact() && fib_inc.is_exact());
        push("limit sequence is exact", ses.les()?.certify()?.is_exact());

        let small = Lattice::modified(r - 1);
        let e = random_presheaf(&mut rng, small, 2, true);
        let cone = two_layer_presheaf(&e, &e, &PresheafMorphism::identity(&e))?;
        push("identity cone is acyclic", homotopy_groups(&cone, n)?.is_trivial());

        let h = random_presheaf(&mut rng, l, 2, false);
        let ext = random_extension(&mut rng, cone.clone(), h);
        let same = homotopy_groups(&ext.total, n)?.equivalent(&homotopy_groups(&ext.quotient, n)?);
        push("acyclic kernel gives an equivalence", same && induces_isomorphisms(&ext.total, &ext.quotient, &ext.proj)?);

        let f = random_presheaf(&mut rng, l, 2, false);
        let (g, iso) = random_unimodular_twist(&mut rng, &f);
        let trivial = hofiber(&f, &g, &iso, n)?.homotopy.is_trivial();
        push("change of basis has trivial fiber and is an equivalence", trivial && induces_isomorphisms(&f, &g, &iso)?);
        let sum = f.direct_sum(&cone)?;
        let inc: Vec<IntMatrix> = l
            .elements()
            .map(|x| IntMatrix::vstack(&[&IntMatrix::identity(f.rank_at(x)), &IntMatrix::zeros(cone.rank_at(x), f.rank_at(x))]))
            .collect();
        let inc = PresheafMorphism::new(&f, &sum, inc)?;
        let trivial = hofiber(&f, &sum, &inc, n)?.homotopy.is_trivial();
        push("adding an acyclic summand has trivial fiber", trivial && induces_isomorphisms(&f, &sum, &inc)?);

        let id = PresheafMorphism::identity(&f);
        push("identity has trivial fiber", hofiber(&f, &f, &id, n)?.homotopy.is_trivial());
        let zero = FreeAbPresheaf::zero(small);
        let top_only = two_layer_holim(&e, &zero, &PresheafMorphism::zero(&e, &zero), n)?;
        let want = homotopy_groups(&e, n)?;
        push("zero bottom layer keeps the top", top_only.agrees() && top_only.homotopy.equivalent(&want));
        let bottom_only = two_layer_holim(&zero, &e, &PresheafMorphism::zero(&zero, &e), n)?;
        let want = homotopy_groups(&e, n)?.loop_space(1, false)?;
        push("zero top layer loops the bottom", bottom_only.agrees() && bottom_only.homotopy.equivalent(&want));
        let e2 = random_presheaf(&mut rng, small, 2, true);
        let phi = PresheafMorphism::zero(&e, &e2);
        let layered = two_layer_holim(&e, &e2, &phi, n)?;
        push("glued presheaf matches the fiber", layered.agrees());
    }
    Ok(report)
}

/// Exactness of the limit sequence of `trials` random short exact sequences.
pub fn random_les_suite(seed: u64, trials: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::default();
    for trial in 0..trials {
        let s = seed.wrapping_add(trial as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let l = Lattice::modified(1 + trial % 4);
        let ses = random_ses(&mut rng, l, 2);
        let pass = ses.les()?.certify()?.is_exact();
        report.checks.push(SuiteCheck { trial, seed: s, name: "limit sequence of a random extension is exact", pass });
    }
    Ok(report)
}

#[derive(Clone, Debug)]
pub struct SkeinSequence {
    pub crossing: usize,
    pub fiber: Hofiber,
    pub direct: GradedHomotopyType,
}

impl SkeinSequence {
    pub fn agrees(&self) -> bool {
        self.fiber.homotopy.equivalent(&self.direct)
    }
}

/// Fiber of the smoothing-change map at crossing `j`, compared with the
/// homotopy type of the whole diagram.
pub fn skein_sequence<D: PlanarCode + ?Sized>(d: &D, j: usize) -> Result<SkeinSequence> {
    let n = d.crossings().len() as i64 + 1;
    let s = skein_morphism(d, j)?;
    let fiber = hofiber(s.zero.presheaf(), s.one.presheaf(), &s.phi, n)?;
    let direct = homotopy_groups(khovanov_presheaf(d)?.presheaf(), n)?;
    Ok(SkeinSequence { crossing: j, fiber, direct })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;

    #[test]
    fn ambient_degree_is_checked() {
        let f = FreeAbPresheaf::constant(Lattice::modified(3), false);
        assert_eq!(homotopy_groups(&f, 3), Err(Error::NTooSmall { n: 3, min: 4 }));
        let t = homotopy_groups(&f, 4).unwrap();
        assert_eq!(t.pi(4), AbGroup::free(1));
        assert_eq!(t.stable_pi(0), AbGroup::free(1));
    }

    #[test]
    fn looping_shifts_and_deloop_needs_permission() {
        let f = FreeAbPresheaf::constant(Lattice::modified(1), false);
        let t = homotopy_groups(&f, 2).unwrap();
        let l = t.loop_space(1, false).unwrap();
        assert_eq!(l.pi(1), AbGroup::free(1));
        assert!(t.loop_space(-1, false).is_err());
        assert_eq!(l.loop_space(-1, true).unwrap(), t);
    }

    #[test]
    fn suite_passes_on_a_few_trials() {
        let r = verify_fiber_suite(5, 6).unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn skein_for_the_trefoil() {
        let t = parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        for j in 0..3 {
            let s = skein_sequence(&t, j).unwrap();
            assert!(s.agrees() && s.fiber.is_exact(), "crossing {j}");
        }
    }
}
