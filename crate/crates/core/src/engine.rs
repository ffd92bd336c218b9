//! Khovanov homology of link diagrams and the experiments built on it.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagram::{apply_reidemeister, connected_sum, r1_sites, r2_sites, r3_sites, LinkDiagram, Move, Site};
use crate::error::{Error, Result};
use crate::linalg::{homology, iso_check, GradedAbGroup};
use crate::presheaf::{khovanov_presheaf, FreeAbPresheaf, LimitMethod};

/// Default crossing limit for the nerve computation.
pub const NERVE_CROSSING_LIMIT: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Cube,
    Nerve,
    Both,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Cube => "cube",
            Method::Nerve => "nerve",
            Method::Both => "both",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub anchor: &'static str,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, anchor: &'static str, pass: bool) -> Self {
        Check { name: name.into(), anchor, pass }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KhResult {
    pub crossings: usize,
    pub components: usize,
    pub negative_crossings: usize,
    /// Degrees `0..=n` with explicit zeros.
    pub unnormalised: GradedAbGroup,
    /// `normalised^i = unnormalised^{i+c}`.
    pub normalised: GradedAbGroup,
    pub method: Method,
    pub checks: Vec<Check>,
}

impl KhResult {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KhOptions {
    pub method: Method,
    pub nerve_limit: usize,
}

impl Default for KhOptions {
    fn default() -> Self {
        KhOptions { method: Method::Cube, nerve_limit: NERVE_CROSSING_LIMIT }
    }
}

fn euler(h: &GradedAbGroup) -> i64 {
    h.degrees().map(|(i, g)| if i % 2 == 0 { g.rank as i64 } else { -(g.rank as i64) }).sum()
}

pub fn compute_kh(d: &LinkDiagram, method: Method) -> Result<KhResult> {
    compute_kh_with(d, KhOptions { method, ..KhOptions::default() })
}

pub fn compute_kh_with(d: &LinkDiagram, opts: KhOptions) -> Result<KhResult> {
    let n = d.crossing_count();
    if opts.method != Method::Cube && n > opts.nerve_limit {
        return Err(Error::Guard(alloc::format!(
            "the nerve computation is limited to {} crossings; this diagram has {n}",
            opts.nerve_limit
        )));
    }
    let f = khovanov_presheaf(d)?;
    let f = f.presheaf();
    let mut checks = Vec::new();
    let unnormalised = match opts.method {
        Method::Cube | Method::Both => {
            let cube = f.cube_complex();
            let h = homology(&cube)?;
            checks.push(Check::new("differential squares to zero", "cube-complex", true));
            let chi: i64 = (0..=n as i64).map(|i| if i % 2 == 0 { cube.dim(i) as i64 } else { -(cube.dim(i) as i64) }).sum();
            checks.push(Check::new("Euler characteristic of the cube", "euler-characteristic", chi == euler(&h)));
            h
        }
        Method::Nerve => f.higher_limits(LimitMethod::Nerve)?,
    };
    if opts.method == Method::Both {
        let nerve = f.higher_limits(LimitMethod::Nerve)?;
        if nerve.support() != unnormalised.support() {
            return Err(Error::MethodDisagreement { cube: Box::new(unnormalised), nerve: Box::new(nerve) });
        }
        checks.push(Check::new("cube and nerve cohomology agree", "cube-nerve-agreement", true));
    }
    let window = trim_to(&unnormalised, 0, n as i64);
    let c = d.negative_count() as i64;
    Ok(KhResult {
        crossings: n,
        components: d.components().len(),
        negative_crossings: d.negative_count(),
        normalised: window.shifted(c),
        unnormalised: window,
        method: opts.method,
        checks,
    })
}

/// Restricts to `lo..=hi`, filling absent degrees with zero.
fn trim_to(h: &GradedAbGroup, lo: i64, hi: i64) -> GradedAbGroup {
    let mut out = GradedAbGroup::new();
    for i in lo..=hi {
        out.set(i, h.get(i));
    }
    out
}

pub fn normalised_kh(d: &LinkDiagram) -> Result<GradedAbGroup> {
    Ok(compute_kh(d, Method::Cube)?.normalised)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceReport {
    pub mv: Move,
    pub site: Site,
    pub result: LinkDiagram,
    pub before: GradedAbGroup,
    pub after: GradedAbGroup,
}

impl InvarianceReport {
    pub fn pass(&self) -> bool {
        iso_check(&self.before, &self.after, 0)
    }

    pub fn require(self) -> Result<Self> {
        if self.pass() {
            Ok(self)
        } else {
            Err(Error::InvarianceFailure { before: Box::new(self.before), after: Box::new(self.after) })
        }
    }
}

pub fn verify_reidemeister(d: &LinkDiagram, mv: Move, site: Site) -> Result<InvarianceReport> {
    let result = apply_reidemeister(d, mv, site)?;
    let before = normalised_kh(d)?;
    let after = normalised_kh(&result)?;
    Ok(InvarianceReport { mv, site, result, before, after })
}

/// Every R1 and R3 site, and at most `r2_samples` R2 sites drawn with `seed`.
pub fn reidemeister_sites(d: &LinkDiagram, r2_samples: usize, seed: u64) -> Vec<(Move, Site)> {
    let mut r2 = r2_sites(d);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = r2_samples.min(r2.len());
    for i in 0..k {
        let j = rng.gen_range(i..r2.len());
        r2.swap(i, j);
    }
    r2.truncate(k);
    let mut out = r1_sites(d);
    out.extend(r2);
    out.extend(r3_sites(d));
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectedSumReport {
    pub plain: KhResult,
    pub doubled: KhResult,
    /// `KH(D1 # D2) ⊕ KH(D1 # D2)[-2]`.
    pub expected: GradedAbGroup,
}

impl ConnectedSumReport {
    pub fn pass(&self) -> bool {
        iso_check(&self.expected, &self.doubled.normalised, 0)
    }

    pub fn require(self) -> Result<Self> {
        if self.pass() {
            Ok(self)
        } else {
            Err(Error::FormulaFailure {
                expected: Box::new(self.expected),
                actual: Box::new(self.doubled.normalised),
            })
        }
    }
}

/// Compares the clasped sum `D1 ## D2` with two shifted copies of `D1 # D2`.
pub fn connected_sum_experiment(d1: &LinkDiagram, d2: &LinkDiagram) -> Result<ConnectedSumReport> {
    let plain = compute_kh(&connected_sum(d1, d2, false)?, Method::Cube)?;
    let doubled = compute_kh(&connected_sum(d1, d2, true)?, Method::Cube)?;
    let expected = plain.normalised.direct_sum(&plain.normalised.shifted(-2));
    Ok(ConnectedSumReport { plain, doubled, expected })
}

/// Limits of `F_KH(D)` over the plain lattice (nerve) next to the modified one (cube).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MitchellReport {
    pub boolean: GradedAbGroup,
    pub modified: GradedAbGroup,
}

impl MitchellReport {
    /// Positive-degree limits vanish over the plain lattice.
    pub fn vanishes(&self) -> bool {
        self.boolean.degrees().all(|(i, g)| i <= 0 || g.is_zero())
    }
}

pub fn mitchell_comparison(f: &FreeAbPresheaf) -> Result<MitchellReport> {
    let boolean = f.restrict_to_boolean().higher_limits(LimitMethod::Nerve)?;
    let modified = f.higher_limits(LimitMethod::Cube)?;
    Ok(MitchellReport { boolean, modified })
}

pub fn mitchell_for_diagram(d: &LinkDiagram) -> Result<MitchellReport> {
    mitchell_comparison(khovanov_presheaf(d)?.presheaf())
}
