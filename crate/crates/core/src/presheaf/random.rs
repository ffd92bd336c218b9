use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use rand::Rng;

use super::{FreeAbPresheaf, PresheafMorphism, PresheafSes};
use crate::linalg::{kernel_basis, IntMatrix, Solver};
use crate::poset::{Elem, Lattice};

const ATTEMPTS: usize = 16;

fn small<R: Rng + ?Sized>(rng: &mut R) -> BigInt {
    BigInt::from(rng.gen_range(-1i64..=1))
}

fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> IntMatrix {
    let t = (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).collect::<Vec<_>>();
    IntMatrix::from_triplets(rows, cols, t.into_iter().map(|(i, j)| (i, j, BigInt::from(rng.gen_range(-2i64..=2)))))
}

/// Elements ordered so that everything above `x` precedes it.
fn top_down(l: &Lattice) -> Vec<Elem> {
    (0..=l.rank()).flat_map(|k| l.of_dim(k)).collect()
}

/// Pairs of covers of `x` with a common cover above them.
fn squares_at(l: &Lattice, x: Elem) -> Vec<(usize, usize, Elem)> {
    let ys = l.covers_above(x);
    let mut out = Vec::new();
    for a in 0..ys.len() {
        for b in a + 1..ys.len() {
            for z in l.covers_above(ys[a]) {
                if l.covers_above(ys[b]).contains(&z) {
                    out.push((a, b, z));
                }
            }
        }
    }
    out
}

/// Stacks `left(a)ᵀ v_a − right(b)ᵀ v_b` for every square, with one column block per cover.
fn square_constraints(
    widths: &[usize],
    squares: &[(usize, usize, Elem)],
    height: impl Fn(Elem) -> usize,
    left: impl Fn(usize, Elem) -> IntMatrix,
) -> IntMatrix {
    let mut off = Vec::with_capacity(widths.len());
    let mut total = 0;
    for &w in widths {
        off.push(total);
        total += w;
    }
    let rows: usize = squares.iter().map(|&(_, _, z)| height(z)).sum();
    let mut c = IntMatrix::zeros(rows, total);
    let mut r = 0;
    for &(a, b, z) in squares {
        c.add_block(r, off[a], &left(a, z).transpose());
        c.add_block(r, off[b], &left(b, z).transpose().neg());
        r += height(z);
    }
    c
}

fn random_combination<R: Rng + ?Sized>(rng: &mut R, k: &IntMatrix) -> Vec<BigInt> {
    let mut v = alloc::vec![BigInt::from(0); k.rows()];
    for j in 0..k.cols() {
        let c = small(rng);
        for (i, x) in k.column_vec(j).into_iter().enumerate() {
            v[i] += &c * x;
        }
    }
    v
}

/// Splits a row vector into per-cover pieces and writes row `t` of each map.
fn scatter(v: &[BigInt], widths: &[usize], t: usize, out: &mut [IntMatrix]) {
    let mut o = 0;
    for (m, &w) in out.iter_mut().zip(widths) {
        for j in 0..w {
            if v[o + j] != BigInt::from(0) {
                m.set(t, j, v[o + j].clone());
            }
        }
        o += w;
    }
}

/// A functorial presheaf with ranks in `0..=max_rank`, built from the maxima
/// down by choosing maps in the solution lattice of the square conditions.
pub fn random_presheaf<R: Rng + ?Sized>(
    rng: &mut R,
    lattice: Lattice,
    max_rank: usize,
    prime_zero: bool,
) -> FreeAbPresheaf {
    let ranks: Vec<usize> = lattice
        .elements()
        .map(|x| if prime_zero && lattice.is_prime(x) { 0 } else { rng.gen_range(0..=max_rank) })
        .collect();
    let mut maps: BTreeMap<(Elem, Elem), IntMatrix> = BTreeMap::new();
    for x in top_down(&lattice) {
        let ys = lattice.covers_above(x);
        if ys.is_empty() {
            continue;
        }
        let widths: Vec<usize> = ys.iter().map(|&y| ranks[y]).collect();
        let squares = squares_at(&lattice, x);
        let mut out: Vec<IntMatrix> = ys.iter().map(|&y| IntMatrix::zeros(ranks[x], ranks[y])).collect();
        if squares.is_empty() {
            for (m, &y) in out.iter_mut().zip(&ys) {
                *m = random_matrix(rng, ranks[x], ranks[y]);
            }
        } else {
            let get = |a: usize, z: Elem| {
                maps.get(&(ys[a], z)).cloned().unwrap_or_else(|| IntMatrix::zeros(ranks[ys[a]], ranks[z]))
            };
            let c = square_constraints(&widths, &squares, |z| ranks[z], get);
            let k = kernel_basis(&c);
            for t in 0..ranks[x] {
                let v = random_combination(rng, &k);
                scatter(&v, &widths, t, &mut out);
            }
        }
        for (m, &y) in out.into_iter().zip(&ys) {
            maps.insert((x, y), m);
        }
    }
    FreeAbPresheaf::new(lattice, ranks, maps).expect("square conditions hold by construction")
}

fn random_unimodular<R: Rng + ?Sized>(rng: &mut R, r: usize) -> (IntMatrix, IntMatrix) {
    let mut u = IntMatrix::identity(r);
    let mut inv = IntMatrix::identity(r);
    if r < 2 {
        if r == 1 && rng.gen_bool(0.5) {
            let m = IntMatrix::from_rows(1, 1, &[[-1]]);
            return (m.clone(), m);
        }
        return (u, inv);
    }
    for _ in 0..2 * r {
        let i = rng.gen_range(0..r);
        let mut j = rng.gen_range(0..r - 1);
        if j >= i {
            j += 1;
        }
        let c: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
        let mut e = IntMatrix::identity(r);
        e.set(j, i, BigInt::from(c));
        let mut e_inv = IntMatrix::identity(r);
        e_inv.set(j, i, BigInt::from(-c));
        u = e.mul(&u);
        inv = inv.mul(&e_inv);
    }
    (u, inv)
}

/// An isomorphic copy `G` of `f` with a natural isomorphism `F → G`, obtained by
/// a unimodular change of basis at every element.
pub fn random_unimodular_twist<R: Rng + ?Sized>(
    rng: &mut R,
    f: &FreeAbPresheaf,
) -> (FreeAbPresheaf, PresheafMorphism) {
    let l = f.lattice();
    let pairs: Vec<(IntMatrix, IntMatrix)> = l.elements().map(|x| random_unimodular(rng, f.rank_at(x))).collect();
    let maps = l.covers().into_iter().map(|(x, y)| ((x, y), pairs[x].0.mul(&f.map(x, y)).mul(&pairs[y].1))).collect();
    let g = FreeAbPresheaf::new(l, f.ranks().to_vec(), maps).expect("conjugate of a functor");
    let iso = PresheafMorphism::new(f, &g, pairs.into_iter().map(|p| p.0).collect()).expect("conjugation is natural");
    (g, iso)
}

/// `0 → F → G → H → 0` with `G = F ⊕ H` as groups and a random twist
/// `T(x ≺ y): H(y) → F(x)` in the upper corner of its maps.
pub fn random_ses<R: Rng + ?Sized>(rng: &mut R, lattice: Lattice, max_rank: usize) -> PresheafSes {
    let f = random_presheaf(rng, lattice, max_rank, false);
    let h = random_presheaf(rng, lattice, max_rank, false);
    random_extension(rng, f, h)
}

/// A random extension of `h` by `f`; falls back to the direct sum when no
/// twist is found.
pub fn random_extension<R: Rng + ?Sized>(rng: &mut R, f: FreeAbPresheaf, h: FreeAbPresheaf) -> PresheafSes {
    assert_eq!(f.lattice(), h.lattice(), "extension across different posets");
    let twist = (0..ATTEMPTS).find_map(|_| random_twist(rng, &f, &h)).unwrap_or_default();
    let l = f.lattice();
    let ranks: Vec<usize> = l.elements().map(|x| f.rank_at(x) + h.rank_at(x)).collect();
    let mut maps = BTreeMap::new();
    for (x, y) in l.covers() {
        let (fx, fy) = (f.rank_at(x), f.rank_at(y));
        let mut m = IntMatrix::block_diag(&[&f.map(x, y), &h.map(x, y)]);
        if let Some(t) = twist.get(&(x, y)) {
            m.add_block(0, fy, t);
        }
        debug_assert_eq!(m.rows(), fx + h.rank_at(x));
        maps.insert((x, y), m);
    }
    let g = FreeAbPresheaf::new(l, ranks, maps).expect("twist satisfies the square conditions");
    let inc = l
        .elements()
        .map(|x| IntMatrix::vstack(&[&IntMatrix::identity(f.rank_at(x)), &IntMatrix::zeros(h.rank_at(x), f.rank_at(x))]))
        .collect();
    let proj = l
        .elements()
        .map(|x| IntMatrix::hstack(&[&IntMatrix::zeros(h.rank_at(x), f.rank_at(x)), &IntMatrix::identity(h.rank_at(x))]))
        .collect();
    let inc = PresheafMorphism::new(&f, &g, inc).expect("inclusion is natural");
    let proj = PresheafMorphism::new(&g, &h, proj).expect("projection is natural");
    PresheafSes { sub: f, total: g, quotient: h, inc, proj }
}

fn random_twist<R: Rng + ?Sized>(
    rng: &mut R,
    f: &FreeAbPresheaf,
    h: &FreeAbPresheaf,
) -> Option<BTreeMap<(Elem, Elem), IntMatrix>> {
    let l = f.lattice();
    let mut twist: BTreeMap<(Elem, Elem), IntMatrix> = BTreeMap::new();
    let t_at = |tw: &BTreeMap<(Elem, Elem), IntMatrix>, x: Elem, y: Elem| {
        tw.get(&(x, y)).cloned().unwrap_or_else(|| IntMatrix::zeros(f.rank_at(x), h.rank_at(y)))
    };
    for x in top_down(&l) {
        let zs = l.covers_above(x);
        if zs.is_empty() {
            continue;
        }
        let widths: Vec<usize> = zs.iter().map(|&z| h.rank_at(z)).collect();
        let squares = squares_at(&l, x);
        let mut out: Vec<IntMatrix> = zs.iter().map(|&z| IntMatrix::zeros(f.rank_at(x), h.rank_at(z))).collect();
        if squares.is_empty() {
            for (m, &z) in out.iter_mut().zip(&zs) {
                *m = random_matrix(rng, f.rank_at(x), h.rank_at(z));
            }
        } else {
            let c = square_constraints(&widths, &squares, |y| h.rank_at(y), |a, y| h.map(zs[a], y));
            let solver = Solver::new(&c);
            let k = kernel_basis(&c);
            let mut rhs = Vec::new();
            for &(a, b, y) in &squares {
                let r = f.map(x, zs[b]).mul(&t_at(&twist, zs[b], y)).sub(&f.map(x, zs[a]).mul(&t_at(&twist, zs[a], y)));
                rhs.push(r);
            }
            for t in 0..f.rank_at(x) {
                let b: Vec<BigInt> = rhs.iter().flat_map(|r| (0..r.cols()).map(move |j| r.get(t, j))).collect();
                let mut v = solver.solve(&b)?;
                for (vi, ki) in v.iter_mut().zip(random_combination(rng, &k)) {
                    *vi += ki;
                }
                scatter(&v, &widths, t, &mut out);
            }
        }
        for (m, &z) in out.into_iter().zip(&zs) {
            twist.insert((x, z), m);
        }
    }
    Some(twist)
}
