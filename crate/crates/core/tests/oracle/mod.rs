//! Naive recomputation of ungraded Khovanov homology from PD text: states are
//! enumerated directly, circles are found by depth-first search on arc labels,
//! the complex is dense over i128 and homology comes from a local Smith form.

#![allow(dead_code, clippy::needless_range_loop, clippy::manual_is_multiple_of)]

pub struct Pd {
    pub crossings: Vec<[u32; 4]>,
    pub loops: u32,
}

pub fn parse(text: &str) -> Pd {
    let mut crossings = Vec::new();
    let mut loops = 0;
    for line in text.lines() {
        let line = line.split('#').next().unwrap().trim();
        if let Some(rest) = line.strip_prefix('U') {
            loops = rest.trim().parse().unwrap();
            continue;
        }
        for term in line.split(')') {
            let term = term.trim();
            if let Some(body) = term.strip_prefix("X(") {
                let v: Vec<u32> = body.split(',').map(|s| s.trim().parse().unwrap()).collect();
                crossings.push([v[0], v[1], v[2], v[3]]);
            }
        }
    }
    Pd { crossings, loops }
}

/// Negative crossings, assuming arcs are numbered consecutively along each component.
/// A kink repeats a label and is read off from which slots repeat.
pub fn negative_count(pd: &Pd) -> usize {
    pd.crossings
        .iter()
        .filter(|&&[i, j, k, l]| {
            let [i, j, k, l] = [i, j, k, l].map(i64::from);
            i == l || j == k || (i != j && k != l && (l == j + 1 || j > l + 1))
        })
        .count()
}

/// Circle index of every arc label (index 0 unused) for the smoothing `state`.
pub fn circles(pd: &Pd, state: usize) -> (Vec<usize>, usize) {
    let arcs = pd.crossings.iter().flatten().copied().max().unwrap_or(0) as usize;
    let mut adj = vec![Vec::new(); arcs + 1];
    for (c, &[i, j, k, l]) in pd.crossings.iter().enumerate() {
        let pairs = if state >> c & 1 == 0 { [(i, j), (k, l)] } else { [(i, l), (j, k)] };
        for (a, b) in pairs {
            adj[a as usize].push(b as usize);
            adj[b as usize].push(a as usize);
        }
    }
    let mut label = vec![usize::MAX; arcs + 1];
    let mut count = 0;
    for start in 1..=arcs {
        if label[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        label[start] = count;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if label[w] == usize::MAX {
                    label[w] = count;
                    stack.push(w);
                }
            }
        }
        count += 1;
    }
    (label, count + pd.loops as usize)
}

pub type Dense = Vec<Vec<i128>>;

/// Generators of `C^k` are `(state, mask)` with bit `i` of `mask` set when circle `i` carries `x`.
fn generators(pd: &Pd, k: usize) -> Vec<(usize, usize)> {
    let n = pd.crossings.len();
    let mut out = Vec::new();
    for s in 0..1usize << n {
        if s.count_ones() as usize == k {
            let (_, c) = circles(pd, s);
            out.extend((0..1usize << c).map(|m| (s, m)));
        }
    }
    out
}

fn edge_image(pd: &Pd, s: usize, j: usize, mask: usize) -> Vec<(usize, i128)> {
    let t = s | 1 << j;
    let (ls, cs) = circles(pd, s);
    let (lt, ct) = circles(pd, t);
    let arcs = ls.len() - 1;
    let mut to_t = vec![usize::MAX; cs];
    for a in 1..=arcs {
        to_t[ls[a]] = lt[a];
    }
    for f in 0..pd.loops as usize {
        to_t[cs - 1 - f] = ct - 1 - f;
    }
    let sign: i128 = if (s & ((1 << j) - 1)).count_ones() % 2 == 0 { 1 } else { -1 };
    let x = |m: usize, c: usize| m >> c & 1 == 1;
    if ct + 1 == cs {
        let (a, b) = {
            let mut hit = (0..cs).filter(|&c| (0..cs).any(|d| d != c && to_t[d] == to_t[c]));
            (hit.next().unwrap(), hit.next().unwrap())
        };
        if x(mask, a) && x(mask, b) {
            return Vec::new();
        }
        let mut m = 0;
        for c in 0..cs {
            if x(mask, c) {
                m |= 1 << to_t[c];
            }
        }
        vec![(m, sign)]
    } else {
        assert_eq!(ct, cs + 1);
        let mut seen = vec![Vec::new(); cs];
        for a in 1..=arcs {
            if !seen[ls[a]].contains(&lt[a]) {
                seen[ls[a]].push(lt[a]);
            }
        }
        let src = seen.iter().position(|v| v.len() == 2).unwrap();
        let mut base = 0;
        for c in 0..cs {
            if c != src && x(mask, c) {
                base |= 1 << to_t[c];
            }
        }
        let (p, q) = (seen[src][0], seen[src][1]);
        if x(mask, src) {
            vec![(base | 1 << p | 1 << q, sign)]
        } else {
            vec![(base | 1 << p, sign), (base | 1 << q, sign)]
        }
    }
}

pub fn complex(pd: &Pd) -> (Vec<usize>, Vec<Dense>) {
    let n = pd.crossings.len();
    let gens: Vec<Vec<(usize, usize)>> = (0..=n).map(|k| generators(pd, k)).collect();
    let dims = gens.iter().map(Vec::len).collect();
    let mut diffs = Vec::new();
    for k in 0..n {
        let mut d = vec![vec![0i128; gens[k].len()]; gens[k + 1].len()];
        for (col, &(s, m)) in gens[k].iter().enumerate() {
            for j in (0..n).filter(|j| s >> j & 1 == 0) {
                for (mt, v) in edge_image(pd, s, j, m) {
                    let row = gens[k + 1].iter().position(|&g| g == (s | 1 << j, mt)).unwrap();
                    d[row][col] += v;
                }
            }
        }
        diffs.push(d);
    }
    (dims, diffs)
}

/// Nonzero invariant factors of `m`, in increasing order.
pub fn invariant_factors(m: &Dense) -> Vec<i128> {
    let mut a = m.clone();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| a[i][j] != 0)
            .min_by_key(|&(i, j)| a[i][j].abs())
        else {
            break;
        };
        a.swap(t, pi);
        for r in a.iter_mut() {
            r.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            let q = a[i][t] / a[t][t];
            for j in t..cols {
                a[i][j] -= q * a[t][j];
            }
            clean &= a[i][t] == 0;
        }
        for j in t + 1..cols {
            let q = a[t][j] / a[t][t];
            for i in t..rows {
                a[i][j] -= q * a[i][t];
            }
            clean &= a[t][j] == 0;
        }
        if !clean {
            continue;
        }
        if let Some(i) = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % a[t][t] != 0)) {
            for c in t..cols {
                a[t][c] += a[i][c];
            }
            continue;
        }
        out.push(a[t][t].abs());
        t += 1;
    }
    out.sort();
    out
}

/// `(rank, torsion)` of `H^k` for `k = 0..=n`.
pub fn homology(dims: &[usize], diffs: &[Dense]) -> Vec<(usize, Vec<i128>)> {
    let facs: Vec<Vec<i128>> = diffs.iter().map(invariant_factors).collect();
    (0..dims.len())
        .map(|k| {
            let out_rank = if k < facs.len() { facs[k].len() } else { 0 };
            let (in_rank, torsion) = if k > 0 {
                (facs[k - 1].len(), facs[k - 1].iter().copied().filter(|&f| f > 1).collect())
            } else {
                (0, Vec::new())
            };
            (dims[k] - out_rank - in_rank, torsion)
        })
        .collect()
}

/// Unnormalised homology in degrees `0..=n` and the number of negative crossings.
pub fn khovanov(text: &str) -> (Vec<(usize, Vec<i128>)>, usize) {
    let pd = parse(text);
    let (dims, diffs) = complex(&pd);
    for w in diffs.windows(2) {
        for i in 0..w[1].len() {
            for j in 0..w[0][0].len() {
                let v: i128 = (0..w[0].len()).map(|k| w[1][i][k] * w[0][k][j]).sum();
                assert_eq!(v, 0, "oracle differential squares to zero");
            }
        }
    }
    (homology(&dims, &diffs), negative_count(&pd))
}
