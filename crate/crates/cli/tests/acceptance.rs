#[path = "../../core/tests/oracle/mod.rs"]
mod oracle;

use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use khlim_core::diagram::{parse_pd, LinkDiagram};
use khlim_core::engine::{compute_kh, connected_sum_experiment, mitchell_for_diagram, reidemeister_sites, verify_reidemeister, Method};
use khlim_core::fiber::{random_les_suite, skein_sequence, verify_fiber_suite};
use khlim_core::linalg::{homology, AbGroup, GradedAbGroup};
use khlim_core::poset::{audit_signs, resolution_complex_at, Lattice};
use khlim_core::presheaf::{khovanov_presheaf, local_ses, random_presheaf, LimitMethod, LocalSesKind};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CORPUS: &[&str] = &["unknot", "kink_negative", "kink_positive", "hopf", "trefoil", "figure_eight"];

fn path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(format!("{name}.pd"))
}

fn text(name: &str) -> String {
    std::fs::read_to_string(path(name)).unwrap()
}

fn diagram(name: &str) -> LinkDiagram {
    parse_pd(&text(name)).unwrap()
}

fn corpus() -> Vec<(&'static str, LinkDiagram)> {
    CORPUS.iter().map(|&n| (n, diagram(n))).collect()
}

type Outcome = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn method_agreement() -> Outcome {
    for (name, d) in corpus() {
        compute_kh(&d, Method::Both).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(format!("{} diagrams", CORPUS.len()))
}

fn lim0_triple() -> Outcome {
    let mut bad = Vec::new();
    for (name, d) in corpus() {
        let a = khovanov_presheaf(&d).unwrap().presheaf().lim0_agreement();
        if !(a.nerve_matches && a.cube_matches == Some(true)) {
            bad.push(name.to_string());
        }
    }
    for t in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(t);
        let f = random_presheaf(&mut rng, Lattice::modified(1 + t as usize % 4), 1 + t as usize % 3, false);
        let a = f.lim0_agreement();
        if !(a.nerve_matches && a.cube_matches == Some(true)) {
            bad.push(format!("random seed {t}"));
        }
    }
    ensure(bad.is_empty(), format!("corpus + 100 random presheaves; failures {bad:?}"))
}

fn resolution_exactness() -> Outcome {
    let mut cells = 0;
    for n in 0..=5 {
        let l = Lattice::modified(n);
        for x in l.elements() {
            cells += 1;
            let h = homology(&resolution_complex_at(&l, x)).map_err(|e| e.to_string())?;
            for (i, g) in h.degrees() {
                let want = if i == 0 { AbGroup::free(1) } else { AbGroup::zero() };
                if *g != want {
                    return Err(format!("rank {n}, cell {x}, degree {i}: {g}"));
                }
            }
        }
    }
    Ok(format!("{cells} cells, ranks 0..=5"))
}

fn sign_audit() -> Outcome {
    let mut squares = 0;
    for n in 0..=8 {
        let a = audit_signs(&Lattice::modified(n));
        if !a.passed() {
            return Err(format!("rank {n}: {a:?}"));
        }
        squares += a.squares;
    }
    Ok(format!("{squares} squares, ranks 0..=8"))
}

fn mitchell() -> Outcome {
    for (name, d) in corpus() {
        if !mitchell_for_diagram(&d).unwrap().vanishes() {
            return Err(name.to_string());
        }
    }
    for t in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + t);
        let f = random_presheaf(&mut rng, Lattice::boolean(1 + t as usize % 4), 1 + t as usize % 3, false);
        let h = f.higher_limits(LimitMethod::Nerve).unwrap();
        if h.degrees().any(|(i, g)| i > 0 && !g.is_zero()) {
            return Err(format!("random seed {}: {h}", 1000 + t));
        }
    }
    Ok("corpus + 100 random presheaves over the plain lattice".into())
}

fn les_exactness() -> Outcome {
    for name in ["kink_negative", "kink_positive", "trefoil"] {
        let d = diagram(name);
        for kind in [LocalSesKind::Unit, LocalSesKind::Merge, LocalSesKind::Split] {
            let s = local_ses(&d, d.marked_arc().unwrap(), kind).map_err(|e| format!("{name} {kind:?}: {e}"))?;
            let exact = s.ses.les().and_then(|l| l.certify()).map_err(|e| e.to_string())?.is_exact();
            if !exact {
                return Err(format!("{name} {kind:?}"));
            }
        }
    }
    let r = random_les_suite(0, 50).map_err(|e| e.to_string())?;
    ensure(r.passed(), format!("3 local sequences on 3 diagrams + {} random, {} failures", r.trials(), r.failures().count()))
}

fn fiber_suite() -> Outcome {
    let r = verify_fiber_suite(0, 100).map_err(|e| e.to_string())?;
    let degenerate = ["identity has trivial fiber", "zero bottom layer keeps the top", "zero top layer loops the bottom"];
    let covered = degenerate.iter().all(|n| r.checks.iter().filter(|c| c.name == *n).count() == 100);
    ensure(
        r.passed() && covered,
        format!("{} trials, {} checks, {} failures", r.trials(), r.checks.len(), r.failures().count()),
    )
}

fn skein() -> Outcome {
    let mut count = 0;
    for (name, d) in corpus() {
        for j in 0..d.crossing_count() {
            let s = skein_sequence(&d, j).map_err(|e| format!("{name} crossing {j}: {e}"))?;
            if !(s.fiber.is_exact() && s.agrees()) {
                return Err(format!("{name} crossing {j}"));
            }
            count += 1;
        }
    }
    Ok(format!("{count} crossings"))
}

fn reidemeister() -> Outcome {
    let mut count = 0;
    for (name, d) in corpus() {
        for (mv, site) in reidemeister_sites(&d, 8, 0) {
            let r = verify_reidemeister(&d, mv, site).map_err(|e| format!("{name} {mv:?}: {e}"))?;
            if !r.pass() {
                return Err(format!("{name} {mv:?} at {site:?}: {} vs {}", r.before, r.after));
            }
            count += 1;
        }
    }
    Ok(format!("{count} moves"))
}

fn connected_sums() -> Outcome {
    for (a, b) in [("unknot", "unknot"), ("trefoil", "unknot")] {
        let r = connected_sum_experiment(&diagram(a), &diagram(b)).map_err(|e| e.to_string())?;
        if !r.pass() {
            return Err(format!("({a}, {b}): expected {} got {}", r.expected, r.doubled.normalised));
        }
    }
    Ok("(unknot, unknot), (trefoil, unknot)".into())
}

fn oracle_table(name: &str) -> (GradedAbGroup, usize) {
    let (h, neg) = oracle::khovanov(&text(name));
    let mut g = GradedAbGroup::new();
    for (k, (rank, torsion)) in h.into_iter().enumerate() {
        g.set(k as i64, AbGroup { rank, torsion: torsion.into_iter().map(BigInt::from).collect() });
    }
    (g, neg)
}

fn pinned() -> Outcome {
    let u = compute_kh(&diagram("unknot"), Method::Cube).unwrap();
    if u.unnormalised.get(0) != AbGroup::free(2) {
        return Err(format!("unknot: {}", u.unnormalised));
    }
    let t = compute_kh(&diagram("trefoil"), Method::Cube).unwrap();
    if !t.normalised.degrees().any(|(_, g)| g.torsion.contains(&BigInt::from(2))) {
        return Err(format!("trefoil has no 2-torsion: {}", t.normalised));
    }
    for name in CORPUS {
        let r = compute_kh(&diagram(name), Method::Cube).unwrap();
        let (h, neg) = oracle_table(name);
        if r.normalised != h.shifted(neg as i64) {
            return Err(format!("{name}: {} vs oracle {}", r.normalised, h.shifted(neg as i64)));
        }
    }
    Ok(format!("trefoil {}", t.normalised.to_string().replace('\n', " ")))
}

fn determinism() -> Outcome {
    let run = |args: &[&str]| {
        let out = Command::new(env!("CARGO_BIN_EXE_kh")).args(args).env_remove("KH_SEED").output().unwrap();
        assert!(out.status.success(), "{args:?}");
        out.stdout
    };
    let trefoil = path("trefoil");
    let t = trefoil.to_str().unwrap();
    let runs: [&[&str]; 2] =
        [&["compute", t, "--method", "both", "--format", "json"], &["verify", "section3", "--trials", "5", "--format", "json"]];
    for args in runs {
        if run(args) != run(args) {
            return Err(format!("{args:?}"));
        }
    }
    Ok("compute and verify, two runs each".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("cube and nerve agree on the corpus", method_agreement),
        ("lim0 triple agreement", lim0_triple),
        ("resolution exactness", resolution_exactness),
        ("sign audit", sign_audit),
        ("plain-lattice limits vanish", mitchell),
        ("long exact sequences of limits", les_exactness),
        ("fiber sequence suite", fiber_suite),
        ("skein sequence", skein),
        ("Reidemeister invariance", reidemeister),
        ("connected-sum formula", connected_sums),
        ("pinned values", pinned),
        ("byte-identical JSON", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name} ({detail}; {secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} ({detail}; {secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
