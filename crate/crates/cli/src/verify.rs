use std::num::NonZeroUsize;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use khlim_core::engine::{reidemeister_sites, verify_reidemeister, InvarianceReport};
use khlim_core::fiber::{random_les_suite, skein_sequence, verify_fiber_suite, SuiteReport};
use khlim_core::linalg::{homology, AbGroup};
use khlim_core::poset::{audit_signs, resolution_complex_at, Lattice};
use khlim_core::presheaf::{local_ses, LocalSesKind};

use crate::report::{CheckOut, SuiteOut};
use crate::{load, CliError, Format, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Reidemeister,
    Skein,
    Les,
    #[value(name = "section3")]
    Fibers,
    Resolution,
    Signs,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Reidemeister => "reidemeister",
            Suite::Skein => "skein",
            Suite::Les => "les",
            Suite::Fibers => "section3",
            Suite::Resolution => "resolution",
            Suite::Signs => "signs",
        }
    }
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    /// PD code, required by reidemeister and skein; les also uses it when given.
    file: Option<PathBuf>,
    /// Largest lattice rank for resolution and signs.
    #[arg(long)]
    rank: Option<usize>,
    /// Restrict skein to one crossing.
    #[arg(long)]
    crossing: Option<usize>,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Base seed; the KH_SEED environment variable takes precedence.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads for reidemeister.
    #[arg(long)]
    jobs: Option<NonZeroUsize>,
    /// Number of R2 sites sampled per diagram.
    #[arg(long, default_value_t = 8)]
    r2_samples: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

fn seed(args: &VerifyArgs) -> Result<u64> {
    match std::env::var("KH_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| CliError::Usage(format!("KH_SEED is not an unsigned integer: {s:?}"))),
        Err(_) => Ok(args.seed),
    }
}

fn need_file(args: &VerifyArgs) -> Result<&PathBuf> {
    args.file.as_ref().ok_or_else(|| CliError::Usage(format!("verify {} needs a PD file", args.suite.name())))
}

fn suite_checks(r: &SuiteReport) -> Vec<CheckOut> {
    r.checks.iter().map(|c| CheckOut::new(format!("trial {} (seed {}): {}", c.trial, c.seed, c.name), "random-suite", c.pass)).collect()
}

fn reidemeister(args: &VerifyArgs, seed: u64) -> Result<Vec<CheckOut>> {
    let d = load(need_file(args)?)?;
    let sites = reidemeister_sites(&d, args.r2_samples, seed);
    let jobs = args.jobs.map_or_else(|| std::thread::available_parallelism().map_or(1, NonZeroUsize::get), NonZeroUsize::get);
    let chunk = sites.len().div_ceil(jobs).max(1);
    let results: Vec<khlim_core::error::Result<InvarianceReport>> = std::thread::scope(|s| {
        let handles: Vec<_> = sites
            .chunks(chunk)
            .map(|part| {
                let d = &d;
                s.spawn(move || part.iter().map(|&(mv, site)| verify_reidemeister(d, mv, site)).collect::<Vec<_>>())
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    });
    results
        .into_iter()
        .map(|r| {
            let r = r?;
            Ok(CheckOut::new(format!("{:?} at {:?}", r.mv, r.site), "reidemeister-invariance", r.pass()))
        })
        .collect()
}

fn skein(args: &VerifyArgs) -> Result<Vec<CheckOut>> {
    let d = load(need_file(args)?)?;
    let crossings: Vec<usize> = match args.crossing {
        Some(j) => vec![j],
        None => (0..d.crossing_count()).collect(),
    };
    let mut out = Vec::new();
    for j in crossings {
        let s = skein_sequence(&d, j)?;
        out.push(CheckOut::new(format!("crossing {j}: fiber sequence is exact"), "skein-fiber", s.fiber.is_exact()));
        out.push(CheckOut::new(format!("crossing {j}: fiber matches the diagram"), "skein-fiber", s.agrees()));
    }
    Ok(out)
}

fn les(args: &VerifyArgs, seed: u64) -> Result<Vec<CheckOut>> {
    let mut out = Vec::new();
    if let Some(path) = &args.file {
        let d = load(path)?;
        let marked = d.marked_arc()?;
        for kind in [LocalSesKind::Unit, LocalSesKind::Merge, LocalSesKind::Split] {
            let ses = local_ses(&d, marked, kind)?;
            let exact = ses.ses.les()?.certify()?.is_exact();
            out.push(CheckOut::new(format!("{kind:?} sequence is exact"), "local-ses", exact));
        }
    }
    out.extend(suite_checks(&random_les_suite(seed, args.trials)?));
    Ok(out)
}

fn resolution(args: &VerifyArgs) -> Result<Vec<CheckOut>> {
    let mut out = Vec::new();
    for n in 0..=args.rank.unwrap_or(5) {
        let l = Lattice::modified(n);
        let mut pass = true;
        for x in l.elements() {
            let h = homology(&resolution_complex_at(&l, x))?;
            pass &= h.degrees().all(|(i, g)| *g == if i == 0 { AbGroup::free(1) } else { AbGroup::zero() });
        }
        out.push(CheckOut::new(format!("rank {n}: every cell closure is acyclic"), "resolution-exactness", pass));
    }
    Ok(out)
}

fn signs(args: &VerifyArgs) -> Vec<CheckOut> {
    (0..=args.rank.unwrap_or(8))
        .map(|n| {
            let a = audit_signs(&Lattice::modified(n));
            let name = format!(
                "rank {n}: {} squares, {} odd; {} edges into 1'",
                a.squares, a.odd_squares, a.prime_edges
            );
            CheckOut::new(name, "sign-audit", a.passed())
        })
        .collect()
}

pub fn run(args: VerifyArgs) -> Result<()> {
    let seed = seed(&args)?;
    let checks = match args.suite {
        Suite::Reidemeister => reidemeister(&args, seed)?,
        Suite::Skein => skein(&args)?,
        Suite::Les => les(&args, seed)?,
        Suite::Fibers => suite_checks(&verify_fiber_suite(seed, args.trials)?),
        Suite::Resolution => resolution(&args)?,
        Suite::Signs => signs(&args),
    };
    let out = SuiteOut::new(args.suite.name(), seed, args.trials, checks);
    match args.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&out).expect("serialisable")),
        Format::Text => {
            for c in &out.checks {
                println!("[{}] {}", if c.pass { "ok" } else { "FAIL" }, c.name);
            }
            println!("{}: {} checks, {} failed", out.suite, out.checks.len(), out.failures);
        }
    }
    if out.failures > 0 {
        return Err(CliError::Failed(out.failures));
    }
    Ok(())
}
