use khlim_core::diagram::{serialize, LinkDiagram};
use khlim_core::engine::{Check, KhResult};
use khlim_core::linalg::GradedAbGroup;
use serde::Serialize;
use serde_json::Value;

#[derive(Serialize)]
pub struct DiagramInfo {
    pub crossings: usize,
    pub components: usize,
    pub free_loops: u32,
    pub signs: Vec<i8>,
    pub pd: String,
}

impl DiagramInfo {
    pub fn of(d: &LinkDiagram) -> Self {
        DiagramInfo {
            crossings: d.crossing_count(),
            components: d.components().len(),
            free_loops: d.free_loops(),
            signs: d.signs().to_vec(),
            pd: serialize(d).trim_end().replace('\n', " "),
        }
    }
}

#[derive(Serialize)]
pub struct Degree {
    pub deg: i64,
    pub rank: usize,
    pub torsion: Vec<Value>,
}

pub fn table(h: &GradedAbGroup) -> Vec<Degree> {
    h.degrees()
        .map(|(deg, g)| Degree { deg, rank: g.rank, torsion: g.torsion.iter().map(|t| u64::try_from(t).map(Value::from).unwrap_or_else(|_| Value::from(t.to_string()))).collect() })
        .collect()
}

#[derive(Serialize)]
pub struct CheckOut {
    pub name: String,
    pub anchor: String,
    pub pass: bool,
}

impl CheckOut {
    pub fn new(name: impl Into<String>, anchor: &str, pass: bool) -> Self {
        CheckOut { name: name.into(), anchor: anchor.into(), pass }
    }
}

impl From<&Check> for CheckOut {
    fn from(c: &Check) -> Self {
        CheckOut::new(c.name.clone(), c.anchor, c.pass)
    }
}

#[derive(Serialize)]
pub struct ComputeReport {
    pub diagram: DiagramInfo,
    pub c_negative: usize,
    pub unnormalised: Vec<Degree>,
    pub normalised: Vec<Degree>,
    pub method: String,
    pub checks: Vec<CheckOut>,
}

impl ComputeReport {
    pub fn new(d: &LinkDiagram, r: &KhResult) -> Self {
        ComputeReport {
            diagram: DiagramInfo::of(d),
            c_negative: r.negative_crossings,
            unnormalised: table(&r.unnormalised),
            normalised: table(&r.normalised),
            method: r.method.name().into(),
            checks: r.checks.iter().map(CheckOut::from).collect(),
        }
    }
}

#[derive(Serialize)]
pub struct SuiteOut {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub passed: bool,
    pub failures: usize,
    pub checks: Vec<CheckOut>,
}

impl SuiteOut {
    pub fn new(suite: &str, seed: u64, trials: usize, checks: Vec<CheckOut>) -> Self {
        let failures = checks.iter().filter(|c| !c.pass).count();
        SuiteOut { suite: suite.into(), seed, trials, passed: failures == 0, failures, checks }
    }
}

pub fn text_table(h: &GradedAbGroup) -> String {
    h.degrees().map(|(i, g)| format!("  H^{i:<3} {g}\n")).collect()
}
