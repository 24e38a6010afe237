//! Report objects. Every command builds one of these; `--json` serializes it
//! and the text output is rendered from the same value.

use std::fmt::Write as _;
use std::path::Path;

use mu_forge::classify::ManifestEntry;
use mu_forge::iso::ConfluenceReport;
use mu_forge::suites::SuiteReport;
use mu_forge::{dimacs_hash, ClauseSet, Variable};
use serde::Serialize;
use serde_json::Value;

pub trait Report: Serialize {
    fn text(&self) -> String;

    fn render(&self, json: bool) -> String {
        if json {
            let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
            s.push('\n');
            s
        } else {
            self.text()
        }
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct Summary {
    pub n: usize,
    pub c: usize,
    pub delta: i64,
    pub hash: String,
}

impl Summary {
    pub fn of(f: &ClauseSet) -> Self {
        Summary {
            n: f.n(),
            c: f.c(),
            delta: f.deficiency(),
            hash: dimacs_hash(f),
        }
    }

    fn line(&self) -> String {
        format!("n {} c {} delta {}", self.n, self.c, self.delta)
    }
}

#[derive(Serialize, Debug, Clone)]
#[serde(rename_all = "camelCase")]
pub struct Flags {
    pub sat: bool,
    pub mu: bool,
    pub smu: bool,
    pub hitting: bool,
    pub uhit: bool,
    pub renamable_horn: bool,
    pub nonsingular: bool,
}

#[derive(Serialize, Debug, Clone)]
pub struct Fixpoint {
    #[serde(flatten)]
    pub summary: Summary,
    pub refuted: bool,
}

impl Fixpoint {
    pub fn of(f: &ClauseSet) -> Self {
        Fixpoint {
            summary: Summary::of(f),
            refuted: f.contains_empty(),
        }
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct Hypergraph {
    pub vertices: Vec<Variable>,
    pub edges: Vec<Vec<Variable>>,
}

#[derive(Serialize, Debug, Clone)]
#[serde(rename_all = "camelCase")]
pub struct AnalysisReport {
    #[serde(flatten)]
    pub summary: Summary,
    pub flags: Flags,
    pub varsing: Vec<Variable>,
    pub var1sing: Vec<Variable>,
    pub singularity_index: Option<usize>,
    pub hypergraph: Option<Hypergraph>,
    pub r1: Fixpoint,
    pub r2: Fixpoint,
}

fn join(vs: &[Variable]) -> String {
    if vs.is_empty() {
        return "-".into();
    }
    vs.iter().map(|v| v.0.to_string()).collect::<Vec<_>>().join(" ")
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

impl Report for AnalysisReport {
    fn text(&self) -> String {
        let f = &self.flags;
        let mut s = String::new();
        writeln!(s, "{}", self.summary.line()).unwrap();
        writeln!(s, "hash {}", self.summary.hash).unwrap();
        for (name, v) in [
            ("sat", f.sat),
            ("mu", f.mu),
            ("smu", f.smu),
            ("hitting", f.hitting),
            ("uhit", f.uhit),
            ("renamable-horn", f.renamable_horn),
            ("nonsingular", f.nonsingular),
        ] {
            writeln!(s, "{name:<15} {}", yes(v)).unwrap();
        }
        writeln!(s, "varsing         {}", join(&self.varsing)).unwrap();
        writeln!(s, "var1sing        {}", join(&self.var1sing)).unwrap();
        if let Some(i) = self.singularity_index {
            writeln!(s, "singularity     {i}").unwrap();
        }
        if let Some(h) = &self.hypergraph {
            let edges: Vec<String> = h.edges.iter().map(|e| format!("{{{}}}", join(e))).collect();
            writeln!(s, "hypergraph      {}", if edges.is_empty() { "-".into() } else { edges.join(" ") }).unwrap();
        }
        for (name, r) in [("r1", &self.r1), ("r2", &self.r2)] {
            writeln!(s, "{name:<15} {}{}", r.summary.line(), if r.refuted { " (refuted)" } else { "" }).unwrap();
        }
        s
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct ReductionReport {
    pub mode: String,
    pub input: Summary,
    pub result: Summary,
    pub steps: Value,
    pub dimacs: String,
}

impl Report for ReductionReport {
    fn text(&self) -> String {
        self.dimacs.clone()
    }
}

#[derive(Debug, Clone)]
pub struct ClassifyReport {
    pub input: Summary,
    pub confluence: ConfluenceReport,
    pub mutt: Option<usize>,
}

impl Serialize for ClassifyReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut doc = self.confluence.to_json();
        doc["n"] = self.input.n.into();
        doc["c"] = self.input.c.into();
        doc["delta"] = self.input.delta.into();
        if let Some(t) = self.mutt {
            doc["mutt"] = t.into();
        }
        doc.serialize(s)
    }
}

impl Report for ClassifyReport {
    fn text(&self) -> String {
        let r = &self.confluence;
        let mut s = String::new();
        writeln!(s, "{}", self.input.line()).unwrap();
        writeln!(s, "classification  {}", serde_json::to_value(r.classification).unwrap().as_str().unwrap()).unwrap();
        writeln!(s, "results         {}", r.result_count()).unwrap();
        if let Some(n) = r.n_after_reduction() {
            writeln!(s, "n after         {n}").unwrap();
        }
        writeln!(s, "ev. saturated   {}", yes(r.eventually_saturated)).unwrap();
        if let Some((i, j)) = r.counterexample_pair {
            writeln!(s, "non-isomorphic  results {i} and {j}").unwrap();
        }
        if let Some(t) = self.mutt {
            writeln!(s, "type            {t}").unwrap();
        }
        s
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct CorpusReport {
    pub directory: String,
    pub manifest: Vec<ManifestEntry>,
}

impl CorpusReport {
    pub fn new(dir: &Path, manifest: Vec<ManifestEntry>) -> Self {
        CorpusReport {
            directory: dir.display().to_string(),
            manifest,
        }
    }
}

impl Report for CorpusReport {
    fn text(&self) -> String {
        let mut s = String::new();
        for e in &self.manifest {
            writeln!(s, "{}  n {} c {} delta {}", e.file_name, e.n, e.c, e.delta).unwrap();
        }
        writeln!(s, "wrote {} instances to {}", self.manifest.len(), self.directory).unwrap();
        s
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct CheckReport {
    pub corpus: String,
    pub instances: usize,
    pub suites: Vec<SuiteReport>,
    pub passed: bool,
}

impl Report for CheckReport {
    fn text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "corpus {} ({} instances)", self.corpus, self.instances).unwrap();
        for r in &self.suites {
            let verdict = if r.passed() { "PASS" } else { "FAIL" };
            writeln!(s, "{:<15} {verdict}  {} checks, {} failures", r.suite.name(), r.checks, r.failures.len()).unwrap();
            for f in &r.failures {
                writeln!(s, "  {f}").unwrap();
            }
        }
        s
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct InstanceReport {
    #[serde(flatten)]
    pub summary: Summary,
    pub dimacs: String,
}

impl Report for InstanceReport {
    fn text(&self) -> String {
        self.dimacs.clone()
    }
}
