//! Property suites run against a corpus of MU clause-sets.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classify::{dn_witness, generate_mu_corpus, mutt, GeneratorRecipe};
use crate::clause::{Clause, ClauseSet, Literal, Variable};
use crate::dp::{
    check_degree_ledger, check_singular_reduction, dp, neighbour_exchange_allowed, random_maximal_tuple, saturation,
    sdp_set, singular_profile, singularity_index, swap_equality_check, validate_tuple,
};
use crate::error::{Error, Result};
use crate::iso::{are_isomorphic, DEFAULT_ISO_BOUND};
use crate::oracle::{is_uhit, MinUnsat, Oracle};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Degrees,
    Exchange,
    Index,
    ConfluenceSmu,
    Mu2,
    Hitting,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Degrees,
        Suite::Exchange,
        Suite::Index,
        Suite::ConfluenceSmu,
        Suite::Mu2,
        Suite::Hitting,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Degrees => "degrees",
            Suite::Exchange => "exchange",
            Suite::Index => "index",
            Suite::ConfluenceSmu => "confluence-smu",
            Suite::Mu2 => "mu2",
            Suite::Hitting => "hitting",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::precondition(format!("unknown suite {s}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteReport {
    pub suite: Suite,
    pub instances: usize,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        SuiteReport {
            suite,
            instances: 0,
            checks: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Random maximal tuples per instance.
    pub samples: usize,
    /// Cap on visited states when enumerating reduction results.
    pub limit: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            samples: 20,
            limit: 20_000,
        }
    }
}

/// A mixed corpus covering deficiencies 1 to 3, with and without saturation.
pub fn builtin_corpus(oracle: &Oracle) -> Result<Vec<MinUnsat>> {
    let mut recipes = Vec::new();
    for (i, (deficiency, glue, saturate)) in [
        (1, false, false),
        (2, false, false),
        (2, true, false),
        (2, false, true),
        (3, true, false),
        (3, true, true),
    ]
    .into_iter()
    .enumerate()
    {
        let mut r = GeneratorRecipe::new(1000 + i as u64, deficiency, 7, 12);
        r.glue = glue;
        r.saturate = saturate;
        recipes.push(r);
    }
    let mut out = Vec::new();
    for r in &recipes {
        out.extend(generate_mu_corpus(r, oracle)?);
    }
    Ok(out)
}

pub fn run_suite(suite: Suite, corpus: &[MinUnsat], oracle: &Oracle, config: &SuiteConfig) -> Result<SuiteReport> {
    if corpus.is_empty() {
        return Err(Error::precondition("corpus is empty"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut report = SuiteReport::new(suite);
    for (i, f) in corpus.iter().enumerate() {
        report.instances += 1;
        match suite {
            Suite::Degrees => degrees(f, i, config, &mut rng, &mut report),
            Suite::Exchange => exchange(f, i, config, &mut rng, &mut report)?,
            Suite::Index => index(f, i, config, &mut rng, &mut report)?,
            Suite::ConfluenceSmu => confluence_smu(f, i, oracle, config, &mut report)?,
            Suite::Mu2 => {
                if f.deficiency() == 2 {
                    mu2(f, i, oracle, config, &mut report)?;
                } else {
                    report.instances -= 1;
                }
            }
            Suite::Hitting => {
                if f.is_hitting() {
                    hitting(f, oracle, &mut report)?;
                } else {
                    report.instances -= 1;
                }
            }
        }
    }
    if suite == Suite::Hitting {
        for n in 0..=3 {
            for f in enumerate_hitting(n) {
                report.instances += 1;
                hitting(&f, oracle, &mut report)?;
            }
        }
    }
    Ok(report)
}

/// Degree ledger and single-step side conditions along random maximal
/// tuples, using every orientation of each reduced variable.
fn degrees(f: &MinUnsat, i: usize, config: &SuiteConfig, rng: &mut ChaCha8Rng, report: &mut SuiteReport) {
    for _ in 0..config.samples.max(1) {
        let t = random_maximal_tuple(f, rng);
        let mut g = f.clause_set().clone();
        for &v in &t.variables {
            let profile = singular_profile(&g, v).expect("tuple steps are singular");
            let after = dp(&g, v);
            for o in &profile.orientations {
                let violations = check_degree_ledger(&g, o, &after);
                report.check(violations.is_empty(), || format!("instance {i}, variable {v}: {violations:?}"));
            }
            let sides = check_singular_reduction(&g, v).is_ok_and(|r| r.all_pass());
            report.check(sides && after.deficiency() == g.deficiency(), || {
                format!("instance {i}, variable {v}: side conditions or deficiency")
            });
            g = after;
        }
    }
}

/// Every allowed neighbour exchange keeps the tuple singular and the result
/// unchanged.
fn exchange(
    f: &MinUnsat,
    i: usize,
    config: &SuiteConfig,
    rng: &mut ChaCha8Rng,
    report: &mut SuiteReport,
) -> Result<()> {
    for _ in 0..config.samples.clamp(1, 5) {
        let t = random_maximal_tuple(f, rng);
        for k in 0..t.len().saturating_sub(1) {
            let verdict = neighbour_exchange_allowed(f, &t, k)?;
            let mut swapped = t.variables.clone();
            swapped.swap(k, k + 1);
            let valid = validate_tuple(f, &swapped).is_some();
            if verdict.allowed {
                let same = valid && swap_equality_check(f, &t, &swapped)?;
                report.check(same, || format!("instance {i}: exchange {k} of {:?}", t.variables));
            } else {
                report.check(!valid, || format!("instance {i}: forbidden exchange {k} of {:?} is singular", t.variables));
            }
        }
    }
    Ok(())
}

/// All maximal tuples have the same length, and all results share `n`.
fn index(f: &MinUnsat, i: usize, config: &SuiteConfig, rng: &mut ChaCha8Rng, report: &mut SuiteReport) -> Result<()> {
    let expected = singularity_index(f);
    for _ in 0..config.samples.max(1) {
        let t = random_maximal_tuple(f, rng);
        report.check(t.len() == expected, || {
            format!("instance {i}: tuple {:?} has length {}, index {expected}", t.variables, t.len())
        });
    }
    let results = sdp_set(f, config.limit)?;
    let n = results[0].result.n();
    report.check(results.iter().all(|r| r.result.n() == n), || format!("instance {i}: results differ in n"));
    Ok(())
}

/// A saturation of every instance has exactly one reduction result.
fn confluence_smu(f: &MinUnsat, i: usize, oracle: &Oracle, config: &SuiteConfig, report: &mut SuiteReport) -> Result<()> {
    let s = saturation(f, oracle)?;
    let saturated = oracle.is_saturated_mu(&s)?.is_saturated();
    let results = sdp_set(&s, config.limit)?;
    report.check(saturated && results.len() == 1, || {
        format!("instance {i}: saturation has {} reduction results", results.len())
    });
    Ok(())
}

/// Every reduction result is isomorphic to `D_mutt`.
fn mu2(f: &MinUnsat, i: usize, oracle: &Oracle, config: &SuiteConfig, report: &mut SuiteReport) -> Result<()> {
    let t = mutt(f, Some(oracle))?;
    for r in sdp_set(f, config.limit)? {
        let ok = r.result.n() == t && dn_witness(&r.result, oracle).is_ok();
        report.check(ok, || format!("instance {i}: result not isomorphic to D_{t}"));
    }
    Ok(())
}

/// Unsatisfiable hitting clause-sets are saturated, and DP-reduction keeps
/// clause-sets hitting and unsatisfiable hitting.
fn hitting(f: &ClauseSet, oracle: &Oracle, report: &mut SuiteReport) -> Result<()> {
    let uhit = is_uhit(f);
    if uhit {
        let smu = oracle.is_smu(f)?;
        report.check(smu, || format!("unsatisfiable hitting {f:?} is not saturated"));
    }
    for v in f.variables() {
        let g = dp(f, v);
        report.check(g.is_hitting(), || format!("DP on {v} of {f:?} is not hitting"));
        if uhit {
            report.check(is_uhit(&g), || format!("DP on {v} of {f:?} is not unsatisfiable hitting"));
        }
    }
    Ok(())
}

/// Every hitting clause-set with clauses over variables `1..=n`, including
/// the empty one.
pub fn enumerate_hitting(n: u32) -> Vec<ClauseSet> {
    let mut clauses = Vec::new();
    for code in 0..3usize.pow(n) {
        let lits = (0..n).filter_map(|i| match code / 3usize.pow(i) % 3 {
            0 => None,
            k => Some(Literal::new(Variable(i + 1), k == 1)),
        });
        clauses.push(Clause::new(lits).expect("one literal per variable"));
    }
    fn go(clauses: &[Clause], start: usize, chosen: &mut Vec<usize>, out: &mut Vec<ClauseSet>) {
        out.push(chosen.iter().map(|&i| clauses[i].clone()).collect());
        for j in start..clauses.len() {
            if chosen.iter().all(|&i| clauses[i].clash_count(&clauses[j]) > 0) {
                chosen.push(j);
                go(clauses, j + 1, chosen, out);
                chosen.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&clauses, 0, &mut Vec::new(), &mut out);
    out
}

/// A random unsatisfiable hitting clause-set: split clauses on fresh
/// variables starting from `{⊥}`.
pub fn random_uhit(rng: &mut impl Rng, n: u32, splits: usize) -> ClauseSet {
    let mut f = ClauseSet::bottom();
    for _ in 0..splits {
        let options: Vec<(Clause, Variable)> = f
            .iter()
            .flat_map(|c| (1..=n).map(Variable).filter(|&v| !c.contains_var(v)).map(move |v| (c.clone(), v)))
            .collect();
        if options.is_empty() {
            break;
        }
        let (c, v) = options[rng.gen_range(0..options.len())].clone();
        f = f
            .without_clause(&c)
            .with_clause(c.with(v.positive()).expect("fresh"))
            .with_clause(c.with(v.negative()).expect("fresh"));
    }
    f
}

/// Pairwise isomorphism of all reduction results.
pub fn results_pairwise_isomorphic(f: &MinUnsat, limit: usize) -> Result<bool> {
    let results = sdp_set(f, limit)?;
    for r in &results[1..] {
        if are_isomorphic(&results[0].result, &r.result, DEFAULT_ISO_BOUND)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}
