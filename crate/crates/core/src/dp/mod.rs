//! DP-reduction and singular DP-reduction with per-step diagnostics.

mod shyp;
mod tuples;

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use crate::clause::{resolvent, Clause, ClauseSet, Literal, Variable};
use crate::dimacs::dimacs_hash;
use crate::error::{Error, Result};
use crate::oracle::{MinUnsat, Oracle};

pub use shyp::{build_shyp, minimal_transversals, SingularityHypergraph};
pub use tuples::{
    commutable_beginning, maximal_singular_tuples, neighbour_exchange_allowed,
    normalize_tuple_front1, random_maximal_tuple, sdp_set, singularity_index,
    singularity_index_verified, swap_equality_check, validate_tuple, ExchangeCase,
    ExchangeVerdict, SdpResult, SingularTuple, DEFAULT_ENUMERATION_LIMIT,
};

/// Orientation choice for 1-singular variables: `true` makes the positive
/// literal the singular one. Variables without an entry use the default.
pub type Choice = BTreeMap<Variable, bool>;

/// DP-reduction on `v`: clauses without `v` plus all resolvents on `v`.
pub fn dp(f: &ClauseSet, v: Variable) -> ClauseSet {
    let (pos, neg): (Vec<&Clause>, Vec<&Clause>) = f
        .iter()
        .filter(|c| c.contains_var(v))
        .partition(|c| c.contains(v.positive()));
    let kept = f.iter().filter(|c| !c.contains_var(v)).cloned();
    let resolvents = pos.iter().flat_map(|c| {
        neg.iter()
            .filter(|d| c.clash_count(d) == 1)
            .map(|d| resolvent(c, d).expect("exactly one clash"))
    });
    ClauseSet::new(kept.chain(resolvents).collect::<Vec<_>>())
}

/// DP-reduction along a sequence, in order.
pub fn iterated_dp(f: &ClauseSet, vars: &[Variable]) -> ClauseSet {
    vars.iter().fold(f.clone(), |g, &v| dp(&g, v))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Orientation {
    pub literal: Literal,
    pub main_clause: Clause,
    pub side_clauses: Vec<Clause>,
}

impl Orientation {
    /// C' = C \ {x}.
    pub fn main_remainder(&self) -> Clause {
        self.main_clause.without(self.literal)
    }

    /// D_i' = D_i \ {¬x}.
    pub fn side_remainders(&self) -> Vec<Clause> {
        self.side_clauses.iter().map(|d| d.without(!self.literal)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SingularProfile {
    pub variable: Variable,
    /// m, with vdeg = m + 1.
    pub degree: usize,
    /// The default orientation comes first; 1-singular variables have two.
    pub orientations: Vec<Orientation>,
}

impl SingularProfile {
    pub fn is_one_singular(&self) -> bool {
        self.degree == 1
    }

    pub fn default_orientation(&self) -> &Orientation {
        &self.orientations[0]
    }

    /// The orientation whose singular literal has polarity `positive`.
    pub fn orientation(&self, positive: bool) -> Option<&Orientation> {
        self.orientations
            .iter()
            .find(|o| o.literal.is_positive() == positive)
    }

    pub fn oriented(&self, choice: &Choice) -> Result<&Orientation> {
        match choice.get(&self.variable) {
            None => Ok(self.default_orientation()),
            Some(&positive) => self.orientation(positive).ok_or_else(|| {
                Error::precondition(format!(
                    "variable {} has no singular literal of the requested polarity",
                    self.variable
                ))
            }),
        }
    }
}

fn orientation_for(f: &ClauseSet, literal: Literal) -> Orientation {
    Orientation {
        literal,
        main_clause: f.clauses_with(literal).next().expect("ldeg 1").clone(),
        side_clauses: f.clauses_with(!literal).cloned().collect(),
    }
}

pub fn singular_profile(f: &ClauseSet, v: Variable) -> Option<SingularProfile> {
    let p = f.ldeg(v.positive());
    let n = f.ldeg(v.negative());
    if p.min(n) != 1 {
        return None;
    }
    let mut orientations = Vec::new();
    if p == 1 {
        orientations.push(orientation_for(f, v.positive()));
    }
    if n == 1 {
        orientations.push(orientation_for(f, v.negative()));
    }
    Some(SingularProfile {
        variable: v,
        degree: p + n - 1,
        orientations,
    })
}

pub fn singular_profiles(f: &ClauseSet) -> Vec<SingularProfile> {
    f.variables()
        .into_iter()
        .filter_map(|v| singular_profile(f, v))
        .collect()
}

pub fn is_singular(f: &ClauseSet, v: Variable) -> bool {
    f.ldeg(v.positive()).min(f.ldeg(v.negative())) == 1
}

pub fn varsing(f: &ClauseSet) -> Vec<Variable> {
    f.variables().into_iter().filter(|&v| is_singular(f, v)).collect()
}

pub fn var1sing(f: &ClauseSet) -> Vec<Variable> {
    f.variables()
        .into_iter()
        .filter(|&v| f.ldeg(v.positive()) == 1 && f.ldeg(v.negative()) == 1)
        .collect()
}

pub fn varnon1sing(f: &ClauseSet) -> Vec<Variable> {
    f.variables()
        .into_iter()
        .filter(|&v| is_singular(f, v) && f.vdeg(v) > 2)
        .collect()
}

pub fn is_nonsingular(f: &ClauseSet) -> bool {
    f.variables().into_iter().all(|v| !is_singular(f, v))
}

fn require_profile(f: &ClauseSet, v: Variable) -> Result<SingularProfile> {
    singular_profile(f, v).ok_or(Error::NotSingular(v))
}

/// Diagnostics for the three side conditions of a singular reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularReductionReport {
    pub variable: Variable,
    pub orientation: Orientation,
    /// Side clauses clashing with the main clause in more than one variable.
    pub multi_clash: Vec<Clause>,
    /// Pairs of side clauses with equal resolvents.
    pub equal_resolvents: Vec<(Clause, Clause)>,
    /// Resolvents already present among the clauses without the variable.
    pub existing_resolvents: Vec<Clause>,
}

impl SingularReductionReport {
    pub fn single_clash(&self) -> bool {
        self.multi_clash.is_empty()
    }

    pub fn distinct_resolvents(&self) -> bool {
        self.equal_resolvents.is_empty()
    }

    pub fn fresh_resolvents(&self) -> bool {
        self.existing_resolvents.is_empty()
    }

    pub fn all_pass(&self) -> bool {
        self.single_clash() && self.distinct_resolvents() && self.fresh_resolvents()
    }
}

pub fn check_singular_reduction(f: &ClauseSet, v: Variable) -> Result<SingularReductionReport> {
    let profile = require_profile(f, v)?;
    let o = profile.default_orientation().clone();
    let c = &o.main_clause;
    let mut multi_clash = Vec::new();
    let mut resolvents: Vec<(&Clause, Clause)> = Vec::new();
    for d in &o.side_clauses {
        match resolvent(c, d) {
            Ok(r) => resolvents.push((d, r)),
            Err(_) => multi_clash.push(d.clone()),
        }
    }
    let mut equal_resolvents = Vec::new();
    for (i, (d1, r1)) in resolvents.iter().enumerate() {
        for (d2, r2) in &resolvents[i + 1..] {
            if r1 == r2 {
                equal_resolvents.push(((*d1).clone(), (*d2).clone()));
            }
        }
    }
    let mut existing_resolvents: Vec<Clause> = resolvents
        .iter()
        .map(|(_, r)| r)
        .filter(|r| f.contains(r) && !r.contains_var(v))
        .cloned()
        .collect();
    existing_resolvents.dedup();
    Ok(SingularReductionReport {
        variable: v,
        orientation: o,
        multi_clash,
        equal_resolvents,
        existing_resolvents,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LedgerViolation {
    pub literal: Literal,
    pub expected: usize,
    pub actual: usize,
}

/// Exact literal-degree bookkeeping of one singular step: for `y` in the
/// main clause (other than the singular literal) the degree becomes
/// `ldeg(y) - 1 + p` with `p` the number of side clauses missing `y`;
/// literals of the reduced variable vanish; all others are unchanged.
pub fn check_degree_ledger(
    before: &ClauseSet,
    orientation: &Orientation,
    after: &ClauseSet,
) -> Vec<LedgerViolation> {
    let v = orientation.literal.var();
    let deg_before = before.degrees();
    let deg_after = after.degrees();
    let mut violations = Vec::new();
    for w in before.variables() {
        for y in [w.negative(), w.positive()] {
            let expected = if w == v {
                0
            } else if orientation.main_clause.contains(y) {
                let p = orientation
                    .side_clauses
                    .iter()
                    .filter(|d| !d.contains(y))
                    .count();
                deg_before.ldeg(y) - 1 + p
            } else {
                deg_before.ldeg(y)
            };
            let actual = deg_after.ldeg(y);
            if actual != expected {
                violations.push(LedgerViolation {
                    literal: y,
                    expected,
                    actual,
                });
            }
        }
    }
    violations
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TraceStep {
    pub variable: Variable,
    pub degree: usize,
    pub main_clause: Clause,
    pub side_clauses: Vec<Clause>,
    pub result_hash: String,
}

/// A replayable record of a reduction path. Serializes as the array of steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    pub initial: ClauseSet,
    pub steps: Vec<TraceStep>,
    pub final_set: ClauseSet,
}

impl ReductionTrace {
    pub fn new(initial: ClauseSet) -> Self {
        ReductionTrace {
            final_set: initial.clone(),
            initial,
            steps: Vec::new(),
        }
    }

    pub fn push(&mut self, step: TraceStep, result: ClauseSet) {
        self.steps.push(step);
        self.final_set = result;
    }

    pub fn variables(&self) -> Vec<Variable> {
        self.steps.iter().map(|s| s.variable).collect()
    }

    /// Re-applies every step and checks the recorded hashes.
    pub fn replay(&self) -> Result<ClauseSet> {
        let mut g = self.initial.clone();
        for step in &self.steps {
            g = dp(&g, step.variable);
            if dimacs_hash(&g) != step.result_hash {
                return Err(Error::verification(format!(
                    "trace step on variable {} does not reproduce its recorded result",
                    step.variable
                )));
            }
        }
        if g != self.final_set {
            return Err(Error::verification("trace does not reproduce its final clause-set"));
        }
        Ok(g)
    }
}

impl Serialize for ReductionTrace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.steps.serialize(s)
    }
}

/// One singular DP-reduction step. With an oracle, the step is checked:
/// side conditions, MU of the result, unchanged deficiency and the degree
/// ledger.
pub fn sdp_step(f: &MinUnsat, v: Variable, verify: Option<&Oracle>) -> Result<(MinUnsat, TraceStep)> {
    let profile = require_profile(f, v)?;
    let result = dp(f, v);
    if let Some(oracle) = verify {
        let report = check_singular_reduction(f, v)?;
        if !report.all_pass() {
            return Err(Error::verification(format!(
                "side conditions fail for singular variable {v}: {report:?}"
            )));
        }
        if result.deficiency() != f.deficiency() {
            return Err(Error::verification(format!(
                "deficiency changed from {} to {} reducing {v}",
                f.deficiency(),
                result.deficiency()
            )));
        }
        let violations = check_degree_ledger(f, profile.default_orientation(), &result);
        if !violations.is_empty() {
            return Err(Error::verification(format!(
                "degree ledger violated reducing {v}: {violations:?}"
            )));
        }
        if !oracle.classify_mu(&result)?.is_mu() {
            return Err(Error::verification(format!("result of reducing {v} is not MU")));
        }
    }
    let o = profile.default_orientation();
    let step = TraceStep {
        variable: v,
        degree: profile.degree,
        main_clause: o.main_clause.clone(),
        side_clauses: o.side_clauses.clone(),
        result_hash: dimacs_hash(&result),
    };
    Ok((MinUnsat::new_unchecked(result), step))
}

/// Applies the given variables in order; the error names the first step
/// whose variable is not singular.
pub fn sdp_sequence(
    f: &MinUnsat,
    vars: &[Variable],
    verify: Option<&Oracle>,
) -> Result<(MinUnsat, ReductionTrace)> {
    let mut trace = ReductionTrace::new(f.clause_set().clone());
    let mut g = f.clone();
    for &v in vars {
        let (next, step) = sdp_step(&g, v, verify)?;
        trace.push(step, next.clause_set().clone());
        g = next;
    }
    Ok((g, trace))
}

/// Reduces the lowest singular variable until none is left.
pub fn sdp_greedy(f: &MinUnsat, verify: Option<&Oracle>) -> Result<(MinUnsat, ReductionTrace)> {
    let mut trace = ReductionTrace::new(f.clause_set().clone());
    let mut g = f.clone();
    while let Some(&v) = varsing(&g).first() {
        let (next, step) = sdp_step(&g, v, verify)?;
        trace.push(step, next.clause_set().clone());
        g = next;
    }
    Ok((g, trace))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturateStep {
    pub result: ClauseSet,
    /// `C ∪ {x}` was already a clause, so the clause count dropped.
    pub merged: bool,
}

/// Adds `x` to `c` in `f`.
pub fn saturate_step(f: &ClauseSet, c: &Clause, x: Literal) -> Result<SaturateStep> {
    if !f.contains(c) {
        return Err(Error::precondition(format!("clause {c:?} is not in the clause-set")));
    }
    if c.contains_var(x.var()) {
        return Err(Error::precondition(format!(
            "variable {} already occurs in clause {c:?}",
            x.var()
        )));
    }
    if f.vdeg(x.var()) == 0 {
        return Err(Error::precondition(format!(
            "variable {} does not occur in the clause-set",
            x.var()
        )));
    }
    let weakened = c.with(x)?;
    let merged = f.contains(&weakened);
    Ok(SaturateStep {
        result: f.without_clause(c).with_clause(weakened),
        merged,
    })
}

/// A saturation in deterministic scan order: clauses in canonical order,
/// variables ascending, negative literal first. One pass suffices, since a
/// rejected addition stays rejected once other clauses have grown.
pub fn saturation(f: &MinUnsat, oracle: &Oracle) -> Result<MinUnsat> {
    let vars = f.variables();
    let mut clauses: Vec<Clause> = f.clauses().to_vec();
    for i in 0..clauses.len() {
        for &v in &vars {
            if clauses[i].contains_var(v) {
                continue;
            }
            for x in [v.negative(), v.positive()] {
                let candidate = clauses[i].with(x)?;
                let trial: ClauseSet = clauses
                    .iter()
                    .enumerate()
                    .map(|(j, d)| if j == i { candidate.clone() } else { d.clone() })
                    .collect();
                if trial.c() == clauses.len() && oracle.is_unsat(&trial)? {
                    clauses[i] = candidate;
                    break;
                }
            }
        }
    }
    Ok(MinUnsat::new_unchecked(ClauseSet::new(clauses)))
}

/// Adds the main-clause remainder to every side clause of `v`.
pub fn partial_saturate_for(f: &MinUnsat, v: Variable, choice: &Choice) -> Result<MinUnsat> {
    let profile = require_profile(f, v)?;
    let o = profile.oriented(choice)?;
    let remainder = o.main_remainder();
    let mut g = f.clause_set().clone();
    for d in &o.side_clauses {
        let widened = d.union(&remainder).map_err(|_| {
            Error::precondition(format!(
                "side clause {d:?} clashes with the main clause outside variable {v}"
            ))
        })?;
        g = g.without_clause(d).with_clause(widened);
    }
    Ok(MinUnsat::new_unchecked(g))
}

/// Diagnostics for the saturated-MU characterisation through a singular
/// variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturatedSingularReport {
    pub variable: Variable,
    pub orientation: Orientation,
    /// The reduction result is saturated.
    pub result_saturated: bool,
    /// C' and the intersection of the D_i'.
    pub main_remainder: Clause,
    pub side_intersection: Clause,
    /// Clauses without the variable that contain C'.
    pub covering_clauses: Vec<Clause>,
}

impl SaturatedSingularReport {
    pub fn intersection_matches(&self) -> bool {
        self.main_remainder == self.side_intersection
    }

    pub fn not_covered(&self) -> bool {
        self.covering_clauses.is_empty()
    }

    pub fn all_pass(&self) -> bool {
        self.result_saturated && self.intersection_matches() && self.not_covered()
    }
}

pub fn check_smu_singular(f: &MinUnsat, v: Variable, oracle: &Oracle) -> Result<SaturatedSingularReport> {
    let profile = require_profile(f, v)?;
    let o = profile.default_orientation().clone();
    let reduced = MinUnsat::new_unchecked(dp(f, v));
    let result_saturated = oracle.is_saturated_mu(&reduced)?.is_saturated();
    let main_remainder = o.main_remainder();
    let side_intersection = o
        .side_remainders()
        .into_iter()
        .reduce(|a, b| a.intersection(&b))
        .unwrap_or_else(Clause::empty);
    let covering_clauses = f
        .iter()
        .filter(|e| !e.contains_var(v) && main_remainder.is_subset_of(e))
        .cloned()
        .collect();
    Ok(SaturatedSingularReport {
        variable: v,
        orientation: o,
        result_saturated,
        main_remainder,
        side_intersection,
        covering_clauses,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EliminationStep {
    pub variable: Variable,
    pub clauses_before: usize,
    pub clauses_after: usize,
}

/// Bounded-growth variable elimination: apply `dp` on the lowest variable
/// whose elimination adds at most `k` clauses, rescan, and finish with
/// subsumption elimination.
pub fn bounded_dp_preprocess(f: &ClauseSet, k: usize) -> (ClauseSet, Vec<EliminationStep>) {
    let mut g = f.clone();
    let mut steps = Vec::new();
    'scan: loop {
        for v in g.variables() {
            let reduced = dp(&g, v);
            if reduced.c() <= g.c() + k {
                steps.push(EliminationStep {
                    variable: v,
                    clauses_before: g.c(),
                    clauses_after: reduced.c(),
                });
                g = reduced;
                continue 'scan;
            }
        }
        break;
    }
    (g.subsumption_eliminate(), steps)
}
