//! Clause-set isomorphism, canonical forms and confluence classification.
//!
//! Canonical forms come from colour refinement on the literal/clause
//! incidence structure followed by individualization of literals. Every
//! discrete leaf induces a relabeling; the lexicographically least relabeled
//! clause-set is the canonical form. Whenever a leaf reproduces a previously
//! seen certificate, the two paths differ by an automorphism and the search
//! jumps back to their common ancestor.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Serialize, Serializer};
use serde_json::json;

use crate::clause::{Clause, ClauseSet, Literal, Variable};
use crate::dp::{
    dp, sdp_set, singular_profiles, singularity_index, varsing, SingularTuple,
};
use crate::error::{Error, Result};
use crate::oracle::{MinUnsat, Oracle};

pub const DEFAULT_ISO_BOUND: usize = 16;

/// A complementation-preserving literal bijection.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IsoWitness {
    map: BTreeMap<Literal, Literal>,
}

impl IsoWitness {
    /// Builds a witness from images of the positive literals.
    pub fn from_variables(images: impl IntoIterator<Item = (Variable, Literal)>) -> Self {
        let mut map = BTreeMap::new();
        for (v, img) in images {
            map.insert(v.positive(), img);
            map.insert(v.negative(), !img);
        }
        IsoWitness { map }
    }

    pub fn identity(f: &ClauseSet) -> Self {
        Self::from_variables(f.variables().into_iter().map(|v| (v, v.positive())))
    }

    pub fn get(&self, x: Literal) -> Option<Literal> {
        self.map.get(&x).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Literal, Literal)> + '_ {
        self.map.iter().map(|(&a, &b)| (a, b))
    }

    pub fn apply(&self, f: &ClauseSet) -> Result<ClauseSet> {
        let mut missing = None;
        let g = f.map_literals(|x| match self.map.get(&x) {
            Some(&y) => y,
            None => {
                missing = Some(x);
                x
            }
        })?;
        match missing {
            Some(x) => Err(Error::precondition(format!("witness does not map literal {x}"))),
            None => Ok(g),
        }
    }

    /// Bijective, complement-preserving, and maps `f` exactly onto `g`.
    pub fn verifies(&self, f: &ClauseSet, g: &ClauseSet) -> bool {
        let complement_ok = self.map.iter().all(|(&x, &y)| self.map.get(&!x) == Some(&!y));
        let mut images: Vec<Literal> = self.map.values().copied().collect();
        images.sort_unstable();
        images.dedup();
        complement_ok && images.len() == self.map.len() && self.apply(f).is_ok_and(|h| &h == g)
    }

    fn then(&self, next: &IsoWitness) -> IsoWitness {
        IsoWitness {
            map: self.map.iter().map(|(&a, b)| (a, next.map[b])).collect(),
        }
    }

    fn inverse(&self) -> IsoWitness {
        IsoWitness {
            map: self.map.iter().map(|(&a, &b)| (b, a)).collect(),
        }
    }
}

impl Serialize for IsoWitness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<(Literal, Literal)> = self.map.iter().filter(|(a, _)| a.is_positive()).map(|(&a, &b)| (a, b)).collect();
        pairs.serialize(s)
    }
}

/// Dense incidence structure: literal `2i + p` for the `i`-th variable.
struct Structure {
    vars: Vec<Variable>,
    clauses: Vec<Vec<usize>>,
    occurrences: Vec<Vec<usize>>,
}

impl Structure {
    fn new(f: &ClauseSet) -> Self {
        let vars = f.variables();
        let index: BTreeMap<Variable, usize> = vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let clauses: Vec<Vec<usize>> = f
            .iter()
            .map(|c| c.iter().map(|l| 2 * index[&l.var()] + usize::from(l.is_positive())).collect())
            .collect();
        let mut occurrences = vec![Vec::new(); 2 * vars.len()];
        for (ci, c) in clauses.iter().enumerate() {
            for &l in c {
                occurrences[l].push(ci);
            }
        }
        Structure {
            vars,
            clauses,
            occurrences,
        }
    }

    fn literal(&self, l: usize) -> Literal {
        Literal::new(self.vars[l / 2], l % 2 == 1)
    }

    /// Refines the literal colouring to a stable one.
    fn refine(&self, colours: &mut Vec<usize>) {
        let mut clause_colours = vec![0usize; self.clauses.len()];
        let mut classes = count_classes(colours);
        loop {
            let sigs: Vec<(usize, Vec<usize>)> = self
                .clauses
                .iter()
                .enumerate()
                .map(|(ci, c)| {
                    let mut m: Vec<usize> = c.iter().map(|&l| colours[l]).collect();
                    m.sort_unstable();
                    (clause_colours[ci], m)
                })
                .collect();
            clause_colours = rank(&sigs);
            let sigs: Vec<(usize, usize, Vec<usize>)> = (0..colours.len())
                .map(|l| {
                    let mut m: Vec<usize> = self.occurrences[l].iter().map(|&ci| clause_colours[ci]).collect();
                    m.sort_unstable();
                    (colours[l], colours[l ^ 1], m)
                })
                .collect();
            *colours = rank(&sigs);
            let now = count_classes(colours);
            if now == classes {
                return;
            }
            classes = now;
        }
    }

    /// Relabeling of a discrete colouring: literals in colour order, each
    /// fresh variable taking the next index.
    fn labeling(&self, colours: &[usize]) -> Vec<Literal> {
        let mut order: Vec<usize> = (0..colours.len()).collect();
        order.sort_by_key(|&l| colours[l]);
        let mut label = vec![None; colours.len()];
        let mut next = 1;
        for l in order {
            if label[l].is_none() {
                let v = Variable(next);
                next += 1;
                label[l] = Some(v.positive());
                label[l ^ 1] = Some(v.negative());
            }
        }
        label.into_iter().map(|x| x.expect("every literal labelled")).collect()
    }

    fn certificate(&self, label: &[Literal]) -> ClauseSet {
        self.clauses
            .iter()
            .map(|c| Clause::new(c.iter().map(|&l| label[l])).expect("relabeling keeps clauses clash-free"))
            .collect()
    }
}

fn rank<T: Ord + Clone>(sigs: &[T]) -> Vec<usize> {
    let mut sorted: Vec<T> = sigs.to_vec();
    sorted.sort();
    sorted.dedup();
    sigs.iter().map(|s| sorted.binary_search(s).expect("present")).collect()
}

fn count_classes(colours: &[usize]) -> usize {
    let mut c = colours.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

struct Leaf {
    certificate: ClauseSet,
    label: Vec<Literal>,
    path: Vec<usize>,
}

struct Search<'a> {
    s: &'a Structure,
    first: Option<Leaf>,
    best: Option<Leaf>,
}

impl Search<'_> {
    /// Returns `Some(depth)` to abandon all nodes deeper than `depth`.
    fn explore(&mut self, colours: Vec<usize>, path: &mut Vec<usize>) -> Option<usize> {
        let mut sizes = BTreeMap::new();
        for &c in &colours {
            *sizes.entry(c).or_insert(0usize) += 1;
        }
        let target = sizes.iter().find(|(_, &n)| n > 1).map(|(&c, _)| c);
        let Some(target) = target else {
            return self.leaf(&colours, path);
        };
        let cell: Vec<usize> = (0..colours.len()).filter(|&l| colours[l] == target).collect();
        for l in cell {
            let mut child: Vec<usize> = colours.iter().map(|&c| 2 * c + 1).collect();
            child[l] = 2 * colours[l];
            self.s.refine(&mut child);
            path.push(l);
            let jump = self.explore(child, path);
            path.pop();
            if let Some(depth) = jump {
                if depth < path.len() {
                    return Some(depth);
                }
            }
        }
        None
    }

    fn leaf(&mut self, colours: &[usize], path: &[usize]) -> Option<usize> {
        let label = self.s.labeling(colours);
        let certificate = self.s.certificate(&label);
        let common = |other: &Leaf| other.path.iter().zip(path).take_while(|(a, b)| a == b).count();
        if let Some(first) = &self.first {
            if first.certificate == certificate {
                return Some(common(first));
            }
        }
        if let Some(best) = &self.best {
            if best.certificate == certificate {
                return Some(common(best));
            }
        }
        let leaf = Leaf {
            certificate,
            label,
            path: path.to_vec(),
        };
        if self.first.is_none() {
            self.first = Some(Leaf {
                certificate: leaf.certificate.clone(),
                label: Vec::new(),
                path: leaf.path.clone(),
            });
        }
        if self.best.as_ref().is_none_or(|b| leaf.certificate < b.certificate) {
            self.best = Some(leaf);
        }
        None
    }
}

/// Canonical representative together with the relabeling that produces it.
pub fn canonical_labeling(f: &ClauseSet, bound: usize) -> Result<(ClauseSet, IsoWitness)> {
    let n = f.n();
    if n > bound {
        return Err(Error::BoundExceeded {
            what: "number of variables for isomorphism",
            value: n,
            bound,
        });
    }
    let s = Structure::new(f);
    let mut colours = vec![0usize; 2 * n];
    s.refine(&mut colours);
    let mut search = Search {
        s: &s,
        first: None,
        best: None,
    };
    search.explore(colours, &mut Vec::new());
    let Some(best) = search.best else {
        // no literals at all: ⊤ or {⊥}
        return Ok((f.clone(), IsoWitness::default()));
    };
    let witness = IsoWitness {
        map: (0..2 * n).map(|l| (s.literal(l), best.label[l])).collect(),
    };
    Ok((best.certificate, witness))
}

pub fn canonical_form(f: &ClauseSet, bound: usize) -> Result<ClauseSet> {
    canonical_labeling(f, bound).map(|(c, _)| c)
}

fn cheap_invariants(f: &ClauseSet) -> (usize, usize, Vec<usize>) {
    let mut lengths: Vec<usize> = f.iter().map(Clause::len).collect();
    lengths.sort_unstable();
    (f.n(), f.c(), lengths)
}

/// A verified isomorphism from `f` onto `g`, if one exists.
pub fn are_isomorphic(f: &ClauseSet, g: &ClauseSet, bound: usize) -> Result<Option<IsoWitness>> {
    if cheap_invariants(f) != cheap_invariants(g) {
        return Ok(None);
    }
    let (cf, lf) = canonical_labeling(f, bound)?;
    let (cg, lg) = canonical_labeling(g, bound)?;
    if cf != cg {
        return Ok(None);
    }
    let witness = lf.then(&lg.inverse());
    if !witness.verifies(f, g) {
        return Err(Error::verification("canonical labelings do not compose to an isomorphism"));
    }
    Ok(Some(witness))
}

/// A random renaming of the variables onto `1..=n` with random flips.
pub fn random_relabel(f: &ClauseSet, rng: &mut impl Rng) -> (ClauseSet, IsoWitness) {
    let vars = f.variables();
    let mut targets: Vec<u32> = (1..=vars.len() as u32).collect();
    targets.shuffle(rng);
    let witness = IsoWitness::from_variables(
        vars.iter()
            .zip(targets)
            .map(|(&v, t)| (v, Literal::new(Variable(t), rng.gen_bool(0.5)))),
    );
    let g = witness.apply(f).expect("witness covers all variables");
    (g, witness)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Confluent,
    ConfluentModIso,
    Divergent,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfluenceReport {
    pub classification: Classification,
    pub results: Vec<MinUnsat>,
    /// Isomorphisms from the first result onto each later one.
    pub witnesses: Vec<IsoWitness>,
    /// Indices of two non-isomorphic results.
    pub counterexample_pair: Option<(usize, usize)>,
    pub eventually_saturated: bool,
}

impl ConfluenceReport {
    pub fn result_count(&self) -> usize {
        self.results.len()
    }

    pub fn n_after_reduction(&self) -> Option<usize> {
        self.results.first().map(|r| r.n())
    }

    pub fn is_cfli(&self) -> bool {
        self.classification != Classification::Divergent
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut doc = json!({
            "classification": self.classification,
            "resultCount": self.result_count(),
            "nAfterReduction": self.n_after_reduction(),
            "eventuallySaturated": self.eventually_saturated,
        });
        match self.counterexample_pair {
            Some((i, j)) => doc["counterexamplePair"] = json!([i, j]),
            None => doc["witnesses"] = json!(self.witnesses),
        }
        doc
    }
}

pub fn classify_confluence(f: &MinUnsat, oracle: &Oracle, limit: usize, bound: usize) -> Result<ConfluenceReport> {
    let results: Vec<MinUnsat> = sdp_set(f, limit)?.into_iter().map(|r| r.result).collect();
    let mut witnesses = Vec::new();
    let mut counterexample_pair = None;
    for (i, r) in results.iter().enumerate().skip(1) {
        match are_isomorphic(&results[0], r, bound)? {
            Some(w) => witnesses.push(w),
            None => {
                counterexample_pair = Some((0, i));
                witnesses.clear();
                break;
            }
        }
    }
    let classification = match (results.len(), counterexample_pair) {
        (1, _) => Classification::Confluent,
        (_, None) => Classification::ConfluentModIso,
        _ => Classification::Divergent,
    };
    let mut eventually_saturated = true;
    for r in &results {
        if !oracle.is_saturated_mu(r)?.is_saturated() {
            eventually_saturated = false;
            break;
        }
    }
    Ok(ConfluenceReport {
        classification,
        results,
        witnesses,
        counterexample_pair,
        eventually_saturated,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivergenceDescent {
    pub tuple: SingularTuple,
    pub reduced: MinUnsat,
    pub report: ConfluenceReport,
}

/// Reduces a non-CFLI clause-set along singular steps that keep it non-CFLI
/// until its singularity index is 1.
pub fn check_divergence_descent(f: &MinUnsat, oracle: &Oracle, limit: usize, bound: usize) -> Result<DivergenceDescent> {
    let mut report = classify_confluence(f, oracle, limit, bound)?;
    if report.is_cfli() {
        return Err(Error::precondition("clause-set is confluent modulo isomorphism"));
    }
    let mut g = f.clone();
    let mut tuple = SingularTuple::empty();
    while singularity_index(&g) > 1 {
        let mut next = None;
        for v in varsing(&g) {
            let h = MinUnsat::new_unchecked(dp(&g, v));
            let r = classify_confluence(&h, oracle, limit, bound)?;
            if !r.is_cfli() {
                next = Some((v, h, r));
                break;
            }
        }
        let Some((v, h, r)) = next else {
            return Err(Error::verification(
                "no singular step keeps the clause-set divergent",
            ));
        };
        tuple.variables.push(v);
        tuple.degrees.push(g.vdeg(v) - 1);
        g = h;
        report = r;
    }
    Ok(DivergenceDescent {
        tuple,
        reduced: g,
        report,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Index1Structure {
    pub singular: Vec<Variable>,
    pub common_main_clause: Clause,
    pub classification: Classification,
    pub eventually_saturated: bool,
    /// Renaming between the two reduction results, when eventually saturated.
    pub renaming: Option<IsoWitness>,
}

/// Structure of a clause-set with singularity index 1 and at least two
/// singular variables. Violations of the expected structure are reported as
/// verification errors.
pub fn check_index1_structure(f: &MinUnsat, oracle: &Oracle, limit: usize, bound: usize) -> Result<Index1Structure> {
    let singular = varsing(f);
    if singularity_index(f) != 1 || singular.len() < 2 {
        return Err(Error::precondition(
            "requires singularity index 1 and at least two singular variables",
        ));
    }
    let profiles = singular_profiles(f);
    if profiles.iter().any(|p| p.is_one_singular()) {
        return Err(Error::verification("a singular variable is 1-singular"));
    }
    let main = profiles[0].default_orientation().main_clause.clone();
    if profiles.iter().any(|p| p.default_orientation().main_clause != main) {
        return Err(Error::verification("singular variables have different main clauses"));
    }
    let report = classify_confluence(f, oracle, limit, bound)?;
    let mut renaming = None;
    if report.eventually_saturated {
        if singular.len() != 2 {
            return Err(Error::verification(format!(
                "eventually saturated with {} singular variables",
                singular.len()
            )));
        }
        let x = profiles[0].default_orientation().literal;
        let y = profiles[1].default_orientation().literal;
        let rest = main.without(x).without(y);
        for p in &profiles {
            if p.default_orientation().side_clauses.iter().any(|d| !rest.is_subset_of(d)) {
                return Err(Error::verification("side clause misses part of the main clause"));
            }
        }
        let fx = dp(f, x.var());
        let fy = dp(f, y.var());
        let w = IsoWitness::from_variables(
            fx.variables()
                .into_iter()
                .map(|v| (v, if v == y.var() { if y.is_positive() { !x } else { x } } else { v.positive() })),
        );
        if !w.verifies(&fx, &fy) {
            return Err(Error::verification("renaming does not map one reduction result onto the other"));
        }
        renaming = Some(w);
    }
    Ok(Index1Structure {
        singular,
        common_main_clause: main,
        classification: report.classification,
        eventually_saturated: report.eventually_saturated,
        renaming,
    })
}
