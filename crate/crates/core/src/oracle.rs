//! Exact decision procedures at desk scale: satisfiability, minimal
//! unsatisfiability, saturation, hitting/UHIT, renamable Horn, and the
//! reductions r₁ (unit propagation) and r₂ (failed literals).

use std::collections::BTreeMap;
use std::ops::Deref;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::clause::{Clause, ClauseSet, Literal, Variable};
use crate::dp::saturate_step;
use crate::error::{Error, Result};

pub const DEFAULT_VAR_BOUND: usize = 28;

/// A total assignment over the variables of a clause-set.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Assignment(BTreeMap<Variable, bool>);

impl Assignment {
    pub fn get(&self, v: Variable) -> Option<bool> {
        self.0.get(&v).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Variable, bool)> + '_ {
        self.0.iter().map(|(&v, &b)| (v, b))
    }

    pub fn satisfies_literal(&self, lit: Literal) -> bool {
        self.get(lit.var()) == Some(lit.is_positive())
    }

    pub fn satisfies(&self, f: &ClauseSet) -> bool {
        f.iter().all(|c| c.iter().any(|l| self.satisfies_literal(l)))
    }
}

/// Result of the minimal-unsatisfiability test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MuVerdict {
    Satisfiable(Assignment),
    /// Unsatisfiable, and still unsatisfiable without `removable`.
    UnsatNotMinimal { removable: Clause },
    MinimallyUnsatisfiable,
}

impl MuVerdict {
    pub fn is_mu(&self) -> bool {
        matches!(self, MuVerdict::MinimallyUnsatisfiable)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Saturation {
    Saturated,
    /// Adding `literal` to `clause` keeps the clause-set unsatisfiable.
    Weakenable { clause: Clause, literal: Literal },
}

impl Saturation {
    pub fn is_saturated(&self) -> bool {
        matches!(self, Saturation::Saturated)
    }
}

/// A clause-set known to be minimally unsatisfiable.
///
/// Built by [`Oracle::certify`], or produced by operations that preserve MU
/// (singular DP-reduction, saturation).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MinUnsat(ClauseSet);

impl MinUnsat {
    /// Wraps `f` without checking. The caller must know `f ∈ MU`.
    pub fn new_unchecked(f: ClauseSet) -> Self {
        MinUnsat(f)
    }

    pub fn clause_set(&self) -> &ClauseSet {
        &self.0
    }

    pub fn into_inner(self) -> ClauseSet {
        self.0
    }
}

impl Deref for MinUnsat {
    type Target = ClauseSet;

    fn deref(&self) -> &ClauseSet {
        &self.0
    }
}

impl AsRef<ClauseSet> for MinUnsat {
    fn as_ref(&self) -> &ClauseSet {
        &self.0
    }
}

/// DPLL-based oracle with a hard bound on the number of variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Oracle {
    var_bound: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle {
            var_bound: DEFAULT_VAR_BOUND,
        }
    }
}

impl Oracle {
    pub fn new(var_bound: usize) -> Self {
        Oracle { var_bound }
    }

    pub fn var_bound(&self) -> usize {
        self.var_bound
    }

    fn check_bound(&self, f: &ClauseSet) -> Result<()> {
        let n = f.n();
        if n > self.var_bound {
            return Err(Error::BoundExceeded {
                what: "number of variables",
                value: n,
                bound: self.var_bound,
            });
        }
        Ok(())
    }

    /// A satisfying total assignment over var(F), if one exists.
    pub fn is_satisfiable(&self, f: &ClauseSet) -> Result<Option<Assignment>> {
        self.check_bound(f)?;
        Ok(Dpll::new(f).solve())
    }

    pub fn is_unsat(&self, f: &ClauseSet) -> Result<bool> {
        Ok(self.is_satisfiable(f)?.is_none())
    }

    pub fn classify_mu(&self, f: &ClauseSet) -> Result<MuVerdict> {
        if let Some(a) = self.is_satisfiable(f)? {
            return Ok(MuVerdict::Satisfiable(a));
        }
        for c in f {
            if self.is_unsat(&f.without_clause(c))? {
                return Ok(MuVerdict::UnsatNotMinimal {
                    removable: c.clone(),
                });
            }
        }
        Ok(MuVerdict::MinimallyUnsatisfiable)
    }

    /// Checks `f ∈ MU` and wraps it.
    pub fn certify(&self, f: ClauseSet) -> Result<MinUnsat> {
        match self.classify_mu(&f)? {
            MuVerdict::MinimallyUnsatisfiable => Ok(MinUnsat(f)),
            MuVerdict::Satisfiable(_) => Err(Error::precondition("clause-set is satisfiable")),
            MuVerdict::UnsatNotMinimal { removable } => Err(Error::precondition(format!(
                "clause-set is unsatisfiable but not minimal (clause {removable:?} is removable)"
            ))),
        }
    }

    /// Scans clauses in canonical order and, per clause, the candidate
    /// literals by ascending variable with the negative literal first.
    pub fn is_saturated_mu(&self, f: &MinUnsat) -> Result<Saturation> {
        let vars = f.variables();
        for c in f.iter() {
            for &v in &vars {
                if c.contains_var(v) {
                    continue;
                }
                for lit in [v.negative(), v.positive()] {
                    let step = saturate_step(f, c, lit)?;
                    if self.is_unsat(&step.result)? {
                        return Ok(Saturation::Weakenable {
                            clause: c.clone(),
                            literal: lit,
                        });
                    }
                }
            }
        }
        Ok(Saturation::Saturated)
    }

    /// Convenience: `f ∈ SMU`.
    pub fn is_smu(&self, f: &ClauseSet) -> Result<bool> {
        if !self.classify_mu(f)?.is_mu() {
            return Ok(false);
        }
        Ok(self
            .is_saturated_mu(&MinUnsat::new_unchecked(f.clone()))?
            .is_saturated())
    }
}

/// Plain DPLL: unit propagation, lowest variable first, `false` before `true`.
struct Dpll {
    vars: Vec<Variable>,
    clauses: Vec<Vec<u32>>,
    value: Vec<u8>,
    trail: Vec<usize>,
}

const UNSET: u8 = 2;

impl Dpll {
    fn new(f: &ClauseSet) -> Self {
        let vars = f.variables();
        let index: BTreeMap<Variable, u32> = vars
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i as u32))
            .collect();
        let clauses = f
            .iter()
            .map(|c| {
                c.iter()
                    .map(|l| 2 * index[&l.var()] + u32::from(l.is_positive()))
                    .collect()
            })
            .collect();
        Dpll {
            value: vec![UNSET; vars.len()],
            vars,
            clauses,
            trail: Vec::new(),
        }
    }

    fn solve(mut self) -> Option<Assignment> {
        if !self.search() {
            return None;
        }
        Some(Assignment(
            self.vars
                .iter()
                .zip(&self.value)
                .map(|(&v, &b)| (v, b == 1))
                .collect(),
        ))
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().unwrap();
            self.value[v] = UNSET;
        }
    }

    fn propagate(&mut self) -> bool {
        loop {
            let mut changed = false;
            for ci in 0..self.clauses.len() {
                let mut open = None;
                let mut open_count = 0;
                let mut satisfied = false;
                for &l in &self.clauses[ci] {
                    let val = self.value[(l >> 1) as usize];
                    if val == UNSET {
                        open_count += 1;
                        open = Some(l);
                    } else if val == (l & 1) as u8 {
                        satisfied = true;
                        break;
                    }
                }
                if satisfied {
                    continue;
                }
                match (open_count, open) {
                    (0, _) => return false,
                    (1, Some(l)) => {
                        let v = (l >> 1) as usize;
                        self.value[v] = (l & 1) as u8;
                        self.trail.push(v);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn search(&mut self) -> bool {
        let mark = self.trail.len();
        if !self.propagate() {
            self.undo(mark);
            return false;
        }
        let Some(v) = self.value.iter().position(|&b| b == UNSET) else {
            return true;
        };
        for b in [0u8, 1u8] {
            let before = self.trail.len();
            self.value[v] = b;
            self.trail.push(v);
            if self.search() {
                return true;
            }
            self.undo(before);
        }
        self.undo(mark);
        false
    }
}

/// Hitting and Σ 2^{−|C|} = 1, evaluated exactly by binary carrying.
pub fn is_uhit(f: &ClauseSet) -> bool {
    f.is_hitting() && weight_is_one(f)
}

fn weight_is_one(f: &ClauseSet) -> bool {
    let max_len = f.iter().map(Clause::len).max().unwrap_or(0);
    let mut count = vec![0usize; max_len + 1];
    for c in f {
        count[c.len()] += 1;
    }
    let mut carry = 0usize;
    for len in (1..=max_len).rev() {
        let total = count[len] + carry;
        if total % 2 == 1 {
            return false;
        }
        carry = total / 2;
    }
    count[0] + carry == 1
}

pub fn is_horn(f: &ClauseSet) -> bool {
    f.iter()
        .all(|c| c.iter().filter(|l| l.is_positive()).count() <= 1)
}

/// Flips polarities of `flip` and returns the renamed clause-set.
pub fn rename(f: &ClauseSet, flip: &[Variable]) -> ClauseSet {
    f.map_literals(|l| if flip.contains(&l.var()) { !l } else { l })
        .expect("flipping polarities keeps clauses clash-free")
}

/// A set of variables whose flipping makes `f` Horn, decided through a 2-SAT
/// encoding (for every pair of literals in a clause, not both positive after
/// flipping).
pub fn is_renamable_horn(f: &ClauseSet) -> Option<Vec<Variable>> {
    if is_horn(f) {
        return Some(Vec::new());
    }
    let vars = f.variables();
    let index: BTreeMap<Variable, usize> = vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    // node 2i + 1: "flip v_i", node 2i: "keep v_i"
    let mut graph = DiGraph::<(), ()>::new();
    let nodes: Vec<_> = (0..2 * vars.len()).map(|_| graph.add_node(())).collect();
    // positive after flipping: positive literal kept, or negative literal flipped
    let positive_node = |l: Literal| 2 * index[&l.var()] + usize::from(!l.is_positive());
    for c in f {
        let lits = c.literals();
        for (i, &a) in lits.iter().enumerate() {
            for &b in &lits[i + 1..] {
                let pa = positive_node(a);
                let pb = positive_node(b);
                graph.add_edge(nodes[pa], nodes[pb ^ 1], ());
                graph.add_edge(nodes[pb], nodes[pa ^ 1], ());
            }
        }
    }
    let mut component = vec![0usize; nodes.len()];
    for (ci, scc) in tarjan_scc(&graph).into_iter().enumerate() {
        for n in scc {
            component[n.index()] = ci;
        }
    }
    let mut flip = Vec::new();
    for (i, &v) in vars.iter().enumerate() {
        let (keep, flipped) = (component[2 * i], component[2 * i + 1]);
        if keep == flipped {
            return None;
        }
        // tarjan_scc lists components in reverse topological order
        if flipped < keep {
            flip.push(v);
        }
    }
    debug_assert!(is_horn(&rename(f, &flip)));
    Some(flip)
}

/// Unit-clause propagation r₁.
pub fn r1(f: &ClauseSet) -> ClauseSet {
    unit_propagate(f, |_| 0)
}

/// r₁ with a caller-chosen unit: `choose` receives the current unit literals
/// in canonical order and returns an index into them.
pub fn unit_propagate(f: &ClauseSet, mut choose: impl FnMut(&[Literal]) -> usize) -> ClauseSet {
    let mut g = f.clone();
    loop {
        if g.contains_empty() {
            return ClauseSet::bottom();
        }
        let units: Vec<Literal> = g
            .iter()
            .filter(|c| c.len() == 1)
            .map(|c| c.literals()[0])
            .collect();
        if units.is_empty() {
            return g;
        }
        let pick = choose(&units).min(units.len() - 1);
        g = g.assign(units[pick]);
    }
}

/// Failed-literal reduction r₂. Literals are scanned by ascending variable,
/// positive literal first; the scan restarts after every assignment.
pub fn r2(f: &ClauseSet) -> ClauseSet {
    let mut g = f.clone();
    'outer: loop {
        for v in g.variables() {
            for x in [v.positive(), v.negative()] {
                if r1(&g.assign(!x)) == ClauseSet::bottom() {
                    g = g.assign(x);
                    continue 'outer;
                }
            }
        }
        return g;
    }
}
