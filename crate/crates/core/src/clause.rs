//! Literals, clauses and clause-sets.
//!
//! Variables are positive integers. A literal is stored as the code
//! `2 * var + polarity` (negative = 0, positive = 1), so the natural order on
//! codes sorts by variable first and puts the negative literal before the
//! positive one. Clauses and clause-sets are kept as sorted, duplicate-free
//! vectors, which makes the derived `Ord` the canonical emission order and
//! makes equality plain set equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Not;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Variable(pub u32);

impl Variable {
    pub fn index(self) -> u32 {
        self.0
    }

    pub fn positive(self) -> Literal {
        Literal::new(self, true)
    }

    pub fn negative(self) -> Literal {
        Literal::new(self, false)
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal(u32);

impl Literal {
    pub fn new(var: Variable, positive: bool) -> Self {
        assert!(var.0 >= 1, "variables are positive integers");
        Literal(var.0 * 2 + u32::from(positive))
    }

    pub fn from_dimacs(x: i32) -> Option<Self> {
        match x {
            0 => None,
            x => Some(Literal::new(Variable(x.unsigned_abs()), x > 0)),
        }
    }

    pub fn to_dimacs(self) -> i32 {
        let v = self.var().0 as i32;
        if self.is_positive() {
            v
        } else {
            -v
        }
    }

    pub fn var(self) -> Variable {
        Variable(self.0 >> 1)
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn code(self) -> u32 {
        self.0
    }
}

impl Not for Literal {
    type Output = Literal;

    fn not(self) -> Literal {
        Literal(self.0 ^ 1)
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

impl Serialize for Literal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i32(self.to_dimacs())
    }
}

impl<'de> Deserialize<'de> for Literal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let x = i32::deserialize(d)?;
        Literal::from_dimacs(x).ok_or_else(|| serde::de::Error::custom("literal 0"))
    }
}

/// A finite, clash-free set of literals.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Clause(Vec<Literal>);

impl Clause {
    pub fn empty() -> Self {
        Clause(Vec::new())
    }

    pub fn new(literals: impl IntoIterator<Item = Literal>) -> Result<Self> {
        let mut lits: Vec<Literal> = literals.into_iter().collect();
        lits.sort_unstable();
        lits.dedup();
        if let Some(w) = lits.windows(2).find(|w| w[0].var() == w[1].var()) {
            return Err(Error::Clash(w[0].var().0));
        }
        Ok(Clause(lits))
    }

    pub fn from_dimacs(lits: &[i32]) -> Result<Self> {
        let mut out = Vec::with_capacity(lits.len());
        for &x in lits {
            out.push(Literal::from_dimacs(x).ok_or(Error::Parse {
                line: 0,
                message: "literal 0 inside a clause".into(),
            })?);
        }
        Clause::new(out)
    }

    pub fn literals(&self) -> &[Literal] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = Literal> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, lit: Literal) -> bool {
        self.0.binary_search(&lit).is_ok()
    }

    pub fn contains_var(&self, v: Variable) -> bool {
        self.contains(v.positive()) || self.contains(v.negative())
    }

    /// The literal of `v` occurring in this clause, if any.
    pub fn literal_of(&self, v: Variable) -> Option<Literal> {
        [v.positive(), v.negative()].into_iter().find(|&l| self.contains(l))
    }

    pub fn variables(&self) -> impl Iterator<Item = Variable> + '_ {
        self.0.iter().map(|l| l.var())
    }

    /// The literals `x` of this clause with `¬x` in `other`.
    pub fn clashing_literals<'a>(&'a self, other: &'a Clause) -> impl Iterator<Item = Literal> + 'a {
        self.iter().filter(move |&x| other.contains(!x))
    }

    pub fn clash_count(&self, other: &Clause) -> usize {
        self.clashing_literals(other).count()
    }

    pub fn is_subset_of(&self, other: &Clause) -> bool {
        self.len() <= other.len() && self.iter().all(|l| other.contains(l))
    }

    pub fn with(&self, lit: Literal) -> Result<Clause> {
        Clause::new(self.iter().chain(std::iter::once(lit)))
    }

    pub fn without(&self, lit: Literal) -> Clause {
        Clause(self.iter().filter(|&l| l != lit).collect())
    }

    pub fn union(&self, other: &Clause) -> Result<Clause> {
        Clause::new(self.iter().chain(other.iter()))
    }

    pub fn intersection(&self, other: &Clause) -> Clause {
        Clause(self.iter().filter(|&l| other.contains(l)).collect())
    }

    pub fn difference(&self, other: &Clause) -> Clause {
        Clause(self.iter().filter(|&l| !other.contains(l)).collect())
    }

    pub fn to_dimacs(&self) -> Vec<i32> {
        self.iter().map(Literal::to_dimacs).collect()
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for Clause {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_dimacs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Clause {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let lits = Vec::<i32>::deserialize(d)?;
        Clause::from_dimacs(&lits).map_err(serde::de::Error::custom)
    }
}

/// The resolvent of two clauses clashing in exactly one literal.
pub fn resolvent(c: &Clause, d: &Clause) -> Result<Clause> {
    let clashes: Vec<Literal> = c.clashing_literals(d).collect();
    if clashes.len() != 1 {
        return Err(Error::NotResolvable {
            clashes: clashes.len(),
        });
    }
    let x = clashes[0];
    Ok(Clause(
        c.iter()
            .filter(|&l| l != x)
            .chain(d.iter().filter(|&l| l != !x))
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect(),
    ))
}

/// A finite set of clauses.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ClauseSet(Vec<Clause>);

impl ClauseSet {
    pub fn new(clauses: impl IntoIterator<Item = Clause>) -> Self {
        let mut cs: Vec<Clause> = clauses.into_iter().collect();
        cs.sort_unstable();
        cs.dedup();
        ClauseSet(cs)
    }

    /// The empty clause-set ⊤.
    pub fn top() -> Self {
        ClauseSet(Vec::new())
    }

    /// The clause-set {⊥}.
    pub fn bottom() -> Self {
        ClauseSet(vec![Clause::empty()])
    }

    pub fn from_dimacs(clauses: &[&[i32]]) -> Result<Self> {
        clauses
            .iter()
            .map(|c| Clause::from_dimacs(c))
            .collect::<Result<Vec<_>>>()
            .map(ClauseSet::new)
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Clause> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of clauses, c(F).
    pub fn c(&self) -> usize {
        self.0.len()
    }

    /// Number of occurring variables, n(F).
    pub fn n(&self) -> usize {
        self.variables().len()
    }

    /// Deficiency c(F) − n(F); negative values are allowed.
    pub fn deficiency(&self) -> i64 {
        self.c() as i64 - self.n() as i64
    }

    pub fn variables(&self) -> Vec<Variable> {
        let mut vs: Vec<Variable> = self.0.iter().flat_map(|c| c.variables()).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    pub fn max_variable(&self) -> Option<Variable> {
        self.0.iter().flat_map(|c| c.variables()).max()
    }

    pub fn contains(&self, c: &Clause) -> bool {
        self.0.binary_search(c).is_ok()
    }

    pub fn contains_empty(&self) -> bool {
        self.0.first().is_some_and(Clause::is_empty)
    }

    pub fn ldeg(&self, lit: Literal) -> usize {
        self.0.iter().filter(|c| c.contains(lit)).count()
    }

    pub fn vdeg(&self, v: Variable) -> usize {
        self.ldeg(v.positive()) + self.ldeg(v.negative())
    }

    /// Literal-degree table over all occurring literals.
    pub fn degrees(&self) -> Degrees {
        let mut table = BTreeMap::new();
        for c in &self.0 {
            for l in c.iter() {
                *table.entry(l).or_insert(0) += 1;
            }
        }
        Degrees(table)
    }

    pub fn clauses_with(&self, lit: Literal) -> impl Iterator<Item = &Clause> + '_ {
        self.0.iter().filter(move |c| c.contains(lit))
    }

    pub fn with_clause(&self, c: Clause) -> ClauseSet {
        ClauseSet::new(self.0.iter().cloned().chain(std::iter::once(c)))
    }

    pub fn without_clause(&self, c: &Clause) -> ClauseSet {
        ClauseSet(self.0.iter().filter(|d| *d != c).cloned().collect())
    }

    /// True iff every two different clauses clash.
    pub fn is_hitting(&self) -> bool {
        self.0
            .iter()
            .enumerate()
            .all(|(i, c)| self.0[i + 1..].iter().all(|d| c.clash_count(d) > 0))
    }

    /// The ⊆-minimal clauses.
    pub fn subsumption_eliminate(&self) -> ClauseSet {
        ClauseSet(
            self.0
                .iter()
                .filter(|c| !self.0.iter().any(|d| d != *c && d.is_subset_of(c)))
                .cloned()
                .collect(),
        )
    }

    /// Whether every clause of `self` has a superset in `other`.
    pub fn refines(&self, other: &ClauseSet) -> RefinementVerdict {
        RefinementVerdict {
            counterexample: self
                .0
                .iter()
                .find(|c| !other.0.iter().any(|d| c.is_subset_of(d)))
                .cloned(),
        }
    }

    /// Sets `lit` to true: drops satisfied clauses and removes `¬lit`.
    pub fn assign(&self, lit: Literal) -> ClauseSet {
        ClauseSet::new(
            self.0
                .iter()
                .filter(|c| !c.contains(lit))
                .map(|c| c.without(!lit)),
        )
    }

    /// Applies a literal substitution clause by clause.
    pub fn map_literals(&self, mut f: impl FnMut(Literal) -> Literal) -> Result<ClauseSet> {
        self.0
            .iter()
            .map(|c| Clause::new(c.iter().map(&mut f)))
            .collect::<Result<Vec<_>>>()
            .map(ClauseSet::new)
    }
}

impl fmt::Debug for ClauseSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

impl FromIterator<Clause> for ClauseSet {
    fn from_iter<I: IntoIterator<Item = Clause>>(iter: I) -> Self {
        ClauseSet::new(iter)
    }
}

impl<'a> IntoIterator for &'a ClauseSet {
    type Item = &'a Clause;
    type IntoIter = std::slice::Iter<'a, Clause>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Degrees(BTreeMap<Literal, usize>);

impl Degrees {
    pub fn ldeg(&self, lit: Literal) -> usize {
        self.0.get(&lit).copied().unwrap_or(0)
    }

    pub fn vdeg(&self, v: Variable) -> usize {
        self.ldeg(v.positive()) + self.ldeg(v.negative())
    }

    pub fn iter(&self) -> impl Iterator<Item = (Literal, usize)> + '_ {
        self.0.iter().map(|(&l, &d)| (l, d))
    }
}

/// Outcome of the refinement test `F ⊑ G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinementVerdict {
    /// A clause of `F` without a superset in `G`.
    pub counterexample: Option<Clause>,
}

impl RefinementVerdict {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[cfg(test)]
pub(crate) fn cls(clauses: &[&[i32]]) -> ClauseSet {
    ClauseSet::from_dimacs(clauses).unwrap()
}

#[cfg(test)]
pub(crate) fn cl(lits: &[i32]) -> Clause {
    Clause::from_dimacs(lits).unwrap()
}
