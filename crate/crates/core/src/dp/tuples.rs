//! Singular tuples, their permutations and the enumeration of sDP results.

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use super::{dp, is_singular, iterated_dp, sdp_step, var1sing, varsing, ReductionTrace};
use crate::clause::{ClauseSet, Variable};
use crate::error::{Error, Result};
use crate::oracle::MinUnsat;

pub const DEFAULT_ENUMERATION_LIMIT: usize = 100_000;

/// A tuple of variables, each singular after reducing its predecessors,
/// with the singularity degree at every step.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SingularTuple {
    pub variables: Vec<Variable>,
    pub degrees: Vec<usize>,
}

impl SingularTuple {
    pub fn empty() -> Self {
        SingularTuple {
            variables: Vec::new(),
            degrees: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }
}

/// The degree tuple of `vars`, or `None` if some step is not singular.
pub fn validate_tuple(f: &MinUnsat, vars: &[Variable]) -> Option<SingularTuple> {
    let mut g = f.clause_set().clone();
    let mut degrees = Vec::with_capacity(vars.len());
    for &v in vars {
        if !is_singular(&g, v) {
            return None;
        }
        degrees.push(g.vdeg(v) - 1);
        g = dp(&g, v);
    }
    Some(SingularTuple {
        variables: vars.to_vec(),
        degrees,
    })
}

fn require_valid(f: &MinUnsat, t: &SingularTuple) -> Result<()> {
    match validate_tuple(f, &t.variables) {
        Some(ref checked) if checked == t => Ok(()),
        _ => Err(Error::precondition(format!(
            "{:?} is not a singular tuple with degrees {:?}",
            t.variables, t.degrees
        ))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExchangeCase {
    /// m_i ≥ 2: always allowed.
    NonOneSingularFirst,
    /// m_i = m_{i+1} = 1: always allowed.
    BothOneSingular,
    /// m_i = 1, m_{i+1} ≥ 2: allowed iff v_{i+1} is already singular before v_i.
    OneSingularThenNonOne,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ExchangeVerdict {
    pub allowed: bool,
    pub case: ExchangeCase,
}

/// Whether exchanging positions `i` and `i + 1` (0-based) keeps the tuple
/// singular, decided from the degree tuple without reducing the swapped
/// tuple.
pub fn neighbour_exchange_allowed(f: &MinUnsat, t: &SingularTuple, i: usize) -> Result<ExchangeVerdict> {
    require_valid(f, t)?;
    if i + 1 >= t.len() {
        return Err(Error::precondition(format!(
            "exchange index {i} out of range for a tuple of length {}",
            t.len()
        )));
    }
    let verdict = match (t.degrees[i], t.degrees[i + 1]) {
        (m, _) if m >= 2 => ExchangeVerdict {
            allowed: true,
            case: ExchangeCase::NonOneSingularFirst,
        },
        (_, 1) => ExchangeVerdict {
            allowed: true,
            case: ExchangeCase::BothOneSingular,
        },
        _ => ExchangeVerdict {
            allowed: is_singular(&iterated_dp(f, &t.variables[..i]), t.variables[i + 1]),
            case: ExchangeCase::OneSingularThenNonOne,
        },
    };
    Ok(verdict)
}

/// Whether two singular tuples over the same variables end in the same
/// clause-set. This always holds; `false` signals a bug.
pub fn swap_equality_check(f: &MinUnsat, t: &SingularTuple, permuted: &[Variable]) -> Result<bool> {
    require_valid(f, t)?;
    if validate_tuple(f, permuted).is_none() {
        return Err(Error::precondition(format!("{permuted:?} is not a singular tuple")));
    }
    let mut a = t.variables.clone();
    let mut b = permuted.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    if a != b {
        return Err(Error::precondition("tuples have different variable sets"));
    }
    Ok(iterated_dp(f, &t.variables) == iterated_dp(f, permuted))
}

fn exchange(f: &MinUnsat, t: &SingularTuple, i: usize) -> Result<SingularTuple> {
    if !neighbour_exchange_allowed(f, t, i)?.allowed {
        return Err(Error::verification(format!(
            "normalization needed a forbidden exchange at {i} in {:?}",
            t.variables
        )));
    }
    let mut vars = t.variables.clone();
    vars.swap(i, i + 1);
    validate_tuple(f, &vars).ok_or_else(|| {
        Error::verification(format!("exchange at {i} in {:?} lost singularity", t.variables))
    })
}

fn one_prefix(t: &SingularTuple) -> usize {
    t.degrees.iter().take_while(|&&m| m == 1).count()
}

/// Step-limited loop guard for the sorting processes.
fn budget(n: usize) -> usize {
    4 * (n + 1) * (n + 1) * (n + 1)
}

/// Reorders `t` by allowed neighbour exchanges so that the 1-singular steps
/// form a prefix, starting with the variables of `front` in the given
/// order. `front` must list exactly the variables of `t` that are
/// 1-singular in `f`.
pub fn normalize_tuple_front1(f: &MinUnsat, t: &SingularTuple, front: &[Variable]) -> Result<SingularTuple> {
    require_valid(f, t)?;
    let ones = var1sing(f);
    let mut expected: Vec<Variable> = t.variables.iter().copied().filter(|v| ones.contains(v)).collect();
    let mut given = front.to_vec();
    expected.sort_unstable();
    given.sort_unstable();
    given.dedup();
    if expected != given || given.len() != front.len() {
        return Err(Error::precondition(format!(
            "front {front:?} must be the tuple variables 1-singular in F: {expected:?}"
        )));
    }
    let in_front = |v: &Variable| front.contains(v);
    let n = t.len();
    let mut cur = t.clone();
    let mut steps = 0;
    let mut tick = || {
        steps += 1;
        if steps > budget(n) {
            Err(Error::verification("tuple normalization does not terminate"))
        } else {
            Ok(())
        }
    };

    let gather_ones = |mut cur: SingularTuple, tick: &mut dyn FnMut() -> Result<()>| -> Result<SingularTuple> {
        while let Some(i) = (0..cur.len().saturating_sub(1)).find(|&i| cur.degrees[i] >= 2 && cur.degrees[i + 1] == 1) {
            tick()?;
            cur = exchange(f, &cur, i)?;
        }
        Ok(cur)
    };

    cur = gather_ones(cur, &mut tick)?;
    loop {
        let q = one_prefix(&cur);
        let Some(j) = (q..n).find(|&j| in_front(&cur.variables[j])) else {
            break;
        };
        if j == 0 {
            return Err(Error::verification("front variable with degree above 1 at position 0"));
        }
        tick()?;
        cur = exchange(f, &cur, j - 1)?;
        cur = gather_ones(cur, &mut tick)?;
    }
    let q = one_prefix(&cur);
    while let Some(i) = (0..q.saturating_sub(1))
        .find(|&i| !in_front(&cur.variables[i]) && in_front(&cur.variables[i + 1]))
    {
        tick()?;
        cur = exchange(f, &cur, i)?;
    }
    let rank = |v: &Variable| front.iter().position(|w| w == v).unwrap_or(usize::MAX);
    while let Some(i) =
        (0..front.len().saturating_sub(1)).find(|&i| rank(&cur.variables[i]) > rank(&cur.variables[i + 1]))
    {
        tick()?;
        cur = exchange(f, &cur, i)?;
    }

    let q = one_prefix(&cur);
    let sorted = cur.degrees[q..].iter().all(|&m| m >= 2);
    if !sorted || cur.variables[..front.len()] != *front {
        return Err(Error::verification(format!("normalization ended in {cur:?}")));
    }
    Ok(cur)
}

/// A singular ordering of `vars` starting with `first`, if one exists.
fn ordering_starting_with(f: &MinUnsat, vars: &[Variable], first: Variable) -> Option<Vec<Variable>> {
    fn go(
        g: &ClauseSet,
        vars: &[Variable],
        done: u64,
        order: &mut Vec<Variable>,
        dead: &mut HashSet<u64>,
    ) -> bool {
        if order.len() == vars.len() {
            return true;
        }
        if dead.contains(&done) {
            return false;
        }
        for (k, &v) in vars.iter().enumerate() {
            if done >> k & 1 == 0 && is_singular(g, v) {
                order.push(v);
                if go(&dp(g, v), vars, done | 1 << k, order, dead) {
                    return true;
                }
                order.pop();
            }
        }
        dead.insert(done);
        false
    }
    let k = vars.iter().position(|&v| v == first)?;
    if !is_singular(f, first) {
        return None;
    }
    let mut order = vec![first];
    let mut dead = HashSet::new();
    go(&dp(f, first), vars, 1 << k, &mut order, &mut dead).then_some(order)
}

/// Singular reorderings of `t1` and `t2` whose first elements can be
/// reduced in both orders. Both tuples need length at least 2.
pub fn commutable_beginning(
    f: &MinUnsat,
    t1: &SingularTuple,
    t2: &SingularTuple,
) -> Result<Option<(SingularTuple, SingularTuple)>> {
    require_valid(f, t1)?;
    require_valid(f, t2)?;
    if t1.len() < 2 || t2.len() < 2 || t1.len() > 64 || t2.len() > 64 {
        return Err(Error::precondition("both tuples need a length between 2 and 64"));
    }
    let firsts = |t: &SingularTuple| -> Vec<Vec<Variable>> {
        t.variables
            .iter()
            .filter_map(|&a| ordering_starting_with(f, &t.variables, a))
            .collect()
    };
    let (o1, o2) = (firsts(t1), firsts(t2));
    for a in &o1 {
        for b in &o2 {
            if a[0] != b[0]
                && validate_tuple(f, &[a[0], b[0]]).is_some()
                && validate_tuple(f, &[b[0], a[0]]).is_some()
            {
                let p1 = validate_tuple(f, a).expect("ordering is singular");
                let p2 = validate_tuple(f, b).expect("ordering is singular");
                return Ok(Some((p1, p2)));
            }
        }
    }
    Ok(None)
}

/// All maximal singular tuples, depth-first with ascending variables.
pub fn maximal_singular_tuples(f: &MinUnsat, limit: usize) -> Result<Vec<SingularTuple>> {
    fn go(g: &ClauseSet, prefix: &mut SingularTuple, out: &mut Vec<SingularTuple>, limit: usize) -> Result<()> {
        let candidates = varsing(g);
        if candidates.is_empty() {
            if out.len() == limit {
                return Err(Error::BoundExceeded {
                    what: "number of maximal singular tuples",
                    value: limit + 1,
                    bound: limit,
                });
            }
            out.push(prefix.clone());
            return Ok(());
        }
        for v in candidates {
            prefix.variables.push(v);
            prefix.degrees.push(g.vdeg(v) - 1);
            go(&dp(g, v), prefix, out, limit)?;
            prefix.variables.pop();
            prefix.degrees.pop();
        }
        Ok(())
    }
    let mut out = Vec::new();
    go(f, &mut SingularTuple::empty(), &mut out, limit)?;
    Ok(out)
}

/// Length of the maximal tuple that always reduces the lowest singular
/// variable.
pub fn singularity_index(f: &MinUnsat) -> usize {
    let mut g = f.clause_set().clone();
    let mut steps = 0;
    while let Some(&v) = varsing(&g).first() {
        g = dp(&g, v);
        steps += 1;
    }
    steps
}

/// A maximal tuple choosing uniformly among the singular variables at each
/// step.
pub fn random_maximal_tuple(f: &MinUnsat, rng: &mut impl Rng) -> SingularTuple {
    let mut g = f.clause_set().clone();
    let mut t = SingularTuple::empty();
    while let Some(&v) = varsing(&g).choose(rng) {
        t.variables.push(v);
        t.degrees.push(g.vdeg(v) - 1);
        g = dp(&g, v);
    }
    t
}

/// The singularity index, checked against `samples` random maximal tuples.
pub fn singularity_index_verified(f: &MinUnsat, samples: usize, rng: &mut impl Rng) -> Result<usize> {
    let index = singularity_index(f);
    for _ in 0..samples {
        let t = random_maximal_tuple(f, rng);
        if t.len() != index {
            return Err(Error::verification(format!(
                "maximal tuple {:?} has length {} but the index is {index}",
                t.variables,
                t.len()
            )));
        }
    }
    Ok(index)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SdpResult {
    pub result: MinUnsat,
    pub trace: ReductionTrace,
}

/// All distinct nonsingular clause-sets reachable by singular reduction,
/// in depth-first discovery order, each with one witness trace.
/// `limit` bounds the number of visited intermediate clause-sets.
pub fn sdp_set(f: &MinUnsat, limit: usize) -> Result<Vec<SdpResult>> {
    struct Search {
        limit: usize,
        visited: HashSet<ClauseSet>,
        found: HashMap<ClauseSet, usize>,
        out: Vec<SdpResult>,
    }
    impl Search {
        fn go(&mut self, g: &MinUnsat, trace: &ReductionTrace) -> Result<()> {
            if !self.visited.insert(g.clause_set().clone()) {
                return Ok(());
            }
            if self.visited.len() > self.limit {
                return Err(Error::BoundExceeded {
                    what: "number of clause-sets visited by sDP enumeration",
                    value: self.visited.len(),
                    bound: self.limit,
                });
            }
            let candidates = varsing(g);
            if candidates.is_empty() {
                if !self.found.contains_key(g.clause_set()) {
                    self.found.insert(g.clause_set().clone(), self.out.len());
                    self.out.push(SdpResult {
                        result: g.clone(),
                        trace: trace.clone(),
                    });
                }
                return Ok(());
            }
            for v in candidates {
                let (next, step) = sdp_step(g, v, None)?;
                let mut extended = trace.clone();
                extended.push(step, next.clause_set().clone());
                self.go(&next, &extended)?;
            }
            Ok(())
        }
    }
    let mut search = Search {
        limit,
        visited: HashSet::new(),
        found: HashMap::new(),
        out: Vec::new(),
    };
    search.go(f, &ReductionTrace::new(f.clause_set().clone()))?;
    Ok(search.out)
}
