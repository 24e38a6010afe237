//! The singularity hypergraph and its minimal transversals.

use serde::Serialize;

use super::{singular_profiles, Choice};
use crate::clause::{Literal, Variable};
use crate::error::{Error, Result};
use crate::oracle::MinUnsat;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularityHypergraph {
    pub vertices: Vec<Variable>,
    /// Pairwise disjoint, sorted.
    pub edges: Vec<Vec<Variable>>,
    /// The singular literal used for every singular variable.
    pub singular_literals: Vec<Literal>,
}

/// Hyperedges are the variable sets of `C ∩ L` for the chosen set `L` of
/// singular literals.
pub fn build_shyp(f: &MinUnsat, choice: &Choice) -> Result<SingularityHypergraph> {
    let profiles = singular_profiles(f);
    for (&v, &positive) in choice {
        match profiles.iter().find(|p| p.variable == v) {
            Some(p) if p.orientation(positive).is_some() => {}
            _ => {
                return Err(Error::precondition(format!(
                    "variable {v} has no singular literal of polarity {}",
                    if positive { "pos" } else { "neg" }
                )))
            }
        }
    }
    let singular_literals: Vec<Literal> = profiles
        .iter()
        .map(|p| p.oriented(choice).map(|o| o.literal))
        .collect::<Result<_>>()?;
    let mut edges: Vec<Vec<Variable>> = f
        .iter()
        .map(|c| {
            c.iter()
                .filter(|l| singular_literals.contains(l))
                .map(Literal::var)
                .collect::<Vec<_>>()
        })
        .filter(|e| !e.is_empty())
        .collect();
    edges.sort();
    Ok(SingularityHypergraph {
        vertices: f.variables(),
        edges,
        singular_literals,
    })
}

/// Minimal transversals of a hypergraph with pairwise disjoint edges: one
/// vertex from every edge. Each transversal is sorted; the list is in
/// lexicographic order of picks.
pub fn minimal_transversals(h: &SingularityHypergraph, limit: usize) -> Result<Vec<Vec<Variable>>> {
    let count = h
        .edges
        .iter()
        .try_fold(1usize, |acc, e| acc.checked_mul(e.len()).filter(|&n| n <= limit));
    if count.is_none() {
        return Err(Error::BoundExceeded {
            what: "number of minimal transversals",
            value: h.edges.iter().map(Vec::len).product(),
            bound: limit,
        });
    }
    let mut out: Vec<Vec<Variable>> = vec![Vec::new()];
    for e in &h.edges {
        out = out
            .into_iter()
            .flat_map(|t| {
                e.iter().map(move |&v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    for t in &mut out {
        t.sort_unstable();
    }
    Ok(out)
}
