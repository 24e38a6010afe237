//! Brute-force reference implementations shared by the integration tests.
#![allow(dead_code)]

use mu_forge::{Clause, ClauseSet, Literal, Variable};

pub fn cnf(clauses: &[&[i32]]) -> ClauseSet {
    ClauseSet::from_dimacs(clauses).expect("clash-free test clauses")
}

pub fn cl(lits: &[i32]) -> Clause {
    Clause::from_dimacs(lits).expect("clash-free test clause")
}

pub fn vars(xs: &[u32]) -> Vec<Variable> {
    xs.iter().map(|&x| Variable(x)).collect()
}

/// Truth-table satisfiability.
pub fn truth_table_sat(f: &ClauseSet) -> bool {
    let vs = f.variables();
    assert!(vs.len() <= 20, "truth table too large");
    (0u32..1 << vs.len()).any(|bits| {
        f.iter().all(|c| {
            c.iter().any(|l| {
                let i = vs.iter().position(|&v| v == l.var()).unwrap();
                (bits >> i & 1 == 1) == l.is_positive()
            })
        })
    })
}

pub fn truth_table_mu(f: &ClauseSet) -> bool {
    !truth_table_sat(f) && f.iter().all(|c| truth_table_sat(&f.without_clause(c)))
}

/// MU, and adding any literal over `var(F)` to any clause makes it
/// satisfiable (or merges two clauses).
pub fn truth_table_smu(f: &ClauseSet) -> bool {
    if !truth_table_mu(f) {
        return false;
    }
    f.iter().all(|c| {
        f.variables().into_iter().filter(|&v| !c.contains_var(v)).all(|v| {
            [v.positive(), v.negative()].into_iter().all(|x| {
                let g = f.without_clause(c).with_clause(c.with(x).unwrap());
                g.c() < f.c() || truth_table_sat(&g)
            })
        })
    })
}

/// DP-reduction written from the definition over all clause pairs.
pub fn naive_dp(f: &ClauseSet, v: Variable) -> ClauseSet {
    let mut out: Vec<Clause> = f.iter().filter(|c| !c.contains_var(v)).cloned().collect();
    for c in f.iter().filter(|c| c.contains(v.positive())) {
        for d in f.iter().filter(|d| d.contains(v.negative())) {
            let lits: Vec<Literal> = c.iter().chain(d.iter()).filter(|l| l.var() != v).collect();
            if let Ok(r) = Clause::new(lits) {
                out.push(r);
            }
        }
    }
    ClauseSet::new(out)
}

/// Subsumption elimination written from the definition.
pub fn naive_rsub(f: &ClauseSet) -> ClauseSet {
    f.iter()
        .filter(|c| !f.iter().any(|d| d != *c && d.is_subset_of(c)))
        .cloned()
        .collect()
}

/// Every singular tuple, by trying all sequences of distinct variables.
pub fn all_singular_tuples(f: &ClauseSet) -> Vec<(Vec<Variable>, Vec<usize>)> {
    fn go(g: &ClauseSet, prefix: &mut Vec<Variable>, degs: &mut Vec<usize>, out: &mut Vec<(Vec<Variable>, Vec<usize>)>) {
        out.push((prefix.clone(), degs.clone()));
        for v in g.variables() {
            let (p, n) = (g.ldeg(v.positive()), g.ldeg(v.negative()));
            if p.min(n) == 1 {
                prefix.push(v);
                degs.push(p + n - 1);
                go(&naive_dp(g, v), prefix, degs, out);
                prefix.pop();
                degs.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(f, &mut Vec::new(), &mut Vec::new(), &mut out);
    out
}
