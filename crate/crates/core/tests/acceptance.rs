//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use common::{all_singular_tuples, cl, cnf, naive_dp, naive_rsub, truth_table_mu, truth_table_smu, vars};
use mu_forge::classify::{generate_mu_corpus, gen_dn, mutt, GeneratorRecipe};
use mu_forge::dp::{
    build_shyp, check_degree_ledger, dp, maximal_singular_tuples, minimal_transversals, neighbour_exchange_allowed,
    random_maximal_tuple, sdp_set, singular_profile, singularity_index, validate_tuple, var1sing, varnon1sing,
    varsing, Choice, ExchangeCase,
};
use mu_forge::iso::{are_isomorphic, classify_confluence, random_relabel, Classification, DEFAULT_ISO_BOUND};
use mu_forge::oracle::{is_renamable_horn, is_uhit, r1, r2};
use mu_forge::suites::{enumerate_hitting, random_uhit};
use mu_forge::{ClauseSet, MinUnsat, Oracle, Variable};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every criterion is exact: no disagreement is tolerated.
const TOLERATED_VIOLATIONS: usize = 0;
const MIN_INDEX_INSTANCES: usize = 200;
const INDEX_SAMPLES: usize = 20;
const MAX_INDEX_VARS: usize = 14;
const MIN_SMU_INSTANCES: usize = 100;
const MIN_EVSAT_INSTANCES: usize = 100;
const MIN_MU2_INSTANCES: usize = 100;
const MU2_RELABELINGS: usize = 10;
const MIN_LEDGER_STEPS: usize = 10_000;
const MIN_RSUB_INSTANCES: usize = 100;
const MAX_RSUB_VARS: u32 = 8;
const LIMIT: usize = 20_000;

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    #[allow(clippy::absurd_extreme_comparisons)]
    fn from_violations(violations: &[String], detail: String) -> Self {
        Outcome {
            passed: violations.len() <= TOLERATED_VIOLATIONS,
            detail: match violations.first() {
                None => detail,
                Some(v) => format!("{detail}; {} violations, first: {v}", violations.len()),
            },
        }
    }
}

fn mu(f: ClauseSet) -> MinUnsat {
    Oracle::default().certify(f).expect("example is MU")
}

fn expect(violations: &mut Vec<String>, ok: bool, what: &str) {
    if !ok {
        violations.push(what.to_string());
    }
}

fn degrees_of(f: &MinUnsat, t: &[u32]) -> Option<Vec<usize>> {
    validate_tuple(f, &vars(t)).map(|t| t.degrees)
}

/// v1, v2, v = 1, 2, 3.
fn two_path() -> ClauseSet {
    cnf(&[&[3, 1], &[-3, 2], &[-3, -2], &[-1, 2], &[-1, -2]])
}

/// v1, v2, v1', v2', w, v = 1..6.
fn glued_extended() -> ClauseSet {
    cnf(&[
        &[6, 5, 1],
        &[-6, 2],
        &[-6, 5, -2],
        &[5, -1, 2],
        &[5, -1, -2],
        &[-5, 3, 4],
        &[-5, -3, -4],
        &[-5, -3, 4],
        &[-5, -4, 3],
    ])
}

/// a, b, x, y, v, v' = 1..6.
fn four_transversals() -> ClauseSet {
    cnf(&[&[1, 2], &[-1, 3, 5], &[-1, 4, 6], &[-2, 3, 5], &[-2, 4, 6], &[-3, 5], &[-4, 6], &[-5, -6]])
}

/// v = 1, w = 2, x_i = 2 + i.
fn turn(k: i32) -> ClauseSet {
    let mut c: Vec<Vec<i32>> = vec![vec![1, 2], vec![-2]];
    c.extend((1..=k).map(|i| vec![-1, 2 + i]));
    c.push((1..=k).map(|i| -(2 + i)).collect());
    cnf(&c.iter().map(Vec::as_slice).collect::<Vec<_>>())
}

fn from_vecs(c: &[Vec<i32>]) -> ClauseSet {
    cnf(&c.iter().map(Vec::as_slice).collect::<Vec<_>>())
}

fn examples() -> Outcome {
    let o = Oracle::default();
    let mut bad = Vec::new();
    let d2 = gen_dn(2).unwrap();
    let d3 = gen_dn(3).unwrap();
    let d4 = gen_dn(4).unwrap();
    let b = &mut bad;

    // D2, D3 unsatisfiable hitting; D4 saturated but not hitting
    expect(b, is_uhit(&d2) && is_uhit(&d3) && !is_uhit(&d4) && !d4.is_hitting(), "hitting memberships of D2..D4");
    for d in [&d2, &d3, &d4] {
        expect(b, o.is_smu(d).unwrap() && truth_table_smu(d), "D_n saturated");
        expect(b, d.deficiency() == 2, "D_n deficiency");
    }

    // singular profiles, a = 1, b = 2
    let chain = cnf(&[&[1], &[-1, 2], &[-1, -2]]);
    expect(b, varsing(&chain) == vars(&[1, 2]), "varsing of unit chain");
    expect(b, var1sing(&chain) == vars(&[2]) && varnon1sing(&chain) == vars(&[1]), "1-singular split");
    let pa = singular_profile(&chain, Variable(1)).unwrap();
    expect(b, pa.default_orientation().main_clause == cl(&[1]), "main clause of a");
    expect(b, pa.default_orientation().side_clauses == vec![cl(&[-1, -2]), cl(&[-1, 2])], "side clauses of a");
    let pb = singular_profile(&chain, Variable(2)).unwrap();
    let mains: BTreeSet<_> = pb.orientations.iter().map(|o| o.main_clause.clone()).collect();
    expect(b, mains == BTreeSet::from([cl(&[-1, 2]), cl(&[-1, -2])]), "main clause choice of b");
    expect(b, varsing(&d2).is_empty(), "D2 nonsingular");

    // inverse unit-clause elimination on D2, x = 3
    let unit_uhit = cnf(&[&[3], &[1, 2, -3], &[-1, -2, -3], &[-1, 2, -3], &[-2, 1, -3]]);
    let unit_mu = cnf(&[&[3], &[1, 2, -3], &[-1, -2, -3], &[-1, 2, -3], &[-2, 1]]);
    expect(b, is_uhit(&unit_uhit) && unit_uhit.deficiency() == 2, "first unit extension is UHIT");
    expect(b, o.is_smu(&unit_uhit).unwrap() && truth_table_smu(&unit_uhit), "first unit extension saturated");
    expect(b, truth_table_mu(&unit_mu) && o.classify_mu(&unit_mu).unwrap().is_mu(), "second unit extension MU");
    expect(b, !o.is_smu(&unit_mu).unwrap() && !truth_table_smu(&unit_mu), "second unit extension not saturated");
    let no_unit = cnf(&[&[1, 2], &[1, -2], &[-1, 3], &[-1, -3]]);
    expect(b, is_uhit(&no_unit) && varsing(&no_unit) == vars(&[2, 3]), "singular variables without unit clause");

    // confluence modulo isomorphism without confluence
    let f7 = mu(two_path());
    let f_prime = cnf(&[&[3, 2], &[3, -2], &[-3, 2], &[-3, -2]]);
    let results: BTreeSet<ClauseSet> = sdp_set(&f7, LIMIT).unwrap().into_iter().map(|r| r.result.into_inner()).collect();
    expect(b, results == BTreeSet::from([d2.clone(), f_prime.clone()]), "reduction results of the two-path instance");
    expect(b, are_isomorphic(&f_prime, &d2, 16).unwrap().is_some(), "F' isomorphic to D2");
    expect(b, naive_dp(&f7, Variable(3)) == d2 && naive_dp(&f7, Variable(1)) == f_prime, "reference DP agrees");

    // divergence at deficiency 3
    let f1 = naive_dp(&glued_extended(), Variable(6));
    let f2 = naive_dp(&glued_extended(), Variable(1));
    expect(b, is_uhit(&f1) && varsing(&f1).is_empty() && f1.deficiency() == 3, "F1 nonsingular UHIT of deficiency 3");
    let results: BTreeSet<ClauseSet> =
        sdp_set(&mu(glued_extended()), LIMIT).unwrap().into_iter().map(|r| r.result.into_inner()).collect();
    expect(b, results == BTreeSet::from([f1.clone(), f2.clone()]), "reduction results of the glued instance");
    expect(b, are_isomorphic(&f1, &f2, 16).unwrap().is_none(), "F1 and F2 not isomorphic");
    let report = classify_confluence(&mu(glued_extended()), &o, LIMIT, DEFAULT_ISO_BOUND).unwrap();
    expect(b, report.classification == Classification::Divergent, "glued instance divergent");

    // singular tuples of the unit chain
    let tuples = all_singular_tuples(&chain);
    let found: BTreeSet<Vec<Variable>> = tuples.iter().map(|(t, _)| t.clone()).collect();
    let expected: BTreeSet<Vec<Variable>> =
        [vec![], vars(&[1]), vars(&[2]), vars(&[1, 2]), vars(&[2, 1])].into_iter().collect();
    expect(b, found == expected, "five singular tuples");
    let chain_mu = mu(chain.clone());
    expect(b, degrees_of(&chain_mu, &[1, 2]) == Some(vec![2, 1]), "degrees (2,1)");
    expect(b, degrees_of(&chain_mu, &[2, 1]) == Some(vec![1, 1]), "degrees (1,1)");
    for (t, d) in &tuples {
        expect(b, validate_tuple(&chain_mu, t).is_some_and(|s| &s.degrees == d), "validated tuple degrees");
    }

    // (k,k) against (1,k)
    for k in 1..=4 {
        let f = mu(turn(k));
        let k = k as usize;
        expect(b, degrees_of(&f, &[1, 2]) == Some(vec![k, k]), "turn (k,k)");
        expect(b, degrees_of(&f, &[2, 1]) == Some(vec![1, k]), "turn (1,k)");
    }

    exchange_branches(b);

    // failed literals
    expect(b, r2(&d2) == ClauseSet::bottom(), "r2 refutes D2");
    let f17 = cnf(&[&[1, 2, 3], &[1, 2, -3], &[1, -2, 4], &[1, -2, -4], &[-1, 5, 6], &[-1, 5, -6], &[-1, -5, 7], &[-1, -5, -7]]);
    expect(b, is_uhit(&f17) && f17.deficiency() == 1, "eight-clause set is UHIT of deficiency 1");
    expect(b, r2(&f17) == f17, "r2 leaves the eight-clause set unchanged");

    // singularity hypergraphs
    let h = build_shyp(&f7, &Choice::new()).unwrap();
    expect(b, h.vertices == vars(&[1, 2, 3]) && h.edges == vec![vars(&[1, 3])], "hypergraph of the two-path instance");
    let h = build_shyp(&mu(glued_extended()), &Choice::new()).unwrap();
    expect(b, h.vertices.len() == 6 && h.edges == vec![vars(&[1, 6])], "hypergraph of the glued instance");
    for f in [two_path(), glued_extended()] {
        let m: BTreeSet<Vec<Variable>> =
            maximal_singular_tuples(&mu(f.clone()), LIMIT).unwrap().into_iter().map(|t| t.variables).collect();
        let (v, v1) = (f.max_variable().unwrap(), Variable(1));
        expect(b, m == BTreeSet::from([vec![v], vec![v1]]), "two maximal singular tuples");
    }
    // v1, v2, v, v' = 1, 2, 3, 4
    let f20 = mu(cnf(&[&[3, 1], &[-3, 2], &[-3, -2], &[4, -1], &[-4, 2], &[-4, -2]]));
    expect(b, varsing(&f20) == vars(&[1, 3, 4]) && var1sing(&f20) == vars(&[1]), "singular variables with v'");
    let pos = build_shyp(&f20, &Choice::from([(Variable(1), true)])).unwrap();
    let neg = build_shyp(&f20, &Choice::from([(Variable(1), false)])).unwrap();
    expect(b, pos.vertices == vars(&[1, 2, 3, 4]), "hypergraph vertices with v'");
    expect(b, pos.edges == vec![vars(&[1, 3]), vars(&[4])], "hypergraph with v1 positive");
    expect(b, neg.edges == vec![vars(&[1, 4]), vars(&[3])], "hypergraph with v1 negative");

    let f21 = mu(four_transversals());
    let h = build_shyp(&f21, &Choice::new()).unwrap();
    let edges = vec![vars(&[1, 2]), vars(&[3]), vars(&[4]), vars(&[5, 6])];
    expect(b, h.edges == edges, "hypergraph edges of the deficiency-2 instance");
    let t: BTreeSet<Vec<Variable>> = minimal_transversals(&h, LIMIT).unwrap().into_iter().collect();
    let expected: BTreeSet<Vec<Variable>> =
        [vars(&[1, 3, 4, 5]), vars(&[2, 3, 4, 5]), vars(&[1, 3, 4, 6]), vars(&[2, 3, 4, 6])].into_iter().collect();
    expect(b, t == expected, "four minimal transversals");
    expect(b, sdp_set(&f21, LIMIT).unwrap().len() == 4, "four reduction results");
    let all = all_singular_tuples(&f21);
    let maximal = all.iter().filter(|(t, _)| varsing(&t.iter().fold(four_transversals(), |g, &v| naive_dp(&g, v))).is_empty());
    expect(b, maximal.count() == 96, "96 maximal singular tuples by brute force");
    expect(b, maximal_singular_tuples(&f21, LIMIT).unwrap().len() == 96, "96 maximal singular tuples");
    expect(b, singularity_index(&f21) == 4, "singularity index 4");
    expect(b, mutt(&f21, Some(&o)).unwrap() == 2, "type 2");
    expect(b, !o.is_smu(&f21).unwrap() && !truth_table_smu(&f21) && truth_table_mu(&f21), "MU but not saturated");
    expect(b, varnon1sing(&f21) == f21.variables(), "all variables non-1-singular");

    // v, a, b = 1, 2, 3
    let f18 = mu(cnf(&[&[1, 2], &[-2], &[-1, 3], &[-1, -3]]));
    expect(b, degrees_of(&f18, &[1, 2]) == Some(vec![2, 2]), "(v,a) has no 1-singular step");
    expect(b, degrees_of(&f18, &[2]) == Some(vec![1]), "(a) is 1-singular");

    Outcome::from_violations(&bad, "all listed examples".into())
}

/// Neighbour exchanges with expected verdict, case and degrees after swap.
fn exchange_branches(b: &mut Vec<String>) {
    struct Case {
        name: &'static str,
        f: ClauseSet,
        before: (Vec<u32>, Vec<usize>),
        after: Option<Vec<usize>>,
        case: ExchangeCase,
    }
    let mut cases = Vec::new();
    for k in 2..=4i32 {
        let ku = k as usize;
        cases.push(Case {
            name: "(k,k) to (1,k)",
            f: turn(k),
            before: (vec![1, 2], vec![ku, ku]),
            after: Some(vec![1, ku]),
            case: ExchangeCase::NonOneSingularFirst,
        });
        cases.push(Case {
            name: "(1,k) to (k,k)",
            f: turn(k),
            before: (vec![2, 1], vec![1, ku]),
            after: Some(vec![ku, ku]),
            case: ExchangeCase::OneSingularThenNonOne,
        });
        // v = 1, w = 2, x_i = 2 + i
        let mut f1: Vec<Vec<i32>> = vec![vec![1, -2], vec![2]];
        f1.extend((1..=k).map(|i| vec![-1, -2, 2 + i]));
        f1.push((1..=k).map(|i| -(2 + i)).collect());
        cases.push(Case {
            name: "(k,k) to (k+1,k)",
            f: from_vecs(&f1),
            before: (vec![1, 2], vec![ku, ku]),
            after: Some(vec![ku + 1, ku]),
            case: ExchangeCase::NonOneSingularFirst,
        });
        cases.push(Case {
            name: "(k+1,k) to (k,k)",
            f: from_vecs(&f1),
            before: (vec![2, 1], vec![ku + 1, ku]),
            after: Some(vec![ku, ku]),
            case: ExchangeCase::NonOneSingularFirst,
        });
        // v = 1, w = 2, x_i = 2 + i
        let mut f4: Vec<Vec<i32>> = vec![vec![1]];
        f4.extend((1..=k).map(|i| vec![-1, 2 + i]));
        let neg: Vec<i32> = (1..=k).map(|i| -(2 + i)).collect();
        f4.push([vec![2], neg.clone()].concat());
        f4.push([vec![-2], neg].concat());
        cases.push(Case {
            name: "(k,1) to (1,k)",
            f: from_vecs(&f4),
            before: (vec![1, 2], vec![ku, 1]),
            after: Some(vec![1, ku]),
            case: ExchangeCase::NonOneSingularFirst,
        });
        // v = 1, w = 2, x_i = 2 + i
        let mut f16: Vec<Vec<i32>> = vec![vec![1, 2], vec![-1, 2]];
        f16.extend((1..=k).map(|i| vec![-2, 2 + i]));
        f16.push((1..=k).map(|i| -(2 + i)).collect());
        cases.push(Case {
            name: "(1,k) not exchangeable",
            f: from_vecs(&f16),
            before: (vec![1, 2], vec![1, ku]),
            after: None,
            case: ExchangeCase::OneSingularThenNonOne,
        });
    }
    for p in 1..=4i32 {
        let pu = p as usize;
        // v = 1, w = 2, y = 3, x_i = 3 + i
        let mut f2: Vec<Vec<i32>> = vec![vec![1], vec![-1, 2, 3], vec![-1, -3]];
        f2.extend((1..=p).map(|i| vec![-2, 3 + i]));
        f2.push((1..=p).map(|i| -(3 + i)).collect());
        cases.push(Case {
            name: "(2,p) to (p,p+1)",
            f: from_vecs(&f2),
            before: (vec![1, 2], vec![2, pu]),
            after: Some(vec![pu, pu + 1]),
            case: ExchangeCase::NonOneSingularFirst,
        });
    }
    // v = 1, w = 2
    let f3 = cnf(&[&[1], &[-1, 2], &[-1, -2]]);
    cases.push(Case {
        name: "(2,1) to (1,1)",
        f: f3.clone(),
        before: (vec![1, 2], vec![2, 1]),
        after: Some(vec![1, 1]),
        case: ExchangeCase::NonOneSingularFirst,
    });
    cases.push(Case {
        name: "(1,1) to (2,1)",
        f: f3,
        before: (vec![2, 1], vec![1, 1]),
        after: Some(vec![2, 1]),
        case: ExchangeCase::BothOneSingular,
    });
    // v, w, a = 1, 2, 3
    cases.push(Case {
        name: "(1,1) to (1,1)",
        f: cnf(&[&[1, 3], &[-1, 3], &[2, -3], &[-2, -3]]),
        before: (vec![1, 2], vec![1, 1]),
        after: Some(vec![1, 1]),
        case: ExchangeCase::BothOneSingular,
    });

    for c in cases {
        let f = mu(c.f);
        let Some(t) = validate_tuple(&f, &vars(&c.before.0)) else {
            b.push(format!("{}: tuple not singular", c.name));
            continue;
        };
        if t.degrees != c.before.1 {
            b.push(format!("{}: degrees {:?}", c.name, t.degrees));
        }
        let verdict = neighbour_exchange_allowed(&f, &t, 0).unwrap();
        let swapped: Vec<u32> = c.before.0.iter().rev().copied().collect();
        let after = degrees_of(&f, &swapped);
        if verdict.case != c.case || verdict.allowed != c.after.is_some() || after != c.after {
            b.push(format!("{}: verdict {verdict:?}, swapped degrees {after:?}", c.name));
        }
    }
}

struct Corpus {
    instances: Vec<MinUnsat>,
}

fn recipe(seed: u64, deficiency: u32, steps: usize, count: usize, glue: bool, saturate: bool) -> GeneratorRecipe {
    let mut r = GeneratorRecipe::new(seed, deficiency, steps, count);
    r.glue = glue;
    r.saturate = saturate;
    r.max_vars = MAX_INDEX_VARS;
    r
}

fn corpus(o: &Oracle) -> Corpus {
    let mut instances = Vec::new();
    for i in 0..4u64 {
        for (d, glue) in [(1, false), (1, true), (2, false), (2, true), (3, true)] {
            let steps = 4 + 2 * i as usize;
            instances.extend(generate_mu_corpus(&recipe(100 * i + u64::from(d) * 7 + u64::from(glue), d, steps, 12, glue, false), o).unwrap());
        }
    }
    Corpus { instances }
}

fn index_invariance(c: &Corpus) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut bad = Vec::new();
    let mut by_delta = [0usize; 4];
    for (i, f) in c.instances.iter().enumerate() {
        by_delta[f.deficiency() as usize] += 1;
        let index = singularity_index(f);
        for _ in 0..INDEX_SAMPLES {
            let t = random_maximal_tuple(f, &mut rng);
            if t.len() != index {
                bad.push(format!("instance {i}: tuple length {} against index {index}", t.len()));
            }
        }
    }
    let enough = c.instances.len() >= MIN_INDEX_INSTANCES
        && c.instances.iter().all(|f| f.n() <= MAX_INDEX_VARS)
        && by_delta[1..].iter().all(|&n| n > 0);
    let mut out = Outcome::from_violations(
        &bad,
        format!("{} instances (δ=1,2,3: {:?}), {INDEX_SAMPLES} tuples each", c.instances.len(), &by_delta[1..]),
    );
    out.passed &= enough;
    out
}

fn smu_confluence(o: &Oracle) -> Outcome {
    let mut bad = Vec::new();
    let mut instances = Vec::new();
    for (i, (d, glue)) in [(1, false), (2, false), (2, true), (3, true)].into_iter().enumerate() {
        instances.extend(generate_mu_corpus(&recipe(1200 + i as u64, d, 6, 30, glue, true), o).unwrap());
    }
    let mut nontrivial = 0;
    for (i, f) in instances.iter().enumerate() {
        if !o.is_saturated_mu(f).unwrap().is_saturated() {
            bad.push(format!("instance {i} not saturated"));
        }
        nontrivial += usize::from(!varsing(f).is_empty());
        let n = sdp_set(f, LIMIT).unwrap().len();
        if n != 1 {
            bad.push(format!("instance {i}: {n} reduction results"));
        }
    }
    let mut out = Outcome::from_violations(
        &bad,
        format!("{} saturated instances, {nontrivial} with singular variables", instances.len()),
    );
    out.passed &= instances.len() >= MIN_SMU_INSTANCES && nontrivial > 0;
    out
}

fn evsat_isomorphic(o: &Oracle) -> Outcome {
    let mut bad = Vec::new();
    let mut found = 0;
    let mut by_delta = [0usize; 4];
    let mut multi = 0;
    for (i, (d, glue)) in [(3, true), (2, true), (2, false), (1, false)].into_iter().enumerate() {
        let instances = generate_mu_corpus(&recipe(1900 + i as u64, d, 5, 40, glue, false), o).unwrap();
        for f in instances {
            let report = classify_confluence(&f, o, LIMIT, DEFAULT_ISO_BOUND).unwrap();
            if !report.eventually_saturated {
                continue;
            }
            found += 1;
            by_delta[d as usize] += 1;
            multi += usize::from(report.results.len() > 1);
            for a in 0..report.results.len() {
                for b in a + 1..report.results.len() {
                    if are_isomorphic(&report.results[a], &report.results[b], DEFAULT_ISO_BOUND).unwrap().is_none() {
                        bad.push(format!("results {a} and {b} not isomorphic"));
                    }
                }
            }
        }
    }
    let mut out = Outcome::from_violations(
        &bad,
        format!("{found} eventually saturated instances (δ=1,2,3: {:?}), {multi} with several results", &by_delta[1..]),
    );
    out.passed &= found >= MIN_EVSAT_INSTANCES && multi > 0;
    out
}

fn deficiency_two(o: &Oracle) -> Outcome {
    let mut bad = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let mut instances = generate_mu_corpus(&recipe(2400, 2, 6, 60, false, false), o).unwrap();
    instances.extend(generate_mu_corpus(&recipe(2401, 2, 6, 60, true, false), o).unwrap());
    let mut types = BTreeSet::new();
    for (i, f) in instances.iter().enumerate() {
        let t = mutt(f, Some(o)).unwrap();
        types.insert(t);
        let dn = gen_dn(t).unwrap();
        for r in sdp_set(f, LIMIT).unwrap() {
            if are_isomorphic(&r.result, &dn, DEFAULT_ISO_BOUND).unwrap().is_none() {
                bad.push(format!("instance {i}: result not isomorphic to D_{t}"));
            }
        }
        for _ in 0..MU2_RELABELINGS {
            let (g, _) = random_relabel(f, &mut rng);
            let tg = mutt(&MinUnsat::new_unchecked(g), Some(o)).unwrap();
            if tg != t {
                bad.push(format!("instance {i}: type {tg} after relabeling, {t} before"));
            }
        }
    }
    let mut out = Outcome::from_violations(
        &bad,
        format!("{} instances, types {types:?}, {MU2_RELABELINGS} relabelings each", instances.len()),
    );
    out.passed &= instances.len() >= MIN_MU2_INSTANCES;
    out
}

fn degree_ledger(c: &Corpus) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut bad = Vec::new();
    let mut steps = 0;
    for _ in 0..8 {
        for (i, f) in c.instances.iter().enumerate() {
            let t = random_maximal_tuple(f, &mut rng);
            let mut g = f.clause_set().clone();
            for &v in &t.variables {
                let profile = singular_profile(&g, v).unwrap();
                let after = dp(&g, v);
                for o in &profile.orientations {
                    let violations = check_degree_ledger(&g, o, &after);
                    if !violations.is_empty() {
                        bad.push(format!("instance {i}, variable {v}: {violations:?}"));
                    }
                }
                steps += 1;
                g = after;
            }
        }
    }
    let mut out = Outcome::from_violations(&bad, format!("{steps} reduction steps"));
    out.passed &= steps >= MIN_LEDGER_STEPS;
    out
}

fn random_clause_set(rng: &mut ChaCha8Rng) -> ClauseSet {
    let n = rng.gen_range(1..=MAX_RSUB_VARS);
    let c = rng.gen_range(1..=10);
    let clauses: Vec<Vec<i32>> = (0..c)
        .map(|_| {
            (1..=n as i32)
                .filter_map(|v| match rng.gen_range(0..5) {
                    0 => Some(v),
                    1 => Some(-v),
                    _ => None,
                })
                .collect()
        })
        .collect();
    from_vecs(&clauses)
}

fn rsub_commutation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut bad = Vec::new();
    let mut checks = 0;
    for i in 0..MIN_RSUB_INSTANCES * 3 {
        let f = random_clause_set(&mut rng);
        let mut seq = f.variables();
        seq.shuffle(&mut rng);
        seq.truncate(rng.gen_range(0..=seq.len()));
        let reference = naive_rsub(&seq.iter().fold(f.clone(), |g, &v| naive_dp(&g, v)));
        for _ in 0..3 {
            let mut perm = seq.clone();
            perm.shuffle(&mut rng);
            let plain = perm.iter().fold(f.clone(), |g, &v| dp(&g, v)).subsumption_eliminate();
            let interleaved = perm.iter().fold(f.clone(), |g, &v| dp(&g, v).subsumption_eliminate()).subsumption_eliminate();
            checks += 1;
            if plain != reference || interleaved != reference {
                bad.push(format!("instance {i}: order {perm:?} of {seq:?}"));
            }
        }
    }
    Outcome::from_violations(&bad, format!("{} clause-sets, {checks} permutations", MIN_RSUB_INSTANCES * 3))
}

fn hitting(o: &Oracle) -> Outcome {
    let mut bad = Vec::new();
    let mut enumerated = 0;
    let mut uhit = 0;
    let mut check = |f: &ClauseSet, bad: &mut Vec<String>| {
        let u = is_uhit(f);
        if u {
            uhit += 1;
            if !o.is_smu(f).unwrap() {
                bad.push(format!("{f:?} unsatisfiable hitting but not saturated"));
            }
        }
        for v in f.variables() {
            let g = dp(f, v);
            if !g.is_hitting() || (u && !is_uhit(&g)) {
                bad.push(format!("DP on {v} of {f:?}"));
            }
        }
    };
    for n in 0..=3 {
        for f in enumerate_hitting(n) {
            enumerated += 1;
            check(&f, &mut bad);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut generated = 0;
    for _ in 0..300 {
        let splits = rng.gen_range(1..12);
        let u = random_uhit(&mut rng, 8, splits);
        // dropping clauses keeps the set hitting
        let h: ClauseSet = u.iter().filter(|_| rng.gen_bool(0.7)).cloned().collect();
        for f in [u, h] {
            generated += 1;
            check(&f, &mut bad);
        }
    }
    Outcome::from_violations(
        &bad,
        format!("{enumerated} enumerated and {generated} generated hitting sets, {uhit} unsatisfiable"),
    )
}

fn unit_refutation(c: &Corpus) -> Outcome {
    let mut bad = Vec::new();
    let mut refuted = 0;
    for (i, f) in c.instances.iter().enumerate() {
        let left = r1(f) == ClauseSet::bottom();
        let right = f.deficiency() == 1 && is_renamable_horn(f).is_some();
        refuted += usize::from(left);
        if left != right {
            bad.push(format!("instance {i}: unit refutation {left}, deficiency 1 and renamable Horn {right}"));
        }
    }
    let mut out = Outcome::from_violations(&bad, format!("{} instances, {refuted} refuted by units", c.instances.len()));
    out.passed &= refuted > 0 && refuted < c.instances.len();
    out
}

fn shared_n(c: &Corpus) -> Outcome {
    let mut bad = Vec::new();
    let mut results = 0;
    for (i, f) in c.instances.iter().enumerate() {
        let rs = sdp_set(f, LIMIT).unwrap();
        results += rs.len();
        let ns: BTreeSet<usize> = rs.iter().map(|r| r.result.n()).collect();
        if ns.len() != 1 {
            bad.push(format!("instance {i}: result sizes {ns:?}"));
        }
    }
    Outcome::from_violations(&bad, format!("{} instances, {results} reduction results", c.instances.len()))
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() -> ExitCode {
    let o = Oracle::default();
    let start = Instant::now();
    let corpus = corpus(&o);
    let criteria: Vec<Criterion> = vec![
        ("example exactness", Box::new(examples)),
        ("singularity index", Box::new(|| index_invariance(&corpus))),
        ("confluence on saturated", Box::new(|| smu_confluence(&o))),
        ("eventually saturated is confluent modulo isomorphism", Box::new(|| evsat_isomorphic(&o))),
        ("deficiency 2 results isomorphic to D_n", Box::new(|| deficiency_two(&o))),
        ("degree ledger", Box::new(|| degree_ledger(&corpus))),
        ("commutation modulo subsumption", Box::new(rsub_commutation)),
        ("hitting clause-sets", Box::new(|| hitting(&o))),
        ("unit refutation characterisation", Box::new(|| unit_refutation(&corpus))),
        ("results share the number of variables", Box::new(|| shared_n(&corpus))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = run();
        failed += usize::from(!out.passed);
        println!(
            "criterion {:>2} {}: {} ({}; {:.2}s)",
            i + 1,
            name,
            if out.passed { "PASS" } else { "FAIL" },
            out.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria pass in {:.2}s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
