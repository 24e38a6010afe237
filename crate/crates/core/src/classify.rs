//! The contradictory cycles `D_n`, the deficiency-2 classification, and
//! instance generators: inverse singular DP-reduction, full gluing and a
//! seeded random corpus.

use std::fs;
use std::path::Path;

use rand::seq::{IteratorRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::clause::{Clause, ClauseSet, Literal, Variable};
use crate::dimacs::emit_dimacs;
use crate::dp::{dp, is_nonsingular, is_singular, saturation, varsing};
use crate::error::{Error, Result};
use crate::iso::{are_isomorphic, classify_confluence, IsoWitness, DEFAULT_ISO_BOUND};
use crate::oracle::{MinUnsat, Oracle};

/// `{P_n, N_n} ∪ {{¬v_i, v_{i+1}} : i mod n}` over variables `1..=n`.
pub fn gen_dn(n: usize) -> Result<ClauseSet> {
    if n < 2 {
        return Err(Error::precondition(format!("D_n needs n ≥ 2, got {n}")));
    }
    let v = |i: usize| Variable((i % n) as u32 + 1);
    let mut clauses = vec![
        Clause::new((0..n).map(|i| v(i).positive()))?,
        Clause::new((0..n).map(|i| v(i).negative()))?,
    ];
    for i in 0..n {
        clauses.push(Clause::new([v(i).negative(), v(i + 1).positive()])?);
    }
    Ok(ClauseSet::new(clauses))
}

/// `gen_dn` with its defining properties checked by the oracle.
pub fn gen_dn_verified(n: usize, oracle: &Oracle) -> Result<MinUnsat> {
    let f = gen_dn(n)?;
    if f.deficiency() != 2 || !is_nonsingular(&f) {
        return Err(Error::verification(format!("D_{n} has wrong shape")));
    }
    oracle.certify(f)
}

fn require_deficiency_two(f: &ClauseSet) -> Result<()> {
    match f.deficiency() {
        2 => Ok(()),
        d => Err(Error::precondition(format!("deficiency is {d}, expected 2"))),
    }
}

/// An isomorphism onto `D_{n(F)}` for a nonsingular MU clause-set of
/// deficiency 2. Failure to find one is a verification error.
pub fn dn_witness(f: &ClauseSet, oracle: &Oracle) -> Result<IsoWitness> {
    require_deficiency_two(f)?;
    if !is_nonsingular(f) {
        return Err(Error::precondition("clause-set has singular variables"));
    }
    if !oracle.classify_mu(f)?.is_mu() {
        return Err(Error::precondition("clause-set is not minimally unsatisfiable"));
    }
    let dn = gen_dn(f.n())?;
    are_isomorphic(f, &dn, DEFAULT_ISO_BOUND)?
        .ok_or_else(|| Error::verification(format!("no isomorphism onto D_{}", f.n())))
}

fn reduce_greedy(f: &ClauseSet, highest: bool) -> ClauseSet {
    let mut g = f.clone();
    loop {
        let s = varsing(&g);
        let pick = if highest { s.last() } else { s.first() };
        match pick {
            Some(&v) => g = dp(&g, v),
            None => return g,
        }
    }
}

/// Non-singularity type of an MU clause-set of deficiency 2. With an oracle,
/// two maximal reductions (lowest and highest variable first) must agree and
/// both be isomorphic to `D_n`.
pub fn mutt(f: &MinUnsat, verify: Option<&Oracle>) -> Result<usize> {
    require_deficiency_two(f)?;
    let low = reduce_greedy(f, false);
    if let Some(oracle) = verify {
        let high = reduce_greedy(f, true);
        if high.n() != low.n() {
            return Err(Error::verification(format!(
                "reduction results have {} and {} variables",
                low.n(),
                high.n()
            )));
        }
        dn_witness(&low, oracle)?;
        if are_isomorphic(&low, &high, DEFAULT_ISO_BOUND)?.is_none() {
            return Err(Error::verification("reduction results are not isomorphic"));
        }
    }
    Ok(low.n())
}

/// The clause-set `R` with `dp(R, v) = F` obtained by replacing each clause
/// `C' ∪ D_i'` of `F` by the side clause `D_i' ∪ {¬x}` and adding the main
/// clause `C' ∪ {x}`, where `x` is `new_var` with the given polarity.
pub fn inverse_sdp_extend(
    f: &ClauseSet,
    main_part: &Clause,
    side_parts: &[Clause],
    new_var: Variable,
    positive: bool,
) -> Result<ClauseSet> {
    if f.variables().contains(&new_var) {
        return Err(Error::precondition(format!("variable {new_var} already occurs")));
    }
    if side_parts.is_empty() {
        return Err(Error::precondition("at least one side part is required"));
    }
    let x = Literal::new(new_var, positive);
    let mut r = f.clone();
    let mut sides = Vec::with_capacity(side_parts.len());
    for d in side_parts {
        let replaced = main_part.union(d).map_err(|_| {
            Error::precondition(format!("side part {d:?} clashes with the main part"))
        })?;
        if !f.contains(&replaced) {
            return Err(Error::precondition(format!("{replaced:?} is not a clause of the input")));
        }
        r = r.without_clause(&replaced);
        sides.push(d.with(!x)?);
    }
    let mut r = r.with_clause(main_part.with(x)?);
    for d in sides {
        r = r.with_clause(d);
    }
    if dp(&r, new_var) != *f {
        return Err(Error::precondition(
            "replacement scheme does not reproduce the input under DP-reduction",
        ));
    }
    if !is_singular(&r, new_var) {
        return Err(Error::precondition(format!("variable {new_var} is not singular in the result")));
    }
    Ok(r)
}

/// `{C ∪ {w} : C ∈ F1} ∪ {C ∪ {¬w} : C ∈ F2}`.
pub fn full_glue(f1: &ClauseSet, f2: &ClauseSet, w: Variable) -> Result<ClauseSet> {
    let v1 = f1.variables();
    let v2 = f2.variables();
    if let Some(v) = v1.iter().find(|v| v2.contains(v)) {
        return Err(Error::precondition(format!("variable {v} occurs in both clause-sets")));
    }
    if v1.contains(&w) || v2.contains(&w) {
        return Err(Error::precondition(format!("gluing variable {w} is not fresh")));
    }
    let left = f1.iter().map(|c| c.with(w.positive()));
    let right = f2.iter().map(|c| c.with(w.negative()));
    left.chain(right).collect::<Result<Vec<_>>>().map(ClauseSet::new)
}

fn shift(f: &ClauseSet, by: u32) -> ClauseSet {
    f.map_literals(|x| Literal::new(Variable(x.var().0 + by), x.is_positive()))
        .expect("shifting keeps clauses clash-free")
}

fn next_variable(f: &ClauseSet) -> Variable {
    Variable(f.max_variable().map_or(1, |v| v.0 + 1))
}

/// Parameters of a seeded corpus; the same recipe always yields the same
/// instances.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct GeneratorRecipe {
    pub seed: u64,
    /// Target deficiency, 1 to 3.
    pub deficiency: u32,
    /// Inverse singular DP-reduction steps per instance.
    pub steps: usize,
    #[serde(default)]
    pub saturate: bool,
    /// Build the nonsingular seed by full gluing of two smaller seeds.
    #[serde(default)]
    pub glue: bool,
    pub count: usize,
    #[serde(default = "default_max_vars")]
    pub max_vars: usize,
    /// Largest `D_n` used as a seed.
    #[serde(default = "default_max_cycle")]
    pub max_cycle: usize,
}

fn default_max_vars() -> usize {
    12
}

fn default_max_cycle() -> usize {
    4
}

impl GeneratorRecipe {
    pub fn new(seed: u64, deficiency: u32, steps: usize, count: usize) -> Self {
        GeneratorRecipe {
            seed,
            deficiency,
            steps,
            saturate: false,
            glue: false,
            count,
            max_vars: default_max_vars(),
            max_cycle: default_max_cycle(),
        }
    }

    pub fn validate(&self, oracle: &Oracle) -> Result<()> {
        if !(1..=3).contains(&self.deficiency) {
            return Err(Error::precondition(format!(
                "deficiency must be between 1 and 3, got {}",
                self.deficiency
            )));
        }
        if self.deficiency == 3 && !self.glue {
            return Err(Error::precondition("deficiency 3 requires gluing"));
        }
        if self.max_cycle < 2 {
            return Err(Error::precondition("maxCycle must be at least 2"));
        }
        if self.max_vars > oracle.var_bound() {
            return Err(Error::BoundExceeded {
                what: "maxVars of recipe",
                value: self.max_vars,
                bound: oracle.var_bound(),
            });
        }
        let smallest = match (self.deficiency, self.glue) {
            (1, false) => 0,
            (2, false) | (1, true) => 2,
            (2, true) => 3,
            _ => 5,
        };
        if self.max_vars < smallest {
            return Err(Error::precondition(format!("maxVars must be at least {smallest}")));
        }
        Ok(())
    }
}

struct Generator<'a> {
    recipe: &'a GeneratorRecipe,
    rng: ChaCha8Rng,
}

impl Generator<'_> {
    /// `{⊥}` for deficiency 1, otherwise a random `D_n`.
    fn simple_seed(&mut self, deficiency: u32, max_vars: usize) -> ClauseSet {
        if deficiency == 1 || max_vars < 2 {
            return ClauseSet::bottom();
        }
        let top = self.recipe.max_cycle.min(max_vars);
        gen_dn(self.rng.gen_range(2..=top)).expect("n ≥ 2")
    }

    fn seed(&mut self) -> ClauseSet {
        let target = self.recipe.deficiency;
        if !self.recipe.glue {
            return self.simple_seed(target, self.recipe.max_vars);
        }
        // δ(F1) + δ(F2) − 1 = target with δ(F1), δ(F2) ∈ {1, 2}
        let (d1, d2) = match target {
            1 => (1, 1),
            2 => *[(1, 2), (2, 1)].choose(&mut self.rng).expect("nonempty"),
            _ => (2, 2),
        };
        let budget = self.recipe.max_vars - 1;
        let f1 = self.simple_seed(d1, if d2 == 2 { budget - 2 } else { budget });
        let f2 = self.simple_seed(d2, budget - f1.n());
        let f2 = shift(&f2, f1.n() as u32);
        let w = Variable((f1.n() + f2.n()) as u32 + 1);
        full_glue(&f1, &f2, w).expect("disjoint by construction")
    }

    /// A random valid inverse singular DP-reduction step.
    fn extend(&mut self, f: &ClauseSet) -> ClauseSet {
        let new_var = next_variable(f);
        loop {
            let e = f.iter().choose(&mut self.rng).expect("MU clause-sets are nonempty");
            let main = Clause::new(e.iter().filter(|_| self.rng.gen_bool(0.5))).expect("subclause");
            let candidates: Vec<&Clause> = f.iter().filter(|g| main.is_subset_of(g)).collect();
            let k = self.rng.gen_range(1..=candidates.len().min(4));
            let sides: Vec<Clause> = candidates
                .choose_multiple(&mut self.rng, k)
                .map(|g| {
                    let kept = main.iter().filter(|_| self.rng.gen_bool(0.3));
                    Clause::new(g.difference(&main).iter().chain(kept)).expect("subclause of g")
                })
                .collect();
            let positive = self.rng.gen_bool(0.5);
            if let Ok(r) = inverse_sdp_extend(f, &main, &sides, new_var, positive) {
                return r;
            }
        }
    }

    fn instance(&mut self, oracle: &Oracle) -> Result<MinUnsat> {
        let mut f = self.seed();
        for _ in 0..self.recipe.steps {
            if f.n() >= self.recipe.max_vars {
                break;
            }
            f = self.extend(&f);
        }
        let mut f = match oracle.certify(f) {
            Ok(f) => f,
            Err(Error::Precondition(msg)) => {
                return Err(Error::verification(format!("generated instance is not MU: {msg}")))
            }
            Err(e) => return Err(e),
        };
        if self.recipe.saturate {
            f = saturation(&f, oracle)?;
            if !oracle.classify_mu(&f)?.is_mu() {
                return Err(Error::verification("saturated instance is not MU"));
            }
        }
        if f.deficiency() != i64::from(self.recipe.deficiency) {
            return Err(Error::verification(format!(
                "generated instance has deficiency {}",
                f.deficiency()
            )));
        }
        Ok(f)
    }
}

/// Generates `recipe.count` instances, each validated by the oracle.
pub fn generate_mu_corpus(recipe: &GeneratorRecipe, oracle: &Oracle) -> Result<Vec<MinUnsat>> {
    recipe.validate(oracle)?;
    let mut g = Generator {
        recipe,
        rng: ChaCha8Rng::seed_from_u64(recipe.seed),
    };
    (0..recipe.count).map(|_| g.instance(oracle)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ManifestEntry {
    pub recipe: GeneratorRecipe,
    pub file_name: String,
    pub n: usize,
    pub c: usize,
    pub delta: i64,
    pub mu: bool,
    pub classification: crate::iso::Classification,
}

/// Writes `mu-NNNN.cnf` files and `manifest.json` into `dir`.
pub fn write_corpus(
    dir: &Path,
    recipe: &GeneratorRecipe,
    instances: &[MinUnsat],
    oracle: &Oracle,
    limit: usize,
) -> Result<Vec<ManifestEntry>> {
    let io = |e: std::io::Error| Error::precondition(format!("cannot write corpus to {}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    let mut entries = Vec::with_capacity(instances.len());
    for (i, f) in instances.iter().enumerate() {
        let file_name = format!("mu-{i:04}.cnf");
        fs::write(dir.join(&file_name), emit_dimacs(f)).map_err(io)?;
        let report = classify_confluence(f, oracle, limit, DEFAULT_ISO_BOUND)?;
        entries.push(ManifestEntry {
            recipe: recipe.clone(),
            file_name,
            n: f.n(),
            c: f.c(),
            delta: f.deficiency(),
            mu: true,
            classification: report.classification,
        });
    }
    let manifest = serde_json::to_string_pretty(&json!(entries)).expect("manifest serializes");
    fs::write(dir.join("manifest.json"), manifest + "\n").map_err(io)?;
    Ok(entries)
}
