use std::fs;
use std::path::{Path, PathBuf};

use mu_forge::classify::{gen_dn, gen_dn_verified, generate_mu_corpus, mutt, write_corpus, GeneratorRecipe};
use mu_forge::dp::{
    bounded_dp_preprocess, build_shyp, dp, is_nonsingular, is_singular, sdp_greedy, sdp_sequence, singular_profile,
    singularity_index, singularity_index_verified, var1sing, varsing, Choice, ReductionTrace,
};
use mu_forge::iso::{classify_confluence, DEFAULT_ISO_BOUND};
use mu_forge::oracle::{is_renamable_horn, is_uhit, r1, r2};
use mu_forge::suites::{builtin_corpus, run_suite, Suite, SuiteConfig};
use mu_forge::{emit_dimacs, parse_dimacs, ClauseSet, Error, MinUnsat, Oracle, Variable};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::report::{
    AnalysisReport, CheckReport, ClassifyReport, CorpusReport, Fixpoint, Flags, Hypergraph, InstanceReport,
    ReductionReport, Report, Summary,
};
use crate::{GenerateKind, Options, ReduceIo, ReduceMode};

pub const BOUND_ENV: &str = "MU_FORGE_BOUND";

pub fn oracle(opts: &Options) -> CliResult<Oracle> {
    if let Some(b) = opts.bound {
        return Ok(Oracle::new(b));
    }
    match std::env::var(BOUND_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map(Oracle::new)
            .map_err(|_| Error::Precondition(format!("{BOUND_ENV} must be a non-negative integer, got `{s}`")).into()),
        Err(_) => Ok(Oracle::default()),
    }
}

fn read_cnf(path: &Path) -> CliResult<ClauseSet> {
    let bytes = fs::read(path).map_err(CliError::io(path))?;
    parse_dimacs(&bytes).map_err(|e| match e {
        Error::Parse { .. } | Error::Tautology { .. } => CliError::Input {
            path: path.to_owned(),
            message: e.to_string(),
        },
        other => other.into(),
    })
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(CliError::io(path))
}

fn verifier<'a>(opts: &Options, oracle: &'a Oracle) -> Option<&'a Oracle> {
    opts.verify.then_some(oracle)
}

pub fn analyze(path: &Path, opts: &Options, oracle: &Oracle) -> CliResult<String> {
    let f = read_cnf(path)?;
    let sat = oracle.is_satisfiable(&f)?.is_some();
    let mu = !sat && oracle.classify_mu(&f)?.is_mu();
    let smu = mu && oracle.is_smu(&f)?;
    let hitting = f.is_hitting();
    let (singularity_index, hypergraph) = if mu {
        let m = MinUnsat::new_unchecked(f.clone());
        let index = if opts.verify {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            singularity_index_verified(&m, 20, &mut rng)?
        } else {
            singularity_index(&m)
        };
        let h = build_shyp(&m, &opts.choice())?;
        (
            Some(index),
            Some(Hypergraph {
                vertices: h.vertices,
                edges: h.edges,
            }),
        )
    } else {
        (None, None)
    };
    let report = AnalysisReport {
        summary: Summary::of(&f),
        flags: Flags {
            sat,
            mu,
            smu,
            hitting,
            uhit: hitting && is_uhit(&f),
            renamable_horn: is_renamable_horn(&f).is_some(),
            nonsingular: mu && is_nonsingular(&f),
        },
        varsing: varsing(&f),
        var1sing: var1sing(&f),
        singularity_index,
        hypergraph,
        r1: Fixpoint::of(&r1(&f)),
        r2: Fixpoint::of(&r2(&f)),
    };
    Ok(report.render(opts.json))
}

/// Rewrites the recorded orientation of every step on a variable named by
/// `--choice`.
fn orient_trace(trace: &mut ReductionTrace, choice: &Choice) -> CliResult<()> {
    let mut g = trace.initial.clone();
    for step in &mut trace.steps {
        if choice.contains_key(&step.variable) {
            let profile = singular_profile(&g, step.variable).ok_or(Error::NotSingular(step.variable))?;
            let o = profile.oriented(choice)?;
            step.main_clause = o.main_clause.clone();
            step.side_clauses = o.side_clauses.clone();
        }
        g = dp(&g, step.variable);
    }
    Ok(())
}

fn certify(f: ClauseSet, oracle: &Oracle) -> CliResult<MinUnsat> {
    Ok(oracle.certify(f)?)
}

pub fn reduce(mode: ReduceMode, opts: &Options, oracle: &Oracle) -> CliResult<String> {
    let (name, io) = match &mode {
        ReduceMode::SdpGreedy { io } => ("sdp-greedy", io),
        ReduceMode::SdpTuple { io, .. } => ("sdp-tuple", io),
        ReduceMode::Dp { io, .. } => ("dp", io),
        ReduceMode::R1 { io } => ("r1", io),
        ReduceMode::R2 { io } => ("r2", io),
        ReduceMode::Preprocess { io, .. } => ("preprocess", io),
    };
    let ReduceIo { file, output, trace } = io.clone();
    let f = read_cnf(&file)?;
    let sdp = |result: CliResult<(MinUnsat, ReductionTrace)>| -> CliResult<(ClauseSet, Value)> {
        let (g, mut t) = result?;
        orient_trace(&mut t, &opts.choice())?;
        Ok((g.into_inner(), serde_json::to_value(&t).expect("trace serializes")))
    };
    let (g, steps) = match &mode {
        ReduceMode::SdpGreedy { .. } => {
            let m = certify(f.clone(), oracle)?;
            sdp(sdp_greedy(&m, verifier(opts, oracle)).map_err(Into::into))?
        }
        ReduceMode::SdpTuple { vars, .. } => {
            let m = certify(f.clone(), oracle)?;
            let result = sdp_sequence(&m, &vars.0, verifier(opts, oracle)).map_err(|e| match e {
                Error::NotSingular(v) => {
                    let mut g = m.clause_set().clone();
                    let step = vars.0.iter().position(|&w| {
                        let stuck = !is_singular(&g, w);
                        g = dp(&g, w);
                        stuck
                    });
                    let step = step.map_or(0, |i| i + 1);
                    Error::Precondition(format!("step {step}: variable {v} is not singular")).into()
                }
                other => other.into(),
            });
            sdp(result)?
        }
        ReduceMode::Dp { var, .. } => (dp(&f, Variable(*var)), json!([])),
        ReduceMode::R1 { .. } => (r1(&f), json!([])),
        ReduceMode::R2 { .. } => (r2(&f), json!([])),
        ReduceMode::Preprocess { k, .. } => {
            let (g, steps) = bounded_dp_preprocess(&f, *k);
            (g, serde_json::to_value(steps).expect("steps serialize"))
        }
    };
    let dimacs = emit_dimacs(&g);
    if let Some(path) = &trace {
        let mut s = serde_json::to_string_pretty(&steps).expect("steps serialize");
        s.push('\n');
        write_file(path, &s)?;
    }
    let report = ReductionReport {
        mode: name.to_owned(),
        input: Summary::of(&f),
        result: Summary::of(&g),
        steps,
        dimacs,
    };
    match &output {
        Some(path) => {
            write_file(path, &report.dimacs)?;
            Ok(if opts.json { report.render(true) } else { String::new() })
        }
        None => Ok(report.render(opts.json)),
    }
}

pub fn classify(path: &Path, opts: &Options, oracle: &Oracle) -> CliResult<String> {
    let m = certify(read_cnf(path)?, oracle)?;
    let confluence = classify_confluence(&m, oracle, opts.limit, DEFAULT_ISO_BOUND)?;
    let mutt = match m.deficiency() {
        2 => Some(mutt(&m, verifier(opts, oracle))?),
        _ => None,
    };
    let report = ClassifyReport {
        input: Summary::of(m.clause_set()),
        confluence,
        mutt,
    };
    Ok(report.render(opts.json))
}

pub fn generate(kind: GenerateKind, opts: &Options, oracle: &Oracle) -> CliResult<String> {
    match kind {
        GenerateKind::Dn { n, output } => {
            let f = if opts.verify {
                gen_dn_verified(n, oracle)?.into_inner()
            } else {
                gen_dn(n)?
            };
            let report = InstanceReport {
                summary: Summary::of(&f),
                dimacs: emit_dimacs(&f),
            };
            match output {
                Some(path) => {
                    write_file(&path, &report.dimacs)?;
                    Ok(if opts.json { report.render(true) } else { String::new() })
                }
                None => Ok(report.render(opts.json)),
            }
        }
        GenerateKind::Corpus { recipe, out } => {
            let text = fs::read_to_string(&recipe).map_err(CliError::io(&recipe))?;
            let parsed: GeneratorRecipe =
                serde_json::from_str(&text).map_err(|source| CliError::Recipe { path: recipe.clone(), source })?;
            let instances = generate_mu_corpus(&parsed, oracle)?;
            let manifest = write_corpus(&out, &parsed, &instances, oracle, opts.limit)?;
            Ok(CorpusReport::new(&out, manifest).render(opts.json))
        }
    }
}

fn load_corpus(dir: &Path, oracle: &Oracle) -> CliResult<Vec<MinUnsat>> {
    if !dir.is_dir() {
        return Err(Error::Precondition(format!("corpus directory {} not found", dir.display())).into());
    }
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(CliError::io(dir))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "cnf"))
        .collect();
    files.sort();
    files
        .iter()
        .map(|p| {
            oracle.certify(read_cnf(p)?).map_err(|e| match e {
                Error::Precondition(m) => Error::Precondition(format!("{}: {m}", p.display())).into(),
                other => other.into(),
            })
        })
        .collect()
}

pub fn check(
    suites: &[Suite],
    corpus_dir: Option<&Path>,
    samples: usize,
    opts: &Options,
    oracle: &Oracle,
) -> CliResult<String> {
    let (source, corpus) = match corpus_dir {
        Some(dir) => (dir.display().to_string(), load_corpus(dir, oracle)?),
        None => ("built-in".to_owned(), builtin_corpus(oracle)?),
    };
    let config = SuiteConfig {
        seed: opts.seed,
        samples,
        limit: opts.limit,
    };
    let reports = suites
        .iter()
        .map(|&s| run_suite(s, &corpus, oracle, &config))
        .collect::<Result<Vec<_>, _>>()?;
    let report = CheckReport {
        corpus: source,
        instances: corpus.len(),
        passed: reports.iter().all(|r| r.passed()),
        suites: reports,
    };
    let out = report.render(opts.json);
    if report.passed {
        Ok(out)
    } else {
        Err(CliError::Failed(out))
    }
}
