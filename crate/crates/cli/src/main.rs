mod commands;
mod error;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mu_forge::dp::Choice;
use mu_forge::suites::Suite;
use mu_forge::Variable;

use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(name = "mu-forge", version, about = "Singular DP-reduction toolkit for minimally unsatisfiable CNF")]
struct Cli {
    #[command(flatten)]
    opts: Options,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Options {
    /// Print the JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Re-check MU and deficiency after every reduction step.
    #[arg(long, global = true)]
    pub verify: bool,
    /// Variable bound for the exact oracle [env: MU_FORGE_BOUND].
    #[arg(long, global = true, value_name = "N")]
    pub bound: Option<usize>,
    /// Cap on visited states when enumerating reduction results.
    #[arg(long, global = true, value_name = "K", default_value_t = 20_000)]
    pub limit: usize,
    #[arg(long, global = true, value_name = "S", default_value_t = 0)]
    pub seed: u64,
    /// Orientation of a 1-singular variable, e.g. `neg:3`. Repeatable.
    #[arg(long, global = true, value_name = "pos|neg:VAR", value_parser = parse_choice)]
    pub choice: Vec<(Variable, bool)>,
}

impl Options {
    pub fn choice(&self) -> Choice {
        self.choice.iter().copied().collect()
    }
}

fn parse_choice(s: &str) -> Result<(Variable, bool), String> {
    let (pol, var) = s.split_once(':').ok_or("expected pos:VAR or neg:VAR")?;
    let positive = match pol {
        "pos" => true,
        "neg" => false,
        _ => return Err(format!("unknown polarity `{pol}`")),
    };
    match var.parse::<u32>() {
        Ok(v) if v > 0 => Ok((Variable(v), positive)),
        _ => Err(format!("invalid variable `{var}`")),
    }
}

#[derive(Clone, Debug)]
pub struct VarList(pub Vec<Variable>);

fn parse_vars(s: &str) -> Result<VarList, String> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| match t.trim().parse::<u32>() {
            Ok(v) if v > 0 => Ok(Variable(v)),
            _ => Err(format!("invalid variable `{t}`")),
        })
        .collect::<Result<_, _>>()
        .map(VarList)
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Report structural properties of a clause-set.
    Analyze { file: PathBuf },
    /// Reduce a clause-set and print the result as DIMACS.
    Reduce {
        #[command(subcommand)]
        mode: ReduceMode,
    },
    /// Classify the singular DP-reduction results of an MU clause-set.
    Classify { file: PathBuf },
    /// Generate instances.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
    },
    /// Run a property suite against a corpus.
    Check {
        /// A suite name or `all`.
        #[arg(value_parser = parse_suites)]
        suite: SuiteSelection,
        /// Directory of `.cnf` files; defaults to the built-in corpus.
        #[arg(long, value_name = "DIR")]
        corpus: Option<PathBuf>,
        /// Random maximal tuples sampled per instance.
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
}

#[derive(Clone, Debug)]
pub struct SuiteSelection(pub Vec<Suite>);

fn parse_suites(s: &str) -> Result<SuiteSelection, String> {
    if s == "all" {
        return Ok(SuiteSelection(Suite::ALL.to_vec()));
    }
    s.parse::<Suite>().map(|x| SuiteSelection(vec![x])).map_err(|e| e.to_string())
}

#[derive(Args, Debug, Clone)]
pub struct ReduceIo {
    pub file: PathBuf,
    /// Write the reduced clause-set here instead of standard output.
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
    /// Write the reduction trace as JSON.
    #[arg(long, value_name = "FILE")]
    pub trace: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum ReduceMode {
    /// Eliminate the lowest singular variable until none is left.
    SdpGreedy {
        #[command(flatten)]
        io: ReduceIo,
    },
    /// Eliminate the given singular variables in order.
    SdpTuple {
        /// Comma-separated variables.
        #[arg(value_parser = parse_vars)]
        vars: VarList,
        #[command(flatten)]
        io: ReduceIo,
    },
    /// One DP-reduction step on an arbitrary variable.
    Dp {
        var: u32,
        #[command(flatten)]
        io: ReduceIo,
    },
    /// Unit-clause propagation.
    R1 {
        #[command(flatten)]
        io: ReduceIo,
    },
    /// Generalised unit propagation up to level 2.
    R2 {
        #[command(flatten)]
        io: ReduceIo,
    },
    /// Eliminate variables whose elimination adds at most K clauses.
    Preprocess {
        k: usize,
        #[command(flatten)]
        io: ReduceIo,
    },
}

#[derive(Subcommand, Debug)]
pub enum GenerateKind {
    /// The minimally unsatisfiable cycle D_n.
    Dn {
        n: usize,
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// A corpus of MU instances described by a JSON recipe.
    Corpus {
        recipe: PathBuf,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> Result<String, CliError> {
    let oracle = commands::oracle(&cli.opts)?;
    let opts = &cli.opts;
    match cli.command {
        Command::Analyze { file } => commands::analyze(&file, opts, &oracle),
        Command::Reduce { mode } => commands::reduce(mode, opts, &oracle),
        Command::Classify { file } => commands::classify(&file, opts, &oracle),
        Command::Generate { kind } => commands::generate(kind, opts, &oracle),
        Command::Check { suite, corpus, samples } => commands::check(&suite.0, corpus.as_deref(), samples, opts, &oracle),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(CliError::Failed(out)) => {
            print!("{out}");
            eprintln!("error: property check failed");
            ExitCode::from(5)
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.into()
        }
    }
}
