//! `dimlab` command-line front end.

mod commands;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dimlab::{Error, Limits};

use output::Format;

#[derive(Parser, Debug)]
#[command(
    name = "dimlab",
    version,
    about = "Exact dimensions, covers and closure bounds for finite hypothesis classes"
)]
pub struct Cli {
    /// Cap on every counted search (states, nodes, tuples, cover candidates).
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Emit JSON (the default).
    #[arg(long, global = true, conflicts_with = "text")]
    pub json: bool,
    /// Emit `key: value` lines.
    #[arg(long, global = true)]
    pub text: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Littlestone, threshold and VC dimensions with certificates.
    Dim {
        class: PathBuf,
        #[arg(long, value_enum, default_value_t = Which::All)]
        which: Which,
    },
    /// Composes classes under an aggregator.
    Compose {
        aggregator: PathBuf,
        #[arg(required = true)]
        classes: Vec<PathBuf>,
        /// Write the composed class here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A 0-cover of a class on a point tree.
    Cover {
        class: PathBuf,
        tree: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        /// Write the cover here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Thicket shatter count of a class on a point tree.
    Rho { class: PathBuf, tree: PathBuf },
    /// Writes generated classes, trees, aggregators or instances.
    Gen {
        #[command(subcommand)]
        what: Gen,
        #[arg(long, global = true, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Checks one of the closure or covering inequalities.
    VerifyBound {
        #[command(subcommand)]
        kind: Bound,
    },
    /// Extracts a threshold witness from a staircase instance.
    Extract {
        instance: PathBuf,
        #[arg(long)]
        d: usize,
    },
    /// Plays the standard optimal algorithm against an adversary.
    Soa {
        class: PathBuf,
        /// JSON list of `[point, label]` pairs; the optimal adversary plays otherwise.
        #[arg(long)]
        script: Option<PathBuf>,
    },
    /// Everything about one class: dimensions, game value, covers on its tree.
    Report { class: PathBuf },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    Ldim,
    Tdim,
    Vc,
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Canonical,
    Greedy,
    Exact,
}

#[derive(Subcommand, Debug)]
pub enum Gen {
    /// Projections `x -> x_j` over `{0,1}^D`.
    Projections { d: usize },
    /// Monotone disjunctions of at most `k` of `D` coordinates.
    Disjunctions { d: usize, k: usize },
    /// Thresholds `1[b >= x]` on `{0..D-1}`.
    Thresholds { d: usize },
    /// The depth-`n` class and tree with one solvable sign sequence.
    ThicketGap { n: usize },
    /// The arity-`2k` and arity-`3k` staircase rules.
    StaircaseAggregators { k: usize },
    /// The `3k` classes and rule of the threshold lower-bound instance.
    TdimLb {
        d: usize,
        k: usize,
        /// Inner class on `{0..D-1}`; thresholds by default.
        #[arg(long)]
        j: Option<PathBuf>,
    },
    /// Thresholds of coordinate `j` (1-based) over `{0..D^k-1}`.
    CoordThresholds { d: usize, k: usize, j: usize },
    /// Exhaustive search for a small class whose pairwise ORs give all thresholds.
    SmallJ {
        d: usize,
        tdim_budget: usize,
        size_budget: usize,
    },
    /// The threshold/OR staircase instance with `n` points.
    ThresholdOrInstance {
        #[arg(default_value_t = 10)]
        n: usize,
    },
}

#[derive(Args, Debug, Clone)]
pub struct ClosureInputs {
    #[arg(long, required_unless_present = "random")]
    pub aggregator: Option<PathBuf>,
    #[arg(long = "class", required_unless_present = "random")]
    pub classes: Vec<PathBuf>,
    /// Run this many seeded random instances instead.
    #[arg(long, conflicts_with_all = ["aggregator", "classes"])]
    pub random: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct TreeInputs {
    #[arg(long, required_unless_present = "random")]
    pub class: Option<PathBuf>,
    #[arg(long, required_unless_present = "random")]
    pub tree: Option<PathBuf>,
    /// Run this many seeded random instances instead.
    #[arg(long, conflicts_with_all = ["class", "tree"])]
    pub random: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Bound {
    /// Ldim of a composition against the covering-number bound.
    LdimClosure(ClosureInputs),
    /// Tdim of a composition against the Ramsey bound, with extraction.
    TdimClosure(ClosureInputs),
    /// Minimum cover size against the Sauer-type sum.
    Sauer(TreeInputs),
    /// Thicket count against minimum cover size.
    Thicket(TreeInputs),
}

/// Why a command did not succeed.
#[derive(Debug)]
pub enum Failure {
    /// A checked property failed; the report is still printed.
    Property,
    /// Something asked for was not found; the report is still printed.
    NotFound,
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } => 3,
        Error::NoClique { .. } => 4,
        Error::Contradiction(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = if cli.text { Format::Text } else { Format::Json };
    let limits = match cli.budget {
        Some(b) => Limits::default().with_budget(b),
        None => Limits::default(),
    };
    let ctx = commands::Context {
        limits,
        seed: cli.seed,
    };
    let (report, status) = commands::run(&ctx, &cli.command);
    if let Some(report) = report {
        let mut out = std::io::stdout().lock();
        let _ = writeln!(out, "{}", output::render(&report, format));
    }
    match status {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Property) => ExitCode::from(1),
        Err(Failure::NotFound) => ExitCode::from(4),
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
