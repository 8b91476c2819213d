use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use wbisim_core::bisim::Equivalence;
use wbisim_core::solver::SaturationMode;

#[derive(Debug, Parser)]
#[command(
    name = "wbisim",
    version,
    about = "Strong, weak and delay bisimulation for weighted transition systems"
)]
pub struct Cli {
    /// Semiring to read weights in; overrides the document's own field.
    #[arg(long, global = true)]
    pub semiring: Option<String>,

    /// Instance parameter, `k=<int>` (truncation) or `epsilon=<float>`
    /// (real-float). May be repeated.
    #[arg(long = "param", global = true, value_name = "KEY=VALUE", value_parser = parse_param)]
    pub params: Vec<Param>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Structured)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Param {
    K(u64),
    Epsilon(f64),
}

fn parse_param(text: &str) -> Result<Param, String> {
    let (key, value) = text
        .split_once('=')
        .ok_or_else(|| format!("expected KEY=VALUE, got {text:?}"))?;
    match key.trim() {
        "k" => value
            .trim()
            .parse()
            .map(Param::K)
            .map_err(|_| format!("k must be a non-negative integer, got {value:?}")),
        "epsilon" => value
            .trim()
            .parse()
            .map(Param::Epsilon)
            .map_err(|_| format!("epsilon must be a number, got {value:?}")),
        other => Err(format!(
            "unknown parameter {other:?} (expected k or epsilon)"
        )),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Pretty-printed JSON.
    Structured,
    /// Graphviz.
    Dot,
    /// Line-oriented text.
    Plain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EquivalenceArg {
    Strong,
    Weak,
    Delay,
}

impl From<EquivalenceArg> for Equivalence {
    fn from(e: EquivalenceArg) -> Self {
        match e {
            EquivalenceArg::Strong => Equivalence::Strong,
            EquivalenceArg::Weak => Equivalence::Weak,
            EquivalenceArg::Delay => Equivalence::Delay,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Weak,
    Delay,
}

impl From<ModeArg> for SaturationMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Weak => SaturationMode::Weak,
            ModeArg::Delay => SaturationMode::Delay,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Expect {
    /// Outgoing mass per state is 0 or 1.
    Generative,
    /// Outgoing mass per state and label is 0 or 1.
    Reactive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverArg {
    Elimination,
    Kleene,
}

#[derive(Debug, Clone, Args)]
pub struct SolverOpts {
    #[arg(long, hide = true, value_enum, default_value_t = SolverArg::Elimination)]
    pub solver: SolverArg,

    /// Iteration cap for `--solver kleene`.
    #[arg(long, hide = true)]
    pub max_iters: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load a system and report its size, warnings and mass checks.
    Validate {
        input: PathBuf,
        /// Fail (exit 2) unless the system has this shape.
        #[arg(long, value_enum)]
        expect: Option<Expect>,
    },
    /// Compute the coarsest bisimulation partition.
    Minimize {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = EquivalenceArg::Strong)]
        equivalence: EquivalenceArg,
        /// Add the quotient system (strong) or the per-class saturation
        /// grids (weak, delay).
        #[arg(long)]
        emit_quotient: bool,
        /// Include the refinement log.
        #[arg(long)]
        trace: bool,
        /// Cross-check against brute-force enumeration (at most 8 states).
        #[arg(long, hide = true)]
        oracle: bool,
        #[command(flatten)]
        solver: SolverOpts,
    },
    /// Decide whether two states are bisimilar; exit 1 when they are not.
    Check {
        input: PathBuf,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long, value_enum, default_value_t = EquivalenceArg::Strong)]
        equivalence: EquivalenceArg,
        #[command(flatten)]
        solver: SolverOpts,
    },
    /// Print saturated weights of every state into one class.
    Saturate {
        input: PathBuf,
        /// Class members, comma separated or repeated.
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        class: Vec<String>,
        #[arg(long, value_enum, default_value_t = ModeArg::Weak)]
        mode: ModeArg,
    },
    /// Check the semiring laws on the standard samples of an instance, or of
    /// every shipped instance when `--semiring` is not given.
    Axioms,
}
