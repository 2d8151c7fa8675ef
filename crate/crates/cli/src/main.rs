//! `genpres`: evaluation, searches, Q construction, compilation and bounded
//! lemma checks from the command line.
//!
//! Exit codes: 0 success, 1 violations found by `verify`, 2 usage or
//! configuration errors.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "genpres", version, about = "Exact generalised polynomials and bounded definability checks")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Session config file (`key = value` lines).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for every randomised step.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for `verify all`.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write reports here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Progress and per-lemma summaries on stderr.
    #[arg(long, short, global = true)]
    pub verbose: bool,
    /// Attach runtime_ms to report records.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact values of an expression in `n` over a range.
    Eval {
        expr: String,
        /// Inclusive range `a..b`, or a single integer.
        #[arg(long, default_value = "0..10", allow_hyphen_values = true)]
        n: String,
    },
    /// g(n) with ⌊αn⌉ for the Theorem A or Bohr-set sequence.
    Table {
        #[arg(long, default_value = "1..20", allow_hyphen_values = true)]
        n: String,
        #[arg(long, value_enum, default_value_t = SeqKind::Generalised)]
        kind: SeqKind,
    },
    /// Diophantine-approximation searches.
    #[command(subcommand)]
    Search(SearchCmd),
    /// Build, export or import the quadruple set Q.
    #[command(subcommand)]
    Quadruples(QuadCmd),
    /// Compile p(x⃗) = 0 to a sentence over (Z; +, 1, Q).
    Compile {
        poly: String,
        /// Also search the sentence against Q within bounds.
        #[arg(long)]
        check: bool,
        #[arg(long)]
        m_bound: Option<i128>,
        #[arg(long)]
        y_bound: Option<i128>,
        #[arg(long)]
        z_bound: Option<i128>,
    },
    /// Run one lemma check, or `all`, emitting JSON lines.
    Verify(VerifyArgs),
    /// Orbit against push-forward histograms for (⦃αn⦄, ⦃α⌊θn⌉⦄).
    Equidist {
        #[arg(long, default_value = "alpha")]
        alpha: String,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
        b: i64,
        #[arg(long, default_value_t = 3, allow_hyphen_values = true)]
        c: i64,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, default_value_t = 200_000)]
        orbit: u64,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 20)]
        grid: usize,
        /// Include both histograms in the report.
        #[arg(long)]
        hist: bool,
    },
    /// The Bohr-set sequence and its bounded formulas.
    #[command(subcommand)]
    Bohr(BohrCmd),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeqKind {
    /// g(n) = ⌊βn⌊αn⌉⌉
    Generalised,
    /// g(n) = 1[‖αn²‖ < ρ]
    Bohr,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum StrategyArg {
    Exhaustive,
    Hybrid,
    Convergents,
}

#[derive(Subcommand, Debug)]
pub enum SearchCmd {
    /// Partial quotients of a constant expression.
    Cf {
        expr: String,
        #[arg(long, default_value_t = 12)]
        terms: usize,
    },
    /// Least m with ‖x·m‖ < eps.
    SmallNorm {
        expr: String,
        #[arg(long)]
        eps: String,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = StrategyArg::Hybrid)]
        strategy: StrategyArg,
    },
    /// A base m whose progression has Δ_m²g constant up to r·m.
    Progression {
        #[arg(long)]
        r: i64,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
    },
    /// Least n₂ ≥ C·n₁ with Δ°²g(n₀, n₁, n₂) = 0.
    Lemma32 {
        #[arg(long)]
        n0: i64,
        #[arg(long)]
        n1: i64,
        /// Scale constant; calibrated when omitted.
        #[arg(long)]
        c: Option<i64>,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
    },
    /// Least n meeting every target `EXPR:lo:hi` (fractional part on the arc).
    Weyl {
        #[arg(long = "target", required = true)]
        targets: Vec<String>,
        #[arg(long, default_value_t = 1)]
        start: i64,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum QuadCmd {
    /// Build Q and report its size and the Q1 check.
    Build(QuadBuild),
    /// Build Q and write it as sorted `m,a,b,c` lines.
    Export(QuadBuild),
    /// Read a CSV file and report the Q1 and Q2 checks.
    Import {
        path: PathBuf,
        #[arg(long, default_value_t = 4)]
        q2_k_max: i128,
    },
}

#[derive(Args, Debug)]
pub struct QuadBuild {
    #[arg(long, default_value_t = 100)]
    pub m_max: i64,
    #[arg(long, default_value_t = 100)]
    pub h_factor: i64,
    /// Close under sign changes of a and b.
    #[arg(long)]
    pub pm: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Lemma id (2.1, 2.2, 3.1, …, Q1, Q2, Q, 4.1, …, 4.5) or `all`.
    pub id: String,
    /// Check an imported Q (CSV) instead of building one; Q1 and Q2 only.
    #[arg(long)]
    pub from: Option<PathBuf>,
    #[arg(long)]
    pub m_max: Option<i64>,
    #[arg(long)]
    pub h_factor: Option<i64>,
    #[arg(long)]
    pub max: Option<i64>,
    /// Small-scale defaults instead of the acceptance scale.
    #[arg(long)]
    pub quick: bool,
    /// Override any setting, e.g. `suite.lemma33_m_max=500` or `bounds.big_m_cap=8000`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

#[derive(Subcommand, Debug)]
pub enum BohrCmd {
    /// g(n) over a range.
    G {
        #[arg(long, default_value = "0..20", allow_hyphen_values = true)]
        n: String,
    },
    /// μ(m, N): g(n + m) = g(n) for 1 ≤ n ≤ N.
    Mu {
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long = "big-n")]
        big_n: i64,
    },
    /// λ(m, N): some n with μ(n, N) and μ(n + m, N).
    Lambda {
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long = "big-n")]
        big_n: i64,
        #[arg(long, default_value_t = 2)]
        tries: usize,
        #[arg(long, default_value_t = 16)]
        finest: u32,
    },
    /// Bounded κ(m, N).
    Kappa {
        #[arg(long)]
        m: i64,
        #[arg(long = "big-n")]
        big_n: i64,
    },
    /// Bounded ν(m, m̃, N).
    Nu {
        #[arg(long)]
        m: i64,
        #[arg(long)]
        m_tilde: i64,
        #[arg(long = "big-n")]
        big_n: i64,
    },
    /// Bounded δ(m, m̃).
    Delta {
        #[arg(long)]
        m: i64,
        #[arg(long)]
        m_tilde: i64,
    },
    /// The explicit sequence n_i deciding m | m̃.
    Divisibility {
        #[arg(long)]
        m: i64,
        #[arg(long)]
        m_tilde: i64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
