use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "ltflab", version, about = "Threshold-circuit laboratory")]
pub struct Cli {
    /// Base seed for every randomized computation.
    #[arg(long, global = true, env = "LTFLAB_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Worker threads for trial-parallel work (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,

    /// File of `key=value` lines supplying further flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit a construction in the circuit text format.
    Build(BuildArgs),
    /// Evaluate a circuit or named function on one input, or print its truth table.
    Eval(EvalArgs),
    /// Count surviving bottom gates under random restrictions (CSV).
    Restrict(RestrictArgs),
    /// Estimate how often MAJ_n is not forced, over a grid of n and |P| (CSV).
    Forcing(ForcingArgs),
    /// Littlewood-Offord probe: Pr[sum a_i x_i in [lo, hi]] (CSV).
    Lo(LoArgs),
    /// Agreement of two functions, or the approximate-majority margin of circuits.
    Agree(AgreeArgs),
    /// List every LTF on n inputs as `<hex-table> <t> <w_1> ... <w_n>`.
    EnumerateLtf(EnumerateArgs),
    /// Chow parameters and LTF test of a truth table.
    Chow(ChowArgs),
    /// Small-bias matrices: export, bias, correlation profile.
    Biased(BiasedArgs),
    /// Evaluate B_{n,k}.
    BEval(BEvalArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Func {
    Parity,
    Majority,
    Andreev,
    ParityApprox,
    Tc03,
    Ltf2,
    Mod3mod2,
    Pdt,
}

#[derive(Debug, Args)]
pub struct FuncSelect {
    /// Named function or construction.
    #[arg(long, value_enum)]
    pub func: Option<Func>,

    /// Circuit file in the text format.
    #[arg(long, conflicts_with = "func")]
    pub circuit: Option<PathBuf>,

    /// Number of inputs for named functions.
    #[arg(long)]
    pub n: Option<usize>,

    /// Band width of the PARITY approximator.
    #[arg(long, default_value_t = 2)]
    pub c: u64,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[arg(long, value_enum)]
    pub func: Func,

    #[arg(long)]
    pub n: usize,

    /// Band width of the PARITY approximator.
    #[arg(long, default_value_t = 2)]
    pub c: u64,

    /// Gate bound for the depth-two LTF construction.
    #[arg(long, default_value_t = ltflab::constructions::LTF2_MAX_GATES)]
    pub max_gates: u64,

    /// Write the circuit here and print only the metrics line.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub select: FuncSelect,

    /// Input bits, x_0 first.
    #[arg(long, conflicts_with = "table")]
    pub input: Option<String>,

    /// Print the truth table as hex (row 0 first).
    #[arg(long)]
    pub table: bool,
}

#[derive(Debug, Args)]
pub struct RestrictArgs {
    #[command(flatten)]
    pub select: FuncSelect,

    /// Number of partition parts |P|.
    #[arg(long)]
    pub parts: usize,

    #[arg(long, default_value_t = ltflab::experiments::DEFAULT_TRIALS)]
    pub trials: u64,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ForcingArgs {
    /// Comma-separated input counts.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,

    /// Comma-separated part counts |P|.
    #[arg(long, value_delimiter = ',', required = true)]
    pub parts: Vec<usize>,

    #[arg(long, default_value_t = ltflab::experiments::DEFAULT_TRIALS)]
    pub trials: u64,

    /// Count restrictions leaving two or more free inputs relevant instead.
    #[arg(long)]
    pub single_input: bool,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LoArgs {
    /// Comma-separated integer weights.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "uniform")]
    pub weights: Vec<i64>,

    /// Use this many unit weights.
    #[arg(long)]
    pub uniform: Option<usize>,

    #[arg(long, allow_hyphen_values = true)]
    pub lo: i64,

    #[arg(long, allow_hyphen_values = true)]
    pub hi: i64,

    /// Exact enumeration instead of trials.
    #[arg(long)]
    pub exact: bool,

    #[arg(long, default_value_t = ltflab::experiments::DEFAULT_TRIALS)]
    pub trials: u64,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AgreeArgs {
    #[arg(long, value_enum)]
    pub f: Func,

    /// Second function (agreement mode).
    #[arg(long, value_enum, required_unless_present = "circuits")]
    pub g: Option<Func>,

    /// Comma-separated circuit files (margin mode).
    #[arg(long, value_delimiter = ',', conflicts_with = "g")]
    pub circuits: Vec<PathBuf>,

    #[arg(long)]
    pub n: usize,

    #[arg(long, default_value_t = 2)]
    pub c: u64,

    #[arg(long)]
    pub exact: bool,

    #[arg(long, default_value_t = ltflab::experiments::DEFAULT_TRIALS)]
    pub trials: u64,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub n: usize,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ChowArgs {
    /// Truth table as hex (row 0 first).
    #[arg(long, required_unless_present_any = ["func", "circuit"])]
    pub hex: Option<String>,

    #[command(flatten)]
    pub select: FuncSelect,
}

#[derive(Debug, Args)]
pub struct BiasedArgs {
    #[command(subcommand)]
    pub action: BiasedAction,
}

#[derive(Debug, Args)]
pub struct MatrixParams {
    /// Columns.
    #[arg(long)]
    pub t: usize,

    /// Field degree (rows m = 2^{2r}).
    #[arg(long)]
    pub r: u32,
}

#[derive(Debug, Subcommand)]
pub enum BiasedAction {
    /// Export the matrix.
    Build {
        #[command(flatten)]
        params: MatrixParams,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Largest bias over nonzero test vectors.
    Bias {
        #[command(flatten)]
        params: MatrixParams,
        /// Sample this many test vectors instead of all.
        #[arg(long)]
        sampled: Option<u64>,
    },
    /// Count codewords correlating with random targets beyond theta.
    Profile {
        #[command(flatten)]
        params: MatrixParams,
        #[arg(long)]
        theta: f64,
        /// Number of random targets.
        #[arg(long, default_value_t = 1)]
        targets: u64,
        /// Sample this many messages per target instead of all.
        #[arg(long)]
        sampled: Option<u64>,
    },
}

#[derive(Debug, Args)]
pub struct BEvalArgs {
    #[arg(long)]
    pub n: usize,

    #[arg(long)]
    pub k: usize,

    /// Message bits x, x_1 first.
    #[arg(long, required_unless_present = "table")]
    pub x: Option<String>,

    /// Address bits a.
    #[arg(long, required_unless_present = "table")]
    pub a: Option<String>,

    /// Print the truth table over (x, a) as hex; x occupies the low inputs.
    #[arg(long, conflicts_with_all = ["x", "a"])]
    pub table: bool,
}
