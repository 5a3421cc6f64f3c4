//! `fsdepth`: finite-state and polynomial-time depth experiments.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

#[derive(Parser, Debug)]
#[command(name = "fsdepth", version, about = "Finite-state complexity, dimension and depth at desk scale")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every subcommand. Each can also be set through the
/// matching `FSDEPTH_*` variable.
#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Single budget; sets both --kmin and --kmax.
    #[arg(long, global = true, env = "FSDEPTH_K")]
    pub k: Option<usize>,
    #[arg(long, global = true, env = "FSDEPTH_KMIN")]
    pub kmin: Option<usize>,
    #[arg(long, global = true, env = "FSDEPTH_KMAX")]
    pub kmax: Option<usize>,
    /// Single prefix length; shorthand for a one-point grid.
    #[arg(long, global = true, env = "FSDEPTH_N")]
    pub n: Option<usize>,
    /// Prefix lengths: `32`, `8,16`, `1..64`, `8..512:8` or `pow2:3..9`.
    #[arg(long, global = true, env = "FSDEPTH_NGRID")]
    pub ngrid: Option<String>,
    /// Longest output label enumerated; unbounded when omitted.
    #[arg(long, global = true, env = "FSDEPTH_LMAX")]
    pub lmax: Option<usize>,
    /// Worker threads; 0 picks one per core.
    #[arg(long, global = true, env = "FSDEPTH_WORKERS", default_value_t = 0)]
    pub workers: usize,
    /// Complexity cache to extend and check.
    #[arg(long, global = true, env = "FSDEPTH_CACHE")]
    pub cache: Option<PathBuf>,
    /// JSON scale pack for the deep generator.
    #[arg(long = "scale-pack", global = true, env = "FSDEPTH_SCALE_PACK")]
    pub scale_pack: Option<PathBuf>,
    /// csv or json.
    #[arg(long, global = true, env = "FSDEPTH_FORMAT", default_value = "csv")]
    pub format: String,
    /// Machine file, or `builtin:NAME`.
    #[arg(long, global = true, env = "FSDEPTH_MACHINE")]
    pub machine: Option<String>,
    /// zeros, ones, alternating, champernowne, thue-morse, prng:SEED, file:PATH or deepgen.
    #[arg(long, global = true, env = "FSDEPTH_INPUT")]
    pub input: Option<String>,
    /// Largest machine count a single budget may enumerate.
    #[arg(long = "budget-ceiling", global = true, env = "FSDEPTH_BUDGET_CEILING")]
    pub budget_ceiling: Option<u64>,
    /// Report destination; standard output when omitted.
    #[arg(long, short = 'o', global = true, env = "FSDEPTH_OUTPUT")]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide information losslessness of --machine.
    IlCheck,
    /// Build the approximate inverse of an IL --machine.
    Invert {
        /// Also write the inverse as a machine file.
        #[arg(long)]
        emit_machine: Option<PathBuf>,
    },
    /// Build A′ with A′(p) = M(A(p)), A from --machine.
    Compose {
        /// The machine M applied to A's output.
        #[arg(long)]
        outer: String,
        #[arg(long)]
        emit_machine: Option<PathBuf>,
    },
    /// D^k of prefixes of --input.
    Complexity,
    /// D^k(S↾n)/n over the grid.
    Dimension,
    /// Depth gaps D^k − D^k′ over the grid.
    DepthProfile {
        /// Large budgets, paired with every k below them.
        #[arg(long, value_delimiter = ',', default_value = "16")]
        kprime: Vec<usize>,
    },
    /// Run the staged deep-sequence construction.
    Deepgen {
        /// Write the generated prefix as text.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Check the slow growth inequality for an IL machine on a sequence.
    Sgl {
        #[arg(long, default_value_t = 10)]
        l: usize,
        #[arg(long, default_value_t = 24)]
        kprime: usize,
        /// Largest budget enumerated; defaults to k′.
        #[arg(long)]
        cap: Option<usize>,
        /// Shift max(c1, c2); measured when omitted.
        #[arg(long)]
        c: Option<usize>,
        /// Source prefix length.
        #[arg(long, default_value_t = 1326)]
        source_len: usize,
    },
    /// Check both concatenation bounds over short strings.
    ConcatCheck {
        #[arg(long, value_delimiter = ',', default_value = "10,11")]
        ls: Vec<usize>,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        #[arg(long, default_value_t = 24)]
        cap: usize,
    },
    /// Ratio p′/p against a·log n for predictors on a language.
    PtProfile {
        /// Builtin language name or language file.
        #[arg(long, default_value = "prime-index")]
        language: String,
        /// Predictor file; the builtin corpus when omitted.
        #[arg(long)]
        predictors: Option<PathBuf>,
        /// Name of the base predictor p within the corpus.
        #[arg(long, default_value = "uniform")]
        base: String,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
    },
    /// Transport predictors across a monotone reduction and compare ratios.
    PtSgl {
        #[arg(long, default_value = "even-weight")]
        language: String,
        /// identity, pad:I, append-one or doubling.
        #[arg(long, default_value = "pad:1")]
        reduction: String,
        /// Override the reduction's index exponent c.
        #[arg(long)]
        c: Option<u32>,
        #[arg(long)]
        predictors: Option<PathBuf>,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = 64)]
        nmax: u64,
    },
    /// The toy exponential-time halting language and its reductions.
    ToyHe {
        #[arg(long, default_value_t = 1024)]
        queries: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(&cli.common, &cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fsdepth: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
