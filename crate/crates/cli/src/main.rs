mod bundle;
mod commands;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use weylcode::Limits;

/// Construct, verify and simulate quantum codes given by Fourier
/// descriptions of abelian subgroups of the Weyl error group.
#[derive(Parser)]
#[command(name = "weylcode", version)]
struct Cli {
    /// Worker threads (default: one per core). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(flatten)]
    caps: Caps,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Caps {
    /// Maximum number of errors in an error sphere.
    #[arg(long, global = true, default_value_t = Limits::default().max_errors)]
    max_errors: u64,
    /// Maximum subgroup size q^r on paths that list the whole subgroup.
    #[arg(long, global = true, default_value_t = Limits::default().max_group)]
    max_group: u64,
    /// Maximum Hilbert-space dimension q^n for state-vector paths.
    #[arg(long, global = true, default_value_t = Limits::default().max_state_dim)]
    max_state_dim: u64,
    /// Maximum number of enumerated subsets or subspaces.
    #[arg(long, global = true, default_value_t = Limits::default().max_subsets)]
    max_subsets: u64,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum FamilyName {
    /// ((n, 1 + n(q - 1), 2))_q over the sum-zero spec.
    D2,
    /// ((15, 8, 3))_2 from eight subsets of {1..15}.
    #[value(name = "15_8_3")]
    Fifteen,
    /// ((33, 155, 3))_2 from the 2-dimensional subspaces of GF(3)^5.
    Subspace33,
    /// ((31, 155, 3))_2, the punctured subspace code.
    Subspace31,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Order {
    WeightLex,
    Lex,
}

#[derive(Args)]
pub struct Input {
    /// Read the bundle from this file instead of standard input.
    #[arg(long, short)]
    input: Option<PathBuf>,
}

impl Input {
    fn read(&self) -> Result<String, CliError> {
        let mut text = String::new();
        match &self.input {
            Some(p) => {
                text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?
            }
            None => {
                std::io::stdin()
                    .read_to_string(&mut text)
                    .map_err(|e| CliError::Usage(format!("stdin: {e}")))?;
            }
        }
        Ok(text)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Emit a named construction as a code bundle.
    Family {
        #[arg(long, value_enum)]
        name: FamilyName,
        /// Length (d2 only).
        #[arg(long, default_value_t = 5)]
        n: usize,
        /// Field size (d2 only).
        #[arg(long, default_value_t = 2)]
        q: u32,
    },
    /// Algebraic distance check of a bundle.
    Verify {
        /// Distance to check (default: the claimed one).
        #[arg(long)]
        d: Option<usize>,
        #[command(flatten)]
        input: Input,
    },
    /// Knill-Laflamme check on simulated codewords.
    Oracle {
        #[arg(long)]
        d: Option<usize>,
        #[command(flatten)]
        input: Input,
    },
    /// Greedy packing over the spec of a bundle; emits a new bundle.
    Greedy {
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum, default_value = "weight-lex")]
        order: Order,
        #[command(flatten)]
        input: Input,
    },
    /// Run the encoder circuit on the message of member u.
    EncodeSim {
        /// Member of B, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        u: Vec<i64>,
        /// Number of largest amplitudes to print.
        #[arg(long, default_value_t = 16)]
        top: usize,
        #[command(flatten)]
        input: Input,
    },
    /// Apply w^phase U_a V_b to the codeword of u, then decode.
    DecodeSim {
        #[arg(long, value_delimiter = ',', required = true)]
        u: Vec<i64>,
        /// Shift part of the error (default 0).
        #[arg(long, value_delimiter = ',')]
        a: Vec<i64>,
        /// Multiplication part of the error (default 0).
        #[arg(long, value_delimiter = ',')]
        b: Vec<i64>,
        #[arg(long, default_value_t = 0)]
        phase: i64,
        /// Largest error weight the decoder searches (default (d - 1) / 2).
        #[arg(long)]
        t: Option<usize>,
        #[command(flatten)]
        input: Input,
    },
    /// CSV of the built-in codes with their dimension bounds.
    Table,
    /// Seeded random search for an alpha-good binary matrix.
    AlphaGood {
        #[arg(long)]
        n: usize,
        /// Rational alpha, e.g. 1/10.
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        attempts: usize,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(weylcode::Error),
}

impl From<weylcode::Error> for CliError {
    fn from(e: weylcode::Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

/// Text for standard output and the exit status.
pub struct Outcome {
    pub output: String,
    pub pass: bool,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Outcome { output, pass: true }
    }
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let lim = Limits {
        max_errors: cli.caps.max_errors,
        max_group: cli.caps.max_group,
        max_state_dim: cli.caps.max_state_dim,
        max_subsets: cli.caps.max_subsets,
    };
    match cli.command {
        Command::Family { name, n, q } => commands::family(name, n, q, &lim).map(Outcome::ok),
        Command::Verify { d, input } => commands::verify(&input.read()?, d, &lim),
        Command::Oracle { d, input } => commands::oracle(&input.read()?, d, &lim),
        Command::Greedy { d, order, input } => {
            commands::greedy(&input.read()?, d, order, &lim).map(Outcome::ok)
        }
        Command::EncodeSim { u, top, input } => {
            commands::encode_sim(&input.read()?, &u, top, &lim).map(Outcome::ok)
        }
        Command::DecodeSim {
            u,
            a,
            b,
            phase,
            t,
            input,
        } => commands::decode_sim(&input.read()?, &u, &a, &b, phase, t, &lim),
        Command::Table => commands::table(&lim).map(Outcome::ok),
        Command::AlphaGood {
            n,
            alpha,
            seed,
            attempts,
        } => commands::alpha_search(n, &alpha, seed, attempts, &lim).map(Outcome::ok),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{}", out.output);
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
