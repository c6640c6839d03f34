//! `smdc`: rate regions, cover chains, entropy checks and the three codecs.
//!
//! Exit status: 0 success/holds/member, 1 violated or non-member, 2 usage
//! error, 3 data or format error.

mod codec;
mod covers;
mod entropy;
mod region;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use smdc_core::{rational, Rational};

use report::{error_status, Report, Status};

#[derive(Parser, Debug)]
#[command(name = "smdc", version, about = "Symmetrical multilevel diversity coding toolkit")]
struct Cli {
    /// Print the JSON envelope {command, inputs, result, certificate?} instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Seed for every randomized step (pmf sampling, S-SMDC keys).
    #[arg(long, global = true, env = "SMDC_SEED")]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact rate-region computations.
    #[command(subcommand)]
    Region(RegionCmd),
    /// Coefficient chains and fractional covers.
    #[command(subcommand)]
    Covers(CoversCmd),
    /// Subset entropies and inequality checks on joint pmfs.
    #[command(subcommand)]
    Entropy(EntropyCmd),
    /// Encode sources into share bundles and decode them back.
    #[command(subcommand)]
    Codec(CodecCmd),
}

/// Comma-separated exact rationals (`p/q`, integers or decimals).
#[derive(Clone, Debug)]
pub struct Rationals(pub Vec<Rational>);

fn rationals(text: &str) -> Result<Rationals, String> {
    let values = rational::parse_list(text).map_err(|e| e.to_string())?;
    if values.is_empty() {
        return Err("expected at least one value".into());
    }
    Ok(Rationals(values))
}

fn one_rational(text: &str) -> Result<Rational, String> {
    rational::parse(text).map_err(|e| e.to_string())
}

#[derive(Subcommand, Debug)]
pub enum RegionCmd {
    /// f_α(λ) and an optimal subset assignment.
    F {
        #[arg(long, value_parser = rationals)]
        lambda: Rationals,
        #[arg(long)]
        alpha: usize,
    },
    /// f_1(λ) … f_L(λ).
    Profile {
        #[arg(long, value_parser = rationals)]
        lambda: Rationals,
    },
    /// Minimum sum rate Σ_α (L/α) H_α.
    MinSum {
        #[arg(long, value_parser = rationals)]
        entropies: Rationals,
    },
    /// Membership in the SMDC region.
    Member {
        #[arg(long, value_parser = rationals)]
        rates: Rationals,
        #[arg(long, value_parser = rationals)]
        entropies: Rationals,
    },
    /// Membership in the SMDC-A region.
    MemberA {
        #[arg(long, value_parser = one_rational)]
        r0: Rational,
        #[arg(long, value_parser = rationals)]
        rates: Rationals,
        #[arg(long, value_parser = rationals)]
        entropies: Rationals,
    },
    /// Membership in the S-SMDC region; `--entropies` lists H_1 … H_{L−N}.
    MemberS {
        #[arg(long, value_parser = rationals)]
        rates: Rationals,
        #[arg(long, value_parser = rationals)]
        entropies: Rationals,
        #[arg(long)]
        n: usize,
    },
    /// Greedy split of the all-access budget R_0.
    Greedy {
        #[arg(long, value_parser = one_rational)]
        r0: Rational,
        #[arg(long, value_parser = rationals)]
        entropies: Rationals,
        /// Also check that max_m g_m(λ) is attained at the greedy level.
        #[arg(long, value_parser = rationals)]
        lambda: Option<Rationals>,
    },
    /// Right sides of the SMDC-A breakpoint inequalities for λ.
    HyperplaneA {
        #[arg(long, value_parser = rationals)]
        lambda: Rationals,
        #[arg(long, value_parser = rationals)]
        entropies: Rationals,
        /// Report only breakpoint m.
        #[arg(long)]
        m: Option<usize>,
        /// Also evaluate the general right side at this R_0 weight.
        #[arg(long, value_parser = one_rational)]
        lambda0: Option<Rational>,
    },
}

#[derive(Subcommand, Debug)]
pub enum CoversCmd {
    /// The uniform chain c(U) = 1/(α·C(L,α)).
    Han {
        #[arg(long)]
        encoders: usize,
    },
    /// Coefficient chain for λ, linked by fractional covers.
    Chain {
        #[arg(long, value_parser = rationals)]
        lambda: Rationals,
        /// Write the chain text here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Conditional assignment for N conditioning encoders.
    Conditional {
        #[arg(long, value_parser = rationals)]
        lambda: Rationals,
        #[arg(long)]
        n: usize,
    },
    /// Exact verification of a chain text file.
    Verify {
        #[arg(long)]
        chain_file: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Han,
    Window,
    Mt,
    Yz,
    Cyz,
}

/// Where the joint pmf comes from.
#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct PmfSource {
    /// PMF text file.
    #[arg(long)]
    pub pmf: Option<PathBuf>,
    /// Random pmf with these alphabet sizes, e.g. `2,3,2`.
    #[arg(long, value_delimiter = ',')]
    pub random: Option<Vec<usize>>,
}

#[derive(Subcommand, Debug)]
pub enum EntropyCmd {
    /// H(X_U) for one set, or for every nonempty subset.
    H {
        #[command(flatten)]
        source: PmfSource,
        /// Comma-joined 1-based indices.
        #[arg(long)]
        set: Option<String>,
    },
    /// Numerical check of one subset entropy inequality.
    Check {
        #[arg(long, value_enum)]
        which: Which,
        #[command(flatten)]
        source: PmfSource,
        /// Level α; every level when omitted.
        #[arg(long)]
        alpha: Option<usize>,
        /// Encoder weights for `yz` and `cyz` (default all ones).
        #[arg(long, value_parser = rationals)]
        lambda: Option<Rationals>,
        /// Chain text file for `yz`.
        #[arg(long)]
        chain_file: Option<PathBuf>,
        /// Conditioning encoders for `cyz`.
        #[arg(long, default_value_t = 0)]
        n: usize,
        /// Parent set for `mt`, covered uniformly by its children (default Ω).
        #[arg(long)]
        set: Option<String>,
        /// Number of random pmfs (with `--random`).
        #[arg(long, default_value_t = 1)]
        trials: usize,
    },
    /// Every α-subset is hit L·α!·(L−α)! times by permuted windows.
    PermIdentity {
        #[arg(long)]
        encoders: usize,
        #[arg(long)]
        alpha: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Smdc,
    #[value(name = "smdc-a")]
    SmdcA,
    #[value(name = "s-smdc")]
    Ssmdc,
}

#[derive(Subcommand, Debug)]
pub enum CodecCmd {
    /// Writes `<stem>.enc<l>.smdc` for every encoder.
    Encode {
        #[arg(long, value_enum, default_value = "smdc")]
        scheme: SchemeArg,
        /// Source files W_1, W_2, … in priority order.
        #[arg(long, value_delimiter = ',', required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value = "share")]
        stem: String,
        /// Encoder-0 budget in bytes (smdc-a).
        #[arg(long, default_value_t = 0)]
        r0_bytes: u64,
        /// Secrecy threshold N (s-smdc).
        #[arg(long, default_value_t = 0)]
        n: usize,
        /// Key bytes for s-smdc; otherwise drawn from `--seed` or the OS.
        #[arg(long)]
        key_file: Option<PathBuf>,
    },
    /// Recovers W_1 … W_k from any bundles of one encoding.
    Decode {
        #[arg(long, value_delimiter = ',', required = true)]
        bundles: Vec<PathBuf>,
        #[arg(long)]
        out_dir: PathBuf,
        /// Output names for the recovered sources (default `source<α>.bin`).
        #[arg(long, value_delimiter = ',')]
        outputs: Option<Vec<PathBuf>>,
    },
}

pub struct Context {
    pub seed: Option<u64>,
}

fn run(cli: Cli) -> smdc_core::Result<Report> {
    let ctx = Context { seed: cli.seed };
    match cli.command {
        Command::Region(cmd) => region::run(cmd),
        Command::Covers(cmd) => covers::run(cmd),
        Command::Entropy(cmd) => entropy::run(cmd, &ctx),
        Command::Codec(cmd) => codec::run(cmd, &ctx),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code().clamp(0, 255) as u8);
        }
    };
    let as_json = cli.json;
    match run(cli) {
        Ok(report) => {
            println!("{}", report.render(as_json));
            ExitCode::from(report.status as u8)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(error_status(&err) as u8)
        }
    }
}

impl Status {
    pub fn from_holds(holds: bool) -> Self {
        if holds {
            Status::Ok
        } else {
            Status::Violated
        }
    }
}
