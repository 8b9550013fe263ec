//! `egmc`: key generation, encryption, decryption, parameter tables, cost
//! estimates and stabilizer distinguishers from the command line.
//!
//! Exit codes: 0 success, 1 internal error, 2 invalid parameters or usage,
//! 3 I/O failure, 4 decoding or verification failure.

mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(name = "egmc", version, about = "Enhanced Gabidulin matrix code encryption")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a key pair and write `<name>.pk` and `<name>.sk`.
    Keygen {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value_t = SchemeArg::Niederreiter)]
        scheme: SchemeArg,
        /// Hex seed of at most 32 bytes, zero-padded; random when omitted.
        #[arg(long)]
        seed: Option<String>,
        #[arg(long, env = "EGMC_OUT_DIR", default_value = ".")]
        out_dir: PathBuf,
        #[arg(long, default_value = "egmc")]
        name: String,
    },
    /// Encrypt under a public key. McEliece takes `--message`; Niederreiter
    /// samples a random rank-r plaintext.
    Encrypt {
        #[arg(long)]
        pk: PathBuf,
        /// Packed message as hex (McEliece only).
        #[arg(long)]
        message: Option<String>,
        #[arg(long)]
        seed: Option<String>,
        /// Ciphertext path; defaults to `$EGMC_OUT_DIR/egmc.ct`.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, env = "EGMC_OUT_DIR", default_value = ".")]
        out_dir: PathBuf,
        /// Where to record the sampled Niederreiter plaintext (hex).
        #[arg(long)]
        plaintext_out: Option<PathBuf>,
    },
    /// Decrypt and verify; prints the plaintext as hex.
    Decrypt {
        #[arg(long)]
        sk: PathBuf,
        #[arg(long)]
        pk: PathBuf,
        #[arg(long)]
        ct: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the registry with recomputed sizes and costs.
    Params {
        /// Print every named set (the default).
        #[arg(long)]
        list: bool,
        /// Only this set.
        #[arg(long, conflicts_with = "list")]
        set: Option<String>,
        #[arg(long)]
        csv: bool,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
    },
    /// Attack-cost report for one parameter choice.
    Estimate {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        json: bool,
    },
    /// Left/right stabilizer dimensions of a serialized matrix code.
    Distinguish {
        /// A public key, or a raw code file (then `--q` is required).
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        q: Option<u32>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct ParamArgs {
    /// Named set, e.g. egmc128a.
    #[arg(long, conflicts_with_all = ["q", "m", "k", "l1", "l2", "r"])]
    pub set: Option<String>,
    #[arg(long)]
    pub q: Option<u32>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub l1: Option<usize>,
    #[arg(long)]
    pub l2: Option<usize>,
    #[arg(long)]
    pub r: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchemeArg {
    Mceliece,
    Niederreiter,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Keygen {
            params,
            scheme,
            seed,
            out_dir,
            name,
        } => commands::keygen(&params, scheme, seed.as_deref(), &out_dir, &name),
        Command::Encrypt {
            pk,
            message,
            seed,
            out,
            out_dir,
            plaintext_out,
        } => {
            let out = out.unwrap_or_else(|| out_dir.join("egmc.ct"));
            commands::encrypt(&pk, message.as_deref(), seed.as_deref(), &out, plaintext_out.as_deref())
        }
        Command::Decrypt { sk, pk, ct, out } => commands::decrypt(&sk, &pk, &ct, out.as_deref()),
        Command::Params { list: _, set, csv, json } => commands::params(set.as_deref(), csv, json),
        Command::Estimate { params, json } => commands::estimate(&params, json),
        Command::Distinguish { code, q } => commands::distinguish(&code, q),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
