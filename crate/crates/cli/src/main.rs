//! `adelic`: command-line frontend for exact real and p-adic analysis of
//! linear-fractional maps.

mod commands;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use adelic_core::orbit::DEFAULT_MAX_BITS;

pub const EXIT_INPUT: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;
pub const EXIT_USAGE: u8 = 64;

#[derive(Debug, Parser)]
#[command(
    name = "adelic",
    version,
    about = "Real and p-adic dynamics of (ax+b)/(cx+d)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: Global,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Emit one JSON document instead of a table.
    #[arg(long, global = true)]
    pub json: bool,
    /// Abort orbits whose coordinates exceed this many bits.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_BITS)]
    pub max_bits: u64,
}

#[derive(Debug, Args)]
pub struct MapArg {
    /// Coefficients a,b,c,d with ad - bc = 1 and c ≠ 0.
    #[arg(long, allow_hyphen_values = true)]
    pub map: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rational fixed points from the discriminant (a+d)^2 - 4.
    FixedPoints(MapArg),
    /// Per-place or adelic classification of the rational fixed points.
    Classify {
        #[command(flatten)]
        map: MapArg,
        /// Restrict to one place: `real` or a prime.
        #[arg(long)]
        place: Option<String>,
    },
    /// Exact orbit on the projective line.
    Orbit {
        #[command(flatten)]
        map: MapArg,
        #[arg(long, allow_hyphen_values = true)]
        x0: String,
        #[arg(long, default_value_t = 100)]
        n: usize,
    },
    /// Distances |x_k - xi|_v along an orbit.
    Trace {
        #[command(flatten)]
        map: MapArg,
        #[arg(long, allow_hyphen_values = true)]
        x0: String,
        /// Fixed point to measure against; defaults to the first one.
        #[arg(long, allow_hyphen_values = true)]
        xi: Option<String>,
        #[arg(long, default_value = "real")]
        place: String,
        #[arg(long, default_value_t = 100)]
        n: usize,
    },
    /// Checks that the sphere |x - xi|_p = p^rho is invariant.
    SphereCheck {
        #[command(flatten)]
        map: MapArg,
        #[arg(long, allow_hyphen_values = true)]
        xi: Option<String>,
        #[arg(long)]
        p: u64,
        /// Sphere radius exponent: the radius is p^rho.
        #[arg(long, allow_hyphen_values = true)]
        rho: i64,
        #[arg(long, default_value_t = 2)]
        samples: usize,
        #[arg(long, default_value_t = 100)]
        n: usize,
    },
    /// Samples the basin of an attracting fixed point.
    Basin {
        #[command(flatten)]
        map: MapArg,
        /// Attractor; defaults to the fixed point attracting at `--place`.
        #[arg(long, allow_hyphen_values = true)]
        xi: Option<String>,
        #[arg(long, default_value = "real")]
        place: String,
        /// Comma-separated initial points.
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        #[arg(long, default_value_t = 100)]
        n: usize,
        /// Real-place distance threshold.
        #[arg(long, default_value = "1/1000000")]
        threshold: String,
        /// Finite-place valuation gain.
        #[arg(long, default_value_t = 20)]
        gain: i64,
    },
    /// Smallest k ≤ kmax with F^k scalar.
    Period {
        #[command(flatten)]
        map: MapArg,
        #[arg(long, default_value_t = 24)]
        kmax: u64,
    },
    /// Cross-ratio of four distinct points (`inf` allowed once).
    CrossRatio {
        #[arg(long, allow_hyphen_values = true)]
        points: String,
    },
    /// Map with rational fixed points from the (t, sign, a, c) family.
    Generate {
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long, default_value = "+", allow_hyphen_values = true)]
        sign: String,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
    },
    /// Named families A, B, C, C2, D, D2.
    Preset {
        #[arg(long = "case")]
        case: String,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
        #[arg(long, default_value = "+", allow_hyphen_values = true)]
        sign: String,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                ErrorKind::InvalidSubcommand
                | ErrorKind::MissingSubcommand
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => EXIT_USAGE,
                _ => EXIT_INPUT,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli.command, &cli.global) {
        Ok(out) => {
            if cli.global.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&out.json).expect("serializable")
                );
            } else {
                print!("{}", out.table);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
