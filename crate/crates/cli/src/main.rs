//! `beta-arena`: expansions, admissible blocks, region scans and game runs.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod expand;
mod game;
mod range;
mod tables;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use range::Range;

#[derive(Parser)]
#[command(name = "beta-arena", version, about = "Digit expansions in real, complex and quaternion bases, and Schmidt games on them")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the first digits of a point and the reconstruction error.
    Expand(ExpandArgs),
    /// List admissible blocks, or the cylinder intervals of a target digit.
    Admissible(AdmissibleArgs),
    /// Threshold curves and second-order containment regions.
    Regions(RegionsArgs),
    /// Classify the digit set over an (r, theta) grid.
    Scan(ScanArgs),
    /// Play a preset game and write its trace.
    Game(GameArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Policy {
    /// Fail when a coordinate lands within tolerance of a cell face.
    Error,
    /// Push such points into the cell and carry on.
    Nudge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DomainArg {
    /// `[0,1)^2`.
    Unit,
    /// `[-1/2,1/2)^2`.
    Centered,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("base").required(true).args(["real", "complex", "quat"])))]
pub struct ExpandArgs {
    /// Real base: a number or golden, silver, metallic:<j>.
    #[arg(long, value_name = "B")]
    pub real: Option<String>,
    /// Complex base r e^{i theta}.
    #[arg(long, num_args = 2, value_names = ["R", "THETA"], allow_negative_numbers = true)]
    pub complex: Option<Vec<f64>>,
    /// Quaternion base a + bi + cj + dk.
    #[arg(long, num_args = 4, value_names = ["A", "B", "C", "D"], allow_negative_numbers = true)]
    pub quat: Option<Vec<f64>>,
    /// Lattice for --quat: lipschitz, hurwitz-box, rotational, zeta, symmetric:<eps>, basis:<16 reals>.
    #[arg(long, default_value = "lipschitz")]
    pub lattice: String,
    /// Point for --real.
    #[arg(long, allow_negative_numbers = true)]
    pub x: Option<f64>,
    /// Point for --complex (2 values) or --quat (4 values).
    #[arg(long, num_args = 2..=4, allow_negative_numbers = true)]
    pub z: Option<Vec<f64>>,
    #[arg(long, default_value_t = 12)]
    pub n: usize,
    /// Fundamental domain for --complex.
    #[arg(long, value_enum, default_value_t = DomainArg::Unit)]
    pub domain: DomainArg,
    #[arg(long, value_enum, default_value_t = Policy::Nudge)]
    pub policy: Policy,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args)]
pub struct AdmissibleArgs {
    /// Real base: a number or golden, silver, metallic:<j>.
    #[arg(long)]
    pub b: String,
    /// Block length for the admissible listing.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Emit cylinder intervals of blocks ending in --d instead.
    #[arg(long)]
    pub intervals: bool,
    #[arg(long, default_value_t = 0)]
    pub d: u32,
    #[arg(long, default_value_t = 4)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Curve {
    /// Real winning threshold in alpha.
    #[value(name = "A", alias = "a")]
    A,
    /// Complex winning threshold in alpha.
    #[value(name = "F", alias = "f")]
    F,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("what").required(true).args(["curve", "g"])))]
pub struct RegionsArgs {
    #[arg(long, value_enum)]
    pub curve: Option<Curve>,
    /// Second-order containment region at the given angles.
    #[arg(long = "G", id = "g")]
    pub g: bool,
    /// Bases for curve A, comma separated.
    #[arg(long, default_value = "golden,silver,metallic:10", value_delimiter = ',')]
    pub b: Vec<String>,
    /// Zero-run bound for curve A; defaults to the one of each base.
    #[arg(long = "K", id = "zero_run")]
    pub zero_run: Option<usize>,
    /// Moduli for curve F, comma separated.
    #[arg(long, default_value = "4.5", value_delimiter = ',')]
    pub r: Vec<f64>,
    /// Alpha grid lo:hi:step.
    #[arg(long, default_value = "0.01:0.3:0.005")]
    pub alpha: Range,
    /// Angle grid lo:hi:step, or a single angle.
    #[arg(long, default_value = "0")]
    pub theta: Range,
    /// Largest N listed at angle zero, where the region is unbounded.
    #[arg(long, default_value_t = 5)]
    pub cap: u32,
}

#[derive(Args)]
pub struct ScanArgs {
    /// Modulus grid lo:hi:step.
    #[arg(long, default_value = "1.05:12:0.055")]
    pub r: Range,
    /// Angle grid lo:hi:step.
    #[arg(long, default_value = "0:0.785:0.016")]
    pub theta: Range,
    /// Run on one thread.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Args)]
pub struct GameArgs {
    /// Named setup; see --list.
    #[arg(long, required_unless_present = "list")]
    pub preset: Option<String>,
    /// Print the preset names and exit.
    #[arg(long)]
    pub list: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Trace destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Override the preset's alpha.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Override the preset's beta (winning games only).
    #[arg(long)]
    pub beta: Option<f64>,
    /// Override the preset's rho (winning games only).
    #[arg(long)]
    pub rho: Option<f64>,
}

fn main() -> ExitCode {
    // Usage errors exit 1 so that 2 stays reserved for falsified claims.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::FAILURE } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Expand(a) => expand::run(&a).map(|_| ExitCode::SUCCESS),
        Command::Admissible(a) => tables::admissible(&a).map(|_| ExitCode::SUCCESS),
        Command::Regions(a) => tables::regions(&a).map(|_| ExitCode::SUCCESS),
        Command::Scan(a) => tables::scan(&a).map(|_| ExitCode::SUCCESS),
        Command::Game(a) => game::run(&a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
