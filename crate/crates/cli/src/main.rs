use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use adrc::controllers::{Signal, Structure};
use adrc::discretize::TfVariant;
use adrc::tuning::{AdrcDesign, TuningMethod};

mod commands;
mod failure;
mod output;

use failure::Failure;

#[derive(Debug, Parser)]
#[command(name = "adrc", version, about = "Discrete-time ADRC tuning, discretization and simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Controller and observer gains for one design.
    Tune(TuneArgs),
    /// Transfer-function coefficients of the single or dual-feedback realization.
    Coeffs(CoeffsArgs),
    /// Runs a scenario file and writes the trace.
    Simulate(SimulateArgs),
    /// Runs several variants in lockstep on one scenario and compares them.
    Compare(CompareArgs),
    /// Continuous/discrete gain ratio over a range of ω_CL·T.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Ct,
    Dt,
    Quasi,
}

impl From<Method> for TuningMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Ct => TuningMethod::ContinuousTime,
            Method::Dt => TuningMethod::DiscreteTime,
            Method::Quasi => TuningMethod::QuasiContinuous,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    #[value(alias = "ss")]
    StateSpace,
    Single,
    Dual,
}

impl From<VariantArg> for Structure {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::StateSpace => Structure::StateSpace,
            VariantArg::Single => Structure::SingleTf,
            VariantArg::Dual => Structure::DualFeedbackTf,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TfVariantArg {
    Single,
    Dual,
}

impl From<TfVariantArg> for TfVariant {
    fn from(v: TfVariantArg) -> Self {
        match v {
            TfVariantArg::Single => TfVariant::SingleTf,
            TfVariantArg::Dual => TfVariant::DualFeedback,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Flavor {
    Output,
    Error,
}

impl From<Flavor> for Signal {
    fn from(f: Flavor) -> Self {
        match f {
            Flavor::Output => Signal::OutputBased,
            Flavor::Error => Signal::ErrorBased,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Spacing {
    Linear,
    Log,
}

/// Design parameters, all in SI units.
#[derive(Debug, Args)]
pub struct DesignArgs {
    /// Plant order n.
    #[arg(long, default_value_t = 1)]
    pub order: usize,
    /// Plant gain estimate b0.
    #[arg(long, default_value_t = 1.0)]
    pub b0: f64,
    /// Closed-loop bandwidth in rad/s.
    #[arg(long, allow_negative_numbers = true)]
    pub omega: f64,
    /// Observer bandwidth factor k_ESO.
    #[arg(long, allow_negative_numbers = true)]
    pub keso: f64,
    /// Sampling interval in seconds.
    #[arg(long, allow_negative_numbers = true)]
    pub ts: f64,
}

impl DesignArgs {
    pub fn design(&self) -> Result<AdrcDesign, Failure> {
        Ok(AdrcDesign::new(self.order, self.b0, self.omega, self.keso, self.ts)?)
    }
}

#[derive(Debug, Args)]
pub struct TuneArgs {
    #[command(flatten)]
    pub design: DesignArgs,
    #[arg(long, value_enum, default_value_t = Method::Dt)]
    pub method: Method,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CoeffsArgs {
    #[command(flatten)]
    pub design: DesignArgs,
    #[arg(long, value_enum, default_value_t = TfVariantArg::Dual)]
    pub variant: TfVariantArg,
    /// Accepted for symmetry with `simulate`; both flavors share coefficients.
    #[arg(long, value_enum, default_value_t = Flavor::Error)]
    pub flavor: Flavor,
    /// Gains used by the oracle.
    #[arg(long, value_enum, default_value_t = Method::Dt)]
    pub method: Method,
    /// Compute from the state-space realization instead of the closed-form tables.
    #[arg(long)]
    pub via_oracle: bool,
    /// Emit closed-form and oracle coefficients with their largest relative deviation.
    #[arg(long, conflicts_with = "via_oracle")]
    pub check: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Scenario file (TOML, or JSON with a `.json` extension).
    pub scenario: PathBuf,
    #[arg(long, value_enum)]
    pub variant: Option<VariantArg>,
    #[arg(long, value_enum)]
    pub flavor: Option<Flavor>,
    /// Coefficient file written by `coeffs` (JSON, or CSV with a `.csv` extension).
    #[arg(long)]
    pub coeffs: Option<PathBuf>,
    /// Feed the unlimited controller output back to the controller.
    #[arg(long)]
    pub ablate_windup: bool,
    /// Writes the controller state after the last sample as JSON.
    #[arg(long)]
    pub snapshot: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    pub scenario: PathBuf,
    /// Two or more `structure:flavor` specs, e.g. `state_space:error dual:error`.
    #[arg(required = true, num_args = 2..)]
    pub specs: Vec<String>,
    /// Extra window `t0:t1` in seconds to report.
    #[arg(long = "window")]
    pub windows: Vec<String>,
    /// Largest |Δu_lim| accepted where equivalence is expected.
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 1)]
    pub order: usize,
    #[arg(long, allow_negative_numbers = true)]
    pub xmin: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub xmax: f64,
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = Spacing::Log)]
    pub spacing: Spacing,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Tune(args) => commands::tune::run(&args),
        Command::Coeffs(args) => commands::coeffs::run(&args),
        Command::Simulate(args) => commands::simulate::run(&args),
        Command::Compare(args) => commands::compare::run(&args),
        Command::Sweep(args) => commands::sweep::run(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
