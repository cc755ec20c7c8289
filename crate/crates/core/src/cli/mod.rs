//! The `pbt` command line: `fid`, `scan`, `verify` and `spectrum`.
//!
//! Data goes to stdout as JSON lines or CSV, diagnostics to stderr. Exit
//! codes are [`EXIT_OK`], [`EXIT_VERIFY_FAILED`], [`EXIT_USAGE`],
//! [`EXIT_INPUT`] and [`EXIT_SIZE_CAP`].

mod input;
mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub use input::{load_coefficients, parse_coefficients, InputError};
pub use output::{
    csv_field, format_decimal, parse_partition_key, to_json_line, CoefficientMap, OutputRecord, CSV_HEADER,
    TOOL_NAME, TOOL_VERSION,
};

use crate::error::PbtError;
use crate::fidelity::{
    block_spectrum, partition_key, BlockEntry, BlockOperator, FidelityReport, PortCoefficients, ProtocolMode,
    Settings,
};
use crate::oracle::{compare_spectrum, Check, OracleConfig, Verification};
use crate::young::{BranchingTable, NumericMode};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_SIZE_CAP: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "pbt", version, about = "Entanglement fidelity of port-based teleportation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fidelity of one protocol at one (d, N).
    Fid(FidArgs),
    /// Fidelities over a range of N.
    Scan(ScanArgs),
    /// Check the closed forms against the dense oracle.
    Verify(FidArgs),
    /// Block eigenvalues of the average state or a certificate.
    Spectrum(SpectrumArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Standard,
    #[value(alias = "given")]
    GivenCoefficients,
    Optimized,
}

impl From<ModeArg> for ProtocolMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Standard => ProtocolMode::Standard,
            ModeArg::GivenCoefficients => ProtocolMode::GivenCoefficients,
            ModeArg::Optimized => ProtocolMode::Optimized,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OperatorArg {
    /// Unnormalized average state.
    #[value(name = "avg")]
    Avg,
    /// PGM certificate.
    #[value(name = "X")]
    X,
    /// Certificate for a port state; uses the optimal one unless
    /// `--coefficients` is given.
    #[value(name = "Y")]
    Y,
}

#[derive(Debug, Args)]
struct Dimensions {
    /// Local dimension.
    #[arg(long = "d", value_parser = clap::value_parser!(u32).range(1..))]
    d: u32,
    /// Number of ports.
    #[arg(long = "N", value_name = "N", value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
}

#[derive(Debug, Args)]
struct CoefficientArgs {
    /// JSON file with the port coefficients `{c_mu}`.
    #[arg(long, value_name = "PATH")]
    coefficients: Option<PathBuf>,
    /// Rescale the coefficients onto the normalization constraint instead
    /// of rejecting them.
    #[arg(long)]
    renormalize: bool,
}

#[derive(Debug, Args)]
struct FidArgs {
    #[command(flatten)]
    dims: Dimensions,
    #[arg(long, value_enum, default_value = "standard")]
    mode: ModeArg,
    #[command(flatten)]
    coefficients: CoefficientArgs,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Add the wall time to the record.
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long = "d", value_parser = clap::value_parser!(u32).range(1..))]
    d: u32,
    /// Smallest N.
    #[arg(long)]
    from: u32,
    /// Largest N.
    #[arg(long)]
    to: u32,
    #[arg(long, value_enum, default_value = "standard")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Report the total wall time on stderr.
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[command(flatten)]
    dims: Dimensions,
    #[arg(long, value_enum, default_value = "avg")]
    operator: OperatorArg,
    #[command(flatten)]
    coefficients: CoefficientArgs,
    /// Add the matching eigenvalues of the dense operator.
    #[arg(long)]
    compare: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<PbtError> for CliError {
    fn from(e: PbtError) -> Self {
        let code = match e {
            PbtError::SizeCap { .. } | PbtError::ProjectorOrder { .. } => EXIT_SIZE_CAP,
            PbtError::InvalidCoefficients { .. } => EXIT_INPUT,
            PbtError::Numerical(_) | PbtError::InvalidPovm { .. } => EXIT_VERIFY_FAILED,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<InputError> for CliError {
    fn from(e: InputError) -> Self {
        let message = match e {
            InputError::Read(m) => format!("cannot read coefficients: {m}"),
            InputError::Format(m) => format!("malformed coefficients file: {m}"),
            InputError::Invalid(e) => format!("coefficients file: {e}"),
        };
        Self {
            code: EXIT_INPUT,
            message,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self {
            code: EXIT_VERIFY_FAILED,
            message: format!("write failed: {e}"),
        }
    }
}

type CliResult = Result<i32, CliError>;

/// Parses `args` (including the program name), runs the command and
/// returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let result = match cli.command {
        Command::Fid(a) => cmd_fidelity(&a, out),
        Command::Scan(a) => cmd_scan(&a, out, err),
        Command::Verify(a) => cmd_verify(&a, out, err),
        Command::Spectrum(a) => cmd_spectrum(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

fn settings() -> Result<Settings, CliError> {
    Ok(Settings::from_env()?)
}

fn coefficients_for(
    args: &CoefficientArgs,
    table: &BranchingTable,
    mode: ProtocolMode,
) -> Result<Option<PortCoefficients>, CliError> {
    match (&args.coefficients, mode) {
        (Some(path), ProtocolMode::GivenCoefficients) => Ok(Some(load_coefficients(path, table, args.renormalize)?)),
        (None, ProtocolMode::GivenCoefficients) => Err(CliError::usage(
            "--coefficients is required with --mode given-coefficients",
        )),
        (Some(_), _) => Err(CliError::usage(
            "--coefficients is only used with --mode given-coefficients",
        )),
        (None, _) => Ok(None),
    }
}

fn compute(settings: &Settings, table: &BranchingTable, mode: ProtocolMode, c: Option<&PortCoefficients>) -> Result<FidelityReport, CliError> {
    Ok(match (mode, c) {
        (ProtocolMode::Standard, _) => crate::fidelity::standard_from_table(table),
        (ProtocolMode::Optimized, _) => crate::fidelity::optimize_from_table(table, &settings.eigen)?,
        (ProtocolMode::GivenCoefficients, Some(c)) => crate::fidelity::given_from_table(table, c)?,
        (ProtocolMode::GivenCoefficients, None) => unreachable!("checked by coefficients_for"),
    })
}

fn write_records(out: &mut dyn Write, format: Format, records: &[OutputRecord]) -> std::io::Result<()> {
    match format {
        Format::Json => {
            for r in records {
                writeln!(out, "{}", to_json_line(r))?;
            }
        }
        Format::Csv => {
            writeln!(out, "{CSV_HEADER}")?;
            for r in records {
                writeln!(out, "{}", r.csv_row())?;
            }
        }
    }
    Ok(())
}

fn cmd_fidelity(args: &FidArgs, out: &mut dyn Write) -> CliResult {
    let start = Instant::now();
    let settings = settings()?;
    let mode = ProtocolMode::from(args.mode);
    let table = BranchingTable::with_threshold(args.dims.d, args.dims.n, settings.exact_threshold)?;
    let c = coefficients_for(&args.coefficients, &table, mode)?;
    let report = compute(&settings, &table, mode, c.as_ref())?;
    let mut record = OutputRecord::new(&report);
    if args.timing {
        record.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    write_records(out, args.format, &[record])?;
    Ok(EXIT_OK)
}

fn cmd_scan(args: &ScanArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let start = Instant::now();
    if args.from == 0 || args.from > args.to {
        return Err(CliError::usage(format!(
            "need 1 <= --from <= --to, got {}..{}",
            args.from, args.to
        )));
    }
    let mode = ProtocolMode::from(args.mode);
    if mode == ProtocolMode::GivenCoefficients {
        return Err(CliError::usage("scan supports --mode standard and --mode optimized"));
    }
    let ns: Vec<u32> = (args.from..=args.to).collect();
    let reports = settings()?.scan(args.d, &ns, mode)?;
    let records: Vec<OutputRecord> = reports.iter().map(OutputRecord::new).collect();
    write_records(out, args.format, &records)?;
    if args.timing {
        writeln!(err, "scan: {} records in {:.1} ms", records.len(), start.elapsed().as_secs_f64() * 1e3)?;
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct VerifyRecord<'a> {
    tool: &'static str,
    version: &'static str,
    #[serde(flatten)]
    verification: &'a Verification,
}

fn describe(check: &Check) -> String {
    format!(
        "{} {} = {} (tolerance {})",
        if check.passed { "ok  " } else { "FAIL" },
        check.name,
        check.value,
        check.tolerance
    )
}

fn cmd_verify(args: &FidArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let settings = settings()?;
    let config = OracleConfig::from_env()?;
    let mode = ProtocolMode::from(args.mode);
    config.port_dim(args.dims.d, args.dims.n)?;
    let table = BranchingTable::with_threshold(args.dims.d, args.dims.n, settings.exact_threshold)?;
    let c = coefficients_for(&args.coefficients, &table, mode)?;
    let v = config.verify(&settings, args.dims.d, args.dims.n, mode, c.as_ref())?;
    match args.format {
        Format::Json => writeln!(
            out,
            "{}",
            to_json_line(&VerifyRecord {
                tool: TOOL_NAME,
                version: TOOL_VERSION,
                verification: &v,
            })
        )?,
        Format::Csv => {
            let mut record = OutputRecord::new(&compute(&settings, &table, mode, c.as_ref())?);
            record.certificate_margin = Some(v.certificate_margin);
            write_records(out, Format::Csv, &[record])?;
        }
    }
    for check in &v.checks {
        writeln!(err, "{}", describe(check))?;
    }
    let worst = v.checks.iter().fold(0.0f64, |m, c| m.max(c.value));
    match v.first_failure() {
        None => {
            writeln!(err, "PASS (max deviation {worst})")?;
            Ok(EXIT_OK)
        }
        Some(check) => {
            writeln!(err, "FAIL: {}", check.name)?;
            Ok(EXIT_VERIFY_FAILED)
        }
    }
}

#[derive(Serialize)]
struct SpectrumRecord<'a> {
    tool: &'static str,
    version: &'static str,
    d: u32,
    #[serde(rename = "N")]
    n: u32,
    operator: &'static str,
    numeric_mode: NumericMode,
    rows: Vec<SpectrumLine<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_deviation: Option<f64>,
}

#[derive(Serialize)]
struct SpectrumLine<'a> {
    #[serde(flatten)]
    entry: &'a BlockEntry,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    deviation: Option<f64>,
}

fn cmd_spectrum(args: &SpectrumArgs, out: &mut dyn Write) -> CliResult {
    let settings = settings()?;
    let (d, n) = (args.dims.d, args.dims.n);
    let table = BranchingTable::with_threshold(d, n, settings.exact_threshold)?;
    let (operator, name) = match args.operator {
        OperatorArg::Avg => (BlockOperator::AverageState, "avg"),
        OperatorArg::X => (BlockOperator::X, "X"),
        OperatorArg::Y => (BlockOperator::Y, "Y"),
    };
    let c = match (operator, &args.coefficients.coefficients) {
        (BlockOperator::Y, Some(path)) => Some(load_coefficients(path, &table, args.coefficients.renormalize)?),
        (BlockOperator::Y, None) => crate::fidelity::optimize_from_table(&table, &settings.eigen)?.coefficients,
        (_, Some(_)) => return Err(CliError::usage("--coefficients is only used with --operator Y")),
        (_, None) => None,
    };
    let entries = block_spectrum(&table, operator, c.as_ref())?;
    let comparison = if args.compare {
        let config = OracleConfig::from_env()?;
        let op = config.oracle_operator(d, n, operator, c.as_ref())?;
        Some(compare_spectrum(&entries, &op)?)
    } else {
        None
    };
    let rows: Vec<SpectrumLine> = entries
        .iter()
        .enumerate()
        .map(|(k, entry)| SpectrumLine {
            entry,
            oracle: comparison.as_ref().map(|c| c.rows[k].oracle),
            deviation: comparison.as_ref().map(|c| c.rows[k].deviation),
        })
        .collect();
    match args.format {
        Format::Json => {
            let record = SpectrumRecord {
                tool: TOOL_NAME,
                version: TOOL_VERSION,
                d,
                n,
                operator: name,
                numeric_mode: table.mode(),
                rows,
                max_deviation: comparison.as_ref().map(|c| c.max_deviation),
            };
            writeln!(out, "{}", to_json_line(&record))?;
        }
        Format::Csv => {
            let extra = if args.compare { ",oracle,deviation" } else { "" };
            writeln!(out, "alpha,mu,value,multiplicity{extra}")?;
            for row in &rows {
                let mut line = format!(
                    "{},{},{},{}",
                    csv_field(&partition_key(&row.entry.alpha)),
                    csv_field(&partition_key(&row.entry.mu)),
                    format_decimal(row.entry.value),
                    row.entry.multiplicity
                );
                if let (Some(o), Some(dev)) = (row.oracle, row.deviation) {
                    line.push_str(&format!(",{},{}", format_decimal(o), format_decimal(dev)));
                }
                writeln!(out, "{line}")?;
            }
        }
    }
    Ok(EXIT_OK)
}
