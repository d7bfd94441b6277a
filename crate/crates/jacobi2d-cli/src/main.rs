//! `jacobi2d` — spectra and spectral bounds of 2D periodic Jacobi operators.
//!
//! Subcommands read a coefficient file (JSON, one fundamental cell of the
//! four coefficient arrays), run one stage of the pipeline, and write CSV or
//! JSON. Every JSON report embeds a config echo (grid, torus, seed,
//! tolerances, input checksum), and identical inputs produce byte-identical
//! outputs.
//!
//! Exit codes: 0 success, 1 I/O or parse error, 2 validation error,
//! 3 verification failure, 4 precondition error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use jacobi2d::{
    bounds, defaults, fiber, oracle, spectrum, tol, CoefficientField, Error as CoreError,
    MomentumGrid,
};

#[derive(Parser)]
#[command(
    name = "jacobi2d",
    version,
    about = "Spectra and spectral bounds of 2D periodic Jacobi operators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a coefficient file, printing a summary
    Validate {
        #[command(flatten)]
        input: InputArg,
    },
    /// Sweep the Brillouin zone and export the band table
    Bands {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        output: OutputArg,
        #[command(flatten)]
        grid: GridArg,
        /// Output format for the band table
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        sharp: SharpArg,
    },
    /// Compute the band envelope eigenvalues of J0 ∓ C
    Envelope {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        output: OutputArg,
        #[command(flatten)]
        sharp: SharpArg,
    },
    /// Evaluate every measure bound: r table, r minimum, norm bound,
    /// Schrödinger-case bound (null unless a0 ≡ 0), envelope sum
    Bounds {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        output: OutputArg,
        #[command(flatten)]
        sharp: SharpArg,
    },
    /// Estimate the spectrum on a grid and compare its measure to the bounds
    Measure {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        output: OutputArg,
        #[command(flatten)]
        grid: GridArg,
        #[command(flatten)]
        sharp: SharpArg,
    },
    /// Run the enclosure, sandwich, and direct-integral checks
    Verify {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        output: OutputArg,
        #[command(flatten)]
        grid: GridArg,
        /// Torus period counts as N1,N2
        #[arg(long, default_value = "3,3", value_parser = parse_pair)]
        torus: (usize, usize),
        /// Seed for the sandwich check's momentum sampler
        #[arg(long, default_value_t = defaults::SEED)]
        seed: u64,
        /// Relative tolerance for the C ± J1 positivity check
        #[arg(long, default_value_t = tol::PSD_REL)]
        tol_psd: f64,
        /// Relative tolerance for the envelope enclosure check
        #[arg(long, default_value_t = tol::ENCLOSURE_REL)]
        tol_enclosure: f64,
        #[command(flatten)]
        sharp: SharpArg,
    },
    /// Write an example coefficient file
    Example {
        /// Which example field to build
        #[arg(long, value_enum)]
        name: ExampleName,
        #[arg(long, default_value_t = 3)]
        p1: usize,
        #[arg(long, default_value_t = 3)]
        p2: usize,
        #[command(flatten)]
        output: OutputArg,
    },
}

#[derive(Args)]
struct InputArg {
    /// Input coefficient file (JSON)
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
struct OutputArg {
    /// Output path (stdout when omitted)
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GridArg {
    /// Momentum grid as NX,NY
    #[arg(long, default_value = "64,64", value_parser = parse_pair)]
    grid: (usize, usize),
}

#[derive(Args)]
struct SharpArg {
    /// Relabel the r-minimizing cell to the base position first, making the
    /// envelope sum match the minimal bound
    #[arg(long)]
    sharp: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExampleName {
    ShiftedSchrodinger,
    DiagonalHopping,
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected two comma-separated integers, got {s:?}"))?;
    let a = a.trim().parse::<usize>().map_err(|e| e.to_string())?;
    let b = b.trim().parse::<usize>().map_err(|e| e.to_string())?;
    if a == 0 || b == 0 {
        return Err("sizes must be positive".into());
    }
    Ok((a, b))
}

// ---------------------------------------------------------------------------
// report plumbing

#[derive(Serialize)]
struct SharpEcho {
    alpha: usize,
    beta: usize,
}

/// Echoed into every JSON report so a result can be reproduced from the
/// report alone.
#[derive(Serialize)]
struct ConfigEcho {
    command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    input: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    input_sha256: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    grid: Option<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    torus: Option<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tol_psd: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tol_enclosure: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sharp: Option<SharpEcho>,
}

impl ConfigEcho {
    fn new(command: &'static str) -> Self {
        ConfigEcho {
            command,
            input: None,
            input_sha256: None,
            grid: None,
            torus: None,
            seed: None,
            samples: None,
            tol_psd: None,
            tol_enclosure: None,
            sharp: None,
        }
    }
}

#[derive(Serialize)]
struct EnvelopeFile<'a> {
    config: &'a ConfigEcho,
    lower: &'a [f64],
    upper: &'a [f64],
    envelope_sum: f64,
}

#[derive(Serialize)]
struct BoundsFile<'a> {
    config: &'a ConfigEcho,
    #[serde(flatten)]
    report: &'a bounds::BoundReport,
}

#[derive(Serialize)]
struct MeasureBounds {
    r_min: f64,
    envelope_sum: f64,
    norm_bound: f64,
}

#[derive(Serialize)]
struct MeasureFile<'a> {
    config: &'a ConfigEcho,
    intervals: Vec<[f64; 2]>,
    measure: f64,
    bounds: MeasureBounds,
    satisfied: bool,
}

#[derive(Serialize)]
struct VerifyFile<'a> {
    config: &'a ConfigEcho,
    enclosure_check: &'a spectrum::EnclosureReport,
    sandwich_check: &'a spectrum::SandwichReport,
    direct_integral_check: &'a oracle::DirectIntegralReport,
    pass: bool,
}

#[derive(Serialize)]
struct BandsFile<'a> {
    config: &'a ConfigEcho,
    columns: [&'static str; 4],
    rows: Vec<(f64, f64, usize, f64)>,
}

// ---------------------------------------------------------------------------
// error -> exit code mapping

enum CliError {
    Io(String),
    Core(CoreError),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Core(CoreError::Parse(_)) => 1,
            CliError::Core(e) if e.is_validation() => 2,
            CliError::Core(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io(msg) => write!(f, "{msg}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

fn read_input(path: &Path) -> Result<(CoefficientField, String), CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let checksum = sha256_hex(&bytes);
    let text = String::from_utf8(bytes)
        .map_err(|e| CliError::Io(format!("{} is not UTF-8: {e}", path.display())))?;
    let field = CoefficientField::from_json(&text)?;
    Ok((field, checksum))
}

fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for b in digest {
        let _ = write!(out, "{b:02x}");
    }
    out
}

fn write_output(target: &Option<PathBuf>, contents: &str) -> Result<(), CliError> {
    match target {
        Some(path) => std::fs::write(path, contents)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(contents.as_bytes())
                .map_err(|e| CliError::Io(format!("cannot write to stdout: {e}")))
        }
    }
}

fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialization");
    s.push('\n');
    s
}

/// Applies `--sharp`: relabel the r-minimizing cell to the base position.
fn maybe_sharpen(
    field: CoefficientField,
    sharp: bool,
    echo: &mut ConfigEcho,
) -> Result<CoefficientField, CliError> {
    if !sharp {
        return Ok(field);
    }
    let best = bounds::r_min(&field);
    echo.sharp = Some(SharpEcho {
        alpha: best.alpha,
        beta: best.beta,
    });
    Ok(field.relabel(best.alpha, best.beta)?)
}

// ---------------------------------------------------------------------------
// commands

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Validate { input } => {
            let (field, checksum) = read_input(&input.input)?;
            let mut max_a0 = 0.0_f64;
            let mut max_a1 = 0.0_f64;
            let mut max_b0 = 0.0_f64;
            let mut max_b1 = 0.0_f64;
            for n in 1..=field.p1() {
                for m in 1..=field.p2() {
                    max_a0 = max_a0.max(field.a0(n, m).norm());
                    max_a1 = max_a1.max(field.a1(n, m).norm());
                    max_b0 = max_b0.max(field.b0(n, m).norm());
                    max_b1 = max_b1.max(field.b1(n, m).abs());
                }
            }
            println!("valid coefficient field ({})", input.input.display());
            println!("  sha256: {checksum}");
            println!(
                "  periods: p1 = {}, p2 = {} (fiber dimension {})",
                field.p1(),
                field.p2(),
                field.fiber_dimension()
            );
            println!("  max|a0| = {max_a0}, max|a1| = {max_a1}, max|b0| = {max_b0}, max|b1| = {max_b1}");
            println!(
                "  diagonal hopping (a0 = 0): {}",
                if field.is_diagonal_hopping() { "yes" } else { "no" }
            );
            Ok(0)
        }

        Command::Bands {
            input,
            output,
            grid,
            format,
            sharp,
        } => {
            let (field, checksum) = read_input(&input.input)?;
            let mut echo = ConfigEcho::new("bands");
            echo.input = Some(input.input.display().to_string());
            echo.input_sha256 = Some(checksum);
            echo.grid = Some([grid.grid.0, grid.grid.1]);
            let field = maybe_sharpen(field, sharp.sharp, &mut echo)?;
            let momentum_grid = MomentumGrid::new(grid.grid.0, grid.grid.1)?;
            let table = spectrum::sweep_bands(&field, &momentum_grid)?;
            let contents = match format {
                Format::Csv => table.to_csv(),
                Format::Json => {
                    let mut rows = Vec::new();
                    for k in 0..momentum_grid.nx() {
                        for l in 0..momentum_grid.ny() {
                            for n in 0..table.n_bands() {
                                rows.push((
                                    momentum_grid.x(k),
                                    momentum_grid.y(l),
                                    n + 1,
                                    table.value(k, l, n),
                                ));
                            }
                        }
                    }
                    to_pretty_json(&BandsFile {
                        config: &echo,
                        columns: ["x", "y", "band", "lambda"],
                        rows,
                    })
                }
            };
            write_output(&output.output, &contents)?;
            Ok(0)
        }

        Command::Envelope {
            input,
            output,
            sharp,
        } => {
            let (field, checksum) = read_input(&input.input)?;
            let mut echo = ConfigEcho::new("envelope");
            echo.input = Some(input.input.display().to_string());
            echo.input_sha256 = Some(checksum);
            let field = maybe_sharpen(field, sharp.sharp, &mut echo)?;
            let envelope = bounds::band_envelope(&field)?;
            let contents = to_pretty_json(&EnvelopeFile {
                config: &echo,
                lower: envelope.lower(),
                upper: envelope.upper(),
                envelope_sum: bounds::envelope_sum(&envelope),
            });
            write_output(&output.output, &contents)?;
            Ok(0)
        }

        Command::Bounds {
            input,
            output,
            sharp,
        } => {
            let (field, checksum) = read_input(&input.input)?;
            let mut echo = ConfigEcho::new("bounds");
            echo.input = Some(input.input.display().to_string());
            echo.input_sha256 = Some(checksum);
            let field = maybe_sharpen(field, sharp.sharp, &mut echo)?;
            let report = bounds::bound_report(&field)?;
            let contents = to_pretty_json(&BoundsFile {
                config: &echo,
                report: &report,
            });
            write_output(&output.output, &contents)?;
            Ok(0)
        }

        Command::Measure {
            input,
            output,
            grid,
            sharp,
        } => {
            let (field, checksum) = read_input(&input.input)?;
            let mut echo = ConfigEcho::new("measure");
            echo.input = Some(input.input.display().to_string());
            echo.input_sha256 = Some(checksum);
            echo.grid = Some([grid.grid.0, grid.grid.1]);
            let field = maybe_sharpen(field, sharp.sharp, &mut echo)?;
            let momentum_grid = MomentumGrid::new(grid.grid.0, grid.grid.1)?;
            let set = spectrum::spectrum_estimate(&field, &momentum_grid)?;
            let measure = set.measure();
            let envelope = bounds::band_envelope(&field)?;
            let report_bounds = MeasureBounds {
                r_min: bounds::r_min(&field).value,
                envelope_sum: bounds::envelope_sum(&envelope),
                norm_bound: bounds::norm_bound(&field),
            };
            let within = |bound: f64| measure <= bound + tol::MEASURE_BOUND_REL * (1.0 + bound);
            let satisfied = within(report_bounds.r_min)
                && within(report_bounds.envelope_sum)
                && within(report_bounds.norm_bound);
            let contents = to_pretty_json(&MeasureFile {
                config: &echo,
                intervals: set.intervals().iter().map(|iv| [iv.lo, iv.hi]).collect(),
                measure,
                bounds: report_bounds,
                satisfied,
            });
            write_output(&output.output, &contents)?;
            Ok(0)
        }

        Command::Verify {
            input,
            output,
            grid,
            torus,
            seed,
            tol_psd,
            tol_enclosure,
            sharp,
        } => {
            let (field, checksum) = read_input(&input.input)?;
            let mut echo = ConfigEcho::new("verify");
            echo.input = Some(input.input.display().to_string());
            echo.input_sha256 = Some(checksum);
            echo.grid = Some([grid.grid.0, grid.grid.1]);
            echo.torus = Some([torus.0, torus.1]);
            echo.seed = Some(seed);
            echo.samples = Some(defaults::SANDWICH_SAMPLES);
            echo.tol_psd = Some(tol_psd);
            echo.tol_enclosure = Some(tol_enclosure);
            let field = maybe_sharpen(field, sharp.sharp, &mut echo)?;

            let momentum_grid = MomentumGrid::new(grid.grid.0, grid.grid.1)?;
            let table = spectrum::sweep_bands(&field, &momentum_grid)?;
            let envelope = bounds::band_envelope(&field)?;
            let enclosure = spectrum::check_enclosure_with(&table, &envelope, tol_enclosure)?;
            let sandwich = spectrum::check_sandwich_with(
                &field,
                &fiber::assemble_c(&field),
                defaults::SANDWICH_SAMPLES,
                seed,
                tol_psd,
            )?;
            let integral = oracle::verify_direct_integral(&field, torus.0, torus.1, None)?;
            let pass = enclosure.pass && sandwich.pass && integral.pass;
            let contents = to_pretty_json(&VerifyFile {
                config: &echo,
                enclosure_check: &enclosure,
                sandwich_check: &sandwich,
                direct_integral_check: &integral,
                pass,
            });
            write_output(&output.output, &contents)?;
            Ok(if pass { 0 } else { 3 })
        }

        Command::Example {
            name,
            p1,
            p2,
            output,
        } => {
            let field = match name {
                ExampleName::ShiftedSchrodinger => CoefficientField::shifted_schrodinger(p1, p2)?,
                ExampleName::DiagonalHopping => CoefficientField::diagonal_hopping(p1, p2)?,
            };
            write_output(&output.output, &field.to_json())?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
