//! Command-line front end: reconstruct potentials, verify round trips,
//! export wavefunctions, benchmark the evaluator, and print preset spectra.
//!
//! Exit codes: 0 success, 2 invalid input, 3 verification failure. Errors go
//! to stderr as single-line JSON `{"error": code, "detail": message}`.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use refless::spectra::parse_preset;
use refless::spectral::{validate, SpectralInput, ValidatedSpectrum};
use refless::tau::{build_expansion, sample_potential};
use refless::verify::{linear_grid, run_verification, VerifyOptions};
use refless::wavefunctions::WavefunctionSet;
use refless::{naive, Error};

#[derive(Parser)]
#[command(
    name = "refless",
    version,
    about = "Reconstruct reflectionless potentials from bound-state spectra"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the reconstructed potential over a grid
    Reconstruct {
        #[command(flatten)]
        source: Source,
        /// Grid as min:max:step, e.g. -5:5:0.01
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Re-derive the spectrum from the reconstruction and gate on residuals
    Verify {
        #[command(flatten)]
        source: Source,
        /// Grid as min:max:step; defaults to [-30/kappa_1, 30/kappa_1] step 1e-3
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        /// Maximum relative energy residual
        #[arg(long, default_value_t = 1e-4)]
        tolerance: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Sample all bound-state wavefunctions over a grid
    Wavefunctions {
        #[command(flatten)]
        source: Source,
        /// Grid as min:max:step
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Time the expansion evaluator against the naive determinant routes
    Bench {
        /// State-count range, e.g. 1..10 or a single number
        #[arg(long)]
        n: String,
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print a preset spectrum as JSON
    Spectrum {
        #[arg(long)]
        preset: String,
        #[arg(long = "c-phys", default_value_t = 1.0)]
        c_phys: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Source {
    /// Preset spectrum: pt:N, well:R, or morse:W
    #[arg(long, conflicts_with = "input")]
    preset: Option<String>,
    /// Path to a spectrum JSON file
    #[arg(long)]
    input: Option<PathBuf>,
    /// Energy scale (hbar^2 / 2m); overrides the input file's value
    #[arg(long = "c-phys")]
    c_phys: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl Source {
    fn resolve(&self) -> Result<ValidatedSpectrum, Error> {
        let input = match (&self.preset, &self.input) {
            (Some(preset), None) => parse_preset(preset, self.c_phys.unwrap_or(1.0))?,
            (None, Some(path)) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
                let mut parsed: SpectralInput = serde_json::from_str(&text)
                    .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
                if let Some(c) = self.c_phys {
                    parsed.c_phys = c;
                }
                parsed
            }
            _ => {
                return Err(Error::InvalidInput(
                    "exactly one of --preset or --input is required".into(),
                ))
            }
        };
        validate(&input)
    }
}

fn parse_grid(text: &str) -> Result<(f64, f64, f64), Error> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || Error::InvalidInput(format!("grid {text:?} is not min:max:step"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let min: f64 = parts[0].parse().map_err(|_| bad())?;
    let max: f64 = parts[1].parse().map_err(|_| bad())?;
    let step: f64 = parts[2].parse().map_err(|_| bad())?;
    Ok((min, max, step))
}

fn parse_n_range(text: &str) -> Result<(usize, usize), Error> {
    let bad = || Error::InvalidInput(format!("state-count range {text:?} is not lo..hi"));
    if let Some((lo, hi)) = text.split_once("..") {
        Ok((
            lo.parse().map_err(|_| bad())?,
            hi.parse().map_err(|_| bad())?,
        ))
    } else {
        let n: usize = text.parse().map_err(|_| bad())?;
        Ok((n, n))
    }
}

fn emit(path: &Option<PathBuf>, content: &str) -> Result<(), Error> {
    match path {
        Some(p) => fs::write(p, content)
            .map_err(|e| Error::InvalidInput(format!("{}: {e}", p.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct WavefunctionsJson {
    xs: Vec<f64>,
    /// One array per state, index-aligned with `xs`.
    psis: Vec<Vec<f64>>,
    c_phys: f64,
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Reconstruct {
            source,
            grid,
            output,
            format,
        } => {
            let s = source.resolve()?;
            let (min, max, step) = parse_grid(&grid)?;
            let xs = linear_grid(min, max, step)?;
            let expansion = build_expansion(&s)?;
            let curve = sample_potential(&expansion, &xs)?;
            let content = match format {
                Format::Csv => curve.to_csv(),
                Format::Json => {
                    let mut text = serde_json::to_string(&curve)
                        .map_err(|e| Error::InvalidInput(e.to_string()))?;
                    text.push('\n');
                    text
                }
            };
            emit(&output, &content)?;
            Ok(0)
        }
        Command::Verify {
            source,
            grid,
            tolerance,
            output,
        } => {
            let s = source.resolve()?;
            let mut opts = VerifyOptions {
                energy_tolerance: tolerance,
                ..VerifyOptions::default()
            };
            if let Some(text) = &grid {
                opts.grid = Some(parse_grid(text)?);
            }
            let report = run_verification(&s, &opts)?;
            let mut text = serde_json::to_string_pretty(&report)
                .map_err(|e| Error::InvalidInput(e.to_string()))?;
            text.push('\n');
            emit(&output, &text)?;
            if report.passes(opts.energy_tolerance, opts.reflection_tolerance) {
                Ok(0)
            } else {
                let payload = serde_json::json!({
                    "error": "VerificationFailed",
                    "detail": format!(
                        "max_energy_residual {:e} (gate {:e}), max_reflection {:e} (gate {:e})",
                        report.max_energy_residual,
                        opts.energy_tolerance,
                        report.max_reflection,
                        opts.reflection_tolerance,
                    ),
                });
                eprintln!("{payload}");
                Ok(3)
            }
        }
        Command::Wavefunctions {
            source,
            grid,
            output,
            format,
        } => {
            let s = source.resolve()?;
            let (min, max, step) = parse_grid(&grid)?;
            let xs = linear_grid(min, max, step)?;
            let set = WavefunctionSet::new(s);
            let content = match format {
                Format::Csv => set.to_csv(&xs)?,
                Format::Json => {
                    let n = set.spectrum().len();
                    let mut psis = vec![Vec::with_capacity(xs.len()); n];
                    for &x in &xs {
                        let row = refless::wavefunctions::eval_all_psi(set.spectrum(), x)?;
                        for (state, v) in row.into_iter().enumerate() {
                            psis[state].push(v);
                        }
                    }
                    let doc = WavefunctionsJson {
                        xs,
                        psis,
                        c_phys: set.spectrum().c_phys(),
                    };
                    let mut text = serde_json::to_string(&doc)
                        .map_err(|e| Error::InvalidInput(e.to_string()))?;
                    text.push('\n');
                    text
                }
            };
            emit(&output, &content)?;
            Ok(0)
        }
        Command::Bench { n, points, output } => {
            let (lo, hi) = parse_n_range(&n)?;
            let report = naive::benchmark(lo, hi, points)?;
            emit(&output, &report.to_csv())?;
            Ok(0)
        }
        Command::Spectrum {
            preset,
            c_phys,
            output,
        } => {
            let input = parse_preset(&preset, c_phys)?;
            validate(&input)?;
            let mut text =
                serde_json::to_string(&input).map_err(|e| Error::InvalidInput(e.to_string()))?;
            text.push('\n');
            emit(&output, &text)?;
            Ok(0)
        }
    }
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::StateCountMismatch { .. } | Error::RootBracketFailure { .. } => 3,
        _ => 2,
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            let payload = serde_json::json!({
                "error": err.code(),
                "detail": err.to_string(),
            });
            eprintln!("{payload}");
            exit_code(&err)
        }
    };
    std::process::exit(code);
}
