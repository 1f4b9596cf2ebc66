//! `freecirc` command line: densities of classical and free convolutions on
//! the circle as CSV, unimodality reports and witnesses as JSON.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use freecirc::classical::{convolve_pk, figure_grid, MuA};
use freecirc::free_normal::{eventual_threshold, free_density, free_strong_witness};
use freecirc::io::{from_csv, to_csv};
use freecirc::unimodality::{is_unimodal, Verdict, DEFAULT_EPS};
use freecirc::{make_measure, CircleMeasure, DensityGrid, Error, MeasureSpec};
use serde_json::{json, Value};

const EXIT_INPUT: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_NOT_UNIMODAL: u8 = 10;
const EXIT_INDETERMINATE: u8 = 11;

#[derive(Parser)]
#[command(name = "freecirc", version, about = "Classical and free multiplicative convolutions on the unit circle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Density of μ ⊠ λ_t as `theta,density` CSV
    DensityFree {
        #[arg(long)]
        t: f64,
        #[command(flatten)]
        measure: MeasureArgs,
        #[arg(long, default_value_t = 4096)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Density of PK_{r,ψ} ⊛ μ as `theta,density` CSV
    DensityClassical {
        #[arg(long)]
        r: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        psi: f64,
        #[command(flatten)]
        measure: MeasureArgs,
        #[arg(long, default_value_t = 4096)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Unimodality report for a CSV grid, or for a density computed in place
    Check {
        /// Grid written by one of the density commands
        file: Option<PathBuf>,
        /// Compute μ ⊠ λ_t
        #[arg(long, conflicts_with_all = ["file", "r"])]
        t: Option<f64>,
        /// Compute PK_{r,ψ} ⊛ μ
        #[arg(long, conflicts_with = "file")]
        r: Option<f64>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        psi: f64,
        #[command(flatten)]
        measure: MeasureArgs,
        #[arg(long, default_value_t = 4096)]
        grid: usize,
    },
    /// r_φ = cos φ / 4 and the time t_φ after which μ ⊠ λ_t is unimodal
    Thresholds {
        #[arg(long)]
        phi: f64,
    },
    /// Search a level met at least three times
    Witness {
        #[arg(long, value_enum)]
        kind: WitnessKind,
        #[arg(long, default_value_t = 0.05)]
        a: f64,
        /// Poisson radius (classical-strong)
        #[arg(long)]
        r: Option<f64>,
        /// Time (free-strong); scans (0.005, 0.05) when omitted
        #[arg(long)]
        t: Option<f64>,
        #[arg(long, default_value_t = 4096)]
        grid: usize,
    },
    /// Reference densities PK_{r,0} ⊛ μ_a: 1 → (0.99, 0.01), 2 → (0.9, 0.01), 3 → (0.9, 0.2)
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        n: u8,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct MeasureArgs {
    /// dirac:<angle>, haar, bernoulli, pk:<r>,<psi>, arc_uniform:<phi>, mu_a:<a>
    #[arg(long, conflicts_with = "spec", allow_hyphen_values = true)]
    named: Option<String>,
    /// JSON measure description
    #[arg(long)]
    spec: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum WitnessKind {
    ClassicalStrong,
    FreeStrong,
}

/// A failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Numerical(_) => EXIT_NUMERICAL,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

impl MeasureArgs {
    fn is_given(&self) -> bool {
        self.named.is_some() || self.spec.is_some()
    }

    fn resolve(&self) -> Result<CircleMeasure, Failure> {
        let spec = match (&self.named, &self.spec) {
            (Some(name), None) => MeasureSpec::named(name.clone()),
            (None, Some(path)) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?;
                MeasureSpec::from_json(&text)?
            }
            _ => return Err(input_error("give exactly one of --named or --spec")),
        };
        Ok(make_measure(&spec)?)
    }
}

fn check_grid_size(n: usize) -> Result<(), Failure> {
    if n < 256 || !n.is_power_of_two() {
        return Err(input_error(format!("--grid must be a power of two ≥ 256, got {n}")));
    }
    Ok(())
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| input_error(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string(v).expect("JSON values serialize"));
}

fn report(grid: &DensityGrid) -> Result<u8, Failure> {
    let rep = is_unimodal(grid, DEFAULT_EPS)?;
    print_json(&serde_json::to_value(rep.record()).expect("report serializes"));
    Ok(match rep.verdict {
        Verdict::Unimodal => 0,
        Verdict::NotUnimodal => EXIT_NOT_UNIMODAL,
        Verdict::Indeterminate => EXIT_INDETERMINATE,
    })
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::DensityFree { t, measure, grid, out } => {
            check_grid_size(grid)?;
            let g = free_density(t, &measure.resolve()?, grid)?;
            emit(&to_csv(&g), out.as_deref())?;
            Ok(0)
        }
        Command::DensityClassical {
            r,
            psi,
            measure,
            grid,
            out,
        } => {
            check_grid_size(grid)?;
            let g = convolve_pk(&measure.resolve()?, r, psi, grid)?;
            emit(&to_csv(&g), out.as_deref())?;
            Ok(0)
        }
        Command::Check {
            file,
            t,
            r,
            psi,
            measure,
            grid,
        } => {
            let g = match (file, t, r) {
                (Some(path), None, None) => {
                    if measure.is_given() {
                        return Err(input_error("a grid file takes no measure"));
                    }
                    let text = fs::read_to_string(&path)
                        .map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?;
                    from_csv(&text)?
                }
                (None, Some(t), None) => {
                    check_grid_size(grid)?;
                    free_density(t, &measure.resolve()?, grid)?
                }
                (None, None, Some(r)) => {
                    check_grid_size(grid)?;
                    convolve_pk(&measure.resolve()?, r, psi, grid)?
                }
                _ => return Err(input_error("give a grid file, or --t or --r with a measure")),
            };
            report(&g)
        }
        Command::Thresholds { phi } => {
            let (r_phi, t_phi) = eventual_threshold(phi)?;
            print_json(&json!({ "r_phi": r_phi, "t_phi": t_phi }));
            Ok(0)
        }
        Command::Witness { kind, a, r, t, grid } => {
            check_grid_size(grid)?;
            match kind {
                WitnessKind::ClassicalStrong => {
                    let r = r.ok_or_else(|| input_error("classical-strong needs --r"))?;
                    if t.is_some() {
                        return Err(input_error("classical-strong takes --r, not --t"));
                    }
                    let m = MuA::new(a)?;
                    match m.strong_unimodality_witness(r) {
                        Ok(w) => print_json(&json!({
                            "kind": "classical-strong",
                            "a": a,
                            "r": r,
                            "witness_level": w.level,
                            "witness_angles": w.crossings,
                        })),
                        Err(Error::NoWitness(_)) => {
                            print_json(&json!({ "kind": "classical-strong", "a": a, "r": r, "witness": "none" }))
                        }
                        Err(e) => return Err(e.into()),
                    }
                }
                WitnessKind::FreeStrong => {
                    if r.is_some() {
                        return Err(input_error("free-strong takes --t, not --r"));
                    }
                    let found = match t {
                        Some(t) => {
                            let g = free_density(t, &CircleMeasure::mu_a(a)?, grid)?;
                            let rep = is_unimodal(&g, DEFAULT_EPS)?;
                            rep.witness.map(|w| (t, w))
                        }
                        None => free_strong_witness(a, 0.005, 0.05, 24, grid)?.map(|w| (w.t, w.witness)),
                    };
                    match found {
                        Some((t, w)) => print_json(&json!({
                            "kind": "free-strong",
                            "a": a,
                            "t": t,
                            "witness_level": w.level,
                            "witness_angles": w.angles,
                        })),
                        None => print_json(&json!({ "kind": "free-strong", "a": a, "t": t, "witness": "none" })),
                    }
                }
            }
            Ok(0)
        }
        Command::Figure { n, out } => {
            emit(&to_csv(&figure_grid(n)?), out.as_deref())?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("freecirc: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
