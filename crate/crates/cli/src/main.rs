//! Command-line front end: wires generator descriptions to the analysis,
//! dual construction, summation experiments and identity checks, emitting
//! machine-readable artifacts.
//!
//! Exit codes: 1 bad command line, 2 invalid generator/symbol input,
//! 3 numeric tolerance failure, 4 internal invariant breach.

mod output;
mod render;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sispace_core::analysis::{classify_full, profile, profile_with_tol, OmegaBlock};
use sispace_core::bracket::{verify_quadratic_identity, verify_quartic_identity};
use sispace_core::dual::{regular_dual, DualSystem};
use sispace_core::error::ErrorClass;
use sispace_core::orthonorm::{grid_avoiding, OrthoGenerator};
use sispace_core::piecewise::{self, PiecewiseFn};
use sispace_core::summation::reconstruction_sweep;
use sispace_core::trigpoly::TrigPoly;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

pub(crate) const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "sispace",
    version,
    about = "Spectral analysis of integer-shift systems generated by compactly supported functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GeneratorArgs {
    /// Path to a generator description (JSON: breakpoints/pieces or builtin)
    #[arg(value_name = "GENERATOR")]
    generator: Option<PathBuf>,
    /// Alternative to the positional path
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,
    /// Builtin generator: box | hat | psi1 | bspline:m
    #[arg(long, value_name = "NAME")]
    builtin: Option<String>,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Directory for artifact files
    #[arg(long, default_value = "sispace-out")]
    out_dir: PathBuf,
    /// Artifact formats for tabular outputs
    #[arg(long, value_parser = ["json", "csv", "both"], default_value = "both")]
    format: String,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the shift system of a generator
    Analyze {
        #[command(flatten)]
        gen: GeneratorArgs,
        #[command(flatten)]
        out: OutputArgs,
        /// Start of the removed shift block (default: centered)
        #[arg(long, allow_negative_numbers = true)]
        omega_start: Option<i64>,
        /// Root-detection tolerance for the singularity profile
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Construct the dual system and report interpolants
    Dual {
        #[command(flatten)]
        gen: GeneratorArgs,
        #[command(flatten)]
        out: OutputArgs,
        /// Interpolant/biorthogonality range
        #[arg(long, default_value_t = 8)]
        range: i64,
        #[arg(long, allow_negative_numbers = true)]
        omega_start: Option<i64>,
        /// Truncation for the regular dual's coefficients
        #[arg(long = "K", alias = "k", default_value_t = 64)]
        k: u32,
        /// Root-detection tolerance for the singularity profile
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Reconstruction-error sweeps for a function of the span
    Reconstruct {
        #[command(flatten)]
        gen: GeneratorArgs,
        #[command(flatten)]
        out: OutputArgs,
        /// Symbol of the function (JSON trigonometric polynomial)
        #[arg(long, value_name = "SYMBOL")]
        f: Option<PathBuf>,
        /// Methods to sweep
        #[arg(long, value_parser = ["partial", "cesaro", "abel", "all"], default_value = "all")]
        method: String,
        /// Cesàro orders (repeat or comma-separate)
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.25, 0.5, 1.0])]
        alpha: Vec<f64>,
        /// Abel radii
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.5, 0.9, 0.99, 0.999])]
        r_list: Vec<f64>,
        /// Largest mean order
        #[arg(long, default_value_t = 256)]
        n_max: i64,
        #[arg(long, allow_negative_numbers = true)]
        omega_start: Option<i64>,
    },
    /// Check the two lattice-sum identities
    Identities {
        #[command(flatten)]
        out: OutputArgs,
        /// Evaluation points (repeat or comma-separate)
        #[arg(long, value_delimiter = ',')]
        xi: Vec<f64>,
        /// Additional seeded random points
        #[arg(long, default_value_t = 0)]
        random: u32,
        /// Truncation of the lattice sums
        #[arg(long = "K", alias = "k", default_value_t = 10_000)]
        k: u32,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Lattice-sum orthonormality check of the normalized generator
    Orthonormalize {
        #[command(flatten)]
        gen: GeneratorArgs,
        #[command(flatten)]
        out: OutputArgs,
        /// Grid points on the torus
        #[arg(long, default_value_t = 64)]
        grid_points: usize,
        /// Truncation of the lattice sums
        #[arg(long = "K", alias = "k", default_value_t = 10_000)]
        k: u32,
    },
    /// Human-readable summary aggregating all analyses of one generator
    Report {
        #[command(flatten)]
        gen: GeneratorArgs,
        #[command(flatten)]
        out: OutputArgs,
        #[arg(long, allow_negative_numbers = true)]
        omega_start: Option<i64>,
        /// Largest mean order in the convergence table
        #[arg(long, default_value_t = 256)]
        n_max: i64,
        /// Truncation for dual coefficients and lattice sums
        #[arg(long = "K", alias = "k", default_value_t = 64)]
        k: u32,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("SISPACE_LOG")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

pub(crate) struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<sispace_core::Error> for Failure {
    fn from(e: sispace_core::Error) -> Self {
        let code = match e.class() {
            ErrorClass::InvalidInput => 2,
            ErrorClass::Tolerance => 3,
            ErrorClass::Internal => 4,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    pub fn io(context: &str, e: std::io::Error) -> Self {
        Failure {
            code: 2,
            message: format!("{context}: {e}"),
        }
    }
}

/// Resolves the generator argument triple into a function and a short id.
fn load_generator(args: &GeneratorArgs) -> Result<(PiecewiseFn, String), Failure> {
    let path = args.generator.clone().or_else(|| args.input.clone());
    match (path, &args.builtin) {
        (Some(_), Some(_)) => Err(Failure::config(
            "give either a generator path or --builtin, not both",
        )),
        (None, None) => Err(Failure::config(
            "a generator is required: positional path, --input, or --builtin",
        )),
        (Some(p), None) => {
            let text = std::fs::read_to_string(&p)
                .map_err(|e| Failure::io(&format!("reading {}", p.display()), e))?;
            let f = piecewise::from_spec_json(&text)?;
            let id = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "generator".into());
            Ok((f, id))
        }
        (None, Some(name)) => {
            let (name, order) = match name.split_once(':') {
                Some((n, m)) => {
                    let order: u32 = m
                        .parse()
                        .map_err(|_| Failure::config(format!("bad builtin order '{m}'")))?;
                    (n, Some(order))
                }
                None => (name.as_str(), None),
            };
            let f = piecewise::builtin(name, order)?;
            let id = match order {
                Some(m) => format!("{name}{m}"),
                None => name.to_string(),
            };
            Ok((f, id))
        }
    }
}

fn load_symbol(path: &Option<PathBuf>) -> Result<(TrigPoly, String), Failure> {
    match path {
        None => Ok((
            TrigPoly::from_real_coeffs([(3, 1.0), (-2, 0.5)]),
            "default(e3+0.5*e-2)".to_string(),
        )),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Failure::io(&format!("reading {}", p.display()), e))?;
            let h = TrigPoly::from_json(&text)
                .map_err(|e| Failure::input(format!("symbol {}: {e}", p.display())))?;
            Ok((
                h,
                p.file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default(),
            ))
        }
    }
}

pub(crate) fn dual_system_for(
    phi: &TrigPoly,
    omega_start: Option<i64>,
) -> Result<DualSystem, sispace_core::Error> {
    let prof = profile(phi)?;
    let omega = match omega_start {
        Some(s) => OmegaBlock::at(s, prof.total() as usize),
        None => OmegaBlock::centered(prof.total() as usize),
    };
    DualSystem::new(&prof, omega)
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Analyze {
            gen,
            out,
            omega_start,
            tol,
        } => {
            check_tol(tol)?;
            let (f, id) = load_generator(&gen)?;
            let phi = sispace_core::bracket::autocorrelation(&f);
            let report = classify_full(&phi, omega_start, tol)?;
            log::info!("classified generator '{id}'");
            let doc = output::AnalyzeDoc {
                schema_version: SCHEMA_VERSION,
                generator: id,
                weight: phi,
                basis_report: report,
            };
            output::write_json(&out.out_dir, "analyze.json", &doc, true)?;
            Ok(())
        }
        Command::Dual {
            gen,
            out,
            range,
            omega_start,
            k,
            tol,
        } => {
            check_tol(tol)?;
            let (f, id) = load_generator(&gen)?;
            let phi = sispace_core::bracket::autocorrelation(&f);
            let prof = profile_with_tol(&phi, tol)?;
            let doc = if prof.is_empty() {
                let coeffs = regular_dual(&phi, k as i64)?;
                output::DualDoc::regular(id, coeffs, &f, range)?
            } else {
                let sys = dual_system_for(&phi, omega_start)?;
                output::DualDoc::singular(id, &sys, range)?
            };
            output::write_json(&out.out_dir, "dual.json", &doc, true)?;
            Ok(())
        }
        Command::Reconstruct {
            gen,
            out,
            f,
            method,
            alpha,
            r_list,
            n_max,
            omega_start,
        } => {
            if n_max < 1 {
                return Err(Failure::config("--n-max must be at least 1"));
            }
            let (generator, id) = load_generator(&gen)?;
            let (h, symbol_id) = load_symbol(&f)?;
            let phi = sispace_core::bracket::autocorrelation(&generator);
            let sys = dual_system_for(&phi, omega_start)?;
            let n_list = output::doubling_orders(n_max);
            let empty: [f64; 0] = [];
            let (partial, alphas, radii): (bool, &[f64], &[f64]) = match method.as_str() {
                "partial" => (true, &empty, &empty),
                "cesaro" => (false, &alpha, &empty),
                "abel" => (false, &empty, &r_list),
                _ => (true, &alpha, &r_list),
            };
            let report = reconstruction_sweep(
                &phi, &sys, &h, partial, alphas, &n_list, radii, &id, &symbol_id,
            )?;
            if out.format != "csv" {
                output::write_json(
                    &out.out_dir,
                    "reconstruction.json",
                    &output::versioned(&report),
                    true,
                )?;
            }
            if out.format != "json" {
                output::write_reconstruction_csv(&out.out_dir, &report)?;
            }
            Ok(())
        }
        Command::Identities {
            out,
            xi,
            random,
            k,
            seed,
        } => {
            let mut points = xi;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..random {
                let mut x: f64 = rng.gen_range(0.0..1.0);
                while !(1e-6..=1.0 - 1e-6).contains(&x) {
                    x = rng.gen_range(0.0..1.0);
                }
                points.push(x);
            }
            if points.is_empty() {
                return Err(Failure::config(
                    "identities needs --xi values or --random N",
                ));
            }
            let mut rows = Vec::new();
            for &x in &points {
                rows.push(("quadratic", verify_quadratic_identity(x, k)?));
                rows.push(("quartic", verify_quartic_identity(x, k)?));
            }
            output::write_identities_csv(&out.out_dir, &rows)?;
            if out.format == "json" || out.format == "both" {
                output::write_json(
                    &out.out_dir,
                    "identities.json",
                    &output::identities_json(&rows),
                    false,
                )?;
            }
            Ok(())
        }
        Command::Orthonormalize {
            gen,
            out,
            grid_points,
            k,
        } => {
            let (f, id) = load_generator(&gen)?;
            let ortho = OrthoGenerator::new(f)?;
            let margin = if ortho.profile().is_empty() {
                1e-3
            } else {
                0.02
            };
            let grid = grid_avoiding(grid_points, ortho.profile(), margin);
            output::write_orthonormality(&out.out_dir, &out.format, &id, &ortho, &grid, k)?;
            Ok(())
        }
        Command::Report {
            gen,
            out,
            omega_start,
            n_max,
            k,
        } => {
            let (f, id) = load_generator(&gen)?;
            let text = render::full_report(&f, &id, omega_start, n_max, k)?;
            output::write_text(&out.out_dir, "report.md", &text)?;
            print!("{text}");
            Ok(())
        }
    }
}

fn check_tol(tol: f64) -> Result<(), Failure> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Failure::config(format!(
            "--tol must be positive, got {tol}"
        )));
    }
    Ok(())
}

pub(crate) fn ensure_dir(dir: &Path) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(|e| Failure::io("creating output directory", e))
}
