//! Command-line front end: signal generation, Gabor transforms, dual
//! windows, norm evaluation, n-term decay curves, and the verification
//! suites.
//!
//! Exit codes: 0 success, 1 verification failure, 2 not a frame,
//! 3 i/o failure, 4 validation failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use qbgabor::error::Error;
use qbgabor::gabor::{CoefficientGrid, DualMethod, GaborSystem, LatticeParams, LatticeWeight};
use qbgabor::grid::{GridGroup, Signal};
use qbgabor::io;
use qbgabor::norms::{amalgam_norm, y_norm, NeighborhoodQ, QuasiNormSpec};
use qbgabor::nterm;
use qbgabor::verify;
use qbgabor::windows;

#[derive(Parser)]
#[command(
    name = "qbg",
    version,
    about = "Gabor frames and quasi-norms on finite cyclic groups",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a stock signal and write it to a file.
    Generate(GenerateArgs),
    /// Analyze a signal into Gabor coefficients.
    Dgt(DgtArgs),
    /// Synthesize a signal from Gabor coefficients.
    Idgt(IdgtArgs),
    /// Compute the canonical dual window of a system.
    Dual(DualArgs),
    /// Evaluate a quasi-norm of a signal or coefficient grid.
    Norm(NormArgs),
    /// Compute an n-term approximation decay curve.
    NtermCurve(NtermArgs),
    /// Run a verification suite and emit a JSON report.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// gaussian | raised-cosine | random | sparse-atoms
    #[arg(long)]
    kind: String,
    /// Signal length L.
    #[arg(short = 'l', long)]
    length: usize,
    /// Number of atoms for sparse-atoms.
    #[arg(short = 'k', long, default_value_t = 1)]
    atoms: usize,
    /// Lattice "L,a,M" (sparse-atoms only; L must match --length).
    #[arg(long)]
    lattice: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short = 'o', long)]
    output: PathBuf,
}

#[derive(Args)]
struct DgtArgs {
    #[arg(short = 'i', long)]
    input: PathBuf,
    #[arg(long)]
    window: PathBuf,
    /// Lattice "L,a,M".
    #[arg(long)]
    lattice: String,
    /// Analyze with the canonical dual window instead of the window itself.
    #[arg(long)]
    use_dual: bool,
    #[arg(short = 'o', long)]
    output: PathBuf,
}

#[derive(Args)]
struct IdgtArgs {
    #[arg(short = 'i', long)]
    input: PathBuf,
    #[arg(long)]
    window: PathBuf,
    /// Lattice "L,a,M"; defaults to the grid sidecar.
    #[arg(long)]
    lattice: Option<String>,
    /// Synthesize with the canonical dual window.
    #[arg(long)]
    use_dual: bool,
    /// Optional reference signal; prints the relative round-trip error.
    #[arg(long)]
    reference: Option<PathBuf>,
    #[arg(short = 'o', long)]
    output: PathBuf,
}

#[derive(Args)]
struct DualArgs {
    #[arg(long)]
    window: PathBuf,
    /// Lattice "L,a,M".
    #[arg(long)]
    lattice: String,
    /// dense | neumann
    #[arg(long, default_value = "dense")]
    method: String,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 500)]
    max_iter: usize,
    #[arg(short = 'o', long)]
    output: PathBuf,
}

#[derive(Args)]
struct NormArgs {
    /// Signal or coefficient-grid file.
    #[arg(short = 'i', long)]
    input: PathBuf,
    /// JSON norm descriptor.
    #[arg(long)]
    spec: PathBuf,
    /// Window radius: also report the amalgam norm and ratio.
    #[arg(long)]
    radius: Option<usize>,
    /// Lattice "L,a,M" for grid input without a sidecar.
    #[arg(long)]
    lattice: Option<String>,
}

#[derive(Args)]
struct NtermArgs {
    /// Signal or coefficient-grid file.
    #[arg(short = 'i', long)]
    input: PathBuf,
    /// Analysis window (signal input only).
    #[arg(long)]
    window: Option<PathBuf>,
    /// Lattice "L,a,M" (signal input, or grid without sidecar).
    #[arg(long)]
    lattice: Option<String>,
    #[arg(long)]
    p: f64,
    /// Tail exponent; "inf" allowed.
    #[arg(long)]
    q: String,
    /// "one", "poly:<s>", or a CSV path.
    #[arg(long, default_value = "one")]
    weight: String,
    /// Comma-separated term counts, e.g. "1,2,4,8".
    #[arg(long)]
    n_list: String,
    /// Output CSV; the JSON summary lands next to it.
    #[arg(short = 'o', long)]
    output: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// norms | frames | coorbit | nterm | all
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Optional path for the JSON report (also printed to stdout).
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap usage problems are validation failures; help/version are not
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(4),
            };
        }
    };
    if let Err(code) = check_thread_cap() {
        return code;
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

/// `QBG_THREADS` caps worker threads; evaluation is single-threaded by
/// design, so any positive cap is honored as-is.
fn check_thread_cap() -> Result<(), ExitCode> {
    if let Ok(raw) = std::env::var("QBG_THREADS") {
        match raw.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(()),
            _ => {
                eprintln!("error: QBG_THREADS must be a positive integer, got {raw:?}");
                Err(ExitCode::from(4))
            }
        }
    } else {
        Ok(())
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::NotAFrame { .. } => 2,
        Error::Io(_) | Error::Format { .. } => 3,
        _ => 4,
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Dgt(args) => cmd_dgt(args),
        Command::Idgt(args) => cmd_idgt(args),
        Command::Dual(args) => cmd_dual(args),
        Command::Norm(args) => cmd_norm(args),
        Command::NtermCurve(args) => cmd_nterm_curve(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

fn parse_lattice(text: &str) -> Result<LatticeParams, Error> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::BadParams {
            reason: format!("lattice must be \"L,a,M\", got {text:?}"),
        });
    }
    let nums: Vec<usize> = parts
        .iter()
        .map(|s| {
            s.trim().parse().map_err(|_| Error::BadParams {
                reason: format!("bad lattice component {s:?}"),
            })
        })
        .collect::<Result<_, _>>()?;
    LatticeParams::new(nums[0], nums[1], nums[2])
}

fn parse_exponent(text: &str) -> Result<f64, Error> {
    if text == "inf" {
        return Ok(f64::INFINITY);
    }
    text.parse().map_err(|_| Error::BadParams {
        reason: format!("bad exponent {text:?}, expected a number or \"inf\""),
    })
}

#[derive(Serialize)]
struct RunInfo {
    version: &'static str,
    seed: Option<u64>,
}

fn run_info(seed: Option<u64>) -> RunInfo {
    RunInfo {
        version: env!("CARGO_PKG_VERSION"),
        seed,
    }
}

fn cmd_generate(args: GenerateArgs) -> Result<ExitCode, Error> {
    let group = GridGroup::new(args.length)?;
    let signal = match args.kind.as_str() {
        "gaussian" => windows::gaussian(group),
        "raised-cosine" => windows::raised_cosine(group),
        "random" => Signal::random(group, args.seed),
        "sparse-atoms" => {
            let lattice_text = args.lattice.as_deref().ok_or_else(|| Error::BadParams {
                reason: "sparse-atoms requires --lattice".to_string(),
            })?;
            let lattice = parse_lattice(lattice_text)?;
            if lattice.l != args.length {
                return Err(Error::BadParams {
                    reason: format!(
                        "lattice length {} does not match --length {}",
                        lattice.l, args.length
                    ),
                });
            }
            sparse_atoms(lattice, args.atoms, args.seed)?
        }
        other => return Err(Error::BadParams {
            reason: format!(
                "unknown kind {other:?}, expected gaussian, raised-cosine, random, or sparse-atoms"
            ),
        }),
    };
    io::write_signal(&args.output, &signal)?;
    let report = serde_json::json!({
        "run": run_info(Some(args.seed)),
        "config": {
            "kind": args.kind,
            "L": args.length,
            "output": args.output.display().to_string(),
        },
        "energy": signal.norm2(),
    });
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(ExitCode::SUCCESS)
}

/// Random combination of `k` distinct lattice atoms of the Gaussian system;
/// a single atom gets the unit coefficient.
fn sparse_atoms(lattice: LatticeParams, k: usize, seed: u64) -> Result<Signal, Error> {
    let group = GridGroup::new(lattice.l)?;
    let sys = GaborSystem::new(windows::gaussian(group), lattice.a, lattice.m)?;
    let total = lattice.time_shifts() * lattice.m;
    if k == 0 || k > total {
        return Err(Error::BadParams {
            reason: format!("atom count {k} must lie in [1, {total}]"),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut slots: Vec<usize> = (0..total).collect();
    for i in 0..k {
        let j = rng.gen_range(i..total);
        slots.swap(i, j);
    }
    let mut grid = CoefficientGrid::zeros(lattice);
    for &slot in slots.iter().take(k) {
        let re: f64 = rng.sample(rand_distr::StandardNormal);
        let im: f64 = rng.sample(rand_distr::StandardNormal);
        let coeff = if k == 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(re, im)
        };
        grid.values_mut()[slot] = coeff;
    }
    sys.idgt(&grid)
}

fn build_system(window_path: &Path, lattice: LatticeParams) -> Result<GaborSystem, Error> {
    let window = io::read_signal(window_path)?;
    if window.len() != lattice.l {
        return Err(Error::BadParams {
            reason: format!(
                "window length {} does not match lattice length {}",
                window.len(),
                lattice.l
            ),
        });
    }
    GaborSystem::new(window, lattice.a, lattice.m)
}

fn cmd_dgt(args: DgtArgs) -> Result<ExitCode, Error> {
    let lattice = parse_lattice(&args.lattice)?;
    let sys = build_system(&args.window, lattice)?;
    let f = io::read_signal(&args.input)?;
    let grid = if args.use_dual {
        let dual = sys.canonical_dual_dense()?.clone();
        sys.dgt_with(&f, &dual)?
    } else {
        sys.dgt(&f)?
    };
    io::write_grid(&args.output, &grid)?;
    let report = serde_json::json!({
        "run": run_info(None),
        "config": {"lattice": lattice, "use_dual": args.use_dual},
        "coefficient_energy": grid.norm2(),
    });
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(ExitCode::SUCCESS)
}

fn cmd_idgt(args: IdgtArgs) -> Result<ExitCode, Error> {
    let lattice = match &args.lattice {
        Some(text) => Some(parse_lattice(text)?),
        None => None,
    };
    let grid = io::read_grid(&args.input, lattice)?;
    let sys = build_system(&args.window, grid.lattice())?;
    let f = if args.use_dual {
        let dual = sys.canonical_dual_dense()?.clone();
        sys.idgt_with(&grid, &dual)?
    } else {
        sys.idgt(&grid)?
    };
    io::write_signal(&args.output, &f)?;
    let mut report = serde_json::json!({
        "run": run_info(None),
        "config": {"lattice": grid.lattice(), "use_dual": args.use_dual},
        "energy": f.norm2(),
    });
    if let Some(ref_path) = &args.reference {
        let reference = io::read_signal(ref_path)?;
        if reference.len() != f.len() {
            return Err(Error::LengthMismatch {
                left: reference.len(),
                right: f.len(),
            });
        }
        let err = (&f - &reference).norm2() / reference.norm2();
        report["roundtrip_rel_error"] = serde_json::json!(err);
    }
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(ExitCode::SUCCESS)
}

fn cmd_dual(args: DualArgs) -> Result<ExitCode, Error> {
    let lattice = parse_lattice(&args.lattice)?;
    let sys = build_system(&args.window, lattice)?;
    let method = match args.method.as_str() {
        "dense" => DualMethod::DenseSolve,
        "neumann" => DualMethod::Neumann {
            max_iter: args.max_iter,
            tol: args.tol,
        },
        other => {
            return Err(Error::BadParams {
                reason: format!("unknown method {other:?}, expected dense or neumann"),
            })
        }
    };
    let dual = match sys.canonical_dual(method) {
        Ok(d) => d,
        Err(e @ Error::NotAFrame { .. }) => {
            // report the measured bounds alongside the failure
            let (a, b) = sys.frame_bounds()?;
            eprintln!("error: {e}");
            let report = serde_json::json!({
                "run": run_info(None),
                "config": {"lattice": lattice, "method": args.method},
                "frame_bounds": {"lower": a, "upper": b},
                "is_frame": false,
            });
            println!("{}", serde_json::to_string_pretty(&report)?);
            return Ok(ExitCode::from(2));
        }
        Err(e) => return Err(e),
    };
    io::write_signal(&args.output, &dual)?;
    let (a, b) = sys.frame_bounds()?;
    let report = serde_json::json!({
        "run": run_info(None),
        "config": {"lattice": lattice, "method": args.method, "tol": args.tol},
        "frame_bounds": {"lower": a, "upper": b},
        "is_frame": true,
    });
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(ExitCode::SUCCESS)
}

fn cmd_norm(args: NormArgs) -> Result<ExitCode, Error> {
    let spec_file = io::NormSpecFile::from_path(&args.spec)?;
    let base_dir = args
        .spec
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."));
    let radius = args.radius.map(NeighborhoodQ::new);

    let mut report = serde_json::json!({
        "run": run_info(None),
        "spec": spec_file,
    });

    if io::is_grid_file(&args.input)? {
        let lattice = match &args.lattice {
            Some(text) => Some(parse_lattice(text)?),
            None => None,
        };
        let grid = io::read_grid(&args.input, lattice)?;
        let dims = (grid.time_len(), grid.freq_len());
        let spec = spec_file.resolve(grid.values().len(), Some(dims), &base_dir)?;
        let norm = y_norm(grid.values(), &spec)?;
        report["norm"] = serde_json::json!(norm);
        if let Some(q) = radius {
            match &spec {
                QuasiNormSpec::MixedPq {
                    p, q: qq, weight, ..
                } => {
                    let lw = LatticeWeight::new(grid.lattice(), weight.clone())?;
                    let cmp = qbgabor::gabor::amalgam_comparison_grid(&grid, *p, *qq, &lw, q)?;
                    report["amalgam"] = serde_json::json!(cmp.amalgam);
                    report["ratio"] = serde_json::json!(cmp.ratio);
                }
                _ => {
                    return Err(Error::BadParams {
                        reason: "amalgam radius over a grid requires a mixed spec".to_string(),
                    })
                }
            }
        }
    } else {
        let signal = io::read_signal(&args.input)?;
        let spec = spec_file.resolve(signal.len(), None, &base_dir)?;
        let norm = y_norm(signal.values(), &spec)?;
        report["norm"] = serde_json::json!(norm);
        if let Some(q) = radius {
            let a = amalgam_norm(&signal, q, &spec)?;
            report["amalgam"] = serde_json::json!(a);
            report["ratio"] = serde_json::json!(if norm > 0.0 { a / norm } else { 1.0 });
        }
    }
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(ExitCode::SUCCESS)
}

fn parse_lattice_weight(
    text: &str,
    lattice: LatticeParams,
    base: &Path,
) -> Result<LatticeWeight, Error> {
    if text == "one" {
        return Ok(LatticeWeight::ones(lattice));
    }
    if let Some(s) = text.strip_prefix("poly:") {
        let s: f64 = s.parse().map_err(|_| Error::BadParams {
            reason: format!("bad polynomial weight exponent {s:?}"),
        })?;
        return Ok(LatticeWeight::polynomial(lattice, s));
    }
    let values = io::read_weight_csv(&base.join(text))?;
    LatticeWeight::new(lattice, values)
}

fn cmd_nterm_curve(args: NtermArgs) -> Result<ExitCode, Error> {
    let q = parse_exponent(&args.q)?;
    let n_list: Vec<usize> = args
        .n_list
        .split(',')
        .map(|s| {
            s.trim().parse().map_err(|_| Error::BadParams {
                reason: format!("bad term count {s:?}"),
            })
        })
        .collect::<Result<_, _>>()?;

    let coeffs = if io::is_grid_file(&args.input)? {
        let lattice = match &args.lattice {
            Some(text) => Some(parse_lattice(text)?),
            None => None,
        };
        io::read_grid(&args.input, lattice)?
    } else {
        let lattice_text = args.lattice.as_deref().ok_or_else(|| Error::BadParams {
            reason: "signal input requires --lattice".to_string(),
        })?;
        let lattice = parse_lattice(lattice_text)?;
        let window_path = args.window.as_deref().ok_or_else(|| Error::BadParams {
            reason: "signal input requires --window".to_string(),
        })?;
        let sys = build_system(window_path, lattice)?;
        let f = io::read_signal(&args.input)?;
        let dual = sys.canonical_dual_dense()?.clone();
        sys.dgt_with(&f, &dual)?
    };

    let base_dir = std::env::current_dir().unwrap_or_else(|_| PathBuf::from("."));
    let weight = parse_lattice_weight(&args.weight, coeffs.lattice(), &base_dir)?;
    let curve = nterm::decay_curve_grid(&coeffs, args.p, q, &weight, &n_list)?;
    let summary = nterm::curve_summary(&coeffs, &curve, args.p, q, &weight)?;

    let mut csv = String::from("n,sigma\n");
    for (n, e) in curve.n_values.iter().zip(&curve.errors) {
        csv.push_str(&format!("{n},{e:?}\n"));
    }
    io::atomic_write(&args.output, csv.as_bytes())?;
    let summary_path = args.output.with_extension("json");
    io::atomic_write(&summary_path, &serde_json::to_vec_pretty(&summary)?)?;
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, Error> {
    let report = verify::run_suite(&args.suite, args.seed)?;
    for p in &report.properties {
        println!(
            "{} {} trials={} worst={:e} threshold={:e}",
            if p.pass { "PASS" } else { "FAIL" },
            p.name,
            p.trials,
            p.worst,
            p.threshold
        );
    }
    let json = serde_json::to_string_pretty(&report)?;
    if let Some(path) = &args.output {
        io::atomic_write(path, json.as_bytes())?;
    }
    println!("{json}");
    Ok(if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}
