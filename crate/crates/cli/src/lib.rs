//! Command implementations behind the `qmsgap` binary.
//!
//! Exit codes: 0 success, 1 property failure, 2 ill-posed model (no faithful
//! or non-unique invariant state and similar), 3 input error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use qmsgap_core::config::ModelConfig;
use qmsgap_core::gap::{GapProblem, GapReport};
use qmsgap_core::harness::{run_campaign, CampaignConfig};
use qmsgap_core::monotone::FDescriptor;
use qmsgap_core::qms::invariant_state;
use qmsgap_core::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROPERTY_FAILURE: i32 = 1;
pub const EXIT_ILL_POSED: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "qmsgap", version, about = "f-spectral gaps of quantum Markov semigroups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gap for one f; prints a CSV header and one row.
    Gap {
        config: PathBuf,
        /// gns, anti-gns, kms, bkm, power:ALPHA or measure:PATH
        #[arg(long = "f")]
        f: String,
    },
    /// Gap of the power family f = t^α over a grid start:stop:count.
    Curve {
        config: PathBuf,
        #[arg(long)]
        grid: String,
    },
    /// Runs a property campaign.
    Verify {
        campaign: PathBuf,
        /// Overrides the seed in the campaign file.
        #[arg(long)]
        seed: Option<u64>,
        /// Report path; the CSV goes to PATH.csv.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Config(_)
            | Error::InvalidPower(_)
            | Error::InvalidMeasure(_)
            | Error::NotNormalized { .. }
            | Error::FitTolerance { .. } => EXIT_INPUT,
            _ => EXIT_ILL_POSED,
        };
        Self { code, message: e.to_string() }
    }
}

fn input(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INPUT, message: message.into() }
}

fn io(e: std::io::Error) -> Failure {
    input(format!("write failed: {e}"))
}

/// 17 significant digits, `inf` for +∞.
pub fn fmt_num(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x:.16e}")
    }
}

fn load_problem(path: &Path) -> Result<GapProblem<f64>, Failure> {
    let cfg = ModelConfig::load(path)?;
    let model = cfg.model::<f64>()?;
    let state = match cfg.state::<f64>()? {
        Some(s) => s,
        None => invariant_state(&model)?,
    };
    Ok(GapProblem::new(model, state)?)
}

pub const GAP_HEADER: &str = "f,alpha,lambda,kernel_dim,min_spectrum,residual";

pub fn gap_row(f: &FDescriptor, r: &GapReport<f64>) -> String {
    let min_spectrum = r.spectrum.first().map_or(f64::INFINITY, |v| *v);
    format!(
        "{},{},{},{},{},{}",
        f,
        r.alpha.map(fmt_num).unwrap_or_default(),
        fmt_num(r.lambda.to_f64()),
        r.kernel_dim,
        fmt_num(min_spectrum),
        fmt_num(r.residuals.max())
    )
}

pub fn cmd_gap(config: &Path, f: &str, out: &mut dyn Write) -> Result<i32, Failure> {
    let desc = FDescriptor::parse(f)?;
    let problem = load_problem(config)?;
    let report = problem.spectral_gap(&problem.metric(desc.to_function()?)?)?;
    for w in &report.warnings {
        log::warn!("{w:?}");
    }
    writeln!(out, "{GAP_HEADER}\n{}", gap_row(&desc, &report)).map_err(io)?;
    Ok(EXIT_OK)
}

/// `start:stop:count` with 0 ≤ start ≤ stop ≤ 1 and count ≥ 1 (count 1 needs start = stop).
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, Failure> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [a, b, n] = parts[..] else {
        return Err(input(format!("grid {spec:?} is not start:stop:count")));
    };
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| input(format!("grid {spec:?}: {s:?} is not a number")));
    let (a, b) = (num(a)?, num(b)?);
    let n: usize = n.trim().parse().map_err(|_| input(format!("grid {spec:?}: {n:?} is not a count")))?;
    if !(0.0 <= a && a <= b && b <= 1.0) {
        return Err(input(format!("grid {spec:?}: need 0 <= start <= stop <= 1")));
    }
    match n {
        0 => Err(input(format!("grid {spec:?}: count must be at least 1"))),
        1 if a != b => Err(input(format!("grid {spec:?}: a single point needs start = stop"))),
        1 => Ok(vec![a]),
        _ => Ok((0..n).map(|k| if k == n - 1 { b } else { a + (b - a) * k as f64 / (n - 1) as f64 }).collect()),
    }
}

pub const CURVE_HEADER: &str = "kind,alpha,lambda,symmetry_defect,monotonicity_defect";

pub fn cmd_curve(config: &Path, grid: &str, out: &mut dyn Write) -> Result<i32, Failure> {
    let alphas = parse_grid(grid)?;
    let problem = load_problem(config)?;
    let curve = problem.gap_curve(&alphas)?;
    writeln!(out, "{CURVE_HEADER}").map_err(io)?;
    for (a, l) in &curve.points {
        writeln!(out, "point,{},{},,", fmt_num(*a), fmt_num(*l)).map_err(io)?;
    }
    writeln!(out, "summary,,,{},{}", fmt_num(curve.symmetry_defect), fmt_num(curve.monotonicity_defect)).map_err(io)?;
    if !curve.symmetric() {
        log::warn!("curve is not symmetric about 1/2: defect {:e} above {:e}", curve.symmetry_defect, curve.tolerance);
    }
    if !curve.monotone() {
        log::warn!("curve decreases on [0, 1/2]: defect {:e} above {:e}", curve.monotonicity_defect, curve.tolerance);
    }
    Ok(EXIT_OK)
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

pub fn cmd_verify(
    campaign: &Path,
    seed: Option<u64>,
    out_path: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    let mut cfg = CampaignConfig::load(campaign)?;
    if let Some(s) = seed {
        cfg.seed = Some(s);
    }
    if cfg.seed.is_none() {
        return Err(input("no seed: pass --seed or set \"seed\" in the campaign file"));
    }
    let report = run_campaign(&cfg)?;
    for (name, t) in &report.timing {
        log::info!("{name}: {t:.2?}");
    }
    let text = report.to_text();
    match out_path {
        Some(p) => {
            let write = |path: &Path, body: &str| {
                std::fs::write(path, body).map_err(|e| input(format!("cannot write {}: {e}", path.display())))
            };
            write(p, &text)?;
            write(&with_suffix(p, ".csv"), &report.to_csv())?;
            if !report.passed() {
                let cx = with_suffix(p, ".counterexamples.json");
                write(&cx, &report.counterexamples_json())?;
                writeln!(err, "counterexamples written to {}", cx.display()).map_err(io)?;
            }
        }
        None => {
            out.write_all(text.as_bytes()).map_err(io)?;
            if !report.passed() {
                writeln!(err, "{}", report.counterexamples_json()).map_err(io)?;
            }
        }
    }
    Ok(if report.passed() { EXIT_OK } else { EXIT_PROPERTY_FAILURE })
}

/// Runs a parsed command; errors are reported on `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Gap { config, f } => cmd_gap(config, f, out),
        Command::Curve { config, grid } => cmd_curve(config, grid, out),
        Command::Verify { campaign, seed, out: path } => cmd_verify(campaign, *seed, path.as_deref(), out, err),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// Logging from `QMSGAP_LOG` (error, warn, info or debug; default warn).
pub fn init_logging() {
    let level = std::env::var("QMSGAP_LOG").unwrap_or_else(|_| "warn".into());
    let filter = match level.as_str() {
        "error" | "warn" | "info" | "debug" => level.as_str(),
        other => {
            eprintln!("warning: ignoring QMSGAP_LOG={other:?}; expected error, warn, info or debug");
            "warn"
        }
    };
    env_logger::Builder::new().parse_filters(filter).format_timestamp(None).init();
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("0.25:0.25:1").unwrap(), vec![0.25]);
        assert_eq!(parse_grid("0:1:11").unwrap()[10], 1.0);
        for bad in ["0.6:0.2:5", "0:1.5:3", "0:1:0", "0:1", "a:1:2", "0.1:0.2:1"] {
            assert_eq!(parse_grid(bad).unwrap_err().code, EXIT_INPUT, "{bad}");
        }
    }

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, 1.0 / 3.0, 2.5e-300, 7.0] {
            assert_eq!(fmt_num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_num(f64::INFINITY), "inf");
    }

    #[test]
    fn error_codes() {
        assert_eq!(Failure::from(Error::Config("x".into())).code, EXIT_INPUT);
        assert_eq!(Failure::from(Error::NoFaithfulInvariantState { min_eigenvalue: 0.0 }).code, EXIT_ILL_POSED);
    }
}
