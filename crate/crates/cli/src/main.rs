use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use skewcurv::suite::DEFAULT_SEED;
use skewcurv_cli::commands::{self, Options};
use skewcurv_cli::{exit, input};

#[derive(Parser)]
#[command(name = "skewcurv", version, about = "Curvature verification for 4-manifolds with a skew-circulant structure")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structural checks: S^4 = -id, S isometric, metric positive definite.
    Validate(PointArgs),
    /// Connection, curvature components, Ricci tensor and scalars.
    Curvature(TolArgs),
    /// Curvature classes (R), (R1) and the Einstein conditions.
    Classify(TolArgs),
    /// Sectional curvatures of an S-basis and the identities between them.
    Sectional(SectionalArgs),
    /// Run the full verification suite.
    PaperSuite {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Args)]
struct PointArgs {
    /// Manifold definition (JSON).
    file: PathBuf,
    /// Evaluation point `x1,x2,x3,x4`.
    #[arg(long, value_parser = parse_vec4, allow_hyphen_values = true)]
    point: Option<[f64; 4]>,
}

#[derive(Args)]
struct TolArgs {
    #[command(flatten)]
    at: PointArgs,
    /// Tolerance for conclusions (default 1e-9).
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct SectionalArgs {
    #[command(flatten)]
    base: TolArgs,
    /// Generating vector of the S-basis (default e1).
    #[arg(long, value_parser = parse_vec4, allow_hyphen_values = true)]
    x: Option<[f64; 4]>,
    /// Number of random unit vectors per identity.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Fail when an identity is skipped because its hypothesis does not hold.
    #[arg(long)]
    strict: bool,
}

fn parse_vec4(s: &str) -> Result<[f64; 4], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(format!("expected 4 comma-separated numbers, got {}", parts.len()));
    }
    let mut out = [0.0f64; 4];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.parse().map_err(|e| format!("{p:?}: {e}"))?;
        if !o.is_finite() {
            return Err(format!("{p:?} is not finite"));
        }
    }
    Ok(out)
}

fn options(at: &PointArgs, tol: Option<f64>) -> Options {
    Options { point: at.point.unwrap_or([0.0; 4]), tol, ..Options::default() }
}

fn run(cli: Cli) -> anyhow::Result<skewcurv_cli::report::Report> {
    match cli.command {
        Command::Validate(at) => commands::validate(&input::load(&at.file)?, &options(&at, None)),
        Command::Curvature(a) => commands::curvature(&input::load(&a.at.file)?, &options(&a.at, a.tol)),
        Command::Classify(a) => commands::classify(&input::load(&a.at.file)?, &options(&a.at, a.tol)),
        Command::Sectional(a) => {
            let opts = Options {
                x: a.x,
                samples: a.samples,
                seed: a.seed,
                strict: a.strict,
                ..options(&a.base.at, a.base.tol)
            };
            commands::sectional(&input::load(&a.base.at.file)?, &opts)
        }
        Command::PaperSuite { seed } => Ok(commands::paper_suite(&Options { seed, ..Options::default() })),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(report) => {
            // a closed stdout (e.g. piped into `head`) is not an error here
            let _ = writeln!(std::io::stdout().lock(), "{}", report.to_json());
            ExitCode::from(if report.pass { exit::PASS } else { exit::FAILED })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit::INPUT)
        }
    }
}
