use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dp1::arith::Place;
use dp1::experiment::{parse_spec, run, ExperimentSpec, Format, Kind, RunError, SpecError};

#[derive(Parser)]
#[command(
    name = "dp1",
    version,
    about = "Integrability experiments for y(j+1) + y(j-1) = (a y^2 + b y + c)/y^2"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Singularity confinement scan over a range of base indices.
    Confine(Flags),
    /// Degree growth over Q(z).
    Degrees(Flags),
    /// Height growth over Q and the small-value lemma checks.
    Heights(Flags),
    /// Per-place split of log heights.
    Decompose(Flags),
    /// Run several spec files concurrently; each uses its own output settings.
    Batch {
        #[arg(required = true)]
        specs: Vec<PathBuf>,
    },
}

#[derive(Args)]
struct Flags {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<Format>,
    /// Laurent window.
    #[arg(long)]
    window: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    /// Comma-separated places, e.g. `2,3,inf`.
    #[arg(long, value_delimiter = ',')]
    places: Option<Vec<Place>>,
    #[arg(long)]
    steps: Option<usize>,
    /// Degree-only fast path modulo word-sized primes.
    #[arg(long)]
    fast_degrees: bool,
}

fn load(path: &Path) -> Result<ExperimentSpec, RunError> {
    let text = std::fs::read_to_string(path)?;
    Ok(parse_spec(&text)?)
}

fn apply(kind: Kind, flags: &Flags, mut spec: ExperimentSpec) -> Result<ExperimentSpec, RunError> {
    if spec.kind != kind {
        return Err(SpecError::Invalid {
            field: "kind".into(),
            message: format!(
                "spec is for {:?} but the {:?} subcommand was given",
                spec.kind, kind
            ),
        }
        .into());
    }
    if let Some(p) = &flags.out {
        spec.output.path = Some(p.display().to_string());
    }
    if let Some(f) = flags.format {
        spec.output.format = f;
    }
    if let Some(w) = flags.window {
        spec.analysis.window = w;
    }
    if let Some(d) = flags.delta {
        spec.analysis.delta = d;
    }
    if let Some(p) = &flags.places {
        spec.analysis.places = p.clone();
    }
    if let Some(s) = flags.steps {
        spec.range.steps = Some(s);
    }
    if flags.fast_degrees {
        if kind != Kind::Degrees {
            return Err(SpecError::Invalid {
                field: "fast_degrees".into(),
                message: "only meaningful for the degrees subcommand".into(),
            }
            .into());
        }
        spec.analysis.fast_degrees = true;
    }
    spec.validate()?;
    Ok(spec)
}

/// Runs one spec and writes its report; returns the stdout text when no
/// output path is set. An undecided confinement test still writes the
/// report, then fails with the precision-exhausted status.
fn execute(spec: &ExperimentSpec) -> Result<Option<String>, RunError> {
    let report = run(spec)?;
    let text = report.render(spec.output.format);
    let text = match &spec.output.path {
        Some(p) => {
            std::fs::write(p, text)?;
            None
        }
        None => Some(text),
    };
    if report.precision_exhausted() {
        if let Some(t) = &text {
            print!("{t}");
        }
        return Err(RunError::Precision(format!(
            "series window {} (doubled once) left some base indices undecided",
            spec.analysis.window
        )));
    }
    Ok(text)
}

fn finish(r: Result<Option<String>, RunError>) -> ExitCode {
    match r {
        Ok(text) => {
            if let Some(t) = text {
                print!("{t}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, flags) = match cli.command {
        Command::Confine(f) => (Kind::Confine, f),
        Command::Degrees(f) => (Kind::Degrees, f),
        Command::Heights(f) => (Kind::Heights, f),
        Command::Decompose(f) => (Kind::Decompose, f),
        Command::Batch { specs } => {
            let results: Vec<_> = std::thread::scope(|s| {
                let handles: Vec<_> = specs
                    .iter()
                    .map(|p| s.spawn(move || load(p).and_then(|spec| execute(&spec))))
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("worker panicked"))
                    .collect()
            });
            let mut status = ExitCode::SUCCESS;
            for (path, r) in specs.iter().zip(results) {
                match r {
                    Ok(text) => print!("{}", text.unwrap_or_default()),
                    Err(e) => {
                        eprintln!("error: {}: {e}", path.display());
                        status = ExitCode::from(e.exit_code() as u8);
                    }
                }
            }
            return status;
        }
    };
    finish(
        load(&flags.spec)
            .and_then(|spec| apply(kind, &flags, spec))
            .and_then(|spec| execute(&spec)),
    )
}
