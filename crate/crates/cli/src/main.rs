//! `rspiral`: classify and solve spiral G2 Hermite problems, and run the
//! clothoid approximation pipeline.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::{debug, info};

use rational_spiral::io::csv::{clothoid_csv, solution_csv};
use rational_spiral::io::svg::{clothoid_svg, solution_svg};
use rational_spiral::io::{ClothoidReport, DocumentError, ProblemDocument, SolutionDocument};
use rational_spiral::{
    approximate_clothoid, classify, curvature_comparison, normalize_to_chord, solve_g2_hermite,
    Solvability, SpanPolicy, SpiralError,
};

/// Environment variable holding the log filter, e.g. `SPIRAL_LOG=debug`.
const LOG_ENV: &str = "SPIRAL_LOG";

/// Rows per span in the clothoid curvature table.
const CLOTHOID_ROWS_PER_SPAN: usize = 64;

#[derive(Parser, Debug)]
#[command(
    name = "rspiral",
    version,
    about = "Spiral arcs between two curvature elements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a problem and print its invariants.
    Check {
        /// Problem document (JSON).
        input: PathBuf,
    },
    /// Solve a problem and write the solution document.
    Solve {
        /// Problem document (JSON).
        input: PathBuf,
        /// Solution document to write.
        #[arg(long)]
        out: PathBuf,
        /// Also draw the chord, lense, control polygons and curves.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Also write curvature against arc length for both solutions.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Approximate the clothoid k = s between two arc lengths.
    Clothoid {
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        /// Fraction of the farthest solvable span actually used.
        #[arg(long, default_value_t = SpanPolicy::default().margin)]
        margin: f64,
        /// Directory for report.json, curvature.csv and clothoid.svg.
        #[arg(long)]
        out: PathBuf,
    },
}

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Ok = 0,
    NoSpiral = 2,
    BiarcOnly = 3,
    NoShortSpiral = 4,
    MethodNotApplicable = 5,
    Usage = 64,
    Io = 74,
}

impl From<Solvability> for Status {
    fn from(tag: Solvability) -> Self {
        match tag {
            Solvability::Solvable => Status::Ok,
            Solvability::NoSpiral => Status::NoSpiral,
            Solvability::BiarcOnly => Status::BiarcOnly,
            Solvability::NoShortSpiral => Status::NoShortSpiral,
            Solvability::MethodNotApplicable => Status::MethodNotApplicable,
        }
    }
}

#[derive(Debug)]
struct Failure {
    status: Status,
    message: String,
}

impl Failure {
    fn io(path: &Path, err: std::io::Error) -> Self {
        Self {
            status: Status::Io,
            message: format!("{}: {err}", path.display()),
        }
    }

    fn parse(path: &Path, err: DocumentError) -> Self {
        Self {
            status: Status::Usage,
            message: format!("{}: {err}", path.display()),
        }
    }

    fn solver(err: SpiralError) -> Self {
        let status = match err {
            SpiralError::NotApplicable(_) => Status::MethodNotApplicable,
            _ => Status::Usage,
        };
        Self {
            status,
            message: err.to_string(),
        }
    }
}

type Outcome = Result<Status, Failure>;

fn read_problem(path: &Path) -> Result<ProblemDocument, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    ProblemDocument::parse(&text).map_err(|e| Failure::parse(path, e))
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::io(path, e))?;
    info!("wrote {}", path.display());
    Ok(())
}

fn check(input: &Path) -> Outcome {
    let doc = read_problem(input)?;
    let (start, end) = doc.elements();
    let (frame, problem) = normalize_to_chord(&start, &end).map_err(Failure::solver)?;
    debug!("chord frame {frame:?}, normalized {problem:?}");
    let class = classify(&problem);
    let inv = class.invariants;
    println!("{}: {}", class.tag, class.tag.describe());
    println!("Q = {:.10}", inv.q);
    println!(
        "sigma = {:.10} rad ({:.6} deg)",
        inv.sigma,
        inv.sigma.to_degrees()
    );
    match class.q_max {
        Some(qm) => println!("Q_max = {qm:.10}"),
        None => println!("Q_max = undefined"),
    }
    Ok(class.tag.into())
}

fn solve(input: &Path, out: &Path, svg: Option<&Path>, csv: Option<&Path>) -> Outcome {
    let doc = read_problem(input)?;
    let (start, end) = doc.elements();
    let outcome = solve_g2_hermite(&start, &end).map_err(Failure::solver)?;
    info!(
        "{} with {} solutions",
        outcome.class.tag,
        outcome.solutions.len()
    );
    write(
        out,
        &SolutionDocument::new(&outcome, &doc.options).to_json(),
    )?;
    if let Some(path) = svg {
        write(path, &solution_svg(&outcome))?;
    }
    if let Some(path) = csv {
        write(path, &solution_csv(&outcome, doc.options.samples))?;
    }
    if !outcome.is_solvable() {
        eprintln!("{}: {}", outcome.class.tag, outcome.class.tag.describe());
    }
    Ok(outcome.class.tag.into())
}

fn clothoid(from: f64, to: f64, margin: f64, out: &Path) -> Outcome {
    let approx = approximate_clothoid(from, to, SpanPolicy { margin }).map_err(Failure::solver)?;
    fs::create_dir_all(out).map_err(|e| Failure::io(out, e))?;
    let report = ClothoidReport::new(&approx);
    write(&out.join("report.json"), &report.to_json())?;
    let rows = curvature_comparison(&approx, CLOTHOID_ROWS_PER_SPAN);
    write(&out.join("curvature.csv"), &clothoid_csv(&rows))?;
    write(&out.join("clothoid.svg"), &clothoid_svg(&approx))?;
    println!(
        "{} spans, max deviation {:.6e}",
        approx.spans.len(),
        approx.deviation.max_distance
    );
    Ok(Status::Ok)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Check { input } => check(&input),
        Command::Solve {
            input,
            out,
            svg,
            csv,
        } => solve(&input, &out, svg.as_deref(), csv.as_deref()),
        Command::Clothoid {
            from,
            to,
            margin,
            out,
        } => clothoid(from, to, margin, &out),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter(LOG_ENV)).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // help and version go to stdout and succeed; usage errors must
            // not collide with the classification codes
            let _ = err.print();
            return if err.use_stderr() {
                ExitCode::from(Status::Usage as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(status) => ExitCode::from(status as u8),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.status as u8)
        }
    }
}
