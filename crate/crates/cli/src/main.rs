use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use kanto::format::{CostJson, CouplingJson, LiftJson, MetricSpec};
use kanto::laws::{all_pass, run_suite, SuiteConfig};
use kanto::monad::{barycenter, lifted_pseudometric, second_order_distance, ConvexSpace, LawReport};
use kanto::{kantorovich, GroundSpace, Measure, Metric, Point, SecondOrderMeasure};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Kantorovich distances, optimal couplings and probability-monad operations
/// on finitely supported measures.
#[derive(Parser)]
#[command(name = "kanto", version)]
struct Cli {
    /// Ground metric: a name (euclidean, manhattan, chebyshev, discrete,
    /// zero), a JSON spec, or a path to a JSON spec file.
    #[arg(long, global = true, default_value = "euclidean")]
    metric: String,

    /// Seed of the law-suite generator.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Instances per law group.
    #[arg(long, global = true, default_value_t = 200)]
    samples: usize,

    /// Cost and weight tolerance of the law suite.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Kantorovich distance between two measures.
    Dist { mu: PathBuf, eta: PathBuf },
    /// Optimal coupling with its cost.
    Coupling { mu: PathBuf, eta: PathBuf },
    /// Barycenter of a measure on coordinate points.
    Barycenter { mu: PathBuf },
    /// Flattens a measure on measures.
    Flatten { m: PathBuf },
    /// Distance between two measures on measures, with its coupling.
    Dist2 { m: PathBuf, n: PathBuf },
    /// Lifted distance for the pseudometric given by `--metric`.
    Lift { mu: PathBuf, eta: PathBuf },
    /// Runs the randomized law suite.
    Laws,
}

enum Failure {
    Input(String),
    Law,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

#[derive(Serialize)]
struct PointJson {
    point: Point,
}

#[derive(Serialize)]
struct SuiteJson {
    seed: u64,
    samples: usize,
    pass: bool,
    laws: Vec<LawReport>,
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn metric(arg: &str) -> Result<Metric, Failure> {
    let t = arg.trim();
    let spec = if t.starts_with('{') || !Path::new(t).is_file() {
        MetricSpec::parse(t)?
    } else {
        let text = fs::read_to_string(t).map_err(|e| Failure::Input(format!("{t}: {e}")))?;
        MetricSpec::parse(&text).map_err(|e| Failure::Input(format!("{t}: {e}")))?
    };
    Ok(spec.build()?)
}

fn run(cli: &Cli) -> Result<(String, bool), Failure> {
    let space = || -> Result<GroundSpace, Failure> { Ok(GroundSpace::of_metric(metric(&cli.metric)?)) };
    let out = match &cli.command {
        Command::Dist { mu, eta } => {
            let (mu, eta): (Measure, Measure) = (read_json(mu)?, read_json(eta)?);
            let r = kantorovich(&space()?, &mu, &eta)?;
            json(&CostJson { cost: r.cost })
        }
        Command::Coupling { mu, eta } => {
            let (mu, eta): (Measure, Measure) = (read_json(mu)?, read_json(eta)?);
            json(&CouplingJson::from(&kantorovich(&space()?, &mu, &eta)?))
        }
        Command::Barycenter { mu } => {
            let mu: Measure = read_json(mu)?;
            let dim = mu.atoms()[0]
                .dim()
                .ok_or_else(|| Failure::Input(format!("barycenter needs coordinate points, got {}", mu.atoms()[0])))?;
            json(&PointJson {
                point: barycenter(&ConvexSpace::euclidean(dim), &mu)?,
            })
        }
        Command::Flatten { m } => {
            let m: SecondOrderMeasure = read_json(m)?;
            json(&m.flatten())
        }
        Command::Dist2 { m, n } => {
            let (m, n): (SecondOrderMeasure, SecondOrderMeasure) = (read_json(m)?, read_json(n)?);
            json(&CouplingJson::from(&second_order_distance(&space()?, &m, &n)?))
        }
        Command::Lift { mu, eta } => {
            let (mu, eta): (Measure, Measure) = (read_json(mu)?, read_json(eta)?);
            let p = metric(&cli.metric)?;
            let p_tau = lifted_pseudometric(&GroundSpace::of_metric(p.clone()), &p, &mu, &eta)?;
            json(&LiftJson { p_tau })
        }
        Command::Laws => {
            let mut cfg = SuiteConfig {
                seed: cli.seed,
                samples: cli.samples,
                ..Default::default()
            };
            if let Some(tol) = cli.tol {
                if !(tol.is_finite() && tol >= 0.0) {
                    return Err(Failure::Input(format!("--tol must be a non-negative number, got {tol}")));
                }
                cfg.tol = tol;
            }
            let laws = run_suite(&cfg).map_err(|e| {
                eprintln!("kanto: law suite aborted: {e}");
                Failure::Law
            })?;
            let pass = all_pass(&laws);
            return Ok((
                json(&SuiteJson {
                    seed: cfg.seed,
                    samples: cfg.samples,
                    pass,
                    laws,
                }),
                pass,
            ));
        }
    };
    Ok((out, true))
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("result types serialize")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((text, pass)) => {
            let written = match &cli.out {
                Some(path) => fs::write(path, format!("{text}\n")),
                None => writeln!(std::io::stdout(), "{text}"),
            };
            if let Err(e) = written {
                eprintln!("kanto: cannot write output: {e}");
                return ExitCode::from(2);
            }
            if pass {
                ExitCode::SUCCESS
            } else {
                eprintln!("kanto: law suite failed");
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("kanto: invalid input: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Law) => ExitCode::from(1),
    }
}
