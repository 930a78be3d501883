//! `tropikit`: checks tropical graphs, split types, A∞ structures, toric
//! diagonals and fiber potentials described in JSON scenes.
//!
//! Exit status: 0 when every check passes, 1 when a check fails, 2 on
//! malformed input.

mod commands;
mod examples;
mod report;
mod scene;

use clap::{Parser, Subcommand, ValueEnum};
use commands::{AinftyOp, GraphOp, Options, SplitOp};
use scene::{InputError, Scene};
use std::path::PathBuf;
use std::process::ExitCode;
use tropikit::exactalg::rational::{parse_rational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Comma separated rationals, kept as one clap value.
#[derive(Clone, Debug)]
struct Coords(Vec<Rational>);

#[derive(Parser)]
#[command(name = "tropikit", version, about = "Exact checks for tropical graphs of multiply cut symplectic manifolds")]
struct Cli {
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// Cone direction η₀ (or diagonal displacement), comma separated rationals.
    #[arg(long, value_parser = parse_vector, global = true, allow_hyphen_values = true)]
    eta: Option<Coords>,
    /// Holonomy point y, comma separated nonzero rationals.
    #[arg(long, value_parser = parse_vector, global = true, allow_hyphen_values = true)]
    holonomy: Option<Coords>,
    /// Novikov cutoff E.
    #[arg(long, value_parser = parse_one, global = true)]
    cutoff: Option<Rational>,
    /// Use the exponent sign ⟨λ,μ⟩ − c for the potential.
    #[arg(long, global = true)]
    flip_sign: bool,
    /// Seed for the strong cone sampling; sampling runs only when given.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Number of strong cone samples.
    #[arg(long, default_value_t = 100, global = true)]
    samples: usize,
    /// Highest arity of the A∞ relations checked.
    #[arg(long, default_value_t = 4, global = true)]
    arity: usize,
    /// Restrict to the scene item with this id.
    #[arg(long, global = true)]
    id: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate every section of a scene.
    Validate { scene: PathBuf },
    /// Weight cone, symmetry group, rigidity or balancing of each graph.
    Graph {
        #[arg(value_enum)]
        op: GraphOp,
        scene: PathBuf,
    },
    /// Validity, framed multiplicity or cone condition of each split type.
    Split {
        #[arg(value_enum)]
        op: SplitOp,
        scene: PathBuf,
    },
    /// Expected dimension of each index item.
    Index { scene: PathBuf },
    /// A∞ relations and units, or Maurer–Cartan residuals.
    Ainfty {
        #[arg(value_enum)]
        op: AinftyOp,
        scene: PathBuf,
    },
    /// Diagonal decomposition of each polytope.
    Diagonal { scene: PathBuf },
    /// Potential, leading disks and unobstructedness of each moment fiber.
    Potential { scene: PathBuf },
    /// Regenerate the worked examples and compare with the golden files.
    Examples {
        #[arg(long, default_value = concat!(env!("CARGO_MANIFEST_DIR"), "/goldens"))]
        goldens: PathBuf,
        /// Rewrite the golden files.
        #[arg(long)]
        bless: bool,
    },
}

fn parse_one(s: &str) -> Result<Rational, String> {
    parse_rational(s.trim()).map_err(|e| e.to_string())
}

fn parse_vector(s: &str) -> Result<Coords, String> {
    s.split(',').map(parse_one).collect::<Result<_, _>>().map(Coords)
}

fn run(cli: &Cli) -> Result<report::Report, InputError> {
    let opts = Options {
        eta: cli.eta.clone().map(|c| c.0),
        holonomy: cli.holonomy.clone().map(|c| c.0),
        cutoff: cli.cutoff.clone(),
        flip_sign: cli.flip_sign,
        seed: cli.seed,
        samples: cli.samples,
        arity: cli.arity,
        only: cli.id.clone(),
    };
    match &cli.command {
        Command::Validate { scene } => commands::validate(&Scene::load(scene)?, &opts),
        Command::Graph { op, scene } => commands::graph(&Scene::load(scene)?, *op, &opts),
        Command::Split { op, scene } => commands::split(&Scene::load(scene)?, *op, &opts),
        Command::Index { scene } => commands::index(&Scene::load(scene)?, &opts),
        Command::Ainfty { op, scene } => commands::ainfty(&Scene::load(scene)?, *op, &opts),
        Command::Diagonal { scene } => commands::diagonal(&Scene::load(scene)?, &opts),
        Command::Potential { scene } => commands::potential(&Scene::load(scene)?, &opts),
        Command::Examples { goldens, bless } => Ok(examples::run(goldens, *bless)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let out = match cli.format {
                Format::Json => report.json(),
                Format::Text => report.text(),
            };
            print!("{out}");
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            match cli.format {
                Format::Json => {
                    let v = serde_json::json!({ "error": { "pointer": e.pointer, "message": e.message } });
                    println!("{}", serde_json::to_string_pretty(&v).expect("json"));
                }
                Format::Text => eprintln!("error at {}: {}", e.pointer, e.message),
            }
            ExitCode::from(2)
        }
    }
}
