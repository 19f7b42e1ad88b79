use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use raag_qm::axis::cyclically_reduce;
use raag_qm::certify::{certify, verify_certificate_text, RunConfig, DEFAULT_MAX_POWER};
use raag_qm::counting::{find_maximal_g_nested, WitnessSearch};
use raag_qm::raag::{DefiningGraph, GraphFile, Raag};
use raag_qm::sample::{seed_from_env, DEFAULT_SEED};
use raag_qm::suites::{oracle_crosscheck, property_suites, CrosscheckConfig};
use raag_qm::{fixtures, Error};

#[derive(Parser)]
#[command(name = "raag-qm", version, about = "Counting quasimorphisms and scl lower bounds for right-angled Artin groups")]
struct Cli {
    /// Defining graph as JSON: {"generators": [...], "edges": [[u, v], ...]}.
    #[arg(long, global = true)]
    graph: Option<PathBuf>,

    /// Built-in graph instead of a file.
    #[arg(long, global = true, value_enum, conflicts_with = "graph")]
    fixture: Option<Fixture>,

    /// Element as space-separated letters, e.g. "a b a^-1 b^-1".
    #[arg(long, global = true)]
    word: Option<String>,

    /// Largest power tabulated in certificates.
    #[arg(short = 'N', long = "max-power", global = true, default_value_t = DEFAULT_MAX_POWER)]
    max_power: usize,

    /// Use bounded witness search of this radius instead of the exact solver.
    #[arg(long, global = true)]
    radius: Option<usize>,

    /// Sampler seed; falls back to RAAG_QM_SEED.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[arg(short, long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fixture {
    F2,
    Z2,
    Path,
}

#[derive(Subcommand)]
enum Command {
    /// Build and check a certificate for --word.
    Certify,
    /// Re-verify a certificate file from scratch.
    Verify { certificate: PathBuf },
    /// Run the sampled and exhaustive invariant suites.
    Props {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Compare the fast path against a brute-force ball.
    Crosscheck {
        #[arg(long, default_value_t = 5)]
        ball_radius: usize,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
    },
    /// Normal form, axis and maximal segment of --word.
    Info,
}

fn load_graph(cli: &Cli) -> Result<Raag, Error> {
    match (&cli.graph, cli.fixture) {
        (Some(path), _) => {
            let text = fs::read_to_string(path)?;
            let file: GraphFile = serde_json::from_str(&text).map_err(|e| Error::Parse {
                location: format!("{}:{}:{}", path.display(), e.line(), e.column()),
                message: e.to_string(),
            })?;
            Ok(Raag::new(DefiningGraph::from_file(&file)?))
        }
        (None, Some(Fixture::F2)) => Ok(fixtures::free_group()),
        (None, Some(Fixture::Z2)) => Ok(fixtures::free_abelian()),
        (None, Some(Fixture::Path)) => Ok(fixtures::path_graph()),
        (None, None) => Err(Error::Precondition("one of --graph or --fixture is required".into())),
    }
}

fn run_config(cli: &Cli, graph: Raag) -> RunConfig {
    let mut c = RunConfig::new(graph, cli.word.as_deref().unwrap_or(""));
    c.graph_path = cli.graph.clone();
    c.max_power = cli.max_power;
    c.witness = cli.radius.map_or(WitnessSearch::Exact, WitnessSearch::Bounded);
    c.seed = cli.seed.unwrap_or_else(|| seed_from_env(DEFAULT_SEED));
    c.output = cli.output.clone();
    c
}

fn emit(cli: &Cli, text: &str) -> Result<(), Error> {
    match &cli.output {
        Some(path) => Ok(fs::write(path, text)?),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn require_word(cli: &Cli) -> Result<(), Error> {
    match &cli.word {
        Some(_) => Ok(()),
        None => Err(Error::Precondition("--word is required".into())),
    }
}

fn run(cli: &Cli) -> Result<bool, Error> {
    match &cli.command {
        Command::Verify { certificate } => {
            let text = fs::read_to_string(certificate)?;
            let ok = verify_certificate_text(&text)?;
            emit(cli, if ok { "certificate verified" } else { "certificate REJECTED" })?;
            Ok(ok)
        }
        Command::Certify => {
            require_word(cli)?;
            let config = run_config(cli, load_graph(cli)?);
            let cert = certify(&config)?;
            emit(cli, &cert.to_json())?;
            Ok(true)
        }
        Command::Props { samples } => {
            let mut config = run_config(cli, load_graph(cli)?);
            config.samples = *samples;
            let report = property_suites(&config)?;
            emit(cli, &report.to_string())?;
            Ok(report.passed())
        }
        Command::Crosscheck { ball_radius, samples } => {
            let mut config = CrosscheckConfig::new(load_graph(cli)?, *ball_radius);
            config.samples = *samples;
            config.seed = cli.seed.unwrap_or_else(|| seed_from_env(DEFAULT_SEED));
            let report = oracle_crosscheck(&config)?;
            emit(cli, &report.to_string())?;
            Ok(report.passed())
        }
        Command::Info => {
            require_word(cli)?;
            let raag = load_graph(cli)?;
            let g = raag.parse(cli.word.as_deref().unwrap_or(""))?;
            let mut out = format!("element      {g}\nlength       {}\n", g.len());
            out += &format!("exponents    {:?}\n", g.exponent_sums());
            out += &format!("in [G,G]     {}\n", g.in_commutator_subgroup());
            if !g.is_identity() {
                let ax = cyclically_reduce(&g)?;
                let seg = find_maximal_g_nested(&ax)?;
                out += &format!("conjugator   {}\ncore         {}\ndelta        {}\n", ax.conjugator, ax.core, ax.delta);
                let chain: Vec<String> = seg.chain().iter().map(|h| h.to_string()).collect();
                out += &format!("segment      {}", chain.join(" ⊋ "));
            }
            emit(cli, &out)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Parse { .. } | Error::Presentation(_) | Error::Precondition(_) | Error::Io(_) => ExitCode::from(2),
                Error::InternalInvariant(_) | Error::NotApplicable(_) | Error::Oracle(_) => ExitCode::from(1),
            }
        }
    }
}
