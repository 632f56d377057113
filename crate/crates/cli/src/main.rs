mod commands;
mod plot;
mod pretty;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use walkmult_core::{Error, Mode, Tolerance};

/// Walk multiplets and cospectral vertices of weighted graphs.
#[derive(Parser, Debug)]
#[command(name = "walkmult", version, about)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Scalar mode used to load graphs (defaults to the file's mode, else rational).
    #[arg(long, global = true, value_parser = parse_mode)]
    pub mode: Option<Mode>,
    /// Zero threshold for float-mode decisions.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest multiplet cardinality to enumerate.
    #[arg(long, global = true)]
    pub max_size: Option<usize>,
    /// Largest number of vertex subsets an enumeration may visit.
    #[arg(long, global = true)]
    pub budget: Option<u128>,
    /// Human-readable tables instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Allow removals that are not guaranteed to keep the pair cospectral.
    #[arg(long, global = true)]
    pub force: bool,
    /// Write the report here instead of standard output.
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,
}

impl Common {
    pub fn tolerance(&self) -> walkmult_core::Result<Tolerance> {
        match self.tol {
            Some(t) => Tolerance::default().with_zero(t),
            None => Ok(Tolerance::default()),
        }
    }
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse()
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cospectral pairs, their singlets and the automorphism group.
    Analyze { graph: PathBuf },
    /// Enumerate walk multiplets relative to a pair.
    Multiplets {
        graph: PathBuf,
        /// 1-based pair; the first cospectral pair is used if omitted.
        #[arg(long, num_args = 2, value_names = ["U", "V"])]
        pair: Option<Vec<usize>>,
        /// even, odd or both.
        #[arg(long, default_value = "both")]
        parity: String,
    },
    /// Apply a transform script and certify every step.
    Apply {
        graph: PathBuf,
        script: PathBuf,
        #[arg(long, num_args = 2, value_names = ["U", "V"])]
        pair: Option<Vec<usize>>,
        /// Also write the resulting graph (JSON for .json, edge list otherwise).
        #[arg(long)]
        out_graph: Option<PathBuf>,
    },
    /// Parity eigenbasis, zero sets and zero-sum checks.
    Eigen {
        graph: PathBuf,
        #[arg(long, num_args = 2, value_names = ["U", "V"])]
        pair: Option<Vec<usize>>,
    },
    /// Build a template and break its symmetry with certified transforms.
    Generate {
        /// path[:n], cycle[:n], ladder[:rungs], prism[:k], signed-star, two-lobe[:lobe].
        template: String,
        #[arg(long, default_value_t = 2)]
        steps: usize,
        /// unit or random template weights.
        #[arg(long, default_value = "unit")]
        weights: String,
        /// Write the content-addressed bundle under this directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Draw a report as SVG.
    Plot {
        report: PathBuf,
        /// Index of the multiplet to annotate.
        #[arg(long)]
        multiplet: Option<usize>,
        /// 1-based eigenvector whose zero set is shaded.
        #[arg(long)]
        vector: Option<usize>,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } => 3,
        Error::Refused { .. } => 4,
        Error::Verification(_) | Error::CriteriaDisagree(_) => 5,
        _ => 2,
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("WALKMULT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // Ignore the error raised when a pool already exists.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let c = &cli.common;
    let result = match &cli.command {
        Command::Analyze { graph } => commands::analyze(c, graph),
        Command::Multiplets { graph, pair, parity } => commands::multiplets(c, graph, pair.as_deref(), parity),
        Command::Apply {
            graph,
            script,
            pair,
            out_graph,
        } => commands::apply(c, graph, script, pair.as_deref(), out_graph.as_deref()),
        Command::Eigen { graph, pair } => commands::eigen(c, graph, pair.as_deref()),
        Command::Generate {
            template,
            steps,
            weights,
            out_dir,
        } => commands::generate(c, template, *steps, weights, out_dir.as_deref()),
        Command::Plot {
            report,
            multiplet,
            vector,
        } => commands::plot(c, report, *multiplet, *vector),
    };
    match result.and_then(|o| commands::emit(c, &o).map(|_| o.status)) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(e)) => {
            eprintln!("walkmult: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(e) => {
            let code = exit_code(&e);
            let report = json!({"error": e.to_string(), "exit_code": code});
            println!("{}", serde_json::to_string_pretty(&report).expect("plain JSON"));
            eprintln!("walkmult: {e}");
            ExitCode::from(code)
        }
    }
}
