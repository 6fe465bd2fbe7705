//! `ncat`: validate n-graphs, check composition axioms, enumerate structures,
//! verify morphisms and generate example files.

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use ncat_core::io::{exit_code, ReportDocument};

#[derive(Parser, Debug)]
#[command(
    name = "ncat",
    version,
    about = "Finite n-graphs and their composition structures"
)]
pub struct Cli {
    /// Print a machine-readable report instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Print every counterexample instead of the first ten per axiom.
    #[arg(long, global = true)]
    pub all: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a file and check that it describes a valid n-graph.
    Validate { file: PathBuf },
    /// Check the composition tables of a file against axiom flags.
    Check {
        file: PathBuf,
        /// Comma-separated flags; defaults to the file's own flags.
        #[arg(long)]
        flags: Option<String>,
    },
    /// Enumerate composition tables on the graph of a file.
    Enumerate(EnumerateArgs),
    /// Certify that a skeletal graph carries exactly one global structure.
    Skeletal { file: PathBuf },
    /// Reverse the cells of one dimension.
    Opposite {
        file: PathBuf,
        #[arg(long)]
        level: i32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Extract the hom-graph between two parallel cells.
    Hom {
        file: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a morphism section as a map of graphs.
    Morphism {
        file: PathBuf,
        #[arg(long)]
        name: String,
        #[command(flatten)]
        target: Target,
    },
    /// Check a morphism section as a functor.
    Functor {
        file: PathBuf,
        #[arg(long)]
        name: String,
        #[command(flatten)]
        target: Target,
    },
    /// Check a natural transformation section.
    Nat {
        file: PathBuf,
        /// Name of the transformation section.
        #[arg(long)]
        t: String,
        /// Source functor, overriding the one named in the section.
        #[arg(long)]
        f: Option<String>,
        /// Target functor, overriding the one named in the section.
        #[arg(long)]
        g: Option<String>,
        #[command(flatten)]
        target: Target,
    },
    /// Check a modification section.
    Modification {
        file: PathBuf,
        /// Name of the modification section.
        #[arg(long)]
        m: String,
        #[arg(long)]
        s: Option<String>,
        #[arg(long)]
        t: Option<String>,
        #[command(flatten)]
        target: Target,
    },
    /// Generate example files.
    #[command(subcommand)]
    Gen(GenCommand),
}

#[derive(Args, Debug)]
pub struct Target {
    /// File holding the codomain; defaults to the input file itself.
    #[arg(long)]
    pub codomain: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    pub file: PathBuf,
    /// Comma-separated flags; defaults to the file's flags, else global,unital,associative.
    #[arg(long)]
    pub flags: Option<String>,
    /// Comma-separated vertical levels; defaults to every level.
    #[arg(long, value_delimiter = ',')]
    pub levels: Option<Vec<i32>>,
    /// Also enumerate horizontal tables.
    #[arg(long)]
    pub horizontal: bool,
    /// Keep only partial structures that cannot be extended by one entry.
    #[arg(long)]
    pub maximal: bool,
    #[arg(long, env = "NCAT_MAX_NODES")]
    pub max_nodes: Option<u64>,
    /// Seconds.
    #[arg(long, env = "NCAT_TIME_BUDGET_SECS")]
    pub time_budget: Option<f64>,
    /// Cross-check against exhaustive search when the space is small enough.
    #[arg(long)]
    pub oracle: bool,
    /// Write one file per isomorphism class into this directory.
    #[arg(long)]
    pub emit: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum GenCommand {
    /// Boundaries and matching diagrams up to a number of points.
    Cob {
        #[arg(long, default_value_t = 2)]
        max_points: usize,
        /// Include boundary concatenation as a partial table below objects.
        #[arg(long)]
        concat: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Small sets, maps and changes of maps.
    Sets {
        #[arg(long, default_value_t = 2)]
        max_size: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// One arrow between every ordered pair of objects.
    Skeletal {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        objects: usize,
        #[arg(long, default_value_t = 2)]
        tail: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// A random valid graph.
    Random {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        tail: usize,
        #[arg(long, default_value_t = 2)]
        objects: usize,
        /// Upper bound on non-identity cells per dimension.
        #[arg(long, default_value_t = 3)]
        extra: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write the built-in example corpus into a directory.
    Corpus { dir: PathBuf },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Check { .. } => "check",
            Command::Enumerate(_) => "enumerate",
            Command::Skeletal { .. } => "skeletal",
            Command::Opposite { .. } => "opposite",
            Command::Hom { .. } => "hom",
            Command::Morphism { .. } => "morphism",
            Command::Functor { .. } => "functor",
            Command::Nat { .. } => "nat",
            Command::Modification { .. } => "modification",
            Command::Gen(_) => "gen",
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() && std::env::args().any(|a| a == "--json") => {
            let report = ReportDocument::error("usage", "usage", e.render().to_string());
            print!("{}", report.to_canonical_string());
            return ExitCode::from(exit_code(&report) as u8);
        }
        Err(e) => e.exit(),
    };
    let start = Instant::now();
    let name = cli.command.name();
    let (mut report, text) = match commands::run(&cli.command) {
        Ok(out) => (out.report, out.text),
        Err(e) => (ReportDocument::error(name, e.kind, e.message), None),
    };
    report.timing_ms = start.elapsed().as_millis() as u64;
    if cli.json {
        print!("{}", report.to_canonical_string());
    } else {
        let summary = render::human(&report, cli.all);
        if let Some(text) = &text {
            print!("{text}");
        }
        // keep stdout a clean document when one was printed
        if report.error.is_some() || text.is_some() {
            eprint!("{summary}");
        } else {
            print!("{summary}");
        }
    }
    ExitCode::from(exit_code(&report) as u8)
}
