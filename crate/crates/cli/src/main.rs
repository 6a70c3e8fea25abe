use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;

/// Monotone NAE-3SAT to Triangle-Free Cut reduction toolkit.
///
/// Exit codes: 0 yes / success, 1 no / invalid certificate, 2 usage or
/// format error, 3 search budget exceeded. `NAE_REDUCE_BUDGET` sets the
/// number of search nodes the exact solvers may visit.
#[derive(Parser, Debug)]
#[command(name = "naecut", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Split repeated variables so each occurs at most three times.
    Transform {
        cnf: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write the variable map to this file.
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Build the reduced graph and report its size and bounds.
    Reduce {
        cnf: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write the reduction map (variable vertices, triangles, gadgets).
        #[arg(long)]
        map: Option<PathBuf>,
        /// Input is already in transformed shape.
        #[arg(long)]
        skip_transform: bool,
    },
    /// Decide NAE-satisfiability by exhaustive search.
    SolveNae { cnf: PathBuf },
    /// Search for a triangle-free cut.
    SolveCut { graph: PathBuf },
    /// Search for a proper colouring with at most k colours.
    Color {
        graph: PathBuf,
        #[arg(short)]
        k: u32,
    },
    /// List the triangles of a graph.
    Triangles { graph: PathBuf },
    /// Check a certificate against its object.
    Verify {
        kind: CertKind,
        object: PathBuf,
        certificate: PathBuf,
        /// Transform map (assignment) or reduction map (cut).
        #[arg(long)]
        map: Option<PathBuf>,
        /// Assignment the cut should encode; needs --map.
        #[arg(long, requires = "map")]
        assignment: Option<PathBuf>,
    },
    /// Run the full pipeline on random instances and check every claim.
    Roundtrip {
        #[arg(long)]
        seed: u64,
        #[arg(short)]
        n: u32,
        #[arg(short)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        trials: u64,
        /// Drop one internal gadget edge (mutation check).
        #[arg(long)]
        break_gadget: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum CertKind {
    Assignment,
    Cut,
    Coloring,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Transform { cnf, output, map } => commands::transform(&cnf, output.as_deref(), map.as_deref()),
        Command::Reduce {
            cnf,
            output,
            map,
            skip_transform,
        } => commands::reduce(&cnf, output.as_deref(), map.as_deref(), skip_transform),
        Command::SolveNae { cnf } => commands::solve_nae(&cnf),
        Command::SolveCut { graph } => commands::solve_cut(&graph),
        Command::Color { graph, k } => commands::color(&graph, k),
        Command::Triangles { graph } => commands::triangles(&graph),
        Command::Verify {
            kind,
            object,
            certificate,
            map,
            assignment,
        } => match kind {
            CertKind::Assignment if assignment.is_some() => {
                Err(commands::usage("--assignment applies to cut certificates"))
            }
            CertKind::Assignment => commands::verify_assignment(&object, &certificate, map.as_deref()),
            CertKind::Cut => {
                commands::verify_cut(&object, &certificate, map.as_deref(), assignment.as_deref())
            }
            CertKind::Coloring if map.is_some() => {
                Err(commands::usage("--map applies to assignment and cut certificates"))
            }
            CertKind::Coloring => commands::verify_coloring(&object, &certificate),
        },
        Command::Roundtrip {
            seed,
            n,
            m,
            trials,
            break_gadget,
        } => commands::roundtrip(seed, n, m, trials, break_gadget),
    };
    match result {
        Ok(outcome) => outcome.into(),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(commands::exit_code(&err))
        }
    }
}
