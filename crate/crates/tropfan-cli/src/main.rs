use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tropfan_cli::commands::{self, Outcome, Relation};

/// Stacky fans, their minimal models, and fans over tropical abelian
/// varieties.
///
/// Exit codes: 0 ok/true, 1 false or violation, 2 parse error,
/// 3 incompatible inputs, 4 unsupported.
#[derive(Parser)]
#[command(name = "tropfan", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a document for structural violations.
    Validate { file: PathBuf },
    /// Print the canonical minimal model.
    Minimal {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide birational equivalence, with a witness point when inequivalent.
    Equiv { a: PathBuf, b: PathBuf },
    /// Is FINE a subdivision of COARSE.
    Subdivision { fine: PathBuf, coarse: PathBuf },
    /// Is the inclusion FINE -> COARSE proper.
    Proper { fine: PathBuf, coarse: PathBuf },
    /// Is the inclusion FINE -> COARSE representable.
    Representable { fine: PathBuf, coarse: PathBuf },
    /// Does the fan cover its ambient (or admissible) region.
    Complete { file: PathBuf },
    /// Quotient cone complex of a translation-invariant fan.
    Quotient {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Polarized base of the tropical Jacobian of a graph.
    Jacobian {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Common refinement of two fans with the same support.
    Refine {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a rank-2 fan or coloring as SVG.
    Render {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 4)]
        radius: i64,
    },
    /// Brute-force cross-checks.
    #[command(subcommand)]
    Oracle(Oracle),
}

#[derive(Subcommand)]
enum Oracle {
    /// List the lattice points of S in a box.
    SEnumerate {
        file: PathBuf,
        #[arg(long)]
        radius: i64,
    },
    /// Check that random admissible points are covered by translates.
    CoverSample {
        file: PathBuf,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        bound: i64,
    },
    /// Enumerate translations between maximal representatives.
    TranslationsBruteforce {
        file: PathBuf,
        #[arg(long)]
        bound: i64,
    },
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Validate { file } => commands::validate(&file),
        Command::Minimal { file, out } => commands::minimal(&file, out.as_deref()),
        Command::Equiv { a, b } => commands::equiv(&a, &b),
        Command::Subdivision { fine, coarse } => commands::relation(Relation::Subdivision, &fine, &coarse),
        Command::Proper { fine, coarse } => commands::relation(Relation::Proper, &fine, &coarse),
        Command::Representable { fine, coarse } => commands::relation(Relation::Representable, &fine, &coarse),
        Command::Complete { file } => commands::complete(&file),
        Command::Quotient { file, out } => commands::quotient(&file, out.as_deref()),
        Command::Jacobian { file, out } => commands::jacobian(&file, out.as_deref()),
        Command::Refine { a, b, out } => commands::refine(&a, &b, out.as_deref()),
        Command::Render { file, out, radius } => commands::render_file(&file, &out, radius),
        Command::Oracle(Oracle::SEnumerate { file, radius }) => commands::s_enumerate(&file, radius),
        Command::Oracle(Oracle::CoverSample { file, count, seed, bound }) => {
            commands::cover_sample(&file, count, seed, bound)
        }
        Command::Oracle(Oracle::TranslationsBruteforce { file, bound }) => {
            commands::translations_bruteforce(&file, bound)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { commands::PARSE as u8 } else { 0 });
        }
    };
    let out = run(cli);
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
