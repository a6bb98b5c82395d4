use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod outcome;

use outcome::{Envelope, Failure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "raycat", version, about = "Workbench for finite ray categories")]
struct Cli {
    /// Longest path the closure may keep nonzero.
    #[arg(long, global = true, default_value_t = 32)]
    cap: usize,
    /// Candidate assignments allowed per witness search.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the category and check the axioms.
    Build { file: PathBuf },
    /// Transit classification at a point or of a hom set.
    Morph {
        file: PathBuf,
        #[arg(long, conflicts_with = "pair")]
        point: Option<String>,
        #[arg(long, num_args = 2, value_names = ["X", "Y"])]
        pair: Option<Vec<String>>,
    },
    /// List every contour.
    Contours { file: PathBuf },
    /// Classify non-deep contours.
    Classify {
        file: PathBuf,
        #[arg(long)]
        contour: Option<usize>,
    },
    /// Search the decisive subcategories of non-deep contours for witnesses.
    CheckMild {
        file: PathBuf,
        #[arg(long)]
        contour: Option<usize>,
    },
    /// Overlap of two contours.
    Disjoint {
        file: PathBuf,
        #[arg(long, num_args = 2, value_names = ["I", "J"], required = true)]
        contours: Vec<usize>,
        #[arg(long, default_value_t = 6)]
        k: usize,
    },
    /// How a classified contour meets the rest of the category.
    Neighborhood {
        file: PathBuf,
        #[arg(long)]
        contour: usize,
    },
    /// Kill the ideal generated by a path.
    Quotient {
        file: PathBuf,
        #[arg(long)]
        kill: String,
    },
    /// Split a point into a source and a sink copy.
    Split {
        file: PathBuf,
        #[arg(long)]
        point: String,
    },
    /// Full subcategory on some points.
    Sub {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        points: Vec<String>,
    },
    /// Decisive point sets of a contour.
    Decisive {
        file: PathBuf,
        #[arg(long)]
        contour: usize,
        #[arg(long, default_value_t = 4)]
        k: usize,
    },
    /// Check whether a diagram is cleaving.
    Cleave {
        file: PathBuf,
        #[arg(long)]
        diagram: PathBuf,
    },
    /// Look for a crown.
    Crown {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_period: usize,
    },
    /// The separated quiver and its components.
    Separate { file: PathBuf },
    /// Search the catalog of cleaving shapes.
    Witness {
        file: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_nodes: usize,
    },
    /// Run every acceptance criterion over the bundled corpus.
    CorpusVerify {
        /// Corpus directory; defaults to RAYCAT_CORPUS or the bundled one.
        #[arg(long)]
        dir: Option<PathBuf>,
        /// Rewrite the lockfile from the current results instead of checking.
        #[arg(long)]
        write_lock: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Build { .. } => "build",
            Command::Morph { .. } => "morph",
            Command::Contours { .. } => "contours",
            Command::Classify { .. } => "classify",
            Command::CheckMild { .. } => "check-mild",
            Command::Disjoint { .. } => "disjoint",
            Command::Neighborhood { .. } => "neighborhood",
            Command::Quotient { .. } => "quotient",
            Command::Split { .. } => "split",
            Command::Sub { .. } => "sub",
            Command::Decisive { .. } => "decisive",
            Command::Cleave { .. } => "cleave",
            Command::Crown { .. } => "crown",
            Command::Separate { .. } => "separate",
            Command::Witness { .. } => "witness",
            Command::CorpusVerify { .. } => "corpus-verify",
        }
    }

    fn file(&self) -> Option<&PathBuf> {
        match self {
            Command::Build { file }
            | Command::Morph { file, .. }
            | Command::Contours { file }
            | Command::Classify { file, .. }
            | Command::CheckMild { file, .. }
            | Command::Disjoint { file, .. }
            | Command::Neighborhood { file, .. }
            | Command::Quotient { file, .. }
            | Command::Split { file, .. }
            | Command::Sub { file, .. }
            | Command::Decisive { file, .. }
            | Command::Cleave { file, .. }
            | Command::Crown { file, .. }
            | Command::Separate { file }
            | Command::Witness { file, .. } => Some(file),
            Command::CorpusVerify { .. } => None,
        }
    }
}

/// All searches run on one thread; the variable is still validated.
fn check_threads() -> Result<(), Failure> {
    match std::env::var("RAYCAT_THREADS") {
        Ok(v) => match v.parse::<usize>() {
            Ok(n) if n > 0 => Ok(()),
            _ => Err(Failure::input(format!("RAYCAT_THREADS must be a positive integer, got `{v}`"))),
        },
        Err(_) => Ok(()),
    }
}

/// A closed pipe downstream is not worth a panic.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = commands::Options { cap: cli.cap, budget: cli.budget };
    let run = check_threads().and_then(|()| commands::run(&cli.command, &opts));
    let file = cli.command.file().map(|f| f.display().to_string());
    let (status, error, outcome) = match run {
        Ok(o) => (o.status, None, Some(o)),
        Err(f) => (f.status, Some(f.message), None),
    };
    match cli.format {
        Format::Json => {
            let env = Envelope {
                command: cli.command.name(),
                file,
                status,
                exit_code: status.code(),
                error,
                result: outcome.map(|o| o.result).unwrap_or_default(),
            };
            emit(&(serde_json::to_string_pretty(&env).expect("envelope serializes") + "\n"));
        }
        Format::Text => {
            if let Some(o) = outcome {
                emit(&o.text);
            }
            if let Some(e) = error {
                match file {
                    Some(f) => eprintln!("raycat: {f}: {e}"),
                    None => eprintln!("raycat: {e}"),
                }
            }
        }
    }
    ExitCode::from(status.code() as u8)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::outcome::Status;
    use clap::CommandFactory;

    #[test]
    fn arguments_are_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn defaults() {
        let cli = Cli::parse_from(["raycat", "build", "x.rc"]);
        assert_eq!((cli.cap, cli.budget, cli.format), (32, 1_000_000, Format::Text));
        assert_eq!(Status::Incomplete.code(), 3);
    }
}
