//! `fdq`: symbol algebra and lattice dynamics from the command line.
//!
//! [`run`] never panics on bad input and never exits the process; the binary
//! only forwards its streams and exit code.

mod algebra;
mod numeric;

use std::path::PathBuf;

use clap::{Arg, ArgAction, Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use fdq_core::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_VALIDATION: u8 = 3;
pub const EXIT_NUMERIC: u8 = 4;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CliResult {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl CliResult {
    fn ok(stdout: String) -> Self {
        CliResult {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }
}

/// Failure with its diagnostic; the code follows the error kind.
#[derive(Debug)]
pub(crate) struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } => EXIT_PARSE,
            Error::Validation(_) | Error::Config(_) => EXIT_VALIDATION,
            Error::Numeric(_) => EXIT_NUMERIC,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl Failure {
    pub(crate) fn io(what: &str, path: &std::path::Path, e: std::io::Error) -> Self {
        Failure {
            code: EXIT_VALIDATION,
            message: format!("cannot {what} {}: {e}", path.display()),
        }
    }
}

/// Parse failure of one command-line expression, with a caret under the spot.
pub(crate) fn in_input(label: &str, text: &str, e: Error) -> Failure {
    let mut f = Failure::from(e.clone());
    if let Error::Parse { pos, .. } = e {
        f.message = format!("{}\n  {label}: {text}\n  {}^", f.message, " ".repeat(label.len() + 2 + pos));
    }
    f
}

#[derive(Parser, Debug)]
#[command(name = "fdq", version, about = "Exact symbol algebra, star products and lattice dynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Number of field modes (explicit, never inferred)
    #[arg(long)]
    modes: usize,
    /// Print canonical JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct Deformation {
    /// Deformation parameter: h, -h, ih, -ih, or any constant expression such as "-i*h"
    #[arg(long, default_value = "-ih", allow_hyphen_values = true)]
    lambda: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StarKind {
    Normal,
    Weyl,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Direction {
    WeylToNormal,
    NormalToWeyl,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Poisson bracket {A, B}
    Bracket {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[command(flatten)]
        common: Common,
    },
    /// Star product A * B
    Star {
        #[arg(long, value_enum)]
        kind: StarKind,
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[command(flatten)]
        deformation: Deformation,
        #[command(flatten)]
        common: Common,
    },
    /// Change of ordering between the two star products
    Renorm {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(long, value_enum)]
        direction: Direction,
        #[command(flatten)]
        deformation: Deformation,
        #[command(flatten)]
        common: Common,
    },
    /// Normal form of an enveloping-algebra word
    Nf {
        #[arg(allow_hyphen_values = true)]
        word: String,
        #[command(flatten)]
        deformation: Deformation,
        #[command(flatten)]
        common: Common,
    },
    /// Normal form of the involution of a word
    Involution {
        #[arg(allow_hyphen_values = true)]
        word: String,
        #[command(flatten)]
        deformation: Deformation,
        #[command(flatten)]
        common: Common,
    },
    /// Rewrite in creation/annihilation variables a[i], abar[i]
    Wick {
        #[arg(allow_hyphen_values = true)]
        a: String,
        /// Comma-separated positive frequencies, one per mode (a single value is repeated)
        #[arg(long, allow_hyphen_values = true)]
        omega: String,
        /// Read a Wick-variable expression and return to phi/pi
        #[arg(long)]
        inverse: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Integrate the lattice Schrodinger equation over [t0, t1]
    Evolve {
        #[arg(long)]
        config: PathBuf,
        /// Also compute interaction-picture Dyson terms up to this order
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Truncated perturbative S-matrix
    Smatrix {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 2)]
        order: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Classical Hamiltonian flow from an initial phase point
    Flow {
        /// JSON file {"phi": [...], "pi": [...], "dt": 1e-3, "hbar": 1.0}
        #[arg(long)]
        config: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        hamiltonian: String,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        json: bool,
    },
}

fn dispatch(cmd: Command) -> Result<String, Failure> {
    match cmd {
        Command::Bracket { a, b, common } => algebra::bracket(&a, &b, common.modes, common.json),
        Command::Star {
            kind,
            a,
            b,
            deformation,
            common,
        } => algebra::star(
            matches!(kind, StarKind::Weyl),
            &a,
            &b,
            &deformation.lambda,
            common.modes,
            common.json,
        ),
        Command::Renorm {
            a,
            direction,
            deformation,
            common,
        } => algebra::renorm(
            &a,
            matches!(direction, Direction::WeylToNormal),
            &deformation.lambda,
            common.modes,
            common.json,
        ),
        Command::Nf {
            word,
            deformation,
            common,
        } => algebra::nf(&word, &deformation.lambda, common.modes, common.json, false),
        Command::Involution {
            word,
            deformation,
            common,
        } => algebra::nf(&word, &deformation.lambda, common.modes, common.json, true),
        Command::Wick {
            a,
            omega,
            inverse,
            common,
        } => algebra::wick(&a, &omega, inverse, common.modes, common.json),
        Command::Evolve {
            config,
            order,
            out,
            json,
        } => numeric::evolve(&config, order, out.as_deref(), json),
        Command::Smatrix {
            config,
            order,
            out,
            json,
        } => numeric::smatrix(&config, order, out.as_deref(), json),
        Command::Flow {
            config,
            hamiltonian,
            t,
            json,
        } => numeric::flow(&config, &hamiltonian, t, json),
    }
}

/// `-h` is a legal expression (minus the Planck parameter), so help is long-only
/// on subcommands.
fn cli_command() -> clap::Command {
    Cli::command().mut_subcommands(|c| {
        c.disable_help_flag(true).arg(
            Arg::new("help")
                .long("help")
                .help("Print help")
                .action(ArgAction::Help),
        )
    })
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<S: AsRef<str>>(argv: &[S]) -> CliResult {
    let args: Vec<&str> = argv.iter().map(AsRef::as_ref).collect();
    let parsed = cli_command()
        .try_get_matches_from(&args)
        .and_then(|m| Cli::from_arg_matches(&m));
    let cli = match parsed {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CliResult::ok(text),
                _ => CliResult {
                    code: EXIT_PARSE,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    match dispatch(cli.command) {
        Ok(mut out) => {
            if !out.ends_with('\n') {
                out.push('\n');
            }
            CliResult::ok(out)
        }
        Err(f) => CliResult {
            code: f.code,
            stdout: String::new(),
            stderr: format!("error: {}\n", f.message),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn caret_sits_under_offending_char() {
        let f = in_input("A", "phi[1] + )", Error::Parse { pos: 9, message: "unexpected ')'".into() });
        assert_eq!(f.code, EXIT_PARSE);
        let lines: Vec<&str> = f.message.lines().collect();
        assert_eq!(lines[1].find(')'), lines[2].find('^'));
    }

    #[test]
    fn error_kinds_map_to_codes() {
        assert_eq!(Failure::from(Error::validation("x")).code, EXIT_VALIDATION);
        assert_eq!(Failure::from(Error::config("x")).code, EXIT_VALIDATION);
        assert_eq!(Failure::from(Error::numeric("x")).code, EXIT_NUMERIC);
    }

    #[test]
    fn output_ends_with_newline() {
        let r = run(&["fdq", "bracket", "phi[1]", "pi[1]", "--modes", "1"]);
        assert_eq!(r.stdout, "-1\n");
        assert!(r.stderr.is_empty());
    }
}
