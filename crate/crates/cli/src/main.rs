use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

mod commands;

#[derive(Parser, Debug)]
#[command(name = "quiddity", version, about = "Lambda-quiddities over finite commutative rings")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Emit a JSON CommandResult (the default).
    #[arg(long, global = true, conflicts_with = "table")]
    json: bool,
    /// Emit tab-separated text instead of JSON.
    #[arg(long, global = true)]
    table: bool,
    /// DFS nodes allowed per size.
    #[arg(long, global = true, default_value_t = quiddity::search::DEFAULT_BUDGET)]
    pub budget: u64,
    /// Search worker threads (defaults to the number of CPUs).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Restrict to a submagma, given as "e1,e2,...".
    #[arg(long, global = true)]
    pub subset: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Size, characteristic, |SL2| and bounds of a ring.
    Ring { spec: String },
    /// Sign, irreducibility and reduction witness of a tuple.
    Check { spec: String, tuple: String },
    /// List the lambda-quiddities of one size.
    Enumerate {
        spec: String,
        n: usize,
        /// Only irreducible ones, as dihedral normal forms.
        #[arg(long)]
        irreducible: bool,
        /// One dihedral normal form per class.
        #[arg(long)]
        normal_forms: bool,
    },
    /// Search irreducible lambda-quiddities of sizes 3..=max-n.
    Ell {
        spec: String,
        #[arg(long)]
        max_n: usize,
    },
    /// Upper and lower bounds for the largest irreducible size.
    Bounds { spec: String },
    /// Reduce a long lambda-quiddity by coset pigeonholing.
    Decompose {
        spec: String,
        tuple: String,
        /// unitriangular or prime_subring; defaults to the smaller index.
        #[arg(long)]
        system: Option<String>,
    },
    /// The sum of two tuples.
    Sum { spec: String, left: String, right: String },
    /// Normal forms under rotation and reversal.
    Normalize { spec: String, tuple: String },
    /// Run certified searches and diff them against the bundled lists.
    Classify { spec: Option<String> },
    /// The shortest window of a tuple with continuant 0, 1 or -1.
    Continuant {
        spec: String,
        tuple: String,
        #[arg(long, allow_hyphen_values = true)]
        value: String,
    },
    /// The irreducible constant-2 tuple of length car(A).
    Certificate { spec: String },
    /// Compare searches over Z/N and a ring of characteristic N.
    Monotonicity { sub: String, sup: String },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Ring { .. } => "ring",
            Command::Check { .. } => "check",
            Command::Enumerate { .. } => "enumerate",
            Command::Ell { .. } => "ell",
            Command::Bounds { .. } => "bounds",
            Command::Decompose { .. } => "decompose",
            Command::Sum { .. } => "sum",
            Command::Normalize { .. } => "normalize",
            Command::Classify { .. } => "classify",
            Command::Continuant { .. } => "continuant",
            Command::Certificate { .. } => "certificate",
            Command::Monotonicity { .. } => "monotonicity",
        }
    }
}

#[derive(Serialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum Status {
    Ok,
    Partial,
    Error,
}

#[derive(Serialize, Debug)]
struct CommandResult {
    command: String,
    status: Status,
    payload: Value,
    diagnostics: Vec<String>,
}

/// What a command produced before rendering.
pub struct Outcome {
    pub payload: Value,
    pub partial: bool,
    pub failed: bool,
    pub diagnostics: Vec<String>,
    /// Replaces the generic key/value rendering in `--table` mode.
    pub table: Option<String>,
}

impl Outcome {
    pub fn ok(payload: Value) -> Outcome {
        Outcome { payload, partial: false, failed: false, diagnostics: Vec::new(), table: None }
    }
}

fn render_table(payload: &Value) -> String {
    match payload {
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}\t{s}\n"),
                other => format!("{k}\t{other}\n"),
            })
            .collect(),
        other => format!("{other}\n"),
    }
}

fn run(cli: Cli) -> (CommandResult, Option<String>) {
    let name = cli.command.name().to_string();
    let (result, table) = match commands::dispatch(cli.command, &cli.global) {
        Ok(out) => {
            let status = if out.failed {
                Status::Error
            } else if out.partial {
                Status::Partial
            } else {
                Status::Ok
            };
            let table = out.table.unwrap_or_else(|| render_table(&out.payload));
            (CommandResult { command: name, status, payload: out.payload, diagnostics: out.diagnostics }, table)
        }
        Err(e) => (
            CommandResult {
                command: name,
                status: Status::Error,
                payload: serde_json::json!({ "error": commands::error_kind(&e) }),
                diagnostics: vec![e.to_string()],
            },
            format!("error\t{e}\n"),
        ),
    };
    let table = cli.global.table.then_some(table);
    (result, table)
}

fn exit_code(status: Status) -> ExitCode {
    match status {
        Status::Ok => ExitCode::SUCCESS,
        Status::Error => ExitCode::from(1),
        Status::Partial => ExitCode::from(2),
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let result = CommandResult {
                command: String::new(),
                status: Status::Error,
                payload: serde_json::json!({ "error": "usage" }),
                diagnostics: vec![e.kind().to_string(), e.render().to_string().trim_end().to_string()],
            };
            emit(&(serde_json::to_string(&result).expect("serializable") + "\n"));
            return exit_code(Status::Error);
        }
    };
    let (result, table) = run(cli);
    match table {
        Some(t) => emit(&t),
        None => emit(&(serde_json::to_string(&result).expect("serializable") + "\n")),
    }
    exit_code(result.status)
}
