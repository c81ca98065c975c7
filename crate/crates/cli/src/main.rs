//! Command-line front end: analyze, verify, snf, reach.
//!
//! Exit codes: 0 success (verify: both routes agree), 1 internal error or
//! verify mismatch, 2 unreadable or malformed input, 3 commutation
//! validation failure, 4 a size cap was exceeded, 5 cyclic transition
//! graph where an acyclic one is required.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use tracehom::{
    analyze, smith_normal_form, verify, AnalyzeOptions, CENet, Error, InputKind,
    PartialActionSystem, ScopeChoice, SparseIntMatrix,
};

/// Scope cap for `verify`: the nerve enumerates every trace between every
/// state pair, which blows up quickly.
const MAX_VERIFY_STATES: usize = 16;
const MAX_VERIFY_EVENTS: usize = 10;

#[derive(Parser)]
#[command(name = "tracehom", version, about = "Homology of transition systems and CE nets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute basis sizes, boundary ranks and homology groups.
    Analyze(AnalyzeArgs),
    /// Compare the main pipeline against the nerve-based brute-force route.
    Verify(VerifyArgs),
    /// Smith normal form (rank and divisor chain) of a triplet matrix file.
    Snf(SnfArgs),
    /// List the states reachable from the initial state.
    Reach(ReachArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Input file (JSON).
    file: PathBuf,
    /// Input kind; inferred from the file's fields when omitted.
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
    /// Analyze the whole state set (for nets: all 2^|places| markings,
    /// capped) instead of the states reachable from the initial one.
    #[arg(long)]
    all_states: bool,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Report homology only up to this degree.
    #[arg(long)]
    max_dim: Option<usize>,
    /// Write labeled boundary matrices (text and JSON) into this directory.
    #[arg(long, value_name = "DIR")]
    dump_matrices: Option<PathBuf>,
    /// Emit the report as JSON on stdout.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Compare homology only up to this degree.
    #[arg(long)]
    max_dim: Option<usize>,
    /// Emit the comparison as JSON on stdout.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SnfArgs {
    /// Matrix file: {"rows": R, "cols": C, "entries": [[r, c, v], ...]}.
    file: PathBuf,
    /// Emit the result as JSON on stdout.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ReachArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Emit the state list as JSON on stdout.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Net,
    Action,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(args) => run_analyze(args),
        Command::Verify(args) => run_verify(args),
        Command::Snf(args) => run_snf(args),
        Command::Reach(args) => run_reach(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn exit_code_for(e: &Error) -> ExitCode {
    let code = match e {
        Error::Io(_) | Error::Json(_) | Error::Input(_) => 2,
        Error::Validation(_) => 3,
        Error::CapExceeded { .. } => 4,
        Error::Cyclic { .. } => 5,
        Error::MissingBoundaryFace { .. } => 1,
    };
    ExitCode::from(code)
}

/// The input file resolved to a system plus the scope to analyze.
struct LoadedInput {
    kind: InputKind,
    system: PartialActionSystem,
    scope: ScopeChoice,
}

fn load_input(args: &InputArgs) -> Result<LoadedInput, Error> {
    let text = std::fs::read_to_string(&args.file)?;
    let kind = match args.kind {
        Some(KindArg::Net) => InputKind::Net,
        Some(KindArg::Action) => InputKind::Action,
        None => infer_kind(&text)?,
    };
    match kind {
        InputKind::Net => {
            let net = CENet::from_json_str(&text)?;
            if args.all_states {
                Ok(LoadedInput {
                    kind,
                    system: net.compile_all_markings()?,
                    scope: ScopeChoice::AllStates,
                })
            } else {
                Ok(LoadedInput {
                    kind,
                    system: net.compile(),
                    scope: ScopeChoice::ReachableFromInitial,
                })
            }
        }
        InputKind::Action => {
            let system = PartialActionSystem::from_json_str(&text)?;
            let scope = if args.all_states || system.initial().is_none() {
                ScopeChoice::AllStates
            } else {
                ScopeChoice::ReachableFromInitial
            };
            Ok(LoadedInput { kind, system, scope })
        }
    }
}

fn infer_kind(text: &str) -> Result<InputKind, Error> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let object = value
        .as_object()
        .ok_or_else(|| Error::Input("expected a JSON object at the top level".into()))?;
    match (object.contains_key("places"), object.contains_key("states")) {
        (true, false) => Ok(InputKind::Net),
        (false, true) => Ok(InputKind::Action),
        _ => Err(Error::Input(
            "cannot infer the input kind (expected a \"places\" or a \"states\" field); \
             pass --kind net|action"
                .into(),
        )),
    }
}

/// Prints commutation violations with names and returns the dedicated
/// exit code; passes every other error through.
fn report_validation(
    sys: &PartialActionSystem,
    e: Error,
) -> Result<ExitCode, Error> {
    if let Error::Validation(violations) = &e {
        eprintln!(
            "error: the transition table is not a valid partial action \
             ({} commutation violation(s)):",
            violations.len()
        );
        for v in violations {
            eprintln!("  {}", sys.describe_violation(v));
        }
        return Ok(ExitCode::from(3));
    }
    Err(e)
}

fn run_analyze(args: AnalyzeArgs) -> Result<ExitCode, Error> {
    let input = load_input(&args.input)?;
    let options = AnalyzeOptions {
        scope: input.scope,
        max_dim: args.max_dim,
    };
    let analysis = match analyze(&input.system, input.kind, &options) {
        Ok(analysis) => analysis,
        Err(e) => return report_validation(&input.system, e),
    };
    if let Some(dir) = &args.dump_matrices {
        let written = analysis.complex.write_dump_files(&input.system, dir)?;
        for path in written {
            eprintln!("wrote {}", path.display());
        }
    }
    if args.json {
        println!("{}", serde_json::to_string_pretty(&analysis.report)?);
    } else {
        print!("{}", analysis.report.render());
    }
    Ok(ExitCode::SUCCESS)
}

fn run_verify(args: VerifyArgs) -> Result<ExitCode, Error> {
    let input = load_input(&args.input)?;
    check_verify_caps(&input.system)?;
    let options = AnalyzeOptions {
        scope: input.scope,
        max_dim: args.max_dim,
    };
    let report = match verify(&input.system, &options) {
        Ok(report) => report,
        Err(e) => return report_validation(&input.system, e),
    };
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{}", report.render());
    }
    Ok(if report.all_equal {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn check_verify_caps(sys: &PartialActionSystem) -> Result<(), Error> {
    if sys.state_count() > MAX_VERIFY_STATES {
        return Err(Error::CapExceeded {
            what: "state count for nerve verification".into(),
            limit: MAX_VERIFY_STATES,
            actual: sys.state_count(),
        });
    }
    if sys.alphabet().len() > MAX_VERIFY_EVENTS {
        return Err(Error::CapExceeded {
            what: "event count for nerve verification".into(),
            limit: MAX_VERIFY_EVENTS,
            actual: sys.alphabet().len(),
        });
    }
    Ok(())
}

/// Triplet matrix file for the `snf` subcommand. Values must fit in a
/// signed 64-bit integer; arithmetic past that point is arbitrary
/// precision anyway.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, i64)>,
}

#[derive(Serialize)]
struct SnfOutput {
    rank: usize,
    divisors: Vec<String>,
}

fn run_snf(args: SnfArgs) -> Result<ExitCode, Error> {
    let text = std::fs::read_to_string(&args.file)?;
    let file: MatrixFile = serde_json::from_str(&text)?;
    let matrix = SparseIntMatrix::from_triplets(
        file.rows,
        file.cols,
        file.entries.into_iter().map(|(r, c, v)| (r, c, v.into())),
    )?;
    let snf = smith_normal_form(&matrix);
    let divisors: Vec<String> = snf.divisors.iter().map(|d| d.to_string()).collect();
    if args.json {
        let out = SnfOutput {
            rank: snf.rank,
            divisors,
        };
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        println!("rank: {}", snf.rank);
        println!("divisors: {}", divisors.join(" "));
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ReachOutput {
    count: usize,
    states: Vec<String>,
}

fn run_reach(args: ReachArgs) -> Result<ExitCode, Error> {
    let input = load_input(&args.input)?;
    let sys = &input.system;
    let s0 = sys
        .initial()
        .ok_or_else(|| Error::Input("the input has no initial state to start from".into()))?;
    let names: Vec<String> = sys
        .reachable_states(s0)
        .into_iter()
        .map(|s| sys.state_name(s).to_string())
        .collect();
    if args.json {
        let out = ReachOutput {
            count: names.len(),
            states: names,
        };
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        for name in &names {
            println!("{name}");
        }
    }
    Ok(ExitCode::SUCCESS)
}
