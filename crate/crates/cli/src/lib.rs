//! Command-line front end. [`run`] is the whole program minus process I/O, so
//! it can be driven from tests.

use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use cutgen::analysis::{
    extremality_test, generate_covered_intervals, generate_maximal_additive_faces, minimality_test,
};
use cutgen::compendium;
use cutgen::json::{
    additive_faces_to_json, covered_to_json, extremality_report_to_json, function_from_str, function_to_json,
    minimality_report_to_json, rational,
};
use cutgen::render::{render, DiagramMode, DiagramSpec};
use cutgen::scalar::parse_rational;
use cutgen::{Error, PiecewiseFunction, Rational};

/// Exit status plus what the process prints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandResult {
    /// 0: the command ran; 1: domain error; 2: usage error.
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn rat(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn param(s: &str) -> Result<(String, Rational), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got {s:?}"))?;
    Ok((k.to_string(), rat(v)?))
}

#[derive(Parser, Debug)]
#[command(name = "cutgen", version, about = "Analyze piecewise-linear cut-generating functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Diagram {
    Function,
    Cones,
    Additive,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the function at a point
    Eval {
        /// Function JSON file, or - for stdin
        file: String,
        #[arg(long, value_parser = rat)]
        at: Rational,
        /// Also print the one-sided limits
        #[arg(long)]
        limits: bool,
    },
    /// Test minimality
    Minimality {
        file: String,
        #[arg(long, value_parser = rat)]
        f: Option<Rational>,
    },
    /// Grid-restricted extremality test
    Extremality {
        file: String,
        #[arg(long, default_value_t = 4)]
        refinement: u32,
    },
    /// List the maximal additive faces
    AdditiveFaces { file: String },
    /// Connected components of covered intervals
    Covered { file: String },
    /// Render an SVG diagram
    Plot {
        file: String,
        #[arg(long, value_enum)]
        diagram: Diagram,
        /// Output path, or - for stdout
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
        #[arg(long)]
        colored_slopes: bool,
    },
    /// Named functions
    Compendium {
        #[command(subcommand)]
        action: CompendiumAction,
    },
    /// Seeded random function
    Random {
        #[arg(long)]
        xgrid: u32,
        #[arg(long)]
        ygrid: u32,
        #[arg(long, value_parser = rat)]
        continuous_proba: Rational,
        #[arg(long)]
        symmetry: bool,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
enum CompendiumAction {
    List,
    Get {
        name: String,
        #[arg(long = "param", value_parser = param)]
        params: Vec<(String, Rational)>,
        /// Directory with `<name>.json` files for entries not built in
        #[arg(long)]
        data_dir: Option<PathBuf>,
    },
}

enum Output {
    Json(Value),
    Text(String),
}

fn read_function(file: &str, stdin: &mut dyn Read) -> Result<PiecewiseFunction, Error> {
    let text = if file == "-" {
        let mut buf = String::new();
        stdin
            .read_to_string(&mut buf)
            .map_err(|e| Error::Io(format!("stdin: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(file).map_err(|e| Error::Io(format!("{file}: {e}")))?
    };
    function_from_str(&text)
}

fn execute(command: Command, stdin: &mut dyn Read) -> Result<Output, Error> {
    let out = match command {
        Command::Eval { file, at, limits } => {
            let pi = read_function(&file, stdin)?;
            if limits {
                let l = pi.limits_at(&at);
                json!({"value": rational(&l.value), "right": rational(&l.right), "left": rational(&l.left)})
            } else {
                json!({"value": rational(&pi.evaluate(&at))})
            }
        }
        Command::Minimality { file, f } => {
            let pi = read_function(&file, stdin)?;
            minimality_report_to_json(&minimality_test(&pi, f.as_ref())?)
        }
        Command::Extremality { file, refinement } => {
            let pi = read_function(&file, stdin)?;
            extremality_report_to_json(&extremality_test(&pi, refinement)?)
        }
        Command::AdditiveFaces { file } => {
            let pi = read_function(&file, stdin)?;
            additive_faces_to_json(&generate_maximal_additive_faces(&pi)?)
        }
        Command::Covered { file } => {
            let pi = read_function(&file, stdin)?;
            covered_to_json(&generate_covered_intervals(&pi)?)
        }
        Command::Plot {
            file,
            diagram,
            output,
            colored_slopes,
        } => {
            let pi = read_function(&file, stdin)?;
            let mode = match diagram {
                Diagram::Function => DiagramMode::Function,
                Diagram::Cones => DiagramMode::Cones,
                Diagram::Additive => DiagramMode::Additive,
            };
            let spec = DiagramSpec {
                colored_slopes,
                ..DiagramSpec::with_mode(mode)
            };
            let svg = render(&pi, &spec)?;
            if output == Path::new("-") {
                return Ok(Output::Text(svg));
            }
            std::fs::write(&output, &svg).map_err(|e| Error::Io(format!("{}: {e}", output.display())))?;
            json!({"output": output.display().to_string(), "bytes": svg.len()})
        }
        Command::Compendium { action } => match action {
            CompendiumAction::List => Value::Array(
                compendium::entries::<Rational>()
                    .iter()
                    .map(|e| {
                        let params: Map<String, Value> =
                            e.parameters.iter().map(|(k, v)| (k.to_string(), rational(v))).collect();
                        json!({
                            "name": e.name,
                            "description": e.description,
                            "parameters": params,
                            "expected": {
                                "minimal": e.expected.minimal,
                                "extreme": e.expected.extreme,
                                "continuous": e.expected.continuous,
                            },
                        })
                    })
                    .collect(),
            ),
            CompendiumAction::Get { name, params, data_dir } => {
                let pi = match (compendium::entry::<Rational>(&name), data_dir) {
                    (Ok(e), _) => e.build(&params)?,
                    (Err(Error::UnknownEntry(_)), Some(dir)) if params.is_empty() => {
                        compendium::load_external(&dir, &name)?
                    }
                    (Err(err), _) => return Err(err),
                };
                function_to_json(&pi)
            }
        },
        Command::Random {
            xgrid,
            ygrid,
            continuous_proba,
            symmetry,
            seed,
        } => function_to_json(&compendium::random_piecewise_function(
            xgrid,
            ygrid,
            &continuous_proba,
            symmetry,
            seed,
        )?),
    };
    Ok(Output::Json(out))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Runs the program on `argv` (including the program name), reading `-`
/// inputs from `stdin`.
pub fn run_with_stdin<I, S>(argv: I, stdin: &mut dyn Read) -> CommandResult
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (text, String::new()) } else { (String::new(), text) };
            return CommandResult {
                exit_code: code,
                stdout,
                stderr,
            };
        }
    };
    match execute(cli.command, stdin) {
        Ok(Output::Json(v)) => CommandResult {
            exit_code: 0,
            stdout: pretty(&v),
            stderr: String::new(),
        },
        Ok(Output::Text(t)) => CommandResult {
            exit_code: 0,
            stdout: t,
            stderr: String::new(),
        },
        Err(e) => CommandResult {
            exit_code: 1,
            stdout: pretty(&json!({"error": e.to_string()})),
            stderr: String::new(),
        },
    }
}

pub fn run<I, S>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    run_with_stdin(argv, &mut std::io::stdin().lock())
}
