//! The `failprop` command line.
//!
//! Exit codes: 0 when everything checked out, 1 for a finding (a failing or
//! vacuous assertion, a structural violation, no instance, a single point
//! of failure), 2 for usage and input errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use failprop::checker::{check_named, minimal_cutsets, run_instance, CheckOptions, Outcome};
use failprop::dsl::{parse_condition, parse_constraint, parse_model_named, DslError};
use failprop::report::{self, Format, ReportOptions};
use failprop::Model;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FINDING: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "failprop", version, about = "Bounded exhaustive failure-propagation checker")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a model and check its structural rules.
    Validate {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Check the model's assertions.
    Check {
        path: PathBuf,
        /// Assertion to check; repeatable. All assertions when omitted.
        #[arg(long = "assert", value_name = "NAME")]
        assertions: Vec<String>,
        #[command(flatten)]
        search: SearchArgs,
        /// Include wall-clock times in the report.
        #[arg(long)]
        timings: bool,
    },
    /// Print one instance satisfying a constraint.
    Run {
        path: PathBuf,
        /// Constraint in `when` clause syntax, e.g. "GPS.status = Err and others OK".
        #[arg(long = "where", value_name = "CONSTRAINT")]
        constraint: String,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Compute minimal cut sets for a condition.
    Cutsets {
        path: PathBuf,
        /// Condition in `expect` clause syntax.
        #[arg(long)]
        condition: String,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        max_order: u32,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
        #[arg(long, env = "FAILPROP_WORKERS", value_parser = clap::value_parser!(u32).range(1..))]
        workers: Option<u32>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Text => Format::Text,
            OutputFormat::Json => Format::Json,
        }
    }
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Bound on simultaneous failures among functions the hypothesis leaves open.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..), conflicts_with = "exhaustive")]
    pub max_failures: u32,
    /// Remove the failure bound.
    #[arg(long)]
    pub exhaustive: bool,
    /// Counterexamples kept per assertion.
    #[arg(long, default_value_t = 10)]
    pub cap: usize,
    #[arg(long, env = "FAILPROP_WORKERS", value_parser = clap::value_parser!(u32).range(1..))]
    pub workers: Option<u32>,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn workers(w: Option<u32>) -> usize {
    w.map_or_else(default_workers, |w| w as usize)
}

impl SearchArgs {
    fn options(&self) -> CheckOptions {
        CheckOptions {
            workers: workers(self.workers),
            max_failures: (!self.exhaustive).then_some(self.max_failures as usize),
            counterexample_cap: self.cap,
            ..CheckOptions::default()
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli, out, err),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            code
        }
    }
}

fn load(path: &Path, err: &mut dyn Write) -> Result<Model, i32> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: cannot read {}: {e}", path.display());
            return Err(EXIT_USAGE);
        }
    };
    parse_model_named(&text, &path.display().to_string()).map_err(|e| {
        let _ = writeln!(err, "{}", describe(&e));
        match e {
            DslError::Parse(_) => EXIT_USAGE,
            DslError::Structure(_) => EXIT_FINDING,
        }
    })
}

fn describe(e: &DslError) -> String {
    match e {
        DslError::Parse(errors) => errors
            .iter()
            .map(|p| {
                if p.expected.is_empty() {
                    format!("error: {p}")
                } else {
                    format!("error: {p} (expected {})", p.expected.join(", "))
                }
            })
            .collect::<Vec<_>>()
            .join("\n"),
        DslError::Structure(vs) => vs.iter().map(|v| format!("violation: {v}")).collect::<Vec<_>>().join("\n"),
    }
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match cli.command {
        Command::Validate { path, format } => validate(&path, format.into(), out, err),
        Command::Check {
            path,
            assertions,
            search,
            timings,
        } => {
            let model = match load(&path, err) {
                Ok(m) => m,
                Err(code) => return code,
            };
            let verdicts = match check_named(&model, &assertions, &search.options()) {
                Ok(v) => v,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    return EXIT_USAGE;
                }
            };
            let text = report::render_check(&model, &verdicts, search.format.into(), ReportOptions { timings });
            let _ = out.write_all(text.as_bytes());
            if verdicts.iter().all(|v| v.outcome == Outcome::Holds) {
                EXIT_OK
            } else {
                EXIT_FINDING
            }
        }
        Command::Run {
            path,
            constraint,
            search,
        } => {
            let model = match load(&path, err) {
                Ok(m) => m,
                Err(code) => return code,
            };
            let constraint = match parse_constraint(&constraint, &model) {
                Ok(c) => c,
                Err(e) => {
                    let _ = writeln!(err, "{}", describe(&e));
                    return EXIT_USAGE;
                }
            };
            let instance = run_instance(&model, &constraint, &search.options());
            let text = report::render_instance(&model, instance.as_ref(), search.format.into());
            let _ = out.write_all(text.as_bytes());
            if instance.is_some() {
                EXIT_OK
            } else {
                EXIT_FINDING
            }
        }
        Command::Cutsets {
            path,
            condition,
            max_order,
            format,
            workers: w,
        } => {
            let model = match load(&path, err) {
                Ok(m) => m,
                Err(code) => return code,
            };
            let condition = match parse_condition(&condition, &model) {
                Ok(c) => c,
                Err(e) => {
                    let _ = writeln!(err, "{}", describe(&e));
                    return EXIT_USAGE;
                }
            };
            let opts = CheckOptions {
                workers: workers(w),
                ..CheckOptions::default()
            };
            let report = match minimal_cutsets(&model, &condition, max_order as usize, &opts) {
                Ok(r) => r,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    return EXIT_USAGE;
                }
            };
            let _ = out.write_all(report::render_cutsets(&model, &report, format.into()).as_bytes());
            if report.violated_nominally || report.of_order(1).next().is_some() {
                EXIT_FINDING
            } else {
                EXIT_OK
            }
        }
    }
}

fn validate(path: &Path, format: Format, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: cannot read {}: {e}", path.display());
            return EXIT_USAGE;
        }
    };
    let file = path.display().to_string();
    match parse_model_named(&text, &file) {
        Ok(m) => {
            let _ = out.write_all(report::render_violations(m.name(), &[], format).as_bytes());
            EXIT_OK
        }
        Err(DslError::Structure(vs)) => {
            let name = failprop::dsl::parse_defs(&text, &file).map(|d| d.name).unwrap_or_default();
            let _ = out.write_all(report::render_violations(&name, &vs, format).as_bytes());
            EXIT_FINDING
        }
        Err(e) => {
            let _ = writeln!(err, "{}", describe(&e));
            EXIT_USAGE
        }
    }
}
