//! `mkcalc` — analyze scenario tables with the exact kernel calculus, verify
//! the built-in examples, search for tables by category, and run randomized
//! cross-route self-checks.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 validation error,
//! 3 search exhausted, 4 internal inconsistency.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use mkcalc_core::calculus::Category;
use mkcalc_core::crosscheck::{self, CrosscheckConfig, Mutation};
use mkcalc_core::error::Error as CoreError;
use mkcalc_core::gen::{search_category, GenConfig, SearchOutcome};

use mkcalc_cli::report::{build_analysis_report, render_text, report_category, AnalysisReport};
use mkcalc_cli::{table_io, verify};

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_EXHAUSTED: u8 = 3;
const EXIT_INCONSISTENT: u8 = 4;

#[derive(Parser)]
#[command(
    name = "mkcalc",
    version,
    about = "Exact Markov-kernel calculus over finite spaces, applied to 2x8 contingency tables"
)]
struct Cli {
    /// What goes to standard output: human-readable text or the structured
    /// JSON document.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,

    /// Also write the structured JSON document to this path.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a scenario table from a file (or standard input with `-`).
    Analyze {
        /// Path to the table, or `-` for standard input.
        input: String,
    },
    /// Check the three built-in example tables against their expected
    /// classifications.
    VerifyPaper,
    /// Draw random tables until one classifies as the requested category.
    Search {
        #[arg(long, value_parser = parse_category)]
        category: Category,
        #[arg(long)]
        seed: u64,
        /// Number of tables to try before giving up.
        #[arg(long)]
        budget: u64,
    },
    /// Run randomized cross-route invariant checks.
    Crosscheck {
        #[arg(long)]
        seed: u64,
        /// Number of check rounds.
        #[arg(long)]
        iters: u64,
    },
}

fn parse_category(s: &str) -> Result<Category, String> {
    Category::parse(&s.replace('-', "_")).ok_or_else(|| {
        let names: Vec<String> = Category::all()
            .iter()
            .map(|c| c.name().replace('_', "-"))
            .collect();
        format!("unknown category `{s}`; expected one of: {}", names.join(", "))
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    ExitCode::from(run(cli))
}

fn run(cli: Cli) -> u8 {
    match &cli.command {
        Command::Analyze { input } => cmd_analyze(&cli, input),
        Command::VerifyPaper => cmd_verify(&cli),
        Command::Search { category, seed, budget } => cmd_search(&cli, *category, *seed, *budget),
        Command::Crosscheck { seed, iters } => cmd_crosscheck(&cli, *seed, *iters),
    }
}

/// Emits the per-command outputs: text or JSON on stdout by `--format`, and
/// the JSON document to `--output` when given.
fn emit<T: Serialize>(cli: &Cli, document: &T, text: String) -> u8 {
    let json = || {
        let mut s = serde_json::to_string_pretty(document).expect("report serializes");
        s.push('\n');
        s
    };
    match cli.format {
        OutputFormat::Text => print!("{text}"),
        OutputFormat::Structured => print!("{}", json()),
    }
    if let Some(path) = &cli.output {
        if let Err(e) = std::fs::write(path, json()) {
            eprintln!("cannot write {}: {e}", path.display());
            return EXIT_USAGE;
        }
    }
    EXIT_OK
}

fn core_error_exit(e: &CoreError) -> u8 {
    match e {
        CoreError::FalsifiedImplication { .. } => EXIT_INCONSISTENT,
        _ => EXIT_VALIDATION,
    }
}

fn cmd_analyze(cli: &Cli, input: &str) -> u8 {
    let text = if input == "-" {
        let mut buf = String::new();
        if let Err(e) = std::io::stdin().read_to_string(&mut buf) {
            eprintln!("cannot read standard input: {e}");
            return EXIT_USAGE;
        }
        buf
    } else {
        match std::fs::read_to_string(input) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("cannot read {input}: {e}");
                return EXIT_USAGE;
            }
        }
    };

    let table = match table_io::parse_table_text(&text) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("{e}");
            return if e.is_parse() { EXIT_USAGE } else { EXIT_VALIDATION };
        }
    };

    let report = match build_analysis_report(&table) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            return core_error_exit(&e);
        }
    };

    let code = emit(cli, &report, render_text(&report));
    if code != EXIT_OK {
        return code;
    }
    if report_category(&report) == Category::IndependenceWithoutEquality {
        eprintln!(
            "internal inconsistency: this table claims independence without equality, \
             which exact arithmetic rules out"
        );
        return EXIT_INCONSISTENT;
    }
    if !report.route_checks.all_pass() {
        eprintln!("internal inconsistency: computation routes disagree on this table");
        return EXIT_INCONSISTENT;
    }
    EXIT_OK
}

fn cmd_verify(cli: &Cli) -> u8 {
    let report = match verify::verify_builtin() {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            return core_error_exit(&e);
        }
    };
    let code = emit(cli, &report, verify::render_text(&report));
    if code != EXIT_OK {
        return code;
    }
    if report.pass {
        EXIT_OK
    } else {
        EXIT_INCONSISTENT
    }
}

#[derive(Serialize)]
struct SearchReport {
    target: String,
    seed: u64,
    budget: u64,
    outcome: String,
    attempts: u64,
    witness: Option<AnalysisReport>,
}

fn cmd_search(cli: &Cli, category: Category, seed: u64, budget: u64) -> u8 {
    if budget == 0 {
        eprintln!("--budget must be at least 1");
        return EXIT_USAGE;
    }
    let cfg = GenConfig::with_seed(seed);
    let outcome = match search_category(&cfg, category, budget) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("{e}");
            return core_error_exit(&e);
        }
    };

    match outcome {
        SearchOutcome::Found { table, attempts } => {
            let witness = match build_analysis_report(&table) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("{e}");
                    return core_error_exit(&e);
                }
            };
            let mut text = format!(
                "found a {} table after {attempts} attempt(s):\n{}\n\n",
                category.name(),
                table
            );
            text.push_str(&render_text(&witness));
            let doc = SearchReport {
                target: category.name().to_string(),
                seed,
                budget,
                outcome: "found".to_string(),
                attempts,
                witness: Some(witness),
            };
            emit(cli, &doc, text)
        }
        SearchOutcome::Exhausted { attempts } => {
            let doc = SearchReport {
                target: category.name().to_string(),
                seed,
                budget,
                outcome: "exhausted".to_string(),
                attempts,
                witness: None,
            };
            let text = format!(
                "no {} table in {attempts} attempt(s); search exhausted\n",
                category.name()
            );
            let code = emit(cli, &doc, text);
            if code != EXIT_OK {
                code
            } else {
                EXIT_EXHAUSTED
            }
        }
    }
}

#[derive(Serialize)]
struct CrosscheckReport {
    seed: u64,
    iterations: u64,
    checks: Vec<CheckLine>,
    failures: Vec<FailureLine>,
}

#[derive(Serialize)]
struct CheckLine {
    name: String,
    run: u64,
    failed: u64,
}

#[derive(Serialize)]
struct FailureLine {
    check: String,
    seed: u64,
    index: u64,
    instance: String,
}

fn cmd_crosscheck(cli: &Cli, seed: u64, iters: u64) -> u8 {
    if iters == 0 {
        eprintln!("--iters must be at least 1");
        return EXIT_USAGE;
    }
    let summary = match crosscheck::run(&CrosscheckConfig { seed, iterations: iters }, Mutation::None)
    {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{e}");
            return core_error_exit(&e);
        }
    };

    let doc = CrosscheckReport {
        seed: summary.seed,
        iterations: summary.iterations,
        checks: summary
            .counts
            .iter()
            .map(|c| CheckLine { name: c.name.to_string(), run: c.run, failed: c.failed })
            .collect(),
        failures: summary
            .failures
            .iter()
            .map(|f| FailureLine {
                check: f.check.to_string(),
                seed: f.seed,
                index: f.index,
                instance: f.instance.clone(),
            })
            .collect(),
    };

    let mut text = format!("crosscheck: seed {seed}, {iters} iteration(s)\n");
    for c in &summary.counts {
        text.push_str(&format!("  {:<24} run {:>6}  failed {}\n", c.name, c.run, c.failed));
    }
    if summary.failures.is_empty() {
        text.push_str("all routes agree\n");
    } else {
        for f in &summary.failures {
            text.push_str(&format!(
                "FAILURE in {} (seed {}, iteration {}); instance:\n{}\n",
                f.check, f.seed, f.index, f.instance
            ));
        }
    }

    let code = emit(cli, &doc, text);
    if code != EXIT_OK {
        return code;
    }
    if summary.failures.is_empty() {
        EXIT_OK
    } else {
        EXIT_INCONSISTENT
    }
}
