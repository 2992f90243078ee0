use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;
use stablelimit_core::scenarios::{self, Scenario, Status, VerificationReport};

#[derive(Parser)]
#[command(name = "stablelimit", version, about = "Re-run the verification scenarios over the embedded data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run scenarios (all of them when no --scenario is given).
    Run {
        /// Scenario id; may be repeated.
        #[arg(long = "scenario", value_name = "ID")]
        scenarios: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Worker threads (1 runs serially).
        #[arg(long, value_name = "N", value_parser = clap::value_parser!(u32).range(1..))]
        jobs: Option<u32>,
        /// Write the report here instead of stdout.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// List scenario ids with their citations.
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match cli.command {
        Command::List => {
            let mut out = io::stdout().lock();
            for s in scenarios::scenarios() {
                let _ = writeln!(out, "{:<18} {}", s.id, s.citation);
            }
            ExitCode::SUCCESS
        }
        Command::Run { scenarios: ids, format, jobs, out } => run(&ids, format, jobs, out),
    }
}

fn select(ids: &[String]) -> Result<Vec<&'static Scenario>, String> {
    if ids.is_empty() {
        return Ok(scenarios::scenarios().iter().collect());
    }
    for id in ids {
        if scenarios::find(id).is_none() {
            return Err(format!(
                "unknown scenario id '{id}' (known: {})",
                scenarios::all_ids().join(", ")
            ));
        }
    }
    // Registry order, duplicates dropped.
    Ok(scenarios::scenarios()
        .iter()
        .filter(|s| ids.iter().any(|id| id == s.id))
        .collect())
}

fn run(ids: &[String], format: Format, jobs: Option<u32>, out: Option<PathBuf>) -> ExitCode {
    let selected = match select(ids) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let reports: Vec<VerificationReport> = match jobs {
        Some(1) => selected.iter().map(|s| s.run()).collect(),
        _ => {
            let mut builder = rayon::ThreadPoolBuilder::new();
            if let Some(n) = jobs {
                builder = builder.num_threads(n as usize);
            }
            match builder.build() {
                Ok(pool) => pool.install(|| selected.par_iter().map(|s| s.run()).collect()),
                Err(e) => {
                    eprintln!("error: cannot start worker pool: {e}");
                    return ExitCode::from(2);
                }
            }
        }
    };

    let count = |st: Status| reports.iter().filter(|r| r.status == st).count();
    let flagged = count(Status::Flagged);
    let passed = count(Status::Pass) + flagged;
    let failed = reports.len() - passed;

    let rendered = match format {
        Format::Json => {
            let doc = json!({
                "version": env!("CARGO_PKG_VERSION"),
                "prime": 7,
                "scenarios": reports,
                "summary": { "passed": passed, "failed": failed, "flagged": flagged },
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => text_report(&reports, passed, failed, flagged),
    };

    let written = match &out {
        Some(path) => fs::write(path, rendered).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => io::stdout()
            .lock()
            .write_all(rendered.as_bytes())
            .map_err(|e| format!("cannot write to stdout: {e}")),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn text_report(reports: &[VerificationReport], passed: usize, failed: usize, flagged: usize) -> String {
    let mut s = String::new();
    for r in reports {
        let status = serde_json::to_value(r.status).ok();
        let status = status.as_ref().and_then(|v| v.as_str()).unwrap_or("?");
        s.push_str(&format!("{:<8} {:<18} {:>7} ms  {}\n", status.to_uppercase(), r.id, r.millis, r.citation));
        if r.status != Status::Pass {
            for n in &r.notes {
                s.push_str(&format!("         - {n}\n"));
            }
        }
    }
    s.push_str(&format!(
        "\n{} scenarios: {passed} passed ({flagged} flagged), {failed} failed\n",
        reports.len()
    ));
    s
}
