use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tsadopt::config::{ingest_repo_list, RunConfig};
use tsadopt::pipeline::{self, FetchStatus, PipelineError};

const OK: u8 = 0;
const CONFIG_ERROR: u8 = 1;
const PARTIAL: u8 = 2;

/// Measures how quickly repositories adopt TypeScript features and versions.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mirror-clone every listed repository into the workspace.
    Fetch {
        #[arg(long)]
        list: PathBuf,
        #[arg(long)]
        workspace: PathBuf,
        #[arg(long, default_value_t = 4)]
        parallelism: usize,
    },
    /// Mine clones and write observations.jsonl.
    Scan(ConfigArg),
    /// Build curves and groups from observations.jsonl.
    Analyze(ConfigArg),
    /// Write the CSV and JSON reports.
    Report(ConfigArg),
    /// scan, analyze and report in one go.
    Run(ConfigArg),
}

#[derive(Args)]
struct ConfigArg {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
}

fn fail(e: PipelineError) -> ExitCode {
    eprintln!("tsadopt: {e}");
    ExitCode::from(CONFIG_ERROR)
}

fn partial(failures: usize) -> ExitCode {
    if failures > 0 {
        eprintln!("tsadopt: {failures} repositories failed");
        ExitCode::from(PARTIAL)
    } else {
        ExitCode::from(OK)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let load = |arg: &ConfigArg| RunConfig::load(&arg.config).map_err(PipelineError::from);
    match cli.command {
        Command::Fetch { list, workspace, parallelism } => {
            let result = ingest_repo_list(&list, &workspace)
                .map_err(PipelineError::from)
                .and_then(|repos| pipeline::fetch(&repos, parallelism));
            match result {
                Ok(statuses) => {
                    let mut failures = 0;
                    for (repo, status) in statuses {
                        match status {
                            FetchStatus::Cloned => println!("cloned  {repo}"),
                            FetchStatus::Present => println!("present {repo}"),
                            FetchStatus::Failed(e) => {
                                failures += 1;
                                println!("failed  {repo}: {e}");
                            }
                        }
                    }
                    partial(failures)
                }
                Err(e) => fail(e),
            }
        }
        Command::Scan(arg) => match load(&arg).and_then(|c| pipeline::run_scan(&c)) {
            Ok(out) => {
                println!("{} repositories, {} parses, {} cache hits", out.records.len(), out.parses, out.cache_hits);
                partial(out.failures())
            }
            Err(e) => fail(e),
        },
        Command::Analyze(arg) => match load(&arg).and_then(|c| pipeline::run_analyze(&c)) {
            Ok(a) => {
                println!("{} first-use events", a.events.len());
                ExitCode::from(OK)
            }
            Err(e) => fail(e),
        },
        Command::Report(arg) => match load(&arg).and_then(|c| pipeline::run_report(&c)) {
            Ok(files) => {
                files.iter().for_each(|f| println!("{}", f.display()));
                ExitCode::from(OK)
            }
            Err(e) => fail(e),
        },
        Command::Run(arg) => match load(&arg).and_then(|c| pipeline::run_pipeline(&c)) {
            Ok(out) => {
                files_and_stats(&out);
                partial(out.scan.failures())
            }
            Err(e) => fail(e),
        },
    }
}

fn files_and_stats(out: &pipeline::RunOutcome) {
    println!(
        "{} repositories, {} parses, {} cache hits",
        out.scan.records.len(),
        out.scan.parses,
        out.scan.cache_hits
    );
    out.reports.iter().for_each(|f| println!("{}", f.display()));
}
