use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::Parser;

use dgcat_cli::commands::{run, Overrides, KNOWN_OPS};
use dgcat_cli::corpus::run_corpus;
use dgcat_cli::report::Report;
use dgcat_cli::resolve::resolve;
use dgcat_cli::schema::parse_workspace;

/// Exact computations with finitely presented dg categories.
///
/// Commands operate on a workspace file; `run` executes the file's whole
/// command list, a named command executes the matching entries, and `corpus`
/// runs the built-in example suite against stored records.
#[derive(Parser, Debug)]
#[command(name = "dgcat", version, about)]
struct Cli {
    /// run | corpus | validate | h0 | z0 | cohomology | tensor | opposite |
    /// mor | functor-cat | yoneda | cone | hull | cone-axioms |
    /// quotient-hom | quotient-cohomology | gamma | tor-oracle |
    /// stratifying | verdier-oracle
    command: String,

    /// workspace file (required for everything except corpus)
    #[arg(long)]
    input: Option<PathBuf>,

    /// truncation bound for quotient words
    #[arg(long)]
    max_length: Option<usize>,

    /// cohomological depth for localization and Tor commands
    #[arg(long)]
    depth: Option<usize>,

    /// single cohomological degree to report
    #[arg(long)]
    degree: Option<i32>,

    /// stabilization window for heuristic cohomology traces
    #[arg(long)]
    window: Option<usize>,

    /// write the report here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,

    /// text | structured
    #[arg(long, default_value = "text")]
    format: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(report) => {
            let rendered = match cli.format.as_str() {
                "structured" => report.to_json(),
                _ => report.to_text(),
            };
            match &cli.output {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, rendered) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{rendered}"),
            }
            if report.failures > 0 {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Report> {
    if cli.format != "text" && cli.format != "structured" {
        bail!("format must be text or structured");
    }
    if cli.command == "corpus" {
        return run_corpus();
    }
    let known = cli.command == "run" || KNOWN_OPS.contains(&cli.command.as_str());
    if !known {
        bail!(
            "unknown command {:?}; expected run, corpus, or one of {}",
            cli.command,
            KNOWN_OPS.join(", ")
        );
    }
    let input = cli
        .input
        .as_ref()
        .context("this command needs --input <workspace file>")?;
    let text = std::fs::read_to_string(input)
        .with_context(|| format!("cannot read {}", input.display()))?;
    let file = parse_workspace(&text)
        .with_context(|| format!("cannot parse {}", input.display()))?;
    let ws = resolve(&file)?;
    let overrides = Overrides {
        max_length: cli.max_length,
        depth: cli.depth,
        degree: cli.degree,
        window: cli.window,
    };
    let filter = if cli.command == "run" {
        None
    } else {
        Some(cli.command.as_str())
    };
    run(&ws, filter, &overrides)
}
