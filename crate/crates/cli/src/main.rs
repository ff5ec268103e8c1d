use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use cryarr::catalog;
use cryarr::geometry::enumerate_chambers;
use cryarr::groupoid::{canonical_form, verify_crystallographic};
use cryarr::io::{export_dot, render_svg, ArrangementDocument};
use cryarr::rank2::enumerate_esequences;
use cryarr::search::{enumerate_rank3_with_budget, SearchVerdict, DEFAULT_BUDGET};
use cryarr::verifier::{all_passed, run_suite};

/// Exact tools for simplicial and crystallographic hyperplane arrangements.
#[derive(Parser)]
#[command(name = "cryarr", version)]
struct Cli {
    /// Worker threads for parallel stages.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide crystallographicity and run every check. Exit 0 on pass,
    /// 1 on failure, 2 on bad input.
    Verify { path: PathBuf },
    /// Draw a rank-3 arrangement as lines in a disc.
    RenderSvg { path: PathBuf },
    /// Chamber adjacency graph in DOT format.
    ExportDot { path: PathBuf },
    /// List the ℰ-sequences of length n.
    EnumerateRank2 { n: usize },
    /// Enumerate irreducible rank-3 arrangements with at most `cap` positive
    /// roots. Exit 1 if the node budget runs out.
    Search {
        #[arg(long)]
        cap: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Print a catalog entry as a document: `catalog B3`, `catalog export B3`
    /// or `catalog list`.
    Catalog {
        #[arg(num_args = 1..=2)]
        args: Vec<String>,
    },
}

enum Failure {
    Input(anyhow::Error),
    Other(anyhow::Error),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.max(1))
        .build_global()
    {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn read_document(path: &Path) -> Result<ArrangementDocument, Failure> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Failure::Input)?;
    ArrangementDocument::from_json(&text)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(Failure::Input)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text)
            .with_context(|| format!("writing {}", p.display()))
            .map_err(Failure::Other),
        None => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize") + "\n"
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Verify { path } => {
            let doc = read_document(path)?;
            let roots = doc.root_set().map_err(|e| Failure::Input(e.into()))?;
            let verdict = verify_crystallographic(&roots).map_err(|e| Failure::Input(e.into()))?;
            let (checks, passed) = match &verdict.graph {
                Some(g) => {
                    let reports = run_suite(g);
                    let ok = all_passed(&reports);
                    (serde_json::to_value(&reports).expect("reports serialize"), ok)
                }
                None => (json!([]), false),
            };
            let cartan = verdict.base_cartan.as_ref().map(|c| {
                c.to_rows()
                    .iter()
                    .map(|row| row.iter().map(ToString::to_string).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
            });
            let report = json!({
                "name": doc.name,
                "rank": roots.rank(),
                "hyperplanes": roots.len(),
                "crystallographic": verdict.crystallographic,
                "chambers": verdict.chambers,
                "base_cartan": cartan,
                "failure": verdict.failure,
                "failure_message": verdict.failure.as_ref().map(ToString::to_string),
                "canonical_form": verdict.graph.as_ref().map(canonical_form),
                "checks": checks,
                "passed": verdict.crystallographic && passed,
            });
            emit(out, &pretty(&report))?;
            Ok(if verdict.crystallographic && passed { 0 } else { 1 })
        }
        Command::RenderSvg { path } => {
            let doc = read_document(path)?;
            let roots = doc.root_set().map_err(|e| Failure::Input(e.into()))?;
            let svg = render_svg(&roots).map_err(|e| Failure::Input(e.into()))?;
            emit(out, &svg)?;
            Ok(0)
        }
        Command::ExportDot { path } => {
            let doc = read_document(path)?;
            let roots = doc.root_set().map_err(|e| Failure::Input(e.into()))?;
            let cx = enumerate_chambers(&roots).map_err(|e| Failure::Input(e.into()))?;
            emit(out, &export_dot(&cx))?;
            Ok(0)
        }
        Command::EnumerateRank2 { n } => {
            let seqs = enumerate_esequences(*n);
            let quiddities: Vec<_> = seqs.iter().map(|s| s.quiddity()).collect();
            let report = json!({
                "n": n,
                "count": seqs.len(),
                "sequences": seqs,
                "quiddity_cycles": quiddities,
            });
            emit(out, &pretty(&report))?;
            Ok(0)
        }
        Command::Search { cap, budget } => {
            let result = enumerate_rank3_with_budget(*cap, *budget).map_err(|e| Failure::Input(e.into()))?;
            let arrangements: Vec<ArrangementDocument> = result
                .classes
                .iter()
                .enumerate()
                .map(|(k, c)| {
                    ArrangementDocument::from_integer_roots(
                        Some(format!("rank3-{}-{}", c.positive_roots.len(), k + 1)),
                        3,
                        &c.positive_roots,
                    )
                })
                .collect();
            let report = json!({
                "verdict": result.verdict,
                "cap": result.cap,
                "budget": result.budget,
                "nodes": result.nodes,
                "arrangements": arrangements,
                "classes": result.classes,
                "rejected": result.rejected,
                "stats": result.stats,
            });
            emit(out, &pretty(&report))?;
            Ok(match result.verdict {
                SearchVerdict::Complete => 0,
                SearchVerdict::Incomplete => 1,
            })
        }
        Command::Catalog { args } => {
            let name = match args.as_slice() {
                [list] if list == "list" => {
                    let report = json!({
                        "series": ["A<r> (r ≥ 2)", "B<r> (r ≥ 2)", "C<r> (r ≥ 2)", "D<r> (r ≥ 4)"],
                        "fixtures": catalog::fixture_names(),
                    });
                    emit(out, &pretty(&report))?;
                    return Ok(0);
                }
                [name] => name,
                [export, name] if export == "export" => name,
                _ => return Err(Failure::Input(anyhow::anyhow!("usage: catalog [export] <name> | catalog list"))),
            };
            let entry = catalog::lookup(name).map_err(|e| Failure::Input(e.into()))?;
            let doc = ArrangementDocument::from_integer_roots(Some(entry.name.clone()), entry.rank, &entry.positive_roots);
            emit(out, &(doc.to_json() + "\n"))?;
            Ok(0)
        }
    }
}
