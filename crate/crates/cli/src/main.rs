mod store;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use walltab::density::{count_fillings, BlockSpec};
use walltab::models::{Model, DEFAULT_COLUMNS};
use walltab::sampler::{RngState, Sampler, DEFAULT_REJECTION_CAP};
use walltab::shapes::families::{polyomino, tableau_2nx3};
use walltab::shapes::{
    build_poset, count_linear_extensions, is_valid_filling, render_ascii, Filling, ShapeSpec,
};
use walltab::stats::{wall_distribution_check, Suite};
use walltab::{sampler, Error, Result};

#[derive(Parser)]
#[command(name = "walltab", version, about = "Count and sample Young tableaux with walls")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact count of fillings for one model and size.
    Count(CountArgs),
    /// f_0..f_max of a density-method model.
    Sequence(SequenceArgs),
    /// Uniform random fillings of the polyomino or the 2n × 3 tableau.
    Sample(SampleArgs),
    /// Cross-method reconciliation and consistency checks.
    Verify(VerifyArgs),
    /// Wall-count distribution of n × 2 tableaux with vertical walls.
    Dist(DistArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Formula,
    Oracle,
    Density,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Formula => "formula",
            Method::Oracle => "oracle",
            Method::Density => "density",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SampleFormat {
    Json,
    Ascii,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Small,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Table,
    Json,
}

#[derive(Args)]
struct CountArgs {
    /// Registered model name, or a JSON block spec / shape file.
    #[arg(long)]
    model: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum, default_value = "density")]
    method: Method,
    /// Column count for nxm-rowwalls.
    #[arg(long, default_value_t = DEFAULT_COLUMNS)]
    m: usize,
    /// Tower cache file (default: $WALLTAB_CACHE_DIR/tower-<hash>.json when set).
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Tower timing on stderr.
    #[arg(long)]
    verbose: bool,
}

#[derive(Args)]
struct SequenceArgs {
    #[arg(long, default_value = "polyo-2nx3")]
    model: String,
    #[arg(long)]
    max_n: usize,
    #[arg(long)]
    cache: Option<PathBuf>,
    #[arg(long)]
    verbose: bool,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long, default_value = "polyo-2nx3")]
    model: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    count: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: SampleFormat,
    /// Sample the 2n × 3 tableau by rejection.
    #[arg(long, conflicts_with = "polyomino")]
    tableau: bool,
    /// Sample the polyomino (the default).
    #[arg(long)]
    polyomino: bool,
    /// Rejection attempts allowed per tableau.
    #[arg(long, default_value_t = DEFAULT_REJECTION_CAP)]
    max_attempts: u64,
    #[arg(long)]
    cache: Option<PathBuf>,
    #[arg(long)]
    verbose: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "small")]
    suite: SuiteArg,
    /// Also print the reconciliation report.
    #[arg(long, value_enum)]
    report: Option<ReportFormat>,
}

#[derive(Args)]
struct DistArgs {
    #[arg(long)]
    n: u64,
    /// Number of uniform samples to compare against the exact law.
    #[arg(long)]
    empirical: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "table")]
    format: ReportFormat,
}

enum Source {
    Named(Model),
    Block(BlockSpec),
    Shape(ShapeSpec),
}

fn source(model: &str) -> Result<Source> {
    if let Ok(m) = Model::from_name(model) {
        return Ok(Source::Named(m));
    }
    let path = Path::new(model);
    if !path.is_file() {
        return Model::from_name(model).map(Source::Named);
    }
    let text = std::fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    if value.get("vars").is_some() {
        Ok(Source::Block(BlockSpec::from_json(&text)?))
    } else {
        Ok(Source::Shape(ShapeSpec::from_json(&text)?))
    }
}

fn block_of(model: &str) -> Result<BlockSpec> {
    match source(model)? {
        Source::Named(m) => m.block(),
        Source::Block(b) => Ok(b),
        Source::Shape(_) => Err(Error::Usage("a shape file has no density block".into())),
    }
}

fn need_n(n: Option<usize>) -> Result<usize> {
    n.ok_or_else(|| Error::Usage("--n is required".into()))
}

fn count(args: CountArgs) -> Result<()> {
    let src = source(&args.model)?;
    let (label, n, cells, value) = match (&src, args.method) {
        (Source::Named(m), Method::Formula) => {
            let n = need_n(args.n)?;
            let cells = m.shape(n, args.m)?.len();
            (m.name().to_string(), Some(n), cells, m.formula(n, args.m)?)
        }
        (Source::Named(m), Method::Oracle) => {
            let n = need_n(args.n)?;
            let shape = m.shape(n, args.m)?;
            (m.name().to_string(), Some(n), shape.len(), count_linear_extensions(&build_poset(&shape))?)
        }
        (Source::Block(b), Method::Oracle) => {
            let n = need_n(args.n)?;
            let layout = b.layout(n);
            (args.model.clone(), Some(n), b.cell_count(n), count_linear_extensions(layout.poset())?)
        }
        (Source::Shape(s), Method::Oracle) => (args.model.clone(), None, s.len(), count_linear_extensions(&build_poset(s))?),
        (Source::Shape(_) | Source::Block(_), Method::Formula) => {
            return Err(Error::Usage("closed forms exist only for registered models".into()))
        }
        (_, Method::Density) => {
            let n = need_n(args.n)?;
            let block = block_of(&args.model)?;
            let tower = store::tower(&block, n, args.cache.as_deref(), args.verbose)?;
            let r = count_fillings(&tower, n)?;
            (args.model.clone(), Some(n), r.cells, r.count)
        }
    };
    println!("{value}");
    println!(
        "{}",
        json!({
            "model": label,
            "n": n,
            "method": args.method.name(),
            "cells": cells,
            "count": value.to_string(),
        })
    );
    Ok(())
}

fn sequence(args: SequenceArgs) -> Result<()> {
    let block = block_of(&args.model)?;
    let start = Instant::now();
    let tower = store::tower(&block, args.max_n, args.cache.as_deref(), args.verbose)?;
    for n in 0..=args.max_n {
        println!("{}", count_fillings(&tower, n)?.count);
    }
    if args.verbose {
        eprintln!("total: {:.1} ms", start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(())
}

/// Labels as rows, top row first, `null` where the bounding box has no cell.
fn label_grid(shape: &ShapeSpec, filling: &Filling) -> serde_json::Value {
    let cells = shape.cells();
    let rows = cells.iter().map(|c| c.row);
    let cols = cells.iter().map(|c| c.col);
    let (r0, r1) = (rows.clone().min().unwrap_or(0), rows.max().unwrap_or(0));
    let (c0, c1) = (cols.clone().min().unwrap_or(0), cols.max().unwrap_or(0));
    let grid: Vec<Vec<Option<u32>>> = (r0..=r1)
        .rev()
        .map(|r| {
            (c0..=c1)
                .map(|c| shape.index_of(walltab::shapes::Cell::new(r, c)).map(|i| filling.label(i)))
                .collect()
        })
        .collect();
    json!(grid)
}

fn sample(args: SampleArgs) -> Result<()> {
    let block = block_of(&args.model)?;
    if block != Model::Polyomino.block()? {
        return Err(Error::Usage("sampling output is implemented for polyo-2nx3 only".into()));
    }
    let (shape, kind) = if args.tableau {
        (tableau_2nx3(args.n)?, "tableau")
    } else {
        (polyomino(args.n)?, "polyomino")
    };
    let walls = serde_json::from_str::<serde_json::Value>(&shape.to_json())?["walls"].take();
    let tower = store::tower(&block, args.n, args.cache.as_deref(), args.verbose)?;
    let sampler = Sampler::new(&tower, args.n)?;
    let mut rng = RngState::new(args.seed);
    for index in 0..args.count {
        let (filling, attempts) = if args.tableau {
            let t = sampler.sample_tableau(&mut rng, args.max_attempts)?;
            (sampler.filling_on_shape(&t.labels, true, &shape)?, t.attempts)
        } else {
            let s = sampler.sample_polyomino(&mut rng)?;
            (sampler.filling_on_shape(s.filling.labels(), false, &shape)?, 1)
        };
        if !is_valid_filling(&shape, &filling)? {
            return Err(Error::Consistency(format!("sample {index} violates the shape: {filling}")));
        }
        match args.format {
            SampleFormat::Json => println!(
                "{}",
                json!({
                    "model": Model::Polyomino.name(),
                    "kind": kind,
                    "n": args.n,
                    "seed": args.seed,
                    "index": index,
                    "attempts": attempts,
                    "labels": label_grid(&shape, &filling),
                    "walls": walls,
                })
            ),
            SampleFormat::Ascii => {
                if index > 0 {
                    println!();
                }
                print!("{}", render_ascii(&shape, &filling));
            }
        }
    }
    Ok(())
}

fn verify_cmd(args: VerifyArgs) -> Result<()> {
    let suite = match args.suite {
        SuiteArg::Small => Suite::Small,
        SuiteArg::Full => Suite::Full,
    };
    let mut failed = Vec::new();
    let echo = args.report.map(|f| match f {
        ReportFormat::Table => verify::Echo::Table,
        ReportFormat::Json => verify::Echo::Json,
    });
    for o in verify::run(suite, echo) {
        match &o.result {
            Ok(msg) => println!("PASS {} ({:.2} s): {msg}", o.name, o.seconds),
            Err(e) => {
                println!("FAIL {} ({:.2} s): {e}", o.name, o.seconds);
                failed.push(o.name);
            }
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Error::Consistency(format!("failing checks: {}", failed.join(", "))))
    }
}

fn dist(args: DistArgs) -> Result<()> {
    let observed = match args.empirical {
        None => None,
        Some(count) => {
            let mut rng = RngState::new(args.seed);
            let mut bins = vec![0u64; args.n as usize + 1];
            for _ in 0..count {
                bins[sampler::sample_coloured_path(args.n as usize, &mut rng).red_count()] += 1;
            }
            Some(bins)
        }
    };
    let report = wall_distribution_check(args.n, observed.as_deref())?;
    match args.format {
        ReportFormat::Table => print!("{}", report.to_table()),
        ReportFormat::Json => println!("{}", report.to_json()),
    }
    Ok(())
}

/// Exit quietly when stdout is closed early, as in `walltab sequence | head`.
fn quiet_broken_pipe() {
    let default = std::panic::take_hook();
    std::panic::set_hook(Box::new(move |info| {
        let msg = info
            .payload()
            .downcast_ref::<String>()
            .map(String::as_str)
            .or_else(|| info.payload().downcast_ref::<&str>().copied())
            .unwrap_or("");
        if msg.contains("Broken pipe") {
            std::process::exit(0);
        }
        default(info);
    }));
}

fn main() -> ExitCode {
    quiet_broken_pipe();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Count(a) => count(a),
        Command::Sequence(a) => sequence(a),
        Command::Sample(a) => sample(a),
        Command::Verify(a) => verify_cmd(a),
        Command::Dist(a) => dist(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::Capacity(_) = e {
                eprintln!("hint: use --method density or a smaller n");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
