//! Command-line front end: cluster, check, eval, experiment, gen.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use prfair_core::axioms::{
    check_core, check_core_bruteforce, check_pf, check_pf_bruteforce, check_prf2, check_prf3,
    check_prf_discrete, check_prf_unconstrained, check_up, Axiom, AxiomReport, PrfMethod,
};
use prfair_core::evaluation::{run_algorithm, run_experiment, Algorithm, MsdMetric};
use prfair_core::io::{
    generate, load_csv, parse_params, write_instance_csv, DatasetSpec, GridFile, RunRecord,
};
use prfair_core::{Error, Instance, Metric, Mode, Outcome, Result};

const EXIT_INPUT: u8 = 1;
const EXIT_VIOLATION: u8 = 2;

#[derive(Parser)]
#[command(
    name = "prfair",
    version,
    about = "Proportionally representative clustering"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Select centers for a CSV dataset and write a run record.
    Cluster(ClusterArgs),
    /// Check fairness axioms on a stored run.
    Check(CheckArgs),
    /// Evaluate distance metrics on a stored run.
    Eval(EvalArgs),
    /// Run an experiment grid and write results as CSV.
    Experiment(ExperimentArgs),
    /// Write a synthetic instance as CSV.
    Gen(GenArgs),
}

#[derive(Args)]
struct ClusterArgs {
    #[arg(long, default_value = "prf")]
    algo: Algorithm,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated column names or indices.
    #[arg(long, value_delimiter = ',')]
    columns: Option<Vec<String>>,
    #[arg(long)]
    standardize: bool,
    #[arg(long)]
    id_column: Option<String>,
    #[arg(long, default_value = "euclidean", value_parser = parse_metric)]
    metric: Metric,
    /// Pad Greedy Capture output up to k centers.
    #[arg(long)]
    pad: bool,
    /// Axioms to check and store in the record.
    #[arg(long, value_delimiter = ',')]
    check: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    metrics: Vec<MsdMetric>,
    #[arg(long)]
    unsquared: bool,
    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    run: PathBuf,
    /// Defaults to the axioms stored in the run, or `up,pf,core,prf`.
    #[arg(long, value_delimiter = ',')]
    axioms: Vec<String>,
    /// Use subset enumeration everywhere (n <= 16).
    #[arg(long)]
    exhaustive: bool,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    run: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "msd1,msdhalfk,msdk")]
    metrics: Vec<MsdMetric>,
    #[arg(long)]
    unsquared: bool,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    grid: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Per-algorithm averages and differences against k-means++, as JSON.
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Mean value per k, as JSON.
    #[arg(long)]
    curves: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    name: String,
    /// `key=value` pairs separated by commas.
    #[arg(long, default_value = "")]
    params: String,
    #[arg(long)]
    out: PathBuf,
}

fn parse_metric(s: &str) -> std::result::Result<Metric, String> {
    match s.to_ascii_lowercase().as_str() {
        "euclidean" => Ok(Metric::Euclidean),
        "manhattan" => Ok(Metric::Manhattan),
        other => Err(format!(
            "unknown metric {other}; expected euclidean or manhattan"
        )),
    }
}

fn parse_axiom(name: &str, mode: Mode) -> Result<Axiom> {
    match name.trim().to_ascii_lowercase().as_str() {
        "prf" => Ok(match mode {
            Mode::Unconstrained => Axiom::PrfUnconstrained,
            Mode::Discrete => Axiom::PrfDiscrete,
        }),
        other => other.parse(),
    }
}

fn run_check(inst: &Instance, x: &Outcome, axiom: Axiom, exhaustive: bool) -> Result<AxiomReport> {
    let method = if exhaustive {
        PrfMethod::Exhaustive
    } else {
        PrfMethod::Auto
    };
    match axiom {
        Axiom::Up => check_up(inst, x),
        Axiom::Pf if exhaustive => check_pf_bruteforce(inst, x),
        Axiom::Pf => check_pf(inst, x),
        Axiom::Core if exhaustive => check_core_bruteforce(inst, x),
        Axiom::Core => check_core(inst, x),
        Axiom::PrfUnconstrained => check_prf_unconstrained(inst, x, method),
        Axiom::PrfDiscrete => check_prf_discrete(inst, x, method),
        Axiom::Prf2 => check_prf2(inst, x),
        Axiom::Prf3 => check_prf3(inst, x),
    }
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|source| {
            Error::Io {
                path: p.to_path_buf(),
                source,
            }
        })?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    let label = path.map_or_else(|| PathBuf::from("<stdout>"), Path::to_path_buf);
    let io_err = |source| Error::Io {
        path: label.clone(),
        source,
    };
    let mut out = open_out(path)?;
    out.write_all(text.as_bytes()).map_err(io_err)?;
    out.flush().map_err(io_err)
}

fn metric_values(
    inst: &Instance,
    x: &Outcome,
    metrics: &[MsdMetric],
    squared: bool,
) -> Result<BTreeMap<String, Option<f64>>> {
    metrics
        .iter()
        .map(|m| Ok((m.to_string(), m.evaluate(inst, x, squared)?)))
        .collect()
}

fn cluster(args: ClusterArgs) -> Result<u8> {
    let spec = DatasetSpec {
        path: args.input,
        columns: args.columns,
        standardize: args.standardize,
        id_column: args.id_column,
    };
    let inst = load_csv(&spec, args.k, args.metric)?;
    let run = run_algorithm(args.algo, &inst, args.seed, args.pad)?;
    let mut record = RunRecord::new(&inst, args.algo, args.seed, &run.outcome);
    record.trace = run.trace.map(|t| t.rounds);
    record.underfilled = run.underfilled;
    record.padded = run.padded;
    for name in &args.check {
        let axiom = parse_axiom(name, inst.mode())?;
        record
            .reports
            .push(run_check(&inst, &run.outcome, axiom, false)?);
    }
    record.squared = !args.unsquared;
    record.metrics = metric_values(&inst, &run.outcome, &args.metrics, record.squared)?;
    write_text(args.out.as_deref(), &record.to_json()?)?;
    Ok(0)
}

fn check(args: CheckArgs) -> Result<u8> {
    let record = RunRecord::read(&args.run)?;
    let (inst, x) = record.restore()?;
    let axioms: Vec<Axiom> = if !args.axioms.is_empty() {
        args.axioms
            .iter()
            .map(|a| parse_axiom(a, inst.mode()))
            .collect::<Result<_>>()?
    } else if !record.reports.is_empty() {
        record.reports.iter().map(|r| r.axiom).collect()
    } else {
        ["up", "pf", "core", "prf"]
            .iter()
            .map(|a| parse_axiom(a, inst.mode()))
            .collect::<Result<_>>()?
    };
    let mut reports = Vec::with_capacity(axioms.len());
    for axiom in axioms {
        let report = run_check(&inst, &x, axiom, args.exhaustive)?;
        if let Some(stored) = record.reports.iter().find(|r| r.axiom == axiom) {
            let comparable = stored.is_definitive() && report.is_definitive();
            if comparable && stored.satisfied != report.satisfied {
                return Err(Error::InvalidInstance(format!(
                    "{axiom}: stored verdict {} does not match recomputed verdict {}",
                    stored.satisfied, report.satisfied
                )));
            }
        }
        reports.push(report);
    }
    let mut json = serde_json::to_string_pretty(&reports)?;
    json.push('\n');
    write_text(None, &json)?;
    let violated = reports.iter().any(|r| !r.satisfied);
    Ok(if violated { EXIT_VIOLATION } else { 0 })
}

fn eval(args: EvalArgs) -> Result<u8> {
    let record = RunRecord::read(&args.run)?;
    let (inst, x) = record.restore()?;
    let values = metric_values(&inst, &x, &args.metrics, !args.unsquared)?;
    let mut json = serde_json::to_string_pretty(&values)?;
    json.push('\n');
    write_text(None, &json)?;
    Ok(0)
}

fn experiment(args: ExperimentArgs) -> Result<u8> {
    let grid = GridFile::load(&args.grid)?;
    let table = run_experiment(&grid)?;
    let mut buf = Vec::new();
    table.write_csv(&mut buf)?;
    write_text(Some(&args.out), &String::from_utf8_lossy(&buf))?;
    if let Some(path) = &args.summary {
        let mut json = serde_json::to_string_pretty(&table.aggregates())?;
        json.push('\n');
        write_text(Some(path), &json)?;
    }
    if let Some(path) = &args.curves {
        let mut json = serde_json::to_string_pretty(&table.curves())?;
        json.push('\n');
        write_text(Some(path), &json)?;
    }
    Ok(0)
}

fn gen(args: GenArgs) -> Result<u8> {
    let inst = generate(&args.name, &parse_params(&args.params)?)?;
    write_instance_csv(&inst, &args.out)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INPUT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Cluster(a) => cluster(a),
        Command::Check(a) => check(a),
        Command::Eval(a) => eval(a),
        Command::Experiment(a) => experiment(a),
        Command::Gen(a) => gen(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
