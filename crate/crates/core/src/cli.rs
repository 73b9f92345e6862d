//! Command-line front end.
//!
//! Every subcommand writes its outputs and a `manifest.json` (configuration,
//! tool version, seed, wall time) into the output directory, which defaults to
//! `$TGIRG_OUT_DIR` or `./out`.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage error, 3 I/O error.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::Rng;
use serde::Serialize;
use serde_json::json;

use crate::assortativity::{coefficient_report, hill_from_degrees};
use crate::error::{Error, Result};
use crate::generators::{calibrate_avg_degree, Alpha, CalibrationOptions, Model, ModelParams};
use crate::graph::Graph;
use crate::io::{read_edge_list, write_edge_list, EdgeListFile, IngestReport};
use crate::joint::{
    conditional_change_heatmap, degree_ccdf_curves, joint_degree_histogram, write_ccdf_csv, write_conditional_csv,
    write_joint_csv, BucketScheme,
};
use crate::svg;
use crate::validation::{run_suite_by_name, run_sweep, SweepConfig};

pub const OUT_DIR_ENV: &str = "TGIRG_OUT_DIR";
pub const DEFAULT_SEED: u64 = 20_240_601;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "tgirg",
    version,
    about = "Scale-free geometric random graphs and degree assortativity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
enum Command {
    /// Generate a calibrated graph and write it as an edge list.
    Generate(GenerateArgs),
    /// Pearson, Spearman and Kendall assortativity of an edge list.
    Coeffs(CoeffsArgs),
    /// Joint and conditional-change heatmaps.
    Heatmaps(AnalysisArgs),
    /// Node, edge and conditional degree CCDFs.
    Ccdf(AnalysisArgs),
    /// Coefficients over a grid of σ and τ.
    Sweep(SweepArgs),
    /// Simulation-versus-theory checks.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, Serialize)]
#[serde(untagged)]
enum SeedArg {
    Fixed(u64),
    Random,
}

fn parse_seed(s: &str) -> std::result::Result<SeedArg, String> {
    if s.eq_ignore_ascii_case("random") {
        return Ok(SeedArg::Random);
    }
    s.parse()
        .map(SeedArg::Fixed)
        .map_err(|_| format!("seed must be an integer or 'random', got {s:?}"))
}

impl SeedArg {
    fn resolve(self) -> u64 {
        match self {
            SeedArg::Fixed(s) => s,
            SeedArg::Random => rand::rng().random(),
        }
    }
}

#[derive(Debug, Args, Serialize)]
struct Common {
    /// Output directory [default: $TGIRG_OUT_DIR or ./out].
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Integer seed, or `random`.
    #[arg(long, default_value_t = DEFAULT_SEED.to_string(), value_parser = parse_seed_str)]
    seed: String,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

fn parse_seed_str(s: &str) -> std::result::Result<String, String> {
    parse_seed(s).map(|_| s.to_string())
}

impl Common {
    fn out_dir(&self) -> PathBuf {
        self.out_dir
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("out"))
    }

    fn seed(&self) -> u64 {
        parse_seed(&self.seed).expect("validated by clap").resolve()
    }
}

fn parse_model(s: &str) -> std::result::Result<Model, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Args, Serialize)]
struct ModelArgs {
    #[arg(long, value_parser = parse_model)]
    model: Model,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2.8)]
    tau: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Temperature `T = 1/α`; 0 is the threshold model.
    #[arg(long, default_value_t = 0.0)]
    temp: f64,
    /// Target average degree [default: 15, none for rgg].
    #[arg(long)]
    avg_deg: Option<f64>,
    /// Connection radius (rgg only).
    #[arg(long)]
    radius: Option<f64>,
    /// Admit σ >= τ - 1.
    #[arg(long)]
    allow_non_power_law: bool,
}

impl ModelArgs {
    fn params(&self, seed: u64) -> Result<ModelParams> {
        let mut p = ModelParams::new(self.model, self.n)
            .tau(self.tau)
            .sigma(self.sigma)
            .dim(self.dim)
            .alpha(Alpha::from_temperature(self.temp)?)
            .allow_non_power_law(self.allow_non_power_law)
            .seed(seed);
        if let Some(k) = self.avg_deg {
            p = p.avg_degree(k);
        }
        if self.model == Model::Rgg && self.radius.is_some() {
            p.target_avg_degree = self.avg_deg;
        }
        p.rgg_radius = self.radius;
        if self.radius.is_some() && self.model != Model::Rgg {
            return Err(Error::param("--radius applies to rgg only"));
        }
        p.validate()?;
        Ok(p)
    }
}

#[derive(Debug, Args, Serialize)]
struct GenerateArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 8)]
    max_iters: usize,
    #[arg(long, default_value_t = 0.05)]
    tolerance: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args, Serialize)]
struct InputArgs {
    /// Edge-list file.
    #[arg(long)]
    input: PathBuf,
    /// Vertex ids start at 0 instead of 1.
    #[arg(long)]
    zero_indexed: bool,
}

#[derive(Debug, Args, Serialize)]
struct CoeffsArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Tail size of the Hill estimator [default: max(10, sqrt(#nonzero degrees))].
    #[arg(long)]
    hill_k: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args, Serialize)]
struct AnalysisArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = crate::joint::DEFAULT_BUCKETS)]
    buckets: usize,
    /// Comma-separated subset of csv, json, svg.
    #[arg(long, value_delimiter = ',', default_values_t = ["csv".to_string(), "json".to_string(), "svg".to_string()])]
    formats: Vec<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args, Serialize)]
struct SweepArgs {
    #[arg(long, value_delimiter = ',', value_parser = parse_model, default_value = "tunable_chung_lu,tgirg")]
    models: Vec<Model>,
    #[arg(long, value_delimiter = ',', default_values_t = [2.2, 2.4, 2.6, 2.8])]
    taus: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = [0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.6, 1.8])]
    sigmas: Vec<f64>,
    #[arg(long, default_value_t = 50_000)]
    n: usize,
    #[arg(long, default_value_t = 5)]
    replicates: usize,
    #[arg(long, default_value_t = 15.0)]
    avg_deg: f64,
    #[arg(long, default_value_t = 0.0)]
    temp: f64,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Also run cells with σ >= τ - 1.
    #[arg(long)]
    allow_non_power_law: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args, Serialize)]
struct ValidateArgs {
    /// rgg, pearson-negativity or sampler-equivalence.
    #[arg(long)]
    suite: String,
    #[arg(long, value_delimiter = ',')]
    dim: Option<Vec<usize>>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    #[command(flatten)]
    common: Common,
}

struct RunContext {
    dir: PathBuf,
    outputs: Vec<String>,
    started: Instant,
}

impl RunContext {
    fn new(dir: PathBuf) -> Result<Self> {
        fs::create_dir_all(&dir)?;
        Ok(Self {
            dir,
            outputs: Vec::new(),
            started: Instant::now(),
        })
    }

    fn create(&mut self, name: &str) -> Result<BufWriter<File>> {
        self.outputs.push(name.to_string());
        Ok(BufWriter::new(File::create(self.dir.join(name))?))
    }

    fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut w = self.create(name)?;
        serde_json::to_writer_pretty(&mut w, value)?;
        writeln!(w)?;
        w.flush()?;
        Ok(())
    }

    fn write_text(&mut self, name: &str, text: &str) -> Result<()> {
        let mut w = self.create(name)?;
        w.write_all(text.as_bytes())?;
        w.flush()?;
        Ok(())
    }

    fn finish(mut self, command: &Command, seed: u64, workers: usize, results: serde_json::Value) -> Result<()> {
        let manifest = json!({
            "tool": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "config": command,
            "seed": seed,
            "workers": workers,
            "outputs": self.outputs,
            "results": results,
            "wall_time_seconds": self.started.elapsed().as_secs_f64(),
        });
        let path = self.dir.join("manifest.json");
        self.outputs.clear();
        let mut w = BufWriter::new(File::create(path)?);
        serde_json::to_writer_pretty(&mut w, &manifest)?;
        writeln!(w)?;
        w.flush()?;
        Ok(())
    }
}

fn load(input: &InputArgs) -> Result<(Graph, IngestReport)> {
    read_edge_list(&EdgeListFile::new(&input.input).one_indexed(!input.zero_indexed))
}

fn warn_drops(report: &IngestReport) {
    if report.self_loops + report.duplicates > 0 {
        eprintln!(
            "note: dropped {} self-loops and {} duplicate edges",
            report.self_loops, report.duplicates
        );
    }
}

fn cmd_generate(args: &GenerateArgs, command: &Command) -> Result<i32> {
    let seed = args.common.seed();
    let params = args.model.params(seed)?;
    let mut ctx = RunContext::new(args.common.out_dir())?;
    let opts = CalibrationOptions {
        max_iters: args.max_iters,
        tolerance: args.tolerance,
        initial_scale: 1.0,
        workers: args.common.workers,
    };
    let started = Instant::now();
    let cal = calibrate_avg_degree(&params, &opts)?;
    let generation_seconds = started.elapsed().as_secs_f64();
    let name = "graph.txt";
    ctx.outputs.push(name.into());
    write_edge_list(&cal.instance.graph, ctx.dir.join(name))?;
    let results = json!({
        "params": params,
        "scale": cal.scale,
        "calibration_iterations": cal.iterations,
        "calibration_converged": cal.converged,
        "vertices": cal.instance.graph.vertex_count(),
        "edges": cal.instance.graph.edge_count(),
        "realized_avg_degree": cal.realized_avg,
        "generation_seconds": generation_seconds,
    });
    println!("{}", serde_json::to_string_pretty(&results)?);
    ctx.finish(command, seed, args.common.workers, results)?;
    Ok(EXIT_OK)
}

fn cmd_coeffs(args: &CoeffsArgs, command: &Command) -> Result<i32> {
    let seed = args.common.seed();
    let (graph, ingest) = load(&args.input)?;
    warn_drops(&ingest);
    let mut ctx = RunContext::new(args.common.out_dir())?;
    let report = coefficient_report(&graph)?;
    // an explicit tail size must fit; the default one just yields null on tiny graphs
    let hill = match hill_from_degrees(&graph.degree_sequence(), args.hill_k, seed) {
        Ok(h) => Some(h),
        Err(e) if args.hill_k.is_some() => return Err(e),
        Err(_) => None,
    };
    let results = json!({ "ingest": ingest, "coefficients": report, "hill": hill });
    ctx.write_json("coeffs.json", &results)?;
    println!("{}", serde_json::to_string_pretty(&results)?);
    ctx.finish(command, seed, args.common.workers, json!({ "coefficients": report }))?;
    Ok(EXIT_OK)
}

fn wants(formats: &[String], f: &str) -> bool {
    formats.iter().any(|x| x.eq_ignore_ascii_case(f))
}

fn check_formats(formats: &[String]) -> Result<()> {
    for f in formats {
        if !["csv", "json", "svg"].contains(&f.to_ascii_lowercase().as_str()) {
            return Err(Error::param(format!("unknown format {f:?}; expected csv, json or svg")));
        }
    }
    Ok(())
}

fn cmd_heatmaps(args: &AnalysisArgs, command: &Command) -> Result<i32> {
    check_formats(&args.formats)?;
    let seed = args.common.seed();
    let (graph, ingest) = load(&args.input)?;
    warn_drops(&ingest);
    let scheme = BucketScheme::for_graph(&graph, args.buckets)?;
    let joint = joint_degree_histogram(&graph, &scheme)?;
    let heat = conditional_change_heatmap(&joint);
    let mut ctx = RunContext::new(args.common.out_dir())?;
    if wants(&args.formats, "csv") {
        let w = ctx.create("joint.csv")?;
        write_joint_csv(&joint, w)?;
        let w = ctx.create("conditional.csv")?;
        write_conditional_csv(&heat, w)?;
    }
    if wants(&args.formats, "json") {
        ctx.write_json(
            "heatmaps.json",
            &json!({
                "bucket_lower_bounds": scheme.lower_bounds(),
                "scheme": scheme,
                "joint": joint.probs(),
                "joint_counts": joint.counts,
                "marginals": joint.marginals(),
                "conditional_change": heat.change,
            }),
        )?;
    }
    if wants(&args.formats, "svg") {
        ctx.write_text("joint.svg", &svg::joint_heatmap_svg(&joint))?;
        ctx.write_text("conditional.svg", &svg::conditional_heatmap_svg(&heat))?;
    }
    ctx.finish(
        command,
        seed,
        args.common.workers,
        json!({ "ingest": ingest, "scheme": scheme }),
    )?;
    Ok(EXIT_OK)
}

fn cmd_ccdf(args: &AnalysisArgs, command: &Command) -> Result<i32> {
    check_formats(&args.formats)?;
    let seed = args.common.seed();
    let (graph, ingest) = load(&args.input)?;
    warn_drops(&ingest);
    let scheme = BucketScheme::for_graph(&graph, args.buckets)?;
    let curves = degree_ccdf_curves(&graph, &scheme)?;
    let mut ctx = RunContext::new(args.common.out_dir())?;
    if wants(&args.formats, "csv") {
        let w = ctx.create("ccdf.csv")?;
        write_ccdf_csv(&curves, w)?;
    }
    if wants(&args.formats, "json") {
        ctx.write_json("ccdf.json", &curves)?;
    }
    if wants(&args.formats, "svg") {
        ctx.write_text("ccdf.svg", &svg::ccdf_svg(&curves))?;
    }
    for c in curves.conditional.iter().filter(|c| c.curve.is_none()) {
        eprintln!("note: conditioning bucket B{} is empty", c.bucket);
    }
    ctx.finish(
        command,
        seed,
        args.common.workers,
        json!({ "ingest": ingest, "scheme": scheme }),
    )?;
    Ok(EXIT_OK)
}

fn cmd_sweep(args: &SweepArgs, command: &Command) -> Result<i32> {
    let seed = args.common.seed();
    let cfg = SweepConfig {
        models: args.models.clone(),
        taus: args.taus.clone(),
        sigmas: args.sigmas.clone(),
        n: args.n,
        replicates: args.replicates,
        avg_degree: args.avg_deg,
        alpha: Alpha::from_temperature(args.temp)?,
        dim: args.dim,
        allow_non_power_law: args.allow_non_power_law,
        seed,
        workers: args.common.workers,
    };
    let mut ctx = RunContext::new(args.common.out_dir())?;
    let cells = run_sweep(&cfg)?;
    {
        let w = ctx.create("sweep.csv")?;
        let mut w = csv::Writer::from_writer(w);
        w.write_record([
            "model",
            "tau",
            "sigma",
            "replicates",
            "pearson_mean",
            "pearson_sd",
            "spearman_mean",
            "spearman_sd",
            "kendall_mean",
            "kendall_sd",
            "avg_degree_mean",
        ])?;
        let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        for c in &cells {
            let avg = c.realized_avg_degrees.iter().sum::<f64>() / c.realized_avg_degrees.len().max(1) as f64;
            w.write_record([
                c.model.name().to_string(),
                c.tau.to_string(),
                c.sigma.to_string(),
                c.replicates.to_string(),
                opt(c.pearson.mean),
                opt(c.pearson.sd),
                opt(c.spearman.mean),
                opt(c.spearman.sd),
                opt(c.kendall.mean),
                opt(c.kendall.sd),
                avg.to_string(),
            ])?;
        }
        w.flush()?;
    }
    ctx.write_json("sweep.json", &cells)?;
    ctx.finish(command, seed, args.common.workers, json!({ "cells": cells.len() }))?;
    Ok(EXIT_OK)
}

fn cmd_validate(args: &ValidateArgs, command: &Command) -> Result<i32> {
    let seed = args.common.seed();
    let mut ctx = RunContext::new(args.common.out_dir())?;
    let report = run_suite_by_name(
        &args.suite,
        args.dim.clone(),
        args.tau,
        args.n,
        seed,
        args.common.workers,
    )?;
    ctx.write_json("validation.json", &report)?;
    for c in &report.checks {
        println!("{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name);
    }
    let passed = report.passed;
    ctx.finish(command, seed, args.common.workers, json!({ "passed": passed }))?;
    Ok(if passed { EXIT_OK } else { EXIT_VALIDATION })
}

/// Exit code for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_) | Error::Parse { .. } | Error::Csv(_) | Error::Json(_) => EXIT_IO,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let command = &cli.command;
    let outcome = match command {
        Command::Generate(a) => cmd_generate(a, command),
        Command::Coeffs(a) => cmd_coeffs(a, command),
        Command::Heatmaps(a) => cmd_heatmaps(a, command),
        Command::Ccdf(a) => cmd_ccdf(a, command),
        Command::Sweep(a) => cmd_sweep(a, command),
        Command::Validate(a) => cmd_validate(a, command),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
