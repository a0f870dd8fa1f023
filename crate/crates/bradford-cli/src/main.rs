//! `bradford`: simulate journal-bibliography growth, evaluate and classify
//! the analytic two-zone curve, validate input files, and forecast curves
//! from snapshot histories.
//!
//! Every file-writing subcommand drops a `run_manifest.json` next to its
//! outputs recording the resolved configuration, seed, input checksums,
//! and output names; identical manifests reproduce identical outputs.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use bradford_core::curve::{analytic_curve, classify, CurvatureSign, CurveModel};
use bradford_core::io;
use bradford_core::model::EntryRate;
use bradford_core::pipeline::{
    build_history, forecast, ingest_snapshot, read_history_manifest, FittedModelsDoc, InputChecksum,
};
use bradford_core::sim::{run_ensemble, EntrySchedule, SimConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "bradford",
    version,
    about = "Two-zone bibliography curve toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte Carlo ensemble of the growth process.
    Simulate(SimulateArgs),
    /// Evaluate the closed-form steady-state curve at one entry rate.
    Analytic(AnalyticArgs),
    /// Classify curve shape from zone parameters or an analytic regime.
    Classify(ClassifyArgs),
    /// Fit a snapshot history and predict the curve at a target time.
    Forecast(ForecastArgs),
    /// Validate a bibliography file and print its summary.
    IngestCheck(IngestCheckArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// `key,value` rows.
    Csv,
    /// One JSON object.
    Json,
}

#[derive(Args)]
struct OutputArgs {
    /// Directory for output files (created if missing).
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Stdout report format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct SimulateArgs {
    /// JSON config file; command-line flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Constant entry rate.
    #[arg(long, conflicts_with_all = ["alpha_start", "alpha_end"])]
    alpha: Option<f64>,
    /// Entry rate at the first paper (linearly decreasing schedule).
    #[arg(long, requires = "alpha_end")]
    alpha_start: Option<f64>,
    /// Entry rate at the last paper.
    #[arg(long, requires = "alpha_start")]
    alpha_end: Option<f64>,
    /// Per-step weight decay factor in (0, 1]; 1 disables aging.
    #[arg(long)]
    gamma: Option<f64>,
    /// Papers to place per replication.
    #[arg(long)]
    papers: Option<u64>,
    /// Number of replications.
    #[arg(long)]
    reps: Option<u32>,
    /// Master seed for the per-replication RNG streams.
    #[arg(long)]
    seed: Option<u64>,
    /// Cap on simulation worker threads.
    #[arg(long)]
    threads: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

/// Config-file counterpart of the `simulate` flags.
#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimulateFileConfig {
    alpha: Option<f64>,
    alpha_start: Option<f64>,
    alpha_end: Option<f64>,
    gamma: Option<f64>,
    papers: Option<u64>,
    reps: Option<u32>,
    seed: Option<u64>,
}

#[derive(Args)]
struct AnalyticArgs {
    /// Entry rate in (0, 1).
    #[arg(long)]
    alpha: f64,
    /// Paper total.
    #[arg(long)]
    papers: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Entry rate; with --papers, classifies the analytic regime.
    #[arg(long, requires = "papers")]
    alpha: Option<f64>,
    /// Paper total for the analytic regime.
    #[arg(long, requires = "alpha")]
    papers: Option<f64>,
    /// Core ratio-line slope k.
    #[arg(long, requires_all = ["b", "core_journals"], conflicts_with_all = ["alpha", "papers"])]
    ratio_slope: Option<f64>,
    /// Egghe inverse rank scale b.
    #[arg(long, requires = "ratio_slope")]
    b: Option<f64>,
    /// Real-valued core journal count T0.
    #[arg(long, requires = "ratio_slope")]
    core_journals: Option<f64>,
    /// Stdout report format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct ForecastArgs {
    /// History manifest CSV (`t,path`); paths resolve against its directory.
    #[arg(long)]
    history: PathBuf,
    /// Time to forecast the curve at.
    #[arg(long)]
    target_time: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct IngestCheckArgs {
    /// Bibliography CSV, either `n,count` or `rank,articles`.
    file: PathBuf,
    /// Stdout report format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

/// Reproducibility record written next to every output set.
#[derive(Serialize, Deserialize)]
struct RunManifest {
    command: String,
    config: Value,
    master_seed: Option<u64>,
    artifact_version: String,
    inputs: Vec<ManifestInput>,
    /// File names within the output directory, the manifest excluded.
    outputs: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct ManifestInput {
    path: String,
    sha256: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    time: Option<f64>,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Analytic(args) => cmd_analytic(args),
        Command::Classify(args) => cmd_classify(args),
        Command::Forecast(args) => cmd_forecast(args),
        Command::IngestCheck(args) => cmd_ingest_check(args),
    }
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    let file = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading config file {}", path.display()))?;
            serde_json::from_str::<SimulateFileConfig>(&text)
                .with_context(|| format!("parsing config file {}", path.display()))?
        }
        None => SimulateFileConfig::default(),
    };

    // The schedule is one semantic field with two spellings, so the whole
    // schedule comes from the highest layer that sets any part of it.
    let schedule = if args.alpha.is_some() || args.alpha_start.is_some() {
        schedule_from(args.alpha, args.alpha_start, args.alpha_end)?
    } else if file.alpha.is_some() || file.alpha_start.is_some() || file.alpha_end.is_some() {
        schedule_from(file.alpha, file.alpha_start, file.alpha_end)?
    } else {
        EntrySchedule::Constant { alpha: 0.1 }
    };
    let config = SimConfig {
        schedule,
        decay: args.gamma.or(file.gamma).unwrap_or(1.0),
        target_papers: args.papers.or(file.papers).unwrap_or(10_000),
        replications: args.reps.or(file.reps).unwrap_or(100),
        master_seed: args.seed.or(file.seed).unwrap_or(0),
    };
    config.validate()?;

    if let Some(threads) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let result = run_ensemble(&config)?;

    let out = prepare_out_dir(&args.output.out)?;
    write_json(&out.join("ensemble.json"), &result)?;
    io::write_frequency_csv(&out.join("frequency.csv"), &result.mean_frequency)?;
    io::write_cumulative_csv(&out.join("cumulative.csv"), &result.mean_cumulative)?;

    let mut inputs = Vec::new();
    if let Some(path) = &args.config {
        inputs.push(ManifestInput {
            path: path.display().to_string(),
            sha256: io::sha256_hex(path)?,
            time: None,
        });
    }
    write_manifest(
        &out,
        RunManifest {
            command: "simulate".into(),
            config: json!({
                "schedule": config.schedule,
                "gamma": config.decay,
                "papers": config.target_papers,
                "reps": config.replications,
                "seed": config.master_seed,
                "threads": args.threads,
                "format": format_name(args.output.format),
            }),
            master_seed: Some(config.master_seed),
            artifact_version: env!("CARGO_PKG_VERSION").into(),
            inputs,
            outputs: names(&["ensemble.json", "frequency.csv", "cumulative.csv"]),
        },
    )?;

    let s = &result.scalars;
    print_report(
        args.output.format,
        vec![
            ("journals_mean", json!(s.journals.mean)),
            ("journals_std", json!(s.journals.std_dev)),
            ("T0_mean", json!(s.core_journals.mean)),
            ("T0_std", json!(s.core_journals.std_dev)),
            ("A0_mean", json!(s.core_papers.mean)),
            ("A0_std", json!(s.core_papers.std_dev)),
            ("X1_mean", json!(s.peak_productivity.mean)),
            ("X1_std", json!(s.peak_productivity.std_dev)),
            ("y_m", json!(result.zone_boundary)),
            ("reps", json!(result.replications)),
        ],
    )
}

fn schedule_from(
    alpha: Option<f64>,
    alpha_start: Option<f64>,
    alpha_end: Option<f64>,
) -> Result<EntrySchedule> {
    match (alpha, alpha_start, alpha_end) {
        (Some(alpha), None, None) => Ok(EntrySchedule::Constant { alpha }),
        (None, Some(alpha_start), Some(alpha_end)) => Ok(EntrySchedule::LinearDecreasing {
            alpha_start,
            alpha_end,
        }),
        (Some(_), _, _) => bail!("alpha conflicts with alpha_start/alpha_end"),
        _ => bail!("alpha_start and alpha_end must be given together"),
    }
}

fn cmd_analytic(args: AnalyticArgs) -> Result<()> {
    let alpha = EntryRate::new(args.alpha)?;
    let model = analytic_curve(alpha, args.papers)?;

    let out = prepare_out_dir(&args.output.out)?;
    io::write_curve_csv(&out.join("curve.csv"), &model.samples)?;
    write_manifest(
        &out,
        RunManifest {
            command: "analytic".into(),
            config: json!({
                "alpha": args.alpha,
                "papers": args.papers,
                "format": format_name(args.output.format),
            }),
            master_seed: None,
            artifact_version: env!("CARGO_PKG_VERSION").into(),
            inputs: Vec::new(),
            outputs: names(&["curve.csv"]),
        },
    )?;

    print_report(args.output.format, curve_report(&model))
}

fn curve_report(model: &CurveModel) -> Vec<(&'static str, Value)> {
    vec![
        ("rho", json!(model.zone.rho.get())),
        ("y_m", json!(model.zone.boundary)),
        ("T0", json!(model.zone.core_journals)),
        ("A0", json!(model.zone.core_papers)),
        ("X1", json!(model.zone.peak_productivity)),
        ("k", json!(model.zone.ratio_slope)),
        ("a", json!(model.egghe.a)),
        ("b", json!(model.egghe.b)),
        ("journals", json!(model.journals)),
        ("papers", json!(model.papers)),
        ("shape", json!(model.shape.label.to_string())),
    ]
}

fn cmd_classify(args: ClassifyArgs) -> Result<()> {
    let shape = match (args.alpha, args.ratio_slope) {
        (Some(alpha), None) => {
            let papers = args.papers.expect("clap enforces the pairing");
            analytic_curve(EntryRate::new(alpha)?, papers)?.shape
        }
        (None, Some(k)) => {
            let b = args.b.expect("clap enforces the pairing");
            let t0 = args.core_journals.expect("clap enforces the pairing");
            for (name, v) in [("ratio-slope", k), ("b", b), ("core-journals", t0)] {
                if !v.is_finite() || v <= 0.0 {
                    bail!("{name} must be positive and finite, got {v}");
                }
            }
            classify(CurvatureSign::of(1.0 - k), CurvatureSign::of(1.0 - b * t0))
        }
        _ => bail!(
            "give either --alpha with --papers, or --ratio-slope with --b and --core-journals"
        ),
    };
    print_report(
        args.format,
        vec![
            ("core_sign", json!(sign_name(shape.core_sign))),
            ("normal_sign", json!(sign_name(shape.normal_sign))),
            ("shape", json!(shape.label.to_string())),
        ],
    )
}

fn sign_name(sign: CurvatureSign) -> &'static str {
    match sign {
        CurvatureSign::Negative => "negative",
        CurvatureSign::Zero => "zero",
        CurvatureSign::Positive => "positive",
    }
}

fn cmd_forecast(args: ForecastArgs) -> Result<()> {
    let entries = read_history_manifest(&args.history)
        .with_context(|| format!("reading history manifest {}", args.history.display()))?;

    let mut snapshots = Vec::new();
    let mut checksums = Vec::new();
    for entry in &entries {
        snapshots.push(
            ingest_snapshot(&entry.path, entry.time)
                .with_context(|| format!("snapshot {}", entry.path.display()))?,
        );
        checksums.push(InputChecksum {
            path: entry.path.display().to_string(),
            time: entry.time,
            sha256: io::sha256_hex(&entry.path)?,
        });
    }
    let history = build_history(snapshots)?;
    let fc = forecast(&history, args.target_time)?;
    let doc = FittedModelsDoc::new(&history, checksums.clone());

    let out = prepare_out_dir(&args.output.out)?;
    write_json(&out.join("fitted_models.json"), &doc)?;
    io::write_curve_csv(&out.join("forecast_curve.csv"), &fc.curve.samples)?;

    let mut inputs = vec![ManifestInput {
        path: args.history.display().to_string(),
        sha256: io::sha256_hex(&args.history)?,
        time: None,
    }];
    inputs.extend(checksums.into_iter().map(|c| ManifestInput {
        path: c.path,
        sha256: c.sha256,
        time: Some(c.time),
    }));
    write_manifest(
        &out,
        RunManifest {
            command: "forecast".into(),
            config: json!({
                "history": args.history.display().to_string(),
                "target_time": args.target_time,
                "format": format_name(args.output.format),
            }),
            master_seed: None,
            artifact_version: env!("CARGO_PKG_VERSION").into(),
            inputs,
            outputs: names(&["fitted_models.json", "forecast_curve.csv"]),
        },
    )?;

    let mut report = vec![("target_time", json!(fc.target_time))];
    report.extend(curve_report(&fc.curve));
    report.push(("alpha", json!(fc.predicted.alpha)));
    report.push(("extrapolated", json!(fc.extrapolated)));
    report.push(("warnings", json!(fc.warnings.join("; "))));
    print_report(args.output.format, report)
}

fn cmd_ingest_check(args: IngestCheckArgs) -> Result<()> {
    let ranked = io::read_bibliography(&args.file)?;
    print_report(
        args.format,
        vec![
            ("path", json!(args.file.display().to_string())),
            ("sha256", json!(io::sha256_hex(&args.file)?)),
            ("journals", json!(ranked.journals())),
            ("papers", json!(ranked.papers())),
            ("top_productivity", json!(ranked.top())),
        ],
    )
}

fn prepare_out_dir(dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir)
        .with_context(|| format!("creating output directory {}", dir.display()))?;
    Ok(dir.to_path_buf())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn write_manifest(out: &Path, manifest: RunManifest) -> Result<()> {
    write_json(&out.join("run_manifest.json"), &manifest)
}

fn names(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn format_name(format: Format) -> &'static str {
    match format {
        Format::Csv => "csv",
        Format::Json => "json",
    }
}

/// Prints a report as `key,value` rows or one JSON object. JSON keys sort
/// alphabetically; CSV preserves the listed order. The report is the last
/// action of every command, so a consumer that closed stdout early (broken
/// pipe) ends the run quietly instead of failing it.
fn print_report(format: Format, pairs: Vec<(&'static str, Value)>) -> Result<()> {
    let mut text = String::new();
    match format {
        Format::Csv => {
            text.push_str("key,value\n");
            for (key, value) in pairs {
                match value {
                    Value::String(s) => text.push_str(&format!("{key},{s}\n")),
                    other => text.push_str(&format!("{key},{other}\n")),
                }
            }
        }
        Format::Json => {
            let map: serde_json::Map<String, Value> =
                pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
            text = serde_json::to_string_pretty(&Value::Object(map))?;
            text.push('\n');
        }
    }
    use std::io::Write;
    match std::io::stdout().write_all(text.as_bytes()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        other => Ok(other?),
    }
}
