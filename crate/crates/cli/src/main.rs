//! `gs`: explain black-box predictions from the command line.
//!
//! Exit codes: 0 on success, 1 on usage or I/O errors, 2 when `explain`
//! finds no enemy.

mod classifier_arg;
mod dataset;
mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use growing_spheres::{
    explain_batch, explain_with_stream, l2_distance, sample_layer, FeatureVector, Hyperparameters,
    Label, LayerSpec, RandomSource, SamplingMode, ScalingModel, Target,
};
use log::info;

use classifier_arg::ClassifierArg;
use dataset::Dataset;

#[derive(Parser)]
#[command(name = "gs", version, about = "Counterfactual explanations for black-box classifiers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Explain one observation of a dataset.
    Explain(ExplainArgs),
    /// Explain every observation and summarize sparsity.
    Batch(BatchArgs),
    /// Dump points drawn from a spherical layer around the origin.
    Sample(SampleArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Paper,
    Volume,
}

impl From<Mode> for SamplingMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Paper => SamplingMode::PaperRadiusUniform,
            Mode::Volume => SamplingMode::VolumeUniform,
        }
    }
}

#[derive(Args)]
struct SearchArgs {
    /// CSV file with a header row of feature names.
    #[arg(long)]
    data: PathBuf,
    /// builtin:<kind>:... or exec:<path> [args]
    #[arg(long)]
    classifier: ClassifierArg,
    /// Column to drop before explaining.
    #[arg(long)]
    label_column: Option<String>,
    /// Treat the data as already scaled.
    #[arg(long)]
    no_scale: bool,
    #[arg(long, default_value_t = growing_spheres::types::DEFAULT_ETA)]
    eta: f64,
    #[arg(long, default_value_t = growing_spheres::types::DEFAULT_N_SAMPLES)]
    n_samples: usize,
    #[arg(long, default_value_t = growing_spheres::types::DEFAULT_GAMMA)]
    gamma: f64,
    #[arg(long, default_value_t = growing_spheres::types::DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Mode::Paper)]
    mode: Mode,
    /// Largest outer radius before giving up [default: 2*sqrt(d)].
    #[arg(long)]
    radius_cap: Option<f64>,
    #[arg(long, default_value_t = growing_spheres::types::DEFAULT_ETA_FLOOR)]
    eta_floor: f64,
    /// Clamp generated points to the unit box.
    #[arg(long)]
    clamp: bool,
    /// Only accept enemies with this label.
    #[arg(long, allow_hyphen_values = true)]
    target: Option<i64>,
    /// Per-request timeout for exec: classifiers, in seconds.
    #[arg(long, default_value_t = 30.0)]
    timeout: f64,
}

impl SearchArgs {
    fn hyperparameters(&self) -> Hyperparameters {
        Hyperparameters {
            eta: self.eta,
            n_samples: self.n_samples,
            gamma: self.gamma,
            radius_cap: self.radius_cap,
            eta_floor: self.eta_floor,
            sampling_mode: self.mode.into(),
            seed: self.seed,
            target: self.target.map_or(Target::AnyDifferent, |t| Target::Specific(Label(t))),
            clamp_to_unit_box: self.clamp,
        }
    }

    fn load(&self) -> Result<(Dataset, ScalingModel, Hyperparameters)> {
        let data = Dataset::load(&self.data, self.label_column.as_deref())?;
        let scaling = if self.no_scale {
            ScalingModel::identity(data.dimension())
        } else {
            ScalingModel::fit(&data.rows)?
        };
        let hp = self.hyperparameters();
        hp.validate(data.dimension())?;
        Ok((data, scaling, hp))
    }

    fn timeout(&self) -> Result<Duration> {
        Duration::try_from_secs_f64(self.timeout).context("invalid --timeout")
    }
}

#[derive(Args)]
struct ExplainArgs {
    #[command(flatten)]
    search: SearchArgs,
    /// Row of the dataset to explain (0-based, header excluded).
    #[arg(long, default_value_t = 0)]
    index: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BatchArgs {
    #[command(flatten)]
    search: SearchArgs,
    /// Per-observation CSV results.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, default_value_t = 0.0)]
    a0: f64,
    #[arg(long, default_value_t = 1.0)]
    a1: f64,
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, value_enum, default_value_t = Mode::Paper)]
    mode: Mode,
    #[arg(long, default_value_t = growing_spheres::types::DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn cmd_explain(args: &ExplainArgs) -> Result<()> {
    let (data, scaling, hp) = args.search.load()?;
    let Some(x) = data.rows.get(args.index) else {
        bail!("--index {} out of range ({} rows)", args.index, data.rows.len());
    };
    let f = args.search.classifier.build(data.dimension(), args.search.timeout()?)?;
    let explanation = explain_with_stream(&*f, x, &scaling, &hp, args.index as u64)?;
    info!(
        "row {}: l0={} l2={} after {} classifier calls",
        args.index, explanation.cost_final.l0, explanation.cost_final.l2, explanation.diagnostics.classifier_calls
    );
    let doc = report::ExplainReport::new(args.index, &data.features, x, &explanation, &hp);
    let mut out = output(args.out.as_deref())?;
    serde_json::to_writer_pretty(&mut out, &doc)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn cmd_batch(args: &BatchArgs) -> Result<()> {
    let (data, scaling, hp) = args.search.load()?;
    let f = args.search.classifier.build(data.dimension(), args.search.timeout()?)?;
    if args.workers > 1 && !f.concurrent_safe() {
        info!("classifier is not concurrent-safe, running sequentially");
    }
    let results = explain_batch(&*f, &data.rows, &scaling, &hp, args.workers);

    let mut csv_out = output(Some(&args.out))?;
    report::write_batch_csv(&mut csv_out, &results)?;
    csv_out.flush()?;

    let summary = report::BatchSummary::new(&results, hp.seed);
    let mut stdout = io::stdout().lock();
    serde_json::to_writer_pretty(&mut stdout, &summary)?;
    writeln!(stdout)?;
    Ok(())
}

fn cmd_sample(args: &SampleArgs) -> Result<()> {
    if args.d == 0 {
        bail!("--d must be at least 1");
    }
    let center = FeatureVector::zeros(args.d);
    let layer = LayerSpec::new(center.clone(), args.a0, args.a1)?;
    let mut rng = RandomSource::new(args.seed, 0);
    let points = sample_layer(&layer, args.n, args.mode.into(), &mut rng);

    let mut out = output(args.out.as_deref())?;
    let header: Vec<String> = (0..args.d).map(|i| format!("x{i}")).chain(["radius".into()]).collect();
    writeln!(out, "{}", header.join(","))?;
    for p in &points {
        let radius = l2_distance(p.as_slice(), center.as_slice());
        let row: Vec<String> = p.iter().chain([&radius]).map(|v| v.to_string()).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    out.flush()?;
    Ok(())
}

fn init_logging() {
    let env = env_logger::Env::new().filter_or("GS_LOG", "error");
    env_logger::Builder::from_env(env).format_timestamp(None).init();
}

fn main() -> ExitCode {
    init_logging();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match &cli.command {
        Command::Explain(a) => cmd_explain(a),
        Command::Batch(a) => cmd_batch(a),
        Command::Sample(a) => cmd_sample(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gs: {e:#}");
            match e.downcast_ref::<growing_spheres::Error>() {
                Some(growing_spheres::Error::NoEnemyFound { .. }) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
