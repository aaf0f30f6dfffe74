use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use kercop::bandwidth::select_auto;
use kercop::estimators::{pseudo_obs, BandwidthChoice, Estimator, EstimatorConfig, EstimatorKind, EvalGrid, PseudoVariant};
use kercop::families::Family;
use kercop::gof::{bootstrap_gof, StatKind};
use kercop::harness::{self, ExperimentKind, ExperimentPlan, RecordKind};
use kercop::{Error, Result};

#[derive(Parser)]
#[command(name = "kercop", version, about = "Kernel copula estimation and goodness-of-fit tests")]
struct Cli {
    /// Master random seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads; 0 picks one per core.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an estimator on a regular grid.
    Estimate(EstimateArgs),
    /// Print the plug-in bandwidth for an estimator.
    Bandwidth(BandwidthArgs),
    /// Parametric bootstrap goodness-of-fit test.
    Gof(GofArgs),
    /// Run a Monte Carlo experiment.
    Simulate(SimulateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    E,
    Ll,
    Lls,
    Mr,
    Mrs,
    T,
}

impl From<KindArg> for EstimatorKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::E => EstimatorKind::E,
            KindArg::Ll => EstimatorKind::LL,
            KindArg::Lls => EstimatorKind::LLS,
            KindArg::Mr => EstimatorKind::MR,
            KindArg::Mrs => EstimatorKind::MRS,
            KindArg::T => EstimatorKind::T,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Shifted,
    Centered,
}

#[derive(Clone, Copy, ValueEnum)]
enum StatArg {
    Ks,
    Cm,
    Q,
}

impl From<StatArg> for StatKind {
    fn from(s: StatArg) -> Self {
        match s {
            StatArg::Ks => StatKind::Ks,
            StatArg::Cm => StatKind::Cm,
            StatArg::Q => StatKind::Q,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentArg {
    Compare,
    Sweep,
    GofTable,
}

#[derive(Args)]
struct EstimateArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    estimator: KindArg,
    /// Fixed bandwidth.
    #[arg(long, conflicts_with = "auto_h")]
    h: Option<f64>,
    /// Plug-in bandwidth (the default for kernel estimators).
    #[arg(long)]
    auto_h: bool,
    #[arg(long, value_enum, default_value = "shifted")]
    variant: VariantArg,
    /// Grid points per axis.
    #[arg(long, default_value_t = EvalGrid::DEFAULT_SIZE)]
    grid: usize,
    #[arg(long)]
    output: PathBuf,
    /// Clamp reported values into [0, 1].
    #[arg(long)]
    clamp: bool,
}

#[derive(Args)]
struct BandwidthArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    estimator: KindArg,
}

#[derive(Args)]
struct GofArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    null: Family,
    #[arg(long, value_enum, default_value = "e")]
    estimator: KindArg,
    #[arg(long, value_enum, default_value = "cm")]
    stat: StatArg,
    /// Bootstrap replicates.
    #[arg(long = "B", default_value_t = 199)]
    b: usize,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(value_enum)]
    experiment: ExperimentArg,
    #[arg(long)]
    true_family: Family,
    #[arg(long)]
    tau: f64,
    #[arg(long)]
    null_family: Option<Family>,
    #[arg(long, default_value_t = 150)]
    n: usize,
    #[arg(long, default_value_t = 200)]
    reps: usize,
    #[arg(long = "B", default_value_t = 199)]
    b: usize,
    /// Estimators, comma separated; defaults depend on the experiment.
    #[arg(long, value_enum, value_delimiter = ',')]
    estimators: Vec<KindArg>,
    /// Statistics, comma separated; defaults depend on the experiment.
    #[arg(long, value_enum, value_delimiter = ',')]
    stats: Vec<StatArg>,
    /// Fixed bandwidths for the sweep, comma separated.
    #[arg(long, value_delimiter = ',')]
    h_grid: Vec<f64>,
    #[arg(long)]
    output: PathBuf,
}

fn create(path: &PathBuf) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn estimate(args: &EstimateArgs) -> Result<()> {
    let data = harness::ingest_csv(&args.input)?;
    let variant = match args.variant {
        VariantArg::Shifted => PseudoVariant::Shifted,
        VariantArg::Centered => PseudoVariant::Centered,
    };
    let ps = pseudo_obs(&data, variant)?;
    let kind: EstimatorKind = args.estimator.into();
    let h = match (kind.uses_bandwidth(), args.h) {
        (false, _) => 0.0,
        (true, Some(h)) => h,
        (true, None) => select_auto(&ps, kind)?.h,
    };
    let est = Estimator::new(&ps, kind, h)?;
    let grid = EvalGrid::new(args.grid)?;
    let values = est.eval_grid(&grid);
    let mut w = csv::Writer::from_writer(create(&args.output)?);
    let csv_err = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["u", "v", "estimate"]).map_err(csv_err)?;
    for (row, &u) in values.iter().zip(grid.points()) {
        for (&c, &v) in row.iter().zip(grid.points()) {
            let c = if args.clamp { c.clamp(0.0, 1.0) } else { c };
            w.serialize((u, v, c)).map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn bandwidth(args: &BandwidthArgs) -> Result<()> {
    let data = harness::ingest_csv(&args.input)?;
    let ps = pseudo_obs(&data, PseudoVariant::Shifted)?;
    print_json(&select_auto(&ps, args.estimator.into())?)
}

fn gof(args: &GofArgs, seed: u64) -> Result<()> {
    let data = harness::ingest_csv(&args.input)?;
    let config = EstimatorConfig::new(args.estimator.into(), BandwidthChoice::Auto);
    print_json(&bootstrap_gof(&data, args.null, &config, args.stat.into(), args.b, seed)?)
}

fn simulate(args: &SimulateArgs, seed: u64) -> Result<()> {
    let kind = match args.experiment {
        ExperimentArg::Compare => ExperimentKind::EstimatorCompare,
        ExperimentArg::Sweep => ExperimentKind::FixedHSweep,
        ExperimentArg::GofTable => ExperimentKind::GofSizePower,
    };
    let mut plan = ExperimentPlan::new(kind, args.true_family, args.tau, seed);
    plan.null_family = args.null_family;
    plan.n = args.n;
    plan.reps = args.reps;
    plan.b = args.b;
    if !args.estimators.is_empty() {
        plan.estimators = args.estimators.iter().map(|&k| k.into()).collect();
    }
    if !args.stats.is_empty() {
        plan.stats = args.stats.iter().map(|&s| s.into()).collect();
    }
    if !args.h_grid.is_empty() {
        plan.h_grid = args.h_grid.clone();
    }
    let rows = harness::run(&plan)?;
    harness::write_csv(&rows, create(&args.output)?)?;
    let summary: Vec<_> = rows.iter().filter(|r| r.record == RecordKind::Summary).collect();
    print_json(&summary)
}

fn dispatch(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Estimate(a) => estimate(a),
        Command::Bandwidth(a) => bandwidth(a),
        Command::Gof(a) => gof(a, cli.seed.unwrap_or(0)),
        Command::Simulate(a) => {
            let seed = cli
                .seed
                .ok_or_else(|| Error::Input("simulate requires --seed".into()))?;
            simulate(a, seed)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build();
    let result = match pool {
        Ok(pool) => pool.install(|| dispatch(&cli)),
        Err(e) => Err(Error::Input(e.to_string())),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
