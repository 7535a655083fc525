//! Experiment CLI: runs regret experiments and budget sweeps, writing CSV,
//! SVG, and manifest files into an output directory.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use causal_bandits::harness::{
    run_experiment, sweep_c, AdversarySpec, ExperimentSpec, RegretBenchmark, RewardAccounting,
    SemSource,
};
use causal_bandits::output::{emit_run_outputs, emit_sweep_outputs};
use causal_bandits::policy::PolicyKind;

#[derive(Parser)]
#[command(
    name = "causal-bandits",
    about = "Causal bandit simulations on linear SEMs under budgeted model deviations",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a regret experiment and write regret_curves.{csv,svg}.
    Run(RunArgs),
    /// Sweep the deviation budget C and write regret_vs_C.{csv,svg}.
    SweepC(SweepArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Full experiment spec as a JSON file (other flags are ignored).
    #[arg(long)]
    spec: Option<PathBuf>,

    /// Named SEM preset (hierarchical, chain2).
    #[arg(long, default_value = "hierarchical")]
    preset: String,

    /// SEM specification file (overrides --preset).
    #[arg(long)]
    sem_file: Option<PathBuf>,

    /// Comma-separated policies: robust-lcb, linsem-ucb, ucb1.
    #[arg(long, default_value = "robust-lcb,linsem-ucb,ucb1", value_delimiter = ',')]
    algo: Vec<String>,

    /// Interaction horizon T.
    #[arg(long, default_value_t = 10_000)]
    horizon: usize,

    /// Independent repetitions to average over.
    #[arg(long, default_value_t = 20)]
    reps: usize,

    /// Master seed; repetition r uses split(seed, r).
    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Adversary kind: none or front-loaded.
    #[arg(long, default_value = "front-loaded")]
    adversary: String,

    /// Deviation schedule file (overrides --adversary/--budget-c).
    #[arg(long)]
    schedule: Option<PathBuf>,

    /// Aggregate deviation budget C.
    #[arg(long, default_value_t = 100.0)]
    budget_c: f64,

    /// Override δ in the confidence radius (default 1/(2NT)).
    #[arg(long)]
    delta_override: Option<f64>,

    /// Emit theory-bound overlay curves with this multiplicative scale.
    #[arg(long)]
    overlay_scale: Option<f64>,

    /// Regret benchmark: nominal (fixed a*) or oracle (tracks fluctuations).
    #[arg(long, default_value = "nominal")]
    regret: String,

    /// Reward accounting: analytic (expected under the round's model) or
    /// realized (sampled reward-node value).
    #[arg(long, default_value = "analytic")]
    reward_accounting: String,

    /// Record regret every k rounds (default: every round up to T = 20000,
    /// every 10 beyond).
    #[arg(long)]
    checkpoint_every: Option<usize>,

    /// Dump per-checkpoint estimator snapshots (LCB policies).
    #[arg(long, default_value_t = false)]
    dump_estimators: bool,

    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,

    /// Comma-separated deviation budgets to sweep.
    #[arg(long, default_value = "0,2,15,200,2000", value_delimiter = ',')]
    c_values: Vec<f64>,
}

fn build_spec(common: &CommonArgs) -> Result<ExperimentSpec> {
    if let Some(path) = &common.spec {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading spec file {}", path.display()))?;
        let spec: ExperimentSpec = serde_json::from_str(&text)
            .with_context(|| format!("parsing spec file {}", path.display()))?;
        return Ok(spec);
    }
    let sem = match &common.sem_file {
        Some(path) => SemSource::File(path.clone()),
        None => SemSource::Preset(common.preset.clone()),
    };
    let policies = common
        .algo
        .iter()
        .map(|s| PolicyKind::parse(s.trim()))
        .collect::<causal_bandits::Result<Vec<_>>>()?;
    let adversary = match &common.schedule {
        Some(path) => AdversarySpec::ScheduleFile(path.clone()),
        None => match common.adversary.as_str() {
            "none" => AdversarySpec::None,
            "front-loaded" => AdversarySpec::FrontLoaded { budget_c: common.budget_c },
            other => bail!("unknown adversary '{other}' (available: none, front-loaded)"),
        },
    };
    let regret_benchmark = match common.regret.as_str() {
        "nominal" => RegretBenchmark::NominalOptimum,
        "oracle" => RegretBenchmark::FluctuationAware,
        other => bail!("unknown regret benchmark '{other}' (available: nominal, oracle)"),
    };
    let reward_accounting = match common.reward_accounting.as_str() {
        "analytic" => RewardAccounting::Analytic,
        "realized" => RewardAccounting::Realized,
        other => bail!("unknown reward accounting '{other}' (available: analytic, realized)"),
    };
    Ok(ExperimentSpec {
        sem,
        adversary,
        policies,
        horizon: common.horizon,
        repetitions: common.reps,
        seed: common.seed,
        explicit_actions: None,
        checkpoint_every: common.checkpoint_every,
        delta_override: common.delta_override,
        overlay_scale: common.overlay_scale,
        regret_benchmark,
        reward_accounting,
        dump_estimators: common.dump_estimators,
    })
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => {
            let spec = build_spec(&args.common)?;
            let result = run_experiment(&spec).context("experiment failed")?;
            let paths = emit_run_outputs(&result, &spec, &args.common.out)
                .context("writing outputs failed")?;
            for curve in &result.curves {
                println!(
                    "{:<14} final mean cumulative regret {:>12.2} (stderr {:.2})",
                    curve.policy, curve.final_mean, curve.final_stderr
                );
            }
            for p in paths {
                println!("wrote {}", p.display());
            }
        }
        Command::SweepC(args) => {
            let spec = build_spec(&args.common)?;
            let sweep = sweep_c(&spec, &args.c_values).context("sweep failed")?;
            let paths = emit_sweep_outputs(&sweep, &spec, &args.common.out)
                .context("writing outputs failed")?;
            for row in &sweep.rows {
                println!(
                    "{:<14} C = {:>8.1}  final regret {:>12.2} (stderr {:.2})",
                    row.policy, row.budget_c, row.final_mean, row.final_stderr
                );
            }
            for p in paths {
                println!("wrote {}", p.display());
            }
        }
    }
    Ok(())
}
