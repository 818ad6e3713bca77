use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use acsia::bound::{default_d_max, max_dof, AllocationProfile};
use acsia::channel::text::parse_channel;
use acsia::rates::DEFAULT_GRID_DB;
use acsia::sweep::{run_sweep, write_csv, write_jsonl, ChannelSource, SweepConfig, SweepTarget};
use acsia::verify::{
    alignment_residual, check_conditions, demonstrate_lemma2, independence_margin, ConditionReport, ConditionSet,
    IndependenceReport,
};
use acsia::{construct_special_channel, sample_channel, ComplexChannelMatrix, Error, Ratio, SchemeKind, SpecialChannel};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Environment variable naming the directory that sweep files go to when `--output` is absent.
const OUTPUT_DIR_ENV: &str = "ACSIA_OUTPUT_DIR";

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "acsia", version, about = "Interference alignment with asymmetric complex signaling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a scheme's conditions and rank properties on one channel.
    Verify(VerifyArgs),
    /// Sum-rate sweep over SNR and random trials, with a fitted DoF slope per trial.
    Sweep(SweepArgs),
    /// Exhaustive allocation bound for extensions 1..=s-max.
    Bound(BoundArgs),
    /// Show that a vector aligned at both undesired receivers falls into the interference
    /// span at its own receiver.
    DemoLemma2(DemoArgs),
}

#[derive(Args, Clone, Default)]
#[group(multiple = false)]
struct ChannelArgs {
    /// Sample the channel from this seed.
    #[arg(long)]
    channel_seed: Option<u64>,
    /// Use a named special channel (phase-example, plus-minus-one, all-ones, singular-N, acs-violating-N).
    #[arg(long)]
    special: Option<String>,
    /// Read the channel from a text file.
    #[arg(long)]
    channel_file: Option<PathBuf>,
}

impl ChannelArgs {
    fn is_set(&self) -> bool {
        self.channel_seed.is_some() || self.special.is_some() || self.channel_file.is_some()
    }

    fn load(&self, rx: usize, tx: usize) -> Result<ComplexChannelMatrix, String> {
        let ch = if let Some(name) = &self.special {
            let kind: SpecialChannel = name.parse().map_err(|e: Error| e.to_string())?;
            construct_special_channel(kind).map_err(|e| e.to_string())?
        } else if let Some(path) = &self.channel_file {
            let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            parse_channel(&text).map_err(|e| format!("{}: {e}", path.display()))?
        } else {
            sample_channel(self.channel_seed.unwrap_or(0), rx, tx).map_err(|e| e.to_string())?
        };
        ch.require_shape(rx, tx).map_err(|e| e.to_string())?;
        Ok(ch)
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    scheme: String,
    #[command(flatten)]
    channel: ChannelArgs,
    /// Seed for the scheme's random beamformer columns.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Jsonl,
    Csv,
}

#[derive(Args)]
struct SweepArgs {
    /// Scheme name, or `baseline` for the circularly symmetric per-symbol baseline.
    #[arg(long)]
    scheme: String,
    /// Fixed channel for every trial; random per-trial channels when absent.
    #[command(flatten)]
    channel: ChannelArgs,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    master_seed: u64,
    /// Comma-separated SNR grid in dB.
    #[arg(long, value_delimiter = ',')]
    snr_db: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value_t = Format::Jsonl)]
    format: Format,
    /// Output file. Defaults to a file in $ACSIA_OUTPUT_DIR, or stdout when that is unset.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Worker threads (defaults to all cores).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    s_max: u64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    s_min: u64,
}

#[derive(Args)]
struct DemoArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    #[arg(long, default_value_t = 3)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify(a) => run_verify(a),
        Command::Sweep(a) => run_sweep_cmd(a),
        Command::Bound(a) => run_bound(a),
        Command::DemoLemma2(a) => run_demo(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<(), String> {
    let text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    match writeln!(io::stdout(), "{text}") {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.to_string()),
        _ => Ok(()),
    }
}

#[derive(Serialize)]
struct VerifyReport {
    scheme: String,
    seed: u64,
    channel: ComplexChannelMatrix,
    conditions: ConditionReport,
    /// Present for 3-user channels; informational only.
    singularity: Option<ConditionReport>,
    build_error: Option<String>,
    alignment_residual: Option<f64>,
    independence: Option<IndependenceReport>,
    passed: bool,
}

fn run_verify(a: VerifyArgs) -> Result<bool, String> {
    let kind: SchemeKind = a.scheme.parse().map_err(|e: Error| e.to_string())?;
    let d = kind.descriptor();
    let channel = a.channel.load(d.num_rx, d.num_tx)?;
    let conditions = check_conditions(&channel, d.conditions).map_err(|e| e.to_string())?;
    let singularity = if d.conditions == ConditionSet::Singularity || (d.num_rx, d.num_tx) != (3, 3) {
        None
    } else {
        Some(check_conditions(&channel, ConditionSet::Singularity).map_err(|e| e.to_string())?)
    };
    let (build_error, residual, independence) = match kind.build(&channel, a.seed) {
        Ok(set) => (
            None,
            Some(alignment_residual(&set, &channel).map_err(|e| e.to_string())?),
            Some(independence_margin(&set, &channel).map_err(|e| e.to_string())?),
        ),
        Err(e) => (Some(e.to_string()), None, None),
    };
    let passed = conditions.passes()
        && build_error.is_none()
        && residual.is_some_and(|r| r <= 1e-10)
        && independence.as_ref().is_some_and(|r| r.passes());
    print_json(&VerifyReport {
        scheme: kind.to_string(),
        seed: a.seed,
        channel,
        conditions,
        singularity,
        build_error,
        alignment_residual: residual,
        independence,
        passed,
    })?;
    Ok(passed)
}

fn run_sweep_cmd(a: SweepArgs) -> Result<bool, String> {
    let target: SweepTarget = a.scheme.parse().map_err(|e: Error| e.to_string())?;
    let (rx, tx) = target.shape();
    let source = if a.channel.is_set() { ChannelSource::Fixed(a.channel.load(rx, tx)?) } else { ChannelSource::Random };
    let config = SweepConfig {
        target,
        source,
        grid_db: a.snr_db.unwrap_or_else(|| DEFAULT_GRID_DB.to_vec()),
        trials: a.trials,
        master_seed: a.master_seed,
        threads: a.threads,
    };
    let report = run_sweep(&config).map_err(|e| e.to_string())?;

    let ext = match a.format {
        Format::Jsonl => "jsonl",
        Format::Csv => "csv",
    };
    let path = a.output.or_else(|| {
        std::env::var_os(OUTPUT_DIR_ENV)
            .map(|dir| PathBuf::from(dir).join(format!("sweep-{}-{}.{ext}", config.target, config.master_seed)))
    });
    let mut buf = Vec::new();
    match a.format {
        Format::Jsonl => write_jsonl(&report.records, &mut buf),
        Format::Csv => write_csv(&report.records, &mut buf),
    }
    .map_err(|e| e.to_string())?;
    match &path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
            }
            fs::write(p, &buf).map_err(|e| format!("{}: {e}", p.display()))?;
        }
        None => io::stdout().write_all(&buf).map_err(|e| e.to_string())?,
    }

    let slopes = report.slopes();
    if !slopes.is_empty() {
        let min = slopes.iter().copied().fold(f64::INFINITY, f64::min);
        let max = slopes.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mean = slopes.iter().sum::<f64>() / slopes.len() as f64;
        eprintln!(
            "{}: {} trials, {} skipped, slope min {min:.4} mean {mean:.4} max {max:.4}",
            config.target,
            config.trials,
            report.skipped()
        );
    } else {
        eprintln!("{}: all {} trials skipped", config.target, config.trials);
    }
    if let Some(p) = path {
        eprintln!("wrote {}", p.display());
    }
    Ok(report.skipped() == 0)
}

#[derive(Serialize)]
struct BoundRow {
    s: usize,
    d_max: usize,
    best: String,
    best_value: f64,
    within_bound: bool,
    feasible_count: u64,
    argmax: Vec<String>,
    argmax_profiles: Vec<AllocationProfile>,
}

#[derive(Serialize)]
struct BoundReport {
    bound: String,
    rows: Vec<BoundRow>,
    overall_best: String,
    passed: bool,
}

fn run_bound(a: BoundArgs) -> Result<bool, String> {
    if a.s_min > a.s_max {
        return Err(format!("--s-min {} exceeds --s-max {}", a.s_min, a.s_max));
    }
    let limit = Ratio::new(6usize, 5);
    let mut rows = Vec::new();
    let mut overall = Ratio::new(0usize, 1);
    for s in a.s_min as usize..=a.s_max as usize {
        let r = max_dof(s, default_d_max(s)).map_err(|e| e.to_string())?;
        overall = overall.max(r.best);
        rows.push(BoundRow {
            s,
            d_max: r.d_max,
            best: format!("{}/{}", r.best.numer(), r.best.denom()),
            best_value: *r.best.numer() as f64 / *r.best.denom() as f64,
            within_bound: r.best <= limit,
            feasible_count: r.feasible_count,
            argmax: r.argmax.iter().map(|p| p.to_string()).collect(),
            argmax_profiles: r.argmax,
        });
    }
    let passed = rows.iter().all(|r| r.within_bound);
    print_json(&BoundReport {
        bound: "6/5".into(),
        rows,
        overall_best: format!("{}/{}", overall.numer(), overall.denom()),
        passed,
    })?;
    Ok(passed)
}

#[derive(Serialize)]
struct DemoReport {
    seed: u64,
    channel: ComplexChannelMatrix,
    demo: Option<acsia::verify::Lemma2Demo>,
    error: Option<String>,
    passed: bool,
}

fn run_demo(a: DemoArgs) -> Result<bool, String> {
    let mut channel_args = a.channel.clone();
    if !channel_args.is_set() {
        channel_args.channel_seed = Some(3);
    }
    let channel = channel_args.load(3, 3)?;
    let (demo, error) = match demonstrate_lemma2(&channel, a.seed) {
        Ok(d) => (Some(d), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let passed = demo.as_ref().is_some_and(|d| d.residual <= 1e-10 && d.projection_residual <= 1e-10);
    print_json(&DemoReport { seed: a.seed, channel, demo, error, passed })?;
    Ok(passed)
}
