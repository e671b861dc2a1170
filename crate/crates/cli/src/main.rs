use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use owc_rsma::channel::{build_channel_matrix, normalize_channel, ChannelMatrix};
use owc_rsma::harness::{
    drop_seed, emit_chart, relative_gains, run_sweep, write_csv, ExperimentConfig, HarnessError,
    SweepKind, SweepResult,
};
use owc_rsma::rsma::{identity_fixture, rs_sum_rate};
use owc_rsma::scene::{default_ap_positions, sample_user_positions, Scene};
use owc_rsma::validate::run_checks;

const EXIT_FAILURE: u8 = 1;
const EXIT_IO: u8 = 3;

/// Rate-splitting simulator for laser-based optical wireless downlinks.
#[derive(Parser)]
#[command(name = "owc-rsma", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sum rate against transmit SNR on normalized channels.
    SweepSnr(SweepArgs),
    /// Sum rate against beam waist on physical channels at fixed power.
    SweepWaist(SweepArgs),
    /// Common, private and total rate of one channel at a given power split.
    Eval(EvalArgs),
    /// Checks the closed-form models against numerical oracles.
    Validate,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Flat `key = value` config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Disable shot noise (thermal noise only).
    #[arg(long)]
    no_shot_noise: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    experiment: ExperimentArgs,
    #[arg(long)]
    drops: Option<usize>,
    /// Output directory for the CSV table and SVG chart.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated subset of opt_rs, conv_rs, oma.
    #[arg(long)]
    schemes: Option<String>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct EvalArgs {
    /// Fraction of the total power given to the private messages.
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// Total transmit power; equals the SNR on normalized channels.
    #[arg(long, default_value_t = 10.0)]
    p_total: f64,
    /// Evaluate the normalized channel of this Monte-Carlo drop instead of
    /// the 2-user identity fixture.
    #[arg(long)]
    drop: Option<usize>,
    #[command(flatten)]
    experiment: ExperimentArgs,
}

fn load_config(kind: SweepKind, args: &ExperimentArgs) -> Result<ExperimentConfig, HarnessError> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::from_file(path, kind)?,
        None => ExperimentConfig::for_sweep(kind),
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if args.no_shot_noise {
        cfg.noise.include_shot = false;
    }
    Ok(cfg)
}

fn sweep(kind: SweepKind, args: &SweepArgs) -> Result<(), HarnessError> {
    let mut cfg = load_config(kind, &args.experiment)?;
    if let Some(drops) = args.drops {
        cfg.drops = drops;
    }
    if let Some(out) = &args.out {
        cfg.out_dir = out.clone();
    }
    if let Some(schemes) = &args.schemes {
        cfg.set("schemes", schemes)?;
    }
    if args.threads.is_some() {
        cfg.threads = args.threads;
    }
    cfg.validate()?;

    let result = run_sweep(&cfg)?;
    std::fs::create_dir_all(&cfg.out_dir).map_err(|e| HarnessError::io(&cfg.out_dir, e))?;
    let csv = cfg.out_dir.join(format!("{}.csv", kind.stem()));
    let svg = cfg.out_dir.join(format!("{}.svg", kind.stem()));
    write_csv(&result, &csv)?;
    emit_chart(&result, &svg)?;
    report(&result, &csv, &svg);
    Ok(())
}

fn report(result: &SweepResult, csv: &Path, svg: &Path) {
    let p = &result.provenance;
    println!(
        "config {} seed {} version {}",
        p.config_hash, p.seed, p.version
    );
    for row in &result.rows {
        println!(
            "{:<8} {} = {:<6} mean {:.4} bits/s/Hz  stderr {:.4}  drops {}",
            row.scheme.name(),
            result.kind.param(),
            row.value,
            row.mean,
            row.stderr,
            row.drops
        );
    }
    let pct = |v: Option<f64>| v.map_or_else(|| "n/a".to_string(), |x| format!("{x:+.1}%"));
    for g in relative_gains(result) {
        println!(
            "{} = {}: opt_rs vs conv_rs {}, conv_rs vs oma {}, opt_rs vs oma {}",
            result.kind.param(),
            g.value,
            pct(g.opt_over_conv_pct),
            pct(g.conv_over_oma_pct),
            pct(g.opt_over_oma_pct)
        );
    }
    println!("wrote {} and {}", csv.display(), svg.display());
}

fn drop_channel(cfg: &ExperimentConfig, index: usize) -> Result<ChannelMatrix, HarnessError> {
    cfg.validate()?;
    let aps = default_ap_positions(&cfg.room, cfg.ap_count)?;
    let users = sample_user_positions(drop_seed(cfg.seed, index), cfg.users, &cfg.room)?;
    let cm = build_channel_matrix(
        &Scene::new(cfg.room, aps, users),
        &cfg.adr,
        &cfg.vcsel,
        &cfg.noise,
    )?;
    Ok(normalize_channel(&cm)?)
}

fn eval(args: &EvalArgs) -> Result<(), HarnessError> {
    let cm = match args.drop {
        Some(index) => drop_channel(&load_config(SweepKind::Snr, &args.experiment)?, index)?,
        None => identity_fixture(),
    };
    let ev = rs_sum_rate(&cm, args.alpha, args.p_total)?;
    println!(
        "K = {}, L = {}, P_T = {}, alpha = {}",
        cm.users(),
        cm.aps(),
        args.p_total,
        args.alpha
    );
    println!("R_c  = {:.4} bits/s/Hz", ev.rate_common);
    println!("R_p  = {:.4} bits/s/Hz", ev.rate_private);
    println!("R_RS = {:.4} bits/s/Hz", ev.sum_rate);
    Ok(())
}

fn validate() -> bool {
    let mut ok = true;
    for check in run_checks() {
        println!(
            "{} {}: {}",
            if check.passed { "PASS" } else { "FAIL" },
            check.name,
            check.detail
        );
        ok &= check.passed;
    }
    ok
}

fn exit_code(e: &HarnessError) -> u8 {
    match e {
        HarnessError::Io { .. } => EXIT_IO,
        _ => EXIT_FAILURE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::SweepSnr(args) => sweep(SweepKind::Snr, args),
        Command::SweepWaist(args) => sweep(SweepKind::Waist, args),
        Command::Eval(args) => eval(args),
        Command::Validate => {
            return if validate() {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: validation failed");
                ExitCode::from(EXIT_FAILURE)
            };
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
