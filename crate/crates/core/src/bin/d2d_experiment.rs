//! Experiment driver: run drop-based channel-assignment experiments and
//! write the results as CSV.
//!
//! Configuration comes from an optional config file plus command-line
//! overrides; flags win over the file. Exit codes: 0 ok, 2 configuration
//! error, 3 every drop infeasible, 4 instance over a solver capacity guard.

use clap::Parser;
use d2d_underlay::harness::{
    parse_config, rows_to_csv, run_experiment, summarize, summary_to_csv, Algorithm,
    ExperimentConfig, GroupField,
};
use d2d_underlay::model::CsiScenario;
use d2d_underlay::utility::UtilityKind;
use d2d_underlay::Error;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "d2d-experiment",
    about = "Channel assignment experiments for D2D-underlaid cellular networks"
)]
struct Cli {
    /// Configuration file (flat `key = value`; see README for the grammar).
    #[arg(long)]
    config: Option<PathBuf>,

    /// Number of independent drops.
    #[arg(long)]
    drops: Option<usize>,

    /// Base seed; per-drop seeds are derived deterministically.
    #[arg(long)]
    seed: Option<u64>,

    /// Comma-separated algorithms: dp, cluster, exhaustive, semi_orthogonal.
    #[arg(long, value_delimiter = ',')]
    algorithms: Option<Vec<String>>,

    /// Comma-separated CSI scenarios: full, s1, s2, s3, s4.
    #[arg(long, value_delimiter = ',')]
    csi: Option<Vec<String>>,

    /// Objective: ewsr, wsr, or access.
    #[arg(long)]
    objective: Option<String>,

    /// Output CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Also write a per-(algorithm, csi) summary CSV to this path.
    #[arg(long)]
    summary_out: Option<PathBuf>,

    /// Number of D2D links.
    #[arg(long)]
    d2d_links: Option<usize>,

    /// Uplink cellular link count.
    #[arg(long)]
    uplink_cellular: Option<usize>,

    /// Downlink cellular link count.
    #[arg(long)]
    downlink_cellular: Option<usize>,

    /// Uplink channel count.
    #[arg(long)]
    uplink_channels: Option<usize>,

    /// Downlink channel count.
    #[arg(long)]
    downlink_channels: Option<usize>,

    /// Total base-station transmit power in dBm.
    #[arg(long)]
    bs_power_dbm: Option<f64>,

    /// Record wall-clock runtimes (output is then no longer byte-stable).
    #[arg(long)]
    measure_runtime: bool,
}

fn build_config(cli: &Cli) -> Result<ExperimentConfig, Error> {
    let mut cfg = match &cli.config {
        Some(path) => parse_config(&std::fs::read_to_string(path)?)?,
        None => ExperimentConfig::default(),
    };
    if let Some(d) = cli.drops {
        cfg.drops = d;
    }
    if let Some(s) = cli.seed {
        cfg.base_seed = s;
    }
    if let Some(algos) = &cli.algorithms {
        cfg.algorithms = algos.iter().map(|a| Algorithm::parse(a)).collect::<Result<_, _>>()?;
    }
    if let Some(csi) = &cli.csi {
        cfg.csi_scenarios = csi.iter().map(|c| CsiScenario::parse(c)).collect::<Result<_, _>>()?;
    }
    if let Some(o) = &cli.objective {
        cfg.objective = UtilityKind::parse(o)?;
    }
    if let Some(n) = cli.d2d_links {
        cfg.scenario.n_d2d = n;
    }
    if let Some(n) = cli.uplink_cellular {
        cfg.scenario.n_uplink_cellular = n;
    }
    if let Some(n) = cli.downlink_cellular {
        cfg.scenario.n_downlink_cellular = n;
    }
    if let Some(n) = cli.uplink_channels {
        cfg.scenario.m_uplink = n;
    }
    if let Some(n) = cli.downlink_channels {
        cfg.scenario.m_downlink = n;
    }
    if let Some(p) = cli.bs_power_dbm {
        cfg.scenario.bs_power_dbm = p;
    }
    if cli.measure_runtime {
        cfg.measure_runtime = true;
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<(), Error> {
    let cfg = build_config(cli)?;
    let rows = run_experiment(&cfg)?;
    let csv = rows_to_csv(&rows);
    match &cli.out {
        Some(path) => std::fs::write(path, csv.as_bytes())?,
        None => print!("{csv}"),
    }
    if let Some(path) = &cli.summary_out {
        let summary = summarize(&rows, &[GroupField::Algorithm, GroupField::Csi])?;
        std::fs::write(path, summary_to_csv(&summary, &[GroupField::Algorithm, GroupField::Csi]))?;
    }
    if rows.iter().all(|r| !r.feasible) {
        return Err(Error::Infeasible("every drop was infeasible".into()));
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
