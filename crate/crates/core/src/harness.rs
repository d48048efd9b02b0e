//! Drop-based experiments: generate scenarios, run solvers under several
//! CSI assumptions, and serialize results as CSV.
//!
//! Reproducibility contract: a run is a pure function of the configuration.
//! Per-drop seeds are derived from the base seed by a fixed splitting rule
//! ([`drop_seed`]), so adding or removing algorithms and CSI scenarios never
//! perturbs scenario generation, and drops can execute in parallel while the
//! output order stays (drop, algorithm, csi). Two runs of the same
//! configuration produce byte-identical CSV; for that reason `runtime_ms`
//! is recorded as 0 unless `measure_runtime` is set (wall-clock timings and
//! byte-stable output are mutually exclusive).

use crate::cluster::{solve_cluster, solve_semi_orthogonal};
use crate::dp::{solve_dp, solve_exhaustive, validate_assignment};
use crate::error::{Error, Result};
use crate::model::{generate_scenario, CsiScenario, FadingSpec, Scenario, ScenarioParams};
use crate::stats::StatsControl;
use crate::utility::UtilityKind;
use rayon::prelude::*;
use std::time::Instant;

/// Channel-assignment algorithms the harness can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Dp,
    Cluster,
    Exhaustive,
    SemiOrthogonal,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Dp => "dp",
            Algorithm::Cluster => "cluster",
            Algorithm::Exhaustive => "exhaustive",
            Algorithm::SemiOrthogonal => "semi_orthogonal",
        }
    }

    pub fn parse(s: &str) -> Result<Algorithm> {
        match s.trim().to_ascii_lowercase().as_str() {
            "dp" => Ok(Algorithm::Dp),
            "cluster" => Ok(Algorithm::Cluster),
            "exhaustive" => Ok(Algorithm::Exhaustive),
            "semi_orthogonal" | "semi-orthogonal" => Ok(Algorithm::SemiOrthogonal),
            other => Err(Error::Config(format!("unknown algorithm '{other}'"))),
        }
    }

    pub fn solve(
        self,
        scenario: &Scenario,
        csi: CsiScenario,
        kind: UtilityKind,
        ctrl: &StatsControl,
    ) -> Result<crate::dp::Assignment> {
        match self {
            Algorithm::Dp => solve_dp(scenario, csi, kind, ctrl),
            Algorithm::Cluster => solve_cluster(scenario, csi, kind, ctrl),
            Algorithm::Exhaustive => solve_exhaustive(scenario, csi, kind, ctrl),
            Algorithm::SemiOrthogonal => solve_semi_orthogonal(scenario, csi, kind, ctrl),
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A complete experiment description.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub scenario: ScenarioParams,
    pub drops: usize,
    pub base_seed: u64,
    pub algorithms: Vec<Algorithm>,
    pub csi_scenarios: Vec<CsiScenario>,
    pub objective: UtilityKind,
    /// Record wall-clock runtimes (breaks byte-identical output).
    pub measure_runtime: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            scenario: ScenarioParams::default(),
            drops: 100,
            base_seed: 1,
            algorithms: vec![Algorithm::Cluster],
            csi_scenarios: vec![CsiScenario::Full],
            objective: UtilityKind::ExpectedWeightedSumRate,
            measure_runtime: false,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        if self.drops == 0 {
            return Err(Error::Config("drops must be positive".into()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::Config("at least one algorithm is required".into()));
        }
        if self.csi_scenarios.is_empty() {
            return Err(Error::Config("at least one CSI scenario is required".into()));
        }
        if self.objective != UtilityKind::ExpectedWeightedSumRate
            && self.csi_scenarios.iter().any(|&c| c != CsiScenario::Full)
        {
            return Err(Error::Config(format!(
                "objective '{}' is only defined under full CSI",
                self.objective
            )));
        }
        Ok(())
    }
}

/// One output record: one (drop, algorithm, CSI) combination.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub drop_id: usize,
    pub seed: u64,
    pub algorithm: Algorithm,
    pub csi_scenario: CsiScenario,
    pub objective: UtilityKind,
    pub utility: f64,
    pub n_active_d2d: usize,
    pub n_d2d_uplink: usize,
    pub n_d2d_downlink: usize,
    pub feasible: bool,
    pub runtime_ms: f64,
}

impl ResultRow {
    pub const CSV_HEADER: &'static str = "drop_id,seed,algorithm,csi_scenario,objective,utility,\
                                          n_active_d2d,n_d2d_uplink,n_d2d_downlink,feasible,runtime_ms";

    fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.drop_id,
            self.seed,
            self.algorithm,
            self.csi_scenario,
            self.objective,
            fmt_sig9(self.utility),
            self.n_active_d2d,
            self.n_d2d_uplink,
            self.n_d2d_downlink,
            self.feasible,
            fmt_sig9(self.runtime_ms),
        )
    }
}

/// Floats are written with 9 significant digits in scientific notation so
/// output bytes do not depend on locale or formatting quirks.
fn fmt_sig9(x: f64) -> String {
    format!("{x:.8e}")
}

/// Serialize rows as CSV (header row, LF line endings, UTF-8).
pub fn rows_to_csv(rows: &[ResultRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(ResultRow::CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.to_csv());
        out.push('\n');
    }
    out
}

const SPLITMIX_GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(SPLITMIX_GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for drop `drop` of an experiment with `base` seed:
/// `splitmix64(base XOR (drop+1)·0x9E3779B97F4A7C15)`. Depends on nothing
/// but `(base, drop)`.
pub fn drop_seed(base: u64, drop: usize) -> u64 {
    splitmix64(base ^ (drop as u64 + 1).wrapping_mul(SPLITMIX_GOLDEN))
}

fn run_one(
    scenario: &Scenario,
    drop_id: usize,
    seed: u64,
    algorithm: Algorithm,
    csi: CsiScenario,
    cfg: &ExperimentConfig,
    ctrl: &StatsControl,
) -> Result<ResultRow> {
    let started = Instant::now();
    let outcome = algorithm.solve(scenario, csi, cfg.objective, ctrl);
    let runtime_ms = if cfg.measure_runtime {
        started.elapsed().as_secs_f64() * 1e3
    } else {
        0.0
    };
    let base = ResultRow {
        drop_id,
        seed,
        algorithm,
        csi_scenario: csi,
        objective: cfg.objective,
        utility: 0.0,
        n_active_d2d: 0,
        n_d2d_uplink: 0,
        n_d2d_downlink: 0,
        feasible: false,
        runtime_ms,
    };
    match outcome {
        Ok(assignment) => {
            // every emitted assignment is re-validated; a failure here is a
            // solver bug and aborts the experiment with diagnostics
            validate_assignment(scenario, csi, cfg.objective, &assignment, ctrl).map_err(|e| {
                Error::Argument(format!(
                    "drop {drop_id} {algorithm}/{csi}: emitted assignment failed validation: {e}"
                ))
            })?;
            let (up, down) = assignment.d2d_band_split(scenario);
            Ok(ResultRow {
                utility: assignment.value,
                n_active_d2d: assignment.active_d2d(scenario),
                n_d2d_uplink: up,
                n_d2d_downlink: down,
                feasible: true,
                ..base
            })
        }
        Err(Error::Infeasible(_)) => Ok(base),
        Err(e) => Err(e),
    }
}

/// Run the whole experiment. Drops execute in parallel; each drop generates
/// its scenario once and feeds it to every (algorithm, CSI) pair, so the
/// comparisons are paired. Rows come back ordered by (drop, algorithm, csi).
///
/// Infeasible drops are recorded with `feasible = false` and zero utility;
/// any other solver error aborts the run.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let ctrl = StatsControl::default();
    let per_drop: Vec<Result<Vec<ResultRow>>> = (0..cfg.drops)
        .into_par_iter()
        .map(|drop_id| {
            let seed = drop_seed(cfg.base_seed, drop_id);
            let scenario = generate_scenario(&cfg.scenario, seed)?;
            let mut rows = Vec::with_capacity(cfg.algorithms.len() * cfg.csi_scenarios.len());
            for &algorithm in &cfg.algorithms {
                for &csi in &cfg.csi_scenarios {
                    rows.push(run_one(&scenario, drop_id, seed, algorithm, csi, cfg, &ctrl)?);
                }
            }
            Ok(rows)
        })
        .collect();
    let mut rows = Vec::with_capacity(cfg.drops * cfg.algorithms.len() * cfg.csi_scenarios.len());
    for drop_rows in per_drop {
        rows.extend(drop_rows?);
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

/// Fields a summary can group on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupField {
    Algorithm,
    Csi,
    Objective,
}

/// Group-wise aggregate of result rows.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub key: Vec<String>,
    pub n: usize,
    pub mean_utility: f64,
    pub se_utility: f64,
    pub mean_active_d2d: f64,
    pub mean_d2d_uplink: f64,
    pub mean_d2d_downlink: f64,
    pub feasible_fraction: f64,
}

/// Group rows by the requested fields and report per-group means with
/// standard errors, sorted by group key.
pub fn summarize(rows: &[ResultRow], group_by: &[GroupField]) -> Result<Vec<SummaryRow>> {
    if rows.is_empty() {
        return Err(Error::Argument("summarize needs at least one row".into()));
    }
    let key_of = |r: &ResultRow| -> Vec<String> {
        group_by
            .iter()
            .map(|f| match f {
                GroupField::Algorithm => r.algorithm.to_string(),
                GroupField::Csi => r.csi_scenario.to_string(),
                GroupField::Objective => r.objective.to_string(),
            })
            .collect()
    };
    let mut groups: Vec<(Vec<String>, Vec<&ResultRow>)> = Vec::new();
    for row in rows {
        let key = key_of(row);
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, members)) => members.push(row),
            None => groups.push((key, vec![row])),
        }
    }
    groups.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out = Vec::with_capacity(groups.len());
    for (key, members) in groups {
        let n = members.len();
        let nf = n as f64;
        let mean = |f: &dyn Fn(&ResultRow) -> f64| members.iter().map(|r| f(r)).sum::<f64>() / nf;
        let mean_utility = mean(&|r| r.utility);
        let se_utility = if n < 2 {
            0.0
        } else {
            let var = members
                .iter()
                .map(|r| (r.utility - mean_utility).powi(2))
                .sum::<f64>()
                / (nf - 1.0);
            (var / nf).sqrt()
        };
        out.push(SummaryRow {
            key,
            n,
            mean_utility,
            se_utility,
            mean_active_d2d: mean(&|r| r.n_active_d2d as f64),
            mean_d2d_uplink: mean(&|r| r.n_d2d_uplink as f64),
            mean_d2d_downlink: mean(&|r| r.n_d2d_downlink as f64),
            feasible_fraction: mean(&|r| if r.feasible { 1.0 } else { 0.0 }),
        });
    }
    Ok(out)
}

/// Serialize a summary as CSV.
pub fn summary_to_csv(summary: &[SummaryRow], group_by: &[GroupField]) -> String {
    let mut out = String::new();
    for f in group_by {
        out.push_str(match f {
            GroupField::Algorithm => "algorithm,",
            GroupField::Csi => "csi_scenario,",
            GroupField::Objective => "objective,",
        });
    }
    out.push_str(
        "n,mean_utility,se_utility,mean_active_d2d,mean_d2d_uplink,mean_d2d_downlink,feasible_fraction\n",
    );
    for row in summary {
        for k in &row.key {
            out.push_str(k);
            out.push(',');
        }
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            row.n,
            fmt_sig9(row.mean_utility),
            fmt_sig9(row.se_utility),
            fmt_sig9(row.mean_active_d2d),
            fmt_sig9(row.mean_d2d_uplink),
            fmt_sig9(row.mean_d2d_downlink),
            fmt_sig9(row.feasible_fraction),
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// Configuration file
// ---------------------------------------------------------------------------

/// Parse a flat `key = value` configuration (dotted section keys, `#`
/// comments) on top of the defaults. The full key list is documented in the
/// repository README.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!("line {}: expected 'key = value', got '{raw}'", lineno + 1))
        })?;
        apply_config_key(&mut cfg, key.trim(), value.trim()).map_err(|e| {
            let msg = match e {
                Error::Config(m) => m,
                other => other.to_string(),
            };
            Error::Config(format!("line {}: {msg}", lineno + 1))
        })?;
    }
    Ok(cfg)
}

fn parse_fading(value: &str) -> Result<FadingSpec> {
    let lower = value.to_ascii_lowercase();
    if lower == "rayleigh" {
        return Ok(FadingSpec::RAYLEIGH);
    }
    if let Some(m) = lower.strip_prefix("nakagami:") {
        let m: f64 = m.parse().map_err(|_| Error::Config(format!("bad Nakagami shape '{m}'")))?;
        return Ok(FadingSpec::Nakagami { m });
    }
    if let Some(k) = lower.strip_prefix("ricean:") {
        // K-factor given in dB
        let k_db: f64 =
            k.parse().map_err(|_| Error::Config(format!("bad Ricean K-factor '{k}'")))?;
        return Ok(FadingSpec::Ricean { k_factor: 10f64.powf(k_db / 10.0) });
    }
    Err(Error::Config(format!(
        "unknown fading spec '{value}' (expected rayleigh, nakagami:<m>, or ricean:<k_db>)"
    )))
}

fn parse_list<T, F: Fn(&str) -> Result<T>>(value: &str, f: F) -> Result<Vec<T>> {
    value.split(',').filter(|s| !s.trim().is_empty()).map(|s| f(s.trim())).collect()
}

/// Apply one `key = value` setting to the configuration.
pub fn apply_config_key(cfg: &mut ExperimentConfig, key: &str, value: &str) -> Result<()> {
    let num = |v: &str| -> Result<f64> {
        v.parse().map_err(|_| Error::Config(format!("'{v}' is not a number")))
    };
    let int = |v: &str| -> Result<usize> {
        v.parse().map_err(|_| Error::Config(format!("'{v}' is not a nonnegative integer")))
    };
    let s = &mut cfg.scenario;
    match key {
        "scenario.cell_radius_m" => s.cell_radius_m = num(value)?,
        "scenario.group_radius_m" => s.group_radius_m = num(value)?,
        "scenario.uplink_cellular_links" => s.n_uplink_cellular = int(value)?,
        "scenario.downlink_cellular_links" => s.n_downlink_cellular = int(value)?,
        "scenario.d2d_links" => s.n_d2d = int(value)?,
        "scenario.uplink_channels" => s.m_uplink = int(value)?,
        "scenario.downlink_channels" => s.m_downlink = int(value)?,
        "scenario.ue_power_dbm" => s.ue_power_dbm = num(value)?,
        "scenario.d2d_power_dbm" => s.d2d_power_dbm = num(value)?,
        "scenario.bs_power_dbm" => s.bs_power_dbm = num(value)?,
        "scenario.noise_dbm" => s.noise_dbm = num(value)?,
        "scenario.sinr_min_db" => s.sinr_min_db = num(value)?,
        "scenario.succ_prob_min" => s.succ_prob_min = num(value)?,
        "scenario.shadowing_std_db" => s.shadowing_std_db = num(value)?,
        "scenario.link_weight" => s.link_weight = num(value)?,
        "scenario.cellular_fading" => s.cellular_fading = parse_fading(value)?,
        "scenario.d2d_fading" => s.d2d_fading = parse_fading(value)?,
        "scenario.interference_shape" => s.interference_shape = num(value)?,
        "run.drops" => cfg.drops = int(value)?,
        "run.seed" => {
            cfg.base_seed =
                value.parse().map_err(|_| Error::Config(format!("'{value}' is not a u64")))?
        }
        "run.algorithms" => cfg.algorithms = parse_list(value, Algorithm::parse)?,
        "run.csi" => cfg.csi_scenarios = parse_list(value, CsiScenario::parse)?,
        "run.objective" => cfg.objective = UtilityKind::parse(value)?,
        "run.measure_runtime" => {
            cfg.measure_runtime = match value.to_ascii_lowercase().as_str() {
                "true" | "1" | "yes" => true,
                "false" | "0" | "no" => false,
                other => return Err(Error::Config(format!("'{other}' is not a boolean"))),
            }
        }
        other => return Err(Error::Config(format!("unknown configuration key '{other}'"))),
    }
    Ok(())
}
