//! How much is channel state information worth?
//!
//! Runs the optimal solver under full CSI and the four partial-CSI
//! scenarios on shared drops and prints the mean expected weighted
//! sum-rate per scenario. The spread shows which link classes' fading
//! reports matter: hiding the D2D signal fading (s2) or the D2D-to-BS
//! interference (s4) costs a lot; hiding the BS-to-D2D interference (s3)
//! costs almost nothing.
//!
//! ```text
//! cargo run --release --example csi_comparison
//! ```

use d2d_underlay::harness::{run_experiment, summarize, Algorithm, ExperimentConfig, GroupField};
use d2d_underlay::model::{CsiScenario, ScenarioParams};
use d2d_underlay::utility::UtilityKind;

fn main() {
    let cfg = ExperimentConfig {
        scenario: ScenarioParams {
            n_uplink_cellular: 3,
            n_downlink_cellular: 3,
            n_d2d: 6,
            m_uplink: 3,
            m_downlink: 3,
            ..ScenarioParams::default()
        },
        drops: 300,
        base_seed: 31_337,
        algorithms: vec![Algorithm::Dp],
        csi_scenarios: CsiScenario::ALL.to_vec(),
        objective: UtilityKind::ExpectedWeightedSumRate,
        measure_runtime: false,
    };
    println!(
        "optimal assignment, {} drops, {} links over {} channels\n",
        cfg.drops,
        cfg.scenario.n_links(),
        cfg.scenario.n_channels()
    );
    let rows = run_experiment(&cfg).unwrap();
    let summary = summarize(&rows, &[GroupField::Csi]).unwrap();

    println!(
        "{:>8} {:>14} {:>10} {:>12} {:>12}",
        "csi", "mean utility", "se", "active d2d", "d2d uplink"
    );
    for s in &summary {
        println!(
            "{:>8} {:>14.3} {:>10.3} {:>12.2} {:>12.2}",
            s.key[0], s.mean_utility, s.se_utility, s.mean_active_d2d, s.mean_d2d_uplink
        );
    }
    let mean = |name: &str| summary.iter().find(|s| s.key[0] == name).unwrap().mean_utility;
    println!("\ngaps to full CSI:");
    for name in ["s1", "s2", "s3", "s4"] {
        println!("  full - {name}: {:>7.3}", mean("full") - mean(name));
    }
}
