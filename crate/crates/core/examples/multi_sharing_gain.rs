//! The value of letting several D2D links share one channel.
//!
//! Sweeps the number of D2D links and compares the cluster heuristic
//! (unlimited sharing) with the semi-orthogonal baseline (at most one D2D
//! link per channel). The gap widens as the cell gets denser.
//!
//! ```text
//! cargo run --release --example multi_sharing_gain
//! ```

use d2d_underlay::harness::{run_experiment, summarize, Algorithm, ExperimentConfig, GroupField};
use d2d_underlay::model::{CsiScenario, ScenarioParams};
use d2d_underlay::utility::UtilityKind;

fn main() {
    println!(
        "{:>6} {:>14} {:>18} {:>8}",
        "n_d2d", "cluster", "semi-orthogonal", "gap"
    );
    for n_d2d in [2usize, 4, 6, 8, 12] {
        let cfg = ExperimentConfig {
            scenario: ScenarioParams {
                n_uplink_cellular: 4,
                n_downlink_cellular: 4,
                n_d2d,
                m_uplink: 4,
                m_downlink: 4,
                ..ScenarioParams::default()
            },
            drops: 200,
            base_seed: 70_707,
            algorithms: vec![Algorithm::Cluster, Algorithm::SemiOrthogonal],
            csi_scenarios: vec![CsiScenario::Full],
            objective: UtilityKind::WeightedSumRateFullCsi,
            measure_runtime: false,
        };
        let rows = run_experiment(&cfg).unwrap();
        let summary = summarize(&rows, &[GroupField::Algorithm]).unwrap();
        let mean = |name: &str| summary.iter().find(|s| s.key[0] == name).unwrap().mean_utility;
        let (cluster, semi) = (mean("cluster"), mean("semi_orthogonal"));
        println!(
            "{:>6} {:>14.2} {:>18.2} {:>8.2}",
            n_d2d,
            cluster,
            semi,
            cluster - semi
        );
    }
}
