//! Do D2D links prefer the uplink or the downlink spectrum?
//!
//! Counts active D2D links per band under the cluster solver at full and
//! reduced base-station power. With the BS at full power its downlink
//! transmissions are punishing interference for D2D receivers, so D2D
//! links crowd the uplink; lowering the BS power evens the split.
//!
//! ```text
//! cargo run --release --example uplink_preference
//! ```

use d2d_underlay::harness::{run_experiment, summarize, Algorithm, ExperimentConfig, GroupField};
use d2d_underlay::model::{CsiScenario, ScenarioParams};
use d2d_underlay::utility::UtilityKind;

fn main() {
    println!("{:>14} {:>12} {:>14} {:>12}", "bs power", "d2d uplink", "d2d downlink", "utility");
    for bs_power_dbm in [46.0, 40.0, 34.0, 30.0] {
        let cfg = ExperimentConfig {
            scenario: ScenarioParams {
                n_uplink_cellular: 4,
                n_downlink_cellular: 4,
                n_d2d: 8,
                m_uplink: 4,
                m_downlink: 4,
                bs_power_dbm,
                ..ScenarioParams::default()
            },
            drops: 200,
            base_seed: 60_606,
            algorithms: vec![Algorithm::Cluster],
            csi_scenarios: vec![CsiScenario::Full],
            objective: UtilityKind::WeightedSumRateFullCsi,
            measure_runtime: false,
        };
        let rows = run_experiment(&cfg).unwrap();
        let s = &summarize(&rows, &[GroupField::Algorithm]).unwrap()[0];
        println!(
            "{:>11} dBm {:>12.2} {:>14.2} {:>12.2}",
            bs_power_dbm, s.mean_d2d_uplink, s.mean_d2d_downlink, s.mean_utility
        );
    }
}
