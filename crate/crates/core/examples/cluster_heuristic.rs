//! The two-step cluster heuristic, step by step.
//!
//! Shows the cellular placement matching, the greedy clustering with its
//! FIFO queues, the per-(cluster, channel) admission weights, and the final
//! cluster-to-channel matching — then compares the achieved utility with
//! the optimal dynamic program and the semi-orthogonal baseline.
//!
//! ```text
//! cargo run --example cluster_heuristic
//! ```

use d2d_underlay::cluster::{
    cluster_channel_weight, greedy_cluster, solve_cluster, solve_semi_orthogonal,
};
use d2d_underlay::dp::solve_dp;
use d2d_underlay::model::{generate_scenario, CsiScenario, ScenarioParams};
use d2d_underlay::stats::StatsControl;
use d2d_underlay::utility::UtilityKind;

fn main() {
    let params = ScenarioParams {
        n_uplink_cellular: 2,
        n_downlink_cellular: 2,
        n_d2d: 5,
        m_uplink: 2,
        m_downlink: 2,
        ..ScenarioParams::default()
    };
    let scenario = generate_scenario(&params, 99).unwrap();
    let ctrl = StatsControl::default();
    let kind = UtilityKind::WeightedSumRateFullCsi;
    let csi = CsiScenario::Full;

    let clustering = greedy_cluster(&scenario, csi, kind, &ctrl).unwrap();
    println!("greedy clustering (insertion order, cellular first):");
    for (g, queue) in clustering.clusters.iter().enumerate() {
        println!("  cluster {g}: {queue:?}");
    }

    println!("\nadmission weights per (cluster, channel):");
    print!("{:>10}", "");
    for ch in 0..scenario.n_channels() {
        print!("{:>12}", format!("ch {ch}"));
    }
    println!();
    for (g, queue) in clustering.clusters.iter().enumerate() {
        print!("{:>10}", format!("cluster {g}"));
        for ch in 0..scenario.n_channels() {
            let (w, _) = cluster_channel_weight(&scenario, csi, ch, queue, kind, &ctrl).unwrap();
            match w {
                Some(v) => print!("{v:>12.4}"),
                None => print!("{:>12}", "-inf"),
            }
        }
        println!();
    }

    let cluster = solve_cluster(&scenario, csi, kind, &ctrl).unwrap();
    let semi = solve_semi_orthogonal(&scenario, csi, kind, &ctrl).unwrap();
    let dp = solve_dp(&scenario, csi, kind, &ctrl).unwrap();
    println!("\nachieved weighted sum-rate [bits/s/Hz]:");
    println!("  optimal dp       : {:.4}", dp.value);
    println!("  cluster heuristic: {:.4}  ({:.1}% of optimal)", cluster.value, 100.0 * cluster.value / dp.value);
    println!("  semi-orthogonal  : {:.4}  ({:.1}% of optimal)", semi.value, 100.0 * semi.value / dp.value);
    println!("\nfinal channels (cluster heuristic): {:?}", cluster.channel_of);
}
