//! Optimal channel assignment on one random drop.
//!
//! Generates a small network, solves it with the stage/state dynamic
//! program, confirms the value against exhaustive search, and prints who
//! got which channel.
//!
//! ```text
//! cargo run --example optimal_assignment
//! ```

use d2d_underlay::dp::{solve_dp, solve_exhaustive, validate_assignment, Assignment};
use d2d_underlay::model::{generate_scenario, CsiScenario, LinkKind, Scenario, ScenarioParams};
use d2d_underlay::stats::StatsControl;
use d2d_underlay::utility::UtilityKind;

fn describe(scenario: &Scenario, assignment: &Assignment) {
    for link in &scenario.links {
        let kind = match link.kind {
            LinkKind::UplinkCellular => "uplink cellular",
            LinkKind::DownlinkCellular => "downlink cellular",
            LinkKind::D2d => "d2d",
        };
        match assignment.channel_of[link.id] {
            Some(ch) => {
                let band = format!("{:?}", scenario.channels[ch].band).to_lowercase();
                let sinr = scenario.realized_sinr(ch, link.id, &assignment.links_on(ch));
                println!(
                    "  link {:>2} ({kind:<17}) -> channel {ch} ({band:<8}) SINR {:>7.2} dB",
                    link.id,
                    10.0 * sinr.log10()
                );
            }
            None => println!("  link {:>2} ({kind:<17}) -> inactive", link.id),
        }
    }
}

fn main() {
    let params = ScenarioParams {
        n_uplink_cellular: 2,
        n_downlink_cellular: 1,
        n_d2d: 4,
        m_uplink: 2,
        m_downlink: 2,
        ..ScenarioParams::default()
    };
    let scenario = generate_scenario(&params, 2024).unwrap();
    let ctrl = StatsControl::default();
    let kind = UtilityKind::WeightedSumRateFullCsi;
    let csi = CsiScenario::Full;

    let dp = solve_dp(&scenario, csi, kind, &ctrl).unwrap();
    let brute = solve_exhaustive(&scenario, csi, kind, &ctrl).unwrap();
    validate_assignment(&scenario, csi, kind, &dp, &ctrl).unwrap();

    println!(
        "dynamic program: {:.6} bits/s/Hz   exhaustive: {:.6} bits/s/Hz   (diff {:.2e})",
        dp.value,
        brute.value,
        (dp.value - brute.value).abs()
    );
    println!("\noptimal assignment:");
    describe(&scenario, &dp);

    let (up, down) = dp.d2d_band_split(&scenario);
    println!(
        "\nactive D2D links: {} ({} on uplink channels, {} on downlink)",
        dp.active_d2d(&scenario),
        up,
        down
    );
}
