//! Per-channel utility functions and QoS feasibility for a set of links
//! sharing a channel.

use crate::error::{Error, Result};
use crate::model::{CsiScenario, LinkId, Scenario};
use crate::stats::{self, Interferer, InterferenceContext, StatsControl};
use std::collections::HashMap;

/// Which network utility a channel contributes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UtilityKind {
    /// Σ w_j · E[log2(1+SINR) | success] · p_success, valid under any CSI.
    ExpectedWeightedSumRate,
    /// Σ w_j · log2(1+SINR) with deterministic SINRs; full CSI only.
    WeightedSumRateFullCsi,
    /// Fraction of the network's links active with SINR above threshold;
    /// full CSI only.
    AccessRate,
}

impl UtilityKind {
    pub fn name(self) -> &'static str {
        match self {
            UtilityKind::ExpectedWeightedSumRate => "ewsr",
            UtilityKind::WeightedSumRateFullCsi => "wsr",
            UtilityKind::AccessRate => "access",
        }
    }

    pub fn parse(s: &str) -> Result<UtilityKind> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ewsr" => Ok(UtilityKind::ExpectedWeightedSumRate),
            "wsr" => Ok(UtilityKind::WeightedSumRateFullCsi),
            "access" => Ok(UtilityKind::AccessRate),
            other => Err(Error::Config(format!("unknown objective '{other}'"))),
        }
    }

    fn requires_full_csi(self) -> bool {
        !matches!(self, UtilityKind::ExpectedWeightedSumRate)
    }
}

impl std::fmt::Display for UtilityKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Statistics of one member of a channel's link set.
#[derive(Debug, Clone, Copy)]
pub struct PerLinkStats {
    pub link: LinkId,
    pub success_prob: f64,
    pub expected_rate: f64,
}

/// Result of evaluating one channel's link set.
#[derive(Debug, Clone)]
pub struct ChannelEvaluation {
    pub utility: f64,
    pub per_link: Vec<PerLinkStats>,
    /// True iff every member meets its success-probability floor.
    pub feasible: bool,
}

/// Build the interference context of `link` on `channel` when sharing with
/// `members` (which may include `link` itself). Interferers whose fading the
/// BS knows enter ν deterministically; the rest become the unknown set.
pub fn build_context(
    scenario: &Scenario,
    csi: CsiScenario,
    channel: usize,
    link: LinkId,
    members: &[LinkId],
) -> InterferenceContext {
    let vis = csi.visibility();
    let rx_kind = scenario.links[link].kind;
    let mut nu = scenario.noise_power;
    let mut unknown = Vec::new();
    for &z in members {
        if z == link {
            continue;
        }
        if vis.knows_interference(scenario.links[z].kind, rx_kind) {
            nu += scenario.lambda(z, link) * scenario.beta(channel, z, link);
        } else {
            unknown.push(Interferer {
                scale: scenario.lambda(z, link),
                shape: scenario.shape(z, link),
            });
        }
    }
    let signal_beta = if vis.knows_signal(rx_kind) {
        Some(scenario.beta(channel, link, link))
    } else {
        None
    };
    InterferenceContext {
        nu,
        signal_scale: scenario.lambda(link, link),
        signal_beta,
        signal_fading: scenario.signal_fading[link],
        unknown_interferers: unknown,
        sinr_min: scenario.links[link].sinr_min,
    }
}

/// Evaluate `members` sharing `channel` under `kind`.
///
/// The empty set is feasible with utility 0. For the access rate the
/// normalizer is the scenario's total link count, not the member count.
pub fn evaluate_channel(
    scenario: &Scenario,
    csi: CsiScenario,
    channel: usize,
    members: &[LinkId],
    kind: UtilityKind,
    ctrl: &StatsControl,
) -> Result<ChannelEvaluation> {
    if kind.requires_full_csi() && csi != CsiScenario::Full {
        return Err(Error::Unsupported(format!(
            "{kind} is only defined under full CSI, got {csi}"
        )));
    }
    let mut per_link = Vec::with_capacity(members.len());
    let mut utility = 0.0;
    let mut feasible = true;
    for &j in members {
        let ctx = build_context(scenario, csi, channel, j, members);
        let st = stats::link_stats(&ctx, ctrl)?;
        feasible &= st.success_prob >= scenario.links[j].succ_prob_min;
        match kind {
            UtilityKind::ExpectedWeightedSumRate | UtilityKind::WeightedSumRateFullCsi => {
                utility += scenario.links[j].weight * st.expected_rate;
            }
            UtilityKind::AccessRate => {
                if st.success_prob >= 0.5 {
                    // indicator under full CSI: p is exactly 0 or 1
                    utility += 1.0 / scenario.n_links() as f64;
                }
            }
        }
        per_link.push(PerLinkStats {
            link: j,
            success_prob: st.success_prob,
            expected_rate: st.expected_rate,
        });
    }
    Ok(ChannelEvaluation { utility, per_link, feasible })
}

/// True iff every member meets its success-probability floor on `channel`.
pub fn qos_feasible(
    scenario: &Scenario,
    csi: CsiScenario,
    channel: usize,
    members: &[LinkId],
    ctrl: &StatsControl,
) -> Result<bool> {
    for &j in members {
        let ctx = build_context(scenario, csi, channel, j, members);
        let p = stats::success_probability(&ctx, ctrl)?;
        if p < scenario.links[j].succ_prob_min {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Memoizing wrapper used by the solvers: caches `(utility, feasible)` per
/// (channel, member bitmask). Member sets are encoded as bitmasks over link
/// ids, which also makes the evaluation permutation-invariant by
/// construction.
pub struct ChannelEvaluator<'a> {
    pub scenario: &'a Scenario,
    pub csi: CsiScenario,
    pub kind: UtilityKind,
    pub ctrl: StatsControl,
    cache: Vec<HashMap<u64, (f64, bool)>>,
}

impl<'a> ChannelEvaluator<'a> {
    pub fn new(
        scenario: &'a Scenario,
        csi: CsiScenario,
        kind: UtilityKind,
        ctrl: &StatsControl,
    ) -> Result<ChannelEvaluator<'a>> {
        if scenario.n_links() > 64 {
            return Err(Error::Capacity(format!(
                "{} links exceed the 64-link bitmask limit",
                scenario.n_links()
            )));
        }
        if kind.requires_full_csi() && csi != CsiScenario::Full {
            return Err(Error::Unsupported(format!(
                "{kind} is only defined under full CSI, got {csi}"
            )));
        }
        Ok(ChannelEvaluator {
            scenario,
            csi,
            kind,
            ctrl: *ctrl,
            cache: vec![HashMap::new(); scenario.n_channels()],
        })
    }

    pub fn members_of(mask: u64) -> Vec<LinkId> {
        let mut v = Vec::with_capacity(mask.count_ones() as usize);
        let mut m = mask;
        while m != 0 {
            let id = m.trailing_zeros() as usize;
            v.push(id);
            m &= m - 1;
        }
        v
    }

    /// Utility and joint QoS feasibility of the member set `mask` on
    /// `channel`.
    pub fn evaluate(&mut self, channel: usize, mask: u64) -> Result<(f64, bool)> {
        if let Some(&hit) = self.cache[channel].get(&mask) {
            return Ok(hit);
        }
        let members = Self::members_of(mask);
        let eval =
            evaluate_channel(self.scenario, self.csi, channel, &members, self.kind, &self.ctrl)?;
        let out = (eval.utility, eval.feasible);
        self.cache[channel].insert(mask, out);
        Ok(out)
    }
}
