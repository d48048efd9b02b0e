//! Optimal channel assignment.
//!
//! The solver walks one stage per channel; the state at stage k is the set
//! of links that channels 1..k must still serve. A stage picks the set L_k
//! sharing channel k subject to: joint QoS on that channel, at most one
//! cellular member, band rules for cellular members, and a forcing rule —
//! when the remaining same-band channels are no more numerous than the
//! state's same-band cellular links, channel k must carry one of them. The
//! last stage is evaluated only at the full link set.
//!
//! Worst-case time is exponential (each stage enumerates subsets of
//! subsets, about 3^N state/subset pairs), so instances are guarded at
//! [`MAX_DP_LINKS`] links. Only two value tables live at once; the chosen
//! subset per (stage, state) is kept for reconstruction.

use crate::error::{Error, Result};
use crate::model::{Band, CsiScenario, LinkId, Scenario};
use crate::stats::StatsControl;
use crate::utility::{ChannelEvaluator, UtilityKind};

/// State-space guard for [`solve_dp`].
pub const MAX_DP_LINKS: usize = 20;

/// Work guard for [`solve_exhaustive`]: cellular arrangements times D2D
/// placements must not exceed this.
pub const MAX_EXHAUSTIVE_OPS: u64 = 10_000_000;

/// A channel assignment: per link either a channel id or inactive.
///
/// Invariants (checked by [`validate_assignment`]): every cellular link gets
/// exactly one channel in its band, every D2D link at most one channel, no
/// channel carries two cellular links, and every occupied channel is jointly
/// QoS-feasible.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    pub channel_of: Vec<Option<usize>>,
    /// Total achieved utility under the solver's objective.
    pub value: f64,
}

impl Assignment {
    /// Links occupying `channel`, in id order.
    pub fn links_on(&self, channel: usize) -> Vec<LinkId> {
        self.channel_of
            .iter()
            .enumerate()
            .filter_map(|(id, &c)| (c == Some(channel)).then_some(id))
            .collect()
    }

    pub fn active_d2d(&self, scenario: &Scenario) -> usize {
        scenario
            .d2d_ids()
            .into_iter()
            .filter(|&id| self.channel_of[id].is_some())
            .count()
    }

    /// Active D2D links split into (uplink-band, downlink-band) counts.
    pub fn d2d_band_split(&self, scenario: &Scenario) -> (usize, usize) {
        let mut up = 0;
        let mut down = 0;
        for id in scenario.d2d_ids() {
            if let Some(ch) = self.channel_of[id] {
                match scenario.channels[ch].band {
                    Band::Uplink => up += 1,
                    Band::Downlink => down += 1,
                }
            }
        }
        (up, down)
    }
}

/// Check an assignment against all structural and QoS constraints and
/// recompute its utility.
pub fn validate_assignment(
    scenario: &Scenario,
    csi: CsiScenario,
    kind: UtilityKind,
    assignment: &Assignment,
    ctrl: &StatsControl,
) -> Result<()> {
    let n = scenario.n_links();
    let m = scenario.n_channels();
    if assignment.channel_of.len() != n {
        return Err(Error::Argument(format!(
            "assignment covers {} links, scenario has {n}",
            assignment.channel_of.len()
        )));
    }
    for link in &scenario.links {
        match assignment.channel_of[link.id] {
            Some(ch) => {
                if ch >= m {
                    return Err(Error::Argument(format!("link {} on unknown channel {ch}", link.id)));
                }
                if !scenario.band_ok(link.id, ch) {
                    return Err(Error::Argument(format!(
                        "link {} assigned outside its band",
                        link.id
                    )));
                }
            }
            None => {
                if link.kind.is_cellular() {
                    return Err(Error::Argument(format!("cellular link {} unserved", link.id)));
                }
            }
        }
    }
    let mut total = 0.0;
    for ch in 0..m {
        let members = assignment.links_on(ch);
        let cellular = members.iter().filter(|&&j| scenario.links[j].kind.is_cellular()).count();
        if cellular > 1 {
            return Err(Error::Argument(format!("channel {ch} carries {cellular} cellular links")));
        }
        if members.is_empty() {
            continue;
        }
        let eval = crate::utility::evaluate_channel(scenario, csi, ch, &members, kind, ctrl)?;
        for pl in &eval.per_link {
            if pl.success_prob < scenario.links[pl.link].succ_prob_min - 1e-9 {
                return Err(Error::Argument(format!(
                    "link {} violates QoS on channel {ch}: p = {}",
                    pl.link, pl.success_prob
                )));
            }
        }
        total += eval.utility;
    }
    let tol = 1e-6 * total.abs().max(1.0);
    if (total - assignment.value).abs() > tol {
        return Err(Error::Argument(format!(
            "assignment value {} does not match recomputed utility {total}",
            assignment.value
        )));
    }
    Ok(())
}

fn bits_of(mask: u64) -> Vec<usize> {
    ChannelEvaluator::members_of(mask)
}

/// Lexicographic order on subsets viewed as sorted id lists; used only to
/// break exact value ties deterministically.
fn subset_lex_less(a: u64, b: u64) -> bool {
    if a == b {
        return false;
    }
    let low = (a ^ b).trailing_zeros();
    if a & (1u64 << low) != 0 {
        (b >> low) >> 1 != 0
    } else {
        (a >> low) >> 1 == 0
    }
}

struct StageContext {
    /// Links allowed on each channel (all D2D plus same-band cellular).
    allowed: Vec<u64>,
    cellular_mask: u64,
    cellular_by_band: [u64; 2],
    /// Cumulative channel count per band among channels 0..=i.
    band_prefix: Vec<[usize; 2]>,
}

impl StageContext {
    fn new(scenario: &Scenario) -> StageContext {
        let mut cellular_mask = 0u64;
        let mut cellular_by_band = [0u64; 2];
        let mut d2d_mask = 0u64;
        for link in &scenario.links {
            let bit = 1u64 << link.id;
            match link.kind {
                crate::model::LinkKind::UplinkCellular => {
                    cellular_mask |= bit;
                    cellular_by_band[0] |= bit;
                }
                crate::model::LinkKind::DownlinkCellular => {
                    cellular_mask |= bit;
                    cellular_by_band[1] |= bit;
                }
                crate::model::LinkKind::D2d => d2d_mask |= bit,
            }
        }
        let mut allowed = Vec::with_capacity(scenario.n_channels());
        let mut band_prefix = Vec::with_capacity(scenario.n_channels());
        let mut counts = [0usize; 2];
        for ch in &scenario.channels {
            let b = band_index(ch.band);
            counts[b] += 1;
            band_prefix.push(counts);
            allowed.push(d2d_mask | cellular_by_band[b]);
        }
        StageContext { allowed, cellular_mask, cellular_by_band, band_prefix }
    }

    /// Must channel at `stage` (1-based) serve a cellular link, given state?
    fn forces_cellular(&self, scenario: &Scenario, stage: usize, state: u64) -> bool {
        let ch = stage - 1;
        let b = band_index(scenario.channels[ch].band);
        let channels_so_far = self.band_prefix[ch][b];
        let cellular_waiting = (state & self.cellular_by_band[b]).count_ones() as usize;
        channels_so_far <= cellular_waiting
    }

    /// Is `state` serveable at all by channels 0..stage-1 (cellular demand
    /// within channel supply, per band)?
    fn state_plausible(&self, stage: usize, state: u64) -> bool {
        if stage == 0 {
            return state & self.cellular_mask == 0;
        }
        let prefix = self.band_prefix[stage - 1];
        for b in 0..2 {
            if (state & self.cellular_by_band[b]).count_ones() as usize > prefix[b] {
                return false;
            }
        }
        true
    }
}

fn band_index(b: Band) -> usize {
    match b {
        Band::Uplink => 0,
        Band::Downlink => 1,
    }
}

fn enumerate_feasible(
    evaluator: &mut ChannelEvaluator,
    ctx: &StageContext,
    stage: usize,
    state: u64,
) -> Result<Vec<u64>> {
    let channel = stage - 1;
    let pool = state & ctx.allowed[channel];
    let forced = ctx.forces_cellular(evaluator.scenario, stage, state);
    let mut out = Vec::new();
    let mut sub = pool;
    loop {
        let cellular = (sub & ctx.cellular_mask).count_ones();
        let band_ok = cellular <= 1 && (!forced || cellular == 1);
        if band_ok {
            let (_, feasible) = evaluator.evaluate(channel, sub)?;
            if feasible {
                out.push(sub);
            }
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & pool;
    }
    out.sort_unstable();
    Ok(out)
}

/// All link subsets of `state` that may share the channel of `stage`
/// (1-based), in ascending bitmask order.
pub fn feasible_link_sets(
    scenario: &Scenario,
    csi: CsiScenario,
    stage: usize,
    state: u64,
    kind: UtilityKind,
    ctrl: &StatsControl,
) -> Result<Vec<u64>> {
    if stage == 0 || stage > scenario.n_channels() {
        return Err(Error::Argument(format!("stage {stage} out of range")));
    }
    let ctx = StageContext::new(scenario);
    let mut evaluator = ChannelEvaluator::new(scenario, csi, kind, ctrl)?;
    enumerate_feasible(&mut evaluator, &ctx, stage, state)
}

/// Optimal assignment by the stage/state dynamic program.
///
/// Returns [`Error::Infeasible`] when no assignment serves every cellular
/// link within QoS, and [`Error::Capacity`] above [`MAX_DP_LINKS`] links.
pub fn solve_dp(
    scenario: &Scenario,
    csi: CsiScenario,
    kind: UtilityKind,
    ctrl: &StatsControl,
) -> Result<Assignment> {
    let n = scenario.n_links();
    let m = scenario.n_channels();
    if n > MAX_DP_LINKS {
        return Err(Error::Capacity(format!(
            "{n} links exceed the {MAX_DP_LINKS}-link dynamic-programming guard"
        )));
    }
    if m == 0 {
        return Err(Error::Config("scenario has no channels".into()));
    }
    let ctx = StageContext::new(scenario);
    let mut evaluator = ChannelEvaluator::new(scenario, csi, kind, ctrl)?;
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let n_states = (full + 1) as usize;

    // stage 0: nothing assigned; only cellular-free states are viable
    let mut prev: Vec<Option<f64>> = (0..n_states as u64)
        .map(|j| (j & ctx.cellular_mask == 0).then_some(0.0))
        .collect();
    let mut choices: Vec<Vec<u64>> = Vec::with_capacity(m);

    for stage in 1..=m {
        let last = stage == m;
        let channel = stage - 1;
        let mut cur: Vec<Option<f64>> = vec![None; n_states];
        let mut chosen: Vec<u64> = vec![u64::MAX; n_states];
        let states: Box<dyn Iterator<Item = u64>> =
            if last { Box::new(std::iter::once(full)) } else { Box::new(0..n_states as u64) };
        for state in states {
            if !ctx.state_plausible(stage, state) {
                continue;
            }
            let pool = state & ctx.allowed[channel];
            let forced = ctx.forces_cellular(scenario, stage, state);
            let mut best: Option<(f64, u64)> = None;
            let mut sub = pool;
            loop {
                let cellular = (sub & ctx.cellular_mask).count_ones();
                if cellular <= 1 && (!forced || cellular == 1) {
                    if let Some(prev_val) = prev[(state & !sub) as usize] {
                        let (util, feasible) = evaluator.evaluate(channel, sub)?;
                        if feasible {
                            let cand = util + prev_val;
                            let better = match best {
                                None => true,
                                Some((bv, bs)) => {
                                    cand > bv || (cand == bv && subset_lex_less(sub, bs))
                                }
                            };
                            if better {
                                best = Some((cand, sub));
                            }
                        }
                    }
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & pool;
            }
            if let Some((value, sub)) = best {
                cur[state as usize] = Some(value);
                chosen[state as usize] = sub;
            }
        }
        prev = cur;
        choices.push(chosen);
    }

    let value = prev[full as usize].ok_or_else(|| {
        Error::Infeasible("no assignment serves all cellular links within QoS".into())
    })?;

    let mut channel_of = vec![None; n];
    let mut state = full;
    for stage in (1..=m).rev() {
        let sub = choices[stage - 1][state as usize];
        debug_assert_ne!(sub, u64::MAX, "reconstruction hit an unsolved state");
        for id in bits_of(sub) {
            channel_of[id] = Some(stage - 1);
        }
        state &= !sub;
    }
    // whatever remains at stage 0 stays inactive, and is D2D by construction
    debug_assert_eq!(state & ctx.cellular_mask, 0);
    Ok(Assignment { channel_of, value })
}

/// Exhaustive-search oracle over all assignments satisfying the structural
/// constraints, keeping the best QoS-feasible one. Guarded by
/// [`MAX_EXHAUSTIVE_OPS`].
pub fn solve_exhaustive(
    scenario: &Scenario,
    csi: CsiScenario,
    kind: UtilityKind,
    ctrl: &StatsControl,
) -> Result<Assignment> {
    let m = scenario.n_channels();
    let uplink_cellular: Vec<LinkId> = scenario
        .links
        .iter()
        .filter(|l| l.kind == crate::model::LinkKind::UplinkCellular)
        .map(|l| l.id)
        .collect();
    let downlink_cellular: Vec<LinkId> = scenario
        .links
        .iter()
        .filter(|l| l.kind == crate::model::LinkKind::DownlinkCellular)
        .map(|l| l.id)
        .collect();
    let d2d: Vec<LinkId> = scenario.d2d_ids();
    let uplink_channels: Vec<usize> =
        scenario.channels.iter().filter(|c| c.band == Band::Uplink).map(|c| c.id).collect();
    let downlink_channels: Vec<usize> =
        scenario.channels.iter().filter(|c| c.band == Band::Downlink).map(|c| c.id).collect();

    let perm = |slots: usize, picks: usize| -> u64 {
        ((slots - picks + 1)..=slots).map(|v| v as u64).product::<u64>().max(1)
    };
    let ops = perm(uplink_channels.len(), uplink_cellular.len())
        .saturating_mul(perm(downlink_channels.len(), downlink_cellular.len()))
        .saturating_mul((m as u64 + 1).saturating_pow(d2d.len() as u32));
    if ops > MAX_EXHAUSTIVE_OPS {
        return Err(Error::Capacity(format!(
            "exhaustive search would enumerate ~{ops} assignments (limit {MAX_EXHAUSTIVE_OPS})"
        )));
    }

    let up_arrangements = injections(&uplink_cellular, &uplink_channels);
    let down_arrangements = injections(&downlink_cellular, &downlink_channels);

    let mut evaluator = ChannelEvaluator::new(scenario, csi, kind, ctrl)?;
    let mut best: Option<Assignment> = None;
    let n = scenario.n_links();

    for up in &up_arrangements {
        for down in &down_arrangements {
            // mixed-radix counter over (inactive | channel) per D2D link
            let mut digits = vec![0usize; d2d.len()];
            loop {
                let mut masks = vec![0u64; m];
                for (&link, &ch) in uplink_cellular.iter().zip(up) {
                    masks[ch] |= 1 << link;
                }
                for (&link, &ch) in downlink_cellular.iter().zip(down) {
                    masks[ch] |= 1 << link;
                }
                for (&link, &digit) in d2d.iter().zip(&digits) {
                    if digit > 0 {
                        masks[digit - 1] |= 1 << link;
                    }
                }
                let mut total = 0.0;
                let mut ok = true;
                for (ch, &mask) in masks.iter().enumerate() {
                    if mask == 0 {
                        continue;
                    }
                    let (util, feasible) = evaluator.evaluate(ch, mask)?;
                    if !feasible {
                        ok = false;
                        break;
                    }
                    total += util;
                }
                if ok && best.as_ref().map(|b| total > b.value).unwrap_or(true) {
                    let mut channel_of = vec![None; n];
                    for (ch, &mask) in masks.iter().enumerate() {
                        for id in bits_of(mask) {
                            channel_of[id] = Some(ch);
                        }
                    }
                    best = Some(Assignment { channel_of, value: total });
                }
                // increment the counter
                let mut carry = true;
                for d in digits.iter_mut() {
                    if carry {
                        *d += 1;
                        if *d > m {
                            *d = 0;
                        } else {
                            carry = false;
                        }
                    }
                }
                if carry {
                    break;
                }
            }
        }
    }
    best.ok_or_else(|| {
        Error::Infeasible("no assignment serves all cellular links within QoS".into())
    })
}

/// All ways to place each of `items` on a distinct member of `slots`,
/// in deterministic order.
fn injections(items: &[LinkId], slots: &[usize]) -> Vec<Vec<usize>> {
    fn rec(remaining: usize, slots: &[usize], used: &mut Vec<bool>, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining == 0 {
            out.push(acc.clone());
            return;
        }
        for (i, &s) in slots.iter().enumerate() {
            if !used[i] {
                used[i] = true;
                acc.push(s);
                rec(remaining - 1, slots, used, acc, out);
                acc.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(items.len(), slots, &mut vec![false; slots.len()], &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{generate_scenario, LinkKind, ScenarioParams};

    fn ctrl() -> StatsControl {
        StatsControl::default()
    }

    fn params(nu: usize, nd: usize, d2d: usize, mu: usize, md: usize) -> ScenarioParams {
        ScenarioParams {
            n_uplink_cellular: nu,
            n_downlink_cellular: nd,
            n_d2d: d2d,
            m_uplink: mu,
            m_downlink: md,
            ..ScenarioParams::default()
        }
    }

    #[test]
    fn subset_lex_order() {
        // {} < {0} < {0,1} < {0,2} < {1}
        let sets = [0b000u64, 0b001, 0b011, 0b101, 0b010];
        for i in 0..sets.len() {
            for j in 0..sets.len() {
                assert_eq!(subset_lex_less(sets[i], sets[j]), i < j, "{i} vs {j}");
            }
        }
    }

    #[test]
    fn single_cellular_single_channel() {
        let s = generate_scenario(&params(1, 0, 0, 1, 0), 3).unwrap();
        let a = solve_dp(&s, CsiScenario::Full, UtilityKind::WeightedSumRateFullCsi, &ctrl())
            .unwrap();
        assert_eq!(a.channel_of, vec![Some(0)]);
        let sinr = s.realized_sinr(0, 0, &[0]);
        assert!(sinr >= 1.0, "this seed should satisfy QoS, sinr {sinr}");
        assert!((a.value - (1.0 + sinr).log2()).abs() < 1e-9);
        validate_assignment(&s, CsiScenario::Full, UtilityKind::WeightedSumRateFullCsi, &a, &ctrl())
            .unwrap();
    }

    #[test]
    fn two_d2d_share_when_profitable() {
        let mut s = generate_scenario(&params(0, 0, 2, 1, 0), 5).unwrap();
        // strong signals, negligible cross interference
        for j in 0..2 {
            s.small_scale[0][j][j] = 5.0 * s.noise_power / s.large_scale[j][j];
        }
        s.large_scale[0][1] = s.noise_power * 1e-6;
        s.large_scale[1][0] = s.noise_power * 1e-6;
        let a = solve_dp(&s, CsiScenario::Full, UtilityKind::WeightedSumRateFullCsi, &ctrl())
            .unwrap();
        assert_eq!(a.channel_of, vec![Some(0), Some(0)], "both should share the channel");
    }

    #[test]
    fn feasible_sets_spec_cases() {
        // empty state yields exactly the empty set
        let s = generate_scenario(&params(1, 1, 2, 1, 1), 8).unwrap();
        let sets =
            feasible_link_sets(&s, CsiScenario::Full, 1, 0, UtilityKind::WeightedSumRateFullCsi, &ctrl())
                .unwrap();
        assert_eq!(sets, vec![0]);

        // an uplink cellular link cannot enter a downlink channel's sets
        let ulc_bit = 1u64 << 0;
        let sets =
            feasible_link_sets(&s, CsiScenario::Full, 2, ulc_bit, UtilityKind::WeightedSumRateFullCsi, &ctrl())
                .unwrap();
        assert_eq!(sets, vec![0], "stage 2 is the downlink channel");

        // forcing: last uplink channel with one uplink cellular waiting
        let mut s2 = generate_scenario(&params(1, 0, 1, 1, 0), 21).unwrap();
        // make joint QoS pass so nonempty supersets exist
        s2.small_scale[0][0][0] = 100.0 * s2.noise_power / s2.large_scale[0][0];
        s2.small_scale[0][1][1] = 100.0 * s2.noise_power / s2.large_scale[1][1];
        s2.large_scale[0][1] = s2.noise_power * 1e-9;
        s2.large_scale[1][0] = s2.noise_power * 1e-9;
        let state = 0b11u64;
        let sets =
            feasible_link_sets(&s2, CsiScenario::Full, 1, state, UtilityKind::WeightedSumRateFullCsi, &ctrl())
                .unwrap();
        assert!(!sets.is_empty());
        for set in sets {
            assert_ne!(set & 0b01, 0, "every feasible set must contain the cellular link");
        }
    }

    #[test]
    fn dp_matches_exhaustive_on_random_instances() {
        let mut mismatches = Vec::new();
        for seed in 0..12u64 {
            let p = params(
                (seed % 2 + 1) as usize,
                ((seed / 2) % 2) as usize,
                (seed % 3 + 1) as usize,
                (seed % 2 + 1) as usize,
                ((seed / 2) % 2 + 1) as usize,
            );
            let s = generate_scenario(&p, 1000 + seed).unwrap();
            for (csi, kind) in [
                (CsiScenario::Full, UtilityKind::WeightedSumRateFullCsi),
                (CsiScenario::S1, UtilityKind::ExpectedWeightedSumRate),
                (CsiScenario::S4, UtilityKind::ExpectedWeightedSumRate),
            ] {
                let dp = solve_dp(&s, csi, kind, &ctrl());
                let ex = solve_exhaustive(&s, csi, kind, &ctrl());
                match (dp, ex) {
                    (Ok(a), Ok(b)) => {
                        if (a.value - b.value).abs() > 1e-9 {
                            mismatches.push((seed, csi, a.value, b.value));
                        }
                        validate_assignment(&s, csi, kind, &a, &ctrl()).unwrap();
                        validate_assignment(&s, csi, kind, &b, &ctrl()).unwrap();
                    }
                    (Err(Error::Infeasible(_)), Err(Error::Infeasible(_))) => {}
                    (a, b) => panic!("seed {seed} {csi:?}: divergent outcomes {a:?} vs {b:?}"),
                }
            }
        }
        assert!(mismatches.is_empty(), "dp != exhaustive: {mismatches:?}");
    }

    #[test]
    fn dp_value_monotone_in_d2d_links() {
        // removing D2D links (which could have stayed inactive) cannot help
        for seed in [2u64, 9, 17] {
            let s_big = generate_scenario(&params(1, 1, 3, 1, 1), seed).unwrap();
            let s_small = remove_last_d2d(&s_big);
            let big = solve_dp(&s_big, CsiScenario::Full, UtilityKind::WeightedSumRateFullCsi, &ctrl());
            let small =
                solve_dp(&s_small, CsiScenario::Full, UtilityKind::WeightedSumRateFullCsi, &ctrl());
            if let (Ok(b), Ok(sm)) = (big, small) {
                assert!(b.value >= sm.value - 1e-9, "seed {seed}: {} < {}", b.value, sm.value);
            }
        }
    }

    fn remove_last_d2d(s: &Scenario) -> Scenario {
        let keep: Vec<usize> = (0..s.n_links() - 1).collect();
        let mut out = s.clone();
        out.links.truncate(keep.len());
        assert_eq!(s.links.last().unwrap().kind, LinkKind::D2d);
        out.large_scale = keep
            .iter()
            .map(|&z| keep.iter().map(|&j| s.large_scale[z][j]).collect())
            .collect();
        out.interference_shape = keep
            .iter()
            .map(|&z| keep.iter().map(|&j| s.interference_shape[z][j]).collect())
            .collect();
        out.small_scale = s
            .small_scale
            .iter()
            .map(|ch| {
                keep.iter()
                    .map(|&z| keep.iter().map(|&j| ch[z][j]).collect())
                    .collect()
            })
            .collect();
        out.signal_fading.truncate(keep.len());
        out
    }

    #[test]
    fn dp_is_deterministic() {
        let s = generate_scenario(&params(2, 1, 3, 2, 1), 33).unwrap();
        let a = solve_dp(&s, CsiScenario::S3, UtilityKind::ExpectedWeightedSumRate, &ctrl()).unwrap();
        let b = solve_dp(&s, CsiScenario::S3, UtilityKind::ExpectedWeightedSumRate, &ctrl()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn infeasible_cellular_is_reported() {
        let mut s = generate_scenario(&params(1, 0, 0, 1, 0), 4).unwrap();
        // bury the cellular signal
        s.small_scale[0][0][0] = 1e-15;
        assert!(matches!(
            solve_dp(&s, CsiScenario::Full, UtilityKind::WeightedSumRateFullCsi, &ctrl()),
            Err(Error::Infeasible(_))
        ));
        assert!(matches!(
            solve_exhaustive(&s, CsiScenario::Full, UtilityKind::WeightedSumRateFullCsi, &ctrl()),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn capacity_guards_fire() {
        let s = generate_scenario(&params(4, 4, 13, 4, 4), 2).unwrap();
        assert!(matches!(
            solve_dp(&s, CsiScenario::Full, UtilityKind::WeightedSumRateFullCsi, &ctrl()),
            Err(Error::Capacity(_))
        ));
        let s = generate_scenario(&params(2, 2, 10, 4, 4), 2).unwrap();
        assert!(matches!(
            solve_exhaustive(&s, CsiScenario::Full, UtilityKind::WeightedSumRateFullCsi, &ctrl()),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn exhaustive_keeps_all_d2d_inactive_when_nothing_else_works() {
        let mut s = generate_scenario(&params(1, 0, 1, 1, 0), 6).unwrap();
        // cellular fine alone, D2D hopeless anywhere
        s.small_scale[0][0][0] = 10.0 * s.noise_power / s.large_scale[0][0];
        s.small_scale[0][1][1] = 1e-15;
        let a = solve_exhaustive(&s, CsiScenario::Full, UtilityKind::WeightedSumRateFullCsi, &ctrl())
            .unwrap();
        assert_eq!(a.channel_of[1], None, "D2D must stay inactive");
        assert_eq!(a.channel_of[0], Some(0));
    }
}
