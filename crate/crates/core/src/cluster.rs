//! Cluster-based sub-optimal channel assignment, plus the semi-orthogonal
//! baseline.
//!
//! Two steps. First, links are greedily divided into M non-overlapping
//! clusters (one per channel, temporarily assuming cluster g uses channel
//! g): cellular links are placed by a bipartite matching that doubles as
//! the problem's feasibility check, then D2D links join clusters by
//! priority. Each cluster remembers its FIFO insertion queue. Second, a
//! queue-based admission pass scores every (cluster, channel) pair and a
//! final matching reassigns channels to clusters.

use crate::dp::Assignment;
use crate::error::{Error, Result};
use crate::matching::{max_weight_matching, WeightMatrix};
use crate::model::{CsiScenario, LinkId, Scenario};
use crate::stats::StatsControl;
use crate::utility::{ChannelEvaluator, UtilityKind};
use std::collections::HashMap;

/// Priority of putting a link into a cluster; `None` is the "never" sentinel
/// (a QoS-violating placement while some other link still fits somewhere).
pub type PriorityValue = Option<f64>;

/// M link clusters; each inner vector is the FIFO insertion queue, with the
/// cellular occupant (if any) first.
#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    pub clusters: Vec<Vec<LinkId>>,
}

impl Clustering {
    pub fn cluster_of(&self, link: LinkId) -> Option<usize> {
        self.clusters.iter().position(|c| c.contains(&link))
    }

    fn mask(&self, g: usize) -> u64 {
        self.clusters[g].iter().fold(0u64, |m, &id| m | (1u64 << id))
    }
}

/// Place each cellular link into a distinct cluster of its own band,
/// maximizing the summed solo rates. The edge weight of (link j, cluster g)
/// is finite only when j's band matches channel g and its
/// interference-free SNR on g meets the SINR floor, so a complete matching
/// certifies that the whole assignment problem is feasible.
///
/// Returns, per cluster, the cellular occupant.
pub fn cluster_cellular(
    scenario: &Scenario,
    kind: UtilityKind,
) -> Result<Vec<Option<LinkId>>> {
    let m = scenario.n_channels();
    let cellular = scenario.cellular_ids();
    if cellular.is_empty() {
        return Ok(vec![None; m]);
    }
    let weights = WeightMatrix::from_fn(cellular.len(), m, |row, g| {
        let j = cellular[row];
        if !scenario.band_ok(j, g) {
            return None;
        }
        let snr = scenario.lambda(j, j) * scenario.beta(g, j, j) / scenario.noise_power;
        if snr < scenario.links[j].sinr_min {
            return None;
        }
        let rate = (1.0 + snr).log2();
        Some(match kind {
            UtilityKind::AccessRate => rate,
            _ => scenario.links[j].weight * rate,
        })
    });
    let result = max_weight_matching(&weights, true)?;
    if !result.complete {
        return Err(Error::Infeasible(
            "cellular links cannot all reach their QoS on distinct channels".into(),
        ));
    }
    let mut occupants = vec![None; m];
    for (row, g) in result.pairs {
        occupants[g] = Some(cellular[row]);
    }
    Ok(occupants)
}

/// Priority of D2D link `j` for cluster `g` under the weighted sum-rate
/// objectives: the utility gain if the enlarged cluster stays QoS-feasible
/// on channel g, the sentinel otherwise. The "every remaining link is stuck"
/// case is handled by the caller, which falls back to raw gains.
pub fn priority_wsr(
    evaluator: &mut ChannelEvaluator,
    clustering: &Clustering,
    g: usize,
    j: LinkId,
) -> Result<PriorityValue> {
    let base = clustering.mask(g);
    let union = base | (1u64 << j);
    let (u_union, feasible) = evaluator.evaluate(g, union)?;
    if !feasible {
        return Ok(None);
    }
    let (u_base, _) = evaluator.evaluate(g, base)?;
    Ok(Some(u_union - u_base))
}

/// Raw utility gain of the placement, ignoring QoS. Used when no remaining
/// link fits anywhere, so that every link is still clustered.
fn gain_wsr(
    evaluator: &mut ChannelEvaluator,
    clustering: &Clustering,
    g: usize,
    j: LinkId,
) -> Result<f64> {
    let base = clustering.mask(g);
    let union = base | (1u64 << j);
    let (u_union, _) = evaluator.evaluate(g, union)?;
    let (u_base, _) = evaluator.evaluate(g, base)?;
    Ok(u_union - u_base)
}

/// Number of clusters that could absorb `j` with every member (including j)
/// meeting its SINR floor; full CSI.
fn serving_cluster_count(scenario: &Scenario, clustering: &Clustering, j: LinkId) -> usize {
    (0..clustering.clusters.len())
        .filter(|&g| {
            let mut union = clustering.clusters[g].clone();
            union.push(j);
            union.iter().all(|&z| {
                scenario.realized_sinr(g, z, &union) >= scenario.links[z].sinr_min
            })
        })
        .count()
}

/// Access-rate priority: the worst member's rate margin over its threshold
/// rate, discounted by 2^(−f) where f counts the clusters that could still
/// serve `j` (fewer options ⇒ higher priority). Full CSI only.
pub fn priority_access(scenario: &Scenario, clustering: &Clustering, g: usize, j: LinkId) -> f64 {
    let m = clustering.clusters.len();
    let f = serving_cluster_count(scenario, clustering, j);
    let exponent = if f > 0 { f } else { m };
    let discount = (2.0f64).powi(-(exponent as i32));
    let mut union = clustering.clusters[g].clone();
    union.push(j);
    union
        .iter()
        .map(|&z| {
            let sinr = scenario.realized_sinr(g, z, &union);
            (1.0 + sinr).log2() / (1.0 + scenario.links[z].sinr_min).log2() * discount
        })
        .fold(f64::INFINITY, f64::min)
}

/// The greedy clustering pass: cellular placement, then one D2D link per
/// step into the currently best cluster. After a placement only the touched
/// cluster's priorities are refreshed; untouched clusters' values cannot
/// have changed, and the all-stuck condition is re-derived lazily when every
/// cached priority is the sentinel.
pub fn greedy_cluster(
    scenario: &Scenario,
    csi: CsiScenario,
    kind: UtilityKind,
    ctrl: &StatsControl,
) -> Result<Clustering> {
    let m = scenario.n_channels();
    let mut evaluator = ChannelEvaluator::new(scenario, csi, kind, ctrl)?;
    let occupants = cluster_cellular(scenario, kind)?;
    let mut clustering = Clustering {
        clusters: occupants.iter().map(|o| o.iter().copied().collect()).collect(),
    };
    let mut unclustered = scenario.d2d_ids();

    let priority = |evaluator: &mut ChannelEvaluator,
                    clustering: &Clustering,
                    g: usize,
                    j: LinkId|
     -> Result<PriorityValue> {
        match kind {
            UtilityKind::AccessRate => Ok(Some(priority_access(scenario, clustering, g, j))),
            _ => priority_wsr(evaluator, clustering, g, j),
        }
    };

    let mut cache: HashMap<(usize, LinkId), PriorityValue> = HashMap::new();
    for &j in &unclustered {
        for g in 0..m {
            cache.insert((g, j), priority(&mut evaluator, &clustering, g, j)?);
        }
    }

    while !unclustered.is_empty() {
        // ties break toward the lowest link id, then lowest cluster id
        let mut best: Option<(f64, LinkId, usize)> = None;
        for &j in &unclustered {
            for g in 0..m {
                if let Some(y) = cache[&(g, j)] {
                    if best.map(|(by, _, _)| y > by).unwrap_or(true) {
                        best = Some((y, j, g));
                    }
                }
            }
        }
        let (j_star, g_star) = match best {
            Some((_, j, g)) => (j, g),
            None => {
                // nothing fits anywhere: cluster by raw gain so every link
                // still lands in exactly one cluster
                let mut fallback: Option<(f64, LinkId, usize)> = None;
                for &j in &unclustered {
                    for g in 0..m {
                        let v = gain_wsr(&mut evaluator, &clustering, g, j)?;
                        if fallback.map(|(bv, _, _)| v > bv).unwrap_or(true) {
                            fallback = Some((v, j, g));
                        }
                    }
                }
                let (_, j, g) = fallback.expect("unclustered set is nonempty");
                (j, g)
            }
        };

        clustering.clusters[g_star].push(j_star);
        unclustered.retain(|&j| j != j_star);
        for g in 0..m {
            cache.remove(&(g, j_star));
        }
        match kind {
            // the 2^(−f) discount counts serving clusters across the whole
            // clustering, so a placement can change any pair's priority
            UtilityKind::AccessRate => {
                for &j in &unclustered {
                    for g in 0..m {
                        cache.insert((g, j), priority(&mut evaluator, &clustering, g, j)?);
                    }
                }
            }
            // the sum-rate gain depends only on the touched cluster
            _ => {
                for &j in &unclustered {
                    cache.insert((g_star, j), priority(&mut evaluator, &clustering, g_star, j)?);
                }
            }
        }
    }
    Ok(clustering)
}

/// Score cluster `queue` on `channel`: seed with the cellular occupant,
/// admit D2D members in queue order whenever the enlarged set stays
/// QoS-feasible, and keep the best admission prefix.
///
/// Returns `(None, [])` when the cellular seed itself is infeasible on this
/// channel (wrong band or QoS), otherwise the prefix utility and members.
pub fn cluster_channel_weight(
    scenario: &Scenario,
    csi: CsiScenario,
    channel: usize,
    queue: &[LinkId],
    kind: UtilityKind,
    ctrl: &StatsControl,
) -> Result<(Option<f64>, Vec<LinkId>)> {
    let mut evaluator = ChannelEvaluator::new(scenario, csi, kind, ctrl)?;
    cluster_channel_weight_with(&mut evaluator, channel, queue)
}

fn cluster_channel_weight_with(
    evaluator: &mut ChannelEvaluator,
    channel: usize,
    queue: &[LinkId],
) -> Result<(Option<f64>, Vec<LinkId>)> {
    let scenario = evaluator.scenario;
    let mut seed_mask = 0u64;
    for &j in queue {
        if scenario.links[j].kind.is_cellular() {
            if !scenario.band_ok(j, channel) {
                return Ok((None, Vec::new()));
            }
            seed_mask |= 1u64 << j;
        }
    }
    let (seed_utility, seed_feasible) = evaluator.evaluate(channel, seed_mask)?;
    if !seed_feasible {
        return Ok((None, Vec::new()));
    }
    let mut admitted = seed_mask;
    let mut best = (seed_utility, seed_mask);
    for &j in queue {
        if scenario.links[j].kind.is_cellular() {
            continue;
        }
        let candidate = admitted | (1u64 << j);
        let (utility, feasible) = evaluator.evaluate(channel, candidate)?;
        if feasible {
            admitted = candidate;
            if utility > best.0 {
                best = (utility, candidate);
            }
        }
    }
    Ok((Some(best.0), ChannelEvaluator::members_of(best.1)))
}

/// The full cluster-based heuristic.
///
/// Clusters are rematched to channels by maximum-weight matching over the
/// admission scores. Every cluster is matched: a perfect matching always
/// exists once the cellular placement succeeded (each cellular cluster's
/// own channel is a finite edge and clusters without cellular links have
/// all-finite rows), and leaving a cellular cluster unmatched would strand
/// its link.
pub fn solve_cluster(
    scenario: &Scenario,
    csi: CsiScenario,
    kind: UtilityKind,
    ctrl: &StatsControl,
) -> Result<Assignment> {
    let m = scenario.n_channels();
    let clustering = greedy_cluster(scenario, csi, kind, ctrl)?;
    let mut evaluator = ChannelEvaluator::new(scenario, csi, kind, ctrl)?;

    let mut weights = WeightMatrix::new(m, m);
    let mut selected: Vec<Vec<Vec<LinkId>>> = vec![vec![Vec::new(); m]; m];
    for (g, queue) in clustering.clusters.iter().enumerate() {
        for i in 0..m {
            let (w, members) = cluster_channel_weight_with(&mut evaluator, i, queue)?;
            weights.set(g, i, w);
            selected[g][i] = members;
        }
    }
    let matching = max_weight_matching(&weights, true)?;
    if !matching.complete {
        return Err(Error::Infeasible("cluster-to-channel matching failed".into()));
    }

    let mut channel_of = vec![None; scenario.n_links()];
    for &(g, i) in &matching.pairs {
        for &j in &selected[g][i] {
            channel_of[j] = Some(i);
        }
    }
    Ok(Assignment { channel_of, value: matching.total_weight })
}

/// Baseline that lets at most one D2D link share each channel: cellular
/// links keep their matched channels, then one more matching assigns D2D
/// links to channels by utility gain (forbidden where QoS would break).
pub fn solve_semi_orthogonal(
    scenario: &Scenario,
    csi: CsiScenario,
    kind: UtilityKind,
    ctrl: &StatsControl,
) -> Result<Assignment> {
    let m = scenario.n_channels();
    let occupants = cluster_cellular(scenario, kind)?;
    let mut evaluator = ChannelEvaluator::new(scenario, csi, kind, ctrl)?;
    let d2d = scenario.d2d_ids();

    let mut channel_of = vec![None; scenario.n_links()];
    for (g, occ) in occupants.iter().enumerate() {
        if let Some(j) = occ {
            channel_of[*j] = Some(g);
        }
    }

    if !d2d.is_empty() {
        let base_mask =
            |i: usize| occupants[i].map(|j| 1u64 << j).unwrap_or(0);
        let mut weights = WeightMatrix::new(d2d.len(), m);
        for (row, &j) in d2d.iter().enumerate() {
            for i in 0..m {
                let base = base_mask(i);
                let union = base | (1u64 << j);
                let (u_union, feasible) = evaluator.evaluate(i, union)?;
                if feasible {
                    let (u_base, _) = evaluator.evaluate(i, base)?;
                    weights.set(row, i, Some(u_union - u_base));
                }
            }
        }
        let matching = max_weight_matching(&weights, false)?;
        for &(row, i) in &matching.pairs {
            channel_of[d2d[row]] = Some(i);
        }
    }

    // recompute the achieved utility from the final occupancy
    let mut value = 0.0;
    for i in 0..m {
        let mask = channel_of
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c == Some(i))
            .fold(0u64, |acc, (id, _)| acc | (1u64 << id));
        value += evaluator.evaluate(i, mask)?.0;
    }
    Ok(Assignment { channel_of, value })
}
