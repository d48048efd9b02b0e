//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with its headline numbers. Run with
//!
//! ```text
//! cargo test --test acceptance -- --nocapture
//! ```
//!
//! Statistical criteria use frozen seeds so the suite is deterministic.

use d2d_underlay::cluster::{solve_cluster, solve_semi_orthogonal};
use d2d_underlay::dp::{solve_dp, solve_exhaustive, validate_assignment};
use d2d_underlay::harness::{
    drop_seed, rows_to_csv, run_experiment, summarize, Algorithm, ExperimentConfig, GroupField,
    ResultRow,
};
use d2d_underlay::model::{generate_scenario, CsiScenario, FadingSpec, ScenarioParams};
use d2d_underlay::special::{integrate, QuadratureControl};
use d2d_underlay::stats::{
    exp_mixture_pdf, gamma_sum_pdf, link_stats, mc_oracle, mu_recurrence, Interferer,
    InterferenceContext, StatsControl,
};
use d2d_underlay::matching::{max_weight_matching, WeightMatrix};
use d2d_underlay::utility::UtilityKind;
use d2d_underlay::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ctrl() -> StatsControl {
    StatsControl::default()
}

fn pass(criterion: &str, detail: &str) {
    println!("[acceptance] {criterion}: PASS ({detail})");
}

// ---------------------------------------------------------------------------
// Criterion 1 — closed forms vs Monte Carlo
// ---------------------------------------------------------------------------

#[derive(Clone, Copy)]
enum Branch {
    RayleighKnown,
    RayleighUnknown,
    NakagamiKnown,
    NakagamiUnknown,
}

fn random_context(rng: &mut ChaCha8Rng, branch: Branch) -> InterferenceContext {
    let n_itf = rng.gen_range(1..=3);
    let shapes: Vec<f64> = (0..n_itf)
        .map(|_| match branch {
            Branch::RayleighKnown | Branch::RayleighUnknown => 1.0,
            Branch::NakagamiKnown | Branch::NakagamiUnknown => {
                [1.0, 2.0, 3.0][rng.gen_range(0..3)]
            }
        })
        .collect();
    let known = matches!(branch, Branch::RayleighKnown | Branch::NakagamiKnown);
    InterferenceContext {
        nu: 0.4 + 1.6 * rng.gen::<f64>(),
        signal_scale: 1.0 + 5.0 * rng.gen::<f64>(),
        signal_beta: known.then(|| 0.3 + 2.2 * rng.gen::<f64>()),
        signal_fading: FadingSpec::RAYLEIGH,
        unknown_interferers: shapes
            .into_iter()
            .map(|shape| Interferer { scale: 0.3 + 2.7 * rng.gen::<f64>(), shape })
            .collect(),
        sinr_min: 0.5 + 1.5 * rng.gen::<f64>(),
    }
}

#[test]
fn criterion_01_closed_form_vs_monte_carlo() {
    let started = std::time::Instant::now();
    let n = 1_000_000;
    let mut rng = ChaCha8Rng::seed_from_u64(20_260_808);
    let mut worst_z = 0.0f64;
    for (bi, branch) in [
        Branch::RayleighKnown,
        Branch::RayleighUnknown,
        Branch::NakagamiKnown,
        Branch::NakagamiUnknown,
    ]
    .into_iter()
    .enumerate()
    {
        for trial in 0..50 {
            let ctx = random_context(&mut rng, branch);
            let st = link_stats(&ctx, &ctrl()).unwrap();
            let mc = mc_oracle(&ctx, n, 7_000 + (bi * 50 + trial) as u64);
            let dp = (st.success_prob - mc.success_prob).abs();
            let dr = (st.expected_rate - mc.expected_rate).abs();
            // At the boundary (every sample succeeds or fails) the empirical
            // SE degenerates to zero although the estimator only resolves
            // probabilities to ~1/n; the added slack is the exact-binomial
            // equivalent of the 3-sigma band: (1-eps)^n >= 0.0013 gives
            // eps <= 6.6/n, and the matching rate slack scales by the
            // per-sample rate bound.
            assert!(
                dp <= 3.0 * mc.success_se + 7.0 / n as f64,
                "branch {bi} trial {trial}: p {} vs mc {} ± {} ({ctx:?})",
                st.success_prob,
                mc.success_prob,
                mc.success_se
            );
            assert!(
                dr <= 3.0 * mc.rate_se + 70.0 / n as f64,
                "branch {bi} trial {trial}: r {} vs mc {} ± {} ({ctx:?})",
                st.expected_rate,
                mc.expected_rate,
                mc.rate_se
            );
            if mc.success_se > 0.0 {
                worst_z = worst_z.max(dp / mc.success_se);
            }
            if mc.rate_se > 0.0 {
                worst_z = worst_z.max(dr / mc.rate_se);
            }
        }
    }

    // hand-derivable anchors
    let cor2 = InterferenceContext {
        nu: 1.0,
        signal_scale: 2.0,
        signal_beta: None,
        signal_fading: FadingSpec::RAYLEIGH,
        unknown_interferers: vec![Interferer { scale: 1.0, shape: 1.0 }],
        sinr_min: 1.0,
    };
    let p = link_stats(&cor2, &ctrl()).unwrap().success_prob;
    let want = (-0.5f64).exp() * 2.0 / 3.0;
    assert!((p - want).abs() < 1e-10, "Cor.2 anchor: {p} vs {want}");
    assert!((p - 0.40435).abs() < 1e-5);

    let cor1 = InterferenceContext { signal_beta: Some(1.0), ..cor2 };
    let p = link_stats(&cor1, &ctrl()).unwrap().success_prob;
    let want = 1.0 - (-1.0f64).exp();
    assert!((p - want).abs() < 1e-10, "Cor.1 anchor: {p} vs {want}");
    assert!((p - 0.63212).abs() < 1e-5);

    let secs = started.elapsed().as_secs_f64();
    assert!(secs < 120.0, "criterion 1 must finish within 2 minutes, took {secs:.1}s");
    pass(
        "criterion 1 (closed forms vs 10^6-sample Monte Carlo, 4 branches x 50 contexts)",
        &format!("worst |z| = {worst_z:.2}, anchors exact, {secs:.1}s"),
    );
}

// ---------------------------------------------------------------------------
// Criterion 2 — log-moment recurrence vs quadrature
// ---------------------------------------------------------------------------

#[test]
fn criterion_02_mu_recurrence_vs_quadrature() {
    let started = std::time::Instant::now();
    let qc = QuadratureControl { rel_tolerance: 1e-10, ..QuadratureControl::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(515);
    let mut checked = 0;
    let mut worst_rel = 0.0f64;
    while checked < 100 {
        let ctx = random_context(&mut rng, Branch::NakagamiKnown);
        let a = ctx.signal_scale * ctx.signal_beta.unwrap();
        let eta = a / ctx.sinr_min - ctx.nu;
        if eta <= 0.05 {
            continue;
        }
        let beta_min = ctx
            .unknown_interferers
            .iter()
            .map(|i| i.scale / i.shape)
            .fold(f64::INFINITY, f64::min);
        for k in 0..=5usize {
            let rec = mu_recurrence(k, &ctx, &ctrl()).unwrap();
            let oracle = integrate(
                |y| (1.0 + a / (ctx.nu + y)).ln() * y.powi(k as i32) * (-y / beta_min).exp(),
                0.0,
                eta,
                &qc,
            )
            .unwrap();
            let rel = (rec - oracle).abs() / oracle.abs().max(1e-300);
            assert!(rel < 1e-6, "context {checked} k={k}: rec {rec} vs quad {oracle} ({ctx:?})");
            worst_rel = worst_rel.max(rel);
        }
        checked += 1;
    }
    let secs = started.elapsed().as_secs_f64();
    assert!(secs < 60.0, "criterion 2 must finish within 1 minute, took {secs:.1}s");
    pass(
        "criterion 2 (mu_k recurrence vs adaptive quadrature, k <= 5, 100 contexts)",
        &format!("worst rel err = {worst_rel:.2e}, {secs:.1}s"),
    );
}

// ---------------------------------------------------------------------------
// Criterion 3 — gamma-sum pdf normalization and Rayleigh agreement
// ---------------------------------------------------------------------------

#[test]
fn criterion_03_gamma_sum_pdf() {
    let qc = QuadratureControl::default();
    let mut rng = ChaCha8Rng::seed_from_u64(30_303);
    let mut worst_norm = 0.0f64;
    for case in 0..12 {
        let n_itf = rng.gen_range(1..=3);
        let itf: Vec<Interferer> = (0..n_itf)
            .map(|_| Interferer {
                scale: 0.3 + 2.7 * rng.gen::<f64>(),
                shape: [1.0, 1.0, 2.0, 3.0, 0.5][rng.gen_range(0..5)],
            })
            .collect();
        let total = integrate(
            |y| gamma_sum_pdf(&itf, y, &ctrl().series).unwrap(),
            0.0,
            f64::INFINITY,
            &qc,
        )
        .unwrap();
        assert!((total - 1.0).abs() < 1e-6, "case {case}: normalization {total} ({itf:?})");
        worst_norm = worst_norm.max((total - 1.0).abs());
    }

    let mut worst_rel = 0.0f64;
    for case in 0..10 {
        let n_itf = rng.gen_range(2..=4);
        let scales: Vec<f64> =
            (0..n_itf).map(|i| 0.4 + 0.9 * i as f64 + rng.gen::<f64>() * 0.3).collect();
        let itf: Vec<Interferer> =
            scales.iter().map(|&scale| Interferer { scale, shape: 1.0 }).collect();
        for step in 0..=100 {
            let y = step as f64 * 0.2;
            let series = gamma_sum_pdf(&itf, y, &ctrl().series).unwrap();
            let mixture = exp_mixture_pdf(&scales, y).unwrap();
            let rel = (series - mixture).abs() / series.abs().max(mixture.abs()).max(1e-9);
            assert!(rel < 1e-6, "case {case} y={y}: {series} vs {mixture}");
            worst_rel = worst_rel.max(rel);
        }
    }
    pass(
        "criterion 3 (gamma-sum pdf: normalization 1e-6; matches exponential mixture on [0,20])",
        &format!("worst |norm-1| = {worst_norm:.2e}, worst pointwise rel = {worst_rel:.2e}"),
    );
}

// ---------------------------------------------------------------------------
// Criteria 4 & 5 — DP optimality and heuristic dominance on shared instances
// ---------------------------------------------------------------------------

fn small_instances() -> Vec<(ScenarioParams, u64, CsiScenario)> {
    let mut rng = ChaCha8Rng::seed_from_u64(44_044);
    let partials = [CsiScenario::S1, CsiScenario::S2, CsiScenario::S3, CsiScenario::S4];
    (0..50u64)
        .map(|i| {
            let m_uplink = rng.gen_range(1..=2);
            let m_downlink = rng.gen_range(1..=2);
            let n_uplink_cellular = rng.gen_range(0..=m_uplink.min(2));
            let n_downlink_cellular =
                rng.gen_range(0..=m_downlink.min(3 - n_uplink_cellular.min(2)));
            let n_d2d = rng.gen_range(1..=4);
            let params = ScenarioParams {
                m_uplink,
                m_downlink,
                n_uplink_cellular,
                n_downlink_cellular,
                n_d2d,
                ..ScenarioParams::default()
            };
            (params, 600_000 + i, partials[(i % 4) as usize])
        })
        .collect()
}

#[test]
fn criterion_04_dp_matches_exhaustive() {
    let started = std::time::Instant::now();
    let mut solved = 0;
    let mut infeasible = 0;
    for (idx, (params, seed, partial)) in small_instances().into_iter().enumerate() {
        let scenario = generate_scenario(&params, seed).unwrap();
        for (csi, kind) in [
            (CsiScenario::Full, UtilityKind::WeightedSumRateFullCsi),
            (CsiScenario::Full, UtilityKind::ExpectedWeightedSumRate),
            (partial, UtilityKind::ExpectedWeightedSumRate),
        ] {
            let dp = solve_dp(&scenario, csi, kind, &ctrl());
            let ex = solve_exhaustive(&scenario, csi, kind, &ctrl());
            match (dp, ex) {
                (Ok(a), Ok(b)) => {
                    assert!(
                        (a.value - b.value).abs() <= 1e-9,
                        "instance {idx} {csi:?} {kind:?}: dp {} vs exhaustive {}",
                        a.value,
                        b.value
                    );
                    validate_assignment(&scenario, csi, kind, &a, &ctrl()).unwrap();
                    validate_assignment(&scenario, csi, kind, &b, &ctrl()).unwrap();
                    solved += 1;
                }
                (Err(Error::Infeasible(_)), Err(Error::Infeasible(_))) => infeasible += 1,
                (a, b) => panic!("instance {idx} {csi:?}: divergent outcomes {a:?} vs {b:?}"),
            }
        }
    }
    let secs = started.elapsed().as_secs_f64();
    assert!(secs < 300.0, "criterion 4 must finish within 5 minutes, took {secs:.1}s");
    pass(
        "criterion 4 (solve_dp == solve_exhaustive to 1e-9 on 50 instances x 3 objective/CSI combos)",
        &format!("{solved} solved pairs equal, {infeasible} jointly infeasible, {secs:.1}s"),
    );
}

#[test]
fn criterion_05_heuristic_dominance() {
    let mut ratios = Vec::new();
    for (idx, (params, seed, partial)) in small_instances().into_iter().enumerate() {
        let scenario = generate_scenario(&params, seed).unwrap();
        for (csi, kind) in [
            (CsiScenario::Full, UtilityKind::WeightedSumRateFullCsi),
            (partial, UtilityKind::ExpectedWeightedSumRate),
        ] {
            let dp = solve_dp(&scenario, csi, kind, &ctrl());
            let cl = solve_cluster(&scenario, csi, kind, &ctrl());
            let so = solve_semi_orthogonal(&scenario, csi, kind, &ctrl());
            match (dp, cl, so) {
                (Ok(d), Ok(c), Ok(s)) => {
                    assert!(
                        c.value <= d.value + 1e-9,
                        "instance {idx} {csi:?}: cluster {} > dp {}",
                        c.value,
                        d.value
                    );
                    assert!(
                        s.value <= d.value + 1e-9,
                        "instance {idx} {csi:?}: semi-orthogonal {} > dp {}",
                        s.value,
                        d.value
                    );
                    if d.value > 1e-9 {
                        ratios.push(c.value / d.value);
                    }
                }
                (Err(Error::Infeasible(_)), Err(Error::Infeasible(_)), Err(Error::Infeasible(_))) => {}
                (d, c, s) => panic!("instance {idx} {csi:?}: divergent {d:?} / {c:?} / {s:?}"),
            }
        }
    }
    let mean_ratio = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let min_ratio = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    pass(
        "criterion 5 (cluster <= dp and semi-orthogonal <= dp on every instance)",
        &format!(
            "mean cluster/dp ratio = {mean_ratio:.4}, min = {min_ratio:.4}, n = {}",
            ratios.len()
        ),
    );
}

// ---------------------------------------------------------------------------
// Criterion 6 — uplink preference trend
// ---------------------------------------------------------------------------

fn fig3_config(bs_power_dbm: f64) -> ExperimentConfig {
    ExperimentConfig {
        scenario: ScenarioParams {
            n_uplink_cellular: 4,
            n_downlink_cellular: 4,
            n_d2d: 8,
            m_uplink: 4,
            m_downlink: 4,
            bs_power_dbm,
            ..ScenarioParams::default()
        },
        drops: 120,
        base_seed: 60_606,
        algorithms: vec![Algorithm::Cluster],
        csi_scenarios: vec![CsiScenario::Full],
        objective: UtilityKind::WeightedSumRateFullCsi,
        measure_runtime: false,
    }
}

#[test]
fn criterion_06_uplink_preference() {
    let started = std::time::Instant::now();
    let gap_at = |bs_dbm: f64| {
        let rows = run_experiment(&fig3_config(bs_dbm)).unwrap();
        let s = summarize(&rows, &[GroupField::Algorithm]).unwrap();
        (s[0].mean_d2d_uplink, s[0].mean_d2d_downlink)
    };
    let (up46, down46) = gap_at(46.0);
    let (up30, down30) = gap_at(30.0);
    assert!(
        up46 > down46,
        "at 46 dBm BS power, D2D should prefer uplink: up {up46:.2} vs down {down46:.2}"
    );
    let gap46 = up46 - down46;
    let gap30 = up30 - down30;
    assert!(
        gap30 < gap46,
        "lowering BS power to 30 dBm should shrink the uplink preference: {gap30:.2} !< {gap46:.2}"
    );
    let secs = started.elapsed().as_secs_f64();
    assert!(secs < 600.0, "criterion 6 must finish within 10 minutes, took {secs:.1}s");
    pass(
        "criterion 6 (uplink preference, 120 drops)",
        &format!(
            "46 dBm: {up46:.2} up vs {down46:.2} down; 30 dBm: {up30:.2} up vs {down30:.2} down; {secs:.1}s"
        ),
    );
}

// ---------------------------------------------------------------------------
// Criterion 7 — multi-sharing gain grows with the number of D2D links
// ---------------------------------------------------------------------------

fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    let rank = |v: &[f64]| -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap());
        let mut r = vec![0.0; v.len()];
        for (pos, &i) in idx.iter().enumerate() {
            r[i] = pos as f64;
        }
        r
    };
    let rx = rank(xs);
    let ry = rank(ys);
    let n = xs.len() as f64;
    let d2: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - b) * (a - b)).sum();
    1.0 - 6.0 * d2 / (n * (n * n - 1.0))
}

#[test]
fn criterion_07_multi_sharing_gain() {
    let n_d2d_values = [2usize, 4, 6, 8];
    let mut gaps = Vec::new();
    for &n_d2d in &n_d2d_values {
        let cfg = ExperimentConfig {
            scenario: ScenarioParams {
                n_uplink_cellular: 4,
                n_downlink_cellular: 4,
                n_d2d,
                m_uplink: 4,
                m_downlink: 4,
                ..ScenarioParams::default()
            },
            drops: 120,
            base_seed: 70_707,
            algorithms: vec![Algorithm::Cluster, Algorithm::SemiOrthogonal],
            csi_scenarios: vec![CsiScenario::Full],
            objective: UtilityKind::WeightedSumRateFullCsi,
            measure_runtime: false,
        };
        let rows = run_experiment(&cfg).unwrap();
        let s = summarize(&rows, &[GroupField::Algorithm]).unwrap();
        let cluster = s.iter().find(|r| r.key[0] == "cluster").unwrap().mean_utility;
        let semi = s.iter().find(|r| r.key[0] == "semi_orthogonal").unwrap().mean_utility;
        let gap = cluster - semi;
        assert!(gap > 0.0, "N_d={n_d2d}: multi-sharing gap must be positive, got {gap:.4}");
        gaps.push(gap);
    }
    let xs: Vec<f64> = n_d2d_values.iter().map(|&v| v as f64).collect();
    let rho = spearman(&xs, &gaps);
    assert!(rho > 0.0, "gap must grow with N_d: gaps {gaps:?}, spearman {rho:.2}");
    pass(
        "criterion 7 (cluster minus semi-orthogonal gap positive and increasing in N_d, 120 drops)",
        &format!("gaps = {gaps:?} bits/s/Hz, spearman = {rho:.2}"),
    );
}

// ---------------------------------------------------------------------------
// Criterion 8 — CSI scenario ordering
// ---------------------------------------------------------------------------

#[test]
fn criterion_08_csi_ordering() {
    // The optimal solver runs the five CSI scenarios on shared drops in the
    // figure setting where the S1/S3 closeness claim lives (three channels
    // per band, six D2D links). Smaller channel counts crowd the uplink and
    // push D2D onto the downlink, where the BS-to-D2D fading knowledge that
    // separates S1 from S3 genuinely matters more than the device-to-device
    // knowledge separating full CSI from S1; the gap structure below is
    // specific to this regime.
    let started = std::time::Instant::now();
    let cfg = ExperimentConfig {
        scenario: ScenarioParams {
            n_uplink_cellular: 3,
            n_downlink_cellular: 3,
            n_d2d: 6,
            m_uplink: 3,
            m_downlink: 3,
            ..ScenarioParams::default()
        },
        drops: 1500,
        base_seed: 31_337,
        algorithms: vec![Algorithm::Dp],
        csi_scenarios: CsiScenario::ALL.to_vec(),
        objective: UtilityKind::ExpectedWeightedSumRate,
        measure_runtime: false,
    };
    let rows = run_experiment(&cfg).unwrap();
    let s = summarize(&rows, &[GroupField::Csi]).unwrap();
    let mean = |name: &str| s.iter().find(|r| r.key[0] == name).unwrap().mean_utility;
    let (full, s1, s2, s3, s4) = (mean("full"), mean("s1"), mean("s2"), mean("s3"), mean("s4"));

    assert!(full >= s1 && s1 >= s2, "expected full >= s1 >= s2: {full:.3} / {s1:.3} / {s2:.3}");
    assert!(full >= s3 && s3 >= s4, "expected full >= s3 >= s4: {full:.3} / {s3:.3} / {s4:.3}");
    let gap_s1_s3 = (s1 - s3).abs();
    for (name, gap) in [("full-s1", full - s1), ("s1-s2", s1 - s2), ("s3-s4", s3 - s4)] {
        assert!(
            gap_s1_s3 <= gap,
            "|s1-s3| = {gap_s1_s3:.4} should be the smallest adjacent gap, but {name} = {gap:.4}"
        );
    }
    let secs = started.elapsed().as_secs_f64();
    pass(
        "criterion 8 (CSI ordering full>=s1>=s2, full>=s3>=s4, |s1-s3| smallest gap, 1500 drops)",
        &format!(
            "means: full {full:.3}, s1 {s1:.3}, s2 {s2:.3}, s3 {s3:.3}, s4 {s4:.3}; {secs:.1}s"
        ),
    );
}

// ---------------------------------------------------------------------------
// Criterion 9 — matching exactness
// ---------------------------------------------------------------------------

#[test]
fn criterion_09_matching_exactness() {
    // integer weights make every optimal total bit-identical regardless of
    // which optimal matching is selected
    fn brute(w: &WeightMatrix, require: bool) -> Option<f64> {
        fn rec(w: &WeightMatrix, require: bool, row: usize, used: &mut Vec<bool>, acc: f64) -> Option<f64> {
            if row == w.rows() {
                return Some(acc);
            }
            let mut best = if require { None } else { rec(w, require, row + 1, used, acc) };
            for c in 0..w.cols() {
                if !used[c] {
                    if let Some(v) = w.get(row, c) {
                        used[c] = true;
                        let cand = rec(w, require, row + 1, used, acc + v);
                        used[c] = false;
                        best = match (best, cand) {
                            (None, x) => x,
                            (x, None) => x,
                            (Some(a), Some(b)) => Some(a.max(b)),
                        };
                    }
                }
            }
            best
        }
        rec(w, require, 0, &mut vec![false; w.cols()], 0.0)
    }

    let mut rng = ChaCha8Rng::seed_from_u64(90_909);
    for case in 0..100 {
        let n = rng.gen_range(1..=7);
        let w = WeightMatrix::from_fn(n, n, |_, _| {
            if rng.gen_bool(0.25) {
                None
            } else {
                Some(rng.gen_range(-10..=10) as f64)
            }
        });
        for require in [false, true] {
            let got = max_weight_matching(&w, require).unwrap();
            match brute(&w, require) {
                Some(best) => {
                    assert_eq!(got.total_weight, best, "case {case} require={require}");
                    if require {
                        assert!(got.complete);
                    }
                }
                None => assert!(!got.complete, "case {case}: expected infeasible"),
            }
        }
    }
    pass(
        "criterion 9 (Kuhn-Munkres equals permutation brute force exactly, 100 matrices n <= 7)",
        "exact f64 equality with forbidden edges, optional and perfect-on-rows modes",
    );
}

// ---------------------------------------------------------------------------
// Criterion 10 — end-to-end determinism
// ---------------------------------------------------------------------------

#[test]
fn criterion_10_byte_identical_csv() {
    let cfg = ExperimentConfig {
        scenario: ScenarioParams {
            n_uplink_cellular: 2,
            n_downlink_cellular: 2,
            n_d2d: 3,
            m_uplink: 2,
            m_downlink: 2,
            ..ScenarioParams::default()
        },
        drops: 6,
        base_seed: 123_456,
        algorithms: vec![Algorithm::Dp, Algorithm::Cluster, Algorithm::SemiOrthogonal],
        csi_scenarios: vec![CsiScenario::Full, CsiScenario::S3],
        objective: UtilityKind::ExpectedWeightedSumRate,
        measure_runtime: false,
    };
    let a = rows_to_csv(&run_experiment(&cfg).unwrap());
    let b = rows_to_csv(&run_experiment(&cfg).unwrap());
    assert_eq!(a.as_bytes(), b.as_bytes(), "two runs must produce identical CSV bytes");
    assert!(a.lines().count() == 1 + 6 * 3 * 2);
    assert!(a.starts_with(ResultRow::CSV_HEADER));
    // seeds recorded in the CSV follow the documented splitting rule
    let second_line = a.lines().nth(1).unwrap();
    assert!(second_line.starts_with(&format!("0,{}", drop_seed(123_456, 0))));
    pass(
        "criterion 10 (byte-identical CSV across runs)",
        &format!("{} rows, parallel drops, stable ordering", 6 * 3 * 2),
    );
}
