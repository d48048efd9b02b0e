//! Network model: links, channels, fading, CSI visibility, and random
//! scenario generation.
//!
//! A [`Scenario`] is one random "drop": user positions, per-pair large-scale
//! gains (path loss × shadowing × transmit power) and per-channel small-scale
//! gains. It is immutable after generation and a pure function of
//! `(params, seed)`, so solvers for different CSI assumptions can share one
//! drop and distinct drops can run in parallel.

use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma as GammaDist, StandardNormal};

pub type LinkId = usize;

/// Role of a communication link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinkKind {
    /// User device transmitting to the base station.
    UplinkCellular,
    /// Base station transmitting to a user device.
    DownlinkCellular,
    /// Direct device-to-device link.
    D2d,
}

impl LinkKind {
    pub fn is_cellular(self) -> bool {
        matches!(self, LinkKind::UplinkCellular | LinkKind::DownlinkCellular)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Band {
    Uplink,
    Downlink,
}

/// Flat 2-D position in meters; the base station sits at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    pub const ORIGIN: Position = Position { x: 0.0, y: 0.0 };

    pub fn distance(&self, other: &Position) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Debug, Clone)]
pub struct Link {
    pub id: LinkId,
    pub kind: LinkKind,
    pub tx_position: Position,
    pub rx_position: Position,
    pub tx_power_dbm: f64,
    pub weight: f64,
    /// Minimum SINR requirement, linear ratio.
    pub sinr_min: f64,
    /// Minimum successful-transmission probability, in (0, 1].
    pub succ_prob_min: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct Channel {
    pub id: usize,
    pub band: Band,
}

/// Log-distance path loss: `constant_db + exponent_coeff_db · log10(d_km)`.
#[derive(Debug, Clone, Copy)]
pub struct PathlossModel {
    pub constant_db: f64,
    /// dB per decade of distance; must be positive so gain decreases with
    /// distance.
    pub exponent_coeff_db: f64,
}

/// 128.1 + 37.6 log10(d), the macro-cell model for links involving the BS.
pub const CELLULAR_PATHLOSS: PathlossModel =
    PathlossModel { constant_db: 128.1, exponent_coeff_db: 37.6 };

/// 148 + 40 log10(d), for links between user devices.
pub const D2D_PATHLOSS: PathlossModel = PathlossModel { constant_db: 148.0, exponent_coeff_db: 40.0 };

/// Path loss in dB at `distance_km`.
pub fn pathloss_db(model: &PathlossModel, distance_km: f64) -> Result<f64> {
    if !(distance_km > 0.0) {
        return Err(Error::Domain(format!("path loss requires distance > 0, got {distance_km}")));
    }
    if !(model.exponent_coeff_db > 0.0) {
        return Err(Error::Domain("path loss exponent coefficient must be positive".into()));
    }
    Ok(model.constant_db + model.exponent_coeff_db * distance_km.log10())
}

/// Normalized small-scale power fading distribution (mean 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FadingSpec {
    /// Gamma-distributed power with shape `m` and scale `1/m`; `m = 1` is
    /// Rayleigh.
    Nakagami { m: f64 },
    /// Ricean with linear K-factor (line-of-sight to scattered power ratio).
    Ricean { k_factor: f64 },
}

impl FadingSpec {
    pub const RAYLEIGH: FadingSpec = FadingSpec::Nakagami { m: 1.0 };

    /// Power pdf at `x ≥ 0`.
    pub fn pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        match *self {
            FadingSpec::Nakagami { m } => {
                if x == 0.0 {
                    return if m == 1.0 {
                        1.0
                    } else if m > 1.0 {
                        0.0
                    } else {
                        f64::INFINITY
                    };
                }
                (m * m.ln() + (m - 1.0) * x.ln() - m * x - crate::special::ln_gamma(m)).exp()
            }
            FadingSpec::Ricean { k_factor: k } => {
                let s = 1.0 + k;
                s * (-k - s * x).exp() * crate::special::bessel_i0(2.0 * (k * s * x).sqrt())
            }
        }
    }

    /// Draw one power gain. Mean is 1 for any parameters.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            FadingSpec::Nakagami { m } => {
                let g = GammaDist::new(m, 1.0 / m).expect("valid Nakagami shape");
                g.sample(rng)
            }
            FadingSpec::Ricean { k_factor: k } => {
                // envelope^2 of a complex Gaussian with LOS offset,
                // scaled so E[power] = 1
                let mu = (k / (k + 1.0)).sqrt();
                let sigma = (0.5 / (k + 1.0)).sqrt();
                let z1: f64 = rng.sample(StandardNormal);
                let z2: f64 = rng.sample(StandardNormal);
                let i = mu + sigma * z1;
                let q = sigma * z2;
                i * i + q * q
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            FadingSpec::Nakagami { m } if m >= 0.5 => Ok(()),
            FadingSpec::Nakagami { m } => {
                Err(Error::Config(format!("Nakagami shape must be >= 0.5, got {m}")))
            }
            FadingSpec::Ricean { k_factor } if k_factor > 0.0 => Ok(()),
            FadingSpec::Ricean { k_factor } => {
                Err(Error::Config(format!("Ricean K-factor must be > 0, got {k_factor}")))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// CSI scenarios
// ---------------------------------------------------------------------------

/// What instantaneous small-scale CSI the base station can acquire.
///
/// Path loss and shadowing of all links are always known; the scenarios
/// differ only in which fading gains are reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CsiScenario {
    Full,
    S1,
    S2,
    S3,
    S4,
}

/// Per-link-class visibility flags for one [`CsiScenario`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CsiVisibility {
    pub knows_cellular_links: bool,
    pub knows_d2d_links: bool,
    pub knows_device_to_device_interference: bool,
    pub knows_bs_to_d2drx_interference: bool,
    pub knows_d2dtx_to_bs_interference: bool,
}

impl CsiScenario {
    pub const ALL: [CsiScenario; 5] =
        [CsiScenario::Full, CsiScenario::S1, CsiScenario::S2, CsiScenario::S3, CsiScenario::S4];

    pub fn visibility(self) -> CsiVisibility {
        let f = |a, b, c, d, e| CsiVisibility {
            knows_cellular_links: a,
            knows_d2d_links: b,
            knows_device_to_device_interference: c,
            knows_bs_to_d2drx_interference: d,
            knows_d2dtx_to_bs_interference: e,
        };
        match self {
            CsiScenario::Full => f(true, true, true, true, true),
            CsiScenario::S1 => f(true, true, false, true, true),
            CsiScenario::S2 => f(true, false, false, true, true),
            CsiScenario::S3 => f(true, true, false, false, true),
            CsiScenario::S4 => f(true, true, false, false, false),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CsiScenario::Full => "full",
            CsiScenario::S1 => "s1",
            CsiScenario::S2 => "s2",
            CsiScenario::S3 => "s3",
            CsiScenario::S4 => "s4",
        }
    }

    pub fn parse(s: &str) -> Result<CsiScenario> {
        match s.trim().to_ascii_lowercase().as_str() {
            "full" => Ok(CsiScenario::Full),
            "s1" => Ok(CsiScenario::S1),
            "s2" => Ok(CsiScenario::S2),
            "s3" => Ok(CsiScenario::S3),
            "s4" => Ok(CsiScenario::S4),
            other => Err(Error::Config(format!("unknown CSI scenario '{other}'"))),
        }
    }
}

impl std::fmt::Display for CsiScenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Class of an interference pair (transmitter of `z` into receiver of `j`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterferenceClass {
    /// Both endpoints are user devices. This includes an uplink-cellular
    /// transmitter interfering into a D2D (or downlink-cellular) receiver:
    /// the transmitter is a device, so its fading is reported like any other
    /// device-to-device interference.
    BetweenDevices,
    /// Base station into a D2D receiver.
    BsToD2dRx,
    /// D2D transmitter into the base station.
    D2dTxToBs,
    /// Cellular into cellular; never arises on a shared channel because at
    /// most one cellular link occupies a channel.
    CellularToCellular,
}

pub fn interference_class(tx: LinkKind, rx: LinkKind) -> InterferenceClass {
    use LinkKind::*;
    match (tx, rx) {
        (D2d, UplinkCellular) => InterferenceClass::D2dTxToBs,
        (DownlinkCellular, D2d) => InterferenceClass::BsToD2dRx,
        (D2d, D2d) | (UplinkCellular, D2d) | (D2d, DownlinkCellular) => {
            InterferenceClass::BetweenDevices
        }
        (UplinkCellular, DownlinkCellular) => InterferenceClass::BetweenDevices,
        _ => InterferenceClass::CellularToCellular,
    }
}

impl CsiVisibility {
    /// Is the fading of interference pair `tx -> rx` reported to the BS?
    pub fn knows_interference(&self, tx: LinkKind, rx: LinkKind) -> bool {
        match interference_class(tx, rx) {
            InterferenceClass::BetweenDevices => self.knows_device_to_device_interference,
            InterferenceClass::BsToD2dRx => self.knows_bs_to_d2drx_interference,
            InterferenceClass::D2dTxToBs => self.knows_d2dtx_to_bs_interference,
            InterferenceClass::CellularToCellular => true,
        }
    }

    /// Is the fading of link `kind`'s own signal reported?
    pub fn knows_signal(&self, kind: LinkKind) -> bool {
        if kind.is_cellular() {
            self.knows_cellular_links
        } else {
            self.knows_d2d_links
        }
    }
}

// ---------------------------------------------------------------------------
// Scenario
// ---------------------------------------------------------------------------

/// Geometry, power, fading and QoS parameters for scenario generation.
///
/// Defaults follow the usual single-cell simulation setup: 500 m cell,
/// 60 m D2D group radius, 24 dBm devices, 46 dBm BS split evenly across
/// downlink channels, -114 dBm noise, 0 dB SINR threshold, 99% success
/// probability floor, 8 dB log-normal shadowing, Rayleigh fading.
#[derive(Debug, Clone)]
pub struct ScenarioParams {
    pub cell_radius_m: f64,
    pub group_radius_m: f64,
    pub n_uplink_cellular: usize,
    pub n_downlink_cellular: usize,
    pub n_d2d: usize,
    pub m_uplink: usize,
    pub m_downlink: usize,
    pub ue_power_dbm: f64,
    pub d2d_power_dbm: f64,
    /// Total BS power; each downlink channel radiates
    /// `bs_power_dbm - 10 log10(m_downlink)`.
    pub bs_power_dbm: f64,
    pub noise_dbm: f64,
    pub sinr_min_db: f64,
    pub succ_prob_min: f64,
    pub shadowing_std_db: f64,
    pub link_weight: f64,
    pub cellular_fading: FadingSpec,
    pub d2d_fading: FadingSpec,
    /// Nakagami shape of every interference pair.
    pub interference_shape: f64,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        ScenarioParams {
            cell_radius_m: 500.0,
            group_radius_m: 60.0,
            n_uplink_cellular: 2,
            n_downlink_cellular: 2,
            n_d2d: 4,
            m_uplink: 2,
            m_downlink: 2,
            ue_power_dbm: 24.0,
            d2d_power_dbm: 24.0,
            bs_power_dbm: 46.0,
            noise_dbm: -114.0,
            sinr_min_db: 0.0,
            succ_prob_min: 0.99,
            shadowing_std_db: 8.0,
            link_weight: 1.0,
            cellular_fading: FadingSpec::RAYLEIGH,
            d2d_fading: FadingSpec::RAYLEIGH,
            interference_shape: 1.0,
        }
    }
}

impl ScenarioParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_uplink_cellular > self.m_uplink {
            return Err(Error::Config(format!(
                "{} uplink cellular links exceed {} uplink channels",
                self.n_uplink_cellular, self.m_uplink
            )));
        }
        if self.n_downlink_cellular > self.m_downlink {
            return Err(Error::Config(format!(
                "{} downlink cellular links exceed {} downlink channels",
                self.n_downlink_cellular, self.m_downlink
            )));
        }
        if self.m_uplink + self.m_downlink == 0 {
            return Err(Error::Config("at least one channel is required".into()));
        }
        if !(self.cell_radius_m > 0.0) || !(self.group_radius_m > 0.0) {
            return Err(Error::Config("radii must be positive".into()));
        }
        if !(self.succ_prob_min > 0.0 && self.succ_prob_min <= 1.0) {
            return Err(Error::Config("succ_prob_min must lie in (0, 1]".into()));
        }
        if !(self.interference_shape >= 0.5) {
            return Err(Error::Config("interference_shape must be >= 0.5".into()));
        }
        if !(self.link_weight >= 0.0) {
            return Err(Error::Config("link_weight must be nonnegative".into()));
        }
        self.cellular_fading.validate()?;
        self.d2d_fading.validate()?;
        Ok(())
    }

    pub fn n_links(&self) -> usize {
        self.n_uplink_cellular + self.n_downlink_cellular + self.n_d2d
    }

    pub fn n_channels(&self) -> usize {
        self.m_uplink + self.m_downlink
    }
}

/// One random drop of the network.
///
/// `large_scale[z][j]` is λ: transmit power of link z times path gain from
/// z's transmitter to j's receiver (linear mW). `small_scale[i][z][j]` is the
/// per-channel fading gain β, and `interference_shape[z][j]` the Nakagami
/// shape of that pair. dB only ever appears at the I/O boundary.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub links: Vec<Link>,
    pub channels: Vec<Channel>,
    pub bs_position: Position,
    pub large_scale: Vec<Vec<f64>>,
    pub small_scale: Vec<Vec<Vec<f64>>>,
    pub interference_shape: Vec<Vec<f64>>,
    pub signal_fading: Vec<FadingSpec>,
    /// Noise power σ², linear mW.
    pub noise_power: f64,
    pub rng_seed: u64,
}

impl Scenario {
    pub fn n_links(&self) -> usize {
        self.links.len()
    }

    pub fn n_channels(&self) -> usize {
        self.channels.len()
    }

    /// λ for the ordered pair (transmitter of `z`, receiver of `j`).
    pub fn lambda(&self, z: LinkId, j: LinkId) -> f64 {
        self.large_scale[z][j]
    }

    /// β for the ordered pair on one channel.
    pub fn beta(&self, channel: usize, z: LinkId, j: LinkId) -> f64 {
        self.small_scale[channel][z][j]
    }

    pub fn shape(&self, z: LinkId, j: LinkId) -> f64 {
        self.interference_shape[z][j]
    }

    /// May `link` use `channel`? Cellular links are pinned to their band.
    pub fn band_ok(&self, link: LinkId, channel: usize) -> bool {
        match self.links[link].kind {
            LinkKind::UplinkCellular => self.channels[channel].band == Band::Uplink,
            LinkKind::DownlinkCellular => self.channels[channel].band == Band::Downlink,
            LinkKind::D2d => true,
        }
    }

    pub fn cellular_ids(&self) -> Vec<LinkId> {
        self.links.iter().filter(|l| l.kind.is_cellular()).map(|l| l.id).collect()
    }

    pub fn d2d_ids(&self) -> Vec<LinkId> {
        self.links.iter().filter(|l| l.kind == LinkKind::D2d).map(|l| l.id).collect()
    }

    /// Deterministic SINR of `link` on `channel` when sharing with `members`
    /// (which may or may not contain `link` itself).
    pub fn realized_sinr(&self, channel: usize, link: LinkId, members: &[LinkId]) -> f64 {
        let mut denom = self.noise_power;
        for &z in members {
            if z != link {
                denom += self.lambda(z, link) * self.beta(channel, z, link);
            }
        }
        self.lambda(link, link) * self.beta(channel, link, link) / denom
    }
}

/// Interferers of `link` (among `coexisting` on the same channel) whose
/// small-scale fading the BS cannot acquire under `csi`.
pub fn unknown_interferers(
    scenario: &Scenario,
    csi: CsiScenario,
    link: LinkId,
    coexisting: &[LinkId],
) -> Vec<LinkId> {
    let vis = csi.visibility();
    let rx_kind = scenario.links[link].kind;
    coexisting
        .iter()
        .copied()
        .filter(|&z| z != link && !vis.knows_interference(scenario.links[z].kind, rx_kind))
        .collect()
}

fn dbm_to_mw(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0)
}

/// Distances below this are clamped so the gain table stays finite even for
/// pairs that never share a channel (e.g. BS to itself).
const MIN_PAIR_DISTANCE_M: f64 = 1.0;

/// Generate one drop. Deterministic in `(params, seed)`.
///
/// Cellular users fall uniformly in the cell disc; each D2D pair is drawn
/// uniformly inside a group disc of radius `group_radius_m` whose center is
/// itself uniform in the cell. Shadowing is one independent log-normal draw
/// per ordered link pair; fading is drawn independently per channel and pair.
/// Pairs involving the BS use [`CELLULAR_PATHLOSS`], device-to-device pairs
/// use [`D2D_PATHLOSS`].
pub fn generate_scenario(params: &ScenarioParams, seed: u64) -> Result<Scenario> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let uniform_disc = |rng: &mut ChaCha8Rng, center: Position, radius: f64| {
        let r = radius * rng.gen::<f64>().sqrt();
        let theta = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
        Position { x: center.x + r * theta.cos(), y: center.y + r * theta.sin() }
    };

    let bs = Position::ORIGIN;
    let sinr_min = dbm_to_mw(params.sinr_min_db); // same 10^(dB/10) map for ratios
    let dl_power_dbm = if params.m_downlink > 0 {
        params.bs_power_dbm - 10.0 * (params.m_downlink as f64).log10()
    } else {
        params.bs_power_dbm
    };

    let mut links = Vec::with_capacity(params.n_links());
    for _ in 0..params.n_uplink_cellular {
        let ue = uniform_disc(&mut rng, bs, params.cell_radius_m);
        links.push((LinkKind::UplinkCellular, ue, bs, params.ue_power_dbm));
    }
    for _ in 0..params.n_downlink_cellular {
        let ue = uniform_disc(&mut rng, bs, params.cell_radius_m);
        links.push((LinkKind::DownlinkCellular, bs, ue, dl_power_dbm));
    }
    for _ in 0..params.n_d2d {
        let center = uniform_disc(&mut rng, bs, params.cell_radius_m);
        let tx = uniform_disc(&mut rng, center, params.group_radius_m);
        let rx = uniform_disc(&mut rng, center, params.group_radius_m);
        links.push((LinkKind::D2d, tx, rx, params.d2d_power_dbm));
    }
    let links: Vec<Link> = links
        .into_iter()
        .enumerate()
        .map(|(id, (kind, tx, rx, p))| Link {
            id,
            kind,
            tx_position: tx,
            rx_position: rx,
            tx_power_dbm: p,
            weight: params.link_weight,
            sinr_min,
            succ_prob_min: params.succ_prob_min,
        })
        .collect();

    let mut channels = Vec::with_capacity(params.n_channels());
    for i in 0..params.m_uplink {
        channels.push(Channel { id: i, band: Band::Uplink });
    }
    for i in 0..params.m_downlink {
        channels.push(Channel { id: params.m_uplink + i, band: Band::Downlink });
    }

    let n = links.len();
    let shadow_sigma = params.shadowing_std_db;
    let mut large_scale = vec![vec![0.0; n]; n];
    for z in 0..n {
        for j in 0..n {
            let d = links[z].tx_position.distance(&links[j].rx_position).max(MIN_PAIR_DISTANCE_M);
            let involves_bs = matches!(links[z].kind, LinkKind::DownlinkCellular)
                || matches!(links[j].kind, LinkKind::UplinkCellular);
            let model = if involves_bs { &CELLULAR_PATHLOSS } else { &D2D_PATHLOSS };
            let pl_db = pathloss_db(model, d / 1000.0)?;
            let shadow_db: f64 = shadow_sigma * rng.sample::<f64, _>(StandardNormal);
            large_scale[z][j] = dbm_to_mw(links[z].tx_power_dbm - pl_db + shadow_db);
        }
    }

    let interference_shape = vec![vec![params.interference_shape; n]; n];
    let signal_fading: Vec<FadingSpec> = links
        .iter()
        .map(|l| if l.kind == LinkKind::D2d { params.d2d_fading } else { params.cellular_fading })
        .collect();

    let m = channels.len();
    let mut small_scale = vec![vec![vec![0.0; n]; n]; m];
    for ch in small_scale.iter_mut() {
        for z in 0..n {
            for j in 0..n {
                let spec = if z == j {
                    signal_fading[j]
                } else {
                    FadingSpec::Nakagami { m: interference_shape[z][j] }
                };
                ch[z][j] = spec.sample(&mut rng);
            }
        }
    }

    Ok(Scenario {
        links,
        channels,
        bs_position: bs,
        large_scale,
        small_scale,
        interference_shape,
        signal_fading,
        noise_power: dbm_to_mw(params.noise_dbm),
        rng_seed: seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pathloss_examples() {
        assert!((pathloss_db(&CELLULAR_PATHLOSS, 1.0).unwrap() - 128.1).abs() < 1e-12);
        assert!((pathloss_db(&CELLULAR_PATHLOSS, 0.1).unwrap() - 90.5).abs() < 1e-12);
        let d2d = pathloss_db(&D2D_PATHLOSS, 0.05).unwrap();
        assert!((d2d - (148.0 + 40.0 * 0.05f64.log10())).abs() < 1e-12);
        assert!((d2d - 95.9588).abs() < 1e-3);
        assert!(pathloss_db(&CELLULAR_PATHLOSS, 0.0).is_err());
        assert!(pathloss_db(&CELLULAR_PATHLOSS, -1.0).is_err());
    }

    #[test]
    fn pathloss_monotone_in_distance() {
        let mut prev = f64::NEG_INFINITY;
        for i in 1..100 {
            let d = i as f64 * 0.01;
            let pl = pathloss_db(&D2D_PATHLOSS, d).unwrap();
            assert!(pl > prev);
            prev = pl;
        }
    }

    #[test]
    fn csi_table_matches_exactly() {
        use CsiScenario::*;
        // (scenario, [cellular, d2d, dev-dev, bs->d2drx, d2dtx->bs])
        let expect = [
            (Full, [true, true, true, true, true]),
            (S1, [true, true, false, true, true]),
            (S2, [true, false, false, true, true]),
            (S3, [true, true, false, false, true]),
            (S4, [true, true, false, false, false]),
        ];
        for (s, row) in expect {
            let v = s.visibility();
            assert_eq!(
                [
                    v.knows_cellular_links,
                    v.knows_d2d_links,
                    v.knows_device_to_device_interference,
                    v.knows_bs_to_d2drx_interference,
                    v.knows_d2dtx_to_bs_interference
                ],
                row,
                "{s:?}"
            );
        }
    }

    fn small_params() -> ScenarioParams {
        ScenarioParams {
            n_uplink_cellular: 4,
            n_downlink_cellular: 4,
            n_d2d: 8,
            m_uplink: 4,
            m_downlink: 4,
            ..ScenarioParams::default()
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let p = small_params();
        let a = generate_scenario(&p, 42).unwrap();
        let b = generate_scenario(&p, 42).unwrap();
        assert_eq!(a.large_scale, b.large_scale);
        assert_eq!(a.small_scale, b.small_scale);
        for (la, lb) in a.links.iter().zip(&b.links) {
            assert_eq!(la.tx_position, lb.tx_position);
            assert_eq!(la.rx_position, lb.rx_position);
        }
        let c = generate_scenario(&p, 43).unwrap();
        assert_ne!(a.large_scale, c.large_scale);
    }

    #[test]
    fn generation_counts_and_kind_order() {
        let p = ScenarioParams {
            n_uplink_cellular: 4,
            n_downlink_cellular: 4,
            n_d2d: 8,
            m_uplink: 4,
            m_downlink: 4,
            ..ScenarioParams::default()
        };
        let s = generate_scenario(&p, 7).unwrap();
        assert_eq!(s.n_links(), 16);
        for (i, l) in s.links.iter().enumerate() {
            let want = if i < 4 {
                LinkKind::UplinkCellular
            } else if i < 8 {
                LinkKind::DownlinkCellular
            } else {
                LinkKind::D2d
            };
            assert_eq!(l.kind, want, "link {i}");
            assert_eq!(l.id, i);
        }
        assert_eq!(s.channels.len(), 8);
        assert!(s.channels[..4].iter().all(|c| c.band == Band::Uplink));
        assert!(s.channels[4..].iter().all(|c| c.band == Band::Downlink));
    }

    #[test]
    fn d2d_pairs_live_in_their_group() {
        let p = small_params();
        for seed in 0..50 {
            let s = generate_scenario(&p, seed).unwrap();
            for l in s.links.iter().filter(|l| l.kind == LinkKind::D2d) {
                let d = l.tx_position.distance(&l.rx_position);
                assert!(d <= 2.0 * p.group_radius_m + 1e-9, "seed {seed}: pair distance {d}");
            }
        }
    }

    #[test]
    fn cellular_endpoints_sit_at_bs() {
        let s = generate_scenario(&small_params(), 3).unwrap();
        for l in &s.links {
            match l.kind {
                LinkKind::UplinkCellular => assert_eq!(l.rx_position, Position::ORIGIN),
                LinkKind::DownlinkCellular => assert_eq!(l.tx_position, Position::ORIGIN),
                LinkKind::D2d => {}
            }
        }
    }

    #[test]
    fn gains_positive_and_fading_normalized() {
        let s = generate_scenario(&small_params(), 11).unwrap();
        for row in &s.large_scale {
            for &v in row {
                assert!(v > 0.0);
            }
        }
        for ch in &s.small_scale {
            for row in ch {
                for &v in row {
                    assert!(v > 0.0);
                }
            }
        }
    }

    #[test]
    fn fading_mean_is_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for spec in [
            FadingSpec::RAYLEIGH,
            FadingSpec::Nakagami { m: 2.5 },
            FadingSpec::Ricean { k_factor: 2.0 },
        ] {
            let n = 100_000;
            let mean: f64 = (0..n).map(|_| spec.sample(&mut rng)).sum::<f64>() / n as f64;
            assert!((mean - 1.0).abs() < 0.02, "{spec:?}: mean {mean}");
        }
    }

    #[test]
    fn rayleigh_draws_are_exponential() {
        // empirical CDF at 1.0 vs 1 - e^{-1}
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let n = 100_000;
        let below = (0..n).filter(|_| FadingSpec::RAYLEIGH.sample(&mut rng) <= 1.0).count();
        let cdf = below as f64 / n as f64;
        assert!((cdf - (1.0 - (-1.0f64).exp())).abs() < 0.005, "cdf {cdf}");
    }

    #[test]
    fn ricean_pdf_integrates_to_one() {
        let spec = FadingSpec::Ricean { k_factor: 2.0 };
        let qc = crate::special::QuadratureControl::default();
        let total = crate::special::integrate(|x| spec.pdf(x), 0.0, f64::INFINITY, &qc).unwrap();
        assert!((total - 1.0).abs() < 1e-8, "total {total}");
        let mean =
            crate::special::integrate(|x| x * spec.pdf(x), 0.0, f64::INFINITY, &qc).unwrap();
        assert!((mean - 1.0).abs() < 1e-8, "mean {mean}");
    }

    #[test]
    fn unknown_interferer_classification() {
        let p = ScenarioParams {
            n_uplink_cellular: 1,
            n_downlink_cellular: 1,
            n_d2d: 2,
            m_uplink: 1,
            m_downlink: 1,
            ..ScenarioParams::default()
        };
        let s = generate_scenario(&p, 5).unwrap();
        let (ulc, dlc, d1, d2) = (0, 1, 2, 3);

        // full CSI: nothing is unknown
        assert!(unknown_interferers(&s, CsiScenario::Full, d1, &[ulc, d1, d2]).is_empty());

        // S4: a D2D transmitter into the BS receiver is unknown
        assert_eq!(unknown_interferers(&s, CsiScenario::S4, ulc, &[ulc, d1]), vec![d1]);
        // ... but known in S3
        assert!(unknown_interferers(&s, CsiScenario::S3, ulc, &[ulc, d1]).is_empty());

        // S1: BS interference into a D2D receiver is known ...
        assert!(unknown_interferers(&s, CsiScenario::S1, d1, &[dlc, d1]).is_empty());
        // ... while device-to-device interference is not
        assert_eq!(unknown_interferers(&s, CsiScenario::S1, d1, &[dlc, d1, d2]), vec![d2]);
        // uplink-cellular transmitter into a D2D receiver counts as
        // device-to-device interference
        assert_eq!(unknown_interferers(&s, CsiScenario::S1, d1, &[ulc, d1]), vec![ulc]);
    }

    #[test]
    fn invalid_counts_rejected() {
        let p = ScenarioParams { n_uplink_cellular: 3, m_uplink: 2, ..ScenarioParams::default() };
        assert!(matches!(generate_scenario(&p, 0), Err(Error::Config(_))));
    }
}
