//! Successful-transmission probability and expected rate for one link on
//! one channel.
//!
//! The SINR seen by link j is λβ / (ν + Y) where ν collects noise plus all
//! interference whose fading the BS knows, and Y = Σ λ_z β_z sums the
//! interferers whose fading is unknown (each β_z gamma-distributed with
//! shape m_z and mean 1). Everything here answers two questions about that
//! ratio: Pr[SINR ≥ ξ_min] and E[log2(1+SINR) · 1{SINR ≥ ξ_min}].
//!
//! Evaluation routes, fastest applicable first:
//! * no unknown interferers — indicator / tail integral of the signal pdf;
//! * all-Rayleigh interferers with distinct scales — hypoexponential closed
//!   forms (scaled exponential integrals, no series);
//! * integer shapes — gamma-series for the pdf of Y with a closed-form
//!   recurrence for the log moments;
//! * anything else — the same series for the probability plus adaptive
//!   quadrature for the rate.
//!
//! Rates are bits/s/Hz: the algebra runs in nats and converts once by
//! log2(e). A Monte-Carlo oracle ([`mc_oracle`]) estimates both quantities
//! by direct simulation for validation.

use crate::error::{Error, Result};
use crate::model::FadingSpec;
use crate::special::{
    e1_scaled, gamma_upper_nonpos_scaled, gauss_legendre_40, integrate, ln_gamma,
    reg_lower_gamma, reg_upper_gamma, QuadratureControl, SeriesControl,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;
use std::cell::RefCell;
use std::f64::consts::LOG2_E;

/// One interferer whose small-scale fading is unknown at the BS.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interferer {
    /// λ_z: transmit power times large-scale gain into this receiver.
    pub scale: f64,
    /// Nakagami shape m_z of the unknown fading.
    pub shape: f64,
}

/// Everything needed to evaluate one link's statistics on one channel.
#[derive(Debug, Clone)]
pub struct InterferenceContext {
    /// ν: noise power plus known-interference power, linear.
    pub nu: f64,
    /// λ of the link's own signal.
    pub signal_scale: f64,
    /// β of the signal, if the BS knows it.
    pub signal_beta: Option<f64>,
    /// Signal fading distribution, used when `signal_beta` is `None`.
    pub signal_fading: FadingSpec,
    pub unknown_interferers: Vec<Interferer>,
    /// ξ_min, linear.
    pub sinr_min: f64,
}

impl InterferenceContext {
    fn validate(&self) -> Result<()> {
        if !(self.nu > 0.0 && self.nu.is_finite()) {
            return Err(Error::Argument(format!("nu must be positive, got {}", self.nu)));
        }
        if !(self.signal_scale > 0.0 && self.signal_scale.is_finite()) {
            return Err(Error::Argument("signal_scale must be positive".into()));
        }
        if !(self.sinr_min > 0.0 && self.sinr_min.is_finite()) {
            return Err(Error::Argument("sinr_min must be positive".into()));
        }
        if let Some(b) = self.signal_beta {
            if !(b >= 0.0 && b.is_finite()) {
                return Err(Error::Argument("signal_beta must be nonnegative".into()));
            }
        }
        for itf in &self.unknown_interferers {
            if !(itf.scale > 0.0 && itf.scale.is_finite()) {
                return Err(Error::Argument("interferer scale must be positive".into()));
            }
            if !(itf.shape >= 0.5 && itf.shape.is_finite()) {
                return Err(Error::Argument("interferer shape must be >= 0.5".into()));
            }
        }
        self.signal_fading.validate().map_err(|e| Error::Argument(e.to_string()))
    }
}

/// Success probability and expected rate of a link on a channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkStats {
    pub success_prob: f64,
    /// Already multiplied by the success probability; zero rate on outage.
    pub expected_rate: f64,
}

/// Controls for series truncation and quadrature fallbacks.
#[derive(Debug, Clone, Copy, Default)]
pub struct StatsControl {
    pub series: SeriesControl,
    pub quadrature: QuadratureControl,
}

const DEGENERACY_REL_TOL: f64 = 1e-9;

// ---------------------------------------------------------------------------
// Gamma-sum (Moschopoulos) series machinery
// ---------------------------------------------------------------------------

/// Shared state for the single-gamma-series expansion of Y = Σ λ_z β_z,
/// β_z ~ Gamma(m_z, 1/m_z): each summand is Gamma(m_z, λ_z/m_z), and the
/// series expands around the smallest scale so all coefficients stay in
/// [0, 1) and terms are positive.
struct GammaSeries {
    /// Smallest gamma scale min_z λ_z/m_z; 1/beta_min is the series rate.
    beta_min: f64,
    /// Π (beta_min / (λ_z/m_z))^(m_z) ∈ (0, 1].
    prefactor: f64,
    /// Σ m_z.
    rho: f64,
    shapes: Vec<f64>,
    /// 1 − beta_min/(λ_z/m_z), one per interferer.
    q: Vec<f64>,
    /// Worst-case geometric term ratio, for the truncation tail bound.
    q_max: f64,
    deltas: Vec<f64>,
    /// γ_l = Σ_z m_z q_z^l for l = 1.., extended on demand.
    gammas: Vec<f64>,
    q_pow: Vec<f64>,
}

impl GammaSeries {
    fn new(interferers: &[Interferer]) -> GammaSeries {
        debug_assert!(!interferers.is_empty());
        let beta_min =
            interferers.iter().map(|i| i.scale / i.shape).fold(f64::INFINITY, f64::min);
        let mut prefactor = 1.0;
        let mut rho = 0.0;
        let mut q = Vec::with_capacity(interferers.len());
        for i in interferers {
            let scale_z = i.scale / i.shape;
            prefactor *= (beta_min / scale_z).powf(i.shape);
            rho += i.shape;
            q.push(1.0 - beta_min / scale_z);
        }
        let q_max = q.iter().copied().fold(0.0, f64::max);
        GammaSeries {
            beta_min,
            prefactor,
            rho,
            shapes: interferers.iter().map(|i| i.shape).collect(),
            q_pow: vec![1.0; q.len()],
            q,
            q_max,
            deltas: vec![1.0],
            gammas: Vec::new(),
        }
    }

    /// δ_n, extending the recursion as needed.
    fn delta(&mut self, n: usize) -> f64 {
        while self.deltas.len() <= n {
            let next = self.deltas.len(); // computing δ_next
            while self.gammas.len() < next {
                // γ_{l} for l = gammas.len()+1
                for (p, q) in self.q_pow.iter_mut().zip(&self.q) {
                    *p *= q;
                }
                let g: f64 =
                    self.shapes.iter().zip(&self.q_pow).map(|(m, p)| m * p).sum();
                self.gammas.push(g);
            }
            let mut acc = 0.0;
            for l in 1..=next {
                acc += self.gammas[l - 1] * self.deltas[next - l];
            }
            self.deltas.push(acc / next as f64);
        }
        self.deltas[n]
    }
}

/// Sum a positive gamma-series `term(n)` with the configured truncation.
/// `term` values must eventually decay geometrically (ratio ≤ q_max).
fn sum_series<F: FnMut(usize) -> f64>(
    series: &mut GammaSeries,
    ctrl: &SeriesControl,
    mut term: F,
) -> Result<f64> {
    let mut total = 0.0;
    let mut small_streak = 0;
    let mut last = 0.0;
    for n in 0..ctrl.max_terms {
        let delta = series.delta(n);
        let t = delta * term(n);
        total += t;
        last = t;
        if t <= ctrl.rel_tolerance * total.abs().max(f64::MIN_POSITIVE) {
            small_streak += 1;
            if small_streak >= 2 {
                return Ok(total);
            }
        } else {
            small_streak = 0;
        }
    }
    // convergent-series tail bound: remaining mass ≲ last · q/(1−q)
    let q = series.q_max;
    let tail = if q < 1.0 { last * q / (1.0 - q) } else { f64::INFINITY };
    if tail <= ctrl.rel_tolerance * total.abs().max(f64::MIN_POSITIVE) * 10.0 {
        Ok(total)
    } else {
        Err(Error::Numeric {
            msg: format!(
                "gamma series not converged after {} terms (tail bound {tail:.3e})",
                ctrl.max_terms
            ),
            partial: total,
        })
    }
}

/// Density of Y = Σ λ_z β_z at `y ≥ 0`, β_z ~ Gamma(m_z, 1/m_z).
pub fn gamma_sum_pdf(interferers: &[Interferer], y: f64, ctrl: &SeriesControl) -> Result<f64> {
    if interferers.is_empty() {
        return Err(Error::Argument("gamma_sum_pdf needs at least one interferer".into()));
    }
    if !(y >= 0.0) {
        return Err(Error::Domain(format!("gamma_sum_pdf requires y >= 0, got {y}")));
    }
    let mut series = GammaSeries::new(interferers);
    let w = y / series.beta_min;
    let rho = series.rho;
    if w == 0.0 {
        // only the n = 0 term can be nonzero at the origin
        let v = if rho > 1.0 {
            0.0
        } else if (rho - 1.0).abs() < 1e-12 {
            series.prefactor / series.beta_min
        } else {
            f64::INFINITY
        };
        return Ok(v);
    }
    // u_n = w^(ρ+n−1) e^(−w) / Γ(ρ+n), updated multiplicatively
    let mut u = ((rho - 1.0) * w.ln() - w - ln_gamma(rho)).exp();
    let prefactor = series.prefactor;
    let total = sum_series(&mut series, ctrl, |n| {
        let t = u;
        u *= w / (rho + n as f64);
        t
    })?;
    Ok(prefactor * total / series.beta_min)
}

/// Pr[Y ≤ y] for the same sum of gamma variables.
pub fn gamma_sum_cdf(interferers: &[Interferer], y: f64, ctrl: &SeriesControl) -> Result<f64> {
    if interferers.is_empty() {
        return Err(Error::Argument("gamma_sum_cdf needs at least one interferer".into()));
    }
    if y <= 0.0 {
        return Ok(0.0);
    }
    let mut series = GammaSeries::new(interferers);
    let w = y / series.beta_min;
    let rho = series.rho;
    // P_n = P(ρ+n, w) regularized, stepped by P_{n+1} = P_n − w^(ρ+n) e^(−w)/Γ(ρ+n+1)
    let mut p_n = reg_lower_gamma(rho, w);
    let mut t_n = (rho * w.ln() - w - ln_gamma(rho + 1.0)).exp();
    let prefactor = series.prefactor;
    let total = sum_series(&mut series, ctrl, |n| {
        let t = p_n;
        p_n = (p_n - t_n).max(0.0);
        t_n *= w / (rho + n as f64 + 1.0);
        t
    })?;
    Ok((prefactor * total).clamp(0.0, 1.0))
}

/// Density of a sum of independent exponentials with distinct means
/// (`scales`), the Rayleigh special case of [`gamma_sum_pdf`].
pub fn exp_mixture_pdf(scales: &[f64], y: f64) -> Result<f64> {
    if scales.is_empty() {
        return Err(Error::Argument("exp_mixture_pdf needs at least one scale".into()));
    }
    if !(y >= 0.0) {
        return Err(Error::Domain(format!("exp_mixture_pdf requires y >= 0, got {y}")));
    }
    check_distinct(scales)?;
    let n = scales.len();
    let mut total = 0.0;
    for (z, &lz) in scales.iter().enumerate() {
        let mut coef = lz.powi(n as i32 - 2);
        for (k, &lk) in scales.iter().enumerate() {
            if k != z {
                coef /= lz - lk;
            }
        }
        total += coef * (-y / lz).exp();
    }
    Ok(total)
}

fn check_distinct(scales: &[f64]) -> Result<()> {
    for (i, &a) in scales.iter().enumerate() {
        for &b in &scales[i + 1..] {
            if (a - b).abs() <= DEGENERACY_REL_TOL * a.abs().max(b.abs()) {
                return Err(Error::Degenerate(format!(
                    "scales {a} and {b} are equal to within rel {DEGENERACY_REL_TOL}"
                )));
            }
        }
    }
    Ok(())
}

/// Hypoexponential mixture weights w_z = λ_z^(n−1) Π_{k≠z} (λ_z − λ_k)^(−1);
/// they sum to 1.
fn mixture_weights(scales: &[f64]) -> Vec<f64> {
    let n = scales.len();
    scales
        .iter()
        .enumerate()
        .map(|(z, &lz)| {
            let mut w = lz.powi(n as i32 - 1);
            for (k, &lk) in scales.iter().enumerate() {
                if k != z {
                    w /= lz - lk;
                }
            }
            w
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Log-moment recurrence (integer shapes, known signal fading)
// ---------------------------------------------------------------------------

/// Table of T_l(x) = x^l e^x Γ(−l, x), extended on demand.
struct TkTable {
    x: f64,
    vals: Vec<f64>,
}

impl TkTable {
    fn new(x: f64) -> TkTable {
        TkTable { x, vals: vec![e1_scaled(x)] }
    }

    fn get(&mut self, l: usize) -> f64 {
        while self.vals.len() <= l {
            let k = self.vals.len();
            let v = if (k as f64) <= self.x && self.x >= 1.0 {
                // upward recurrence loses accuracy here; evaluate directly
                gamma_upper_nonpos_scaled(k as u32, self.x)
            } else {
                (1.0 - self.x * self.vals[k - 1]) / k as f64
            };
            self.vals.push(v);
        }
        self.vals[l]
    }
}

/// Normalized log moments  m̂_k = (1/k!) ∫₀^P ln(1 + A/(V+w)) w^k e^(−w) dw.
///
/// Everything is pre-scaled by the series rate (w = y/beta_min), so the
/// values feed the rate series directly: term_n = prefactor · δ_n · m̂_(ρ+n−1).
/// The by-parts recurrence is used where it is well conditioned; short upper
/// limits (P ≤ 1) and indices far above P fall back to a fixed
/// Gauss–Legendre rule because the closed form cancels there.
struct MuHat {
    p: f64,
    v: f64,
    a: f64,
    log_ratio_at_p: f64,
    t_va: TkTable,
    t_pva: TkTable,
    t_v: TkTable,
    t_pv: TkTable,
    /// Poisson weights P^j e^(−P) / j!, computed in log space so large P
    /// cannot overflow the numerator.
    poisson: Vec<f64>,
    vals: Vec<f64>,
}

impl MuHat {
    fn new(p: f64, v: f64, a: f64) -> MuHat {
        MuHat {
            p,
            v,
            a,
            log_ratio_at_p: (1.0 + a / (v + p)).ln(),
            t_va: TkTable::new(v + a),
            t_pva: TkTable::new(p + v + a),
            t_v: TkTable::new(v),
            t_pv: TkTable::new(p + v),
            poisson: Vec::new(),
            vals: Vec::new(),
        }
    }

    fn poisson(&mut self, j: usize) -> f64 {
        while self.poisson.len() <= j {
            let k = self.poisson.len() as f64;
            let w = (k * self.p.ln() - self.p - ln_gamma(k + 1.0)).exp();
            self.poisson.push(w);
        }
        self.poisson[j]
    }

    /// Ê_k(P, c) = T_k(c) − Σ_l [P^(k−l) e^(−P)/(k−l)!] · T_l(P+c).
    fn e_hat(&mut self, k: usize, first: bool) -> f64 {
        let head = if first { self.t_va.get(k) } else { self.t_v.get(k) };
        let mut tail = 0.0;
        for l in 0..=k {
            let pw = self.poisson(k - l);
            let t = if first { self.t_pva.get(l) } else { self.t_pv.get(l) };
            tail += pw * t;
        }
        head - tail
    }

    fn quadrature(&self, k: usize) -> f64 {
        let (v, a, p) = (self.v, self.a, self.p);
        let lg = ln_gamma(k as f64 + 1.0);
        gauss_legendre_40(
            |w| {
                let lnw = if w > 0.0 { w.ln() } else { return 0.0 };
                (1.0 + a / (v + w)).ln() * (k as f64 * lnw - w - lg).exp()
            },
            0.0,
            p,
        )
    }

    fn get(&mut self, k: usize) -> f64 {
        while self.vals.len() <= k {
            let j = self.vals.len();
            let v = if self.p <= 1.0 || (j as f64) > 2.0 * self.p + 10.0 {
                self.quadrature(j)
            } else if j == 0 {
                // D-function difference
                let h = |t1: f64, t2: f64| e1_scaled(t2) - (-t1).exp() * e1_scaled(t1 + t2);
                let (p, v_, a) = (self.p, self.v, self.a);
                ((v_ + a) / v_).ln() - (-p).exp() * ((p + v_ + a) / (p + v_)).ln()
                    + h(p, v_ + a)
                    - h(p, v_)
            } else {
                let e1 = self.e_hat(j, true);
                let e2 = self.e_hat(j, false);
                let a_hat = self.log_ratio_at_p * self.poisson(j);
                e1 - e2 - a_hat + self.vals[j - 1]
            };
            self.vals.push(v);
        }
        self.vals[k]
    }
}

fn shapes_all_rayleigh(interferers: &[Interferer]) -> bool {
    interferers.iter().all(|i| (i.shape - 1.0).abs() < 1e-12)
}

fn shapes_all_integer(interferers: &[Interferer]) -> bool {
    interferers.iter().all(|i| (i.shape - i.shape.round()).abs() < 1e-9 && i.shape >= 1.0 - 1e-9)
}

fn scales_distinct(interferers: &[Interferer]) -> bool {
    let scales: Vec<f64> = interferers.iter().map(|i| i.scale).collect();
    check_distinct(&scales).is_ok()
}

// ---------------------------------------------------------------------------
// Known signal fading
// ---------------------------------------------------------------------------

/// (p, rate) when the signal's small-scale gain is `beta`.
fn known_beta_stats(
    ctx: &InterferenceContext,
    beta: f64,
    ctrl: &StatsControl,
    want_rate: bool,
) -> Result<(f64, f64)> {
    let a = ctx.signal_scale * beta;
    let xi = ctx.sinr_min;
    let nu = ctx.nu;

    if ctx.unknown_interferers.is_empty() {
        // deterministic SINR
        let sinr = a / nu;
        return if sinr >= xi { Ok((1.0, (1.0 + sinr).log2())) } else { Ok((0.0, 0.0)) };
    }

    // η = max(0, a/ξ − ν): the largest unknown-interference power that still
    // leaves the SINR above threshold
    let eta = a / xi - nu;
    if eta <= 0.0 {
        return Ok((0.0, 0.0));
    }

    if shapes_all_rayleigh(ctx.unknown_interferers.as_slice())
        && scales_distinct(&ctx.unknown_interferers)
    {
        return known_beta_rayleigh(ctx, a, eta, want_rate);
    }

    if shapes_all_integer(&ctx.unknown_interferers) {
        return known_beta_series(ctx, a, eta, ctrl, want_rate);
    }

    // arbitrary real shapes: series for p, quadrature for the rate
    let p = gamma_sum_cdf(&ctx.unknown_interferers, eta, &ctrl.series)?;
    let rate = if want_rate && p > 0.0 {
        let err: RefCell<Option<Error>> = RefCell::new(None);
        let integrand = |y: f64| match gamma_sum_pdf(&ctx.unknown_interferers, y, &ctrl.series) {
            Ok(f) => (1.0 + a / (nu + y)).ln() * f,
            Err(e) => {
                err.borrow_mut().get_or_insert(e);
                0.0
            }
        };
        let v = integrate(integrand, 0.0, eta, &ctrl.quadrature)?;
        if let Some(e) = err.into_inner() {
            return Err(e);
        }
        (v * LOG2_E).max(0.0)
    } else {
        0.0
    };
    Ok((p, rate))
}

/// All-Rayleigh unknown interference, known signal gain: hypoexponential
/// closed forms.
fn known_beta_rayleigh(
    ctx: &InterferenceContext,
    a: f64,
    eta: f64,
    want_rate: bool,
) -> Result<(f64, f64)> {
    let scales: Vec<f64> = ctx.unknown_interferers.iter().map(|i| i.scale).collect();
    let weights = mixture_weights(&scales);
    let xi = ctx.sinr_min;
    let nu = ctx.nu;

    let mut p = 1.0;
    for (&w, &lz) in weights.iter().zip(&scales) {
        p -= w * (-eta / lz).exp();
    }
    let p = p.clamp(0.0, 1.0);

    if !want_rate {
        return Ok((p, 0.0));
    }
    // rate = Σ_z w_z (G_z(a/λ_z) − G_z(0)) + p log2(1+ξ) + log2((ν+a)/(ν(1+ξ)))
    // with G_z(x) = log2(e)[e1s(ν/λ_z + x) − e^(−η/λ_z) e1s(a/(ξ λ_z) + x)]
    let mut rate = p * (1.0 + xi).log2() + ((nu + a) / (nu * (1.0 + xi))).log2();
    for (&w, &lz) in weights.iter().zip(&scales) {
        let decay = (-eta / lz).exp();
        let g = |x: f64| LOG2_E * (e1_scaled(nu / lz + x) - decay * e1_scaled(a / (xi * lz) + x));
        rate += w * (g(a / lz) - g(0.0));
    }
    Ok((p, rate.max(0.0)))
}

/// Integer-shape unknown interference, known signal gain: gamma series with
/// the closed-form log-moment recurrence.
fn known_beta_series(
    ctx: &InterferenceContext,
    a: f64,
    eta: f64,
    ctrl: &StatsControl,
    want_rate: bool,
) -> Result<(f64, f64)> {
    let mut series = GammaSeries::new(&ctx.unknown_interferers);
    let beta_min = series.beta_min;
    let rho = series.rho.round() as usize;
    debug_assert!(rho >= 1);
    let w = eta / beta_min;

    // probability series: terms δ_n P(ρ+n, w)
    let mut p_n = reg_lower_gamma(rho as f64, w);
    let mut t_n = (rho as f64 * w.ln() - w - ln_gamma(rho as f64 + 1.0)).exp();
    let prefactor = series.prefactor;
    let p = prefactor
        * sum_series(&mut series, &ctrl.series, |n| {
            let t = p_n;
            p_n = (p_n - t_n).max(0.0);
            t_n *= w / ((rho + n) as f64 + 1.0);
            t
        })?;
    let p = p.clamp(0.0, 1.0);

    let rate = if want_rate && p > 0.0 {
        let mut mu = MuHat::new(eta / beta_min, ctx.nu / beta_min, a / beta_min);
        let r_nats = prefactor
            * sum_series(&mut series, &ctrl.series, |n| mu.get(rho - 1 + n))?;
        (r_nats * LOG2_E).max(0.0)
    } else {
        0.0
    };
    Ok((p, rate))
}

// ---------------------------------------------------------------------------
// Unknown signal fading
// ---------------------------------------------------------------------------

fn signal_tail(ctx: &InterferenceContext, x0: f64, ctrl: &StatsControl) -> Result<f64> {
    match ctx.signal_fading {
        FadingSpec::Nakagami { m } if (m - 1.0).abs() < 1e-12 => Ok((-x0).exp()),
        FadingSpec::Nakagami { m } => Ok(reg_upper_gamma(m, m * x0)),
        FadingSpec::Ricean { .. } => {
            integrate(|x| ctx.signal_fading.pdf(x), x0, f64::INFINITY, &ctrl.quadrature)
                .map(|v| v.clamp(0.0, 1.0))
        }
    }
}

fn unknown_beta_stats(
    ctx: &InterferenceContext,
    ctrl: &StatsControl,
    want_rate: bool,
) -> Result<(f64, f64)> {
    let lam = ctx.signal_scale;
    let xi = ctx.sinr_min;
    let nu = ctx.nu;
    let x0 = xi * nu / lam;
    let signal_rayleigh = ctx.signal_fading == FadingSpec::RAYLEIGH;

    if ctx.unknown_interferers.is_empty() {
        let p = signal_tail(ctx, x0, ctrl)?;
        let rate = if !want_rate || p == 0.0 {
            0.0
        } else if signal_rayleigh {
            p * (1.0 + xi).log2()
                + LOG2_E * (-nu * xi / lam).exp() * e1_scaled(nu * (1.0 + xi) / lam)
        } else {
            let v = integrate(
                |x| (1.0 + lam * x / nu).ln() * ctx.signal_fading.pdf(x),
                x0,
                f64::INFINITY,
                &ctrl.quadrature,
            )?;
            (v * LOG2_E).max(0.0)
        };
        return Ok((p, rate));
    }

    // fully closed form: Rayleigh everywhere, distinct interferer scales,
    // and (for the rate's λ/(λ−λ_z) factors) signal scale away from each
    // interferer scale
    let cor2_ok = signal_rayleigh
        && shapes_all_rayleigh(&ctx.unknown_interferers)
        && scales_distinct(&ctx.unknown_interferers)
        && ctx
            .unknown_interferers
            .iter()
            .all(|i| (lam - i.scale).abs() > DEGENERACY_REL_TOL * lam.max(i.scale));
    if cor2_ok {
        let scales: Vec<f64> = ctx.unknown_interferers.iter().map(|i| i.scale).collect();
        let weights = mixture_weights(&scales);
        let front = (-xi * nu / lam).exp();
        let mut bracket = 1.0;
        for (&w, &lz) in weights.iter().zip(&scales) {
            bracket -= w * lz * xi / (lam + lz * xi);
        }
        let p = (front * bracket).clamp(0.0, 1.0);
        let rate = if want_rate {
            let mut acc = 0.0;
            for (&w, &lz) in weights.iter().zip(&scales) {
                acc += w * (lam / (lam - lz))
                    * (e1_scaled(nu * (1.0 + xi) / lam) - e1_scaled(nu / lz + nu * xi / lam));
            }
            (p * (1.0 + xi).log2() + LOG2_E * front * acc).max(0.0)
        } else {
            0.0
        };
        return Ok((p, rate));
    }

    // general: integrate the known-gain statistics over the signal pdf
    let err: RefCell<Option<Error>> = RefCell::new(None);
    let stat = |x: f64, rate_part: bool| -> f64 {
        match known_beta_stats(ctx, x, ctrl, rate_part) {
            Ok((p, r)) => {
                (if rate_part { r } else { p }) * ctx.signal_fading.pdf(x)
            }
            Err(e) => {
                err.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    };
    let p = integrate(|x| stat(x, false), x0, f64::INFINITY, &ctrl.quadrature)?;
    let rate = if want_rate {
        integrate(|x| stat(x, true), x0, f64::INFINITY, &ctrl.quadrature)?.max(0.0)
    } else {
        0.0
    };
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    Ok((p.clamp(0.0, 1.0), rate))
}

// ---------------------------------------------------------------------------
// Public interface
// ---------------------------------------------------------------------------

/// Pr[SINR ≥ ξ_min] for this context.
pub fn success_probability(ctx: &InterferenceContext, ctrl: &StatsControl) -> Result<f64> {
    ctx.validate()?;
    let (p, _) = match ctx.signal_beta {
        Some(beta) => known_beta_stats(ctx, beta, ctrl, false)?,
        None => unknown_beta_stats(ctx, ctrl, false)?,
    };
    Ok(p)
}

/// E[log2(1+SINR) · 1{SINR ≥ ξ_min}] in bits/s/Hz.
pub fn expected_rate(ctx: &InterferenceContext, ctrl: &StatsControl) -> Result<f64> {
    Ok(link_stats(ctx, ctrl)?.expected_rate)
}

/// Both statistics, sharing the series work.
pub fn link_stats(ctx: &InterferenceContext, ctrl: &StatsControl) -> Result<LinkStats> {
    ctx.validate()?;
    let (p, r) = match ctx.signal_beta {
        Some(beta) => known_beta_stats(ctx, beta, ctrl, true)?,
        None => unknown_beta_stats(ctx, ctrl, true)?,
    };
    Ok(LinkStats { success_prob: p, expected_rate: r })
}

/// The k-th log moment μ_k = ∫₀^η ln(1 + a/(ν+y)) y^k e^(−y/β₁) dy of the
/// by-parts recurrence, where β₁ is the smallest interferer gamma scale.
/// With unknown signal fading the moment is averaged over the signal pdf.
/// Requires integer interferer shapes.
pub fn mu_recurrence(k: usize, ctx: &InterferenceContext, ctrl: &StatsControl) -> Result<f64> {
    ctx.validate()?;
    if ctx.unknown_interferers.is_empty() {
        return Err(Error::Argument("mu_recurrence needs unknown interferers".into()));
    }
    if !shapes_all_integer(&ctx.unknown_interferers) {
        return Err(Error::Unsupported(
            "mu recurrence requires integer fading shapes; use quadrature instead".into(),
        ));
    }
    let beta_min = ctx
        .unknown_interferers
        .iter()
        .map(|i| i.scale / i.shape)
        .fold(f64::INFINITY, f64::min);
    let factorial = ln_gamma(k as f64 + 1.0).exp();
    let unscale = factorial * beta_min.powi(k as i32 + 1);

    match ctx.signal_beta {
        Some(beta) => {
            let a = ctx.signal_scale * beta;
            let eta = a / ctx.sinr_min - ctx.nu;
            if eta <= 0.0 {
                return Ok(0.0);
            }
            let mut mu = MuHat::new(eta / beta_min, ctx.nu / beta_min, a / beta_min);
            Ok(mu.get(k) * unscale)
        }
        None => {
            let x0 = ctx.sinr_min * ctx.nu / ctx.signal_scale;
            let v = integrate(
                |x| {
                    let a = ctx.signal_scale * x;
                    let iota = a / ctx.sinr_min - ctx.nu;
                    if iota <= 0.0 {
                        return 0.0;
                    }
                    let mut mu = MuHat::new(iota / beta_min, ctx.nu / beta_min, a / beta_min);
                    mu.get(k) * ctx.signal_fading.pdf(x)
                },
                x0,
                f64::INFINITY,
                &ctrl.quadrature,
            )?;
            Ok(v * unscale)
        }
    }
}

/// Monte-Carlo estimate of both link statistics.
#[derive(Debug, Clone, Copy)]
pub struct McEstimate {
    pub success_prob: f64,
    pub success_se: f64,
    pub expected_rate: f64,
    pub rate_se: f64,
    pub samples: usize,
}

/// Estimate the link statistics by direct simulation: draw every unknown
/// fading gain, form the SINR, and average. Deterministic per seed.
pub fn mc_oracle(ctx: &InterferenceContext, n: usize, seed: u64) -> McEstimate {
    assert!(n >= 1, "mc_oracle needs at least one sample");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gammas: Vec<(f64, rand_distr::Gamma<f64>)> = ctx
        .unknown_interferers
        .iter()
        .map(|i| (i.scale, rand_distr::Gamma::new(i.shape, 1.0 / i.shape).unwrap()))
        .collect();
    let (mut s1, mut s2) = (0.0f64, 0.0f64);
    let (mut r1, mut r2) = (0.0f64, 0.0f64);
    for _ in 0..n {
        let beta = match ctx.signal_beta {
            Some(b) => b,
            None => ctx.signal_fading.sample(&mut rng),
        };
        let mut denom = ctx.nu;
        for (scale, g) in &gammas {
            denom += scale * g.sample(&mut rng);
        }
        let sinr = ctx.signal_scale * beta / denom;
        let (s, r) =
            if sinr >= ctx.sinr_min { (1.0, (1.0 + sinr).log2()) } else { (0.0, 0.0) };
        s1 += s;
        s2 += s * s;
        r1 += r;
        r2 += r * r;
    }
    let nf = n as f64;
    let var = |sum: f64, sumsq: f64| {
        if n < 2 {
            0.0
        } else {
            ((sumsq - sum * sum / nf) / (nf - 1.0)).max(0.0)
        }
    };
    McEstimate {
        success_prob: s1 / nf,
        success_se: (var(s1, s2) / nf).sqrt(),
        expected_rate: r1 / nf,
        rate_se: (var(r1, r2) / nf).sqrt(),
        samples: n,
    }
}
