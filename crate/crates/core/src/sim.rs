//! Sample-level Monte Carlo check of the closed forms.
//!
//! Each sample draws unit-modulus symbols of uniform phase for both nodes,
//! Gaussian oscillator phase errors, input-referred receiver noise and
//! uniform quantization noise, and forms the post-cancellation residual of
//! the chosen scheme. The ideal signal-of-interest term and everything else
//! are accumulated separately; their power ratio is the empirical SINR.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::channel::{link_for_draw, ChannelDraw, Scenario};
use crate::error::{check, Result};
use crate::mc::{run_chunked, Partial};
use crate::model::{derive_noise_profile, rate_fd, rate_hd, sinr_fd, snr_hd, LinkState, NoiseProfile, Scheme};
use crate::region::{exact_rssi_b_min, quadratic_coeffs, ORACLE_BRACKET_DBM};
use crate::units::{LinearRatio, PowerDbm, PowerMw};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimConfig {
    pub n_samples: u64,
    pub seed: u64,
    pub scheme: Scheme,
    /// Use `e^{iφ}` instead of `1 + iφ` when forming the residuals.
    pub exact_exponential: bool,
    /// Draw Rician fading (and shadowing, where a path loss is involved) in
    /// [`ergodic_rate_sweep`]. Sample-level simulations use the link as given.
    pub fading_enabled: bool,
    /// Worker threads; 1 is the sequential reference path, 0 uses all cores.
    pub threads: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            n_samples: 100_000,
            seed: 1,
            scheme: Scheme::DigitalCancellation,
            exact_exponential: false,
            fading_enabled: true,
            threads: 1,
        }
    }
}

impl SimConfig {
    fn validate(&self) -> Result<()> {
        check(self.n_samples >= 1, "n_samples", ">= 1", self.n_samples as f64)
    }
}

/// Mean power of each impairment term, in mW.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct NoiseBreakdown {
    pub phase_si: PowerMw,
    pub phase_soi: PowerMw,
    pub receiver: PowerMw,
    pub quantization: PowerMw,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimResult {
    pub empirical_sinr: LinearRatio,
    pub analytic_sinr: LinearRatio,
    pub empirical_rate: f64,
    pub analytic_rate: f64,
    pub rel_error: f64,
    pub signal_power: PowerMw,
    pub noise_breakdown: NoiseBreakdown,
}

#[derive(Debug, Clone, Copy)]
enum Residual {
    None,
    Digital,
    Analog,
}

/// Per-run constants of the sample generator.
struct Synth {
    si_amp: f64,
    soi_amp: f64,
    sd_tx: f64,
    sd_rx: f64,
    receiver_sd: f64,
    quant_half_width: f64,
    residual: Residual,
    exact: bool,
}

#[derive(Default)]
struct Acc {
    n: u64,
    signal: f64,
    rest: f64,
    phase_si: f64,
    phase_soi: f64,
    receiver: f64,
    quantization: f64,
}

impl Partial for Acc {
    fn merge(&mut self, o: Self) {
        self.n += o.n;
        self.signal += o.signal;
        self.rest += o.rest;
        self.phase_si += o.phase_si;
        self.phase_soi += o.phase_soi;
        self.receiver += o.receiver;
        self.quantization += o.quantization;
    }
}

/// Constant-modulus symbol with uniform phase.
fn symbol(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::cis(TAU * rng.random::<f64>())
}

fn cgauss(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * FRAC_1_SQRT_2
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// `e^{iθ} − 1` or its first-order expansion `iθ`.
fn phase_error(theta: f64, exact: bool) -> Complex64 {
    if exact {
        Complex64::cis(theta) - 1.0
    } else {
        Complex64::new(0.0, theta)
    }
}

impl Synth {
    fn new(np: &NoiseProfile, rssi_a: f64, soi_power: f64, lna_input: f64, residual: Residual, exact: bool) -> Self {
        // Input-referred noise: P_th·N_l + P_th(N_m − 1)/α² and σ_q²/α².
        let receiver = np.zeta().value() + np.mixer_excess().value() * lna_input;
        let quant = np.sigma_q2().value() * lna_input;
        Synth {
            si_amp: rssi_a.sqrt(),
            soi_amp: soi_power.sqrt(),
            sd_tx: np.mu_tx().value().sqrt(),
            sd_rx: np.mu_rx().value().sqrt(),
            receiver_sd: receiver.sqrt(),
            // Uniform on [−w, w] per rail has variance w²/3; each rail carries half.
            quant_half_width: (1.5 * quant).sqrt(),
            residual,
            exact,
        }
    }

    fn run(&self, rng: &mut ChaCha8Rng, count: u64) -> Acc {
        let mut acc = Acc::default();
        for _ in 0..count {
            let x_a = symbol(rng);
            let x_b = symbol(rng);
            let phi_a_tx = self.sd_tx * normal(rng);
            let phi_a_rx = self.sd_rx * normal(rng);
            let phi_b_tx = self.sd_tx * normal(rng);
            let z = cgauss(rng) * self.receiver_sd;
            let w = self.quant_half_width;
            let q = Complex64::new(rng.random_range(-1.0..1.0) * w, rng.random_range(-1.0..1.0) * w);

            let si = match self.residual {
                Residual::None => Complex64::new(0.0, 0.0),
                Residual::Digital => x_a * self.si_amp * phase_error(phi_a_tx + phi_a_rx, self.exact),
                Residual::Analog => {
                    let d = if self.exact {
                        (Complex64::cis(phi_a_tx) - Complex64::cis(phi_a_rx)) * Complex64::cis(phi_a_rx)
                    } else {
                        Complex64::new(0.0, phi_a_tx - phi_a_rx)
                    };
                    x_a * self.si_amp * d
                }
            };
            let signal = x_b * self.soi_amp;
            let soi_phase = signal * phase_error(phi_b_tx + phi_a_rx, self.exact);
            let rest = si + soi_phase + z + q;

            acc.n += 1;
            acc.signal += signal.norm_sqr();
            acc.rest += rest.norm_sqr();
            acc.phase_si += si.norm_sqr();
            acc.phase_soi += soi_phase.norm_sqr();
            acc.receiver += z.norm_sqr();
            acc.quantization += q.norm_sqr();
        }
        acc
    }

    fn simulate(&self, cfg: &SimConfig) -> Result<Acc> {
        cfg.validate()?;
        run_chunked(cfg.n_samples, cfg.seed, cfg.threads, |rng, count| self.run(rng, count))
    }
}

fn finish(acc: Acc, analytic: LinearRatio, rate: fn(LinearRatio) -> f64) -> SimResult {
    let n = acc.n as f64;
    let empirical = if acc.signal == 0.0 { 0.0 } else { acc.signal / acc.rest };
    let a = analytic.value();
    let rel_error = if a == 0.0 {
        if empirical == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (empirical - a).abs() / a
    };
    let empirical_sinr = LinearRatio::from_raw(empirical);
    SimResult {
        empirical_sinr,
        analytic_sinr: analytic,
        empirical_rate: rate(empirical_sinr),
        analytic_rate: rate(analytic),
        rel_error,
        signal_power: PowerMw::from_raw(acc.signal / n),
        noise_breakdown: NoiseBreakdown {
            phase_si: PowerMw::from_raw(acc.phase_si / n),
            phase_soi: PowerMw::from_raw(acc.phase_soi / n),
            receiver: PowerMw::from_raw(acc.receiver / n),
            quantization: PowerMw::from_raw(acc.quantization / n),
        },
    }
}

/// Full-duplex link under `cfg.scheme`.
pub fn simulate_fd(np: &NoiseProfile, link: &LinkState, cfg: &SimConfig) -> Result<SimResult> {
    let a = link.rssi_a.value();
    let b = link.rssi_b.value();
    let (lna_input, residual) = match cfg.scheme {
        Scheme::DigitalCancellation => (a + b, Residual::Digital),
        Scheme::AnalogCancellation => (b, Residual::Analog),
    };
    let synth = Synth::new(np, a, b, lna_input, residual, cfg.exact_exponential);
    let acc = synth.simulate(cfg)?;
    Ok(finish(acc, sinr_fd(np, link, cfg.scheme), rate_fd))
}

/// Half-duplex link: doubled transmit power, no self-interference.
/// `cfg.scheme` is irrelevant here.
pub fn simulate_hd(np: &NoiseProfile, rssi_b: PowerMw, cfg: &SimConfig) -> Result<SimResult> {
    let soi = 2.0 * rssi_b.value();
    let synth = Synth::new(np, 0.0, soi, soi, Residual::None, cfg.exact_exponential);
    let acc = synth.simulate(cfg)?;
    Ok(finish(acc, snr_hd(np, rssi_b), rate_hd))
}

/// Simulated full-duplex minus half-duplex rate at one link.
pub fn empirical_rate_margin(np: &NoiseProfile, link: &LinkState, cfg: &SimConfig) -> Result<f64> {
    let fd = simulate_fd(np, link, cfg)?;
    let hd = simulate_hd(np, link.rssi_b, cfg)?;
    Ok(fd.empirical_rate - hd.empirical_rate)
}

/// RSSI_B where simulated FD and HD rates cross, by bisection in dBm to
/// `tol_db`. The search starts from a ±3 dB bracket around the closed-form
/// root and widens in 6 dB steps until the simulated margin changes sign.
pub fn empirical_rssi_b_min(np: &NoiseProfile, rssi_a: PowerMw, cfg: &SimConfig, tol_db: f64) -> Result<PowerMw> {
    check(tol_db > 0.0, "tol_db", "positive", tol_db)?;
    let guess = exact_rssi_b_min(&quadratic_coeffs(np, rssi_a, cfg.scheme));
    if guess.value() == 0.0 {
        return Ok(PowerMw::ZERO);
    }
    let margin = |b_dbm: f64| empirical_rate_margin(np, &LinkState::new(rssi_a, PowerDbm::new(b_dbm).to_mw()), cfg);
    let centre = guess.to_dbm()?.value();
    let (floor, ceil) = ORACLE_BRACKET_DBM;
    let (mut lo, mut hi) = (centre - 3.0, centre + 3.0);
    while margin(lo)? > 0.0 {
        lo -= 6.0;
        if lo < floor {
            return Err(crate::Error::NoSignChange {
                lo_dbm: floor,
                hi_dbm: hi,
            });
        }
    }
    while margin(hi)? <= 0.0 {
        hi += 6.0;
        if hi > ceil {
            return Err(crate::Error::NoSignChange {
                lo_dbm: lo,
                hi_dbm: ceil,
            });
        }
    }
    while hi - lo > tol_db {
        let mid = 0.5 * (lo + hi);
        if margin(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(PowerDbm::new(0.5 * (lo + hi)).to_mw())
}

/// What an ergodic sweep varies.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "axis", content = "values", rename_all = "snake_case")]
pub enum Sweep {
    /// Mean signal-of-interest RSSI (before fading); no path loss or
    /// shadowing is involved.
    RssiB(Vec<PowerDbm>),
    /// Node separation in metres, for the scenario's path loss.
    Distance(Vec<f64>),
    /// Transmit power at the scenario's distance.
    TxPower(Vec<PowerDbm>),
}

impl Sweep {
    fn len(&self) -> usize {
        match self {
            Sweep::RssiB(v) | Sweep::TxPower(v) => v.len(),
            Sweep::Distance(v) => v.len(),
        }
    }
}

/// One row of an ergodic rate sweep. Rates in bits/s/Hz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateRow {
    pub x: f64,
    pub scheme: Scheme,
    pub rate_fd: f64,
    pub rate_hd: f64,
    pub gain_ratio: f64,
}

#[derive(Default)]
struct RateAcc {
    n: u64,
    fd: f64,
    hd: f64,
}

impl Partial for RateAcc {
    fn merge(&mut self, o: Self) {
        self.n += o.n;
        self.fd += o.fd;
        self.hd += o.hd;
    }
}

/// Mean FD and HD rates over fading realisations for each sweep point.
///
/// Every point reuses the same random stream, so differences between rows
/// reflect the swept parameter rather than sampling noise. With fading
/// disabled a single deterministic evaluation is made.
pub fn ergodic_rate_sweep(s: &Scenario, sweep: &Sweep, cfg: &SimConfig) -> Result<Vec<RateRow>> {
    s.validate()?;
    cfg.validate()?;
    check(sweep.len() >= 1, "sweep", "non-empty", 0.0)?;
    let np = derive_noise_profile(&s.impairments);

    let points: Vec<(f64, Scenario, Option<PowerMw>)> = match sweep {
        Sweep::RssiB(v) => v.iter().map(|b| (b.value(), *s, Some(b.to_mw()))).collect(),
        Sweep::Distance(v) => v.iter().map(|&d| (d, s.with_distance(d), None)).collect(),
        Sweep::TxPower(v) => v.iter().map(|&p| (p.value(), s.with_tx_power(p), None)).collect(),
    };

    let mut rows = Vec::with_capacity(points.len());
    for (x, sc, rssi_b) in points {
        sc.validate()?;
        let shadowing = rssi_b.is_none() && sc.path_loss.shadow_sigma_db() > 0.0;
        let link_of = |draw: &ChannelDraw| -> Result<LinkState> {
            match rssi_b {
                Some(b) => Ok(LinkState::new(
                    PowerMw::from_raw(sc.mean_rssi_a().value() * draw.si_gain),
                    PowerMw::from_raw(b.value() * draw.soi_gain),
                )),
                None => link_for_draw(&sc, draw),
            }
        };
        let (fd, hd) = if cfg.fading_enabled {
            // link_of only fails on an invalid distance, already checked above.
            let acc = run_chunked(cfg.n_samples, cfg.seed, cfg.threads, |rng, count| {
                let mut acc = RateAcc::default();
                for _ in 0..count {
                    let draw = ChannelDraw::sample(&sc, rng, true, shadowing);
                    let link = link_of(&draw).expect("validated scenario");
                    acc.n += 1;
                    acc.fd += rate_fd(sinr_fd(&np, &link, cfg.scheme));
                    acc.hd += rate_hd(snr_hd(&np, link.rssi_b));
                }
                acc
            })?;
            (acc.fd / acc.n as f64, acc.hd / acc.n as f64)
        } else {
            let link = link_of(&ChannelDraw::UNIT)?;
            (
                rate_fd(sinr_fd(&np, &link, cfg.scheme)),
                rate_hd(snr_hd(&np, link.rssi_b)),
            )
        };
        rows.push(RateRow {
            x,
            scheme: cfg.scheme,
            rate_fd: fd,
            rate_hd: hd,
            gain_ratio: fd / hd,
        });
    }
    Ok(rows)
}
