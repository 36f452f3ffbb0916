//! Link states from physical scenarios: log-distance path loss with
//! log-normal shadowing, single-tap Rician fading, and passive
//! self-interference suppression.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{check, Result};
use crate::model::{LinkState, RadioImpairments};
use crate::units::{Decibel, PowerDbm, PowerMw};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathLossParams {
    carrier_freq_hz: f64,
    exponent: f64,
    shadow_sigma_db: f64,
}

impl PathLossParams {
    pub fn new(carrier_freq_hz: f64, exponent: f64, shadow_sigma_db: f64) -> Result<Self> {
        check(carrier_freq_hz > 0.0, "carrier_freq_hz", "positive", carrier_freq_hz)?;
        check(exponent > 0.0, "path loss exponent", "positive", exponent)?;
        check(
            shadow_sigma_db >= 0.0,
            "shadow_sigma_db",
            "non-negative",
            shadow_sigma_db,
        )?;
        Ok(PathLossParams {
            carrier_freq_hz,
            exponent,
            shadow_sigma_db,
        })
    }

    /// 2.4 GHz indoor line-of-sight: exponent 2.5, 3.5 dB shadowing.
    pub fn indoor_2g4() -> Self {
        PathLossParams {
            carrier_freq_hz: 2.4e9,
            exponent: 2.5,
            shadow_sigma_db: 3.5,
        }
    }

    pub fn carrier_freq_hz(&self) -> f64 {
        self.carrier_freq_hz
    }
    pub fn exponent(&self) -> f64 {
        self.exponent
    }
    pub fn shadow_sigma_db(&self) -> f64 {
        self.shadow_sigma_db
    }

    pub fn wavelength_m(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_freq_hz
    }

    /// K = 20·log10(λ/4π); negative at any practical carrier.
    pub fn k_db(&self) -> f64 {
        20.0 * (self.wavelength_m() / (4.0 * PI)).log10()
    }
}

/// `−K + 10·r·log10(d) + X`, where X ~ N(0, σ²) is drawn from `shadowing`
/// when given and is zero otherwise.
pub fn path_loss_db<R: Rng + ?Sized>(
    p: &PathLossParams,
    distance_m: f64,
    shadowing: Option<&mut R>,
) -> Result<Decibel> {
    let mean = mean_path_loss_db(p, distance_m)?;
    let shadow = match shadowing {
        Some(rng) => p.shadow_sigma_db * rng.sample::<f64, _>(StandardNormal),
        None => 0.0,
    };
    Ok(Decibel::new(mean + shadow))
}

fn mean_path_loss_db(p: &PathLossParams, distance_m: f64) -> Result<f64> {
    check(distance_m > 0.0, "distance_m", "positive", distance_m)?;
    Ok(-p.k_db() + 10.0 * p.exponent * distance_m.log10())
}

/// Rician fading with unit mean-square gain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FadingParams {
    pub rician_k_db: f64,
}

impl FadingParams {
    pub fn new(rician_k_db: f64) -> Self {
        FadingParams { rician_k_db }
    }

    fn los_fraction(&self) -> f64 {
        let k = 10f64.powf(self.rician_k_db / 10.0);
        if k.is_infinite() {
            1.0
        } else {
            k / (k + 1.0)
        }
    }
}

/// `h = √(K/(K+1)) + √(1/(K+1))·g`, with g circularly-symmetric complex
/// Gaussian of unit variance and the line-of-sight phase fixed at zero.
pub fn sample_rician<R: Rng + ?Sized>(f: &FadingParams, rng: &mut R) -> Complex64 {
    let los = f.los_fraction();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    let scatter = (1.0 - los).sqrt() * FRAC_1_SQRT_2;
    Complex64::new(los.sqrt() + scatter * re, scatter * im)
}

/// A full-duplex link between two identical nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Scenario {
    pub tx_power: PowerDbm,
    /// Passive self-interference suppression C, in dB of attenuation.
    pub passive_suppression: Decibel,
    pub distance_m: f64,
    pub path_loss: PathLossParams,
    pub soi_fading: FadingParams,
    pub si_fading: FadingParams,
    pub impairments: RadioImpairments,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        check(self.distance_m > 0.0, "distance_m", "positive", self.distance_m)?;
        check(
            self.passive_suppression.value() >= 0.0,
            "passive_suppression_db",
            "non-negative",
            self.passive_suppression.value(),
        )?;
        Ok(())
    }

    pub fn with_tx_power(mut self, tx_power: PowerDbm) -> Self {
        self.tx_power = tx_power;
        self
    }

    pub fn with_distance(mut self, distance_m: f64) -> Self {
        self.distance_m = distance_m;
        self
    }

    /// Self-interference RSSI before fading: P_x − C.
    pub fn mean_rssi_a(&self) -> PowerMw {
        (self.tx_power - self.passive_suppression).to_mw()
    }
}

/// One realisation of the random channel quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelDraw {
    /// |h_AA|²
    pub si_gain: f64,
    /// |h_BA|²
    pub soi_gain: f64,
    /// Shadowing term X, in dB.
    pub shadow_db: f64,
}

impl ChannelDraw {
    /// No fading, no shadowing.
    pub const UNIT: ChannelDraw = ChannelDraw {
        si_gain: 1.0,
        soi_gain: 1.0,
        shadow_db: 0.0,
    };

    /// Draws in a fixed order: self-interference tap, signal tap, shadowing.
    pub fn sample<R: Rng + ?Sized>(s: &Scenario, rng: &mut R, fading: bool, shadowing: bool) -> Self {
        let mut draw = ChannelDraw::UNIT;
        if fading {
            draw.si_gain = sample_rician(&s.si_fading, rng).norm_sqr();
            draw.soi_gain = sample_rician(&s.soi_fading, rng).norm_sqr();
        }
        if shadowing {
            draw.shadow_db = s.path_loss.shadow_sigma_db * rng.sample::<f64, _>(StandardNormal);
        }
        draw
    }
}

/// RSSI pair for a given channel realisation.
pub fn link_for_draw(s: &Scenario, draw: &ChannelDraw) -> Result<LinkState> {
    let loss = mean_path_loss_db(&s.path_loss, s.distance_m)? + draw.shadow_db;
    let rssi_a = s.mean_rssi_a().value() * draw.si_gain;
    let rssi_b = PowerDbm::new(s.tx_power.value() - loss).to_mw().value() * draw.soi_gain;
    Ok(LinkState::new(PowerMw::from_raw(rssi_a), PowerMw::from_raw(rssi_b)))
}

/// RSSI pair with fading on both paths and shadowing on the signal path.
pub fn rssi_pair<R: Rng + ?Sized>(s: &Scenario, rng: &mut R) -> Result<LinkState> {
    s.validate()?;
    let draw = ChannelDraw::sample(s, rng, true, true);
    link_for_draw(s, &draw)
}

/// RSSI pair with fading and shadowing disabled.
pub fn deterministic_rssi_pair(s: &Scenario) -> Result<LinkState> {
    s.validate()?;
    link_for_draw(s, &ChannelDraw::UNIT)
}
