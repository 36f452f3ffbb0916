//! Transceiver impairments, derived noise quantities, and the closed-form
//! SINR / SNR / rate expressions for full-duplex (digital or analog
//! cancellation) and half-duplex operation.
//!
//! Every closed form is written in terms of two composite coefficients:
//!
//! * η = μ + σ_q² + P_th·(N_m − 1), the noise that scales with the power at
//!   the LNA input (phase, quantization, mixer);
//! * ζ = P_th·N_l, the signal-independent noise floor.
//!
//! P_th enters η as its numeric value in milliwatts (see [`crate::units`]).

use std::fmt;

use serde::Serialize;

use crate::error::{check, Error, Result};
use crate::units::{db_to_linear, Decibel, LinearRatio, PowerMw};

/// Boltzmann constant (J/K).
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Standard noise reference temperature (K).
pub const REFERENCE_TEMPERATURE_K: f64 = 290.0;

/// Above this total phase-noise power the `e^{iφ} ≈ 1 + iφ` linearisation
/// behind the closed forms is off by more than about one percent.
pub const SMALL_ANGLE_LIMIT: f64 = 0.01;

/// Where the self-interference is subtracted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// In the digital baseband, after the LNA, mixer and ADC.
    #[serde(rename = "dc")]
    DigitalCancellation,
    /// Before the LNA, with an up-converted replica.
    #[serde(rename = "ac")]
    AnalogCancellation,
}

impl Scheme {
    pub const ALL: [Scheme; 2] = [Scheme::DigitalCancellation, Scheme::AnalogCancellation];

    pub fn short_name(self) -> &'static str {
        match self {
            Scheme::DigitalCancellation => "dc",
            Scheme::AnalogCancellation => "ac",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

/// Hardware noise description of one node. Both ends of the link are assumed
/// to use identical hardware, so one value describes the whole link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadioImpairments {
    mu_tx: LinearRatio,
    mu_rx: LinearRatio,
    lna_nf: LinearRatio,
    mixer_nf: LinearRatio,
    adc_bits: u32,
    bandwidth_hz: f64,
    temperature_k: f64,
}

impl RadioImpairments {
    /// `mu_tx`/`mu_rx` are the integrated in-band phase noise powers of the
    /// transmit and receive oscillators; noise figures are linear.
    pub fn new(
        mu_tx: LinearRatio,
        mu_rx: LinearRatio,
        lna_nf: LinearRatio,
        mixer_nf: LinearRatio,
        adc_bits: u32,
        bandwidth_hz: f64,
    ) -> Result<Self> {
        let imp = RadioImpairments {
            mu_tx,
            mu_rx,
            lna_nf,
            mixer_nf,
            adc_bits,
            bandwidth_hz,
            temperature_k: REFERENCE_TEMPERATURE_K,
        };
        imp.validate()?;
        Ok(imp)
    }

    /// Industry-chipset defaults (N_l = 4 dB, N_m = 10 dB, 12-bit ADC,
    /// 1 MHz) with the given total phase noise split evenly between the
    /// transmit and receive oscillators.
    pub fn reference(mu_total: Decibel) -> Result<Self> {
        let half = LinearRatio::from_raw(db_to_linear(mu_total).value() / 2.0);
        RadioImpairments::new(
            half,
            half,
            db_to_linear(Decibel::new(4.0)),
            db_to_linear(Decibel::new(10.0)),
            12,
            1e6,
        )
    }

    pub fn with_temperature(mut self, temperature_k: f64) -> Result<Self> {
        self.temperature_k = temperature_k;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        for (what, mu) in [("mu_tx", self.mu_tx), ("mu_rx", self.mu_rx)] {
            check(mu.value() < 1.0, what, "in [0, 1)", mu.value())?;
        }
        check(
            self.lna_nf.value() >= 1.0,
            "lna_nf",
            ">= 1 (linear)",
            self.lna_nf.value(),
        )?;
        check(
            self.mixer_nf.value() >= 1.0,
            "mixer_nf",
            ">= 1 (linear)",
            self.mixer_nf.value(),
        )?;
        check(
            (1..=24).contains(&self.adc_bits),
            "adc_bits",
            "in [1, 24]",
            self.adc_bits as f64,
        )?;
        check(
            self.bandwidth_hz > 0.0 && self.bandwidth_hz.is_finite(),
            "bandwidth_hz",
            "positive",
            self.bandwidth_hz,
        )?;
        check(
            self.temperature_k > 0.0 && self.temperature_k.is_finite(),
            "temperature_k",
            "positive",
            self.temperature_k,
        )?;
        if !self.small_angle_valid() {
            log::warn!(
                "total phase noise {:e} >= {SMALL_ANGLE_LIMIT}: small-angle approximation degrades",
                self.mu_total()
            );
        }
        Ok(())
    }

    pub fn small_angle_valid(&self) -> bool {
        self.mu_total() < SMALL_ANGLE_LIMIT
    }

    fn mu_total(&self) -> f64 {
        self.mu_tx.value() + self.mu_rx.value()
    }

    pub fn mu_tx(&self) -> LinearRatio {
        self.mu_tx
    }
    pub fn mu_rx(&self) -> LinearRatio {
        self.mu_rx
    }
    pub fn lna_nf(&self) -> LinearRatio {
        self.lna_nf
    }
    pub fn mixer_nf(&self) -> LinearRatio {
        self.mixer_nf
    }
    pub fn adc_bits(&self) -> u32 {
        self.adc_bits
    }
    pub fn bandwidth_hz(&self) -> f64 {
        self.bandwidth_hz
    }
    pub fn temperature_k(&self) -> f64 {
        self.temperature_k
    }
}

/// The derived scalars that parameterise every closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseProfile {
    mu_tx: LinearRatio,
    mu_rx: LinearRatio,
    mu: LinearRatio,
    sigma_q2: LinearRatio,
    p_th: PowerMw,
    mixer_excess: PowerMw,
    eta: LinearRatio,
    zeta: PowerMw,
}

impl NoiseProfile {
    /// Builds a profile from its raw ingredients; η and ζ are derived.
    /// The phase noise is split evenly between transmitter and receiver.
    pub fn from_parts(
        mu: LinearRatio,
        sigma_q2: LinearRatio,
        p_th: PowerMw,
        mixer_nf: LinearRatio,
        lna_nf: LinearRatio,
    ) -> Result<Self> {
        let half = LinearRatio::from_raw(mu.value() / 2.0);
        NoiseProfile::assemble(half, half, sigma_q2, p_th, mixer_nf, lna_nf)
    }

    fn assemble(
        mu_tx: LinearRatio,
        mu_rx: LinearRatio,
        sigma_q2: LinearRatio,
        p_th: PowerMw,
        mixer_nf: LinearRatio,
        lna_nf: LinearRatio,
    ) -> Result<Self> {
        check(p_th.value() > 0.0, "p_th", "positive", p_th.value())?;
        check(mixer_nf.value() >= 1.0, "mixer_nf", ">= 1 (linear)", mixer_nf.value())?;
        check(lna_nf.value() >= 1.0, "lna_nf", ">= 1 (linear)", lna_nf.value())?;
        let mu = mu_tx + mu_rx;
        let mixer_excess = PowerMw::from_raw(p_th.value() * (mixer_nf.value() - 1.0));
        let eta = LinearRatio::from_raw(mu.value() + sigma_q2.value() + mixer_excess.value());
        let zeta = PowerMw::from_raw(p_th.value() * lna_nf.value());
        Ok(NoiseProfile {
            mu_tx,
            mu_rx,
            mu,
            sigma_q2,
            p_th,
            mixer_excess,
            eta,
            zeta,
        })
    }

    /// Total phase noise μ = μ^t + μ^r.
    pub fn mu(&self) -> LinearRatio {
        self.mu
    }
    pub fn mu_tx(&self) -> LinearRatio {
        self.mu_tx
    }
    pub fn mu_rx(&self) -> LinearRatio {
        self.mu_rx
    }
    pub fn sigma_q2(&self) -> LinearRatio {
        self.sigma_q2
    }
    pub fn p_th(&self) -> PowerMw {
        self.p_th
    }
    /// P_th·(N_m − 1), the mixer contribution to η.
    pub fn mixer_excess(&self) -> PowerMw {
        self.mixer_excess
    }
    pub fn eta(&self) -> LinearRatio {
        self.eta
    }
    pub fn zeta(&self) -> PowerMw {
        self.zeta
    }

    /// The coefficient multiplying RSSI_A in the FD denominator: η for
    /// digital cancellation, μ for analog cancellation.
    pub fn si_coefficient(&self, scheme: Scheme) -> LinearRatio {
        match scheme {
            Scheme::DigitalCancellation => self.eta,
            Scheme::AnalogCancellation => self.mu,
        }
    }
}

/// Instantaneous received signal strengths at the node under analysis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinkState {
    /// Self-interference RSSI.
    pub rssi_a: PowerMw,
    /// Signal-of-interest RSSI.
    pub rssi_b: PowerMw,
}

impl LinkState {
    pub fn new(rssi_a: PowerMw, rssi_b: PowerMw) -> Self {
        LinkState { rssi_a, rssi_b }
    }
}

/// Thermal noise k·T·B in milliwatts.
pub fn thermal_noise_power(bandwidth_hz: f64, temperature_k: f64) -> Result<PowerMw> {
    check(bandwidth_hz > 0.0, "bandwidth_hz", "positive", bandwidth_hz)?;
    check(temperature_k > 0.0, "temperature_k", "positive", temperature_k)?;
    Ok(PowerMw::from_raw(BOLTZMANN * temperature_k * bandwidth_hz * 1e3))
}

/// σ_q² = 1 / (12 · 2^(2m−2)) for an m-bit ADC.
pub fn quantization_noise_variance(adc_bits: u32) -> Result<LinearRatio> {
    check(adc_bits >= 1, "adc_bits", ">= 1", adc_bits as f64)?;
    let levels = 2f64.powi(2 * adc_bits as i32 - 2);
    Ok(LinearRatio::from_raw(1.0 / (12.0 * levels)))
}

pub fn derive_noise_profile(imp: &RadioImpairments) -> NoiseProfile {
    // RadioImpairments is validated on construction, so none of these fail.
    let p_th = thermal_noise_power(imp.bandwidth_hz, imp.temperature_k).expect("validated bandwidth and temperature");
    let sigma_q2 = quantization_noise_variance(imp.adc_bits).expect("validated adc bits");
    NoiseProfile::assemble(imp.mu_tx, imp.mu_rx, sigma_q2, p_th, imp.mixer_nf, imp.lna_nf)
        .expect("validated noise figures")
}

/// AGC gain α² under digital cancellation: the LNA sees both signals.
pub fn lna_gain_dc(link: &LinkState) -> Result<LinearRatio> {
    let input = link.rssi_a.value() + link.rssi_b.value();
    if input > 0.0 {
        Ok(LinearRatio::from_raw(1.0 / input))
    } else {
        Err(Error::ZeroInputPower("lna_gain_dc"))
    }
}

/// AGC gain α² under analog cancellation: only the signal of interest
/// reaches the LNA.
pub fn lna_gain_ac(link: &LinkState) -> Result<LinearRatio> {
    let input = link.rssi_b.value();
    if input > 0.0 {
        Ok(LinearRatio::from_raw(1.0 / input))
    } else {
        Err(Error::ZeroInputPower("lna_gain_ac"))
    }
}

pub fn sinr_fd_dc(np: &NoiseProfile, link: &LinkState) -> LinearRatio {
    sinr_fd(np, link, Scheme::DigitalCancellation)
}

pub fn sinr_fd_ac(np: &NoiseProfile, link: &LinkState) -> LinearRatio {
    sinr_fd(np, link, Scheme::AnalogCancellation)
}

/// RSSI_B / (k·RSSI_A + η·RSSI_B + ζ) with k = η (DC) or μ (AC).
pub fn sinr_fd(np: &NoiseProfile, link: &LinkState, scheme: Scheme) -> LinearRatio {
    let a = link.rssi_a.value();
    let b = link.rssi_b.value();
    let k = np.si_coefficient(scheme).value();
    LinearRatio::from_raw(b / (k * a + np.eta.value() * b + np.zeta.value()))
}

/// Half-duplex SNR with doubled transmit power and no self-interference.
pub fn snr_hd(np: &NoiseProfile, rssi_b: PowerMw) -> LinearRatio {
    let b = rssi_b.value();
    LinearRatio::from_raw(2.0 * b / (2.0 * np.eta.value() * b + np.zeta.value()))
}

/// Full-duplex per-direction rate in bits/s/Hz.
pub fn rate_fd(sinr: LinearRatio) -> f64 {
    sinr.value().ln_1p() / std::f64::consts::LN_2
}

/// Half-duplex per-direction rate; each direction gets half the time.
pub fn rate_hd(snr: LinearRatio) -> f64 {
    0.5 * snr.value().ln_1p() / std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::PowerDbm;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn mw(dbm: f64) -> PowerMw {
        PowerDbm::new(dbm).to_mw()
    }

    fn dbm(p: PowerMw) -> f64 {
        p.to_dbm().unwrap().value()
    }

    fn db(x: LinearRatio) -> f64 {
        x.to_db().unwrap().value()
    }

    fn lin(x: f64) -> LinearRatio {
        LinearRatio::new(x).unwrap()
    }

    fn profile(mu: f64, eta: f64, zeta: f64) -> NoiseProfile {
        // p_th = ζ, N_l = 1, N_m = 1, σ_q² = η − μ.
        NoiseProfile::from_parts(
            lin(mu),
            lin(eta - mu),
            PowerMw::new(zeta).unwrap(),
            LinearRatio::ONE,
            LinearRatio::ONE,
        )
        .unwrap()
    }

    #[test]
    fn thermal_noise_anchors() {
        let p = thermal_noise_power(1e6, 290.0).unwrap();
        assert!((dbm(p) + 113.98).abs() < 0.1);
        assert!((dbm(p) - (-113.9752)).abs() < 1e-3);
        let p1 = thermal_noise_power(1.0, 290.0).unwrap();
        assert!((dbm(p1) - (-173.9752)).abs() < 1e-3);
        let p2 = thermal_noise_power(2e6, 290.0).unwrap();
        assert!((dbm(p2) - dbm(p) - 3.0103).abs() < 1e-3);
        assert!(thermal_noise_power(0.0, 290.0).is_err());
        assert!(thermal_noise_power(1e6, -1.0).is_err());
    }

    #[test]
    fn quantization_anchors() {
        let q12 = quantization_noise_variance(12).unwrap();
        assert_relative_eq!(q12.value(), 1.9868e-8, max_relative = 1e-4);
        assert!((db(q12) + 77.0).abs() < 0.05);
        assert_relative_eq!(quantization_noise_variance(1).unwrap().value(), 1.0 / 12.0);
        let q14 = quantization_noise_variance(14).unwrap();
        assert!((db(q14) + 89.06).abs() < 0.01);
        assert!(quantization_noise_variance(0).is_err());
    }

    #[test]
    fn eta_at_reference_hardware() {
        let imp = RadioImpairments::reference(Decibel::new(-40.0)).unwrap();
        let np = derive_noise_profile(&imp);
        assert_relative_eq!(np.eta().value(), 1.0002e-4, max_relative = 1e-4);
        assert!((db(np.eta()) + 40.0).abs() < 0.2);
        assert!((dbm(np.zeta()) + 110.0).abs() < 0.05);
        assert_eq!(np.mu(), np.mu_tx() + np.mu_rx());
    }

    #[test]
    fn eta_reduces_to_quantization_when_others_vanish() {
        let imp = RadioImpairments::new(
            LinearRatio::ZERO,
            LinearRatio::ZERO,
            LinearRatio::ONE,
            LinearRatio::ONE,
            12,
            1e6,
        )
        .unwrap();
        let np = derive_noise_profile(&imp);
        assert_eq!(np.eta(), np.sigma_q2());
    }

    #[test]
    fn impairment_validation() {
        let one = LinearRatio::ONE;
        let z = LinearRatio::ZERO;
        assert!(RadioImpairments::new(one, z, one, one, 12, 1e6).is_err());
        assert!(RadioImpairments::new(z, z, lin(0.5), one, 12, 1e6).is_err());
        assert!(RadioImpairments::new(z, z, one, one, 0, 1e6).is_err());
        assert!(RadioImpairments::new(z, z, one, one, 25, 1e6).is_err());
        assert!(RadioImpairments::new(z, z, one, one, 12, 0.0).is_err());
        let imp = RadioImpairments::new(z, z, one, one, 12, 1e6).unwrap();
        assert!(imp.with_temperature(0.0).is_err());
        let loud = RadioImpairments::new(lin(0.01), lin(0.01), one, one, 12, 1e6).unwrap();
        assert!(!loud.small_angle_valid());
    }

    #[test]
    fn lna_gains() {
        let link = LinkState::new(PowerMw::new(1e-4).unwrap(), PowerMw::new(1e-6).unwrap());
        assert_relative_eq!(lna_gain_dc(&link).unwrap().value(), 1.0 / 1.01e-4, max_relative = 1e-12);
        let no_si = LinkState::new(PowerMw::ZERO, PowerMw::new(1.0).unwrap());
        assert_eq!(lna_gain_dc(&no_si).unwrap().value(), 1.0);
        let dead = LinkState::new(PowerMw::ZERO, PowerMw::ZERO);
        assert!(lna_gain_dc(&dead).is_err());
        assert!(lna_gain_ac(&LinkState::new(PowerMw::new(1.0).unwrap(), PowerMw::ZERO)).is_err());
    }

    #[test]
    fn sinr_examples() {
        let np = profile(1e-4, 1e-4, 1e-11);
        let link = LinkState::new(mw(-40.0), mw(-60.0));
        let s = sinr_fd_dc(&np, &link);
        assert_relative_eq!(s.value(), 1e-6 / (1e-8 + 1e-10 + 1e-11), max_relative = 1e-9);
        assert!((db(s) - 19.95).abs() < 0.01);

        let silent = LinkState::new(mw(-40.0), PowerMw::ZERO);
        assert_eq!(sinr_fd_dc(&np, &silent).value(), 0.0);

        let floor_only = profile(0.0, 0.0, 1e-11);
        assert_relative_eq!(
            sinr_fd_dc(&floor_only, &link).value(),
            1e-6 / 1e-11,
            max_relative = 1e-12
        );
    }

    #[test]
    fn sinr_ac_example() {
        let imp = RadioImpairments::reference(Decibel::new(-60.0)).unwrap();
        let np = derive_noise_profile(&imp);
        assert_relative_eq!(np.eta().value(), 1.0199e-6, max_relative = 1e-3);
        let np = profile(1e-6, np.eta().value(), 1e-11);
        let link = LinkState::new(mw(-40.0), mw(-70.0));
        // μ·RSSI_A = 1e-6 · 1e-4 mW = 1e-10 mW dominates the denominator.
        let expected = 1e-7 / (1e-10 + 1.0199e-6 * 1e-7 + 1e-11);
        let s = sinr_fd_ac(&np, &link);
        assert_relative_eq!(s.value(), expected, max_relative = 1e-4);
        assert!((db(s) - 29.58).abs() < 0.01);
    }

    #[test]
    fn phase_dominated_schemes_coincide() {
        let np = profile(3e-5, 3e-5, 1e-11);
        let link = LinkState::new(mw(-30.0), mw(-65.0));
        assert_eq!(sinr_fd_ac(&np, &link), sinr_fd_dc(&np, &link));
    }

    #[test]
    fn half_duplex_examples() {
        let np = profile(1e-4, 1e-4, 1e-11);
        let snr = snr_hd(&np, mw(-60.0));
        assert_relative_eq!(snr.value(), 2e-6 / (2e-10 + 1e-11), max_relative = 1e-9);
        assert!((db(snr) - 39.79).abs() < 0.01);
        assert_eq!(snr_hd(&np, PowerMw::ZERO).value(), 0.0);
        let ceiling = profile(1e-4, 1e-4, 1e-300);
        assert_relative_eq!(snr_hd(&ceiling, mw(0.0)).value(), 1e4, max_relative = 1e-9);
    }

    #[test]
    fn rates() {
        assert_eq!(rate_fd(LinearRatio::ONE), 1.0);
        assert_relative_eq!(rate_hd(lin(3.0)), 1.0, max_relative = 1e-15);

        let np = profile(1e-4, 1e-4, 1e-11);
        let link = LinkState::new(mw(-40.0), mw(-60.0));
        let r_fd = rate_fd(sinr_fd_dc(&np, &link));
        let r_hd = rate_hd(snr_hd(&np, link.rssi_b));
        assert!((r_fd - 6.64).abs() < 0.01);
        assert!((r_hd - 6.60).abs() < 0.01);
        assert!(r_fd > r_hd);
    }

    #[test]
    fn saturation_under_common_scaling() {
        let np = profile(1e-4, 1e-4, 1e-11);
        let link = LinkState::new(mw(-40.0), mw(-60.0));
        let limit = link.rssi_b.value() / (np.eta().value() * (link.rssi_a.value() + link.rssi_b.value()));
        let mut prev = 0.0;
        for k in 0..=12 {
            let g = 10f64.powi(k);
            let scaled = LinkState::new(
                PowerMw::new(link.rssi_a.value() * g).unwrap(),
                PowerMw::new(link.rssi_b.value() * g).unwrap(),
            );
            let s = sinr_fd_dc(&np, &scaled).value();
            assert!(s > prev);
            assert!(s <= limit);
            prev = s;
        }
        assert!((limit - prev) / limit < 1e-9);
    }

    fn arb_profile() -> impl Strategy<Value = NoiseProfile> {
        (-90.0f64..-20.0, -90.0f64..-40.0, -130.0f64..-80.0, 0.0f64..15.0).prop_map(|(mu_db, q_db, pth_dbm, nm_db)| {
            NoiseProfile::from_parts(
                Decibel::new(mu_db).to_linear(),
                Decibel::new(q_db).to_linear(),
                mw(pth_dbm),
                Decibel::new(nm_db).to_linear(),
                Decibel::new(4.0).to_linear(),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn eta_dominates_mu(np in arb_profile()) {
            prop_assert!(np.eta() >= np.mu());
            prop_assert!(np.zeta().value() > 0.0);
            prop_assert_eq!(
                np.eta().value(),
                np.mu().value() + np.sigma_q2().value() + np.mixer_excess().value()
            );
        }

        #[test]
        fn analog_never_worse(np in arb_profile(), a in -120.0f64..10.0, b in -120.0f64..10.0) {
            let link = LinkState::new(mw(a), mw(b));
            prop_assert!(lna_gain_ac(&link).unwrap() >= lna_gain_dc(&link).unwrap());
            prop_assert!(sinr_fd_ac(&np, &link) >= sinr_fd_dc(&np, &link));
        }

        #[test]
        fn monotone_in_rssi(np in arb_profile(), a in -120.0f64..10.0, b in -120.0f64..10.0, step in 0.1f64..10.0) {
            let base = LinkState::new(mw(a), mw(b));
            let more_b = LinkState::new(mw(a), mw(b + step));
            let more_a = LinkState::new(mw(a + step), mw(b));
            prop_assert!(sinr_fd_dc(&np, &more_b) > sinr_fd_dc(&np, &base));
            prop_assert!(sinr_fd_dc(&np, &more_a) < sinr_fd_dc(&np, &base));
            prop_assert!(snr_hd(&np, more_b.rssi_b) > snr_hd(&np, base.rssi_b));
        }

        #[test]
        fn closed_forms_are_pure(np in arb_profile(), a in -120.0f64..10.0, b in -120.0f64..10.0) {
            let link = LinkState::new(mw(a), mw(b));
            prop_assert_eq!(sinr_fd_dc(&np, &link).value().to_bits(), sinr_fd_dc(&np, &link).value().to_bits());
            prop_assert_eq!(snr_hd(&np, link.rssi_b).value().to_bits(), snr_hd(&np, link.rssi_b).value().to_bits());
        }
    }
}
