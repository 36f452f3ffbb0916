//! Rate gain region: the set of signal-of-interest strengths for which the
//! full-duplex per-link rate beats the half-duplex one.
//!
//! The condition `log2(1 + SINR) > ½·log2(1 + SNR)` reduces to
//! `a·RSSI_B² + b·RSSI_B + c > 0` with
//!
//! ```text
//! a = η(η + 1)      b = ζ(η + ½)      c = −k·RSSI_A·(k·RSSI_A + ζ)
//! ```
//!
//! where `k = η` for digital and `k = μ` for analog cancellation. Because
//! `c <= 0` there is exactly one non-negative root, [`exact_rssi_b_min`].
//! [`approx_rssi_b_min`] is the three-segment log-linear approximation and
//! [`oracle_rssi_b_min`] brackets the crossover numerically without the
//! quadratic, so the two can check each other.

use std::fmt;

use serde::Serialize;

use crate::error::{check, Error, Result};
use crate::model::{sinr_fd, snr_hd, LinkState, NoiseProfile};
use crate::units::{Decibel, PowerDbm, PowerMw};

pub use crate::model::Scheme;

/// 10·log10(2).
const TWO_DB: f64 = 3.010_299_956_639_812;

/// Largest noise coefficient for which the weak and strong thresholds are
/// ordered (4·n·√n < n).
pub const MAX_PIECEWISE_NOISE: f64 = 1.0 / 16.0;

/// Bisection bracket for the oracle, in dBm.
pub const ORACLE_BRACKET_DBM: (f64, f64) = (-200.0, 50.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadraticCoeffs {
    /// η(η + 1), dimensionless.
    pub a: f64,
    /// ζ(η + ½), in mW.
    pub b: f64,
    /// −k·RSSI_A·(k·RSSI_A + ζ), in mW².
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RegimeKind {
    Weak,
    Intermediate,
    Strong,
}

impl RegimeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RegimeKind::Weak => "weak",
            RegimeKind::Intermediate => "intermediate",
            RegimeKind::Strong => "strong",
        }
    }
}

impl fmt::Display for RegimeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Self-interference regime together with the thresholds that delimit it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Regime {
    pub kind: RegimeKind,
    /// ζ/k: below this the self-interference noise is under the floor.
    pub weak_upper: PowerMw,
    /// ζ/(4k√k): from here on the strong asymptote applies.
    pub strong_lower: PowerMw,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionResult {
    pub scheme: Scheme,
    pub rssi_b_min_exact: PowerMw,
    pub rssi_b_min_approx: PowerMw,
    pub regime: Regime,
}

pub fn quadratic_coeffs(np: &NoiseProfile, rssi_a: PowerMw, scheme: Scheme) -> QuadraticCoeffs {
    let eta = np.eta().value();
    let zeta = np.zeta().value();
    let si = np.si_coefficient(scheme).value() * rssi_a.value();
    QuadraticCoeffs {
        a: eta * (eta + 1.0),
        b: zeta * (eta + 0.5),
        c: -si * (si + zeta),
    }
}

/// The non-negative root of `a·x² + b·x + c`.
///
/// Evaluated as `2c / (−b − √(b² − 4ac))`; in the weak regime `b²` exceeds
/// `|4ac|` by many orders of magnitude and the textbook form cancels to zero.
pub fn exact_rssi_b_min(coeffs: &QuadraticCoeffs) -> PowerMw {
    let QuadraticCoeffs { a, b, c } = *coeffs;
    if c >= 0.0 {
        return PowerMw::ZERO;
    }
    let disc = b * b - 4.0 * a * c;
    PowerMw::from_raw(2.0 * c / (-b - disc.sqrt()))
}

pub fn classify_regime(np: &NoiseProfile, rssi_a: PowerMw, scheme: Scheme) -> Result<Regime> {
    let k = np.si_coefficient(scheme).value();
    if k >= MAX_PIECEWISE_NOISE {
        return Err(Error::ThresholdOrdering { scheme, value: k });
    }
    let zeta = np.zeta().value();
    let weak_upper = zeta / k;
    let strong_lower = zeta / (4.0 * k * k.sqrt());
    let a = rssi_a.value();
    let kind = if a >= strong_lower {
        RegimeKind::Strong
    } else if a >= weak_upper {
        RegimeKind::Intermediate
    } else {
        RegimeKind::Weak
    };
    Ok(Regime {
        kind,
        weak_upper: PowerMw::from_raw(weak_upper),
        strong_lower: PowerMw::from_raw(strong_lower),
    })
}

/// Value of one asymptote, regardless of whether `rssi_a` lies in its regime.
pub fn asymptote(np: &NoiseProfile, rssi_a: PowerMw, scheme: Scheme, kind: RegimeKind) -> PowerMw {
    let k = np.si_coefficient(scheme).value();
    let a = rssi_a.value();
    let v = match kind {
        RegimeKind::Strong => k * a / np.eta().value().sqrt(),
        RegimeKind::Intermediate => 2.0 * k * k * a * a / np.zeta().value(),
        RegimeKind::Weak => 2.0 * k * a,
    };
    PowerMw::from_raw(v)
}

/// Piecewise log-linear RSSI_B,min and the regime that produced it.
pub fn approx_rssi_b_min(np: &NoiseProfile, rssi_a: PowerMw, scheme: Scheme) -> Result<(PowerMw, Regime)> {
    let regime = classify_regime(np, rssi_a, scheme)?;
    Ok((asymptote(np, rssi_a, scheme, regime.kind), regime))
}

pub fn rate_gain_region(np: &NoiseProfile, rssi_a: PowerMw, scheme: Scheme) -> Result<RegionResult> {
    let exact = exact_rssi_b_min(&quadratic_coeffs(np, rssi_a, scheme));
    let (approx, regime) = approx_rssi_b_min(np, rssi_a, scheme)?;
    Ok(RegionResult {
        scheme,
        rssi_b_min_exact: exact,
        rssi_b_min_approx: approx,
        regime,
    })
}

/// `SINR² + 2·SINR − SNR`; positive inside the rate gain region.
pub fn rate_margin(np: &NoiseProfile, link: &LinkState, scheme: Scheme) -> f64 {
    let s = sinr_fd(np, link, scheme).value();
    let h = snr_hd(np, link.rssi_b).value();
    s * s + 2.0 * s - h
}

/// Locates RSSI_B,min by bisection in dBm on the sign of [`rate_margin`].
pub fn oracle_rssi_b_min(np: &NoiseProfile, rssi_a: PowerMw, scheme: Scheme, tol_db: f64) -> Result<PowerMw> {
    check(tol_db > 0.0, "tol_db", "positive", tol_db)?;
    if rssi_a.value() == 0.0 {
        return Ok(PowerMw::ZERO);
    }
    let margin = |b_dbm: f64| rate_margin(np, &LinkState::new(rssi_a, PowerDbm::new(b_dbm).to_mw()), scheme);
    let (mut lo, mut hi) = ORACLE_BRACKET_DBM;
    if margin(lo) > 0.0 || margin(hi) <= 0.0 {
        return Err(Error::NoSignChange { lo_dbm: lo, hi_dbm: hi });
    }
    while hi - lo > tol_db / 4.0 {
        let mid = 0.5 * (lo + hi);
        if margin(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(PowerDbm::new(0.5 * (lo + hi)).to_mw())
}

/// A solved design target, expressed as the budget
/// `P_x (dBm) + C (dB) + noise (dB)` where C is the (negative) passive
/// self-interference gain and noise is η (DC) or μ (AC).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DesignSolution {
    pub scheme: Scheme,
    pub regime: RegimeKind,
    pub budget: Decibel,
    pub noise: Decibel,
}

impl DesignSolution {
    /// Passive suppression in dB (a positive number) needed at `tx_power`.
    pub fn required_suppression(&self, tx_power: PowerDbm) -> Decibel {
        Decibel::new(tx_power.value() + self.noise.value() - self.budget.value())
    }

    /// Highest transmit power that still meets the target with `suppression`.
    pub fn max_tx_power(&self, suppression: Decibel) -> PowerDbm {
        PowerDbm::new(self.budget.value() - self.noise.value() + suppression.value())
    }

    /// Noise level the budget allows for a given transmit power and
    /// suppression. In the strong regime the budget itself depends on η, so
    /// this only inverts the dB sum.
    pub fn max_noise(&self, tx_power: PowerDbm, suppression: Decibel) -> Decibel {
        Decibel::new(self.budget.value() - tx_power.value() + suppression.value())
    }
}

/// Inverts the piecewise approximation: which `P_x + C + noise` produces
/// `target` as the boundary of the rate gain region?
///
/// Every branch is solved and kept only if its solution falls inside its own
/// regime. When several branches qualify the one with the largest budget
/// (least passive suppression) is returned.
pub fn design_constraint(np: &NoiseProfile, target: PowerDbm, scheme: Scheme) -> Result<DesignSolution> {
    let k = np.si_coefficient(scheme);
    let noise = k.to_db().map_err(|_| Error::InvalidParameter {
        what: "noise coefficient",
        constraint: "positive for a finite design budget",
        value: k.value(),
    })?;
    let eta_db = np.eta().to_db()?.value();
    let zeta_dbm = np.zeta().to_dbm()?.value();
    let t = target.value();

    let candidates = [
        (RegimeKind::Strong, t + eta_db / 2.0),
        (RegimeKind::Intermediate, (t - TWO_DB + zeta_dbm) / 2.0),
        (RegimeKind::Weak, t - TWO_DB),
    ];

    let mut best: Option<DesignSolution> = None;
    for (kind, budget) in candidates {
        let rssi_a = PowerDbm::new(budget - noise.value()).to_mw();
        if classify_regime(np, rssi_a, scheme)?.kind != kind {
            continue;
        }
        if best.is_none_or(|b| budget > b.budget.value()) {
            best = Some(DesignSolution {
                scheme,
                regime: kind,
                budget: Decibel::new(budget),
                noise,
            });
        }
    }
    best.ok_or(Error::Infeasible { target_dbm: t, scheme })
}
