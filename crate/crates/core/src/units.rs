//! Unit-safe scalar types.
//!
//! Log-domain quantities ([`Decibel`], [`PowerDbm`]) and linear-domain
//! quantities ([`LinearRatio`], [`PowerMw`]) are distinct types. Absolute
//! powers are always referenced to one milliwatt, so a thermal noise power
//! of −114 dBm is stored as `PowerMw(3.98e-12)`; this is the convention the
//! composite noise coefficient η relies on when it adds dimensionless phase
//! and quantization noise to absolute thermal powers.
//!
//! Only physically meaningful operators are implemented. Mixing domains
//! without an explicit conversion does not compile:
//!
//! ```compile_fail
//! use fdgain::units::{PowerDbm, PowerMw};
//! let _ = PowerDbm::new(0.0) + PowerMw::from_dbm(PowerDbm::new(-30.0));
//! ```

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{check, Error, Result};

/// A ratio expressed in decibels.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize)]
#[serde(transparent)]
pub struct Decibel(f64);

/// A dimensionless linear ratio, always `>= 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize)]
#[serde(transparent)]
pub struct LinearRatio(f64);

/// An absolute power in dBm.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize)]
#[serde(transparent)]
pub struct PowerDbm(f64);

/// An absolute power in milliwatts, always `>= 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize)]
#[serde(transparent)]
pub struct PowerMw(f64);

/// `10^(x/10)`.
pub fn db_to_linear(x: Decibel) -> LinearRatio {
    LinearRatio(10f64.powf(x.0 / 10.0))
}

/// `10·log10(x)`. Zero has no finite logarithm and is reported as an error.
pub fn linear_to_db(x: LinearRatio) -> Result<Decibel> {
    log10_checked(x.0).map(Decibel)
}

fn log10_checked(x: f64) -> Result<f64> {
    if x == 0.0 {
        Err(Error::LogOfZero)
    } else {
        Ok(10.0 * x.log10())
    }
}

impl Decibel {
    pub const fn new(db: f64) -> Self {
        Decibel(db)
    }

    pub const fn value(self) -> f64 {
        self.0
    }

    pub fn to_linear(self) -> LinearRatio {
        db_to_linear(self)
    }
}

impl LinearRatio {
    pub fn new(value: f64) -> Result<Self> {
        check(value >= 0.0, "linear ratio", "non-negative", value)?;
        Ok(LinearRatio(value))
    }

    /// Caller guarantees `value >= 0`.
    pub(crate) fn from_raw(value: f64) -> Self {
        debug_assert!(value >= 0.0, "negative linear ratio {value}");
        LinearRatio(value)
    }

    pub const ONE: LinearRatio = LinearRatio(1.0);
    pub const ZERO: LinearRatio = LinearRatio(0.0);

    pub const fn value(self) -> f64 {
        self.0
    }

    pub fn to_db(self) -> Result<Decibel> {
        linear_to_db(self)
    }
}

impl PowerDbm {
    pub const fn new(dbm: f64) -> Self {
        PowerDbm(dbm)
    }

    pub const fn value(self) -> f64 {
        self.0
    }

    pub fn to_mw(self) -> PowerMw {
        PowerMw::from_dbm(self)
    }
}

impl PowerMw {
    pub fn new(mw: f64) -> Result<Self> {
        check(mw >= 0.0, "power", "non-negative (mW)", mw)?;
        Ok(PowerMw(mw))
    }

    pub(crate) fn from_raw(mw: f64) -> Self {
        debug_assert!(mw >= 0.0, "negative power {mw}");
        PowerMw(mw)
    }

    pub const ZERO: PowerMw = PowerMw(0.0);

    pub fn from_dbm(p: PowerDbm) -> Self {
        PowerMw(10f64.powf(p.0 / 10.0))
    }

    pub const fn value(self) -> f64 {
        self.0
    }

    pub fn to_dbm(self) -> Result<PowerDbm> {
        log10_checked(self.0).map(PowerDbm)
    }
}

impl Add for Decibel {
    type Output = Decibel;
    fn add(self, rhs: Decibel) -> Decibel {
        Decibel(self.0 + rhs.0)
    }
}

impl Sub for Decibel {
    type Output = Decibel;
    fn sub(self, rhs: Decibel) -> Decibel {
        Decibel(self.0 - rhs.0)
    }
}

impl Neg for Decibel {
    type Output = Decibel;
    fn neg(self) -> Decibel {
        Decibel(-self.0)
    }
}

impl Add<Decibel> for PowerDbm {
    type Output = PowerDbm;
    fn add(self, rhs: Decibel) -> PowerDbm {
        PowerDbm(self.0 + rhs.0)
    }
}

impl Sub<Decibel> for PowerDbm {
    type Output = PowerDbm;
    fn sub(self, rhs: Decibel) -> PowerDbm {
        PowerDbm(self.0 - rhs.0)
    }
}

impl Sub for PowerDbm {
    type Output = Decibel;
    fn sub(self, rhs: PowerDbm) -> Decibel {
        Decibel(self.0 - rhs.0)
    }
}

impl Mul for LinearRatio {
    type Output = LinearRatio;
    fn mul(self, rhs: LinearRatio) -> LinearRatio {
        LinearRatio(self.0 * rhs.0)
    }
}

impl Add for LinearRatio {
    type Output = LinearRatio;
    fn add(self, rhs: LinearRatio) -> LinearRatio {
        LinearRatio(self.0 + rhs.0)
    }
}

impl Mul<LinearRatio> for PowerMw {
    type Output = PowerMw;
    fn mul(self, rhs: LinearRatio) -> PowerMw {
        PowerMw(self.0 * rhs.0)
    }
}

impl Add for PowerMw {
    type Output = PowerMw;
    fn add(self, rhs: PowerMw) -> PowerMw {
        PowerMw(self.0 + rhs.0)
    }
}

impl fmt::Display for Decibel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} dB", self.0)
    }
}

impl fmt::Display for PowerDbm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} dBm", self.0)
    }
}

impl fmt::Display for PowerMw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e} mW", self.0)
    }
}

impl fmt::Display for LinearRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.0)
    }
}
