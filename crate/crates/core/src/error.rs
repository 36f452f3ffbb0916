use thiserror::Error;

use crate::model::Scheme;

/// Errors raised by the analysis library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{what} must be {constraint}, got {value}")]
    InvalidParameter {
        what: &'static str,
        constraint: &'static str,
        value: f64,
    },

    #[error("cannot take the logarithm of a zero power or ratio")]
    LogOfZero,

    #[error("{0} is undefined for zero input power")]
    ZeroInputPower(&'static str),

    #[error("piecewise region requires η ≪ 1: {scheme} noise coefficient {value:e} is not below 1/16")]
    ThresholdOrdering { scheme: Scheme, value: f64 },

    #[error("no sign change of the rate margin in [{lo_dbm} dBm, {hi_dbm} dBm]")]
    NoSignChange { lo_dbm: f64, hi_dbm: f64 },

    #[error("target RSSI_B,min of {target_dbm} dBm is not reachable in any regime ({scheme})")]
    Infeasible { target_dbm: f64, scheme: Scheme },

    #[error("thread pool: {0}")]
    ThreadPool(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check(cond: bool, what: &'static str, constraint: &'static str, value: f64) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            what,
            constraint,
            value,
        })
    }
}
