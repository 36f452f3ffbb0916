//! Rate gain region of full-duplex links under hardware impairments.
//!
//! Closed-form SINR models for digital and analog self-interference
//! cancellation, the boundary of the region where full duplex beats half
//! duplex, a transceiver design helper, a channel layer (path loss, Rician
//! fading) and a sample-level Monte Carlo check.

pub mod channel;
pub mod error;
pub mod mc;
pub mod model;
pub mod region;
pub mod sim;
pub mod units;

pub use error::{Error, Result};
pub use model::{derive_noise_profile, LinkState, NoiseProfile, RadioImpairments, Scheme};
pub use units::{Decibel, LinearRatio, PowerDbm, PowerMw};
