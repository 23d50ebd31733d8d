//! Link-level model of network-assisted device-to-device underlay for
//! machine-type traffic: one fixed-rate machine link reuses the resources
//! of an adaptive cellular link (downlink or uplink), and the cellular
//! transmitter's power and rate are chosen so the machine link keeps its
//! outage guarantee.
//!
//! The numeric modules are generic over the scalar type through
//! [`num_traits::Float`]; the crate root re-exports concrete `f64` aliases
//! for the common value types.

pub mod bisect;
pub mod channel;
pub mod decision;
pub mod downlink;
pub mod mac;
pub mod outage;
pub mod scheduler;
pub mod sim;
pub mod uplink;

/// Transmit or received power in watts (`f64`).
pub type Power = channel::PowerLevel<f64>;
/// Receiver noise power in watts (`f64`).
pub type Noise = channel::NoiseVariance<f64>;
/// Linear signal-to-noise ratio (`f64`).
pub type SnrValue = channel::Snr<f64>;
/// Directed link gain with its current fading realization (`f64`).
pub type Gain = channel::LinkGain<f64>;
/// Machine-link outage contract (`f64`).
pub type Target = outage::OutageTarget<f64>;
