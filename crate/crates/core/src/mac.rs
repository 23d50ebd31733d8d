//! Decodability predicates for the two-user Gaussian multiple-access
//! channel with single-user codebooks and opportunistic interference
//! cancellation (OIC).
//!
//! Joint decoding, time sharing and superposition coding are excluded: a
//! receiver either decodes its signal treating the interferer as noise, or
//! first decodes the interferer (treating the signal as noise), cancels it,
//! and then decodes the signal on a clean channel.

use num_traits::Float;

use crate::channel::{capacity, Snr};

/// Which decode route the receiver ends up on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodePath {
    DirectDecode,
    OicDecode,
    Undecodable,
}

/// One receiver's view of the two-user channel: the desired transmitter's
/// SNR and rate, and the interfering transmitter's SNR and rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MacState<F: Float = f64> {
    pub snr_signal: Snr<F>,
    pub snr_interference: Snr<F>,
    pub rate_signal: F,
    pub rate_interference: F,
}

fn sinr<F: Float>(signal: Snr<F>, interference: Snr<F>) -> Snr<F> {
    Snr::new(signal.value() / (F::one() + interference.value()))
}

fn classify<F: Float>(s: &MacState<F>) -> DecodePath {
    if s.rate_signal <= capacity(sinr(s.snr_signal, s.snr_interference)) {
        DecodePath::DirectDecode
    } else if s.rate_interference <= capacity(sinr(s.snr_interference, s.snr_signal))
        && s.rate_signal <= capacity(s.snr_signal)
    {
        DecodePath::OicDecode
    } else {
        DecodePath::Undecodable
    }
}

/// Decodability of the machine signal at the underlaid downlink receiver,
/// with the base-station transmission as the interferer.
pub fn classify_mi_at_ui<F: Float>(s: &MacState<F>) -> DecodePath {
    classify(s)
}

/// Decodability of the cellular uplink signal at the base station, with the
/// fixed-rate machine relay transmission as the interferer (which the base
/// station may decode and cancel).
pub fn classify_uj_at_b<F: Float>(s: &MacState<F>) -> DecodePath {
    classify(s)
}

/// A rate ceiling that may be absent: when the machine link decodes even
/// under full interference, the receiver-side constraint imposes no bound
/// and only the far-end capacity applies. An explicit marker keeps the
/// downstream `min` with the far-end bound exact and total.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateBound<F: Float = f64> {
    Limited(F),
    Unbounded,
}

impl<F: Float> RateBound<F> {
    /// The bound as a value, treating `Unbounded` as `cap`.
    pub fn min_with(self, cap: F) -> F {
        match self {
            RateBound::Limited(b) => b.min(cap),
            RateBound::Unbounded => cap,
        }
    }
}

/// Ceiling imposed on the interfering transmitter's rate by the machine
/// receiver's decode requirement:
///
/// - machine rate above the clean capacity: the machine cannot decode at
///   all, so the ceiling is zero (the pairing is excluded by scheduling);
/// - machine decodable only on a clean channel: the interferer must stay
///   decodable-and-cancelable, bounding its rate by its SINR capacity;
/// - machine decodable under full interference: no ceiling from this side.
pub fn max_rate_b_at_ui<F: Float>(snr_b: Snr<F>, snr_m: Snr<F>, r_m: F) -> RateBound<F> {
    if r_m > capacity(snr_m) {
        RateBound::Limited(F::zero())
    } else if r_m < capacity(sinr(snr_m, snr_b)) {
        RateBound::Unbounded
    } else {
        RateBound::Limited(capacity(sinr(snr_b, snr_m)))
    }
}
