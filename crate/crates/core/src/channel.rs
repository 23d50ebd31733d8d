//! Unit conversions, path loss, Rayleigh block fading and Shannon capacity.
//!
//! Everything here is a pure function over value types; the only stateful
//! object is the caller-owned random stream used by [`sample_fading`].
//! Fading is represented directly as an exponentially distributed power
//! gain with unit mean (the squared magnitude of a Rayleigh amplitude);
//! no complex phase is carried because none of the downstream formulas
//! consume it.

use num_traits::Float;
use rand::Rng;
use rand_distr::Exp1;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error("power in dBm must be finite, got {0}")]
    NonFinitePower(f64),
    #[error("path-loss model is only valid for d >= 1 m, got {0}")]
    DistanceOutOfRange(f64),
}

/// Transmit or received power in watts.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PowerLevel<F: Float = f64>(F);

impl<F: Float> PowerLevel<F> {
    pub fn from_watts(watts: F) -> Self {
        debug_assert!(watts >= F::zero());
        Self(watts)
    }

    pub fn watts(self) -> F {
        self.0
    }

    pub fn to_dbm(self) -> F {
        let f = |x: f64| F::from(x).unwrap();
        f(10.0) * self.0.log10() + f(30.0)
    }

    pub fn min(self, other: Self) -> Self {
        Self(self.0.min(other.0))
    }
}

/// Noise power in watts at a given receiver.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct NoiseVariance<F: Float = f64>(F);

impl<F: Float> NoiseVariance<F> {
    pub fn from_watts(watts: F) -> Self {
        debug_assert!(watts > F::zero());
        Self(watts)
    }

    pub fn from_dbm(dbm: F) -> Self {
        Self(dbm_to_watts(dbm).expect("finite noise level").watts())
    }

    pub fn watts(self) -> F {
        self.0
    }
}

/// Dimensionless linear signal-to-noise (or signal-to-interference-plus-noise) ratio.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Snr<F: Float = f64>(F);

impl<F: Float> Snr<F> {
    pub fn new(value: F) -> Self {
        debug_assert!(value >= F::zero());
        Self(value)
    }

    pub fn value(self) -> F {
        self.0
    }
}

/// Power gain of one directed link: a static mean gain together with the
/// fading realization of the current scheduling epoch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGain<F: Float = f64> {
    mean_gain: F,
    fading: F,
}

impl<F: Float> LinkGain<F> {
    pub fn new(mean_gain: F, fading: F) -> Self {
        debug_assert!(mean_gain > F::zero());
        debug_assert!(fading >= F::zero());
        Self { mean_gain, fading }
    }

    /// A link with no fading applied yet (unit multiplier).
    pub fn from_mean(mean_gain: F) -> Self {
        Self::new(mean_gain, F::one())
    }

    pub fn mean_gain(self) -> F {
        self.mean_gain
    }

    pub fn fading(self) -> F {
        self.fading
    }

    pub fn with_fading(self, fading: F) -> Self {
        Self::new(self.mean_gain, fading)
    }

    pub fn instantaneous(self) -> F {
        self.mean_gain * self.fading
    }
}

/// Convert a power given in dBm to watts: `10^((x - 30) / 10)`.
pub fn dbm_to_watts<F: Float>(dbm: F) -> Result<PowerLevel<F>, ChannelError> {
    if !dbm.is_finite() {
        return Err(ChannelError::NonFinitePower(
            dbm.to_f64().unwrap_or(f64::NAN),
        ));
    }
    let f = |x: f64| F::from(x).unwrap();
    Ok(PowerLevel::from_watts(
        f(10.0).powf((dbm - f(30.0)) / f(10.0)),
    ))
}

/// Convert a gain in dB to a linear power ratio.
pub fn db_to_linear<F: Float>(db: F) -> F {
    let f = |x: f64| F::from(x).unwrap();
    f(10.0).powf(db / f(10.0))
}

/// Mean power gain of the urban NLOS path-loss model at distance `d` meters:
/// `-(35.74 log10(d) + 30.94)` dB. The model domain starts at 1 m.
pub fn pathloss_gain<F: Float>(d: F) -> Result<F, ChannelError> {
    if d.is_nan() || d < F::one() {
        return Err(ChannelError::DistanceOutOfRange(
            d.to_f64().unwrap_or(f64::NAN),
        ));
    }
    let f = |x: f64| F::from(x).unwrap();
    let loss_db = f(35.74) * d.log10() + f(30.94);
    Ok(db_to_linear(-loss_db))
}

/// One block-fading realization: an exponentially distributed power gain
/// with unit mean. The caller keeps it constant for a whole scheduling
/// epoch; redraw timing is owned by the simulation engine.
pub fn sample_fading<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(Exp1)
}

/// Instantaneous SNR `p * g / n` of a link with instantaneous gain `g`.
pub fn snr<F: Float>(power: PowerLevel<F>, gain: F, noise: NoiseVariance<F>) -> Snr<F> {
    Snr::new(power.watts() * gain / noise.watts())
}

/// Shannon capacity `log2(1 + snr)` in bits/s/Hz at unit bandwidth.
pub fn capacity<F: Float>(snr: Snr<F>) -> F {
    (F::one() + snr.value()).log2()
}
