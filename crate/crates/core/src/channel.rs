//! Path loss, mean SNR, Rayleigh power fading and the NOMA power factor.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::ops::OpCounter;

/// Links shorter than this are evaluated at this distance. The path-loss
/// model is not meaningful below it and co-located nodes would otherwise
/// produce infinite SNR.
pub const MIN_LINK_DISTANCE_M: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ChannelParams {
    pub tx_power_dbm: f64,
    /// Noise power, shared by every receiver.
    pub noise_dbm: f64,
    /// Path-loss exponent used by the location-based decision formulas.
    pub alpha: f64,
    /// OMA time share of the multicast link.
    pub beta: f64,
    pub carrier_ghz: f64,
    /// Transmit and receive antenna height.
    pub antenna_height_m: f64,
}

impl Default for ChannelParams {
    fn default() -> Self {
        Self {
            tx_power_dbm: 21.0,
            noise_dbm: -89.0,
            alpha: 4.0,
            beta: 0.5,
            carrier_ghz: 5.9,
            antenna_height_m: 1.5,
        }
    }
}

impl ChannelParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("tx_power_dbm", self.tx_power_dbm),
            ("noise_dbm", self.noise_dbm),
        ] {
            if !v.is_finite() {
                return Err(invalid(name, "must be finite"));
            }
        }
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(invalid("alpha", format!("must be > 0, got {}", self.alpha)));
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(invalid(
                "beta",
                format!("must lie in (0, 1), got {}", self.beta),
            ));
        }
        if !(self.carrier_ghz.is_finite() && self.carrier_ghz > 0.0) {
            return Err(invalid("carrier_ghz", "must be > 0"));
        }
        if !(self.antenna_height_m.is_finite() && self.antenna_height_m > 1.0) {
            return Err(invalid("antenna_height_m", "must be > 1 m"));
        }
        Ok(())
    }

    /// Distance-independent part of the path loss, in dB.
    pub fn path_loss_offset_db(&self) -> f64 {
        let h = (self.antenna_height_m - 1.0).log10();
        7.65 - 17.3 * h - 17.3 * h + 2.7 * self.carrier_ghz.log10()
    }
}

/// `PL = 40 log10(d) + 7.65 - 17.3 log10(h_t - 1) - 17.3 log10(h_r - 1) + 2.7 log10(f_c)`
/// with `d` in meters and `f_c` in GHz.
pub fn path_loss_db(d: f64, params: &ChannelParams) -> Result<f64> {
    if d.is_nan() || d <= 0.0 {
        return Err(invalid("d", format!("distance must be > 0, got {d}")));
    }
    Ok(40.0 * d.log10() + params.path_loss_offset_db())
}

/// Mean received SNR (linear) over a link of length `d`.
pub fn mean_snr_linear(d: f64, params: &ChannelParams) -> Result<f64> {
    let pl = path_loss_db(d, params)?;
    Ok(10f64.powf((params.tx_power_dbm - pl - params.noise_dbm) / 10.0))
}

/// Maps a uniform variate on `(0, 1]` to an Exp(1) variate.
#[inline]
pub fn exp1_from_uniform(u: f64) -> f64 {
    -u.ln()
}

/// Exponentially distributed fading power gain with unit mean.
pub fn sample_fading<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // random() is on [0, 1); flip it onto (0, 1]
    exp1_from_uniform(1.0 - rng.random::<f64>())
}

/// NOMA power factor for the interfering link.
///
/// Chosen so that `log2(1 + factor * x) == 0.5 * log2(1 + x)`, i.e. the
/// interfering receiver keeps its OMA rate.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PowerFactor(f64);

impl PowerFactor {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Power factor `(sqrt(1 + x) - 1) / x` for SNR `x >= 0`.
pub fn power_factor(x: f64) -> PowerFactor {
    debug_assert!(x >= 0.0, "power factor needs a non-negative SNR");
    // rationalised form, exact at x = 0 and free of cancellation for small x
    PowerFactor(1.0 / ((1.0 + x).sqrt() + 1.0))
}

pub(crate) fn power_factor_counted(x: f64, ops: &mut OpCounter) -> PowerFactor {
    ops.add(2);
    ops.mul(1);
    ops.trans(1);
    power_factor(x)
}

/// `d^-alpha` from a squared distance.
pub(crate) fn inv_distance_pow(d_sq: f64, alpha: f64, ops: &mut OpCounter) -> f64 {
    let d_sq = d_sq.max(MIN_LINK_DISTANCE_M * MIN_LINK_DISTANCE_M);
    if alpha == 4.0 {
        ops.mul(2);
        1.0 / (d_sq * d_sq)
    } else {
        ops.trans(1);
        d_sq.powf(-0.5 * alpha)
    }
}

/// Precomputed link budget for one parameter set.
///
/// The simulation path-loss model has an exact 40 dB/decade slope, so the
/// mean SNR over distance `d` is `snr_at_1m * d^-4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    snr_at_1m: f64,
}

impl LinkBudget {
    pub fn new(params: &ChannelParams) -> Self {
        let db = params.tx_power_dbm - params.path_loss_offset_db() - params.noise_dbm;
        Self {
            snr_at_1m: 10f64.powf(db / 10.0),
        }
    }

    /// Mean SNR at one meter, the effective `P / sigma^2` of the d^-4 form.
    pub fn snr_at_1m(&self) -> f64 {
        self.snr_at_1m
    }

    /// Mean SNR from a squared distance.
    #[inline]
    pub fn mean_snr_sq(&self, d_sq: f64, ops: &mut OpCounter) -> f64 {
        let d_sq = d_sq.max(MIN_LINK_DISTANCE_M * MIN_LINK_DISTANCE_M);
        ops.mul(2);
        self.snr_at_1m / (d_sq * d_sq)
    }
}
