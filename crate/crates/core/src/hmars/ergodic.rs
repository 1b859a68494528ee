//! Ergodic SE of an interference-limited link and the exponential integral it needs.

use std::f64::consts::LN_2;

use crate::error::{invalid, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

// Series below, continued fraction above.
const SERIES_LIMIT: f64 = 1.0;

/// `e^x * E1(x)` for `x > 0`, where `E1(x) = int_1^inf e^(-x t) / t dt`.
///
/// Never overflows: the continued fraction used for large `x` produces the
/// scaled value directly.
pub fn exp_e1_scaled(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(invalid(
            "x",
            format!("exponential integral needs x > 0, got {x}"),
        ));
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    Ok(if x <= SERIES_LIMIT {
        x.exp() * e1_series(x)
    } else {
        scaled_e1_continued_fraction(x)
    })
}

// E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!)
fn e1_series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..200 {
        let k = k as f64;
        term *= -x / k;
        let contribution = term / k;
        sum += contribution;
        if contribution.abs() < sum.abs() * 1e-17 {
            break;
        }
    }
    -EULER_GAMMA - x.ln() - sum
}

// Modified Lentz evaluation of
// e^x E1(x) = 1/(x+1- 1/(x+3- 4/(x+5- 9/(x+7- ...))))
fn scaled_e1_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let i = i as f64;
        let a = -i * i;
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}

/// Means of the signal and interference powers of one NOMA leg.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErgodicTerms {
    pub lambda_x: f64,
    pub lambda_y: f64,
    /// `E[log2(1 + X + Y)]`
    pub a: f64,
    /// `E[log2(1 + Y)]`
    pub b: f64,
}

impl ErgodicTerms {
    /// `E[log2(1 + X / (Y + 1))]` with X and Y independent exponentials of
    /// means `lambda_x` and `lambda_y`.
    pub fn new(lambda_x: f64, lambda_y: f64) -> Result<Self> {
        for (name, v) in [("lambda_x", lambda_x), ("lambda_y", lambda_y)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(name, format!("must be finite and > 0, got {v}")));
            }
        }
        let mut ly = lambda_y;
        if ((lambda_x - ly) / lambda_x).abs() < 1e-6 {
            ly = lambda_x * (1.0 + 1e-4);
        }
        // hypoexponential sum: each term divides by prod_{l != k} (1 - mu_l / mu_k)
        let ex = exp_e1_scaled(1.0 / lambda_x)?;
        let ey = exp_e1_scaled(1.0 / ly)?;
        let a = (ex / (1.0 - ly / lambda_x) + ey / (1.0 - lambda_x / ly)) / LN_2;
        let b = ey / LN_2;
        Ok(Self {
            lambda_x,
            lambda_y: ly,
            a,
            b,
        })
    }

    /// `A - B`, clipped at zero.
    pub fn expected_se(&self) -> f64 {
        (self.a - self.b).max(0.0)
    }

    /// SINR threshold `2^(A - B) - 1`.
    pub fn sinr_threshold(&self) -> f64 {
        (self.expected_se() * LN_2).exp_m1()
    }
}

/// Ergodic SE of `log2(1 + X / (Y + 1))`, see [`ErgodicTerms`].
pub fn expected_noma_se(lambda_x: f64, lambda_y: f64) -> Result<f64> {
    ErgodicTerms::new(lambda_x, lambda_y).map(|t| t.expected_se())
}
