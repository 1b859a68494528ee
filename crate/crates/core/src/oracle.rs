//! Independent reference computations used to check the closed forms.
//!
//! Nothing here shares code with the production paths it checks: integrals
//! are done by adaptive quadrature, outages by sampling, relay optima by
//! a plain rescan built on the public per-link formulas.

use std::f64::consts::LN_2;

use rand::Rng;

use crate::channel::{mean_snr_linear, power_factor, ChannelParams, MIN_LINK_DISTANCE_M};
use crate::links::{
    se_noma_interferer, se_noma_member, se_noma_vd, se_oma_interferer, se_oma_member, FadingDraw,
};
use crate::scenario::{distance, Layout, Point2D};

// Gauss-Kronrod 7/15 nodes on [-1, 1], positive half.
const XGK: [f64; 8] = [
    0.9914553711208126,
    0.9491079123427585,
    0.8648644233597691,
    0.7415311855993945,
    0.5860872354676911,
    0.4058451513773972,
    0.20778495500789848,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224,
    0.06309209262997856,
    0.10479001032225019,
    0.14065325971552592,
    0.1690047266392679,
    0.19035057806478542,
    0.20443294007529889,
    0.20948214108472782,
];
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, centre).
const WG: [f64; 4] = [
    0.1294849661688697,
    0.27970539148927664,
    0.3818300505051189,
    0.4179591836734694,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for k in 0..7 {
        let dx = h * XGK[k];
        let pair = f(c - dx) + f(c + dx);
        kronrod += WGK[k] * pair;
        if k % 2 == 1 {
            gauss += WG[k / 2] * pair;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Adaptive Gauss-Kronrod integral of `f` over `[a, b]`, refined until the
/// total error estimate is below `rel_tol` times the integral.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> f64 {
    let first = gk15(&f, a, b);
    let mut intervals = vec![(a, b, first)];
    let (mut total, mut error) = first;
    for _ in 0..5_000 {
        if error <= rel_tol * total.abs() || error < 1e-300 {
            break;
        }
        let worst = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2 .1.total_cmp(&y.1 .2 .1))
            .map(|(k, _)| k)
            .unwrap();
        let (lo, hi, old) = intervals.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let left = gk15(&f, lo, mid);
        let right = gk15(&f, mid, hi);
        total += left.0 + right.0 - old.0;
        error += left.1 + right.1 - old.1;
        intervals.push((lo, mid, left));
        intervals.push((mid, hi, right));
    }
    // re-sum to shed the drift of the running total
    intervals.iter().map(|i| i.2 .0).sum()
}

/// Integral of `f` over `[a, inf)` through `t = a + u / (1 - u)`.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, a: f64, rel_tol: f64) -> f64 {
    integrate(
        |u| {
            if u >= 1.0 {
                return 0.0;
            }
            let s = 1.0 - u;
            let v = f(a + u / s) / (s * s);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        rel_tol,
    )
}

/// `e^x E1(x) = int_0^inf e^(-u) / (x + u) du`.
pub fn exp_e1_scaled_quadrature(x: f64) -> f64 {
    // split at x so the near-singular bump for small x gets its own interval
    let head = integrate(|u| (-u).exp() / (x + u), 0.0, x.min(1.0), 1e-14);
    let tail = integrate_to_infinity(|u| (-u).exp() / (x + u), x.min(1.0), 1e-14);
    head + tail
}

/// `E[log2(1 + X / (Y + 1))]` for exponentials of means `lambda_x`,
/// `lambda_y`, from the tail integral `int_0^inf P(X / (Y + 1) > t) / (1 + t) dt`.
pub fn ergodic_se_quadrature(lambda_x: f64, lambda_y: f64) -> f64 {
    let tail = |t: f64| (-t / lambda_x).exp() * lambda_x / (lambda_x + lambda_y * t) / (1.0 + t);
    let knee = lambda_x.max(1.0);
    (integrate(tail, 0.0, knee, 1e-13) + integrate_to_infinity(tail, knee, 1e-13)) / LN_2
}

/// Fraction of draws with `X / (Y + 1) < gamma`.
pub fn noma_outage_mc<R: Rng + ?Sized>(
    lambda_x: f64,
    lambda_y: f64,
    gamma: f64,
    draws: u64,
    rng: &mut R,
) -> f64 {
    let mut hits = 0u64;
    for _ in 0..draws {
        let x = lambda_x * -(1.0 - rng.random::<f64>()).ln();
        let y = lambda_y * -(1.0 - rng.random::<f64>()).ln();
        hits += u64::from(x / (y + 1.0) < gamma);
    }
    hits as f64 / draws as f64
}

/// Fraction of draws with `X < gamma`.
pub fn oma_outage_mc<R: Rng + ?Sized>(lambda_x: f64, gamma: f64, draws: u64, rng: &mut R) -> f64 {
    let mut hits = 0u64;
    for _ in 0..draws {
        let x = lambda_x * -(1.0 - rng.random::<f64>()).ln();
        hits += u64::from(x < gamma);
    }
    hits as f64 / draws as f64
}

/// Minimax radius of `points` searched on a square grid of spacing `step`
/// covering their bounding box. Never below the true 1-center radius.
pub fn grid_one_center_radius(points: &[Point2D], step: f64) -> f64 {
    let (mut lo, mut hi) = (points[0], points[0]);
    for p in points {
        lo = Point2D::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point2D::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let nx = ((hi.x - lo.x) / step).ceil() as usize + 1;
    let ny = ((hi.y - lo.y) / step).ceil() as usize + 1;
    let mut best = f64::INFINITY;
    for ix in 0..nx {
        for iy in 0..ny {
            let c = Point2D::new(lo.x + ix as f64 * step, lo.y + iy as f64 * step);
            let r = points.iter().map(|&p| distance(c, p)).fold(0.0, f64::max);
            best = best.min(r);
        }
    }
    best
}

fn snr(p: Point2D, q: Point2D, params: &ChannelParams) -> f64 {
    mean_snr_linear(distance(p, q).max(MIN_LINK_DISTANCE_M), params)
        .expect("floored distance is positive")
}

/// Best OMA relay and objective by direct rescan. Ties go to the lower index.
pub fn rescan_oma(layout: &Layout, fading: &FadingDraw, params: &ChannelParams) -> (usize, f64) {
    let eta_2 = se_oma_interferer(
        fading.transmitter_receiver(),
        snr(layout.transmitter, layout.receiver, params),
        params.beta,
    );
    let mut best = (0, f64::NEG_INFINITY);
    for r in 0..layout.len() {
        let worst = (0..layout.len())
            .filter(|&n| n != r)
            .map(|n| {
                se_oma_member(
                    fading.relay_member(r, n),
                    snr(layout.members[r], layout.members[n], params),
                    params.beta,
                )
            })
            .fold(f64::INFINITY, f64::min);
        if worst + eta_2 > best.1 {
            best = (r, worst + eta_2);
        }
    }
    best
}

/// Best NOMA relay and objective by direct rescan. Ties go to the lower index.
pub fn rescan_noma(layout: &Layout, fading: &FadingDraw, params: &ChannelParams) -> (usize, f64) {
    let snr_td = snr(layout.transmitter, layout.receiver, params);
    let g_td = fading.transmitter_receiver();
    let rho = power_factor(g_td * snr_td).value();
    let eta_2 = se_noma_interferer(g_td, snr_td, rho);
    let mut best = (0, f64::NEG_INFINITY);
    for r in 0..layout.len() {
        let relay = layout.members[r];
        let to_receiver = se_noma_vd(
            fading.relay_receiver(r),
            snr(relay, layout.receiver, params),
            g_td,
            snr_td,
            rho,
        );
        let worst = (0..layout.len())
            .filter(|&n| n != r)
            .map(|n| {
                se_noma_member(
                    fading.relay_member(r, n),
                    snr(relay, layout.members[n], params),
                    fading.transmitter_member(n),
                    snr(layout.transmitter, layout.members[n], params),
                    rho,
                )
            })
            .fold(to_receiver, f64::min);
        if worst + eta_2 > best.1 {
            best = (r, worst + eta_2);
        }
    }
    best
}

/// Least-squares line `y = a + b x` and its coefficient of determination.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let syy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    (intercept, slope, r2)
}

/// Growth order of `cost(n)` from the slope of log increments over
/// successive `n`, which ignores any constant overhead. Returns the fitted
/// order and the R² of the log-log fit.
pub fn growth_order(ns: &[f64], costs: &[f64]) -> (f64, f64) {
    let mids: Vec<f64> = ns.windows(2).map(|w| (0.5 * (w[0] + w[1])).ln()).collect();
    let slopes: Vec<f64> = ns
        .windows(2)
        .zip(costs.windows(2))
        .map(|(n, c)| ((c[1] - c[0]) / (n[1] - n[0])).ln())
        .collect();
    let (_, slope, r2) = linear_fit(&mids, &slopes);
    // d cost / d n ~ n^(k - 1)
    (slope + 1.0, r2)
}
