//! Self-check of the closed forms against the independent oracles.

use std::f64::consts::{LN_2, PI};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::ExperimentConfig;
use crate::channel::power_factor;
use crate::error::Result;
use crate::hmars::{
    exp_e1_scaled, expected_noma_se, noma_outage, oma_outage, select_noma_relay, select_oma_relay,
    OutageConvention,
};
use crate::links::{bfs_select_noma, bfs_select_oma, FadingDraw};
use crate::ops::OpCounter;
use crate::oracle;
use crate::scenario::{distance, Layout, Point2D};

/// One named comparison: `measured` must not exceed `tolerance`.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn at_most(name: &'static str, measured: f64, tolerance: f64) -> Self {
        Self {
            name,
            measured,
            tolerance,
            passed: measured <= tolerance,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {:<28} measured {:.3e} (limit {:.3e})",
            self.name, self.measured, self.tolerance
        )
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Sample sizes of the randomised checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidationSizes {
    pub power_factor_points: usize,
    pub ergodic_pairs: usize,
    pub outage_triples: usize,
    pub outage_draws: u64,
    pub bfs_instances: usize,
    pub one_center_instances: usize,
    pub balance_geometries: usize,
}

impl Default for ValidationSizes {
    fn default() -> Self {
        Self {
            power_factor_points: 1000,
            ergodic_pairs: 20,
            outage_triples: 10,
            outage_draws: 1_000_000,
            bfs_instances: 100,
            one_center_instances: 20,
            balance_geometries: 100,
        }
    }
}

pub const E1_POINTS: [f64; 7] = [0.01, 0.1, 0.5, 1.0, 2.0, 10.0, 100.0];

fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (lo.ln() + rng.random::<f64>() * (hi.ln() - lo.ln())).exp()
}

fn in_disk<R: Rng>(rng: &mut R, radius: f64) -> Point2D {
    Point2D::from_polar(
        radius * rng.random::<f64>().sqrt(),
        2.0 * PI * rng.random::<f64>(),
    )
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Largest `|0.5 log2(1 + x) - log2(1 + pf(x) x)|` over log-uniform `x`.
pub fn power_factor_identity_error<R: Rng>(points: usize, rng: &mut R) -> f64 {
    (0..points)
        .map(|_| {
            let x = log_uniform(rng, 1e-6, 1e6);
            (0.5 * x.ln_1p() / LN_2 - (power_factor(x).value() * x).ln_1p() / LN_2).abs()
        })
        .fold(0.0, f64::max)
}

/// Largest relative error of the scaled exponential integral against quadrature.
pub fn e1_error() -> Result<f64> {
    E1_POINTS.iter().try_fold(0.0f64, |acc, &x| {
        Ok(acc.max(relative(
            exp_e1_scaled(x)?,
            oracle::exp_e1_scaled_quadrature(x),
        )))
    })
}

/// Largest absolute ergodic-SE error against quadrature over random pairs.
pub fn ergodic_pairs_error<R: Rng>(pairs: usize, rng: &mut R) -> Result<f64> {
    (0..pairs).try_fold(0.0f64, |acc, _| {
        let lx = log_uniform(rng, 1e-2, 1e3);
        let ly = log_uniform(rng, 1e-2, 1e3);
        Ok(acc.max((expected_noma_se(lx, ly)? - oracle::ergodic_se_quadrature(lx, ly)).abs()))
    })
}

/// Worst deviation of the rederived outages from sampling, in binomial sigmas.
pub fn outage_sigma<R: Rng>(triples: usize, draws: u64, rng: &mut R) -> f64 {
    let convention = OutageConvention::Rederived;
    let sigmas = |p: f64, q: f64| {
        let sd = (p * (1.0 - p) / draws as f64)
            .sqrt()
            .max(1.0 / draws as f64);
        (p - q).abs() / sd
    };
    let mut worst = 0.0f64;
    for _ in 0..triples {
        let lx = log_uniform(rng, 0.1, 10.0);
        let ly = log_uniform(rng, 0.1, 10.0);
        let gamma = log_uniform(rng, 0.05, 5.0);
        let noma = noma_outage(lx, ly, gamma, convention);
        worst = worst.max(sigmas(
            noma,
            oracle::noma_outage_mc(lx, ly, gamma, draws, rng),
        ));
        let oma = oma_outage(lx, gamma, convention);
        worst = worst.max(sigmas(oma, oracle::oma_outage_mc(lx, gamma, draws, rng)));
    }
    worst
}

fn random_layout<R: Rng>(rng: &mut R, n: usize, radius: f64) -> Layout {
    let members = (0..n).map(|_| in_disk(rng, radius)).collect();
    let transmitter = Point2D::from_polar(
        radius * rng.random_range(0.2..4.0),
        2.0 * PI * rng.random::<f64>(),
    );
    let receiver = Point2D::from_polar(
        radius * rng.random_range(0.2..4.0),
        2.0 * PI * rng.random::<f64>(),
    );
    Layout::new(members, transmitter, receiver)
}

/// Largest amount by which an exhaustive rescan beats the brute-force
/// search, over random groups of 2 to 10 members. Zero when never beaten.
pub fn bfs_rescan_gap<R: Rng>(
    instances: usize,
    config: &ExperimentConfig,
    rng: &mut R,
) -> Result<f64> {
    let params = &config.channel;
    let mut gap = 0.0f64;
    for _ in 0..instances {
        let n = rng.random_range(2..=10);
        let layout = random_layout(rng, n, config.scenario.radius);
        let fading = FadingDraw::sample(n, rng);
        let oma = bfs_select_oma(&layout, &fading, params, &mut OpCounter::new())?;
        let noma = bfs_select_noma(&layout, &fading, params, &mut OpCounter::new())?;
        let (_, oma_best) = oracle::rescan_oma(&layout, &fading, params);
        let (_, noma_best) = oracle::rescan_noma(&layout, &fading, params);
        gap = gap.max((oma_best - oma.eta_total) / oma.eta_total.abs().max(1.0));
        gap = gap.max((noma_best - noma.eta_total) / noma.eta_total.abs().max(1.0));
    }
    Ok(gap)
}

/// Worst ratio of the midpoint's covering radius to the grid 1-center
/// radius on random 20-member groups, together with whether the covering
/// radius always reached half the anchor distance.
pub fn one_center_ratio<R: Rng>(instances: usize, radius: f64, rng: &mut R) -> Result<(f64, bool)> {
    let mut worst = 0.0f64;
    let mut above_half = true;
    for _ in 0..instances {
        let layout = random_layout(rng, 20, radius);
        let oma = select_oma_relay(&layout, &mut OpCounter::new())?;
        let members = &layout.members;
        let cover = members
            .iter()
            .map(|&p| distance(p, oma.target))
            .fold(0.0, f64::max);
        let half = 0.5 * distance(members[oma.anchor_i], members[oma.anchor_j]);
        above_half &= cover >= half - 1e-9;
        worst = worst.max(cover / oracle::grid_one_center_radius(members, 0.5));
    }
    Ok((worst, above_half))
}

/// Largest relative residual of the NOMA balance equation at the computed target.
pub fn balance_residual<R: Rng>(
    geometries: usize,
    config: &ExperimentConfig,
    rng: &mut R,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..geometries {
        let n = rng.random_range(2..=30);
        let layout = random_layout(rng, n, config.scenario.radius);
        if layout.transmitter == layout.receiver {
            continue;
        }
        let noma = select_noma_relay(&layout, &config.channel, &mut OpCounter::new())?;
        worst = worst.max(noma.balance_residual(config.channel.alpha));
    }
    Ok(worst)
}

/// Upper bound of the midpoint covering radius over the 1-center radius.
pub const ONE_CENTER_FACTOR: f64 = 1.732_050_807_568_877_2;

/// Runs every check with the default sample sizes.
pub fn validate(config: &ExperimentConfig) -> Result<ValidationReport> {
    validate_with(config, ValidationSizes::default())
}

pub fn validate_with(
    config: &ExperimentConfig,
    sizes: ValidationSizes,
) -> Result<ValidationReport> {
    let stream = |k: u64| {
        let mut rng = ChaCha8Rng::seed_from_u64(config.master_seed);
        rng.set_stream(u64::MAX - k);
        rng
    };
    let mut checks = Vec::new();

    checks.push(Check::at_most(
        "power_factor_identity",
        power_factor_identity_error(sizes.power_factor_points, &mut stream(0)),
        1e-12,
    ));

    checks.push(Check::at_most("e1_vs_quadrature", e1_error()?, 1e-10));
    let far = exp_e1_scaled(1e6)?;
    checks.push(Check::at_most(
        "e1_large_argument",
        relative(far, (1.0 - 1e-6) / 1e6),
        1e-10,
    ));

    let pair = expected_noma_se(1.0, 2.0)?;
    checks.push(Check::at_most(
        "ergodic_reference_pair",
        (pair - 0.4711).abs(),
        1e-3,
    ));
    checks.push(Check::at_most(
        "ergodic_pair_vs_quadrature",
        (pair - oracle::ergodic_se_quadrature(1.0, 2.0)).abs(),
        1e-3,
    ));
    checks.push(Check::at_most(
        "ergodic_random_pairs",
        ergodic_pairs_error(sizes.ergodic_pairs, &mut stream(1))?,
        1e-3,
    ));
    let degenerate = (1..=3)
        .map(|k| {
            let l = 10f64.powi(k - 1);
            Ok((expected_noma_se(l, l)? - oracle::ergodic_se_quadrature(l, l)).abs())
        })
        .try_fold(0.0f64, |acc, e: Result<f64>| {
            Ok::<_, crate::Error>(acc.max(e?))
        })?;
    checks.push(Check::at_most("ergodic_equal_means", degenerate, 1e-3));

    checks.push(Check::at_most(
        "outage_vs_sampling_sigmas",
        outage_sigma(sizes.outage_triples, sizes.outage_draws, &mut stream(2)),
        3.0,
    ));

    checks.push(Check::at_most(
        "bfs_rescan_gap",
        bfs_rescan_gap(sizes.bfs_instances, config, &mut stream(3))?,
        1e-12,
    ));

    let (ratio, above_half) = one_center_ratio(
        sizes.one_center_instances,
        config.scenario.radius,
        &mut stream(4),
    )?;
    checks.push(Check::at_most("one_center_ratio", ratio, ONE_CENTER_FACTOR));
    checks.push(Check::at_most(
        "one_center_half_anchor",
        if above_half { 0.0 } else { 1.0 },
        0.0,
    ));

    checks.push(Check::at_most(
        "noma_balance_residual",
        balance_residual(sizes.balance_geometries, config, &mut stream(5))?,
        1e-9,
    ));

    Ok(ValidationReport { checks })
}
