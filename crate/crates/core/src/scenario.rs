//! Random topologies for a multicast group and the interfering transmitter/receiver pair.
//!
//! The group lives on a disk centred at the origin. Members are drawn from a
//! homogeneous spatial Poisson process conditioned on having at least two
//! points. The interferer pair sits at fixed polar coordinates. Location
//! estimation error only ever touches the *reported* copy of the layout; the
//! true layout is what the radio channel sees.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// A position in the plane, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub const ORIGIN: Point2D = Point2D { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn from_polar(radius: f64, azimuth: f64) -> Self {
        Self::new(radius * azimuth.cos(), radius * azimuth.sin())
    }

    pub fn midpoint(self, other: Point2D) -> Point2D {
        Point2D::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Euclidean distance.
pub fn distance(p: Point2D, q: Point2D) -> f64 {
    (p.x - q.x).hypot(p.y - q.y)
}

/// Squared Euclidean distance.
pub fn distance_sq(p: Point2D, q: Point2D) -> f64 {
    let dx = p.x - q.x;
    let dy = p.y - q.y;
    dx * dx + dy * dy
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScenarioParams {
    /// Group disk radius R in meters.
    pub radius: f64,
    /// Members per square meter.
    pub node_density: f64,
    /// Distance of the interfering transmitter from the group center.
    #[serde(rename = "d0T")]
    pub d0_t: f64,
    /// Distance of the interfering receiver from the group center.
    #[serde(rename = "d0D")]
    pub d0_d: f64,
    #[serde(rename = "azimuth_T")]
    pub azimuth_t: f64,
    #[serde(rename = "azimuth_D")]
    pub azimuth_d: f64,
    /// Maximum location-error radius in meters.
    pub r_e: f64,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        Self {
            radius: 50.0,
            node_density: 0.0025,
            d0_t: 150.0,
            d0_d: 60.0,
            azimuth_t: 0.0,
            azimuth_d: 0.0,
            r_e: 0.0,
        }
    }
}

impl ScenarioParams {
    /// Expected group size, `density * pi * R^2`.
    pub fn mean_group_size(&self) -> f64 {
        self.node_density * PI * self.radius * self.radius
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(invalid(
                "radius",
                format!("must be finite and > 0, got {}", self.radius),
            ));
        }
        if !(self.node_density.is_finite() && self.node_density > 0.0) {
            return Err(invalid(
                "node_density",
                format!("must be finite and > 0, got {}", self.node_density),
            ));
        }
        for (name, v) in [("d0T", self.d0_t), ("d0D", self.d0_d), ("r_e", self.r_e)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(invalid(name, format!("must be finite and >= 0, got {v}")));
            }
        }
        for (name, v) in [("azimuth_T", self.azimuth_t), ("azimuth_D", self.azimuth_d)] {
            if !v.is_finite() {
                return Err(invalid(name, "must be finite"));
            }
        }
        place_interferers(self).map(|_| ())
    }
}

/// Positions of every node that matters to one decision.
#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    pub members: Vec<Point2D>,
    /// Interfering transmitter.
    pub transmitter: Point2D,
    /// Interfering receiver.
    pub receiver: Point2D,
}

impl Layout {
    pub fn new(members: Vec<Point2D>, transmitter: Point2D, receiver: Point2D) -> Self {
        Self {
            members,
            transmitter,
            receiver,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub(crate) fn require_group(&self) -> Result<()> {
        if self.members.len() < 2 {
            return Err(Error::GroupTooSmall(self.members.len()));
        }
        Ok(())
    }
}

/// True positions (drive the channel) and reported positions (drive the decision).
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub truth: Layout,
    pub reported: Layout,
}

impl Scenario {
    /// A scenario whose reported positions equal the true ones.
    pub fn exact(truth: Layout) -> Self {
        Self {
            reported: truth.clone(),
            truth,
        }
    }
}

// Below this mean the rejection loop gets slow, so the truncated Poisson law
// is inverted directly.
const DIRECT_TRUNCATION_BELOW: f64 = 4.0;

/// Draws a Poisson group size conditioned on `N >= 2`.
fn sample_group_size<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> usize {
    if mean >= DIRECT_TRUNCATION_BELOW {
        let poisson = Poisson::new(mean).expect("positive finite mean");
        loop {
            let n = poisson.sample(rng) as usize;
            if n >= 2 {
                return n;
            }
        }
    }
    // Weights relative to P(N = 2): w_k = mean^(k-2) * 2 / k!.
    let mut weights = Vec::with_capacity(32);
    let mut w = 1.0;
    let mut k = 2usize;
    loop {
        weights.push(w);
        k += 1;
        w *= mean / k as f64;
        if w < 1e-17 * weights[0] {
            break;
        }
    }
    let total: f64 = weights.iter().sum();
    let mut u = rng.random::<f64>() * total;
    for (offset, w) in weights.iter().enumerate() {
        if u < *w {
            return 2 + offset;
        }
        u -= w;
    }
    2 + weights.len() - 1
}

/// Samples group member positions uniformly on the disk of radius `R`.
pub fn sample_group<R: Rng + ?Sized>(params: &ScenarioParams, rng: &mut R) -> Vec<Point2D> {
    let n = sample_group_size(params.mean_group_size(), rng);
    (0..n)
        .map(|_| {
            let r = params.radius * rng.random::<f64>().sqrt();
            let theta = TAU * rng.random::<f64>();
            Point2D::from_polar(r, theta)
        })
        .collect()
}

/// Places the interfering transmitter and receiver from their polar coordinates.
pub fn place_interferers(params: &ScenarioParams) -> Result<(Point2D, Point2D)> {
    let t = Point2D::from_polar(params.d0_t, params.azimuth_t);
    let d = Point2D::from_polar(params.d0_d, params.azimuth_d);
    if distance(t, d) == 0.0 {
        return Err(Error::CoincidentInterferers);
    }
    Ok((t, d))
}

fn jitter<R: Rng + ?Sized>(p: Point2D, r_e: f64, rng: &mut R) -> Point2D {
    let theta = TAU * rng.random::<f64>();
    let r = r_e * rng.random::<f64>();
    Point2D::new(p.x + r * theta.cos(), p.y + r * theta.sin())
}

/// Returns a copy of `scenario` whose reported positions are the true positions
/// shifted by a random offset of uniform angle and radius uniform on `[0, r_e]`.
pub fn perturb_locations<R: Rng + ?Sized>(
    scenario: &Scenario,
    r_e: f64,
    rng: &mut R,
) -> Result<Scenario> {
    if !(r_e.is_finite() && r_e >= 0.0) {
        return Err(invalid(
            "r_e",
            format!("must be finite and >= 0, got {r_e}"),
        ));
    }
    let truth = &scenario.truth;
    let members = truth.members.iter().map(|&p| jitter(p, r_e, rng)).collect();
    let transmitter = jitter(truth.transmitter, r_e, rng);
    let receiver = jitter(truth.receiver, r_e, rng);
    Ok(Scenario {
        truth: truth.clone(),
        reported: Layout::new(members, transmitter, receiver),
    })
}

/// Draws a full scenario: group, interferers, and location errors.
pub fn sample_scenario<R: Rng + ?Sized>(params: &ScenarioParams, rng: &mut R) -> Result<Scenario> {
    let members = sample_group(params, rng);
    let (t, d) = place_interferers(params)?;
    perturb_locations(
        &Scenario::exact(Layout::new(members, t, d)),
        params.r_e,
        rng,
    )
}
