//! Location-based hybrid multiple-access and relay selection (H-MARS).
//!
//! The decision uses reported positions only, no channel state:
//!
//! 1. anchor `i` is the member farthest from the interfering receiver, anchor
//!    `j` the member farthest from `i`;
//! 2. the OMA relay is the member nearest the midpoint of `i` and `j`;
//! 3. the NOMA relay is the member nearest the point on segment `i -> D`
//!    where both NOMA legs see the same unit-gain SINR;
//! 4. a common SINR threshold comes from the ergodic SE of the NOMA legs,
//!    and NOMA is activated when its worst-leg success probability is at
//!    least the OMA leg's.
//!
//! Every step is a single pass over the group, so the cost is linear in the
//! group size.

mod ergodic;
mod outage;
mod relay;

pub use ergodic::{exp_e1_scaled, expected_noma_se, ErgodicTerms};
pub use outage::{noma_outage, noma_success, oma_outage, oma_success, OutageConvention};
pub use relay::{select_noma_relay, select_oma_relay, NomaRelay, OmaRelay};

use crate::channel::{inv_distance_pow, ChannelParams, LinkBudget};
use crate::error::Result;
use crate::links::Scheme;
use crate::ops::OpCounter;
use crate::scenario::{distance_sq, Layout, Point2D};

#[inline]
fn counted_distance_sq(p: Point2D, q: Point2D, ops: &mut OpCounter) -> f64 {
    ops.add(3);
    ops.mul(2);
    distance_sq(p, q)
}

// Arithmetic performed by `ErgodicTerms::new` plus the threshold mapping.
fn count_ergodic(ops: &mut OpCounter) {
    ops.mul(10);
    ops.add(6);
    ops.trans(3);
}

/// SINR thresholds of the two NOMA legs and their minimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaThreshold {
    pub member_leg: ErgodicTerms,
    pub receiver_leg: ErgodicTerms,
    pub gamma_i: f64,
    pub gamma_d: f64,
    pub gamma: f64,
}

/// Ergodic-SE based SINR threshold for the NOMA relay picked by
/// [`select_noma_relay`].
pub fn gamma_threshold(
    reported: &Layout,
    noma: &NomaRelay,
    params: &ChannelParams,
    ops: &mut OpCounter,
) -> Result<GammaThreshold> {
    let rho = LinkBudget::new(params).snr_at_1m();
    let relay = reported.members[noma.relay];
    let anchor = reported.members[noma.anchor_i];

    let to_anchor = inv_distance_pow(counted_distance_sq(relay, anchor, ops), params.alpha, ops);
    let to_receiver = inv_distance_pow(
        counted_distance_sq(relay, reported.receiver, ops),
        params.alpha,
        ops,
    );
    ops.mul(6);
    let member_leg =
        ErgodicTerms::new(rho * to_anchor, noma.power_factor * rho * noma.path_gain_ti)?;
    let receiver_leg = ErgodicTerms::new(
        rho * to_receiver,
        noma.power_factor * rho * noma.path_gain_td,
    )?;
    count_ergodic(ops);
    count_ergodic(ops);

    let gamma_i = member_leg.sinr_threshold();
    let gamma_d = receiver_leg.sinr_threshold();
    Ok(GammaThreshold {
        member_leg,
        receiver_leg,
        gamma_i,
        gamma_d,
        gamma: gamma_i.min(gamma_d),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HmarsDecision {
    pub scheme: Scheme,
    pub relay_oma: usize,
    pub relay_noma: usize,
    pub anchor_i: usize,
    pub anchor_j: usize,
    pub target_point_oma: Point2D,
    pub target_point_noma: Point2D,
    pub c1: f64,
    pub c2: f64,
    pub gamma: f64,
    pub threshold: GammaThreshold,
    /// Worst NOMA-leg success probability.
    pub lhs: f64,
    /// OMA-leg success probability.
    pub rhs: f64,
}

impl HmarsDecision {
    /// Relay attached to the chosen scheme.
    pub fn relay(&self) -> usize {
        match self.scheme {
            Scheme::Oma => self.relay_oma,
            Scheme::Noma => self.relay_noma,
        }
    }
}

/// Runs the full location-based decision on reported positions.
pub fn decide(
    reported: &Layout,
    params: &ChannelParams,
    convention: OutageConvention,
    ops: &mut OpCounter,
) -> Result<HmarsDecision> {
    reported.require_group()?;
    let members = &reported.members;
    let rho = LinkBudget::new(params).snr_at_1m();

    let anchor_i = relay::farthest_member(members, reported.receiver, ops);
    let oma = relay::oma_relay_from_anchor(reported, anchor_i, ops);
    let noma = relay::noma_relay_from_anchor(reported, anchor_i, params, ops)?;
    let threshold = gamma_threshold(reported, &noma, params, ops)?;
    let gamma = threshold.gamma;

    // success = share * tail: 4 multiplications, 1 addition, 1 exp per leg
    ops.mul(8);
    ops.add(2);
    ops.trans(2);
    let member = &threshold.member_leg;
    let receiver = &threshold.receiver_leg;
    let lhs = noma_success(member.lambda_x, member.lambda_y, gamma, convention).min(noma_success(
        receiver.lambda_x,
        receiver.lambda_y,
        gamma,
        convention,
    ));

    let oma_path = inv_distance_pow(
        counted_distance_sq(members[oma.relay], members[anchor_i], ops),
        params.alpha,
        ops,
    );
    ops.mul(2);
    ops.trans(1);
    let rhs = oma_success(rho * oma_path, gamma, convention);

    let scheme = if lhs >= rhs {
        Scheme::Noma
    } else {
        Scheme::Oma
    };
    Ok(HmarsDecision {
        scheme,
        relay_oma: oma.relay,
        relay_noma: noma.relay,
        anchor_i,
        anchor_j: oma.anchor_j,
        target_point_oma: oma.target,
        target_point_noma: noma.target,
        c1: noma.c1,
        c2: noma.c2,
        gamma,
        threshold,
        lhs,
        rhs,
    })
}
