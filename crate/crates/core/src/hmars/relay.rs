//! Relay location approximations from reported positions only.

use crate::channel::{inv_distance_pow, power_factor_counted, ChannelParams, LinkBudget};
use crate::error::{Error, Result};
use crate::ops::OpCounter;
use crate::scenario::{distance_sq, Layout, Point2D};

#[inline]
fn counted_distance_sq(p: Point2D, q: Point2D, ops: &mut OpCounter) -> f64 {
    ops.add(3);
    ops.mul(2);
    distance_sq(p, q)
}

/// Index of the member farthest from `point`; lowest index on ties.
pub(crate) fn farthest_member(members: &[Point2D], point: Point2D, ops: &mut OpCounter) -> usize {
    let mut best = (f64::NEG_INFINITY, 0);
    for (k, &p) in members.iter().enumerate() {
        let d = counted_distance_sq(p, point, ops);
        if d > best.0 {
            best = (d, k);
        }
    }
    best.1
}

/// Index of the member nearest to `point`; lowest index on ties.
pub(crate) fn nearest_member(members: &[Point2D], point: Point2D, ops: &mut OpCounter) -> usize {
    let mut best = (f64::INFINITY, 0);
    for (k, &p) in members.iter().enumerate() {
        let d = counted_distance_sq(p, point, ops);
        if d < best.0 {
            best = (d, k);
        }
    }
    best.1
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmaRelay {
    /// Member farthest from the interfering receiver.
    pub anchor_i: usize,
    /// Member farthest from `anchor_i`.
    pub anchor_j: usize,
    /// Midpoint of the two anchors.
    pub target: Point2D,
    pub relay: usize,
}

pub(crate) fn oma_relay_from_anchor(
    layout: &Layout,
    anchor_i: usize,
    ops: &mut OpCounter,
) -> OmaRelay {
    let members = &layout.members;
    let anchor_j = farthest_member(members, members[anchor_i], ops);
    ops.add(2);
    ops.mul(2);
    let target = members[anchor_i].midpoint(members[anchor_j]);
    let relay = nearest_member(members, target, ops);
    OmaRelay {
        anchor_i,
        anchor_j,
        target,
        relay,
    }
}

/// OMA relay: the member nearest the midpoint of a far-apart anchor pair,
/// approximating the minimax (1-center) location of the group.
pub fn select_oma_relay(reported: &Layout, ops: &mut OpCounter) -> Result<OmaRelay> {
    reported.require_group()?;
    let anchor_i = farthest_member(&reported.members, reported.receiver, ops);
    Ok(oma_relay_from_anchor(reported, anchor_i, ops))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NomaRelay {
    pub anchor_i: usize,
    /// Point on the segment from `anchor_i` toward the interfering receiver.
    pub target: Point2D,
    pub relay: usize,
    /// `rho' d_Ti^-alpha + 1/rho`
    pub c1: f64,
    /// `rho' d_TD^-alpha + 1/rho`
    pub c2: f64,
    /// Distance from `anchor_i` to `target`.
    pub offset: f64,
    /// Distance from `anchor_i` to the interfering receiver.
    pub anchor_to_receiver: f64,
    /// Power factor evaluated at unit fading gain.
    pub power_factor: f64,
    /// `d_Ti^-alpha`
    pub path_gain_ti: f64,
    /// `d_TD^-alpha`
    pub path_gain_td: f64,
}

impl NomaRelay {
    /// Relative mismatch of `c2 * offset^-alpha` against
    /// `c1 * (d_iD - offset)^-alpha`; zero when both legs balance.
    pub fn balance_residual(&self, alpha: f64) -> f64 {
        let lhs = self.c2 * self.offset.powf(-alpha);
        let rhs = self.c1 * (self.anchor_to_receiver - self.offset).powf(-alpha);
        (lhs - rhs).abs() / lhs.abs().max(rhs.abs())
    }
}

pub(crate) fn noma_relay_from_anchor(
    layout: &Layout,
    anchor_i: usize,
    params: &ChannelParams,
    ops: &mut OpCounter,
) -> Result<NomaRelay> {
    let members = &layout.members;
    let anchor = members[anchor_i];
    let rho = LinkBudget::new(params).snr_at_1m();
    ops.mul(1);
    let inv_rho = 1.0 / rho;

    let anchor_receiver_sq = counted_distance_sq(anchor, layout.receiver, ops);
    if anchor_receiver_sq == 0.0 {
        return Err(Error::DegenerateGeometry(
            "anchor member coincides with the interfering receiver",
        ));
    }
    let path_td = inv_distance_pow(
        counted_distance_sq(layout.transmitter, layout.receiver, ops),
        params.alpha,
        ops,
    );
    let path_ti = inv_distance_pow(
        counted_distance_sq(layout.transmitter, anchor, ops),
        params.alpha,
        ops,
    );
    ops.mul(1);
    // no CSI: every fading gain taken as 1
    let power_factor = power_factor_counted(rho * path_td, ops).value();

    ops.mul(2);
    ops.add(2);
    let c1 = power_factor * path_ti + inv_rho;
    let c2 = power_factor * path_td + inv_rho;

    ops.trans(2);
    let w1 = c1.powf(-1.0 / params.alpha);
    let w2 = c2.powf(-1.0 / params.alpha);
    ops.add(1);
    ops.mul(1);
    let fraction = w1 / (w1 + w2);

    ops.add(4);
    ops.mul(2);
    let target = Point2D::new(
        anchor.x + (layout.receiver.x - anchor.x) * fraction,
        anchor.y + (layout.receiver.y - anchor.y) * fraction,
    );
    ops.trans(1);
    ops.mul(1);
    let anchor_to_receiver = anchor_receiver_sq.sqrt();
    let offset = fraction * anchor_to_receiver;

    let relay = nearest_member(members, target, ops);
    Ok(NomaRelay {
        anchor_i,
        target,
        relay,
        c1,
        c2,
        offset,
        anchor_to_receiver,
        power_factor,
        path_gain_ti: path_ti,
        path_gain_td: path_td,
    })
}

/// NOMA relay: the member nearest the point where the anchor's leg and the
/// interfering receiver's leg have equal SINR under unit fading.
pub fn select_noma_relay(
    reported: &Layout,
    params: &ChannelParams,
    ops: &mut OpCounter,
) -> Result<NomaRelay> {
    reported.require_group()?;
    let anchor_i = farthest_member(&reported.members, reported.receiver, ops);
    noma_relay_from_anchor(reported, anchor_i, params, ops)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::distance;
    use approx::assert_relative_eq;

    #[test]
    fn hand_geometry() {
        let layout = Layout::new(
            vec![
                Point2D::new(-10.0, 0.0),
                Point2D::new(10.0, 0.0),
                Point2D::new(0.0, 5.0),
            ],
            Point2D::new(300.0, 0.0),
            Point2D::new(150.0, 0.0),
        );
        let r = select_oma_relay(&layout, &mut OpCounter::new()).unwrap();
        assert_eq!((r.anchor_i, r.anchor_j, r.relay), (0, 1, 2));
        assert_eq!(r.target, Point2D::ORIGIN);
    }

    #[test]
    fn pair_ties_to_lower_index() {
        let layout = Layout::new(
            vec![Point2D::new(0.0, 7.0), Point2D::new(0.0, -7.0)],
            Point2D::new(300.0, 0.0),
            Point2D::new(150.0, 0.0),
        );
        let r = select_oma_relay(&layout, &mut OpCounter::new()).unwrap();
        assert_eq!(r.relay, 0);
        assert!([0, 1].contains(&r.anchor_i));
    }

    #[test]
    fn balanced_constants_give_midpoint() {
        // transmitter equidistant from anchor and receiver makes c1 == c2
        let layout = Layout::new(
            vec![Point2D::new(-40.0, 0.0), Point2D::new(0.0, 10.0)],
            Point2D::new(0.0, 200.0),
            Point2D::new(40.0, 0.0),
        );
        let r =
            select_noma_relay(&layout, &ChannelParams::default(), &mut OpCounter::new()).unwrap();
        assert_eq!(r.anchor_i, 0);
        assert_relative_eq!(r.c1, r.c2, max_relative = 1e-12);
        assert_relative_eq!(r.offset, 40.0, max_relative = 1e-12);
        assert_relative_eq!(r.target.x, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn drowned_anchor_pulls_target_onto_it() {
        // transmitter right on top of the anchor: c1 huge
        let layout = Layout::new(
            vec![
                Point2D::new(-40.0, 0.0),
                Point2D::new(0.0, 10.0),
                Point2D::new(20.0, -5.0),
            ],
            Point2D::new(-40.0, 1.0),
            Point2D::new(140.0, 0.0),
        );
        let r =
            select_noma_relay(&layout, &ChannelParams::default(), &mut OpCounter::new()).unwrap();
        assert_eq!(r.anchor_i, 0);
        assert!(r.offset / r.anchor_to_receiver < 0.05, "{}", r.offset);
    }

    #[test]
    fn balance_holds_at_target() {
        let layout = Layout::new(
            vec![
                Point2D::new(-30.0, 12.0),
                Point2D::new(5.0, -20.0),
                Point2D::new(25.0, 25.0),
            ],
            Point2D::new(150.0, 0.0),
            Point2D::new(70.0, 0.0),
        );
        let params = ChannelParams::default();
        let r = select_noma_relay(&layout, &params, &mut OpCounter::new()).unwrap();
        assert!(r.balance_residual(params.alpha) < 1e-9);
        let from_geometry = distance(layout.members[r.anchor_i], r.target);
        assert_relative_eq!(from_geometry, r.offset, max_relative = 1e-12);
    }

    #[test]
    fn anchor_on_receiver_is_an_error() {
        let layout = Layout::new(
            vec![Point2D::new(60.0, 0.0), Point2D::new(60.0, 0.0)],
            Point2D::new(150.0, 0.0),
            Point2D::new(60.0, 0.0),
        );
        assert!(
            select_noma_relay(&layout, &ChannelParams::default(), &mut OpCounter::new()).is_err()
        );
    }
}
