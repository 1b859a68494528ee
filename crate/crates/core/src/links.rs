//! Per-link spectral efficiencies and the brute-force relay search.
//!
//! The brute-force search sees the realised fading of every link, so it is
//! the per-scheme optimum that the location-based decision is measured
//! against. Each candidate relay is scored by its worst receiving link plus
//! the interfering pair's own rate; the relay never counts itself as a
//! receiver.

use std::f64::consts::LN_2;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{power_factor_counted, sample_fading, ChannelParams, LinkBudget};
use crate::error::{invalid, Result};
use crate::ops::OpCounter;
use crate::scenario::{distance_sq, Layout};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Scheme {
    Oma,
    Noma,
}

/// One realisation of every fading power gain a trial can touch.
#[derive(Debug, Clone, PartialEq)]
pub struct FadingDraw {
    n: usize,
    /// Row-major `[relay][member]`; the diagonal is drawn but never used.
    relay_member: Vec<f64>,
    relay_receiver: Vec<f64>,
    transmitter_member: Vec<f64>,
    transmitter_receiver: f64,
}

impl FadingDraw {
    pub fn sample<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let relay_member = (0..n * n).map(|_| sample_fading(rng)).collect();
        let relay_receiver = (0..n).map(|_| sample_fading(rng)).collect();
        let transmitter_member = (0..n).map(|_| sample_fading(rng)).collect();
        let transmitter_receiver = sample_fading(rng);
        Self {
            n,
            relay_member,
            relay_receiver,
            transmitter_member,
            transmitter_receiver,
        }
    }

    /// Every gain set to `g`.
    pub fn constant(n: usize, g: f64) -> Self {
        Self {
            n,
            relay_member: vec![g; n * n],
            relay_receiver: vec![g; n],
            transmitter_member: vec![g; n],
            transmitter_receiver: g,
        }
    }

    pub fn from_parts(
        relay_member: Vec<Vec<f64>>,
        relay_receiver: Vec<f64>,
        transmitter_member: Vec<f64>,
        transmitter_receiver: f64,
    ) -> Result<Self> {
        let n = relay_member.len();
        if relay_member.iter().any(|row| row.len() != n)
            || relay_receiver.len() != n
            || transmitter_member.len() != n
        {
            return Err(invalid(
                "fading",
                "gain tables must all match the group size",
            ));
        }
        let draw = Self {
            n,
            relay_member: relay_member.into_iter().flatten().collect(),
            relay_receiver,
            transmitter_member,
            transmitter_receiver,
        };
        let all_positive = draw
            .relay_member
            .iter()
            .chain(&draw.relay_receiver)
            .chain(&draw.transmitter_member)
            .chain(std::iter::once(&draw.transmitter_receiver))
            .all(|g| *g > 0.0 && g.is_finite());
        if !all_positive {
            return Err(invalid("fading", "gains must be positive and finite"));
        }
        Ok(draw)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn relay_member(&self, relay: usize, member: usize) -> f64 {
        self.relay_member[relay * self.n + member]
    }

    pub fn set_relay_member(&mut self, relay: usize, member: usize, g: f64) {
        self.relay_member[relay * self.n + member] = g;
    }

    #[inline]
    pub fn relay_receiver(&self, relay: usize) -> f64 {
        self.relay_receiver[relay]
    }

    #[inline]
    pub fn transmitter_member(&self, member: usize) -> f64 {
        self.transmitter_member[member]
    }

    #[inline]
    pub fn transmitter_receiver(&self) -> f64 {
        self.transmitter_receiver
    }
}

/// Which receiver limits the multicast leg.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WorstLink {
    Member(usize),
    /// The interfering pair's receiver, decoding the relay under NOMA.
    Receiver,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeReport {
    pub scheme: Scheme,
    pub relay: usize,
    pub worst: WorstLink,
    /// Worst multicast-leg SE.
    pub eta_1: f64,
    /// Interfering pair SE.
    pub eta_2: f64,
    pub eta_total: f64,
}

#[inline]
fn log2_1p(x: f64) -> f64 {
    x.ln_1p() / LN_2
}

/// `beta * log2(1 + g * snr)`
pub fn se_oma_member(g: f64, snr: f64, beta: f64) -> f64 {
    beta * log2_1p(g * snr)
}

/// `(1 - beta) * log2(1 + g * snr)`
pub fn se_oma_interferer(g_td: f64, snr_td: f64, beta: f64) -> f64 {
    (1.0 - beta) * log2_1p(g_td * snr_td)
}

/// Full-time SE of a relay-to-member link, interfered by the scaled transmitter.
pub fn se_noma_member(g_rn: f64, snr_rn: f64, g_tn: f64, snr_tn: f64, rho: f64) -> f64 {
    log2_1p(g_rn * snr_rn / (rho * g_tn * snr_tn + 1.0))
}

/// SE at the interfering receiver when it decodes the relay first.
pub fn se_noma_vd(g_rd: f64, snr_rd: f64, g_td: f64, snr_td: f64, rho: f64) -> f64 {
    se_noma_member(g_rd, snr_rd, g_td, snr_td, rho)
}

/// `log2(1 + rho * g * snr)`; equals the OMA interferer rate at `beta = 0.5`
/// when `rho` is the power factor of the same link.
pub fn se_noma_interferer(g_td: f64, snr_td: f64, rho: f64) -> f64 {
    log2_1p(rho * g_td * snr_td)
}

fn check_sizes(layout: &Layout, fading: &FadingDraw) -> Result<()> {
    layout.require_group()?;
    if fading.len() != layout.len() {
        return Err(invalid("fading", "fading draw does not match group size"));
    }
    Ok(())
}

fn check_relay(layout: &Layout, relay: usize) -> Result<()> {
    if relay >= layout.len() {
        return Err(invalid("relay", format!("index {relay} out of range")));
    }
    Ok(())
}

// Squared distance: 2 subtractions, 2 multiplications, 1 addition.
#[inline]
fn counted_distance_sq(
    p: crate::scenario::Point2D,
    q: crate::scenario::Point2D,
    ops: &mut OpCounter,
) -> f64 {
    ops.add(3);
    ops.mul(2);
    distance_sq(p, q)
}

// log2(1 + x): 1 addition, 1 logarithm.
#[inline]
fn counted_log2_1p(x: f64, ops: &mut OpCounter) -> f64 {
    ops.add(1);
    ops.trans(1);
    log2_1p(x)
}

struct OmaEval<'a> {
    layout: &'a Layout,
    fading: &'a FadingDraw,
    budget: LinkBudget,
    beta: f64,
    eta_2: f64,
}

impl<'a> OmaEval<'a> {
    fn new(
        layout: &'a Layout,
        fading: &'a FadingDraw,
        params: &ChannelParams,
        ops: &mut OpCounter,
    ) -> Self {
        let budget = LinkBudget::new(params);
        let d_sq = counted_distance_sq(layout.transmitter, layout.receiver, ops);
        let snr = budget.mean_snr_sq(d_sq, ops);
        ops.mul(2);
        ops.add(1);
        let eta_2 = (1.0 - params.beta) * counted_log2_1p(fading.transmitter_receiver() * snr, ops);
        Self {
            layout,
            fading,
            budget,
            beta: params.beta,
            eta_2,
        }
    }

    fn at_relay(&self, relay: usize, ops: &mut OpCounter) -> SeReport {
        let members = &self.layout.members;
        let mut worst = (f64::INFINITY, relay);
        for (n, &p) in members.iter().enumerate() {
            if n == relay {
                continue;
            }
            let snr = self
                .budget
                .mean_snr_sq(counted_distance_sq(members[relay], p, ops), ops);
            ops.mul(2);
            let se = self.beta * counted_log2_1p(self.fading.relay_member(relay, n) * snr, ops);
            if se < worst.0 {
                worst = (se, n);
            }
        }
        ops.add(1);
        SeReport {
            scheme: Scheme::Oma,
            relay,
            worst: WorstLink::Member(worst.1),
            eta_1: worst.0,
            eta_2: self.eta_2,
            eta_total: worst.0 + self.eta_2,
        }
    }
}

struct NomaEval<'a> {
    layout: &'a Layout,
    fading: &'a FadingDraw,
    budget: LinkBudget,
    /// `rho * g_Tn * snr_Tn + 1` per member.
    member_denominator: Vec<f64>,
    receiver_denominator: f64,
    eta_2: f64,
}

impl<'a> NomaEval<'a> {
    fn new(
        layout: &'a Layout,
        fading: &'a FadingDraw,
        params: &ChannelParams,
        ops: &mut OpCounter,
    ) -> Self {
        let budget = LinkBudget::new(params);
        let d_sq = counted_distance_sq(layout.transmitter, layout.receiver, ops);
        ops.mul(1);
        let x_td = fading.transmitter_receiver() * budget.mean_snr_sq(d_sq, ops);
        let rho = power_factor_counted(x_td, ops).value();
        ops.mul(1);
        let scaled_td = rho * x_td;
        let eta_2 = counted_log2_1p(scaled_td, ops);
        ops.add(1);
        let receiver_denominator = scaled_td + 1.0;
        let member_denominator = layout
            .members
            .iter()
            .enumerate()
            .map(|(n, &p)| {
                let snr = budget.mean_snr_sq(counted_distance_sq(layout.transmitter, p, ops), ops);
                ops.mul(2);
                ops.add(1);
                rho * fading.transmitter_member(n) * snr + 1.0
            })
            .collect();
        Self {
            layout,
            fading,
            budget,
            member_denominator,
            receiver_denominator,
            eta_2,
        }
    }

    fn at_relay(&self, relay: usize, ops: &mut OpCounter) -> SeReport {
        let members = &self.layout.members;
        let r = members[relay];
        let snr = self
            .budget
            .mean_snr_sq(counted_distance_sq(r, self.layout.receiver, ops), ops);
        ops.mul(2);
        let to_receiver = counted_log2_1p(
            self.fading.relay_receiver(relay) * snr / self.receiver_denominator,
            ops,
        );
        let mut worst = (to_receiver, WorstLink::Receiver);
        for (n, &p) in members.iter().enumerate() {
            if n == relay {
                continue;
            }
            let snr = self.budget.mean_snr_sq(counted_distance_sq(r, p, ops), ops);
            ops.mul(2);
            let se = counted_log2_1p(
                self.fading.relay_member(relay, n) * snr / self.member_denominator[n],
                ops,
            );
            if se < worst.0 {
                worst = (se, WorstLink::Member(n));
            }
        }
        ops.add(1);
        SeReport {
            scheme: Scheme::Noma,
            relay,
            worst: worst.1,
            eta_1: worst.0,
            eta_2: self.eta_2,
            eta_total: worst.0 + self.eta_2,
        }
    }
}

fn best_of(reports: impl Iterator<Item = SeReport>) -> SeReport {
    // strict comparison keeps the lowest index on ties
    reports
        .reduce(|best, r| {
            if r.eta_total > best.eta_total {
                r
            } else {
                best
            }
        })
        .expect("group has at least two members")
}

/// OMA objective with a fixed relay.
pub fn evaluate_oma(
    layout: &Layout,
    fading: &FadingDraw,
    params: &ChannelParams,
    relay: usize,
    ops: &mut OpCounter,
) -> Result<SeReport> {
    check_sizes(layout, fading)?;
    check_relay(layout, relay)?;
    Ok(OmaEval::new(layout, fading, params, ops).at_relay(relay, ops))
}

/// NOMA objective with a fixed relay.
pub fn evaluate_noma(
    layout: &Layout,
    fading: &FadingDraw,
    params: &ChannelParams,
    relay: usize,
    ops: &mut OpCounter,
) -> Result<SeReport> {
    check_sizes(layout, fading)?;
    check_relay(layout, relay)?;
    Ok(NomaEval::new(layout, fading, params, ops).at_relay(relay, ops))
}

/// Objective of `scheme` with a fixed relay.
pub fn evaluate(
    scheme: Scheme,
    layout: &Layout,
    fading: &FadingDraw,
    params: &ChannelParams,
    relay: usize,
    ops: &mut OpCounter,
) -> Result<SeReport> {
    match scheme {
        Scheme::Oma => evaluate_oma(layout, fading, params, relay, ops),
        Scheme::Noma => evaluate_noma(layout, fading, params, relay, ops),
    }
}

/// Exhaustive OMA relay search over the true layout and realised fading.
pub fn bfs_select_oma(
    layout: &Layout,
    fading: &FadingDraw,
    params: &ChannelParams,
    ops: &mut OpCounter,
) -> Result<SeReport> {
    check_sizes(layout, fading)?;
    let eval = OmaEval::new(layout, fading, params, ops);
    Ok(best_of((0..layout.len()).map(|r| eval.at_relay(r, ops))))
}

/// Exhaustive NOMA relay search; the receiver leg joins every relay's min-set.
pub fn bfs_select_noma(
    layout: &Layout,
    fading: &FadingDraw,
    params: &ChannelParams,
    ops: &mut OpCounter,
) -> Result<SeReport> {
    check_sizes(layout, fading)?;
    let eval = NomaEval::new(layout, fading, params, ops);
    Ok(best_of((0..layout.len()).map(|r| eval.at_relay(r, ops))))
}

/// Both exhaustive searches; the hybrid choice is the better of the two.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BfsOutcome {
    pub oma: SeReport,
    pub noma: SeReport,
}

impl BfsOutcome {
    pub fn best(&self) -> SeReport {
        if self.noma.eta_total >= self.oma.eta_total {
            self.noma
        } else {
            self.oma
        }
    }
}

pub fn bfs_select_hybrid(
    layout: &Layout,
    fading: &FadingDraw,
    params: &ChannelParams,
    ops: &mut OpCounter,
) -> Result<BfsOutcome> {
    Ok(BfsOutcome {
        oma: bfs_select_oma(layout, fading, params, ops)?,
        noma: bfs_select_noma(layout, fading, params, ops)?,
    })
}
