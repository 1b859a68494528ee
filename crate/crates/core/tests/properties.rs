use std::f64::consts::LN_2;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sidelink_hmars::channel::{power_factor, ChannelParams};
use sidelink_hmars::harness::{run_trial, ExperimentConfig};
use sidelink_hmars::hmars::{
    decide, exp_e1_scaled, expected_noma_se, noma_outage, oma_outage, select_noma_relay,
    OutageConvention,
};
use sidelink_hmars::links::{
    bfs_select_noma, bfs_select_oma, se_noma_member, se_oma_member, FadingDraw,
};
use sidelink_hmars::oracle;
use sidelink_hmars::scenario::{
    distance, perturb_locations, sample_group, Layout, Point2D, Scenario, ScenarioParams,
};
use sidelink_hmars::OpCounter;

fn point(radius: f64) -> impl Strategy<Value = Point2D> {
    (0.0..1.0f64, 0.0..std::f64::consts::TAU)
        .prop_map(move |(u, a)| Point2D::from_polar(radius * u.sqrt(), a))
}

fn layout(max_n: usize) -> impl Strategy<Value = Layout> {
    (
        prop::collection::vec(point(50.0), 2..=max_n),
        (10.0..250.0f64, 0.0..std::f64::consts::TAU),
        (5.0..250.0f64, 0.0..std::f64::consts::TAU),
    )
        .prop_filter_map("coincident interferers", |(members, (dt, at), (dd, ad))| {
            let t = Point2D::from_polar(dt, at);
            let d = Point2D::from_polar(dd, ad);
            (distance(t, d) > 1e-6).then(|| Layout::new(members, t, d))
        })
}

proptest! {
    #[test]
    fn power_factor_halves_the_rate(exp in -6.0..6.0f64) {
        let x = 10f64.powf(exp);
        let pf = power_factor(x).value();
        prop_assert!(pf > 0.0 && pf <= 0.5);
        let lhs = 0.5 * x.ln_1p() / LN_2;
        let rhs = (pf * x).ln_1p() / LN_2;
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn bfs_matches_exhaustive_rescan(layout in layout(10), seed in any::<u64>()) {
        let params = ChannelParams::default();
        let fading = FadingDraw::sample(layout.len(), &mut ChaCha8Rng::seed_from_u64(seed));
        let oma = bfs_select_oma(&layout, &fading, &params, &mut OpCounter::new()).unwrap();
        let noma = bfs_select_noma(&layout, &fading, &params, &mut OpCounter::new()).unwrap();
        let (r_oma, v_oma) = oracle::rescan_oma(&layout, &fading, &params);
        let (r_noma, v_noma) = oracle::rescan_noma(&layout, &fading, &params);
        prop_assert!(v_oma <= oma.eta_total * (1.0 + 1e-12));
        prop_assert!(v_noma <= noma.eta_total * (1.0 + 1e-12));
        prop_assert_eq!(r_oma, oma.relay);
        prop_assert_eq!(r_noma, noma.relay);
    }

    #[test]
    fn oma_search_is_monotone_in_gain(layout in layout(8), g in 0.01..10.0f64, k in 1.0..10.0f64) {
        let params = ChannelParams::default();
        let n = layout.len();
        let low = bfs_select_oma(&layout, &FadingDraw::constant(n, g), &params, &mut OpCounter::new()).unwrap();
        let high = bfs_select_oma(&layout, &FadingDraw::constant(n, g * k), &params, &mut OpCounter::new()).unwrap();
        prop_assert!(high.eta_total >= low.eta_total);
    }

    #[test]
    fn link_rates_are_monotone(g in 0.0..10.0f64, dg in 0.0..10.0f64, snr in 1e-3..1e6f64, rho in 0.0..0.5f64) {
        prop_assert!(se_oma_member(g + dg, snr, 0.5) >= se_oma_member(g, snr, 0.5));
        prop_assert!(se_noma_member(g + dg, snr, 1.0, snr, rho) >= se_noma_member(g, snr, 1.0, snr, rho));
        // more interference never helps
        prop_assert!(se_noma_member(1.0, snr, g + dg, snr, rho) <= se_noma_member(1.0, snr, g, snr, rho));
    }

    #[test]
    fn ergodic_se_is_stable_across_scales(ex in -3.0..6.0f64, ey in -3.0..6.0f64) {
        let (lx, ly) = (10f64.powf(ex), 10f64.powf(ey));
        let se = expected_noma_se(lx, ly).unwrap();
        prop_assert!(se.is_finite() && se >= 0.0);
        let reference = oracle::ergodic_se_quadrature(lx, ly);
        prop_assert!((se - reference).abs() <= 1e-3 + 1e-6 * reference, "{} vs {}", se, reference);
    }

    #[test]
    fn scaled_e1_is_finite_and_decreasing(e in -3.0..6.0f64) {
        let x = 10f64.powf(e);
        let v = exp_e1_scaled(x).unwrap();
        let w = exp_e1_scaled(x * 1.01).unwrap();
        prop_assert!(v.is_finite() && v > 0.0 && w < v);
        // 1/(x+1) < e^x E1(x) < 1/x
        prop_assert!(v < 1.0 / x && v > 1.0 / (x + 1.0));
    }

    #[test]
    fn outages_are_probabilities(lx in 1e-3..1e6f64, ly in 1e-3..1e6f64, gamma in 0.0..100.0f64) {
        for c in [OutageConvention::Rederived, OutageConvention::AsPrinted] {
            let n = noma_outage(lx, ly, gamma, c);
            let o = oma_outage(lx, gamma, c);
            prop_assert!((0.0..=1.0).contains(&n) && (0.0..=1.0).contains(&o));
        }
    }

    #[test]
    fn noma_target_balances_both_legs(layout in layout(30)) {
        let params = ChannelParams::default();
        let r = select_noma_relay(&layout, &params, &mut OpCounter::new()).unwrap();
        prop_assert!(r.balance_residual(params.alpha) < 1e-9);
        prop_assert!(r.offset > 0.0 && r.offset < r.anchor_to_receiver);
    }

    #[test]
    fn decision_relays_are_members(layout in layout(25)) {
        for c in [OutageConvention::Rederived, OutageConvention::AsPrinted] {
            let d = decide(&layout, &ChannelParams::default(), c, &mut OpCounter::new()).unwrap();
            prop_assert!(d.relay_oma < layout.len() && d.relay_noma < layout.len());
            prop_assert!(d.lhs.is_finite() && d.rhs.is_finite());
        }
    }

    #[test]
    fn decision_is_continuous_in_snr_scale(layout in layout(20), exp in -3.0..6.0f64) {
        // scaling every mean SNR by 10^exp shifts the transmit power by 10 exp dB
        let base = ChannelParams::default();
        let at = |db: f64| {
            let params = ChannelParams { tx_power_dbm: base.tx_power_dbm + db, ..base };
            decide(&layout, &params, OutageConvention::Rederived, &mut OpCounter::new()).unwrap()
        };
        let a = at(10.0 * exp);
        let b = at(10.0 * exp + 1e-9);
        for v in [a.lhs, a.rhs, a.gamma] {
            prop_assert!(v.is_finite() && v >= 0.0);
        }
        prop_assert!((a.lhs - b.lhs).abs() < 1e-6 && (a.rhs - b.rhs).abs() < 1e-6);
    }

    #[test]
    fn perturbation_stays_within_radius(seed in any::<u64>(), r_e in 0.0..20.0f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let members = sample_group(&ScenarioParams::default(), &mut rng);
        let truth = Layout::new(members, Point2D::new(150.0, 0.0), Point2D::new(60.0, 0.0));
        let s = perturb_locations(&Scenario::exact(truth), r_e, &mut rng).unwrap();
        for (a, b) in s.truth.members.iter().zip(&s.reported.members) {
            prop_assert!(distance(*a, *b) <= r_e + 1e-12);
        }
        prop_assert!(distance(s.truth.transmitter, s.reported.transmitter) <= r_e + 1e-12);
        prop_assert!(distance(s.truth.receiver, s.reported.receiver) <= r_e + 1e-12);
    }

    #[test]
    fn hmars_never_beats_the_searches(index in 0u64..1_000_000) {
        let config = ExperimentConfig { trials: 1, ..Default::default() };
        let o = run_trial(&config, index).unwrap();
        prop_assert!(o.se_hmars() <= o.se_bfs_oma().max(o.se_bfs_noma()) + 1e-12);
    }
}

#[test]
fn group_size_mean_and_variance() {
    let params = ScenarioParams::default();
    let mu = params.mean_group_size();
    let draws = 20_000;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let sizes: Vec<f64> = (0..draws)
        .map(|_| sample_group(&params, &mut rng).len() as f64)
        .collect();
    let m = draws as f64;
    let mean = sizes.iter().sum::<f64>() / m;
    let var = sizes.iter().map(|n| (n - mean) * (n - mean)).sum::<f64>() / (m - 1.0);
    // the N >= 2 truncation moves these moments by less than 1e-6
    assert!(
        (mean - mu).abs() <= 3.0 * (mu / m).sqrt(),
        "mean {mean} vs {mu}"
    );
    let var_sd = ((mu + 2.0 * mu * mu) / m).sqrt();
    assert!((var - mu).abs() <= 3.0 * var_sd, "variance {var} vs {mu}");
}

#[test]
fn member_coordinates_are_centred() {
    let params = ScenarioParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let points: Vec<Point2D> = (0..5_000)
        .flat_map(|_| sample_group(&params, &mut rng))
        .collect();
    let m = points.len() as f64;
    // each coordinate of a uniform disk point has standard deviation R / 2
    let band = 3.0 * params.radius / 2.0 / m.sqrt();
    let mx = points.iter().map(|p| p.x).sum::<f64>() / m;
    let my = points.iter().map(|p| p.y).sum::<f64>() / m;
    assert!(
        mx.abs() <= band && my.abs() <= band,
        "({mx}, {my}) band {band}"
    );
    let mean_sq = points.iter().map(|p| p.x * p.x + p.y * p.y).sum::<f64>() / m;
    let want = params.radius * params.radius / 2.0;
    assert!((mean_sq - want).abs() / want < 0.02, "{mean_sq}");
}
