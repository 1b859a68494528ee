//! Seeded Monte Carlo trials and their aggregation into sweep records.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::ExperimentConfig;
use crate::error::Result;
use crate::exec::{map_indexed, Execution};
use crate::hmars::{decide, HmarsDecision};
use crate::links::{bfs_select_hybrid, evaluate, BfsOutcome, FadingDraw, Scheme, SeReport};
use crate::ops::OpCounter;
use crate::scenario::{perturb_locations, place_interferers, sample_group, Layout, Scenario};

/// Random stream of one trial. Streams depend only on the master seed and
/// the trial index, never on the sweep point or the thread that runs them.
pub fn trial_rng(master_seed: u64, trial_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial_index);
    rng
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub group_size: usize,
    pub bfs: BfsOutcome,
    pub hmars: HmarsDecision,
    /// What the H-MARS choice achieves on the true channel.
    pub hmars_achieved: SeReport,
    pub ops_bfs: OpCounter,
    pub ops_hmars: OpCounter,
}

impl TrialOutcome {
    pub fn se_bfs_oma(&self) -> f64 {
        self.bfs.oma.eta_total
    }

    pub fn se_bfs_noma(&self) -> f64 {
        self.bfs.noma.eta_total
    }

    pub fn se_hmars(&self) -> f64 {
        self.hmars_achieved.eta_total
    }

    pub fn hmars_chose_noma(&self) -> bool {
        self.hmars.scheme == Scheme::Noma
    }
}

/// Samples and scores one trial.
///
/// Draw order is group, fading, then location error, so the topology and
/// fading of a trial do not change with the error radius.
pub fn run_trial(config: &ExperimentConfig, trial_index: u64) -> Result<TrialOutcome> {
    let mut rng = trial_rng(config.master_seed, trial_index);
    let members = sample_group(&config.scenario, &mut rng);
    let (transmitter, receiver) = place_interferers(&config.scenario)?;
    let truth = Layout::new(members, transmitter, receiver);
    let fading = FadingDraw::sample(truth.len(), &mut rng);
    let scenario = perturb_locations(&Scenario::exact(truth), config.scenario.r_e, &mut rng)?;

    let mut ops_bfs = OpCounter::new();
    let bfs = bfs_select_hybrid(&scenario.truth, &fading, &config.channel, &mut ops_bfs)?;

    let mut ops_hmars = OpCounter::new();
    let hmars = decide(
        &scenario.reported,
        &config.channel,
        config.convention,
        &mut ops_hmars,
    )?;
    let hmars_achieved = evaluate(
        hmars.scheme,
        &scenario.truth,
        &fading,
        &config.channel,
        hmars.relay(),
        &mut OpCounter::new(),
    )?;

    Ok(TrialOutcome {
        group_size: scenario.truth.len(),
        bfs,
        hmars,
        hmars_achieved,
        ops_bfs,
        ops_hmars,
    })
}

/// Mean operation counts per trial.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct OpsMean {
    pub mul: f64,
    pub add: f64,
    pub trans: f64,
}

impl OpsMean {
    fn from_total(total: OpCounter, trials: u64) -> Self {
        let n = trials as f64;
        Self {
            mul: total.mul as f64 / n,
            add: total.add as f64 / n,
            trans: total.trans as f64 / n,
        }
    }

    pub fn arithmetic(&self) -> f64 {
        self.mul + self.add
    }
}

/// Aggregates of one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricRecord {
    pub d0d_over_r: f64,
    pub d0t_over_r: f64,
    pub r_e: f64,
    pub se_bfs_oma: f64,
    pub se_bfs_noma: f64,
    pub se_hmars: f64,
    pub noma_duty_cycle: f64,
    pub ops_bfs: OpsMean,
    pub ops_hmars: OpsMean,
    pub trials: u64,
    /// Standard errors of the three SE means.
    pub stderr_bfs_oma: f64,
    pub stderr_bfs_noma: f64,
    pub stderr_hmars: f64,
}

#[derive(Default)]
struct Moments {
    sum: f64,
    sum_sq: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.sum += x;
        self.sum_sq += x * x;
    }

    fn mean(&self, n: f64) -> f64 {
        self.sum / n
    }

    fn stderr(&self, n: f64) -> f64 {
        if n < 2.0 {
            return 0.0;
        }
        let mean = self.mean(n);
        let var = ((self.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
        (var / n).sqrt()
    }
}

/// Folds outcomes, in trial order, into a record for `config`'s sweep point.
pub fn aggregate(config: &ExperimentConfig, outcomes: &[TrialOutcome]) -> MetricRecord {
    let mut oma = Moments::default();
    let mut noma = Moments::default();
    let mut hmars = Moments::default();
    let mut noma_count = 0u64;
    let mut ops_bfs = OpCounter::new();
    let mut ops_hmars = OpCounter::new();
    for o in outcomes {
        oma.push(o.se_bfs_oma());
        noma.push(o.se_bfs_noma());
        hmars.push(o.se_hmars());
        noma_count += u64::from(o.hmars_chose_noma());
        ops_bfs += o.ops_bfs;
        ops_hmars += o.ops_hmars;
    }
    let trials = outcomes.len() as u64;
    let n = trials as f64;
    MetricRecord {
        d0d_over_r: config.d0d_over_r(),
        d0t_over_r: config.d0t_over_r(),
        r_e: config.scenario.r_e,
        se_bfs_oma: oma.mean(n),
        se_bfs_noma: noma.mean(n),
        se_hmars: hmars.mean(n),
        noma_duty_cycle: noma_count as f64 / n,
        ops_bfs: OpsMean::from_total(ops_bfs, trials),
        ops_hmars: OpsMean::from_total(ops_hmars, trials),
        trials,
        stderr_bfs_oma: oma.stderr(n),
        stderr_bfs_noma: noma.stderr(n),
        stderr_hmars: hmars.stderr(n),
    }
}

/// Runs `config.trials` trials at the configuration's own sweep point.
pub fn run_point(config: &ExperimentConfig, execution: Execution) -> Result<MetricRecord> {
    let outcomes = map_indexed(config.trials, execution, |i| run_trial(config, i))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate(config, &outcomes))
}

/// Receiver-distance sweep at the configured transmitter distance and error radius.
pub fn sweep_dd(config: &ExperimentConfig, execution: Execution) -> Result<Vec<MetricRecord>> {
    config.validate()?;
    let t = config.d0t_over_r();
    config
        .sweep
        .d0d_over_r
        .iter()
        .map(|&d| run_point(&config.at(d, t, config.scenario.r_e), execution))
        .collect()
}

fn full_grid(config: &ExperimentConfig, execution: Execution) -> Result<Vec<MetricRecord>> {
    config.validate()?;
    config
        .grid_points()
        .into_iter()
        .map(|(d, t, r_e)| run_point(&config.at(d, t, r_e), execution))
        .collect()
}

/// NOMA duty cycle over the (error radius, transmitter distance) grid, each
/// cell traced along the receiver-distance sweep.
pub fn duty_cycle_grid(
    config: &ExperimentConfig,
    execution: Execution,
) -> Result<Vec<MetricRecord>> {
    full_grid(config, execution)
}

/// SE over the (error radius, transmitter distance) grid, each cell traced
/// along the receiver-distance sweep.
pub fn sweep_dt(config: &ExperimentConfig, execution: Execution) -> Result<Vec<MetricRecord>> {
    full_grid(config, execution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::ScenarioParams;

    fn small() -> ExperimentConfig {
        ExperimentConfig {
            trials: 200,
            ..Default::default()
        }
    }

    #[test]
    fn trials_replay_exactly() {
        let c = small();
        assert_eq!(run_trial(&c, 17).unwrap(), run_trial(&c, 17).unwrap());
        assert_ne!(run_trial(&c, 17).unwrap(), run_trial(&c, 18).unwrap());
    }

    #[test]
    fn serial_and_parallel_agree() {
        let c = small();
        let a = run_point(&c, Execution::Serial).unwrap();
        let b = run_point(&c, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn hmars_never_beats_both_searches() {
        let c = small();
        for i in 0..c.trials {
            let o = run_trial(&c, i).unwrap();
            let best = o.se_bfs_oma().max(o.se_bfs_noma());
            assert!(o.se_hmars() <= best + 1e-12);
        }
    }

    #[test]
    fn pair_group_without_error() {
        let c = ExperimentConfig {
            scenario: ScenarioParams {
                node_density: 1e-9,
                ..Default::default()
            },
            ..small()
        };
        for i in 0..50 {
            let o = run_trial(&c, i).unwrap();
            assert_eq!(o.group_size, 2);
            assert!(o.hmars.relay() < 2);
            let direct = evaluate(
                o.hmars.scheme,
                &Layout::new(vec![], Default::default(), Default::default()),
                &FadingDraw::constant(0, 1.0),
                &c.channel,
                0,
                &mut OpCounter::new(),
            );
            assert!(direct.is_err());
        }
    }

    #[test]
    fn single_value_sweep_gives_one_record() {
        let mut c = small();
        c.trials = 20;
        c.sweep.d0d_over_r = vec![1.2];
        let records = sweep_dd(&c, Execution::Serial).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].trials, 20);
        assert!((records[0].d0d_over_r - 1.2).abs() < 1e-12);
        assert!((0.0..=1.0).contains(&records[0].noma_duty_cycle));
    }
}
