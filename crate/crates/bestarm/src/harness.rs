//! Seeded Monte Carlo runner.
//!
//! Trial `t` of a run uses the seed `derive(master, t)`; from it come the
//! oracle seed and, when permutation averaging is on, a fresh uniformly
//! random arm order. Seeds depend on neither the algorithm nor δ, so rows
//! of a comparison are paired trial by trial. Trials run on a rayon pool
//! and are reduced in index order, so summaries do not depend on the thread
//! count.

use bestarm_core::generators::{apply_permutation, gen_max_entropy};
use bestarm_core::seed::derive;
use bestarm_core::{
    complexity_bounds, decompose, AlgoError, Algorithm, AlgorithmParams, BaiResult,
    BanditInstance, SampleOracle,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::HarnessError;

/// Trial-level settings shared by all rows of an experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSettings {
    pub trials: u64,
    pub seed: u64,
    pub permute: bool,
    pub budget_cap: u64,
    pub threads: usize,
}

impl RunSettings {
    pub fn from_config(cfg: &ExperimentConfig) -> Self {
        Self {
            trials: cfg.trials,
            seed: cfg.seed,
            permute: cfg.permute,
            budget_cap: cfg.budget_cap,
            threads: cfg.threads,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct TrialOutcome {
    correct: bool,
    aborted: bool,
    samples: u64,
    heuristic: bool,
}

/// Aggregate of `trials` runs of one algorithm at one δ on one instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialSummary {
    pub instance: String,
    pub algorithm: String,
    pub delta: f64,
    pub trials: u64,
    pub errors: u64,
    pub error_rate: f64,
    /// Half-width of the normal-approximation 95% interval for the error rate.
    pub ci95: f64,
    pub aborts: u64,
    /// Over non-aborted trials; `None` when every trial aborted.
    pub mean_samples: Option<f64>,
    pub std_samples: Option<f64>,
    pub min_samples: Option<u64>,
    pub max_samples: Option<u64>,
    #[serde(rename = "H_total")]
    pub h_total: f64,
    pub entropy_nats: f64,
    pub mt_bound: f64,
    pub kks_bound: f64,
    pub conjectured_bound: f64,
    pub bound_ratio: Option<f64>,
    pub heuristic: bool,
}

impl TrialSummary {
    pub fn correct(&self) -> u64 {
        self.trials - self.errors - self.aborts
    }

    /// `error_rate ≤ δ + 3 sqrt(δ(1-δ)/N)`.
    pub fn meets_delta(&self) -> bool {
        self.error_rate <= delta_tolerance(self.delta, self.trials)
    }
}

/// Largest error rate consistent with δ-correctness at three binomial sigmas.
pub fn delta_tolerance(delta: f64, trials: u64) -> f64 {
    delta + 3.0 * (delta * (1.0 - delta) / trials as f64).sqrt()
}

fn pool(threads: usize) -> Result<rayon::ThreadPool, HarnessError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| HarnessError::Config(format!("cannot start worker pool: {e}")))
}

/// Run `trials` seeded trials of an arbitrary strategy.
///
/// `strategy` receives a fresh oracle, the (possibly permuted) instance it
/// wraps, and δ.
pub fn run_trials_with<F>(
    instance: &BanditInstance,
    algorithm: &str,
    delta: f64,
    settings: &RunSettings,
    strategy: F,
) -> Result<TrialSummary, HarnessError>
where
    F: Fn(&mut SampleOracle, &BanditInstance, f64) -> Result<BaiResult, AlgoError> + Sync,
{
    let bounds = complexity_bounds(instance, delta)?;
    let decomposition = decompose(&instance.gap_profile());

    let run_one = |t: u64| -> Result<TrialOutcome, AlgoError> {
        let trial_seed = derive(settings.seed, t);
        let permuted;
        let inst = if settings.permute {
            permuted = apply_permutation(instance, derive(trial_seed, 1));
            &permuted
        } else {
            instance
        };
        let mut oracle = SampleOracle::new(inst, derive(trial_seed, 0))
            .with_budget_cap(Some(settings.budget_cap));
        let result = strategy(&mut oracle, inst, delta)?;
        Ok(TrialOutcome {
            correct: !result.aborted && result.selected == inst.best_arm(),
            aborted: result.aborted,
            samples: result.total_samples,
            heuristic: result.heuristic,
        })
    };
    let outcomes: Vec<TrialOutcome> = pool(settings.threads)?.install(|| {
        (0..settings.trials)
            .into_par_iter()
            .map(run_one)
            .collect::<Result<Vec<_>, _>>()
    })?;

    let n = settings.trials;
    let aborts = outcomes.iter().filter(|o| o.aborted).count() as u64;
    let errors = outcomes.iter().filter(|o| !o.aborted && !o.correct).count() as u64;
    let samples: Vec<u64> = outcomes.iter().filter(|o| !o.aborted).map(|o| o.samples).collect();
    let (mean, std) = mean_std(&samples);
    let error_rate = errors as f64 / n as f64;
    Ok(TrialSummary {
        instance: instance.name().unwrap_or("instance").to_owned(),
        algorithm: algorithm.to_owned(),
        delta,
        trials: n,
        errors,
        error_rate,
        ci95: 1.96 * (error_rate * (1.0 - error_rate) / n as f64).sqrt(),
        aborts,
        mean_samples: mean,
        std_samples: std,
        min_samples: samples.iter().copied().min(),
        max_samples: samples.iter().copied().max(),
        h_total: decomposition.total_weight(),
        entropy_nats: decomposition.entropy_nat(),
        mt_bound: bounds.mt,
        kks_bound: bounds.kks_jmns,
        conjectured_bound: bounds.conjectured,
        bound_ratio: mean.map(|m| m / bounds.conjectured),
        heuristic: outcomes.iter().any(|o| o.heuristic),
    })
}

fn mean_std(samples: &[u64]) -> (Option<f64>, Option<f64>) {
    if samples.is_empty() {
        return (None, None);
    }
    let n = samples.len() as f64;
    let mean = samples.iter().map(|&s| s as f64).sum::<f64>() / n;
    let var = if samples.len() > 1 {
        samples.iter().map(|&s| (s as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (Some(mean), Some(var.sqrt()))
}

/// Summaries for one algorithm at one δ.
pub fn run_algorithm(
    instance: &BanditInstance,
    algorithm: Algorithm,
    params: &AlgorithmParams,
    delta: f64,
    settings: &RunSettings,
) -> Result<TrialSummary, HarnessError> {
    run_trials_with(instance, algorithm.name(), delta, settings, |oracle, truth, d| {
        algorithm.run(params, oracle, truth, d)
    })
}

/// Every (algorithm, δ) pair of the config, algorithm-major.
pub fn run_trials(cfg: &ExperimentConfig) -> Result<Vec<TrialSummary>, HarnessError> {
    let (algorithms, _) = cfg.validate()?;
    let instance = cfg.instance.load()?;
    let settings = RunSettings::from_config(cfg);
    let params = AlgorithmParams::default();
    let mut rows = Vec::with_capacity(algorithms.len() * cfg.deltas.len());
    for &algorithm in &algorithms {
        for &delta in &cfg.deltas {
            rows.push(run_algorithm(&instance, algorithm, &params, delta, &settings)?);
        }
    }
    Ok(rows)
}

/// Algorithms meeting δ-correctness at one δ, cheapest first.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ranking {
    pub delta: f64,
    pub order: Vec<(String, f64)>,
    /// Algorithms whose error rate exceeded the δ tolerance.
    pub rejected: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub rows: Vec<TrialSummary>,
    pub rankings: Vec<Ranking>,
}

/// Paired comparison of at least two algorithms on identical seeds.
pub fn compare_suite(cfg: &ExperimentConfig) -> Result<Comparison, HarnessError> {
    if cfg.algorithms.len() < 2 {
        return Err(HarnessError::Config("compare needs at least 2 algorithms".into()));
    }
    let rows = run_trials(cfg)?;
    let rankings = cfg
        .deltas
        .iter()
        .map(|&delta| {
            let at: Vec<&TrialSummary> = rows.iter().filter(|r| r.delta == delta).collect();
            let mut order: Vec<(String, f64)> = at
                .iter()
                .filter(|r| r.meets_delta())
                .filter_map(|r| r.mean_samples.map(|m| (r.algorithm.clone(), m)))
                .collect();
            order.sort_by(|a, b| a.1.total_cmp(&b.1));
            let rejected =
                at.iter().filter(|r| !r.meets_delta()).map(|r| r.algorithm.clone()).collect();
            Ranking { delta, order, rejected }
        })
        .collect();
    Ok(Comparison { rows, rankings })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeRow {
    pub m: u32,
    pub n_arms: usize,
    pub summary: TrialSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub algorithm: String,
    pub delta: f64,
    pub rows: Vec<ProbeRow>,
    /// `max / min` of the bound ratios; `None` if some row had no finished trial.
    pub ratio_spread: Option<f64>,
}

/// Run `algorithm` on the max-entropy family for each `m` and track
/// `mean_samples / (H (ln δ^{-1} + Ent))` as the entropy grows.
pub fn entropy_scaling_probe(
    m_list: &[u32],
    algorithm: Algorithm,
    delta: f64,
    settings: &RunSettings,
) -> Result<ProbeReport, HarnessError> {
    if m_list.is_empty() {
        return Err(HarnessError::Config("m list is empty".into()));
    }
    if m_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(HarnessError::Config("m list must be strictly ascending".into()));
    }
    let params = AlgorithmParams::default();
    let mut rows = Vec::with_capacity(m_list.len());
    for &m in m_list {
        let instance = gen_max_entropy(m)?.with_name(format!("max-entropy-{m}"));
        let summary = run_algorithm(&instance, algorithm, &params, delta, settings)?;
        rows.push(ProbeRow { m, n_arms: instance.n_arms(), summary });
    }
    let ratios: Option<Vec<f64>> = rows.iter().map(|r| r.summary.bound_ratio).collect();
    let ratio_spread = ratios.map(|rs| {
        let max = rs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = rs.iter().copied().fold(f64::INFINITY, f64::min);
        max / min
    });
    Ok(ProbeReport { algorithm: algorithm.name().to_owned(), delta, rows, ratio_spread })
}
