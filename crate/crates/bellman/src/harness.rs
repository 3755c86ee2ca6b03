//! Seeded randomized verification suites.
//!
//! Every trial draws its inputs from its own ChaCha8 stream, selected by
//! `(seed, trial index)`, so a report is reproducible regardless of thread
//! count and any trial can be replayed on its own with [`run_trial`].

use std::fmt;
use std::str::FromStr;

use bellman_core::bellman::{bellman_value, ProblemParams};
use bellman_core::carleson::{carleson_sum, random_admissible_weights};
use bellman_core::dyadic::{weak_type_check, DyadicSet, DyadicStepFunction};
use bellman_core::inequalities::{MaximalData, SplitIntegrals};
use bellman_core::sharpness::sharpness_sequence;
use bellman_core::special::{omega_p, Exponent};
use bellman_core::{Error as CoreError, QuadratureConfig, RootFindConfig, StepFunction};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "BELLMAN_THREADS";

/// Highest level used by the suites built on the rearranged form.
pub const SPLIT_SUITE_MAX_LEVEL: u32 = 8;

/// Highest level of random Carleson weight families.
pub const CARLESON_MAX_LEVEL: u32 = 8;

/// Levels of the constructive sharpness sequence.
pub const SHARPNESS_LEVELS: [u32; 4] = [8, 10, 12, 14];

/// Largest slack of the rearrangement suite.
pub const LEMMA31_SLACK: f64 = 1e-12;

/// Threshold printed with sharpness results.
pub const SHARPNESS_THRESHOLD: f64 = 0.97;

/// The available suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Lemma31,
    WeakType,
    Ineq110,
    Ineq111,
    Carleson,
    Ineq610,
    Ineq612,
    Sharpness,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Lemma31,
        Suite::WeakType,
        Suite::Ineq110,
        Suite::Ineq111,
        Suite::Carleson,
        Suite::Ineq610,
        Suite::Ineq612,
        Suite::Sharpness,
    ];

    /// Slack applied to this suite's margins: the configured one, tightened
    /// to `1e-12` for the rearrangement comparison, which involves no
    /// quadrature or root finding.
    pub fn slack(self, cfg: &TrialConfig) -> f64 {
        match self {
            Suite::Lemma31 => cfg.slack.min(LEMMA31_SLACK),
            _ => cfg.slack,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma31 => "lemma31",
            Suite::WeakType => "weak_type",
            Suite::Ineq110 => "ineq_1_10",
            Suite::Ineq111 => "ineq_1_11",
            Suite::Carleson => "carleson",
            Suite::Ineq610 => "ineq_6_10",
            Suite::Ineq612 => "ineq_6_12",
            Suite::Sharpness => "sharpness",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown suite '{0}' (expected one of lemma31, weak_type, ineq_1_10, ineq_1_11, carleson, ineq_6_10, ineq_6_12, sharpness)")]
pub struct UnknownSuite(pub String);

impl FromStr for Suite {
    type Err = UnknownSuite;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| UnknownSuite(s.to_string()))
    }
}

/// Settings shared by all suites.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialConfig {
    pub seed: u64,
    pub trials: u64,
    /// Largest dyadic level of random functions (capped per suite).
    pub level: u32,
    pub p_grid: Vec<f64>,
    pub beta_grid: Vec<f64>,
    pub gamma_grid: Vec<f64>,
    /// A trial passes when its margin is at least `-slack`.
    pub slack: f64,
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig {
            seed: 1,
            trials: 1000,
            level: 10,
            p_grid: vec![1.5, 2.0, 3.0, 4.0],
            beta_grid: vec![0.05, 0.25, 0.5, 1.0, 2.0, 4.0],
            gamma_grid: vec![0.0, 0.05, 0.25, 0.5, 1.0, 2.0, 4.0],
            slack: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("level {0} exceeds the maximum 24")]
    Level(u32),
    #[error("{0} must be a nonempty list")]
    EmptyGrid(&'static str),
    #[error("grid {0} holds an invalid value")]
    BadGrid(&'static str),
    #[error("slack must be a nonnegative number")]
    Slack,
}

impl TrialConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.trials == 0 {
            return Err(ConfigError::NoTrials);
        }
        if self.level > bellman_core::dyadic::MAX_LEVEL {
            return Err(ConfigError::Level(self.level));
        }
        for (name, grid) in [("p_grid", &self.p_grid), ("beta_grid", &self.beta_grid), ("gamma_grid", &self.gamma_grid)] {
            if grid.is_empty() {
                return Err(ConfigError::EmptyGrid(name));
            }
        }
        if self.p_grid.iter().any(|p| Exponent::new(*p).is_err()) {
            return Err(ConfigError::BadGrid("p_grid"));
        }
        if self.beta_grid.iter().any(|b| !(*b > 0.0 && b.is_finite())) {
            return Err(ConfigError::BadGrid("beta_grid"));
        }
        if self.gamma_grid.iter().any(|g| !(*g >= 0.0 && g.is_finite())) {
            return Err(ConfigError::BadGrid("gamma_grid"));
        }
        if !(self.slack >= 0.0 && self.slack.is_finite()) {
            return Err(ConfigError::Slack);
        }
        Ok(())
    }
}

/// Outcome of a suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub name: String,
    /// Number of trials run.
    pub trials: u64,
    /// Smallest margin over all trials (`null` in JSON when no trial produced
    /// a margin).
    pub min_margin: f64,
    /// Inputs of the trial attaining `min_margin`.
    pub worst_case: Value,
    pub passed: bool,
    /// Evaluations skipped because a precondition of the inequality failed.
    pub precondition_skips: u64,
}

impl InequalityReport {
    pub fn to_json(&self) -> String {
        crate::json::to_string(self).expect("report serializes")
    }
}

/// The result of one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub margin: f64,
    pub skips: u64,
    pub detail: Value,
}

impl TrialOutcome {
    fn failure(detail: Value) -> Self {
        TrialOutcome {
            margin: f64::NEG_INFINITY,
            skips: 0,
            detail,
        }
    }
}

/// The RNG stream of one trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Shape of a random function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Uniform,
    ExponentialTail,
    SparseSpikes,
    Mixture,
}

fn draw_cell<R: Rng + ?Sized>(rng: &mut R, family: Family) -> f64 {
    match family {
        Family::Uniform => rng.random::<f64>(),
        Family::ExponentialTail => -(1.0 - rng.random::<f64>()).ln(),
        Family::SparseSpikes => {
            if rng.random_bool(0.05) {
                rng.random_range(5.0..50.0)
            } else {
                0.1 * rng.random::<f64>()
            }
        }
        Family::Mixture => {
            let f = match rng.random_range(0..3) {
                0 => Family::Uniform,
                1 => Family::ExponentialTail,
                _ => Family::SparseSpikes,
            };
            draw_cell(rng, f)
        }
    }
}

/// A random nonnegative function at `level` with mean `1`, optionally
/// arranged in non-increasing order.
pub fn random_phi<R: Rng + ?Sized>(rng: &mut R, level: u32) -> (DyadicStepFunction, Family, bool) {
    let family = match rng.random_range(0..4) {
        0 => Family::Uniform,
        1 => Family::ExponentialTail,
        2 => Family::SparseSpikes,
        _ => Family::Mixture,
    };
    let n = 1usize << level;
    let mut values: Vec<f64> = (0..n).map(|_| draw_cell(rng, family)).collect();
    let sorted = rng.random_bool(0.25);
    if sorted {
        values.sort_by(|a, b| b.total_cmp(a));
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if mean > 0.0 {
        values.iter_mut().for_each(|v| *v /= mean);
    } else {
        values.iter_mut().for_each(|v| *v = 1.0);
    }
    (DyadicStepFunction::new(level, values).expect("valid random values"), family, sorted)
}

/// Kinds of random sets `K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SetKind {
    /// Each cell independently with probability 1/2.
    Uniform,
    /// The first cells `[0, j 2^{-m})`.
    Prefix,
    /// The cells carrying the largest values of `φ`.
    TopCells,
    /// `{Mφ > λ}`.
    Superlevel,
}

/// A random nonempty set of cells of `phi`'s level.
pub fn random_set<R: Rng + ?Sized>(rng: &mut R, phi: &DyadicStepFunction, maximal: &DyadicStepFunction) -> (DyadicSet, SetKind) {
    let n = phi.values().len();
    let level = phi.level();
    let kind = match rng.random_range(0..4) {
        0 => SetKind::Uniform,
        1 => SetKind::Prefix,
        2 => SetKind::TopCells,
        _ => SetKind::Superlevel,
    };
    let mask: Vec<bool> = match kind {
        SetKind::Uniform => (0..n).map(|_| rng.random_bool(0.5)).collect(),
        SetKind::Prefix => {
            let count = rng.random_range(1..=n);
            (0..n).map(|i| i < count).collect()
        }
        SetKind::TopCells => {
            let count = rng.random_range(1..=n);
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&i, &j| phi.values()[j].total_cmp(&phi.values()[i]));
            let mut mask = vec![false; n];
            for i in &order[..count] {
                mask[*i] = true;
            }
            mask
        }
        SetKind::Superlevel => {
            let top = maximal.values().iter().cloned().fold(0.0, f64::max);
            let lambda = rng.random::<f64>() * top;
            maximal.values().iter().map(|v| *v > lambda).collect()
        }
    };
    let set = DyadicSet::new(level, mask).unwrap_or_else(|_| {
        let cell = rng.random_range(0..n);
        DyadicSet::new(level, (0..n).map(|i| i == cell).collect()).expect("one cell")
    });
    (set, kind)
}

fn pick<R: Rng + ?Sized>(rng: &mut R, grid: &[f64]) -> f64 {
    grid[rng.random_range(0..grid.len())]
}

fn random_level<R: Rng + ?Sized>(rng: &mut R, max: u32) -> u32 {
    rng.random_range(0..=max)
}

fn core_failure(trial: u64, err: CoreError) -> TrialOutcome {
    TrialOutcome::failure(json!({ "trial": trial, "error": err.to_string() }))
}

/// Runs trial `trial` of `suite` in isolation.
pub fn run_trial(suite: Suite, cfg: &TrialConfig, trial: u64) -> TrialOutcome {
    let mut rng = trial_rng(cfg.seed, trial);
    let result = match suite {
        Suite::Lemma31 => lemma31_trial(&mut rng, cfg, trial),
        Suite::WeakType => weak_type_trial(&mut rng, cfg, trial),
        Suite::Ineq110 => ineq_1_10_trial(&mut rng, cfg, trial),
        Suite::Ineq111 => ineq_1_11_trial(&mut rng, cfg, trial),
        Suite::Carleson => carleson_trial(&mut rng, cfg, trial),
        Suite::Ineq610 => split_trial(&mut rng, cfg, trial, false),
        Suite::Ineq612 => split_trial(&mut rng, cfg, trial, true),
        Suite::Sharpness => return sharpness_outcome(),
    };
    result.unwrap_or_else(|e| core_failure(trial, e))
}

type TrialResult = Result<TrialOutcome, CoreError>;

fn lemma31_trial(rng: &mut ChaCha8Rng, cfg: &TrialConfig, trial: u64) -> TrialResult {
    let level = random_level(rng, cfg.level);
    let (phi, family, sorted) = random_phi(rng, level);
    let phi_star = phi.rearrangement();
    let m_star = phi.maximal_operator().rearrangement();
    let mut margin = f64::INFINITY;
    let mut at = 0.0;
    // the Hardy average decreases, so each cell is worst at its right end
    for (_, b, v) in m_star.cells() {
        let m = phi_star.hardy_average(b)? - v;
        if m < margin {
            margin = m;
            at = b;
        }
    }
    Ok(TrialOutcome {
        margin,
        skips: 0,
        detail: json!({ "trial": trial, "level": level, "family": family, "sorted": sorted, "t": at }),
    })
}

fn weak_type_trial(rng: &mut ChaCha8Rng, cfg: &TrialConfig, trial: u64) -> TrialResult {
    let level = random_level(rng, cfg.level);
    let (phi, family, sorted) = random_phi(rng, level);
    let maximal = phi.maximal_operator();
    let top = maximal.values().iter().cloned().fold(0.0, f64::max);
    let mut margin = f64::INFINITY;
    let mut worst = 0.0;
    for i in 0..8 {
        let lambda = if i % 2 == 0 {
            (1.0 - rng.random::<f64>()) * 1.2 * top
        } else {
            maximal.values()[rng.random_range(0..maximal.values().len())]
        };
        let m = weak_type_check(&phi, lambda)?;
        if m < margin {
            margin = m;
            worst = lambda;
        }
    }
    Ok(TrialOutcome {
        margin,
        skips: 0,
        detail: json!({ "trial": trial, "level": level, "family": family, "sorted": sorted, "lambda": worst }),
    })
}

fn ineq_1_10_trial(rng: &mut ChaCha8Rng, cfg: &TrialConfig, trial: u64) -> TrialResult {
    let level = random_level(rng, cfg.level);
    let (phi, family, sorted) = random_phi(rng, level);
    let p = Exponent::new(pick(rng, &cfg.p_grid))?;
    let data = MaximalData::new(&phi, p);
    // a third of the trials use the sharp choice β = ω_p(f^p/F) - 1
    let sharp = rng.random_range(0..3) == 0;
    let mut beta = pick(rng, &cfg.beta_grid);
    if sharp {
        let theta = (data.mean().powf(p.get()) / data.moment()).min(1.0);
        let b = omega_p(p, theta, &RootFindConfig::default())? - 1.0;
        if b > 0.0 {
            beta = b;
        }
    }
    Ok(TrialOutcome {
        margin: data.margin_1_10(beta)?,
        skips: 0,
        detail: json!({ "trial": trial, "level": level, "family": family, "sorted": sorted, "p": p.get(), "beta": beta }),
    })
}

fn ineq_1_11_trial(rng: &mut ChaCha8Rng, cfg: &TrialConfig, trial: u64) -> TrialResult {
    let level = random_level(rng, cfg.level);
    let (phi, family, sorted) = random_phi(rng, level);
    let p = Exponent::new(pick(rng, &cfg.p_grid))?;
    let data = MaximalData::new(&phi, p);
    let (set, kind) = random_set(rng, &phi, data.maximal());
    let beta = pick(rng, &cfg.beta_grid);
    let gamma = match rng.random_range(0..4) {
        0 => 0.0,
        1 => beta,
        _ => {
            let allowed: Vec<f64> = cfg.gamma_grid.iter().cloned().filter(|g| *g <= beta).collect();
            if allowed.is_empty() {
                0.0
            } else {
                pick(rng, &allowed)
            }
        }
    };
    let margin = data.margin_1_11(&set, beta, gamma)?;
    let detail = json!({
        "trial": trial, "level": level, "family": family, "sorted": sorted, "p": p.get(),
        "beta": beta, "gamma": gamma, "set_kind": kind, "set_hex": set.to_hex(),
    });
    if gamma == 0.0 && margin.to_bits() != data.margin_1_10(beta)?.to_bits() {
        let mut d = detail;
        d["error"] = json!("gamma = 0 margin differs from the margin without K");
        return Ok(TrialOutcome::failure(d));
    }
    Ok(TrialOutcome { margin, skips: 0, detail })
}

fn carleson_trial(rng: &mut ChaCha8Rng, cfg: &TrialConfig, trial: u64) -> TrialResult {
    let level = random_level(rng, cfg.level);
    let (phi, family, sorted) = random_phi(rng, level);
    let p = Exponent::new(pick(rng, &cfg.p_grid))?;
    let weight_level = random_level(rng, cfg.level.min(CARLESON_MAX_LEVEL));
    let k = 1.0 - rng.random::<f64>();
    let weight_seed = rng.next_u64();
    let weights = random_admissible_weights(weight_level, k, weight_seed)?;
    let sum = carleson_sum(&phi, &weights, p.get())?;
    let f = phi.mean();
    let big_f = phi.lp_moment(p.get()).max(f.powf(p.get()));
    let params = ProblemParams::new(p, f, big_f, k)?;
    let bound = bellman_value(&params, &RootFindConfig::default())?;
    Ok(TrialOutcome {
        margin: bound - sum,
        skips: 0,
        detail: json!({
            "trial": trial, "level": level, "family": family, "sorted": sorted, "p": p.get(),
            "k": k, "weight_level": weight_level, "weight_seed": weight_seed,
            "carleson_sum": sum, "bellman_value": bound,
        }),
    })
}

/// Values of `k` probed for a non-increasing `h`: half of and at the first
/// breakpoint (where `h` is constant on `(0, k]`), a fixed grid and a few
/// random points.
fn k_grid<R: Rng + ?Sized>(rng: &mut R, h: &StepFunction) -> Vec<f64> {
    let t1 = h.breaks()[1];
    let mut ks = vec![0.5 * t1, t1, 0.1, 0.25, 0.5, 0.75, 0.9];
    for _ in 0..3 {
        ks.push(rng.random_range(0.01..0.99));
    }
    ks.retain(|k| *k > 0.0 && *k < 1.0);
    ks
}

fn split_trial(rng: &mut ChaCha8Rng, cfg: &TrialConfig, trial: u64, use_6_12: bool) -> TrialResult {
    let level = random_level(rng, cfg.level.min(SPLIT_SUITE_MAX_LEVEL));
    let (phi, family, sorted) = random_phi(rng, level);
    let p = Exponent::new(pick(rng, &cfg.p_grid))?;
    let h = phi.rearrangement();
    let q = QuadratureConfig::default();
    let rc = RootFindConfig::default();
    let mut margin = f64::INFINITY;
    let mut worst_k = f64::NAN;
    let mut skips = 0;
    let mut admissible = 0;
    for k in k_grid(rng, &h) {
        let split = match SplitIntegrals::new(&h, p, k, &q) {
            Ok(s) => s,
            Err(CoreError::ZeroIntegral(_)) => {
                skips += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        if !split.precondition_holds(&rc)? {
            skips += 1;
            continue;
        }
        admissible += 1;
        let m = if use_6_12 {
            split.margin_6_12(&rc)?
        } else {
            split.margin_6_10(&rc)?
        };
        if m < margin {
            margin = m;
            worst_k = k;
        }
    }
    let detail = json!({
        "trial": trial, "level": level, "family": family, "sorted": sorted, "p": p.get(),
        "k": worst_k, "admissible_k": admissible,
    });
    if admissible == 0 {
        let mut d = detail;
        d["error"] = json!("no admissible k");
        return Ok(TrialOutcome::failure(d));
    }
    Ok(TrialOutcome { margin, skips, detail })
}

/// Parameter sets of the sharpness suite.
pub fn sharpness_params() -> Vec<ProblemParams> {
    [(2.0, 1.0, 2.0, 0.5), (2.0, 1.0, 2.0, 1.0), (3.0, 1.0, 1.0, 0.25)]
        .into_iter()
        .map(|(p, f, big_f, k)| ProblemParams::from_raw(p, f, big_f, k).expect("valid sharpness parameters"))
        .collect()
}

/// Levels `8, 10, ...` up to `max_level` (at least `8`).
pub fn sharpness_levels(max_level: u32) -> Vec<u32> {
    (8..=max_level.max(8)).step_by(2).collect()
}

fn sharpness_outcome() -> TrialOutcome {
    let rc = RootFindConfig::default();
    let levels = SHARPNESS_LEVELS;
    let mut margin = f64::INFINITY;
    let mut detail = Value::Null;
    let mut runs = Vec::new();
    for params in sharpness_params() {
        let seq = match sharpness_sequence(&params, &levels, &rc) {
            Ok(s) => s,
            Err(e) => return core_failure(0, e),
        };
        let ratios: Vec<f64> = seq.iter().map(|s| s.ratio).collect();
        let entry = json!({
            "p": params.p().get(), "f": params.mean(), "F": params.moment(), "k": params.k(),
            "levels": levels, "ratios": ratios,
        });
        for w in ratios.windows(2) {
            let d = w[1] - w[0];
            if d < margin {
                margin = d;
                detail = entry.clone();
            }
        }
        runs.push(entry);
    }
    if detail.is_null() {
        detail = json!(runs);
    }
    TrialOutcome { margin, skips: 0, detail }
}

fn with_pool<T: Send>(job: impl FnOnce() -> T + Send) -> T {
    let threads = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|n| *n > 0);
    match threads.and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(job),
        None => job(),
    }
}

/// Runs a suite. Outcomes are reduced in trial order: the reported worst case
/// is the smallest margin, ties going to the lowest trial index.
pub fn run_suite(suite: Suite, cfg: &TrialConfig) -> Result<InequalityReport, ConfigError> {
    cfg.validate()?;
    let outcomes: Vec<TrialOutcome> = if suite == Suite::Sharpness {
        vec![sharpness_outcome()]
    } else {
        with_pool(|| {
            (0..cfg.trials)
                .into_par_iter()
                .map(|t| run_trial(suite, cfg, t))
                .collect()
        })
    };
    let trials = if suite == Suite::Sharpness {
        (sharpness_params().len() * SHARPNESS_LEVELS.len()) as u64
    } else {
        cfg.trials
    };
    let mut min_margin = f64::INFINITY;
    let mut worst_case = Value::Null;
    let mut skips = 0;
    for o in outcomes {
        skips += o.skips;
        let m = if o.margin.is_nan() { f64::NEG_INFINITY } else { o.margin };
        if m < min_margin || worst_case.is_null() {
            if m < min_margin {
                min_margin = m;
            }
            worst_case = o.detail;
        }
    }
    let passed = min_margin >= -suite.slack(cfg);
    Ok(InequalityReport {
        name: suite.name().to_string(),
        trials,
        min_margin,
        worst_case,
        passed,
        precondition_skips: skips,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(trials: u64) -> TrialConfig {
        TrialConfig {
            trials,
            level: 6,
            ..TrialConfig::default()
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn config_validation() {
        assert!(TrialConfig { trials: 0, ..TrialConfig::default() }.validate().is_err());
        assert!(TrialConfig { level: 25, ..TrialConfig::default() }.validate().is_err());
        assert!(TrialConfig { p_grid: vec![], ..TrialConfig::default() }.validate().is_err());
        assert!(TrialConfig { p_grid: vec![1.0], ..TrialConfig::default() }.validate().is_err());
        assert!(TrialConfig { beta_grid: vec![0.0], ..TrialConfig::default() }.validate().is_err());
        assert!(TrialConfig { slack: -1.0, ..TrialConfig::default() }.validate().is_err());
        assert!(TrialConfig::default().validate().is_ok());
    }

    #[test]
    fn random_phi_has_unit_mean() {
        let mut rng = trial_rng(3, 0);
        for level in 0..8 {
            let (phi, _, _) = random_phi(&mut rng, level);
            assert!((phi.mean() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn trials_replay_exactly() {
        let cfg = small(20);
        for suite in [Suite::Lemma31, Suite::Ineq111, Suite::Carleson, Suite::Ineq612] {
            for t in [0, 7, 19] {
                assert_eq!(run_trial(suite, &cfg, t), run_trial(suite, &cfg, t));
            }
        }
    }

    #[test]
    fn small_suites_pass() {
        let cfg = small(40);
        for suite in Suite::ALL {
            if suite == Suite::Sharpness {
                continue;
            }
            let r = run_suite(suite, &cfg).unwrap();
            assert!(r.passed, "{}", r.to_json());
            assert_eq!(r.trials, 40);
        }
    }

    #[test]
    fn worst_case_tie_goes_to_first_trial() {
        let cfg = small(10);
        let r = run_suite(Suite::Lemma31, &cfg).unwrap();
        let worst = r.worst_case["trial"].as_u64().unwrap();
        let m = run_trial(Suite::Lemma31, &cfg, worst).margin;
        assert_eq!(m, r.min_margin);
        for t in 0..worst {
            assert!(run_trial(Suite::Lemma31, &cfg, t).margin > r.min_margin);
        }
    }
}
