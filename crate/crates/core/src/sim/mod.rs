//! Seeded Monte Carlo trials and a paired multi-method experiment runner.

pub mod rng;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::aglrt::{aglrt_decide, aglrt_decide_constrained, aglrt_decide_with_prior, RobotPrior};
use crate::baselines::{oblivious_decide, oracle_decide, ReputationState};
use crate::error::{Error, Result};
use crate::model::{AttackModel, Hypothesis, NetworkObservation, SensorModel, TrustModel};
use crate::scalar::Real;
use crate::two_stage::{optimize_thresholds, two_stage_decide, TwoStageThresholds, WorstCaseConfig};

use self::rng::{purpose, stream};

/// Network, models and seed of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig<T> {
    pub n: usize,
    pub malicious_count: usize,
    pub sensor: SensorModel<T>,
    pub trust: TrustModel<T>,
    pub attack: AttackModel<T>,
    pub seed: u64,
}

impl<T: Real> ScenarioConfig<T> {
    pub fn new(
        n: usize,
        malicious_count: usize,
        sensor: SensorModel<T>,
        trust: TrustModel<T>,
        attack: AttackModel<T>,
        seed: u64,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyNetwork);
        }
        if malicious_count > n {
            return Err(Error::Domain(format!(
                "malicious_count = {malicious_count} exceeds n = {n}"
            )));
        }
        Ok(Self {
            n,
            malicious_count,
            sensor,
            trust,
            attack,
            seed,
        })
    }

    /// True malicious proportion.
    pub fn proportion(&self) -> T {
        T::from_count(self.malicious_count) / T::from_count(self.n)
    }

    /// Copy with a different number of malicious robots.
    pub fn with_malicious_count(&self, malicious_count: usize) -> Result<Self> {
        Self::new(
            self.n,
            malicious_count,
            self.sensor,
            self.trust.clone(),
            self.attack,
            self.seed,
        )
    }

    /// Legitimacy of each index (`true` = legitimate): the first
    /// `malicious_count` slots are malicious, then a seeded shuffle.
    ///
    /// The placement is fixed for the whole experiment so that history-based
    /// detectors see persistent robot identities.
    pub fn placement(&self) -> Vec<bool> {
        let mut t: Vec<bool> = (0..self.n).map(|i| i >= self.malicious_count).collect();
        t.shuffle(&mut stream(self.seed, 0, purpose::PLACEMENT));
        t
    }
}

fn bernoulli<T: Real, R: Rng + ?Sized>(rng: &mut R, p: T) -> bool {
    T::lit(rng.random::<f64>()) < p
}

fn draw_symbol<T: Real, R: Rng + ?Sized>(rng: &mut R, pmf: &[T]) -> usize {
    let u = T::lit(rng.random::<f64>());
    let mut acc = T::zero();
    for (i, &p) in pmf.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    pmf.len() - 1
}

fn sample_with_placement<T: Real>(cfg: &ScenarioConfig<T>, truth_t: Vec<bool>, trial_index: u64) -> NetworkObservation {
    let mut rng = stream(cfg.seed, trial_index, purpose::TRIAL);
    let event = Hypothesis::from_bit(bernoulli(&mut rng, cfg.sensor.prior_h1()));
    let mut y = Vec::with_capacity(cfg.n);
    let mut a = Vec::with_capacity(cfg.n);
    for &legit in &truth_t {
        if legit {
            y.push(bernoulli(&mut rng, cfg.sensor.p_report_one(event)));
            a.push(draw_symbol(&mut rng, cfg.trust.pmf_legit()));
        } else {
            let p_one = match event {
                Hypothesis::H0 => cfg.attack.pre_fa(),
                Hypothesis::H1 => T::one() - cfg.attack.pre_md(),
            };
            let sensed = bernoulli(&mut rng, p_one);
            let flip = bernoulli(&mut rng, cfg.attack.p_f());
            y.push(sensed ^ flip);
            a.push(draw_symbol(&mut rng, cfg.trust.pmf_malicious()));
        }
    }
    NetworkObservation {
        y,
        a,
        truth_t,
        truth_event: event,
    }
}

/// One trial, fully determined by `(cfg.seed, trial_index)`.
pub fn sample_trial<T: Real>(cfg: &ScenarioConfig<T>, trial_index: u64) -> NetworkObservation {
    sample_with_placement(cfg, cfg.placement(), trial_index)
}

/// Detector evaluated by [`run_experiment`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method<T> {
    Oracle,
    Oblivious,
    /// Thresholds optimized once per experiment for `m_bar`, defaulting to
    /// the true malicious proportion.
    TwoStage { m_bar: Option<T> },
    Aglrt,
    /// Robot prior `p_legit`, defaulting to one minus the true malicious
    /// proportion clipped to `[0.01, 0.99]`.
    AglrtWithPrior { p_legit: Option<T> },
    /// Budget `floor(m_bar N)`, defaulting to the true malicious proportion.
    AglrtConstrained { m_bar: Option<T> },
    Reputation { window: usize, eta: T },
}

impl<T: Real> Method<T> {
    /// Single-history reputation filter: one disagreement excludes a robot.
    pub fn baseline1() -> Self {
        Method::Reputation {
            window: 1,
            eta: T::lit(0.5),
        }
    }

    /// Five-test reputation filter: three disagreements exclude a robot.
    pub fn baseline5() -> Self {
        Method::Reputation {
            window: 5,
            eta: T::lit(2.5),
        }
    }

    /// Stable identifier used in reports and CSV files.
    pub fn name(&self) -> String {
        match self {
            Method::Oracle => "oracle".into(),
            Method::Oblivious => "oblivious".into(),
            Method::TwoStage { .. } => "two_stage".into(),
            Method::Aglrt => "aglrt".into(),
            Method::AglrtWithPrior { .. } => "aglrt_prior".into(),
            Method::AglrtConstrained { .. } => "aglrt_constrained".into(),
            Method::Reputation { window, eta } => format!("reputation_t{window}_eta{eta}"),
        }
    }

    fn is_sequential(&self) -> bool {
        matches!(self, Method::Reputation { .. })
    }
}

/// Trial and error counts of one method.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MethodReport {
    pub method: String,
    pub trials: u64,
    pub errors: u64,
}

impl MethodReport {
    pub fn error_rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.errors as f64 / self.trials as f64
        }
    }

    /// Half-width of the 95% normal-approximation interval for the error rate.
    pub fn ci_halfwidth(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        let p = self.error_rate();
        1.96 * (p * (1.0 - p) / self.trials as f64).sqrt()
    }

    pub fn percent_error(&self) -> f64 {
        100.0 * self.error_rate()
    }
}

/// Per-method results of one experiment, in the order the methods were given.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorReport {
    pub methods: Vec<MethodReport>,
}

impl ErrorReport {
    pub fn get(&self, name: &str) -> Option<&MethodReport> {
        self.methods.iter().find(|m| m.method == name)
    }
}

/// Method with everything that depends only on the configuration resolved.
enum Prepared<T> {
    Oracle,
    Oblivious,
    TwoStage(TwoStageThresholds<T>),
    Aglrt,
    AglrtWithPrior(RobotPrior<T>),
    AglrtConstrained(T),
    Reputation { window: usize, eta: T },
}

fn prepare<T: Real>(cfg: &ScenarioConfig<T>, m: &Method<T>) -> Result<Prepared<T>> {
    let m_true = cfg.proportion();
    Ok(match *m {
        Method::Oracle => Prepared::Oracle,
        Method::Oblivious => Prepared::Oblivious,
        Method::TwoStage { m_bar } => {
            let wc = WorstCaseConfig::new(m_bar.unwrap_or(m_true), cfg.n)?;
            Prepared::TwoStage(optimize_thresholds(&wc, &cfg.sensor, &cfg.trust))
        }
        Method::Aglrt => Prepared::Aglrt,
        Method::AglrtWithPrior { p_legit } => {
            let p = p_legit.unwrap_or_else(|| (T::one() - m_true).max(T::lit(0.01)).min(T::lit(0.99)));
            Prepared::AglrtWithPrior(RobotPrior::new(p)?)
        }
        Method::AglrtConstrained { m_bar } => Prepared::AglrtConstrained(m_bar.unwrap_or(m_true)),
        Method::Reputation { window, eta } => {
            ReputationState::new(cfg.n, window, eta)?;
            Prepared::Reputation { window, eta }
        }
    })
}

fn is_error<T: Real>(
    prepared: &Prepared<T>,
    obs: &NetworkObservation,
    cfg: &ScenarioConfig<T>,
    seed_tag: u64,
    trial: u64,
) -> Result<bool> {
    let (s, tr) = (&cfg.sensor, &cfg.trust);
    let d = match prepared {
        Prepared::Oracle => oracle_decide(obs, s)?,
        Prepared::Oblivious => oblivious_decide(&obs.y, s)?,
        Prepared::TwoStage(thr) => {
            let mut rng = stream(cfg.seed, trial, seed_tag);
            two_stage_decide(&obs.y, &obs.a, thr, s, tr, &mut rng)?
        }
        Prepared::Aglrt => aglrt_decide(&obs.y, &obs.a, s, tr)?,
        Prepared::AglrtWithPrior(p) => aglrt_decide_with_prior(&obs.y, &obs.a, s, tr, p)?,
        Prepared::AglrtConstrained(m) => aglrt_decide_constrained(&obs.y, &obs.a, s, tr, *m)?,
        Prepared::Reputation { .. } => unreachable!("sequential methods are evaluated separately"),
    };
    Ok(d.hypothesis != obs.truth_event)
}

/// Runs `n_trials` paired trials: every method sees the same observation in
/// each trial. Stateless methods run on the current rayon pool; reputation
/// filters run sequentially in trial order. The report does not depend on the
/// number of worker threads.
pub fn run_experiment<T: Real>(cfg: &ScenarioConfig<T>, n_trials: u64, methods: &[Method<T>]) -> Result<ErrorReport> {
    if n_trials == 0 {
        return Err(Error::Domain("n_trials must be at least 1".into()));
    }
    let prepared: Vec<Prepared<T>> = methods.iter().map(|m| prepare(cfg, m)).collect::<Result<_>>()?;
    let placement = cfg.placement();
    let parallel: Vec<usize> = (0..methods.len()).filter(|&i| !methods[i].is_sequential()).collect();

    let observations: Vec<NetworkObservation> = (0..n_trials)
        .into_par_iter()
        .map(|k| sample_with_placement(cfg, placement.clone(), k))
        .collect();

    let mut errors = vec![0u64; methods.len()];
    let per_trial: Vec<Vec<bool>> = observations
        .par_iter()
        .enumerate()
        .map(|(k, obs)| {
            parallel
                .iter()
                .map(|&i| is_error(&prepared[i], obs, cfg, purpose::METHOD_BASE + i as u64, k as u64))
                .collect::<Result<Vec<bool>>>()
        })
        .collect::<Result<_>>()?;
    for row in &per_trial {
        for (slot, &err) in parallel.iter().zip(row) {
            errors[*slot] += err as u64;
        }
    }

    for (i, p) in prepared.iter().enumerate() {
        if let Prepared::Reputation { window, eta } = p {
            let mut state = ReputationState::new(cfg.n, *window, *eta)?;
            for obs in &observations {
                let d = state.decide(&obs.y, &cfg.sensor)?;
                errors[i] += (d.hypothesis != obs.truth_event) as u64;
            }
        }
    }

    Ok(ErrorReport {
        methods: methods
            .iter()
            .zip(errors)
            .map(|(m, e)| MethodReport {
                method: m.name(),
                trials: n_trials,
                errors: e,
            })
            .collect(),
    })
}

/// Runs [`run_experiment`] at `round(proportion * n)` malicious robots for
/// each proportion. Methods whose parameters default to the true proportion
/// are re-resolved at every point.
pub fn sweep_malicious_proportion<T: Real>(
    base: &ScenarioConfig<T>,
    proportions: &[T],
    n_trials: u64,
    methods: &[Method<T>],
) -> Result<Vec<(T, ErrorReport)>> {
    proportions
        .iter()
        .map(|&m| {
            if !(m >= T::zero() && m <= T::one()) {
                return Err(Error::OutOfRange {
                    name: "proportion",
                    value: m.as_f64(),
                    range: "[0, 1]",
                });
            }
            let count = crate::two_stage::malicious_count(m, base.n);
            let cfg = base.with_malicious_count(count)?;
            Ok((m, run_experiment(&cfg, n_trials, methods)?))
        })
        .collect()
}
