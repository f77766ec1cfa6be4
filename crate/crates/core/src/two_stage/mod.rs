//! Two Stage Approach: classify robots by a trust-value likelihood ratio test,
//! then fuse only the trusted reports.
//!
//! Thresholds are chosen once per configuration by minimizing the exact
//! worst-case error (every malicious report wrong, maximal malicious count).

mod bound;
mod mstar;
mod worst_case;

pub use bound::{error_upper_bound, BoundRegion};
pub use mstar::{m_star_exact, m_star_noiseless_exact, m_star_normal_approx, noiseless_error};
pub use worst_case::{fc_error_exact, worst_case_error, worst_case_error_at};
use worst_case::FcErrorEvaluator;

use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{check_len, Decision, Hypothesis, SensorModel, TrustModel};
use crate::scalar::{approx_eq, Real};

/// Classification threshold, tie-break acceptance probability and the
/// worst-case error they achieve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoStageThresholds<T> {
    pub gamma_t: T,
    pub p_t: T,
    pub worst_case_error: T,
}

impl<T: Real> TwoStageThresholds<T> {
    /// Caller-supplied thresholds; `worst_case_error` is left as NaN.
    pub fn new(gamma_t: T, p_t: T) -> Result<Self> {
        if !(gamma_t >= T::zero()) {
            return Err(Error::OutOfRange {
                name: "gamma_t",
                value: gamma_t.as_f64(),
                range: "[0, inf)",
            });
        }
        if !(p_t >= T::zero() && p_t <= T::one()) {
            return Err(Error::OutOfRange {
                name: "p_t",
                value: p_t.as_f64(),
                range: "[0, 1]",
            });
        }
        Ok(Self {
            gamma_t,
            p_t,
            worst_case_error: T::nan(),
        })
    }

    /// Thresholds that reject every robot.
    pub fn trust_nobody(trust: &TrustModel<T>) -> Self {
        let gamma_t = trust.ratios().iter().fold(T::zero(), |m, &r| m.max(r));
        Self {
            gamma_t,
            p_t: T::zero(),
            worst_case_error: T::nan(),
        }
    }

    /// Thresholds that accept every robot.
    pub fn trust_everyone(trust: &TrustModel<T>) -> Self {
        let gamma_t = trust.ratios().iter().fold(T::infinity(), |m, &r| m.min(r));
        Self {
            gamma_t,
            p_t: T::one(),
            worst_case_error: T::nan(),
        }
    }
}

/// Adversary budget and optimizer resolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorstCaseConfig<T> {
    m_bar: T,
    n: usize,
    delta_p: T,
}

impl<T: Real> WorstCaseConfig<T> {
    pub fn new(m_bar: T, n: usize) -> Result<Self> {
        Self::with_delta_p(m_bar, n, T::lit(0.01))
    }

    pub fn with_delta_p(m_bar: T, n: usize, delta_p: T) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyNetwork);
        }
        if !(m_bar >= T::zero() && m_bar <= T::one()) {
            return Err(Error::OutOfRange {
                name: "m_bar",
                value: m_bar.as_f64(),
                range: "[0, 1]",
            });
        }
        if !(delta_p > T::zero() && delta_p <= T::one()) {
            return Err(Error::OutOfRange {
                name: "delta_p",
                value: delta_p.as_f64(),
                range: "(0, 1]",
            });
        }
        Ok(Self { m_bar, n, delta_p })
    }

    pub fn m_bar(&self) -> T {
        self.m_bar
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn delta_p(&self) -> T {
        self.delta_p
    }

    /// `round(m_bar * n)`.
    pub fn malicious_count(&self) -> usize {
        malicious_count(self.m_bar, self.n)
    }

    pub fn legit_count(&self) -> usize {
        self.n - self.malicious_count()
    }

    /// `true` when `m_bar * n` is not an integer and had to be rounded.
    pub fn is_rounded(&self) -> bool {
        let x = self.m_bar * T::from_count(self.n);
        (x - x.round()).abs() > T::snap_tol()
    }

    /// `{0, δ, 2δ, .., 1}`; points are `k / K` so nested grids share values exactly.
    pub fn p_grid(&self) -> Vec<T> {
        p_grid(self.delta_p)
    }
}

pub(crate) fn malicious_count<T: Real>(m_bar: T, n: usize) -> usize {
    let x = (m_bar * T::from_count(n)).round();
    x.to_usize().unwrap_or(0).min(n)
}

pub(crate) fn p_grid<T: Real>(delta_p: T) -> Vec<T> {
    let inv = T::one() / delta_p;
    let k = inv.round();
    if (inv - k).abs() <= T::snap_tol() * inv {
        let k = k.to_usize().unwrap_or(1).max(1);
        let kt = T::from_count(k);
        return (0..=k).map(|i| T::from_count(i) / kt).collect();
    }
    let mut grid: Vec<T> = (0..)
        .map(|i| T::from_count(i) * delta_p)
        .take_while(|&p| p < T::one())
        .collect();
    grid.push(T::one());
    grid
}

/// Smallest integer `c` with `c >= x`, treating values within `T::snap_tol()`
/// of an integer as that integer.
pub(crate) fn ceil_snap<T: Real>(x: T) -> i64 {
    let r = x.round();
    let c = if (x - r).abs() <= T::snap_tol() * T::one().max(x.abs()) {
        r
    } else {
        x.ceil()
    };
    c.to_i64().unwrap_or(if c > T::zero() { i64::MAX / 4 } else { i64::MIN / 4 })
}

/// Minimum number of trusted `1` reports, out of `k` trusted robots, for the
/// fusion rule to decide `H1`.
pub(crate) fn ones_needed<T: Real>(k: usize, sensor: &SensorModel<T>) -> i64 {
    let w0 = sensor.w0();
    let w1 = sensor.w1();
    ceil_snap((sensor.gamma_ts() + T::from_count(k) * w0) / (w0 + w1))
}

/// Likelihood ratio `p(a | legitimate) / p(a | malicious)` of one symbol.
pub fn trust_likelihood_ratio<T: Real>(symbol: usize, trust: &TrustModel<T>) -> Result<T> {
    trust.likelihood_ratio(symbol)
}

/// Per-symbol classification outcome: accept, reject, or sits on the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Above,
    Below,
    Tie,
}

fn side<T: Real>(ratio: T, gamma_t: T) -> Side {
    if approx_eq(ratio, gamma_t) {
        Side::Tie
    } else if ratio > gamma_t {
        Side::Above
    } else {
        Side::Below
    }
}

/// First-stage classification. A tie draws one uniform variate from `rng`;
/// other robots consume no randomness.
pub fn classify_trust<T: Real, R: Rng + ?Sized>(
    symbols: &[usize],
    thresholds: &TwoStageThresholds<T>,
    trust: &TrustModel<T>,
    rng: &mut R,
) -> Result<Vec<bool>> {
    symbols
        .iter()
        .map(|&a| {
            let ratio = trust.likelihood_ratio(a)?;
            Ok(match side(ratio, thresholds.gamma_t) {
                Side::Above => true,
                Side::Below => false,
                Side::Tie => T::lit(rng.random::<f64>()) < thresholds.p_t,
            })
        })
        .collect()
}

/// `(P_trust,L, P_trust,M)`: probability that a legitimate (malicious) robot is trusted.
pub fn trust_probabilities<T: Real>(thresholds: &TwoStageThresholds<T>, trust: &TrustModel<T>) -> (T, T) {
    let mut p_l = T::zero();
    let mut p_m = T::zero();
    for (a, &ratio) in trust.ratios().iter().enumerate() {
        let w = match side(ratio, thresholds.gamma_t) {
            Side::Above => T::one(),
            Side::Below => continue,
            Side::Tie => thresholds.p_t,
        };
        p_l += w * trust.pmf_legit()[a];
        p_m += w * trust.pmf_malicious()[a];
    }
    (p_l.min(T::one()), p_m.min(T::one()))
}

/// Second-stage fusion of the trusted reports.
///
/// Decides `H1` iff `Σ t̂_i [w1 y_i - w0 (1 - y_i)] >= ln(prior_h0 / prior_h1)`.
/// The comparison is carried out on the equivalent integer count of trusted
/// `1` reports so exact ties are recognized.
pub fn fuse_trusted<T: Real>(y: &[bool], t_hat: &[bool], sensor: &SensorModel<T>) -> Result<Decision<T>> {
    check_len("trust estimate vs reports", t_hat.len(), y.len())?;
    let mut k = 0usize;
    let mut ones = 0i64;
    for (&yi, &ti) in y.iter().zip(t_hat) {
        if ti {
            k += 1;
            ones += yi as i64;
        }
    }
    let hypothesis = Hypothesis::from_bit(ones >= ones_needed(k, sensor));
    Ok(Decision {
        est_trust: Some(t_hat.to_vec()),
        ..Decision::plain(hypothesis)
    })
}

/// Exhaustive search over `Γ_t × Γ_p` for the thresholds with the smallest
/// worst-case error. Ties keep the first candidate in ascending order.
///
/// When no candidate beats deciding by the priors alone, the trust-nobody
/// thresholds are returned.
pub fn optimize_thresholds<T: Real>(
    cfg: &WorstCaseConfig<T>,
    sensor: &SensorModel<T>,
    trust: &TrustModel<T>,
) -> TwoStageThresholds<T> {
    let gammas = gamma_candidates(trust);
    let grid = cfg.p_grid();
    let n_l = cfg.legit_count();
    let n_m = cfg.malicious_count();

    let eval = FcErrorEvaluator::new(n_l, n_m, sensor);
    let mut best: Option<TwoStageThresholds<T>> = None;
    for &gamma_t in &gammas {
        for &p_t in &grid {
            let mut cand = TwoStageThresholds {
                gamma_t,
                p_t,
                worst_case_error: T::nan(),
            };
            let (p_l, p_m) = trust_probabilities(&cand, trust);
            cand.worst_case_error = eval.error(p_l, p_m, T::one(), T::one());
            if best.is_none_or(|b| cand.worst_case_error < b.worst_case_error) {
                best = Some(cand);
            }
        }
    }
    let best = best.expect("non-empty candidate grid");
    let floor = sensor.min_prior();
    if best.worst_case_error >= floor - T::rel_tol() * floor {
        return TwoStageThresholds {
            worst_case_error: floor,
            ..TwoStageThresholds::trust_nobody(trust)
        };
    }
    best
}

/// Distinct likelihood ratios of the alphabet in ascending order.
pub fn gamma_candidates<T: Real>(trust: &TrustModel<T>) -> Vec<T> {
    let mut v = trust.ratios().to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite ratios"));
    v.dedup_by(|a, b| approx_eq(*a, *b));
    v
}

/// Classification followed by fusion.
pub fn two_stage_decide<T: Real, R: Rng + ?Sized>(
    y: &[bool],
    a: &[usize],
    thresholds: &TwoStageThresholds<T>,
    sensor: &SensorModel<T>,
    trust: &TrustModel<T>,
    rng: &mut R,
) -> Result<Decision<T>> {
    check_len("trust symbols vs reports", a.len(), y.len())?;
    let t_hat = classify_trust(a, thresholds, trust, rng)?;
    fuse_trusted(y, &t_hat, sensor)
}
