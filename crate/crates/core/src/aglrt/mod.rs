//! Adversarial generalized likelihood ratio test.
//!
//! Each hypothesis branch maximizes `Pr(a | t) Pr(y | H, t, P)` jointly over
//! the trust vector `t` and the attacker's error probability `P`. For a fixed
//! `P` the maximization over `t` separates per robot, and the optimal `P` for
//! any `t` is an empirical frequency, so scanning `P` over fractions with
//! denominators up to `N` is exact.

mod brute;

pub use brute::{
    brute_force_glrt, brute_force_glrt_constrained, brute_force_glrt_with_prior, BRUTE_FORCE_LIMIT,
};

use std::collections::BTreeSet;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::model::{check_len, Decision, Hypothesis, SensorModel, TrustModel};
use crate::scalar::Real;

/// Prior probability that any given robot is legitimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobotPrior<T> {
    p_legit: T,
}

impl<T: Real> RobotPrior<T> {
    pub fn new(p_legit: T) -> Result<Self> {
        if p_legit > T::zero() && p_legit < T::one() {
            Ok(Self { p_legit })
        } else {
            Err(Error::OutOfRange {
                name: "p_legit",
                value: p_legit.as_f64(),
                range: "(0, 1)",
            })
        }
    }

    pub fn p_legit(&self) -> T {
        self.p_legit
    }
}

/// Maximizer of one hypothesis branch.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchMaximum<T> {
    pub log_likelihood: T,
    /// `true` marks a robot judged legitimate.
    pub t_hat: Vec<bool>,
    /// Attacker missed-detection (H1 branch) or false-alarm (H0 branch) probability.
    pub attacker_param: T,
}

/// All fractions `num / den` with `1 <= den <= n`, `0 <= num <= den`, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet<T> {
    exact: Vec<Ratio<u64>>,
    values: Vec<T>,
    ln_p: Vec<T>,
    ln_q: Vec<T>,
}

impl<T: Real> CandidateSet<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn fractions(&self) -> &[Ratio<u64>] {
        &self.exact
    }
}

/// Builds the candidate set for a network of `n` robots. `n = 0` is treated as 1.
pub fn candidate_set<T: Real>(n: usize) -> CandidateSet<T> {
    let n = n.max(1) as u64;
    let mut set = BTreeSet::new();
    for den in 1..=n {
        for num in 0..=den {
            set.insert(Ratio::new(num, den));
        }
    }
    let exact: Vec<Ratio<u64>> = set.into_iter().collect();
    let mut values = Vec::with_capacity(exact.len());
    let mut ln_p = Vec::with_capacity(exact.len());
    let mut ln_q = Vec::with_capacity(exact.len());
    for r in &exact {
        let num = T::lit(*r.numer() as f64);
        let den = T::lit(*r.denom() as f64);
        values.push(num / den);
        ln_p.push(ln_fraction(num, den));
        ln_q.push(ln_fraction(den - num, den));
    }
    CandidateSet {
        exact,
        values,
        ln_p,
        ln_q,
    }
}

fn ln_fraction<T: Real>(num: T, den: T) -> T {
    if num == T::zero() {
        T::neg_infinity()
    } else {
        num.ln() - den.ln()
    }
}

fn ln_prob<T: Real>(p: T) -> (T, T) {
    let ln = |x: T| if x == T::zero() { T::neg_infinity() } else { x.ln() };
    (ln(p), ln(T::one() - p))
}

/// Log-probability that a legitimate robot sends `y` under `branch`.
#[inline]
fn ln_legit_report<T: Real>(y: bool, branch: Hypothesis, sensor: &SensorModel<T>) -> T {
    let p_one = sensor.p_report_one(branch);
    if y {
        p_one.ln()
    } else {
        (T::one() - p_one).ln()
    }
}

/// A report is "wrong" for the branch when it contradicts the branch's event.
#[inline]
fn is_wrong(y: bool, branch: Hypothesis) -> bool {
    y != branch.bit()
}

/// Per-robot log scores `(ln c_L, ln c_M)` for attacker error probability
/// with logs `(ln_p, ln_q) = (ln P, ln (1 - P))`.
#[inline]
#[allow(clippy::too_many_arguments)]
fn scores<T: Real>(
    y: bool,
    a: usize,
    ln_p: T,
    ln_q: T,
    branch: Hypothesis,
    sensor: &SensorModel<T>,
    trust: &TrustModel<T>,
    prior: Option<&RobotPrior<T>>,
) -> (T, T) {
    let mut c_l = trust.ln_legit(a) + ln_legit_report(y, branch, sensor);
    let mut c_m = trust.ln_malicious(a) + if is_wrong(y, branch) { ln_p } else { ln_q };
    if let Some(pr) = prior {
        c_l += pr.p_legit.ln();
        c_m += (T::one() - pr.p_legit).ln();
    }
    (c_l, c_m)
}

/// Per-branch maximization for a fixed attacker parameter, optionally with
/// a robot prior and a cap on the number of robots labelled malicious.
#[allow(clippy::too_many_arguments)]
fn branch_at<T: Real>(
    y: &[bool],
    a: &[usize],
    ln_p: T,
    ln_q: T,
    branch: Hypothesis,
    sensor: &SensorModel<T>,
    trust: &TrustModel<T>,
    prior: Option<&RobotPrior<T>>,
    budget: Option<usize>,
) -> (T, Vec<bool>) {
    let pairs: Vec<(T, T)> = y
        .iter()
        .zip(a)
        .map(|(&yi, &ai)| scores(yi, ai, ln_p, ln_q, branch, sensor, trust, prior))
        .collect();
    let mut t_hat: Vec<bool> = pairs.iter().map(|&(c_l, c_m)| c_l >= c_m).collect();

    if let Some(budget) = budget {
        let flagged = t_hat.iter().filter(|&&t| !t).count();
        if flagged > budget {
            // keep the `budget` robots whose malicious label gains the most
            let mut gain: Vec<(usize, T)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| !t_hat[*i])
                .map(|(i, &(c_l, c_m))| (i, c_m - c_l))
                .collect();
            gain.sort_by(|x, y| y.1.partial_cmp(&x.1).expect("comparable gains"));
            for &(i, _) in gain.iter().skip(budget) {
                t_hat[i] = true;
            }
        }
    }

    let ll = pairs
        .iter()
        .zip(&t_hat)
        .fold(T::zero(), |acc, (&(c_l, c_m), &t)| acc + if t { c_l } else { c_m });
    (ll, t_hat)
}

fn check_inputs<T: Real>(y: &[bool], a: &[usize], trust: &TrustModel<T>) -> Result<()> {
    if y.is_empty() {
        return Err(Error::EmptyNetwork);
    }
    check_len("trust symbols vs reports", a.len(), y.len())?;
    for &s in a {
        trust.check_symbol(s)?;
    }
    Ok(())
}

fn check_probability<T: Real>(p: T) -> Result<()> {
    if p >= T::zero() && p <= T::one() {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name: "attacker_p",
            value: p.as_f64(),
            range: "[0, 1]",
        })
    }
}

/// Optimal trust vector for a fixed attacker parameter.
///
/// Robot `i` is labelled legitimate iff `c_L,i >= c_M,i`.
pub fn inner_max<T: Real>(
    y: &[bool],
    a: &[usize],
    attacker_p: T,
    branch: Hypothesis,
    sensor: &SensorModel<T>,
    trust: &TrustModel<T>,
) -> Result<BranchMaximum<T>> {
    check_inputs(y, a, trust)?;
    check_probability(attacker_p)?;
    let (ln_p, ln_q) = ln_prob(attacker_p);
    let (log_likelihood, t_hat) = branch_at(y, a, ln_p, ln_q, branch, sensor, trust, None, None);
    Ok(BranchMaximum {
        log_likelihood,
        t_hat,
        attacker_param: attacker_p,
    })
}

/// Budget-limited variant of [`inner_max`]: at most `floor(m_bar N)` robots
/// are labelled malicious, chosen by largest `ln c_M,i - ln c_L,i > 0`.
#[allow(clippy::too_many_arguments)]
pub fn constrained_inner_max<T: Real>(
    y: &[bool],
    a: &[usize],
    attacker_p: T,
    branch: Hypothesis,
    sensor: &SensorModel<T>,
    trust: &TrustModel<T>,
    m_bar: T,
) -> Result<BranchMaximum<T>> {
    check_inputs(y, a, trust)?;
    check_probability(attacker_p)?;
    let budget = malicious_budget(m_bar, y.len())?;
    let (ln_p, ln_q) = ln_prob(attacker_p);
    let (log_likelihood, t_hat) = branch_at(y, a, ln_p, ln_q, branch, sensor, trust, None, Some(budget));
    Ok(BranchMaximum {
        log_likelihood,
        t_hat,
        attacker_param: attacker_p,
    })
}

/// `floor(m_bar n)`, with products within `T::snap_tol()` of an integer snapped to it.
pub fn malicious_budget<T: Real>(m_bar: T, n: usize) -> Result<usize> {
    if !(m_bar >= T::zero() && m_bar <= T::one()) {
        return Err(Error::OutOfRange {
            name: "m_bar",
            value: m_bar.as_f64(),
            range: "[0, 1]",
        });
    }
    let x = m_bar * T::from_count(n);
    let b = (x + T::snap_tol()).floor();
    Ok(b.to_usize().unwrap_or(0).min(n))
}

/// Maximum-likelihood attacker parameter for a fixed trust vector: the
/// fraction of robots labelled malicious whose report contradicts `branch`.
/// Returns 0.5 when no robot is labelled malicious.
pub fn mle_attacker_param<T: Real>(y: &[bool], t: &[bool], branch: Hypothesis) -> Result<T> {
    check_len("trust vector vs reports", t.len(), y.len())?;
    let (wrong, total) = mle_counts(y, t, branch);
    if total == 0 {
        return Ok(T::lit(0.5));
    }
    Ok(T::from_count(wrong) / T::from_count(total))
}

pub(crate) fn mle_counts(y: &[bool], t: &[bool], branch: Hypothesis) -> (usize, usize) {
    let mut wrong = 0;
    let mut total = 0;
    for (&yi, &ti) in y.iter().zip(t) {
        if !ti {
            total += 1;
            wrong += is_wrong(yi, branch) as usize;
        }
    }
    (wrong, total)
}

/// `a` strictly beats `b` beyond the log-likelihood tie tolerance.
#[inline]
pub(crate) fn beats<T: Real>(a: T, b: T) -> bool {
    if b == T::neg_infinity() {
        return a > b;
    }
    a > b + T::tie_tol() * T::one().max(b.abs())
}

fn maximize_branch<T: Real>(
    y: &[bool],
    a: &[usize],
    branch: Hypothesis,
    sensor: &SensorModel<T>,
    trust: &TrustModel<T>,
    prior: Option<&RobotPrior<T>>,
    budget: Option<usize>,
) -> BranchMaximum<T> {
    let cands = candidate_set::<T>(y.len());
    let mut best: Option<BranchMaximum<T>> = None;
    for k in 0..cands.len() {
        let (ll, t_hat) = branch_at(y, a, cands.ln_p[k], cands.ln_q[k], branch, sensor, trust, prior, budget);
        if best.as_ref().is_none_or(|b| beats(ll, b.log_likelihood)) {
            best = Some(BranchMaximum {
                log_likelihood: ll,
                t_hat,
                attacker_param: cands.values[k],
            });
        }
    }
    best.expect("candidate set contains 0 and 1")
}

/// Compares the two branch maxima against `ln(prior_h0 / prior_h1)`.
/// Equality within the tie tolerance selects `H0`.
pub(crate) fn glrt_decision<T: Real>(
    h1: BranchMaximum<T>,
    h0: BranchMaximum<T>,
    sensor: &SensorModel<T>,
) -> Decision<T> {
    let lhs = h1.log_likelihood - h0.log_likelihood;
    let scale = T::one().max(h1.log_likelihood.abs()).max(h0.log_likelihood.abs());
    let hypothesis = Hypothesis::from_bit(lhs - sensor.gamma_ts() > T::tie_tol() * scale);
    let chosen = if hypothesis.bit() { &h1 } else { &h0 };
    Decision {
        hypothesis,
        est_trust: Some(chosen.t_hat.clone()),
        est_attack_param: Some(chosen.attacker_param),
        log_likelihoods: Some((h1.log_likelihood, h0.log_likelihood)),
        branches: Some((h1, h0)),
    }
}

fn decide<T: Real>(
    y: &[bool],
    a: &[usize],
    sensor: &SensorModel<T>,
    trust: &TrustModel<T>,
    prior: Option<&RobotPrior<T>>,
    budget: Option<usize>,
) -> Result<Decision<T>> {
    check_inputs(y, a, trust)?;
    let h1 = maximize_branch(y, a, Hypothesis::H1, sensor, trust, prior, budget);
    let h0 = maximize_branch(y, a, Hypothesis::H0, sensor, trust, prior, budget);
    Ok(glrt_decision(h1, h0, sensor))
}

/// A-GLRT decision. `H1` iff `ln L(H1) - ln L(H0) > ln(prior_h0 / prior_h1)`.
pub fn aglrt_decide<T: Real>(
    y: &[bool],
    a: &[usize],
    sensor: &SensorModel<T>,
    trust: &TrustModel<T>,
) -> Result<Decision<T>> {
    decide(y, a, sensor, trust, None, None)
}

/// A-GLRT with a known per-robot legitimacy prior folded into the scores.
/// The decision threshold is unchanged.
pub fn aglrt_decide_with_prior<T: Real>(
    y: &[bool],
    a: &[usize],
    sensor: &SensorModel<T>,
    trust: &TrustModel<T>,
    prior: &RobotPrior<T>,
) -> Result<Decision<T>> {
    decide(y, a, sensor, trust, Some(prior), None)
}

/// A-GLRT restricted to trust vectors with at most `floor(m_bar N)` malicious labels.
pub fn aglrt_decide_constrained<T: Real>(
    y: &[bool],
    a: &[usize],
    sensor: &SensorModel<T>,
    trust: &TrustModel<T>,
    m_bar: T,
) -> Result<Decision<T>> {
    let budget = malicious_budget(m_bar, y.len())?;
    decide(y, a, sensor, trust, None, Some(budget))
}
