use crate::error::{Error, Result};
use crate::model::{Decision, Hypothesis, SensorModel, TrustModel};
use crate::scalar::Real;

use super::{beats, check_inputs, glrt_decision, malicious_budget, mle_counts, BranchMaximum, RobotPrior};

/// Largest network the exhaustive search accepts.
pub const BRUTE_FORCE_LIMIT: usize = 20;

fn branch_log_likelihood<T: Real>(
    y: &[bool],
    a: &[usize],
    t: &[bool],
    branch: Hypothesis,
    sensor: &SensorModel<T>,
    trust: &TrustModel<T>,
    prior: Option<&RobotPrior<T>>,
) -> (T, T) {
    let (wrong, total) = mle_counts(y, t, branch);
    let p = if total == 0 {
        T::lit(0.5)
    } else {
        T::from_count(wrong) / T::from_count(total)
    };
    let mut ll = T::zero();
    for i in 0..y.len() {
        if t[i] {
            let p_one = sensor.p_report_one(branch);
            ll += trust.ln_legit(a[i]) + if y[i] { p_one.ln() } else { (T::one() - p_one).ln() };
            if let Some(pr) = prior {
                ll += pr.p_legit().ln();
            }
        } else {
            let wrong_report = y[i] != branch.bit();
            // the MLE never puts mass zero on an observed report
            ll += trust.ln_malicious(a[i]) + if wrong_report { p.ln() } else { (T::one() - p).ln() };
            if let Some(pr) = prior {
                ll += (T::one() - pr.p_legit()).ln();
            }
        }
    }
    (ll, p)
}

fn exhaustive_branch<T: Real>(
    y: &[bool],
    a: &[usize],
    branch: Hypothesis,
    sensor: &SensorModel<T>,
    trust: &TrustModel<T>,
    prior: Option<&RobotPrior<T>>,
    budget: usize,
) -> BranchMaximum<T> {
    let n = y.len();
    let mut best: Option<BranchMaximum<T>> = None;
    for mask in 0u32..(1u32 << n) {
        if (n - mask.count_ones() as usize) > budget {
            continue;
        }
        let t: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
        let (ll, p) = branch_log_likelihood(y, a, &t, branch, sensor, trust, prior);
        if best.as_ref().is_none_or(|b| beats(ll, b.log_likelihood)) {
            best = Some(BranchMaximum {
                log_likelihood: ll,
                t_hat: t,
                attacker_param: p,
            });
        }
    }
    best.expect("at least the all-legitimate vector is admissible")
}

fn brute<T: Real>(
    y: &[bool],
    a: &[usize],
    sensor: &SensorModel<T>,
    trust: &TrustModel<T>,
    prior: Option<&RobotPrior<T>>,
    budget: Option<usize>,
) -> Result<Decision<T>> {
    check_inputs(y, a, trust)?;
    if y.len() > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            n: y.len(),
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let budget = budget.unwrap_or(y.len());
    let h1 = exhaustive_branch(y, a, Hypothesis::H1, sensor, trust, prior, budget);
    let h0 = exhaustive_branch(y, a, Hypothesis::H0, sensor, trust, prior, budget);
    Ok(glrt_decision(h1, h0, sensor))
}

/// Generalized likelihood ratio test by enumeration of every trust vector,
/// each paired with its maximum-likelihood attacker parameter.
pub fn brute_force_glrt<T: Real>(
    y: &[bool],
    a: &[usize],
    sensor: &SensorModel<T>,
    trust: &TrustModel<T>,
) -> Result<Decision<T>> {
    brute(y, a, sensor, trust, None, None)
}

/// Exhaustive counterpart of [`super::aglrt_decide_with_prior`].
pub fn brute_force_glrt_with_prior<T: Real>(
    y: &[bool],
    a: &[usize],
    sensor: &SensorModel<T>,
    trust: &TrustModel<T>,
    prior: &RobotPrior<T>,
) -> Result<Decision<T>> {
    brute(y, a, sensor, trust, Some(prior), None)
}

/// Exhaustive counterpart of [`super::aglrt_decide_constrained`].
pub fn brute_force_glrt_constrained<T: Real>(
    y: &[bool],
    a: &[usize],
    sensor: &SensorModel<T>,
    trust: &TrustModel<T>,
    m_bar: T,
) -> Result<Decision<T>> {
    let budget = malicious_budget(m_bar, y.len())?;
    brute(y, a, sensor, trust, None, Some(budget))
}
