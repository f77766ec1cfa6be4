use crate::error::Result;
use crate::model::prob::{binomial_pmf_unchecked, gaussian_q};
use crate::model::{SensorModel, TrustModel};
use crate::scalar::Real;

use super::{optimize_thresholds, p_grid, WorstCaseConfig};

fn reaches_floor<T: Real>(pe: T, floor: T) -> bool {
    pe >= floor - T::rel_tol() * floor
}

/// Critical malicious proportion: the first `m_bar` on the grid
/// `{0, delta_m, .., 1}` at which the optimized worst-case error reaches
/// `min(prior_h0, prior_h1)`, i.e. the Two Stage Approach stops trusting anyone.
pub fn m_star_exact<T: Real>(
    n: usize,
    sensor: &SensorModel<T>,
    trust: &TrustModel<T>,
    delta_m: T,
    delta_p: T,
) -> Result<T> {
    let floor = sensor.min_prior();
    for m_bar in p_grid(delta_m) {
        let cfg = WorstCaseConfig::with_delta_p(m_bar, n, delta_p)?;
        let thr = optimize_thresholds(&cfg, sensor, trust);
        if reaches_floor(thr.worst_case_error, floor) {
            return Ok(m_bar);
        }
    }
    Ok(T::one())
}

/// Error of trust-filtered fusion with noiseless legitimate sensors under the
/// worst-case attack: the decision is wrong when more malicious than
/// legitimate robots are trusted, and a tie is decided by the priors.
pub fn noiseless_error<T: Real>(p_trust_l: T, p_trust_m: T, n_legit: usize, n_malicious: usize, prior_h0: T, prior_h1: T) -> T {
    let k_l: Vec<T> = (0..=n_legit as u64)
        .map(|k| binomial_pmf_unchecked(k, n_legit as u64, p_trust_l))
        .collect();
    let k_m: Vec<T> = (0..=n_malicious as u64)
        .map(|k| binomial_pmf_unchecked(k, n_malicious as u64, p_trust_m))
        .collect();
    let mut above = T::zero();
    let mut tie = T::zero();
    for (l, &pl) in k_l.iter().enumerate() {
        for (m, &pm) in k_m.iter().enumerate() {
            if m > l {
                above += pl * pm;
            } else if m == l {
                tie += pl * pm;
            }
        }
    }
    // a zero score is compared against ln(prior_h0 / prior_h1)
    let tie_h1 = prior_h0 <= prior_h1;
    let p_fa = above + if tie_h1 { tie } else { T::zero() };
    let p_md = above + if tie_h1 { T::zero() } else { tie };
    prior_h0 * p_fa + prior_h1 * p_md
}

/// Noiseless-sensor critical proportion from the exact distribution of
/// `K_M - K_L`, scanned over `m_bar = k / n`.
pub fn m_star_noiseless_exact<T: Real>(p_trust_l: T, p_trust_m: T, n: usize, prior_h0: T, prior_h1: T) -> T {
    let floor = prior_h0.min(prior_h1);
    for n_m in 0..=n {
        let pe = noiseless_error(p_trust_l, p_trust_m, n - n_m, n_m, prior_h0, prior_h1);
        if reaches_floor(pe, floor) {
            return T::from_count(n_m) / T::from_count(n);
        }
    }
    T::one()
}

/// Normal approximation of the noiseless-sensor critical proportion over the
/// grid `{0, delta_m, .., 1}`.
///
/// `K_M - K_L` is replaced by a Gaussian with matching mean and variance;
/// the false-alarm term uses a continuity correction of one half.
pub fn m_star_normal_approx<T: Real>(p_trust_l: T, p_trust_m: T, n: usize, prior_h0: T, prior_h1: T, delta_m: T) -> T {
    let floor = prior_h0.min(prior_h1);
    let nt = T::from_count(n);
    let half = T::lit(0.5);
    for m_bar in p_grid(delta_m) {
        let mu = m_bar * nt * (p_trust_l + p_trust_m) - nt * p_trust_l;
        let var = m_bar * nt * p_trust_m * (T::one() - p_trust_m)
            + (T::one() - m_bar) * nt * p_trust_l * (T::one() - p_trust_l);
        let exceeds = |z: T| {
            if var > T::zero() {
                gaussian_q((z - mu) / var.sqrt())
            } else if mu > z {
                T::one()
            } else {
                T::zero()
            }
        };
        let pe = prior_h0 * exceeds(-half) + prior_h1 * exceeds(T::zero());
        if reaches_floor(pe, floor) {
            return m_bar;
        }
    }
    T::one()
}
