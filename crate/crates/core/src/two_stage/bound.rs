use crate::error::{Error, Result};
use crate::model::prob::kl_bernoulli;
use crate::model::{SensorModel, TrustModel};
use crate::scalar::Real;

use super::{trust_probabilities, TwoStageThresholds, WorstCaseConfig};

/// Split points of the trusted-count space used by the Chernoff error bound:
/// `k_L > beta_l |L|` counts as "many legitimate trusted" and
/// `k_M < beta_m |M|` as "few malicious trusted".
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundRegion<T> {
    pub beta_l: T,
    pub beta_m: T,
}

impl<T: Real> BoundRegion<T> {
    pub fn new(beta_l: T, beta_m: T) -> Result<Self> {
        for (name, v) in [("beta_l", beta_l), ("beta_m", beta_m)] {
            if !(v > T::zero() && v < T::one()) {
                return Err(Error::OutOfRange {
                    name,
                    value: v.as_f64(),
                    range: "(0, 1)",
                });
            }
        }
        Ok(Self { beta_l, beta_m })
    }

    /// Midpoints `beta_l = P_trust,L / 2` and `beta_m = (P_trust,M + 1) / 2`.
    pub fn midpoint(p_trust_l: T, p_trust_m: T) -> Result<Self> {
        let half = T::lit(0.5);
        Self::new(half * p_trust_l, half * (p_trust_m + T::one()))
    }
}

/// Chernoff upper bound on the worst-case error of the Two Stage Approach.
///
/// Sum of three terms: too few legitimate robots trusted, too many malicious
/// robots trusted, and the fusion error once neither happens, the last one
/// evaluated at `k_L = beta_l |L| + 1`, `k_M = beta_m |M| - 1`.
///
/// Returns [`Error::Validity`] when the region or the normalized fusion
/// thresholds fall outside the range where the Chernoff bounds hold.
pub fn error_upper_bound<T: Real>(
    thresholds: &TwoStageThresholds<T>,
    cfg: &WorstCaseConfig<T>,
    region: &BoundRegion<T>,
    sensor: &SensorModel<T>,
    trust: &TrustModel<T>,
) -> Result<T> {
    let (p_l, p_m) = trust_probabilities(thresholds, trust);
    let BoundRegion { beta_l, beta_m } = *region;
    if !(beta_l < p_l) {
        return Err(Error::Validity(format!(
            "beta_l = {beta_l} must be below P_trust,L = {p_l}"
        )));
    }
    if !(beta_m > p_m) {
        return Err(Error::Validity(format!(
            "beta_m = {beta_m} must exceed P_trust,M = {p_m}"
        )));
    }

    let n_l = T::from_count(cfg.legit_count());
    let n_m = T::from_count(cfg.malicious_count());
    let w0 = sensor.w0();
    let w1 = sensor.w1();
    let gamma = sensor.gamma_ts();

    let k_l = beta_l * n_l + T::one();
    let k_m = beta_m * n_m - T::one();
    let gamma_fa = (gamma - k_m * w1 + k_l * w0) / (k_l * (w0 + w1));
    let gamma_md = (gamma + k_m * w0 + k_l * w0) / (k_l * (w0 + w1));
    if !(gamma_fa > sensor.p_fa_l() && gamma_fa < T::one()) {
        return Err(Error::Validity(format!(
            "normalized false-alarm threshold {gamma_fa} outside ({}, 1)",
            sensor.p_fa_l()
        )));
    }
    let p_det = T::one() - sensor.p_md_l();
    if !(gamma_md > T::zero() && gamma_md < p_det) {
        return Err(Error::Validity(format!(
            "normalized missed-detection threshold {gamma_md} outside (0, {p_det})"
        )));
    }

    let few_legit = (-n_l * kl_bernoulli(beta_l, p_l)?).exp();
    let many_malicious = (-n_m * kl_bernoulli(beta_m, p_m)?).exp();
    let fusion = sensor.prior_h0() * (-k_l * kl_bernoulli(gamma_fa, sensor.p_fa_l())?).exp()
        + sensor.prior_h1() * (-k_l * kl_bernoulli(gamma_md, p_det)?).exp();
    Ok(few_legit + many_malicious + fusion)
}
