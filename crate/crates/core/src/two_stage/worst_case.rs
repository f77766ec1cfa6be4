use crate::model::prob::binomial_pmf_unchecked;
use crate::model::{SensorModel, TrustModel};
use crate::scalar::Real;

use super::{ones_needed, trust_probabilities, TwoStageThresholds, WorstCaseConfig};

/// Lower and upper binomial tails `Pr(X <= g)`, `Pr(X >= g)` for every
/// `X ~ Bin(k, p)`, `k = 0..=n`. Both are accumulated from their own end so
/// neither suffers cancellation.
struct TailTable<T> {
    lower: Vec<Vec<T>>,
    upper: Vec<Vec<T>>,
}

impl<T: Real> TailTable<T> {
    fn new(n: usize, p: T) -> Self {
        let mut lower = Vec::with_capacity(n + 1);
        let mut upper = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let pmf: Vec<T> = (0..=k as u64).map(|g| binomial_pmf_unchecked(g, k as u64, p)).collect();
            let mut lo = Vec::with_capacity(k + 1);
            let mut acc = T::zero();
            for &v in &pmf {
                acc += v;
                lo.push(acc.min(T::one()));
            }
            let mut up = vec![T::zero(); k + 1];
            let mut acc = T::zero();
            for g in (0..=k).rev() {
                acc += pmf[g];
                up[g] = acc.min(T::one());
            }
            lower.push(lo);
            upper.push(up);
        }
        Self { lower, upper }
    }

    /// `Pr(X <= g)` for `X ~ Bin(k, p)`.
    fn at_most(&self, k: usize, g: i64) -> T {
        if g < 0 {
            T::zero()
        } else if g as usize >= k {
            T::one()
        } else {
            self.lower[k][g as usize]
        }
    }

    /// `Pr(X >= g)` for `X ~ Bin(k, p)`.
    fn at_least(&self, k: usize, g: i64) -> T {
        if g <= 0 {
            T::one()
        } else if g as usize > k {
            T::zero()
        } else {
            self.upper[k][g as usize]
        }
    }
}

fn pmf_vec<T: Real>(n: usize, p: T) -> Vec<T> {
    (0..=n as u64).map(|g| binomial_pmf_unchecked(g, n as u64, p)).collect()
}

/// Index range holding every nonzero entry.
fn support<T: Real>(pmf: &[T]) -> std::ops::Range<usize> {
    let first = pmf.iter().position(|&p| p > T::zero()).unwrap_or(0);
    let last = pmf.iter().rposition(|&p| p > T::zero()).map_or(0, |i| i + 1);
    first..last.max(first)
}

/// Everything in the exact error that depends only on the network split and
/// the sensor, so threshold searches build it once.
pub(crate) struct FcErrorEvaluator<'a, T> {
    n_legit: usize,
    n_malicious: usize,
    sensor: &'a SensorModel<T>,
    fa_tails: TailTable<T>,
    det_tails: TailTable<T>,
    needed: Vec<i64>,
}

impl<'a, T: Real> FcErrorEvaluator<'a, T> {
    pub(crate) fn new(n_legit: usize, n_malicious: usize, sensor: &'a SensorModel<T>) -> Self {
        Self {
            n_legit,
            n_malicious,
            sensor,
            fa_tails: TailTable::new(n_legit, sensor.p_fa_l()),
            det_tails: TailTable::new(n_legit, T::one() - sensor.p_md_l()),
            needed: (0..=n_legit + n_malicious).map(|k| ones_needed(k, sensor)).collect(),
        }
    }

    pub(crate) fn error(&self, p_trust_l: T, p_trust_m: T, attack_fa: T, attack_md: T) -> T {
        let weight_l = pmf_vec(self.n_legit, p_trust_l);
        let weight_m = pmf_vec(self.n_malicious, p_trust_m);
        let legit_support = support(&weight_l);

        let mut p_fa = T::zero();
        let mut p_md = T::zero();
        for k_m in support(&weight_m) {
            let wm = weight_m[k_m];
            // malicious `1` reports among the k_m trusted ones, under each hypothesis
            let ones_h0 = pmf_vec(k_m, attack_fa);
            let ones_h1 = pmf_vec(k_m, T::one() - attack_md);
            let (sup_h0, sup_h1) = (support(&ones_h0), support(&ones_h1));
            for k_l in legit_support.clone() {
                let w = weight_l[k_l] * wm;
                if w == T::zero() {
                    continue;
                }
                let c = self.needed[k_l + k_m];
                let mut fa = T::zero();
                let mut md = T::zero();
                for j in sup_h0.clone() {
                    fa += ones_h0[j] * self.fa_tails.at_least(k_l, c - j as i64);
                }
                for j in sup_h1.clone() {
                    md += ones_h1[j] * self.det_tails.at_most(k_l, c - j as i64 - 1);
                }
                p_fa += w * fa;
                p_md += w * md;
            }
        }
        let pe = self.sensor.prior_h0() * p_fa + self.sensor.prior_h1() * p_md;
        pe.max(T::zero()).min(T::one())
    }
}

/// Exact fusion-center error probability of the Two Stage Approach.
///
/// `n_legit` legitimate and `n_malicious` malicious robots are trusted
/// independently with probabilities `p_trust_l` and `p_trust_m`. A malicious
/// robot reports `1` under `H0` with probability `attack_fa` and reports `0`
/// under `H1` with probability `attack_md`.
pub fn fc_error_exact<T: Real>(
    p_trust_l: T,
    p_trust_m: T,
    n_legit: usize,
    n_malicious: usize,
    attack_fa: T,
    attack_md: T,
    sensor: &SensorModel<T>,
) -> T {
    FcErrorEvaluator::new(n_legit, n_malicious, sensor).error(p_trust_l, p_trust_m, attack_fa, attack_md)
}

/// Worst-case error for given trust probabilities: every malicious report is
/// wrong (`P_FA,M = P_MD,M = 1`).
pub fn worst_case_error_at<T: Real>(
    p_trust_l: T,
    p_trust_m: T,
    n_legit: usize,
    n_malicious: usize,
    sensor: &SensorModel<T>,
) -> T {
    fc_error_exact(p_trust_l, p_trust_m, n_legit, n_malicious, T::one(), T::one(), sensor)
}

/// Worst-case error of the thresholds `(gamma_t, p_t)` with `round(m_bar N)`
/// malicious robots.
pub fn worst_case_error<T: Real>(
    gamma_t: T,
    p_t: T,
    cfg: &WorstCaseConfig<T>,
    sensor: &SensorModel<T>,
    trust: &TrustModel<T>,
) -> T {
    let thr = TwoStageThresholds {
        gamma_t,
        p_t,
        worst_case_error: T::nan(),
    };
    let (p_l, p_m) = trust_probabilities(&thr, trust);
    worst_case_error_at(p_l, p_m, cfg.legit_count(), cfg.malicious_count(), sensor)
}
