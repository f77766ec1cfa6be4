//! Test-only oracles. Nothing here calls into the code paths it checks
//! beyond the model constructors.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trustfusion::{Hypothesis, SensorModel, TrustModel};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Fusion statistic as a plain weighted sum, compared with a small slack so
/// exact ties count as `>=`.
pub fn fuse_by_sum(y: &[bool], trusted: &[bool], s: &SensorModel<f64>) -> bool {
    let w1 = ((1.0 - s.p_md_l()) / s.p_fa_l()).ln();
    let w0 = ((1.0 - s.p_fa_l()) / s.p_md_l()).ln();
    let gamma = (s.prior_h0() / s.prior_h1()).ln();
    let sum: f64 = y
        .iter()
        .zip(trusted)
        .filter(|(_, &t)| t)
        .map(|(&yi, _)| if yi { w1 } else { -w0 })
        .sum();
    sum >= gamma - 1e-9
}

/// Error probability of the two-stage detector by enumerating every joint
/// outcome: trust symbol, tie-break draw and report of each robot. The first
/// `n_legit` robots are legitimate; a malicious robot reports the wrong bit
/// with probability `attack`.
pub fn enumerate_two_stage_error(
    gamma_t: f64,
    p_t: f64,
    n_legit: usize,
    n_malicious: usize,
    attack: f64,
    s: &SensorModel<f64>,
    t: &TrustModel<f64>,
) -> f64 {
    let n = n_legit + n_malicious;
    // per-robot outcome lists: (probability, trusted, reported bit) for each hypothesis
    let per_robot = |legit: bool, h: Hypothesis| -> Vec<(f64, bool, bool)> {
        let mut out = Vec::new();
        let pmf = if legit { t.pmf_legit() } else { t.pmf_malicious() };
        for (sym, &pa) in pmf.iter().enumerate() {
            let ratio = t.pmf_legit()[sym] / t.pmf_malicious()[sym];
            let trust_opts: Vec<(f64, bool)> = if (ratio - gamma_t).abs() <= 1e-12 * ratio.max(gamma_t) {
                vec![(p_t, true), (1.0 - p_t, false)]
            } else {
                vec![(1.0, ratio > gamma_t)]
            };
            let p_one = if legit {
                match h {
                    Hypothesis::H0 => s.p_fa_l(),
                    Hypothesis::H1 => 1.0 - s.p_md_l(),
                }
            } else {
                match h {
                    Hypothesis::H0 => attack,
                    Hypothesis::H1 => 1.0 - attack,
                }
            };
            for (pt, trusted) in &trust_opts {
                for (py, bit) in [(p_one, true), (1.0 - p_one, false)] {
                    let p = pa * pt * py;
                    if p > 0.0 {
                        out.push((p, *trusted, bit));
                    }
                }
            }
        }
        out
    };

    let mut total = 0.0;
    for h in [Hypothesis::H0, Hypothesis::H1] {
        let lists: Vec<Vec<(f64, bool, bool)>> = (0..n).map(|i| per_robot(i < n_legit, h)).collect();
        let mut idx = vec![0usize; n];
        let mut wrong = 0.0;
        'outer: loop {
            let mut p = 1.0;
            let mut trusted = Vec::with_capacity(n);
            let mut y = Vec::with_capacity(n);
            for i in 0..n {
                let (pi, ti, yi) = lists[i][idx[i]];
                p *= pi;
                trusted.push(ti);
                y.push(yi);
            }
            if fuse_by_sum(&y, &trusted, s) != h.bit() {
                wrong += p;
            }
            for i in 0..n {
                idx[i] += 1;
                if idx[i] < lists[i].len() {
                    continue 'outer;
                }
                idx[i] = 0;
            }
            break;
        }
        total += s.prior(h) * wrong;
    }
    total
}

/// Likelihood ratio test on the truly legitimate robots only. `H1` iff the
/// log-likelihood ratio exceeds `ln(prior_h0 / prior_h1)` by more than the
/// tie tolerance used by the generalized test.
pub fn legit_only_lrt(y: &[bool], truth_t: &[bool], s: &SensorModel<f64>) -> Hypothesis {
    let mut llr = 0.0;
    let mut scale: f64 = 1.0;
    for (&yi, &ti) in y.iter().zip(truth_t) {
        if !ti {
            continue;
        }
        let (p1, p0) = if yi {
            (1.0 - s.p_md_l(), s.p_fa_l())
        } else {
            (s.p_md_l(), 1.0 - s.p_fa_l())
        };
        llr += p1.ln() - p0.ln();
        scale += p1.ln().abs() + p0.ln().abs();
    }
    let gamma = (s.prior_h0() / s.prior_h1()).ln();
    Hypothesis::from_bit(llr - gamma > 1e-9 * scale)
}

pub fn random_sensor<R: Rng>(r: &mut R) -> SensorModel<f64> {
    let fa = r.random_range(0.02..0.45);
    let md = r.random_range(0.02..0.45);
    let h0 = r.random_range(0.15..0.85);
    SensorModel::with_prior_h0(fa, md, h0).unwrap()
}

/// Random binary or ternary trust model with no uninformative symbol.
pub fn random_trust<R: Rng>(r: &mut R) -> TrustModel<f64> {
    loop {
        let k = r.random_range(2..=3);
        let draw = |r: &mut R| -> Vec<f64> {
            let raw: Vec<f64> = (0..k).map(|_| r.random_range(0.05..1.0)).collect();
            let sum: f64 = raw.iter().sum();
            let mut v: Vec<f64> = raw.iter().map(|x| x / sum).collect();
            let head: f64 = v[..k - 1].iter().sum();
            v[k - 1] = 1.0 - head;
            v
        };
        let l = draw(r);
        let m = draw(r);
        if l.iter().zip(&m).all(|(a, b)| (a - b).abs() > 0.02) {
            if let Ok(t) = TrustModel::new(l, m) {
                return t;
            }
        }
    }
}
