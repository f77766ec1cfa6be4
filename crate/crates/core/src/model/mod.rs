//! Domain types shared by every detector: sensing, trust and attack models,
//! the per-trial observation and the decision wrapper.

pub mod prob;
pub mod special;

use std::fmt;

use crate::aglrt::BranchMaximum;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Binary event label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Hypothesis {
    /// Event absent.
    H0,
    /// Event present.
    H1,
}

impl Hypothesis {
    #[inline]
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Hypothesis::H1
        } else {
            Hypothesis::H0
        }
    }

    #[inline]
    pub fn bit(self) -> bool {
        self == Hypothesis::H1
    }

    #[inline]
    pub fn other(self) -> Self {
        match self {
            Hypothesis::H0 => Hypothesis::H1,
            Hypothesis::H1 => Hypothesis::H0,
        }
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hypothesis::H0 => f.write_str("H0"),
            Hypothesis::H1 => f.write_str("H1"),
        }
    }
}

fn check_open<T: Real>(name: &'static str, v: T, lo: T, hi: T, range: &'static str) -> Result<()> {
    if v > lo && v < hi {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name,
            value: v.as_f64(),
            range,
        })
    }
}

/// Error probabilities of a legitimate sensor and the event priors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorModel<T> {
    p_fa_l: T,
    p_md_l: T,
    prior_h0: T,
    prior_h1: T,
}

impl<T: Real> SensorModel<T> {
    /// Both error rates must lie in `(0, 0.5)`, both priors in `(0, 1)`, and the
    /// priors must sum to one (up to `T::rel_tol()`).
    pub fn new(p_fa_l: T, p_md_l: T, prior_h0: T, prior_h1: T) -> Result<Self> {
        let half = T::lit(0.5);
        check_open("p_fa_l", p_fa_l, T::zero(), half, "(0, 0.5)")?;
        check_open("p_md_l", p_md_l, T::zero(), half, "(0, 0.5)")?;
        check_open("prior_h0", prior_h0, T::zero(), T::one(), "(0, 1)")?;
        check_open("prior_h1", prior_h1, T::zero(), T::one(), "(0, 1)")?;
        if (prior_h0 + prior_h1 - T::one()).abs() > T::rel_tol() {
            return Err(Error::PriorsNotNormalized {
                h0: prior_h0.as_f64(),
                h1: prior_h1.as_f64(),
            });
        }
        Ok(Self {
            p_fa_l,
            p_md_l,
            prior_h0,
            prior_h1,
        })
    }

    /// Same as [`SensorModel::new`] with `prior_h1 = 1 - prior_h0`.
    pub fn with_prior_h0(p_fa_l: T, p_md_l: T, prior_h0: T) -> Result<Self> {
        Self::new(p_fa_l, p_md_l, prior_h0, T::one() - prior_h0)
    }

    pub fn p_fa_l(&self) -> T {
        self.p_fa_l
    }
    pub fn p_md_l(&self) -> T {
        self.p_md_l
    }
    pub fn prior_h0(&self) -> T {
        self.prior_h0
    }
    pub fn prior_h1(&self) -> T {
        self.prior_h1
    }

    pub fn prior(&self, h: Hypothesis) -> T {
        match h {
            Hypothesis::H0 => self.prior_h0,
            Hypothesis::H1 => self.prior_h1,
        }
    }

    pub fn min_prior(&self) -> T {
        self.prior_h0.min(self.prior_h1)
    }

    /// Weight of a `1` report: `ln((1 - P_MD,L) / P_FA,L)`.
    pub fn w1(&self) -> T {
        ((T::one() - self.p_md_l) / self.p_fa_l).ln()
    }

    /// Weight of a `0` report: `ln((1 - P_FA,L) / P_MD,L)`.
    pub fn w0(&self) -> T {
        ((T::one() - self.p_fa_l) / self.p_md_l).ln()
    }

    /// Fusion threshold `ln(prior_h0 / prior_h1)`.
    pub fn gamma_ts(&self) -> T {
        (self.prior_h0 / self.prior_h1).ln()
    }

    /// Probability that a legitimate robot reports `1` under `h`.
    pub fn p_report_one(&self, h: Hypothesis) -> T {
        match h {
            Hypothesis::H0 => self.p_fa_l,
            Hypothesis::H1 => T::one() - self.p_md_l,
        }
    }
}

/// Trust-value alphabet `{0, .., K-1}` with class-conditional pmfs.
///
/// Symbols are plain indices; meaning attaches only through the two pmfs.
#[derive(Debug, Clone, PartialEq)]
pub struct TrustModel<T> {
    legit: Vec<T>,
    malicious: Vec<T>,
    ratio: Vec<T>,
    ln_legit: Vec<T>,
    ln_malicious: Vec<T>,
}

impl<T: Real> TrustModel<T> {
    pub fn new(pmf_legit: Vec<T>, pmf_malicious: Vec<T>) -> Result<Self> {
        if pmf_legit.len() != pmf_malicious.len() {
            return Err(Error::AlphabetMismatch {
                legit: pmf_legit.len(),
                malicious: pmf_malicious.len(),
            });
        }
        if pmf_legit.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        for (which, pmf) in [("legitimate", &pmf_legit), ("malicious", &pmf_malicious)] {
            for &p in pmf.iter() {
                check_open("trust pmf entry", p, T::zero(), T::one(), "(0, 1)")?;
            }
            let sum = pmf.iter().fold(T::zero(), |acc, &p| acc + p);
            if (sum - T::one()).abs() > T::rel_tol() {
                return Err(Error::PmfNotNormalized {
                    which,
                    sum: sum.as_f64(),
                });
            }
        }
        if let Some(index) = pmf_legit.iter().zip(&pmf_malicious).position(|(l, m)| l == m) {
            return Err(Error::UninformativeSymbol { index });
        }
        let ratio = pmf_legit.iter().zip(&pmf_malicious).map(|(&l, &m)| l / m).collect();
        let ln_legit = pmf_legit.iter().map(|p| p.ln()).collect();
        let ln_malicious = pmf_malicious.iter().map(|p| p.ln()).collect();
        Ok(Self {
            legit: pmf_legit,
            malicious: pmf_malicious,
            ratio,
            ln_legit,
            ln_malicious,
        })
    }

    /// Binary alphabet where symbol `1` has probability `p_legit_one` for a
    /// legitimate robot and `p_malicious_one` for a malicious one.
    pub fn bernoulli(p_legit_one: T, p_malicious_one: T) -> Result<Self> {
        Self::new(
            vec![T::one() - p_legit_one, p_legit_one],
            vec![T::one() - p_malicious_one, p_malicious_one],
        )
    }

    pub fn len(&self) -> usize {
        self.legit.len()
    }

    pub fn is_empty(&self) -> bool {
        self.legit.is_empty()
    }

    pub fn pmf_legit(&self) -> &[T] {
        &self.legit
    }

    pub fn pmf_malicious(&self) -> &[T] {
        &self.malicious
    }

    /// Cached `p(a | legitimate) / p(a | malicious)` for every symbol.
    pub fn ratios(&self) -> &[T] {
        &self.ratio
    }

    pub fn check_symbol(&self, symbol: usize) -> Result<()> {
        if symbol < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownSymbol {
                symbol,
                size: self.len(),
            })
        }
    }

    pub fn likelihood_ratio(&self, symbol: usize) -> Result<T> {
        self.check_symbol(symbol)?;
        Ok(self.ratio[symbol])
    }

    #[inline]
    pub fn ln_legit(&self, symbol: usize) -> T {
        self.ln_legit[symbol]
    }

    #[inline]
    pub fn ln_malicious(&self, symbol: usize) -> T {
        self.ln_malicious[symbol]
    }
}

/// Malicious reporting behaviour: sense with `(pre_fa, pre_md)`, then flip the
/// bit with probability `p_f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttackModel<T> {
    p_f: T,
    pre_fa: T,
    pre_md: T,
}

impl<T: Real> AttackModel<T> {
    pub fn new(p_f: T, pre_fa: T, pre_md: T) -> Result<Self> {
        if !(p_f >= T::zero() && p_f <= T::one()) {
            return Err(Error::OutOfRange {
                name: "p_f",
                value: p_f.as_f64(),
                range: "[0, 1]",
            });
        }
        let half = T::lit(0.5);
        for (name, v) in [("pre_fa", pre_fa), ("pre_md", pre_md)] {
            if !(v >= T::zero() && v < half) {
                return Err(Error::OutOfRange {
                    name,
                    value: v.as_f64(),
                    range: "[0, 0.5)",
                });
            }
        }
        Ok(Self { p_f, pre_fa, pre_md })
    }

    /// Always flip, never mis-sense: every malicious report is wrong.
    pub fn worst_case() -> Self {
        Self {
            p_f: T::one(),
            pre_fa: T::zero(),
            pre_md: T::zero(),
        }
    }

    pub fn p_f(&self) -> T {
        self.p_f
    }
    pub fn pre_fa(&self) -> T {
        self.pre_fa
    }
    pub fn pre_md(&self) -> T {
        self.pre_md
    }

    fn flip(&self, pre: T) -> T {
        let v = (T::one() - self.p_f) * pre + self.p_f * (T::one() - pre);
        v.max(T::zero()).min(T::one())
    }

    /// `P_FA,M = (1 - p_f) pre_fa + p_f (1 - pre_fa)`.
    pub fn effective_fa(&self) -> T {
        self.flip(self.pre_fa)
    }

    /// `P_MD,M = (1 - p_f) pre_md + p_f (1 - pre_md)`.
    pub fn effective_md(&self) -> T {
        self.flip(self.pre_md)
    }

    /// Probability that a malicious robot reports `1` under `h`.
    pub fn p_report_one(&self, h: Hypothesis) -> T {
        match h {
            Hypothesis::H0 => self.effective_fa(),
            Hypothesis::H1 => T::one() - self.effective_md(),
        }
    }
}

/// One trial: reported bits, trust symbols and the hidden ground truth.
///
/// Detectors only ever see `y` and `a`; `truth_t` and `truth_event` exist for
/// the simulator and the oracle baseline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkObservation {
    pub y: Vec<bool>,
    pub a: Vec<usize>,
    /// `true` marks a legitimate robot.
    pub truth_t: Vec<bool>,
    pub truth_event: Hypothesis,
}

impl NetworkObservation {
    pub fn new(y: Vec<bool>, a: Vec<usize>, truth_t: Vec<bool>, truth_event: Hypothesis) -> Result<Self> {
        if y.is_empty() {
            return Err(Error::EmptyNetwork);
        }
        check_len("trust symbols vs reports", y.len(), a.len())?;
        check_len("truth vs reports", y.len(), truth_t.len())?;
        Ok(Self {
            y,
            a,
            truth_t,
            truth_event,
        })
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn malicious_count(&self) -> usize {
        self.truth_t.iter().filter(|&&t| !t).count()
    }
}

pub(crate) fn check_len(what: &'static str, left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::LengthMismatch { what, left, right })
    }
}

/// Detector output with optional diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Decision<T> {
    pub hypothesis: Hypothesis,
    /// Estimated trust vector (`true` = legitimate).
    pub est_trust: Option<Vec<bool>>,
    /// Estimated attacker error probability of the selected branch.
    pub est_attack_param: Option<T>,
    /// `(ln L(H1), ln L(H0))` for likelihood-based detectors.
    pub log_likelihoods: Option<(T, T)>,
    /// Both branch maxima of a generalized likelihood ratio test, `(H1, H0)`.
    pub branches: Option<(BranchMaximum<T>, BranchMaximum<T>)>,
}

impl<T> Decision<T> {
    pub fn plain(hypothesis: Hypothesis) -> Self {
        Self {
            hypothesis,
            est_trust: None,
            est_attack_param: None,
            log_likelihoods: None,
            branches: None,
        }
    }
}
