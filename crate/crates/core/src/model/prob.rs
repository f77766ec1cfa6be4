//! Exact probability primitives: binomial pmf/cdf, Bernoulli relative entropy,
//! Chernoff tail bounds and the standard normal tail.

use crate::error::{Error, Result};
use crate::model::special::{erfc, ln_choose};
use crate::scalar::Real;

fn check_probability<T: Real>(name: &'static str, p: T) -> Result<()> {
    if p >= T::zero() && p <= T::one() {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name,
            value: p.as_f64(),
            range: "[0, 1]",
        })
    }
}

/// `C(n, g) p^g (1-p)^(n-g)`, evaluated in the log domain.
pub fn binomial_pmf<T: Real>(g: u64, n: u64, p: T) -> Result<T> {
    if g > n {
        return Err(Error::Domain(format!("binomial_pmf: g = {g} exceeds n = {n}")));
    }
    check_probability("p", p)?;
    Ok(binomial_pmf_unchecked(g, n, p))
}

#[inline]
pub(crate) fn binomial_pmf_unchecked<T: Real>(g: u64, n: u64, p: T) -> T {
    let q = T::one() - p;
    // degenerate endpoints: 0^0 = 1
    if p == T::zero() {
        return if g == 0 { T::one() } else { T::zero() };
    }
    if q == T::zero() {
        return if g == n { T::one() } else { T::zero() };
    }
    let k = T::lit(g as f64);
    let rest = T::lit((n - g) as f64);
    (ln_choose::<T>(n, g) + k * p.ln() + rest * q.ln()).exp()
}

/// `Σ_{i=0..g} f_b(i; p, n)`; `0` for `g < 0` and `1` for `g >= n`.
///
/// Probabilities outside `[0, 1]` are clamped.
pub fn binomial_cdf<T: Real>(g: i64, n: u64, p: T) -> T {
    if g < 0 {
        return T::zero();
    }
    let g = g as u64;
    if g >= n {
        return T::one();
    }
    let p = p.max(T::zero()).min(T::one());
    let mut acc = T::zero();
    for i in 0..=g {
        acc += binomial_pmf_unchecked(i, n, p);
    }
    acc.min(T::one())
}

/// Upper tail `Pr(X >= g)` for `X ~ Bin(n, p)`.
///
/// Summed from the top so small tails keep their relative precision.
pub fn binomial_sf<T: Real>(g: i64, n: u64, p: T) -> T {
    if g <= 0 {
        return T::one();
    }
    let g = g as u64;
    if g > n {
        return T::zero();
    }
    let p = p.max(T::zero()).min(T::one());
    let mut acc = T::zero();
    for i in (g..=n).rev() {
        acc += binomial_pmf_unchecked(i, n, p);
    }
    acc.min(T::one())
}

/// Relative entropy between Bernoulli(p) and Bernoulli(q), natural log,
/// with `0 log 0 = 0`.
pub fn kl_bernoulli<T: Real>(p: T, q: T) -> Result<T> {
    check_probability("p", p)?;
    if !(q > T::zero() && q < T::one()) {
        return Err(Error::Domain(format!(
            "kl_bernoulli: q = {q} must lie strictly inside (0, 1)"
        )));
    }
    let xlogy = |x: T, y: T| if x == T::zero() { T::zero() } else { x * (x / y).ln() };
    let d = xlogy(p, q) + xlogy(T::one() - p, T::one() - q);
    Ok(d.max(T::zero()))
}

/// Chernoff bound `exp(-n D(g/n || p))` on `Pr(X <= g)`, valid for `g/n ∈ (0, p)`.
pub fn chernoff_lower_tail<T: Real>(g: T, n: u64, p: T) -> Result<T> {
    if n == 0 {
        return Err(Error::Validity("chernoff_lower_tail: n must be positive".into()));
    }
    let frac = g / T::lit(n as f64);
    if !(frac > T::zero() && frac < p) {
        return Err(Error::Validity(format!(
            "lower-tail Chernoff bound needs g/n in (0, p); got g/n = {frac}, p = {p}"
        )));
    }
    Ok((-T::lit(n as f64) * kl_bernoulli(frac, p)?).exp())
}

/// Chernoff bound `exp(-n D(g/n || p))` on `Pr(X >= g)`, valid for `g/n ∈ (p, 1)`.
pub fn chernoff_upper_tail<T: Real>(g: T, n: u64, p: T) -> Result<T> {
    if n == 0 {
        return Err(Error::Validity("chernoff_upper_tail: n must be positive".into()));
    }
    let frac = g / T::lit(n as f64);
    if !(frac > p && frac < T::one()) {
        return Err(Error::Validity(format!(
            "upper-tail Chernoff bound needs g/n in (p, 1); got g/n = {frac}, p = {p}"
        )));
    }
    Ok((-T::lit(n as f64) * kl_bernoulli(frac, p)?).exp())
}

/// Standard normal upper tail `Q(g) = Pr(Z > g)`.
pub fn gaussian_q<T: Real>(g: T) -> T {
    T::lit(0.5) * erfc(g * T::FRAC_1_SQRT_2())
}
