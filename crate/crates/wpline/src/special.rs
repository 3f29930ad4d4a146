//! Bernoulli numbers, the odd function `zeta(z) = e^{z/2} - e^{-z/2}`, its
//! companion `S(z) = zeta(z)/z`, the asymptotic expansion of `ln Gamma`, and
//! series that carry a few symbolic logarithms next to their Laurent part.

use std::sync::{Mutex, OnceLock};

use num::{BigInt, One, Zero};

use crate::error::{Error, Result};
use crate::series::{binomial, factorial, int, rat, univariate, univariate_laurent, Rational, TruncSeries};

fn bernoulli_cache() -> &'static Mutex<Vec<Rational>> {
    static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![Rational::one()]))
}

/// `B_n` with `B_1 = -1/2`.
pub fn bernoulli(n: usize) -> Rational {
    let mut b = bernoulli_cache().lock().unwrap();
    while b.len() <= n {
        let m = b.len() as i64;
        // sum_{k=0}^{m} C(m+1, k) B_k = 0
        let mut s = Rational::zero();
        for (k, bk) in b.iter().enumerate() {
            s += binomial(m + 1, k as i64) * bk;
        }
        b.push(-s / int(m + 1));
    }
    b[n].clone()
}

/// Bernoulli polynomial `B_n(a)`.
pub fn bernoulli_poly(n: usize, a: &Rational) -> Rational {
    let mut s = Rational::zero();
    let mut apow = Rational::one();
    // accumulate from k = n down so the power of a grows
    for k in (0..=n).rev() {
        s += binomial(n as i64, k as i64) * bernoulli(k) * &apow;
        apow *= a;
    }
    s
}

fn inv_factorial(n: u64) -> Rational {
    Rational::new(BigInt::one(), factorial(n))
}

/// `zeta(t)` through `t^order`.
pub fn zeta_series(var: &str, order: i32) -> TruncSeries {
    let coeffs: Vec<Rational> = (0..=order.max(0) as u64)
        .map(|k| {
            if k % 2 == 1 {
                inv_factorial(k) / Rational::from_integer(BigInt::from(2).pow(k as u32 - 1))
            } else {
                Rational::zero()
            }
        })
        .collect();
    univariate(var, &coeffs, order)
}

/// Dense coefficients of `zeta(t)`, indices `0..=order`.
pub fn zeta_coeffs(order: usize) -> Vec<Rational> {
    (0..=order as u64)
        .map(|k| {
            if k % 2 == 1 {
                inv_factorial(k) / Rational::from_integer(BigInt::from(2).pow(k as u32 - 1))
            } else {
                Rational::zero()
            }
        })
        .collect()
}

/// `S(t) = zeta(t)/t` through `t^order`.
pub fn s_series(var: &str, order: i32) -> TruncSeries {
    univariate(var, &s_coeffs(order.max(0) as usize), order)
}

/// Dense coefficients of `S(t)`.
pub fn s_coeffs(order: usize) -> Vec<Rational> {
    (0..=order as u64)
        .map(|k| {
            if k % 2 == 0 {
                inv_factorial(k + 1) / Rational::from_integer(BigInt::from(2).pow(k as u32))
            } else {
                Rational::zero()
            }
        })
        .collect()
}

/// `1/zeta(t)` through `t^order` (Laurent, floor -1).
pub fn inv_zeta_series(var: &str, order: i32) -> TruncSeries {
    zeta_series(var, order + 2).invert().expect("zeta has a unit leading term")
}

/// Asymptotic expansion of `ln Gamma(X + a)` for large `X`:
/// `x_log_x * X ln X + x_coeff * X + log_x * ln X + log_two_pi * ln(2 pi) + laurent(1/X)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LogGammaExpansion {
    pub shift: Rational,
    pub x_log_x: Rational,
    pub x_coeff: Rational,
    pub log_x: Rational,
    pub log_two_pi: Rational,
    /// Series in the variable `Xinv` (`= 1/X`), no constant term.
    pub laurent: TruncSeries,
}

/// Name of the `1/X` variable used by [`log_gamma_asymp`].
pub const XINV_BIG: &str = "Xinv";

pub fn log_gamma_asymp(a: &Rational, order: i32) -> LogGammaExpansion {
    let mut terms = Vec::new();
    for n in 1..=order.max(0) {
        let b = bernoulli_poly(n as usize + 1, a);
        let sign = if n % 2 == 1 { 1 } else { -1 };
        terms.push((n, b * int(sign) / int(n as i64 * (n as i64 + 1))));
    }
    let mut laurent = univariate_laurent(XINV_BIG, terms, Some(order));
    if laurent.is_zero() {
        laurent = laurent.declare(crate::series::Var::truncated(XINV_BIG, order));
    }
    LogGammaExpansion {
        shift: a.clone(),
        x_log_x: int(1),
        x_coeff: int(-1),
        log_x: a - rat(1, 2),
        log_two_pi: rat(1, 2),
        laurent,
    }
}

/// A series `laurent + xlogx * (x ln x) + logx * ln x + loghbar * ln hbar + log_two_pi * ln(2 pi)`.
///
/// The coefficient fields are ordinary series (they may depend on `x` and `hbar`).
/// Products are closed only while at most one factor carries a logarithm.
#[derive(Clone, Debug, PartialEq)]
pub struct SpecialSeries {
    pub laurent: TruncSeries,
    pub xlogx: TruncSeries,
    pub logx: TruncSeries,
    pub loghbar: TruncSeries,
    pub log_two_pi: Rational,
}

impl SpecialSeries {
    pub fn plain(laurent: TruncSeries) -> Self {
        SpecialSeries {
            laurent,
            xlogx: TruncSeries::zero(),
            logx: TruncSeries::zero(),
            loghbar: TruncSeries::zero(),
            log_two_pi: Rational::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::plain(TruncSeries::zero())
    }

    pub fn has_transcendental(&self) -> bool {
        !self.xlogx.is_zero() || !self.logx.is_zero() || !self.loghbar.is_zero() || !self.log_two_pi.is_zero()
    }

    pub fn checked_add(&self, o: &SpecialSeries) -> Result<SpecialSeries> {
        Ok(SpecialSeries {
            laurent: self.laurent.checked_add(&o.laurent)?,
            xlogx: self.xlogx.checked_add(&o.xlogx)?,
            logx: self.logx.checked_add(&o.logx)?,
            loghbar: self.loghbar.checked_add(&o.loghbar)?,
            log_two_pi: &self.log_two_pi + &o.log_two_pi,
        })
    }

    pub fn neg(&self) -> SpecialSeries {
        self.scale(&int(-1))
    }

    pub fn scale(&self, k: &Rational) -> SpecialSeries {
        SpecialSeries {
            laurent: self.laurent.scale(k),
            xlogx: self.xlogx.scale(k),
            logx: self.logx.scale(k),
            loghbar: self.loghbar.scale(k),
            log_two_pi: &self.log_two_pi * k,
        }
    }

    /// Multiply every part by an ordinary series. A nonzero `ln(2 pi)` part can
    /// only be scaled by a constant.
    pub fn mul_plain(&self, s: &TruncSeries) -> Result<SpecialSeries> {
        let mut two_pi_as_series = TruncSeries::zero();
        let mut log_two_pi = Rational::zero();
        if !self.log_two_pi.is_zero() {
            let pruned = s.prune();
            if pruned.terms().keys().all(|e| e.iter().all(|x| *x == 0)) {
                log_two_pi = &self.log_two_pi * pruned.constant_term();
            } else {
                two_pi_as_series = s.clone();
            }
        }
        if !two_pi_as_series.is_zero() {
            return Err(Error::InvalidArgument("ln(2 pi) part times a non-constant series".into()));
        }
        Ok(SpecialSeries {
            laurent: self.laurent.checked_mul(s)?,
            xlogx: self.xlogx.checked_mul(s)?,
            logx: self.logx.checked_mul(s)?,
            loghbar: self.loghbar.checked_mul(s)?,
            log_two_pi,
        })
    }

    pub fn checked_mul(&self, o: &SpecialSeries) -> Result<SpecialSeries> {
        match (self.has_transcendental(), o.has_transcendental()) {
            (true, true) => Err(Error::TranscendentalProduct),
            (false, _) => o.mul_plain(&self.laurent),
            (true, false) => self.mul_plain(&o.laurent),
        }
    }

    /// Same coefficients in every part (declared orders ignored).
    pub fn same_as(&self, o: &SpecialSeries) -> bool {
        self.laurent.same_coefficients(&o.laurent)
            && self.xlogx.same_coefficients(&o.xlogx)
            && self.logx.same_coefficients(&o.logx)
            && self.loghbar.same_coefficients(&o.loghbar)
            && self.log_two_pi == o.log_two_pi
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "laurent": self.laurent.to_json_value(),
            "xlogx": self.xlogx.to_json_value(),
            "logx": self.logx.to_json_value(),
            "loghbar": self.loghbar.to_json_value(),
            "log_two_pi": self.log_two_pi.to_string(),
        })
    }
}

impl std::fmt::Display for SpecialSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        if !self.xlogx.is_zero() {
            parts.push(format!("({}) x ln x", self.xlogx));
        }
        if !self.logx.is_zero() {
            parts.push(format!("({}) ln x", self.logx));
        }
        if !self.loghbar.is_zero() {
            parts.push(format!("({}) ln hbar", self.loghbar));
        }
        if !self.log_two_pi.is_zero() {
            parts.push(format!("{} ln(2 pi)", self.log_two_pi));
        }
        parts.push(format!("{}", self.laurent));
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_bernoulli_numbers() {
        let expect = [rat(1, 1), rat(-1, 2), rat(1, 6), rat(0, 1), rat(-1, 30), rat(0, 1), rat(1, 42)];
        for (n, b) in expect.iter().enumerate() {
            assert_eq!(&bernoulli(n), b, "B_{n}");
        }
        assert_eq!(bernoulli(12), rat(-691, 2730));
    }

    #[test]
    fn odd_bernoulli_vanish() {
        for n in (3..40).step_by(2) {
            assert!(bernoulli(n).is_zero());
        }
    }

    #[test]
    fn zeta_and_inverse() {
        let z = zeta_series("z", 5);
        assert_eq!(z.coeff(&[("z", 1)]), int(1));
        assert_eq!(z.coeff(&[("z", 3)]), rat(1, 24));
        assert_eq!(z.coeff(&[("z", 5)]), rat(1, 1920));
        let iz = inv_zeta_series("z", 3);
        assert_eq!(iz.coeff(&[("z", -1)]), int(1));
        assert_eq!(iz.coeff(&[("z", 1)]), rat(-1, 24));
        assert_eq!(iz.coeff(&[("z", 3)]), rat(7, 5760));
    }

    #[test]
    fn stirling_leading_terms() {
        let g0 = log_gamma_asymp(&int(0), 3);
        assert_eq!(g0.log_x, rat(-1, 2));
        assert_eq!(g0.laurent.coeff(&[(XINV_BIG, 1)]), rat(1, 12));
        let gh = log_gamma_asymp(&rat(1, 2), 3);
        assert!(gh.log_x.is_zero());
        assert_eq!(gh.laurent.coeff(&[(XINV_BIG, 1)]), rat(-1, 24));
    }
}
