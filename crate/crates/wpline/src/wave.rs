//! The wave function of the orbifold line in closed Gamma form, the quantum curve
//! that annihilates it, and the `x`-expansions around it (`X_d`, `S_inf`,
//! principal specialization).
//!
//! Expansions in `x` are series in `xinv = 1/x` over an exact `hbar`.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, One, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::parallel::*;
use crate::partitions::{content_product_eigen, rectangle_weights};
use crate::series::{binomial, factorial, int, rat, Rational, TruncSeries, Var, HBAR, XINV};
use crate::special::{bernoulli, log_gamma_asymp, SpecialSeries, XINV_BIG};
use crate::wedge::vev_normalizer;

fn xinv_series(order: i32) -> TruncSeries {
    TruncSeries::one().declare(Var::truncated(XINV, order))
}

fn zero_x(order: i32) -> TruncSeries {
    TruncSeries::zero().declare(Var::truncated(XINV, order))
}

/// `1/(x + s hbar)` through `xinv^order`.
pub fn inv_linear(s: &Rational, order: i32) -> TruncSeries {
    inv_linear_in(XINV, s, order)
}

/// `1/(v + s hbar)` as a series in `var = 1/v` through `var^order`.
pub fn inv_linear_in(var: &str, s: &Rational, order: i32) -> TruncSeries {
    let mut out = TruncSeries::zero().declare(Var::truncated(var, order));
    let mut c = Rational::one();
    for m in 0..order {
        out.add_term(&[(var, m + 1), (HBAR, m)], c.clone());
        c = -(c * s);
    }
    out
}

/// `f(x + s hbar)` for a series in `xinv` (and anything else).
pub fn shift_x(f: &TruncSeries, s: &Rational) -> Result<TruncSeries> {
    let Some(i) = f.index_of(XINV) else { return Ok(f.clone()) };
    let order = f.order_of(XINV);
    let names: Vec<String> = f.vars().iter().map(|v| v.name.clone()).collect();
    let mut out = f.map_coeffs(|_, _| Rational::zero());
    for (e, c) in f.terms() {
        let m = e[i];
        let jmax = match order {
            Some(o) => o - m,
            None if m <= 0 => -m,
            None => return Err(Error::InvalidArgument("shifting an untruncated series in 1/x".into())),
        };
        let mut sp = Rational::one();
        for j in 0..=jmax.max(-1) {
            let b = binomial(-m as i64, j as i64);
            if !b.is_zero() {
                let mut exps: Vec<(&str, i32)> = names.iter().map(|n| n.as_str()).zip(e.iter().copied()).collect();
                exps[i].1 += j;
                exps.push((HBAR, j));
                out.add_term(&exps, c * &b * &sp);
            }
            sp *= s;
        }
    }
    Ok(out)
}

/// `prod_{i=1}^{k} 1/(x + (i - 1/2) hbar)` for `k >= 0`, `prod_{i=1}^{|k|} (x - (i - 1/2) hbar)` for `k < 0`.
pub fn half_product(k: i64, order: i32) -> TruncSeries {
    let mut acc = xinv_series(order);
    if k >= 0 {
        for i in 1..=k {
            acc = &acc * &inv_linear(&rat(2 * i - 1, 2), order);
        }
    } else {
        for i in 1..=-k {
            let mut lin = zero_x(order);
            lin.add_term(&[(XINV, -1)], int(1));
            lin.add_term(&[(HBAR, 1)], rat(1 - 2 * i, 2));
            acc = &acc * &lin;
        }
    }
    acc
}

// ---------------------------------------------------------------- X_d and L(x)

/// `X_d` as a normalized sum over `|lambda| = rd` of content-product eigenvalues.
pub fn xd_char_sum(r: u32, d: usize, order: i32) -> TruncSeries {
    let parts: Vec<TruncSeries> = rectangle_weights(r, d)
        .par_iter()
        .map(|(lambda, w)| content_product_eigen(lambda, order).scale(&Rational::from_integer(w.clone())))
        .collect();
    let total = parts.into_iter().fold(zero_x(order), |a, b| &a + &b);
    total.scale(&(Rational::one() / vev_normalizer(r, d)))
}

/// `((-1)^d / (r^d d!)) prod_{i=1}^{rd} hbar/(x + i hbar)`.
pub fn xd_closed(r: u32, d: usize, order: i32) -> TruncSeries {
    let c = sign(d) / (Rational::from_integer(BigInt::from(r).pow(d as u32)) * Rational::from_integer(factorial(d as u64)));
    let mut acc = xinv_series(order).scale(&c);
    for i in 1..=(r as i64 * d as i64) {
        acc = (&acc * &inv_linear(&int(i), order)).shift(&[(HBAR, 1)]);
    }
    acc
}

fn sign(d: usize) -> Rational {
    if d.is_multiple_of(2) { int(1) } else { int(-1) }
}

/// `X_d = closed X_d` for `r >= 2`; for `r = 1`, `X_d = sum_j closed X_{d-j} / j!`
/// (the `e^{q/hbar^2}` normalization).
pub fn xd_identity_holds(r: u32, d: usize, order: i32) -> bool {
    let lhs = xd_char_sum(r, d, order);
    let rhs = if r == 1 {
        (0..=d).fold(zero_x(order), |acc, j| {
            &acc + &xd_closed(1, d - j, order).scale(&(Rational::one() / Rational::from_integer(factorial(j as u64))))
        })
    } else {
        xd_closed(r, d, order)
    };
    lhs.same_coefficients(&rhs)
}

/// `L(x) = sum_lambda (dim lambda chi^lambda_{(r)^d} / (rd)!) prod_{i=1}^{rd} (x + (i - lambda_i - 1/2) hbar)`.
/// `coeffs[k]` multiplies `x^k hbar^{rd-k}`.
#[derive(Clone, Debug, PartialEq)]
pub struct LPolynomial {
    pub r: u32,
    pub d: usize,
    pub coeffs: Vec<Rational>,
}

impl LPolynomial {
    pub fn coefficient(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// `[x^k]L = 0` for `1 <= k <= rd` and `[x^0]L = (-1)^d hbar^{rd}`.
    pub fn claims_hold(&self) -> bool {
        let n = self.r as usize * self.d;
        (1..=n).all(|k| self.coefficient(k).is_zero()) && self.coefficient(0) == sign(self.d)
    }
}

pub fn l_coefficients(r: u32, d: usize) -> LPolynomial {
    let n = r as usize * d;
    let polys: Vec<Vec<Rational>> = rectangle_weights(r, d)
        .par_iter()
        .map(|(lambda, w)| {
            let mut p = vec![Rational::from_integer(w.clone())];
            for i in 1..=n {
                let li = if i <= lambda.len() { lambda.part(i) as i64 } else { 0 };
                let a = rat(2 * (i as i64 - li) - 1, 2);
                // p *= (x + a)
                let mut q = vec![Rational::zero(); p.len() + 1];
                for (k, c) in p.iter().enumerate() {
                    q[k + 1] += c;
                    q[k] += c * &a;
                }
                p = q;
            }
            p
        })
        .collect();
    let mut coeffs = vec![Rational::zero(); n + 1];
    for p in polys {
        for (k, c) in p.into_iter().enumerate() {
            coeffs[k] += c;
        }
    }
    let f = Rational::from_integer(factorial(n as u64));
    LPolynomial { r, d, coeffs: coeffs.into_iter().map(|c| c / &f).collect() }
}

// ---------------------------------------------------------------- S_inf

fn x_over_hbar(order: i32) -> TruncSeries {
    let mut s = zero_x(order);
    s.add_term(&[(XINV, -1), (HBAR, -1)], int(1));
    s
}

fn minus_inv_hbar() -> TruncSeries {
    TruncSeries::monomial(&[(HBAR, -1)], int(-1), &[])
}

/// `S_inf` from the half-shifted Bernoulli sum:
/// `(x - x ln x)/hbar + sum_{m>=2} (hbar/x)^{m-1}/(m 2^m) - sum_k B_{2k}/(2k(2k-1)) (hbar/(x - hbar/2))^{2k-1}`.
pub fn s_inf_series(order: i32) -> Result<SpecialSeries> {
    let mut lau = x_over_hbar(order);
    for m in 2..=order + 1 {
        lau.add_term(&[(XINV, m - 1), (HBAR, m - 1)], Rational::one() / int(m as i64 * (1i64 << m)));
    }
    let mut k = 1;
    while 2 * k - 1 <= order {
        let p = 2 * k - 1;
        let c = bernoulli(2 * k as usize) / int(2 * k as i64 * p as i64);
        let mut mono = zero_x(order);
        mono.add_term(&[(XINV, p), (HBAR, p)], c);
        lau = &lau - &shift_x(&mono, &rat(-1, 2))?;
        k += 1;
    }
    Ok(SpecialSeries { laurent: lau, xlogx: minus_inv_hbar(), ..SpecialSeries::zero() })
}

/// `S_inf = -ln Gamma(X + 1/2) - X ln hbar + ln(2 pi)/2`, `X = x/hbar`, from Stirling's series.
pub fn s_inf_stirling(order: i32) -> Result<SpecialSeries> {
    let lg = log_gamma_asymp(&rat(1, 2), order);
    // ln Gamma(X + 1/2) in x and hbar
    let tail = lg.laurent.attach_power(XINV_BIG, HBAR, 1).rename(XINV_BIG, XINV);
    let xh = x_over_hbar(order);
    let lngamma = SpecialSeries {
        laurent: &xh.scale(&lg.x_coeff) + &tail,
        xlogx: TruncSeries::monomial(&[(HBAR, -1)], lg.x_log_x.clone(), &[]),
        logx: TruncSeries::constant(lg.log_x.clone()),
        loghbar: &xh.scale(&-&lg.x_log_x) + &TruncSeries::constant(-&lg.log_x),
        log_two_pi: lg.log_two_pi.clone(),
    };
    let rest = SpecialSeries {
        loghbar: xh.scale(&int(-1)),
        log_two_pi: rat(1, 2),
        ..SpecialSeries::zero()
    };
    let s = lngamma.neg().checked_add(&rest)?;
    Ok(SpecialSeries {
        laurent: s.laurent.prune(),
        xlogx: s.xlogx.prune(),
        logx: s.logx.prune(),
        loghbar: s.loghbar.prune(),
        log_two_pi: s.log_two_pi,
    })
}

/// Image of `z^i` under `z^{-1} -> (x - x ln x)/hbar`, `z^0 -> ln x`, `z^i -> -(i-1)! hbar^i x^{-i}`.
pub fn specialize_power(i: i32, order: i32) -> Result<SpecialSeries> {
    match i {
        -1 => Ok(SpecialSeries { laurent: x_over_hbar(order), xlogx: minus_inv_hbar(), ..SpecialSeries::zero() }),
        0 => Ok(SpecialSeries { logx: TruncSeries::one(), ..SpecialSeries::zero() }),
        i if i > 0 => {
            let mut s = zero_x(order);
            s.add_term(&[(XINV, i), (HBAR, i)], -Rational::from_integer(factorial(i as u64 - 1)));
            Ok(SpecialSeries::plain(s))
        }
        _ => Err(Error::InvalidArgument(format!("exponent {i} below -1 has no principal specialization"))),
    }
}

/// Principal specialization of a correlator, applied to each variable in `vars`
/// independently. The result is known through `x^{-order}` (or less, if a variable
/// is truncated lower). A term needing two logarithmic factors is rejected.
pub fn principal_specialize(corr: &TruncSeries, vars: &[&str], order: i32) -> Result<SpecialSeries> {
    let mut eff = order;
    for v in vars {
        if let Some(o) = corr.order_of(v) {
            eff = eff.min(o);
        }
        if corr.valuation(v).is_some_and(|m| m < -1) {
            return Err(Error::InvalidArgument(format!("`{v}` has a pole of order above one")));
        }
    }
    let idx: Vec<Option<usize>> = vars.iter().map(|v| corr.index_of(v)).collect();
    let others: Vec<(usize, &str)> = corr
        .vars()
        .iter()
        .enumerate()
        .filter(|(_, v)| !vars.contains(&v.name.as_str()))
        .map(|(i, v)| (i, v.name.as_str()))
        .collect();
    let mut acc = SpecialSeries::plain(zero_x(eff));
    for (e, c) in corr.terms() {
        let mut img = SpecialSeries::plain(xinv_series(eff).scale(c));
        for ix in &idx {
            let p = ix.map_or(0, |i| e[i]);
            img = img.checked_mul(&specialize_power(p, eff)?)?;
        }
        let mut rest = TruncSeries::one();
        for (i, n) in &others {
            rest = rest.shift(&[(n, e[*i])]);
        }
        img = img.mul_plain(&rest)?;
        acc = acc.checked_add(&img)?;
    }
    Ok(acc)
}

// ---------------------------------------------------------------- Gamma monomials

/// `coeff * (2 pi)^{two_pi_half/2} * hbar^{-X + hbar_pow} / Gamma(X + gamma_shift + 1/2)` at `q^{rd}`, `X = x/hbar`.
///
/// `weight_order` counts the `hbar` factors that came from an expanded `e^{t hbar r d}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GammaMonomial {
    pub d: usize,
    pub gamma_shift: i64,
    pub hbar_pow: i64,
    pub weight_order: u32,
    pub two_pi_half: i32,
    pub coeff: Rational,
}

impl GammaMonomial {
    fn key(&self) -> (usize, i64, i64, u32) {
        (self.d, self.gamma_shift, self.hbar_pow, self.weight_order)
    }

    /// The ratio to the degree-zero unit monomial, expanded in `1/x` through `order`.
    pub fn ratio_series(&self, order: i32) -> TruncSeries {
        half_product(self.gamma_shift, order).shift(&[(HBAR, (self.hbar_pow + self.gamma_shift) as i32)]).scale(&self.coeff)
    }
}

/// `c_d = (-1)^d / (r^d d!)`.
pub fn wave_coeff(r: u32, d: usize) -> Rational {
    sign(d) / (Rational::from_integer(BigInt::from(r).pow(d as u32)) * Rational::from_integer(factorial(d as u64)))
}

/// `Phi^d = c_d sqrt(2 pi) hbar^{-X - (r+1)d} / Gamma(X + rd + 1/2)`.
pub fn phi_d(r: u32, d: usize) -> GammaMonomial {
    GammaMonomial {
        d,
        gamma_shift: r as i64 * d as i64,
        hbar_pow: -((r as i64 + 1) * d as i64),
        weight_order: 0,
        two_pi_half: 1,
        coeff: wave_coeff(r, d),
    }
}

/// `sum_{d<=dmax} q^{rd} e^{t hbar r d} Phi^d` in Gamma form.
///
/// With `expanded = None` the evolution weight is the symbolic rescaling `q -> q e^{t hbar}`;
/// with `Some(n)` it has been multiplied out through relative order `hbar^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveSeries {
    pub r: u32,
    pub dmax: usize,
    pub t: Rational,
    pub expanded: Option<u32>,
    pub normalized_r1: bool,
    pub terms: Vec<GammaMonomial>,
}

fn assemble(terms: impl IntoIterator<Item = GammaMonomial>) -> Vec<GammaMonomial> {
    let mut map: BTreeMap<(usize, i64, i64, u32), (Rational, i32)> = BTreeMap::new();
    for m in terms {
        let e = map.entry(m.key()).or_insert((Rational::zero(), m.two_pi_half));
        e.0 += m.coeff;
    }
    map.into_iter()
        .filter(|(_, (c, _))| !c.is_zero())
        .map(|((d, gamma_shift, hbar_pow, weight_order), (coeff, two_pi_half))| GammaMonomial {
            d,
            gamma_shift,
            hbar_pow,
            weight_order,
            two_pi_half,
            coeff,
        })
        .collect()
}

/// Closed-form wave function at `t = 0` through `q^{r dmax}`. For `r = 1` these are
/// already the terms of the series normalized by `e^{-q/hbar^2}`.
pub fn wave_closed(r: u32, dmax: usize) -> WaveSeries {
    let terms: Vec<GammaMonomial> = (0..=dmax).collect::<Vec<_>>().par_iter().map(|&d| phi_d(r, d)).collect();
    WaveSeries { r, dmax, t: Rational::zero(), expanded: None, normalized_r1: r == 1, terms: assemble(terms) }
}

impl WaveSeries {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self, d: usize) -> Vec<&GammaMonomial> {
        self.terms.iter().filter(|m| m.d == d).collect()
    }

    /// Drop everything above `q^{r dmax}`.
    pub fn through(&self, dmax: usize) -> WaveSeries {
        WaveSeries { dmax: dmax.min(self.dmax), terms: self.terms.iter().filter(|m| m.d <= dmax).cloned().collect(), ..self.clone() }
    }

    /// Attach the symbolic evolution `q -> q e^{t hbar}`.
    pub fn with_t(&self, t: &Rational) -> Result<WaveSeries> {
        if self.expanded.is_some() {
            return Err(Error::InvalidArgument("evolution weights already expanded".into()));
        }
        Ok(WaveSeries { t: &self.t + t, ..self.clone() })
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|m| {
                json!({
                    "d": m.d,
                    "coeff": m.coeff.to_string(),
                    "hbar_pow": m.hbar_pow,
                    "gamma_shift": m.gamma_shift,
                    "weight_order": m.weight_order,
                })
            })
            .collect();
        json!({
            "r": self.r,
            "t": self.t.to_string(),
            "expanded": self.expanded,
            "normalized_r1": self.normalized_r1,
            "terms": terms,
        })
    }
}

impl fmt::Display for WaveSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let weight = if self.t.is_zero() || self.expanded.is_some() {
            String::new()
        } else {
            format!(" e^({} hbar r d)", self.t)
        };
        writeln!(f, "Phi(x) = sqrt(2 pi) sum_d q^(r d){weight} Phi^d(x),  r = {}, X = x/hbar", self.r)?;
        for m in &self.terms {
            writeln!(
                f,
                "  d={}: ({}) q^{} hbar^(-X{:+}) / Gamma(X{:+} + 1/2)",
                m.d,
                m.coeff,
                self.r as usize * m.d,
                m.hbar_pow,
                m.gamma_shift
            )?;
        }
        Ok(())
    }
}

/// Multiply the degree-`d` terms by `e^{t hbar r d}` through relative order `hbar^order`.
pub fn t_evolve(wave: &WaveSeries, t: &Rational, order: u32) -> Result<WaveSeries> {
    if wave.expanded.is_some() {
        return Err(Error::InvalidArgument("evolution weights already expanded".into()));
    }
    let total = &wave.t + t;
    let mut out = Vec::new();
    for m in &wave.terms {
        let rate = &total * int(wave.r as i64 * m.d as i64);
        let mut c = Rational::one();
        for j in 0..=order {
            if j + m.weight_order > order {
                break;
            }
            out.push(GammaMonomial { hbar_pow: m.hbar_pow + j as i64, weight_order: m.weight_order + j, coeff: &m.coeff * &c, ..m.clone() });
            c = c * &rate / int(j as i64 + 1);
        }
    }
    Ok(WaveSeries { t: total, expanded: Some(order), terms: assemble(out), ..wave.clone() })
}

/// `(e^{-hbar d/dx} + q^r e^{r t hbar} e^{r hbar d/dx} - x + hbar/2) Phi`, through the
/// highest degree present in `wave`.
pub fn quantum_curve_apply(wave: &WaveSeries) -> WaveSeries {
    quantum_curve_apply_with(wave, &rat(1, 2))
}

/// As [`quantum_curve_apply`] with `half_hbar * hbar` in place of `hbar/2`.
pub fn quantum_curve_apply_with(wave: &WaveSeries, half_hbar: &Rational) -> WaveSeries {
    let r = wave.r as i64;
    let mut out = Vec::new();
    for m in &wave.terms {
        let k = m.gamma_shift;
        // e^{-hbar d}: Gamma(X + k - 1/2) brings hbar and shifts k -> k-1
        out.push(GammaMonomial { gamma_shift: k - 1, hbar_pow: m.hbar_pow + 1, ..m.clone() });
        // -x = -hbar X, X = (X + k - 1/2) - (k - 1/2)
        out.push(GammaMonomial { gamma_shift: k - 1, hbar_pow: m.hbar_pow + 1, coeff: -&m.coeff, ..m.clone() });
        out.push(GammaMonomial { hbar_pow: m.hbar_pow + 1, coeff: &m.coeff * rat(2 * k - 1, 2), ..m.clone() });
        out.push(GammaMonomial { hbar_pow: m.hbar_pow + 1, coeff: &m.coeff * half_hbar, ..m.clone() });
        // q^r e^{r t hbar} e^{r hbar d}: X -> X + r
        if m.d < wave.dmax {
            let base = GammaMonomial { d: m.d + 1, gamma_shift: k + r, hbar_pow: m.hbar_pow - r, ..m.clone() };
            match wave.expanded {
                None => out.push(base),
                Some(order) => {
                    let rate = &wave.t * int(r);
                    let mut c = Rational::one();
                    for j in 0..=order {
                        if m.weight_order + j > order {
                            break;
                        }
                        out.push(GammaMonomial {
                            hbar_pow: base.hbar_pow + j as i64,
                            weight_order: m.weight_order + j,
                            coeff: &base.coeff * &c,
                            ..base.clone()
                        });
                        c = c * &rate / int(j as i64 + 1);
                    }
                }
            }
        }
    }
    WaveSeries { terms: assemble(out), ..wave.clone() }
}

/// `(e^{-hbar d} - x + hbar/2) Phi^d + e^{r hbar d} Phi^{d-1}` in Gamma form.
pub fn three_term_residual(r: u32, d: usize, half_hbar: &Rational) -> WaveSeries {
    assert!(d >= 1, "three-term relation needs d >= 1");
    let w = WaveSeries {
        r,
        dmax: d,
        t: Rational::zero(),
        expanded: None,
        normalized_r1: r == 1,
        terms: vec![phi_d(r, d - 1), phi_d(r, d)],
    };
    let img = quantum_curve_apply_with(&w, half_hbar);
    WaveSeries { terms: img.terms.into_iter().filter(|m| m.d == d).collect(), ..img }
}

/// The three-term relation holds exactly; equivalently `c_d r d + c_{d-1} = 0`.
pub fn three_term_check(r: u32, d: usize) -> bool {
    let scalar = wave_coeff(r, d) * int(r as i64 * d as i64) + wave_coeff(r, d - 1);
    three_term_residual(r, d, &rat(1, 2)).is_zero() && scalar.is_zero()
}

/// Apply the `x`-derivative lift `k` times: `1/Gamma(X + j + 1/2) -> hbar^k / Gamma(X + j - k + 1/2)`.
pub fn lift_apply(wave: &WaveSeries, k: u32) -> WaveSeries {
    let terms = wave
        .terms
        .iter()
        .map(|m| GammaMonomial { gamma_shift: m.gamma_shift - k as i64, hbar_pow: m.hbar_pow + k as i64, ..m.clone() });
    WaveSeries { terms: assemble(terms), ..wave.clone() }
}

/// Secondary check of the curve on `f_d = Phi^d/Phi^0` in `1/x`:
/// `(x - hbar/2) f_d(x - hbar) - x f_d + (hbar/2) f_d + f_{d-1}(x + r hbar) prod_{i=1}^r 1/(x + (i-1/2) hbar)`.
/// Returns the residual, valid through `xinv^(order-1)`.
pub fn curve_series_residual(r: u32, d: usize, order: i32) -> Result<TruncSeries> {
    let f = phi_d(r, d).ratio_series(order);
    let x_minus = {
        let mut s = zero_x(order);
        s.add_term(&[(XINV, -1)], int(1));
        s.add_term(&[(HBAR, 1)], rat(-1, 2));
        s
    };
    let x = TruncSeries::monomial(&[(XINV, -1)], int(1), &[]);
    let half = TruncSeries::monomial(&[(HBAR, 1)], rat(1, 2), &[]);
    let mut res = x_minus.checked_mul(&shift_x(&f, &int(-1))?)?;
    res = res.checked_sub(&x.checked_mul(&f)?)?;
    res = res.checked_add(&half.checked_mul(&f)?)?;
    if d >= 1 {
        let prev = shift_x(&phi_d(r, d - 1).ratio_series(order), &int(r as i64))?;
        res = res.checked_add(&half_product(r as i64, order).checked_mul(&prev)?)?;
    }
    res.truncate(XINV, order - 1)
}
