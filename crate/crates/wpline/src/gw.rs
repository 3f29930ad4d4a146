//! Stationary Gromov-Witten invariants of `P[r]` read off wedge correlators.
//!
//! `G_d(z_1..z_n) = <alpha_1^{rd} prod E_0(hbar z_i) alpha_{-r}^d> / (d!(rd)! r^d hbar^{(r+1)d+n})`.
//! In the connected series the monomial `hbar^{2g-2} prod z_i^{k_i+1}` carries
//! `<tau_{k_1}(pt) ... tau_{k_n}(pt)>_{g,d}`; homogeneity forces
//! `sum k_i = 2g - 2 + (r+1)d`.

use num::{BigInt, One};

use crate::error::{Error, Result};
use crate::parallel::*;
use crate::series::{factorial, int, rat, Rational, TruncSeries, Var, HBAR, QDEG};
use crate::wedge::{connected_vev_recursion, disconnected_vev_char_sum, vev_normalizer, with_hbar, zvar};

/// A connected or disconnected stationary series in `z1..zn` and `hbar`.
#[derive(Clone, Debug, PartialEq)]
pub struct GwSeries {
    pub r: u32,
    pub d: usize,
    pub n: usize,
    pub order: i32,
    pub connected: bool,
    pub series: TruncSeries,
}

fn normalize(r: u32, d: usize, n: usize, raw: &TruncSeries) -> TruncSeries {
    let shift = -(((r as i32) + 1) * d as i32 + n as i32);
    with_hbar(raw, n).shift(&[(HBAR, shift)]).scale(&(Rational::one() / vev_normalizer(r, d)))
}

/// Connected `G_d` through `z_i^order`, from the commutator recursion.
pub fn stationary_series(r: u32, d: usize, n: usize, order: i32) -> Result<GwSeries> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be positive".into()));
    }
    let raw = connected_vev_recursion(r, d, n, order)?;
    Ok(GwSeries { r, d, n, order, connected: true, series: normalize(r, d, n, &raw) })
}

/// Disconnected `G_d` through `z_i^order`, from the character sum.
pub fn disconnected_series(r: u32, d: usize, n: usize, order: i32) -> Result<GwSeries> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be positive".into()));
    }
    let raw = disconnected_vev_char_sum(r, d, n, order)?;
    Ok(GwSeries { r, d, n, order, connected: false, series: normalize(r, d, n, &raw) })
}

/// Genus carried by the insertion vector `k` in degree `d`, if integral.
pub fn genus_of(r: u32, d: usize, k: &[i32]) -> Option<i32> {
    let s: i32 = k.iter().sum::<i32>() - (r as i32 + 1) * d as i32 + 2;
    (s % 2 == 0).then_some(s / 2)
}

/// `<prod tau_{k_i}(pt)>_{g,d}`: the coefficient of `hbar^{2g-2} prod z_i^{k_i+1}`.
pub fn extract_invariant(gw: &GwSeries, g: i32, k: &[i32]) -> Result<Rational> {
    if k.len() != gw.n {
        return Err(Error::InvalidArgument(format!("{} insertions for an {}-point series", k.len(), gw.n)));
    }
    for &ki in k {
        if ki + 1 > gw.order {
            return Err(Error::PrecisionExceeded { requested: ki + 1, available: gw.order });
        }
    }
    let names: Vec<String> = (1..=gw.n).map(zvar).collect();
    let mut exps: Vec<(&str, i32)> = names.iter().zip(k).map(|(n, &ki)| (n.as_str(), ki + 1)).collect();
    exps.push((HBAR, 2 * g - 2));
    Ok(gw.series.coeff(&exps))
}

/// The genus-`g` part: the coefficient of `hbar^{2g-2}`, a series in the `z_i`.
pub fn genus_component(gw: &GwSeries, g: i32) -> TruncSeries {
    gw.series.coefficient_of(HBAR, 2 * g - 2).prune()
}

/// True when every `hbar` exponent in the series is `2g - 2` for an integer `g`
/// consistent with the `z` degree of the term.
pub fn genus_grading_ok(gw: &GwSeries) -> bool {
    let s = &gw.series;
    let Some(h) = s.index_of(HBAR) else { return s.is_zero() };
    let zi: Vec<usize> = (1..=gw.n).filter_map(|i| s.index_of(&zvar(i))).collect();
    s.terms().keys().all(|e| {
        let zdeg: i32 = zi.iter().map(|&i| e[i]).sum();
        let expect = zdeg - (gw.r as i32 + 1) * gw.d as i32 - gw.n as i32;
        e[h] == expect && e[h] % 2 == 0
    })
}

/// One row of an invariant table.
#[derive(Clone, Debug, PartialEq)]
pub struct GwRow {
    pub r: u32,
    pub g: i32,
    pub d: usize,
    pub k: Vec<i32>,
    pub value: Rational,
}

fn nonincreasing(total: i32, parts: usize, max: i32) -> Vec<Vec<i32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=max.min(total)).rev() {
        for mut rest in nonincreasing(total - first, parts - 1, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Stationary invariants with `n` insertions, `d = 0..=dmax`, genus `g`,
/// all `k_i >= 0` (listed once per nonincreasing vector).
pub fn gw_table(r: u32, dmax: usize, g: i32, n: usize) -> Result<Vec<GwRow>> {
    if n == 0 {
        return Err(Error::InvalidArgument("at least one insertion".into()));
    }
    let jobs: Vec<(usize, Vec<i32>)> = (0..=dmax)
        .flat_map(|d| {
            let total = 2 * g - 2 + (r as i32 + 1) * d as i32;
            let ks = if total < 0 { vec![] } else { nonincreasing(total, n, total) };
            ks.into_iter().map(move |k| (d, k))
        })
        .collect();
    let rows: Vec<Result<GwRow>> = jobs
        .par_iter()
        .map(|(d, k)| {
            let order = k.iter().max().copied().unwrap_or(0) + 1;
            let gw = stationary_series(r, *d, n, order)?;
            Ok(GwRow { r, g, d: *d, k: k.clone(), value: extract_invariant(&gw, g, k)? })
        })
        .collect();
    rows.into_iter().collect()
}

/// `[z_0^1] G_d(z_0, z_1..z_n) = (rd - 1/24) G_d(z_1..z_n)` for the disconnected series.
pub fn divisor_check(r: u32, d: usize, n: usize, order: i32) -> Result<bool> {
    let big = disconnected_series(r, d, n + 1, order.max(1))?;
    let small = disconnected_series(r, d, n, order.max(1))?;
    let mut lhs = big.series.coefficient_of(&zvar(1), 1);
    for i in 2..=n + 1 {
        lhs = lhs.rename(&zvar(i), &zvar(i - 1));
    }
    let factor = int(r as i64 * d as i64) - rat(1, 24);
    let rhs = small.series.scale(&factor);
    Ok(lhs.same_coefficients(&rhs))
}

/// The factor relating the wave function to the vev: `e^{c hbar} * series`, with
/// `c = -t/24` kept symbolic and `series = exp(q e^{t hbar}/hbar^2)` when `r = 1`
/// (otherwise 1). `q` is the degree counter [`QDEG`].
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizationFactor {
    pub hbar_exponent: Rational,
    pub series: TruncSeries,
}

impl NormalizationFactor {
    /// Multiply out `e^{c hbar}` through `hbar^hbar_order`.
    pub fn expanded(&self, hbar_order: i32) -> TruncSeries {
        let mut e = TruncSeries::one();
        let mut term = TruncSeries::one();
        for k in 1..=hbar_order.max(0) {
            term = term.shift(&[(HBAR, 1)]).scale(&(&self.hbar_exponent / int(k as i64)));
            e = &e + &term;
        }
        let e = e.truncate(HBAR, hbar_order).unwrap();
        &self.series * &e
    }
}

/// `e^{-t hbar/24}`, times `exp(q e^{t hbar}/hbar^2)` for `r = 1`, through `q^dmax`
/// and `hbar^hbar_order`.
pub fn normalization_factor(r: u32, t: &Rational, dmax: usize, hbar_order: i32) -> NormalizationFactor {
    let hbar_exponent = -t / int(24);
    if r != 1 {
        return NormalizationFactor { hbar_exponent, series: TruncSeries::one() };
    }
    // sum_m q^m e^{m t hbar} / (m! hbar^{2m}); e^{m t hbar} needed through hbar^{order + 2m}
    let mut s = TruncSeries::one().declare(Var::truncated(QDEG, dmax as i32));
    for m in 1..=dmax {
        let mut e = TruncSeries::zero();
        let mut c = Rational::one();
        for j in 0..=(hbar_order + 2 * m as i32).max(0) {
            e = &e + &TruncSeries::monomial(&[(HBAR, j - 2 * m as i32), (QDEG, m as i32)], c.clone(), &[]);
            c = c * int(m as i64) * t / int(j as i64 + 1);
        }
        s = &s + &e.scale(&Rational::new(BigInt::one(), factorial(m as u64)));
    }
    let s = s.declare(Var { name: HBAR.into(), floor: -2 * dmax as i32, order: Some(hbar_order) });
    NormalizationFactor { hbar_exponent, series: s }
}
