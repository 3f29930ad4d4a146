//! Vacuum expectations on the infinite wedge.
//!
//! Two independent routes lead to the same connected correlators:
//!
//! * the commutator recursion for words in the operators `E_a(w)`, applied after
//!   conjugating every `E_0` by `e^{alpha_1}` (so the long run of `alpha_1` on the
//!   left disappears);
//! * the character sum over partitions of `rd`, followed by inclusion-exclusion
//!   over set partitions of the marked points.
//!
//! Correlators are series in the variables `w1, w2, ...` (the arguments of the
//! `E_0` insertions); [`with_hbar`] rewrites `w_i` as `hbar z_i`.

use std::collections::{BTreeMap, HashMap};

use num::{BigInt, One, Zero};

use crate::error::{Error, Result};
use crate::parallel::*;
use crate::partitions::{rectangle_weights, shifted_power_sum};
use crate::series::{factorial, int, univariate_laurent, Rational, TruncSeries, Var, HBAR};
use crate::special::{inv_zeta_series, s_coeffs, zeta_coeffs, zeta_series};

/// Name of the `i`-th (1-based) insertion variable.
pub fn wvar(i: usize) -> String {
    format!("w{i}")
}

/// Name of the `i`-th (1-based) GW insertion variable.
pub fn zvar(i: usize) -> String {
    format!("z{i}")
}

/// One factor `E_label(sum_j arg[j] w_{j+1})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EFactor {
    pub label: i64,
    pub arg: Vec<i64>,
}

/// An ordered product of `E` operators whose arguments are integer linear forms
/// in `nvars` insertion variables. `alpha_n` is `E_n(0)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EWord {
    pub nvars: usize,
    pub factors: Vec<EFactor>,
}

impl EWord {
    pub fn new(nvars: usize) -> Self {
        EWord { nvars, factors: Vec::new() }
    }

    /// Append `E_label(w_var)` (1-based variable index).
    pub fn e(mut self, label: i64, var: usize) -> Self {
        assert!(var >= 1 && var <= self.nvars, "variable index out of range");
        let mut arg = vec![0; self.nvars];
        arg[var - 1] = 1;
        self.factors.push(EFactor { label, arg });
        self
    }

    /// Append `alpha_n` `count` times.
    pub fn alpha(mut self, n: i64, count: usize) -> Self {
        for _ in 0..count {
            self.factors.push(EFactor { label: n, arg: vec![0; self.nvars] });
        }
        self
    }

    /// `alpha_1^{prefix} E_0(w_1) ... E_0(w_n) alpha_{-r}^{suffix}`.
    pub fn stationary(r: i64, n: usize, prefix: usize, suffix: usize) -> Self {
        let mut w = EWord::new(n).alpha(1, prefix);
        for i in 1..=n {
            w = w.e(0, i);
        }
        w.alpha(-r, suffix)
    }

    pub fn energy(&self) -> i64 {
        self.factors.iter().map(|f| f.label).sum()
    }
}

fn linear_form(arg: &[i64], order: i32) -> TruncSeries {
    let mut s = TruncSeries::zero();
    for (j, &c) in arg.iter().enumerate() {
        if c != 0 {
            s = &s + &TruncSeries::var(&wvar(j + 1), Some(order)).scale(&int(c));
        }
    }
    s
}

fn base_series(nvars: usize, order: i32) -> TruncSeries {
    let mut s = TruncSeries::one();
    for j in 1..=nvars {
        s = s.declare(Var::truncated(&wvar(j), order));
    }
    s
}

/// Coefficients of `a S(a s)/S(s)` through `s^deg`.
fn ratio_coeffs(a: i64, deg: usize) -> Vec<Rational> {
    let s = s_coeffs(deg);
    let num: Vec<Rational> = s.iter().enumerate().map(|(k, c)| c * num::pow(int(a), k) * int(a)).collect();
    // divide power series num / s (s[0] = 1)
    let mut out = vec![Rational::zero(); deg + 1];
    for k in 0..=deg {
        let mut v = num[k].clone();
        for j in 1..=k {
            v -= &s[j] * &out[k - j];
        }
        out[k] = v;
    }
    out
}

/// Connected vacuum expectation of an `E`-word, every variable truncated at `order`.
///
/// A single `E_0(w)` gives `1/zeta(w)`; for longer words the result is a power series.
pub fn connected_e(word: &EWord, order: i32) -> Result<TruncSeries> {
    if order < 0 {
        return Err(Error::InvalidArgument("negative order".into()));
    }
    let mut memo = HashMap::new();
    let deg = word.nvars * order as usize + 2;
    let ctx = Ctx { nvars: word.nvars, order, zeta: zeta_coeffs(deg), deg };
    ctx.eval(&word.factors, &mut memo)
}

struct Ctx {
    nvars: usize,
    order: i32,
    zeta: Vec<Rational>,
    deg: usize,
}

impl Ctx {
    fn eval(&self, f: &[EFactor], memo: &mut HashMap<Vec<EFactor>, TruncSeries>) -> Result<TruncSeries> {
        let zero = || base_series(self.nvars, self.order).scale(&Rational::zero());
        if f.is_empty() {
            return Ok(base_series(self.nvars, self.order));
        }
        if f.iter().map(|x| x.label).sum::<i64>() != 0 {
            return Ok(zero());
        }
        if f.len() == 1 {
            let arg = &f[0].arg;
            let nz: Vec<usize> = (0..arg.len()).filter(|&j| arg[j] != 0).collect();
            if nz.len() != 1 || arg[nz[0]] != 1 {
                return Err(Error::InvalidArgument("a lone E_0 needs a single-variable argument".into()));
            }
            let mut iz = inv_zeta_series(&wvar(nz[0] + 1), self.order);
            for j in (1..=self.nvars).filter(|&j| j != nz[0] + 1) {
                iz = iz.declare(Var::truncated(&wvar(j), self.order));
            }
            return Ok(iz);
        }
        let a1 = f[0].label;
        if a1 <= 0 {
            return Ok(zero());
        }
        if f.len() == 2 {
            let s: Vec<i64> = f[0].arg.iter().zip(&f[1].arg).map(|(x, y)| x + y).collect();
            let h = ratio_coeffs(a1, self.deg);
            return Ok(base_series(self.nvars, self.order).mul_by_composite(&h, &linear_form(&s, self.order)));
        }
        if let Some(v) = memo.get(f) {
            return Ok(v.clone());
        }
        let mut acc = zero();
        for i in 1..f.len() {
            let det: Vec<i64> = f[i].arg.iter().zip(&f[0].arg).map(|(zi, z1)| a1 * zi - f[i].label * z1).collect();
            if det.iter().all(|&c| c == 0) {
                continue;
            }
            let mut rest: Vec<EFactor> = f[1..].to_vec();
            let m = &mut rest[i - 1];
            m.label += a1;
            for (x, y) in m.arg.iter_mut().zip(&f[0].arg) {
                *x += y;
            }
            let g = self.eval(&rest, memo)?;
            if g.is_zero() {
                continue;
            }
            acc = &acc + &g.mul_by_composite(&self.zeta, &linear_form(&det, self.order));
        }
        memo.insert(f.to_vec(), acc.clone());
        Ok(acc)
    }
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `<alpha_1^{rd} E_0(w_1)...E_0(w_n) alpha_{-r}^d>` with every operator in one
/// connected block, via the recursion after conjugating by `e^{alpha_1}`:
/// `(rd)! sum_{|k| = rd} prod_i zeta(w_i)^{k_i}/k_i! <E_{k_1}(w_1)...E_{k_n}(w_n) alpha_{-r}^d>`.
pub fn connected_vev_recursion(r: u32, d: usize, n: usize, order: i32) -> Result<TruncSeries> {
    if n == 0 {
        // only the pair <alpha_1 alpha_{-1}> is connected
        let v = if r == 1 && d == 1 { int(1) } else { Rational::zero() };
        return Ok(TruncSeries::constant(v));
    }
    let rd = r as usize * d;
    let comps = compositions(rd, n);
    let pieces: Vec<Result<TruncSeries>> = comps
        .par_iter()
        .map(|k| {
            let mut word = EWord::new(n);
            for (i, &ki) in k.iter().enumerate() {
                word = word.e(ki as i64, i + 1);
            }
            word = word.alpha(-(r as i64), d);
            let c = connected_e(&word, order)?;
            if c.is_zero() {
                return Ok(c);
            }
            let mut pre = TruncSeries::one();
            let mut denom = BigInt::one();
            for (i, &ki) in k.iter().enumerate() {
                if ki > 0 {
                    pre = &pre * &zeta_series(&wvar(i + 1), order).pow(ki as u32);
                    denom *= factorial(ki as u64);
                }
            }
            Ok((&pre * &c).scale(&Rational::new(BigInt::one(), denom)))
        })
        .collect();
    let mut acc = base_series(n, order).scale(&Rational::zero());
    for p in pieces {
        acc = &acc + &p?;
    }
    Ok(acc.scale(&Rational::from_integer(factorial(rd as u64))))
}

/// Eigenvalue of `E_0(w)` on `v_lambda`: `1/zeta(w) + sum_{m>=1} p_m(lambda) w^m/m!`.
pub fn e0_eigenvalue(lambda: &crate::partitions::Partition, var: &str, order: i32) -> TruncSeries {
    let mut terms = Vec::new();
    for m in 1..=order {
        let c = shifted_power_sum(lambda, m as u32) / Rational::from_integer(factorial(m as u64));
        terms.push((m, c));
    }
    let s = univariate_laurent(var, terms, Some(order));
    &s + &inv_zeta_series(var, order)
}

/// `<alpha_1^{rd} E_0(w_1)...E_0(w_n) alpha_{-r}^d>` (disconnected) as the character sum
/// `sum_{|lambda| = rd} dim(lambda) chi^lambda_{(r)^d} prod_i E_lambda(w_i)`.
pub fn disconnected_vev_char_sum(r: u32, d: usize, n: usize, order: i32) -> Result<TruncSeries> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be positive".into()));
    }
    let weights = rectangle_weights(r, d);
    let pieces: Vec<TruncSeries> = weights
        .par_iter()
        .map(|(lambda, w)| {
            let mut p = TruncSeries::constant(Rational::from_integer(w.clone()));
            for i in 1..=n {
                p = &p * &e0_eigenvalue(lambda, &wvar(i), order);
            }
            p
        })
        .collect();
    let mut acc = base_series(n, order).scale(&Rational::zero());
    for p in pieces {
        acc = &acc + &p;
    }
    Ok(acc)
}

/// Rewrite `w_i -> hbar z_i` for `i = 1..=n`.
pub fn with_hbar(s: &TruncSeries, n: usize) -> TruncSeries {
    let mut out = s.clone();
    for i in 1..=n {
        out = out.attach_power(&wvar(i), HBAR, 1).rename(&wvar(i), &zvar(i));
    }
    out
}

/// `D^d_k = <alpha_1^{rd} W_0^{k_1} ... W_0^{k_n} alpha_{-r}^d>`.
pub fn w_vev(r: u32, d: usize, k: &[u32]) -> Rational {
    rectangle_weights(r, d)
        .iter()
        .map(|(lambda, w)| {
            k.iter().fold(Rational::from_integer(w.clone()), |acc, &s| {
                if s == 0 {
                    Rational::zero()
                } else {
                    acc * shifted_power_sum(lambda, s)
                }
            })
        })
        .fold(Rational::zero(), |a, b| a + b)
}

/// `D^d_k` with the pure `alpha_1 alpha_{-1}` contractions stripped. For `r >= 2`
/// nothing is stripped; for `r = 1` the generating series in `q` is divided by `e^q`:
/// `d!^2 sum_j (-1)^j/j! D^{d-j}_k/((d-j)!)^2`.
pub fn w_vev_normalized(r: u32, d: usize, k: &[u32]) -> Rational {
    if r != 1 {
        return w_vev(r, d, k);
    }
    let fd = Rational::from_integer(factorial(d as u64));
    let mut acc = Rational::zero();
    for j in 0..=d {
        let m = d - j;
        let fm = Rational::from_integer(factorial(m as u64));
        let sign = if j % 2 == 0 { int(1) } else { int(-1) };
        acc += sign * w_vev(1, m, k) / (Rational::from_integer(factorial(j as u64)) * &fm * &fm);
    }
    acc * &fd * &fd
}

/// A family of correlators indexed by degree `d` and a subset (bitmask) of the
/// `n` marked points; the series for a subset only involves that subset's variables.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelatorFamily {
    pub n: usize,
    pub dmax: usize,
    pub entries: BTreeMap<(usize, u32), TruncSeries>,
}

impl CorrelatorFamily {
    pub fn build(n: usize, dmax: usize, f: impl Fn(usize, &[usize]) -> Result<TruncSeries> + Sync) -> Result<Self> {
        let keys: Vec<(usize, u32)> = (0..=dmax).flat_map(|d| (0..(1u32 << n)).map(move |m| (d, m))).collect();
        let vals: Vec<Result<TruncSeries>> = keys.par_iter().map(|&(d, m)| f(d, &members(m))).collect();
        let mut entries = BTreeMap::new();
        for (k, v) in keys.into_iter().zip(vals) {
            entries.insert(k, v?);
        }
        Ok(CorrelatorFamily { n, dmax, entries })
    }

    pub fn get(&self, d: usize, mask: u32) -> &TruncSeries {
        &self.entries[&(d, mask)]
    }
}

/// 1-based members of a bitmask.
pub fn members(mask: u32) -> Vec<usize> {
    (0..32).filter(|b| mask & (1 << b) != 0).map(|b| b + 1).collect()
}

fn series_in_q_exp(c: &[TruncSeries]) -> Vec<TruncSeries> {
    // F = exp(G), G[0] = 0: n F_n = sum_{k=1}^n k G_k F_{n-k}
    let n = c.len();
    let mut f = vec![TruncSeries::one(); n];
    for m in 1..n {
        let mut acc = TruncSeries::zero();
        for k in 1..=m {
            acc = &acc + &(&c[k] * &f[m - k]).scale(&int(k as i64));
        }
        f[m] = acc.scale(&Rational::new(BigInt::one(), BigInt::from(m)));
    }
    f
}

fn series_in_q_log(f: &[TruncSeries]) -> Vec<TruncSeries> {
    let n = f.len();
    let mut g = vec![TruncSeries::zero(); n];
    for m in 1..n {
        let mut acc = f[m].scale(&int(m as i64));
        for k in 1..m {
            acc = &acc - &(&g[k] * &f[m - k]).scale(&int(k as i64));
        }
        g[m] = acc.scale(&Rational::new(BigInt::one(), BigInt::from(m)));
    }
    g
}

fn series_in_q_inverse(f: &[TruncSeries]) -> Vec<TruncSeries> {
    let n = f.len();
    let mut g = vec![TruncSeries::zero(); n];
    g[0] = TruncSeries::one();
    for m in 1..n {
        let mut acc = TruncSeries::zero();
        for k in 1..=m {
            acc = &acc - &(&f[k] * &g[m - k]);
        }
        g[m] = acc;
    }
    g
}

/// Sub-masks of `mask` that contain its lowest member.
fn blocks_with_min(mask: u32) -> Vec<u32> {
    let low = mask & mask.wrapping_neg();
    let rest = mask & !low;
    let mut out = Vec::new();
    let mut sub = rest;
    loop {
        out.push(sub | low);
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
    out
}

fn check_zero_point_unit(d0: &TruncSeries) -> Result<()> {
    if !d0.same_coefficients(&TruncSeries::one()) {
        return Err(Error::InvalidArgument(format!("degree-0 empty correlator must be 1, got {d0}")));
    }
    Ok(())
}

/// Disconnected to connected: inverts
/// `D_d(S) = sum over set partitions of S, degree splits and repeated empty blocks of prod C`.
pub fn connected_from_disconnected(disc: &CorrelatorFamily) -> Result<CorrelatorFamily> {
    let (n, dmax) = (disc.n, disc.dmax);
    check_zero_point_unit(disc.get(0, 0))?;
    let e0: Vec<TruncSeries> = (0..=dmax).map(|d| disc.get(d, 0).clone()).collect();
    let c0 = series_in_q_log(&e0);
    let e0inv = series_in_q_inverse(&e0);
    // H_k(S) = sum_j e0inv[j] D_{k-j}(S)
    let mut h: BTreeMap<(usize, u32), TruncSeries> = BTreeMap::new();
    for mask in 0..(1u32 << n) {
        for k in 0..=dmax {
            let mut acc = TruncSeries::zero();
            for j in 0..=k {
                acc = &acc + &(&e0inv[j] * disc.get(k - j, mask));
            }
            h.insert((k, mask), acc);
        }
    }
    let mut conn: BTreeMap<(usize, u32), TruncSeries> = BTreeMap::new();
    for k in 0..=dmax {
        conn.insert((k, 0), c0[k].clone());
    }
    let mut masks: Vec<u32> = (1..(1u32 << n)).collect();
    masks.sort_by_key(|m| m.count_ones());
    for mask in masks {
        for k in 0..=dmax {
            let mut acc = h[&(k, mask)].clone();
            for b in blocks_with_min(mask) {
                for j in 0..=k {
                    if b == mask && j == k {
                        continue;
                    }
                    let rest = mask & !b;
                    let hr = if rest == 0 {
                        if k == j { TruncSeries::one() } else { continue }
                    } else {
                        h[&(k - j, rest)].clone()
                    };
                    acc = &acc - &(&conn[&(j, b)] * &hr);
                }
            }
            conn.insert((k, mask), acc);
        }
    }
    Ok(CorrelatorFamily { n, dmax, entries: conn })
}

/// Connected to disconnected (the forward direction of the same relation).
pub fn disconnected_from_connected(conn: &CorrelatorFamily) -> Result<CorrelatorFamily> {
    let (n, dmax) = (conn.n, conn.dmax);
    if !conn.get(0, 0).is_zero() {
        return Err(Error::InvalidArgument("degree-0 empty connected correlator must vanish".into()));
    }
    let c0: Vec<TruncSeries> = (0..=dmax).map(|d| conn.get(d, 0).clone()).collect();
    let e0 = series_in_q_exp(&c0);
    let mut h: BTreeMap<(usize, u32), TruncSeries> = BTreeMap::new();
    for k in 0..=dmax {
        h.insert((k, 0), if k == 0 { TruncSeries::one() } else { TruncSeries::zero() });
    }
    let mut masks: Vec<u32> = (1..(1u32 << n)).collect();
    masks.sort_by_key(|m| m.count_ones());
    for mask in masks {
        for k in 0..=dmax {
            let mut acc = TruncSeries::zero();
            for b in blocks_with_min(mask) {
                for j in 0..=k {
                    acc = &acc + &(conn.get(j, b) * &h[&(k - j, mask & !b)]);
                }
            }
            h.insert((k, mask), acc);
        }
    }
    let mut entries = BTreeMap::new();
    for mask in 0..(1u32 << n) {
        for k in 0..=dmax {
            let mut acc = TruncSeries::zero();
            for j in 0..=k {
                acc = &acc + &(&e0[j] * &h[&(k - j, mask)]);
            }
            entries.insert((k, mask), acc);
        }
    }
    Ok(CorrelatorFamily { n, dmax, entries })
}

/// `d! (rd)! r^d`.
pub fn vev_normalizer(r: u32, d: usize) -> Rational {
    Rational::from_integer(factorial(d as u64) * factorial((r as usize * d) as u64) * BigInt::from(r).pow(d as u32))
}

/// Disconnected family `<alpha_1^{rd} prod_{i in S} E_0(w_i) alpha_{-r}^d> / (d!(rd)! r^d)`
/// from character sums.
pub fn normalized_disconnected_family(r: u32, n: usize, dmax: usize, order: i32) -> Result<CorrelatorFamily> {
    CorrelatorFamily::build(n, dmax, |d, s| {
        let v = disconnected_vev_char_sum(r, d, s.len(), order)?;
        let v = relabel(&v, s);
        Ok(v.scale(&(Rational::one() / vev_normalizer(r, d))))
    })
}

/// Connected family from the recursion, with the same normalization.
pub fn normalized_connected_family_recursion(r: u32, n: usize, dmax: usize, order: i32) -> Result<CorrelatorFamily> {
    CorrelatorFamily::build(n, dmax, |d, s| {
        let v = connected_vev_recursion(r, d, s.len(), order)?;
        let v = relabel(&v, s);
        Ok(v.scale(&(Rational::one() / vev_normalizer(r, d))))
    })
}

/// Rename `w1..wk` to `w_{s[0]}..w_{s[k-1]}`.
pub fn relabel(v: &TruncSeries, s: &[usize]) -> TruncSeries {
    // go through temporary names to avoid collisions
    let mut out = v.clone();
    for i in 1..=s.len() {
        out = out.rename(&wvar(i), &format!("tmp{i}"));
    }
    for (i, &j) in s.iter().enumerate() {
        out = out.rename(&format!("tmp{}", i + 1), &wvar(j));
    }
    out
}
