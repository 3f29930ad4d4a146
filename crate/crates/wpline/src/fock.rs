//! Charge-zero fermionic Fock space with an energy cutoff.
//!
//! Basis vectors are indexed by partitions through their Maya diagrams: the
//! particle `i` of `v_lambda` sits at the half-integer `lambda_i - i + 1/2`.
//! Operators are bilinears `sum_k w(k) psi_{k-m} psi_k^*`: a particle at `k`
//! hops to `k - m` when that site is empty, with the sign of the number of
//! particles it jumps over.

use std::collections::BTreeMap;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::partitions::{partitions, shifted_power_sum, Partition};
use crate::series::{binomial, int, rat, Rational, TruncSeries, Var};
use crate::special::inv_zeta_series;

/// A finite combination of basis vectors with series amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct FockState {
    amps: BTreeMap<Partition, TruncSeries>,
    cutoff: u32,
    overflow: bool,
}

impl FockState {
    pub fn vacuum(cutoff: u32) -> Self {
        Self::basis(Partition::empty(), cutoff)
    }

    pub fn basis(lambda: Partition, cutoff: u32) -> Self {
        let mut amps = BTreeMap::new();
        let overflow = lambda.size() > cutoff;
        if !overflow {
            amps.insert(lambda, TruncSeries::one());
        }
        FockState { amps, cutoff, overflow }
    }

    pub fn zero(cutoff: u32) -> Self {
        FockState { amps: BTreeMap::new(), cutoff, overflow: false }
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    /// True when some component was dropped because its energy exceeded the cutoff.
    pub fn overflowed(&self) -> bool {
        self.overflow
    }

    pub fn amplitudes(&self) -> &BTreeMap<Partition, TruncSeries> {
        &self.amps
    }

    pub fn amplitude(&self, lambda: &Partition) -> TruncSeries {
        self.amps.get(lambda).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.amps.values().all(|a| a.is_zero())
    }

    fn add_term(&mut self, lambda: Partition, amp: TruncSeries) {
        if amp.is_zero() {
            return;
        }
        if lambda.size() > self.cutoff {
            self.overflow = true;
            return;
        }
        let cur = self.amps.remove(&lambda).unwrap_or_default();
        let v = &cur + &amp;
        if !v.is_zero() {
            self.amps.insert(lambda, v);
        }
    }

    pub fn add(&self, other: &FockState) -> FockState {
        let mut out = self.clone();
        out.overflow |= other.overflow;
        for (l, a) in &other.amps {
            out.add_term(l.clone(), a.clone());
        }
        out
    }

    pub fn scale(&self, k: &TruncSeries) -> FockState {
        let mut out = FockState::zero(self.cutoff);
        out.overflow = self.overflow;
        for (l, a) in &self.amps {
            out.add_term(l.clone(), a * k);
        }
        out
    }

    pub fn sub(&self, other: &FockState) -> FockState {
        self.add(&other.scale(&TruncSeries::constant(int(-1))))
    }

    /// Error if the state overflowed its cutoff.
    pub fn checked(self) -> Result<FockState> {
        if self.overflow {
            Err(Error::CutoffExceeded(self.cutoff as usize))
        } else {
            Ok(self)
        }
    }
}

/// All ways a particle of `v_lambda` hops by `-m` (from `k` to `k - m`):
/// `(k, target partition, sign)`, with `k` the half-integer source site.
fn hops(lambda: &Partition, m: i64) -> Vec<(Rational, Partition, i64)> {
    let n = lambda.len() + m.unsigned_abs() as usize + 1;
    let pos = lambda.positions(n);
    let mut out = Vec::new();
    for (idx, &c) in pos.iter().enumerate() {
        let t = c - m;
        // sites at or below -n-1 are all occupied
        if t < -(n as i64) || pos.contains(&t) {
            continue;
        }
        let (lo, hi) = if t < c { (t, c) } else { (c, t) };
        let between = pos.iter().filter(|&&x| x > lo && x < hi).count();
        let mut next = pos.clone();
        next[idx] = t;
        next.sort_unstable_by(|a, b| b.cmp(a));
        let target = Partition::from_positions(&next).expect("hop keeps charge zero");
        let k = rat(2 * c + 1, 2);
        out.push((k, target, if between % 2 == 0 { 1 } else { -1 }));
    }
    out
}

/// `W_r^s = sum_k k^s :psi_{k-r} psi_k^*:`.
pub fn apply_w(state: &FockState, r: i64, s: u32) -> FockState {
    let mut out = FockState::zero(state.cutoff);
    out.overflow = state.overflow;
    for (lambda, amp) in &state.amps {
        if r == 0 {
            let ev = if s == 0 { Rational::zero() } else { shifted_power_sum(lambda, s) };
            out.add_term(lambda.clone(), amp.scale(&ev));
            continue;
        }
        for (k, target, sign) in hops(lambda, r) {
            let w = num::pow(k, s as usize) * int(sign);
            out.add_term(target, amp.scale(&w));
        }
    }
    out
}

/// `alpha_n = W_n^0`.
pub fn apply_alpha(state: &FockState, n: i64) -> FockState {
    apply_w(state, n, 0)
}

/// `E_a(z) = sum_k e^{z(k - a/2)} :psi_{k-a} psi_k^*: + delta_{a,0}/zeta(z)`, where `z` is
/// any nilpotent series (typically a variable or a sum of variables). The `1/zeta`
/// constant is added only when `central` is set and `z` is a single variable.
pub fn apply_e(state: &FockState, a: i64, z: &TruncSeries, central: bool) -> FockState {
    let mut out = FockState::zero(state.cutoff);
    out.overflow = state.overflow;
    let expo = |c: &Rational| z.scale(c).exp().expect("argument of E must be nilpotent");
    for (lambda, amp) in &state.amps {
        if a == 0 {
            let mut ev = TruncSeries::zero();
            for i in 1..=lambda.len() {
                let p = rat(2 * (lambda.part(i) as i64 - i as i64) + 1, 2);
                let v = rat(-2 * i as i64 + 1, 2);
                ev = &ev + &(&expo(&p) - &expo(&v));
            }
            if central {
                let name = single_var(z).expect("central term needs a single-variable argument");
                let order = z.order_of(&name).unwrap_or(0);
                ev = &ev + &inv_zeta_series(&name, order);
            }
            out.add_term(lambda.clone(), amp * &ev);
            continue;
        }
        for (k, target, sign) in hops(lambda, a) {
            let w = expo(&(k - rat(a, 2))).scale(&int(sign));
            out.add_term(target, amp * &w);
        }
    }
    out
}

fn single_var(z: &TruncSeries) -> Option<String> {
    let p = z.prune();
    if p.len() != 1 {
        return None;
    }
    let (e, c) = p.terms().iter().next()?;
    if !c.is_one() {
        return None;
    }
    let idx: Vec<usize> = e.iter().enumerate().filter(|(_, x)| **x != 0).map(|(i, _)| i).collect();
    (idx.len() == 1 && e[idx[0]] == 1).then(|| p.vars()[idx[0]].name.clone())
}

/// Outcome of a finite-matrix commutator comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub pass: bool,
    pub checked: usize,
    pub detail: String,
}

/// Compare `lhs` and `rhs` on every basis vector of energy `<= basis_max`; when
/// `central` is set the operators may differ by a scalar, which is read off the vacuum.
fn compare_operators(
    lhs: impl Fn(&FockState) -> FockState,
    rhs: impl Fn(&FockState) -> FockState,
    cutoff: u32,
    basis_max: u32,
    central: bool,
) -> CheckReport {
    let mut scalar: Option<TruncSeries> = None;
    let mut checked = 0;
    for n in 0..=basis_max {
        for lambda in partitions(n) {
            let v = FockState::basis(lambda.clone(), cutoff);
            let l = lhs(&v);
            let r = rhs(&v);
            if l.overflowed() || r.overflowed() {
                return CheckReport { pass: false, checked, detail: format!("cutoff {cutoff} too small at {lambda}") };
            }
            let mut diff = l.sub(&r);
            if central {
                let diag = diff.amplitude(&lambda);
                match &scalar {
                    None => scalar = Some(diag.clone()),
                    Some(c) => {
                        if !diag.same_coefficients(c) {
                            return CheckReport {
                                pass: false,
                                checked,
                                detail: format!("diagonal entry at {lambda} is {diag}, vacuum gives {c}"),
                            };
                        }
                    }
                }
                diff.amps.remove(&lambda);
            }
            if !diff.is_zero() {
                let (mu, a) = diff.amps.iter().find(|(_, a)| !a.is_zero()).unwrap();
                return CheckReport { pass: false, checked, detail: format!("entry ({mu}, {lambda}) = {a}") };
            }
            checked += 1;
        }
    }
    CheckReport { pass: true, checked, detail: format!("{checked} basis vectors") }
}

fn basis_bound(cutoff: u32, raise: i64) -> Result<u32> {
    let b = cutoff as i64 - raise;
    if b < 0 {
        return Err(Error::InvalidArgument(format!("cutoff {cutoff} leaves no room for the operators")));
    }
    Ok(b as u32)
}

/// `[W_r^s, alpha_n] = sum_{i=1}^s (-n)^i C(s,i) W_{r+n}^{s-i}` modulo the central term.
pub fn commutator_check_w_alpha(r: i64, s: u32, n: i64, cutoff: u32) -> Result<CheckReport> {
    let raise = (-r).max(0) + (-n).max(0) + (-(r + n)).max(0);
    let basis_max = basis_bound(cutoff, raise)?;
    let lhs = |v: &FockState| apply_w(&apply_alpha(v, n), r, s).sub(&apply_alpha(&apply_w(v, r, s), n));
    let rhs = |v: &FockState| {
        let mut acc = FockState::zero(cutoff);
        for i in 1..=s {
            let c = num::pow(int(-n), i as usize) * binomial(s as i64, i as i64);
            acc = acc.add(&apply_w(v, r + n, s - i).scale(&TruncSeries::constant(c)));
        }
        acc
    };
    Ok(compare_operators(lhs, rhs, cutoff, basis_max, r + n == 0))
}

/// Structure constants of `[W_r^s, W_p^q] = sum_u a(u) W_{r+p}^u`:
/// `a(u) = [k^u]((k-p)^s k^q - k^s (k-r)^q)`.
pub fn ww_structure_constants(r: i64, s: u32, p: i64, q: u32) -> Vec<Rational> {
    let deg = (s + q) as usize;
    let mut a = vec![Rational::zero(); deg + 1];
    for i in 0..=s {
        // (k-p)^s k^q : C(s,i) (-p)^{s-i} k^{i+q}
        a[(i + q) as usize] += binomial(s as i64, i as i64) * num::pow(int(-p), (s - i) as usize);
    }
    for j in 0..=q {
        a[(s + j) as usize] -= binomial(q as i64, j as i64) * num::pow(int(-r), (q - j) as usize);
    }
    a
}

pub fn commutator_check_ww(r: i64, s: u32, p: i64, q: u32, cutoff: u32) -> Result<CheckReport> {
    let raise = (-r).max(0) + (-p).max(0) + (-(r + p)).max(0);
    let basis_max = basis_bound(cutoff, raise)?;
    let coeffs = ww_structure_constants(r, s, p, q);
    let lhs = |v: &FockState| apply_w(&apply_w(v, p, q), r, s).sub(&apply_w(&apply_w(v, r, s), p, q));
    let rhs = |v: &FockState| {
        let mut acc = FockState::zero(cutoff);
        for (u, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&apply_w(v, r + p, u as u32).scale(&TruncSeries::constant(c.clone())));
            }
        }
        acc
    };
    Ok(compare_operators(lhs, rhs, cutoff, basis_max, r + p == 0))
}

/// `[E_a(z), E_b(w)] = zeta(a w - b z) E_{a+b}(z + w)` on the cutoff space, with
/// both sides expanded through `order` in `z` and `w` (central term excluded).
pub fn commutator_check_ee(a: i64, b: i64, order: i32, cutoff: u32) -> Result<CheckReport> {
    let raise = (-a).max(0) + (-b).max(0) + (-(a + b)).max(0);
    let basis_max = basis_bound(cutoff, raise)?;
    let z = TruncSeries::var("z", Some(order));
    let w = TruncSeries::var("w", Some(order));
    let zw = &z + &w;
    let det = &w.scale(&int(a)) - &z.scale(&int(b));
    let zeta_det = TruncSeries::one()
        .declare(Var::truncated("z", order))
        .declare(Var::truncated("w", order))
        .mul_by_composite(&crate::special::zeta_coeffs(2 * order as usize + 1), &det);
    let lhs = |v: &FockState| {
        apply_e(&apply_e(v, b, &w, false), a, &z, false).sub(&apply_e(&apply_e(v, a, &z, false), b, &w, false))
    };
    let rhs = |v: &FockState| apply_e(v, a + b, &zw, false).scale(&zeta_det);
    Ok(compare_operators(lhs, rhs, cutoff, basis_max, a + b == 0))
}
