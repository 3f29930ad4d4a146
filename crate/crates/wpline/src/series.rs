//! Truncated multivariate Laurent series over the rationals.
//!
//! A series names its variables. Each variable carries a floor (the lowest
//! exponent the series may hold) and an optional truncation order: `Some(n)`
//! means every coefficient with exponent `<= n` is known exactly and nothing
//! above is stored, `None` means the variable is exact (polynomial or Laurent
//! polynomial). Arithmetic propagates the order that is actually justified, so a
//! result never claims more precision than its inputs carry.
//!
//! A series may also carry an integer power of `sqrt(2 pi)`; the factor stays
//! symbolic and only multiplies.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Variable names shared across the crate.
pub const HBAR: &str = "hbar";
/// `1/x`.
pub const XINV: &str = "xinv";
/// `1/y`.
pub const YINV: &str = "yinv";
/// Degree counter: exponent `d` stands for `q^{rd}`.
pub const QDEG: &str = "qd";

/// Exponent vector, one entry per variable in the series' variable order.
pub type Exp = SmallVec<[i32; 4]>;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: i64, k: i64) -> Rational {
    // generalised: n may be negative
    if k < 0 {
        return Rational::zero();
    }
    let mut acc = Rational::one();
    for i in 0..k {
        acc = acc * int(n - i) / int(i + 1);
    }
    acc
}

/// One named variable of a series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Var {
    pub name: String,
    pub floor: i32,
    pub order: Option<i32>,
}

impl Var {
    pub fn exact(name: &str) -> Self {
        Var { name: name.to_string(), floor: 0, order: None }
    }

    pub fn truncated(name: &str, order: i32) -> Self {
        Var { name: name.to_string(), floor: 0, order: Some(order) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    vars: Vec<Var>,
    terms: BTreeMap<Exp, Rational>,
    two_pi_pow: i32,
}

fn min_opt(a: Option<i32>, b: Option<i32>) -> Option<i32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

impl Default for TruncSeries {
    fn default() -> Self {
        Self::zero()
    }
}

impl TruncSeries {
    pub fn zero() -> Self {
        TruncSeries { vars: Vec::new(), terms: BTreeMap::new(), two_pi_pow: 0 }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Exp::new(), c);
        }
        TruncSeries { vars: Vec::new(), terms, two_pi_pow: 0 }
    }

    /// Empty series over the given variables.
    pub fn with_vars(vars: Vec<Var>) -> Self {
        let mut vars = vars;
        vars.sort_by(|a, b| a.name.cmp(&b.name));
        for w in vars.windows(2) {
            assert!(w[0].name != w[1].name, "duplicate variable `{}`", w[0].name);
        }
        TruncSeries { vars, terms: BTreeMap::new(), two_pi_pow: 0 }
    }

    /// The single variable `name`, truncated at `order` (or exact when `None`).
    pub fn var(name: &str, order: Option<i32>) -> Self {
        Self::monomial(&[(name, 1)], Rational::one(), &[(name, order)])
    }

    /// `coeff * prod name^exp`. `orders` declares truncation for any variable;
    /// variables not listed there are exact.
    pub fn monomial(exps: &[(&str, i32)], coeff: Rational, orders: &[(&str, Option<i32>)]) -> Self {
        let mut vars: Vec<Var> = Vec::new();
        for (n, _) in exps {
            if !vars.iter().any(|v| v.name == *n) {
                vars.push(Var::exact(n));
            }
        }
        for (n, o) in orders {
            match vars.iter_mut().find(|v| v.name == *n) {
                Some(v) => v.order = *o,
                None => vars.push(Var { name: n.to_string(), floor: 0, order: *o }),
            }
        }
        let mut s = Self::with_vars(vars);
        let mut e: Exp = SmallVec::from_elem(0, s.vars.len());
        for (n, k) in exps {
            let i = s.index_of(n).unwrap();
            e[i] += *k;
        }
        s.insert_raw(e, coeff);
        s.fit_floors();
        s
    }

    /// Build from `(exponent vector, coefficient)` pairs over `vars`.
    pub fn from_terms(vars: Vec<Var>, terms: impl IntoIterator<Item = (Vec<i32>, Rational)>) -> Result<Self> {
        let names: Vec<String> = vars.iter().map(|v| v.name.clone()).collect();
        let mut s = Self::with_vars(vars);
        let perm: Vec<usize> = s.vars.iter().map(|v| names.iter().position(|n| *n == v.name).unwrap()).collect();
        for (e, c) in terms {
            if e.len() != perm.len() {
                return Err(Error::InvalidArgument(format!("exponent vector of length {} for {} variables", e.len(), perm.len())));
            }
            let ex: Exp = perm.iter().map(|&p| e[p]).collect();
            for (i, v) in s.vars.iter().enumerate() {
                if ex[i] < v.floor {
                    return Err(Error::FloorViolation { var: v.name.clone(), exp: ex[i], floor: v.floor });
                }
            }
            s.insert_raw(ex, c);
        }
        Ok(s)
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn terms(&self) -> &BTreeMap<Exp, Rational> {
        &self.terms
    }

    pub fn two_pi_pow(&self) -> i32 {
        self.two_pi_pow
    }

    pub fn with_two_pi_pow(mut self, p: i32) -> Self {
        self.two_pi_pow = p;
        self
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn order_of(&self, name: &str) -> Option<i32> {
        self.index_of(name).and_then(|i| self.vars[i].order)
    }

    /// Coefficient of `prod name^exp`; unlisted variables are taken at exponent 0.
    pub fn coeff(&self, exps: &[(&str, i32)]) -> Rational {
        let mut e: Exp = SmallVec::from_elem(0, self.vars.len());
        for (n, k) in exps {
            match self.index_of(n) {
                Some(i) => e[i] = *k,
                None if *k == 0 => {}
                None => return Rational::zero(),
            }
        }
        self.terms.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    /// Constant term.
    pub fn constant_term(&self) -> Rational {
        self.coeff(&[])
    }

    /// Coefficient of `name^k` as a series in the remaining variables.
    pub fn coefficient_of(&self, name: &str, k: i32) -> TruncSeries {
        let Some(i) = self.index_of(name) else {
            return if k == 0 { self.clone() } else { TruncSeries::zero() };
        };
        let mut vars = self.vars.clone();
        vars.remove(i);
        let mut out = TruncSeries::with_vars(vars);
        out.two_pi_pow = self.two_pi_pow;
        for (e, c) in &self.terms {
            if e[i] == k {
                let mut f = e.clone();
                f.remove(i);
                out.insert_raw(f, c.clone());
            }
        }
        out
    }

    /// Lowest exponent of `name` among the stored terms.
    pub fn valuation(&self, name: &str) -> Option<i32> {
        let i = self.index_of(name)?;
        self.terms.keys().map(|e| e[i]).min()
    }

    /// Highest exponent of `name` among the stored terms.
    pub fn degree(&self, name: &str) -> Option<i32> {
        let i = self.index_of(name)?;
        self.terms.keys().map(|e| e[i]).max()
    }

    /// Accumulate `c * prod name^exp`; unknown variables are added as exact, and
    /// terms beyond a declared order are dropped.
    pub fn add_term(&mut self, exps: &[(&str, i32)], c: Rational) {
        for (n, _) in exps {
            if self.index_of(n).is_none() {
                *self = self.embed(&Self::sorted_with(&self.vars, Var::exact(n)));
            }
        }
        let mut e: Exp = SmallVec::from_elem(0, self.vars.len());
        for (n, k) in exps {
            e[self.index_of(n).unwrap()] += *k;
        }
        self.insert_raw(e, c);
        self.fit_floors();
    }

    fn insert_raw(&mut self, e: Exp, c: Rational) {
        if c.is_zero() {
            return;
        }
        for (i, v) in self.vars.iter().enumerate() {
            if let Some(o) = v.order {
                if e[i] > o {
                    return;
                }
            }
        }
        match self.terms.get_mut(&e) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    /// Lower each floor to the smallest exponent actually present.
    fn fit_floors(&mut self) {
        for (i, v) in self.vars.iter_mut().enumerate() {
            if let Some(m) = self.terms.keys().map(|e| e[i]).min() {
                v.floor = v.floor.min(m);
            }
        }
    }

    fn drop_beyond_orders(&mut self) {
        let orders: Vec<Option<i32>> = self.vars.iter().map(|v| v.order).collect();
        self.terms.retain(|e, _| e.iter().zip(&orders).all(|(x, o)| o.is_none_or(|o| *x <= o)));
    }

    /// Re-express over `vars` (a superset of the current variables, sorted).
    fn embed(&self, vars: &[Var]) -> TruncSeries {
        let map: Vec<Option<usize>> = vars.iter().map(|v| self.index_of(&v.name)).collect();
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let f: Exp = map.iter().map(|m| m.map_or(0, |i| e[i])).collect();
                (f, c.clone())
            })
            .collect();
        TruncSeries { vars: vars.to_vec(), terms, two_pi_pow: self.two_pi_pow }
    }

    fn union_names(a: &TruncSeries, b: &TruncSeries) -> Vec<String> {
        let mut names: Vec<String> = a.vars.iter().chain(b.vars.iter()).map(|v| v.name.clone()).collect();
        names.sort();
        names.dedup();
        names
    }

    /// Declare (or re-declare) the truncation order of `name`, dropping terms above it.
    /// Raising the order of a truncated variable is refused.
    pub fn truncate(&self, name: &str, order: i32) -> Result<TruncSeries> {
        let mut s = self.clone();
        let i = match s.index_of(name) {
            Some(i) => i,
            None => {
                s = s.embed(&Self::sorted_with(&s.vars, Var::exact(name)));
                s.index_of(name).unwrap()
            }
        };
        if let Some(o) = s.vars[i].order {
            if order > o {
                return Err(Error::PrecisionExceeded { requested: order, available: o });
            }
        }
        s.vars[i].order = Some(order);
        s.drop_beyond_orders();
        Ok(s)
    }

    /// Declare a variable (exact, exponent 0 everywhere) so that it shows up in `vars()`.
    pub fn declare(&self, var: Var) -> TruncSeries {
        if self.index_of(&var.name).is_some() {
            let mut s = self.clone();
            let i = s.index_of(&var.name).unwrap();
            s.vars[i].order = min_opt(s.vars[i].order, var.order);
            s.vars[i].floor = s.vars[i].floor.min(var.floor);
            s.drop_beyond_orders();
            return s;
        }
        let name = var.name.clone();
        let order = var.order;
        let mut s = self.embed(&Self::sorted_with(&self.vars, var));
        let i = s.index_of(&name).unwrap();
        s.vars[i].order = order;
        s.drop_beyond_orders();
        s
    }

    fn sorted_with(vars: &[Var], v: Var) -> Vec<Var> {
        let mut out = vars.to_vec();
        out.push(v);
        out.sort_by(|a, b| a.name.cmp(&b.name));
        out
    }

    pub fn checked_add(&self, other: &TruncSeries) -> Result<TruncSeries> {
        if self.is_zero() && self.vars.is_empty() {
            return Ok(other.clone());
        }
        if other.is_zero() && other.vars.is_empty() {
            return Ok(self.clone());
        }
        if self.two_pi_pow != other.two_pi_pow && !self.is_zero() && !other.is_zero() {
            return Err(Error::TwoPiMismatch(self.two_pi_pow, other.two_pi_pow));
        }
        let names = Self::union_names(self, other);
        let vars: Vec<Var> = names
            .iter()
            .map(|n| {
                let a = self.vars.iter().find(|v| &v.name == n);
                let b = other.vars.iter().find(|v| &v.name == n);
                let floor = a.map_or(0, |v| v.floor).min(b.map_or(0, |v| v.floor));
                let order = min_opt(a.and_then(|v| v.order), b.and_then(|v| v.order));
                Var { name: n.clone(), floor, order }
            })
            .collect();
        let mut out = self.embed(&vars);
        if self.is_zero() {
            out.two_pi_pow = other.two_pi_pow;
        }
        for (e, c) in other.embed(&vars).terms {
            out.insert_raw(e, c);
        }
        out.drop_beyond_orders();
        Ok(out)
    }

    pub fn checked_sub(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.checked_add(&other.neg())
    }

    pub fn neg(&self) -> TruncSeries {
        let mut s = self.clone();
        for c in s.terms.values_mut() {
            *c = -c.clone();
        }
        s
    }

    pub fn scale(&self, k: &Rational) -> TruncSeries {
        if k.is_zero() {
            let mut s = self.clone();
            s.terms.clear();
            return s;
        }
        let mut s = self.clone();
        for c in s.terms.values_mut() {
            *c *= k;
        }
        s
    }

    /// Multiply by an exact monomial; truncation orders move with the exponents.
    pub fn shift(&self, exps: &[(&str, i32)]) -> TruncSeries {
        let mut s = self.clone();
        for (n, _) in exps {
            if s.index_of(n).is_none() {
                s = s.embed(&Self::sorted_with(&s.vars, Var::exact(n)));
            }
        }
        let mut delta: Exp = SmallVec::from_elem(0, s.vars.len());
        for (n, k) in exps {
            delta[s.index_of(n).unwrap()] += *k;
        }
        for (i, v) in s.vars.iter_mut().enumerate() {
            v.order = v.order.map(|o| o + delta[i]);
            v.floor += delta[i].min(0);
        }
        s.terms = s
            .terms
            .into_iter()
            .map(|(e, c)| (e.iter().zip(&delta).map(|(a, b)| a + b).collect(), c))
            .collect();
        s.fit_floors();
        s
    }

    pub fn checked_mul(&self, other: &TruncSeries) -> Result<TruncSeries> {
        let names = Self::union_names(self, other);
        let mut vars: Vec<Var> = Vec::with_capacity(names.len());
        for n in &names {
            let a = self.vars.iter().find(|v| &v.name == n);
            let b = other.vars.iter().find(|v| &v.name == n);
            let va = self.valuation(n).unwrap_or(0).min(0);
            let vb = other.valuation(n).unwrap_or(0).min(0);
            let oa = a.and_then(|v| v.order).map(|o| o + vb);
            let ob = b.and_then(|v| v.order).map(|o| o + va);
            let floor = a.map_or(0, |v| v.floor) + b.map_or(0, |v| v.floor);
            vars.push(Var { name: n.clone(), floor, order: min_opt(oa, ob) });
        }
        let a = self.embed(&vars);
        let b = other.embed(&vars);
        let orders: Vec<Option<i32>> = vars.iter().map(|v| v.order).collect();
        let mut acc: HashMap<Exp, Rational> = HashMap::with_capacity(a.terms.len().max(b.terms.len()) * 2);
        let bt: Vec<(&Exp, &Rational)> = b.terms.iter().collect();
        for (ea, ca) in &a.terms {
            'inner: for (eb, cb) in &bt {
                let mut e: Exp = SmallVec::with_capacity(ea.len());
                for i in 0..ea.len() {
                    let x = ea[i] + eb[i];
                    if let Some(o) = orders[i] {
                        if x > o {
                            continue 'inner;
                        }
                    }
                    e.push(x);
                }
                let p = ca * *cb;
                match acc.get_mut(&e) {
                    Some(v) => *v += p,
                    None => {
                        acc.insert(e, p);
                    }
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let mut out = TruncSeries { vars, terms, two_pi_pow: self.two_pi_pow + other.two_pi_pow };
        out.fit_floors();
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> TruncSeries {
        let mut acc = TruncSeries::one();
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// True when every term has a positive exponent in some truncated variable and
    /// no negative exponent in any truncated variable, so powers die out.
    fn is_nilpotent(&self) -> bool {
        self.terms.iter().all(|(e, _)| {
            let mut pos = false;
            for (i, v) in self.vars.iter().enumerate() {
                if v.order.is_some() {
                    if e[i] < 0 {
                        return false;
                    }
                    if e[i] > 0 {
                        pos = true;
                    }
                }
            }
            pos
        })
    }

    fn power_bound(&self) -> usize {
        let s: i64 = self
            .vars
            .iter()
            .filter_map(|v| v.order.map(|o| (o as i64 - v.floor.min(0) as i64).max(0)))
            .sum();
        s as usize + 2
    }

    /// Multiplicative inverse. The term at the componentwise-minimal exponent must
    /// be present; what remains after factoring it out must be nilpotent.
    pub fn invert(&self) -> Result<TruncSeries> {
        if self.is_zero() {
            return Err(Error::NotInvertible("zero series".into()));
        }
        let n = self.vars.len();
        let m: Exp = (0..n).map(|i| self.terms.keys().map(|e| e[i]).min().unwrap()).collect();
        let Some(c) = self.terms.get(&m).cloned() else {
            return Err(Error::NotInvertible("no term at the minimal exponent".into()));
        };
        let neg_m: Vec<(&str, i32)> = self.vars.iter().zip(&m).map(|(v, k)| (v.name.as_str(), -k)).collect();
        let unit = self.shift(&neg_m).scale(&(Rational::one() / &c));
        let mut u = unit.clone();
        u.insert_raw(SmallVec::from_elem(0, n), -Rational::one());
        if !u.is_nilpotent() {
            return Err(Error::NotInvertible("higher terms are not nilpotent".into()));
        }
        let neg_u = u.neg();
        let mut acc = TruncSeries::one().embed(&u.vars);
        let mut p = acc.clone();
        for _ in 0..u.power_bound() {
            p = &p * &neg_u;
            if p.is_zero() {
                break;
            }
            acc = &acc + &p;
        }
        // acc carries the orders of `u`; the orders of acc after the loop are those of u
        let mut acc = acc.declare_orders_from(&u);
        acc.two_pi_pow = 0;
        let out = acc.shift(&neg_m).scale(&(Rational::one() / c));
        Ok(out.with_two_pi_pow(-self.two_pi_pow))
    }

    fn declare_orders_from(mut self, other: &TruncSeries) -> TruncSeries {
        for v in &other.vars {
            self = self.declare(Var { name: v.name.clone(), floor: 0, order: v.order });
        }
        self
    }

    /// `exp` of a series with zero constant term.
    pub fn exp(&self) -> Result<TruncSeries> {
        let c = self.constant_term();
        if !c.is_zero() {
            return Err(Error::ConstantTerm { expected: "0".into(), found: c.to_string() });
        }
        if !self.is_nilpotent() {
            return Err(Error::NotNilpotent("exp".into()));
        }
        let mut acc = TruncSeries::one().embed(&self.vars);
        let mut p = acc.clone();
        for k in 1..=self.power_bound() {
            p = (&p * self).scale(&rat(1, k as i64));
            if p.is_zero() {
                break;
            }
            acc = &acc + &p;
        }
        Ok(acc.declare_orders_from(self).with_two_pi_pow(0))
    }

    /// `log` of a series with constant term 1.
    pub fn log(&self) -> Result<TruncSeries> {
        let c = self.constant_term();
        if !c.is_one() {
            return Err(Error::ConstantTerm { expected: "1".into(), found: c.to_string() });
        }
        let mut u = self.clone();
        u.insert_raw(SmallVec::from_elem(0, u.vars.len()), -Rational::one());
        u.two_pi_pow = 0;
        if !u.is_nilpotent() {
            return Err(Error::NotNilpotent("log".into()));
        }
        let mut acc = TruncSeries::zero().embed(&u.vars);
        let mut p = TruncSeries::one().embed(&u.vars);
        for k in 1..=u.power_bound() {
            p = &p * &u;
            if p.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc = &acc + &p.scale(&rat(sign, k as i64));
        }
        Ok(acc.declare_orders_from(&u))
    }

    /// `f(L) * self` where `f = sum_k f[k] t^k` and `L` is nilpotent (or `f` finite).
    pub fn mul_by_composite(&self, f: &[Rational], l: &TruncSeries) -> TruncSeries {
        let mut acc = self.scale(&f.first().cloned().unwrap_or_else(Rational::zero));
        let mut t = self.clone();
        for fk in f.iter().skip(1) {
            t = &t * l;
            if t.is_zero() {
                break;
            }
            if !fk.is_zero() {
                acc = &acc + &t.scale(fk);
            }
        }
        acc
    }

    /// Replace each exponent `e` of `name` by the monomial `target^(factor * e)`
    /// multiplied into the term (e.g. `w^k -> hbar^k z^k`), then rename `name` to `rename`.
    pub fn attach_power(&self, name: &str, target: &str, factor: i32) -> TruncSeries {
        let Some(i) = self.index_of(name) else { return self.clone() };
        let mut s = self.clone();
        if s.index_of(target).is_none() {
            s = s.embed(&Self::sorted_with(&s.vars, Var::exact(target)));
        }
        let i = s.index_of(name).unwrap_or(i);
        let j = s.index_of(target).unwrap();
        let terms = std::mem::take(&mut s.terms);
        for (mut e, c) in terms {
            e[j] += factor * e[i];
            s.insert_raw(e, c);
        }
        s.fit_floors();
        s
    }

    /// Rename a variable.
    pub fn rename(&self, old: &str, new: &str) -> TruncSeries {
        let Some(i) = self.index_of(old) else { return self.clone() };
        assert!(self.index_of(new).is_none(), "variable `{new}` already present");
        let mut vars = self.vars.clone();
        vars[i].name = new.to_string();
        let mut sorted = vars.clone();
        sorted.sort_by(|a, b| a.name.cmp(&b.name));
        let map: Vec<usize> = sorted.iter().map(|v| vars.iter().position(|w| w.name == v.name).unwrap()).collect();
        let terms = self.terms.iter().map(|(e, c)| (map.iter().map(|&k| e[k]).collect(), c.clone())).collect();
        TruncSeries { vars: sorted, terms, two_pi_pow: self.two_pi_pow }
    }

    /// Apply `f` to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&Exp, &Rational) -> Rational) -> TruncSeries {
        let mut s = self.clone();
        let terms = std::mem::take(&mut s.terms);
        for (e, c) in terms {
            let v = f(&e, &c);
            s.insert_raw(e, v);
        }
        s
    }

    /// Drop variables that no term uses and that are exact.
    pub fn prune(&self) -> TruncSeries {
        let keep: Vec<usize> = (0..self.vars.len())
            .filter(|&i| self.vars[i].order.is_some() || self.terms.keys().any(|e| e[i] != 0))
            .collect();
        let vars = keep.iter().map(|&i| self.vars[i].clone()).collect();
        let terms = self.terms.iter().map(|(e, c)| (keep.iter().map(|&i| e[i]).collect(), c.clone())).collect();
        TruncSeries { vars, terms, two_pi_pow: self.two_pi_pow }
    }

    /// Equality of stored coefficients after aligning variables, ignoring declared orders.
    pub fn same_coefficients(&self, other: &TruncSeries) -> bool {
        match self.checked_sub(other) {
            Ok(d) => d.is_zero() && (self.two_pi_pow == other.two_pi_pow || self.is_zero()),
            Err(_) => false,
        }
    }

    /// Equality up to the given per-variable orders (coefficients above are ignored).
    pub fn agrees_through(&self, other: &TruncSeries, orders: &[(&str, i32)]) -> bool {
        let Ok(d) = self.checked_sub(other) else { return false };
        d.terms.keys().all(|e| {
            orders.iter().any(|(n, o)| d.index_of(n).is_some_and(|i| e[i] > *o))
        })
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let vars: Vec<serde_json::Value> = self
            .vars
            .iter()
            .map(|v| serde_json::json!({"name": v.name, "floor": v.floor, "order": v.order}))
            .collect();
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(e, c)| {
                serde_json::json!({
                    "exp": e.to_vec(),
                    "num": c.numer().to_string(),
                    "den": c.denom().to_string(),
                })
            })
            .collect();
        serde_json::json!({"vars": vars, "terms": terms, "two_pi_pow": self.two_pi_pow})
    }

    pub fn from_json_value(v: &serde_json::Value) -> Result<TruncSeries> {
        let bad = |m: &str| Error::InvalidArgument(format!("series json: {m}"));
        let vars: Vec<Var> = serde_json::from_value(v.get("vars").cloned().ok_or_else(|| bad("missing vars"))?)
            .map_err(|e| bad(&e.to_string()))?;
        let two_pi = v.get("two_pi_pow").and_then(|x| x.as_i64()).unwrap_or(0) as i32;
        let raw = v.get("terms").and_then(|t| t.as_array()).ok_or_else(|| bad("missing terms"))?;
        let mut terms = Vec::with_capacity(raw.len());
        for t in raw {
            let exp: Vec<i32> = serde_json::from_value(t.get("exp").cloned().ok_or_else(|| bad("exp"))?)
                .map_err(|e| bad(&e.to_string()))?;
            let num: BigInt = t.get("num").and_then(|x| x.as_str()).ok_or_else(|| bad("num"))?.parse().map_err(|_| bad("num"))?;
            let den: BigInt = t.get("den").and_then(|x| x.as_str()).ok_or_else(|| bad("den"))?.parse().map_err(|_| bad("den"))?;
            if den.is_zero() {
                return Err(bad("zero denominator"));
            }
            terms.push((exp, Rational::new(num, den)));
        }
        Ok(TruncSeries::from_terms(vars, terms)?.with_two_pi_pow(two_pi))
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if k > 0 {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            } else if neg {
                write!(f, "-")?;
            }
            let a = c.abs();
            let mono: Vec<String> = self
                .vars
                .iter()
                .zip(e.iter())
                .filter(|(_, x)| **x != 0)
                .map(|(v, x)| if *x == 1 { v.name.clone() } else { format!("{}^{}", v.name, x) })
                .collect();
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", a, mono.join("*"))?;
            }
        }
        let trunc: Vec<String> = self
            .vars
            .iter()
            .filter_map(|v| v.order.map(|o| format!("O({}^{})", v.name, o + 1)))
            .collect();
        if !trunc.is_empty() {
            write!(f, " + {}", trunc.join(" + "))?;
        }
        if self.two_pi_pow != 0 {
            write!(f, "  [x sqrt(2pi)^{}]", self.two_pi_pow)?;
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl std::ops::$tr<&TruncSeries> for &TruncSeries {
            type Output = TruncSeries;
            fn $m(self, rhs: &TruncSeries) -> TruncSeries {
                self.$checked(rhs).expect(concat!("series ", stringify!($m)))
            }
        }
        impl std::ops::$tr<TruncSeries> for TruncSeries {
            type Output = TruncSeries;
            fn $m(self, rhs: TruncSeries) -> TruncSeries {
                (&self).$checked(&rhs).expect(concat!("series ", stringify!($m)))
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl std::ops::Neg for &TruncSeries {
    type Output = TruncSeries;
    fn neg(self) -> TruncSeries {
        TruncSeries::neg(self)
    }
}

/// Dense univariate coefficients `c[k]` of `t^k`, `k >= 0`, as a series in `name`.
pub fn univariate(name: &str, coeffs: &[Rational], order: i32) -> TruncSeries {
    let mut s = TruncSeries::with_vars(vec![Var::truncated(name, order)]);
    for (k, c) in coeffs.iter().enumerate() {
        s.insert_raw(SmallVec::from_elem(k as i32, 1), c.clone());
    }
    s
}

/// Univariate Laurent series from `(exponent, coefficient)` pairs.
pub fn univariate_laurent(name: &str, coeffs: impl IntoIterator<Item = (i32, Rational)>, order: Option<i32>) -> TruncSeries {
    let mut s = TruncSeries::with_vars(vec![Var { name: name.to_string(), floor: 0, order }]);
    for (k, c) in coeffs {
        s.insert_raw(SmallVec::from_elem(k, 1), c);
    }
    s.fit_floors();
    s
}
