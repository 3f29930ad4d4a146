//! Integer partitions, symmetric-group characters and the partition-indexed
//! eigenvalues used by the wedge computations.
//!
//! Characters come from the Murnaghan-Nakayama rule on beta-sets (abacus
//! positions); dimensions come from the hook-length formula and are checked
//! against the character in debug builds.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num::{BigInt, One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{factorial, int, rat, Exp, Rational, TruncSeries, Var, HBAR, XINV};

/// A partition stored as a weakly decreasing list of positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Sorts and drops zero parts.
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// `(r)^d`: d parts equal to r.
    pub fn rectangle(r: u32, d: usize) -> Self {
        Partition(vec![r; d])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `lambda_i` with 1-based `i`; zero beyond the length.
    pub fn part(&self, i: usize) -> u32 {
        if i == 0 {
            return 0;
        }
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let m = self.0.first().copied().unwrap_or(0);
        Partition((1..=m).map(|j| self.0.iter().filter(|&&p| p >= j).count() as u32).collect())
    }

    /// Order of the centralizer of an element of cycle type `self`.
    pub fn z(&self) -> BigInt {
        let mut counts: HashMap<u32, u64> = HashMap::new();
        for &p in &self.0 {
            *counts.entry(p).or_default() += 1;
        }
        counts
            .into_iter()
            .fold(BigInt::one(), |acc, (p, m)| acc * BigInt::from(p).pow(m as u32) * factorial(m))
    }

    /// Shifted positions `lambda_i - i`, `i = 1..=n` (used for Maya diagrams).
    pub fn positions(&self, n: usize) -> Vec<i64> {
        (1..=n).map(|i| self.part(i) as i64 - i as i64).collect()
    }

    /// Inverse of [`positions`](Self::positions): positions must be strictly decreasing
    /// and eventually match the vacuum.
    pub fn from_positions(pos: &[i64]) -> Option<Partition> {
        let mut parts = Vec::with_capacity(pos.len());
        for (k, &c) in pos.iter().enumerate() {
            let p = c + k as i64 + 1;
            if p < 0 {
                return None;
            }
            if k > 0 && pos[k - 1] <= c {
                return None;
            }
            parts.push(p as u32);
        }
        Some(Partition::new(parts))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// All partitions of `n` in reverse lexicographic order: `(n)` first, `(1^n)` last.
pub fn partitions(n: u32) -> Vec<Partition> {
    fn rec(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if n == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=max.min(n)).rev() {
            cur.push(p);
            rec(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// `chi^lambda_mu` by Murnaghan-Nakayama.
///
/// # Panics
/// When `|lambda| != |mu|`; use [`try_character`] for a checked version.
pub fn character(lambda: &Partition, mu: &Partition) -> BigInt {
    try_character(lambda, mu).expect("character of partitions of different sizes")
}

pub fn try_character(lambda: &Partition, mu: &Partition) -> Result<BigInt> {
    if lambda.size() != mu.size() {
        return Err(Error::InvalidArgument(format!("|{lambda}| != |{mu}|")));
    }
    let mut memo = HashMap::new();
    Ok(BigInt::from(mn(&beta_set(lambda), mu.parts(), &mut memo)))
}

fn beta_set(lambda: &Partition) -> Vec<i64> {
    let l = lambda.len();
    // increasing order
    let mut b: Vec<i64> = (1..=l).map(|i| lambda.part(i) as i64 + (l - i) as i64).collect();
    b.reverse();
    b
}

fn mn(beta: &[i64], parts: &[u32], memo: &mut HashMap<(Vec<i64>, usize), i128>) -> i128 {
    let Some((&k, rest)) = parts.split_first() else {
        return 1;
    };
    let key = (beta.to_vec(), parts.len());
    if let Some(v) = memo.get(&key) {
        return *v;
    }
    let k = k as i64;
    let mut total: i128 = 0;
    for (idx, &b) in beta.iter().enumerate() {
        let t = b - k;
        if t < 0 || beta.binary_search(&t).is_ok() {
            continue;
        }
        // beads strictly between t and b
        let between = beta.iter().filter(|&&x| x > t && x < b).count();
        let mut next: Vec<i64> = beta.to_vec();
        next.remove(idx);
        let pos = next.binary_search(&t).unwrap_err();
        next.insert(pos, t);
        // normalise: strip leading 0,1,2,... beads (empty rows)
        let mut shift = 0;
        while shift < next.len() && next[shift] == shift as i64 {
            shift += 1;
        }
        let norm: Vec<i64> = next[shift..].iter().map(|x| x - shift as i64).collect();
        let v = mn(&norm, rest, memo);
        if between % 2 == 0 {
            total += v;
        } else {
            total -= v;
        }
    }
    memo.insert(key, total);
    total
}

/// Number of standard Young tableaux of shape `lambda`.
pub fn dim(lambda: &Partition) -> BigInt {
    let n = lambda.size() as u64;
    let conj = lambda.conjugate();
    let mut hooks = BigInt::one();
    for (i, &row) in lambda.parts().iter().enumerate() {
        for j in 0..row as usize {
            let arm = row as usize - j - 1;
            let leg = conj.part(j + 1) as usize - i - 1;
            hooks *= BigInt::from(arm + leg + 1);
        }
    }
    let d = factorial(n) / hooks;
    debug_assert_eq!(d, character(lambda, &Partition(vec![1; n as usize])));
    d
}

/// Character table of `S_n` with rows indexed by `lambda` and columns by `mu`,
/// both in reverse lexicographic order.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub n: u32,
    pub partitions: Vec<Partition>,
    pub values: Vec<Vec<BigInt>>,
}

impl CharacterTable {
    pub fn index(&self, p: &Partition) -> Option<usize> {
        self.partitions.iter().position(|q| q == p)
    }

    pub fn get(&self, lambda: &Partition, mu: &Partition) -> Option<&BigInt> {
        Some(&self.values[self.index(lambda)?][self.index(mu)?])
    }

    /// CSV with header `lambda,mu_1,...`; partitions written as `3.2.1`.
    pub fn to_csv(&self) -> String {
        let name = |p: &Partition| {
            if p.is_empty() {
                "0".to_string()
            } else {
                p.parts().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(".")
            }
        };
        let mut out = String::from("lambda");
        for mu in &self.partitions {
            out.push(',');
            out.push_str(&name(mu));
        }
        out.push('\n');
        for (lambda, row) in self.partitions.iter().zip(&self.values) {
            out.push_str(&name(lambda));
            for v in row {
                out.push(',');
                out.push_str(&v.to_string());
            }
            out.push('\n');
        }
        out
    }
}

/// Cached character table of `S_n` (shared between threads).
pub fn character_table(n: u32) -> Arc<CharacterTable> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CharacterTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().unwrap().get(&n) {
        return t.clone();
    }
    let parts = partitions(n);
    let values = parts
        .iter()
        .map(|l| {
            let b = beta_set(l);
            let mut memo = HashMap::new();
            parts.iter().map(|m| BigInt::from(mn(&b, m.parts(), &mut memo))).collect()
        })
        .collect();
    let t = Arc::new(CharacterTable { n, partitions: parts, values });
    cache.lock().unwrap().insert(n, t.clone());
    t
}

/// `(lambda, dim lambda * chi^lambda_{(r)^d})` for every `|lambda| = rd` with a nonzero weight.
pub fn rectangle_weights(r: u32, d: usize) -> Vec<(Partition, BigInt)> {
    let n = r * d as u32;
    let mu = Partition::rectangle(r, d);
    partitions(n)
        .into_iter()
        .filter_map(|l| {
            let w = dim(&l) * character(&l, &mu);
            (!w.is_zero()).then_some((l, w))
        })
        .collect()
}

/// `sum_i [(lambda_i - i + 1/2)^s - (-i + 1/2)^s]`.
pub fn shifted_power_sum(lambda: &Partition, s: u32) -> Rational {
    let mut acc = Rational::zero();
    for i in 1..=lambda.len() {
        let a = rat(2 * (lambda.part(i) as i64 - i as i64) + 1, 2);
        let b = rat(-2 * i as i64 + 1, 2);
        acc += num::pow(a, s as usize) - num::pow(b, s as usize);
    }
    acc
}

/// `prod_i (x + (i - lambda_i) hbar) / (x + i hbar)` as a series in `xinv` through `order`.
pub fn content_product_eigen(lambda: &Partition, order: i32) -> TruncSeries {
    let vars = vec![Var::truncated(XINV, order), Var::exact(HBAR)];
    let mut acc = TruncSeries::one().declare(Var::truncated(XINV, order));
    for i in 1..=lambda.len() {
        let a = i as i64 - lambda.part(i) as i64;
        if a == i as i64 {
            continue;
        }
        // (1 + a t)/(1 + i t), t = hbar/x: 1 + (a - i) sum_{m>=1} (-i)^{m-1} t^m
        let mut terms: Vec<(Vec<i32>, Rational)> = vec![(vec![0, 0], int(1))];
        let mut p = int(a - i as i64);
        for m in 1..=order {
            terms.push((vec![m, m], p.clone()));
            p *= int(-(i as i64));
        }
        // vars sorted: hbar, xinv
        let f = TruncSeries::from_terms(vars.clone(), terms.into_iter().map(|(e, c)| (vec![e[0], e[1]], c))).unwrap();
        acc = &acc * &f;
    }
    acc
}

/// Elementary symmetric function `e_n` from power sums `p[k-1] = p_k` by Newton's identities.
pub fn newton_to_elementary(p: &[Rational], n: usize) -> Result<Rational> {
    if p.len() < n {
        return Err(Error::NotEnoughPowerSums { need: n, got: p.len() });
    }
    let mut total = Rational::zero();
    for lambda in partitions(n as u32) {
        // prod over parts i with multiplicity m_i of (-p_i)^{m_i} / (m_i! i^{m_i})
        let mut counts: HashMap<u32, u32> = HashMap::new();
        for &x in lambda.parts() {
            *counts.entry(x).or_default() += 1;
        }
        let mut term = Rational::one();
        for (i, m) in counts {
            let base = -p[i as usize - 1].clone();
            term *= num::pow(base, m as usize);
            term /= Rational::from_integer(factorial(m as u64) * BigInt::from(i).pow(m));
        }
        total += term;
    }
    if n % 2 == 1 {
        total = -total;
    }
    Ok(total)
}

/// Exponent vector helper for tests elsewhere.
pub fn exp_of(v: &[i32]) -> Exp {
    v.iter().copied().collect()
}
