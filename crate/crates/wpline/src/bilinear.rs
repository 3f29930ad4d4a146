//! The admissible basis of the Grassmannian point, the half-infinite matrices
//! `A--` / `A+-`, the canonical two-point data `B+-` and the identity
//! `A+- = B+- A--` tying them together.
//!
//! Indexing: rows of `A--` are `i = 1, 2, ..` for the coefficient of `x^{i-1}`,
//! rows of `A+-` and `B+-` are `i = 1, 2, ..` for `x^{-i}`, columns `j = 1, 2, ..`
//! stand for the basis vector `phi_{j-1}` (or `y^{-j}` for `B+-`). The `q`-degree
//! `d` counts powers of `q^r`. Entries are series in `hbar`.

use std::collections::BTreeMap;

use num::{BigInt, One, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::parallel::*;
use crate::series::{factorial, int, rat, Rational, TruncSeries, Var, HBAR, QDEG, XINV, YINV};
use crate::special::{log_gamma_asymp, XINV_BIG};
use crate::wave::{inv_linear_in, wave_coeff};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    X,
    Y,
}

impl Side {
    fn var(self) -> &'static str {
        match self {
            Side::X => XINV,
            Side::Y => YINV,
        }
    }

    fn sign(self) -> i64 {
        match self {
            Side::X => 1,
            Side::Y => -1,
        }
    }
}

/// `x_[k]` or `y_[k]` expanded in `1/x` (`1/y`).
#[derive(Clone, Debug, PartialEq)]
pub struct BracketSeries {
    pub side: Side,
    pub k: i64,
    pub value: TruncSeries,
}

/// `x_[k] = prod_{i=1}^k 1/(X + i - 1/2)`, `x_[-k] = prod_{i=1}^k (X - i + 1/2)`, `X = x/hbar`;
/// the `y` side flips the sign of the half-integers.
pub fn bracket(side: Side, k: i64, order: i32) -> BracketSeries {
    let var = side.var();
    let s = side.sign();
    let mut acc = TruncSeries::one().declare(Var::truncated(var, order));
    if k >= 0 {
        for i in 1..=k {
            acc = (&acc * &inv_linear_in(var, &rat(s * (2 * i - 1), 2), order)).shift(&[(HBAR, 1)]);
        }
    } else {
        for i in 1..=-k {
            let mut lin = TruncSeries::zero().declare(Var::truncated(var, order));
            lin.add_term(&[(var, -1), (HBAR, -1)], int(1));
            lin.add_term(&[], rat(-s * (2 * i - 1), 2));
            acc = &acc * &lin;
        }
    }
    BracketSeries { side, k, value: acc }
}

pub fn x_bracket(k: i64, order: i32) -> BracketSeries {
    bracket(Side::X, k, order)
}

pub fn y_bracket(k: i64, order: i32) -> BracketSeries {
    bracket(Side::Y, k, order)
}

/// `ln rho` as a series in `1/v`: `rho = exp(ln(2 pi)/2 + X ln X - X - ln Gamma(X + 1/2))`.
fn log_rho(var: &str, order: i32) -> TruncSeries {
    log_gamma_asymp(&rat(1, 2), order).laurent.attach_power(XINV_BIG, HBAR, 1).rename(XINV_BIG, var).neg()
}

/// `rho(x)` through `xinv^order`; constant term 1.
pub fn rho_series(order: i32) -> TruncSeries {
    log_rho(XINV, order).exp().expect("log rho has no constant term")
}

/// `1/rho(y)` through `yinv^order`.
pub fn rho_inverse_y(order: i32) -> TruncSeries {
    log_rho(YINV, order).neg().exp().expect("log rho has no constant term")
}

/// `phi_k = rho(x) sum_d c_d q^{rd} hbar^{k - (r+1)d} x_[rd - k]`, normalized so that
/// its leading term is `x^k`. The `q^{rd}` counter is [`QDEG`].
pub fn admissible_basis(r: u32, k: u32, dmax: usize, order: i32) -> TruncSeries {
    let rho = rho_series(order);
    let mut acc = TruncSeries::zero().declare(Var::truncated(QDEG, dmax as i32));
    for d in 0..=dmax {
        let shift = r as i64 * d as i64 - k as i64;
        let term = (&rho * &x_bracket(shift, order).value)
            .scale(&wave_coeff(r, d))
            .shift(&[(HBAR, k as i32 - (r as i32 + 1) * d as i32), (QDEG, d as i32)]);
        acc = &acc + &term;
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixKind {
    /// `A--`: non-negative powers of `x`.
    MinusMinus,
    /// `A+-`: negative powers of `x`.
    PlusMinus,
    /// `B+-`: canonical two-point coefficients.
    CanonicalPlusMinus,
}

/// A finite window of a `q`-graded half-infinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfInfMatrix {
    pub kind: MatrixKind,
    pub r: u32,
    pub rows: usize,
    pub cols: usize,
    pub qdeg: usize,
    /// `(i, j, d) -> entry`; zero entries are omitted.
    pub entries: BTreeMap<(usize, usize, usize), TruncSeries>,
}

type Graded = Vec<Vec<Vec<TruncSeries>>>;

impl HalfInfMatrix {
    pub fn get(&self, i: usize, j: usize, d: usize) -> TruncSeries {
        self.entries.get(&(i, j, d)).cloned().unwrap_or_else(TruncSeries::zero)
    }

    fn graded(&self) -> Graded {
        (0..=self.qdeg)
            .map(|d| (1..=self.rows).map(|i| (1..=self.cols).map(|j| self.get(i, j, d)).collect()).collect())
            .collect()
    }

    fn from_graded(kind: MatrixKind, r: u32, g: Graded) -> Self {
        let qdeg = g.len().saturating_sub(1);
        let rows = g.first().map_or(0, |m| m.len());
        let cols = g.first().and_then(|m| m.first()).map_or(0, |row| row.len());
        let mut entries = BTreeMap::new();
        for (d, m) in g.into_iter().enumerate() {
            for (i, row) in m.into_iter().enumerate() {
                for (j, e) in row.into_iter().enumerate() {
                    let e = e.prune();
                    if !e.is_zero() {
                        entries.insert((i + 1, j + 1, d), e);
                    }
                }
            }
        }
        HalfInfMatrix { kind, r, rows, cols, qdeg, entries }
    }

    /// Same entries (declared orders ignored).
    pub fn same_entries(&self, other: &HalfInfMatrix) -> bool {
        let keys: std::collections::BTreeSet<_> = self.entries.keys().chain(other.entries.keys()).collect();
        keys.into_iter().all(|&(i, j, d)| self.get(i, j, d).same_coefficients(&other.get(i, j, d)))
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .entries
            .iter()
            .map(|((i, j, d), s)| json!({"i": i, "j": j, "d": d, "series": s.to_json_value()}))
            .collect();
        json!({"rows": self.rows, "cols": self.cols, "qdeg": self.qdeg, "entries": entries})
    }
}

fn matrix_order(size: usize) -> i32 {
    2 * size as i32 + 2
}

fn extract(phi: &TruncSeries, d: usize, xpow: i32) -> Result<TruncSeries> {
    let avail = phi.order_of(XINV).unwrap_or(i32::MAX);
    if -xpow > avail {
        return Err(Error::PrecisionExceeded { requested: -xpow, available: avail });
    }
    Ok(phi.coefficient_of(QDEG, d as i32).coefficient_of(XINV, -xpow).prune())
}

fn basis_columns(r: u32, size: usize, dmax: usize) -> Vec<TruncSeries> {
    let order = matrix_order(size);
    (0..size as u32).collect::<Vec<_>>().par_iter().map(|&k| admissible_basis(r, k, dmax, order)).collect()
}

fn build(r: u32, size: usize, dmax: usize, kind: MatrixKind) -> Result<HalfInfMatrix> {
    let cols = basis_columns(r, size, dmax);
    let idx: Vec<usize> = (0..size).collect();
    let per_col: Vec<Result<Vec<(usize, usize, usize, TruncSeries)>>> = idx
        .par_iter()
        .map(|&jj| {
            let phi = &cols[jj];
            let mut out = Vec::new();
            for d in 0..=dmax {
                if kind == MatrixKind::PlusMinus && r as usize * d <= jj {
                    continue;
                }
                for i in 1..=size {
                    let xpow = match kind {
                        MatrixKind::MinusMinus => i as i32 - 1,
                        _ => -(i as i32),
                    };
                    let e = extract(phi, d, xpow)?;
                    if !e.is_zero() {
                        out.push((i, jj + 1, d, e));
                    }
                }
            }
            Ok(out)
        })
        .collect();
    let mut entries = BTreeMap::new();
    for col in per_col {
        for (i, j, d, e) in col? {
            entries.insert((i, j, d), e);
        }
    }
    Ok(HalfInfMatrix { kind, r, rows: size, cols: size, qdeg: dmax, entries })
}

/// `A--_{i,j} = [x^{i-1}] phi_{j-1}`.
pub fn matrix_amm(r: u32, size: usize, dmax: usize) -> Result<HalfInfMatrix> {
    build(r, size, dmax, MatrixKind::MinusMinus)
}

/// `A+-_{-i,j} = [x^{-i}] phi_{j-1}`, keeping only the degrees with `rd > j - 1`.
pub fn matrix_apm(r: u32, size: usize, dmax: usize) -> Result<HalfInfMatrix> {
    build(r, size, dmax, MatrixKind::PlusMinus)
}

fn graded_mul(a: &Graded, b: &Graded) -> Graded {
    let dmax = a.len().min(b.len()) - 1;
    let n = a[0].len();
    let m = b[0][0].len();
    let inner = b[0].len();
    (0..=dmax)
        .map(|d| {
            (0..n)
                .map(|i| {
                    (0..m)
                        .map(|j| {
                            let mut acc = TruncSeries::zero();
                            for d1 in 0..=d {
                                for l in 0..inner {
                                    let x = &a[d1][i][l];
                                    let y = &b[d - d1][l][j];
                                    if !x.is_zero() && !y.is_zero() {
                                        acc = &acc + &(x * y);
                                    }
                                }
                            }
                            acc
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// Inverse of a `q`-graded matrix whose `q^0` block is unit upper triangular.
fn graded_inverse(a: &Graded) -> Result<Graded> {
    let n = a[0].len();
    let a0 = &a[0];
    for i in 0..n {
        if !a0[i][i].same_coefficients(&TruncSeries::one()) || (0..i).any(|j| !a0[i][j].is_zero()) {
            return Err(Error::NotInvertible("q^0 block of A-- is not unit upper triangular".into()));
        }
    }
    let mut inv0 = vec![vec![TruncSeries::zero(); n]; n];
    for j in 0..n {
        inv0[j][j] = TruncSeries::one();
        for i in (0..j).rev() {
            let mut acc = TruncSeries::zero();
            for l in i + 1..=j {
                acc = &acc - &(&a0[i][l] * &inv0[l][j]);
            }
            inv0[i][j] = acc;
        }
    }
    let mut inv: Graded = vec![inv0];
    for d in 1..a.len() {
        // inv_d = -inv_0 sum_{e=1}^{d} a_e inv_{d-e}
        let mut s = vec![vec![TruncSeries::zero(); n]; n];
        for e in 1..=d {
            let p = graded_mul(&[a[e].clone()].to_vec(), &[inv[d - e].clone()].to_vec());
            for i in 0..n {
                for j in 0..n {
                    s[i][j] = &s[i][j] + &p[0][i][j];
                }
            }
        }
        let t = graded_mul(&vec![inv[0].clone()], &vec![s]);
        inv.push(t[0].iter().map(|row| row.iter().map(|x| x.neg()).collect()).collect());
    }
    Ok(inv)
}

/// `B+- = A+- (A--)^{-1}`, degree by degree in `q`.
pub fn canonical_from(apm: &HalfInfMatrix, amm: &HalfInfMatrix) -> Result<HalfInfMatrix> {
    let inv = graded_inverse(&amm.graded())?;
    let b = graded_mul(&apm.graded(), &inv);
    Ok(HalfInfMatrix::from_graded(MatrixKind::CanonicalPlusMinus, apm.r, b))
}

/// `B+-` by inverting `A--`.
pub fn canonical_basis_b(r: u32, size: usize, dmax: usize) -> Result<HalfInfMatrix> {
    canonical_from(&matrix_apm(r, size, dmax)?, &matrix_amm(r, size, dmax)?)
}

/// Coefficients `b_{i,j}` of `x^{-i-1} y^{-j-1}` in the canonical two-point function,
/// per `q`-degree.
#[derive(Clone, Debug, PartialEq)]
pub struct BogoliubovCoeffs {
    pub r: u32,
    pub imax: usize,
    pub jmax: usize,
    pub qdeg: usize,
    /// `(i, j, d) -> series in hbar`, 0-based `i, j`; zero entries omitted.
    pub entries: BTreeMap<(usize, usize, usize), TruncSeries>,
}

impl BogoliubovCoeffs {
    pub fn get(&self, i: usize, j: usize, d: usize) -> TruncSeries {
        self.entries.get(&(i, j, d)).cloned().unwrap_or_else(TruncSeries::zero)
    }

    /// The same data as the `B+-` block of the inversion route, which carries one
    /// less power of `hbar`.
    pub fn to_matrix(&self) -> HalfInfMatrix {
        let entries = self.entries.iter().map(|(&(i, j, d), s)| ((i + 1, j + 1, d), s.shift(&[(HBAR, -1)]).prune())).collect();
        HalfInfMatrix { kind: MatrixKind::CanonicalPlusMinus, r: self.r, rows: self.imax, cols: self.jmax, qdeg: self.qdeg, entries }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .entries
            .iter()
            .map(|((i, j, d), s)| json!({"i": i, "j": j, "d": d, "series": s.to_json_value()}))
            .collect();
        json!({"r": self.r, "imax": self.imax, "jmax": self.jmax, "qdeg": self.qdeg, "entries": entries})
    }

    pub fn from_json_value(v: &serde_json::Value) -> Result<Self> {
        let bad = |what: &str| Error::InvalidArgument(format!("bogoliubov json: {what}"));
        let num = |key: &str| v.get(key).and_then(|x| x.as_u64()).ok_or_else(|| bad(key));
        let mut entries = BTreeMap::new();
        for e in v.get("entries").and_then(|e| e.as_array()).ok_or_else(|| bad("entries"))? {
            let idx = |key: &str| e.get(key).and_then(|x| x.as_u64()).map(|x| x as usize).ok_or_else(|| bad(key));
            let s = TruncSeries::from_json_value(e.get("series").ok_or_else(|| bad("series"))?)?;
            entries.insert((idx("i")?, idx("j")?, idx("d")?), s);
        }
        Ok(BogoliubovCoeffs {
            r: num("r")? as u32,
            imax: num("imax")? as usize,
            jmax: num("jmax")? as usize,
            qdeg: num("qdeg")? as usize,
            entries,
        })
    }

    /// Rows `i,j,d,hbar_pow,coefficient`, one per monomial.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("i,j,d,hbar_pow,coefficient\n");
        for ((i, j, d), s) in &self.entries {
            let h = s.index_of(HBAR);
            for (e, c) in s.terms() {
                let p = h.map_or(0, |h| e[h]);
                out.push_str(&format!("{i},{j},{d},{p},{c}\n"));
            }
        }
        out
    }
}

/// `b_{i,j}` from the closed form
/// `(rho(x)/rho(y)) sum_{d>=1} q^{rd}/(d r^d hbar^{(r+1)d}) sum_{k<d} (-1)^{k-1}/(k!(d-1-k)!) sum_{n=1}^r x_[rk+n] y_[r(d-k)+1-n]`.
pub fn two_point_closed(r: u32, imax: usize, jmax: usize, dmax: usize) -> BogoliubovCoeffs {
    let xo = imax as i32 + 1;
    let yo = jmax as i32 + 1;
    let rho_x = rho_series(xo);
    let rho_y = rho_inverse_y(yo);
    let jobs: Vec<(usize, usize, i64)> = (1..=dmax)
        .flat_map(|d| (0..d).flat_map(move |k| (1..=r as i64).map(move |n| (d, k, n))))
        .collect();
    let parts: Vec<BTreeMap<(usize, usize, usize), TruncSeries>> = jobs
        .par_iter()
        .map(|&(d, k, n)| {
            let ri = r as i64;
            let sign = if k % 2 == 0 { -1 } else { 1 };
            let c = int(sign)
                / (Rational::from_integer(BigInt::from(d) * BigInt::from(r).pow(d as u32) * factorial(k as u64) * factorial((d - 1 - k) as u64)));
            let xs = &rho_x * &x_bracket(ri * k as i64 + n, xo).value;
            let ys = &rho_y * &y_bracket(ri * (d - k) as i64 + 1 - n, yo).value;
            let mut out = BTreeMap::new();
            for i in 0..imax {
                let a = xs.coefficient_of(XINV, i as i32 + 1).prune();
                if a.is_zero() {
                    continue;
                }
                for j in 0..jmax {
                    let b = ys.coefficient_of(YINV, j as i32 + 1).prune();
                    if b.is_zero() {
                        continue;
                    }
                    let v = (&a * &b).scale(&c).shift(&[(HBAR, -((r as i32 + 1) * d as i32))]);
                    out.insert((i, j, d), v);
                }
            }
            out
        })
        .collect();
    let mut entries: BTreeMap<(usize, usize, usize), TruncSeries> = BTreeMap::new();
    for p in parts {
        for (key, v) in p {
            let cur = entries.remove(&key).unwrap_or_else(TruncSeries::zero);
            let sum = (&cur + &v).prune();
            if !sum.is_zero() {
                entries.insert(key, sum);
            }
        }
    }
    BogoliubovCoeffs { r, imax, jmax, qdeg: dmax, entries }
}

/// `A+- = B+- A--` entrywise through `q`-degree `qdeg`, for a given `B+-`.
pub fn identity_holds_with(b: &HalfInfMatrix, apm: &HalfInfMatrix, amm: &HalfInfMatrix) -> bool {
    let prod = HalfInfMatrix::from_graded(MatrixKind::PlusMinus, apm.r, graded_mul(&b.graded(), &amm.graded()));
    prod.same_entries(apm)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BilinearReport {
    /// `A+- = B+- A--` with `B+-` from the closed two-point function.
    pub identity: bool,
    /// The closed form and the inversion give the same `B+-`.
    pub routes_agree: bool,
}

impl BilinearReport {
    pub fn pass(&self) -> bool {
        self.identity && self.routes_agree
    }
}

pub fn bilinear_identity_check(r: u32, size: usize, dmax: usize) -> Result<BilinearReport> {
    let amm = matrix_amm(r, size, dmax)?;
    let apm = matrix_apm(r, size, dmax)?;
    let closed = two_point_closed(r, size, size, dmax).to_matrix();
    let inverted = canonical_from(&apm, &amm)?;
    Ok(BilinearReport { identity: identity_holds_with(&closed, &apm, &amm), routes_agree: closed.same_entries(&inverted) })
}

/// `sum_{d2=0}^{d-k-1} (-1)^{d2+d-1-k} d! / ((d-d2) k! (d-d2-1-k)! d2!)`.
pub fn cbl(d: u64, k: u64) -> Result<Rational> {
    if k >= d {
        return Err(Error::InvalidArgument(format!("need 0 <= k < d, got k={k}, d={d}")));
    }
    let fd = Rational::from_integer(factorial(d));
    let mut acc = Rational::zero();
    for d2 in 0..d - k {
        let sign = if (d2 + d - 1 - k).is_multiple_of(2) { Rational::one() } else { -Rational::one() };
        let den = BigInt::from(d - d2) * factorial(k) * factorial(d - d2 - 1 - k) * factorial(d2);
        acc += sign * &fd / Rational::from_integer(den);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracket_examples() {
        assert!(x_bracket(0, 5).value.same_coefficients(&TruncSeries::one()));
        let b1 = x_bracket(1, 4).value;
        assert_eq!(b1.coeff(&[(XINV, 1), (HBAR, 1)]), int(1));
        assert_eq!(b1.coeff(&[(XINV, 2), (HBAR, 2)]), rat(-1, 2));
        let bm = x_bracket(-1, 4).value;
        assert_eq!(bm.coeff(&[(XINV, -1), (HBAR, -1)]), int(1));
        assert_eq!(bm.constant_term(), rat(-1, 2));
        assert_eq!(y_bracket(-1, 4).value.constant_term(), rat(1, 2));
    }

    #[test]
    fn rho_leading() {
        let rho = rho_series(6);
        assert_eq!(rho.constant_term(), int(1));
        assert_eq!(rho.coeff(&[(XINV, 1), (HBAR, 1)]), rat(1, 24));
        let back = &rho * &log_rho(XINV, 6).neg().exp().unwrap();
        assert!(back.same_coefficients(&TruncSeries::one().declare(Var::truncated(XINV, 6))));
    }

    #[test]
    fn amm_unit_triangular() {
        let a = matrix_amm(2, 5, 1).unwrap();
        for i in 1..=5 {
            assert!(a.get(i, i, 0).same_coefficients(&TruncSeries::one()));
            for j in 1..i {
                assert!(a.get(i, j, 0).is_zero());
            }
        }
    }

    #[test]
    fn apm_example_r1() {
        let a = matrix_apm(1, 3, 1).unwrap();
        assert!(a.get(1, 1, 1).same_coefficients(&TruncSeries::monomial(&[(HBAR, -1)], int(-1), &[])));
        assert!(a.entries.keys().all(|&(_, _, d)| d >= 1));
    }

    #[test]
    fn b00_r1() {
        let b = two_point_closed(1, 2, 2, 2);
        assert!(b.get(0, 0, 1).same_coefficients(&TruncSeries::constant(int(-1))));
        assert!(b.entries.keys().all(|&(_, _, d)| d >= 1));
    }

    #[test]
    fn small_identity() {
        for r in 1..=3 {
            let rep = bilinear_identity_check(r, 4, 2).unwrap();
            assert!(rep.pass(), "r={r}: {rep:?}");
        }
    }

    #[test]
    fn cbl_examples() {
        assert_eq!(cbl(1, 0).unwrap(), int(1));
        assert_eq!(cbl(2, 0).unwrap(), int(1));
        assert_eq!(cbl(4, 2).unwrap(), int(1));
        assert!(cbl(3, 3).is_err());
    }

    #[test]
    fn csv_and_json() {
        let b = two_point_closed(2, 2, 2, 1);
        let back = BogoliubovCoeffs::from_json_value(&b.to_json_value()).unwrap();
        assert_eq!(back.to_json_value(), b.to_json_value());
        assert!(b.to_csv().starts_with("i,j,d,hbar_pow,coefficient\n"));
    }
}
