//! Frozen reference values, each recomputed here by a route that shares no code
//! with the library where that is practical.

use std::collections::HashMap;

use num::{BigInt, One, Zero};
use wpline::bilinear::{admissible_basis, cbl, rho_series, two_point_closed, x_bracket};
use wpline::fock::{apply_alpha, commutator_check_w_alpha, FockState};
use wpline::gw::{
    disconnected_series, divisor_check, extract_invariant, genus_component, normalization_factor, stationary_series,
};
use wpline::partitions::{character, dim, newton_to_elementary, partitions, shifted_power_sum, Partition};
use wpline::series::{HBAR, QDEG, XINV};
use wpline::special::{bernoulli, inv_zeta_series, log_gamma_asymp, zeta_series, XINV_BIG};
use wpline::wave::{l_coefficients, phi_d, s_inf_series, wave_closed, xd_char_sum};
use wpline::wedge::{
    connected_e, disconnected_from_connected, normalized_connected_family_recursion, normalized_disconnected_family,
    w_vev_normalized, zvar, EWord,
};
use wpline::{int, rat, Rational, TruncSeries, Var};

// ---------------------------------------------------------------- independent oracles

/// Partition numbers by Euler's pentagonal recurrence.
fn partition_count(n: usize) -> u64 {
    let mut p = vec![0i64; n + 1];
    p[0] = 1;
    for m in 1..=n {
        let mut k = 1i64;
        loop {
            let g1 = (k * (3 * k - 1) / 2) as usize;
            if g1 > m {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            p[m] += sign * p[m - g1];
            let g2 = (k * (3 * k + 1) / 2) as usize;
            if g2 <= m {
                p[m] += sign * p[m - g2];
            }
            k += 1;
        }
    }
    p[n] as u64
}

/// Bernoulli numbers from the double-sum formula (`B_1 = -1/2`).
fn bernoulli_oracle(n: usize) -> Rational {
    let mut acc = Rational::zero();
    for k in 0..=n {
        let mut inner = Rational::zero();
        let mut binom = BigInt::one();
        for j in 0..=k {
            let term = Rational::from_integer(binom.clone() * BigInt::from(j as u64).pow(n as u32));
            inner += if j % 2 == 0 { term } else { -term };
            binom = binom * BigInt::from((k - j) as u64) / BigInt::from((j + 1) as u64);
        }
        acc += inner / int(k as i64 + 1);
    }
    acc
}

fn fact(n: u64) -> Rational {
    Rational::from_integer((1..=n).map(BigInt::from).product())
}

/// Characters by the Frobenius formula: `chi^lambda_mu = [x^{lambda + delta}] Delta(x) p_mu(x)`.
fn frobenius_character(lambda: &[u32], mu: &[u32]) -> i64 {
    let l = lambda.len().max(1);
    type Poly = HashMap<Vec<u32>, i64>;
    let mul = |a: &Poly, b: &Poly| -> Poly {
        let mut out = Poly::new();
        for (ea, ca) in a {
            for (eb, cb) in b {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                *out.entry(e).or_default() += ca * cb;
            }
        }
        out.retain(|_, c| *c != 0);
        out
    };
    let mut acc: Poly = [(vec![0; l], 1)].into_iter().collect();
    // Vandermonde prod_{i<j} (x_i - x_j)
    for i in 0..l {
        for j in i + 1..l {
            let mut f = Poly::new();
            let mut ei = vec![0; l];
            ei[i] = 1;
            let mut ej = vec![0; l];
            ej[j] = 1;
            f.insert(ei, 1);
            f.insert(ej, -1);
            acc = mul(&acc, &f);
        }
    }
    for &m in mu {
        let mut f = Poly::new();
        for i in 0..l {
            let mut e = vec![0; l];
            e[i] = m;
            f.insert(e, 1);
        }
        acc = mul(&acc, &f);
    }
    let target: Vec<u32> = (0..l).map(|i| lambda.get(i).copied().unwrap_or(0) + (l - 1 - i) as u32).collect();
    acc.get(&target).copied().unwrap_or(0)
}

/// `sinh`-based coefficients of `2 sinh(z/2)`.
fn zeta_oracle(k: usize) -> Rational {
    if k.is_multiple_of(2) {
        return Rational::zero();
    }
    rat(2, 1) / (Rational::from_integer(BigInt::from(2).pow(k as u32)) * fact(k as u64))
}

// ---------------------------------------------------------------- partitions and characters

#[test]
fn partition_counts() {
    for n in 0..=12u32 {
        assert_eq!(partitions(n).len() as u64, partition_count(n as usize), "n = {n}");
    }
    assert_eq!(partitions(9).len(), 30);
}

#[test]
fn characters_match_frobenius() {
    for n in 1..=6 {
        for lam in partitions(n) {
            for mu in partitions(n) {
                let want = frobenius_character(lam.parts(), mu.parts());
                assert_eq!(character(&lam, &mu), BigInt::from(want), "{lam} at {mu}");
            }
        }
    }
    assert_eq!(character(&Partition::new(vec![2, 1]), &Partition::new(vec![3])), BigInt::from(-1));
    assert_eq!(dim(&Partition::new(vec![3, 2])), BigInt::from(5));
}

#[test]
fn elementary_from_power_sums() {
    assert_eq!(newton_to_elementary(&[int(6), int(14), int(36)], 3).unwrap(), int(6));
    assert_eq!(newton_to_elementary(&[int(6), int(14)], 2).unwrap(), int(11));
    assert!(newton_to_elementary(&[int(6)], 2).is_err());
}

#[test]
fn shifted_power_sum_examples() {
    assert_eq!(shifted_power_sum(&Partition::new(vec![2]), 2), int(2));
    // (3/2)^3 - (-1/2)^3 + (1/2)^3 - (-3/2)^3 for (2, 2)
    let want = rat(27, 8) + rat(1, 8) + rat(1, 8) + rat(27, 8);
    assert_eq!(shifted_power_sum(&Partition::new(vec![2, 2]), 3), want);
}

// ---------------------------------------------------------------- special functions

#[test]
fn bernoulli_numbers() {
    for n in 0..=16 {
        assert_eq!(bernoulli(n), bernoulli_oracle(n), "B_{n}");
    }
    assert_eq!(bernoulli(2), rat(1, 6));
    assert_eq!(bernoulli(12), rat(-691, 2730));
}

#[test]
fn zeta_and_its_inverse() {
    let z = zeta_series("z", 9);
    for k in 0..=9 {
        assert_eq!(z.coeff(&[("z", k)]), zeta_oracle(k as usize), "z^{k}");
    }
    // 1/zeta(z) = sum_n (2 - 2^{2n}) B_{2n} / (2^{2n} (2n)!) z^{2n-1}
    let inv = inv_zeta_series("z", 9);
    for n in 0..=5u32 {
        let b = bernoulli_oracle(2 * n as usize);
        let p = Rational::from_integer(BigInt::from(2).pow(2 * n));
        let want = (int(2) - &p) * b / (&p * fact(2 * n as u64));
        assert_eq!(inv.coeff(&[("z", 2 * n as i32 - 1)]), want, "z^{}", 2 * n as i32 - 1);
    }
    assert_eq!(inv.coeff(&[("z", 1)]), rat(-1, 24));
    assert_eq!(inv.coeff(&[("z", 3)]), rat(7, 5760));
}

#[test]
fn log_gamma_coefficients() {
    let a0 = log_gamma_asymp(&int(0), 5);
    assert_eq!(a0.laurent.coeff(&[(XINV_BIG, 1)]), rat(1, 12));
    assert_eq!(a0.laurent.coeff(&[(XINV_BIG, 3)]), rat(-1, 360));
    assert_eq!(a0.log_x, rat(-1, 2));
    let half = log_gamma_asymp(&rat(1, 2), 5);
    assert_eq!(half.laurent.coeff(&[(XINV_BIG, 1)]), rat(-1, 24));
    assert_eq!(half.laurent.coeff(&[(XINV_BIG, 3)]), rat(7, 2880));
    assert!(half.log_x.is_zero());
}

#[test]
fn s_inf_leading_correction() {
    let s = s_inf_series(6).unwrap();
    // the 1/x term: hbar/24 from the half-shifted Stirling series
    assert_eq!(s.laurent.coeff(&[(XINV, 1), (HBAR, 1)]), rat(1, 24));
}

// ---------------------------------------------------------------- Fock space and correlators

#[test]
fn alpha_on_vacuum() {
    let v = apply_alpha(&FockState::vacuum(6), -2);
    assert_eq!(v.amplitude(&Partition::new(vec![2])).constant_term(), int(1));
    assert_eq!(v.amplitude(&Partition::new(vec![1, 1])).constant_term(), int(-1));
    assert_eq!(v.amplitudes().len(), 2);
    assert!(commutator_check_w_alpha(0, 1, 3, 6).unwrap().pass);
}

#[test]
fn single_e0_is_inverse_zeta() {
    let c = connected_e(&EWord::new(1).e(0, 1), 5).unwrap();
    assert!(c.same_coefficients(&inv_zeta_series("w1", 5)));
}

#[test]
fn two_point_e_ratio() {
    // <E_r(w1) E_{-r}(w2)> = zeta(r(w1 + w2)) / zeta(w1 + w2)
    let r = 2;
    let order = 4;
    let c = connected_e(&EWord::new(2).e(r, 1).e(-r, 2), order).unwrap();
    let ratio = &zeta_over_sum(r, order) * &zeta_over_sum(1, order).invert().unwrap();
    assert!(c.agrees_through(&ratio, &[("w1", order), ("w2", order)]));
    assert_eq!(c.constant_term(), int(r));
}

/// `zeta(a s) / s` with `s = w1 + w2`, from the `sinh` coefficients.
fn zeta_over_sum(a: i64, order: i32) -> TruncSeries {
    let s = &TruncSeries::var("w1", Some(order)) + &TruncSeries::var("w2", Some(order));
    let c: Vec<Rational> = (0..=2 * order as usize).map(|k| zeta_oracle(k + 1) * num::pow(int(a), k + 1)).collect();
    TruncSeries::one().declare(Var::truncated("w1", order)).declare(Var::truncated("w2", order)).mul_by_composite(&c, &s)
}

#[test]
fn w_vev_examples() {
    assert!(w_vev_normalized(2, 1, &[1]).is_zero());
    assert_eq!(w_vev_normalized(2, 1, &[2]), int(4));
    assert_eq!(w_vev_normalized(1, 1, &[1]), int(1));
}

// ---------------------------------------------------------------- Gromov-Witten

#[test]
fn unstable_seeds() {
    let one = stationary_series(1, 0, 1, 3).unwrap();
    let g0 = genus_component(&one, 0);
    assert_eq!(g0.coeff(&[("z1", -1)]), int(1));
    assert_eq!(g0.len(), 1);
    let two = stationary_series(1, 0, 2, 3).unwrap();
    assert!(genus_component(&two, 0).is_zero());
    let none = stationary_series(2, 0, 0, 3).unwrap();
    assert!(genus_component(&none, 0).is_zero());
}

#[test]
fn degree_zero_genus_two() {
    // <tau_{2g-2}>_{g,0} through lambda_g: 7/5760 at g = 2
    let gw = stationary_series(1, 0, 1, 4).unwrap();
    assert_eq!(extract_invariant(&gw, 2, &[2]).unwrap(), rat(7, 5760));
}

#[test]
fn genus_zero_one_point() {
    for d in 1..=3usize {
        let k = 2 * d as i32 - 2;
        let want = Rational::one() / (fact(d as u64) * fact(d as u64));
        let conn = stationary_series(1, d, 1, k + 1).unwrap();
        assert_eq!(extract_invariant(&conn, 0, &[k]).unwrap(), want);
    }
    // r = 2, degree one: <tau_1(pt)>_{0,1} = 1/2
    let gw = stationary_series(2, 1, 1, 2).unwrap();
    assert_eq!(extract_invariant(&gw, 0, &[1]).unwrap(), rat(1, 2));
}

#[test]
fn top_genus_one_point() {
    // <tau_{2g}>_{g,1} for P^1 equals 1/(2^{2g} (2g+1)!)
    for g in 0..=2i32 {
        let k = 2 * g;
        let gw = stationary_series(1, 1, 1, k + 1).unwrap();
        let want = Rational::one() / (Rational::from_integer(BigInt::from(2).pow(2 * g as u32)) * fact(2 * g as u64 + 1));
        assert_eq!(extract_invariant(&gw, g, &[k]).unwrap(), want, "g = {g}");
    }
}

#[test]
fn disconnected_without_insertions() {
    assert!(disconnected_series(2, 1, 0, 2).unwrap().series.is_zero());
    // r = 1: sum_d q^d G_d() = exp(q / hbar^2)
    for d in 0..=4usize {
        let s = disconnected_series(1, d, 0, 2).unwrap().series;
        assert_eq!(s.coeff(&[(HBAR, -2 * d as i32)]), Rational::one() / fact(d as u64), "d = {d}");
        assert_eq!(s.len(), 1);
    }
}

#[test]
fn families_reassemble() {
    let conn = normalized_connected_family_recursion(2, 2, 1, 4).unwrap();
    let disc = normalized_disconnected_family(2, 2, 1, 4).unwrap();
    let back = disconnected_from_connected(&conn).unwrap();
    for (key, s) in &disc.entries {
        assert!(s.same_coefficients(&back.entries[key]), "{key:?}");
    }
}

#[test]
fn divisor_examples() {
    assert!(divisor_check(1, 2, 0, 4).unwrap());
    assert!(divisor_check(3, 1, 2, 4).unwrap());
    // and by hand for r = 1, d = 1, n = 0: [z^1] G_1(z) = (1 - 1/24) G_1()
    let one = disconnected_series(1, 1, 1, 3).unwrap().series.coefficient_of(&zvar(1), 1);
    let none = disconnected_series(1, 1, 0, 3).unwrap().series;
    assert!(one.same_coefficients(&none.scale(&rat(23, 24))));
}

#[test]
fn normalization_with_time() {
    let t = rat(3, 2);
    let nf = normalization_factor(1, &t, 2, 3);
    assert_eq!(nf.hbar_exponent, rat(-1, 16));
    // q^1 coefficient: e^{t hbar} / hbar^2
    for j in 0..=3 {
        let want = num::pow(t.clone(), j as usize) / fact(j as u64);
        assert_eq!(nf.series.coeff(&[(QDEG, 1), (HBAR, j - 2)]), want, "hbar^{}", j - 2);
    }
    // q^2: e^{2 t hbar} / (2 hbar^4)
    assert_eq!(nf.series.coeff(&[(QDEG, 2), (HBAR, -3)]), t.clone());
    let flat = normalization_factor(3, &t, 2, 3);
    assert!(flat.series.same_coefficients(&TruncSeries::one()));
    let e = flat.expanded(2);
    assert_eq!(e.coeff(&[(HBAR, 2)]), rat(1, 512));
}

// ---------------------------------------------------------------- wave function and curve

#[test]
fn wave_coefficients() {
    let w = wave_closed(2, 2);
    let c: Vec<_> = w.terms.iter().map(|m| (m.d, m.coeff.clone(), m.hbar_pow, m.gamma_shift)).collect();
    assert_eq!(c, vec![(0, int(1), 0, 0), (1, rat(-1, 2), -3, 2), (2, rat(1, 8), -6, 4)]);
}

#[test]
fn wave_ratio_by_hand() {
    // Phi^1 / Phi^0 for r = 1: -hbar^{-2} * hbar / (x + hbar/2)
    let f = phi_d(1, 1).ratio_series(4);
    for m in 1..=4 {
        let want = -num::pow(rat(-1, 2), (m - 1) as usize);
        assert_eq!(f.coeff(&[(XINV, m), (HBAR, m - 2)]), want, "xinv^{m}");
    }
}

#[test]
fn xd_r1_degree_one() {
    // X_1 = sum_lambda |lambda| = 1 : x/(x + hbar), normalized by 1
    let x = xd_char_sum(1, 1, 4);
    assert_eq!(x.constant_term(), int(1));
    assert_eq!(x.coeff(&[(XINV, 1), (HBAR, 1)]), int(-1));
    assert_eq!(x.coeff(&[(XINV, 2), (HBAR, 2)]), int(1));
}

#[test]
fn l_polynomial_examples() {
    assert_eq!(l_coefficients(2, 1).coefficient(0), int(-1));
    assert_eq!(l_coefficients(3, 1).coefficient(0), int(-1));
    assert_eq!(l_coefficients(2, 2).coefficient(0), int(1));
}

// ---------------------------------------------------------------- bilinear data

#[test]
fn brackets_by_hand() {
    // x_[2] = 1/((X + 1/2)(X + 3/2)), x_[-2] = (X - 1/2)(X - 3/2); X = x/hbar
    let b = x_bracket(-2, 4).value;
    assert_eq!(b.coeff(&[(XINV, -2), (HBAR, -2)]), int(1));
    assert_eq!(b.coeff(&[(XINV, -1), (HBAR, -1)]), int(-2));
    assert_eq!(b.coeff(&[]), rat(3, 4));
    let p = x_bracket(2, 4).value;
    assert_eq!(p.coeff(&[(XINV, 2), (HBAR, 2)]), int(1));
    assert_eq!(p.coeff(&[(XINV, 3), (HBAR, 3)]), int(-2));
}

#[test]
fn basis_at_degree_zero() {
    // phi_2 at q^0 is rho(x) * x_[-2] * hbar^2
    let phi = admissible_basis(2, 2, 1, 6).coefficient_of(QDEG, 0);
    let want = (&rho_series(6) * &x_bracket(-2, 6).value).shift(&[(HBAR, 2)]);
    assert!(phi.same_coefficients(&want));
    assert_eq!(phi.coeff(&[(XINV, -2)]), int(1));
}

#[test]
fn two_point_examples() {
    let b = two_point_closed(1, 3, 3, 2);
    assert_eq!(b.get(0, 0, 1).coeff(&[(HBAR, 0)]), int(-1));
    assert!(b.entries.keys().all(|&(_, _, d)| d >= 1));
    // hbar-degree of b_{i,j} at q-degree d is (i + 1) + (j + 1) - (r + 1) d
    for r in 1..=3u32 {
        let b = two_point_closed(r, 4, 4, 2);
        for (&(i, j, d), s) in &b.entries {
            let want = (i + j + 2) as i32 - (r as i32 + 1) * d as i32;
            assert_eq!(s.valuation(HBAR).unwrap_or(0), want, "r={r} ({i}, {j}, {d})");
            assert_eq!(s.degree(HBAR).unwrap_or(0), want);
        }
    }
}

#[test]
fn cbl_examples() {
    assert_eq!(cbl(1, 0).unwrap(), int(1));
    assert_eq!(cbl(5, 3).unwrap(), int(1));
    assert!(cbl(2, 2).is_err());
}
