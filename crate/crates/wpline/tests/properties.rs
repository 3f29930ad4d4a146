mod common;

use num::{BigInt, One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

use wpline::bilinear::{
    admissible_basis, canonical_from, identity_holds_with, matrix_amm, matrix_apm, rho_series, two_point_closed,
    BogoliubovCoeffs, HalfInfMatrix,
};
use wpline::fock::{apply_alpha, FockState};
use wpline::gw::{extract_invariant, genus_grading_ok, stationary_series};
use wpline::partitions::{character, content_product_eigen, dim, partitions, shifted_power_sum, Partition};
use wpline::series::{HBAR, QDEG, XINV};
use wpline::special::{inv_zeta_series, log_gamma_asymp, zeta_series, XINV_BIG};
use wpline::wave::{lift_apply, quantum_curve_apply, shift_x, t_evolve, wave_closed, wave_coeff};
use wpline::wedge::{connected_e, zvar, EWord};
use wpline::{int, rat, Rational, TruncSeries, Var};

fn config(cases: u32) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(0x77_6c_69_6e_65), failure_persistence: None, ..Config::default() }
}

fn rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn partition_up_to(max: u32) -> impl Strategy<Value = Partition> {
    (0..=max).prop_flat_map(|n| {
        let ps = partitions(n);
        (0..ps.len()).prop_map(move |i| ps[i].clone())
    })
}

// ---------------------------------------------------------------- series arithmetic

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn ring_axioms(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let a = common::random_series(&mut rng);
        let b = common::random_series(&mut rng);
        let c = common::random_series(&mut rng);
        prop_assert!(common::agree(&(&a * &b), &(&b * &a)));
        prop_assert!(common::agree(&(&(&a * &b) * &c), &(&a * &(&b * &c))));
        prop_assert!(common::agree(&(&a * &(&b + &c)), &(&(&a * &b) + &(&a * &c))));
        prop_assert!(common::agree(&(&a - &a), &TruncSeries::zero()));
        prop_assert!(common::agree(&(&a * &TruncSeries::one()), &a));
    }

    #[test]
    fn inverse_is_two_sided(seed in any::<u64>(), lead in rational().prop_filter("unit", |c| !c.is_zero())) {
        let mut rng = common::rng(seed);
        let mut a = TruncSeries::constant(lead).declare(Var::truncated("u", 4)).declare(Var::truncated("v", 3));
        for _ in 0..4 {
            use rand::Rng;
            let (eu, ev) = (rng.random_range(0..=4), rng.random_range(0..=3));
            if eu + ev > 0 {
                a.add_term(&[("u", eu), ("v", ev)], common::small_rational(&mut rng));
            }
        }
        let inv = a.invert().unwrap();
        prop_assert!(common::agree(&(&a * &inv), &TruncSeries::one()));
    }

    #[test]
    fn shift_is_a_group_action(seed in any::<u64>(), s in rational(), t in rational()) {
        let mut rng = common::rng(seed);
        let f = common::random_x_series(&mut rng, 7);
        let two = shift_x(&shift_x(&f, &s).unwrap(), &t).unwrap();
        prop_assert!(two.same_coefficients(&shift_x(&f, &(&s + &t)).unwrap()));
        let back = shift_x(&shift_x(&f, &s).unwrap(), &-&s).unwrap();
        prop_assert!(back.same_coefficients(&f));
        prop_assert!(shift_x(&f, &Rational::zero()).unwrap().same_coefficients(&f));
    }

    #[test]
    fn zeta_times_inverse(n in 2i32..=30) {
        let p = &zeta_series("z", n) * &inv_zeta_series("z", n);
        let one = TruncSeries::one();
        prop_assert!(p.agrees_through(&one, &[("z", n - 1)]));
    }

    #[test]
    fn log_gamma_step(a in rational(), order in 2i32..=10) {
        // ln Gamma(X + a + 1) - ln Gamma(X + a) = ln(X + a) = ln X + sum_m (-1)^{m+1} a^m X^{-m} / m
        let lo = log_gamma_asymp(&a, order);
        let hi = log_gamma_asymp(&(&a + int(1)), order);
        prop_assert_eq!(&hi.log_x - &lo.log_x, int(1));
        prop_assert_eq!(&hi.x_coeff, &lo.x_coeff);
        let mut want = TruncSeries::zero().declare(Var::truncated(XINV_BIG, order));
        let mut p = a.clone();
        for m in 1..=order {
            let sign = if m % 2 == 1 { 1 } else { -1 };
            want.add_term(&[(XINV_BIG, m)], &p * int(sign) / int(m as i64));
            p *= &a;
        }
        prop_assert!((&hi.laurent - &lo.laurent).same_coefficients(&want));
    }
}

// ---------------------------------------------------------------- partitions and characters

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn row_orthogonality(n in 1u32..=7, i in 0usize..64, j in 0usize..64) {
        let ps = partitions(n);
        let (lam, nu) = (&ps[i % ps.len()], &ps[j % ps.len()]);
        let s = ps.iter().fold(Rational::zero(), |acc, mu| acc + Rational::new(character(lam, mu) * character(nu, mu), mu.z()));
        prop_assert_eq!(s, if lam == nu { int(1) } else { int(0) });
    }

    #[test]
    fn column_orthogonality(n in 1u32..=7, i in 0usize..64, j in 0usize..64) {
        let ps = partitions(n);
        let (mu, nu) = (&ps[i % ps.len()], &ps[j % ps.len()]);
        let s: BigInt = ps.iter().map(|lam| character(lam, mu) * character(lam, nu)).sum();
        prop_assert_eq!(s, if mu == nu { mu.z() } else { BigInt::zero() });
    }

    #[test]
    fn identity_class_gives_dimension(lam in partition_up_to(9)) {
        let ones = Partition::new(vec![1; lam.size() as usize]);
        prop_assert_eq!(character(&lam, &ones), dim(&lam));
    }

    #[test]
    fn first_shifted_power_sum_is_size(lam in partition_up_to(12)) {
        prop_assert_eq!(shifted_power_sum(&lam, 1), int(lam.size() as i64));
    }

    #[test]
    fn content_product_leading_terms(lam in partition_up_to(10), order in 1i32..=6) {
        let s = content_product_eigen(&lam, order);
        prop_assert_eq!(s.constant_term(), int(1));
        prop_assert_eq!(s.coeff(&[(XINV, 1), (HBAR, 1)]), int(-(lam.size() as i64)));
    }

    #[test]
    fn alpha_word_gives_characters(mu in partition_up_to(6)) {
        let mut v = FockState::vacuum(6);
        for &m in mu.parts() {
            v = apply_alpha(&v, -(m as i64));
        }
        for lam in partitions(mu.size()) {
            prop_assert_eq!(v.amplitude(&lam).constant_term(), Rational::from_integer(character(&lam, &mu)));
        }
    }
}

// ---------------------------------------------------------------- correlators and invariants

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn energy_must_balance(labels in proptest::collection::vec(-2i64..=2, 1..=3)) {
        let n = labels.len();
        let mut w = EWord::new(n);
        for (i, &l) in labels.iter().enumerate() {
            w = w.e(l, i + 1);
        }
        prop_assume!(w.energy() != 0);
        prop_assert!(connected_e(&w, 3).unwrap().is_zero());
    }

    #[test]
    fn stationary_grading(r in 1u32..=3, d in 0usize..=2, n in 1usize..=3) {
        let gw = stationary_series(r, d, n, 4).unwrap();
        prop_assert!(genus_grading_ok(&gw));
        if n >= 2 {
            for i in 1..=n {
                prop_assert!(gw.series.valuation(&zvar(i)).is_none_or(|v| v >= 0));
            }
        }
    }

    #[test]
    fn invariants_vanish_off_dimension(r in 1u32..=2, d in 0usize..=2, g in 0i32..=2, k in proptest::collection::vec(0i32..=5, 1..=2)) {
        let total: i32 = k.iter().sum();
        prop_assume!(total != 2 * g - 2 + (r as i32 + 1) * d as i32);
        let gw = stationary_series(r, d, k.len(), 6).unwrap();
        prop_assert_eq!(extract_invariant(&gw, g, &k).unwrap(), int(0));
    }
}

// ---------------------------------------------------------------- wave function and bilinear data

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn evolution_matches_rescaling(r in 1u32..=3, dmax in 1usize..=4, t in rational(), order in 0u32..=4) {
        let w = t_evolve(&wave_closed(r, dmax), &t, order).unwrap();
        for m in &w.terms {
            let j = m.weight_order;
            let rate = &t * int(r as i64 * m.d as i64);
            let f = Rational::from_integer((1..=j as u64).map(BigInt::from).product());
            let want = wave_coeff(r, m.d) * num::pow(rate, j as usize) / f;
            prop_assert_eq!(&m.coeff, &want);
            prop_assert_eq!(m.hbar_pow, -((r as i64 + 1) * m.d as i64) + j as i64);
        }
        prop_assert!(quantum_curve_apply(&w).is_zero());
        let staged = t_evolve(&wave_closed(r, dmax).with_t(&t).unwrap(), &Rational::zero(), order).unwrap();
        prop_assert_eq!(staged.terms, w.terms);
    }

    #[test]
    fn lift_gives_admissible_basis(r in 1u32..=3, k in 0u32..=4, dmax in 0usize..=2) {
        let order = 8;
        let lifted = lift_apply(&wave_closed(r, dmax), k);
        let mut sum = TruncSeries::zero().declare(Var::truncated(QDEG, dmax as i32));
        for m in &lifted.terms {
            sum = &sum + &m.ratio_series(order).shift(&[(QDEG, m.d as i32)]);
        }
        let want = &rho_series(order) * &sum;
        prop_assert!(admissible_basis(r, k, dmax, order).same_coefficients(&want));
    }

    #[test]
    fn canonical_block_ignores_unitriangular_change(r in 1u32..=2, seed in any::<u64>()) {
        use rand::Rng;
        let size = 5;
        let amm = matrix_amm(r, size, 1).unwrap();
        let apm = matrix_apm(r, size, 1).unwrap();
        let mut rng = common::rng(seed);
        let mut u = vec![vec![Rational::zero(); size + 1]; size + 1];
        for j in 1..=size {
            u[j][j] = Rational::one();
            for i in 1..j {
                u[i][j] = rat(rng.random_range(-3..=3), rng.random_range(1..=3));
            }
        }
        let times_u = |m: &HalfInfMatrix| {
            let mut out = HalfInfMatrix { entries: Default::default(), ..m.clone() };
            for d in 0..=m.qdeg {
                for i in 1..=m.rows {
                    for j in 1..=m.cols {
                        let mut acc = TruncSeries::zero();
                        for l in 1..=j {
                            if !u[l][j].is_zero() {
                                acc = &acc + &m.get(i, l, d).scale(&u[l][j]);
                            }
                        }
                        let acc = acc.prune();
                        if !acc.is_zero() {
                            out.entries.insert((i, j, d), acc);
                        }
                    }
                }
            }
            out
        };
        let b = canonical_from(&apm, &amm).unwrap();
        let b2 = canonical_from(&times_u(&apm), &times_u(&amm)).unwrap();
        prop_assert!(b.same_entries(&b2));
    }

    #[test]
    fn bogoliubov_json_round_trip(r in 1u32..=3, imax in 1usize..=5, jmax in 1usize..=5, dmax in 1usize..=2) {
        let b = two_point_closed(r, imax, jmax, dmax);
        let back = BogoliubovCoeffs::from_json_value(&b.to_json_value()).unwrap();
        prop_assert_eq!(back.to_json_value(), b.to_json_value());
        prop_assert_eq!((back.r, back.imax, back.jmax, back.qdeg), (b.r, b.imax, b.jmax, b.qdeg));
        for (key, s) in &b.entries {
            prop_assert!(back.entries[key].same_coefficients(s));
        }
    }

    #[test]
    fn perturbed_two_point_breaks_identity(r in 1u32..=2, pick in any::<prop::sample::Index>(), bump in rational().prop_filter("nonzero", |c| !c.is_zero())) {
        let size = 5;
        let amm = matrix_amm(r, size, 2).unwrap();
        let apm = matrix_apm(r, size, 2).unwrap();
        let mut b = two_point_closed(r, size, size, 2).to_matrix();
        prop_assert!(identity_holds_with(&b, &apm, &amm));
        let keys: Vec<_> = b.entries.keys().copied().collect();
        let key = keys[pick.index(keys.len())];
        let e = &b.entries[&key] + &TruncSeries::monomial(&[(HBAR, 0)], bump, &[]);
        b.entries.insert(key, e);
        prop_assert!(!identity_holds_with(&b, &apm, &amm));
    }

    #[test]
    fn cbl_is_one(d in 1u64..=14, k in 0u64..14) {
        prop_assume!(k < d);
        prop_assert_eq!(wpline::bilinear::cbl(d, k).unwrap(), int(1));
    }
}
