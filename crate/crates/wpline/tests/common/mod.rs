//! Shared helpers for the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wpline::{rat, Rational, TruncSeries, Var};

/// Seeds of the randomized sweeps; changing them changes the corpus.
pub const RING_SEED: u64 = 0x5eed_0001;
pub const SHIFT_SEED: u64 = 0x5eed_0002;
pub const UNITRI_SEED: u64 = 0x5eed_0003;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.random_range(-9..=9), rng.random_range(1..=5))
}

/// A random series in `u` (floor -1 allowed) and `v`, both truncated.
pub fn random_series(rng: &mut ChaCha8Rng) -> TruncSeries {
    let ou = rng.random_range(2..=5);
    let ov = rng.random_range(2..=4);
    let lowest = if rng.random_bool(0.3) { -1 } else { 0 };
    let mut s = TruncSeries::zero().declare(Var::truncated("u", ou)).declare(Var::truncated("v", ov));
    for _ in 0..rng.random_range(1..=6) {
        let eu = rng.random_range(lowest..=ou);
        let ev = rng.random_range(0..=ov);
        s.add_term(&[("u", eu), ("v", ev)], small_rational(rng));
    }
    s
}

/// Equality on every coefficient both sides know.
pub fn agree(a: &TruncSeries, b: &TruncSeries) -> bool {
    let mut orders: Vec<(String, i32)> = Vec::new();
    for v in a.vars().iter().chain(b.vars()) {
        let o = match (a.order_of(&v.name), b.order_of(&v.name)) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        };
        if let Some(o) = o {
            orders.push((v.name.clone(), o));
        }
    }
    let refs: Vec<(&str, i32)> = orders.iter().map(|(n, o)| (n.as_str(), *o)).collect();
    a.agrees_through(b, &refs)
}

/// A random series in `xinv` through `order` over an exact `hbar`.
pub fn random_x_series(rng: &mut ChaCha8Rng, order: i32) -> TruncSeries {
    let mut s = TruncSeries::zero().declare(Var::truncated(wpline::series::XINV, order));
    for _ in 0..rng.random_range(1..=5) {
        let e = rng.random_range(-2..=order);
        let h = rng.random_range(0..=2);
        s.add_term(&[(wpline::series::XINV, e), (wpline::series::HBAR, h)], small_rational(rng));
    }
    s
}
