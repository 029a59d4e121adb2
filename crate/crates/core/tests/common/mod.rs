//! Independent oracles shared by the integration tests. Nothing here calls
//! the engine's multiplication or product expansion.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;
use qvanish::QSeries;

/// Term-by-term product into a map, with the order bound derived from the
/// first unknown exponent of each factor.
pub fn naive_mul(x: &QSeries, y: &QSeries) -> QSeries {
    let mut acc: BTreeMap<i64, BigInt> = BTreeMap::new();
    for (i, a) in x.terms() {
        for (j, b) in y.terms() {
            *acc.entry(i + j).or_insert_with(BigInt::zero) += a * b;
        }
    }
    // unknown terms start at x.order + 1 and y.order + 1; a zero factor has
    // no known term below its order
    let low = |s: &QSeries| if s.is_zero() { s.order() + 1 } else { s.min_exp() };
    let order = (x.order() + low(y)).min(y.order() + low(x));
    QSeries::from_terms(acc.into_iter().filter(|(_, c)| !c.is_zero()), order)
}

/// Multiplies out `prod (1 - sign*q^e)^power` over the given factors with
/// plain integer polynomials; exponents must be at least 1.
pub fn brute_product(factors: &[(i64, i64, u32)], order: usize) -> Vec<i128> {
    let mut poly = vec![0i128; order + 1];
    poly[0] = 1;
    for &(sign, e, power) in factors {
        assert!(e >= 1);
        for _ in 0..power {
            let mut next = poly.clone();
            for i in e as usize..=order {
                next[i] -= sign as i128 * poly[i - e as usize];
            }
            poly = next;
        }
    }
    poly
}

/// The factors of `(±q^a, ±q^{m-a}; q^m)^power` below `order`.
pub fn block_factors(sign: i64, a: i64, m: i64, power: u32, order: i64) -> Vec<(i64, i64, u32)> {
    let mut out = Vec::new();
    for start in [a, m - a] {
        let mut e = start;
        while e <= order {
            out.push((sign, e, power));
            e += m;
        }
    }
    out
}

/// A bilateral theta sum by direct enumeration over `|n| <= bound`.
pub fn theta_sum(sa: i64, ea: i64, sb: i64, eb: i64, order: i64, bound: i64) -> BTreeMap<i64, i64> {
    let mut out = BTreeMap::new();
    for n in -bound..=bound {
        let e = ea * n * (n + 1) / 2 + eb * n * (n - 1) / 2;
        if e > order {
            continue;
        }
        let sign = sa.pow((n * (n + 1) / 2).rem_euclid(2) as u32) * sb.pow((n * (n - 1) / 2).rem_euclid(2) as u32);
        *out.entry(e).or_insert(0) += sign;
    }
    out.retain(|_, c| *c != 0);
    out
}

pub fn series(min_exp: i64, cs: &[i64], order: i64) -> QSeries {
    QSeries::from_coeffs(min_exp, cs.iter().map(|&c| BigInt::from(c)).collect(), order)
}

/// Random series: min exponent in [-4, 4], up to 10 stored coefficients,
/// and an order up to 4 past the last one.
pub fn arb_series() -> impl Strategy<Value = QSeries> {
    (-4i64..=4, prop::collection::vec(-30i64..=30, 0..10), 0i64..=4).prop_map(|(lo, cs, extra)| {
        let order = lo + cs.len() as i64 - 1 + extra;
        series(lo, &cs, order.max(lo - 1))
    })
}

/// Random series whose lowest coefficient is a unit.
pub fn arb_unit_series() -> impl Strategy<Value = QSeries> {
    (
        -4i64..=4,
        prop::bool::ANY,
        prop::collection::vec(-30i64..=30, 0..10),
        0i64..=4,
    )
        .prop_map(|(lo, neg, mut cs, extra)| {
            cs.insert(0, if neg { -1 } else { 1 });
            let order = lo + cs.len() as i64 - 1 + extra;
            series(lo, &cs, order)
        })
}
