//! Dissection operators and the theta-function identities the vanishing
//! proofs are built from: the Entry 30 product formulas, the cube
//! decomposition with its `M(mu, 1)`, `M(mu, 2)` pair, and the n-th power
//! dissection `f(a,b)^n = sum_z C_{n,z}(ab) a^z f(a^{n+z} b^z, a^{-z} b^{n-z})`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::series::{QSeries, Sign};
use crate::theta::{theta_series, Monomial, ThetaSpec};

/// Keeps the terms whose exponent is `l` mod `k`, at their original exponents.
/// `l` is reduced into `[0, k)`.
pub fn extract(x: &QSeries, k: i64, l: i64) -> QSeries {
    assert!(k >= 1, "extract modulus must be positive");
    let l = l.rem_euclid(k);
    let terms = x
        .terms()
        .filter(|(e, _)| e.rem_euclid(k) == l)
        .map(|(e, c)| (e, c.clone()));
    QSeries::from_terms(terms, x.order())
}

/// Maps `q^{kn+l}` to `q^n`, dropping other residues.
pub fn compress(x: &QSeries, k: i64, l: i64) -> QSeries {
    assert!(k >= 1, "compress modulus must be positive");
    let l = l.rem_euclid(k);
    let order = (x.order() - l).div_euclid(k);
    let terms = x
        .terms()
        .filter(|(e, _)| e.rem_euclid(k) == l)
        .map(|(e, c)| ((e - l).div_euclid(k), c.clone()));
    QSeries::from_terms(terms, order)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Vanishing {
    /// Every known coefficient in the progression is zero; `checked` counts
    /// the exponents examined.
    Vanishes { checked: u64 },
    /// The smallest exponent in the progression with a nonzero coefficient.
    Fails { exponent: i64, coefficient: BigInt },
    /// The whole series is zero, so the claim says nothing.
    Vacuous,
}

/// Exponents `e ≡ l (mod k)` with `min(0, min_exp) <= e <= order`.
pub fn progression_len(x: &QSeries, k: i64, l: i64) -> u64 {
    let l = l.rem_euclid(k);
    let lo = x.min_exp().min(0);
    let hi = x.order();
    if hi < lo {
        return 0;
    }
    let first = lo + (l - lo).rem_euclid(k);
    if first > hi {
        0
    } else {
        ((hi - first) / k + 1) as u64
    }
}

pub fn is_vanishing(x: &QSeries, k: i64, l: i64) -> Vanishing {
    if x.is_zero() {
        return Vanishing::Vacuous;
    }
    let l = l.rem_euclid(k);
    match x.terms().find(|(e, _)| e.rem_euclid(k) == l) {
        Some((exponent, c)) => Vanishing::Fails {
            exponent,
            coefficient: c.clone(),
        },
        None => Vanishing::Vanishes {
            checked: progression_len(x, k, l),
        },
    }
}

/// Evaluates `f` at increasing working orders until its result is exact to
/// `order`, then truncates. Laurent factors lower the order of a product, so
/// the needed working order is found rather than predicted.
pub(crate) fn at_least<F>(order: i64, f: F) -> Result<QSeries>
where
    F: Fn(i64) -> Result<QSeries>,
{
    let mut work = order;
    for _ in 0..64 {
        let s = f(work)?;
        if s.order() >= order {
            return Ok(s.truncate(order));
        }
        work += (order - s.order()).max(1);
    }
    Err(Error::InvalidParameters(format!(
        "could not reach truncation order {order}"
    )))
}

fn theta(a: Monomial, b: Monomial, order: i64) -> Result<QSeries> {
    theta_series(&ThetaSpec::new(a, b), order)
}

/// `M(mu, 1)` and `M(mu, 2)` of the cube decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPair {
    pub m1: QSeries,
    pub m2: QSeries,
}

pub fn m_pair(mu: i64, order: i64) -> Result<MPair> {
    if mu < 1 {
        return Err(Error::InvalidParameters(format!("mu = {mu} must be positive")));
    }
    let q = Monomial::q;
    let one = Monomial::ONE;
    let m1 = &(&theta(q(mu), q(mu), order)? * &theta(q(3 * mu), q(3 * mu), order)?)
        + &(&theta(one, q(2 * mu), order - mu)? * &theta(one, q(6 * mu), order - mu)?).shift(mu);
    let m2 = &(&theta(one, q(2 * mu), order)? * &theta(q(2 * mu), q(4 * mu), order)?)
        + &(&theta(q(mu), q(mu), order)? * &theta(q(mu), q(5 * mu), order)?);
    Ok(MPair { m1, m2 })
}

/// Left side and the three right-side terms of the cube identity for
/// `f(±q^k, ±q^{mu-k})^3`; the terms sum to the left side.
pub fn cube_terms(k: i64, mu: i64, sign: Sign, order: i64) -> Result<(QSeries, [QSeries; 3])> {
    if !(0 < k && k < mu) {
        return Err(Error::InvalidParameters(format!(
            "cube identity needs 0 < k < mu, got k={k}, mu={mu}"
        )));
    }
    let m = |e: i64| Monomial::new(sign, e);
    let lhs = at_least(order, |o| Ok(theta(m(k), m(mu - k), o)?.pow(3)))?;
    let t1 = at_least(order, |o| {
        let mp = m_pair(mu, o)?;
        Ok(&theta(m(3 * k), m(3 * mu - 3 * k), o)? * &mp.m1)
    })?;
    let t2 = at_least(order, |o| {
        let mp = m_pair(mu, o)?;
        Ok((&theta(m(mu + 3 * k), m(2 * mu - 3 * k), o)? * &mp.m2)
            .shift(k)
            .scale_sign(sign))
    })?;
    let t3 = at_least(order, |o| {
        let mp = m_pair(mu, o)?;
        Ok((&theta(m(mu - 3 * k), m(2 * mu + 3 * k), o)? * &mp.m2).shift(2 * k))
    })?;
    Ok((lhs, [t1, t2, t3]))
}

/// The cube identity: plain signs for `Sign::Plus`, the alternating form
/// (negated arguments, negative middle term) for `Sign::Minus`.
pub fn cube_check(k: i64, mu: i64, sign: Sign, order: i64) -> Result<bool> {
    let (lhs, [t1, t2, t3]) = cube_terms(k, mu, sign, order)?;
    let rhs = &(&t1 + &t2) + &t3;
    Ok(lhs.agrees_with(&rhs) && rhs.order() >= order)
}

/// The three product formulas of Entry 30.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Entry30 {
    /// `f(c,d) f(a,b) = a f(b/d, (d/b) abcd) f(b/c, (c/b) abcd) + f(ad, bc) f(ac, bd)`, `ab = cd`
    R1,
    /// `f(a,b)^2 = a f(1, a^2 b^2) f(b/a, a^3 b) + f(ab, ab) f(a^2, b^2)`
    R2,
    /// `f(a,b) = a f(b/a, a^5 b^3) + f(a^3 b, a b^3)`
    R3,
}

impl Entry30 {
    pub fn arity(self) -> usize {
        match self {
            Entry30::R1 => 4,
            Entry30::R2 | Entry30::R3 => 2,
        }
    }
}

fn theta_product(prefactor: Monomial, factors: &[(Monomial, Monomial)], order: i64) -> Result<QSeries> {
    at_least(order, |o| {
        let mut acc = prefactor.to_series(o + prefactor.exp.abs());
        for &(a, b) in factors {
            acc = &acc * &theta(a, b, o)?;
        }
        Ok(acc)
    })
}

/// Both sides of one Entry 30 formula for monomial arguments `[a, b]` or
/// `[a, b, c, d]`.
pub fn entry30_sides(which: Entry30, args: &[Monomial], order: i64) -> Result<(QSeries, QSeries)> {
    if args.len() != which.arity() {
        return Err(Error::InvalidParameters(format!(
            "{which:?} takes {} arguments, got {}",
            which.arity(),
            args.len()
        )));
    }
    let one = Monomial::ONE;
    match which {
        Entry30::R1 => {
            let (a, b, c, d) = (args[0], args[1], args[2], args[3]);
            if a * b != c * d {
                return Err(Error::InvalidParameters(format!(
                    "R1 requires ab = cd, got a={a}, b={b}, c={c}, d={d}"
                )));
            }
            let abcd = a * b * c * d;
            let lhs = theta_product(one, &[(c, d), (a, b)], order)?;
            let r1 = theta_product(a, &[(b / d, d / b * abcd), (b / c, c / b * abcd)], order)?;
            let r2 = theta_product(one, &[(a * d, b * c), (a * c, b * d)], order)?;
            Ok((lhs, &r1 + &r2))
        }
        Entry30::R2 => {
            let (a, b) = (args[0], args[1]);
            let lhs = theta_product(one, &[(a, b), (a, b)], order)?;
            let r1 = theta_product(a, &[(one, (a * b).pow(2)), (b / a, a.pow(3) * b)], order)?;
            let r2 = theta_product(one, &[(a * b, a * b), (a.pow(2), b.pow(2))], order)?;
            Ok((lhs, &r1 + &r2))
        }
        Entry30::R3 => {
            let (a, b) = (args[0], args[1]);
            let lhs = theta_product(one, &[(a, b)], order)?;
            let r1 = theta_product(a, &[(b / a, a.pow(5) * b.pow(3))], order)?;
            let r2 = theta_product(one, &[(a.pow(3) * b, a * b.pow(3))], order)?;
            Ok((lhs, &r1 + &r2))
        }
    }
}

pub fn entry30_check(which: Entry30, args: &[Monomial], order: i64) -> Result<bool> {
    let (lhs, rhs) = entry30_sides(which, args, order)?;
    Ok(lhs.agrees_with(&rhs))
}

/// The coefficients `C_{n,z}` of the n-th power dissection of `f(a, b)`,
/// one series in `x = ab` for each residue `z` in `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DissectionCoeffs {
    n: u32,
    spec: ThetaSpec,
    x_order: i64,
    coeffs: Vec<QSeries>,
}

impl DissectionCoeffs {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn spec(&self) -> ThetaSpec {
        self.spec
    }

    pub fn x_order(&self) -> i64 {
        self.x_order
    }

    /// `C_{n,z}` as a series in `x`.
    pub fn coeff(&self, z: u32) -> &QSeries {
        &self.coeffs[z as usize]
    }

    /// `a^z f(a^{n+z} b^z, a^{-z} b^{n-z})` as a theta spec plus the `a^z` prefactor.
    pub fn shifted_theta(&self, z: u32) -> (Monomial, ThetaSpec) {
        shifted_theta(self.spec, self.n as i64, z as i64)
    }

    /// `C_{n,z}(ab) a^z f(a^{n+z} b^z, a^{-z} b^{n-z})` in `q`.
    pub fn term(&self, z: u32, order: i64) -> Result<QSeries> {
        let (pre, spec) = self.shifted_theta(z);
        let ab = self.spec.product();
        let c = self.coeff(z).dilate(ab.exp, ab.sign);
        let t = theta_series(&spec, order - pre.exp)?;
        let t = t.shift(pre.exp).scale_sign(pre.sign);
        Ok(&c * &t)
    }

    /// `sum_z C_{n,z}(ab) a^z f(...)`, exact to `order` when `order` does
    /// not exceed the order these coefficients were computed for.
    pub fn reconstruct(&self, order: i64) -> Result<QSeries> {
        let mut acc: Option<QSeries> = None;
        for z in 0..self.n {
            let t = self.term(z, order)?;
            acc = Some(match acc {
                None => t,
                Some(a) => &a + &t,
            });
        }
        Ok(acc.expect("n >= 1").truncate(order))
    }
}

fn shifted_theta(spec: ThetaSpec, n: i64, z: i64) -> (Monomial, ThetaSpec) {
    let (a, b) = (spec.a, spec.b);
    let big_a = a.pow(n + z) * b.pow(z);
    let big_b = a.pow(-z) * b.pow(n - z);
    (a.pow(z), ThetaSpec::new(big_a, big_b))
}

/// Computes `C_{n,z}` for `z = 0..n` so that the dissection reproduces
/// `f(a,b)^n` through `q^order`.
///
/// Writing each term of `f(a,b)` as `x^{m^2/2} (a/b)^{m/2}` with `x = ab`,
/// the terms of the n-th power are indexed by `m` in `Z^n`. Grouping them by
/// `sum(m) = nj + z` and shifting every coordinate by `-j` maps each class
/// onto the slice `sum(m) = z`, where the matching theta term is `1`. So
///
/// `C_{n,z}(x) = sum over m in Z^n with sum(m) = z of x^{(|m|^2 - z)/2}`,
///
/// computed here by a dynamic program over the coordinates, tracking the
/// running sum and the running sum of squares.
pub fn dissection_coeffs(n: u32, spec: ThetaSpec, order: i64) -> Result<DissectionCoeffs> {
    if n == 0 {
        return Err(Error::InvalidParameters("dissection power must be positive".into()));
    }
    spec.check_convergent()?;
    let d = spec.a.exp + spec.b.exp;
    let ni = n as i64;

    // x-order so that C(ab) * a^z f(A,B) is exact through q^order for every z
    let mut x_order = 0i64;
    for z in 0..ni {
        let (pre, t) = shifted_theta(spec, ni, z);
        let series = theta_series(&t, order - pre.exp)?;
        if series.is_zero() {
            continue;
        }
        let low = series.min_exp() + pre.exp;
        // need d * E + d - 1 + low >= order
        let need = (order - low - d + 1).div_euclid(d) + 1;
        x_order = x_order.max(need);
    }

    let coeffs = lattice_counts(ni, x_order)?;
    Ok(DissectionCoeffs {
        n,
        spec,
        x_order,
        coeffs,
    })
}

/// `C_{n,z}(x)` for `z in 0..n`, exact through `x^x_order`.
fn lattice_counts(n: i64, x_order: i64) -> Result<Vec<QSeries>> {
    let max_sq = 2 * x_order + (n - 1);
    let r = (max_sq as f64).sqrt().floor() as i64 + 1;
    let r = (0..=r).rev().find(|v| v * v <= max_sq).unwrap_or(0);
    let width = (2 * n * r + 1) as usize;
    let offset = n * r;
    let height = (max_sq + 1) as usize;

    // table[sum + offset][sq] = number of partial tuples
    let mut table = vec![vec![BigInt::zero(); height]; width];
    table[offset as usize][0] = BigInt::one();
    for step in 0..n {
        let remaining = n - step - 1;
        let mut next = vec![vec![BigInt::zero(); height]; width];
        for (si, row) in table.iter().enumerate() {
            let s = si as i64 - offset;
            for (sq, count) in row.iter().enumerate() {
                if count.is_zero() {
                    continue;
                }
                let sq = sq as i64;
                for m in -r..=r {
                    let nsq = sq + m * m;
                    if nsq > max_sq {
                        continue;
                    }
                    let ns = s + m;
                    // the remaining coordinates must still be able to reach some z in 0..n
                    let room = max_sq - nsq;
                    let gap = if ns < 0 {
                        -ns
                    } else if ns > n - 1 {
                        ns - (n - 1)
                    } else {
                        0
                    };
                    if gap * gap > remaining * room {
                        continue;
                    }
                    next[(ns + offset) as usize][nsq as usize] += count;
                }
            }
        }
        table = next;
    }

    let mut out = Vec::with_capacity(n as usize);
    for z in 0..n {
        let row = &table[(z + offset) as usize];
        let terms = row.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(sq, c)| {
            let sq = sq as i64;
            debug_assert_eq!((sq - z).rem_euclid(2), 0);
            ((sq - z) / 2, c.clone())
        });
        out.push(QSeries::from_terms(terms, x_order));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(min_exp: i64, cs: &[i64], order: i64) -> QSeries {
        QSeries::from_coeffs(min_exp, cs.iter().map(|&c| BigInt::from(c)).collect(), order)
    }

    #[test]
    fn extract_identity_and_partition() {
        let x = s(-2, &[1, 4, -1, 0, 7, 2, 3, -5], 5);
        assert_eq!(extract(&x, 1, 0), x);
        let mut acc = QSeries::zero(5);
        for l in 0..3 {
            acc = &acc + &extract(&x, 3, l);
        }
        assert_eq!(acc, x);
        assert_eq!(extract(&x, 3, -1), extract(&x, 3, 2));
    }

    #[test]
    fn extract_example() {
        let x = s(0, &[1, -2, 0, 2], 3);
        assert!(extract(&x, 5, 2).is_zero());
    }

    #[test]
    fn compress_maps_progression() {
        let x = s(0, &[1, 0, 5, 0, 0, 0, 0, 9], 9);
        let c = compress(&x, 5, 2);
        assert_eq!(c.order(), 1);
        assert_eq!(c.coeff(0).unwrap(), BigInt::from(5));
        assert_eq!(c.coeff(1).unwrap(), BigInt::from(9));
    }

    #[test]
    fn vanishing_outcomes() {
        let x = s(0, &[1, -2, 0, 2, 0, -2], 5);
        assert_eq!(is_vanishing(&x, 5, 2), Vanishing::Vanishes { checked: 1 });
        assert_eq!(
            is_vanishing(&x, 2, 0),
            Vanishing::Fails {
                exponent: 0,
                coefficient: BigInt::from(1),
            }
        );
        assert_eq!(is_vanishing(&QSeries::zero(9), 5, 2), Vanishing::Vacuous);
    }

    #[test]
    fn progression_counting() {
        let x = s(0, &[1], 500);
        assert_eq!(progression_len(&x, 7, 4), (500 - 4) / 7 + 1);
        let y = s(-3, &[1], 10);
        // -3, 2, 7
        assert_eq!(progression_len(&y, 5, 2), 3);
    }

    #[test]
    fn m_pair_constant_terms() {
        // brute force over the four theta factors at order 0:
        // m1(0) = [f(q,q)]_0 [f(q^3,q^3)]_0 = 1
        // m2(0) = [f(1,q^2)]_0 [f(q^2,q^4)]_0 + [f(q,q)]_0 [f(q,q^5)]_0
        let const_term = |ea: i64, eb: i64| {
            (-10i64..=10)
                .filter(|n| ea * n * (n + 1) / 2 + eb * n * (n - 1) / 2 == 0)
                .count() as i64
        };
        let m1 = const_term(1, 1) * const_term(3, 3);
        let m2 = const_term(0, 2) * const_term(2, 4) + const_term(1, 1) * const_term(1, 5);
        assert_eq!((m1, m2), (1, 3));
        let mp = m_pair(1, 0).unwrap();
        assert_eq!(mp.m1.coeff(0).unwrap(), BigInt::from(m1));
        assert_eq!(mp.m2.coeff(0).unwrap(), BigInt::from(m2));
    }

    #[test]
    fn m_pair_supported_on_multiples() {
        for mu in [1, 5, 7, 33] {
            let mp = m_pair(mu, 400).unwrap();
            for (e, _) in mp.m1.terms().chain(mp.m2.terms()) {
                assert_eq!(e % mu, 0, "mu = {mu}, exponent {e}");
            }
        }
    }

    #[test]
    fn cube_examples() {
        assert!(cube_check(1, 5, Sign::Minus, 200).unwrap());
        assert!(cube_check(4, 17, Sign::Plus, 200).unwrap());
    }

    #[test]
    fn cube_middle_sign_mutation() {
        let (lhs, [t1, t2, t3]) = cube_terms(2, 7, Sign::Minus, 150).unwrap();
        let mutated = &(&t1 - &t2) + &t3;
        assert!(!lhs.agrees_with(&mutated));
    }

    #[test]
    fn entry30_examples() {
        let q = Monomial::q;
        assert!(entry30_check(Entry30::R2, &[q(1), q(2)], 200).unwrap());
        assert!(entry30_check(Entry30::R3, &[q(1), q(2)], 200).unwrap());
        assert!(entry30_check(Entry30::R1, &[q(1), q(3), q(2), q(2)], 200).unwrap());
        assert!(matches!(
            entry30_check(Entry30::R1, &[q(1), q(3), q(2), q(3)], 50),
            Err(Error::InvalidParameters(_))
        ));
    }

    #[test]
    fn dissection_n1() {
        let spec = ThetaSpec::new(Monomial::q(1), Monomial::q(2));
        let d = dissection_coeffs(1, spec, 50).unwrap();
        assert_eq!(*d.coeff(0), QSeries::one(d.x_order()));
    }

    #[test]
    fn dissection_n2_closed_forms() {
        let spec = ThetaSpec::new(Monomial::q(1), Monomial::q(3));
        let d = dissection_coeffs(2, spec, 120).unwrap();
        let e = d.x_order();
        let fxx = theta_series(&ThetaSpec::new(Monomial::q(1), Monomial::q(1)), e).unwrap();
        let f1x2 = theta_series(&ThetaSpec::new(Monomial::ONE, Monomial::q(2)), e).unwrap();
        assert_eq!(*d.coeff(0), fxx);
        assert_eq!(*d.coeff(1), f1x2);
    }

    #[test]
    fn dissection_n3_reconstructs_cube() {
        let spec = ThetaSpec::new(Monomial::neg_q(2), Monomial::q(3));
        let d = dissection_coeffs(3, spec, 150).unwrap();
        let direct = theta_series(&spec, 150).unwrap().pow(3);
        assert_eq!(d.reconstruct(150).unwrap(), direct);
    }
}
