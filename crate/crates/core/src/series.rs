//! Truncated Laurent series in `q` with arbitrary-precision integer coefficients.
//!
//! A [`QSeries`] stores every coefficient from its lowest nonzero exponent up to
//! its truncation order densely. Coefficients above the order are unknown, and
//! every operation propagates the tightest order it can prove:
//!
//! - `add`/`sub`: the smaller of the two orders;
//! - `mul`: `min(x.order + y.min_exp, y.order + x.min_exp)`;
//! - `invert`: `x.order - 2 * x.min_exp`.
//!
//! The identically-zero series has `min_exp == 0` and no stored coefficients,
//! whatever its order. In the `mul` rule its lowest exponent counts as
//! `order + 1`.

use std::cmp::{max, min};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Sign of a signed monomial `±q^e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_i64(v: i64) -> Sign {
        if v < 0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    /// `self^n`; only the parity of `n` matters.
    pub fn pow(self, n: i64) -> Sign {
        if n.rem_euclid(2) == 0 {
            Sign::Plus
        } else {
            self
        }
    }

    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSeries {
    min_exp: i64,
    coeffs: Vec<BigInt>,
    order: i64,
}

impl QSeries {
    pub fn zero(order: i64) -> QSeries {
        QSeries {
            min_exp: 0,
            coeffs: Vec::new(),
            order,
        }
    }

    /// The constant 1, exact to `order`. Zero if `order < 0`.
    pub fn one(order: i64) -> QSeries {
        QSeries::from_terms([(0, BigInt::one())], order)
    }

    pub fn monomial(c: impl Into<BigInt>, e: i64, order: i64) -> Result<QSeries> {
        if order < e {
            return Err(Error::InvalidOrder { exponent: e, order });
        }
        Ok(QSeries::from_terms([(e, c.into())], order))
    }

    /// Builds a series from dense coefficients starting at `min_exp`.
    /// Entries past `order` are dropped; missing entries up to `order` are zero.
    pub fn from_coeffs(min_exp: i64, coeffs: Vec<BigInt>, order: i64) -> QSeries {
        let mut s = QSeries { min_exp, coeffs, order };
        s.normalize();
        s
    }

    /// Sums `(exponent, coefficient)` pairs; terms beyond `order` are dropped.
    pub fn from_terms<I>(terms: I, order: i64) -> QSeries
    where
        I: IntoIterator<Item = (i64, BigInt)>,
    {
        let terms: Vec<(i64, BigInt)> = terms.into_iter().filter(|(e, _)| *e <= order).collect();
        let Some(lo) = terms.iter().map(|(e, _)| *e).min() else {
            return QSeries::zero(order);
        };
        let mut coeffs = vec![BigInt::zero(); (order - lo + 1) as usize];
        for (e, c) in terms {
            coeffs[(e - lo) as usize] += c;
        }
        QSeries::from_coeffs(lo, coeffs, order)
    }

    fn normalize(&mut self) {
        let Some(first) = self.coeffs.iter().position(|c| !c.is_zero()) else {
            self.coeffs.clear();
            self.min_exp = 0;
            return;
        };
        let first_exp = self.min_exp + first as i64;
        if first_exp > self.order {
            self.coeffs.clear();
            self.min_exp = 0;
            return;
        }
        self.coeffs.drain(..first);
        self.min_exp = first_exp;
        self.coeffs
            .resize((self.order - self.min_exp + 1) as usize, BigInt::zero());
    }

    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    /// Dense coefficients for exponents `min_exp..=order` (empty for zero).
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lowest_coeff(&self) -> Option<&BigInt> {
        self.coeffs.first()
    }

    /// Exact coefficient of `q^e`; an error past the truncation order.
    pub fn coeff(&self, e: i64) -> Result<BigInt> {
        if e > self.order {
            return Err(Error::OutOfOrder {
                exponent: e,
                order: self.order,
            });
        }
        Ok(self.at(e).cloned().unwrap_or_default())
    }

    /// Lowest exponent that can be nonzero: `order + 1` for a zero series,
    /// whose stored `min_exp` is only a convention.
    fn low(&self) -> i64 {
        if self.is_zero() {
            self.order + 1
        } else {
            self.min_exp
        }
    }

    pub(crate) fn at(&self, e: i64) -> Option<&BigInt> {
        if e < self.min_exp {
            return None;
        }
        self.coeffs.get((e - self.min_exp) as usize)
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.min_exp + i as i64, c))
    }

    /// Lowers the truncation order; a larger `order` is ignored.
    pub fn truncate(&self, order: i64) -> QSeries {
        if order >= self.order {
            return self.clone();
        }
        let mut out = self.clone();
        out.order = order;
        let keep = max(0, order - out.min_exp + 1) as usize;
        out.coeffs.truncate(keep);
        out.normalize();
        out
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: i64) -> QSeries {
        if self.is_zero() {
            return QSeries::zero(self.order + k);
        }
        QSeries {
            min_exp: self.min_exp + k,
            coeffs: self.coeffs.clone(),
            order: self.order + k,
        }
    }

    pub fn scale(&self, c: &BigInt) -> QSeries {
        let coeffs = self.coeffs.iter().map(|x| x * c).collect();
        QSeries::from_coeffs(self.min_exp, coeffs, self.order)
    }

    pub fn scale_sign(&self, s: Sign) -> QSeries {
        match s {
            Sign::Plus => self.clone(),
            Sign::Minus => -self,
        }
    }

    /// Substitutes `q -> sign * q^k` for `k >= 1`.
    pub fn dilate(&self, k: i64, sign: Sign) -> QSeries {
        assert!(k >= 1, "dilation factor must be positive");
        let order = k * self.order + (k - 1);
        if self.is_zero() {
            return QSeries::zero(order);
        }
        let terms = self.terms().map(|(e, c)| {
            let c = if sign.pow(e).is_minus() { -c } else { c.clone() };
            (k * e, c)
        });
        QSeries::from_terms(terms, order)
    }

    /// True iff both series agree on every exponent up to the smaller order.
    pub fn agrees_with(&self, other: &QSeries) -> bool {
        let top = min(self.order, other.order);
        let lo = min(self.min_exp, other.min_exp);
        (lo..=top).all(|e| {
            let a = self.at(e);
            let b = other.at(e);
            match (a, b) {
                (Some(x), Some(y)) => x == y,
                (Some(x), None) | (None, Some(x)) => x.is_zero(),
                (None, None) => true,
            }
        })
    }

    pub fn pow(&self, n: u32) -> QSeries {
        if n == 0 {
            return QSeries::one(self.order - self.min_exp);
        }
        let mut base = self.clone();
        let mut acc: Option<QSeries> = None;
        let mut n = n;
        loop {
            if n & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => &a * &base,
                });
            }
            n >>= 1;
            if n == 0 {
                break;
            }
            base = &base * &base;
        }
        acc.expect("n >= 1")
    }

    /// Multiplicative inverse; the lowest coefficient must be a unit (±1).
    pub fn invert(&self) -> Result<QSeries> {
        let Some(lead) = self.lowest_coeff() else {
            return Err(Error::NonInvertible("zero series".into()));
        };
        if !lead.abs().is_one() {
            return Err(Error::NonInvertible(format!(
                "lowest coefficient {lead} at q^{} is not ±1",
                self.min_exp
            )));
        }
        let u = &self.coeffs;
        let n = u.len();
        let mut y: Vec<BigInt> = Vec::with_capacity(n);
        y.push(lead.clone());
        for k in 1..n {
            let mut acc = BigInt::zero();
            for i in 1..=k {
                if u[i].is_zero() || y[k - i].is_zero() {
                    continue;
                }
                acc += &u[i] * &y[k - i];
            }
            // 1/lead == lead for a unit
            y.push(if lead.is_negative() { acc } else { -acc });
        }
        Ok(QSeries::from_coeffs(-self.min_exp, y, self.order - 2 * self.min_exp))
    }

    /// In place `self *= (1 - sign * q^e)` for `e >= 1`; order is unchanged.
    pub(crate) fn mul_binomial_in_place(&mut self, sign: Sign, e: i64) {
        debug_assert!(e >= 1);
        let e = e as usize;
        let n = self.coeffs.len();
        if e >= n {
            return;
        }
        for i in (e..n).rev() {
            let (lo, hi) = self.coeffs.split_at_mut(i);
            let src = &lo[i - e];
            if src.is_zero() {
                continue;
            }
            match sign {
                Sign::Plus => hi[0] -= src,
                Sign::Minus => hi[0] += src,
            }
        }
    }

    /// In place `self /= (1 - sign * q^e)` for `e >= 1`; order is unchanged.
    pub(crate) fn div_binomial_in_place(&mut self, sign: Sign, e: i64) {
        debug_assert!(e >= 1);
        let e = e as usize;
        for i in e..self.coeffs.len() {
            let (lo, hi) = self.coeffs.split_at_mut(i);
            let src = &lo[i - e];
            if src.is_zero() {
                continue;
            }
            match sign {
                Sign::Plus => hi[0] += src,
                Sign::Minus => hi[0] -= src,
            }
        }
    }
}

impl Add for &QSeries {
    type Output = QSeries;

    fn add(self, rhs: &QSeries) -> QSeries {
        combine(self, rhs, false)
    }
}

impl Sub for &QSeries {
    type Output = QSeries;

    fn sub(self, rhs: &QSeries) -> QSeries {
        combine(self, rhs, true)
    }
}

fn combine(x: &QSeries, y: &QSeries, subtract: bool) -> QSeries {
    let order = min(x.order, y.order);
    let lo = match (x.is_zero(), y.is_zero()) {
        (true, true) => return QSeries::zero(order),
        (false, true) => x.min_exp,
        (true, false) => y.min_exp,
        (false, false) => min(x.min_exp, y.min_exp),
    };
    if lo > order {
        return QSeries::zero(order);
    }
    let mut coeffs = vec![BigInt::zero(); (order - lo + 1) as usize];
    for (e, c) in x.terms() {
        if e <= order {
            coeffs[(e - lo) as usize] += c;
        }
    }
    for (e, c) in y.terms() {
        if e <= order {
            let slot = &mut coeffs[(e - lo) as usize];
            if subtract {
                *slot -= c;
            } else {
                *slot += c;
            }
        }
    }
    QSeries::from_coeffs(lo, coeffs, order)
}

impl Neg for &QSeries {
    type Output = QSeries;

    fn neg(self) -> QSeries {
        QSeries {
            min_exp: self.min_exp,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            order: self.order,
        }
    }
}

impl Mul for &QSeries {
    type Output = QSeries;

    /// Schoolbook Cauchy product.
    fn mul(self, rhs: &QSeries) -> QSeries {
        let order = min(self.order + rhs.low(), rhs.order + self.low());
        if self.is_zero() || rhs.is_zero() {
            return QSeries::zero(order);
        }
        let lo = self.min_exp + rhs.min_exp;
        if lo > order {
            return QSeries::zero(order);
        }
        let len = (order - lo + 1) as usize;
        let mut out = vec![BigInt::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            let lim = min(rhs.coeffs.len(), len - i);
            for (j, b) in rhs.coeffs[..lim].iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] += a * b;
            }
        }
        QSeries::from_coeffs(lo, out, order)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QSeries {
            type Output = QSeries;
            fn $m(self, rhs: QSeries) -> QSeries {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&QSeries> for QSeries {
            type Output = QSeries;
            fn $m(self, rhs: &QSeries) -> QSeries {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for QSeries {
    type Output = QSeries;

    fn neg(self) -> QSeries {
        -&self
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = mag.is_one();
            match e {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !unit {
                        write!(f, "{mag}*")?;
                    }
                    if e == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{e}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(min_exp: i64, cs: &[i64], order: i64) -> QSeries {
        QSeries::from_coeffs(min_exp, cs.iter().map(|&c| BigInt::from(c)).collect(), order)
    }

    fn ints(x: &QSeries) -> Vec<i64> {
        x.coeffs().iter().map(|c| i64::try_from(c).unwrap()).collect()
    }

    #[test]
    fn zero_is_all_zero_and_additive_identity() {
        let z = QSeries::zero(10);
        for e in 0..=10 {
            assert_eq!(z.coeff(e).unwrap(), BigInt::zero());
        }
        let x = s(0, &[1, -1, 3], 8);
        assert_eq!(&z + &x, x);
        // z is O(q^11) and x starts at q^0
        let p = &z * &x;
        assert!(p.is_zero());
        assert_eq!(p.order(), 10);
    }

    #[test]
    fn monomials() {
        assert_eq!(QSeries::monomial(1, 0, 5).unwrap(), QSeries::one(5));
        let m = QSeries::monomial(-2, 3, 5).unwrap();
        assert_eq!(m.min_exp(), 3);
        assert_eq!(ints(&m), vec![-2, 0, 0]);
        let l = QSeries::monomial(1, -4, 5).unwrap();
        assert_eq!(l.min_exp(), -4);
        assert_eq!(l.coeff(-4).unwrap(), BigInt::one());
        assert!(matches!(QSeries::monomial(1, 6, 5), Err(Error::InvalidOrder { .. })));
    }

    #[test]
    fn add_sub_negate() {
        let a = s(0, &[1, -1], 6);
        let b = s(1, &[1], 4);
        let c = &a + &b;
        assert_eq!(c, QSeries::one(4));
        assert!((&a - &a).is_zero());
        assert!((&a + &(-&a)).is_zero());
    }

    #[test]
    fn product_of_binomials() {
        let a = s(0, &[1, -1], 10);
        let b = s(0, &[1, 1], 10);
        assert_eq!(ints(&(&a * &b))[..3], [1, 0, -1]);
        let inv = QSeries::monomial(1, -1, 10).unwrap();
        let q = QSeries::monomial(1, 1, 10).unwrap();
        let p = &inv * &q;
        assert_eq!(p.min_exp(), 0);
        assert_eq!(p.coeff(0).unwrap(), BigInt::one());
        assert_eq!(p.order(), 9);
    }

    #[test]
    fn euler_product_to_order_seven() {
        // brute-force expansion of the seven binomials (1 - q^k), k = 1..7
        let mut dense = [0i64; 8];
        dense[0] = 1;
        for k in 1..=7 {
            let prev = dense;
            for i in k..8 {
                dense[i] = prev[i] - prev[i - k];
            }
        }
        assert_eq!(dense, [1, -1, -1, 0, 0, 1, 0, 1]);

        let mut p = QSeries::one(7);
        for k in 1..=7 {
            let mut factor = vec![0; k + 1];
            factor[0] = 1;
            factor[k] = -1;
            p = &p * &s(0, &factor, 7);
        }
        assert_eq!(ints(&p), dense.to_vec());
    }

    #[test]
    fn invert_geometric() {
        let a = s(0, &[1, -1], 6);
        let inv = a.invert().unwrap();
        assert_eq!(ints(&inv), vec![1; 7]);
        assert_eq!(inv.invert().unwrap(), a);
    }

    #[test]
    fn invert_laurent_and_errors() {
        let a = s(-2, &[-1, 3, 1], 5);
        let inv = a.invert().unwrap();
        assert_eq!(inv.min_exp(), 2);
        assert_eq!(inv.order(), 9);
        let one = &a * &inv;
        assert_eq!(one, QSeries::one(one.order()));
        assert!(matches!(s(0, &[2, 1], 5).invert(), Err(Error::NonInvertible(_))));
        assert!(QSeries::zero(5).invert().is_err());
    }

    #[test]
    fn pow_binomial() {
        let a = s(0, &[1, -1], 6);
        assert_eq!(ints(&a.pow(3)), vec![1, -3, 3, -1, 0, 0, 0]);
        assert_eq!(a.pow(0), QSeries::one(6));
        assert_eq!(a.pow(2), &a * &a);
    }

    #[test]
    fn coeff_contract() {
        let a = s(0, &[1, -2], 4);
        assert_eq!(a.coeff(1).unwrap(), BigInt::from(-2));
        assert_eq!(s(3, &[1], 6).coeff(1).unwrap(), BigInt::zero());
        assert!(matches!(a.coeff(5), Err(Error::OutOfOrder { .. })));
    }

    #[test]
    fn binomial_in_place_matches_mul() {
        let x = s(-1, &[1, 2, -3, 4, 0, 5, 1, 1], 6);
        let mut y = x.clone();
        y.mul_binomial_in_place(Sign::Minus, 2);
        let f = s(0, &[1, 0, 1], 100);
        assert_eq!(y, &x * &f);
        y.div_binomial_in_place(Sign::Minus, 2);
        assert_eq!(y, x);
    }

    #[test]
    fn dilate_substitutes() {
        let x = s(0, &[1, 1, 1], 2);
        let d = x.dilate(3, Sign::Minus);
        assert_eq!(d.order(), 8);
        assert_eq!(ints(&d), vec![1, 0, 0, -1, 0, 0, 1, 0, 0]);
    }

    #[test]
    fn display() {
        let x = s(-1, &[1, 0, -2, 3], 2);
        assert_eq!(x.to_string(), "q^-1 - 2*q + 3*q^2 + O(q^3)");
        assert_eq!(QSeries::zero(3).to_string(), "0 + O(q^4)");
    }
}
