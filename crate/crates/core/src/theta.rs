//! Ramanujan's theta function `f(a, b)` and q-Pochhammer products for
//! signed-monomial arguments.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::series::{QSeries, Sign};

/// A signed monomial `±q^exp`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub sign: Sign,
    pub exp: i64,
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        sign: Sign::Plus,
        exp: 0,
    };

    pub fn new(sign: Sign, exp: i64) -> Monomial {
        Monomial { sign, exp }
    }

    /// `q^exp`
    pub fn q(exp: i64) -> Monomial {
        Monomial::new(Sign::Plus, exp)
    }

    /// `-q^exp`
    pub fn neg_q(exp: i64) -> Monomial {
        Monomial::new(Sign::Minus, exp)
    }

    pub fn pow(self, n: i64) -> Monomial {
        Monomial::new(self.sign.pow(n), self.exp * n)
    }

    pub fn recip(self) -> Monomial {
        Monomial::new(self.sign, -self.exp)
    }

    pub fn negate(self) -> Monomial {
        Monomial::new(-self.sign, self.exp)
    }

    /// The monomial as a series exact to `order` (zero if `exp > order`).
    pub fn to_series(self, order: i64) -> QSeries {
        QSeries::from_terms([(self.exp, BigInt::from(self.sign.value()))], order)
    }
}

impl std::ops::Mul for Monomial {
    type Output = Monomial;

    fn mul(self, rhs: Monomial) -> Monomial {
        Monomial::new(self.sign * rhs.sign, self.exp + rhs.exp)
    }
}

impl std::ops::Div for Monomial {
    type Output = Monomial;

    fn div(self, rhs: Monomial) -> Monomial {
        // signs are their own inverses
        Monomial::new(self.sign * rhs.sign, self.exp - rhs.exp)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign.is_minus() { "-" } else { "" };
        match self.exp {
            0 => write!(f, "{s}1"),
            1 => write!(f, "{s}q"),
            e => write!(f, "{s}q^{e}"),
        }
    }
}

/// `f(a, b)` with `a`, `b` signed monomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ThetaSpec {
    pub a: Monomial,
    pub b: Monomial,
}

impl ThetaSpec {
    pub fn new(a: Monomial, b: Monomial) -> ThetaSpec {
        ThetaSpec { a, b }
    }

    pub fn from_parts(sign_a: Sign, ea: i64, sign_b: Sign, eb: i64) -> ThetaSpec {
        ThetaSpec::new(Monomial::new(sign_a, ea), Monomial::new(sign_b, eb))
    }

    pub fn swapped(self) -> ThetaSpec {
        ThetaSpec::new(self.b, self.a)
    }

    /// `ab`, the base of the product side of the triple product identity.
    pub fn product(self) -> Monomial {
        self.a * self.b
    }

    pub fn check_convergent(self) -> Result<()> {
        if self.a.exp + self.b.exp < 1 {
            return Err(Error::Divergent {
                ea: self.a.exp,
                eb: self.b.exp,
            });
        }
        Ok(())
    }
}

impl fmt::Display for ThetaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f({}, {})", self.a, self.b)
    }
}

/// The bilateral sum `sum_n a^{n(n+1)/2} b^{n(n-1)/2}` truncated at `order`.
///
/// The exponent of the `n`-th term is a quadratic opening upward, so the
/// walk starts at its vertex and stops on each side at the first term past
/// `order`.
pub fn theta_series(spec: &ThetaSpec, order: i64) -> Result<QSeries> {
    spec.check_convergent()?;
    let (ea, eb) = (spec.a.exp, spec.b.exp);
    let term = |n: i64| {
        let tri_plus = n * (n + 1) / 2;
        let tri_minus = n * (n - 1) / 2;
        let e = ea * tri_plus + eb * tri_minus;
        let sign = spec.a.sign.pow(tri_plus) * spec.b.sign.pow(tri_minus);
        (e, BigInt::from(sign.value()))
    };
    // vertex of ((ea+eb) n^2 + (ea-eb) n) / 2
    let start = (eb - ea).div_euclid(2 * (ea + eb));
    let mut terms = Vec::new();
    let mut n = start;
    loop {
        let (e, c) = term(n);
        if e <= order {
            terms.push((e, c));
        } else if n > start {
            break;
        }
        n += 1;
    }
    let mut n = start - 1;
    loop {
        let (e, c) = term(n);
        if e > order {
            break;
        }
        terms.push((e, c));
        n -= 1;
    }
    Ok(QSeries::from_terms(terms, order))
}

/// `(a_1, ..., a_m; q^modulus)_inf ^ power`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PochhammerSpec {
    pub args: Vec<Monomial>,
    pub modulus: i64,
    pub power: i64,
}

impl PochhammerSpec {
    pub fn new(args: Vec<Monomial>, modulus: i64, power: i64) -> PochhammerSpec {
        PochhammerSpec { args, modulus, power }
    }
}

impl fmt::Display for PochhammerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ";{})", Monomial::q(self.modulus))?;
        if self.power != 1 {
            write!(f, "^{}", self.power)?;
        }
        Ok(())
    }
}

pub fn pochhammer_series(spec: &PochhammerSpec, order: i64) -> Result<QSeries> {
    expand_blocks(std::slice::from_ref(spec), order)
}

/// Expands a product of Pochhammer blocks one binomial factor at a time.
///
/// A factor `(1 - c q^E)` with `E < 0` is rewritten as `-c q^E (1 - c q^{-E})`,
/// so the work happens on a power series exact to `order - L`, where `L` is
/// the total exponent pulled out this way; the result is shifted back by `L`.
pub(crate) fn expand_blocks(blocks: &[PochhammerSpec], order: i64) -> Result<QSeries> {
    let mut shift = 0i64;
    let mut sign = Sign::Plus;
    let mut twos = 0u32;
    let mut zero_factor = false;
    // (sign, exponent >= 1, power)
    let mut factors: Vec<(Sign, i64, i64)> = Vec::new();
    let mut positive_args: Vec<(Monomial, i64, i64)> = Vec::new();

    for block in blocks {
        if block.modulus < 1 {
            return Err(Error::InvalidParameters(format!(
                "Pochhammer base q^{} must have a positive exponent",
                block.modulus
            )));
        }
        if block.power == 0 {
            continue;
        }
        for &arg in &block.args {
            let mut e = arg.exp;
            while e <= 0 {
                if e == 0 {
                    match (arg.sign, block.power > 0) {
                        (Sign::Plus, true) => zero_factor = true,
                        (Sign::Plus, false) => {
                            return Err(Error::NonInvertible(format!(
                                "factor (1 - 1) of {block} under negative power"
                            )))
                        }
                        (Sign::Minus, true) => twos += block.power as u32,
                        (Sign::Minus, false) => {
                            return Err(Error::NonInvertible(format!(
                                "factor (1 + 1) = 2 of {block} under negative power"
                            )))
                        }
                    }
                } else {
                    shift += e * block.power;
                    sign = sign * (-arg.sign).pow(block.power);
                    factors.push((arg.sign, -e, block.power));
                }
                e += block.modulus;
            }
            positive_args.push((Monomial::new(arg.sign, e), block.modulus, block.power));
        }
    }

    if zero_factor {
        return Ok(QSeries::zero(order));
    }
    let rel_order = order - shift;
    if rel_order < 0 {
        return Ok(QSeries::zero(order));
    }
    for (arg, modulus, power) in positive_args {
        let mut e = arg.exp;
        while e <= rel_order {
            factors.push((arg.sign, e, power));
            e += modulus;
        }
    }

    let mut acc = QSeries::one(rel_order);
    for (c, e, power) in factors {
        if e > rel_order {
            continue;
        }
        for _ in 0..power.unsigned_abs() {
            if power > 0 {
                acc.mul_binomial_in_place(c, e);
            } else {
                acc.div_binomial_in_place(c, e);
            }
        }
    }
    let mut scale = BigInt::one() << twos;
    if sign.is_minus() {
        scale = -scale;
    }
    Ok(acc.scale(&scale).shift(shift))
}

/// Checks `f(a, b) = (-a, -b, ab; ab)_inf` coefficientwise to `order`.
pub fn jtpi_check(spec: &ThetaSpec, order: i64) -> Result<bool> {
    let theta = theta_series(spec, order)?;
    let rhs = pochhammer_series(&jtpi_product(spec), order)?;
    Ok(theta.agrees_with(&rhs) && theta.order() == rhs.order())
}

/// The product side `(-a, -b, ab; ab)_inf` of the triple product identity.
///
/// When `ab = -q^d` the base is not a plain power of `q`, so each argument
/// `x` is split as `(x; -q^d) = (x, x*ab; q^{2d})`.
pub fn jtpi_product(spec: &ThetaSpec) -> PochhammerSpec {
    let ab = spec.product();
    let args = [spec.a.negate(), spec.b.negate(), ab];
    if ab.sign.is_minus() {
        let split = args.iter().flat_map(|&x| [x, x * ab]).collect();
        PochhammerSpec::new(split, 2 * ab.exp, 1)
    } else {
        PochhammerSpec::new(args.to_vec(), ab.exp, 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NamedTheta {
    /// `phi(q) = f(q, q)`
    Phi,
    /// `psi(q) = f(q, q^3)`
    Psi,
    /// `f(-q) = f(-q, -q^2) = (q; q)_inf`
    FMinus,
}

impl NamedTheta {
    pub fn spec(self, base: i64) -> ThetaSpec {
        match self {
            NamedTheta::Phi => ThetaSpec::new(Monomial::q(base), Monomial::q(base)),
            NamedTheta::Psi => ThetaSpec::new(Monomial::q(base), Monomial::q(3 * base)),
            NamedTheta::FMinus => ThetaSpec::new(Monomial::neg_q(base), Monomial::neg_q(2 * base)),
        }
    }
}

pub fn named_theta(name: NamedTheta, base_exponent: i64, order: i64) -> Result<QSeries> {
    if base_exponent < 1 {
        return Err(Error::InvalidParameters(format!(
            "base exponent {base_exponent} must be positive"
        )));
    }
    theta_series(&name.spec(base_exponent), order)
}
