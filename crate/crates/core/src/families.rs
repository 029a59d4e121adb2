//! The four two-block product families X, Y, Z, W and the historical
//! products they generalize.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{QSeries, Sign};
use crate::theta::{expand_blocks, pochhammer_series, Monomial, PochhammerSpec};

/// Sign pattern of the two Pochhammer blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    X,
    Y,
    Z,
    W,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::X, Family::Y, Family::Z, Family::W];

    /// Argument signs of (first block, second block); `Minus` means the
    /// arguments are `-q^a, -q^{M-a}`.
    pub fn signs(self) -> (Sign, Sign) {
        match self {
            Family::X => (Sign::Plus, Sign::Plus),
            Family::Y => (Sign::Plus, Sign::Minus),
            Family::Z => (Sign::Minus, Sign::Plus),
            Family::W => (Sign::Minus, Sign::Minus),
        }
    }

    pub fn from_signs(first: Sign, second: Sign) -> Family {
        match (first, second) {
            (Sign::Plus, Sign::Plus) => Family::X,
            (Sign::Plus, Sign::Minus) => Family::Y,
            (Sign::Minus, Sign::Plus) => Family::Z,
            (Sign::Minus, Sign::Minus) => Family::W,
        }
    }

    /// Flips the argument sign of one block (`0` = first, `1` = second).
    pub fn flip_block(self, block: usize) -> Family {
        let (a, b) = self.signs();
        match block {
            0 => Family::from_signs(-a, b),
            _ => Family::from_signs(a, -b),
        }
    }

    pub fn letter(self) -> char {
        match self {
            Family::X => 'X',
            Family::Y => 'Y',
            Family::Z => 'Z',
            Family::W => 'W',
        }
    }

    pub fn from_letter(c: char) -> Option<Family> {
        match c {
            'X' => Some(Family::X),
            'Y' => Some(Family::Y),
            'Z' => Some(Family::Z),
            'W' => Some(Family::W),
            _ => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// `(±q^a, ±q^{sℓ-a}; q^{sℓ})^u (±q^b, ±q^{kℓ-b}; q^{kℓ})^v`
///
/// `a` and `b` are the already-instantiated exponents (e.g. `a_mult * t`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FamilySpec {
    pub family: Family,
    pub a: i64,
    pub b: i64,
    pub s: i64,
    pub k: i64,
    pub ell: i64,
    pub u: u32,
    pub v: u32,
}

impl FamilySpec {
    pub fn first_modulus(&self) -> i64 {
        self.s * self.ell
    }

    pub fn second_modulus(&self) -> i64 {
        self.k * self.ell
    }

    fn validate(&self) -> Result<()> {
        if self.a < 1 || self.b < 1 || self.s < 1 || self.k < 1 || self.ell < 1 {
            return Err(Error::InvalidParameters(format!(
                "{self}: a, b, s, k, ell must be positive"
            )));
        }
        Ok(())
    }

    /// The two blocks as Pochhammer specs with their powers.
    pub fn blocks(&self) -> [PochhammerSpec; 2] {
        let (sa, sb) = self.family.signs();
        let m1 = self.first_modulus();
        let m2 = self.second_modulus();
        [
            PochhammerSpec::new(
                vec![Monomial::new(sa, self.a), Monomial::new(sa, m1 - self.a)],
                m1,
                self.u as i64,
            ),
            PochhammerSpec::new(
                vec![Monomial::new(sb, self.b), Monomial::new(sb, m2 - self.b)],
                m2,
                self.v as i64,
            ),
        ]
    }

    /// Sum of all negative factor exponents; the lowest exponent of a
    /// non-degenerate expansion.
    pub fn analytic_min_exp(&self) -> i64 {
        self.blocks()
            .iter()
            .map(|b| {
                b.args
                    .iter()
                    .map(|arg| {
                        let mut e = arg.exp;
                        let mut total = 0;
                        while e < 0 {
                            total += e;
                            e += b.modulus;
                        }
                        total * b.power
                    })
                    .sum::<i64>()
            })
            .sum()
    }

    /// True if some factor is `(1 - 1)`, making the whole product zero.
    pub fn is_degenerate(&self) -> bool {
        let (sa, sb) = self.family.signs();
        (sa == Sign::Plus && self.u > 0 && self.a % self.first_modulus() == 0)
            || (sb == Sign::Plus && self.v > 0 && self.b % self.second_modulus() == 0)
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}({},{},{},{},{},{},{})",
            self.family, self.a, self.b, self.s, self.k, self.ell, self.u, self.v
        )
    }
}

/// Expands a family product to `order`, one binomial factor at a time.
pub fn family_series(spec: &FamilySpec, order: i64) -> Result<QSeries> {
    spec.validate()?;
    expand_blocks(&spec.blocks(), order)
}

/// The same product via `pow` of each block and one `mul`; a second code
/// path used to cross-check [`family_series`].
pub fn family_series_blockwise(spec: &FamilySpec, order: i64) -> Result<QSeries> {
    spec.validate()?;
    let slack = -spec.analytic_min_exp();
    let [b1, b2] = spec.blocks();
    let p1 = pochhammer_series(&PochhammerSpec { power: 1, ..b1 }, order + slack)?;
    let p2 = pochhammer_series(&PochhammerSpec { power: 1, ..b2 }, order + slack)?;
    Ok((&p1.pow(spec.u) * &p2.pow(spec.v)).truncate(order))
}

/// Products from the historical literature that the families generalize.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LegacySeries {
    RamanujanU,
    RamanujanV,
    Alpha,
    Beta,
    Gamma,
    Delta,
    AndrewsBressoud { r: i64, k: i64 },
    HirschhornA,
    HirschhornB,
    TangA1,
    TangB1,
    TangA2,
    TangB2,
    McLaughlinS { t: i64 },
}

impl LegacySeries {
    /// Every fixed-parameter product plus the parametrized ones at the
    /// parameters used by the default catalog.
    pub fn registry() -> Vec<LegacySeries> {
        use LegacySeries::*;
        let mut out = vec![
            RamanujanU,
            RamanujanV,
            Alpha,
            Beta,
            Gamma,
            Delta,
            HirschhornA,
            HirschhornB,
            TangA1,
            TangB1,
            TangA2,
            TangB2,
            McLaughlinS { t: 1 },
            McLaughlinS { t: 2 },
        ];
        out.extend(andrews_bressoud_pairs(10).map(|(r, k)| AndrewsBressoud { r, k }));
        out
    }

    fn validate(&self) -> Result<()> {
        match *self {
            LegacySeries::AndrewsBressoud { r, k } => {
                if !(1 <= r && r < k) || r.gcd(&k) != 1 || (r + k) % 2 == 0 {
                    return Err(Error::InvalidParameters(format!(
                        "Andrews-Bressoud needs 1 <= r < k, gcd(r, k) = 1, opposite parity; got r={r}, k={k}"
                    )));
                }
            }
            LegacySeries::McLaughlinS { t } if t != 1 && t != 2 => {
                return Err(Error::InvalidParameters(format!(
                    "McLaughlin s is defined for t in {{1, 2}}, got {t}"
                )));
            }
            _ => {}
        }
        Ok(())
    }

    pub fn blocks(&self) -> Result<Vec<PochhammerSpec>> {
        self.validate()?;
        use LegacySeries::*;
        let q = Monomial::q;
        let nq = Monomial::neg_q;
        let block = |args: Vec<Monomial>, m: i64, p: i64| PochhammerSpec::new(args, m, p);
        Ok(match *self {
            RamanujanU => vec![block(vec![q(4), q(1)], 5, 1), block(vec![q(2), q(3)], 5, -1)],
            // printed as the reciprocal of (q^3, q^2; q^5) / (q, q^4; q^5)
            RamanujanV => vec![block(vec![q(3), q(2)], 5, -1), block(vec![q(1), q(4)], 5, 1)],
            Alpha => vec![block(vec![q(3), q(5)], 8, 1), block(vec![q(1), q(7)], 8, -1)],
            Beta => vec![block(vec![q(1), q(7)], 8, 1), block(vec![q(3), q(5)], 8, -1)],
            Gamma => vec![block(vec![q(5), q(7)], 12, 1), block(vec![q(1), q(11)], 12, -1)],
            Delta => vec![block(vec![q(1), q(11)], 12, 1), block(vec![q(5), q(7)], 12, -1)],
            AndrewsBressoud { r, k } => vec![
                block(vec![q(r), q(2 * k - r)], 2 * k, 1),
                block(vec![q(k - r), q(k + r)], 2 * k, -1),
            ],
            HirschhornA => vec![block(vec![nq(1), nq(4)], 5, 1), block(vec![q(1), q(9)], 10, 3)],
            HirschhornB => vec![block(vec![nq(2), nq(3)], 5, 1), block(vec![q(3), q(7)], 10, 3)],
            TangA1 => vec![block(vec![nq(1), nq(4)], 5, 3), block(vec![q(2), q(8)], 10, 1)],
            TangB1 => vec![block(vec![nq(2), nq(3)], 5, 3), block(vec![q(4), q(6)], 10, 1)],
            TangA2 => vec![block(vec![nq(1), nq(4)], 5, 3), block(vec![q(3), q(7)], 10, 1)],
            TangB2 => vec![block(vec![nq(2), nq(3)], 5, 3), block(vec![q(1), q(9)], 10, 1)],
            McLaughlinS { t } => vec![
                block(vec![q(2 * t), q(5 - 2 * t)], 5, 1),
                block(vec![q(5 - 2 * t), q(5 + 2 * t)], 10, 3),
            ],
        })
    }
}

/// `(r, k)` with `1 <= r < k <= max_k`, coprime, of opposite parity.
pub fn andrews_bressoud_pairs(max_k: i64) -> impl Iterator<Item = (i64, i64)> {
    (2..=max_k).flat_map(|k| {
        (1..k)
            .filter(move |&r| r.gcd(&k) == 1 && (r + k) % 2 == 1)
            .map(move |r| (r, k))
    })
}

impl fmt::Display for LegacySeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use LegacySeries::*;
        match self {
            RamanujanU => write!(f, "ramanujan-u"),
            RamanujanV => write!(f, "ramanujan-v"),
            Alpha => write!(f, "rs-alpha"),
            Beta => write!(f, "rs-beta"),
            Gamma => write!(f, "rs-gamma"),
            Delta => write!(f, "rs-delta"),
            AndrewsBressoud { r, k } => write!(f, "andrews-bressoud({r},{k})"),
            HirschhornA => write!(f, "hirschhorn-a"),
            HirschhornB => write!(f, "hirschhorn-b"),
            TangA1 => write!(f, "tang-a1"),
            TangB1 => write!(f, "tang-b1"),
            TangA2 => write!(f, "tang-a2"),
            TangB2 => write!(f, "tang-b2"),
            McLaughlinS { t } => write!(f, "mclaughlin-s({t})"),
        }
    }
}

impl FromStr for LegacySeries {
    type Err = Error;

    /// Accepts the names printed by `Display`, e.g. `hirschhorn-a` or
    /// `andrews-bressoud(1,4)`.
    fn from_str(s: &str) -> Result<LegacySeries> {
        use LegacySeries::*;
        let s = s.trim();
        let (name, params) = match s.find('(') {
            Some(i) if s.ends_with(')') => {
                let inner = &s[i + 1..s.len() - 1];
                let params = inner
                    .split(',')
                    .map(|p| p.trim().parse::<i64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| Error::UnknownSeries(s.to_string()))?;
                (&s[..i], params)
            }
            _ => (s, Vec::new()),
        };
        let series = match (name, params.as_slice()) {
            ("ramanujan-u", []) => RamanujanU,
            ("ramanujan-v", []) => RamanujanV,
            ("rs-alpha", []) => Alpha,
            ("rs-beta", []) => Beta,
            ("rs-gamma", []) => Gamma,
            ("rs-delta", []) => Delta,
            ("andrews-bressoud", [r, k]) => AndrewsBressoud { r: *r, k: *k },
            ("hirschhorn-a", []) => HirschhornA,
            ("hirschhorn-b", []) => HirschhornB,
            ("tang-a1", []) => TangA1,
            ("tang-b1", []) => TangB1,
            ("tang-a2", []) => TangA2,
            ("tang-b2", []) => TangB2,
            ("mclaughlin-s", [t]) => McLaughlinS { t: *t },
            _ => return Err(Error::UnknownSeries(s.to_string())),
        };
        series.validate()?;
        Ok(series)
    }
}

pub fn legacy_series(which: &LegacySeries, order: i64) -> Result<QSeries> {
    expand_blocks(&which.blocks()?, order)
}

pub fn legacy_series_by_name(name: &str, order: i64) -> Result<QSeries> {
    legacy_series(&name.parse()?, order)
}
