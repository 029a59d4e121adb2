//! A small language for products of Pochhammer blocks, theta functions,
//! family and legacy products.
//!
//! ```text
//! expr    := factor (('*' | '/') factor)*
//! factor  := atom ('^' int)?
//! atom    := '(' mono (',' mono)* ';' mono ')'       Pochhammer block
//!          | 'f' '(' mono ',' mono ')'               theta function
//!          | 'f' '(' '-' 'q' ('^' int)? ')'          f(-q^k)
//!          | ('phi' | 'psi') '(' 'q' ('^' int)? ')'
//!          | ('X' | 'Y' | 'Z' | 'W') '(' int (',' int){6} ')'
//!          | legacy name, e.g. hirschhorn-a or andrews-bressoud(1,3)
//!          | mono | int
//! mono    := ('+' | '-')? ('q' ('^' int)? | int)
//! ```

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::families::{Family, FamilySpec, LegacySeries};
use crate::identities::at_least;
use crate::series::{QSeries, Sign};
use crate::theta::{expand_blocks, theta_series, Monomial, NamedTheta, PochhammerSpec, ThetaSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    Block(PochhammerSpec),
    Theta(ThetaSpec),
    Family(FamilySpec),
    Legacy(LegacySeries),
    Mono(Monomial),
    Int(BigInt),
}

/// A product of atoms raised to integer powers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub factors: Vec<(Atom, i64)>,
}

pub fn parse_expr(src: &str) -> Result<Expr> {
    let mut p = Parser { src, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

/// Parses and expands `src` to `order`.
pub fn expand(src: &str, order: i64) -> Result<QSeries> {
    parse_expr(src)?.eval(order)
}

impl Expr {
    pub fn eval(&self, order: i64) -> Result<QSeries> {
        let mut blocks = Vec::new();
        let mut shift = 0i64;
        let mut scale = BigInt::one();
        let mut thetas = Vec::new();
        for (atom, power) in &self.factors {
            let power = *power;
            match atom {
                Atom::Block(b) => blocks.push(PochhammerSpec {
                    power: b.power * power,
                    ..b.clone()
                }),
                Atom::Family(f) => blocks.extend(f.blocks().into_iter().map(|b| PochhammerSpec {
                    power: b.power * power,
                    ..b
                })),
                Atom::Legacy(l) => blocks.extend(l.blocks()?.into_iter().map(|b| PochhammerSpec {
                    power: b.power * power,
                    ..b
                })),
                Atom::Theta(t) => {
                    t.check_convergent()?;
                    thetas.push((*t, power));
                }
                Atom::Mono(m) => {
                    shift += m.exp * power;
                    if m.sign.pow(power).is_minus() {
                        scale = -scale;
                    }
                }
                Atom::Int(c) => {
                    if power >= 0 {
                        scale *= num_traits::pow(c.clone(), power as usize);
                    } else if c.abs().is_one() {
                        if c.is_negative() && power % 2 != 0 {
                            scale = -scale;
                        }
                    } else {
                        return Err(Error::NonInvertible(format!("{c}^{power}")));
                    }
                }
            }
        }

        at_least(order, |o| {
            let work = o - shift;
            let mut acc = expand_blocks(&blocks, work)?;
            for &(t, power) in &thetas {
                let base = theta_series(&t, work)?;
                let factor = if power >= 0 {
                    base.pow(power as u32)
                } else {
                    base.invert()?.pow((-power) as u32)
                };
                acc = &acc * &factor;
            }
            Ok(acc.shift(shift).scale(&scale))
        })
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.peek(), Some('+' | '-')) {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.src[start..self.pos].parse().map_err(|_| Error::Parse {
            pos: start,
            msg: "expected an integer".into(),
        })
    }

    fn ident(&mut self) -> &str {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '-' || c == '_') {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut factors = vec![self.factor()?];
        loop {
            if self.eat('*') {
                factors.push(self.factor()?);
            } else if self.eat('/') {
                let (a, p) = self.factor()?;
                factors.push((a, -p));
            } else {
                return Ok(Expr { factors });
            }
        }
    }

    fn factor(&mut self) -> Result<(Atom, i64)> {
        let atom = self.atom()?;
        let power = if self.eat('^') { self.int()? } else { 1 };
        Ok((atom, power))
    }

    /// `q`, `q^e`, `-q^e`, `3`, `-1`; a bare integer `c` is `c * q^0`.
    fn mono_or_int(&mut self) -> Result<Atom> {
        self.skip_ws();
        let mut sign = Sign::Plus;
        if self.eat('-') {
            sign = Sign::Minus;
        } else {
            self.eat('+');
        }
        self.skip_ws();
        match self.peek() {
            Some('q') => {
                self.pos += 1;
                let exp = if self.eat('^') { self.int()? } else { 1 };
                Ok(Atom::Mono(Monomial::new(sign, exp)))
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.int()?;
                let v = if sign.is_minus() { -v } else { v };
                Ok(Atom::Int(BigInt::from(v)))
            }
            _ => Err(self.err("expected `q`, `q^e`, or an integer")),
        }
    }

    fn mono(&mut self) -> Result<Monomial> {
        let start = self.pos;
        match self.mono_or_int()? {
            Atom::Mono(m) => Ok(m),
            Atom::Int(c) if c == BigInt::one() => Ok(Monomial::ONE),
            Atom::Int(c) if c == -BigInt::one() => Ok(Monomial::ONE.negate()),
            _ => Err(Error::Parse {
                pos: start,
                msg: "expected a signed power of q".into(),
            }),
        }
    }

    fn q_power(&mut self) -> Result<i64> {
        let start = self.pos;
        let m = self.mono()?;
        if m.sign.is_minus() {
            return Err(Error::Parse {
                pos: start,
                msg: "expected a positive power of q".into(),
            });
        }
        Ok(m.exp)
    }

    fn atom(&mut self) -> Result<Atom> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let mut args = vec![self.mono()?];
                while self.eat(',') {
                    args.push(self.mono()?);
                }
                self.expect(';')?;
                let m = self.q_power()?;
                if m < 1 {
                    return Err(self.err("Pochhammer base must be q^m with m >= 1"));
                }
                self.expect(')')?;
                Ok(Atom::Block(PochhammerSpec::new(args, m, 1)))
            }
            Some(c) if c.is_ascii_alphabetic() && c != 'q' => {
                let name = self.ident().to_string();
                self.named(&name, start)
            }
            Some('q' | '+' | '-') => self.mono_or_int(),
            Some(c) if c.is_ascii_digit() => self.mono_or_int(),
            Some(c) => Err(self.err(format!("unexpected `{c}`"))),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn named(&mut self, name: &str, start: usize) -> Result<Atom> {
        match name {
            "f" => {
                self.expect('(')?;
                let a = self.mono()?;
                if self.eat(')') {
                    if !a.sign.is_minus() || a.exp < 1 {
                        return Err(Error::Parse {
                            pos: start,
                            msg: "one-argument f takes -q^k with k >= 1".into(),
                        });
                    }
                    return Ok(Atom::Theta(NamedTheta::FMinus.spec(a.exp)));
                }
                self.expect(',')?;
                let b = self.mono()?;
                self.expect(')')?;
                Ok(Atom::Theta(ThetaSpec::new(a, b)))
            }
            "phi" | "psi" => {
                self.expect('(')?;
                let k = self.q_power()?;
                self.expect(')')?;
                if k < 1 {
                    return Err(self.err("base exponent must be positive"));
                }
                let which = if name == "phi" {
                    NamedTheta::Phi
                } else {
                    NamedTheta::Psi
                };
                Ok(Atom::Theta(which.spec(k)))
            }
            _ if name.len() == 1 && Family::from_letter(name.chars().next().unwrap()).is_some() => {
                let family = Family::from_letter(name.chars().next().unwrap()).unwrap();
                self.expect('(')?;
                let mut v = vec![self.int()?];
                while self.eat(',') {
                    v.push(self.int()?);
                }
                self.expect(')')?;
                if v.len() != 7 {
                    return Err(Error::Parse {
                        pos: start,
                        msg: format!("{name}(a,b,s,k,ell,u,v) takes 7 integers, got {}", v.len()),
                    });
                }
                if v[5] < 0 || v[6] < 0 {
                    return Err(Error::Parse {
                        pos: start,
                        msg: "powers u, v must be non-negative".into(),
                    });
                }
                Ok(Atom::Family(FamilySpec {
                    family,
                    a: v[0],
                    b: v[1],
                    s: v[2],
                    k: v[3],
                    ell: v[4],
                    u: v[5] as u32,
                    v: v[6] as u32,
                }))
            }
            _ => {
                let mut full = name.to_string();
                if self.peek() == Some('(') {
                    let open = self.pos;
                    match self.src[open..].find(')') {
                        Some(close) => {
                            full.push_str(&self.src[open..open + close + 1]);
                            self.pos = open + close + 1;
                        }
                        None => return Err(self.err("unclosed `(`")),
                    }
                }
                full.parse::<LegacySeries>()
                    .map(Atom::Legacy)
                    .map_err(|_| Error::Parse {
                        pos: start,
                        msg: format!("unknown name `{full}`"),
                    })
            }
        }
    }
}
