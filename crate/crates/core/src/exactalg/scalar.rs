//! The coefficient field: rationals, or rational functions in `t` over the rationals.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::tpoly::TPoly;
use crate::error::{Error, Result};

/// An element of Q or Q(t).
///
/// The representation is canonical: a value that does not depend on `t` is
/// always `Rat`, and a `Func` has coprime numerator and denominator with a
/// monic denominator. Structural equality is therefore field equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Func(RatFunc),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: TPoly,
    den: TPoly,
}

impl RatFunc {
    pub fn num(&self) -> &TPoly {
        &self.num
    }

    pub fn den(&self) -> &TPoly {
        &self.den
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rat(BigRational::one())
    }

    /// The indeterminate `t`.
    pub fn t() -> Self {
        Scalar::Func(RatFunc { num: TPoly::t(), den: TPoly::one() })
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Rat(BigRational::from_integer(n.into()))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Scalar::Rat(BigRational::from_integer(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Scalar::Rat(BigRational::new(n.into(), d.into()))
    }

    pub fn from_tpoly(p: TPoly) -> Self {
        if p.is_constant() {
            Scalar::Rat(p.constant_term())
        } else {
            Scalar::Func(RatFunc { num: p, den: TPoly::one() })
        }
    }

    /// Builds `num / den`, reducing to canonical form. `None` if `den` is zero.
    pub fn from_fraction(num: TPoly, den: TPoly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(Scalar::zero());
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_constant() {
            (num, den)
        } else {
            (num.divrem(&g).0, den.divrem(&g).0)
        };
        let lc = den.leading().unwrap().clone();
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Some(if den.is_constant() {
            Scalar::from_tpoly(num)
        } else {
            Scalar::Func(RatFunc { num, den })
        })
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_one())
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Func(_) => None,
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        match self {
            Scalar::Rat(r) if r.is_integer() => Some(r.to_integer()),
            _ => None,
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        self.as_integer().and_then(|n| n.to_i64())
    }

    /// The value as a polynomial in `t`, if its denominator is 1.
    pub fn as_tpoly(&self) -> Option<TPoly> {
        match self {
            Scalar::Rat(r) => Some(TPoly::constant(r.clone())),
            Scalar::Func(f) if f.den.is_constant() => Some(f.num.clone()),
            Scalar::Func(_) => None,
        }
    }

    pub fn numerator(&self) -> TPoly {
        match self {
            Scalar::Rat(r) => TPoly::constant(r.clone()),
            Scalar::Func(f) => f.num.clone(),
        }
    }

    pub fn denominator(&self) -> TPoly {
        match self {
            Scalar::Rat(_) => TPoly::one(),
            Scalar::Func(f) => f.den.clone(),
        }
    }

    /// True when the value does not involve `t`.
    pub fn is_rational(&self) -> bool {
        matches!(self, Scalar::Rat(_))
    }

    pub fn inv(&self) -> Option<Self> {
        match self {
            Scalar::Rat(r) if r.is_zero() => None,
            Scalar::Rat(r) => Some(Scalar::Rat(r.recip())),
            Scalar::Func(f) => Scalar::from_fraction(f.den.clone(), f.num.clone()),
        }
    }

    /// Division that reports a zero divisor instead of panicking.
    pub fn checked_div(&self, rhs: &Scalar) -> Result<Self> {
        let inv = rhs.inv().ok_or(Error::DivisionByZero)?;
        Ok(self * &inv)
    }

    /// Integer power; negative exponents invert. Panics on `0^negative`.
    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inv().expect("zero to a negative power") } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut result = Scalar::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        result
    }

    /// Specializes `t` to a rational value. `None` if a denominator vanishes there.
    pub fn eval_t(&self, at: &BigRational) -> Option<Scalar> {
        match self {
            Scalar::Rat(_) => Some(self.clone()),
            Scalar::Func(f) => {
                let d = f.den.eval(at);
                if d.is_zero() {
                    None
                } else {
                    Some(Scalar::Rat(f.num.eval(at) / d))
                }
            }
        }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::Rat(r)
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Rat(a), Scalar::Func(f)) | (Scalar::Func(f), Scalar::Rat(a)) => {
                // den is coprime to num + a*den already
                let num = &f.num + &f.den.scale(a);
                Scalar::from_fraction_reduced(num, f.den.clone())
            }
            (Scalar::Func(f), Scalar::Func(g)) => {
                if f.den == g.den {
                    Scalar::from_fraction(&f.num + &g.num, f.den.clone()).unwrap()
                } else {
                    let num = &(&f.num * &g.den) + &(&g.num * &f.den);
                    Scalar::from_fraction(num, &f.den * &g.den).unwrap()
                }
            }
        }
    }
}

impl Scalar {
    fn from_fraction_reduced(num: TPoly, den: TPoly) -> Scalar {
        if num.is_zero() {
            Scalar::zero()
        } else if den.is_constant() {
            Scalar::from_tpoly(num)
        } else {
            Scalar::Func(RatFunc { num, den })
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Func(f) => Scalar::Func(RatFunc { num: -&f.num, den: f.den.clone() }),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a - b),
            _ => self + &(-rhs),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Rat(a), Scalar::Func(f)) | (Scalar::Func(f), Scalar::Rat(a)) => {
                if a.is_zero() {
                    Scalar::zero()
                } else {
                    Scalar::Func(RatFunc { num: f.num.scale(a), den: f.den.clone() })
                }
            }
            (Scalar::Func(f), Scalar::Func(g)) => {
                if f.den.is_constant() && g.den.is_constant() {
                    Scalar::from_tpoly(&f.num * &g.num)
                } else {
                    Scalar::from_fraction(&f.num * &g.num, &f.den * &g.den).unwrap()
                }
            }
        }
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self.checked_div(rhs).expect("scalar division by zero")
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

impl std::iter::Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::one(), |a, b| a * b)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{r}"),
            Scalar::Func(rf) if rf.den.is_constant() => write!(f, "{}", rf.num),
            Scalar::Func(rf) => {
                if rf.num.num_terms() > 1 {
                    write!(f, "({})", rf.num)?;
                } else {
                    write!(f, "{}", rf.num)?;
                }
                if rf.den.num_terms() > 1 {
                    write!(f, "/({})", rf.den)
                } else {
                    write!(f, "/{}", rf.den)
                }
            }
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Parses integers (`-12`), rationals (`3/4`), polynomials in `t`
    /// (`t^2-2*t`) and quotients of those (`(1+t)/(1-t)`).
    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { src: s, bytes: s.as_bytes(), pos: 0 };
        let value = p.expr()?;
        p.skip_ws();
        if p.pos != p.bytes.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(value)
    }
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, reason: &str) -> Error {
        Error::Parse { input: self.src.to_string(), reason: format!("{reason} at offset {}", self.pos) }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Scalar> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { acc + rhs } else { acc - rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Scalar> {
        let mut acc = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if c == b'*' {
                acc * rhs
            } else {
                acc.checked_div(&rhs).map_err(|_| self.error("division by zero"))?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Scalar> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Scalar> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let neg = if self.peek() == Some(b'-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let digits = self.digits()?;
            let e: i64 = digits.parse().map_err(|_| self.error("exponent too large"))?;
            if neg && base.is_zero() {
                return Err(self.error("zero to a negative power"));
            }
            return Ok(base.pow(if neg { -e } else { e }));
        }
        Ok(base)
    }

    fn digits(&mut self) -> Result<&str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        Ok(&self.src[start..self.pos])
    }

    fn atom(&mut self) -> Result<Scalar> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b't') => {
                self.pos += 1;
                Ok(Scalar::t())
            }
            Some(c) if c.is_ascii_digit() => {
                let n: BigInt = self.digits()?.parse().map_err(|_| self.error("bad integer"))?;
                Ok(Scalar::from_bigint(n))
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(i64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Int(n) => Ok(Scalar::from_int(n)),
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Sign of a rational scalar, `None` for values involving `t`.
pub fn rational_sign(s: &Scalar) -> Option<i8> {
    s.as_rational().map(|r| {
        if r.is_zero() {
            0
        } else if r.is_positive() {
            1
        } else {
            -1
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> Scalar {
        text.parse().unwrap()
    }

    #[test]
    fn parses_grammar_forms() {
        assert_eq!(s("-12"), Scalar::from_int(-12));
        assert_eq!(s("3/4"), Scalar::ratio(3, 4));
        assert_eq!(s("6/8"), Scalar::ratio(3, 4));
        assert_eq!(s("1+t"), &Scalar::one() + &Scalar::t());
        assert_eq!(s("t^2-2*t").to_string(), "-2*t+t^2");
        let q = s("(1+t)/(1-t)");
        assert_eq!(q.to_string(), "(-1-t)/(-1+t)");
        assert_eq!(&q * &s("1-t"), s("1+t"));
    }

    #[test]
    fn canonical_reduction() {
        // (t^2-1)/(t+1) collapses to the polynomial t-1
        assert_eq!(s("(t^2-1)/(t+1)"), s("t-1"));
        // (2+2t)/(1+t) collapses to a rational
        assert_eq!(s("(2+2*t)/(1+t)"), Scalar::from_int(2));
        assert!(s("(2+2*t)/(1+t)").is_rational());
        assert_eq!(s("t/t"), Scalar::one());
    }

    #[test]
    fn display_round_trips() {
        for text in ["0", "-7/3", "t", "-t", "1/2*t^3-t", "1/(1+t)", "t/(1+t)", "(1-t)/(2+t^2)", "-1/(1+t)^2"] {
            let v = s(text);
            assert_eq!(s(&v.to_string()), v, "{text} -> {v}");
        }
    }

    #[test]
    fn parse_errors() {
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("1+".parse::<Scalar>().is_err());
        assert!("x".parse::<Scalar>().is_err());
        assert!("(1+t".parse::<Scalar>().is_err());
    }

    #[test]
    fn negative_powers() {
        assert_eq!(s("(1+t)^-2") * s("(1+t)^2"), Scalar::one());
        assert_eq!(Scalar::ratio(2, 3).pow(-2), Scalar::ratio(9, 4));
    }

    #[test]
    fn specialization() {
        let v = s("(1+t)/(2-t)");
        assert_eq!(v.eval_t(&BigRational::from_integer(1.into())), Some(Scalar::from_int(2)));
        assert_eq!(v.eval_t(&BigRational::from_integer(2.into())), None);
    }
}
