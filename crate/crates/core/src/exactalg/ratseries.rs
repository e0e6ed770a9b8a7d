//! Rational functions in `x` regular at the origin, read as formal power series.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::poly::Poly;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// `num / den` with `den(0) = 1` and `gcd(num, den) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RatSeriesRepr", into = "RatSeriesRepr")]
pub struct RatSeries {
    num: Poly,
    den: Poly,
}

#[derive(Serialize, Deserialize)]
struct RatSeriesRepr {
    num: Poly,
    #[serde(default = "Poly::one")]
    den: Poly,
}

impl TryFrom<RatSeriesRepr> for RatSeries {
    type Error = Error;
    fn try_from(r: RatSeriesRepr) -> Result<Self> {
        RatSeries::new(r.num, r.den)
    }
}

impl From<RatSeries> for RatSeriesRepr {
    fn from(r: RatSeries) -> Self {
        RatSeriesRepr { num: r.num, den: r.den }
    }
}

impl RatSeries {
    /// Reduces `num / den` to canonical form. Fails if `den` is zero or the
    /// reduced denominator vanishes at `x = 0`.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatSeries::zero());
        }
        let g = num.gcd(&den);
        let (num, den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.divrem(&g)?.0, den.divrem(&g)?.0)
        };
        let d0 = den.coeff(0);
        let inv = d0.inv().ok_or(Error::NotPowerSeries)?;
        if inv.is_one() {
            Ok(RatSeries { num, den })
        } else {
            Ok(RatSeries { num: num.scale(&inv), den: den.scale(&inv) })
        }
    }

    pub fn zero() -> Self {
        RatSeries { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        RatSeries::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        RatSeries { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatSeries { num: p, den: Poly::one() }
    }

    /// The monomial `c x^j`.
    pub fn monomial(c: Scalar, j: usize) -> Self {
        RatSeries::from_poly(Poly::monomial(c, j))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The constant term.
    pub fn at_zero(&self) -> Scalar {
        self.num.coeff(0)
    }

    /// Order of vanishing at `x = 0`.
    pub fn ord(&self) -> Result<usize> {
        self.num.ord().ok_or(Error::ZeroOrder)
    }

    /// First `n` power-series coefficients, by the recurrence the denominator induces.
    pub fn expand(&self, n: usize) -> Vec<Scalar> {
        let den = self.den.coeffs();
        let mut out: Vec<Scalar> = Vec::with_capacity(n);
        for m in 0..n {
            // den(0) = 1
            let mut c = self.num.coeff(m);
            for (j, dj) in den.iter().enumerate().skip(1).take(m) {
                if !dj.is_zero() {
                    c -= &(dj * &out[m - j]);
                }
            }
            out.push(c);
        }
        out
    }

    /// The series truncated to a polynomial of degree below `n`.
    pub fn truncate(&self, n: usize) -> Poly {
        Poly::new(self.expand(n))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return RatSeries::zero();
        }
        RatSeries { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Multiplies by `x^j`.
    pub fn shl(&self, j: usize) -> Self {
        RatSeries { num: self.num.shl(j), den: self.den.clone() }
    }

    /// Divides by `x^j`; requires `ord(self) >= j` (or `self = 0`).
    pub fn shr(&self, j: usize) -> Result<Self> {
        let num = self.num.shr(j).ok_or(Error::NotPowerSeries)?;
        Ok(RatSeries { num, den: self.den.clone() })
    }

    pub fn checked_div(&self, rhs: &RatSeries) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatSeries::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn inv(&self) -> Result<Self> {
        RatSeries::one().checked_div(self)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(RatSeries::one(), |acc, _| &acc * self)
    }

    /// Applies a coefficient map (e.g. specializing `t`) to numerator and denominator.
    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Option<Scalar>) -> Result<Self> {
        let num = self.num.map_coeffs(&f).ok_or(Error::DivisionByZero)?;
        let den = self.den.map_coeffs(&f).ok_or(Error::DivisionByZero)?;
        RatSeries::new(num, den)
    }
}

impl fmt::Display for RatSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |p: &Poly| {
            if p.num_terms() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }
}

impl Add for &RatSeries {
    type Output = RatSeries;
    fn add(self, rhs: &RatSeries) -> RatSeries {
        if self.den == rhs.den {
            return RatSeries::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatSeries::new(num, &self.den * &rhs.den).unwrap()
    }
}

impl Sub for &RatSeries {
    type Output = RatSeries;
    fn sub(self, rhs: &RatSeries) -> RatSeries {
        self + &(-rhs)
    }
}

impl Neg for &RatSeries {
    type Output = RatSeries;
    fn neg(self) -> RatSeries {
        RatSeries { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &RatSeries {
    type Output = RatSeries;
    fn mul(self, rhs: &RatSeries) -> RatSeries {
        if self.den.degree() == Some(0) && rhs.den.degree() == Some(0) {
            return RatSeries { num: &self.num * &rhs.num, den: Poly::one() };
        }
        RatSeries::new(&self.num * &rhs.num, &self.den * &rhs.den).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(num: &[i64], den: &[i64]) -> RatSeries {
        RatSeries::new(Poly::from_ints(num), Poly::from_ints(den)).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&c| Scalar::from_int(c)).collect()
    }

    #[test]
    fn geometric_series() {
        assert_eq!(rs(&[1], &[1, -1]).expand(5), ints(&[1, 1, 1, 1, 1]));
    }

    #[test]
    fn reduced_quotient_expands() {
        let r = rs(&[1, 0, 0, 1], &[1, 1]);
        assert_eq!(r, rs(&[1, -1, 1], &[1]));
        assert_eq!(r.expand(5), ints(&[1, -1, 1, 0, 0]));
    }

    #[test]
    fn symbolic_ratio() {
        let t = Scalar::t();
        let one_plus_t = &Scalar::one() + &t;
        let ratio = &Scalar::from_int(2) + &t;
        let r = RatSeries::new(
            Poly::constant(one_plus_t.clone()),
            Poly::new(vec![Scalar::one(), -&ratio]),
        )
        .unwrap();
        let e = r.expand(3);
        assert_eq!(e[0], one_plus_t);
        assert_eq!(e[1], &one_plus_t * &ratio);
        assert_eq!(e[2], &one_plus_t * &ratio.pow(2));
    }

    #[test]
    fn orders() {
        assert_eq!(rs(&[0, 0, 1], &[1, 1]).ord(), Ok(2));
        assert_eq!(rs(&[0, 0, 1, 1], &[1, 1]).ord(), Ok(2));
        assert_eq!(rs(&[1, 1], &[1]).ord(), Ok(0));
        assert_eq!(RatSeries::zero().ord(), Err(Error::ZeroOrder));
    }

    #[test]
    fn pole_at_origin_rejected() {
        assert_eq!(RatSeries::new(Poly::from_ints(&[1]), Poly::from_ints(&[0, 1])), Err(Error::NotPowerSeries));
        // but a removable one is fine
        assert_eq!(RatSeries::new(Poly::from_ints(&[0, 2]), Poly::from_ints(&[0, 1])).unwrap(), rs(&[2], &[1]));
    }

    #[test]
    fn normalized_denominator() {
        let r = rs(&[2], &[2, 4]);
        assert_eq!(r.den().coeff(0), Scalar::one());
        assert_eq!(r, rs(&[1], &[1, 2]));
    }
}
