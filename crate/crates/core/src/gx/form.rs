//! Quadratic functional equations and their canonical continued-fraction form.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{CanonicalizeError, Error, Result};
use crate::exactalg::{cauchy_product, Poly, RatSeries, Scalar};

/// `a(x) F^2 + b(x) F + c(x) = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticForm {
    pub a: RatSeries,
    pub b: RatSeries,
    pub c: RatSeries,
}

impl QuadraticForm {
    pub fn new(a: RatSeries, b: RatSeries, c: RatSeries) -> Self {
        QuadraticForm { a, b, c }
    }

    /// Rewrites as `F = x^d / (u + x^k v F)` with `u(0), v(0) != 0`, `k >= 1`.
    pub fn canonicalize(&self) -> std::result::Result<QuadFE, CanonicalizeError> {
        if self.b.at_zero().is_zero() {
            return Err(CanonicalizeError::LinearTermVanishesAtZero);
        }
        if self.a.is_zero() {
            return Err(CanonicalizeError::Linear);
        }
        if self.c.is_zero() {
            return Err(CanonicalizeError::ZeroSolution);
        }
        // -c = x^d w with w(0) != 0
        let d = self.c.ord().expect("nonzero");
        let w = (-&self.c).shr(d).expect("ord(c) = d");
        let k = self.a.ord().expect("nonzero");
        if k == 0 {
            return Err(CanonicalizeError::NonUnique);
        }
        let u = self.b.checked_div(&w).expect("w(0) != 0");
        let v = self.a.shr(k).expect("ord(a) = k").checked_div(&w).expect("w(0) != 0");
        Ok(QuadFE { d, k, u, v })
    }

    /// The form satisfied by `S` where `F = offset + scale * S`.
    pub fn substitute(&self, offset: &RatSeries, scale: &RatSeries) -> QuadraticForm {
        let a = &self.a * &(scale * scale);
        let two_a_offset = (&self.a * offset).scale(&Scalar::from_int(2));
        let b = &(&two_a_offset + &self.b) * scale;
        let c = &(&(&self.a * &(offset * offset)) + &(&self.b * offset)) + &self.c;
        QuadraticForm { a, b, c }
    }

    /// Divides all three coefficients by `x^j`.
    pub fn shr(&self, j: usize) -> Result<QuadraticForm> {
        Ok(QuadraticForm { a: self.a.shr(j)?, b: self.b.shr(j)?, c: self.c.shr(j)? })
    }

    /// Coefficients of `a F^2 + b F + c` below `x^n`, for a truncated `F`.
    pub fn residual(&self, f: &[Scalar], n: usize) -> Vec<Scalar> {
        let f2 = cauchy_product(f, f, n);
        let af2 = cauchy_product(&self.a.expand(n), &f2, n);
        let bf = cauchy_product(&self.b.expand(n), f, n);
        let c = self.c.expand(n);
        (0..n).map(|i| &(&af2[i] + &bf[i]) + &c[i]).collect()
    }
}

/// `F = x^d / (u + x^k v F)`: the canonical form the transformations act on.
///
/// For a series that is not rational the tuple `(d, k, u, v)` is determined by
/// `F`, so structural equality decides equality of the solutions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "QuadFERepr")]
pub struct QuadFE {
    d: usize,
    k: usize,
    u: RatSeries,
    v: RatSeries,
}

#[derive(Deserialize)]
struct QuadFERepr {
    d: usize,
    k: usize,
    u: RatSeries,
    v: RatSeries,
}

impl TryFrom<QuadFERepr> for QuadFE {
    type Error = Error;
    fn try_from(r: QuadFERepr) -> Result<Self> {
        QuadFE::new(r.d, r.k, r.u, r.v)
    }
}

impl QuadFE {
    pub fn new(d: usize, k: usize, u: RatSeries, v: RatSeries) -> Result<Self> {
        if k == 0 {
            return Err(Error::Canonicalize(CanonicalizeError::NonUnique));
        }
        if u.at_zero().is_zero() {
            return Err(Error::InvalidEquation("u(0) must be nonzero".into()));
        }
        if v.at_zero().is_zero() {
            return Err(Error::InvalidEquation("v(0) must be nonzero".into()));
        }
        Ok(QuadFE { d, k, u, v })
    }

    /// Path generating function `F = 1 + t x^ℓ F + x^2 F^2`, i.e.
    /// `F = 1 / (1 - t x^ℓ - x^2 F)`. Requires `ℓ >= 1`.
    pub fn path_equation(ell: usize, t: &Scalar) -> Result<Self> {
        if ell == 0 {
            return Err(Error::InvalidPathParams("ell must be at least 1 for a functional equation".into()));
        }
        let u = &RatSeries::one() - &RatSeries::monomial(t.clone(), ell);
        QuadFE::new(0, 2, u, RatSeries::constant(Scalar::from_int(-1)))
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn u(&self) -> &RatSeries {
        &self.u
    }

    pub fn v(&self) -> &RatSeries {
        &self.v
    }

    /// `a = x^k v`, `b = u`, `c = -x^d`.
    pub fn to_form(&self) -> QuadraticForm {
        QuadraticForm {
            a: self.v.shl(self.k),
            b: self.u.clone(),
            c: RatSeries::monomial(Scalar::from_int(-1), self.d),
        }
    }

    /// Coefficients `F_0 ..= F_{n_max}` from `F (u + x^k v F) = x^d`.
    pub fn series(&self, n_max: usize) -> Vec<Scalar> {
        let len = n_max + 1;
        let u = self.u.expand(len);
        let v = self.v.expand(len);
        let u0_inv = u[0].inv().expect("u(0) != 0");
        let mut f: Vec<Scalar> = Vec::with_capacity(len);
        // f2[s] = (F^2)_s, filled as soon as F_0..F_s are known
        let mut f2: Vec<Scalar> = Vec::with_capacity(len);
        for m in 0..len {
            let mut rhs = if m == self.d { Scalar::one() } else { Scalar::zero() };
            for i in 0..m {
                if !u[m - i].is_zero() && !f[i].is_zero() {
                    rhs -= &(&f[i] * &u[m - i]);
                }
            }
            if m >= self.k {
                for j in 0..=m - self.k {
                    let s = m - self.k - j;
                    if !v[j].is_zero() && !f2[s].is_zero() {
                        rhs -= &(&v[j] * &f2[s]);
                    }
                }
            }
            f.push(&rhs * &u0_inv);
            let sq: Scalar = (0..=m).filter(|&i| !f[i].is_zero() && !f[m - i].is_zero()).map(|i| &f[i] * &f[m - i]).sum();
            f2.push(sq);
        }
        f
    }

    /// Splits `u = u_L + x^(d+2) u_H` with `deg u_L <= d + 1`.
    pub fn split_u(&self) -> ULSplit {
        let low = self.u.truncate(self.d + 2);
        let high = (&self.u - &RatSeries::from_poly(low.clone()))
            .shr(self.d + 2)
            .expect("u - u_L vanishes to order d + 2");
        ULSplit { low, high }
    }
}

/// Reads either `{"d","k","u","v"}` or `{"a","b","c"}`; the latter is canonicalized.
pub fn fe_from_json(text: &str) -> Result<QuadFE> {
    let parse_err = Error::InvalidEquation;
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
    let is_form = value.get("a").is_some() || value.get("b").is_some() || value.get("c").is_some();
    if is_form {
        let form: QuadraticForm = serde_json::from_value(value).map_err(|e| parse_err(e.to_string()))?;
        Ok(form.canonicalize()?)
    } else {
        serde_json::from_value(value).map_err(|e| parse_err(e.to_string()))
    }
}

pub fn fe_equal(a: &QuadFE, b: &QuadFE) -> bool {
    a == b
}

/// Low/high split of `u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ULSplit {
    pub low: Poly,
    pub high: RatSeries,
}

impl ULSplit {
    /// `u_L + x^(d+2) u_H`.
    pub fn recombine(&self, d: usize) -> RatSeries {
        &RatSeries::from_poly(self.low.clone()) + &self.high.shl(d + 2)
    }
}

/// Whether `s` has a `+` or `-` outside parentheses past its first character.
pub(crate) fn needs_parens(s: &str) -> bool {
    let mut depth = 0i32;
    let mut prev = None;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' | '-' if depth == 0 && i > 0 && prev != Some('^') => return true,
            _ => {}
        }
        prev = Some(c);
    }
    false
}

fn wrap(s: String) -> String {
    if needs_parens(&s) {
        format!("({s})")
    } else {
        s
    }
}

pub(crate) fn xpow(e: i64) -> String {
    match e {
        0 => String::new(),
        1 => "x".into(),
        e => format!("x^{e}"),
    }
}

impl fmt::Display for QuadFE {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let numer = if self.d == 0 { "1".to_string() } else { xpow(self.d as i64) };
        let (sign, v) = if self.v.to_string().starts_with('-') {
            ("-", -&self.v)
        } else {
            ("+", self.v.clone())
        };
        let xk = xpow(self.k as i64);
        let coef = if v.num().degree() == Some(0) && v.num().coeff(0).is_one() {
            match v.den().degree() {
                Some(0) => xk,
                _ => format!("{xk}/{}", wrap(v.den().to_string())),
            }
        } else {
            format!("{xk}*{}", wrap(v.to_string()))
        };
        write!(f, "F = {numer}/({} {sign} {coef}*F)", self.u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn rs(num: &[i64], den: &[i64]) -> RatSeries {
        RatSeries::new(Poly::from_ints(num), Poly::from_ints(den)).unwrap()
    }

    #[test]
    fn canonical_ell3() {
        let q = QuadraticForm::new(rs(&[0, 0, -1], &[1]), rs(&[1, 0, 0, -1], &[1]), rs(&[-1], &[1]));
        let fe = q.canonicalize().unwrap();
        assert_eq!((fe.d(), fe.k()), (0, 2));
        assert_eq!(fe.u(), &rs(&[1, 0, 0, -1], &[1]));
        assert_eq!(fe.v(), &rs(&[-1], &[1]));
        assert_eq!(fe, QuadFE::path_equation(3, &Scalar::one()).unwrap());
        assert_eq!(fe.to_string(), "F = 1/(1-x^3 - x^2*F)");
    }

    #[test]
    fn canonical_clears_common_factor() {
        // (1+x) F = (1 - x - 2x^2) ... scaled by 1/(1+x)
        let q = QuadraticForm::new(rs(&[0, 0, 0, -1], &[1]), rs(&[1, -1, -2], &[1]), rs(&[-1, -1], &[1]));
        let fe = q.canonicalize().unwrap();
        assert_eq!((fe.d(), fe.k()), (0, 3));
        assert_eq!(fe.u(), &rs(&[1, -2], &[1]));
        assert_eq!(fe.v(), &rs(&[-1], &[1, 1]));
    }

    #[test]
    fn canonical_symbolic_constant() {
        let t = Scalar::t();
        let one_t = &Scalar::one() + &t;
        let q = QuadraticForm::new(
            rs(&[0, 0, -1], &[1]),
            RatSeries::from_poly(Poly::new(vec![Scalar::one(), Scalar::zero(), t.clone()])),
            RatSeries::constant(-&one_t),
        );
        let fe = q.canonicalize().unwrap();
        assert_eq!((fe.d(), fe.k()), (0, 2));
        assert_eq!(fe.u().at_zero(), one_t.inv().unwrap());
        assert_eq!(fe.v(), &RatSeries::constant(-&one_t.inv().unwrap()));
    }

    #[test]
    fn canonicalize_errors() {
        let one = rs(&[1], &[1]);
        let x = rs(&[0, 1], &[1]);
        let zero = RatSeries::zero();
        assert_eq!(
            QuadraticForm::new(x.clone(), x.clone(), one.clone()).canonicalize(),
            Err(CanonicalizeError::LinearTermVanishesAtZero)
        );
        assert_eq!(QuadraticForm::new(zero.clone(), one.clone(), one.clone()).canonicalize(), Err(CanonicalizeError::Linear));
        assert_eq!(QuadraticForm::new(x.clone(), one.clone(), zero).canonicalize(), Err(CanonicalizeError::ZeroSolution));
        assert_eq!(QuadraticForm::new(one.clone(), one.clone(), one).canonicalize(), Err(CanonicalizeError::NonUnique));
    }

    #[test]
    fn split_examples() {
        let fe = QuadFE::path_equation(3, &Scalar::one()).unwrap();
        let s = fe.split_u();
        assert_eq!(s.low, Poly::from_ints(&[1]));
        assert_eq!(s.high, rs(&[0, -1], &[1]));
        assert_eq!(s.recombine(0), *fe.u());

        let fe = QuadFE::new(0, 2, rs(&[1, 0, -2, -1], &[1, 1]), rs(&[-1], &[1])).unwrap();
        let s = fe.split_u();
        assert_eq!(s.low, Poly::from_ints(&[1, -1]));
        assert_eq!(s.high, rs(&[-1], &[1]));

        let fe = QuadFE::new(2, 2, rs(&[1, 0, -2, -1], &[1]), rs(&[-1, -1], &[1])).unwrap();
        let s = fe.split_u();
        assert_eq!(s.low, Poly::from_ints(&[1, 0, -2, -1]));
        assert!(s.high.is_zero());
    }

    #[test]
    fn series_starts_at_order_d() {
        let fe = QuadFE::new(3, 1, rs(&[2, 1], &[1]), rs(&[1], &[1, -1])).unwrap();
        let s = fe.series(6);
        assert!(s[..3].iter().all(Scalar::is_zero));
        assert!(!s[3].is_zero());
        assert!(fe.to_form().residual(&s, 7).iter().all(Scalar::is_zero));
    }

    #[test]
    fn json_inputs() {
        let canonical = r#"{"d":0,"k":2,"u":{"num":[1,0,0,-1]},"v":{"num":[-1]}}"#;
        let form = r#"{"a":{"num":[0,0,-1]},"b":{"num":["1",0,0,"-1"]},"c":{"num":[-1]}}"#;
        let fe = QuadFE::path_equation(3, &Scalar::one()).unwrap();
        assert_eq!(fe_from_json(canonical).unwrap(), fe);
        assert_eq!(fe_from_json(form).unwrap(), fe);
        assert_eq!(serde_json::from_str::<QuadFE>(&serde_json::to_string(&fe).unwrap()).unwrap(), fe);
        let bad = r#"{"a":{"num":[0,1]},"b":{"num":[0,1]},"c":{"num":[1]}}"#;
        assert_eq!(fe_from_json(bad), Err(Error::Canonicalize(CanonicalizeError::LinearTermVanishesAtZero)));
        assert!(matches!(fe_from_json(r#"{"d":0,"k":0,"u":{"num":[1]},"v":{"num":[1]}}"#), Err(_)));
        assert!(matches!(fe_from_json("nope"), Err(Error::InvalidEquation(_))));
    }

    #[test]
    fn rejects_invalid_tuples() {
        let one = rs(&[1], &[1]);
        assert!(QuadFE::new(0, 0, one.clone(), one.clone()).is_err());
        assert!(QuadFE::new(0, 1, rs(&[0, 1], &[1]), one.clone()).is_err());
        assert!(QuadFE::new(0, 1, one.clone(), RatSeries::zero()).is_err());
    }
}
