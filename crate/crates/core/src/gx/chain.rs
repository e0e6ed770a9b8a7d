//! Determinant factor chains: `det H_n(F) = sign * prod base^(n - offset) * det H_(n - delta)(G)`.

use serde::{Deserialize, Serialize};

use crate::exactalg::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub base: Scalar,
    pub offset: usize,
}

/// Valid for `n >= delta`. Chains compose left to right, so
/// `a.then(&b)` relates the source of `a` to the target of `b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorChain {
    pub delta: usize,
    pub sign: i8,
    pub factors: Vec<Factor>,
}

impl Default for FactorChain {
    fn default() -> Self {
        FactorChain::identity()
    }
}

impl FactorChain {
    pub fn identity() -> Self {
        FactorChain { delta: 0, sign: 1, factors: Vec::new() }
    }

    /// `det H_n(F) = base^n det H_n(G)`.
    pub fn scaling(base: Scalar) -> Self {
        let mut c = FactorChain::identity();
        c.push_factor(base, 0);
        c
    }

    /// `det H_n(F) = sign * det H_(n - delta)(G)`.
    pub fn block(sign: i8, delta: usize) -> Self {
        FactorChain { delta, sign, factors: Vec::new() }
    }

    fn push_factor(&mut self, base: Scalar, offset: usize) {
        if base.is_one() {
            return;
        }
        let minus_one = Scalar::from_int(-1);
        if base == minus_one {
            // (-1)^(n-a) (-1)^(n-b) = (-1)^(a+b)
            if let Some(pos) = self.factors.iter().position(|f| f.base == minus_one) {
                let other = self.factors.remove(pos);
                if (other.offset + offset) % 2 == 1 {
                    self.sign = -self.sign;
                }
                return;
            }
        }
        if let Some(f) = self.factors.iter_mut().find(|f| f.offset == offset) {
            f.base = &f.base * &base;
            if f.base.is_one() {
                self.factors.retain(|f| !f.base.is_one());
            }
        } else {
            self.factors.push(Factor { base, offset });
            self.factors.sort_by_key(|f| f.offset);
        }
    }

    pub fn then(&self, next: &FactorChain) -> FactorChain {
        let mut out = self.clone();
        out.sign *= next.sign;
        for f in &next.factors {
            out.push_factor(f.base.clone(), f.offset + self.delta);
        }
        out.delta += next.delta;
        out
    }

    /// `sign * prod base^(n - offset)` for `n >= delta`.
    pub fn multiplier(&self, n: usize) -> Scalar {
        assert!(n >= self.delta, "chain is valid for n >= delta");
        let mut m = Scalar::from_int(self.sign as i64);
        for f in &self.factors {
            m *= &f.base.pow((n - f.offset) as i64);
        }
        m
    }

    /// Unrolls `det H_n(F) = multiplier(n) det H_(n - delta)(F)` for a chain
    /// that returns to its own source, down to the first `delta` values.
    pub fn unroll(&self, n: usize, base: &dyn Fn(usize) -> Scalar) -> Scalar {
        assert!(self.delta > 0, "a cycle must shift the order");
        let mut acc = Scalar::one();
        let mut m = n;
        while m >= self.delta {
            acc *= &self.multiplier(m);
            m -= self.delta;
        }
        &acc * &base(m)
    }
}

impl std::fmt::Display for FactorChain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        if self.sign < 0 {
            parts.push("-1".to_string());
        }
        for fac in &self.factors {
            let base = fac.base.to_string();
            let base = if base.chars().any(|c| "+-/*".contains(c)) { format!("({base})") } else { base };
            let exp = if fac.offset == 0 { "n".to_string() } else { format!("(n-{})", fac.offset) };
            parts.push(format!("{base}^{exp}"));
        }
        parts.push(if self.delta == 0 { "det H_n".to_string() } else { format!("det H_(n-{})", self.delta) });
        write!(f, "det H_n = {}", parts.join(" * "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Scalar {
        x.parse().unwrap()
    }

    #[test]
    fn composition_shifts_offsets() {
        let a = FactorChain::scaling(s("2")).then(&FactorChain::block(-1, 3));
        let b = a.then(&FactorChain::scaling(s("5")));
        assert_eq!(b.delta, 3);
        assert_eq!(b.sign, -1);
        assert_eq!(b.factors, vec![Factor { base: s("2"), offset: 0 }, Factor { base: s("5"), offset: 3 }]);
        assert_eq!(b.multiplier(4), s("-80"));
        assert_eq!(b.to_string(), "det H_n = -1 * 2^n * 5^(n-3) * det H_(n-3)");
    }

    #[test]
    fn reciprocal_factors_cancel() {
        let c = FactorChain::scaling(s("1/(1+t)")).then(&FactorChain::scaling(s("1+t")));
        assert_eq!(c, FactorChain::identity());
        let signs = FactorChain::scaling(s("-1")).then(&FactorChain::block(1, 1)).then(&FactorChain::scaling(s("-1")));
        assert_eq!(signs, FactorChain::block(-1, 1));
        assert_eq!(signs.multiplier(5), s("-1"));
        assert_eq!(signs.to_string(), "det H_n = -1 * det H_(n-1)");
    }

    #[test]
    fn unroll_recurrence() {
        // det H_n = (1+t)^(n-1) det H_(n-2)
        let c = FactorChain { delta: 2, sign: 1, factors: vec![Factor { base: s("1+t"), offset: 1 }] };
        let base = |_: usize| Scalar::one();
        assert_eq!(c.unroll(4, &base), s("(1+t)^4"));
        assert_eq!(c.unroll(5, &base), s("(1+t)^6"));
    }
}
