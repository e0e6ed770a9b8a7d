//! The transformation steps and the relations between old and new series.

use std::fmt;

use serde::Serialize;

use super::chain::FactorChain;
use super::form::{needs_parens, xpow, QuadFE, QuadraticForm};
use crate::error::{Error, Result};
use crate::exactalg::{cauchy_product, Poly, RatSeries, Scalar};

/// `x^shift * series` with `series(0) != 0` (or the zero value).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Laurent {
    series: RatSeries,
    shift: i64,
}

impl Laurent {
    pub fn new(series: RatSeries, shift: i64) -> Self {
        match series.ord() {
            Err(_) => Laurent { series: RatSeries::zero(), shift: 0 },
            Ok(o) => Laurent { series: series.shr(o).expect("ord"), shift: shift + o as i64 },
        }
    }

    pub fn zero() -> Self {
        Laurent::new(RatSeries::zero(), 0)
    }

    pub fn one() -> Self {
        Laurent::new(RatSeries::one(), 0)
    }

    pub fn is_zero(&self) -> bool {
        self.series.is_zero()
    }

    pub fn series(&self) -> &RatSeries {
        &self.series
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn mul(&self, rhs: &Laurent) -> Laurent {
        Laurent::new(&self.series * &rhs.series, self.shift + rhs.shift)
    }

    pub fn add(&self, rhs: &Laurent) -> Laurent {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let lo = self.shift.min(rhs.shift);
        let a = self.series.shl((self.shift - lo) as usize);
        let b = rhs.series.shl((rhs.shift - lo) as usize);
        Laurent::new(&a + &b, lo)
    }

    pub fn neg(&self) -> Laurent {
        Laurent { series: -&self.series, shift: self.shift }
    }

    /// Coefficients of `x^lo ..= x^(hi-1)`, given `lo <= shift`.
    fn coeffs(&self, lo: i64, hi: i64) -> Vec<Scalar> {
        let len = (hi - lo).max(0) as usize;
        let mut out = vec![Scalar::zero(); len];
        if self.is_zero() || hi <= self.shift {
            return out;
        }
        let s = self.series.expand((hi - self.shift) as usize);
        for (i, c) in s.into_iter().enumerate() {
            out[(self.shift - lo) as usize + i] = c;
        }
        out
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.series.to_string();
        match (self.shift, s.as_str()) {
            (0, _) => write!(f, "{s}"),
            (e, "1") => write!(f, "{}", xpow(e)),
            (e, "-1") => write!(f, "-{}", xpow(e)),
            (e, _) if !needs_parens(&s) => write!(f, "{}*{s}", xpow(e)),
            (e, _) => write!(f, "{}*({s})", xpow(e)),
        }
    }
}

/// `G = add + mul * F`, with Laurent coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub add: Laurent,
    pub mul: Laurent,
}

impl Relation {
    pub fn identity() -> Self {
        Relation { add: Laurent::zero(), mul: Laurent::one() }
    }

    /// `self` expresses `G` by `F`, `next` expresses `S` by `G`.
    pub fn then(&self, next: &Relation) -> Relation {
        Relation { add: next.add.add(&next.mul.mul(&self.add)), mul: next.mul.mul(&self.mul) }
    }

    /// First `n` coefficients of `add + mul * F` from those of `F`.
    /// `None` when the right side is not a power series to that precision.
    pub fn apply(&self, f: &[Scalar], n: usize) -> Option<Vec<Scalar>> {
        let lo = [self.add.shift, self.mul.shift, 0].into_iter().min().unwrap();
        let hi = n as i64;
        let width = (hi - lo) as usize;
        if f.len() < width {
            return None;
        }
        let m = self.mul.coeffs(self.mul.shift, hi);
        let prod = cauchy_product(&m, f, m.len());
        let mut total = self.add.coeffs(lo, hi);
        for (i, c) in prod.into_iter().enumerate() {
            let idx = (self.mul.shift - lo) as usize + i;
            if idx < width {
                total[idx] += &c;
            }
        }
        let neg = (-lo) as usize;
        if total[..neg].iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(total.split_off(neg))
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.mul.to_string();
        let term = match m.as_str() {
            "1" => "F".to_string(),
            "-1" => "-F".to_string(),
            _ if needs_parens(&m) => format!("({m})*F"),
            _ => format!("{m}*F"),
        };
        if self.add.is_zero() {
            write!(f, "G = {term}")
        } else if let Some(rest) = term.strip_prefix('-') {
            write!(f, "G = {} - {rest}", self.add)
        } else {
            write!(f, "G = {} + {term}", self.add)
        }
    }
}

impl Serialize for Relation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    Normalize,
    Quadratic,
    Shift,
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepKind::Normalize => "normalize",
            StepKind::Quadratic => "quadratic",
            StepKind::Shift => "shift",
        })
    }
}

/// One elementary step from `F` to `G`.
///
/// `chain` relates `det H_n(F)` to `det H^target_shift_(n - delta)(G)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    pub kind: StepKind,
    pub fe: QuadFE,
    pub chain: FactorChain,
    pub relation: Relation,
    pub target_shift: usize,
}

/// Scales `F` by `u(0)` so the new `u` has constant term 1.
pub fn normalize_const(fe: &QuadFE) -> Step {
    let c0 = fe.u().at_zero();
    if c0.is_one() {
        return Step {
            kind: StepKind::Normalize,
            fe: fe.clone(),
            chain: FactorChain::identity(),
            relation: Relation::identity(),
            target_shift: 0,
        };
    }
    let inv = c0.inv().expect("u(0) != 0");
    let u = fe.u().scale(&inv);
    let v = fe.v().scale(&(&inv * &inv));
    let g = QuadFE::new(fe.d(), fe.k(), u, v).expect("constant terms stay nonzero");
    Step {
        kind: StepKind::Normalize,
        fe: g,
        chain: FactorChain::scaling(inv),
        relation: Relation { add: Laurent::zero(), mul: Laurent::new(RatSeries::constant(c0), 0) },
        target_shift: 0,
    }
}

fn block_sign(d: usize) -> i8 {
    if (d * (d + 1) / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The block-elimination step for `u(0) = 1`.
///
/// With `k >= 2` the result relates to the plain Hankel determinants of `G`;
/// with `k = 1` it relates to the shifted ones (`target_shift = 1`).
pub fn transform_quadratic(fe: &QuadFE) -> Result<Step> {
    if !fe.u().at_zero().is_one() {
        return Err(Error::NotNormalized);
    }
    let (d, k) = (fe.d(), fe.k());
    let split = fe.split_u();
    let u_l = RatSeries::from_poly(split.low.clone());
    let u_h = split.high;
    let x_d2 = |s: &RatSeries| s.shl(d + 2);
    let b = &u_l - &x_d2(&u_h);
    let (form, relation, target_shift) = if k >= 2 {
        let form = QuadraticForm::new(
            RatSeries::monomial(Scalar::from_int(-1), d + 2),
            b,
            &fe.v().shl(k - 2) + &(&u_l * &u_h),
        );
        let rel = Relation { add: Laurent::new(-&u_h, 0), mul: Laurent::new(-fe.v(), k as i64 - d as i64 - 2) };
        (form, rel, 0)
    } else {
        let form =
            QuadraticForm::new(RatSeries::monomial(Scalar::from_int(-1), d + 1), b, &fe.v().clone() + &(&u_l * &u_h).shl(1));
        let rel = Relation { add: Laurent::new(-&u_h, 1), mul: Laurent::new(-fe.v(), -(d as i64)) };
        (form, rel, 1)
    };
    let g = form.canonicalize()?;
    Ok(Step {
        kind: StepKind::Quadratic,
        fe: g,
        chain: FactorChain::block(block_sign(d), d + 1),
        relation,
        target_shift,
    })
}

/// `S = (F - p) / x^j` where `p` is `F` truncated below `x^j`, so that
/// `det H^j_n(F) = det H_n(S)`.
pub fn shift_out(fe: &QuadFE, j: usize) -> Result<Step> {
    let p = match j {
        0 => RatSeries::zero(),
        _ => RatSeries::from_poly(Poly::new(fe.series(j - 1))),
    };
    let form = fe.to_form().substitute(&p, &RatSeries::monomial(Scalar::one(), j)).shr(j)?;
    let g = form.canonicalize()?;
    Ok(Step {
        kind: StepKind::Shift,
        fe: g,
        chain: FactorChain::identity(),
        relation: Relation { add: Laurent::new(-&p, -(j as i64)), mul: Laurent::new(RatSeries::one(), -(j as i64)) },
        target_shift: 0,
    })
}

/// One application of the transformation: a normalization if `u(0) != 1`,
/// otherwise a quadratic step, followed by shifting out one term when `k = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TStep {
    pub kinds: Vec<StepKind>,
    pub fe: QuadFE,
    pub chain: FactorChain,
    pub relation: Relation,
    pub intermediate: Option<QuadFE>,
}

pub fn apply_t(fe: &QuadFE) -> Result<TStep> {
    if !fe.u().at_zero().is_one() {
        let s = normalize_const(fe);
        return Ok(TStep { kinds: vec![s.kind], fe: s.fe, chain: s.chain, relation: s.relation, intermediate: None });
    }
    let q = transform_quadratic(fe)?;
    if q.target_shift == 0 {
        return Ok(TStep { kinds: vec![q.kind], fe: q.fe, chain: q.chain, relation: q.relation, intermediate: None });
    }
    let s = shift_out(&q.fe, q.target_shift)?;
    Ok(TStep {
        kinds: vec![q.kind, s.kind],
        fe: s.fe,
        chain: q.chain.then(&s.chain),
        relation: q.relation.then(&s.relation),
        intermediate: Some(q.fe),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::CanonicalizeError;
    use crate::hankel::det_sequence;

    fn rs(num: &[i64], den: &[i64]) -> RatSeries {
        RatSeries::new(Poly::from_ints(num), Poly::from_ints(den)).unwrap()
    }

    fn fe(d: usize, k: usize, u: (&[i64], &[i64]), v: (&[i64], &[i64])) -> QuadFE {
        QuadFE::new(d, k, rs(u.0, u.1), rs(v.0, v.1)).unwrap()
    }

    /// `det H_n(F) = chain(n) det H^s_(n - delta)(G)` for `delta <= n <= n_max`.
    fn sound(from: &QuadFE, to: &QuadFE, chain: &FactorChain, target_shift: usize, n_max: usize) {
        let f = from.series(2 * n_max);
        let g = to.series(2 * n_max + target_shift);
        let df = det_sequence(&f, 0, n_max).unwrap();
        let dg = det_sequence(&g, target_shift, n_max).unwrap();
        for n in chain.delta.max(1)..=n_max {
            let rhs = if n == chain.delta { Scalar::one() } else { dg[n - chain.delta - 1].clone() };
            assert_eq!(df[n - 1], &chain.multiplier(n) * &rhs, "n = {n}");
        }
    }

    fn relation_holds(from: &QuadFE, to: &QuadFE, rel: &Relation, n: usize) {
        let f = from.series(n + 12);
        let g = to.series(n);
        assert_eq!(rel.apply(&f, n + 1).unwrap(), g);
    }

    /// The solution of `F = num / (den + coef * F)`.
    fn cf(num: &[i64], den: &[i64], coef: &[i64]) -> QuadFE {
        QuadraticForm::new(rs(coef, &[1]), rs(den, &[1]), rs(num, &[1]).scale(&Scalar::from_int(-1)))
            .canonicalize()
            .unwrap()
    }

    #[test]
    fn ell3_orbit_intermediate_forms() {
        let f0 = QuadFE::path_equation(3, &Scalar::one()).unwrap();
        let s1 = apply_t(&f0).unwrap();
        assert_eq!(s1.fe, cf(&[1, 1], &[1, 0, 0, 1], &[0, 0, -1]));
        assert_eq!(s1.chain, FactorChain::block(1, 1));
        let s2 = apply_t(&s1.fe).unwrap();
        assert_eq!(s2.fe, cf(&[0, 0, 1], &[1, 0, -2, -1], &[0, 0, -1, -1]));
        assert_eq!(s2.chain, FactorChain::block(1, 1));
        let s3 = apply_t(&s2.fe).unwrap();
        assert_eq!(s3.fe, cf(&[1, 1], &[1, 0, -2, -1], &[0, 0, 0, 0, -1]));
        assert_eq!(s3.chain, FactorChain::block(-1, 3));
        let s4 = apply_t(&s3.fe).unwrap();
        assert_eq!(s4.fe, cf(&[1], &[1, 0, 0, 1], &[0, 0, -1, -1]));
        let s5 = apply_t(&s4.fe).unwrap();
        assert_eq!(s5.fe, f0);
        let total: Vec<usize> = [&s1, &s2, &s3, &s4, &s5].iter().map(|s| s.chain.delta).collect();
        assert_eq!(total, vec![1, 1, 3, 1, 1]);
        for (a, s) in [(&f0, &s1), (&s1.fe, &s2), (&s2.fe, &s3), (&s3.fe, &s4), (&s4.fe, &s5)] {
            sound(a, &s.fe, &s.chain, 0, 12);
            relation_holds(a, &s.fe, &s.relation, 15);
        }
    }

    #[test]
    fn intermediate_display() {
        let f0 = QuadFE::path_equation(3, &Scalar::one()).unwrap();
        let g = apply_t(&f0).unwrap();
        assert_eq!(g.fe.to_string(), "F = 1/(1-x+x^2 - x^2/(1+x)*F)");
        assert_eq!(g.relation.to_string(), "G = x + F");
        let r = Relation { add: Laurent::new(rs(&[0, -1], &[1]), 0), mul: Laurent::new(rs(&[1, 1], &[1]), 0) };
        assert_eq!(r.to_string(), "G = -x + (1+x)*F");
        let r = Relation { add: Laurent::zero(), mul: Laurent::new(rs(&[1, 1], &[1]), -2) };
        assert_eq!(r.to_string(), "G = x^-2*(1+x)*F");
    }

    #[test]
    fn normalize_scales() {
        let f = fe(0, 2, (&[2, 1], &[1]), (&[3], &[1]));
        let s = normalize_const(&f);
        assert_eq!(s.fe.u(), &RatSeries::new(Poly::new(vec!["1".parse().unwrap(), "1/2".parse().unwrap()]), Poly::one()).unwrap());
        assert_eq!(s.fe.v(), &RatSeries::constant("3/4".parse().unwrap()));
        assert_eq!(s.chain, FactorChain::scaling("1/2".parse().unwrap()));
        sound(&f, &s.fe, &s.chain, 0, 8);
        relation_holds(&f, &s.fe, &s.relation, 10);
        assert_eq!(transform_quadratic(&f), Err(Error::NotNormalized));
        let id = normalize_const(&s.fe);
        assert_eq!(id.fe, s.fe);
        assert_eq!(id.chain, FactorChain::identity());
    }

    #[test]
    fn quadratic_k1_relates_to_shifted_hankel() {
        let f = fe(2, 1, (&[1, 0, -2, -1], &[1]), (&[-1, -1], &[1]));
        let q = transform_quadratic(&f).unwrap();
        assert_eq!(q.target_shift, 1);
        assert_eq!(q.chain, FactorChain::block(-1, 3));
        sound(&f, &q.fe, &q.chain, 1, 12);
        relation_holds(&f, &q.fe, &q.relation, 12);
        let t = apply_t(&f).unwrap();
        assert_eq!(t.kinds, vec![StepKind::Quadratic, StepKind::Shift]);
        assert_eq!(t.intermediate.as_ref(), Some(&q.fe));
        sound(&f, &t.fe, &t.chain, 0, 12);
        relation_holds(&f, &t.fe, &t.relation, 12);
    }

    #[test]
    fn shift_out_motzkin() {
        // Motzkin at t = 1 shifted once
        let m = QuadFE::path_equation(1, &Scalar::one()).unwrap();
        let s = shift_out(&m, 1).unwrap();
        assert_eq!(s.fe, fe(0, 3, (&[1, -2], &[1]), (&[-1], &[1, 1])));
        let mf = m.series(20);
        assert_eq!(s.fe.series(19), mf[1..].to_vec());
        relation_holds(&m, &s.fe, &s.relation, 15);
        assert_eq!(shift_out(&m, 0).unwrap().fe, m);
    }

    #[test]
    fn shift_out_rational_series_degenerates() {
        // F = 1/(1 - x - x F) has F = ... nonrational; but F = x/(1 + x F) shifted by many terms stays quadratic.
        // A polynomial solution: F = 1 satisfies x F^2 + (1 - x) F - 1 = 0.
        let f = QuadraticForm::new(rs(&[0, 1], &[1]), rs(&[1, -1], &[1]), rs(&[-1], &[1])).canonicalize().unwrap();
        assert_eq!(f.series(5), vec![Scalar::one(), Scalar::zero(), Scalar::zero(), Scalar::zero(), Scalar::zero(), Scalar::zero()]);
        assert_eq!(shift_out(&f, 1).unwrap_err(), Error::Canonicalize(CanonicalizeError::ZeroSolution));
    }

    #[test]
    fn laurent_relation_composition() {
        let r1 = Relation { add: Laurent::new(rs(&[0, 1], &[1]), 0), mul: Laurent::new(rs(&[2], &[1]), 0) };
        let r2 = Relation { add: Laurent::new(rs(&[-1], &[1]), -1), mul: Laurent::new(rs(&[1], &[1]), -1) };
        let r = r1.then(&r2);
        // S = (x + 2F - 1)/x
        let half: Scalar = "1/2".parse().unwrap();
        let f = vec![half, Scalar::from_int(3), Scalar::from_int(5), Scalar::from_int(7)];
        assert_eq!(r.apply(&f, 2).unwrap(), vec![Scalar::from_int(7), Scalar::from_int(10)]);
        assert_eq!(r.apply(&f[1..], 1), None);
        assert_eq!(r.to_string(), "G = x^-1*(-1+x) + x^-1*2*F");
    }
}
