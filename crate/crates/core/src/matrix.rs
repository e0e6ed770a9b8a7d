//! Square matrices over [`Scalar`] and exact determinants.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::exactalg::{Scalar, TPoly};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactMatrix {
    order: usize,
    entries: Vec<Scalar>,
}

impl ExactMatrix {
    /// Row-major entries; panics unless `entries.len() == order * order`.
    pub fn new(order: usize, entries: Vec<Scalar>) -> Self {
        assert_eq!(entries.len(), order * order, "matrix entry count");
        ExactMatrix { order, entries }
    }

    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut entries = Vec::with_capacity(order * order);
        for i in 0..order {
            for j in 0..order {
                entries.push(f(i, j));
            }
        }
        ExactMatrix { order, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let order = rows.len();
        let entries: Vec<Scalar> = rows.into_iter().flatten().collect();
        ExactMatrix::new(order, entries)
    }

    pub fn identity(order: usize) -> Self {
        ExactMatrix::from_fn(order, |i, j| if i == j { Scalar::one() } else { Scalar::zero() })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.order + j]
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        self.entries.chunks(self.order.max(1)).take(self.order).map(<[Scalar]>::to_vec).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.order).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Exact determinant; the empty matrix has determinant 1.
    ///
    /// Integer and polynomial-in-`t` matrices go through fraction-free
    /// elimination, everything else through field elimination.
    pub fn det(&self) -> Scalar {
        if let Some(d) = self.det_fraction_free() {
            return d;
        }
        if self.entries.iter().any(|e| !e.is_rational()) {
            return self.det_cleared();
        }
        self.det_field()
    }

    /// Multiplies each row by the lcm of its denominators, takes the
    /// fraction-free determinant of the resulting polynomial matrix and
    /// divides the row factors back out.
    pub fn det_cleared(&self) -> Scalar {
        let (polys, scales) = self.cleared_rows();
        let scale = scales.iter().fold(TPoly::one(), |acc, s| &acc * s);
        Scalar::from_tpoly(poly_det(self.order, &polys))
            .checked_div(&Scalar::from_tpoly(scale))
            .expect("row factors are nonzero")
    }

    /// Leading principal minors of orders `1..`, from a single fraction-free
    /// elimination without row exchanges. Stops after the first vanishing
    /// minor, which is included.
    pub fn leading_minors(&self) -> Vec<Scalar> {
        if let Some(ints) = self.entries.iter().map(Scalar::as_integer).collect::<Option<Vec<_>>>() {
            return bareiss_minors(self.order, ints).into_iter().map(Scalar::from_bigint).collect();
        }
        let (polys, scales) = self.cleared_rows();
        let (ints, factors) = integer_rows(self.order, &polys);
        let mut scale = TPoly::one();
        let mut factor = BigInt::from(1);
        bareiss_minors(self.order, ints)
            .into_iter()
            .zip(factors)
            .map(|(m, f)| {
                factor *= f;
                from_zpoly(m, &factor)
            })
            .zip(scales)
            .map(|(m, s)| {
                scale = &scale * &s;
                Scalar::from_tpoly(m).checked_div(&Scalar::from_tpoly(scale.clone())).expect("nonzero")
            })
            .collect()
    }

    /// Rows scaled by the lcm of their denominators, with those lcms.
    fn cleared_rows(&self) -> (Vec<TPoly>, Vec<TPoly>) {
        let n = self.order;
        let mut polys = Vec::with_capacity(n * n);
        let mut scales = Vec::with_capacity(n);
        for i in 0..n {
            let row = &self.entries[i * n..(i + 1) * n];
            let lcm = row.iter().fold(TPoly::one(), |acc, e| {
                let d = e.denominator();
                let g = acc.gcd(&d);
                (&acc * &d).exact_div(&g).expect("gcd divides")
            });
            for e in row {
                let q = lcm.exact_div(&e.denominator()).expect("lcm is a multiple");
                polys.push(&e.numerator() * &q);
            }
            scales.push(lcm);
        }
        (polys, scales)
    }

    /// Fraction-free (Bareiss) elimination, available when every entry is an
    /// integer or a polynomial in `t`.
    pub fn det_fraction_free(&self) -> Option<Scalar> {
        if let Some(ints) = self.entries.iter().map(Scalar::as_integer).collect::<Option<Vec<_>>>() {
            return Some(Scalar::from_bigint(bareiss(self.order, ints)));
        }
        let polys = self.entries.iter().map(Scalar::as_tpoly).collect::<Option<Vec<_>>>()?;
        Some(Scalar::from_tpoly(poly_det(self.order, &polys)))
    }

    /// Gaussian elimination over the coefficient field, pivoting on the first
    /// nonzero entry of each column.
    pub fn det_field(&self) -> Scalar {
        let n = self.order;
        let mut a = self.rows();
        let mut det = Scalar::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
                return Scalar::zero();
            };
            if p != k {
                a.swap(p, k);
                det = -det;
            }
            let pivot_inv = a[k][k].inv().unwrap();
            det *= &a[k][k];
            let (top, bottom) = a.split_at_mut(k + 1);
            let pivot_row = &top[k];
            for row in bottom.iter_mut() {
                if row[k].is_zero() {
                    continue;
                }
                let factor = &row[k] * &pivot_inv;
                for j in k + 1..n {
                    if !pivot_row[j].is_zero() {
                        row[j] -= &(&factor * &pivot_row[j]);
                    }
                }
            }
        }
        det
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// An integral domain with exact division, as Bareiss elimination needs.
trait BareissRing: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn neg(&self) -> Self;
    fn mul_sub(&self, a: &Self, b: &Self, c: &Self) -> Self;
    fn div_exact(&self, d: &Self) -> Self;
}

impl BareissRing for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn neg(&self) -> Self {
        -self
    }
    /// `self * a - b * c`
    fn mul_sub(&self, a: &Self, b: &Self, c: &Self) -> Self {
        self * a - b * c
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
}

/// Determinant of a polynomial matrix via Bareiss over `Z[t]`.
fn poly_det(n: usize, polys: &[TPoly]) -> TPoly {
    let (ints, factors) = integer_rows(n, polys);
    let divisor = factors.into_iter().fold(BigInt::from(1), |acc, f| acc * f);
    from_zpoly(bareiss(n, ints), &divisor)
}

fn bareiss<R: BareissRing>(n: usize, entries: Vec<R>) -> R {
    if n == 0 {
        return R::one();
    }
    let mut a: Vec<Vec<R>> = entries.chunks(n).map(<[R]>::to_vec).collect();
    let mut negate = false;
    let mut prev = R::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return R::zero();
            };
            a.swap(p, k);
            negate = !negate;
        }
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in bottom.iter_mut() {
            for j in k + 1..n {
                row[j] = row[j].mul_sub(&pivot_row[k], &row[k], &pivot_row[j]).div_exact(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        d.neg()
    } else {
        d
    }
}

/// Polynomial in `t` with integer coefficients, ascending, trimmed.
#[derive(Clone, Debug, PartialEq)]
struct ZPoly(Vec<BigInt>);

impl ZPoly {
    fn trim(mut v: Vec<BigInt>) -> Self {
        while v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
        ZPoly(v)
    }

    fn mul(&self, rhs: &ZPoly) -> ZPoly {
        if self.0.is_empty() || rhs.0.is_empty() {
            return ZPoly(Vec::new());
        }
        let mut out = vec![<BigInt as Zero>::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if Zero::is_zero(a) {
                continue;
            }
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ZPoly::trim(out)
    }

    fn sub(&self, rhs: &ZPoly) -> ZPoly {
        let len = self.0.len().max(rhs.0.len());
        let out = (0..len)
            .map(|i| {
                let a = self.0.get(i).cloned().unwrap_or_default();
                match rhs.0.get(i) {
                    Some(b) => a - b,
                    None => a,
                }
            })
            .collect();
        ZPoly::trim(out)
    }

    /// Quotient of a division known to be exact in `Z[t]`.
    fn exact_div(&self, d: &ZPoly) -> ZPoly {
        let dl = d.0.len();
        let lead = d.0.last().expect("nonzero divisor");
        if self.0.len() < dl {
            assert!(self.0.is_empty(), "inexact division");
            return ZPoly(Vec::new());
        }
        let mut r = self.0.clone();
        let mut q = vec![<BigInt as Zero>::zero(); r.len() - dl + 1];
        for i in (0..q.len()).rev() {
            let top = &r[i + dl - 1];
            if Zero::is_zero(top) {
                continue;
            }
            let c = top / lead;
            for (j, dj) in d.0.iter().enumerate() {
                r[i + j] -= &c * dj;
            }
            q[i] = c;
        }
        debug_assert!(r.iter().all(Zero::is_zero), "inexact division");
        ZPoly::trim(q)
    }
}

impl BareissRing for ZPoly {
    fn zero() -> Self {
        ZPoly(Vec::new())
    }
    fn one() -> Self {
        ZPoly(vec![BigInt::from(1)])
    }
    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    fn neg(&self) -> Self {
        ZPoly(self.0.iter().map(|c| -c).collect())
    }
    fn mul_sub(&self, a: &Self, b: &Self, c: &Self) -> Self {
        self.mul(a).sub(&b.mul(c))
    }
    fn div_exact(&self, d: &Self) -> Self {
        self.exact_div(d)
    }
}

/// Scales each row of polynomials to integer coefficients; returns the
/// integer rows and the scale factor of each row.
fn integer_rows(n: usize, polys: &[TPoly]) -> (Vec<ZPoly>, Vec<BigInt>) {
    use num_integer::Integer;
    let mut out = Vec::with_capacity(n * n);
    let mut factors = Vec::with_capacity(n);
    for row in polys.chunks(n.max(1)).take(n) {
        let l = row
            .iter()
            .flat_map(|p| p.coeffs().iter().map(|c| c.denom().clone()))
            .fold(BigInt::from(1), |acc, d| acc.lcm(&d));
        for p in row {
            out.push(ZPoly::trim(p.coeffs().iter().map(|c| (c * &l).to_integer()).collect()));
        }
        factors.push(l);
    }
    (out, factors)
}

fn from_zpoly(p: ZPoly, divisor: &BigInt) -> TPoly {
    use num_rational::BigRational;
    TPoly::from_coeffs(p.0.into_iter().map(|c| BigRational::new(c, divisor.clone())).collect())
}

fn bareiss_minors<R: BareissRing>(n: usize, entries: Vec<R>) -> Vec<R> {
    if n == 0 {
        return Vec::new();
    }
    let mut a: Vec<Vec<R>> = entries.chunks(n).map(<[R]>::to_vec).collect();
    let mut minors = vec![a[0][0].clone()];
    let mut prev = R::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            break;
        }
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in bottom.iter_mut() {
            for j in k + 1..n {
                row[j] = row[j].mul_sub(&pivot_row[k], &row[k], &pivot_row[j]).div_exact(&prev);
            }
        }
        prev = a[k][k].clone();
        minors.push(a[k + 1][k + 1].clone());
    }
    minors
}
