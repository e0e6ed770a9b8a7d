//! Weighted lattice paths with steps U = (1,1), D = (1,-1) and H = (ℓ,0),
//! where each H step carries weight `t` and paths stay weakly above the x-axis.

mod lgv;

pub use lgv::{lgv_signed_sum, lgv_tuples, ItConfig, LatticePath, Point, SignedTuple, Step, DEFAULT_BUDGET};

use crate::error::{Error, Result};
use crate::exactalg::Scalar;
use crate::matrix::ExactMatrix;

/// Step length ℓ of the horizontal step and its weight `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathParams {
    ell: usize,
    t: Scalar,
}

impl PathParams {
    /// `ell = 0` is only meaningful with `t = 0` (a zero-length weighted step
    /// would make every path set infinite), where it is the Dyck case.
    pub fn new(ell: usize, t: Scalar) -> Result<Self> {
        if ell == 0 && !t.is_zero() {
            return Err(Error::InvalidPathParams(format!(
                "ell = 0 requires t = 0 (got t = {t}): a zero-length step cannot carry weight"
            )));
        }
        Ok(PathParams { ell, t })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn t(&self) -> &Scalar {
        &self.t
    }

    /// Whether H steps contribute at all.
    fn has_h(&self) -> bool {
        !self.t.is_zero()
    }
}

/// `f(0..=n_max)` from `F = 1 + t x^ℓ F + x^2 F^2`.
pub fn f_series(params: &PathParams, n_max: usize) -> Vec<Scalar> {
    let mut f: Vec<Scalar> = Vec::with_capacity(n_max + 1);
    f.push(Scalar::one());
    for n in 1..=n_max {
        let mut v = Scalar::zero();
        if params.has_h() && n >= params.ell {
            v = params.t() * &f[n - params.ell];
        }
        for i in 0..n.saturating_sub(1) {
            let (a, b) = (&f[i], &f[n - 2 - i]);
            if !a.is_zero() && !b.is_zero() {
                v += &(a * b);
            }
        }
        f.push(v);
    }
    f
}

/// `f(0..=n_max)` straight from the path definition, by dynamic programming
/// over (abscissa, height). Independent of the functional equation.
pub fn f_dp_oracle(params: &PathParams, n_max: usize) -> Vec<Scalar> {
    // w[x][y]: weight of paths from (0,0) to (x,y); heights above n_max - x can never return
    let cap = |x: usize| x.min(n_max - x);
    let mut w: Vec<Vec<Scalar>> = Vec::with_capacity(n_max + 1);
    w.push(vec![Scalar::one()]);
    for x in 1..=n_max {
        let mut col = vec![Scalar::zero(); cap(x) + 1];
        for (y, cell) in col.iter_mut().enumerate() {
            let prev = &w[x - 1];
            if y >= 1 {
                if let Some(v) = prev.get(y - 1) {
                    *cell += v;
                }
            }
            if let Some(v) = prev.get(y + 1) {
                *cell += v;
            }
            if params.has_h() && params.ell >= 1 && x >= params.ell {
                if let Some(v) = w[x - params.ell].get(y) {
                    if !v.is_zero() {
                        *cell += &(params.t() * v);
                    }
                }
            }
        }
        w.push(col);
    }
    w.into_iter().map(|col| col[0].clone()).collect()
}

/// Total weight of the paths from `from` to `to` that never go below the axis.
pub fn paths_weight(from: Point, to: Point, params: &PathParams) -> Scalar {
    let (x0, y0) = from;
    let (x1, y1) = to;
    if y0 < 0 || y1 < 0 || x1 < x0 {
        return Scalar::zero();
    }
    let len = (x1 - x0) as usize;
    let ymax = (y0 as usize + len).min(y1 as usize + len);
    // w[dx][y]
    let mut w = vec![vec![Scalar::zero(); ymax + 2]; len + 1];
    if (y0 as usize) <= ymax {
        w[0][y0 as usize] = Scalar::one();
    }
    for dx in 1..=len {
        for y in 0..=ymax {
            let mut v = Scalar::zero();
            if y >= 1 {
                v += &w[dx - 1][y - 1];
            }
            v += &w[dx - 1][y + 1];
            if params.has_h() && params.ell >= 1 && dx >= params.ell && !w[dx - params.ell][y].is_zero() {
                v += &(params.t() * &w[dx - params.ell][y]);
            }
            w[dx][y] = v;
        }
    }
    w[len].get(y1 as usize).cloned().unwrap_or_else(Scalar::zero)
}

/// The matrix with first row and column all 1 and
/// `M[i][j] = M[i-1][j] + t M[i-1][j-1] + M[i][j-1]`.
pub fn delannoy_matrix(n: usize, t: &Scalar) -> ExactMatrix {
    let mut m = vec![vec![Scalar::one(); n]; n];
    for i in 1..n {
        for j in 1..n {
            m[i][j] = &(&m[i - 1][j] + &(t * &m[i - 1][j - 1])) + &m[i][j - 1];
        }
    }
    ExactMatrix::from_rows(m)
}
