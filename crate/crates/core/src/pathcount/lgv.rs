//! Brute-force enumeration of nonintersecting path tuples for an
//! initial/terminal configuration.
//!
//! Two paths intersect when they share a vertex (a step end point, or the
//! start point). Passing through the interior of another path's horizontal
//! step is not an intersection.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::PathParams;
use crate::error::{Error, Result};
use crate::exactalg::Scalar;

pub type Point = (i64, i64);

/// Default cap on search nodes for [`lgv_signed_sum`].
pub const DEFAULT_BUDGET: u64 = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Step {
    U,
    D,
    H,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticePath {
    pub start: Point,
    pub steps: Vec<Step>,
}

impl LatticePath {
    /// Start point followed by every step end point.
    pub fn vertices(&self, ell: usize) -> Vec<Point> {
        let mut p = self.start;
        let mut out = vec![p];
        for s in &self.steps {
            p = match s {
                Step::U => (p.0 + 1, p.1 + 1),
                Step::D => (p.0 + 1, p.1 - 1),
                Step::H => (p.0 + ell as i64, p.1),
            };
            out.push(p);
        }
        out
    }

    pub fn h_steps(&self) -> usize {
        self.steps.iter().filter(|&&s| s == Step::H).count()
    }

    pub fn weight(&self, t: &Scalar) -> Scalar {
        t.pow(self.h_steps() as i64)
    }
}

/// Initial points `(x_k, y_k)` and terminal points `(x'_k, y'_k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ItConfigRepr")]
pub struct ItConfig {
    initials: Vec<Point>,
    terminals: Vec<Point>,
}

#[derive(Deserialize)]
struct ItConfigRepr {
    initials: Vec<Point>,
    terminals: Vec<Point>,
}

impl TryFrom<ItConfigRepr> for ItConfig {
    type Error = Error;
    fn try_from(r: ItConfigRepr) -> Result<Self> {
        ItConfig::new(r.initials, r.terminals)
    }
}

impl ItConfig {
    /// Requires `x_{k+1} <= x_k <= 0`, `0 <= y_k <= y_{k+1}`,
    /// `0 <= x'_k <= x'_{k+1}`, `0 <= y'_k <= y'_{k+1}` and distinct points in
    /// each list.
    pub fn new(initials: Vec<Point>, terminals: Vec<Point>) -> Result<Self> {
        if initials.len() != terminals.len() {
            return Err(Error::InvalidConfig(format!(
                "{} initial points but {} terminal points",
                initials.len(),
                terminals.len()
            )));
        }
        for (k, &(x, y)) in initials.iter().enumerate() {
            if x > 0 || y < 0 {
                return Err(Error::InvalidConfig(format!("initial point {k} ({x},{y}) needs x <= 0 <= y")));
            }
        }
        for (k, &(x, y)) in terminals.iter().enumerate() {
            if x < 0 || y < 0 {
                return Err(Error::InvalidConfig(format!("terminal point {k} ({x},{y}) needs x, y >= 0")));
            }
        }
        for k in 1..initials.len() {
            let (a, b) = (initials[k - 1], initials[k]);
            if b.0 > a.0 || b.1 < a.1 {
                return Err(Error::InvalidConfig(format!("initial points {} and {k} out of order", k - 1)));
            }
            let (a, b) = (terminals[k - 1], terminals[k]);
            if b.0 < a.0 || b.1 < a.1 {
                return Err(Error::InvalidConfig(format!("terminal points {} and {k} out of order", k - 1)));
            }
        }
        for list in [&initials, &terminals] {
            for i in 0..list.len() {
                if list[i + 1..].contains(&list[i]) {
                    return Err(Error::InvalidConfig(format!("repeated point {:?}", list[i])));
                }
            }
        }
        Ok(ItConfig { initials, terminals })
    }

    /// Initial points `(-i, 0)` and terminal points `(i + shift, 0)`, `i = 0..n`.
    /// The path-weight matrix of this configuration is the shifted Hankel
    /// matrix of the path sequence.
    pub fn hankel(n: usize, shift: usize) -> Self {
        let initials = (0..n as i64).map(|i| (-i, 0)).collect();
        let terminals = (0..n as i64).map(|i| (i + shift as i64, 0)).collect();
        ItConfig::new(initials, terminals).expect("valid by construction")
    }

    pub fn order(&self) -> usize {
        self.initials.len()
    }

    pub fn initials(&self) -> &[Point] {
        &self.initials
    }

    pub fn terminals(&self) -> &[Point] {
        &self.terminals
    }

    /// The matrix of path weights from initial `i` to terminal `j`.
    pub fn weight_matrix(&self, params: &PathParams) -> crate::matrix::ExactMatrix {
        crate::matrix::ExactMatrix::from_fn(self.order(), |i, j| {
            super::paths_weight(self.initials[i], self.terminals[j], params)
        })
    }
}

/// One tuple: path `i` runs from initial `i` to terminal `perm[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignedTuple {
    pub perm: Vec<usize>,
    pub sign: i8,
    pub paths: Vec<LatticePath>,
}

impl SignedTuple {
    pub fn signed_weight(&self, t: &Scalar) -> Scalar {
        let w: Scalar = self.paths.iter().map(|p| p.weight(t)).product();
        if self.sign < 0 {
            -w
        } else {
            w
        }
    }
}

struct Grid {
    xmin: i64,
    height: i64,
    words: usize,
}

impl Grid {
    fn bit(&self, (x, y): Point) -> usize {
        ((x - self.xmin) * self.height + y) as usize
    }
}

struct PathRec {
    steps: Vec<Step>,
    mask: Vec<u64>,
    h: usize,
}

fn disjoint(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & y == 0)
}

struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    fn spend(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            Err(Error::BudgetExceeded { budget: self.limit })
        } else {
            Ok(())
        }
    }
}

fn enumerate_paths(from: Point, to: Point, params: &PathParams, grid: &Grid, budget: &mut Budget) -> Result<Vec<PathRec>> {
    fn rec(
        at: Point,
        to: Point,
        params: &PathParams,
        grid: &Grid,
        budget: &mut Budget,
        steps: &mut Vec<Step>,
        mask: &mut Vec<u64>,
        h: usize,
        out: &mut Vec<PathRec>,
    ) -> Result<()> {
        budget.spend()?;
        let remaining = to.0 - at.0;
        if remaining == 0 {
            if at.1 == to.1 {
                out.push(PathRec { steps: steps.clone(), mask: mask.clone(), h });
            }
            return Ok(());
        }
        let ell = params.ell() as i64;
        let mut moves = vec![(Step::U, (at.0 + 1, at.1 + 1)), (Step::D, (at.0 + 1, at.1 - 1))];
        if !params.t().is_zero() && ell >= 1 {
            moves.push((Step::H, (at.0 + ell, at.1)));
        }
        for (step, next) in moves {
            let left = to.0 - next.0;
            if next.1 < 0 || left < 0 || (next.1 - to.1).abs() > left {
                continue;
            }
            let b = grid.bit(next);
            mask[b / 64] |= 1 << (b % 64);
            steps.push(step);
            rec(next, to, params, grid, budget, steps, mask, h + usize::from(step == Step::H), out)?;
            steps.pop();
            mask[b / 64] &= !(1 << (b % 64));
        }
        Ok(())
    }
    let mut out = Vec::new();
    if to.0 < from.0 {
        return Ok(out);
    }
    let mut mask = vec![0u64; grid.words];
    let b = grid.bit(from);
    mask[b / 64] |= 1 << (b % 64);
    rec(from, to, params, grid, budget, &mut Vec::new(), &mut mask, 0, &mut out)?;
    Ok(out)
}

fn permutation_sign(perm: &[usize]) -> i8 {
    let mut inversions = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

/// Walks every nonintersecting tuple in deterministic order: permutations
/// lexicographically, then paths per slot in step-string order (U < D < H).
fn walk(
    config: &ItConfig,
    params: &PathParams,
    budget: u64,
    mut visit: impl FnMut(&[usize], i8, &[&PathRec]),
) -> Result<()> {
    let n = config.order();
    let mut budget = Budget { limit: budget, used: 0 };
    if n == 0 {
        visit(&[], 1, &[]);
        return Ok(());
    }
    let pts = config.initials.iter().chain(&config.terminals);
    let xmin = pts.clone().map(|p| p.0).min().unwrap();
    let xmax = pts.clone().map(|p| p.0).max().unwrap();
    let ymax = pts.map(|p| p.1).max().unwrap();
    let height = ymax + (xmax - xmin) / 2 + 2;
    let cells = ((xmax - xmin + 1) * height) as usize;
    let grid = Grid { xmin, height, words: cells.div_ceil(64) };

    let mut table: Vec<Vec<Vec<PathRec>>> = Vec::with_capacity(n);
    for &from in &config.initials {
        let mut row = Vec::with_capacity(n);
        for &to in &config.terminals {
            row.push(enumerate_paths(from, to, params, &grid, &mut budget)?);
        }
        table.push(row);
    }

    fn descend<'a>(
        i: usize,
        perm: &[usize],
        sign: i8,
        table: &'a [Vec<Vec<PathRec>>],
        used: &mut Vec<u64>,
        chosen: &mut Vec<&'a PathRec>,
        budget: &mut Budget,
        visit: &mut impl FnMut(&[usize], i8, &[&PathRec]),
    ) -> Result<()> {
        if i == perm.len() {
            visit(perm, sign, chosen);
            return Ok(());
        }
        for path in &table[i][perm[i]] {
            budget.spend()?;
            if !disjoint(used, &path.mask) {
                continue;
            }
            for (u, m) in used.iter_mut().zip(&path.mask) {
                *u |= m;
            }
            chosen.push(path);
            descend(i + 1, perm, sign, table, used, chosen, budget, visit)?;
            chosen.pop();
            for (u, m) in used.iter_mut().zip(&path.mask) {
                *u &= !m;
            }
        }
        Ok(())
    }

    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        if perm.iter().enumerate().all(|(i, &j)| !table[i][j].is_empty()) {
            let sign = permutation_sign(&perm);
            let mut used = vec![0u64; grid.words];
            let mut chosen = Vec::with_capacity(n);
            descend(0, &perm, sign, &table, &mut used, &mut chosen, &mut budget, &mut visit)?;
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(())
}

/// Sum of `sgn(σ) · weight` over all nonintersecting tuples of the
/// configuration. `budget` caps the number of search nodes.
pub fn lgv_signed_sum(config: &ItConfig, params: &PathParams, budget: u64) -> Result<Scalar> {
    // signed tuple counts grouped by total number of H steps
    let mut by_h: BTreeMap<usize, BigInt> = BTreeMap::new();
    walk(config, params, budget, |_, sign, paths| {
        let h: usize = paths.iter().map(|p| p.h).sum();
        let slot = by_h.entry(h).or_insert_with(BigInt::zero);
        if sign > 0 {
            *slot += 1;
        } else {
            *slot -= 1;
        }
    })?;
    Ok(by_h
        .into_iter()
        .map(|(h, c)| Scalar::from_bigint(c) * params.t().pow(h as i64))
        .sum())
}

/// The nonintersecting tuples themselves, in enumeration order.
pub fn lgv_tuples(config: &ItConfig, params: &PathParams, budget: u64) -> Result<Vec<SignedTuple>> {
    let mut out = Vec::new();
    walk(config, params, budget, |perm, sign, paths| {
        out.push(SignedTuple {
            perm: perm.to_vec(),
            sign,
            paths: paths
                .iter()
                .enumerate()
                .map(|(i, p)| LatticePath { start: config.initials[i], steps: p.steps.clone() })
                .collect(),
        });
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn motzkin(t: Scalar) -> PathParams {
        PathParams::new(1, t).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(ItConfig::new(vec![(0, 0), (1, 0)], vec![(0, 0), (1, 0)]).is_err());
        assert!(ItConfig::new(vec![(0, 0), (0, 0)], vec![(0, 0), (1, 0)]).is_err());
        assert!(ItConfig::new(vec![(0, 0)], vec![(0, 0), (1, 0)]).is_err());
        assert!(ItConfig::new(vec![(0, 1), (0, 0)], vec![(0, 0), (1, 0)]).is_err());
        assert!(ItConfig::new(vec![(0, 0), (-1, 1)], vec![(0, 0), (1, 1)]).is_ok());
    }

    #[test]
    fn point_path_only() {
        let c = ItConfig::new(vec![(0, 0)], vec![(0, 0)]).unwrap();
        assert_eq!(lgv_signed_sum(&c, &motzkin(Scalar::t()), DEFAULT_BUDGET).unwrap(), Scalar::one());
        let tuples = lgv_tuples(&c, &motzkin(Scalar::t()), DEFAULT_BUDGET).unwrap();
        assert_eq!(tuples.len(), 1);
        assert!(tuples[0].paths[0].steps.is_empty());
        assert_eq!(tuples[0].paths[0].vertices(1), vec![(0, 0)]);
    }

    #[test]
    fn single_nonintersecting_four_tuple() {
        let c = ItConfig::hankel(4, 0);
        let p = motzkin(Scalar::one());
        let tuples = lgv_tuples(&c, &p, DEFAULT_BUDGET).unwrap();
        assert_eq!(tuples.len(), 1);
        assert_eq!(tuples[0].perm, vec![0, 1, 2, 3]);
        // each path climbs then descends
        for (i, path) in tuples[0].paths.iter().enumerate() {
            let expect: Vec<Step> = std::iter::repeat_n(Step::U, i).chain(std::iter::repeat_n(Step::D, i)).collect();
            assert_eq!(path.steps, expect);
        }
        assert_eq!(lgv_signed_sum(&c, &p, DEFAULT_BUDGET).unwrap(), Scalar::one());
    }

    #[test]
    fn shifted_motzkin_pair() {
        let c = ItConfig::hankel(2, 1);
        let sum = lgv_signed_sum(&c, &motzkin(Scalar::t()), DEFAULT_BUDGET).unwrap();
        assert_eq!(sum, "(t-1)*(t+1)".parse().unwrap());
    }

    #[test]
    fn shifted_four_tuples_include_sample_weights() {
        let c = ItConfig::hankel(4, 1);
        let t = Scalar::t();
        let tuples = lgv_tuples(&c, &motzkin(t.clone()), DEFAULT_BUDGET).unwrap();
        let weights: Vec<Scalar> = tuples.iter().map(|tp| tp.signed_weight(&t)).collect();
        assert!(weights.contains(&t.pow(4)));
        assert!(weights.contains(&-t.pow(2)));
        let total: Scalar = weights.into_iter().sum();
        assert_eq!(total, "t^4-3*t^2+1".parse().unwrap());
    }

    #[test]
    fn crossing_inside_horizontal_step_is_allowed() {
        let a = LatticePath { start: (0, 0), steps: vec![Step::H] };
        assert_eq!(a.vertices(2), vec![(0, 0), (2, 0)]);
        let p = PathParams::new(2, Scalar::one()).unwrap();
        // (0,0)->(2,0) by H and (-1,0)->(1,0) by UD: they share no vertex ((1,0) lies inside H)
        let c = ItConfig::new(vec![(0, 0), (-1, 0)], vec![(1, 0), (2, 0)]).unwrap();
        let tuples = lgv_tuples(&c, &p, DEFAULT_BUDGET).unwrap();
        assert!(tuples.iter().any(|tp| tp.perm == vec![1, 0] && tp.paths[0].steps == vec![Step::H]));
    }

    #[test]
    fn budget_is_enforced() {
        let c = ItConfig::hankel(4, 1);
        assert_eq!(
            lgv_signed_sum(&c, &motzkin(Scalar::one()), 10),
            Err(Error::BudgetExceeded { budget: 10 })
        );
    }

    #[test]
    fn permutations_in_lexicographic_order() {
        let mut p = vec![0, 1, 2];
        let mut seen = vec![p.clone()];
        while next_permutation(&mut p) {
            seen.push(p.clone());
        }
        assert_eq!(seen, vec![vec![0, 1, 2], vec![0, 2, 1], vec![1, 0, 2], vec![1, 2, 0], vec![2, 0, 1], vec![2, 1, 0]]);
        assert_eq!(seen.iter().map(|q| permutation_sign(q)).collect::<Vec<_>>(), vec![1, -1, -1, 1, 1, -1]);
    }
}
