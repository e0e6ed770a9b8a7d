//! Shifted Hankel matrices `H_n^k = (a_{i+j+k-2})` and their exact determinants.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::Scalar;
use crate::matrix::ExactMatrix;

/// Order-`n` Hankel matrix of `terms` shifted by `shift`.
#[derive(Clone, Copy, Debug)]
pub struct HankelQuery<'a> {
    pub terms: &'a [Scalar],
    pub shift: usize,
    pub order: usize,
}

impl<'a> HankelQuery<'a> {
    pub fn new(terms: &'a [Scalar], shift: usize, order: usize) -> Self {
        HankelQuery { terms, shift, order }
    }

    /// Number of sequence terms the matrix reads.
    pub fn terms_needed(&self) -> usize {
        if self.order == 0 {
            0
        } else {
            2 * self.order + self.shift - 1
        }
    }
}

pub fn build(query: &HankelQuery<'_>) -> Result<ExactMatrix> {
    let needed = query.terms_needed();
    if query.terms.len() < needed {
        return Err(Error::InsufficientTerms { needed, available: query.terms.len() });
    }
    Ok(ExactMatrix::from_fn(query.order, |i, j| query.terms[i + j + query.shift].clone()))
}

pub fn det_exact(m: &ExactMatrix) -> Scalar {
    m.det()
}

/// `[det H_1^k, ..., det H_{n_max}^k]`.
///
/// The leading minors of the largest matrix are read off one elimination;
/// orders past the first vanishing minor are computed one by one.
pub fn det_sequence(terms: &[Scalar], shift: usize, n_max: usize) -> Result<Vec<Scalar>> {
    let full = build(&HankelQuery::new(terms, shift, n_max))?;
    let mut dets = full.leading_minors();
    for n in dets.len() + 1..=n_max {
        dets.push(build(&HankelQuery::new(terms, shift, n))?.det());
    }
    Ok(dets)
}

/// One row of a determinant table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetRow {
    pub n: usize,
    pub det: Scalar,
}

pub fn det_table(terms: &[Scalar], shift: usize, n_max: usize) -> Result<Vec<DetRow>> {
    Ok(det_sequence(terms, shift, n_max)?
        .into_iter()
        .enumerate()
        .map(|(i, det)| DetRow { n: i + 1, det })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Period {
    pub period: usize,
    pub offset: usize,
}

/// Earliest offset, then smallest period `p <= max_period`, such that
/// `seq[i] == seq[i + p]` for every `i >= offset`, certified by at least `2p`
/// comparisons. `None` when the available terms cannot certify any period.
pub fn detect_period(seq: &[Scalar], max_period: usize) -> Option<Period> {
    let len = seq.len();
    for offset in 0..len {
        for period in 1..=max_period {
            // comparisons available: len - offset - period >= 2 * period
            if offset + 3 * period > len {
                break;
            }
            if (offset..len - period).all(|i| seq[i] == seq[i + period]) {
                return Some(Period { period, offset });
            }
        }
    }
    None
}
