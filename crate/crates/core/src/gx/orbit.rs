//! Iterating the transformation until a state repeats.

use std::fmt;

use serde::Serialize;

use super::chain::FactorChain;
use super::form::QuadFE;
use super::transform::{apply_t, StepKind, TStep};
use crate::error::{CanonicalizeError, Error, Result};
use crate::exactalg::Scalar;
use crate::hankel::det_sequence;

pub const DEFAULT_MAX_STEPS: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum OrbitOutcome {
    /// `states[end] == states[start]`. `prefix` leads from the initial state
    /// to `states[start]`, `recurrence` from `states[start]` back to itself.
    Cycle { start: usize, end: usize, prefix: FactorChain, recurrence: FactorChain },
    NoCycle { steps: usize },
    /// The transformation hit a rational series at step `step`.
    RationalTerminal { step: usize, reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    pub index: usize,
    pub kinds: Vec<StepKind>,
    pub from: String,
    pub to: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intermediate: Option<String>,
    pub relation: String,
    pub chain: FactorChain,
    pub fe: QuadFE,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitTrace {
    pub states: Vec<QuadFE>,
    pub steps: Vec<TStep>,
    pub outcome: OrbitOutcome,
}

pub fn orbit(fe: &QuadFE, max_steps: usize) -> Result<OrbitTrace> {
    let mut states = vec![fe.clone()];
    let mut steps: Vec<TStep> = Vec::new();
    for i in 1..=max_steps {
        let step = match apply_t(states.last().unwrap()) {
            Ok(s) => s,
            Err(Error::Canonicalize(e @ (CanonicalizeError::ZeroSolution | CanonicalizeError::Linear))) => {
                let outcome = OrbitOutcome::RationalTerminal { step: i, reason: e.to_string() };
                return Ok(OrbitTrace { states, steps, outcome });
            }
            Err(e) => return Err(e),
        };
        let next = step.fe.clone();
        steps.push(step);
        if let Some(start) = states.iter().position(|s| *s == next) {
            let prefix = compose(&steps[..start]);
            let recurrence = compose(&steps[start..]);
            states.push(next);
            let outcome = OrbitOutcome::Cycle { start, end: i, prefix, recurrence };
            return Ok(OrbitTrace { states, steps, outcome });
        }
        states.push(next);
    }
    Ok(OrbitTrace { states, steps, outcome: OrbitOutcome::NoCycle { steps: max_steps } })
}

fn compose(steps: &[TStep]) -> FactorChain {
    steps.iter().fold(FactorChain::identity(), |acc, s| acc.then(&s.chain))
}

impl OrbitTrace {
    pub fn initial(&self) -> &QuadFE {
        &self.states[0]
    }

    /// Chain from the initial state to `states[i]`.
    pub fn chain_to(&self, i: usize) -> FactorChain {
        compose(&self.steps[..i])
    }

    /// Runs [`chain_holds`] on every step; returns `(step index, n)` of the
    /// first failure.
    pub fn check_soundness(&self, n_max: usize) -> std::result::Result<(), (usize, usize)> {
        for (i, step) in self.steps.iter().enumerate() {
            chain_holds(&self.states[i], &step.fe, &step.chain, n_max).map_err(|n| (i + 1, n))?;
        }
        Ok(())
    }

    pub fn records(&self) -> Vec<StepRecord> {
        self.steps
            .iter()
            .enumerate()
            .map(|(i, s)| StepRecord {
                index: i + 1,
                kinds: s.kinds.clone(),
                from: self.states[i].to_string(),
                to: s.fe.to_string(),
                intermediate: s.intermediate.as_ref().map(ToString::to_string),
                relation: s.relation.to_string(),
                chain: s.chain.clone(),
                fe: s.fe.clone(),
            })
            .collect()
    }

    /// `det H_n` of the initial series predicted from a cycle: the prefix
    /// chain, then the recurrence unrolled down to initial values computed
    /// from the series of the cycle's first state. `None` without a cycle.
    pub fn predicted_det(&self, n: usize) -> Option<Scalar> {
        let OrbitOutcome::Cycle { start, prefix, recurrence, .. } = &self.outcome else {
            return None;
        };
        if recurrence.delta == 0 {
            return None;
        }
        if n < prefix.delta {
            let f = self.states[0].series(2 * n);
            return Some(det_at(&f, n));
        }
        let g = self.states[*start].series(2 * recurrence.delta);
        let base = |m: usize| det_at(&g, m);
        Some(&prefix.multiplier(n) * &recurrence.unroll(n - prefix.delta, &base))
    }
}

/// Checks `det H_n(from) = chain(n) det H_(n - delta)(to)` for
/// `delta <= n <= n_max` by direct determinant evaluation. Returns the first
/// `n` where it fails.
pub fn chain_holds(from: &QuadFE, to: &QuadFE, chain: &FactorChain, n_max: usize) -> std::result::Result<(), usize> {
    if n_max < chain.delta {
        return Ok(());
    }
    let f = from.series(2 * n_max);
    let g = to.series(2 * (n_max - chain.delta));
    let df = det_sequence(&f, 0, n_max).expect("enough terms");
    let dg = det_sequence(&g, 0, n_max - chain.delta).expect("enough terms");
    let at = |d: &[Scalar], m: usize| if m == 0 { Scalar::one() } else { d[m - 1].clone() };
    for n in chain.delta.max(1)..=n_max {
        if at(&df, n) != &chain.multiplier(n) * &at(&dg, n - chain.delta) {
            return Err(n);
        }
    }
    Ok(())
}

fn det_at(terms: &[Scalar], n: usize) -> Scalar {
    if n == 0 {
        Scalar::one()
    } else {
        det_sequence(terms, 0, n).expect("enough terms")[n - 1].clone()
    }
}

impl Serialize for OrbitTrace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            initial: &'a QuadFE,
            formula: String,
            steps: Vec<StepRecord>,
            outcome: &'a OrbitOutcome,
        }
        Repr { initial: self.initial(), formula: self.initial().to_string(), steps: self.records(), outcome: &self.outcome }
            .serialize(s)
    }
}

impl fmt::Display for OrbitTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F0: {}", self.initial())?;
        for r in self.records() {
            let kinds: Vec<String> = r.kinds.iter().map(ToString::to_string).collect();
            writeln!(f, "T{} [{}]", r.index, kinds.join("+"))?;
            if let Some(mid) = &r.intermediate {
                writeln!(f, "  via  {mid}")?;
            }
            writeln!(f, "  F{}: {}", r.index, r.to)?;
            writeln!(f, "  {}", r.relation)?;
            writeln!(f, "  {}", r.chain)?;
        }
        match &self.outcome {
            OrbitOutcome::Cycle { start, end, prefix, recurrence } => {
                writeln!(f, "cycle: F{end} = F{start}")?;
                if *start > 0 {
                    writeln!(f, "prefix: {prefix}")?;
                }
                write!(f, "recurrence: {recurrence}")
            }
            OrbitOutcome::NoCycle { steps } => write!(f, "no cycle within {steps} steps"),
            OrbitOutcome::RationalTerminal { step, reason } => write!(f, "rational terminal at step {step}: {reason}"),
        }
    }
}
