//! Continued-fraction transformations of quadratic functional equations and
//! the Hankel determinant recurrences they produce.

mod chain;
mod form;
mod orbit;
mod transform;

pub use chain::{Factor, FactorChain};
pub use form::{fe_equal, fe_from_json, QuadFE, QuadraticForm, ULSplit};
pub use orbit::{chain_holds, orbit, OrbitOutcome, OrbitTrace, StepRecord, DEFAULT_MAX_STEPS};
pub use transform::{apply_t, normalize_const, shift_out, transform_quadratic, Laurent, Relation, Step, StepKind, TStep};
