//! Singular DP-reduction on minimally unsatisfiable clause-sets: clause-set
//! representation, exact oracles, reduction engines with diagnostics,
//! isomorphism and confluence classification, and instance generators.

pub mod classify;
pub mod clause;
pub mod dimacs;
pub mod dp;
pub mod error;
pub mod iso;
pub mod oracle;
pub mod suites;

pub use clause::{resolvent, Clause, ClauseSet, Degrees, Literal, RefinementVerdict, Variable};
pub use dimacs::{dimacs_hash, emit_dimacs, parse_dimacs};
pub use error::{Error, Result};
pub use oracle::{Assignment, MinUnsat, MuVerdict, Oracle, Saturation};
