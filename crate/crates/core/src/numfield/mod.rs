//! Algebraic numbers: certified root isolation, number rings with a
//! tracked embedding, splitting fields and exact linear algebra over them.

mod field;
mod isolate;
mod linsolve;
mod lll;
mod splitting;

pub use field::{AlgNum, FieldCtx, FieldError, InvError, Split};
pub use isolate::{isolate_roots, rational_roots, refine_root};
pub use linsolve::{
    interval_prefilter, linear_solve, linear_solve_tracked, prefilter_escalating, verify_inconsistency,
    verify_solution, ExactField, Inconsistency, LinSolveOutcome, Prefilter,
};
pub use lll::{integer_relation, lll_reduce};
pub use splitting::{roots_of, roots_of_capped, sum_over_roots, SplittingError, DEFAULT_DEGREE_CAP};
