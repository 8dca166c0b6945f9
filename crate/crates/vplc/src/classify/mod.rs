//! The complexity classifier: sorts L(A) into AC0, MOD_m-hard, TC0-hard,
//! or constant-depth equivalent to a finite disjoint union of intermediate
//! languages, with checkable witnesses in every non-AC0 case.

pub mod decide;
pub mod psets;

pub use decide::{
    compute_z, decide_ls, decide_quasi_aperiodic, decide_weak_ls, Ls, LsWitness, Qa, QaWitness,
    WeakLs, WeakLsWitness,
};
pub use psets::{k_up_pset, nonempty_classes, ContextGrammar, PSets};
