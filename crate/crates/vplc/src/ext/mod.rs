//! Ext-algebras: finite recognizers for visibly pushdown languages, their
//! translations to and from DVPAs, syntactic minimization, and the monoid
//! structure theory the classifier builds on.

pub mod algebra;
pub mod dvpa_bridge;
pub mod green;
pub mod nesting;
pub mod stair;
pub mod syntactic;

pub use algebra::{ExtAlgebra, ExtKernel, Interner, OElem, RElem};
pub use dvpa_bridge::{close_o_monoid, dvpa_to_ext, ext_to_dvpa};
pub use green::{
    all_subgroups_solvable, cycle_of, green_relations, idempotent_power, is_solvable_group,
    maximal_subgroup, o_f_reachable, o_idempotents, r_f_reachable, Cycle, GreenO,
};
pub use nesting::nesting_depth;
pub use stair::{eval_psi_apply, eval_psi_vec, stair_factorize, Stair};
pub use syntactic::{syntactic_quotient, Syntactic};
