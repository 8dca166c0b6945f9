//! Visibly pushdown languages through their extended-algebra lens.
//!
//! The crate builds up from visibly pushdown machines ([`vpa`]) through
//! finite algebraic recognizers ([`ext`]), Parikh/semilinear arithmetic
//! ([`parikh`]) and the marked auxiliary recognizers ([`marked`]) to the
//! complexity classifier ([`classify`]), which sorts a deterministic VPA's
//! language into AC0 / MOD-hard / TC0-hard / intermediate with checkable
//! witnesses.

pub mod budget;
pub mod classify;
pub mod error;
pub mod ext;
pub mod marked;
pub mod parikh;
pub mod vpa;

pub use budget::Budget;
pub use error::{Error, Result};
