//! Resource budgets.
//!
//! All potentially explosive computations (monoid closures, word
//! enumerations, witness searches, fixpoint solvers) take a [`Budget`] and
//! fail with `Error::BudgetExceeded` instead of running away. Budgets are
//! plain data so callers can tighten or relax them per invocation.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Max number of elements materialized by a closure (monoids, subset
    /// constructions, grammar nonterminals, fixpoint variables).
    pub closure: usize,
    /// Max number of words produced by an enumeration.
    pub enumeration: usize,
    /// Max number of candidates examined by a witness search.
    pub search: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            closure: 200_000,
            enumeration: 1_000_000,
            search: 2_000_000,
        }
    }
}

impl Budget {
    pub fn check_closure(&self, stage: &'static str, current: usize) -> Result<()> {
        if current > self.closure {
            Err(Error::budget(stage, format!("{current} elements"), self.closure))
        } else {
            Ok(())
        }
    }

    pub fn check_enumeration(&self, stage: &'static str, current: usize) -> Result<()> {
        if current > self.enumeration {
            Err(Error::budget(stage, format!("{current} words"), self.enumeration))
        } else {
            Ok(())
        }
    }

    pub fn check_search(&self, stage: &'static str, current: usize) -> Result<()> {
        if current > self.search {
            Err(Error::budget(stage, format!("{current} candidates"), self.search))
        } else {
            Ok(())
        }
    }
}
