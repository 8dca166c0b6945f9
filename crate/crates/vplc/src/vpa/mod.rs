//! Visibly pushdown machinery: alphabets, words, contexts, automata in
//! deterministic, nondeterministic, grammar, and counter form, plus
//! canonical enumeration.

pub mod alphabet;
pub mod context;
pub mod dvpa;
pub mod enumerate;
pub mod nvpa;
pub mod vca;
pub mod vvpg;

pub use alphabet::{Sym, SymClass, VpAlphabet, Word};
pub use context::Context;
pub use dvpa::{Dvpa, DvpaBuilder, RunOutcome, State, StackSym, BOTTOM, BOTTOM_NAME};
pub use nvpa::Nvpa;
pub use vca::Vca;
pub use vvpg::{NtId, Production, Vvpg};
