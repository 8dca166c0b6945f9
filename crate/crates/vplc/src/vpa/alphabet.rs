//! Visibly pushdown alphabets and words.
//!
//! A visibly pushdown alphabet partitions its symbols into calls (push),
//! internals (no stack action) and returns (pop). Words are stored as indices
//! into the alphabet's symbol table; `Word` is an alias, not a newtype, so the
//! usual `Vec` machinery applies.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};

pub type Sym = u32;
pub type Word = Vec<Sym>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymClass {
    Call,
    Int,
    Ret,
}

/// Symbol table with the call/int/ret partition.
///
/// Construction sorts each class lexicographically and numbers symbols
/// call-block first, then internals, then returns; symbols added later (for
/// marked extensions) keep that base numbering stable and are appended at the
/// end. All canonical enumeration orders in this crate derive from the
/// resulting index order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VpAlphabet {
    names: Vec<String>,
    classes: Vec<SymClass>,
    lookup: BTreeMap<String, Sym>,
}

impl VpAlphabet {
    pub fn new(call: &[&str], int: &[&str], ret: &[&str]) -> Result<Self> {
        Self::from_owned(
            call.iter().map(|s| s.to_string()).collect(),
            int.iter().map(|s| s.to_string()).collect(),
            ret.iter().map(|s| s.to_string()).collect(),
        )
    }

    pub fn from_owned(
        mut call: Vec<String>,
        mut int: Vec<String>,
        mut ret: Vec<String>,
    ) -> Result<Self> {
        call.sort();
        int.sort();
        ret.sort();
        let mut a = VpAlphabet {
            names: Vec::new(),
            classes: Vec::new(),
            lookup: BTreeMap::new(),
        };
        for (list, class) in [
            (call, SymClass::Call),
            (int, SymClass::Int),
            (ret, SymClass::Ret),
        ] {
            for name in list {
                a.push_symbol(name, class)?;
            }
        }
        if a.names.is_empty() {
            return Err(Error::invalid("alphabet must be non-empty"));
        }
        Ok(a)
    }

    /// Appends a new symbol; used by marked-alphabet constructions.
    pub fn push_symbol(&mut self, name: String, class: SymClass) -> Result<Sym> {
        if name.is_empty() || name.chars().any(char::is_whitespace) {
            return Err(Error::invalid(format!(
                "symbol {name:?} must be non-empty and whitespace-free"
            )));
        }
        if self.lookup.contains_key(&name) {
            return Err(Error::invalid(format!("duplicate symbol {name:?}")));
        }
        let id = self.names.len() as Sym;
        self.lookup.insert(name.clone(), id);
        self.names.push(name);
        self.classes.push(class);
        Ok(id)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn class(&self, s: Sym) -> SymClass {
        self.classes[s as usize]
    }

    pub fn name(&self, s: Sym) -> &str {
        &self.names[s as usize]
    }

    pub fn sym(&self, name: &str) -> Option<Sym> {
        self.lookup.get(name).copied()
    }

    pub fn symbols(&self) -> impl Iterator<Item = Sym> + '_ {
        (0..self.names.len() as Sym).map(|s| s)
    }

    pub fn of_class(&self, class: SymClass) -> Vec<Sym> {
        self.symbols().filter(|&s| self.class(s) == class).collect()
    }

    pub fn calls(&self) -> Vec<Sym> {
        self.of_class(SymClass::Call)
    }

    pub fn internals(&self) -> Vec<Sym> {
        self.of_class(SymClass::Int)
    }

    pub fn returns(&self) -> Vec<Sym> {
        self.of_class(SymClass::Ret)
    }

    /// Names per class, in index order (used by the JSON container).
    pub fn names_of_class(&self, class: SymClass) -> Vec<String> {
        self.symbols()
            .filter(|&s| self.class(s) == class)
            .map(|s| self.name(s).to_string())
            .collect()
    }

    /// Height contribution of one symbol: +1 call, 0 internal, -1 return.
    pub fn height_step(&self, s: Sym) -> i64 {
        match self.class(s) {
            SymClass::Call => 1,
            SymClass::Int => 0,
            SymClass::Ret => -1,
        }
    }

    /// The height morphism: number of calls minus number of returns.
    pub fn delta_height(&self, w: &[Sym]) -> i64 {
        w.iter().map(|&s| self.height_step(s)).sum()
    }

    /// A word is well-matched when its height is 0 and no prefix dips below 0.
    pub fn is_well_matched(&self, w: &[Sym]) -> bool {
        let mut h: i64 = 0;
        for &s in w {
            h += self.height_step(s);
            if h < 0 {
                return false;
            }
        }
        h == 0
    }

    /// Parses a whitespace-separated token string into a word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        text.split_whitespace()
            .map(|tok| {
                self.sym(tok)
                    .ok_or_else(|| Error::invalid(format!("unknown symbol {tok:?}")))
            })
            .collect()
    }

    pub fn format_word(&self, w: &[Sym]) -> String {
        let mut out = String::new();
        for (i, &s) in w.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{}", self.name(s));
        }
        out
    }

    pub fn word_names(&self, w: &[Sym]) -> Vec<String> {
        w.iter().map(|&s| self.name(s).to_string()).collect()
    }

    /// Length of the maximal well-matched prefix of `w`.
    pub fn max_well_matched_prefix(&self, w: &[Sym]) -> usize {
        let mut h: i64 = 0;
        let mut best = 0;
        for (i, &s) in w.iter().enumerate() {
            h += self.height_step(s);
            if h < 0 {
                break;
            }
            if h == 0 {
                best = i + 1;
            }
        }
        best
    }

    /// Length of the maximal well-matched suffix of `w`.
    pub fn max_well_matched_suffix(&self, w: &[Sym]) -> usize {
        // Scan right to left tracking height measured from the end:
        // a suffix is well-matched iff its reversed height never rises above 0
        // and ends at 0 (mirror of the prefix scan).
        let mut h: i64 = 0;
        let mut best = 0;
        for (i, &s) in w.iter().rev().enumerate() {
            h += self.height_step(s);
            if h > 0 {
                break;
            }
            if h == 0 {
                best = i + 1;
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> VpAlphabet {
        VpAlphabet::new(&["a"], &["c"], &["b"]).unwrap()
    }

    #[test]
    fn classes_and_order() {
        let a = ab();
        assert_eq!(a.len(), 3);
        assert_eq!(a.name(0), "a");
        assert_eq!(a.name(1), "c");
        assert_eq!(a.name(2), "b");
        assert_eq!(a.class(0), SymClass::Call);
        assert_eq!(a.class(2), SymClass::Ret);
    }

    #[test]
    fn heights() {
        let a = ab();
        let w = a.parse_word("a c a b b").unwrap();
        assert_eq!(a.delta_height(&w), 0);
        assert!(a.is_well_matched(&w));
        let w = a.parse_word("b a").unwrap();
        assert_eq!(a.delta_height(&w), 0);
        assert!(!a.is_well_matched(&w)); // dips below zero
        assert!(a.is_well_matched(&[]));
    }

    #[test]
    fn matched_affixes() {
        let a = ab();
        let w = a.parse_word("a b a c").unwrap();
        assert_eq!(a.max_well_matched_prefix(&w), 2);
        let w = a.parse_word("a c b").unwrap();
        assert_eq!(a.max_well_matched_prefix(&w), 3);
        assert_eq!(a.max_well_matched_suffix(&w), 3);
        let w = a.parse_word("a c").unwrap();
        assert_eq!(a.max_well_matched_prefix(&w), 0);
        assert_eq!(a.max_well_matched_suffix(&w), 1);
        let w = a.parse_word("b a").unwrap();
        assert_eq!(a.max_well_matched_prefix(&w), 0);
        assert_eq!(a.max_well_matched_suffix(&w), 0);
        let w = a.parse_word("a a b b").unwrap();
        assert_eq!(a.max_well_matched_suffix(&w), 4);
    }

    #[test]
    fn rejects_bad_symbols() {
        assert!(VpAlphabet::new(&["a", "a"], &[], &[]).is_err());
        assert!(VpAlphabet::new(&["x y"], &[], &[]).is_err());
        assert!(VpAlphabet::new(&[], &[], &[]).is_err());
    }
}
