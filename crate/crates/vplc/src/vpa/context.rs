//! Contexts over a visibly pushdown alphabet.
//!
//! A context is a pair (u, v) with uv well-matched. Contexts compose inside
//! out: (u, v) ∘ (x, y) = (ux, yv), so applying the composite to a word w
//! yields u x w y v.

use super::alphabet::{VpAlphabet, Word};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Context {
    pub u: Word,
    pub v: Word,
}

impl Context {
    pub fn new(u: Word, v: Word) -> Self {
        Context { u, v }
    }

    pub fn empty() -> Self {
        Context {
            u: Vec::new(),
            v: Vec::new(),
        }
    }

    pub fn is_valid(&self, a: &VpAlphabet) -> bool {
        let mut uv = self.u.clone();
        uv.extend_from_slice(&self.v);
        a.is_well_matched(&uv)
    }

    /// Height of the hole: Δ(u) = −Δ(v) for a valid context.
    pub fn depth(&self, a: &VpAlphabet) -> i64 {
        a.delta_height(&self.u)
    }

    pub fn compose(&self, inner: &Context) -> Context {
        let mut u = self.u.clone();
        u.extend_from_slice(&inner.u);
        let mut v = inner.v.clone();
        v.extend_from_slice(&self.v);
        Context { u, v }
    }

    /// u w v as a single word.
    pub fn apply(&self, w: &[u32]) -> Word {
        let mut out = self.u.clone();
        out.extend_from_slice(w);
        out.extend_from_slice(&self.v);
        out
    }

    /// n-fold self-composition (u^n, v^n).
    pub fn power(&self, n: usize) -> Context {
        let mut acc = Context::empty();
        for _ in 0..n {
            acc = acc.compose(self);
        }
        acc
    }

    pub fn display(&self, a: &VpAlphabet) -> String {
        format!("({}, {})", a.format_word(&self.u), a.format_word(&self.v))
    }
}
