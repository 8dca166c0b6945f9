//! Canonical enumeration of well-matched words and contexts.
//!
//! Order is length-lexicographic with symbols compared by their alphabet
//! index (calls < internals < returns, each block sorted by name). Witness
//! searches elsewhere rely on this order being deterministic.

use super::alphabet::{VpAlphabet, Word};
use super::context::Context;
use crate::budget::Budget;
use crate::error::Result;

/// All well-matched words of exactly `len` letters, length-lex order.
pub fn well_matched_of_length(
    a: &VpAlphabet,
    len: usize,
    budget: &Budget,
) -> Result<Vec<Word>> {
    let mut out = Vec::new();
    let mut visited = 0usize;
    let mut prefix: Word = Vec::with_capacity(len);
    descend(a, len, 0, &mut prefix, &mut out, &mut visited, budget)?;
    Ok(out)
}

/// All well-matched words with at most `max_len` letters, length-lex order.
pub fn well_matched_up_to(
    a: &VpAlphabet,
    max_len: usize,
    budget: &Budget,
) -> Result<Vec<Word>> {
    let mut out = Vec::new();
    for len in 0..=max_len {
        out.extend(well_matched_of_length(a, len, budget)?);
        budget.check_enumeration("well_matched_up_to", out.len())?;
    }
    Ok(out)
}

fn descend(
    a: &VpAlphabet,
    len: usize,
    height: i64,
    prefix: &mut Word,
    out: &mut Vec<Word>,
    visited: &mut usize,
    budget: &Budget,
) -> Result<()> {
    *visited += 1;
    budget.check_enumeration("well_matched_of_length", *visited + out.len())?;
    let remaining = (len - prefix.len()) as i64;
    if remaining == 0 {
        if height == 0 {
            out.push(prefix.clone());
        }
        return Ok(());
    }
    // Prune: need enough letters left to come back down to zero.
    if height > remaining {
        return Ok(());
    }
    for s in a.symbols() {
        let h = height + a.height_step(s);
        if h < 0 {
            continue;
        }
        prefix.push(s);
        descend(a, len, h, prefix, out, visited, budget)?;
        prefix.pop();
    }
    Ok(())
}

/// All contexts (u, v) with |u| = k, |v| = l and uv well-matched, ordered
/// lexicographically by u then v (symbol index order).
pub fn contexts_of_shape(
    a: &VpAlphabet,
    k: usize,
    l: usize,
    budget: &Budget,
) -> Result<Vec<Context>> {
    let mut us = Vec::new();
    let mut prefix = Vec::with_capacity(k);
    let mut visited = 0usize;
    // u ranges over nonneg-height prefixes whose height v can cancel: Δ(u) <= l.
    collect_upper(a, k, l as i64, 0, &mut prefix, &mut us, &mut visited, budget)?;
    let mut out = Vec::new();
    for u in us {
        let hu = a.delta_height(&u);
        let mut suffix = Vec::with_capacity(l);
        collect_lower(a, l, hu, &mut suffix, &u, &mut out, &mut visited, budget)?;
    }
    Ok(out)
}

fn collect_upper(
    a: &VpAlphabet,
    k: usize,
    max_h: i64,
    height: i64,
    prefix: &mut Word,
    out: &mut Vec<Word>,
    visited: &mut usize,
    budget: &Budget,
) -> Result<()> {
    *visited += 1;
    budget.check_enumeration("contexts_of_shape", *visited)?;
    if prefix.len() == k {
        if height <= max_h {
            out.push(prefix.clone());
        }
        return Ok(());
    }
    for s in a.symbols() {
        let h = height + a.height_step(s);
        if h < 0 {
            continue;
        }
        prefix.push(s);
        collect_upper(a, k, max_h, h, prefix, out, visited, budget)?;
        prefix.pop();
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn collect_lower(
    a: &VpAlphabet,
    l: usize,
    height: i64,
    suffix: &mut Word,
    u: &Word,
    out: &mut Vec<Context>,
    visited: &mut usize,
    budget: &Budget,
) -> Result<()> {
    *visited += 1;
    budget.check_enumeration("contexts_of_shape", *visited)?;
    let remaining = (l - suffix.len()) as i64;
    if remaining == 0 {
        if height == 0 {
            out.push(Context::new(u.clone(), suffix.clone()));
        }
        return Ok(());
    }
    if height > remaining {
        return Ok(());
    }
    for s in a.symbols() {
        let h = height + a.height_step(s);
        if h < 0 {
            continue;
        }
        suffix.push(s);
        collect_lower(a, l, h, suffix, u, out, visited, budget)?;
        suffix.pop();
    }
    Ok(())
}

/// All words of exactly `len` letters over the full alphabet (no matching
/// constraint), lexicographic order. Used by brute-force oracles.
pub fn all_words_of_length(a: &VpAlphabet, len: usize, budget: &Budget) -> Result<Vec<Word>> {
    let mut out: Vec<Word> = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * a.len());
        for w in &out {
            for s in a.symbols() {
                let mut w2 = w.clone();
                w2.push(s);
                next.push(w2);
            }
            budget.check_enumeration("all_words_of_length", next.len())?;
        }
        out = next;
    }
    Ok(out)
}

/// All words with at most `max_len` letters, length-lex order.
pub fn all_words_up_to(a: &VpAlphabet, max_len: usize, budget: &Budget) -> Result<Vec<Word>> {
    let mut out = Vec::new();
    for len in 0..=max_len {
        out.extend(all_words_of_length(a, len, budget)?);
        budget.check_enumeration("all_words_up_to", out.len())?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Catalan counts for the one-letter bracket alphabet, lengths 0..=6.
    #[test]
    fn dyck_counts() {
        let a = VpAlphabet::new(&["a"], &[], &["b"]).unwrap();
        let budget = Budget::default();
        let expected = [1usize, 0, 1, 0, 2, 0, 5];
        for (len, want) in expected.iter().enumerate() {
            let words = well_matched_of_length(&a, len, &budget).unwrap();
            assert_eq!(words.len(), *want, "length {len}");
        }
    }

    #[test]
    fn order_is_length_lex() {
        let a = VpAlphabet::new(&["a"], &["c"], &["b"]).unwrap();
        let budget = Budget::default();
        let words = well_matched_up_to(&a, 2, &budget).unwrap();
        let shown: Vec<String> = words.iter().map(|w| a.format_word(w)).collect();
        assert_eq!(shown, vec!["", "c", "a b", "c c"]);
    }

    #[test]
    fn context_shapes() {
        let a = VpAlphabet::new(&["a"], &["c"], &["b"]).unwrap();
        let budget = Budget::default();
        // k=1, l=1: u in {a, c}, with v cancelling.
        let ctxs = contexts_of_shape(&a, 1, 1, &budget).unwrap();
        let shown: Vec<String> = ctxs.iter().map(|c| c.display(&a)).collect();
        assert_eq!(shown, vec!["(a, b)", "(c, c)"]);
        for c in &ctxs {
            assert!(c.is_valid(&a));
        }
        // Every produced context is valid for a larger shape too.
        let ctxs = contexts_of_shape(&a, 2, 3, &budget).unwrap();
        assert!(!ctxs.is_empty());
        for c in &ctxs {
            assert!(c.is_valid(&a));
            assert_eq!(c.u.len(), 2);
            assert_eq!(c.v.len(), 3);
        }
    }

    #[test]
    fn budget_trips() {
        let a = VpAlphabet::new(&["a"], &["c"], &["b"]).unwrap();
        let tight = Budget {
            enumeration: 10,
            ..Budget::default()
        };
        assert!(well_matched_of_length(&a, 12, &tight).is_err());
    }
}
