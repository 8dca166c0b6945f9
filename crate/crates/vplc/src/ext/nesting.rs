//! Nesting depth of well-matched words.
//!
//! Depth counts genuinely branching nesting, Horton–Strahler style: a block
//! a w b is one deeper than w only when w splits into two well-matched halves
//! of w's own depth — i.e. when w is flat (depth 0) or at least two of its
//! top-level blocks attain the maximum. A lone deepest block keeps its depth.
//! So a^n b^n has depth 1 for every n ≥ 1, while (a b)(a b) nested under a
//! further a…b has depth 2.

use crate::error::{Error, Result};
use crate::vpa::alphabet::{Sym, SymClass, VpAlphabet};

pub fn nesting_depth(a: &VpAlphabet, w: &[Sym]) -> Result<usize> {
    // One Vec per open call: the depths of the completed blocks at that level.
    let mut levels: Vec<Vec<usize>> = vec![Vec::new()];
    for &s in w {
        match a.class(s) {
            SymClass::Int => {}
            SymClass::Call => levels.push(Vec::new()),
            SymClass::Ret => {
                let ds = levels
                    .pop()
                    .ok_or_else(|| Error::invalid("nesting_depth: word dips below zero"))?;
                if levels.is_empty() {
                    return Err(Error::invalid("nesting_depth: word dips below zero"));
                }
                let block = match ds.iter().max() {
                    None => 1,
                    Some(&d) => {
                        if ds.iter().filter(|&&x| x == d).count() >= 2 {
                            d + 1
                        } else {
                            d
                        }
                    }
                };
                levels.last_mut().unwrap().push(block);
            }
        }
    }
    if levels.len() != 1 {
        return Err(Error::invalid("nesting_depth: word has pending calls"));
    }
    Ok(levels[0].iter().copied().max().unwrap_or(0))
}
