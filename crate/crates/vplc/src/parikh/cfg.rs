//! Context-free grammars over an abstract terminal alphabet, as the common
//! carrier between pushdown machines and Parikh images.

use std::collections::BTreeSet;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::parikh::semilinear::Vector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CfgSym {
    T(usize),
    N(usize),
}

#[derive(Debug, Clone)]
pub struct Cfg {
    pub terminals: Vec<String>,
    pub nonterminals: Vec<String>,
    pub start: usize,
    pub prods: Vec<(usize, Vec<CfgSym>)>,
}

impl Cfg {
    pub fn prod_count(&self) -> usize {
        self.prods.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.start >= self.nonterminals.len() {
            return Err(Error::invalid("cfg: start out of range"));
        }
        for (lhs, rhs) in &self.prods {
            if *lhs >= self.nonterminals.len() {
                return Err(Error::invalid("cfg: production lhs out of range"));
            }
            for s in rhs {
                match s {
                    CfgSym::T(t) if *t >= self.terminals.len() => {
                        return Err(Error::invalid("cfg: terminal out of range"))
                    }
                    CfgSym::N(n) if *n >= self.nonterminals.len() => {
                        return Err(Error::invalid("cfg: nonterminal out of range"))
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    /// Keeps only generating and reachable nonterminals (start always kept,
    /// so an empty language yields a grammar with no productions).
    pub fn reduce(&self) -> Cfg {
        let n = self.nonterminals.len();
        let mut generating = vec![false; n];
        loop {
            let mut changed = false;
            for (lhs, rhs) in &self.prods {
                if generating[*lhs] {
                    continue;
                }
                if rhs.iter().all(|s| match s {
                    CfgSym::T(_) => true,
                    CfgSym::N(x) => generating[*x],
                }) {
                    generating[*lhs] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut reachable = vec![false; n];
        reachable[self.start] = true;
        let mut frontier = vec![self.start];
        while let Some(x) = frontier.pop() {
            for (lhs, rhs) in &self.prods {
                if *lhs != x {
                    continue;
                }
                // Only productions whose RHS is fully generating survive, so
                // reachability must look through those alone.
                if !rhs.iter().all(|s| match s {
                    CfgSym::T(_) => true,
                    CfgSym::N(y) => generating[*y],
                }) {
                    continue;
                }
                for s in rhs {
                    if let CfgSym::N(y) = s {
                        if !reachable[*y] {
                            reachable[*y] = true;
                            frontier.push(*y);
                        }
                    }
                }
            }
        }
        let keep: Vec<usize> = (0..n)
            .filter(|&x| x == self.start || (generating[x] && reachable[x]))
            .collect();
        let remap: Vec<Option<usize>> = {
            let mut r = vec![None; n];
            for (new, &old) in keep.iter().enumerate() {
                r[old] = Some(new);
            }
            r
        };
        let prods = self
            .prods
            .iter()
            .filter(|(lhs, rhs)| {
                remap[*lhs].is_some()
                    && generating[*lhs]
                    && reachable[*lhs]
                    && rhs.iter().all(|s| match s {
                        CfgSym::T(_) => true,
                        CfgSym::N(y) => generating[*y] && reachable[*y],
                    })
            })
            .map(|(lhs, rhs)| {
                (
                    remap[*lhs].unwrap(),
                    rhs.iter()
                        .map(|s| match s {
                            CfgSym::T(t) => CfgSym::T(*t),
                            CfgSym::N(y) => CfgSym::N(remap[*y].unwrap()),
                        })
                        .collect(),
                )
            })
            .collect();
        Cfg {
            terminals: self.terminals.clone(),
            nonterminals: keep
                .iter()
                .map(|&x| self.nonterminals[x].clone())
                .collect(),
            start: remap[self.start].unwrap(),
            prods,
        }
    }

    /// All terminal words of length ≤ max_len, by iterated bottom-up
    /// substitution. Words are terminal-index sequences.
    pub fn enumerate_words(
        &self,
        max_len: usize,
        budget: &Budget,
    ) -> Result<BTreeSet<Vec<usize>>> {
        let n = self.nonterminals.len();
        let mut words: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); n];
        loop {
            let mut changed = false;
            for (lhs, rhs) in &self.prods {
                // Concatenate the word sets of the RHS, truncated at max_len.
                let mut acc: BTreeSet<Vec<usize>> = [Vec::new()].into_iter().collect();
                for s in rhs {
                    let mut next = BTreeSet::new();
                    match s {
                        CfgSym::T(t) => {
                            for w in &acc {
                                if w.len() + 1 <= max_len {
                                    let mut w2 = w.clone();
                                    w2.push(*t);
                                    next.insert(w2);
                                }
                            }
                        }
                        CfgSym::N(y) => {
                            for w in &acc {
                                for v in &words[*y] {
                                    if w.len() + v.len() <= max_len {
                                        let mut w2 = w.clone();
                                        w2.extend_from_slice(v);
                                        next.insert(w2);
                                    }
                                }
                            }
                        }
                    }
                    acc = next;
                    if acc.is_empty() {
                        break;
                    }
                }
                for w in acc {
                    if words[*lhs].insert(w) {
                        changed = true;
                    }
                }
                let total: usize = words.iter().map(|s| s.len()).sum();
                budget.check_enumeration("cfg.enumerate", total)?;
            }
            if !changed {
                break;
            }
        }
        Ok(std::mem::take(&mut words[self.start]))
    }

    pub fn parikh_of_word(&self, w: &[usize]) -> Vector {
        let mut v = vec![0u64; self.terminals.len()];
        for &t in w {
            v[t] += 1;
        }
        v
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// S -> ε | a S b  over terminals {a, b}.
    pub(crate) fn anbn_cfg() -> Cfg {
        Cfg {
            terminals: vec!["a".into(), "b".into()],
            nonterminals: vec!["S".into()],
            start: 0,
            prods: vec![
                (0, vec![]),
                (0, vec![CfgSym::T(0), CfgSym::N(0), CfgSym::T(1)]),
            ],
        }
    }

    #[test]
    fn enumerate_anbn() {
        let g = anbn_cfg();
        let words = g.enumerate_words(6, &Budget::default()).unwrap();
        let expect: BTreeSet<Vec<usize>> = [
            vec![],
            vec![0, 1],
            vec![0, 0, 1, 1],
            vec![0, 0, 0, 1, 1, 1],
        ]
        .into_iter()
        .collect();
        assert_eq!(words, expect);
    }

    #[test]
    fn reduce_drops_dead_parts() {
        let g = Cfg {
            terminals: vec!["a".into()],
            nonterminals: vec!["S".into(), "U".into(), "D".into()],
            start: 0,
            prods: vec![
                (0, vec![CfgSym::T(0)]),
                // U is reachable but not generating.
                (0, vec![CfgSym::N(1)]),
                (1, vec![CfgSym::N(1), CfgSym::T(0)]),
                // D is generating but not reachable.
                (2, vec![CfgSym::T(0)]),
            ],
        };
        let r = g.reduce();
        assert_eq!(r.nonterminals, vec!["S".to_string()]);
        assert_eq!(r.prod_count(), 1);
    }
}
