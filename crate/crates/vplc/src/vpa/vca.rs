//! Visibly counter automata.
//!
//! An m-VCA reads the visible height as its only memory besides the state:
//! transitions see the band min(height, m). Acceptance needs a final state
//! and height 0, with no prefix below 0. The DVPA translation stores the
//! current band in the state and pushes the pre-call band so a pop restores
//! it exactly.

use std::collections::{BTreeMap, BTreeSet};

use super::alphabet::{Sym, SymClass, VpAlphabet};
use super::dvpa::{Dvpa, DvpaBuilder, State, BOTTOM};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Vca {
    pub alphabet: VpAlphabet,
    pub m: usize,
    state_names: Vec<String>,
    state_ids: BTreeMap<String, State>,
    pub init: State,
    pub finals: BTreeSet<State>,
    /// (state, symbol, band) -> state; must be total.
    tr: BTreeMap<(State, Sym, usize), State>,
}

impl Vca {
    pub fn new(alphabet: VpAlphabet, m: usize) -> Self {
        Vca {
            alphabet,
            m,
            state_names: Vec::new(),
            state_ids: BTreeMap::new(),
            init: 0,
            finals: BTreeSet::new(),
            tr: BTreeMap::new(),
        }
    }

    pub fn state(&mut self, name: &str) -> State {
        if let Some(&id) = self.state_ids.get(name) {
            return id;
        }
        let id = self.state_names.len() as State;
        self.state_names.push(name.to_string());
        self.state_ids.insert(name.to_string(), id);
        id
    }

    pub fn state_count(&self) -> usize {
        self.state_names.len()
    }

    pub fn state_name(&self, q: State) -> &str {
        &self.state_names[q as usize]
    }

    pub fn set(&mut self, q: State, s: Sym, band: usize, to: State) -> Result<()> {
        if band > self.m {
            return Err(Error::invalid(format!("band {band} exceeds m={}", self.m)));
        }
        self.tr.insert((q, s, band), to);
        Ok(())
    }

    pub fn get(&self, q: State, s: Sym, band: usize) -> Option<State> {
        self.tr.get(&(q, s, band)).copied()
    }

    pub fn validate(&self) -> Result<()> {
        if self.state_names.is_empty() {
            return Err(Error::invalid("counter automaton has no states"));
        }
        for q in 0..self.state_count() as State {
            for s in self.alphabet.symbols() {
                for band in 0..=self.m {
                    if self.get(q, s, band).is_none() {
                        return Err(Error::invalid(format!(
                            "missing transition ({}, {}, band {band})",
                            self.state_name(q),
                            self.alphabet.name(s)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Direct counter simulation.
    pub fn accepts(&self, w: &[Sym]) -> bool {
        let mut q = self.init;
        let mut h: i64 = 0;
        for &s in w {
            let band = (h.max(0) as usize).min(self.m);
            match self.get(q, s, band) {
                Some(to) => q = to,
                None => return false,
            }
            h += self.alphabet.height_step(s);
            if h < 0 {
                return false;
            }
        }
        h == 0 && self.finals.contains(&q)
    }

    /// Equivalent DVPA: states (q, band), stack symbols remember the band in
    /// effect before each call.
    pub fn to_dvpa(&self) -> Result<Dvpa> {
        self.validate()?;
        let mut b = DvpaBuilder::new(self.alphabet.clone());
        let bands = self.m + 1;
        let pair = |q: State, band: usize| q * bands as State + band as State;
        for q in 0..self.state_count() as State {
            for band in 0..bands {
                let id = b.state(&format!("{}@{}", self.state_name(q), band));
                debug_assert_eq!(id, pair(q, band));
            }
        }
        let mut band_syms = Vec::with_capacity(bands);
        for band in 0..bands {
            band_syms.push(b.stack_sym(&format!("B{band}")));
        }
        b.set_init(pair(self.init, 0));
        for &f in &self.finals {
            b.add_final(pair(f, 0));
        }
        let tops: Vec<u32> = std::iter::once(BOTTOM).chain(band_syms.iter().copied()).collect();
        for q in 0..self.state_count() as State {
            for band in 0..bands {
                for s in self.alphabet.symbols() {
                    let to = self.get(q, s, band).expect("validated total");
                    match self.alphabet.class(s) {
                        SymClass::Call => {
                            let nb = (band + 1).min(self.m);
                            for &t in &tops {
                                b.call(pair(q, band), s, t, pair(to, nb), band_syms[band])?;
                            }
                        }
                        SymClass::Int => {
                            for &t in &tops {
                                b.internal(pair(q, band), s, t, pair(to, band))?;
                            }
                        }
                        SymClass::Ret => {
                            // Popping restores the exact band saved at the call.
                            for (saved, &t) in band_syms.iter().enumerate() {
                                b.ret(pair(q, band), s, t, pair(to, saved))?;
                            }
                            // Return on the bottom marker dips; the wrapper
                            // rejects, target is irrelevant but must exist.
                            b.ret(pair(q, band), s, BOTTOM, pair(to, 0))?;
                        }
                    }
                }
            }
        }
        let (d, _) = b.build()?;
        Ok(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::vpa::enumerate::well_matched_up_to;

    /// 1-VCA accepting words whose height never exceeds 1 (band stays low).
    fn low_vca() -> Vca {
        let a = VpAlphabet::new(&["a"], &["c"], &["b"]).unwrap();
        let mut v = Vca::new(a, 1);
        let ok = v.state("ok");
        let bad = v.state("bad");
        v.init = ok;
        v.finals.insert(ok);
        let (ca, ic, rb) = (0, 1, 2);
        for band in 0..=1 {
            v.set(ok, ic, band, ok).unwrap();
            v.set(ok, rb, band, ok).unwrap();
            v.set(bad, ca, band, bad).unwrap();
            v.set(bad, ic, band, bad).unwrap();
            v.set(bad, rb, band, bad).unwrap();
        }
        // A call in band 1 would push height to 2.
        v.set(ok, ca, 0, ok).unwrap();
        v.set(ok, ca, 1, bad).unwrap();
        v
    }

    #[test]
    fn vca_and_dvpa_agree() {
        let v = low_vca();
        let d = v.to_dvpa().unwrap();
        let budget = Budget::default();
        for w in well_matched_up_to(&v.alphabet, 8, &budget).unwrap() {
            assert_eq!(v.accepts(&w), d.accepts(&w), "{}", v.alphabet.format_word(&w));
        }
        for text in ["a", "b", "b a", "a a b"] {
            let w = v.alphabet.parse_word(text).unwrap();
            assert_eq!(v.accepts(&w), d.accepts(&w));
            assert!(!v.accepts(&w));
        }
    }

    #[test]
    fn low_language() {
        let v = low_vca();
        let a = &v.alphabet;
        assert!(v.accepts(&a.parse_word("a b a b").unwrap()));
        assert!(v.accepts(&a.parse_word("c a c b c").unwrap()));
        assert!(!v.accepts(&a.parse_word("a a b b").unwrap()));
    }
}
