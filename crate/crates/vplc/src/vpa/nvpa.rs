//! Nondeterministic visibly pushdown automata and determinization.
//!
//! Determinization tracks *threads*: a thread (p, γ, q) is the summary of one
//! surviving run segment since its last pending call — p the state entered
//! right after that call, γ the symbol it pushed, q the current state (p and
//! γ are NIL at the bottom level). The determinized machine pushes
//! (source-state id, call letter) pairs; a pop resolves parents by
//! re-matching the segment start (p, γ) against the call transitions of the
//! saved thread set, which keeps the state space inside 2^(Q x Γ x Q). Dips
//! are word-shape events, hence shared by every run and handled by the
//! deterministic wrapper's dip flag.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::alphabet::{Sym, SymClass, VpAlphabet};
use super::dvpa::{Dvpa, DvpaBuilder, State, StackSym, BOTTOM};
use crate::budget::Budget;
use crate::error::{Error, Result};

const NIL: u32 = u32::MAX;

/// (segment start state, own pushed symbol, current state)
type Thread = (State, StackSym, State);
type DState = Vec<Thread>;

#[derive(Debug, Clone)]
pub struct Nvpa {
    pub alphabet: VpAlphabet,
    state_names: Vec<String>,
    state_ids: BTreeMap<String, State>,
    stack_names: Vec<String>,
    stack_ids: BTreeMap<String, StackSym>,
    pub inits: BTreeSet<State>,
    pub finals: BTreeSet<State>,
    /// (from, call, top) -> {(to, push)}; top 0 is the bottom marker.
    call_tr: BTreeMap<(State, Sym, StackSym), BTreeSet<(State, StackSym)>>,
    /// (from, int, top) -> {to}
    int_tr: BTreeMap<(State, Sym, StackSym), BTreeSet<State>>,
    /// (from, ret, popped-or-bottom) -> {to}
    ret_tr: BTreeMap<(State, Sym, StackSym), BTreeSet<State>>,
}

impl Nvpa {
    pub fn new(alphabet: VpAlphabet) -> Self {
        let mut n = Nvpa {
            alphabet,
            state_names: Vec::new(),
            state_ids: BTreeMap::new(),
            stack_names: Vec::new(),
            stack_ids: BTreeMap::new(),
            inits: BTreeSet::new(),
            finals: BTreeSet::new(),
            call_tr: BTreeMap::new(),
            int_tr: BTreeMap::new(),
            ret_tr: BTreeMap::new(),
        };
        let bot = n.stack_sym(super::dvpa::BOTTOM_NAME);
        debug_assert_eq!(bot, BOTTOM);
        n
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

    pub fn stack_sym(&mut self, name: &str) -> StackSym {
        if let Some(&id) = self.stack_ids.get(name) {
            return id;
        }
        let id = self.stack_names.len() as StackSym;
        self.stack_names.push(name.to_string());
        self.stack_ids.insert(name.to_string(), id);
        id
    }

    pub fn state_count(&self) -> usize {
        self.state_names.len()
    }

    pub fn stack_count(&self) -> usize {
        self.stack_names.len()
    }

    pub fn state_name(&self, q: State) -> &str {
        &self.state_names[q as usize]
    }

    pub fn stack_name(&self, g: StackSym) -> &str {
        &self.stack_names[g as usize]
    }

    pub fn add_call(&mut self, q: State, a: Sym, top: StackSym, to: State, push: StackSym) -> Result<()> {
        if self.alphabet.class(a) != SymClass::Call {
            return Err(Error::invalid("add_call on a non-call symbol"));
        }
        if push == BOTTOM {
            return Err(Error::invalid("calls must not push the bottom marker"));
        }
        self.call_tr.entry((q, a, top)).or_default().insert((to, push));
        Ok(())
    }

    pub fn add_int(&mut self, q: State, c: Sym, top: StackSym, to: State) -> Result<()> {
        if self.alphabet.class(c) != SymClass::Int {
            return Err(Error::invalid("add_int on a non-internal symbol"));
        }
        self.int_tr.entry((q, c, top)).or_default().insert(to);
        Ok(())
    }

    pub fn add_ret(&mut self, q: State, b: Sym, top: StackSym, to: State) -> Result<()> {
        if self.alphabet.class(b) != SymClass::Ret {
            return Err(Error::invalid("add_ret on a non-return symbol"));
        }
        self.ret_tr.entry((q, b, top)).or_default().insert(to);
        Ok(())
    }

    pub fn calls_from(&self, q: State, a: Sym, top: StackSym) -> impl Iterator<Item = (State, StackSym)> + '_ {
        self.call_tr.get(&(q, a, top)).into_iter().flatten().copied()
    }

    pub fn ints_from(&self, q: State, c: Sym, top: StackSym) -> impl Iterator<Item = State> + '_ {
        self.int_tr.get(&(q, c, top)).into_iter().flatten().copied()
    }

    pub fn rets_from(&self, q: State, b: Sym, top: StackSym) -> impl Iterator<Item = State> + '_ {
        self.ret_tr.get(&(q, b, top)).into_iter().flatten().copied()
    }

    /// Effective top read by a thread: its own pushed symbol, bottom at NIL.
    fn eff(g: StackSym) -> StackSym {
        if g == NIL {
            BOTTOM
        } else {
            g
        }
    }

    fn int_step(&self, s: &DState, c: Sym) -> DState {
        let mut out: BTreeSet<Thread> = BTreeSet::new();
        for &(p, g, q) in s {
            for to in self.ints_from(q, c, Self::eff(g)) {
                out.insert((p, g, to));
            }
        }
        out.into_iter().collect()
    }

    fn call_step(&self, s: &DState, a: Sym) -> DState {
        let mut out: BTreeSet<Thread> = BTreeSet::new();
        for &(_, g, q) in s {
            for (to, push) in self.calls_from(q, a, Self::eff(g)) {
                out.insert((to, push, to));
            }
        }
        out.into_iter().collect()
    }

    fn ret_step(&self, s: &DState, b: Sym, saved: &DState, a: Sym) -> DState {
        let mut out: BTreeSet<Thread> = BTreeSet::new();
        for &(p, g, q) in s {
            debug_assert_ne!(p, NIL, "positive height implies segment starts");
            for to in self.rets_from(q, b, g) {
                for &(pp, pg, pq) in saved {
                    if self.calls_from(pq, a, Self::eff(pg)).any(|e| e == (p, g)) {
                        out.insert((pp, pg, to));
                    }
                }
            }
        }
        out.into_iter().collect()
    }

    fn ret_bottom_step(&self, s: &DState, b: Sym) -> DState {
        let mut out: BTreeSet<Thread> = BTreeSet::new();
        for &(p, g, q) in s {
            debug_assert_eq!(p, NIL);
            for to in self.rets_from(q, b, BOTTOM) {
                out.insert((p, g, to));
            }
        }
        out.into_iter().collect()
    }

    /// Direct membership by simulating all runs at once (the concrete
    /// counterpart of the determinization).
    pub fn accepts(&self, w: &[Sym]) -> bool {
        let mut cur: DState = self.inits.iter().map(|&q| (NIL, NIL, q)).collect();
        let mut stack: Vec<(DState, Sym)> = Vec::new();
        let mut dipped = false;
        for &s in w {
            cur = match self.alphabet.class(s) {
                SymClass::Int => self.int_step(&cur, s),
                SymClass::Call => {
                    let next = self.call_step(&cur, s);
                    stack.push((cur, s));
                    next
                }
                SymClass::Ret => match stack.pop() {
                    Some((saved, a)) => self.ret_step(&cur, s, &saved, a),
                    None => {
                        dipped = true;
                        self.ret_bottom_step(&cur, s)
                    }
                },
            };
            if cur.is_empty() {
                return false;
            }
        }
        !dipped && stack.is_empty() && cur.iter().any(|&(_, _, q)| self.finals.contains(&q))
    }

    /// Subset-style determinization; the result accepts exactly the same
    /// words.
    pub fn determinize(&self, budget: &Budget) -> Result<Dvpa> {
        let mut b = DvpaBuilder::new(self.alphabet.clone());

        let mut dstates: Vec<DState> = Vec::new();
        let mut dids: HashMap<DState, State> = HashMap::new();
        let intern = |s: DState,
                          b: &mut DvpaBuilder,
                          dstates: &mut Vec<DState>,
                          dids: &mut HashMap<DState, State>|
         -> State {
            if let Some(&id) = dids.get(&s) {
                return id;
            }
            let id = b.state(&format!("S{}", dstates.len()));
            debug_assert_eq!(id as usize, dstates.len());
            dids.insert(s.clone(), id);
            dstates.push(s);
            id
        };

        // Determinized stack symbols: (source d-state, call letter).
        let mut pairs: Vec<(State, Sym)> = Vec::new();
        let mut pair_ids: HashMap<(State, Sym), StackSym> = HashMap::new();

        let init: DState = self.inits.iter().map(|&q| (NIL, NIL, q)).collect();
        let d0 = intern(init, &mut b, &mut dstates, &mut dids);

        // Possible determinized tops per d-state, and who pops into whom:
        // watchers[s0] = successors that continue with s0's tops after a pop.
        let mut tops: Vec<BTreeSet<StackSym>> = vec![BTreeSet::new()];
        let mut watchers: HashMap<State, BTreeSet<State>> = HashMap::new();
        let mut work: Vec<(State, StackSym)> = Vec::new();

        let push_top = |d: State,
                            t: StackSym,
                            tops: &mut Vec<BTreeSet<StackSym>>,
                            work: &mut Vec<(State, StackSym)>| {
            while tops.len() <= d as usize {
                tops.push(BTreeSet::new());
            }
            if tops[d as usize].insert(t) {
                work.push((d, t));
            }
        };
        push_top(d0, BOTTOM, &mut tops, &mut work);

        let calls = self.alphabet.calls();
        let ints = self.alphabet.internals();
        let rets = self.alphabet.returns();

        let mut processed = 0usize;
        while let Some((d, top)) = work.pop() {
            processed += 1;
            budget.check_closure("nvpa_determinize", dstates.len() + pairs.len())?;
            budget.check_search("nvpa_determinize", processed)?;
            let src = dstates[d as usize].clone();
            for &c in &ints {
                let succ = self.int_step(&src, c);
                let sid = intern(succ, &mut b, &mut dstates, &mut dids);
                b.internal(d, c, top, sid)?;
                push_top(sid, top, &mut tops, &mut work);
            }
            for &a in &calls {
                let succ = self.call_step(&src, a);
                let sid = intern(succ, &mut b, &mut dstates, &mut dids);
                let pair = *pair_ids.entry((d, a)).or_insert_with(|| {
                    let g = b.stack_sym(&format!("p{}_{}", d, self.alphabet.name(a)));
                    pairs.push((d, a));
                    debug_assert_eq!(pairs.len(), g as usize);
                    g
                });
                b.call(d, a, top, sid, pair)?;
                push_top(sid, pair, &mut tops, &mut work);
            }
            for &r in &rets {
                if top == BOTTOM {
                    let succ = self.ret_bottom_step(&src, r);
                    let sid = intern(succ, &mut b, &mut dstates, &mut dids);
                    b.ret(d, r, BOTTOM, sid)?;
                    push_top(sid, BOTTOM, &mut tops, &mut work);
                } else {
                    let (s0, a) = pairs[top as usize - 1];
                    let succ = self.ret_step(&src, r, &dstates[s0 as usize], a);
                    let sid = intern(succ, &mut b, &mut dstates, &mut dids);
                    b.ret(d, r, top, sid)?;
                    // The successor resumes below the popped frame: it can
                    // see any top the saved state could see, now or later.
                    watchers.entry(s0).or_default().insert(sid);
                    let inherited: Vec<StackSym> =
                        tops[s0 as usize].iter().copied().collect();
                    for t in inherited {
                        push_top(sid, t, &mut tops, &mut work);
                    }
                }
            }
            // Late top arrivals flow to everyone who popped over this state.
            if let Some(ws) = watchers.get(&d).cloned() {
                for succ in ws {
                    push_top(succ, top, &mut tops, &mut work);
                }
            }
        }

        b.set_init(d0);
        for (i, s) in dstates.iter().enumerate() {
            if s.iter().any(|&(_, _, q)| self.finals.contains(&q)) {
                b.add_final(i as State);
            }
        }
        let (d, _) = b.build()?;
        Ok(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vpa::enumerate::well_matched_up_to;

    /// Nondeterministic machine over calls {a}, rets {b}: guesses at each
    /// call whether it is the *last* top-level call block; accepts words
    /// whose final top-level segment is a^n b^n. Equivalent deterministic
    /// language: non-empty well-matched words ending "a^n b^n" — here used
    /// only to exercise genuine nondeterminism.
    fn guessing_nvpa() -> Nvpa {
        let alpha = VpAlphabet::new(&["a"], &[], &["b"]).unwrap();
        let mut n = Nvpa::new(alpha);
        let wait = n.state("wait");
        let up = n.state("up");
        let down = n.state("down");
        let x = n.stack_sym("X");
        let y = n.stack_sym("Y");
        n.inits.insert(wait);
        n.finals.insert(down);
        let (a, bb) = (0, 1);
        // "wait" consumes any well-matched prefix.
        for top in [BOTTOM, x, y] {
            n.add_call(wait, a, top, wait, x).unwrap();
        }
        n.add_ret(wait, bb, x, wait).unwrap();
        // Guess: this call starts the final a^n b^n block.
        for top in [BOTTOM, x, y] {
            n.add_call(wait, a, top, up, y).unwrap();
        }
        for top in [x, y] {
            n.add_call(up, a, top, up, y).unwrap();
        }
        n.add_ret(up, bb, y, down).unwrap();
        n.add_ret(down, bb, y, down).unwrap();
        n
    }

    #[test]
    fn nvpa_accepts_and_determinize_agree() {
        let n = guessing_nvpa();
        let budget = Budget::default();
        let d = n.determinize(&budget).unwrap();
        for w in well_matched_up_to(&n.alphabet, 10, &budget).unwrap() {
            assert_eq!(n.accepts(&w), d.accepts(&w), "word {}", n.alphabet.format_word(&w));
        }
        // Also check some ill-matched words reject on both sides.
        for text in ["a", "b", "b a", "a a b"] {
            let w = n.alphabet.parse_word(text).unwrap();
            assert!(!n.accepts(&w));
            assert!(!d.accepts(&w));
        }
    }

    #[test]
    fn guessing_language_shape() {
        let n = guessing_nvpa();
        let a = &n.alphabet;
        assert!(n.accepts(&a.parse_word("a b").unwrap()));
        assert!(n.accepts(&a.parse_word("a b a a b b").unwrap()));
        assert!(n.accepts(&a.parse_word("a a b b").unwrap()));
        assert!(!n.accepts(&a.parse_word("").unwrap()));
        assert!(!n.accepts(&a.parse_word("a b a b a").unwrap()));
    }
}
