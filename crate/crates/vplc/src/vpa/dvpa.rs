//! Deterministic visibly pushdown automata.
//!
//! Transition tables are total: every (state, symbol, top) triple has exactly
//! one outcome. Calls push one symbol on top of the read top, internals leave
//! the stack alone, returns pop. A return read on the bottom marker leaves the
//! marker in place, moves the state, and sets a "dipped" flag; acceptance
//! demands a final state, stack exactly `[bottom]`, and no dip. Consequently
//! every accepted word is well-matched, and on well-matched words acceptance
//! is just "final state reached".

use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap};
use std::cmp::Reverse;

use super::alphabet::{Sym, SymClass, VpAlphabet, Word};
use crate::budget::Budget;
use crate::error::{Error, Result};

pub type State = u32;
pub type StackSym = u32;

/// Stack index of the bottom marker; fixed by construction.
pub const BOTTOM: StackSym = 0;
pub const BOTTOM_NAME: &str = "_BOT_";

const NO_PUSH: StackSym = u32::MAX;

#[derive(Debug, Clone)]
pub struct Dvpa {
    pub alphabet: VpAlphabet,
    state_names: Vec<String>,
    stack_names: Vec<String>,
    init: State,
    finals: BTreeSet<State>,
    /// `targets[(q * |Σ| + s) * |Γ| + top]`
    targets: Vec<State>,
    /// Same indexing; `NO_PUSH` for internals and returns.
    pushes: Vec<StackSym>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOutcome {
    pub state: State,
    pub stack_len: usize,
    pub dipped: bool,
    pub accepted: bool,
}

impl Dvpa {
    pub fn state_count(&self) -> usize {
        self.state_names.len()
    }

    pub fn stack_count(&self) -> usize {
        self.stack_names.len()
    }

    pub fn init(&self) -> State {
        self.init
    }

    pub fn finals(&self) -> &BTreeSet<State> {
        &self.finals
    }

    pub fn state_name(&self, q: State) -> &str {
        &self.state_names[q as usize]
    }

    pub fn stack_name(&self, g: StackSym) -> &str {
        &self.stack_names[g as usize]
    }

    pub fn state_by_name(&self, name: &str) -> Option<State> {
        self.state_names
            .iter()
            .position(|n| n == name)
            .map(|i| i as State)
    }

    fn idx(&self, q: State, s: Sym, top: StackSym) -> usize {
        (q as usize * self.alphabet.len() + s as usize) * self.stack_names.len() + top as usize
    }

    /// Total transition: target state plus pushed symbol for calls.
    pub fn transition(&self, q: State, s: Sym, top: StackSym) -> (State, Option<StackSym>) {
        let i = self.idx(q, s, top);
        let p = self.pushes[i];
        (self.targets[i], if p == NO_PUSH { None } else { Some(p) })
    }

    pub fn run(&self, w: &[Sym]) -> RunOutcome {
        let mut q = self.init;
        let mut stack: Vec<StackSym> = vec![BOTTOM];
        let mut dipped = false;
        for &s in w {
            let top = *stack.last().expect("bottom never popped");
            let (to, push) = self.transition(q, s, top);
            match self.alphabet.class(s) {
                SymClass::Call => {
                    stack.push(push.expect("call transitions always push"));
                }
                SymClass::Int => {}
                SymClass::Ret => {
                    if top == BOTTOM {
                        dipped = true;
                    } else {
                        stack.pop();
                    }
                }
            }
            q = to;
        }
        let accepted = self.finals.contains(&q) && stack.len() == 1 && !dipped;
        RunOutcome {
            state: q,
            stack_len: stack.len(),
            dipped,
            accepted,
        }
    }

    pub fn accepts(&self, w: &[Sym]) -> bool {
        self.run(w).accepted
    }

    /// State reached on a well-matched word (stack returns to `[bottom]`).
    pub fn state_after_wm(&self, w: &[Sym]) -> State {
        debug_assert!(self.alphabet.is_well_matched(w));
        self.run(w).state
    }

    /// Product machine over the same alphabet; finals chosen by `rule`
    /// applied to the component final-flags.
    pub fn product(&self, other: &Dvpa, rule: impl Fn(bool, bool) -> bool) -> Result<Dvpa> {
        if self.alphabet != other.alphabet {
            return Err(Error::invalid("product requires identical alphabets"));
        }
        let n2 = other.state_count() as u32;
        let g2 = other.stack_count() as u32;
        let pair_state = |q1: State, q2: State| q1 * n2 + q2;
        // Stack pairs: bottom pairs only with bottom; everything else freely.
        // Index 0 stays the bottom pair; other pairs are offset by 1 and skip
        // the component bottoms.
        let pair_stack = |a: StackSym, b: StackSym| -> StackSym {
            if a == BOTTOM || b == BOTTOM {
                debug_assert!(a == BOTTOM && b == BOTTOM);
                BOTTOM
            } else {
                (a - 1) * (g2 - 1) + (b - 1) + 1
            }
        };
        let mut b = DvpaBuilder::new(self.alphabet.clone());
        for q1 in 0..self.state_count() as u32 {
            for q2 in 0..n2 {
                let id = b.state(&format!(
                    "{}|{}",
                    self.state_name(q1),
                    other.state_name(q2)
                ));
                debug_assert_eq!(id, pair_state(q1, q2));
            }
        }
        for g1 in 1..self.stack_count() as u32 {
            for gg2 in 1..g2 {
                let id = b.stack_sym(&format!(
                    "{}|{}",
                    self.stack_name(g1),
                    other.stack_name(gg2)
                ));
                debug_assert_eq!(id, pair_stack(g1, gg2));
            }
        }
        b.set_init(pair_state(self.init, other.init));
        for q1 in 0..self.state_count() as u32 {
            for q2 in 0..n2 {
                if rule(self.finals.contains(&q1), other.finals.contains(&q2)) {
                    b.add_final(pair_state(q1, q2));
                }
                for s in self.alphabet.symbols() {
                    for g1 in 0..self.stack_count() as u32 {
                        for gg2 in 0..g2 {
                            if (g1 == BOTTOM) != (gg2 == BOTTOM) {
                                continue;
                            }
                            let top = pair_stack(g1, gg2);
                            let (t1, p1) = self.transition(q1, s, g1);
                            let (t2, p2) = other.transition(q2, s, gg2);
                            let to = pair_state(t1, t2);
                            match self.alphabet.class(s) {
                                SymClass::Call => {
                                    let push = pair_stack(p1.unwrap(), p2.unwrap());
                                    b.call(pair_state(q1, q2), s, top, to, push)?;
                                }
                                SymClass::Int => {
                                    b.internal(pair_state(q1, q2), s, top, to)?
                                }
                                SymClass::Ret => b.ret(pair_state(q1, q2), s, top, to)?,
                            }
                        }
                    }
                }
            }
        }
        let (d, _) = b.build()?;
        Ok(d)
    }

    pub fn intersect(&self, other: &Dvpa) -> Result<Dvpa> {
        self.product(other, |x, y| x && y)
    }

    pub fn union(&self, other: &Dvpa) -> Result<Dvpa> {
        self.product(other, |x, y| x || y)
    }

    /// Complement relative to the well-matched words (the only words a DVPA
    /// can accept).
    pub fn complement_wm(&self) -> Dvpa {
        let mut out = self.clone();
        out.finals = (0..self.state_count() as u32)
            .filter(|q| !self.finals.contains(q))
            .collect();
        out
    }

    /// (state, top) pairs that can surface during a run from the initial
    /// configuration. Pop targets are resolved against every symbol ever
    /// pushed over the popped one — a superset of the truly reachable pairs,
    /// which keeps the fixpoint cheap while staying sound for pruning. Dips
    /// below the bottom marker are not followed; those runs are rejected
    /// anyway.
    pub fn surface_pairs(&self, budget: &Budget) -> Result<BTreeSet<(State, StackSym)>> {
        let mut surfaces: BTreeSet<(State, StackSym)> = BTreeSet::new();
        let mut by_top: BTreeMap<StackSym, Vec<State>> = BTreeMap::new();
        let mut below: BTreeMap<StackSym, BTreeSet<StackSym>> = BTreeMap::new();
        let mut queue: Vec<(State, StackSym)> = Vec::new();

        macro_rules! add {
            ($q:expr, $g:expr) => {
                if surfaces.insert(($q, $g)) {
                    by_top.entry($g).or_default().push($q);
                    queue.push(($q, $g));
                }
            };
        }

        add!(self.init, BOTTOM);
        while let Some((q, top)) = queue.pop() {
            budget.check_search("dvpa.surfaces", surfaces.len())?;
            for s in self.alphabet.symbols() {
                let (to, push) = self.transition(q, s, top);
                match self.alphabet.class(s) {
                    SymClass::Call => {
                        let g = push.expect("call transitions always push");
                        if below.entry(g).or_default().insert(top) {
                            // Known surfaces at g gain a new pop target.
                            let holders = by_top.get(&g).cloned().unwrap_or_default();
                            for p in holders {
                                for b in self.alphabet.returns() {
                                    add!(self.transition(p, b, g).0, top);
                                }
                            }
                        }
                        add!(to, g);
                    }
                    SymClass::Int => add!(to, top),
                    SymClass::Ret => {
                        if top != BOTTOM {
                            let under: Vec<StackSym> =
                                below.get(&top).map(|s| s.iter().copied().collect()).unwrap_or_default();
                            for g2 in under {
                                add!(to, g2);
                            }
                        }
                    }
                }
            }
        }
        Ok(surfaces)
    }

    /// Language-equivalent copy restricted to the `surface_pairs` of the
    /// machine. Runs that would leave the kept region go to the sink.
    pub fn trim(&self, budget: &Budget) -> Result<Dvpa> {
        let surfaces = self.surface_pairs(budget)?;
        let mut b = DvpaBuilder::new(self.alphabet.clone());
        let kept_states: BTreeSet<State> = surfaces.iter().map(|&(q, _)| q).collect();
        let mut st = BTreeMap::new();
        for &q in &kept_states {
            st.insert(q, b.state(self.state_name(q)));
        }
        let mut gs = BTreeMap::new();
        gs.insert(BOTTOM, BOTTOM);
        for &(_, g) in &surfaces {
            if g != BOTTOM && !gs.contains_key(&g) {
                let id = b.stack_sym(self.stack_name(g));
                gs.insert(g, id);
            }
        }
        b.set_init(st[&self.init]);
        for &f in &self.finals {
            if let Some(&nf) = st.get(&f) {
                b.add_final(nf);
            }
        }
        for &(q, top) in &surfaces {
            for s in self.alphabet.symbols() {
                let (to, push) = self.transition(q, s, top);
                match self.alphabet.class(s) {
                    SymClass::Call => {
                        let g = push.expect("call transitions always push");
                        b.call(st[&q], s, gs[&top], st[&to], gs[&g])?;
                    }
                    SymClass::Int => b.internal(st[&q], s, gs[&top], st[&to])?,
                    SymClass::Ret => {
                        if top != BOTTOM {
                            b.ret(st[&q], s, gs[&top], st[&to])?;
                        }
                    }
                }
            }
        }
        Ok(b.build()?.0)
    }

    /// Shortest accepted word in length-lex order, or None when the language
    /// is empty. Knuth-style summary solver: a summary (q, γ, p) carries the
    /// minimal well-matched word leading from q to p with γ on top throughout.
    pub fn shortest_accepted(&self, budget: &Budget) -> Result<Option<Word>> {
        type Var = (State, StackSym, State);
        #[derive(PartialEq, Eq, PartialOrd, Ord)]
        struct Cand(usize, Word, Var);

        let calls = self.alphabet.calls();
        let ints = self.alphabet.internals();
        let rets = self.alphabet.returns();

        let mut known: HashMap<Var, Word> = HashMap::new();
        let mut best: HashMap<Var, Word> = HashMap::new();
        let mut heap: BinaryHeap<Reverse<Cand>> = BinaryHeap::new();
        // Known summaries grouped for the call/return relaxations.
        let mut by_mid_tail: HashMap<(StackSym, State), Vec<State>> = HashMap::new();
        let mut by_head: HashMap<(State, StackSym), Vec<State>> = HashMap::new();
        // Reverse index of call edges: (p1, β) -> [(p, γ, a)].
        let mut rev_call: HashMap<(State, StackSym), Vec<(State, StackSym, Sym)>> =
            HashMap::new();
        for p in 0..self.state_count() as u32 {
            for g in 0..self.stack_count() as u32 {
                for &a in &calls {
                    let (p1, beta) = self.transition(p, a, g);
                    rev_call
                        .entry((p1, beta.unwrap()))
                        .or_default()
                        .push((p, g, a));
                }
            }
        }

        let push_cand =
            |heap: &mut BinaryHeap<Reverse<Cand>>,
             best: &mut HashMap<Var, Word>,
             known: &HashMap<Var, Word>,
             var: Var,
             word: Word| {
                if known.contains_key(&var) {
                    return;
                }
                let better = match best.get(&var) {
                    None => true,
                    Some(cur) => (word.len(), &word) < (cur.len(), cur),
                };
                if better {
                    best.insert(var, word.clone());
                    heap.push(Reverse(Cand(word.len(), word, var)));
                }
            };

        for q in 0..self.state_count() as u32 {
            for g in 0..self.stack_count() as u32 {
                push_cand(&mut heap, &mut best, &known, (q, g, q), Vec::new());
            }
        }

        let mut pops = 0usize;
        while let Some(Reverse(Cand(_, word, var))) = heap.pop() {
            if known.contains_key(&var) {
                continue;
            }
            match best.get(&var) {
                Some(cur) if *cur == word => {}
                _ => continue, // stale entry
            }
            pops += 1;
            budget.check_search("shortest_accepted", pops)?;
            known.insert(var, word.clone());
            let (q, g, p) = var;
            by_mid_tail.entry((g, p)).or_default().push(q);
            by_head.entry((q, g)).or_default().push(p);

            // Extend by an internal letter.
            for &c in &ints {
                let (p2, _) = self.transition(p, c, g);
                let mut w2 = word.clone();
                w2.push(c);
                push_cand(&mut heap, &mut best, &known, (q, g, p2), w2);
            }
            // Extend by a call whose matched segment is already known.
            for &a in &calls {
                let (p1, beta) = self.transition(p, a, g);
                let beta = beta.unwrap();
                if let Some(tails) = by_head.get(&(p1, beta)) {
                    for &p2 in tails.clone().iter() {
                        let inner = known[&(p1, beta, p2)].clone();
                        for &bb in &rets {
                            let (p3, _) = self.transition(p2, bb, beta);
                            let mut w2 = word.clone();
                            w2.push(a);
                            w2.extend_from_slice(&inner);
                            w2.push(bb);
                            push_cand(&mut heap, &mut best, &known, (q, g, p3), w2);
                        }
                    }
                }
            }
            // This summary may be the matched segment of a call elsewhere.
            if let Some(callers) = rev_call.get(&(q, g)).cloned() {
                for (pp, gg, a) in callers {
                    if let Some(starts) = by_mid_tail.get(&(gg, pp)) {
                        for &q0 in starts.clone().iter() {
                            let outer = known[&(q0, gg, pp)].clone();
                            for &bb in &rets {
                                let (p3, _) = self.transition(p, bb, g);
                                let mut w2 = outer.clone();
                                w2.push(a);
                                w2.extend_from_slice(&word);
                                w2.push(bb);
                                push_cand(&mut heap, &mut best, &known, (q0, gg, p3), w2);
                            }
                        }
                    }
                }
            }
        }

        let mut result: Option<Word> = None;
        for &f in &self.finals {
            if let Some(w) = known.get(&(self.init, BOTTOM, f)) {
                let better = match &result {
                    None => true,
                    Some(cur) => (w.len(), w) < (cur.len(), cur),
                };
                if better {
                    result = Some(w.clone());
                }
            }
        }
        Ok(result)
    }

    pub fn is_empty(&self, budget: &Budget) -> Result<bool> {
        Ok(self.shortest_accepted(budget)?.is_none())
    }

    /// None when the machines accept the same language; otherwise the
    /// length-lex least word on which they differ.
    pub fn equivalent(&self, other: &Dvpa, budget: &Budget) -> Result<Option<Word>> {
        let sym_diff = self.product(other, |x, y| x != y)?;
        sym_diff.shortest_accepted(budget)
    }
}

/// Incremental construction with name interning and automatic totalization.
#[derive(Debug)]
pub struct DvpaBuilder {
    alphabet: VpAlphabet,
    state_names: Vec<String>,
    state_ids: BTreeMap<String, State>,
    stack_names: Vec<String>,
    stack_ids: BTreeMap<String, StackSym>,
    init: Option<State>,
    finals: BTreeSet<State>,
    tr: BTreeMap<(State, Sym, StackSym), (State, StackSym)>,
}

impl DvpaBuilder {
    pub fn new(alphabet: VpAlphabet) -> Self {
        let mut b = DvpaBuilder {
            alphabet,
            state_names: Vec::new(),
            state_ids: BTreeMap::new(),
            stack_names: Vec::new(),
            stack_ids: BTreeMap::new(),
            init: None,
            finals: BTreeSet::new(),
            tr: BTreeMap::new(),
        };
        let bot = b.stack_sym(BOTTOM_NAME);
        debug_assert_eq!(bot, BOTTOM);
        b
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

    pub fn set_init(&mut self, q: State) {
        self.init = Some(q);
    }

    pub fn add_final(&mut self, q: State) {
        self.finals.insert(q);
    }

    pub fn call(&mut self, q: State, a: Sym, top: StackSym, to: State, push: StackSym) -> Result<()> {
        if self.alphabet.class(a) != SymClass::Call {
            return Err(Error::invalid(format!(
                "{} is not a call symbol",
                self.alphabet.name(a)
            )));
        }
        if push == BOTTOM {
            return Err(Error::invalid("call transitions must not push the bottom marker"));
        }
        self.insert(q, a, top, to, push)
    }

    pub fn internal(&mut self, q: State, c: Sym, top: StackSym, to: State) -> Result<()> {
        if self.alphabet.class(c) != SymClass::Int {
            return Err(Error::invalid(format!(
                "{} is not an internal symbol",
                self.alphabet.name(c)
            )));
        }
        self.insert(q, c, top, to, NO_PUSH)
    }

    pub fn ret(&mut self, q: State, b: Sym, top: StackSym, to: State) -> Result<()> {
        if self.alphabet.class(b) != SymClass::Ret {
            return Err(Error::invalid(format!(
                "{} is not a return symbol",
                self.alphabet.name(b)
            )));
        }
        self.insert(q, b, top, to, NO_PUSH)
    }

    fn insert(&mut self, q: State, s: Sym, top: StackSym, to: State, push: StackSym) -> Result<()> {
        let key = (q, s, top);
        if let Some(prev) = self.tr.get(&key) {
            if *prev != (to, push) {
                return Err(Error::invalid(format!(
                    "conflicting transitions for ({}, {}, {})",
                    self.state_names[q as usize],
                    self.alphabet.name(s),
                    self.stack_names[top as usize]
                )));
            }
            return Ok(());
        }
        self.tr.insert(key, (to, push));
        Ok(())
    }

    /// Finalizes the machine. Missing table entries are routed to an
    /// implicit `__dead` sink; the second component reports how many entries
    /// were filled in that way (0 when the input table was already total).
    pub fn build(mut self) -> Result<(Dvpa, usize)> {
        let init = self
            .init
            .ok_or_else(|| Error::invalid("initial state not set"))?;
        if self.state_names.is_empty() {
            return Err(Error::invalid("automaton has no states"));
        }
        if init as usize >= self.state_names.len() {
            return Err(Error::invalid("initial state out of range"));
        }
        for &f in &self.finals {
            if f as usize >= self.state_names.len() {
                return Err(Error::invalid("final state out of range"));
            }
        }
        for (&(q, s, top), &(to, push)) in &self.tr {
            if q as usize >= self.state_names.len()
                || to as usize >= self.state_names.len()
                || top as usize >= self.stack_names.len()
                || (push != NO_PUSH && push as usize >= self.stack_names.len())
            {
                return Err(Error::invalid(format!(
                    "transition ({q}, {}, {top}) out of range",
                    self.alphabet.name(s)
                )));
            }
        }

        // Work out whether totalization is needed before interning the sink.
        let full = self.state_names.len() * self.alphabet.len() * self.stack_names.len();
        let missing = full - self.tr.len();
        let mut dead = None;
        let mut dead_push = None;
        if missing > 0 {
            let d = self.state(&fresh_name(&self.state_ids, "__dead"));
            dead = Some(d);
            if !self.alphabet.calls().is_empty() {
                let name = fresh_stack_name(&self.stack_ids);
                dead_push = Some(self.stack_sym(&name));
            }
        }

        let nstates = self.state_names.len();
        let nstack = self.stack_names.len();
        let nsyms = self.alphabet.len();
        let mut targets = vec![0 as State; nstates * nsyms * nstack];
        let mut pushes = vec![NO_PUSH; nstates * nsyms * nstack];
        let mut filled = 0usize;
        for q in 0..nstates as u32 {
            for s in self.alphabet.symbols() {
                for top in 0..nstack as u32 {
                    let i = (q as usize * nsyms + s as usize) * nstack + top as usize;
                    match self.tr.get(&(q, s, top)) {
                        Some(&(to, push)) => {
                            let is_call = self.alphabet.class(s) == SymClass::Call;
                            if is_call && push == NO_PUSH {
                                return Err(Error::invalid(format!(
                                    "call transition ({}, {}, {}) must push",
                                    self.state_names[q as usize],
                                    self.alphabet.name(s),
                                    self.stack_names[top as usize]
                                )));
                            }
                            if !is_call && push != NO_PUSH {
                                return Err(Error::invalid(format!(
                                    "non-call transition ({}, {}, {}) must not push",
                                    self.state_names[q as usize],
                                    self.alphabet.name(s),
                                    self.stack_names[top as usize]
                                )));
                            }
                            targets[i] = to;
                            pushes[i] = push;
                        }
                        None => {
                            let d = dead.expect("sink interned when entries are missing");
                            targets[i] = d;
                            if self.alphabet.class(s) == SymClass::Call {
                                pushes[i] = dead_push.expect("push symbol for sink");
                            }
                            filled += 1;
                        }
                    }
                }
            }
        }
        Ok((
            Dvpa {
                alphabet: self.alphabet,
                state_names: self.state_names,
                stack_names: self.stack_names,
                init,
                finals: self.finals,
                targets,
                pushes,
            },
            filled,
        ))
    }
}

fn fresh_name(taken: &BTreeMap<String, State>, base: &str) -> String {
    if !taken.contains_key(base) {
        return base.to_string();
    }
    let mut i = 1;
    loop {
        let name = format!("{base}{i}");
        if !taken.contains_key(&name) {
            return name;
        }
        i += 1;
    }
}

fn fresh_stack_name(taken: &BTreeMap<String, StackSym>) -> String {
    if !taken.contains_key("__dummy") {
        return "__dummy".to_string();
    }
    let mut i = 1;
    loop {
        let name = format!("__dummy{i}");
        if !taken.contains_key(&name) {
            return name;
        }
        i += 1;
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::vpa::enumerate::well_matched_up_to;

    /// One-state machine accepting every well-matched word (bracket Dyck).
    pub(crate) fn dyck1() -> Dvpa {
        let a = VpAlphabet::new(&["a"], &[], &["b"]).unwrap();
        let mut b = DvpaBuilder::new(a);
        let q = b.state("q");
        let x = b.stack_sym("X");
        b.set_init(q);
        b.add_final(q);
        let (ca, rb) = (0, 1);
        for top in [BOTTOM, x] {
            b.call(q, ca, top, q, x).unwrap();
            b.ret(q, rb, top, q).unwrap();
        }
        let (d, filled) = b.build().unwrap();
        assert_eq!(filled, 0);
        d
    }

    /// {a^n b^n : n >= 0} over the same alphabet.
    pub(crate) fn anbn() -> Dvpa {
        let a = VpAlphabet::new(&["a"], &[], &["b"]).unwrap();
        let mut b = DvpaBuilder::new(a);
        let s = b.state("S");
        let up = b.state("Up");
        let down = b.state("Down");
        let x = b.stack_sym("X");
        b.set_init(s);
        b.add_final(s);
        b.add_final(down);
        let (ca, rb) = (0, 1);
        b.call(s, ca, BOTTOM, up, x).unwrap();
        b.call(up, ca, x, up, x).unwrap();
        b.ret(up, rb, x, down).unwrap();
        b.ret(down, rb, x, down).unwrap();
        let (d, _) = b.build().unwrap();
        d
    }

    #[test]
    fn dyck_membership() {
        let d = dyck1();
        let a = &d.alphabet;
        assert!(d.accepts(&a.parse_word("").unwrap()));
        assert!(d.accepts(&a.parse_word("a b").unwrap()));
        assert!(d.accepts(&a.parse_word("a a b b").unwrap()));
        assert!(d.accepts(&a.parse_word("a b a b").unwrap()));
        assert!(!d.accepts(&a.parse_word("a").unwrap()));
        assert!(!d.accepts(&a.parse_word("b a").unwrap())); // dips
        let out = d.run(&a.parse_word("b a").unwrap());
        assert!(out.dipped);
    }

    #[test]
    fn anbn_membership() {
        let d = anbn();
        let a = &d.alphabet;
        assert!(d.accepts(&a.parse_word("").unwrap()));
        assert!(d.accepts(&a.parse_word("a a b b").unwrap()));
        assert!(!d.accepts(&a.parse_word("a b a b").unwrap()));
    }

    #[test]
    fn dead_sink_totalization() {
        let alpha = VpAlphabet::new(&["a"], &["c"], &["b"]).unwrap();
        let mut b = DvpaBuilder::new(alpha);
        let q = b.state("q");
        b.set_init(q);
        b.add_final(q);
        let (d, filled) = b.build().unwrap();
        assert!(filled > 0);
        assert_eq!(d.state_count(), 2);
        assert!(d.accepts(&[])); // empty word still accepted
        assert!(!d.accepts(&d.alphabet.parse_word("c").unwrap()));
    }

    #[test]
    fn shortest_separator_is_canonical() {
        let budget = Budget::default();
        let d = dyck1();
        let n = anbn();
        let sep = d.equivalent(&n, &budget).unwrap().unwrap();
        assert_eq!(d.alphabet.format_word(&sep), "a b a b");
        assert!(d.equivalent(&d, &budget).unwrap().is_none());
    }

    #[test]
    fn products_agree_with_pointwise_booleans() {
        let budget = Budget::default();
        let d = dyck1();
        let n = anbn();
        let inter = d.intersect(&n).unwrap();
        let uni = d.union(&n).unwrap();
        for w in well_matched_up_to(&d.alphabet, 8, &budget).unwrap() {
            assert_eq!(inter.accepts(&w), d.accepts(&w) && n.accepts(&w));
            assert_eq!(uni.accepts(&w), d.accepts(&w) || n.accepts(&w));
        }
        // Intersection of Dyck with a^n b^n is a^n b^n itself.
        assert!(inter.equivalent(&n, &budget).unwrap().is_none());
    }

    #[test]
    fn emptiness_witness() {
        let budget = Budget::default();
        let d = anbn();
        assert_eq!(
            d.shortest_accepted(&budget).unwrap().unwrap(),
            Vec::<Sym>::new()
        );
        let diff = d.product(&d, |x, y| x != y).unwrap();
        assert!(diff.is_empty(&budget).unwrap());
    }
}
