//! Very visibly pushdown grammars.
//!
//! Productions are chains: `T -> ε` or `T -> u T' v` where (u, v) is a
//! context with Δ(u) >= 1. Words are therefore telescopes
//! u_1 u_2 ... u_n v_n ... v_1, which is exactly the shape the classifier's
//! witness grammars take. Parsing peels the outermost production off both
//! ends; the automaton translation runs through an item NVPA whose stack
//! symbols name the pending calls of each production.

use std::collections::{BTreeMap, HashMap};

use super::alphabet::{Sym, SymClass, VpAlphabet, Word};
use super::nvpa::Nvpa;
use crate::budget::Budget;
use crate::error::{Error, Result};

pub type NtId = u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Production {
    pub lhs: NtId,
    pub u: Word,
    /// None for the ε-production (u and v must then be empty).
    pub inner: Option<NtId>,
    pub v: Word,
}

#[derive(Debug, Clone)]
pub struct Vvpg {
    pub alphabet: VpAlphabet,
    pub nonterminals: Vec<String>,
    pub start: NtId,
    pub prods: Vec<Production>,
}

/// Static role of each letter position inside one production side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Role {
    Int,
    LocalCall,
    LocalRet,
    /// k-th pending call of the upper word, k = 1..m bottom-up.
    PendingCall(usize),
    /// t-th below-zero return of the lower word, t = 1.. in reading order;
    /// it pops pending call m - t + 1.
    PendingRet(usize),
}

impl Vvpg {
    pub fn nt_name(&self, t: NtId) -> &str {
        &self.nonterminals[t as usize]
    }

    pub fn nt_by_name(&self, name: &str) -> Option<NtId> {
        self.nonterminals
            .iter()
            .position(|n| n == name)
            .map(|i| i as NtId)
    }

    fn has_eps(&self, t: NtId) -> bool {
        self.prods
            .iter()
            .any(|p| p.lhs == t && p.inner.is_none())
    }

    /// Checks the structural invariants; returns per-production heights.
    pub fn validate(&self) -> Result<Vec<usize>> {
        if self.start as usize >= self.nonterminals.len() {
            return Err(Error::invalid("start nonterminal out of range"));
        }
        let mut heights = Vec::with_capacity(self.prods.len());
        for (i, p) in self.prods.iter().enumerate() {
            if p.lhs as usize >= self.nonterminals.len() {
                return Err(Error::invalid(format!("production {i}: lhs out of range")));
            }
            match p.inner {
                None => {
                    if !p.u.is_empty() || !p.v.is_empty() {
                        return Err(Error::invalid(format!(
                            "production {i}: ε-production must have empty sides"
                        )));
                    }
                    heights.push(0);
                }
                Some(t) => {
                    if t as usize >= self.nonterminals.len() {
                        return Err(Error::invalid(format!(
                            "production {i}: inner nonterminal out of range"
                        )));
                    }
                    let (m, _, _) = analyze_sides(&self.alphabet, &p.u, &p.v)
                        .map_err(|e| Error::invalid(format!("production {i}: {e}")))?;
                    if m < 1 {
                        return Err(Error::invalid(format!(
                            "production {i}: upper word must leave at least one pending call"
                        )));
                    }
                    heights.push(m);
                }
            }
        }
        Ok(heights)
    }

    /// Membership by recursive descent on both ends (memoized).
    pub fn derives(&self, w: &[Sym]) -> bool {
        let mut memo: HashMap<(NtId, usize, usize), bool> = HashMap::new();
        self.derives_span(self.start, w, 0, w.len(), &mut memo)
    }

    fn derives_span(
        &self,
        t: NtId,
        w: &[Sym],
        lo: usize,
        hi: usize,
        memo: &mut HashMap<(NtId, usize, usize), bool>,
    ) -> bool {
        if let Some(&r) = memo.get(&(t, lo, hi)) {
            return r;
        }
        memo.insert((t, lo, hi), false); // cycle guard; chains shrink anyway
        let mut ok = false;
        for p in self.prods.iter().filter(|p| p.lhs == t) {
            match p.inner {
                None => {
                    if lo == hi {
                        ok = true;
                    }
                }
                Some(inner) => {
                    let (nu, nv) = (p.u.len(), p.v.len());
                    if hi - lo >= nu + nv
                        && w[lo..lo + nu] == p.u[..]
                        && w[hi - nv..hi] == p.v[..]
                        && self.derives_span(inner, w, lo + nu, hi - nv, memo)
                    {
                        ok = true;
                    }
                }
            }
            if ok {
                break;
            }
        }
        memo.insert((t, lo, hi), ok);
        ok
    }

    /// All derived words of length <= max_len, length-lex order.
    pub fn words_up_to(&self, max_len: usize, budget: &Budget) -> Result<Vec<Word>> {
        // table[t][n] = sorted words of length n derived from t
        let nt = self.nonterminals.len();
        let mut table: Vec<Vec<Vec<Word>>> = vec![vec![Vec::new(); max_len + 1]; nt];
        let mut total = 0usize;
        for n in 0..=max_len {
            // Fixpoint within one length: productions with |u|+|v| = 0 don't
            // exist (ε-productions have no inner), so each step consumes
            // at least two letters and plain iteration terminates.
            for t in 0..nt as NtId {
                let mut bucket: Vec<Word> = Vec::new();
                for p in self.prods.iter().filter(|p| p.lhs == t) {
                    match p.inner {
                        None => {
                            if n == 0 {
                                bucket.push(Vec::new());
                            }
                        }
                        Some(inner) => {
                            let frame = p.u.len() + p.v.len();
                            if frame <= n {
                                for x in &table[inner as usize][n - frame] {
                                    let mut w = p.u.clone();
                                    w.extend_from_slice(x);
                                    w.extend_from_slice(&p.v);
                                    bucket.push(w);
                                }
                            }
                        }
                    }
                }
                bucket.sort();
                bucket.dedup();
                total += bucket.len();
                budget.check_enumeration("vvpg_words_up_to", total)?;
                table[t as usize][n] = bucket;
            }
        }
        let mut out = Vec::new();
        for n in 0..=max_len {
            out.extend(table[self.start as usize][n].iter().cloned());
        }
        Ok(out)
    }

    /// Item NVPA: states walk the letter positions of each production's two
    /// sides; pending calls push (production, rank) tags that the matching
    /// below-zero returns of the same production pop again. End-of-side
    /// closure is inlined, so wrong parent guesses die on a tag mismatch.
    pub fn to_nvpa(&self) -> Result<Nvpa> {
        self.validate()?;
        let mut n = Nvpa::new(self.alphabet.clone());
        let local = n.stack_sym("LOC");

        // Roles for both sides of every non-ε production.
        let mut roles: BTreeMap<usize, (Vec<Role>, Vec<Role>, usize)> = BTreeMap::new();
        for (pi, p) in self.prods.iter().enumerate() {
            if p.inner.is_some() {
                let (m, ru, rv) =
                    analyze_sides(&self.alphabet, &p.u, &p.v).map_err(Error::invalid)?;
                roles.insert(pi, (ru, rv, m));
            }
        }

        // Intern all states and tags up front.
        let init = n.state("I");
        let mut u_states: BTreeMap<(usize, usize), u32> = BTreeMap::new();
        let mut d_states: BTreeMap<(usize, usize), u32> = BTreeMap::new();
        let mut tags: BTreeMap<(usize, usize), u32> = BTreeMap::new();
        for (&pi, (ru, rv, m)) in &roles {
            for i in 1..=ru.len() {
                u_states.insert((pi, i), n.state(&format!("U{pi}_{i}")));
            }
            for j in 1..=rv.len() {
                d_states.insert((pi, j), n.state(&format!("D{pi}_{j}")));
            }
            for k in 1..=*m {
                tags.insert((pi, k), n.stack_sym(&format!("P{pi}_{k}")));
            }
        }

        // Calls and internals do not inspect the top meaningfully, so their
        // edges are replicated over every top that can occur: bottom, the
        // local symbol, and all pending tags.
        let mut all_tops: Vec<u32> = vec![super::dvpa::BOTTOM, local];
        all_tops.extend(tags.values().copied());

        // Entry edges of a nonterminal: first letter of each of its non-ε
        // productions. Resume edges of a production: first letter of its
        // lower side.
        let entry_edges = |t: NtId| -> Vec<(Sym, Role, usize, u32)> {
            self.prods
                .iter()
                .enumerate()
                .filter(|(_, p)| p.lhs == t && p.inner.is_some())
                .map(|(pi, p)| (p.u[0], roles[&pi].0[0], pi, u_states[&(pi, 1)]))
                .collect()
        };
        let resume_edge = |pi: usize| -> (Sym, Role, usize, u32) {
            let p = &self.prods[pi];
            (p.v[0], roles[&pi].1[0], pi, d_states[&(pi, 1)])
        };

        // Gather every edge as data, then install.
        let mut edges: Vec<(u32, Sym, Role, usize, u32)> = Vec::new();

        for (sym, role, pi, dst) in entry_edges(self.start) {
            edges.push((init, sym, role, pi, dst));
        }
        for (&pi, (ru, rv, _)) in &roles {
            let p = &self.prods[pi];
            for i in 1..ru.len() {
                edges.push((u_states[&(pi, i)], p.u[i], ru[i], pi, u_states[&(pi, i + 1)]));
            }
            // End of the upper side: enter a child, or resume our own lower
            // side when the inner nonterminal can vanish.
            let end_u = u_states[&(pi, ru.len())];
            let inner = p.inner.expect("roles only cover non-ε productions");
            for (sym, role, qi, dst) in entry_edges(inner) {
                edges.push((end_u, sym, role, qi, dst));
            }
            if self.has_eps(inner) {
                let (sym, role, qi, dst) = resume_edge(pi);
                edges.push((end_u, sym, role, qi, dst));
            }
            for j in 1..rv.len() {
                edges.push((d_states[&(pi, j)], p.v[j], rv[j], pi, d_states[&(pi, j + 1)]));
            }
            // End of the lower side: resume any production that could have
            // been our parent. Mismatches die at their pending pops.
            let end_v = d_states[&(pi, rv.len())];
            for (qi, q) in self.prods.iter().enumerate() {
                if q.inner == Some(p.lhs) {
                    let (sym, role, ri, dst) = resume_edge(qi);
                    edges.push((end_v, sym, role, ri, dst));
                }
            }
        }

        edges.sort();
        edges.dedup();
        for (src, sym, role, pi, dst) in edges {
            match role {
                Role::Int => {
                    for &t in &all_tops {
                        n.add_int(src, sym, t, dst)?;
                    }
                }
                Role::LocalCall => {
                    for &t in &all_tops {
                        n.add_call(src, sym, t, dst, local)?;
                    }
                }
                Role::PendingCall(k) => {
                    let tag = tags[&(pi, k)];
                    for &t in &all_tops {
                        n.add_call(src, sym, t, dst, tag)?;
                    }
                }
                Role::LocalRet => {
                    n.add_ret(src, sym, local, dst)?;
                }
                Role::PendingRet(t) => {
                    let m = roles[&pi].2;
                    let tag = tags[&(pi, m - t + 1)];
                    n.add_ret(src, sym, tag, dst)?;
                }
            }
        }

        n.inits.insert(init);
        if self.has_eps(self.start) {
            n.finals.insert(init);
        }
        for (&pi, (_, rv, _)) in &roles {
            if self.prods[pi].lhs == self.start {
                n.finals.insert(d_states[&(pi, rv.len())]);
            }
        }
        Ok(n)
    }
}

/// Computes Δ(u) together with the role of every position in u and v.
/// Errors when (u, v) is not a valid context shape for a production.
fn analyze_sides(
    a: &VpAlphabet,
    u: &[Sym],
    v: &[Sym],
) -> std::result::Result<(usize, Vec<Role>, Vec<Role>), String> {
    let mut ru = vec![Role::Int; u.len()];
    let mut stack: Vec<usize> = Vec::new();
    for (i, &s) in u.iter().enumerate() {
        match a.class(s) {
            SymClass::Int => {}
            SymClass::Call => stack.push(i),
            SymClass::Ret => match stack.pop() {
                Some(j) => {
                    ru[j] = Role::LocalCall;
                    ru[i] = Role::LocalRet;
                }
                None => return Err("upper word dips below its floor".into()),
            },
        }
    }
    let m = stack.len();
    for (k, &j) in stack.iter().enumerate() {
        ru[j] = Role::PendingCall(k + 1);
    }
    let mut rv = vec![Role::Int; v.len()];
    let mut vstack: Vec<usize> = Vec::new();
    let mut below = 0usize;
    for (i, &s) in v.iter().enumerate() {
        match a.class(s) {
            SymClass::Int => {}
            SymClass::Call => vstack.push(i),
            SymClass::Ret => match vstack.pop() {
                Some(j) => {
                    rv[j] = Role::LocalCall;
                    rv[i] = Role::LocalRet;
                }
                None => {
                    below += 1;
                    rv[i] = Role::PendingRet(below);
                }
            },
        }
    }
    if !vstack.is_empty() {
        return Err("lower word has unmatched calls".into());
    }
    if below != m {
        return Err(format!(
            "lower word matches {below} pending calls, upper leaves {m}"
        ));
    }
    Ok((m, ru, rv))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::vpa::enumerate::well_matched_up_to;

    fn alphabet() -> VpAlphabet {
        VpAlphabet::new(&["a"], &["c"], &["b1", "b2"]).unwrap()
    }

    /// S -> ε | a S b1 | a c S b2
    pub(crate) fn l12_grammar() -> Vvpg {
        let a = alphabet();
        let w = |t: &str| a.parse_word(t).unwrap();
        Vvpg {
            alphabet: a.clone(),
            nonterminals: vec!["S".into()],
            start: 0,
            prods: vec![
                Production { lhs: 0, u: vec![], inner: None, v: vec![] },
                Production { lhs: 0, u: w("a"), inner: Some(0), v: w("b1") },
                Production { lhs: 0, u: w("a c"), inner: Some(0), v: w("b2") },
            ],
        }
    }

    /// Even-c restriction: S -> ε | a S b1 | a c T b2 ; T -> a T b1 | a c S b2
    pub(crate) fn k_grammar() -> Vvpg {
        let a = alphabet();
        let w = |t: &str| a.parse_word(t).unwrap();
        Vvpg {
            alphabet: a.clone(),
            nonterminals: vec!["S".into(), "T".into()],
            start: 0,
            prods: vec![
                Production { lhs: 0, u: vec![], inner: None, v: vec![] },
                Production { lhs: 0, u: w("a"), inner: Some(0), v: w("b1") },
                Production { lhs: 0, u: w("a c"), inner: Some(1), v: w("b2") },
                Production { lhs: 1, u: w("a"), inner: Some(1), v: w("b1") },
                Production { lhs: 1, u: w("a c"), inner: Some(0), v: w("b2") },
            ],
        }
    }

    #[test]
    fn validate_and_heights() {
        assert_eq!(l12_grammar().validate().unwrap(), vec![0, 1, 1]);
        assert_eq!(k_grammar().validate().unwrap(), vec![0, 1, 1, 1, 1]);
        // A production whose lower side over-matches is rejected.
        let a = alphabet();
        let bad = Vvpg {
            alphabet: a.clone(),
            nonterminals: vec!["S".into()],
            start: 0,
            prods: vec![Production {
                lhs: 0,
                u: a.parse_word("a").unwrap(),
                inner: Some(0),
                v: a.parse_word("b1 b1").unwrap(),
            }],
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn derives_hand_words() {
        let g = l12_grammar();
        let a = &g.alphabet;
        for yes in ["", "a b1", "a c b2", "a a c b2 b1", "a c a b1 b2"] {
            assert!(g.derives(&a.parse_word(yes).unwrap()), "{yes}");
        }
        for no in ["a b2", "a c b1", "a b1 a b1", "c", "a", "b1"] {
            assert!(!g.derives(&a.parse_word(no).unwrap()), "{no}");
        }
    }

    #[test]
    fn k_counts_c_mod_two() {
        let g = k_grammar();
        let a = &g.alphabet;
        for yes in ["", "a b1", "a a b1 b1", "a c a c b2 b2"] {
            assert!(g.derives(&a.parse_word(yes).unwrap()), "{yes}");
        }
        // One c: in the unrestricted language but not here.
        let w = a.parse_word("a c a b1 b2").unwrap();
        assert!(!g.derives(&w));
        assert!(l12_grammar().derives(&w));
    }

    #[test]
    fn nvpa_matches_parser() {
        let budget = Budget::default();
        for g in [l12_grammar(), k_grammar()] {
            let n = g.to_nvpa().unwrap();
            let d = n.determinize(&budget).unwrap();
            for w in well_matched_up_to(&g.alphabet, 8, &budget).unwrap() {
                let want = g.derives(&w);
                assert_eq!(n.accepts(&w), want, "nvpa on {}", g.alphabet.format_word(&w));
                assert_eq!(d.accepts(&w), want, "dvpa on {}", g.alphabet.format_word(&w));
            }
        }
    }

    #[test]
    fn enumeration_matches_filter() {
        let budget = Budget::default();
        let g = k_grammar();
        let listed = g.words_up_to(8, &budget).unwrap();
        let filtered: Vec<_> = well_matched_up_to(&g.alphabet, 8, &budget)
            .unwrap()
            .into_iter()
            .filter(|w| g.derives(w))
            .collect();
        let mut sorted = listed.clone();
        sorted.sort_by(|x, y| (x.len(), x).cmp(&(y.len(), y)));
        assert_eq!(sorted, filtered);
        assert_eq!(listed, sorted, "words_up_to already length-lex");
    }
}
