//! Parikh sets of context languages, read off the algebra itself.
//!
//! For o ∈ O let L_o = {(u,v) ∈ Con(Σ) : ψ̄(ext_{u,v}) = o} and L_{o↑} its
//! restriction to Δ(u) > 0. The stair factorization turns both into
//! context-free languages over two length-counting terminals, so their
//! Parikh images P(L_o) ⊆ N² (coordinates |u|, |v|) fall out of the
//! generic CFG machinery without building any marked automaton. The same
//! trick yields the pair sets
//!
//!   K_{e↑} = {(|u|, |u'|) : (u,v), (u',v) ∈ L_{e↑} for a common v},
//!
//! which drive the weak length-synchronicity test: two contexts share v
//! iff their stairs have the same height, the same separators b_i and the
//! same lower pieces y_i, while the upper pieces and calls stay free.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::budget::Budget;
use crate::error::Result;
use crate::ext::{ExtAlgebra, OElem, RElem};
use crate::parikh::{parikh_image, Cfg, CfgSym, SemilinearSet};
use crate::vpa::Sym;

/// nonempty[r] iff some well-matched word evaluates to r under φ̄.
pub fn nonempty_classes(alg: &ExtAlgebra) -> Result<Vec<bool>> {
    let k = alg.kernel();
    let al = alg.alphabet();
    let mut ne = vec![false; alg.r_size()];
    ne[k.one() as usize] = true;
    loop {
        let mut changed = false;
        let cur: Vec<RElem> = (0..alg.r_size() as RElem)
            .filter(|&r| ne[r as usize])
            .collect();
        for &r in &cur {
            for c in al.internals() {
                let t = k.mul(r, k.phi(c)?) as usize;
                if !ne[t] {
                    ne[t] = true;
                    changed = true;
                }
            }
            for &s in &cur {
                for a in al.calls() {
                    for b in al.returns() {
                        let t = k.mul(r, k.psi_apply(a, b, s)?) as usize;
                        if !ne[t] {
                            ne[t] = true;
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            return Ok(ne);
        }
    }
}

/// One grammar with a start symbol per context value: nonterminal O_o
/// derives t_u^|u| t_v^|v| for every (u,v) ∈ L_o, and O↑_o the same with
/// Δ(u) > 0. Family W/V derives t^|w| for each well-matched w by φ̄-class,
/// one copy per counting axis.
pub struct ContextGrammar {
    cfg: Cfg,
    o_base: usize,
    o_up: usize,
}

impl ContextGrammar {
    pub fn new(alg: &ExtAlgebra, budget: &Budget) -> Result<ContextGrammar> {
        let k = alg.kernel();
        let al = alg.alphabet();
        let nr = alg.r_size();
        let no = alg.o_size();
        let o_base = 2 * nr;
        let o_up = 2 * nr + no;

        let mut prods: BTreeSet<(usize, Vec<CfgSym>)> = BTreeSet::new();
        for (fam, t) in [(0usize, CfgSym::T(0)), (nr, CfgSym::T(1))] {
            prods.insert((fam + k.one() as usize, vec![]));
            for r in 0..nr as RElem {
                for c in al.internals() {
                    prods.insert((
                        fam + k.mul(r, k.phi(c)?) as usize,
                        vec![CfgSym::N(fam + r as usize), t],
                    ));
                }
                for s in 0..nr as RElem {
                    for a in al.calls() {
                        for b in al.returns() {
                            prods.insert((
                                fam + k.mul(r, k.psi_apply(a, b, s)?) as usize,
                                vec![
                                    CfgSym::N(fam + r as usize),
                                    t,
                                    CfgSym::N(fam + s as usize),
                                    t,
                                ],
                            ));
                        }
                    }
                }
            }
        }
        // Innermost stair factor λ_r ρ_s: pieces around the hole.
        for r in 0..nr as RElem {
            for s in 0..nr as RElem {
                let o = alg.compose(alg.lambda(r), alg.rho(s));
                prods.insert((
                    o_base + o as usize,
                    vec![CfgSym::N(r as usize), CfgSym::N(nr + s as usize)],
                ));
            }
        }
        // Outer stair factor λ_r ρ_s ψ(a,b) wrapped around an inner chain.
        for r in 0..nr as RElem {
            budget.check_closure("classify.context_grammar", prods.len())?;
            for s in 0..nr as RElem {
                let lr = alg.compose(alg.lambda(r), alg.rho(s));
                for a in al.calls() {
                    for b in al.returns() {
                        let f = alg.compose(lr, alg.psi(a, b)?);
                        for o in 0..no as OElem {
                            let g = alg.compose(f, o) as usize;
                            let rhs = vec![
                                CfgSym::N(r as usize),
                                CfgSym::T(0),
                                CfgSym::N(o_base + o as usize),
                                CfgSym::T(1),
                                CfgSym::N(nr + s as usize),
                            ];
                            prods.insert((o_base + g, rhs.clone()));
                            prods.insert((o_up + g, rhs));
                        }
                    }
                }
            }
        }
        budget.check_closure("classify.context_grammar", prods.len())?;

        let mut nonterminals = Vec::with_capacity(2 * nr + 2 * no);
        for r in 0..nr {
            nonterminals.push(format!("Wu_{}", k.r_name(r as RElem)));
        }
        for r in 0..nr {
            nonterminals.push(format!("Wv_{}", k.r_name(r as RElem)));
        }
        for o in 0..no {
            nonterminals.push(format!("O{o}"));
        }
        for o in 0..no {
            nonterminals.push(format!("U{o}"));
        }
        let cfg = Cfg {
            terminals: vec!["|u|".into(), "|v|".into()],
            nonterminals,
            start: o_base,
            prods: prods.into_iter().collect(),
        };
        cfg.validate()?;
        Ok(ContextGrammar { cfg, o_base, o_up })
    }

    fn image_from(&self, start: usize, budget: &Budget) -> Result<SemilinearSet> {
        let mut g = self.cfg.clone();
        g.start = start;
        parikh_image(&g, budget)
    }

    /// P(L_o).
    pub fn t_set(&self, o: OElem, budget: &Budget) -> Result<SemilinearSet> {
        self.image_from(self.o_base + o as usize, budget)
    }

    /// P(L_{o↑}).
    pub fn t_up_set(&self, o: OElem, budget: &Budget) -> Result<SemilinearSet> {
        self.image_from(self.o_up + o as usize, budget)
    }
}

/// P(K_{e↑}) ⊆ N², coordinates (|u|, |u'|).
///
/// Nonterminal P_{(o1,o2)} tracks the pair of values the two upper words
/// reach through a shared stair skeleton; the grammar is grown backwards
/// from the start pair (e, e) so only pairs on some derivation survive.
pub fn k_up_pset(alg: &ExtAlgebra, e: OElem, budget: &Budget) -> Result<SemilinearSet> {
    let k = alg.kernel();
    let al = alg.alphabet();
    let nr = alg.r_size();
    let no = alg.o_size();
    let ne = nonempty_classes(alg)?;

    // Step factors grouped by the shared lower data (s, b); the upper
    // piece class r and the call a stay free per side.
    let mut halves: BTreeMap<(RElem, Sym), BTreeSet<(OElem, RElem)>> = BTreeMap::new();
    for s in 0..nr as RElem {
        if !ne[s as usize] {
            continue;
        }
        for b in al.returns() {
            let set = halves.entry((s, b)).or_default();
            for r in 0..nr as RElem {
                if !ne[r as usize] {
                    continue;
                }
                let lr = alg.compose(alg.lambda(r), alg.rho(s));
                for a in al.calls() {
                    set.insert((alg.compose(lr, alg.psi(a, b)?), r));
                }
            }
        }
    }

    // pre[f][g] = { o : f ∘ o = g }, one table per distinct factor.
    let mut pre: BTreeMap<OElem, Vec<Vec<OElem>>> = BTreeMap::new();
    for set in halves.values() {
        for &(f, _) in set {
            pre.entry(f).or_insert_with(|| {
                let mut table = vec![Vec::new(); no];
                for o in 0..no as OElem {
                    table[alg.compose(f, o) as usize].push(o);
                }
                table
            });
        }
    }

    // Nonterminals: 0 the start (≥ 1 step enforced), then the two W
    // families, then discovered pairs.
    let mut st = KState {
        nr,
        pair_nt: BTreeMap::new(),
        names: Vec::new(),
        prods: BTreeSet::new(),
        queue: VecDeque::new(),
    };

    expand_pair(&mut st, 0, (e, e), &halves, &pre, budget)?;
    while let Some(p) = st.queue.pop_front() {
        let lhs = st.pair_nt[&p];
        expand_pair(&mut st, lhs, p, &halves, &pre, budget)?;
        // Innermost factor: independent upper pieces around the hole, one
        // shared lower piece class.
        for s in 0..nr as RElem {
            if !ne[s as usize] {
                continue;
            }
            for r1 in 0..nr as RElem {
                if !ne[r1 as usize] || alg.compose(alg.lambda(r1), alg.rho(s)) != p.0 {
                    continue;
                }
                for r2 in 0..nr as RElem {
                    if ne[r2 as usize] && alg.compose(alg.lambda(r2), alg.rho(s)) == p.1 {
                        st.prods
                            .insert((lhs, vec![CfgSym::N(1 + r1 as usize), CfgSym::N(1 + nr + r2 as usize)]));
                    }
                }
            }
        }
    }

    // Length grammars for the two axes.
    for (fam, t) in [(1usize, CfgSym::T(0)), (1 + nr, CfgSym::T(1))] {
        st.prods.insert((fam + k.one() as usize, vec![]));
        for r in 0..nr as RElem {
            for c in al.internals() {
                st.prods.insert((
                    fam + k.mul(r, k.phi(c)?) as usize,
                    vec![CfgSym::N(fam + r as usize), t],
                ));
            }
            for s in 0..nr as RElem {
                for a in al.calls() {
                    for b in al.returns() {
                        st.prods.insert((
                            fam + k.mul(r, k.psi_apply(a, b, s)?) as usize,
                            vec![
                                CfgSym::N(fam + r as usize),
                                t,
                                CfgSym::N(fam + s as usize),
                                t,
                            ],
                        ));
                    }
                }
            }
        }
    }

    let mut nonterminals = vec!["K".to_string()];
    for r in 0..nr {
        nonterminals.push(format!("Wu_{}", k.r_name(r as RElem)));
    }
    for r in 0..nr {
        nonterminals.push(format!("Wv_{}", k.r_name(r as RElem)));
    }
    nonterminals.extend(st.names);
    let cfg = Cfg {
        terminals: vec!["|u|".into(), "|u'|".into()],
        nonterminals,
        start: 0,
        prods: st.prods.into_iter().collect(),
    };
    cfg.validate()?;
    parikh_image(&cfg, budget)
}

struct KState {
    nr: usize,
    pair_nt: BTreeMap<(OElem, OElem), usize>,
    names: Vec<String>,
    prods: BTreeSet<(usize, Vec<CfgSym>)>,
    queue: VecDeque<(OElem, OElem)>,
}

impl KState {
    fn intern(&mut self, p: (OElem, OElem)) -> usize {
        if let Some(&nt) = self.pair_nt.get(&p) {
            return nt;
        }
        let nt = 1 + 2 * self.nr + self.pair_nt.len();
        self.pair_nt.insert(p, nt);
        self.names.push(format!("P{}_{}", p.0, p.1));
        self.queue.push_back(p);
        nt
    }
}

/// Step productions into a target pair; the start nonterminal targets (e, e).
fn expand_pair(
    st: &mut KState,
    lhs: usize,
    target: (OElem, OElem),
    halves: &BTreeMap<(RElem, Sym), BTreeSet<(OElem, RElem)>>,
    pre: &BTreeMap<OElem, Vec<Vec<OElem>>>,
    budget: &Budget,
) -> Result<()> {
    let nr = st.nr;
    for set in halves.values() {
        for &(f1, r1) in set {
            for &(f2, r2) in set {
                for &o1 in &pre[&f1][target.0 as usize] {
                    for &o2 in &pre[&f2][target.1 as usize] {
                        let inner = st.intern((o1, o2));
                        st.prods.insert((
                            lhs,
                            vec![
                                CfgSym::N(1 + r1 as usize),
                                CfgSym::T(0),
                                CfgSym::N(1 + nr + r2 as usize),
                                CfgSym::T(1),
                                CfgSym::N(inner),
                            ],
                        ));
                    }
                }
            }
        }
    }
    budget.check_closure("classify.k_grammar", st.prods.len() + st.pair_nt.len())?;
    Ok(())
}

/// Memoized Parikh sets over one algebra.
pub struct PSets<'a> {
    pub alg: &'a ExtAlgebra,
    grammar: ContextGrammar,
    t: Vec<Option<SemilinearSet>>,
    t_up: Vec<Option<SemilinearSet>>,
    k_up: BTreeMap<OElem, SemilinearSet>,
}

impl<'a> PSets<'a> {
    pub fn new(alg: &'a ExtAlgebra, budget: &Budget) -> Result<PSets<'a>> {
        Ok(PSets {
            alg,
            grammar: ContextGrammar::new(alg, budget)?,
            t: vec![None; alg.o_size()],
            t_up: vec![None; alg.o_size()],
            k_up: BTreeMap::new(),
        })
    }

    /// P(L_o).
    pub fn t(&mut self, o: OElem, budget: &Budget) -> Result<SemilinearSet> {
        if self.t[o as usize].is_none() {
            self.t[o as usize] = Some(self.grammar.t_set(o, budget)?);
        }
        Ok(self.t[o as usize].clone().unwrap())
    }

    /// P(L_{o↑}).
    pub fn t_up(&mut self, o: OElem, budget: &Budget) -> Result<SemilinearSet> {
        if self.t_up[o as usize].is_none() {
            self.t_up[o as usize] = Some(self.grammar.t_up_set(o, budget)?);
        }
        Ok(self.t_up[o as usize].clone().unwrap())
    }

    /// P(K_{e↑}).
    pub fn k_up(&mut self, e: OElem, budget: &Budget) -> Result<SemilinearSet> {
        if let Some(s) = self.k_up.get(&e) {
            return Ok(s.clone());
        }
        let s = k_up_pset(self.alg, e, budget)?;
        self.k_up.insert(e, s.clone());
        Ok(s)
    }

    /// P(M_e) = ⋃ { P(L_{f↑}) : e ∘ f = e }, the length pairs of the
    /// middles U_e.
    pub fn s_e(&mut self, e: OElem, budget: &Budget) -> Result<SemilinearSet> {
        let mut out = SemilinearSet::empty(2);
        for f in 0..self.alg.o_size() as OElem {
            if self.alg.compose(e, f) == e {
                out = out.union(&self.t_up(f, budget)?);
            }
        }
        out.normalize();
        Ok(out)
    }
}
