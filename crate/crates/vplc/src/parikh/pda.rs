//! Realtime pushdown automata as a bridge from visibly pushdown machines to
//! context-free grammars: DVPA → PDA → letter projection → CFG.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::parikh::cfg::{Cfg, CfgSym};
use crate::vpa::alphabet::SymClass;
use crate::vpa::dvpa::{Dvpa, BOTTOM};

/// Reads `letter`, pops `pop`, pushes `push` (index 0 becomes the new top).
#[derive(Debug, Clone)]
pub struct PdaTrans {
    pub from: usize,
    pub letter: usize,
    pub pop: usize,
    pub to: usize,
    pub push: Vec<usize>,
}

/// Realtime PDA accepting by final state with arbitrary stack. By
/// construction the bottom symbol (index 0) is never popped: transitions
/// popping it push it back underneath.
#[derive(Debug, Clone)]
pub struct Pda {
    pub terms: Vec<String>,
    pub stack_names: Vec<String>,
    pub state_count: usize,
    pub init: usize,
    pub finals: BTreeSet<usize>,
    pub trans: Vec<PdaTrans>,
}

/// PDA with the same accepted language as the DVPA. States carry a flag
/// telling whether the stack is exactly the bottom marker, maintained by
/// tagging stack symbols pushed directly onto the bottom; acceptance by
/// final state then coincides with the DVPA's empty-stack condition.
/// Returns reading the bottom are dropped, which rejects exactly the
/// dipping words. Transitions are emitted only for (state, top) pairs that
/// can surface, so the table stays proportional to reachable behaviour.
pub fn dvpa_to_pda(d: &Dvpa, budget: &Budget) -> Result<Pda> {
    let ng = d.stack_count();
    // (q, at_bottom) -> q * 2 + flag
    let st = |q: u32, at_bottom: bool| -> usize { q as usize * 2 + usize::from(at_bottom) };
    // Stack symbols: 0 = bottom, g in 1..ng plain, ng-1+g tagged ("pushed
    // onto bottom").
    let plain = |g: u32| -> usize { g as usize };
    let tagged = |g: u32| -> usize { ng - 1 + g as usize };
    let mut stack_names: Vec<String> = (0..ng as u32).map(|g| d.stack_name(g).to_string()).collect();
    for g in 1..ng as u32 {
        stack_names.push(format!("{}'", d.stack_name(g)));
    }

    let mut trans = Vec::new();
    for &(q, top) in &d.surface_pairs(budget)? {
        for s in d.alphabet.symbols() {
            let (to, push) = d.transition(q, s, top);
            match d.alphabet.class(s) {
                SymClass::Call => {
                    let g = push.expect("call must push");
                    if top == BOTTOM {
                        trans.push(PdaTrans {
                            from: st(q, true),
                            letter: s as usize,
                            pop: 0,
                            to: st(to, false),
                            push: vec![tagged(g), 0],
                        });
                    } else {
                        for rep in [plain(top), tagged(top)] {
                            trans.push(PdaTrans {
                                from: st(q, false),
                                letter: s as usize,
                                pop: rep,
                                to: st(to, false),
                                push: vec![plain(g), rep],
                            });
                        }
                    }
                }
                SymClass::Int => {
                    if top == BOTTOM {
                        trans.push(PdaTrans {
                            from: st(q, true),
                            letter: s as usize,
                            pop: 0,
                            to: st(to, true),
                            push: vec![0],
                        });
                    } else {
                        for rep in [plain(top), tagged(top)] {
                            trans.push(PdaTrans {
                                from: st(q, false),
                                letter: s as usize,
                                pop: rep,
                                to: st(to, false),
                                push: vec![rep],
                            });
                        }
                    }
                }
                SymClass::Ret => {
                    if top != BOTTOM {
                        trans.push(PdaTrans {
                            from: st(q, false),
                            letter: s as usize,
                            pop: tagged(top),
                            to: st(to, true),
                            push: vec![],
                        });
                        trans.push(PdaTrans {
                            from: st(q, false),
                            letter: s as usize,
                            pop: plain(top),
                            to: st(to, false),
                            push: vec![],
                        });
                    }
                }
            }
        }
    }
    Ok(Pda {
        terms: d.alphabet.symbols().map(|s| d.alphabet.name(s).to_string()).collect(),
        stack_names,
        state_count: d.state_count() * 2,
        init: st(d.init(), true),
        finals: d.finals().iter().map(|&q| st(q, true)).collect(),
        trans,
    })
}

/// Projects every input letter before the marker to "0" and after it to
/// "1"; the marker itself becomes "#". States carry a marker-seen flag;
/// words with more than one marker die.
pub fn length_project(p: &Pda, marker: usize) -> Pda {
    let st = |q: usize, seen: bool| -> usize { q * 2 + usize::from(seen) };
    let mut trans = Vec::new();
    for t in &p.trans {
        if t.letter == marker {
            trans.push(PdaTrans {
                from: st(t.from, false),
                letter: 1,
                pop: t.pop,
                to: st(t.to, true),
                push: t.push.clone(),
            });
        } else {
            for seen in [false, true] {
                trans.push(PdaTrans {
                    from: st(t.from, seen),
                    letter: if seen { 2 } else { 0 },
                    pop: t.pop,
                    to: st(t.to, seen),
                    push: t.push.clone(),
                });
            }
        }
    }
    Pda {
        terms: vec!["0".into(), "#".into(), "1".into()],
        stack_names: p.stack_names.clone(),
        state_count: p.state_count * 2,
        init: st(p.init, false),
        finals: p.finals.iter().map(|&q| st(q, true)).collect(),
        trans,
    }
}

/// Triple construction. Nonterminals [p X q] derive the words read while
/// popping X from state p to state q; a virtual drain state with
/// silent pops turns final-state acceptance into emptying the stack, so
/// [p X drain] means "read to the end of input at a final state". Only
/// triples with a witnessed pop are instantiated.
pub fn pda_to_cfg(p: &Pda, budget: &Budget) -> Result<Cfg> {
    let drain = p.state_count;
    let n = p.state_count + 1;
    let ng = p.stack_names.len();

    // pop_sets[(q, x)] = states reachable by popping x starting at q.
    let mut pop_sets: BTreeMap<(usize, usize), BTreeSet<usize>> = BTreeMap::new();
    for x in 0..ng {
        for &f in &p.finals {
            pop_sets.entry((f, x)).or_default().insert(drain);
        }
        pop_sets.entry((drain, x)).or_default().insert(drain);
    }
    // Saturate: reachable-after-popping-α computed per transition.
    loop {
        let facts: usize = pop_sets.values().map(|s| s.len()).sum();
        budget.check_closure("pda_to_cfg.pop", facts)?;
        let mut changed = false;
        for t in &p.trans {
            // States reachable from t.to after popping all of t.push.
            let mut cur: BTreeSet<usize> = BTreeSet::new();
            cur.insert(t.to);
            for &y in &t.push {
                let mut next = BTreeSet::new();
                for &s in &cur {
                    if let Some(rs) = pop_sets.get(&(s, y)) {
                        next.extend(rs.iter().copied());
                    }
                }
                cur = next;
                if cur.is_empty() {
                    break;
                }
            }
            if !cur.is_empty() {
                let entry = pop_sets.entry((t.from, t.pop)).or_default();
                for s in cur {
                    if entry.insert(s) {
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }

    // Instantiate reachable triples from [init, bottom, drain] outward.
    let mut nt_index: BTreeMap<(usize, usize, usize), usize> = BTreeMap::new();
    let mut nt_names: Vec<String> = Vec::new();
    let mut queue: VecDeque<(usize, usize, usize)> = VecDeque::new();
    let state_label = |q: usize| -> String {
        if q == drain {
            "!".to_string()
        } else {
            q.to_string()
        }
    };
    let intern =
        |t: (usize, usize, usize),
         nt_index: &mut BTreeMap<(usize, usize, usize), usize>,
         nt_names: &mut Vec<String>,
         queue: &mut VecDeque<(usize, usize, usize)>| {
            *nt_index.entry(t).or_insert_with(|| {
                let id = nt_names.len();
                nt_names.push(format!(
                    "[{} {} {}]",
                    state_label(t.0),
                    p.stack_names[t.2],
                    state_label(t.1)
                ));
                queue.push_back(t);
                id
            })
        };

    let start_key = (p.init, drain, 0usize);
    let start = if pop_sets.get(&(p.init, 0)).is_some_and(|s| s.contains(&drain)) {
        intern(start_key, &mut nt_index, &mut nt_names, &mut queue)
    } else {
        // Empty language: a bare start symbol with no productions.
        nt_names.push("[start]".to_string());
        0
    };

    // Transitions indexed by (from, pop).
    let mut by_from_pop: BTreeMap<(usize, usize), Vec<&PdaTrans>> = BTreeMap::new();
    for t in &p.trans {
        by_from_pop.entry((t.from, t.pop)).or_default().push(t);
    }

    let mut prods: Vec<(usize, Vec<CfgSym>)> = Vec::new();
    while let Some((q, r, x)) = queue.pop_front() {
        budget.check_closure("pda_to_cfg.prods", prods.len().max(nt_names.len()))?;
        let lhs = nt_index[&(q, r, x)];
        // Silent drain pops.
        if r == drain && (q == drain || p.finals.contains(&q)) {
            prods.push((lhs, vec![]));
        }
        if q == drain {
            continue;
        }
        let Some(ts) = by_from_pop.get(&(q, x)) else {
            continue;
        };
        for t in ts {
            // Chains t.to -s1-> ... -> r popping t.push left to right; DFS
            // over pop_sets-valid intermediate states.
            let mut chains: Vec<(usize, Vec<(usize, usize, usize)>)> = vec![(t.to, Vec::new())];
            for (i, &y) in t.push.iter().enumerate() {
                let last = i + 1 == t.push.len();
                let mut next = Vec::new();
                for (s, path) in &chains {
                    let Some(rs) = pop_sets.get(&(*s, y)) else {
                        continue;
                    };
                    let targets: Vec<usize> =
                        if last { vec![r] } else { rs.iter().copied().collect() };
                    for tgt in targets {
                        if !rs.contains(&tgt) {
                            continue;
                        }
                        let mut path2 = path.clone();
                        path2.push((*s, tgt, y));
                        next.push((tgt, path2));
                    }
                }
                chains = next;
                if chains.is_empty() {
                    break;
                }
            }
            if t.push.is_empty() {
                chains.retain(|(s, _)| *s == r);
            }
            for (_, path) in chains {
                let mut rhs = vec![CfgSym::T(t.letter)];
                for trip in path {
                    rhs.push(CfgSym::N(intern(trip, &mut nt_index, &mut nt_names, &mut queue)));
                }
                prods.push((lhs, rhs));
                budget.check_closure("pda_to_cfg.prods", prods.len())?;
            }
        }
    }

    let cfg = Cfg {
        terminals: p.terms.clone(),
        nonterminals: nt_names,
        start,
        prods,
    };
    cfg.validate()?;
    if n * ng == 0 {
        return Err(Error::internal("pda_to_cfg: degenerate machine"));
    }
    Ok(cfg.reduce())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parikh::image::parikh_image;
    use crate::vpa::alphabet::VpAlphabet;
    use crate::vpa::dvpa::tests::{anbn, dyck1};
    use crate::vpa::dvpa::DvpaBuilder;
    use crate::vpa::enumerate::all_words_up_to;

    fn cfg_words(cfg: &Cfg, budget: &Budget, max_len: usize) -> BTreeSet<Vec<String>> {
        cfg.enumerate_words(max_len, budget)
            .unwrap()
            .into_iter()
            .map(|w| w.iter().map(|&t| cfg.terminals[t].clone()).collect())
            .collect()
    }

    #[test]
    fn pda_cfg_words_match_dvpa() {
        let budget = Budget::default();
        for d in [dyck1(), anbn()] {
            let pda = dvpa_to_pda(&d, &budget).unwrap();
            let cfg = pda_to_cfg(&pda, &budget).unwrap();
            let got = cfg_words(&cfg, &budget, 6);
            let mut want = BTreeSet::new();
            for w in all_words_up_to(&d.alphabet, 6, &budget).unwrap() {
                if d.accepts(&w) {
                    want.insert(d.alphabet.word_names(&w));
                }
            }
            assert_eq!(got, want);
        }
    }

    /// {a^n # b^n}: the marked pipeline must produce the diagonal.
    fn marked_anbn() -> Dvpa {
        let alpha = VpAlphabet::new(&["a"], &["#"], &["b"]).unwrap();
        let mut b = DvpaBuilder::new(alpha);
        let s = b.state("S");
        let m = b.state("M");
        let x = b.stack_sym("X");
        let (ca, mk, rb) = (0, 1, 2);
        b.set_init(s);
        b.add_final(m);
        b.call(s, ca, BOTTOM, s, x).unwrap();
        b.call(s, ca, x, s, x).unwrap();
        b.internal(s, mk, BOTTOM, m).unwrap();
        b.internal(s, mk, x, m).unwrap();
        b.ret(m, rb, x, m).unwrap();
        let (d, _) = b.build().unwrap();
        d
    }

    #[test]
    fn projection_counts_lengths() {
        let budget = Budget::default();
        let d = marked_anbn();
        assert!(d.accepts(&d.alphabet.parse_word("a a # b b").unwrap()));
        assert!(d.accepts(&d.alphabet.parse_word("#").unwrap()));
        assert!(!d.accepts(&d.alphabet.parse_word("a # b b").unwrap()));
        let pda = dvpa_to_pda(&d, &budget).unwrap();
        let proj = length_project(&pda, 1);
        let cfg = pda_to_cfg(&proj, &budget).unwrap();
        let s3 = parikh_image(&cfg, &budget).unwrap();
        let s = s3.project(&[0, 2]);
        for n in 0..8u64 {
            assert!(s.member(&[n, n]), "({n},{n})");
            assert!(!s.member(&[n, n + 1]));
            assert!(!s.member(&[n + 1, n]));
        }
    }
}
