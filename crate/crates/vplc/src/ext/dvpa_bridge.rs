//! Translations between deterministic VPAs and Ext-algebras.
//!
//! `dvpa_to_ext` closes the behavior functions of well-matched words: an
//! element of R is the map (q, γ) ↦ state reached from q with γ on top after
//! some well-matched word. Multiplication composes behaviors over the same
//! top symbol; ψ(ext_{a,b}) lifts a behavior through a matched call/return.
//! `ext_to_dvpa` runs the free evaluation of a kernel as an automaton whose
//! states are R and whose stack records (interrupted value, call letter).

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use super::algebra::{ExtAlgebra, ExtKernel, Interner, RElem};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::vpa::alphabet::{Sym, Word};
use crate::vpa::dvpa::{Dvpa, DvpaBuilder, State, BOTTOM};

/// Behavior table indexed by q * |Γ| + γ.
type Behavior = Vec<State>;

struct BehaviorOps<'a> {
    d: &'a Dvpa,
    gammas: usize,
}

impl<'a> BehaviorOps<'a> {
    fn identity(&self) -> Behavior {
        (0..self.d.state_count() * self.gammas)
            .map(|i| (i / self.gammas) as State)
            .collect()
    }

    fn of_internal(&self, c: Sym) -> Behavior {
        let mut v = Vec::with_capacity(self.d.state_count() * self.gammas);
        for q in 0..self.d.state_count() as State {
            for g in 0..self.gammas as u32 {
                v.push(self.d.transition(q, c, g).0);
            }
        }
        v
    }

    fn mul(&self, f: &Behavior, g: &Behavior) -> Behavior {
        let mut v = Vec::with_capacity(f.len());
        for q in 0..self.d.state_count() {
            for gam in 0..self.gammas {
                let mid = f[q * self.gammas + gam];
                v.push(g[mid as usize * self.gammas + gam]);
            }
        }
        v
    }

    fn lift(&self, a: Sym, b: Sym, f: &Behavior) -> Behavior {
        let mut v = Vec::with_capacity(f.len());
        for q in 0..self.d.state_count() as State {
            for gam in 0..self.gammas as u32 {
                let (p, push) = self.d.transition(q, a, gam);
                let beta = push.expect("calls push");
                let r = f[p as usize * self.gammas + beta as usize];
                let (s, _) = self.d.transition(r, b, beta);
                v.push(s);
            }
        }
        v
    }
}

/// The transition Ext-algebra of a DVPA. Recognizes exactly L(d) within the
/// well-matched words; the O monoid is closed from translations and ψ maps.
pub fn dvpa_to_ext(d: &Dvpa, budget: &Budget) -> Result<ExtAlgebra> {
    let ops = BehaviorOps {
        d,
        gammas: d.stack_count(),
    };
    let calls = d.alphabet.calls();
    let rets = d.alphabet.returns();

    let mut interner: Interner<Behavior> = Interner::new();
    let mut witnesses: Vec<Word> = Vec::new();
    let mut worklist: Vec<RElem> = Vec::new();

    let add = |interner: &mut Interner<Behavior>,
                   witnesses: &mut Vec<Word>,
                   worklist: &mut Vec<RElem>,
                   f: Behavior,
                   w: Word| {
        let (id, fresh) = interner.intern(f);
        if fresh {
            witnesses.push(w);
            worklist.push(id);
        }
        id
    };

    let one = add(
        &mut interner,
        &mut witnesses,
        &mut worklist,
        ops.identity(),
        Vec::new(),
    );
    for c in d.alphabet.internals() {
        add(
            &mut interner,
            &mut witnesses,
            &mut worklist,
            ops.of_internal(c),
            vec![c],
        );
    }

    while let Some(x) = worklist.pop() {
        budget.check_closure("dvpa_to_ext.R", interner.len())?;
        let fx = interner.item(x).clone();
        let wx = witnesses[x as usize].clone();
        for y in 0..interner.len() as RElem {
            let fy = interner.item(y).clone();
            let wy = witnesses[y as usize].clone();
            let xy = ops.mul(&fx, &fy);
            let mut wxy = wx.clone();
            wxy.extend_from_slice(&wy);
            add(&mut interner, &mut witnesses, &mut worklist, xy, wxy);
            let yx = ops.mul(&fy, &fx);
            let mut wyx = wy;
            wyx.extend_from_slice(&wx);
            add(&mut interner, &mut witnesses, &mut worklist, yx, wyx);
        }
        for &a in &calls {
            for &b in &rets {
                let lf = ops.lift(a, b, &fx);
                let mut wl = vec![a];
                wl.extend_from_slice(&wx);
                wl.push(b);
                add(&mut interner, &mut witnesses, &mut worklist, lf, wl);
            }
        }
    }

    let n = interner.len();
    let mut mult = vec![0 as RElem; n * n];
    for x in 0..n {
        for y in 0..n {
            let p = ops.mul(interner.item(x as RElem), interner.item(y as RElem));
            mult[x * n + y] = interner
                .get(&p)
                .ok_or_else(|| Error::internal("R not closed under product"))?;
        }
    }
    let mut phi_int = BTreeMap::new();
    for c in d.alphabet.internals() {
        let f = ops.of_internal(c);
        phi_int.insert(c, interner.get(&f).expect("generator interned"));
    }
    let mut psi_maps = BTreeMap::new();
    for &a in &calls {
        for &b in &rets {
            let mut table = Vec::with_capacity(n);
            for x in 0..n {
                let lf = ops.lift(a, b, interner.item(x as RElem));
                table.push(
                    interner
                        .get(&lf)
                        .ok_or_else(|| Error::internal("R not closed under lift"))?,
                );
            }
            psi_maps.insert((a, b), table);
        }
    }
    let gammas = ops.gammas;
    let accepting: BTreeSet<RElem> = (0..n as RElem)
        .filter(|&x| {
            let f = interner.item(x);
            let q = f[d.init() as usize * gammas + BOTTOM as usize];
            d.finals().contains(&q)
        })
        .collect();
    let r_names: Vec<String> = witnesses
        .iter()
        .map(|w| {
            if w.is_empty() {
                "ε".to_string()
            } else {
                d.alphabet.format_word(w)
            }
        })
        .collect();
    let kernel = ExtKernel::new(
        d.alphabet.clone(),
        r_names,
        one,
        mult,
        phi_int,
        psi_maps,
        accepting,
    )?;
    let o_maps = close_o_monoid(&kernel, budget, "dvpa_to_ext.O")?;
    ExtAlgebra::new(kernel, o_maps)
}

/// Smallest composition-closed O containing id, all translations, and every
/// ψ table of the kernel.
pub fn close_o_monoid(
    k: &ExtKernel,
    budget: &Budget,
    stage: &'static str,
) -> Result<Vec<Vec<RElem>>> {
    let n = k.r_size();
    let mut interner: Interner<Vec<RElem>> = Interner::new();
    let mut worklist: Vec<u32> = Vec::new();
    let add = |interner: &mut Interner<Vec<RElem>>, worklist: &mut Vec<u32>, m: Vec<RElem>| {
        let (id, fresh) = interner.intern(m);
        if fresh {
            worklist.push(id);
        }
    };
    add(&mut interner, &mut worklist, (0..n as RElem).collect());
    for r in 0..n as RElem {
        add(
            &mut interner,
            &mut worklist,
            (0..n as RElem).map(|x| k.mul(r, x)).collect(),
        );
        add(
            &mut interner,
            &mut worklist,
            (0..n as RElem).map(|x| k.mul(x, r)).collect(),
        );
    }
    for (_, v) in k.psi_table() {
        add(&mut interner, &mut worklist, v.clone());
    }
    while let Some(x) = worklist.pop() {
        budget.check_closure(stage, interner.len())?;
        let mx = interner.item(x).clone();
        for y in 0..interner.len() {
            let my = interner.item(y as u32).clone();
            let xy: Vec<RElem> = (0..n).map(|i| mx[my[i] as usize]).collect();
            add(&mut interner, &mut worklist, xy);
            let yx: Vec<RElem> = (0..n).map(|i| my[mx[i] as usize]).collect();
            add(&mut interner, &mut worklist, yx);
        }
    }
    Ok(interner.items().to_vec())
}

/// Runs a kernel as a DVPA over R. A call stashes (current value, letter)
/// and restarts at 1; the matching return applies ψ and multiplies back.
pub fn ext_to_dvpa(k: &ExtKernel) -> Result<Dvpa> {
    let n = k.r_size();
    let calls = k.alphabet.calls();
    let unique = {
        let mut seen = BTreeSet::new();
        k.r_names()
            .iter()
            .all(|s| !s.trim().is_empty() && seen.insert(s.clone()))
    };
    let state_name = |r: usize| {
        if unique {
            k.r_names()[r].clone()
        } else {
            format!("r{r}")
        }
    };
    let mut b = DvpaBuilder::new(k.alphabet.clone());
    let states: Vec<State> = (0..n).map(|r| b.state(&state_name(r))).collect();
    let mut pair_syms = BTreeMap::new();
    for r in 0..n {
        for &a in &calls {
            let g = b.stack_sym(&format!("p{r}_{}", k.alphabet.name(a)));
            pair_syms.insert((r as RElem, a), g);
        }
    }
    b.set_init(states[k.one() as usize]);
    for &r in k.accepting() {
        b.add_final(states[r as usize]);
    }
    let tops: Vec<u32> = std::iter::once(BOTTOM)
        .chain(pair_syms.values().copied())
        .collect();
    for q in 0..n {
        for &a in &calls {
            let push = pair_syms[&(q as RElem, a)];
            for &top in &tops {
                b.call(states[q], a, top, states[k.one() as usize], push)?;
            }
        }
        for c in k.alphabet.internals() {
            let to = states[k.mul(q as RElem, k.phi(c)?) as usize];
            for &top in &tops {
                b.internal(states[q], c, top, to)?;
            }
        }
        for bl in k.alphabet.returns() {
            b.ret(states[q], bl, BOTTOM, states[q])?;
            for (&(s, a), &g) in &pair_syms {
                let to = states[k.mul(s, k.psi_apply(a, bl, q as RElem)?) as usize];
                b.ret(states[q], bl, g, to)?;
            }
        }
    }
    let (d, filled) = b.build()?;
    debug_assert_eq!(filled, 0);
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vpa::dvpa::tests::{anbn, dyck1};
    use crate::vpa::enumerate::well_matched_up_to;

    #[test]
    fn dyck1_algebra_is_trivial() {
        let d = dyck1();
        let alg = dvpa_to_ext(&d, &Budget::default()).unwrap();
        assert_eq!(alg.r_size(), 1);
        assert_eq!(alg.o_size(), 1);
        assert_eq!(alg.kernel().accepting().len(), 1);
    }

    #[test]
    fn anbn_algebra_shapes() {
        let d = anbn();
        let alg = dvpa_to_ext(&d, &Budget::default()).unwrap();
        assert_eq!(alg.r_size(), 3);
        assert_eq!(alg.o_size(), 4);
        assert_eq!(alg.kernel().accepting().len(), 2);
    }

    #[test]
    fn transition_algebra_recognizes_language() {
        for d in [dyck1(), anbn()] {
            let alg = dvpa_to_ext(&d, &Budget::default()).unwrap();
            for w in well_matched_up_to(&d.alphabet, 8, &Budget::default()).unwrap() {
                assert_eq!(
                    alg.kernel().member(&w).unwrap(),
                    d.accepts(&w),
                    "word {:?}",
                    d.alphabet.format_word(&w)
                );
            }
        }
    }

    #[test]
    fn ext_to_dvpa_round_trip() {
        for d in [dyck1(), anbn()] {
            let alg = dvpa_to_ext(&d, &Budget::default()).unwrap();
            let back = ext_to_dvpa(alg.kernel()).unwrap();
            for w in well_matched_up_to(&d.alphabet, 8, &Budget::default()).unwrap() {
                assert_eq!(back.accepts(&w), d.accepts(&w));
            }
            // Non-well-matched inputs are rejected by shape.
            let a = d.alphabet.calls()[0];
            let bl = d.alphabet.returns()[0];
            assert!(!back.accepts(&[a]));
            assert!(!back.accepts(&[bl]));
            assert!(!back.accepts(&[bl, a]));
        }
    }
}
