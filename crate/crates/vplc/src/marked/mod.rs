//! Marked context languages: recognizers for the single-marker languages
//! u#v (with a shared-suffix barred variant) and their length Parikh
//! images.

use std::collections::{BTreeMap, BTreeSet};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::ext::algebra::{ExtAlgebra, ExtKernel, OElem, RElem};
use crate::parikh::pda::{dvpa_to_pda, length_project, pda_to_cfg};
use crate::parikh::semilinear::SemilinearSet;
use crate::parikh::image::parikh_image;
use crate::vpa::alphabet::{Sym, SymClass, VpAlphabet, Word};
use crate::vpa::dvpa::{Dvpa, DvpaBuilder, BOTTOM};

pub const MARKER: &str = "#";
pub const BAR_PREFIX: &str = "^";
pub const TILDE_PREFIX: &str = "~";

/// A base alphabet extended with a fresh internal marker and, optionally, a
/// barred copy in which calls and returns trade places.
#[derive(Debug, Clone)]
pub struct MarkedAlphabet {
    pub alphabet: VpAlphabet,
    pub base_len: usize,
    pub marker: Sym,
    /// base symbol -> its barred copy (empty when bars are absent)
    pub bar: BTreeMap<Sym, Sym>,
}

impl MarkedAlphabet {
    pub fn with_marker(base: &VpAlphabet) -> Result<MarkedAlphabet> {
        let mut alphabet = base.clone();
        let marker = alphabet.push_symbol(MARKER.to_string(), SymClass::Int)?;
        Ok(MarkedAlphabet {
            alphabet,
            base_len: base.len(),
            marker,
            bar: BTreeMap::new(),
        })
    }

    pub fn with_bars(base: &VpAlphabet) -> Result<MarkedAlphabet> {
        let mut alphabet = base.clone();
        let mut bar = BTreeMap::new();
        for s in base.symbols() {
            let class = match base.class(s) {
                SymClass::Call => SymClass::Ret,
                SymClass::Ret => SymClass::Call,
                SymClass::Int => SymClass::Int,
            };
            let b = alphabet.push_symbol(format!("{BAR_PREFIX}{}", base.name(s)), class)?;
            bar.insert(s, b);
        }
        let marker = alphabet.push_symbol(MARKER.to_string(), SymClass::Int)?;
        Ok(MarkedAlphabet {
            alphabet,
            base_len: base.len(),
            marker,
            bar,
        })
    }

    pub fn is_base(&self, s: Sym) -> bool {
        (s as usize) < self.base_len
    }

    /// The barred image of a base word: letters barred and reversed, so
    /// that calls close what the original opened.
    pub fn bar_word(&self, w: &[Sym]) -> Result<Word> {
        w.iter()
            .rev()
            .map(|s| {
                self.bar
                    .get(s)
                    .copied()
                    .ok_or_else(|| Error::invalid("bar_word: not a base symbol"))
            })
            .collect()
    }

    /// u # v as a word over the marked alphabet.
    pub fn mark(&self, u: &[Sym], v: &[Sym]) -> Word {
        let mut w = u.to_vec();
        w.push(self.marker);
        w.extend_from_slice(v);
        w
    }
}

/// Recognizer for a union of marker languages: words u#v whose context has
/// a ψ-image in a chosen target set. The carrier is R ∪ O ∪ {⊥}.
#[derive(Debug, Clone)]
pub struct MarkedLe {
    pub marked: MarkedAlphabet,
    pub kernel: ExtKernel,
    pub embed_r: Vec<RElem>,
    pub embed_o: Vec<RElem>,
    pub bot: RElem,
}

/// Kernel over Σ∪{#} with φ'(u#v) = ψ(ext_{u,v}); accepting = the embedded
/// `targets`.
pub fn build_le_union(alg: &ExtAlgebra, targets: &BTreeSet<OElem>) -> Result<MarkedLe> {
    let marked = MarkedAlphabet::with_marker(alg.alphabet())?;
    let k = alg.kernel();
    let r = alg.r_size();
    let o = alg.o_size();
    let n = r + o + 1;
    let embed_r: Vec<RElem> = (0..r as RElem).collect();
    let embed_o: Vec<RElem> = (0..o as RElem).map(|j| r as RElem + j).collect();
    let bot = (r + o) as RElem;

    let mut names: Vec<String> = k.r_names().to_vec();
    for j in 0..o as OElem {
        names.push(format!("O[{}]", alg.o_name(j)));
    }
    names.push("_bot_".to_string());

    let class = |x: RElem| -> usize {
        // 0 = R, 1 = O, 2 = bot
        if (x as usize) < r {
            0
        } else if (x as usize) < r + o {
            1
        } else {
            2
        }
    };
    let mut mult = vec![bot; n * n];
    for x in 0..n as RElem {
        for y in 0..n as RElem {
            let v = match (class(x), class(y)) {
                (0, 0) => k.mul(x, y),
                (0, 1) => embed_o[alg.compose(alg.lambda(x), y - r as RElem) as usize],
                (1, 0) => embed_o[alg.compose(alg.rho(y), x - r as RElem) as usize],
                _ => bot,
            };
            mult[x as usize * n + y as usize] = v;
        }
    }

    let mut phi_int = BTreeMap::new();
    for c in alg.alphabet().internals() {
        phi_int.insert(c, k.phi(c)?);
    }
    phi_int.insert(marked.marker, embed_o[alg.o_one() as usize]);

    let mut psi_maps = BTreeMap::new();
    for a in alg.alphabet().calls() {
        for b in alg.alphabet().returns() {
            let pab = alg.psi(a, b)?;
            let mut v = vec![bot; n];
            for x in 0..r as RElem {
                v[x as usize] = k.psi_apply(a, b, x)?;
            }
            for j in 0..o as OElem {
                v[embed_o[j as usize] as usize] = embed_o[alg.compose(pab, j) as usize];
            }
            psi_maps.insert((a, b), v);
        }
    }

    let accepting: BTreeSet<RElem> = targets.iter().map(|&e| embed_o[e as usize]).collect();
    let kernel = ExtKernel::new(
        marked.alphabet.clone(),
        names,
        k.one(),
        mult,
        phi_int,
        psi_maps,
        accepting,
    )?;
    Ok(MarkedLe {
        marked,
        kernel,
        embed_r,
        embed_o,
        bot,
    })
}

pub fn build_le(alg: &ExtAlgebra, e: OElem) -> Result<MarkedLe> {
    build_le_union(alg, &BTreeSet::from([e]))
}

/// DVPA for well-matched u#v with exactly one marker, read at positive
/// height (Δ(u) > 0).
pub fn hp_dvpa(marked: &MarkedAlphabet) -> Result<Dvpa> {
    let mut b = DvpaBuilder::new(marked.alphabet.clone());
    let pre = b.state("pre");
    let ok = b.state("ok");
    let dead = b.state("dead");
    let x = b.stack_sym("X");
    b.set_init(pre);
    b.add_final(ok);
    for s in marked.alphabet.symbols() {
        match marked.alphabet.class(s) {
            SymClass::Call => {
                for q in [pre, ok, dead] {
                    for top in [BOTTOM, x] {
                        b.call(q, s, top, q, x)?;
                    }
                }
            }
            SymClass::Ret => {
                for q in [pre, ok, dead] {
                    b.ret(q, s, x, q)?;
                }
            }
            SymClass::Int => {
                if s == marked.marker {
                    b.internal(pre, s, BOTTOM, dead)?;
                    b.internal(pre, s, x, ok)?;
                    for top in [BOTTOM, x] {
                        b.internal(ok, s, top, dead)?;
                        b.internal(dead, s, top, dead)?;
                    }
                } else {
                    for q in [pre, ok, dead] {
                        for top in [BOTTOM, x] {
                            b.internal(q, s, top, q)?;
                        }
                    }
                }
            }
        }
    }
    let (d, _) = b.build()?;
    Ok(d)
}

pub fn build_le_up(alg: &ExtAlgebra, e: OElem) -> Result<Dvpa> {
    let le = build_le(alg, e)?;
    let d = crate::ext::dvpa_bridge::ext_to_dvpa(&le.kernel.quotient()?)?;
    d.intersect(&hp_dvpa(&le.marked)?)
}

/// M_e = ∪ { L_f | e∘f = e } restricted to positive-height markers.
pub fn build_me(alg: &ExtAlgebra, e: OElem) -> Result<Dvpa> {
    let targets: BTreeSet<OElem> = (0..alg.o_size() as OElem)
        .filter(|&f| alg.compose(e, f) == e)
        .collect();
    let le = build_le_union(alg, &targets)?;
    let d = crate::ext::dvpa_bridge::ext_to_dvpa(&le.kernel.quotient()?)?;
    d.intersect(&hp_dvpa(&le.marked)?)
}

/// Recognizer for words u#ū' where u and u' share a closing suffix with
/// ψ-images (e, e). The carrier is R ∪ R̄ ∪ {generated subsets of O²} ∪
/// {⊥, 1}; only subsets reachable from φ'(#) are materialized.
#[derive(Debug, Clone)]
pub struct MarkedKe {
    pub marked: MarkedAlphabet,
    pub kernel: ExtKernel,
    pub embed_r: Vec<RElem>,
    pub embed_rbar: Vec<RElem>,
    /// carrier index of subsets[i] is subset_base + i
    pub subsets: Vec<BTreeSet<(OElem, OElem)>>,
    pub subset_base: usize,
    pub bot: RElem,
    pub one: RElem,
}

impl MarkedKe {
    pub fn accepting_for(&self, e: OElem) -> BTreeSet<RElem> {
        self.subsets
            .iter()
            .enumerate()
            .filter(|(_, set)| set.contains(&(e, e)))
            .map(|(i, _)| (self.subset_base + i) as RElem)
            .collect()
    }
}

/// The e-independent part of the K_e recognizer; pick a target with
/// [`build_ke`] or [`MarkedKe::accepting_for`].
pub fn build_ke_base(alg: &ExtAlgebra, budget: &Budget) -> Result<MarkedKe> {
    let marked = MarkedAlphabet::with_bars(alg.alphabet())?;
    let k = alg.kernel();
    let r = alg.r_size();
    let bot_class = 2 * r;
    let one_class = 2 * r + 1;
    let subset_base = 2 * r + 2;

    let calls = alg.alphabet().calls();
    let rets = alg.alphabet().returns();

    // Generate the reachable subsets of O².
    let seed: BTreeSet<(OElem, OElem)> = (0..r as RElem)
        .map(|x| (alg.rho(x), alg.rho(x)))
        .collect();
    let mut subsets: Vec<BTreeSet<(OElem, OElem)>> = vec![seed.clone()];
    let mut subset_ids: BTreeMap<BTreeSet<(OElem, OElem)>, usize> = BTreeMap::new();
    subset_ids.insert(seed, 0);
    let lmul = |set: &BTreeSet<(OElem, OElem)>, x: RElem| -> BTreeSet<(OElem, OElem)> {
        set.iter()
            .map(|&(e1, e2)| (alg.compose(alg.lambda(x), e1), e2))
            .collect()
    };
    let rmul_bar = |set: &BTreeSet<(OElem, OElem)>, x: RElem| -> BTreeSet<(OElem, OElem)> {
        set.iter()
            .map(|&(e1, e2)| (e1, alg.compose(alg.lambda(x), e2)))
            .collect()
    };
    let lift = |set: &BTreeSet<(OElem, OElem)>, a: Sym, a2: Sym| -> Result<BTreeSet<(OElem, OElem)>> {
        let mut out = BTreeSet::new();
        for &(e1, e2) in set {
            for &b in &rets {
                let p1 = alg.compose(alg.psi(a, b)?, e1);
                let p2 = alg.compose(alg.psi(a2, b)?, e2);
                for x in 0..r as RElem {
                    out.insert((
                        alg.compose(alg.rho(x), p1),
                        alg.compose(alg.rho(x), p2),
                    ));
                }
            }
        }
        Ok(out)
    };
    let mut head = 0usize;
    while head < subsets.len() {
        budget.check_closure("build_ke.subsets", subsets.len())?;
        let cur = subsets[head].clone();
        head += 1;
        let mut found: Vec<BTreeSet<(OElem, OElem)>> = Vec::new();
        for x in 0..r as RElem {
            found.push(lmul(&cur, x));
            found.push(rmul_bar(&cur, x));
        }
        for &a in &calls {
            for &a2 in &calls {
                found.push(lift(&cur, a, a2)?);
            }
        }
        for set in found {
            if !set.is_empty() && !subset_ids.contains_key(&set) {
                subset_ids.insert(set.clone(), subsets.len());
                subsets.push(set);
            }
        }
    }

    let n = subset_base + subsets.len();
    let embed_r: Vec<RElem> = (0..r as RElem).collect();
    let embed_rbar: Vec<RElem> = (0..r as RElem).map(|x| r as RElem + x).collect();
    let bot = bot_class as RElem;
    let one = one_class as RElem;
    let sid = |set: &BTreeSet<(OElem, OElem)>| -> RElem {
        (subset_base + subset_ids[set]) as RElem
    };

    let mut names: Vec<String> = k.r_names().to_vec();
    for x in 0..r as RElem {
        names.push(format!("{BAR_PREFIX}{}", k.r_name(x)));
    }
    names.push("_bot_".to_string());
    names.push("_one_".to_string());
    for i in 0..subsets.len() {
        names.push(format!("E{i}"));
    }

    // 0 = R, 1 = R̄, 2 = bot, 3 = one, 4 = subset
    let class = |x: RElem| -> usize {
        let x = x as usize;
        if x < r {
            0
        } else if x < 2 * r {
            1
        } else if x == bot_class {
            2
        } else if x == one_class {
            3
        } else {
            4
        }
    };
    let mut mult = vec![bot; n * n];
    for x in 0..n as RElem {
        for y in 0..n as RElem {
            let v = match (class(x), class(y)) {
                (3, _) => y,
                (_, 3) => x,
                (2, _) | (_, 2) => bot,
                (0, 0) => k.mul(x, y),
                (1, 1) => embed_rbar[k.mul(y - r as RElem, x - r as RElem) as usize],
                (0, 4) => sid(&lmul(&subsets[y as usize - subset_base], x)),
                (4, 1) => sid(&rmul_bar(&subsets[x as usize - subset_base], y - r as RElem)),
                _ => bot,
            };
            mult[x as usize * n + y as usize] = v;
        }
    }

    let mut phi_int = BTreeMap::new();
    for c in alg.alphabet().internals() {
        let rc = k.phi(c)?;
        phi_int.insert(c, embed_r[rc as usize]);
        phi_int.insert(marked.bar[&c], embed_rbar[rc as usize]);
    }
    phi_int.insert(marked.marker, sid(&subsets[0].clone()));

    let mut psi_maps = BTreeMap::new();
    for ca in marked.alphabet.calls() {
        for rb in marked.alphabet.returns() {
            let mut v = vec![bot; n];
            match (marked.is_base(ca), marked.is_base(rb)) {
                (true, true) => {
                    for x in 0..r as RElem {
                        v[x as usize] = embed_r[k.psi_apply(ca, rb, x)? as usize];
                    }
                    v[one as usize] = embed_r[k.psi_apply(ca, rb, k.one())? as usize];
                }
                (false, false) => {
                    // ca = ^b', rb = ^a' wraps x̄ as bar(a' x b').
                    let b2 = unbar(&marked, ca)?;
                    let a2 = unbar(&marked, rb)?;
                    for x in 0..r as RElem {
                        v[embed_rbar[x as usize] as usize] =
                            embed_rbar[k.psi_apply(a2, b2, x)? as usize];
                    }
                    v[one as usize] = embed_rbar[k.psi_apply(a2, b2, k.one())? as usize];
                }
                (true, false) => {
                    let a2 = unbar(&marked, rb)?;
                    for (i, set) in subsets.iter().enumerate() {
                        let lifted = lift(set, ca, a2)?;
                        v[subset_base + i] = sid(&lifted);
                    }
                }
                (false, true) => {}
            }
            psi_maps.insert((ca, rb), v);
        }
    }

    Ok(MarkedKe {
        marked: marked.clone(),
        kernel: ExtKernel::new(
            marked.alphabet.clone(),
            names,
            one,
            mult,
            phi_int,
            psi_maps,
            BTreeSet::new(),
        )?,
        embed_r,
        embed_rbar,
        subsets,
        subset_base,
        bot,
        one,
    })
}

pub fn build_ke(alg: &ExtAlgebra, e: OElem, budget: &Budget) -> Result<MarkedKe> {
    let mut ke = build_ke_base(alg, budget)?;
    let acc = ke.accepting_for(e);
    ke.kernel = ke.kernel.with_accepting(acc)?;
    Ok(ke)
}

pub fn build_ke_up(alg: &ExtAlgebra, e: OElem, budget: &Budget) -> Result<Dvpa> {
    let ke = build_ke(alg, e, budget)?;
    let d = crate::ext::dvpa_bridge::ext_to_dvpa(&ke.kernel.quotient()?)?;
    d.intersect(&hp_dvpa(&ke.marked)?)
}

fn unbar(marked: &MarkedAlphabet, s: Sym) -> Result<Sym> {
    marked
        .bar
        .iter()
        .find(|(_, &b)| b == s)
        .map(|(&base, _)| base)
        .ok_or_else(|| Error::internal("unbar: not a barred symbol"))
}

/// The pair (|u|, |v|) length image of a single-marker language, through
/// the PDA → projection → CFG → Parikh pipeline.
pub fn parikh_of_marked(d: &Dvpa, budget: &Budget) -> Result<SemilinearSet> {
    let marker = d
        .alphabet
        .sym(MARKER)
        .ok_or_else(|| Error::invalid("parikh_of_marked: alphabet has no marker"))?;
    let d = d.trim(budget)?;
    let pda = dvpa_to_pda(&d, budget)?;
    let proj = length_project(&pda, marker as usize);
    let cfg = pda_to_cfg(&proj, budget)?;
    let s3 = parikh_image(&cfg, budget)?;
    Ok(s3.project(&[0, 2]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext::algebra::tests::mod2_algebra;
    use crate::ext::stair::eval_psi_vec;
    use crate::ext::syntactic::tests::l12_syntactic;
    use crate::vpa::context::Context;
    use crate::vpa::enumerate::contexts_of_shape;

    fn l12() -> ExtAlgebra {
        l12_syntactic().algebra
    }

    fn psi_of(alg: &ExtAlgebra, ctx: &Context) -> OElem {
        let v = eval_psi_vec(alg.kernel(), ctx).unwrap();
        alg.o_by_map(&v).unwrap()
    }

    #[test]
    fn le_marker_maps_to_o_identity() {
        let alg = mod2_algebra();
        let le = build_le(&alg, alg.o_one()).unwrap();
        let w = vec![le.marked.marker];
        assert_eq!(
            le.kernel.eval_phi(&w).unwrap(),
            le.embed_o[alg.o_one() as usize]
        );
        assert!(le.kernel.member(&w).unwrap());
        let ww = vec![le.marked.marker, le.marked.marker];
        assert_eq!(le.kernel.eval_phi(&ww).unwrap(), le.bot);
    }

    #[test]
    fn le_l12_examples() {
        let alg = l12();
        let al = alg.alphabet();
        let (a, b1, b2) = (
            al.sym("a").unwrap(),
            al.sym("b1").unwrap(),
            al.sym("b2").unwrap(),
        );
        let c = al.sym("c").unwrap();
        let e = alg.psi(a, b1).unwrap();
        assert!(alg.is_idempotent(e));
        let le = build_le(&alg, e).unwrap();
        assert!(le.kernel.member(&le.marked.mark(&[a], &[b1])).unwrap());
        assert!(le.kernel.member(&le.marked.mark(&[a, c], &[b2])).unwrap());
        assert!(!le.kernel.member(&[le.marked.marker]).unwrap());
        // Unmarked or doubly marked words are never in L_e.
        assert!(!le.kernel.member(&[a, b1]).unwrap());
        let double = vec![a, le.marked.marker, le.marked.marker, b1];
        assert_eq!(le.kernel.eval_phi(&double).unwrap(), le.bot);
    }

    #[test]
    fn le_membership_matches_context_eval() {
        let budget = Budget::default();
        for alg in [mod2_algebra(), l12()] {
            let base = alg.alphabet().clone();
            for e in 0..alg.o_size() as OElem {
                let le = build_le(&alg, e).unwrap();
                for k in 0..=3usize {
                    for l in 0..=3usize {
                        for ctx in contexts_of_shape(&base, k, l, &budget).unwrap() {
                            let want = psi_of(&alg, &ctx) == e;
                            let w = le.marked.mark(&ctx.u, &ctx.v);
                            assert_eq!(le.kernel.member(&w).unwrap(), want);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn le_up_examples() {
        let alg = l12();
        let al = alg.alphabet();
        let (a, b1) = (al.sym("a").unwrap(), al.sym("b1").unwrap());
        let e = alg.psi(a, b1).unwrap();
        let d = build_le_up(&alg, e).unwrap();
        let marked = MarkedAlphabet::with_marker(al).unwrap();
        assert!(d.accepts(&marked.mark(&[a], &[b1])));
        assert!(!d.accepts(&[marked.marker]));
        assert!(!d.accepts(&[a, b1]));
        // ψ^{-1}(id) holds only the empty context, so L_{id↑} is empty.
        let did = build_le_up(&alg, alg.o_one()).unwrap();
        assert!(did.is_empty(&Budget::default()).unwrap());
    }

    #[test]
    fn ke_l12_examples() {
        let budget = Budget::default();
        let alg = l12();
        let al = alg.alphabet();
        let (a, b1) = (al.sym("a").unwrap(), al.sym("b1").unwrap());
        let e = alg.psi(a, b1).unwrap();
        let ke = build_ke(&alg, e, &budget).unwrap();
        let abar = ke.marked.bar[&a];
        // u = u' = "a", v = "b1".
        assert!(ke.kernel.member(&[a, ke.marked.marker, abar]).unwrap());
        // Unbarred right half is not in the language.
        assert!(!ke.kernel.member(&[a, ke.marked.marker, b1]).unwrap());
        // "#" is accepted iff (e,e) is a pair of right translations.
        let marker_only = ke.kernel.member(&[ke.marked.marker]).unwrap();
        let is_rho = (0..alg.r_size() as RElem).any(|x| alg.rho(x) == e);
        assert_eq!(marker_only, is_rho);
    }

    #[test]
    fn quotient_preserves_ke_membership() {
        let budget = Budget::default();
        let alg = l12();
        let al = alg.alphabet();
        let (a, b1) = (al.sym("a").unwrap(), al.sym("b1").unwrap());
        let e = alg.psi(a, b1).unwrap();
        let ke = build_ke(&alg, e, &budget).unwrap();
        let q = ke.kernel.quotient().unwrap();
        assert!(q.r_size() < ke.kernel.r_size());
        for w in crate::vpa::enumerate::well_matched_up_to(&ke.marked.alphabet, 4, &budget)
            .unwrap()
        {
            assert_eq!(
                ke.kernel.member(&w).unwrap(),
                q.member(&w).unwrap(),
                "{:?}",
                ke.marked.alphabet.word_names(&w)
            );
        }
    }

    #[test]
    fn ke_forward_oracle() {
        let budget = Budget::default();
        let alg = mod2_algebra();
        let base = alg.alphabet().clone();
        for e in 0..alg.o_size() as OElem {
            if !alg.is_idempotent(e) {
                continue;
            }
            let ke = build_ke(&alg, e, &budget).unwrap();
            for ku in 0..=2usize {
                for kv in 0..=2usize {
                    for cu in contexts_of_shape(&base, ku, kv, &budget).unwrap() {
                        for cu2 in contexts_of_shape(&base, ku, kv, &budget).unwrap() {
                            if cu.v != cu2.v {
                                continue;
                            }
                            if psi_of(&alg, &cu) == e && psi_of(&alg, &cu2) == e {
                                let mut w = cu.u.clone();
                                w.push(ke.marked.marker);
                                w.extend(ke.marked.bar_word(&cu2.u).unwrap());
                                assert!(
                                    ke.kernel.member(&w).unwrap(),
                                    "u={:?} u'={:?} v={:?}",
                                    cu.u,
                                    cu2.u,
                                    cu.v
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn me_l12_examples() {
        let alg = l12();
        let al = alg.alphabet();
        let (a, b1, b2, c) = (
            al.sym("a").unwrap(),
            al.sym("b1").unwrap(),
            al.sym("b2").unwrap(),
            al.sym("c").unwrap(),
        );
        let e = alg.psi(a, b1).unwrap();
        let me = build_me(&alg, e).unwrap();
        let marked = MarkedAlphabet::with_marker(al).unwrap();
        assert!(me.accepts(&marked.mark(&[a], &[b1])));
        assert!(me.accepts(&marked.mark(&[a, c], &[b2])));
        // Height zero at the marker.
        assert!(!me.accepts(&[marked.marker]));
    }

    #[test]
    fn parikh_of_point_language() {
        // {c # c} over an internal-only alphabet.
        let budget = Budget::default();
        let base = VpAlphabet::new(&[], &["c"], &[]).unwrap();
        let marked = MarkedAlphabet::with_marker(&base).unwrap();
        let mut b = DvpaBuilder::new(marked.alphabet.clone());
        let states: Vec<_> = (0..4).map(|i| b.state(&format!("q{i}"))).collect();
        b.set_init(states[0]);
        b.add_final(states[3]);
        let c = marked.alphabet.sym("c").unwrap();
        b.internal(states[0], c, BOTTOM, states[1]).unwrap();
        b.internal(states[1], marked.marker, BOTTOM, states[2]).unwrap();
        b.internal(states[2], c, BOTTOM, states[3]).unwrap();
        let (d, _) = b.build().unwrap();
        let p = parikh_of_marked(&d, &budget).unwrap();
        assert!(p.member(&[1, 1]));
        assert!(!p.member(&[0, 0]));
        assert!(!p.member(&[1, 2]));
        assert!(!p.member(&[2, 1]));
    }

    #[test]
    fn parikh_of_le_up() {
        let budget = Budget::default();
        let alg = l12();
        let al = alg.alphabet();
        let (a, b1) = (al.sym("a").unwrap(), al.sym("b1").unwrap());
        let e = alg.psi(a, b1).unwrap();
        let d = build_le_up(&alg, e).unwrap();
        let p = parikh_of_marked(&d, &budget).unwrap();
        assert!(p.member(&[1, 1]));
        assert!(p.member(&[2, 1]));
        assert!(!p.member(&[0, 0]));
        // The id-indexed language is empty, and so is its image.
        let pempty =
            parikh_of_marked(&build_le_up(&alg, alg.o_one()).unwrap(), &budget).unwrap();
        assert!(pempty.is_empty());
    }

    #[test]
    fn parikh_of_ke_up_is_balanced_for_l12() {
        let budget = Budget::default();
        let alg = l12();
        let al = alg.alphabet();
        let (a, b1) = (al.sym("a").unwrap(), al.sym("b1").unwrap());
        let e = alg.psi(a, b1).unwrap();
        let d = build_ke_up(&alg, e, &budget).unwrap();
        let p = parikh_of_marked(&d, &budget).unwrap();
        assert!(p.member(&[1, 1]));
        assert!(p.unequal_coordinate_member().is_none());
    }
}
