//! The three decision procedures under the classifier: weak length-
//! synchronicity, length-synchronicity, and quasi-aperiodicity, each with
//! a finite witness when it fails.

use std::collections::BTreeSet;

use super::psets::PSets;
use crate::budget::Budget;
use crate::error::Result;
use crate::ext::{cycle_of, o_f_reachable, o_idempotents, OElem};
use crate::parikh::semilinear::collinear;
use crate::parikh::{intersect, some_member, SemilinearSet, Vector};

/// Failure witness: K_{e↑} contains a pair of contexts sharing their lower
/// word whose upper words have the given distinct lengths.
#[derive(Debug, Clone)]
pub struct WeakLsWitness {
    pub e: OElem,
    pub lengths: (u64, u64),
}

#[derive(Debug, Clone)]
pub struct WeakLs {
    pub holds: bool,
    pub witness: Option<WeakLsWitness>,
}

/// L is weakly length-synchronous iff for every F-reachable idempotent e
/// the pair set K_{e↑} has equal coordinates throughout.
pub fn decide_weak_ls(ps: &mut PSets, budget: &Budget) -> Result<WeakLs> {
    let fr = o_f_reachable(ps.alg);
    for e in o_idempotents(ps.alg) {
        if !fr[e as usize] {
            continue;
        }
        let k = ps.k_up(e, budget)?;
        if let Some(v) = k.unequal_coordinate_member() {
            return Ok(WeakLs {
                holds: false,
                witness: Some(WeakLsWitness {
                    e,
                    lengths: (v[0], v[1]),
                }),
            });
        }
    }
    Ok(WeakLs {
        holds: true,
        witness: None,
    })
}

/// Failure witness: two non-collinear length pairs in P(L_{e↑}).
#[derive(Debug, Clone)]
pub struct LsWitness {
    pub e: OElem,
    pub v1: (u64, u64),
    pub v2: (u64, u64),
}

#[derive(Debug, Clone)]
pub struct Ls {
    pub holds: bool,
    pub witness: Option<LsWitness>,
}

/// L is length-synchronous iff for every F-reachable idempotent e all of
/// P(L_{e↑}) lies on one ray through the origin.
pub fn decide_ls(ps: &mut PSets, budget: &Budget) -> Result<Ls> {
    let fr = o_f_reachable(ps.alg);
    for e in o_idempotents(ps.alg) {
        if !fr[e as usize] {
            continue;
        }
        let t = ps.t_up(e, budget)?;
        if !t.all_collinear() {
            let (v1, v2) = non_collinear_pair(&t, budget)?;
            return Ok(Ls {
                holds: false,
                witness: Some(LsWitness {
                    e,
                    v1: (v1[0], v1[1]),
                    v2: (v2[0], v2[1]),
                }),
            });
        }
    }
    Ok(Ls {
        holds: true,
        witness: None,
    })
}

/// First two non-collinear members in the lexicographic enumeration, the
/// canonical quadruple (k0, l0, k0', l0').
fn non_collinear_pair(s: &SemilinearSet, budget: &Budget) -> Result<(Vector, Vector)> {
    let mut bound = 4u64;
    loop {
        budget.check_search("classify.non_collinear", bound as usize)?;
        let pts: Vec<Vector> = s.enumerate_upto(bound).into_iter().collect();
        if let Some(v1) = pts.first() {
            for v2 in &pts[1..] {
                if !collinear(v1, v2) {
                    return Ok((v1.clone(), v2.clone()));
                }
            }
        }
        bound *= 2;
    }
}

/// Failure witness: a cyclic group inside ψ̄(ext(O^{k,l})) for one shape.
#[derive(Debug, Clone)]
pub struct QaWitness {
    pub g: OElem,
    pub cycle: Vec<OElem>,
    pub kl: (u64, u64),
}

#[derive(Debug, Clone)]
pub struct Qa {
    pub holds: bool,
    pub witness: Option<QaWitness>,
}

/// L is quasi-aperiodic iff no shape (k,l) realizes a nontrivial group:
/// equivalently, no g ∈ O has a cycle of period ≥ 2 whose elements share a
/// common length pair. A subset of O contains a nontrivial group iff it
/// contains the full cycle of one of its elements with period ≥ 2, so
/// checking cycles is complete.
pub fn decide_quasi_aperiodic(ps: &mut PSets, budget: &Budget) -> Result<Qa> {
    let mut seen: BTreeSet<Vec<OElem>> = BTreeSet::new();
    for g in 0..ps.alg.o_size() as OElem {
        let c = cycle_of(ps.alg, g);
        if c.period < 2 || !seen.insert(c.elems.clone()) {
            continue;
        }
        let mut inter = ps.t(c.elems[0], budget)?;
        for &f in &c.elems[1..] {
            if inter.is_empty() {
                break;
            }
            inter = intersect(&inter, &ps.t(f, budget)?, budget)?;
        }
        if let Some(v) = some_member(&inter) {
            return Ok(Qa {
                holds: false,
                witness: Some(QaWitness {
                    g,
                    cycle: c.elems,
                    kl: (v[0], v[1]),
                }),
            });
        }
    }
    Ok(Qa {
        holds: true,
        witness: None,
    })
}

/// Z = { e F-reachable : U_e is not length-synchronous }, the index set of
/// the intermediate grammar family.
pub fn compute_z(ps: &mut PSets, budget: &Budget) -> Result<Vec<OElem>> {
    let fr = o_f_reachable(ps.alg);
    let mut z = Vec::new();
    for e in 0..ps.alg.o_size() as OElem {
        if !fr[e as usize] {
            continue;
        }
        if !ps.s_e(e, budget)?.all_collinear() {
            z.push(e);
        }
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext::stair::eval_psi_vec;
    use crate::ext::syntactic::tests::l12_syntactic;
    use crate::ext::ExtAlgebra;
    use crate::vpa::Context;

    fn l12() -> ExtAlgebra {
        l12_syntactic().algebra
    }

    fn mod2() -> ExtAlgebra {
        crate::ext::algebra::tests::mod2_algebra()
    }

    fn value_of(alg: &ExtAlgebra, u: &str, v: &str) -> OElem {
        let ctx = Context::new(
            alg.alphabet().parse_word(u).unwrap(),
            alg.alphabet().parse_word(v).unwrap(),
        );
        let m = eval_psi_vec(alg.kernel(), &ctx).unwrap();
        alg.o_by_map(&m).unwrap()
    }

    #[test]
    fn l12_is_weakly_ls_but_not_ls() {
        let alg = l12();
        let budget = Budget::default();
        let mut ps = PSets::new(&alg, &budget).unwrap();
        let w = decide_weak_ls(&mut ps, &budget).unwrap();
        assert!(w.holds);

        let ls = decide_ls(&mut ps, &budget).unwrap();
        assert!(!ls.holds);
        let wit = ls.witness.unwrap();
        assert_eq!(wit.e, value_of(&alg, "a", "b1"));
        // Canonical quadruple: (a,b1) against (a c, b2).
        assert_eq!(wit.v1, (1, 1));
        assert_eq!(wit.v2, (2, 1));
    }

    #[test]
    fn l12_is_quasi_aperiodic() {
        let alg = l12();
        let budget = Budget::default();
        let mut ps = PSets::new(&alg, &budget).unwrap();
        assert!(decide_quasi_aperiodic(&mut ps, &budget).unwrap().holds);
    }

    #[test]
    fn mod2_fails_quasi_aperiodicity() {
        let alg = mod2();
        let budget = Budget::default();
        let mut ps = PSets::new(&alg, &budget).unwrap();
        assert!(decide_weak_ls(&mut ps, &budget).unwrap().holds);
        assert!(decide_ls(&mut ps, &budget).unwrap().holds);
        let qa = decide_quasi_aperiodic(&mut ps, &budget).unwrap();
        assert!(!qa.holds);
        let wit = qa.witness.unwrap();
        assert_eq!(wit.cycle.len(), 2);
        // The witness shape is realized by every cycle element.
        for &f in &wit.cycle {
            assert!(ps
                .t(f, &budget)
                .unwrap()
                .member(&[wit.kl.0, wit.kl.1]));
        }
    }

    #[test]
    fn dyck_fails_weak_ls() {
        let d = crate::vpa::dvpa::tests::dyck1();
        let budget = Budget::default();
        let alg = crate::ext::dvpa_to_ext(&d, &budget).unwrap();
        let syn = crate::ext::syntactic_quotient(&alg, &budget).unwrap();
        let mut ps = PSets::new(&syn.algebra, &budget).unwrap();
        let w = decide_weak_ls(&mut ps, &budget).unwrap();
        assert!(!w.holds);
        let wit = w.witness.unwrap();
        assert_ne!(wit.lengths.0, wit.lengths.1);
    }

    #[test]
    fn anbn_is_ls_and_qa() {
        let d = crate::vpa::dvpa::tests::anbn();
        let budget = Budget::default();
        let alg = crate::ext::dvpa_to_ext(&d, &budget).unwrap();
        let syn = crate::ext::syntactic_quotient(&alg, &budget).unwrap();
        let mut ps = PSets::new(&syn.algebra, &budget).unwrap();
        assert!(decide_weak_ls(&mut ps, &budget).unwrap().holds);
        assert!(decide_ls(&mut ps, &budget).unwrap().holds);
        assert!(decide_quasi_aperiodic(&mut ps, &budget).unwrap().holds);
    }

    #[test]
    fn l12_z_contains_the_witness_idempotent() {
        let alg = l12();
        let budget = Budget::default();
        let mut ps = PSets::new(&alg, &budget).unwrap();
        let z = compute_z(&mut ps, &budget).unwrap();
        assert!(!z.is_empty());
        assert!(z.contains(&value_of(&alg, "a", "b1")));
    }

    /// Quasi-aperiodicity against the definition: enumerate the value sets
    /// ψ̄(ext(O^{k,l})) for all small shapes and look for nontrivial groups
    /// by brute force.
    #[test]
    fn qa_matches_brute_force_on_small_shapes() {
        for (alg, expect) in [(l12(), true), (mod2(), false)] {
            let budget = Budget::default();
            let mut brute_violation = false;
            for k in 0..=3usize {
                for l in 0..=3usize {
                    let vals: BTreeSet<OElem> =
                        crate::vpa::enumerate::contexts_of_shape(alg.alphabet(), k, l, &budget)
                            .unwrap()
                            .iter()
                            .map(|c| {
                                let m = eval_psi_vec(alg.kernel(), c).unwrap();
                                alg.o_by_map(&m).unwrap()
                            })
                            .collect();
                    for &g in &vals {
                        let c = cycle_of(&alg, g);
                        if c.period >= 2 && c.elems.iter().all(|f| vals.contains(f)) {
                            brute_violation = true;
                        }
                    }
                }
            }
            let mut ps = PSets::new(&alg, &budget).unwrap();
            let qa = decide_quasi_aperiodic(&mut ps, &budget).unwrap();
            assert_eq!(qa.holds, expect);
            if brute_violation {
                assert!(!qa.holds, "shape-bounded violation must be found");
            }
        }
    }
}
