//! Structure theory of the operator monoid: Green's relations, maximal
//! subgroups, solvability, power cycles, and F-reachability.

use std::collections::BTreeSet;

use super::algebra::{ExtAlgebra, OElem, RElem};

pub struct GreenO {
    /// left[x] = O ∘ x ∪ {x}
    pub left: Vec<BTreeSet<OElem>>,
    /// right[x] = x ∘ O ∪ {x}
    pub right: Vec<BTreeSet<OElem>>,
}

pub fn green_relations(alg: &ExtAlgebra) -> GreenO {
    let n = alg.o_size() as OElem;
    let mut left = Vec::with_capacity(n as usize);
    let mut right = Vec::with_capacity(n as usize);
    for x in 0..n {
        let mut l = BTreeSet::new();
        let mut r = BTreeSet::new();
        for z in 0..n {
            l.insert(alg.compose(z, x));
            r.insert(alg.compose(x, z));
        }
        left.push(l);
        right.push(r);
    }
    GreenO { left, right }
}

impl GreenO {
    pub fn h_equivalent(&self, x: OElem, y: OElem) -> bool {
        self.left[x as usize] == self.left[y as usize]
            && self.right[x as usize] == self.right[y as usize]
    }

    pub fn h_class_of(&self, x: OElem) -> Vec<OElem> {
        (0..self.left.len() as OElem)
            .filter(|&y| self.h_equivalent(x, y))
            .collect()
    }
}

pub fn o_idempotents(alg: &ExtAlgebra) -> Vec<OElem> {
    (0..alg.o_size() as OElem)
        .filter(|&e| alg.is_idempotent(e))
        .collect()
}

/// The H-class of an idempotent is its maximal subgroup.
pub fn maximal_subgroup(g: &GreenO, e: OElem) -> Vec<OElem> {
    g.h_class_of(e)
}

/// Solvability by the derived series, generically over any finite group
/// given as (identity, elements, composition).
pub fn is_solvable_group(e: u32, elems: &[u32], compose: impl Fn(u32, u32) -> u32 + Copy) -> bool {
    let set: BTreeSet<u32> = elems.iter().copied().collect();
    let inverse = |g: u32| -> u32 {
        *elems
            .iter()
            .find(|&&h| compose(g, h) == e && compose(h, g) == e)
            .expect("group element has an inverse")
    };
    let mut current = set;
    loop {
        if current.len() == 1 {
            return true;
        }
        // Subgroup generated by commutators of `current`.
        let mut gen: BTreeSet<u32> = [e].into_iter().collect();
        for &g in &current {
            for &h in &current {
                gen.insert(compose(
                    compose(inverse(g), inverse(h)),
                    compose(g, h),
                ));
            }
        }
        let mut frontier: Vec<u32> = gen.iter().copied().collect();
        while let Some(x) = frontier.pop() {
            for y in gen.clone() {
                for p in [compose(x, y), compose(y, x)] {
                    if gen.insert(p) {
                        frontier.push(p);
                    }
                }
            }
        }
        if gen.len() == current.len() {
            return false;
        }
        current = gen;
    }
}

/// (solvable-everywhere, counterexample idempotent).
pub fn all_subgroups_solvable(alg: &ExtAlgebra) -> (bool, Option<OElem>) {
    let g = green_relations(alg);
    for e in o_idempotents(alg) {
        let h = maximal_subgroup(&g, e);
        if !is_solvable_group(e, &h, |x, y| alg.compose(x, y)) {
            return (false, Some(e));
        }
    }
    (true, None)
}

/// The cycle part of the powers of g: g^x0 is the idempotent power, the
/// elements g^x0 … g^(x0+period-1) form a cyclic group of order `period`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    pub x0: usize,
    pub period: usize,
    pub idem: OElem,
    /// g^(x0+i) for i in 0..period.
    pub elems: Vec<OElem>,
}

pub fn cycle_of(alg: &ExtAlgebra, g: OElem) -> Cycle {
    let mut seen: Vec<(OElem, usize)> = Vec::new();
    let mut cur = g;
    let mut exp = 1usize;
    let (tail, period) = loop {
        if let Some(&(_, first)) = seen.iter().find(|&&(h, _)| h == cur) {
            break (first, exp - first);
        }
        seen.push((cur, exp));
        cur = alg.compose(cur, g);
        exp += 1;
    };
    let x0 = period * tail.div_ceil(period);
    let power = |k: usize| -> OElem {
        // k ≥ 1; within the recorded prefix or reduced into the cycle.
        let idx = if k <= seen.len() {
            k - 1
        } else {
            tail - 1 + (k - tail) % period
        };
        seen[idx].0
    };
    let idem = power(x0);
    debug_assert!(alg.is_idempotent(idem));
    let elems = (0..period).map(|i| power(x0 + i)).collect();
    Cycle {
        x0,
        period,
        idem,
        elems,
    }
}

pub fn idempotent_power(alg: &ExtAlgebra, g: OElem) -> OElem {
    cycle_of(alg, g).idem
}

/// r is F-reachable when some operator sends it into the accepting set.
pub fn r_f_reachable(alg: &ExtAlgebra) -> Vec<bool> {
    (0..alg.r_size() as RElem)
        .map(|r| (0..alg.o_size() as OElem).any(|e| alg.kernel().is_accepting(alg.apply(e, r))))
        .collect()
}

/// e is F-reachable when it maps some element to an F-reachable one.
pub fn o_f_reachable(alg: &ExtAlgebra) -> Vec<bool> {
    let rf = r_f_reachable(alg);
    (0..alg.o_size() as OElem)
        .map(|e| (0..alg.r_size() as RElem).any(|r| rf[alg.apply(e, r) as usize]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext::algebra::tests::mod2_algebra;
    use crate::ext::syntactic::tests::mod4_even_algebra;

    #[test]
    fn cycle_of_swap() {
        let alg = mod2_algebra();
        let swap = alg.o_by_map(&[1, 0]).unwrap();
        let c = cycle_of(&alg, swap);
        assert_eq!(c.period, 2);
        assert_eq!(c.idem, alg.o_one());
        assert_eq!(c.x0, 2);
        assert_eq!(c.elems, vec![alg.o_one(), swap]);
        let const0 = alg.o_by_map(&[0, 0]).unwrap();
        let c0 = cycle_of(&alg, const0);
        assert_eq!((c0.period, c0.x0, c0.idem), (1, 1, const0));
    }

    #[test]
    fn mod4_translations_form_z4() {
        let alg = mod4_even_algebra();
        let g = green_relations(&alg);
        let h = maximal_subgroup(&g, alg.o_one());
        assert_eq!(h.len(), 4);
        assert!(is_solvable_group(alg.o_one(), &h, |x, y| alg.compose(x, y)));
        let shift = alg.o_by_map(&[1, 2, 3, 0]).unwrap();
        let c = cycle_of(&alg, shift);
        assert_eq!(c.period, 4);
        assert_eq!(c.idem, alg.o_one());
    }

    /// Permutations as u32-coded maps on 0..n, composed like our operators:
    /// (x ∘ y)(i) = x(y(i)).
    fn perm_group(n: usize, gens: &[Vec<u32>]) -> (Vec<Vec<u32>>, impl Fn(&[Vec<u32>], usize, usize) -> Vec<u32>) {
        fn comp(x: &[u32], y: &[u32]) -> Vec<u32> {
            (0..y.len()).map(|i| x[y[i] as usize]).collect()
        }
        let mut elems: Vec<Vec<u32>> = vec![(0..n as u32).collect()];
        let mut frontier = elems.clone();
        while let Some(x) = frontier.pop() {
            for g in gens {
                let p = comp(&x, g);
                if !elems.contains(&p) {
                    elems.push(p.clone());
                    frontier.push(p);
                }
            }
        }
        (elems, |elems: &[Vec<u32>], x: usize, y: usize| {
            comp(&elems[x], &elems[y])
        })
    }

    #[test]
    fn s3_solvable_a5_not() {
        let (s3, comp) = perm_group(3, &[vec![1, 0, 2], vec![1, 2, 0]]);
        assert_eq!(s3.len(), 6);
        let ids: Vec<u32> = (0..s3.len() as u32).collect();
        let compose3 = |x: u32, y: u32| {
            let p = comp(&s3, x as usize, y as usize);
            s3.iter().position(|q| *q == p).unwrap() as u32
        };
        assert!(is_solvable_group(0, &ids, compose3));

        // A5 = <(0 1 2 3 4), (0 1 2)>.
        let (a5, comp5) = perm_group(5, &[vec![1, 2, 3, 4, 0], vec![1, 2, 0, 3, 4]]);
        assert_eq!(a5.len(), 60);
        let ids5: Vec<u32> = (0..a5.len() as u32).collect();
        let compose5 = |x: u32, y: u32| {
            let p = comp5(&a5, x as usize, y as usize);
            a5.iter().position(|q| *q == p).unwrap() as u32
        };
        assert!(!is_solvable_group(0, &ids5, compose5));
    }

    #[test]
    fn f_reachability() {
        let alg = mod2_algebra();
        assert_eq!(r_f_reachable(&alg), vec![true, true]);
        assert_eq!(o_f_reachable(&alg), vec![true; 4]);
    }
}
