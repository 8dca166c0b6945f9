//! Syntactic quotient of an Ext-algebra.
//!
//! Restricts to the image of the free evaluation (elements actually named by
//! well-matched words, operators actually named by contexts) and collapses
//! elements the operator image cannot tell apart relative to the accepting
//! set. The result recognizes the same language and is the unique minimal
//! recognizer up to isomorphism.

use std::collections::BTreeMap;

use super::algebra::{ExtAlgebra, ExtKernel, Interner, RElem};
use crate::budget::Budget;
use crate::error::{Error, Result};

pub struct Syntactic {
    pub algebra: ExtAlgebra,
    /// Original element -> class, for elements in the image of φ̄.
    pub r_class: BTreeMap<RElem, RElem>,
}

pub fn syntactic_quotient(alg: &ExtAlgebra, budget: &Budget) -> Result<Syntactic> {
    let k = alg.kernel();

    // Image of φ̄: every value a well-matched word can take.
    let mut r_img: Vec<RElem> = Vec::new();
    let mut r_pos: BTreeMap<RElem, usize> = BTreeMap::new();
    let push_r = |r_img: &mut Vec<RElem>, r_pos: &mut BTreeMap<RElem, usize>, r: RElem| {
        if !r_pos.contains_key(&r) {
            r_pos.insert(r, r_img.len());
            r_img.push(r);
        }
    };
    push_r(&mut r_img, &mut r_pos, k.one());
    for (_, &r) in k.phi_table() {
        push_r(&mut r_img, &mut r_pos, r);
    }
    let mut head = 0;
    while head < r_img.len() {
        budget.check_closure("syntactic.R", r_img.len())?;
        let x = r_img[head];
        head += 1;
        for i in 0..r_img.len() {
            let y = r_img[i];
            push_r(&mut r_img, &mut r_pos, k.mul(x, y));
            push_r(&mut r_img, &mut r_pos, k.mul(y, x));
        }
        for (_, v) in k.psi_table() {
            push_r(&mut r_img, &mut r_pos, v[x as usize]);
        }
    }
    let m = r_img.len();

    // Image of ψ̄ as maps over r_img (indices into r_img): the monoid
    // generated by restricted translations and ψ tables.
    let restrict = |f: &dyn Fn(RElem) -> RElem| -> Result<Vec<u32>> {
        r_img
            .iter()
            .map(|&r| {
                r_pos
                    .get(&f(r))
                    .map(|&i| i as u32)
                    .ok_or_else(|| Error::internal("image not closed under operator"))
            })
            .collect()
    };
    let mut o_img: Interner<Vec<u32>> = Interner::new();
    let mut worklist: Vec<u32> = Vec::new();
    let add = |o_img: &mut Interner<Vec<u32>>, worklist: &mut Vec<u32>, f: Vec<u32>| {
        let (id, fresh) = o_img.intern(f);
        if fresh {
            worklist.push(id);
        }
    };
    add(&mut o_img, &mut worklist, (0..m as u32).collect());
    for &r in &r_img {
        add(&mut o_img, &mut worklist, restrict(&|x| k.mul(r, x))?);
        add(&mut o_img, &mut worklist, restrict(&|x| k.mul(x, r))?);
    }
    for (_, v) in k.psi_table() {
        add(&mut o_img, &mut worklist, restrict(&|x| v[x as usize])?);
    }
    while let Some(x) = worklist.pop() {
        budget.check_closure("syntactic.O", o_img.len())?;
        let fx = o_img.item(x).clone();
        for y in 0..o_img.len() {
            let fy = o_img.item(y as u32).clone();
            let xy: Vec<u32> = (0..m).map(|i| fx[fy[i] as usize]).collect();
            add(&mut o_img, &mut worklist, xy);
            let yx: Vec<u32> = (0..m).map(|i| fy[fx[i] as usize]).collect();
            add(&mut o_img, &mut worklist, yx);
        }
    }

    // Syntactic congruence: r1 ≈ r2 iff no operator separates them w.r.t. F.
    let sig = |i: usize| -> Vec<bool> {
        o_img
            .items()
            .iter()
            .map(|f| k.is_accepting(r_img[f[i] as usize]))
            .collect()
    };
    let mut class_of: Vec<u32> = vec![0; m];
    let mut classes: Interner<Vec<bool>> = Interner::new();
    for i in 0..m {
        let (c, _) = classes.intern(sig(i));
        class_of[i] = c;
    }
    let n = classes.len();
    let reps: Vec<usize> = (0..n as u32)
        .map(|c| class_of.iter().position(|&x| x == c).unwrap())
        .collect();

    // Quotient tables, with well-definedness checked over all members.
    let mut mult = vec![0 as RElem; n * n];
    for c1 in 0..n {
        for c2 in 0..n {
            let prod = class_of[r_pos[&k.mul(r_img[reps[c1]], r_img[reps[c2]])]];
            mult[c1 * n + c2] = prod;
        }
    }
    for i in 0..m {
        for j in 0..m {
            let got = class_of[r_pos[&k.mul(r_img[i], r_img[j])]];
            if got != mult[class_of[i] as usize * n + class_of[j] as usize] {
                return Err(Error::internal("syntactic congruence breaks product"));
            }
        }
    }
    let one_q = class_of[r_pos[&k.one()]];
    let mut phi_q = BTreeMap::new();
    for (&c, &r) in k.phi_table() {
        phi_q.insert(c, class_of[r_pos[&r]]);
    }
    let mut psi_q = BTreeMap::new();
    for (&(a, b), v) in k.psi_table() {
        let mut table = vec![0 as RElem; n];
        for c in 0..n {
            table[c] = class_of[r_pos[&v[r_img[reps[c]] as usize]]];
        }
        for i in 0..m {
            if class_of[r_pos[&v[r_img[i] as usize]]] != table[class_of[i] as usize] {
                return Err(Error::internal("syntactic congruence breaks ψ"));
            }
        }
        psi_q.insert((a, b), table);
    }
    let mut accepting = std::collections::BTreeSet::new();
    for i in 0..m {
        if k.is_accepting(r_img[i]) {
            accepting.insert(class_of[i]);
        } else if accepting.contains(&class_of[i]) {
            return Err(Error::internal("class mixes accepting and rejecting"));
        }
    }

    let orig_names: Vec<&str> = reps.iter().map(|&i| k.r_name(r_img[i])).collect();
    let unique = {
        let mut seen = std::collections::BTreeSet::new();
        orig_names.iter().all(|s| seen.insert(*s))
    };
    let r_names: Vec<String> = (0..n)
        .map(|c| {
            if unique {
                orig_names[c].to_string()
            } else {
                format!("r{c}")
            }
        })
        .collect();
    let kernel = ExtKernel::new(
        k.alphabet.clone(),
        r_names,
        one_q,
        mult,
        phi_q,
        psi_q,
        accepting,
    )?;

    // Each image operator induces a map on classes; dedupe.
    let mut o_maps: Interner<Vec<RElem>> = Interner::new();
    for f in o_img.items() {
        let mut table = vec![0 as RElem; n];
        for c in 0..n {
            table[c] = class_of[f[reps[c]] as usize];
        }
        for i in 0..m {
            if class_of[f[i] as usize] != table[class_of[i] as usize] {
                return Err(Error::internal("syntactic congruence breaks operator"));
            }
        }
        o_maps.intern(table);
    }

    let algebra = ExtAlgebra::new(kernel, o_maps.items().to_vec())?;
    let r_class: BTreeMap<RElem, RElem> = r_pos
        .iter()
        .map(|(&r, &i)| (r, class_of[i]))
        .collect();
    Ok(Syntactic { algebra, r_class })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::ext::algebra::tests::mod2_algebra;
    use crate::vpa::alphabet::VpAlphabet;

    #[test]
    fn mod2_drops_constant_operators() {
        let alg = mod2_algebra();
        let syn = syntactic_quotient(&alg, &Budget::default()).unwrap();
        assert_eq!(syn.algebra.r_size(), 2);
        assert_eq!(syn.algebra.o_size(), 2);
        assert_eq!(syn.algebra.kernel().accepting().len(), 1);
    }

    /// Z/4 with accepting {0, 2} collapses onto Z/2.
    pub(crate) fn mod4_even_algebra() -> ExtAlgebra {
        let alphabet = VpAlphabet::new(&[], &["t"], &[]).unwrap();
        let mut phi = BTreeMap::new();
        phi.insert(0, 1);
        let mut mult = vec![0; 16];
        for x in 0..4u32 {
            for y in 0..4u32 {
                mult[(x * 4 + y) as usize] = (x + y) % 4;
            }
        }
        let kernel = ExtKernel::new(
            alphabet,
            (0..4).map(|i| format!("{i}")).collect(),
            0,
            mult,
            phi,
            BTreeMap::new(),
            [0, 2].into_iter().collect(),
        )
        .unwrap();
        let o_maps = (0..4u32)
            .map(|s| (0..4u32).map(|x| (x + s) % 4).collect())
            .collect();
        ExtAlgebra::new(kernel, o_maps).unwrap()
    }

    #[test]
    fn mod4_even_collapses_to_mod2() {
        let syn = syntactic_quotient(&mod4_even_algebra(), &Budget::default()).unwrap();
        assert_eq!(syn.algebra.r_size(), 2);
        assert_eq!(syn.algebra.o_size(), 2);
        assert_eq!(syn.r_class[&0], syn.r_class[&2]);
        assert_eq!(syn.r_class[&1], syn.r_class[&3]);
        assert_ne!(syn.r_class[&0], syn.r_class[&1]);
    }

    pub(crate) fn l12_syntactic() -> Syntactic {
        let g = crate::vpa::vvpg::tests::l12_grammar();
        let d = g.to_nvpa().unwrap().determinize(&Budget::default()).unwrap();
        let alg = crate::ext::dvpa_to_ext(&d, &Budget::default()).unwrap();
        syntactic_quotient(&alg, &Budget::default()).unwrap()
    }

    #[test]
    fn l12_pipeline_sizes() {
        let syn = l12_syntactic();
        assert_eq!(syn.algebra.r_size(), 5);
        assert_eq!(syn.algebra.o_size(), 13);
        assert_eq!(syn.algebra.kernel().accepting().len(), 2);
    }

    #[test]
    fn quotient_is_idempotent() {
        let syn = syntactic_quotient(&mod4_even_algebra(), &Budget::default()).unwrap();
        let again = syntactic_quotient(&syn.algebra, &Budget::default()).unwrap();
        assert_eq!(again.algebra.r_size(), syn.algebra.r_size());
        assert_eq!(again.algebra.o_size(), syn.algebra.o_size());
    }
}
