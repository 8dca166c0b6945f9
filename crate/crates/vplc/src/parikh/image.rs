//! Exact Parikh images of context-free grammars.
//!
//! The grammar's nonterminal dependency graph is split into strongly
//! connected components, solved bottom-up. Linear components reduce to one
//! linear system over the semilinear Kleene algebra. Nonlinear components
//! run Newton iteration: each round solves the linearization of the system
//! at the current approximant. Over an idempotent commutative semiring the
//! Newton sequence reaches the least fixpoint within #variables + 1 rounds;
//! single-axis components (the common case by construction here) are
//! additionally certified by a Park-induction inclusion check in the
//! decidable one-dimensional fragment.

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::parikh::cfg::{Cfg, CfgSym};
use crate::parikh::linsolve::LinearSystem;
use crate::parikh::semilinear::{canon1, includes1, SemilinearSet};

struct SccProd {
    lhs: usize,
    /// Fully evaluated contribution of terminals and already-solved
    /// nonterminals.
    coeff: SemilinearSet,
    /// Occurrences of in-component variables (local indices, with
    /// multiplicity).
    vars: Vec<usize>,
}

pub fn parikh_image(cfg: &Cfg, budget: &Budget) -> Result<SemilinearSet> {
    cfg.validate()?;
    let g = cfg.reduce();
    let dim = g.terminals.len();
    let n = g.nonterminals.len();
    let mut solved: Vec<Option<SemilinearSet>> = vec![None; n];

    for scc in sccs_reverse_topological(&g) {
        let local: std::collections::BTreeMap<usize, usize> =
            scc.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let s = scc.len();
        let mut prods: Vec<SccProd> = Vec::new();
        let mut nonlinear = false;
        for (lhs, rhs) in &g.prods {
            let Some(&l) = local.get(lhs) else { continue };
            let mut coeff = SemilinearSet::zero_vector(dim);
            let mut term_vec = vec![0u64; dim];
            let mut vars = Vec::new();
            for sym in rhs {
                match sym {
                    CfgSym::T(t) => term_vec[*t] += 1,
                    CfgSym::N(y) => {
                        if let Some(&ly) = local.get(y) {
                            vars.push(ly);
                        } else {
                            let sol = solved[*y]
                                .as_ref()
                                .ok_or_else(|| Error::internal("scc order broken"))?;
                            coeff = coeff.sum(sol);
                        }
                    }
                }
            }
            coeff = coeff.sum(&SemilinearSet::point(term_vec));
            if vars.len() > 1 {
                nonlinear = true;
            }
            prods.push(SccProd {
                lhs: l,
                coeff,
                vars,
            });
        }

        let solutions = if !nonlinear {
            solve_linear_component(dim, s, &prods, budget)?
        } else {
            solve_newton_component(dim, s, &prods, budget)?
        };
        for (i, &x) in scc.iter().enumerate() {
            solved[x] = Some(solutions[i].clone());
        }
    }

    let answer = solved[g.start]
        .take()
        .ok_or_else(|| Error::internal("start variable left unsolved"))?;
    if dim == 1 {
        canon1(&answer, budget)
    } else {
        Ok(answer)
    }
}

fn solve_linear_component(
    dim: usize,
    s: usize,
    prods: &[SccProd],
    budget: &Budget,
) -> Result<Vec<SemilinearSet>> {
    let mut sys = LinearSystem::new(dim, s);
    for p in prods {
        match p.vars.as_slice() {
            [] => sys.add_const(p.lhs, &p.coeff),
            [y] => sys.add_coeff(p.lhs, *y, &p.coeff),
            _ => unreachable!("linear component"),
        }
    }
    sys.solve(budget)
}

fn support(sets: &[&SemilinearSet]) -> Vec<usize> {
    let dim = sets.first().map(|s| s.dim).unwrap_or(0);
    (0..dim)
        .filter(|&axis| {
            sets.iter().any(|s| {
                s.comps.iter().any(|c| {
                    c.base[axis] > 0 || c.periods.iter().any(|p| p[axis] > 0)
                })
            })
        })
        .collect()
}

fn solve_newton_component(
    dim: usize,
    s: usize,
    prods: &[SccProd],
    budget: &Budget,
) -> Result<Vec<SemilinearSet>> {
    // Single-axis components are solved in the 1-dimensional projection,
    // where every round can be certified.
    let coeff_refs: Vec<&SemilinearSet> = prods.iter().map(|p| &p.coeff).collect();
    let axes = support(&coeff_refs);
    if dim != 1 && axes.len() <= 1 {
        let axis = axes.first().copied().unwrap_or(0);
        let projected: Vec<SccProd> = prods
            .iter()
            .map(|p| SccProd {
                lhs: p.lhs,
                coeff: p.coeff.project(&[axis]),
                vars: p.vars.clone(),
            })
            .collect();
        let solved = solve_newton_component(1, s, &projected, budget)?;
        return Ok(solved.iter().map(|x| x.embed_axis(dim, axis)).collect());
    }

    let eval_product = |coeff: &SemilinearSet, vars: &[usize], nu: &[SemilinearSet]| {
        let mut acc = coeff.clone();
        for &v in vars {
            if nu[v].is_empty() {
                return SemilinearSet::empty(dim);
            }
            acc = acc.sum(&nu[v]);
        }
        acc
    };

    let mut nu: Vec<SemilinearSet> = (0..s).map(|_| SemilinearSet::empty(dim)).collect();
    // Newton reaches the least fixpoint within s+1 rounds in an idempotent
    // commutative semiring; dimension 1 stops as soon as Park induction
    // certifies the candidate.
    for _round in 0..s + 1 {
        let width: usize = nu.iter().map(|x| x.comps.len()).sum();
        budget.check_closure("newton", width)?;
        let mut sys = LinearSystem::new(dim, s);
        for p in prods {
            sys.add_const(p.lhs, &eval_product(&p.coeff, &p.vars, &nu));
            for t in 0..p.vars.len() {
                let mut rest = p.vars.clone();
                rest.remove(t);
                let w = eval_product(&p.coeff, &rest, &nu);
                if !w.is_empty() {
                    sys.add_coeff(p.lhs, p.vars[t], &w);
                }
            }
        }
        let next = sys.solve(budget)?;
        if dim == 1 {
            let mut certified = true;
            let mut fx: Vec<SemilinearSet> = (0..s).map(|_| SemilinearSet::empty(1)).collect();
            for p in prods {
                fx[p.lhs] = fx[p.lhs].union(&eval_product(&p.coeff, &p.vars, &next));
            }
            for i in 0..s {
                if !includes1(&next[i], &fx[i], budget)? {
                    certified = false;
                    break;
                }
            }
            if certified {
                return Ok(next);
            }
        }
        // Iterates are monotone; a stable round is the fixpoint.
        if next == nu {
            return Ok(nu);
        }
        nu = next;
    }
    if dim == 1 {
        return Err(Error::internal(
            "newton failed to certify in the guaranteed rounds",
        ));
    }
    Ok(nu)
}

/// Strongly connected components of the nonterminal graph in reverse
/// topological order (callees before callers).
fn sccs_reverse_topological(g: &Cfg) -> Vec<Vec<usize>> {
    let n = g.nonterminals.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (lhs, rhs) in &g.prods {
        for s in rhs {
            if let CfgSym::N(y) = s {
                adj[*lhs].push(*y);
            }
        }
    }
    // Iterative Tarjan.
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut out: Vec<Vec<usize>> = Vec::new();
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        // (node, child position)
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(top) = call.last_mut() {
            let v = top.0;
            if top.1 < adj[v].len() {
                let w = adj[v][top.1];
                top.1 += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort();
                    out.push(comp);
                }
            }
        }
    }
    out
}
