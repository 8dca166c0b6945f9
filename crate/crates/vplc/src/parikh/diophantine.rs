//! Contejean–Devie search for minimal non-negative solutions of linear
//! Diophantine systems, and the semilinear intersection built on it.

use crate::budget::Budget;
use crate::error::Result;
use crate::parikh::semilinear::{add, LinSet, SemilinearSet, Vector};
use std::collections::BTreeSet;

/// Minimal non-negative solutions of Σ x_i · cols[i] = rhs, split into
/// (particular solutions, Hilbert basis of the homogeneous system).
/// Implemented by homogenizing with an extra column −rhs whose coefficient
/// is frozen at ≤ 1: solutions with that coefficient 1 are particular, 0
/// homogeneous.
pub fn minimal_solutions(
    cols: &[Vec<i64>],
    rhs: &[i64],
    budget: &Budget,
) -> Result<(Vec<Vector>, Vec<Vector>)> {
    let d = rhs.len();
    let n = cols.len();
    let homogeneous_only = rhs.iter().all(|&x| x == 0);
    // Extended column list: the original columns plus -rhs (skipped when
    // rhs = 0 to avoid a spurious zero column).
    let mut ext: Vec<Vec<i64>> = cols.to_vec();
    if !homogeneous_only {
        ext.push(rhs.iter().map(|&x| -x).collect());
    }
    let m = ext.len();
    let value = |t: &[u64]| -> Vec<i64> {
        let mut v = vec![0i64; d];
        for (i, &ti) in t.iter().enumerate() {
            for j in 0..d {
                v[j] += ti as i64 * ext[i][j];
            }
        }
        v
    };
    let dominated = |t: &[u64], basis: &[Vector]| -> bool {
        basis
            .iter()
            .any(|b| b.iter().zip(t.iter()).all(|(&bi, &ti)| ti >= bi) && b.as_slice() != t)
    };

    let mut basis: Vec<Vector> = Vec::new();
    let mut frontier: std::collections::VecDeque<Vector> = (0..m)
        .map(|i| {
            let mut t = vec![0u64; m];
            t[i] = 1;
            t
        })
        .collect();
    let mut visited: BTreeSet<Vector> = frontier.iter().cloned().collect();
    let mut processed = 0usize;
    while let Some(t) = frontier.pop_front() {
        processed += 1;
        budget.check_search("diophantine", processed)?;
        let v = value(&t);
        if v.iter().all(|&x| x == 0) {
            if !dominated(&t, &basis) {
                basis.retain(|b| !b.iter().zip(t.iter()).all(|(&bi, &ti)| bi >= ti));
                basis.push(t);
            }
            continue;
        }
        for i in 0..m {
            // Frozen homogenization coefficient: at most one copy of -rhs.
            if !homogeneous_only && i == m - 1 && t[m - 1] >= 1 {
                continue;
            }
            // Contejean–Devie condition: only step along columns that
            // decrease the residual norm direction.
            let dot: i64 = (0..d).map(|j| ext[i][j] * v[j]).sum();
            if dot >= 0 {
                continue;
            }
            let mut child = t.clone();
            child[i] += 1;
            if dominated(&child, &basis) || !visited.insert(child.clone()) {
                continue;
            }
            frontier.push_back(child);
        }
    }

    let mut particular = Vec::new();
    let mut homogeneous = Vec::new();
    if homogeneous_only {
        // The zero tuple solves Σ x_i·cols[i] = 0, so the solution set is
        // exactly 0 + N·basis.
        particular.push(vec![0u64; n]);
    }
    for b in basis {
        if homogeneous_only {
            homogeneous.push(b[..n].to_vec());
        } else if b[m - 1] == 1 {
            particular.push(b[..n].to_vec());
        } else {
            debug_assert_eq!(b[m - 1], 0);
            homogeneous.push(b[..n].to_vec());
        }
    }
    particular.sort();
    homogeneous.sort();
    Ok((particular, homogeneous))
}

fn intersect_linear(a: &LinSet, b: &LinSet, budget: &Budget) -> Result<Vec<LinSet>> {
    let d = a.base.len();
    // Solve base_a + P_a x = base_b + P_b y.
    let mut cols: Vec<Vec<i64>> = Vec::new();
    for p in &a.periods {
        cols.push(p.iter().map(|&x| x as i64).collect());
    }
    for q in &b.periods {
        cols.push(q.iter().map(|&x| -(x as i64)).collect());
    }
    let rhs: Vec<i64> = (0..d)
        .map(|j| b.base[j] as i64 - a.base[j] as i64)
        .collect();
    let (particular, homogeneous) = minimal_solutions(&cols, &rhs, budget)?;
    let na = a.periods.len();
    let shift = |coeffs: &[u64]| -> Vector {
        let mut v = vec![0u64; d];
        for (i, &c) in coeffs.iter().enumerate().take(na) {
            for j in 0..d {
                v[j] += c * a.periods[i][j];
            }
        }
        v
    };
    let periods: Vec<Vector> = homogeneous.iter().map(|h| shift(h)).collect();
    Ok(particular
        .iter()
        .map(|s| LinSet::new(add(&a.base, &shift(s)), periods.clone()))
        .collect())
}

/// Exact intersection of semilinear sets.
pub fn intersect(
    a: &SemilinearSet,
    b: &SemilinearSet,
    budget: &Budget,
) -> Result<SemilinearSet> {
    assert_eq!(a.dim, b.dim);
    let mut comps = Vec::new();
    for ca in &a.comps {
        for cb in &b.comps {
            comps.extend(intersect_linear(ca, cb, budget)?);
        }
    }
    Ok(SemilinearSet::from_comps(a.dim, comps))
}

/// Some member of the set: the smallest base over its components.
pub fn some_member(s: &SemilinearSet) -> Option<Vector> {
    s.comps
        .iter()
        .map(|c| c.base.clone())
        .min_by_key(|b| (b.iter().sum::<u64>(), b.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hilbert_basis_of_balance() {
        // x1 - x2 = 0: basis {(1,1)}, zero as the particular solution.
        let b = Budget::default();
        let (part, hom) = minimal_solutions(&[vec![1], vec![-1]], &[0], &b).unwrap();
        assert_eq!(part, vec![vec![0, 0]]);
        assert_eq!(hom, vec![vec![1, 1]]);
    }

    #[test]
    fn bezout_like() {
        // 3x - 5y = 1: minimal particular (2,1); homogeneous (5,3).
        let b = Budget::default();
        let (part, hom) = minimal_solutions(&[vec![3], vec![-5]], &[1], &b).unwrap();
        assert_eq!(part, vec![vec![2, 1]]);
        assert_eq!(hom, vec![vec![5, 3]]);
    }

    #[test]
    fn intersect_progressions() {
        let b = Budget::default();
        // (1 + 2N) ∩ (0 + 3N) = 3 + 6N.
        let odd = SemilinearSet::linear(vec![1], vec![vec![2]]);
        let mult3 = SemilinearSet::linear(vec![0], vec![vec![3]]);
        let i = intersect(&odd, &mult3, &b).unwrap();
        for v in 0..40u64 {
            assert_eq!(i.member(&[v]), v % 2 == 1 && v % 3 == 0, "at {v}");
        }
    }

    #[test]
    fn intersect_planes() {
        let b = Budget::default();
        // Diagonal ∩ (x = 2y): only the origin.
        let diag = SemilinearSet::linear(vec![0, 0], vec![vec![1, 1]]);
        let dbl = SemilinearSet::linear(vec![0, 0], vec![vec![2, 1]]);
        let i = intersect(&diag, &dbl, &b).unwrap();
        assert!(i.member(&[0, 0]));
        assert!(!i.member(&[2, 2]));
        assert!(!i.member(&[2, 1]));
        // Shifted diagonals that never meet.
        let d1 = SemilinearSet::linear(vec![1, 0], vec![vec![1, 1]]);
        let d2 = SemilinearSet::linear(vec![0, 2], vec![vec![1, 1]]);
        assert!(intersect(&d1, &d2, &b).unwrap().is_empty());
        // And ones that do: (1,0)+N(1,1) ∩ (0,0)+N(1,1) is empty too
        // (first coordinate always exceeds the second by one).
        let d3 = SemilinearSet::linear(vec![0, 0], vec![vec![1, 1]]);
        assert!(intersect(&d1, &d3, &b).unwrap().is_empty());
        assert_eq!(some_member(&i), Some(vec![0, 0]));
    }

    #[test]
    fn member_matches_enumeration_after_intersection() {
        let b = Budget::default();
        let s1 = SemilinearSet::linear(vec![1, 2], vec![vec![2, 1], vec![0, 3]]);
        let s2 = SemilinearSet::linear(vec![1, 2], vec![vec![1, 2]]);
        let i = intersect(&s1, &s2, &b).unwrap();
        for x in 0..=12u64 {
            for y in 0..=12u64 {
                let both = s1.member(&[x, y]) && s2.member(&[x, y]);
                assert_eq!(i.member(&[x, y]), both, "at ({x},{y})");
            }
        }
    }
}
