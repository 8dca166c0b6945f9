//! Least solutions of linear fixpoint systems over semilinear sets.
//!
//! X_i = ⊕_j W_ij ⊗ X_j ⊕ C_i, with ⊕ = union and ⊗ = Minkowski sum.
//! Solved by Gaussian elimination in the Kleene algebra: eliminate variables
//! forward (starring self-loops), then back-substitute. Exact because
//! semilinear sets form a *-continuous commutative Kleene algebra.

use crate::budget::Budget;
use crate::error::Result;
use crate::parikh::semilinear::{canon1, SemilinearSet};

pub struct LinearSystem {
    pub dim: usize,
    pub n: usize,
    w: Vec<Vec<SemilinearSet>>,
    c: Vec<SemilinearSet>,
}

impl LinearSystem {
    pub fn new(dim: usize, n: usize) -> Self {
        LinearSystem {
            dim,
            n,
            w: (0..n)
                .map(|_| (0..n).map(|_| SemilinearSet::empty(dim)).collect())
                .collect(),
            c: (0..n).map(|_| SemilinearSet::empty(dim)).collect(),
        }
    }

    pub fn add_coeff(&mut self, i: usize, j: usize, s: &SemilinearSet) {
        self.w[i][j] = self.w[i][j].union(s);
    }

    pub fn add_const(&mut self, i: usize, s: &SemilinearSet) {
        self.c[i] = self.c[i].union(s);
    }

    fn compact(&self, s: SemilinearSet, budget: &Budget) -> Result<SemilinearSet> {
        if self.dim == 1 {
            canon1(&s, budget)
        } else {
            Ok(s)
        }
    }

    pub fn solve(mut self, budget: &Budget) -> Result<Vec<SemilinearSet>> {
        let n = self.n;
        for k in 0..n {
            let total: usize = self
                .w
                .iter()
                .flat_map(|row| row.iter().map(|s| s.comps.len()))
                .sum();
            budget.check_closure("linsolve", total)?;
            let star = self.compact(self.w[k][k].star(), budget)?;
            self.w[k][k] = SemilinearSet::empty(self.dim);
            self.c[k] = self.compact(star.sum(&self.c[k]), budget)?;
            for j in k + 1..n {
                if !self.w[k][j].is_empty() {
                    self.w[k][j] = self.compact(star.sum(&self.w[k][j]), budget)?;
                }
            }
            for i in k + 1..n {
                if self.w[i][k].is_empty() {
                    continue;
                }
                let wik = std::mem::replace(&mut self.w[i][k], SemilinearSet::empty(self.dim));
                self.c[i] = self.compact(self.c[i].union(&wik.sum(&self.c[k])), budget)?;
                for j in k + 1..n {
                    if !self.w[k][j].is_empty() {
                        self.w[i][j] =
                            self.compact(self.w[i][j].union(&wik.sum(&self.w[k][j])), budget)?;
                    }
                }
            }
        }
        let mut x: Vec<SemilinearSet> = (0..n).map(|_| SemilinearSet::empty(self.dim)).collect();
        for k in (0..n).rev() {
            let mut acc = self.c[k].clone();
            for j in k + 1..n {
                if !self.w[k][j].is_empty() && !x[j].is_empty() {
                    acc = acc.union(&self.w[k][j].sum(&x[j]));
                }
            }
            x[k] = self.compact(acc, budget)?;
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_loop() {
        // X = {2} ⊗ X ⊕ {1}: least solution 1 + 2N.
        let b = Budget::default();
        let mut sys = LinearSystem::new(1, 1);
        sys.add_coeff(0, 0, &SemilinearSet::point(vec![2]));
        sys.add_const(0, &SemilinearSet::point(vec![1]));
        let x = sys.solve(&b).unwrap();
        assert_eq!(x[0], SemilinearSet::linear(vec![1], vec![vec![2]]));
    }

    #[test]
    fn two_variable_cycle() {
        // X = {(1,0)} Y ⊕ {(0,0)}; Y = {(0,1)} X.
        // X = ((1,1))* , Y = (0,1) + ((1,1))*.
        let b = Budget::default();
        let mut sys = LinearSystem::new(2, 2);
        sys.add_coeff(0, 1, &SemilinearSet::point(vec![1, 0]));
        sys.add_const(0, &SemilinearSet::zero_vector(2));
        sys.add_coeff(1, 0, &SemilinearSet::point(vec![0, 1]));
        let x = sys.solve(&b).unwrap();
        for k in 0..6u64 {
            assert!(x[0].member(&[k, k]));
            assert!(x[1].member(&[k, k + 1]));
        }
        assert!(!x[0].member(&[2, 1]));
        assert!(!x[1].member(&[1, 1]));
    }

    #[test]
    fn unreachable_variable_stays_empty() {
        let b = Budget::default();
        let mut sys = LinearSystem::new(1, 2);
        sys.add_const(0, &SemilinearSet::point(vec![3]));
        sys.add_coeff(1, 1, &SemilinearSet::point(vec![1]));
        let x = sys.solve(&b).unwrap();
        assert!(x[0].member(&[3]));
        assert!(x[1].is_empty());
    }
}
