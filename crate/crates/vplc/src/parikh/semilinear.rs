//! Semilinear sets of ℕ^d with exact union / Minkowski sum / Kleene star.
//!
//! Semilinear sets with these operations form a commutative idempotent
//! Kleene algebra, which is what makes the grammar fixpoints downstream
//! exact. Dimension is dynamic; dimension 1 additionally has a canonical
//! ultimately-periodic form supporting decidable inclusion, used to certify
//! Newton iterations by Park induction.

use std::collections::{BTreeMap, BTreeSet};

use crate::budget::Budget;
use crate::error::{Error, Result};

pub type Vector = Vec<u64>;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LinSet {
    pub base: Vector,
    /// Nonzero, sorted, deduplicated.
    pub periods: Vec<Vector>,
}

impl LinSet {
    pub fn new(base: Vector, mut periods: Vec<Vector>) -> LinSet {
        periods.retain(|p| p.iter().any(|&x| x > 0));
        periods.sort();
        periods.dedup();
        // Drop periods that are nonnegative combinations of the others so
        // equal sets get equal period lists; visit big ones first so the
        // generators survive.
        if periods.len() >= 2 {
            let mut order: Vec<usize> = (0..periods.len()).collect();
            order.sort_by_key(|&i| {
                std::cmp::Reverse((periods[i].iter().sum::<u64>(), periods[i].clone()))
            });
            let mut alive = vec![true; periods.len()];
            for &i in &order {
                alive[i] = false;
                let rest: Vec<Vector> = periods
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| alive[j])
                    .map(|(_, p)| p.clone())
                    .collect();
                let probe = LinSet {
                    base: vec![0; periods[i].len()],
                    periods: rest,
                };
                if !probe.contains(&periods[i]) {
                    alive[i] = true;
                }
            }
            let mut j = 0;
            periods.retain(|_| {
                j += 1;
                alive[j - 1]
            });
        }
        LinSet { base, periods }
    }

    pub fn point(base: Vector) -> LinSet {
        LinSet {
            base,
            periods: Vec::new(),
        }
    }

    fn contains(&self, v: &[u64]) -> bool {
        fn rec(rem: &[i128], periods: &[Vector]) -> bool {
            if rem.iter().all(|&x| x == 0) {
                return true;
            }
            if rem.iter().any(|&x| x < 0) || periods.is_empty() {
                return false;
            }
            let p = &periods[0];
            // Bound the coefficient of p by its nonzero coordinates.
            let mut hi = i128::MAX;
            for (j, &pj) in p.iter().enumerate() {
                if pj > 0 {
                    hi = hi.min(rem[j] / pj as i128);
                }
            }
            for n in 0..=hi {
                let next: Vec<i128> = rem
                    .iter()
                    .zip(p.iter())
                    .map(|(&r, &pj)| r - n * pj as i128)
                    .collect();
                if rec(&next, &periods[1..]) {
                    return true;
                }
            }
            false
        }
        if v.len() != self.base.len() {
            return false;
        }
        let rem: Vec<i128> = v
            .iter()
            .zip(self.base.iter())
            .map(|(&x, &b)| x as i128 - b as i128)
            .collect();
        if rem.iter().any(|&x| x < 0) {
            return false;
        }
        rec(&rem, &self.periods)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemilinearSet {
    pub dim: usize,
    pub comps: Vec<LinSet>,
}

impl SemilinearSet {
    pub fn empty(dim: usize) -> Self {
        SemilinearSet {
            dim,
            comps: Vec::new(),
        }
    }

    /// {0}: the multiplicative unit.
    pub fn zero_vector(dim: usize) -> Self {
        SemilinearSet {
            dim,
            comps: vec![LinSet::point(vec![0; dim])],
        }
    }

    pub fn point(v: Vector) -> Self {
        SemilinearSet {
            dim: v.len(),
            comps: vec![LinSet::point(v)],
        }
    }

    pub fn linear(base: Vector, periods: Vec<Vector>) -> Self {
        let dim = base.len();
        SemilinearSet {
            dim,
            comps: vec![LinSet::new(base, periods)],
        }
    }

    pub fn from_comps(dim: usize, comps: Vec<LinSet>) -> Self {
        let mut s = SemilinearSet { dim, comps };
        s.normalize();
        s
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn member(&self, v: &[u64]) -> bool {
        v.len() == self.dim && self.comps.iter().any(|c| c.contains(v))
    }

    /// Cheap syntactic normalization: sort, dedup, drop components whose
    /// base and periods are covered syntactically by another component.
    /// The general subsumption pass is quadratic, so huge unions first go
    /// through a grouped pass: among components with identical period sets
    /// subsumption is plain base containment, and visiting bases by
    /// ascending coordinate sum makes a single pass complete. Newton
    /// iterates produce exactly such unions, shifted copies of few period
    /// shapes, so this keeps them from exploding.
    pub fn normalize(&mut self) {
        for c in &self.comps {
            debug_assert_eq!(c.base.len(), self.dim);
        }
        self.comps.sort();
        self.comps.dedup();
        if self.comps.len() > 512 {
            let comps = std::mem::take(&mut self.comps);
            let mut groups: BTreeMap<Vec<Vector>, Vec<Vector>> = BTreeMap::new();
            for c in comps {
                groups.entry(c.periods).or_default().push(c.base);
            }
            for (periods, mut bases) in groups {
                bases.sort_by_key(|b| (b.iter().sum::<u64>(), b.clone()));
                let mut kept: Vec<LinSet> = Vec::new();
                'bases: for b in bases {
                    for k in &kept {
                        if k.contains(&b) {
                            continue 'bases;
                        }
                    }
                    kept.push(LinSet {
                        base: b,
                        periods: periods.clone(),
                    });
                }
                self.comps.append(&mut kept);
            }
            self.comps.sort();
        }
        if self.comps.len() > 512 {
            return;
        }
        let comps = std::mem::take(&mut self.comps);
        let mut kept: Vec<LinSet> = Vec::new();
        'outer: for c in comps {
            for k in &kept {
                if subsumes(k, &c) {
                    continue 'outer;
                }
            }
            kept.retain(|k| !subsumes(&c, k));
            kept.push(c);
        }
        kept.sort();
        self.comps = kept;
    }

    pub fn union(&self, other: &SemilinearSet) -> SemilinearSet {
        assert_eq!(self.dim, other.dim);
        let mut comps = self.comps.clone();
        comps.extend(other.comps.iter().cloned());
        SemilinearSet::from_comps(self.dim, comps)
    }

    /// Minkowski sum.
    pub fn sum(&self, other: &SemilinearSet) -> SemilinearSet {
        assert_eq!(self.dim, other.dim);
        let mut comps = Vec::with_capacity(self.comps.len() * other.comps.len());
        for a in &self.comps {
            for b in &other.comps {
                let base = add(&a.base, &b.base);
                let mut periods = a.periods.clone();
                periods.extend(b.periods.iter().cloned());
                comps.push(LinSet::new(base, periods));
            }
        }
        SemilinearSet::from_comps(self.dim, comps)
    }

    /// Kleene star: sums of any multiset of elements. Uses
    /// (A ∪ B)* = A* + B* and (b; P)* = {0} ∪ (b; P ∪ {b}).
    pub fn star(&self) -> SemilinearSet {
        let mut acc = SemilinearSet::zero_vector(self.dim);
        for c in &self.comps {
            let mut periods = c.periods.clone();
            periods.push(c.base.clone());
            let single = SemilinearSet::from_comps(
                self.dim,
                vec![
                    LinSet::point(vec![0; self.dim]),
                    LinSet::new(c.base.clone(), periods),
                ],
            );
            acc = acc.sum(&single);
        }
        acc
    }

    /// All members with every coordinate ≤ bound (for oracle comparisons).
    pub fn enumerate_upto(&self, bound: u64) -> BTreeSet<Vector> {
        let mut out = BTreeSet::new();
        for c in &self.comps {
            if c.base.iter().any(|&x| x > bound) {
                continue;
            }
            let mut frontier = vec![c.base.clone()];
            let mut seen: BTreeSet<Vector> = frontier.iter().cloned().collect();
            while let Some(v) = frontier.pop() {
                out.insert(v.clone());
                for p in &c.periods {
                    let w = add(&v, p);
                    if w.iter().all(|&x| x <= bound) && seen.insert(w.clone()) {
                        frontier.push(w);
                    }
                }
            }
        }
        out
    }

    /// Embeds a 1-dimensional set onto the given axis of ℕ^dim.
    pub fn embed_axis(&self, dim: usize, axis: usize) -> SemilinearSet {
        assert_eq!(self.dim, 1);
        let lift = |v: &Vector| {
            let mut w = vec![0; dim];
            w[axis] = v[0];
            w
        };
        SemilinearSet::from_comps(
            dim,
            self.comps
                .iter()
                .map(|c| LinSet::new(lift(&c.base), c.periods.iter().map(&lift).collect()))
                .collect(),
        )
    }

    /// Projects onto the given axes (in order).
    pub fn project(&self, axes: &[usize]) -> SemilinearSet {
        let take = |v: &Vector| -> Vector { axes.iter().map(|&i| v[i]).collect() };
        SemilinearSet::from_comps(
            axes.len(),
            self.comps
                .iter()
                .map(|c| LinSet::new(take(&c.base), c.periods.iter().map(&take).collect()))
                .collect(),
        )
    }

    /// Are all vectors of the set (bases and periods alike) on one ray from
    /// the origin? Zero vectors are compatible with everything.
    pub fn all_collinear(&self) -> bool {
        let mut dir: Option<Vector> = None;
        let mut vecs: Vec<&Vector> = Vec::new();
        for c in &self.comps {
            vecs.push(&c.base);
            vecs.extend(c.periods.iter());
        }
        for v in vecs {
            if v.iter().all(|&x| x == 0) {
                continue;
            }
            match &dir {
                None => dir = Some(v.clone()),
                Some(d) => {
                    if !collinear(d, v) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Some member whose two coordinates differ (dimension-2 sets).
    pub fn unequal_coordinate_member(&self) -> Option<Vector> {
        assert_eq!(self.dim, 2);
        for c in &self.comps {
            if c.base[0] != c.base[1] {
                return Some(c.base.clone());
            }
            if let Some(p) = c.periods.iter().find(|p| p[0] != p[1]) {
                return Some(add(&c.base, p));
            }
        }
        None
    }
}

pub fn add(a: &[u64], b: &[u64]) -> Vector {
    a.iter().zip(b.iter()).map(|(&x, &y)| x + y).collect()
}

pub fn collinear(a: &[u64], b: &[u64]) -> bool {
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let lhs = a[i] as u128 * b[j] as u128;
            let rhs = a[j] as u128 * b[i] as u128;
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// Syntactic sufficient condition for sub ⊆ sup: sub's base is reachable in
/// sup and every period of sub is among sup's periods.
fn subsumes(sup: &LinSet, sub: &LinSet) -> bool {
    let cone = LinSet {
        base: vec![0; sup.base.len()],
        periods: sup.periods.clone(),
    };
    sub.periods
        .iter()
        .all(|p| sup.periods.contains(p) || cone.contains(p))
        && sup.contains(&sub.base)
}

/// Canonical ultimately periodic form of a 1-dimensional semilinear set:
/// explicit members below t, then p-periodic membership given by the window
/// bits[t..t+p]. Inclusion and equality are decidable by aligning forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpForm {
    pub t: u64,
    pub p: u64,
    /// Membership for 0..t+p.
    pub bits: Vec<bool>,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        a.max(b)
    } else {
        a / gcd(a, b) * b
    }
}

impl UpForm {
    pub fn member(&self, v: u64) -> bool {
        let idx = if v < self.t + self.p {
            v
        } else {
            self.t + (v - self.t) % self.p
        };
        self.bits[idx as usize]
    }

    pub fn includes(&self, other: &UpForm) -> bool {
        let t = self.t.max(other.t);
        let p = lcm(self.p, other.p);
        for v in 0..t + p {
            if other.member(v) && !self.member(v) {
                return false;
            }
        }
        true
    }

    pub fn same_set(&self, other: &UpForm) -> bool {
        self.includes(other) && other.includes(self)
    }
}

/// Exact ultimately periodic form of a 1-dimensional semilinear set.
///
/// Per component (b; P) with g = gcd(P) and M = max(P), the component is
/// g-periodic above b + 2(M/g)²·g + g (Frobenius-type bound for numerical
/// semigroups; safe since more generators only lower the conductor).
pub fn up_form(s: &SemilinearSet, budget: &Budget) -> Result<UpForm> {
    assert_eq!(s.dim, 1);
    let mut t = 1u64; // empty set: all-false window of period 1
    let mut p = 1u64;
    for c in &s.comps {
        let b = c.base[0];
        if c.periods.is_empty() {
            t = t.max(b + 1);
            continue;
        }
        let g = c.periods.iter().fold(0, |acc, q| gcd(acc, q[0]));
        let m = c.periods.iter().map(|q| q[0]).max().unwrap();
        let k = m / g;
        let slack = 2 * k * k * g + g;
        t = t.max(b + slack);
        p = lcm(p, g);
    }
    let len = t
        .checked_add(p)
        .ok_or_else(|| Error::internal("up_form: window overflow"))?;
    budget.check_enumeration("up_form", len as usize)?;
    let mut bits = vec![false; len as usize];
    for c in &s.comps {
        let b = c.base[0] as usize;
        if b >= bits.len() {
            // Base beyond the window can only happen for a periodic
            // component whose slack we already accounted for; being beyond
            // t is impossible by construction.
            return Err(Error::internal("up_form: base beyond window"));
        }
        // Coin DP from the base.
        let mut reach = vec![false; bits.len() - b];
        reach[0] = true;
        for v in 0..reach.len() {
            if !reach[v] {
                continue;
            }
            for q in &c.periods {
                let w = v + q[0] as usize;
                if w < reach.len() {
                    reach[w] = true;
                }
            }
        }
        for (v, &r) in reach.iter().enumerate() {
            if r {
                bits[b + v] = true;
            }
        }
    }
    Ok(UpForm { t, p, bits })
}

/// Reduces a form to its minimal period (smallest divisor of p that the
/// tail window respects) and minimal threshold, making it truly canonical.
pub fn minimize_up_form(f: &UpForm) -> UpForm {
    let p = (1..=f.p)
        .find(|&d| {
            f.p % d == 0 && (0..f.p).all(|r| f.bits[(f.t + r) as usize] == f.member(f.t + r + d))
        })
        .unwrap_or(f.p);
    let mut t = f.t;
    while t > 0 && f.member(t - 1) == f.member(t - 1 + p) {
        t -= 1;
    }
    let bits = (0..t + p).map(|v| f.member(v)).collect();
    UpForm { t, p, bits }
}

/// Rebuilds a compact semilinear set from a canonical form: one arithmetic
/// progression per eventually-live residue class plus isolated points.
pub fn from_up_form(raw: &UpForm) -> SemilinearSet {
    let f = minimize_up_form(raw);
    let mut comps: Vec<LinSet> = Vec::new();
    let mut covered = vec![false; f.bits.len()];
    for r in 0..f.p {
        if !f.bits[(f.t + r) as usize] {
            continue;
        }
        // Walk the progression downward while still present.
        let mut start = f.t + r;
        while start >= f.p && f.member(start - f.p) {
            start -= f.p;
        }
        comps.push(LinSet::new(vec![start], vec![vec![f.p]]));
        let mut v = start;
        while v < f.bits.len() as u64 {
            covered[v as usize] = true;
            v += f.p;
        }
    }
    for v in 0..f.t {
        if f.bits[v as usize] && !covered[v as usize] {
            comps.push(LinSet::point(vec![v]));
        }
    }
    SemilinearSet::from_comps(1, comps)
}

/// Canonicalizes a 1-dimensional set to its compact form.
pub fn canon1(s: &SemilinearSet, budget: &Budget) -> Result<SemilinearSet> {
    Ok(from_up_form(&up_form(s, budget)?))
}

/// Decidable inclusion in dimension 1.
pub fn includes1(sup: &SemilinearSet, sub: &SemilinearSet, budget: &Budget) -> Result<bool> {
    Ok(up_form(sup, budget)?.includes(&up_form(sub, budget)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl1(comps: &[(u64, &[u64])]) -> SemilinearSet {
        SemilinearSet::from_comps(
            1,
            comps
                .iter()
                .map(|(b, ps)| LinSet::new(vec![*b], ps.iter().map(|&p| vec![p]).collect()))
                .collect(),
        )
    }

    #[test]
    fn member_basic() {
        let s = SemilinearSet::linear(vec![1, 2], vec![vec![2, 0], vec![0, 3]]);
        assert!(s.member(&[1, 2]));
        assert!(s.member(&[3, 2]));
        assert!(s.member(&[5, 8]));
        assert!(!s.member(&[2, 2]));
        assert!(!s.member(&[1, 3]));
    }

    #[test]
    fn star_of_evens_is_evens() {
        let b = Budget::default();
        let s = sl1(&[(2, &[])]);
        let st = s.star();
        let canon = canon1(&st, &b).unwrap();
        assert_eq!(canon, sl1(&[(0, &[2])]));
    }

    #[test]
    fn star_of_two_coprime() {
        // {2,3}* = {0,2,3,4,...}
        let b = Budget::default();
        let s = sl1(&[(2, &[]), (3, &[])]);
        let c = canon1(&s.star(), &b).unwrap();
        for v in 0..30u64 {
            assert_eq!(c.member(&[v]), v != 1, "at {v}");
        }
    }

    #[test]
    fn canonical_merges_overlapping_progressions() {
        let b = Budget::default();
        // 3+3N ∪ 6+6N ∪ {1} canonicalizes to one AP and a point.
        let s = sl1(&[(3, &[3]), (6, &[6]), (1, &[])]);
        let c = canon1(&s, &b).unwrap();
        assert_eq!(c, sl1(&[(1, &[]), (3, &[3])]));
    }

    #[test]
    fn inclusion1() {
        let b = Budget::default();
        let evens = sl1(&[(0, &[2])]);
        let all = sl1(&[(0, &[1])]);
        let mults6 = sl1(&[(0, &[6])]);
        assert!(includes1(&all, &evens, &b).unwrap());
        assert!(!includes1(&evens, &all, &b).unwrap());
        assert!(includes1(&evens, &mults6, &b).unwrap());
        assert!(!includes1(&mults6, &evens, &b).unwrap());
    }

    #[test]
    fn numerical_semigroup_frobenius() {
        // ⟨3,5⟩ misses exactly 1,2,4,7 beyond 0.
        let b = Budget::default();
        let s = SemilinearSet::linear(vec![0], vec![vec![3], vec![5]]);
        let c = canon1(&s, &b).unwrap();
        let missing: Vec<u64> = (0..20).filter(|&v| !c.member(&[v])).collect();
        assert_eq!(missing, vec![1, 2, 4, 7]);
    }

    #[test]
    fn sum_and_union_dim2() {
        let a = SemilinearSet::point(vec![1, 0]);
        let bb = SemilinearSet::linear(vec![0, 1], vec![vec![1, 1]]);
        let s = a.sum(&bb);
        assert!(s.member(&[1, 1]));
        assert!(s.member(&[3, 3]));
        assert!(!s.member(&[0, 1]));
        let u = a.union(&bb);
        assert!(u.member(&[1, 0]));
        assert!(u.member(&[2, 3]));
    }

    #[test]
    fn enumerate_matches_member() {
        let s = SemilinearSet::from_comps(
            2,
            vec![
                LinSet::new(vec![1, 2], vec![vec![2, 0], vec![0, 3]]),
                LinSet::new(vec![0, 0], vec![vec![1, 1]]),
            ],
        );
        let listed = s.enumerate_upto(9);
        for x in 0..=9u64 {
            for y in 0..=9u64 {
                assert_eq!(listed.contains(&vec![x, y]), s.member(&[x, y]));
            }
        }
    }

    #[test]
    fn collinearity_and_witnesses() {
        let ray = SemilinearSet::linear(vec![2, 4], vec![vec![1, 2], vec![3, 6]]);
        assert!(ray.all_collinear());
        assert!(ray.unequal_coordinate_member().is_some());
        let diag = SemilinearSet::linear(vec![3, 3], vec![vec![2, 2]]);
        assert!(diag.unequal_coordinate_member().is_none());
        let off = SemilinearSet::linear(vec![1, 1], vec![vec![2, 3]]);
        assert!(!off.all_collinear());
        assert_eq!(off.unequal_coordinate_member(), Some(vec![3, 4]));
    }

    #[test]
    fn embed_and_project() {
        let s = sl1(&[(2, &[3])]);
        let e = s.embed_axis(3, 1);
        assert!(e.member(&[0, 5, 0]));
        assert!(!e.member(&[1, 5, 0]));
        let p = e.project(&[1]);
        assert!(p.member(&[5]));
        assert!(!p.member(&[4]));
    }
}
