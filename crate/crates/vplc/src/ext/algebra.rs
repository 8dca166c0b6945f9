//! Finite Ext-algebras.
//!
//! An Ext-algebra is a pair (R, O): a finite monoid R together with a monoid
//! O of maps R -> R (under composition) that contains the identity and all
//! left/right translations λ_r, ρ_r. A language is handed to the algebra by a
//! morphism pair: φ maps internal letters into R, ψ maps the call/return
//! behaviours ext_{a,b} into O; acceptance is a subset of R.
//!
//! [`ExtKernel`] carries exactly the data needed to *recognize* (R, φ, ψ as
//! value tables, accepting set) — the auxiliary recognizers built later never
//! materialize their O component, which is what keeps them affordable.
//! [`ExtAlgebra`] adds the explicit O monoid for the structural analyses.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::vpa::alphabet::{Sym, SymClass, VpAlphabet};

pub type RElem = u32;
pub type OElem = u32;

/// Name interner used by every closure construction in this crate.
#[derive(Debug, Clone)]
pub struct Interner<T> {
    items: Vec<T>,
    index: HashMap<T, u32>,
}

impl<T: Clone + Eq + Hash> Interner<T> {
    pub fn new() -> Self {
        Interner {
            items: Vec::new(),
            index: HashMap::new(),
        }
    }

    /// Returns (id, freshly-inserted).
    pub fn intern(&mut self, t: T) -> (u32, bool) {
        if let Some(&id) = self.index.get(&t) {
            return (id, false);
        }
        let id = self.items.len() as u32;
        self.index.insert(t.clone(), id);
        self.items.push(t);
        (id, true)
    }

    pub fn get(&self, t: &T) -> Option<u32> {
        self.index.get(t).copied()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn item(&self, id: u32) -> &T {
        &self.items[id as usize]
    }

    pub fn items(&self) -> &[T] {
        &self.items
    }
}

impl<T: Clone + Eq + Hash> Default for Interner<T> {
    fn default() -> Self {
        Self::new()
    }
}

/// Recognition kernel: R with its morphism tables but no O monoid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtKernel {
    pub alphabet: VpAlphabet,
    r_size: usize,
    one: RElem,
    /// mult[x * r_size + y] = x·y
    mult: Vec<RElem>,
    r_names: Vec<String>,
    phi_int: BTreeMap<Sym, RElem>,
    /// ψ(ext_{a,b}) as a value table over R.
    psi_maps: BTreeMap<(Sym, Sym), Vec<RElem>>,
    accepting: BTreeSet<RElem>,
}

impl ExtKernel {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        alphabet: VpAlphabet,
        r_names: Vec<String>,
        one: RElem,
        mult: Vec<RElem>,
        phi_int: BTreeMap<Sym, RElem>,
        psi_maps: BTreeMap<(Sym, Sym), Vec<RElem>>,
        accepting: BTreeSet<RElem>,
    ) -> Result<Self> {
        let k = ExtKernel {
            alphabet,
            r_size: r_names.len(),
            one,
            mult,
            r_names,
            phi_int,
            psi_maps,
            accepting,
        };
        k.validate()?;
        Ok(k)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.r_size;
        if n == 0 {
            return Err(Error::invalid("R must be non-empty"));
        }
        if self.r_names.len() != n || self.mult.len() != n * n {
            return Err(Error::invalid("R tables have inconsistent sizes"));
        }
        if self.one as usize >= n {
            return Err(Error::invalid("identity out of range"));
        }
        for &v in &self.mult {
            if v as usize >= n {
                return Err(Error::invalid("multiplication table entry out of range"));
            }
        }
        for x in 0..n as RElem {
            if self.mul(self.one, x) != x || self.mul(x, self.one) != x {
                return Err(Error::invalid(format!(
                    "identity law fails at {}",
                    self.r_name(x)
                )));
            }
        }
        for x in 0..n as RElem {
            for y in 0..n as RElem {
                for z in 0..n as RElem {
                    if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)) {
                        return Err(Error::invalid(format!(
                            "associativity fails at ({}, {}, {})",
                            self.r_name(x),
                            self.r_name(y),
                            self.r_name(z)
                        )));
                    }
                }
            }
        }
        for c in self.alphabet.internals() {
            if !self.phi_int.contains_key(&c) {
                return Err(Error::invalid(format!(
                    "φ missing internal letter {}",
                    self.alphabet.name(c)
                )));
            }
        }
        for (&c, &r) in &self.phi_int {
            if self.alphabet.class(c) != SymClass::Int {
                return Err(Error::invalid(format!(
                    "φ defined on non-internal {}",
                    self.alphabet.name(c)
                )));
            }
            if r as usize >= n {
                return Err(Error::invalid("φ value out of range"));
            }
        }
        for a in self.alphabet.calls() {
            for b in self.alphabet.returns() {
                match self.psi_maps.get(&(a, b)) {
                    None => {
                        return Err(Error::invalid(format!(
                            "ψ missing pair ({}, {})",
                            self.alphabet.name(a),
                            self.alphabet.name(b)
                        )))
                    }
                    Some(v) => {
                        if v.len() != n || v.iter().any(|&x| x as usize >= n) {
                            return Err(Error::invalid(format!(
                                "ψ({}, {}) table malformed",
                                self.alphabet.name(a),
                                self.alphabet.name(b)
                            )));
                        }
                    }
                }
            }
        }
        for (&(a, b), _) in &self.psi_maps {
            if self.alphabet.class(a) != SymClass::Call
                || self.alphabet.class(b) != SymClass::Ret
            {
                return Err(Error::invalid("ψ key is not a call/return pair"));
            }
        }
        for &r in &self.accepting {
            if r as usize >= n {
                return Err(Error::invalid("accepting element out of range"));
            }
        }
        Ok(())
    }

    pub fn r_size(&self) -> usize {
        self.r_size
    }

    pub fn one(&self) -> RElem {
        self.one
    }

    pub fn mul(&self, x: RElem, y: RElem) -> RElem {
        self.mult[x as usize * self.r_size + y as usize]
    }

    pub fn r_name(&self, x: RElem) -> &str {
        &self.r_names[x as usize]
    }

    pub fn r_names(&self) -> &[String] {
        &self.r_names
    }

    pub fn r_by_name(&self, name: &str) -> Option<RElem> {
        self.r_names.iter().position(|n| n == name).map(|i| i as RElem)
    }

    pub fn phi(&self, c: Sym) -> Result<RElem> {
        self.phi_int.get(&c).copied().ok_or_else(|| {
            Error::invalid(format!("φ undefined on {}", self.alphabet.name(c)))
        })
    }

    pub fn phi_table(&self) -> &BTreeMap<Sym, RElem> {
        &self.phi_int
    }

    pub fn psi_table(&self) -> &BTreeMap<(Sym, Sym), Vec<RElem>> {
        &self.psi_maps
    }

    pub fn psi_vec(&self, a: Sym, b: Sym) -> Result<&[RElem]> {
        self.psi_maps
            .get(&(a, b))
            .map(|v| v.as_slice())
            .ok_or_else(|| {
                Error::invalid(format!(
                    "ψ undefined on ({}, {})",
                    self.alphabet.name(a),
                    self.alphabet.name(b)
                ))
            })
    }

    pub fn psi_apply(&self, a: Sym, b: Sym, r: RElem) -> Result<RElem> {
        Ok(self.psi_vec(a, b)?[r as usize])
    }

    pub fn accepting(&self) -> &BTreeSet<RElem> {
        &self.accepting
    }

    pub fn is_accepting(&self, r: RElem) -> bool {
        self.accepting.contains(&r)
    }

    /// Same kernel with a different accepting subset.
    pub fn with_accepting(&self, accepting: BTreeSet<RElem>) -> Result<ExtKernel> {
        if accepting.iter().any(|&x| x as usize >= self.r_size) {
            return Err(Error::invalid("accepting element out of range"));
        }
        let mut k = self.clone();
        k.accepting = accepting;
        Ok(k)
    }

    /// Quotient by the coarsest congruence that separates accepting from
    /// non-accepting values and respects both translations and every ψ map.
    /// The result recognizes the same language over a (often much) smaller
    /// carrier; class names are taken from the smallest member.
    pub fn quotient(&self) -> Result<ExtKernel> {
        let n = self.r_size;
        let mut class: Vec<usize> = (0..n)
            .map(|x| usize::from(self.accepting.contains(&(x as RElem))))
            .collect();
        let mut count = 2.min(n);
        loop {
            let mut sigs: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
            let mut next = vec![0usize; n];
            for x in 0..n {
                let mut sig = Vec::with_capacity(1 + 2 * n + self.psi_maps.len());
                sig.push(class[x]);
                for z in 0..n {
                    sig.push(class[self.mult[z * n + x] as usize]);
                    sig.push(class[self.mult[x * n + z] as usize]);
                }
                for m in self.psi_maps.values() {
                    sig.push(class[m[x] as usize]);
                }
                let k = sigs.len();
                next[x] = *sigs.entry(sig).or_insert(k);
            }
            let next_count = sigs.len();
            class = next;
            if next_count == count {
                break;
            }
            count = next_count;
        }

        // Smallest member represents its class; renumber classes by it so
        // the quotient is deterministic.
        let mut rep: Vec<Option<usize>> = vec![None; count];
        for x in 0..n {
            if rep[class[x]].is_none() {
                rep[class[x]] = Some(x);
            }
        }
        let mut order: Vec<usize> = (0..count).collect();
        order.sort_by_key(|&c| rep[c].unwrap());
        let mut renum = vec![0usize; count];
        for (i, &c) in order.iter().enumerate() {
            renum[c] = i;
        }
        let class: Vec<usize> = class.iter().map(|&c| renum[c]).collect();
        let reps: Vec<usize> = {
            let mut v = vec![0usize; count];
            for x in (0..n).rev() {
                v[class[x]] = x;
            }
            v
        };

        let r_names: Vec<String> = reps.iter().map(|&x| self.r_names[x].clone()).collect();
        let mut mult = vec![0 as RElem; count * count];
        for (i, &x) in reps.iter().enumerate() {
            for (j, &y) in reps.iter().enumerate() {
                mult[i * count + j] = class[self.mult[x * n + y] as usize] as RElem;
            }
        }
        let phi_int: BTreeMap<Sym, RElem> = self
            .phi_int
            .iter()
            .map(|(&c, &r)| (c, class[r as usize] as RElem))
            .collect();
        let psi_maps: BTreeMap<(Sym, Sym), Vec<RElem>> = self
            .psi_maps
            .iter()
            .map(|(&ab, m)| {
                (ab, reps.iter().map(|&x| class[m[x] as usize] as RElem).collect())
            })
            .collect();
        let accepting: BTreeSet<RElem> = self
            .accepting
            .iter()
            .map(|&x| class[x as usize] as RElem)
            .collect();
        ExtKernel::new(
            self.alphabet.clone(),
            r_names,
            class[self.one as usize] as RElem,
            mult,
            phi_int,
            psi_maps,
            accepting,
        )
    }

    /// Free evaluation of a well-matched word: internals multiply on the
    /// right, a matched pair a…b applies ψ(ext_{a,b}) to the inner value and
    /// multiplies the result onto the enclosing segment.
    pub fn eval_phi(&self, w: &[Sym]) -> Result<RElem> {
        let mut acc = self.one;
        let mut stack: Vec<(RElem, Sym)> = Vec::new();
        for &s in w {
            match self.alphabet.class(s) {
                SymClass::Int => acc = self.mul(acc, self.phi(s)?),
                SymClass::Call => {
                    stack.push((acc, s));
                    acc = self.one;
                }
                SymClass::Ret => match stack.pop() {
                    Some((outer, a)) => {
                        let lifted = self.psi_apply(a, s, acc)?;
                        acc = self.mul(outer, lifted);
                    }
                    None => {
                        return Err(Error::invalid(
                            "eval_phi: word dips below height zero",
                        ))
                    }
                },
            }
        }
        if !stack.is_empty() {
            return Err(Error::invalid("eval_phi: word has pending calls"));
        }
        Ok(acc)
    }

    /// Language membership under this recognizer.
    pub fn member(&self, w: &[Sym]) -> Result<bool> {
        Ok(self.is_accepting(self.eval_phi(w)?))
    }
}

/// Full Ext-algebra: a kernel plus its explicit O monoid.
#[derive(Debug, Clone)]
pub struct ExtAlgebra {
    kernel: ExtKernel,
    /// Value tables of the O elements; index 0.. are OElem ids.
    o_maps: Vec<Vec<RElem>>,
    o_index: HashMap<Vec<RElem>, OElem>,
    o_one: OElem,
    lambda: Vec<OElem>,
    rho: Vec<OElem>,
    psi_o: BTreeMap<(Sym, Sym), OElem>,
}

impl ExtAlgebra {
    /// Builds and fully validates: O must be duplicate-free, contain the
    /// identity, every translation, every ψ table, and be closed under
    /// composition.
    pub fn new(kernel: ExtKernel, o_maps: Vec<Vec<RElem>>) -> Result<Self> {
        kernel.validate()?;
        let n = kernel.r_size();
        let mut o_index: HashMap<Vec<RElem>, OElem> = HashMap::new();
        for (i, m) in o_maps.iter().enumerate() {
            if m.len() != n || m.iter().any(|&x| x as usize >= n) {
                return Err(Error::invalid(format!("O element {i} malformed")));
            }
            if o_index.insert(m.clone(), i as OElem).is_some() {
                return Err(Error::invalid(format!("O element {i} duplicated")));
            }
        }
        let id_map: Vec<RElem> = (0..n as RElem).collect();
        let o_one = *o_index
            .get(&id_map)
            .ok_or_else(|| Error::invalid("O misses the identity map"))?;
        let mut lambda = Vec::with_capacity(n);
        let mut rho = Vec::with_capacity(n);
        for r in 0..n as RElem {
            let lam: Vec<RElem> = (0..n as RElem).map(|x| kernel.mul(r, x)).collect();
            let rh: Vec<RElem> = (0..n as RElem).map(|x| kernel.mul(x, r)).collect();
            lambda.push(*o_index.get(&lam).ok_or_else(|| {
                Error::invalid(format!("O misses λ_{}", kernel.r_name(r)))
            })?);
            rho.push(*o_index.get(&rh).ok_or_else(|| {
                Error::invalid(format!("O misses ρ_{}", kernel.r_name(r)))
            })?);
        }
        let mut psi_o = BTreeMap::new();
        for (&(a, b), v) in kernel.psi_table() {
            let id = *o_index.get(v).ok_or_else(|| {
                Error::invalid(format!(
                    "O misses ψ({}, {})",
                    kernel.alphabet.name(a),
                    kernel.alphabet.name(b)
                ))
            })?;
            psi_o.insert((a, b), id);
        }
        // Composition closure.
        for x in o_maps.iter() {
            for y in o_maps.iter() {
                let comp: Vec<RElem> = (0..n).map(|i| x[y[i] as usize]).collect();
                if !o_index.contains_key(&comp) {
                    return Err(Error::invalid("O not closed under composition"));
                }
            }
        }
        Ok(ExtAlgebra {
            kernel,
            o_maps,
            o_index,
            o_one,
            lambda,
            rho,
            psi_o,
        })
    }

    pub fn kernel(&self) -> &ExtKernel {
        &self.kernel
    }

    pub fn alphabet(&self) -> &VpAlphabet {
        &self.kernel.alphabet
    }

    pub fn r_size(&self) -> usize {
        self.kernel.r_size()
    }

    pub fn o_size(&self) -> usize {
        self.o_maps.len()
    }

    pub fn o_one(&self) -> OElem {
        self.o_one
    }

    pub fn o_map(&self, o: OElem) -> &[RElem] {
        &self.o_maps[o as usize]
    }

    pub fn apply(&self, o: OElem, r: RElem) -> RElem {
        self.o_maps[o as usize][r as usize]
    }

    pub fn compose(&self, x: OElem, y: OElem) -> OElem {
        let n = self.kernel.r_size();
        let (mx, my) = (&self.o_maps[x as usize], &self.o_maps[y as usize]);
        let comp: Vec<RElem> = (0..n).map(|i| mx[my[i] as usize]).collect();
        *self
            .o_index
            .get(&comp)
            .expect("validated: O closed under composition")
    }

    pub fn o_by_map(&self, m: &[RElem]) -> Option<OElem> {
        self.o_index.get(m).copied()
    }

    pub fn lambda(&self, r: RElem) -> OElem {
        self.lambda[r as usize]
    }

    pub fn rho(&self, r: RElem) -> OElem {
        self.rho[r as usize]
    }

    pub fn psi(&self, a: Sym, b: Sym) -> Result<OElem> {
        self.psi_o.get(&(a, b)).copied().ok_or_else(|| {
            Error::invalid(format!(
                "ψ undefined on ({}, {})",
                self.alphabet().name(a),
                self.alphabet().name(b)
            ))
        })
    }

    pub fn is_idempotent(&self, e: OElem) -> bool {
        self.compose(e, e) == e
    }

    /// Display name for an O element: a translation or ψ name when it is
    /// one, positional otherwise.
    pub fn o_name(&self, o: OElem) -> String {
        if o == self.o_one {
            return "id".to_string();
        }
        for (r, &l) in self.lambda.iter().enumerate() {
            if l == o {
                return format!("λ_{}", self.kernel.r_name(r as RElem));
            }
        }
        for (r, &x) in self.rho.iter().enumerate() {
            if x == o {
                return format!("ρ_{}", self.kernel.r_name(r as RElem));
            }
        }
        for (&(a, b), &p) in &self.psi_o {
            if p == o {
                return format!(
                    "ψ({},{})",
                    self.alphabet().name(a),
                    self.alphabet().name(b)
                );
            }
        }
        format!("o{o}")
    }
}
