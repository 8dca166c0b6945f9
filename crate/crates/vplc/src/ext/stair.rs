//! Stair factorization of contexts and the induced ψ evaluation.
//!
//! Every context (u, v) factors uniquely as a stair of height h = Δ(u) + 1:
//! well-matched pairs (x_1, y_1) … (x_h, y_h) interleaved with matched
//! call/return separators (a_1, b_1) … (a_{h-1}, b_{h-1}), read as
//!
//!   u = x_1 a_1 x_2 a_2 … a_{h-1} x_h,   v = y_h b_{h-1} … b_1 y_1.
//!
//! The extension morphism evaluates along the stair:
//!   ψ̄(ext_{u,v}) = ⃝_{i=1}^{h-1} (λ_{φ̄(x_i)} ∘ ρ_{φ̄(y_i)} ∘ ψ(ext_{a_i,b_i}))
//!                  ∘ λ_{φ̄(x_h)} ∘ ρ_{φ̄(y_h)} ,
//! with the rightmost (innermost) factor applied first.

use super::algebra::{ExtKernel, RElem};
use crate::error::{Error, Result};
use crate::vpa::alphabet::{Sym, VpAlphabet, Word};
use crate::vpa::context::Context;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stair {
    /// (x_i, y_i), i = 1..=h.
    pub pairs: Vec<(Word, Word)>,
    /// (a_i, b_i), i = 1..h; one shorter than `pairs`.
    pub seps: Vec<(Sym, Sym)>,
}

impl Stair {
    pub fn height(&self) -> usize {
        self.pairs.len()
    }

    /// Reassembles the context; inverse of [`stair_factorize`].
    pub fn rebuild(&self) -> Context {
        let mut u = Vec::new();
        let mut v_rev = Vec::new();
        for (i, (x, y)) in self.pairs.iter().enumerate() {
            u.extend_from_slice(x);
            // v is built back-to-front: y_1 is v's tail.
            v_rev.extend(y.iter().rev().copied());
            if i < self.seps.len() {
                let (a, b) = self.seps[i];
                u.push(a);
                v_rev.push(b);
            }
        }
        v_rev.reverse();
        Context::new(u, v_rev)
    }
}

pub fn stair_factorize(a: &VpAlphabet, ctx: &Context) -> Result<Stair> {
    if !ctx.is_valid(a) {
        return Err(Error::invalid("stair_factorize: not a valid context"));
    }
    let mut pairs = Vec::new();
    let mut seps = Vec::new();
    let mut u = ctx.u.as_slice();
    let mut v = ctx.v.as_slice();
    loop {
        let px = a.max_well_matched_prefix(u);
        let sy = a.max_well_matched_suffix(v);
        let (x, u_rest) = u.split_at(px);
        let (v_rest, y) = v.split_at(v.len() - sy);
        pairs.push((x.to_vec(), y.to_vec()));
        if u_rest.is_empty() {
            if !v_rest.is_empty() {
                return Err(Error::internal(
                    "stair_factorize: sides exhausted unevenly",
                ));
            }
            break;
        }
        let a_i = u_rest[0];
        let b_i = *v_rest.last().ok_or_else(|| {
            Error::internal("stair_factorize: lower side exhausted early")
        })?;
        seps.push((a_i, b_i));
        u = &u_rest[1..];
        v = &v_rest[..v_rest.len() - 1];
    }
    debug_assert_eq!(pairs.len(), seps.len() + 1);
    debug_assert_eq!(pairs.len() as i64, a.delta_height(&ctx.u) + 1);
    Ok(Stair { pairs, seps })
}

/// ψ̄(ext_{u,v})(r), evaluated along the stair without materializing the map.
pub fn eval_psi_apply(k: &ExtKernel, ctx: &Context, r: RElem) -> Result<RElem> {
    let stair = stair_factorize(&k.alphabet, ctx)?;
    let h = stair.height();
    let (xh, yh) = &stair.pairs[h - 1];
    let mut val = k.mul(k.mul(k.eval_phi(xh)?, r), k.eval_phi(yh)?);
    for i in (0..h - 1).rev() {
        let (a, b) = stair.seps[i];
        let (x, y) = &stair.pairs[i];
        let lifted = k.psi_apply(a, b, val)?;
        val = k.mul(k.mul(k.eval_phi(x)?, lifted), k.eval_phi(y)?);
    }
    Ok(val)
}

/// Full value table of ψ̄(ext_{u,v}).
pub fn eval_psi_vec(k: &ExtKernel, ctx: &Context) -> Result<Vec<RElem>> {
    (0..k.r_size() as RElem)
        .map(|r| eval_psi_apply(k, ctx, r))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alphabet() -> VpAlphabet {
        VpAlphabet::new(&["a"], &["c"], &["b1", "b2"]).unwrap()
    }

    #[test]
    fn stair_of_aca() {
        let al = alphabet();
        let ctx = Context::new(al.parse_word("a c a").unwrap(), al.parse_word("b1 b2").unwrap());
        let st = stair_factorize(&al, &ctx).unwrap();
        assert_eq!(st.height(), 3);
        let show = |w: &Word| al.format_word(w);
        assert_eq!(show(&st.pairs[0].0), "");
        assert_eq!(show(&st.pairs[0].1), "");
        assert_eq!(show(&st.pairs[1].0), "c");
        assert_eq!(show(&st.pairs[1].1), "");
        assert_eq!(show(&st.pairs[2].0), "");
        assert_eq!(show(&st.pairs[2].1), "");
        let sep_names: Vec<(String, String)> = st
            .seps
            .iter()
            .map(|&(a, b)| (al.name(a).to_string(), al.name(b).to_string()))
            .collect();
        assert_eq!(
            sep_names,
            vec![
                ("a".to_string(), "b2".to_string()),
                ("a".to_string(), "b1".to_string())
            ]
        );
        assert_eq!(st.rebuild(), ctx);
    }

    #[test]
    fn stair_of_matched_affixes() {
        let al = alphabet();
        // u = (a b1) a c, v = b2 (a b1): x1 = "a b1", sep (a, b2),
        // x2 = "c", y2 = ε … wait y1 must absorb the trailing "a b1".
        let ctx = Context::new(
            al.parse_word("a b1 a c").unwrap(),
            al.parse_word("b2 a b1").unwrap(),
        );
        assert!(ctx.is_valid(&al));
        let st = stair_factorize(&al, &ctx).unwrap();
        assert_eq!(st.height(), 2);
        assert_eq!(al.format_word(&st.pairs[0].0), "a b1");
        assert_eq!(al.format_word(&st.pairs[0].1), "a b1");
        assert_eq!(al.format_word(&st.pairs[1].0), "c");
        assert_eq!(al.format_word(&st.pairs[1].1), "");
        assert_eq!(st.seps.len(), 1);
        assert_eq!(al.name(st.seps[0].0), "a");
        assert_eq!(al.name(st.seps[0].1), "b2");
        assert_eq!(st.rebuild(), ctx);
    }

    #[test]
    fn empty_context() {
        let al = alphabet();
        let st = stair_factorize(&al, &Context::empty()).unwrap();
        assert_eq!(st.height(), 1);
        assert!(st.seps.is_empty());
    }
}
