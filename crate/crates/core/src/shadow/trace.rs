use alloc::vec::Vec;

use super::{shadow, theta, varsigma, ShadowMap};
use crate::arith::Int;
use crate::bimodule::BimoduleMap;
use crate::endo::{Carrier, EndoContext, TwistedEndo};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// `tr(f): ⟨⟨M^{⊙n}⟩⟩ → ⟨⟨N^{⊙n}⟩⟩`, evaluated on representatives:
/// `[x] ↦ [Σ_a ε(φ_a, p_{a,d})·y_{a,d}]` where `f(x ⊗ p_a) = Σ_d p_{a,d} ⊗ y_{a,d}`.
pub fn trace(f: &TwistedEndo) -> Result<ShadowMap> {
    let ctx = f.context();
    let cache = ctx.cache();
    let n = f.exponent();
    let d = f.carrier().duality();
    let p = d.module();
    let mn = cache.list(&ctx.m_list(n))?;
    let nn = cache.list(&ctx.n_list(n))?;
    let sm = shadow(cache, &mn)?;
    let sn = shadow(cache, &nn)?;
    let merge = cache.merge(&ctx.m_list(n), core::slice::from_ref(p))?;
    let t_in = cache.tensor(&mn, p)?;
    let t_out = cache.tensor(p, &nn)?;
    if t_out.product() != f.map().target() {
        return Err(Error::ShapeMismatch("endomorphism target is not P ⊙ N^n".into()));
    }
    let g = nn.group();
    let cols: Vec<Vec<Int>> = (0..sm.rank())
        .map(|u| {
            let x = sm.lift(&sm.group().basis(u));
            let mut acc = g.zero();
            for (pa, phia) in d.eta_terms() {
                let w = f.map().apply(&merge.apply(&t_in.pure(&x, pa)));
                for (di, l, c) in t_out.lift_pairs(&w) {
                    let s = d.eps(phia, &p.group().basis(di));
                    let y = nn.act_left(&s, &g.basis(l));
                    acc = g.add(&acc, &g.scale(&c, &y));
                }
            }
            sn.project(&acc)
        })
        .collect();
    Ok(ShadowMap::from_parts(sm, sn.clone(), IntMatrix::from_columns(sn.rank(), &cols)))
}

/// The trace as the composite `⟨⟨id ⊙ η⟩⟩`, `⟨⟨f ⊙ id⟩⟩`, `θ`, `⟨⟨ε ⊙ id⟩⟩`
/// with every unitor and associator spelled out.
pub fn trace_literal(f: &TwistedEndo) -> Result<ShadowMap> {
    let ctx = f.context();
    let cache = ctx.cache();
    let n = f.exponent();
    let d = f.carrier().duality();
    let (p, pd) = (d.module(), d.dual());
    let mn = cache.list(&ctx.m_list(n))?;
    let nn = cache.list(&ctx.n_list(n))?;
    let a = cache.right_unitor_inv(&mn)?;
    let b = cache.tensor_maps(&mn.identity(), &d.eta(cache)?)?;
    let c = cache.associator_inv(&mn, p, pd)?;
    let merge = cache.merge(&ctx.m_list(n), core::slice::from_ref(p))?;
    let dd = cache.tensor_maps(&merge, &pd.identity())?;
    let e = cache.tensor_maps(f.map(), &pd.identity())?;
    let first = e.after(&dd.after(&c.after(&b.after(&a)?)?)?)?;
    let pn = cache.product(p, &nn)?;
    let th = theta(cache, &pn, pd)?;
    let g = cache.associator_inv(pd, p, &nn)?;
    let h = cache.tensor_maps(&d.eps_map(cache)?, &nn.identity())?;
    let k = cache.left_unitor(&nn)?;
    let last = k.after(&h.after(&g)?)?;
    ShadowMap::induced(cache, &last)?.after(&th.after(&ShadowMap::induced(cache, &first)?)?)
}

/// `tr(F^k f)` for `f` of exponent one.
pub fn iterated_trace(f: &TwistedEndo, k: usize) -> Result<ShadowMap> {
    if f.exponent() != 1 {
        return Err(Error::ExponentMismatch { expected: 1, found: f.exponent() });
    }
    trace(&f.frobenius(k)?)
}

/// `tr_j(f)` for `f` of exponent `n`: the trace of `F^j` of `f` regraded
/// over `(M^{⊙n}, N^{⊙n})`, a map `⟨⟨(M^{⊙n})^{⊙j}⟩⟩ → ⟨⟨(N^{⊙n})^{⊙j}⟩⟩`.
pub fn trace_power(f: &TwistedEndo, j: usize) -> Result<ShadowMap> {
    trace(&f.regrade(f.exponent())?.frobenius(j)?)
}

/// `(tr_1(f), …, tr_bound(f))`.
pub fn trace_sequence(f: &TwistedEndo, bound: usize) -> Result<Vec<ShadowMap>> {
    if bound == 0 {
        return Err(Error::InvalidParameter("trace bound must be at least 1".into()));
    }
    let base = f.regrade(f.exponent())?;
    (1..=bound).map(|j| trace(&base.frobenius(j)?)).collect()
}

/// `τ(g) = Σ_{i<n} ς_N^i ∘ g ∘ ς_M^{−i}` for `g: ⟨⟨M^{⊙nk}⟩⟩ → ⟨⟨N^{⊙nk}⟩⟩`
/// commuting with `ς^n`.
pub fn transfer(ctx: &EndoContext, g: &ShadowMap, n: usize, k: usize) -> Result<ShadowMap> {
    let cache = ctx.cache();
    let total = n * k;
    if total == 0 {
        return Err(Error::InvalidParameter("transfer needs n, k ≥ 1".into()));
    }
    let sm = varsigma(cache, ctx.m(), total)?;
    let sn = varsigma(cache, ctx.n(), total)?;
    if g.source().source() != sm.source().source() || g.target().source() != sn.source().source() {
        return Err(Error::ShapeMismatch("transfer input is not a map between the nk-th shadows".into()));
    }
    if sn.pow(n)?.after(g)? != g.after(&sm.pow(n)?)? {
        return Err(Error::NotEquivariant);
    }
    let mut acc = ShadowMap::zero(g.source(), g.target());
    for i in 0..n {
        let term = sn.pow(i)?.after(&g.after(&sm.pow((total - i) % total)?)?)?;
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

fn bracket(ctx: &EndoContext, n: usize, i: usize, left: bool) -> Vec<Vec<crate::bimodule::Bimodule>> {
    let l = if left { ctx.m_list(n) } else { ctx.n_list(n) };
    alloc::vec![l; i]
}

/// `Φ`: re-brackets `g: ⟨⟨M^{⊙ni}⟩⟩ → ⟨⟨N^{⊙ni}⟩⟩` as a map
/// `⟨⟨(M^{⊙n})^{⊙i}⟩⟩ → ⟨⟨(N^{⊙n})^{⊙i}⟩⟩`.
pub fn phi(ctx: &EndoContext, n: usize, i: usize, g: &ShadowMap) -> Result<ShadowMap> {
    let cache = ctx.cache();
    let into = ShadowMap::induced(cache, &cache.flatten(&bracket(ctx, n, i, true))?)?;
    let out = ShadowMap::induced(cache, &cache.unflatten(&bracket(ctx, n, i, false))?)?;
    out.after(&g.after(&into)?)
}

/// Inverse of [`phi`].
pub fn phi_inverse(ctx: &EndoContext, n: usize, i: usize, h: &ShadowMap) -> Result<ShadowMap> {
    let cache = ctx.cache();
    let into = ShadowMap::induced(cache, &cache.unflatten(&bracket(ctx, n, i, true))?)?;
    let out = ShadowMap::induced(cache, &cache.flatten(&bracket(ctx, n, i, false))?)?;
    out.after(&h.after(&into)?)
}

/// `B_n`: entry `m` is `τ(tr_{m/n})` (re-bracketed to `M^{⊙m}`) when
/// `n | m` and the zero map otherwise. `seq[j − 1] = tr_j` over `(M^{⊙n}, N^{⊙n})`.
pub fn b_map(ctx: &EndoContext, n: usize, seq: &[ShadowMap], bound: usize) -> Result<Vec<ShadowMap>> {
    let cache = ctx.cache();
    let mut out = Vec::with_capacity(bound);
    for m in 1..=bound {
        if m % n == 0 {
            let j = m / n;
            let g = seq.get(j - 1).ok_or_else(|| Error::Dimension("sequence shorter than bound / n".into()))?;
            out.push(transfer(ctx, &phi_inverse(ctx, n, j, g)?, n, j)?);
        } else {
            let sm = shadow(cache, &cache.list(&ctx.m_list(m))?)?;
            let sn = shadow(cache, &cache.list(&ctx.n_list(m))?)?;
            out.push(ShadowMap::zero(&sm, &sn));
        }
    }
    Ok(out)
}

/// `f` with the left ring restricted to the integers: the composite of the
/// quotient `M ⊗_Z P → M ⊙ P` with `f`, over the context `(Z, S, M, N)`.
fn forget_left(f: &TwistedEndo) -> Result<TwistedEndo> {
    if f.exponent() != 1 {
        return Err(Error::ExponentMismatch { expected: 1, found: f.exponent() });
    }
    let ctx = f.context();
    let cache = ctx.cache();
    let mz = ctx.m().forget_to_integers(true, true);
    let carrier = Carrier::from_duality(f.carrier().duality().forget_left()?);
    let pz = carrier.module();
    let zctx = EndoContext::new(ctx.shared_cache(), &mz, ctx.n())?;
    let tz = cache.tensor(&mz, pz)?;
    let tr = cache.tensor(ctx.m(), f.carrier().module())?;
    let cols: Vec<Vec<Int>> = (0..tz.product().rank())
        .map(|u| {
            let mut acc = tr.product().group().zero();
            for (i, j, c) in tz.lift_pairs(&tz.product().group().basis(u)) {
                let pure = tr.pure(&mz.group().basis(i), &pz.group().basis(j));
                acc = tr.product().group().add(&acc, &tr.product().group().scale(&c, &pure));
            }
            acc
        })
        .collect();
    let quotient = IntMatrix::from_columns(tr.product().rank(), &cols);
    let target = zctx.target_of(1, pz)?;
    let map = BimoduleMap::from_parts(tz.product().clone(), target, f.matrix().mul(&quotient));
    TwistedEndo::new(&zctx, 1, carrier, map)
}

/// Trace of the endomorphism with the left base forgotten, a map `M → ⟨⟨N⟩⟩`
/// (the shadow of `M` over `Z` is `M` itself).
pub fn trace_forget_left(f: &TwistedEndo) -> Result<ShadowMap> {
    trace(&forget_left(f)?)
}

/// The quotient `q: ⟨⟨M⟩⟩_Z = M → ⟨⟨M⟩⟩_R`.
pub fn forget_quotient(f: &TwistedEndo) -> Result<ShadowMap> {
    let ctx = f.context();
    let cache = ctx.cache();
    let mz = ctx.m().forget_to_integers(true, true);
    let s = shadow(cache, &mz)?;
    let t = shadow(cache, ctx.m())?;
    let m = t.projection().mul(&s.presentation().from_normal);
    ShadowMap::new(s, t, m)
}
