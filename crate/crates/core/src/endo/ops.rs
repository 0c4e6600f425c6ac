use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::{Carrier, EndoContext, Step, TupleMorphism, TwistedEndo, TwistedTuple};
use crate::bimodule::{BimoduleMap, DirectSumWitness};
use crate::error::{Error, Result};

/// `T([M × k, ⊕Q_i]) → ⊕ T([M × k, Q_i])`.
fn distribute_power(ctx: &EndoContext, k: usize, sum: &DirectSumWitness) -> Result<(BimoduleMap, Arc<DirectSumWitness>)> {
    let cache = ctx.cache();
    if k == 0 {
        let same = cache.direct_sum(&sum.summands)?;
        return Ok((same.module.identity(), same));
    }
    let (inner, inner_sum) = distribute_power(ctx, k - 1, sum)?;
    let m = ctx.m();
    let lifted = cache.tensor_maps(&m.identity(), &inner)?;
    let dist = cache.distribute_left(m, &inner_sum)?;
    let parts: Vec<_> = inner_sum.summands.iter().map(|q| cache.product(m, q)).collect::<Result<_>>()?;
    let out = cache.direct_sum(&parts)?;
    Ok((dist.after(&lifted)?, out))
}

/// Block assembly `T([M × e, ⊕Q_i]) → T([⊕P_i, N × e])` of steps
/// `g_i: T([M × e, Q_i]) → T([P_i, N × e])`, through the distributivity maps.
pub(crate) fn assemble(ctx: &EndoContext, steps: &[Step]) -> Result<BimoduleMap> {
    let e = steps.first().ok_or_else(|| Error::ShapeMismatch("no steps to assemble".into()))?.exponent;
    if steps.iter().any(|s| s.exponent != e) {
        return Err(Error::ShapeMismatch("steps of different exponents".into()));
    }
    let cache = ctx.cache();
    let inner: Vec<_> = steps.iter().map(|s| s.inner.clone()).collect();
    let outer: Vec<_> = steps.iter().map(|s| s.outer.clone()).collect();
    let q = cache.direct_sum(&inner)?;
    let p = cache.direct_sum(&outer)?;
    let (dist, dsum) = distribute_power(ctx, e, &q)?;
    let tail = cache.list(&ctx.n_list(e))?;
    let parts: Vec<_> = outer.iter().map(|x| cache.product(x, &tail)).collect::<Result<_>>()?;
    let tsum = cache.direct_sum(&parts)?;
    let maps: Vec<_> = steps.iter().map(|s| s.map.clone()).collect();
    let block = dsum.sum_maps(&tsum, &maps)?;
    let undist = cache.undistribute_right(&p, &tail)?;
    undist.after(&block.after(&dist)?)
}

/// `⊕P_j → ⊕P_{j+shift}`: the summand `P_j` moves to slot `j − shift`.
fn rotation(ctx: &EndoContext, carriers: &[Carrier], shift: usize) -> Result<BimoduleMap> {
    let cache = ctx.cache();
    let n = carriers.len();
    let mods: Vec<_> = carriers.iter().map(|c| c.module().clone()).collect();
    let mut rotated = mods.clone();
    rotated.rotate_left(shift % n);
    let src = cache.direct_sum(&mods)?;
    let tgt = cache.direct_sum(&rotated)?;
    let mut total = BimoduleMap::zero(&src.module, &tgt.module);
    for i in 0..n {
        let j = (i + shift) % n;
        let piece = tgt.injections[i].after(&src.projections[j])?;
        total = total.add(&piece)?;
    }
    Ok(total)
}

/// `σ(t): M ⊙ (⊕P_{j+1}) → (⊕P_j) ⊙ N`.
pub fn sigma(t: &TwistedTuple) -> Result<BimoduleMap> {
    let steps: Vec<Step> = (0..t.len()).map(|j| t.step(j)).collect();
    assemble(t.context(), &steps)
}

/// `σ(t) ∘ (id_M ⊙ rotation)`, carrier `⊕P_j` in index order.
pub fn verschiebung_tuple(t: &TwistedTuple) -> Result<TwistedEndo> {
    let ctx = t.context();
    let carrier = Carrier::direct_sum(ctx.cache(), t.carriers())?;
    let rot = rotation(ctx, t.carriers(), 1)?;
    let lifted = ctx.cache().lift_left(&ctx.m_list(1), &rot)?;
    let map = sigma(t)?.after(&lifted)?;
    Ok(TwistedEndo::from_parts(ctx, 1, carrier, map))
}

/// `F^m V(t)` in normal form: the rotation by `m` followed by the block sum
/// of the windows `Γ′(f_i, …, f_{i+m−1})`.
pub fn fv_formula(t: &TwistedTuple, m: usize) -> Result<TwistedEndo> {
    let ctx = t.context();
    let n = t.len();
    let carrier = Carrier::direct_sum(ctx.cache(), t.carriers())?;
    let steps: Vec<Step> = (0..n).map(|i| t.window(i, m)).collect::<Result<_>>()?;
    let rot = rotation(ctx, t.carriers(), m)?;
    let lifted = ctx.cache().lift_left(&ctx.m_list(m), &rot)?;
    let map = assemble(ctx, &steps)?.after(&lifted)?;
    Ok(TwistedEndo::from_parts(ctx, m, carrier, map))
}

/// `V^n(f)` for `f` of exponent `n`, padding with identities on the side
/// where the twist is trivial.
pub fn verschiebung(f: &TwistedEndo) -> Result<TwistedEndo> {
    let n = f.exponent();
    if n == 1 {
        return Ok(f.clone());
    }
    verschiebung_tuple(&padded_tuple(f)?)
}

/// A tuple with `Γ(t) ≅ f`, available when `M` or `N` is trivial.
pub(crate) fn padded_tuple(f: &TwistedEndo) -> Result<TwistedTuple> {
    let ctx = f.context();
    let cache = ctx.cache();
    let n = f.exponent();
    let p = f.carrier().clone();
    if let Some((to_unit, from_unit)) = ctx.n_unit() {
        // P_j = T([M × (n − j), P]) for j ≥ 1.
        let mc = ctx.m_carrier()?;
        let mut carriers = vec![p.clone()];
        let mut acc = p.clone();
        let mut tail = Vec::new();
        for _ in 1..n {
            acc = Carrier::composite(cache, &mc, &acc)?;
            tail.push(acc.clone());
        }
        tail.reverse();
        carriers.extend(tail);
        let s = ctx.right_ring();
        let nn = cache.list(&ctx.n_list(n))?;
        // T([N × n]) → N through the unit.
        let collapse = {
            let mut c = to_unit.clone();
            for _ in 2..=n {
                let both = cache.tensor_maps(to_unit, &c)?;
                c = cache.left_unitor(&cache.unit(s))?.after(&both)?;
            }
            from_unit.after(&c)?
        };
        debug_assert_eq!(*collapse.source(), nn);
        let f0 = cache.tensor_maps(&p.module().identity(), &collapse)?.after(f.map())?;
        let mut maps = vec![f0];
        for c in &carriers[1..] {
            let x = c.module();
            let g = cache.tensor_maps(&x.identity(), from_unit)?.after(&cache.right_unitor_inv(x)?)?;
            maps.push(g);
        }
        return Ok(TwistedTuple::from_parts(ctx, carriers, maps));
    }
    if let Some((_, to_unit)) = ctx.m_unit() {
        // P_j = T([P, N × j]).
        let r = ctx.left_ring();
        let u = cache.unit(r);
        let nc = ctx.n_carrier()?;
        let mut carriers = vec![p.clone()];
        for j in 1..n {
            let nj = ctx.power_carrier(&nc, j)?;
            carriers.push(Carrier::composite(cache, &p, &nj)?);
        }
        let mut maps = Vec::with_capacity(n);
        for j in 0..n {
            let next = carriers[(j + 1) % n].module().clone();
            let strip = cache.left_unitor(&next)?.after(&cache.tensor_maps(to_unit, &next.identity())?)?;
            let mut head = vec![p.module().clone()];
            head.extend(ctx.n_list(j));
            let split = cache.split(&head, &ctx.n_list(1))?;
            if j + 1 < n {
                maps.push(split.after(&strip)?);
            } else {
                // P → T([M × n]) ⊙ P → T([M × n, P]), then f.
                let mn = cache.list(&ctx.m_list(n))?;
                let expand = {
                    let mut c = to_unit.clone();
                    for _ in 2..=n {
                        let both = cache.tensor_maps(to_unit, &c)?;
                        c = cache.left_unitor(&u)?.after(&both)?;
                    }
                    c.inverse().ok_or_else(|| Error::Dimension("unit collapse is not invertible".into()))?
                };
                debug_assert_eq!(*expand.target(), mn);
                let pm = p.module();
                let grow = cache.tensor_maps(&expand, &pm.identity())?.after(&cache.left_unitor_inv(pm)?)?;
                let merge = cache.merge(&ctx.m_list(n), &[pm.clone()])?;
                let g = split.after(&f.map().after(&merge.after(&grow.after(&strip)?)?)?)?;
                maps.push(g);
            }
        }
        return Ok(TwistedTuple::from_parts(ctx, carriers, maps));
    }
    Err(Error::GammaInverseUnavailable)
}

/// A biproduct with its structure morphisms.
#[derive(Clone, Debug)]
pub struct Biproduct<T> {
    pub sum: T,
    pub injections: Vec<TupleMorphism>,
    pub projections: Vec<TupleMorphism>,
}

/// Pointwise sum of endomorphisms of a common exponent.
pub fn endo_sum(parts: &[TwistedEndo]) -> Result<TwistedEndo> {
    let first = parts.first().ok_or_else(|| Error::ShapeMismatch("empty sum".into()))?;
    let ctx = first.context();
    if parts.iter().any(|f| f.context() != ctx || f.exponent() != first.exponent()) {
        return Err(Error::ShapeMismatch("summands over different contexts or exponents".into()));
    }
    let carriers: Vec<Carrier> = parts.iter().map(|f| f.carrier().clone()).collect();
    let carrier = Carrier::direct_sum(ctx.cache(), &carriers)?;
    let steps: Vec<Step> = parts.iter().map(TwistedEndo::as_step).collect();
    let map = assemble(ctx, &steps)?;
    Ok(TwistedEndo::from_parts(ctx, first.exponent(), carrier, map))
}

/// Pointwise sum of tuples of a common length, with injections and projections.
pub fn tuple_sum(a: &TwistedTuple, b: &TwistedTuple) -> Result<Biproduct<TwistedTuple>> {
    let ctx = a.context();
    let n = a.len();
    if b.context() != ctx || b.len() != n {
        return Err(Error::ShapeMismatch("tuples over different contexts or lengths".into()));
    }
    let cache = ctx.cache();
    let mut carriers = Vec::with_capacity(n);
    for j in 0..n {
        carriers.push(Carrier::direct_sum(cache, &[a.carriers()[j].clone(), b.carriers()[j].clone()])?);
    }
    let mut maps = Vec::with_capacity(n);
    for j in 0..n {
        maps.push(assemble(ctx, &[a.step(j), b.step(j)])?);
    }
    let sum = TwistedTuple::from_parts(ctx, carriers, maps);
    let mut inj = [Vec::with_capacity(n), Vec::with_capacity(n)];
    let mut proj = [Vec::with_capacity(n), Vec::with_capacity(n)];
    for j in 0..n {
        let w = cache.direct_sum(&[a.carriers()[j].module().clone(), b.carriers()[j].module().clone()])?;
        for k in 0..2 {
            inj[k].push(w.injections[k].clone());
            proj[k].push(w.projections[k].clone());
        }
    }
    let [ia, ib] = inj;
    let [pa, pb] = proj;
    let injections = vec![TupleMorphism::new(a, &sum, ia)?, TupleMorphism::new(b, &sum, ib)?];
    let projections = vec![TupleMorphism::new(&sum, a, pa)?, TupleMorphism::new(&sum, b, pb)?];
    Ok(Biproduct { sum, injections, projections })
}
