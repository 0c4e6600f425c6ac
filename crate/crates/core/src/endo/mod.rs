//! Twisted endomorphisms `M^{⊙n} ⊙ P → P ⊙ N^{⊙n}`, twisted tuples and the
//! operators built from them.
//!
//! All tensors are right-normalized through the shared [`TensorCache`], so
//! every operator here is a composite of structural maps from the cache and
//! the input maps, and identities between operators are matrix equalities.

mod exact;
mod ops;

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use spin::RwLock;

use crate::algebra::FinAlgebra;
use crate::bimodule::{Bimodule, BimoduleMap, TensorCache};
use crate::dualizable::{DualityData, ProjectivePresentation};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

pub use exact::{is_exact, make_ses, ExactSequence, TupleMorphism};
pub use ops::{endo_sum, fv_formula, sigma, tuple_sum, verschiebung, verschiebung_tuple, Biproduct};

/// A dualizable `R`-`S`-bimodule: the module of some duality data, plus the
/// idempotent presentation it came from when there is one.
#[derive(Clone)]
pub struct Carrier {
    presentation: Option<ProjectivePresentation>,
    duality: Arc<DualityData>,
}

impl fmt::Debug for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Carrier({:?})", self.module())
    }
}

impl Carrier {
    pub fn from_presentation(pp: &ProjectivePresentation) -> Result<Self> {
        let d = DualityData::from_presentation(pp)?;
        Ok(Carrier { presentation: Some(pp.clone()), duality: Arc::new(d) })
    }

    /// Any bimodule that is finitely generated projective on the right.
    pub fn from_module(p: &Bimodule, cache: &TensorCache) -> Result<Self> {
        let d = DualityData::generic(p, cache)
            .ok_or_else(|| Error::NotProjective(alloc::format!("{p:?} admits no coevaluation")))?;
        Ok(Carrier { presentation: None, duality: Arc::new(d) })
    }

    pub fn from_duality(d: DualityData) -> Self {
        Carrier { presentation: None, duality: Arc::new(d) }
    }

    /// Blockwise sum; its module is the cached direct sum of the summands.
    pub fn direct_sum(cache: &TensorCache, parts: &[Carrier]) -> Result<Self> {
        let ds: Vec<DualityData> = parts.iter().map(|c| (*c.duality).clone()).collect();
        Ok(Self::from_duality(DualityData::direct_sum(cache, &ds)?))
    }

    /// Carrier of `X ⊙ Y`.
    pub fn composite(cache: &TensorCache, x: &Carrier, y: &Carrier) -> Result<Self> {
        Ok(Self::from_duality(DualityData::composite(cache, &x.duality, &y.duality)?))
    }

    pub fn module(&self) -> &Bimodule {
        self.duality.module()
    }

    pub fn duality(&self) -> &DualityData {
        &self.duality
    }

    pub fn presentation(&self) -> Option<&ProjectivePresentation> {
        self.presentation.as_ref()
    }
}

type Iso = (BimoduleMap, BimoduleMap);

struct CtxInner {
    r: FinAlgebra,
    s: FinAlgebra,
    m: Bimodule,
    n: Bimodule,
    cache: Arc<TensorCache>,
    /// `U_R → M` and back, when `M` is trivial.
    m_unit: Option<Iso>,
    /// `N → U_S` and back, when `N` is trivial.
    n_unit: Option<Iso>,
    powers: RwLock<BTreeMap<usize, EndoContext>>,
    m_carrier: RwLock<Option<Carrier>>,
    n_carrier: RwLock<Option<Carrier>>,
}

/// The data `(R, S, M, N)` together with the tensor cache all operators share.
#[derive(Clone)]
pub struct EndoContext(Arc<CtxInner>);

impl fmt::Debug for EndoContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EndoContext(M = {:?}, N = {:?})", self.0.m, self.0.n)
    }
}

impl PartialEq for EndoContext {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.m == other.0.m && self.0.n == other.0.n)
    }
}

impl EndoContext {
    /// `M` must be an `R`-`R`-bimodule and `N` an `S`-`S`-bimodule.
    pub fn new(cache: Arc<TensorCache>, m: &Bimodule, n: &Bimodule) -> Result<Self> {
        let r = m.left_ring().clone();
        let s = n.left_ring().clone();
        if *m.right_ring() != r || *n.right_ring() != s {
            return Err(Error::RingMismatch("twists must be bimodules over a single ring".into()));
        }
        let trivial = |x: &Bimodule, ring: &FinAlgebra| {
            let u = cache.unit(ring);
            (u == *x).then(|| {
                let to = BimoduleMap::from_parts(u.clone(), x.clone(), IntMatrix::identity(u.rank()));
                let back = BimoduleMap::from_parts(x.clone(), u, IntMatrix::identity(x.rank()));
                (to, back)
            })
        };
        let m_unit = trivial(m, &r);
        let n_unit = trivial(n, &s).map(|(to, back)| (back, to));
        Ok(Self::assemble(cache, r, s, m.clone(), n.clone(), m_unit, n_unit))
    }

    fn assemble(
        cache: Arc<TensorCache>,
        r: FinAlgebra,
        s: FinAlgebra,
        m: Bimodule,
        n: Bimodule,
        m_unit: Option<Iso>,
        n_unit: Option<Iso>,
    ) -> Self {
        EndoContext(Arc::new(CtxInner {
            r,
            s,
            m,
            n,
            cache,
            m_unit,
            n_unit,
            powers: RwLock::new(BTreeMap::new()),
            m_carrier: RwLock::new(None),
            n_carrier: RwLock::new(None),
        }))
    }

    pub fn left_ring(&self) -> &FinAlgebra {
        &self.0.r
    }

    pub fn right_ring(&self) -> &FinAlgebra {
        &self.0.s
    }

    pub fn m(&self) -> &Bimodule {
        &self.0.m
    }

    pub fn n(&self) -> &Bimodule {
        &self.0.n
    }

    pub fn cache(&self) -> &TensorCache {
        &self.0.cache
    }

    pub fn shared_cache(&self) -> Arc<TensorCache> {
        self.0.cache.clone()
    }

    /// Whether `M` is the unit `R`-bimodule.
    pub fn m_is_trivial(&self) -> bool {
        self.0.m_unit.is_some()
    }

    /// Whether `N` is the unit `S`-bimodule.
    pub fn n_is_trivial(&self) -> bool {
        self.0.n_unit.is_some()
    }

    pub(crate) fn m_unit(&self) -> Option<&Iso> {
        self.0.m_unit.as_ref()
    }

    pub(crate) fn n_unit(&self) -> Option<&Iso> {
        self.0.n_unit.as_ref()
    }

    pub fn m_list(&self, k: usize) -> Vec<Bimodule> {
        vec![self.0.m.clone(); k]
    }

    pub fn n_list(&self, k: usize) -> Vec<Bimodule> {
        vec![self.0.n.clone(); k]
    }

    /// `T([M × k, P])`.
    pub fn source_of(&self, k: usize, p: &Bimodule) -> Result<Bimodule> {
        let mut l = self.m_list(k);
        l.push(p.clone());
        self.cache().list(&l)
    }

    /// `T([P, N × k])`.
    pub fn target_of(&self, k: usize, p: &Bimodule) -> Result<Bimodule> {
        let mut l = vec![p.clone()];
        l.extend(self.n_list(k));
        self.cache().list(&l)
    }

    /// The context `(R, S, T([M × k]), T([N × k]))`, cached.
    pub fn power(&self, k: usize) -> Result<EndoContext> {
        if k == 0 {
            return Err(Error::InvalidParameter("power needs k ≥ 1".into()));
        }
        if k == 1 {
            return Ok(self.clone());
        }
        if let Some(c) = self.0.powers.read().get(&k) {
            return Ok(c.clone());
        }
        let cache = self.cache();
        let m = cache.list(&self.m_list(k))?;
        let n = cache.list(&self.n_list(k))?;
        let m_unit = match &self.0.m_unit {
            Some((_, back)) => {
                let collapse = collapse_with(cache, &self.0.r, back, k)?;
                let to = collapse.inverse().ok_or_else(|| Error::Dimension("unit collapse is not invertible".into()))?;
                Some((to, collapse))
            }
            None => None,
        };
        let n_unit = match &self.0.n_unit {
            Some((to, _)) => {
                let collapse = collapse_with(cache, &self.0.s, to, k)?;
                let back = collapse.inverse().ok_or_else(|| Error::Dimension("unit collapse is not invertible".into()))?;
                Some((collapse, back))
            }
            None => None,
        };
        let ctx = Self::assemble(self.0.cache.clone(), self.0.r.clone(), self.0.s.clone(), m, n, m_unit, n_unit);
        let mut w = self.0.powers.write();
        Ok(w.entry(k).or_insert(ctx).clone())
    }

    /// Duality data for `M` as a right `R`-module, when it exists.
    pub fn m_carrier(&self) -> Result<Carrier> {
        lazy_carrier(&self.0.m_carrier, &self.0.m, self.cache())
    }

    pub fn n_carrier(&self) -> Result<Carrier> {
        lazy_carrier(&self.0.n_carrier, &self.0.n, self.cache())
    }

    /// Carrier of `T([X × k])` for the twist `x` (either `M` or `N`).
    pub(crate) fn power_carrier(&self, base: &Carrier, k: usize) -> Result<Carrier> {
        let mut acc = base.clone();
        for _ in 1..k {
            acc = Carrier::composite(self.cache(), base, &acc)?;
        }
        Ok(acc)
    }
}

fn lazy_carrier(slot: &RwLock<Option<Carrier>>, x: &Bimodule, cache: &TensorCache) -> Result<Carrier> {
    if let Some(c) = slot.read().as_ref() {
        return Ok(c.clone());
    }
    let c = Carrier::from_module(x, cache)?;
    *slot.write() = Some(c.clone());
    Ok(c)
}

/// `T([X × k]) → U` from a trivialization `X → U`.
fn collapse_with(cache: &TensorCache, ring: &FinAlgebra, to_unit: &BimoduleMap, k: usize) -> Result<BimoduleMap> {
    if k == 1 {
        return Ok(to_unit.clone());
    }
    let inner = collapse_with(cache, ring, to_unit, k - 1)?;
    let u = cache.unit(ring);
    let both = cache.tensor_maps(to_unit, &inner)?;
    cache.left_unitor(&u)?.after(&both)
}

/// A map `T([M × exponent, inner]) → T([outer, N × exponent])`: one factor
/// of a Γ-composite.
#[derive(Clone, Debug)]
pub struct Step {
    pub exponent: usize,
    pub inner: Bimodule,
    pub outer: Bimodule,
    pub map: BimoduleMap,
}

/// `Γ′(s0, s1)` for `s0: M^a ⊙ Q1 → Q0 ⊙ N^a` and `s1: M^b ⊙ Q2 → Q1 ⊙ N^b`:
/// lift `s1` past `M^a`, re-bracket, apply `s0`, merge the `N` factors.
pub fn gamma_prime(ctx: &EndoContext, s0: &Step, s1: &Step) -> Result<Step> {
    if s0.inner != s1.outer {
        return Err(Error::ShapeMismatch("Γ′ needs matching middle carriers".into()));
    }
    let cache = ctx.cache();
    let (a, b) = (s0.exponent, s1.exponent);
    let lifted = cache.lift_left(&ctx.m_list(a), &s1.map)?;
    let mut head = ctx.m_list(a);
    head.push(s0.inner.clone());
    let split = cache.split(&head, &ctx.n_list(b))?;
    let tail = cache.list(&ctx.n_list(b))?;
    let apply = cache.tensor_maps(&s0.map, &tail.identity())?;
    let mut out = vec![s0.outer.clone()];
    out.extend(ctx.n_list(a));
    let merge = cache.merge(&out, &ctx.n_list(b))?;
    let map = merge.after(&apply.after(&split.after(&lifted)?)?)?;
    Ok(Step { exponent: a + b, inner: s1.inner.clone(), outer: s0.outer.clone(), map })
}

/// `f: M^{⊙n} ⊙ P → P ⊙ N^{⊙n}` with `P` dualizable.
#[derive(Clone, Debug)]
pub struct TwistedEndo {
    ctx: EndoContext,
    exponent: usize,
    carrier: Carrier,
    map: BimoduleMap,
}

impl TwistedEndo {
    pub fn new(ctx: &EndoContext, exponent: usize, carrier: Carrier, map: BimoduleMap) -> Result<Self> {
        if exponent == 0 {
            return Err(Error::InvalidParameter("exponent must be at least 1".into()));
        }
        let p = carrier.module();
        if *p.left_ring() != ctx.0.r || *p.right_ring() != ctx.0.s {
            return Err(Error::RingMismatch("carrier is not an R-S-bimodule".into()));
        }
        let src = ctx.source_of(exponent, p)?;
        let tgt = ctx.target_of(exponent, p)?;
        if *map.source() != src || *map.target() != tgt {
            return Err(Error::ShapeMismatch("map is not M^n ⊙ P → P ⊙ N^n".into()));
        }
        let map = map.retarget(&src, &tgt)?;
        map.check()?;
        Ok(TwistedEndo { ctx: ctx.clone(), exponent, carrier, map })
    }

    pub(crate) fn from_parts(ctx: &EndoContext, exponent: usize, carrier: Carrier, map: BimoduleMap) -> Self {
        TwistedEndo { ctx: ctx.clone(), exponent, carrier, map }
    }

    /// The map with matrix `a` on normal coordinates.
    pub fn from_matrix(ctx: &EndoContext, exponent: usize, carrier: Carrier, a: IntMatrix) -> Result<Self> {
        let src = ctx.source_of(exponent, carrier.module())?;
        let tgt = ctx.target_of(exponent, carrier.module())?;
        if a.rows() != tgt.rank() || a.cols() != src.rank() {
            return Err(Error::Dimension("matrix does not fit M^n ⊙ P → P ⊙ N^n".into()));
        }
        Self::new(ctx, exponent, carrier, BimoduleMap::from_parts(src, tgt, a))
    }

    pub fn context(&self) -> &EndoContext {
        &self.ctx
    }

    pub fn exponent(&self) -> usize {
        self.exponent
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn map(&self) -> &BimoduleMap {
        &self.map
    }

    pub fn matrix(&self) -> &IntMatrix {
        self.map.matrix()
    }

    pub fn as_step(&self) -> Step {
        let p = self.carrier.module().clone();
        Step { exponent: self.exponent, inner: p.clone(), outer: p, map: self.map.clone() }
    }

    /// `F^k(f) = Γ(f, …, f)`.
    pub fn frobenius(&self, k: usize) -> Result<TwistedEndo> {
        gamma(&diagonal(self, k)?)
    }

    /// View an endomorphism of exponent `a·b` as one of exponent `b` over
    /// the context `(M^{⊙a}, N^{⊙a})`.
    pub fn regrade(&self, a: usize) -> Result<TwistedEndo> {
        if a == 0 || self.exponent % a != 0 {
            return Err(Error::ExponentMismatch { expected: a, found: self.exponent });
        }
        if a == 1 {
            return Ok(self.clone());
        }
        let b = self.exponent / a;
        let target_ctx = self.ctx.power(a)?;
        let (src_lists, tgt_lists) = bracket_lists(&self.ctx, a, b, self.carrier.module());
        let cache = self.ctx.cache();
        let into = cache.flatten(&src_lists)?;
        let out = cache.unflatten(&tgt_lists)?;
        let map = out.after(&self.map.after(&into)?)?;
        Ok(TwistedEndo::from_parts(&target_ctx, b, self.carrier.clone(), map))
    }

    /// Inverse of [`TwistedEndo::regrade`]: `self` lives over `base.power(a)`.
    pub fn degrade(&self, base: &EndoContext, a: usize) -> Result<TwistedEndo> {
        let pc = base.power(a)?;
        if !Arc::ptr_eq(&pc.0, &self.ctx.0) {
            return Err(Error::ShapeMismatch("endomorphism does not live over the requested power context".into()));
        }
        if a == 1 {
            return Ok(self.clone());
        }
        let b = self.exponent;
        let (src_lists, tgt_lists) = bracket_lists(base, a, b, self.carrier.module());
        let cache = base.cache();
        let into = cache.unflatten(&src_lists)?;
        let out = cache.flatten(&tgt_lists)?;
        let map = out.after(&self.map.after(&into)?)?;
        Ok(TwistedEndo::from_parts(base, a * b, self.carrier.clone(), map))
    }

    /// `a: P → P` seen as an endomorphism of exponent `n` when both twists
    /// are trivial: `T([M × n, P]) ≅ P → P ≅ T([P, N × n])`.
    pub fn untwisted(ctx: &EndoContext, n: usize, carrier: Carrier, a: &BimoduleMap) -> Result<Self> {
        let (into, out) = untwist_isos(ctx, n, carrier.module())?;
        let map = out.after(&a.after(&into)?)?;
        TwistedEndo::new(ctx, n, carrier, map)
    }

    /// Inverse of [`TwistedEndo::untwisted`].
    pub fn underlying(&self) -> Result<BimoduleMap> {
        let (into, out) = untwist_isos(&self.ctx, self.exponent, self.carrier.module())?;
        let back_in = into.inverse().ok_or_else(|| Error::Dimension("unit collapse is not invertible".into()))?;
        let back_out = out.inverse().ok_or_else(|| Error::Dimension("unit collapse is not invertible".into()))?;
        back_out.after(&self.map.after(&back_in)?)
    }

    /// `f` with the carrier replaced through an isomorphism `h: P → Q`:
    /// `(h ⊙ id) ∘ f ∘ (id ⊙ h⁻¹)`.
    pub fn conjugate(&self, h: &BimoduleMap, target: Carrier) -> Result<TwistedEndo> {
        let hinv = h.inverse().ok_or_else(|| Error::NotBimoduleMap("conjugation needs an isomorphism".into()))?;
        let cache = self.ctx.cache();
        let n = self.exponent;
        let pre = cache.lift_left(&self.ctx.m_list(n), &hinv)?;
        let post = cache.tensor_maps(h, &cache.list(&self.ctx.n_list(n))?.identity())?;
        let map = post.after(&self.map.after(&pre)?)?;
        TwistedEndo::new(&self.ctx, n, target, map)
    }
}

/// `T([M × n, P]) → P` and `P → T([P, N × n])` through the trivializations.
fn untwist_isos(ctx: &EndoContext, n: usize, p: &Bimodule) -> Result<(BimoduleMap, BimoduleMap)> {
    let pc = ctx.power(n)?;
    let (Some((_, m_down)), Some((_, n_up))) = (pc.m_unit(), pc.n_unit()) else {
        return Err(Error::GammaInverseUnavailable);
    };
    let cache = ctx.cache();
    let split = cache.split(&ctx.m_list(n), &[p.clone()])?;
    let into = cache.left_unitor(p)?.after(&cache.tensor_maps(m_down, &p.identity())?.after(&split)?)?;
    let out = cache.tensor_maps(&p.identity(), n_up)?.after(&cache.right_unitor_inv(p)?)?;
    Ok((into, out))
}

/// Flatten lists for `T([M' × b, P]) ≅ T([M × ab, P])` and the `N` side.
fn bracket_lists(ctx: &EndoContext, a: usize, b: usize, p: &Bimodule) -> (Vec<Vec<Bimodule>>, Vec<Vec<Bimodule>>) {
    let mut src = vec![ctx.m_list(a); b];
    src.push(vec![p.clone()]);
    let mut tgt = vec![vec![p.clone()]];
    tgt.extend(vec![ctx.n_list(a); b]);
    (src, tgt)
}

/// `(f_j: M ⊙ P_{j+1} → P_j ⊙ N)_{j mod n}`.
#[derive(Clone, Debug)]
pub struct TwistedTuple {
    ctx: EndoContext,
    carriers: Vec<Carrier>,
    maps: Vec<BimoduleMap>,
}

impl TwistedTuple {
    pub fn new(ctx: &EndoContext, carriers: Vec<Carrier>, maps: Vec<BimoduleMap>) -> Result<Self> {
        let n = carriers.len();
        if n == 0 || maps.len() != n {
            return Err(Error::ShapeMismatch("a tuple needs one map per carrier".into()));
        }
        let mut fixed = Vec::with_capacity(n);
        for (j, f) in maps.iter().enumerate() {
            let src = ctx.source_of(1, carriers[(j + 1) % n].module())?;
            let tgt = ctx.target_of(1, carriers[j].module())?;
            if *f.source() != src || *f.target() != tgt {
                return Err(Error::ShapeMismatch(alloc::format!("f_{j} is not M ⊙ P_{{j+1}} → P_j ⊙ N")));
            }
            let f = f.retarget(&src, &tgt)?;
            f.check()?;
            fixed.push(f);
        }
        Ok(TwistedTuple { ctx: ctx.clone(), carriers, maps: fixed })
    }

    pub(crate) fn from_parts(ctx: &EndoContext, carriers: Vec<Carrier>, maps: Vec<BimoduleMap>) -> Self {
        TwistedTuple { ctx: ctx.clone(), carriers, maps }
    }

    /// The tuple `(f)` of an exponent-one endomorphism.
    pub fn from_endo(f: &TwistedEndo) -> Result<Self> {
        if f.exponent != 1 {
            return Err(Error::ExponentMismatch { expected: 1, found: f.exponent });
        }
        Ok(Self::from_parts(&f.ctx, vec![f.carrier.clone()], vec![f.map.clone()]))
    }

    pub fn context(&self) -> &EndoContext {
        &self.ctx
    }

    pub fn len(&self) -> usize {
        self.carriers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carriers.is_empty()
    }

    pub fn carriers(&self) -> &[Carrier] {
        &self.carriers
    }

    pub fn maps(&self) -> &[BimoduleMap] {
        &self.maps
    }

    pub fn step(&self, j: usize) -> Step {
        let n = self.len();
        let j = j % n;
        Step {
            exponent: 1,
            inner: self.carriers[(j + 1) % n].module().clone(),
            outer: self.carriers[j].module().clone(),
            map: self.maps[j].clone(),
        }
    }

    /// `(f_1, …, f_{n−1}, f_0)`.
    pub fn rotate(&self) -> TwistedTuple {
        let mut carriers = self.carriers.clone();
        let mut maps = self.maps.clone();
        carriers.rotate_left(1);
        maps.rotate_left(1);
        TwistedTuple::from_parts(&self.ctx, carriers, maps)
    }

    /// `Γ′(f_i, Γ′(f_{i+1}, …, f_{i+m−1}))`, indices mod `n`.
    pub fn window(&self, i: usize, m: usize) -> Result<Step> {
        if m == 0 {
            return Err(Error::InvalidParameter("empty window".into()));
        }
        let mut acc = self.step(i + m - 1);
        for j in (i..i + m - 1).rev() {
            acc = gamma_prime(&self.ctx, &self.step(j), &acc)?;
        }
        Ok(acc)
    }
}

/// `Γ(t) = Γ′(f_0, Γ′(f_1, …))`, carrier `P_0`.
pub fn gamma(t: &TwistedTuple) -> Result<TwistedEndo> {
    let step = t.window(0, t.len())?;
    Ok(TwistedEndo::from_parts(&t.ctx, t.len(), t.carriers[0].clone(), step.map))
}

/// `k` copies of an exponent-one endomorphism.
pub fn diagonal(f: &TwistedEndo, k: usize) -> Result<TwistedTuple> {
    if f.exponent != 1 {
        return Err(Error::ExponentMismatch { expected: 1, found: f.exponent });
    }
    if k == 0 {
        return Err(Error::InvalidParameter("diagonal needs k ≥ 1".into()));
    }
    Ok(TwistedTuple::from_parts(&f.ctx, vec![f.carrier.clone(); k], vec![f.map.clone(); k]))
}

#[cfg(test)]
mod tests;
