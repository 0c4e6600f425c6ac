//! Shadows `⟨⟨M⟩⟩ = M / (rm − mr)`, maps between them, and the traces of
//! twisted endomorphisms.

mod trace;

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::Int;
use crate::bimodule::{Bimodule, BimoduleMap, Fault, TensorCache};
use crate::error::{Error, Result};
use crate::lattice::{cokernel_with_torsion, FinAbGroup, Presentation};
use crate::matrix::IntMatrix;

pub use trace::{
    b_map, phi, phi_inverse, trace, trace_forget_left, trace_literal, trace_power, trace_sequence, transfer,
    forget_quotient, iterated_trace,
};

/// `⟨⟨M⟩⟩` for an `R`-`R`-bimodule `M`, with the quotient map from `M`.
pub struct Shadow {
    source: Bimodule,
    pres: Presentation,
}

impl fmt::Debug for Shadow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨⟨{}⟩⟩ = {:?}", self.source.name(), self.pres.group)
    }
}

impl Shadow {
    fn compute(m: &Bimodule) -> Result<Self> {
        let r = m.left_ring();
        if r != m.right_ring() {
            return Err(Error::RingMismatch("shadows need an R-R-bimodule".into()));
        }
        let k = m.rank();
        let mut rel = IntMatrix::zeros(k, 0);
        for &g in r.generators() {
            rel = rel.hstack(&m.left_actions()[g].sub(&m.right_actions()[g]));
        }
        let pres = cokernel_with_torsion(m.group().factors(), &rel);
        Ok(Shadow { source: m.clone(), pres })
    }

    pub fn source(&self) -> &Bimodule {
        &self.source
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.pres.group
    }

    pub fn rank(&self) -> usize {
        self.pres.rank()
    }

    /// `rank(⟨⟨M⟩⟩) × rank(M)` matrix of the quotient map.
    pub fn projection(&self) -> &IntMatrix {
        &self.pres.to_normal
    }

    /// Class of an element of `M`.
    pub fn project(&self, x: &[Int]) -> Vec<Int> {
        self.pres.project(x)
    }

    /// A representative in `M` of a class.
    pub fn lift(&self, u: &[Int]) -> Vec<Int> {
        self.pres.lift(u)
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }
}

/// The shadow of `M`, cached by identity.
pub fn shadow(cache: &TensorCache, m: &Bimodule) -> Result<Arc<Shadow>> {
    if let Some(s) = cache.shadows.read().get(&m.id()) {
        return Ok(s.clone());
    }
    let s = Arc::new(Shadow::compute(m)?);
    let mut w = cache.shadows.write();
    Ok(w.entry(m.id()).or_insert(s).clone())
}

/// A homomorphism of shadow groups on normal coordinates.
#[derive(Clone)]
pub struct ShadowMap {
    source: Arc<Shadow>,
    target: Arc<Shadow>,
    matrix: IntMatrix,
}

impl fmt::Debug for ShadowMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} -> {:?}: {:?}", self.source.group(), self.target.group(), self.matrix)
    }
}

impl PartialEq for ShadowMap {
    fn eq(&self, other: &Self) -> bool {
        self.source.source == other.source.source
            && self.target.source == other.target.source
            && self.matrix == other.matrix
    }
}

impl Eq for ShadowMap {}

impl ShadowMap {
    /// Checked constructor: the matrix must be a homomorphism of the groups.
    pub fn new(source: Arc<Shadow>, target: Arc<Shadow>, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.rank() || matrix.cols() != source.rank() {
            return Err(Error::Dimension("shadow map has the wrong shape".into()));
        }
        if !target.group().is_hom_from(source.group(), &matrix) {
            return Err(Error::NotBimoduleMap("matrix does not descend to the shadows".into()));
        }
        Ok(Self::from_parts(source, target, matrix))
    }

    pub(crate) fn from_parts(source: Arc<Shadow>, target: Arc<Shadow>, matrix: IntMatrix) -> Self {
        let matrix = target.group().reduced_rows(matrix);
        ShadowMap { source, target, matrix }
    }

    /// `⟨⟨f⟩⟩` for a map `f: M → M′` that respects commutators (for
    /// instance an `R`-`R`-bimodule map).
    pub fn induced(cache: &TensorCache, f: &BimoduleMap) -> Result<Self> {
        let s = shadow(cache, f.source())?;
        let t = shadow(cache, f.target())?;
        let m = t.projection().mul(&f.matrix().mul(&s.pres.from_normal));
        Self::new(s, t, m)
    }

    pub fn identity(s: &Arc<Shadow>) -> Self {
        Self::from_parts(s.clone(), s.clone(), IntMatrix::identity(s.rank()))
    }

    pub fn zero(source: &Arc<Shadow>, target: &Arc<Shadow>) -> Self {
        Self::from_parts(source.clone(), target.clone(), IntMatrix::zeros(target.rank(), source.rank()))
    }

    pub fn source(&self) -> &Arc<Shadow> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Shadow> {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, u: &[Int]) -> Vec<Int> {
        self.target.group().reduced(self.matrix.mul_vec(u))
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &ShadowMap) -> Result<ShadowMap> {
        if first.target.source != self.source.source {
            return Err(Error::ShapeMismatch("shadow maps are not composable".into()));
        }
        Ok(Self::from_parts(first.source.clone(), self.target.clone(), self.matrix.mul(&first.matrix)))
    }

    fn same_shape(&self, other: &ShadowMap) -> Result<()> {
        if self.source.source != other.source.source || self.target.source != other.target.source {
            return Err(Error::ShapeMismatch("shadow maps between different groups".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &ShadowMap) -> Result<ShadowMap> {
        self.same_shape(other)?;
        Ok(Self::from_parts(self.source.clone(), self.target.clone(), self.matrix.add(&other.matrix)))
    }

    pub fn sub(&self, other: &ShadowMap) -> Result<ShadowMap> {
        self.same_shape(other)?;
        Ok(Self::from_parts(self.source.clone(), self.target.clone(), self.matrix.sub(&other.matrix)))
    }

    pub fn scale(&self, c: &Int) -> ShadowMap {
        Self::from_parts(self.source.clone(), self.target.clone(), self.matrix.scale(c))
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// `self^k` for an endomorphism.
    pub fn pow(&self, k: usize) -> Result<ShadowMap> {
        let mut acc = Self::identity(&self.source);
        for _ in 0..k {
            acc = self.after(&acc)?;
        }
        Ok(acc)
    }

    /// Whether the matrix is invertible on the groups.
    pub fn is_isomorphism(&self) -> bool {
        let plain = |g: &FinAbGroup| {
            let z = crate::algebra::FinAlgebra::integers();
            let id = alloc::vec![IntMatrix::identity(g.rank())];
            Bimodule::from_parts("G", z.clone(), z, g.clone(), id.clone(), id)
        };
        let f = BimoduleMap::from_parts(plain(self.source.group()), plain(self.target.group()), self.matrix.clone());
        f.inverse().is_some()
    }
}

/// `θ: ⟨⟨X ⊙ Y⟩⟩ → ⟨⟨Y ⊙ X⟩⟩`, `x ⊗ y ↦ y ⊗ x`.
pub fn theta(cache: &TensorCache, x: &Bimodule, y: &Bimodule) -> Result<ShadowMap> {
    if x.left_ring() != y.right_ring() || x.right_ring() != y.left_ring() {
        return Err(Error::RingMismatch("θ needs X: R-S and Y: S-R".into()));
    }
    let txy = cache.tensor(x, y)?;
    let tyx = cache.tensor(y, x)?;
    let s = shadow(cache, txy.product())?;
    let t = shadow(cache, tyx.product())?;
    let cols: Vec<Vec<Int>> = (0..s.rank())
        .map(|u| {
            let z = s.lift(&s.group().basis(u));
            let mut acc = tyx.product().group().zero();
            for (i, j, c) in txy.lift_pairs(&z) {
                let pure = tyx.pure(&y.group().basis(j), &x.group().basis(i));
                acc = tyx.product().group().add(&acc, &tyx.product().group().scale(&c, &pure));
            }
            t.project(&acc)
        })
        .collect();
    Ok(ShadowMap::from_parts(s, t.clone(), IntMatrix::from_columns(t.rank(), &cols)))
}

/// `ς` on `⟨⟨T([M × n])⟩⟩`: `m_0 ⊗ rest ↦ rest ⊗ m_0`, through θ and a merge.
pub fn varsigma(cache: &TensorCache, m: &Bimodule, n: usize) -> Result<ShadowMap> {
    if n == 0 {
        return Err(Error::InvalidParameter("ς needs n ≥ 1".into()));
    }
    let full = cache.list(&alloc::vec![m.clone(); n])?;
    let sh = shadow(cache, &full)?;
    if n == 1 {
        return Ok(ShadowMap::identity(&sh));
    }
    let rest = alloc::vec![m.clone(); n - 1];
    let tail = cache.list(&rest)?;
    let th = theta(cache, m, &tail)?;
    if cache.fault() == Some(Fault::SkipRotationMerge) {
        let mut raw = IntMatrix::zeros(sh.rank(), sh.rank());
        let (r, c) = (th.matrix.rows().min(sh.rank()), th.matrix.cols().min(sh.rank()));
        raw.set_block(0, 0, &th.matrix.block(0, 0, r, c));
        return Ok(ShadowMap::from_parts(sh.clone(), sh, raw));
    }
    let merge = cache.merge(&rest, &[m.clone()])?;
    ShadowMap::induced(cache, &merge)?.after(&th)
}

#[cfg(test)]
mod tests;
