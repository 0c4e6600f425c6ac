//! Truncated big Witt vectors `1 + a_1 t + … + a_N t^N` over commutative
//! finite algebras and the integers, the ghost map, and the
//! characteristic series of endomorphisms.

use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::Zero;

use crate::algebra::FinAlgebra;
use crate::arith::Int;
use crate::dualizable::RingMatrix;
use crate::error::{Error, Result};
use crate::lattice::FinAbGroup;
use crate::matrix::IntMatrix;

/// Default truncation bound.
pub const DEFAULT_BOUND: usize = 8;

/// `1 + a_1 t + … + a_N t^N` over a commutative base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittVector {
    base: FinAlgebra,
    coeffs: Vec<Vec<Int>>,
}

/// Ghost components `g_1, …, g_N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GhostVector {
    base: FinAlgebra,
    comps: Vec<Vec<Int>>,
}

fn require_commutative(base: &FinAlgebra) -> Result<()> {
    if base.is_commutative() {
        Ok(())
    } else {
        Err(Error::NotCommutative)
    }
}

impl WittVector {
    pub fn new(base: &FinAlgebra, coeffs: Vec<Vec<Int>>) -> Result<Self> {
        require_commutative(base)?;
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter("truncation bound must be at least 1".into()));
        }
        if coeffs.iter().any(|c| c.len() != base.rank()) {
            return Err(Error::Dimension("coefficient with the wrong number of coordinates".into()));
        }
        let coeffs = coeffs.into_iter().map(|c| base.additive().reduced(c)).collect();
        Ok(WittVector { base: base.clone(), coeffs })
    }

    /// Integer coefficients over a base of rank one (the integers or `Z/m`).
    pub fn from_ints(base: &FinAlgebra, coeffs: &[i64]) -> Result<Self> {
        if base.rank() != 1 {
            return Err(Error::Dimension("integer coefficients need a base of rank one".into()));
        }
        Self::new(base, coeffs.iter().map(|&c| vec![Int::from(c)]).collect())
    }

    /// The unit series `1`.
    pub fn one(base: &FinAlgebra, bound: usize) -> Result<Self> {
        Self::new(base, vec![base.zero(); bound])
    }

    pub fn base(&self) -> &FinAlgebra {
        &self.base
    }

    pub fn bound(&self) -> usize {
        self.coeffs.len()
    }

    /// `a_1, …, a_N`.
    pub fn coeffs(&self) -> &[Vec<Int>] {
        &self.coeffs
    }

    /// `1, a_1, …, a_N`.
    pub fn series(&self) -> Vec<Vec<Int>> {
        let mut s = vec![self.base.one().to_vec()];
        s.extend(self.coeffs.iter().cloned());
        s
    }

    fn from_series(base: &FinAlgebra, s: Vec<Vec<Int>>) -> Self {
        WittVector { base: base.clone(), coeffs: s.into_iter().skip(1).collect() }
    }

    fn check_pair(&self, other: &WittVector) -> Result<()> {
        if self.base != other.base {
            return Err(Error::RingMismatch("Witt vectors over different bases".into()));
        }
        if self.bound() != other.bound() {
            return Err(Error::Dimension("Witt vectors with different bounds".into()));
        }
        Ok(())
    }

    /// Witt addition: the product of series.
    pub fn add(&self, other: &WittVector) -> Result<WittVector> {
        self.check_pair(other)?;
        let s = series_mul(&self.base, &self.series(), &other.series(), self.bound());
        Ok(Self::from_series(&self.base, s))
    }

    /// Additive inverse: the inverse series.
    pub fn neg(&self) -> WittVector {
        Self::from_series(&self.base, series_inv(&self.base, &self.series(), self.bound()))
    }

    pub fn ghost(&self) -> GhostVector {
        let a = &self.base;
        let mut g: Vec<Vec<Int>> = Vec::with_capacity(self.bound());
        for n in 1..=self.bound() {
            let mut x = a.additive().scale(&Int::from(n), &self.coeffs[n - 1]);
            for j in 1..n {
                x = a.sub(&x, &a.mul(&self.coeffs[j - 1], &g[n - j - 1]));
            }
            g.push(x);
        }
        GhostVector { base: a.clone(), comps: g }
    }

    /// Witt multiplication through ghost components of integral lifts.
    pub fn mul(&self, other: &WittVector) -> Result<WittVector> {
        self.check_pair(other)?;
        let lift = integral_lift(&self.base)?;
        let gu = lift_to(&lift, self).ghost();
        let gv = lift_to(&lift, other).ghost();
        let prod: Vec<Vec<Int>> = gu.comps.iter().zip(&gv.comps).map(|(x, y)| lift.mul(x, y)).collect();
        let w = GhostVector { base: lift.clone(), comps: prod }.to_witt()?;
        WittVector::new(&self.base, w.coeffs)
    }

    /// `F_n` with `g_m(F_n w) = g_{mn}(w)`; the bound drops to `⌊N / n⌋`.
    pub fn frobenius(&self, n: usize) -> Result<WittVector> {
        if n == 0 || self.bound() / n == 0 {
            return Err(Error::InvalidParameter("Frobenius index exceeds the truncation bound".into()));
        }
        let lift = integral_lift(&self.base)?;
        let g = lift_to(&lift, self).ghost();
        let comps = (1..=self.bound() / n).map(|m| g.comps[m * n - 1].clone()).collect();
        let w = GhostVector { base: lift, comps }.to_witt()?;
        WittVector::new(&self.base, w.coeffs)
    }

    /// `V_n(w)(t) = w(t^n)`, same bound.
    pub fn verschiebung(&self, n: usize) -> Result<WittVector> {
        if n == 0 {
            return Err(Error::InvalidParameter("Verschiebung index must be positive".into()));
        }
        let mut coeffs = vec![self.base.zero(); self.bound()];
        for (k, c) in self.coeffs.iter().enumerate() {
            let idx = (k + 1) * n;
            if idx <= self.bound() {
                coeffs[idx - 1] = c.clone();
            }
        }
        Ok(WittVector { base: self.base.clone(), coeffs })
    }
}

impl GhostVector {
    pub fn new(base: &FinAlgebra, comps: Vec<Vec<Int>>) -> Result<Self> {
        require_commutative(base)?;
        if comps.iter().any(|c| c.len() != base.rank()) {
            return Err(Error::Dimension("component with the wrong number of coordinates".into()));
        }
        let comps = comps.into_iter().map(|c| base.additive().reduced(c)).collect();
        Ok(GhostVector { base: base.clone(), comps })
    }

    pub fn base(&self) -> &FinAlgebra {
        &self.base
    }

    pub fn components(&self) -> &[Vec<Int>] {
        &self.comps
    }

    pub fn add(&self, other: &GhostVector) -> Result<GhostVector> {
        if self.base != other.base || self.comps.len() != other.comps.len() {
            return Err(Error::Dimension("ghost vectors of different shapes".into()));
        }
        let comps = self.comps.iter().zip(&other.comps).map(|(x, y)| self.base.add(x, y)).collect();
        Ok(GhostVector { base: self.base.clone(), comps })
    }

    /// Inverts the ghost recurrence, `a_n = (g_n + Σ_{j<n} a_j g_{n−j}) / n`.
    /// Needs a torsion-free base; fails when a division is not exact.
    pub fn to_witt(&self) -> Result<WittVector> {
        let a = &self.base;
        if a.additive().factors().iter().any(|d| !d.is_zero()) {
            return Err(Error::InvalidParameter("ghost inversion needs a torsion-free base".into()));
        }
        let mut coeffs: Vec<Vec<Int>> = Vec::with_capacity(self.comps.len());
        for n in 1..=self.comps.len() {
            let mut x = self.comps[n - 1].clone();
            for j in 1..n {
                x = a.add(&x, &a.mul(&coeffs[j - 1], &self.comps[n - j - 1]));
            }
            let d = Int::from(n);
            let mut q = Vec::with_capacity(x.len());
            for c in &x {
                let (qq, r) = c.div_rem(&d);
                if !r.is_zero() {
                    return Err(Error::IntegralityViolated { index: n });
                }
                q.push(qq);
            }
            coeffs.push(q);
        }
        WittVector::new(a, coeffs)
    }
}

/// The torsion-free algebra with the same structure constants, when those
/// define a ring over `Z`.
pub fn integral_lift(base: &FinAlgebra) -> Result<FinAlgebra> {
    require_commutative(base)?;
    if base.additive().factors().iter().all(Int::is_zero) {
        return Ok(base.clone());
    }
    let k = base.rank();
    FinAlgebra::named(
        &alloc::format!("lift({})", base.name()),
        FinAbGroup::free(k),
        base.structure().to_vec(),
        base.one().to_vec(),
    )
    .map_err(|_| Error::InvalidParameter("structure constants do not lift to the integers".into()))
}

fn lift_to(lift: &FinAlgebra, w: &WittVector) -> WittVector {
    WittVector { base: lift.clone(), coeffs: w.coeffs.clone() }
}

/// Product of truncated series (index 0 is the constant term).
pub fn series_mul(a: &FinAlgebra, x: &[Vec<Int>], y: &[Vec<Int>], bound: usize) -> Vec<Vec<Int>> {
    let mut out = vec![a.zero(); bound + 1];
    for (i, xi) in x.iter().enumerate().take(bound + 1) {
        if xi.iter().all(Zero::is_zero) {
            continue;
        }
        for (j, yj) in y.iter().enumerate().take(bound + 1 - i) {
            out[i + j] = a.add(&out[i + j], &a.mul(xi, yj));
        }
    }
    out
}

/// Inverse of a series with constant term one.
pub fn series_inv(a: &FinAlgebra, x: &[Vec<Int>], bound: usize) -> Vec<Vec<Int>> {
    let mut out = vec![a.zero(); bound + 1];
    out[0] = a.one().to_vec();
    for n in 1..=bound {
        let mut acc = a.zero();
        for k in 1..=n.min(x.len() - 1) {
            acc = a.add(&acc, &a.mul(&x[k], &out[n - k]));
        }
        out[n] = a.neg(&acc);
    }
    out
}

/// Coefficients `c_0 = 1, c_1, …, c_k` of `det(I − t·f)` by the
/// division-free Berkowitz algorithm.
pub fn det_one_minus_tf(f: &RingMatrix) -> Result<Vec<Vec<Int>>> {
    let a = f.ring();
    require_commutative(a)?;
    if f.rows() != f.cols() {
        return Err(Error::Dimension("characteristic series needs a square matrix".into()));
    }
    let n = f.rows();
    // Characteristic polynomial det(xI − f) = Σ p_i x^{n−i}, built up over
    // leading principal submatrices.
    let mut p: Vec<Vec<Int>> = vec![a.one().to_vec()];
    for r in 0..n {
        let arr = f.entry(r, r).to_vec();
        let row: Vec<Vec<Int>> = (0..r).map(|j| f.entry(r, j).to_vec()).collect();
        let col: Vec<Vec<Int>> = (0..r).map(|i| f.entry(i, r).to_vec()).collect();
        // Toeplitz column: 1, −a_rr, −R·C, −R·A·C, …
        let mut t = vec![a.one().to_vec(), a.neg(&arr)];
        let mut v = col;
        for _ in 0..r {
            t.push(a.neg(&dot(a, &row, &v)));
            v = (0..r)
                .map(|i| dot(a, &(0..r).map(|j| f.entry(i, j).to_vec()).collect::<Vec<_>>(), &v))
                .collect();
        }
        let mut q = vec![a.zero(); r + 2];
        for (i, qi) in q.iter_mut().enumerate() {
            for k in 0..=i.min(r) {
                if i - k < t.len() {
                    *qi = a.add(qi, &a.mul(&t[i - k], &p[k]));
                }
            }
        }
        p = q;
    }
    Ok(p)
}

fn dot(a: &FinAlgebra, x: &[Vec<Int>], y: &[Vec<Int>]) -> Vec<Int> {
    let mut acc = a.zero();
    for (u, w) in x.iter().zip(y) {
        acc = a.add(&acc, &a.mul(u, w));
    }
    acc
}

/// `ch(f) = det(I − t·f)^{-1}` truncated at `bound`, so that
/// `ghost(ch f)_n = tr(f^n)`.
pub fn ch(f: &RingMatrix, bound: usize) -> Result<WittVector> {
    let a = f.ring();
    let d = det_one_minus_tf(f)?;
    WittVector::new(a, series_inv(a, &d, bound).into_iter().skip(1).collect())
}

/// [`ch`] of an integer matrix.
pub fn ch_integer(f: &IntMatrix, bound: usize) -> Result<WittVector> {
    let z = FinAlgebra::integers();
    let entries = f.data().iter().map(|x| vec![x.clone()]).collect();
    ch(&RingMatrix::new(&z, f.rows(), f.cols(), entries)?, bound)
}

#[cfg(test)]
mod tests;
