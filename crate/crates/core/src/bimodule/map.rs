use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use super::Bimodule;
use crate::arith::Int;
use crate::error::{Error, Result};
use crate::lattice::solve;
use crate::matrix::IntMatrix;

/// A homomorphism of bimodules, stored as a matrix on normal coordinates
/// with rows reduced modulo the target's invariant factors.
#[derive(Clone)]
pub struct BimoduleMap {
    source: Bimodule,
    target: Bimodule,
    matrix: IntMatrix,
}

impl fmt::Debug for BimoduleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} -> {:?}: {:?}", self.source.group(), self.target.group(), self.matrix)
    }
}

impl PartialEq for BimoduleMap {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.target == other.target && self.matrix == other.matrix
    }
}

impl Eq for BimoduleMap {}

impl BimoduleMap {
    /// Validated constructor: the matrix must descend to the quotients and
    /// commute with both actions.
    pub fn new(source: Bimodule, target: Bimodule, matrix: IntMatrix) -> Result<Self> {
        let f = Self::from_parts(source, target, matrix);
        f.check()?;
        Ok(f)
    }

    /// Constructor without linearity checks.
    pub fn from_parts(source: Bimodule, target: Bimodule, matrix: IntMatrix) -> Self {
        assert_eq!(
            (matrix.rows(), matrix.cols()),
            (target.rank(), source.rank()),
            "map matrix must be rank(target) × rank(source)"
        );
        let matrix = target.group().reduced_rows(matrix);
        BimoduleMap { source, target, matrix }
    }

    /// Additive map that is only known to be linear on one side (or not at all).
    pub fn additive(source: Bimodule, target: Bimodule, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.rank() || matrix.cols() != source.rank() {
            return Err(Error::Dimension(format!(
                "expected {}×{} matrix, got {}×{}",
                target.rank(),
                source.rank(),
                matrix.rows(),
                matrix.cols()
            )));
        }
        if !target.group().is_hom_from(source.group(), &matrix) {
            return Err(Error::NotBimoduleMap("matrix does not descend to the quotient".into()));
        }
        Ok(Self::from_parts(source, target, matrix))
    }

    pub fn zero(source: &Bimodule, target: &Bimodule) -> Self {
        Self::from_parts(source.clone(), target.clone(), IntMatrix::zeros(target.rank(), source.rank()))
    }

    pub fn source(&self) -> &Bimodule {
        &self.source
    }

    pub fn target(&self) -> &Bimodule {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// Checks that the matrix descends and commutes with generator actions.
    pub fn check(&self) -> Result<()> {
        let (s, t) = (&self.source, &self.target);
        if s.left_ring() != t.left_ring() || s.right_ring() != t.right_ring() {
            return Err(Error::RingMismatch("source and target live over different rings".into()));
        }
        if !t.group().is_hom_from(s.group(), &self.matrix) {
            return Err(Error::NotBimoduleMap("matrix does not descend to the quotient".into()));
        }
        for &g in s.left_ring().generators() {
            if !self.commutes(&s.left_actions()[g], &t.left_actions()[g]) {
                return Err(Error::NotBimoduleMap(format!("fails left linearity at basis {g}")));
            }
        }
        for &g in s.right_ring().generators() {
            if !self.commutes(&s.right_actions()[g], &t.right_actions()[g]) {
                return Err(Error::NotBimoduleMap(format!("fails right linearity at basis {g}")));
            }
        }
        Ok(())
    }

    fn commutes(&self, a_src: &IntMatrix, a_tgt: &IntMatrix) -> bool {
        let g = self.target.group();
        g.reduced_rows(self.matrix.mul(a_src)) == g.reduced_rows(a_tgt.mul(&self.matrix))
    }

    pub fn is_left_linear(&self) -> bool {
        let (s, t) = (&self.source, &self.target);
        s.left_ring().generators().iter().all(|&g| self.commutes(&s.left_actions()[g], &t.left_actions()[g]))
    }

    pub fn is_right_linear(&self) -> bool {
        let (s, t) = (&self.source, &self.target);
        s.right_ring().generators().iter().all(|&g| self.commutes(&s.right_actions()[g], &t.right_actions()[g]))
    }

    pub fn apply(&self, x: &[Int]) -> Vec<Int> {
        self.target.group().reduced(self.matrix.mul_vec(x))
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &BimoduleMap) -> Result<BimoduleMap> {
        if first.target != self.source {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose {:?} after {:?}",
                self.source, first.target
            )));
        }
        Ok(Self::from_parts(first.source.clone(), self.target.clone(), self.matrix.mul(&first.matrix)))
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &BimoduleMap) -> Result<BimoduleMap> {
        then.after(self)
    }

    fn same_shape(&self, other: &BimoduleMap) -> Result<()> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::ShapeMismatch("maps have different source or target".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &BimoduleMap) -> Result<BimoduleMap> {
        self.same_shape(other)?;
        Ok(Self::from_parts(self.source.clone(), self.target.clone(), self.matrix.add(&other.matrix)))
    }

    pub fn sub(&self, other: &BimoduleMap) -> Result<BimoduleMap> {
        self.same_shape(other)?;
        Ok(Self::from_parts(self.source.clone(), self.target.clone(), self.matrix.sub(&other.matrix)))
    }

    pub fn neg(&self) -> BimoduleMap {
        Self::from_parts(self.source.clone(), self.target.clone(), self.matrix.neg())
    }

    pub fn scale(&self, c: &Int) -> BimoduleMap {
        Self::from_parts(self.source.clone(), self.target.clone(), self.matrix.scale(c))
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// Same matrix between relabelled but structurally equal objects.
    pub fn retarget(&self, source: &Bimodule, target: &Bimodule) -> Result<BimoduleMap> {
        if *source != self.source || *target != self.target {
            return Err(Error::ShapeMismatch("retarget needs structurally equal objects".into()));
        }
        Ok(Self::from_parts(source.clone(), target.clone(), self.matrix.clone()))
    }

    /// Two-sided inverse, if the map is an isomorphism.
    pub fn inverse(&self) -> Option<BimoduleMap> {
        let (s, t) = (self.source.group(), self.target.group());
        // g with f·g = id on the target: solve column by column.
        let mut cols = Vec::with_capacity(t.rank());
        for j in 0..t.rank() {
            let sol = solve(&self.matrix, &t.basis(j), t.factors())?;
            cols.push(s.reduced(sol.particular));
        }
        let g = IntMatrix::from_columns(s.rank(), &cols);
        if !t.is_hom_from(s, &self.matrix) || !s.is_hom_from(t, &g) {
            return None;
        }
        let back = s.reduced_rows(g.mul(&self.matrix));
        if back != IntMatrix::identity(s.rank()) {
            return None;
        }
        Some(Self::from_parts(self.target.clone(), self.source.clone(), g))
    }
}
