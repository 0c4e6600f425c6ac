//! Finitely generated projective modules given by idempotents, their duals,
//! coevaluation and evaluation.
//!
//! Convention: `P = e·S^k` is a module of columns. `S` acts on the right
//! entrywise, `R` acts on the left through `ρ: R → e·M_k(S)·e`. The dual is
//! the module of rows `S^k·e`, paired with columns by `φ ⊗ p ↦ φ·e·p`.

mod duality;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

pub use duality::DualityData;

use crate::algebra::FinAlgebra;
use crate::arith::Int;
use crate::bimodule::Bimodule;
use crate::error::{Error, Result};
use crate::lattice::{cokernel_with_torsion, Presentation};
use crate::matrix::IntMatrix;

/// A matrix with entries in a [`FinAlgebra`], row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingMatrix {
    ring: FinAlgebra,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<Int>>,
}

impl RingMatrix {
    pub fn new(ring: &FinAlgebra, rows: usize, cols: usize, entries: Vec<Vec<Int>>) -> Result<Self> {
        if entries.len() != rows * cols || entries.iter().any(|e| e.len() != ring.rank()) {
            return Err(Error::Dimension(format!("expected {rows}×{cols} entries of length {}", ring.rank())));
        }
        let entries = entries.into_iter().map(|e| ring.additive().reduced(e)).collect();
        Ok(RingMatrix { ring: ring.clone(), rows, cols, entries })
    }

    pub fn zeros(ring: &FinAlgebra, rows: usize, cols: usize) -> Self {
        RingMatrix { ring: ring.clone(), rows, cols, entries: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: &FinAlgebra, k: usize) -> Self {
        let mut m = Self::zeros(ring, k, k);
        for i in 0..k {
            m.entries[i * k + i] = ring.one().to_vec();
        }
        m
    }

    /// `x` times the identity.
    pub fn scalar(ring: &FinAlgebra, k: usize, x: &[Int]) -> Self {
        let mut m = Self::zeros(ring, k, k);
        for i in 0..k {
            m.set(i, i, x.to_vec());
        }
        m
    }

    pub fn ring(&self) -> &FinAlgebra {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &[Int] {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Vec<Int>) {
        self.entries[i * self.cols + j] = self.ring.additive().reduced(x);
    }

    pub fn entries(&self) -> &[Vec<Int>] {
        &self.entries
    }

    pub fn mul(&self, other: &RingMatrix) -> RingMatrix {
        assert_eq!(self.cols, other.rows, "ring matrix product dimensions");
        let r = &self.ring;
        let mut out = Self::zeros(r, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = r.zero();
                for l in 0..self.cols {
                    acc = r.add(&acc, &r.mul(self.entry(i, l), other.entry(l, j)));
                }
                out.entries[i * other.cols + j] = acc;
            }
        }
        out
    }

    fn zip(&self, other: &RingMatrix, f: impl Fn(&[Int], &[Int]) -> Vec<Int>) -> RingMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "ring matrix shapes");
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect();
        RingMatrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, entries }
    }

    pub fn add(&self, other: &RingMatrix) -> RingMatrix {
        self.zip(other, |a, b| self.ring.add(a, b))
    }

    pub fn sub(&self, other: &RingMatrix) -> RingMatrix {
        self.zip(other, |a, b| self.ring.sub(a, b))
    }

    pub fn scale(&self, c: &Int) -> RingMatrix {
        let g = self.ring.additive();
        let entries = self.entries.iter().map(|a| g.scale(c, a)).collect();
        RingMatrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, entries }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| self.ring.additive().is_zero(e))
    }

    /// Block matrix `[[a, b], [c, d]]`.
    pub fn blocks(a: &RingMatrix, b: &RingMatrix, c: &RingMatrix, d: &RingMatrix) -> RingMatrix {
        let (r1, c1) = (a.rows, a.cols);
        let (rows, cols) = (r1 + c.rows, c1 + b.cols);
        let mut out = Self::zeros(&a.ring, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let e = match (i < r1, j < c1) {
                    (true, true) => a.entry(i, j),
                    (true, false) => b.entry(i, j - c1),
                    (false, true) => c.entry(i - r1, j),
                    (false, false) => d.entry(i - r1, j - c1),
                };
                out.entries[i * cols + j] = e.to_vec();
            }
        }
        out
    }

    /// Block-diagonal `[[a, 0], [0, d]]`.
    pub fn diag(a: &RingMatrix, d: &RingMatrix) -> RingMatrix {
        let b = Self::zeros(&a.ring, a.rows, d.cols);
        let c = Self::zeros(&a.ring, d.rows, a.cols);
        Self::blocks(a, &b, &c, d)
    }

    /// The block with top-left corner `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> RingMatrix {
        let mut out = Self::zeros(&self.ring, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.entries[i * cols + j] = self.entry(r0 + i, c0 + j).to_vec();
            }
        }
        out
    }

    /// Additive matrix of `v ↦ A·v` from `S^cols` to `S^rows` (columns,
    /// coordinate `a·rank(S) + c`).
    pub fn left_mult_matrix(&self) -> IntMatrix {
        let rs = self.ring.rank();
        let mut out = IntMatrix::zeros(self.rows * rs, self.cols * rs);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set_block(i * rs, j * rs, &self.ring.left_matrix(self.entry(i, j)));
            }
        }
        out
    }

    /// Additive matrix of `w ↦ w·A` from `S^rows` to `S^cols` (rows).
    pub fn right_mult_matrix(&self) -> IntMatrix {
        let rs = self.ring.rank();
        let mut out = IntMatrix::zeros(self.cols * rs, self.rows * rs);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set_block(j * rs, i * rs, &self.ring.right_matrix(self.entry(i, j)));
            }
        }
        out
    }
}

/// A projective `R`-`S`-bimodule presented as `e·S^k` with the left action
/// through a ring homomorphism `ρ: R → e·M_k(S)·e` (given on the basis of `R`).
#[derive(Clone, Debug)]
pub struct ProjectivePresentation {
    left: FinAlgebra,
    right: FinAlgebra,
    idempotent: RingMatrix,
    left_hom: Vec<RingMatrix>,
}

impl ProjectivePresentation {
    pub fn new(left: &FinAlgebra, right: &FinAlgebra, idempotent: RingMatrix, left_hom: Vec<RingMatrix>) -> Result<Self> {
        let pp = ProjectivePresentation { left: left.clone(), right: right.clone(), idempotent, left_hom };
        pp.validate()?;
        Ok(pp)
    }

    /// `S^k` with `R = S` acting diagonally.
    pub fn free(s: &FinAlgebra, k: usize) -> Self {
        let left_hom = (0..s.rank()).map(|i| RingMatrix::scalar(s, k, &s.basis(i))).collect();
        ProjectivePresentation { left: s.clone(), right: s.clone(), idempotent: RingMatrix::identity(s, k), left_hom }
    }

    /// The rank-one module `S` with left action through a ring endomorphism
    /// `φ: R → S` (matrix on bases).
    pub fn twisted(r: &FinAlgebra, s: &FinAlgebra, phi: &IntMatrix) -> Result<Self> {
        let left_hom = (0..r.rank()).map(|i| RingMatrix::scalar(s, 1, &phi.column(i))).collect();
        Self::new(r, s, RingMatrix::identity(s, 1), left_hom)
    }

    pub fn left_ring(&self) -> &FinAlgebra {
        &self.left
    }

    pub fn right_ring(&self) -> &FinAlgebra {
        &self.right
    }

    pub fn size(&self) -> usize {
        self.idempotent.rows()
    }

    pub fn idempotent(&self) -> &RingMatrix {
        &self.idempotent
    }

    pub fn left_hom(&self) -> &[RingMatrix] {
        &self.left_hom
    }

    /// `ρ(r)` for an arbitrary element of `R`.
    pub fn rho(&self, r: &[Int]) -> RingMatrix {
        let mut out = RingMatrix::zeros(&self.right, self.size(), self.size());
        for (c, m) in r.iter().zip(&self.left_hom) {
            out = out.add(&m.scale(c));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidPresentation(m.into()));
        let (e, k) = (&self.idempotent, self.size());
        if e.rows() != e.cols() || e.ring() != &self.right || self.left_hom.len() != self.left.rank() {
            return bad("idempotent must live over the right ring, one matrix per left basis element");
        }
        if self.left_hom.iter().any(|m| m.rows() != k || m.cols() != k || m.ring() != &self.right) {
            return bad("left action matrices have the wrong size");
        }
        if e.mul(e) != *e {
            return bad("e·e ≠ e");
        }
        for m in &self.left_hom {
            if e.mul(m).mul(e) != *m {
                return bad("left action does not land in the corner e·M_k(S)·e");
            }
        }
        if self.rho(self.left.one()) != *e {
            return bad("the unit of the left ring does not map to e");
        }
        let r = &self.left;
        for i in 0..r.rank() {
            for j in 0..r.rank() {
                if self.left_hom[i].mul(&self.left_hom[j]) != self.rho(&r.structure()[i][j]) {
                    return bad("left action is not multiplicative");
                }
            }
        }
        Ok(())
    }

    /// The bimodule `e·S^k`, presented as `S^k / (1 − e)·S^k`.
    pub fn materialize(&self) -> Bimodule {
        self.materialize_with_presentation().0
    }

    /// [`ProjectivePresentation::materialize`] together with the quotient map from `S^k`.
    pub fn materialize_with_presentation(&self) -> (Bimodule, Presentation) {
        let (s, k) = (&self.right, self.size());
        let comp = RingMatrix::identity(s, k).sub(&self.idempotent);
        let pres = cokernel_with_torsion(&self.free_torsion(), &comp.left_mult_matrix());
        let left = self.left_hom.iter().map(|m| transport(&pres, &m.left_mult_matrix())).collect();
        let right = (0..s.rank()).map(|c| transport(&pres, &repeat_block(s.right_basis_matrix(c), k))).collect();
        let module = Bimodule::from_parts("P", self.left.clone(), s.clone(), pres.group.clone(), left, right);
        (module, pres)
    }

    /// The dual `S^k·e` of rows, presented as `S^k / S^k·(1 − e)`; an `S`-`R`-bimodule.
    pub fn materialize_dual(&self) -> (Bimodule, Presentation) {
        let (s, k) = (&self.right, self.size());
        let comp = RingMatrix::identity(s, k).sub(&self.idempotent);
        let pres = cokernel_with_torsion(&self.free_torsion(), &comp.right_mult_matrix());
        let left = (0..s.rank()).map(|c| transport(&pres, &repeat_block(s.left_basis_matrix(c), k))).collect();
        let right = self.left_hom.iter().map(|m| transport(&pres, &m.right_mult_matrix())).collect();
        let module = Bimodule::from_parts("P*", s.clone(), self.left.clone(), pres.group.clone(), left, right);
        (module, pres)
    }

    fn free_torsion(&self) -> Vec<Int> {
        (0..self.size()).flat_map(|_| self.right.additive().factors().iter().cloned()).collect()
    }

    /// Block-diagonal sum of two presentations over the same rings.
    pub fn direct_sum(&self, other: &ProjectivePresentation) -> Result<Self> {
        if self.left != other.left || self.right != other.right {
            return Err(Error::RingMismatch("presentations over different rings".into()));
        }
        let s = &self.right;
        let sum = RingMatrix::diag;
        let e = sum(&self.idempotent, &other.idempotent);
        let hom = self.left_hom.iter().zip(&other.left_hom).map(|(a, b)| sum(a, b)).collect();
        ProjectivePresentation::new(&self.left, s, e, hom)
    }

    /// Replace the left action, keeping the idempotent.
    pub fn with_left_hom(&self, left_hom: Vec<RingMatrix>) -> Result<Self> {
        Self::new(&self.left, &self.right, self.idempotent.clone(), left_hom)
    }
}

fn transport(pres: &Presentation, m: &IntMatrix) -> IntMatrix {
    pres.to_normal.mul(&m.mul(&pres.from_normal))
}

fn repeat_block(m: &IntMatrix, k: usize) -> IntMatrix {
    let blocks: Vec<&IntMatrix> = (0..k).map(|_| m).collect();
    IntMatrix::block_diag(&blocks)
}
