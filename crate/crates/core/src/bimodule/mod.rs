//! Bimodules over [`FinAlgebra`]s, their homomorphisms, balanced tensor
//! products and the structural isomorphisms between tensor shapes.

mod hom;
mod map;
mod sum;
mod tensor;

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

pub use hom::{HomSpace, KernelWitness, CokernelWitness};
pub use map::BimoduleMap;
pub use sum::DirectSumWitness;
pub use tensor::{kron_apply, Fault, TensorCache, TensorWitness};

use crate::algebra::{combine, fresh_id, FinAlgebra};
use crate::arith::Int;
use crate::error::{Error, Result};
use crate::lattice::FinAbGroup;
use crate::matrix::IntMatrix;

struct Inner {
    id: u64,
    name: String,
    left: FinAlgebra,
    right: FinAlgebra,
    group: FinAbGroup,
    left_action: Vec<IntMatrix>,
    right_action: Vec<IntMatrix>,
}

/// An `R`-`S`-bimodule: a [`FinAbGroup`] with one action matrix per basis
/// element of `R` (acting on the left) and of `S` (acting on the right).
///
/// Action matrices act on column vectors of coordinates; the right action of
/// `s` is the matrix of `m ↦ m·s`, so `Rt(s·s') = Rt(s')·Rt(s)`.
#[derive(Clone)]
pub struct Bimodule(Arc<Inner>);

impl PartialEq for Bimodule {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.group == other.0.group
                && self.0.left == other.0.left
                && self.0.right == other.0.right
                && self.0.left_action == other.0.left_action
                && self.0.right_action == other.0.right_action)
    }
}

impl Eq for Bimodule {}

impl fmt::Debug for Bimodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{:?}] over ({}, {})", self.0.name, self.0.group, self.0.left.name(), self.0.right.name())
    }
}

impl Bimodule {
    /// Validated constructor.
    pub fn new(
        left: FinAlgebra,
        right: FinAlgebra,
        group: FinAbGroup,
        left_action: Vec<IntMatrix>,
        right_action: Vec<IntMatrix>,
    ) -> Result<Self> {
        let m = Self::from_parts("M", left, right, group, left_action, right_action);
        m.validate()?;
        Ok(m)
    }

    /// Constructor without law checks; actions are reduced into the group.
    pub fn from_parts(
        name: &str,
        left: FinAlgebra,
        right: FinAlgebra,
        group: FinAbGroup,
        mut left_action: Vec<IntMatrix>,
        mut right_action: Vec<IntMatrix>,
    ) -> Self {
        for a in left_action.iter_mut().chain(right_action.iter_mut()) {
            if a.rows() == group.rank() {
                group.reduce_rows(a);
            }
        }
        Bimodule(Arc::new(Inner {
            id: fresh_id(),
            name: String::from(name),
            left,
            right,
            group,
            left_action,
            right_action,
        }))
    }

    pub fn id(&self) -> u64 {
        self.0.id
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    /// Same bimodule under a different label (and a fresh identity).
    pub fn renamed(&self, name: &str) -> Bimodule {
        Self::from_parts(
            name,
            self.0.left.clone(),
            self.0.right.clone(),
            self.0.group.clone(),
            self.0.left_action.clone(),
            self.0.right_action.clone(),
        )
    }

    pub fn left_ring(&self) -> &FinAlgebra {
        &self.0.left
    }

    pub fn right_ring(&self) -> &FinAlgebra {
        &self.0.right
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.0.group
    }

    pub fn rank(&self) -> usize {
        self.0.group.rank()
    }

    pub fn left_actions(&self) -> &[IntMatrix] {
        &self.0.left_action
    }

    pub fn right_actions(&self) -> &[IntMatrix] {
        &self.0.right_action
    }

    /// Matrix of `m ↦ r·m`.
    pub fn left_matrix(&self, r: &[Int]) -> IntMatrix {
        self.0.group.reduced_rows(combine(&self.0.left_action, r, self.rank()))
    }

    /// Matrix of `m ↦ m·s`.
    pub fn right_matrix(&self, s: &[Int]) -> IntMatrix {
        self.0.group.reduced_rows(combine(&self.0.right_action, s, self.rank()))
    }

    pub fn act_left(&self, r: &[Int], m: &[Int]) -> Vec<Int> {
        self.0.group.reduced(combine(&self.0.left_action, r, self.rank()).mul_vec(m))
    }

    pub fn act_right(&self, m: &[Int], s: &[Int]) -> Vec<Int> {
        self.0.group.reduced(combine(&self.0.right_action, s, self.rank()).mul_vec(m))
    }

    fn eq_maps(&self, a: &IntMatrix, b: &IntMatrix) -> bool {
        self.0.group.reduced_rows(a.clone()) == self.0.group.reduced_rows(b.clone())
    }

    /// Checks every bimodule law on basis elements.
    pub fn validate(&self) -> Result<()> {
        let k = self.rank();
        let (r, s) = (&self.0.left, &self.0.right);
        let bad = |msg: String| Err(Error::InvalidBimodule(msg));
        if self.0.left_action.len() != r.rank() || self.0.right_action.len() != s.rank() {
            return bad(format!("need {} left and {} right action matrices", r.rank(), s.rank()));
        }
        for a in self.0.left_action.iter().chain(&self.0.right_action) {
            if a.rows() != k || a.cols() != k {
                return bad(format!("action matrices must be {k}×{k}"));
            }
            if !self.0.group.is_hom_from(&self.0.group, a) {
                return bad("an action matrix does not respect the invariant factors".into());
            }
        }
        let id = IntMatrix::identity(k);
        if !self.eq_maps(&self.left_matrix(r.one()), &id) {
            return bad("the unit of the left ring does not act as the identity".into());
        }
        if !self.eq_maps(&self.right_matrix(s.one()), &id) {
            return bad("the unit of the right ring does not act as the identity".into());
        }
        for i in 0..r.rank() {
            for j in 0..r.rank() {
                let lhs = self.0.left_action[i].mul(&self.0.left_action[j]);
                let rhs = self.left_matrix(&r.structure()[i][j]);
                if !self.eq_maps(&lhs, &rhs) {
                    return bad(format!("left action not multiplicative on ({i}, {j})"));
                }
            }
        }
        for i in 0..s.rank() {
            for j in 0..s.rank() {
                let lhs = self.0.right_action[j].mul(&self.0.right_action[i]);
                let rhs = self.right_matrix(&s.structure()[i][j]);
                if !self.eq_maps(&lhs, &rhs) {
                    return bad(format!("right action not multiplicative on ({i}, {j})"));
                }
            }
        }
        for (i, l) in self.0.left_action.iter().enumerate() {
            for (j, rt) in self.0.right_action.iter().enumerate() {
                if !self.eq_maps(&l.mul(rt), &rt.mul(l)) {
                    return bad(format!("left basis {i} and right basis {j} actions do not commute"));
                }
            }
        }
        Ok(())
    }

    /// The ring as a bimodule over itself.
    pub fn regular(r: &FinAlgebra) -> Bimodule {
        let k = r.rank();
        let left = (0..k).map(|i| r.left_basis_matrix(i).clone()).collect();
        let right = (0..k).map(|i| r.right_basis_matrix(i).clone()).collect();
        Self::from_parts(&format!("U({})", r.name()), r.clone(), r.clone(), r.additive().clone(), left, right)
    }

    /// `_φR_ψ`: the ring with `r·x·s = φ(r)·x·ψ(s)` for ring endomorphisms φ, ψ.
    pub fn twisted(r: &FinAlgebra, phi: &IntMatrix, psi: &IntMatrix) -> Result<Bimodule> {
        if !r.is_ring_hom(r, phi) || !r.is_ring_hom(r, psi) {
            return Err(Error::InvalidParameter("twists must be ring endomorphisms".into()));
        }
        let k = r.rank();
        let left = (0..k).map(|i| r.left_matrix(&phi.column(i))).collect();
        let right = (0..k).map(|i| r.right_matrix(&psi.column(i))).collect();
        Ok(Self::from_parts(&format!("tw({})", r.name()), r.clone(), r.clone(), r.additive().clone(), left, right))
    }

    /// The zero bimodule.
    pub fn zero(left: &FinAlgebra, right: &FinAlgebra) -> Bimodule {
        let l = (0..left.rank()).map(|_| IntMatrix::zeros(0, 0)).collect();
        let r = (0..right.rank()).map(|_| IntMatrix::zeros(0, 0)).collect();
        Self::from_parts("0", left.clone(), right.clone(), FinAbGroup::trivial(), l, r)
    }

    /// Restriction of scalars along ring homomorphisms `new_left → R` and `new_right → S`.
    pub fn restrict(
        &self,
        new_left: Option<(&FinAlgebra, &IntMatrix)>,
        new_right: Option<(&FinAlgebra, &IntMatrix)>,
    ) -> Result<Bimodule> {
        let (lring, lact) = match new_left {
            Some((ring, hom)) => {
                if !ring.is_ring_hom(self.left_ring(), hom) {
                    return Err(Error::InvalidParameter("left restriction is not a ring homomorphism".into()));
                }
                (ring.clone(), (0..ring.rank()).map(|i| self.left_matrix(&hom.column(i))).collect())
            }
            None => (self.0.left.clone(), self.0.left_action.clone()),
        };
        let (rring, ract) = match new_right {
            Some((ring, hom)) => {
                if !ring.is_ring_hom(self.right_ring(), hom) {
                    return Err(Error::InvalidParameter("right restriction is not a ring homomorphism".into()));
                }
                (ring.clone(), (0..ring.rank()).map(|i| self.right_matrix(&hom.column(i))).collect())
            }
            None => (self.0.right.clone(), self.0.right_action.clone()),
        };
        let name = format!("res({})", self.0.name);
        Ok(Self::from_parts(&name, lring, rring, self.0.group.clone(), lact, ract))
    }

    /// Restrict both sides to the integers along the unit maps.
    pub fn forget_to_integers(&self, left: bool, right: bool) -> Bimodule {
        let z = FinAlgebra::integers();
        let lu = unit_map(self.left_ring());
        let ru = unit_map(self.right_ring());
        self.restrict(left.then_some((&z, &lu)), right.then_some((&z, &ru))).expect("unit maps are ring homomorphisms")
    }

    /// Identity map.
    pub fn identity(&self) -> BimoduleMap {
        BimoduleMap::from_parts(self.clone(), self.clone(), IntMatrix::identity(self.rank()))
    }
}

/// The unit homomorphism `Z → R` as a `rank(R) × 1` matrix.
pub fn unit_map(r: &FinAlgebra) -> IntMatrix {
    IntMatrix::from_columns(r.rank(), &[r.one().to_vec()])
}

#[cfg(test)]
mod tests;
