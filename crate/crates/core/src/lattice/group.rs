use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{cokernel_with_torsion, Presentation};
use crate::arith::{self, Int};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// Finitely generated abelian group `Z/d_1 ⊕ … ⊕ Z/d_k` with `d_1 | d_2 | …`,
/// no unit factors, and free factors (`d = 0`) last.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FinAbGroup {
    factors: Vec<Int>,
}

impl FinAbGroup {
    /// Validates the normal-form conditions.
    pub fn new(factors: Vec<Int>) -> Result<Self> {
        for (i, d) in factors.iter().enumerate() {
            if d.is_negative() || d.is_one() {
                return Err(Error::InvalidParameter(alloc::format!(
                    "invariant factor {d} at position {i} is not allowed"
                )));
            }
            if let Some(next) = factors.get(i + 1) {
                if !arith::divides(d, next) {
                    return Err(Error::InvalidParameter(alloc::format!(
                        "invariant factors {d} and {next} violate the divisibility chain"
                    )));
                }
            }
        }
        Ok(FinAbGroup { factors })
    }

    pub(crate) fn from_normal_factors(factors: Vec<Int>) -> Self {
        debug_assert!(FinAbGroup::new(factors.clone()).is_ok(), "{factors:?}");
        FinAbGroup { factors }
    }

    /// Normal form of `⊕ Z/orders[i]`; orders may be arbitrary non-negative
    /// integers, including 1.
    pub fn from_orders(orders: &[Int]) -> Presentation {
        cokernel_with_torsion(orders, &IntMatrix::zeros(orders.len(), 0))
    }

    pub fn trivial() -> Self {
        FinAbGroup { factors: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        FinAbGroup { factors: vec![Int::zero(); rank] }
    }

    pub fn cyclic(m: u64) -> Self {
        FinAbGroup::from_orders(&[Int::from(m)]).group
    }

    pub fn factors(&self) -> &[Int] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.factors.iter().all(|d| !d.is_zero())
    }

    /// Group order, `None` when a free factor is present.
    pub fn order(&self) -> Option<Int> {
        if self.is_finite() {
            Some(self.factors.iter().product())
        } else {
            None
        }
    }

    /// Least common multiple of the factors (the last one), `0` if infinite.
    pub fn exponent(&self) -> Int {
        if self.is_finite() {
            self.factors.last().cloned().unwrap_or_else(Int::one)
        } else {
            Int::zero()
        }
    }

    pub fn reduce(&self, v: &mut [Int]) {
        debug_assert_eq!(v.len(), self.rank());
        for (x, d) in v.iter_mut().zip(&self.factors) {
            arith::reduce_in_place(x, d);
        }
    }

    pub fn reduced(&self, mut v: Vec<Int>) -> Vec<Int> {
        self.reduce(&mut v);
        v
    }

    pub fn zero(&self) -> Vec<Int> {
        vec![Int::zero(); self.rank()]
    }

    pub fn basis(&self, i: usize) -> Vec<Int> {
        let mut v = self.zero();
        v[i] = Int::one();
        v
    }

    pub fn is_zero(&self, v: &[Int]) -> bool {
        v.iter().zip(&self.factors).all(|(x, d)| arith::divides(d, x) || x.is_zero())
    }

    pub fn eq_elements(&self, a: &[Int], b: &[Int]) -> bool {
        a.iter()
            .zip(b)
            .zip(&self.factors)
            .all(|((x, y), d)| arith::reduce(x, d) == arith::reduce(y, d))
    }

    pub fn add(&self, a: &[Int], b: &[Int]) -> Vec<Int> {
        self.reduced(a.iter().zip(b).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, a: &[Int], b: &[Int]) -> Vec<Int> {
        self.reduced(a.iter().zip(b).map(|(x, y)| x - y).collect())
    }

    pub fn neg(&self, a: &[Int]) -> Vec<Int> {
        self.reduced(a.iter().map(|x| -x).collect())
    }

    pub fn scale(&self, c: &Int, a: &[Int]) -> Vec<Int> {
        self.reduced(a.iter().map(|x| c * x).collect())
    }

    /// Reduce row `i` of a map matrix into this (target) group modulo `d_i`.
    pub fn reduce_rows(&self, m: &mut IntMatrix) {
        assert_eq!(m.rows(), self.rank(), "row count must equal target rank");
        for (i, d) in self.factors.iter().enumerate() {
            if !d.is_zero() {
                for x in m.row_mut(i) {
                    arith::reduce_in_place(x, d);
                }
            }
        }
    }

    pub fn reduced_rows(&self, mut m: IntMatrix) -> IntMatrix {
        self.reduce_rows(&mut m);
        m
    }

    /// A matrix defines a homomorphism `source → self` iff `d_j·column_j = 0`.
    pub fn is_hom_from(&self, source: &FinAbGroup, m: &IntMatrix) -> bool {
        if m.rows() != self.rank() || m.cols() != source.rank() {
            return false;
        }
        source.factors.iter().enumerate().all(|(j, dj)| {
            let col: Vec<Int> = m.column(j).iter().map(|x| dj * x).collect();
            self.is_zero(&col)
        })
    }

    /// Normalized direct sum with injections and projections.
    pub fn direct_sum(groups: &[&FinAbGroup]) -> DirectSum {
        let orders: Vec<Int> = groups.iter().flat_map(|g| g.factors.iter().cloned()).collect();
        let pres = FinAbGroup::from_orders(&orders);
        let mut inj = Vec::with_capacity(groups.len());
        let mut proj = Vec::with_capacity(groups.len());
        let mut off = 0;
        for g in groups {
            let k = g.rank();
            let block_to = pres.to_normal.block(0, off, pres.rank(), k);
            inj.push(pres.group.reduced_rows(block_to));
            let block_from = pres.from_normal.block(off, 0, k, pres.rank());
            proj.push(g.reduced_rows(block_from));
            off += k;
        }
        DirectSum { group: pres.group, injections: inj, projections: proj }
    }

    /// Every element of a finite group, in lexicographic coordinate order.
    pub fn elements(&self) -> Option<Vec<Vec<Int>>> {
        if !self.is_finite() {
            return None;
        }
        let mut out = vec![self.zero()];
        for (i, d) in self.factors.iter().enumerate() {
            let bound = arith::to_u64(d)?;
            let mut next = Vec::with_capacity(out.len() * bound as usize);
            for v in &out {
                for c in 0..bound {
                    let mut w = v.clone();
                    w[i] = Int::from(c);
                    next.push(w);
                }
            }
            out = next;
        }
        Some(out)
    }

    /// Canonical small representative: coordinate `x` in `(−d/2, d/2]`.
    pub fn balanced(&self, v: &[Int]) -> Vec<Int> {
        v.iter()
            .zip(&self.factors)
            .map(|(x, d)| {
                if d.is_zero() {
                    x.clone()
                } else {
                    let r = x.mod_floor(d);
                    if &r * 2 > *d {
                        r - d
                    } else {
                        r
                    }
                }
            })
            .collect()
    }
}

/// Normalized direct sum of groups; `injections[i]` and `projections[i]`
/// are matrices in normal coordinates.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub group: FinAbGroup,
    pub injections: Vec<IntMatrix>,
    pub projections: Vec<IntMatrix>,
}

impl fmt::Debug for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        for (i, d) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " ⊕ ")?;
            }
            if d.is_zero() {
                write!(f, "Z")?;
            } else {
                write!(f, "Z/{d}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
