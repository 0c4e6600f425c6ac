//! Finitely generated abelian groups in invariant-factor form, Smith normal
//! form, cokernels and linear systems over `Z` and its cyclic quotients.

mod elim;
mod group;
mod solve;

use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Zero};

pub use group::FinAbGroup;
pub use solve::{hnf_basis, solve, solve_homogeneous, SolutionSet, Subquotient};

use crate::arith::{self, Int};
use crate::matrix::IntMatrix;
use elim::{Elim, IntDomain, ModDomain};

/// Output of [`smith_normal_form`]: `d = u·a·v` with `u`, `v` unimodular.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

impl SmithForm {
    /// Diagonal entries `d_1 | d_2 | …`, one per row (zero past the rank).
    pub fn diagonal(&self) -> Vec<Int> {
        (0..self.d.rows())
            .map(|i| if i < self.d.cols() { self.d[(i, i)].clone() } else { Int::zero() })
            .collect()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let mut el = Elim::new(IntDomain, a.rows(), a.cols(), a.to_rows(), true, true);
    let rank = el.run();
    let d = IntMatrix::from_rows(&el.a, a.cols());
    SmithForm {
        u: IntMatrix::from_rows(&el.u.unwrap(), a.rows()),
        u_inv: IntMatrix::from_rows(&el.uinv.unwrap(), a.rows()),
        d,
        v: IntMatrix::from_rows(&el.v.unwrap(), a.cols()),
        rank,
    }
}

/// A quotient `Z^n / L` together with coordinate conversions to and from
/// its invariant-factor normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub group: FinAbGroup,
    /// `k × n`: ambient coordinates to normal coordinates.
    pub to_normal: IntMatrix,
    /// `n × k`: normal coordinates to an ambient representative.
    pub from_normal: IntMatrix,
}

impl Presentation {
    pub fn ambient_dim(&self) -> usize {
        self.to_normal.cols()
    }

    pub fn rank(&self) -> usize {
        self.group.rank()
    }

    /// Class of an ambient vector, in normal coordinates.
    pub fn project(&self, v: &[Int]) -> Vec<Int> {
        self.group.reduced(self.to_normal.mul_vec(v))
    }

    /// Ambient representative of normal coordinates.
    pub fn lift(&self, y: &[Int]) -> Vec<Int> {
        self.from_normal.mul_vec(y)
    }

    /// Identity presentation of a group already in normal form.
    pub fn trivial_of(group: &FinAbGroup) -> Self {
        let k = group.rank();
        Presentation {
            group: group.clone(),
            to_normal: IntMatrix::identity(k),
            from_normal: IntMatrix::identity(k),
        }
    }
}

/// Cokernel of `relations` (columns are relations in `Z^n`, `n = relations.rows()`).
pub fn cokernel(relations: &IntMatrix) -> Presentation {
    let torsion = alloc::vec![Int::zero(); relations.rows()];
    cokernel_with_torsion(&torsion, relations)
}

/// Cokernel of `relations` together with the extra relations `torsion[i]·e_i`
/// (a zero entry adds nothing).
///
/// When every coordinate carries torsion and the exponent fits in 64 bits the
/// reduction runs over `Z/e` on machine words.
pub fn cokernel_with_torsion(torsion: &[Int], relations: &IntMatrix) -> Presentation {
    let n = relations.rows();
    assert_eq!(torsion.len(), n, "one torsion entry per ambient coordinate");
    if n == 0 {
        return Presentation {
            group: FinAbGroup::trivial(),
            to_normal: IntMatrix::zeros(0, 0),
            from_normal: IntMatrix::zeros(0, 0),
        };
    }
    if let Some(e) = exponent_u64(torsion) {
        return cokernel_mod(e, torsion, relations);
    }
    let extra: Vec<usize> = (0..n).filter(|&i| !torsion[i].is_zero()).collect();
    let mut full = IntMatrix::zeros(n, relations.cols() + extra.len());
    full.set_block(0, 0, relations);
    for (c, &i) in extra.iter().enumerate() {
        full[(i, relations.cols() + c)] = torsion[i].clone();
    }
    let mut el = Elim::new(IntDomain, n, full.cols(), full.to_rows(), true, false);
    el.run();
    let diag = el.diagonal();
    let u = el.u.take().unwrap();
    let uinv = el.uinv.take().unwrap();
    assemble(diag, &u, &uinv, n)
}

fn exponent_u64(torsion: &[Int]) -> Option<u64> {
    let mut e = Int::one();
    for t in torsion {
        if t.is_zero() {
            return None;
        }
        e = arith::lcm(&e, t);
        if e.bits() > 62 {
            return None;
        }
    }
    arith::to_u64(&e)
}

fn cokernel_mod(e: u64, torsion: &[Int], relations: &IntMatrix) -> Presentation {
    let n = relations.rows();
    if e == 1 {
        return Presentation {
            group: FinAbGroup::trivial(),
            to_normal: IntMatrix::zeros(0, n),
            from_normal: IntMatrix::zeros(n, 0),
        };
    }
    let ei = Int::from(e);
    let mut rows = elim::mod_rows(relations, e);
    for (i, t) in torsion.iter().enumerate() {
        if t != &ei {
            let tv = arith::to_u64(t).expect("positive torsion");
            for (r, row) in rows.iter_mut().enumerate() {
                row.push(if r == i { tv } else { 0 });
            }
        }
    }
    let cols = rows.first().map_or(0, |r| r.len());
    let mut el = Elim::new(ModDomain { e }, n, cols, rows, true, false);
    el.run();
    let diag: Vec<Int> = el
        .diagonal()
        .into_iter()
        .map(|d| if d == 0 { ei.clone() } else { Int::from(d) })
        .collect();
    let u = elim::to_int_rows(&el.u.take().unwrap());
    let uinv = elim::to_int_rows(&el.uinv.take().unwrap());
    assemble(diag, &u, &uinv, n)
}

fn assemble(diag: Vec<Int>, u: &[Vec<Int>], uinv: &[Vec<Int>], n: usize) -> Presentation {
    let keep: Vec<usize> = (0..n).filter(|&i| !diag[i].is_one()).collect();
    let factors: Vec<Int> = keep.iter().map(|&i| diag[i].clone()).collect();
    let group = FinAbGroup::from_normal_factors(factors);
    let mut to_normal = IntMatrix::zeros(keep.len(), n);
    let mut from_normal = IntMatrix::zeros(n, keep.len());
    for (r, &i) in keep.iter().enumerate() {
        let d = &diag[i];
        for c in 0..n {
            let x = &u[i][c];
            to_normal[(r, c)] = if d.is_zero() { x.clone() } else { x.mod_floor(d) };
            from_normal[(c, r)] = uinv[c][i].clone();
        }
    }
    Presentation { group, to_normal, from_normal }
}

#[cfg(test)]
mod tests;
