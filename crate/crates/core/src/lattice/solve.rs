use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::elim::{self, Domain, Elim, ModDomain};
use super::{cokernel, smith_normal_form, Presentation, SmithForm};
use crate::arith::{self, Int};
use crate::matrix::IntMatrix;

/// Solutions of `A·x ≡ b`: a particular solution plus lattice basis columns
/// spanning every homogeneous solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionSet {
    pub particular: Vec<Int>,
    pub basis: IntMatrix,
}

/// Solve `A·x ≡ b (mod moduli)` row-wise; a zero modulus means equality in `Z`.
///
/// Returns `None` when the system has no integer solution.
pub fn solve(a: &IntMatrix, b: &[Int], moduli: &[Int]) -> Option<SolutionSet> {
    assert_eq!(a.rows(), b.len(), "right-hand side length");
    assert_eq!(a.rows(), moduli.len(), "one modulus per row");
    assert!(moduli.iter().all(|m| !m.is_negative()), "moduli must be non-negative");
    match modular_exponent(moduli) {
        Some(e) => solve_mod(a, b, moduli, e),
        None => solve_int(a, b, moduli),
    }
}

/// Basis of all `x` with `A·x ≡ 0 (mod moduli)`.
pub fn solve_homogeneous(a: &IntMatrix, moduli: &[Int]) -> IntMatrix {
    let zero = vec![Int::zero(); a.rows()];
    solve(a, &zero, moduli).expect("homogeneous systems are solvable").basis
}

fn modular_exponent(moduli: &[Int]) -> Option<u64> {
    if moduli.is_empty() {
        return None;
    }
    let mut e = Int::one();
    for m in moduli {
        if m.is_zero() {
            return None;
        }
        e = arith::lcm(&e, m);
        if e.bits() > 62 {
            return None;
        }
    }
    arith::to_u64(&e)
}

fn solve_int(a: &IntMatrix, b: &[Int], moduli: &[Int]) -> Option<SolutionSet> {
    let n = a.rows();
    let c = a.cols();
    let extra: Vec<usize> = (0..n).filter(|&i| !moduli[i].is_zero()).collect();
    let mut full = IntMatrix::zeros(n, c + extra.len());
    full.set_block(0, 0, a);
    for (k, &i) in extra.iter().enumerate() {
        full[(i, c + k)] = moduli[i].clone();
    }
    let snf = smith_normal_form(&full);
    let ub = snf.u.mul_vec(b);
    let total = full.cols();
    let mut w = vec![Int::zero(); total];
    for i in 0..n {
        if i < snf.rank {
            let d = &snf.d[(i, i)];
            let (q, r) = ub[i].div_rem(d);
            if !r.is_zero() {
                return None;
            }
            w[i] = q;
        } else if !ub[i].is_zero() {
            return None;
        }
    }
    let z = snf.v.mul_vec(&w);
    let particular = z[..c].to_vec();
    let gens: Vec<Vec<Int>> = (snf.rank..total).map(|j| (0..c).map(|r| snf.v[(r, j)].clone()).collect()).collect();
    Some(SolutionSet { particular, basis: hnf_basis_rows(gens, c) })
}

fn solve_mod(a: &IntMatrix, b: &[Int], moduli: &[Int], e: u64) -> Option<SolutionSet> {
    let n = a.rows();
    let c = a.cols();
    let ei = Int::from(e);
    if e == 1 {
        return Some(SolutionSet { particular: vec![Int::zero(); c], basis: IntMatrix::identity(c) });
    }
    let scale: Vec<Int> = moduli.iter().map(|m| &ei / m).collect();
    let mut rows = elim::mod_rows(a, e);
    let mut rhs: Vec<u64> = Vec::with_capacity(n);
    for i in 0..n {
        let s = arith::to_u64(&scale[i]).unwrap();
        for x in rows[i].iter_mut() {
            *x = arith::mulmod(*x, s, e);
        }
        let bi = arith::to_u64(&b[i].mod_floor(&ei)).unwrap();
        rhs.push(arith::mulmod(bi, s, e));
    }
    let mut el = Elim::new(ModDomain { e }, n, c, rows, true, true);
    let rank = el.run();
    let u = el.u.take().unwrap();
    let v = el.v.take().unwrap();
    let cu: Vec<u64> = (0..n)
        .map(|i| {
            let mut acc = 0u64;
            for k in 0..n {
                acc = arith::addmod(acc, arith::mulmod(u[i][k], rhs[k], e), e);
            }
            acc
        })
        .collect();
    let mut w = vec![0u64; c];
    let mut gens: Vec<Vec<u64>> = Vec::new();
    for i in 0..n {
        let d = if i < rank && i < c { el.a[i][i] } else { 0 };
        let g = if d == 0 { e } else { d };
        if cu[i] % g != 0 {
            return None;
        }
        if i < c && d != 0 {
            w[i] = cu[i] / g;
        }
    }
    for j in 0..c {
        let d = if j < rank { el.a[j][j] } else { 0 };
        let g = if d == 0 { e } else { d };
        let mult = e / g;
        if mult % e == 0 {
            continue;
        }
        gens.push((0..c).map(|r| arith::mulmod(v[r][j], mult, e)).collect());
    }
    let mut particular = vec![Int::zero(); c];
    for (r, p) in particular.iter_mut().enumerate() {
        let mut acc = 0u64;
        for k in 0..c {
            acc = arith::addmod(acc, arith::mulmod(v[r][k], w[k], e), e);
        }
        *p = Int::from(acc);
    }
    Some(SolutionSet { particular, basis: hnf_mod(gens, c, e) })
}

/// Hermite basis (as columns) of the lattice spanned by `gens` (as columns).
pub fn hnf_basis(gens: &IntMatrix) -> IntMatrix {
    let rows: Vec<Vec<Int>> = (0..gens.cols()).map(|j| gens.column(j)).collect();
    hnf_basis_rows(rows, gens.rows())
}

fn hnf_basis_rows(mut rows: Vec<Vec<Int>>, dim: usize) -> IntMatrix {
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    let mut r = 0;
    for col in 0..dim {
        loop {
            let mut best: Option<usize> = None;
            for i in r..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                if best.map_or(true, |b| rows[i][col].abs() < rows[b][col].abs()) {
                    best = Some(i);
                }
            }
            let Some(p) = best else { break };
            rows.swap(r, p);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = rows[i][col].div_floor(&rows[r][col]);
                let (head, tail) = rows.split_at_mut(i);
                let pr = &head[r];
                for (x, y) in tail[0].iter_mut().zip(pr) {
                    if !y.is_zero() {
                        *x -= &q * y;
                    }
                }
                if !tail[0][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r >= rows.len() || rows[r][col].is_zero() {
            continue;
        }
        if rows[r][col].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -&*x;
            }
        }
        let (head, tail) = rows.split_at_mut(r);
        let pr = &tail[0];
        for row in head.iter_mut() {
            let q = row[col].div_floor(&pr[col]);
            if !q.is_zero() {
                for (x, y) in row.iter_mut().zip(pr) {
                    *x -= &q * y;
                }
            }
        }
        rows.retain(|row| row.iter().any(|x| !x.is_zero()));
        r += 1;
        if r >= rows.len() {
            break;
        }
    }
    rows.truncate(r);
    let mut out = IntMatrix::zeros(dim, rows.len());
    for (j, row) in rows.iter().enumerate() {
        for (i, x) in row.iter().enumerate() {
            out[(i, j)] = x.clone();
        }
    }
    out
}

/// Hermite basis of `span(gens) + e·Z^dim`, computed on residues mod `e`.
fn hnf_mod(gens: Vec<Vec<u64>>, dim: usize, e: u64) -> IntMatrix {
    let d = ModDomain { e };
    let mut pending: Vec<Vec<u64>> = gens.into_iter().filter(|r| r.iter().any(|&x| x != 0)).collect();
    let mut basis: Vec<Vec<Int>> = Vec::with_capacity(dim);
    let mut pivots: Vec<Int> = Vec::with_capacity(dim);
    for col in 0..dim {
        let mut pivot: Option<Vec<u64>> = None;
        let mut rest = Vec::with_capacity(pending.len());
        for row in pending.drain(..) {
            if row[col] == 0 {
                rest.push(row);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(row),
                Some(p) => {
                    let (np, other) = mix_rows(&d, &p, &row, col);
                    pivot = Some(np);
                    if other.iter().any(|&x| x != 0) {
                        rest.push(other);
                    }
                }
            }
        }
        pending = rest;
        match pivot {
            None => {
                let mut row = vec![Int::zero(); dim];
                row[col] = Int::from(e);
                pivots.push(Int::from(e));
                basis.push(row);
            }
            Some(p) => {
                // fold in e·e_col
                let v = p[col];
                let [g, x, _, _, b1] = d.xgcd(&v, &e);
                let mut np: Vec<u64> = p.iter().map(|&t| d.mul(&x, &t)).collect();
                np[col] = g;
                let mut other: Vec<u64> = p.iter().map(|&t| d.neg(&d.mul(&b1, &t))).collect();
                other[col] = 0;
                if other.iter().any(|&x| x != 0) {
                    pending.push(other);
                }
                let g = if g == 0 { e } else { g };
                let mut row: Vec<Int> = np.iter().map(|&t| Int::from(t)).collect();
                row[col] = Int::from(g);
                pivots.push(Int::from(g));
                basis.push(row);
            }
        }
    }
    // reduce entries above the diagonal
    for j in (0..dim).rev() {
        for k in j + 1..dim {
            let q = basis[j][k].div_floor(&pivots[k]);
            if !q.is_zero() {
                let rk = basis[k].clone();
                for (x, y) in basis[j].iter_mut().zip(&rk) {
                    *x -= &q * y;
                }
            }
        }
    }
    let mut out = IntMatrix::zeros(dim, dim);
    for (j, row) in basis.iter().enumerate() {
        for (i, x) in row.iter().enumerate() {
            out[(i, j)] = x.clone();
        }
    }
    out
}

fn mix_rows(d: &ModDomain, p: &[u64], r: &[u64], col: usize) -> (Vec<u64>, Vec<u64>) {
    let [_, x, y, a1, b1] = d.xgcd(&p[col], &r[col]);
    let np = p.iter().zip(r).map(|(s, t)| d.add(&d.mul(&x, s), &d.mul(&y, t))).collect();
    let other = p.iter().zip(r).map(|(s, t)| d.sub(&d.mul(&a1, t), &d.mul(&b1, s))).collect();
    (np, other)
}

/// The group `L / L0` for a lattice `L` (basis columns) and a sublattice
/// `L0 ⊆ L` (generator columns), with conversions from ambient vectors.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub basis: IntMatrix,
    pub pres: Presentation,
    snf: SmithForm,
}

impl Subquotient {
    /// `basis` must have full column rank and `sub` must lie in its span.
    pub fn new(basis: IntMatrix, sub: &IntMatrix) -> Option<Self> {
        let snf = smith_normal_form(&basis);
        if snf.rank != basis.cols() {
            return None;
        }
        let mut x = IntMatrix::zeros(basis.cols(), sub.cols());
        let mut tmp = Subquotient { basis, pres: Presentation::trivial_of(&super::FinAbGroup::trivial()), snf };
        for j in 0..sub.cols() {
            let y = tmp.basis_coords(&sub.column(j))?;
            for (i, v) in y.into_iter().enumerate() {
                x[(i, j)] = v;
            }
        }
        tmp.pres = cokernel(&x);
        Some(tmp)
    }

    /// Coordinates with respect to `basis`, if `v` lies in the lattice.
    pub fn basis_coords(&self, v: &[Int]) -> Option<Vec<Int>> {
        let uv = self.snf.u.mul_vec(v);
        let b = self.basis.cols();
        let mut w = vec![Int::zero(); b];
        for (i, val) in uv.iter().enumerate() {
            if i < b {
                let (q, r) = val.div_rem(&self.snf.d[(i, i)]);
                if !r.is_zero() {
                    return None;
                }
                w[i] = q;
            } else if !val.is_zero() {
                return None;
            }
        }
        Some(self.snf.v.mul_vec(&w))
    }

    /// Normal coordinates of the class of `v ∈ L`.
    pub fn coords(&self, v: &[Int]) -> Option<Vec<Int>> {
        Some(self.pres.project(&self.basis_coords(v)?))
    }

    /// Ambient representative of normal coordinates.
    pub fn element(&self, y: &[Int]) -> Vec<Int> {
        self.basis.mul_vec(&self.pres.lift(y))
    }
}

#[cfg(test)]
pub(crate) fn solve_int_for_tests(a: &IntMatrix, b: &[Int], moduli: &[Int]) -> Option<SolutionSet> {
    solve_int(a, b, moduli)
}
