//! Rings presented over their additive group by structure constants.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::sync::atomic::{AtomicU64, Ordering};

use num_traits::{One, Zero};

use crate::arith::{self, Int};
use crate::error::{Error, Result};
use crate::lattice::{cokernel_with_torsion, FinAbGroup};
use crate::matrix::IntMatrix;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

pub(crate) fn fresh_id() -> u64 {
    NEXT_ID.fetch_add(1, Ordering::Relaxed)
}

struct Inner {
    id: u64,
    name: String,
    additive: FinAbGroup,
    mul: Vec<Vec<Vec<Int>>>,
    one: Vec<Int>,
    left: Vec<IntMatrix>,
    right: Vec<IntMatrix>,
    generators: Vec<usize>,
}

/// A ring with unit whose additive group is a [`FinAbGroup`]; the product of
/// basis elements `i` and `j` is the coordinate vector `mul[i][j]`.
///
/// Cloning is cheap; equality is structural.
#[derive(Clone)]
pub struct FinAlgebra(Arc<Inner>);

impl PartialEq for FinAlgebra {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.additive == other.0.additive && self.0.mul == other.0.mul && self.0.one == other.0.one)
    }
}

impl Eq for FinAlgebra {}

impl fmt::Debug for FinAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{:?}]", self.0.name, self.0.additive)
    }
}

impl FinAlgebra {
    /// Validate and build an algebra on a group already in normal form.
    pub fn new(additive: FinAbGroup, mul: Vec<Vec<Vec<Int>>>, one: Vec<Int>) -> Result<Self> {
        Self::named("algebra", additive, mul, one)
    }

    pub fn named(name: &str, additive: FinAbGroup, mut mul: Vec<Vec<Vec<Int>>>, one: Vec<Int>) -> Result<Self> {
        let k = additive.rank();
        if mul.len() != k || mul.iter().any(|r| r.len() != k || r.iter().any(|v| v.len() != k)) {
            return Err(Error::Dimension(format!("structure constants must be {k}×{k}×{k}")));
        }
        if one.len() != k {
            return Err(Error::Dimension(format!("unit must have {k} coordinates")));
        }
        for row in mul.iter_mut() {
            for v in row.iter_mut() {
                additive.reduce(v);
            }
        }
        let one = additive.reduced(one);
        let d = additive.factors();
        for i in 0..k {
            for j in 0..k {
                if !additive.is_zero(&additive.scale(&d[i], &mul[i][j]))
                    || !additive.is_zero(&additive.scale(&d[i], &mul[j][i]))
                {
                    return Err(Error::IllDefinedStructure { i, j });
                }
            }
        }
        let left: Vec<IntMatrix> = (0..k)
            .map(|i| IntMatrix::from_columns(k, &(0..k).map(|j| mul[i][j].clone()).collect::<Vec<_>>()))
            .collect();
        let right: Vec<IntMatrix> = (0..k)
            .map(|i| IntMatrix::from_columns(k, &(0..k).map(|j| mul[j][i].clone()).collect::<Vec<_>>()))
            .collect();
        let mut alg = Inner {
            id: fresh_id(),
            name: String::from(name),
            additive,
            mul,
            one,
            left,
            right,
            generators: Vec::new(),
        };
        check_laws(&alg)?;
        alg.generators = ring_generators(&alg);
        Ok(FinAlgebra(Arc::new(alg)))
    }

    /// Build from arbitrary cyclic orders (any non-negative integers), moving
    /// the structure to invariant-factor coordinates.
    pub fn from_orders(orders: &[Int], mul: Vec<Vec<Vec<Int>>>, one: Vec<Int>) -> Result<Self> {
        let n = orders.len();
        if mul.len() != n || mul.iter().any(|r| r.len() != n || r.iter().any(|v| v.len() != n)) || one.len() != n {
            return Err(Error::Dimension(format!("structure constants must be {n}×{n}×{n}")));
        }
        let pres = cokernel_with_torsion(orders, &IntMatrix::zeros(n, 0));
        if pres.group.factors() == orders {
            return Self::new(pres.group, mul, one);
        }
        let amb = |v: &[Int]| -> Vec<Int> {
            v.iter().zip(orders).map(|(x, o)| arith::reduce(x, o)).collect()
        };
        for i in 0..n {
            for j in 0..n {
                let a: Vec<Int> = mul[i][j].iter().map(|x| x * &orders[i]).collect();
                let b: Vec<Int> = mul[j][i].iter().map(|x| x * &orders[i]).collect();
                if amb(&a).iter().any(|x| !x.is_zero()) || amb(&b).iter().any(|x| !x.is_zero()) {
                    return Err(Error::IllDefinedStructure { i, j });
                }
            }
        }
        let k = pres.rank();
        let cols: Vec<Vec<Int>> = (0..k).map(|a| pres.from_normal.column(a)).collect();
        let prod_amb = |x: &[Int], y: &[Int]| -> Vec<Int> {
            let mut out = vec![Int::zero(); n];
            for (i, xi) in x.iter().enumerate() {
                if xi.is_zero() {
                    continue;
                }
                for (j, yj) in y.iter().enumerate() {
                    if yj.is_zero() {
                        continue;
                    }
                    let c = xi * yj;
                    for (o, m) in out.iter_mut().zip(&mul[i][j]) {
                        *o += &c * m;
                    }
                }
            }
            out
        };
        let new_mul = (0..k)
            .map(|a| (0..k).map(|b| pres.project(&prod_amb(&cols[a], &cols[b]))).collect())
            .collect();
        Self::new(pres.group.clone(), new_mul, pres.project(&one))
    }

    pub fn id(&self) -> u64 {
        self.0.id
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn additive(&self) -> &FinAbGroup {
        &self.0.additive
    }

    pub fn rank(&self) -> usize {
        self.0.additive.rank()
    }

    pub fn structure(&self) -> &[Vec<Vec<Int>>] {
        &self.0.mul
    }

    pub fn one(&self) -> &[Int] {
        &self.0.one
    }

    pub fn zero(&self) -> Vec<Int> {
        self.0.additive.zero()
    }

    pub fn basis(&self, i: usize) -> Vec<Int> {
        self.0.additive.basis(i)
    }

    pub fn is_zero_ring(&self) -> bool {
        self.rank() == 0
    }

    /// Left multiplication by basis element `i` as a matrix on coordinates.
    pub fn left_basis_matrix(&self, i: usize) -> &IntMatrix {
        &self.0.left[i]
    }

    /// Right multiplication by basis element `i` (`x ↦ x·b_i`).
    pub fn right_basis_matrix(&self, i: usize) -> &IntMatrix {
        &self.0.right[i]
    }

    /// Basis indices that generate the ring multiplicatively (with 1).
    pub fn generators(&self) -> &[usize] {
        &self.0.generators
    }

    pub fn mul(&self, x: &[Int], y: &[Int]) -> Vec<Int> {
        self.0.additive.reduced(mul_raw(&self.0.mul, x, y))
    }

    pub fn add(&self, x: &[Int], y: &[Int]) -> Vec<Int> {
        self.0.additive.add(x, y)
    }

    pub fn sub(&self, x: &[Int], y: &[Int]) -> Vec<Int> {
        self.0.additive.sub(x, y)
    }

    pub fn neg(&self, x: &[Int]) -> Vec<Int> {
        self.0.additive.neg(x)
    }

    pub fn eq_elements(&self, x: &[Int], y: &[Int]) -> bool {
        self.0.additive.eq_elements(x, y)
    }

    pub fn pow(&self, x: &[Int], n: u32) -> Vec<Int> {
        let mut acc = self.one().to_vec();
        for _ in 0..n {
            acc = self.mul(&acc, x);
        }
        acc
    }

    /// Left multiplication by `x`.
    pub fn left_matrix(&self, x: &[Int]) -> IntMatrix {
        combine(&self.0.left, x, self.rank())
    }

    /// Right multiplication by `x`.
    pub fn right_matrix(&self, x: &[Int]) -> IntMatrix {
        combine(&self.0.right, x, self.rank())
    }

    pub fn is_commutative(&self) -> bool {
        let k = self.rank();
        (0..k).all(|i| (0..k).all(|j| self.eq_elements(&self.0.mul[i][j], &self.0.mul[j][i])))
    }

    pub fn opposite(&self) -> FinAlgebra {
        let k = self.rank();
        let mul = (0..k).map(|i| (0..k).map(|j| self.0.mul[j][i].clone()).collect()).collect();
        let name = format!("{}^op", self.0.name);
        FinAlgebra::named(&name, self.0.additive.clone(), mul, self.0.one.clone()).expect("opposite of a valid algebra")
    }

    /// Whether `phi` (a matrix on coordinates) is a unital ring homomorphism `self → target`.
    pub fn is_ring_hom(&self, target: &FinAlgebra, phi: &IntMatrix) -> bool {
        if !target.additive().is_hom_from(self.additive(), phi) {
            return false;
        }
        if !target.eq_elements(&phi.mul_vec(self.one()), target.one()) {
            return false;
        }
        let k = self.rank();
        let images: Vec<Vec<Int>> = (0..k).map(|i| phi.mul_vec(&self.basis(i))).collect();
        (0..k).all(|i| {
            (0..k).all(|j| target.eq_elements(&phi.mul_vec(&self.0.mul[i][j]), &target.mul(&images[i], &images[j])))
        })
    }

    pub fn is_automorphism(&self, phi: &IntMatrix) -> bool {
        if !self.is_ring_hom(self, phi) {
            return false;
        }
        // finitely generated abelian groups are Hopfian: onto implies bijective
        cokernel_with_torsion(self.additive().factors(), phi).group.is_trivial()
    }

    pub fn element(&self, coords: Vec<Int>) -> RingElement {
        RingElement { owner: self.clone(), coords: self.0.additive.reduced(coords) }
    }

    /// Catalog of test rings. `m = 0` means coefficients in `Z`.
    ///
    /// * `cyclic [m]`, `integers []`
    /// * `matrix [k, m]`: `M_k(Z/m)` on matrix units `E_ij` (index `i·k + j`)
    /// * `group-algebra [m, k]`: `Z/m[C_k]` on powers of the generator
    /// * `upper-triangular [m]`: basis `E_11, E_12, E_22`
    /// * `truncated-polynomial [m, d]`: `Z/m[x]/(x^d)`
    pub fn catalog(name: &str, params: &[u64]) -> Result<FinAlgebra> {
        let need = |n: usize| -> Result<()> {
            if params.len() == n {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("'{name}' takes {n} parameter(s), got {}", params.len())))
            }
        };
        match name {
            "cyclic" => {
                need(1)?;
                build_free_basis(&format!("Z/{}", params[0]), params[0], 1, |_, _| Some(0), 0)
            }
            "integers" | "integers-truncated" => {
                need(0)?;
                build_free_basis("Z", 0, 1, |_, _| Some(0), 0)
            }
            "matrix" => {
                need(2)?;
                let (k, m) = (params[0] as usize, params[1]);
                if k == 0 {
                    return Err(Error::InvalidParameter("matrix size must be positive".into()));
                }
                let one_idx: Vec<usize> = (0..k).map(|i| i * k + i).collect();
                build_multi_one(&format!("M_{k}(Z/{m})"), m, k * k, &one_idx, |a, b| {
                    let (i, j) = (a / k, a % k);
                    let (p, l) = (b / k, b % k);
                    (j == p).then_some(i * k + l)
                })
            }
            "group-algebra" => {
                need(2)?;
                let (m, k) = (params[0], params[1] as usize);
                if k == 0 {
                    return Err(Error::InvalidParameter("group order must be positive".into()));
                }
                build_free_basis(&format!("Z/{m}[C_{k}]"), m, k, |a, b| Some((a + b) % k), 0)
            }
            "upper-triangular" => {
                need(1)?;
                let m = params[0];
                // 0 = E11, 1 = E12, 2 = E22
                build_multi_one(&format!("T_2(Z/{m})"), m, 3, &[0, 2], |a, b| match (a, b) {
                    (0, 0) => Some(0),
                    (0, 1) => Some(1),
                    (1, 2) => Some(1),
                    (2, 2) => Some(2),
                    _ => None,
                })
            }
            "truncated-polynomial" => {
                need(2)?;
                let (m, d) = (params[0], params[1] as usize);
                if d == 0 {
                    return Err(Error::InvalidParameter("degree bound must be positive".into()));
                }
                build_free_basis(&format!("Z/{m}[x]/x^{d}"), m, d, |a, b| (a + b < d).then_some(a + b), 0)
            }
            _ => Err(Error::UnknownCatalog(String::from(name))),
        }
    }

    pub fn integers() -> FinAlgebra {
        FinAlgebra::catalog("integers", &[]).expect("catalog")
    }
}

fn build_free_basis(
    name: &str,
    m: u64,
    k: usize,
    prod: impl Fn(usize, usize) -> Option<usize>,
    one_idx: usize,
) -> Result<FinAlgebra> {
    build_multi_one(name, m, k, &[one_idx], prod)
}

/// Basis elements whose pairwise products are basis elements or zero.
fn build_multi_one(
    name: &str,
    m: u64,
    k: usize,
    one_idx: &[usize],
    prod: impl Fn(usize, usize) -> Option<usize>,
) -> Result<FinAlgebra> {
    let mi = Int::from(m);
    if m == 1 {
        return FinAlgebra::named(name, FinAbGroup::trivial(), Vec::new(), Vec::new());
    }
    let additive = FinAbGroup::new(vec![mi; k])?;
    let mut mul = vec![vec![vec![Int::zero(); k]; k]; k];
    for (a, row) in mul.iter_mut().enumerate() {
        for (b, v) in row.iter_mut().enumerate() {
            if let Some(c) = prod(a, b) {
                v[c] = Int::one();
            }
        }
    }
    let mut one = vec![Int::zero(); k];
    for &i in one_idx {
        one[i] = Int::one();
    }
    FinAlgebra::named(name, additive, mul, one)
}

pub(crate) fn mul_raw(mul: &[Vec<Vec<Int>>], x: &[Int], y: &[Int]) -> Vec<Int> {
    let k = x.len();
    let mut out = vec![Int::zero(); k];
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            let c = xi * yj;
            for (o, m) in out.iter_mut().zip(&mul[i][j]) {
                if !m.is_zero() {
                    *o += &c * m;
                }
            }
        }
    }
    out
}

pub(crate) fn combine(mats: &[IntMatrix], x: &[Int], n: usize) -> IntMatrix {
    let mut out = IntMatrix::zeros(n, n);
    for (m, c) in mats.iter().zip(x) {
        if !c.is_zero() {
            out = out.add(&m.scale(c));
        }
    }
    out
}

fn check_laws(a: &Inner) -> Result<()> {
    let k = a.additive.rank();
    let g = &a.additive;
    for i in 0..k {
        for j in 0..k {
            let ij = &a.mul[i][j];
            for l in 0..k {
                let lhs = mul_raw(&a.mul, ij, &g.basis(l));
                let rhs = mul_raw(&a.mul, &g.basis(i), &a.mul[j][l]);
                if !g.eq_elements(&lhs, &rhs) {
                    return Err(Error::NotAssociative { i, j, k: l });
                }
            }
        }
    }
    for i in 0..k {
        let b = g.basis(i);
        if !g.eq_elements(&mul_raw(&a.mul, &a.one, &b), &b) || !g.eq_elements(&mul_raw(&a.mul, &b, &a.one), &b) {
            return Err(Error::UnitLaw { i });
        }
    }
    Ok(())
}

/// Greedy choice of basis elements whose words span the ring additively.
fn ring_generators(a: &Inner) -> Vec<usize> {
    let k = a.additive.rank();
    if k == 0 {
        return Vec::new();
    }
    let spans = |gens: &[usize]| -> bool {
        let mut vecs: Vec<Vec<Int>> = vec![a.one.clone()];
        let mut frontier = vecs.clone();
        for _ in 0..=k * k {
            let mut next = Vec::new();
            for v in &frontier {
                for &gi in gens {
                    let w = a.additive.reduced(mul_raw(&a.mul, v, &a.additive.basis(gi)));
                    if !a.additive.is_zero(&w) && !in_span(&a.additive, &vecs, &w) {
                        vecs.push(w.clone());
                        next.push(w);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        spans_all(&a.additive, &vecs)
    };
    let mut gens: Vec<usize> = Vec::new();
    if spans(&gens) {
        return gens;
    }
    for i in 0..k {
        gens.push(i);
        if spans(&gens) {
            break;
        }
    }
    // drop redundant generators
    let mut i = 0;
    while i < gens.len() {
        let mut trial = gens.clone();
        trial.remove(i);
        if spans(&trial) {
            gens = trial;
        } else {
            i += 1;
        }
    }
    gens
}

fn span_quotient(g: &FinAbGroup, vecs: &[Vec<Int>]) -> crate::lattice::Presentation {
    let cols = IntMatrix::from_columns(g.rank(), vecs);
    cokernel_with_torsion(g.factors(), &cols)
}

fn in_span(g: &FinAbGroup, vecs: &[Vec<Int>], w: &[Int]) -> bool {
    let pres = span_quotient(g, vecs);
    pres.group.is_zero(&pres.project(w))
}

fn spans_all(g: &FinAbGroup, vecs: &[Vec<Int>]) -> bool {
    span_quotient(g, vecs).group.is_trivial()
}

/// An element of a [`FinAlgebra`] with reduced coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RingElement {
    pub owner: FinAlgebra,
    pub coords: Vec<Int>,
}

impl RingElement {
    pub fn mul(&self, other: &RingElement) -> RingElement {
        assert!(self.owner == other.owner, "elements of different rings");
        self.owner.element(self.owner.mul(&self.coords, &other.coords))
    }

    pub fn add(&self, other: &RingElement) -> RingElement {
        assert!(self.owner == other.owner, "elements of different rings");
        self.owner.element(self.owner.add(&self.coords, &other.coords))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn v(xs: &[i64]) -> Vec<Int> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn z6_is_valid_commutative() {
        let g = FinAbGroup::new(v(&[6])).unwrap();
        let a = FinAlgebra::new(g, vec![vec![v(&[1])]], v(&[1])).unwrap();
        assert!(a.is_commutative());
    }

    #[test]
    fn matrix_units_noncommutative() {
        let a = FinAlgebra::catalog("matrix", &[2, 5]).unwrap();
        assert_eq!(a.rank(), 4);
        assert!(!a.is_commutative());
        // E_12 E_21 = E_11, E_21 E_12 = E_22
        assert_eq!(a.mul(&a.basis(1), &a.basis(2)), a.basis(0));
        assert_eq!(a.mul(&a.basis(2), &a.basis(1)), a.basis(3));
    }

    #[test]
    fn broken_matrix_units_rejected() {
        let a = FinAlgebra::catalog("matrix", &[2, 5]).unwrap();
        let mut mul = a.structure().to_vec();
        mul[1][2] = vec![Int::zero(); 4];
        let err = FinAlgebra::new(a.additive().clone(), mul.clone(), a.one().to_vec()).unwrap_err();
        assert!(matches!(err, Error::NotAssociative { .. }), "{err}");
        // (E_11 E_12) E_21 and E_11 (E_12 E_21) both vanish here; the failing
        // triple is (E_12, E_21, E_12)
        let lhs = mul_raw(&mul, &mul_raw(&mul, &a.basis(0), &a.basis(1)), &a.basis(2));
        let rhs = mul_raw(&mul, &a.basis(0), &mul_raw(&mul, &a.basis(1), &a.basis(2)));
        assert_eq!(lhs, rhs);
        let lhs = mul_raw(&mul, &mul_raw(&mul, &a.basis(1), &a.basis(2)), &a.basis(1));
        let rhs = mul_raw(&mul, &a.basis(1), &mul_raw(&mul, &a.basis(2), &a.basis(1)));
        assert_eq!(lhs, a.zero());
        assert_eq!(rhs, a.basis(1));
    }

    #[test]
    fn group_algebra_commutative_by_exhaustion() {
        let a = FinAlgebra::catalog("group-algebra", &[4, 2]).unwrap();
        let elems = a.additive().elements().unwrap();
        for x in &elems {
            for y in &elems {
                assert_eq!(a.mul(x, y), a.mul(y, x));
            }
        }
        assert!(a.is_commutative());
    }

    #[test]
    fn catalog_shapes() {
        assert_eq!(FinAlgebra::catalog("cyclic", &[6]).unwrap().additive().factors(), &[int(6)]);
        let m = FinAlgebra::catalog("matrix", &[2, 3]).unwrap();
        assert_eq!(m.additive().factors(), &[int(3), int(3), int(3), int(3)]);
        assert_eq!(FinAlgebra::catalog("group-algebra", &[2, 3]).unwrap().rank(), 3);
        assert!(FinAlgebra::catalog("upper-triangular", &[4]).is_ok());
        assert!(FinAlgebra::catalog("integers", &[]).unwrap().additive().factors() == [int(0)]);
        assert!(matches!(FinAlgebra::catalog("nope", &[]), Err(Error::UnknownCatalog(_))));
        assert!(matches!(FinAlgebra::catalog("matrix", &[2]), Err(Error::InvalidParameter(_))));
        assert!(FinAlgebra::catalog("cyclic", &[1]).unwrap().is_zero_ring());
    }

    #[test]
    fn opposite_is_involution() {
        for (name, p) in [("matrix", vec![2, 3]), ("upper-triangular", vec![6]), ("group-algebra", vec![3, 3])] {
            let a = FinAlgebra::catalog(name, &p).unwrap();
            assert_eq!(a.opposite().opposite(), a);
        }
    }

    #[test]
    fn from_orders_normalizes_product_ring() {
        // Z/2 × Z/3 as two idempotents
        let mul = vec![vec![v(&[1, 0]), v(&[0, 0])], vec![v(&[0, 0]), v(&[0, 1])]];
        let a = FinAlgebra::from_orders(&v(&[2, 3]), mul, v(&[1, 1])).unwrap();
        assert_eq!(a.additive().factors(), &[int(6)]);
        assert!(a.is_commutative());
        assert_eq!(a.one(), &[int(1)]);
    }

    #[test]
    fn generators_are_small() {
        let m = FinAlgebra::catalog("matrix", &[3, 2]).unwrap();
        assert!(m.generators().len() < m.rank());
        assert!(FinAlgebra::catalog("cyclic", &[5]).unwrap().generators().is_empty());
        assert_eq!(FinAlgebra::catalog("group-algebra", &[5, 4]).unwrap().generators().len(), 1);
    }

    #[test]
    fn group_algebra_automorphism() {
        let a = FinAlgebra::catalog("group-algebra", &[3, 5]).unwrap();
        // g ↦ g^2
        let phi = IntMatrix::from_fn(5, 5, |i, j| if i == (2 * j) % 5 { int(1) } else { int(0) });
        assert!(a.is_automorphism(&phi));
        let bad = IntMatrix::from_fn(5, 5, |i, _| if i == 0 { int(1) } else { int(0) });
        assert!(!a.is_automorphism(&bad));
    }
}
