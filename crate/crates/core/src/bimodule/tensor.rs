use alloc::collections::BTreeMap;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;
use spin::RwLock;

use super::{Bimodule, BimoduleMap, DirectSumWitness};
use crate::arith::{gcd, Int};
use crate::error::{Error, Result};
use crate::lattice::{cokernel_with_torsion, Presentation};
use crate::matrix::IntMatrix;

/// The balanced tensor product `X ⊙_S Y` with its presentation over the
/// ambient basis `e_i ⊗ e_j` (index `i·rank(Y) + j`).
#[derive(Debug)]
pub struct TensorWitness {
    left: Bimodule,
    right: Bimodule,
    product: Bimodule,
    pres: Presentation,
}

impl TensorWitness {
    pub fn left(&self) -> &Bimodule {
        &self.left
    }

    pub fn right(&self) -> &Bimodule {
        &self.right
    }

    pub fn product(&self) -> &Bimodule {
        &self.product
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    /// Normal coordinates of `x ⊗ y`.
    pub fn pure(&self, x: &[Int], y: &[Int]) -> Vec<Int> {
        let mut v = vec![Int::zero(); x.len() * y.len()];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                v[i * y.len() + j] = a * b;
            }
        }
        self.pres.project(&v)
    }

    /// A representative of `z` as a sum of basis tensors: `(i, j, coefficient)`.
    pub fn lift_pairs(&self, z: &[Int]) -> Vec<(usize, usize, Int)> {
        let ry = self.right.rank();
        self.pres
            .lift(z)
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k / ry, k % ry, c))
            .collect()
    }
}

/// Deliberate corruptions used by mutation tests of the harness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// The rotation on shadows of tensor powers skips its re-association step.
    SkipRotationMerge,
}

/// Memo table for tensor products, direct sums and structural maps, keyed
/// by object identity. Safe for concurrent readers.
///
/// Iterated tensors are right-normalized: `T([X]) = X`,
/// `T([X, …]) = X ⊙ T([…])`; every other bracketing is reached through
/// [`TensorCache::merge`] / [`TensorCache::split`].
#[derive(Default)]
pub struct TensorCache {
    tensors: RwLock<BTreeMap<(u64, u64), Arc<TensorWitness>>>,
    pub(super) sums: RwLock<BTreeMap<Vec<u64>, Arc<DirectSumWitness>>>,
    maps: RwLock<BTreeMap<(u8, Vec<u64>), BimoduleMap>>,
    units: RwLock<BTreeMap<u64, Bimodule>>,
    pub(crate) shadows: RwLock<BTreeMap<u64, Arc<crate::shadow::Shadow>>>,
    fault: Option<Fault>,
}

const SEP: u64 = u64::MAX;

impl TensorCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// A cache whose downstream consumers apply the given corruption.
    pub fn with_fault(fault: Fault) -> Self {
        TensorCache { fault: Some(fault), ..Self::default() }
    }

    pub fn fault(&self) -> Option<Fault> {
        self.fault
    }

    /// Canonical unit bimodule of a ring.
    pub fn unit(&self, r: &crate::algebra::FinAlgebra) -> Bimodule {
        if let Some(u) = self.units.read().get(&r.id()) {
            return u.clone();
        }
        let mut w = self.units.write();
        w.entry(r.id()).or_insert_with(|| Bimodule::regular(r)).clone()
    }

    pub fn tensor(&self, x: &Bimodule, y: &Bimodule) -> Result<Arc<TensorWitness>> {
        let key = (x.id(), y.id());
        if let Some(t) = self.tensors.read().get(&key) {
            return Ok(t.clone());
        }
        let t = Arc::new(compute_tensor(x, y)?);
        let mut w = self.tensors.write();
        Ok(w.entry(key).or_insert(t).clone())
    }

    pub fn product(&self, x: &Bimodule, y: &Bimodule) -> Result<Bimodule> {
        Ok(self.tensor(x, y)?.product().clone())
    }

    /// Right-normalized iterated tensor `T(list)`.
    pub fn list(&self, list: &[Bimodule]) -> Result<Bimodule> {
        match list {
            [] => Err(Error::ShapeMismatch("empty tensor list".into())),
            [x] => Ok(x.clone()),
            [x, rest @ ..] => {
                let r = self.list(rest)?;
                self.product(x, &r)
            }
        }
    }

    fn memo(&self, kind: u8, key: Vec<u64>, build: impl FnOnce() -> Result<BimoduleMap>) -> Result<BimoduleMap> {
        let k = (kind, key);
        if let Some(m) = self.maps.read().get(&k) {
            return Ok(m.clone());
        }
        let m = build()?;
        let mut w = self.maps.write();
        Ok(w.entry(k).or_insert(m).clone())
    }

    /// `f ⊙ g`. Needs `f` right-linear and `g` left-linear over the middle
    /// ring; the result is as linear as `f` on the left and `g` on the right.
    pub fn tensor_maps(&self, f: &BimoduleMap, g: &BimoduleMap) -> Result<BimoduleMap> {
        if !f.is_right_linear() || !g.is_left_linear() {
            return Err(Error::NotBimoduleMap("tensor of maps needs balanced-linear factors".into()));
        }
        let src = self.tensor(f.source(), g.source())?;
        let tgt = self.tensor(f.target(), g.target())?;
        let (rx, ry) = (f.source().rank(), g.source().rank());
        let ry2 = g.target().rank();
        let from = &src.pres.from_normal;
        let mut cols = Vec::with_capacity(from.cols());
        for u in 0..from.cols() {
            let v = from.column(u);
            let v = kron_apply(&v, rx, ry, 1, g.matrix());
            let v = kron_apply(&v, 1, rx, ry2, f.matrix());
            cols.push(tgt.pres.project(&v));
        }
        let m = IntMatrix::from_columns(tgt.product.rank(), &cols);
        Ok(BimoduleMap::from_parts(src.product.clone(), tgt.product.clone(), m))
    }

    /// `(X ⊙ Y) ⊙ Z → X ⊙ (Y ⊙ Z)`.
    pub fn associator(&self, x: &Bimodule, y: &Bimodule, z: &Bimodule) -> Result<BimoduleMap> {
        self.memo(0, vec![x.id(), y.id(), z.id()], || {
            let xy = self.tensor(x, y)?;
            let src = self.tensor(xy.product(), z)?;
            let yz = self.tensor(y, z)?;
            let tgt = self.tensor(x, yz.product())?;
            let (rx, ry, rz) = (x.rank(), y.rank(), z.rank());
            let from = &src.pres.from_normal;
            let mut cols = Vec::with_capacity(from.cols());
            for u in 0..from.cols() {
                let v = from.column(u);
                let v = kron_apply(&v, 1, xy.product.rank(), rz, &xy.pres.from_normal);
                let v = kron_apply(&v, rx, ry * rz, 1, &yz.pres.to_normal);
                cols.push(tgt.pres.project(&v));
            }
            let m = IntMatrix::from_columns(tgt.product.rank(), &cols);
            Ok(BimoduleMap::from_parts(src.product.clone(), tgt.product.clone(), m))
        })
    }

    /// `X ⊙ (Y ⊙ Z) → (X ⊙ Y) ⊙ Z`.
    pub fn associator_inv(&self, x: &Bimodule, y: &Bimodule, z: &Bimodule) -> Result<BimoduleMap> {
        self.memo(1, vec![x.id(), y.id(), z.id()], || {
            let yz = self.tensor(y, z)?;
            let src = self.tensor(x, yz.product())?;
            let xy = self.tensor(x, y)?;
            let tgt = self.tensor(xy.product(), z)?;
            let (rx, rz) = (x.rank(), z.rank());
            let from = &src.pres.from_normal;
            let mut cols = Vec::with_capacity(from.cols());
            for u in 0..from.cols() {
                let v = from.column(u);
                let v = kron_apply(&v, rx, yz.product.rank(), 1, &yz.pres.from_normal);
                let v = kron_apply(&v, 1, rx * y.rank(), rz, &xy.pres.to_normal);
                cols.push(tgt.pres.project(&v));
            }
            let m = IntMatrix::from_columns(tgt.product.rank(), &cols);
            Ok(BimoduleMap::from_parts(src.product.clone(), tgt.product.clone(), m))
        })
    }

    /// `U_R ⊙ X → X`, `r ⊗ x ↦ r·x`.
    pub fn left_unitor(&self, x: &Bimodule) -> Result<BimoduleMap> {
        let u = self.unit(x.left_ring());
        self.memo(2, vec![x.id()], || {
            let t = self.tensor(&u, x)?;
            let rx = x.rank();
            let from = &t.pres.from_normal;
            let mut cols = Vec::with_capacity(from.cols());
            for c in 0..from.cols() {
                let v = from.column(c);
                let mut out = vec![Int::zero(); rx];
                for (i, l) in x.left_actions().iter().enumerate() {
                    let col = l.mul_vec(&v[i * rx..(i + 1) * rx]);
                    for (o, a) in out.iter_mut().zip(col) {
                        *o += a;
                    }
                }
                cols.push(x.group().reduced(out));
            }
            Ok(BimoduleMap::from_parts(t.product.clone(), x.clone(), IntMatrix::from_columns(rx, &cols)))
        })
    }

    /// `X → U_R ⊙ X`, `x ↦ 1 ⊗ x`.
    pub fn left_unitor_inv(&self, x: &Bimodule) -> Result<BimoduleMap> {
        let u = self.unit(x.left_ring());
        self.memo(3, vec![x.id()], || {
            let t = self.tensor(&u, x)?;
            let one = x.left_ring().one().to_vec();
            let cols: Vec<_> = (0..x.rank()).map(|j| t.pure(&one, &x.group().basis(j))).collect();
            Ok(BimoduleMap::from_parts(x.clone(), t.product.clone(), IntMatrix::from_columns(t.product.rank(), &cols)))
        })
    }

    /// `X ⊙ U_S → X`, `x ⊗ s ↦ x·s`.
    pub fn right_unitor(&self, x: &Bimodule) -> Result<BimoduleMap> {
        let u = self.unit(x.right_ring());
        self.memo(4, vec![x.id()], || {
            let t = self.tensor(x, &u)?;
            let (rx, rs) = (x.rank(), u.rank());
            let from = &t.pres.from_normal;
            let mut cols = Vec::with_capacity(from.cols());
            for c in 0..from.cols() {
                let v = from.column(c);
                let mut out = vec![Int::zero(); rx];
                for i in 0..rx {
                    for (j, rt) in x.right_actions().iter().enumerate() {
                        let a = &v[i * rs + j];
                        if a.is_zero() {
                            continue;
                        }
                        for (k, o) in out.iter_mut().enumerate() {
                            *o += a * &rt[(k, i)];
                        }
                    }
                }
                cols.push(x.group().reduced(out));
            }
            Ok(BimoduleMap::from_parts(t.product.clone(), x.clone(), IntMatrix::from_columns(rx, &cols)))
        })
    }

    /// `X → X ⊙ U_S`, `x ↦ x ⊗ 1`.
    pub fn right_unitor_inv(&self, x: &Bimodule) -> Result<BimoduleMap> {
        let u = self.unit(x.right_ring());
        self.memo(5, vec![x.id()], || {
            let t = self.tensor(x, &u)?;
            let one = x.right_ring().one().to_vec();
            let cols: Vec<_> = (0..x.rank()).map(|j| t.pure(&x.group().basis(j), &one)).collect();
            Ok(BimoduleMap::from_parts(x.clone(), t.product.clone(), IntMatrix::from_columns(t.product.rank(), &cols)))
        })
    }

    /// `id_{T(prefix)} ⊙ g`, as a map `T(prefix ++ [src g]) → T(prefix ++ [tgt g])`.
    pub fn lift_left(&self, prefix: &[Bimodule], g: &BimoduleMap) -> Result<BimoduleMap> {
        match prefix {
            [] => Ok(g.clone()),
            [x, rest @ ..] => {
                let inner = self.lift_left(rest, g)?;
                self.tensor_maps(&x.identity(), &inner)
            }
        }
    }

    /// `T(a) ⊙ T(b) → T(a ++ b)`.
    pub fn merge(&self, a: &[Bimodule], b: &[Bimodule]) -> Result<BimoduleMap> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::ShapeMismatch("merge needs two nonempty lists".into()));
        }
        self.memo(6, list_key(a, b), || {
            let tb = self.list(b)?;
            if a.len() == 1 {
                return Ok(self.product(&a[0], &tb)?.identity());
            }
            let ta1 = self.list(&a[1..])?;
            let assoc = self.associator(&a[0], &ta1, &tb)?;
            let inner = self.merge(&a[1..], b)?;
            let step = self.tensor_maps(&a[0].identity(), &inner)?;
            step.after(&assoc)
        })
    }

    /// `T(a ++ b) → T(a) ⊙ T(b)`.
    pub fn split(&self, a: &[Bimodule], b: &[Bimodule]) -> Result<BimoduleMap> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::ShapeMismatch("split needs two nonempty lists".into()));
        }
        self.memo(7, list_key(a, b), || {
            let tb = self.list(b)?;
            if a.len() == 1 {
                return Ok(self.product(&a[0], &tb)?.identity());
            }
            let inner = self.split(&a[1..], b)?;
            let step = self.tensor_maps(&a[0].identity(), &inner)?;
            let ta1 = self.list(&a[1..])?;
            self.associator_inv(&a[0], &ta1, &tb)?.after(&step)
        })
    }

    /// `T([T(l_1), …, T(l_k)]) → T(l_1 ++ … ++ l_k)`.
    pub fn flatten(&self, lists: &[Vec<Bimodule>]) -> Result<BimoduleMap> {
        match lists {
            [] => Err(Error::ShapeMismatch("empty tensor list".into())),
            [l] => Ok(self.list(l)?.identity()),
            [l, rest @ ..] => {
                let inner = self.flatten(rest)?;
                let head = self.list(l)?;
                let step = self.tensor_maps(&head.identity(), &inner)?;
                let tail: Vec<Bimodule> = rest.iter().flatten().cloned().collect();
                self.merge(l, &tail)?.after(&step)
            }
        }
    }

    /// Inverse of [`TensorCache::flatten`].
    pub fn unflatten(&self, lists: &[Vec<Bimodule>]) -> Result<BimoduleMap> {
        match lists {
            [] => Err(Error::ShapeMismatch("empty tensor list".into())),
            [l] => Ok(self.list(l)?.identity()),
            [l, rest @ ..] => {
                let tail: Vec<Bimodule> = rest.iter().flatten().cloned().collect();
                let split = self.split(l, &tail)?;
                let inner = self.unflatten(rest)?;
                let head = self.list(l)?;
                self.tensor_maps(&head.identity(), &inner)?.after(&split)
            }
        }
    }

    /// Multiplication `T([U_R × n]) → U_R`.
    pub fn collapse_units(&self, r: &crate::algebra::FinAlgebra, n: usize) -> Result<BimoduleMap> {
        let u = self.unit(r);
        if n == 0 {
            return Err(Error::InvalidParameter("need at least one unit factor".into()));
        }
        if n == 1 {
            return Ok(u.identity());
        }
        let inner = self.collapse_units(r, n - 1)?;
        let step = self.tensor_maps(&u.identity(), &inner)?;
        self.left_unitor(&u)?.after(&step)
    }
}

fn list_key(a: &[Bimodule], b: &[Bimodule]) -> Vec<u64> {
    let mut k: Vec<u64> = a.iter().map(Bimodule::id).collect();
    k.push(SEP);
    k.extend(b.iter().map(Bimodule::id));
    k
}

/// Applies `m` to the middle factor of a vector indexed by
/// `(outer, mid, inner)` in row-major order.
pub fn kron_apply(v: &[Int], outer: usize, mid: usize, inner: usize, m: &IntMatrix) -> Vec<Int> {
    assert_eq!(v.len(), outer * mid * inner, "vector length does not match the factor shape");
    assert_eq!(m.cols(), mid, "matrix does not act on the middle factor");
    let out_mid = m.rows();
    let mut out = vec![Int::zero(); outer * out_mid * inner];
    for o in 0..outer {
        for k in 0..mid {
            for i in 0..inner {
                let a = &v[(o * mid + k) * inner + i];
                if a.is_zero() {
                    continue;
                }
                for r in 0..out_mid {
                    let c = &m[(r, k)];
                    if !c.is_zero() {
                        out[(o * out_mid + r) * inner + i] += a * c;
                    }
                }
            }
        }
    }
    out
}

fn compute_tensor(x: &Bimodule, y: &Bimodule) -> Result<TensorWitness> {
    if x.right_ring() != y.left_ring() {
        return Err(Error::RingMismatch(format!(
            "cannot tensor over {} and {}",
            x.right_ring().name(),
            y.left_ring().name()
        )));
    }
    let (rx, ry) = (x.rank(), y.rank());
    let n = rx * ry;
    let mut torsion = Vec::with_capacity(n);
    for dx in x.group().factors() {
        for dy in y.group().factors() {
            torsion.push(gcd(dx, dy));
        }
    }
    let gens = x.right_ring().generators();
    let mut rels = IntMatrix::zeros(n, gens.len() * n);
    let mut col = 0;
    for &k in gens {
        let rt = &x.right_actions()[k];
        let l = &y.left_actions()[k];
        for i in 0..rx {
            for j in 0..ry {
                for i2 in 0..rx {
                    rels[(i2 * ry + j, col)] += &rt[(i2, i)];
                }
                for j2 in 0..ry {
                    rels[(i * ry + j2, col)] -= &l[(j2, j)];
                }
                col += 1;
            }
        }
    }
    let pres = cokernel_with_torsion(&torsion, &rels);
    let g = pres.rank();
    let from = &pres.from_normal;
    let act = |outer: usize, mid: usize, inner: usize, m: &IntMatrix| {
        let cols: Vec<_> = (0..g).map(|u| pres.to_normal.mul_vec(&kron_apply(&from.column(u), outer, mid, inner, m))).collect();
        IntMatrix::from_columns(g, &cols)
    };
    let left: Vec<_> = x.left_actions().iter().map(|l| act(1, rx, ry, l)).collect();
    let right: Vec<_> = y.right_actions().iter().map(|r| act(rx, ry, 1, r)).collect();
    let name = format!("({}⊙{})", x.name(), y.name());
    let product = Bimodule::from_parts(
        &name,
        x.left_ring().clone(),
        y.right_ring().clone(),
        pres.group.clone(),
        left,
        right,
    );
    Ok(TensorWitness { left: x.clone(), right: y.clone(), product, pres })
}
