use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use super::ProjectivePresentation;
use crate::arith::Int;
use crate::bimodule::{Bimodule, BimoduleMap, HomSpace, TensorCache};
use crate::error::{Error, Result};
use crate::lattice::solve;
use crate::matrix::IntMatrix;

/// Duality data for an `R`-`S`-bimodule `P`: the dual `P*` (an
/// `S`-`R`-bimodule), the coevaluation `η(1) = Σ_a p_a ⊗ φ_a` as a list of
/// terms, and the evaluation `ε: P* ⊙ P → S` as a table on basis pairs.
#[derive(Clone, Debug)]
pub struct DualityData {
    module: Bimodule,
    dual: Bimodule,
    eta_terms: Vec<(Vec<Int>, Vec<Int>)>,
    eps_table: Vec<Vec<Vec<Int>>>,
}

impl DualityData {
    /// Row/column duality of an idempotent presentation.
    pub fn from_presentation(pp: &ProjectivePresentation) -> Result<Self> {
        let (module, pp_pres) = pp.materialize_with_presentation();
        let (dual, dual_pres) = pp.materialize_dual();
        let s = pp.right_ring();
        let (k, rs) = (pp.size(), s.rank());
        let unit_at = |a: usize| {
            let mut v = vec![Int::zero(); k * rs];
            for (c, x) in s.one().iter().enumerate() {
                v[a * rs + c] = x.clone();
            }
            v
        };
        let eta_terms = (0..k).map(|a| (pp_pres.project(&unit_at(a)), dual_pres.project(&unit_at(a)))).collect();
        let e = pp.idempotent();
        let mut eps_table = Vec::with_capacity(dual.rank());
        for u in 0..dual.rank() {
            let row = dual_pres.from_normal.column(u);
            let mut out = Vec::with_capacity(module.rank());
            for v in 0..module.rank() {
                let col = pp_pres.from_normal.column(v);
                let mut acc = s.zero();
                for a in 0..k {
                    let ya = &row[a * rs..(a + 1) * rs];
                    for b in 0..k {
                        let xb = &col[b * rs..(b + 1) * rs];
                        acc = s.add(&acc, &s.mul(&s.mul(ya, e.entry(a, b)), xb));
                    }
                }
                out.push(acc);
            }
            eps_table.push(out);
        }
        let d = DualityData { module, dual, eta_terms, eps_table };
        d.check_elementwise()?;
        Ok(d)
    }

    /// Duality for an arbitrary bimodule: `P* = Hom_S(P, S)`, `ε` evaluation,
    /// and `η` solved from the first triangle identity. `None` when no
    /// coevaluation exists (for instance when `P` is not projective over `S`).
    pub fn generic(p: &Bimodule, cache: &TensorCache) -> Option<Self> {
        let s = p.right_ring();
        let us = cache.unit(s);
        let hom = HomSpace::sided(p, &us, false, true).ok()?;
        let g = hom.group().clone();
        let rp = p.rank();
        let maps: Vec<BimoduleMap> = (0..g.rank()).map(|y| hom.element(&g.basis(y))).collect();
        let coords = |m: &IntMatrix| hom.coords(m).expect("dual is closed under the actions");
        let left = (0..s.rank()).map(|c| {
            let cols: Vec<Vec<Int>> = maps.iter().map(|f| coords(&s.left_basis_matrix(c).mul(f.matrix()))).collect();
            IntMatrix::from_columns(g.rank(), &cols)
        });
        let right = p.left_actions().iter().map(|l| {
            let cols: Vec<Vec<Int>> = maps.iter().map(|f| coords(&f.matrix().mul(l))).collect();
            IntMatrix::from_columns(g.rank(), &cols)
        });
        let dual = Bimodule::from_parts("P*", s.clone(), p.left_ring().clone(), g.clone(), left.collect(), right.collect());
        let eps_table: Vec<Vec<Vec<Int>>> =
            maps.iter().map(|f| (0..rp).map(|v| f.matrix().column(v)).map(|x| s.additive().reduced(x)).collect()).collect();
        let t = cache.tensor(p, &dual).ok()?;
        let prod = t.product();
        // Φ(z)(x) = Σ p·ε(φ, x) for z = Σ p ⊗ φ, as a matrix on flattened End(P).
        let mut phi_cols = Vec::with_capacity(prod.rank());
        for u in 0..prod.rank() {
            let mut m = IntMatrix::zeros(rp, rp);
            for (i, j, c) in t.lift_pairs(&prod.group().basis(u)) {
                for x in 0..rp {
                    let v = p.act_right(&p.group().basis(i), &eps_table[j][x]);
                    for (r, val) in v.into_iter().enumerate() {
                        m[(r, x)] += &c * val;
                    }
                }
            }
            phi_cols.push(m.data().to_vec());
        }
        let mut a = IntMatrix::from_columns(rp * rp, &phi_cols);
        let mut b: Vec<Int> = IntMatrix::identity(rp).data().to_vec();
        let mut moduli: Vec<Int> = (0..rp * rp).map(|k| p.group().factors()[k / rp].clone()).collect();
        for &gi in p.left_ring().generators() {
            let c = prod.left_actions()[gi].sub(&prod.right_actions()[gi]);
            a = a.vstack(&c);
            b.extend((0..prod.rank()).map(|_| Int::zero()));
            moduli.extend(prod.group().factors().iter().cloned());
        }
        let sol = solve(&a, &b, &moduli)?;
        let z = prod.group().reduced(sol.particular);
        let eta_terms = t
            .lift_pairs(&z)
            .into_iter()
            .map(|(i, j, c)| (p.group().scale(&c, &p.group().basis(i)), dual.group().basis(j)))
            .collect();
        let d = DualityData { module: p.clone(), dual, eta_terms, eps_table };
        d.check_elementwise().ok()?;
        Some(d)
    }

    /// Duality for `X ⊙ Y` from duality data of `X` and `Y`; the dual is `Y* ⊙ X*`.
    pub fn composite(cache: &TensorCache, x: &DualityData, y: &DualityData) -> Result<Self> {
        let txy = cache.tensor(&x.module, &y.module)?;
        let tdual = cache.tensor(&y.dual, &x.dual)?;
        let mut eta_terms = Vec::with_capacity(x.eta_terms.len() * y.eta_terms.len());
        for (xa, phia) in &x.eta_terms {
            for (yb, psib) in &y.eta_terms {
                eta_terms.push((txy.pure(xa, yb), tdual.pure(psib, phia)));
            }
        }
        let t_ring = y.module.right_ring();
        let dual_lifts: Vec<_> = (0..tdual.product().rank()).map(|u| tdual.lift_pairs(&tdual.product().group().basis(u))).collect();
        let mod_lifts: Vec<_> = (0..txy.product().rank()).map(|v| txy.lift_pairs(&txy.product().group().basis(v))).collect();
        let mut eps_table = Vec::with_capacity(dual_lifts.len());
        for du in &dual_lifts {
            let mut row = Vec::with_capacity(mod_lifts.len());
            for mv in &mod_lifts {
                let mut acc = t_ring.zero();
                for (i, j, c) in du {
                    for (k, l, c2) in mv {
                        let inner = &x.eps_table[*j][*k];
                        let psi = y.dual.act_right(&y.dual.group().basis(*i), inner);
                        let val = y.eps(&psi, &y.module.group().basis(*l));
                        acc = t_ring.add(&acc, &t_ring.additive().scale(&(c * c2), &val));
                    }
                }
                row.push(acc);
            }
            eps_table.push(row);
        }
        let d = DualityData { module: txy.product().clone(), dual: tdual.product().clone(), eta_terms, eps_table };
        d.compress(cache)
    }

    /// Blockwise duality for a direct sum.
    pub fn direct_sum(cache: &TensorCache, parts: &[DualityData]) -> Result<Self> {
        let mods: Vec<Bimodule> = parts.iter().map(|d| d.module.clone()).collect();
        let duals: Vec<Bimodule> = parts.iter().map(|d| d.dual.clone()).collect();
        let ds = cache.direct_sum(&mods)?;
        let dd = cache.direct_sum(&duals)?;
        let mut eta_terms = Vec::new();
        for (j, d) in parts.iter().enumerate() {
            for (p, phi) in &d.eta_terms {
                eta_terms.push((ds.injections[j].apply(p), dd.injections[j].apply(phi)));
            }
        }
        let s = ds.module.right_ring().clone();
        let mut eps_table = Vec::with_capacity(dd.module.rank());
        for u in 0..dd.module.rank() {
            let phi = dd.module.group().basis(u);
            let row = (0..ds.module.rank())
                .map(|v| {
                    let p = ds.module.group().basis(v);
                    let mut acc = s.zero();
                    for (j, d) in parts.iter().enumerate() {
                        let val = d.eps(&dd.projections[j].apply(&phi), &ds.projections[j].apply(&p));
                        acc = s.add(&acc, &val);
                    }
                    acc
                })
                .collect();
            eps_table.push(row);
        }
        let d = DualityData { module: ds.module.clone(), dual: dd.module.clone(), eta_terms, eps_table };
        d.check_elementwise()?;
        Ok(d)
    }

    /// Rewrites `η(1)` through the tensor presentation, which bounds the
    /// number of terms by `rank(P)·rank(P*)`.
    fn compress(self, cache: &TensorCache) -> Result<Self> {
        let t = cache.tensor(&self.module, &self.dual)?;
        if self.eta_terms.len() > self.module.rank() * self.dual.rank() {
            let mut z = t.product().group().zero();
            for (p, phi) in &self.eta_terms {
                z = t.product().group().add(&z, &t.pure(p, phi));
            }
            let terms = t
                .lift_pairs(&z)
                .into_iter()
                .map(|(i, j, c)| (self.module.group().scale(&c, &self.module.group().basis(i)), self.dual.group().basis(j)))
                .collect();
            let d = DualityData { eta_terms: terms, ..self };
            d.check_elementwise()?;
            return Ok(d);
        }
        self.check_elementwise()?;
        Ok(self)
    }

    /// The same data with the left ring of `P` restricted to the integers.
    pub fn forget_left(&self) -> Result<Self> {
        let d = DualityData {
            module: self.module.forget_to_integers(true, false),
            dual: self.dual.forget_to_integers(false, true),
            eta_terms: self.eta_terms.clone(),
            eps_table: self.eps_table.clone(),
        };
        d.check_elementwise()?;
        Ok(d)
    }

    pub fn module(&self) -> &Bimodule {
        &self.module
    }

    pub fn dual(&self) -> &Bimodule {
        &self.dual
    }

    /// Terms `(p_a, φ_a)` of `η(1) = Σ p_a ⊗ φ_a`.
    pub fn eta_terms(&self) -> &[(Vec<Int>, Vec<Int>)] {
        &self.eta_terms
    }

    /// `ε(φ ⊗ p) ∈ S`.
    pub fn eps(&self, phi: &[Int], p: &[Int]) -> Vec<Int> {
        let s = self.module.right_ring();
        let mut acc = vec![Int::zero(); s.rank()];
        for (i, a) in phi.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in p.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let c = a * b;
                for (o, x) in acc.iter_mut().zip(&self.eps_table[i][j]) {
                    *o += &c * x;
                }
            }
        }
        s.additive().reduced(acc)
    }

    /// Both triangle identities on basis elements, plus centrality of `η(1)`
    /// and balancing of `ε`.
    pub fn check_elementwise(&self) -> Result<()> {
        let (p, d) = (&self.module, &self.dual);
        let (s, r) = (p.right_ring(), p.left_ring());
        for x in 0..p.rank() {
            let xb = p.group().basis(x);
            let mut acc = p.group().zero();
            for (pa, phia) in &self.eta_terms {
                acc = p.group().add(&acc, &p.act_right(pa, &self.eps(phia, &xb)));
            }
            if !p.group().eq_elements(&acc, &xb) {
                return Err(Error::TriangleIdentity(format!("Σ p_a·ε(φ_a, x) ≠ x at basis {x}")));
            }
        }
        for u in 0..d.rank() {
            let ub = d.group().basis(u);
            let mut acc = d.group().zero();
            for (pa, phia) in &self.eta_terms {
                acc = d.group().add(&acc, &d.act_left(&self.eps(&ub, pa), phia));
            }
            if !d.group().eq_elements(&acc, &ub) {
                return Err(Error::TriangleIdentity(format!("Σ ε(φ, p_a)·φ_a ≠ φ at basis {u}")));
            }
        }
        for &g in r.generators() {
            let rg = r.basis(g);
            for u in 0..d.rank() {
                for v in 0..p.rank() {
                    let lhs = self.eps(&d.act_right(&d.group().basis(u), &rg), &p.group().basis(v));
                    let rhs = self.eps(&d.group().basis(u), &p.act_left(&rg, &p.group().basis(v)));
                    if !s.eq_elements(&lhs, &rhs) {
                        return Err(Error::TriangleIdentity("evaluation is not balanced over the left ring".into()));
                    }
                }
            }
        }
        for &g in s.generators() {
            let sg = s.basis(g);
            for u in 0..d.rank() {
                for v in 0..p.rank() {
                    let (ub, vb) = (d.group().basis(u), p.group().basis(v));
                    let l = self.eps(&d.act_left(&sg, &ub), &vb);
                    let r2 = self.eps(&ub, &p.act_right(&vb, &sg));
                    if !s.eq_elements(&l, &s.mul(&sg, &self.eps(&ub, &vb)))
                        || !s.eq_elements(&r2, &s.mul(&self.eps(&ub, &vb), &sg))
                    {
                        return Err(Error::TriangleIdentity("evaluation is not S-linear".into()));
                    }
                }
            }
        }
        Ok(())
    }

    /// `η: U_R → P ⊙ P*` as a bimodule map.
    pub fn eta(&self, cache: &TensorCache) -> Result<BimoduleMap> {
        let r = self.module.left_ring();
        let u = cache.unit(r);
        let t = cache.tensor(&self.module, &self.dual)?;
        let prod = t.product();
        let cols: Vec<Vec<Int>> = (0..r.rank())
            .map(|i| {
                let mut acc = prod.group().zero();
                for (pa, phia) in &self.eta_terms {
                    acc = prod.group().add(&acc, &t.pure(&self.module.act_left(&r.basis(i), pa), phia));
                }
                acc
            })
            .collect();
        BimoduleMap::new(u, prod.clone(), IntMatrix::from_columns(prod.rank(), &cols))
    }

    /// `ε: P* ⊙ P → U_S` as a bimodule map.
    pub fn eps_map(&self, cache: &TensorCache) -> Result<BimoduleMap> {
        let s = self.module.right_ring();
        let u = cache.unit(s);
        let t = cache.tensor(&self.dual, &self.module)?;
        let prod = t.product();
        let cols: Vec<Vec<Int>> = (0..prod.rank())
            .map(|w| {
                let mut acc = s.zero();
                for (i, j, c) in t.lift_pairs(&prod.group().basis(w)) {
                    acc = s.add(&acc, &s.additive().scale(&c, &self.eps_table[i][j]));
                }
                acc
            })
            .collect();
        BimoduleMap::new(prod.clone(), u, IntMatrix::from_columns(s.rank(), &cols))
    }

    /// Both triangle identities as matrix equations between materialized
    /// maps, with associators and unitors inserted.
    pub fn check_triangles(&self, cache: &TensorCache) -> Result<()> {
        let (p, d) = (&self.module, &self.dual);
        let eta = self.eta(cache)?;
        let eps = self.eps_map(cache)?;
        let t1 = cache
            .left_unitor_inv(p)?
            .then(&cache.tensor_maps(&eta, &p.identity())?)?
            .then(&cache.associator(p, d, p)?)?
            .then(&cache.tensor_maps(&p.identity(), &eps)?)?
            .then(&cache.right_unitor(p)?)?;
        if t1 != p.identity() {
            return Err(Error::TriangleIdentity("(id ⊙ ε)(η ⊙ id) ≠ id on P".into()));
        }
        let t2 = cache
            .right_unitor_inv(d)?
            .then(&cache.tensor_maps(&d.identity(), &eta)?)?
            .then(&cache.associator_inv(d, p, d)?)?
            .then(&cache.tensor_maps(&eps, &d.identity())?)?
            .then(&cache.left_unitor(d)?)?;
        if t2 != d.identity() {
            return Err(Error::TriangleIdentity("(ε ⊙ id)(id ⊙ η) ≠ id on P*".into()));
        }
        Ok(())
    }

    /// The same data with `η` scaled by a unit: only for tests of the checks.
    #[doc(hidden)]
    pub fn with_scaled_eta(&self, c: i64) -> Self {
        let g = self.module.group();
        let eta_terms = self.eta_terms.iter().map(|(p, phi)| (g.scale(&Int::from(c), p), phi.clone())).collect();
        DualityData { eta_terms, ..self.clone() }
    }
}
