use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use super::{Bimodule, BimoduleMap};
use crate::arith::Int;
use crate::error::{Error, Result};
use crate::lattice::{cokernel_with_torsion, solve, solve_homogeneous, FinAbGroup, Subquotient};
use crate::matrix::IntMatrix;

/// The group of additive maps `source → target` commuting with the chosen
/// actions, as a subquotient of the matrix lattice.
///
/// Matrices are flattened row-major: unknown `(i, j)` has index `i·rank(source) + j`.
#[derive(Clone, Debug)]
pub struct HomSpace {
    source: Bimodule,
    target: Bimodule,
    generators: Vec<IntMatrix>,
    quotient: Subquotient,
}

impl HomSpace {
    /// Bimodule homomorphisms.
    pub fn new(source: &Bimodule, target: &Bimodule) -> Result<Self> {
        Self::sided(source, target, true, true)
    }

    /// Maps linear for the left action (if `left`) and the right action (if `right`).
    pub fn sided(source: &Bimodule, target: &Bimodule, left: bool, right: bool) -> Result<Self> {
        if (left && source.left_ring() != target.left_ring()) || (right && source.right_ring() != target.right_ring()) {
            return Err(Error::RingMismatch("hom between bimodules over different rings".into()));
        }
        let (s, t) = (source.rank(), target.rank());
        let df = source.group().factors();
        let nf = target.group().factors();
        let mut rows: Vec<Vec<Int>> = Vec::new();
        let mut moduli: Vec<Int> = Vec::new();
        let unknowns = s * t;
        for i in 0..t {
            for j in 0..s {
                if df[j].is_zero() {
                    continue;
                }
                let mut r = vec![Int::zero(); unknowns];
                r[i * s + j] = df[j].clone();
                rows.push(r);
                moduli.push(nf[i].clone());
            }
        }
        let mut pairs: Vec<(&IntMatrix, &IntMatrix)> = Vec::new();
        if left {
            for &g in source.left_ring().generators() {
                pairs.push((&source.left_actions()[g], &target.left_actions()[g]));
            }
        }
        if right {
            for &g in source.right_ring().generators() {
                pairs.push((&source.right_actions()[g], &target.right_actions()[g]));
            }
        }
        // F·A − B·F ≡ 0 row-wise modulo the target factors.
        for (a, b) in pairs {
            for i in 0..t {
                for j in 0..s {
                    let mut r = vec![Int::zero(); unknowns];
                    for k in 0..s {
                        r[i * s + k] += &a[(k, j)];
                    }
                    for k in 0..t {
                        r[k * s + j] -= &b[(i, k)];
                    }
                    rows.push(r);
                    moduli.push(nf[i].clone());
                }
            }
        }
        let basis = if rows.is_empty() {
            IntMatrix::identity(unknowns)
        } else {
            solve_homogeneous(&IntMatrix::from_rows(&rows, unknowns), &moduli)
        };
        let mut zero_gens = Vec::new();
        for i in 0..t {
            for j in 0..s {
                if !nf[i].is_zero() {
                    let mut v = vec![Int::zero(); unknowns];
                    v[i * s + j] = nf[i].clone();
                    zero_gens.push(v);
                }
            }
        }
        let sub = IntMatrix::from_columns(unknowns, &zero_gens);
        let quotient = Subquotient::new(basis.clone(), &sub)
            .ok_or_else(|| Error::Dimension("hom lattice basis is not independent".into()))?;
        let generators = (0..basis.cols())
            .map(|c| target.group().reduced_rows(unflatten(&basis.column(c), t, s)))
            .filter(|m| !m.is_zero())
            .collect();
        Ok(HomSpace { source: source.clone(), target: target.clone(), generators, quotient })
    }

    pub fn source(&self) -> &Bimodule {
        &self.source
    }

    pub fn target(&self) -> &Bimodule {
        &self.target
    }

    /// Nonzero generating matrices of the solution lattice.
    pub fn generators(&self) -> &[IntMatrix] {
        &self.generators
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.quotient.pres.group
    }

    /// `Σ c_k · generator_k`.
    pub fn combination(&self, coeffs: &[Int]) -> BimoduleMap {
        let mut m = IntMatrix::zeros(self.target.rank(), self.source.rank());
        for (g, c) in self.generators.iter().zip(coeffs) {
            if !c.is_zero() {
                m = m.add(&g.scale(c));
            }
        }
        BimoduleMap::from_parts(self.source.clone(), self.target.clone(), m)
    }

    /// Normal coordinates of a map in the hom group.
    pub fn coords(&self, f: &IntMatrix) -> Option<Vec<Int>> {
        self.quotient.coords(f.data())
    }

    /// The map with normal coordinates `y`.
    pub fn element(&self, y: &[Int]) -> BimoduleMap {
        let v = self.quotient.element(y);
        let m = unflatten(&v, self.target.rank(), self.source.rank());
        BimoduleMap::from_parts(self.source.clone(), self.target.clone(), m)
    }
}

fn unflatten(v: &[Int], rows: usize, cols: usize) -> IntMatrix {
    IntMatrix::from_fn(rows, cols, |i, j| v[i * cols + j].clone())
}

/// A kernel with its inclusion.
#[derive(Clone, Debug)]
pub struct KernelWitness {
    pub module: Bimodule,
    pub inclusion: BimoduleMap,
}

/// A cokernel with its projection.
#[derive(Clone, Debug)]
pub struct CokernelWitness {
    pub module: Bimodule,
    pub projection: BimoduleMap,
    lift: IntMatrix,
}

impl BimoduleMap {
    /// `{x : f(x) = 0}` as a sub-bimodule of the source.
    pub fn kernel(&self) -> Result<KernelWitness> {
        let src = self.source();
        let sg = src.group();
        let lattice = solve_homogeneous(self.matrix(), self.target().group().factors());
        let torsion: Vec<Vec<Int>> = (0..sg.rank())
            .filter(|&i| !sg.factors()[i].is_zero())
            .map(|i| {
                let mut v = unit_vec(sg.rank(), i);
                v[i] = sg.factors()[i].clone();
                v
            })
            .collect();
        let sub = IntMatrix::from_columns(sg.rank(), &torsion);
        let sq = Subquotient::new(lattice, &sub)
            .ok_or_else(|| Error::Dimension("kernel lattice basis is not independent".into()))?;
        let k = sq.pres.group.rank();
        let incl_cols: Vec<Vec<Int>> = (0..k).map(|y| sg.reduced(sq.element(&unit_vec(k, y)))).collect();
        let incl = IntMatrix::from_columns(sg.rank(), &incl_cols);
        let act = |m: &IntMatrix| {
            let cols: Vec<Vec<Int>> = incl_cols
                .iter()
                .map(|x| sq.coords(&m.mul_vec(x)).expect("kernel is a sub-bimodule"))
                .collect();
            IntMatrix::from_columns(k, &cols)
        };
        let left = src.left_actions().iter().map(act).collect();
        let right = src.right_actions().iter().map(act).collect();
        let module = Bimodule::from_parts(
            "ker",
            src.left_ring().clone(),
            src.right_ring().clone(),
            sq.pres.group.clone(),
            left,
            right,
        );
        let inclusion = BimoduleMap::from_parts(module.clone(), src.clone(), incl);
        Ok(KernelWitness { module, inclusion })
    }

    /// `target / im f` with its projection.
    pub fn cokernel(&self) -> CokernelWitness {
        let tgt = self.target();
        let pres = cokernel_with_torsion(tgt.group().factors(), self.matrix());
        let k = pres.rank();
        let act = |m: &IntMatrix| pres.to_normal.mul(&m.mul(&pres.from_normal));
        let left = tgt.left_actions().iter().map(act).collect();
        let right = tgt.right_actions().iter().map(act).collect();
        let module = Bimodule::from_parts(
            "coker",
            tgt.left_ring().clone(),
            tgt.right_ring().clone(),
            pres.group.clone(),
            left,
            right,
        );
        debug_assert_eq!(module.rank(), k);
        let projection = BimoduleMap::from_parts(tgt.clone(), module.clone(), pres.to_normal.clone());
        CokernelWitness { module, projection, lift: pres.from_normal }
    }

    pub fn is_injective(&self) -> Result<bool> {
        Ok(self.kernel()?.module.group().is_trivial())
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().module.group().is_trivial()
    }

    /// Whether `x` lies in the image.
    pub fn image_contains(&self, x: &[Int]) -> bool {
        solve(self.matrix(), x, self.target().group().factors()).is_some()
    }

    /// Whether `self` then `next` is exact at the middle object.
    pub fn exact_with(&self, next: &BimoduleMap) -> Result<bool> {
        if !next.after(self)?.is_zero() {
            return Ok(false);
        }
        let ker = next.kernel()?;
        Ok((0..ker.module.rank()).all(|y| self.image_contains(&ker.inclusion.matrix().column(y))))
    }
}

impl KernelWitness {
    /// The unique `u` with `inclusion ∘ u = g`, if `g` lands in the kernel.
    pub fn factor(&self, g: &BimoduleMap) -> Option<BimoduleMap> {
        let m = self.inclusion.target().group();
        let mut cols = Vec::with_capacity(g.source().rank());
        for j in 0..g.source().rank() {
            let sol = solve(self.inclusion.matrix(), &g.matrix().column(j), m.factors())?;
            cols.push(sol.particular);
        }
        let u = BimoduleMap::from_parts(g.source().clone(), self.module.clone(), IntMatrix::from_columns(self.module.rank(), &cols));
        (self.inclusion.after(&u).ok()? == *g).then_some(u)
    }
}

impl CokernelWitness {
    /// The unique `v` with `v ∘ projection = h`, if `h` kills the image.
    pub fn factor(&self, h: &BimoduleMap) -> Option<BimoduleMap> {
        let v = BimoduleMap::from_parts(self.module.clone(), h.target().clone(), h.matrix().mul(&self.lift));
        (v.after(&self.projection).ok()? == *h).then_some(v)
    }
}

fn unit_vec(n: usize, i: usize) -> Vec<Int> {
    let mut v = vec![Int::zero(); n];
    v[i] = Int::from(1);
    v
}
