use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use super::{Carrier, EndoContext, TwistedEndo, TwistedTuple};
use crate::arith::Int;
use crate::bimodule::{Bimodule, BimoduleMap, HomSpace};
use crate::dualizable::{ProjectivePresentation, RingMatrix};
use crate::error::{Error, Result};
use crate::lattice::{solve, solve_homogeneous, Presentation};
use crate::matrix::IntMatrix;

/// Componentwise maps `h_j: P_j → Q_j` between tuples of equal length,
/// with `g_j ∘ (id_M ⊙ h_{j+1}) = (h_j ⊙ id_N) ∘ f_j`.
#[derive(Clone, Debug)]
pub struct TupleMorphism {
    source: TwistedTuple,
    target: TwistedTuple,
    maps: Vec<BimoduleMap>,
}

impl TupleMorphism {
    pub fn new(source: &TwistedTuple, target: &TwistedTuple, maps: Vec<BimoduleMap>) -> Result<Self> {
        let n = source.len();
        if target.len() != n || maps.len() != n || source.context() != target.context() {
            return Err(Error::ShapeMismatch("morphism between tuples of different shapes".into()));
        }
        let cache = source.context().cache();
        let m = source.context().m();
        let nn = source.context().n();
        for (j, h) in maps.iter().enumerate() {
            if h.source() != source.carriers()[j].module() || h.target() != target.carriers()[j].module() {
                return Err(Error::ShapeMismatch(alloc::format!("h_{j} does not go P_j → Q_j")));
            }
            h.check()?;
            let left = target.maps()[j].after(&cache.tensor_maps(&m.identity(), &maps[(j + 1) % n])?)?;
            let right = cache.tensor_maps(h, &nn.identity())?.after(&source.maps()[j])?;
            if left != right {
                return Err(Error::NotBimoduleMap(alloc::format!("square {j} does not commute")));
            }
        }
        Ok(TupleMorphism { source: source.clone(), target: target.clone(), maps })
    }

    /// Morphism of exponent-one endomorphisms.
    pub fn between(source: &TwistedEndo, target: &TwistedEndo, h: BimoduleMap) -> Result<Self> {
        Self::new(&TwistedTuple::from_endo(source)?, &TwistedTuple::from_endo(target)?, vec![h])
    }

    pub fn source(&self) -> &TwistedTuple {
        &self.source
    }

    pub fn target(&self) -> &TwistedTuple {
        &self.target
    }

    pub fn maps(&self) -> &[BimoduleMap] {
        &self.maps
    }

    /// The same morphism between rotated tuples.
    pub fn rotate(&self) -> Result<TupleMorphism> {
        let mut maps = self.maps.clone();
        maps.rotate_left(1);
        TupleMorphism::new(&self.source.rotate(), &self.target.rotate(), maps)
    }
}

/// Whether `0 → A → B → C → 0` is exact in every component.
pub fn is_exact(a: &TupleMorphism, b: &TupleMorphism) -> Result<bool> {
    let n = a.maps.len();
    if b.maps.len() != n {
        return Err(Error::ShapeMismatch("sequences of different lengths".into()));
    }
    for j in 0..n {
        if a.target.carriers()[j].module() != b.source.carriers()[j].module() {
            return Err(Error::ShapeMismatch("morphisms are not composable".into()));
        }
        let (f, g) = (&a.maps[j], &b.maps[j]);
        if !f.is_injective()? || !g.is_surjective() || !f.exact_with(g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A short exact sequence of exponent-one endomorphisms
/// `0 → f′ → f → f″ → 0`.
#[derive(Clone, Debug)]
pub struct ExactSequence {
    pub sub: TwistedEndo,
    pub total: TwistedEndo,
    pub quotient: TwistedEndo,
    pub inclusion: TupleMorphism,
    pub projection: TupleMorphism,
}

impl ExactSequence {
    pub fn is_exact(&self) -> Result<bool> {
        is_exact(&self.inclusion, &self.projection)
    }
}

/// A random extension of `lower` by `upper` and a random endomorphism of it
/// preserving the filtration.
///
/// The carrier is `diag(e′, e″)` with left action `[[ρ′, γ], [0, ρ″]]` for a
/// random cocycle `γ`; the endomorphism is drawn from the lattice of maps
/// `M ⊙ P → P ⊙ N` that send `M ⊙ P′` into `P′ ⊙ N`. `coeff` supplies the
/// random integers.
pub fn make_ses(
    ctx: &EndoContext,
    lower: &ProjectivePresentation,
    upper: &ProjectivePresentation,
    coeff: &mut dyn FnMut() -> i64,
) -> Result<ExactSequence> {
    let (r, s) = (ctx.left_ring(), ctx.right_ring());
    for pp in [lower, upper] {
        if pp.left_ring() != r || pp.right_ring() != s {
            return Err(Error::RingMismatch("presentations do not live over the context rings".into()));
        }
    }
    let (k1, k2) = (lower.size(), upper.size());
    let gamma = random_cocycle(lower, upper, coeff);
    let e = RingMatrix::diag(lower.idempotent(), upper.idempotent());
    let hom = (0..r.rank())
        .map(|i| {
            RingMatrix::blocks(&lower.left_hom()[i], &gamma[i], &RingMatrix::zeros(s, k2, k1), &upper.left_hom()[i])
        })
        .collect();
    let total = ProjectivePresentation::new(r, s, e, hom)?;

    let cp = Carrier::from_presentation(&total)?;
    let c1 = Carrier::from_presentation(lower)?;
    let c2 = Carrier::from_presentation(upper)?;
    let (_, pres) = total.materialize_with_presentation();
    let (_, pres1) = lower.materialize_with_presentation();
    let (_, pres2) = upper.materialize_with_presentation();
    let rs = s.rank();
    let (p, p1, p2) = (cp.module(), c1.module(), c2.module());
    let incl = coordinate_map(p1, p, &pres1, &pres, |v| pad(v, 0, k2 * rs));
    let proj = coordinate_map(p, p2, &pres, &pres2, |v| v[k1 * rs..].to_vec());
    let retract = coordinate_map(p, p1, &pres, &pres1, |v| v[..k1 * rs].to_vec());

    let cache = ctx.cache();
    let (m, n) = (ctx.m(), ctx.n());
    let src = cache.product(m, p)?;
    let tgt = cache.product(p, n)?;
    let space = HomSpace::new(&src, &tgt)?;
    let restrict = cache.tensor_maps(&m.identity(), &incl)?;
    let corner = cache.tensor_maps(&proj, &n.identity())?;
    // Coefficient vectors y with (π″ ⊙ id) ∘ Σ y_k g_k ∘ (id ⊙ ι′) = 0.
    let cols: Vec<Vec<Int>> = space
        .generators()
        .iter()
        .map(|g| corner.matrix().mul(&g.mul(restrict.matrix())).data().to_vec())
        .collect();
    let target_rows = corner.target().rank();
    let width = restrict.source().rank();
    let moduli: Vec<Int> = (0..target_rows * width).map(|k| corner.target().group().factors()[k / width].clone()).collect();
    let f = if cols.is_empty() {
        BimoduleMap::zero(&src, &tgt)
    } else {
        let a = IntMatrix::from_columns(target_rows * width, &cols);
        let basis = solve_homogeneous(&a, &moduli);
        let mut y = vec![Int::zero(); cols.len()];
        for c in 0..basis.cols() {
            let w = Int::from(coeff());
            for (k, yk) in y.iter_mut().enumerate() {
                *yk += &w * &basis[(k, c)];
            }
        }
        space.combination(&y)
    };
    f.check()?;

    let sub_map = cache.tensor_maps(&retract, &n.identity())?.after(&f.after(&restrict)?)?;
    let sub_map = BimoduleMap::new(sub_map.source().clone(), sub_map.target().clone(), sub_map.matrix().clone())?;
    let lifted = cache.tensor_maps(&m.identity(), &proj)?;
    let section = additive_section(&lifted)?;
    let quot_matrix = corner.matrix().mul(&f.matrix().mul(&section));
    let quot_map = BimoduleMap::new(lifted.target().clone(), corner.target().clone(), quot_matrix)?;

    let sub = TwistedEndo::new(ctx, 1, c1, sub_map)?;
    let whole = TwistedEndo::new(ctx, 1, cp, f)?;
    let quotient = TwistedEndo::new(ctx, 1, c2, quot_map)?;
    let inclusion = TupleMorphism::between(&sub, &whole, incl)?;
    let projection = TupleMorphism::between(&whole, &quotient, proj)?;
    Ok(ExactSequence { sub, total: whole, quotient, inclusion, projection })
}

fn pad(v: &[Int], before: usize, after: usize) -> Vec<Int> {
    let mut out = vec![Int::zero(); before];
    out.extend_from_slice(v);
    out.extend((0..after).map(|_| Int::zero()));
    out
}

/// The map induced on normal coordinates by a map of free coordinates.
fn coordinate_map(
    source: &Bimodule,
    target: &Bimodule,
    sp: &Presentation,
    tp: &Presentation,
    f: impl Fn(&[Int]) -> Vec<Int>,
) -> BimoduleMap {
    let cols: Vec<Vec<Int>> = (0..source.rank()).map(|x| tp.project(&f(&sp.lift(&source.group().basis(x))))).collect();
    BimoduleMap::from_parts(source.clone(), target.clone(), IntMatrix::from_columns(target.rank(), &cols))
}

/// An additive right inverse of a surjection.
fn additive_section(g: &BimoduleMap) -> Result<IntMatrix> {
    let t = g.target().group();
    let mut cols = Vec::with_capacity(t.rank());
    for j in 0..t.rank() {
        let sol = solve(g.matrix(), &t.basis(j), t.factors()).ok_or_else(|| Error::Dimension("map is not surjective".into()))?;
        cols.push(sol.particular);
    }
    Ok(IntMatrix::from_columns(g.source().rank(), &cols))
}

/// A random `γ: R → e′·M(S)·e″` with `γ(rr′) = ρ′(r)γ(r′) + γ(r)ρ″(r′)`,
/// one matrix per basis element of `R`.
fn random_cocycle(lower: &ProjectivePresentation, upper: &ProjectivePresentation, coeff: &mut dyn FnMut() -> i64) -> Vec<RingMatrix> {
    let (r, s) = (lower.left_ring(), lower.right_ring());
    let (k1, k2, rr, rs) = (lower.size(), upper.size(), r.rank(), s.rank());
    let block = k1 * k2 * rs;
    let unknowns = rr * block;
    let decode = |x: &[Int], i: usize| {
        let entries = (0..k1 * k2).map(|ab| x[i * block + ab * rs..i * block + (ab + 1) * rs].to_vec()).collect();
        RingMatrix::new(s, k1, k2, entries).expect("block has the right size")
    };
    let flat = |m: &RingMatrix| m.entries().iter().flatten().cloned().collect::<Vec<Int>>();
    let (e1, e2) = (lower.idempotent(), upper.idempotent());
    let eval = |x: &[Int]| {
        let gam: Vec<RingMatrix> = (0..rr).map(|i| decode(x, i)).collect();
        let mut out = Vec::new();
        for (i, g) in gam.iter().enumerate() {
            out.extend(flat(&g.sub(&e1.mul(g).mul(e2))));
            let d = &r.additive().factors()[i];
            if !d.is_zero() {
                out.extend(flat(&g.scale(d)));
            }
        }
        for i in 0..rr {
            for j in 0..rr {
                let prod = &r.structure()[i][j];
                let mut lhs = RingMatrix::zeros(s, k1, k2);
                for (c, g) in prod.iter().zip(&gam) {
                    lhs = lhs.add(&g.scale(c));
                }
                let rhs = lower.left_hom()[i].mul(&gam[j]).add(&gam[i].mul(&upper.left_hom()[j]));
                out.extend(flat(&lhs.sub(&rhs)));
            }
        }
        out
    };
    let cols: Vec<Vec<Int>> = (0..unknowns)
        .map(|u| {
            let mut x = vec![Int::zero(); unknowns];
            x[u] = Int::from(1);
            eval(&x)
        })
        .collect();
    let rows = cols.first().map_or(0, Vec::len);
    let moduli: Vec<Int> = (0..rows).map(|k| s.additive().factors()[k % rs].clone()).collect();
    let basis = solve_homogeneous(&IntMatrix::from_columns(rows, &cols), &moduli);
    let mut x = vec![Int::zero(); unknowns];
    for c in 0..basis.cols() {
        let w = Int::from(coeff());
        for (k, xk) in x.iter_mut().enumerate() {
            *xk += &w * &basis[(k, c)];
        }
    }
    let x: Vec<Int> = x.chunks(rs).flat_map(|c| s.additive().reduced(c.to_vec())).collect();
    (0..rr).map(|i| decode(&x, i)).collect()
}
