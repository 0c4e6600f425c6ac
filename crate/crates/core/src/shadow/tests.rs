use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::algebra::FinAlgebra;
use crate::bimodule::HomSpace;
use crate::dualizable::{DualityData, ProjectivePresentation, RingMatrix};
use crate::endo::{self, gamma, verschiebung, verschiebung_tuple, Carrier, EndoContext, TwistedEndo, TwistedTuple};

struct Lcg(u64);

impl Lcg {
    fn next(&mut self) -> i64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((self.0 >> 33) % 9) as i64 - 4
    }
}

fn int_ctx() -> EndoContext {
    let cache = Arc::new(TensorCache::new());
    let u = cache.unit(&FinAlgebra::integers());
    EndoContext::new(cache, &u, &u).unwrap()
}

fn free(ctx: &EndoContext, k: usize) -> Carrier {
    Carrier::from_presentation(&ProjectivePresentation::free(ctx.right_ring(), k)).unwrap()
}

fn untwisted(ctx: &EndoContext, c: &Carrier, rows: &[&[i64]]) -> TwistedEndo {
    let p = c.module();
    let a = BimoduleMap::new(p.clone(), p.clone(), IntMatrix::from_i64_rows(rows)).unwrap();
    TwistedEndo::untwisted(ctx, 1, c.clone(), &a).unwrap()
}

fn scalar(m: &ShadowMap) -> i64 {
    assert_eq!((m.matrix().rows(), m.matrix().cols()), (1, 1));
    crate::arith::to_i64(&m.matrix()[(0, 0)]).unwrap()
}

fn random_endo(ctx: &EndoContext, c: &Carrier, rng: &mut Lcg) -> TwistedEndo {
    let src = ctx.source_of(1, c.module()).unwrap();
    let tgt = ctx.target_of(1, c.module()).unwrap();
    let h = HomSpace::new(&src, &tgt).unwrap();
    let y: Vec<Int> = h.generators().iter().map(|_| Int::from(rng.next())).collect();
    TwistedEndo::new(ctx, 1, c.clone(), h.combination(&y)).unwrap()
}

fn random_tuple(ctx: &EndoContext, carriers: Vec<Carrier>, rng: &mut Lcg) -> TwistedTuple {
    let n = carriers.len();
    let maps = (0..n)
        .map(|j| {
            let src = ctx.source_of(1, carriers[(j + 1) % n].module()).unwrap();
            let tgt = ctx.target_of(1, carriers[j].module()).unwrap();
            let h = HomSpace::new(&src, &tgt).unwrap();
            let y: Vec<Int> = h.generators().iter().map(|_| Int::from(rng.next())).collect();
            h.combination(&y)
        })
        .collect();
    TwistedTuple::new(ctx, carriers, maps).unwrap()
}

/// `M_2(Z/3)` twisted on the left by conjugation with `[[1,1],[0,1]]`.
fn conjugation_twist(r: &FinAlgebra) -> Bimodule {
    let g: Vec<Int> = [1, 1, 0, 1].iter().map(|&x| Int::from(x)).collect();
    let ginv: Vec<Int> = [1, 2, 0, 1].iter().map(|&x| Int::from(x)).collect();
    let cols: Vec<Vec<Int>> = (0..4).map(|i| r.mul(&r.mul(&g, &r.basis(i)), &ginv)).collect();
    let phi = IntMatrix::from_columns(4, &cols);
    Bimodule::twisted(r, &phi, &IntMatrix::identity(4)).unwrap()
}

#[test]
fn shadows_of_small_rings() {
    let cache = TensorCache::new();
    let a = FinAlgebra::catalog("cyclic", &[6]).unwrap();
    let sa = shadow(&cache, &cache.unit(&a)).unwrap();
    assert_eq!(sa.group(), a.additive());
    let m = FinAlgebra::catalog("matrix", &[2, 5]).unwrap();
    let sm = shadow(&cache, &cache.unit(&m)).unwrap();
    assert_eq!(sm.group(), &FinAbGroup::cyclic(5));
    // The projection is the matrix trace up to a unit: E00 and E11 agree, E01 dies.
    let e = |i| sm.project(&m.basis(i));
    assert_eq!(e(0), e(3));
    assert!(sm.group().is_zero(&e(1)));
    let z = Bimodule::zero(&m, &m);
    assert!(shadow(&cache, &z).unwrap().group().is_trivial());
}

#[test]
fn theta_is_an_involution() {
    let cache = TensorCache::new();
    let r = FinAlgebra::catalog("matrix", &[2, 3]).unwrap();
    let x = conjugation_twist(&r);
    let y = cache.unit(&r);
    let t1 = theta(&cache, &x, &y).unwrap();
    let t2 = theta(&cache, &y, &x).unwrap();
    assert_eq!(t2.after(&t1).unwrap(), ShadowMap::identity(t1.source()));
    assert!(t1.is_isomorphism());
}

#[test]
fn rotation_has_order_n() {
    let cache = TensorCache::new();
    let r = FinAlgebra::catalog("matrix", &[2, 3]).unwrap();
    let m = conjugation_twist(&r);
    for n in 1..=3 {
        let s = varsigma(&cache, &m, n).unwrap();
        assert_eq!(s.pow(n).unwrap(), ShadowMap::identity(s.source()), "n = {n}");
    }
    let a = FinAlgebra::catalog("cyclic", &[4]).unwrap();
    let s = varsigma(&cache, &cache.unit(&a), 3).unwrap();
    assert_eq!(s, ShadowMap::identity(s.source()));
}

#[test]
fn traces_over_the_integers() {
    let ctx = int_ctx();
    let c2 = free(&ctx, 2);
    let f = untwisted(&ctx, &c2, &[&[1, 2], &[3, 4]]);
    assert_eq!(scalar(&trace(&f).unwrap()), 5);
    assert_eq!(trace_literal(&f).unwrap(), trace(&f).unwrap());
    let id3 = untwisted(&ctx, &free(&ctx, 3), &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
    assert_eq!(scalar(&trace(&id3).unwrap()), 3);

    let two = untwisted(&ctx, &free(&ctx, 1), &[&[2]]);
    let seq: Vec<i64> = trace_sequence(&two, 4).unwrap().iter().map(scalar).collect();
    assert_eq!(seq, [2, 4, 8, 16]);
    let swap = untwisted(&ctx, &c2, &[&[0, 1], &[1, 0]]);
    let seq: Vec<i64> = trace_sequence(&swap, 4).unwrap().iter().map(scalar).collect();
    assert_eq!(seq, [0, 2, 0, 2]);
}

#[test]
fn verschiebung_of_two_has_ghost_0_4_0_8() {
    let ctx = int_ctx();
    let c = free(&ctx, 1);
    let two = BimoduleMap::new(c.module().clone(), c.module().clone(), IntMatrix::from_i64_rows(&[&[2]])).unwrap();
    let f = TwistedEndo::untwisted(&ctx, 2, c, &two).unwrap();
    let v = verschiebung(&f).unwrap();
    let seq: Vec<i64> = trace_sequence(&v, 4).unwrap().iter().map(scalar).collect();
    assert_eq!(seq, [0, 4, 0, 8]);
    let b: Vec<i64> = b_map(&ctx, 2, &trace_sequence(&f, 2).unwrap(), 4).unwrap().iter().map(scalar).collect();
    assert_eq!(b, seq);
}

#[test]
fn fv_trace_over_integers_is_twelve() {
    let ctx = int_ctx();
    let c = free(&ctx, 1);
    let (f2, f3) = (untwisted(&ctx, &c, &[&[2]]), untwisted(&ctx, &c, &[&[3]]));
    let t = TwistedTuple::new(&ctx, vec![c.clone(), c.clone()], vec![f2.map().clone(), f3.map().clone()]).unwrap();
    assert_eq!(scalar(&trace(&endo::fv_formula(&t, 2).unwrap()).unwrap()), 12);
    assert_eq!(scalar(&trace(&verschiebung_tuple(&t).unwrap()).unwrap()), 0);
}

/// `R = Z/3`, `S = M_2(Z/3)`, `P = E11·S`, `N` a conjugation twist of `S`.
fn corner_context() -> (EndoContext, Carrier) {
    let cache = Arc::new(TensorCache::new());
    let r = FinAlgebra::catalog("cyclic", &[3]).unwrap();
    let s = FinAlgebra::catalog("matrix", &[2, 3]).unwrap();
    let e11 = s.basis(0);
    let e = RingMatrix::scalar(&s, 1, &e11);
    let pp = ProjectivePresentation::new(&r, &s, e.clone(), vec![e]).unwrap();
    let ctx = EndoContext::new(cache.clone(), &cache.unit(&r), &conjugation_twist(&s)).unwrap();
    (ctx, Carrier::from_presentation(&pp).unwrap())
}

#[test]
fn twisted_traces_are_equivariant_and_match_literal() {
    let (ctx, c) = corner_context();
    let mut rng = Lcg(21);
    for _ in 0..3 {
        let t = random_tuple(&ctx, vec![c.clone(), c.clone(), c.clone()], &mut rng);
        let g = gamma(&t).unwrap();
        let gr = gamma(&t.rotate()).unwrap();
        let sm = varsigma(ctx.cache(), ctx.m(), 3).unwrap();
        let sn = varsigma(ctx.cache(), ctx.n(), 3).unwrap();
        let tr = trace(&g).unwrap();
        assert_eq!(sn.after(&tr).unwrap(), trace(&gr).unwrap().after(&sm).unwrap());
        assert_eq!(trace_literal(&g).unwrap(), tr);
        // F^n V = transfer.
        let lhs = trace(&verschiebung_tuple(&t).unwrap().frobenius(3).unwrap()).unwrap();
        assert_eq!(lhs, transfer(&ctx, &tr, 3, 1).unwrap());
    }
}

#[test]
fn frobenius_and_verschiebung_on_ghosts() {
    let (ctx, c) = corner_context();
    let mut rng = Lcg(4);
    let f = random_endo(&ctx, &c, &mut rng);
    for (n, i) in [(2, 1), (2, 2), (3, 1)] {
        let lhs = trace_power(&f.frobenius(n).unwrap(), i).unwrap();
        let rhs = phi(&ctx, n, i, &trace(&f.frobenius(n * i).unwrap()).unwrap()).unwrap();
        assert_eq!(lhs, rhs, "n = {n}, i = {i}");
    }
    // M = R here, so V^n of an exponent-n map is available.
    let g = f.frobenius(2).unwrap();
    let v = verschiebung(&g).unwrap();
    let lhs = trace_sequence(&v, 4).unwrap();
    let rhs = b_map(&ctx, 2, &trace_sequence(&g, 2).unwrap(), 4).unwrap();
    assert_eq!(lhs, rhs);
    assert!(lhs[0].is_zero() && lhs[2].is_zero());
}

#[test]
fn additivity_on_generated_sequences() {
    let (ctx, c) = corner_context();
    let pp = c.presentation().unwrap().clone();
    let mut rng = Lcg(8);
    for _ in 0..2 {
        let ses = endo::make_ses(&ctx, &pp, &pp, &mut || rng.next()).unwrap();
        assert!(ses.is_exact().unwrap());
        let total = trace(&ses.total).unwrap();
        let parts = trace(&ses.sub).unwrap().add(&trace(&ses.quotient).unwrap()).unwrap();
        assert_eq!(total, parts);
    }
}

#[test]
fn forgetting_the_left_base() {
    let cache = Arc::new(TensorCache::new());
    let r = FinAlgebra::catalog("matrix", &[2, 3]).unwrap();
    let u = cache.unit(&r);
    let ctx = EndoContext::new(cache.clone(), &u, &u).unwrap();
    let c = free(&ctx, 1);
    let mut rng = Lcg(2);
    let f = random_endo(&ctx, &c, &mut rng);
    let lhs = trace_forget_left(&f).unwrap();
    let rhs = trace(&f).unwrap().after(&forget_quotient(&f).unwrap()).unwrap();
    assert_eq!(lhs.source().group().order(), Some(Int::from(81)));
    assert_eq!(lhs, rhs);
}

#[test]
fn trace_does_not_depend_on_duality_data() {
    let (ctx, c) = corner_context();
    let generic = Carrier::from_duality(DualityData::generic(c.module(), ctx.cache()).unwrap());
    let mut rng = Lcg(13);
    let f = random_endo(&ctx, &c, &mut rng);
    let g = TwistedEndo::new(&ctx, 1, generic, f.map().clone()).unwrap();
    assert_eq!(trace(&f).unwrap(), trace(&g).unwrap());
}

#[test]
fn skipped_merge_breaks_the_rotation() {
    let cache = TensorCache::with_fault(Fault::SkipRotationMerge);
    let r = FinAlgebra::catalog("matrix", &[2, 3]).unwrap();
    let m = cache.direct_sum(&[cache.unit(&r), conjugation_twist(&r)]).unwrap().module.clone();
    let s = varsigma(&cache, &m, 3).unwrap();
    let ok = TensorCache::new();
    let good = varsigma(&ok, &m, 3).unwrap();
    assert_eq!(good.pow(3).unwrap(), ShadowMap::identity(good.source()));
    assert_ne!(s.matrix(), good.matrix());
}
