use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::bimodule::HomSpace;
use crate::arith::Int;
use crate::lattice::FinAbGroup;
use num_traits::Signed;

struct Lcg(u64);

impl Lcg {
    fn next(&mut self) -> i64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((self.0 >> 33) % 7) as i64 - 3
    }
}

fn ctx_over(r: &FinAlgebra) -> EndoContext {
    let cache = Arc::new(TensorCache::new());
    let u = cache.unit(r);
    EndoContext::new(cache, &u, &u).unwrap()
}

fn free(ctx: &EndoContext, k: usize) -> Carrier {
    Carrier::from_presentation(&ProjectivePresentation::free(ctx.left_ring(), k)).unwrap()
}

fn scalar_endo(ctx: &EndoContext, c: &Carrier, a: &[&[i64]]) -> TwistedEndo {
    let p = c.module();
    let m = BimoduleMap::new(p.clone(), p.clone(), IntMatrix::from_i64_rows(a)).unwrap();
    TwistedEndo::untwisted(ctx, 1, c.clone(), &m).unwrap()
}

fn random_map(src: &Bimodule, tgt: &Bimodule, rng: &mut Lcg) -> BimoduleMap {
    let h = HomSpace::new(src, tgt).unwrap();
    let y: Vec<Int> = h.generators().iter().map(|_| Int::from(rng.next())).collect();
    h.combination(&y)
}

fn random_tuple(ctx: &EndoContext, carriers: Vec<Carrier>, rng: &mut Lcg) -> TwistedTuple {
    let n = carriers.len();
    let maps = (0..n)
        .map(|j| {
            let src = ctx.source_of(1, carriers[(j + 1) % n].module()).unwrap();
            let tgt = ctx.target_of(1, carriers[j].module()).unwrap();
            random_map(&src, &tgt, rng)
        })
        .collect();
    TwistedTuple::new(ctx, carriers, maps).unwrap()
}

fn value(f: &TwistedEndo) -> IntMatrix {
    f.underlying().unwrap().matrix().clone()
}

#[test]
fn gamma_of_two_and_three_is_six() {
    let z = FinAlgebra::integers();
    let ctx = ctx_over(&z);
    let c = free(&ctx, 1);
    let f2 = scalar_endo(&ctx, &c, &[&[2]]);
    let f3 = scalar_endo(&ctx, &c, &[&[3]]);
    let t = TwistedTuple::new(&ctx, vec![c.clone(), c.clone()], vec![f2.map().clone(), f3.map().clone()]).unwrap();
    let g = gamma(&t).unwrap();
    assert_eq!(g.exponent(), 2);
    assert_eq!(value(&g), IntMatrix::from_i64_rows(&[&[6]]));
    let single = gamma(&TwistedTuple::from_endo(&f2).unwrap()).unwrap();
    assert_eq!(single.map(), f2.map());
}

#[test]
fn frobenius_of_swap_squares() {
    let z = FinAlgebra::integers();
    let ctx = ctx_over(&z);
    let c = free(&ctx, 2);
    let f = scalar_endo(&ctx, &c, &[&[0, 1], &[1, 0]]);
    assert_eq!(value(&f.frobenius(2).unwrap()), IntMatrix::identity(2));
    assert_eq!(value(&f.frobenius(3).unwrap()), value(&f));
    assert_eq!(f.frobenius(1).unwrap().map(), f.map());
}

#[test]
fn verschiebung_of_two_over_integers() {
    let z = FinAlgebra::integers();
    let ctx = ctx_over(&z);
    let c = free(&ctx, 1);
    let f2 = scalar_endo(&ctx, &c, &[&[2]]);
    let id = scalar_endo(&ctx, &c, &[&[1]]);
    let t = TwistedTuple::new(&ctx, vec![c.clone(), c.clone()], vec![f2.map().clone(), id.map().clone()]).unwrap();
    let v = verschiebung_tuple(&t).unwrap();
    let w = ctx.cache().direct_sum(&[c.module().clone(), c.module().clone()]).unwrap();
    let a = v.underlying().unwrap();
    let entry = |i: usize, j: usize| w.projections[i].after(&a.after(&w.injections[j]).unwrap()).unwrap().matrix()[(0, 0)].clone();
    assert_eq!([entry(0, 0), entry(0, 1), entry(1, 0), entry(1, 1)], [0, 2, 1, 0].map(Int::from));

    // The same matrix from the exponent-two endomorphism 2.
    let two = BimoduleMap::new(c.module().clone(), c.module().clone(), IntMatrix::from_i64_rows(&[&[2]])).unwrap();
    let g = TwistedEndo::untwisted(&ctx, 2, c.clone(), &two).unwrap();
    let vg = verschiebung(&g).unwrap();
    let b = vg.underlying().unwrap();
    let w2 = ctx.cache().direct_sum(&[c.module().clone(), vg_second(&ctx, &c)]).unwrap();
    let e2 = |i: usize, j: usize| {
        let m = w2.projections[i].after(&b.after(&w2.injections[j]).unwrap()).unwrap();
        m.matrix().clone()
    };
    assert!(e2(0, 0).is_zero() && e2(1, 1).is_zero());
    assert_eq!(e2(0, 1).determinant().abs(), Int::from(2));
    assert_eq!(e2(1, 0).determinant().abs(), Int::from(1));
}

fn vg_second(ctx: &EndoContext, c: &Carrier) -> Bimodule {
    ctx.source_of(1, c.module()).unwrap()
}

#[test]
fn gamma_coherence_over_z6() {
    let r = FinAlgebra::catalog("cyclic", &[6]).unwrap();
    let ctx = ctx_over(&r);
    let mut rng = Lcg(7);
    for k in [1, 2] {
        let carriers = vec![free(&ctx, k), free(&ctx, 1), free(&ctx, k)];
        let t = random_tuple(&ctx, carriers, &mut rng);
        let left = gamma_prime(&ctx, &gamma_prime(&ctx, &t.step(0), &t.step(1)).unwrap(), &t.step(2)).unwrap();
        let right = gamma_prime(&ctx, &t.step(0), &gamma_prime(&ctx, &t.step(1), &t.step(2)).unwrap()).unwrap();
        assert_eq!(left.map, right.map);
    }
}

#[test]
fn iterated_frobenius_over_z6() {
    let r = FinAlgebra::catalog("cyclic", &[6]).unwrap();
    let ctx = ctx_over(&r);
    let mut rng = Lcg(11);
    let c = free(&ctx, 2);
    let src = ctx.source_of(1, c.module()).unwrap();
    let tgt = ctx.target_of(1, c.module()).unwrap();
    let f = TwistedEndo::new(&ctx, 1, c, random_map(&src, &tgt, &mut rng)).unwrap();
    let f3 = f.frobenius(3).unwrap();
    let f23 = f3.regrade(3).unwrap().frobenius(2).unwrap().degrade(&ctx, 3).unwrap();
    assert_eq!(f23.map(), f.frobenius(6).unwrap().map());
}

#[test]
fn rotation_has_order_n_and_diagonal_is_fixed() {
    let z = FinAlgebra::integers();
    let ctx = ctx_over(&z);
    let mut rng = Lcg(3);
    let t = random_tuple(&ctx, vec![free(&ctx, 1), free(&ctx, 2), free(&ctx, 1)], &mut rng);
    let r3 = t.rotate().rotate().rotate();
    assert_eq!(r3.maps(), t.maps());
    let f = scalar_endo(&ctx, &free(&ctx, 1), &[&[2]]);
    let d = diagonal(&f, 3).unwrap();
    assert_eq!(d.rotate().maps(), d.maps());
    assert!(diagonal(&f.frobenius(2).unwrap(), 2).is_err());
}

#[test]
fn fv_normal_form_matches_composite() {
    let z = FinAlgebra::integers();
    let ctx = ctx_over(&z);
    let mut rng = Lcg(5);
    let t = random_tuple(&ctx, vec![free(&ctx, 1), free(&ctx, 2)], &mut rng);
    let v = verschiebung_tuple(&t).unwrap();
    for m in 1..=4 {
        assert_eq!(fv_formula(&t, m).unwrap().map(), v.frobenius(m).unwrap().map(), "m = {m}");
    }
}

#[test]
fn sums_are_block_diagonal() {
    let z = FinAlgebra::integers();
    let ctx = ctx_over(&z);
    let c = free(&ctx, 1);
    let s = endo_sum(&[scalar_endo(&ctx, &c, &[&[2]]), scalar_endo(&ctx, &c, &[&[3]])]).unwrap();
    assert_eq!(value(&s), IntMatrix::from_i64_rows(&[&[2, 0], &[0, 3]]));
    let mut rng = Lcg(9);
    let a = random_tuple(&ctx, vec![free(&ctx, 1), free(&ctx, 1)], &mut rng);
    let b = random_tuple(&ctx, vec![free(&ctx, 2), free(&ctx, 1)], &mut rng);
    let bp = tuple_sum(&a, &b).unwrap();
    assert_eq!(bp.injections.len(), 2);
    assert!(is_exact(&bp.injections[0], &bp.projections[1]).unwrap());
    assert!(bp.injections[0].rotate().is_ok());
}

#[test]
fn generated_sequences_are_exact() {
    let z = FinAlgebra::integers();
    let ctx = ctx_over(&z);
    let mut rng = Lcg(1);
    let pp = ProjectivePresentation::free(&z, 1);
    let ses = make_ses(&ctx, &pp, &pp, &mut || rng.next()).unwrap();
    assert!(ses.is_exact().unwrap());
    assert_eq!(ses.total.carrier().module().rank(), 2);

    let m3 = FinAlgebra::catalog("matrix", &[2, 3]).unwrap();
    let ctx = ctx_over(&m3);
    let pp = ProjectivePresentation::free(&m3, 1);
    let ses = make_ses(&ctx, &pp, &pp, &mut || rng.next()).unwrap();
    assert!(ses.is_exact().unwrap());
}

#[test]
fn identity_sequence_is_exact_and_torsion_is_rejected() {
    let z = FinAlgebra::integers();
    let ctx = ctx_over(&z);
    let c = free(&ctx, 1);
    let f = scalar_endo(&ctx, &c, &[&[5]]);
    let zero_carrier = Carrier::from_presentation(&ProjectivePresentation::free(&z, 0)).ok();
    let id = TupleMorphism::between(&f, &f, c.module().identity()).unwrap();
    if let Some(zc) = zero_carrier {
        let zero = scalar_endo(&ctx, &zc, &[]);
        let into = TupleMorphism::between(&zero, &f, BimoduleMap::zero(zc.module(), c.module())).unwrap();
        assert!(is_exact(&into, &id).unwrap());
    }
    let z2 = Bimodule::from_parts("Z/2", z.clone(), z.clone(), FinAbGroup::cyclic(2), vec![IntMatrix::identity(1)], vec![IntMatrix::identity(1)]);
    assert!(matches!(Carrier::from_module(&z2, ctx.cache()), Err(Error::NotProjective(_))));
}
