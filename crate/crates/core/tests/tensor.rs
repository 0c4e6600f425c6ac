use endotrace_core::{Bimodule, BimoduleMap, FinAbGroup, FinAlgebra, Int, IntMatrix, TensorCache};
use endotrace_core::bimodule::HomSpace;
use proptest::prelude::*;

fn cyclic_over_z(a: u64) -> Bimodule {
    let z = FinAlgebra::integers();
    let g = FinAbGroup::from_orders(&[Int::from(a)]).group;
    let id = IntMatrix::identity(g.rank());
    Bimodule::new(z.clone(), z, g, vec![id.clone()], vec![id]).unwrap()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn cyclic_tensor_products(a in 0u64..=12, b in 0u64..=12) {
        let cache = TensorCache::new();
        let p = cache.product(&cyclic_over_z(a), &cyclic_over_z(b)).unwrap();
        let expect = FinAbGroup::from_orders(&[Int::from(gcd(a, b))]).group;
        prop_assert_eq!(p.group(), &expect);
    }

    #[test]
    fn associators_are_inverse_isomorphisms(
        picks in prop::collection::vec(0usize..3, 3),
        ring in prop::sample::select(vec![("cyclic", vec![6u64]), ("matrix", vec![2, 2]), ("upper-triangular", vec![3])]),
    ) {
        let cache = TensorCache::new();
        let r = FinAlgebra::catalog(ring.0, &ring.1).unwrap();
        let u = cache.unit(&r);
        let uu = cache.direct_sum(&[u.clone(), u.clone()]).unwrap().module.clone();
        let z = Bimodule::zero(&r, &r);
        let pool = [u, uu, z];
        let (x, y, w) = (&pool[picks[0]], &pool[picks[1]], &pool[picks[2]]);
        let a = cache.associator(x, y, w).unwrap();
        let b = cache.associator_inv(x, y, w).unwrap();
        prop_assert!(a.check().is_ok());
        prop_assert_eq!(b.after(&a).unwrap(), a.source().identity());
        prop_assert_eq!(a.after(&b).unwrap(), b.source().identity());
    }

    #[test]
    fn hom_generators_are_bimodule_maps(coeffs in prop::collection::vec(-4i64..=4, 16)) {
        let cache = TensorCache::new();
        let r = FinAlgebra::catalog("upper-triangular", &[4]).unwrap();
        let u = cache.unit(&r);
        let h = HomSpace::new(&u, &u).unwrap();
        let y: Vec<Int> = coeffs.iter().take(h.generators().len()).map(|&c| Int::from(c)).collect();
        let f = h.combination(&y);
        prop_assert!(f.check().is_ok());
        // Right multiplications by ring elements are the endomorphisms of the
        // regular bimodule that commute with the left action; bimodule maps are
        // right multiplication by central elements.
        let x = f.apply(r.one());
        for i in 0..r.rank() {
            let b = r.basis(i);
            prop_assert!(r.eq_elements(&f.apply(&b), &r.mul(&b, &x)));
            prop_assert!(r.eq_elements(&r.mul(&b, &x), &r.mul(&x, &b)));
        }
    }
}

#[test]
fn pentagon_over_matrix_ring() {
    let cache = TensorCache::new();
    let r = FinAlgebra::catalog("matrix", &[2, 3]).unwrap();
    let u = cache.unit(&r);
    let two = cache.direct_sum(&[u.clone(), u.clone()]).unwrap().module.clone();
    let (a, b, c, d) = (two.clone(), u.clone(), two.clone(), u.clone());
    let ab = cache.product(&a, &b).unwrap();
    let cd = cache.product(&c, &d).unwrap();
    let bc = cache.product(&b, &c).unwrap();
    // ((ab)c)d → (ab)(cd) → a(b(cd))
    let top = cache
        .associator(&a, &b, &cd)
        .unwrap()
        .after(&cache.associator(&ab, &c, &d).unwrap())
        .unwrap();
    // ((ab)c)d → (a(bc))d → a((bc)d) → a(b(cd))
    let bottom = cache
        .tensor_maps(&a.identity(), &cache.associator(&b, &c, &d).unwrap())
        .unwrap()
        .after(&cache.associator(&a, &bc, &d).unwrap())
        .unwrap()
        .after(&cache.tensor_maps(&cache.associator(&a, &b, &c).unwrap(), &d.identity()).unwrap())
        .unwrap();
    assert_eq!(top.matrix(), bottom.matrix());
    let unit_map = BimoduleMap::new(u.clone(), u.clone(), IntMatrix::identity(u.rank())).unwrap();
    assert_eq!(cache.tensor_maps(&unit_map, &unit_map).unwrap().matrix(), &IntMatrix::identity(cache.product(&u, &u).unwrap().rank()));
}
