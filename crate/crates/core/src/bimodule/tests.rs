use super::*;
use crate::arith::int;

fn z() -> FinAlgebra {
    FinAlgebra::integers()
}

fn cyclic_over_z(m: i64) -> Bimodule {
    let g = FinAbGroup::new(vec![int(m)]).unwrap();
    let id = IntMatrix::identity(1);
    Bimodule::new(z(), z(), g, vec![id.clone()], vec![id]).unwrap()
}

#[test]
fn cyclic_tensor_is_gcd() {
    let cache = TensorCache::new();
    let t = cache.tensor(&cyclic_over_z(4), &cyclic_over_z(6)).unwrap();
    assert_eq!(t.product().group().factors(), &[int(2)]);
    assert_eq!(t.pure(&[int(1)], &[int(1)]), vec![int(1)]);
}

#[test]
fn associator_of_coprime_cyclics_is_zero_identity() {
    let cache = TensorCache::new();
    let (a, b, c) = (cyclic_over_z(4), cyclic_over_z(6), cyclic_over_z(9));
    let f = cache.associator(&a, &b, &c).unwrap();
    assert!(f.source().group().is_trivial());
    assert!(f.target().group().is_trivial());
}

#[test]
fn regular_module_validates_and_unitors_invert() {
    let r = FinAlgebra::catalog("matrix", &[2, 3]).unwrap();
    let cache = TensorCache::new();
    let u = cache.unit(&r);
    u.validate().unwrap();
    let l = cache.left_unitor(&u).unwrap();
    let li = cache.left_unitor_inv(&u).unwrap();
    l.check().unwrap();
    li.check().unwrap();
    assert_eq!(l.after(&li).unwrap(), u.identity());
    assert_eq!(li.after(&l).unwrap(), cache.product(&u, &u).unwrap().identity());
    let rt = cache.right_unitor(&u).unwrap();
    let rti = cache.right_unitor_inv(&u).unwrap();
    assert_eq!(rt.after(&rti).unwrap(), u.identity());
}

#[test]
fn kernel_of_reduction_mod_two() {
    let f = BimoduleMap::new(cyclic_over_z(4), cyclic_over_z(2), IntMatrix::identity(1)).unwrap();
    let k = f.kernel().unwrap();
    assert_eq!(k.module.group().factors(), &[int(2)]);
    // exhaustive oracle over Z/4
    let image: Vec<Int> = (0..2).map(|y| k.inclusion.apply(&[int(y)])[0].clone()).collect();
    let zeros: Vec<Int> = (0..4).filter(|x| x % 2 == 0).map(int).collect();
    let mut image_sorted = image.clone();
    image_sorted.sort();
    assert_eq!(image_sorted, zeros);
}

#[test]
fn merge_and_split_are_inverse() {
    let r = FinAlgebra::catalog("cyclic", &[6]).unwrap();
    let cache = TensorCache::new();
    let u = cache.unit(&r);
    let m = Bimodule::regular(&r);
    let a = vec![m.clone(), u.clone()];
    let b = vec![m.clone(), m.clone()];
    let merge = cache.merge(&a, &b).unwrap();
    let split = cache.split(&a, &b).unwrap();
    merge.check().unwrap();
    assert_eq!(merge.after(&split).unwrap(), merge.target().identity());
    assert_eq!(split.after(&merge).unwrap(), merge.source().identity());
}
