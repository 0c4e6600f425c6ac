use endotrace::formats::{MatrixJson, Num, Object, ObjectJson, RingJson, WittJson};
use endotrace::generate::{case_rng, Blueprint, Caps, Shape};
use endotrace_core::endo::gamma;
use endotrace_core::shadow::trace;
use endotrace_core::witt::ch;
use endotrace_core::{FinAlgebra, Int, WittVector};

fn reload(obj: &ObjectJson) -> (ObjectJson, Object) {
    let text = serde_json::to_string(obj).unwrap();
    let back: ObjectJson = serde_json::from_str(&text).unwrap();
    let loaded = back.load().unwrap();
    (back, loaded)
}

#[test]
fn endomorphisms_survive_a_round_trip() {
    let caps = Caps::default();
    for case in 0..40 {
        let mut rng = case_rng(7, "formats-endo", case);
        let bp = Blueprint::draw(&mut rng, &Shape::default(), &caps);
        let mut inst = bp.build(None).unwrap();
        let f = inst.endo(0, 1 + case % 2).unwrap();
        let obj = ObjectJson::from_endo(&f);
        let (_, loaded) = reload(&obj);
        let Object::Endo(g) = loaded else { panic!("endo came back as a tuple") };
        assert_eq!(g.matrix(), f.matrix());
        assert_eq!(g.exponent(), f.exponent());
        assert_eq!(serde_json::to_string(&ObjectJson::from_endo(&g)).unwrap(), serde_json::to_string(&obj).unwrap());
        if f.exponent() == 1 {
            assert_eq!(trace(&g).unwrap().matrix(), trace(&f).unwrap().matrix());
        }
    }
}

#[test]
fn tuples_survive_a_round_trip() {
    let caps = Caps::default();
    let shape = Shape { carriers: (2, 3), budget: 4, ..Shape::default() };
    for case in 0..20 {
        let mut rng = case_rng(7, "formats-tuple", case);
        let mut inst = Blueprint::draw(&mut rng, &shape, &caps).build(None).unwrap();
        let t = inst.tuple().unwrap();
        let (_, loaded) = reload(&ObjectJson::from_tuple(&t));
        let Object::Tuple(u) = loaded else { panic!("tuple came back as an endo") };
        assert_eq!(u.len(), t.len());
        let (a, b) = (gamma(&t).unwrap(), gamma(&u).unwrap());
        assert_eq!(a.matrix(), b.matrix());
        assert_eq!(trace(&a).unwrap().matrix(), trace(&b).unwrap().matrix());
    }
}

#[test]
fn large_integers_are_strings() {
    let big: Int = "123456789012345678901234567890".parse().unwrap();
    let text = serde_json::to_string(&vec![Num(Int::from(-5)), Num(big.clone())]).unwrap();
    assert_eq!(text, r#"[-5,"123456789012345678901234567890"]"#);
    let back: Vec<Num> = serde_json::from_str(&text).unwrap();
    assert_eq!(back[1].0, big);
    assert!(serde_json::from_str::<Num>("1.5").is_err());
    assert!(serde_json::from_str::<Num>("[1]").is_err());
}

#[test]
fn catalog_rings_round_trip() {
    for (name, params) in [
        ("cyclic", vec![6]),
        ("integers", vec![]),
        ("matrix", vec![2, 3]),
        ("group-algebra", vec![4, 2]),
        ("upper-triangular", vec![4]),
        ("truncated-polynomial", vec![0, 2]),
    ] {
        let a = FinAlgebra::catalog(name, &params).unwrap();
        let json = RingJson::from_ring(&a);
        let text = serde_json::to_string(&json).unwrap();
        let b = serde_json::from_str::<RingJson>(&text).unwrap().to_ring().unwrap();
        assert_eq!(b.rank(), a.rank(), "{name}");
        assert_eq!(b.additive(), a.additive(), "{name}");
        for i in 0..a.rank() {
            for j in 0..a.rank() {
                assert_eq!(a.mul(&a.basis(i), &a.basis(j)), b.mul(&b.basis(i), &b.basis(j)), "{name}");
            }
        }
    }
}

#[test]
fn witt_vectors_pad_and_round_trip() {
    let w: WittJson = serde_json::from_str(r#"{"N": 5, "coeffs": [2, -1]}"#).unwrap();
    let v = w.to_witt().unwrap();
    assert_eq!(v.bound(), 5);
    assert_eq!(v.coeffs()[2..], [vec![Int::from(0)], vec![Int::from(0)], vec![Int::from(0)]]);
    let again = WittJson::from_witt(&v).to_witt().unwrap();
    assert_eq!(again, v);
    let over_z6: WittJson = serde_json::from_str(r#"{"base": {"orders": [6], "mul": [[[1]]], "one": [1]}, "N": 3, "coeffs": [7]}"#).unwrap();
    let u: WittVector = over_z6.to_witt().unwrap();
    assert_eq!(u.coeffs()[0], vec![Int::from(1)]);
}

#[test]
fn matrices_default_to_the_integers() {
    let m: MatrixJson = serde_json::from_str(r#"{"matrix": [[1, 1], [1, 0]]}"#).unwrap();
    let w = ch(&m.to_matrix().unwrap(), 6).unwrap();
    // Lucas numbers 1, 3, 4, 7, 11, 18 are the power traces of the Fibonacci matrix.
    let ghost: Vec<Int> = w.ghost().components().iter().map(|c| c[0].clone()).collect();
    assert_eq!(ghost, [1, 3, 4, 7, 11, 18].map(Int::from));
}
