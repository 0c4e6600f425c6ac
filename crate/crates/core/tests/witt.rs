use endotrace_core::witt::{ch, ch_integer};
use endotrace_core::{FinAlgebra, Int, IntMatrix, RingMatrix, WittVector};
use proptest::prelude::*;

fn coeffs(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-6i64..=6, n)
}

fn square(n: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-3i64..=3, n * n).prop_map(move |v| IntMatrix::from_fn(n, n, |i, j| Int::from(v[i * n + j])))
}

fn trace(m: &IntMatrix) -> Int {
    (0..m.rows()).map(|i| m[(i, i)].clone()).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms_over_the_integers(a in coeffs(5), b in coeffs(5), c in coeffs(5)) {
        let z = FinAlgebra::integers();
        let (a, b, c) = (
            WittVector::from_ints(&z, &a).unwrap(),
            WittVector::from_ints(&z, &b).unwrap(),
            WittVector::from_ints(&z, &c).unwrap(),
        );
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
        let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn ghost_is_a_ring_map(a in coeffs(6), b in coeffs(6)) {
        let z = FinAlgebra::integers();
        let (a, b) = (WittVector::from_ints(&z, &a).unwrap(), WittVector::from_ints(&z, &b).unwrap());
        prop_assert_eq!(a.add(&b).unwrap().ghost(), a.ghost().add(&b.ghost()).unwrap());
        let prod: Vec<Vec<Int>> = a
            .ghost()
            .components()
            .iter()
            .zip(b.ghost().components())
            .map(|(x, y)| vec![&x[0] * &y[0]])
            .collect();
        let g = a.mul(&b).unwrap().ghost();
        prop_assert_eq!(g.components(), &prod[..]);
    }

    #[test]
    fn frobenius_and_verschiebung(a in coeffs(8), n in 1usize..=4) {
        let z = FinAlgebra::integers();
        let w = WittVector::from_ints(&z, &a).unwrap();
        let g = w.ghost();
        let f = w.frobenius(n).unwrap().ghost();
        for (m, x) in f.components().iter().enumerate() {
            prop_assert_eq!(x, &g.components()[(m + 1) * n - 1]);
        }
        let v = w.verschiebung(n).unwrap().ghost();
        for (m, x) in v.components().iter().enumerate() {
            let expect = if (m + 1) % n == 0 { &g.components()[(m + 1) / n - 1][0] * Int::from(n) } else { Int::from(0) };
            prop_assert_eq!(&x[0], &expect);
        }
    }

    #[test]
    fn ghost_of_ch_is_power_traces(f in (1usize..=4).prop_flat_map(square)) {
        let c = ch_integer(&f, 8).unwrap();
        let g = c.ghost();
        let mut p = f.clone();
        for n in 0..8 {
            prop_assert_eq!(&g.components()[n][0], &trace(&p));
            p = p.mul(&f);
        }
    }

    #[test]
    fn ch_is_multiplicative_on_kronecker_products(f in square(2), g in square(2)) {
        let lhs = ch_integer(&IntMatrix::kron(&f, &g), 6).unwrap();
        let rhs = ch_integer(&f, 6).unwrap().mul(&ch_integer(&g, 6).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reduction_commutes_with_products(a in coeffs(5), b in coeffs(5), m in 2u64..=12) {
        let z = FinAlgebra::integers();
        let zm = FinAlgebra::catalog("cyclic", &[m]).unwrap();
        let over_z = WittVector::from_ints(&z, &a).unwrap().mul(&WittVector::from_ints(&z, &b).unwrap()).unwrap();
        let over_m = WittVector::from_ints(&zm, &a).unwrap().mul(&WittVector::from_ints(&zm, &b).unwrap()).unwrap();
        prop_assert_eq!(WittVector::new(&zm, over_z.coeffs().to_vec()).unwrap(), over_m);
    }
}

#[test]
fn ch_of_zero_and_of_a_scalar() {
    let zero = IntMatrix::zeros(3, 3);
    let z = FinAlgebra::integers();
    assert_eq!(ch_integer(&zero, 5).unwrap(), WittVector::one(&z, 5).unwrap());
    let two = IntMatrix::from_i64_rows(&[&[2]]);
    let g: Vec<Int> = ch_integer(&two, 4).unwrap().ghost().components().iter().map(|c| c[0].clone()).collect();
    assert_eq!(g, [2, 4, 8, 16].map(Int::from));
}

#[test]
fn ch_over_a_group_algebra() {
    // The regular representation of the generator of C_3 over Z/5.
    let a = FinAlgebra::catalog("group-algebra", &[5, 3]).unwrap();
    let g = a.basis(1);
    let f = RingMatrix::new(&a, 1, 1, vec![g.clone()]).unwrap();
    let c = ch(&f, 6).unwrap();
    // (1 − g t)^{-1} = Σ g^k t^k.
    for (k, x) in c.coeffs().iter().enumerate() {
        assert_eq!(x, &a.pow(&g, k as u32 + 1));
    }
}
