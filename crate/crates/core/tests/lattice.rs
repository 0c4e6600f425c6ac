use endotrace_core::lattice::{cokernel, smith_normal_form, solve};
use endotrace_core::{FinAbGroup, Int, IntMatrix};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-9i64..=9, rows * cols).prop_map(move |v| {
        IntMatrix::from_fn(rows, cols, |i, j| Int::from(v[i * cols + j]))
    })
}

fn shaped() -> impl Strategy<Value = IntMatrix> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| matrix(r, c))
}

/// Cofactor expansion, fine for the tiny sizes used here.
fn leibniz(m: &IntMatrix) -> Int {
    let n = m.rows();
    if n == 0 {
        return Int::one();
    }
    let mut total = Int::zero();
    for j in 0..n {
        let minor = IntMatrix::from_fn(n - 1, n - 1, |a, b| m[(a + 1, if b < j { b } else { b + 1 })].clone());
        let term = &m[(0, j)] * leibniz(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_form_is_a_factorization(a in shaped()) {
        let s = smith_normal_form(&a);
        prop_assert_eq!(s.u.mul(&a).mul(&s.v), s.d.clone());
        prop_assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(a.rows()));
        prop_assert!(leibniz(&s.u).abs().is_one());
        prop_assert!(leibniz(&s.v).abs().is_one());
        let d = s.diagonal();
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                if i != j {
                    prop_assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        for w in d.windows(2) {
            if !w[1].is_zero() {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
            prop_assert!(!w[0].is_negative());
        }
    }

    #[test]
    fn determinant_is_product_of_invariant_factors(a in (1usize..=4).prop_flat_map(|n| matrix(n, n))) {
        let prod: Int = smith_normal_form(&a).diagonal().iter().product();
        prop_assert_eq!(prod, leibniz(&a).abs());
    }

    #[test]
    fn cokernel_order_matches_determinant(a in (1usize..=3).prop_flat_map(|n| matrix(n, n))) {
        let det = leibniz(&a).abs();
        let order = cokernel(&a).group.order();
        if det.is_zero() {
            prop_assert_eq!(order, None);
        } else {
            prop_assert_eq!(order, Some(det));
        }
    }

    #[test]
    fn solutions_solve(a in shaped(), x in prop::collection::vec(-5i64..=5, 4)) {
        let x: Vec<Int> = x.into_iter().take(a.cols()).map(Int::from).collect();
        let b = a.mul_vec(&x);
        let zeros = vec![Int::zero(); a.rows()];
        let sol = solve(&a, &b, &zeros).expect("b lies in the image");
        prop_assert_eq!(a.mul_vec(&sol.particular), b);
        for c in 0..sol.basis.cols() {
            prop_assert!(a.mul_vec(&sol.basis.column(c)).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn modular_solutions_solve(a in shaped(), m in 2i64..=12, x in prop::collection::vec(-5i64..=5, 4)) {
        let x: Vec<Int> = x.into_iter().take(a.cols()).map(Int::from).collect();
        let moduli = vec![Int::from(m); a.rows()];
        let g = FinAbGroup::new(moduli.clone()).unwrap();
        let b = g.reduced(a.mul_vec(&x));
        let sol = solve(&a, &b, &moduli).expect("b lies in the image");
        prop_assert_eq!(g.reduced(a.mul_vec(&sol.particular)), b);
    }
}

#[test]
fn classical_cokernels() {
    let a = IntMatrix::from_i64_rows(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
    assert_eq!(smith_normal_form(&a).diagonal(), [2, 6, 12].map(Int::from));
    let g = cokernel(&IntMatrix::from_i64_rows(&[&[4, 0], &[0, 6]])).group;
    assert_eq!(g.factors(), &[Int::from(2), Int::from(12)]);
}
