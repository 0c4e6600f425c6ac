use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use super::*;
use crate::arith::int;

fn m(rows: &[&[i64]]) -> IntMatrix {
    IntMatrix::from_i64_rows(rows)
}

/// gcd of all i×i minors, by brute-force enumeration of row/column subsets.
fn determinant_divisor(a: &IntMatrix, i: usize) -> Int {
    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in 0..n {
            for rest in subsets(n, k - 1) {
                if rest.first().map_or(true, |&r| r > first) {
                    let mut v = vec![first];
                    v.extend(rest);
                    out.push(v);
                }
            }
        }
        out
    }
    let mut g = Int::zero();
    for rs in subsets(a.rows(), i) {
        for cs in subsets(a.cols(), i) {
            g = g.gcd(&a.select_rows(&rs).select_cols(&cs).determinant());
        }
    }
    g
}

fn oracle_factors(a: &IntMatrix) -> Vec<Int> {
    let r = a.rows().min(a.cols());
    let mut out = Vec::new();
    let mut prev = int(1);
    for i in 1..=r {
        let di = determinant_divisor(a, i);
        if di.is_zero() {
            out.push(Int::zero());
            prev = Int::zero();
        } else {
            out.push(&di / &prev);
            prev = di;
        }
    }
    out
}

fn check_snf(a: &IntMatrix) {
    let s = smith_normal_form(a);
    assert_eq!(s.u.mul(a).mul(&s.v), s.d, "U·A·V = D");
    assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(a.rows()));
    assert!(s.u.determinant().abs() == int(1));
    assert!(s.v.determinant().abs() == int(1));
    for i in 0..s.d.rows() {
        for j in 0..s.d.cols() {
            if i != j {
                assert!(s.d[(i, j)].is_zero());
            }
        }
    }
    let diag = s.diagonal();
    for w in diag.windows(2) {
        assert!(crate::arith::divides(&w[0], &w[1]), "chain {diag:?}");
    }
}

#[test]
fn snf_diag_2_3() {
    let a = m(&[&[2, 0], &[0, 3]]);
    check_snf(&a);
    let s = smith_normal_form(&a);
    assert_eq!(s.diagonal(), vec![int(1), int(6)]);
    assert_eq!(oracle_factors(&a), vec![int(1), int(6)]);
}

#[test]
fn snf_zero_and_identity() {
    let z = IntMatrix::zeros(2, 2);
    let s = smith_normal_form(&z);
    assert_eq!(s.d, z);
    let one = m(&[&[1]]);
    let s = smith_normal_form(&one);
    assert_eq!(s.d, one);
    assert_eq!(s.u, one);
    assert_eq!(s.v, one);
}

#[test]
fn snf_rectangular_and_empty() {
    check_snf(&m(&[&[4, 6, 8], &[6, 9, 12]]));
    check_snf(&m(&[&[0, 0], &[0, 5], &[10, 0]]));
    check_snf(&IntMatrix::zeros(3, 0));
    check_snf(&IntMatrix::zeros(0, 3));
}

#[test]
fn cokernel_examples() {
    let p = cokernel(&m(&[&[4]]));
    assert_eq!(p.group.factors(), &[int(4)]);
    let p = cokernel(&m(&[&[2, 0], &[0, 3]]));
    assert_eq!(p.group.factors(), &[int(6)]);
    let p = cokernel(&IntMatrix::zeros(2, 0));
    assert_eq!(p.group, FinAbGroup::free(2));
}

#[test]
fn cokernel_modular_matches_integer_route() {
    // Z/4 ⊕ Z/6 ⊕ Z/9 with one extra relation
    let torsion = [int(4), int(6), int(9)];
    let rel = m(&[&[2], &[3], &[3]]);
    let fast = cokernel_with_torsion(&torsion, &rel);
    let mut full = IntMatrix::zeros(3, 4);
    full.set_block(0, 0, &rel);
    for i in 0..3 {
        full[(i, i + 1)] = torsion[i].clone();
    }
    let slow = cokernel(&full);
    assert_eq!(fast.group, slow.group);
    assert_eq!(oracle_factors(&full).into_iter().filter(|d| d != &int(1)).collect::<Vec<_>>(), slow.group.factors());
}

#[test]
fn direct_sum_normalizes() {
    let a = FinAbGroup::cyclic(2);
    let b = FinAbGroup::cyclic(3);
    let s = FinAbGroup::direct_sum(&[&a, &b]);
    assert_eq!(s.group.factors(), &[int(6)]);
    // π_i ∘ ι_j = δ_ij, ι_1π_1 + ι_2π_2 = id
    for i in 0..2 {
        for j in 0..2 {
            let g = if i == 0 { &a } else { &b };
            let comp = g.reduced_rows(s.projections[i].mul(&s.injections[j]));
            let expect = if i == j { IntMatrix::identity(g.rank()) } else { IntMatrix::zeros(g.rank(), if j == 0 { a.rank() } else { b.rank() }) };
            assert_eq!(comp, expect);
        }
    }
    let sum = s.injections[0].mul(&s.projections[0]).add(&s.injections[1].mul(&s.projections[1]));
    assert_eq!(s.group.reduced_rows(sum), IntMatrix::identity(1));
}

#[test]
fn solve_examples() {
    assert!(solve(&m(&[&[2]]), &[int(1)], &[int(0)]).is_none());
    let s = solve(&m(&[&[2]]), &[int(0)], &[int(4)]).unwrap();
    // exhaustive oracle over Z/4
    let brute: Vec<i64> = (0..4).filter(|x| (2 * x) % 4 == 0).collect();
    assert_eq!(brute, vec![0, 2]);
    let mut found: Vec<i64> = Vec::new();
    for c in -4..4i64 {
        let x = (&s.particular[0] + &s.basis[(0, 0)] * int(c)).mod_floor(&int(4));
        let x: i64 = x.try_into().unwrap();
        if !found.contains(&x) {
            found.push(x);
        }
    }
    found.sort();
    assert_eq!(found, brute);
    let id = IntMatrix::identity(3);
    let b = [int(5), int(-2), int(7)];
    let s = solve(&id, &b, &[int(0), int(0), int(0)]).unwrap();
    assert_eq!(s.particular, b.to_vec());
    assert_eq!(s.basis.cols(), 0);
}

#[test]
fn subquotient_even_mod_eight() {
    // L = 2Z, L0 = 8Z: L/L0 = Z/4
    let sq = Subquotient::new(m(&[&[2]]), &m(&[&[8]])).unwrap();
    assert_eq!(sq.pres.group.factors(), &[int(4)]);
    assert_eq!(sq.coords(&[int(6)]).unwrap().len(), 1);
    assert!(sq.coords(&[int(3)]).is_none());
    let y = sq.coords(&[int(6)]).unwrap();
    let back = sq.element(&y);
    assert!((&back[0] - int(6)).mod_floor(&int(8)).is_zero());
}

fn small_matrix(max: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        proptest::collection::vec(-50i64..=50, r * c)
            .prop_map(move |v| IntMatrix::from_fn(r, c, |i, j| int(v[i * c + j])))
    })
}

fn brute_solutions(a: &IntMatrix, b: &[i64], modulus: i64) -> Vec<Vec<i64>> {
    let c = a.cols();
    let mut out = Vec::new();
    let total = (modulus as usize).pow(c as u32);
    for idx in 0..total {
        let mut x = Vec::with_capacity(c);
        let mut t = idx;
        for _ in 0..c {
            x.push((t % modulus as usize) as i64);
            t /= modulus as usize;
        }
        let ok = (0..a.rows()).all(|i| {
            let s: Int = (0..c).map(|j| &a[(i, j)] * int(x[j])).sum();
            (s - int(b[i])).mod_floor(&int(modulus)).is_zero()
        });
        if ok {
            out.push(x);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn snf_round_trip(a in small_matrix(8)) {
        check_snf(&a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn snf_matches_determinant_divisors(a in small_matrix(4)) {
        let s = smith_normal_form(&a);
        let r = a.rows().min(a.cols());
        let ours: Vec<Int> = s.diagonal()[..r].to_vec();
        prop_assert_eq!(ours, oracle_factors(&a));
    }

    #[test]
    fn cokernel_round_trip(a in small_matrix(5), xs in proptest::collection::vec(-30i64..30, 5)) {
        let p = cokernel(&a);
        let n = a.rows();
        let x: Vec<Int> = xs[..n].iter().map(|&v| int(v)).collect();
        let y = p.project(&x);
        let back = p.lift(&y);
        prop_assert_eq!(p.project(&back), y.clone());
        // back − x lies in the relation lattice
        let diff: Vec<Int> = back.iter().zip(&x).map(|(u, v)| u - v).collect();
        prop_assert!(solve(&a, &diff, &vec![Int::zero(); n]).is_some());
        // and every normal coordinate survives the round trip the other way
        for i in 0..p.rank() {
            let e = p.group.basis(i);
            prop_assert_eq!(p.project(&p.lift(&e)), e);
        }
    }

    #[test]
    fn modular_solve_matches_brute_force(
        rows in 1usize..3, cols in 1usize..3, modulus in 2i64..7,
        entries in proptest::collection::vec(-9i64..9, 9), rhs in proptest::collection::vec(-9i64..9, 3),
    ) {
        let a = IntMatrix::from_fn(rows, cols, |i, j| int(entries[i * 3 + j]));
        let b: Vec<i64> = rhs[..rows].to_vec();
        let bi: Vec<Int> = b.iter().map(|&v| int(v)).collect();
        let moduli = vec![int(modulus); rows];
        let brute = brute_solutions(&a, &b, modulus);
        let sol = solve(&a, &bi, &moduli);
        prop_assert_eq!(sol.is_some(), !brute.is_empty());
        if let Some(sol) = sol {
            // enumerate particular + lattice combinations mod modulus
            let mut seen: Vec<Vec<i64>> = Vec::new();
            let k = sol.basis.cols();
            let span = (modulus as usize).pow(k as u32);
            for idx in 0..span {
                let mut t = idx;
                let mut x = sol.particular.clone();
                for j in 0..k {
                    let c = int((t % modulus as usize) as i64);
                    t /= modulus as usize;
                    for (r, xr) in x.iter_mut().enumerate() {
                        *xr += &c * &sol.basis[(r, j)];
                    }
                }
                let red: Vec<i64> = x.iter().map(|v| v.mod_floor(&int(modulus)).try_into().unwrap()).collect();
                if !seen.contains(&red) {
                    seen.push(red);
                }
            }
            seen.sort();
            let mut brute = brute;
            brute.sort();
            prop_assert_eq!(seen, brute);
        }
    }

    #[test]
    fn modular_and_integer_routes_agree(
        rows in 1usize..4, cols in 1usize..4,
        entries in proptest::collection::vec(-20i64..20, 16), rhs in proptest::collection::vec(-20i64..20, 4),
        mods in proptest::collection::vec(1i64..13, 4),
    ) {
        let a = IntMatrix::from_fn(rows, cols, |i, j| int(entries[i * 4 + j]));
        let b: Vec<Int> = rhs[..rows].iter().map(|&v| int(v)).collect();
        let moduli: Vec<Int> = mods[..rows].iter().map(|&v| int(v)).collect();
        let fast = solve(&a, &b, &moduli);
        let slow = super::solve::solve_int_for_tests(&a, &b, &moduli);
        prop_assert_eq!(fast.is_some(), slow.is_some());
        if let (Some(f), Some(s)) = (fast, slow) {
            // same solution lattice: each basis lies in the other's span, and particular
            // solutions differ by a homogeneous solution
            let fb = hnf_basis(&f.basis);
            let sb = hnf_basis(&s.basis);
            prop_assert_eq!(fb, sb);
            let diff: Vec<Int> = f.particular.iter().zip(&s.particular).map(|(x, y)| x - y).collect();
            let hom = solve(&s.basis, &diff, &vec![Int::zero(); cols]);
            prop_assert!(hom.is_some());
        }
    }
}
