use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;

use super::*;

fn ints(w: &WittVector) -> Vec<i64> {
    w.coeffs().iter().map(|c| crate::arith::to_i64(&c[0]).unwrap()).collect()
}

fn ghost_ints(w: &WittVector) -> Vec<i64> {
    w.ghost().components().iter().map(|c| crate::arith::to_i64(&c[0]).unwrap()).collect()
}

fn binom(n: u64, k: u64) -> Int {
    let mut r = Int::from(1);
    for i in 0..k {
        r = r * Int::from(n - i) / Int::from(i + 1);
    }
    r
}

/// Coefficients of `(1 − c·t^l)^{−g}` from the binomial series.
fn power_series(a: &FinAlgebra, c: &[Int], l: usize, g: u64, bound: usize) -> WittVector {
    let mut coeffs = vec![a.zero(); bound];
    let mut k = 1;
    while k * l <= bound {
        let term = a.additive().scale(&binom(g + k as u64 - 1, k as u64), &a.pow(c, k as u32));
        coeffs[k * l - 1] = term;
        k += 1;
    }
    WittVector::new(a, coeffs).unwrap()
}

#[test]
fn ghost_of_geometric_series() {
    let z = FinAlgebra::integers();
    let w = power_series(&z, &[Int::from(2)], 1, 1, 4);
    assert_eq!(ints(&w), vec![2, 4, 8, 16]);
    assert_eq!(ghost_ints(&w), vec![2, 4, 8, 16]);
    let back = w.ghost().to_witt().unwrap();
    assert_eq!(back, w);
}

#[test]
fn addition_is_series_product() {
    let z = FinAlgebra::integers();
    let w = WittVector::from_ints(&z, &[1, 0, 0]).unwrap();
    assert_eq!(ints(&w.add(&w).unwrap()), vec![2, 1, 0]);
    let g = w.add(&w).unwrap().ghost();
    let h = w.ghost().add(&w.ghost()).unwrap();
    assert_eq!(g, h);
    let zero = w.add(&w.neg()).unwrap();
    assert_eq!(zero, WittVector::one(&z, 3).unwrap());
}

#[test]
fn multiplication_of_teichmuller_like_series() {
    let z = FinAlgebra::integers();
    let a = power_series(&z, &[Int::from(2)], 1, 1, 5);
    let b = power_series(&z, &[Int::from(3)], 1, 1, 5);
    assert_eq!(ints(&a.mul(&b).unwrap()), vec![6, 36, 216, 1296, 7776]);
    let unit = power_series(&z, &[Int::from(1)], 1, 1, 5);
    assert_eq!(a.mul(&unit).unwrap(), a);
}

#[test]
fn product_formula_matches_binomial_oracle() {
    let rings = [
        FinAlgebra::integers(),
        FinAlgebra::catalog("cyclic", &[6]).unwrap(),
        FinAlgebra::catalog("group-algebra", &[4, 2]).unwrap(),
        FinAlgebra::catalog("truncated-polynomial", &[0, 2]).unwrap(),
    ];
    let bound = 12;
    for ring in &rings {
        let k = ring.rank();
        let a: Vec<Int> = (0..k).map(|i| Int::from(2 + i as i64)).collect();
        let b: Vec<Int> = (0..k).map(|i| Int::from(1 - i as i64)).collect();
        let a = ring.additive().reduced(a);
        let b = ring.additive().reduced(b);
        for m in 1..=4usize {
            for n in 1..=4usize {
                let g = m.gcd(&n);
                let l = m.lcm(&n);
                let x = power_series(ring, &a, m, 1, bound);
                let y = power_series(ring, &b, n, 1, bound);
                let c = ring.mul(&ring.pow(&a, (n / g) as u32), &ring.pow(&b, (m / g) as u32));
                let expect = power_series(ring, &c, l, g as u64, bound);
                assert_eq!(x.mul(&y).unwrap(), expect, "{ring:?} m={m} n={n}");
            }
        }
    }
}

#[test]
fn frobenius_matches_binomial_oracle() {
    let rings = [FinAlgebra::integers(), FinAlgebra::catalog("group-algebra", &[9, 3]).unwrap()];
    let bound = 12;
    for ring in &rings {
        let a = ring.additive().reduced((0..ring.rank()).map(|i| Int::from(3 - 2 * i as i64)).collect());
        for m in 1..=4usize {
            for n in 1..=4usize {
                let g = m.gcd(&n);
                let w = power_series(ring, &a, m, 1, bound);
                let c = ring.pow(&a, (n / g) as u32);
                let expect = power_series(ring, &c, m / g, g as u64, bound / n);
                assert_eq!(w.frobenius(n).unwrap(), expect, "{ring:?} m={m} n={n}");
            }
        }
    }
}

#[test]
fn multiplication_commutes_with_reduction() {
    let z = FinAlgebra::integers();
    let z6 = FinAlgebra::catalog("cyclic", &[6]).unwrap();
    let u = [3, -1, 4, 1, -5, 9];
    let v = [2, 7, -1, 8, 2, 8];
    let over_z = WittVector::from_ints(&z, &u).unwrap().mul(&WittVector::from_ints(&z, &v).unwrap()).unwrap();
    let over_6 = WittVector::from_ints(&z6, &u).unwrap().mul(&WittVector::from_ints(&z6, &v).unwrap()).unwrap();
    assert_eq!(WittVector::new(&z6, over_z.coeffs().to_vec()).unwrap(), over_6);
}

#[test]
fn verschiebung_substitutes() {
    let z = FinAlgebra::integers();
    let w = WittVector::from_ints(&z, &[5, 0, 0, 0, 0]).unwrap();
    assert_eq!(ints(&w.verschiebung(2).unwrap()), vec![0, 5, 0, 0, 0]);
    let g = power_series(&z, &[Int::from(2)], 1, 1, 6);
    assert_eq!(ghost_ints(&g.frobenius(2).unwrap()), vec![4, 16, 64]);
    assert_eq!(ghost_ints(&g.verschiebung(2).unwrap()), vec![0, 4, 0, 8, 0, 16]);
}

#[test]
fn ghost_inversion_detects_non_integral_vectors() {
    let z = FinAlgebra::integers();
    let g = GhostVector::new(&z, vec![vec![Int::from(1)], vec![Int::from(0)]]).unwrap();
    assert_eq!(g.to_witt(), Err(Error::IntegralityViolated { index: 2 }));
    let z4 = FinAlgebra::catalog("cyclic", &[4]).unwrap();
    assert!(GhostVector::new(&z4, vec![vec![Int::from(1)]]).unwrap().to_witt().is_err());
}

#[test]
fn characteristic_series_of_swap() {
    let swap = IntMatrix::from_fn(2, 2, |i, j| Int::from((i != j) as i64));
    let c = ch_integer(&swap, 6).unwrap();
    assert_eq!(ints(&c), vec![0, 1, 0, 1, 0, 1]);
    assert_eq!(ghost_ints(&c), vec![0, 2, 0, 2, 0, 2]);
}

#[test]
fn characteristic_series_ghost_is_power_traces() {
    let ring = FinAlgebra::catalog("group-algebra", &[0, 2]).unwrap();
    let vals = [[1, -2], [0, 3], [2, 1], [-1, 0], [1, 1], [0, -1], [3, 0], [2, 2], [-2, 1]];
    let entries: Vec<Vec<Int>> = vals.iter().map(|p| p.iter().map(|&x| Int::from(x)).collect()).collect();
    let f = RingMatrix::new(&ring, 3, 3, entries).unwrap();
    let bound = 6;
    let c = ch(&f, bound).unwrap();
    let mut power = f.clone();
    for n in 1..=bound {
        let mut tr = ring.zero();
        for i in 0..3 {
            tr = ring.add(&tr, power.entry(i, i));
        }
        assert_eq!(c.ghost().components()[n - 1], tr, "n={n}");
        power = power.mul(&f);
    }
}

#[test]
fn characteristic_series_is_additive() {
    let a = IntMatrix::from_fn(2, 2, |i, j| Int::from((i * 2 + j) as i64 - 1));
    let b = IntMatrix::from_fn(1, 1, |_, _| Int::from(-3));
    let block = IntMatrix::from_fn(3, 3, |i, j| match (i < 2, j < 2) {
        (true, true) => a[(i, j)].clone(),
        (false, false) => b[(0, 0)].clone(),
        _ => Int::from(0),
    });
    let lhs = ch_integer(&block, 7).unwrap();
    let rhs = ch_integer(&a, 7).unwrap().add(&ch_integer(&b, 7).unwrap()).unwrap();
    assert_eq!(lhs, rhs);
}

#[test]
fn noncommutative_base_is_rejected() {
    let m2 = FinAlgebra::catalog("matrix", &[2, 3]).unwrap();
    assert_eq!(WittVector::one(&m2, 2).unwrap_err(), Error::NotCommutative);
    let f = RingMatrix::identity(&m2, 1);
    assert_eq!(ch(&f, 2).unwrap_err(), Error::NotCommutative);
}
