//! Diagonalization engine shared by the integer and the `Z/e` code paths.

use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{self, Int};

/// Coefficient ring for elimination: a Euclidean-like ring with gcd steps.
pub(crate) trait Domain {
    type E: Clone + PartialEq + core::fmt::Debug;

    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    /// Pivot preference between two nonzero entries.
    fn smaller(&self, a: &Self::E, b: &Self::E) -> bool;
    /// No entry is a strictly better pivot than `a`.
    fn is_best(&self, a: &Self::E) -> bool;
    /// `Some(q)` with `b = q·a` when the division is exact on representatives.
    fn exact_quo(&self, b: &Self::E, a: &Self::E) -> Option<Self::E>;
    /// `(g, x, y, a/g, b/g)` with `g = x·a + y·b` and `x·(a/g) + y·(b/g) = 1`.
    fn xgcd(&self, a: &Self::E, b: &Self::E) -> [Self::E; 5];
    /// A unit `u` (and its inverse) such that `a·u` is the normal representative.
    fn normalizer(&self, a: &Self::E) -> (Self::E, Self::E);
    /// Divisibility between normalized diagonal values; zero is divisible by all.
    fn divides_norm(&self, a: &Self::E, b: &Self::E) -> bool;
}

pub(crate) struct IntDomain;

impl Domain for IntDomain {
    type E = Int;

    fn zero(&self) -> Int {
        Int::zero()
    }
    fn one(&self) -> Int {
        Int::one()
    }
    fn is_zero(&self, a: &Int) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Int, b: &Int) -> Int {
        a + b
    }
    fn sub(&self, a: &Int, b: &Int) -> Int {
        a - b
    }
    fn mul(&self, a: &Int, b: &Int) -> Int {
        a * b
    }
    fn neg(&self, a: &Int) -> Int {
        -a
    }
    fn smaller(&self, a: &Int, b: &Int) -> bool {
        a.magnitude() < b.magnitude()
    }
    fn is_best(&self, a: &Int) -> bool {
        a.magnitude().is_one()
    }
    fn exact_quo(&self, b: &Int, a: &Int) -> Option<Int> {
        let (q, r) = b.div_rem(a);
        r.is_zero().then_some(q)
    }
    fn xgcd(&self, a: &Int, b: &Int) -> [Int; 5] {
        let (g, x, y) = arith::ext_gcd(a, b);
        let a1 = a / &g;
        let b1 = b / &g;
        [g, x, y, a1, b1]
    }
    fn normalizer(&self, a: &Int) -> (Int, Int) {
        if a.is_negative() {
            (Int::from(-1), Int::from(-1))
        } else {
            (Int::one(), Int::one())
        }
    }
    fn divides_norm(&self, a: &Int, b: &Int) -> bool {
        arith::divides(a, b)
    }
}

/// Arithmetic in `Z/e` on representatives in `[0, e)`.
pub(crate) struct ModDomain {
    pub e: u64,
}

impl Domain for ModDomain {
    type E = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.e
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        arith::addmod(*a, *b, self.e)
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        arith::submod(*a, *b, self.e)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        arith::mulmod(*a, *b, self.e)
    }
    fn neg(&self, a: &u64) -> u64 {
        arith::submod(0, *a, self.e)
    }
    fn smaller(&self, a: &u64, b: &u64) -> bool {
        a < b
    }
    fn is_best(&self, a: &u64) -> bool {
        *a == 1
    }
    fn exact_quo(&self, b: &u64, a: &u64) -> Option<u64> {
        (b % a == 0).then(|| b / a)
    }
    fn xgcd(&self, a: &u64, b: &u64) -> [u64; 5] {
        let (g, x, y) = arith::ext_gcd_i128(*a as i128, *b as i128);
        let g = g as u64;
        [
            g % self.e,
            arith::from_i128_mod(x, self.e),
            arith::from_i128_mod(y, self.e),
            a / g,
            b / g,
        ]
    }
    fn normalizer(&self, a: &u64) -> (u64, u64) {
        let e = self.e;
        if *a == 0 {
            return (1, 1);
        }
        let g = arith::gcd_u64(*a, e);
        let a1 = a / g;
        let e1 = e / g;
        let u0 = if e1 == 1 { 0 } else { arith::inv_mod_u64(a1 % e1, e1).expect("coprime cofactor") };
        let mut u = u0;
        while arith::gcd_u64(u, e) != 1 {
            u += e1;
        }
        let u = u % e;
        (u, arith::inv_mod_u64(u, e).expect("unit"))
    }
    fn divides_norm(&self, a: &u64, b: &u64) -> bool {
        if *a == 0 {
            *b == 0
        } else {
            b % a == 0
        }
    }
}

/// Row and column reduction of a dense matrix to Smith form, with optional
/// tracking of the row transform `U`, its inverse, and the column transform `V`.
pub(crate) struct Elim<D: Domain> {
    pub d: D,
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<Vec<D::E>>,
    pub u: Option<Vec<Vec<D::E>>>,
    pub uinv: Option<Vec<Vec<D::E>>>,
    pub v: Option<Vec<Vec<D::E>>>,
}

fn identity<D: Domain>(d: &D, n: usize) -> Vec<Vec<D::E>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { d.one() } else { d.zero() }).collect())
        .collect()
}

impl<D: Domain> Elim<D> {
    pub fn new(d: D, rows: usize, cols: usize, a: Vec<Vec<D::E>>, track_u: bool, track_v: bool) -> Self {
        let u = track_u.then(|| identity(&d, rows));
        let uinv = track_u.then(|| identity(&d, rows));
        let v = track_v.then(|| identity(&d, cols));
        Elim { d, rows, cols, a, u, uinv, v }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        if let Some(u) = &mut self.u {
            u.swap(i, j);
        }
        if let Some(ui) = &mut self.uinv {
            for row in ui.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    /// row_i ← row_i − q·row_p.
    fn row_sub(&mut self, i: usize, p: usize, q: &D::E, from: usize) {
        let d = &self.d;
        let (ri, rp) = two_rows(&mut self.a, i, p);
        for c in from..ri.len() {
            if !d.is_zero(&rp[c]) {
                ri[c] = d.sub(&ri[c], &d.mul(q, &rp[c]));
            }
        }
        if let Some(u) = &mut self.u {
            let (ui, up) = two_rows(u, i, p);
            for c in 0..ui.len() {
                if !d.is_zero(&up[c]) {
                    ui[c] = d.sub(&ui[c], &d.mul(q, &up[c]));
                }
            }
        }
        // U⁻¹ ← U⁻¹·E⁻¹: col_p += q·col_i
        if let Some(ui) = &mut self.uinv {
            for row in ui.iter_mut() {
                if !d.is_zero(&row[i]) {
                    row[p] = d.add(&row[p], &d.mul(q, &row[i]));
                }
            }
        }
    }

    /// col_j ← col_j − q·col_p.
    fn col_sub(&mut self, j: usize, p: usize, q: &D::E, from: usize) {
        let d = &self.d;
        for row in self.a[from..].iter_mut() {
            if !d.is_zero(&row[p]) {
                row[j] = d.sub(&row[j], &d.mul(q, &row[p]));
            }
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                if !d.is_zero(&row[p]) {
                    row[j] = d.sub(&row[j], &d.mul(q, &row[p]));
                }
            }
        }
    }

    /// Rows (p, i) ← [[x, y], [−b', a']]·(p, i).
    fn row_mix(&mut self, p: usize, i: usize, m: &[D::E; 5], from: usize) {
        let d = &self.d;
        let [_, x, y, a1, b1] = m;
        let combine = |rp: &mut [D::E], ri: &mut [D::E], from: usize| {
            for c in from..rp.len() {
                let vp = rp[c].clone();
                let vi = ri[c].clone();
                if d.is_zero(&vp) && d.is_zero(&vi) {
                    continue;
                }
                rp[c] = d.add(&d.mul(x, &vp), &d.mul(y, &vi));
                ri[c] = d.sub(&d.mul(a1, &vi), &d.mul(b1, &vp));
            }
        };
        {
            let (rp, ri) = two_rows(&mut self.a, p, i);
            combine(rp, ri, from);
        }
        if let Some(u) = &mut self.u {
            let (rp, ri) = two_rows(u, p, i);
            combine(rp, ri, 0);
        }
        // inverse is [[a', −y], [b', x]]: col_p ← a'·col_p + b'·col_i, col_i ← x·col_i − y·col_p
        if let Some(ui) = &mut self.uinv {
            for row in ui.iter_mut() {
                let vp = row[p].clone();
                let vi = row[i].clone();
                if d.is_zero(&vp) && d.is_zero(&vi) {
                    continue;
                }
                row[p] = d.add(&d.mul(a1, &vp), &d.mul(b1, &vi));
                row[i] = d.sub(&d.mul(x, &vi), &d.mul(y, &vp));
            }
        }
    }

    /// Columns (p, j) ← (x·col_p + y·col_j, −b'·col_p + a'·col_j).
    fn col_mix(&mut self, p: usize, j: usize, m: &[D::E; 5], from: usize) {
        let d = &self.d;
        let [_, x, y, a1, b1] = m;
        let apply = |row: &mut Vec<D::E>| {
            let vp = row[p].clone();
            let vj = row[j].clone();
            if d.is_zero(&vp) && d.is_zero(&vj) {
                return;
            }
            row[p] = d.add(&d.mul(x, &vp), &d.mul(y, &vj));
            row[j] = d.sub(&d.mul(a1, &vj), &d.mul(b1, &vp));
        };
        for row in self.a[from..].iter_mut() {
            apply(row);
        }
        if let Some(v) = &mut self.v {
            for row in v.iter_mut() {
                apply(row);
            }
        }
    }

    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let e = &self.a[i][j];
                if self.d.is_zero(e) {
                    continue;
                }
                match best {
                    Some((bi, bj)) if !self.d.smaller(e, &self.a[bi][bj]) => {}
                    _ => {
                        if self.d.is_best(e) {
                            return Some((i, j));
                        }
                        best = Some((i, j))
                    }
                }
            }
        }
        best
    }

    /// Diagonalize, normalize the diagonal and enforce the divisibility chain.
    /// Returns the rank.
    pub fn run(&mut self) -> usize {
        let n = self.rows.min(self.cols);
        let mut t = 0;
        while t < n {
            let Some((pi, pj)) = self.find_pivot(t) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                for i in t + 1..self.rows {
                    if self.d.is_zero(&self.a[i][t]) {
                        continue;
                    }
                    let b = self.a[i][t].clone();
                    let p = self.a[t][t].clone();
                    match self.d.exact_quo(&b, &p) {
                        Some(q) => self.row_sub(i, t, &q, t),
                        None => {
                            let m = self.d.xgcd(&p, &b);
                            self.row_mix(t, i, &m, t);
                        }
                    }
                }
                let mut dirty = false;
                for j in t + 1..self.cols {
                    if self.d.is_zero(&self.a[t][j]) {
                        continue;
                    }
                    let b = self.a[t][j].clone();
                    let p = self.a[t][t].clone();
                    match self.d.exact_quo(&b, &p) {
                        Some(q) => self.col_sub(j, t, &q, t),
                        None => {
                            let m = self.d.xgcd(&p, &b);
                            self.col_mix(t, j, &m, t);
                            dirty = true;
                        }
                    }
                }
                if !dirty {
                    break;
                }
                if (t + 1..self.rows).all(|i| self.d.is_zero(&self.a[i][t])) {
                    break;
                }
            }
            t += 1;
        }
        let rank = t;
        for i in 0..rank {
            let (u, _) = self.d.normalizer(&self.a[i][i]);
            if u != self.d.one() {
                self.a[i][i] = self.d.mul(&self.a[i][i], &u);
                if let Some(v) = &mut self.v {
                    for row in v.iter_mut() {
                        row[i] = self.d.mul(&row[i], &u);
                    }
                }
            }
        }
        for i in 0..rank {
            for j in i + 1..rank {
                if !self.d.divides_norm(&self.a[i][i], &self.a[j][j]) {
                    self.chain_fix(i, j);
                }
            }
        }
        rank
    }

    /// Turn diagonal entries (a, b) at positions i < j into (gcd, lcm).
    fn chain_fix(&mut self, i: usize, j: usize) {
        let a = self.a[i][i].clone();
        let b = self.a[j][j].clone();
        let m = self.d.xgcd(&a, &b);
        let one = self.d.one();
        // row_i += row_j
        self.row_sub(i, j, &self.d.neg(&one), 0);
        // columns (i, j) ← (x·c_i + y·c_j, −b'·c_i + a'·c_j)
        self.col_mix(i, j, &m, 0);
        // row_j −= (y·b')·row_i
        let q = self.d.mul(&m[2], &m[4]);
        self.row_sub(j, i, &q, 0);
        debug_assert!(self.d.is_zero(&self.a[j][i]) && self.d.is_zero(&self.a[i][j]));
        let (u, _) = self.d.normalizer(&self.a[j][j]);
        if u != one {
            self.a[j][j] = self.d.mul(&self.a[j][j], &u);
            if let Some(v) = &mut self.v {
                for row in v.iter_mut() {
                    row[j] = self.d.mul(&row[j], &u);
                }
            }
        }
        let (u, _) = self.d.normalizer(&self.a[i][i]);
        if u != one {
            self.a[i][i] = self.d.mul(&self.a[i][i], &u);
            if let Some(v) = &mut self.v {
                for row in v.iter_mut() {
                    row[i] = self.d.mul(&row[i], &u);
                }
            }
        }
    }

    pub fn diagonal(&self) -> Vec<D::E> {
        (0..self.rows)
            .map(|i| if i < self.cols { self.a[i][i].clone() } else { self.d.zero() })
            .collect()
    }
}

fn two_rows<T>(m: &mut [Vec<T>], i: usize, j: usize) -> (&mut [T], &mut [T]) {
    assert_ne!(i, j);
    if i < j {
        let (lo, hi) = m.split_at_mut(j);
        (&mut lo[i], &mut hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(i);
        (&mut hi[0], &mut lo[j])
    }
}

pub(crate) fn to_int_rows(m: &[Vec<u64>]) -> Vec<Vec<Int>> {
    m.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect()
}

pub(crate) fn mod_rows(m: &crate::IntMatrix, e: u64) -> Vec<Vec<u64>> {
    let ei = Int::from(e);
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|x| arith::to_u64(&x.mod_floor(&ei)).expect("reduced below modulus"))
                .collect()
        })
        .collect()
}
