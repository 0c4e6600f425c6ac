//! Integer helpers shared by the lattice and algebra layers.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision integer used for every coordinate and matrix entry.
pub type Int = BigInt;

#[inline]
pub fn int(v: i64) -> Int {
    Int::from(v)
}

/// Reduce `a` into `[0, m)`; a modulus of zero leaves `a` untouched.
#[inline]
pub fn reduce(a: &Int, m: &Int) -> Int {
    if m.is_zero() {
        a.clone()
    } else {
        a.mod_floor(m)
    }
}

#[inline]
pub fn reduce_in_place(a: &mut Int, m: &Int) {
    if !m.is_zero() && (a.is_negative() || &*a >= m) {
        *a = a.mod_floor(m);
    }
}

/// Extended gcd: returns `(g, x, y)` with `g = x·a + y·b` and `g >= 0`.
pub fn ext_gcd(a: &Int, b: &Int) -> (Int, Int, Int) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

pub fn gcd(a: &Int, b: &Int) -> Int {
    a.gcd(b)
}

/// Least common multiple with the convention `lcm(0, x) = 0`.
pub fn lcm(a: &Int, b: &Int) -> Int {
    if a.is_zero() || b.is_zero() {
        Int::zero()
    } else {
        a.lcm(b)
    }
}

/// `a` divides `b`, with `0 | 0` true and `0 | b` false otherwise.
pub fn divides(a: &Int, b: &Int) -> bool {
    if a.is_zero() {
        b.is_zero()
    } else {
        (b % a).is_zero()
    }
}

pub fn is_unit_factor(d: &Int) -> bool {
    d.is_one()
}

pub fn to_u64(a: &Int) -> Option<u64> {
    if a.sign() == Sign::Minus {
        None
    } else {
        a.to_u64()
    }
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Extended gcd on machine integers: `(g, x, y)` with `g = x·a + y·b`.
pub fn ext_gcd_i128(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

#[inline]
pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    if m <= u32::MAX as u64 {
        return a * b % m;
    }
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn addmod(a: u64, b: u64, m: u64) -> u64 {
    debug_assert!(a < m && b < m);
    let (s, carry) = a.overflowing_add(b);
    if carry || s >= m {
        s.wrapping_sub(m)
    } else {
        s
    }
}

#[inline]
pub fn submod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

/// Reduce a signed machine integer into `[0, m)`.
#[inline]
pub fn from_i128_mod(a: i128, m: u64) -> u64 {
    a.rem_euclid(m as i128) as u64
}

/// Inverse of `a` modulo `m` when `gcd(a, m) = 1`.
pub fn inv_mod_u64(a: u64, m: u64) -> Option<u64> {
    let (g, x, _) = ext_gcd_i128(a as i128, m as i128);
    if g == 1 {
        Some(from_i128_mod(x, m))
    } else {
        None
    }
}

pub fn one() -> Int {
    Int::one()
}

pub fn zero() -> Int {
    Int::zero()
}


pub fn to_i64(a: &Int) -> Option<i64> {
    a.to_i64()
}
