//! Integer backends for the double-description engine.
//!
//! `i128` runs with checked arithmetic and reports overflow so the caller can
//! retry with `BigInt`; both produce identical results when `i128` suffices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use std::fmt::Debug;
use std::hash::Hash;

pub trait ExactInt: Clone + Eq + Ord + Hash + Debug + Send + Sync {
    fn zero() -> Self;
    fn from_big(v: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn is_zero(&self) -> bool;
    fn is_positive(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn checked_mul(&self, other: &Self) -> Option<Self>;
    fn checked_add(&self, other: &Self) -> Option<Self>;
    fn checked_sub(&self, other: &Self) -> Option<Self>;
    fn checked_neg(&self) -> Option<Self>;
    fn gcd(&self, other: &Self) -> Self;
    fn div_exact(&self, d: &Self) -> Self;
    fn is_one(&self) -> bool;
}

impl ExactInt for i128 {
    fn zero() -> Self {
        0
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_positive(&self) -> bool {
        *self > 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn checked_mul(&self, other: &Self) -> Option<Self> {
        i128::checked_mul(*self, *other)
    }
    fn checked_add(&self, other: &Self) -> Option<Self> {
        i128::checked_add(*self, *other)
    }
    fn checked_sub(&self, other: &Self) -> Option<Self> {
        i128::checked_sub(*self, *other)
    }
    fn checked_neg(&self) -> Option<Self> {
        i128::checked_neg(*self)
    }
    fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.unsigned_abs(), other.unsigned_abs());
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        a as i128
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
    fn is_one(&self) -> bool {
        *self == 1
    }
}

impl ExactInt for BigInt {
    fn zero() -> Self {
        <BigInt as Zero>::zero()
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn checked_mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn checked_add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn checked_sub(&self, other: &Self) -> Option<Self> {
        Some(self - other)
    }
    fn checked_neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
    fn is_one(&self) -> bool {
        num_traits::One::is_one(self)
    }
}

pub fn dot<T: ExactInt>(a: &[T], b: &[T]) -> Option<T> {
    let mut acc = T::zero();
    for (x, y) in a.iter().zip(b) {
        if x.is_zero() || y.is_zero() {
            continue;
        }
        acc = acc.checked_add(&x.checked_mul(y)?)?;
    }
    Some(acc)
}

/// Divides by the gcd of the entries (keeps the sign).
pub fn make_primitive<T: ExactInt>(v: &mut [T]) {
    let mut g = T::zero();
    for x in v.iter() {
        if !x.is_zero() {
            g = g.gcd(x);
            if g.is_one() {
                return;
            }
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for x in v.iter_mut() {
        if !x.is_zero() {
            *x = x.div_exact(&g);
        }
    }
}

/// Incrementally maintained fraction-free row echelon form, used for exact rank tests.
#[derive(Clone, Debug)]
pub struct Echelon<T> {
    rows: Vec<(usize, Vec<T>)>,
}

impl<T: ExactInt> Echelon<T> {
    pub fn new() -> Self {
        Self { rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `row`; returns `Some(true)` if it increased the rank, `None` on overflow.
    pub fn push(&mut self, row: &[T]) -> Option<bool> {
        let mut r = row.to_vec();
        for (p, e) in &self.rows {
            if r[*p].is_zero() {
                continue;
            }
            let f = r[*p].clone();
            let g = e[*p].clone();
            for (x, y) in r.iter_mut().zip(e) {
                let lhs = x.checked_mul(&g)?;
                *x = if y.is_zero() { lhs } else { lhs.checked_sub(&y.checked_mul(&f)?)? };
            }
            make_primitive(&mut r);
        }
        match r.iter().position(|x| !x.is_zero()) {
            Some(p) => {
                self.rows.push((p, r));
                Some(true)
            }
            None => Some(false),
        }
    }
}

impl<T: ExactInt> Default for Echelon<T> {
    fn default() -> Self {
        Self::new()
    }
}
