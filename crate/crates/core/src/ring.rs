//! Exact arithmetic in `Z[√d]` and in the half-integer lattice `{(u + v√d)/2}`.
//!
//! Both representations carry their radicand by reference so that a product of
//! two elements never mixes rings.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// `x + y·√d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadInt<'d> {
    pub x: BigInt,
    pub y: BigInt,
    d: &'d BigInt,
}

impl<'d> QuadInt<'d> {
    pub fn new(x: BigInt, y: BigInt, d: &'d BigInt) -> Self {
        Self { x, y, d }
    }

    pub fn one(d: &'d BigInt) -> Self {
        Self::new(BigInt::one(), BigInt::zero(), d)
    }

    /// `x² − d·y²`.
    pub fn norm(&self) -> BigInt {
        &self.x * &self.x - self.d * &self.y * &self.y
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.d, rhs.d);
        let x = &self.x * &rhs.x + self.d * &self.y * &rhs.y;
        let y = &self.x * &rhs.y + &rhs.x * &self.y;
        Self::new(x, y, self.d)
    }

    pub fn square(&self) -> Self {
        let x = &self.x * &self.x + self.d * &self.y * &self.y;
        let y = (&self.x * &self.y) << 1;
        Self::new(x, y, self.d)
    }

    /// Left-to-right binary powering.
    pub fn pow(&self, exp: u64) -> Self {
        let mut acc = Self::one(self.d);
        if exp == 0 {
            return acc;
        }
        for bit in (0..64 - exp.leading_zeros()).rev() {
            acc = acc.square();
            if (exp >> bit) & 1 == 1 {
                acc = acc.mul(self);
            }
        }
        acc
    }
}

/// `(u + v·√d) / 2`, with `u ≡ v·d (mod 2)` so that the lattice is closed
/// under multiplication.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfQuadInt<'d> {
    pub u: BigInt,
    pub v: BigInt,
    d: &'d BigInt,
}

impl<'d> HalfQuadInt<'d> {
    pub fn new(u: BigInt, v: BigInt, d: &'d BigInt) -> Self {
        debug_assert!((&u - &v * d).is_even(), "half-integer element off the lattice");
        Self { u, v, d }
    }

    pub fn one(d: &'d BigInt) -> Self {
        Self::new(BigInt::from(2), BigInt::zero(), d)
    }

    /// `4 · norm = u² − d·v²`.
    pub fn quadruple_norm(&self) -> BigInt {
        &self.u * &self.u - self.d * &self.v * &self.v
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let u = &self.u * &rhs.u + self.d * &self.v * &rhs.v;
        let v = &self.u * &rhs.v + &rhs.u * &self.v;
        debug_assert!(u.is_even() && v.is_even());
        Self::new(u >> 1, v >> 1, self.d)
    }

    pub fn pow(&self, exp: u64) -> Self {
        let mut acc = Self::one(self.d);
        if exp == 0 {
            return acc;
        }
        for bit in (0..64 - exp.leading_zeros()).rev() {
            acc = acc.mul(&acc);
            if (exp >> bit) & 1 == 1 {
                acc = acc.mul(self);
            }
        }
        acc
    }
}
