//! Generalized Fibonacci `U_n(k, s)` and Lucas `V_n(k, s)` sequences.
//!
//! Both satisfy `W_{n+1} = k·W_n + s·W_{n−1}`, seeded with `U_0 = 0, U_1 = 1`
//! and `V_0 = 2, V_1 = k`. With `α, β = (k ± √D)/2` and `D = k² + 4s`,
//! `αⁿ = (V_n + U_n·√D) / 2`, which [`binet_pair`] evaluates exactly.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, Result};
use crate::ring::HalfQuadInt;

/// `(k, s)` with `k ≠ 0`, `s ≠ 0` and `k² + 4s > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SequenceParams {
    k: BigInt,
    s: BigInt,
    discriminant: BigInt,
}

impl SequenceParams {
    pub fn new(k: impl Into<BigInt>, s: impl Into<BigInt>) -> Result<Self> {
        let (k, s) = (k.into(), s.into());
        if k.is_zero() || s.is_zero() {
            return domain(format!("sequence parameters must be non-zero (k = {k}, s = {s})"));
        }
        let discriminant: BigInt = &k * &k + &s * 4;
        if !discriminant.is_positive() {
            return domain(format!("k^2 + 4s = {discriminant} must be positive"));
        }
        Ok(Self { k, s, discriminant })
    }

    pub fn k(&self) -> &BigInt {
        &self.k
    }

    pub fn s(&self) -> &BigInt {
        &self.s
    }

    /// `D = k² + 4s`.
    pub fn discriminant(&self) -> &BigInt {
        &self.discriminant
    }

    fn run(&self, mut prev: BigInt, mut cur: BigInt, n: u64) -> BigInt {
        for _ in 0..n {
            let next = &self.k * &cur + &self.s * &prev;
            prev = std::mem::replace(&mut cur, next);
        }
        prev
    }
}

/// `U_n(k, s)` by the recurrence.
pub fn u_n(params: &SequenceParams, n: u64) -> BigInt {
    params.run(BigInt::zero(), BigInt::one(), n)
}

/// `V_n(k, s)` by the recurrence.
pub fn v_n(params: &SequenceParams, n: u64) -> BigInt {
    params.run(BigInt::from(2), params.k.clone(), n)
}

/// `(V_n, U_n)` read off `αⁿ = (V_n + U_n·√D)/2`, computed by binary powering.
pub fn binet_pair(params: &SequenceParams, n: u64) -> (BigInt, BigInt) {
    let alpha = HalfQuadInt::new(params.k.clone(), BigInt::one(), &params.discriminant);
    let power = alpha.pow(n);
    (power.u, power.v)
}
