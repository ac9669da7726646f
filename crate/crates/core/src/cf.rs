//! Continued fraction expansion of `√d` and its convergents.
//!
//! The expansion is produced by the integer-state PQa iteration
//!
//! ```text
//! P_0 = 0, Q_0 = 1
//! a_k     = ⌊(P_k + a_0) / Q_k⌋
//! P_{k+1} = a_k·Q_k − P_k
//! Q_{k+1} = (d − P_{k+1}²) / Q_k
//! ```
//!
//! which stops at the first `k ≥ 1` with `Q_k = 1`; the last partial quotient
//! of the period is then `2·a_0`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, Result};

/// `true` iff `n` is the square of an integer. Negative input is never a square.
pub fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

pub(crate) fn require_nonsquare(d: &BigInt) -> Result<()> {
    if *d < BigInt::from(2) {
        return domain(format!("d = {d} must be at least 2"));
    }
    if is_perfect_square(d) {
        return domain(format!("d = {d} is a perfect square"));
    }
    Ok(())
}

/// The periodic expansion `√d = [a0; (a1, …, am)]` with the period repeated forever.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SurdExpansion {
    d: BigInt,
    a0: BigInt,
    period: Vec<BigInt>,
}

impl SurdExpansion {
    /// Assembles an expansion without checking it; see [`Self::is_consistent`].
    pub fn from_parts(d: BigInt, a0: BigInt, period: Vec<BigInt>) -> Self {
        Self { d, a0, period }
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn a0(&self) -> &BigInt {
        &self.a0
    }

    pub fn period(&self) -> &[BigInt] {
        &self.period
    }

    /// Period length `m`.
    pub fn period_len(&self) -> usize {
        self.period.len()
    }

    /// Partial quotient `a_k` for any `k ≥ 0`, cycling the period.
    pub fn partial_quotient(&self, k: usize) -> &BigInt {
        if k == 0 {
            &self.a0
        } else {
            &self.period[(k - 1) % self.period.len()]
        }
    }

    /// Replays PQa against the stored quotients and returns the `(P_k, Q_k)`
    /// states for `k = 0..=m`, or `None` if any quotient, the floor of `√d`,
    /// or the closing `Q_m = 1` disagrees.
    pub fn replay(&self) -> Option<Vec<(BigInt, BigInt)>> {
        let d = &self.d;
        if self.a0 != d.sqrt() || self.period.is_empty() {
            return None;
        }
        let mut states = Vec::with_capacity(self.period.len() + 1);
        let (mut p, mut q) = (BigInt::zero(), BigInt::one());
        states.push((p.clone(), q.clone()));
        for (k, expected) in std::iter::once(&self.a0)
            .chain(self.period.iter())
            .enumerate()
            .take(self.period.len())
        {
            let a = (&p + &self.a0).div_floor(&q);
            if &a != expected {
                return None;
            }
            p = &a * &q - &p;
            let (next_q, rem) = (d - &p * &p).div_rem(&q);
            if !rem.is_zero() {
                return None;
            }
            q = next_q;
            states.push((p.clone(), q.clone()));
            // Q must not return to 1 before the end of the period.
            if q.is_one() != (k + 1 == self.period.len()) {
                return None;
            }
        }
        let last = (&p + &self.a0).div_floor(&q);
        (Some(&last) == self.period.last() && last == &self.a0 << 1).then_some(states)
    }

    /// Checks every structural invariant of the expansion.
    pub fn is_consistent(&self) -> bool {
        self.period.iter().all(|a| a.is_positive()) && self.replay().is_some()
    }
}

/// Runs PQa on `√d`.
pub fn cf_expand(d: &BigInt) -> Result<SurdExpansion> {
    require_nonsquare(d)?;
    let a0 = d.sqrt();
    let mut period = Vec::new();
    let (mut p, mut q) = (BigInt::zero(), BigInt::one());
    let mut a = a0.clone();
    loop {
        p = &a * &q - &p;
        q = (d - &p * &p) / &q;
        a = (&p + &a0) / &q;
        period.push(a.clone());
        if q.is_one() {
            break;
        }
    }
    Ok(SurdExpansion { d: d.clone(), a0, period })
}

/// `p_k / q_k`, the value of `[a_0; a_1, …, a_k]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Convergent {
    pub k: u64,
    pub p: BigInt,
    pub q: BigInt,
}

/// Endless stream of convergents of an expansion, starting at `k = 0`.
#[derive(Clone, Debug)]
pub struct Convergents<'a> {
    expansion: &'a SurdExpansion,
    k: usize,
    // (p_{k-2}, p_{k-1}), (q_{k-2}, q_{k-1})
    p: (BigInt, BigInt),
    q: (BigInt, BigInt),
}

impl<'a> Convergents<'a> {
    pub fn new(expansion: &'a SurdExpansion) -> Self {
        Self {
            expansion,
            k: 0,
            p: (BigInt::zero(), BigInt::one()),
            q: (BigInt::one(), BigInt::zero()),
        }
    }
}

impl Iterator for Convergents<'_> {
    type Item = Convergent;

    fn next(&mut self) -> Option<Convergent> {
        let a = self.expansion.partial_quotient(self.k);
        let p = a * &self.p.1 + &self.p.0;
        let q = a * &self.q.1 + &self.q.0;
        self.p = (std::mem::replace(&mut self.p.1, p.clone()), p.clone());
        self.q = (std::mem::replace(&mut self.q.1, q.clone()), q.clone());
        let item = Convergent { k: self.k as u64, p, q };
        self.k += 1;
        Some(item)
    }
}

/// Convergents for `k = 0..count`.
pub fn convergents(expansion: &SurdExpansion, count: usize) -> Vec<Convergent> {
    Convergents::new(expansion).take(count).collect()
}

/// Evaluates a finite continued fraction `[q_0; q_1, …, q_r]` to `(p, q)`.
/// The result is in lowest terms whenever every quotient after the first is positive.
pub fn evaluate_finite(quotients: &[BigInt]) -> (BigInt, BigInt) {
    let (mut p0, mut p1) = (BigInt::zero(), BigInt::one());
    let (mut q0, mut q1) = (BigInt::one(), BigInt::zero());
    for a in quotients {
        let p = a * &p1 + &p0;
        let q = a * &q1 + &q0;
        p0 = std::mem::replace(&mut p1, p);
        q0 = std::mem::replace(&mut q1, q);
    }
    (p1, q1)
}

/// Closed-form expansion of `√(a²b² − b)`, valid for `a ≥ 2`:
/// `[a−1; 1, 2a−2]` when `b = 1`, `[ab−1; 1, 2a−2, 1, 2ab−2]` otherwise.
pub fn family1_cf(a: u64, b: u64) -> Result<SurdExpansion> {
    if a < 2 || b < 1 {
        return domain(format!("a^2b^2 - b family needs a >= 2, b >= 1 (got a = {a}, b = {b})"));
    }
    let (a, b) = (BigInt::from(a), BigInt::from(b));
    let ab = &a * &b;
    let d = &ab * &ab - &b;
    let one = BigInt::one();
    let (a0, period) = if b.is_one() {
        (&a - 1, vec![one, (&a << 1) - 2])
    } else {
        let a0 = &ab - 1;
        let period = vec![one.clone(), (&a << 1) - 2, one, (&ab << 1) - 2];
        (a0, period)
    };
    debug_assert!(!is_perfect_square(&d));
    Ok(SurdExpansion { d, a0, period })
}

/// Closed-form expansion of `√(a²b² − 2b)`, valid for `a ≥ 3`:
/// `[ab−1; 1, a−2, 1, 2ab−2]`.
pub fn family2_cf(a: u64, b: u64) -> Result<SurdExpansion> {
    if a < 3 || b < 1 {
        return domain(format!("a^2b^2 - 2b family needs a >= 3, b >= 1 (got a = {a}, b = {b})"));
    }
    let (a, b) = (BigInt::from(a), BigInt::from(b));
    let ab = &a * &b;
    let d = &ab * &ab - (&b << 1);
    let one = BigInt::one();
    let period = vec![one.clone(), &a - 2, one, (&ab << 1) - 2];
    debug_assert!(!is_perfect_square(&d));
    Ok(SurdExpansion { d, a0: ab - 1, period })
}
