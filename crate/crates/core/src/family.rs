//! Closed-form solutions for the families `d = a²b² − b` (`a ≥ 2`) and
//! `d = a²b² − 2b` (`a ≥ 3`), and the `9k² − 3` / `9k² − 6` specializations.
//!
//! Solutions are read off Lucas sequences with `s = −1`:
//!
//! | family, case | `k`         | `N = 1`            | `N = 4`            |
//! |--------------|-------------|--------------------|--------------------|
//! | F1, `b = 1`  | `2a`        | `(V_n/2, U_n)`     | `(V_n, 2·U_n)`     |
//! | F1, `b > 1`  | `4a²b − 2`  | `(V_n/2, 2a·U_n)`  | `(V_n, 4a·U_n)`    |
//! | F2           | `2a²b − 2`  | `(V_n/2, a·U_n)`   | `(V_n, 2a·U_n)`    |
//!
//! When `d + 4` is a square `c²` (F1 with `b = 4`, F2 with `b = 2`) the
//! equation `x² − d·y² = 4` also has the solution `(c, 1)`, and its solutions
//! are `(V_n(c, −1), U_n(c, −1))`; the `N = 4` column above then lists only the
//! even-indexed ones.
//!
//! Every closed-form result is checked against its equation before it is returned.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::cf::{family1_cf, family2_cf, is_perfect_square, SurdExpansion};
use crate::error::{contract, domain, Result};
use crate::lucas::{u_n, v_n, SequenceParams};
use crate::pell::{self, NoSolutionReason, PellSolution, Solvability, DEFAULT_SEARCH_BOUND};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// `d = a²b² − b`
    F1,
    /// `d = a²b² − 2b`
    F2,
}

impl Family {
    pub fn tag(self) -> &'static str {
        match self {
            Family::F1 => "F1",
            Family::F2 => "F2",
        }
    }

    /// Least admissible `a`.
    pub fn min_a(self) -> u64 {
        match self {
            Family::F1 => 2,
            Family::F2 => 3,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Right-hand side `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rhs {
    One,
    MinusOne,
    Four,
    MinusFour,
}

impl Rhs {
    pub fn value(self) -> i64 {
        match self {
            Rhs::One => 1,
            Rhs::MinusOne => -1,
            Rhs::Four => 4,
            Rhs::MinusFour => -4,
        }
    }

    pub fn from_value(v: i64) -> Option<Self> {
        match v {
            1 => Some(Rhs::One),
            -1 => Some(Rhs::MinusOne),
            4 => Some(Rhs::Four),
            -4 => Some(Rhs::MinusFour),
            _ => None,
        }
    }
}

/// How an answer was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    ClosedForm,
    GenericCf,
    BruteForce,
    /// Unsolvability established by a proof rather than by computation.
    Theorem,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed-form",
            Method::GenericCf => "generic-cf",
            Method::BruteForce => "brute-force",
            Method::Theorem => "theorem",
        }
    }
}

/// `d = a²b² − b` or `a²b² − 2b` without any hypothesis check.
pub fn family_d(family: Family, a: u64, b: u64) -> BigInt {
    let (a, b) = (BigInt::from(a), BigInt::from(b));
    let ab = &a * &b;
    match family {
        Family::F1 => &ab * &ab - b,
        Family::F2 => &ab * &ab - (b << 1),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FamilyParams {
    pub family: Family,
    pub a: u64,
    pub b: u64,
}

impl FamilyParams {
    pub fn new(family: Family, a: u64, b: u64) -> Result<Self> {
        if a < family.min_a() || b < 1 {
            return domain(format!(
                "{family} needs a >= {} and b >= 1 (got a = {a}, b = {b})",
                family.min_a()
            ));
        }
        let params = Self { family, a, b };
        let d = params.d();
        if is_perfect_square(&d) {
            return contract(format!("{family} produced a square d = {d}"));
        }
        Ok(params)
    }

    pub fn d(&self) -> BigInt {
        family_d(self.family, self.a, self.b)
    }

    pub fn expansion(&self) -> Result<SurdExpansion> {
        match self.family {
            Family::F1 => family1_cf(self.a, self.b),
            Family::F2 => family2_cf(self.a, self.b),
        }
    }

    /// `(k, y-scale)` of the `N = 1` Lucas form.
    fn lucas_form(&self) -> (BigInt, BigInt) {
        let a = BigInt::from(self.a);
        let b = BigInt::from(self.b);
        match (self.family, self.b) {
            (Family::F1, 1) => (&a << 1, BigInt::from(1)),
            (Family::F1, _) => (((&a * &a * &b) << 2) - 2, &a << 1),
            (Family::F2, _) => (((&a * &a * &b) << 1) - 2, a),
        }
    }
}

/// `c` with `d + 4 = c²`, when it exists.
pub fn square_minus_four_root(params: &FamilyParams) -> Option<BigInt> {
    let shifted = params.d() + 4;
    is_perfect_square(&shifted).then(|| shifted.sqrt())
}

/// `true` when `x² − d·y² = 4` has a solution that is not twice a solution of `1`.
pub fn has_short_four_solution(params: &FamilyParams) -> bool {
    square_minus_four_root(params).is_some()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FamilyOutcome {
    pub verdict: Solvability,
    pub method: Method,
}

fn checked(d: &BigInt, sol: PellSolution) -> Result<PellSolution> {
    if !sol.satisfies(d) {
        return contract(format!("closed form {sol} fails x^2 - {d}y^2 = {}", sol.rhs));
    }
    Ok(sol)
}

fn halve(v: BigInt) -> Result<BigInt> {
    if v.is_odd() {
        return contract(format!("Lucas value {v} is odd and cannot be halved"));
    }
    Ok(v >> 1)
}

fn lucas_pair(k: BigInt, n: u64) -> (BigInt, BigInt) {
    let seq = SequenceParams::new(k, -1).expect("family Lucas parameters have k >= 3");
    (v_n(&seq, n), u_n(&seq, n))
}

fn closed_form(params: &FamilyParams, rhs: Rhs, n: u64) -> Result<PellSolution> {
    if n == 0 {
        return domain("solution index starts at 1");
    }
    let d = params.d();
    let sol = match rhs {
        Rhs::One => {
            let (k, scale) = params.lucas_form();
            let (v, u) = lucas_pair(k, n);
            PellSolution { x: halve(v)?, y: scale * u, n, rhs: 1 }
        }
        Rhs::Four => match square_minus_four_root(params) {
            Some(c) => {
                let (v, u) = lucas_pair(c, n);
                PellSolution { x: v, y: u, n, rhs: 4 }
            }
            None => {
                let (k, scale) = params.lucas_form();
                let (v, u) = lucas_pair(k, n);
                PellSolution { x: v, y: (scale << 1) * u, n, rhs: 4 }
            }
        },
        _ => return domain(format!("no closed form for rhs = {}", rhs.value())),
    };
    checked(&d, sol)
}

/// n-th positive solution, or a verdict of unsolvability, for the family equation.
///
/// `N = −4` on F1 has no closed form and goes through the generic solver with
/// the default search bound.
pub fn family_solve(params: &FamilyParams, rhs: Rhs, n: u64) -> Result<FamilyOutcome> {
    family_solve_with_bound(params, rhs, n, DEFAULT_SEARCH_BOUND)
}

pub fn family_solve_with_bound(
    params: &FamilyParams,
    rhs: Rhs,
    n: u64,
    search_bound: u64,
) -> Result<FamilyOutcome> {
    if n == 0 {
        return domain("solution index starts at 1");
    }
    match (rhs, params.family) {
        (Rhs::One | Rhs::Four, _) => Ok(FamilyOutcome {
            verdict: Solvability::Solvable(closed_form(params, rhs, n)?),
            method: Method::ClosedForm,
        }),
        // both periods are even (length 2 or 4)
        (Rhs::MinusOne, _) => Ok(FamilyOutcome {
            verdict: Solvability::NoSolution(NoSolutionReason::EvenPeriod),
            method: Method::Theorem,
        }),
        (Rhs::MinusFour, Family::F2) => Ok(FamilyOutcome {
            verdict: Solvability::NoSolution(NoSolutionReason::FamilyParity),
            method: Method::Theorem,
        }),
        (Rhs::MinusFour, Family::F1) => {
            let d = params.d();
            let verdict = match pell::solve_negative_four(&d, search_bound)? {
                Solvability::Solvable(fund) if n > 1 => {
                    Solvability::Solvable(pell::nth_solution_negative(&d, &fund, n)?)
                }
                other => other,
            };
            let method = if d.mod_floor(&BigInt::from(4)) == BigInt::from(1) {
                Method::BruteForce
            } else {
                Method::GenericCf
            };
            Ok(FamilyOutcome { verdict, method })
        }
    }
}

/// Fundamental solution for `N ∈ {1, 4}`.
pub fn family_fundamental(params: &FamilyParams, rhs: Rhs) -> Result<PellSolution> {
    match rhs {
        Rhs::One | Rhs::Four => {}
        _ => return domain(format!("rhs = {} has no positive solutions on this family", rhs.value())),
    }
    let a = BigInt::from(params.a);
    let b = BigInt::from(params.b);
    let a2b = &a * &a * &b;
    let (x, y) = match (params.family, params.b, rhs) {
        (_, _, Rhs::Four) if square_minus_four_root(params).is_some() => {
            (square_minus_four_root(params).unwrap(), BigInt::from(1))
        }
        (Family::F1, 1, Rhs::One) => (a, BigInt::from(1)),
        (Family::F1, 1, _) => (a << 1, BigInt::from(2)),
        (Family::F1, _, Rhs::One) => ((a2b << 1) - 1, a << 1),
        (Family::F1, _, _) => ((a2b << 2) - 2, a << 2),
        (Family::F2, _, Rhs::One) => (a2b - 1, a),
        (Family::F2, _, _) => ((a2b << 1) - 2, a << 1),
    };
    checked(&params.d(), PellSolution { x, y, n: 1, rhs: rhs.value() })
}

/// The finite word whose value is `x_n / y_n` for `N = 1`: `a0`, then `n − 1`
/// full periods, then the period without its closing `2·a0`. For a period
/// `(1, 2a − 2)` the tail is the single quotient `1`; for a period of length 4
/// it is `(1, a', 1)` with `a'` the second period entry.
pub fn nth_quotient_form(params: &FamilyParams, n: u64) -> Result<Vec<BigInt>> {
    if n == 0 {
        return domain("solution index starts at 1");
    }
    let expansion = params.expansion()?;
    let period = expansion.period();
    let repeats = usize::try_from(n - 1).map_err(|_| crate::PellError::Domain("n too large".into()))?;
    let mut word = Vec::with_capacity(repeats * period.len() + period.len());
    word.push(expansion.a0().clone());
    for _ in 0..repeats {
        word.extend_from_slice(period);
    }
    word.extend_from_slice(&period[..period.len() - 1]);
    Ok(word)
}

/// The four specializations with `b = 3`, `a = k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Corollary {
    /// `x² − (9k² − 3)·y² = 1`
    C93One,
    /// `x² − (9k² − 3)·y² = 4`
    C93Four,
    /// `x² − (9k² − 6)·y² = 1`
    C96One,
    /// `x² − (9k² − 6)·y² = 4`
    C96Four,
}

impl Corollary {
    pub const ALL: [Corollary; 4] = [Self::C93One, Self::C93Four, Self::C96One, Self::C96Four];

    pub fn tag(self) -> &'static str {
        match self {
            Self::C93One => "9k2-3:1",
            Self::C93Four => "9k2-3:4",
            Self::C96One => "9k2-6:1",
            Self::C96Four => "9k2-6:4",
        }
    }

    /// Looks up by form (`9k2-3` or `9k2-6`) and right-hand side.
    pub fn from_form(form: &str, rhs: Rhs) -> Option<Self> {
        match (form, rhs) {
            ("9k2-3", Rhs::One) => Some(Self::C93One),
            ("9k2-3", Rhs::Four) => Some(Self::C93Four),
            ("9k2-6", Rhs::One) => Some(Self::C96One),
            ("9k2-6", Rhs::Four) => Some(Self::C96Four),
            _ => None,
        }
    }

    pub fn family(self) -> Family {
        match self {
            Self::C93One | Self::C93Four => Family::F1,
            Self::C96One | Self::C96Four => Family::F2,
        }
    }

    pub fn rhs(self) -> Rhs {
        match self {
            Self::C93One | Self::C96One => Rhs::One,
            Self::C93Four | Self::C96Four => Rhs::Four,
        }
    }

    pub fn d(self, k: u64) -> Result<BigInt> {
        if k == 0 {
            return domain("k must be positive");
        }
        let d = family_d(self.family(), k, 3);
        if d < BigInt::from(2) || is_perfect_square(&d) {
            return domain(format!("d = {d} is not a non-square >= 2"));
        }
        Ok(d)
    }
}

/// n-th solution from the corollary formula, for any `k ≥ 1`.
pub fn corollary_solve(which: Corollary, k: u64, n: u64) -> Result<PellSolution> {
    if n == 0 {
        return domain("solution index starts at 1");
    }
    let d = which.d(k)?;
    let kb = BigInt::from(k);
    let k2 = &kb * &kb;
    let (lucas_k, scale) = match which.family() {
        Family::F1 => (BigInt::from(12) * &k2 - 2, &kb << 1),
        Family::F2 => (BigInt::from(6) * &k2 - 2, kb),
    };
    let (v, u) = lucas_pair(lucas_k, n);
    let sol = match which.rhs() {
        Rhs::One => PellSolution { x: halve(v)?, y: scale * u, n, rhs: 1 },
        _ => PellSolution { x: v, y: (scale << 1) * u, n, rhs: 4 },
    };
    checked(&d, sol)
}
