//! Generic solving of `x² − d·y² = N` for `N ∈ {1, −1, 4, −4}`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::cf::{cf_expand, is_perfect_square, require_nonsquare, Convergents};
use crate::error::{contract, domain, Result};
use crate::oracle;
use crate::ring::{HalfQuadInt, QuadInt};

/// Search bound used for `x² − d·y² = −4` when `d ≡ 1 (mod 4)`.
pub const DEFAULT_SEARCH_BOUND: u64 = 1_000_000;

/// A positive solution `(x, y)` of `x² − d·y² = rhs`; `n = 1` is the fundamental one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PellSolution {
    pub x: BigInt,
    pub y: BigInt,
    pub n: u64,
    pub rhs: i64,
}

impl PellSolution {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>, n: u64, rhs: i64) -> Self {
        Self { x: x.into(), y: y.into(), n, rhs }
    }

    pub fn satisfies(&self, d: &BigInt) -> bool {
        is_solution(d, &BigInt::from(self.rhs), &self.x, &self.y)
    }

    /// Same `(x, y, rhs)`, ignoring the index.
    pub fn same_pair(&self, other: &Self) -> bool {
        self.x == other.x && self.y == other.y && self.rhs == other.rhs
    }
}

impl fmt::Display for PellSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Why an equation has no positive solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NoSolutionReason {
    /// `x² − d·y² = −1` with an even period length of `√d`.
    EvenPeriod,
    /// `d ≡ 2, 3 (mod 4)`: `−4` is solvable exactly when `−1` is.
    MinusOneEquivalence,
    /// `−4` on the `a²b² − 2b` family, settled by a parity argument on `b`.
    FamilyParity,
    /// `d ≡ 0 (mod 4)`: `−4` reduces to `−1` for `d/4`, which is unsolvable.
    QuarterReduction,
}

impl NoSolutionReason {
    pub fn tag(self) -> &'static str {
        match self {
            Self::EvenPeriod => "even-period",
            Self::MinusOneEquivalence => "minus-one-equivalence",
            Self::FamilyParity => "family-parity",
            Self::QuarterReduction => "reduction-to-known-unsolvable",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        [Self::EvenPeriod, Self::MinusOneEquivalence, Self::FamilyParity, Self::QuarterReduction]
            .into_iter()
            .find(|r| r.tag() == tag)
    }
}

impl fmt::Display for NoSolutionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Solvability {
    Solvable(PellSolution),
    NoSolution(NoSolutionReason),
    /// Nothing found for `1 ≤ y ≤ searched_bound`.
    Undetermined { searched_bound: u64 },
}

impl Solvability {
    pub fn solution(&self) -> Option<&PellSolution> {
        match self {
            Self::Solvable(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_determinate(&self) -> bool {
        !matches!(self, Self::Undetermined { .. })
    }
}

/// `x² − d·y² = rhs`, exactly.
pub fn is_solution(d: &BigInt, rhs: &BigInt, x: &BigInt, y: &BigInt) -> bool {
    x * x - d * y * y == *rhs
}

/// Least positive solution of `x² − d·y² = 1`: the convergent `p/q` at index
/// `m − 1` for even period length `m`, else at `2m − 1`.
pub fn fundamental_unit(d: &BigInt) -> Result<PellSolution> {
    let expansion = cf_expand(d)?;
    let m = expansion.period_len();
    let index = if m % 2 == 0 { m - 1 } else { 2 * m - 1 };
    let c = Convergents::new(&expansion).nth(index).expect("unbounded stream");
    Ok(PellSolution { x: c.p, y: c.q, n: 1, rhs: 1 })
}

/// `x² − d·y² = −1`: unsolvable for even period length, otherwise the
/// convergent at index `m − 1`.
pub fn solve_negative_one(d: &BigInt) -> Result<Solvability> {
    let expansion = cf_expand(d)?;
    let m = expansion.period_len();
    if m % 2 == 0 {
        return Ok(Solvability::NoSolution(NoSolutionReason::EvenPeriod));
    }
    let c = Convergents::new(&expansion).nth(m - 1).expect("unbounded stream");
    Ok(Solvability::Solvable(PellSolution { x: c.p, y: c.q, n: 1, rhs: -1 }))
}

fn check_unit(d: &BigInt, unit: &PellSolution) -> Result<()> {
    if unit.rhs != 1 || !unit.satisfies(d) || !unit.y.is_positive() || !unit.x.is_positive() {
        return contract(format!("{unit} is not a positive solution of x^2 - {d}y^2 = 1"));
    }
    Ok(())
}

/// `x_n + y_n·√d = (x_1 + y_1·√d)^n` by binary powering.
pub fn nth_solution(d: &BigInt, fund: &PellSolution, n: u64) -> Result<PellSolution> {
    if n == 0 {
        return domain("solution index starts at 1; n = 0 is the trivial solution");
    }
    check_unit(d, fund)?;
    let power = QuadInt::new(fund.x.clone(), fund.y.clone(), d).pow(n);
    debug_assert!(power.norm().is_one());
    Ok(PellSolution { x: power.x, y: power.y, n, rhs: 1 })
}

/// Least positive solution of `x² − d·y² = 4`.
///
/// For `d ≡ 0 (mod 4)` every solution has `x` even, so it comes from the unit
/// of `d/4` as `(2x, y)`. For `d ≡ 2, 3 (mod 4)` both coordinates are even and
/// the answer is `(2x₁, 2y₁)`. For `d ≡ 1 (mod 4)` an odd solution may exist;
/// its half `ε = (x + y√d)/2` then satisfies `ε³ = x₁ + y₁√d`, so `x` is the
/// integer root of `t³ − 3t = 2x₁`.
pub fn solve_four(d: &BigInt) -> Result<PellSolution> {
    require_nonsquare(d)?;
    let residue = d.mod_floor(&BigInt::from(4));
    if residue.is_zero() {
        let quarter: BigInt = d >> 2;
        if quarter < BigInt::from(2) || is_perfect_square(&quarter) {
            return domain(format!("d = {d} is 4 times a square; x^2 - {d}y^2 = 4 is out of scope"));
        }
        let unit = fundamental_unit(&quarter)?;
        return Ok(PellSolution { x: unit.x << 1, y: unit.y, n: 1, rhs: 4 });
    }
    let unit = fundamental_unit(d)?;
    if residue.is_one() {
        if let Some(odd) = cube_root_of_unit(d, &unit.x) {
            return Ok(PellSolution { rhs: 4, ..odd });
        }
    }
    Ok(PellSolution { x: unit.x << 1, y: unit.y << 1, n: 1, rhs: 4 })
}

/// Looks for `(t, v)` with `t² − d·v² = 4` and `((t + v√d)/2)³ = x + …√d`,
/// i.e. `t³ − 3t = 2x`.
fn cube_root_of_unit(d: &BigInt, x: &BigInt) -> Option<PellSolution> {
    let target: BigInt = x << 1;
    let f = |t: &BigInt| t * t * t - t * 3;
    // f is increasing for t ≥ 2 and the root lies near cbrt(2x).
    let guess = target.cbrt();
    let mut t = if guess > BigInt::from(2) { guess - 2 } else { BigInt::from(2) };
    while f(&t) < target {
        t += 1;
    }
    if f(&t) != target {
        return None;
    }
    let (v2, rem) = (&t * &t - BigInt::from(4)).div_rem(d);
    if !rem.is_zero() || !is_perfect_square(&v2) {
        return None;
    }
    let v = v2.sqrt();
    v.is_positive().then_some(PellSolution { x: t, y: v, n: 1, rhs: 0 })
}

/// n-th positive solution of `x² − d·y² = 4`: `2·((x₁ + y₁√d)/2)^n` from the
/// fundamental solution of `4`. Every solution of `4` arises this way, including
/// those that are not twice a solution of `1`.
pub fn nth_solution_four(d: &BigInt, fund4: &PellSolution, n: u64) -> Result<PellSolution> {
    if n == 0 {
        return domain("solution index starts at 1; n = 0 is the trivial solution");
    }
    if fund4.rhs != 4 || !fund4.satisfies(d) || !fund4.y.is_positive() {
        return contract(format!("{fund4} is not a positive solution of x^2 - {d}y^2 = 4"));
    }
    let power = HalfQuadInt::new(fund4.x.clone(), fund4.y.clone(), d).pow(n);
    debug_assert_eq!(power.quadruple_norm(), BigInt::from(4));
    Ok(PellSolution { x: power.u, y: power.v, n, rhs: 4 })
}

/// n-th positive solution of `x² − d·y² = −1` or `−4` from its fundamental
/// solution: the odd power `2n − 1` of `x₁ + y₁√d` (for `−1`) or of
/// `(x₁ + y₁√d)/2` (for `−4`, doubled back).
pub fn nth_solution_negative(d: &BigInt, fund: &PellSolution, n: u64) -> Result<PellSolution> {
    if n == 0 {
        return domain("solution index starts at 1");
    }
    if !matches!(fund.rhs, -1 | -4) || !fund.satisfies(d) || !fund.y.is_positive() || !fund.x.is_positive() {
        return contract(format!("{fund} is not a positive solution of x^2 - {d}y^2 = -1 or -4"));
    }
    let exp = n
        .checked_mul(2)
        .map(|e| e - 1)
        .ok_or_else(|| crate::PellError::Domain(format!("index {n} too large")))?;
    let (x, y) = if fund.rhs == -1 {
        let p = QuadInt::new(fund.x.clone(), fund.y.clone(), d).pow(exp);
        (p.x, p.y)
    } else {
        let p = HalfQuadInt::new(fund.x.clone(), fund.y.clone(), d).pow(exp);
        (p.u, p.v)
    };
    Ok(PellSolution { x, y, n, rhs: fund.rhs })
}

/// `x² − d·y² = −4`.
///
/// * `d ≡ 2, 3 (mod 4)`: any solution is even, so it is `2·` a solution of `−1`.
/// * `d ≡ 0 (mod 4)`: `x` is even and `(x/2)² − (d/4)·y² = −1`.
/// * `d ≡ 1 (mod 4)`: bounded search over `1 ≤ y ≤ search_bound`.
pub fn solve_negative_four(d: &BigInt, search_bound: u64) -> Result<Solvability> {
    require_nonsquare(d)?;
    let residue = d.mod_floor(&BigInt::from(4));
    if residue.is_zero() {
        let quarter: BigInt = d >> 2;
        if quarter < BigInt::from(2) || is_perfect_square(&quarter) {
            return domain(format!("d = {d} is 4 times a square; x^2 - {d}y^2 = -4 is out of scope"));
        }
        return Ok(match solve_negative_one(&quarter)? {
            Solvability::Solvable(s) => {
                Solvability::Solvable(PellSolution { x: s.x << 1, y: s.y, n: 1, rhs: -4 })
            }
            Solvability::NoSolution(_) => Solvability::NoSolution(NoSolutionReason::QuarterReduction),
            undetermined => undetermined,
        });
    }
    if residue.is_one() {
        if search_bound == 0 {
            return domain("search bound must be positive");
        }
        let report = oracle::brute_force_limited(d, -4, search_bound, 1);
        return Ok(match report.found.into_iter().next() {
            Some(s) => Solvability::Solvable(PellSolution { n: 1, ..s }),
            None => Solvability::Undetermined { searched_bound: search_bound },
        });
    }
    Ok(match solve_negative_one(d)? {
        Solvability::Solvable(s) => {
            Solvability::Solvable(PellSolution { x: s.x << 1, y: s.y << 1, n: 1, rhs: -4 })
        }
        Solvability::NoSolution(_) => Solvability::NoSolution(NoSolutionReason::MinusOneEquivalence),
        undetermined => undetermined,
    })
}

/// Direction of a composition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// Combines a solution `(g, h)` of `N` with a unit `(r, s)` into
/// `(g·r ± d·h·s, g·s ± h·r)`, another solution of `N`.
///
/// Negative coordinates are folded to their absolute values. A result with
/// `y = 0` is rejected, since positive solutions are the only ones reported.
pub fn compose(seed: &PellSolution, unit: &PellSolution, d: &BigInt, sign: Sign) -> Result<PellSolution> {
    require_nonsquare(d)?;
    if !seed.satisfies(d) {
        return contract(format!("seed {seed} does not satisfy x^2 - {d}y^2 = {}", seed.rhs));
    }
    check_unit(d, unit)?;
    let (g, h, r, s) = (&seed.x, &seed.y, &unit.x, &unit.y);
    let (x, y, n) = match sign {
        Sign::Plus => (g * r + d * h * s, g * s + h * r, seed.n + unit.n),
        Sign::Minus => (g * r - d * h * s, g * s - h * r, seed.n.abs_diff(unit.n)),
    };
    let composed = PellSolution { x: x.abs(), y: y.abs(), n, rhs: seed.rhs };
    if composed.y.is_zero() {
        return domain(format!("composition of {seed} and {unit} collapses to the trivial solution"));
    }
    if !composed.satisfies(d) {
        return contract(format!("composition {composed} fails x^2 - {d}y^2 = {}", seed.rhs));
    }
    Ok(composed)
}
