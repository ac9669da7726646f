//! Brute-force ground truth and grid cross-checking.
//!
//! [`brute_force`] scans `y = 1..=y_max` and tests whether `d·y² + rhs` is a
//! perfect square with exact integer square roots. [`cross_check`] recomputes
//! every closed form on a grid of family parameters through independent routes
//! and collects disagreements.

use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::cf::{cf_expand, evaluate_finite};
use crate::family::{self, Corollary, Family, FamilyParams, Rhs};
use crate::pell::{self, PellSolution, Solvability};

/// Default `y_max` for sweeps.
pub const DEFAULT_Y_BOUND: u64 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    pub d: BigInt,
    pub rhs: i64,
    pub y_max: u64,
    /// Hits by increasing `y`; `n` is the 1-based position in this list.
    pub found: Vec<PellSolution>,
    /// `false` when the scan stopped early at its hit limit.
    pub exhausted: bool,
}

/// Every positive solution with `y ≤ y_max`.
pub fn brute_force(d: &BigInt, rhs: i64, y_max: u64) -> SearchReport {
    brute_force_limited(d, rhs, y_max, usize::MAX)
}

/// Like [`brute_force`], stopping once `max_hits` solutions are found.
pub fn brute_force_limited(d: &BigInt, rhs: i64, y_max: u64, max_hits: usize) -> SearchReport {
    let mut found = Vec::new();
    let mut exhausted = true;
    let narrow = narrow_scan(d, rhs, y_max);
    for y in 1..=y_max {
        if found.len() >= max_hits {
            exhausted = false;
            break;
        }
        let root = match narrow {
            Some(d64) => {
                let t = d64 as i128 * (y as i128) * (y as i128) + rhs as i128;
                u128::try_from(t).ok().and_then(|t| {
                    let r = t.sqrt();
                    (r * r == t).then(|| BigInt::from(r))
                })
            }
            None => {
                let yb = BigInt::from(y);
                let t = d * &yb * &yb + rhs;
                (!t.is_negative()).then(|| t.sqrt()).filter(|r| r * r == t)
            }
        };
        if let Some(x) = root {
            let n = found.len() as u64 + 1;
            found.push(PellSolution { x, y: y.into(), n, rhs });
        }
    }
    SearchReport { d: d.clone(), rhs, y_max, found, exhausted }
}

/// Machine-word fast path when `d·y_max² + |rhs|` fits in `i128`.
fn narrow_scan(d: &BigInt, rhs: i64, y_max: u64) -> Option<u64> {
    let d64 = d.to_u64()?;
    let bound = (d64 as u128)
        .checked_mul(y_max as u128)?
        .checked_mul(y_max as u128)?
        .checked_add(rhs.unsigned_abs() as u128)?;
    (bound <= i128::MAX as u128).then_some(d64)
}

/// Least positive solution with `y ≤ y_max`, if any.
pub fn least_solution(d: &BigInt, rhs: i64, y_max: u64) -> Option<PellSolution> {
    brute_force_limited(d, rhs, y_max, 1).found.into_iter().next()
}

/// Parameter grid for [`cross_check`]. Empty ranges are allowed.
#[derive(Clone, Debug)]
pub struct Grid {
    pub families: Vec<Family>,
    pub a: RangeInclusive<u64>,
    pub b: RangeInclusive<u64>,
    pub rhs: Vec<Rhs>,
    pub n: RangeInclusive<u64>,
    pub corollaries: Vec<Corollary>,
    pub k: RangeInclusive<u64>,
    /// Brute-force bound for oracle certification and unsolvability sweeps.
    pub y_bound: u64,
    /// Bound handed to the generic `−4` search.
    pub search_bound: u64,
}

impl Grid {
    /// The full check set over `a ≤ a_max`, `b ≤ b_max`, `n ≤ n_max`, `k ≤ k_max`.
    pub fn full(a_max: u64, b_max: u64, n_max: u64, k_max: u64, y_bound: u64) -> Self {
        Self {
            families: vec![Family::F1, Family::F2],
            a: 1..=a_max,
            b: 1..=b_max,
            rhs: vec![Rhs::One, Rhs::MinusOne, Rhs::Four, Rhs::MinusFour],
            n: 1..=n_max,
            corollaries: Corollary::ALL.to_vec(),
            k: 1..=k_max,
            y_bound,
            search_bound: y_bound,
        }
    }

    pub fn empty() -> Self {
        Self::full(0, 0, 0, 0, DEFAULT_Y_BOUND)
    }

    fn tasks(&self) -> Vec<Task> {
        let mut tasks = Vec::new();
        for &family in &self.families {
            for a in self.a.clone() {
                for b in self.b.clone() {
                    let Ok(params) = FamilyParams::new(family, a, b) else { continue };
                    tasks.push(Task::Expansion(params.clone()));
                    if !self.n.is_empty() {
                        tasks.push(Task::QuotientForm(params.clone(), self.n.clone()));
                    }
                    for &rhs in &self.rhs {
                        tasks.push(Task::Equation(params.clone(), rhs, self.n.clone()));
                    }
                }
            }
        }
        for &which in &self.corollaries {
            for k in self.k.clone() {
                if !self.n.is_empty() {
                    tasks.push(Task::Corollary(which, k, self.n.clone()));
                }
            }
        }
        tasks
    }
}

/// What a grid point checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckKind {
    /// Closed-form expansion against PQa.
    Expansion,
    /// Closed-form fundamental against the brute-force least solution.
    Fundamental,
    /// Closed-form n-th solution against unit powers of the generic fundamental.
    Solutions,
    /// Finite quotient word against the n-th solution.
    QuotientForm,
    /// Theorem-backed unsolvability against period parity and brute force.
    Unsolvable,
    /// Generic verdict for `−4` on the `a²b² − b` family.
    GenericVerdict,
    /// Corollary formula against the equation and the family it specializes.
    Corollary,
}

impl CheckKind {
    pub const ALL: [CheckKind; 7] = [
        Self::Expansion,
        Self::Fundamental,
        Self::Solutions,
        Self::QuotientForm,
        Self::Unsolvable,
        Self::GenericVerdict,
        Self::Corollary,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Self::Expansion => "expansion",
            Self::Fundamental => "fundamental",
            Self::Solutions => "solutions",
            Self::QuotientForm => "quotient-form",
            Self::Unsolvable => "unsolvable",
            Self::GenericVerdict => "generic-verdict",
            Self::Corollary => "corollary",
        }
    }
}

/// Where a discrepancy was seen. `subject` is a family or a corollary tag and
/// `first`/`second` are `(a, b)` or `(k, 0)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GridPoint {
    pub subject: String,
    pub first: u64,
    pub second: u64,
    pub rhs: i64,
    pub n: u64,
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}, {}) rhs={} n={}", self.subject, self.first, self.second, self.rhs, self.n)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Discrepancy {
    pub point: GridPoint,
    pub check: CheckKind,
    pub detail: String,
}

impl fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: {}", self.check.tag(), self.point, self.detail)
    }
}

/// Aggregated outcome of a grid run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CrossCheckReport {
    /// Number of comparisons performed, per check kind (indexed like [`CheckKind::ALL`]).
    pub checks: [u64; 7],
    /// Fundamentals certified by brute force.
    pub oracle_certified: u64,
    /// Fundamentals whose `y` exceeded the oracle bound.
    pub oracle_skipped: u64,
    /// Generic `−4` verdicts that stayed undetermined.
    pub undetermined: u64,
    pub discrepancies: Vec<Discrepancy>,
}

impl CrossCheckReport {
    pub fn total_checks(&self) -> u64 {
        self.checks.iter().sum()
    }

    pub fn count(&self, kind: CheckKind) -> u64 {
        self.checks[kind as usize]
    }

    fn merge(mut self, other: Self) -> Self {
        for (mine, theirs) in self.checks.iter_mut().zip(other.checks) {
            *mine += theirs;
        }
        self.oracle_certified += other.oracle_certified;
        self.oracle_skipped += other.oracle_skipped;
        self.undetermined += other.undetermined;
        self.discrepancies.extend(other.discrepancies);
        self
    }
}

#[derive(Clone, Debug)]
enum Task {
    Expansion(FamilyParams),
    QuotientForm(FamilyParams, RangeInclusive<u64>),
    Equation(FamilyParams, Rhs, RangeInclusive<u64>),
    Corollary(Corollary, u64, RangeInclusive<u64>),
}

/// Runs every grid point, on `jobs` worker threads when `jobs > 1`.
/// The report is identical for any `jobs`.
pub fn cross_check(grid: &Grid, jobs: usize) -> CrossCheckReport {
    let tasks = grid.tasks();
    let run = |task: &Task| run_task(grid, task);
    let mut report = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("failed to start worker pool");
        pool.install(|| {
            tasks
                .par_iter()
                .map(run)
                .reduce(CrossCheckReport::default, CrossCheckReport::merge)
        })
    } else {
        tasks.iter().map(run).fold(CrossCheckReport::default(), CrossCheckReport::merge)
    };
    report.discrepancies.sort();
    report
}

struct Recorder<'g> {
    grid: &'g Grid,
    report: CrossCheckReport,
}

impl Recorder<'_> {
    fn check(&mut self, kind: CheckKind, point: &GridPoint, ok: bool, detail: impl FnOnce() -> String) {
        self.report.checks[kind as usize] += 1;
        if !ok {
            self.report.discrepancies.push(Discrepancy { point: point.clone(), check: kind, detail: detail() });
        }
    }
}

fn family_point(params: &FamilyParams, rhs: i64, n: u64) -> GridPoint {
    GridPoint { subject: params.family.tag().to_string(), first: params.a, second: params.b, rhs, n }
}

fn run_task(grid: &Grid, task: &Task) -> CrossCheckReport {
    let mut rec = Recorder { grid, report: CrossCheckReport::default() };
    match task {
        Task::Expansion(params) => check_expansion(&mut rec, params),
        Task::QuotientForm(params, ns) => check_quotient_form(&mut rec, params, ns.clone()),
        Task::Equation(params, rhs, ns) => match rhs {
            Rhs::One | Rhs::Four => check_solutions(&mut rec, params, *rhs, ns.clone()),
            Rhs::MinusOne => check_unsolvable(&mut rec, params, *rhs),
            Rhs::MinusFour => match params.family {
                Family::F2 => check_unsolvable(&mut rec, params, *rhs),
                Family::F1 => check_generic_verdict(&mut rec, params),
            },
        },
        Task::Corollary(which, k, ns) => check_corollary(&mut rec, *which, *k, ns.clone()),
    }
    rec.report
}

fn check_expansion(rec: &mut Recorder, params: &FamilyParams) {
    let point = family_point(params, 0, 0);
    let closed = params.expansion();
    let generic = cf_expand(&params.d());
    let ok = matches!((&closed, &generic), (Ok(c), Ok(g)) if c == g);
    rec.check(CheckKind::Expansion, &point, ok, || format!("closed form {closed:?} vs PQa {generic:?}"));
}

fn check_quotient_form(rec: &mut Recorder, params: &FamilyParams, ns: RangeInclusive<u64>) {
    for n in ns {
        let point = family_point(params, 1, n);
        let word = family::nth_quotient_form(params, n);
        let sol = family::family_solve(params, Rhs::One, n);
        let ok = match (&word, &sol) {
            (Ok(w), Ok(s)) => match s.verdict.solution() {
                Some(s) => evaluate_finite(w) == (s.x.clone(), s.y.clone()),
                None => false,
            },
            _ => false,
        };
        rec.check(CheckKind::QuotientForm, &point, ok, || format!("word {word:?} vs solution {sol:?}"));
    }
}

fn check_solutions(rec: &mut Recorder, params: &FamilyParams, rhs: Rhs, ns: RangeInclusive<u64>) {
    let d = params.d();
    let generic_fund = match rhs {
        Rhs::One => pell::fundamental_unit(&d),
        _ => pell::solve_four(&d),
    };
    let generic_fund = match generic_fund {
        Ok(f) => f,
        Err(e) => {
            let point = family_point(params, rhs.value(), 1);
            rec.check(CheckKind::Solutions, &point, false, || format!("generic solver failed: {e}"));
            return;
        }
    };

    // fundamental against brute force
    let point = family_point(params, rhs.value(), 1);
    match family::family_fundamental(params, rhs) {
        Ok(closed) => {
            let covered = closed.y.to_u64().filter(|&y| y <= rec.grid.y_bound);
            match covered {
                Some(y) => {
                    rec.report.oracle_certified += 1;
                    let least = least_solution(&d, rhs.value(), y);
                    let ok = least.as_ref().is_some_and(|l| l.same_pair(&closed));
                    rec.check(CheckKind::Fundamental, &point, ok, || {
                        format!("closed form {closed} vs brute force {least:?}")
                    });
                }
                None => rec.report.oracle_skipped += 1,
            }
        }
        Err(e) => rec.check(CheckKind::Fundamental, &point, false, || format!("closed form failed: {e}")),
    }

    // d ≢ 0 (mod 4): every rhs=4 solution is twice an rhs=1 solution
    let doubled_expected = rhs == Rhs::Four && !(d.clone() % 4u8).is_zero();
    for n in ns {
        let point = family_point(params, rhs.value(), n);
        let closed = family::family_solve(params, rhs, n);
        let generic = match rhs {
            Rhs::One => pell::nth_solution(&d, &generic_fund, n),
            _ => pell::nth_solution_four(&d, &generic_fund, n),
        };
        let closed_sol = closed.as_ref().ok().and_then(|c| c.verdict.solution().cloned());
        let ok = match (&closed_sol, &generic) {
            (Some(c), Ok(g)) => c.satisfies(&d) && c.same_pair(g),
            _ => false,
        };
        rec.check(CheckKind::Solutions, &point, ok, || format!("closed form {closed:?} vs unit power {generic:?}"));

        if doubled_expected {
            let one = family::family_solve(params, Rhs::One, n).ok().and_then(|o| o.verdict.solution().cloned());
            let ok = match (&one, &closed_sol) {
                (Some(one), Some(four)) => four.x == &one.x << 1u8 && four.y == &one.y << 1u8,
                _ => false,
            };
            rec.check(CheckKind::Solutions, &point, ok, || {
                format!("rhs=4 solution {closed_sol:?} is not twice the rhs=1 solution {one:?}")
            });
        }
    }
}

fn check_unsolvable(rec: &mut Recorder, params: &FamilyParams, rhs: Rhs) {
    let point = family_point(params, rhs.value(), 0);
    let d = params.d();
    let closed = family::family_solve(params, rhs, 1);
    let closed_says_none = matches!(&closed, Ok(o) if matches!(o.verdict, Solvability::NoSolution(_)));
    rec.check(CheckKind::Unsolvable, &point, closed_says_none, || format!("closed form verdict {closed:?}"));

    let parity_ok = cf_expand(&d).map(|e| e.period_len() % 2 == 0).unwrap_or(false);
    rec.check(CheckKind::Unsolvable, &point, parity_ok, || format!("period length of sqrt({d}) is not even"));

    let hit = least_solution(&d, rhs.value(), rec.grid.y_bound);
    rec.check(CheckKind::Unsolvable, &point, hit.is_none(), || {
        format!("brute force found {hit:?} with y <= {}", rec.grid.y_bound)
    });
}

fn check_generic_verdict(rec: &mut Recorder, params: &FamilyParams) {
    let point = family_point(params, -4, 0);
    let d = params.d();
    let verdict = family::family_solve_with_bound(params, Rhs::MinusFour, 1, rec.grid.search_bound);
    let hit = least_solution(&d, -4, rec.grid.y_bound);
    let ok = match verdict.as_ref().map(|o| &o.verdict) {
        Ok(Solvability::Solvable(s)) => {
            s.satisfies(&d) && hit.as_ref().is_none_or(|h| h.y >= s.y)
        }
        Ok(Solvability::NoSolution(_)) => hit.is_none(),
        Ok(Solvability::Undetermined { .. }) => {
            rec.report.undetermined += 1;
            hit.is_none()
        }
        Err(_) => false,
    };
    rec.check(CheckKind::GenericVerdict, &point, ok, || format!("generic verdict {verdict:?} vs brute force {hit:?}"));
}

fn check_corollary(rec: &mut Recorder, which: Corollary, k: u64, ns: RangeInclusive<u64>) {
    let threshold = match which.family() {
        Family::F1 => 2,
        Family::F2 => 3,
    };
    let generic_fund = which.d(k).and_then(|d| {
        let f = match which.rhs() {
            Rhs::One => pell::fundamental_unit(&d),
            _ => pell::solve_four(&d),
        };
        f.map(|f| (d, f))
    });
    for n in ns {
        let point = GridPoint { subject: which.tag().to_string(), first: k, second: 0, rhs: which.rhs().value(), n };
        let sol = family::corollary_solve(which, k, n);
        let ok = match (&sol, &generic_fund) {
            (Ok(s), Ok((d, f))) => {
                let generic = match which.rhs() {
                    Rhs::One => pell::nth_solution(d, f, n),
                    _ => pell::nth_solution_four(d, f, n),
                };
                s.satisfies(d) && generic.is_ok_and(|g| g.same_pair(s))
            }
            _ => false,
        };
        rec.check(CheckKind::Corollary, &point, ok, || format!("corollary {sol:?} vs generic {generic_fund:?}"));
        if k >= threshold {
            let via_family = FamilyParams::new(which.family(), k, 3)
                .and_then(|p| family::family_solve(&p, which.rhs(), n));
            let ok = match (&sol, &via_family) {
                (Ok(s), Ok(f)) => f.verdict.solution().is_some_and(|f| f.same_pair(s)),
                _ => false,
            };
            rec.check(CheckKind::Corollary, &point, ok, || format!("corollary {sol:?} vs family {via_family:?}"));
        }
    }
}
