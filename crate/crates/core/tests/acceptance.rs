//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use pellkit::cf::evaluate_finite;
use pellkit::oracle::least_solution;
use pellkit::{
    binet_pair, cf_expand, compose, corollary_solve, family1_cf, family2_cf, family_fundamental, family_solve,
    fundamental_unit, is_perfect_square, nth_quotient_form, nth_solution, nth_solution_four, solve_four, u_n, v_n,
    Corollary, Family, FamilyParams, NoSolutionReason, PellSolution, Rhs, SequenceParams, Sign, Solvability,
};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn family_grid(a_max: u64, b_max: u64) -> Vec<FamilyParams> {
    let mut out = Vec::new();
    for family in [Family::F1, Family::F2] {
        for a in family.min_a()..=a_max {
            for b in 1..=b_max {
                out.push(FamilyParams::new(family, a, b).unwrap());
            }
        }
    }
    out
}

fn solved(v: &Solvability) -> Result<PellSolution, String> {
    v.solution().cloned().ok_or_else(|| format!("expected a solution, got {v:?}"))
}

fn expansions() -> Check {
    let start = Instant::now();
    let mut count = 0;
    for a in 2..=50u64 {
        for b in 1..=50u64 {
            let mut closed = vec![family1_cf(a, b).map_err(|e| e.to_string())?];
            if a >= 3 {
                closed.push(family2_cf(a, b).map_err(|e| e.to_string())?);
            }
            for c in closed {
                let generic = cf_expand(c.d()).map_err(|e| e.to_string())?;
                ensure!(c == generic, "d = {}: closed form {:?} vs {:?}", c.d(), c.period(), generic.period());
                count += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    Ok(format!("{count} expansions in {} ms", elapsed.as_millis()))
}

fn fundamentals() -> Check {
    const Y_CAP: u64 = 200_000;
    let mut radicands: Vec<u64> = (2..=2_000).collect();
    radicands.extend((2_001..=1_000_000).step_by(4_999));
    let (mut certified, mut skipped) = (0, 0);
    for d in radicands {
        let d = BigInt::from(d);
        if is_perfect_square(&d) {
            continue;
        }
        let one = fundamental_unit(&d).map_err(|e| e.to_string())?;
        let four = solve_four(&d).map_err(|e| e.to_string())?;
        for s in [one, four] {
            match u64::try_from(&s.y) {
                Ok(y) if y <= Y_CAP => {
                    let least = least_solution(&d, s.rhs, y);
                    ensure!(least.as_ref().is_some_and(|l| l.same_pair(&s)), "d = {d}, rhs {}: {s} vs {least:?}", s.rhs);
                    certified += 1;
                }
                _ => skipped += 1,
            }
        }
    }
    ensure!(certified >= 200, "only {certified} certified");
    Ok(format!("{certified} certified, {skipped} beyond y <= {Y_CAP}"))
}

fn closed_forms() -> Check {
    let mut count = 0;
    for p in family_grid(12, 12) {
        let d = p.d();
        let unit = fundamental_unit(&d).map_err(|e| e.to_string())?;
        let four = solve_four(&d).map_err(|e| e.to_string())?;
        for n in 1..=8 {
            let one = solved(&family_solve(&p, Rhs::One, n).map_err(|e| e.to_string())?.verdict)?;
            ensure!(one == nth_solution(&d, &unit, n).unwrap(), "{p:?} rhs 1 n = {n}");
            let f = solved(&family_solve(&p, Rhs::Four, n).map_err(|e| e.to_string())?.verdict)?;
            ensure!(f == nth_solution_four(&d, &four, n).unwrap(), "{p:?} rhs 4 n = {n}");
            count += 2;
        }
        ensure!(family_fundamental(&p, Rhs::Four).unwrap().same_pair(&four), "{p:?} least rhs 4");
    }
    for which in Corollary::ALL {
        for k in 1..=8 {
            let d = which.d(k).map_err(|e| e.to_string())?;
            let base = if which.rhs() == Rhs::One { fundamental_unit(&d) } else { solve_four(&d) }.unwrap();
            for n in 1..=8 {
                let c = corollary_solve(which, k, n).map_err(|e| e.to_string())?;
                let generic = if which.rhs() == Rhs::One { nth_solution(&d, &base, n) } else { nth_solution_four(&d, &base, n) };
                ensure!(c == generic.unwrap(), "{} k = {k} n = {n}", which.tag());
                count += 1;
            }
        }
    }
    Ok(format!("{count} closed-form solutions equal unit powers"))
}

fn unsolvability() -> Check {
    const Y: u64 = 10_000;
    let mut count = 0;
    for p in family_grid(12, 12) {
        let d = p.d();
        let v = family_solve(&p, Rhs::MinusOne, 1).unwrap().verdict;
        ensure!(v == Solvability::NoSolution(NoSolutionReason::EvenPeriod), "{p:?}: {v:?}");
        ensure!(least_solution(&d, -1, Y).is_none(), "{p:?} has a -1 solution");
        count += 1;
        if p.family == Family::F2 {
            let v = family_solve(&p, Rhs::MinusFour, 1).unwrap().verdict;
            ensure!(matches!(v, Solvability::NoSolution(_)), "{p:?}: {v:?}");
            ensure!(least_solution(&d, -4, Y).is_none(), "{p:?} has a -4 solution");
            count += 1;
        }
    }
    Ok(format!("{count} verdicts, none contradicted for y <= {Y}"))
}

fn lucas() -> Check {
    let mut count = 0;
    for k in -20i64..=20 {
        for s in [-1i64, 1] {
            let Ok(params) = SequenceParams::new(k, s) else { continue };
            for n in 0..=50u32 {
                let (v, u) = binet_pair(&params, n as u64);
                ensure!((v.clone(), u.clone()) == (v_n(&params, n as u64), u_n(&params, n as u64)), "k={k} s={s} n={n}");
                let norm = &v * &v - params.discriminant() * &u * &u;
                ensure!(norm == BigInt::from(4) * BigInt::from(-s).pow(n), "norm k={k} s={s} n={n}");
                count += 1;
            }
        }
    }
    Ok(format!("{count} (k, s, n) points"))
}

fn quotient_forms() -> Check {
    let mut count = 0;
    for p in family_grid(12, 12) {
        let e = p.expansion().unwrap();
        for n in 1..=6 {
            let word = nth_quotient_form(&p, n).unwrap();
            ensure!(word.len() as u64 == n * e.period_len() as u64, "{p:?} n = {n}: length {}", word.len());
            let (x, y) = evaluate_finite(&word);
            let s = solved(&family_solve(&p, Rhs::One, n).unwrap().verdict)?;
            ensure!((x, y) == (s.x, s.y), "{p:?} n = {n}");
            count += 1;
        }
    }
    Ok(format!("{count} words evaluate to the n-th solution"))
}

fn group_law() -> Check {
    let sample: Vec<BigInt> = (2u32..5_000).map(BigInt::from).filter(|d| !is_perfect_square(d)).step_by(97).take(50).collect();
    ensure!(sample.len() == 50, "sample has {} radicands", sample.len());
    let mut count = 0;
    for d in &sample {
        let f = fundamental_unit(d).unwrap();
        let four = solve_four(d).unwrap();
        for i in 1..=6u64 {
            for j in 1..=6u64 {
                let (si, sj) = (nth_solution(d, &f, i).unwrap(), nth_solution(d, &f, j).unwrap());
                ensure!(compose(&si, &sj, d, Sign::Plus).unwrap() == nth_solution(d, &f, i + j).unwrap(), "d = {d} {i}+{j}");
                if i > j {
                    ensure!(compose(&si, &sj, d, Sign::Minus).unwrap() == nth_solution(d, &f, i - j).unwrap(), "d = {d} {i}-{j}");
                }
                // (x + y√d)/2 · unit stays on x² − dy² = 4
                let f4 = nth_solution_four(d, &four, i).unwrap();
                ensure!(compose(&f4, &sj, d, Sign::Plus).unwrap().satisfies(d), "d = {d} rhs 4");
                count += 1;
            }
        }
    }
    Ok(format!("{count} compositions over 50 radicands"))
}

fn verify_binary() -> Check {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_pellkit"))
        .args(["verify", "--a-max", "12", "--b-max", "12", "--n-max", "8"])
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let stdout = String::from_utf8_lossy(&out.stdout);
    ensure!(out.status.code() == Some(0), "exit {:?}\n{stdout}", out.status.code());
    ensure!(stdout.contains("discrepancies: 0"), "{stdout}");
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    let total = stdout.lines().find_map(|l| l.strip_prefix("total")).map(str::trim).unwrap_or("?");
    Ok(format!("{total} checks, 0 discrepancies, {} ms", elapsed.as_millis()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("family expansions match the generic algorithm", expansions),
        ("fundamental solutions are least", fundamentals),
        ("closed forms equal powers of the fundamental unit", closed_forms),
        ("-1 and family -4 unsolvability", unsolvability),
        ("Lucas/Binet identities", lucas),
        ("n-th convergent partial quotients", quotient_forms),
        ("composition group law", group_law),
        ("verify subcommand on the default grid", verify_binary),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match result {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
