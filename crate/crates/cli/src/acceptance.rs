//! The acceptance checks, shared by `fpt selfcheck` and the acceptance test
//! target. Each check returns a verdict with a one-line explanation.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use anyhow::{ensure, Result};
use clap::ValueEnum;
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::Value;

use fpt_core::appearance::{self, alpha_zp};
use fpt_core::arith::primes_up_to;
use fpt_core::gf::DEFAULT_BUDGET;
use fpt_core::morganvoyce::{self, MvKind};
use fpt_core::zigzag::{self, Orientation};
use fpt_core::{dickson, fmp, make_field, planes, trinomials, DegreeMultiset};

/// Runs a command line (without the program name) and returns its JSON report.
pub type Runner<'a> = &'a dyn Fn(&[&str]) -> Result<Value>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    /// Reduced ranges, well under a minute
    Quick,
    /// The full ranges
    Full,
}

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub seconds: f64,
    pub detail: String,
}

impl Outcome {
    pub fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        format!("{verdict} {:>2} {:<38} {:>7.2}s  {}", self.id, self.name, self.seconds, self.detail)
    }
}

type Check = fn(Level, Runner) -> Result<(bool, String)>;

struct Criterion {
    id: u8,
    name: &'static str,
    time_limit: Option<Duration>,
    check: Check,
}

const fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

const CRITERIA: [Criterion; 15] = [
    Criterion { id: 1, name: "orbit census", time_limit: secs(10), check: orbit_census },
    Criterion { id: 2, name: "three constructions agree", time_limit: secs(120), check: constructions_agree },
    Criterion { id: 3, name: "support size is Fibonacci", time_limit: None, check: support_size },
    Criterion { id: 4, name: "strong divisibility", time_limit: None, check: strong_divisibility },
    Criterion { id: 5, name: "p = 19 appearance table", time_limit: secs(5), check: table_p19 },
    Criterion { id: 6, name: "trinomial degrees, exhaustive", time_limit: secs(120), check: trinomial_degrees },
    Criterion { id: 7, name: "z = -4 appearance and irreducibility", time_limit: None, check: minus_four },
    Criterion { id: 8, name: "roots satisfy I0(t,1) = t^(p^2)", time_limit: secs(60), check: frobenius_square },
    Criterion { id: 9, name: "zigzag bijection", time_limit: None, check: zigzag_bijection },
    Criterion { id: 10, name: "representation examples", time_limit: None, check: representations },
    Criterion { id: 11, name: "Morgan-Voyce bridge", time_limit: None, check: morgan_voyce },
    Criterion { id: 12, name: "bracket recursion", time_limit: secs(60), check: bracket_recursion },
    Criterion { id: 13, name: "appearance cross-validation", time_limit: None, check: alpha_cross },
    Criterion { id: 14, name: "least prime of given appearance", time_limit: None, check: carmichael },
    Criterion { id: 15, name: "density of alpha(p) = p - 1", time_limit: secs(300), check: density },
];

/// Number of checks.
pub const COUNT: usize = CRITERIA.len();

/// Runs every check in order, calling `progress` after each one.
pub fn run_all(level: Level, runner: Runner, mut progress: impl FnMut(&Outcome)) -> Vec<Outcome> {
    CRITERIA
        .iter()
        .map(|c| {
            let o = run_one(c, level, runner);
            progress(&o);
            o
        })
        .collect()
}

/// Runs the check with the given id (1-based).
pub fn run_id(id: u8, level: Level, runner: Runner) -> Option<Outcome> {
    CRITERIA.iter().find(|c| c.id == id).map(|c| run_one(c, level, runner))
}

fn run_one(c: &Criterion, level: Level, runner: Runner) -> Outcome {
    let start = Instant::now();
    let result = (c.check)(level, runner);
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match result {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e:#}")),
    };
    if let Some(limit) = c.time_limit {
        if elapsed > limit {
            passed = false;
            detail = format!("took {:.1}s, limit {}s; {detail}", elapsed.as_secs_f64(), limit.as_secs());
        }
    }
    Outcome { id: c.id, name: c.name, passed, seconds: elapsed.as_secs_f64(), detail }
}

fn full(level: Level) -> bool {
    level == Level::Full
}

fn orbit_census(_: Level, run: Runner) -> Result<(bool, String)> {
    let v = run(&["planes", "count", "--p", "3", "--m", "6"])?;
    let (planes, orbits) = (&v["planes"], &v["orbits"]);
    Ok((*planes == 11011 && *orbits == 31, format!("F_(3^6): {planes} planes in {orbits} orbits")))
}

fn constructions_agree(level: Level, _: Runner) -> Result<(bool, String)> {
    let max_m = if full(level) { 20 } else { 14 };
    let mut compared = 0;
    for p in [2u64, 3, 5, 7] {
        for m in 2..=max_m {
            let r = fmp::build_recursive(m, p)?;
            let z = fmp::build_zigzag(m, p)?;
            if r != z {
                return Ok((false, format!("recursion and zigzag differ at p={p} m={m}")));
            }
            compared += 1;
        }
    }
    let oracle_ranges: &[(u64, usize)] =
        if full(level) { &[(2, 16), (3, 10), (5, 7)] } else { &[(2, 10), (3, 6), (5, 4)] };
    let mut oracles = 0;
    for &(p, top) in oracle_ranges {
        for m in 2..=top {
            // oracle_fmp refuses any coefficient outside F_p
            let o = planes::oracle_fmp(&make_field(p, m)?, DEFAULT_BUDGET)?;
            let built = fmp::build_recursive(m as u64, p)?.to_dense(fmp::DENSE_DEGREE_BUDGET)?;
            if o != built {
                return Ok((false, format!("plane oracle differs from the recursion at p={p} m={m}")));
            }
            oracles += 1;
        }
    }
    Ok((true, format!("{compared} (p,m) pairs with m in 2..={max_m}; {oracles} plane oracles agree")))
}

fn support_size(level: Level, _: Runner) -> Result<(bool, String)> {
    let max_m = if full(level) { 40 } else { 30 };
    for p in [2u64, 3, 5, 7, 11] {
        for m in 1..=max_m {
            let c = fmp::support_count_streaming(m, p)?;
            if BigInt::from(c.count) != zigzag::fib(m as i64) || !c.strictly_increasing {
                return Ok((false, format!("p={p} m={m}: {} terms, disjoint={}", c.count, c.strictly_increasing)));
            }
        }
    }
    Ok((true, format!("m <= {max_m}, p in {{2,3,5,7,11}}; Fib({max_m}) = {}", zigzag::fib(max_m as i64))))
}

fn strong_divisibility(_: Level, _: Runner) -> Result<(bool, String)> {
    for p in [2u64, 3] {
        for m in 2..=9 {
            for n in 2..=9 {
                if !fmp::gcd_check(m, n, p)? {
                    return Ok((false, format!("gcd(f_{m}, f_{n}) != f_gcd over F_{p}")));
                }
            }
        }
    }
    Ok((true, "2 <= m,n <= 9 over F_2 and F_3".into()))
}

fn table_p19(_: Level, _: Runner) -> Result<(bool, String)> {
    const P: u64 = 19;
    let expected: [(u64, u64); 8] = [(1, 18), (5, 18), (7, 18), (4, 9), (10, 9), (14, 9), (16, 6), (18, 3)];
    let mut bad = Vec::new();
    for (z, want) in expected {
        let got = alpha_zp(z, P)?.alpha;
        let shape = trinomials::degree_multiset(&trinomials::gamma(z, P)?)?;
        let want_shape = DegreeMultiset::from_pairs(&[(1, 2), (want, (P - 1) / want)]);
        if got != want || shape != want_shape {
            bad.push(format!("z={z}: alpha {got} (expected {want}), factors {shape} (expected {want_shape})"));
        }
    }
    if bad.is_empty() {
        Ok((true, "all eight entries and factor shapes match".into()))
    } else {
        Ok((false, bad.join("; ")))
    }
}

fn trinomial_degrees(level: Level, _: Runner) -> Result<(bool, String)> {
    let top = if full(level) { 31 } else { 13 };
    let mut cases = 0u64;
    for p in primes_up_to(top).into_iter().filter(|&p| p > 2) {
        let split = DegreeMultiset::from_pairs(&[(1, p + 1)]);
        for a in 1..p {
            for b in 0..p {
                let v = trinomials::verify_degrees(a, b, p)?;
                if !v.matched || (b == 0 && v.actual != split) {
                    return Ok((
                        false,
                        format!("p={p} a={a} b={b}: predicted {} actual {}", v.prediction.predicted, v.actual),
                    ));
                }
                cases += 1;
            }
        }
    }
    Ok((true, format!("{cases} trinomials over odd p <= {top}")))
}

fn minus_four(_: Level, _: Runner) -> Result<(bool, String)> {
    for p in primes_up_to(47).into_iter().filter(|&p| p > 2) {
        let z = (4 * p - 4) % p;
        let alpha = alpha_zp(z, p)?.alpha;
        let irreducible = trinomials::gamma_bar(z, p)?.is_irreducible()?;
        if alpha != p || !irreducible {
            return Ok((false, format!("p={p}: alpha {alpha}, irreducible {irreducible}")));
        }
    }
    Ok((true, "odd p <= 47".into()))
}

fn frobenius_square(_: Level, _: Runner) -> Result<(bool, String)> {
    // z = -4 mod 5 is 1, so the p = 5 cases coincide
    let cases: BTreeSet<(u64, u64)> = [(3, 1), (3, 2), (5, 1), (5, 1u64)].into_iter().collect();
    let mut roots = 0;
    for &(p, z) in &cases {
        let r = trinomials::frob2_check(z, p, DEFAULT_BUDGET)?;
        if !r.holds {
            return Ok((false, format!("p={p} z={z} fails over F_(p^{})", r.m)));
        }
        roots += r.roots;
    }
    Ok((true, format!("{roots} roots over {} (p,z) cases", cases.len())))
}

fn zigzag_bijection(level: Level, _: Runner) -> Result<(bool, String)> {
    let (bij, count) = if full(level) { (18, 25) } else { (14, 20) };
    for n in 0..=bij {
        let mut values: Vec<BigInt> =
            zigzag::enum_zigzag(n, Orientation::DownUp, DEFAULT_BUDGET)?.iter().map(zigzag::value_fib).collect();
        values.sort();
        let target = zigzag::fib(n as i64 + 2);
        let onto =
            values.len() == usize::try_from(&target)? && values.iter().enumerate().all(|(i, v)| *v == BigInt::from(i));
        if !onto {
            return Ok((false, format!("DU({n}) is not mapped onto [0, Fib({}))", n + 2)));
        }
    }
    for n in 0..=count {
        let target = zigzag::fib(n as i64 + 2);
        let listed = zigzag::enum_zigzag(n, Orientation::DownUp, DEFAULT_BUDGET)?.len();
        if BigInt::from(zigzag::count_zigzag(n, Orientation::DownUp)) != target || BigInt::from(listed) != target {
            return Ok((false, format!("#DU({n}) != Fib({})", n + 2)));
        }
    }
    Ok((true, format!("bijective for n <= {bij}; counts for n <= {count}")))
}

fn representations(_: Level, run: Runner) -> Result<(bool, String)> {
    let z64 = run(&["zigzag", "zeck", "64"])?;
    let s12 = run(&["zigzag", "zeck", "12"])?;
    let s43 = run(&["zigzag", "zeck", "-43"])?;
    let ok = z64["indices"] == serde_json::json!([10, 6, 2])
        && s12["signed_indices"] == serde_json::json!([-2, -7])
        && s43["signed_indices"] == serde_json::json!([-2, -7, -10]);
    Ok((ok, format!("64 -> {}; 12 -> {}; -43 -> {}", z64["indices"], s12["signed_indices"], s43["signed_indices"])))
}

fn morgan_voyce(_: Level, _: Runner) -> Result<(bool, String)> {
    let seq = morganvoyce::f_m1_sequence(102);
    for k in 0..=50 {
        for kind in [MvKind::Small, MvKind::Big] {
            ensure!(morganvoyce::mv_poly(kind, k) == seq[kind.index(k) as usize], "{kind:?}_{k} differs from f_(m,1)");
        }
    }
    let minus_one = BigInt::from(-1);
    let (mut evaluations, mut mismatches, mut pairs) = (0u64, Vec::new(), 0u64);
    for p in [3u64, 5, 7, 11, 13, 19] {
        let pb = BigInt::from(p);
        for n in 0..=p + 1 {
            for z in 0..p {
                let mv = morganvoyce::lehmer_u(n, &BigInt::from(z), &minus_one);
                let mv = ((mv % &pb) + &pb) % &pb;
                let f = fmp::eval_fp_residue(n, p, z);
                evaluations += 1;
                if mv != BigInt::from(f) {
                    mismatches.push((p, n, z, mv, f));
                }
            }
        }
        for z in 1..p {
            let a = morganvoyce::mv_apparition(z, p, &BigInt::from(z))?;
            ensure!(a == alpha_zp(z, p)?.alpha, "apparition differs from alpha at z={z} p={p}");
            pairs += 1;
        }
    }
    if mismatches.is_empty() {
        return Ok((true, format!("{evaluations} evaluations and {pairs} apparition pairs agree")));
    }
    let all_at_zero = mismatches.iter().all(|m| m.2 == 0);
    let (p, n, z, mv, f) = &mismatches[0];
    Ok((
        false,
        format!(
            "{} of {evaluations} evaluations differ{}; first: p={p} n={n} z={z}: MV_n = {mv}, f_(n,p) = {f}; \
             b_k/B_k equal f_(m,1) for k <= 50 and {pairs} apparition pairs agree",
            mismatches.len(),
            if all_at_zero { ", all at z = 0" } else { "" },
        ),
    ))
}

fn bracket_recursion(_: Level, _: Runner) -> Result<(bool, String)> {
    let mut checked = 0;
    for (p, degrees) in [(3u64, 3..=6usize), (2, 3..=8)] {
        for n in degrees {
            let field = make_field(p, n)?;
            for m in 3..=n {
                let r = dickson::verify_bracket_recursion(m, &field, DEFAULT_BUDGET)?;
                if !r.passed() {
                    return Ok((false, format!("index {m} over F_({p}^{n}): {} failures", r.failure_count)));
                }
                checked += r.points_checked;
            }
        }
    }
    Ok((true, format!("{checked} point checks over F_(3^3..3^6) and F_(2^3..2^8)")))
}

fn alpha_cross(_: Level, _: Runner) -> Result<(bool, String)> {
    let mut compared = 0;
    for p in primes_up_to(97) {
        for z in 1..p {
            let rec = alpha_zp(z, p)?;
            let bound = p as i64 - appearance::discriminant_symbol(z, p) as i64;
            if bound % rec.alpha as i64 != 0 {
                return Ok((false, format!("alpha({z},{p}) = {} does not divide {bound}", rec.alpha)));
            }
            if (z + 4) % p != 0 {
                let via_order = appearance::alpha_via_multiplicative_order(z, p)?;
                if via_order != rec.alpha {
                    return Ok((false, format!("z={z} p={p}: recursion {} vs order {via_order}", rec.alpha)));
                }
                compared += 1;
            }
        }
    }
    Ok((true, format!("{compared} pairs over p <= 97")))
}

fn carmichael(_: Level, _: Runner) -> Result<(bool, String)> {
    const LIMIT: u64 = 10_000;
    let mut found = 0;
    let mut misses = Vec::new();
    for m in 1..=50u64 {
        let hit = appearance::carmichael_search(m, LIMIT);
        match m {
            6 | 12 => {
                if let Some(p) = hit {
                    return Ok((false, format!("alpha({p}) = {m}, but Fib({m}) has no primitive prime divisor")));
                }
            }
            1 | 2 => {}
            _ => match hit {
                Some(_) => found += 1,
                None => {
                    let divisors = appearance::primitive_prime_divisors(m)?;
                    match divisors.first() {
                        Some(&q) if q > LIMIT => misses.push(format!("{m}:{q}")),
                        _ => return Ok((false, format!("no prime with alpha = {m} exists below or above {LIMIT}"))),
                    }
                }
            },
        }
    }
    let detail = if misses.is_empty() {
        format!("{found} indices found below {LIMIT}; none for 6 and 12")
    } else {
        format!(
            "{found} indices found below {LIMIT}; none for 6 and 12; reported misses (m:least prime) {}",
            misses.join(" ")
        )
    };
    Ok((true, detail))
}

fn density(level: Level, _: Runner) -> Result<(bool, String)> {
    let limit = if full(level) { 100_000 } else { 20_000 };
    let d = appearance::shanks_taylor_density(limit)?;
    let mut bad_residue = None;
    for p in primes_up_to(limit) {
        if appearance::alpha_prime(p)? == p + 1 && ![2, 3].contains(&(p % 5)) {
            bad_residue = Some(p);
            break;
        }
    }
    let in_band = (0.14..=0.21).contains(&d.density);
    let ok = in_band && bad_residue.is_none();
    let mut detail = format!(
        "{} of {} primes <= {limit} have alpha = p - 1 (density {:.4}); {} have alpha = p + 1",
        d.count_pm1, d.total_primes, d.density, d.count_pp1
    );
    if let Some(p) = bad_residue {
        detail.push_str(&format!("; p = {p} has alpha = p + 1 but p mod 5 = {}", p % 5));
    }
    Ok((ok, detail))
}
