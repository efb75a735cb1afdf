use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use num_bigint::{BigInt, BigUint};
use serde::Serialize;
use serde_json::{json, Map, Value};

use fpt_core::gf::DEFAULT_BUDGET;
use fpt_core::morganvoyce::MvKind;
use fpt_core::zigzag::{self, Orientation, Parity, ZigzagSeq};
use fpt_core::{appearance, dickson, fmp, make_field, planes, trinomials, Error};

use crate::acceptance;
use crate::{
    AlphaCmd, BaseArg, Cli, Command, FmpCmd, Global, KindArg, Method, MvCmd, OrientationArg, ParityArg, PlanesCmd,
    Report, TrinomialCmd, UsageError, VerifyCmd, ZigzagCmd, BUDGET_ENV,
};

/// Default cap on the number of terms `fmp count` streams.
const COUNT_BUDGET: u64 = 1 << 30;

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn to_json(v: impl Serialize) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

/// `head` fields first, then the fields of `body`.
fn merged(head: Value, body: impl Serialize) -> Result<Value> {
    let mut out: Map<String, Value> = match head {
        Value::Object(m) => m,
        _ => Map::new(),
    };
    if let Value::Object(m) = to_json(body)? {
        for (k, v) in m {
            out.entry(k).or_insert(v);
        }
    }
    Ok(Value::Object(out))
}

fn enumeration_budget(g: &Global) -> Result<u64> {
    if let Some(b) = g.budget {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(s) => s.trim().parse().map_err(|_| usage(format!("{BUDGET_ENV}={s:?} is not a non-negative integer"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn residue(z: i64, p: u64) -> Result<u64> {
    if p < 2 {
        return Err(usage(format!("p must be a prime, got {p}")));
    }
    Ok(z.rem_euclid(p as i64) as u64)
}

fn parse_int(s: &str) -> Result<BigInt> {
    s.trim().parse().map_err(|_| usage(format!("{s:?} is not an integer")))
}

fn fib_budget(m: u64, budget: u64) -> Result<()> {
    let size = zigzag::fib(m as i64);
    if size > BigInt::from(budget) {
        return Err(Error::BudgetExceeded { what: "support size Fib(m)", needed: size.to_string(), budget }.into());
    }
    Ok(())
}

pub(crate) fn dispatch(cli: &Cli) -> Result<Report> {
    let g = &cli.global;
    match &cli.command {
        Command::Fmp(c) => fmp_cmd(c, g),
        Command::Planes(c) => planes_cmd(c, g),
        Command::Zigzag(c) => zigzag_cmd(c, g),
        Command::Alpha(c) => alpha_cmd(c),
        Command::Trinomial(c) => trinomial_cmd(c, g),
        Command::Mv(c) => mv_cmd(c),
        Command::Verify(c) => verify_cmd(c, g),
        Command::Selfcheck { level } => {
            let outcomes = acceptance::run_all(*level, &crate::run_json, |o| {
                eprintln!("{}", o.line());
            });
            let passed = outcomes.iter().all(|o| o.passed);
            Ok(Report { value: json!({"level": level, "passed": passed, "criteria": outcomes}), ok: passed })
        }
    }
}

fn cache_path(dir: &Path, p: u64, m: u64) -> std::path::PathBuf {
    dir.join(format!("fmp_{p}_{m}.json"))
}

fn read_cache(path: &Path, p: u64, m: u64) -> Result<Option<fmp::SparseSupport>> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e).with_context(|| format!("reading {}", path.display())),
    };
    let v: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if v["p"] != json!(p) || v["m"] != json!(m) {
        return Err(usage(format!("{} does not hold f_({m},{p})", path.display())));
    }
    let support = v["support"]
        .as_array()
        .into_iter()
        .flatten()
        .map(|e| e.as_str().and_then(|s| s.parse::<BigUint>().ok()))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| usage(format!("{} has a malformed support", path.display())))?;
    if BigInt::from(support.len()) != zigzag::fib(m as i64) || !support.windows(2).all(|w| w[0] < w[1]) {
        return Err(usage(format!("{} is not a valid support of f_({m},{p})", path.display())));
    }
    Ok(Some(fmp::SparseSupport { p, m, support }))
}

fn build(p: u64, m: u64, method: Method, budget: u64) -> Result<(fmp::SparseSupport, Option<bool>)> {
    Ok(match method {
        Method::Recursive => (fmp::build_recursive_budget(m, p, budget)?, None),
        Method::Zigzag => (fmp::build_zigzag_budget(m, p, budget)?, None),
        Method::Both => {
            let r = fmp::build_recursive_budget(m, p, budget)?;
            let z = fmp::build_zigzag_budget(m, p, budget)?;
            let agree = r == z;
            (r, Some(agree))
        }
    })
}

fn fmp_cmd(c: &FmpCmd, g: &Global) -> Result<Report> {
    match *c {
        FmpCmd::Build { p, m, method } => {
            let budget = g.budget.unwrap_or(fmp::SUPPORT_BUDGET);
            fib_budget(m, budget)?;
            let cached = match &g.cache_dir {
                Some(dir) if !matches!(method, Method::Both) => read_cache(&cache_path(dir, p, m), p, m)?,
                _ => None,
            };
            let (s, agree) = match cached {
                Some(s) => (s, None),
                None => {
                    let built = build(p, m, method, budget)?;
                    if let Some(dir) = &g.cache_dir {
                        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
                        let path = cache_path(dir, p, m);
                        fs::write(&path, serde_json::to_string(&built.0)?)
                            .with_context(|| format!("writing {}", path.display()))?;
                    }
                    built
                }
            };
            let head = json!({
                "p": p,
                "m": m,
                "terms": s.len(),
                "degree": s.degree().map(|d| d.to_string()),
            });
            let mut value = merged(head, &s)?;
            if let Some(a) = agree {
                value["agree"] = json!(a);
            }
            Ok(Report { value, ok: agree.unwrap_or(true) })
        }
        FmpCmd::Eval { p, m, z, ref elem } => match (z, elem) {
            (Some(z), None) => {
                let r = residue(z, p)?;
                if !fpt_core::arith::is_prime(p) {
                    return Err(Error::CompositeModulusBase(p).into());
                }
                Ok(Report::ok(json!({"p": p, "m": m, "z": r, "value": fmp::eval_fp_residue(m, p, r)})))
            }
            (None, Some(coeffs)) if !coeffs.is_empty() => {
                let field = make_field(p, coeffs.len())?;
                let x = field.elem(coeffs)?;
                let v = dickson::eval_fmp(&field, m, &x)?;
                Ok(Report::ok(json!({"p": p, "m": m, "field": field, "z": x, "value": v})))
            }
            _ => Err(usage("give exactly one of --z or --elem")),
        },
        FmpCmd::Gcd { p, m, n } => {
            let budget = g.budget.unwrap_or(fmp::DENSE_DEGREE_BUDGET);
            let holds = fmp::gcd_check_budget(m, n, p, budget)?;
            let d = fpt_core::arith::gcd(m, n);
            Ok(Report { value: json!({"p": p, "m": m, "n": n, "gcd_index": d, "holds": holds}), ok: holds })
        }
        FmpCmd::Count { p, m } => {
            fib_budget(m, g.budget.unwrap_or(COUNT_BUDGET))?;
            let sc = fmp::support_count_streaming(m, p)?;
            let expected = zigzag::fib(m as i64);
            let ok = sc.strictly_increasing && BigInt::from(sc.count) == expected;
            let value = merged(to_json(&sc)?, json!({"fib_m": expected.to_string()}))?;
            Ok(Report { value, ok })
        }
    }
}

fn planes_cmd(c: &PlanesCmd, g: &Global) -> Result<Report> {
    let budget = enumeration_budget(g)?;
    match *c {
        PlanesCmd::Count { p, m, formula: true } => {
            if !fpt_core::arith::is_prime(p) {
                return Err(Error::CompositeModulusBase(p).into());
            }
            if m < 2 {
                return Err(Error::DegreeTooSmall(m).into());
            }
            let value = json!({
                "p": p,
                "m": m,
                "planes": planes::plane_count(p, m).to_string(),
                "orbits": planes::orbit_formula(p, m).to_string(),
            });
            Ok(Report::ok(value))
        }
        PlanesCmd::Count { p, m, formula: false } => {
            let r = planes::orbit_count(p, m, budget)?;
            let ok = r.orbits == r.formula;
            Ok(Report { value: to_json(&r)?, ok })
        }
        PlanesCmd::Zvalues { p, m, slow } => {
            let field = make_field(p, m)?;
            let zv = if slow { planes::z_values_slow(&field, budget)? } else { planes::z_values(&field, budget)? };
            let expected = fmp::degree_formula(m as u64, p)?;
            let ok = BigUint::from(zv.z_circ.len()) == expected;
            let head = json!({"p": p, "m": m, "size": zv.z.len(), "size_nonzero": zv.z_circ.len()});
            Ok(Report { value: merged(head, &zv)?, ok })
        }
        PlanesCmd::Pencil { p, m, z } => {
            let field = make_field(p, m)?;
            let pen = planes::pencil(residue(z, p)?, &field, budget)?;
            Ok(Report::ok(merged(json!({"p": p, "m": m}), &pen)?))
        }
        PlanesCmd::Oracle { p, m } => {
            let field = make_field(p, m)?;
            let o = planes::oracle_fmp(&field, budget)?;
            let built = fmp::build_recursive(m as u64, p)?.to_dense(fmp::DENSE_DEGREE_BUDGET)?;
            let matches = o == built;
            let value = json!({"p": p, "m": m, "degree": o.degree(), "coeffs": o, "matches_recursive": matches});
            Ok(Report { value, ok: matches })
        }
    }
}

fn orientation(o: OrientationArg) -> Orientation {
    match o {
        OrientationArg::DownUp => Orientation::DownUp,
        OrientationArg::UpDown => Orientation::UpDown,
    }
}

fn parity(p: ParityArg) -> Parity {
    match p {
        ParityArg::Odd => Parity::Odd,
        ParityArg::Even => Parity::Even,
    }
}

fn zigzag_cmd(c: &ZigzagCmd, g: &Global) -> Result<Report> {
    match c {
        ZigzagCmd::Rep { n, orientation: o, parity: par, base } => {
            let n = parse_int(n)?;
            let (seq, used_parity): (ZigzagSeq, bool) = match (o, base) {
                (OrientationArg::DownUp, BaseArg::Fib) => (zigzag::to_downup(&n, parity(*par))?, true),
                (OrientationArg::DownUp, BaseArg::Sfib) => (zigzag::to_downup_sfib(&n)?, false),
                (OrientationArg::UpDown, BaseArg::Fib) => (zigzag::to_updown(&n, parity(*par))?, true),
                (OrientationArg::UpDown, BaseArg::Sfib) => (zigzag::to_updown_sfib(&n, parity(*par))?, true),
            };
            let value_back = match base {
                BaseArg::Fib => zigzag::value_fib(&seq),
                BaseArg::Sfib => zigzag::value_sfib(&seq),
            };
            let value = json!({
                "n": n.to_string(),
                "orientation": orientation(*o),
                "base": match base { BaseArg::Fib => "fib", BaseArg::Sfib => "sfib" },
                "parity": used_parity.then_some(match par { ParityArg::Odd => "odd", ParityArg::Even => "even" }),
                "length": seq.len(),
                "sequence": seq,
            });
            Ok(Report { value, ok: value_back == n })
        }
        ZigzagCmd::Zeck { n } => {
            let n = parse_int(n)?;
            let indices = if n > BigInt::from(0) { Some(zigzag::zeckendorf(&n)?) } else { None };
            let value = json!({
                "n": n.to_string(),
                "indices": indices,
                "signed_indices": zigzag::signed_zeckendorf(&n),
            });
            Ok(Report::ok(value))
        }
        ZigzagCmd::Enum { n, orientation: o } => {
            let o = orientation(*o);
            let seqs = zigzag::enum_zigzag(*n, o, enumeration_budget(g)?)?;
            let rows: Vec<Value> = seqs
                .iter()
                .map(|s| {
                    json!({
                        "sequence": s,
                        "value_fib": zigzag::value_fib(s).to_string(),
                        "value_sfib": zigzag::value_sfib(s).to_string(),
                    })
                })
                .collect();
            let value = json!({"n": n, "orientation": o, "count": seqs.len().to_string(), "sequences": rows});
            Ok(Report::ok(value))
        }
    }
}

fn alpha_cmd(c: &AlphaCmd) -> Result<Report> {
    match *c {
        AlphaCmd::Table { p } => Ok(Report::ok(to_json(appearance::alpha_table(p)?)?)),
        AlphaCmd::Zp { p, z } => Ok(Report::ok(to_json(appearance::alpha_zp(residue(z, p)?, p)?)?)),
        AlphaCmd::Classical { n } => Ok(Report::ok(json!({"n": n, "alpha": appearance::alpha_classical(n)?}))),
        AlphaCmd::Density { limit } => {
            let d = appearance::shanks_taylor_density(limit)?;
            Ok(Report::ok(merged(json!({"limit": d.limit, "count": d.count_pm1}), &d)?))
        }
        AlphaCmd::Carmichael { m, limit } => {
            if limit > 10_000_000 {
                return Err(Error::BudgetExceeded {
                    what: "prime limit",
                    needed: limit.to_string(),
                    budget: 10_000_000,
                }
                .into());
            }
            let found = appearance::carmichael_search(m, limit);
            let divisors = if (1..=93).contains(&m) { Some(appearance::primitive_prime_divisors(m)?) } else { None };
            Ok(Report::ok(json!({"m": m, "limit": limit, "prime": found, "primitive_prime_divisors": divisors})))
        }
        AlphaCmd::Salle { limit } => {
            let r = appearance::salle_bound_scan(limit)?;
            let ok = r.bound_holds;
            Ok(Report { value: to_json(r)?, ok })
        }
    }
}

fn trinomial_cmd(c: &TrinomialCmd, g: &Global) -> Result<Report> {
    match *c {
        TrinomialCmd::Predict { p, a, b } => {
            Ok(Report::ok(to_json(trinomials::predict_degrees(residue(a, p)?, residue(b, p)?, p)?)?))
        }
        TrinomialCmd::Verify { p, a, b } => {
            let v = trinomials::verify_degrees(residue(a, p)?, residue(b, p)?, p)?;
            let ok = v.matched;
            Ok(Report { value: to_json(v)?, ok })
        }
        TrinomialCmd::Generate { p, m } => Ok(Report::ok(to_json(trinomials::generate_irreducible(p, m, g.seed)?)?)),
        TrinomialCmd::Frob2 { p, z } => {
            let r = trinomials::frob2_check(residue(z, p)?, p, enumeration_budget(g)?)?;
            let ok = r.holds;
            Ok(Report { value: to_json(r)?, ok })
        }
    }
}

fn mv_cmd(c: &MvCmd) -> Result<Report> {
    match c {
        MvCmd::Poly { kind, k } => {
            let kind = match kind {
                KindArg::Small => MvKind::Small,
                KindArg::Big => MvKind::Big,
            };
            if *k > 10_000 {
                return Err(Error::BudgetExceeded { what: "k", needed: k.to_string(), budget: 10_000 }.into());
            }
            let poly = fpt_core::morganvoyce::mv_poly(kind, *k);
            Ok(Report::ok(json!({"kind": kind, "k": k, "m": kind.index(*k), "coeffs": poly})))
        }
        MvCmd::Apparition { p, z, lift } => {
            let r = residue(*z, *p)?;
            let lift = match lift {
                Some(s) => parse_int(s)?,
                None => BigInt::from(*z),
            };
            let alpha = fpt_core::morganvoyce::mv_apparition(r, *p, &lift)?;
            Ok(Report::ok(json!({"p": p, "z": r, "lift": lift.to_string(), "alpha": alpha})))
        }
    }
}

fn verify_cmd(c: &VerifyCmd, g: &Global) -> Result<Report> {
    match *c {
        VerifyCmd::Recursion { p, m, index } => {
            let budget = enumeration_budget(g)?;
            let field = make_field(p, m)?;
            let indices: Vec<usize> = match index {
                Some(i) => vec![i],
                None if m >= 3 => (3..=m).collect(),
                None => return Err(usage("the recursion starts at index 3; use --m >= 3 or --index")),
            };
            let reports = indices
                .iter()
                .map(|&i| dickson::verify_bracket_recursion(i, &field, budget))
                .collect::<fpt_core::Result<Vec<_>>>()?;
            let passed = reports.iter().all(|r| r.passed());
            let checked: u64 = reports.iter().map(|r| r.points_checked).sum();
            let value = json!({"p": p, "m": m, "passed": passed, "points_checked": checked, "reports": reports});
            Ok(Report { value, ok: passed })
        }
    }
}
