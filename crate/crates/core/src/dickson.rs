//! Dickson brackets [i,j] = x^(p^i) y^(p^j) - x^(p^j) y^(p^i), the invariants
//! I_0, I_1 and ν, and the bracket expressions F_(m,p).

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fmp::{build_zigzag, theta};
use crate::gf::{FieldDesc, FieldTable, FiniteField};

fn check_pair<F: FiniteField>(f: &F, x: &F::Elem, y: &F::Elem) -> Result<()> {
    if f.contains(x) && f.contains(y) {
        Ok(())
    } else {
        Err(Error::FieldMismatch)
    }
}

/// Frobenius images a, a^p, ..., a^(p^n).
fn frob_chain<F: FiniteField>(f: &F, a: &F::Elem, n: usize) -> Vec<F::Elem> {
    let p = f.characteristic();
    let mut out = Vec::with_capacity(n + 1);
    out.push(a.clone());
    for k in 0..n {
        out.push(f.pow_u64(&out[k], p));
    }
    out
}

/// Brackets at a fixed point, with the Frobenius images cached.
struct Point<'a, F: FiniteField> {
    f: &'a F,
    xs: Vec<F::Elem>,
    ys: Vec<F::Elem>,
}

impl<'a, F: FiniteField> Point<'a, F> {
    fn new(f: &'a F, x: &F::Elem, y: &F::Elem, n: usize) -> Self {
        Point { f, xs: frob_chain(f, x, n), ys: frob_chain(f, y, n) }
    }

    fn b(&self, i: usize, j: usize) -> F::Elem {
        let f = self.f;
        f.sub(&f.mul(&self.xs[i], &self.ys[j]), &f.mul(&self.xs[j], &self.ys[i]))
    }
}

pub fn bracket<F: FiniteField>(f: &F, i: usize, j: usize, x: &F::Elem, y: &F::Elem) -> Result<F::Elem> {
    check_pair(f, x, y)?;
    let (xi, xj) = (f.frobenius(x, i), f.frobenius(x, j));
    let (yi, yj) = (f.frobenius(y, i), f.frobenius(y, j));
    Ok(f.sub(&f.mul(&xi, &yj), &f.mul(&xj, &yi)))
}

fn nonzero_01<F: FiniteField>(pt: &Point<'_, F>) -> Result<F::Elem> {
    let b01 = pt.b(0, 1);
    if pt.f.is_zero(&b01) {
        Err(Error::DependentPair)
    } else {
        Ok(b01)
    }
}

fn div<F: FiniteField>(f: &F, a: &F::Elem, b: &F::Elem) -> F::Elem {
    f.mul(a, &f.inv(b).expect("non-zero divisor"))
}

/// I_0 = [1,2]/[0,1].
pub fn invariant_i0<F: FiniteField>(f: &F, x: &F::Elem, y: &F::Elem) -> Result<F::Elem> {
    check_pair(f, x, y)?;
    let pt = Point::new(f, x, y, 2);
    let b01 = nonzero_01(&pt)?;
    Ok(div(f, &pt.b(1, 2), &b01))
}

/// I_1 = [0,2]/[0,1].
pub fn invariant_i1<F: FiniteField>(f: &F, x: &F::Elem, y: &F::Elem) -> Result<F::Elem> {
    check_pair(f, x, y)?;
    let pt = Point::new(f, x, y, 2);
    let b01 = nonzero_01(&pt)?;
    Ok(div(f, &pt.b(0, 2), &b01))
}

/// I_0(x,1) = (x^p - x)^(p-1).
pub fn i0_restricted<F: FiniteField>(f: &F, x: &F::Elem) -> Result<F::Elem> {
    let p = f.characteristic();
    let d = f.sub(&f.pow_u64(x, p), x);
    if f.is_zero(&d) {
        return Err(Error::DependentPair);
    }
    Ok(f.pow_u64(&d, p - 1))
}

fn nu_at<F: FiniteField>(pt: &Point<'_, F>) -> Result<F::Elem> {
    let f = pt.f;
    let p = f.characteristic();
    let b01 = nonzero_01(pt)?;
    let i0 = div(f, &pt.b(1, 2), &b01);
    let i1 = div(f, &pt.b(0, 2), &b01);
    let num = f.pow_u64(&i1, p + 1);
    let den = f.pow_u64(&i0, p);
    Ok(f.neg(&div(f, &num, &den)))
}

/// ν = -I_1^(p+1) / I_0^p. Zero exactly on the F*-orbit of F_(p^2).
pub fn nu<F: FiniteField>(f: &F, x: &F::Elem, y: &F::Elem) -> Result<F::Elem> {
    check_pair(f, x, y)?;
    nu_at(&Point::new(f, x, y, 2))
}

/// ν as -[0,2][1,3] / ([0,1][2,3]).
pub fn nu_bracket_form<F: FiniteField>(f: &F, x: &F::Elem, y: &F::Elem) -> Result<F::Elem> {
    check_pair(f, x, y)?;
    let pt = Point::new(f, x, y, 3);
    let b01 = nonzero_01(&pt)?;
    let num = f.mul(&pt.b(0, 2), &pt.b(1, 3));
    let den = f.mul(&b01, &pt.b(2, 3));
    Ok(f.neg(&div(f, &num, &den)))
}

/// a^(-e) for non-zero a, with the exponent reduced mod q - 1.
fn pow_neg<F: FiniteField>(f: &F, a: &F::Elem, e: &BigUint) -> F::Elem {
    f.pow(&f.inv(a).expect("non-zero base"), e)
}

fn sign<F: FiniteField>(f: &F, a: F::Elem, negative: bool) -> F::Elem {
    if negative {
        f.neg(&a)
    } else {
        a
    }
}

fn bracket_f_at<F: FiniteField>(pt: &Point<'_, F>, m: usize) -> Result<F::Elem> {
    let f = pt.f;
    let p = f.characteristic();
    let b01 = nonzero_01(pt)?;
    let k = m / 2;
    if m % 2 == 1 {
        // (-1)^k [0,2k+1] [0,1]^(-θ(2k))
        let t = pow_neg(f, &b01, &theta(2 * k as i64, p)?);
        Ok(sign(f, f.mul(&pt.b(0, m), &t), k % 2 == 1))
    } else {
        // (-1)^(k+1) [1,2]/([0,1][0,2]) [0,2k] [0,1]^(-θ(2k-1))
        let b02 = pt.b(0, 2);
        if f.is_zero(&b02) {
            return Err(Error::Fp2OrbitDenominator);
        }
        let front = div(f, &pt.b(1, 2), &f.mul(&b01, &b02));
        let t = pow_neg(f, &b01, &theta(2 * k as i64 - 1, p)?);
        Ok(sign(f, f.mul(&f.mul(&front, &pt.b(0, m)), &t), k.is_multiple_of(2)))
    }
}

/// The bracket expression F_(m,p)(x,y), m >= 1.
pub fn bracket_f<F: FiniteField>(f: &F, m: usize, x: &F::Elem, y: &F::Elem) -> Result<F::Elem> {
    check_pair(f, x, y)?;
    if m == 0 {
        return Err(Error::OutOfRange { what: "m", detail: "bracket expression needs m >= 1".into() });
    }
    bracket_f_at(&Point::new(f, x, y, m), m)
}

/// f_(m,p)(z) from the explicit support, independent of the recursion.
pub fn eval_fmp<F: FiniteField>(f: &F, m: u64, z: &F::Elem) -> Result<F::Elem> {
    match m {
        0 => return Ok(f.zero()),
        1 => return Ok(f.one()),
        _ => {}
    }
    let sup = build_zigzag(m, f.characteristic())?;
    let mut acc = f.zero();
    for e in &sup.support {
        acc = f.add(&acc, &f.pow(z, e));
    }
    Ok(acc)
}

/// ν^θ(2k-1) as [1,2][2k,2k+2][2k+1,2k+2] / ([0,1][0,2][2k,2k+1]) [0,1]^(-2θ(2k+1)).
fn nu_power_odd<F: FiniteField>(pt: &Point<'_, F>, k: usize) -> Result<F::Elem> {
    let f = pt.f;
    let p = f.characteristic();
    let b01 = pt.b(0, 1);
    let num = f.mul(&f.mul(&pt.b(1, 2), &pt.b(2 * k, 2 * k + 2)), &pt.b(2 * k + 1, 2 * k + 2));
    let den = f.mul(&f.mul(&b01, &pt.b(0, 2)), &pt.b(2 * k, 2 * k + 1));
    let e = theta(2 * k as i64 + 1, p)? * 2u32;
    Ok(f.mul(&div(f, &num, &den), &pow_neg(f, &b01, &e)))
}

/// ν^θ(2k) as -[0,1][0,2][2k+1,2k+3] / ([1,2][2k+1,2k+2][2k+2,2k+3]) [0,1]^(2θ(2k+1)).
fn nu_power_even<F: FiniteField>(pt: &Point<'_, F>, k: usize) -> Result<F::Elem> {
    let f = pt.f;
    let p = f.characteristic();
    let b01 = pt.b(0, 1);
    let num = f.mul(&f.mul(&b01, &pt.b(0, 2)), &pt.b(2 * k + 1, 2 * k + 3));
    let den = f.mul(&f.mul(&pt.b(1, 2), &pt.b(2 * k + 1, 2 * k + 2)), &pt.b(2 * k + 2, 2 * k + 3));
    let e = theta(2 * k as i64 + 1, p)? * 2u32;
    Ok(f.neg(&f.mul(&div(f, &num, &den), &f.pow(&b01, &e))))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecursionFailure {
    pub x: String,
    pub check: &'static str,
}

/// Outcome of the exhaustive recursion check at one index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecursionReport {
    pub m: usize,
    pub p: u64,
    pub field_degree: usize,
    pub points_checked: u64,
    pub points_skipped: u64,
    pub failure_count: u64,
    /// The first few failures.
    pub failures: Vec<RecursionFailure>,
}

impl RecursionReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

const FAILURES_KEPT: usize = 16;

/// Checks F_m = ν^θ(m-3) F_(m-1) + F_(m-2), F_m = f_m(ν) and the ν^θ bracket
/// identity used for index m, at every (x, 1) with x outside F_p. Points in the
/// F_(p^2) orbit, where even-index expressions have a zero denominator, are skipped.
pub fn verify_bracket_recursion(m: usize, field: &FieldDesc, budget: u64) -> Result<RecursionReport> {
    if m < 3 {
        return Err(Error::OutOfRange { what: "m", detail: format!("recursion starts at m = 3, got {m}") });
    }
    let table = FieldTable::new(field, budget)?;
    let f = &table;
    let p = f.characteristic();
    let step = theta(m as i64 - 3, p)?;
    let mut report = RecursionReport {
        m,
        p,
        field_degree: field.m(),
        points_checked: 0,
        points_skipped: 0,
        failure_count: 0,
        failures: Vec::new(),
    };
    let one = f.one();
    for x in table.elements() {
        if f.prime_value(&x).is_some() {
            continue;
        }
        let pt = Point::new(f, &x, &one, m + 1);
        if f.is_zero(&pt.b(0, 2)) {
            report.points_skipped += 1;
            continue;
        }
        report.points_checked += 1;
        let nu = nu_at(&pt)?;
        let fm = bracket_f_at(&pt, m)?;
        let f1 = bracket_f_at(&pt, m - 1)?;
        let f2 = bracket_f_at(&pt, m - 2)?;
        let mut failed = Vec::new();
        if fm != f.add(&f.mul(&f.pow(&nu, &step), &f1), &f2) {
            failed.push("recursion");
        }
        if fm != eval_fmp(f, m as u64, &nu)? {
            failed.push("pointwise");
        }
        let nu_power = if m.is_multiple_of(2) {
            let k = (m - 2) / 2;
            (k >= 1).then(|| nu_power_odd(&pt, k).map(|v| (v, theta(2 * k as i64 - 1, p))))
        } else {
            let k = (m - 3) / 2;
            (k >= 1).then(|| nu_power_even(&pt, k).map(|v| (v, theta(2 * k as i64, p))))
        };
        if let Some(res) = nu_power {
            let (v, e) = res?;
            if v != f.pow(&nu, &e?) {
                failed.push("nu-theta identity");
            }
        }
        for check in failed {
            report.failure_count += 1;
            if report.failures.len() < FAILURES_KEPT {
                report.failures.push(RecursionFailure { x: table.to_elem(x).to_string(), check });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{make_field, DEFAULT_BUDGET};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn table(p: u64, m: usize) -> FieldTable {
        FieldTable::new(&make_field(p, m).unwrap(), DEFAULT_BUDGET).unwrap()
    }

    #[test]
    fn bracket_identities_at_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (p, n) in [(3u64, 5usize), (2, 7), (5, 4), (7, 3)] {
            let f = table(p, n);
            for _ in 0..40 {
                let x = f.random(&mut rng);
                let y = f.random(&mut rng);
                let b = |i, j| bracket(&f, i, j, &x, &y).unwrap();
                let mut idx: [usize; 4] = std::array::from_fn(|_| rng.gen_range(0..8));
                idx.sort_unstable();
                let [i, j, k, l] = idx;
                assert_eq!(b(i, j), f.neg(&b(j, i)));
                assert_eq!(f.pow_u64(&b(i, j), p), b(i + 1, j + 1));
                // the telescoping sum holds on the line y = 1
                let one = f.one();
                let b1 = |i, j| bracket(&f, i, j, &x, &one).unwrap();
                assert_eq!(b1(i, l), f.add(&f.add(&b1(i, j), &b1(j, k)), &b1(k, l)));
                let plucker =
                    f.add(&f.sub(&f.mul(&b(i, j), &b(k, l)), &f.mul(&b(i, k), &b(j, l))), &f.mul(&b(i, l), &b(j, k)));
                assert!(f.is_zero(&plucker));
                // F_p-bilinearity in the first slot
                let c = f.from_u64(rng.gen_range(0..p));
                let x2 = f.random(&mut rng);
                let lhs = bracket(&f, i, j, &f.add(&x, &f.mul(&c, &x2)), &y).unwrap();
                let rhs = f.add(&b(i, j), &f.mul(&c, &bracket(&f, i, j, &x2, &y).unwrap()));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn telescoping_fails_off_the_line_y_equals_1() {
        let f = table(3, 5);
        let (x, y) = (f.element(7), f.element(100));
        let b = |i, j| bracket(&f, i, j, &x, &y).unwrap();
        assert_ne!(b(0, 3), f.add(&f.add(&b(0, 1), &b(1, 2)), &b(2, 3)));
    }

    #[test]
    fn bracket_divisibility() {
        let f = table(2, 12);
        let one = f.one();
        for x in f.elements() {
            for j in 1..=4 {
                if f.is_zero(&bracket(&f, 0, j, &x, &one).unwrap()) {
                    for k in 1..=3 {
                        assert!(f.is_zero(&bracket(&f, 0, k * j, &x, &one).unwrap()));
                    }
                }
            }
        }
    }

    #[test]
    fn invariants_on_f9() {
        let f = make_field(3, 2).unwrap();
        let one = f.one();
        let mut seen = 0;
        for x in crate::gf::enumerate_elements(&f, 100).unwrap() {
            if f.prime_value(&x).is_some() {
                assert_eq!(invariant_i0(&f, &x, &one), Err(Error::DependentPair));
                continue;
            }
            seen += 1;
            let i0 = invariant_i0(&f, &x, &one).unwrap();
            let i1 = invariant_i1(&f, &x, &one).unwrap();
            assert!(!i0.is_zero());
            assert_eq!(i0, i0_restricted(&f, &x).unwrap());
            assert_eq!(&i1 - &i0, f.one());
            assert!(nu(&f, &x, &one).unwrap().is_zero());
        }
        assert_eq!(seen, 6);
    }

    #[test]
    fn invariants_scale_and_commute_with_frobenius() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (p, n) in [(3u64, 5usize), (5, 3), (2, 9)] {
            let f = table(p, n);
            let e = (p + 1) * (p - 1);
            for _ in 0..60 {
                let (x, y, l) = (f.random(&mut rng), f.random(&mut rng), f.random(&mut rng));
                let Ok(i0) = invariant_i0(&f, &x, &y) else { continue };
                if f.is_zero(&l) {
                    continue;
                }
                let (lx, ly) = (f.mul(&l, &x), f.mul(&l, &y));
                let scaled = invariant_i0(&f, &lx, &ly).unwrap();
                assert_eq!(scaled, f.mul(&f.pow_u64(&l, e), &i0));
                assert_eq!(nu(&f, &lx, &ly).unwrap(), nu(&f, &x, &y).unwrap());
                let (xp, yp) = (f.pow_u64(&x, p), f.pow_u64(&y, p));
                assert_eq!(invariant_i0(&f, &xp, &yp).unwrap(), f.pow_u64(&i0, p));
                let i1 = invariant_i1(&f, &x, &y).unwrap();
                assert_eq!(invariant_i1(&f, &xp, &yp).unwrap(), f.pow_u64(&i1, p));
                assert_eq!(nu(&f, &x, &y).unwrap(), nu_bracket_form(&f, &x, &y).unwrap());
            }
        }
    }

    #[test]
    fn nu_on_small_subfields() {
        for p in [2u64, 3, 5] {
            let f = table(p, 6);
            let one = f.one();
            let q2 = p * p;
            let q3 = p * p * p;
            for x in f.elements() {
                if f.prime_value(&x).is_some() {
                    continue;
                }
                let v = nu(&f, &x, &one).unwrap();
                if f.pow_u64(&x, q2) == x {
                    assert!(f.is_zero(&v));
                } else if f.pow_u64(&x, q3) == x {
                    assert_eq!(v, f.from_i64(-1));
                }
            }
        }
    }

    #[test]
    fn nu_is_a_plane_invariant_on_f81() {
        let f = table(3, 4);
        let mut gl2 = Vec::new();
        for a in 0..3u64 {
            for b in 0..3 {
                for c in 0..3 {
                    for d in 0..3 {
                        if (a * d + 3 * 3 - b * c % 3) % 3 != 0 {
                            gl2.push([a, b, c, d].map(|v| f.from_u64(v)));
                        }
                    }
                }
            }
        }
        assert_eq!(gl2.len(), 48);
        for x in f.elements() {
            for y in f.elements() {
                let Ok(v) = nu(&f, &x, &y) else { continue };
                for [a, b, c, d] in &gl2 {
                    let u = f.add(&f.mul(a, &x), &f.mul(b, &y));
                    let w = f.add(&f.mul(c, &x), &f.mul(d, &y));
                    assert_eq!(nu(&f, &u, &w).unwrap(), v);
                }
            }
        }
    }

    #[test]
    fn bracket_f_small_indices() {
        let f = make_field(3, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let (x, y) = (f.random(&mut rng), f.random(&mut rng));
            let Ok(v) = nu(&f, &x, &y) else { continue };
            assert_eq!(bracket_f(&f, 1, &x, &y).unwrap(), f.one());
            assert_eq!(bracket_f(&f, 2, &x, &y).unwrap(), f.one());
            assert_eq!(bracket_f(&f, 3, &x, &y).unwrap(), &v + &f.one());
        }
        let t = table(3, 5);
        let one = t.one();
        for x in t.elements().filter(|&x| x >= 3) {
            let v = nu(&t, &x, &one).unwrap();
            for m in 1..=5u64 {
                assert_eq!(bracket_f(&t, m as usize, &x, &one).unwrap(), eval_fmp(&t, m, &v).unwrap());
            }
        }
    }

    #[test]
    fn even_index_needs_nonzero_02() {
        let f = make_field(2, 4).unwrap();
        let one = f.one();
        let w = crate::gf::enumerate_elements(&f, 100)
            .unwrap()
            .find(|x| f.prime_value(x).is_none() && f.pow_u64(x, 4) == *x)
            .unwrap();
        assert_eq!(bracket_f(&f, 4, &w, &one), Err(Error::Fp2OrbitDenominator));
        assert!(bracket_f(&f, 3, &w, &one).is_ok());
    }

    #[test]
    fn mismatched_fields_are_rejected() {
        let f = make_field(3, 2).unwrap();
        let g = make_field(3, 3).unwrap();
        assert_eq!(bracket(&f, 0, 1, &f.gen_x(), &g.gen_x()), Err(Error::FieldMismatch));
        assert_eq!(nu(&f, &g.gen_x(), &f.one()), Err(Error::FieldMismatch));
    }

    #[test]
    fn bracket_recursion_small_fields() {
        let f27 = make_field(3, 3).unwrap();
        let r = verify_bracket_recursion(3, &f27, DEFAULT_BUDGET).unwrap();
        assert_eq!((r.points_checked, r.points_skipped, r.failure_count), (24, 0, 0));
        for (p, n) in [(3u64, 4usize), (3, 5), (2, 6), (5, 4)] {
            let field = make_field(p, n).unwrap();
            for m in 3..=n + 2 {
                let r = verify_bracket_recursion(m, &field, DEFAULT_BUDGET).unwrap();
                assert!(r.passed(), "{r:?}");
            }
        }
    }
}
