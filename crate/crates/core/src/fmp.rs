//! The 0/1 polynomials f_(m,p): the three-term recursion, the zigzag support
//! formula, evaluation on F_p and the strong-divisibility check.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::gf::{FieldElem, FiniteField, PrimeField};
use crate::upoly::DensePoly;
use crate::zigzag::{enum_zigzag, value_base, Orientation};

/// Largest dense degree materialised by default.
pub const DENSE_DEGREE_BUDGET: u64 = 100_000;

/// Largest support materialised as an explicit set by default.
pub const SUPPORT_BUDGET: u64 = 1 << 20;

/// θ(r,p) = p^r - p^(r-1) + ... + (-1)^r.
pub fn theta(r: i64, p: u64) -> Result<BigUint> {
    if r < 0 {
        return Err(Error::NegativeIndex);
    }
    let mut t = BigInt::one();
    for k in 1..=r {
        t = t * p + if k % 2 == 0 { 1 } else { -1 };
    }
    Ok(t.to_biguint().expect("theta is non-negative"))
}

/// Exponents of f_(m,p), ascending. Every coefficient is 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseSupport {
    pub p: u64,
    pub m: u64,
    pub support: Vec<BigUint>,
}

impl Serialize for SparseSupport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SparseSupport", 3)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("m", &self.m)?;
        let sup: Vec<String> = self.support.iter().map(|e| e.to_string()).collect();
        st.serialize_field("support", &sup)?;
        st.end()
    }
}

impl SparseSupport {
    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn degree(&self) -> Option<&BigUint> {
        self.support.last()
    }

    /// Reduction to F_p[X]; refuses degrees above `max_degree`.
    pub fn to_dense(&self, max_degree: u64) -> Result<DensePoly<PrimeField>> {
        to_dense_mod(&self.support, self.p, max_degree)
    }
}

fn to_dense_mod(support: &[BigUint], p: u64, max_degree: u64) -> Result<DensePoly<PrimeField>> {
    let fp = PrimeField::new(p)?;
    let Some(top) = support.last() else {
        return Ok(DensePoly::zero(fp));
    };
    let deg =
        top.to_u64().filter(|&d| d <= max_degree).ok_or_else(|| Error::budget("dense degree", top, max_degree))?;
    let mut c = vec![0u64; deg as usize + 1];
    for e in support {
        c[e.to_usize().unwrap()] = 1;
    }
    Ok(DensePoly::new(fp, c))
}

fn fib_u64(m: u64) -> Option<u64> {
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 0..m {
        let next = a.checked_add(b)?;
        a = b;
        b = next;
    }
    Some(a)
}

fn check_prime(p: u64) -> Result<()> {
    if arith::is_prime(p) {
        Ok(())
    } else {
        Err(Error::CompositeModulusBase(p))
    }
}

fn check_support_budget(m: u64, budget: u64) -> Result<()> {
    match fib_u64(m) {
        Some(n) if n <= budget => Ok(()),
        _ => Err(Error::budget("support size Fib(m)", crate::zigzag::fib(m as i64), budget)),
    }
}

/// supp(m) = supp(m-2) ⊔ (θ(m-3) + supp(m-1)), with disjointness checked.
pub fn build_recursive(m: u64, p: u64) -> Result<SparseSupport> {
    build_recursive_budget(m, p, SUPPORT_BUDGET)
}

pub fn build_recursive_budget(m: u64, p: u64, budget: u64) -> Result<SparseSupport> {
    check_prime(p)?;
    check_support_budget(m, budget)?;
    let mut s_prev2: Vec<BigUint> = Vec::new(); // f_0 = 0
    let mut s_prev1: Vec<BigUint> = vec![BigUint::zero()]; // f_1 = 1
    if m == 0 {
        return Ok(SparseSupport { p, m, support: s_prev2 });
    }
    for k in 2..=m {
        let next = if k == 2 {
            vec![BigUint::zero()]
        } else {
            let shift = theta(k as i64 - 3, p)?;
            let shifted: Vec<BigUint> = s_prev1.iter().map(|e| e + &shift).collect();
            merge_disjoint(&s_prev2, &shifted)?
        };
        s_prev2 = std::mem::replace(&mut s_prev1, next);
    }
    Ok(SparseSupport { p, m, support: s_prev1 })
}

fn merge_disjoint(a: &[BigUint], b: &[BigUint]) -> Result<Vec<BigUint>> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j].clone());
                j += 1;
            }
            Ordering::Equal => return Err(Error::SupportCollision(a[i].to_string())),
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Ok(out)
}

/// supp(m) = {(-1)^(m-1) ||e||_(-p) : e in DU(m-2)}.
pub fn build_zigzag(m: u64, p: u64) -> Result<SparseSupport> {
    build_zigzag_budget(m, p, SUPPORT_BUDGET)
}

pub fn build_zigzag_budget(m: u64, p: u64, budget: u64) -> Result<SparseSupport> {
    check_prime(p)?;
    if m < 2 {
        return Err(Error::OutOfRange { what: "m", detail: format!("zigzag construction needs m >= 2, got {m}") });
    }
    check_support_budget(m, budget)?;
    let base = -(p as i64);
    let mut support = Vec::new();
    for e in enum_zigzag((m - 2) as usize, Orientation::DownUp, budget)? {
        let mut v = value_base(&e, base);
        if m.is_multiple_of(2) {
            v = -v;
        }
        let u = v.to_biguint().ok_or_else(|| Error::NegativeExponent(v.to_string()))?;
        support.push(u);
    }
    support.sort();
    if let Some(w) = support.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::SupportCollision(w[0].to_string()));
    }
    Ok(SparseSupport { p, m, support })
}

/// Fixed-width unsigned integer for the streaming count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
struct U256([u64; 4]); // most significant limb first, so derived Ord is numeric

impl U256 {
    fn from_big(x: &BigUint) -> Option<Self> {
        let digits = x.to_u64_digits();
        if digits.len() > 4 {
            return None;
        }
        let mut limbs = [0u64; 4];
        for (i, d) in digits.iter().enumerate() {
            limbs[3 - i] = *d;
        }
        Some(U256(limbs))
    }

    fn to_big(self) -> BigUint {
        let mut v = self.0;
        v.reverse();
        BigUint::from_slice(&v.iter().flat_map(|d| [*d as u32, (*d >> 32) as u32]).collect::<Vec<_>>())
    }

    fn checked_add(self, o: Self) -> Option<Self> {
        let mut r = [0u64; 4];
        let mut carry = 0u64;
        for i in (0..4).rev() {
            let (s1, c1) = self.0[i].overflowing_add(o.0[i]);
            let (s2, c2) = s1.overflowing_add(carry);
            r[i] = s2;
            carry = (c1 || c2) as u64;
        }
        (carry == 0).then_some(U256(r))
    }
}

/// Result of streaming the support of f_(m,p) in increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportCount {
    pub p: u64,
    pub m: u64,
    pub count: u64,
    /// Largest exponent, as a decimal string.
    pub degree: String,
    /// Every exponent exceeded its predecessor, so the union is disjoint.
    pub strictly_increasing: bool,
}

/// Counts supp(m,p) without storing it: the exponents of supp(m-2) all lie
/// below θ(m-3), so emitting supp(m-2) then θ(m-3) + supp(m-1) is ascending.
pub fn support_count_streaming(m: u64, p: u64) -> Result<SupportCount> {
    check_prime(p)?;
    let thetas: Vec<U256> = (0..m.max(3) as i64 - 2)
        .map(|r| {
            U256::from_big(&theta(r, p)?)
                .ok_or(Error::OutOfRange { what: "exponent", detail: "exceeds 256 bits".into() })
        })
        .collect::<Result<_>>()?;
    struct State {
        count: u64,
        last: Option<U256>,
        increasing: bool,
    }
    fn walk(m: u64, offset: U256, thetas: &[U256], st: &mut State) -> Result<()> {
        match m {
            0 => Ok(()),
            1 | 2 => {
                if st.last.is_some_and(|l| l >= offset) {
                    st.increasing = false;
                }
                st.last = Some(offset);
                st.count += 1;
                Ok(())
            }
            _ => {
                walk(m - 2, offset, thetas, st)?;
                let shifted = offset
                    .checked_add(thetas[(m - 3) as usize])
                    .ok_or(Error::OutOfRange { what: "exponent", detail: "exceeds 256 bits".into() })?;
                walk(m - 1, shifted, thetas, st)
            }
        }
    }
    let mut st = State { count: 0, last: None, increasing: true };
    walk(m, U256::default(), &thetas, &mut st)?;
    Ok(SupportCount {
        p,
        m,
        count: st.count,
        degree: st.last.map(|d| d.to_big().to_string()).unwrap_or_default(),
        strictly_increasing: st.increasing,
    })
}

/// f_(n,p)(z) for every n in 0..=max_n at a residue z, by the recursion
/// f_n = z^θ(n-3) f_(n-1) + f_(n-2). On F_p, z^θ(r) is z for even r and
/// z^(p-1) for odd r, since θ(r,p) ≡ θ(r mod 2, p) mod p - 1.
pub fn eval_fp_sequence(max_n: u64, p: u64, z: u64) -> Vec<u64> {
    let z = z % p;
    let z_odd = if z == 0 { 0 } else { 1 };
    let mut out = vec![0u64, 1 % p];
    for n in 2..=max_n {
        let v = if n == 2 {
            1 % p
        } else {
            let factor = if (n - 3) % 2 == 0 { z } else { z_odd };
            (arith::mul_mod(factor, out[n as usize - 1], p) + out[n as usize - 2]) % p
        };
        out.push(v);
    }
    out.truncate(max_n as usize + 1);
    out
}

/// f_(m,p)(z) for a residue z.
pub fn eval_fp_residue(m: u64, p: u64, z: u64) -> u64 {
    let z = z % p;
    let z_odd = if z == 0 { 0 } else { 1 };
    let (mut a, mut b) = (0u64, 1 % p); // f_0, f_1
    for n in 2..=m {
        let next = if n == 2 {
            1 % p
        } else {
            let factor = if (n - 3) % 2 == 0 { z } else { z_odd };
            (arith::mul_mod(factor, b, p) + a) % p
        };
        a = b;
        b = next;
    }
    if m == 0 {
        a
    } else {
        b
    }
}

/// f_(m,p)(z) for z in the prime subfield of its field.
pub fn eval_fp(m: u64, p: u64, z: &FieldElem) -> Result<FieldElem> {
    let field = z.field();
    if field.p() != p {
        return Err(Error::FieldMismatch);
    }
    let v = field.prime_value(z).ok_or(Error::NotPrimeFieldElement)?;
    Ok(field.from_u64(eval_fp_residue(m, p, v)))
}

/// gcd(f_m, f_n) = f_gcd(m,n) over F_p, on dense reductions.
pub fn gcd_check(m: u64, n: u64, p: u64) -> Result<bool> {
    gcd_check_budget(m, n, p, DENSE_DEGREE_BUDGET)
}

pub fn gcd_check_budget(m: u64, n: u64, p: u64, max_degree: u64) -> Result<bool> {
    for k in [m, n] {
        let d = degree_formula(k.max(2), p)?;
        if d > BigUint::from(max_degree) {
            return Err(Error::budget("dense degree", d, max_degree));
        }
    }
    let fm = build_recursive(m, p)?.to_dense(max_degree)?;
    let fn_ = build_recursive(n, p)?.to_dense(max_degree)?;
    let g = build_recursive(m.gcd(&n), p)?.to_dense(max_degree)?;
    Ok(fm.gcd(&fn_) == g.monic())
}

/// (p^(m-1) - 1)/(p^2 - 1) for odd m, (p^(m-1) - p)/(p^2 - 1) for even m.
pub fn degree_formula(m: u64, p: u64) -> Result<BigUint> {
    if m < 2 {
        return Err(Error::OutOfRange { what: "m", detail: format!("degree formula needs m >= 2, got {m}") });
    }
    let pm = BigUint::from(p).pow((m - 1) as u32);
    let num = if m % 2 == 1 { pm - 1u32 } else { pm - p };
    Ok(num / (p * p - 1))
}

/// Base-(-b) digits of n, least significant first, each in [0, b).
pub fn neg_base_digits(n: &BigInt, b: u64) -> Vec<u64> {
    let base = -BigInt::from(b);
    let mut n = n.clone();
    let mut out = Vec::new();
    while !n.is_zero() {
        let (mut q, mut r) = n.div_rem(&base);
        if r.is_negative() {
            r += b;
            q += 1;
        }
        out.push(r.to_u64().unwrap());
        n = q;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;
    use crate::zigzag::fib;
    use proptest::prelude::*;

    fn sup(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn theta_values() {
        assert_eq!(theta(0, 7).unwrap(), BigUint::one());
        assert_eq!(theta(3, 3).unwrap(), BigUint::from(20u32));
        for k in 0..10 {
            assert_eq!(theta(2 * k, 1).unwrap(), BigUint::one());
            assert_eq!(theta(2 * k + 1, 1).unwrap(), BigUint::zero());
        }
        assert_eq!(theta(-1, 3).unwrap_err(), Error::NegativeIndex);
        // closed form (p^(r+1) + (-1)^r) / (p + 1)
        for p in [2u64, 3, 5, 11] {
            for r in 0..30i64 {
                let pb = BigInt::from(p);
                let closed = (pb.pow(r as u32 + 1) + if r % 2 == 0 { 1 } else { -1 }) / (p + 1);
                assert_eq!(BigInt::from(theta(r, p).unwrap()), closed);
            }
        }
    }

    #[test]
    fn small_supports() {
        for p in [2u64, 3, 5, 7] {
            assert_eq!(build_recursive(3, p).unwrap().support, sup(&[0, 1]));
            assert_eq!(build_zigzag(4, p).unwrap().support, sup(&[0, p - 1, p]));
            assert_eq!(build_zigzag(2, p).unwrap().support, sup(&[0]));
            assert!(build_recursive(0, p).unwrap().is_empty());
        }
        assert_eq!(build_recursive(5, 2).unwrap().support, sup(&[0, 1, 3, 4, 5]));
        assert_eq!(build_recursive(6, 3).unwrap().support, sup(&[0, 2, 3, 20, 21, 27, 29, 30]));
        let z7 = build_zigzag(7, 2).unwrap();
        assert_eq!(z7.len(), 13);
        assert_eq!(z7, build_recursive(7, 2).unwrap());
        assert_eq!(
            serde_json::to_string(&build_recursive(6, 3).unwrap()).unwrap(),
            r#"{"p":3,"m":6,"support":["0","2","3","20","21","27","29","30"]}"#
        );
    }

    /// The displayed f_5 and f_6 rows, substituted for several p.
    #[test]
    fn displayed_rows() {
        for p in [2u64, 3, 5, 7, 11] {
            let mut f5 = sup(&[p * p + 1, p * p, p * p - p + 1, 1, 0]);
            f5.sort();
            assert_eq!(build_recursive(5, p).unwrap().support, f5);
        }
    }

    #[test]
    fn constructions_agree() {
        for p in [2u64, 3, 5, 7] {
            for m in 2..=16 {
                let r = build_recursive(m, p).unwrap();
                assert_eq!(r, build_zigzag(m, p).unwrap(), "m={m} p={p}");
                assert_eq!(r.len() as u64, fib_u64(m).unwrap());
                assert_eq!(r.degree().unwrap(), &degree_formula(m, p).unwrap());
            }
        }
    }

    #[test]
    fn nesting() {
        for p in [2u64, 3, 5] {
            for m in 0..=20 {
                let a = build_recursive(m, p).unwrap().support;
                let b = build_recursive(m + 2, p).unwrap().support;
                let bs: std::collections::HashSet<_> = b.into_iter().collect();
                assert!(a.iter().all(|e| bs.contains(e)), "m={m} p={p}");
            }
        }
    }

    #[test]
    fn negative_base_digits_are_binary() {
        for p in [2u64, 3, 5, 7] {
            for m in 2..=16u64 {
                for e in build_recursive(m, p).unwrap().support {
                    let mut v = BigInt::from(e);
                    if m % 2 == 0 {
                        v = -v;
                    }
                    let d = neg_base_digits(&v, p);
                    assert!(d.iter().all(|&x| x <= 1), "p={p} m={m}");
                    assert!(d.len() as u64 <= m - 2);
                }
            }
        }
        assert_eq!(neg_base_digits(&BigInt::from(-2), 3), vec![1, 1]);
        assert_eq!(neg_base_digits(&BigInt::from(5), 2), vec![1, 0, 1]);
    }

    #[test]
    fn streaming_count_matches() {
        for p in [2u64, 3, 7] {
            for m in 0..=20 {
                let c = support_count_streaming(m, p).unwrap();
                let b = build_recursive(m, p).unwrap();
                assert_eq!(c.count as usize, b.len());
                assert!(c.strictly_increasing);
                if m >= 1 {
                    assert_eq!(c.degree, b.degree().unwrap().to_string());
                }
            }
        }
        assert!(build_recursive(40, 2).unwrap_err().is_budget());
    }

    #[test]
    fn evaluation() {
        let oracle = |m: u64, p: u64, z: u64| {
            let d = build_recursive(m, p).unwrap().to_dense(DENSE_DEGREE_BUDGET).unwrap();
            d.eval(&z)
        };
        for p in [2u64, 3, 5, 7] {
            let top = if p == 7 { 8 } else { 9 };
            for m in 0..=top {
                for z in 0..p {
                    assert_eq!(eval_fp_residue(m, p, z), oracle(m, p, z), "m={m} p={p} z={z}");
                }
                assert_eq!(eval_fp_sequence(9, p, 2 % p)[m as usize], eval_fp_residue(m, p, 2 % p));
            }
        }
        for p in [3u64, 5, 7, 11, 13] {
            assert_eq!(eval_fp_residue(3, p, p - 1), 0);
            assert_eq!(eval_fp_residue(p, p, p - 4 % p), 0);
            for m in 0..40 {
                let f = fib(m as i64).to_biguint().unwrap() % p;
                assert_eq!(BigUint::from(eval_fp_residue(m, p, 1)), f);
            }
        }
        let f9 = make_field(3, 2).unwrap();
        assert_eq!(eval_fp(3, 3, &f9.from_u64(2)).unwrap(), f9.zero());
        assert_eq!(eval_fp(3, 3, &f9.gen_x()).unwrap_err(), Error::NotPrimeFieldElement);
    }

    #[test]
    fn strong_division() {
        assert!(gcd_check(5, 5, 3).unwrap());
        assert!(gcd_check(6, 4, 2).unwrap());
        assert!(gcd_check(6, 9, 3).unwrap());
        let f3 = build_recursive(3, 3).unwrap().to_dense(100).unwrap();
        let f6 = build_recursive(6, 3).unwrap().to_dense(100).unwrap();
        let f9 = build_recursive(9, 3).unwrap().to_dense(1000).unwrap();
        assert_eq!(f6.gcd(&f9), f3);
        assert!(gcd_check(30, 2, 2).unwrap_err().is_budget());
    }

    #[test]
    fn degree_examples() {
        assert_eq!(degree_formula(3, 17).unwrap(), BigUint::one());
        assert_eq!(degree_formula(6, 3).unwrap(), BigUint::from(30u32));
        assert_eq!(degree_formula(5, 2).unwrap(), BigUint::from(5u32));
    }

    proptest! {
        #[test]
        fn neg_base_roundtrip(n in -1_000_000i64..1_000_000, b in 2u64..12) {
            let d = neg_base_digits(&BigInt::from(n), b);
            let back = d.iter().rev().fold(BigInt::zero(), |acc, &x| acc * -(b as i64) + x);
            prop_assert_eq!(back, BigInt::from(n));
        }
    }
}
