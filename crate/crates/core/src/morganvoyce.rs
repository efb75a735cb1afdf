//! Morgan-Voyce polynomials b_k = f_(2k+1,1) and B_k = f_(2k+2,1), Fibonacci
//! polynomials and the Lehmer-type sequences U_n(√Z, Q).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::upoly::IntPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MvKind {
    #[serde(rename = "b")]
    Small,
    #[serde(rename = "B")]
    Big,
}

impl MvKind {
    /// Index m with b_k = f_(m,1) or B_k = f_(m,1).
    pub fn index(self, k: u64) -> u64 {
        match self {
            MvKind::Small => 2 * k + 1,
            MvKind::Big => 2 * k + 2,
        }
    }
}

/// f_(0..=m, 1): f_0 = 0, f_1 = 1, f_m = X f_(m-1) + f_(m-2) for odd m and
/// f_(m-1) + f_(m-2) for even m.
pub fn f_m1_sequence(m: u64) -> Vec<IntPoly> {
    let mut out = vec![IntPoly::zero(), IntPoly::one()];
    for n in 2..=m {
        let prev = &out[n as usize - 1];
        let step = if n % 2 == 1 { prev.shift(1) } else { prev.clone() };
        out.push(step.add(&out[n as usize - 2]));
    }
    out.truncate(m as usize + 1);
    out
}

pub fn f_m1(m: u64) -> IntPoly {
    f_m1_sequence(m).pop().expect("non-empty")
}

fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// b_k = Σ C(k+i, k-i) X^i and B_k = Σ C(k+i+1, k-i) X^i.
pub fn mv_poly(kind: MvKind, k: u64) -> IntPoly {
    let extra = match kind {
        MvKind::Small => 0,
        MvKind::Big => 1,
    };
    IntPoly::new((0..=k).map(|i| binomial(k + i + extra, k - i)).collect())
}

/// Within one family, P_k = (X+2) P_(k-1) - P_(k-2), checked against the
/// binomial sums.
pub fn mv_three_term_check(kind: MvKind, k: u64) -> Result<bool> {
    if k < 2 {
        return Err(Error::OutOfRange { what: "k", detail: format!("three-term check needs k >= 2, got {k}") });
    }
    let x_plus_2 = IntPoly::from_i64s(&[2, 1]);
    let lhs = mv_poly(kind, k);
    let rhs = x_plus_2.mul(&mv_poly(kind, k - 1)).sub(&mv_poly(kind, k - 2));
    Ok(lhs == rhs)
}

/// F_0 = 0, F_1 = 1, F_m = X F_(m-1) + F_(m-2).
pub fn fib_poly(m: u64) -> IntPoly {
    let (mut a, mut b) = (IntPoly::zero(), IntPoly::one());
    if m == 0 {
        return a;
    }
    for _ in 1..m {
        let next = b.shift(1).add(&a);
        a = b;
        b = next;
    }
    b
}

/// U_n(√Z, Q): U_0 = 0, U_1 = 1, U_n = Z U_(n-1) - Q U_(n-2) for odd n and
/// U_(n-1) - Q U_(n-2) for even n.
pub fn lehmer_u(n: u64, z: &BigInt, q: &BigInt) -> BigInt {
    let (mut a, mut b) = (BigInt::zero(), BigInt::one());
    if n == 0 {
        return a;
    }
    for k in 2..=n {
        let head = if k % 2 == 1 { z * &b } else { b.clone() };
        let next = head - q * &a;
        a = b;
        b = next;
    }
    b
}

/// Least m with p | MV_m(Z) = U_m(√Z, -1), where Z lifts the residue z.
pub fn mv_apparition(z: u64, p: u64, lift: &BigInt) -> Result<u64> {
    if !arith::is_prime(p) {
        return Err(Error::CompositeModulusBase(p));
    }
    let zr = lift.mod_floor(&BigInt::from(p)).to_u64().expect("reduced residue");
    if zr != z % p {
        return Err(Error::OutOfRange { what: "Z", detail: format!("{lift} is not congruent to {z} mod {p}") });
    }
    if zr == 0 {
        return Err(Error::ZeroResidue);
    }
    let (mut a, mut b) = (0u64, 1u64);
    for n in 2..=p + 1 {
        let head = if n % 2 == 1 { arith::mul_mod(zr, b, p) } else { b };
        let next = (head + a) % p;
        a = b;
        b = next;
        if b == 0 {
            return Ok(n);
        }
    }
    Err(Error::InternalConsistency(format!("MV_m({lift}) is never 0 mod {p} for m <= p + 1")))
}
