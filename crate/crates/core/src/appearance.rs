//! Orders of appearance: α(z,p) for residues z, the classical Fibonacci
//! entry point α(n), the divisibility laws and a few empirical scans.

use rayon::prelude::*;
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::fmp;
use crate::gf::{self, make_field, FiniteField};

/// Sign of the discriminant z^2 + 4z: the Legendre symbol for odd p, the
/// splitting type of X^2 + (z+2)X + 1 over F_2 when p = 2.
pub fn discriminant_symbol(z: u64, p: u64) -> i8 {
    let z = (z % p) as i64;
    let d = z * z + 4 * z;
    if p == 2 {
        arith::kronecker_two(d)
    } else {
        arith::legendre(d, p)
    }
}

/// α(z,p) with the divisor-law evidence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AppearanceRecord {
    pub p: u64,
    pub z: u64,
    pub alpha: u64,
    pub symbol: i8,
    /// p - symbol, which alpha divides.
    pub bound: u64,
}

fn check_prime(p: u64) -> Result<()> {
    if !arith::is_prime(p) {
        return Err(Error::CompositeModulusBase(p));
    }
    if p > gf::MAX_P {
        return Err(Error::OutOfRange { what: "p", detail: format!("{p} > {}", gf::MAX_P) });
    }
    Ok(())
}

/// Least m with f_(m,p)(z) = 0, scanning m up to p + 1.
pub fn alpha_zp(z: u64, p: u64) -> Result<AppearanceRecord> {
    check_prime(p)?;
    let z = z % p;
    if z == 0 {
        return Err(Error::ZeroArgument);
    }
    let symbol = discriminant_symbol(z, p);
    let bound = (p as i64 - symbol as i64) as u64;
    let seq = fmp::eval_fp_sequence(p + 1, p, z);
    let alpha = (2..=p + 1)
        .find(|&m| seq[m as usize] == 0)
        .ok_or_else(|| Error::InternalConsistency(format!("f_m({z}) != 0 mod {p} for all m <= p + 1")))?;
    if !bound.is_multiple_of(alpha) {
        return Err(Error::InternalConsistency(format!("alpha({z},{p}) = {alpha} does not divide {bound}")));
    }
    Ok(AppearanceRecord { p, z, alpha, symbol, bound })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlphaEntry {
    pub z: u64,
    pub alpha: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlphaTable {
    pub p: u64,
    pub table: Vec<AlphaEntry>,
}

/// α(z,p) for every z in F_p*.
pub fn alpha_table(p: u64) -> Result<AlphaTable> {
    let table = (1..p).map(|z| alpha_zp(z, p).map(|r| AlphaEntry { z, alpha: r.alpha })).collect::<Result<_>>()?;
    Ok(AlphaTable { p, table })
}

fn fib_divisible(k: u64, n: u64) -> bool {
    arith::fib_pair_mod(k, n).0 == 0
}

/// Least m with n | Fib(m), by walking the Fibonacci sequence mod n.
pub fn alpha_classical_linear(n: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::OutOfRange { what: "n", detail: format!("need n >= 2, got {n}") });
    }
    let (mut a, mut b) = (1u64, 1u64 % n);
    let mut m = 1;
    while a != 0 {
        (a, b) = (b, (a + b) % n);
        m += 1;
    }
    Ok(m)
}

fn alpha_prime_power(q: u64, e: u32) -> u64 {
    // α(q) | q - (5/q) for q != 5, and α(q^e) | q^(e-1) α(q)
    let base = match q {
        2 => 3,
        5 => 5,
        _ => (q as i64 - arith::legendre(5, q) as i64) as u64,
    };
    let qe = q.pow(e);
    let mut n = base * q.pow(e - 1);
    for (r, _) in arith::factor(n) {
        while n.is_multiple_of(r) && fib_divisible(n / r, qe) {
            n /= r;
        }
    }
    n
}

/// Least m with n | Fib(m): lcm of the entry points of the prime powers of n.
pub fn alpha_classical(n: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::OutOfRange { what: "n", detail: format!("need n >= 2, got {n}") });
    }
    Ok(arith::factor(n).into_iter().fold(1u64, |acc, (q, e)| {
        let a = alpha_prime_power(q, e);
        acc / arith::gcd(acc, a) * a
    }))
}

/// Entry point of a prime.
pub fn alpha_prime(p: u64) -> Result<u64> {
    if !arith::is_prime(p) {
        return Err(Error::CompositeModulusBase(p));
    }
    alpha_classical(p)
}

/// α(p) | p - (5/p).
pub fn check_divisibility_law(p: u64) -> Result<bool> {
    if p == 5 {
        return Err(Error::PIsFive);
    }
    let a = alpha_prime(p)?;
    let sym = if p == 2 { arith::kronecker_two(5) } else { arith::legendre(5, p) };
    Ok((p as i64 - sym as i64) % a as i64 == 0)
}

/// n | Fib(k) exactly when α(n) | k, for 1 <= k <= limit.
pub fn wall_check(n: u64, limit: u64) -> Result<bool> {
    let a = alpha_classical(n)?;
    let (mut f, mut g) = (0u64, 1u64);
    for k in 1..=limit {
        (f, g) = (g, (f + g) % n);
        if (f == 0) != (k % a == 0) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SalleReport {
    pub limit: u64,
    pub bound_holds: bool,
    /// Every n with α(n) = 2n.
    pub equality: Vec<u64>,
    /// Whether the equality cases are exactly 6·5^j.
    pub equality_is_6_times_power_of_5: bool,
}

/// α(n) <= 2n for 2 <= n <= limit, with the equality cases.
pub fn salle_bound_scan(limit: u64) -> Result<SalleReport> {
    const MAX: u64 = 100_000;
    if limit > MAX {
        return Err(Error::budget("salle scan limit", limit, MAX));
    }
    let alphas: Vec<(u64, u64)> =
        (2..=limit).into_par_iter().map(|n| (n, alpha_classical(n).expect("n >= 2"))).collect();
    let bound_holds = alphas.iter().all(|&(n, a)| a <= 2 * n);
    let equality: Vec<u64> = alphas.iter().filter(|&&(n, a)| a == 2 * n).map(|&(n, _)| n).collect();
    let expected: Vec<u64> = std::iter::successors(Some(6u64), |x| Some(x * 5)).take_while(|&x| x <= limit).collect();
    let equality_is_6_times_power_of_5 = equality == expected;
    Ok(SalleReport { limit, bound_holds, equality, equality_is_6_times_power_of_5 })
}

/// Least prime p <= prime_limit with α(p) = m.
pub fn carmichael_search(m: u64, prime_limit: u64) -> Option<u64> {
    arith::primes_up_to(prime_limit).into_iter().find(|&p| alpha_classical(p) == Ok(m))
}

/// Primes q with α(q) = m, from the factorization of Fib(m); m <= 93.
pub fn primitive_prime_divisors(m: u64) -> Result<Vec<u64>> {
    if !(1..=93).contains(&m) {
        return Err(Error::OutOfRange { what: "m", detail: format!("Fib({m}) must fit in 64 bits (1 <= m <= 93)") });
    }
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 0..m {
        (a, b) = (b, a.wrapping_add(b));
    }
    Ok(arith::factor(a).into_iter().map(|(q, _)| q).filter(|&q| alpha_classical(q) == Ok(m)).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityReport {
    pub limit: u64,
    pub count_pm1: u64,
    pub count_pp1: u64,
    pub total_primes: u64,
    pub density: f64,
}

/// Counts primes p <= limit with α(p) = p - 1 and with α(p) = p + 1.
pub fn shanks_taylor_density(limit: u64) -> Result<DensityReport> {
    const MAX: u64 = 1_000_000;
    if limit > MAX {
        return Err(Error::budget("density prime limit", limit, MAX));
    }
    let primes = arith::primes_up_to(limit);
    let alphas: Vec<(u64, u64)> = primes.par_iter().map(|&p| (p, alpha_classical(p).expect("p >= 2"))).collect();
    let mut count_pm1 = 0;
    let mut count_pp1 = 0;
    for (p, a) in alphas {
        if a + 1 == p {
            count_pm1 += 1;
        } else if a == p + 1 {
            if !matches!(p % 5, 2 | 3) {
                return Err(Error::InternalConsistency(format!("alpha({p}) = p + 1 with p not = +-2 mod 5")));
            }
            count_pp1 += 1;
        }
    }
    let total_primes = primes.len() as u64;
    let density = if total_primes == 0 { 0.0 } else { count_pm1 as f64 / total_primes as f64 };
    Ok(DensityReport { limit, count_pm1, count_pp1, total_primes, density })
}

/// σ(r) = -r - 2 - 1/r in F_p.
pub fn sigma(r: u64, p: u64) -> Result<u64> {
    let r = r % p;
    let inv = arith::inv_mod(r, p).ok_or(Error::ZeroArgument)?;
    Ok((3 * p - r - 2 % p - inv) % p)
}

/// The multiplicative order of a root r of X^2 + (z+2)X + 1, so σ(r) = z.
pub fn alpha_via_multiplicative_order(z: u64, p: u64) -> Result<u64> {
    check_prime(p)?;
    let z = z % p;
    if z == 0 || (z + 4).is_multiple_of(p) {
        return Err(Error::ExcludedZ(z));
    }
    let f = make_field(p, 2)?;
    let b = f.from_u64(z + 2);
    let r = if p == 2 {
        let one = f.one();
        gf::enumerate_elements(&f, 4)?
            .find(|x| (&(&(x * x) + &(&b * x)) + &one).is_zero())
            .expect("X^2 + X + 1 splits over F_4")
    } else {
        // r = (-(z+2) + sqrt(z^2 + 4z)) / 2
        let d = f.from_u64(z * z % p + 4 * z);
        let s = gf::sqrt(&f, &d).expect("every element of F_p is a square in F_(p^2)");
        (&(-&b) + &s).try_mul(&f.from_u64(p.div_ceil(2)))?
    };
    r.mult_order()
}
