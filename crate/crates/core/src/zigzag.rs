//! Down/up and up/down 0/1 sequences and their Fibonacci-weighted values.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    /// e_(n-1) >= e_(n-2) <= e_(n-3) >= ...
    DownUp,
    /// e_(n-1) <= e_(n-2) >= e_(n-3) <= ...
    UpDown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    fn matches(self, len: usize) -> bool {
        (len % 2 == 1) == (self == Parity::Odd)
    }
}

/// A 0/1 sequence stored most significant entry first: `bits[0]` is e_(n-1).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZigzagSeq {
    bits: Vec<u8>,
    orientation: Orientation,
}

impl fmt::Display for ZigzagSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl Serialize for ZigzagSeq {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl ZigzagSeq {
    /// Validates entries and the alternating chain.
    pub fn new(bits: Vec<u8>, orientation: Orientation) -> Result<Self> {
        if !is_zigzag(&bits, orientation)? {
            return Err(Error::InvalidElement(format!("not a {orientation:?} sequence")));
        }
        Ok(ZigzagSeq { bits, orientation })
    }

    /// Parses a string such as "101" (e_(n-1) first).
    pub fn parse(s: &str, orientation: Orientation) -> Result<Self> {
        let bits = s
            .bytes()
            .map(|c| match c {
                b'0' => Ok(0),
                b'1' => Ok(1),
                other => Err(Error::NonBinaryEntry(other)),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::new(bits, orientation)
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// e_i.
    pub fn entry(&self, i: usize) -> u8 {
        self.bits[self.bits.len() - 1 - i]
    }

    /// Indices i with e_i = 1, descending.
    pub fn ones(&self) -> Vec<usize> {
        let n = self.bits.len();
        (0..n).rev().filter(|&i| self.bits[n - 1 - i] == 1).collect()
    }
}

/// Relation required between bits[k-1] and bits[k].
#[inline]
fn allowed(orientation: Orientation, k: usize, prev: u8, cur: u8) -> bool {
    let down = (k - 1).is_multiple_of(2);
    match (orientation, down) {
        (Orientation::DownUp, true) | (Orientation::UpDown, false) => prev >= cur,
        _ => prev <= cur,
    }
}

pub fn is_zigzag(bits: &[u8], orientation: Orientation) -> Result<bool> {
    if let Some(&b) = bits.iter().find(|&&b| b > 1) {
        return Err(Error::NonBinaryEntry(b));
    }
    Ok((1..bits.len()).all(|k| allowed(orientation, k, bits[k - 1], bits[k])))
}

/// Number of sequences of length n, Fib(n+2) for either orientation.
pub fn count_zigzag(n: usize, orientation: Orientation) -> BigUint {
    // ways[b] = completions of the first k entries ending in b
    if n == 0 {
        return BigUint::one();
    }
    let mut ways = [BigUint::one(), BigUint::one()];
    for k in 1..n {
        let mut next = [BigUint::zero(), BigUint::zero()];
        for (cur, slot) in next.iter_mut().enumerate() {
            for (prev, w) in ways.iter().enumerate() {
                if allowed(orientation, k, prev as u8, cur as u8) {
                    *slot += w;
                }
            }
        }
        ways = next;
    }
    &ways[0] + &ways[1]
}

/// All sequences of length n, built with the parity recursion
/// DU(n) = DU(n-2)·00 ⊔ DU(n-1)·1 (n odd), DU(n-2)·11 ⊔ DU(n-1)·0 (n even).
/// Up/down sequences are the complements of down/up ones.
pub fn enum_zigzag(n: usize, orientation: Orientation, budget: u64) -> Result<Vec<ZigzagSeq>> {
    let count = count_zigzag(n, orientation);
    if count > BigUint::from(budget) {
        return Err(Error::budget("zigzag sequences", count, budget));
    }
    let mut prev2: Vec<Vec<u8>> = vec![vec![]];
    let mut prev1: Vec<Vec<u8>> = vec![vec![1], vec![0]];
    let levels = if n == 0 {
        prev2
    } else {
        for len in 2..=n {
            let (pad, tail) = if len % 2 == 1 { ([0u8, 0], 1u8) } else { ([1, 1], 0) };
            let mut cur = Vec::with_capacity(prev1.len() + prev2.len());
            for u in &prev2 {
                let mut v = u.clone();
                v.extend_from_slice(&pad);
                cur.push(v);
            }
            for u in &prev1 {
                let mut v = u.clone();
                v.push(tail);
                cur.push(v);
            }
            prev2 = std::mem::replace(&mut prev1, cur);
        }
        prev1
    };
    Ok(levels
        .into_iter()
        .map(|bits| match orientation {
            Orientation::DownUp => ZigzagSeq { bits, orientation },
            Orientation::UpDown => ZigzagSeq { bits: bits.iter().map(|b| 1 - b).collect(), orientation },
        })
        .collect())
}

/// ||V||_b = sum v_i b^i.
pub fn value_base(seq: &ZigzagSeq, b: i64) -> BigInt {
    let b = BigInt::from(b);
    seq.bits.iter().fold(BigInt::zero(), |acc, &x| acc * &b + x)
}

/// Signed Fibonacci numbers Fib(k) for k in [-K, K], with Fib(-n) = (-1)^(n+1) Fib(n).
#[derive(Clone, Debug)]
pub struct FibCache {
    k: usize,
    vals: Vec<BigInt>,
}

impl FibCache {
    pub fn new(k: usize) -> Self {
        let mut pos = vec![BigInt::zero(), BigInt::one()];
        for i in 2..=k {
            let next = &pos[i - 1] + &pos[i - 2];
            pos.push(next);
        }
        pos.truncate(k + 1);
        let mut vals = Vec::with_capacity(2 * k + 1);
        for n in (1..=k).rev() {
            vals.push(if n % 2 == 1 { pos[n].clone() } else { -pos[n].clone() });
        }
        vals.extend(pos);
        FibCache { k, vals }
    }

    pub fn bound(&self) -> usize {
        self.k
    }

    pub fn get(&self, n: i64) -> &BigInt {
        assert!(n.unsigned_abs() as usize <= self.k, "Fibonacci index {n} outside cache");
        &self.vals[(n + self.k as i64) as usize]
    }
}

/// Fib(n) for any integer n.
pub fn fib(n: i64) -> BigInt {
    FibCache::new(n.unsigned_abs() as usize).get(n).clone()
}

fn weighted(seq: &ZigzagSeq, w: impl Fn(i64) -> BigInt) -> BigInt {
    let n = seq.bits.len();
    (0..n).filter(|&i| seq.bits[n - 1 - i] == 1).map(|i| w(i as i64)).sum()
}

/// sum e_i Fib(i+1).
pub fn value_fib(seq: &ZigzagSeq) -> BigInt {
    let c = FibCache::new(seq.len() + 2);
    weighted(seq, |i| c.get(i + 1).clone())
}

/// sum e_i Fib(-i-2).
pub fn value_sfib(seq: &ZigzagSeq) -> BigInt {
    let c = FibCache::new(seq.len() + 2);
    weighted(seq, |i| c.get(-i - 2).clone())
}

/// The down/up sequence of the given length parity with Fibonacci value n,
/// by descending the 00 / 10 / 11 interval split.
pub fn to_downup(n: &BigInt, parity: Parity) -> Result<ZigzagSeq> {
    if n.is_negative() {
        return Err(Error::NegativeInput);
    }
    let mut len = if parity == Parity::Odd { 1 } else { 0 };
    while fib(len as i64 + 2) <= *n {
        len += 2;
    }
    let cache = FibCache::new(len + 2);
    let mut bits = Vec::with_capacity(len);
    let mut rest = n.clone();
    let mut l = len;
    while l >= 2 {
        let f = cache.get(l as i64);
        if rest < *f {
            bits.extend_from_slice(&[0, 0]);
        } else if rest < f * 2 {
            bits.extend_from_slice(&[1, 0]);
            rest -= f;
        } else {
            bits.extend_from_slice(&[1, 1]);
            rest -= cache.get(l as i64 + 1);
        }
        l -= 2;
    }
    if l == 1 {
        bits.push(if rest.is_zero() { 0 } else { 1 });
        if bits[bits.len() - 1] == 1 {
            rest -= 1;
        }
    }
    debug_assert!(rest.is_zero());
    ZigzagSeq::new(bits, Orientation::DownUp)
}

/// Entries of `|n|`'s Zeckendorf representation; sizes the search window.
fn zeckendorf_len(n: &BigInt) -> usize {
    let a = n.abs();
    if a.is_zero() {
        return 0;
    }
    let mut k = 2;
    while fib(k + 1) <= a {
        k += 1;
    }
    (k - 1) as usize
}

/// Search window used by the signed and up/down representations.
pub fn search_window(n: &BigInt) -> usize {
    2 * zeckendorf_len(n) + 6
}

/// Sequences of exactly `len` entries with value `target` under weights
/// `w[i]` for e_i; stops after `limit` hits.
fn search_exact(len: usize, orientation: Orientation, w: &[BigInt], target: &BigInt, limit: usize) -> Vec<Vec<u8>> {
    // bounds[k][prev]: min/max of sum over positions k.. given bits[k-1] = prev
    let weight = |k: usize| &w[len - 1 - k];
    let mut bounds = vec![[(BigInt::zero(), BigInt::zero()), (BigInt::zero(), BigInt::zero())]; len + 1];
    for k in (0..len).rev() {
        for prev in 0..2u8 {
            let mut lo: Option<BigInt> = None;
            let mut hi: Option<BigInt> = None;
            for cur in 0..2u8 {
                if k > 0 && !allowed(orientation, k, prev, cur) {
                    continue;
                }
                let here = if cur == 1 { weight(k).clone() } else { BigInt::zero() };
                let (l, h) = &bounds[k + 1][cur as usize];
                let (l, h) = (&here + l, &here + h);
                lo = Some(lo.map_or(l.clone(), |x| x.min(l)));
                hi = Some(hi.map_or(h.clone(), |x| x.max(h)));
            }
            bounds[k][prev as usize] = (lo.unwrap(), hi.unwrap());
        }
    }
    let mut out = Vec::new();
    let mut bits = Vec::with_capacity(len);
    #[allow(clippy::too_many_arguments)]
    fn dfs(
        k: usize,
        len: usize,
        orientation: Orientation,
        remaining: &BigInt,
        bits: &mut Vec<u8>,
        bounds: &[[(BigInt, BigInt); 2]],
        w: &[BigInt],
        out: &mut Vec<Vec<u8>>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        if k == len {
            if remaining.is_zero() {
                out.push(bits.clone());
            }
            return;
        }
        for cur in 0..2u8 {
            if k > 0 && !allowed(orientation, k, bits[k - 1], cur) {
                continue;
            }
            let rem = if cur == 1 { remaining - &w[len - 1 - k] } else { remaining.clone() };
            let (lo, hi) = &bounds[k + 1][cur as usize];
            if rem < *lo || rem > *hi {
                continue;
            }
            bits.push(cur);
            dfs(k + 1, len, orientation, &rem, bits, bounds, w, out, limit);
            bits.pop();
        }
    }
    let (lo, hi) = &bounds[0][0];
    if target >= lo && target <= hi {
        dfs(0, len, orientation, target, &mut bits, &bounds, w, &mut out, limit);
    }
    out
}

fn search_rep(
    n: &BigInt,
    orientation: Orientation,
    weight: impl Fn(&FibCache, usize) -> BigInt,
    parity: Option<Parity>,
) -> Result<ZigzagSeq> {
    let window = search_window(n);
    let cache = FibCache::new(window + 3);
    let w: Vec<BigInt> = (0..window).map(|i| weight(&cache, i)).collect();
    for len in 0..=window {
        if parity.is_some_and(|par| !par.matches(len)) {
            continue;
        }
        let hits = search_exact(len, orientation, &w[..len], n, 2);
        match hits.len() {
            0 => continue,
            1 => return Ok(ZigzagSeq { bits: hits.into_iter().next().unwrap(), orientation }),
            _ => {
                return Err(Error::InternalConsistency(format!(
                    "two {orientation:?} sequences of length {len} share value {n}"
                )))
            }
        }
    }
    Err(Error::SearchWindowExhausted(window))
}

/// The shortest down/up sequence with signed Fibonacci value n.
pub fn to_downup_sfib(n: &BigInt) -> Result<ZigzagSeq> {
    search_rep(n, Orientation::DownUp, |c, i| c.get(-(i as i64) - 2).clone(), None)
}

/// The shortest up/down sequence of the given parity with Fibonacci value n.
pub fn to_updown(n: &BigInt, parity: Parity) -> Result<ZigzagSeq> {
    if n.is_negative() {
        return Err(Error::NegativeInput);
    }
    search_rep(n, Orientation::UpDown, |c, i| c.get(i as i64 + 1).clone(), Some(parity))
}

/// The shortest up/down sequence of the given parity with signed Fibonacci value n.
pub fn to_updown_sfib(n: &BigInt, parity: Parity) -> Result<ZigzagSeq> {
    search_rep(n, Orientation::UpDown, |c, i| c.get(-(i as i64) - 2).clone(), Some(parity))
}

/// Drops leading "00" pairs, the identification DU(n) ⊂ DU(n+2).
pub fn canonical_downup(seq: &ZigzagSeq) -> ZigzagSeq {
    let mut start = 0;
    while seq.bits.len() - start >= 2 && seq.bits[start] == 0 && seq.bits[start + 1] == 0 {
        start += 2;
    }
    ZigzagSeq { bits: seq.bits[start..].to_vec(), orientation: seq.orientation }
}

/// Greedy Zeckendorf: Fibonacci indices (>= 2, pairwise non-consecutive),
/// descending, summing to n.
pub fn zeckendorf(n: &BigInt) -> Result<Vec<u32>> {
    if !n.is_positive() {
        return Err(Error::NonPositive);
    }
    let mut fibs = vec![BigInt::zero(), BigInt::one()];
    while fibs[fibs.len() - 1] <= *n {
        let k = fibs.len();
        fibs.push(&fibs[k - 1] + &fibs[k - 2]);
    }
    let mut rest = n.clone();
    let mut out = Vec::new();
    let mut k = fibs.len() - 1;
    while !rest.is_zero() {
        while fibs[k] > rest {
            k -= 1;
        }
        rest -= &fibs[k];
        out.push(k as u32);
        k -= 2;
    }
    Ok(out)
}

/// Negafibonacci representation: indices -k (k >= 1, pairwise
/// non-consecutive) with sum Fib(-k) = n, ordered by increasing |k|.
pub fn signed_zeckendorf(n: &BigInt) -> Vec<i64> {
    if n.is_zero() {
        return Vec::new();
    }
    // range[k] = interval of sums over non-consecutive subsets of {-1..-k}
    let mut ranges: Vec<(BigInt, BigInt)> = vec![(BigInt::zero(), BigInt::zero())];
    let mut k = 0usize;
    while !(ranges[k].0 <= *n && *n <= ranges[k].1) {
        k += 1;
        let f = fib(-(k as i64));
        let prev = &ranges[k - 1];
        let before = if k >= 2 { ranges[k - 2].clone() } else { (BigInt::zero(), BigInt::zero()) };
        let lo = prev.0.clone().min(&f + &before.0);
        let hi = prev.1.clone().max(&f + &before.1);
        ranges.push((lo, hi));
    }
    let mut out = Vec::new();
    let mut rest = n.clone();
    while !rest.is_zero() {
        // smallest k whose range contains rest must be used
        let mut j = 1;
        while !(ranges[j].0 <= rest && rest <= ranges[j].1) {
            j += 1;
        }
        rest -= fib(-(j as i64));
        out.push(-(j as i64));
    }
    out.reverse();
    out
}
