//! Dense univariate polynomials over any [`FiniteField`], integer
//! polynomials, and degree multisets.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::gf::{FiniteField, PrimeField};

/// Coefficients are stored constant term first and kept trimmed.
#[derive(Clone)]
pub struct DensePoly<F: FiniteField> {
    field: F,
    coeffs: Vec<F::Elem>,
}

impl<F: FiniteField> PartialEq for DensePoly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}
impl<F: FiniteField> Eq for DensePoly<F> {}

impl<F: FiniteField> fmt::Debug for DensePoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs)
    }
}

impl<F: FiniteField> Serialize for DensePoly<F> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            let v = self.field.coeffs(c);
            if self.field.degree() == 1 {
                seq.serialize_element(&v[0])?;
            } else {
                seq.serialize_element(&v)?;
            }
        }
        seq.end()
    }
}

impl<F: FiniteField> DensePoly<F> {
    pub fn new(field: F, mut coeffs: Vec<F::Elem>) -> Self {
        let z = field.zero();
        while coeffs.last() == Some(&z) {
            coeffs.pop();
        }
        DensePoly { field, coeffs }
    }

    /// Coefficients given as prime-field integers.
    pub fn from_u64s(field: F, c: &[u64]) -> Self {
        let coeffs = c.iter().map(|&x| field.from_u64(x)).collect();
        Self::new(field, coeffs)
    }

    pub fn from_i64s(field: F, c: &[i64]) -> Self {
        let coeffs = c.iter().map(|&x| field.from_i64(x)).collect();
        Self::new(field, coeffs)
    }

    pub fn zero(field: F) -> Self {
        DensePoly { field, coeffs: Vec::new() }
    }

    pub fn one(field: F) -> Self {
        let one = field.one();
        Self::new(field, vec![one])
    }

    pub fn constant(field: F, c: F::Elem) -> Self {
        Self::new(field, vec![c])
    }

    /// c X^d.
    pub fn monomial(field: F, c: F::Elem, d: usize) -> Self {
        let mut v = vec![field.zero(); d];
        v.push(c);
        Self::new(field, v)
    }

    pub fn x(field: F) -> Self {
        let one = field.one();
        Self::monomial(field, one, 1)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> F::Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn deg_i(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lead(&self) -> Option<&F::Elem> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == Some(&self.field.one())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|i| self.field.add(&self.coeff(i), &other.coeff(i))).collect();
        Self::new(self.field.clone(), c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|i| self.field.sub(&self.coeff(i), &other.coeff(i))).collect();
        Self::new(self.field.clone(), c)
    }

    pub fn neg(&self) -> Self {
        let c = self.coeffs.iter().map(|x| self.field.neg(x)).collect();
        Self::new(self.field.clone(), c)
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        let c = self.coeffs.iter().map(|x| self.field.mul(x, s)).collect();
        Self::new(self.field.clone(), c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field.clone());
        }
        let f = &self.field;
        let mut r = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                r[i + j] = f.add(&r[i + j], &f.mul(a, b));
            }
        }
        Self::new(f.clone(), r)
    }

    /// Multiplies by X^k.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![self.field.zero(); k];
        c.extend(self.coeffs.iter().cloned());
        Self::new(self.field.clone(), c)
    }

    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        let f = &self.field;
        let lead = d.lead().ok_or(Error::DivisionByZero)?;
        let li = f.inv(lead).ok_or(Error::DivisionByZero)?;
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Self::zero(f.clone()), self.clone()));
        }
        let mut q = vec![f.zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = f.mul(&r[k + dd], &li);
            if f.is_zero(&c) {
                continue;
            }
            for (i, di) in d.coeffs.iter().enumerate() {
                r[k + i] = f.sub(&r[k + i], &f.mul(&c, di));
            }
            q[k] = c;
        }
        r.truncate(dd);
        Ok((Self::new(f.clone(), q), Self::new(f.clone(), r)))
    }

    pub fn rem(&self, d: &Self) -> Result<Self> {
        Ok(self.divrem(d)?.1)
    }

    /// Exact quotient; errors if the division leaves a remainder.
    pub fn div_exact(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.divrem(d)?;
        if !r.is_zero() {
            return Err(Error::InternalConsistency("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            None => self.clone(),
            Some(l) => self.scale(&self.field.inv(l).expect("nonzero lead")),
        }
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let c = self.coeffs.iter().enumerate().skip(1).map(|(i, a)| f.mul(a, &f.from_u64(i as u64))).collect();
        Self::new(f.clone(), c)
    }

    pub fn eval(&self, x: &F::Elem) -> F::Elem {
        let f = &self.field;
        self.coeffs.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    pub fn mulmod(&self, other: &Self, m: &Self) -> Result<Self> {
        self.mul(other).rem(m)
    }

    /// self^e mod m by square-and-multiply.
    pub fn powmod(&self, e: &BigUint, m: &Self) -> Result<Self> {
        if m.is_constant() {
            return Err(Error::ConstantModulus);
        }
        let base = self.rem(m)?;
        let mut acc = Self::one(self.field.clone());
        for i in (0..e.bits()).rev() {
            acc = acc.mulmod(&acc, m)?;
            if e.bit(i) {
                acc = acc.mulmod(&base, m)?;
            }
        }
        acc.rem(m)
    }

    pub fn powmod_u64(&self, e: u64, m: &Self) -> Result<Self> {
        self.powmod(&BigUint::from(e), m)
    }

    /// Applies x -> x^q to X modulo m, i.e. the q-power Frobenius on F[X]/(m).
    fn frob_x(&self, m: &Self) -> Result<Self> {
        self.powmod(&self.field.order(), m)
    }

    /// Replaces every coefficient by its p-th root and X^(ip) by X^i.
    /// Requires all exponents to be multiples of p.
    fn pth_root_poly(&self) -> Self {
        let f = &self.field;
        let p = f.characteristic() as usize;
        let c = self.coeffs.iter().step_by(p).map(|a| f.pth_root(a)).collect();
        Self::new(f.clone(), c)
    }

    /// Squarefree factors with multiplicities; the product of f_i^e_i is monic(self).
    pub fn squarefree_decomposition(&self) -> Result<Vec<(Self, usize)>> {
        if self.is_constant() {
            return Err(Error::ConstantInput);
        }
        let mut out = Vec::new();
        self.sff_into(1, &mut out);
        Ok(out)
    }

    fn sff_into(&self, scale: usize, out: &mut Vec<(Self, usize)>) {
        let p = self.field.characteristic() as usize;
        let f = self.monic();
        let mut c = f.gcd(&f.derivative());
        let mut w = f.div_exact(&c).expect("gcd divides");
        let mut i = 1;
        while !w.is_constant() {
            let y = w.gcd(&c);
            let fac = w.div_exact(&y).expect("gcd divides");
            if !fac.is_constant() {
                out.push((fac, i * scale));
            }
            w = y;
            c = c.div_exact(&w).expect("gcd divides");
            i += 1;
        }
        if !c.is_constant() {
            c.pth_root_poly().sff_into(scale * p, out);
        }
    }

    /// Distinct-degree splitting of a squarefree polynomial: `(d, g_d)` where
    /// g_d is the product of all irreducible factors of degree d.
    pub fn ddf_components(&self) -> Result<Vec<(usize, Self)>> {
        if self.is_constant() {
            return Err(Error::ConstantInput);
        }
        let mut f = self.monic();
        let x = Self::x(self.field.clone());
        let mut h = x.rem(&f)?;
        let mut out = Vec::new();
        let mut d = 0;
        while 2 * (d + 1) <= f.deg_i() as usize {
            d += 1;
            h = h.frob_x(&f)?;
            let g = f.gcd(&h.sub(&x));
            if !g.is_constant() {
                f = f.div_exact(&g)?;
                h = h.rem(&f)?;
                out.push((d, g));
            }
        }
        if !f.is_constant() {
            out.push((f.deg_i() as usize, f));
        }
        Ok(out)
    }

    /// Degrees of the irreducible factors, counted with multiplicity.
    pub fn distinct_degree_factor(&self) -> Result<DegreeMultiset> {
        let mut ms = DegreeMultiset::default();
        for (g, mult) in self.squarefree_decomposition()? {
            for (d, comp) in g.ddf_components()? {
                let k = comp.degree().unwrap() / d;
                ms.insert(d as u64, (k * mult) as u64);
            }
        }
        Ok(ms)
    }

    /// Rabin's test.
    pub fn is_irreducible(&self) -> Result<bool> {
        let n = self.degree().ok_or(Error::ConstantInput)?;
        if n == 0 {
            return Err(Error::ConstantInput);
        }
        if n == 1 {
            return Ok(true);
        }
        let f = self.monic();
        let x = Self::x(self.field.clone());
        let primes: Vec<usize> = arith::factor(n as u64).into_iter().map(|(q, _)| q as usize).collect();
        let mut h = x.clone();
        let mut powers = vec![x.clone()];
        for _ in 0..n {
            h = h.frob_x(&f)?;
            powers.push(h.clone());
        }
        if powers[n] != x.rem(&f)? {
            return Ok(false);
        }
        for r in primes {
            let g = f.gcd(&powers[n / r].sub(&x));
            if !g.is_constant() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Cantor-Zassenhaus splitting of a monic squarefree polynomial whose
    /// irreducible factors all have degree `d`.
    pub fn equal_degree_split(&self, d: usize, seed: u64) -> Result<Vec<Self>> {
        let n = self.degree().ok_or(Error::ConstantInput)?;
        if d == 0 || n % d != 0 {
            return Err(Error::OutOfRange { what: "factor degree", detail: format!("{d} does not divide {n}") });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut done = Vec::new();
        let mut todo = vec![self.monic()];
        let q = self.field.order();
        let p = self.field.characteristic();
        while let Some(f) = todo.pop() {
            let deg = f.degree().unwrap();
            if deg == d {
                done.push(f);
                continue;
            }
            loop {
                let a = Self::new(self.field.clone(), (0..deg).map(|_| self.field.random(&mut rng)).collect());
                if a.is_constant() {
                    continue;
                }
                let b = if p == 2 {
                    // absolute trace to F_2 of a in F[X]/(f)
                    let k = self.field.degree() * d;
                    let mut t = a.rem(&f)?;
                    let mut s = t.clone();
                    for _ in 1..k {
                        t = t.mulmod(&t, &f)?;
                        s = s.add(&t);
                    }
                    s
                } else {
                    let e = (q.pow(d as u32) - 1u32) >> 1;
                    a.powmod(&e, &f)?.sub(&Self::one(self.field.clone()))
                };
                let g = f.gcd(&b);
                if !g.is_constant() && g.degree() != f.degree() {
                    let h = f.div_exact(&g)?;
                    todo.push(g);
                    todo.push(h.monic());
                    break;
                }
            }
        }
        Ok(done)
    }

    /// Distinct roots in the coefficient field.
    pub fn roots(&self, seed: u64) -> Result<Vec<F::Elem>> {
        if self.is_zero() {
            return Err(Error::ConstantInput);
        }
        if self.is_constant() {
            return Ok(Vec::new());
        }
        let f = self.monic();
        let x = Self::x(self.field.clone());
        let g = f.gcd(&x.frob_x(&f)?.sub(&x));
        if g.is_constant() {
            return Ok(Vec::new());
        }
        let f = &self.field;
        Ok(g.equal_degree_split(1, seed)?.into_iter().map(|l| f.neg(&l.coeff(0))).collect())
    }
}

impl DensePoly<PrimeField> {
    /// Coefficients as residues in [0, p).
    pub fn residues(&self) -> &[u64] {
        &self.coeffs
    }
}

/// Multiset of factor degrees, keyed by degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct DegreeMultiset(pub BTreeMap<u64, u64>);

impl DegreeMultiset {
    /// `(degree, count)` pairs, ascending by degree.
    pub fn iter(&self) -> impl Iterator<Item = (&u64, &u64)> {
        self.0.iter()
    }

    pub fn from_pairs(pairs: &[(u64, u64)]) -> Self {
        let mut ms = Self::default();
        for &(d, k) in pairs {
            ms.insert(d, k);
        }
        ms
    }

    pub fn insert(&mut self, degree: u64, count: u64) {
        if count > 0 {
            *self.0.entry(degree).or_insert(0) += count;
        }
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|(d, k)| d * k).sum()
    }

    pub fn count(&self, degree: u64) -> u64 {
        self.0.get(&degree).copied().unwrap_or(0)
    }
}

impl fmt::Display for DegreeMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(d, k)| format!("{d}:{k}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Polynomial with arbitrary-precision integer coefficients, constant first.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_i64s(&[1])
    }

    pub fn x() -> Self {
        Self::from_i64s(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut r = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                r[i + j] += a * b;
            }
        }
        Self::new(r)
    }

    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigInt::zero(); k];
        c.extend(self.coeffs.iter().cloned());
        Self::new(c)
    }

    /// f(X^2).
    pub fn substitute_square(&self) -> Self {
        let mut c = Vec::with_capacity(2 * self.coeffs.len());
        for a in &self.coeffs {
            c.push(a.clone());
            c.push(BigInt::zero());
        }
        Self::new(c)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn mod_p(&self, p: u64) -> Result<DensePoly<PrimeField>> {
        let fp = PrimeField::new(p)?;
        let pb = BigInt::from(p);
        let c = self.coeffs.iter().map(|a| a.mod_floor(&pb).to_u64().expect("reduced residue")).collect();
        Ok(DensePoly::new(fp, c))
    }

    /// True iff every coefficient is non-negative.
    pub fn is_nonnegative(&self) -> bool {
        !self.coeffs.iter().any(|c| c.is_negative())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;
    use proptest::prelude::*;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn poly(p: u64, c: &[i64]) -> DensePoly<PrimeField> {
        DensePoly::from_i64s(fp(p), c)
    }

    /// X^(p+1) + (1+z) X^p + X + 1 over F_p, built directly.
    fn gamma(z: i64, p: u64) -> DensePoly<PrimeField> {
        let mut c = vec![0i64; p as usize + 2];
        c[0] = 1;
        c[1] = 1;
        c[p as usize] = 1 + z;
        c[p as usize + 1] = 1;
        poly(p, &c)
    }

    #[test]
    fn gcd_examples() {
        let f = poly(5, &[1, 2, 3]);
        assert_eq!(f.gcd(&DensePoly::zero(fp(5))), f.monic());
        let mut xp = vec![0i64; 20];
        xp[19] = 1;
        xp[1] = -1;
        assert_eq!(gamma(5, 19).gcd(&poly(19, &xp)), poly(19, &[1, 7, 1]));
        assert_eq!(poly(3, &[1, 0, 1]).gcd(&poly(3, &[0, -1, 0, 1])), poly(3, &[1]));
    }

    #[test]
    fn powmod_examples() {
        let f = poly(3, &[1, 0, 1]);
        let x = DensePoly::x(fp(3));
        let mut h = x.clone();
        for _ in 0..2 {
            h = h.powmod_u64(3, &f).unwrap();
        }
        assert_eq!(h, x);
        let g = poly(3, &[2, 1, 1, 1]);
        assert_eq!(g.powmod_u64(1, &f).unwrap(), g.rem(&f).unwrap());
        assert_eq!(x.powmod_u64(3, &poly(3, &[4])).unwrap_err(), Error::ConstantModulus);
        // gamma_5 over F_19 with its quadratic factor removed has no linear factor
        let gbar = gamma(5, 19).div_exact(&poly(19, &[1, 7, 1])).unwrap();
        assert_ne!(DensePoly::x(fp(19)).powmod_u64(19, &gbar).unwrap(), DensePoly::x(fp(19)));
    }

    #[test]
    fn ddf_examples() {
        assert_eq!(gamma(5, 19).distinct_degree_factor().unwrap(), DegreeMultiset::from_pairs(&[(1, 2), (18, 1)]));
        assert_eq!(gamma(16, 19).distinct_degree_factor().unwrap(), DegreeMultiset::from_pairs(&[(1, 2), (6, 3)]));
        for p in [2u64, 3, 5, 7, 19] {
            assert_eq!(gamma(0, p).distinct_degree_factor().unwrap(), DegreeMultiset::from_pairs(&[(1, p + 1)]));
        }
        assert_eq!(poly(3, &[5]).distinct_degree_factor().unwrap_err(), Error::ConstantInput);
        assert_eq!(
            serde_json::to_string(&DegreeMultiset::from_pairs(&[(1, 2), (18, 1)])).unwrap(),
            r#"{"1":2,"18":1}"#
        );
    }

    #[test]
    fn irreducibility_examples() {
        assert!(poly(3, &[1, 0, 1]).is_irreducible().unwrap());
        for p in [3u64, 5, 7, 11] {
            assert!(!poly(p, &[-1, 0, 1]).is_irreducible().unwrap());
        }
        // X^7 - 1 - 2(X + ... + X^6) over F_7
        let mut c = vec![-2i64; 8];
        c[0] = -1;
        c[7] = 1;
        assert!(poly(7, &c).is_irreducible().unwrap());
        assert!(poly(2, &[1, 1, 0, 0, 1]).is_irreducible().unwrap());
        assert!(!poly(2, &[1, 0, 0, 0, 1]).is_irreducible().unwrap());
    }

    #[test]
    fn char_p_squarefree() {
        // (X+1)^6 (X^2+1)^3 over F_3
        let a = poly(3, &[1, 1]);
        let b = poly(3, &[1, 0, 1]);
        let mut f = DensePoly::one(fp(3));
        for _ in 0..6 {
            f = f.mul(&a);
        }
        for _ in 0..3 {
            f = f.mul(&b);
        }
        let sff = f.squarefree_decomposition().unwrap();
        let mut rebuilt = DensePoly::one(fp(3));
        for (g, e) in &sff {
            for _ in 0..*e {
                rebuilt = rebuilt.mul(g);
            }
        }
        assert_eq!(rebuilt, f);
        assert_eq!(f.distinct_degree_factor().unwrap(), DegreeMultiset::from_pairs(&[(1, 6), (2, 3)]));
    }

    #[test]
    fn extension_field_coefficients() {
        let f9 = make_field(3, 2).unwrap();
        // X^2 + 1 splits over F_9
        let g = DensePoly::from_u64s(f9.clone(), &[1, 0, 1]);
        assert_eq!(g.distinct_degree_factor().unwrap(), DegreeMultiset::from_pairs(&[(1, 2)]));
        let mut roots = g.roots(7).unwrap();
        roots.sort_by_key(|r| r.coeffs().to_vec());
        assert_eq!(roots, vec![f9.gen_x(), -&f9.gen_x()]);
        // X^3 - X - 1 stays irreducible over F_9 (degree 3 is prime to 2)
        assert!(DensePoly::from_i64s(f9, &[-1, -1, 0, 1]).is_irreducible().unwrap());
    }

    #[test]
    fn edf_splits_into_irreducibles() {
        for seed in 0..4 {
            for p in [2u64, 3, 19] {
                // product of all monic irreducible quadratics' splitting: X^(p^2) - X over F_p,
                // degree-2 part
                let mut c = vec![0i64; (p * p + 1) as usize];
                c[(p * p) as usize] = 1;
                c[1] = -1;
                let f = poly(p, &c);
                let comps = f.ddf_components().unwrap();
                let (d, g) = comps.iter().find(|(d, _)| *d == 2).unwrap().clone();
                let parts = g.equal_degree_split(d, seed).unwrap();
                assert_eq!(parts.len() as u64, (p * p - p) / 2);
                assert!(parts.iter().all(|q| q.degree() == Some(2) && q.is_irreducible().unwrap()));
            }
        }
    }

    #[test]
    fn int_poly_basics() {
        let z = BigInt::from(17);
        assert_eq!(IntPoly::zero().eval(&z), BigInt::zero());
        assert_eq!(IntPoly::from_i64s(&[1, 1]).eval(&BigInt::one()), BigInt::from(2));
        assert_eq!(IntPoly::from_i64s(&[3, 4, 1]).eval(&BigInt::one()), BigInt::from(8));
        let m = IntPoly::from_i64s(&[-1, 7, 20]).mod_p(3).unwrap();
        assert_eq!(m.residues(), &[2, 1, 2]);
        assert_eq!(serde_json::to_string(&IntPoly::from_i64s(&[3, -4])).unwrap(), r#"["3","-4"]"#);
    }

    fn arb_poly(p: u64, max_deg: usize) -> impl Strategy<Value = DensePoly<PrimeField>> {
        proptest::collection::vec(0..p, 0..=max_deg + 1).prop_map(move |c| DensePoly::from_u64s(fp(p), &c))
    }

    fn arb_p() -> impl Strategy<Value = u64> {
        prop_oneof![Just(2u64), Just(3), Just(5), Just(19)]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn gcd_divides_both((f, g, h) in arb_p().prop_flat_map(|p| (arb_poly(p, 50), arb_poly(p, 50), arb_poly(p, 6)))) {
            let (fh, gh) = (f.mul(&h), g.mul(&h));
            let d = fh.gcd(&gh);
            if !d.is_zero() {
                prop_assert!(fh.rem(&d).unwrap().is_zero());
                prop_assert!(gh.rem(&d).unwrap().is_zero());
                // any common divisor, here h, divides the gcd
                if !h.is_zero() {
                    prop_assert!(d.rem(&h).unwrap().is_zero());
                }
            }
        }

        #[test]
        fn ddf_degree_sum(f in arb_p().prop_flat_map(|p| arb_poly(p, 40))) {
            prop_assume!(!f.is_constant());
            let ms = f.distinct_degree_factor().unwrap();
            prop_assert_eq!(ms.total_degree(), f.degree().unwrap() as u64);
            prop_assert_eq!(f.is_irreducible().unwrap(), ms == DegreeMultiset::from_pairs(&[(f.degree().unwrap() as u64, 1)]));
        }

        #[test]
        fn ddf_components_rebuild_squarefree_part(f in arb_p().prop_flat_map(|p| arb_poly(p, 40))) {
            prop_assume!(!f.is_constant());
            for (g, _) in f.squarefree_decomposition().unwrap() {
                let comps = g.ddf_components().unwrap();
                let prod = comps.iter().fold(DensePoly::one(*g.field()), |acc, (_, c)| acc.mul(c));
                prop_assert_eq!(prod, g.monic());
            }
        }

        #[test]
        fn ring_axioms((f, g, h) in arb_p().prop_flat_map(|p| (arb_poly(p, 12), arb_poly(p, 12), arb_poly(p, 12)))) {
            prop_assert_eq!(f.mul(&g.add(&h)), f.mul(&g).add(&f.mul(&h)));
            prop_assert_eq!(f.mul(&g), g.mul(&f));
            if !g.is_zero() {
                let (q, r) = f.divrem(&g).unwrap();
                prop_assert_eq!(q.mul(&g).add(&r), f.clone());
                prop_assert!(r.degree() < g.degree());
            }
        }
    }
}
