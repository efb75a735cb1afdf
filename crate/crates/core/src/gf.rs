//! Prime and extension fields: a common trait, a coefficient-vector
//! representation and a log-table representation for enumerable fields.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::upoly::DensePoly;

/// Default cap on the number of elements an enumerating operation may visit.
pub const DEFAULT_BUDGET: u64 = 1 << 20;

/// Largest supported characteristic.
pub const MAX_P: u64 = 1 << 20;

pub fn is_prime(p: u64) -> bool {
    arith::is_prime(p)
}

/// Operations shared by every field backend.
// `from_*` constructors take `&self`: the field value carries the modulus.
#[allow(clippy::wrong_self_convention)]
pub trait FiniteField: Clone + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync;

    fn characteristic(&self) -> u64;
    /// Degree over the prime field.
    fn degree(&self) -> usize;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// Coordinates over F_p, constant coordinate first.
    fn coeffs(&self, a: &Self::Elem) -> Vec<u64>;
    fn from_coeffs(&self, c: &[u64]) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    /// Whether the element belongs to this field.
    fn contains(&self, _a: &Self::Elem) -> bool {
        true
    }

    fn from_u64(&self, n: u64) -> Self::Elem {
        self.from_coeffs(&[n % self.characteristic()])
    }

    fn from_i64(&self, n: i64) -> Self::Elem {
        self.from_u64(n.rem_euclid(self.characteristic() as i64) as u64)
    }

    /// Field size p^m.
    fn order(&self) -> BigUint {
        BigUint::from(self.characteristic()).pow(self.degree() as u32)
    }

    /// The element whose coordinate digits spell `idx` in base p.
    fn element(&self, mut idx: u64) -> Self::Elem {
        let p = self.characteristic();
        let mut c = Vec::with_capacity(self.degree());
        for _ in 0..self.degree() {
            c.push(idx % p);
            idx /= p;
        }
        self.from_coeffs(&c)
    }

    /// Value in F_p if the element lies in the prime subfield.
    fn prime_value(&self, a: &Self::Elem) -> Option<u64> {
        let c = self.coeffs(a);
        c[1..].iter().all(|&x| x == 0).then_some(c[0])
    }

    fn pow_u64(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn pow(&self, a: &Self::Elem, e: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// x^(p^k).
    fn frobenius(&self, a: &Self::Elem, k: usize) -> Self::Elem {
        let p = self.characteristic();
        let mut x = a.clone();
        for _ in 0..k % self.degree() {
            x = self.pow_u64(&x, p);
        }
        x
    }

    /// The unique p-th root (inverse Frobenius).
    fn pth_root(&self, a: &Self::Elem) -> Self::Elem {
        self.frobenius(a, self.degree() - 1)
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        let p = self.characteristic();
        let c: Vec<u64> = (0..self.degree()).map(|_| rng.gen_range(0..p)).collect();
        self.from_coeffs(&c)
    }

    /// Multiplicative order; needs p^m - 1 to fit in 64 bits.
    fn mult_order(&self, a: &Self::Elem) -> Result<u64> {
        if self.is_zero(a) {
            return Err(Error::ZeroElement);
        }
        let n = (self.order() - 1u32)
            .to_u64()
            .ok_or_else(|| Error::OutOfRange { what: "field order", detail: "p^m - 1 exceeds 64 bits".into() })?;
        let mut ord = n;
        for (q, _) in arith::factor(n) {
            while ord % q == 0 && self.pow_u64(a, ord / q) == self.one() {
                ord /= q;
            }
        }
        Ok(ord)
    }
}

/// Square test by Euler's criterion (odd characteristic).
pub fn is_square<F: FiniteField>(f: &F, a: &F::Elem) -> bool {
    if f.is_zero(a) || f.characteristic() == 2 {
        return true;
    }
    let e = (f.order() - 1u32) >> 1;
    f.pow(a, &e) == f.one()
}

/// Square root by Tonelli-Shanks; the non-residue is the first one in
/// element-index order, so the result is deterministic.
pub fn sqrt<F: FiniteField>(f: &F, a: &F::Elem) -> Option<F::Elem> {
    if f.is_zero(a) {
        return Some(f.zero());
    }
    let q = f.order();
    if f.characteristic() == 2 {
        // squaring is bijective; the root is a^(q/2)
        return Some(f.pow(a, &(q >> 1)));
    }
    if !is_square(f, a) {
        return None;
    }
    let qm1 = &q - 1u32;
    let s = qm1.trailing_zeros().unwrap_or(0);
    let t = &qm1 >> s;
    let mut idx = 2u64;
    let z = loop {
        let c = f.element(idx);
        if !is_square(f, &c) {
            break c;
        }
        idx += 1;
    };
    let mut m = s;
    let mut c = f.pow(&z, &t);
    let mut tt = f.pow(a, &t);
    let mut r = f.pow(a, &((&t + 1u32) >> 1));
    let one = f.one();
    while tt != one {
        let mut i = 0;
        let mut t2 = tt.clone();
        while t2 != one {
            t2 = f.mul(&t2, &t2);
            i += 1;
        }
        let mut b = c.clone();
        for _ in 0..(m - i - 1) {
            b = f.mul(&b, &b);
        }
        m = i;
        c = f.mul(&b, &b);
        tt = f.mul(&tt, &c);
        r = f.mul(&r, &b);
    }
    Some(r)
}

/// F_p with residues stored as `u64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(Error::CompositeModulusBase(p));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

impl FiniteField for PrimeField {
    type Elem = u64;

    fn characteristic(&self) -> u64 {
        self.p
    }
    fn degree(&self) -> usize {
        1
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        arith::mul_mod(*a, *b, self.p)
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        arith::inv_mod(*a, self.p)
    }
    fn coeffs(&self, a: &u64) -> Vec<u64> {
        vec![*a]
    }
    fn from_coeffs(&self, c: &[u64]) -> u64 {
        c.first().copied().unwrap_or(0) % self.p
    }
    fn from_u64(&self, n: u64) -> u64 {
        n % self.p
    }
    fn element(&self, idx: u64) -> u64 {
        idx % self.p
    }
    fn prime_value(&self, a: &u64) -> Option<u64> {
        Some(*a)
    }
    fn frobenius(&self, a: &u64, _k: usize) -> u64 {
        *a
    }
    fn pth_root(&self, a: &u64) -> u64 {
        *a
    }
    fn mult_order(&self, a: &u64) -> Result<u64> {
        arith::order_mod(*a, self.p).ok_or(Error::ZeroElement)
    }
}

struct DescInner {
    p: u64,
    m: usize,
    /// Monic modulus, constant term first, length m + 1.
    modulus: Vec<u64>,
}

/// F_{p^m} = F_p[X]/(modulus) with a deterministic modulus.
#[derive(Clone)]
pub struct FieldDesc(Arc<DescInner>);

impl fmt::Debug for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {:?}", self.0.p, self.0.m, self.0.modulus)
    }
}

impl PartialEq for FieldDesc {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}
impl Eq for FieldDesc {}

impl Serialize for FieldDesc {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("FieldDesc", 3)?;
        st.serialize_field("p", &self.0.p)?;
        st.serialize_field("m", &self.0.m)?;
        st.serialize_field("modulus", &self.0.modulus)?;
        st.end()
    }
}

/// Builds F_{p^m} with the smallest monic irreducible modulus, ordering
/// candidates by the integer sum c_i p^i.
pub fn make_field(p: u64, m: usize) -> Result<FieldDesc> {
    if !arith::is_prime(p) {
        return Err(Error::CompositeModulusBase(p));
    }
    if p > MAX_P {
        return Err(Error::OutOfRange { what: "p", detail: format!("{p} > 2^20") });
    }
    if m == 0 {
        return Err(Error::DegreeZero);
    }
    let fp = PrimeField { p };
    let mut low = vec![0u64; m];
    loop {
        let mut c = low.clone();
        c.push(1);
        let poly = DensePoly::new(fp, c.clone());
        if poly.is_irreducible()? {
            return Ok(FieldDesc(Arc::new(DescInner { p, m, modulus: c })));
        }
        // increment the base-p counter, constant digit fastest
        let mut i = 0;
        loop {
            if i == m {
                return Err(Error::InternalConsistency(format!("no irreducible of degree {m} over F_{p}")));
            }
            low[i] += 1;
            if low[i] < p {
                break;
            }
            low[i] = 0;
            i += 1;
        }
    }
}

impl FieldDesc {
    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn m(&self) -> usize {
        self.0.m
    }

    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn modulus_poly(&self) -> DensePoly<PrimeField> {
        DensePoly::new(PrimeField { p: self.0.p }, self.0.modulus.clone())
    }

    /// Number of elements as u64 if it fits.
    pub fn size(&self) -> Option<u64> {
        self.0.p.checked_pow(self.0.m as u32)
    }

    pub fn elem(&self, coeffs: &[u64]) -> Result<FieldElem> {
        if coeffs.len() > self.0.m {
            return Err(Error::InvalidElement(format!("{} coefficients for degree {}", coeffs.len(), self.0.m)));
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= self.0.p) {
            return Err(Error::InvalidElement(format!("coefficient {c} >= p")));
        }
        Ok(self.from_coeffs(coeffs))
    }

    /// The class of X.
    pub fn gen_x(&self) -> FieldElem {
        if self.0.m == 1 {
            // X = -c_0 in F_p[X]/(X + c_0)
            return self.from_u64(self.0.p - self.0.modulus[0] % self.0.p);
        }
        let mut c = vec![0; self.0.m];
        c[1] = 1;
        self.from_coeffs(&c)
    }

    /// First element in index order with multiplicative order p^m - 1.
    pub fn primitive_element(&self) -> Result<FieldElem> {
        let n = self.size().ok_or(Error::OutOfRange { what: "field order", detail: "p^m exceeds 64 bits".into() })? - 1;
        let factors = arith::factor(n);
        let one = self.one();
        for idx in 1.. {
            let g = self.element(idx);
            if factors.iter().all(|&(q, _)| self.pow_u64(&g, n / q) != one) {
                return Ok(g);
            }
        }
        unreachable!()
    }

    fn reduce(&self, mut r: Vec<u64>) -> Vec<u64> {
        let (p, m) = (self.0.p, self.0.m);
        let md = &self.0.modulus;
        for d in (m..r.len()).rev() {
            let c = r[d] % p;
            if c != 0 {
                for i in 0..m {
                    let t = arith::mul_mod(c, md[i], p);
                    r[d - m + i] = (r[d - m + i] + p - t) % p;
                }
            }
        }
        r.truncate(m);
        r.resize(m, 0);
        r
    }
}

/// An element of F_{p^m}: coordinates over F_p (constant first) plus its field.
#[derive(Clone)]
pub struct FieldElem {
    coeffs: Vec<u64>,
    field: FieldDesc,
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.field == other.field
    }
}
impl Eq for FieldElem {}

impl Hash for FieldElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl Serialize for FieldElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

impl FieldElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn check(&self, other: &FieldElem) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn try_add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(self.field.add(self, other))
    }

    pub fn try_sub(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(self.field.sub(self, other))
    }

    pub fn try_mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(self.field.mul(self, other))
    }

    pub fn try_div(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(self.field.mul(self, &other.inv()?))
    }

    pub fn inv(&self) -> Result<FieldElem> {
        self.field.inv(self).ok_or(Error::DivisionByZero)
    }

    pub fn pow(&self, e: &BigUint) -> FieldElem {
        self.field.pow(self, e)
    }

    pub fn frobenius(&self, k: usize) -> FieldElem {
        self.field.frobenius(self, k)
    }

    pub fn mult_order(&self) -> Result<u64> {
        self.field.mult_order(self)
    }
}

macro_rules! elem_binop {
    ($tr:ident, $method:ident, $try:ident) => {
        impl std::ops::$tr<&FieldElem> for &FieldElem {
            type Output = FieldElem;
            /// Panics when the operands come from different fields.
            fn $method(self, rhs: &FieldElem) -> FieldElem {
                self.$try(rhs).expect("field mismatch")
            }
        }
        impl std::ops::$tr for FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: FieldElem) -> FieldElem {
                (&self).$try(&rhs).expect("field mismatch")
            }
        }
    };
}
elem_binop!(Add, add, try_add);
elem_binop!(Sub, sub, try_sub);
elem_binop!(Mul, mul, try_mul);

impl std::ops::Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        self.field.neg(self)
    }
}

impl FiniteField for FieldDesc {
    type Elem = FieldElem;

    fn characteristic(&self) -> u64 {
        self.0.p
    }
    fn degree(&self) -> usize {
        self.0.m
    }
    fn zero(&self) -> FieldElem {
        FieldElem { coeffs: vec![0; self.0.m], field: self.clone() }
    }
    fn one(&self) -> FieldElem {
        self.from_u64(1)
    }
    fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let p = self.0.p;
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| (x + y) % p).collect();
        FieldElem { coeffs, field: self.clone() }
    }
    fn neg(&self, a: &FieldElem) -> FieldElem {
        let p = self.0.p;
        let coeffs = a.coeffs.iter().map(|&x| (p - x) % p).collect();
        FieldElem { coeffs, field: self.clone() }
    }
    fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let (p, m) = (self.0.p, self.0.m);
        let mut r = vec![0u64; 2 * m - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                r[i + j] = (r[i + j] + arith::mul_mod(x, y, p)) % p;
            }
        }
        FieldElem { coeffs: self.reduce(r), field: self.clone() }
    }
    fn inv(&self, a: &FieldElem) -> Option<FieldElem> {
        if a.is_zero() {
            return None;
        }
        Some(self.pow(a, &(self.order() - 2u32)))
    }
    fn coeffs(&self, a: &FieldElem) -> Vec<u64> {
        a.coeffs.clone()
    }
    fn contains(&self, a: &FieldElem) -> bool {
        a.field == *self
    }
    fn from_coeffs(&self, c: &[u64]) -> FieldElem {
        let p = self.0.p;
        let mut r: Vec<u64> = c.iter().map(|&x| x % p).collect();
        r = self.reduce(r);
        FieldElem { coeffs: r, field: self.clone() }
    }
}

/// All elements of the field in index order. Refuses fields larger than `budget`.
pub fn enumerate_elements(field: &FieldDesc, budget: u64) -> Result<impl Iterator<Item = FieldElem> + '_> {
    let q = match field.size() {
        Some(q) if q <= budget => q,
        _ => {
            let needed = BigUint::from(field.p()).pow(field.m() as u32);
            return Err(Error::budget("field elements", needed, budget));
        }
    };
    Ok((0..q).map(move |i| field.element(i)))
}

const NONE: u32 = u32::MAX;

struct TableInner {
    desc: FieldDesc,
    p: u32,
    m: usize,
    q: u32,
    /// exp[k] = index of g^k, stored for k in [0, 2(q-1)).
    exp: Vec<u32>,
    log: Vec<u32>,
    /// zech[k] = log(1 + g^k), or NONE when 1 + g^k = 0.
    zech: Vec<u32>,
    /// log(-1).
    log_neg_one: u32,
}

/// F_{p^m} for small fields, elements as base-p digit indices with
/// Zech-logarithm addition.
#[derive(Clone)]
pub struct FieldTable(Arc<TableInner>);

impl fmt::Debug for FieldTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldTable({:?})", self.0.desc)
    }
}

impl FieldTable {
    pub fn new(desc: &FieldDesc, budget: u64) -> Result<Self> {
        let q = match desc.size() {
            Some(q) if q <= budget && q <= u32::MAX as u64 / 2 => q as u32,
            _ => {
                let needed = BigUint::from(desc.p()).pow(desc.m() as u32);
                return Err(Error::budget("field table", needed, budget));
            }
        };
        let p = desc.p() as u32;
        let n = (q - 1) as usize;
        let g = desc.primitive_element()?;
        let index = |e: &FieldElem| e.coeffs.iter().rev().fold(0u64, |acc, &c| acc * p as u64 + c) as u32;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![NONE; q as usize];
        let mut x = desc.one();
        for (k, slot) in exp.iter_mut().take(n).enumerate() {
            let idx = index(&x);
            *slot = idx;
            log[idx as usize] = k as u32;
            x = desc.mul(&x, &g);
        }
        exp.copy_within(0..n, n);
        let mut zech = vec![NONE; n.max(1)];
        for k in 0..n {
            let e = exp[k];
            let d0 = e % p;
            let s = e - d0 + (d0 + 1) % p;
            zech[k] = log[s as usize];
        }
        let log_neg_one = if p == 2 { 0 } else { (n / 2) as u32 };
        Ok(FieldTable(Arc::new(TableInner { desc: desc.clone(), p, m: desc.m(), q, exp, log, zech, log_neg_one })))
    }

    pub fn desc(&self) -> &FieldDesc {
        &self.0.desc
    }

    pub fn size(&self) -> u32 {
        self.0.q
    }

    pub fn to_elem(&self, a: u32) -> FieldElem {
        self.0.desc.element(a as u64)
    }

    pub fn from_elem(&self, e: &FieldElem) -> u32 {
        e.coeffs.iter().rev().fold(0u64, |acc, &c| acc * self.0.p as u64 + c) as u32
    }

    /// Discrete log to the table's generator; `None` for zero.
    #[inline]
    pub fn log(&self, a: u32) -> Option<u32> {
        let l = self.0.log[a as usize];
        (l != NONE).then_some(l)
    }

    /// g^k for the table's generator.
    #[inline]
    pub fn exp(&self, k: u64) -> u32 {
        self.0.exp[(k % (self.0.q as u64 - 1)) as usize]
    }

    pub fn generator(&self) -> u32 {
        self.exp(1)
    }

    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.0.q
    }
}

impl FiniteField for FieldTable {
    type Elem = u32;

    fn characteristic(&self) -> u64 {
        self.0.p as u64
    }
    fn degree(&self) -> usize {
        self.0.m
    }
    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let t = &*self.0;
        if *a == 0 {
            return *b;
        }
        if *b == 0 {
            return *a;
        }
        let n = t.q - 1;
        let la = t.log[*a as usize];
        let lb = t.log[*b as usize];
        let d = if lb >= la { lb - la } else { lb + n - la };
        let z = t.zech[d as usize];
        if z == NONE {
            0
        } else {
            t.exp[(la + z) as usize]
        }
    }
    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            return 0;
        }
        let t = &*self.0;
        t.exp[(t.log[*a as usize] + t.log_neg_one) as usize]
    }
    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        if *a == 0 || *b == 0 {
            return 0;
        }
        let t = &*self.0;
        t.exp[(t.log[*a as usize] + t.log[*b as usize]) as usize]
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        let t = &*self.0;
        let n = t.q - 1;
        Some(t.exp[((n - t.log[*a as usize]) % n) as usize])
    }
    fn coeffs(&self, a: &u32) -> Vec<u64> {
        let p = self.0.p;
        let mut x = *a;
        (0..self.0.m)
            .map(|_| {
                let d = x % p;
                x /= p;
                d as u64
            })
            .collect()
    }
    fn from_coeffs(&self, c: &[u64]) -> u32 {
        let p = self.0.p as u64;
        if c.len() > self.0.m {
            let e = self.0.desc.from_coeffs(c);
            return self.from_elem(&e);
        }
        c.iter().rev().fold(0u64, |acc, &x| acc * p + x % p) as u32
    }
    fn from_u64(&self, n: u64) -> u32 {
        (n % self.0.p as u64) as u32
    }
    fn element(&self, idx: u64) -> u32 {
        (idx % self.0.q as u64) as u32
    }
    fn prime_value(&self, a: &u32) -> Option<u64> {
        (*a < self.0.p).then_some(*a as u64)
    }
    fn pow_u64(&self, a: &u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        match self.log(*a) {
            None => 0,
            Some(l) => {
                let n = (self.0.q - 1) as u64;
                self.0.exp[((l as u64 * (e % n)) % n) as usize]
            }
        }
    }
    fn pow(&self, a: &u32, e: &BigUint) -> u32 {
        if e.is_zero() {
            return 1;
        }
        if *a == 0 {
            return 0;
        }
        let n = BigUint::from(self.0.q - 1);
        self.pow_u64(a, (e % &n).to_u64().unwrap_or(0))
    }
    fn frobenius(&self, a: &u32, k: usize) -> u32 {
        let e = (self.0.p as u64).pow((k % self.0.m) as u32);
        self.pow_u64(a, e)
    }
    fn mult_order(&self, a: &u32) -> Result<u64> {
        let l = self.log(*a).ok_or(Error::ZeroElement)? as u64;
        let n = (self.0.q - 1) as u64;
        Ok(n / arith::gcd(l, n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn deterministic_moduli() {
        assert_eq!(make_field(3, 1).unwrap().modulus(), &[0, 1]);
        assert_eq!(make_field(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(make_field(2, 4).unwrap().modulus(), &[1, 1, 0, 0, 1]);
        assert_eq!(make_field(2, 4).unwrap().modulus(), make_field(2, 4).unwrap().modulus());
        assert_eq!(make_field(4, 2).unwrap_err(), Error::CompositeModulusBase(4));
        assert_eq!(make_field(3, 0).unwrap_err(), Error::DegreeZero);
    }

    #[test]
    fn small_arithmetic() {
        let f19 = make_field(19, 1).unwrap();
        let two = f19.from_u64(2);
        assert_eq!(&two * &f19.from_u64(10), f19.one());
        assert_eq!(two.mult_order().unwrap(), 18);
        assert_eq!(f19.from_u64(8).mult_order().unwrap(), 6);
        assert_eq!(f19.one().mult_order().unwrap(), 1);
        assert_eq!(f19.one().inv().unwrap(), f19.one());
        assert_eq!(f19.zero().inv().unwrap_err(), Error::DivisionByZero);
        assert_eq!(f19.zero().mult_order().unwrap_err(), Error::ZeroElement);

        let f9 = make_field(3, 2).unwrap();
        let i = f9.gen_x();
        assert_eq!(&i * &i, f9.from_u64(2));
        assert_eq!(i.frobenius(1), f9.elem(&[0, 2]).unwrap());
        assert_eq!(format!("{}", f9.elem(&[2, 1]).unwrap()), "[2,1]");
        assert_eq!(serde_json::to_string(&f9).unwrap(), r#"{"p":3,"m":2,"modulus":[1,0,1]}"#);
        assert_eq!(serde_json::to_string(&f9.elem(&[2, 1]).unwrap()).unwrap(), "[2,1]");
        assert_eq!(f9.from_u64(1).try_add(&f19.one()).unwrap_err(), Error::FieldMismatch);
    }

    #[test]
    fn enumeration() {
        let f2 = make_field(2, 1).unwrap();
        let els: Vec<_> = enumerate_elements(&f2, DEFAULT_BUDGET).unwrap().collect();
        assert_eq!(els, vec![f2.zero(), f2.one()]);
        assert_eq!(enumerate_elements(&make_field(3, 2).unwrap(), DEFAULT_BUDGET).unwrap().count(), 9);
        assert_eq!(enumerate_elements(&make_field(3, 6).unwrap(), DEFAULT_BUDGET).unwrap().count(), 729);
        assert!(enumerate_elements(&make_field(2, 21).unwrap(), DEFAULT_BUDGET).err().unwrap().is_budget());
    }

    #[test]
    fn fermat_and_order_exhaustive() {
        for (p, m) in [(2, 1), (2, 6), (2, 12), (3, 5), (5, 4), (7, 3), (13, 3), (61, 2)] {
            let f = make_field(p, m).unwrap();
            let q = f.size().unwrap();
            for x in enumerate_elements(&f, DEFAULT_BUDGET).unwrap().skip(1) {
                assert_eq!(f.pow_u64(&x, q - 1), f.one());
                assert_eq!((q - 1) % x.mult_order().unwrap(), 0);
            }
        }
    }

    #[test]
    fn subfield_criterion() {
        for (p, m) in [(2, 6), (3, 4), (2, 8)] {
            let f = make_field(p, m).unwrap();
            let t = FieldTable::new(&f, DEFAULT_BUDGET).unwrap();
            for d in 1..=m {
                if m % d != 0 {
                    continue;
                }
                let fixed = t.elements().filter(|x| t.frobenius(x, d) == *x).count() as u64;
                assert_eq!(fixed, p.pow(d as u32), "p={p} m={m} d={d}");
                // the same elements are those of order dividing p^d - 1
                let by_order =
                    t.elements().filter(|x| *x == 0 || (p.pow(d as u32) - 1) % t.mult_order(x).unwrap() == 0).count()
                        as u64;
                assert_eq!(by_order, fixed);
            }
        }
    }

    #[test]
    fn table_matches_vector_backend() {
        for (p, m) in [(2, 5), (3, 3), (5, 2), (7, 1), (3, 4)] {
            let f = make_field(p, m).unwrap();
            let t = FieldTable::new(&f, DEFAULT_BUDGET).unwrap();
            for a in t.elements() {
                let ea = t.to_elem(a);
                assert_eq!(t.from_elem(&ea), a);
                assert_eq!(t.to_elem(t.neg(&a)), -&ea);
                assert_eq!(t.to_elem(t.frobenius(&a, 1)), ea.frobenius(1));
                if a != 0 {
                    assert_eq!(t.to_elem(t.inv(&a).unwrap()), ea.inv().unwrap());
                    assert_eq!(t.mult_order(&a).unwrap(), ea.mult_order().unwrap());
                }
                for b in t.elements().step_by(3) {
                    let eb = t.to_elem(b);
                    assert_eq!(t.to_elem(t.add(&a, &b)), &ea + &eb);
                    assert_eq!(t.to_elem(t.sub(&a, &b)), &ea - &eb);
                    assert_eq!(t.to_elem(t.mul(&a, &b)), &ea * &eb);
                }
            }
        }
    }

    #[test]
    fn square_roots() {
        for (p, m) in [(3, 2), (5, 2), (19, 2), (2, 3), (13, 1), (17, 2)] {
            let f = make_field(p, m).unwrap();
            let mut squares = 0;
            for x in enumerate_elements(&f, DEFAULT_BUDGET).unwrap() {
                match sqrt(&f, &x) {
                    Some(r) => {
                        assert_eq!(&r * &r, x);
                        squares += 1;
                    }
                    None => assert!(!is_square(&f, &x)),
                }
            }
            let q = f.size().unwrap();
            assert_eq!(squares, if p == 2 { q } else { q.div_ceil(2) });
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]
        #[test]
        fn frobenius_is_automorphism(a in proptest::collection::vec(0u64..5, 4), b in proptest::collection::vec(0u64..5, 4), k in 0usize..6) {
            let f = make_field(5, 4).unwrap();
            let (x, y) = (f.elem(&a).unwrap(), f.elem(&b).unwrap());
            prop_assert_eq!((&x + &y).frobenius(k), &x.frobenius(k) + &y.frobenius(k));
            prop_assert_eq!((&x * &y).frobenius(k), &x.frobenius(k) * &y.frobenius(k));
            prop_assert_eq!(x.frobenius(4), x.clone());
        }

        #[test]
        fn field_axioms(a in proptest::collection::vec(0u64..7, 3), b in proptest::collection::vec(0u64..7, 3), c in proptest::collection::vec(0u64..7, 3)) {
            let f = make_field(7, 3).unwrap();
            let (x, y, z) = (f.elem(&a).unwrap(), f.elem(&b).unwrap(), f.elem(&c).unwrap());
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            if !x.is_zero() {
                prop_assert_eq!(&x * &x.inv().unwrap(), f.one());
            }
        }
    }
}
