//! The trinomials γ_z, β_z, δ_z and γ̄_z, and the factorization-degree
//! pattern of X^(p+1) - aX - b.

use std::collections::HashSet;

use serde::Serialize;

use crate::appearance::{alpha_via_multiplicative_order, alpha_zp, discriminant_symbol};
use crate::arith;
use crate::dickson;
use crate::error::{Error, Result};
use crate::gf::{make_field, FieldTable, FiniteField, PrimeField};
use crate::planes::Plane;
use crate::upoly::{DegreeMultiset, DensePoly};

type Poly = DensePoly<PrimeField>;

fn field(p: u64) -> Result<PrimeField> {
    PrimeField::new(p)
}

/// γ_z = X^(p+1) + (1+z)X^p + X + 1.
pub fn gamma(z: u64, p: u64) -> Result<Poly> {
    let f = field(p)?;
    let mut c = vec![0u64; p as usize + 2];
    c[0] = 1;
    c[1] = 1;
    c[p as usize] = (1 + z % p) % p;
    c[p as usize + 1] = 1;
    Ok(DensePoly::from_u64s(f, &c))
}

/// β_z = γ_z(X - z - 1) = X^(p+1) - zX - z.
pub fn beta(z: u64, p: u64) -> Result<Poly> {
    let f = field(p)?;
    let z = z % p;
    let mut c = vec![0u64; p as usize + 2];
    c[0] = (p - z) % p;
    c[1] = (p - z) % p;
    c[p as usize + 1] = 1;
    Ok(DensePoly::from_u64s(f, &c))
}

/// δ_z = z^(-2) β_z(zX) = X^(p+1) - X - z^(-1).
pub fn delta(z: u64, p: u64) -> Result<Poly> {
    let f = field(p)?;
    let zi = arith::inv_mod(z, p).ok_or(Error::ZeroZ)?;
    let mut c = vec![0u64; p as usize + 2];
    c[0] = (p - zi) % p;
    c[1] = p - 1;
    c[p as usize + 1] = 1;
    Ok(DensePoly::from_u64s(f, &c))
}

/// X^2 + (z+2)X + 1.
fn quadratic(z: u64, p: u64) -> Result<Poly> {
    Ok(DensePoly::from_u64s(field(p)?, &[1, (z % p + 2) % p, 1]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Branch {
    #[serde(rename = "nonsquare")]
    Nonsquare,
    #[serde(rename = "nonzero-square")]
    NonzeroSquare,
    #[serde(rename = "zeta=-1/4")]
    MinusQuarter,
    #[serde(rename = "zeta=0")]
    Zero,
}

/// Branch for z = ζ^(-1): by z^2 + 4z, with z = -4 and z = 0 separate.
fn branch_of_z(z: u64, p: u64) -> Branch {
    let z = z % p;
    if z == 0 {
        Branch::Zero
    } else if (z + 4).is_multiple_of(p) {
        Branch::MinusQuarter
    } else if discriminant_symbol(z, p) == 1 {
        Branch::NonzeroSquare
    } else {
        Branch::Nonsquare
    }
}

/// γ_z divided by its linear part.
pub fn gamma_bar(z: u64, p: u64) -> Result<Poly> {
    let g = gamma(z, p)?;
    match branch_of_z(z, p) {
        Branch::Zero => Ok(DensePoly::one(field(p)?)),
        Branch::MinusQuarter => g.div_exact(&DensePoly::from_u64s(field(p)?, &[p - 1, 1])),
        Branch::NonzeroSquare => g.div_exact(&quadratic(z, p)?),
        Branch::Nonsquare => Ok(g),
    }
}

/// Roots in F_p of X^2 + (z+2)X + 1, ascending.
pub fn linear_roots(z: u64, p: u64) -> Result<Vec<u64>> {
    field(p)?;
    let z = z % p;
    let b = (z + 2) % p;
    let mut roots: Vec<u64> = if p == 2 {
        (0..2).filter(|&x| (x * x + b * x + 1).is_multiple_of(2)).collect()
    } else {
        let d = (z * z + 4 * z) % p;
        match arith::sqrt_mod(d, p) {
            None => Vec::new(),
            Some(s) => {
                let half = p.div_ceil(2);
                let nb = (p - b) % p;
                vec![arith::mul_mod((nb + s) % p, half, p), arith::mul_mod((nb + p - s) % p, half, p)]
            }
        }
    };
    roots.sort_unstable();
    roots.dedup();
    Ok(roots)
}

/// The inputs of X^(p+1) - aX - b in normalized form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrinomialCase {
    pub p: u64,
    pub a: u64,
    pub b: u64,
    /// ζ = b/a^2.
    pub zeta: u64,
    /// ζ^(-1), absent when ζ = 0.
    pub z: Option<u64>,
    pub branch: Branch,
}

pub fn trinomial_case(a: u64, b: u64, p: u64) -> Result<TrinomialCase> {
    field(p)?;
    let (a, b) = (a % p, b % p);
    let ai = arith::inv_mod(a, p).ok_or(Error::ZeroA)?;
    let zeta = arith::mul_mod(b, arith::mul_mod(ai, ai, p), p);
    let z = arith::inv_mod(zeta, p);
    let branch = z.map_or(Branch::Zero, |z| branch_of_z(z, p));
    Ok(TrinomialCase { p, a, b, zeta, z, branch })
}

fn trinomial(a: u64, b: u64, p: u64) -> Result<Poly> {
    let mut c = vec![0u64; p as usize + 2];
    c[0] = (p - b % p) % p;
    c[1] = (p - a % p) % p;
    c[p as usize + 1] = 1;
    Ok(DensePoly::from_u64s(field(p)?, &c))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Prediction {
    #[serde(flatten)]
    pub case: TrinomialCase,
    /// Multiplicative order of r; absent in the ζ = 0 and ζ = -1/4 branches.
    pub m: Option<u64>,
    pub predicted: DegreeMultiset,
}

fn forced_count(total: u64, m: u64) -> Result<u64> {
    if m < 3 || !total.is_multiple_of(m) {
        return Err(Error::InternalConsistency(format!(
            "order {m} does not give whole factors of total degree {total}"
        )));
    }
    Ok(total / m)
}

/// Degrees of the irreducible factors of X^(p+1) - aX - b from the order of a
/// root r of ζX^2 + (2ζ+1)X + ζ, for odd p.
pub fn predict_degrees(a: u64, b: u64, p: u64) -> Result<Prediction> {
    if p == 2 {
        return Err(Error::EvenCharacteristic);
    }
    let case = trinomial_case(a, b, p)?;
    let (m, predicted) = match (case.branch, case.z) {
        (Branch::Zero, _) => (None, DegreeMultiset::from_pairs(&[(1, p + 1)])),
        (Branch::MinusQuarter, _) => (None, DegreeMultiset::from_pairs(&[(1, 1), (p, 1)])),
        (Branch::Nonsquare, Some(z)) => {
            let m = alpha_via_multiplicative_order(z, p)?;
            (Some(m), DegreeMultiset::from_pairs(&[(m, forced_count(p + 1, m)?)]))
        }
        (Branch::NonzeroSquare, Some(z)) => {
            let m = alpha_via_multiplicative_order(z, p)?;
            (Some(m), DegreeMultiset::from_pairs(&[(1, 2), (m, forced_count(p - 1, m)?)]))
        }
        _ => unreachable!("ζ != 0 has an inverse"),
    };
    Ok(Prediction { case, m, predicted })
}

/// Largest p whose trinomials are factored for verification.
pub const VERIFY_MAX_P: u64 = 1000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    #[serde(flatten)]
    pub prediction: Prediction,
    pub actual: DegreeMultiset,
    #[serde(rename = "match")]
    pub matched: bool,
}

/// Prediction against the distinct-degree factorization (with multiplicity).
pub fn verify_degrees(a: u64, b: u64, p: u64) -> Result<Verification> {
    if p > VERIFY_MAX_P {
        return Err(Error::budget("trinomial factorization prime", p, VERIFY_MAX_P));
    }
    let prediction = predict_degrees(a, b, p)?;
    let actual = degree_multiset(&trinomial(a, b, p)?)?;
    let matched = actual == prediction.predicted;
    Ok(Verification { prediction, actual, matched })
}

/// Degrees of all irreducible factors, counted with multiplicity.
pub fn degree_multiset(f: &Poly) -> Result<DegreeMultiset> {
    let mut out = DegreeMultiset::default();
    for (part, mult) in f.squarefree_decomposition()? {
        for (deg, count) in part.distinct_degree_factor()?.iter() {
            out.insert(*deg, count * mult as u64);
        }
    }
    Ok(out)
}

/// Roots of γ̄_z in F_(p^m), m = α(z,p), found by sweeping the field.
fn gamma_bar_roots(z: u64, p: u64, budget: u64) -> Result<(FieldTable, u64, Vec<u32>)> {
    if z.is_multiple_of(p) {
        return Err(Error::ZeroZ);
    }
    let m = alpha_zp(z, p)?.alpha;
    let table = FieldTable::new(&make_field(p, m as usize)?, budget)?;
    let gb = gamma_bar(z, p)?;
    let coeffs: Vec<u32> = gb.residues().iter().map(|&c| table.from_u64(c)).collect();
    let roots: Vec<u32> = table
        .elements()
        .filter(|x| {
            let v = coeffs.iter().rev().fold(0u32, |acc, c| table.add(&table.mul(&acc, x), c));
            v == 0
        })
        .collect();
    if roots.len() != gb.degree().unwrap_or(0) {
        return Err(Error::InternalConsistency(format!(
            "gamma_bar({z}) over F_{p} has {} roots in its splitting field, degree {:?}",
            roots.len(),
            gb.degree()
        )));
    }
    Ok((table, m, roots))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Frob2Report {
    pub p: u64,
    pub z: u64,
    pub m: u64,
    pub roots: usize,
    pub holds: bool,
}

/// I_0(t,1) = t^(p^2) at every root t of γ̄_z.
pub fn frob2_check(z: u64, p: u64, budget: u64) -> Result<Frob2Report> {
    let (table, m, roots) = gamma_bar_roots(z, p, budget)?;
    let holds = roots.iter().all(|t| dickson::i0_restricted(&table, t).ok() == Some(table.frobenius(t, 2)));
    Ok(Frob2Report { p, z: z % p, m, roots: roots.len(), holds })
}

/// Every root t of γ̄_z has ν(t,1) = z, and distinct roots span distinct
/// planes with F_p.
pub fn roots_distinct_planes_check(z: u64, p: u64, budget: u64) -> Result<bool> {
    let (table, _, roots) = gamma_bar_roots(z, p, budget)?;
    let target = table.from_u64(z);
    let one = table.one();
    let mut planes = HashSet::new();
    for t in &roots {
        if dickson::nu(&table, t, &one)? != target {
            return Ok(false);
        }
        let plane = Plane::span(&table.to_elem(one), &table.to_elem(*t))?;
        if !planes.insert(plane) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Generated {
    pub p: u64,
    pub m: u64,
    pub z: u64,
    pub poly: Poly,
}

/// An irreducible polynomial of degree m over F_p, as a factor of γ̄_z for
/// z = -r - 2 - 1/r with r of order m in F_(p^2). The seed drives the
/// randomized splitting; the smallest factor is returned, so the result does not
/// depend on it.
pub fn generate_irreducible(p: u64, m: u64, seed: u64) -> Result<Generated> {
    field(p)?;
    if m < 3 {
        return Err(Error::OrderTooSmall(m));
    }
    if !(p - 1).is_multiple_of(m) && !(p + 1).is_multiple_of(m) {
        return Err(Error::NoSuchOrder { m, p });
    }
    let f = make_field(p, 2)?;
    let g = f.primitive_element()?;
    let r = g.pow(&((p * p - 1) / m).into());
    let s = &(&(-&r) - &f.from_u64(2)) - &r.inv()?;
    let z = f.prime_value(&s).ok_or_else(|| Error::InternalConsistency(format!("sigma(r) = {s} is not in F_{p}")))?;
    let gb = gamma_bar(z, p)?;
    let poly = if gb.degree() == Some(m as usize) {
        gb
    } else {
        let mut parts = gb.equal_degree_split(m as usize, seed)?;
        parts.sort_by(|x, y| x.residues().cmp(y.residues()));
        parts.into_iter().next().ok_or_else(|| Error::InternalConsistency("empty split".into()))?
    };
    if poly.degree() != Some(m as usize) || !poly.is_irreducible()? {
        return Err(Error::InternalConsistency(format!("factor of gamma_bar({z}) is not irreducible of degree {m}")));
    }
    Ok(Generated { p, m, z, poly })
}
