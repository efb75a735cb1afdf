//! Two-dimensional F_p-subspaces of F_(p^m): canonical forms, dilation orbits,
//! the ν-value sets Z(m) and Z°(m), pencils, and the root-product oracle for f_(m,p).

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::dickson;
use crate::error::{Error, Result};
use crate::fmp;
use crate::gf::{FieldDesc, FieldElem, FieldTable, FiniteField, PrimeField};
use crate::upoly::DensePoly;

/// A plane given by its reduced row-echelon basis in F_p-coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Plane {
    pub u: FieldElem,
    pub v: FieldElem,
}

impl Serialize for Plane {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(2))?;
        seq.serialize_element(self.u.coeffs())?;
        seq.serialize_element(self.v.coeffs())?;
        seq.end()
    }
}

impl Plane {
    /// The plane spanned by `a` and `b`, or `DependentPair`.
    pub fn span(a: &FieldElem, b: &FieldElem) -> Result<Plane> {
        if a.field() != b.field() {
            return Err(Error::FieldMismatch);
        }
        let f = a.field();
        let (u, v) = rref(f.p(), a.coeffs(), b.coeffs()).ok_or(Error::DependentPair)?;
        Ok(Plane { u: f.from_coeffs(&u), v: f.from_coeffs(&v) })
    }

    /// ν of the plane (any basis gives the same value).
    pub fn nu(&self) -> FieldElem {
        dickson::nu(self.u.field(), &self.u, &self.v).expect("canonical basis is independent")
    }
}

/// Reduced row-echelon form of the 2×m matrix with rows `a`, `b`.
fn rref(p: u64, a: &[u64], b: &[u64]) -> Option<(Vec<u64>, Vec<u64>)> {
    let m = a.len().max(b.len());
    let pad = |r: &[u64]| {
        let mut v = r.to_vec();
        v.resize(m, 0);
        v
    };
    let mut rows = [pad(a), pad(b)];
    let mut r = 0;
    for col in 0..m {
        let Some(k) = (r..2).find(|&k| rows[k][col] != 0) else { continue };
        rows.swap(r, k);
        let inv = crate::arith::inv_mod(rows[r][col], p).expect("p is prime");
        rows[r].iter_mut().for_each(|x| *x = *x * inv % p);
        let other = 1 - r;
        let c = rows[other][col];
        if c != 0 {
            let pivot = rows[r].clone();
            for (x, y) in rows[other].iter_mut().zip(&pivot) {
                *x = (*x + (p - c) * y % p) % p;
            }
        }
        r += 1;
        if r == 2 {
            let [u, v] = rows;
            return Some((u, v));
        }
    }
    None
}

/// Number of planes in F_(p^m): (p^m - 1)(p^m - p) / ((p^2 - 1)(p^2 - p)).
pub fn plane_count(p: u64, m: usize) -> BigUint {
    if m < 2 {
        return BigUint::ZERO;
    }
    let q = BigUint::from(p).pow(m as u32);
    let num = (&q - 1u32) * (&q - p);
    num / BigUint::from((p * p - 1) * (p * p - p))
}

/// Number of dilation orbits: (p^(m-1) - 1)/(p^2 - 1) for odd m,
/// 1 + (p^(m-1) - p)/(p^2 - 1) for even m.
pub fn orbit_formula(p: u64, m: usize) -> BigUint {
    if m < 2 {
        return BigUint::ZERO;
    }
    let t = BigUint::from(p).pow(m as u32 - 1);
    let d = BigUint::from(p * p - 1);
    if m % 2 == 1 {
        (t - 1u32) / d
    } else {
        BigUint::one() + (t - p) / d
    }
}

/// Planes of one field over its log table, keyed by canonical index pairs.
struct Space {
    table: FieldTable,
    p: u64,
    m: usize,
}

type Key = (u32, u32);

impl Space {
    fn new(field: &FieldDesc, budget: u64) -> Result<Self> {
        if field.m() < 2 {
            return Err(Error::DegreeTooSmall(field.m()));
        }
        let table = FieldTable::new(field, budget)?;
        Ok(Space { table, p: field.p(), m: field.m() })
    }

    fn check_plane_budget(&self, budget: u64) -> Result<u64> {
        let n = plane_count(self.p, self.m);
        match n.to_u64() {
            Some(k) if k <= budget => Ok(k),
            _ => Err(Error::budget("planes", n, budget)),
        }
    }

    fn key(&self, a: u32, b: u32) -> Option<Key> {
        let t = &self.table;
        let (u, v) = rref(self.p, &t.coeffs(&a), &t.coeffs(&b))?;
        Some((t.from_coeffs(&u), t.from_coeffs(&v)))
    }

    fn plane(&self, k: Key) -> Plane {
        Plane { u: self.table.to_elem(k.0), v: self.table.to_elem(k.1) }
    }

    /// Every plane, generated directly in echelon form: pivots c1 < c2, free
    /// entries to the right of each pivot except in the other pivot column.
    fn all(&self) -> Vec<Key> {
        let (p, m) = (self.p, self.m);
        let t = &self.table;
        let mut out = Vec::new();
        for c1 in 0..m {
            for c2 in c1 + 1..m {
                let free1: Vec<usize> = (c1 + 1..m).filter(|&j| j != c2).collect();
                let free2: Vec<usize> = (c2 + 1..m).collect();
                let n1 = p.pow(free1.len() as u32);
                let n2 = p.pow(free2.len() as u32);
                for i in 0..n1 {
                    let mut u = vec![0u64; m];
                    u[c1] = 1;
                    fill(&mut u, &free1, i, p);
                    let ui = t.from_coeffs(&u);
                    for j in 0..n2 {
                        let mut v = vec![0u64; m];
                        v[c2] = 1;
                        fill(&mut v, &free2, j, p);
                        out.push((ui, t.from_coeffs(&v)));
                    }
                }
            }
        }
        out
    }

    fn dilate(&self, k: Key, g: u32) -> Key {
        let f = &self.table;
        self.key(f.mul(&k.0, &g), f.mul(&k.1, &g)).expect("dilation preserves rank")
    }

    fn nu(&self, k: Key) -> u32 {
        dickson::nu(&self.table, &k.0, &k.1).expect("independent basis")
    }

    fn outside_prime_field(&self) -> impl Iterator<Item = u32> + '_ {
        self.table.elements().filter(|&x| x >= self.p as u32)
    }
}

fn fill(row: &mut [u64], cols: &[usize], mut idx: u64, p: u64) {
    for &c in cols {
        row[c] = idx % p;
        idx /= p;
    }
}

/// All planes of the field in canonical form.
pub fn enumerate_planes(field: &FieldDesc, budget: u64) -> Result<Vec<Plane>> {
    let sp = Space::new(field, budget)?;
    sp.check_plane_budget(budget)?;
    Ok(sp.all().into_iter().map(|k| sp.plane(k)).collect())
}

/// Dilation-orbit statistics from an explicit enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    pub p: u64,
    pub m: usize,
    pub planes: u64,
    pub orbits: u64,
    pub formula: u64,
    /// Orbit size -> number of orbits of that size.
    pub orbit_sizes: BTreeMap<u64, u64>,
}

/// Partitions the planes into orbits under multiplication by F*. The group is
/// cyclic, so the orbits are the cycles of multiplication by a generator.
pub fn orbit_count(p: u64, m: usize, budget: u64) -> Result<OrbitReport> {
    let field = crate::gf::make_field(p, m)?;
    let sp = Space::new(&field, budget)?;
    let planes = sp.check_plane_budget(budget)?;
    let keys = sp.all();
    let index: HashMap<Key, usize> = keys.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let g = sp.table.generator();
    let mut seen = vec![false; keys.len()];
    let mut sizes = BTreeMap::new();
    for start in 0..keys.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0u64;
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            len += 1;
            cur = index[&sp.dilate(keys[cur], g)];
        }
        *sizes.entry(len).or_insert(0) += 1;
    }
    let orbits = sizes.values().sum();
    let formula = orbit_formula(p, m).to_u64().expect("bounded by the plane count");
    Ok(OrbitReport { p, m, planes, orbits, formula, orbit_sizes: sizes })
}

/// Z(m) and Z°(m) = Z(m) \ {0}, ordered by element index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZValues {
    pub z: Vec<FieldElem>,
    pub z_circ: Vec<FieldElem>,
    pub contains_zero: bool,
}

fn z_from_indices(table: &FieldTable, mut set: Vec<u32>) -> ZValues {
    set.sort_unstable();
    set.dedup();
    let contains_zero = set.first() == Some(&0);
    let z: Vec<FieldElem> = set.iter().map(|&a| table.to_elem(a)).collect();
    let z_circ = z.iter().filter(|e| !e.is_zero()).cloned().collect();
    ZValues { z, z_circ, contains_zero }
}

/// ν over the planes through F_p: every orbit has such a representative.
pub fn z_values(field: &FieldDesc, budget: u64) -> Result<ZValues> {
    let sp = Space::new(field, budget)?;
    let one = sp.table.one();
    let vals: Vec<u32> =
        sp.outside_prime_field().map(|x| dickson::nu(&sp.table, &x, &one).expect("x outside F_p")).collect();
    Ok(z_from_indices(&sp.table, vals))
}

/// ν over every plane of the field.
pub fn z_values_slow(field: &FieldDesc, budget: u64) -> Result<ZValues> {
    let sp = Space::new(field, budget)?;
    sp.check_plane_budget(budget)?;
    let vals: Vec<u32> = sp.all().into_iter().map(|k| sp.nu(k)).collect();
    Ok(z_from_indices(&sp.table, vals))
}

/// The planes through F_p sharing ν = z.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Pencil {
    pub z: u64,
    pub planes: Vec<Plane>,
    /// Points of the union outside F_p.
    pub points: u64,
}

/// Pencil of z ∈ F_p in a field where f_(m,p)(z) = 0. For z = 0 the pencil
/// collapses to the single plane F_(p^2), present when m is even.
pub fn pencil(z: u64, field: &FieldDesc, budget: u64) -> Result<Pencil> {
    let sp = Space::new(field, budget)?;
    let (p, m) = (sp.p, sp.m);
    let z = z % p;
    let present = if z == 0 { m % 2 == 0 } else { fmp::eval_fp_residue(m as u64, p, z) == 0 };
    if !present {
        return Err(Error::WrongField { m });
    }
    let target = sp.table.from_u64(z);
    let one = sp.table.one();
    let mut keys: Vec<Key> = Vec::new();
    let mut seen = HashSet::new();
    let mut points = 0;
    for x in sp.outside_prime_field() {
        if dickson::nu(&sp.table, &x, &one)? != target {
            continue;
        }
        points += 1;
        let k = sp.key(one, x).expect("x outside F_p");
        if seen.insert(k) {
            keys.push(k);
        }
    }
    let expected = if z == 0 { 1 } else { p as usize + 1 };
    if keys.len() != expected {
        return Err(Error::InternalConsistency(format!(
            "pencil of {z} has {} planes, expected {expected}",
            keys.len()
        )));
    }
    keys.sort_unstable();
    Ok(Pencil { z, planes: keys.into_iter().map(|k| sp.plane(k)).collect(), points })
}

fn to_prime_poly(poly: &DensePoly<FieldTable>, pf: &PrimeField, degree: usize) -> Result<DensePoly<PrimeField>> {
    let f = poly.field();
    let c = poly
        .coeffs()
        .iter()
        .map(|a| f.prime_value(a).ok_or(Error::CoefficientNotInPrimeField { degree }))
        .collect::<Result<Vec<u64>>>()?;
    Ok(DensePoly::from_u64s(*pf, &c))
}

fn linear_product(table: &FieldTable, roots: &[u32]) -> DensePoly<FieldTable> {
    let mut acc = DensePoly::one(table.clone());
    for r in roots {
        let lin = DensePoly::new(table.clone(), vec![table.neg(r), table.one()]);
        acc = acc.mul(&lin);
    }
    acc
}

/// ∏_(z ∈ Z°(m)) (X - z), built from the minimal polynomials of the
/// Frobenius orbits of Z°(m). Each orbit polynomial must land in F_p[X].
pub fn oracle_fmp(field: &FieldDesc, budget: u64) -> Result<DensePoly<PrimeField>> {
    let zs = z_values(field, budget)?;
    let table = FieldTable::new(field, budget)?;
    let pf = PrimeField::new(field.p())?;
    let mut left: HashSet<u32> = zs.z_circ.iter().map(|e| table.from_elem(e)).collect();
    let mut roots: Vec<u32> = left.iter().copied().collect();
    roots.sort_unstable();
    let mut acc = DensePoly::one(pf);
    for z in roots {
        if !left.contains(&z) {
            continue;
        }
        let mut orbit = vec![z];
        let mut w = table.frobenius(&z, 1);
        while w != z {
            orbit.push(w);
            w = table.frobenius(&w, 1);
        }
        for w in &orbit {
            left.remove(w);
        }
        let min_poly = to_prime_poly(&linear_product(&table, &orbit), &pf, orbit.len())?;
        acc = acc.mul(&min_poly);
    }
    Ok(acc)
}

/// The same product taken linear factor by linear factor over F_(p^m).
pub fn oracle_fmp_direct(field: &FieldDesc, budget: u64) -> Result<DensePoly<PrimeField>> {
    let zs = z_values(field, budget)?;
    let table = FieldTable::new(field, budget)?;
    let pf = PrimeField::new(field.p())?;
    let roots: Vec<u32> = zs.z_circ.iter().map(|e| table.from_elem(e)).collect();
    to_prime_poly(&linear_product(&table, &roots), &pf, roots.len())
}
