//! The catalog construction families and their parameter formulas.

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::ff::{is_prime_power, FiniteField};

use super::{BitRow, DesignError, DesignParams, IncidenceStructure, DEFAULT_EXPLICIT_CAP};

/// Family tags in catalog order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FamilyKind {
    Trivial,
    Complete,
    ProjectiveGeometry,
    SylvesterHadamard,
    Paley,
    TwinPrime,
    QuarticNonzero,
    QuarticWithZero,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 8] = [
        FamilyKind::Trivial,
        FamilyKind::Complete,
        FamilyKind::ProjectiveGeometry,
        FamilyKind::SylvesterHadamard,
        FamilyKind::Paley,
        FamilyKind::TwinPrime,
        FamilyKind::QuarticNonzero,
        FamilyKind::QuarticWithZero,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::Trivial => "trivial",
            FamilyKind::Complete => "complete",
            FamilyKind::ProjectiveGeometry => "projective_geometry",
            FamilyKind::SylvesterHadamard => "sylvester_hadamard",
            FamilyKind::Paley => "paley",
            FamilyKind::TwinPrime => "twin_prime",
            FamilyKind::QuarticNonzero => "quartic_nonzero",
            FamilyKind::QuarticWithZero => "quartic_with_zero",
        }
    }

    pub fn parse(s: &str) -> Option<FamilyKind> {
        FamilyKind::ALL.iter().copied().find(|f| f.name() == s)
    }
}

/// A catalog construction together with its key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Construction {
    /// Identity incidence on v points.
    Trivial { v: u64 },
    /// All k-subsets of a v-set.
    Complete { v: u64, k: u64 },
    /// Points vs hyperplanes of PG(t-1, q).
    ProjectiveGeometry { q: u64, t: u32 },
    /// The +1 pattern of the Sylvester Hadamard matrix H_{2^t}, first row
    /// and column removed.
    SylvesterHadamard { t: u32 },
    /// Quadratic-residue difference set over GF(v), v = 3 mod 4.
    Paley { v: u64 },
    /// Twin prime power difference set over GF(q) x GF(q+2).
    TwinPrime { q: u64 },
    /// Nonzero quartic residue difference set, v = 4t^2 + 1, t odd.
    QuarticNonzero { v: u64 },
    /// Quartic residues including zero, v = 4t^2 + 9, t odd.
    QuarticWithZero { v: u64 },
}

impl Construction {
    pub fn family(&self) -> FamilyKind {
        match self {
            Construction::Trivial { .. } => FamilyKind::Trivial,
            Construction::Complete { .. } => FamilyKind::Complete,
            Construction::ProjectiveGeometry { .. } => FamilyKind::ProjectiveGeometry,
            Construction::SylvesterHadamard { .. } => FamilyKind::SylvesterHadamard,
            Construction::Paley { .. } => FamilyKind::Paley,
            Construction::TwinPrime { .. } => FamilyKind::TwinPrime,
            Construction::QuarticNonzero { .. } => FamilyKind::QuarticNonzero,
            Construction::QuarticWithZero { .. } => FamilyKind::QuarticWithZero,
        }
    }

    /// Key components as given (for display).
    pub fn key(&self) -> Vec<u64> {
        match *self {
            Construction::Trivial { v } => vec![v],
            Construction::Complete { v, k } => vec![v, k],
            Construction::ProjectiveGeometry { q, t } => vec![q, t as u64],
            Construction::SylvesterHadamard { t } => vec![t as u64],
            Construction::Paley { v } => vec![v],
            Construction::TwinPrime { q } => vec![q],
            Construction::QuarticNonzero { v } => vec![v],
            Construction::QuarticWithZero { v } => vec![v],
        }
    }

    fn bad_key(&self, reason: String) -> DesignError {
        DesignError::BadKey {
            family: self.family().name(),
            reason,
        }
    }

    /// Builds a construction from a family tag and its numeric key, e.g.
    /// (ProjectiveGeometry, [2, 3]).
    pub fn from_key(kind: FamilyKind, key: &[u64]) -> Result<Construction, DesignError> {
        let arity_err = |want: &str| DesignError::BadKey {
            family: kind.name(),
            reason: format!("expected key {want}, got {key:?}"),
        };
        let c = match (kind, key) {
            (FamilyKind::Trivial, [v]) => Construction::Trivial { v: *v },
            (FamilyKind::Complete, [v, k]) => Construction::Complete { v: *v, k: *k },
            (FamilyKind::ProjectiveGeometry, [q, t]) => Construction::ProjectiveGeometry {
                q: *q,
                t: u32::try_from(*t).map_err(|_| arity_err("q,t"))?,
            },
            (FamilyKind::SylvesterHadamard, [t]) => Construction::SylvesterHadamard {
                t: u32::try_from(*t).map_err(|_| arity_err("t"))?,
            },
            (FamilyKind::Paley, [v]) => Construction::Paley { v: *v },
            (FamilyKind::TwinPrime, [q]) => Construction::TwinPrime { q: *q },
            (FamilyKind::QuarticNonzero, [v]) => Construction::QuarticNonzero { v: *v },
            (FamilyKind::QuarticWithZero, [v]) => Construction::QuarticWithZero { v: *v },
            (FamilyKind::Trivial | FamilyKind::Paley | FamilyKind::TwinPrime, _) => {
                return Err(arity_err("one number"))
            }
            (FamilyKind::QuarticNonzero | FamilyKind::QuarticWithZero, _) => {
                return Err(arity_err("one number"))
            }
            (FamilyKind::SylvesterHadamard, _) => return Err(arity_err("t")),
            (FamilyKind::Complete | FamilyKind::ProjectiveGeometry, _) => {
                return Err(arity_err("two numbers"))
            }
        };
        c.validate()?;
        Ok(c)
    }

    /// Checks the family's parameter conditions.
    pub fn validate(&self) -> Result<(), DesignError> {
        match *self {
            Construction::Trivial { v } => {
                if v < 2 {
                    return Err(self.bad_key(format!("need v >= 2, got {v}")));
                }
            }
            Construction::Complete { v, k } => {
                if v < 2 {
                    return Err(self.bad_key(format!("need v >= 2, got {v}")));
                }
                if !(1 <= k && k <= v - 1) {
                    return Err(self.bad_key(format!("need 1 <= k <= v-1, got k={k}, v={v}")));
                }
            }
            Construction::ProjectiveGeometry { q, t } => {
                if is_prime_power(q).is_none() {
                    return Err(self.bad_key(format!("q={q} is not a prime power")));
                }
                if t < 2 {
                    return Err(self.bad_key(format!("need t >= 2, got {t}")));
                }
                if checked_pg_size(q, t).is_none() {
                    return Err(self.bad_key(format!("q^t overflows for q={q}, t={t}")));
                }
            }
            Construction::SylvesterHadamard { t } => {
                if !(2..=62).contains(&t) {
                    return Err(self.bad_key(format!("need 2 <= t <= 62, got {t}")));
                }
            }
            Construction::Paley { v } => {
                if is_prime_power(v).is_none() {
                    return Err(self.bad_key(format!("v={v} is not a prime power")));
                }
                if v % 4 != 3 {
                    return Err(self.bad_key(format!("{v} = {} mod 4, need 3 mod 4", v % 4)));
                }
            }
            Construction::TwinPrime { q } => {
                if q % 2 == 0 {
                    return Err(self.bad_key(format!("q={q} must be odd")));
                }
                if is_prime_power(q).is_none() {
                    return Err(self.bad_key(format!("q={q} is not a prime power")));
                }
                if is_prime_power(q + 2).is_none() {
                    return Err(self.bad_key(format!("q+2={} is not a prime power", q + 2)));
                }
            }
            Construction::QuarticNonzero { v } => {
                if is_prime_power(v).is_none() {
                    return Err(self.bad_key(format!("v={v} is not a prime power")));
                }
                // v = 4t^2 + 1 with t odd
                let t2 = (v - 1) / 4;
                let t = t2.isqrt();
                if v % 4 != 1 || t * t != t2 || t % 2 == 0 {
                    return Err(self.bad_key(format!("v={v} is not 4t^2+1 with odd t")));
                }
            }
            Construction::QuarticWithZero { v } => {
                if is_prime_power(v).is_none() {
                    return Err(self.bad_key(format!("v={v} is not a prime power")));
                }
                if v < 13 {
                    return Err(self.bad_key(format!("v={v} is not 4t^2+9 with odd t")));
                }
                let t2 = (v - 9) / 4;
                let t = t2.isqrt();
                if (v - 9) % 4 != 0 || t * t != t2 || t % 2 == 0 {
                    return Err(self.bad_key(format!("v={v} is not 4t^2+9 with odd t")));
                }
            }
        }
        Ok(())
    }

    /// Catalog parameters without building the structure.
    pub fn params(&self) -> Result<DesignParams, DesignError> {
        self.validate()?;
        let p = match *self {
            Construction::Trivial { v } => DesignParams {
                v,
                b: v,
                r: 1,
                k: 1,
                lambda: 0,
            },
            Construction::Complete { v, k } => {
                let b = binomial_u64(v, k)
                    .ok_or_else(|| DesignError::TooLarge(format!("C({v},{k}) exceeds u64")))?;
                let r = binomial_u64(v - 1, k - 1).unwrap();
                let lambda = if k >= 2 {
                    binomial_u64(v - 2, k - 2).unwrap()
                } else {
                    0
                };
                DesignParams { v, b, r, k, lambda }
            }
            Construction::ProjectiveGeometry { q, t } => {
                let v = checked_pg_size(q, t).unwrap();
                let k = pg_size(q, t - 1);
                let lambda = if t >= 3 { pg_size(q, t - 2) } else { 0 };
                DesignParams {
                    v,
                    b: v,
                    r: k,
                    k,
                    lambda,
                }
            }
            Construction::SylvesterHadamard { t } => {
                let v = (1u64 << t) - 1;
                hadamard_params(v)
            }
            Construction::Paley { v } => hadamard_params(v),
            Construction::TwinPrime { q } => hadamard_params(q * (q + 2)),
            Construction::QuarticNonzero { v } => DesignParams {
                v,
                b: v,
                r: (v - 1) / 4,
                k: (v - 1) / 4,
                lambda: (v - 5) / 16,
            },
            Construction::QuarticWithZero { v } => DesignParams {
                v,
                b: v,
                r: (v + 3) / 4,
                k: (v + 3) / 4,
                lambda: (v + 3) / 16,
            },
        };
        debug_assert!(p.validate().is_ok(), "catalog params invalid: {p:?}");
        Ok(p)
    }

    /// Builds the incidence structure with the default explicit-size cap.
    pub fn build(&self) -> Result<IncidenceStructure, DesignError> {
        self.build_with_cap(DEFAULT_EXPLICIT_CAP)
    }

    /// Builds the incidence structure; a complete design whose column count
    /// exceeds `cap` is returned in implicit form.
    pub fn build_with_cap(&self, cap: u64) -> Result<IncidenceStructure, DesignError> {
        self.validate()?;
        match *self {
            Construction::Trivial { v } => {
                let rows = (0..v as usize)
                    .map(|x| {
                        let mut row = BitRow::new(v as usize);
                        row.set(x);
                        row
                    })
                    .collect();
                Ok(IncidenceStructure::from_rows(v, rows))
            }
            Construction::Complete { v, k } => match binomial_u64(v, k) {
                Some(b) if b <= cap => Ok(build_complete(v, k, b)),
                _ => Ok(IncidenceStructure::ImplicitComplete { v, k }),
            },
            Construction::ProjectiveGeometry { q, t } => build_projective_geometry(q, t),
            Construction::SylvesterHadamard { t } => {
                let v = ((1u64 << t) - 1) as usize;
                let rows = (1..=v)
                    .map(|x| {
                        let mut row = BitRow::new(v);
                        for y in 1..=v {
                            if (x & y).count_ones() % 2 == 0 {
                                row.set(y - 1);
                            }
                        }
                        row
                    })
                    .collect();
                Ok(IncidenceStructure::from_rows(v as u64, rows))
            }
            Construction::Paley { v } => {
                let field = FiniteField::new(v).map_err(|e| self.bad_key(e.to_string()))?;
                let dset: Vec<u64> = field
                    .power_residues(2, false)
                    .iter()
                    .map(|e| field.index_of(e))
                    .collect();
                Ok(build_difference_set(v, &dset, |x, d| {
                    let a = field.element_from_index(x).unwrap();
                    let b = field.element_from_index(d).unwrap();
                    field.index_of(&field.add(&a, &b).unwrap())
                }))
            }
            Construction::TwinPrime { q } => build_twin_prime(q, self),
            Construction::QuarticNonzero { v } => {
                let field = FiniteField::new(v).map_err(|e| self.bad_key(e.to_string()))?;
                let dset: Vec<u64> = field
                    .power_residues(4, false)
                    .iter()
                    .map(|e| field.index_of(e))
                    .collect();
                Ok(build_difference_set(v, &dset, |x, d| {
                    let a = field.element_from_index(x).unwrap();
                    let b = field.element_from_index(d).unwrap();
                    field.index_of(&field.add(&a, &b).unwrap())
                }))
            }
            Construction::QuarticWithZero { v } => {
                let field = FiniteField::new(v).map_err(|e| self.bad_key(e.to_string()))?;
                let dset: Vec<u64> = field
                    .power_residues(4, true)
                    .iter()
                    .map(|e| field.index_of(e))
                    .collect();
                Ok(build_difference_set(v, &dset, |x, d| {
                    let a = field.element_from_index(x).unwrap();
                    let b = field.element_from_index(d).unwrap();
                    field.index_of(&field.add(&a, &b).unwrap())
                }))
            }
        }
    }
}

/// Symmetric Hadamard-type parameters: k = (v-1)/2, lambda = (v-3)/4.
fn hadamard_params(v: u64) -> DesignParams {
    DesignParams {
        v,
        b: v,
        r: (v - 1) / 2,
        k: (v - 1) / 2,
        lambda: (v - 3) / 4,
    }
}

/// (q^t - 1)/(q - 1), or None on overflow.
fn checked_pg_size(q: u64, t: u32) -> Option<u64> {
    let qt = q.checked_pow(t)?;
    Some((qt - 1) / (q - 1))
}

fn pg_size(q: u64, t: u32) -> u64 {
    (q.pow(t) - 1) / (q - 1)
}

/// Exact C(n, k) in u64, or None on overflow.
pub fn binomial_u64(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc holds C(n, i); the product below is exactly divisible.
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// Exact C(n, k) as a big integer.
pub fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Rows over columns = k-subsets of [0, v) in lexicographic order.
fn build_complete(v: u64, k: u64, b: u64) -> IncidenceStructure {
    let (v, k, b) = (v as usize, k as usize, b as usize);
    let mut rows: Vec<BitRow> = (0..v).map(|_| BitRow::new(b)).collect();
    let mut subset: Vec<usize> = (0..k).collect();
    let mut y = 0usize;
    loop {
        for &x in &subset {
            rows[x].set(y);
        }
        y += 1;
        // Next k-subset in lex order.
        let mut i = k;
        loop {
            if i == 0 {
                debug_assert_eq!(y, b);
                return IncidenceStructure::from_rows(b as u64, rows);
            }
            i -= 1;
            if subset[i] < v - (k - i) {
                subset[i] += 1;
                for j in i + 1..k {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// I = {(x, y) : y - x in D} over a group with the given addition on
/// canonical indices.
fn build_difference_set(
    v: u64,
    dset: &[u64],
    add: impl Fn(u64, u64) -> u64,
) -> IncidenceStructure {
    let rows = (0..v)
        .map(|x| {
            let mut row = BitRow::new(v as usize);
            for &d in dset {
                row.set(add(x, d) as usize);
            }
            row
        })
        .collect();
    IncidenceStructure::from_rows(v, rows)
}

fn build_twin_prime(q: u64, c: &Construction) -> Result<IncidenceStructure, DesignError> {
    let f1 = FiniteField::new(q).map_err(|e| DesignError::BadKey {
        family: c.family().name(),
        reason: e.to_string(),
    })?;
    let f2 = FiniteField::new(q + 2).map_err(|e| DesignError::BadKey {
        family: c.family().name(),
        reason: e.to_string(),
    })?;
    let v = q * (q + 2);

    let sq1: Vec<bool> = residue_mask(&f1);
    let sq2: Vec<bool> = residue_mask(&f2);

    // D = {(a1, a2) : a2 = 0, or both nonzero squares, or both nonzero
    // non-squares}; elements indexed as a1 * (q+2) + a2.
    let mut dset = Vec::new();
    for a1 in 0..q {
        for a2 in 0..q + 2 {
            let in_d = if a2 == 0 {
                true
            } else if a1 == 0 {
                false
            } else {
                sq1[a1 as usize] == sq2[a2 as usize]
            };
            if in_d {
                dset.push(a1 * (q + 2) + a2);
            }
        }
    }
    debug_assert_eq!(dset.len() as u64, (v - 1) / 2);

    Ok(build_difference_set(v, &dset, |x, d| {
        let (x1, x2) = (x / (q + 2), x % (q + 2));
        let (d1, d2) = (d / (q + 2), d % (q + 2));
        let s1 = f1.index_of(
            &f1.add(
                &f1.element_from_index(x1).unwrap(),
                &f1.element_from_index(d1).unwrap(),
            )
            .unwrap(),
        );
        let s2 = f2.index_of(
            &f2.add(
                &f2.element_from_index(x2).unwrap(),
                &f2.element_from_index(d2).unwrap(),
            )
            .unwrap(),
        );
        s1 * (q + 2) + s2
    }))
}

/// mask[i] = true iff element with index i is a nonzero square.
fn residue_mask(field: &FiniteField) -> Vec<bool> {
    let mut mask = vec![false; field.order() as usize];
    for e in field.power_residues(2, false) {
        mask[field.index_of(&e) as usize] = true;
    }
    mask
}

/// Points of PG(t-1, q) as normalized vectors in lexicographic order of
/// their index tuples: coordinates over GF(q) by canonical element index,
/// first nonzero coordinate equal to 1.
fn projective_points(field: &FiniteField, t: u32) -> Vec<Vec<u64>> {
    let q = field.order();
    let t = t as usize;
    let mut points = Vec::new();
    // Lex order: more leading zeros sorts first; within a fixed lead
    // position the suffix is enumerated in lex order.
    for lead in (0..t).rev() {
        let free = t - lead - 1;
        let count = q.pow(free as u32);
        for j in 0..count {
            let mut coords = vec![0u64; t];
            coords[lead] = 1;
            let mut rest = j;
            for i in (lead + 1..t).rev() {
                coords[i] = rest % q;
                rest /= q;
            }
            points.push(coords);
        }
    }
    debug_assert!(points.windows(2).all(|w| w[0] < w[1]));
    points
}

fn build_projective_geometry(q: u64, t: u32) -> Result<IncidenceStructure, DesignError> {
    let field = FiniteField::new(q).map_err(|e| DesignError::BadKey {
        family: "projective_geometry",
        reason: e.to_string(),
    })?;
    let v = checked_pg_size(q, t).unwrap();
    if v > 2_000_000 {
        return Err(DesignError::TooLarge(format!(
            "projective geometry with v = {v} rows"
        )));
    }
    let points = projective_points(&field, t);
    debug_assert_eq!(points.len() as u64, v);

    // Prime fields work directly on indices; moderate extension fields get
    // add/mul tables over element indices.
    enum FieldOps {
        Prime(u64),
        Tables { q: usize, mul: Vec<u32>, add: Vec<u32> },
        Generic,
    }
    let ops = if field.degree() == 1 {
        FieldOps::Prime(q)
    } else if q <= 1024 {
        let n = q as usize;
        let mut mul = vec![0u32; n * n];
        let mut add = vec![0u32; n * n];
        let elems: Vec<_> = field.elements().collect();
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                mul[i * n + j] = field.index_of(&field.mul(a, b).unwrap()) as u32;
                add[i * n + j] = field.index_of(&field.add(a, b).unwrap()) as u32;
            }
        }
        FieldOps::Tables { q: n, mul, add }
    } else {
        FieldOps::Generic
    };

    let dot = |a: &[u64], b: &[u64]| -> u64 {
        match &ops {
            FieldOps::Prime(p) => {
                let mut acc = 0u64;
                for (&x, &y) in a.iter().zip(b) {
                    acc = (acc + x * y) % p;
                }
                acc
            }
            FieldOps::Tables { q, mul, add } => {
                let mut acc = 0usize;
                for (&x, &y) in a.iter().zip(b) {
                    let prod = mul[x as usize * q + y as usize] as usize;
                    acc = add[acc * q + prod] as usize;
                }
                acc as u64
            }
            FieldOps::Generic => {
                let mut acc = field.zero();
                for (&x, &y) in a.iter().zip(b) {
                    let ex = field.element_from_index(x).unwrap();
                    let ey = field.element_from_index(y).unwrap();
                    acc = field.add(&acc, &field.mul(&ex, &ey).unwrap()).unwrap();
                }
                field.index_of(&acc)
            }
        }
    };

    // Rows = points, columns = hyperplanes (dual vectors, same enumeration);
    // incidence iff the dot product vanishes.
    use rayon::prelude::*;
    let rows: Vec<BitRow> = points
        .par_iter()
        .map(|pt| {
            let mut row = BitRow::new(points.len());
            for (y, hp) in points.iter().enumerate() {
                if dot(pt, hp) == 0 {
                    row.set(y);
                }
            }
            row
        })
        .collect();
    Ok(IncidenceStructure::from_rows(v, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs::Classification;

    fn assert_catalog(c: Construction, expect: (u64, u64, u64, u64, u64)) {
        let p = c.params().unwrap();
        assert_eq!((p.v, p.b, p.r, p.k, p.lambda), expect, "{c:?}");
        let s = c.build().unwrap();
        let verification = s.verify().unwrap();
        match verification.classification {
            Classification::BlockDesign(got) => assert_eq!(got, p, "{c:?}"),
            other => panic!("{c:?} classified as {other:?}"),
        }
    }

    #[test]
    fn trivial_is_rr_shaped() {
        assert_catalog(Construction::Trivial { v: 9 }, (9, 9, 1, 1, 0));
    }

    #[test]
    fn complete_5_2() {
        assert_catalog(Construction::Complete { v: 5, k: 2 }, (5, 10, 4, 2, 1));
    }

    #[test]
    fn fano_from_pg_2_3() {
        assert_catalog(
            Construction::ProjectiveGeometry { q: 2, t: 3 },
            (7, 7, 3, 3, 1),
        );
    }

    #[test]
    fn pg_3_3() {
        assert_catalog(
            Construction::ProjectiveGeometry { q: 3, t: 3 },
            (13, 13, 4, 4, 1),
        );
    }

    #[test]
    fn pg_4_7_params_match_paper_example() {
        let p = Construction::ProjectiveGeometry { q: 4, t: 7 }
            .params()
            .unwrap();
        assert_eq!((p.v, p.b, p.r, p.k, p.lambda), (5461, 5461, 1365, 1365, 341));
    }

    #[test]
    fn sylvester_2_and_3() {
        assert_catalog(Construction::SylvesterHadamard { t: 2 }, (3, 3, 1, 1, 0));
        assert_catalog(Construction::SylvesterHadamard { t: 3 }, (7, 7, 3, 3, 1));
    }

    #[test]
    fn paley_7_and_11() {
        assert_catalog(Construction::Paley { v: 7 }, (7, 7, 3, 3, 1));
        assert_catalog(Construction::Paley { v: 11 }, (11, 11, 5, 5, 2));
    }

    #[test]
    fn paley_extension_field_343() {
        // 343 = 7^3 = 3 mod 4: exercises the extension-field path.
        let p = Construction::Paley { v: 343 }.params().unwrap();
        assert_eq!((p.v, p.k, p.lambda), (343, 171, 85));
        let s = Construction::Paley { v: 343 }.build().unwrap();
        match s.verify().unwrap().classification {
            Classification::BlockDesign(got) => assert_eq!(got, p),
            other => panic!("paley(343) classified as {other:?}"),
        }
    }

    #[test]
    fn twin_prime_3() {
        assert_catalog(Construction::TwinPrime { q: 3 }, (15, 15, 7, 7, 3));
    }

    #[test]
    fn quartic_nonzero_37() {
        assert_catalog(Construction::QuarticNonzero { v: 37 }, (37, 37, 9, 9, 2));
    }

    #[test]
    fn quartic_with_zero_13() {
        assert_catalog(Construction::QuarticWithZero { v: 13 }, (13, 13, 4, 4, 1));
    }

    #[test]
    fn bad_keys_rejected() {
        assert!(matches!(
            Construction::Paley { v: 13 }.validate(),
            Err(DesignError::BadKey { .. })
        ));
        assert!(Construction::QuarticNonzero { v: 17 }.validate().is_err()); // t=2 even
        assert!(Construction::ProjectiveGeometry { q: 6, t: 3 }
            .validate()
            .is_err());
        assert!(Construction::SylvesterHadamard { t: 1 }.validate().is_err());
    }

    #[test]
    fn twin_prime_keys() {
        // 3*5, 5*7, 11*13, 17*19, 25*27 are all twin prime power pairs.
        for q in [3u64, 5, 11, 17, 25] {
            assert!(Construction::TwinPrime { q }.validate().is_ok(), "q={q}");
        }
        // 7+2=9=3^2 is a prime power, so q=7 is valid too.
        assert!(Construction::TwinPrime { q: 7 }.validate().is_ok());
        assert!(Construction::TwinPrime { q: 13 }.validate().is_err()); // 15 = 3*5
        assert!(Construction::TwinPrime { q: 4 }.validate().is_err()); // even
    }

    #[test]
    fn twin_prime_extension_field_25() {
        // q = 25 = 5^2, q+2 = 27 = 3^3: both extension fields.
        assert_catalog(Construction::TwinPrime { q: 25 }, (675, 675, 337, 337, 168));
    }

    #[test]
    fn complete_above_cap_is_implicit() {
        let s = Construction::Complete { v: 40, k: 15 }.build().unwrap();
        assert!(!s.is_explicit());
        assert_eq!(s.v(), 40);
    }

    #[test]
    fn binomial_helpers() {
        assert_eq!(binomial_u64(5, 2), Some(10));
        assert_eq!(binomial_u64(2000, 3), Some(1331334000));
        assert_eq!(binomial_u64(2000, 500), None);
        let big = binomial_big(2000, 500);
        // log10 C(2000, 500) > 486 per the subset-selection cost bound.
        assert!(big.to_string().len() > 486);
        assert_eq!(binomial_big(5, 2), BigUint::from(10u32));
    }

    #[test]
    fn quartic_with_zero_uses_zero_adjoined_set() {
        // For v = 13 the difference set is {0, 1, 3, 9}.
        let s = Construction::QuarticWithZero { v: 13 }.build().unwrap();
        let row0: Vec<usize> = s.rows().unwrap()[0].iter_ones().collect();
        assert_eq!(row0, vec![0, 1, 3, 9]);
    }
}
