//! Incidence structures, design-axiom verification, the catalog
//! constructions, and the derived/residual/truncation transforms.

mod families;

pub use families::{binomial_big, binomial_u64, Construction, FamilyKind};

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors from design construction, verification, and transforms.
#[derive(Debug, Error)]
pub enum DesignError {
    #[error("bad key for {family}: {reason}")]
    BadKey { family: &'static str, reason: String },
    #[error("structure too large: {0}")]
    TooLarge(String),
    #[error("design is not symmetric (b != v)")]
    NotSymmetric,
    #[error("design has lambda = 0")]
    LambdaZero,
    #[error("cannot truncate to {want} rows: structure has {have}")]
    TooFewRows { have: u64, want: u64 },
    #[error("invalid design parameters: {0}")]
    InvalidParams(String),
    #[error("invalid design file: {0}")]
    BadFile(String),
}

/// Block design parameters (v, b, r, k, lambda) satisfying the two counting
/// identities vr = bk and lambda(v-1) = r(k-1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignParams {
    pub v: u64,
    pub b: u64,
    pub r: u64,
    pub k: u64,
    pub lambda: u64,
}

impl DesignParams {
    pub fn new(v: u64, b: u64, r: u64, k: u64, lambda: u64) -> Result<Self, DesignError> {
        let p = DesignParams { v, b, r, k, lambda };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), DesignError> {
        let &DesignParams { v, b, r, k, lambda } = self;
        if !(v > k && k > 0) {
            return Err(DesignError::InvalidParams(format!(
                "need v > k > 0, got v={v}, k={k}"
            )));
        }
        if !(b > r && r > lambda) {
            return Err(DesignError::InvalidParams(format!(
                "need b > r > lambda >= 0, got b={b}, r={r}, lambda={lambda}"
            )));
        }
        if (v as u128) * (r as u128) != (b as u128) * (k as u128) {
            return Err(DesignError::InvalidParams(format!(
                "vr = bk violated: {v}*{r} != {b}*{k}"
            )));
        }
        if (lambda as u128) * ((v - 1) as u128) != (r as u128) * ((k - 1) as u128) {
            return Err(DesignError::InvalidParams(format!(
                "lambda(v-1) = r(k-1) violated: {lambda}*{} != {r}*{}",
                v - 1,
                k - 1
            )));
        }
        Ok(())
    }

    /// Drops the uniformity parameter.
    pub fn as_rpbd(&self) -> RpbdParams {
        RpbdParams {
            v: self.v,
            b: self.b,
            r: self.r,
            lambda: self.lambda,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.b == self.v
    }
}

/// Regular pairwise-balanced design parameters (v, b, r, lambda).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RpbdParams {
    pub v: u64,
    pub b: u64,
    pub r: u64,
    pub lambda: u64,
}

impl RpbdParams {
    pub fn new(v: u64, b: u64, r: u64, lambda: u64) -> Result<Self, DesignError> {
        if v == 0 {
            return Err(DesignError::InvalidParams("need v > 0".into()));
        }
        if !(b > r && r > lambda) {
            return Err(DesignError::InvalidParams(format!(
                "need b > r > lambda >= 0, got b={b}, r={r}, lambda={lambda}"
            )));
        }
        Ok(RpbdParams { v, b, r, lambda })
    }
}

/// A fixed-width bit row of an incidence matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitRow {
    nbits: usize,
    words: Vec<u64>,
}

impl BitRow {
    pub fn new(nbits: usize) -> Self {
        BitRow {
            nbits,
            words: vec![0u64; nbits.div_ceil(64)],
        }
    }

    pub fn len(&self) -> usize {
        self.nbits
    }

    pub fn is_empty(&self) -> bool {
        self.nbits == 0
    }

    pub fn set(&mut self, i: usize) {
        debug_assert!(i < self.nbits);
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    pub fn clear(&mut self, i: usize) {
        debug_assert!(i < self.nbits);
        self.words[i / 64] &= !(1u64 << (i % 64));
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.nbits && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn intersection_count(&self, other: &BitRow) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Set bit positions in ascending order.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let bit = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + bit)
                }
            })
        })
    }
}

/// An incidence structure (X, Y, I): `v` rows over `b` columns.
///
/// Either explicit (a bit matrix of rows `I_x`) or the implicit complete
/// design whose columns are all k-subsets of X, which is never materialized
/// above the explicit-size cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IncidenceStructure {
    Explicit { b: u64, rows: Vec<BitRow> },
    ImplicitComplete { v: u64, k: u64 },
}

/// Default cap on explicit materialization, in columns.
pub const DEFAULT_EXPLICIT_CAP: u64 = 1_000_000;

impl IncidenceStructure {
    pub fn from_rows(b: u64, rows: Vec<BitRow>) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() as u64 == b));
        IncidenceStructure::Explicit { b, rows }
    }

    pub fn v(&self) -> u64 {
        match self {
            IncidenceStructure::Explicit { rows, .. } => rows.len() as u64,
            IncidenceStructure::ImplicitComplete { v, .. } => *v,
        }
    }

    /// Number of columns; `None` when C(v,k) of an implicit structure
    /// overflows u64.
    pub fn b(&self) -> Option<u64> {
        match self {
            IncidenceStructure::Explicit { b, .. } => Some(*b),
            IncidenceStructure::ImplicitComplete { v, k } => binomial_u64(*v, *k),
        }
    }

    pub fn is_explicit(&self) -> bool {
        matches!(self, IncidenceStructure::Explicit { .. })
    }

    pub fn rows(&self) -> Option<&[BitRow]> {
        match self {
            IncidenceStructure::Explicit { rows, .. } => Some(rows),
            IncidenceStructure::ImplicitComplete { .. } => None,
        }
    }

    /// Membership test (x, y) in I for explicit structures.
    pub fn incident(&self, x: u64, y: u64) -> Option<bool> {
        match self {
            IncidenceStructure::Explicit { rows, .. } => {
                rows.get(x as usize).map(|r| r.contains(y as usize))
            }
            IncidenceStructure::ImplicitComplete { .. } => None,
        }
    }

    /// Verifies the design axioms and classifies the structure.
    pub fn verify(&self) -> Result<Verification, DesignError> {
        match self {
            IncidenceStructure::Explicit { b, rows } => Ok(verify_explicit(*b, rows)),
            IncidenceStructure::ImplicitComplete { v, k } => verify_implicit_complete(*v, *k),
        }
    }

    /// Restriction to the rows incident to column `y`, with `y` deleted.
    ///
    /// Requires a verified symmetric block design with lambda > 0; the result
    /// is a (k, v-1, k-1, lambda, lambda-1) block design.
    pub fn derived(&self, y: u64) -> Result<IncidenceStructure, DesignError> {
        let (rows, params) = self.symmetric_with_positive_lambda()?;
        let keep: Vec<usize> = (0..rows.len())
            .filter(|&x| rows[x].contains(y as usize))
            .collect();
        debug_assert_eq!(keep.len() as u64, params.k);
        Ok(restrict_and_drop_column(rows, &keep, y))
    }

    /// Restriction to the rows not incident to column `y`, with `y` deleted.
    ///
    /// Requires a verified symmetric block design with lambda > 0; the result
    /// is a (v-k, v-1, k, k-lambda, lambda) block design.
    pub fn residual(&self, y: u64) -> Result<IncidenceStructure, DesignError> {
        let (rows, params) = self.symmetric_with_positive_lambda()?;
        let keep: Vec<usize> = (0..rows.len())
            .filter(|&x| !rows[x].contains(y as usize))
            .collect();
        debug_assert_eq!(keep.len() as u64, params.v - params.k);
        Ok(restrict_and_drop_column(rows, &keep, y))
    }

    fn symmetric_with_positive_lambda(&self) -> Result<(&[BitRow], DesignParams), DesignError> {
        let rows = match self {
            IncidenceStructure::Explicit { rows, .. } => rows,
            IncidenceStructure::ImplicitComplete { .. } => return Err(DesignError::NotSymmetric),
        };
        let verification = self.verify()?;
        let params = match verification.classification {
            Classification::BlockDesign(p) => p,
            _ => {
                return Err(DesignError::InvalidParams(
                    "structure does not verify as a block design".into(),
                ))
            }
        };
        if !params.is_symmetric() {
            return Err(DesignError::NotSymmetric);
        }
        if params.lambda == 0 {
            return Err(DesignError::LambdaZero);
        }
        Ok((rows, params))
    }

    /// Keeps the first `v` rows in canonical row order.
    pub fn truncate(&self, v: u64) -> Result<IncidenceStructure, DesignError> {
        if v < 1 {
            return Err(DesignError::InvalidParams("need v >= 1".into()));
        }
        if v > self.v() {
            return Err(DesignError::TooFewRows {
                have: self.v(),
                want: v,
            });
        }
        match self {
            IncidenceStructure::Explicit { b, rows } => Ok(IncidenceStructure::Explicit {
                b: *b,
                rows: rows[..v as usize].to_vec(),
            }),
            IncidenceStructure::ImplicitComplete { .. } => Err(DesignError::TooLarge(
                "cannot truncate an implicit complete design".into(),
            )),
        }
    }
}

fn restrict_and_drop_column(rows: &[BitRow], keep: &[usize], y: u64) -> IncidenceStructure {
    let old_b = rows[0].len();
    let new_b = old_b - 1;
    let y = y as usize;
    let new_rows: Vec<BitRow> = keep
        .iter()
        .map(|&x| {
            let mut row = BitRow::new(new_b);
            for col in rows[x].iter_ones() {
                if col < y {
                    row.set(col);
                } else if col > y {
                    row.set(col - 1);
                }
            }
            row
        })
        .collect();
    IncidenceStructure::from_rows(new_b as u64, new_rows)
}

/// Degree and intersection multisets, as value -> multiplicity maps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationProfile {
    pub row_degrees: BTreeMap<u64, u64>,
    pub col_degrees: BTreeMap<u64, u64>,
    pub pair_intersections: BTreeMap<u64, u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Classification {
    BlockDesign(DesignParams),
    Rpbd(RpbdParams),
    Neither,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verification {
    pub profile: VerificationProfile,
    pub classification: Classification,
}

fn singleton(map: &BTreeMap<u64, u64>) -> Option<u64> {
    if map.len() == 1 {
        map.keys().next().copied()
    } else {
        None
    }
}

fn verify_explicit(b: u64, rows: &[BitRow]) -> Verification {
    let v = rows.len();

    let mut row_degrees = BTreeMap::new();
    for row in rows {
        *row_degrees.entry(row.count() as u64).or_insert(0u64) += 1;
    }

    let mut col_counts = vec![0u64; b as usize];
    for row in rows {
        for y in row.iter_ones() {
            col_counts[y] += 1;
        }
    }
    let mut col_degrees = BTreeMap::new();
    for c in col_counts {
        *col_degrees.entry(c).or_insert(0u64) += 1;
    }

    // Pairwise intersections, parallel over the first row index.
    let pair_intersections = (0..v)
        .into_par_iter()
        .map(|x| {
            let mut local = BTreeMap::new();
            for x2 in x + 1..v {
                let c = rows[x].intersection_count(&rows[x2]) as u64;
                *local.entry(c).or_insert(0u64) += 1;
            }
            local
        })
        .reduce(BTreeMap::new, |mut acc, local| {
            for (val, n) in local {
                *acc.entry(val).or_insert(0) += n;
            }
            acc
        });

    let profile = VerificationProfile {
        row_degrees,
        col_degrees,
        pair_intersections,
    };
    let classification = classify(v as u64, b, &profile);
    Verification {
        profile,
        classification,
    }
}

fn classify(v: u64, b: u64, profile: &VerificationProfile) -> Classification {
    let r = singleton(&profile.row_degrees);
    let k = singleton(&profile.col_degrees);
    // A single-row structure has no pairs; lambda is then taken as 0.
    let lambda = if v == 1 {
        Some(0)
    } else {
        singleton(&profile.pair_intersections)
    };

    if let (Some(r), Some(k), Some(lambda)) = (r, k, lambda) {
        if let Ok(p) = DesignParams::new(v, b, r, k, lambda) {
            return Classification::BlockDesign(p);
        }
    }
    if let (Some(r), Some(lambda)) = (r, lambda) {
        if let Ok(p) = RpbdParams::new(v, b, r, lambda) {
            return Classification::Rpbd(p);
        }
    }
    Classification::Neither
}

fn verify_implicit_complete(v: u64, k: u64) -> Result<Verification, DesignError> {
    let b = binomial_u64(v, k).ok_or_else(|| {
        DesignError::TooLarge(format!("C({v},{k}) exceeds u64; no analytic profile"))
    })?;
    let r = binomial_u64(v - 1, k - 1).unwrap();
    let lambda = if k >= 2 {
        binomial_u64(v - 2, k - 2).unwrap()
    } else {
        0
    };
    let pairs = v * (v - 1) / 2;
    let profile = VerificationProfile {
        row_degrees: BTreeMap::from([(r, v)]),
        col_degrees: BTreeMap::from([(k, b)]),
        pair_intersections: BTreeMap::from([(lambda, pairs)]),
    };
    let classification = classify(v, b, &profile);
    Ok(Verification {
        profile,
        classification,
    })
}

/// Feasibility of a symmetric (v, v, k, k, lambda) design by the integrality
/// test and, for even v, the square test on k - lambda.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymmetricFeasibility {
    /// Not excluded by these tests; existence is not guaranteed.
    Feasible,
    Infeasible(String),
}

pub fn symmetric_feasible(v: u64, k: u64) -> SymmetricFeasibility {
    assert!(0 < k && k < v, "need 0 < k < v");
    let num = k * (k - 1);
    if num % (v - 1) != 0 {
        let g = gcd(num, v - 1);
        return SymmetricFeasibility::Infeasible(format!(
            "lambda = {}/{} is not an integer",
            num / g,
            (v - 1) / g
        ));
    }
    let lambda = num / (v - 1);
    if v % 2 == 0 {
        let d = k - lambda;
        let s = d.isqrt();
        if s * s != d {
            return SymmetricFeasibility::Infeasible(format!(
                "v even and k - lambda = {d} is not a perfect square"
            ));
        }
    }
    SymmetricFeasibility::Feasible
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

// ---------------------------------------------------------------------------
// Design file format
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct ExplicitFile {
    v: u64,
    b: u64,
    rows: Vec<Vec<u64>>,
}

#[derive(Serialize, Deserialize)]
struct ImplicitFile {
    implicit_complete: ImplicitBody,
}

#[derive(Serialize, Deserialize)]
struct ImplicitBody {
    v: u64,
    k: u64,
}

impl IncidenceStructure {
    /// Serializes to the design file format: a JSON document
    /// `{"v":..,"b":..,"rows":[[..]]}` with strictly increasing column
    /// indices per row, or `{"implicit_complete":{"v":..,"k":..}}`.
    pub fn to_json(&self) -> String {
        match self {
            IncidenceStructure::Explicit { b, rows } => {
                let doc = ExplicitFile {
                    v: rows.len() as u64,
                    b: *b,
                    rows: rows
                        .iter()
                        .map(|r| r.iter_ones().map(|y| y as u64).collect())
                        .collect(),
                };
                serde_json::to_string(&doc).expect("serialization cannot fail")
            }
            IncidenceStructure::ImplicitComplete { v, k } => {
                let doc = ImplicitFile {
                    implicit_complete: ImplicitBody { v: *v, k: *k },
                };
                serde_json::to_string(&doc).expect("serialization cannot fail")
            }
        }
    }

    /// Parses the design file format, validating index ranges and ordering.
    pub fn from_json(s: &str) -> Result<IncidenceStructure, DesignError> {
        if let Ok(doc) = serde_json::from_str::<ImplicitFile>(s) {
            let ImplicitBody { v, k } = doc.implicit_complete;
            if !(v >= 2 && k >= 1 && k < v) {
                return Err(DesignError::BadFile(format!(
                    "implicit complete design needs v >= 2 and 1 <= k < v, got v={v}, k={k}"
                )));
            }
            return Ok(IncidenceStructure::ImplicitComplete { v, k });
        }
        let doc: ExplicitFile =
            serde_json::from_str(s).map_err(|e| DesignError::BadFile(e.to_string()))?;
        if doc.rows.len() as u64 != doc.v {
            return Err(DesignError::BadFile(format!(
                "v={} but {} rows given",
                doc.v,
                doc.rows.len()
            )));
        }
        if doc.v == 0 || doc.b == 0 {
            return Err(DesignError::BadFile("need v >= 1 and b >= 1".into()));
        }
        let mut rows = Vec::with_capacity(doc.rows.len());
        for (x, cols) in doc.rows.iter().enumerate() {
            let mut row = BitRow::new(doc.b as usize);
            let mut prev: Option<u64> = None;
            for &y in cols {
                if y >= doc.b {
                    return Err(DesignError::BadFile(format!(
                        "row {x}: column index {y} out of range [0, {})",
                        doc.b
                    )));
                }
                if prev.is_some_and(|p| p >= y) {
                    return Err(DesignError::BadFile(format!(
                        "row {x}: column indices must be strictly increasing"
                    )));
                }
                prev = Some(y);
                row.set(y as usize);
            }
            rows.push(row);
        }
        Ok(IncidenceStructure::Explicit { b: doc.b, rows })
    }
}
