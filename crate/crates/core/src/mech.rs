//! Privacy mechanisms built from incidence structures or bare RPBD
//! parameters: Q(y|x) = alpha*e^eps on incident pairs and alpha elsewhere,
//! with the canonical linear unbiased estimator.

use std::sync::OnceLock;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::designs::{Classification, DesignError, IncidenceStructure, RpbdParams};

#[derive(Debug, Error)]
pub enum MechError {
    #[error("epsilon must be positive and finite, got {0}")]
    NonPositiveEpsilon(f64),
    #[error("invalid design: {0}")]
    InvalidDesign(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("empty input: no outputs to count")]
    EmptyInput,
    #[error("structure too large: {0}")]
    TooLarge(String),
    #[error("operation requires an incidence structure, mechanism has parameters only")]
    NoStructure,
}

impl From<DesignError> for MechError {
    fn from(e: DesignError) -> Self {
        MechError::InvalidDesign(e.to_string())
    }
}

/// Coefficients of the canonical estimator `P_hat_x = g * N_x / n - h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimatorCoeffs {
    pub g: f64,
    pub h: f64,
}

/// Per-coordinate counts N_x of outputs landing in I_x.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountVector {
    pub counts: Vec<u64>,
    pub n: u64,
}

/// A mechanism output: a column index for explicit structures, or the
/// sampled k-subset itself for implicit complete designs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Output {
    Column(u64),
    Subset(Vec<u64>),
}

enum Source {
    Explicit(IncidenceStructure),
    ImplicitComplete { v: u64, k: u64 },
    ParamsOnly,
}

/// An epsilon-LDP mechanism over a design with parameters (v, b, r, lambda).
pub struct Mechanism {
    source: Source,
    params: RpbdParams,
    /// Uniformity parameter when the underlying design is a block design.
    k: Option<u64>,
    eps: f64,
    alpha: f64,
    col_supports: OnceLock<Vec<Vec<u32>>>,
}

fn check_eps(eps: f64) -> Result<(), MechError> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(MechError::NonPositiveEpsilon(eps));
    }
    Ok(())
}

impl Mechanism {
    /// Builds the mechanism from a structure, verifying the design axioms.
    pub fn from_structure(structure: IncidenceStructure, eps: f64) -> Result<Self, MechError> {
        check_eps(eps)?;
        let verification = structure.verify()?;
        let (params, k) = match verification.classification {
            Classification::BlockDesign(p) => (p.as_rpbd(), Some(p.k)),
            Classification::Rpbd(p) => (p, None),
            Classification::Neither => {
                return Err(MechError::InvalidDesign(
                    "structure is neither a block design nor an RPBD".into(),
                ))
            }
        };
        let source = match structure {
            IncidenceStructure::ImplicitComplete { v, k } => Source::ImplicitComplete { v, k },
            s => Source::Explicit(s),
        };
        Ok(Self::assemble(source, params, k, eps))
    }

    /// Builds the mechanism from bare RPBD parameters; sampling and
    /// transition probabilities are unavailable.
    pub fn from_rpbd_params(params: RpbdParams, eps: f64) -> Result<Self, MechError> {
        check_eps(eps)?;
        RpbdParams::new(params.v, params.b, params.r, params.lambda)?;
        Ok(Self::assemble(Source::ParamsOnly, params, None, eps))
    }

    fn assemble(source: Source, params: RpbdParams, k: Option<u64>, eps: f64) -> Self {
        let alpha = 1.0 / (params.r as f64 * eps.exp() + (params.b - params.r) as f64);
        Mechanism {
            source,
            params,
            k,
            eps,
            alpha,
            col_supports: OnceLock::new(),
        }
    }

    pub fn v(&self) -> u64 {
        self.params.v
    }

    pub fn b(&self) -> u64 {
        self.params.b
    }

    pub fn params(&self) -> RpbdParams {
        self.params
    }

    /// Uniformity parameter, when the source design is a block design.
    pub fn uniformity(&self) -> Option<u64> {
        self.k
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Normalization constant 1 / (r e^eps + b - r).
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn structure(&self) -> Option<&IncidenceStructure> {
        match &self.source {
            Source::Explicit(s) => Some(s),
            _ => None,
        }
    }

    /// Estimator coefficients g = (r e^eps + b - r)/((r-lambda)(e^eps-1))
    /// and h = (lambda e^eps + r - lambda)/((r-lambda)(e^eps-1)).
    pub fn coeffs(&self) -> EstimatorCoeffs {
        let RpbdParams { b, r, lambda, .. } = self.params;
        let e = self.eps.exp();
        let denom = (r - lambda) as f64 * (e - 1.0);
        EstimatorCoeffs {
            g: (r as f64 * e + (b - r) as f64) / denom,
            h: (lambda as f64 * e + (r - lambda) as f64) / denom,
        }
    }

    /// Per-trial probability that an output lands in I_x when the true
    /// probability of x is `p_x`.
    pub fn success_probability(&self, p_x: f64) -> f64 {
        let RpbdParams { r, lambda, .. } = self.params;
        let e = self.eps.exp();
        self.alpha * (p_x * (r - lambda) as f64 * (e - 1.0) + (lambda as f64 * e + (r - lambda) as f64))
    }

    /// Q(y|x).
    pub fn transition_prob(&self, y: &Output, x: u64) -> Result<f64, MechError> {
        if x >= self.params.v {
            return Err(MechError::IndexOutOfRange(format!(
                "x = {x} not in [0, {})",
                self.params.v
            )));
        }
        let incident = self.output_incident(y, x)?;
        Ok(if incident {
            self.alpha * self.eps.exp()
        } else {
            self.alpha
        })
    }

    fn output_incident(&self, y: &Output, x: u64) -> Result<bool, MechError> {
        match (&self.source, y) {
            (Source::Explicit(s), Output::Column(c)) => {
                if *c >= self.params.b {
                    return Err(MechError::IndexOutOfRange(format!(
                        "y = {c} not in [0, {})",
                        self.params.b
                    )));
                }
                Ok(s.incident(x, *c).unwrap())
            }
            (Source::ImplicitComplete { v, k }, Output::Subset(sub)) => {
                if sub.len() as u64 != *k
                    || sub.windows(2).any(|w| w[0] >= w[1])
                    || sub.iter().any(|&e| e >= *v)
                {
                    return Err(MechError::IndexOutOfRange(format!(
                        "output is not a sorted {k}-subset of [0, {v})"
                    )));
                }
                Ok(sub.binary_search(&x).is_ok())
            }
            (Source::ParamsOnly, _) => Err(MechError::NoStructure),
            (Source::Explicit(_), Output::Subset(_)) => Err(MechError::IndexOutOfRange(
                "subset output for an explicit structure".into(),
            )),
            (Source::ImplicitComplete { .. }, Output::Column(_)) => Err(
                MechError::IndexOutOfRange("column output for an implicit structure".into()),
            ),
        }
    }

    /// Draws one output: a Bernoulli(r alpha e^eps) choice between a uniform
    /// element of I_x and a uniform element of its complement.
    pub fn sample_output<R: Rng + ?Sized>(&self, x: u64, rng: &mut R) -> Result<Output, MechError> {
        if x >= self.params.v {
            return Err(MechError::IndexOutOfRange(format!(
                "x = {x} not in [0, {})",
                self.params.v
            )));
        }
        let RpbdParams { b, r, .. } = self.params;
        let p_in = r as f64 * self.alpha * self.eps.exp();
        let inside = rng.random::<f64>() < p_in;
        match &self.source {
            Source::Explicit(s) => {
                let rows = s.rows().unwrap();
                let row = &rows[x as usize];
                let col = if inside {
                    let target = rng.random_range(0..r);
                    nth_one(row, target as usize)
                } else {
                    let target = rng.random_range(0..b - r);
                    nth_zero(row, target as usize)
                };
                Ok(Output::Column(col as u64))
            }
            Source::ImplicitComplete { v, k } => {
                // Uniform (k-1)-subset of X \ {x} joined with x, or a uniform
                // k-subset of X \ {x}.
                let take = if inside { *k - 1 } else { *k };
                let mut sub =
                    sample_distinct(rng, *v - 1, take as usize)
                        .into_iter()
                        .map(|i| if i >= x { i + 1 } else { i })
                        .collect::<Vec<_>>();
                if inside {
                    sub.push(x);
                }
                sub.sort_unstable();
                Ok(Output::Subset(sub))
            }
            Source::ParamsOnly => Err(MechError::NoStructure),
        }
    }

    /// Max over outputs y and input pairs (x, x') of Q(y|x)/Q(y|x').
    pub fn verify_ldp(&self) -> Result<LdpReport, MechError> {
        let e = self.eps.exp();
        match &self.source {
            Source::Explicit(s) => {
                let rows = s.rows().unwrap();
                let v = rows.len();
                let b = self.params.b as usize;
                let mut col_deg = vec![0u64; b];
                for row in rows {
                    for y in row.iter_ones() {
                        col_deg[y] += 1;
                    }
                }
                // A column incident to some inputs but not all contributes
                // the ratio e^eps; all-or-nothing columns contribute 1.
                let mixed = col_deg.iter().any(|&d| d > 0 && d < v as u64);
                Ok(LdpReport {
                    max_ratio: if mixed && v > 1 { e } else { 1.0 },
                    exhaustive: true,
                })
            }
            Source::ImplicitComplete { .. } | Source::ParamsOnly => Ok(LdpReport {
                max_ratio: e,
                exhaustive: false,
            }),
        }
    }

    fn col_supports(&self) -> Result<&[Vec<u32>], MechError> {
        match &self.source {
            Source::Explicit(s) => Ok(self.col_supports.get_or_init(|| {
                let rows = s.rows().unwrap();
                let mut supports = vec![Vec::new(); self.params.b as usize];
                for (x, row) in rows.iter().enumerate() {
                    for y in row.iter_ones() {
                        supports[y].push(x as u32);
                    }
                }
                supports
            })),
            _ => Err(MechError::NoStructure),
        }
    }

    /// Counts N_x over the outputs.
    pub fn count(&self, outputs: &[Output]) -> Result<CountVector, MechError> {
        if outputs.is_empty() {
            return Err(MechError::EmptyInput);
        }
        let v = self.params.v as usize;
        let mut counts = vec![0u64; v];
        match &self.source {
            Source::Explicit(_) => {
                let supports = self.col_supports()?;
                for y in outputs {
                    let Output::Column(c) = y else {
                        return Err(MechError::IndexOutOfRange(
                            "subset output for an explicit structure".into(),
                        ));
                    };
                    if *c >= self.params.b {
                        return Err(MechError::IndexOutOfRange(format!(
                            "y = {c} not in [0, {})",
                            self.params.b
                        )));
                    }
                    for &x in &supports[*c as usize] {
                        counts[x as usize] += 1;
                    }
                }
            }
            Source::ImplicitComplete { .. } => {
                for y in outputs {
                    // Validates shape as a side effect.
                    self.output_incident(y, 0)?;
                    let Output::Subset(sub) = y else { unreachable!() };
                    for &x in sub {
                        counts[x as usize] += 1;
                    }
                }
            }
            Source::ParamsOnly => return Err(MechError::NoStructure),
        }
        Ok(CountVector {
            counts,
            n: outputs.len() as u64,
        })
    }

    /// Counts and the canonical estimate `P_hat_x = g N_x / n - h`.
    pub fn count_and_estimate(&self, outputs: &[Output]) -> Result<(CountVector, Vec<f64>), MechError> {
        let counts = self.count(outputs)?;
        let estimate = self.estimate_from_counts(&counts);
        Ok((counts, estimate))
    }

    pub fn estimate_from_counts(&self, counts: &CountVector) -> Vec<f64> {
        let EstimatorCoeffs { g, h } = self.coeffs();
        let n = counts.n as f64;
        counts.counts.iter().map(|&c| g * c as f64 / n - h).collect()
    }
}

/// Result of an LDP check: the max probability ratio, and whether it was
/// computed exhaustively or analytically.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LdpReport {
    pub max_ratio: f64,
    pub exhaustive: bool,
}

/// Max over columns y and row pairs of Q(y|x)/Q(y|x') for an arbitrary
/// row-stochastic matrix; infinite when some Q(y|x') = 0 < Q(y|x).
pub fn ldp_max_ratio(matrix: &[Vec<f64>]) -> f64 {
    if matrix.is_empty() {
        return 1.0;
    }
    let b = matrix[0].len();
    let mut worst: f64 = 1.0;
    for y in 0..b {
        let col = matrix.iter().map(|row| row[y]);
        let max = col.clone().fold(f64::MIN, f64::max);
        let min = col.fold(f64::MAX, f64::min);
        let ratio = if min == 0.0 {
            if max == 0.0 {
                1.0
            } else {
                f64::INFINITY
            }
        } else {
            max / min
        };
        worst = worst.max(ratio);
    }
    worst
}

/// Position of the `n`-th set bit (0-based).
fn nth_one(row: &crate::designs::BitRow, n: usize) -> usize {
    row.iter_ones().nth(n).expect("rank within popcount")
}

/// Position of the `n`-th clear bit (0-based).
fn nth_zero(row: &crate::designs::BitRow, n: usize) -> usize {
    let mut remaining = n;
    let mut prev_end = 0usize;
    for one in row.iter_ones().chain(std::iter::once(row.len())) {
        let zeros_here = one - prev_end;
        if remaining < zeros_here {
            return prev_end + remaining;
        }
        remaining -= zeros_here;
        prev_end = one + 1;
    }
    unreachable!("rank within zero count")
}

/// `count` distinct values drawn uniformly from [0, bound), unsorted.
fn sample_distinct<R: Rng + ?Sized>(rng: &mut R, bound: u64, count: usize) -> Vec<u64> {
    debug_assert!(count as u64 <= bound);
    // Floyd's algorithm: uniform over subsets, O(count) expected time.
    let mut chosen = std::collections::HashSet::with_capacity(count);
    let mut out = Vec::with_capacity(count);
    for j in bound - count as u64..bound {
        let t = rng.random_range(0..=j);
        let pick = if chosen.contains(&t) { j } else { t };
        chosen.insert(pick);
        out.push(pick);
    }
    out
}

/// Exact-rational forms of the mechanism quantities, for identity tests on
/// small designs (v * b <= 1e4 scale) with rational e^eps.
pub mod exact {
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn int(x: u64) -> BigRational {
        BigRational::from_integer(BigInt::from(x))
    }

    /// 1 / (r e^eps + b - r).
    pub fn alpha(b: u64, r: u64, e_eps: &BigRational) -> BigRational {
        (int(r) * e_eps + int(b - r)).recip()
    }

    /// (g, h) of the canonical estimator.
    pub fn coeffs(b: u64, r: u64, lambda: u64, e_eps: &BigRational) -> (BigRational, BigRational) {
        let one = BigRational::from_integer(BigInt::from(1));
        let denom = int(r - lambda) * (e_eps - &one);
        let g = (int(r) * e_eps + int(b - r)) / &denom;
        let h = (int(lambda) * e_eps + int(r - lambda)) / denom;
        (g, h)
    }

    /// alpha (p (r-lambda)(e^eps - 1) + lambda e^eps + r - lambda).
    pub fn success_probability(
        b: u64,
        r: u64,
        lambda: u64,
        e_eps: &BigRational,
        p: &BigRational,
    ) -> BigRational {
        let one = BigRational::from_integer(BigInt::from(1));
        alpha(b, r, e_eps)
            * (p * int(r - lambda) * (e_eps - &one) + int(lambda) * e_eps + int(r - lambda))
    }
}
