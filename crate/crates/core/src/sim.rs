//! Monte Carlo validation of the closed-form risks, plus an exact
//! brute-force oracle that enumerates all output sequences on tiny
//! instances.
//!
//! Trials are independently seeded from (master seed, trial index), so
//! results are bit-reproducible regardless of how many workers run them;
//! aggregation uses pairwise summation over the trial-indexed buffer.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mech::{MechError, Mechanism};
use crate::risk::{self, LossSpec, RiskError, RiskPoint, SchemeParams};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("mismatched input sizes: v = {a} vs v = {b}")]
    MismatchedV { a: u64, b: u64 },
    #[error("mismatched privacy budgets: eps = {a} vs eps = {b}")]
    MismatchedEps { a: f64, b: f64 },
    #[error("bad distribution: {0}")]
    BadDistribution(String),
    #[error(transparent)]
    Mech(#[from] MechError),
    #[error(transparent)]
    Risk(#[from] RiskError),
}

/// Specification of the true input distribution P.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PSpec {
    Uniform,
    PointMass { x: u64 },
    Zipf { s: f64 },
    Explicit { p: Vec<f64> },
    DirichletDraw { seed: u64 },
}

impl PSpec {
    /// The length-v probability vector.
    pub fn materialize(&self, v: u64) -> Result<Vec<f64>, SimError> {
        let v_us = v as usize;
        let p = match self {
            PSpec::Uniform => vec![1.0 / v as f64; v_us],
            PSpec::PointMass { x } => {
                if *x >= v {
                    return Err(SimError::BadDistribution(format!(
                        "point mass at {x} outside [0, {v})"
                    )));
                }
                let mut p = vec![0.0; v_us];
                p[*x as usize] = 1.0;
                p
            }
            PSpec::Zipf { s } => {
                let mut p: Vec<f64> = (1..=v_us).map(|i| (i as f64).powf(-s)).collect();
                let total: f64 = p.iter().sum();
                p.iter_mut().for_each(|x| *x /= total);
                p
            }
            PSpec::Explicit { p } => p.clone(),
            PSpec::DirichletDraw { seed } => {
                // Flat Dirichlet via normalized iid Exp(1) draws.
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let mut p: Vec<f64> = (0..v_us).map(|_| rng.sample(rand_distr::Exp1)).collect();
                let total: f64 = p.iter().sum();
                p.iter_mut().for_each(|x| *x /= total);
                p
            }
        };
        if p.len() != v_us {
            return Err(SimError::BadDistribution(format!(
                "distribution has length {}, expected {v}",
                p.len()
            )));
        }
        let total: f64 = p.iter().sum();
        if p.iter().any(|&x| x < 0.0) || (total - 1.0).abs() > 1e-12 {
            return Err(SimError::BadDistribution(format!(
                "entries must be nonnegative and sum to 1 (sum = {total})"
            )));
        }
        Ok(p)
    }
}

/// Monte Carlo run configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimConfig {
    pub p: PSpec,
    /// Clients per trial.
    pub n: u64,
    pub trials: u64,
    pub seed: u64,
    /// Loss exponent u of the l_u^u loss.
    pub u: f64,
    /// Clip negative estimates and renormalize before the loss. Post-
    /// processing only: the closed-form comparison is skipped when set.
    #[serde(default)]
    pub clip: bool,
}

/// Monte Carlo output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimResult {
    /// Mean loss over trials.
    pub empirical: f64,
    pub std_error: f64,
    /// Closed-form risk at the same P, available for u = 2.
    pub analytic: Option<f64>,
    /// (empirical - analytic) / std_error.
    pub z: Option<f64>,
    /// Mean of (P_hat_x - P_x) over trials, per coordinate.
    pub bias: Vec<f64>,
}

fn trial_seed(master: u64, trial: u64) -> u64 {
    // splitmix64 over a fixed stride keeps trial streams decorrelated.
    let mut z = master
        .wrapping_add(trial.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Projects an estimate onto the simplex by clipping at zero and rescaling.
pub fn clip_renormalize(estimate: &mut [f64]) {
    let mut total = 0.0;
    for e in estimate.iter_mut() {
        if *e < 0.0 {
            *e = 0.0;
        }
        total += *e;
    }
    if total > 0.0 {
        estimate.iter_mut().for_each(|e| *e /= total);
    } else {
        let uniform = 1.0 / estimate.len() as f64;
        estimate.iter_mut().for_each(|e| *e = uniform);
    }
}

fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        xs.iter().sum()
    } else {
        let mid = xs.len() / 2;
        pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
    }
}

/// Runs `trials` independent simulations of n clients each and compares the
/// empirical risk against the closed form when u = 2.
pub fn run_monte_carlo(mech: &Mechanism, config: &SimConfig) -> Result<SimResult, SimError> {
    if config.n == 0 || config.trials == 0 {
        return Err(SimError::BadDistribution(
            "need n >= 1 and trials >= 1".into(),
        ));
    }
    let v = mech.v();
    let p = config.p.materialize(v)?;
    let loss = LossSpec::new(config.u)?;
    let cdf: Vec<f64> = p
        .iter()
        .scan(0.0, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect();

    let per_trial: Result<Vec<(f64, Vec<f64>)>, SimError> = (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(config.seed, t));
            let mut outputs = Vec::with_capacity(config.n as usize);
            for _ in 0..config.n {
                let u: f64 = rng.random();
                let x = cdf.partition_point(|&c| c <= u).min(v as usize - 1) as u64;
                outputs.push(mech.sample_output(x, &mut rng)?);
            }
            let (_, mut estimate) = mech.count_and_estimate(&outputs)?;
            if config.clip {
                clip_renormalize(&mut estimate);
            }
            let l = loss.eval(&p, &estimate)?;
            Ok((l, estimate))
        })
        .collect();
    let per_trial = per_trial?;

    let losses: Vec<f64> = per_trial.iter().map(|(l, _)| *l).collect();
    let t = config.trials as f64;
    let empirical = pairwise_sum(&losses) / t;
    let sq_dev: Vec<f64> = losses.iter().map(|&l| (l - empirical).powi(2)).collect();
    let variance = if config.trials > 1 {
        pairwise_sum(&sq_dev) / (t - 1.0)
    } else {
        0.0
    };
    let std_error = (variance / t).sqrt();

    let bias: Vec<f64> = (0..v as usize)
        .map(|x| {
            let col: Vec<f64> = per_trial.iter().map(|(_, est)| est[x]).collect();
            pairwise_sum(&col) / t - p[x]
        })
        .collect();

    let (analytic, z) = if config.u == 2.0 && !config.clip {
        let scheme = SchemeParams::Rpbd(mech.params());
        let a = risk::risk_l2(&scheme, mech.eps(), RiskPoint::Distribution(&p))? / config.n as f64;
        let z = if std_error > 0.0 {
            Some((empirical - a) / std_error)
        } else {
            None
        };
        (Some(a), z)
    } else {
        (None, None)
    };

    Ok(SimResult {
        empirical,
        std_error,
        analytic,
        z,
        bias,
    })
}

/// Cap on b^n for exact enumeration.
pub const BRUTE_FORCE_CAP: u64 = 1_000_000;

/// Exact risk of the canonical estimator by enumerating all b^n output
/// sequences with their probabilities under P.
pub fn brute_force_risk(
    mech: &Mechanism,
    p: &[f64],
    n: u64,
    loss: &LossSpec,
) -> Result<f64, SimError> {
    let structure = mech
        .structure()
        .ok_or(SimError::Mech(MechError::NoStructure))?;
    let v = mech.v() as usize;
    let b = mech.b();
    if p.len() != v {
        return Err(SimError::BadDistribution(format!(
            "distribution has length {}, expected {v}",
            p.len()
        )));
    }
    let total_sequences = (b as u128).checked_pow(n as u32);
    match total_sequences {
        Some(t) if t <= BRUTE_FORCE_CAP as u128 => {}
        _ => {
            return Err(SimError::TooLarge(format!(
                "b^n = {b}^{n} exceeds the enumeration cap {BRUTE_FORCE_CAP}"
            )))
        }
    }

    // Marginal output law m(y) = sum_x P_x Q(y|x), and per-column supports
    // for incremental counting.
    let rows = structure.rows().unwrap();
    let alpha = mech.alpha();
    let e = mech.eps().exp();
    let mut col_p = vec![0.0f64; b as usize];
    let mut col_support: Vec<Vec<usize>> = vec![Vec::new(); b as usize];
    for (x, row) in rows.iter().enumerate() {
        for y in row.iter_ones() {
            col_p[y] += p[x];
            col_support[y].push(x);
        }
    }
    let marginal: Vec<f64> = col_p
        .iter()
        .map(|&cp| alpha * (e * cp + (1.0 - cp)))
        .collect();

    let coeffs = mech.coeffs();
    let n_us = n as usize;
    let mut seq = vec![0usize; n_us];
    let mut counts = vec![0u64; v];
    for y in &seq {
        for &x in &col_support[*y] {
            counts[x] += 1;
        }
    }
    let mut risk = 0.0f64;
    let mut prob_total = 0.0f64;
    loop {
        let prob: f64 = seq.iter().map(|&y| marginal[y]).product();
        let estimate: Vec<f64> = counts
            .iter()
            .map(|&c| coeffs.g * c as f64 / n as f64 - coeffs.h)
            .collect();
        risk += prob * loss.eval(p, &estimate)?;
        prob_total += prob;

        // Odometer step, keeping counts incremental.
        let mut pos = n_us;
        loop {
            if pos == 0 {
                debug_assert!((prob_total - 1.0).abs() < 1e-9);
                return Ok(risk);
            }
            pos -= 1;
            for &x in &col_support[seq[pos]] {
                counts[x] -= 1;
            }
            if seq[pos] + 1 < b as usize {
                seq[pos] += 1;
                for &x in &col_support[seq[pos]] {
                    counts[x] += 1;
                }
                break;
            }
            seq[pos] = 0;
            for &x in &col_support[seq[pos]] {
                counts[x] += 1;
            }
        }
    }
}

/// Marginal equivalence of two mechanisms over the same (v, eps): identical
/// estimator coefficients and success probabilities, decided exactly on the
/// integer parameter triples.
pub fn equivalence_check(a: &Mechanism, b: &Mechanism) -> Result<bool, SimError> {
    if a.v() != b.v() {
        return Err(SimError::MismatchedV { a: a.v(), b: b.v() });
    }
    if a.eps() != b.eps() {
        return Err(SimError::MismatchedEps {
            a: a.eps(),
            b: b.eps(),
        });
    }
    let pa = match a.uniformity() {
        Some(k) => SchemeParams::BlockDesign(crate::designs::DesignParams {
            v: a.v(),
            b: a.params().b,
            r: a.params().r,
            k,
            lambda: a.params().lambda,
        }),
        None => SchemeParams::Rpbd(a.params()),
    };
    let pb = match b.uniformity() {
        Some(k) => SchemeParams::BlockDesign(crate::designs::DesignParams {
            v: b.v(),
            b: b.params().b,
            r: b.params().r,
            k,
            lambda: b.params().lambda,
        }),
        None => SchemeParams::Rpbd(b.params()),
    };
    Ok(risk::marginally_equivalent(&pa, &pb)?)
}
