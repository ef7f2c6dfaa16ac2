//! Closed-form l2^2 risks, the optimal-uniformity machinery, the minimax
//! baseline, loss functions, and marginal-equivalence predicates.

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::designs::{DesignParams, RpbdParams};

#[derive(Debug, Error)]
pub enum RiskError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("bad range: {0}")]
    BadRange(String),
    #[error("mismatched input sizes: v = {a} vs v = {b}")]
    MismatchedV { a: u64, b: u64 },
    #[error("dimension mismatch: expected {expect}, got {got}")]
    DimensionMismatch { expect: usize, got: usize },
}

/// Parameters of a scheme, as far as risk evaluation is concerned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeParams {
    BlockDesign(DesignParams),
    Rpbd(RpbdParams),
}

impl SchemeParams {
    pub fn v(&self) -> u64 {
        match self {
            SchemeParams::BlockDesign(p) => p.v,
            SchemeParams::Rpbd(p) => p.v,
        }
    }

    /// The (b, r, lambda) triple.
    pub fn triple(&self) -> (u64, u64, u64) {
        match self {
            SchemeParams::BlockDesign(p) => (p.b, p.r, p.lambda),
            SchemeParams::Rpbd(p) => (p.b, p.r, p.lambda),
        }
    }

    fn validate(&self) -> Result<(), RiskError> {
        match self {
            SchemeParams::BlockDesign(p) => p.validate(),
            SchemeParams::Rpbd(p) => RpbdParams::new(p.v, p.b, p.r, p.lambda).map(|_| ()),
        }
        .map_err(|e| RiskError::InvalidParams(e.to_string()))
    }
}

/// Where to evaluate a risk formula.
#[derive(Debug, Clone, Copy)]
pub enum RiskPoint<'a> {
    WorstCase,
    Distribution(&'a [f64]),
}

/// l2^2 risk times n.
///
/// Block designs use the (v, k)-only closed form; RPBDs use the
/// (v, b, r, lambda) closed form. The worst case drops the
/// `1/v - sum P_x^2` correction, which vanishes at uniform P.
pub fn risk_l2(params: &SchemeParams, eps: f64, at: RiskPoint) -> Result<f64, RiskError> {
    params.validate()?;
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(RiskError::InvalidParams(format!(
            "epsilon must be positive and finite, got {eps}"
        )));
    }
    let v = params.v();
    let base = match params {
        SchemeParams::BlockDesign(p) => block_worst_case_times_n(p.v, p.k, eps),
        SchemeParams::Rpbd(p) => rpbd_worst_case_times_n(p, eps),
    };
    match at {
        RiskPoint::WorstCase => Ok(base),
        RiskPoint::Distribution(p) => {
            if p.len() as u64 != v {
                return Err(RiskError::DimensionMismatch {
                    expect: v as usize,
                    got: p.len(),
                });
            }
            let total: f64 = p.iter().sum();
            if p.iter().any(|&x| x < 0.0) || (total - 1.0).abs() > 1e-9 {
                return Err(RiskError::InvalidParams(
                    "P must be a probability vector".into(),
                ));
            }
            let sq: f64 = p.iter().map(|&x| x * x).sum();
            Ok(base + 1.0 / v as f64 - sq)
        }
    }
}

/// (v-1)^2 (k e^eps + v - k)^2 / (k (v-k) (e^eps - 1)^2 v).
pub fn block_worst_case_times_n(v: u64, k: u64, eps: f64) -> f64 {
    let e = eps.exp();
    let (v_f, k_f) = (v as f64, k as f64);
    let num = (v_f - 1.0).powi(2) * (k_f * e + v_f - k_f).powi(2);
    let den = k_f * (v_f - k_f) * (e - 1.0).powi(2) * v_f;
    num / den
}

fn rpbd_worst_case_times_n(p: &RpbdParams, eps: f64) -> f64 {
    let e = eps.exp();
    let (v, b, r, lam) = (p.v as f64, p.b as f64, p.r as f64, p.lambda as f64);
    let front = (r * e + (v - 1.0) * (lam * e + r - lam)) / ((r - lam).powi(2) * (e - 1.0).powi(2) * v);
    let bracket = v * (b - r) + (v - 1.0) * (r - lam) * (e - 1.0);
    front * bracket
}

/// E(k1, k2; v) = sqrt((v-k1)(v-k2)/(k1 k2)), with E(0, k2; v) = infinity.
pub fn e_threshold(k1: u64, k2: u64, v: u64) -> Result<f64, RiskError> {
    if !(k1 < k2 && k2 <= v) {
        return Err(RiskError::BadRange(format!(
            "need 0 <= k1 < k2 <= v, got k1={k1}, k2={k2}, v={v}"
        )));
    }
    if k1 == 0 {
        return Ok(f64::INFINITY);
    }
    Ok((((v - k1) * (v - k2)) as f64 / (k1 * k2) as f64).sqrt())
}

/// K_opt(v, eps): the uniformity parameters minimizing
/// (k e^eps + v - k)^2 / (k (v-k)), found by the threshold-interval test
/// `E(k, k+1; v) <= e^eps <= E(k-1, k; v)`.
pub fn k_opt(v: u64, eps: f64) -> Vec<u64> {
    k_opt_from_e(v, eps.exp())
}

/// As [`k_opt`], parameterized by e^eps directly so callers holding an exact
/// e^eps value avoid the exp/ln round trip.
pub fn k_opt_from_e(v: u64, e_eps: f64) -> Vec<u64> {
    assert!(v >= 2, "need v >= 2");
    assert!(e_eps > 1.0, "need e^eps > 1");
    // The optimum sits next to v / (e^eps + 1); scan a small safety window.
    let center = (v as f64 / (e_eps + 1.0)).floor() as i64;
    let mut out = Vec::new();
    for k in center - 2..=center + 2 {
        if k < 1 || k as u64 > v - 1 {
            continue;
        }
        let k = k as u64;
        let lo = e_threshold(k, k + 1, v).unwrap();
        let hi = e_threshold(k - 1, k, v).unwrap();
        if lo <= e_eps && e_eps <= hi {
            out.push(k);
        }
    }
    debug_assert!(!out.is_empty());
    debug_assert!(out.len() <= 2);
    out
}

/// Minimax risk M(v, n, eps) among unbiased eps-LDP schemes: the block
/// design worst-case risk at any k in K_opt, divided by n.
pub fn minimax(v: u64, n: u64, eps: f64) -> f64 {
    minimax_times_n(v, eps) / n as f64
}

/// n * M(v, n, eps), which is n-free.
pub fn minimax_times_n(v: u64, eps: f64) -> f64 {
    let k = k_opt(v, eps)[0];
    block_worst_case_times_n(v, k, eps)
}

/// Marginal equivalence of two schemes over the same input size.
///
/// Two block designs are equivalent iff k = k'; two RPBD triples iff exactly
/// proportional. Mixed comparisons route the block design through its
/// (b, r, lambda) triple; for block designs this agrees with the k-test by
/// the counting identities.
pub fn marginally_equivalent(a: &SchemeParams, b: &SchemeParams) -> Result<bool, RiskError> {
    if a.v() != b.v() {
        return Err(RiskError::MismatchedV { a: a.v(), b: b.v() });
    }
    a.validate()?;
    b.validate()?;
    if let (SchemeParams::BlockDesign(pa), SchemeParams::BlockDesign(pb)) = (a, b) {
        return Ok(pa.k == pb.k);
    }
    Ok(proportional(a.triple(), b.triple()))
}

/// Exact proportionality of integer triples by cross-multiplication.
fn proportional(a: (u64, u64, u64), b: (u64, u64, u64)) -> bool {
    let (ab, ar, al) = (a.0 as u128, a.1 as u128, a.2 as u128);
    let (bb, br, bl) = (b.0 as u128, b.1 as u128, b.2 as u128);
    ab * br == bb * ar && ab * bl == bb * al
}

/// The subset-selection ratio [b : r : lambda] of Eq-style
/// [(v/k)(v-1)/(k-1) : (v-1)/(k-1) : 1], cleared to least integers.
///
/// k = 1 returns the degenerate lambda = 0 triple [v : 1 : 0].
pub fn ss_ratio(v: u64, k: u64) -> Result<(u64, u64, u64), RiskError> {
    if !(1 <= k && k <= v - 1) {
        return Err(RiskError::BadRange(format!(
            "need 1 <= k <= v-1, got k={k}, v={v}"
        )));
    }
    if k == 1 {
        return Ok((v, 1, 0));
    }
    let triple = (v * (v - 1), k * (v - 1), k * (k - 1));
    let g = gcd(gcd(triple.0, triple.1), triple.2);
    Ok((triple.0 / g, triple.1 / g, triple.2 / g))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The l_u^u loss, decomposable coordinate-wise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LossSpec {
    pub u: f64,
}

impl LossSpec {
    pub fn new(u: f64) -> Result<Self, RiskError> {
        if !(u >= 1.0) || !u.is_finite() {
            return Err(RiskError::BadRange(format!("need u >= 1, got {u}")));
        }
        Ok(LossSpec { u })
    }

    /// sum_x |p_x - p_hat_x|^u.
    pub fn eval(&self, p: &[f64], p_hat: &[f64]) -> Result<f64, RiskError> {
        if p.len() != p_hat.len() {
            return Err(RiskError::DimensionMismatch {
                expect: p.len(),
                got: p_hat.len(),
            });
        }
        Ok(p
            .iter()
            .zip(p_hat)
            .map(|(&a, &b)| (a - b).abs().powf(self.u))
            .sum())
    }
}

/// Worst-case risk, minimax baseline, their ratio, and the communication
/// cost of a scheme.
#[derive(Debug, Clone, Serialize)]
pub struct RiskReport {
    /// Worst-case l2^2 risk times n.
    pub risk_times_n: f64,
    /// M(v, n, eps) times n.
    pub minimax_times_n: f64,
    /// risk / minimax (n-free).
    pub ratio: f64,
    /// k used for the minimax baseline.
    pub minimax_k: u64,
    /// Exact number of mechanism outputs.
    #[serde(serialize_with = "crate::risk::serialize_biguint")]
    pub b: BigUint,
    pub log2_b: f64,
}

pub(crate) fn serialize_biguint<S: serde::Serializer>(
    b: &BigUint,
    s: S,
) -> Result<S::Ok, S::Error> {
    s.serialize_str(&b.to_string())
}

impl RiskReport {
    /// Builds the report for a scheme with the given exact communication
    /// cost (which may exceed the u64 parameter fields for complete designs).
    pub fn build(params: &SchemeParams, eps: f64, b_exact: BigUint) -> Result<Self, RiskError> {
        let risk_times_n = risk_l2(params, eps, RiskPoint::WorstCase)?;
        let k = k_opt(params.v(), eps)[0];
        let minimax_times_n = block_worst_case_times_n(params.v(), k, eps);
        let log2_b = log2_biguint(&b_exact);
        Ok(RiskReport {
            risk_times_n,
            minimax_times_n,
            ratio: risk_times_n / minimax_times_n,
            minimax_k: k,
            b: b_exact,
            log2_b,
        })
    }
}

/// log2 of a big integer, to f64 precision.
pub fn log2_biguint(b: &BigUint) -> f64 {
    let bits = b.bits();
    if bits <= 53 {
        return (u64::try_from(b.clone()).unwrap() as f64).log2();
    }
    // Take the top 64 bits and scale.
    let shift = bits - 53;
    let top: BigUint = b >> shift;
    (u64::try_from(top).unwrap() as f64).log2() + shift as f64
}

/// Exact-rational evaluation of the worst-case risk formulas, used to pin
/// reference constants and to cross-check the f64 routes.
pub mod exact {
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn int(x: u64) -> BigRational {
        BigRational::from_integer(BigInt::from(x))
    }

    /// Block-design worst-case risk times n at rational e^eps.
    pub fn block_worst_case_times_n(v: u64, k: u64, e_eps: &BigRational) -> BigRational {
        let one = BigRational::from_integer(BigInt::from(1));
        let num = int(v - 1) * int(v - 1) * (int(k) * e_eps + int(v - k)).pow(2);
        let den = int(k) * int(v - k) * (e_eps - &one).pow(2) * int(v);
        num / den
    }

    /// RPBD worst-case risk times n at rational e^eps.
    pub fn rpbd_worst_case_times_n(
        v: u64,
        b: u64,
        r: u64,
        lambda: u64,
        e_eps: &BigRational,
    ) -> BigRational {
        let one = BigRational::from_integer(BigInt::from(1));
        let front_num = int(r) * e_eps + int(v - 1) * (int(lambda) * e_eps + int(r - lambda));
        let front_den = int(r - lambda).pow(2) * (e_eps - &one).pow(2) * int(v);
        let bracket = int(v) * int(b - r) + int(v - 1) * int(r - lambda) * (e_eps - &one);
        front_num / front_den * bracket
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fano() -> SchemeParams {
        SchemeParams::BlockDesign(DesignParams::new(7, 7, 3, 3, 1).unwrap())
    }

    #[test]
    fn fano_worst_case_risk() {
        let r = risk_l2(&fano(), 3.0f64.ln(), RiskPoint::WorstCase).unwrap();
        assert!((r - 6084.0 / 336.0).abs() < 1e-9);
        assert!((r - 18.1071428571).abs() < 1e-6);
    }

    #[test]
    fn pgr_truncation_risk_matches_direct_formula() {
        let p = SchemeParams::Rpbd(RpbdParams::new(2000, 5461, 1365, 341).unwrap());
        let r = risk_l2(&p, 3.0f64.ln(), RiskPoint::WorstCase).unwrap();
        assert!((r - 5999.0703).abs() < 5e-4, "got {r}");
        // Exact rational route agrees.
        let e3 = BigRational::from_integer(BigInt::from(3));
        let exact_val = exact::rpbd_worst_case_times_n(2000, 5461, 1365, 341, &e3);
        let approx = rational_to_f64(&exact_val);
        assert!((r - approx).abs() / approx < 1e-12);
    }

    #[test]
    fn quartic_truncation_risk_matches_paper_print() {
        let p = SchemeParams::Rpbd(RpbdParams::new(2000, 2917, 729, 182).unwrap());
        let r = risk_l2(&p, 3.0f64.ln(), RiskPoint::WorstCase).unwrap();
        assert!((r - 5996.5160).abs() < 5e-4, "got {r}");
    }

    fn rational_to_f64(x: &BigRational) -> f64 {
        // Good enough for test comparison at moderate magnitudes.
        let num = x.numer();
        let den = x.denom();
        let scale = BigInt::from(1u64 << 60);
        let scaled = (num * &scale) / den;
        let s: f64 = scaled.to_string().parse().unwrap();
        s / (1u64 << 60) as f64
    }

    #[test]
    fn rr_v2_worst_case_is_two() {
        let p = SchemeParams::BlockDesign(DesignParams::new(2, 2, 1, 1, 0).unwrap());
        let r = risk_l2(&p, 3.0f64.ln(), RiskPoint::WorstCase).unwrap();
        assert!((r - 2.0).abs() < 1e-12);
    }

    #[test]
    fn full_risk_equals_worst_case_at_uniform() {
        let uniform = vec![1.0 / 7.0; 7];
        let at_p = risk_l2(&fano(), 1.0, RiskPoint::Distribution(&uniform)).unwrap();
        let worst = risk_l2(&fano(), 1.0, RiskPoint::WorstCase).unwrap();
        assert!((at_p - worst).abs() < 1e-9);
    }

    #[test]
    fn worst_case_dominates_all_distributions() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let worst = risk_l2(&fano(), 0.8, RiskPoint::WorstCase).unwrap();
        for _ in 0..100 {
            let mut p: Vec<f64> = (0..7).map(|_| rng.random::<f64>()).collect();
            let total: f64 = p.iter().sum();
            p.iter_mut().for_each(|x| *x /= total);
            let r = risk_l2(&fano(), 0.8, RiskPoint::Distribution(&p)).unwrap();
            assert!(r <= worst + 1e-9);
        }
    }

    #[test]
    fn block_and_rpbd_routes_agree() {
        // Substituting (b, r, lambda) = (v(v-1), k(v-1), k(k-1)) into the
        // RPBD formula recovers the block-design formula.
        for (v, k) in [(7u64, 3u64), (15, 7), (37, 9), (13, 4), (2000, 500)] {
            for eps in [0.01, 0.5, 3.0f64.ln(), 2.0] {
                let block = block_worst_case_times_n(v, k, eps);
                let rp = SchemeParams::Rpbd(
                    RpbdParams::new(v, v * (v - 1), k * (v - 1), k * (k - 1)).unwrap(),
                );
                let rpbd = risk_l2(&rp, eps, RiskPoint::WorstCase).unwrap();
                assert!(
                    (block - rpbd).abs() / block < 1e-9,
                    "v={v} k={k} eps={eps}: {block} vs {rpbd}"
                );
            }
        }
    }

    #[test]
    fn e_threshold_values() {
        assert!((e_threshold(1, 2, 4).unwrap() - 3.0f64.sqrt()).abs() < 1e-12);
        assert_eq!(e_threshold(0, 1, 10).unwrap(), f64::INFINITY);
        assert!(e_threshold(2, 1, 4).is_err());
        // Strictly decreasing in each argument.
        for v in [5u64, 9, 30] {
            for k in 1..v - 2 {
                assert!(e_threshold(k, k + 1, v).unwrap() >= e_threshold(k + 1, k + 2, v).unwrap());
            }
        }
    }

    #[test]
    fn k_opt_examples() {
        assert_eq!(k_opt_from_e(8, 3.0), vec![2]);
        assert_eq!(k_opt_from_e(2000, 3.0), vec![500]);
        // Boundary e^eps = E(1,2;4) = sqrt(3) yields a doubleton.
        assert_eq!(k_opt_from_e(4, 3.0f64.sqrt()), vec![1, 2]);
        assert_eq!(k_opt(2, 3.0f64.ln()), vec![1]);
    }

    fn objective(v: u64, k: u64, e: f64) -> f64 {
        let (v, k) = (v as f64, k as f64);
        (k * e + v - k).powi(2) / (k * (v - k))
    }

    #[test]
    fn k_opt_matches_brute_force_on_grid() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..1000 {
            let v = rng.random_range(2..=5000u64);
            let e = rng.random_range(1.001..v as f64);
            let kset = k_opt_from_e(v, e);
            let brute_min = (1..v)
                .map(|k| objective(v, k, e))
                .fold(f64::INFINITY, f64::min);
            for &k in &kset {
                let val = objective(v, k, e);
                assert!(
                    (val - brute_min).abs() <= 1e-12 * brute_min,
                    "v={v} e={e} k={k}: {val} vs min {brute_min}"
                );
            }
            // Remark-2 envelope.
            let lo = (v as f64 / (e + 1.0)).floor() as u64;
            let hi = (v as f64 / (e + 1.0)).ceil() as u64;
            for &k in &kset {
                assert!(k == lo || k == hi, "v={v} e={e}: k={k} not in [{lo},{hi}]");
            }
        }
    }

    #[test]
    fn minimax_at_2000_log3() {
        assert!((minimax_times_n(2000, 3.0f64.ln()) - 5994.0015).abs() < 1e-6);
        let n = 1000u64;
        assert!((minimax(2000, n, 3.0f64.ln()) - 5994.0015 / n as f64).abs() < 1e-9);
        assert!((minimax_times_n(2, 3.0f64.ln()) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn minimax_tie_values_equal() {
        // At the boundary e^eps = E(1,2;4) both k give the same risk; the
        // shared prefactor (v-1)^2/((e-1)^2 v) cancels in the comparison.
        let e = 3.0f64.sqrt();
        let kset = k_opt_from_e(4, e);
        assert_eq!(kset, vec![1, 2]);
        let a = objective(4, 1, e);
        let b = objective(4, 2, e);
        assert!((a - b).abs() < 1e-12 * a.abs());
    }

    #[test]
    fn minimax_nonincreasing_in_eps() {
        for v in [5u64, 64, 1000] {
            let mut prev = f64::INFINITY;
            for i in 1..60 {
                let eps = 0.05 * i as f64;
                let m = minimax_times_n(v, eps);
                assert!(m <= prev + 1e-9 * prev, "v={v} eps={eps}");
                prev = m;
            }
        }
    }

    #[test]
    fn equivalence_block_designs_by_k() {
        let fano = fano();
        let sylv = SchemeParams::BlockDesign(DesignParams::new(7, 7, 3, 3, 1).unwrap());
        let ss = SchemeParams::BlockDesign(DesignParams::new(7, 35, 15, 3, 5).unwrap());
        let ss2 = SchemeParams::BlockDesign(DesignParams::new(7, 21, 6, 2, 1).unwrap());
        assert!(marginally_equivalent(&fano, &sylv).unwrap());
        assert!(marginally_equivalent(&fano, &ss).unwrap());
        assert!(!marginally_equivalent(&fano, &ss2).unwrap());
    }

    #[test]
    fn equivalence_rpbd_by_proportionality() {
        let a = SchemeParams::Rpbd(RpbdParams::new(5, 7, 3, 1).unwrap());
        let b = SchemeParams::Rpbd(RpbdParams::new(5, 14, 6, 2).unwrap());
        let c = SchemeParams::Rpbd(RpbdParams::new(5, 14, 6, 3).unwrap());
        assert!(marginally_equivalent(&a, &b).unwrap());
        assert!(!marginally_equivalent(&a, &c).unwrap());
    }

    #[test]
    fn equivalence_mixed_route_agrees_with_k_test() {
        // A block design compared as an RPBD triple must match the k-test.
        let fano_bd = fano();
        let fano_rpbd = SchemeParams::Rpbd(RpbdParams::new(7, 7, 3, 1).unwrap());
        let ss = SchemeParams::BlockDesign(DesignParams::new(7, 35, 15, 3, 5).unwrap());
        assert!(marginally_equivalent(&fano_rpbd, &ss).unwrap());
        assert!(marginally_equivalent(&fano_bd, &fano_rpbd).unwrap());
    }

    #[test]
    fn equivalence_mismatched_v_fails() {
        let a = fano();
        let b = SchemeParams::BlockDesign(DesignParams::new(11, 11, 5, 5, 2).unwrap());
        assert!(matches!(
            marginally_equivalent(&a, &b),
            Err(RiskError::MismatchedV { a: 7, b: 11 })
        ));
    }

    #[test]
    fn ss_ratio_values() {
        assert_eq!(ss_ratio(7, 3).unwrap(), (7, 3, 1));
        assert_eq!(ss_ratio(2000, 500).unwrap(), (7996, 1999, 499));
        assert_eq!(ss_ratio(9, 1).unwrap(), (9, 1, 0));
        assert!(ss_ratio(9, 9).is_err());
    }

    #[test]
    fn loss_eval_cases() {
        let l2 = LossSpec::new(2.0).unwrap();
        let p = [0.5, 0.5];
        assert_eq!(l2.eval(&p, &p).unwrap(), 0.0);
        let l1 = LossSpec::new(1.0).unwrap();
        let r = l1.eval(&[1.0, 0.0], &[0.6, 0.4]).unwrap();
        assert!((r - 0.8).abs() < 1e-15);
        assert!(LossSpec::new(1.5).is_ok());
        assert!(LossSpec::new(0.5).is_err());
        assert!(l1.eval(&[1.0], &[0.5, 0.5]).is_err());
    }

    #[test]
    fn risk_report_for_ss_baseline() {
        use crate::designs::binomial_big;
        let params = SchemeParams::BlockDesign(DesignParams::new(6, 20, 10, 3, 4).unwrap());
        let report = RiskReport::build(&params, 1.0, binomial_big(6, 3)).unwrap();
        assert!(report.ratio >= 1.0 - 1e-9);
        assert!((report.log2_b - 20f64.log2()).abs() < 1e-9);
        // Big-b case: C(2000, 500).
        let big = binomial_big(2000, 500);
        let log2 = log2_biguint(&big);
        // log10 > 486 <=> log2 > 486 * log2(10).
        assert!(log2 / 10.0f64.log2() > 486.0);
    }
}
