//! Scheme selection: enumerate catalog candidates at a given input size and
//! privacy budget, rank them by (risk ratio, communication cost), and
//! generate sweep data comparing proposed and baseline scheme sets.

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::designs::{binomial_big, Construction, DesignParams, FamilyKind, RpbdParams};
use crate::ff::is_prime_power;
use crate::risk::{self, RiskError, RiskReport, SchemeParams};

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("no candidate: {0}")]
    NoCandidate(String),
    #[error(transparent)]
    Risk(#[from] RiskError),
}

/// Default cap on the source size v' when hunting for truncatable designs.
pub const DEFAULT_VPRIME_CAP: u64 = 100_000;

/// A family choice, optionally pinned to one projective-geometry field order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FamilySel {
    pub kind: FamilyKind,
    /// Restricts ProjectiveGeometry to this q; ignored for other kinds.
    pub pg_q: Option<u64>,
}

impl From<FamilyKind> for FamilySel {
    fn from(kind: FamilyKind) -> Self {
        FamilySel { kind, pg_q: None }
    }
}

impl FamilySel {
    pub fn pg(q: u64) -> Self {
        FamilySel {
            kind: FamilyKind::ProjectiveGeometry,
            pg_q: Some(q),
        }
    }

    pub fn matches(&self, c: &Construction) -> bool {
        if c.family() != self.kind {
            return false;
        }
        match (self.kind, c) {
            (FamilyKind::ProjectiveGeometry, Construction::ProjectiveGeometry { q, .. }) => {
                self.pg_q.is_none_or(|want| *q == want)
            }
            _ => true,
        }
    }
}

/// All selectable families, unrestricted.
pub fn all_families() -> Vec<FamilySel> {
    FamilyKind::ALL.iter().copied().map(FamilySel::from).collect()
}

/// All catalog keys with v in [v_min, v_max], sorted by v then family
/// order. Complete designs are excluded (they are parameterized separately
/// by k).
pub fn catalog_instances(v_min: u64, v_max: u64) -> Vec<(Construction, DesignParams)> {
    let v_min = v_min.max(2);
    let mut out: Vec<(Construction, DesignParams)> = Vec::new();

    for v in v_min..=v_max {
        out.push((Construction::Trivial { v }, Construction::Trivial { v }.params().unwrap()));
    }
    // Projective geometry: (q, t) with v = (q^t - 1)/(q - 1) <= v_max.
    for q in 2..=v_max {
        if is_prime_power(q).is_none() {
            continue;
        }
        if q + 1 > v_max {
            break;
        }
        let mut t = 2u32;
        loop {
            let c = Construction::ProjectiveGeometry { q, t };
            match c.params() {
                Ok(p) if p.v <= v_max => {
                    if p.v >= v_min {
                        out.push((c, p));
                    }
                }
                _ => break,
            }
            t += 1;
        }
    }
    for t in 2..=62u32 {
        let v = (1u64 << t) - 1;
        if v > v_max {
            break;
        }
        if v >= v_min {
            let c = Construction::SylvesterHadamard { t };
            out.push((c, c.params().unwrap()));
        }
    }
    for v in v_min..=v_max {
        let c = Construction::Paley { v };
        if c.validate().is_ok() {
            out.push((c, c.params().unwrap()));
        }
    }
    for q in (3..).step_by(2) {
        let v = q * (q + 2);
        if v > v_max {
            break;
        }
        let c = Construction::TwinPrime { q };
        if v >= v_min && c.validate().is_ok() {
            out.push((c, c.params().unwrap()));
        }
    }
    for t in (1..).step_by(2) {
        let v = 4 * t * t + 1;
        if v > v_max {
            break;
        }
        let c = Construction::QuarticNonzero { v };
        if v >= v_min && c.validate().is_ok() {
            out.push((c, c.params().unwrap()));
        }
    }
    for t in (1..).step_by(2) {
        let v = 4 * t * t + 9;
        if v > v_max {
            break;
        }
        let c = Construction::QuarticWithZero { v };
        if v >= v_min && c.validate().is_ok() {
            out.push((c, c.params().unwrap()));
        }
    }

    out.sort_by_key(|(c, p)| (p.v, c.family()));
    out
}

/// How a candidate scheme is obtained from its catalog source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Recipe {
    Direct,
    Truncate { from_v: u64 },
    Derived { from_v: u64 },
    Residual { from_v: u64 },
}

/// A ranked scheme candidate.
#[derive(Debug, Clone, Serialize)]
pub struct SchemeCandidate {
    pub construction: Construction,
    pub recipe: Recipe,
    /// Resulting parameters; absent only for complete designs whose counts
    /// exceed u64.
    pub params: Option<CandidateParams>,
    pub report: RiskReport,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CandidateParams {
    BlockDesign(DesignParams),
    Rpbd(RpbdParams),
}

impl CandidateParams {
    pub fn as_scheme(&self) -> SchemeParams {
        match self {
            CandidateParams::BlockDesign(p) => SchemeParams::BlockDesign(*p),
            CandidateParams::Rpbd(p) => SchemeParams::Rpbd(*p),
        }
    }
}

/// Smallest catalog instance of one family with v' >= v (within the cap),
/// scanning upward from v.
pub fn smallest_instance_at_least(
    sel: FamilySel,
    v: u64,
    cap: u64,
) -> Option<(Construction, DesignParams)> {
    let check = |c: Construction| -> Option<(Construction, DesignParams)> {
        c.params().ok().map(|p| (c, p))
    };
    match sel.kind {
        FamilyKind::Trivial => check(Construction::Trivial { v: v.max(2) }),
        FamilyKind::Complete => None,
        FamilyKind::SylvesterHadamard => {
            let t = (2..=62u32).find(|&t| (1u64 << t) - 1 >= v)?;
            if (1u64 << t) - 1 > cap {
                return None;
            }
            check(Construction::SylvesterHadamard { t })
        }
        FamilyKind::Paley => (v.max(3)..=cap)
            .find(|&w| Construction::Paley { v: w }.validate().is_ok())
            .and_then(|w| check(Construction::Paley { v: w })),
        FamilyKind::TwinPrime => {
            let mut q = 3u64;
            loop {
                let vp = q * (q + 2);
                if vp > cap {
                    return None;
                }
                if vp >= v && (Construction::TwinPrime { q }).validate().is_ok() {
                    return check(Construction::TwinPrime { q });
                }
                q += 2;
            }
        }
        FamilyKind::QuarticNonzero => {
            let mut t = 1u64;
            loop {
                let vp = 4 * t * t + 1;
                if vp > cap {
                    return None;
                }
                if vp >= v && (Construction::QuarticNonzero { v: vp }).validate().is_ok() {
                    return check(Construction::QuarticNonzero { v: vp });
                }
                t += 2;
            }
        }
        FamilyKind::QuarticWithZero => {
            let mut t = 1u64;
            loop {
                let vp = 4 * t * t + 9;
                if vp > cap {
                    return None;
                }
                if vp >= v && (Construction::QuarticWithZero { v: vp }).validate().is_ok() {
                    return check(Construction::QuarticWithZero { v: vp });
                }
                t += 2;
            }
        }
        FamilyKind::ProjectiveGeometry => {
            // With q pinned, take the smallest power; otherwise consider
            // every prime power q up to 64 and keep the smallest v'.
            let qs: Vec<u64> = match sel.pg_q {
                Some(q) => vec![q],
                None => (2..=64).filter(|&q| is_prime_power(q).is_some()).collect(),
            };
            let mut best: Option<(Construction, DesignParams)> = None;
            for q in qs {
                for t in 2..=62u32 {
                    match (Construction::ProjectiveGeometry { q, t }).params() {
                        Ok(p) if p.v >= v && p.v <= cap => {
                            if best.as_ref().is_none_or(|(_, bp)| p.v < bp.v) {
                                best = Some((Construction::ProjectiveGeometry { q, t }, p));
                            }
                            break;
                        }
                        Ok(_) => continue,
                        Err(_) => break,
                    }
                }
            }
            best
        }
    }
}

/// Options for [`best_scheme`].
#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub families: Vec<FamilySel>,
    pub allow_truncation: bool,
    pub vprime_cap: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            families: all_families(),
            allow_truncation: true,
            vprime_cap: DEFAULT_VPRIME_CAP,
        }
    }
}

/// Candidate schemes at (v, eps), ranked by (risk ratio, communication
/// cost), ties broken by catalog family order.
///
/// Candidates: direct catalog designs at v with k in K_opt; per-family
/// truncations of the smallest instance with v' >= v; derived/residual
/// designs from Hadamard-type instances at 2v+1 / 2v-1; and the complete
/// (subset-selection) baseline at k in K_opt with exact big-integer cost.
pub fn best_scheme(v: u64, eps: f64, opts: &SearchOptions) -> Result<Vec<SchemeCandidate>, SearchError> {
    if v < 2 {
        return Err(SearchError::NoCandidate(format!("need v >= 2, got {v}")));
    }
    let kopt = risk::k_opt(v, eps);
    let mut out: Vec<SchemeCandidate> = Vec::new();

    fn push_block(
        out: &mut Vec<SchemeCandidate>,
        eps: f64,
        construction: Construction,
        recipe: Recipe,
        p: DesignParams,
    ) -> Result<(), SearchError> {
        let scheme = SchemeParams::BlockDesign(p);
        let report = RiskReport::build(&scheme, eps, BigUint::from(p.b))?;
        out.push(SchemeCandidate {
            construction,
            recipe,
            params: Some(CandidateParams::BlockDesign(p)),
            report,
        });
        Ok(())
    }

    // (i) direct catalog designs at exactly v with optimal uniformity.
    for (c, p) in catalog_instances(v, v) {
        if opts.families.iter().any(|sel| sel.matches(&c)) && kopt.contains(&p.k) {
            push_block(&mut out, eps, c, Recipe::Direct, p)?;
        }
    }

    // (ii) smallest truncatable instance per family.
    if opts.allow_truncation {
        for &sel in &opts.families {
            if sel.kind == FamilyKind::Complete {
                continue;
            }
            let Some((c, p)) = smallest_instance_at_least(sel, v, opts.vprime_cap) else {
                continue;
            };
            if p.v == v {
                if !kopt.contains(&p.k) {
                    // Not already listed under (i); still a direct candidate.
                    push_block(&mut out, eps, c, Recipe::Direct, p)?;
                }
                continue;
            }
            let rp = RpbdParams {
                v,
                b: p.b,
                r: p.r,
                lambda: p.lambda,
            };
            let scheme = SchemeParams::Rpbd(rp);
            let report = RiskReport::build(&scheme, eps, BigUint::from(rp.b))?;
            out.push(SchemeCandidate {
                construction: c,
                recipe: Recipe::Truncate { from_v: p.v },
                params: Some(CandidateParams::Rpbd(rp)),
                report,
            });
        }
    }

    // (iii) derived/residual designs from Hadamard-type instances.
    let hadamard_kinds = [
        FamilyKind::SylvesterHadamard,
        FamilyKind::Paley,
        FamilyKind::TwinPrime,
    ];
    let hadamard_at = |vp: u64| -> Option<Construction> {
        for kind in hadamard_kinds {
            if !opts.families.iter().any(|s| s.kind == kind) {
                continue;
            }
            let c = match kind {
                FamilyKind::SylvesterHadamard => {
                    if !(vp + 1).is_power_of_two() {
                        continue;
                    }
                    Construction::SylvesterHadamard {
                        t: (vp + 1).trailing_zeros(),
                    }
                }
                FamilyKind::Paley => Construction::Paley { v: vp },
                FamilyKind::TwinPrime => {
                    let root = (vp + 1).isqrt();
                    if root * root != vp + 1 || root < 2 {
                        continue;
                    }
                    Construction::TwinPrime { q: root - 1 }
                }
                _ => unreachable!(),
            };
            if c.validate().is_ok() {
                return Some(c);
            }
        }
        None
    };
    if v % 4 == 1 && v >= 5 {
        let vp = 2 * v + 1;
        if let Some(c) = hadamard_at(vp) {
            let p = DesignParams::new(v, 2 * v, v - 1, (v - 1) / 2, (v - 3) / 2)
                .expect("derived parameters are a valid block design");
            push_block(&mut out, eps, c, Recipe::Derived { from_v: vp }, p)?;
        }
    }
    if v % 2 == 0 && v >= 4 {
        let vp = 2 * v - 1;
        if let Some(c) = hadamard_at(vp) {
            let p = DesignParams::new(v, 2 * v - 2, v - 1, v / 2, v / 2 - 1)
                .expect("residual parameters are a valid block design");
            push_block(&mut out, eps, c, Recipe::Residual { from_v: vp }, p)?;
        }
    }

    // (iv) the complete-design baseline at optimal uniformity.
    if opts.families.iter().any(|s| s.kind == FamilyKind::Complete) {
        let k = kopt[0];
        let c = Construction::Complete { v, k };
        let b_big = binomial_big(v, k);
        match c.params() {
            Ok(p) => push_block(&mut out, eps, c, Recipe::Direct, p)?,
            Err(_) => {
                // Counts exceed u64; the risk closed form needs only (v, k).
                let risk_times_n = risk::block_worst_case_times_n(v, k, eps);
                let minimax_times_n = risk::minimax_times_n(v, eps);
                let report = RiskReport {
                    risk_times_n,
                    minimax_times_n,
                    ratio: risk_times_n / minimax_times_n,
                    minimax_k: k,
                    log2_b: risk::log2_biguint(&b_big),
                    b: b_big,
                };
                out.push(SchemeCandidate {
                    construction: c,
                    recipe: Recipe::Direct,
                    params: None,
                    report,
                });
            }
        }
    }

    if out.is_empty() {
        return Err(SearchError::NoCandidate(format!(
            "no family instance with v' >= {v} below the cap {}",
            opts.vprime_cap
        )));
    }

    out.sort_by(|a, b| {
        a.report
            .ratio
            .total_cmp(&b.report.ratio)
            .then_with(|| a.report.b.cmp(&b.report.b))
            .then_with(|| a.construction.family().cmp(&b.construction.family()))
    });
    out.dedup_by(|a, b| a.construction == b.construction && a.recipe == b.recipe);
    Ok(out)
}

/// A point (v, eps) at which a catalog design attains the minimax risk with
/// minimum communication cost, using eps = log(v/k - 1).
#[derive(Debug, Clone, Serialize)]
pub struct OptimalPoint {
    pub construction: Construction,
    pub v: u64,
    pub k: u64,
    pub eps: f64,
}

/// The (v, eps) coverage points for the selected families up to v_max.
pub fn optimal_points(families: &[FamilySel], v_max: u64) -> Vec<OptimalPoint> {
    let mut out = Vec::new();
    for (c, p) in catalog_instances(2, v_max) {
        if !families.iter().any(|sel| sel.matches(&c)) {
            continue;
        }
        // Need e^eps = v/k - 1 > 1, i.e. k < v/2.
        if 2 * p.k >= p.v {
            continue;
        }
        let e_star = (p.v - p.k) as f64 / p.k as f64;
        let eps = e_star.ln();
        debug_assert!(
            risk::k_opt_from_e(p.v, e_star).contains(&p.k),
            "optimal point check failed for {c:?}"
        );
        out.push(OptimalPoint {
            construction: c,
            v: p.v,
            k: p.k,
            eps,
        });
    }
    out
}

/// One method's entry in a sweep row.
#[derive(Debug, Clone, Serialize)]
pub struct MethodPoint {
    pub construction: Construction,
    pub from_v: u64,
    pub ratio: f64,
    pub b: u64,
}

/// Per-v comparison of the proposed and baseline scheme sets.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub v: u64,
    pub baseline: Option<MethodPoint>,
    pub proposed: Option<MethodPoint>,
}

/// For each v in range, the truncated candidate from the catalog instance
/// with smallest v' >= v within each family set (ties broken by family
/// order), with its risk ratio to the minimax baseline.
pub fn sweep(
    eps: f64,
    v_min: u64,
    v_max: u64,
    proposed: &[FamilySel],
    baseline: &[FamilySel],
    vprime_cap: u64,
) -> Vec<SweepRow> {
    // Pre-enumerate instances once; selection per v is then a scan over the
    // sorted list.
    let enumerate = |sels: &[FamilySel]| -> Vec<(u64, Construction, DesignParams)> {
        let mut v: Vec<(u64, Construction, DesignParams)> = catalog_instances(2, vprime_cap)
            .into_iter()
            .filter(|(c, _)| sels.iter().any(|s| s.matches(c)))
            .map(|(c, p)| (p.v, c, p))
            .collect();
        v.sort_by_key(|(vp, c, _)| (*vp, c.family()));
        v
    };
    let proposed_set = enumerate(proposed);
    let baseline_set = enumerate(baseline);

    let pick = |set: &[(u64, Construction, DesignParams)], v: u64| -> Option<MethodPoint> {
        let idx = set.partition_point(|(vp, _, _)| *vp < v);
        let (vp, c, p) = set.get(idx)?;
        let scheme = if *vp == v {
            SchemeParams::BlockDesign(*p)
        } else {
            SchemeParams::Rpbd(RpbdParams {
                v,
                b: p.b,
                r: p.r,
                lambda: p.lambda,
            })
        };
        let risk_times_n = risk::risk_l2(&scheme, eps, risk::RiskPoint::WorstCase).ok()?;
        let ratio = risk_times_n / risk::minimax_times_n(v, eps);
        Some(MethodPoint {
            construction: *c,
            from_v: *vp,
            ratio,
            b: p.b,
        })
    };

    (v_min..=v_max)
        .map(|v| SweepRow {
            v,
            baseline: pick(&baseline_set, v),
            proposed: pick(&proposed_set, v),
        })
        .collect()
}

/// CSV with header `v,method,risk_ratio,b,log2_b`; per v the baseline row
/// precedes the proposed row; rows for missing candidates are omitted.
pub fn sweep_to_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from("v,method,risk_ratio,b,log2_b\n");
    for row in rows {
        for (name, point) in [("baseline", &row.baseline), ("proposed", &row.proposed)] {
            if let Some(p) = point {
                s.push_str(&format!(
                    "{},{},{:.10},{},{:.6}\n",
                    row.v,
                    name,
                    p.ratio,
                    p.b,
                    (p.b as f64).log2()
                ));
            }
        }
    }
    s
}

/// CSV with header `v,eps,e_eps,family,key,k`, one row per coverage point.
pub fn points_to_csv(points: &[OptimalPoint]) -> String {
    let mut s = String::from("v,eps,e_eps,family,key,k\n");
    for p in points {
        let key = p
            .construction
            .key()
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(":");
        s.push_str(&format!(
            "{},{:.10},{:.10},{},{},{}\n",
            p.v,
            p.eps,
            p.eps.exp(),
            p.construction.family().name(),
            key,
            p.k
        ));
    }
    s
}

/// The proposed/baseline family sets of the low-privacy sweep
/// (eps = 0.01, v in [2^10, 2^14 - 1]).
pub fn low_eps_sweep_families() -> (Vec<FamilySel>, Vec<FamilySel>) {
    (
        vec![
            FamilyKind::SylvesterHadamard.into(),
            FamilyKind::Paley.into(),
            FamilyKind::TwinPrime.into(),
        ],
        vec![FamilyKind::SylvesterHadamard.into()],
    )
}

/// The proposed/baseline family sets of the log-3 sweep
/// (eps = log 3, v in [(4^6-1)/3 + 1, (4^8-1)/3]).
pub fn log3_sweep_families() -> (Vec<FamilySel>, Vec<FamilySel>) {
    (
        vec![
            FamilySel::pg(4),
            FamilyKind::QuarticNonzero.into(),
            FamilyKind::QuarticWithZero.into(),
        ],
        vec![FamilySel::pg(4)],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_at_7_contains_three_symmetric_designs() {
        let instances = catalog_instances(7, 7);
        let families: Vec<FamilyKind> = instances.iter().map(|(c, _)| c.family()).collect();
        assert!(families.contains(&FamilyKind::ProjectiveGeometry));
        assert!(families.contains(&FamilyKind::Paley));
        assert!(families.contains(&FamilyKind::SylvesterHadamard));
        for (_, p) in instances.iter().filter(|(c, _)| c.family() != FamilyKind::Trivial) {
            assert_eq!(
                (p.v, p.b, p.r, p.k, p.lambda),
                (7, 7, 3, 3, 1)
            );
        }
    }

    #[test]
    fn catalog_at_15_contains_twin_prime() {
        let instances = catalog_instances(15, 15);
        assert!(instances
            .iter()
            .any(|(c, _)| matches!(c, Construction::TwinPrime { q: 3 })));
    }

    #[test]
    fn catalog_narrow_range_excludes_quartic_2917() {
        let instances = catalog_instances(2918, 2920);
        assert!(!instances
            .iter()
            .any(|(c, _)| c.family() == FamilyKind::QuarticNonzero));
    }

    #[test]
    fn catalog_sorted_by_v_then_family() {
        let instances = catalog_instances(2, 200);
        let keys: Vec<(u64, FamilyKind)> = instances.iter().map(|(c, p)| (p.v, c.family())).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn paper_example_pgr_candidate() {
        let opts = SearchOptions {
            families: vec![FamilySel::pg(4)],
            ..Default::default()
        };
        let ranked = best_scheme(2000, 3.0f64.ln(), &opts).unwrap();
        let top = &ranked[0];
        assert_eq!(top.report.b, BigUint::from(5461u64));
        assert_eq!(top.recipe, Recipe::Truncate { from_v: 5461 });
        assert!((top.report.ratio - 1.00085).abs() < 2e-4, "{}", top.report.ratio);
    }

    #[test]
    fn paper_example_quartic_candidate_beats_pgr() {
        let log3 = 3.0f64.ln();
        let pg = best_scheme(
            2000,
            log3,
            &SearchOptions {
                families: vec![FamilySel::pg(4)],
                ..Default::default()
            },
        )
        .unwrap();
        let quartic = best_scheme(
            2000,
            log3,
            &SearchOptions {
                families: vec![FamilyKind::QuarticNonzero.into()],
                ..Default::default()
            },
        )
        .unwrap();
        let q_top = &quartic[0];
        assert_eq!(q_top.report.b, BigUint::from(2917u64));
        assert_eq!(q_top.recipe, Recipe::Truncate { from_v: 2917 });
        assert!(q_top.report.risk_times_n < pg[0].report.risk_times_n);
    }

    #[test]
    fn direct_fano_has_ratio_one() {
        // Any eps with K_opt(7) = {3}: the Prop-5 interval for k = 3 is
        // [1, E(2,3;7)] = [1, sqrt(20/6)].
        let eps = 1.5f64.ln();
        assert_eq!(risk::k_opt(7, eps), vec![3]);
        let opts = SearchOptions {
            families: vec![FamilyKind::ProjectiveGeometry.into()],
            ..Default::default()
        };
        let ranked = best_scheme(7, eps, &opts).unwrap();
        let top = &ranked[0];
        assert_eq!(top.recipe, Recipe::Direct);
        assert_eq!(top.report.b, BigUint::from(7u64));
        assert!((top.report.ratio - 1.0).abs() < 1e-9);
    }

    #[test]
    fn ss_baseline_cost_is_astronomical() {
        let opts = SearchOptions {
            families: vec![FamilyKind::Complete.into()],
            allow_truncation: false,
            ..Default::default()
        };
        let ranked = best_scheme(2000, 3.0f64.ln(), &opts).unwrap();
        let ss = &ranked[0];
        assert!((ss.report.ratio - 1.0).abs() < 1e-12);
        // log10 b > 486.
        assert!(ss.report.log2_b / 10f64.log2() > 486.0);
        assert!(ss.params.is_none());
    }

    #[test]
    fn derived_and_residual_candidates_found() {
        // v = 5 = 1 mod 4: derived from a Hadamard design at v' = 11 (Paley).
        let ranked = best_scheme(5, 1.0, &SearchOptions::default()).unwrap();
        let derived = ranked
            .iter()
            .find(|c| matches!(c.recipe, Recipe::Derived { from_v: 11 }))
            .expect("derived candidate");
        assert_eq!(
            derived.params,
            Some(CandidateParams::BlockDesign(
                DesignParams::new(5, 10, 4, 2, 1).unwrap()
            ))
        );
        // v = 4 even: residual from v' = 7.
        let ranked = best_scheme(4, 1.0, &SearchOptions::default()).unwrap();
        let residual = ranked
            .iter()
            .find(|c| matches!(c.recipe, Recipe::Residual { from_v: 7 }))
            .expect("residual candidate");
        assert_eq!(
            residual.params,
            Some(CandidateParams::BlockDesign(
                DesignParams::new(4, 6, 3, 2, 1).unwrap()
            ))
        );
    }

    #[test]
    fn optimal_points_recipes() {
        let pts = optimal_points(&all_families(), 40);
        let fano = pts
            .iter()
            .find(|p| matches!(p.construction, Construction::ProjectiveGeometry { q: 2, t: 3 }))
            .unwrap();
        assert!((fano.eps - (4.0f64 / 3.0).ln()).abs() < 1e-12);
        let quartic = pts
            .iter()
            .find(|p| matches!(p.construction, Construction::QuarticNonzero { v: 37 }))
            .unwrap();
        assert!((quartic.eps - (28.0f64 / 9.0).ln()).abs() < 1e-12);
        // RR line: trivial(v) at eps = log(v - 1).
        let rr = pts
            .iter()
            .find(|p| matches!(p.construction, Construction::Trivial { v: 10 }))
            .unwrap();
        assert!((rr.eps - 9.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn sweep_smoke_low_eps() {
        let (proposed, baseline) = low_eps_sweep_families();
        let rows = sweep(0.01, 1024, 1060, &proposed, &baseline, DEFAULT_VPRIME_CAP);
        for row in &rows {
            let b = row.baseline.as_ref().unwrap();
            let p = row.proposed.as_ref().unwrap();
            // Baseline at eps = 0.01 near v = 1024 is the Sylvester design
            // with v' = 2047.
            assert_eq!(b.from_v, 2047);
            assert!(p.b <= b.b, "v={}", row.v);
            assert!(p.ratio >= 1.0 - 1e-9);
            assert!(b.ratio >= 1.0 - 1e-9);
        }
    }

    #[test]
    fn sweep_matches_paper_example_row() {
        let (proposed, baseline) = log3_sweep_families();
        let rows = sweep(3.0f64.ln(), 2000, 2000, &proposed, &baseline, DEFAULT_VPRIME_CAP);
        let row = &rows[0];
        assert_eq!(row.baseline.as_ref().unwrap().b, 5461);
        assert_eq!(row.proposed.as_ref().unwrap().b, 2917);
    }

    #[test]
    fn sweep_b_is_monotone_step() {
        let (proposed, _) = log3_sweep_families();
        let rows = sweep(3.0f64.ln(), 1500, 3100, &proposed, &proposed, DEFAULT_VPRIME_CAP);
        let mut prev = 0u64;
        for row in &rows {
            let b = row.proposed.as_ref().unwrap().b;
            assert!(b >= prev, "b step decreased at v={}", row.v);
            prev = b;
        }
    }

    #[test]
    fn csv_schema() {
        let (proposed, baseline) = log3_sweep_families();
        let rows = sweep(3.0f64.ln(), 2000, 2001, &proposed, &baseline, DEFAULT_VPRIME_CAP);
        let csv = sweep_to_csv(&rows);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "v,method,risk_ratio,b,log2_b");
        assert!(lines.next().unwrap().starts_with("2000,baseline,"));
        assert!(lines.next().unwrap().starts_with("2000,proposed,"));
    }
}
