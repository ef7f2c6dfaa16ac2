//! Command-line front end: design construction and verification, risk
//! reports, scheme search, figure sweeps, and Monte Carlo simulation.
//!
//! Exit status: 0 on success, 1 on a domain error (bad key, failed
//! verification, ...), 2 on a usage error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use bdldp_core::designs::{binomial_big, Classification, Construction, FamilyKind, IncidenceStructure};
use bdldp_core::mech::Mechanism;
use bdldp_core::risk::{self, RiskPoint, RiskReport, SchemeParams};
use bdldp_core::search::{
    self, all_families, FamilySel, SearchOptions, DEFAULT_VPRIME_CAP,
};
use bdldp_core::sim::{self, PSpec, SimConfig};
use bdldp_core::{DesignParams, RpbdParams};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "bdldp", version, about = "Block-design LDP schemes: construction, risk, search, simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Privacy budget, given in nats or as the value of e^eps.
#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
struct EpsArg {
    /// Privacy budget in nats.
    #[arg(long)]
    eps: Option<f64>,
    /// Value of e^eps (e.g. 3 for eps = log 3).
    #[arg(long = "e-eps")]
    e_eps: Option<f64>,
}

impl EpsArg {
    fn eps(&self) -> Result<f64> {
        let eps = match (self.eps, self.e_eps) {
            (Some(e), _) => e,
            (None, Some(x)) => x.ln(),
            (None, None) => unreachable!("clap group requires one"),
        };
        if !(eps > 0.0) || !eps.is_finite() {
            bail!("epsilon must be positive and finite, got {eps}");
        }
        Ok(eps)
    }

    /// e^eps, using the given value directly when supplied.
    fn e_eps_value(&self) -> Result<f64> {
        match (self.eps, self.e_eps) {
            (_, Some(x)) if x > 1.0 && x.is_finite() => Ok(x),
            (_, Some(x)) => bail!("e^eps must be a finite value > 1, got {x}"),
            _ => Ok(self.eps()?.exp()),
        }
    }

    fn resolved(&self) -> Result<serde_json::Value> {
        let eps = self.eps()?;
        Ok(json!({ "eps": eps, "e_eps": eps.exp() }))
    }
}

#[derive(Subcommand)]
enum Command {
    /// List catalog design instances with v in [vmin, vmax].
    Catalog {
        #[arg(long)]
        vmin: u64,
        #[arg(long)]
        vmax: u64,
    },
    /// Build or verify design files.
    Design {
        #[command(subcommand)]
        cmd: DesignCmd,
    },
    /// Optimal uniformity parameters K_opt(v, eps) and their threshold interval.
    Kopt {
        #[arg(long)]
        v: u64,
        #[command(flatten)]
        eps: EpsArg,
    },
    /// Risk report for a design file or bare parameters.
    Risk {
        /// Design file to evaluate.
        #[arg(long, conflicts_with = "params")]
        design: Option<PathBuf>,
        /// Comma-separated v,b,r,lambda (RPBD) or v,b,r,k,lambda (block design).
        #[arg(long)]
        params: Option<String>,
        #[command(flatten)]
        eps: EpsArg,
        /// Evaluate at this distribution instead of the worst case:
        /// uniform | point:X | zipf:S | dirichlet:SEED | file:PATH.
        #[arg(long)]
        p: Option<String>,
    },
    /// Ranked scheme candidates at (v, eps).
    Search {
        #[arg(long)]
        v: u64,
        #[command(flatten)]
        eps: EpsArg,
        /// Comma-separated family list, e.g.
        /// "projective_geometry=4,quartic_nonzero"; default: all families.
        #[arg(long)]
        families: Option<String>,
        #[arg(long)]
        no_truncation: bool,
    },
    /// Risk-ratio/communication sweep over a range of v.
    Sweep {
        #[command(flatten)]
        eps: EpsArg,
        #[arg(long)]
        vmin: u64,
        #[arg(long)]
        vmax: u64,
        #[arg(long)]
        proposed: String,
        #[arg(long)]
        baseline: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Coverage points (v, eps) where catalog designs attain the minimax risk.
    Points {
        #[arg(long)]
        families: Option<String>,
        #[arg(long)]
        vmax: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Monte Carlo validation of a design file's scheme.
    Simulate {
        #[arg(long)]
        design: PathBuf,
        #[command(flatten)]
        eps: EpsArg,
        /// uniform | point:X | zipf:S | dirichlet:SEED | file:PATH.
        #[arg(long, default_value = "uniform")]
        p: String,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        trials: u64,
        /// Loss exponent of the l_u^u loss.
        #[arg(long, default_value_t = 2.0)]
        u: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Clip negative estimates and renormalize (post-processing only;
        /// disables the closed-form comparison).
        #[arg(long)]
        clip: bool,
    },
    /// Canned reproduction bundles.
    Reproduce {
        target: ReproduceTarget,
        #[arg(long, default_value = "reproduce-out")]
        out_dir: PathBuf,
    },
}

#[derive(Subcommand)]
enum DesignCmd {
    /// Construct a catalog design and write it as a design file.
    Build {
        /// Family name: trivial | complete | projective_geometry |
        /// sylvester_hadamard | paley | twin_prime | quartic_nonzero |
        /// quartic_with_zero.
        #[arg(long)]
        family: String,
        /// Comma-separated key, e.g. "2,3" for projective_geometry q=2,t=3.
        #[arg(long)]
        key: String,
        /// Keep only the first V rows.
        #[arg(long)]
        truncate: Option<u64>,
        /// Derived design at this column (default 0).
        #[arg(long, conflicts_with = "residual", num_args = 0..=1, default_missing_value = "0")]
        derived: Option<u64>,
        /// Residual design at this column (default 0).
        #[arg(long, num_args = 0..=1, default_missing_value = "0")]
        residual: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Verify a design file and print its classification.
    Verify { file: PathBuf },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReproduceTarget {
    /// The v=2000, eps=log 3 worked example.
    PaperExample,
    /// Minimax coverage points of the catalog families.
    Fig1,
    /// eps = 0.01 sweep, v in [1024, 16383].
    Fig2,
    /// eps = log 3 sweep, v in [1366, 21845].
    Fig3,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn parse_family_list(s: &str) -> Result<Vec<FamilySel>> {
    let mut out = Vec::new();
    for token in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (name, q) = match token.split_once('=') {
            Some((n, q)) => (
                n,
                Some(q.parse::<u64>().with_context(|| format!("bad q in '{token}'"))?),
            ),
            None => (token, None),
        };
        let kind = FamilyKind::parse(name).ok_or_else(|| anyhow!("unknown family '{name}'"))?;
        if q.is_some() && kind != FamilyKind::ProjectiveGeometry {
            bail!("'=q' is only valid for projective_geometry, got '{token}'");
        }
        out.push(FamilySel { kind, pg_q: q });
    }
    if out.is_empty() {
        bail!("empty family list");
    }
    Ok(out)
}

fn parse_pspec(s: &str) -> Result<PSpec> {
    if s == "uniform" {
        return Ok(PSpec::Uniform);
    }
    if let Some(rest) = s.strip_prefix("point:") {
        return Ok(PSpec::PointMass { x: rest.parse()? });
    }
    if let Some(rest) = s.strip_prefix("zipf:") {
        return Ok(PSpec::Zipf { s: rest.parse()? });
    }
    if let Some(rest) = s.strip_prefix("dirichlet:") {
        return Ok(PSpec::DirichletDraw { seed: rest.parse()? });
    }
    if let Some(path) = s.strip_prefix("file:") {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        let p: Vec<f64> = serde_json::from_str(&text).context("P file must be a JSON array")?;
        return Ok(PSpec::Explicit { p });
    }
    bail!("bad distribution spec '{s}' (want uniform | point:X | zipf:S | dirichlet:SEED | file:PATH)")
}

/// Writes an artifact embedding the resolved config and tool version.
fn write_json_artifact(path: &Path, config: serde_json::Value, result: serde_json::Value) -> Result<()> {
    let doc = json!({ "tool": "bdldp", "version": VERSION, "config": config, "result": result });
    std::fs::write(path, serde_json::to_string_pretty(&doc)?)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Writes raw content plus a `<path>.meta.json` sidecar carrying the
/// resolved config and tool version (for fixed-schema files).
fn write_with_meta(path: &Path, content: &str, config: serde_json::Value) -> Result<()> {
    std::fs::write(path, content).with_context(|| format!("writing {}", path.display()))?;
    let meta = json!({ "tool": "bdldp", "version": VERSION, "config": config });
    let meta_path = path.with_extension(format!(
        "{}.meta.json",
        path.extension().and_then(|e| e.to_str()).unwrap_or("out")
    ));
    std::fs::write(&meta_path, serde_json::to_string_pretty(&meta)?)
        .with_context(|| format!("writing {}", meta_path.display()))?;
    Ok(())
}

fn print_json(value: &serde_json::Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn load_design(path: &Path) -> Result<IncidenceStructure> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(IncidenceStructure::from_json(&text)?)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Catalog { vmin, vmax } => {
            if !(2 <= vmin && vmin <= vmax && vmax <= 100_000) {
                bail!("need 2 <= vmin <= vmax <= 100000");
            }
            let instances = search::catalog_instances(vmin, vmax);
            let rows: Vec<serde_json::Value> = instances
                .iter()
                .map(|(c, p)| {
                    json!({
                        "family": c.family().name(),
                        "key": c.key(),
                        "v": p.v, "b": p.b, "r": p.r, "k": p.k, "lambda": p.lambda,
                    })
                })
                .collect();
            print_json(&json!({
                "tool": "bdldp", "version": VERSION,
                "config": { "vmin": vmin, "vmax": vmax },
                "instances": rows,
            }))?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Design { cmd } => run_design(cmd),

        Command::Kopt { v, eps } => {
            let eps_val = eps.eps()?;
            let kset = risk::k_opt_from_e(v, eps.e_eps_value()?);
            let k = kset[0];
            let lo = risk::e_threshold(k, k + 1, v)?;
            let hi = risk::e_threshold(k - 1, k, v)?;
            print_json(&json!({
                "tool": "bdldp", "version": VERSION,
                "config": { "v": v, "eps": eps_val, "e_eps": eps_val.exp() },
                "k_opt": kset,
                "interval_e_eps": {
                    "lo": lo,
                    "hi": if hi.is_finite() { Some(hi) } else { None },
                },
            }))?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Risk { design, params, eps, p } => {
            let eps_val = eps.eps()?;
            let (scheme, b_exact, source) = match (&design, &params) {
                (Some(path), None) => {
                    let s = load_design(path)?;
                    let verification = s.verify()?;
                    let scheme = match verification.classification {
                        Classification::BlockDesign(p) => SchemeParams::BlockDesign(p),
                        Classification::Rpbd(p) => SchemeParams::Rpbd(p),
                        Classification::Neither => {
                            bail!("design does not verify as a block design or RPBD")
                        }
                    };
                    let b = match &s {
                        IncidenceStructure::ImplicitComplete { v, k } => binomial_big(*v, *k),
                        _ => scheme.triple().0.into(),
                    };
                    (scheme, b, json!({ "design": path.display().to_string() }))
                }
                (None, Some(list)) => {
                    let nums: Vec<u64> = list
                        .split(',')
                        .map(|t| t.trim().parse::<u64>().map_err(Into::into))
                        .collect::<Result<_>>()?;
                    let scheme = match nums.as_slice() {
                        [v, b, r, lambda] => {
                            SchemeParams::Rpbd(RpbdParams::new(*v, *b, *r, *lambda)?)
                        }
                        [v, b, r, k, lambda] => {
                            SchemeParams::BlockDesign(DesignParams::new(*v, *b, *r, *k, *lambda)?)
                        }
                        _ => bail!("--params wants 4 numbers (v,b,r,lambda) or 5 (v,b,r,k,lambda)"),
                    };
                    (scheme, scheme.triple().0.into(), json!({ "params": list }))
                }
                _ => bail!("exactly one of --design or --params is required"),
            };
            let report = RiskReport::build(&scheme, eps_val, b_exact)?;
            let at_p = match &p {
                Some(spec) => {
                    let pv = parse_pspec(spec)?.materialize(scheme.v())?;
                    Some(risk::risk_l2(&scheme, eps_val, RiskPoint::Distribution(&pv))?)
                }
                None => None,
            };
            print_json(&json!({
                "tool": "bdldp", "version": VERSION,
                "config": { "source": source, "eps": eps.resolved()?, "p": p },
                "report": report,
                "risk_times_n_at_p": at_p,
            }))?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Search { v, eps, families, no_truncation } => {
            let eps_val = eps.eps()?;
            let opts = SearchOptions {
                families: match &families {
                    Some(list) => parse_family_list(list)?,
                    None => all_families(),
                },
                allow_truncation: !no_truncation,
                vprime_cap: DEFAULT_VPRIME_CAP,
            };
            let ranked = search::best_scheme(v, eps_val, &opts)?;
            print_json(&json!({
                "tool": "bdldp", "version": VERSION,
                "config": {
                    "v": v, "eps": eps.resolved()?, "families": families,
                    "allow_truncation": !no_truncation,
                },
                "candidates": ranked,
            }))?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Sweep { eps, vmin, vmax, proposed, baseline, out } => {
            let eps_val = eps.eps()?;
            let proposed_sel = parse_family_list(&proposed)?;
            let baseline_sel = parse_family_list(&baseline)?;
            let rows = search::sweep(eps_val, vmin, vmax, &proposed_sel, &baseline_sel, DEFAULT_VPRIME_CAP);
            let csv = search::sweep_to_csv(&rows);
            let config = json!({
                "eps": eps.resolved()?, "vmin": vmin, "vmax": vmax,
                "proposed": proposed, "baseline": baseline,
            });
            write_with_meta(&out, &csv, config)?;
            println!("wrote {} rows to {}", rows.len(), out.display());
            Ok(ExitCode::SUCCESS)
        }

        Command::Points { families, vmax, out } => {
            let sels = match &families {
                Some(list) => parse_family_list(list)?,
                None => all_families(),
            };
            let points = search::optimal_points(&sels, vmax);
            let csv = search::points_to_csv(&points);
            let config = json!({ "families": families, "vmax": vmax });
            write_with_meta(&out, &csv, config)?;
            println!("wrote {} points to {}", points.len(), out.display());
            Ok(ExitCode::SUCCESS)
        }

        Command::Simulate { design, eps, p, n, trials, u, seed, clip } => {
            let eps_val = eps.eps()?;
            let structure = load_design(&design)?;
            let mech = Mechanism::from_structure(structure, eps_val)?;
            let config = SimConfig {
                p: parse_pspec(&p)?,
                n,
                trials,
                seed,
                u,
                clip,
            };
            let result = sim::run_monte_carlo(&mech, &config)?;
            print_json(&json!({
                "tool": "bdldp", "version": VERSION,
                "config": {
                    "design": design.display().to_string(),
                    "eps": eps.resolved()?,
                    "sim": config,
                },
                "empirical": result.empirical,
                "se": result.std_error,
                "analytic": result.analytic,
                "z": result.z,
                "bias": result.bias,
            }))?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Reproduce { target, out_dir } => run_reproduce(target, &out_dir),
    }
}

fn run_design(cmd: DesignCmd) -> Result<ExitCode> {
    match cmd {
        DesignCmd::Build { family, key, truncate, derived, residual, out } => {
            let kind = FamilyKind::parse(&family)
                .ok_or_else(|| anyhow!("unknown family '{family}'"))?;
            let nums: Vec<u64> = key
                .split(',')
                .map(|t| t.trim().parse::<u64>().map_err(Into::into))
                .collect::<Result<_>>()?;
            let construction = Construction::from_key(kind, &nums)?;
            let mut structure = construction.build()?;
            if let Some(y) = derived {
                structure = structure.derived(y)?;
            }
            if let Some(y) = residual {
                structure = structure.residual(y)?;
            }
            if let Some(v) = truncate {
                structure = structure.truncate(v)?;
            }
            let config = json!({
                "family": family, "key": key, "truncate": truncate,
                "derived": derived, "residual": residual,
            });
            write_with_meta(&out, &structure.to_json(), config)?;
            let verification = structure.verify()?;
            print_json(&json!({
                "tool": "bdldp", "version": VERSION,
                "wrote": out.display().to_string(),
                "classification": verification.classification,
            }))?;
            Ok(ExitCode::SUCCESS)
        }
        DesignCmd::Verify { file } => {
            let structure = load_design(&file)?;
            let verification = structure.verify()?;
            print_json(&json!({
                "tool": "bdldp", "version": VERSION,
                "config": { "file": file.display().to_string() },
                "classification": verification.classification,
                "profile": {
                    "row_degrees": verification.profile.row_degrees,
                    "col_degrees": verification.profile.col_degrees,
                    "pair_intersections": verification.profile.pair_intersections,
                },
            }))?;
            if matches!(verification.classification, Classification::Neither) {
                return Ok(ExitCode::from(1));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_reproduce(target: ReproduceTarget, out_dir: &Path) -> Result<ExitCode> {
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("creating {}", out_dir.display()))?;
    let log3 = 3.0f64.ln();
    match target {
        ReproduceTarget::PaperExample => {
            let scheme_of = |families: Vec<FamilySel>| -> Result<search::SchemeCandidate> {
                let opts = SearchOptions {
                    families,
                    ..Default::default()
                };
                Ok(search::best_scheme(2000, log3, &opts)?.remove(0))
            };
            let pgr = scheme_of(vec![FamilySel::pg(4)])?;
            let quartic = scheme_of(vec![FamilyKind::QuarticNonzero.into()])?;
            let ss = scheme_of(vec![FamilyKind::Complete.into()])?;
            let result = json!({
                "v": 2000,
                "minimax_times_n": risk::minimax_times_n(2000, log3),
                "pgr_truncation": pgr,
                "quartic_truncation": quartic,
                "ss_baseline": {
                    "candidate": ss,
                    "log10_b": ss.report.log2_b / 10f64.log2(),
                },
            });
            let path = out_dir.join("paper_example.json");
            write_json_artifact(&path, json!({ "v": 2000, "e_eps": 3.0 }), result)?;
            println!("wrote {}", path.display());
        }
        ReproduceTarget::Fig1 => {
            let vmax = 10_000;
            let points = search::optimal_points(&all_families(), vmax);
            let csv = search::points_to_csv(&points);
            let path = out_dir.join("fig1.csv");
            write_with_meta(&path, &csv, json!({ "families": "all", "vmax": vmax }))?;
            println!("wrote {} points to {}", points.len(), path.display());
        }
        ReproduceTarget::Fig2 => {
            let (proposed, baseline) = search::low_eps_sweep_families();
            let rows = search::sweep(0.01, 1024, 16383, &proposed, &baseline, DEFAULT_VPRIME_CAP);
            let csv = search::sweep_to_csv(&rows);
            let path = out_dir.join("fig2.csv");
            write_with_meta(
                &path,
                &csv,
                json!({
                    "eps": 0.01, "vmin": 1024, "vmax": 16383,
                    "proposed": "sylvester_hadamard,paley,twin_prime",
                    "baseline": "sylvester_hadamard",
                }),
            )?;
            println!("wrote {} rows to {}", rows.len(), path.display());
        }
        ReproduceTarget::Fig3 => {
            let (proposed, baseline) = search::log3_sweep_families();
            let rows = search::sweep(log3, 1366, 21845, &proposed, &baseline, DEFAULT_VPRIME_CAP);
            let csv = search::sweep_to_csv(&rows);
            let path = out_dir.join("fig3.csv");
            write_with_meta(
                &path,
                &csv,
                json!({
                    "eps": log3, "vmin": 1366, "vmax": 21845,
                    "proposed": "projective_geometry=4,quartic_nonzero,quartic_with_zero",
                    "baseline": "projective_geometry=4",
                }),
            )?;
            println!("wrote {} rows to {}", rows.len(), path.display());
        }
    }
    Ok(ExitCode::SUCCESS)
}
