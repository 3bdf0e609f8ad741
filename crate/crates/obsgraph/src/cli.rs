//! Batch front end: every analysis as a dispatchable command with a
//! machine-readable report. Commands that have redundant methods cross-check
//! them and fail with a disagreement error (CLI exit status 2) if the
//! verdicts split.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::path::PathBuf;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::agreement;
use crate::bohr::{self, BohrSet, DegenerateFiber};
use crate::density::{self, Scan, SetOracle};
use crate::error::{Error, Result};
use crate::graph;
use crate::obs;
use crate::report::{BohrJson, ObservabilityJson, Report, TorusJson};
use crate::spectral;
use crate::torus;

/// Numerical thresholds, all defaulted; exposed so a configuration file can
/// override them (which is also the supported way to fault-inject a
/// disagreement in tests).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Tolerances {
    /// Near-kernel threshold for block restriction matrices.
    pub tau_rank: f64,
    /// Observable/unobservable threshold as a multiple of T.
    pub tau_obs_scale: f64,
    /// Eigenvalue-grouping tolerance as a multiple of (1 + spectral radius).
    pub tau_group_scale: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tau_rank: obs::TAU_RANK,
            tau_obs_scale: obs::TAU_OBS_SCALE,
            tau_group_scale: 1e-8,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    Observability {
        graph: String,
        set: String,
        time: f64,
    },
    Bohr {
        p: u64,
        residues: Vec<u64>,
        time: f64,
        #[serde(default = "default_fiber_grid")]
        grid: usize,
    },
    Torus {
        #[serde(rename = "N")]
        n_side: u64,
        #[serde(rename = "d")]
        dim: usize,
        construct: String,
    },
    Density {
        set: String,
        #[serde(rename = "L", default)]
        half_windows: Vec<i64>,
        #[serde(rename = "R", default)]
        radii: Vec<i64>,
    },
    Counterexample {
        p: u64,
        delta: f64,
        t: f64,
        #[serde(default = "default_quad_nodes")]
        grid: usize,
    },
    Hautus {
        graph: String,
        set: String,
        #[serde(default = "default_weight")]
        weight_state: f64,
        #[serde(default = "default_weight")]
        weight_obs: f64,
        #[serde(default = "default_hautus_grid")]
        grid: usize,
    },
    OracleSuite {
        #[serde(default = "default_instances")]
        instances: usize,
    },
}

fn default_fiber_grid() -> usize {
    512
}

fn default_quad_nodes() -> usize {
    4096
}

fn default_weight() -> f64 {
    1.0
}

fn default_hautus_grid() -> usize {
    64
}

fn default_instances() -> usize {
    200
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// One reproducible run: command, seed, tolerances, output target.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub command: Command,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Report plus, for sweep commands in CSV mode, the CSV projection of the
/// same rows.
pub struct RunOutcome {
    pub report: Report,
    pub csv: Option<String>,
}

/// Build the global rayon pool honoring `OBSGRAPH_THREADS`. Safe to call
/// more than once; later calls are no-ops.
pub fn init_thread_pool_from_env() {
    if let Ok(v) = std::env::var("OBSGRAPH_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
}

pub fn run(config: &RunConfig) -> Result<RunOutcome> {
    let started = Instant::now();
    let (name, inputs, outputs, csv) = match &config.command {
        Command::Observability { graph, set, time } => {
            let (out, csv) = run_observability(graph, set, *time, config)?;
            (
                "observability",
                json!({"graph": graph, "set": set, "time": time}),
                out,
                csv,
            )
        }
        Command::Bohr {
            p,
            residues,
            time,
            grid,
        } => {
            let out = run_bohr(*p, residues, *time, *grid)?;
            (
                "bohr",
                json!({"p": p, "residues": residues, "time": time, "grid": grid}),
                out,
                None,
            )
        }
        Command::Torus {
            n_side,
            dim,
            construct,
        } => {
            let out = run_torus(*n_side, *dim, construct)?;
            (
                "torus",
                json!({"N": n_side, "d": dim, "construct": construct}),
                out,
                None,
            )
        }
        Command::Density {
            set,
            half_windows,
            radii,
        } => {
            let (out, csv) = run_density(set, half_windows, radii, config)?;
            (
                "density",
                json!({"set": set, "L": half_windows, "R": radii}),
                out,
                csv,
            )
        }
        Command::Counterexample { p, delta, t, grid } => {
            let out = run_counterexample(*p, *delta, *t, *grid)?;
            (
                "counterexample",
                json!({"p": p, "delta": delta, "t": t, "grid": grid}),
                out,
                None,
            )
        }
        Command::Hautus {
            graph,
            set,
            weight_state,
            weight_obs,
            grid,
        } => {
            let out = run_hautus(graph, set, *weight_state, *weight_obs, *grid, config)?;
            (
                "hautus",
                json!({
                    "graph": graph, "set": set,
                    "weight_state": weight_state, "weight_obs": weight_obs, "grid": grid
                }),
                out,
                None,
            )
        }
        Command::OracleSuite { instances } => {
            let out = run_oracle_suite(*instances, config.seed)?;
            ("oracle-suite", json!({"instances": instances}), out, None)
        }
    };
    Ok(RunOutcome {
        report: Report {
            command: name.to_string(),
            inputs,
            tolerances: serde_json::to_value(config.tolerances)?,
            seed: config.seed,
            outputs,
            wall_time_s: started.elapsed().as_secs_f64(),
        },
        csv,
    })
}

fn decompose_with(
    g: &graph::GraphSpec,
    tol: &Tolerances,
) -> Result<(
    spectral::SpectralDecomposition,
    spectral::EigenspaceGrouping,
)> {
    let l = graph::laplacian(g);
    let dec = spectral::eigendecompose_real(&l.matrix)?;
    let tau = tol.tau_group_scale * (1.0 + dec.spectral_radius());
    let groups = spectral::group_eigenspaces(&dec, tau)?;
    Ok((dec, groups))
}

fn run_observability(
    graph_desc: &str,
    set_desc: &str,
    time: f64,
    config: &RunConfig,
) -> Result<(Value, Option<String>)> {
    if time <= 0.0 {
        return Err(Error::InvalidInput("time horizon must be positive".into()));
    }
    let g = graph::build_graph(graph_desc)?;
    let set = graph::parse_set(set_desc, &g)?;
    let (dec, groups) = decompose_with(&g, &config.tolerances)?;
    let gram = obs::gramian(&dec, &groups, &set, time);
    let gram_report =
        obs::observability_constant_with(&gram, &dec, config.tolerances.tau_obs_scale * time)?;
    let restriction = obs::restriction_test(&dec, &groups, &set, config.tolerances.tau_rank)?;
    if gram_report.observable != restriction.observable {
        return Err(Error::Disagreement(format!(
            "gramian says observable={}, restriction test says observable={}",
            gram_report.observable, restriction.observable
        )));
    }
    let out = json!({
        "report": ObservabilityJson::from(&gram_report),
        "cross_check": {
            "restriction": ObservabilityJson::from(&restriction),
            "agrees": true,
        },
        "set_members": set.indices(),
        "eigenvalues": dec.eigenvalues().as_slice(),
    });
    Ok((out, None))
}

fn run_bohr(p: u64, residues: &[u64], time: f64, grid: usize) -> Result<Value> {
    if time <= 0.0 {
        return Err(Error::InvalidInput("time horizon must be positive".into()));
    }
    let set = BohrSet::new(p, residues.iter().copied())?;
    let verdict = bohr::m_t_sweep(&set, time, grid)?;
    let degenerate_ok = [DegenerateFiber::Zero, DegenerateFiber::MinusPi]
        .into_iter()
        .all(|f| {
            bohr::degenerate_kernel_test(&set, f)
                .iter()
                .all(|c| c.arithmetic_injective && c.numeric_injective)
        });
    if !verdict.methods_agree() || degenerate_ok != verdict.observable {
        return Err(Error::Disagreement(format!(
            "arithmetic observable={}, sweep observable={}, degenerate fibers pass={}",
            verdict.observable, verdict.sweep_observable, degenerate_ok
        )));
    }
    Ok(json!({
        "report": BohrJson::from(&verdict),
        "cross_check": {
            "sweep_observable": verdict.sweep_observable,
            "degenerate_fibers_pass": degenerate_ok,
            "agrees": true,
        },
    }))
}

fn run_torus(n_side: u64, dim: usize, construct: &str) -> Result<Value> {
    if construct != "product" {
        return Err(Error::InvalidInput(format!(
            "unknown construction {construct:?}; available: product"
        )));
    }
    let c = torus::product_construction(n_side, dim)?;
    if c.e_prod.card() as u64 != c.e_size {
        return Err(Error::Disagreement(format!(
            "enumerated |E| = {} but closed form gives {}",
            c.e_prod.card(),
            c.e_size
        )));
    }
    let cert = torus::certify_unobservable(&c)?;
    if !cert.verified {
        return Err(Error::Disagreement(
            "construction failed its unobservability certificate".into(),
        ));
    }
    Ok(json!({
        "report": TorusJson::new(&c, &cert),
        "r": c.r,
        "support_size": c.support_size,
        "witness_residual": cert.witness_residual,
        "mu_min": cert.mu_min,
    }))
}

fn run_density(
    set_desc: &str,
    half_windows: &[i64],
    radii: &[i64],
    config: &RunConfig,
) -> Result<(Value, Option<String>)> {
    if half_windows.is_empty() && radii.is_empty() {
        return Err(Error::InvalidInput("need --L and/or --R values".into()));
    }
    let oracle = parse_z_set(set_desc)?;
    let thickness = if half_windows.is_empty() {
        Vec::new()
    } else {
        density::thickness_profile(&oracle, half_windows, &Scan::Auto)
    };
    let beurling = if radii.is_empty() {
        None
    } else {
        Some(density::beurling_estimate(&oracle, radii, &Scan::Auto))
    };
    let mut csv = String::from("L_or_R,lower,upper\n");
    for c in &thickness {
        csv.push_str(&format!(
            "L={},{},{}\n",
            c.half_window, c.gamma, c.gamma_max
        ));
    }
    if let Some(est) = &beurling {
        for row in &est.rows {
            csv.push_str(&format!("R={},{},{}\n", row.radius, row.lower, row.upper));
        }
    }
    let out = json!({
        "kind": oracle.kind(),
        "thickness": thickness,
        "beurling": beurling,
    });
    let csv = (config.format == Format::Csv).then_some(csv);
    Ok((out, csv))
}

fn run_counterexample(p: u64, delta: f64, t: f64, grid: usize) -> Result<Value> {
    let r = bohr::counterexample_ratio(p, delta, t, grid)?;
    if !r.within_bound() {
        return Err(Error::Disagreement(format!(
            "quadrature ratio {} exceeds the closed-form bound {}",
            r.ratio, r.bound
        )));
    }
    Ok(json!({
        "ratio": r.ratio,
        "bound": r.bound,
        "coarse_ratio": r.coarse_ratio,
        "nodes": r.nodes,
        "within_bound": true,
    }))
}

fn run_hautus(
    graph_desc: &str,
    set_desc: &str,
    weight_state: f64,
    weight_obs: f64,
    grid_points: usize,
    config: &RunConfig,
) -> Result<Value> {
    let g = graph::build_graph(graph_desc)?;
    let set = graph::parse_set(set_desc, &g)?;
    let l = graph::laplacian(&g);
    let (dec, groups) = decompose_with(&g, &config.tolerances)?;
    let grid = obs::hautus_default_grid(&dec, grid_points);
    let cert = obs::hautus_sweep(&l.matrix, &set, weight_state, weight_obs, &grid)?;
    let restriction = obs::restriction_test(&dec, &groups, &set, config.tolerances.tau_rank)?;
    if cert.passes() != restriction.observable {
        return Err(Error::Disagreement(format!(
            "hautus q_min = {} but restriction says observable={}",
            cert.q_min, restriction.observable
        )));
    }
    // The horizon guaranteed by the resolvent estimate is reported as a
    // form, not a constant: the prefactor in front of mT/(T² − M(π²+ε)) is
    // existential.
    Ok(json!({
        "q_min": cert.q_min,
        "argmin": cert.argmin,
        "weight_state": cert.weight_state,
        "weight_obs": cert.weight_obs,
        "grid_points": cert.lambda_grid.len(),
        "passes": cert.passes(),
        "restriction_observable": restriction.observable,
        "threshold_time": {
            "form": "T > sqrt(weight_state * (pi^2 + eps)) for any eps > 0",
            "infimum": (cert.weight_state * std::f64::consts::PI * std::f64::consts::PI).sqrt(),
        },
    }))
}

fn run_oracle_suite(instances: usize, seed: u64) -> Result<Value> {
    let summary = agreement::run_agreement_battery(instances, seed, 24)?;
    let bohr_summary = agreement::bohr_exhaustive(8, 1.0, 256)?;
    let pairs = agreement::fiber_cycle_battery(
        &[
            (2, vec![0]),
            (3, vec![0, 1]),
            (4, vec![0, 1]),
            (6, vec![0, 2, 4]),
        ],
        &[4, 8],
        1.0,
    )?;
    let oracle_bad = pairs
        .iter()
        .filter(|p| !p.verdicts_agree || (p.observable && p.mu_min_rel_err > 1e-6))
        .count();
    if summary.disagreements > 0 || bohr_summary.disagreements > 0 || oracle_bad > 0 {
        return Err(Error::Disagreement(format!(
            "{} random-instance, {} periodic-set, {} fiber/cycle disagreements",
            summary.disagreements, bohr_summary.disagreements, oracle_bad
        )));
    }
    Ok(json!({
        "random_instances": summary,
        "bohr_exhaustive": bohr_summary,
        "fiber_cycle": pairs,
    }))
}

/// Parse a subset-of-ℤ descriptor:
/// `"{r1,r2} mod p"` (periodic), `rotation(α, γ)`, `mixed(q, α)`, or
/// `window{n1,n2,...}`. `α` accepts a decimal, `sqrt2`, or `golden`.
pub fn parse_z_set(desc: &str) -> Result<SetOracle> {
    let d = desc.trim();
    if let Some(body) = d.strip_prefix("rotation").map(str::trim_start) {
        let args = parse_call_args(body, 2, d)?;
        return Ok(SetOracle::Rotation {
            alpha: parse_real(&args[0])?,
            gamma: parse_real(&args[1])?,
        });
    }
    if let Some(body) = d.strip_prefix("mixed").map(str::trim_start) {
        let args = parse_call_args(body, 2, d)?;
        let q = parse_real(&args[0])?;
        let alpha = parse_real(&args[1])?;
        return Ok(SetOracle::Mixed(bohr::mixed_density_construct(q, alpha)?));
    }
    if let Some(body) = d.strip_prefix("window") {
        let body = body.trim();
        let inner = body
            .strip_prefix('{')
            .and_then(|b| b.strip_suffix('}'))
            .ok_or_else(|| Error::InvalidSet(format!("malformed window set {d:?}")))?;
        let members: BTreeSet<i64> = if inner.trim().is_empty() {
            BTreeSet::new()
        } else {
            inner
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse()
                        .map_err(|_| Error::InvalidSet(format!("bad integer {t:?}")))
                })
                .collect::<Result<_>>()?
        };
        return Ok(SetOracle::Window(members));
    }
    if let Some(pos) = d.rfind(" mod ") {
        let (res_part, mod_part) = (&d[..pos], &d[pos + 5..]);
        let p: u64 = mod_part
            .trim()
            .parse()
            .map_err(|_| Error::InvalidSet(format!("bad modulus in {d:?}")))?;
        let body = res_part.trim();
        let body = body
            .strip_prefix('{')
            .and_then(|b| b.strip_suffix('}'))
            .unwrap_or(body);
        let residues: Vec<u64> = body
            .split(',')
            .map(|t| {
                let r: i64 = t
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidSet(format!("bad residue {t:?}")))?;
                Ok(r.rem_euclid(p as i64) as u64)
            })
            .collect::<Result<_>>()?;
        return Ok(SetOracle::Periodic(BohrSet::new(p, residues)?));
    }
    Err(Error::InvalidSet(format!(
        "malformed integer-set descriptor {d:?}"
    )))
}

fn parse_call_args(body: &str, want: usize, whole: &str) -> Result<Vec<String>> {
    let inner = body
        .strip_prefix('(')
        .and_then(|b| b.strip_suffix(')'))
        .ok_or_else(|| Error::InvalidSet(format!("malformed descriptor {whole:?}")))?;
    let args: Vec<String> = inner.split(',').map(|s| s.trim().to_string()).collect();
    if args.len() != want {
        return Err(Error::InvalidSet(format!(
            "descriptor {whole:?} needs {want} arguments"
        )));
    }
    Ok(args)
}

/// Parse a real number, accepting `sqrt2`, `golden`, and `pi/k` shorthands.
pub fn parse_real(s: &str) -> Result<f64> {
    let t = s.trim();
    match t {
        "sqrt2" => return Ok(std::f64::consts::SQRT_2),
        "golden" => return Ok((1.0 + 5.0f64.sqrt()) / 2.0),
        "pi" => return Ok(PI),
        _ => {}
    }
    if let Some(denom) = t.strip_prefix("pi/") {
        let d: f64 = denom
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad number {t:?}")))?;
        return Ok(PI / d);
    }
    t.parse()
        .map_err(|_| Error::InvalidInput(format!("bad number {t:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base(cmd: Command) -> RunConfig {
        RunConfig {
            command: cmd,
            seed: 0,
            tolerances: Tolerances::default(),
            format: Format::Json,
            out: None,
        }
    }

    #[test]
    fn observability_cycle_4_even_set() {
        let cfg = base(Command::Observability {
            graph: "cycle:4".into(),
            set: "0 mod 2".into(),
            time: 1.0,
        });
        let outcome = run(&cfg).unwrap();
        let rep = &outcome.report.outputs["report"];
        assert_eq!(rep["observable"], Value::Bool(false));
        assert!(rep["witness"].is_array());
    }

    #[test]
    fn bohr_example_residues_mod_4() {
        let cfg = base(Command::Bohr {
            p: 4,
            residues: vec![0, 1],
            time: 1.0,
            grid: 128,
        });
        let outcome = run(&cfg).unwrap();
        let rep = &outcome.report.outputs["report"];
        assert_eq!(rep["observable"], Value::Bool(true));
        assert_eq!(rep["g"], Value::from(1));
        assert!(rep["C_obs"].as_f64().unwrap().is_finite());
    }

    #[test]
    fn torus_8_2_product() {
        let cfg = base(Command::Torus {
            n_side: 8,
            dim: 2,
            construct: "product".into(),
        });
        let outcome = run(&cfg).unwrap();
        let rep = &outcome.report.outputs["report"];
        assert_eq!(rep["E_size"], Value::from(48));
        assert_eq!(rep["verified_unobservable"], Value::Bool(true));
    }

    #[test]
    fn density_csv_projection() {
        let mut cfg = base(Command::Density {
            set: "{0} mod 2".into(),
            half_windows: vec![1, 2],
            radii: vec![100],
        });
        cfg.format = Format::Csv;
        let outcome = run(&cfg).unwrap();
        let csv = outcome.csv.unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("L_or_R,lower,upper"));
        assert!(csv.contains("L=1,"));
        assert!(csv.contains("R=100,"));
    }

    #[test]
    fn invalid_descriptor_is_invalid_input() {
        let cfg = base(Command::Observability {
            graph: "heptagon:9".into(),
            set: "{0}".into(),
            time: 1.0,
        });
        assert!(matches!(run(&cfg), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn fault_injected_tolerance_gives_disagreement() {
        let mut cfg = base(Command::Observability {
            graph: "path:2".into(),
            set: "{0}".into(),
            time: 1.0,
        });
        cfg.tolerances.tau_rank = 1e3; // nonsense: restriction now rejects everything
        assert!(matches!(run(&cfg), Err(Error::Disagreement(_))));
    }

    #[test]
    fn reports_are_reproducible() {
        let cfg = base(Command::Bohr {
            p: 4,
            residues: vec![0, 1],
            time: 1.0,
            grid: 128,
        });
        let mut a = run(&cfg).unwrap().report;
        let mut b = run(&cfg).unwrap().report;
        a.wall_time_s = 0.0;
        b.wall_time_s = 0.0;
        assert_eq!(a.to_json_pretty(), b.to_json_pretty());
    }

    #[test]
    fn config_round_trip() {
        let cfg = base(Command::Counterexample {
            p: 2,
            delta: PI / 200.0,
            t: 1.0,
            grid: 4096,
        });
        let s = serde_json::to_string(&cfg).unwrap();
        let back = RunConfig::from_json(&s).unwrap();
        assert!(matches!(back.command, Command::Counterexample { p: 2, .. }));
    }

    #[test]
    fn z_set_descriptors() {
        assert!(matches!(
            parse_z_set("{0} mod 2"),
            Ok(SetOracle::Periodic(_))
        ));
        assert!(matches!(
            parse_z_set("0,1 mod 4"),
            Ok(SetOracle::Periodic(_))
        ));
        assert!(matches!(
            parse_z_set("rotation(sqrt2, 0.3)"),
            Ok(SetOracle::Rotation { .. })
        ));
        assert!(matches!(
            parse_z_set("mixed(0.7, sqrt2)"),
            Ok(SetOracle::Mixed(_))
        ));
        assert!(matches!(
            parse_z_set("window{1,2,3}"),
            Ok(SetOracle::Window(_))
        ));
        assert!(parse_z_set("everything").is_err());
    }

    #[test]
    fn parse_real_shorthands() {
        assert_eq!(parse_real("pi/200").unwrap(), PI / 200.0);
        assert_eq!(parse_real("sqrt2").unwrap(), std::f64::consts::SQRT_2);
        assert_eq!(parse_real("0.25").unwrap(), 0.25);
        assert!(parse_real("two").is_err());
    }
}
