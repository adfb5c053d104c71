//! Command runner behind the `fbl` binary.
//!
//! Every command produces a JSON report carrying `schema_version` and an echo
//! of the run configuration. Exit codes: 0 success, 2 validation error, 3 a
//! verification suite failed.

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::dual::{enumerate_01_homs, sample_dual, sample_u_boolean};
use crate::expr::{canonical_expressions, random_expr, Expr, LatticeMap};
use crate::free::{
    all_monotone_tables, bfree_generators, complemented_pair, embed_linear_order, generated_sublattice, mask_to_set,
    minimal_true_points, verify_retraction_identity, BoundedChainSpec,
};
use crate::lattice::{prime_filters, FiniteLattice, LatticeSpec};
use crate::norm::{
    fbl_lattice_norm_lb, fbl_set_norm_lb, order_unit_check_against, sandwich_check, sup_norm_kl, SearchConfig,
    DEFAULT_MESH,
};
use crate::retract::{
    boolean_sign_retraction, continuity_probe, k0_points, kprime_retraction, square_retraction, GammaPoint,
    RetractionKind, SquarePoint,
};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_FAILED: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("i/o error on {path}: {msg}")]
    Io { path: String, msg: String },
}

#[derive(Debug, Clone, Parser, Serialize)]
#[command(name = "fbl", version, about = "Free Banach lattices over finite distributive lattices")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Emit the JSON report instead of a human summary.
    #[arg(long, global = true)]
    pub json: bool,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, clap::Args, Serialize)]
pub struct SearchArgs {
    /// Lattice: `chain:n`, `ba:n`, `A*B`, inline JSON, or a path to a JSON file.
    #[arg(long)]
    pub lattice: String,
    /// S-expression, e.g. `(vee (abs (delta m)) (abs (delta M)))`.
    #[arg(long)]
    pub expr: String,
    #[arg(long, default_value_t = 64)]
    pub budget: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 4)]
    pub max_n: usize,
    #[arg(long, default_value_t = DEFAULT_MESH)]
    pub mesh: f64,
    /// Also compute the lower bound over arbitrary vectors of `[-1, 1]^L`.
    #[arg(long)]
    pub set: bool,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Command {
    /// Lower/upper bounds for the free lattice norm.
    Norm(SearchArgs),
    /// Certified sup-norm on K_L.
    Supnorm {
        #[command(flatten)]
        args: SearchArgs,
        /// CSV of sampled K_L points with their values of f.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = 2000)]
        csv_points: usize,
    },
    /// Checks sup-norm <= norm <= 2 sup-norm.
    Sandwich {
        #[command(flatten)]
        args: SearchArgs,
        /// Additionally check this many seeded random expressions of depth <= 4.
        #[arg(long, default_value_t = 0)]
        random: usize,
        /// CSV scatter `expr,sup,lower,twice_sup,pass`.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Samples lattice homomorphisms into [-1, 1].
    Homs {
        #[arg(long)]
        lattice: String,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        on_kl: bool,
        /// List the {0, 1}-valued homomorphisms instead of sampling.
        #[arg(long)]
        two_valued: bool,
    },
    /// The free bounded distributive lattice on n generators.
    Bfree {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        list: bool,
    },
    /// Embeds a bounded chain given as `m,a3,a1,a2,M`.
    Embed {
        #[arg(long)]
        order: String,
    },
    /// Checks one of the concrete retractions.
    Retract {
        #[arg(long)]
        test: RetractionKindArg,
        /// Finest mesh; the probe halves down to it from 0.1.
        #[arg(long, default_value_t = 0.025)]
        mesh: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Runs the built-in verification suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RetractionKindArg {
    Square,
    Kprime,
    Boolean,
}

impl From<RetractionKindArg> for RetractionKind {
    fn from(k: RetractionKindArg) -> Self {
        match k {
            RetractionKindArg::Square => RetractionKind::Square,
            RetractionKindArg::Kprime => RetractionKind::Kprime,
            RetractionKindArg::Boolean => RetractionKind::Boolean,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    All,
    Lattice,
    Norm,
    Free,
    Retract,
}

/// Outcome of a run: exit status plus the report (JSON even in human mode).
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub status: i32,
    pub report: Value,
}

impl RunOutcome {
    /// Deterministic pretty-printed JSON.
    pub fn json_text(&self) -> String {
        serde_json::to_string_pretty(&self.report).expect("reports serialize")
    }

    pub fn human_text(&self) -> String {
        let mut out = String::new();
        if let Some(cmd) = self.report.get("command").and_then(Value::as_str) {
            out.push_str(&format!("fbl {cmd}\n"));
        }
        if let Some(Value::Object(result)) = self.report.get("result") {
            for (k, v) in result {
                match v {
                    Value::Array(_) | Value::Object(_) => {}
                    other => out.push_str(&format!("  {k}: {other}\n")),
                }
            }
        }
        if let Some(err) = self.report.get("error").and_then(Value::as_str) {
            out.push_str(&format!("  error: {err}\n"));
        }
        out.push_str(&format!("  status: {}\n", self.status));
        out
    }
}

pub fn load_lattice(spec: &str) -> Result<Arc<FiniteLattice>, CliError> {
    let path = std::path::Path::new(spec);
    let text = if !spec.trim_start().starts_with('{') && path.is_file() {
        std::fs::read_to_string(path).map_err(|e| CliError::Io { path: spec.into(), msg: e.to_string() })?
    } else {
        spec.to_string()
    };
    let parsed: LatticeSpec = text.parse().map_err(|e: crate::lattice::LatticeError| CliError::Parse(e.to_string()))?;
    FiniteLattice::build(&parsed).map(Arc::new).map_err(|e| CliError::Validation(e.to_string()))
}

fn search_inputs(a: &SearchArgs) -> Result<(Expr, SearchConfig), CliError> {
    let lattice = load_lattice(&a.lattice)?;
    let e = Expr::parse(lattice, &a.expr).map_err(|e| CliError::Parse(e.to_string()))?;
    let cfg = SearchConfig { budget: a.budget, seed: a.seed, max_n: a.max_n, mesh: a.mesh };
    Ok((e, cfg))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn validation<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Validation(e.to_string())
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io { path: path.display().to_string(), msg: e.to_string() })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Norm(_) => "norm",
        Command::Supnorm { .. } => "supnorm",
        Command::Sandwich { .. } => "sandwich",
        Command::Homs { .. } => "homs",
        Command::Bfree { .. } => "bfree",
        Command::Embed { .. } => "embed",
        Command::Retract { .. } => "retract",
        Command::Verify { .. } => "verify",
    }
}

/// Runs a command. Errors are reported inside the outcome, never panicked.
pub fn run(config: &RunConfig) -> RunOutcome {
    let name = command_name(&config.command);
    let echo = to_value(&config.command);
    let (status, body) = match dispatch(&config.command) {
        Ok((pass, result)) => (if pass { EXIT_OK } else { EXIT_FAILED }, ("result", result)),
        Err(e) => (EXIT_INVALID, ("error", Value::String(e.to_string()))),
    };
    let mut report = json!({ "schema_version": SCHEMA_VERSION, "command": name, "config": echo });
    report[body.0] = body.1;
    report["status"] = json!(status);
    let outcome = RunOutcome { status, report };
    if let Some(path) = &config.output {
        if let Err(e) = write_file(path, &outcome.json_text()) {
            let mut report = outcome.report;
            report["error"] = Value::String(e.to_string());
            report["status"] = json!(EXIT_INVALID);
            return RunOutcome { status: EXIT_INVALID, report };
        }
    }
    outcome
}

/// Installs a pool of `FBL_WORKERS` threads (default: available parallelism) and runs.
pub fn run_with_workers(config: &RunConfig) -> RunOutcome {
    match std::env::var("FBL_WORKERS").ok().map(|s| s.trim().parse::<usize>()) {
        None => run(config),
        Some(Ok(n)) if n >= 1 => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| run(config)),
            Err(e) => invalid(config, format!("cannot build worker pool: {e}")),
        },
        Some(_) => invalid(config, "FBL_WORKERS must be a positive integer".into()),
    }
}

fn invalid(config: &RunConfig, msg: String) -> RunOutcome {
    RunOutcome {
        status: EXIT_INVALID,
        report: json!({
            "schema_version": SCHEMA_VERSION,
            "command": command_name(&config.command),
            "config": to_value(&config.command),
            "error": msg,
            "status": EXIT_INVALID,
        }),
    }
}

fn dispatch(c: &Command) -> Result<(bool, Value), CliError> {
    match c {
        Command::Norm(a) => {
            let (e, cfg) = search_inputs(a)?;
            let lat = fbl_lattice_norm_lb(&e, &cfg).map_err(validation)?;
            let check = lat.witness.verify(&e);
            let mut out = json!({
                "expr": e.to_string(),
                "lower": lat.lower,
                "upper": lat.upper,
                "lattice_estimate": to_value(&lat),
                "witness_check": to_value(&check),
            });
            if a.set {
                let set = fbl_set_norm_lb(&e, &cfg).map_err(validation)?;
                out["set_lower"] = json!(set.lower);
                out["set_estimate"] = to_value(&set);
            }
            Ok((true, out))
        }
        Command::Supnorm { args, csv, csv_points } => {
            let (e, cfg) = search_inputs(args)?;
            if !(cfg.mesh > 0.0) {
                return Err(CliError::Validation("mesh must be positive".into()));
            }
            let sup = sup_norm_kl(&e, cfg.mesh);
            if let Some(path) = csv {
                let lattice = e.lattice();
                let pts = sample_dual(lattice, *csv_points, cfg.seed, true).map_err(validation)?;
                let mut text = lattice.labels().join(",") + ",f\n";
                for p in &pts {
                    let row: Vec<String> = p.values().iter().map(|v| format!("{v}")).collect();
                    text += &format!("{},{}\n", row.join(","), e.root().eval(p.values()));
                }
                write_file(path, &text)?;
            }
            Ok((true, json!({ "expr": e.to_string(), "value": sup.value, "certified_upper": sup.certified_upper(), "sup": to_value(&sup) })))
        }
        Command::Sandwich { args, random, csv } => {
            let (e, cfg) = search_inputs(args)?;
            let mut exprs = vec![e.clone()];
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            exprs.extend((0..*random).map(|_| random_expr(e.lattice(), 4, &mut rng)));
            let mut reports = Vec::new();
            let mut text = String::from("expr,sup,lower,twice_sup,pass\n");
            for x in &exprs {
                let r = sandwich_check(x, &cfg).map_err(validation)?;
                text += &format!("\"{}\",{},{},{},{}\n", x, r.sup_norm, r.lower, r.twice_sup, r.pass);
                reports.push(r);
            }
            if let Some(path) = csv {
                write_file(path, &text)?;
            }
            let pass = reports.iter().all(|r| r.pass);
            let passed = reports.iter().filter(|r| r.pass).count();
            Ok((pass, json!({ "pass": pass, "checked": reports.len(), "passed": passed, "reports": to_value(&reports) })))
        }
        Command::Homs { lattice, count, seed, on_kl, two_valued } => {
            let l = load_lattice(lattice)?;
            let pts = if *two_valued { enumerate_01_homs(&l) } else { sample_dual(&l, *count, *seed, *on_kl).map_err(validation)? };
            let values: Vec<Value> = pts.iter().map(|p| json!({ "values": p.values() })).collect();
            Ok((true, json!({ "labels": l.labels(), "count": values.len(), "points": values })))
        }
        Command::Bfree { n, list } => {
            let g = bfree_generators(*n).map_err(validation)?;
            let elems = generated_sublattice(&g);
            let mut out = json!({ "n": n, "elements": elems.len() });
            if *list {
                let listed: Result<Vec<Value>, _> = elems
                    .iter()
                    .map(|f| minimal_true_points(f).map(|pts| json!(pts.iter().map(|&s| mask_to_set(s)).collect::<Vec<_>>())))
                    .collect();
                out["antichains"] = Value::Array(listed.map_err(validation)?);
            }
            Ok((true, out))
        }
        Command::Embed { order } => {
            let spec = BoundedChainSpec::parse(order).map_err(validation)?;
            let images = embed_linear_order(&spec).map_err(validation)?;
            let report = verify_retraction_identity(&spec).map_err(validation)?;
            let mut emb = Vec::new();
            for (label, f) in spec.labels.iter().zip(&images) {
                let pts = minimal_true_points(f).map_err(validation)?;
                emb.push(json!({ "label": label, "minimal_true_points": pts.iter().map(|&s| mask_to_set(s)).collect::<Vec<_>>() }));
            }
            Ok((report.pass, json!({ "embedding": emb, "verification": to_value(&report), "pass": report.pass })))
        }
        Command::Retract { test, mesh, seed } => retract_report((*test).into(), *mesh, *seed),
        Command::Verify { suite, seed } => verify(*suite, *seed),
    }
}

/// Meshes `0.1, 0.05, ...` down to (and including) `finest`.
fn mesh_ladder(finest: f64) -> Result<Vec<f64>, CliError> {
    if !(finest > 0.0 && finest <= 0.1) {
        return Err(CliError::Validation("mesh must lie in (0, 0.1]".into()));
    }
    let mut m = vec![0.1];
    while m[m.len() - 1] / 2.0 >= finest * (1.0 - 1e-9) {
        let next = m[m.len() - 1] / 2.0;
        m.push(next);
    }
    Ok(m)
}

fn retract_report(kind: RetractionKind, mesh: f64, seed: u64) -> Result<(bool, Value), CliError> {
    let probe = continuity_probe(kind, &mesh_ladder(mesh)?).map_err(validation)?;
    let samples = 1000;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    use rand::Rng;
    let mut u = || rng.random_range(-1.0..=1.0);
    let (fixes, idem) = match kind {
        RetractionKind::Square => {
            let mut fixes = true;
            let mut idem = true;
            for i in 0..samples {
                let (a, b) = (u(), u());
                let target = if i % 2 == 0 { SquarePoint { x: -1.0, y: a } } else { SquarePoint { x: a, y: 1.0 } };
                fixes &= square_retraction(target).map_err(validation)? == target;
                let once = square_retraction(SquarePoint { x: a, y: b }).map_err(validation)?;
                idem &= square_retraction(once).map_err(validation)? == once && once.on_l_shape();
            }
            (fixes, idem)
        }
        RetractionKind::Kprime => {
            let mut fixes = true;
            let mut idem = true;
            for _ in 0..samples {
                let f = GammaPoint::new(u(), u(), vec![u(), u()]);
                let once = kprime_retraction(&f).map_err(validation)?;
                let twice = kprime_retraction(&once).map_err(validation)?;
                fixes &= once.in_kprime(1e-12);
                idem &= twice == once;
            }
            (fixes, idem)
        }
        RetractionKind::Boolean => {
            let l = Arc::new(FiniteLattice::boolean_algebra(2).expect("ba:2"));
            let mut fixes = true;
            let mut idem = true;
            for k in k0_points(&l) {
                fixes &= boolean_sign_retraction(&k).map_err(validation)? == k;
            }
            for x in sample_u_boolean(&l, samples, seed) {
                let once = boolean_sign_retraction(&x).map_err(validation)?;
                idem &= boolean_sign_retraction(&once).map_err(validation)? == once;
            }
            (fixes, idem)
        }
    };
    let pass = fixes && idem && probe.non_increasing;
    Ok((pass, json!({ "pass": pass, "fixes_target": fixes, "idempotent": idem, "probe": to_value(&probe) })))
}

#[derive(Debug, Clone, Serialize)]
struct Check {
    name: String,
    pass: bool,
}

fn check(name: &str, pass: bool) -> Check {
    Check { name: name.to_string(), pass }
}

fn lattice_suite() -> Vec<Check> {
    let mut out = Vec::new();
    for spec in ["chain:2", "chain:5", "ba:3", "chain:2*chain:3"] {
        let l = load_lattice(spec).expect("built-in spec");
        let pf = prime_filters(&l);
        out.push(check(&format!("{spec} is distributive"), l.tables().is_distributive()));
        out.push(check(&format!("{spec} prime filters"), pf.filters.len() == l.join_irreducibles().len()));
    }
    let ba = FiniteLattice::boolean_algebra(3).expect("ba:3");
    out.push(check("ba:3 prime filters are an antichain", prime_filters(&ba).is_antichain()));
    let c = FiniteLattice::chain(4).expect("chain:4");
    out.push(check("chain:4 prime filters are a chain", prime_filters(&c).is_chain()));
    out
}

fn norm_suite(seed: u64) -> Vec<Check> {
    let cfg = SearchConfig { seed, budget: 16, ..SearchConfig::default() };
    let mut out = Vec::new();
    for spec in ["chain:2", "chain:3", "ba:2"] {
        let l = load_lattice(spec).expect("built-in spec");
        for x in 0..l.len() {
            let e = Expr::parse(l.clone(), &format!("(delta {})", l.label(x))).expect("label parses");
            let est = fbl_lattice_norm_lb(&e, &cfg).expect("valid config");
            out.push(check(&format!("{spec} ‖δ_{}‖ = 1", l.label(x)), est.lower >= 1.0 - 1e-9 && est.upper <= 1.0 + 1e-12));
        }
        for e in canonical_expressions(&l).iter().take(6) {
            let r = sandwich_check(e, &cfg).expect("valid config");
            out.push(check(&format!("{spec} sandwich {e}"), r.pass));
            let sup = r.estimate.sup.clone().expect("lattice estimate");
            out.push(check(&format!("{spec} order unit {e}"), order_unit_check_against(e, &sup, 500, seed).pass));
        }
    }
    let l = load_lattice("chain:2").expect("chain:2");
    let u = Expr::order_unit(l);
    let est = fbl_lattice_norm_lb(&u, &cfg).expect("valid config");
    out.push(check("chain:2 order unit norm = 2", est.lower >= 2.0 - 1e-9 && est.upper <= 2.0));
    out
}

fn free_suite(seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    for (n, size) in [(1usize, 3usize), (2, 6), (3, 20), (4, 168)] {
        let g = bfree_generators(n).expect("small n");
        let closed = generated_sublattice(&g).len();
        out.push(check(&format!("bfree({n}) has {size} elements"), closed == size && all_monotone_tables(n).len() == size));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    use rand::seq::SliceRandom;
    for n in 1..=6usize {
        let mut rank: Vec<usize> = (0..n).collect();
        rank.shuffle(&mut rng);
        let labels = (1..=n).map(|k| format!("a{k}")).collect();
        let spec = BoundedChainSpec::new(labels, rank).expect("permutation");
        out.push(check(&format!("embedding of a {n}-chain"), verify_retraction_identity(&spec).map(|r| r.pass).unwrap_or(false)));
    }
    let small = Arc::new(FiniteLattice::chain(2).expect("chain:2"));
    let big = Arc::new(FiniteLattice::chain(3).expect("chain:3"));
    for retraction in [vec![0, 0, 1], vec![0, 1, 1]] {
        let i = LatticeMap::new(small.clone(), big.clone(), vec![0, 2]).expect("inclusion");
        let r = LatticeMap::new(big.clone(), small.clone(), retraction).expect("retraction");
        let pair = complemented_pair(i, r).expect("complemented");
        let defect = pair.identity_defect(&canonical_expressions(&small), 200, seed).unwrap_or(f64::INFINITY);
        out.push(check("functorial identity on chain:2 ⊂ chain:3", defect <= 1e-12));
    }
    out
}

fn retract_suite(seed: u64) -> Vec<Check> {
    [RetractionKind::Square, RetractionKind::Kprime, RetractionKind::Boolean]
        .into_iter()
        .map(|k| {
            let pass = retract_report(k, 0.025, seed).map(|(p, _)| p).unwrap_or(false);
            check(&format!("{k:?} retraction"), pass)
        })
        .collect()
}

fn verify(suite: Suite, seed: u64) -> Result<(bool, Value), CliError> {
    let wanted: Vec<Suite> = match suite {
        Suite::All => vec![Suite::Lattice, Suite::Norm, Suite::Free, Suite::Retract],
        s => vec![s],
    };
    let mut suites = serde_json::Map::new();
    let mut all = true;
    for s in wanted {
        let checks = match s {
            Suite::Lattice => lattice_suite(),
            Suite::Norm => norm_suite(seed),
            Suite::Free => free_suite(seed),
            Suite::Retract => retract_suite(seed),
            Suite::All => unreachable!(),
        };
        let passed = checks.iter().filter(|c| c.pass).count();
        all &= passed == checks.len();
        let key = to_value(&s).as_str().expect("unit variant").to_string();
        suites.insert(key, json!({ "passed": passed, "total": checks.len(), "checks": to_value(&checks) }));
    }
    Ok((all, json!({ "pass": all, "suites": suites })))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> RunOutcome {
        let cfg = RunConfig::try_parse_from(std::iter::once("fbl").chain(args.iter().copied())).unwrap();
        run(&cfg)
    }

    #[test]
    fn embed_example() {
        let out = run_args(&["embed", "--order", "m,a2,a1,M"]);
        assert_eq!(out.status, EXIT_OK);
        let emb = &out.report["result"]["embedding"];
        assert_eq!(emb[0]["minimal_true_points"], json!([[1]]));
        assert_eq!(emb[1]["minimal_true_points"], json!([[1, 2]]));
    }

    #[test]
    fn bad_inputs_exit_2() {
        assert_eq!(run_args(&["norm", "--lattice", "chain:1", "--expr", "(delta m)"]).status, EXIT_INVALID);
        assert_eq!(run_args(&["norm", "--lattice", "chain:2", "--expr", "(delta q)"]).status, EXIT_INVALID);
        assert_eq!(run_args(&["embed", "--order", "m,a1,a1,M"]).status, EXIT_INVALID);
    }

    #[test]
    fn reports_echo_config() {
        let out = run_args(&["bfree", "--n", "3"]);
        assert_eq!(out.report["schema_version"], json!(SCHEMA_VERSION));
        assert_eq!(out.report["config"]["n"], json!(3));
        assert_eq!(out.report["result"]["elements"], json!(20));
    }

    #[test]
    fn ladder() {
        assert_eq!(mesh_ladder(0.025).unwrap(), vec![0.1, 0.05, 0.025]);
        assert!(mesh_ladder(0.5).is_err());
    }
}
