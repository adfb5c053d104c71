//! Acceptance criteria, one PASS/FAIL line each. Run with
//! `cargo test --test acceptance`.

mod common;

use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use fbl::dual::{is_hom, recover_layering, sample_dual, sample_u_boolean};
use fbl::expr::{canonical_expressions, random_expr};
use fbl::free::{
    all_monotone_tables, bfree_generators, complemented_pair, generated_sublattice, verify_retraction_identity,
    BoundedChainSpec,
};
use fbl::lattice::prime_filters;
use fbl::norm::{fbl_lattice_norm_lb, fbl_set_norm_lb, order_unit_check_against, sandwich_check, sup_norm_kl};
use fbl::retract::{
    boolean_sign_retraction, continuity_probe, k0_points, kprime_retraction, square_retraction, GammaPoint,
    RetractionKind, SquarePoint,
};
use fbl::{Expr, FiniteLattice, LatticeMap, LatticeSpec, SearchConfig};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

const CMP_TOL: f64 = 1e-9;
const MESH: f64 = 1.0 / 64.0;

struct Outcome {
    pass: bool,
    summary: String,
    report: Value,
}

fn lattice(spec: &str) -> Arc<FiniteLattice> {
    Arc::new(FiniteLattice::build(&spec.parse::<LatticeSpec>().unwrap()).unwrap())
}

fn c1_generator_norms() -> Outcome {
    let specs = ["chain:2", "chain:3", "chain:4", "chain:5", "ba:1", "ba:2", "ba:3", "chain:2*chain:3"];
    let cfg = SearchConfig::default();
    let mut rows = Vec::new();
    let mut pass = true;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for spec in specs {
        let l = lattice(spec);
        for x in 0..l.len() {
            let e = Expr::parse(l.clone(), &format!("(delta {})", l.label(x))).unwrap();
            let est = fbl_lattice_norm_lb(&e, &cfg).unwrap();
            let check = est.witness.verify(&e);
            let ok = est.lower >= 1.0 - CMP_TOL
                && est.lower <= 1.0 + 1e-12
                && est.upper <= 1.0 + 1e-12
                && check.feasible
                && check.points_valid
                && check.ratio >= 1.0 - CMP_TOL;
            pass &= ok;
            lo = lo.min(est.lower);
            hi = hi.max(est.upper);
            rows.push(json!({ "lattice": spec, "element": l.label(x), "lower": est.lower, "upper": est.upper, "ok": ok }));
        }
    }
    Outcome {
        pass,
        summary: format!("{} generators, lower >= {lo}, upper <= {hi}", rows.len()),
        report: json!(rows),
    }
}

fn c2_order_unit_norm() -> Outcome {
    let l = lattice("chain:2");
    let e = Expr::order_unit(l.clone());
    let est = fbl_lattice_norm_lb(&e, &SearchConfig::default()).unwrap();
    let homs = est.witness.points.iter().all(|p| matches!(is_hom(&l, p), Ok(None)));
    let check = est.witness.verify(&e);
    let pass = est.lower >= 2.0 - CMP_TOL && est.lower <= 2.0 && homs && check.feasible;
    Outcome {
        pass,
        summary: format!("lower {}, upper {}, witness of {} homs valid: {homs}", est.lower, est.upper, est.witness.points.len()),
        report: json!({ "lower": est.lower, "upper": est.upper, "witness": est.witness.points }),
    }
}

/// 50 seeded random expressions of depth <= 4 on each lattice.
fn random_set() -> Vec<Expr> {
    let mut out = Vec::new();
    for (i, spec) in ["chain:2", "chain:3", "chain:4", "ba:2"].iter().enumerate() {
        let l = lattice(spec);
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + i as u64);
        out.extend((0..50).map(|_| random_expr(&l, 4, &mut rng)));
    }
    out
}

fn c3_sandwich() -> Outcome {
    let cfg = SearchConfig { mesh: MESH, ..SearchConfig::default() };
    let mut rows = Vec::new();
    let mut failed = 0;
    for e in random_set() {
        let r = sandwich_check(&e, &cfg).unwrap();
        let tol = e.lipschitz_bound() * MESH + CMP_TOL;
        let ok = r.pass && r.sup_norm - tol <= r.lower && r.lower <= 2.0 * r.sup_norm + tol;
        failed += usize::from(!ok);
        rows.push(json!({ "expr": e.to_string(), "sup": r.sup_norm, "lower": r.lower, "tol": tol, "ok": ok }));
    }
    Outcome { pass: failed == 0, summary: format!("{} expressions, {failed} failures", rows.len()), report: json!(rows) }
}

fn c4_order_unit_inequality() -> Outcome {
    let mut violations = 0;
    let mut min_slack = f64::INFINITY;
    let mut rows = Vec::new();
    for (i, e) in random_set().iter().enumerate() {
        let sup = sup_norm_kl(e, MESH);
        let r = order_unit_check_against(e, &sup, 10_000, 77 + (i / 50) as u64);
        violations += r.violations;
        min_slack = min_slack.min(r.min_slack);
        rows.push(json!({ "expr": e.to_string(), "violations": r.violations, "min_slack": r.min_slack }));
    }
    Outcome {
        pass: violations == 0,
        summary: format!("{} expressions x 10^4 homs, {violations} violations, min slack {min_slack:.3e}", rows.len()),
        report: json!(rows),
    }
}

fn c5_oracle_agreement() -> Outcome {
    let cfg = SearchConfig { max_n: 3, ..SearchConfig::default() };
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    let mut pass = true;
    for spec in ["chain:2", "chain:3"] {
        let l = lattice(spec);
        for e in canonical_expressions(&l) {
            let k = e.lipschitz_bound();
            let oracle = common::oracle_norm(&e, common::ORACLE_STEPS);
            let est = fbl_lattice_norm_lb(&e, &cfg).unwrap();
            let gap = (est.lower - oracle).abs();
            let ok = gap <= k / 8.0;
            pass &= ok;
            worst = worst.max(gap);
            rows.push(json!({ "lattice": spec, "expr": e.to_string(), "engine": est.lower, "oracle": oracle, "ok": ok }));
        }
    }
    Outcome { pass, summary: format!("{} expressions, largest |engine - oracle| = {worst:.3e}", rows.len()), report: json!(rows) }
}

fn c6_bfree_sizes() -> Outcome {
    let sizes: Vec<(usize, usize)> =
        (1..=4).map(|n| (generated_sublattice(&bfree_generators(n).unwrap()).len(), all_monotone_tables(n).len())).collect();
    let pass = sizes.iter().map(|s| s.0).eq([3, 6, 20, 168]) && sizes.iter().all(|s| s.0 == s.1);
    Outcome { pass, summary: format!("closure / exhaustive sizes {sizes:?}"), report: json!(sizes) }
}

fn c7_embedding() -> Outcome {
    let mut checked = 0;
    let mut failed = 0;
    for n in 1..=8usize {
        for k in 0..100u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64 * 1000 + k);
            let mut rank: Vec<usize> = (0..n).collect();
            rank.shuffle(&mut rng);
            let labels = (1..=n).map(|j| format!("a{j}")).collect();
            let spec = BoundedChainSpec::new(labels, rank).unwrap();
            let r = verify_retraction_identity(&spec).unwrap();
            checked += 1;
            failed += usize::from(!(r.pass && r.injective && r.strictly_increasing && r.identities.iter().all(|&b| b)));
        }
    }
    Outcome {
        pass: failed == 0,
        summary: format!("{checked} insertion orders, {failed} failures"),
        report: json!({ "checked": checked, "failed": failed }),
    }
}

fn random_kprime_target(rng: &mut ChaCha8Rng) -> GammaPoint {
    let free = rng.random_range(-1.0..=1.0);
    let (b, t) = if rng.random_bool(0.5) { (-1.0, free) } else { (free, 1.0) };
    let n = rng.random_range(1..=3);
    let gens = (0..n).map(|_| rng.random_range(b..=t)).collect();
    GammaPoint::new(b, t, gens)
}

fn c8_retractions() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let n = 10_000;
    let mut sq_fix = 0;
    let mut sq_idem = 0;
    let mut kp_fix = 0;
    let mut kp_idem = 0;
    for i in 0..n {
        let a = rng.random_range(-1.0..=1.0);
        let target = if i % 2 == 0 { SquarePoint { x: -1.0, y: a } } else { SquarePoint { x: a, y: 1.0 } };
        sq_fix += usize::from(square_retraction(target).unwrap() == target);
        let p = SquarePoint { x: rng.random_range(-1.0..=1.0), y: rng.random_range(-1.0..=1.0) };
        let once = square_retraction(p).unwrap();
        sq_idem += usize::from(once.on_l_shape() && once.x <= once.y && square_retraction(once).unwrap() == once);

        let t = random_kprime_target(&mut rng);
        kp_fix += usize::from(t.in_kprime(1e-12) && kprime_retraction(&t).unwrap() == t);
        let gens = (0..rng.random_range(1..=3)).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let f = GammaPoint::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0), gens);
        let once = kprime_retraction(&f).unwrap();
        kp_idem += usize::from(once.in_kprime(1e-12) && kprime_retraction(&once).unwrap() == once);
    }
    let meshes = [0.1, 0.05, 0.025, 0.0125];
    let sq = continuity_probe(RetractionKind::Square, &meshes).unwrap();
    let kp = continuity_probe(RetractionKind::Kprime, &meshes).unwrap();
    let pass = [sq_fix, sq_idem, kp_fix, kp_idem].iter().all(|&c| c == n) && sq.non_increasing && kp.non_increasing;
    Outcome {
        pass,
        summary: format!(
            "square fix/idem {sq_fix}/{sq_idem}, kprime fix/idem {kp_fix}/{kp_idem} of {n}; jumps {:?} / {:?}",
            sq.jumps, kp.jumps
        ),
        report: json!({ "square": [sq_fix, sq_idem, sq.jumps], "kprime": [kp_fix, kp_idem, kp.jumps] }),
    }
}

fn signed_homs(l: &FiniteLattice) -> Vec<Vec<f64>> {
    let n = l.len();
    (0u32..(1 << n))
        .map(|mask| (0..n).map(|x| if mask & (1 << x) != 0 { 1.0 } else { -1.0 }).collect::<Vec<f64>>())
        .filter(|v| v[l.min()] == -1.0 && v[l.max()] == 1.0 && matches!(is_hom(l, v), Ok(None)))
        .collect()
}

fn c9_boolean_structure() -> Outcome {
    let mut rows = Vec::new();
    let mut pass = true;
    for n in 1..=4usize {
        let l = lattice(&format!("ba:{n}"));
        let antichain = prime_filters(&l).is_antichain();
        let two_valued = l.maximal_jchains().iter().all(|c| c.len() <= 1)
            && sample_dual(&l, 1000, 9, false)
                .unwrap()
                .iter()
                .all(|p| recover_layering(&l, p.values()).is_some_and(|h| h.distinct_values() <= 2));
        let enumerated = signed_homs(&l);
        let k0 = k0_points(&l);
        let k0_ok = enumerated.len() == n && k0.len() == n && k0.iter().all(|k| enumerated.iter().any(|v| v == k.values()));
        let fixes = k0.iter().all(|k| boolean_sign_retraction(k).is_ok_and(|p| &p == k));
        let maps = sample_u_boolean(&l, 1000, 9).iter().all(|x| {
            boolean_sign_retraction(x).is_ok_and(|p| matches!(is_hom(&l, p.values()), Ok(None)) && enumerated.iter().any(|v| v == p.values()))
        });
        let ok = antichain && two_valued && k0_ok && fixes && maps;
        pass &= ok;
        rows.push(json!({ "n": n, "antichain": antichain, "two_valued": two_valued, "k0": enumerated.len(), "fixes": fixes, "maps_into_k0": maps }));
    }
    Outcome { pass, summary: format!("ba:1..4 checked, |K0| = {:?}", rows.iter().map(|r| r["k0"].as_u64().unwrap_or(0)).collect::<Vec<_>>()), report: json!(rows) }
}

fn c10_functorial_identity() -> Outcome {
    let small = lattice("chain:2");
    let big = lattice("chain:3");
    let exprs = canonical_expressions(&small);
    let mut defects = Vec::new();
    for r in [vec![0, 0, 1], vec![0, 1, 1]] {
        let i = LatticeMap::new(small.clone(), big.clone(), vec![0, 2]).unwrap();
        let r = LatticeMap::new(big.clone(), small.clone(), r).unwrap();
        let pair = complemented_pair(i, r).unwrap();
        defects.push(pair.identity_defect(&exprs, 1000, 10).unwrap());
    }
    let pass = defects.iter().all(|&d| d <= 1e-12);
    Outcome { pass, summary: format!("{} expressions x 10^3 homs, defects {defects:?}", exprs.len()), report: json!(defects) }
}

fn c11_restriction_inequality() -> Outcome {
    let cfg = SearchConfig::default();
    let mut rows = Vec::new();
    let mut failed = 0;
    for spec in ["chain:2", "chain:3", "ba:2"] {
        let l = lattice(spec);
        for e in canonical_expressions(&l) {
            let lat = fbl_lattice_norm_lb(&e, &cfg).unwrap().lower;
            let set = fbl_set_norm_lb(&e, &cfg).unwrap().lower;
            let ok = lat <= set + CMP_TOL;
            failed += usize::from(!ok);
            rows.push(json!({ "lattice": spec, "expr": e.to_string(), "lattice_lower": lat, "set_lower": set }));
        }
    }
    Outcome { pass: failed == 0, summary: format!("{} expressions, {failed} failures", rows.len()), report: json!(rows) }
}

type Criterion = (u32, &'static str, Option<Duration>, fn() -> Outcome);

const CRITERIA: [Criterion; 11] = [
    (1, "generator norms", Some(Duration::from_secs(5)), c1_generator_norms),
    (2, "order-unit norm", Some(Duration::from_secs(1)), c2_order_unit_norm),
    (3, "sandwich", Some(Duration::from_secs(60)), c3_sandwich),
    (4, "order-unit inequality", None, c4_order_unit_inequality),
    (5, "oracle agreement", None, c5_oracle_agreement),
    (6, "bfree sizes", Some(Duration::from_secs(10)), c6_bfree_sizes),
    (7, "chain embedding", Some(Duration::from_secs(30)), c7_embedding),
    (8, "retractions", None, c8_retractions),
    (9, "boolean structure", None, c9_boolean_structure),
    (10, "functorial identity", None, c10_functorial_identity),
    (11, "restriction inequality", None, c11_restriction_inequality),
];

fn line(id: u32, name: &str, pass: bool, detail: &str) {
    println!("{} criterion {id:>2} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

fn binary_json(args: &[&str], workers: &str) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_fbl")).args(args).env("FBL_WORKERS", workers).output().unwrap();
    String::from_utf8(out.stdout).unwrap()
}

fn main() {
    let mut all = true;
    let mut first = Vec::new();
    for (id, name, limit, f) in CRITERIA {
        let start = Instant::now();
        let out = in_pool(1, f);
        let took = start.elapsed();
        let in_time = limit.is_none_or(|l| took < l);
        let pass = out.pass && in_time;
        let budget = limit.map(|l| format!(" < {} s", l.as_secs())).unwrap_or_default();
        line(id, name, pass, &format!("{} ({:.2} s{budget})", out.summary, took.as_secs_f64()));
        all &= pass;
        first.push(serde_json::to_string(&out.report).unwrap());
    }

    let mut differing = Vec::new();
    for ((id, _, _, f), one) in CRITERIA.iter().zip(&first) {
        let four = serde_json::to_string(&in_pool(4, f).report).unwrap();
        if &four != one {
            differing.push(*id);
        }
    }
    let cli_runs = [
        vec!["verify", "--suite", "all", "--seed", "7", "--json"],
        vec!["sandwich", "--lattice", "ba:2", "--expr", "(vee (delta {1}) (scale -1 (delta {2})))", "--random", "5", "--json"],
    ];
    let cli_same = cli_runs.iter().all(|a| binary_json(a, "1") == binary_json(a, "4"));
    let pass = differing.is_empty() && cli_same;
    line(
        12,
        "determinism",
        pass,
        &format!("reports 1-11 identical under 1 and 4 workers: {} (differing: {differing:?}); CLI FBL_WORKERS=1/4 identical: {cli_same}", differing.is_empty()),
    );
    all &= pass;

    if !all {
        std::process::exit(1);
    }
}
