//! End-to-end acceptance checks, one verdict line per item.
//!
//! Runs as a plain binary (`harness = false`) so every line is printed even when
//! all checks pass. The exit code is nonzero when any item fails.

use std::time::Instant;

use hyperplane::combinatorics::LambdaParams;
use hyperplane::continuum::{computed_tail_constant, stated_tail_constant};
use hyperplane::exec::Execution;
use hyperplane::harness::*;
use hyperplane::mapbuild::{build_pshit_ball, check_geodesic_containment, hull_matches_trace};

struct Verdict {
    id: u32,
    title: &'static str,
    pass: bool,
    detail: String,
}

fn from_reports(id: u32, title: &'static str, reports: &[hyperplane::Result<TestReport>]) -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for r in reports {
        match r {
            Ok(r) => {
                pass &= r.pass;
                let mut s = format!("{} = {:.4e} (limit {:.1e})", r.name, r.statistic, r.threshold);
                if let Some(p) = r.p_value {
                    s.push_str(&format!(", p = {p:.3e}"));
                }
                if let Some(n) = &r.note {
                    s.push_str(&format!(" [{n}]"));
                }
                parts.push(s);
            }
            Err(e) => {
                pass = false;
                parts.push(format!("error: {e}"));
            }
        }
    }
    Verdict {
        id,
        title,
        pass,
        detail: parts.join("; "),
    }
}

/// Builds the 100 maps once and scores the trace oracle and geodesic containment separately.
fn map_checks(seed: u64) -> (Verdict, Verdict) {
    let params = LambdaParams::from_ratio(0.9).expect("valid ratio");
    let radius = 6;
    let mut oracle_failures = Vec::new();
    let mut containment_failures = Vec::new();
    for k in 0..100u64 {
        let (map, trace) = match build_pshit_ball(params, radius, seed, k) {
            Ok(x) => x,
            Err(e) => {
                oracle_failures.push(format!("map {k}: {e}"));
                continue;
            }
        };
        if let Err(e) = map.validate() {
            oracle_failures.push(format!("map {k}: {e}"));
            continue;
        }
        let p = map.boundary.len();
        let euler = map.n_vertices as i64 - map.n_edges() as i64 + (map.n_faces() as i64);
        if map.n_edges() != 3 * map.n_vertices - p - 1 || euler != 2 {
            oracle_failures.push(format!("map {k}: edge or Euler count"));
        }
        match hull_matches_trace(&map, &trace) {
            Ok(None) => {}
            Ok(Some(m)) => oracle_failures.push(format!("map {k}: {m}")),
            Err(e) => oracle_failures.push(format!("map {k}: {e}")),
        }
        for r in 1..=radius / 2 {
            match check_geodesic_containment(&map, r) {
                Ok(true) => {}
                Ok(false) => containment_failures.push(format!("map {k}, r = {r}")),
                Err(e) => containment_failures.push(format!("map {k}: {e}")),
            }
        }
    }
    let describe = |f: &[String]| match f.first() {
        None => "100 maps at 0.9 of critical, radius 6, no mismatch".to_string(),
        Some(first) => format!("{} failures, first: {first}", f.len()),
    };
    (
        Verdict {
            id: 6,
            title: "map oracle",
            pass: oracle_failures.is_empty(),
            detail: describe(&oracle_failures),
        },
        Verdict {
            id: 7,
            title: "geodesic containment",
            pass: containment_failures.is_empty(),
            detail: describe(&containment_failures),
        },
    )
}

/// Tail constant in its stated closed form, both directly and through the jump-count estimate.
fn tail_constant_checks(cfg: &SuiteConfig) -> Verdict {
    let stated = tail_constant_stated(cfg);
    let counts = mark_jump_counts(1.0, 0.01, 1e-4, 1e-3, 20_000, cfg.seed, cfg.exec);
    let mut v = from_reports(13, "volume-jump tail constant", &[stated]);
    match counts {
        Ok(c) => {
            let (lhs, p) = c.normalized_means();
            let dev = (lhs / (stated_tail_constant() * p) - 1.0).abs();
            let dev_computed = (lhs / (computed_tail_constant() * p) - 1.0).abs();
            v.pass &= dev <= 0.1;
            v.detail.push_str(&format!(
                "; jump count vs stated constant = {dev:.4} (limit 0.1) [vs quadrature constant {dev_computed:.4}]"
            ));
        }
        Err(e) => {
            v.pass = false;
            v.detail.push_str(&format!("; error: {e}"));
        }
    }
    v
}

fn main() {
    let seed = std::env::var("HYPERPLANE_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(1);
    let cfg = SuiteConfig {
        quick: false,
        seed,
        exec: Execution::Parallel,
    };
    let start = Instant::now();
    let mut verdicts = Vec::new();
    let mut emit = |v: Verdict| {
        println!(
            "[{}] {:02} {}: {} ({:.1}s)",
            if v.pass { "PASS" } else { "FAIL" },
            v.id,
            v.title,
            v.detail,
            start.elapsed().as_secs_f64()
        );
        verdicts.push(v.pass);
    };

    emit(from_reports(1, "exact recurrence", &[recurrence_residuals(&cfg)]));
    emit(from_reports(2, "series oracle", &[series_counts(&cfg)]));
    emit(from_reports(3, "critical identity", &[critical_markov_constants(&cfg)]));
    emit(from_reports(4, "peeling step law", &[step_law_normalization(&cfg), step_law_fit(&cfg)]));
    emit(from_reports(5, "filler size law", &[filler_size_law(&cfg)]));
    let (oracle, containment) = map_checks(seed);
    emit(oracle);
    emit(containment);
    emit(from_reports(8, "branching ODE closed form", &[csbp_closed_form(&cfg)]));
    emit(from_reports(9, "mass identity", &[mass_identity(&cfg)]));
    emit(from_reports(10, "exponential martingale", &[martingale_exponent(&cfg), martingale_mean(&cfg)]));
    emit(from_reports(11, "volume mark law", &[volume_mark_law(&cfg)]));
    emit(from_reports(
        12,
        "large-radius hull",
        &[large_radius_hull(&cfg), limiting_transform_check(&cfg)],
    ));
    emit(tail_constant_checks(&cfg));
    emit(from_reports(14, "near-critical bridge", &[bridge_trend(&cfg)]));
    emit(from_reports(15, "joint asymptotic", &[joint_asymptotic(&cfg)]));

    let failed = verdicts.iter().filter(|&&p| !p).count();
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        verdicts.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
