//! Property tests for structural invariants across modules.

use hyperplane::combinatorics::LambdaParams;
use hyperplane::exec::Execution;
use hyperplane::harness::{EmpiricalTransform, TestReport};
use hyperplane::mapbuild::{build_pshit_ball, fill_boltzmann, hull_matches_trace, DistanceField, UNREACHED};
use hyperplane::peeling::{peel_replicas, peel_to_radius, PeelLaw};
use hyperplane::rng::stream;
use proptest::prelude::*;
use serde_json::json;

fn ratio() -> impl Strategy<Value = f64> {
    prop_oneof![Just(1.0), 0.5f64..1.0]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hull_trace_rows_are_monotone(ratio in ratio(), seed in any::<u64>(), replica in 0u64..1000) {
        let law = PeelLaw::new(LambdaParams::from_ratio(ratio).unwrap());
        let trace = peel_to_radius(&law, 3, seed, replica).unwrap();
        prop_assert_eq!(trace.rows.len(), 3);
        for (k, row) in trace.rows.iter().enumerate() {
            prop_assert_eq!(row.r, k as u32 + 1);
            prop_assert!(row.boundary_edges >= 1);
        }
        for w in trace.rows.windows(2) {
            prop_assert!(w[1].vertices >= w[0].vertices);
        }
    }

    #[test]
    fn filler_edge_count(ratio in ratio(), p in 1usize..10, seed in any::<u64>()) {
        let mut law = PeelLaw::new(LambdaParams::from_ratio(ratio).unwrap());
        let mut rng = stream(seed, 0);
        let (map, inner) = fill_boltzmann(p, &mut law, &mut rng).unwrap();
        map.validate().unwrap();
        prop_assert_eq!(map.n_vertices as u64, inner + p as u64);
        prop_assert_eq!(map.n_edges() as u64, 3 * inner + 2 * p as u64 - 3);
    }

    #[test]
    fn built_maps_match_their_traces(ratio in ratio(), seed in any::<u64>()) {
        let (map, trace) = build_pshit_ball(LambdaParams::from_ratio(ratio).unwrap(), 3, seed, 0).unwrap();
        map.validate().unwrap();
        prop_assert_eq!(hull_matches_trace(&map, &trace).unwrap(), None);
    }

    #[test]
    fn root_distances_are_lipschitz(seed in any::<u64>()) {
        let (map, _) = build_pshit_ball(LambdaParams::from_ratio(0.9).unwrap(), 3, seed, 0).unwrap();
        let dist = DistanceField::from_root(&map);
        prop_assert_eq!(dist.dist[map.origin[map.root as usize] as usize], 0);
        for e in 0..map.n_half_edges() {
            let a = dist.dist[map.origin[e] as usize];
            let b = dist.dist[map.head(e as u32) as usize];
            prop_assert!(a != UNREACHED && b != UNREACHED);
            prop_assert!(a.abs_diff(b) <= 1);
        }
    }

    #[test]
    fn empirical_transform_lies_in_unit_interval(
        samples in prop::collection::vec((0.0f64..50.0, 0.0f64..50.0), 1..64),
        l in 0.0f64..5.0,
        m in 0.0f64..5.0,
    ) {
        let (p, v): (Vec<f64>, Vec<f64>) = samples.into_iter().unzip();
        let t = EmpiricalTransform::from_samples(&[(l, m)], &p, &v).unwrap();
        prop_assert!(t.estimates[0] > 0.0 && t.estimates[0] <= 1.0);
        prop_assert!(t.stderr[0] >= 0.0);
    }

    #[test]
    fn report_verdict_follows_threshold(stat in 0.0f64..2.0, threshold in 0.0f64..2.0) {
        let r = TestReport::upper_bound("check", stat, threshold, json!({}));
        prop_assert_eq!(r.pass, stat <= threshold);
    }
}

#[test]
fn replica_results_do_not_depend_on_scheduling() {
    let params = LambdaParams::from_ratio(0.9).unwrap();
    let seq = peel_replicas(params, 4, 32, 11, Execution::Sequential).unwrap();
    let par = peel_replicas(params, 4, 32, 11, Execution::Parallel).unwrap();
    assert_eq!(seq, par);
}
