use num_bigint::BigInt;
use tevtrop::construction::reference_point;
use tevtrop::oracle::{
    class_sizes, double_cover, enumerate_labeled_trees, enumerate_tree_topologies, find_all_preimages_g1, run_and_compare,
    TopologyOutcome,
};
use tevtrop::{io, ExecMode};

#[test]
fn labeled_counts_are_double_factorials() {
    for (n, count) in [(3, 1), (4, 3), (5, 15), (6, 105), (7, 945), (8, 10395)] {
        assert_eq!(enumerate_labeled_trees(n, n.min(4)).len(), count);
    }
}

#[test]
fn dedup_respects_class_sizes() {
    let (labeled, tops) = enumerate_tree_topologies();
    let sizes = class_sizes();
    assert_eq!(sizes.len(), tops.len());
    assert_eq!(sizes.values().sum::<usize>(), labeled);
    // relabeling four branch leaves: every class has at most 4! members
    assert!(sizes.values().all(|&k| 24 % k == 0));
}

#[test]
fn split_rule_predicts_source_edges() {
    let (_, tops) = enumerate_tree_topologies();
    for t in &tops {
        let c = double_cover(t).unwrap();
        let expected: usize = t
            .edges
            .iter()
            .filter(|&&(u, v)| !t.is_leaf(u) && !t.is_leaf(v))
            .map(|&(u, v)| if t.splits(u, v) { 2 } else { 1 })
            .sum();
        assert_eq!(c.source.edges.len(), expected, "{}", t.canonical_form());
        c.validate_harmonic().unwrap();
        c.validate_local_rh().unwrap();
    }
}

#[test]
fn exactly_two_covers_at_two_bases() {
    let p = reference_point(1);
    assert_eq!(find_all_preimages_g1(&p).unwrap().len(), 2);
    for base in [p.default_base(), BigInt::from(7919)] {
        let run = run_and_compare(&base, ExecMode::Sequential).unwrap();
        assert_eq!(run.report.distinct_covers, 2);
        assert_eq!(run.report.matches_construction, Some(true));
        let with = run.report.per_topology.iter().filter(|t| t.outcome == TopologyOutcome::Solutions).count();
        assert_eq!(with, 2);
    }
}

#[test]
fn report_serializes() {
    let p = reference_point(1);
    let run = run_and_compare(&p.default_base(), ExecMode::default()).unwrap();
    let json = io::to_json(&run.report).unwrap();
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["labeled_trees"], 10395);
    assert_eq!(v["distinct_covers"], 2);
    assert!(v["per_topology"].as_array().unwrap().iter().all(|t| t["outcome"].is_string()));
}
