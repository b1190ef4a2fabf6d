#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tevtrop::graph::MetricGraph;
use tevtrop::numeric::{rat, LinForm, Param};

/// A connected graph with random genera, loops, parallel edges, marked and
/// unmarked legs, and lengths that are sums of distinct parameters. At least
/// three marks are kept, so a stable model always exists.
pub fn random_graph(seed: u64) -> (MetricGraph, BTreeSet<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=7);
    let mut g = MetricGraph::new();
    for _ in 0..n {
        let genus = if rng.gen_bool(0.2) { 1 } else { 0 };
        g.add_vertex(genus);
    }
    let mut next_param = 1;
    let mut length = |rng: &mut ChaCha8Rng| {
        let mut f = LinForm::param(Param::x(next_param));
        next_param += 1;
        if rng.gen_bool(0.3) {
            f = f + &LinForm::param(Param::x(next_param)) * &rat(2);
            next_param += 1;
        }
        f
    };
    for v in 1..n {
        let u = rng.gen_range(0..v);
        let l = length(&mut rng);
        g.add_edge(u, v, l);
    }
    for _ in 0..rng.gen_range(0..=3) {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        let l = length(&mut rng);
        g.add_edge(u, v, l);
    }
    let marks = rng.gen_range(3..=6);
    for m in 1..=marks {
        let v = rng.gen_range(0..n);
        g.add_leg(v, Some(m));
    }
    for _ in 0..rng.gen_range(0..=3) {
        let v = rng.gen_range(0..n);
        g.add_leg(v, None);
    }
    let mut keep: BTreeSet<usize> = (1..=marks).collect();
    while keep.len() > 3 && rng.gen_bool(0.4) {
        let drop = *keep.iter().nth(rng.gen_range(0..keep.len())).unwrap();
        keep.remove(&drop);
    }
    (g, keep)
}
