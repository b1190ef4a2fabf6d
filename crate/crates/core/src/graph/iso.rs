use std::collections::{BTreeMap, VecDeque};

use super::MetricGraph;
use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 60;

/// Images of vertices, edges and legs under an isomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphIso {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub legs: Vec<usize>,
}

type PairKey = (usize, usize);

struct Prepared {
    invariant: Vec<String>,
    /// Sorted length keys of edges between each unordered vertex pair.
    pairs: BTreeMap<PairKey, Vec<String>>,
    order: Vec<usize>,
}

fn length_key(g: &MetricGraph, e: usize, respect: bool) -> String {
    if respect {
        g.edges[e].length.to_string()
    } else {
        String::new()
    }
}

fn prepare(g: &MetricGraph, respect: bool) -> Prepared {
    let n = g.num_vertices();
    let mut pairs: BTreeMap<PairKey, Vec<String>> = BTreeMap::new();
    for (i, e) in g.edges.iter().enumerate() {
        let k = (e.ends.0.min(e.ends.1), e.ends.0.max(e.ends.1));
        pairs.entry(k).or_default().push(length_key(g, i, respect));
    }
    for v in pairs.values_mut() {
        v.sort();
    }
    let invariant = (0..n)
        .map(|v| {
            let mut marks: Vec<usize> = Vec::new();
            let mut free = 0;
            for l in &g.legs {
                if l.vertex == v {
                    match l.mark {
                        Some(m) => marks.push(m),
                        None => free += 1,
                    }
                }
            }
            marks.sort_unstable();
            let mut inc: Vec<String> = g
                .incident_edges(v)
                .into_iter()
                .map(|e| format!("{}{}", if g.edges[e].is_loop() { "o" } else { "-" }, length_key(g, e, respect)))
                .collect();
            inc.sort();
            format!("{}|{}|{:?}|{}|{:?}", g.genus[v], g.valence(v), marks, free, inc)
        })
        .collect();
    let adj = g.adjacency();
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            order.push(v);
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    q.push_back(w);
                }
            }
        }
    }
    Prepared { invariant, pairs, order }
}

fn pair(p: &Prepared, u: usize, v: usize) -> Option<&Vec<String>> {
    p.pairs.get(&(u.min(v), u.max(v)))
}

/// Depth-first search over vertex bijections. `visit` returns `false` to stop.
fn search<F: FnMut(&[usize]) -> bool>(pa: &Prepared, pb: &Prepared, n: usize, visit: &mut F) {
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec<F: FnMut(&[usize]) -> bool>(
        depth: usize,
        pa: &Prepared,
        pb: &Prepared,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        visit: &mut F,
    ) -> bool {
        if depth == pa.order.len() {
            return visit(map);
        }
        let v = pa.order[depth];
        for c in 0..map.len() {
            if used[c] || pa.invariant[v] != pb.invariant[c] {
                continue;
            }
            map[v] = c;
            let ok = pa.order[..=depth].iter().all(|&u| pair(pa, v, u) == pair(pb, c, map[u]));
            if ok {
                used[c] = true;
                let go_on = rec(depth + 1, pa, pb, map, used, visit);
                used[c] = false;
                if !go_on {
                    map[v] = usize::MAX;
                    return false;
                }
            }
            map[v] = usize::MAX;
        }
        true
    }
    rec(0, pa, pb, &mut map, &mut used, visit);
}

fn same_shape(a: &MetricGraph, b: &MetricGraph) -> bool {
    a.num_vertices() == b.num_vertices() && a.edges.len() == b.edges.len() && a.legs.len() == b.legs.len()
}

/// An isomorphism preserving genera, marks and, if requested, lengths.
pub fn isomorphic(a: &MetricGraph, b: &MetricGraph, respect_lengths: bool) -> Result<Option<GraphIso>> {
    let n = a.num_vertices();
    if n > MAX_VERTICES || b.num_vertices() > MAX_VERTICES {
        return Err(Error::TooLarge(n.max(b.num_vertices())));
    }
    if !same_shape(a, b) || a.marks() != b.marks() {
        return Ok(None);
    }
    let pa = prepare(a, respect_lengths);
    let pb = prepare(b, respect_lengths);
    let mut found: Option<Vec<usize>> = None;
    search(&pa, &pb, n, &mut |m| {
        found = Some(m.to_vec());
        false
    });
    let Some(vmap) = found else { return Ok(None) };

    let mut used_e = vec![false; b.edges.len()];
    let mut edges = Vec::with_capacity(a.edges.len());
    for (i, e) in a.edges.iter().enumerate() {
        let (u, v) = (vmap[e.ends.0], vmap[e.ends.1]);
        let key = length_key(a, i, respect_lengths);
        let j = (0..b.edges.len())
            .find(|&j| {
                let f = &b.edges[j];
                !used_e[j]
                    && ((f.ends.0 == u && f.ends.1 == v) || (f.ends.0 == v && f.ends.1 == u))
                    && length_key(b, j, respect_lengths) == key
            })
            .expect("vertex bijection guarantees matching edges");
        used_e[j] = true;
        edges.push(j);
    }
    let mut used_l = vec![false; b.legs.len()];
    let mut legs = Vec::with_capacity(a.legs.len());
    for l in &a.legs {
        let j = (0..b.legs.len())
            .find(|&j| !used_l[j] && b.legs[j].vertex == vmap[l.vertex] && b.legs[j].mark == l.mark)
            .expect("vertex bijection guarantees matching legs");
        used_l[j] = true;
        legs.push(j);
    }
    Ok(Some(GraphIso { vertices: vmap, edges, legs }))
}

fn factorial(k: usize) -> u128 {
    (1..=k as u128).product()
}

/// Number of automorphisms acting on vertices, edges (with orientation of
/// loops) and legs, preserving genera, symbolic lengths and marks. Unmarked
/// legs at a vertex are permutable.
pub fn automorphism_count(g: &MetricGraph) -> Result<u128> {
    let n = g.num_vertices();
    if n > MAX_VERTICES {
        return Err(Error::TooLarge(n));
    }
    let p = prepare(g, true);
    let mut bijections: u128 = 0;
    search(&p, &p, n, &mut |_| {
        bijections += 1;
        true
    });
    let mut fixed: u128 = 1;
    for ((u, v), keys) in &p.pairs {
        let mut run = 1;
        for k in 1..=keys.len() {
            if k < keys.len() && keys[k] == keys[k - 1] {
                run += 1;
                continue;
            }
            fixed *= factorial(run);
            if u == v {
                fixed *= 1u128 << run;
            }
            run = 1;
        }
    }
    for v in 0..n {
        let free = g.legs.iter().filter(|l| l.vertex == v && l.mark.is_none()).count();
        fixed *= factorial(free);
    }
    Ok(bijections * fixed)
}
