use std::collections::BTreeSet;

use super::MetricGraph;
use crate::error::{Error, Result};
use crate::numeric::LinForm;

/// A stable graph together with where each piece came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableModel {
    pub graph: MetricGraph,
    /// For each retained edge, the original edges concatenated into it.
    pub provenance: Vec<Vec<usize>>,
    pub vertex_origin: Vec<usize>,
    pub leg_origin: Vec<usize>,
}

impl StableModel {
    /// Whether every retained length is the exact sum of its provenance.
    pub fn provenance_holds(&self, original: &MetricGraph) -> bool {
        self.graph.edges.iter().zip(&self.provenance).all(|(e, prov)| {
            let sum = prov
                .iter()
                .fold(LinForm::zero(), |acc, &i| acc + original.edges[i].length.clone());
            sum == e.length
        })
    }
}

struct WEdge {
    ends: (usize, usize),
    length: LinForm,
    prov: Vec<usize>,
}

/// Forgets legs whose mark is not in `keep`, then prunes genus-0 leaves and
/// smooths genus-0 bivalent vertices until the graph is stable.
pub fn stabilize(g: &MetricGraph, keep: &BTreeSet<usize>) -> Result<StableModel> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.num_vertices();
    let mut alive = vec![true; n];
    let mut edges: Vec<Option<WEdge>> = g
        .edges
        .iter()
        .enumerate()
        .map(|(i, e)| Some(WEdge { ends: e.ends, length: e.length.clone(), prov: vec![i] }))
        .collect();
    let mut legs: Vec<Option<usize>> = g
        .legs
        .iter()
        .map(|l| l.mark.filter(|m| keep.contains(m)).map(|_| l.vertex))
        .collect();

    loop {
        let mut changed = false;
        for v in 0..n {
            if !alive[v] || g.genus[v] > 0 {
                continue;
            }
            let inc: Vec<usize> = (0..edges.len())
                .filter(|&i| edges[i].as_ref().is_some_and(|e| e.ends.0 == v || e.ends.1 == v))
                .collect();
            let lg: Vec<usize> = (0..legs.len()).filter(|&i| legs[i] == Some(v)).collect();
            let loops = inc.iter().filter(|&&i| edges[i].as_ref().unwrap().ends.0 == edges[i].as_ref().unwrap().ends.1).count();
            let val = inc.len() + loops + lg.len();
            if val >= 3 {
                continue;
            }
            let alive_count = alive.iter().filter(|&&a| a).count();
            match (inc.len(), loops, lg.len()) {
                (1, 0, 0) => {
                    edges[inc[0]] = None;
                    alive[v] = false;
                }
                (2, 0, 0) => {
                    let a = edges[inc[0]].take().unwrap();
                    let b = edges[inc[1]].take().unwrap();
                    let ea = if a.ends.0 == v { a.ends.1 } else { a.ends.0 };
                    let eb = if b.ends.0 == v { b.ends.1 } else { b.ends.0 };
                    let mut prov = a.prov;
                    prov.extend(b.prov);
                    edges[inc[0]] = Some(WEdge { ends: (ea, eb), length: a.length + b.length, prov });
                    alive[v] = false;
                }
                (1, 0, 1) => {
                    let e = edges[inc[0]].take().unwrap();
                    legs[lg[0]] = Some(if e.ends.0 == v { e.ends.1 } else { e.ends.0 });
                    alive[v] = false;
                }
                (1, 1, 0) => {
                    return Err(Error::Unstable("a cycle of bivalent vertices has no base".into()));
                }
                _ if alive_count == 1 => {
                    return Err(Error::Unstable(format!("single genus-0 vertex of valence {val}")));
                }
                _ => return Err(Error::Unstable(format!("vertex {v} has valence {val}"))),
            }
            changed = true;
        }
        if !changed {
            break;
        }
    }

    let mut new_id = vec![usize::MAX; n];
    let mut out = MetricGraph::new();
    let mut vertex_origin = Vec::new();
    for v in 0..n {
        if alive[v] {
            new_id[v] = out.add_vertex(g.genus[v]);
            vertex_origin.push(v);
        }
    }
    let mut provenance = Vec::new();
    for e in edges.into_iter().flatten() {
        out.add_edge(new_id[e.ends.0], new_id[e.ends.1], e.length);
        provenance.push(e.prov);
    }
    let mut leg_origin = Vec::new();
    for (i, l) in legs.iter().enumerate() {
        if let Some(v) = l {
            out.add_leg(new_id[*v], g.legs[i].mark);
            leg_origin.push(i);
        }
    }
    Ok(StableModel { graph: out, provenance, vertex_origin, leg_origin })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::total_genus;
    use crate::numeric::Param;

    fn y(i: usize) -> LinForm {
        LinForm::param(Param::y(i))
    }

    #[test]
    fn smoothing_adds_lengths() {
        // Two loops joined through a bivalent middle vertex.
        let mut g = MetricGraph::new();
        let a = g.add_vertex(0);
        let m = g.add_vertex(0);
        let b = g.add_vertex(0);
        g.add_edge(a, a, y(2));
        g.add_edge(b, b, y(3));
        g.add_edge(a, m, y(1));
        g.add_edge(m, b, y(1));
        let keep = BTreeSet::new();
        let s = stabilize(&g, &keep).unwrap();
        assert_eq!(s.graph.num_vertices(), 2);
        let bridge = s.graph.edges.iter().find(|e| !e.is_loop()).unwrap();
        assert_eq!(bridge.length.to_string(), "2*y_1");
        assert!(s.provenance_holds(&g));
        assert_eq!(total_genus(&s.graph).unwrap(), 2);
    }

    #[test]
    fn unmarked_tails_are_pruned() {
        let mut g = MetricGraph::new();
        let a = g.add_vertex(1);
        let b = g.add_vertex(0);
        let c = g.add_vertex(0);
        g.add_edge(a, b, y(1));
        g.add_edge(b, c, y(2));
        g.add_leg(c, None);
        g.add_leg(c, None);
        g.add_leg(a, Some(1));
        let s = stabilize(&g, &[1].into_iter().collect()).unwrap();
        assert_eq!(s.graph.num_vertices(), 1);
        assert_eq!(s.graph.legs.len(), 1);
        assert!(s.graph.edges.is_empty());
    }

    #[test]
    fn bare_circle_is_rejected() {
        let mut g = MetricGraph::new();
        let a = g.add_vertex(0);
        g.add_edge(a, a, y(1));
        assert!(matches!(stabilize(&g, &BTreeSet::new()), Err(Error::Unstable(_))));
    }
}
