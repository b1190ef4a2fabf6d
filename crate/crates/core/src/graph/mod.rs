//! Metric graphs with genus-decorated vertices and marked legs.

mod iso;
mod stabilize;

pub use iso::{automorphism_count, isomorphic, GraphIso, MAX_VERTICES};
pub use stabilize::{stabilize, StableModel};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::LinForm;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub ends: (usize, usize),
    pub length: LinForm,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.ends.0 == self.ends.1
    }

    pub fn other(&self, v: usize) -> usize {
        if self.ends.0 == v {
            self.ends.1
        } else {
            self.ends.0
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Leg {
    pub vertex: usize,
    pub mark: Option<usize>,
}

/// Vertices, edges and legs are identified by their position in the
/// respective vector.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MetricGraph {
    pub genus: Vec<usize>,
    pub edges: Vec<Edge>,
    pub legs: Vec<Leg>,
}

impl MetricGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, genus: usize) -> usize {
        self.genus.push(genus);
        self.genus.len() - 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize, length: LinForm) -> usize {
        assert!(u < self.genus.len() && v < self.genus.len());
        self.edges.push(Edge { ends: (u, v), length });
        self.edges.len() - 1
    }

    pub fn add_leg(&mut self, v: usize, mark: Option<usize>) -> usize {
        assert!(v < self.genus.len());
        self.legs.push(Leg { vertex: v, mark });
        self.legs.len() - 1
    }

    pub fn num_vertices(&self) -> usize {
        self.genus.len()
    }

    /// Edges count with multiplicity two when they are loops; legs count once.
    pub fn valence(&self, v: usize) -> usize {
        let e: usize = self
            .edges
            .iter()
            .map(|e| usize::from(e.ends.0 == v) + usize::from(e.ends.1 == v))
            .sum();
        e + self.legs.iter().filter(|l| l.vertex == v).count()
    }

    pub fn incident_edges(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&i| self.edges[i].ends.0 == v || self.edges[i].ends.1 == v)
            .collect()
    }

    pub fn legs_at(&self, v: usize) -> Vec<usize> {
        (0..self.legs.len()).filter(|&i| self.legs[i].vertex == v).collect()
    }

    pub fn leg_with_mark(&self, mark: usize) -> Option<usize> {
        self.legs.iter().position(|l| l.mark == Some(mark))
    }

    pub fn marks(&self) -> Vec<usize> {
        let mut m: Vec<usize> = self.legs.iter().filter_map(|l| l.mark).collect();
        m.sort_unstable();
        m
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.num_vertices()];
        for e in &self.edges {
            adj[e.ends.0].push(e.ends.1);
            if !e.is_loop() {
                adj[e.ends.1].push(e.ends.0);
            }
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        let n = self.num_vertices();
        if n == 0 {
            return false;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn first_betti(&self) -> Result<usize> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(self.edges.len() + 1 - self.num_vertices())
    }

    /// Checks the structural invariants: endpoints in range, marks distinct.
    pub fn check(&self) -> Result<()> {
        let n = self.num_vertices();
        for e in &self.edges {
            if e.ends.0 >= n || e.ends.1 >= n {
                return Err(Error::Invalid("edge endpoint out of range".into()));
            }
        }
        let mut marks = Vec::new();
        for l in &self.legs {
            if l.vertex >= n {
                return Err(Error::Invalid("leg base out of range".into()));
            }
            if let Some(m) = l.mark {
                marks.push(m);
            }
        }
        let k = marks.len();
        marks.sort_unstable();
        marks.dedup();
        if marks.len() != k {
            return Err(Error::Invalid("repeated mark".into()));
        }
        Ok(())
    }
}

/// First Betti number plus the sum of vertex genera.
pub fn total_genus(g: &MetricGraph) -> Result<usize> {
    Ok(g.first_betti()? + g.genus.iter().sum::<usize>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Param;

    #[test]
    fn genus_of_small_graphs() {
        let mut g = MetricGraph::new();
        g.add_vertex(0);
        assert_eq!(total_genus(&g).unwrap(), 0);
        let v = g.add_vertex(0);
        g.add_edge(0, v, LinForm::param(Param::x(1)));
        g.add_edge(0, v, LinForm::param(Param::x(2)));
        assert_eq!(total_genus(&g).unwrap(), 1);
        g.add_vertex(2);
        assert_eq!(total_genus(&g), Err(Error::Disconnected));
        g.add_edge(1, 2, LinForm::param(Param::x(3)));
        assert_eq!(total_genus(&g).unwrap(), 3);
        assert_eq!(g.valence(1), 3);
    }
}
