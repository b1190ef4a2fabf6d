use super::{Image, TropicalCover};
use crate::error::{Error, Result};
use crate::graph::MetricGraph;
use crate::numeric::{rat, LinForm, Param};
use crate::perm::{orbits, Perm};

#[derive(Debug, Clone, Copy)]
enum Item {
    Child(usize),
    Leg(usize),
}

#[derive(Debug, Clone)]
struct LegSpec {
    vertex: usize,
    mark: Option<usize>,
    perm: Perm,
    sheet: Option<usize>,
}

/// A planar target tree whose legs carry permutations of the sheets
/// `0..d`. The cover is read off from the monodromy: source vertices over a
/// target vertex are the orbits of the local permutations, preimages of an
/// edge or leg are the cycles of its permutation.
///
/// The root is vertex 0. The compact edge into vertex `v` has index `v - 1`.
/// Items at each vertex are multiplied in creation order, and the product of
/// all leg permutations in depth-first order must be trivial.
#[derive(Debug, Clone)]
pub struct MonodromyTree {
    d: usize,
    parent: Vec<Option<usize>>,
    items: Vec<Vec<Item>>,
    legs: Vec<LegSpec>,
}

impl MonodromyTree {
    pub fn new(d: usize) -> Self {
        MonodromyTree { d, parent: vec![None], items: vec![Vec::new()], legs: Vec::new() }
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn num_vertices(&self) -> usize {
        self.parent.len()
    }

    pub fn num_edges(&self) -> usize {
        self.parent.len() - 1
    }

    pub fn add_child(&mut self, parent: usize) -> usize {
        let v = self.parent.len();
        self.parent.push(Some(parent));
        self.items.push(Vec::new());
        self.items[parent].push(Item::Child(v));
        v
    }

    /// A leg at `v`. Marked legs must carry the identity, and `sheet` picks
    /// the preimage that inherits the mark.
    pub fn add_leg(&mut self, v: usize, perm: Perm, mark: Option<usize>, sheet: Option<usize>) -> usize {
        assert_eq!(perm.degree(), self.d);
        assert_eq!(mark.is_some(), sheet.is_some());
        let l = self.legs.len();
        self.legs.push(LegSpec { vertex: v, mark, perm, sheet });
        self.items[v].push(Item::Leg(l));
        l
    }

    pub fn branch_leg(&mut self, v: usize, a: usize, b: usize) -> usize {
        let t = Perm::transposition(self.d, a, b);
        self.add_leg(v, t, None, None)
    }

    pub fn marked_leg(&mut self, v: usize, mark: usize, sheet: usize) -> usize {
        self.add_leg(v, Perm::identity(self.d), Some(mark), Some(sheet))
    }

    /// Monodromy of the compact edge into each non-root vertex (index 0 holds
    /// the product over the whole tree).
    pub fn edge_monodromy(&self) -> Vec<Perm> {
        let n = self.parent.len();
        let mut down = vec![Perm::identity(self.d); n];
        for v in (0..n).rev() {
            let mut p = Perm::identity(self.d);
            for it in &self.items[v] {
                let q = match *it {
                    Item::Child(c) => &down[c],
                    Item::Leg(l) => &self.legs[l].perm,
                };
                p = p.then(q);
            }
            down[v] = p;
        }
        down
    }

    /// Builds the cover. Target edge `k` gets length `M·y_{k+1}` where `M` is
    /// its largest preimage expansion, so that the first preimage of maximal
    /// expansion has length exactly `y_{k+1}`.
    pub fn build(&self) -> Result<TropicalCover> {
        let d = self.d;
        let down = self.edge_monodromy();
        if !down[0].is_identity() {
            return Err(Error::Invalid(format!("monodromy product {} is not trivial", down[0])));
        }
        let n = self.parent.len();

        let mut target = MetricGraph::new();
        for _ in 0..n {
            target.add_vertex(0);
        }
        let max_exp: Vec<usize> =
            (1..n).map(|v| down[v].cycles().iter().map(Vec::len).max().unwrap_or(1)).collect();
        for v in 1..n {
            let m = max_exp[v - 1];
            target.add_edge(self.parent[v].unwrap(), v, LinForm::param(Param::y(v)).scale(&rat(m as i64)));
        }
        for l in &self.legs {
            target.add_leg(l.vertex, l.mark);
        }

        let mut source = MetricGraph::new();
        let mut vertex_map = Vec::new();
        let mut sheet_vertex = vec![vec![usize::MAX; d]; n];
        for (w, items) in self.items.iter().enumerate().take(n) {
            let mut gens: Vec<&Perm> = Vec::new();
            for it in items {
                gens.push(match *it {
                    Item::Child(c) => &down[c],
                    Item::Leg(l) => &self.legs[l].perm,
                });
            }
            for orb in orbits(d, &gens) {
                let sv = source.add_vertex(0);
                vertex_map.push(w);
                for s in orb {
                    sheet_vertex[w][s] = sv;
                }
            }
        }

        let mut edge_map = Vec::new();
        for v in 1..n {
            let w = self.parent[v].unwrap();
            let m = max_exp[v - 1];
            for cyc in down[v].cycles() {
                let k = cyc.len();
                let len = LinForm::param(Param::y(v)).scale(&crate::numeric::ratio(m as i64, k as i64));
                source.add_edge(sheet_vertex[w][cyc[0]], sheet_vertex[v][cyc[0]], len);
                edge_map.push(Image { target: v - 1, expansion: k });
            }
        }

        let mut leg_map = Vec::new();
        for (t, l) in self.legs.iter().enumerate() {
            for cyc in l.perm.cycles() {
                let mark = match (l.mark, l.sheet) {
                    (Some(m), Some(s)) if cyc.contains(&s) => {
                        if cyc.len() != 1 {
                            return Err(Error::Invalid(format!("marked leg {m} has a ramified preimage")));
                        }
                        Some(m)
                    }
                    _ => None,
                };
                source.add_leg(sheet_vertex[l.vertex][cyc[0]], mark);
                leg_map.push(Image { target: t, expansion: cyc.len() });
            }
        }

        let mut cover = TropicalCover { source, target, vertex_map, edge_map, leg_map };
        let degrees = cover.validate_harmonic()?;
        for (v, &dv) in degrees.iter().enumerate() {
            let val_t = cover.target.valence(cover.vertex_map[v]) as i64;
            let twice = dv as i64 * (val_t - 2) - cover.source.valence(v) as i64 + 2;
            if twice < 0 || twice % 2 != 0 {
                return Err(Error::RHViolation(v));
            }
            cover.source.genus[v] = (twice / 2) as usize;
        }
        Ok(cover)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::total_genus;

    #[test]
    fn genus_one_double_cover() {
        // Four simple branch legs on a two-vertex tree give an elliptic curve.
        let mut t = MonodromyTree::new(2);
        let c = t.add_child(0);
        t.branch_leg(0, 0, 1);
        t.branch_leg(0, 0, 1);
        t.branch_leg(c, 0, 1);
        t.branch_leg(c, 0, 1);
        let cover = t.build().unwrap();
        assert_eq!(cover.source.num_vertices(), 2);
        assert_eq!(cover.source.edges.len(), 2);
        assert_eq!(total_genus(&cover.source).unwrap(), 1);
        assert_eq!(cover.global_degree().unwrap(), 2);
        cover.validate_lengths().unwrap();
        cover.validate_local_rh().unwrap();
    }

    #[test]
    fn nontrivial_product_is_rejected() {
        let mut t = MonodromyTree::new(2);
        let c = t.add_child(0);
        t.branch_leg(0, 0, 1);
        t.add_leg(c, Perm::identity(2), Some(1), Some(0));
        assert!(t.build().is_err());
    }
}
