//! Tropical admissible covers of trees: map data, validity predicates and
//! automorphisms.

mod aut;
mod monodromy;

pub use aut::{cover_automorphism_count, cover_isomorphic, hanging_copies, HangingCopies};
pub use monodromy::MonodromyTree;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::MetricGraph;
use crate::numeric::{rat, LinForm, Param};

/// Image of a source edge or leg together with its expansion factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Image {
    pub target: usize,
    pub expansion: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "CoverJson", try_from = "CoverJson")]
pub struct TropicalCover {
    pub source: MetricGraph,
    pub target: MetricGraph,
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<Image>,
    pub leg_map: Vec<Image>,
}

#[derive(Serialize, Deserialize)]
struct EdgeEntry {
    src_edge: usize,
    tgt_edge: usize,
    expansion: usize,
}

#[derive(Serialize, Deserialize)]
struct LegEntry {
    src_leg: usize,
    tgt_leg: usize,
    expansion: usize,
}

#[derive(Serialize, Deserialize)]
struct CoverJson {
    source: MetricGraph,
    target: MetricGraph,
    vertex_map: Vec<usize>,
    edges: Vec<EdgeEntry>,
    legs: Vec<LegEntry>,
}

impl From<TropicalCover> for CoverJson {
    fn from(c: TropicalCover) -> Self {
        CoverJson {
            edges: c
                .edge_map
                .iter()
                .enumerate()
                .map(|(i, m)| EdgeEntry { src_edge: i, tgt_edge: m.target, expansion: m.expansion })
                .collect(),
            legs: c
                .leg_map
                .iter()
                .enumerate()
                .map(|(i, m)| LegEntry { src_leg: i, tgt_leg: m.target, expansion: m.expansion })
                .collect(),
            source: c.source,
            target: c.target,
            vertex_map: c.vertex_map,
        }
    }
}

impl TryFrom<CoverJson> for TropicalCover {
    type Error = Error;
    fn try_from(j: CoverJson) -> Result<Self> {
        let mut edge_map = vec![None; j.source.edges.len()];
        for e in j.edges {
            let slot = edge_map
                .get_mut(e.src_edge)
                .ok_or_else(|| Error::Invalid(format!("source edge {} out of range", e.src_edge)))?;
            *slot = Some(Image { target: e.tgt_edge, expansion: e.expansion });
        }
        let mut leg_map = vec![None; j.source.legs.len()];
        for l in j.legs {
            let slot = leg_map
                .get_mut(l.src_leg)
                .ok_or_else(|| Error::Invalid(format!("source leg {} out of range", l.src_leg)))?;
            *slot = Some(Image { target: l.tgt_leg, expansion: l.expansion });
        }
        let edge_map = edge_map
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Invalid("unmapped source edge".into()))?;
        let leg_map = leg_map
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Invalid("unmapped source leg".into()))?;
        let c = TropicalCover { source: j.source, target: j.target, vertex_map: j.vertex_map, edge_map, leg_map };
        c.validate_incidence()?;
        Ok(c)
    }
}

/// Branching data: genus `g`, degree `g + 1`, `g + 3` marked ends with
/// trivial profile and `4g` simple branch ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HurwitzData {
    pub genus: usize,
    pub degree: usize,
    pub ends: usize,
    pub profiles: Vec<Vec<usize>>,
}

impl HurwitzData {
    pub fn new(g: usize) -> Self {
        let d = g + 1;
        let n = g + 3;
        let mut profiles = Vec::with_capacity(5 * g + 3);
        for _ in 0..n {
            profiles.push(vec![1; d]);
        }
        for _ in 0..4 * g {
            let mut p = vec![1; d - 1];
            p[0] = 2;
            profiles.push(p);
        }
        HurwitzData { genus: g, degree: d, ends: 5 * g + 3, profiles }
    }

    pub fn marked_ends(&self) -> usize {
        self.genus + 3
    }
}

/// A direction at a target vertex: an incident compact edge or a leg.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Edge(usize),
    Leg(usize),
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Direction::Edge(e) => write!(f, "edge {e}"),
            Direction::Leg(l) => write!(f, "leg {l}"),
        }
    }
}

/// Lengths erased, expansion factors kept.
#[derive(Debug, Clone)]
pub struct CombinatorialType(pub TropicalCover);

impl PartialEq for CombinatorialType {
    fn eq(&self, other: &Self) -> bool {
        cover_isomorphic(&self.0, &other.0, false).unwrap_or(false)
    }
}

impl TropicalCover {
    pub fn combinatorial_type(&self) -> CombinatorialType {
        let mut c = self.clone();
        for e in c.source.edges.iter_mut().chain(c.target.edges.iter_mut()) {
            e.length = LinForm::zero();
        }
        CombinatorialType(c)
    }

    /// Replaces every parameter in every length.
    pub fn substitute<F: Fn(Param) -> LinForm>(&self, f: F) -> TropicalCover {
        let mut c = self.clone();
        for e in c.source.edges.iter_mut().chain(c.target.edges.iter_mut()) {
            e.length = e.length.substitute(&f);
        }
        c
    }

    /// Directions at target vertex `w`, edges before legs.
    pub fn directions(&self, w: usize) -> Vec<Direction> {
        let mut d: Vec<Direction> = self.target.incident_edges(w).into_iter().map(Direction::Edge).collect();
        d.extend(self.target.legs_at(w).into_iter().map(Direction::Leg));
        d
    }

    /// Preimage branches at source vertex `v`, as (direction, expansion,
    /// source edge or leg).
    pub fn branches(&self, v: usize) -> Vec<(Direction, usize, Direction)> {
        let mut out = Vec::new();
        for e in self.source.incident_edges(v) {
            let m = self.edge_map[e];
            out.push((Direction::Edge(m.target), m.expansion, Direction::Edge(e)));
        }
        for l in self.source.legs_at(v) {
            let m = self.leg_map[l];
            out.push((Direction::Leg(m.target), m.expansion, Direction::Leg(l)));
        }
        out
    }

    pub fn edge_preimages(&self, t: usize) -> Vec<usize> {
        (0..self.edge_map.len()).filter(|&e| self.edge_map[e].target == t).collect()
    }

    pub fn leg_preimages(&self, t: usize) -> Vec<usize> {
        (0..self.leg_map.len()).filter(|&l| self.leg_map[l].target == t).collect()
    }

    pub fn fibre(&self, w: usize) -> Vec<usize> {
        (0..self.vertex_map.len()).filter(|&v| self.vertex_map[v] == w).collect()
    }

    /// Sizes, endpoint compatibility, leg bases, and the target being a
    /// genus-0 tree.
    pub fn validate_incidence(&self) -> Result<()> {
        self.source.check()?;
        self.target.check()?;
        let bad = |s: String| Err(Error::Invalid(s));
        if self.vertex_map.len() != self.source.num_vertices()
            || self.edge_map.len() != self.source.edges.len()
            || self.leg_map.len() != self.source.legs.len()
        {
            return bad("map sizes do not match the source".into());
        }
        if self.target.first_betti()? != 0 || self.target.genus.iter().any(|&g| g != 0) {
            return bad("target is not a stable tree".into());
        }
        if self.vertex_map.iter().any(|&w| w >= self.target.num_vertices()) {
            return bad("vertex image out of range".into());
        }
        for (i, e) in self.source.edges.iter().enumerate() {
            let m = self.edge_map[i];
            let Some(t) = self.target.edges.get(m.target) else {
                return bad(format!("edge {i} maps out of range"));
            };
            let (a, b) = (self.vertex_map[e.ends.0], self.vertex_map[e.ends.1]);
            if !((a, b) == t.ends || (b, a) == t.ends) || m.expansion == 0 {
                return bad(format!("source edge {i} is not mapped onto its image's endpoints"));
            }
        }
        for (i, l) in self.source.legs.iter().enumerate() {
            let m = self.leg_map[i];
            let Some(t) = self.target.legs.get(m.target) else {
                return bad(format!("leg {i} maps out of range"));
            };
            if t.vertex != self.vertex_map[l.vertex] || m.expansion == 0 {
                return bad(format!("source leg {i} is not based over its image's base"));
            }
        }
        Ok(())
    }

    /// `length(φ(e)) = m_e · length(e)` for every source edge.
    pub fn validate_lengths(&self) -> Result<()> {
        for (i, e) in self.source.edges.iter().enumerate() {
            let m = self.edge_map[i];
            let lhs = &self.target.edges[m.target].length;
            if *lhs != e.length.scale(&rat(m.expansion as i64)) {
                return Err(Error::LengthMismatch(format!(
                    "source edge {i}: {} * ({}) != {}",
                    m.expansion, e.length, lhs
                )));
            }
        }
        Ok(())
    }

    /// Checks harmonicity and returns the local degree of every source vertex.
    pub fn validate_harmonic(&self) -> Result<Vec<usize>> {
        let mut degrees = Vec::with_capacity(self.source.num_vertices());
        for v in 0..self.source.num_vertices() {
            let dirs = self.directions(self.vertex_map[v]);
            let br = self.branches(v);
            let sum = |d: Direction| br.iter().filter(|b| b.0 == d).map(|b| b.1).sum::<usize>();
            let first = dirs.first().copied();
            let d0 = first.map_or(0, sum);
            for &d in &dirs[1..] {
                if sum(d) != d0 {
                    return Err(Error::HarmonicityViolation {
                        vertex: v,
                        a: first.unwrap().to_string(),
                        b: d.to_string(),
                    });
                }
            }
            if d0 == 0 {
                return Err(Error::HarmonicityViolation {
                    vertex: v,
                    a: "local degree".into(),
                    b: "zero".into(),
                });
            }
            degrees.push(d0);
        }
        Ok(degrees)
    }

    /// `val_v + 2 g_v - 2 = d_v (val_φ(v) - 2)` at every source vertex.
    pub fn validate_local_rh(&self) -> Result<()> {
        let degrees = self.validate_harmonic()?;
        for (v, &d) in degrees.iter().enumerate() {
            let lhs = self.source.valence(v) as i64 + 2 * self.source.genus[v] as i64 - 2;
            let rhs = d as i64 * (self.target.valence(self.vertex_map[v]) as i64 - 2);
            if lhs != rhs {
                return Err(Error::RHViolation(v));
            }
        }
        Ok(())
    }

    /// The common sum of expansions over every target edge and leg.
    pub fn global_degree(&self) -> Result<usize> {
        let degrees = self.validate_harmonic()?;
        let mut value = None;
        let mut agree = |s: usize, what: String| -> Result<()> {
            match value {
                None => value = Some(s),
                Some(v) if v != s => return Err(Error::Invalid(format!("degree over {what} is {s}, expected {v}"))),
                _ => {}
            }
            Ok(())
        };
        for t in 0..self.target.edges.len() {
            let s = self.edge_preimages(t).iter().map(|&e| self.edge_map[e].expansion).sum();
            agree(s, format!("target edge {t}"))?;
        }
        for t in 0..self.target.legs.len() {
            let s = self.leg_preimages(t).iter().map(|&l| self.leg_map[l].expansion).sum();
            agree(s, format!("target leg {t}"))?;
        }
        for w in 0..self.target.num_vertices() {
            let s = self.fibre(w).iter().map(|&v| degrees[v]).sum();
            agree(s, format!("target vertex {w}"))?;
        }
        value.ok_or_else(|| Error::Invalid("empty cover".into()))
    }

    /// Profiles over every target leg against the given branching data.
    pub fn check_hurwitz_data(&self, h: &HurwitzData) -> Result<()> {
        let n = h.marked_ends();
        let marked: Vec<usize> = (0..self.target.legs.len()).filter(|&l| self.target.legs[l].mark.is_some()).collect();
        if self.target.marks() != (1..=n).collect::<Vec<_>>() || self.target.legs.len() != h.ends {
            return Err(Error::ProfileMismatch(marked.first().copied().unwrap_or(0)));
        }
        for t in 0..self.target.legs.len() {
            let pre = self.leg_preimages(t);
            let mut profile: Vec<usize> = pre.iter().map(|&l| self.leg_map[l].expansion).collect();
            profile.sort_unstable_by(|a, b| b.cmp(a));
            let marks: Vec<Option<usize>> = pre.iter().map(|&l| self.source.legs[l].mark).filter(Option::is_some).collect();
            let ok = match self.target.legs[t].mark {
                Some(m) => {
                    profile == h.profiles[m - 1] && marks == vec![Some(m)]
                }
                None => profile == h.profiles[n] && marks.is_empty(),
            };
            if !ok {
                return Err(Error::ProfileMismatch(t));
            }
        }
        Ok(())
    }

    /// Every predicate at once.
    pub fn validate_all(&self, h: &HurwitzData) -> Result<()> {
        self.validate_incidence()?;
        self.validate_lengths()?;
        self.validate_local_rh()?;
        if self.global_degree()? != h.degree {
            return Err(Error::Invalid("global degree differs from the branching data".into()));
        }
        self.check_hurwitz_data(h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity_cover() -> TropicalCover {
        let mut t = MetricGraph::new();
        let a = t.add_vertex(0);
        let b = t.add_vertex(0);
        t.add_edge(a, b, LinForm::param(Param::y(1)));
        for (v, m) in [(a, 1), (a, 2), (b, 3), (b, 4)] {
            t.add_leg(v, Some(m));
        }
        TropicalCover {
            source: t.clone(),
            target: t,
            vertex_map: vec![0, 1],
            edge_map: vec![Image { target: 0, expansion: 1 }],
            leg_map: (0..4).map(|i| Image { target: i, expansion: 1 }).collect(),
        }
    }

    #[test]
    fn identity_cover_is_valid() {
        let c = identity_cover();
        c.validate_incidence().unwrap();
        c.validate_lengths().unwrap();
        assert_eq!(c.validate_harmonic().unwrap(), vec![1, 1]);
        c.validate_local_rh().unwrap();
        assert_eq!(c.global_degree().unwrap(), 1);
        assert_eq!(cover_automorphism_count(&c).unwrap(), 1);
    }

    #[test]
    fn perturbed_expansion_breaks_harmonicity() {
        let mut c = identity_cover();
        c.edge_map[0].expansion = 2;
        assert!(matches!(c.validate_harmonic(), Err(Error::HarmonicityViolation { .. })));
    }

    #[test]
    fn json_roundtrip() {
        let c = identity_cover();
        let s = serde_json::to_string(&c).unwrap();
        assert!(s.contains("\"src_edge\""));
        let back: TropicalCover = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }
}
