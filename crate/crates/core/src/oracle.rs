//! Exhaustive search over every degree-2 admissible cover of every trivalent
//! tree with four marked and four branch leaves, keeping those that stabilize
//! onto the genus-1 reference point with strictly positive lengths.
//!
//! Nothing here uses the construction; the two sets are compared afterwards.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

use crate::construction::{enumerate_solutions, reference_point, ReferencePoint};
use crate::cover::{cover_isomorphic, MonodromyTree, TropicalCover};
use crate::error::{Error, Result};
use crate::graph::{isomorphic, stabilize, total_genus};
use crate::numeric::{solve_linear, LinForm, Param, ParamKind, Rational, Solution};
use crate::par::{try_map, ExecMode};

pub const LEAVES: usize = 8;
pub const MARKED: usize = 4;

/// A trivalent tree on labeled leaves `0..leaves`. Leaves below `marked`
/// carry marks `1..=marked`; the rest are branch leaves. Internal vertices
/// are numbered from `leaves` on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeTopology {
    pub leaves: usize,
    pub marked: usize,
    pub edges: Vec<(usize, usize)>,
}

impl TreeTopology {
    pub fn num_nodes(&self) -> usize {
        2 * self.leaves - 2
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        v < self.leaves
    }

    pub fn is_branch_leaf(&self, v: usize) -> bool {
        self.marked <= v && v < self.leaves
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.num_nodes()];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    /// Rooted encoding from leaf 0 with branch leaves unlabeled. Two trees
    /// share it exactly when they differ by a relabeling of branch leaves.
    pub fn canonical_form(&self) -> String {
        fn enc(t: &TreeTopology, adj: &[Vec<usize>], v: usize, parent: usize) -> String {
            if t.is_branch_leaf(v) {
                return "b".into();
            }
            if t.is_leaf(v) && parent != usize::MAX {
                return format!("m{}", v + 1);
            }
            let mut kids: Vec<String> = adj[v].iter().filter(|&&w| w != parent).map(|&w| enc(t, adj, w, v)).collect();
            kids.sort();
            format!("({})", kids.join(","))
        }
        let adj = self.adjacency();
        format!("m1{}", enc(self, &adj, 0, usize::MAX))
    }

    /// Whether the edge `(u, v)` has an even number of branch leaves on the
    /// `v` side.
    pub fn splits(&self, u: usize, v: usize) -> bool {
        let adj = self.adjacency();
        let mut stack = vec![(v, u)];
        let mut count = 0;
        while let Some((x, from)) = stack.pop() {
            if self.is_branch_leaf(x) {
                count += 1;
            }
            for &y in &adj[x] {
                if y != from {
                    stack.push((y, x));
                }
            }
        }
        count % 2 == 0
    }
}

/// All `(2n - 5)!!` trivalent trees on `n ≥ 3` labeled leaves, by inserting
/// leaf `k` into every edge of each tree on the first `k` leaves.
pub fn enumerate_labeled_trees(leaves: usize, marked: usize) -> Vec<TreeTopology> {
    assert!(leaves >= 3, "need at least three leaves");
    let first = TreeTopology { leaves, marked, edges: vec![(leaves, 0), (leaves, 1), (leaves, 2)] };
    let mut level = vec![first];
    for k in 3..leaves {
        let w = leaves + k - 2;
        let mut next = Vec::with_capacity(level.len() * (2 * k - 3));
        for t in &level {
            for e in 0..t.edges.len() {
                let (u, v) = t.edges[e];
                let mut edges = t.edges.clone();
                edges[e] = (u, w);
                edges.push((w, v));
                edges.push((w, k));
                next.push(TreeTopology { leaves, marked, edges });
            }
        }
        level = next;
    }
    level
}

/// Trivalent trees on four marked and four branch leaves, one per class
/// under relabeling the branch leaves, with the labeled count.
pub fn enumerate_tree_topologies() -> (usize, Vec<TreeTopology>) {
    let all = enumerate_labeled_trees(LEAVES, MARKED);
    let labeled = all.len();
    let mut seen = BTreeMap::new();
    for t in all {
        seen.entry(t.canonical_form()).or_insert(t);
    }
    (labeled, seen.into_values().collect())
}

/// The planar target of `t` rooted at the internal vertex next to leaf 0,
/// with every branch leaf carrying `(0 1)` and mark `m` lifted to sheet
/// `sheets[m - 1]`.
fn monodromy(t: &TreeTopology, sheets: &[usize]) -> MonodromyTree {
    let adj = t.adjacency();
    let root = adj[0][0];
    let mut tree = MonodromyTree::new(2);
    let mut stack = vec![(root, usize::MAX, 0)];
    while let Some((v, parent, at)) = stack.pop() {
        for &w in &adj[v] {
            if w == parent {
                continue;
            }
            if t.is_branch_leaf(w) {
                tree.branch_leg(at, 0, 1);
            } else if t.is_leaf(w) {
                tree.marked_leg(at, w + 1, sheets[w]);
            } else {
                let child = tree.add_child(at);
                stack.push((w, v, child));
            }
        }
    }
    tree
}

/// The connected double cover of `t` branched over its branch leaves, every
/// mark lifted to the given sheet.
pub fn double_cover_with_lifts(t: &TreeTopology, sheets: &[usize]) -> Result<TropicalCover> {
    let c = monodromy(t, sheets).build()?;
    if !c.source.is_connected() {
        return Err(Error::DisconnectedCover);
    }
    c.validate_harmonic()?;
    c.validate_local_rh()?;
    let g = total_genus(&c.source)?;
    if g != (t.leaves - t.marked) / 2 - 1 {
        return Err(Error::RHViolation(g));
    }
    Ok(c)
}

pub fn double_cover(t: &TreeTopology) -> Result<TropicalCover> {
    double_cover_with_lifts(t, &vec![0; t.marked])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LiftOutcome {
    /// Stabilizations do not have the shapes of `(Γ̄, T̄)`.
    WrongTopology,
    Inconsistent,
    Underdetermined,
    NonPositive,
    Positive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TopologyOutcome {
    NoCover,
    Infeasible,
    Solutions,
}

#[derive(Debug, Clone, Serialize)]
pub struct TopologyReport {
    pub canonical: String,
    pub outcome: TopologyOutcome,
    pub lifts: Vec<LiftOutcome>,
    pub solutions: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub base: String,
    pub labeled_trees: usize,
    pub topologies: usize,
    pub lift_assignments: usize,
    pub totals: BTreeMap<String, usize>,
    pub positive_covers: usize,
    pub distinct_covers: usize,
    pub matches_construction: Option<bool>,
    pub per_topology: Vec<TopologyReport>,
}

#[derive(Debug, Clone)]
pub struct OracleRun {
    pub report: OracleReport,
    pub covers: Vec<TropicalCover>,
}

/// Solves the lengths of one lifted cover at the instantiated point.
fn solve_lift(c: &TropicalCover, p: &ReferencePoint, base: &BigInt) -> Result<(LiftOutcome, Option<TropicalCover>)> {
    let keep = p.keep();
    let (Ok(ss), Ok(st)) = (stabilize(&c.source, &keep), stabilize(&c.target, &keep)) else {
        return Ok((LiftOutcome::WrongTopology, None));
    };
    let (Some(iso_s), Some(iso_t)) = (isomorphic(&ss.graph, &p.gamma_bar, false)?, isomorphic(&st.graph, &p.t_bar, false)?)
    else {
        return Ok((LiftOutcome::WrongTopology, None));
    };
    let unknowns = c.target.edges.len();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let pairs = ss.graph.edges.iter().zip(&iso_s.edges).map(|(e, &k)| (&e.length, &p.gamma_bar.edges[k].length));
    let pairs = pairs.chain(st.graph.edges.iter().zip(&iso_t.edges).map(|(e, &k)| (&e.length, &p.t_bar.edges[k].length)));
    for (lhs, target) in pairs {
        rows.push((1..=unknowns).map(|k| lhs.coeff(Param::y(k))).collect::<Vec<Rational>>());
        rhs.push(LinForm::constant(p.instantiate(target, base)));
    }
    let values: Vec<Rational> = match solve_linear(&rows, &rhs)? {
        Solution::Unique(v) => v.into_iter().map(|f| f.constant_term().clone()).collect(),
        Solution::Inconsistent => return Ok((LiftOutcome::Inconsistent, None)),
        Solution::Underdetermined => return Ok((LiftOutcome::Underdetermined, None)),
    };
    if values.iter().any(|v| !v.is_positive()) {
        return Ok((LiftOutcome::NonPositive, None));
    }
    let metric = c.substitute(|q| match q.kind {
        ParamKind::Y => LinForm::constant(values[q.index - 1].clone()),
        _ => LinForm::param(q),
    });
    Ok((LiftOutcome::Positive, Some(metric)))
}

/// Every lift of every topology, with mark 1 pinned to sheet 0 to quotient
/// the deck involution.
fn lift_assignments() -> Vec<Vec<usize>> {
    (0..1usize << (MARKED - 1))
        .map(|bits| {
            let mut s = vec![0];
            s.extend((0..MARKED - 1).map(|k| bits >> k & 1));
            s
        })
        .collect()
}

fn dedup(covers: Vec<TropicalCover>) -> Result<Vec<TropicalCover>> {
    let mut distinct: Vec<TropicalCover> = Vec::new();
    for c in covers {
        let mut new = true;
        for d in &distinct {
            if cover_isomorphic(&c, d, true)? {
                new = false;
                break;
            }
        }
        if new {
            distinct.push(c);
        }
    }
    Ok(distinct)
}

/// Runs the full search at base `B`.
pub fn run_oracle(base: &BigInt, mode: ExecMode) -> Result<OracleRun> {
    let p = reference_point(1);
    let (labeled, topologies) = enumerate_tree_topologies();
    let lifts = lift_assignments();
    let per = try_map(mode, &topologies, |t| {
        let mut outcomes = Vec::with_capacity(lifts.len());
        let mut found = Vec::new();
        for sheets in &lifts {
            let c = double_cover_with_lifts(t, sheets)?;
            let (o, metric) = solve_lift(&c, &p, base)?;
            outcomes.push(o);
            found.extend(metric);
        }
        Ok((t.canonical_form(), outcomes, found))
    })?;

    let mut totals: BTreeMap<String, usize> = BTreeMap::new();
    let mut per_topology = Vec::with_capacity(per.len());
    let mut positive = Vec::new();
    for (canonical, lifts, found) in per {
        for o in &lifts {
            let key = serde_json::to_value(o).expect("plain enum").as_str().unwrap_or_default().to_string();
            *totals.entry(key).or_default() += 1;
        }
        let outcome = if !found.is_empty() {
            TopologyOutcome::Solutions
        } else if lifts.iter().any(|&o| o != LiftOutcome::WrongTopology) {
            TopologyOutcome::Infeasible
        } else {
            TopologyOutcome::NoCover
        };
        per_topology.push(TopologyReport { canonical, outcome, lifts, solutions: found.len() });
        positive.extend(found);
    }
    let positive_covers = positive.len();
    let covers = dedup(positive)?;
    let report = OracleReport {
        base: base.to_string(),
        labeled_trees: labeled,
        topologies: topologies.len(),
        lift_assignments: lifts.len(),
        totals,
        positive_covers,
        distinct_covers: covers.len(),
        matches_construction: None,
        per_topology,
    };
    Ok(OracleRun { report, covers })
}

/// The distinct covers over the genus-1 reference point found by the search,
/// at the default base.
pub fn find_all_preimages_g1(p: &ReferencePoint) -> Result<Vec<TropicalCover>> {
    if p.genus != 1 {
        return Err(Error::Invalid(format!("the oracle runs in genus 1, not {}", p.genus)));
    }
    Ok(run_oracle(&p.default_base(), ExecMode::default())?.covers)
}

/// Whether the oracle covers and the constructed covers, instantiated at
/// `base`, match one to one up to isomorphism.
pub fn matches_construction(covers: &[TropicalCover], base: &BigInt) -> Result<bool> {
    let p = reference_point(1);
    let built = enumerate_solutions(1)?;
    if built.len() != covers.len() {
        return Ok(false);
    }
    let mut used = vec![false; covers.len()];
    for (_, c) in &built {
        let inst = c.substitute(|q| LinForm::constant(p.instantiate(&LinForm::param(q), base)));
        let mut hit = None;
        for (k, o) in covers.iter().enumerate() {
            if !used[k] && cover_isomorphic(&inst, o, true)? {
                hit = Some(k);
                break;
            }
        }
        match hit {
            Some(k) => used[k] = true,
            None => return Ok(false),
        }
    }
    Ok(true)
}

/// The search plus the comparison against the construction.
pub fn run_and_compare(base: &BigInt, mode: ExecMode) -> Result<OracleRun> {
    let mut run = run_oracle(base, mode)?;
    run.report.matches_construction = Some(matches_construction(&run.covers, base)?);
    Ok(run)
}

/// Frequency of each canonical form in the labeled enumeration.
pub fn class_sizes() -> HashMap<String, usize> {
    let mut m = HashMap::new();
    for t in enumerate_labeled_trees(LEAVES, MARKED) {
        *m.entry(t.canonical_form()).or_default() += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labeled_tree_counts() {
        assert_eq!(enumerate_labeled_trees(4, 4).len(), 3);
        assert_eq!(enumerate_labeled_trees(5, 5).len(), 15);
        assert_eq!(enumerate_labeled_trees(8, 4).len(), 10395);
    }

    #[test]
    fn relabeling_branch_leaves_keeps_canonical_form() {
        let t = &enumerate_labeled_trees(8, 4)[1234];
        let swap = |v: usize| match v {
            4 => 7,
            7 => 4,
            5 => 6,
            6 => 5,
            x => x,
        };
        let u = TreeTopology { edges: t.edges.iter().map(|&(a, b)| (swap(a), swap(b))).collect(), ..t.clone() };
        assert_eq!(t.canonical_form(), u.canonical_form());
    }

    #[test]
    fn double_covers_have_genus_one() {
        let (_, tops) = enumerate_tree_topologies();
        for t in tops.iter().step_by(37) {
            let c = double_cover(t).unwrap();
            assert_eq!(total_genus(&c.source).unwrap(), 1);
        }
    }
}
