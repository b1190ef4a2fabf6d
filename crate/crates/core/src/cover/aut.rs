//! Automorphisms and isomorphisms of covers, searched jointly over the
//! target tree and the source fibres.
//!
//! Unmarked source branches that are interchangeable over the same target
//! direction are not permuted: unmarked legs at one vertex over one target leg
//! form a bundle, and so do hanging unmarked degree-1 copies of a target
//! subtree attached at one vertex through the same target edge. Their
//! permutations are accounted for in the local Hurwitz numbers instead.

use std::collections::{BTreeMap, HashMap, VecDeque};

use super::TropicalCover;
use crate::error::{Error, Result};

const MAX_SOURCE_VERTICES: usize = 20_000;

/// Maximal hanging unmarked degree-1 pieces of the source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HangingCopies {
    pub removed: Vec<bool>,
    /// Per source vertex: target edge → number of copies attached through it.
    pub bundles: Vec<BTreeMap<usize, usize>>,
}

fn target_sides(c: &TropicalCover) -> Vec<Vec<bool>> {
    // side[t][w]: whether w lies on the side of target edge t containing ends.1
    let n = c.target.num_vertices();
    let adj = c.target.adjacency();
    c.target
        .edges
        .iter()
        .map(|e| {
            let mut side = vec![false; n];
            side[e.ends.1] = true;
            let mut stack = vec![e.ends.1];
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if !side[y] && !(x == e.ends.1 && y == e.ends.0) {
                        side[y] = true;
                        stack.push(y);
                    }
                }
            }
            side
        })
        .collect()
}

pub fn hanging_copies(c: &TropicalCover) -> Result<HangingCopies> {
    let n = c.source.num_vertices();
    let degrees = c.validate_harmonic()?;
    let sides = target_sides(c);
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (i, e) in c.source.edges.iter().enumerate() {
        adj[e.ends.0].push((i, e.ends.1));
        if e.ends.0 != e.ends.1 {
            adj[e.ends.1].push((i, e.ends.0));
        }
    }
    let marked: Vec<bool> = (0..n)
        .map(|v| c.source.legs.iter().any(|l| l.vertex == v && l.mark.is_some()))
        .collect();

    let mut candidates: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    for (f, e) in c.source.edges.iter().enumerate() {
        if c.edge_map[f].expansion != 1 || e.is_loop() {
            continue;
        }
        let t = c.edge_map[f].target;
        for (u, v) in [(e.ends.0, e.ends.1), (e.ends.1, e.ends.0)] {
            let far_side = c.vertex_map[v] == c.target.edges[t].ends.1;
            let mut seen = vec![false; n];
            seen[v] = true;
            let mut comp = vec![v];
            let mut stack = vec![v];
            let mut ok = true;
            while let Some(x) = stack.pop() {
                if degrees[x] != 1 || marked[x] || sides[t][c.vertex_map[x]] != far_side {
                    ok = false;
                    break;
                }
                for &(g, y) in &adj[x] {
                    if g == f || seen[y] {
                        continue;
                    }
                    if y == u {
                        ok = false;
                        break;
                    }
                    seen[y] = true;
                    comp.push(y);
                    stack.push(y);
                }
                if !ok {
                    break;
                }
            }
            if ok {
                candidates.push((u, t, comp));
            }
        }
    }
    let mut inside = vec![0usize; n];
    for (_, _, comp) in &candidates {
        for &x in comp {
            inside[x] += 1;
        }
    }
    let mut removed = vec![false; n];
    let mut bundles = vec![BTreeMap::new(); n];
    for (u, t, comp) in &candidates {
        if inside[*u] == 0 {
            for &x in comp {
                removed[x] = true;
            }
            *bundles[*u].entry(*t).or_insert(0) += 1;
        }
    }
    Ok(HangingCopies { removed, bundles })
}

type EdgeKey = (usize, String);
type LegKey = (usize, Option<usize>);

struct Side<'a> {
    c: &'a TropicalCover,
    respect: bool,
    t_adj: Vec<Vec<(usize, usize)>>,
    t_inv: Vec<(usize, Vec<usize>, usize)>,
    fibres: Vec<Vec<usize>>,
    s_inv: Vec<(usize, usize, usize)>,
    legs: Vec<BTreeMap<usize, Vec<LegKey>>>,
    bundles: Vec<BTreeMap<usize, usize>>,
    pairs: HashMap<(usize, usize), Vec<EdgeKey>>,
}

impl<'a> Side<'a> {
    fn new(c: &'a TropicalCover, respect: bool) -> Result<Self> {
        if c.source.num_vertices() > MAX_SOURCE_VERTICES {
            return Err(Error::TooLarge(c.source.num_vertices()));
        }
        c.validate_incidence()?;
        let degrees = c.validate_harmonic()?;
        let hc = hanging_copies(c)?;
        let nt = c.target.num_vertices();
        let mut t_adj = vec![Vec::new(); nt];
        for (i, e) in c.target.edges.iter().enumerate() {
            t_adj[e.ends.0].push((i, e.ends.1));
            t_adj[e.ends.1].push((i, e.ends.0));
        }
        let t_inv = (0..nt)
            .map(|w| {
                let mut marks = Vec::new();
                let mut free = 0;
                for l in c.target.legs_at(w) {
                    match c.target.legs[l].mark {
                        Some(m) => marks.push(m),
                        None => free += 1,
                    }
                }
                marks.sort_unstable();
                (c.target.valence(w), marks, free)
            })
            .collect();
        let ns = c.source.num_vertices();
        let mut fibres = vec![Vec::new(); nt];
        for v in 0..ns {
            if !hc.removed[v] {
                fibres[c.vertex_map[v]].push(v);
            }
        }
        let s_inv = (0..ns).map(|v| (c.source.genus[v], degrees[v], c.source.valence(v))).collect();
        let mut legs: Vec<BTreeMap<usize, Vec<LegKey>>> = vec![BTreeMap::new(); ns];
        for (i, l) in c.source.legs.iter().enumerate() {
            let m = c.leg_map[i];
            legs[l.vertex].entry(m.target).or_default().push((m.expansion, l.mark));
        }
        for m in &mut legs {
            for v in m.values_mut() {
                v.sort();
            }
        }
        let mut pairs: HashMap<(usize, usize), Vec<EdgeKey>> = HashMap::new();
        for (i, e) in c.source.edges.iter().enumerate() {
            let (a, b) = e.ends;
            if hc.removed[a] || hc.removed[b] {
                continue;
            }
            let key = (c.edge_map[i].expansion, if respect { e.length.to_string() } else { String::new() });
            pairs.entry((a.min(b), a.max(b))).or_default().push(key);
        }
        for v in pairs.values_mut() {
            v.sort();
        }
        Ok(Side { c, respect, t_adj, t_inv, fibres, s_inv, legs, bundles: hc.bundles, pairs })
    }

    fn edge_len(&self, t: usize) -> String {
        if self.respect {
            self.c.target.edges[t].length.to_string()
        } else {
            String::new()
        }
    }

    fn pair(&self, u: usize, v: usize) -> Option<&Vec<EdgeKey>> {
        self.pairs.get(&(u.min(v), u.max(v)))
    }

    fn bundle(&self, v: usize, t: usize) -> usize {
        self.bundles[v].get(&t).copied().unwrap_or(0)
    }

    /// Root, BFS order, parent vertex and parent edge of the target.
    fn order(&self, root: usize) -> (Vec<usize>, Vec<(usize, usize)>) {
        let n = self.t_adj.len();
        let mut parent = vec![(usize::MAX, usize::MAX); n];
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut q = VecDeque::from([root]);
        seen[root] = true;
        while let Some(w) = q.pop_front() {
            order.push(w);
            for &(e, x) in &self.t_adj[w] {
                if !seen[x] {
                    seen[x] = true;
                    parent[x] = (w, e);
                    q.push_back(x);
                }
            }
        }
        (order, parent)
    }

    fn root(&self) -> usize {
        let t = &self.c.target;
        t.marks()
            .first()
            .and_then(|&m| t.leg_with_mark(m))
            .map(|l| t.legs[l].vertex)
            .unwrap_or(0)
    }
}

struct Search<'s, 'a> {
    a: &'s Side<'a>,
    b: &'s Side<'a>,
    order: Vec<usize>,
    parent: Vec<(usize, usize)>,
    tv: Vec<usize>,
    te: Vec<usize>,
    tl: Vec<usize>,
    sv: Vec<usize>,
    used_t: Vec<bool>,
    used_s: Vec<bool>,
    roots: Vec<usize>,
    count: u128,
    stop_at_first: bool,
}

impl Search<'_, '_> {
    fn done(&self) -> bool {
        self.stop_at_first && self.count > 0
    }

    fn step(&mut self, idx: usize) {
        if idx == self.order.len() {
            self.count += 1;
            return;
        }
        let w = self.order[idx];
        let cands: Vec<(usize, usize)> = if idx == 0 {
            self.roots.iter().map(|&r| (r, usize::MAX)).collect()
        } else {
            let (p, pe) = self.parent[w];
            let key = self.a.edge_len(pe);
            self.b.t_adj[self.tv[p]]
                .iter()
                .filter(|&&(f, x)| !self.used_t[x] && self.b.edge_len(f) == key)
                .map(|&(f, x)| (x, f))
                .collect()
        };
        for (x, f) in cands {
            if self.a.t_inv[w] != self.b.t_inv[x] || self.a.fibres[w].len() != self.b.fibres[x].len() {
                continue;
            }
            self.tv[w] = x;
            self.used_t[x] = true;
            if idx > 0 {
                self.te[self.parent[w].1] = f;
            }
            self.legs_then_fibre(idx, w, x);
            self.used_t[x] = false;
            self.tv[w] = usize::MAX;
            if self.done() {
                return;
            }
        }
    }

    fn legs_then_fibre(&mut self, idx: usize, w: usize, x: usize) {
        let (sa, sb) = (self.a, self.b);
        let ta = &sa.c.target;
        let tb = &sb.c.target;
        let la = ta.legs_at(w);
        let lb = tb.legs_at(x);
        for &l in &la {
            if let Some(m) = ta.legs[l].mark {
                self.tl[l] = tb.leg_with_mark(m).expect("invariants agree on marks");
            }
        }
        let free_a: Vec<usize> = la.iter().copied().filter(|&l| ta.legs[l].mark.is_none()).collect();
        let free_b: Vec<usize> = lb.iter().copied().filter(|&l| tb.legs[l].mark.is_none()).collect();
        let mut perm: Vec<usize> = (0..free_b.len()).collect();
        loop {
            for (i, &l) in free_a.iter().enumerate() {
                self.tl[l] = free_b[perm[i]];
            }
            if self.parent_bundles_agree(idx, w) {
                self.fibre(idx, w, x, &sa.fibres[w], 0);
            }
            if self.done() || !next_permutation(&mut perm) {
                break;
            }
        }
    }

    fn parent_bundles_agree(&self, idx: usize, w: usize) -> bool {
        if idx == 0 {
            return true;
        }
        let (p, pe) = self.parent[w];
        let f = self.te[pe];
        self.a.fibres[p].iter().all(|&u| self.a.bundle(u, pe) == self.b.bundle(self.sv[u], f))
    }

    fn fibre(&mut self, idx: usize, w: usize, x: usize, fa: &[usize], i: usize) {
        if i == fa.len() {
            self.step(idx + 1);
            return;
        }
        let v = fa[i];
        let sb = self.b;
        for &g in &sb.fibres[x] {
            if self.used_s[g] || !self.vertex_ok(idx, w, v, g) {
                continue;
            }
            self.sv[v] = g;
            self.used_s[g] = true;
            self.fibre(idx, w, x, fa, i + 1);
            self.used_s[g] = false;
            self.sv[v] = usize::MAX;
            if self.done() {
                return;
            }
        }
    }

    fn vertex_ok(&self, idx: usize, w: usize, v: usize, g: usize) -> bool {
        let (a, b) = (self.a, self.b);
        if a.s_inv[v] != b.s_inv[g] {
            return false;
        }
        let empty = Vec::new();
        for l in a.c.target.legs_at(w) {
            let ka = a.legs[v].get(&l).unwrap_or(&empty);
            let kb = b.legs[g].get(&self.tl[l]).unwrap_or(&empty);
            if ka != kb {
                return false;
            }
        }
        if idx == 0 {
            return true;
        }
        let (p, pe) = self.parent[w];
        if a.bundle(v, pe) != b.bundle(g, self.te[pe]) {
            return false;
        }
        a.fibres[p].iter().all(|&u| a.pair(v, u) == b.pair(g, self.sv[u]))
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn run(a: &Side, b: &Side, stop_at_first: bool) -> u128 {
    let ca = a.c;
    let cb = b.c;
    if ca.target.num_vertices() != cb.target.num_vertices()
        || ca.target.legs.len() != cb.target.legs.len()
        || ca.target.marks() != cb.target.marks()
        || ca.source.num_vertices() != cb.source.num_vertices()
    {
        return 0;
    }
    let root = a.root();
    let roots: Vec<usize> = match ca.target.marks().first() {
        Some(&m) => vec![cb.target.legs[cb.target.leg_with_mark(m).unwrap()].vertex],
        None => (0..cb.target.num_vertices()).collect(),
    };
    let (order, parent) = a.order(root);
    let mut s = Search {
        a,
        b,
        order,
        parent,
        tv: vec![usize::MAX; ca.target.num_vertices()],
        te: vec![usize::MAX; ca.target.edges.len()],
        tl: vec![usize::MAX; ca.target.legs.len()],
        sv: vec![usize::MAX; ca.source.num_vertices()],
        used_t: vec![false; cb.target.num_vertices()],
        used_s: vec![false; cb.source.num_vertices()],
        roots,
        count: 0,
        stop_at_first,
    };
    s.step(0);
    s.count
}

fn factorial(k: usize) -> u128 {
    (1..=k as u128).product()
}

/// Pairs of target and source automorphisms commuting with the cover map,
/// preserving marks, genera, lengths and expansion factors, with bundled
/// branches left unpermuted.
pub fn cover_automorphism_count(c: &TropicalCover) -> Result<u128> {
    let side = Side::new(c, true)?;
    let lifts = run(&side, &side, false);
    let mut parallel: u128 = 1;
    for keys in side.pairs.values() {
        let mut run_len = 1;
        for k in 1..=keys.len() {
            if k < keys.len() && keys[k] == keys[k - 1] {
                run_len += 1;
            } else {
                parallel *= factorial(run_len);
                run_len = 1;
            }
        }
    }
    Ok(lifts * parallel)
}

/// Whether two covers are isomorphic as maps, optionally respecting lengths.
pub fn cover_isomorphic(a: &TropicalCover, b: &TropicalCover, respect_lengths: bool) -> Result<bool> {
    let sa = Side::new(a, respect_lengths)?;
    let sb = Side::new(b, respect_lengths)?;
    Ok(run(&sa, &sb, true) > 0)
}
