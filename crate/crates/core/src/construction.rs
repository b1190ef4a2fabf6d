//! The reference point `(Γ̄, T̄)` and the covers lying over it.
//!
//! A solution is indexed by a genus word over `{U, D}` and a fragment index
//! `j`. Its target is a planar tree whose spine runs through the genus
//! fragments, then `k` cuts, the marked fragment `F⁺`, `i` joins, the leg
//! with mark `j + 1`, `j - 2` further cuts and the marked fragment `F⁻`.
//! The cover is read off from the monodromy of the leg permutations; its
//! lengths are solved exactly from the stabilization constraints.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::cover::{MonodromyTree, TropicalCover};
use crate::error::{Error, Result};
use crate::graph::{isomorphic, stabilize, total_genus, MetricGraph};
use crate::numeric::{solve_linear, LinForm, Param, ParamKind, Rational, Solution as LinearSolution};
use crate::perm::Perm;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferencePoint {
    pub genus: usize,
    pub gamma_bar: MetricGraph,
    pub t_bar: MetricGraph,
}

impl ReferencePoint {
    pub fn marks(&self) -> usize {
        self.genus + 3
    }

    pub fn keep(&self) -> BTreeSet<usize> {
        (1..=self.marks()).collect()
    }

    /// Default instantiation base `1000 (g + 2)`.
    pub fn default_base(&self) -> BigInt {
        BigInt::from(1000 * (self.genus + 2))
    }

    /// `x_i = B^i`, `L_j = B^{4g + j}`.
    pub fn instantiate(&self, f: &LinForm, base: &BigInt) -> Rational {
        let g = self.genus;
        f.eval(|p| {
            let e = match p.kind {
                ParamKind::X => p.index,
                ParamKind::L => 4 * g + p.index,
                ParamKind::Y => panic!("coordinate {p} has no instantiation"),
            };
            Rational::from_integer(base.pow(e as u32))
        })
    }

    /// The ordering contract, for display.
    pub fn ordering(&self) -> String {
        format!("x_1 << ... << x_{} << L_1 << ... << L_{}", 4 * self.genus, self.genus)
    }
}

fn x(i: usize) -> LinForm {
    LinForm::param(Param::x(i))
}

/// A chain of `g` loops followed by a caterpillar, over a caterpillar tree.
pub fn reference_point(g: usize) -> ReferencePoint {
    assert!(g >= 1, "genus must be positive");
    let n = g + 3;
    let mut gb = MetricGraph::new();
    let circ = gb.add_vertex(0);
    gb.add_edge(circ, circ, x(1));
    let loops: Vec<(usize, usize)> = (1..g).map(|_| (gb.add_vertex(0), gb.add_vertex(0))).collect();
    let cat: Vec<usize> = (0..g + 2).map(|_| gb.add_vertex(0)).collect();
    gb.add_edge(circ, loops.first().map_or(cat[0], |l| l.0), x(2));
    for (m, &(a, b)) in loops.iter().enumerate() {
        let m = m + 1;
        gb.add_edge(a, b, x(3 * m));
        gb.add_edge(a, b, x(3 * m + 1));
        let next = loops.get(m).map_or(cat[0], |l| l.0);
        gb.add_edge(b, next, x(3 * m + 2));
    }
    for k in 1..=g + 1 {
        gb.add_edge(cat[k - 1], cat[k], x(3 * g - 1 + k));
        gb.add_leg(cat[k - 1], Some(n + 1 - k));
    }
    gb.add_leg(cat[g + 1], Some(1));
    gb.add_leg(cat[g + 1], Some(2));

    let mut tb = MetricGraph::new();
    let t: Vec<usize> = (0..=g).map(|_| tb.add_vertex(0)).collect();
    tb.add_leg(t[0], Some(n));
    tb.add_leg(t[0], Some(n - 1));
    for m in 2..=g {
        tb.add_leg(t[m - 1], Some(n - m));
    }
    tb.add_leg(t[g], Some(1));
    tb.add_leg(t[g], Some(2));
    for m in 1..=g {
        tb.add_edge(t[m - 1], t[m], LinForm::param(Param::l(m)));
    }
    ReferencePoint { genus: g, gamma_bar: gb, t_bar: tb }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    U,
    D,
}

/// A lattice path from height 2 with steps `U = +1`, `D = -1`, staying at
/// height at least 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GenusWord(Vec<Letter>);

impl GenusWord {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        let w = GenusWord(letters);
        let mut h: i64 = 2;
        for (pos, l) in w.0.iter().enumerate() {
            h += if *l == Letter::U { 1 } else { -1 };
            if h < 1 {
                return Err(Error::InvalidWord(format!("{w} drops below height 1 at position {}", pos + 1)));
            }
        }
        Ok(w)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn genus(&self) -> usize {
        self.0.len() + 1
    }

    pub fn downs(&self) -> usize {
        self.0.iter().filter(|&&l| l == Letter::D).count()
    }

    /// Height after all letters: `g + 1 - 2i`.
    pub fn final_degree(&self) -> usize {
        self.genus() + 1 - 2 * self.downs()
    }
}

impl fmt::Display for GenusWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", if *l == Letter::U { 'U' } else { 'D' })?;
        }
        Ok(())
    }
}

impl FromStr for GenusWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .trim()
            .chars()
            .map(|c| match c {
                'U' | 'u' => Ok(Letter::U),
                'D' | 'd' => Ok(Letter::D),
                _ => Err(Error::InvalidWord(format!("letter {c:?} in {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        GenusWord::new(letters)
    }
}

/// All valid words of length `g - 1` in lexicographic order with `U < D`.
pub fn enumerate_genus_words(g: usize) -> Vec<GenusWord> {
    fn rec(len: usize, h: usize, cur: &mut Vec<Letter>, out: &mut Vec<GenusWord>) {
        if cur.len() == len {
            out.push(GenusWord(cur.clone()));
            return;
        }
        cur.push(Letter::U);
        rec(len, h + 1, cur, out);
        cur.pop();
        if h >= 2 {
            cur.push(Letter::D);
            rec(len, h - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(g.saturating_sub(1), 2, &mut Vec::new(), &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SolutionIndex {
    pub word: GenusWord,
    pub j: usize,
}

impl SolutionIndex {
    pub fn new(g: usize, word: GenusWord, j: usize) -> Result<Self> {
        if g == 0 || word.len() + 1 != g {
            return Err(Error::IndexOutOfRange(format!("word {word:?} has length {}, expected {}", word.len(), g.saturating_sub(1))));
        }
        let s = SolutionIndex { word, j };
        if j < s.i() + 1 || j > s.degree() - s.i() {
            return Err(Error::IndexOutOfRange(format!(
                "j = {j} outside [{}, {}] for word {}",
                s.i() + 1,
                s.degree() - s.i(),
                s.word
            )));
        }
        Ok(s)
    }

    pub fn genus(&self) -> usize {
        self.word.genus()
    }
    pub fn degree(&self) -> usize {
        self.genus() + 1
    }
    pub fn i(&self) -> usize {
        self.word.downs()
    }
    pub fn k(&self) -> usize {
        self.degree() - self.i() - self.j
    }

    /// File-name friendly tag.
    pub fn tag(&self) -> String {
        format!("tev_g{}_w{}_j{}", self.genus(), self.word, self.j)
    }
}

impl fmt::Display for SolutionIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = if self.word.is_empty() { "ε".to_string() } else { self.word.to_string() };
        write!(f, "({w}, j={})", self.j)
    }
}

/// The spine under construction: the planar target, the running product of
/// hanging permutations, and sheet bookkeeping.
#[derive(Debug, Clone)]
pub struct GenusPart {
    pub tree: MonodromyTree,
    pub end: usize,
    pub prefix: Perm,
    fresh: VecDeque<usize>,
    pub dead: Vec<usize>,
    current: Vec<usize>,
}

impl GenusPart {
    fn d(&self) -> usize {
        self.tree.degree()
    }

    /// The sheets of the active path, sorted. When it has at least two
    /// sheets this is the unique nontrivial cycle of the running product.
    pub fn active(&self) -> Vec<usize> {
        debug_assert!(self.current.len() < 2 || {
            let nontrivial: Vec<Vec<usize>> = self.prefix.cycles().into_iter().filter(|c| c.len() > 1).collect();
            nontrivial.len() == 1 && {
                let mut c = nontrivial[0].clone();
                c.sort_unstable();
                c == self.current
            }
        });
        self.current.clone()
    }

    fn set_active(&mut self, mut c: Vec<usize>) {
        c.sort_unstable();
        self.current = c;
    }

    fn spine_vertex(&mut self) -> usize {
        let v = self.tree.add_child(self.end);
        self.end = v;
        v
    }

    fn apply(&mut self, t: &Perm) {
        self.prefix = self.prefix.then(t);
    }

    fn simple_leg(&mut self, v: usize, a: usize, b: usize) {
        self.tree.branch_leg(v, a, b);
        let t = Perm::transposition(self.d(), a, b);
        self.apply(&t);
    }

    fn tripod(&mut self, at: usize, a: usize, b: usize) {
        let t = self.tree.add_child(at);
        self.tree.branch_leg(t, a, b);
        self.tree.branch_leg(t, a, b);
    }

    fn start(d: usize) -> Self {
        let mut tree = MonodromyTree::new(d);
        tree.branch_leg(0, 0, 1);
        tree.branch_leg(0, 0, 1);
        let mut gp = GenusPart { tree, end: 0, prefix: Perm::identity(d), fresh: (2..d).collect(), dead: Vec::new(), current: vec![0, 1] };
        let s2 = gp.spine_vertex();
        gp.simple_leg(s2, 0, 1);
        gp
    }

    /// Raises the active degree by one: a tripod swapping an active sheet with
    /// a fresh one, then a simple leg merging the fresh sheet in.
    fn up(&mut self) {
        let c = self.active();
        let q = self.fresh.pop_front().expect("a fresh sheet for U");
        let p = c[0];
        let f1 = self.spine_vertex();
        let _f2 = self.spine_vertex();
        self.tripod(f1, p, q);
        let f2 = self.end;
        self.simple_leg(f2, p, q);
        let mut c = c;
        c.push(q);
        self.set_active(c);
    }

    /// Lowers the active degree by one: a simple leg splitting a sheet off,
    /// then a tripod swapping it with an active sheet.
    fn down(&mut self) {
        let c = self.active();
        assert!(c.len() >= 2, "D needs active degree at least 2");
        let s = *c.last().unwrap();
        let f1 = self.spine_vertex();
        let next = self.prefix.apply(s);
        self.simple_leg(f1, s, next);
        self.set_active(c[..c.len() - 1].to_vec());
        let f2 = self.spine_vertex();
        let u = self.active()[0];
        self.tripod(f2, u, s);
        self.dead.push(s);
    }

    /// Splits the largest active sheet off the active cycle.
    fn cut(&mut self) -> usize {
        let c = self.active();
        let s = *c.last().unwrap();
        let v = self.spine_vertex();
        let next = self.prefix.apply(s);
        self.simple_leg(v, s, next);
        self.set_active(c[..c.len() - 1].to_vec());
        s
    }

    fn join(&mut self) -> usize {
        let y = self.fresh.pop_front().expect("a fresh sheet for a join");
        let mut c = self.active();
        let v = self.spine_vertex();
        self.simple_leg(v, c[0], y);
        c.push(y);
        self.set_active(c);
        y
    }

    /// Closes the spine with a leg carrying the inverse running product.
    fn close(&mut self, at: usize) -> Result<()> {
        let inv = self.prefix.inverse();
        if inv.cycle_type().first() != Some(&2) || inv.cycle_type().iter().skip(1).any(|&c| c != 1) {
            return Err(Error::Invalid(format!("closing permutation {inv} is not a transposition")));
        }
        self.tree.add_leg(at, inv.clone(), None, None);
        self.apply(&inv);
        Ok(())
    }
}

fn genus_part(word: &GenusWord) -> GenusPart {
    let d = word.genus() + 1;
    let mut gp = GenusPart::start(d);
    for l in word.letters() {
        match l {
            Letter::U => gp.up(),
            Letter::D => gp.down(),
        }
    }
    gp
}

/// The genus part alone, closed off by a leg carrying the active monodromy.
pub fn build_genus_part(word: &GenusWord) -> Result<(TropicalCover, usize)> {
    let mut gp = genus_part(word);
    let active = gp.active().len();
    let inv = gp.prefix.inverse();
    let end = gp.end;
    gp.tree.add_leg(end, inv, None, None);
    Ok((gp.tree.build()?, active))
}

/// Number of target compact edges spanned by the genus part.
pub fn genus_block_size(g: usize) -> usize {
    3 * g - 2
}

/// The planar target with leg monodromies for a solution index.
pub fn solution_tree(s: &SolutionIndex) -> Result<MonodromyTree> {
    let g = s.genus();
    let n = g + 3;
    let (i, j, k) = (s.i(), s.j, s.k());
    let mut gp = genus_part(&s.word);
    debug_assert_eq!(gp.active().len(), g + 1 - 2 * i);

    if i == 0 && j == 1 {
        let cuts: Vec<usize> = (0..g - 1).map(|_| gp.cut()).collect();
        let q = gp.spine_vertex();
        let c = gp.active();
        let (alpha, beta) = (c[0], c[1]);
        let a = gp.tree.add_child(q);
        let b = gp.tree.add_child(a);
        gp.tree.marked_leg(b, 1, beta);
        gp.tree.marked_leg(b, 2, beta);
        // chain t_g (mark 3), t_{g-1} (mark 4), ..., t_1 (marks n, n-1)
        let sheet_of = |m: usize| -> usize {
            match m {
                1..=3 => beta,
                4 => alpha,
                _ => cuts[n - m],
            }
        };
        let mut at = a;
        for m in 3..n - 1 {
            let t = gp.tree.add_child(at);
            gp.tree.marked_leg(t, m, sheet_of(m));
            at = t;
        }
        let top = gp.tree.add_child(at);
        gp.tree.marked_leg(top, n, sheet_of(n));
        gp.tree.marked_leg(top, n - 1, sheet_of(n - 1));
        gp.close(q)?;
        return Ok(gp.tree);
    }

    let cuts: Vec<usize> = (0..k).map(|_| gp.cut()).collect();
    let qp = gp.spine_vertex();
    let plus_active = gp.active()[0];
    // F⁺ marks n, n-1, ..., j+2 go to cut sheets, the active sheet, then the
    // fresh sheets in join order
    let fresh_order: Vec<usize> = gp.fresh.iter().copied().collect();
    let mut plus_sheets = cuts.clone();
    plus_sheets.push(plus_active);
    plus_sheets.extend(&fresh_order);
    let plus_marks: Vec<usize> = (j + 2..=n).rev().collect();
    debug_assert_eq!(plus_marks.len(), plus_sheets.len());
    let sheet_plus = |m: usize| plus_sheets[n - m];
    if plus_marks.len() == 1 {
        gp.tree.marked_leg(qp, n, sheet_plus(n));
    } else {
        let mut at = qp;
        for m in j + 2..n - 1 {
            let t = gp.tree.add_child(at);
            gp.tree.marked_leg(t, m, sheet_plus(m));
            at = t;
        }
        let top = gp.tree.add_child(at);
        gp.tree.marked_leg(top, n, sheet_plus(n));
        gp.tree.marked_leg(top, n - 1, sheet_plus(n - 1));
    }
    for _ in 0..i {
        gp.join();
    }
    let q0 = gp.spine_vertex();
    let a0 = gp.active()[0];
    gp.tree.marked_leg(q0, j + 1, a0);
    let lower_cuts: Vec<usize> = (0..j.saturating_sub(2)).map(|_| gp.cut()).collect();
    let qm = gp.spine_vertex();
    let c = gp.active();
    if c.len() != 2 {
        return Err(Error::Invalid(format!("active degree {} before F⁻, expected 2", c.len())));
    }
    let mut at = gp.tree.add_child(qm);
    for (r, m) in (3..=j).rev().enumerate() {
        gp.tree.marked_leg(at, m, lower_cuts[r]);
        at = gp.tree.add_child(at);
    }
    gp.tree.marked_leg(at, 1, c[0]);
    gp.tree.marked_leg(at, 2, c[1]);
    gp.close(qm)?;
    Ok(gp.tree)
}

/// A constructed solution: the cover with lengths in `x, L`, the same cover
/// with lengths in the coordinates `y`, and the solved coordinates.
#[derive(Debug, Clone)]
pub struct Solution {
    pub index: SolutionIndex,
    pub cover: TropicalCover,
    pub y_cover: TropicalCover,
    pub y_values: Vec<LinForm>,
}

fn swap_loop_params(f: &LinForm, mask: usize) -> LinForm {
    f.rename(|p| {
        if p.kind == ParamKind::X && p.index >= 3 {
            let m = p.index / 3;
            let r = p.index % 3;
            if r != 2 && mask >> (m - 1) & 1 == 1 {
                return Param::x(if r == 0 { p.index + 1 } else { p.index - 1 });
            }
        }
        p
    })
}

/// Solves the coordinates `y` of a `y`-parametrized cover from the
/// requirement that its stabilizations carry the lengths of the reference
/// point. Among the relabelings of the topologically interchangeable loop
/// edges exactly one solution must be positive in the ordering.
pub fn solve_metric(y_cover: &TropicalCover, p: &ReferencePoint) -> Result<Vec<LinForm>> {
    let g = p.genus;
    let keep = p.keep();
    let ss = stabilize(&y_cover.source, &keep)?;
    let st = stabilize(&y_cover.target, &keep)?;
    let iso_s = isomorphic(&ss.graph, &p.gamma_bar, false)?
        .ok_or_else(|| Error::StabilizationMismatch("source does not stabilize to the chain of loops".into()))?;
    let iso_t = isomorphic(&st.graph, &p.t_bar, false)?
        .ok_or_else(|| Error::StabilizationMismatch("target does not stabilize to the caterpillar".into()))?;
    let unknowns = y_cover.target.edges.len();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let mut push = |lhs: &LinForm, value: &LinForm| {
        rows.push((1..=unknowns).map(|k| lhs.coeff(Param::y(k))).collect::<Vec<Rational>>());
        rhs.push(value.clone());
    };
    for (i, e) in ss.graph.edges.iter().enumerate() {
        push(&e.length, &p.gamma_bar.edges[iso_s.edges[i]].length);
    }
    for (i, e) in st.graph.edges.iter().enumerate() {
        push(&e.length, &p.t_bar.edges[iso_t.edges[i]].length);
    }
    let base = match solve_linear(&rows, &rhs)? {
        LinearSolution::Unique(v) => v,
        LinearSolution::Inconsistent => return Err(Error::LengthMismatch("stabilization constraints are inconsistent".into())),
        LinearSolution::Underdetermined => return Err(Error::Singular),
    };
    let mut positive = Vec::new();
    for mask in 0..1usize << (g - 1) {
        let cand: Vec<LinForm> = base.iter().map(|f| swap_loop_params(f, mask)).collect();
        if cand.iter().all(|f| f.lex_sign() > 0) {
            positive.push(cand);
        }
    }
    match positive.len() {
        1 => Ok(positive.pop().unwrap()),
        0 => Err(Error::InfeasibleLengths("no labeling of the loops gives positive lengths".into())),
        m => Err(Error::Invalid(format!("{m} positive length solutions"))),
    }
}

pub fn build_solution_full(s: &SolutionIndex, p: &ReferencePoint) -> Result<Solution> {
    let y_cover = solution_tree(s)?.build()?;
    let y_values = solve_metric(&y_cover, p)?;
    let cover = y_cover.substitute(|q| match q.kind {
        ParamKind::Y => y_values[q.index - 1].clone(),
        _ => LinForm::param(q),
    });
    Ok(Solution { index: s.clone(), cover, y_cover, y_values })
}

pub fn build_solution(s: &SolutionIndex) -> Result<TropicalCover> {
    Ok(build_solution_full(s, &reference_point(s.genus()))?.cover)
}

/// All indices `(word, j)` with `j ∈ [i + 1, d - i]`, words in
/// lexicographic order.
pub fn solution_indices(g: usize) -> Vec<SolutionIndex> {
    let d = g + 1;
    let mut out = Vec::new();
    for w in enumerate_genus_words(g) {
        let i = w.downs();
        for j in i + 1..=d - i {
            out.push(SolutionIndex { word: w.clone(), j });
        }
    }
    out
}

/// Evidence that a cover lies over the reference point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionCertificate {
    pub base: BigInt,
    pub min_source_length: Rational,
    pub min_target_length: Rational,
}

pub fn verify_solution(c: &TropicalCover, p: &ReferencePoint) -> Result<SolutionCertificate> {
    verify_solution_at(c, p, &p.default_base())
}

pub fn verify_solution_at(c: &TropicalCover, p: &ReferencePoint, base: &BigInt) -> Result<SolutionCertificate> {
    let keep = p.keep();
    let ss = stabilize(&c.source, &keep).map_err(|e| Error::StabilizationMismatch(e.to_string()))?;
    let st = stabilize(&c.target, &keep).map_err(|e| Error::StabilizationMismatch(e.to_string()))?;
    if isomorphic(&ss.graph, &p.gamma_bar, false)?.is_none() {
        return Err(Error::StabilizationMismatch("source does not stabilize to the chain of loops".into()));
    }
    if isomorphic(&st.graph, &p.t_bar, false)?.is_none() {
        return Err(Error::StabilizationMismatch("target does not stabilize to the caterpillar".into()));
    }
    let min_len = |g: &MetricGraph, what: &str| -> Result<Rational> {
        let mut best: Option<Rational> = None;
        for (i, e) in g.edges.iter().enumerate() {
            let v = p.instantiate(&e.length, base);
            if !v.is_positive() {
                return Err(Error::InfeasibleLengths(format!("{what} edge {i} has length {} = {v}", e.length)));
            }
            if best.as_ref().is_none_or(|b| v < *b) {
                best = Some(v);
            }
        }
        Ok(best.unwrap_or_else(Rational::zero))
    };
    let min_source_length = min_len(&c.source, "source")?;
    let min_target_length = min_len(&c.target, "target")?;
    if isomorphic(&ss.graph, &p.gamma_bar, true)?.is_none() {
        return Err(Error::LengthMismatch("stabilized source lengths differ from the chain of loops".into()));
    }
    if isomorphic(&st.graph, &p.t_bar, true)?.is_none() {
        return Err(Error::LengthMismatch("stabilized target lengths differ from the caterpillar".into()));
    }
    if total_genus(&c.source)? != p.genus {
        return Err(Error::StabilizationMismatch("source genus differs".into()));
    }
    Ok(SolutionCertificate { base: base.clone(), min_source_length, min_target_length })
}

/// Builds and verifies every solution for genus `g`, in index order.
pub fn enumerate_solutions(g: usize) -> Result<Vec<(SolutionIndex, TropicalCover)>> {
    Ok(enumerate_solutions_full(g, crate::par::ExecMode::default())?
        .into_iter()
        .map(|s| (s.index, s.cover))
        .collect())
}

pub fn enumerate_solutions_full(g: usize, mode: crate::par::ExecMode) -> Result<Vec<Solution>> {
    if g == 0 {
        return Err(Error::IndexOutOfRange("genus must be positive".into()));
    }
    let p = reference_point(g);
    let idx = solution_indices(g);
    crate::par::try_map(mode, &idx, |s| {
        let sol = build_solution_full(s, &p)?;
        verify_solution(&sol.cover, &p)?;
        Ok(sol)
    })
}

/// Rows of the solution table: words grouped by nonincreasing final degree,
/// each with its admissible `j` values.
pub fn solution_table(g: usize) -> Vec<(GenusWord, Vec<usize>)> {
    let d = g + 1;
    let mut words = enumerate_genus_words(g);
    words.sort_by_key(|w| (w.downs(), w.clone()));
    words
        .into_iter()
        .map(|w| {
            let i = w.downs();
            (w, (i + 1..=d - i).collect())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_shapes() {
        for g in 1..=5 {
            let p = reference_point(g);
            assert_eq!(p.gamma_bar.edges.len(), 4 * g);
            assert_eq!(p.t_bar.edges.len(), g);
            assert_eq!(total_genus(&p.gamma_bar).unwrap(), g);
            assert!((0..p.gamma_bar.num_vertices()).all(|v| p.gamma_bar.valence(v) == 3));
            assert!((0..p.t_bar.num_vertices()).all(|v| p.t_bar.valence(v) == 3));
        }
    }

    #[test]
    fn words() {
        let show = |g| enumerate_genus_words(g).iter().map(|w| w.to_string()).collect::<Vec<_>>();
        assert_eq!(show(1), vec![""]);
        assert_eq!(show(3), vec!["UU", "UD", "DU"]);
        assert_eq!(show(4), vec!["UUU", "UUD", "UDU", "UDD", "DUU", "DUD"]);
        assert!("DD".parse::<GenusWord>().is_err());
    }

    #[test]
    fn index_ranges() {
        assert!(SolutionIndex::new(2, "UU".parse().unwrap(), 1).is_err());
        assert!(SolutionIndex::new(2, "D".parse().unwrap(), 1).is_err());
        assert!(SolutionIndex::new(2, "D".parse().unwrap(), 2).is_ok());
        assert_eq!(solution_indices(2).len(), 4);
        assert_eq!(solution_indices(3).len(), 8);
    }

    #[test]
    fn genus_one_solutions_build() {
        let p = reference_point(1);
        for s in solution_indices(1) {
            let sol = build_solution_full(&s, &p).unwrap();
            verify_solution(&sol.cover, &p).unwrap();
        }
    }
}
