//! Text, CSV, JSON and Graphviz renderings.

use std::fmt::Write;

use serde::Serialize;

use crate::construction::{solution_table, SolutionIndex};
use crate::counting::{LemmaReport, PathTally};
use crate::cover::TropicalCover;
use crate::error::{Error, Result};
use crate::graph::MetricGraph;
use crate::multiplicity::MultiplicityCertificate;

fn leg_label(mark: Option<usize>) -> String {
    mark.map_or_else(String::new, |m| m.to_string())
}

fn write_graph_body(out: &mut String, g: &MetricGraph, prefix: &str, expansions: Option<&[usize]>) {
    for v in 0..g.num_vertices() {
        let label = if g.genus[v] > 0 { format!("{v} (g={})", g.genus[v]) } else { v.to_string() };
        let _ = writeln!(out, "    {prefix}v{v} [label=\"{label}\", shape=circle];");
    }
    for (i, e) in g.edges.iter().enumerate() {
        let mut label = e.length.to_string();
        if let Some(m) = expansions.map(|x| x[i]).filter(|&m| m > 1) {
            let _ = write!(label, " [{m}]");
        }
        let _ = writeln!(out, "    {prefix}v{} -- {prefix}v{} [label=\"{label}\"];", e.ends.0, e.ends.1);
    }
    for (i, l) in g.legs.iter().enumerate() {
        let _ = writeln!(
            out,
            "    {prefix}l{i} [label=\"{}\", shape=plaintext];\n    {prefix}v{} -- {prefix}l{i} [style=bold];",
            leg_label(l.mark),
            l.vertex
        );
    }
}

/// Undirected DOT for a metric graph. Edges carry their lengths; legs end in
/// a label with their mark.
pub fn graph_to_dot(g: &MetricGraph, name: &str) -> String {
    let mut out = format!("graph \"{name}\" {{\n");
    write_graph_body(&mut out, g, "", None);
    out.push_str("}\n");
    out
}

/// DOT with the source cluster above the target cluster and dashed arrows
/// for the vertex map. Source edges of expansion above 1 show it in brackets.
pub fn cover_to_dot(c: &TropicalCover, name: &str) -> String {
    let mut out = format!("graph \"{name}\" {{\n  rankdir=TB;\n  subgraph cluster_source {{\n    label=\"source\";\n");
    let exps: Vec<usize> = c.edge_map.iter().map(|m| m.expansion).collect();
    write_graph_body(&mut out, &c.source, "s", Some(&exps));
    out.push_str("  }\n  subgraph cluster_target {\n    label=\"target\";\n");
    write_graph_body(&mut out, &c.target, "t", None);
    out.push_str("  }\n");
    for (v, &w) in c.vertex_map.iter().enumerate() {
        let _ = writeln!(out, "  sv{v} -- tv{w} [style=dashed, dir=forward, color=gray, constraint=true];");
    }
    out.push_str("}\n");
    out
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))
}

pub fn cover_from_json(s: &str) -> Result<TropicalCover> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}

/// The triangular table of solutions: one row per final active degree, one
/// column per `j`, each cell the number of genus words contributing.
pub fn solution_table_text(g: usize) -> String {
    let d = g + 1;
    let rows = solution_table(g);
    let mut out = String::new();
    let _ = write!(out, "{:>6} {:>6} |", "degree", "words");
    for j in 1..=d {
        let _ = write!(out, " {:>4}", format!("j={j}"));
    }
    out.push('\n');
    let mut i = 0;
    let mut total = 0;
    while i < rows.len() {
        let downs = rows[i].0.downs();
        let js = rows[i].1.clone();
        let count = rows[i..].iter().take_while(|r| r.0.downs() == downs).count();
        let _ = write!(out, "{:>6} {:>6} |", d - 2 * downs, count);
        for j in 1..=d {
            let cell = if js.contains(&j) { count.to_string() } else { ".".into() };
            let _ = write!(out, " {cell:>4}");
        }
        out.push('\n');
        total += count * js.len();
        i += count;
    }
    let _ = writeln!(out, "total {total}");
    out
}

pub fn certificates_csv(rows: &[(SolutionIndex, MultiplicityCertificate)]) -> String {
    let mut out = String::from(
        "tag,word,j,i,k,aut_reference,aut_cover,aut_ratio,hurwitz_product,dilation_det,genus_block_det,tree_block_det,block_diagonal,local_degree\n",
    );
    for (s, c) in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            s.tag(),
            s.word,
            s.j,
            s.i(),
            s.k(),
            c.aut_reference,
            c.aut_cover,
            c.aut_ratio,
            c.hurwitz_product,
            c.dilation_det,
            c.genus_block_det,
            c.tree_block_det,
            c.block_diagonal,
            c.local_degree
        );
    }
    out
}

pub fn certificates_text(rows: &[(SolutionIndex, MultiplicityCertificate)]) -> String {
    let width = rows.iter().map(|(s, _)| s.to_string().len()).max().unwrap_or(0);
    let mut out = String::new();
    for (s, c) in rows {
        let _ = writeln!(out, "{:<width$}  {c}", s.to_string());
    }
    out
}

pub fn path_tally_text(t: &PathTally, lemma: &LemmaReport) -> String {
    let mut out = format!("d = {}: {} words of length {}\n", t.d, t.total(), t.d - 2);
    for (h, n) in t.by_height.iter().rev() {
        let _ = writeln!(out, "  height {h:>2}: {n}");
    }
    for r in &lemma.rows {
        let _ = writeln!(out, "  A(d, >= {}) = {} = C({}, {})", t.d - 2 * r.i, r.cumulative, t.d - 1, r.i);
    }
    let _ = writeln!(out, "  weighted total {} = 2^{}", lemma.table_total, t.d - 1);
    out
}

pub fn path_tally_csv(t: &PathTally, lemma: &LemmaReport) -> String {
    let mut out = String::from("i,height,count,cumulative,binomial\n");
    for r in &lemma.rows {
        let h = t.d - 2 * r.i;
        let _ = writeln!(out, "{},{},{},{},{}", r.i, h, t.at(h), r.cumulative, r.binomial);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{enumerate_solutions, solution_indices};

    #[test]
    fn table_totals() {
        assert!(solution_table_text(1).ends_with("total 2\n"));
        assert!(solution_table_text(4).ends_with("total 16\n"));
    }

    #[test]
    fn dot_has_both_clusters() {
        let (s, c) = enumerate_solutions(1).unwrap().remove(0);
        let dot = cover_to_dot(&c, &s.tag());
        assert!(dot.contains("cluster_source") && dot.contains("cluster_target"));
        assert_eq!(dot.matches("style=dashed").count(), c.source.num_vertices());
        assert_eq!(solution_indices(1)[0].tag(), s.tag());
    }

    #[test]
    fn json_roundtrip() {
        let (_, c) = enumerate_solutions(1).unwrap().remove(1);
        let back = cover_from_json(&to_json(&c).unwrap()).unwrap();
        assert_eq!(back, c);
    }
}
