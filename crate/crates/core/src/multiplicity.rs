//! Local degree of the source-and-target forgetful map at a cover:
//! automorphism ratio times local Hurwitz numbers times the lattice index of
//! the stabilization map in the coordinates `y`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::construction::{genus_block_size, ReferencePoint};
use crate::cover::{cover_automorphism_count, hanging_copies, TropicalCover};
use crate::error::{Error, Result};
use crate::graph::{automorphism_count, stabilize};
use crate::hurwitz::{classify_vertex, local_hurwitz, vertex_profile, VertexClass};
use crate::numeric::{determinant, IntMatrix, LinForm, Param, ParamKind, Rational};

/// For each target compact edge, the preimage whose length is the coordinate
/// `y_e`: the first one of maximal expansion. At most one preimage may
/// expand by more than 1.
pub fn select_coordinates(c: &TropicalCover) -> Result<Vec<usize>> {
    (0..c.target.edges.len())
        .map(|t| {
            let pre = c.edge_preimages(t);
            if pre.iter().filter(|&&e| c.edge_map[e].expansion > 1).count() > 1 {
                return Err(Error::StarViolation(t));
            }
            let best = pre.iter().map(|&e| c.edge_map[e].expansion).max().ok_or(Error::StarViolation(t))?;
            Ok(*pre.iter().find(|&&e| c.edge_map[e].expansion == best).unwrap())
        })
        .collect()
}

/// Rows `x_1..x_{4g}, L_1..L_g`; columns `y_e` by target edge index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DilationMatrix {
    pub matrix: IntMatrix,
    pub rows: Vec<Param>,
    pub genus_block: usize,
}

impl DilationMatrix {
    pub fn size(&self) -> usize {
        self.matrix.rows()
    }

    pub fn is_block_diagonal(&self) -> bool {
        let (n, b) = (self.size(), self.genus_block);
        (0..n).all(|r| (0..n).all(|c| (r < b) == (c < b) || self.matrix.get(r, c).is_zero()))
    }

    pub fn genus_block(&self) -> IntMatrix {
        self.matrix.block(0..self.genus_block, 0..self.genus_block)
    }

    pub fn tree_block(&self) -> IntMatrix {
        let n = self.size();
        self.matrix.block(self.genus_block..n, self.genus_block..n)
    }
}

impl fmt::Display for DilationMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.matrix.rows();
        let m = self.matrix.cols();
        let width = (0..n)
            .flat_map(|r| self.matrix.row(r).iter().map(|v| v.to_string().len()))
            .max()
            .unwrap_or(1)
            .max(2);
        let label_w = self.rows.iter().map(|p| p.to_string().len()).max().unwrap_or(1);
        write!(f, "{:label_w$} ", "")?;
        for c in 0..m {
            if c == self.genus_block && c > 0 {
                write!(f, " |")?;
            }
            write!(f, " {:>width$}", format!("y{}", c + 1), width = width.max(format!("y{}", c + 1).len()))?;
        }
        writeln!(f)?;
        for r in 0..n {
            if r == self.genus_block && r > 0 {
                writeln!(f, "{}", "-".repeat(label_w + 1 + m * (width + 2) + 2))?;
            }
            write!(f, "{:>label_w$} ", self.rows[r].to_string())?;
            for c in 0..m {
                if c == self.genus_block && c > 0 {
                    write!(f, " |")?;
                }
                write!(f, " {:>width$}", self.matrix.get(r, c).to_string(), width = width.max(format!("y{}", c + 1).len()))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn single_param(f: &LinForm) -> Option<Param> {
    let mut it = f.terms();
    match (it.next(), it.next()) {
        (Some((p, c)), None) if c.is_one() && f.constant_term().is_zero() => Some(*p),
        _ => None,
    }
}

pub fn dilation_matrix(c: &TropicalCover, p: &ReferencePoint) -> Result<DilationMatrix> {
    let g = p.genus;
    let size = 5 * g;
    let sel = select_coordinates(c)?;
    if c.target.edges.len() != size {
        return Err(Error::Invalid(format!("{} target edges, expected {size}", c.target.edges.len())));
    }
    let max_exp: Vec<usize> = sel.iter().map(|&e| c.edge_map[e].expansion).collect();
    let y_value: Vec<&LinForm> = sel.iter().map(|&e| &c.source.edges[e].length).collect();
    let keep: BTreeSet<usize> = p.keep();
    let ss = stabilize(&c.source, &keep)?;
    let st = stabilize(&c.target, &keep)?;
    let mut m = IntMatrix::zeros(size, size);
    let mut filled = vec![false; size];
    let mut rows = vec![Param::x(1); size];
    let mut place = |param: Param, entries: Vec<(usize, BigInt)>| -> Result<()> {
        let r = match param.kind {
            ParamKind::X if param.index <= 4 * g => param.index - 1,
            ParamKind::L if param.index <= g => 4 * g + param.index - 1,
            _ => return Err(Error::LengthMismatch(format!("unexpected parameter {param}"))),
        };
        if std::mem::replace(&mut filled[r], true) {
            return Err(Error::LengthMismatch(format!("{param} appears twice")));
        }
        rows[r] = param;
        let mut check = LinForm::zero();
        for (col, v) in entries {
            check = check + y_value[col].scale(&Rational::from_integer(v.clone()));
            let cur = m.get(r, col).clone();
            m.set(r, col, cur + v);
        }
        if check != LinForm::param(param) {
            return Err(Error::LengthMismatch(format!("row {param} evaluates to {check}")));
        }
        Ok(())
    };
    for (i, e) in ss.graph.edges.iter().enumerate() {
        let param = single_param(&e.length)
            .ok_or_else(|| Error::LengthMismatch(format!("stabilized source edge has length {}", e.length)))?;
        let entries = ss.provenance[i]
            .iter()
            .map(|&f| {
                let img = c.edge_map[f];
                (img.target, BigInt::from(max_exp[img.target] / img.expansion))
            })
            .collect();
        place(param, entries)?;
    }
    for (i, e) in st.graph.edges.iter().enumerate() {
        let param = single_param(&e.length)
            .ok_or_else(|| Error::LengthMismatch(format!("stabilized target edge has length {}", e.length)))?;
        let entries = st.provenance[i].iter().map(|&t| (t, BigInt::from(max_exp[t]))).collect();
        place(param, entries)?;
    }
    if filled.iter().any(|f| !f) {
        return Err(Error::LengthMismatch("some reference lengths are not realized".into()));
    }
    Ok(DilationMatrix { matrix: m, rows, genus_block: genus_block_size(g) })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiplicityCertificate {
    pub aut_reference: u128,
    pub aut_cover: u128,
    #[serde(serialize_with = "ser_rational")]
    pub aut_ratio: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub hurwitz_product: Rational,
    #[serde(serialize_with = "ser_bigint")]
    pub dilation_det: BigInt,
    #[serde(serialize_with = "ser_bigint")]
    pub genus_block_det: BigInt,
    #[serde(serialize_with = "ser_bigint")]
    pub tree_block_det: BigInt,
    pub block_diagonal: bool,
    #[serde(serialize_with = "ser_rational")]
    pub local_degree: Rational,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn ser_bigint<S: serde::Serializer>(r: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl MultiplicityCertificate {
    pub fn is_unit(&self) -> bool {
        self.local_degree.is_one()
    }
}

impl fmt::Display for MultiplicityCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}) * {} * |{}| = {}",
            self.aut_ratio, self.hurwitz_product, self.dilation_det, self.local_degree
        )
    }
}

/// Product of local Hurwitz numbers over all source vertices; every vertex
/// must be of a recognized kind.
pub fn hurwitz_product(c: &TropicalCover) -> Result<Rational> {
    let copies = hanging_copies(c)?;
    let mut acc = Rational::one();
    for v in 0..c.source.num_vertices() {
        let prof = vertex_profile(c, v, &copies);
        if classify_vertex(&prof) == VertexClass::Unrecognized {
            return Err(Error::UnrecognizedVertex(v));
        }
        acc *= local_hurwitz(&prof)?;
    }
    Ok(acc)
}

pub fn local_degree(c: &TropicalCover, p: &ReferencePoint) -> Result<MultiplicityCertificate> {
    let aut_reference = automorphism_count(&p.gamma_bar)?;
    let aut_cover = cover_automorphism_count(c)?;
    let aut_ratio = Rational::new(BigInt::from(aut_reference), BigInt::from(aut_cover));
    let hurwitz_product = hurwitz_product(c)?;
    let dm = dilation_matrix(c, p)?;
    let dilation_det = determinant(&dm.matrix)?;
    let genus_block_det = determinant(&dm.genus_block())?;
    let tree_block_det = determinant(&dm.tree_block())?;
    let local_degree = &aut_ratio * &hurwitz_product * Rational::from_integer(dilation_det.abs());
    Ok(MultiplicityCertificate {
        aut_reference,
        aut_cover,
        aut_ratio,
        hurwitz_product,
        dilation_det,
        genus_block_det,
        tree_block_det,
        block_diagonal: dm.is_block_diagonal(),
        local_degree,
    })
}
