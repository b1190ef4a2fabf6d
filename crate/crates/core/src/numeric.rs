//! Exact scalars, linear forms over named length parameters, and integer
//! matrices.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Kind of a length parameter. The derived order is the ordering used for
/// lexicographic positivity: every `X` is infinitesimal against every `L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ParamKind {
    X,
    L,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Param {
    pub kind: ParamKind,
    pub index: usize,
}

impl Param {
    pub fn x(index: usize) -> Self {
        Param { kind: ParamKind::X, index }
    }
    pub fn l(index: usize) -> Self {
        Param { kind: ParamKind::L, index }
    }
    pub fn y(index: usize) -> Self {
        Param { kind: ParamKind::Y, index }
    }

    /// Whether the index lies in the legal range for genus `g`.
    pub fn in_range(&self, g: usize) -> bool {
        let hi = match self.kind {
            ParamKind::X => 4 * g,
            ParamKind::L => g,
            ParamKind::Y => 5 * g,
        };
        (1..=hi).contains(&self.index)
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.kind {
            ParamKind::X => 'x',
            ParamKind::L => 'L',
            ParamKind::Y => 'y',
        };
        write!(f, "{}_{}", c, self.index)
    }
}

impl FromStr for Param {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (head, idx) = s
            .split_once('_')
            .ok_or_else(|| Error::Parse(format!("bad parameter {s:?}")))?;
        let index: usize = idx
            .parse()
            .map_err(|_| Error::Parse(format!("bad parameter index {s:?}")))?;
        let kind = match head {
            "x" => ParamKind::X,
            "L" => ParamKind::L,
            "y" => ParamKind::Y,
            _ => return Err(Error::Parse(format!("bad parameter kind {s:?}"))),
        };
        if index == 0 {
            return Err(Error::Parse(format!("parameter index must be positive: {s:?}")));
        }
        Ok(Param { kind, index })
    }
}

/// `Σ c_p · p + constant` with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LinForm {
    terms: BTreeMap<Param, Rational>,
    constant: Rational,
}

impl LinForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn param(p: Param) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(p, Rational::one());
        LinForm { terms, constant: Rational::zero() }
    }

    pub fn constant(c: Rational) -> Self {
        LinForm { terms: BTreeMap::new(), constant: c }
    }

    pub fn from_terms<I: IntoIterator<Item = (Param, Rational)>>(it: I, constant: Rational) -> Self {
        let mut out = LinForm::constant(constant);
        for (p, c) in it {
            out.add_term(p, c);
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Param, &Rational)> {
        self.terms.iter()
    }

    pub fn constant_term(&self) -> &Rational {
        &self.constant
    }

    pub fn coeff(&self, p: Param) -> Rational {
        self.terms.get(&p).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.constant.is_zero()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, p: Param, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(p).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn scale(&self, c: &Rational) -> LinForm {
        if c.is_zero() {
            return LinForm::zero();
        }
        LinForm {
            terms: self.terms.iter().map(|(p, v)| (*p, v * c)).collect(),
            constant: &self.constant * c,
        }
    }

    pub fn eval<F: Fn(Param) -> Rational>(&self, value: F) -> Rational {
        let mut acc = self.constant.clone();
        for (p, c) in &self.terms {
            acc += c * value(*p);
        }
        acc
    }

    /// Replaces each parameter by a linear form.
    pub fn substitute<F: Fn(Param) -> LinForm>(&self, value: F) -> LinForm {
        let mut acc = LinForm::constant(self.constant.clone());
        for (p, c) in &self.terms {
            acc = acc + value(*p).scale(c);
        }
        acc
    }

    pub fn rename<F: Fn(Param) -> Param>(&self, f: F) -> LinForm {
        LinForm::from_terms(self.terms.iter().map(|(p, c)| (f(*p), c.clone())), self.constant.clone())
    }

    /// Sign under the ordering where each parameter dominates all smaller ones
    /// and the constant is infinitesimal against every parameter.
    pub fn lex_sign(&self) -> i32 {
        let lead = self.terms.iter().next_back().map(|(_, c)| c).unwrap_or(&self.constant);
        if lead.is_positive() {
            1
        } else if lead.is_negative() {
            -1
        } else {
            0
        }
    }

    /// Integer coefficients, if every coefficient is integral and there is
    /// no constant.
    pub fn integer_coeffs(&self) -> Option<BTreeMap<Param, BigInt>> {
        if !self.constant.is_zero() {
            return None;
        }
        self.terms
            .iter()
            .map(|(p, c)| c.is_integer().then(|| (*p, c.to_integer())))
            .collect()
    }

    pub fn params(&self) -> impl Iterator<Item = Param> + '_ {
        self.terms.keys().copied()
    }
}

impl Add for LinForm {
    type Output = LinForm;
    fn add(mut self, rhs: LinForm) -> LinForm {
        for (p, c) in rhs.terms {
            self.add_term(p, c);
        }
        self.constant += rhs.constant;
        self
    }
}

impl<'a> Add<&'a LinForm> for &'a LinForm {
    type Output = LinForm;
    fn add(self, rhs: &LinForm) -> LinForm {
        self.clone() + rhs.clone()
    }
}

impl Neg for LinForm {
    type Output = LinForm;
    fn neg(self) -> LinForm {
        self.scale(&-Rational::one())
    }
}

impl Sub for LinForm {
    type Output = LinForm;
    fn sub(self, rhs: LinForm) -> LinForm {
        self + (-rhs)
    }
}

impl<'a> Sub<&'a LinForm> for &'a LinForm {
    type Output = LinForm;
    fn sub(self, rhs: &LinForm) -> LinForm {
        self.clone() - rhs.clone()
    }
}

impl Mul<&Rational> for &LinForm {
    type Output = LinForm;
    fn mul(self, rhs: &Rational) -> LinForm {
        self.scale(rhs)
    }
}

pub fn linform_add(a: &LinForm, b: &LinForm) -> LinForm {
    a + b
}

pub fn linform_scale(a: &LinForm, c: &Rational) -> LinForm {
    a.scale(c)
}

fn fmt_coeff(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for LinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        let mut emit = |f: &mut fmt::Formatter<'_>, c: &Rational, name: Option<String>| -> fmt::Result {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match name {
                Some(n) if a.is_one() => write!(f, "{n}"),
                Some(n) => write!(f, "{}*{}", fmt_coeff(&a), n),
                None => write!(f, "{}", fmt_coeff(&a)),
            }
        };
        for (p, c) in &self.terms {
            emit(f, c, Some(p.to_string()))?;
        }
        if !self.constant.is_zero() {
            emit(f, &self.constant, None)?;
        }
        Ok(())
    }
}

fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("bad coefficient {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

impl FromStr for LinForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty linear form".into()));
        }
        let mut out = LinForm::zero();
        let mut chunks: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        for ch in s.chars() {
            match ch {
                '+' | '-' => {
                    if !cur.trim().is_empty() {
                        chunks.push((neg, std::mem::take(&mut cur)));
                    } else if !cur.is_empty() || !chunks.is_empty() {
                        cur.clear();
                    }
                    neg = ch == '-';
                }
                _ => cur.push(ch),
            }
        }
        if cur.trim().is_empty() {
            return Err(Error::Parse(format!("dangling sign in {s:?}")));
        }
        chunks.push((neg, cur));
        for (neg, chunk) in chunks {
            let chunk = chunk.trim();
            let sign = if neg { -Rational::one() } else { Rational::one() };
            let (coef, name) = match chunk.split_once('*') {
                Some((c, n)) => (parse_rational(c)?, Some(n.trim())),
                None if chunk.contains('_') => (Rational::one(), Some(chunk)),
                None => (parse_rational(chunk)?, None),
            };
            match name {
                Some(n) => out.add_term(n.parse()?, coef * sign),
                None => out.constant += coef * sign,
            }
        }
        Ok(out)
    }
}

impl Serialize for LinForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LinForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        let entries = rows.iter().flat_map(|row| row.iter().cloned().map(Into::into)).collect();
        IntMatrix { rows: r, cols: c, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// Submatrix on a contiguous row range and column range.
    pub fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> IntMatrix {
        let mut out = IntMatrix::zeros(rows.len(), cols.len());
        for (i, r) in rows.clone().enumerate() {
            for (j, c) in cols.clone().enumerate() {
                out.set(i, j, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows, self.cols);
        for (i, &r) in row_perm.iter().enumerate() {
            for (j, &c) in col_perm.iter().enumerate() {
                out.set(i, j, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigInt::zero();
                for k in 0..self.cols {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }
}

/// Exact determinant by Bareiss fraction-free elimination.
pub fn determinant(m: &IntMatrix) -> Result<BigInt> {
    if m.rows != m.cols {
        return Err(Error::NonSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.to_rows();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    Ok(sign * &a[n - 1][n - 1])
}

/// Outcome of solving an exact linear system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<LinForm>),
    Inconsistent,
    Underdetermined,
}

/// Solves `A·v = b` where the right-hand side holds linear forms. The system
/// may be overdetermined; consistency then means every redundant row reduces
/// to the zero form.
pub fn solve_linear(a: &[Vec<Rational>], b: &[LinForm]) -> Result<Solution> {
    let m = a.len();
    if b.len() != m {
        return Err(Error::NonSquare { rows: m, cols: b.len() });
    }
    let n = a.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<Rational>> = a.to_vec();
    let mut b: Vec<LinForm> = b.to_vec();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..m).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        b.swap(row, p);
        let inv = a[row][col].recip();
        for x in &mut a[row][col..n] {
            *x = &*x * &inv;
        }
        b[row] = b[row].scale(&inv);
        let pivot = a[row].clone();
        for r in 0..m {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for (x, p) in a[r][col..n].iter_mut().zip(&pivot[col..n]) {
                    *x -= p * &f;
                }
                let sub = b[row].scale(&f);
                b[r] = &b[r] - &sub;
            }
        }
        pivots.push(col);
        row += 1;
        if row == m {
            break;
        }
    }
    if b[row..].iter().any(|f| !f.is_zero()) {
        return Ok(Solution::Inconsistent);
    }
    if pivots.len() < n {
        return Ok(Solution::Underdetermined);
    }
    Ok(Solution::Unique(b.into_iter().take(n).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> LinForm {
        LinForm::param(Param::x(i))
    }

    #[test]
    fn add_and_scale() {
        assert_eq!((x(1) + x(1)).to_string(), "2*x_1");
        let l = LinForm::param(Param::l(1)) - x(4).scale(&rat(2));
        assert_eq!(l.clone() + x(4).scale(&rat(2)), LinForm::param(Param::l(1)));
        let y = LinForm::param(Param::y(2)).scale(&rat(3)) + LinForm::constant(ratio(1, 2));
        assert_eq!(y + LinForm::param(Param::y(2)).scale(&rat(-3)), LinForm::constant(ratio(1, 2)));
        assert!((x(3) + x(7)).scale(&rat(0)).is_zero());
        assert_eq!((x(3) + x(4)).scale(&ratio(1, 2)).to_string(), "1/2*x_3 + 1/2*x_4");
    }

    #[test]
    fn display_parse_roundtrip() {
        for s in ["0", "x_1", "-2*x_4 + L_1", "2*y_1 - 1/2*y_3 + 1/2", "-7/3"] {
            let f: LinForm = s.parse().unwrap();
            assert_eq!(f.to_string(), s);
        }
        let f: LinForm = "L_1 - 2*x_4".parse().unwrap();
        assert_eq!(f.coeff(Param::x(4)), rat(-2));
        assert!("3*q_1".parse::<LinForm>().is_err());
        assert!("x_1 +".parse::<LinForm>().is_err());
    }

    #[test]
    fn lex_sign_follows_largest_parameter() {
        let f: LinForm = "L_1 - 1000*x_4".parse().unwrap();
        assert_eq!(f.lex_sign(), 1);
        let f: LinForm = "x_1 - x_2".parse().unwrap();
        assert_eq!(f.lex_sign(), -1);
        assert_eq!(LinForm::zero().lex_sign(), 0);
    }

    #[test]
    fn bareiss_small() {
        assert_eq!(determinant(&IntMatrix::identity(5)).unwrap(), BigInt::one());
        let m = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(determinant(&m).unwrap(), BigInt::from(-1));
        let m = IntMatrix::from_rows(&[vec![2, 4], vec![1, 2]]);
        assert!(determinant(&m).unwrap().is_zero());
        assert!(matches!(determinant(&IntMatrix::zeros(2, 3)), Err(Error::NonSquare { .. })));
    }

    #[test]
    fn solve_detects_rank_problems() {
        let a = vec![vec![rat(1), rat(1)], vec![rat(2), rat(2)]];
        let b = vec![x(1), x(1)];
        assert_eq!(solve_linear(&a, &b).unwrap(), Solution::Inconsistent);
        let b = vec![x(1), x(1).scale(&rat(2))];
        assert_eq!(solve_linear(&a, &b).unwrap(), Solution::Underdetermined);
        let a = vec![vec![rat(2), rat(0)], vec![rat(1), rat(1)], vec![rat(0), rat(1)]];
        let b = vec![x(1).scale(&rat(2)), x(1) + x(2), x(2)];
        assert_eq!(solve_linear(&a, &b).unwrap(), Solution::Unique(vec![x(1), x(2)]));
    }
}
