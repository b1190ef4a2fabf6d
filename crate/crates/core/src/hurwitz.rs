//! Genus-0 triple Hurwitz numbers by enumerating permutation factorizations,
//! and local Hurwitz numbers at cover vertices.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::One;

use crate::cover::{Direction, HangingCopies, TropicalCover};
use crate::error::{Error, Result};
use crate::numeric::Rational;
use crate::perm::{is_transitive, Perm};

/// Largest degree accepted by the enumeration.
pub const MAX_DEGREE: usize = 9;

/// A nonincreasing list of positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Self {
        assert!(parts.iter().all(|&p| p > 0), "parts must be positive");
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn multiplicities(&self) -> HashMap<usize, usize> {
        let mut m = HashMap::new();
        for &p in &self.0 {
            *m.entry(p).or_insert(0) += 1;
        }
        m
    }

    /// `∏ (multiplicity of k)!`
    pub fn aut(&self) -> BigInt {
        self.multiplicities().values().map(|&m| factorial(m)).product()
    }

    /// Size of the centralizer of a permutation with this cycle type.
    pub fn centralizer(&self) -> BigInt {
        self.multiplicities()
            .iter()
            .map(|(&k, &m)| BigInt::from(k).pow(m as u32) * factorial(m))
            .product()
    }

    /// Whether this is `(2, 1, ..., 1)`.
    pub fn is_simple_branch(&self) -> bool {
        self.0.first() == Some(&2) && self.0[1..].iter().all(|&p| p == 1)
    }

    pub fn is_full_cycle(&self) -> bool {
        self.0.len() == 1
    }

    pub fn is_trivial(&self) -> bool {
        self.0.iter().all(|&p| p == 1)
    }

    /// A permutation of this cycle type on `0..size`, cycles of consecutive
    /// sheets.
    pub fn representative(&self) -> Perm {
        let mut cycles = Vec::new();
        let mut next = 0;
        for &p in &self.0 {
            cycles.push((next..next + p).collect());
            next += p;
        }
        Perm::from_cycles(next, &cycles)
    }

    /// All permutations of this cycle type, each exactly once.
    pub fn class(&self) -> Vec<Perm> {
        let d = self.size();
        let mut out = Vec::new();
        let mut images = vec![usize::MAX; d];
        let mut used = vec![false; d];
        let mut remaining = self.0.clone();
        fn rec(images: &mut Vec<usize>, used: &mut Vec<bool>, remaining: &mut Vec<usize>, out: &mut Vec<Perm>) {
            let Some(x) = used.iter().position(|u| !u) else {
                out.push(Perm::from_images(images.clone()));
                return;
            };
            let mut lengths = remaining.clone();
            lengths.dedup();
            for len in lengths {
                let pos = remaining.iter().position(|&r| r == len).unwrap();
                remaining.remove(pos);
                used[x] = true;
                let mut cycle = vec![x];
                extend(images, used, remaining, out, &mut cycle, len);
                used[x] = false;
                remaining.insert(pos, len);
            }
        }
        fn extend(
            images: &mut Vec<usize>,
            used: &mut Vec<bool>,
            remaining: &mut Vec<usize>,
            out: &mut Vec<Perm>,
            cycle: &mut Vec<usize>,
            len: usize,
        ) {
            if cycle.len() == len {
                for k in 0..len {
                    images[cycle[k]] = cycle[(k + 1) % len];
                }
                rec(images, used, remaining, out);
                return;
            }
            for y in 0..used.len() {
                if !used[y] {
                    used[y] = true;
                    cycle.push(y);
                    extend(images, used, remaining, out, cycle, len);
                    cycle.pop();
                    used[y] = false;
                }
            }
        }
        rec(&mut images, &mut used, &mut remaining, &mut out);
        out
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

fn cache() -> &'static Mutex<HashMap<[Partition; 3], Rational>> {
    static CACHE: OnceLock<Mutex<HashMap<[Partition; 3], Rational>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Number of transitive factorizations `σ1 σ2 σ3 = 1` with the given cycle
/// types, divided by `d!` and multiplied by `∏ |Aut(η)|`.
pub fn triple_hurwitz_marked(a: &Partition, b: &Partition, c: &Partition) -> Result<Rational> {
    let d = a.size();
    if b.size() != d || c.size() != d {
        return Err(Error::SizeMismatch);
    }
    if d > MAX_DEGREE {
        return Err(Error::DegreeTooLarge(d));
    }
    let defect: usize = [a, b, c].iter().map(|p| d - p.len()).sum();
    if d == 0 || defect != 2 * d - 2 {
        return Err(Error::GenusMismatch);
    }
    // the count is symmetric: fix the largest class, enumerate the smallest
    let mut key = [a.clone(), b.clone(), c.clone()];
    key.sort_by_key(|p| p.centralizer());
    if let Some(v) = cache().lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let [fixed, derived, listed] = &key;
    let x = fixed.representative();
    let x_inv = x.inverse();
    let mut count = 0u64;
    for z in listed.class() {
        let y = x_inv.then(&z.inverse());
        if y.cycle_type() == derived.parts() && is_transitive(d, &[&x, &z]) {
            count += 1;
        }
    }
    let value = Rational::new(BigInt::from(count) * a.aut() * b.aut() * c.aut(), fixed.centralizer());
    cache().lock().unwrap().insert(key, value.clone());
    Ok(value)
}

/// One direction at a vertex: the preimage profile and the sizes of the
/// classes of unmarked interchangeable branches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectionProfile {
    pub partition: Partition,
    pub is_leg: bool,
    pub interchangeable: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalVertexProfile {
    pub degree: usize,
    pub directions: Vec<DirectionProfile>,
}

impl LocalVertexProfile {
    pub fn new(directions: Vec<DirectionProfile>) -> Self {
        let degree = directions.first().map_or(0, |d| d.partition.size());
        LocalVertexProfile { degree, directions }
    }
}

/// The triple Hurwitz number divided by the factorials of the
/// interchangeable branch classes.
pub fn local_hurwitz(p: &LocalVertexProfile) -> Result<Rational> {
    if p.directions.len() != 3 {
        return Err(Error::Invalid(format!("{} directions at a vertex, expected 3", p.directions.len())));
    }
    if p.directions.iter().any(|d| d.partition.size() != p.degree) {
        return Err(Error::SizeMismatch);
    }
    let h = triple_hurwitz_marked(&p.directions[0].partition, &p.directions[1].partition, &p.directions[2].partition)?;
    let div: BigInt = p
        .directions
        .iter()
        .flat_map(|d| d.interchangeable.iter().map(|&k| factorial(k)))
        .product();
    Ok(h / Rational::from_integer(div))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexClass {
    SimpleTransposition,
    Passthrough,
    Unrecognized,
}

pub fn classify_vertex(p: &LocalVertexProfile) -> VertexClass {
    let Ok(h) = local_hurwitz(p) else {
        return VertexClass::Unrecognized;
    };
    if !h.is_one() {
        return VertexClass::Unrecognized;
    }
    let d = p.degree;
    if p.directions.iter().any(|x| x.is_leg && x.partition.is_simple_branch() && x.partition.size() == d) {
        return VertexClass::SimpleTransposition;
    }
    let full = p.directions.iter().filter(|x| x.partition.is_full_cycle()).count();
    let trivial = p.directions.iter().filter(|x| x.partition.is_trivial()).count();
    if (d == 1 && full == 3) || (d > 1 && full == 2 && trivial == 1) {
        return VertexClass::Passthrough;
    }
    VertexClass::Unrecognized
}

/// Reads the local profile of source vertex `v` off a cover.
pub fn vertex_profile(c: &TropicalCover, v: usize, copies: &HangingCopies) -> LocalVertexProfile {
    let branches = c.branches(v);
    let dirs = c.directions(c.vertex_map[v]);
    let directions = dirs
        .into_iter()
        .map(|dir| {
            let mine: Vec<_> = branches.iter().filter(|b| b.0 == dir).collect();
            let partition = Partition::new(mine.iter().map(|b| b.1).collect());
            let interchangeable = match dir {
                Direction::Leg(_) => {
                    let mut by_exp: HashMap<usize, usize> = HashMap::new();
                    for b in &mine {
                        if let Direction::Leg(l) = b.2 {
                            if c.source.legs[l].mark.is_none() {
                                *by_exp.entry(b.1).or_insert(0) += 1;
                            }
                        }
                    }
                    let mut k: Vec<usize> = by_exp.into_values().filter(|&k| k > 1).collect();
                    k.sort_unstable();
                    k
                }
                Direction::Edge(t) => {
                    let k = copies.bundles[v].get(&t).copied().unwrap_or(0);
                    if k > 1 { vec![k] } else { Vec::new() }
                }
            };
            DirectionProfile { partition, is_leg: matches!(dir, Direction::Leg(_)), interchangeable }
        })
        .collect();
    LocalVertexProfile::new(directions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{rat, ratio};

    fn p(v: &[usize]) -> Partition {
        Partition::new(v.to_vec())
    }

    #[test]
    fn anchors() {
        assert_eq!(triple_hurwitz_marked(&p(&[4]), &p(&[4]), &p(&[1, 1, 1, 1])).unwrap(), rat(6));
        assert_eq!(triple_hurwitz_marked(&p(&[1]), &p(&[1]), &p(&[1])).unwrap(), rat(1));
        assert_eq!(triple_hurwitz_marked(&p(&[2]), &p(&[2]), &p(&[1, 1])).unwrap(), rat(1));
        assert_eq!(triple_hurwitz_marked(&p(&[2]), &p(&[2]), &p(&[2])), Err(Error::GenusMismatch));
        assert_eq!(triple_hurwitz_marked(&p(&[2]), &p(&[3]), &p(&[1])), Err(Error::SizeMismatch));
    }

    #[test]
    fn convention_division() {
        let dir = |v: &[usize], leg: bool, k: Vec<usize>| DirectionProfile { partition: p(v), is_leg: leg, interchangeable: k };
        let fig = LocalVertexProfile::new(vec![dir(&[4], false, vec![]), dir(&[4], false, vec![]), dir(&[1, 1, 1, 1], false, vec![3])]);
        assert_eq!(local_hurwitz(&fig).unwrap(), rat(1));
        assert_eq!(classify_vertex(&fig), VertexClass::Passthrough);
        let small = LocalVertexProfile::new(vec![dir(&[2], false, vec![]), dir(&[2], false, vec![]), dir(&[1, 1], true, vec![2])]);
        assert_eq!(local_hurwitz(&small).unwrap(), ratio(1, 2));
        assert_eq!(classify_vertex(&small), VertexClass::Unrecognized);
        let odd = LocalVertexProfile::new(vec![dir(&[3], false, vec![]), dir(&[2, 1], false, vec![]), dir(&[2, 1], false, vec![])]);
        assert_eq!(classify_vertex(&odd), VertexClass::Unrecognized);
    }

    #[test]
    fn class_sizes() {
        assert_eq!(p(&[2, 1, 1]).class().len(), 6);
        assert_eq!(p(&[2, 2]).class().len(), 3);
        assert_eq!(p(&[3, 1]).class().len(), 8);
        assert_eq!(p(&[1, 1, 1]).class().len(), 1);
    }
}
