//! Permutations of `{1..n}` in cycle notation and small permutation groups.
//!
//! Composition is right-to-left, as for functions: `compose(p, q)` applies
//! `q` first and then `p`. Under this convention `(135)∘(12)(34) = (12345)`,
//! and [`evaluate_word`] sends a product `u*v` to `compose(eval(u), eval(v))`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::presentation::Presentation;
use crate::word::{Generator, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("point {0} appears more than once")]
    RepeatedPoint(usize),
    #[error("point {point} is outside 1..={degree}")]
    OutOfRange { point: usize, degree: usize },
    #[error("cycle syntax error: {0}")]
    Syntax(String),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("no permutation assigned to generator {0}")]
    MissingAssignment(String),
}

/// A bijection of `{1..n}`, stored 0-based.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree).map(|i| i as u32).collect(),
        }
    }

    /// From 1-based images: `images[i-1]` is the image of `i`.
    pub fn from_images(images: &[usize]) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in images {
            if x == 0 || x > n {
                return Err(PermError::OutOfRange {
                    point: x,
                    degree: n,
                });
            }
            if std::mem::replace(&mut seen[x - 1], true) {
                return Err(PermError::RepeatedPoint(x));
            }
        }
        Ok(Permutation {
            images: images.iter().map(|&x| (x - 1) as u32).collect(),
        })
    }

    /// Parses disjoint cycles such as `(153)`, `(23)(45)` or `(1)`. Points
    /// may be separated by commas or spaces, which is required above 9.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut seen = BTreeSet::new();
        let mut rest = text.trim();
        if rest.is_empty() {
            return Err(PermError::Syntax("empty input".into()));
        }
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| PermError::Syntax(format!("expected '(' at {rest:?}")))?;
            let close = body
                .find(')')
                .ok_or_else(|| PermError::Syntax("missing ')'".into()))?;
            let inner = &body[..close];
            rest = body[close + 1..].trim_start();

            let points: Vec<usize> = if inner.contains([',', ' ']) {
                inner
                    .split([',', ' '])
                    .filter(|s| !s.is_empty())
                    .map(|s| {
                        s.parse()
                            .map_err(|_| PermError::Syntax(format!("bad point {s:?}")))
                    })
                    .collect::<Result<_, _>>()?
            } else {
                inner
                    .chars()
                    .map(|c| {
                        c.to_digit(10)
                            .map(|d| d as usize)
                            .ok_or_else(|| PermError::Syntax(format!("bad point {c:?}")))
                    })
                    .collect::<Result<_, _>>()?
            };
            if points.is_empty() {
                return Err(PermError::Syntax("empty cycle".into()));
            }
            for &p in &points {
                if p == 0 || p > degree {
                    return Err(PermError::OutOfRange { point: p, degree });
                }
                if !seen.insert(p) {
                    return Err(PermError::RepeatedPoint(p));
                }
            }
            for (i, &p) in points.iter().enumerate() {
                images[p - 1] = points[(i + 1) % points.len()] - 1;
            }
        }
        Ok(Permutation {
            images: images.into_iter().map(|x| x as u32).collect(),
        })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 1-based point `x`.
    pub fn apply(&self, x: usize) -> usize {
        self.images[x - 1] as usize + 1
    }

    pub(crate) fn from_images0(images: Vec<u32>) -> Self {
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &x)| i == x as usize)
    }

    /// `p∘q`: apply `q`, then `p`.
    pub fn compose(&self, q: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != q.degree() {
            return Err(PermError::DegreeMismatch(self.degree(), q.degree()));
        }
        Ok(self.compose_unchecked(q))
    }

    pub(crate) fn compose_unchecked(&self, q: &Permutation) -> Permutation {
        Permutation {
            images: q.images.iter().map(|&x| self.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u32;
        }
        Permutation { images }
    }

    pub fn power(&self, k: i64) -> Permutation {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut result = Permutation::identity(self.degree());
        let mut sq = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = result.compose_unchecked(&sq);
            }
            sq = sq.compose_unchecked(&sq);
            e >>= 1;
        }
        result
    }

    /// Disjoint cycles of length at least 2, each starting at its smallest
    /// point, sorted by that point. Points are 1-based.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.images[x] as usize;
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    pub fn is_even(&self) -> bool {
        self.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
    }

    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .fold(1u64, |acc, c| num_integer::lcm(acc, c.len() as u64))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("(1)");
        }
        let sep = if self.degree() > 9 { "," } else { "" };
        for c in cycles {
            let pts: Vec<String> = c.iter().map(ToString::to_string).collect();
            write!(f, "({})", pts.join(sep))?;
        }
        Ok(())
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A permutation group with all its elements listed in sorted order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
}

impl PermutationGroup {
    /// Breadth-first closure of the generators under right multiplication.
    pub fn closure(degree: usize, generators: &[Permutation]) -> Result<Self, PermError> {
        for g in generators {
            if g.degree() != degree {
                return Err(PermError::DegreeMismatch(degree, g.degree()));
            }
        }
        let id = Permutation::identity(degree);
        let mut seen = BTreeSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in generators {
                let y = x.compose_unchecked(g);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        Ok(PermutationGroup {
            degree,
            generators: generators.to_vec(),
            elements: seen.into_iter().collect(),
        })
    }

    pub fn symmetric(degree: usize) -> Self {
        let mut gens = Vec::new();
        if degree >= 2 {
            let mut t: Vec<usize> = (1..=degree).collect();
            t.swap(0, 1);
            gens.push(Permutation::from_images(&t).unwrap());
            let cycle: Vec<usize> = (1..=degree).map(|i| i % degree + 1).collect();
            gens.push(Permutation::from_images(&cycle).unwrap());
        }
        PermutationGroup::closure(degree, &gens).unwrap()
    }

    /// Even permutations, generated by the 3-cycles `(1 2 k)`.
    pub fn alternating(degree: usize) -> Self {
        let gens: Vec<Permutation> = (3..=degree)
            .map(|k| {
                let mut img: Vec<usize> = (1..=degree).collect();
                img[0] = 2;
                img[1] = k;
                img[k - 1] = 1;
                Permutation::from_images(&img).unwrap()
            })
            .collect();
        PermutationGroup::closure(degree, &gens).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// All elements, sorted by their image arrays.
    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.elements.binary_search(p).ok()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.index_of(p).is_some()
    }
}

/// Substitutes permutations for generators and multiplies. The degree is
/// taken from the assignment; with an empty assignment only the identity
/// word can be evaluated.
pub fn evaluate_word(
    w: &Word,
    assignment: &BTreeMap<Generator, Permutation>,
) -> Result<Permutation, PermError> {
    let degree = assignment.values().next().map_or(0, Permutation::degree);
    for p in assignment.values() {
        if p.degree() != degree {
            return Err(PermError::DegreeMismatch(degree, p.degree()));
        }
    }
    let mut result = Permutation::identity(degree);
    for letter in w.letters() {
        let p = assignment
            .get(letter.generator())
            .ok_or_else(|| PermError::MissingAssignment(letter.generator().name().to_string()))?;
        result = if letter.is_inverse() {
            result.compose_unchecked(&p.inverse())
        } else {
            result.compose_unchecked(p)
        };
    }
    Ok(result)
}

/// True when every relator of `p` evaluates to the identity.
pub fn check_relations(
    p: &Presentation,
    assignment: &BTreeMap<Generator, Permutation>,
) -> Result<bool, PermError> {
    for g in p.generators() {
        if !assignment.contains_key(g) {
            return Err(PermError::MissingAssignment(g.name().to_string()));
        }
    }
    for r in p.relators() {
        if !evaluate_word(r, assignment)?.is_identity() {
            return Ok(false);
        }
    }
    Ok(true)
}
