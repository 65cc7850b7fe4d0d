//! Exhaustive search for homomorphisms into a finite permutation group.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::coset::{todd_coxeter, EnumerationStats};
use super::DecideError;
use crate::perm::{Permutation, PermutationGroup};
use crate::presentation::Presentation;
use crate::smith::AbelianGroupDescriptor;
use crate::word::Generator;

/// Largest number of generator assignments scanned before giving up.
pub const DEFAULT_CANDIDATE_BUDGET: u128 = 100_000_000;

// Multiplication tables above this many elements are not built.
const MAX_TARGET_ORDER: usize = 5000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homomorphism {
    pub source: Presentation,
    pub target_degree: usize,
    /// Images of the source generators, in generator order.
    pub images: Vec<(Generator, Permutation)>,
    pub surjective: bool,
    /// Order of the subgroup generated by the images.
    pub image_order: usize,
}

impl Homomorphism {
    pub fn assignment(&self) -> BTreeMap<Generator, Permutation> {
        self.images.iter().cloned().collect()
    }

    /// `A->(153), B->(12)(34)`
    pub fn assignment_text(&self) -> String {
        let parts: Vec<String> = self
            .images
            .iter()
            .map(|(g, p)| format!("{}->{}", g.name(), p))
            .collect();
        parts.join(", ")
    }
}

impl Serialize for Homomorphism {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let images: BTreeMap<&str, String> = self
            .images
            .iter()
            .map(|(g, p)| (g.name(), p.to_string()))
            .collect();
        let order: Vec<&str> = self.images.iter().map(|(g, _)| g.name()).collect();
        let mut st = s.serialize_struct("Homomorphism", 6)?;
        st.serialize_field("source", &self.source.to_string())?;
        st.serialize_field("target_degree", &self.target_degree)?;
        st.serialize_field("generators", &order)?;
        st.serialize_field("assignment", &images)?;
        st.serialize_field("surjective", &self.surjective)?;
        st.serialize_field("image_order", &self.image_order)?;
        st.end()
    }
}

/// Index form of a finite group: elements, product table and inverses.
struct Table {
    n: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    identity: u32,
}

impl Table {
    fn new(g: &PermutationGroup) -> Self {
        let els = g.elements();
        let n = els.len();
        let mut mul = Vec::with_capacity(n * n);
        for a in els {
            for b in els {
                let c = a.compose(b).expect("same degree");
                mul.push(g.index_of(&c).expect("group is closed") as u32);
            }
        }
        let inv = els
            .iter()
            .map(|a| g.index_of(&a.inverse()).expect("group is closed") as u32)
            .collect();
        let identity = g
            .index_of(&Permutation::identity(g.degree()))
            .expect("identity present") as u32;
        Table {
            n,
            mul,
            inv,
            identity,
        }
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.n + b as usize]
    }

    fn subgroup_order(&self, gens: &[u32]) -> usize {
        let mut seen = vec![false; self.n];
        seen[self.identity as usize] = true;
        let mut stack = vec![self.identity];
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count
    }
}

/// Every assignment of target elements to the generators of `p` that kills
/// all relators, in lexicographic order of element indices.
pub fn find_homomorphisms(
    p: &Presentation,
    target: &PermutationGroup,
    surjective_only: bool,
) -> Result<Vec<Homomorphism>, DecideError> {
    find_homomorphisms_with_budget(p, target, surjective_only, DEFAULT_CANDIDATE_BUDGET)
}

pub fn find_homomorphisms_with_budget(
    p: &Presentation,
    target: &PermutationGroup,
    surjective_only: bool,
    budget: u128,
) -> Result<Vec<Homomorphism>, DecideError> {
    let ngens = p.generators().len();
    let n = target.order();
    let candidates = (n as u128).checked_pow(ngens as u32).unwrap_or(u128::MAX);
    if candidates > budget || n > MAX_TARGET_ORDER {
        return Err(DecideError::TargetTooLarge { candidates, budget });
    }
    let table = Table::new(target);

    let index: BTreeMap<&Generator, usize> = p
        .generators()
        .iter()
        .enumerate()
        .map(|(i, g)| (g, i))
        .collect();
    // Relators grouped by the last generator they mention, so each is
    // checked as soon as it is fully assigned.
    let mut checks: Vec<Vec<Vec<(usize, bool)>>> = vec![Vec::new(); ngens];
    for r in p.relators() {
        let letters: Vec<(usize, bool)> = r
            .letters()
            .iter()
            .map(|l| (index[l.generator()], l.is_inverse()))
            .collect();
        let last = letters
            .iter()
            .map(|l| l.0)
            .max()
            .expect("relators are nonempty");
        checks[last].push(letters);
    }

    let search = Search {
        table: &table,
        checks: &checks,
        ngens,
    };
    let found: Vec<Vec<u32>> = if ngens == 0 {
        vec![Vec::new()]
    } else {
        (0..n as u32)
            .into_par_iter()
            .map(|first| {
                let mut out = Vec::new();
                let mut current = vec![first];
                search.extend(&mut current, &mut out);
                out
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    };

    let elements = target.elements();
    let mut homs = Vec::new();
    for assignment in found {
        let image_order = table.subgroup_order(&assignment);
        let surjective = image_order == n;
        if surjective_only && !surjective {
            continue;
        }
        homs.push(Homomorphism {
            source: p.clone(),
            target_degree: target.degree(),
            images: p
                .generators()
                .iter()
                .cloned()
                .zip(assignment.iter().map(|&i| elements[i as usize].clone()))
                .collect(),
            surjective,
            image_order,
        });
    }
    Ok(homs)
}

struct Search<'a> {
    table: &'a Table,
    checks: &'a [Vec<Vec<(usize, bool)>>],
    ngens: usize,
}

impl Search<'_> {
    fn holds(&self, assignment: &[u32]) -> bool {
        let k = assignment.len() - 1;
        self.checks[k].iter().all(|r| {
            let value = r.iter().fold(self.table.identity, |acc, &(g, inv)| {
                let x = assignment[g];
                let x = if inv { self.table.inv[x as usize] } else { x };
                self.table.mul(acc, x)
            });
            value == self.table.identity
        })
    }

    fn extend(&self, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if !self.holds(current) {
            return;
        }
        if current.len() == self.ngens {
            out.push(current.clone());
            return;
        }
        for x in 0..self.table.n as u32 {
            current.push(x);
            self.extend(current, out);
            current.pop();
        }
    }
}

/// Evidence about whether a presented group is trivial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// A surjection onto a nontrivial permutation group.
    Surjection {
        target: String,
        homomorphism: Homomorphism,
    },
    /// The abelianization is nontrivial.
    Abelianization {
        h1: AbelianGroupDescriptor,
    },
    /// Coset enumeration closed with a single coset.
    Trivial {
        stats: EnumerationStats,
    },
    Inconclusive {
        reason: String,
    },
}

impl Certificate {
    pub fn is_nontrivial(&self) -> bool {
        matches!(
            self,
            Certificate::Surjection { .. } | Certificate::Abelianization { .. }
        )
    }
}

/// Looks for a surjection onto A5, then at the abelianization, then runs
/// coset enumeration. A finite order above 1 yields the regular
/// representation as the certificate.
pub fn prove_nontrivial(p: &Presentation, max_cosets: usize) -> Certificate {
    let a5 = PermutationGroup::alternating(5);
    if let Ok(homs) = find_homomorphisms(p, &a5, true) {
        if let Some(h) = homs.into_iter().next() {
            return Certificate::Surjection {
                target: "A5".into(),
                homomorphism: h,
            };
        }
    }
    let h1 = p.h1();
    if !h1.is_trivial() {
        return Certificate::Abelianization { h1 };
    }
    match todd_coxeter(p, &[], max_cosets) {
        Ok(t) if t.index() == 1 => Certificate::Trivial { stats: t.stats() },
        Ok(t) => {
            let rep = t.permutation_representation();
            let images: Vec<(Generator, Permutation)> = p
                .generators()
                .iter()
                .map(|g| (g.clone(), rep[g].clone()))
                .collect();
            let perms: Vec<Permutation> = images.iter().map(|(_, q)| q.clone()).collect();
            let order = regular_image_order(t.index(), &perms);
            Certificate::Surjection {
                target: format!("regular representation of order {}", t.index()),
                homomorphism: Homomorphism {
                    source: p.clone(),
                    target_degree: t.index(),
                    images,
                    surjective: true,
                    image_order: order,
                },
            }
        }
        Err(e) => Certificate::Inconclusive {
            reason: e.to_string(),
        },
    }
}

// Orbit of the identity permutation under right multiplication, capped so a
// large regular representation is not materialised twice.
fn regular_image_order(degree: usize, gens: &[Permutation]) -> usize {
    let id = Permutation::identity(degree);
    let mut seen = BTreeSet::from([id.clone()]);
    let mut stack = vec![id];
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = x.compose(g).expect("same degree");
            if seen.insert(y.clone()) {
                stack.push(y);
            }
        }
    }
    seen.len()
}
