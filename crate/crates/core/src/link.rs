//! Oriented link diagrams in PD notation and the presentations read off them.
//!
//! # PD text format
//!
//! * `X[a,b,c,d]` is a crossing. Edge labels are listed counterclockwise
//!   starting from the incoming under-edge, so the under-strand runs `a -> c`
//!   and the over-strand joins `b` and `d`.
//! * `O[k]` is a circle without crossings, labelled `k`.
//! * `N[k,Name]` names the Wirtinger generator of the strand containing edge
//!   `k`. Named strands come first in the generator list, in `N` order.
//! * `#` starts a comment. Tokens may be separated by whitespace or commas,
//!   and the whole list may be wrapped in `PD[...]`.
//!
//! Orientation of each component is read off its under-crossings (edge `a`
//! enters, edge `c` leaves). A component that never passes under anything is
//! oriented so that edge labels increase along it.
//!
//! # Conventions
//!
//! A crossing has sign `+1` when the over-strand runs from slot `d` to slot
//! `b` (right-handed) and `-1` when it runs from `b` to `d`.
//!
//! Wirtinger generators are strands: maximal runs of edges joined through
//! over-passages, so a strand is only cut where it goes under. At a crossing
//! of sign `s` with over-strand `y`, incoming under-strand `x` and outgoing
//! under-strand `z`, the relation is `z = y^s x y^-s`.
//!
//! The zero-framed longitude of a component, based at its meridian strand, is
//! the product of `y^s` over the component's under-crossings read backwards
//! from the start of the base strand, followed by `meridian^-w` where `w` is
//! the writhe (sum of self-crossing signs). The `f`-framed surgery curve is
//! `meridian^f * longitude`. With these conventions the bundled Borromean
//! diagram at framing `-1` on every component gives the Poincaré homology
//! sphere presentation with the glue curves `X^-1*U^-1*Z` and its images.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::presentation::Presentation;
use crate::word::{is_valid_name, Generator, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinkError {
    #[error("syntax error on line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("edge {label} occurs {count} times, expected 2")]
    BadArcDegree { label: u32, count: usize },
    #[error("inconsistent orientation at edge {0}")]
    InconsistentOrientation(u32),
    #[error("no generator label for edge {0}")]
    MissingLabel(u32),
    #[error("expected {expected} framings, got {got}")]
    MissingFraming { expected: usize, got: usize },
    #[error("linking number needs two different components, got {0} twice")]
    SameComponent(usize),
    #[error("no component {0}")]
    NoSuchComponent(usize),
    #[error("bad generator name: {0}")]
    BadName(String),
}

/// A crossing with its PD slots and derived orientation data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Crossing {
    slots: [u32; 4],
    sign: i8,
}

impl Crossing {
    pub fn slots(&self) -> [u32; 4] {
        self.slots
    }

    pub fn under_in(&self) -> u32 {
        self.slots[0]
    }

    pub fn under_out(&self) -> u32 {
        self.slots[2]
    }

    pub fn over_in(&self) -> u32 {
        if self.sign > 0 {
            self.slots[3]
        } else {
            self.slots[1]
        }
    }

    pub fn over_out(&self) -> u32 {
        if self.sign > 0 {
            self.slots[1]
        } else {
            self.slots[3]
        }
    }

    /// `+1` right-handed, `-1` left-handed.
    pub fn sign(&self) -> i64 {
        self.sign as i64
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Strand {
    component: usize,
    /// Edges in traversal order.
    edges: Vec<u32>,
    name: Generator,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Component {
    /// Edges in traversal order, starting with the smallest label.
    edges: Vec<u32>,
    /// Index of the strand carrying the distinguished meridian.
    meridian: usize,
}

/// Generator assigned to every edge, plus the distinguished meridian of each
/// component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeridianMap {
    pub edges: BTreeMap<u32, Generator>,
    pub components: Vec<Generator>,
}

impl MeridianMap {
    pub fn get(&self, edge: u32) -> Result<&Generator, LinkError> {
        self.edges.get(&edge).ok_or(LinkError::MissingLabel(edge))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkDiagram {
    crossings: Vec<Crossing>,
    circles: Vec<u32>,
    components: Vec<Component>,
    strands: Vec<Strand>,
    edge_strand: BTreeMap<u32, usize>,
    edge_component: BTreeMap<u32, usize>,
}

// Where an edge meets a crossing: (crossing index, slot index).
type Slot = (usize, usize);

impl LinkDiagram {
    pub fn parse(text: &str) -> Result<LinkDiagram, LinkError> {
        let raw = parse_tokens(text)?;
        LinkDiagram::build(raw)
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    /// Wirtinger arcs: strands between consecutive under-crossings.
    pub fn arc_count(&self) -> usize {
        self.strands.len()
    }

    /// PD edges, i.e. segments between consecutive crossings of any kind.
    pub fn edge_count(&self) -> usize {
        self.edge_strand.len()
    }

    /// Edge labels of component `c` in traversal order.
    pub fn component_edges(&self, c: usize) -> Result<&[u32], LinkError> {
        self.components
            .get(c)
            .map(|comp| comp.edges.as_slice())
            .ok_or(LinkError::NoSuchComponent(c))
    }

    pub fn component_of_edge(&self, edge: u32) -> Option<usize> {
        self.edge_component.get(&edge).copied()
    }

    pub fn meridians(&self) -> MeridianMap {
        MeridianMap {
            edges: self
                .edge_strand
                .iter()
                .map(|(&e, &s)| (e, self.strands[s].name.clone()))
                .collect(),
            components: self
                .components
                .iter()
                .map(|c| self.strands[c.meridian].name.clone())
                .collect(),
        }
    }

    /// One generator per arc, one relator per crossing.
    pub fn wirtinger(&self) -> (Presentation, MeridianMap) {
        let labels = self.meridians();
        let gens = self.strands.iter().map(|s| s.name.clone()).collect();
        let rels = self
            .crossings
            .iter()
            .map(|c| crossing_relator(c, &labels).expect("all edges labelled"))
            .collect();
        let p = Presentation::new(gens, rels).expect("strand names are distinct");
        (p, labels)
    }

    fn strand_of(&self, edge: u32) -> &Strand {
        &self.strands[self.edge_strand[&edge]]
    }

    /// Half the signed count of crossings between two components.
    pub fn linking_number(&self, c1: usize, c2: usize) -> Result<i64, LinkError> {
        for c in [c1, c2] {
            if c >= self.components.len() {
                return Err(LinkError::NoSuchComponent(c));
            }
        }
        if c1 == c2 {
            return Err(LinkError::SameComponent(c1));
        }
        let total: i64 = self
            .crossings
            .iter()
            .filter(|x| {
                let under = self.edge_component[&x.under_in()];
                let over = self.edge_component[&x.over_in()];
                (under == c1 && over == c2) || (under == c2 && over == c1)
            })
            .map(Crossing::sign)
            .sum();
        Ok(total / 2)
    }

    /// Sum of the signs of the crossings of component `c` with itself.
    pub fn writhe(&self, c: usize) -> Result<i64, LinkError> {
        if c >= self.components.len() {
            return Err(LinkError::NoSuchComponent(c));
        }
        Ok(self
            .crossings
            .iter()
            .filter(|x| {
                self.edge_component[&x.under_in()] == c && self.edge_component[&x.over_in()] == c
            })
            .map(Crossing::sign)
            .sum())
    }

    /// Longitude of component `c` with linking number zero against `c`,
    /// written in the Wirtinger generators and based at the component's
    /// distinguished meridian.
    pub fn zero_framed_longitude(&self, c: usize) -> Result<Word, LinkError> {
        let comp = self
            .components
            .get(c)
            .ok_or(LinkError::NoSuchComponent(c))?;
        let base = &self.strands[comp.meridian];
        let start = comp
            .edges
            .iter()
            .position(|e| *e == base.edges[0])
            .expect("base strand lies on its component");
        let n = comp.edges.len();
        // Under-crossings met walking forward from the start of the base strand.
        let mut met: Vec<&Crossing> = Vec::new();
        for k in 0..n {
            let e = comp.edges[(start + k) % n];
            if let Some(x) = self.crossings.iter().find(|x| x.under_in() == e) {
                met.push(x);
            }
        }
        let mut letters = Vec::new();
        for x in met.iter().rev() {
            let over = self.strand_of(x.over_in()).name.clone();
            letters.extend(Word::power_of(&over, x.sign()).letters().iter().cloned());
        }
        let w = self.writhe(c)?;
        letters.extend(Word::power_of(&base.name, -w).letters().iter().cloned());
        Ok(Word::from_letters(letters))
    }

    /// `meridian^f * longitude` for every component.
    pub fn surgery_relators(&self, framings: &[i64]) -> Result<Vec<Word>, LinkError> {
        if framings.len() != self.components.len() {
            return Err(LinkError::MissingFraming {
                expected: self.components.len(),
                got: framings.len(),
            });
        }
        let meridians = self.meridians().components;
        framings
            .iter()
            .enumerate()
            .map(|(c, &f)| {
                let lambda = self.zero_framed_longitude(c)?;
                Ok(Word::power_of(&meridians[c], f).concat(&lambda))
            })
            .collect()
    }

    /// Wirtinger presentation plus one surgery relator per component.
    pub fn surgery_presentation(&self, framings: &[i64]) -> Result<Presentation, LinkError> {
        let rels = self.surgery_relators(framings)?;
        let (p, _) = self.wirtinger();
        Ok(p.add_relators(&rels)
            .expect("relators use Wirtinger generators"))
    }

    /// Like [`surgery_presentation`](Self::surgery_presentation), but the
    /// Wirtinger part is simplified first and the surgery relators rewritten
    /// through the same eliminations.
    pub fn simplified_surgery_presentation(
        &self,
        framings: &[i64],
    ) -> Result<Presentation, LinkError> {
        let rels = self.surgery_relators(framings)?;
        let (p, _) = self.wirtinger();
        let (simple, subst) = p.simplify();
        let rels: Vec<Word> = rels.iter().map(|r| r.substitute(&subst)).collect();
        Ok(simple
            .add_relators(&rels)
            .expect("substitution lands in survivors"))
    }

    fn build(raw: RawDiagram) -> Result<LinkDiagram, LinkError> {
        // Every edge label must occur exactly twice among crossing slots.
        let mut appearances: BTreeMap<u32, Vec<Slot>> = BTreeMap::new();
        for (ci, slots) in raw.crossings.iter().enumerate() {
            for (si, &e) in slots.iter().enumerate() {
                appearances.entry(e).or_default().push((ci, si));
            }
        }
        for (&label, occ) in &appearances {
            if occ.len() != 2 {
                return Err(LinkError::BadArcDegree {
                    label,
                    count: occ.len(),
                });
            }
        }
        let mut circle_set = BTreeSet::new();
        for &k in &raw.circles {
            if appearances.contains_key(&k) || !circle_set.insert(k) {
                return Err(LinkError::BadArcDegree { label: k, count: 3 });
            }
        }

        let heads = orient(&raw.crossings, &appearances)?;

        // Walk components: enter at head slot, leave through the opposite slot.
        let edge_at = |(ci, si): Slot| raw.crossings[ci][si];
        let mut components: Vec<Vec<u32>> = Vec::new();
        let mut edge_component = BTreeMap::new();
        for &e0 in appearances.keys() {
            if edge_component.contains_key(&e0) {
                continue;
            }
            let idx = components.len();
            let mut edges = Vec::new();
            let mut e = e0;
            loop {
                if edge_component.insert(e, idx).is_some() {
                    return Err(LinkError::InconsistentOrientation(e));
                }
                edges.push(e);
                let (ci, si) = heads[&e];
                e = edge_at((ci, (si + 2) % 4));
                if e == e0 {
                    break;
                }
            }
            components.push(edges);
        }
        for &k in &raw.circles {
            edge_component.insert(k, components.len());
            components.push(vec![k]);
        }
        // order components by their smallest edge label
        let mut order: Vec<usize> = (0..components.len()).collect();
        order.sort_by_key(|&i| components[i].iter().min().copied());
        let mut remap = vec![0; components.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        let mut components: Vec<Vec<u32>> = order.iter().map(|&i| components[i].clone()).collect();
        for c in edge_component.values_mut() {
            *c = remap[*c];
        }
        for edges in &mut components {
            let m = edges.iter().enumerate().min_by_key(|(_, e)| **e).unwrap().0;
            edges.rotate_left(m);
        }

        // Signs from the over-strand direction.
        let crossings: Vec<Crossing> = raw
            .crossings
            .iter()
            .enumerate()
            .map(|(ci, slots)| {
                let sign = if heads[&slots[3]] == (ci, 3) { 1 } else { -1 };
                Crossing {
                    slots: *slots,
                    sign,
                }
            })
            .collect();

        // Strands: cut each component at the edges leaving an under-crossing.
        let under_out: BTreeSet<u32> = crossings.iter().map(Crossing::under_out).collect();
        let mut pieces: Vec<(usize, Vec<u32>)> = Vec::new();
        for (c, edges) in components.iter().enumerate() {
            let cut = edges.iter().position(|e| under_out.contains(e));
            let Some(first) = cut else {
                pieces.push((c, edges.clone()));
                continue;
            };
            let n = edges.len();
            let mut current: Vec<u32> = Vec::new();
            for k in 0..n {
                let e = edges[(first + k) % n];
                if under_out.contains(&e) && !current.is_empty() {
                    pieces.push((c, std::mem::take(&mut current)));
                }
                current.push(e);
            }
            pieces.push((c, current));
        }

        let mut edge_piece = BTreeMap::new();
        for (i, (_, edges)) in pieces.iter().enumerate() {
            for &e in edges {
                edge_piece.insert(e, i);
            }
        }
        let mut names: BTreeMap<usize, String> = BTreeMap::new();
        let mut named_order: Vec<usize> = Vec::new();
        for (edge, name) in &raw.names {
            let &piece = edge_piece.get(edge).ok_or(LinkError::MissingLabel(*edge))?;
            if !is_valid_name(name) {
                return Err(LinkError::BadName(name.clone()));
            }
            match names.get(&piece) {
                Some(existing) if existing != name => {
                    return Err(LinkError::BadName(format!(
                        "edge {edge} is on strand {existing}, cannot rename to {name}"
                    )))
                }
                Some(_) => {}
                None => {
                    names.insert(piece, name.clone());
                    named_order.push(piece);
                }
            }
        }
        let mut unnamed: Vec<usize> = (0..pieces.len())
            .filter(|i| !names.contains_key(i))
            .collect();
        unnamed.sort_by_key(|&i| pieces[i].1.iter().min().copied());
        let taken: BTreeSet<String> = names.values().cloned().collect();
        if taken.len() != names.len() {
            return Err(LinkError::BadName("two strands share a name".into()));
        }
        let mut counter = 0;
        for &i in &unnamed {
            let name = loop {
                counter += 1;
                let candidate = format!("x{counter}");
                if !taken.contains(&candidate) {
                    break candidate;
                }
            };
            names.insert(i, name);
        }

        let mut strands = Vec::new();
        let mut edge_strand = BTreeMap::new();
        for &i in named_order.iter().chain(unnamed.iter()) {
            let (component, edges) = pieces[i].clone();
            let name = Generator::new(&names[&i]).map_err(|e| LinkError::BadName(e.to_string()))?;
            for &e in &edges {
                edge_strand.insert(e, strands.len());
            }
            strands.push(Strand {
                component,
                edges,
                name,
            });
        }

        let components = components
            .into_iter()
            .map(|edges| {
                let meridian = edge_strand[&edges[0]];
                Component { edges, meridian }
            })
            .collect();

        Ok(LinkDiagram {
            crossings,
            circles: raw.circles,
            components,
            strands,
            edge_strand,
            edge_component,
        })
    }
}

/// The relator `out^-1 * over_out^s * in * over_in^-s` of one crossing.
///
/// With Wirtinger labels both over-edges carry the same generator. Labelling
/// the four loops around a crossing separately gives the general
/// four-letter pattern.
pub fn crossing_relator(c: &Crossing, labels: &MeridianMap) -> Result<Word, LinkError> {
    let input = labels.get(c.under_in())?;
    let output = labels.get(c.under_out())?;
    let over_in = labels.get(c.over_in())?;
    let over_out = labels.get(c.over_out())?;
    let s = c.sign();
    Ok(output
        .word()
        .invert()
        .concat(&Word::power_of(over_out, s))
        .concat(&input.word())
        .concat(&Word::power_of(over_in, -s)))
}

/// For every edge, the slot where it enters a crossing.
fn orient(
    crossings: &[[u32; 4]],
    appearances: &BTreeMap<u32, Vec<Slot>>,
) -> Result<BTreeMap<u32, Slot>, LinkError> {
    let mut heads: BTreeMap<u32, Slot> = BTreeMap::new();
    let mut tails: BTreeMap<u32, Slot> = BTreeMap::new();
    let mut queue: Vec<(u32, Slot, bool)> = Vec::new();
    for (ci, slots) in crossings.iter().enumerate() {
        queue.push((slots[0], (ci, 0), true));
        queue.push((slots[2], (ci, 2), false));
    }

    let assign = |queue: &mut Vec<(u32, Slot, bool)>,
                  heads: &mut BTreeMap<u32, Slot>,
                  tails: &mut BTreeMap<u32, Slot>|
     -> Result<(), LinkError> {
        while let Some((e, slot, is_head)) = queue.pop() {
            let (mine, theirs) = if is_head {
                (&mut *heads, &mut *tails)
            } else {
                (&mut *tails, &mut *heads)
            };
            match mine.get(&e) {
                Some(s) if *s == slot => continue,
                Some(_) => return Err(LinkError::InconsistentOrientation(e)),
                None => {}
            }
            if theirs.get(&e) == Some(&slot) {
                return Err(LinkError::InconsistentOrientation(e));
            }
            mine.insert(e, slot);
            let other = appearances[&e]
                .iter()
                .copied()
                .find(|s| *s != slot)
                .expect("two appearances");
            queue.push((e, other, !is_head));
            // Over-passages carry the orientation across the crossing.
            let (ci, si) = slot;
            if si % 2 == 1 {
                let partner = (ci, (si + 2) % 4);
                queue.push((crossings[ci][partner.1], partner, !is_head));
            }
        }
        Ok(())
    };

    assign(&mut queue, &mut heads, &mut tails)?;

    // Components that never pass under anything: orient by label order.
    loop {
        let Some((&e, occ)) = appearances.iter().find(|(e, _)| !heads.contains_key(e)) else {
            break;
        };
        // Edges of this component, found by walking through the crossings.
        let mut members = BTreeSet::from([e]);
        let mut stack = vec![e];
        while let Some(f) = stack.pop() {
            for &(ci, si) in &appearances[&f] {
                let g = crossings[ci][(si + 2) % 4];
                if members.insert(g) {
                    stack.push(g);
                }
            }
        }
        let succ = members
            .range(e + 1..)
            .next()
            .or_else(|| members.iter().next())
            .copied()
            .unwrap_or(e);
        let head = occ
            .iter()
            .copied()
            .find(|&(ci, si)| crossings[ci][(si + 2) % 4] == succ)
            .unwrap_or(occ[0]);
        queue.push((e, head, true));
        assign(&mut queue, &mut heads, &mut tails)?;
    }
    Ok(heads)
}

#[derive(Default)]
struct RawDiagram {
    crossings: Vec<[u32; 4]>,
    circles: Vec<u32>,
    names: Vec<(u32, String)>,
}

fn parse_tokens(text: &str) -> Result<RawDiagram, LinkError> {
    let mut raw = RawDiagram::default();
    for (lineno, line) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let err = |msg: String| LinkError::Syntax { line: line_no, msg };
        let content = line.split('#').next().unwrap_or("");
        let mut rest = content.trim();
        // tolerate a PD[ ... ] wrapper split over lines
        if let Some(r) = rest.strip_prefix("PD[") {
            rest = r.trim_start();
        }
        loop {
            rest = rest.trim_start_matches(|c: char| c.is_whitespace() || c == ',' || c == ']');
            if rest.is_empty() {
                break;
            }
            let kind = rest.chars().next().unwrap();
            let body_start = rest
                .strip_prefix(kind)
                .and_then(|r| r.strip_prefix('['))
                .ok_or_else(|| err(format!("unexpected input {rest:?}")))?;
            let close = body_start
                .find(']')
                .ok_or_else(|| err("missing ']'".to_string()))?;
            let body = &body_start[..close];
            rest = &body_start[close + 1..];
            let fields: Vec<&str> = body.split(',').map(str::trim).collect();
            let num = |s: &str| {
                s.parse::<u32>()
                    .map_err(|_| err(format!("expected an edge label, got {s:?}")))
            };
            match kind {
                'X' => {
                    if fields.len() != 4 {
                        return Err(err(format!(
                            "crossing needs 4 labels, got {}",
                            fields.len()
                        )));
                    }
                    let mut slots = [0u32; 4];
                    for (i, f) in fields.iter().enumerate() {
                        slots[i] = num(f)?;
                    }
                    raw.crossings.push(slots);
                }
                'O' => {
                    if fields.len() != 1 {
                        return Err(err("circle takes one label".to_string()));
                    }
                    raw.circles.push(num(fields[0])?);
                }
                'N' => {
                    if fields.len() != 2 {
                        return Err(err("name takes an edge label and a name".to_string()));
                    }
                    raw.names.push((num(fields[0])?, fields[1].to_string()));
                }
                other => return Err(err(format!("unknown token {other}[...]"))),
            }
        }
    }
    Ok(raw)
}
