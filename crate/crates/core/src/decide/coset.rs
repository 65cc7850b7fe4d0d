//! Todd–Coxeter coset enumeration.
//!
//! HLT strategy: cosets are processed in order of definition, every relator
//! is scanned at every coset and gaps are filled by defining new cosets. When
//! the table is full a lookahead pass scans without defining, then dead rows
//! are compacted away. Coincidences are handled with a union-find queue.
//!
//! The Felsch strategy is also available: it fills the first undefined entry
//! and scans the relator cycles through the new edge before defining again.

use std::collections::BTreeMap;

use serde::Serialize;

use super::DecideError;
use crate::perm::Permutation;
use crate::presentation::Presentation;
use crate::word::{Generator, Word};

pub const DEFAULT_MAX_COSETS: usize = 100_000;

const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
pub enum Strategy {
    #[default]
    Hlt,
    Felsch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
pub struct EnumerationStats {
    /// Cosets defined over the whole run.
    pub defined: usize,
    /// Largest number of rows allocated at once.
    pub peak: usize,
    /// Lookahead passes triggered by a full table.
    pub lookaheads: usize,
}

/// A completed coset table: row `c`, column `2*i` holds `c * g_i` and column
/// `2*i + 1` holds `c * g_i^-1`. Row 0 is the subgroup itself.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetTable {
    generators: Vec<Generator>,
    rows: Vec<Vec<u32>>,
    stats: EnumerationStats,
}

impl CosetTable {
    /// Number of cosets, i.e. the subgroup index.
    pub fn index(&self) -> usize {
        self.rows.len()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn stats(&self) -> EnumerationStats {
        self.stats
    }

    /// `c * g` or `c * g^-1`, 0-based.
    pub fn act(&self, coset: usize, generator: usize, inverse: bool) -> usize {
        self.rows[coset][2 * generator + inverse as usize] as usize
    }

    /// Coset reached from `coset` by reading `w` left to right.
    pub fn trace(&self, coset: usize, w: &Word) -> usize {
        let index: BTreeMap<&Generator, usize> = self
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| (g, i))
            .collect();
        w.letters().iter().fold(coset, |c, l| {
            self.act(c, index[l.generator()], l.is_inverse())
        })
    }

    /// Permutation action on cosets: `g` acts as `c -> c * g^-1`, so that a
    /// product of generators maps to the composite of permutations.
    pub fn permutation_representation(&self) -> BTreeMap<Generator, Permutation> {
        self.generators
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let images = self.rows.iter().map(|row| row[2 * i + 1]).collect();
                (g.clone(), Permutation::from_images0(images))
            })
            .collect()
    }
}

/// Index of the subgroup generated by `subgroup` in the group presented by
/// `p`, by HLT enumeration with at most `max_cosets` rows.
pub fn todd_coxeter(
    p: &Presentation,
    subgroup: &[Word],
    max_cosets: usize,
) -> Result<CosetTable, DecideError> {
    enumerate(p, subgroup, max_cosets, Strategy::Hlt)
}

pub fn enumerate(
    p: &Presentation,
    subgroup: &[Word],
    max_cosets: usize,
    strategy: Strategy,
) -> Result<CosetTable, DecideError> {
    if max_cosets == 0 {
        return Err(DecideError::Exhausted {
            max_cosets,
            stats: EnumerationStats::default(),
        });
    }
    let index: BTreeMap<&Generator, usize> = p
        .generators()
        .iter()
        .enumerate()
        .map(|(i, g)| (g, i))
        .collect();
    let encode = |w: &Word| -> Result<Vec<usize>, DecideError> {
        w.letters()
            .iter()
            .map(|l| {
                index
                    .get(l.generator())
                    .map(|&i| 2 * i + l.is_inverse() as usize)
                    .ok_or_else(|| DecideError::UnknownGenerator(l.generator().name().to_string()))
            })
            .collect()
    };
    let relators = p
        .relators()
        .iter()
        .map(encode)
        .collect::<Result<Vec<_>, _>>()?;
    let subgroup = subgroup.iter().map(encode).collect::<Result<Vec<_>, _>>()?;
    let mut e = Enumerator::new(2 * p.generators().len(), relators, max_cosets);
    match strategy {
        Strategy::Hlt => e.run_hlt(&subgroup)?,
        Strategy::Felsch => {
            e.record_deductions = true;
            e.run_felsch(&subgroup)?
        }
    }
    Ok(e.finish(p.generators().to_vec()))
}

struct Full;

struct Enumerator {
    ncols: usize,
    relators: Vec<Vec<usize>>,
    /// For Felsch: (relator, rotation start) pairs indexed by first column.
    cycles_by_col: Vec<Vec<(usize, usize)>>,
    table: Vec<u32>,
    parent: Vec<u32>,
    max_rows: usize,
    queue: Vec<u32>,
    deductions: Vec<(u32, usize)>,
    record_deductions: bool,
    stats: EnumerationStats,
}

impl Enumerator {
    fn new(ncols: usize, relators: Vec<Vec<usize>>, max_rows: usize) -> Self {
        let mut cycles_by_col = vec![Vec::new(); ncols];
        for (ri, r) in relators.iter().enumerate() {
            for start in 0..r.len() {
                cycles_by_col[r[start]].push((ri, start));
                // the inverted cycle read from this position
                cycles_by_col[r[(start + r.len() - 1) % r.len()] ^ 1]
                    .push((ri, usize::MAX - start));
            }
        }
        let mut e = Enumerator {
            ncols,
            relators,
            cycles_by_col,
            table: Vec::new(),
            parent: Vec::new(),
            max_rows,
            queue: Vec::new(),
            deductions: Vec::new(),
            record_deductions: false,
            stats: EnumerationStats::default(),
        };
        e.new_row();
        e
    }

    fn rows(&self) -> usize {
        self.parent.len()
    }

    fn new_row(&mut self) -> u32 {
        let c = self.rows() as u32;
        self.table.extend(std::iter::repeat_n(NONE, self.ncols));
        self.parent.push(c);
        self.stats.defined += 1;
        self.stats.peak = self.stats.peak.max(self.rows());
        c
    }

    #[inline]
    fn get(&self, c: u32, x: usize) -> u32 {
        self.table[c as usize * self.ncols + x]
    }

    #[inline]
    fn set(&mut self, c: u32, x: usize, d: u32) {
        self.table[c as usize * self.ncols + x] = d;
    }

    fn is_live(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn define(&mut self, c: u32, x: usize) -> Result<u32, Full> {
        if self.rows() >= self.max_rows {
            return Err(Full);
        }
        let d = self.new_row();
        self.set(c, x, d);
        self.set(d, x ^ 1, c);
        self.deduce((c, x));
        Ok(d)
    }

    fn deduce(&mut self, entry: (u32, usize)) {
        if self.record_deductions {
            self.deductions.push(entry);
        }
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut x = c;
        while self.parent[x as usize] != r {
            let next = self.parent[x as usize];
            self.parent[x as usize] = r;
            x = next;
        }
        r
    }

    fn merge(&mut self, a: u32, b: u32) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (keep, kill) = if a < b { (a, b) } else { (b, a) };
        self.parent[kill as usize] = keep;
        self.queue.push(kill);
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let dead = self.queue[i];
            i += 1;
            for x in 0..self.ncols {
                let d = self.get(dead, x);
                if d == NONE {
                    continue;
                }
                if self.get(d, x ^ 1) == dead {
                    self.set(d, x ^ 1, NONE);
                }
                let mu = self.rep(dead);
                let nu = self.rep(d);
                let mx = self.get(mu, x);
                if mx != NONE {
                    self.merge(nu, mx);
                } else {
                    let nx = self.get(nu, x ^ 1);
                    if nx != NONE {
                        self.merge(mu, nx);
                    } else {
                        self.set(mu, x, nu);
                        self.set(nu, x ^ 1, mu);
                        self.deduce((mu, x));
                    }
                }
            }
        }
    }

    /// Scans `w` at coset `c`. With `fill` set, gaps are closed by defining
    /// new cosets; otherwise only deductions and coincidences are recorded.
    fn scan(&mut self, c: u32, w: &[usize], fill: bool) -> Result<(), Full> {
        if w.is_empty() {
            return Ok(());
        }
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, w.len() as isize - 1);
        loop {
            while (i as isize) <= j {
                let n = self.get(f, w[i]);
                if n == NONE {
                    break;
                }
                f = n;
                i += 1;
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i as isize {
                let n = self.get(b, w[j as usize] ^ 1);
                if n == NONE {
                    break;
                }
                b = n;
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i as isize {
                self.set(f, w[i], b);
                self.set(b, w[i] ^ 1, f);
                self.deduce((f, w[i]));
                return Ok(());
            }
            if !fill {
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }

    /// Lookahead over every live coset, then compaction. Returns the new
    /// position of the first live coset at or after `current`.
    fn make_room(&mut self, current: u32) -> Result<u32, DecideError> {
        self.stats.lookaheads += 1;
        let mut c = 0u32;
        while (c as usize) < self.rows() {
            if self.is_live(c) {
                for ri in 0..self.relators.len() {
                    let r = std::mem::take(&mut self.relators[ri]);
                    let _ = self.scan(c, &r, false);
                    self.relators[ri] = r;
                    if !self.is_live(c) {
                        break;
                    }
                }
            }
            c += 1;
        }
        let current = self.compact(current);
        if self.rows() >= self.max_rows {
            return Err(DecideError::Exhausted {
                max_cosets: self.max_rows,
                stats: self.stats,
            });
        }
        Ok(current)
    }

    /// Renumbers live cosets in order, dropping dead rows.
    fn compact(&mut self, current: u32) -> u32 {
        let n = self.rows();
        let mut map = vec![NONE; n];
        let mut next = 0u32;
        for c in 0..n {
            if self.parent[c] == c as u32 {
                map[c] = next;
                next += 1;
            }
        }
        let new_current = (current as usize..n)
            .find(|&c| map[c] != NONE)
            .map_or(next, |c| map[c]);
        let mut table = Vec::with_capacity(next as usize * self.ncols);
        for c in 0..n {
            if map[c] == NONE {
                continue;
            }
            for x in 0..self.ncols {
                let d = self.table[c * self.ncols + x];
                table.push(if d == NONE { NONE } else { map[d as usize] });
            }
        }
        self.table = table;
        self.parent = (0..next).collect();
        self.deductions.clear();
        new_current
    }

    fn run_hlt(&mut self, subgroup: &[Vec<usize>]) -> Result<(), DecideError> {
        for w in subgroup {
            while self.scan(0, w, true).is_err() {
                self.make_room(0)?;
            }
        }
        let mut c = 0u32;
        'outer: while (c as usize) < self.rows() {
            if !self.is_live(c) {
                c += 1;
                continue;
            }
            for ri in 0..self.relators.len() {
                let r = std::mem::take(&mut self.relators[ri]);
                let res = self.scan(c, &r, true);
                self.relators[ri] = r;
                if res.is_err() {
                    c = self.make_room(c)?;
                    continue 'outer;
                }
                if !self.is_live(c) {
                    c += 1;
                    continue 'outer;
                }
            }
            for x in 0..self.ncols {
                if self.get(c, x) == NONE && self.define(c, x).is_err() {
                    c = self.make_room(c)?;
                    continue 'outer;
                }
            }
            c += 1;
            if c as usize == self.rows() && !self.is_closed() {
                // Late coincidences can reopen rows already processed.
                c = 0;
            }
        }
        Ok(())
    }

    /// Processes pending deductions by scanning every relator cycle that
    /// starts along the deduced edge.
    fn process_deductions(&mut self) {
        while let Some((c, x)) = self.deductions.pop() {
            if !self.is_live(c) {
                continue;
            }
            let cycles = std::mem::take(&mut self.cycles_by_col[x]);
            for &(ri, code) in &cycles {
                let r = &self.relators[ri];
                let word: Vec<usize> = if code <= r.len() {
                    (0..r.len()).map(|k| r[(code + k) % r.len()]).collect()
                } else {
                    // inverse of the rotation ending just before `start`
                    let start = usize::MAX - code;
                    (0..r.len())
                        .map(|k| r[(start + 2 * r.len() - 1 - k) % r.len()] ^ 1)
                        .collect()
                };
                let _ = self.scan(c, &word, false);
                if !self.is_live(c) {
                    break;
                }
            }
            self.cycles_by_col[x] = cycles;
            if self.deductions.len() > 100_000 {
                // Too many pending; a full pass picks the rest up.
                self.deductions.clear();
                self.full_scan();
            }
        }
    }

    fn full_scan(&mut self) {
        for c in 0..self.rows() as u32 {
            if !self.is_live(c) {
                continue;
            }
            for ri in 0..self.relators.len() {
                let r = std::mem::take(&mut self.relators[ri]);
                let _ = self.scan(c, &r, false);
                self.relators[ri] = r;
                if !self.is_live(c) {
                    break;
                }
            }
        }
    }

    fn run_felsch(&mut self, subgroup: &[Vec<usize>]) -> Result<(), DecideError> {
        for w in subgroup {
            while self.scan(0, w, true).is_err() {
                self.make_room(0)?;
            }
        }
        loop {
            self.full_scan();
            self.process_deductions();
            let mut c = 0u32;
            while (c as usize) < self.rows() {
                if !self.is_live(c) {
                    c += 1;
                    continue;
                }
                match (0..self.ncols).find(|&x| self.get(c, x) == NONE) {
                    None => c += 1,
                    Some(x) => {
                        if self.define(c, x).is_err() {
                            c = self.make_room(c)?;
                            continue;
                        }
                        self.process_deductions();
                    }
                }
            }
            if self.is_closed() {
                return Ok(());
            }
        }
    }

    /// Every live row is total and every relator closes at every coset.
    fn is_closed(&mut self) -> bool {
        for c in 0..self.rows() as u32 {
            if !self.is_live(c) {
                continue;
            }
            if (0..self.ncols).any(|x| self.get(c, x) == NONE) {
                return false;
            }
            for r in &self.relators {
                let end = r.iter().try_fold(c, |d, &x| {
                    let n = self.get(d, x);
                    (n != NONE).then_some(n)
                });
                if end != Some(c) {
                    return false;
                }
            }
        }
        true
    }

    fn finish(mut self, generators: Vec<Generator>) -> CosetTable {
        self.compact(0);
        let rows = if self.ncols == 0 {
            vec![Vec::new(); self.rows()]
        } else {
            self.table.chunks(self.ncols).map(<[u32]>::to_vec).collect()
        };
        CosetTable {
            generators,
            rows,
            stats: self.stats,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::perm::evaluate_word;

    fn order(text: &str) -> usize {
        let p = Presentation::parse(text).unwrap();
        todd_coxeter(&p, &[], DEFAULT_MAX_COSETS).unwrap().index()
    }

    #[test]
    fn small_groups() {
        assert_eq!(order("< X | X^5 >"), 5);
        assert_eq!(order("< X | X >"), 1);
        assert_eq!(order("< P, Q, R | P, Q, R >"), 1);
        assert_eq!(order("< a, b | a^2, b^3, (a*b)^3 >"), 12);
        assert_eq!(order("< a, b | a^2, b^3, (a*b)^4 >"), 24);
        assert_eq!(order("< a, b | a^2, b^3, (a*b)^5 >"), 60);
        assert_eq!(order("< a, b | a^4, b^2, (a*b)^2 >"), 8);
        assert_eq!(order("< | >"), 1);
    }

    #[test]
    fn subgroup_index() {
        let p = Presentation::parse("< a, b | a^2, b^3, (a*b)^5 >").unwrap();
        let t = todd_coxeter(&p, &[p.word("b").unwrap()], 1000).unwrap();
        assert_eq!(t.index(), 20);
        let t = todd_coxeter(&p, &[p.word("a").unwrap(), p.word("b").unwrap()], 1000).unwrap();
        assert_eq!(t.index(), 1);
    }

    #[test]
    fn exhausted_is_reported() {
        let p = Presentation::parse("< a, b | >").unwrap();
        assert!(matches!(
            todd_coxeter(&p, &[], 500),
            Err(DecideError::Exhausted {
                max_cosets: 500,
                ..
            })
        ));
        let p = Presentation::parse("< X | X^5 >").unwrap();
        assert!(matches!(
            todd_coxeter(&p, &[], 3),
            Err(DecideError::Exhausted { .. })
        ));
    }

    #[test]
    fn poincare_orders() {
        for p in [
            corpus::poincare_six_relator(),
            corpus::poincare_two_generator(),
            corpus::poincare_ab(),
        ] {
            let t = todd_coxeter(&p, &[], DEFAULT_MAX_COSETS).unwrap();
            assert_eq!(t.index(), 120, "{p}");
        }
    }

    #[test]
    fn puzzle_is_trivial() {
        let t = todd_coxeter(&corpus::puzzle(), &[], DEFAULT_MAX_COSETS).unwrap();
        assert_eq!(t.index(), 1);
    }

    #[test]
    fn felsch_agrees() {
        for (p, n) in [
            (corpus::poincare_ab(), 120),
            (corpus::puzzle(), 1),
            (
                Presentation::parse("< a, b | a^2, b^3, (a*b)^5 >").unwrap(),
                60,
            ),
        ] {
            let t = enumerate(&p, &[], DEFAULT_MAX_COSETS, Strategy::Felsch).unwrap();
            assert_eq!(t.index(), n, "{p}");
        }
    }

    #[test]
    fn coset_action_satisfies_relators() {
        let p = corpus::poincare_ab();
        let t = todd_coxeter(&p, &[], DEFAULT_MAX_COSETS).unwrap();
        let rep = t.permutation_representation();
        for r in p.relators() {
            assert!(evaluate_word(r, &rep).unwrap().is_identity());
        }
        // regular action: only the identity fixes coset 0
        let w = p.word("A^-1*B").unwrap();
        assert_ne!(t.trace(0, &w), 0);
    }
}
