//! Free-group words over named generators.
//!
//! A [`Word`] is always kept freely reduced, so two words are equal as group
//! elements of the free group exactly when they are equal as sequences.
//!
//! Text format: letters joined by `*`, each letter a generator name with an
//! optional integer exponent (`X^-1`, `Y^3`), parenthesised sub-words may carry
//! an exponent too (`(A^-1*B)^5`). The identity is spelled `1`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("invalid generator name {0:?}")]
    InvalidName(String),
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
}

/// A named generator. Names are case sensitive.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator(Arc<str>);

impl Generator {
    /// Creates a generator, rejecting names that would not survive the text
    /// formats: a name starts with a letter or `_` and continues with letters,
    /// digits or `_`.
    pub fn new(name: &str) -> Result<Self, WordError> {
        if is_valid_name(name) {
            Ok(Generator(Arc::from(name)))
        } else {
            Err(WordError::InvalidName(name.to_string()))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    pub fn letter(&self) -> Letter {
        Letter::new(self.clone(), false)
    }

    pub fn inverse_letter(&self) -> Letter {
        Letter::new(self.clone(), true)
    }

    /// The one-letter word `self`.
    pub fn word(&self) -> Word {
        Word::from_letters(vec![self.letter()])
    }
}

pub(crate) fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for Generator {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

/// A generator or its inverse.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Letter {
    generator: Generator,
    inverse: bool,
}

impl Letter {
    pub fn new(generator: Generator, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn is_inverse(&self) -> bool {
        self.inverse
    }

    /// `+1` or `-1`.
    pub fn sign(&self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inverse(&self) -> Letter {
        Letter::new(self.generator.clone(), !self.inverse)
    }

    fn cancels(&self, other: &Letter) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }
}

// Generators compare by name; a letter sorts before its inverse.
impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.generator
            .cmp(&other.generator)
            .then(self.inverse.cmp(&other.inverse))
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "{}^-1", self.generator)
        } else {
            write!(f, "{}", self.generator)
        }
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    /// Freely reduces `raw` with a single stack pass.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(raw: I) -> Self {
        let mut letters: Vec<Letter> = Vec::new();
        for l in raw {
            if letters.last().is_some_and(|top| top.cancels(&l)) {
                letters.pop();
            } else {
                letters.push(l);
            }
        }
        Word { letters }
    }

    /// `g^n` for any integer `n`.
    pub fn power_of(g: &Generator, n: i64) -> Self {
        let letter = if n < 0 {
            g.inverse_letter()
        } else {
            g.letter()
        };
        Word {
            letters: vec![letter; n.unsigned_abs() as usize],
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::from_letters(self.letters.iter().chain(other.letters.iter()).cloned())
    }

    pub fn invert(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(Letter::inverse).collect(),
        }
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.invert() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// `self * other * self^-1`.
    pub fn conjugate_by(&self, conjugator: &Word) -> Word {
        conjugator.concat(self).concat(&conjugator.invert())
    }

    /// Signed number of occurrences of `g`.
    pub fn exponent_sum(&self, g: &Generator) -> i64 {
        self.letters
            .iter()
            .filter(|l| l.generator() == g)
            .map(Letter::sign)
            .sum()
    }

    /// Number of occurrences of `g` or `g^-1`.
    pub fn occurrences(&self, g: &Generator) -> usize {
        self.letters.iter().filter(|l| l.generator() == g).count()
    }

    pub fn uses(&self, g: &Generator) -> bool {
        self.letters.iter().any(|l| l.generator() == g)
    }

    /// Generators appearing in the word, in order of first appearance.
    pub fn generators(&self) -> Vec<Generator> {
        let mut seen: Vec<Generator> = Vec::new();
        for l in &self.letters {
            if !seen.contains(l.generator()) {
                seen.push(l.generator().clone());
            }
        }
        seen
    }

    /// Strips matching letter/inverse pairs from the two ends. The result is
    /// conjugate to `self`.
    pub fn cyclically_reduce(&self) -> Word {
        let n = self.letters.len();
        let mut lo = 0;
        let mut hi = n;
        while hi - lo >= 2 && self.letters[lo].cancels(&self.letters[hi - 1]) {
            lo += 1;
            hi -= 1;
        }
        Word {
            letters: self.letters[lo..hi].to_vec(),
        }
    }

    /// Rotation `self[k..] + self[..k]`. Only meaningful on cyclically reduced
    /// words, where the result needs no further reduction.
    pub fn rotate(&self, k: usize) -> Word {
        if self.letters.is_empty() {
            return Word::identity();
        }
        let k = k % self.letters.len();
        let mut letters = self.letters[k..].to_vec();
        letters.extend_from_slice(&self.letters[..k]);
        Word::from_letters(letters)
    }

    /// Canonical representative of the relator class of `self`: cyclically
    /// reduced, then the lexicographically least rotation of the word or of its
    /// inverse.
    pub fn relator_normal_form(&self) -> Word {
        let base = self.cyclically_reduce();
        if base.is_identity() {
            return base;
        }
        let inv = base.invert();
        let n = base.len();
        (0..n)
            .flat_map(|k| [base.rotate(k), inv.rotate(k)])
            .min()
            .expect("nonempty word has rotations")
    }

    /// Replaces each generator by a word, leaving unmapped generators alone.
    pub fn substitute(&self, map: &BTreeMap<Generator, Word>) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for l in &self.letters {
            match map.get(l.generator()) {
                Some(w) if l.is_inverse() => out.extend(w.invert().letters),
                Some(w) => out.extend(w.letters.iter().cloned()),
                None => out.push(l.clone()),
            }
        }
        Word::from_letters(out)
    }

    /// Parses the text format, resolving names with `resolve`.
    pub fn parse_with<F>(text: &str, mut resolve: F) -> Result<Word, WordError>
    where
        F: FnMut(&str) -> Result<Generator, WordError>,
    {
        let mut p = WordParser {
            src: text.as_bytes(),
            pos: 0,
        };
        let w = p.product(&mut resolve)?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(w)
    }

    /// Parses the text format, creating generators for any name seen.
    pub fn parse(text: &str) -> Result<Word, WordError> {
        Word::parse_with(text, Generator::new)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.letters.len() {
            let l = &self.letters[i];
            let mut run = 1;
            while i + run < self.letters.len() && self.letters[i + run] == *l {
                run += 1;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            let exp = run as i64 * l.sign();
            if exp == 1 {
                write!(f, "{}", l.generator())?;
            } else {
                write!(f, "{}^{}", l.generator(), exp)?;
            }
            i += run;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl std::str::FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Word::parse(s)
    }
}

struct WordParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl WordParser<'_> {
    fn err(&self, msg: &str) -> WordError {
        WordError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn product<F>(&mut self, resolve: &mut F) -> Result<Word, WordError>
    where
        F: FnMut(&str) -> Result<Generator, WordError>,
    {
        let mut w = self.factor(resolve)?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let next = self.factor(resolve)?;
            w = w.concat(&next);
        }
        Ok(w)
    }

    fn factor<F>(&mut self, resolve: &mut F) -> Result<Word, WordError>
    where
        F: FnMut(&str) -> Result<Generator, WordError>,
    {
        let base = match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.product(resolve)?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                inner
            }
            Some(b'1') => {
                self.pos += 1;
                Word::identity()
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                resolve(name)?.word()
            }
            _ => return Err(self.err("expected a generator, '1' or '('")),
        };
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exp = self.integer()?;
            Ok(base.pow(exp))
        } else {
            Ok(base)
        }
    }

    fn integer(&mut self) -> Result<i64, WordError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        text.parse::<i64>().map_err(|_| WordError::Syntax {
            pos: start,
            msg: "expected an integer exponent".to_string(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn reduce_cancels_fully() {
        let l = Generator::new("L").unwrap();
        let r = Generator::new("R").unwrap();
        let raw = vec![
            l.letter(),
            r.letter(),
            r.inverse_letter(),
            l.inverse_letter(),
        ];
        assert!(Word::from_letters(raw).is_identity());
    }

    #[test]
    fn reduce_single_survivor() {
        let x = Generator::new("X").unwrap();
        let raw = vec![x.letter(), x.inverse_letter(), x.letter()];
        assert_eq!(Word::from_letters(raw), x.word());
    }

    #[test]
    fn product_of_leash_words() {
        // LRLR^-1 followed by RRRLL
        assert_eq!(w("L*R*L*R^-1").concat(&w("R*R*R*L*L")), w("L*R*L*R*R*L*L"));
    }

    #[test]
    fn inverse_and_identity_laws() {
        let xyz = w("X*Y*Z");
        assert!(xyz.concat(&xyz.invert()).is_identity());
        let c = w("L*R^-1*L^-1*R");
        assert_eq!(Word::identity().concat(&c), c);
    }

    #[test]
    fn invert_examples() {
        assert_eq!(w("L*R^-1").invert(), w("R*L^-1"));
        assert!(Word::identity().invert().is_identity());
        assert_eq!(w("L*R^-1*L^-1*R").invert(), w("R^-1*L*R*L^-1"));
    }

    #[test]
    fn exponent_sums() {
        let l = Generator::new("L").unwrap();
        let f = Generator::new("F").unwrap();
        let x = Generator::new("X").unwrap();
        assert_eq!(w("L*R^-1*L^-1*R").exponent_sum(&l), 0);
        assert_eq!(Word::power_of(&f, 3).exponent_sum(&f), 3);
        assert_eq!(Word::identity().exponent_sum(&x), 0);
    }

    #[test]
    fn cyclic_reduction_examples() {
        assert_eq!(w("X*Y*X^-1").cyclically_reduce(), w("Y"));
        assert_eq!(w("X*Y*Z").cyclically_reduce(), w("X*Y*Z"));
        assert_eq!(
            w("X^-1*L*R^-1*L^-1*R*X").cyclically_reduce(),
            w("L*R^-1*L^-1*R")
        );
    }

    #[test]
    fn normal_form_ignores_rotation_and_inversion() {
        let r = w("Y*Z*Y^-1*X*Y*Z^-1*Y^-1*Z*X^-1*Z^-1");
        let n = r.relator_normal_form();
        assert_eq!(r.rotate(3).relator_normal_form(), n);
        assert_eq!(r.invert().relator_normal_form(), n);
        assert_eq!(r.conjugate_by(&w("X*Y")).relator_normal_form(), n);
    }

    #[test]
    fn text_format() {
        assert_eq!(w("X*Y^-1*X^-1*Y").to_string(), "X*Y^-1*X^-1*Y");
        assert_eq!(w("1").to_string(), "1");
        assert_eq!(w("C^-1*D^2*C").to_string(), "C^-1*D^2*C");
        assert_eq!(w("(A^-1*B)^2").to_string(), "A^-1*B*A^-1*B");
        assert_eq!(w("X*X*X^-1"), w("X"));
        assert_eq!(w("abc_1 * abc_1"), w("abc_1^2"));
        assert!(Word::parse("X**Y").is_err());
        assert!(Word::parse("X^").is_err());
        assert!(Word::parse("(X").is_err());
        assert!(Word::parse("X)").is_err());
    }

    #[test]
    fn substitution() {
        let t = Generator::new("T").unwrap();
        let mut map = BTreeMap::new();
        map.insert(t, w("X*Y*X^-1"));
        assert_eq!(w("T^-1*Z").substitute(&map), w("X*Y^-1*X^-1*Z"));
    }
}
