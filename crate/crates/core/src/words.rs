//! Alphabets and finite words.
//!
//! Words are stored as sequences of letter indices into an ordered
//! [`Alphabet`]. Letters are compared by their position in the alphabet and
//! words are ordered shortlex (length first, then lexicographically), which is
//! the order used for every canonical listing in the crate.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a letter in its alphabet.
pub type Letter = u8;

/// An ordered finite set of symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Self> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.is_empty() {
            return Err(Error::InvalidAlphabet("empty alphabet".into()));
        }
        if symbols.len() > 64 {
            return Err(Error::InvalidAlphabet("more than 64 letters".into()));
        }
        for (i, c) in symbols.iter().enumerate() {
            if symbols[..i].contains(c) {
                return Err(Error::InvalidAlphabet(format!("duplicate symbol {c:?}")));
            }
            if c.is_whitespace() || "()^;:,->{}".contains(*c) {
                return Err(Error::InvalidAlphabet(format!("reserved symbol {c:?}")));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// Alphabet made of the symbols of `s`, in order.
    pub fn from_str_symbols(s: &str) -> Result<Self> {
        Alphabet::new(s.chars())
    }

    /// The first `n` lowercase latin letters.
    pub fn latin(n: usize) -> Self {
        assert!((1..=26).contains(&n));
        Alphabet {
            symbols: (b'a'..b'a' + n as u8).map(char::from).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + Clone {
        0..self.symbols.len() as Letter
    }

    pub fn symbol(&self, letter: Letter) -> char {
        self.symbols[letter as usize]
    }

    pub fn index_of(&self, c: char) -> Result<Letter> {
        self.symbols
            .iter()
            .position(|&s| s == c)
            .map(|i| i as Letter)
            .ok_or(Error::LetterNotInAlphabet(c))
    }

    /// Parses a word; whitespace is ignored and `ε` or `1` alone denote the
    /// empty word.
    pub fn parse(&self, s: &str) -> Result<Word> {
        let trimmed = s.trim();
        if trimmed == "ε" || (trimmed == "1" && !self.symbols.contains(&'1')) {
            return Ok(Word::empty());
        }
        trimmed
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| self.index_of(c))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn format(&self, w: &Word) -> String {
        w.0.iter().map(|&l| self.symbol(l)).collect()
    }

    /// All words of length `n`, in lexicographic order.
    pub fn words_of_length(&self, n: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..n {
            out = out
                .iter()
                .flat_map(|w| self.letters().map(move |a| w.appended(a)))
                .collect();
        }
        out
    }

    /// True if every letter of `w` belongs to this alphabet.
    pub fn contains_word(&self, w: &Word) -> bool {
        w.0.iter().all(|&l| (l as usize) < self.len())
    }
}

/// A finite word over some alphabet, stored as letter indices.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(a: Letter) -> Self {
        Word(vec![a])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn appended(&self, a: Letter) -> Word {
        let mut v = self.0.clone();
        v.push(a);
        Word(v)
    }

    pub fn prepended(&self, a: Letter) -> Word {
        let mut v = Vec::with_capacity(self.len() + 1);
        v.push(a);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    pub fn power(&self, n: usize) -> Word {
        Word(self.0.repeat(n))
    }

    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    pub fn prefix(&self, n: usize) -> Word {
        self.slice(0, n)
    }

    pub fn suffix(&self, n: usize) -> Word {
        self.slice(self.len() - n, self.len())
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn is_palindrome(&self) -> bool {
        let n = self.len();
        (0..n / 2).all(|i| self.0[i] == self.0[n - 1 - i])
    }

    pub fn starts_with(&self, p: &Word) -> bool {
        self.0.starts_with(&p.0)
    }

    pub fn ends_with(&self, s: &Word) -> bool {
        self.0.ends_with(&s.0)
    }

    /// `p⁻¹·self` when `p` is a prefix.
    pub fn strip_prefix(&self, p: &Word) -> Option<Word> {
        self.0.strip_prefix(p.0.as_slice()).map(|s| Word(s.to_vec()))
    }

    /// `self·s⁻¹` when `s` is a suffix.
    pub fn strip_suffix(&self, s: &Word) -> Option<Word> {
        self.0.strip_suffix(s.0.as_slice()).map(|p| Word(p.to_vec()))
    }

    /// Starting positions of the occurrences of `x` in `self`.
    pub fn occurrences(&self, x: &Word) -> Vec<usize> {
        if x.len() > self.len() {
            return Vec::new();
        }
        (0..=self.len() - x.len())
            .filter(|&i| self.0[i..i + x.len()] == x.0[..])
            .collect()
    }

    pub fn contains_factor(&self, x: &Word) -> bool {
        if x.is_empty() {
            return true;
        }
        x.len() <= self.len() && self.0.windows(x.len()).any(|win| win == &x.0[..])
    }

    /// Factors of length exactly `n`, with repetition, left to right.
    pub fn factors_of_length(&self, n: usize) -> impl Iterator<Item = Word> + '_ {
        let count = if n <= self.len() { self.len() - n + 1 } else { 0 };
        (0..count).map(move |i| self.slice(i, i + n))
    }

    /// Number of occurrences of letter `a`.
    pub fn count(&self, a: Letter) -> usize {
        self.0.iter().filter(|&&l| l == a).count()
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word(")?;
        for &l in &self.0 {
            if l < 26 {
                write!(f, "{}", (b'a' + l) as char)?;
            } else {
                write!(f, "[{l}]")?;
            }
        }
        write!(f, ")")
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

/// Resource limits shared by the operations that may blow up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Longest word produced by iterating a substitution.
    pub max_prefix: usize,
    /// Largest factor-set horizon.
    pub max_horizon: usize,
    /// Largest finite monoid built by closure.
    pub max_monoid: usize,
    /// Largest permutation group enumerated.
    pub max_group_order: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_prefix: 1_000_000,
            max_horizon: 64,
            max_monoid: 20_000,
            max_group_order: 10_080,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alphabet_rejects_duplicates_and_empty() {
        assert!(Alphabet::new("aba".chars()).is_err());
        assert!(Alphabet::new("".chars()).is_err());
        assert!(Alphabet::new("ab".chars()).is_ok());
    }

    #[test]
    fn parse_and_format() {
        let a = Alphabet::latin(2);
        let w = a.parse("abba").unwrap();
        assert_eq!(w, Word(vec![0, 1, 1, 0]));
        assert_eq!(a.format(&w), "abba");
        assert_eq!(a.parse("ε").unwrap(), Word::empty());
        assert_eq!(a.parse("abc"), Err(Error::LetterNotInAlphabet('c')));
    }

    #[test]
    fn shortlex_order() {
        let a = Alphabet::latin(2);
        let mut v = [a.parse("aab").unwrap(), a.parse("ab").unwrap(), a.parse("b").unwrap()];
        v.sort();
        let s: Vec<_> = v.iter().map(|w| a.format(w)).collect();
        assert_eq!(s, ["b", "ab", "aab"]);
    }

    #[test]
    fn occurrences_and_factors() {
        let a = Alphabet::latin(2);
        let w = a.parse("abaab").unwrap();
        assert_eq!(w.occurrences(&a.parse("ab").unwrap()), vec![0, 3]);
        assert!(w.contains_factor(&Word::empty()));
        assert!(w.contains_factor(&a.parse("aa").unwrap()));
        assert!(!w.contains_factor(&a.parse("bb").unwrap()));
        assert_eq!(w.factors_of_length(6).count(), 0);
        assert_eq!(w.factors_of_length(0).count(), 6);
    }
}
