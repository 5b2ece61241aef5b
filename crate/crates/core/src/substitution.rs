//! Substitutions (letter-to-word morphisms of the free monoid).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{Alphabet, Budget, Letter, Word};

/// A morphism `A* → A*` given by nonempty letter images.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Substitution {
    alphabet: Alphabet,
    images: Vec<Word>,
}

impl Substitution {
    pub fn new(alphabet: Alphabet, images: Vec<Word>) -> Result<Self> {
        if images.len() != alphabet.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} images, got {}",
                alphabet.len(),
                images.len()
            )));
        }
        for w in &images {
            if w.is_empty() {
                return Err(Error::InvalidArgument("substitution images must be nonempty".into()));
            }
            if !alphabet.contains_word(w) {
                return Err(Error::InvalidArgument("image letter outside the alphabet".into()));
            }
        }
        Ok(Substitution { alphabet, images })
    }

    /// Parses the `"a->ab;b->a"` notation. The alphabet is the set of rule
    /// heads, in the order they appear.
    pub fn parse(s: &str) -> Result<Self> {
        let rules: Vec<(char, &str)> = s
            .split(';')
            .map(str::trim)
            .filter(|r| !r.is_empty())
            .map(|rule| {
                let (head, body) = rule
                    .split_once("->")
                    .ok_or_else(|| Error::Parse(format!("missing '->' in rule {rule:?}")))?;
                let mut chars = head.trim().chars();
                match (chars.next(), chars.next()) {
                    (Some(c), None) => Ok((c, body.trim())),
                    _ => Err(Error::Parse(format!("rule head must be one letter: {head:?}"))),
                }
            })
            .collect::<Result<_>>()?;
        let alphabet = Alphabet::new(rules.iter().map(|r| r.0))
            .map_err(|e| Error::Parse(e.to_string()))?;
        let images = rules
            .iter()
            .map(|(_, body)| alphabet.parse(body))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::Parse(e.to_string()))?;
        Substitution::new(alphabet, images).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Parses either a builtin name or the rule notation.
    pub fn named_or_parse(s: &str) -> Result<Self> {
        match s.trim() {
            "fibonacci" | "fib" => Ok(Self::fibonacci()),
            "thue-morse" | "tm" => Ok(Self::thue_morse()),
            "tribonacci" | "trib" => Ok(Self::tribonacci()),
            other => Self::parse(other),
        }
    }

    pub fn fibonacci() -> Self {
        Self::parse("a->ab;b->a").unwrap()
    }

    pub fn thue_morse() -> Self {
        Self::parse("a->ab;b->ba").unwrap()
    }

    pub fn tribonacci() -> Self {
        Self::parse("a->ab;b->ac;c->a").unwrap()
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        let images = alphabet.letters().map(Word::letter).collect();
        Substitution { alphabet, images }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn image(&self, a: Letter) -> &Word {
        &self.images[a as usize]
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    /// Homomorphic extension to words.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        if !self.alphabet.contains_word(w) {
            return Err(Error::InvalidArgument("word has a letter outside the alphabet".into()));
        }
        Ok(self.apply_unchecked(w))
    }

    pub(crate) fn apply_unchecked(&self, w: &Word) -> Word {
        let mut out = Vec::with_capacity(w.len() * 2);
        for &l in w.letters() {
            out.extend_from_slice(self.images[l as usize].letters());
        }
        Word(out)
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Substitution) -> Substitution {
        let images = other.images.iter().map(|w| self.apply_unchecked(w)).collect();
        Substitution { alphabet: self.alphabet.clone(), images }
    }

    /// `σ^k(w)`, failing once the word would outgrow `budget.max_prefix`.
    pub fn iterate_word(&self, w: &Word, k: usize, budget: &Budget) -> Result<Word> {
        let mut cur = w.clone();
        for _ in 0..k {
            let len: usize = cur.letters().iter().map(|&l| self.images[l as usize].len()).sum();
            if len > budget.max_prefix {
                return Err(Error::BudgetExceeded { what: "iterated word length", limit: budget.max_prefix });
            }
            cur = self.apply_unchecked(&cur);
        }
        Ok(cur)
    }

    /// `σ^k(a)`.
    pub fn iterate(&self, a: Letter, k: usize, budget: &Budget) -> Result<Word> {
        if a as usize >= self.alphabet.len() {
            return Err(Error::InvalidArgument("letter outside the alphabet".into()));
        }
        self.iterate_word(&Word::letter(a), k, budget)
    }

    /// `σ^k` as a substitution, by repeated squaring.
    pub fn power(&self, k: usize) -> Substitution {
        let mut result = Substitution::identity(self.alphabet.clone());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.compose(&base);
            }
            base = base.compose(&base);
            k >>= 1;
        }
        result
    }

    /// Incidence matrix: `m[a][b]` counts the occurrences of `b` in `σ(a)`.
    pub fn incidence_matrix(&self) -> Vec<Vec<u64>> {
        let n = self.alphabet.len();
        self.images
            .iter()
            .map(|img| (0..n).map(|b| img.count(b as Letter) as u64).collect())
            .collect()
    }

    /// Some power of the incidence matrix is positive. Powers are checked up
    /// to Wielandt's exponent bound `(n−1)² + 1`.
    pub fn is_primitive(&self) -> bool {
        let n = self.alphabet.len();
        let base: Vec<Vec<bool>> = self
            .incidence_matrix()
            .into_iter()
            .map(|row| row.into_iter().map(|c| c > 0).collect())
            .collect();
        let mut cur = base.clone();
        let bound = (n - 1) * (n - 1) + 1;
        for _ in 0..bound {
            if cur.iter().all(|row| row.iter().all(|&x| x)) {
                return true;
            }
            let mut next = vec![vec![false; n]; n];
            for i in 0..n {
                for k in 0..n {
                    if cur[i][k] {
                        for j in 0..n {
                            next[i][j] |= base[k][j];
                        }
                    }
                }
            }
            cur = next;
        }
        false
    }

    /// `σ` is proper when all images start with one letter and end with one letter.
    pub fn is_proper(&self) -> bool {
        let f = self.images[0].first();
        let l = self.images[0].last();
        self.images.iter().all(|w| w.first() == f && w.last() == l)
    }

    pub fn to_rule_string(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rules: Vec<String> = self
            .alphabet
            .letters()
            .map(|a| format!("{}->{}", self.alphabet.symbol(a), self.alphabet.format(self.image(a))))
            .collect();
        write!(f, "{}", rules.join(";"))
    }
}
