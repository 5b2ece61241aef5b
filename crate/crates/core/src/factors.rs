//! Truncated factor sets of subshifts.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::substitution::Substitution;
use crate::words::{Alphabet, Budget, Letter, Word};

/// Where a factor set came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FactorSource {
    Substitution { rules: String, start: char },
    Periodic { word: String },
    Episturmian { directive: String },
    Explicit,
}

/// All factors up to length `horizon` of a factorial language.
///
/// When `complete` is set the set is certified to coincide with the factors
/// of the underlying subshift up to the horizon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorSet {
    alphabet: Alphabet,
    horizon: usize,
    by_length: Vec<BTreeSet<Word>>,
    complete: bool,
    source: FactorSource,
}

#[derive(Serialize)]
struct FactorSetJson<'a> {
    horizon: usize,
    complete: bool,
    source: &'a FactorSource,
    factors: Vec<String>,
}

/// Collects the factors of length `≤ horizon` of `w`.
fn collect_factors(w: &Word, horizon: usize, into: &mut [BTreeSet<Word>]) {
    for (n, set) in into.iter_mut().enumerate().take(horizon + 1) {
        for f in w.factors_of_length(n) {
            set.insert(f);
        }
    }
}

impl FactorSet {
    /// Factors of the words `σⁿ(a)`, `n ≥ 0`, up to length `horizon`.
    ///
    /// Iterates `σ` from `a` until the length-`horizon` factors collected so
    /// far are closed under applying `σ` and re-collecting, which certifies
    /// completeness for primitive `σ`.
    pub fn from_substitution(sigma: &Substitution, a: Letter, horizon: usize, budget: &Budget) -> Result<Self> {
        if horizon > budget.max_horizon {
            return Err(Error::BudgetExceeded { what: "horizon", limit: budget.max_horizon });
        }
        if a as usize >= sigma.alphabet().len() {
            return Err(Error::InvalidArgument("start letter outside the alphabet".into()));
        }
        if !sigma.is_primitive() {
            return Err(Error::NotPrimitive);
        }
        let mut by_length = vec![BTreeSet::new(); horizon + 1];
        let mut cur = Word::letter(a);
        loop {
            collect_factors(&cur, horizon, &mut by_length);
            if cur.len() >= horizon && Self::closed_under(sigma, &by_length[horizon], horizon) {
                break;
            }
            let next_len: usize = cur.letters().iter().map(|&l| sigma.image(l).len()).sum();
            if next_len > budget.max_prefix {
                return Err(Error::BudgetExceeded { what: "fixed-point prefix", limit: budget.max_prefix });
            }
            cur = sigma.apply_unchecked(&cur);
        }
        Ok(FactorSet {
            alphabet: sigma.alphabet().clone(),
            horizon,
            by_length,
            complete: true,
            source: FactorSource::Substitution {
                rules: sigma.to_string(),
                start: sigma.alphabet().symbol(a),
            },
        })
    }

    fn closed_under(sigma: &Substitution, top: &BTreeSet<Word>, horizon: usize) -> bool {
        top.iter().all(|u| {
            let img = sigma.apply_unchecked(u);
            let ok = img.factors_of_length(horizon).all(|f| top.contains(&f));
            ok
        })
    }

    /// Factors of the periodic word `w^∞` up to `horizon`.
    pub fn from_periodic(alphabet: &Alphabet, w: &Word, horizon: usize) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::InvalidArgument("period word must be nonempty".into()));
        }
        if !alphabet.contains_word(w) {
            return Err(Error::InvalidArgument("period word outside the alphabet".into()));
        }
        let reps = horizon / w.len() + 2;
        let long = w.power(reps);
        let mut by_length = vec![BTreeSet::new(); horizon + 1];
        collect_factors(&long, horizon, &mut by_length);
        Ok(FactorSet {
            alphabet: alphabet.clone(),
            horizon,
            by_length,
            complete: true,
            source: FactorSource::Periodic { word: alphabet.format(w) },
        })
    }

    /// Factorial closure of an explicit list, truncated at `horizon`. The
    /// result is not marked complete.
    pub fn from_words(alphabet: &Alphabet, words: &[Word], horizon: usize) -> Result<Self> {
        let mut by_length = vec![BTreeSet::new(); horizon + 1];
        by_length[0].insert(Word::empty());
        for w in words {
            if !alphabet.contains_word(w) {
                return Err(Error::InvalidArgument("word outside the alphabet".into()));
            }
            collect_factors(w, horizon, &mut by_length);
        }
        Ok(FactorSet { alphabet: alphabet.clone(), horizon, by_length, complete: false, source: FactorSource::Explicit })
    }

    pub(crate) fn from_parts(
        alphabet: Alphabet,
        horizon: usize,
        by_length: Vec<BTreeSet<Word>>,
        complete: bool,
        source: FactorSource,
    ) -> Self {
        FactorSet { alphabet, horizon, by_length, complete, source }
    }

    /// Marks an explicit set as complete. The caller vouches for it.
    pub fn assume_complete(mut self) -> Self {
        self.complete = true;
        self
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn source(&self) -> &FactorSource {
        &self.source
    }

    pub fn contains(&self, w: &Word) -> bool {
        w.len() <= self.horizon && self.by_length[w.len()].contains(w)
    }

    /// Members of length exactly `n` (empty past the horizon).
    pub fn of_length(&self, n: usize) -> impl Iterator<Item = &Word> {
        self.by_length.get(n).into_iter().flatten()
    }

    /// Every member, shortlex.
    pub fn iter(&self) -> impl Iterator<Item = &Word> {
        self.by_length.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.by_length.iter().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Letters occurring in the set.
    pub fn letters(&self) -> Vec<Letter> {
        self.of_length(1).map(|w| w.letters()[0]).collect()
    }

    pub(crate) fn require_complete(&self) -> Result<()> {
        if self.complete {
            Ok(())
        } else {
            Err(Error::IncompleteFactorSet)
        }
    }

    pub(crate) fn require_horizon(&self, needed: usize) -> Result<()> {
        if needed > self.horizon {
            Err(Error::horizon(needed, self.horizon))
        } else {
            Ok(())
        }
    }

    /// Number of factors of length `n`.
    pub fn complexity(&self, n: usize) -> Result<usize> {
        self.require_complete()?;
        self.require_horizon(n)?;
        Ok(self.by_length[n].len())
    }

    /// Least `n` such that `x` is a factor of every member of length `n`.
    pub fn uniform_recurrence_witness(&self, x: &Word) -> Result<usize> {
        self.require_complete()?;
        if !self.contains(x) {
            return Err(Error::NotAFactor);
        }
        for n in x.len()..=self.horizon {
            if self.by_length[n].iter().all(|w| w.contains_factor(x)) {
                return Ok(n);
            }
        }
        Err(Error::horizon(self.horizon + 1, self.horizon))
    }

    /// Every member shorter than the horizon extends on both sides.
    pub fn is_biextendable(&self) -> bool {
        (0..self.horizon).all(|n| {
            self.by_length[n].iter().all(|w| {
                self.alphabet.letters().any(|a| self.contains(&w.prepended(a)))
                    && self.alphabet.letters().any(|a| self.contains(&w.appended(a)))
            })
        })
    }

    /// One word per line, shortlex.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for w in self.iter() {
            s.push_str(&self.alphabet.format(w));
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(FactorSetJson {
            horizon: self.horizon,
            complete: self.complete,
            source: &self.source,
            factors: self.iter().map(|w| self.alphabet.format(w)).collect(),
        })
        .expect("serializable")
    }
}
