//! Return words, the submonoid `Γ_F(x)` and truncations of limit return sets.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::factors::FactorSet;
use crate::substitution::Substitution;
use crate::words::{Alphabet, Budget, Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Right,
    Left,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReturnSet {
    pub base: Word,
    pub side: Side,
    pub words: BTreeSet<Word>,
}

impl ReturnSet {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn names(&self, alphabet: &Alphabet) -> Vec<String> {
        self.words.iter().map(|w| alphabet.format(w)).collect()
    }

    pub fn to_json(&self, alphabet: &Alphabet) -> serde_json::Value {
        serde_json::json!({
            "base": alphabet.format(&self.base),
            "side": self.side,
            "words": self.names(alphabet),
        })
    }
}

/// Complete first returns `u` to `x`: `u` starts and ends with `x`, has
/// exactly two occurrences of `x`, and `|u| > |x|`.
///
/// With `n` the uniform-recurrence witness of `x`, the word `u` minus its
/// first and last letters avoids `x`, so `|u| ≤ n + 1`.
fn complete_returns(f: &FactorSet, x: &Word) -> Result<Vec<Word>> {
    f.require_complete()?;
    let n = f.uniform_recurrence_witness(x)?;
    f.require_horizon(n + 1)?;
    let mut out = Vec::new();
    for len in x.len() + 1..=n + 1 {
        for u in f.of_length(len) {
            if u.starts_with(x) && u.ends_with(x) && u.occurrences(x).len() == 2 {
                out.push(u.clone());
            }
        }
    }
    Ok(out)
}

/// `R_F(x)`: nonempty `w` with `xw ∈ F ∩ A*x` and no internal occurrence of `x`.
pub fn right_return_words(f: &FactorSet, x: &Word) -> Result<ReturnSet> {
    let words = complete_returns(f, x)?
        .into_iter()
        .map(|u| u.strip_prefix(x).expect("starts with x"))
        .collect();
    Ok(ReturnSet { base: x.clone(), side: Side::Right, words })
}

/// `R'_F(x) = x R_F(x) x⁻¹`.
pub fn left_return_words(f: &FactorSet, x: &Word) -> Result<ReturnSet> {
    let words = complete_returns(f, x)?
        .into_iter()
        .map(|u| u.strip_suffix(x).expect("ends with x"))
        .collect();
    Ok(ReturnSet { base: x.clone(), side: Side::Left, words })
}

/// True if `w` factors as a product of elements of `gens`.
pub fn in_submonoid(w: &Word, gens: &BTreeSet<Word>) -> bool {
    let l = w.letters();
    let mut ok = vec![false; l.len() + 1];
    ok[0] = true;
    for i in 0..l.len() {
        if !ok[i] {
            continue;
        }
        for g in gens {
            if !g.is_empty() && l[i..].starts_with(g.letters()) {
                ok[i + g.len()] = true;
            }
        }
    }
    ok[l.len()]
}

/// Members of `Γ_F(x) = { w | xw ∈ F ∩ A*x }` of length `≤ maxlen`.
pub fn gamma(f: &FactorSet, x: &Word, maxlen: usize) -> Result<BTreeSet<Word>> {
    f.require_complete()?;
    if !f.contains(x) {
        return Err(Error::NotAFactor);
    }
    f.require_horizon(x.len() + maxlen)?;
    let mut out = BTreeSet::new();
    for len in 0..=maxlen {
        for u in f.of_length(x.len() + len) {
            if u.starts_with(x) && u.ends_with(x) {
                out.insert(u.strip_prefix(x).expect("starts with x"));
            }
        }
    }
    Ok(out)
}

/// Products of return words of length `≤ maxlen` whose left extension by
/// `x` stays in `F`.
fn star_side(f: &FactorSet, x: &Word, returns: &BTreeSet<Word>, maxlen: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    let mut frontier = vec![Word::empty()];
    out.insert(Word::empty());
    while let Some(p) = frontier.pop() {
        for r in returns {
            let q = p.concat(r);
            if q.len() <= maxlen && f.contains(&x.concat(&q)) && out.insert(q.clone()) {
                frontier.push(q);
            }
        }
    }
    out
}

/// Compares `Γ_F(x)` with `R_F(x)* ∩ x⁻¹F` up to length `maxlen`.
pub fn check_gamma_identity(f: &FactorSet, x: &Word, maxlen: usize) -> Result<bool> {
    let lhs = gamma(f, x, maxlen)?;
    let r = right_return_words(f, x)?;
    Ok(lhs == star_side(f, x, &r.words, maxlen))
}

/// The code `a R_F(ba) a⁻¹`.
pub fn connexion_code(f: &FactorSet, a: Letter, b: Letter) -> Result<BTreeSet<Word>> {
    let ba = Word(vec![b, a]);
    let r = right_return_words(f, &ba)?;
    let aw = Word::letter(a);
    r.words
        .iter()
        .map(|w| {
            aw.concat(w)
                .strip_suffix(&aw)
                .ok_or_else(|| Error::Internal("return word to ba does not end with a".into()))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitStage {
    pub left: Word,
    pub right: Word,
    pub words: BTreeSet<Word>,
}

/// Stages `R_n = r_n R_F(ℓ_n r_n) r_n⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitReturnTruncation {
    pub stages: Vec<LimitStage>,
}

impl LimitReturnTruncation {
    pub fn to_json(&self, alphabet: &Alphabet) -> serde_json::Value {
        serde_json::Value::Array(
            self.stages
                .iter()
                .map(|s| {
                    serde_json::json!({
                        "left": alphabet.format(&s.left),
                        "right": alphabet.format(&s.right),
                        "words": s.words.iter().map(|w| alphabet.format(w)).collect::<Vec<_>>(),
                    })
                })
                .collect(),
        )
    }
}

/// Seeds `ℓ_n = r_n = σ^{2n}(a)` for `n = 1..=depth`.
pub fn substitution_seeds(sigma: &Substitution, a: Letter, depth: usize, budget: &Budget) -> Result<Vec<(Word, Word)>> {
    (1..=depth)
        .map(|n| {
            let w = sigma.iterate(a, 2 * n, budget)?;
            Ok((w.clone(), w))
        })
        .collect()
}

pub fn limit_return_truncation(f: &FactorSet, seeds: &[(Word, Word)]) -> Result<LimitReturnTruncation> {
    for pair in seeds.windows(2) {
        let ((l0, r0), (l1, r1)) = (&pair[0], &pair[1]);
        if !(l1.len() > l0.len() && l1.ends_with(l0) && r1.len() > r0.len() && r1.starts_with(r0)) {
            return Err(Error::InvalidArgument("seeds must be strictly increasing suffixes and prefixes".into()));
        }
    }
    let mut stages: Vec<LimitStage> = Vec::new();
    for (l, r) in seeds {
        let x = l.concat(r);
        if !f.contains(&x) {
            return Err(if x.len() > f.horizon() { Error::horizon(x.len(), f.horizon()) } else { Error::NotAFactor });
        }
        let words = right_return_words(f, &x)?
            .words
            .iter()
            .map(|w| {
                r.concat(w)
                    .strip_suffix(r)
                    .ok_or_else(|| Error::Internal("return word is not conjugate by r_n".into()))
            })
            .collect::<Result<BTreeSet<_>>>()?;
        if let Some(prev) = stages.last() {
            if let Some(bad) = words.iter().find(|w| !in_submonoid(w, &prev.words)) {
                return Err(Error::Internal(format!("stage word {bad:?} is not in the previous stage's submonoid")));
            }
        }
        stages.push(LimitStage { left: l.clone(), right: r.clone(), words });
    }
    Ok(LimitReturnTruncation { stages })
}
