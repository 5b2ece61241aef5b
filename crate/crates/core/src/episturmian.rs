//! Palindromic closure, directive words and standard episturmian words.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::factors::{FactorSet, FactorSource};
use crate::substitution::Substitution;
use crate::words::{Alphabet, Budget, Letter, Word};

/// Length of the longest palindromic suffix of `w`.
fn longest_palindromic_suffix(w: &[Letter]) -> usize {
    let n = w.len();
    (0..=n)
        .find(|&start| {
            let s = &w[start..];
            s.iter().eq(s.iter().rev())
        })
        .map(|start| n - start)
        .unwrap_or(0)
}

/// Shortest palindrome having `w` as a prefix.
pub fn palindromic_closure(w: &Word) -> Word {
    let q = longest_palindromic_suffix(w.letters());
    let v = &w.letters()[..w.len() - q];
    let mut out = w.letters().to_vec();
    out.extend(v.iter().rev());
    Word(out)
}

/// Iterated palindromic closure: `Pal(ε) = ε`, `Pal(ua) = (Pal(u)a)⁺`.
pub fn pal(u: &Word, budget: &Budget) -> Result<Word> {
    let mut cur = Word::empty();
    for &a in u.letters() {
        if 2 * cur.len() + 1 > budget.max_prefix {
            return Err(Error::BudgetExceeded { what: "palindromic closure", limit: budget.max_prefix });
        }
        cur = palindromic_closure(&cur.appended(a));
    }
    Ok(cur)
}

/// The elementary morphism `ψ_a`: `a ↦ a`, `b ↦ ab` for `b ≠ a`.
pub fn psi_letter(alphabet: &Alphabet, a: Letter) -> Substitution {
    let images = alphabet
        .letters()
        .map(|b| if b == a { Word::letter(a) } else { Word(vec![a, b]) })
        .collect();
    Substitution::new(alphabet.clone(), images).expect("valid images")
}

/// `ψ_u = ψ_{u_1} ∘ ⋯ ∘ ψ_{u_k}`.
pub fn psi(alphabet: &Alphabet, u: &Word) -> Result<Substitution> {
    if !alphabet.contains_word(u) {
        return Err(Error::InvalidArgument("word outside the alphabet".into()));
    }
    let mut acc = Substitution::identity(alphabet.clone());
    for &a in u.letters() {
        acc = acc.compose(&psi_letter(alphabet, a));
    }
    Ok(acc)
}

/// Tests `Pal(uv) = ψ_u(Pal(v)) Pal(u)`.
pub fn justin_check(alphabet: &Alphabet, u: &Word, v: &Word, budget: &Budget) -> Result<bool> {
    let lhs = pal(&u.concat(v), budget)?;
    let rhs = psi(alphabet, u)?.apply(&pal(v, budget)?)?.concat(&pal(u, budget)?);
    Ok(lhs == rhs)
}

/// A finite prefix `a_0 a_1 ⋯` of a directive word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectiveWord {
    alphabet: Alphabet,
    prefix: Word,
}

impl DirectiveWord {
    pub fn new(alphabet: Alphabet, prefix: Word) -> Result<Self> {
        if !alphabet.contains_word(&prefix) {
            return Err(Error::InvalidArgument("directive word outside the alphabet".into()));
        }
        Ok(DirectiveWord { alphabet, prefix })
    }

    /// Parses over the given alphabet.
    pub fn parse(alphabet: &Alphabet, s: &str) -> Result<Self> {
        Self::new(alphabet.clone(), alphabet.parse(s)?)
    }

    /// `pattern` repeated until the prefix has `len` letters.
    pub fn periodic(alphabet: &Alphabet, pattern: &str, len: usize) -> Result<Self> {
        let p = alphabet.parse(pattern)?;
        if p.is_empty() {
            return Err(Error::InvalidArgument("empty directive pattern".into()));
        }
        let w = Word(p.letters().iter().copied().cycle().take(len).collect());
        Self::new(alphabet.clone(), w)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn prefix(&self) -> &Word {
        &self.prefix
    }

    /// Letters occurring in the prefix from position `n` on, in alphabet order.
    fn letters_from(&self, n: usize) -> Vec<Letter> {
        let set: BTreeSet<Letter> = self.prefix.letters()[n.min(self.prefix.len())..].iter().copied().collect();
        set.into_iter().collect()
    }
}

/// The palindrome prefixes `u_0 = ε, u_1, …, u_N` of the word directed by a
/// directive prefix of length `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PalindromePrefixTower {
    pub u: Vec<Word>,
}

impl PalindromePrefixTower {
    pub fn new(delta: &DirectiveWord, budget: &Budget) -> Result<Self> {
        let mut u = vec![Word::empty()];
        for &a in delta.prefix.letters() {
            let last = u.last().unwrap();
            if 2 * last.len() + 1 > budget.max_prefix {
                return Err(Error::BudgetExceeded { what: "palindrome prefix", limit: budget.max_prefix });
            }
            let next = palindromic_closure(&last.appended(a));
            u.push(next);
        }
        Ok(PalindromePrefixTower { u })
    }

    pub fn to_text(&self, alphabet: &Alphabet) -> String {
        self.u.iter().map(|w| alphabet.format(w) + "\n").collect()
    }
}

/// `B_n(b) = ψ_{a_0⋯a_{n−1}}(b)` for every letter `b`, for `n = 0..=N`.
fn blocks(delta: &DirectiveWord, upto: usize, budget: &Budget) -> Result<Vec<Vec<Word>>> {
    let mut cur: Vec<Word> = delta.alphabet.letters().map(Word::letter).collect();
    let mut out = vec![cur.clone()];
    for &a in delta.prefix.letters().iter().take(upto) {
        let head = cur[a as usize].clone();
        for b in delta.alphabet.letters() {
            if b != a {
                cur[b as usize] = head.concat(&cur[b as usize]);
                if cur[b as usize].len() > budget.max_prefix {
                    return Err(Error::BudgetExceeded { what: "episturmian block", limit: budget.max_prefix });
                }
            }
        }
        out.push(cur.clone());
    }
    Ok(out)
}

/// `|B_n(b)|` without building the block.
fn block_len(delta: &DirectiveWord, n: usize, b: Letter) -> usize {
    let mut lens = vec![1usize; delta.alphabet.len()];
    for &a in &delta.prefix.letters()[..n] {
        for c in delta.alphabet.letters() {
            if c != a {
                lens[c as usize] = lens[c as usize].saturating_add(lens[a as usize]);
            }
        }
    }
    lens[b as usize]
}

/// Factors up to length `horizon` of the standard episturmian word directed
/// by `delta`.
///
/// Picks the least `n` such that every letter of the prefix still occurs
/// from position `n` on and `|ψ_{a_0⋯a_{n−1}}(b)| ≥ horizon − 1` for all
/// those letters `b`. Every window of length `horizon` then lies in the
/// image of a length-two factor `xy ∈ a_n A ∪ A a_n` of the derived word.
pub fn episturmian_factor_set(delta: &DirectiveWord, horizon: usize, budget: &Budget) -> Result<FactorSet> {
    if horizon > budget.max_horizon {
        return Err(Error::BudgetExceeded { what: "horizon", limit: budget.max_horizon });
    }
    let letters = delta.letters_from(0);
    if letters.is_empty() {
        return Err(Error::horizon(1, 0));
    }
    let source = FactorSource::Episturmian { directive: delta.alphabet.format(&delta.prefix) };
    let mut by_length = vec![BTreeSet::new(); horizon + 1];
    if letters.len() == 1 {
        let a = letters[0];
        for (n, set) in by_length.iter_mut().enumerate() {
            set.insert(Word(vec![a; n]));
        }
        return Ok(FactorSet::from_parts(delta.alphabet.clone(), horizon, by_length, true, source));
    }
    let need = horizon.saturating_sub(1).max(1);
    let n = (0..delta.prefix.len())
        .find(|&n| {
            delta.letters_from(n + 1) == letters
                && letters.iter().all(|&b| block_len(delta, n, b) >= need)
        })
        .ok_or_else(|| Error::horizon(delta.prefix.len() + 1, delta.prefix.len()))?;
    let all_blocks = blocks(delta, n, budget)?;
    let c = delta.prefix.letters()[n];
    let block = &all_blocks[n];
    for &b in &letters {
        for (x, y) in [(c, b), (b, c)] {
            let w = block[x as usize].concat(&block[y as usize]);
            for (len, set) in by_length.iter_mut().enumerate() {
                for f in w.factors_of_length(len) {
                    set.insert(f);
                }
            }
        }
    }
    by_length[0].insert(Word::empty());
    Ok(FactorSet::from_parts(delta.alphabet.clone(), horizon, by_length, true, source))
}

/// Left return words to `u` from the palindrome prefixes: with `n` least such
/// that `u` is a factor of `u_n` and `zu` a prefix of `u_n`, they are the
/// words `z⁻¹ ψ_{a_0⋯a_{n−1}}(b) z`.
pub fn episturmian_left_returns(delta: &DirectiveWord, u: &Word, budget: &Budget) -> Result<BTreeSet<Word>> {
    let tower = PalindromePrefixTower::new(delta, budget)?;
    let n = tower
        .u
        .iter()
        .position(|un| un.contains_factor(u))
        .ok_or_else(|| Error::horizon(delta.prefix.len() + 1, delta.prefix.len()))?;
    let letters = delta.letters_from(n);
    if letters != delta.letters_from(0) {
        return Err(Error::horizon(delta.prefix.len() + 1, delta.prefix.len()));
    }
    let occ = tower.u[n].occurrences(u);
    if occ.len() != 1 {
        return Err(Error::Internal(format!("expected a unique occurrence of u in u_{n}, found {}", occ.len())));
    }
    let z = tower.u[n].prefix(occ[0]);
    let block = &blocks(delta, n, budget)?[n];
    letters
        .iter()
        .map(|&b| {
            let y = &block[b as usize];
            y.concat(&z)
                .strip_prefix(&z)
                .ok_or_else(|| Error::Internal("z is not a prefix of y·z".into()))
        })
        .collect()
}
