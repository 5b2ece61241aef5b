use std::collections::BTreeSet;

use serde_json::json;

use super::{format_points, Automaton, Perm, PermGroup};
use crate::error::{Error, Result};
use crate::factors::FactorSet;
use crate::returns::right_return_words;
use crate::words::Word;

/// Minimal rank of the maps `φ_A(w)` for `w ∈ F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FMinimal {
    pub rank: usize,
    /// Longest length inspected before the minimum was declared stable.
    pub length_used: usize,
    /// Shortlex-least word of minimal rank.
    pub word: Word,
    pub image: Vec<u32>,
}

/// Searches `F` by increasing length. The minimum is accepted once two
/// further lengths bring neither a smaller rank nor a new minimal image.
/// The result is then checked to lie in a regular J-class: some return
/// word to `word` has to permute `image`.
pub fn f_min_rank(a: &Automaton, f: &FactorSet) -> Result<FMinimal> {
    f.require_complete()?;
    if a.alphabet() != f.alphabet() {
        return Err(Error::InvalidArgument("automaton and factor set use different alphabets".into()));
    }
    let mut best: Option<(usize, Word, Vec<u32>)> = None;
    let mut images: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut quiet = 0;
    for n in 1..=f.horizon() {
        let mut changed = false;
        for w in f.of_length(n) {
            let t = a.action(w);
            let r = t.rank();
            match &best {
                Some((br, _, _)) if r > *br => {}
                Some((br, _, _)) if r == *br => {
                    changed |= images.insert(t.image());
                }
                _ => {
                    best = Some((r, w.clone(), t.image()));
                    images = BTreeSet::from([t.image()]);
                    changed = true;
                }
            }
        }
        quiet = if changed { 0 } else { quiet + 1 };
        if quiet == 2 {
            let (rank, word, image) = best.expect("nonempty factor set");
            check_regular(a, f, &word, &image)?;
            return Ok(FMinimal { rank, length_used: n, word, image });
        }
    }
    Err(Error::horizon(f.horizon() + 1, f.horizon()))
}

fn return_actions(a: &Automaton, f: &FactorSet, w: &Word, image: &[u32]) -> Result<Vec<(Word, Perm)>> {
    let returns = right_return_words(f, w)?;
    let set: BTreeSet<u32> = image.iter().copied().collect();
    returns
        .words
        .into_iter()
        .map(|u| {
            let t = a.action(&u);
            let mut img: Vec<u32> = (0..a.state_count() as u32).collect();
            for &q in image {
                let p = t.apply(q);
                if !set.contains(&p) {
                    return Err(Error::Internal(format!(
                        "return word {} does not permute the minimal image",
                        a.alphabet().format(&u)
                    )));
                }
                img[q as usize] = p;
            }
            Ok((u, Perm::from_images(img)?))
        })
        .collect()
}

fn check_regular(a: &Automaton, f: &FactorSet, w: &Word, image: &[u32]) -> Result<()> {
    let actions = return_actions(a, f, w, image)?;
    if actions.is_empty() {
        return Err(Error::Internal("no return word to a minimal-rank word".into()));
    }
    Ok(())
}

/// `G_A(F)` on a minimal image with the return words that generate it.
#[derive(Debug, Clone)]
pub struct FGroup {
    pub word: Word,
    pub image: Vec<u32>,
    pub returns: Vec<(Word, Perm)>,
    pub group: PermGroup,
}

impl FGroup {
    pub fn to_json(&self, a: &Automaton) -> serde_json::Value {
        json!({
            "word": a.alphabet().format(&self.word),
            "image": format_points(&self.image),
            "degree": self.image.len(),
            "generators": self.returns.iter().map(|(u, p)| json!({
                "word": a.alphabet().format(u),
                "perm": p.to_string(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// `G_A(F)` read off at the minimal-rank word found by [`f_min_rank`].
pub fn f_group(a: &Automaton, f: &FactorSet) -> Result<FGroup> {
    let m = f_min_rank(a, f)?;
    f_group_at(a, f, &m.word)
}

/// `G_A(F)` read off at a chosen minimal-rank word `w`.
pub fn f_group_at(a: &Automaton, f: &FactorSet, w: &Word) -> Result<FGroup> {
    f.require_complete()?;
    if !f.contains(w) {
        return Err(Error::NotAFactor);
    }
    let image = a.action(w).image();
    let returns = return_actions(a, f, w, &image)?;
    let group = PermGroup::on_points(
        a.state_count(),
        image.clone(),
        returns.iter().map(|(_, p)| p.clone()).collect(),
    )?;
    Ok(FGroup { word: w.clone(), image, returns, group })
}
