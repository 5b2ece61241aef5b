//! Bifix codes, parses and F-degree, group codes `Z ∩ F`, the minimal
//! automaton of `X*` and the F-group `G_X(F)`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::factors::FactorSet;
use crate::monoid::{f_group, f_group_at, Automaton, FGroup, Perm, PermGroup, UNDEF};
use crate::words::{Alphabet, Budget, Word};

pub fn is_prefix_code(words: &BTreeSet<Word>) -> bool {
    !words.contains(&Word::empty())
        && words
            .iter()
            .all(|x| words.iter().all(|y| x == y || !y.starts_with(x)))
}

pub fn is_bifix(words: &BTreeSet<Word>) -> bool {
    is_prefix_code(words) && words.iter().all(|x| words.iter().all(|y| x == y || !y.ends_with(x)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BifixCode {
    alphabet: Alphabet,
    words: BTreeSet<Word>,
}

impl BifixCode {
    pub fn new(alphabet: &Alphabet, words: BTreeSet<Word>) -> Result<Self> {
        if !is_bifix(&words) {
            return Err(Error::NotBifix);
        }
        Ok(BifixCode { alphabet: alphabet.clone(), words })
    }

    pub fn parse(alphabet: &Alphabet, text: &str) -> Result<Self> {
        let words = text
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| alphabet.parse(s))
            .collect::<Result<BTreeSet<Word>>>()?;
        Self::new(alphabet, words)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn words(&self) -> &BTreeSet<Word> {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.contains(w)
    }

    pub fn max_len(&self) -> usize {
        self.words.iter().map(Word::len).max().unwrap_or(0)
    }

    /// Words sorted by length then lexicographically.
    pub fn names(&self) -> Vec<String> {
        self.words.iter().map(|w| self.alphabet.format(w)).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "size": self.len(), "words": self.names() })
    }

    /// True if `w` occurs in some `x ∈ X` as `x = uwv` with `u, v` nonempty.
    pub fn is_internal_factor(&self, w: &Word) -> bool {
        self.words.iter().any(|x| {
            x.len() >= w.len() + 2 && x.occurrences(w).iter().any(|&i| i >= 1 && i + w.len() < x.len())
        })
    }

    fn has_suffix_in(&self, w: &Word) -> bool {
        self.words.iter().any(|x| w.ends_with(x))
    }

    fn has_prefix_in(&self, w: &Word) -> bool {
        self.words.iter().any(|x| w.starts_with(x))
    }

    /// The factorization of `w` over `X`, unique since `X` is a prefix code.
    pub fn factorize(&self, w: &Word) -> Option<Vec<Word>> {
        let mut out = Vec::new();
        let mut rest = w.clone();
        while !rest.is_empty() {
            let x = self.words.iter().find(|x| rest.starts_with(x))?;
            rest = rest.strip_prefix(x).expect("prefix");
            out.push(x.clone());
        }
        Some(out)
    }

    /// Proper prefixes of the code words, the states of the literal trie.
    pub fn proper_prefixes(&self) -> BTreeSet<Word> {
        self.words.iter().flat_map(|x| (0..x.len()).map(move |i| x.prefix(i))).collect()
    }

    /// The trie of `X` with each code word drawn as a path back to the root.
    pub fn trie_dot(&self) -> String {
        let prefixes: Vec<Word> = self.proper_prefixes().into_iter().collect();
        let id: BTreeMap<&Word, usize> = prefixes.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut s = String::from("digraph X {\n  rankdir=LR;\n");
        for (i, p) in prefixes.iter().enumerate() {
            let label = if p.is_empty() { "ε".to_string() } else { self.alphabet.format(p) };
            let _ = writeln!(s, "  n{i} [label=\"{label}\"];");
        }
        let mut leaf = 0;
        for p in &prefixes {
            for a in self.alphabet.letters() {
                let q = p.appended(a);
                let sym = self.alphabet.symbol(a);
                if let Some(&j) = id.get(&q) {
                    let _ = writeln!(s, "  n{} -> n{} [label=\"{}\"];", id[p], j, sym);
                } else if self.words.contains(&q) {
                    let _ = writeln!(s, "  x{leaf} [label=\"{}\", shape=doublecircle];", self.alphabet.format(&q));
                    let _ = writeln!(s, "  n{} -> x{leaf} [label=\"{}\"];", id[p], sym);
                    leaf += 1;
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

/// A parse `w = p·x₁⋯x_k·q` where `p` has no suffix and `q` no prefix in `X`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Parse {
    pub p: Word,
    pub x: Vec<Word>,
    pub q: Word,
}

pub fn parses(w: &Word, code: &BifixCode) -> Vec<Parse> {
    let n = w.len();
    let mut out = Vec::new();
    for i in 0..=n {
        let p = w.prefix(i);
        if code.has_suffix_in(&p) {
            continue;
        }
        for j in i..=n {
            let q = w.slice(j, n);
            if code.has_prefix_in(&q) {
                continue;
            }
            if let Some(x) = code.factorize(&w.slice(i, j)) {
                out.push(Parse { p: p.clone(), x, q });
            }
        }
    }
    out
}

/// Result of [`f_degree`]: the degree and a word of `F` attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FDegree {
    pub degree: usize,
    pub witness: Word,
}

/// `d_X(F)`, read off at the shortlex-least word of `F` that is not an
/// internal factor of `X`.
pub fn f_degree(code: &BifixCode, f: &FactorSet) -> Result<FDegree> {
    f.require_complete()?;
    if let Some(x) = code.words.iter().find(|x| !f.contains(x) && x.len() <= f.horizon()) {
        return Err(Error::InvalidArgument(format!("{} is not in F", code.alphabet.format(x))));
    }
    let start = code.max_len().max(1);
    for n in start..=f.horizon() {
        if let Some(w) = f.of_length(n).find(|w| !code.is_internal_factor(w)) {
            return Ok(FDegree { degree: parses(w, code).len(), witness: w.clone() });
        }
    }
    Err(Error::horizon(start.max(f.horizon() + 1), f.horizon()))
}

/// A group code: the words whose coset walk returns to the base coset.
/// Cosets are represented by the points of a transitive action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupCodeSpec {
    alphabet: Alphabet,
    /// `actions[a]` acts on cosets `0..degree`; coset 0 is `H`.
    actions: Vec<Perm>,
}

impl GroupCodeSpec {
    /// `H` is the stabilizer of `point` in the group generated by the letter
    /// images; cosets are the points of its orbit.
    pub fn point_stabilizer(alphabet: &Alphabet, images: &[Perm], point: u32) -> Result<Self> {
        if images.len() != alphabet.len() {
            return Err(Error::InvalidArgument("one permutation per letter expected".into()));
        }
        let degree = images.first().map(Perm::degree).unwrap_or(0);
        if point as usize >= degree.max(1) {
            return Err(Error::InvalidArgument("base point out of range".into()));
        }
        let mut index = HashMap::from([(point, 0u32)]);
        let mut orbit = vec![point];
        let mut k = 0;
        while k < orbit.len() {
            for g in images {
                let q = g.apply(orbit[k]);
                if let std::collections::hash_map::Entry::Vacant(e) = index.entry(q) {
                    e.insert(orbit.len() as u32);
                    orbit.push(q);
                }
            }
            k += 1;
        }
        let actions = images
            .iter()
            .map(|g| Perm(orbit.iter().map(|&p| index[&g.apply(p)]).collect()))
            .collect();
        Ok(GroupCodeSpec { alphabet: alphabet.clone(), actions })
    }

    /// `H` given by its elements; cosets `Hg` are enumerated as an orbit
    /// under right multiplication by the letter images.
    pub fn subgroup(alphabet: &Alphabet, images: &[Perm], h: &[Perm], budget: &Budget) -> Result<Self> {
        if images.len() != alphabet.len() {
            return Err(Error::InvalidArgument("one permutation per letter expected".into()));
        }
        let degree = images.first().map(Perm::degree).unwrap_or(0);
        let mut hs: BTreeSet<Perm> = h.iter().cloned().collect();
        hs.insert(Perm::identity(degree));
        let closed = hs.iter().all(|x| hs.iter().all(|y| hs.contains(&x.then(y))));
        if !closed {
            return Err(Error::InvalidArgument("H is not a subgroup".into()));
        }
        let coset = |g: &Perm| -> Vec<Perm> {
            let mut c: Vec<Perm> = hs.iter().map(|x| x.then(g)).collect();
            c.sort();
            c
        };
        let base = coset(&Perm::identity(degree));
        let mut index: HashMap<Vec<Perm>, u32> = HashMap::from([(base.clone(), 0)]);
        let mut reps = vec![Perm::identity(degree)];
        let mut edges: Vec<Vec<u32>> = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let mut row = Vec::new();
            for g in images {
                let r = reps[i].then(g);
                let c = coset(&r);
                let j = match index.get(&c) {
                    Some(&j) => j,
                    None => {
                        if reps.len() >= budget.max_group_order {
                            return Err(Error::BudgetExceeded { what: "coset count", limit: budget.max_group_order });
                        }
                        let j = reps.len() as u32;
                        index.insert(c, j);
                        reps.push(r);
                        queue.push_back(j as usize);
                        j
                    }
                };
                row.push(j);
            }
            if edges.len() <= i {
                edges.resize(i + 1, Vec::new());
            }
            edges[i] = row;
        }
        let actions = (0..images.len())
            .map(|a| Perm(edges.iter().map(|row| row[a]).collect()))
            .collect();
        Ok(GroupCodeSpec { alphabet: alphabet.clone(), actions })
    }

    /// Index of `H`.
    pub fn degree(&self) -> usize {
        self.actions.first().map(Perm::degree).unwrap_or(1)
    }

    pub fn actions(&self) -> &[Perm] {
        &self.actions
    }

    pub fn walk(&self, w: &Word) -> u32 {
        w.letters().iter().fold(0, |c, &a| self.actions[a as usize].apply(c))
    }

    /// The coset group as a permutation group on `0..degree`.
    pub fn group(&self) -> Result<PermGroup> {
        PermGroup::new(self.degree(), self.actions.clone())
    }
}

/// `X = Z ∩ F`: words of `F` whose coset walk first returns to `H` at the end.
pub fn group_code_intersection(spec: &GroupCodeSpec, f: &FactorSet) -> Result<BifixCode> {
    f.require_complete()?;
    if spec.alphabet != *f.alphabet() {
        return Err(Error::InvalidArgument("group code and factor set use different alphabets".into()));
    }
    let mut words = BTreeSet::new();
    // pending: words of F none of whose nonempty prefixes returns to H
    let mut pending: BTreeMap<Word, u32> = BTreeMap::from([(Word::empty(), 0)]);
    let mut n = 0;
    while !pending.is_empty() {
        n += 1;
        if n > f.horizon() {
            return Err(Error::horizon(n, f.horizon()));
        }
        let mut next = BTreeMap::new();
        for (w, c) in &pending {
            for (a, g) in spec.actions.iter().enumerate() {
                let u = w.appended(a as u8);
                if !f.contains(&u) {
                    continue;
                }
                let d = g.apply(*c);
                if d == 0 {
                    words.insert(u);
                } else {
                    next.insert(u, d);
                }
            }
        }
        pending = next;
    }
    BifixCode::new(&spec.alphabet, words)
}

/// The minimal automaton of `X*`: the trie of `X` with code words returning
/// to the root, minimized. States are renumbered breadth-first from the
/// initial state, letters in alphabet order.
pub fn minimal_automaton_of_star(code: &BifixCode) -> Automaton {
    let alphabet = code.alphabet.clone();
    let k = alphabet.len();
    let prefixes: Vec<Word> = code.proper_prefixes().into_iter().collect();
    if prefixes.is_empty() {
        let a = Automaton::new(alphabet, 0, BTreeSet::from([0]), vec![vec![UNDEF; k]]);
        return a.expect("valid");
    }
    let id: HashMap<&Word, u32> = prefixes.iter().enumerate().map(|(i, p)| (p, i as u32)).collect();
    let root = id[&Word::empty()];
    let sink = prefixes.len() as u32;
    let mut delta: Vec<Vec<u32>> = prefixes
        .iter()
        .map(|p| {
            alphabet
                .letters()
                .map(|a| {
                    let q = p.appended(a);
                    if let Some(&j) = id.get(&q) {
                        j
                    } else if code.words.contains(&q) {
                        root
                    } else {
                        sink
                    }
                })
                .collect()
        })
        .collect();
    delta.push(vec![sink; k]);
    // Moore refinement
    let n = delta.len();
    let mut block: Vec<usize> = (0..n).map(|q| usize::from(q as u32 == root)).collect();
    let mut count = 0;
    loop {
        let mut sigs: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let next: Vec<usize> = (0..n)
            .map(|q| {
                let sig = (block[q], delta[q].iter().map(|&t| block[t as usize]).collect());
                let m = sigs.len();
                *sigs.entry(sig).or_insert(m)
            })
            .collect();
        block = next;
        if sigs.len() == count {
            break;
        }
        count = sigs.len();
    }
    let sink_block = block[sink as usize];
    let mut number: HashMap<usize, u32> = HashMap::from([(block[root as usize], 0)]);
    let mut reps = vec![root];
    let mut rows: Vec<Vec<u32>> = Vec::new();
    let mut i = 0;
    while i < reps.len() {
        let q = reps[i] as usize;
        let mut row = Vec::with_capacity(k);
        for &t in &delta[q] {
            let b = block[t as usize];
            if b == sink_block {
                row.push(UNDEF);
                continue;
            }
            let next = number.len() as u32;
            let j = *number.entry(b).or_insert_with(|| {
                reps.push(t);
                next
            });
            row.push(j);
        }
        rows.push(row);
        i += 1;
    }
    Automaton::new(alphabet, 0, BTreeSet::from([0]), rows).expect("valid")
}

/// `G_X(F)`, the F-group of the minimal automaton of `X*`.
pub fn g_x_f(code: &BifixCode, f: &FactorSet) -> Result<FGroup> {
    f_group(&minimal_automaton_of_star(code), f)
}

/// `G_X(F)` read off at a chosen minimal-rank word.
pub fn g_x_f_at(code: &BifixCode, f: &FactorSet, w: &Word) -> Result<FGroup> {
    f_group_at(&minimal_automaton_of_star(code), f, w)
}
