//! Free groups: reduced words, Stallings graphs of finitely generated
//! subgroups, index and basis tests, and Hall-type separation.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::{Alphabet, Letter, Word};

/// A letter or its formal inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signed {
    pub letter: Letter,
    pub inverse: bool,
}

impl Signed {
    pub fn pos(letter: Letter) -> Self {
        Signed { letter, inverse: false }
    }

    pub fn neg(letter: Letter) -> Self {
        Signed { letter, inverse: true }
    }

    pub fn inv(self) -> Self {
        Signed { letter: self.letter, inverse: !self.inverse }
    }
}

/// An element of the free group, always kept reduced.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GroupWord(Vec<Signed>);

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord(Vec::new())
    }

    /// Freely reduces `letters`.
    pub fn reduce(letters: impl IntoIterator<Item = Signed>) -> Self {
        let mut out: Vec<Signed> = Vec::new();
        for s in letters {
            if out.last() == Some(&s.inv()) {
                out.pop();
            } else {
                out.push(s);
            }
        }
        GroupWord(out)
    }

    pub fn from_word(w: &Word) -> Self {
        GroupWord(w.letters().iter().map(|&l| Signed::pos(l)).collect())
    }

    /// Letters optionally followed by `^-1`, `^{-1}` or `⁻¹`; whitespace is
    /// ignored and `ε` or `1` alone is the identity.
    pub fn parse(alphabet: &Alphabet, s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() || t == "ε" || t == "1" {
            return Ok(Self::identity());
        }
        let chars: Vec<char> = t.chars().collect();
        let mut out = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let l = alphabet.index_of(chars[i])?;
            i += 1;
            let rest: String = chars[i..].iter().collect();
            let mut inverse = false;
            for suffix in ["^{-1}", "^-1", "⁻¹"] {
                if rest.starts_with(suffix) {
                    inverse = true;
                    i += suffix.chars().count();
                    break;
                }
            }
            if !inverse && chars.get(i) == Some(&'^') {
                return Err(Error::Parse(format!("bad exponent in {s:?}")));
            }
            out.push(Signed { letter: l, inverse });
        }
        Ok(Self::reduce(out))
    }

    pub fn letters(&self) -> &[Signed] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &GroupWord) -> GroupWord {
        Self::reduce(self.0.iter().chain(&other.0).copied())
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord(self.0.iter().rev().map(|s| s.inv()).collect())
    }

    pub fn format(&self, alphabet: &Alphabet) -> String {
        if self.0.is_empty() {
            return "ε".into();
        }
        self.0
            .iter()
            .map(|s| {
                let c = alphabet.symbol(s.letter);
                if s.inverse {
                    format!("{c}^-1")
                } else {
                    c.to_string()
                }
            })
            .collect()
    }
}

impl fmt::Debug for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupWord(")?;
        for s in &self.0 {
            let c = (b'a' + s.letter) as char;
            if s.inverse {
                write!(f, "{}", c.to_ascii_uppercase())?;
            } else {
                write!(f, "{c}")?;
            }
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Index {
    Finite(usize),
    Infinite,
}

/// A folded core graph with base vertex 0. `out[v][a]` is the target of the
/// `a`-edge from `v`, `inn[v][a]` its source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupGraph {
    letters: usize,
    out: Vec<Vec<Option<usize>>>,
    inn: Vec<Vec<Option<usize>>>,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut x = x;
    while parent[x] != r {
        let n = parent[x];
        parent[x] = r;
        x = n;
    }
    r
}

impl SubgroupGraph {
    /// Folds the bouquet of generator loops into the Stallings graph.
    pub fn from_generators(alphabet: &Alphabet, gens: &[GroupWord]) -> Self {
        let mut vertex_count = 1;
        let mut edges: Vec<(usize, Letter, usize)> = Vec::new();
        let gens: BTreeSet<GroupWord> =
            gens.iter().map(|g| GroupWord::reduce(g.0.iter().copied())).filter(|g| !g.is_empty()).collect();
        for g in &gens {
            let mut cur = 0;
            for (i, s) in g.0.iter().enumerate() {
                let next = if i + 1 == g.len() {
                    0
                } else {
                    vertex_count += 1;
                    vertex_count - 1
                };
                if s.inverse {
                    edges.push((next, s.letter, cur));
                } else {
                    edges.push((cur, s.letter, next));
                }
                cur = next;
            }
        }
        Self::fold(alphabet.len(), vertex_count, edges, 0)
    }

    fn fold(letters: usize, n: usize, edges: Vec<(usize, Letter, usize)>, base: usize) -> Self {
        let mut parent: Vec<usize> = (0..n).collect();
        loop {
            let mut changed = false;
            let mut out: HashMap<(usize, Letter), usize> = HashMap::new();
            let mut inn: HashMap<(usize, Letter), usize> = HashMap::new();
            for &(u, a, v) in &edges {
                let (u, v) = (find(&mut parent, u), find(&mut parent, v));
                if let Some(&t) = out.get(&(u, a)) {
                    let t = find(&mut parent, t);
                    if t != v {
                        parent[t] = v;
                        changed = true;
                        continue;
                    }
                }
                if let Some(&s) = inn.get(&(v, a)) {
                    let s = find(&mut parent, s);
                    if s != u {
                        parent[s] = u;
                        changed = true;
                        continue;
                    }
                }
                out.insert((u, a), v);
                inn.insert((v, a), u);
            }
            if !changed {
                break;
            }
        }
        let mut set: BTreeSet<(usize, Letter, usize)> = edges
            .iter()
            .map(|&(u, a, v)| (find(&mut parent, u), a, find(&mut parent, v)))
            .collect();
        let base = find(&mut parent, base);
        // trim hanging trees
        loop {
            let mut degree: HashMap<usize, usize> = HashMap::new();
            for &(u, _, v) in &set {
                *degree.entry(u).or_default() += 1;
                *degree.entry(v).or_default() += 1;
            }
            let leaves: BTreeSet<usize> =
                degree.iter().filter(|&(&v, &d)| v != base && d <= 1).map(|(&v, _)| v).collect();
            if leaves.is_empty() {
                break;
            }
            set.retain(|(u, _, v)| !leaves.contains(u) && !leaves.contains(v));
        }
        Self::canonical(letters, base, &set)
    }

    /// Renumbers vertices in breadth-first order from the base, visiting
    /// outgoing then incoming edges by letter.
    fn canonical(letters: usize, base: usize, edges: &BTreeSet<(usize, Letter, usize)>) -> Self {
        let mut out_map: HashMap<(usize, Letter), usize> = HashMap::new();
        let mut in_map: HashMap<(usize, Letter), usize> = HashMap::new();
        for &(u, a, v) in edges {
            out_map.insert((u, a), v);
            in_map.insert((v, a), u);
        }
        let mut number: HashMap<usize, usize> = HashMap::new();
        let mut order = vec![base];
        number.insert(base, 0);
        let mut queue = VecDeque::from([base]);
        while let Some(v) = queue.pop_front() {
            for map in [&out_map, &in_map] {
                for a in 0..letters as Letter {
                    if let Some(&w) = map.get(&(v, a)) {
                        if let std::collections::hash_map::Entry::Vacant(e) = number.entry(w) {
                            e.insert(order.len());
                            order.push(w);
                            queue.push_back(w);
                        }
                    }
                }
            }
        }
        let n = order.len();
        let mut out = vec![vec![None; letters]; n];
        let mut inn = vec![vec![None; letters]; n];
        for &(u, a, v) in edges {
            let (u, v) = (number[&u], number[&v]);
            out[u][a as usize] = Some(v);
            inn[v][a as usize] = Some(u);
        }
        SubgroupGraph { letters, out, inn }
    }

    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().flatten().filter(|e| e.is_some()).count()
    }

    /// `E − V + 1`.
    pub fn rank(&self) -> usize {
        self.edge_count() + 1 - self.vertex_count()
    }

    pub fn is_complete(&self) -> bool {
        self.out.iter().all(|row| row.iter().all(Option::is_some))
    }

    pub fn index(&self) -> Index {
        if self.is_complete() {
            Index::Finite(self.vertex_count())
        } else {
            Index::Infinite
        }
    }

    fn step(&self, v: usize, s: Signed) -> Option<usize> {
        if s.inverse {
            self.inn[v][s.letter as usize]
        } else {
            self.out[v][s.letter as usize]
        }
    }

    /// Reads `w` from the base as far as possible; returns the vertex
    /// reached and the number of letters read.
    fn read(&self, w: &GroupWord) -> (usize, usize) {
        let mut v = 0;
        for (i, &s) in w.0.iter().enumerate() {
            match self.step(v, s) {
                Some(t) => v = t,
                None => return (v, i),
            }
        }
        (v, w.len())
    }

    pub fn contains(&self, w: &GroupWord) -> bool {
        let w = GroupWord::reduce(w.0.iter().copied());
        self.read(&w) == (0, w.len())
    }

    /// A free basis read off a breadth-first spanning tree.
    pub fn basis(&self) -> Vec<GroupWord> {
        let n = self.vertex_count();
        let mut path: Vec<Option<GroupWord>> = vec![None; n];
        path[0] = Some(GroupWord::identity());
        let mut tree: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for inverse in [false, true] {
                for a in 0..self.letters as Letter {
                    let s = Signed { letter: a, inverse };
                    if let Some(t) = self.step(v, s) {
                        if path[t].is_none() {
                            let p = path[v].as_ref().unwrap().mul(&GroupWord(vec![s]));
                            path[t] = Some(p);
                            let (src, letter) = if inverse { (t, a) } else { (v, a) };
                            tree.insert((src, letter as usize));
                            queue.push_back(t);
                        }
                    }
                }
            }
        }
        let mut out = Vec::new();
        for u in 0..n {
            for a in 0..self.letters {
                if let Some(v) = self.out[u][a] {
                    if !tree.contains(&(u, a)) {
                        let g = path[u]
                            .as_ref()
                            .unwrap()
                            .mul(&GroupWord(vec![Signed::pos(a as Letter)]))
                            .mul(&path[v].as_ref().unwrap().inverse());
                        out.push(g);
                    }
                }
            }
        }
        out
    }

    /// A finite-index `K ⊇ H` with `x ∉ K`: the path of `x` is glued to the
    /// graph and every partial letter permutation is completed by matching
    /// free sources and free targets in increasing order.
    pub fn separating_subgroup(&self, x: &GroupWord) -> Result<SubgroupGraph> {
        let x = GroupWord::reduce(x.0.iter().copied());
        if self.contains(&x) {
            return Err(Error::NotSeparable);
        }
        let mut out = self.out.clone();
        let mut inn = self.inn.clone();
        let (mut v, read) = self.read(&x);
        for &s in &x.0[read..] {
            let t = out.len();
            out.push(vec![None; self.letters]);
            inn.push(vec![None; self.letters]);
            let (src, dst) = if s.inverse { (t, v) } else { (v, t) };
            out[src][s.letter as usize] = Some(dst);
            inn[dst][s.letter as usize] = Some(src);
            v = t;
        }
        let n = out.len();
        for a in 0..self.letters {
            let sources: Vec<usize> = (0..n).filter(|&u| out[u][a].is_none()).collect();
            let targets: Vec<usize> = (0..n).filter(|&u| inn[u][a].is_none()).collect();
            for (&u, &t) in sources.iter().zip(&targets) {
                out[u][a] = Some(t);
                inn[t][a] = Some(u);
            }
        }
        let edges: BTreeSet<(usize, Letter, usize)> = (0..n)
            .flat_map(|u| (0..self.letters).map(move |a| (u, a)))
            .map(|(u, a)| (u, a as Letter, out[u][a].expect("completed")))
            .collect();
        let k = Self::canonical(self.letters, 0, &edges);
        if k.contains(&x) || !k.is_complete() {
            return Err(Error::Internal("completion failed to separate".into()));
        }
        Ok(k)
    }

    pub fn to_dot(&self, alphabet: &Alphabet) -> String {
        let mut s = String::from("digraph H {\n  0 [shape=doublecircle];\n");
        for u in 0..self.vertex_count() {
            for a in 0..self.letters {
                if let Some(v) = self.out[u][a] {
                    s.push_str(&format!("  {u} -> {v} [label=\"{}\"];\n", alphabet.symbol(a as Letter)));
                }
            }
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self, alphabet: &Alphabet) -> serde_json::Value {
        let mut edges = Vec::new();
        for u in 0..self.vertex_count() {
            for a in 0..self.letters {
                if let Some(v) = self.out[u][a] {
                    edges.push(serde_json::json!([u, alphabet.symbol(a as Letter).to_string(), v]));
                }
            }
        }
        serde_json::json!({
            "vertices": self.vertex_count(),
            "edges": edges,
            "rank": self.rank(),
            "index": match self.index() { Index::Finite(n) => serde_json::json!(n), Index::Infinite => serde_json::json!("infinite") },
        })
    }
}

pub fn subgroup(alphabet: &Alphabet, gens: &[GroupWord]) -> SubgroupGraph {
    SubgroupGraph::from_generators(alphabet, gens)
}

/// `⟨X⟩` is the whole free group.
pub fn generates(alphabet: &Alphabet, gens: &[GroupWord]) -> bool {
    subgroup(alphabet, gens).index() == Index::Finite(1)
}

/// `X` generates and has exactly `|A|` distinct elements.
pub fn is_basis_of_free_group(alphabet: &Alphabet, gens: &[GroupWord]) -> bool {
    let distinct: BTreeSet<GroupWord> =
        gens.iter().map(|g| GroupWord::reduce(g.0.iter().copied())).collect();
    !distinct.contains(&GroupWord::identity()) && distinct.len() == alphabet.len() && generates(alphabet, gens)
}

/// Convenience wrapper over positive words.
pub fn words_to_group(words: impl IntoIterator<Item = Word>) -> Vec<GroupWord> {
    words.into_iter().map(|w| GroupWord::from_word(&w)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::latin(2)
    }

    fn g(a: &Alphabet, s: &str) -> GroupWord {
        GroupWord::parse(a, s).unwrap()
    }

    fn gs(a: &Alphabet, xs: &[&str]) -> Vec<GroupWord> {
        xs.iter().map(|s| g(a, s)).collect()
    }

    #[test]
    fn reduction() {
        let a = ab();
        assert!(g(&a, "a a^{-1}").is_empty());
        assert_eq!(g(&a, "a b b^-1 a"), g(&a, "aa"));
        let w = g(&a, "ab^-1aab");
        assert!(w.mul(&w.inverse()).is_empty());
        assert_eq!(w.format(&a), "ab^-1aab");
        assert!(GroupWord::parse(&a, "a^2").is_err());
    }

    #[test]
    fn roses_and_trivial() {
        let a = ab();
        let h = subgroup(&a, &gs(&a, &["a", "ba"]));
        assert_eq!((h.vertex_count(), h.rank(), h.index()), (1, 2, Index::Finite(1)));
        let t = subgroup(&a, &[]);
        assert_eq!((t.vertex_count(), t.rank()), (1, 0));
        assert!(t.contains(&GroupWord::identity()));
    }

    #[test]
    fn parity_kernel() {
        let a = ab();
        let h = subgroup(&a, &gs(&a, &["aa", "ab", "ba"]));
        assert_eq!(h.rank(), 3);
        assert_eq!(h.index(), Index::Finite(2));
        assert!(h.contains(&g(&a, "ab")));
        assert!(h.contains(&g(&a, "a^-1b")));
        assert!(!h.contains(&g(&a, "a")));
        assert!(!generates(&a, &gs(&a, &["aa", "ab", "ba"])));
    }

    #[test]
    fn infinite_index() {
        let a = ab();
        assert_eq!(subgroup(&a, &gs(&a, &["a"])).index(), Index::Infinite);
    }

    #[test]
    fn bases() {
        let a = ab();
        assert!(is_basis_of_free_group(&a, &gs(&a, &["a", "ba"])));
        assert!(is_basis_of_free_group(&a, &gs(&a, &["ab", "aab"])));
        assert!(!is_basis_of_free_group(&a, &gs(&a, &["a", "a"])));
        assert!(generates(&a, &gs(&a, &["a", "b"])));
        let abc = Alphabet::latin(3);
        assert!(is_basis_of_free_group(&abc, &gs(&abc, &["a", "ba", "ca"])));
    }

    #[test]
    fn folding_is_confluent() {
        let a = ab();
        let x = subgroup(&a, &gs(&a, &["aba^-1", "abba^-1", "bab"]));
        let y = subgroup(&a, &gs(&a, &["bab", "ab^-1b^-1a^-1", "aba^-1"]));
        assert_eq!(x, y);
    }

    #[test]
    fn basis_regenerates() {
        let a = ab();
        let h = subgroup(&a, &gs(&a, &["aa", "ab", "ba"]));
        let b = h.basis();
        assert_eq!(b.len(), 3);
        assert_eq!(subgroup(&a, &b), h);
    }

    #[test]
    fn hall_separation() {
        let a = ab();
        let h = subgroup(&a, &gs(&a, &["aa"]));
        let x = g(&a, "a");
        let k = h.separating_subgroup(&x).unwrap();
        assert!(k.is_complete());
        assert!(k.contains(&g(&a, "aa")));
        assert!(!k.contains(&x));
        assert_eq!(h.separating_subgroup(&g(&a, "aaaa")), Err(Error::NotSeparable));

        let h = subgroup(&a, &gs(&a, &["ab", "ba^-1"]));
        let x = g(&a, "b");
        let k = h.separating_subgroup(&x).unwrap();
        assert!(k.contains(&g(&a, "ab")) && k.contains(&g(&a, "ba^-1")) && !k.contains(&x));
    }

    #[test]
    fn dot_export() {
        let a = ab();
        let d = subgroup(&a, &gs(&a, &["aa", "ab", "ba"])).to_dot(&a);
        assert!(d.starts_with("digraph H {"));
        assert_eq!(d.matches("->").count(), 4);
    }
}
