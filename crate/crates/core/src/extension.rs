//! Extension graphs and the neutral, connected, acyclic and tree properties.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::factors::FactorSet;
use crate::words::{Alphabet, Letter, Word};

/// The bipartite graph `E_F(w)`: left vertices `a` with `aw ∈ F`, right
/// vertices `b` with `wb ∈ F`, edges `(a, b)` with `awb ∈ F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionGraph {
    pub word: Word,
    pub left: Vec<Letter>,
    pub right: Vec<Letter>,
    pub edges: Vec<(Letter, Letter)>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut x = x;
        while self.parent[x] != r {
            let next = self.parent[x];
            self.parent[x] = r;
            x = next;
        }
        r
    }

    /// Returns false when `x` and `y` were already joined.
    fn union(&mut self, x: usize, y: usize) -> bool {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        self.parent[rx] = ry;
        true
    }
}

impl ExtensionGraph {
    pub fn left_count(&self) -> usize {
        self.left.len()
    }

    pub fn right_count(&self) -> usize {
        self.right.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `m(w) = e(w) − ℓ(w) − r(w) + 1`.
    pub fn multiplicity(&self) -> i64 {
        self.edges.len() as i64 - self.left.len() as i64 - self.right.len() as i64 + 1
    }

    /// Components and whether some edge closed a cycle.
    fn components(&self, n: usize) -> (usize, bool) {
        let mut uf = UnionFind::new(2 * n);
        let mut cyclic = false;
        for &(a, b) in &self.edges {
            if !uf.union(a as usize, n + b as usize) {
                cyclic = true;
            }
        }
        let mut roots: Vec<usize> = self
            .left
            .iter()
            .map(|&a| a as usize)
            .chain(self.right.iter().map(|&b| n + b as usize))
            .map(|v| uf.find(v))
            .collect();
        roots.sort_unstable();
        roots.dedup();
        (roots.len(), cyclic)
    }

    fn size_bound(&self) -> usize {
        self.left
            .iter()
            .chain(&self.right)
            .map(|&x| x as usize + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        self.components(self.size_bound()).0 <= 1
    }

    pub fn is_acyclic(&self) -> bool {
        !self.components(self.size_bound()).1
    }

    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.is_acyclic()
    }

    pub fn to_dot(&self, alphabet: &Alphabet) -> String {
        let w = alphabet.format(&self.word);
        let name = if w.is_empty() { "ε".to_string() } else { w };
        let mut s = format!("graph \"E({name})\" {{\n  rankdir=LR;\n");
        s.push_str("  { rank=same;");
        for &a in &self.left {
            s.push_str(&format!(" \"L{0}\" [label=\"{0}\"];", alphabet.symbol(a)));
        }
        s.push_str(" }\n  { rank=same;");
        for &b in &self.right {
            s.push_str(&format!(" \"R{0}\" [label=\"{0}\"];", alphabet.symbol(b)));
        }
        s.push_str(" }\n");
        for &(a, b) in &self.edges {
            s.push_str(&format!("  \"L{}\" -- \"R{}\";\n", alphabet.symbol(a), alphabet.symbol(b)));
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self, alphabet: &Alphabet) -> serde_json::Value {
        let sym = |l: &Letter| alphabet.symbol(*l).to_string();
        serde_json::json!({
            "word": alphabet.format(&self.word),
            "left": self.left.iter().map(sym).collect::<Vec<_>>(),
            "right": self.right.iter().map(sym).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|(a, b)| [sym(a), sym(b)]).collect::<Vec<_>>(),
            "multiplicity": self.multiplicity(),
        })
    }
}

pub fn extension_graph(f: &FactorSet, w: &Word) -> Result<ExtensionGraph> {
    f.require_complete()?;
    f.require_horizon(w.len() + 2)?;
    if !f.contains(w) {
        return Err(Error::NotAFactor);
    }
    let letters: Vec<Letter> = f.alphabet().letters().collect();
    let left = letters.iter().copied().filter(|&a| f.contains(&w.prepended(a))).collect();
    let right = letters.iter().copied().filter(|&b| f.contains(&w.appended(b))).collect();
    let mut edges = Vec::new();
    for &a in &letters {
        let aw = w.prepended(a);
        for &b in &letters {
            if f.contains(&aw.appended(b)) {
                edges.push((a, b));
            }
        }
    }
    Ok(ExtensionGraph { word: w.clone(), left, right, edges })
}

pub fn multiplicity(f: &FactorSet, w: &Word) -> Result<i64> {
    Ok(extension_graph(f, w)?.multiplicity())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WordRecord {
    pub word: String,
    pub multiplicity: i64,
    pub connected: bool,
    pub acyclic: bool,
}

/// Properties of all extension graphs of words of length `≤ up_to`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub up_to: usize,
    pub neutral: bool,
    pub connected: bool,
    pub acyclic: bool,
    pub tree: bool,
    pub words: Vec<WordRecord>,
}

impl Classification {
    /// First word whose multiplicity is nonzero, if any.
    pub fn first_non_neutral(&self) -> Option<&WordRecord> {
        self.words.iter().find(|r| r.multiplicity != 0)
    }

    pub fn record(&self, word: &str) -> Option<&WordRecord> {
        self.words.iter().find(|r| r.word == word)
    }
}

pub fn classify(f: &FactorSet, up_to: usize) -> Result<Classification> {
    f.require_complete()?;
    f.require_horizon(up_to + 2)?;
    let mut words = Vec::new();
    for n in 0..=up_to {
        for w in f.of_length(n) {
            let g = extension_graph(f, w)?;
            words.push(WordRecord {
                word: f.alphabet().format(w),
                multiplicity: g.multiplicity(),
                connected: g.is_connected(),
                acyclic: g.is_acyclic(),
            });
        }
    }
    let neutral = words.iter().all(|r| r.multiplicity == 0);
    let connected = words.iter().all(|r| r.connected);
    let acyclic = words.iter().all(|r| r.acyclic);
    Ok(Classification { up_to, neutral, connected, acyclic, tree: connected && acyclic, words })
}
