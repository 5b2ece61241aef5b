//! Finite monoids of state transformations.
//!
//! Transformations act on the right: in the product `xy` first `x` acts,
//! then `y`, so a word `uv` acts as `u` followed by `v`.

mod fminimal;
mod green;
mod perm;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::{Alphabet, Budget, Letter, Word};

pub use fminimal::{f_group, f_group_at, f_min_rank, FGroup, FMinimal};
pub use green::{Eggbox, EggboxCell, GreenStructure};
pub use perm::{Perm, PermGroup};

/// Image of an undefined state.
pub const UNDEF: u32 = u32::MAX;

/// A partial map on `0..n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transformation(pub Vec<u32>);

impl Transformation {
    pub fn identity(n: usize) -> Self {
        Transformation((0..n as u32).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, q: u32) -> u32 {
        if q == UNDEF {
            UNDEF
        } else {
            self.0[q as usize]
        }
    }

    /// First `self`, then `other`.
    pub fn then(&self, other: &Transformation) -> Transformation {
        Transformation(self.0.iter().map(|&q| other.apply(q)).collect())
    }

    /// Sorted set of defined images.
    pub fn image(&self) -> Vec<u32> {
        let s: BTreeSet<u32> = self.0.iter().copied().filter(|&q| q != UNDEF).collect();
        s.into_iter().collect()
    }

    pub fn rank(&self) -> usize {
        self.image().len()
    }

    /// Classes of the kernel on the domain, ordered by least element.
    pub fn kernel(&self) -> Vec<Vec<u32>> {
        let mut by_image: HashMap<u32, Vec<u32>> = HashMap::new();
        for (q, &t) in self.0.iter().enumerate() {
            if t != UNDEF {
                by_image.entry(t).or_default().push(q as u32);
            }
        }
        let mut classes: Vec<Vec<u32>> = by_image.into_values().collect();
        classes.sort();
        classes
    }

    pub fn is_permutation(&self) -> bool {
        self.rank() == self.degree() && !self.0.contains(&UNDEF)
    }
}

impl fmt::Debug for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self
            .0
            .iter()
            .map(|&q| if q == UNDEF { "-".into() } else { (q + 1).to_string() })
            .collect();
        write!(f, "[{}]", v.join(" "))
    }
}

/// Points printed 1-based, separated by commas.
pub fn format_points(points: &[u32]) -> String {
    points.iter().map(|p| (p + 1).to_string()).collect::<Vec<_>>().join(",")
}

/// A deterministic, possibly incomplete automaton on states `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automaton {
    alphabet: Alphabet,
    initial: u32,
    terminals: BTreeSet<u32>,
    delta: Vec<Vec<u32>>,
}

impl Automaton {
    /// `delta[q][a]` is the target of `q` under `a`, or [`UNDEF`].
    pub fn new(alphabet: Alphabet, initial: u32, terminals: BTreeSet<u32>, delta: Vec<Vec<u32>>) -> Result<Self> {
        let n = delta.len() as u32;
        if initial >= n || terminals.iter().any(|&t| t >= n) {
            return Err(Error::InvalidArgument("state out of range".into()));
        }
        for row in &delta {
            if row.len() != alphabet.len() || row.iter().any(|&t| t != UNDEF && t >= n) {
                return Err(Error::InvalidArgument("malformed transition row".into()));
            }
        }
        Ok(Automaton { alphabet, initial, terminals, delta })
    }

    /// Parses lines `p a q` (1-based states), `initial p` and `final p …`.
    /// `#` starts a comment.
    pub fn parse(alphabet: &Alphabet, text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        let mut initial = None;
        let mut terminals = BTreeSet::new();
        let mut max_state = 0u32;
        let state = |s: &str| -> Result<u32> {
            let v: u32 = s.parse().map_err(|_| Error::Parse(format!("bad state {s:?}")))?;
            if v == 0 {
                return Err(Error::Parse("states are numbered from 1".into()));
            }
            Ok(v - 1)
        };
        for line in text.lines() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            match parts.as_slice() {
                ["initial", p] => initial = Some(state(p)?),
                ["final", ps @ ..] => {
                    for p in ps {
                        terminals.insert(state(p)?);
                    }
                }
                [p, a, q] => {
                    let mut cs = a.chars();
                    let l = match (cs.next(), cs.next()) {
                        (Some(c), None) => alphabet.index_of(c)?,
                        _ => return Err(Error::Parse(format!("bad letter {a:?}"))),
                    };
                    let (p, q) = (state(p)?, state(q)?);
                    max_state = max_state.max(p).max(q);
                    edges.push((p, l, q));
                }
                _ => return Err(Error::Parse(format!("bad line {line:?}"))),
            }
        }
        let initial = initial.unwrap_or(0);
        for &t in terminals.iter().chain([&initial]) {
            max_state = max_state.max(t);
        }
        let mut delta = vec![vec![UNDEF; alphabet.len()]; max_state as usize + 1];
        for (p, l, q) in edges {
            let slot = &mut delta[p as usize][l as usize];
            if *slot != UNDEF && *slot != q {
                return Err(Error::Parse("nondeterministic transition".into()));
            }
            *slot = q;
        }
        Automaton::new(alphabet.clone(), initial, terminals, delta)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.delta.len()
    }

    pub fn initial(&self) -> u32 {
        self.initial
    }

    pub fn terminals(&self) -> &BTreeSet<u32> {
        &self.terminals
    }

    pub fn next(&self, q: u32, a: Letter) -> u32 {
        if q == UNDEF {
            UNDEF
        } else {
            self.delta[q as usize][a as usize]
        }
    }

    pub fn letter_action(&self, a: Letter) -> Transformation {
        Transformation(self.delta.iter().map(|row| row[a as usize]).collect())
    }

    /// The transformation `φ_A(w)`.
    pub fn action(&self, w: &Word) -> Transformation {
        let mut t = Transformation::identity(self.state_count());
        for &a in w.letters() {
            for q in t.0.iter_mut() {
                *q = self.next(*q, a);
            }
        }
        t
    }

    pub fn accepts(&self, w: &Word) -> bool {
        let q = w.letters().iter().fold(self.initial, |q, &a| self.next(q, a));
        self.terminals.contains(&q)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("initial {}\n", self.initial + 1);
        let finals: Vec<String> = self.terminals.iter().map(|t| (t + 1).to_string()).collect();
        s.push_str(&format!("final {}\n", finals.join(" ")));
        for (p, row) in self.delta.iter().enumerate() {
            for (a, &q) in row.iter().enumerate() {
                if q != UNDEF {
                    s.push_str(&format!("{} {} {}\n", p + 1, self.alphabet.symbol(a as Letter), q + 1));
                }
            }
        }
        s
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph A {\n  rankdir=LR;\n");
        for q in 0..self.state_count() {
            let shape = if self.terminals.contains(&(q as u32)) { "doublecircle" } else { "circle" };
            s.push_str(&format!("  {} [shape={shape}];\n", q + 1));
        }
        s.push_str(&format!("  start [shape=point];\n  start -> {};\n", self.initial + 1));
        for (p, row) in self.delta.iter().enumerate() {
            for (a, &q) in row.iter().enumerate() {
                if q != UNDEF {
                    s.push_str(&format!(
                        "  {} -> {} [label=\"{}\"];\n",
                        p + 1,
                        q + 1,
                        self.alphabet.symbol(a as Letter)
                    ));
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

/// A monoid of transformations with its generators, a shortlex witness
/// word per element, and the right and left Cayley graphs.
#[derive(Debug, Clone)]
pub struct FiniteMonoid {
    alphabet: Alphabet,
    elements: Vec<Transformation>,
    index: HashMap<Transformation, usize>,
    witnesses: Vec<Word>,
    right: Vec<Vec<usize>>,
    left: Vec<Vec<usize>>,
}

impl FiniteMonoid {
    /// Closure of `gens` (one per letter) under products. Element 0 is the
    /// identity and elements are numbered in shortlex order of their
    /// witnesses.
    pub fn generated(alphabet: &Alphabet, gens: &[Transformation], budget: &Budget) -> Result<Self> {
        if gens.len() != alphabet.len() {
            return Err(Error::InvalidArgument("one generator per letter expected".into()));
        }
        let n = gens.first().map(|g| g.degree()).unwrap_or(0);
        if gens.iter().any(|g| g.degree() != n) {
            return Err(Error::InvalidArgument("generators of different degrees".into()));
        }
        let id = Transformation::identity(n);
        let mut elements = vec![id.clone()];
        let mut index = HashMap::from([(id, 0)]);
        let mut witnesses = vec![Word::empty()];
        let mut right: Vec<Vec<usize>> = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let mut row = Vec::with_capacity(gens.len());
            for (a, g) in gens.iter().enumerate() {
                let t = elements[i].then(g);
                let j = match index.get(&t) {
                    Some(&j) => j,
                    None => {
                        if elements.len() >= budget.max_monoid {
                            return Err(Error::BudgetExceeded { what: "monoid size", limit: budget.max_monoid });
                        }
                        let j = elements.len();
                        index.insert(t.clone(), j);
                        elements.push(t);
                        witnesses.push(witnesses[i].appended(a as Letter));
                        queue.push_back(j);
                        j
                    }
                };
                row.push(j);
            }
            debug_assert_eq!(right.len(), i);
            right.push(row);
        }
        let left = elements
            .iter()
            .map(|x| gens.iter().map(|g| index[&g.then(x)]).collect())
            .collect();
        Ok(FiniteMonoid { alphabet: alphabet.clone(), elements, index, witnesses, right, left })
    }

    pub fn transition_monoid(a: &Automaton, budget: &Budget) -> Result<Self> {
        let gens: Vec<Transformation> = a.alphabet.letters().map(|l| a.letter_action(l)).collect();
        Self::generated(&a.alphabet, &gens, budget)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn element(&self, i: usize) -> &Transformation {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Transformation] {
        &self.elements
    }

    pub fn index_of(&self, t: &Transformation) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn witness(&self, i: usize) -> &Word {
        &self.witnesses[i]
    }

    pub fn witness_str(&self, i: usize) -> String {
        let w = &self.witnesses[i];
        if w.is_empty() {
            "1".into()
        } else {
            self.alphabet.format(w)
        }
    }

    pub fn generator(&self, a: Letter) -> usize {
        self.right[0][a as usize]
    }

    pub fn right_cayley(&self) -> &[Vec<usize>] {
        &self.right
    }

    pub fn left_cayley(&self) -> &[Vec<usize>] {
        &self.left
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.index[&self.elements[x].then(&self.elements[y])]
    }

    /// Image of a word under the generator map.
    pub fn eval_word(&self, w: &Word) -> usize {
        w.letters().iter().fold(0, |x, &a| self.right[x][a as usize])
    }

    pub fn is_idempotent(&self, x: usize) -> bool {
        self.mul(x, x) == x
    }

    pub fn is_group(&self) -> bool {
        self.elements.iter().all(Transformation::is_permutation)
    }

    /// Index `i` and period `p` of the cyclic subsemigroup of `s`:
    /// `s^{i+p} = s^i` with both minimal.
    pub fn cyclic_structure(&self, s: usize) -> (usize, usize) {
        let mut seen: HashMap<usize, usize> = HashMap::new();
        let mut cur = s;
        let mut k = 1;
        loop {
            if let Some(&first) = seen.get(&cur) {
                return (first, k - first);
            }
            seen.insert(cur, k);
            cur = self.mul(cur, s);
            k += 1;
        }
    }

    pub fn power(&self, s: usize, k: usize) -> usize {
        let mut r = 0;
        for _ in 0..k {
            r = self.mul(r, s);
        }
        r
    }

    /// The idempotent power `s^ω`: `s^{np}` with `np ≥ i`.
    pub fn omega_power(&self, s: usize) -> usize {
        let (i, p) = self.cyclic_structure(s);
        let k = i.div_ceil(p) * p;
        self.power(s, k)
    }

    pub fn associativity_spot_check(&self, samples: usize) -> bool {
        let n = self.len();
        let pick = |k: usize| (k.wrapping_mul(2654435761)) % n;
        (0..samples).all(|k| {
            let (x, y, z) = (pick(3 * k), pick(3 * k + 1), pick(3 * k + 2));
            self.mul(self.mul(x, y), z) == self.mul(x, self.mul(y, z))
        })
    }
}

#[derive(Serialize)]
struct ElementJson {
    witness: String,
    map: Vec<Option<u32>>,
    idempotent: bool,
}

impl FiniteMonoid {
    pub fn to_json(&self) -> serde_json::Value {
        let els: Vec<ElementJson> = (0..self.len())
            .map(|i| ElementJson {
                witness: self.witness_str(i),
                map: self.elements[i].0.iter().map(|&q| if q == UNDEF { None } else { Some(q + 1) }).collect(),
                idempotent: self.is_idempotent(i),
            })
            .collect();
        serde_json::json!({ "size": self.len(), "elements": els })
    }
}
