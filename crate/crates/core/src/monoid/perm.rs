use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::words::Budget;

/// A permutation of `0..n`, acting on the right: `i^{gh} = (i^g)^h`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(pub Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u32).collect())
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i as usize >= images.len() || std::mem::replace(&mut seen[i as usize], true) {
                return Err(Error::InvalidArgument("not a permutation".into()));
            }
        }
        Ok(Perm(images))
    }

    /// Parses cycle notation with 1-based points, e.g. `(1 2 3)(4,5)`.
    /// An empty string or `()` is the identity.
    pub fn parse_cycles(s: &str, degree: usize) -> Result<Self> {
        let mut img: Vec<u32> = (0..degree as u32).collect();
        let mut seen = vec![false; degree];
        let mut rest = s.trim();
        while !rest.is_empty() {
            let body_end = rest.find(')').ok_or_else(|| Error::Parse(format!("unclosed cycle in {s:?}")))?;
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected '(' in {s:?}")))?;
            let body = &body[..body_end - 1];
            let pts = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| {
                    let v: usize = t.parse().map_err(|_| Error::Parse(format!("bad point {t:?}")))?;
                    if v == 0 || v > degree {
                        return Err(Error::Parse(format!("point {v} outside 1..={degree}")));
                    }
                    Ok(v as u32 - 1)
                })
                .collect::<Result<Vec<u32>>>()?;
            for (k, &p) in pts.iter().enumerate() {
                if std::mem::replace(&mut seen[p as usize], true) {
                    return Err(Error::Parse(format!("point {} repeated", p + 1)));
                }
                img[p as usize] = pts[(k + 1) % pts.len()];
            }
            rest = rest[body_end + 1..].trim_start();
        }
        Ok(Perm(img))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: u32) -> u32 {
        self.0[i as usize]
    }

    /// First `self`, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = p.then(self);
            k += 1;
        }
        k
    }

    /// Nontrivial cycles, each starting at its least point, sorted.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            let mut c = vec![start as u32];
            seen[start] = true;
            let mut j = self.0[start];
            while j as usize != start {
                seen[j as usize] = true;
                c.push(j);
                j = self.0[j as usize];
            }
            out.push(c);
        }
        out
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs = self.cycles();
        if cs.is_empty() {
            return write!(f, "()");
        }
        for c in cs {
            let pts: Vec<String> = c.iter().map(|p| (p + 1).to_string()).collect();
            write!(f, "({})", pts.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{self}")
    }
}

/// A permutation group given by generators, acting on `points`; other
/// points of `0..degree` are fixed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    points: Vec<u32>,
    generators: Vec<Perm>,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<Self> {
        Self::on_points(degree, (0..degree as u32).collect(), generators)
    }

    pub fn on_points(degree: usize, points: Vec<u32>, generators: Vec<Perm>) -> Result<Self> {
        if generators.iter().any(|g| g.degree() != degree) {
            return Err(Error::InvalidArgument("generator of wrong degree".into()));
        }
        let set: HashSet<u32> = points.iter().copied().collect();
        for g in &generators {
            for i in 0..degree as u32 {
                let moved = g.apply(i) != i;
                if moved && !set.contains(&i) {
                    return Err(Error::InvalidArgument("generator moves a point outside the domain".into()));
                }
            }
        }
        Ok(PermGroup { degree, points, generators })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup { degree, points: (0..degree as u32).collect(), generators: Vec::new() }
    }

    /// The cyclic group `Z/n` acting regularly on `n` points.
    pub fn cyclic(n: usize) -> Self {
        let g = Perm((0..n as u32).map(|i| (i + 1) % n as u32).collect());
        PermGroup::new(n, vec![g]).expect("valid")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// The domain the group acts on.
    pub fn points(&self) -> &[u32] {
        &self.points
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    /// Every element, identity first, in breadth-first order over the
    /// generators.
    pub fn elements(&self, budget: &Budget) -> Result<Vec<Perm>> {
        let id = Perm::identity(self.degree);
        let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
        let mut out = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(p) = queue.pop_front() {
            for g in &self.generators {
                let q = p.then(g);
                if seen.insert(q.clone()) {
                    if out.len() >= budget.max_group_order {
                        return Err(Error::BudgetExceeded { what: "group order", limit: budget.max_group_order });
                    }
                    out.push(q.clone());
                    queue.push_back(q);
                }
            }
        }
        Ok(out)
    }

    pub fn order(&self, budget: &Budget) -> Result<usize> {
        Ok(self.elements(budget)?.len())
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.iter().all(Perm::is_identity)
    }

    pub fn contains(&self, p: &Perm, budget: &Budget) -> Result<bool> {
        Ok(self.elements(budget)?.contains(p))
    }

    /// Isomorphism test by searching for generator images that extend to a
    /// bijective homomorphism.
    pub fn is_isomorphic_small(&self, other: &PermGroup, budget: &Budget) -> Result<bool> {
        let g = self.elements(budget)?;
        let h = other.elements(budget)?;
        if g.len() != h.len() {
            return Ok(false);
        }
        let profile = |els: &[Perm]| {
            let mut m: BTreeMap<usize, usize> = BTreeMap::new();
            for e in els {
                *m.entry(e.order()).or_default() += 1;
            }
            m
        };
        if profile(&g) != profile(&h) {
            return Ok(false);
        }
        let gens: Vec<&Perm> = self.generators.iter().filter(|p| !p.is_identity()).collect();
        if gens.is_empty() {
            return Ok(true);
        }
        let search = (h.len() as f64).powi(gens.len() as i32);
        if search > 1e7 {
            return Err(Error::BudgetExceeded { what: "isomorphism search", limit: 10_000_000 });
        }
        // spanning-tree words: parent element and generator
        let index: HashMap<&Perm, usize> = g.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut tree: Vec<Option<(usize, usize)>> = vec![None; g.len()];
        let mut order = vec![0usize];
        let mut visited = vec![false; g.len()];
        visited[0] = true;
        let mut k = 0;
        while k < order.len() {
            let i = order[k];
            k += 1;
            for (j, s) in gens.iter().enumerate() {
                let t = index[&g[i].then(s)];
                if !visited[t] {
                    visited[t] = true;
                    tree[t] = Some((i, j));
                    order.push(t);
                }
            }
        }
        let candidates: Vec<Vec<&Perm>> = gens
            .iter()
            .map(|s| {
                let o = s.order();
                h.iter().filter(|x| x.order() == o).collect()
            })
            .collect();
        let mut choice = vec![0usize; gens.len()];
        loop {
            let images: Vec<&Perm> = choice.iter().enumerate().map(|(j, &c)| candidates[j][c]).collect();
            if extends(&g, &index, &order, &tree, &gens, &images) {
                return Ok(true);
            }
            let mut j = 0;
            loop {
                if j == choice.len() {
                    return Ok(false);
                }
                choice[j] += 1;
                if choice[j] < candidates[j].len() {
                    break;
                }
                choice[j] = 0;
                j += 1;
            }
        }
    }
}

fn extends(
    g: &[Perm],
    index: &HashMap<&Perm, usize>,
    order: &[usize],
    tree: &[Option<(usize, usize)>],
    gens: &[&Perm],
    images: &[&Perm],
) -> bool {
    let n = images[0].degree();
    let mut phi: Vec<Option<Perm>> = vec![None; g.len()];
    phi[0] = Some(Perm::identity(n));
    for &t in &order[1..] {
        let (i, j) = tree[t].expect("tree edge");
        phi[t] = Some(phi[i].as_ref().unwrap().then(images[j]));
    }
    let mut seen = HashSet::new();
    if !phi.iter().all(|p| seen.insert(p.clone().unwrap())) {
        return false;
    }
    (0..g.len()).all(|i| {
        gens.iter().enumerate().all(|(j, s)| {
            let t = index[&g[i].then(s)];
            phi[t].as_ref().unwrap() == &phi[i].as_ref().unwrap().then(images[j])
        })
    })
}
