use std::collections::{BTreeMap, BTreeSet};

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;

use super::{format_points, FiniteMonoid, PermGroup, Perm};
use crate::error::{Error, Result};

/// Green's R-, L-, H- and J-classes of a finite monoid (where `D = J`).
#[derive(Debug, Clone)]
pub struct GreenStructure {
    r: Vec<usize>,
    l: Vec<usize>,
    j: Vec<usize>,
    h: Vec<usize>,
    h_classes: Vec<Vec<usize>>,
    j_classes: Vec<Vec<usize>>,
    /// `below[j]`: J-classes reachable from class `j`, itself included.
    below: Vec<BTreeSet<usize>>,
    idempotent: Vec<bool>,
}

/// Strongly connected components; class ids follow the least member.
fn scc_labels(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> Vec<usize> {
    let mut g: DiGraph<(), ()> = DiGraph::new();
    let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    for (x, y) in edges {
        g.add_edge(nodes[x], nodes[y], ());
    }
    let mut comps: Vec<Vec<usize>> = tarjan_scc(&g)
        .into_iter()
        .map(|c| {
            let mut v: Vec<usize> = c.into_iter().map(|ix| ix.index()).collect();
            v.sort_unstable();
            v
        })
        .collect();
    comps.sort();
    let mut label = vec![0; n];
    for (k, c) in comps.iter().enumerate() {
        for &x in c {
            label[x] = k;
        }
    }
    label
}

fn classes_of(label: &[usize]) -> Vec<Vec<usize>> {
    let mut m: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (x, &c) in label.iter().enumerate() {
        m.entry(c).or_default().push(x);
    }
    m.into_values().collect()
}

impl GreenStructure {
    pub fn new(m: &FiniteMonoid) -> Self {
        let n = m.len();
        let right = m.right_cayley();
        let left = m.left_cayley();
        let r = scc_labels(n, (0..n).flat_map(|x| right[x].iter().map(move |&y| (x, y))));
        let l = scc_labels(n, (0..n).flat_map(|x| left[x].iter().map(move |&y| (x, y))));
        let j = scc_labels(
            n,
            (0..n).flat_map(|x| right[x].iter().chain(&left[x]).map(move |&y| (x, y))),
        );
        let mut hkey: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut h = vec![0; n];
        for x in 0..n {
            let next = hkey.len();
            h[x] = *hkey.entry((r[x], l[x])).or_insert(next);
        }
        let h_classes = classes_of(&h);
        let j_classes = classes_of(&j);
        let jn = j_classes.len();
        let mut succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); jn];
        for x in 0..n {
            for &y in right[x].iter().chain(&left[x]) {
                if j[x] != j[y] {
                    succ[j[x]].insert(j[y]);
                }
            }
        }
        let below = (0..jn)
            .map(|c| {
                let mut seen = BTreeSet::from([c]);
                let mut stack = vec![c];
                while let Some(d) = stack.pop() {
                    for &e in &succ[d] {
                        if seen.insert(e) {
                            stack.push(e);
                        }
                    }
                }
                seen
            })
            .collect();
        let idempotent = (0..n).map(|x| m.is_idempotent(x)).collect();
        GreenStructure { r, l, j, h, h_classes, j_classes, below, idempotent }
    }

    pub fn r_class(&self, x: usize) -> usize {
        self.r[x]
    }

    pub fn l_class(&self, x: usize) -> usize {
        self.l[x]
    }

    pub fn h_class(&self, x: usize) -> usize {
        self.h[x]
    }

    pub fn j_class(&self, x: usize) -> usize {
        self.j[x]
    }

    pub fn r_equivalent(&self, x: usize, y: usize) -> bool {
        self.r[x] == self.r[y]
    }

    pub fn l_equivalent(&self, x: usize, y: usize) -> bool {
        self.l[x] == self.l[y]
    }

    pub fn h_equivalent(&self, x: usize, y: usize) -> bool {
        self.h[x] == self.h[y]
    }

    pub fn j_equivalent(&self, x: usize, y: usize) -> bool {
        self.j[x] == self.j[y]
    }

    /// `x ≤_J y`: `x ∈ MyM`.
    pub fn j_below(&self, x: usize, y: usize) -> bool {
        self.below[self.j[y]].contains(&self.j[x])
    }

    pub fn h_classes(&self) -> &[Vec<usize>] {
        &self.h_classes
    }

    pub fn j_classes(&self) -> &[Vec<usize>] {
        &self.j_classes
    }

    pub fn h_members(&self, h: usize) -> &[usize] {
        &self.h_classes[h]
    }

    pub fn j_members(&self, j: usize) -> &[usize] {
        &self.j_classes[j]
    }

    pub fn is_idempotent(&self, x: usize) -> bool {
        self.idempotent[x]
    }

    pub fn is_regular_j(&self, j: usize) -> bool {
        self.j_classes[j].iter().any(|&x| self.idempotent[x])
    }

    pub fn is_group_h(&self, h: usize) -> bool {
        self.h_classes[h].iter().any(|&x| self.idempotent[x])
    }

    /// R-classes and L-classes inside a J-class, by least member.
    pub fn rows_and_columns(&self, j: usize) -> (Vec<usize>, Vec<usize>) {
        let members = &self.j_classes[j];
        let rows: BTreeSet<usize> = members.iter().map(|&x| self.r[x]).collect();
        let cols: BTreeSet<usize> = members.iter().map(|&x| self.l[x]).collect();
        let first = |label: &[usize], c: usize| members.iter().copied().find(|&x| label[x] == c).unwrap();
        let mut rows: Vec<usize> = rows.into_iter().collect();
        let mut cols: Vec<usize> = cols.into_iter().collect();
        rows.sort_by_key(|&c| first(&self.r, c));
        cols.sort_by_key(|&c| first(&self.l, c));
        (rows, cols)
    }

    /// Right translations `x ↦ xm` of the H-class `h` by the `m` with `hm = h`.
    pub fn schutzenberger_group(&self, m: &FiniteMonoid, h: usize) -> Result<PermGroup> {
        let members = &self.h_classes[h];
        let pos: BTreeMap<usize, u32> = members.iter().enumerate().map(|(i, &x)| (x, i as u32)).collect();
        let x0 = members[0];
        let mut perms: BTreeSet<Perm> = BTreeSet::new();
        for t in 0..m.len() {
            if !pos.contains_key(&m.mul(x0, t)) {
                continue;
            }
            let img = members
                .iter()
                .map(|&x| {
                    pos.get(&m.mul(x, t))
                        .copied()
                        .ok_or_else(|| Error::Internal("right translation leaves the H-class".into()))
                })
                .collect::<Result<Vec<u32>>>()?;
            perms.insert(Perm::from_images(img)?);
        }
        PermGroup::new(members.len(), perms.into_iter().collect())
    }

    /// The eggbox picture of a J-class.
    pub fn eggbox(&self, m: &FiniteMonoid, j: usize) -> Eggbox {
        let (rows, cols) = self.rows_and_columns(j);
        let members = &self.j_classes[j];
        let rep = |label: &[usize], c: usize| members.iter().copied().find(|&x| label[x] == c).unwrap();
        let kernel_label = |x: usize| {
            m.element(x)
                .kernel()
                .iter()
                .map(|c| format_points(c))
                .collect::<Vec<_>>()
                .join("/")
        };
        let row_labels = rows.iter().map(|&c| kernel_label(rep(&self.r, c))).collect();
        let col_labels = cols.iter().map(|&c| format_points(&m.element(rep(&self.l, c)).image())).collect();
        let cells = rows
            .iter()
            .map(|&rc| {
                cols.iter()
                    .map(|&lc| {
                        let hs: Vec<usize> =
                            members.iter().copied().filter(|&x| self.r[x] == rc && self.l[x] == lc).collect();
                        if hs.is_empty() {
                            None
                        } else {
                            Some(EggboxCell {
                                members: hs.iter().map(|&x| m.witness_str(x)).collect(),
                                idempotent: hs.iter().any(|&x| self.idempotent[x]),
                            })
                        }
                    })
                    .collect()
            })
            .collect();
        Eggbox { rows: row_labels, columns: col_labels, cells }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EggboxCell {
    pub members: Vec<String>,
    pub idempotent: bool,
}

/// Rows are R-classes labelled by kernels, columns L-classes labelled by
/// images; cells hold H-classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Eggbox {
    pub rows: Vec<String>,
    pub columns: Vec<String>,
    pub cells: Vec<Vec<Option<EggboxCell>>>,
}

impl Eggbox {
    pub fn h_class_count(&self) -> usize {
        self.cells.iter().flatten().filter(|c| c.is_some()).count()
    }

    pub fn to_ascii(&self) -> String {
        let text = |c: &Option<EggboxCell>| match c {
            None => String::new(),
            Some(c) => format!("{}{}", if c.idempotent { "*" } else { "" }, c.members.join(" ")),
        };
        let rw = self.rows.iter().map(|r| r.chars().count()).max().unwrap_or(0);
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|k| {
                self.cells
                    .iter()
                    .map(|row| text(&row[k]).chars().count())
                    .chain([self.columns[k].chars().count()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let sep = {
            let mut s = format!("{} +", " ".repeat(rw));
            for w in &widths {
                s.push_str(&"-".repeat(w + 2));
                s.push('+');
            }
            s + "\n"
        };
        let mut out = format!("{}  ", " ".repeat(rw));
        for (k, c) in self.columns.iter().enumerate() {
            out.push_str(&format!(" {:<w$} ", c, w = widths[k]));
            out.push(' ');
        }
        out = out.trim_end().to_string() + "\n";
        out.push_str(&sep);
        for (i, row) in self.cells.iter().enumerate() {
            out.push_str(&format!("{:>w$} |", self.rows[i], w = rw));
            for (k, c) in row.iter().enumerate() {
                out.push_str(&format!(" {:<w$} |", text(c), w = widths[k]));
            }
            out.push('\n');
            out.push_str(&sep);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::super::{Automaton, FiniteMonoid, Transformation};
    use super::*;
    use crate::words::{Alphabet, Budget};

    fn parity() -> FiniteMonoid {
        let a = Automaton::parse(&Alphabet::latin(2), "initial 1\nfinal 1\n1 a 2\n1 b 3\n2 a 1\n2 b 1\n3 a 1\n").unwrap();
        FiniteMonoid::transition_monoid(&a, &Budget::default()).unwrap()
    }

    #[test]
    fn cyclic_group_is_one_class() {
        let one = Alphabet::latin(1);
        let a = Automaton::parse(&one, "1 a 2\n2 a 1").unwrap();
        let m = FiniteMonoid::transition_monoid(&a, &Budget::default()).unwrap();
        let g = GreenStructure::new(&m);
        assert_eq!(g.j_classes().len(), 1);
        assert_eq!(g.h_classes().len(), 1);
        let s = g.schutzenberger_group(&m, 0).unwrap();
        assert_eq!(s.order(&Budget::default()).unwrap(), 2);
    }

    #[test]
    fn full_transformation_monoid_on_two_points() {
        let gens = vec![Transformation(vec![1, 0]), Transformation(vec![0, 0])];
        let m = FiniteMonoid::generated(&Alphabet::latin(2), &gens, &Budget::default()).unwrap();
        assert_eq!(m.len(), 4);
        let g = GreenStructure::new(&m);
        assert_eq!(g.j_classes().len(), 2);
    }

    #[test]
    fn parity_code_minimal_class() {
        let m = parity();
        let g = GreenStructure::new(&m);
        let a = m.generator(0);
        let j = g.j_class(a);
        let egg = g.eggbox(&m, j);
        assert_eq!(egg.rows.len(), 2);
        assert_eq!(egg.columns.len(), 2);
        assert_eq!(egg.h_class_count(), 4);
        assert_eq!(egg.rows[0], "1/2,3");
        assert_eq!(egg.columns, ["1,2", "1,3"]);
        for &x in g.j_members(j) {
            assert_eq!(g.h_members(g.h_class(x)).len(), 2);
        }
        let first = egg.cells[0][0].as_ref().unwrap();
        assert!(first.idempotent);
        assert_eq!(first.members[0], "a");
        let b_cell = egg.cells[1][1].as_ref().unwrap();
        assert!(!b_cell.idempotent);
        assert!(b_cell.members.contains(&"b".to_string()));
        assert!(egg.to_ascii().contains("*a"));
        let h = g.h_class(a);
        let s = g.schutzenberger_group(&m, h).unwrap();
        assert!(s.is_isomorphic_small(&PermGroup::cyclic(2), &Budget::default()).unwrap());
    }

    #[test]
    fn green_consistency() {
        let m = parity();
        let g = GreenStructure::new(&m);
        for x in 0..m.len() {
            for y in 0..m.len() {
                assert_eq!(g.h_equivalent(x, y), g.r_equivalent(x, y) && g.l_equivalent(x, y));
                if g.r_equivalent(x, y) || g.l_equivalent(x, y) {
                    assert!(g.j_equivalent(x, y));
                }
            }
            assert!(g.j_below(x, 0));
        }
        for j in 0..g.j_classes().len() {
            let (rows, cols) = g.rows_and_columns(j);
            let hs: BTreeSet<usize> = g.j_members(j).iter().map(|&x| g.h_class(x)).collect();
            if g.is_regular_j(j) {
                assert_eq!(hs.len(), rows.len() * cols.len());
            }
        }
    }
}
