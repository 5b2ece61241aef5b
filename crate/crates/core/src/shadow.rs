//! Pseudoword expressions evaluated in finite monoids, h-orders of
//! substitutions, and the matrix morphism separating images of a code.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::monoid::{FiniteMonoid, Perm, Transformation};
use crate::substitution::Substitution;
use crate::words::{Alphabet, Budget, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PseudowordExpr {
    Empty,
    Letter(Letter),
    Concat(Box<PseudowordExpr>, Box<PseudowordExpr>),
    OmegaPower(Box<PseudowordExpr>),
    /// `σ^ω(a)`.
    SubstOmega(Substitution, Letter),
}

impl PseudowordExpr {
    pub fn concat(a: PseudowordExpr, b: PseudowordExpr) -> Self {
        match (a, b) {
            (PseudowordExpr::Empty, e) | (e, PseudowordExpr::Empty) => e,
            (a, b) => PseudowordExpr::Concat(Box::new(a), Box::new(b)),
        }
    }

    pub fn omega(e: PseudowordExpr) -> Self {
        PseudowordExpr::OmegaPower(Box::new(e))
    }

    pub fn word(w: &Word) -> Self {
        w.letters().iter().fold(PseudowordExpr::Empty, |e, &a| Self::concat(e, PseudowordExpr::Letter(a)))
    }

    /// Grammar: letters, juxtaposition, parentheses, postfix `^w` (or `^ω`)
    /// for the ω-power and `subst^w(name, a)` for `σ^ω(a)`, where `name` is
    /// `fib`, `tm`, `trib` or rules such as `a->ab;b->a`.
    pub fn parse(alphabet: &Alphabet, text: &str) -> Result<Self> {
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = ExprParser { alphabet, chars: &chars, pos: 0 };
        let e = p.expr()?;
        if p.pos != chars.len() {
            return Err(Error::Parse(format!("unexpected {:?} in expression", chars[p.pos])));
        }
        Ok(e)
    }

    fn fmt_with(&self, alphabet: &Alphabet, out: &mut String) {
        match self {
            PseudowordExpr::Empty => {}
            PseudowordExpr::Letter(a) => out.push(alphabet.symbol(*a)),
            PseudowordExpr::Concat(a, b) => {
                a.fmt_with(alphabet, out);
                b.fmt_with(alphabet, out);
            }
            PseudowordExpr::OmegaPower(e) => {
                if matches!(**e, PseudowordExpr::Letter(_)) {
                    e.fmt_with(alphabet, out);
                } else {
                    out.push('(');
                    e.fmt_with(alphabet, out);
                    out.push(')');
                }
                out.push_str("^w");
            }
            PseudowordExpr::SubstOmega(s, a) => {
                out.push_str(&format!("subst^w({}, {})", s.to_rule_string(), alphabet.symbol(*a)));
            }
        }
    }

    pub fn format(&self, alphabet: &Alphabet) -> String {
        let mut s = String::new();
        self.fmt_with(alphabet, &mut s);
        s
    }
}

struct ExprParser<'a> {
    alphabet: &'a Alphabet,
    chars: &'a [char],
    pos: usize,
}

impl ExprParser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, s: &str) -> bool {
        let n = s.chars().count();
        if self.chars.len() >= self.pos + n && self.chars[self.pos..self.pos + n].iter().copied().eq(s.chars()) {
            self.pos += n;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<PseudowordExpr> {
        let mut e = PseudowordExpr::Empty;
        while let Some(c) = self.peek() {
            if c == ')' || c == ',' {
                break;
            }
            let t = self.term()?;
            e = PseudowordExpr::concat(e, t);
        }
        Ok(e)
    }

    fn term(&mut self) -> Result<PseudowordExpr> {
        let mut e = self.atom()?;
        while self.eat("^w") || self.eat("^ω") {
            e = PseudowordExpr::omega(e);
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<PseudowordExpr> {
        if self.eat("subst^w(") || self.eat("subst^ω(") {
            let start = self.pos;
            while self.peek().is_some_and(|c| c != ',') {
                self.pos += 1;
            }
            let name: String = self.chars[start..self.pos].iter().collect();
            if !self.eat(",") {
                return Err(Error::Parse("expected ',' in subst^w(name, a)".into()));
            }
            let c = self.peek().ok_or_else(|| Error::Parse("expected a letter".into()))?;
            self.pos += 1;
            if !self.eat(")") {
                return Err(Error::Parse("expected ')'".into()));
            }
            let s = Substitution::named_or_parse(&name)?;
            let a = s.alphabet().index_of(c)?;
            if s.alphabet() != self.alphabet {
                return Err(Error::InvalidArgument("substitution over a different alphabet".into()));
            }
            return Ok(PseudowordExpr::SubstOmega(s, a));
        }
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(")") {
                    return Err(Error::Parse("unbalanced parentheses".into()));
                }
                Ok(e)
            }
            Some(c) => {
                self.pos += 1;
                Ok(PseudowordExpr::Letter(self.alphabet.index_of(c)?))
            }
            None => Err(Error::Parse("unexpected end of expression".into())),
        }
    }
}

/// A morphism from `A*` onto a finite monoid of transformations, given by
/// the images of the letters.
#[derive(Debug, Clone)]
pub struct MorphismToFinite {
    monoid: FiniteMonoid,
}

impl MorphismToFinite {
    pub fn new(alphabet: &Alphabet, images: &[Transformation], budget: &Budget) -> Result<Self> {
        Ok(MorphismToFinite { monoid: FiniteMonoid::generated(alphabet, images, budget)? })
    }

    pub fn from_perms(alphabet: &Alphabet, images: &[Perm], budget: &Budget) -> Result<Self> {
        let ts: Vec<Transformation> = images.iter().map(|p| Transformation(p.0.clone())).collect();
        Self::new(alphabet, &ts, budget)
    }

    /// `a ↦ values[a]` in `Z/m`.
    pub fn cyclic(alphabet: &Alphabet, m: usize, values: &[u64], budget: &Budget) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        let ts: Vec<Transformation> = values
            .iter()
            .map(|&v| Transformation((0..m as u64).map(|i| ((i + v) % m as u64) as u32).collect()))
            .collect();
        Self::new(alphabet, &ts, budget)
    }

    /// Length modulo `m`.
    pub fn length_mod(alphabet: &Alphabet, m: usize, budget: &Budget) -> Result<Self> {
        Self::cyclic(alphabet, m, &vec![1; alphabet.len()], budget)
    }

    pub fn monoid(&self) -> &FiniteMonoid {
        &self.monoid
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.monoid.alphabet()
    }

    pub fn image(&self, a: Letter) -> usize {
        self.monoid.generator(a)
    }

    pub fn apply(&self, w: &Word) -> usize {
        self.monoid.eval_word(w)
    }

    /// For a morphism into `Z/m` built by [`cyclic`](Self::cyclic): the
    /// residue of an element.
    pub fn residue(&self, x: usize) -> u32 {
        self.monoid.element(x).apply(0)
    }

    fn assignment(&self) -> Vec<usize> {
        self.alphabet().letters().map(|a| self.image(a)).collect()
    }
}

/// `σ_M(v)(b) = v(σ(b))` on assignments `v: A → M`.
fn induced(sigma: &Substitution, m: &FiniteMonoid, v: &[usize]) -> Vec<usize> {
    sigma
        .images()
        .iter()
        .map(|img| img.letters().iter().fold(m.identity(), |x, &c| m.mul(x, v[c as usize])))
        .collect()
}

/// The orbit `h, σ_M(h), σ_M²(h), …` up to its first repetition, with its
/// preperiod and period.
fn orbit(sigma: &Substitution, m: &FiniteMonoid, h: Vec<usize>) -> (Vec<Vec<usize>>, usize, usize) {
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut seq = Vec::new();
    let mut v = h;
    loop {
        if let Some(&i) = seen.get(&v) {
            let p = seq.len() - i;
            return (seq, i, p);
        }
        seen.insert(v.clone(), seq.len());
        let next = induced(sigma, m, &v);
        seq.push(v);
        v = next;
    }
}

fn check_alphabets(sigma: &Substitution, h: &MorphismToFinite) -> Result<()> {
    if sigma.alphabet() != h.alphabet() {
        return Err(Error::InvalidArgument("substitution and morphism use different alphabets".into()));
    }
    Ok(())
}

/// The value of `σ^ω` on the assignment of `h`: the point of the orbit at
/// the least positive multiple of the period past the preperiod.
pub fn subst_omega_assignment(sigma: &Substitution, h: &MorphismToFinite) -> Result<Vec<usize>> {
    check_alphabets(sigma, h)?;
    if !sigma.is_primitive() {
        return Err(Error::NotPrimitive);
    }
    let (seq, i, p) = orbit(sigma, &h.monoid, h.assignment());
    let mut n = p;
    while n < i {
        n += p;
    }
    Ok(seq[i + (n - i) % p].clone())
}

pub fn eval(e: &PseudowordExpr, h: &MorphismToFinite) -> Result<usize> {
    let m = &h.monoid;
    Ok(match e {
        PseudowordExpr::Empty => m.identity(),
        PseudowordExpr::Letter(a) => {
            if *a as usize >= h.alphabet().len() {
                return Err(Error::InvalidArgument("letter outside the morphism's alphabet".into()));
            }
            h.image(*a)
        }
        PseudowordExpr::Concat(a, b) => m.mul(eval(a, h)?, eval(b, h)?),
        PseudowordExpr::OmegaPower(e) => m.omega_power(eval(e, h)?),
        PseudowordExpr::SubstOmega(s, a) => subst_omega_assignment(s, h)?[*a as usize],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HOrder {
    Finite { order: usize },
    NoReturn { preperiod: usize, period: usize },
}

impl fmt::Display for HOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HOrder::Finite { order } => write!(f, "{order}"),
            HOrder::NoReturn { preperiod, period } => write!(f, "none (preperiod {preperiod}, period {period})"),
        }
    }
}

/// Least `n ≥ 1` with `σ_G^n(h) = h`, for `h` onto a group.
pub fn h_order(sigma: &Substitution, h: &MorphismToFinite) -> Result<HOrder> {
    check_alphabets(sigma, h)?;
    if !h.monoid.is_group() {
        return Err(Error::NotAGroup);
    }
    let (_, i, p) = orbit(sigma, &h.monoid, h.assignment());
    Ok(if i == 0 { HOrder::Finite { order: p } } else { HOrder::NoReturn { preperiod: i, period: p } })
}

/// Sardinas–Patterson test for unique decipherability.
pub fn is_code(words: &[Word]) -> bool {
    let x: BTreeSet<Word> = words.iter().cloned().collect();
    if x.len() != words.len() || x.contains(&Word::empty()) {
        return false;
    }
    let quotients = |u: &BTreeSet<Word>, v: &BTreeSet<Word>| -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        for a in u {
            for b in v {
                if let Some(r) = b.strip_prefix(a) {
                    if !r.is_empty() {
                        out.insert(r);
                    }
                }
            }
        }
        out
    };
    let mut current = quotients(&x, &x);
    let mut seen: BTreeSet<BTreeSet<Word>> = BTreeSet::new();
    while !current.is_empty() && seen.insert(current.clone()) {
        if current.iter().any(|w| x.contains(w)) {
            return false;
        }
        let mut next = quotients(&current, &x);
        next.extend(quotients(&x, &current));
        current = next;
    }
    true
}

/// A `P×P` matrix over subsets of `M` (the empty set is the zero).
type Matrix = Vec<BTreeSet<usize>>;

fn matmul(m: &FiniteMonoid, n: usize, x: &Matrix, y: &Matrix) -> Matrix {
    let mut out = vec![BTreeSet::new(); n * n];
    for i in 0..n {
        for k in 0..n {
            let a = &x[i * n + k];
            if a.is_empty() {
                continue;
            }
            for j in 0..n {
                for &s in a {
                    for &t in &y[k * n + j] {
                        out[i * n + j].insert(m.mul(s, t));
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct SeparationReport {
    /// Proper prefixes of the code, indexing rows and columns; `ε` first.
    pub prefixes: Vec<String>,
    pub monoid_size: usize,
    /// Words `y` for which `α(β(y))_{ε,ε} = {ψ(y)}` was checked.
    pub checked: usize,
    pub decoding_identity: bool,
    pub u: String,
    pub v: String,
    pub psi_u: usize,
    pub psi_v: usize,
    pub separated: bool,
}

/// Builds the decoding transducer of the code `β(B)` as a morphism `α` from
/// `A*` into matrices over subsets of `ψ(B*)`, checks the decoding identity
/// on `u`, `v` and `samples` random words, and reports whether
/// `α(β(u)) ≠ α(β(v))`.
#[allow(clippy::too_many_arguments)]
pub fn separation_witness(
    alphabet: &Alphabet,
    beta: &[Word],
    psi: &MorphismToFinite,
    u: &Word,
    v: &Word,
    samples: usize,
    seed: u64,
    budget: &Budget,
) -> Result<SeparationReport> {
    let b_alphabet = psi.alphabet().clone();
    if beta.len() != b_alphabet.len() {
        return Err(Error::InvalidArgument("one code word per letter of B expected".into()));
    }
    if beta.iter().any(|x| !alphabet.contains_word(x)) {
        return Err(Error::InvalidArgument("code word outside the alphabet".into()));
    }
    if !is_code(beta) {
        return Err(Error::NotACode);
    }
    let m = psi.monoid();
    let (pu, pv) = (psi.apply(u), psi.apply(v));
    if pu == pv {
        return Err(Error::NothingToSeparate);
    }
    let prefixes: Vec<Word> = beta
        .iter()
        .flat_map(|x| (0..x.len()).map(move |i| x.prefix(i)))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let index: HashMap<&Word, usize> = prefixes.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let n = prefixes.len();
    let letter_matrix = |a: Letter| -> Matrix {
        let mut mat = vec![BTreeSet::new(); n * n];
        for (i, p) in prefixes.iter().enumerate() {
            let q = p.appended(a);
            if let Some(&j) = index.get(&q) {
                mat[i * n + j].insert(m.identity());
            }
            for (y, x) in beta.iter().enumerate() {
                if *x == q {
                    mat[i * n].insert(psi.image(y as Letter));
                }
            }
        }
        mat
    };
    let gens: Vec<Matrix> = alphabet.letters().map(letter_matrix).collect();
    let one: Matrix = (0..n * n)
        .map(|k| if k / n == k % n { BTreeSet::from([m.identity()]) } else { BTreeSet::new() })
        .collect();
    let alpha = |w: &Word| -> Matrix { w.letters().iter().fold(one.clone(), |x, &a| matmul(m, n, &x, &gens[a as usize])) };
    let code = |y: &Word| -> Word { y.letters().iter().fold(Word::empty(), |w, &c| w.concat(&beta[c as usize])) };

    let mut seen: HashMap<Matrix, ()> = HashMap::from([(one.clone(), ())]);
    let mut queue = VecDeque::from([one.clone()]);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y = matmul(m, n, &x, g);
            if !seen.contains_key(&y) {
                if seen.len() >= budget.max_monoid {
                    return Err(Error::BudgetExceeded { what: "matrix monoid size", limit: budget.max_monoid });
                }
                seen.insert(y.clone(), ());
                queue.push_back(y);
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tests = vec![u.clone(), v.clone()];
    for _ in 0..samples {
        let len = rng.gen_range(0..=12);
        tests.push(Word((0..len).map(|_| rng.gen_range(0..b_alphabet.len()) as Letter).collect()));
    }
    let decoding_identity = tests.iter().all(|y| alpha(&code(y))[0] == BTreeSet::from([psi.apply(y)]));
    let separated = alpha(&code(u)) != alpha(&code(v));
    Ok(SeparationReport {
        prefixes: prefixes
            .iter()
            .map(|p| if p.is_empty() { "ε".to_string() } else { alphabet.format(p) })
            .collect(),
        monoid_size: seen.len(),
        checked: tests.len(),
        decoding_identity,
        u: b_alphabet.format(u),
        v: b_alphabet.format(v),
        psi_u: pu,
        psi_v: pv,
        separated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::latin(2)
    }

    fn a5(alphabet: &Alphabet) -> MorphismToFinite {
        let a = Perm::parse_cycles("(1 2 3)", 5).unwrap();
        let b = Perm::parse_cycles("(3 4 5)", 5).unwrap();
        MorphismToFinite::from_perms(alphabet, &[a, b], &Budget::default()).unwrap()
    }

    #[test]
    fn parse_round_trip() {
        let e = PseudowordExpr::parse(&ab(), "a(ab)^w b^w").unwrap();
        assert_eq!(e.format(&ab()), "a(ab)^wb^w");
        let s = PseudowordExpr::parse(&ab(), "subst^w(fib, a)").unwrap();
        assert!(matches!(s, PseudowordExpr::SubstOmega(_, 0)));
        assert!(PseudowordExpr::parse(&ab(), "(ab").is_err());
        assert!(PseudowordExpr::parse(&ab(), "c").is_err());
    }

    #[test]
    fn fibonacci_length_limit() {
        let b = Budget::default();
        for k in 1..=5usize {
            let m: usize = (1..=k).product();
            let h = MorphismToFinite::length_mod(&ab(), m, &b).unwrap();
            let e = PseudowordExpr::parse(&ab(), "subst^w(fib, a)").unwrap();
            assert_eq!(h.residue(eval(&e, &h).unwrap()), 1 % m as u32, "k = {k}");
        }
    }

    #[test]
    fn omega_in_group_is_identity() {
        let h = a5(&ab());
        let e = PseudowordExpr::parse(&ab(), "a^w").unwrap();
        assert_eq!(eval(&e, &h).unwrap(), h.monoid().identity());
    }

    #[test]
    fn parity_of_x_y_omega() {
        let h = MorphismToFinite::length_mod(&ab(), 2, &Budget::default()).unwrap();
        let e = PseudowordExpr::parse(&ab(), "ab^w").unwrap();
        assert_eq!(h.residue(eval(&e, &h).unwrap()), 1);
    }

    #[test]
    fn subst_omega_matches_brute_force() {
        let fib = Substitution::fibonacci();
        let h = a5(&ab());
        let m = h.monoid();
        let mut w = Word::letter(0);
        let mut v = h.assignment();
        for _ in 0..16 {
            assert_eq!(h.apply(&w), v[0]);
            w = fib.apply(&w).unwrap();
            v = induced(&fib, m, &v);
        }
        let expected = eval(&PseudowordExpr::SubstOmega(fib.clone(), 0), &h).unwrap();
        for n in 8..=9usize {
            let steps: usize = (1..=n).product();
            let mut v = h.assignment();
            for _ in 0..steps {
                v = induced(&fib, m, &v);
            }
            assert_eq!(v[0], expected, "n = {n}");
        }
    }

    #[test]
    fn h_orders() {
        let b = Budget::default();
        let parity = MorphismToFinite::length_mod(&ab(), 2, &b).unwrap();
        assert_eq!(h_order(&Substitution::fibonacci(), &parity).unwrap(), HOrder::Finite { order: 3 });
        let h = a5(&ab());
        let HOrder::Finite { order } = h_order(&Substitution::fibonacci(), &h).unwrap() else {
            panic!("Fibonacci is invertible")
        };
        let power = Substitution::fibonacci().power(order);
        for k in 1..order {
            let p = Substitution::fibonacci().power(k);
            assert!((0..2).any(|a| h.apply(p.image(a)) != h.image(a)));
        }
        assert!((0..2).all(|a| h.apply(power.image(a)) == h.image(a)));
        assert_eq!(h_order(&Substitution::thue_morse(), &a5(&ab())).unwrap(), HOrder::Finite { order: 6 });
        let ac = Substitution::parse("a->ab;b->aaab").unwrap();
        assert_eq!(h_order(&ac, &a5(&ab())).unwrap(), HOrder::Finite { order: 12 });
        assert_eq!(h_order(&ac, &parity).unwrap(), HOrder::NoReturn { preperiod: 1, period: 1 });
    }

    #[test]
    fn sardinas_patterson() {
        let w = |s: &str| ab().parse(s).unwrap();
        assert!(is_code(&[w("a"), w("ab"), w("bb")]));
        assert!(!is_code(&[w("a"), w("ab"), w("ba")]));
        assert!(is_code(&[w("aa"), w("ab"), w("ba")]));
        assert!(!is_code(&[w("a"), w("a")]));
    }

    #[test]
    fn separation_of_parities() {
        let b = Budget::default();
        let xyz = Alphabet::from_str_symbols("xyz").unwrap();
        let beta = vec![ab().parse("a").unwrap(), ab().parse("ab").unwrap(), ab().parse("bb").unwrap()];
        let psi = MorphismToFinite::cyclic(&xyz, 2, &[1, 0, 0], &b).unwrap();
        let (u, v) = (xyz.parse("xz").unwrap(), xyz.parse("yz").unwrap());
        let r = separation_witness(&ab(), &beta, &psi, &u, &v, 100, 7, &b).unwrap();
        assert!(r.decoding_identity);
        assert!(r.separated);
        assert_eq!(r.checked, 102);
        assert_eq!(r.prefixes, ["ε", "a", "b"]);
        assert!(matches!(
            separation_witness(&ab(), &beta, &psi, &u, &u, 10, 7, &b),
            Err(Error::NothingToSeparate)
        ));
        let bad = vec![ab().parse("a").unwrap(), ab().parse("ab").unwrap(), ab().parse("ba").unwrap()];
        assert!(matches!(separation_witness(&ab(), &bad, &psi, &u, &v, 10, 7, &b), Err(Error::NotACode)));
    }

    #[test]
    fn separation_with_letters() {
        let b = Budget::default();
        let beta = vec![Word::letter(0), Word::letter(1)];
        let psi = MorphismToFinite::cyclic(&ab(), 3, &[1, 2], &b).unwrap();
        let r = separation_witness(&ab(), &beta, &psi, &ab().parse("a").unwrap(), &ab().parse("b").unwrap(), 20, 1, &b)
            .unwrap();
        assert_eq!(r.prefixes, ["ε"]);
        assert_eq!(r.monoid_size, 3);
        assert!(r.decoding_identity && r.separated);
    }
}
