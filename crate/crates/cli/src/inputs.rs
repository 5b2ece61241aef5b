use std::fs;
use std::io::Read;

use clap::Args;
use profwords::episturmian::{episturmian_factor_set, DirectiveWord};
use profwords::monoid::Perm;
use profwords::shadow::MorphismToFinite;
use profwords::{Alphabet, Budget, Error, FactorSet, Result, Substitution, Word};

/// Where the factor set comes from.
#[derive(Args, Debug, Clone, Default)]
pub struct SourceArgs {
    /// Substitution: `fib`, `tm`, `trib` or rules like `a->ab;b->a`
    #[arg(long)]
    pub subst: Option<String>,
    /// Letter whose fixed point or iterates generate the set
    #[arg(long)]
    pub start: Option<char>,
    /// Periodic word `w`, giving the factors of `w^ω`
    #[arg(long)]
    pub periodic: Option<String>,
    /// Directive word of an episturmian set, repeated to `--directive-len`
    #[arg(long)]
    pub directive: Option<String>,
    #[arg(long, default_value_t = 16)]
    pub directive_len: usize,
    /// Alphabet symbols for periodic and episturmian sources
    #[arg(long)]
    pub alphabet: Option<String>,
    /// Longest factor length to certify
    #[arg(long)]
    pub horizon: Option<usize>,
}

impl SourceArgs {
    pub fn is_given(&self) -> bool {
        self.subst.is_some() || self.periodic.is_some() || self.directive.is_some()
    }

    pub fn substitution(&self) -> Result<Substitution> {
        let s = self.subst.as_deref().ok_or_else(|| Error::InvalidArgument("--subst is required".into()))?;
        Substitution::named_or_parse(s)
    }

    pub fn alphabet(&self) -> Result<Alphabet> {
        if let Some(s) = &self.subst {
            return Ok(Substitution::named_or_parse(s)?.alphabet().clone());
        }
        match &self.alphabet {
            Some(a) => Alphabet::from_str_symbols(a),
            None => {
                let text = self.periodic.as_deref().or(self.directive.as_deref()).unwrap_or("ab");
                let mut symbols: Vec<char> = text.chars().collect();
                symbols.sort_unstable();
                symbols.dedup();
                Alphabet::new(symbols)
            }
        }
    }

    pub fn start_letter(&self, alphabet: &Alphabet) -> Result<u8> {
        match self.start {
            Some(c) => alphabet.index_of(c),
            None => Ok(0),
        }
    }

    /// The factor set at `max(--horizon, needed)`.
    pub fn factor_set(&self, needed: usize, budget: &Budget) -> Result<FactorSet> {
        let horizon = self.horizon.unwrap_or(needed).max(needed);
        if let Some(s) = &self.subst {
            let sigma = Substitution::named_or_parse(s)?;
            let a = self.start_letter(sigma.alphabet())?;
            return FactorSet::from_substitution(&sigma, a, horizon, budget);
        }
        let alphabet = self.alphabet()?;
        if let Some(p) = &self.periodic {
            return FactorSet::from_periodic(&alphabet, &alphabet.parse(p)?, horizon);
        }
        if let Some(d) = &self.directive {
            let delta = self.directive_word(&alphabet, d)?;
            return episturmian_factor_set(&delta, horizon, budget);
        }
        Err(Error::InvalidArgument("give --subst, --periodic or --directive".into()))
    }

    pub fn directive_word(&self, alphabet: &Alphabet, d: &str) -> Result<DirectiveWord> {
        DirectiveWord::periodic(alphabet, d, self.directive_len.max(d.chars().count()))
    }
}

pub fn word(alphabet: &Alphabet, s: &str) -> Result<Word> {
    if s == "1" || s == "ε" {
        return Ok(Word::empty());
    }
    alphabet.parse(s)
}

pub fn word_list(alphabet: &Alphabet, s: &str) -> Result<Vec<Word>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| word(alphabet, t))
        .collect()
}

/// Reads a file, or standard input for `-`.
pub fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::InvalidArgument(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{path}: {e}")))
}

/// A target group: `An` or `Sn` with cycle images `a:(1 2 3);b:(3 4 5)`,
/// or `Zm` with integer images `a:1;b:2`.
#[derive(Debug, Clone)]
pub enum GroupSpec {
    Perms { images: Vec<Perm> },
    Cyclic { modulus: usize, images: Vec<u64> },
}

fn images_by_letter<'a>(alphabet: &Alphabet, text: &'a str) -> Result<Vec<&'a str>> {
    let mut out: Vec<Option<&str>> = vec![None; alphabet.len()];
    for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (l, img) = part
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected letter:image in {part:?}")))?;
        let mut cs = l.trim().chars();
        let c = match (cs.next(), cs.next()) {
            (Some(c), None) => c,
            _ => return Err(Error::Parse(format!("bad letter {l:?}"))),
        };
        out[alphabet.index_of(c)? as usize] = Some(img.trim());
    }
    out.into_iter()
        .enumerate()
        .map(|(i, x)| x.ok_or_else(|| Error::Parse(format!("no image for {}", alphabet.symbol(i as u8)))))
        .collect()
}

fn is_even(p: &Perm) -> bool {
    p.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
}

impl GroupSpec {
    pub fn parse(alphabet: &Alphabet, group: &str, images: &str) -> Result<Self> {
        let (kind, n) = group.split_at(1);
        let n: usize = n.parse().map_err(|_| Error::Parse(format!("bad group {group:?}")))?;
        if n == 0 {
            return Err(Error::Parse("group degree must be positive".into()));
        }
        let texts = images_by_letter(alphabet, images)?;
        match kind {
            "A" | "S" => {
                let perms = texts.iter().map(|t| Perm::parse_cycles(t, n)).collect::<Result<Vec<_>>>()?;
                if kind == "A" && !perms.iter().all(is_even) {
                    return Err(Error::InvalidArgument(format!("an image is not in A{n}")));
                }
                Ok(GroupSpec::Perms { images: perms })
            }
            "Z" => {
                let vals = texts
                    .iter()
                    .map(|t| t.parse::<i64>().map(|v| v.rem_euclid(n as i64) as u64))
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| Error::Parse("cyclic images must be integers".into()))?;
                Ok(GroupSpec::Cyclic { modulus: n, images: vals })
            }
            _ => Err(Error::Parse(format!("unknown group {group:?}; use An, Sn or Zm"))),
        }
    }

    pub fn morphism(&self, alphabet: &Alphabet, budget: &Budget) -> Result<MorphismToFinite> {
        match self {
            GroupSpec::Perms { images, .. } => MorphismToFinite::from_perms(alphabet, images, budget),
            GroupSpec::Cyclic { modulus, images } => MorphismToFinite::cyclic(alphabet, *modulus, images, budget),
        }
    }

    /// Letter images as permutations; `Zm` acts on itself by translation.
    pub fn perms(&self) -> Vec<Perm> {
        match self {
            GroupSpec::Perms { images, .. } => images.clone(),
            GroupSpec::Cyclic { modulus, images } => images
                .iter()
                .map(|&v| Perm((0..*modulus as u64).map(|i| ((i + v) % *modulus as u64) as u32).collect()))
                .collect(),
        }
    }
}
