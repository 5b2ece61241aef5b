mod inputs;

use std::collections::BTreeSet;
use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use profwords::arith::{fib_factorial_index, fib_mod, padic_valuation, pisano_period, to_factorial};
use profwords::bifix::{f_degree, g_x_f, group_code_intersection, minimal_automaton_of_star, BifixCode, GroupCodeSpec};
use profwords::episturmian::{episturmian_left_returns, pal, DirectiveWord, PalindromePrefixTower};
use profwords::extension::{classify, extension_graph};
use profwords::freegroup::{subgroup, GroupWord, Index};
use profwords::monoid::{f_group, f_min_rank, Automaton, FiniteMonoid, GreenStructure, Perm};
use profwords::returns::{
    connexion_code, left_return_words, limit_return_truncation, right_return_words, substitution_seeds,
};
use profwords::shadow::{eval, h_order, separation_witness, PseudowordExpr};
use profwords::{Alphabet, Budget, Error, FactorSet, Result};
use serde_json::{json, Value};

use inputs::{read_input, word, word_list, GroupSpec, SourceArgs};

#[derive(Parser, Debug)]
#[command(name = "profwords", version, about = "Return words, bifix codes and finite quotients of free profinite monoids")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Also write the main graph of the result to this DOT file
    #[arg(long, global = true)]
    dot: Option<String>,
    #[arg(long, global = true)]
    budget_prefix: Option<usize>,
    #[arg(long, global = true)]
    budget_horizon: Option<usize>,
    #[arg(long, global = true)]
    budget_monoid: Option<usize>,
    #[arg(long, global = true)]
    budget_group: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Text,
    Dot,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum SideArg {
    Right,
    Left,
    Both,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Inspect a substitution and its iterates
    Subst {
        #[command(flatten)]
        src: SourceArgs,
        #[arg(long, default_value_t = 0)]
        iterate: usize,
    },
    /// List the factors of a set
    Factors {
        #[command(flatten)]
        src: SourceArgs,
        #[arg(long)]
        length: Option<usize>,
    },
    /// Neutral, connected, acyclic and tree tests on extension graphs
    Classify {
        #[command(flatten)]
        src: SourceArgs,
        #[arg(long, default_value_t = 6)]
        maxlen: usize,
        /// Extension graph of this word
        #[arg(long)]
        word: Option<String>,
        /// Include one record per word
        #[arg(long)]
        records: bool,
    },
    /// Return words, connexion codes and limit truncations
    Returns {
        #[command(flatten)]
        src: SourceArgs,
        #[arg(long)]
        word: Option<String>,
        #[arg(long, value_enum, default_value_t = SideArg::Right)]
        side: SideArg,
        /// Connexion code `X(a,b)` for letters `ab`
        #[arg(long)]
        connexion: Option<String>,
        /// Stages of the limit return set from seeds `σ^{2n}(start)`
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Palindromic prefixes and returns of an episturmian word
    Episturmian {
        #[command(flatten)]
        src: SourceArgs,
        /// Return words to this factor
        #[arg(long)]
        returns: Option<String>,
        /// Iterated palindromic closure of this word
        #[arg(long)]
        pal: Option<String>,
        /// Number of palindromic prefixes listed
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// Finitely generated subgroups of a free group
    Freegroup {
        #[arg(long, default_value = "ab")]
        alphabet: String,
        /// Generators like `ab,ba^-1`
        #[arg(long)]
        gens: String,
        #[arg(long)]
        member: Option<String>,
        /// Finite-index subgroup containing the generators but not this word
        #[arg(long)]
        separate: Option<String>,
    },
    /// Transition monoid, Green structure and the F-minimal class
    Monoid {
        #[command(flatten)]
        src: SourceArgs,
        /// Automaton file (`-` for stdin)
        #[arg(long, conflicts_with = "code")]
        automaton: Option<String>,
        /// Bifix code whose star is recognized
        #[arg(long)]
        code: Option<String>,
        #[arg(long)]
        eggbox: bool,
    },
    /// Bifix codes `X ∩ F` from a group or from a word list
    Bifix {
        #[command(flatten)]
        src: SourceArgs,
        #[arg(long)]
        code: Option<String>,
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        images: Option<String>,
        /// Point whose stabilizer defines the code (1-based)
        #[arg(long, default_value_t = 1)]
        point: u32,
    },
    /// Evaluate pseudoword expressions and build separation witnesses
    Shadow {
        #[arg(long, default_value = "ab")]
        alphabet: String,
        #[arg(long)]
        expr: Option<String>,
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        images: Option<String>,
        /// Code words `β(b)`, one per letter of `--b-alphabet`
        #[arg(long)]
        beta: Option<String>,
        #[arg(long, default_value = "xyz")]
        b_alphabet: String,
        /// Target group of `ψ` on `B`, `Zm`, `An` or `Sn`
        #[arg(long, default_value = "Z2")]
        psi_group: String,
        /// Letter images of `ψ`, like `x:1;y:0;z:0`
        #[arg(long)]
        psi_images: Option<String>,
        #[arg(long)]
        u: Option<String>,
        #[arg(long)]
        v: Option<String>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Factorial digits, p-adic valuations and Fibonacci residues
    Arith {
        /// Integer to expand
        #[arg(long, allow_hyphen_values = true)]
        x: Option<i128>,
        /// Number of factorial digits
        #[arg(long)]
        precision: Option<usize>,
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long)]
        modulus: Option<u64>,
        /// Index `n` for `F_n mod m`
        #[arg(long, allow_hyphen_values = true)]
        fib: Option<i128>,
        /// `F_{n!+offset} mod m`
        #[arg(long)]
        fib_factorial: Option<u64>,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        offset: i128,
    },
    /// h-order of a substitution for a morphism onto a finite group
    Horder {
        #[command(flatten)]
        src: SourceArgs,
        #[arg(long)]
        group: String,
        #[arg(long)]
        images: String,
    },
}

/// Output of one job: JSON, its text rendering and an optional graph.
struct Output {
    json: Value,
    text: Option<String>,
    dot: Option<String>,
}

impl Output {
    fn json(json: Value) -> Self {
        Output { json, text: None, dot: None }
    }
}

fn budget(g: &Global) -> Result<Budget> {
    let d = Budget::default();
    let b = Budget {
        max_prefix: g.budget_prefix.unwrap_or(d.max_prefix),
        max_horizon: g.budget_horizon.unwrap_or(d.max_horizon),
        max_monoid: g.budget_monoid.unwrap_or(d.max_monoid),
        max_group_order: g.budget_group.unwrap_or(d.max_group_order),
    };
    if b.max_prefix == 0 || b.max_horizon == 0 || b.max_monoid == 0 || b.max_group_order == 0 {
        return Err(Error::InvalidArgument("budgets must be positive".into()));
    }
    Ok(b)
}

/// Runs `job` on the factor set, growing the horizon while it reports a
/// shortfall and the budget allows.
fn with_factors<T>(src: &SourceArgs, start: usize, b: &Budget, job: impl Fn(&FactorSet) -> Result<T>) -> Result<T> {
    let mut h = src.horizon.unwrap_or(start).min(b.max_horizon);
    loop {
        let f = src.factor_set(h, b)?;
        match job(&f) {
            Err(Error::InsufficientHorizon { needed, .. }) if src.horizon.is_none() && h < b.max_horizon => {
                h = needed.max(h + 1).min(b.max_horizon);
            }
            r => return r,
        }
    }
}

fn names(a: &Alphabet, ws: &BTreeSet<profwords::Word>) -> Vec<String> {
    ws.iter().map(|w| a.format(w)).collect()
}

fn group_spec(alphabet: &Alphabet, group: &Option<String>, images: &Option<String>) -> Result<Option<GroupSpec>> {
    match (group, images) {
        (Some(g), Some(i)) => Ok(Some(GroupSpec::parse(alphabet, g, i)?)),
        (None, None) => Ok(None),
        _ => Err(Error::InvalidArgument("--group and --images go together".into())),
    }
}

fn index_json(i: Index) -> Value {
    match i {
        Index::Finite(n) => json!(n),
        Index::Infinite => json!("infinite"),
    }
}

fn run(cli: &Cli) -> Result<Output> {
    let b = budget(&cli.global)?;
    match &cli.command {
        Command::Subst { src, iterate } => {
            let s = src.substitution()?;
            let a = s.alphabet();
            let mut out = json!({
                "rules": s.to_rule_string(),
                "primitive": s.is_primitive(),
                "proper": s.is_proper(),
                "incidence": s.incidence_matrix(),
            });
            if *iterate > 0 {
                let w = s.iterate(src.start_letter(a)?, *iterate, &b)?;
                out["iterate"] = json!(a.format(&w));
            }
            Ok(Output::json(out))
        }
        Command::Factors { src, length } => {
            let f = src.factor_set(length.unwrap_or(8), &b)?;
            match length {
                Some(n) => {
                    let ws: Vec<String> = f.of_length(*n).map(|w| f.alphabet().format(w)).collect();
                    let text = ws.iter().map(|w| format!("{w}\n")).collect();
                    Ok(Output { json: json!({ "length": n, "factors": ws }), text: Some(text), dot: None })
                }
                None => Ok(Output { json: f.to_json(), text: Some(f.to_text()), dot: None }),
            }
        }
        Command::Classify { src, maxlen, word: w, records } => with_factors(src, maxlen + 1, &b, |f| {
            let c = classify(f, *maxlen)?;
            let mut out = serde_json::to_value(&c).map_err(|e| Error::Internal(e.to_string()))?;
            if !records {
                out.as_object_mut().expect("object").remove("words");
            }
            let mut dot = None;
            if let Some(w) = w {
                let g = extension_graph(f, &word(f.alphabet(), w)?)?;
                out["graph"] = g.to_json(f.alphabet());
                dot = Some(g.to_dot(f.alphabet()));
            }
            Ok(Output { json: out, text: None, dot })
        }),
        Command::Returns { src, word: w, side, connexion, limit } => with_factors(src, 16, &b, |f| {
            let a = f.alphabet();
            let mut out = serde_json::Map::new();
            if let Some(w) = w {
                let x = word(a, w)?;
                if matches!(side, SideArg::Right | SideArg::Both) {
                    out.insert("right".into(), json!(right_return_words(f, &x)?.names(a)));
                }
                if matches!(side, SideArg::Left | SideArg::Both) {
                    out.insert("left".into(), json!(left_return_words(f, &x)?.names(a)));
                }
            }
            if let Some(c) = connexion {
                let ls: Vec<char> = c.chars().filter(|c| c.is_alphanumeric()).collect();
                if ls.len() != 2 {
                    return Err(Error::InvalidArgument("--connexion takes two letters".into()));
                }
                let x = connexion_code(f, a.index_of(ls[0])?, a.index_of(ls[1])?)?;
                out.insert("connexion".into(), json!(names(a, &x)));
            }
            if let Some(depth) = limit {
                let s = src.substitution()?;
                let seeds = substitution_seeds(&s, src.start_letter(a)?, *depth, &b)?;
                out.insert("limit".into(), limit_return_truncation(f, &seeds)?.to_json(a));
            }
            if out.is_empty() {
                return Err(Error::InvalidArgument("give --word, --connexion or --limit".into()));
            }
            Ok(Output::json(Value::Object(out)))
        }),
        Command::Episturmian { src, returns, pal: p, depth } => {
            let a = src.alphabet()?;
            let d = src
                .directive
                .as_deref()
                .ok_or_else(|| Error::InvalidArgument("--directive is required".into()))?;
            let delta = src.directive_word(&a, d)?;
            let short = DirectiveWord::periodic(&a, d, *depth)?;
            let tower = PalindromePrefixTower::new(&short, &b)?;
            let mut out = json!({
                "palindromic_prefixes": tower.u.iter().map(|w| a.format(w)).collect::<Vec<_>>(),
            });
            if let Some(u) = returns {
                let u = word(&a, u)?;
                out["left_returns"] = json!(names(&a, &episturmian_left_returns(&delta, &u, &b)?));
            }
            if let Some(p) = p {
                out["pal"] = json!(a.format(&pal(&word(&a, p)?, &b)?));
            }
            Ok(Output { json: out, text: Some(tower.to_text(&a)), dot: None })
        }
        Command::Freegroup { alphabet, gens, member, separate } => {
            let a = Alphabet::from_str_symbols(alphabet)?;
            let gs = gens
                .split(',')
                .filter(|g| !g.trim().is_empty())
                .map(|g| GroupWord::parse(&a, g))
                .collect::<Result<Vec<_>>>()?;
            let h = subgroup(&a, &gs);
            let mut out = h.to_json(&a);
            out["basis"] = json!(h.basis().iter().map(|g| g.format(&a)).collect::<Vec<_>>());
            out["index"] = index_json(h.index());
            let mut dot = h.to_dot(&a);
            if let Some(m) = member {
                out["member"] = json!(h.contains(&GroupWord::parse(&a, m)?));
            }
            if let Some(x) = separate {
                let k = h.separating_subgroup(&GroupWord::parse(&a, x)?)?;
                out["separating"] = k.to_json(&a);
                dot = k.to_dot(&a);
            }
            Ok(Output { json: out, text: None, dot: Some(dot) })
        }
        Command::Monoid { src, automaton, code, eggbox } => {
            let alphabet = src.alphabet()?;
            let aut = match (automaton, code) {
                (Some(path), _) => Automaton::parse(&alphabet, &read_input(path)?)?,
                (None, Some(c)) => minimal_automaton_of_star(&BifixCode::parse(&alphabet, c)?),
                (None, None) => return Err(Error::InvalidArgument("give --automaton or --code".into())),
            };
            let m = FiniteMonoid::transition_monoid(&aut, &b)?;
            let g = GreenStructure::new(&m);
            let classes: Vec<Value> = g
                .j_classes()
                .iter()
                .enumerate()
                .map(|(j, members)| {
                    let (rows, cols) = g.rows_and_columns(j);
                    json!({
                        "size": members.len(),
                        "rows": rows.len(),
                        "columns": cols.len(),
                        "regular": g.is_regular_j(j),
                    })
                })
                .collect();
            let mut out = json!({
                "states": aut.state_count(),
                "size": m.len(),
                "idempotents": (0..m.len()).filter(|&x| m.is_idempotent(x)).count(),
                "j_classes": classes,
            });
            let mut text = String::new();
            if src.is_given() {
                let (fm, fg) = with_factors(src, 16, &b, |f| Ok((f_min_rank(&aut, f)?, f_group(&aut, f)?)))?;
                let j = g.j_class(
                    m.index_of(&aut.action(&fm.word))
                        .ok_or_else(|| Error::Internal("minimal word outside the monoid".into()))?,
                );
                let egg = g.eggbox(&m, j);
                out["f_minimal"] = json!({
                    "rank": fm.rank,
                    "word": alphabet.format(&fm.word),
                    "length_used": fm.length_used,
                    "eggbox": egg,
                    "group": fg.to_json(&aut),
                    "group_order": fg.group.order(&b)?,
                });
                text.push_str(&egg.to_ascii());
            }
            if *eggbox {
                let all: Vec<Value> = (0..g.j_classes().len())
                    .map(|j| {
                        let e = g.eggbox(&m, j);
                        text.push_str(&e.to_ascii());
                        text.push('\n');
                        json!(e)
                    })
                    .collect();
                out["eggboxes"] = json!(all);
            }
            let text = if text.is_empty() { None } else { Some(text) };
            Ok(Output { json: out, text, dot: Some(aut.to_dot()) })
        }
        Command::Bifix { src, code, group, images, point } => {
            let alphabet = src.alphabet()?;
            let spec = group_spec(&alphabet, group, images)?;
            with_factors(src, 24, &b, |f| {
                let x = match (&spec, code) {
                    (Some(g), None) => {
                        if *point == 0 {
                            return Err(Error::InvalidArgument("points are numbered from 1".into()));
                        }
                        let s = GroupCodeSpec::point_stabilizer(&alphabet, &g.perms(), point - 1)?;
                        group_code_intersection(&s, f)?
                    }
                    (None, Some(c)) => BifixCode::parse(&alphabet, c)?,
                    _ => return Err(Error::InvalidArgument("give exactly one of --group or --code".into())),
                };
                let d = f_degree(&x, f)?;
                let aut = minimal_automaton_of_star(&x);
                let gx = g_x_f(&x, f)?;
                let out = json!({
                    "code": x.names(),
                    "size": x.len(),
                    "degree": d.degree,
                    "degree_witness": alphabet.format(&d.witness),
                    "states": aut.state_count(),
                    "group": gx.to_json(&aut),
                    "group_order": gx.group.order(&b)?,
                });
                Ok(Output { json: out, text: None, dot: Some(x.trie_dot()) })
            })
        }
        Command::Shadow { alphabet, expr, group, images, beta, b_alphabet, psi_group, psi_images, u, v, samples, seed } => {
            let a = Alphabet::from_str_symbols(alphabet)?;
            let mut out = serde_json::Map::new();
            if let Some(e) = expr {
                let g = match group_spec(&a, group, images)? {
                    Some(g) => g,
                    None => return Err(Error::InvalidArgument("--expr needs --group and --images".into())),
                };
                let h = g.morphism(&a, &b)?;
                let e = PseudowordExpr::parse(&a, e)?;
                let x = eval(&e, &h)?;
                let m = h.monoid();
                let t = m.element(x);
                let mut val = json!({
                    "expr": e.format(&a),
                    "witness": m.witness_str(x),
                    "idempotent": m.is_idempotent(x),
                });
                match g {
                    GroupSpec::Perms { .. } => val["perm"] = json!(Perm(t.0.clone()).to_string()),
                    GroupSpec::Cyclic { .. } => val["residue"] = json!(h.residue(x)),
                }
                out.insert("value".into(), val);
            }
            if let Some(beta) = beta {
                let bs = Alphabet::from_str_symbols(b_alphabet)?;
                let code = word_list(&a, beta)?;
                let psi_images = psi_images
                    .as_deref()
                    .ok_or_else(|| Error::InvalidArgument("--beta needs --psi-images".into()))?;
                let psi = GroupSpec::parse(&bs, psi_group, psi_images)?.morphism(&bs, &b)?;
                let need = |s: &Option<String>, name: &str| {
                    s.as_deref()
                        .ok_or_else(|| Error::InvalidArgument(format!("--beta needs --{name}")))
                        .and_then(|s| word(&bs, s))
                };
                let (uw, vw) = (need(u, "u")?, need(v, "v")?);
                let r = separation_witness(&a, &code, &psi, &uw, &vw, *samples, *seed, &b)?;
                out.insert("separation".into(), serde_json::to_value(&r).map_err(|e| Error::Internal(e.to_string()))?);
            }
            if out.is_empty() {
                return Err(Error::InvalidArgument("give --expr or --beta".into()));
            }
            Ok(Output::json(Value::Object(out)))
        }
        Command::Arith { x, precision, prime, modulus, fib, fib_factorial, offset } => {
            let mut out = serde_json::Map::new();
            if let (Some(x), Some(k)) = (x, precision) {
                let d = to_factorial(*x, *k)?;
                out.insert("factorial_digits".into(), json!({ "digits": d.digits(), "value": d.value().to_string() }));
            }
            if let (Some(x), Some(p)) = (x, prime) {
                let v = padic_valuation(*x, *p)?;
                out.insert("valuation".into(), json!({ "valuation": v.value, "norm": v.norm() }));
            }
            if let Some(m) = modulus {
                if *m == 0 {
                    return Err(Error::InvalidArgument("modulus must be positive".into()));
                }
                out.insert("pisano_period".into(), json!(pisano_period(*m)));
                if let Some(n) = fib {
                    out.insert("fib".into(), json!(fib_mod(*n, *m)?));
                }
                if let Some(n) = fib_factorial {
                    out.insert("fib_factorial".into(), json!(fib_factorial_index(*n, *offset, *m)?));
                }
            }
            if out.is_empty() {
                return Err(Error::InvalidArgument("nothing to compute".into()));
            }
            Ok(Output::json(Value::Object(out)))
        }
        Command::Horder { src, group, images } => {
            let s = src.substitution()?;
            let g = GroupSpec::parse(s.alphabet(), group, images)?;
            let h = g.morphism(s.alphabet(), &b)?;
            let o = h_order(&s, &h)?;
            Ok(Output { json: serde_json::to_value(o).expect("serializable"), text: Some(format!("{o}\n")), dot: None })
        }
    }
}

/// `key: value` lines, nested values indented.
fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match x {
                    Value::Object(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(x, indent + 1, out);
                    }
                    Value::Array(xs) if xs.iter().any(|y| y.is_object() || y.is_array()) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(x, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar(x))),
                }
            }
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                if x.is_object() || x.is_array() {
                    out.push_str(&format!("{pad}[{i}]\n"));
                    render_text(x, indent + 1, out);
                } else {
                    out.push_str(&format!("{pad}{}\n", scalar(x)));
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(xs) => xs.iter().map(scalar).collect::<Vec<_>>().join(", "),
        other => other.to_string(),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::LetterNotInAlphabet(_) | Error::InvalidAlphabet(_) => 2,
        Error::InsufficientHorizon { .. } | Error::BudgetExceeded { .. } => 3,
        Error::Internal(_) => 4,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let out = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    if let (Some(path), Some(dot)) = (&cli.global.dot, &out.dot) {
        if let Err(e) = fs::write(path, dot) {
            eprintln!("error: {path}: {e}");
            return ExitCode::from(1);
        }
    }
    match cli.global.format {
        Format::Json => println!("{}", out.json),
        Format::Text => match out.text {
            Some(t) => print!("{t}"),
            None => {
                let mut s = String::new();
                render_text(&out.json, 0, &mut s);
                print!("{s}");
            }
        },
        Format::Dot => match out.dot {
            Some(d) => print!("{d}"),
            None => {
                eprintln!("error: this command has no graph output");
                return ExitCode::from(1);
            }
        },
    }
    ExitCode::SUCCESS
}
