//! Acceptance checks. Every criterion is an exact symbolic equality; the
//! report prints one PASS/FAIL line per criterion and the test fails if any
//! criterion does.

use std::collections::BTreeSet;

use profwords::arith::fib_factorial_index;
use profwords::bifix::{f_degree, g_x_f_at, group_code_intersection, minimal_automaton_of_star, GroupCodeSpec};
use profwords::episturmian::{episturmian_left_returns, justin_check, DirectiveWord};
use profwords::extension::{classify, multiplicity};
use profwords::freegroup::{is_basis_of_free_group, subgroup, words_to_group, Index};
use profwords::monoid::{f_group_at, f_min_rank, Automaton, FiniteMonoid, GreenStructure, Perm, PermGroup, UNDEF};
use profwords::returns::{check_gamma_identity, left_return_words, right_return_words};
use profwords::shadow::{eval, h_order, separation_witness, HOrder, MorphismToFinite, PseudowordExpr};
use profwords::{Alphabet, Budget, FactorSet, Substitution, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seed for every randomized criterion.
const SEED: u64 = 20_240_901;
/// Transition monoids sampled for the ω-power law.
const OMEGA_SAMPLES: usize = 300;
/// Largest monoid kept in the ω-power sample.
const OMEGA_MAX_MONOID: usize = 200;
/// Random words checked against the decoding identity.
const DECODING_SAMPLES: usize = 100;

type Check = std::result::Result<(), String>;

fn ab() -> Alphabet {
    Alphabet::latin(2)
}

fn w(s: &str) -> Word {
    ab().parse(s).unwrap()
}

fn words(alphabet: &Alphabet, xs: &[&str]) -> BTreeSet<Word> {
    xs.iter().map(|s| alphabet.parse(s).unwrap()).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn same_set(alphabet: &Alphabet, got: &BTreeSet<Word>, want: &[&str]) -> Check {
    let want = words(alphabet, want);
    ensure(*got == want, || {
        let show = |s: &BTreeSet<Word>| s.iter().map(|x| alphabet.format(x)).collect::<Vec<_>>().join(",");
        format!("got {{{}}}, expected {{{}}}", show(got), show(&want))
    })
}

fn fibonacci(h: usize) -> FactorSet {
    FactorSet::from_substitution(&Substitution::fibonacci(), 0, h, &Budget::default()).unwrap()
}

fn tribonacci(h: usize) -> FactorSet {
    FactorSet::from_substitution(&Substitution::tribonacci(), 0, h, &Budget::default()).unwrap()
}

fn thue_morse(h: usize) -> FactorSet {
    FactorSet::from_substitution(&Substitution::thue_morse(), 0, h, &Budget::default()).unwrap()
}

fn ac_sub() -> Substitution {
    Substitution::parse("a->ab;b->aaab").unwrap()
}

fn ac(h: usize) -> FactorSet {
    FactorSet::from_substitution(&ac_sub(), 0, h, &Budget::default()).unwrap()
}

fn a5_perms() -> Vec<Perm> {
    vec![Perm::parse_cycles("(1 2 3)", 5).unwrap(), Perm::parse_cycles("(3 4 5)", 5).unwrap()]
}

fn err(e: profwords::Error) -> String {
    format!("error: {e}")
}

fn c1() -> Check {
    let f = fibonacci(24);
    same_set(&ab(), &right_return_words(&f, &w("a")).map_err(err)?.words, &["a", "ba"])?;
    same_set(&ab(), &right_return_words(&f, &w("b")).map_err(err)?.words, &["ab", "aab"])?;
    same_set(&ab(), &left_return_words(&f, &w("a")).map_err(err)?.words, &["a", "ab"])?;
    same_set(&ab(), &left_return_words(&f, &w("b")).map_err(err)?.words, &["ba", "baa"])
}

fn c2() -> Check {
    let f = ac(40);
    same_set(&ab(), &right_return_words(&f, &w("aa")).map_err(err)?.words, &["a", "babaa", "babababaa"])
}

fn c3() -> Check {
    for (name, f) in [("Fibonacci", fibonacci(40)), ("Tribonacci", tribonacci(64))] {
        let k = f.alphabet().len();
        for n in 0..=8 {
            for x in f.of_length(n) {
                let r = right_return_words(&f, x).map_err(err)?;
                ensure(r.len() == k, || {
                    format!("{name}: |R({})| = {} instead of {k}", f.alphabet().format(x), r.len())
                })?;
            }
        }
    }
    Ok(())
}

fn c4() -> Check {
    let f = fibonacci(48);
    for x in ["a", "b", "aa"] {
        ensure(check_gamma_identity(&f, &w(x), 8).map_err(err)?, || format!("identity fails at x = {x}"))?;
    }
    Ok(())
}

fn c5() -> Check {
    for (name, f) in [("Fibonacci", fibonacci(12)), ("Tribonacci", tribonacci(12))] {
        ensure(classify(&f, 8).map_err(err)?.tree, || format!("{name} is not tree up to 8"))?;
    }
    let tm = classify(&thue_morse(12), 8).map_err(err)?;
    let first = tm.first_non_neutral().ok_or("Thue-Morse classified as neutral")?;
    ensure(first.word.is_empty() && first.multiplicity == 1, || {
        format!("Thue-Morse: first non-neutral {:?} with m = {}", first.word, first.multiplicity)
    })?;
    let f = ac(12);
    let ma = multiplicity(&f, &w("a")).map_err(err)?;
    let maa = multiplicity(&f, &w("aa")).map_err(err)?;
    ensure(ma == 1 && maa == -1, || format!("m(a) = {ma}, m(aa) = {maa}"))?;
    ensure(!classify(&f, 2).map_err(err)?.neutral, || "a->ab,b->aaab classified as neutral".into())
}

fn c6() -> Check {
    let two = ab();
    let three = Alphabet::latin(3);
    let gens = |a: &Alphabet, xs: &[&str]| words_to_group(xs.iter().map(|s| a.parse(s).unwrap()));
    ensure(is_basis_of_free_group(&two, &gens(&two, &["a", "ba"])), || "{a,ba} is not a basis".into())?;
    ensure(is_basis_of_free_group(&two, &gens(&two, &["ab", "aab"])), || "{ab,aab} is not a basis".into())?;
    ensure(is_basis_of_free_group(&three, &gens(&three, &["a", "ba", "ca"])), || "{a,ba,ca} is not a basis".into())?;
    let h = subgroup(&two, &gens(&two, &["aa", "ab", "ba"]));
    ensure(h.index() == Index::Finite(2) && h.rank() == 3, || {
        format!("<aa,ab,ba>: index {:?}, rank {}", h.index(), h.rank())
    })
}

fn c7() -> Check {
    let b = Budget::default();
    let d = DirectiveWord::periodic(&ab(), "ab", 14).map_err(err)?;
    same_set(&ab(), &episturmian_left_returns(&d, &w("aa"), &b).map_err(err)?, &["aab", "aabab"])?;
    let phi2 = Substitution::fibonacci().power(2).apply(&w("aa")).map_err(err)?;
    same_set(&ab(), &episturmian_left_returns(&d, &phi2, &b).map_err(err)?, &["aba", "abaab"])?;
    for total in 0..=8 {
        for k in 0..=total {
            for u in ab().words_of_length(k) {
                for v in ab().words_of_length(total - k) {
                    ensure(justin_check(&ab(), &u, &v, &b).map_err(err)?, || {
                        format!("Justin fails at u = {}, v = {}", ab().format(&u), ab().format(&v))
                    })?;
                }
            }
        }
    }
    Ok(())
}

fn c8() -> Check {
    let b = Budget::default();
    let f = fibonacci(24);
    let swap = Perm(vec![1, 0]);
    let spec = GroupCodeSpec::point_stabilizer(&ab(), &[swap.clone(), swap], 0).map_err(err)?;
    let x = group_code_intersection(&spec, &f).map_err(err)?;
    same_set(&ab(), x.words(), &["aa", "ab", "ba"])?;
    let d = f_degree(&x, &f).map_err(err)?.degree;
    ensure(d == 2, || format!("d_X(F) = {d}"))?;
    let aut = minimal_automaton_of_star(&x);
    let m = f_min_rank(&aut, &f).map_err(err)?;
    let g = f_group_at(&aut, &f, &m.word).map_err(err)?;
    ensure(g.group.is_isomorphic_small(&PermGroup::cyclic(2), &b).map_err(err)?, || "G_X(F) is not Z/2".into())?;
    let monoid = FiniteMonoid::transition_monoid(&aut, &b).map_err(err)?;
    let green = GreenStructure::new(&monoid);
    let mut minimal = BTreeSet::new();
    for n in 1..=m.length_used {
        for u in f.of_length(n) {
            let t = aut.action(u);
            if t.rank() == m.rank {
                minimal.insert(green.j_class(monoid.index_of(&t).unwrap()));
            }
        }
    }
    ensure(minimal.len() == 1, || format!("{} F-minimal D-classes", minimal.len()))?;
    let j = *minimal.iter().next().unwrap();
    let egg = green.eggbox(&monoid, j);
    let sizes: Vec<usize> = egg.cells.iter().flatten().flatten().map(|c| c.members.len()).collect();
    ensure(sizes == [2, 2, 2, 2], || format!("H-class sizes {sizes:?}"))
}

fn c9() -> Check {
    let b = Budget::default();
    let f = ac(40);
    let spec = GroupCodeSpec::point_stabilizer(&ab(), &a5_perms(), 0).map_err(err)?;
    let x = group_code_intersection(&spec, &f).map_err(err)?;
    ensure(x.len() == 8, || format!("|X| = {}", x.len()))?;
    let d = f_degree(&x, &f).map_err(err)?.degree;
    ensure(d == 5, || format!("d_X(F) = {d}"))?;
    let g = g_x_f_at(&x, &f, &w("aaa")).map_err(err)?;
    let returns: BTreeSet<Word> = g.returns.iter().map(|(u, _)| u.clone()).collect();
    same_set(&ab(), &returns, &["babaaa", "babababaaa"])?;
    for (u, p) in &g.returns {
        let cycles = p.cycles();
        ensure(cycles.len() == 1 && cycles[0].len() == 5, || format!("{} acts as {p}", ab().format(u)))?;
    }
    let order = g.group.order(&b).map_err(err)?;
    ensure(order == 60, || format!("order {order}"))
}

/// The automaton drawn for the Thue-Morse example.
fn morse_reference_automaton() -> Automaton {
    Automaton::parse(
        &ab(),
        "initial 1\nfinal 1\n\
         1 a 2\n1 b 3\n2 a 4\n2 b 1\n3 a 1\n3 b 5\n4 b 6\n6 a 8\n6 b 1\n\
         8 b 10\n10 b 1\n5 a 7\n7 a 1\n7 b 9\n9 a 11\n11 a 1\n",
    )
    .unwrap()
}

fn c10() -> Check {
    let f = thue_morse(32);
    let a = Perm::parse_cycles("(1 2 3)", 3).unwrap();
    let spec = GroupCodeSpec::point_stabilizer(&ab(), &[a.clone(), a.inverse()], 0).map_err(err)?;
    let x = group_code_intersection(&spec, &f).map_err(err)?;
    let aut = minimal_automaton_of_star(&x);
    ensure(aut == morse_reference_automaton(), || "minimal automaton differs from the drawn one".into())?;
    let m = f_min_rank(&aut, &f).map_err(err)?;
    ensure(m.rank == 3, || format!("rank {}", m.rank))?;
    let g = f_group_at(&aut, &f, &w("aa")).map_err(err)?;
    ensure(g.image == [0, 1, 3], || format!("image of aa is {:?}", g.image))?;
    let returns: BTreeSet<Word> = g.returns.iter().map(|(u, _)| u.clone()).collect();
    same_set(&ab(), &returns, &["bbaa", "babbabaa", "babbaa", "bbabaa"])?;
    ensure(g.group.is_trivial(), || "G_A(F) is not trivial".into())
}

fn c11() -> Check {
    let b = Budget::default();
    let tm = Substitution::thue_morse();
    let f = thue_morse(64);
    let spec = GroupCodeSpec::point_stabilizer(&ab(), &a5_perms(), 0).map_err(err)?;
    let x = group_code_intersection(&spec, &f).map_err(err)?;
    let aut = minimal_automaton_of_star(&x);
    let t4b = tm.iterate(1, 4, &b).map_err(err)?;
    let g = g_x_f_at(&x, &f, &t4b).map_err(err)?;
    let order = g.group.order(&b).map_err(err)?;
    // states of the drawn trie, named by the prefix reaching them
    let labels = [
        (1u32, ""),
        (2, "a"),
        (3, "aab"),
        (4, "ab"),
        (9, "abbabaab"),
        (10, "ababbaabbabaab"),
    ];
    let mut relabel = vec![0u32; aut.state_count()];
    for (label, prefix) in labels {
        let q = aut.action(&w(prefix)).apply(aut.initial());
        if q == UNDEF {
            return Err(format!("no state at prefix {prefix}"));
        }
        relabel[q as usize] = label;
    }
    let shown: BTreeSet<String> = g
        .returns
        .iter()
        .map(|(_, p)| {
            p.cycles()
                .iter()
                .map(|c| {
                    let mut c: Vec<u32> = c.iter().map(|&q| relabel[q as usize]).collect();
                    let k = c.iter().enumerate().min_by_key(|(_, &v)| v).unwrap().0;
                    c.rotate_left(k);
                    format!("({})", c.iter().map(u32::to_string).collect::<Vec<_>>().join(","))
                })
                .collect::<String>()
        })
        .collect();
    let expected_perms: BTreeSet<String> =
        ["(1,9,10,3,4)", "(1,10,9,3,4)", "(1,10,9,4,3)"].iter().map(|s| s.to_string()).collect();
    let returns: BTreeSet<Word> = g.returns.iter().map(|(u, _)| u.clone()).collect();
    let expected_returns: BTreeSet<Word> = [
        t4b.clone(),
        tm.iterate(0, 3, &b).map_err(err)?,
        tm.iterate_word(&w("ab"), 5, &b).map_err(err)?,
    ]
    .into_iter()
    .collect();
    let mut problems = Vec::new();
    if returns != expected_returns {
        let names: Vec<String> = returns.iter().map(|u| ab().format(u)).collect();
        problems.push(format!("return words to t^4(b) are {names:?}"));
    }
    if shown != expected_perms {
        problems.push(format!("permutations are {shown:?}"));
    }
    if order != 60 {
        problems.push(format!("order {order}"));
    }
    ensure(problems.is_empty(), || problems.join("; "))
}

fn c12() -> Check {
    let b = Budget::default();
    let parity = MorphismToFinite::length_mod(&ab(), 2, &b).map_err(err)?;
    let a5 = MorphismToFinite::from_perms(&ab(), &a5_perms(), &b).map_err(err)?;
    let cases = [
        ("Fibonacci/parity", Substitution::fibonacci(), &parity, Some(3)),
        ("Thue-Morse/A5", Substitution::thue_morse(), &a5, Some(6)),
        ("a->ab,b->aaab/A5", ac_sub(), &a5, Some(12)),
        ("a->ab,b->aaab/parity", ac_sub(), &parity, None),
    ];
    for (name, s, h, want) in cases {
        let got = h_order(&s, h).map_err(err)?;
        let ok = match (got, want) {
            (HOrder::Finite { order }, Some(n)) => order == n,
            (HOrder::NoReturn { .. }, None) => true,
            _ => false,
        };
        ensure(ok, || format!("{name}: {got}"))?;
    }
    Ok(())
}

fn c13() -> Check {
    let b = Budget::default();
    for k in 3..=5u64 {
        let m: u64 = (1..=k).product();
        for n in k..=k + 6 {
            let f0 = fib_factorial_index(n, 0, m).map_err(err)?;
            let f2 = fib_factorial_index(n, 2, m).map_err(err)?;
            ensure(f0 == 0 && f2 == 1 % m, || format!("k = {k}, n = {n}: F(n!) = {f0}, F(n!+2) = {f2} mod {m}"))?;
        }
        let h = MorphismToFinite::length_mod(&ab(), m as usize, &b).map_err(err)?;
        let e = PseudowordExpr::parse(&ab(), "subst^w(fib, a)").map_err(err)?;
        let r = h.residue(eval(&e, &h).map_err(err)?);
        ensure(r == 1, || format!("k = {k}: length of the limit is {r} mod {m}"))?;
    }
    Ok(())
}

fn random_automaton(rng: &mut ChaCha8Rng, group: bool) -> Automaton {
    let n = rng.gen_range(1..=5usize);
    let k = rng.gen_range(1..=2usize);
    let delta: Vec<Vec<u32>> = if group {
        let perms: Vec<Vec<u32>> = (0..k)
            .map(|_| {
                let mut p: Vec<u32> = (0..n as u32).collect();
                for i in (1..n).rev() {
                    p.swap(i, rng.gen_range(0..=i));
                }
                p
            })
            .collect();
        (0..n).map(|q| perms.iter().map(|p| p[q]).collect()).collect()
    } else {
        (0..n)
            .map(|_| {
                (0..k)
                    .map(|_| if rng.gen_bool(0.15) { UNDEF } else { rng.gen_range(0..n as u32) })
                    .collect()
            })
            .collect()
    };
    Automaton::new(Alphabet::latin(k), 0, BTreeSet::from([0]), delta).unwrap()
}

fn c14() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let budget = Budget { max_monoid: OMEGA_MAX_MONOID, ..Budget::default() };
    let mut tested = 0;
    for i in 0..OMEGA_SAMPLES {
        let group = i % 3 == 0;
        let aut = random_automaton(&mut rng, group);
        let Ok(m) = FiniteMonoid::transition_monoid(&aut, &budget) else { continue };
        tested += 1;
        for s in 0..m.len() {
            let e = m.omega_power(s);
            let powers: BTreeSet<usize> = (1..=m.len()).map(|k| m.power(s, k)).collect();
            let idempotents: Vec<usize> = powers.iter().copied().filter(|&x| m.is_idempotent(x)).collect();
            ensure(idempotents == [e], || format!("sample {i}: idempotent powers {idempotents:?}, omega {e}"))?;
            if group {
                ensure(e == m.identity(), || format!("sample {i}: omega power in a group is not 1"))?;
            }
        }
    }
    ensure(tested >= OMEGA_SAMPLES / 2, || format!("only {tested} monoids within the size bound"))
}

fn c15() -> Check {
    let b = Budget::default();
    let xyz = Alphabet::from_str_symbols("xyz").map_err(err)?;
    let beta = vec![w("a"), w("ab"), w("bb")];
    let psi = MorphismToFinite::cyclic(&xyz, 2, &[1, 0, 0], &b).map_err(err)?;
    let (u, v) = (xyz.parse("xz").unwrap(), xyz.parse("yz").unwrap());
    let r = separation_witness(&ab(), &beta, &psi, &u, &v, DECODING_SAMPLES, SEED, &b).map_err(err)?;
    ensure(r.checked == DECODING_SAMPLES + 2 && r.decoding_identity, || "decoding identity fails".into())?;
    ensure(r.separated, || "alpha(beta(u)) = alpha(beta(v))".into())
}

#[test]
fn acceptance_report() {
    let criteria: [(&str, fn() -> Check); 15] = [
        ("Fibonacci return words", c1),
        ("three return words to aa", c2),
        ("neutral count law", c3),
        ("Gamma identity", c4),
        ("extension-graph classification", c5),
        ("free-group bases and index", c6),
        ("episturmian returns and Justin's formula", c7),
        ("degree-2 group code", c8),
        ("A5 group code", c9),
        ("Thue-Morse trivial F-group", c10),
        ("Thue-Morse A5 code", c11),
        ("h-orders", c12),
        ("profinite Fibonacci limits", c13),
        ("omega-power law", c14),
        ("separation witness", c15),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(()) => println!("PASS {:>2} {name}", i + 1),
            Err(why) => {
                println!("FAIL {:>2} {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
