use std::collections::BTreeSet;

use profwords::bifix::{f_degree, g_x_f, group_code_intersection, parses, GroupCodeSpec};
use profwords::freegroup::{is_basis_of_free_group, subgroup, words_to_group, Index};
use profwords::monoid::{Automaton, FiniteMonoid, GreenStructure, Perm, UNDEF};
use profwords::shadow::{eval, h_order, HOrder, MorphismToFinite, PseudowordExpr};
use profwords::{Alphabet, Budget, FactorSet, Substitution};
use proptest::prelude::*;

fn automaton() -> impl Strategy<Value = Automaton> {
    (1usize..=4, 1usize..=2).prop_flat_map(|(n, k)| {
        let target = prop_oneof![1 => Just(UNDEF), 6 => 0..n as u32];
        prop::collection::vec(prop::collection::vec(target, k), n)
            .prop_map(move |delta| Automaton::new(Alphabet::latin(k), 0, BTreeSet::from([0]), delta).unwrap())
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Perm> {
    Just((0..n as u32).collect::<Vec<_>>()).prop_shuffle().prop_map(Perm)
}

fn small_monoid(a: &Automaton) -> Option<FiniteMonoid> {
    FiniteMonoid::transition_monoid(a, &Budget { max_monoid: 200, ..Budget::default() }).ok()
}

fn expr(k: u8) -> impl Strategy<Value = PseudowordExpr> {
    let leaf = prop_oneof![
        (0..k).prop_map(PseudowordExpr::Letter),
        Just(PseudowordExpr::SubstOmega(Substitution::fibonacci(), 0)),
        Just(PseudowordExpr::SubstOmega(Substitution::thue_morse(), 1)),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| PseudowordExpr::Concat(Box::new(a), Box::new(b))),
            inner.prop_map(PseudowordExpr::omega),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn omega_power_laws(a in automaton()) {
        let Some(m) = small_monoid(&a) else { return Ok(()) };
        for s in 0..m.len() {
            let e = m.omega_power(s);
            prop_assert!(m.is_idempotent(e));
            prop_assert_eq!(m.mul(e, s), m.mul(s, e));
            let (i, p) = m.cyclic_structure(s);
            prop_assert_eq!(m.power(s, i + p), m.power(s, i));
        }
    }

    #[test]
    fn green_laws(a in automaton()) {
        let Some(m) = small_monoid(&a) else { return Ok(()) };
        let g = GreenStructure::new(&m);
        for x in 0..m.len() {
            for y in 0..m.len() {
                prop_assert_eq!(g.h_equivalent(x, y), g.r_equivalent(x, y) && g.l_equivalent(x, y));
            }
        }
        for j in 0..g.j_classes().len() {
            let (rows, cols) = g.rows_and_columns(j);
            let hs: BTreeSet<usize> = g.j_members(j).iter().map(|&x| g.h_class(x)).collect();
            prop_assert_eq!(hs.len(), rows.len() * cols.len());
            let regular = g.j_members(j).iter().any(|&x| {
                (0..m.len()).any(|y| m.mul(m.mul(x, y), x) == x)
            });
            prop_assert_eq!(regular, g.is_regular_j(j));
        }
        for h in 0..g.h_classes().len() {
            if g.is_group_h(h) {
                let s = g.schutzenberger_group(&m, h).unwrap();
                prop_assert_eq!(s.order(&Budget::default()).unwrap(), g.h_members(h).len());
            }
        }
    }

    #[test]
    fn omega_is_identity_in_groups(p in permutation(5), q in permutation(5)) {
        let a = Automaton::new(
            Alphabet::latin(2),
            0,
            BTreeSet::from([0]),
            (0..5).map(|i| vec![p.0[i], q.0[i]]).collect(),
        ).unwrap();
        let m = FiniteMonoid::transition_monoid(&a, &Budget::default()).unwrap();
        prop_assert!(m.is_group());
        for s in 0..m.len() {
            prop_assert_eq!(m.omega_power(s), m.identity());
        }
    }

    #[test]
    fn eval_is_a_morphism(e1 in expr(2), e2 in expr(2), p in permutation(4), q in permutation(4)) {
        let h = MorphismToFinite::from_perms(&Alphabet::latin(2), &[p, q], &Budget::default()).unwrap();
        let m = h.monoid();
        let both = PseudowordExpr::Concat(Box::new(e1.clone()), Box::new(e2.clone()));
        prop_assert_eq!(eval(&both, &h).unwrap(), m.mul(eval(&e1, &h).unwrap(), eval(&e2, &h).unwrap()));
        let om = eval(&PseudowordExpr::omega(e1), &h).unwrap();
        prop_assert!(m.is_idempotent(om));
    }

    #[test]
    fn fibonacci_has_finite_h_order(p in permutation(5), q in permutation(5)) {
        let h = MorphismToFinite::from_perms(&Alphabet::latin(2), &[p, q], &Budget::default()).unwrap();
        let order = h_order(&Substitution::fibonacci(), &h).unwrap();
        let finite = matches!(order, HOrder::Finite { .. });
        prop_assert!(finite);
    }

    #[test]
    fn subst_omega_is_the_factorial_limit(p in permutation(4), q in permutation(4), which in 0usize..2) {
        let s = [Substitution::fibonacci(), Substitution::thue_morse()][which].clone();
        let h = MorphismToFinite::from_perms(&Alphabet::latin(2), &[p, q], &Budget::default()).unwrap();
        let m = h.monoid();
        let limit = eval(&PseudowordExpr::SubstOmega(s.clone(), 0), &h).unwrap();
        // iterate the induced map on letter images n! times for n = 6, 7
        for n in 6..=7usize {
            let steps: usize = (1..=n).product();
            let mut v: Vec<usize> = (0..2).map(|a| h.image(a)).collect();
            for _ in 0..steps {
                v = s.images().iter().map(|img| img.letters().iter().fold(m.identity(), |x, &c| m.mul(x, v[c as usize]))).collect();
            }
            prop_assert_eq!(v[0], limit);
        }
    }
}

fn fib(h: usize) -> FactorSet {
    FactorSet::from_substitution(&Substitution::fibonacci(), 0, h, &Budget::default()).unwrap()
}

fn cyclic_code(d: usize) -> GroupCodeSpec {
    let shift = Perm((0..d as u32).map(|i| (i + 1) % d as u32).collect());
    GroupCodeSpec::point_stabilizer(&Alphabet::latin(2), &[shift.clone(), shift], 0).unwrap()
}

#[test]
fn parse_counts_are_bounded_by_the_degree() {
    let f = fib(24);
    for d in 1..=4 {
        let x = group_code_intersection(&cyclic_code(d), &f).unwrap();
        let degree = f_degree(&x, &f).unwrap().degree;
        assert!(degree <= d);
        for n in 0..=16 {
            for w in f.of_length(n) {
                let c = parses(w, &x).len();
                assert!(c <= degree);
                if !x.is_internal_factor(w) {
                    assert_eq!(c, degree);
                }
            }
        }
    }
}

#[test]
fn group_codes_of_tree_sets_are_bases_of_finite_index() {
    let f = fib(32);
    let ab = Alphabet::latin(2);
    for d in 1..=4 {
        let x = group_code_intersection(&cyclic_code(d), &f).unwrap();
        let degree = f_degree(&x, &f).unwrap().degree;
        let gens = words_to_group(x.words().iter().cloned());
        let h = subgroup(&ab, &gens);
        assert_eq!(h.index(), Index::Finite(degree));
        assert_eq!(h.rank(), x.len());
        assert_eq!(x.len(), degree + 1);
        if degree == 1 {
            assert!(is_basis_of_free_group(&ab, &gens));
        }
    }
}

#[test]
fn f_group_degree_is_the_f_degree() {
    let f = fib(32);
    for d in 1..=4 {
        let x = group_code_intersection(&cyclic_code(d), &f).unwrap();
        let degree = f_degree(&x, &f).unwrap().degree;
        let g = g_x_f(&x, &f).unwrap();
        assert_eq!(g.image.len(), degree);
    }
}
