#[path = "common/arb.rs"]
mod arb;
mod common;

use std::collections::HashMap;

use arb::*;
use modlaw::logic::{evaluate, parse, quantifier_depth, CompiledFormula, Formula};
use modlaw::{Error, Graph};
use proptest::prelude::*;

const VARS: [&str; 3] = ["x", "y", "z"];

fn arb_formula(q: u32) -> impl Strategy<Value = Formula> {
    let var = prop::sample::select(VARS.to_vec());
    let leaf = prop_oneof![
        (var.clone(), var.clone()).prop_map(|(a, b)| Formula::edge(a, b)),
        (var.clone(), var.clone()).prop_map(|(a, b)| Formula::equal(a, b)),
    ];
    leaf.prop_recursive(4, 24, 2, move |inner| {
        let var = prop::sample::select(VARS.to_vec());
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (var.clone(), inner.clone()).prop_map(|(v, f)| Formula::exists(v, f)),
            (var.clone(), inner.clone()).prop_map(|(v, f)| Formula::forall(v, f)),
            (var, 0..q, inner).prop_map(move |(v, i, f)| Formula::modq(q, i, v, f)),
        ]
    })
}

fn env(vals: [usize; 3]) -> HashMap<String, usize> {
    VARS.iter().map(|v| v.to_string()).zip(vals).collect()
}

#[test]
fn parse_examples() {
    let f = parse("forall x. parity y. E(x,y)").unwrap();
    assert_eq!(f, Formula::forall("x", Formula::modq(2, 1, "y", Formula::edge("x", "y"))));
    assert_eq!(parse("mod[3,2] x. x = x").unwrap(), Formula::modq(3, 2, "x", Formula::equal("x", "x")));
    assert!(matches!(parse("E(x"), Err(Error::Syntax { offset: 3, .. })));
    assert_eq!(parse("mod[6,1] x. x = x"), Err(Error::NonPrimeModulus(6)));
    assert_eq!(parse("mod[5,5] x. x = x"), Err(Error::ResidueOutOfRange { q: 5, i: 5 }));
    assert!(matches!(parse("exists exists. x = x"), Err(Error::Syntax { .. })));
    assert!(matches!(parse("E(x,y) junk"), Err(Error::Syntax { .. })));
    assert!(matches!(parse("(E(x,y) & E(y,z)"), Err(Error::Syntax { .. })));
}

#[test]
fn depth_and_free_variables() {
    assert_eq!(quantifier_depth(&parse("E(x,y)").unwrap()), 0);
    assert_eq!(quantifier_depth(&parse("forall x. parity y. E(x,y)").unwrap()), 2);
    assert_eq!(quantifier_depth(&parse("(exists x. E(x,y) & y = y)").unwrap()), 1);
    let f = parse("(exists x. E(x,y) | parity z. E(z,w))").unwrap();
    assert_eq!(f.free_variables().into_iter().collect::<Vec<_>>(), vec!["w", "y"]);
    assert!(!f.is_sentence());
    assert!(parse("exists x. forall y. (x = y | E(x,y))").unwrap().is_sentence());
}

#[test]
fn evaluation_examples() {
    let phi = parse("forall x. parity y. E(x,y)").unwrap();
    let none = HashMap::new();
    assert!(evaluate(&phi, &Graph::complete(4), &none).unwrap());
    let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
    assert!(!evaluate(&phi, &c4, &none).unwrap());
    let odd = parse("parity x. x = x").unwrap();
    for n in 0..8 {
        assert_eq!(evaluate(&odd, &Graph::empty(n), &none).unwrap(), n % 2 == 1);
    }
    let open = parse("E(x,y)").unwrap();
    assert!(evaluate(&open, &c4, &env([0, 1, 0])).unwrap());
    assert_eq!(evaluate(&open, &c4, &HashMap::from([("x".to_string(), 0)])), Err(Error::UnboundVariable("y".into())));
    assert!(evaluate(&open, &c4, &env([0, 9, 0])).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn print_parse_roundtrip(f in prop_oneof![arb_formula(2), arb_formula(3), arb_formula(5)]) {
        prop_assert_eq!(parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn isomorphism_invariance(f in arb_formula(3), g in arb_graph(1, 6), seed in any::<u64>(), a in 0usize..6, b in 0usize..6, c in 0usize..6) {
        let n = g.n();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let vals = [a % n, b % n, c % n];
        let moved = [perm[vals[0]], perm[vals[1]], perm[vals[2]]];
        prop_assert_eq!(evaluate(&f, &g, &env(vals)).unwrap(), evaluate(&f, &g.permuted(&perm), &env(moved)).unwrap());
    }

    #[test]
    fn de_morgan(f in arb_formula(2), g in arb_graph(1, 6), a in 0usize..6, b in 0usize..6) {
        let n = g.n();
        for v in VARS {
            let lhs = Formula::not(Formula::exists(v, f.clone()));
            let rhs = Formula::forall(v, Formula::not(f.clone()));
            let e = env([a % n, b % n, 0]);
            prop_assert_eq!(evaluate(&lhs, &g, &e).unwrap(), evaluate(&rhs, &g, &e).unwrap());
        }
    }

    #[test]
    fn parity_is_a_fold(f in arb_formula(2), g in arb_graph(1, 7), a in 0usize..7) {
        let n = g.n();
        let base = [a % n, 0, 0];
        let mut odd = false;
        for y in 0..n {
            odd ^= evaluate(&f, &g, &env([base[0], y, 0])).unwrap();
        }
        let folded = evaluate(&Formula::parity("y", f.clone()), &g, &env(base)).unwrap();
        prop_assert_eq!(folded, odd);
    }

    #[test]
    fn compiled_agrees_with_direct(f in arb_formula(3), g in arb_graph(1, 6), a in 0usize..6, b in 0usize..6, c in 0usize..6) {
        let n = g.n();
        let vars: Vec<String> = VARS.iter().map(|v| v.to_string()).collect();
        let compiled = CompiledFormula::compile(&f, &vars).unwrap();
        let vals = [a % n, b % n, c % n];
        prop_assert_eq!(compiled.eval(&g, &vals), evaluate(&f, &g, &env(vals)).unwrap());
    }
}
