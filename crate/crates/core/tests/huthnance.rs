use std::collections::HashMap;

use loopforge::huthnance::Numeric;
use loopforge::huthnance::{audit_lemma312, audit_osborn, NumElement, SymElement};
use loopforge::identity::{builtin, eval_law, Env};
use loopforge::{BigElement, Element, InverseConvention, Poly, Side, SymbolicElement, VarId};
use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// The product transcribed case by case, with explicit 2i / 2i+1 decoding.
/// Kept independent of the library's shared correction terms.
fn oracle_star(x: [i64; 3], y: [i64; 3]) -> [i64; 3] {
    let decode = |a: i64| if a.rem_euclid(2) == 0 { (0, a.div_euclid(2)) } else { (1, (a - 1).div_euclid(2)) };
    let (ex, i) = decode(x[0]);
    let (ey, j) = decode(y[0]);
    let [_, k, m] = x;
    let [_, p, q] = y;
    match (ex, ey) {
        (0, 0) => [2 * i + 2 * j, k + p - i * j * (2 * j - 1), q + m - i * j * (2 * j - 1)],
        (1, 0) => [2 * i + 2 * j + 1, k + p - i * j * (2 * j - 1) - j * j + j, q + m - i * j * (2 * j - 1) - j * j],
        (0, 1) => [2 * i + 2 * j + 1, m + p - i * j * (2 * j + 1), q + k - i * j * (2 * j + 1)],
        _ => [2 * i + 2 * j + 2, m + p - i * j * (2 * j + 1) - j * j + j, q + k - i * j * (2 * j + 1) - j * j],
    }
}

fn arr(x: &Element) -> [i64; 3] {
    [x.a, x.k, x.m]
}

fn random_element(rng: &mut StdRng, bound: i64) -> Element {
    Element::new(rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound))
}

fn generic(parity: u8, names: (&str, &str, &str)) -> SymbolicElement {
    SymElement::generic(parity, names.0, names.1, names.2).unwrap()
}

fn residual_is_zero(a: &SymbolicElement, b: &SymbolicElement) -> bool {
    a.residual(b).unwrap().iter().all(Poly::is_zero)
}

#[test]
fn star_agrees_with_case_transcription() {
    let mut rng = StdRng::seed_from_u64(1);
    for _ in 0..10_000 {
        let x = random_element(&mut rng, 1000);
        let y = random_element(&mut rng, 1000);
        assert_eq!(arr(&x.star(&y).unwrap()), oracle_star(arr(&x), arr(&y)), "{x} * {y}");
    }
}

#[test]
fn first_component_is_additive() {
    let mut rng = StdRng::seed_from_u64(2);
    for _ in 0..10_000 {
        let x = random_element(&mut rng, 1000);
        let y = random_element(&mut rng, 1000);
        assert_eq!(x.star(&y).unwrap().a, x.a + y.a);
    }
    for ex in 0..2 {
        for ey in 0..2 {
            let x = generic(ex, ("i", "k", "m"));
            let y = generic(ey, ("j", "p", "q"));
            let sum = x.first().unwrap().checked_add(&y.first().unwrap()).unwrap();
            assert_eq!(x.star(&y).unwrap().first().unwrap(), sum);
        }
    }
}

#[test]
fn identity_element_is_two_sided() {
    let e = loopforge::huthnance::identity_element::<i64>();
    assert_eq!(e, Element::new(0, 0, 0));
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..100 {
        let x = random_element(&mut rng, 1000);
        assert_eq!(e.star(&x).unwrap(), x);
        assert_eq!(x.star(&e).unwrap(), x);
    }
}

#[test]
fn symbolic_loop_laws_in_every_parity_pattern() {
    for ea in 0..2 {
        for eb in 0..2 {
            let a = generic(ea, ("i", "k", "m"));
            let b = generic(eb, ("j", "p", "q"));
            let ldiv = a.divide(Side::Left, &b).unwrap();
            let rdiv = a.divide(Side::Right, &b).unwrap();
            assert!(residual_is_zero(&a.star(&ldiv).unwrap(), &b), "a*(a\\b)=b, {ea}{eb}");
            assert!(residual_is_zero(&rdiv.star(&a).unwrap(), &b), "(b/a)*a=b, {ea}{eb}");
            let ab = a.star(&b).unwrap();
            assert!(residual_is_zero(&a.divide(Side::Left, &ab).unwrap(), &b), "a\\(ab)=b, {ea}{eb}");
            assert!(residual_is_zero(&b.divide(Side::Right, &ab).unwrap(), &a), "(ab)/b=a, {ea}{eb}");
        }
        let x = generic(ea, ("i", "k", "m"));
        let e = SymElement::identity();
        let left = x.inverse(Side::Left).unwrap();
        let right = x.inverse(Side::Right).unwrap();
        assert!(residual_is_zero(&left.star(&x).unwrap(), &e));
        assert!(residual_is_zero(&x.star(&right).unwrap(), &e));
        assert!(residual_is_zero(&right.inverse(Side::Left).unwrap(), &x));
        assert!(x.max_degree() <= 12 && left.max_degree() <= 12 && right.max_degree() <= 12);
    }
}

#[test]
fn numeric_loop_laws() {
    let mut rng = StdRng::seed_from_u64(4);
    let e = Element::identity();
    for _ in 0..10_000 {
        let a = random_element(&mut rng, 1000);
        let b = random_element(&mut rng, 1000);
        let ab = a.star(&b).unwrap();
        assert_eq!(a.star(&a.divide(Side::Left, &b).unwrap()).unwrap(), b);
        assert_eq!(a.divide(Side::Right, &b).unwrap().star(&a).unwrap(), b);
        assert_eq!(a.divide(Side::Left, &ab).unwrap(), b);
        assert_eq!(b.divide(Side::Right, &ab).unwrap(), a);
        assert_eq!(a.inverse(Side::Left).unwrap().star(&a).unwrap(), e);
        assert_eq!(a.star(&a.inverse(Side::Right).unwrap()).unwrap(), e);
        assert_eq!(a.inverse(Side::Right).unwrap().inverse(Side::Left).unwrap(), a);
    }
}

#[test]
fn divisions_match_brute_force_search() {
    // Solve a*x = b by scanning a box that contains the answer.
    let a = Element::new(-1, 0, 0);
    let b = Element::new(1, 0, 0);
    let mut found = Vec::new();
    for x0 in -6..=6 {
        for x1 in -6..=6 {
            for x2 in -6..=6 {
                let x = Element::new(x0, x1, x2);
                if a.star(&x).unwrap() == b {
                    found.push(x);
                }
            }
        }
    }
    assert_eq!(found, vec![Element::new(2, -1, 0)]);
    assert_eq!(a.divide(Side::Left, &b).unwrap(), found[0]);
}

#[test]
fn symbolic_numeric_coherence() {
    let names = [("i", "k", "m"), ("j", "p", "q")];
    let vars: Vec<VarId> = ["i", "k", "m", "j", "p", "q"].iter().map(|n| VarId::new(n).unwrap()).collect();
    let mut rng = StdRng::seed_from_u64(5);
    let mut products = Vec::new();
    for ex in 0..2 {
        for ey in 0..2 {
            let x = generic(ex, names[0]);
            let y = generic(ey, names[1]);
            products.push((x.clone(), y.clone(), x.star(&y).unwrap()));
        }
    }
    for trial in 0..100_000 {
        let (x, y, xy) = &products[trial % 4];
        let env: HashMap<VarId, i64> = vars.iter().map(|&v| (v, rng.gen_range(-1000..=1000))).collect();
        let nx = x.to_num(&env).unwrap();
        let ny = y.to_num(&env).unwrap();
        assert_eq!(xy.to_num(&env).unwrap(), nx.star(&ny).unwrap());
    }
}

#[test]
fn bigint_route_agrees_with_i64() {
    let mut rng = StdRng::seed_from_u64(6);
    for _ in 0..1000 {
        let x = random_element(&mut rng, 1000);
        let y = random_element(&mut rng, 1000);
        let big = |e: &Element| BigElement::new(BigInt::from(e.a), BigInt::from(e.k), BigInt::from(e.m));
        let prod = big(&x).star(&big(&y)).unwrap();
        assert_eq!(prod, big(&x.star(&y).unwrap()));
    }
    // Beyond i64 the big-integer carrier stays exact.
    let huge = BigElement::new(BigInt::from(i64::MAX) * 4, BigInt::from(0), BigInt::from(0));
    let sq = huge.star(&huge).unwrap();
    assert_eq!(sq.a, BigInt::from(i64::MAX) * 8);
    assert!(NumElement::<i64>::new(i64::MAX - 1, 0, 0).star(&NumElement::new(i64::MAX - 1, 0, 0)).is_err());
}

#[test]
fn lemma312_matches_hand_chain() {
    let v = generic(1, ("i", "k", "m"));
    let lhs = v.star(&v.star(&v).unwrap()).unwrap();
    let vl = v.inverse(Side::Right).unwrap();
    let rhs = vl.divide(Side::Left, &v).unwrap().star(&v).unwrap();
    let report = audit_lemma312::<i64>(InverseConvention::Right).unwrap();
    let odd = report.case(&[1]).unwrap();
    let show = |x: &SymbolicElement| x.components().unwrap().map(|p| p.to_string());
    assert_eq!(odd.lhs, show(&lhs));
    assert_eq!(odd.rhs, show(&rhs));
    let expected: Poly = "m+2k-10i^3-12i^2-2i".parse().unwrap();
    assert_eq!(lhs.second, expected);
    let expected: Poly = "m+2k-14i^3-18i^2-7i-1".parse().unwrap();
    assert_eq!(rhs.second, expected);
}

#[test]
fn lemma312_numeric_counterexample() {
    let v = Element::new(1, 0, 0);
    let lhs = v.star(&v.star(&v).unwrap()).unwrap();
    let rhs = v.lambda(InverseConvention::Right).unwrap().divide(Side::Left, &v).unwrap().star(&v).unwrap();
    assert_eq!(lhs, Element::new(3, 0, -1));
    assert_ne!(lhs, rhs);
    assert_eq!(rhs.k, -1);
}

#[test]
fn lemma312_is_consistent_with_the_big_integer_route() {
    for conv in InverseConvention::ALL {
        let small = audit_lemma312::<i64>(conv).unwrap();
        let big = audit_lemma312::<BigInt>(conv).unwrap();
        assert_eq!(small, big);
    }
}

#[test]
fn osborn_audit_is_backed_by_numeric_evaluation() {
    let law = builtin("osborn").unwrap();
    let carrier = Numeric::<i64>::new();
    let mut rng = StdRng::seed_from_u64(7);
    for conv in InverseConvention::ALL {
        let report = audit_osborn::<i64>(conv).unwrap();
        assert_eq!(report.cases.len(), 8);
        for case in &report.cases {
            assert!(case.residuals.iter().all(|r| !r.is_empty()));
            if case.holds {
                for _ in 0..100 {
                    let mut env = Env::new();
                    for (&var, &parity) in law.vars().iter().zip(&case.parities) {
                        let half = rng.gen_range(-100..=100);
                        let x =
                            Element::from_parts(parity, &half, rng.gen_range(-100..=100), rng.gen_range(-100..=100))
                                .unwrap();
                        env.bind(var, x);
                    }
                    let (l, r) = eval_law(&law, &env, &carrier, conv).unwrap();
                    assert_eq!(l, r);
                }
            } else {
                let witness = case.witness.as_ref().expect("failing cases carry a witness");
                let env =
                    law.vars().iter().zip(witness).fold(Env::new(), |env, (&v, &w)| env.with(v, Element::from(w)));
                let (l, r) = eval_law(&law, &env, &carrier, conv).unwrap();
                assert_ne!(l, r);
                let values = case.witness_values.as_ref().unwrap();
                assert_eq!((values.lhs, values.rhs), (arr(&l), arr(&r)));
                for (&w, &parity) in witness.iter().zip(&case.parities) {
                    assert_eq!(w[0].rem_euclid(2) as u8, parity);
                }
            }
        }
    }
}
