use opforge::brace_calculus::*;
use opforge::grid_paths::signatures_with_total;
use opforge::simplicial_ops::FormalSum;
use opforge::tree_calculus::*;
use proptest::prelude::*;

fn tree(s: &str) -> PlanarTree {
    s.parse().unwrap()
}

fn amputated(max_n: usize, max_total: usize) -> Vec<AmputatedTree> {
    let mut out = Vec::new();
    for n in 0..=max_n {
        for total in 0..=max_total {
            for s in signatures_with_total(n, total, 0) {
                out.extend(enumerate_trees(0, &s.inputs, false));
            }
        }
    }
    out
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

// ---------------------------------------------------------------------------
// angles
// ---------------------------------------------------------------------------

#[test]
fn angle_examples() {
    assert_eq!(angles(&tree("W1()")), vec![(1, 0)]);
    assert_eq!(angles(&PlanarTree::cup()), vec![(1, 0), (2, 0)]);
    let drawn = tree("W1(B(W2(),L),W3(S,B(L,L,L)),W4(L,L))");
    assert_eq!(
        angles(&drawn),
        vec![(1, 0), (2, 0), (1, 1), (3, 0), (3, 1), (3, 2), (1, 2), (4, 0), (4, 1), (4, 2), (1, 3)]
    );
}

#[test]
fn angle_count_is_white_count_plus_white_arities() {
    for s in amputated(3, 3) {
        let expected = s.white_count() + s.arities().iter().sum::<usize>();
        assert_eq!(angles(&s).len(), expected, "{s}");
    }
}

#[test]
fn amputation_removes_white_legs() {
    assert_eq!(amputate(&tree("W1(L,W2(L,L),L)")), Some(tree("W1(W2())")));
    assert_eq!(amputate(&tree("B(L,W1())")), None);
    assert_eq!(amputate(&tree("|")), None);
}

// ---------------------------------------------------------------------------
// whiskered insertion
// ---------------------------------------------------------------------------

#[test]
fn grafting_into_arity_zero_leaf() {
    let outer = tree("W1(W2())");
    for inner in [tree("W1()"), PlanarTree::cup(), tree("W1(W2(),S)")] {
        let r = whiskered_insert(&outer, 2, &inner).unwrap();
        assert_eq!(r.len(), 1, "{inner}");
    }
}

#[test]
fn two_inputs_into_two_angles() {
    let r = whiskered_insert(&tree("W1(W2(),W3())"), 1, &tree("W1(S)")).unwrap();
    assert_eq!(r.len(), 3);
    assert!(r.iter().all(|(_, c)| c == 1));
}

#[test]
fn insertion_needs_amputated_trees() {
    assert!(whiskered_insert(&tree("W1(L)"), 1, &tree("W1()")).is_err());
    assert!(whiskered_insert(&tree("W1()"), 2, &tree("W1()")).is_err());
}

proptest! {
    #[test]
    fn insertion_term_count_is_multiset_count(sa in 0usize..10_000, i0 in 0usize..8, sb in 0usize..10_000) {
        let pool = amputated(3, 3);
        let nonempty: Vec<&AmputatedTree> = pool.iter().filter(|t| t.white_count() > 0).collect();
        let a = nonempty[sa % nonempty.len()];
        let b = pool[sb % pool.len()].clone();
        let i = i0 % a.white_count() + 1;
        let arity = a.arities()[i - 1];
        let r = whiskered_insert(a, i, &b).unwrap();
        let total: i64 = r.iter().map(|(_, c)| c).sum();
        let expected = if arity == 0 { 1 } else { binomial(angles(&b).len() + arity - 1, arity) };
        prop_assert_eq!(total as usize, expected);
        prop_assert!(r.basis().all(|t| t.leg_count() == 0));
    }
}

// ---------------------------------------------------------------------------
// differential
// ---------------------------------------------------------------------------

#[test]
fn differential_examples() {
    assert!(amputated_differential(&PlanarTree::cup()).unwrap().is_zero());
    let d = amputated_differential(&tree("W1(W2())")).unwrap();
    let support: Vec<PlanarTree> = d.basis().cloned().collect();
    assert_eq!(support, vec![tree("B(W1(),W2())"), tree("B(W2(),W1())")]);
    let bracket = FormalSum::from_terms([(tree("W1(W2())"), 1), (tree("W2(W1())"), -1)]);
    assert!(bracket.map_linear(|s| amputated_differential(s).unwrap()).is_zero());
}

#[test]
fn amputated_differential_squares_to_zero() {
    for s in amputated(3, 4) {
        let d = amputated_differential(&s).unwrap();
        let dd = d.map_linear(|t| amputated_differential(t).unwrap());
        assert!(dd.is_zero(), "{s}");
    }
}

// ---------------------------------------------------------------------------
// whiskering
// ---------------------------------------------------------------------------

#[test]
fn whiskering_the_unit() {
    for d in 0..=3 {
        assert_eq!(whisker(&PlanarTree::unit(), d).unwrap(), FormalSum::single(PlanarTree::unit()));
    }
}

#[test]
fn whiskering_a_single_vertex() {
    for d in 0..=4 {
        let w = whisker(&tree("W1()"), d).unwrap();
        assert_eq!(w.len(), d + 1);
        let legs: Vec<usize> = w.basis().map(|t| t.leg_count()).collect();
        let mut sorted = legs.clone();
        sorted.sort();
        assert_eq!(sorted, (0..=d).collect::<Vec<_>>());
    }
}

#[test]
fn whiskering_the_cup() {
    let w = whisker(&PlanarTree::cup(), 1).unwrap();
    let expected = FormalSum::from_terms([
        (tree("B(W1(),W2())"), 1),
        (tree("B(W1(),W2(L1))"), 1),
        (tree("B(W1(L1),W2())"), 1),
    ]);
    assert_eq!(w, expected);
}

#[test]
fn whisker_exact_counts_leg_placements() {
    for s in amputated(2, 2) {
        let a = angles(&s).len();
        for legs in 0..=3 {
            let expected = if a == 0 { usize::from(legs == 0) } else { binomial(a + legs - 1, legs) };
            assert_eq!(whisker_exact(&s, legs).unwrap().len(), expected, "{s} {legs}");
        }
    }
}

#[test]
fn whiskering_is_a_chain_map_on_small_trees() {
    for s in amputated(2, 2) {
        assert!(check_whisker_differential(&s, 2).unwrap(), "{s}");
    }
}

#[test]
fn whiskering_respects_composition_on_small_trees() {
    let pool = amputated(2, 2);
    for a in &pool {
        for b in &pool {
            if a.white_count() + b.white_count() > 3 {
                continue;
            }
            for i in 1..=a.white_count() {
                assert!(check_whisker_composition(a, i, b, 2).unwrap(), "{a} o{i} {b}");
            }
        }
    }
}

// ---------------------------------------------------------------------------
// decomposition into atoms
// ---------------------------------------------------------------------------

#[test]
fn decomposition_examples() {
    let d = decompose_into_atoms(&tree("W1(W2())")).unwrap();
    assert_eq!(d.expr, AtomExpr::Brace(1));
    assert_eq!(d.sign, 1);
    let d = decompose_into_atoms(&PlanarTree::cup()).unwrap();
    assert_eq!(d.expr, AtomExpr::Cup);
    assert_eq!(decompose_into_atoms(&tree("W1()")).unwrap().expr, AtomExpr::Identity);
    assert_eq!(decompose_into_atoms(&PlanarTree::unit()).unwrap().expr, AtomExpr::Unit);
    assert!(decompose_into_atoms(&tree("W1(L)")).is_err());
}

#[test]
fn relabelled_decomposition_carries_signature_sign() {
    let s = tree("W2(W1(),W3())");
    let d = decompose_into_atoms(&s).unwrap();
    assert!(matches!(d.expr, AtomExpr::Relabel(..)));
    assert_eq!(d.sign, signature_sign(&s));
    assert!(check_decomposition(&s).unwrap());
}

proptest! {
    #[test]
    fn decomposition_round_trip(seed in 0usize..100_000, relabel in 0usize..6) {
        let pool = amputated(3, 3);
        let s = pool[seed % pool.len()].clone();
        let n = s.white_count();
        let perms: Vec<Vec<usize>> = match n {
            3 => vec![vec![1, 2, 3], vec![1, 3, 2], vec![2, 1, 3], vec![2, 3, 1], vec![3, 1, 2], vec![3, 2, 1]],
            2 => vec![vec![1, 2], vec![2, 1]],
            _ => vec![(1..=n).collect()],
        };
        let perm = &perms[relabel % perms.len()];
        let s = s.relabel_whites(&|i| perm[i - 1]);
        let d = decompose_into_atoms(&s).unwrap();
        prop_assert_eq!(evaluate_atoms(&d.expr).unwrap(), FormalSum::term(d.sign, s));
    }
}
