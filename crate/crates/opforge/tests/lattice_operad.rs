use opforge::grid_paths::*;
use opforge::lattice_operad::*;
use opforge::simplicial_ops::*;
use proptest::prelude::*;

fn path(s: &str) -> MarkedLatticePath {
    s.parse().unwrap()
}

fn paths_of(ks: &[usize], l: usize) -> Vec<MarkedLatticePath> {
    enumerate_paths(&ColourSignature::new(ks.to_vec(), l), None)
}

// ---------------------------------------------------------------------------
// compose
// ---------------------------------------------------------------------------

#[test]
fn unit_path_shape() {
    assert_eq!(unit_path(0), path("lat 0;0 | 0 1:0"));
    assert_eq!(unit_path(2), path("lat 2;2 | 0 1:1 1:1 1:0"));
}

#[test]
fn unit_laws() {
    for ks in [vec![1, 2], vec![0, 1, 1], vec![2], vec![]] {
        for l in 0..=2 {
            for p in paths_of(&ks, l) {
                assert_eq!(compose(&unit_path(l), 1, &p).unwrap(), p);
                for (i, &k) in ks.iter().enumerate() {
                    assert_eq!(compose(&p, i + 1, &unit_path(k)).unwrap(), p);
                }
            }
        }
    }
}

#[test]
fn colour_mismatch_is_rejected() {
    let outer = path("lat 1;0 | 0 1:0 1:0");
    assert!(compose(&outer, 1, &path("lat 0;0 | 0 1:0")).is_err());
    assert!(compose(&outer, 2, &path("lat 0;1 | 1 1:0")).is_err());
}

/// A path in `Lat(k;l)` as the monotone map sending marking unit `t` to its point.
fn marking_map(p: &MarkedLatticePath) -> Vec<usize> {
    p.markings()
        .iter()
        .enumerate()
        .flat_map(|(a, &m)| std::iter::repeat_n(a, m))
        .collect()
}

/// One-colour composition as composition of monotone maps: an outer point
/// `a` goes to the inner point where the running marking total first reaches
/// `a`, with the endpoints fixed.
fn compose_by_maps(outer: &MarkedLatticePath, inner: &MarkedLatticePath) -> Vec<usize> {
    let f = marking_map(outer);
    let g = marking_map(inner);
    let last_outer = outer.point_count() - 1;
    let last_inner = inner.point_count() - 1;
    let psi = |a: usize| {
        if a == 0 {
            0
        } else if a == last_outer {
            last_inner
        } else {
            g[a - 1]
        }
    };
    f.iter().map(|&a| psi(a)).collect()
}

#[test]
fn one_colour_composition_is_composition_in_delta() {
    for k in 0..=3 {
        for j in 0..=3 {
            for l in 0..=3 {
                for outer in paths_of(&[k], l) {
                    for inner in paths_of(&[j], k) {
                        let c = compose(&outer, 1, &inner).unwrap();
                        assert_eq!(c.signature(), &ColourSignature::new(vec![j], l));
                        assert_eq!(marking_map(&c), compose_by_maps(&outer, &inner), "{outer} o {inner}");
                    }
                }
            }
        }
    }
}

#[test]
fn delta_two_one_table() {
    let outers = paths_of(&[1], 2);
    let inners = paths_of(&[0], 1);
    assert_eq!(outers.len(), 6);
    assert_eq!(inners.len(), 2);
    let mut table = Vec::new();
    for o in &outers {
        for i in &inners {
            table.push(compose(o, 1, i).unwrap().to_string());
        }
    }
    let expected = [
        "lat 0;2 | 0 1:2", "lat 0;2 | 0 1:2",
        "lat 0;2 | 0 1:2", "lat 0;2 | 1 1:1",
        "lat 0;2 | 0 1:2", "lat 0;2 | 2 1:0",
        "lat 0;2 | 1 1:1", "lat 0;2 | 1 1:1",
        "lat 0;2 | 1 1:1", "lat 0;2 | 2 1:0",
        "lat 0;2 | 2 1:0", "lat 0;2 | 2 1:0",
    ];
    assert_eq!(table, expected);
}

fn arb_path(max_n: usize, max_k: usize, max_l: usize) -> impl Strategy<Value = MarkedLatticePath> {
    (prop::collection::vec(0usize..=max_k, 1..=max_n), 0usize..=max_l)
        .prop_flat_map(|(ks, l)| {
            let all = paths_of(&ks, l);
            (Just(all.clone()), 0..all.len())
        })
        .prop_map(|(all, i)| all[i].clone())
}

fn pick(ks: usize, seed: usize, n: usize) -> MarkedLatticePath {
    let mut all = Vec::new();
    for sn in 1..=n {
        for total in 0..=2 {
            for s in signatures_with_total(sn, total, ks) {
                all.extend(enumerate_paths(&s, None));
            }
        }
    }
    all[seed % all.len()].clone()
}

proptest! {
    #[test]
    fn sequential_associativity(a in arb_path(2, 2, 2), i0 in 0usize..8, sb in 0usize..10_000, j0 in 0usize..8, sc in 0usize..10_000) {
        let n = a.signature().arity();
        let i = i0 % n + 1;
        let b = pick(a.signature().inputs[i - 1], sb, 2);
        let m = b.signature().arity();
        let j = j0 % m + 1;
        let c = pick(b.signature().inputs[j - 1], sc, 2);
        let lhs = compose(&compose(&a, i, &b).unwrap(), i + j - 1, &c).unwrap();
        let rhs = compose(&a, i, &compose(&b, j, &c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn parallel_associativity(a in arb_path(3, 2, 2), sb in 0usize..10_000, sc in 0usize..10_000) {
        let n = a.signature().arity();
        prop_assume!(n >= 2);
        let b = pick(a.signature().inputs[0], sb, 2);
        let c = pick(a.signature().inputs[n - 1], sc, 2);
        let m = b.signature().arity();
        let lhs = compose(&compose(&a, 1, &b).unwrap(), n + m - 1, &c).unwrap();
        let rhs = compose(&compose(&a, n, &c).unwrap(), 1, &b).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn composition_respects_complexity(a in arb_path(2, 2, 2), sb in 0usize..10_000) {
        let b = pick(a.signature().inputs[0], sb, 2);
        let c = compose(&a, 1, &b).unwrap();
        prop_assert!(complexity(&c) <= complexity(&a).max(complexity(&b)));
    }
}

// ---------------------------------------------------------------------------
// whiskering and Brac composition
// ---------------------------------------------------------------------------

#[test]
fn whisker_zero_is_identity() {
    for total in 0..=3 {
        for s in signatures_with_total(2, total, 0) {
            for p in enumerate_paths(&s, None) {
                assert_eq!(whisker_terms(&p, 0).unwrap(), vec![p]);
            }
        }
    }
}

#[test]
fn whisker_one_on_cup_path() {
    let cup = path("lat 0,0;0 | 0 1:0 2:0");
    let terms: Vec<String> = whisker_terms(&cup, 1).unwrap().iter().map(|p| p.to_string()).collect();
    assert_eq!(terms, ["lat 0,1;1 | 0 1:0 2:1 2:0", "lat 1,0;1 | 0 1:1 1:0 2:0"]);
}

#[test]
fn whisker_term_count_is_multiset_count() {
    let p = path("lat 1,1;0 | 0 1:0 2:0 1:0 2:0");
    for s in 0..=3 {
        let terms = whisker_terms(&p, s).unwrap();
        let expected = (1..=s).fold(1, |acc, t| acc * (4 + t - 1) / t);
        assert_eq!(terms.len(), expected);
        assert!(terms.iter().all(|q| q.signature().output == s && q.signature().total_k() == 2 + s));
    }
}

#[test]
fn whisker_rejects_marked_paths() {
    assert!(whisker_terms(&path("lat 0;1 | 1 1:0"), 1).is_err());
}

#[test]
fn brac_composite_of_cups() {
    let cup = path("lat 0,0;0 | 0 1:0 2:0");
    let c = brac_compose(&cup, 1, &cup).unwrap();
    assert!(c.signed);
    assert_eq!(c.sum, FormalSum::single(path("lat 0,0,0;0 | 0 1:0 2:0 3:0")));
}

#[test]
fn brac_composite_into_positive_colour() {
    let circle = path("lat 1,0;0 | 0 1:0 2:0 1:0");
    let cup = path("lat 0,0;0 | 0 1:0 2:0");
    let c = brac_compose(&circle, 1, &cup).unwrap();
    assert!(c.signed);
    assert_eq!(c.sum.len(), 2);
    assert!(c.sum.iter().all(|(p, k)| k == 1 && p.signature().total_k() == 1));
}

#[test]
fn brac_composite_unit_law() {
    let unit = path("lat 0;0 | 0 1:0");
    let circle = path("lat 1,0;0 | 0 1:0 2:0 1:0");
    assert_eq!(brac_compose(&unit, 1, &circle).unwrap().sum, FormalSum::single(circle));
}

#[test]
fn high_complexity_composites_are_unsigned() {
    let staircase = path("lat 1,1;0 | 0 1:0 2:0 1:0 2:0");
    let cup = path("lat 0,0;0 | 0 1:0 2:0");
    assert!(!brac_compose(&staircase, 1, &cup).unwrap().signed);
    assert!(brac_compose(&staircase, 1, &path("lat 1;1 | 0 1:1 1:0")).is_err());
}

// ---------------------------------------------------------------------------
// projection to the quotient without internal points
// ---------------------------------------------------------------------------

#[test]
fn projection_fixes_internal_point_free_paths() {
    let x = FormalSum::from_terms([(path("lat 1,0;0 | 0 1:0 2:0 1:0"), 3), (path("lat 1;0 | 0 1:0 1:0"), 2)]);
    assert_eq!(normalize(&x), FormalSum::single(path("lat 1,0;0 | 0 1:0 2:0 1:0")).scaled(3));
}

#[test]
fn projection_is_a_chain_map() {
    for total in 0..=4 {
        for n in 1..=2 {
            for s in signatures_with_total(n, total, 0) {
                for p in enumerate_paths(&s, Some(2)) {
                    let x = FormalSum::single(p.clone());
                    let lhs = normalize(&simplicial_differential(&x));
                    let rhs = normalize(&simplicial_differential(&normalize(&x)));
                    assert_eq!(lhs, rhs, "{p}");
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn projection_commutes_with_brac_composition(a in arb_path(2, 2, 0), sb in 0usize..10_000) {
        prop_assume!(complexity(&a) <= 2);
        let b = pick(0, sb, 2);
        prop_assume!(complexity(&b) <= 2);
        let full = normalize(&brac_compose(&a, 1, &b).unwrap().sum);
        let pa = normalize(&FormalSum::single(a.clone()));
        let pb = normalize(&FormalSum::single(b.clone()));
        let mut images = FormalSum::zero();
        for (x, cx) in pa.iter() {
            for (y, cy) in pb.iter() {
                images.add_scaled(&normalize(&brac_compose(x, 1, y).unwrap().sum), cx * cy);
            }
        }
        prop_assert_eq!(full, images);
    }
}

#[test]
fn closure_dichotomy() {
    for c in 0..=2 {
        let v = hbrac_closure_check(c, 2, 4);
        assert!(v.closed, "c={c}");
        assert!(v.counterexample.is_none());
        assert_eq!(v.checked > 0, c > 0);
    }
    let v = hbrac_closure_check(3, 2, 4);
    assert!(!v.closed);
    let (p, d) = v.counterexample.unwrap();
    assert_eq!(p, path("lat 1,1;0 | 0 1:0 2:0 1:0 2:0"));
    assert!(!p.has_internal_point());
    assert!(d.basis().any(|q| q.has_internal_point()));
    assert_eq!(d, simplicial_boundary(&p));
}

// ---------------------------------------------------------------------------
// surjections
// ---------------------------------------------------------------------------

#[test]
fn surjection_examples() {
    let u: Surjection = "surj n=2 : 1,2,1".parse().unwrap();
    let p = surjection_to_path(&u).unwrap();
    assert_eq!(p.moves(), &[1, 2, 1]);
    assert_eq!(p.signature(), &ColourSignature::new(vec![1, 0], 0));
    let b = Surjection::new(3, vec![1, 2, 3]).unwrap();
    assert_eq!(surjection_to_path(&b).unwrap().moves(), &[1, 2, 3]);
    assert_eq!(path_to_surjection(&p).unwrap(), u);
    assert_eq!(u.to_string(), "surj n=2 : 1,2,1");
}

#[test]
fn surjection_errors() {
    assert!(Surjection::new(2, vec![1, 1]).is_err());
    assert!(Surjection::new(2, vec![1, 3]).is_err());
    assert!(surjection_to_path(&Surjection::new(2, vec![1, 1, 2]).unwrap()).is_err());
    assert!(path_to_surjection(&path("lat 1;0 | 0 1:0 1:0")).is_err());
    assert!("surj 2 : 1,2".parse::<Surjection>().unwrap_err().is_parse());
}

#[test]
fn bijections_give_staircases() {
    for u in enumerate_surjections(3, 3) {
        let p = surjection_to_path(&u).unwrap();
        assert_eq!(p.signature(), &ColourSignature::new(vec![0, 0, 0], 0));
    }
    assert_eq!(enumerate_surjections(3, 3).len(), 6);
}

fn variations(values: &[usize], i: usize, j: usize) -> usize {
    let mut count = 0;
    let mut prev = None;
    for &v in values {
        if v == i || v == j {
            if prev.is_some_and(|p| p != v) {
                count += 1;
            }
            prev = Some(v);
        }
    }
    count
}

#[test]
fn surjection_path_bijection() {
    for n in 1..=3 {
        for m in n..=7 {
            let mut images = std::collections::BTreeSet::new();
            for u in enumerate_surjections(m, n) {
                let level = (1..=n)
                    .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
                    .map(|(i, j)| variations(u.values(), i, j))
                    .max()
                    .unwrap_or(0);
                assert_eq!(u.filtration_level(), level);
                if !u.is_nondegenerate() {
                    continue;
                }
                let p = surjection_to_path(&u).unwrap();
                assert!(!p.has_internal_point());
                assert_eq!(complexity(&p), level);
                assert_eq!(p.signature().inputs, u.colours());
                assert_eq!(path_to_surjection(&p).unwrap(), u);
                images.insert(p);
            }
            let mut free = std::collections::BTreeSet::new();
            for s in signatures_with_total(n, m - n, 0) {
                free.extend(enumerate_paths(&s, None).into_iter().filter(|p| !p.has_internal_point()));
            }
            assert_eq!(images, free, "m={m} n={n}");
        }
    }
}

#[test]
fn two_value_nondegenerate_surjections() {
    for m in 2..=8 {
        let count = enumerate_surjections(m, 2).iter().filter(|u| u.is_nondegenerate()).count();
        assert_eq!(count, 2, "m={m}");
    }
}

#[test]
fn surjection_count_matches_inclusion_exclusion() {
    fn binom(n: i64, k: i64) -> i64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }
    for n in 0..=3i64 {
        for m in 0..=6i64 {
            let expected: i64 = (0..=n).map(|j| (-1i64).pow(j as u32) * binom(n, j) * (n - j).pow(m as u32)).sum();
            assert_eq!(enumerate_surjections(m as usize, n as usize).len() as i64, expected, "m={m} n={n}");
        }
    }
}
