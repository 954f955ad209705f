use num_bigint::BigInt;
use opforge::homology_engine::*;
use proptest::prelude::*;

fn factors(m: &SparseIntMatrix) -> Vec<i64> {
    smith_normal_form(m)
        .factors
        .iter()
        .map(|f| i64::try_from(f).unwrap())
        .collect()
}

fn betti(groups: &[HomologyGroup]) -> Vec<(i64, usize)> {
    groups.iter().map(|g| (g.degree, g.betti)).collect()
}

/// Rank over the rationals by fraction-free elimination.
fn rational_rank(m: &SparseIntMatrix) -> usize {
    let mut a = vec![vec![BigInt::from(0); m.cols]; m.rows];
    for (r, c, v) in &m.entries {
        a[*r][*c] = v.clone();
    }
    let mut rank = 0;
    for col in 0..m.cols {
        let Some(p) = (rank..m.rows).find(|&r| a[r][col] != BigInt::from(0)) else {
            continue;
        };
        a.swap(rank, p);
        for r in 0..m.rows {
            if r != rank && a[r][col] != BigInt::from(0) {
                let (x, y) = (a[rank][col].clone(), a[r][col].clone());
                for c in 0..m.cols {
                    a[r][c] = &a[r][c] * &x - &a[rank][c] * &y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Determinant by Bareiss elimination.
fn bareiss_det(rows: &[Vec<i64>]) -> i128 {
    let n = rows.len();
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

// ---------------------------------------------------------------------------
// Smith normal form
// ---------------------------------------------------------------------------

#[test]
fn smith_examples() {
    let zero = SparseIntMatrix::from_dense(&[vec![0, 0], vec![0, 0]]);
    assert_eq!(smith_normal_form(&zero).rank, 0);
    let id = SparseIntMatrix::from_dense(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
    assert_eq!(factors(&id), vec![1, 1, 1]);
    let d = SparseIntMatrix::from_dense(&[vec![2, 0], vec![0, 3]]);
    assert_eq!(factors(&d), vec![1, 6]);
    let t = SparseIntMatrix::from_dense(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
    assert_eq!(factors(&t), vec![2, 6, 12]);
}

#[test]
fn sparse_matrix_sums_duplicates() {
    let m = SparseIntMatrix::new(2, 2, [(0, 0, BigInt::from(2)), (0, 0, BigInt::from(-2)), (1, 1, BigInt::from(3))]);
    assert_eq!(m.entries, vec![(1, 1, BigInt::from(3))]);
    let p = m.mul(&SparseIntMatrix::from_dense(&[vec![1, 1], vec![0, 2]]));
    assert_eq!(p, SparseIntMatrix::from_dense(&[vec![0, 0], vec![0, 6]]));
}

fn arb_dense(max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-4i64..=4, c), r))
}

proptest! {
    #[test]
    fn smith_rank_matches_rational_rank(rows in arb_dense(5)) {
        let m = SparseIntMatrix::from_dense(&rows);
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.rank, rational_rank(&m));
        prop_assert_eq!(s.factors.len(), s.rank);
    }

    #[test]
    fn smith_factors_divide_in_chain(rows in arb_dense(5)) {
        let f = factors(&SparseIntMatrix::from_dense(&rows));
        prop_assert!(f.iter().all(|&x| x > 0));
        for w in f.windows(2) {
            prop_assert_eq!(w[1] % w[0], 0);
        }
        let g = rows.iter().flatten().fold(0, |acc, &x| gcd(acc, x));
        if let Some(&first) = f.first() {
            prop_assert_eq!(first, g);
        }
    }

    #[test]
    fn smith_product_is_determinant(n in 1usize..=4, seed in prop::collection::vec(-4i64..=4, 16)) {
        let rows: Vec<Vec<i64>> = (0..n).map(|r| seed[r * n..r * n + n].to_vec()).collect();
        let det = bareiss_det(&rows).abs();
        let f = factors(&SparseIntMatrix::from_dense(&rows));
        if det == 0 {
            prop_assert!(f.len() < n);
        } else {
            prop_assert_eq!(f.len(), n);
            prop_assert_eq!(f.iter().map(|&x| x as i128).product::<i128>(), det);
        }
    }
}

// ---------------------------------------------------------------------------
// chain windows
// ---------------------------------------------------------------------------

#[test]
fn basis_sizes() {
    let w = build_window(Model::NBrac { c: 2, n: 2 }, -1, 0).unwrap();
    assert_eq!(w.bases[&-1].len(), 2);
    assert_eq!(w.bases[&0].len(), 2);
    for n in 1..=3 {
        for c in 1..=3 {
            let w = build_window(Model::Brac { c, n }, 0, 0).unwrap();
            assert_eq!(w.bases[&0].len(), (1..=n).product::<usize>(), "c={c} n={n}");
        }
    }
}

#[test]
fn empty_range_is_rejected() {
    assert!(build_window(Model::Brac { c: 2, n: 2 }, 0, -1).is_err());
}

#[test]
fn degrees_beyond_the_complex_are_zero() {
    let w = build_window(Model::Brac { c: 2, n: 2 }, 1, 2).unwrap();
    for g in homology(&w) {
        assert_eq!(g.betti, 0);
        assert!(g.torsion.is_empty());
    }
}

#[test]
fn little_disks_two_points() {
    let w = build_window(Model::NBrac { c: 2, n: 2 }, -3, 0).unwrap();
    let h = homology(&w);
    assert_eq!(betti(&h), vec![(-3, 0), (-2, 0), (-1, 1), (0, 1)]);
    assert!(h.iter().all(|g| g.torsion.is_empty()));
}

#[test]
fn spheres_of_dimension_c_minus_one() {
    for c in 1..=4usize {
        let low = -(c as i64) - 1;
        let w = build_window(Model::NBrac { c, n: 2 }, low, 0).unwrap();
        for g in homology(&w) {
            let expected = usize::from(g.degree == 0 || g.degree == -(c as i64 - 1));
            let expected = if c == 1 && g.degree == 0 { 2 } else { expected };
            assert_eq!(g.betti, expected, "c={c} degree {}", g.degree);
            assert!(g.torsion.is_empty());
        }
    }
}

#[test]
fn little_disks_three_points() {
    let w = build_window(Model::NBrac { c: 2, n: 3 }, -4, 0).unwrap();
    let h = homology(&w);
    assert_eq!(betti(&h), vec![(-4, 0), (-3, 0), (-2, 2), (-1, 3), (0, 1)]);
    assert_eq!(h.iter().map(|g| g.betti).sum::<usize>(), 6);
    assert!(h.iter().all(|g| g.torsion.is_empty()));
}

#[test]
fn quotient_has_the_homology_of_brac() {
    for c in 1..=3 {
        let a = homology(&build_window(Model::Brac { c, n: 2 }, -4, 0).unwrap());
        let b = homology(&build_window(Model::NBrac { c, n: 2 }, -4, 0).unwrap());
        assert_eq!(betti(&a), betti(&b), "c={c}");
    }
}

#[test]
fn betti_numbers_match_rational_ranks() {
    for model in [
        Model::Brac { c: 2, n: 3 },
        Model::NBrac { c: 3, n: 3 },
        Model::TreeColumn { n: 2, l: 1 },
        Model::Total { c: 2, n: 2, max_l: 1 },
    ] {
        let w = build_window(model, -3, 0).unwrap();
        for g in homology(&w) {
            let dim = w.bases[&g.degree].len();
            let expected = dim - rational_rank(&w.matrices[&g.degree]) - rational_rank(&w.matrices[&(g.degree - 1)]);
            assert_eq!(g.betti, expected, "{model:?} degree {}", g.degree);
        }
        for (d, m) in &w.matrices {
            if let Some(next) = w.matrices.get(&(d + 1)) {
                assert!(next.mul(m).is_zero());
            }
        }
    }
}

#[test]
fn tree_column_matches_complexity_two_paths() {
    let trees = homology(&build_window(Model::TreeColumn { n: 2, l: 0 }, -2, 1).unwrap());
    let paths = homology(&build_window(Model::Brac { c: 2, n: 2 }, -3, 0).unwrap());
    let shifted: Vec<(i64, usize)> = trees.iter().map(|g| (g.degree - 1, g.betti)).collect();
    assert_eq!(shifted, betti(&paths));
}

#[test]
fn homology_at_and_json() {
    let w = build_window(Model::NBrac { c: 2, n: 2 }, -1, 0).unwrap();
    assert_eq!(homology_at(&w, -1).unwrap().betti, 1);
    assert!(homology_at(&w, 3).is_err());
    let j = homology_json(&homology(&w));
    assert_eq!(j["0"]["betti"], 1);
    assert_eq!(j["-1"]["torsion"], serde_json::json!([]));
    assert_eq!(homology_at(&w, 0).unwrap().to_string(), "H^0 = Z^1 torsion []");
}
