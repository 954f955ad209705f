//! Finite degree windows of chain complexes and their integer homology.
//!
//! Degrees are cohomological and every differential raises degree by one.
//! A window over `[d0, d1]` materializes `C_(d0-1) .. C_(d1+1)` so that the
//! homology of every degree in `[d0, d1]` is determined.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{OpError, Result};
use crate::grid_paths::{enumerate_paths, signatures_with_total, ColourSignature, MarkedLatticePath};
use crate::simplicial_ops::{simplicial_boundary, total_differential, DifferentialContext, FormalSum};
use crate::tree_calculus::{enumerate_trees, tree_boundary, PlanarTree};

/// Sparse integer matrix stored as `(row, col, value)` triples without zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseIntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, BigInt)>,
}

impl SparseIntMatrix {
    pub fn new(rows: usize, cols: usize, entries: impl IntoIterator<Item = (usize, usize, BigInt)>) -> Self {
        let mut acc: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
        for (r, c, v) in entries {
            assert!(r < rows && c < cols, "entry ({r},{c}) outside {rows}x{cols}");
            *acc.entry((r, c)).or_insert_with(BigInt::zero) += v;
        }
        SparseIntMatrix {
            rows,
            cols,
            entries: acc
                .into_iter()
                .filter(|(_, v)| !v.is_zero())
                .map(|((r, c), v)| (r, c, v))
                .collect(),
        }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let entries = rows.iter().enumerate().flat_map(|(r, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, v)| **v != 0)
                .map(move |(c, v)| (r, c, BigInt::from(*v)))
        });
        SparseIntMatrix::new(rows.len(), cols, entries)
    }

    /// Product `self * other`.
    pub fn mul(&self, other: &SparseIntMatrix) -> SparseIntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut by_row: HashMap<usize, Vec<(usize, &BigInt)>> = HashMap::new();
        for (r, c, v) in &other.entries {
            by_row.entry(*r).or_default().push((*c, v));
        }
        let mut out = Vec::new();
        for (r, k, v) in &self.entries {
            if let Some(row) = by_row.get(k) {
                for (c, w) in row {
                    out.push((*r, *c, v * *w));
                }
            }
        }
        SparseIntMatrix::new(self.rows, other.cols, out)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Invariant factors `d1 | d2 | ...` (all nonzero) and the rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub factors: Vec<BigInt>,
    pub rank: usize,
}

fn dense_snf(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, v) in row.iter().enumerate().skip(t) {
                if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = &a[i][t] / &p;
                for j in t..cols {
                    let delta = &q * &a[t][j];
                    a[i][j] -= delta;
                }
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = &a[t][j] / &p;
                for row in a.iter_mut().skip(t) {
                    let delta = &q * &row[t];
                    row[j] -= delta;
                }
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if clean {
                let bad = (t + 1..rows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| !(&a[i][j] % &p).is_zero());
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for j in t..cols {
                            let v = a[i][j].clone();
                            a[t][j] += v;
                        }
                        continue;
                    }
                }
            }
            let mut best = (t, t);
            for i in t..rows {
                for j in t..cols {
                    if (i == t || j == t) && !a[i][j].is_zero() && a[i][j].abs() < a[best.0][best.1].abs() {
                        best = (i, j);
                    }
                }
            }
            a.swap(t, best.0);
            for row in a.iter_mut() {
                row.swap(t, best.1);
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut x, mut y) = (a.abs(), b.abs());
    while !y.is_zero() {
        let r = &x % &y;
        x = y;
        y = r;
    }
    x
}

/// Smith normal form of an integer matrix. Unit pivots are eliminated
/// sparsely first; the remainder is diagonalized densely.
pub fn smith_normal_form(m: &SparseIntMatrix) -> SmithForm {
    let mut rows: Vec<BTreeMap<usize, BigInt>> = vec![BTreeMap::new(); m.rows];
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.cols];
    for (r, c, v) in &m.entries {
        rows[*r].insert(*c, v.clone());
        col_rows[*c].insert(*r);
    }
    let mut units = 0usize;
    let mut active_cols: BTreeSet<usize> = (0..m.cols).filter(|&c| !col_rows[c].is_empty()).collect();
    loop {
        let mut order: Vec<(usize, usize)> = active_cols.iter().map(|&c| (col_rows[c].len(), c)).collect();
        order.sort_unstable();
        let mut pivot = None;
        for &(_, c) in &order {
            let cand = col_rows[c]
                .iter()
                .filter(|&&r| rows[r][&c].magnitude().is_one())
                .min_by_key(|&&r| (rows[r].len(), r));
            if let Some(&r) = cand {
                pivot = Some((r, c));
                break;
            }
        }
        let Some((pr, pc)) = pivot else { break };
        let prow = std::mem::take(&mut rows[pr]);
        let pv = prow[&pc].clone();
        let targets: Vec<usize> = col_rows[pc].iter().copied().filter(|&r| r != pr).collect();
        for r in targets {
            let factor = &rows[r][&pc] * &pv;
            for (c, v) in &prow {
                let entry = rows[r].entry(*c).or_insert_with(BigInt::zero);
                *entry -= &factor * v;
                if entry.is_zero() {
                    rows[r].remove(c);
                    col_rows[*c].remove(&r);
                } else {
                    col_rows[*c].insert(r);
                }
            }
        }
        for c in prow.keys() {
            col_rows[*c].remove(&pr);
            if col_rows[*c].is_empty() {
                active_cols.remove(c);
            }
        }
        col_rows[pc].clear();
        active_cols.remove(&pc);
        units += 1;
    }
    let live_rows: Vec<usize> = (0..m.rows).filter(|&r| !rows[r].is_empty()).collect();
    let live_cols: Vec<usize> = active_cols.iter().copied().collect();
    let col_pos: HashMap<usize, usize> = live_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let dense: Vec<Vec<BigInt>> = live_rows
        .iter()
        .map(|&r| {
            let mut row = vec![BigInt::zero(); live_cols.len()];
            for (c, v) in &rows[r] {
                row[col_pos[c]] = v.clone();
            }
            row
        })
        .collect();
    let mut diag = dense_snf(dense);
    for a in 0..diag.len() {
        for b in a + 1..diag.len() {
            let g = gcd(&diag[a], &diag[b]);
            if g != diag[a] {
                let l = &diag[a] / &g * &diag[b];
                diag[a] = g;
                diag[b] = l;
            }
        }
    }
    diag.sort();
    let mut factors = vec![BigInt::one(); units];
    factors.extend(diag);
    let rank = factors.len();
    SmithForm { factors, rank }
}

/// Integer homology of one degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyGroup {
    pub degree: i64,
    pub betti: usize,
    pub torsion: Vec<BigInt>,
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t: Vec<String> = self.torsion.iter().map(|x| x.to_string()).collect();
        write!(f, "H^{} = Z^{} torsion [{}]", self.degree, self.betti, t.join(","))
    }
}

/// A window of a cochain complex with boundary matrices `∂_d : C_d -> C_(d+1)`.
#[derive(Debug, Clone)]
pub struct ChainWindow {
    /// Requested degree range.
    pub low: i64,
    pub high: i64,
    /// Canonical basis keys of `C_d` for `d` in `low - 1 ..= high + 1`.
    pub bases: BTreeMap<i64, Vec<String>>,
    /// `∂_d` for `d` in `low - 1 ..= high`.
    pub matrices: BTreeMap<i64, SparseIntMatrix>,
}

/// The complexes available as windows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// Unmarked paths of complexity at most `c` with `n` inputs, simplicial `∂`.
    Brac { c: usize, n: usize },
    /// The quotient of `Brac` by paths with an internal point.
    NBrac { c: usize, n: usize },
    /// Trees with `n` white vertices and `l` legs, vertex differential `∂`.
    TreeColumn { n: usize, l: usize },
    /// Paths of complexity at most `c` with `n` inputs and marking total at
    /// most `max_l`, total differential `∂ + δ` with terms beyond `max_l` dropped.
    Total { c: usize, n: usize, max_l: usize },
}

fn model_basis(model: Model, degree: i64) -> Vec<Basis> {
    match model {
        Model::Brac { c, n } | Model::NBrac { c, n } => {
            if degree > 0 {
                return Vec::new();
            }
            let total = (-degree) as usize;
            let mut out = Vec::new();
            for sig in signatures_with_total(n, total, 0) {
                for p in enumerate_paths(&sig, Some(c)) {
                    if matches!(model, Model::NBrac { .. }) && p.has_internal_point() {
                        continue;
                    }
                    out.push(Basis::Path(p));
                }
            }
            out
        }
        Model::TreeColumn { n, l } => {
            let total = l as i64 + n as i64 - 1 - degree;
            if total < 0 {
                return Vec::new();
            }
            let mut out = Vec::new();
            for sig in signatures_with_total(n, total as usize, l) {
                out.extend(enumerate_trees(l, &sig.inputs, true).into_iter().map(Basis::Tree));
            }
            out
        }
        Model::Total { c, n, max_l } => {
            let mut out = Vec::new();
            for l in 0..=max_l {
                let total = l as i64 - degree;
                if total < 0 {
                    continue;
                }
                for sig in signatures_with_total(n, total as usize, l) {
                    out.extend(enumerate_paths(&sig, Some(c)).into_iter().map(Basis::Path));
                }
            }
            out
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Basis {
    Path(MarkedLatticePath),
    Tree(PlanarTree),
}

impl Basis {
    fn key(&self) -> String {
        match self {
            Basis::Path(p) => p.to_string(),
            Basis::Tree(t) => t.to_string(),
        }
    }
}

fn model_differential(model: Model, b: &Basis) -> Vec<(Basis, i64)> {
    match (model, b) {
        (Model::Brac { .. }, Basis::Path(p)) => simplicial_boundary(p)
            .iter()
            .map(|(q, c)| (Basis::Path(q.clone()), c))
            .collect(),
        (Model::NBrac { .. }, Basis::Path(p)) => simplicial_boundary(p)
            .iter()
            .filter(|(q, _)| !q.has_internal_point())
            .map(|(q, c)| (Basis::Path(q.clone()), c))
            .collect(),
        (Model::TreeColumn { .. }, Basis::Tree(t)) => tree_boundary(t)
            .iter()
            .map(|(u, c)| (Basis::Tree(u.clone()), c))
            .collect(),
        (Model::Total { max_l, .. }, Basis::Path(p)) => {
            total_differential(&FormalSum::single(p.clone()), DifferentialContext::Lattice)
                .iter()
                .filter(|(q, _)| q.signature().output <= max_l)
                .map(|(q, c)| (Basis::Path(q.clone()), c))
                .collect()
        }
        _ => unreachable!("basis kind matches model"),
    }
}

/// Builds the window `[low, high]` of a model and asserts `∂² = 0`.
pub fn build_window(model: Model, low: i64, high: i64) -> Result<ChainWindow> {
    if low > high {
        return Err(OpError::OutOfRange(format!("empty degree range {low}..{high}")));
    }
    let degrees: Vec<i64> = (low - 1..=high + 1).collect();
    let bases: Vec<Vec<Basis>> = degrees.par_iter().map(|&d| model_basis(model, d)).collect();
    let index: Vec<HashMap<&Basis, usize>> = bases
        .iter()
        .map(|b| b.iter().enumerate().map(|(i, x)| (x, i)).collect())
        .collect();
    let mut matrices = BTreeMap::new();
    for (pos, &d) in degrees.iter().enumerate().take(degrees.len() - 1) {
        let cols: Vec<Vec<(usize, usize, BigInt)>> = bases[pos]
            .par_iter()
            .enumerate()
            .map(|(col, b)| {
                model_differential(model, b)
                    .into_iter()
                    .map(|(t, c)| {
                        let row = *index[pos + 1]
                            .get(&t)
                            .unwrap_or_else(|| panic!("boundary term {} outside the basis", t.key()));
                        (row, col, BigInt::from(c))
                    })
                    .collect()
            })
            .collect();
        let m = SparseIntMatrix::new(bases[pos + 1].len(), bases[pos].len(), cols.into_iter().flatten());
        matrices.insert(d, m);
    }
    for d in low - 1..high {
        let prod = matrices[&(d + 1)].mul(&matrices[&d]);
        if !prod.is_zero() {
            return Err(OpError::invariant(
                "d squared",
                format!("∂ ∘ ∂ is nonzero from degree {d}"),
            ));
        }
    }
    Ok(ChainWindow {
        low,
        high,
        bases: degrees
            .iter()
            .zip(&bases)
            .map(|(&d, b)| (d, b.iter().map(Basis::key).collect()))
            .collect(),
        matrices,
    })
}

/// Homology of every degree of the window.
pub fn homology(window: &ChainWindow) -> Vec<HomologyGroup> {
    let snf: BTreeMap<i64, SmithForm> = window
        .matrices
        .par_iter()
        .map(|(d, m)| (*d, smith_normal_form(m)))
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    (window.low..=window.high)
        .map(|d| {
            let dim = window.bases[&d].len();
            let out_rank = snf[&d].rank;
            let incoming = &snf[&(d - 1)];
            HomologyGroup {
                degree: d,
                betti: dim - out_rank - incoming.rank,
                torsion: incoming.factors.iter().filter(|f| !f.is_one()).cloned().collect(),
            }
        })
        .collect()
}

/// Homology of one degree; the degree must lie inside the window.
pub fn homology_at(window: &ChainWindow, degree: i64) -> Result<HomologyGroup> {
    if degree < window.low || degree > window.high {
        return Err(OpError::OutOfRange(format!(
            "degree {degree} outside the window {}..{}",
            window.low, window.high
        )));
    }
    Ok(homology(window)
        .into_iter()
        .find(|h| h.degree == degree)
        .expect("degree in window"))
}

/// JSON object `{degree: {betti, torsion[]}}`.
pub fn homology_json(groups: &[HomologyGroup]) -> serde_json::Value {
    let mut map = serde_json::Map::new();
    for g in groups {
        let torsion: Vec<serde_json::Value> = g
            .torsion
            .iter()
            .map(|t| match t.to_i64() {
                Some(v) => serde_json::Value::from(v),
                None => serde_json::Value::from(t.to_string()),
            })
            .collect();
        map.insert(
            g.degree.to_string(),
            serde_json::json!({ "betti": g.betti, "torsion": torsion }),
        );
    }
    serde_json::Value::Object(map)
}

/// Signature used by the tree-column model for a given total `Σk`.
pub fn tree_column_signatures(n: usize, l: usize, total: usize) -> Vec<ColourSignature> {
    signatures_with_total(n, total, l)
}
