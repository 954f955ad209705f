//! Marked lattice paths in integral hypercubes.
//!
//! A path of signature `(k1,...,kn; l)` is stored as its move sequence
//! (direction indices `1..=n`, direction `i` occurring `ki + 1` times) together
//! with one marking per visited point. Points are recomputed on demand.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{OpError, Result};

/// Input colours `(k1,...,kn)` and output colour `l`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColourSignature {
    pub inputs: Vec<usize>,
    pub output: usize,
}

impl ColourSignature {
    pub fn new(inputs: Vec<usize>, output: usize) -> Self {
        ColourSignature { inputs, output }
    }

    /// Number of input colours `n`.
    pub fn arity(&self) -> usize {
        self.inputs.len()
    }

    /// `k1 + ... + kn`.
    pub fn total_k(&self) -> usize {
        self.inputs.iter().sum()
    }

    /// Number of moves of any path in this signature.
    pub fn move_count(&self) -> usize {
        self.total_k() + self.arity()
    }

    /// Number of points `N` of any path in this signature.
    pub fn point_count(&self) -> usize {
        self.move_count() + 1
    }
}

impl fmt::Display for ColourSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ks: Vec<String> = self.inputs.iter().map(|k| k.to_string()).collect();
        write!(f, "{};{}", ks.join(","), self.output)
    }
}

impl FromStr for ColourSignature {
    type Err = OpError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (ks, l) = s
            .split_once(';')
            .ok_or_else(|| OpError::parse(1, format!("signature `{s}` lacks `;`")))?;
        let inputs = if ks.trim().is_empty() {
            Vec::new()
        } else {
            ks.split(',')
                .enumerate()
                .map(|(pos, k)| {
                    k.trim()
                        .parse::<usize>()
                        .map_err(|_| OpError::parse(pos + 1, format!("bad input colour `{k}`")))
                })
                .collect::<Result<Vec<_>>>()?
        };
        let output = l
            .trim()
            .parse::<usize>()
            .map_err(|_| OpError::parse(1, format!("bad output colour `{l}`")))?;
        Ok(ColourSignature { inputs, output })
    }
}

/// A lattice path with a non-negative marking at every point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkedLatticePath {
    signature: ColourSignature,
    moves: Vec<usize>,
    markings: Vec<usize>,
}

/// Angles, internal points and marked points of a path, by point index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointClassification {
    pub angle_indices: BTreeSet<usize>,
    pub internal_indices: BTreeSet<usize>,
    pub marked_indices: BTreeSet<usize>,
}

/// Checks every path invariant and builds the path.
pub fn validate_path(
    signature: ColourSignature,
    moves: Vec<usize>,
    markings: Vec<usize>,
) -> Result<MarkedLatticePath> {
    let n = signature.arity();
    if let Some(&d) = moves.iter().find(|&&d| d == 0 || d > n) {
        return Err(OpError::invariant(
            "move direction",
            format!("direction {d} is not in 1..={n}"),
        ));
    }
    for (i, &k) in signature.inputs.iter().enumerate() {
        let count = moves.iter().filter(|&&d| d == i + 1).count();
        if count != k + 1 {
            return Err(OpError::invariant(
                "move multiset",
                format!("direction {} occurs {count} times, expected k{} + 1 = {}", i + 1, i + 1, k + 1),
            ));
        }
    }
    if markings.len() != moves.len() + 1 {
        return Err(OpError::invariant(
            "point count",
            format!("{} markings for {} moves, expected {}", markings.len(), moves.len(), moves.len() + 1),
        ));
    }
    let sum: usize = markings.iter().sum();
    if sum != signature.output {
        return Err(OpError::invariant(
            "marking sum",
            format!("marking sum {sum} differs from l = {}", signature.output),
        ));
    }
    Ok(MarkedLatticePath {
        signature,
        moves,
        markings,
    })
}

impl MarkedLatticePath {
    /// Builds a path from moves and markings, inferring the signature.
    pub fn from_moves(n: usize, moves: Vec<usize>, markings: Vec<usize>) -> Result<Self> {
        let mut inputs = vec![0usize; n];
        for &d in &moves {
            if d == 0 || d > n {
                return Err(OpError::invariant(
                    "move direction",
                    format!("direction {d} is not in 1..={n}"),
                ));
            }
            inputs[d - 1] += 1;
        }
        if let Some(i) = inputs.iter().position(|&c| c == 0) {
            return Err(OpError::invariant(
                "move multiset",
                format!("direction {} never occurs", i + 1),
            ));
        }
        let inputs = inputs.into_iter().map(|c| c - 1).collect();
        let output = markings.iter().sum();
        validate_path(ColourSignature { inputs, output }, moves, markings)
    }

    /// Unmarked path with the given moves.
    pub fn unmarked(n: usize, moves: Vec<usize>) -> Result<Self> {
        let markings = vec![0; moves.len() + 1];
        Self::from_moves(n, moves, markings)
    }

    pub(crate) fn from_parts_unchecked(
        signature: ColourSignature,
        moves: Vec<usize>,
        markings: Vec<usize>,
    ) -> Self {
        MarkedLatticePath {
            signature,
            moves,
            markings,
        }
    }

    pub fn signature(&self) -> &ColourSignature {
        &self.signature
    }

    pub fn moves(&self) -> &[usize] {
        &self.moves
    }

    pub fn markings(&self) -> &[usize] {
        &self.markings
    }

    /// Number of points `N`.
    pub fn point_count(&self) -> usize {
        self.markings.len()
    }

    /// Coordinates of every point, starting at the origin.
    pub fn points(&self) -> Vec<Vec<usize>> {
        let mut cur = vec![0; self.signature.arity()];
        let mut out = vec![cur.clone()];
        for &d in &self.moves {
            cur[d - 1] += 1;
            out.push(cur.clone());
        }
        out
    }

    /// Cohomological degree `l - (k1 + ... + kn)`.
    pub fn degree(&self) -> i64 {
        self.signature.output as i64 - self.signature.total_k() as i64
    }

    /// True when the path has an internal point.
    pub fn has_internal_point(&self) -> bool {
        self.moves.windows(2).any(|w| w[0] == w[1])
    }

    /// True when every marking vanishes.
    pub fn is_unmarked(&self) -> bool {
        self.markings.iter().all(|&m| m == 0)
    }
}

impl fmt::Display for MarkedLatticePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "lat {} | {}", self.signature, self.markings[0])?;
        for (d, m) in self.moves.iter().zip(&self.markings[1..]) {
            write!(f, " {d}:{m}")?;
        }
        Ok(())
    }
}

impl FromStr for MarkedLatticePath {
    type Err = OpError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let rest = s
            .strip_prefix("lat")
            .ok_or_else(|| OpError::parse(1, format!("path `{s}` must start with `lat`")))?;
        let (sig, body) = rest
            .split_once('|')
            .ok_or_else(|| OpError::parse(2, "path lacks `|` separator"))?;
        let signature: ColourSignature = sig.parse()?;
        let mut tokens = body.split_whitespace();
        let m0 = tokens
            .next()
            .ok_or_else(|| OpError::parse(3, "missing origin marking"))?;
        let mut markings = vec![m0
            .parse::<usize>()
            .map_err(|_| OpError::parse(3, format!("bad origin marking `{m0}`")))?];
        let mut moves = Vec::new();
        for (pos, tok) in tokens.enumerate() {
            let token = pos + 4;
            let (d, m) = tok
                .split_once(':')
                .ok_or_else(|| OpError::parse(token, format!("expected `d:m`, found `{tok}`")))?;
            moves.push(
                d.parse::<usize>()
                    .map_err(|_| OpError::parse(token, format!("bad direction `{d}`")))?,
            );
            markings.push(
                m.parse::<usize>()
                    .map_err(|_| OpError::parse(token, format!("bad marking `{m}`")))?,
            );
        }
        validate_path(signature, moves, markings)
    }
}

/// Splits the interior points into angles and internal points.
pub fn classify_points(path: &MarkedLatticePath) -> PointClassification {
    let n_points = path.point_count();
    let mut angle_indices = BTreeSet::new();
    let mut internal_indices = BTreeSet::new();
    for a in 1..n_points.saturating_sub(1) {
        if path.moves[a - 1] != path.moves[a] {
            angle_indices.insert(a);
        } else {
            internal_indices.insert(a);
        }
    }
    let marked_indices = (0..n_points).filter(|&a| path.markings[a] > 0).collect();
    PointClassification {
        angle_indices,
        internal_indices,
        marked_indices,
    }
}

/// Projection onto the face spanned by directions `i < j`.
pub fn projection(path: &MarkedLatticePath, i: usize, j: usize) -> Result<MarkedLatticePath> {
    let n = path.signature.arity();
    if !(1 <= i && i < j && j <= n) {
        return Err(OpError::OutOfRange(format!(
            "projection directions ({i},{j}) need 1 <= i < j <= {n}"
        )));
    }
    let mut moves = Vec::new();
    let mut markings = vec![path.markings[0]];
    for (d, &m) in path.moves.iter().zip(&path.markings[1..]) {
        if *d == i || *d == j {
            moves.push(if *d == i { 1 } else { 2 });
            markings.push(m);
        } else {
            *markings.last_mut().expect("nonempty") += m;
        }
    }
    let signature = ColourSignature::new(
        vec![path.signature.inputs[i - 1], path.signature.inputs[j - 1]],
        path.signature.output,
    );
    Ok(MarkedLatticePath::from_parts_unchecked(signature, moves, markings))
}

/// Number of direction changes in the subsequence of moves in directions `i`, `j`.
pub fn pair_angle_count(moves: &[usize], i: usize, j: usize) -> usize {
    let mut last = None;
    let mut count = 0;
    for &d in moves.iter().filter(|&&d| d == i || d == j) {
        if let Some(prev) = last {
            if prev != d {
                count += 1;
            }
        }
        last = Some(d);
    }
    count
}

/// Maximum angle count over all two-dimensional projections; 0 when `n <= 1`.
pub fn complexity(path: &MarkedLatticePath) -> usize {
    moves_complexity(path.signature.arity(), &path.moves)
}

pub(crate) fn moves_complexity(n: usize, moves: &[usize]) -> usize {
    let mut best = 0;
    for i in 1..=n {
        for j in i + 1..=n {
            best = best.max(pair_angle_count(moves, i, j));
        }
    }
    best
}

/// All move sequences of a signature in lexicographic order.
pub fn move_sequences(inputs: &[usize]) -> Vec<Vec<usize>> {
    fn rec(counts: &mut [usize], cur: &mut Vec<usize>, total: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == total {
            out.push(cur.clone());
            return;
        }
        for d in 0..counts.len() {
            if counts[d] > 0 {
                counts[d] -= 1;
                cur.push(d + 1);
                rec(counts, cur, total, out);
                cur.pop();
                counts[d] += 1;
            }
        }
    }
    let mut counts: Vec<usize> = inputs.iter().map(|k| k + 1).collect();
    let total = counts.iter().sum();
    let mut out = Vec::new();
    rec(&mut counts, &mut Vec::new(), total, &mut out);
    out
}

/// Weak compositions of `l` into `parts` parts, in lexicographic order.
pub fn weak_compositions(l: usize, parts: usize) -> Vec<Vec<usize>> {
    fn rec(l: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            cur.push(l);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for a in 0..=l {
            cur.push(a);
            rec(l - a, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if l == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(l, parts, &mut Vec::new(), &mut out);
    out
}

/// The basis of `Lat_c(signature)`, lexicographic on moves then on markings.
/// `bound = None` means unbounded complexity.
pub fn enumerate_paths(signature: &ColourSignature, bound: Option<usize>) -> Vec<MarkedLatticePath> {
    let n = signature.arity();
    let mut out = Vec::new();
    for moves in move_sequences(&signature.inputs) {
        if let Some(c) = bound {
            if moves_complexity(n, &moves) > c {
                continue;
            }
        }
        for markings in weak_compositions(signature.output, moves.len() + 1) {
            out.push(MarkedLatticePath::from_parts_unchecked(
                signature.clone(),
                moves.clone(),
                markings,
            ));
        }
    }
    out
}

/// All signatures with `n` inputs and `k1 + ... + kn = total`, in lexicographic order.
pub fn signatures_with_total(n: usize, total: usize, output: usize) -> Vec<ColourSignature> {
    weak_compositions(total, n)
        .into_iter()
        .map(|ks| ColourSignature::new(ks, output))
        .collect()
}
