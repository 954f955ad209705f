//! Simplicial and cosimplicial structure maps on marked lattice paths, the
//! induced differentials, and the `FormalSum` value type.
//!
//! Index conventions:
//! * `face(p, r, i)` deletes the `i`-th move in direction `r` (0-based) and
//!   adds the markings of its two endpoints.
//! * `degeneracy(p, r, i)` duplicates the `i`-th move in direction `r`; the new
//!   point is internal and unmarked.
//! * For a path with marking total `l`, let `phi(0)` be the origin,
//!   `phi(l + 1)` the endpoint and, for `1 <= t <= l`, `phi(t)` the first point
//!   at which the running marking total reaches `t`. Then `coface(p, i)` for
//!   `0 <= i <= l + 1` adds 1 at `phi(i)`, and `codegeneracy(p, i)` for
//!   `0 <= i < l` subtracts 1 at `phi(i + 1)`. The targeted point of a
//!   codegeneracy therefore always carries a positive marking.
//! * `∂ = Σ_r (-1)^(k1+...+k(r-1)) Σ_i (-1)^i face(·, r, i)` and
//!   `δ = (-1)^(k1+...+kn) Σ_i (-1)^i coface(·, i)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{OpError, Result};
use crate::grid_paths::{ColourSignature, MarkedLatticePath};

/// Integer linear combination of basis objects with no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormalSum<B: Ord> {
    terms: BTreeMap<B, i64>,
}

impl<B: Ord> Default for FormalSum<B> {
    fn default() -> Self {
        FormalSum {
            terms: BTreeMap::new(),
        }
    }
}

impl<B: Ord + Clone> FormalSum<B> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(basis: B) -> Self {
        Self::term(1, basis)
    }

    pub fn term(coeff: i64, basis: B) -> Self {
        let mut s = Self::zero();
        s.add_term(basis, coeff);
        s
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (B, i64)>) -> Self {
        let mut s = Self::zero();
        for (b, c) in terms {
            s.add_term(b, c);
        }
        s
    }

    /// Adds `coeff * basis`, cancelling exactly.
    pub fn add_term(&mut self, basis: B, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let entry = self.terms.entry(basis);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
    }

    /// Adds `coeff * other`.
    pub fn add_scaled(&mut self, other: &FormalSum<B>, coeff: i64) {
        for (b, c) in &other.terms {
            self.add_term(b.clone(), c * coeff);
        }
    }

    pub fn scaled(&self, coeff: i64) -> Self {
        let mut s = Self::zero();
        s.add_scaled(self, coeff);
        s
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.add_scaled(other, 1);
        s
    }

    pub fn minus(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.add_scaled(other, -1);
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, basis: &B) -> i64 {
        self.terms.get(basis).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&B, i64)> {
        self.terms.iter().map(|(b, c)| (b, *c))
    }

    pub fn basis(&self) -> impl Iterator<Item = &B> {
        self.terms.keys()
    }

    /// Extends a map on basis elements linearly.
    pub fn map_linear<C: Ord + Clone>(&self, f: impl Fn(&B) -> FormalSum<C>) -> FormalSum<C> {
        let mut out = FormalSum::zero();
        for (b, c) in &self.terms {
            out.add_scaled(&f(b), *c);
        }
        out
    }

    /// Keeps the terms whose basis element satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(&B) -> bool) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(b, _)| keep(b))
                .map(|(b, c)| (b.clone(), *c)),
        )
    }
}

impl<B: Ord + fmt::Display> fmt::Display for FormalSum<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (b, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*{b}")?;
        }
        Ok(())
    }
}

impl<B: Ord + Clone + FromStr<Err = OpError>> FromStr for FormalSum<B> {
    type Err = OpError;

    /// Parses `coeff*basis + coeff*basis`; a bare basis has coefficient 1.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut out = FormalSum::zero();
        if s == "0" {
            return Ok(out);
        }
        for (pos, part) in s.split(" + ").enumerate() {
            let part = part.trim();
            let (coeff, basis) = match part.split_once('*') {
                Some((c, b)) if c.trim().parse::<i64>().is_ok() => {
                    (c.trim().parse::<i64>().expect("checked"), b)
                }
                _ => (1, part),
            };
            let basis = basis.parse::<B>().map_err(|e| match e {
                OpError::Parse { detail, .. } => OpError::Parse {
                    line: 1,
                    token: pos + 1,
                    detail,
                },
                other => other,
            })?;
            out.add_term(basis, coeff);
        }
        Ok(out)
    }
}

fn sign(e: usize) -> i64 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Position of the `i`-th move in direction `r`.
fn nth_move(path: &MarkedLatticePath, r: usize, i: usize) -> usize {
    path.moves()
        .iter()
        .enumerate()
        .filter(|(_, &d)| d == r)
        .nth(i)
        .map(|(a, _)| a)
        .expect("index checked by caller")
}

fn check_direction(path: &MarkedLatticePath, r: usize) -> Result<usize> {
    let n = path.signature().arity();
    if r == 0 || r > n {
        return Err(OpError::OutOfRange(format!("direction {r} not in 1..={n}")));
    }
    Ok(path.signature().inputs[r - 1])
}

/// The face `∂ʳᵢ`: deletes the `i`-th move in direction `r` and merges its endpoints.
pub fn face(path: &MarkedLatticePath, r: usize, i: usize) -> Result<MarkedLatticePath> {
    let kr = check_direction(path, r)?;
    if kr == 0 {
        return Err(OpError::OutOfRange(format!("direction {r} has k = 0, no faces")));
    }
    if i > kr {
        return Err(OpError::OutOfRange(format!("face index {i} exceeds k{r} = {kr}")));
    }
    let idx = nth_move(path, r, i);
    let mut moves = path.moves().to_vec();
    moves.remove(idx);
    let mut markings = path.markings().to_vec();
    markings[idx] += markings[idx + 1];
    markings.remove(idx + 1);
    let mut inputs = path.signature().inputs.clone();
    inputs[r - 1] -= 1;
    Ok(MarkedLatticePath::from_parts_unchecked(
        ColourSignature::new(inputs, path.signature().output),
        moves,
        markings,
    ))
}

/// The degeneracy `σʳᵢ`: duplicates the `i`-th move in direction `r`.
pub fn degeneracy(path: &MarkedLatticePath, r: usize, i: usize) -> Result<MarkedLatticePath> {
    let kr = check_direction(path, r)?;
    if i > kr {
        return Err(OpError::OutOfRange(format!("degeneracy index {i} exceeds k{r} = {kr}")));
    }
    let idx = nth_move(path, r, i);
    let mut moves = path.moves().to_vec();
    moves.insert(idx, r);
    let mut markings = path.markings().to_vec();
    markings.insert(idx + 1, 0);
    let mut inputs = path.signature().inputs.clone();
    inputs[r - 1] += 1;
    Ok(MarkedLatticePath::from_parts_unchecked(
        ColourSignature::new(inputs, path.signature().output),
        moves,
        markings,
    ))
}

/// The point `phi(t)` targeted by cosimplicial operators.
pub fn marked_point(markings: &[usize], t: usize) -> usize {
    let l: usize = markings.iter().sum();
    if t == 0 {
        return 0;
    }
    if t == l + 1 {
        return markings.len() - 1;
    }
    let mut acc = 0;
    for (a, &m) in markings.iter().enumerate() {
        acc += m;
        if acc >= t {
            return a;
        }
    }
    unreachable!("t <= l")
}

/// The coface `δⁱ`, `0 <= i <= l + 1`.
pub fn coface(path: &MarkedLatticePath, i: usize) -> Result<MarkedLatticePath> {
    let l = path.signature().output;
    if i > l + 1 {
        return Err(OpError::OutOfRange(format!("coface index {i} exceeds l + 1 = {}", l + 1)));
    }
    let a = marked_point(path.markings(), i);
    let mut markings = path.markings().to_vec();
    markings[a] += 1;
    Ok(MarkedLatticePath::from_parts_unchecked(
        ColourSignature::new(path.signature().inputs.clone(), l + 1),
        path.moves().to_vec(),
        markings,
    ))
}

/// The codegeneracy `sⁱ`, `0 <= i < l`.
pub fn codegeneracy(path: &MarkedLatticePath, i: usize) -> Result<MarkedLatticePath> {
    let l = path.signature().output;
    if i >= l {
        return Err(OpError::OutOfRange(format!(
            "codegeneracy index {i} needs i < l = {l}"
        )));
    }
    let a = marked_point(path.markings(), i + 1);
    let mut markings = path.markings().to_vec();
    if markings[a] == 0 {
        return Err(OpError::invariant(
            "codegeneracy target",
            format!("point {a} is unmarked"),
        ));
    }
    markings[a] -= 1;
    Ok(MarkedLatticePath::from_parts_unchecked(
        ColourSignature::new(path.signature().inputs.clone(), l - 1),
        path.moves().to_vec(),
        markings,
    ))
}

/// `∂` on one basis path.
pub fn simplicial_boundary(path: &MarkedLatticePath) -> FormalSum<MarkedLatticePath> {
    let mut out = FormalSum::zero();
    let ks = &path.signature().inputs;
    let mut before = 0;
    for (r0, &kr) in ks.iter().enumerate() {
        if kr >= 1 {
            for i in 0..=kr {
                let f = face(path, r0 + 1, i).expect("indices in range");
                out.add_term(f, sign(before + i));
            }
        }
        before += kr;
    }
    out
}

/// `δ` on one basis path.
pub fn cosimplicial_coboundary(path: &MarkedLatticePath) -> FormalSum<MarkedLatticePath> {
    let mut out = FormalSum::zero();
    let total_k = path.signature().total_k();
    for i in 0..=path.signature().output + 1 {
        out.add_term(coface(path, i).expect("index in range"), sign(total_k + i));
    }
    out
}

/// The simplicial differential `∂` extended linearly.
pub fn simplicial_differential(elem: &FormalSum<MarkedLatticePath>) -> FormalSum<MarkedLatticePath> {
    elem.map_linear(simplicial_boundary)
}

/// The cosimplicial differential `δ` extended linearly.
pub fn cosimplicial_differential(
    elem: &FormalSum<MarkedLatticePath>,
) -> FormalSum<MarkedLatticePath> {
    elem.map_linear(cosimplicial_coboundary)
}

/// Which total differential to form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DifferentialContext {
    /// `d = δ + ∂`.
    Lattice,
    /// `d = ∂ - δ`.
    TreeOperad,
}

/// The total differential in the requested context.
pub fn total_differential(
    elem: &FormalSum<MarkedLatticePath>,
    context: DifferentialContext,
) -> FormalSum<MarkedLatticePath> {
    let mut out = simplicial_differential(elem);
    let delta = cosimplicial_differential(elem);
    match context {
        DifferentialContext::Lattice => out.add_scaled(&delta, 1),
        DifferentialContext::TreeOperad => out.add_scaled(&delta, -1),
    }
    out
}
