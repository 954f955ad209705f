//! Coloured operad structure on marked lattice paths, the `Brac_c` family
//! with whiskered composition, the normalization `π`, the closure test for
//! internal-point-free paths, and the surjection correspondence.

use std::fmt;
use std::str::FromStr;

use crate::error::{OpError, Result};
use crate::grid_paths::{
    complexity, enumerate_paths, moves_complexity, signatures_with_total, weak_compositions,
    ColourSignature, MarkedLatticePath,
};
use crate::simplicial_ops::{marked_point, simplicial_boundary, FormalSum};

/// Operadic composition `outer ∘ᵢ inner`. Each move of `outer` in direction
/// `i` from level `a` to `a + 1` becomes the segment of `inner` between its
/// points `ψ(a)` and `ψ(a + 1)`, where `ψ(a)` is the first point at which the
/// running marking total of `inner` reaches `a` (`ψ(0)` is the origin and
/// `ψ(ki + 1)` the endpoint). Markings of `outer` are carried to image points.
pub fn compose(
    outer: &MarkedLatticePath,
    i: usize,
    inner: &MarkedLatticePath,
) -> Result<MarkedLatticePath> {
    let n = outer.signature().arity();
    if i == 0 || i > n {
        return Err(OpError::OutOfRange(format!("slot {i} not in 1..={n}")));
    }
    let ki = outer.signature().inputs[i - 1];
    if inner.signature().output != ki {
        return Err(OpError::Mismatch(format!(
            "inner output colour {} differs from input colour k{i} = {ki}",
            inner.signature().output
        )));
    }
    let p = inner.signature().arity();
    let psi: Vec<usize> = (0..=ki + 1).map(|a| marked_point(inner.markings(), a)).collect();
    let rename = |d: usize| if d < i { d } else { d + p - 1 };
    let mut moves = Vec::new();
    let mut markings = vec![outer.markings()[0]];
    let mut level = 0;
    for (&d, &m) in outer.moves().iter().zip(&outer.markings()[1..]) {
        if d == i {
            let seg = &inner.moves()[psi[level]..psi[level + 1]];
            level += 1;
            if seg.is_empty() {
                *markings.last_mut().expect("nonempty") += m;
                continue;
            }
            for (idx, &e) in seg.iter().enumerate() {
                moves.push(i + e - 1);
                markings.push(if idx + 1 == seg.len() { m } else { 0 });
            }
        } else {
            moves.push(rename(d));
            markings.push(m);
        }
    }
    let mut inputs = outer.signature().inputs[..i - 1].to_vec();
    inputs.extend_from_slice(&inner.signature().inputs);
    inputs.extend_from_slice(&outer.signature().inputs[i..]);
    let signature = ColourSignature::new(inputs, outer.signature().output);
    Ok(MarkedLatticePath::from_parts_unchecked(signature, moves, markings))
}

/// The colour-`k` unit: straight path in `Lat(k;k)` with every interior point marked 1.
pub fn unit_path(k: usize) -> MarkedLatticePath {
    let mut markings = vec![1; k + 2];
    markings[0] = 0;
    markings[k + 1] = 0;
    MarkedLatticePath::from_parts_unchecked(
        ColourSignature::new(vec![k], k),
        vec![1; k + 1],
        markings,
    )
}

/// All paths obtained from the unmarked path `p` by inserting `s` new
/// internal points marked 1. Inserting `m` points after the move at position
/// `t` repeats that move `m` more times; the new points sit between the
/// repeated moves. Terms are unsigned and listed lexicographically in the
/// insertion multiplicities.
pub fn whisker_terms(p: &MarkedLatticePath, s: usize) -> Result<Vec<MarkedLatticePath>> {
    if !p.is_unmarked() {
        return Err(OpError::invariant(
            "unmarked path",
            format!("whiskering needs zero markings, got `{p}`"),
        ));
    }
    let n = p.signature().arity();
    let mut out = Vec::new();
    for mult in weak_compositions(s, p.moves().len()) {
        let mut moves = Vec::new();
        let mut markings = vec![0];
        let mut inputs = p.signature().inputs.clone();
        for (&d, &m) in p.moves().iter().zip(&mult) {
            for _ in 0..m {
                moves.push(d);
                markings.push(1);
            }
            moves.push(d);
            markings.push(0);
            inputs[d - 1] += m;
        }
        out.push(MarkedLatticePath::from_parts_unchecked(
            ColourSignature::new(inputs, s),
            moves,
            markings,
        ));
    }
    debug_assert!(out.iter().all(|q| q.signature().arity() == n));
    Ok(out)
}

/// Result of a `Brac` composition; `signed` is false when a factor has
/// complexity above 2, where no sign rule is implemented and every
/// coefficient is the plain multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BracComposite {
    pub sum: FormalSum<MarkedLatticePath>,
    pub signed: bool,
}

/// `p' ∘ᵢ p'' := p' ∘ᵢ w_a(p'')` with `a = k'ᵢ`. For complexity at most 2 the
/// operadic convention assigns `+1` to every term.
pub fn brac_compose(
    outer: &MarkedLatticePath,
    i: usize,
    inner: &MarkedLatticePath,
) -> Result<BracComposite> {
    if !outer.is_unmarked() || !inner.is_unmarked() {
        return Err(OpError::invariant(
            "unmarked path",
            "Brac composition needs zero markings",
        ));
    }
    let n = outer.signature().arity();
    if i == 0 || i > n {
        return Err(OpError::OutOfRange(format!("slot {i} not in 1..={n}")));
    }
    let a = outer.signature().inputs[i - 1];
    let mut sum = FormalSum::zero();
    for q in whisker_terms(inner, a)? {
        sum.add_term(compose(outer, i, &q)?, 1);
    }
    let signed = complexity(outer) <= 2 && complexity(inner) <= 2;
    Ok(BracComposite { sum, signed })
}

/// The projection `π`: drops every path with an internal point.
pub fn normalize(elem: &FormalSum<MarkedLatticePath>) -> FormalSum<MarkedLatticePath> {
    elem.filter(|p| !p.has_internal_point())
}

/// Outcome of the closure test for internal-point-free paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureVerdict {
    pub closed: bool,
    pub checked: usize,
    /// A path whose boundary has a term with an internal point, with that boundary.
    pub counterexample: Option<(MarkedLatticePath, FormalSum<MarkedLatticePath>)>,
}

/// Tests whether `∂` maps internal-point-free unmarked paths of complexity at
/// most `c`, with `n` inputs and `k1 + ... + kn <= max_total_k`, to
/// combinations of internal-point-free paths.
pub fn hbrac_closure_check(c: usize, n: usize, max_total_k: usize) -> ClosureVerdict {
    let mut checked = 0;
    for total in 0..=max_total_k {
        for sig in signatures_with_total(n, total, 0) {
            for p in enumerate_paths(&sig, Some(c)) {
                if p.has_internal_point() {
                    continue;
                }
                checked += 1;
                let d = simplicial_boundary(&p);
                if d.basis().any(|q| q.has_internal_point()) {
                    return ClosureVerdict {
                        closed: false,
                        checked,
                        counterexample: Some((p, d)),
                    };
                }
            }
        }
    }
    ClosureVerdict {
        closed: true,
        checked,
        counterexample: None,
    }
}

/// A surjection `u : {1..m} -> {1..n}` given by its values.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Surjection {
    n: usize,
    values: Vec<usize>,
}

impl Surjection {
    pub fn new(n: usize, values: Vec<usize>) -> Result<Self> {
        if let Some(&v) = values.iter().find(|&&v| v == 0 || v > n) {
            return Err(OpError::invariant(
                "surjection values",
                format!("value {v} not in 1..={n}"),
            ));
        }
        if let Some(missing) = (1..=n).find(|i| !values.contains(i)) {
            return Err(OpError::invariant(
                "surjectivity",
                format!("value {missing} is never taken"),
            ));
        }
        Ok(Surjection { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.values.windows(2).all(|w| w[0] != w[1])
    }

    /// Fibre sizes minus one, `ki = #u⁻¹(i) - 1`.
    pub fn colours(&self) -> Vec<usize> {
        (1..=self.n)
            .map(|i| self.values.iter().filter(|&&v| v == i).count() - 1)
            .collect()
    }

    /// Filtration level: the maximal number of variations of `u` restricted to a pair of values.
    pub fn filtration_level(&self) -> usize {
        moves_complexity(self.n, &self.values)
    }
}

impl fmt::Display for Surjection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "surj n={} : {}", self.n, vs.join(","))
    }
}

impl FromStr for Surjection {
    type Err = OpError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let rest = s
            .strip_prefix("surj")
            .ok_or_else(|| OpError::parse(1, format!("surjection `{s}` must start with `surj`")))?;
        let (head, body) = rest
            .split_once(':')
            .ok_or_else(|| OpError::parse(2, "surjection lacks `:`"))?;
        let n = head
            .trim()
            .strip_prefix("n=")
            .and_then(|v| v.trim().parse::<usize>().ok())
            .ok_or_else(|| OpError::parse(2, format!("expected `n=<n>`, found `{}`", head.trim())))?;
        let values = if body.trim().is_empty() {
            Vec::new()
        } else {
            body.split(',')
                .enumerate()
                .map(|(pos, v)| {
                    v.trim()
                        .parse::<usize>()
                        .map_err(|_| OpError::parse(pos + 3, format!("bad value `{v}`")))
                })
                .collect::<Result<Vec<_>>>()?
        };
        Surjection::new(n, values)
    }
}

/// The path advancing by `d_{u(1)}`, then `d_{u(2)}`, and so on, unmarked.
pub fn surjection_to_path(u: &Surjection) -> Result<MarkedLatticePath> {
    if !u.is_nondegenerate() {
        return Err(OpError::invariant(
            "nondegenerate surjection",
            format!("`{u}` repeats a value in adjacent positions"),
        ));
    }
    MarkedLatticePath::unmarked(u.n, u.values.clone())
}

/// Inverse of [`surjection_to_path`] on unmarked internal-point-free paths.
pub fn path_to_surjection(p: &MarkedLatticePath) -> Result<Surjection> {
    if !p.is_unmarked() {
        return Err(OpError::invariant("unmarked path", format!("`{p}` has a marking")));
    }
    if p.has_internal_point() {
        return Err(OpError::invariant(
            "internal-point-free path",
            format!("`{p}` has an internal point"),
        ));
    }
    Surjection::new(p.signature().arity(), p.moves().to_vec())
}

/// All surjections `{1..m} -> {1..n}` in lexicographic order.
pub fn enumerate_surjections(m: usize, n: usize) -> Vec<Surjection> {
    let mut out = Vec::new();
    let mut cur = vec![1; m];
    if n == 0 {
        if m == 0 {
            out.push(Surjection { n, values: vec![] });
        }
        return out;
    }
    loop {
        if (1..=n).all(|i| cur.contains(&i)) {
            out.push(Surjection {
                n,
                values: cur.clone(),
            });
        }
        let mut pos = m;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if cur[pos] < n {
                cur[pos] += 1;
                for v in cur.iter_mut().skip(pos + 1) {
                    *v = 1;
                }
                break;
            }
        }
    }
}
