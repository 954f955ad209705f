//! Exhaustive verification suites behind `opforge verify <suite>`. Each suite
//! can inject a fault into the operation it tests and must then fail.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::brace_calculus::{
    amputated_differential, decompose_into_atoms, evaluate_atoms, whisker, whisker_exact,
    whiskered_insert,
};
use crate::error::{OpError, Result};
use crate::grid_paths::{complexity, enumerate_paths, signatures_with_total, ColourSignature, MarkedLatticePath};
use crate::hochschild::{evaluate, reference_tree, gerstenhaber_suite};
use crate::homology_engine::{build_window, homology, HomologyGroup, Model};
use crate::lattice_operad::{
    compose, enumerate_surjections, hbrac_closure_check, normalize, path_to_surjection,
    surjection_to_path, ClosureVerdict, Surjection,
};
use crate::simplicial_ops::{
    coface, codegeneracy, degeneracy, face, simplicial_boundary, total_differential,
    DifferentialContext, FormalSum,
};
use crate::tree_calculus::{
    enumerate_trees, normalize as normalize_tree, path_to_tree, tree_differential, tree_insert,
    tree_to_path, PlanarTree,
};

/// Names accepted by `opforge verify`.
pub const SUITES: &[&str] = &[
    "simplicial-identities",
    "d-squared",
    "tree-path",
    "surjections",
    "brac-nbrac",
    "little-disks",
    "hbrac-closure",
    "whiskering",
    "gerstenhaber",
    "decomposition",
];

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    /// Bound on `k1 + .. + kn`; each suite has its own default.
    pub max_k: Option<usize>,
    pub seed: u64,
    /// Random samples for sampled checks.
    pub samples: usize,
    pub mutate: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            max_k: None,
            seed: 2024,
            samples: 300,
            mutate: false,
        }
    }
}

/// Verdict of one suite with the number of checks of each kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub counts: Vec<(String, usize)>,
    pub notes: Vec<String>,
    pub failure: Option<String>,
}

impl SuiteReport {
    pub fn to_json(&self) -> Value {
        let counts: serde_json::Map<String, Value> =
            self.counts.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        json!({
            "suite": self.suite,
            "passed": self.passed,
            "counts": counts,
            "notes": self.notes,
            "failure": self.failure,
        })
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let counts: Vec<String> = self.counts.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(
            f,
            "{} {} {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.suite,
            counts.join(" ")
        )?;
        for n in &self.notes {
            write!(f, "\n  {n}")?;
        }
        if let Some(fail) = &self.failure {
            write!(f, "\n  first failure: {fail}")?;
        }
        Ok(())
    }
}

#[derive(Default)]
struct Tally {
    counts: Vec<(String, usize)>,
    notes: Vec<String>,
    failure: Option<String>,
}

impl Tally {
    fn bump(&mut self, key: &str, by: usize) {
        match self.counts.iter_mut().find(|(k, _)| k == key) {
            Some((_, v)) => *v += by,
            None => self.counts.push((key.to_string(), by)),
        }
    }

    fn check(&mut self, key: &str, ok: bool, detail: impl FnOnce() -> String) -> bool {
        self.bump(key, 1);
        if !ok && self.failure.is_none() {
            self.failure = Some(detail());
        }
        ok
    }

    fn failed(&self) -> bool {
        self.failure.is_some()
    }

    fn report(self, suite: &str) -> SuiteReport {
        SuiteReport {
            suite: suite.to_string(),
            passed: self.failure.is_none(),
            counts: self.counts,
            notes: self.notes,
            failure: self.failure,
        }
    }
}

/// Runs the named suite.
pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<SuiteReport> {
    let tally = match name {
        "simplicial-identities" => simplicial_identities(opts),
        "d-squared" => d_squared(opts),
        "tree-path" => tree_path(opts),
        "surjections" => surjections(opts),
        "brac-nbrac" => brac_nbrac(opts)?,
        "little-disks" => little_disks(opts)?,
        "hbrac-closure" => hbrac_closure(opts),
        "whiskering" => whiskering(opts)?,
        "gerstenhaber" => gerstenhaber(opts),
        "decomposition" => decomposition(opts)?,
        other => {
            return Err(OpError::parse(
                1,
                format!("unknown suite `{other}`; expected one of {}", SUITES.join(", ")),
            ))
        }
    };
    Ok(tally.report(name))
}

/// Doubles the coefficient of the first term.
fn perturb<B: Ord + Clone>(s: FormalSum<B>) -> FormalSum<B> {
    let first = s.iter().next().map(|(b, c)| (b.clone(), c));
    match first {
        Some((b, c)) => {
            let mut out = s;
            out.add_term(b, c);
            out
        }
        None => s,
    }
}

fn signatures(max_n: usize, max_k: usize, max_l: usize) -> Vec<ColourSignature> {
    let mut out = Vec::new();
    for n in 0..=max_n {
        for total in 0..=max_k {
            for l in 0..=max_l {
                out.extend(signatures_with_total(n, total, l));
            }
        }
    }
    out
}

fn trees(max_n: usize, max_k: usize, l: usize, labeled_legs: bool) -> Vec<PlanarTree> {
    let mut out = Vec::new();
    for n in 0..=max_n {
        for total in 0..=max_k {
            for sig in signatures_with_total(n, total, l) {
                out.extend(enumerate_trees(l, &sig.inputs, labeled_legs));
            }
        }
    }
    out
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Number of paths of a signature: move orders times marking distributions.
fn path_count(sig: &ColourSignature) -> u128 {
    let mut orders = 1u128;
    let mut placed = 0;
    for &k in &sig.inputs {
        placed += k + 1;
        orders *= binomial(placed, k + 1);
    }
    let points = sig.move_count() + 1;
    orders * binomial(sig.output + points - 1, points - 1)
}

fn simplicial_identities(o: &SuiteOptions) -> Tally {
    let max_k = o.max_k.unwrap_or(4);
    let mut t = Tally::default();
    let fc = |p: &MarkedLatticePath, r: usize, i: usize| {
        let i = if o.mutate && i == 0 { 1 } else { i };
        face(p, r, i).expect("face index in range")
    };
    let dg = |p: &MarkedLatticePath, r: usize, i: usize| degeneracy(p, r, i).expect("index in range");
    let cf = |p: &MarkedLatticePath, i: usize| coface(p, i).expect("index in range");
    let cd = |p: &MarkedLatticePath, i: usize| codegeneracy(p, i).expect("index in range");
    for sig in signatures(3, max_k, 3) {
        t.bump("signatures", 1);
        let paths = enumerate_paths(&sig, None);
        t.check("counts", paths.len() as u128 == path_count(&sig), || {
            format!("signature {sig}: {} paths enumerated, {} expected", paths.len(), path_count(&sig))
        });
        for p in &paths {
            t.bump("paths", 1);
            let text = p.to_string();
            t.check("round-trips", text.parse::<MarkedLatticePath>().as_ref() == Ok(p), || {
                format!("`{text}` does not parse back")
            });
            let rebuilt = MarkedLatticePath::from_moves(sig.arity(), p.moves().to_vec(), p.markings().to_vec());
            t.check("round-trips", rebuilt.as_ref() == Ok(p), || format!("`{text}` fails validation"));
            let n = sig.arity();
            let l = sig.output;
            let faces: Vec<Vec<MarkedLatticePath>> = (1..=n)
                .map(|r| {
                    let kr = sig.inputs[r - 1];
                    if kr == 0 {
                        Vec::new()
                    } else {
                        (0..=kr).map(|i| fc(p, r, i)).collect()
                    }
                })
                .collect();
            let degs: Vec<Vec<MarkedLatticePath>> = (1..=n)
                .map(|r| (0..=sig.inputs[r - 1]).map(|j| dg(p, r, j)).collect())
                .collect();
            let cofs: Vec<MarkedLatticePath> = (0..=l + 1).map(|a| cf(p, a)).collect();
            let cods: Vec<MarkedLatticePath> = (0..l).map(|a| cd(p, a)).collect();
            let mut id = |ok: bool, what: &str| t.check("identities", ok, || format!("{what} fails on `{text}`"));
            for r in 1..=n {
                let kr = sig.inputs[r - 1];
                let fr = &faces[r - 1];
                let dr = &degs[r - 1];
                if kr >= 2 {
                    for j in 0..=kr {
                        for i in 0..j {
                            id(fc(&fr[j], r, i) == fc(&fr[i], r, j - 1), "d_i d_j = d_(j-1) d_i");
                        }
                    }
                }
                for r2 in r + 1..=n {
                    if kr >= 1 && sig.inputs[r2 - 1] >= 1 {
                        for (i, fi) in fr.iter().enumerate() {
                            for (j, fj) in faces[r2 - 1].iter().enumerate() {
                                id(fc(fi, r2, j) == fc(fj, r, i), "faces in distinct directions commute");
                            }
                        }
                    }
                }
                for j in 0..=kr {
                    for i in 0..=j {
                        id(dg(&dr[j], r, i) == dg(&dr[i], r, j + 1), "s_i s_j = s_(j+1) s_i");
                    }
                    for i in 0..=kr + 1 {
                        let lhs = fc(&dr[j], r, i);
                        let ok = if i < j {
                            lhs == dg(&fr[i], r, j - 1)
                        } else if i == j || i == j + 1 {
                            lhs == *p
                        } else {
                            lhs == dg(&fr[i - 1], r, j)
                        };
                        id(ok, "d_i s_j");
                    }
                    for (a, ca) in cofs.iter().enumerate() {
                        id(dg(ca, r, j) == cf(&dr[j], a), "degeneracies commute with cofaces");
                    }
                }
                for (i, fi) in fr.iter().enumerate() {
                    for (a, ca) in cofs.iter().enumerate() {
                        id(fc(ca, r, i) == cf(fi, a), "faces commute with cofaces");
                    }
                    for (a, ka) in cods.iter().enumerate() {
                        id(fc(ka, r, i) == cd(fi, a), "faces commute with codegeneracies");
                    }
                }
            }
            for j in 0..=l + 2 {
                for i in 0..j {
                    id(cf(&cofs[i], j) == cf(&cofs[j - 1], i), "d^j d^i = d^i d^(j-1)");
                }
            }
            if l >= 2 {
                for j in 0..l - 1 {
                    for i in 0..=j {
                        id(cd(&cods[i], j) == cd(&cods[j + 1], i), "s^j s^i = s^i s^(j+1)");
                    }
                }
            }
            for (i, ci) in cofs.iter().enumerate() {
                for j in 0..=l {
                    let lhs = cd(ci, j);
                    let ok = if i < j {
                        lhs == cf(&cods[j - 1], i)
                    } else if i == j || i == j + 1 {
                        lhs == *p
                    } else {
                        lhs == cf(&cods[j], i - 1)
                    };
                    id(ok, "s^j d^i");
                }
            }
            if t.failed() {
                return t;
            }
        }
    }
    t
}

fn d_squared(o: &SuiteOptions) -> Tally {
    let max_k = o.max_k.unwrap_or(4);
    let mut t = Tally::default();
    let bd = |p: &MarkedLatticePath| {
        let s = simplicial_boundary(p);
        if o.mutate {
            perturb(s)
        } else {
            s
        }
    };
    let paths: Vec<MarkedLatticePath> = signatures(3, max_k, 3)
        .iter()
        .flat_map(|s| enumerate_paths(s, None))
        .collect();
    let results: Vec<(bool, bool, bool)> = paths
        .par_iter()
        .map(|p| {
            let dd = bd(p).map_linear(bd);
            let single = FormalSum::single(p.clone());
            let lat = total_differential(&single, DifferentialContext::Lattice);
            let tree = total_differential(&single, DifferentialContext::TreeOperad);
            (
                dd.is_zero(),
                total_differential(&lat, DifferentialContext::Lattice).is_zero(),
                total_differential(&tree, DifferentialContext::TreeOperad).is_zero(),
            )
        })
        .collect();
    for (p, (a, b, c)) in paths.iter().zip(results) {
        t.check("simplicial", a, || format!("∂∂ `{p}` is nonzero"));
        t.check("total", b, || format!("(∂ + δ)² `{p}` is nonzero"));
        t.check("total", c, || format!("(∂ - δ)² `{p}` is nonzero"));
        if t.failed() {
            return t;
        }
    }
    let td = |x: &PlanarTree| {
        let s = tree_differential(x);
        if o.mutate {
            perturb(s)
        } else {
            s
        }
    };
    for l in 0..=2 {
        for x in trees(2, max_k.min(3), l, true) {
            let ok = td(&x).map_linear(td).is_zero();
            if !t.check("trees", ok, || format!("d² `{x}` is nonzero")) {
                return t;
            }
        }
    }
    for x in trees(3, max_k, 0, false) {
        let once = amputated_differential(&x).expect("amputated");
        let twice = once.map_linear(|y| amputated_differential(y).expect("amputated"));
        if !t.check("amputated", twice.is_zero(), || format!("∂² `{x}` is nonzero")) {
            return t;
        }
    }
    t
}

fn bump_output(p: &MarkedLatticePath) -> MarkedLatticePath {
    let mut markings = p.markings().to_vec();
    *markings.last_mut().expect("nonempty") += 1;
    let sig = ColourSignature::new(p.signature().inputs.clone(), p.signature().output + 1);
    MarkedLatticePath::from_parts_unchecked(sig, p.moves().to_vec(), markings)
}

fn tree_path(o: &SuiteOptions) -> Tally {
    let max_k = o.max_k.unwrap_or(3);
    let mut t = Tally::default();
    let walk = |x: &PlanarTree| {
        let p = tree_to_path(x);
        if o.mutate {
            bump_output(&p)
        } else {
            p
        }
    };
    for sig in signatures(3, max_k, 3) {
        let ts = enumerate_trees(sig.output, &sig.inputs, false);
        let ps = enumerate_paths(&sig, Some(2));
        t.bump("trees", ts.len());
        t.bump("paths", ps.len());
        t.check("signatures", ts.len() == ps.len(), || {
            format!("signature {sig}: {} trees but {} paths", ts.len(), ps.len())
        });
        for x in &ts {
            let p = walk(x);
            let back = path_to_tree(&p);
            t.check("inverse", back.as_ref() == Ok(x), || format!("tree `{x}` walks to `{p}`, which does not return"));
        }
        for p in &ps {
            let ok = path_to_tree(p).map(|x| walk(&x) == *p).unwrap_or(false);
            t.check("inverse", ok, || format!("path `{p}` does not return"));
        }
        if t.failed() {
            return t;
        }
    }
    let mut pool: Vec<Vec<PlanarTree>> = vec![Vec::new(); 4];
    for (l, bucket) in pool.iter_mut().enumerate() {
        *bucket = trees(2, max_k, l, false);
    }
    let outers: Vec<&PlanarTree> = pool.iter().flatten().filter(|x| x.white_count() > 0).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
    for _ in 0..o.samples {
        let outer = outers[rng.gen_range(0..outers.len())];
        let i = rng.gen_range(1..=outer.white_count());
        let k = outer.arities()[i - 1];
        let inner = &pool[k][rng.gen_range(0..pool[k].len())];
        let grafted = tree_insert(outer, i, inner).map(|x| tree_to_path(&x));
        let composed = compose(&walk(outer), i, &walk(inner));
        let ok = matches!((&grafted, &composed), (Ok(a), Ok(b)) if a == b);
        if !t.check("insertions", ok, || format!("`{outer}` o{i} `{inner}`: tree gives {grafted:?}, paths give {composed:?}")) {
            return t;
        }
    }
    t
}

fn surjections(o: &SuiteOptions) -> Tally {
    let max_m = o.max_k.unwrap_or(7);
    let mut t = Tally::default();
    let to_path = |u: &Surjection| {
        let p = surjection_to_path(u)?;
        if o.mutate && p.moves().len() >= 2 {
            let mut moves = p.moves().to_vec();
            moves.swap(0, 1);
            MarkedLatticePath::unmarked(u.n(), moves)
        } else {
            Ok(p)
        }
    };
    for n in 1..=3 {
        for m in 0..=max_m {
            let all = enumerate_surjections(m, n);
            let mut nondegenerate = 0;
            for u in &all {
                t.bump("surjections", 1);
                let raw = MarkedLatticePath::unmarked(n, u.values().to_vec()).expect("surjections give lattice paths");
                t.check("nondegeneracy", u.is_nondegenerate() == !raw.has_internal_point(), || {
                    format!("`{u}`: nondegeneracy and internal points disagree")
                });
                if !u.is_nondegenerate() {
                    t.check("nondegeneracy", surjection_to_path(u).is_err(), || format!("`{u}` is degenerate but mapped"));
                    continue;
                }
                nondegenerate += 1;
                let ok = match to_path(u) {
                    Ok(p) => {
                        t.check("filtration", complexity(&p) == u.filtration_level(), || {
                            format!("`{u}`: complexity {} but filtration level {}", complexity(&p), u.filtration_level())
                        });
                        p.signature().inputs == u.colours() && path_to_surjection(&p).as_ref() == Ok(u)
                    }
                    Err(_) => false,
                };
                t.check("inverse", ok, || format!("`{u}` does not return through its path"));
            }
            if n == 2 && m >= 2 {
                t.check("binary-counts", nondegenerate == 2, || {
                    format!("{nondegenerate} nondegenerate surjections onto 2 points from m = {m}")
                });
            }
            for sig in signatures_with_total(n, m.saturating_sub(n), 0) {
                if sig.move_count() != m {
                    continue;
                }
                let paths: Vec<MarkedLatticePath> = enumerate_paths(&sig, None)
                    .into_iter()
                    .filter(|p| !p.has_internal_point())
                    .collect();
                let surj = all
                    .iter()
                    .filter(|u| u.is_nondegenerate() && u.colours() == sig.inputs)
                    .count();
                t.check("signatures", paths.len() == surj, || {
                    format!("signature {sig}: {} paths but {surj} surjections", paths.len())
                });
            }
            if t.failed() {
                return t;
            }
        }
    }
    t
}

fn window_groups(model: Model, mutate: bool) -> Result<Vec<HomologyGroup>> {
    let mut w = build_window(model, -4, 0)?;
    if mutate {
        if let Some(m) = w.matrices.values_mut().find(|m| !m.entries.is_empty()) {
            for e in &mut m.entries {
                e.2 *= BigInt::from(2);
            }
        }
    }
    Ok(homology(&w))
}

fn brac_nbrac(o: &SuiteOptions) -> Result<Tally> {
    let mut t = Tally::default();
    let cases: Vec<(usize, usize)> = (1..=3).flat_map(|c| (0..=3).map(move |n| (c, n))).collect();
    let results = cases
        .par_iter()
        .map(|&(c, n)| {
            Ok((
                window_groups(Model::Brac { c, n }, o.mutate)?,
                window_groups(Model::NBrac { c, n }, false)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    for ((c, n), (full, reduced)) in cases.iter().zip(results) {
        for (a, b) in full.iter().zip(&reduced) {
            t.check("degrees", a == b, || format!("c={c} n={n} degree {}: Brac has {a}, nBrac has {b}", a.degree));
        }
        if t.failed() {
            return Ok(t);
        }
    }
    Ok(t)
}

fn little_disks(o: &SuiteOptions) -> Result<Tally> {
    let mut t = Tally::default();
    let expected: [(usize, &[(i64, usize)]); 2] = [(2, &[(0, 1), (-1, 1)]), (3, &[(0, 1), (-1, 3), (-2, 2)])];
    for (n, betti) in expected {
        let groups = window_groups(Model::NBrac { c: 2, n }, o.mutate)?;
        let mut total = 0;
        for g in &groups {
            let want = betti.iter().find(|(d, _)| *d == g.degree).map_or(0, |(_, b)| *b);
            total += g.betti;
            t.check("betti", g.betti == want, || format!("n={n} degree {}: betti {} expected {want}", g.degree, g.betti));
            t.check("torsion-free", g.torsion.is_empty(), || format!("n={n}: torsion in {g}"));
        }
        let fact: usize = (1..=n).product();
        t.check("euler", total == fact, || format!("n={n}: total rank {total} differs from {fact}"));
        t.notes.push(format!(
            "nBrac_2({n}): {}",
            groups.iter().rev().map(|g| format!("{}:{}", g.degree, g.betti)).collect::<Vec<_>>().join(" ")
        ));
        if t.failed() {
            return Ok(t);
        }
    }
    Ok(t)
}

fn closure_with_projection(c: usize, n: usize, max_k: usize) -> ClosureVerdict {
    let mut checked = 0;
    for total in 0..=max_k {
        for sig in signatures_with_total(n, total, 0) {
            for p in enumerate_paths(&sig, Some(c)) {
                if p.has_internal_point() {
                    continue;
                }
                checked += 1;
                let d = normalize(&simplicial_boundary(&p));
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

fn hbrac_closure(o: &SuiteOptions) -> Tally {
    let max_k = o.max_k.unwrap_or(4);
    let mut t = Tally::default();
    for c in 1..=3 {
        let mut found = None;
        for n in 0..=3 {
            let v = if o.mutate {
                closure_with_projection(c, n, max_k)
            } else {
                hbrac_closure_check(c, n, max_k)
            };
            t.bump("paths", v.checked);
            if found.is_none() {
                found = v.counterexample;
            }
        }
        if c <= 2 {
            t.check("verdicts", found.is_none(), || {
                let (p, d) = found.as_ref().expect("present");
                format!("c={c}: `{p}` has boundary {d}")
            });
        } else {
            let ok = match &found {
                Some((p, d)) => {
                    t.notes.push(format!("c=3 counterexample: {p}"));
                    t.notes.push(format!("  ∂ = {d}"));
                    !p.has_internal_point()
                        && *d == simplicial_boundary(p)
                        && d.basis().any(|q| q.has_internal_point())
                }
                None => false,
            };
            t.check("verdicts", ok, || "c=3: no counterexample found".into());
        }
    }
    t
}

fn whiskering(o: &SuiteOptions) -> Result<Tally> {
    let max_k = o.max_k.unwrap_or(3);
    let budget = 3;
    let mut t = Tally::default();
    let mut cache: HashMap<PlanarTree, FormalSum<PlanarTree>> = HashMap::new();
    let mut w = |s: &PlanarTree| -> Result<FormalSum<PlanarTree>> {
        if let Some(x) = cache.get(s) {
            return Ok(x.clone());
        }
        let x = whisker(s, budget)?;
        let x = if o.mutate { perturb(x) } else { x };
        cache.insert(s.clone(), x.clone());
        Ok(x)
    };
    let amputated = trees(3, max_k, 0, false);
    for s in &amputated {
        let mut lhs = FormalSum::zero();
        for (x, c) in amputated_differential(s)?.iter() {
            lhs.add_scaled(&w(x)?, c);
        }
        let mut rhs = FormalSum::zero();
        for (x, c) in w(s)?.iter() {
            rhs.add_scaled(&tree_differential(x), c);
        }
        let rhs = rhs.filter(|x| x.leg_count() <= budget);
        if !t.check("differential", lhs == rhs, || format!("w(∂S) ≠ d(w(S)) for `{s}`")) {
            return Ok(t);
        }
    }
    let mut exact: HashMap<(PlanarTree, usize), Vec<PlanarTree>> = HashMap::new();
    for a in &amputated {
        let wa = w(a)?;
        for b in &amputated {
            if a.white_count() + b.white_count() > 4 {
                continue;
            }
            for i in 1..=a.white_count() {
                let mut lhs = FormalSum::zero();
                for (x, c) in whiskered_insert(a, i, b)?.iter() {
                    lhs.add_scaled(&w(x)?, c);
                }
                let mut rhs = FormalSum::zero();
                for (t1, c1) in wa.iter() {
                    let k = t1.arities()[i - 1];
                    let legs = match exact.get(&(b.clone(), k)) {
                        Some(v) => v,
                        None => {
                            let v = whisker_exact(b, k)?;
                            exact.entry((b.clone(), k)).or_insert(v)
                        }
                    };
                    for t2 in legs {
                        rhs.add_term(tree_insert(t1, i, t2)?, c1);
                    }
                }
                if !t.check("composition", lhs == rhs, || format!("w(S' o{i} S'') ≠ w(S') o{i} w(S'') for `{a}`, `{b}`")) {
                    return Ok(t);
                }
            }
        }
    }
    Ok(t)
}

fn mirror_root(x: &PlanarTree) -> PlanarTree {
    match x {
        PlanarTree::Black(kids) => PlanarTree::Black(kids.iter().rev().cloned().collect()),
        PlanarTree::White(i, kids) => PlanarTree::White(*i, kids.iter().rev().cloned().collect()),
        other => other.clone(),
    }
}

/// Value of the reference tree on generic cochains.
pub const REFERENCE_VALUE: &str = "-1*a3 f1(f2(a5 a6,1,a8),a1,f3(a7)) f4(a4,1,a2)";

fn gerstenhaber(o: &SuiteOptions) -> Tally {
    let mut t = Tally::default();
    let reference = reference_tree();
    let reference = if o.mutate { mirror_root(&reference) } else { reference };
    let value = evaluate(&reference).to_string();
    t.check("reference", value == REFERENCE_VALUE, || format!("reference tree evaluates to {value}"));
    t.notes.push(format!("reference tree: {value}"));
    if t.failed() {
        return t;
    }
    for c in gerstenhaber_suite(3) {
        if !t.check(c.name, c.holds(), || format!("{} {:?} leaves {}", c.name, c.arities, c.residual)) {
            return t;
        }
    }
    t
}

fn decomposition(o: &SuiteOptions) -> Result<Tally> {
    let mut t = Tally::default();
    let max_edges = 4;
    let candidates = trees(max_edges + 1, o.max_k.unwrap_or(max_edges), 0, false);
    let results = candidates
        .par_iter()
        .filter(|s| s.internal_edge_count() <= max_edges)
        .map(|s| {
            let d = decompose_into_atoms(s)?;
            let v = evaluate_atoms(&d.expr)?;
            let v = if o.mutate { perturb(v) } else { v };
            Ok((s.clone(), v == FormalSum::term(d.sign, normalize_tree(s))))
        })
        .collect::<Result<Vec<_>>>()?;
    for (s, ok) in results {
        if !t.check("trees", ok, || format!("decomposition of `{s}` does not evaluate back")) {
            return Ok(t);
        }
    }
    Ok(t)
}
