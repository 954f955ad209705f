//! Brace operad on amputated trees (trees without legs): angles, whiskered
//! insertion, whiskering into the tree operad, the amputated differential
//! and decomposition into atoms.

use std::fmt;

use crate::error::{OpError, Result};
use crate::simplicial_ops::FormalSum;
use crate::tree_calculus::{
    normalize, signature_sign, tree_boundary, tree_differential, tree_insert, PlanarTree,
};

/// Amputated trees are planar trees with no legs.
pub type AmputatedTree = PlanarTree;

fn check_amputated(s: &PlanarTree) -> Result<()> {
    if s.leg_count() > 0 {
        return Err(OpError::invariant(
            "amputated tree",
            format!("`{s}` has {} legs", s.leg_count()),
        ));
    }
    Ok(())
}

/// Angles `(white label, slot)` in counterclockwise order from the root.
pub fn angles(s: &AmputatedTree) -> Vec<(usize, usize)> {
    fn rec(t: &PlanarTree, out: &mut Vec<(usize, usize)>) {
        match t {
            PlanarTree::White(i, kids) => {
                out.push((*i, 0));
                for (j, c) in kids.iter().enumerate() {
                    rec(c, out);
                    out.push((*i, j + 1));
                }
            }
            PlanarTree::Black(kids) => kids.iter().for_each(|c| rec(c, out)),
            _ => {}
        }
    }
    let mut out = Vec::new();
    rec(s, &mut out);
    out
}

/// Removes every leg hanging from a white vertex; `None` when a leg hangs
/// from a black vertex or forms the whole tree.
pub fn amputate(t: &PlanarTree) -> Option<AmputatedTree> {
    fn rec(t: &PlanarTree) -> Option<PlanarTree> {
        match t {
            PlanarTree::Leg(_) => None,
            PlanarTree::Special => Some(PlanarTree::Special),
            PlanarTree::White(i, kids) => {
                let mut nk = Vec::new();
                for c in kids {
                    if !matches!(c, PlanarTree::Leg(_)) {
                        nk.push(rec(c)?);
                    }
                }
                Some(PlanarTree::White(*i, nk))
            }
            PlanarTree::Black(kids) => kids
                .iter()
                .map(rec)
                .collect::<Option<Vec<_>>>()
                .map(PlanarTree::Black),
        }
    }
    rec(t)
}

fn whisker_rec(t: &PlanarTree, budget: usize) -> Vec<(PlanarTree, usize)> {
    match t {
        PlanarTree::Black(kids) => {
            let mut acc: Vec<(Vec<PlanarTree>, usize)> = vec![(Vec::new(), 0)];
            for c in kids {
                let mut next = Vec::new();
                for (prefix, used) in &acc {
                    for (x, u) in whisker_rec(c, budget - used) {
                        let mut v = prefix.clone();
                        v.push(x);
                        next.push((v, used + u));
                    }
                }
                acc = next;
            }
            acc.into_iter().map(|(v, u)| (PlanarTree::Black(v), u)).collect()
        }
        PlanarTree::White(i, kids) => {
            let mut acc: Vec<(Vec<PlanarTree>, usize)> = vec![(Vec::new(), 0)];
            for j in 0..=kids.len() {
                let mut next = Vec::new();
                for (prefix, used) in &acc {
                    for m in 0..=budget - used {
                        let mut v = prefix.clone();
                        v.extend(std::iter::repeat(PlanarTree::Leg(0)).take(m));
                        next.push((v, used + m));
                    }
                }
                acc = next;
                if j < kids.len() {
                    let mut next = Vec::new();
                    for (prefix, used) in &acc {
                        for (x, u) in whisker_rec(&kids[j], budget - used) {
                            let mut v = prefix.clone();
                            v.push(x);
                            next.push((v, used + u));
                        }
                    }
                    acc = next;
                }
            }
            acc.into_iter().map(|(v, u)| (PlanarTree::White(*i, v), u)).collect()
        }
        other => vec![(other.clone(), 0)],
    }
}

/// The whiskering `w(S)` truncated to at most `leg_budget` legs. Legs are
/// placed in angles of white vertices and labelled in planar order; every
/// coefficient is `+1`.
pub fn whisker(s: &AmputatedTree, leg_budget: usize) -> Result<FormalSum<PlanarTree>> {
    check_amputated(s)?;
    Ok(FormalSum::from_terms(
        whisker_rec(s, leg_budget)
            .into_iter()
            .map(|(t, _)| (t.with_planar_legs(), 1)),
    ))
}

/// The terms of `w(S)` with exactly `legs` legs.
pub fn whisker_exact(s: &AmputatedTree, legs: usize) -> Result<Vec<PlanarTree>> {
    check_amputated(s)?;
    let mut out: Vec<PlanarTree> = whisker_rec(s, legs)
        .into_iter()
        .filter(|(_, u)| *u == legs)
        .map(|(t, _)| t.with_planar_legs())
        .collect();
    out.sort();
    Ok(out)
}

/// Whiskering of a formal sum, truncated to `leg_budget` legs.
pub fn whisker_sum(
    elem: &FormalSum<AmputatedTree>,
    leg_budget: usize,
) -> Result<FormalSum<PlanarTree>> {
    let mut out = FormalSum::zero();
    for (s, c) in elem.iter() {
        out.add_scaled(&whisker(s, leg_budget)?, c);
    }
    Ok(out)
}

/// Whiskered insertion `S' ∘ᵢ S''`: one term for each monotone assignment of
/// the inputs of the white vertex `i` of `S'` to the angles of `S''`, each
/// with coefficient `+1`. An arity-0 vertex is replaced by grafting.
pub fn whiskered_insert(
    outer: &AmputatedTree,
    i: usize,
    inner: &AmputatedTree,
) -> Result<FormalSum<AmputatedTree>> {
    check_amputated(outer)?;
    check_amputated(inner)?;
    let ar = outer.arities();
    if i == 0 || i > ar.len() {
        return Err(OpError::OutOfRange(format!("slot {i} not in 1..={}", ar.len())));
    }
    let mut out = FormalSum::zero();
    for t in whisker_exact(inner, ar[i - 1])? {
        out.add_term(tree_insert(outer, i, &t)?, 1);
    }
    Ok(out)
}

/// Bilinear extension of [`whiskered_insert`].
pub fn whiskered_insert_sum(
    outer: &FormalSum<AmputatedTree>,
    i: usize,
    inner: &FormalSum<AmputatedTree>,
) -> Result<FormalSum<AmputatedTree>> {
    let mut out = FormalSum::zero();
    for (a, ca) in outer.iter() {
        for (b, cb) in inner.iter() {
            out.add_scaled(&whiskered_insert(a, i, b)?, ca * cb);
        }
    }
    Ok(out)
}

/// The amputated differential `∂ = ∂1 + ... + ∂n`.
pub fn amputated_differential(s: &AmputatedTree) -> Result<FormalSum<AmputatedTree>> {
    check_amputated(s)?;
    Ok(tree_boundary(s))
}

/// Checks `w(∂S) = d(w(S))` on all terms with at most `budget` legs.
pub fn check_whisker_differential(s: &AmputatedTree, budget: usize) -> Result<bool> {
    let lhs = whisker_sum(&amputated_differential(s)?, budget)?;
    let mut rhs = FormalSum::zero();
    for (t, c) in whisker(s, budget)?.iter() {
        rhs.add_scaled(&tree_differential(t), c);
    }
    let rhs = rhs.filter(|t| t.leg_count() <= budget);
    Ok(lhs == rhs)
}

/// Checks `w(S' ∘ᵢ S'') = w(S') ∘ᵢ w(S'')` on all terms with at most `budget` legs.
pub fn check_whisker_composition(
    outer: &AmputatedTree,
    i: usize,
    inner: &AmputatedTree,
    budget: usize,
) -> Result<bool> {
    let lhs = whisker_sum(&whiskered_insert(outer, i, inner)?, budget)?;
    let mut rhs = FormalSum::zero();
    for (t1, c1) in whisker(outer, budget)?.iter() {
        let arity = t1.arities()[i - 1];
        for t2 in whisker_exact(inner, arity)? {
            rhs.add_term(tree_insert(t1, i, &t2)?, c1);
        }
    }
    Ok(lhs == rhs)
}

/// Expressions over the generating atoms of the brace operad.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AtomExpr {
    /// `W1()`, the identity operation.
    Identity,
    /// `*`, the unit of the algebra.
    Unit,
    /// `B(W1(),W2())`.
    Cup,
    /// `W1(W2(),...,W{d+1}())`, the brace with `d` insertions.
    Brace(usize),
    /// Whiskered insertion into a slot.
    Insert(Box<AtomExpr>, usize, Box<AtomExpr>),
    /// Relabelling: planar label `p` becomes `perm[p - 1]`.
    Relabel(Vec<usize>, Box<AtomExpr>),
}

impl fmt::Display for AtomExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AtomExpr::Identity => write!(f, "id"),
            AtomExpr::Unit => write!(f, "unit"),
            AtomExpr::Cup => write!(f, "cup"),
            AtomExpr::Brace(d) => write!(f, "br{d}"),
            AtomExpr::Insert(a, i, b) => write!(f, "({a} o{i} {b})"),
            AtomExpr::Relabel(perm, e) => {
                let p: Vec<String> = perm.iter().map(|x| x.to_string()).collect();
                write!(f, "relabel[{}]({e})", p.join(","))
            }
        }
    }
}

/// An atom expression together with the sign relating its value to the tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub expr: AtomExpr,
    pub sign: i64,
}

fn atom_tree(e: &AtomExpr) -> Option<PlanarTree> {
    Some(match e {
        AtomExpr::Identity => PlanarTree::White(1, vec![]),
        AtomExpr::Unit => PlanarTree::Special,
        AtomExpr::Cup => PlanarTree::cup(),
        AtomExpr::Brace(d) => PlanarTree::White(
            1,
            (2..=d + 1).map(|j| PlanarTree::White(j, vec![])).collect(),
        ),
        _ => return None,
    })
}

/// Evaluates an atom expression by whiskered insertion. Relabelling multiplies
/// by the ratio of signature signs.
pub fn evaluate_atoms(e: &AtomExpr) -> Result<FormalSum<AmputatedTree>> {
    if let Some(t) = atom_tree(e) {
        return Ok(FormalSum::single(t));
    }
    match e {
        AtomExpr::Insert(a, i, b) => whiskered_insert_sum(&evaluate_atoms(a)?, *i, &evaluate_atoms(b)?),
        AtomExpr::Relabel(perm, inner) => {
            let v = evaluate_atoms(inner)?;
            Ok(v.map_linear(|t| {
                let r = t.relabel_whites(&|p| perm[p - 1]);
                let c = signature_sign(t) * signature_sign(&r);
                FormalSum::term(c, r)
            }))
        }
        _ => unreachable!("atoms handled above"),
    }
}

fn build(t: &PlanarTree) -> Result<AtomExpr> {
    let graft = |mut e: AtomExpr, kids: &[PlanarTree], offset: usize| -> Result<AtomExpr> {
        for (j, c) in kids.iter().enumerate().rev() {
            let slot = j + offset;
            e = match c {
                PlanarTree::White(_, gk) if gk.is_empty() => e,
                PlanarTree::Special => AtomExpr::Insert(Box::new(e), slot, Box::new(AtomExpr::Unit)),
                other => AtomExpr::Insert(Box::new(e), slot, Box::new(build(other)?)),
            };
        }
        Ok(e)
    };
    match t {
        PlanarTree::Special => Ok(AtomExpr::Unit),
        PlanarTree::White(_, kids) if kids.is_empty() => Ok(AtomExpr::Identity),
        PlanarTree::White(_, kids) => graft(AtomExpr::Brace(kids.len()), kids, 2),
        PlanarTree::Black(kids) => {
            let mut e = AtomExpr::Cup;
            for _ in 3..=kids.len() {
                e = AtomExpr::Insert(Box::new(AtomExpr::Cup), 1, Box::new(e));
            }
            graft(e, kids, 1)
        }
        PlanarTree::Leg(_) => Err(OpError::invariant("amputated tree", "legs are not allowed")),
    }
}

/// Builds `S` from atoms: a white root with `d` inputs is `br_d` with the
/// decompositions of its subtrees grafted into the leaves, a stub is the
/// unit grafted into a leaf, and a black root with `r` inputs is the
/// left-nested iterated cup. Labels are then moved from planar order to the
/// labels of `S` by one relabelling whose sign is the signature sign of `S`.
pub fn decompose_into_atoms(s: &AmputatedTree) -> Result<Decomposition> {
    check_amputated(s)?;
    let planar = s.with_planar_whites();
    let expr = build(&planar)?;
    if planar == *s {
        return Ok(Decomposition { expr, sign: 1 });
    }
    let perm = s.white_preorder();
    Ok(Decomposition {
        expr: AtomExpr::Relabel(perm, Box::new(expr)),
        sign: signature_sign(s),
    })
}

/// Checks that the decomposition evaluates to `sign * S`.
pub fn check_decomposition(s: &AmputatedTree) -> Result<bool> {
    let d = decompose_into_atoms(s)?;
    let v = evaluate_atoms(&d.expr)?;
    Ok(v == FormalSum::term(d.sign, normalize(s)))
}
