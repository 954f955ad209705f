//! Planar trees for the operads of natural operations on Hochschild cochains.
//!
//! A tree has white vertices `W<i>` (labelled `1..=n`, arity `ki`), black
//! vertices `B` (iterated multiplication, arity at least 2), special vertices
//! `S` (the unit) and legs `L<j>` (inputs, labelled `1..=l`). The exceptional
//! trees are the bare edge `|` (root is a leg) and the bare special vertex `*`.
//!
//! Two sign conventions are used.
//! * The letter sign `s_L(T)` is the Koszul sign of the permutation taking
//!   the canonical word `f1 .. fn a1 .. al` to the preorder word of `T`, with
//!   `fi` of degree `ki - 1` and every `a` of degree `-1`. Symbolic
//!   evaluation uses it.
//! * The operadic sign `s_H(T)` also records black vertices (degree
//!   `arity - 1`) and special vertices (degree `-1`) in the preorder word; the
//!   canonical word lists these constants first in preorder, then the `f`s by
//!   label, then the `a`s by label. The tree differential and the whiskering
//!   use it, and whiskering then carries `+1` coefficients.

use std::fmt;
use std::str::FromStr;

use crate::error::{OpError, Result};
use crate::grid_paths::{moves_complexity, ColourSignature, MarkedLatticePath};
use crate::simplicial_ops::FormalSum;

/// A planar rooted tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlanarTree {
    White(usize, Vec<PlanarTree>),
    Black(Vec<PlanarTree>),
    Special,
    Leg(usize),
}

use PlanarTree::{Black, Leg, Special, White};

pub(crate) fn sign(e: usize) -> i64 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Koszul sign of the permutation sorting `(key, odd)` items into the given order.
pub fn koszul_sign<K: Ord>(items: &[(K, bool)]) -> i64 {
    let mut parity = 0usize;
    for a in 0..items.len() {
        if !items[a].1 {
            continue;
        }
        for b in a + 1..items.len() {
            if items[b].1 && items[a].0 > items[b].0 {
                parity += 1;
            }
        }
    }
    sign(parity)
}

/// Degree bookkeeping of a tree signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDegree {
    pub l: usize,
    pub ks: Vec<usize>,
}

impl TreeDegree {
    /// `l - (k1 + ... + kn) + n - 1`.
    pub fn degree(&self) -> i64 {
        self.l as i64 - self.ks.iter().sum::<usize>() as i64 + self.ks.len() as i64 - 1
    }
}

/// Suboperad flags of a tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Membership {
    pub in_b_hat: bool,
    pub in_t: bool,
    pub in_t_hat: bool,
}

impl PlanarTree {
    pub fn white(label: usize, kids: Vec<PlanarTree>) -> Self {
        White(label, kids)
    }

    pub fn black(kids: Vec<PlanarTree>) -> Self {
        Black(kids)
    }

    /// The cup tree `B(W1(),W2())`.
    pub fn cup() -> Self {
        Black(vec![White(1, vec![]), White(2, vec![])])
    }

    /// The exceptional identity tree `|`.
    pub fn identity() -> Self {
        Leg(1)
    }

    /// The exceptional unit tree `*`.
    pub fn unit() -> Self {
        Special
    }

    /// Arity of every white vertex, indexed by label minus one.
    pub fn arities(&self) -> Vec<usize> {
        let mut out = vec![0; self.white_count()];
        self.visit(&mut |t| {
            if let White(i, kids) = t {
                out[i - 1] = kids.len();
            }
        });
        out
    }

    fn visit(&self, f: &mut impl FnMut(&PlanarTree)) {
        f(self);
        match self {
            White(_, kids) | Black(kids) => kids.iter().for_each(|c| c.visit(f)),
            _ => {}
        }
    }

    pub fn white_count(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |t| {
            if matches!(t, White(..)) {
                n += 1
            }
        });
        n
    }

    pub fn leg_count(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |t| {
            if matches!(t, Leg(_)) {
                n += 1
            }
        });
        n
    }

    /// Number of edges between vertices (legs excluded).
    pub fn internal_edge_count(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |t| {
            if !matches!(t, Leg(_)) {
                n += 1
            }
        });
        if matches!(self, Leg(_)) {
            0
        } else {
            n - 1
        }
    }

    pub fn tree_degree(&self) -> TreeDegree {
        TreeDegree {
            l: self.leg_count(),
            ks: self.arities(),
        }
    }

    pub fn degree(&self) -> i64 {
        self.tree_degree().degree()
    }

    pub fn has_stub(&self) -> bool {
        let mut found = false;
        self.visit(&mut |t| {
            if let White(_, kids) = t {
                if kids.iter().any(|c| matches!(c, Special)) {
                    found = true;
                }
            }
        });
        found
    }

    /// White labels in planar (preorder) order.
    pub fn white_preorder(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.visit(&mut |t| {
            if let White(i, _) = t {
                out.push(*i)
            }
        });
        out
    }

    /// Leg labels in planar order.
    pub fn leg_preorder(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.visit(&mut |t| {
            if let Leg(j) = t {
                out.push(*j)
            }
        });
        out
    }

    /// Applies `f` to every leg label.
    pub fn relabel_legs(&self, f: &impl Fn(usize) -> usize) -> PlanarTree {
        match self {
            Leg(j) => Leg(f(*j)),
            White(i, kids) => White(*i, kids.iter().map(|c| c.relabel_legs(f)).collect()),
            Black(kids) => Black(kids.iter().map(|c| c.relabel_legs(f)).collect()),
            Special => Special,
        }
    }

    /// Applies `f` to every white label.
    pub fn relabel_whites(&self, f: &impl Fn(usize) -> usize) -> PlanarTree {
        match self {
            White(i, kids) => White(f(*i), kids.iter().map(|c| c.relabel_whites(f)).collect()),
            Black(kids) => Black(kids.iter().map(|c| c.relabel_whites(f)).collect()),
            other => other.clone(),
        }
    }

    /// Relabels legs by their planar position.
    pub fn with_planar_legs(&self) -> PlanarTree {
        let mut next = 0;
        self.assign_legs(&mut || {
            next += 1;
            next
        })
    }

    fn assign_legs(&self, next: &mut impl FnMut() -> usize) -> PlanarTree {
        match self {
            Leg(_) => Leg(next()),
            White(i, kids) => White(*i, kids.iter().map(|c| c.assign_legs(next)).collect()),
            Black(kids) => Black(kids.iter().map(|c| c.assign_legs(next)).collect()),
            Special => Special,
        }
    }

    /// Relabels white vertices by their planar position.
    pub fn with_planar_whites(&self) -> PlanarTree {
        let order = self.white_preorder();
        let mut pos = vec![0; order.len() + 1];
        for (p, &i) in order.iter().enumerate() {
            pos[i] = p + 1;
        }
        self.relabel_whites(&|i| pos[i])
    }

    /// Checks the structural invariants of a tree.
    pub fn validate(&self) -> Result<()> {
        let n = self.white_count();
        let mut whites = self.white_preorder();
        whites.sort_unstable();
        if whites != (1..=n).collect::<Vec<_>>() {
            return Err(OpError::invariant(
                "white labels",
                format!("labels {whites:?} are not a permutation of 1..={n}"),
            ));
        }
        let l = self.leg_count();
        let mut legs = self.leg_preorder();
        legs.sort_unstable();
        if legs != (1..=l).collect::<Vec<_>>() {
            return Err(OpError::invariant(
                "leg labels",
                format!("labels {legs:?} are not a permutation of 1..={l}"),
            ));
        }
        match self {
            Special | Leg(_) => Ok(()),
            _ => self.validate_node(None),
        }
    }

    fn validate_node(&self, parent_black: Option<bool>) -> Result<()> {
        match self {
            Leg(_) => Ok(()),
            Special => match parent_black {
                Some(false) => Ok(()),
                Some(true) => Err(OpError::invariant(
                    "black-special edge",
                    "a special vertex hangs from a black vertex",
                )),
                None => Err(OpError::invariant(
                    "special root",
                    "a special root only occurs in the exceptional tree `*`",
                )),
            },
            White(_, kids) => kids.iter().try_for_each(|c| c.validate_node(Some(false))),
            Black(kids) => {
                if parent_black == Some(true) {
                    return Err(OpError::invariant("black-black edge", "two black vertices are adjacent"));
                }
                if kids.len() < 2 {
                    return Err(OpError::invariant(
                        "black arity",
                        format!("black vertex of arity {} < 2", kids.len()),
                    ));
                }
                kids.iter().try_for_each(|c| c.validate_node(Some(true)))
            }
        }
    }

    /// Serialization with plain `L` legs.
    pub fn to_unlabeled_string(&self) -> String {
        let mut s = String::new();
        self.write(&mut s, true, false);
        s
    }

    fn write(&self, s: &mut String, root: bool, labeled: bool) {
        match self {
            Leg(_) if root => s.push('|'),
            Special if root => s.push('*'),
            Leg(j) => {
                s.push('L');
                if labeled {
                    s.push_str(&j.to_string());
                }
            }
            Special => s.push('S'),
            White(i, kids) => {
                s.push('W');
                s.push_str(&i.to_string());
                Self::write_kids(s, kids, labeled);
            }
            Black(kids) => {
                s.push('B');
                Self::write_kids(s, kids, labeled);
            }
        }
    }

    fn write_kids(s: &mut String, kids: &[PlanarTree], labeled: bool) {
        s.push('(');
        for (idx, c) in kids.iter().enumerate() {
            if idx > 0 {
                s.push(',');
            }
            c.write(s, false, labeled);
        }
        s.push(')');
    }
}

impl fmt::Display for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write(&mut s, true, true);
        f.write_str(&s)
    }
}

struct TreeParser<'a> {
    chars: Vec<char>,
    pos: usize,
    src: &'a str,
}

impl TreeParser<'_> {
    fn err(&self, detail: impl Into<String>) -> OpError {
        OpError::parse(self.pos + 1, format!("{} in tree `{}`", detail.into(), self.src))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn number(&mut self) -> Option<usize> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            None
        } else {
            self.chars[start..self.pos].iter().collect::<String>().parse().ok()
        }
    }

    fn kids(&mut self) -> Result<Vec<PlanarTree>> {
        if self.peek() != Some('(') {
            return Err(self.err("expected `(`"));
        }
        self.pos += 1;
        let mut kids = Vec::new();
        if self.peek() == Some(')') {
            self.pos += 1;
            return Ok(kids);
        }
        loop {
            kids.push(self.node()?);
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(')') => {
                    self.pos += 1;
                    return Ok(kids);
                }
                _ => return Err(self.err("expected `,` or `)`")),
            }
        }
    }

    fn node(&mut self) -> Result<PlanarTree> {
        match self.peek() {
            Some('W') => {
                self.pos += 1;
                let label = self.number().ok_or_else(|| self.err("white vertex lacks a label"))?;
                Ok(White(label, self.kids()?))
            }
            Some('B') => {
                self.pos += 1;
                Ok(Black(self.kids()?))
            }
            Some('S') => {
                self.pos += 1;
                Ok(Special)
            }
            Some('L') => {
                self.pos += 1;
                Ok(Leg(self.number().unwrap_or(0)))
            }
            _ => Err(self.err("expected `W`, `B`, `S` or `L`")),
        }
    }
}

impl FromStr for PlanarTree {
    type Err = OpError;

    /// Parses the canonical tree format. Plain `L` legs are labelled in planar order.
    fn from_str(s: &str) -> Result<Self> {
        let src = s.trim();
        let tree = match src {
            "|" => Leg(1),
            "*" => Special,
            _ => {
                let compact: String = src.chars().filter(|c| !c.is_whitespace()).collect();
                let mut p = TreeParser {
                    chars: compact.chars().collect(),
                    pos: 0,
                    src,
                };
                let t = p.node()?;
                if p.pos != p.chars.len() {
                    return Err(p.err("trailing input"));
                }
                t
            }
        };
        let legs = tree.leg_preorder();
        let tree = if !legs.is_empty() && legs.iter().all(|&j| j == 0) {
            tree.with_planar_legs()
        } else if legs.contains(&0) {
            return Err(OpError::parse(1, format!("tree `{src}` mixes labelled and unlabelled legs")));
        } else {
            tree
        };
        tree.validate()?;
        Ok(tree)
    }
}

enum Letter {
    F(usize),
    A(usize),
    Const(usize),
}

fn preorder_letters(t: &PlanarTree, with_constants: bool, out: &mut Vec<(Letter, bool)>, ar: &[usize]) {
    match t {
        Leg(j) => out.push((Letter::A(*j), true)),
        Special => {
            if with_constants {
                let id = out.len();
                out.push((Letter::Const(id), true));
            }
        }
        White(i, kids) => {
            out.push((Letter::F(*i), (ar[i - 1] + 1) % 2 == 1));
            kids.iter().for_each(|c| preorder_letters(c, with_constants, out, ar));
        }
        Black(kids) => {
            if with_constants {
                let id = out.len();
                out.push((Letter::Const(id), (kids.len() + 1) % 2 == 1));
            }
            kids.iter().for_each(|c| preorder_letters(c, with_constants, out, ar));
        }
    }
}

fn letter_key(l: &Letter) -> (usize, usize) {
    match l {
        Letter::Const(id) => (0, *id),
        Letter::F(i) => (1, *i),
        Letter::A(j) => (2, *j),
    }
}

/// The letter sign `s_L(T)`.
pub fn letter_sign(t: &PlanarTree) -> i64 {
    let ar = t.arities();
    let mut word = Vec::new();
    preorder_letters(t, false, &mut word, &ar);
    let items: Vec<_> = word.iter().map(|(l, odd)| (letter_key(l), *odd)).collect();
    koszul_sign(&items)
}

/// The operadic sign `s_H(T)`.
pub fn operadic_sign(t: &PlanarTree) -> i64 {
    let ar = t.arities();
    let mut word = Vec::new();
    preorder_letters(t, true, &mut word, &ar);
    let items: Vec<_> = word.iter().map(|(l, odd)| (letter_key(l), *odd)).collect();
    koszul_sign(&items)
}

/// The signature sign `σ(T)`: Koszul sign taking label order to planar
/// order, white vertex `i` having degree `ki - 1`.
pub fn signature_sign(t: &PlanarTree) -> i64 {
    let ar = t.arities();
    let items: Vec<_> = t
        .white_preorder()
        .into_iter()
        .map(|i| (i, (ar[i - 1] + 1) % 2 == 1))
        .collect();
    koszul_sign(&items)
}

/// Collapses black-black edges, absorbs units into black vertices, replaces
/// a black vertex with one child by that child and one with none by `S`.
pub fn normalize(t: &PlanarTree) -> PlanarTree {
    match t {
        Leg(_) | Special => t.clone(),
        White(i, kids) => White(*i, kids.iter().map(normalize).collect()),
        Black(kids) => {
            let mut flat = Vec::new();
            for c in kids {
                match normalize(c) {
                    Black(grand) => flat.extend(grand),
                    Special => {}
                    other => flat.push(other),
                }
            }
            match flat.len() {
                0 => Special,
                1 => flat.pop().expect("one child"),
                _ => Black(flat),
            }
        }
    }
}

/// The `i`-th vertex insertion `T' ∘ᵢ T''`: the white vertex `i` of `T'` is
/// replaced by `T''`, whose leg `j` receives the `j`-th input of the removed
/// vertex. White labels of `T''` move to `i..i+m-1`; the result is normalized.
pub fn tree_insert(outer: &PlanarTree, i: usize, inner: &PlanarTree) -> Result<PlanarTree> {
    let ar = outer.arities();
    if i == 0 || i > ar.len() {
        return Err(OpError::OutOfRange(format!("slot {i} not in 1..={}", ar.len())));
    }
    if inner.leg_count() != ar[i - 1] {
        return Err(OpError::Mismatch(format!(
            "inner tree has {} legs but white vertex {i} has arity {}",
            inner.leg_count(),
            ar[i - 1]
        )));
    }
    let m = inner.white_count();
    let shifted = inner.relabel_whites(&|j| j + i - 1);
    fn graft(u: &PlanarTree, kids: &[PlanarTree]) -> PlanarTree {
        match u {
            Leg(j) => kids[j - 1].clone(),
            White(a, cs) => White(*a, cs.iter().map(|c| graft(c, kids)).collect()),
            Black(cs) => Black(cs.iter().map(|c| graft(c, kids)).collect()),
            Special => Special,
        }
    }
    fn rec(t: &PlanarTree, i: usize, m: usize, shifted: &PlanarTree) -> PlanarTree {
        match t {
            White(a, kids) if *a == i => {
                let kids: Vec<_> = kids.iter().map(|c| rec(c, i, m, shifted)).collect();
                graft(shifted, &kids)
            }
            White(a, kids) => {
                let label = if *a < i { *a } else { *a + m - 1 };
                White(label, kids.iter().map(|c| rec(c, i, m, shifted)).collect())
            }
            Black(kids) => Black(kids.iter().map(|c| rec(c, i, m, shifted)).collect()),
            other => other.clone(),
        }
    }
    Ok(normalize(&rec(outer, i, m, &shifted)))
}

/// Replaces the white vertex `i` by each tree produced from its children.
fn replace_white(
    t: &PlanarTree,
    i: usize,
    f: &dyn Fn(&[PlanarTree]) -> Vec<(i64, PlanarTree)>,
) -> Option<Vec<(i64, PlanarTree)>> {
    match t {
        White(a, kids) if *a == i => Some(f(kids)),
        White(_, kids) | Black(kids) => {
            for (j, c) in kids.iter().enumerate() {
                if let Some(rs) = replace_white(c, i, f) {
                    return Some(
                        rs.into_iter()
                            .map(|(coef, x)| {
                                let mut nk = kids.clone();
                                nk[j] = x;
                                let node = match t {
                                    White(a, _) => White(*a, nk),
                                    _ => Black(nk),
                                };
                                (coef, node)
                            })
                            .collect(),
                    );
                }
            }
            None
        }
        _ => None,
    }
}

/// The vertex part `∂ = ∂1 + ... + ∂n` of the tree differential.
pub fn tree_boundary(t: &PlanarTree) -> FormalSum<PlanarTree> {
    let ar = t.arities();
    let n = ar.len();
    let l = t.leg_count();
    let s_t = operadic_sign(t);
    let mut out = FormalSum::zero();
    for i in 1..=n {
        let k = ar[i - 1];
        if k == 0 {
            continue;
        }
        let m = k - 1;
        let eps = sign(ar[i - 1..].iter().sum::<usize>() + l + n + i);
        let pattern = |kids: &[PlanarTree]| {
            let mut v = vec![
                (
                    sign(m + 1),
                    Black(vec![kids[0].clone(), White(i, kids[1..].to_vec())]),
                ),
                (1, Black(vec![White(i, kids[..k - 1].to_vec()), kids[k - 1].clone()])),
            ];
            for p in 0..m {
                let mut nk = kids[..p].to_vec();
                nk.push(Black(vec![kids[p].clone(), kids[p + 1].clone()]));
                nk.extend_from_slice(&kids[p + 2..]);
                v.push((sign(p + m), White(i, nk)));
            }
            v
        };
        for (c, raw) in replace_white(t, i, &pattern).expect("label present") {
            let nt = normalize(&raw);
            let coeff = eps * c * s_t * operadic_sign(&nt);
            out.add_term(nt, coeff);
        }
    }
    out
}

/// The leg part `δ` of the tree differential.
pub fn tree_coboundary(t: &PlanarTree) -> FormalSum<PlanarTree> {
    let l = t.leg_count();
    let s_t = operadic_sign(t);
    let mut terms = vec![
        (sign(l + 1), Black(vec![Leg(1), t.relabel_legs(&|j| j + 1)])),
        (1, Black(vec![t.clone(), Leg(l + 1)])),
    ];
    for p in 0..l {
        fn split(u: &PlanarTree, p: usize) -> PlanarTree {
            match u {
                Leg(j) if *j == p + 1 => Black(vec![Leg(p + 1), Leg(p + 2)]),
                Leg(j) => Leg(if *j <= p { *j } else { *j + 1 }),
                White(a, kids) => White(*a, kids.iter().map(|c| split(c, p)).collect()),
                Black(kids) => Black(kids.iter().map(|c| split(c, p)).collect()),
                Special => Special,
            }
        }
        terms.push((sign(p + l), split(t, p)));
    }
    let mut out = FormalSum::zero();
    for (c, raw) in terms {
        let nt = normalize(&raw);
        let coeff = c * s_t * operadic_sign(&nt);
        out.add_term(nt, coeff);
    }
    out
}

/// The tree differential `d = ∂ - δ` on one basis tree.
pub fn tree_differential(t: &PlanarTree) -> FormalSum<PlanarTree> {
    let mut out = tree_boundary(t);
    out.add_scaled(&tree_coboundary(t), -1);
    out
}

/// `d` extended linearly.
pub fn tree_differential_sum(elem: &FormalSum<PlanarTree>) -> FormalSum<PlanarTree> {
    elem.map_linear(tree_differential)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Parent {
    Root,
    White,
    Black,
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    crate::grid_paths::weak_compositions(total, parts)
}

/// Assignments of labels to `r` ordered parts together with leg counts.
fn ordered_splits(labels: &[usize], nlegs: usize, r: usize) -> Vec<Vec<(Vec<usize>, usize)>> {
    let mut out = Vec::new();
    let assignments = r.pow(labels.len() as u32);
    let comps = compositions(nlegs, r);
    for code in 0..assignments {
        let mut parts = vec![Vec::new(); r];
        let mut c = code;
        let mut digits = vec![0; labels.len()];
        for d in digits.iter_mut().rev() {
            *d = c % r;
            c /= r;
        }
        for (lab, &d) in labels.iter().zip(&digits) {
            parts[d].push(*lab);
        }
        for comp in &comps {
            out.push(parts.iter().cloned().zip(comp.iter().copied()).collect());
        }
    }
    out
}

fn cartesian(lists: Vec<Vec<PlanarTree>>) -> Vec<Vec<PlanarTree>> {
    let mut acc: Vec<Vec<PlanarTree>> = vec![Vec::new()];
    for list in lists {
        let mut next = Vec::new();
        for prefix in &acc {
            for item in &list {
                let mut v = prefix.clone();
                v.push(item.clone());
                next.push(v);
            }
        }
        acc = next;
    }
    acc
}

fn gen(labels: &[usize], nlegs: usize, parent: Parent, ar: &[usize]) -> Vec<PlanarTree> {
    let mut out = Vec::new();
    if labels.is_empty() && nlegs == 1 {
        out.push(Leg(0));
    }
    if labels.is_empty() && nlegs == 0 && parent == Parent::White {
        out.push(Special);
    }
    for &i in labels {
        let rest: Vec<usize> = labels.iter().copied().filter(|&j| j != i).collect();
        let k = ar[i - 1];
        if k == 0 {
            if rest.is_empty() && nlegs == 0 {
                out.push(White(i, vec![]));
            }
            continue;
        }
        for split in ordered_splits(&rest, nlegs, k) {
            let lists = split
                .iter()
                .map(|(p, c)| gen(p, *c, Parent::White, ar))
                .collect();
            for kids in cartesian(lists) {
                out.push(White(i, kids));
            }
        }
    }
    if parent != Parent::Black {
        for r in 2..=labels.len() + nlegs {
            for split in ordered_splits(labels, nlegs, r) {
                if split.iter().any(|(p, c)| p.is_empty() && *c == 0) {
                    continue;
                }
                let lists = split
                    .iter()
                    .map(|(p, c)| gen(p, *c, Parent::Black, ar))
                    .collect();
                for kids in cartesian(lists) {
                    out.push(Black(kids));
                }
            }
        }
    }
    out
}

fn permutations(l: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for j in 0..used.len() {
            if !used[j] {
                used[j] = true;
                cur.push(j + 1);
                rec(cur, used, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; l], &mut out);
    out
}

/// Every `(l; k1..kn)`-tree. With `labeled_legs` false, legs are labelled in
/// planar order and each planar shape appears once.
pub fn enumerate_trees(l: usize, ks: &[usize], labeled_legs: bool) -> Vec<PlanarTree> {
    if ks.is_empty() && l == 0 {
        return vec![Special];
    }
    if ks.is_empty() && l == 1 {
        return vec![Leg(1)];
    }
    let labels: Vec<usize> = (1..=ks.len()).collect();
    let shapes = gen(&labels, l, Parent::Root, ks);
    let perms = if labeled_legs {
        permutations(l)
    } else {
        vec![(1..=l).collect()]
    };
    let mut out = Vec::new();
    for shape in shapes {
        for p in &perms {
            let mut it = p.iter().copied();
            out.push(shape.assign_legs(&mut || it.next().expect("l labels")));
        }
    }
    out
}

/// Suboperad flags: `B̂` excludes stubs and `*`; `T` requires legs in planar order.
pub fn suboperad_membership(t: &PlanarTree) -> Membership {
    let in_b_hat = !t.has_stub() && *t != Special;
    let legs = t.leg_preorder();
    let in_t = legs.windows(2).all(|w| w[0] < w[1]);
    Membership {
        in_b_hat,
        in_t,
        in_t_hat: in_b_hat && in_t,
    }
}

fn walk(t: &PlanarTree, out: &mut Vec<Option<usize>>) {
    match t {
        Leg(_) => out.push(None),
        Special => {}
        Black(kids) => kids.iter().for_each(|c| walk(c, out)),
        White(i, kids) => {
            out.push(Some(*i));
            for c in kids {
                walk(c, out);
                out.push(Some(*i));
            }
        }
    }
}

/// The lattice path of a tree: walking counterclockwise, each visit to white
/// vertex `i` is a move in direction `i` and each leg adds 1 to the marking
/// of the current point. Leg labels are ignored.
pub fn tree_to_path(t: &PlanarTree) -> MarkedLatticePath {
    let mut toks = Vec::new();
    walk(t, &mut toks);
    let mut moves = Vec::new();
    let mut markings = vec![0];
    for tok in toks {
        match tok {
            None => *markings.last_mut().expect("nonempty") += 1,
            Some(d) => {
                moves.push(d);
                markings.push(0);
            }
        }
    }
    MarkedLatticePath::from_moves(t.white_count(), moves, markings)
        .expect("tree walks are lattice paths")
}

enum Item {
    Leg,
    Tree(PlanarTree),
}

fn parse_items(toks: &[Option<usize>]) -> Result<Vec<Item>> {
    let mut items = Vec::new();
    let mut a = 0;
    while a < toks.len() {
        match toks[a] {
            None => {
                items.push(Item::Leg);
                a += 1;
            }
            Some(d) => {
                let last = toks.iter().rposition(|&x| x == Some(d)).expect("present");
                let block = &toks[a..=last];
                let cuts: Vec<usize> = block
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x == Some(d))
                    .map(|(p, _)| p)
                    .collect();
                let mut kids = Vec::new();
                for w in cuts.windows(2) {
                    let seg = parse_items(&block[w[0] + 1..w[1]])?;
                    kids.push(match seg.len() {
                        0 => Special,
                        1 => item_tree(seg.into_iter().next().expect("one")),
                        _ => Black(seg.into_iter().map(item_tree).collect()),
                    });
                }
                items.push(Item::Tree(White(d, kids)));
                a = last + 1;
            }
        }
    }
    Ok(items)
}

fn item_tree(item: Item) -> PlanarTree {
    match item {
        Item::Leg => Leg(0),
        Item::Tree(t) => t,
    }
}

/// Inverse of [`tree_to_path`] on paths of complexity at most 2. Legs are
/// labelled in planar order.
pub fn path_to_tree(p: &MarkedLatticePath) -> Result<PlanarTree> {
    let c = moves_complexity(p.signature().arity(), p.moves());
    if c > 2 {
        return Err(OpError::invariant(
            "complexity",
            format!("path has complexity {c} > 2 and is not a tree"),
        ));
    }
    let mut toks = vec![None; p.markings()[0]];
    for (d, &m) in p.moves().iter().zip(&p.markings()[1..]) {
        toks.push(Some(*d));
        toks.extend(std::iter::repeat(None).take(m));
    }
    let items = parse_items(&toks)?;
    let tree = match items.len() {
        0 => Special,
        1 => match items.into_iter().next().expect("one") {
            Item::Leg => Leg(1),
            Item::Tree(t) => t,
        },
        _ => Black(items.into_iter().map(item_tree).collect()),
    };
    let tree = tree.with_planar_legs();
    if tree.validate().is_err() || tree_to_path(&tree) != *p {
        return Err(OpError::invariant(
            "tree walk",
            format!("path `{p}` is not the walk of a tree"),
        ));
    }
    Ok(tree)
}

/// The sign `ζ(T)` relating the tree differential to the lattice total
/// differential: `d(φ_T) = Σ_U ζ(T) ζ(U) [U : dT] φ_U` for trees whose legs are
/// in planar order.
pub fn dictionary_sign(t: &PlanarTree) -> i64 {
    let ks = t.arities();
    let n = ks.len();
    let l = t.leg_count();
    let sk: usize = ks.iter().sum();
    let mut e = l * l.saturating_sub(1) / 2 + l * sk;
    for a in 0..n {
        for b in a + 1..n {
            e += ks[a] * ks[b];
        }
        e += (n + a + 1) * ks[a];
    }
    operadic_sign(t) * sign(e)
}

/// Signature of the tree as a lattice colour signature `(k1..kn; l)`.
pub fn colour_signature(t: &PlanarTree) -> ColourSignature {
    ColourSignature::new(t.arities(), t.leg_count())
}
