//! Symbolic natural operations on Hochschild cochains of the free algebra.
//!
//! Elements of the free algebra are integer combinations of words whose
//! letters are generators `a<j>` and applications `f(x1,...,xk)` of opaque
//! cochain symbols to words. Cochains are multilinear, so applications are
//! expanded into monomial arguments. A cochain of arity `k` has degree
//! `k - 1`; a generator has degree `-1`.

use std::fmt;
use std::rc::Rc;

use crate::error::{OpError, Result};
use crate::simplicial_ops::FormalSum;
use crate::tree_calculus::{letter_sign, operadic_sign, tree_insert, PlanarTree};

/// One letter of a word in the free algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Factor {
    Gen(usize),
    App(String, Vec<Monomial>),
}

/// A word; the empty word is the unit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(pub Vec<Factor>);

/// Integer combination of words.
pub type FreeAlgebraElement = FormalSum<Monomial>;

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Gen(j) => write!(f, "a{j}"),
            Factor::App(name, args) => {
                let a: Vec<String> = args.iter().map(|m| m.to_string()).collect();
                write!(f, "{name}({})", a.join(","))
            }
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// The generator `a<j>`.
pub fn generator(j: usize) -> FreeAlgebraElement {
    FormalSum::single(Monomial(vec![Factor::Gen(j)]))
}

/// The unit `1`.
pub fn unit() -> FreeAlgebraElement {
    FormalSum::single(Monomial::default())
}

/// Product in the free algebra.
pub fn mul(x: &FreeAlgebraElement, y: &FreeAlgebraElement) -> FreeAlgebraElement {
    let mut out = FormalSum::zero();
    for (a, ca) in x.iter() {
        for (b, cb) in y.iter() {
            let mut w = a.0.clone();
            w.extend(b.0.iter().cloned());
            out.add_term(Monomial(w), ca * cb);
        }
    }
    out
}

/// Applies the symbol `name` multilinearly to `args`.
pub fn apply_symbol(name: &str, args: &[FreeAlgebraElement]) -> FreeAlgebraElement {
    let mut acc: Vec<(Vec<Monomial>, i64)> = vec![(Vec::new(), 1)];
    for a in args {
        let mut next = Vec::new();
        for (prefix, c) in &acc {
            for (m, cm) in a.iter() {
                let mut v = prefix.clone();
                v.push(m.clone());
                next.push((v, c * cm));
            }
        }
        acc = next;
    }
    FormalSum::from_terms(
        acc.into_iter()
            .map(|(v, c)| (Monomial(vec![Factor::App(name.to_string(), v)]), c)),
    )
}

fn sign(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

type CochainFn = Rc<dyn Fn(&[FreeAlgebraElement]) -> FreeAlgebraElement>;

/// A Hochschild cochain given by a symbolic formula. A negative arity marks
/// a composite that does not exist; it acts as zero in linear combinations.
#[derive(Clone)]
pub struct Cochain {
    pub arity: i64,
    f: CochainFn,
}

impl Cochain {
    pub fn new(arity: i64, f: impl Fn(&[FreeAlgebraElement]) -> FreeAlgebraElement + 'static) -> Self {
        Cochain { arity, f: Rc::new(f) }
    }

    /// Degree `arity - 1`.
    pub fn degree(&self) -> i64 {
        self.arity - 1
    }

    pub fn exists(&self) -> bool {
        self.arity >= 0
    }

    pub fn call(&self, args: &[FreeAlgebraElement]) -> FreeAlgebraElement {
        assert_eq!(args.len() as i64, self.arity, "arity mismatch");
        (self.f)(args)
    }

    /// Value on the generators `a0, a1, ...`.
    pub fn on_generators(&self) -> FreeAlgebraElement {
        if !self.exists() {
            return FormalSum::zero();
        }
        let args: Vec<_> = (0..self.arity as usize).map(generator).collect();
        self.call(&args)
    }

    fn zero(arity: i64) -> Self {
        Cochain::new(arity, |_| FormalSum::zero())
    }
}

/// An opaque cochain symbol.
pub fn symbol(name: &str, arity: usize) -> Cochain {
    let name = name.to_string();
    Cochain::new(arity as i64, move |a| apply_symbol(&name, a))
}

/// The Hochschild differential: for `f` of arity `n`,
/// `d_H f(a0..an) = (-1)^(n+1) a0 f(a1..an) + f(a0..a(n-1)) an
///  + Σ_i (-1)^(i+n) f(a0..ai a(i+1)..an)`.
pub fn hochschild_d(f: &Cochain) -> Cochain {
    if !f.exists() {
        return Cochain::zero(f.arity + 1);
    }
    let n = f.arity as usize;
    let f = f.clone();
    Cochain::new(n as i64 + 1, move |a| {
        let mut r = mul(&a[0], &f.call(&a[1..])).scaled(sign(n as i64 + 1));
        r.add_scaled(&mul(&f.call(&a[..n]), &a[n]), 1);
        for i in 0..n {
            let mut args = a[..i].to_vec();
            args.push(mul(&a[i], &a[i + 1]));
            args.extend_from_slice(&a[i + 2..]);
            r.add_scaled(&f.call(&args), sign((i + n) as i64));
        }
        r
    })
}

/// `f ∪ g = (-1)^((|f|+1)|g|) f(..) g(..)`.
pub fn cup(f: &Cochain, g: &Cochain) -> Cochain {
    if !f.exists() || !g.exists() {
        return Cochain::zero(f.arity + g.arity);
    }
    let s = sign((f.degree() + 1) * g.degree());
    let (f, g) = (f.clone(), g.clone());
    let p = f.arity as usize;
    Cochain::new(f.arity + g.arity, move |a| mul(&f.call(&a[..p]), &g.call(&a[p..])).scaled(s))
}

/// `f ∘ᵢ g = (-1)^(i|g|) f(.., g(..), ..)` with `g` in slot `i` (0-based).
pub fn circ_i(f: &Cochain, i: usize, g: &Cochain) -> Cochain {
    let arity = f.arity + g.arity - 1;
    if !f.exists() || !g.exists() || i as i64 >= f.arity || arity < 0 {
        return Cochain::zero(arity);
    }
    let s = sign(i as i64 * g.degree());
    let (f, g) = (f.clone(), g.clone());
    let q = g.arity as usize;
    Cochain::new(arity, move |a| {
        let mut args = a[..i].to_vec();
        args.push(g.call(&a[i..i + q]));
        args.extend_from_slice(&a[i + q..]);
        f.call(&args).scaled(s)
    })
}

/// Linear combination of cochains; terms that do not exist are dropped.
pub fn lin(terms: &[(i64, Cochain)]) -> Cochain {
    let live: Vec<(i64, Cochain)> = terms.iter().filter(|(_, c)| c.exists()).cloned().collect();
    let arity = live
        .first()
        .map(|(_, c)| c.arity)
        .or_else(|| terms.iter().map(|(_, c)| c.arity).max())
        .unwrap_or(-1);
    assert!(live.iter().all(|(_, c)| c.arity == arity), "arity mismatch in linear combination");
    Cochain::new(arity, move |a| {
        let mut r = FormalSum::zero();
        for (c, f) in &live {
            r.add_scaled(&f.call(a), *c);
        }
        r
    })
}

/// `f ∘ g = Σ_i f ∘ᵢ g`.
pub fn circ(f: &Cochain, g: &Cochain) -> Cochain {
    let arity = f.arity + g.arity - 1;
    if !f.exists() || !g.exists() || arity < 0 {
        return Cochain::zero(arity.min(-1));
    }
    let parts: Vec<(i64, Cochain)> = (0..f.arity as usize).map(|i| (1, circ_i(f, i, g))).collect();
    if parts.is_empty() {
        return Cochain::zero(arity);
    }
    lin(&parts)
}

/// `[f, g] = f ∘ g - (-1)^(|f||g|) g ∘ f`.
pub fn bracket(f: &Cochain, g: &Cochain) -> Cochain {
    lin(&[
        (1, circ(f, g)),
        (-sign(f.degree() * g.degree()), circ(g, f)),
    ])
}

/// The brace `f{g1,...,gk}`: the sum of all insertions of the `gj`, in this
/// order, into distinct slots of `f`, with the Koszul sign of moving each
/// `gj` past the inputs before it and the factor
/// `(-1)^(Σ_{j<k} |gj||gk|)`.
pub fn brace(f: &Cochain, gs: &[Cochain]) -> Cochain {
    let arity = f.arity - gs.len() as i64 + gs.iter().map(|g| g.arity).sum::<i64>();
    if !f.exists() || gs.iter().any(|g| !g.exists()) || arity < 0 {
        return Cochain::zero(arity.min(-1));
    }
    let mut e = 0;
    for a in 0..gs.len() {
        for b in a + 1..gs.len() {
            e += gs[a].degree() * gs[b].degree();
        }
    }
    let ks = sign(e);
    let slots = f.arity as usize;
    let mut parts = Vec::new();
    for pos in combinations(slots, gs.len()) {
        let mut acc = f.clone();
        for (&p, g) in pos.iter().zip(gs).rev() {
            acc = circ_i(&acc, p, g);
        }
        parts.push((ks, acc));
    }
    if parts.is_empty() {
        return Cochain::zero(arity);
    }
    lin(&parts)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// `f - g` evaluated on generators.
pub fn residual(f: &Cochain, g: &Cochain) -> FreeAlgebraElement {
    f.on_generators().minus(&g.on_generators())
}

/// Evaluates the tree expression without sign, with `cochains[i - 1]` at
/// white vertex `i` and `inputs[j - 1]` at leg `j`.
pub fn evaluate_with(t: &PlanarTree, cochains: &[Cochain], inputs: &[FreeAlgebraElement]) -> FreeAlgebraElement {
    match t {
        PlanarTree::Leg(j) => inputs[j - 1].clone(),
        PlanarTree::Special => unit(),
        PlanarTree::Black(kids) => kids
            .iter()
            .fold(unit(), |acc, c| mul(&acc, &evaluate_with(c, cochains, inputs))),
        PlanarTree::White(i, kids) => {
            let args: Vec<_> = kids.iter().map(|c| evaluate_with(c, cochains, inputs)).collect();
            cochains[i - 1].call(&args)
        }
    }
}

fn default_cochains(t: &PlanarTree) -> Vec<Cochain> {
    t.arities()
        .iter()
        .enumerate()
        .map(|(i, &k)| symbol(&format!("f{}", i + 1), k))
        .collect()
}

fn default_inputs(l: usize) -> Vec<FreeAlgebraElement> {
    (1..=l).map(generator).collect()
}

/// The natural operation `O_T(f1..fn)(a1..al)`: composition along the tree
/// with black vertices multiplying, special vertices giving `1`, times the
/// letter sign `s_L(T)`.
pub fn evaluate(t: &PlanarTree) -> FreeAlgebraElement {
    let expr = evaluate_with(t, &default_cochains(t), &default_inputs(t.leg_count()));
    expr.scaled(letter_sign(t))
}

/// Evaluates the whiskering of an amputated tree on cochains of the given
/// arities: the sum over whiskered trees with those white arities, each
/// weighted by its operadic sign.
pub fn evaluate_whiskered(s: &PlanarTree, arities: &[usize]) -> Result<FreeAlgebraElement> {
    let base = s.arities();
    if base.len() != arities.len() {
        return Err(OpError::Mismatch(format!(
            "tree has {} white vertices but {} arities were given",
            base.len(),
            arities.len()
        )));
    }
    if base.iter().zip(arities).any(|(b, a)| a < b) {
        return Err(OpError::Mismatch(format!(
            "arities {arities:?} are below the tree arities {base:?}"
        )));
    }
    let legs: usize = arities.iter().zip(&base).map(|(a, b)| a - b).sum();
    let mut out = FormalSum::zero();
    for t in crate::brace_calculus::whisker_exact(s, legs)? {
        if t.arities() == arities {
            let expr = evaluate_with(&t, &default_cochains(&t), &default_inputs(legs));
            out.add_scaled(&expr, operadic_sign(&t));
        }
    }
    Ok(out)
}

/// Outcome of comparing a tree insertion with the composite of operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionVerdict {
    /// The unsigned expressions agree.
    pub structural: bool,
    /// For triples without black or special vertices, whether the signs
    /// agree with the Koszul composite; `None` otherwise.
    pub signed: Option<bool>,
}

fn constant_free(t: &PlanarTree) -> bool {
    let s = t.to_string();
    !s.contains('B') && !s.contains('S') && !s.contains('*')
}

/// Compares `O_{T' ∘ᵢ T''}` with `O_{T'} ∘ᵢ O_{T''}`. The composite of
/// expressions is formed by substituting the expression of `T''` for the
/// symbol at white vertex `i` of `T'`.
pub fn check_operad_action(outer: &PlanarTree, i: usize, inner: &PlanarTree) -> Result<ActionVerdict> {
    let t = tree_insert(outer, i, inner)?;
    let n1 = outer.white_count();
    let m = inner.white_count();
    let ar1 = outer.arities();
    let ar2 = inner.arities();
    let inner_cochains: Vec<Cochain> = ar2
        .iter()
        .enumerate()
        .map(|(j, &k)| symbol(&format!("f{}", i + j), k))
        .collect();
    let inner_t = inner.clone();
    let slot = Cochain::new(ar1[i - 1] as i64, move |args| evaluate_with(&inner_t, &inner_cochains, args));
    let mut cochains = Vec::new();
    for a in 1..=n1 {
        if a < i {
            cochains.push(symbol(&format!("f{a}"), ar1[a - 1]));
        } else if a == i {
            cochains.push(slot.clone());
        } else {
            cochains.push(symbol(&format!("f{}", a + m - 1), ar1[a - 1]));
        }
    }
    let composite = evaluate_with(outer, &cochains, &default_inputs(outer.leg_count()));
    let direct = evaluate_with(&t, &default_cochains(&t), &default_inputs(t.leg_count()));
    let structural = composite == direct;
    let signed = if constant_free(outer) && constant_free(inner) {
        let deg2 = inner.degree();
        let before: i64 = ar1[..i - 1].iter().map(|&k| k as i64 - 1).sum();
        let kappa = sign(deg2 * before);
        Some(letter_sign(&t) == kappa * letter_sign(outer) * letter_sign(inner))
    } else {
        None
    };
    Ok(ActionVerdict { structural, signed })
}

/// One identity instance of the Gerstenhaber suite.
#[derive(Debug, Clone)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub arities: Vec<usize>,
    pub residual: FreeAlgebraElement,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        self.residual.is_zero()
    }
}

/// `B(x1,x2,x3) = (-1)^(|x3|(|x1|+|x2|)) x3{x1,x2}`, the brace operation of
/// the tree `W3(W1(),W2())`.
fn brace_tree_op(x: &[Cochain; 3]) -> Cochain {
    let s = sign(x[2].degree() * (x[0].degree() + x[1].degree()));
    lin(&[(s, brace(&x[2], &[x[0].clone(), x[1].clone()]))])
}

/// `dB(x) = Σ_i (-1)^(Σ_{j<i}|xj|) B(.., d_H xi, ..) - d_H(B(x))`.
fn brace_tree_differential(x: &[Cochain; 3]) -> Cochain {
    let mut terms = Vec::new();
    let mut before = 0;
    for i in 0..3 {
        let mut y = x.clone();
        y[i] = hochschild_d(&x[i]);
        terms.push((sign(before), brace_tree_op(&y)));
        before += x[i].degree();
    }
    terms.push((-1, hochschild_d(&brace_tree_op(x))));
    lin(&terms)
}

/// Runs (H1), (H2), (H3) for symbol arities `0..=max_arity` and the brace
/// homotopy identity
/// `[f∪g,h] - f∪[g,h] - (-1)^(|g||h|) [f,h]∪g = d(B)(f,g,h)`.
pub fn gerstenhaber_suite(max_arity: usize) -> Vec<IdentityCheck> {
    let mut out = Vec::new();
    for p in 0..=max_arity {
        for q in 0..=max_arity {
            let f = symbol("f", p);
            let g = symbol("g", q);
            let m = f.degree();
            let n = g.degree();
            let df = hochschild_d(&f);
            let dg = hochschild_d(&g);
            let h1_l = lin(&[(-1, hochschild_d(&cup(&f, &g)))]);
            let h1_r = lin(&[(1, cup(&df, &g)), (sign(m), cup(&f, &dg))]);
            out.push(IdentityCheck {
                name: "H1",
                arities: vec![p, q],
                residual: residual(&h1_l, &h1_r),
            });
            let h2_l = lin(&[(1, cup(&f, &g)), (sign(m * n), cup(&g, &f))]);
            let h2_r = lin(&[
                (1, circ(&df, &g)),
                (sign(m), circ(&f, &dg)),
                (-1, hochschild_d(&circ(&f, &g))),
            ]);
            out.push(IdentityCheck {
                name: "H2",
                arities: vec![p, q],
                residual: residual(&h2_l, &h2_r),
            });
            let h3_l = hochschild_d(&bracket(&f, &g));
            let h3_r = lin(&[(1, bracket(&df, &g)), (sign(m), bracket(&f, &dg))]);
            out.push(IdentityCheck {
                name: "H3",
                arities: vec![p, q],
                residual: residual(&h3_l, &h3_r),
            });
            for r in 0..=max_arity {
                let h = symbol("h", r);
                let lhs = lin(&[
                    (1, bracket(&cup(&f, &g), &h)),
                    (-1, cup(&f, &bracket(&g, &h))),
                    (-sign(n * h.degree()), cup(&bracket(&f, &h), &g)),
                ]);
                let rhs = brace_tree_differential(&[f.clone(), g.clone(), h]);
                out.push(IdentityCheck {
                    name: "brace-homotopy",
                    arities: vec![p, q, r],
                    residual: residual(&lhs, &rhs),
                });
            }
        }
    }
    out
}

/// A four-vertex tree whose operation `O(f1,f2,f3,f4)(a1,...,a8)` serves as a reference value.
pub fn reference_tree() -> PlanarTree {
    "B(L3,W1(W2(B(L5,L6),S,L8),L1,W3(L7)),W4(L4,S,L2))"
        .parse()
        .expect("valid tree")
}
