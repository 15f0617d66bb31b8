//! Colored trees `𝔗_W`, `𝔗¹_W`, their parametrized cycles `L_W = Γ(𝔗_W)` and
//! `L¹_W = Γ(𝔗¹_W)`, and the cubical boundary used to check the differential
//! systems termwise.
//!
//! A parametrized cycle is a signed sum of tuples `[t; f_1, ..., f_{2p−1}]`
//! of rational functions in `t` and `x_1, ..., x_{p−1}`.

pub mod expr;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::coeffs::tables;
use crate::dual::memo;
use crate::words::LyndonWord;
use crate::{fmt_q, parse_q, q, Error, LinComb, Result, Q};
use expr::{Rational, Var, T};

/// Edge type of a colored tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeType {
    /// Edge function `1 − a/b`.
    Solid,
    /// Edge function `(b − a)/(b − 1)`.
    Dashed,
}

/// Below an edge: a decorated leaf or a trivalent vertex.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Body {
    Leaf(u8),
    Node(Box<ColoredTree>, Box<ColoredTree>),
}

/// A planted trivalent tree with typed edges; the root is decorated `t`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColoredTree {
    pub edge: EdgeType,
    pub body: Body,
}

impl ColoredTree {
    pub fn leaf(d: u8) -> Self {
        let edge = if d == 0 { EdgeType::Dashed } else { EdgeType::Solid };
        Self {
            edge,
            body: Body::Leaf(d),
        }
    }

    /// Joins the roots of `left` and `right` under a new root edge.
    pub fn graft(edge: EdgeType, left: &Self, right: &Self) -> Self {
        Self {
            edge,
            body: Body::Node(Box::new(left.clone()), Box::new(right.clone())),
        }
    }

    pub fn leaves(&self) -> usize {
        match &self.body {
            Body::Leaf(_) => 1,
            Body::Node(l, r) => l.leaves() + r.leaves(),
        }
    }
}

impl fmt::Display for ColoredTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.edge {
            EdgeType::Solid => "s",
            EdgeType::Dashed => "d",
        })?;
        match &self.body {
            Body::Leaf(d) => write!(f, "{d}"),
            Body::Node(l, r) => write!(f, "[{l},{r}]"),
        }
    }
}

impl fmt::Debug for ColoredTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `L_W` (plain) or `L¹_W` (one).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Variant {
    Plain,
    One,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Plain => "plain",
            Variant::One => "one",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(Variant::Plain),
            "one" => Ok(Variant::One),
            other => Err(Error::Parse(format!("unknown variant {other:?}; use plain or one"))),
        }
    }
}

type ColoredComb = LinComb<ColoredTree>;

fn graft_comb(edge: EdgeType, left: &ColoredComb, right: &ColoredComb, scale: &Q, out: &mut ColoredComb) {
    for (l, cl) in left.iter() {
        for (r, cr) in right.iter() {
            out.add(ColoredTree::graft(edge, l, r), scale * cl * cr);
        }
    }
}

type ColoredCache = std::sync::Mutex<std::collections::HashMap<(LyndonWord, Variant), Arc<ColoredComb>>>;

static COLORED: OnceLock<ColoredCache> = OnceLock::new();

/// `𝔗_W` or `𝔗¹_W` as a combination of colored trees. The letters have the
/// single trees `𝔗_0` (dashed edge to `0`) and `𝔗_1` (solid edge to `1`) in
/// both variants.
pub fn build_colored(w: &LyndonWord, variant: Variant) -> Result<Arc<ColoredComb>> {
    if let Some(c) = COLORED
        .get()
        .and_then(|m| m.lock().expect("cache lock").get(&(w.clone(), variant)).cloned())
    {
        return Ok(c);
    }
    let comb = if w.is_letter() {
        ColoredComb::single(ColoredTree::leaf(w.letters()[0]), q(1))
    } else {
        let t = tables(w)?;
        let mut out = ColoredComb::new();
        match variant {
            Variant::Plain => {
                for ((u, v), c) in t.a.entries() {
                    let (lu, lv) = (build_colored(u, Variant::Plain)?, build_colored(v, Variant::Plain)?);
                    graft_comb(EdgeType::Solid, &lu, &lv, c, &mut out);
                }
                for ((u, v), c) in t.b.entries() {
                    let (lu, lv) = (build_colored(u, Variant::Plain)?, build_colored(v, Variant::One)?);
                    graft_comb(EdgeType::Solid, &lu, &lv, c, &mut out);
                }
            }
            Variant::One => {
                for ((u, v), c) in t.ap.entries() {
                    let inner = if u.is_zero_letter() {
                        Variant::Plain
                    } else {
                        Variant::One
                    };
                    let (lu, lv) = (build_colored(u, inner)?, build_colored(v, inner)?);
                    graft_comb(EdgeType::Dashed, &lu, &lv, c, &mut out);
                }
                for ((u, v), c) in t.bp.entries() {
                    let (lu, lv) = (build_colored(u, Variant::Plain)?, build_colored(v, Variant::One)?);
                    graft_comb(EdgeType::Dashed, &lu, &lv, c, &mut out);
                }
            }
        }
        out
    };
    let comb = Arc::new(comb);
    Ok(memo(&COLORED, &(w.clone(), variant), || comb.clone()))
}

/// A tuple of cube coordinates.
pub type Term = Vec<Rational>;

/// Signed sum of parametrized tuples `[t; f_1, ..., f_{2p−1}]`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct ParametrizedCycle {
    pub weight: usize,
    pub terms: LinComb<Term>,
}

impl ParametrizedCycle {
    pub fn is_empty(&self) -> bool {
        self.terms.is_zero()
    }

    /// Every term with its variables renamed to a canonical order.
    pub fn canonical(&self) -> Self {
        let mut terms = LinComb::new();
        for (term, c) in self.terms.iter() {
            terms.add(canonical_term(term), c.clone());
        }
        Self {
            weight: self.weight,
            terms,
        }
    }

    pub fn scaled(&self, c: &Q) -> Self {
        Self {
            weight: self.weight,
            terms: self.terms.scaled(c),
        }
    }
}

fn fmt_term(term: &Term) -> String {
    let coords: Vec<String> = term.iter().map(ToString::to_string).collect();
    format!("[t; {}]", coords.join(", "))
}

impl fmt::Display for ParametrizedCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("0");
        }
        for (i, (term, c)) in self.terms.iter().enumerate() {
            let neg = c < &q(0);
            let mag = if neg { -c.clone() } else { c.clone() };
            let sign = match (i, neg) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => "\n+ ",
                (_, true) => "\n- ",
            };
            let mag = if mag == q(1) {
                String::new()
            } else {
                format!("{}·", fmt_q(&mag))
            };
            write!(f, "{sign}{mag}{}", fmt_term(term))?;
        }
        Ok(())
    }
}

impl fmt::Debug for ParametrizedCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Renames the `x` variables of `term` in order of first occurrence, scanning
/// coordinates left to right. Variables first met in the same coordinate are
/// ordered so that the renamed tuple is smallest.
pub fn canonical_term(term: &Term) -> Term {
    let mut partial: Vec<Vec<Var>> = vec![Vec::new()];
    for f in term {
        let fresh: Vec<Var> = f.vars().into_iter().filter(|&v| v != T).collect();
        let mut next = Vec::new();
        for order in &partial {
            let new: Vec<Var> = fresh.iter().copied().filter(|v| !order.contains(v)).collect();
            for perm in permutations(&new) {
                let mut o = order.clone();
                o.extend(perm);
                next.push(o);
            }
        }
        partial = next;
    }
    partial
        .into_iter()
        .map(|order| {
            let map = move |v: Var| match order.iter().position(|&u| u == v) {
                Some(i) => i as Var + 1,
                None => v,
            };
            term.iter().map(|f| f.rename(&map)).collect::<Term>()
        })
        .min()
        .unwrap_or_default()
}

fn permutations(items: &[Var]) -> Vec<Vec<Var>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, head);
            out.push(p);
        }
    }
    out
}

fn edge_function(edge: EdgeType, a: &Rational, b: &Rational) -> Rational {
    let one = Rational::constant(1);
    match edge {
        EdgeType::Solid => one.sub(&a.div(b).expect("solid edges end at nonzero vertices")),
        EdgeType::Dashed => b.sub(a).div(&b.sub(&one)).expect("dashed edges end away from 1"),
    }
}

/// `Γ` of a single colored tree with `p` leaves.
pub fn gamma_tree(tree: &ColoredTree) -> Term {
    fn go(tree: &ColoredTree, source: &Rational, next_var: &mut Var, out: &mut Term) {
        let target = match &tree.body {
            Body::Leaf(d) => Rational::constant(*d as i64),
            Body::Node(..) => {
                let v = Rational::var(*next_var);
                *next_var -= 1;
                v
            }
        };
        out.push(edge_function(tree.edge, source, &target));
        if let Body::Node(l, r) = &tree.body {
            go(l, &target, next_var, out);
            go(r, &target, next_var, out);
        }
    }
    let mut next = tree.leaves() as Var - 1;
    let mut out = Vec::with_capacity(2 * tree.leaves() - 1);
    go(tree, &Rational::var(T), &mut next, &mut out);
    out
}

/// `Γ` extended linearly.
pub fn gamma(comb: &LinComb<ColoredTree>) -> ParametrizedCycle {
    let mut terms = LinComb::new();
    let mut weight = 0;
    for (tree, c) in comb.iter() {
        weight = tree.leaves();
        terms.add(gamma_tree(tree), c.clone());
    }
    ParametrizedCycle { weight, terms }
}

/// `L_W` or `L¹_W`.
pub fn cycle(w: &LyndonWord, variant: Variant) -> Result<ParametrizedCycle> {
    let mut c = gamma(&*build_colored(w, variant)?);
    c.weight = w.len();
    Ok(c)
}

fn max_var(c: &ParametrizedCycle) -> Var {
    c.terms
        .keys()
        .flat_map(|t| t.iter().flat_map(|f| f.vars()))
        .max()
        .unwrap_or(T)
}

/// Product of cycles: concatenated tuples over the same `t`, with the
/// variables of `b` shifted past those of `a`.
pub fn product(a: &ParametrizedCycle, b: &ParametrizedCycle) -> ParametrizedCycle {
    let shift = max_var(a);
    let rename = move |v: Var| if v == T { T } else { v + shift };
    let mut terms = LinComb::new();
    for (ta, ca) in a.terms.iter() {
        for (tb, cb) in b.terms.iter() {
            let mut t = ta.clone();
            t.extend(tb.iter().map(|f| f.rename(&rename)));
            terms.add(t, ca * cb);
        }
    }
    ParametrizedCycle {
        weight: a.weight + b.weight,
        terms,
    }
}

/// True iff every term has a coordinate identically `1` once `t = t0`.
pub fn fiber_empty_at(c: &ParametrizedCycle, t0: i64) -> bool {
    let point = Rational::constant(t0);
    let one = Rational::constant(1);
    c.terms
        .keys()
        .all(|term| term.iter().any(|f| f.substitute(T, &point).as_ref() == Some(&one)))
}

// Preference order of the variables to eliminate from coordinate `i`.
fn solve_candidates(term: &Term, i: usize) -> Vec<Var> {
    let earlier: BTreeSet<Var> = term[..i].iter().flat_map(|f| f.vars()).collect();
    let own: Vec<Var> = term[i].vars().into_iter().filter(|&v| v != T).collect();
    let mut out: Vec<Var> = own.iter().rev().copied().filter(|v| !earlier.contains(v)).collect();
    out.extend(own.iter().rev().copied().filter(|v| earlier.contains(v)));
    out
}

// Restricts `term` to the face `f_i = ε`, or `None` when the face is empty or
// the restriction is degenerate.
fn restrict(term: &Term, i: usize, at_infinity: bool) -> Result<Option<Term>> {
    let f = &term[i];
    let mut solution = None;
    for v in solve_candidates(term, i) {
        if let Some(value) = f.solve(v, at_infinity)? {
            solution = Some((v, value));
            break;
        }
    }
    let Some((v, value)) = solution else { return Ok(None) };
    let one = Rational::constant(1);
    let mut out = Vec::with_capacity(term.len() - 1);
    for (j, g) in term.iter().enumerate() {
        if j == i {
            continue;
        }
        let Some(h) = g.substitute(v, &value) else {
            return Ok(None);
        };
        if h == one || h.is_zero() {
            return Ok(None);
        }
        out.push(h);
    }
    let distinct: BTreeSet<&Rational> = out.iter().collect();
    if distinct.len() < out.len() {
        return Ok(None);
    }
    Ok(Some(out))
}

/// `∂ = Σ_i (−1)^{i−1} (∂_i^0 − ∂_i^∞)`, with `t` never eliminated. Terms
/// that meet `{1}`, lie in a face or repeat a coordinate are dropped; the
/// result is canonicalized.
pub fn boundary(c: &ParametrizedCycle) -> Result<ParametrizedCycle> {
    let mut terms = LinComb::new();
    for (term, coeff) in c.terms.iter() {
        for i in 0..term.len() {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            for (at_infinity, face_sign) in [(false, 1), (true, -1)] {
                if let Some(r) = restrict(term, i, at_infinity)? {
                    terms.add(canonical_term(&r), coeff * q(sign * face_sign));
                }
            }
        }
    }
    Ok(ParametrizedCycle {
        weight: c.weight,
        terms,
    })
}

/// The right-hand side of the differential system for `L_W` or `L¹_W`.
pub fn expected_boundary(w: &LyndonWord, variant: Variant) -> Result<ParametrizedCycle> {
    let t = tables(w)?;
    let mut acc = ParametrizedCycle {
        weight: w.len(),
        terms: LinComb::new(),
    };
    let mut push = |c: &Q, u: (&LyndonWord, Variant), v: (&LyndonWord, Variant)| -> Result<()> {
        let p = product(&cycle(u.0, u.1)?, &cycle(v.0, v.1)?).canonical();
        acc.terms.add_scaled(&p.terms, c);
        Ok(())
    };
    match variant {
        Variant::Plain => {
            for ((u, v), c) in t.a.entries() {
                push(c, (u, Variant::Plain), (v, Variant::Plain))?;
            }
            for ((u, v), c) in t.b.entries() {
                push(c, (u, Variant::Plain), (v, Variant::One))?;
            }
        }
        Variant::One => {
            for ((u, v), c) in t.ap.entries() {
                let inner = if u.is_zero_letter() {
                    Variant::Plain
                } else {
                    Variant::One
                };
                push(c, (u, inner), (v, inner))?;
            }
            for ((u, v), c) in t.bp.entries() {
                push(c, (u, Variant::Plain), (v, Variant::One))?;
            }
        }
    }
    Ok(acc)
}

#[derive(Clone)]
struct AltState {
    used: Vec<bool>,
    order: Vec<usize>,
    map: Vec<(Var, Var)>,
}

impl AltState {
    fn lookup(&self, v: Var) -> Option<Var> {
        self.map.iter().find(|(old, _)| *old == v).map(|&(_, new)| new)
    }
}

fn permutation_sign(order: &[usize]) -> i64 {
    let mut inversions = 0;
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            if order[i] > order[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Representative of `term` up to coordinate permutations, which act by
/// their sign, and renaming of the `x` variables. `None` when the term is
/// equal to minus itself and so vanishes after alternation.
pub fn alt_canonical(term: &Term) -> Option<(Term, i64)> {
    let n = term.len();
    let mut states = vec![AltState {
        used: vec![false; n],
        order: Vec::new(),
        map: Vec::new(),
    }];
    let mut out: Term = Vec::with_capacity(n);
    for _ in 0..n {
        let mut best: Option<Rational> = None;
        let mut next: Vec<AltState> = Vec::new();
        for s in &states {
            for j in (0..n).filter(|&j| !s.used[j]) {
                let fresh: Vec<Var> = term[j]
                    .vars()
                    .into_iter()
                    .filter(|&v| v != T && s.lookup(v).is_none())
                    .collect();
                for perm in permutations(&fresh) {
                    let mut st = s.clone();
                    for v in perm {
                        let new = st.map.len() as Var + 1;
                        st.map.push((v, new));
                    }
                    let renamed = term[j].rename(&|v| st.lookup(v).unwrap_or(v));
                    let better = match &best {
                        None => true,
                        Some(b) => renamed < *b,
                    };
                    if better {
                        best = Some(renamed.clone());
                        next.clear();
                    }
                    if best.as_ref() == Some(&renamed) {
                        st.used[j] = true;
                        st.order.push(j);
                        next.push(st);
                    }
                }
            }
        }
        out.push(best.expect("coordinates remain"));
        states = next;
    }
    let signs: BTreeSet<i64> = states.iter().map(|s| permutation_sign(&s.order)).collect();
    match signs.len() {
        1 => Some((out, *signs.iter().next().unwrap())),
        _ => None,
    }
}

impl ParametrizedCycle {
    /// Every term replaced by its [`alt_canonical`] representative.
    pub fn alt_canonical(&self) -> Self {
        let mut terms = LinComb::new();
        for (term, c) in self.terms.iter() {
            if let Some((t, s)) = alt_canonical(term) {
                terms.add(t, c * q(s));
            }
        }
        Self {
            weight: self.weight,
            terms,
        }
    }
}

/// Outcome of comparing `∂(L_W)` or `∂(L¹_W)` with its expected value.
#[derive(Clone, Debug)]
pub struct DifferentialCheck {
    /// `∂(cycle) − expected` with terms compared as tuples.
    pub termwise: ParametrizedCycle,
    /// The same difference after alternation.
    pub alternated: ParametrizedCycle,
}

impl DifferentialCheck {
    pub fn holds(&self) -> bool {
        self.alternated.is_empty()
    }
}

/// Compares the boundary of the cycle with the right-hand side of its
/// differential system.
pub fn check_cycle_differential(w: &LyndonWord, variant: Variant) -> Result<DifferentialCheck> {
    let lhs = boundary(&cycle(w, variant)?)?;
    let rhs = expected_boundary(w, variant)?;
    let termwise = ParametrizedCycle {
        weight: w.len(),
        terms: &lhs.terms - &rhs.terms,
    };
    let alternated = termwise.alt_canonical();
    Ok(DifferentialCheck { termwise, alternated })
}

/// True iff the boundary of the cycle equals the expected right-hand side
/// after alternation.
pub fn verify_cycle_differential(w: &LyndonWord, variant: Variant) -> Result<bool> {
    Ok(check_cycle_differential(w, variant)?.holds())
}

/// Serialized form of a cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleJson {
    pub word: String,
    pub variant: String,
    pub weight: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub functions: Vec<String>,
}

impl CycleJson {
    pub fn new(w: &LyndonWord, variant: Variant, c: &ParametrizedCycle) -> Self {
        let terms = c
            .terms
            .iter()
            .map(|(term, coeff)| TermJson {
                coeff: fmt_q(coeff),
                functions: term.iter().map(ToString::to_string).collect(),
            })
            .collect();
        Self {
            word: w.to_string(),
            variant: variant.to_string(),
            weight: c.weight,
            terms,
        }
    }

    pub fn to_cycle(&self) -> Result<ParametrizedCycle> {
        let mut terms = LinComb::new();
        for t in &self.terms {
            let f = t.functions.iter().map(|s| s.parse()).collect::<Result<Term>>()?;
            if f.len() + 1 != 2 * self.weight {
                return Err(Error::Parse(format!("expected {} coordinates", 2 * self.weight - 1)));
            }
            terms.add(f, parse_q(&t.coeff)?);
        }
        Ok(ParametrizedCycle {
            weight: self.weight,
            terms,
        })
    }
}

/// Pretty form, e.g. `L_01 = [t; 1-t/x1, x1, 1-x1]`.
pub fn pretty(w: &LyndonWord, variant: Variant, c: &ParametrizedCycle) -> String {
    let sup = if variant == Variant::One { "¹" } else { "" };
    let body = c.to_string().replace('\n', "\n    ");
    format!("L{sup}_{w} = {body}")
}
