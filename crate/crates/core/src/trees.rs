//! Rooted planar trivalent trees with leaves in `{0,1}`, the Lyndon Hall set
//! and the `Dec` rewriting into the Lyndon bracket basis.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::words::{self, LyndonWord};
use crate::{q, Error, LinComb, Result};

/// A trivalent tree; the root vertex is implicit above the top node.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tree {
    Leaf(u8),
    Node(Box<Tree>, Box<Tree>),
}

/// Rational combination of trivalent trees.
pub type TreeLinComb = LinComb<Tree>;
/// Element of the free Lie algebra in the Lyndon bracket basis.
pub type LieElement = LinComb<LyndonWord>;
/// Coefficients `c^{T,k}` indexed by (result tree, tracked leaf position).
pub type TrackedDecomposition = LinComb<(Tree, usize)>;

// Internally a tracked leaf carries bit 1 of its value; the letter is bit 0.
const MARK: u8 = 2;

impl Tree {
    pub fn leaf(d: u8) -> Self {
        assert!(d <= 1, "leaf decoration out of alphabet");
        Tree::Leaf(d)
    }

    /// Number of leaves.
    pub fn weight(&self) -> usize {
        match self {
            Tree::Leaf(_) => 1,
            Tree::Node(a, b) => a.weight() + b.weight(),
        }
    }

    /// Leaf decorations read left to right.
    pub fn foliage(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8);
        self.push_foliage(&mut out);
        out
    }

    fn push_foliage(&self, out: &mut Vec<u8>) {
        match self {
            Tree::Leaf(d) => out.push(d & 1),
            Tree::Node(a, b) => {
                a.push_foliage(out);
                b.push_foliage(out);
            }
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Tree::Leaf(_))
    }

    /// Children of an internal node.
    pub fn children(&self) -> Option<(&Tree, &Tree)> {
        match self {
            Tree::Leaf(_) => None,
            Tree::Node(a, b) => Some((a, b)),
        }
    }

    fn mark_leaf(&self, pos: usize) -> Tree {
        fn go(t: &Tree, pos: usize, seen: &mut usize) -> Tree {
            match t {
                Tree::Leaf(d) => {
                    *seen += 1;
                    Tree::Leaf(if *seen == pos { d | MARK } else { *d })
                }
                Tree::Node(a, b) => {
                    let a = go(a, pos, seen);
                    Tree::Node(Box::new(a), Box::new(go(b, pos, seen)))
                }
            }
        }
        go(self, pos, &mut 0)
    }

    fn split_mark(&self) -> (Tree, Option<usize>) {
        fn go(t: &Tree, seen: &mut usize, found: &mut Option<usize>) -> Tree {
            match t {
                Tree::Leaf(d) => {
                    *seen += 1;
                    if d & MARK != 0 {
                        *found = Some(*seen);
                    }
                    Tree::Leaf(d & 1)
                }
                Tree::Node(a, b) => {
                    let a = go(a, seen, found);
                    Tree::Node(Box::new(a), Box::new(go(b, seen, found)))
                }
            }
        }
        let mut found = None;
        let t = go(self, &mut 0, &mut found);
        (t, found)
    }
}

/// `left ∧ right`: join both roots under a new root.
pub fn graft(left: Tree, right: Tree) -> Tree {
    Tree::Node(Box::new(left), Box::new(right))
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Leaf(d) => write!(f, "{}", d & 1),
            Tree::Node(a, b) => write!(f, "[{a},{b}]"),
        }
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Tree {
    type Err = Error;

    /// Parses the bracket notation `[[0,1],1]`.
    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let t = parse_tree(&chars, &mut pos)?;
        if pos != chars.len() {
            return Err(Error::Parse(format!("trailing input in tree {s:?}")));
        }
        Ok(t)
    }
}

fn parse_tree(c: &[char], pos: &mut usize) -> Result<Tree> {
    let err = |m: &str, at: usize| Error::Parse(format!("tree: {m} at offset {at}"));
    match c.get(*pos) {
        Some('0') | Some('1') => {
            *pos += 1;
            Ok(Tree::Leaf(if c[*pos - 1] == '0' { 0 } else { 1 }))
        }
        Some('[') => {
            *pos += 1;
            let a = parse_tree(c, pos)?;
            if c.get(*pos) != Some(&',') {
                return Err(err("expected ','", *pos));
            }
            *pos += 1;
            let b = parse_tree(c, pos)?;
            if c.get(*pos) != Some(&']') {
                return Err(err("expected ']'", *pos));
            }
            *pos += 1;
            Ok(graft(a, b))
        }
        _ => Err(err("unexpected token", *pos)),
    }
}

/// Total order on trees extending the Hall order: compare foliage words,
/// then the left and the right subtrees. Distinct Hall trees have distinct
/// Lyndon foliage, so on the Hall set this is the Lyndon order.
pub fn tree_cmp(a: &Tree, b: &Tree) -> Ordering {
    a.foliage().cmp(&b.foliage()).then_with(|| match (a, b) {
        (Tree::Node(a1, a2), Tree::Node(b1, b2)) => tree_cmp(a1, b1).then_with(|| tree_cmp(a2, b2)),
        _ => Ordering::Equal,
    })
}

/// `τ_W`: the bracketing of `W` by repeated standard factorization.
pub fn lyndon_tree(word: &LyndonWord) -> Tree {
    match words::standard_factorization(word) {
        Err(_) => Tree::Leaf(word.letters()[0]),
        Ok((u, v)) => graft(lyndon_tree(&u), lyndon_tree(&v)),
    }
}

/// Foliage of `t` if `t` is in the Lyndon Hall set.
fn hall_foliage(t: &Tree) -> Option<Vec<u8>> {
    match t {
        Tree::Leaf(d) => Some(vec![d & 1]),
        Tree::Node(a, b) => {
            let wa = hall_foliage(a)?;
            let wb = hall_foliage(b)?;
            hall_join(a, wa, wb)
        }
    }
}

fn hall_join(a: &Tree, mut wa: Vec<u8>, wb: Vec<u8>) -> Option<Vec<u8>> {
    if wa >= wb {
        return None;
    }
    if let Tree::Node(_, t2) = a {
        if t2.foliage() < wb {
            return None;
        }
    }
    wa.extend(wb);
    Some(wa)
}

/// True iff `tree = τ_W` for some Lyndon word `W`.
pub fn is_hall(tree: &Tree) -> bool {
    hall_foliage(tree).is_some()
}

/// Swaps children until every node has left < right, tracking the sign.
/// Returns `None` if some node has two equal subtrees.
pub fn normalize_sign(tree: &Tree) -> Option<(Tree, i32)> {
    match tree {
        Tree::Leaf(d) => Some((Tree::Leaf(d & 1), 1)),
        Tree::Node(a, b) => {
            let (a, sa) = normalize_sign(a)?;
            let (b, sb) = normalize_sign(b)?;
            match tree_cmp(&a, &b) {
                Ordering::Equal => None,
                Ordering::Less => Some((graft(a, b), sa * sb)),
                Ordering::Greater => Some((graft(b, a), -sa * sb)),
            }
        }
    }
}

/// True iff `tree` is in `B^<`.
pub fn is_b_less(tree: &Tree) -> bool {
    matches!(normalize_sign(tree), Some((t, 1)) if &t == tree)
}

/// True iff some node of `tree` has two equal subtrees.
pub fn has_symmetric_subtree(tree: &Tree) -> bool {
    match tree {
        Tree::Leaf(_) => false,
        Tree::Node(a, b) => tree_cmp(a, b) == Ordering::Equal || has_symmetric_subtree(a) || has_symmetric_subtree(b),
    }
}

enum Scan {
    Hall(Vec<u8>),
    Symmetric,
    Rewrite(Vec<(Tree, i64)>),
}

/// Locates the first non-Hall node in post-order and rewrites it once.
fn scan(t: &Tree) -> Scan {
    let (a, b) = match t {
        Tree::Leaf(d) => return Scan::Hall(vec![d & 1]),
        Tree::Node(a, b) => (a, b),
    };
    let wa = match scan(a) {
        Scan::Hall(w) => w,
        Scan::Symmetric => return Scan::Symmetric,
        Scan::Rewrite(v) => return Scan::Rewrite(v.into_iter().map(|(x, s)| (graft(x, (**b).clone()), s)).collect()),
    };
    let wb = match scan(b) {
        Scan::Hall(w) => w,
        Scan::Symmetric => return Scan::Symmetric,
        Scan::Rewrite(v) => return Scan::Rewrite(v.into_iter().map(|(x, s)| (graft((**a).clone(), x), s)).collect()),
    };
    match wa.cmp(&wb) {
        Ordering::Equal => Scan::Symmetric,
        Ordering::Greater => Scan::Rewrite(vec![(graft((**b).clone(), (**a).clone()), -1)]),
        Ordering::Less => match hall_join(a, wa, wb) {
            Some(w) => Scan::Hall(w),
            None => {
                // a = t1 ∧ t2 with t2 < b: [[t1,t2],b] = [[t1,b],t2] + [t1,[t2,b]].
                let (t1, t2) = a.children().expect("a letter always satisfies the Hall condition");
                let (t1, t2, b) = (t1.clone(), t2.clone(), (**b).clone());
                Scan::Rewrite(vec![
                    (graft(graft(t1.clone(), b.clone()), t2.clone()), 1),
                    (graft(t1, graft(t2, b)), 1),
                ])
            }
        },
    }
}

/// Runs `Dec` to its fixed point. Returns the stabilized combination and the
/// number of rewriting rounds.
fn run_dec(start: Tree, keep_symmetric: bool) -> (TreeLinComb, usize) {
    let mut pending = TreeLinComb::single(start, q(1));
    let mut done = TreeLinComb::new();
    let mut rounds = 0;
    while !pending.is_zero() {
        rounds += 1;
        let mut next = TreeLinComb::new();
        for (t, c) in pending.iter() {
            match scan(t) {
                Scan::Hall(_) => done.add(t.clone(), c.clone()),
                Scan::Symmetric => {
                    if keep_symmetric {
                        done.add(t.clone(), c.clone());
                    }
                }
                Scan::Rewrite(v) => {
                    for (x, s) in v {
                        next.add(x, c * q(s));
                    }
                }
            }
        }
        pending = next;
    }
    (done, rounds)
}

/// Number of `Dec` rounds needed to reach the fixed point.
pub fn dec_rounds(tree: &Tree) -> usize {
    run_dec(tree.clone(), false).1
}

/// Coefficients of `[tree]` in the Lyndon bracket basis.
pub fn decompose(tree: &Tree) -> LieElement {
    let (done, _) = run_dec(tree.clone(), false);
    done.iter()
        .map(|(t, c)| (LyndonWord::from_hall_foliage(t.foliage()), c.clone()))
        .collect()
}

/// Linear extension of [`decompose`].
pub fn decompose_lin(comb: &TreeLinComb) -> LieElement {
    comb.map_linear(decompose)
}

/// `Dec` started at `(tree, 1, leaf_position)`, regrouped by result tree and
/// tracked position. Terms frozen at a symmetric subtree are kept, so the
/// result also carries the `B^=` contributions.
pub fn decompose_tracked(tree: &Tree, leaf_position: usize) -> Result<TrackedDecomposition> {
    let leaves = tree.weight();
    if leaf_position == 0 || leaf_position > leaves {
        return Err(Error::LeafPosition {
            pos: leaf_position,
            leaves,
        });
    }
    let (done, _) = run_dec(tree.mark_leaf(leaf_position), true);
    Ok(done
        .iter()
        .map(|(t, c)| {
            let (t, k) = t.split_mark();
            ((t, k.expect("the tracked leaf survives rewriting")), c.clone())
        })
        .collect())
}

/// `[[U],[V]] = Σ α^W_{U,V} [W]` for `U < V`.
pub fn bracket_expand(u: &LyndonWord, v: &LyndonWord) -> Result<LieElement> {
    if u >= v {
        return Err(Error::Unordered(u.to_string(), v.to_string()));
    }
    Ok(decompose(&graft(lyndon_tree(u), lyndon_tree(v))))
}

/// All planar trivalent trees with `n` leaves in `{0,1}`.
pub fn all_trees(n: usize) -> Vec<Tree> {
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![Tree::Leaf(0), Tree::Leaf(1)];
    }
    let mut out = Vec::new();
    for k in 1..n {
        let left = all_trees(k);
        let right = all_trees(n - k);
        for a in &left {
            for b in &right {
                out.push(graft(a.clone(), b.clone()));
            }
        }
    }
    out
}

/// All trees of `B^<` with `n` leaves, sorted by structural key.
pub fn b_less_trees(n: usize) -> Vec<Tree> {
    fn go(n: usize) -> Vec<Tree> {
        if n == 1 {
            return vec![Tree::Leaf(0), Tree::Leaf(1)];
        }
        let mut out = Vec::new();
        for k in 1..n {
            let right = go(n - k);
            for a in go(k) {
                for b in &right {
                    if tree_cmp(&a, b) == Ordering::Less {
                        out.push(graft(a.clone(), b.clone()));
                    }
                }
            }
        }
        out
    }
    if n == 0 {
        return Vec::new();
    }
    let mut out = go(n);
    out.sort();
    out
}

/// Replaces leaf `pos` (1-based) of `tree` by `sub`.
pub(crate) fn replace_leaf(tree: &Tree, pos: usize, sub: &Tree) -> Tree {
    fn go(t: &Tree, pos: usize, sub: &Tree, seen: &mut usize) -> Tree {
        match t {
            Tree::Leaf(d) => {
                *seen += 1;
                if *seen == pos {
                    sub.clone()
                } else {
                    Tree::Leaf(*d)
                }
            }
            Tree::Node(a, b) => {
                let a = go(a, pos, sub, seen);
                graft(a, go(b, pos, sub, seen))
            }
        }
    }
    go(tree, pos, sub, &mut 0)
}

impl LyndonWord {
    /// Wraps the foliage of a Hall tree, which is Lyndon by construction.
    pub(crate) fn from_hall_foliage(letters: Vec<u8>) -> Self {
        debug_assert!(words::is_lyndon(&letters));
        LyndonWord::new(letters).expect("Hall foliage is Lyndon")
    }
}
