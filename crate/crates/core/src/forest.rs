//! Decorated forests with the differential `d_cy`.
//!
//! A tree has a root vertex decorated `t` or `1`, a planted body whose
//! leaves are decorated `0` or `1`, and an edge numbering. Forests are
//! graded-commutative products of trees. Changing the numbering by a
//! permutation multiplies by its sign, so every term is stored with the
//! canonical numbering: children and factors sorted by structural key, edges
//! numbered depth-first from the root edge. Trees with an automorphism that
//! permutes the edges oddly are zero, as are trees rooted at `0` and the
//! one-edge tree `1 → 0`.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::coeffs::{CoeffTable, Kind};
use crate::dual::{dual_tree, memo, ordered_pairs, DualTreeSum, Pair};
use crate::linalg::solve_columns;
use crate::trees::Tree;
use crate::words::{generate_lyndon, LyndonWord};
use crate::{q, Error, LinComb, Result};

/// Decoration of a root vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RootDeco {
    T,
    One,
}

/// Body of a decorated tree; each node is the target of one edge.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    Leaf(u8),
    Inner(Vec<Node>),
}

impl Node {
    /// Edges of the planted subtree, including the edge into this node.
    pub fn edges(&self) -> usize {
        match self {
            Node::Leaf(_) => 1,
            Node::Inner(ch) => 1 + ch.iter().map(Node::edges).sum::<usize>(),
        }
    }

    pub fn leaves(&self) -> usize {
        match self {
            Node::Leaf(_) => 1,
            Node::Inner(ch) => ch.iter().map(Node::leaves).sum(),
        }
    }
}

/// A rooted decorated tree in canonical form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DecoTree {
    pub root: RootDeco,
    pub top: Node,
}

impl DecoTree {
    pub fn edges(&self) -> usize {
        self.top.edges()
    }

    pub fn weight(&self) -> usize {
        self.top.leaves()
    }
}

/// A product of decorated trees in canonical order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Forest(pub Vec<DecoTree>);

impl Forest {
    pub fn edges(&self) -> usize {
        self.0.iter().map(DecoTree::edges).sum()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().map(DecoTree::weight).sum()
    }

    /// Cohomological degree `2·wt − |E|`.
    pub fn degree(&self) -> i64 {
        2 * self.weight() as i64 - self.edges() as i64
    }
}

/// Rational combination of canonical forests.
pub type ForestLinComb = LinComb<Forest>;

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Leaf(d) => write!(f, "{d}"),
            Node::Inner(ch) => {
                f.write_str("[")?;
                for (i, c) in ch.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str("]")
            }
        }
    }
}

impl fmt::Display for DecoTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = match self.root {
            RootDeco::T => "t",
            RootDeco::One => "1",
        };
        write!(f, "{r}>{}", self.top)
    }
}

impl fmt::Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("()");
        }
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" * ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Which kind of edge a contraction acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeClass {
    Root,
    Internal,
    Leaf0,
    Leaf1,
}

/// Selects the edges summed over by [`d_cy_part`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeFilter {
    All,
    Only(EdgeClass),
}

impl EdgeFilter {
    fn admits(self, class: EdgeClass) -> bool {
        match self {
            EdgeFilter::All => true,
            EdgeFilter::Only(c) => c == class,
        }
    }
}

// Working representation: every node carries the label of its incoming edge.
#[derive(Clone, Debug)]
struct LNode {
    label: u32,
    kind: LKind,
}

#[derive(Clone, Debug)]
enum LKind {
    Leaf(u8),
    Inner(Vec<LNode>),
}

#[derive(Clone, Debug)]
struct LTree {
    // `None` stands for a root decorated 0.
    root: Option<RootDeco>,
    top: LNode,
}

fn root_of_letter(d: u8) -> Option<RootDeco> {
    (d == 1).then_some(RootDeco::One)
}

fn label_node(n: &Node, next: &mut u32) -> LNode {
    *next += 1;
    let label = *next;
    let kind = match n {
        Node::Leaf(d) => LKind::Leaf(*d),
        Node::Inner(ch) => LKind::Inner(ch.iter().map(|c| label_node(c, next)).collect()),
    };
    LNode { label, kind }
}

fn label_trivalent(t: &Tree, next: &mut u32) -> LNode {
    *next += 1;
    let label = *next;
    let kind = match t {
        Tree::Leaf(d) => LKind::Leaf(*d),
        Tree::Node(a, b) => {
            let a = label_trivalent(a, next);
            LKind::Inner(vec![a, label_trivalent(b, next)])
        }
    };
    LNode { label, kind }
}

fn label_forest(f: &Forest, next: &mut u32) -> Vec<LTree> {
    f.0.iter()
        .map(|t| LTree {
            root: Some(t.root),
            top: label_node(&t.top, next),
        })
        .collect()
}

fn canon_node(n: &LNode) -> Option<(Node, Vec<u32>)> {
    match &n.kind {
        LKind::Leaf(d) => Some((Node::Leaf(*d), vec![n.label])),
        LKind::Inner(ch) => {
            let mut kids = ch.iter().map(canon_node).collect::<Option<Vec<_>>>()?;
            kids.sort_by(|a, b| a.0.cmp(&b.0));
            if kids.windows(2).any(|w| w[0].0 == w[1].0 && w[0].0.edges() % 2 == 1) {
                return None;
            }
            let mut labels = vec![n.label];
            let mut nodes = Vec::with_capacity(kids.len());
            for (node, ls) in kids {
                labels.extend(ls);
                nodes.push(node);
            }
            Some((Node::Inner(nodes), labels))
        }
    }
}

fn permutation_sign(labels: &[u32]) -> i64 {
    let mut inversions = 0usize;
    for i in 0..labels.len() {
        for j in i + 1..labels.len() {
            if labels[i] > labels[j] {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Canonical form of a labeled product and the sign relating the labeled
/// numbering to the canonical one; `None` if the product vanishes.
fn canonicalize(trees: &[LTree]) -> Option<(Forest, i64)> {
    let mut items = Vec::with_capacity(trees.len());
    for lt in trees {
        let root = lt.root?;
        let (top, labels) = canon_node(&lt.top)?;
        if root == RootDeco::One && top == Node::Leaf(0) {
            return None;
        }
        items.push((DecoTree { root, top }, labels));
    }
    items.sort_by(|a, b| a.0.cmp(&b.0));
    if items.windows(2).any(|w| w[0].0 == w[1].0 && w[0].0.edges() % 2 == 1) {
        return None;
    }
    let mut labels = Vec::new();
    let mut forest = Vec::with_capacity(items.len());
    for (t, ls) in items {
        labels.extend(ls);
        forest.push(t);
    }
    Some((Forest(forest), permutation_sign(&labels)))
}

fn add_canonical(out: &mut ForestLinComb, trees: &[LTree], coeff: crate::Q) {
    if let Some((f, s)) = canonicalize(trees) {
        out.add(f, coeff * q(s));
    }
}

fn edge_class(t: &LTree, label: u32) -> Option<EdgeClass> {
    fn go(n: &LNode, label: u32) -> Option<EdgeClass> {
        let LKind::Inner(ch) = &n.kind else { return None };
        for c in ch {
            if c.label == label {
                return Some(match c.kind {
                    LKind::Inner(_) => EdgeClass::Internal,
                    LKind::Leaf(0) => EdgeClass::Leaf0,
                    LKind::Leaf(_) => EdgeClass::Leaf1,
                });
            }
            if let Some(k) = go(c, label) {
                return Some(k);
            }
        }
        None
    }
    if t.top.label == label {
        Some(EdgeClass::Root)
    } else {
        go(&t.top, label)
    }
}

/// Result of contracting one edge of a labeled tree.
enum Contraction {
    /// The tree had a single edge; its contraction is the empty forest.
    Empty,
    Pieces(Vec<LTree>),
}

fn contract_labeled(t: &LTree, label: u32) -> Option<Contraction> {
    // Returns the rebuilt node and the pieces split off below it.
    fn go(n: &LNode, label: u32) -> Option<(LNode, Vec<LTree>)> {
        let LKind::Inner(ch) = &n.kind else { return None };
        for (i, c) in ch.iter().enumerate() {
            if c.label == label {
                return Some(match &c.kind {
                    LKind::Inner(grand) => {
                        let mut merged = ch[..i].to_vec();
                        merged.extend(grand.iter().cloned());
                        merged.extend(ch[i + 1..].iter().cloned());
                        (
                            LNode {
                                label: n.label,
                                kind: LKind::Inner(merged),
                            },
                            Vec::new(),
                        )
                    }
                    LKind::Leaf(d) => {
                        let root = root_of_letter(*d);
                        let pieces = ch
                            .iter()
                            .enumerate()
                            .filter(|&(k, _)| k != i)
                            .map(|(_, other)| LTree {
                                root,
                                top: other.clone(),
                            })
                            .collect();
                        (
                            LNode {
                                label: n.label,
                                kind: LKind::Leaf(*d),
                            },
                            pieces,
                        )
                    }
                });
            }
            if let Some((new_c, pieces)) = go(c, label) {
                let mut kids = ch.clone();
                kids[i] = new_c;
                return Some((
                    LNode {
                        label: n.label,
                        kind: LKind::Inner(kids),
                    },
                    pieces,
                ));
            }
        }
        None
    }
    if t.top.label == label {
        return Some(match &t.top.kind {
            LKind::Leaf(_) => Contraction::Empty,
            LKind::Inner(ch) => Contraction::Pieces(
                ch.iter()
                    .map(|c| LTree {
                        root: t.root,
                        top: c.clone(),
                    })
                    .collect(),
            ),
        });
    }
    let (top, mut pieces) = go(&t.top, label)?;
    pieces.insert(0, LTree { root: t.root, top });
    Some(Contraction::Pieces(pieces))
}

/// Contracts edge `edge` (canonical numbering, from 1) of `tree` and splits
/// at the merged vertex when it is the root or a leaf. The pieces keep the
/// induced numbering and are returned in canonical form.
pub fn contract(tree: &DecoTree, edge: usize) -> Result<ForestLinComb> {
    if edge == 0 || edge > tree.edges() {
        return Err(Error::UnknownEdge(edge));
    }
    let lt = LTree {
        root: Some(tree.root),
        top: label_node(&tree.top, &mut 0),
    };
    let mut out = ForestLinComb::new();
    match contract_labeled(&lt, edge as u32).expect("edge exists") {
        Contraction::Empty => out.add(Forest::default(), q(1)),
        Contraction::Pieces(p) => add_canonical(&mut out, &p, q(1)),
    }
    Ok(out)
}

/// Class of edge `edge` (canonical numbering) of `tree`.
pub fn classify_edge(tree: &DecoTree, edge: usize) -> Result<EdgeClass> {
    let lt = LTree {
        root: Some(tree.root),
        top: label_node(&tree.top, &mut 0),
    };
    edge_class(&lt, edge as u32).ok_or(Error::UnknownEdge(edge))
}

/// `d_cy = Σ_e (−1)^{ω(e)−1} (F/e)` over all edges of every factor.
pub fn d_cy(input: &ForestLinComb) -> ForestLinComb {
    d_cy_part(input, EdgeFilter::All)
}

/// The part of `d_cy` contracting only the edges admitted by `filter`.
pub fn d_cy_part(input: &ForestLinComb, filter: EdgeFilter) -> ForestLinComb {
    let mut out = ForestLinComb::new();
    for (forest, c) in input.iter() {
        let labeled = label_forest(forest, &mut 0);
        let mut first = 1u32;
        for (ti, lt) in labeled.iter().enumerate() {
            let count = forest.0[ti].edges() as u32;
            // Trees with a single edge are killed by the differential.
            if count > 1 {
                for label in first..first + count {
                    let class = edge_class(lt, label).expect("label in tree");
                    if !filter.admits(class) {
                        continue;
                    }
                    let Some(Contraction::Pieces(pieces)) = contract_labeled(lt, label) else {
                        continue;
                    };
                    let mut trees: Vec<LTree> = Vec::with_capacity(labeled.len() + pieces.len());
                    trees.extend(labeled[..ti].iter().cloned());
                    trees.extend(pieces);
                    trees.extend(labeled[ti + 1..].iter().cloned());
                    let sign = if (label - 1) % 2 == 0 { 1 } else { -1 };
                    add_canonical(&mut out, &trees, c * q(sign));
                }
            }
            first += count;
        }
    }
    out
}

/// Graded-commutative product.
pub fn product(a: &ForestLinComb, b: &ForestLinComb) -> ForestLinComb {
    let mut out = ForestLinComb::new();
    for (fa, ca) in a.iter() {
        for (fb, cb) in b.iter() {
            let mut next = 0;
            let mut trees = label_forest(fa, &mut next);
            trees.extend(label_forest(fb, &mut next));
            add_canonical(&mut out, &trees, ca * cb);
        }
    }
    out
}

/// `φ_t(T_W)` or `φ_1(T_W) = T_W(1)`: each trivalent tree with the requested
/// root decoration and its canonical numbering.
pub fn embed_dual(sum: &DualTreeSum, root: RootDeco) -> ForestLinComb {
    let mut out = ForestLinComb::new();
    for (t, c) in sum.combination.iter() {
        let lt = LTree {
            root: Some(root),
            top: label_trivalent(t, &mut 0),
        };
        add_canonical(&mut out, &[lt], c.clone());
    }
    out
}

type EmbeddedCache = std::sync::Mutex<std::collections::HashMap<(LyndonWord, RootDeco), Arc<ForestLinComb>>>;

static EMBEDDED: OnceLock<EmbeddedCache> = OnceLock::new();

/// Memoized `φ_root(T_W)`.
pub fn embedded(w: &LyndonWord, root: RootDeco) -> Arc<ForestLinComb> {
    memo(&EMBEDDED, &(w.clone(), root), || {
        Arc::new(embed_dual(&dual_tree(w), root))
    })
}

/// The product `T_U · T_V`.
pub fn t_product(u: &LyndonWord, v: &LyndonWord) -> ForestLinComb {
    product(&embedded(u, RootDeco::T), &embedded(v, RootDeco::T))
}

/// The product `T_U · T_V(1)`.
pub fn t_product_one(u: &LyndonWord, v: &LyndonWord) -> ForestLinComb {
    product(&embedded(u, RootDeco::T), &embedded(v, RootDeco::One))
}

/// Pairs `(U, V)` with `|U| + |V| = n` and `V ≠ 0`, all orders.
pub fn beta_pairs(n: usize) -> Vec<Pair> {
    let words = generate_lyndon(n.saturating_sub(1));
    let mut out = Vec::new();
    for u in &words {
        for v in &words {
            if u.len() + v.len() == n && !v.is_zero_letter() {
                out.push((u.clone(), v.clone()));
            }
        }
    }
    out
}

/// Solves `d_cy(T_W) = Σ_{U<V} α T_U·T_V + Σ β T_U·T_V(1)` exactly.
pub fn extract_alpha_beta(w: &LyndonWord) -> Result<(CoeffTable, CoeffTable)> {
    if w.is_letter() {
        return Err(Error::SingleLetter);
    }
    let target = d_cy(&embedded(w, RootDeco::T));
    let apairs = ordered_pairs(w.len());
    let bpairs = beta_pairs(w.len());
    let mut columns: Vec<ForestLinComb> = apairs.iter().map(|(u, v)| t_product(u, v)).collect();
    columns.extend(bpairs.iter().map(|(u, v)| t_product_one(u, v)));
    let x = solve_columns(&columns, &target).map_err(|e| Error::Inexact(format!("d_cy(T_{w}): {e}")))?;
    let (xa, xb) = x.split_at(apairs.len());
    let alpha = CoeffTable::from_entries(w.clone(), Kind::Alpha, apairs.into_iter().zip(xa.iter().cloned()));
    let beta = CoeffTable::from_entries(w.clone(), Kind::Beta, bpairs.into_iter().zip(xb.iter().cloned()));
    Ok((alpha, beta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::generate_lyndon;
    use proptest::prelude::*;

    fn w(s: &str) -> LyndonWord {
        s.parse().unwrap()
    }

    fn inner(ch: Vec<Node>) -> Node {
        Node::Inner(ch)
    }

    fn tp(u: &str, v: &str) -> ForestLinComb {
        t_product(&w(u), &w(v))
    }

    fn tp1(u: &str, v: &str) -> ForestLinComb {
        t_product_one(&w(u), &w(v))
    }

    fn sum(parts: &[(i64, ForestLinComb)]) -> ForestLinComb {
        let mut out = ForestLinComb::new();
        for (c, p) in parts {
            out.add_scaled(p, &q(*c));
        }
        out
    }

    fn dcy_of(word: &str) -> ForestLinComb {
        d_cy(&embedded(&w(word), RootDeco::T))
    }

    #[test]
    fn embedding_examples() {
        assert!(embedded(&w("0"), RootDeco::One).is_zero());
        let t01 = embedded(&w("01"), RootDeco::T);
        let expected = Forest(vec![DecoTree {
            root: RootDeco::T,
            top: inner(vec![Node::Leaf(0), Node::Leaf(1)]),
        }]);
        assert_eq!(*t01, ForestLinComb::single(expected.clone(), q(1)));
        assert_eq!(expected.edges(), 3);
        let one = embedded(&w("0011"), RootDeco::One);
        assert_eq!(one.len(), 2);
        assert!(one.keys().all(|f| f.0.len() == 1 && f.0[0].root == RootDeco::One));
    }

    #[test]
    fn contracting_the_root_edge_splits_into_planted_pieces() {
        let tree = DecoTree {
            root: RootDeco::T,
            top: inner(vec![
                Node::Leaf(0),
                Node::Leaf(1),
                inner(vec![Node::Leaf(0), Node::Leaf(1)]),
            ]),
        };
        let out = contract(&tree, 1).unwrap();
        assert_eq!(out.len(), 1);
        let (f, _) = out.iter().next().unwrap();
        assert_eq!(f.0.len(), 3);
        assert!(f.0.iter().all(|t| t.root == RootDeco::T));
        assert_eq!(f.edges(), tree.edges() - 1);
    }

    #[test]
    fn contracting_a_leaf_edge_splits_at_the_leaf_decoration() {
        // t > [[0,1], 1, [0,1,1]]: contract the edge into the middle leaf 1.
        let tree = DecoTree {
            root: RootDeco::T,
            top: inner(vec![
                inner(vec![Node::Leaf(0), Node::Leaf(1)]),
                Node::Leaf(1),
                inner(vec![Node::Leaf(0), inner(vec![Node::Leaf(0), Node::Leaf(1)])]),
            ]),
        };
        let edge = (1..=tree.edges())
            .find(|&e| {
                classify_edge(&tree, e).unwrap() == EdgeClass::Leaf1 && {
                    contract(&tree, e).unwrap().keys().any(|f| f.0.len() == 3)
                }
            })
            .expect("a splitting leaf edge");
        let out = contract(&tree, edge).unwrap();
        let (f, _) = out.iter().next().unwrap();
        let roots: Vec<RootDeco> = f.0.iter().map(|t| t.root).collect();
        assert_eq!(roots.iter().filter(|&&r| r == RootDeco::One).count(), 2);
        assert_eq!(roots.iter().filter(|&&r| r == RootDeco::T).count(), 1);
    }

    #[test]
    fn single_edge_contraction_is_empty_and_d_cy_kills_it() {
        let tree = DecoTree {
            root: RootDeco::T,
            top: Node::Leaf(1),
        };
        assert_eq!(
            contract(&tree, 1).unwrap(),
            ForestLinComb::single(Forest::default(), q(1))
        );
        assert!(contract(&tree, 2).is_err());
        assert!(d_cy(&ForestLinComb::single(Forest(vec![tree]), q(1))).is_zero());
    }

    #[test]
    fn zero_relations() {
        let one_zero = LTree {
            root: Some(RootDeco::One),
            top: LNode {
                label: 1,
                kind: LKind::Leaf(0),
            },
        };
        assert!(canonicalize(&[one_zero]).is_none());
        let zero_root = LTree {
            root: None,
            top: LNode {
                label: 1,
                kind: LKind::Leaf(1),
            },
        };
        assert!(canonicalize(&[zero_root]).is_none());
        // Two equal trivalent trees anticommute, so their product vanishes.
        assert!(tp("01", "01").is_zero());
    }

    #[test]
    fn golden_d_cy_decompositions() {
        assert_eq!(dcy_of("01"), tp("0", "1"));
        assert_eq!(dcy_of("011"), sum(&[(1, tp("01", "1")), (1, tp1("1", "01"))]));
        assert_eq!(
            dcy_of("0011"),
            sum(&[
                (1, tp("0", "011")),
                (1, tp("001", "1")),
                (1, tp1("1", "001")),
                (1, tp1("01", "01"))
            ])
        );
        assert_eq!(
            dcy_of("01011"),
            sum(&[
                (1, tp("01", "011")),
                (1, tp("0011", "1")),
                (1, tp1("1", "0011")),
                (2, tp1("011", "01"))
            ])
        );
        assert_eq!(
            dcy_of("00101"),
            sum(&[(1, tp("001", "01")), (-1, tp("0001", "1")), (-1, tp1("1", "0001"))])
        );
    }

    #[test]
    fn extracted_tables_for_0011() {
        let (a, b) = extract_alpha_beta(&w("0011")).unwrap();
        let nz = |t: &CoeffTable| {
            t.entries()
                .iter()
                .map(|((u, v), c)| format!("{u},{v}:{}", crate::fmt_q(c)))
                .collect::<Vec<_>>()
        };
        assert_eq!(nz(&a), ["0,011:1", "001,1:1"]);
        assert_eq!(nz(&b), ["01,01:1", "1,001:1"]);
    }

    #[test]
    fn differential_squares_to_zero_on_duals() {
        for word in generate_lyndon(5) {
            let x = embedded(&word, RootDeco::T);
            assert!(d_cy(&d_cy(&x)).is_zero(), "{word}");
            let y = embedded(&word, RootDeco::One);
            assert!(d_cy(&d_cy(&y)).is_zero(), "{word}(1)");
        }
    }

    #[test]
    fn internal_and_zero_leaf_parts_vanish() {
        for word in generate_lyndon(5) {
            let x = embedded(&word, RootDeco::T);
            assert!(d_cy_part(&x, EdgeFilter::Only(EdgeClass::Internal)).is_zero(), "{word}");
            assert!(d_cy_part(&x, EdgeFilter::Only(EdgeClass::Leaf0)).is_zero(), "{word}");
        }
    }

    #[test]
    fn degrees_of_duals() {
        for word in generate_lyndon(5) {
            for f in embedded(&word, RootDeco::T).keys() {
                assert_eq!(f.degree(), 1);
                assert_eq!(f.weight(), word.len());
            }
        }
    }

    fn arb_factor() -> impl Strategy<Value = ForestLinComb> {
        let words = generate_lyndon(4);
        (0..words.len(), any::<bool>()).prop_map(move |(i, one)| {
            let root = if one { RootDeco::One } else { RootDeco::T };
            (*embedded(&words[i], root)).clone()
        })
    }

    fn homogeneous_degree(x: &ForestLinComb) -> Option<i64> {
        let mut it = x.keys().map(Forest::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn d_cy_squared_vanishes_on_products(a in arb_factor(), b in arb_factor(), c in arb_factor()) {
            let x = product(&product(&a, &b), &c);
            prop_assert!(d_cy(&d_cy(&x)).is_zero());
        }

        #[test]
        fn leibniz_rule(a in arb_factor(), b in arb_factor()) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            let ea = homogeneous_degree(&a).unwrap();
            let lhs = d_cy(&product(&a, &b));
            let mut rhs = product(&d_cy(&a), &b);
            rhs.add_scaled(&product(&a, &d_cy(&b)), &q(if ea % 2 == 0 { 1 } else { -1 }));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn graded_commutativity(a in arb_factor(), b in arb_factor()) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            let (ea, eb) = (homogeneous_degree(&a).unwrap(), homogeneous_degree(&b).unwrap());
            let sign = if (ea * eb) % 2 == 0 { 1 } else { -1 };
            prop_assert_eq!(product(&a, &b), product(&b, &a).scaled(&q(sign)));
        }
    }
}
