//! Dual tree sums `T_W`, the basis of `B^<` combinations dual to the Lyndon
//! brackets, and the cobracket `d_Lie` obtained by cutting the root edge.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::{Arc, Mutex, OnceLock};

use crate::trees::{
    self, decompose, decompose_tracked, graft, is_hall, lyndon_tree, normalize_sign, LieElement, Tree, TreeLinComb,
};
use crate::words::{generate_lyndon, lyndon_of_len, LyndonWord};
use crate::{fmt_q, q, LinComb, Q};

/// Ordered pair of Lyndon words, used as a table index.
pub type Pair = (LyndonWord, LyndonWord);

/// `T_W` written on the basis `B^<`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualTreeSum {
    pub word: LyndonWord,
    pub combination: TreeLinComb,
}

impl fmt::Display for DualTreeSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "T_{} =", self.word)?;
        for (t, c) in self.combination.iter() {
            writeln!(f, "  {:>4}  {t}", fmt_q(c))?;
        }
        Ok(())
    }
}

type Cache<K, V> = OnceLock<Mutex<HashMap<K, V>>>;

/// Looks `key` up in `cache`, computing it outside the lock on a miss.
pub(crate) fn memo<K, V>(cache: &'static Cache<K, V>, key: &K, compute: impl FnOnce() -> V) -> V
where
    K: Eq + Hash + Clone,
    V: Clone,
{
    let map = cache.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = map.lock().expect("cache lock").get(key) {
        return v.clone();
    }
    let v = compute();
    map.lock().expect("cache lock").entry(key.clone()).or_insert(v).clone()
}

static BRACKETS: Cache<Pair, Arc<LieElement>> = OnceLock::new();
static ALPHAS: Cache<LyndonWord, Arc<LinComb<Pair>>> = OnceLock::new();
static DUALS: Cache<LyndonWord, Arc<DualTreeSum>> = OnceLock::new();

/// Memoized `bracket_expand(u, v)` for `u < v`.
pub fn bracket(u: &LyndonWord, v: &LyndonWord) -> Arc<LieElement> {
    memo(&BRACKETS, &(u.clone(), v.clone()), || {
        Arc::new(trees::bracket_expand(u, v).expect("ordered pair"))
    })
}

/// Pairs `(U, V)` of Lyndon words with `U < V` and `|U| + |V| = n`.
pub fn ordered_pairs(n: usize) -> Vec<Pair> {
    let words = generate_lyndon(n.saturating_sub(1));
    let mut out = Vec::new();
    for u in &words {
        for v in &words {
            if u < v && u.len() + v.len() == n {
                out.push((u.clone(), v.clone()));
            }
        }
    }
    out
}

/// `α^W_{U,V}`: the coefficient of `[W]` in `[[U],[V]]`, for all `U < V`.
pub fn alpha_lie(w: &LyndonWord) -> Arc<LinComb<Pair>> {
    memo(&ALPHAS, w, || {
        Arc::new(
            ordered_pairs(w.len())
                .into_iter()
                .map(|(u, v)| {
                    let c = bracket(&u, &v).get(w);
                    ((u, v), c)
                })
                .collect(),
        )
    })
}

/// `T_W = Σ α^W_{U,V} T_U ∧ T_V`, normalized into `B^<`.
pub fn dual_tree(w: &LyndonWord) -> Arc<DualTreeSum> {
    memo(&DUALS, w, || {
        let mut combination = TreeLinComb::new();
        if w.is_letter() {
            combination.add(Tree::leaf(w.letters()[0]), q(1));
        } else {
            for ((u, v), a) in alpha_lie(w).iter() {
                let (tu, tv) = (dual_tree(u), dual_tree(v));
                for (x, cx) in tu.combination.iter() {
                    for (y, cy) in tv.combination.iter() {
                        if let Some((t, s)) = normalize_sign(&graft(x.clone(), y.clone())) {
                            combination.add(t, a * cx * cy * q(s as i64));
                        }
                    }
                }
            }
        }
        Arc::new(DualTreeSum {
            word: w.clone(),
            combination,
        })
    })
}

/// Cuts the root edge of every support tree: `Σ c_T · (A, B)` for `T = A ∧ B`.
pub fn root_cut(sum: &DualTreeSum) -> LinComb<(Tree, Tree)> {
    sum.combination
        .iter()
        .filter_map(|(t, c)| t.children().map(|(a, b)| ((a.clone(), b.clone()), c.clone())))
        .collect()
}

/// `d_Lie(T_W)` in the basis `T_{W1} ∧ T_{W2}` with `W1 < W2`. The
/// coordinate along `T_{W1} ∧ T_{W2}` is read off the coefficient of the pair
/// of Lyndon trees `(τ_{W1}, τ_{W2})`, since `τ_U` occurs in `T_V` iff `U = V`.
pub fn d_lie(sum: &DualTreeSum) -> LinComb<Pair> {
    let mut out = LinComb::new();
    for ((a, b), c) in root_cut(sum).iter() {
        if !(is_hall(a) && is_hall(b)) {
            continue;
        }
        let x = LyndonWord::from_hall_foliage(a.foliage());
        let y = LyndonWord::from_hall_foliage(b.foliage());
        match x.cmp(&y) {
            std::cmp::Ordering::Less => out.add((x, y), c.clone()),
            std::cmp::Ordering::Greater => out.add((y, x), -c.clone()),
            std::cmp::Ordering::Equal => {}
        }
    }
    out
}

/// Antisymmetric tensor `Σ d_{W1,W2} (T_{W1} ⊗ T_{W2} − T_{W2} ⊗ T_{W1})` as tree pairs.
pub fn wedge_in_trees(d: &LinComb<Pair>) -> LinComb<(Tree, Tree)> {
    let mut out = LinComb::new();
    for ((u, v), c) in d.iter() {
        let (tu, tv) = (dual_tree(u), dual_tree(v));
        for (x, cx) in tu.combination.iter() {
            for (y, cy) in tv.combination.iter() {
                out.add((x.clone(), y.clone()), c * cx * cy);
                out.add((y.clone(), x.clone()), -(c * cx * cy));
            }
        }
    }
    out
}

/// Antisymmetrization `(A, B) ↦ (A, B) − (B, A)`.
pub fn antisymmetrize(p: &LinComb<(Tree, Tree)>) -> LinComb<(Tree, Tree)> {
    let mut out = LinComb::new();
    for ((a, b), c) in p.iter() {
        out.add((a.clone(), b.clone()), c.clone());
        out.add((b.clone(), a.clone()), -c.clone());
    }
    out
}

/// Sorts a triple of words with the permutation sign; `None` on repetition.
fn sort3(mut t: [LyndonWord; 3]) -> Option<([LyndonWord; 3], i64)> {
    let mut sign = 1;
    for i in 0..3 {
        for j in 0..2 - i {
            match t[j].cmp(&t[j + 1]) {
                std::cmp::Ordering::Equal => return None,
                std::cmp::Ordering::Greater => {
                    t.swap(j, j + 1);
                    sign = -sign;
                }
                std::cmp::Ordering::Less => {}
            }
        }
    }
    Some((t, sign))
}

/// `d_Lie ∘ d_Lie (T_W)` in `Λ³`, indexed by sorted Lyndon triples.
pub fn d_lie_squared(w: &LyndonWord) -> LinComb<[LyndonWord; 3]> {
    let mut out = LinComb::new();
    let mut push = |t: [LyndonWord; 3], c: Q| {
        if let Some((t, s)) = sort3(t) {
            out.add(t, c * q(s));
        }
    };
    for ((w1, w2), c) in d_lie(&dual_tree(w)).iter() {
        if !w1.is_letter() {
            for ((a, b), ca) in d_lie(&dual_tree(w1)).iter() {
                push([a.clone(), b.clone(), w2.clone()], c * ca);
            }
        }
        if !w2.is_letter() {
            for ((a, b), cb) in d_lie(&dual_tree(w2)).iter() {
                push([w1.clone(), a.clone(), b.clone()], -(c * cb));
            }
        }
    }
    out
}

/// True iff every 0-leaf is a left child and every 1-leaf a right child.
pub fn leaf_sided(tree: &Tree) -> bool {
    fn go(t: &Tree) -> bool {
        match t {
            Tree::Leaf(_) => true,
            Tree::Node(a, b) => !matches!(**a, Tree::Leaf(1)) && !matches!(**b, Tree::Leaf(0)) && go(a) && go(b),
        }
    }
    go(tree)
}

/// A disagreement between `T_W` and the decomposition of a `B^<` tree.
#[derive(Clone, Debug)]
pub struct DualityMismatch {
    pub word: LyndonWord,
    pub tree: Tree,
    pub dual_coeff: Q,
    pub bracket_coeff: Q,
}

/// Compares `coef_T(T_W)` with `coef_W(decompose(T))` over every `B^<` tree of
/// weight `n` and every Lyndon word of length `n`.
pub fn duality_mismatches(n: usize) -> Vec<DualityMismatch> {
    let words = lyndon_of_len(n);
    let duals: Vec<_> = words.iter().map(dual_tree).collect();
    let mut out = Vec::new();
    for tree in trees::b_less_trees(n) {
        let dec = decompose(&tree);
        for (w, d) in words.iter().zip(&duals) {
            let dual_coeff = d.combination.get(&tree);
            let bracket_coeff = dec.get(w);
            if dual_coeff != bracket_coeff {
                out.push(DualityMismatch {
                    word: w.clone(),
                    tree: tree.clone(),
                    dual_coeff,
                    bracket_coeff,
                });
            }
        }
    }
    out
}

/// Splits `tree` at its 1-leaf `i` (a right child): returns the left sibling
/// `T1`, the quotient `T2` where `T1 ∧ 1` collapses to the leaf `1`, and the
/// position `j` of that leaf in `T2`.
pub(crate) fn split_at_one_leaf(tree: &Tree, i: usize) -> Option<(Tree, Tree, usize)> {
    fn go(t: &Tree, i: usize, offset: usize) -> Option<(Tree, Tree, usize)> {
        let (a, b) = t.children()?;
        let wa = a.weight();
        if matches!(b, Tree::Leaf(1)) && offset + wa + 1 == i {
            return Some((a.clone(), Tree::Leaf(1), offset + 1));
        }
        if i <= offset + wa {
            let (t1, t2, j) = go(a, i, offset)?;
            Some((t1, graft(t2, b.clone()), j))
        } else {
            let (t1, t2, j) = go(b, i, offset + wa)?;
            Some((t1, graft(a.clone(), t2), j))
        }
    }
    go(tree, i, 0)
}

/// Right-hand side of the coefficient recursion at the 1-leaf `i` of `tree`:
/// `Σ_{U1} c_{T1}^{U1} Σ_{(S,k)} c_{T2,j}^{S,k} c^W_{S ins_k U1}`, where
/// `S ins_k U1` replaces leaf `k` of `S` by `τ_{U1} ∧ 1`.
pub fn coefficient_recursion_rhs(w: &LyndonWord, tree: &Tree, i: usize) -> Option<Q> {
    let (t1, t2, j) = split_at_one_leaf(tree, i)?;
    let tracked = decompose_tracked(&t2, j).ok()?;
    let mut total = q(0);
    for (u1, c1) in decompose(&t1).iter() {
        let graft_point = graft(lyndon_tree(u1), Tree::leaf(1));
        for ((s, k), c2) in tracked.iter() {
            let inserted = trees::replace_leaf(s, *k, &graft_point);
            total += c1 * c2 * decompose(&inserted).get(w);
        }
    }
    Some(total)
}

/// Checks the coefficient recursion on every support tree of `T_W` and every
/// 1-leaf; returns the failing `(tree, leaf)` pairs.
pub fn coefficient_recursion_failures(w: &LyndonWord) -> Vec<(Tree, usize)> {
    let sum = dual_tree(w);
    let mut out = Vec::new();
    for (tree, c) in sum.combination.iter() {
        for (pos, &letter) in tree.foliage().iter().enumerate() {
            if letter != 1 || tree.is_leaf() {
                continue;
            }
            match coefficient_recursion_rhs(w, tree, pos + 1) {
                Some(rhs) if &rhs == c => {}
                _ => out.push((tree.clone(), pos + 1)),
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::is_b_less;

    fn w(s: &str) -> LyndonWord {
        s.parse().unwrap()
    }

    fn t(s: &str) -> Tree {
        s.parse().unwrap()
    }

    #[test]
    fn short_duals_are_lyndon_trees() {
        for word in generate_lyndon(3) {
            let d = dual_tree(&word);
            assert_eq!(d.combination, TreeLinComb::single(lyndon_tree(&word), q(1)), "{word}");
        }
        assert_eq!(dual_tree(&w("0")).combination, TreeLinComb::single(Tree::leaf(0), q(1)));
    }

    #[test]
    fn dual_of_0011_has_two_trees() {
        let expected: TreeLinComb = [(t("[0,[[0,1],1]]"), q(1)), (t("[[0,[0,1]],1]"), q(1))]
            .into_iter()
            .collect();
        assert_eq!(dual_tree(&w("0011")).combination, expected);
    }

    #[test]
    fn dual_invariants_up_to_weight_seven() {
        for word in generate_lyndon(7) {
            let d = dual_tree(&word);
            assert_eq!(d.combination.get(&lyndon_tree(&word)), q(1), "{word}");
            for (tree, _) in d.combination.iter() {
                assert!(is_b_less(tree), "{word}: {tree}");
                assert!(leaf_sided(tree), "{word}: {tree}");
            }
        }
    }

    #[test]
    fn duality_matrix_small_weights() {
        for n in 1..=5 {
            let bad = duality_mismatches(n);
            assert!(bad.is_empty(), "weight {n}: {:?}", bad.first());
        }
    }

    #[test]
    fn d_lie_examples() {
        assert_eq!(d_lie(&dual_tree(&w("01"))), LinComb::single((w("0"), w("1")), q(1)));
        assert!(d_lie(&dual_tree(&w("0"))).is_zero());
        let d = d_lie(&dual_tree(&w("01011")));
        assert_eq!(d.get(&(w("01"), w("011"))), q(1));
    }

    #[test]
    fn d_lie_equals_bracket_table() {
        for word in generate_lyndon(6).into_iter().filter(|w| w.len() >= 2) {
            assert_eq!(d_lie(&dual_tree(&word)), *alpha_lie(&word), "{word}");
        }
    }

    #[test]
    fn root_cut_is_the_wedge_of_duals() {
        for word in generate_lyndon(6).into_iter().filter(|w| w.len() >= 2) {
            let d = dual_tree(&word);
            let lhs = antisymmetrize(&root_cut(&d));
            assert_eq!(lhs, wedge_in_trees(&d_lie(&d)), "{word}");
        }
    }

    #[test]
    fn d_lie_squares_to_zero() {
        for word in generate_lyndon(6) {
            assert!(d_lie_squared(&word).is_zero(), "{word}");
        }
    }

    #[test]
    fn split_at_one_leaf_examples() {
        let (t1, t2, j) = split_at_one_leaf(&t("[[0,1],1]"), 3).unwrap();
        assert_eq!((t1, t2, j), (t("[0,1]"), t("1"), 1));
        let (t1, t2, j) = split_at_one_leaf(&t("[[0,1],1]"), 2).unwrap();
        assert_eq!((t1, t2, j), (t("0"), t("[1,1]"), 1));
        assert!(split_at_one_leaf(&t("[0,1]"), 1).is_none());
    }

    #[test]
    fn coefficient_recursion_holds() {
        for word in generate_lyndon(5).into_iter().filter(|w| w.len() >= 2) {
            let bad = coefficient_recursion_failures(&word);
            assert!(bad.is_empty(), "{word}: {bad:?}");
        }
    }
}
