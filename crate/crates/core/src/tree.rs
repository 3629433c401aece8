//! Labeled rooted trees in canonical form, grafting, and tree enumeration.
//!
//! Trees model the basis of the free pre-Lie algebra on a label set: the
//! product of two trees is the sum of all ways of grafting the second onto a
//! vertex of the first. Children are stored sorted by canonical
//! serialization, so structural equality is string equality on the
//! serializations.

use std::cmp::Ordering;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cursor::Cursor;
use crate::error::Error;
use crate::lincomb::{LinComb, SymMonomial};
use crate::ring::RingSpec;
use crate::Result;

/// A rooted tree whose vertices carry generator labels.
///
/// The canonical serialization is `label` for a leaf and
/// `label[c1,c2,..]` otherwise, children sorted ascending by their own
/// serializations. Two trees are equal iff their serializations are.
#[derive(Debug, Clone)]
pub struct LabeledRootedTree {
    label: String,
    children: Vec<LabeledRootedTree>,
    canon: String,
    vertices: usize,
}

/// A multiset of trees; the unit of the symmetric algebra is the empty one.
pub type Forest = SymMonomial<LabeledRootedTree>;

impl LabeledRootedTree {
    pub fn new(label: &str, mut children: Vec<LabeledRootedTree>) -> Result<Self> {
        if !is_label(label) {
            return Err(Error::Invalid(format!("bad tree label {label:?}")));
        }
        children.sort();
        let vertices = 1 + children.iter().map(|c| c.vertices).sum::<usize>();
        let canon = if children.is_empty() {
            label.to_string()
        } else {
            let inner: Vec<&str> = children.iter().map(|c| c.canon.as_str()).collect();
            format!("{label}[{}]", inner.join(","))
        };
        Ok(LabeledRootedTree { label: label.to_string(), children, canon, vertices })
    }

    pub fn leaf(label: &str) -> Result<Self> {
        LabeledRootedTree::new(label, Vec::new())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn children(&self) -> &[LabeledRootedTree] {
        &self.children
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn canonical(&self) -> &str {
        &self.canon
    }

    /// The tree with `new_child` appended under the root.
    pub fn with_child(&self, new_child: &LabeledRootedTree) -> LabeledRootedTree {
        let mut children = self.children.clone();
        children.push(new_child.clone());
        LabeledRootedTree::new(&self.label, children).expect("label was already validated")
    }

    /// The tree with the child at `idx` replaced.
    fn with_replaced_child(&self, idx: usize, replacement: LabeledRootedTree) -> LabeledRootedTree {
        let mut children = self.children.clone();
        children[idx] = replacement;
        LabeledRootedTree::new(&self.label, children).expect("label was already validated")
    }

    pub fn parse(src: &str) -> Result<Self> {
        let mut cur = Cursor::new(src);
        cur.skip_ws();
        let t = Self::parse_at(&mut cur)?;
        cur.skip_ws();
        if !cur.at_end() {
            return Err(cur.err("trailing input after tree"));
        }
        Ok(t)
    }

    pub(crate) fn parse_at(cur: &mut Cursor) -> Result<Self> {
        let Some(label) = cur.identifier() else {
            return Err(cur.err("expected a tree label"));
        };
        cur.skip_ws();
        let mut children = Vec::new();
        if cur.peek() == Some(b'[') {
            let bracket = cur.pos();
            cur.bump();
            loop {
                cur.skip_ws();
                if cur.at_end() {
                    return Err(cur.err_at(bracket, "unclosed '['"));
                }
                children.push(Self::parse_at(cur)?);
                cur.skip_ws();
                match cur.peek() {
                    Some(b',') => {
                        cur.bump();
                    }
                    Some(b']') => {
                        cur.bump();
                        break;
                    }
                    None => return Err(cur.err_at(bracket, "unclosed '['")),
                    Some(_) => return Err(cur.err("expected ',' or ']'")),
                }
            }
        }
        LabeledRootedTree::new(&label, children)
    }
}

fn is_label(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl PartialEq for LabeledRootedTree {
    fn eq(&self, other: &Self) -> bool {
        self.canon == other.canon
    }
}

impl Eq for LabeledRootedTree {}

impl PartialOrd for LabeledRootedTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LabeledRootedTree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canon.cmp(&other.canon)
    }
}

impl std::hash::Hash for LabeledRootedTree {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.canon.hash(state);
    }
}

impl fmt::Display for LabeledRootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canon)
    }
}

impl Serialize for LabeledRootedTree {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.canon)
    }
}

impl<'de> Deserialize<'de> for LabeledRootedTree {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        LabeledRootedTree::parse(&s).map_err(D::Error::custom)
    }
}

/// Grafting: the sum over every vertex `v` of `t` of the tree obtained by
/// attaching the root of `s` as a new child of `v`. Identical attachment
/// points produce integer multiplicities.
pub fn graft(
    ring: &RingSpec,
    t: &LabeledRootedTree,
    s: &LabeledRootedTree,
) -> Result<LinComb<LabeledRootedTree>> {
    let mut out = LinComb::zero(ring);
    for tree in graftings(t, s) {
        out.add_term(tree, &crate::ring::Scalar::one(ring))?;
    }
    Ok(out)
}

/// All single graftings of `s` onto `t`, one per vertex of `t`, with
/// repetitions when symmetric positions coincide.
fn graftings(t: &LabeledRootedTree, s: &LabeledRootedTree) -> Vec<LabeledRootedTree> {
    let mut out = vec![t.with_child(s)];
    for idx in 0..t.children.len() {
        for sub in graftings(&t.children[idx], s) {
            out.push(t.with_replaced_child(idx, sub));
        }
    }
    out
}

/// All canonical trees with exactly `n` vertices over the given labels,
/// sorted.
pub fn trees_with_vertices(labels: &[&str], n: usize) -> Result<Vec<LabeledRootedTree>> {
    let mut by_size: Vec<Vec<LabeledRootedTree>> = Vec::new();
    for size in 1..=n {
        let smaller: Vec<LabeledRootedTree> =
            by_size.iter().flatten().cloned().collect();
        let mut here = Vec::new();
        for label in labels {
            for children in multisets_with_total(&smaller, size - 1) {
                here.push(LabeledRootedTree::new(label, children)?);
            }
        }
        here.sort();
        here.dedup();
        by_size.push(here);
    }
    Ok(by_size.pop().unwrap_or_default())
}

/// All canonical trees with 1 to `n` vertices, sorted by (vertices, order).
pub fn trees_up_to(labels: &[&str], n: usize) -> Result<Vec<LabeledRootedTree>> {
    let mut out = Vec::new();
    for size in 1..=n {
        out.extend(trees_with_vertices(labels, size)?);
    }
    Ok(out)
}

/// Multisets (as sorted vectors) drawn from `pool` whose vertex counts sum to
/// `total`. The pool must be duplicate-free.
fn multisets_with_total(
    pool: &[LabeledRootedTree],
    total: usize,
) -> Vec<Vec<LabeledRootedTree>> {
    fn go(
        pool: &[LabeledRootedTree],
        from: usize,
        total: usize,
        cur: &mut Vec<LabeledRootedTree>,
        out: &mut Vec<Vec<LabeledRootedTree>>,
    ) {
        if total == 0 {
            out.push(cur.clone());
            return;
        }
        for i in from..pool.len() {
            let sz = pool[i].vertices();
            if sz <= total {
                cur.push(pool[i].clone());
                go(pool, i, total - sz, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(pool, 0, total, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Scalar;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q() -> RingSpec {
        RingSpec::rational()
    }

    fn t(src: &str) -> LabeledRootedTree {
        LabeledRootedTree::parse(src).unwrap()
    }

    #[test]
    fn canonical_serialization_sorts_children() {
        let a = LabeledRootedTree::new(
            "x",
            vec![t("x[y]"), t("x"), t("y")],
        )
        .unwrap();
        assert_eq!(a.canonical(), "x[x,x[y],y]");
        assert_eq!(a.vertices(), 5);
        assert_eq!(t("x[y,x[y],x]").canonical(), "x[x,x[y],y]");
        assert_eq!(t("x[y,x]"), t("x[x,y]"));
    }

    #[test]
    fn parse_matches_grammar() {
        assert_eq!(t("x[x,x[y]]").canonical(), "x[x,x[y]]");
        assert_eq!(t("  e1[ e2 , e3 ]  ").canonical(), "e1[e2,e3]");
        match LabeledRootedTree::parse("x[").unwrap_err() {
            Error::SyntaxError { line, column, .. } => {
                assert_eq!((line, column), (1, 2));
            }
            e => panic!("unexpected error {e}"),
        }
        assert!(LabeledRootedTree::parse("x]").is_err());
        assert!(LabeledRootedTree::parse("x[]").is_err());
        assert!(LabeledRootedTree::parse("[x]").is_err());
        assert!(LabeledRootedTree::parse("1x").is_err());
    }

    #[test]
    fn graft_examples() {
        let dot = t("x");
        let l2 = t("x[x]");
        let l3 = t("x[x[x]]");
        let c2 = t("x[x,x]");
        // One grafting site on a single vertex.
        assert_eq!(graft(&q(), &dot, &dot).unwrap(), LinComb::single(&q(), l2.clone()));
        // Two sites on the chain: extend it or branch at the root.
        let g = graft(&q(), &l2, &dot).unwrap();
        assert_eq!(g.coeff(&l3), Scalar::one(&q()));
        assert_eq!(g.coeff(&c2), Scalar::one(&q()));
        assert_eq!(g.len(), 2);
        // Attaching the chain under a single vertex gives the 3-chain.
        assert_eq!(graft(&q(), &dot, &l2).unwrap(), LinComb::single(&q(), l3));
    }

    #[test]
    fn graft_merges_symmetric_sites() {
        // x[x,x] has two identical leaves, so grafting onto either leaf gives
        // the same canonical tree with coefficient 2.
        let c2 = t("x[x,x]");
        let dot = t("x");
        let g = graft(&q(), &c2, &dot).unwrap();
        assert_eq!(g.coeff(&t("x[x,x,x]")), Scalar::one(&q()));
        assert_eq!(g.coeff(&t("x[x,x[x]]")), Scalar::from_integer(&q(), 2));
        assert_eq!(g.len(), 2);
    }

    #[test]
    fn graft_is_degree_additive_with_vertex_count_terms() {
        let ring = q();
        let pool = trees_up_to(&["x", "y"], 3).unwrap();
        for a in &pool {
            for b in &pool {
                let g = graft(&ring, a, b).unwrap();
                let mut multiplicity_total = Scalar::zero(&ring);
                for (k, c) in g.terms() {
                    assert_eq!(k.vertices(), a.vertices() + b.vertices());
                    multiplicity_total = multiplicity_total.add(c).unwrap();
                }
                assert_eq!(
                    multiplicity_total,
                    Scalar::from_integer(&ring, a.vertices() as i64)
                );
            }
        }
    }

    /// Number of multisets with total size `n`, given `counts[i]` objects of
    /// size `i+1`; the coefficient extraction of prod (1-x^i)^(-a_i).
    fn multiset_count(counts: &[u64], n: usize) -> u64 {
        let mut b = vec![0u64; n + 1];
        b[0] = 1;
        for (idx, &a) in counts.iter().enumerate() {
            let size = idx + 1;
            if a == 0 || size > n {
                continue;
            }
            let mut nb = vec![0u64; n + 1];
            for (target, slot) in nb.iter_mut().enumerate() {
                let mut m = 0usize;
                while m * size <= target {
                    // C(a + m - 1, m) multisets using m objects of this size.
                    let mut choose = 1u64;
                    for j in 0..m as u64 {
                        choose = choose * (a + j) / (j + 1);
                    }
                    *slot += choose * b[target - m * size];
                    m += 1;
                }
            }
            b = nb;
        }
        b[n]
    }

    /// Independent count of colored rooted trees: a tree of size n is a
    /// colored root plus a multiset of smaller trees of total size n-1.
    fn colored_tree_counts(colors: u64, max: usize) -> Vec<u64> {
        let mut counts: Vec<u64> = Vec::new();
        for n in 1..=max {
            let c = colors * multiset_count(&counts, n - 1);
            counts.push(c);
        }
        counts
    }

    #[test]
    fn enumeration_matches_counting_recurrence() {
        // One label gives the classic rooted-tree counts.
        assert_eq!(colored_tree_counts(1, 6), vec![1, 1, 2, 4, 9, 20]);
        for n in 1..=6 {
            assert_eq!(trees_with_vertices(&["x"], n).unwrap().len() as u64, colored_tree_counts(1, n)[n - 1]);
        }
        // Two labels.
        assert_eq!(colored_tree_counts(2, 3), vec![2, 4, 14]);
        for n in 1..=4 {
            assert_eq!(trees_with_vertices(&["x", "y"], n).unwrap().len() as u64, colored_tree_counts(2, n)[n - 1]);
        }
        assert_eq!(trees_up_to(&["x", "y"], 3).unwrap().len(), 2 + 4 + 14);
    }

    fn random_tree(rng: &mut ChaCha8Rng, budget: usize, labels: &[&str]) -> LabeledRootedTree {
        let label = labels[rng.gen_range(0..labels.len())];
        if budget <= 1 {
            return LabeledRootedTree::leaf(label).unwrap();
        }
        let n_children = rng.gen_range(0..=3.min(budget - 1));
        let mut rest = budget - 1;
        let mut children = Vec::new();
        for i in 0..n_children {
            let share = if i + 1 == n_children { rest } else { rng.gen_range(1..=rest.max(1)) };
            if share == 0 {
                break;
            }
            children.push(random_tree(rng, share, labels));
            rest -= share;
            if rest == 0 {
                break;
            }
        }
        LabeledRootedTree::new(label, children).unwrap()
    }

    fn shuffled_rebuild(rng: &mut ChaCha8Rng, tree: &LabeledRootedTree) -> LabeledRootedTree {
        let mut children: Vec<LabeledRootedTree> =
            tree.children().iter().map(|c| shuffled_rebuild(rng, c)).collect();
        for i in (1..children.len()).rev() {
            let j = rng.gen_range(0..=i);
            children.swap(i, j);
        }
        LabeledRootedTree::new(tree.label(), children).unwrap()
    }

    #[test]
    fn canonicalization_is_child_order_insensitive() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..1000 {
            let tree = random_tree(&mut rng, 8, &["x", "y"]);
            let rebuilt = shuffled_rebuild(&mut rng, &tree);
            assert_eq!(tree, rebuilt);
            assert_eq!(tree.canonical(), rebuilt.canonical());
        }
    }

    #[test]
    fn serde_round_trip() {
        let tree = t("x[x,x[y]]");
        let json = serde_json::to_string(&tree).unwrap();
        assert_eq!(json, "\"x[x,x[y]]\"");
        let back: LabeledRootedTree = serde_json::from_str(&json).unwrap();
        assert_eq!(back, tree);
    }
}
