//! The symmetric bialgebra on a pre-Lie algebra: the standard coproduct, the
//! extension of the pre-Lie product to `Sym g` by the structural formulas
//!
//!   (0) `a ∘ 1 = a`
//!   (1) `a ∘ (b·x) = (a∘b)∘x - a∘(b∘x)` for a generator `x`
//!   (2) `(a·b) ∘ c = Σ (a∘c′)(b∘c″)`
//!
//! the star product `a * b = Σ (a∘b′)·b″`, and the forest product that
//! grafts trees of one forest onto distinct vertices of another. The two
//! products are computed by unrelated recursions, which is what makes their
//! agreement on trees a real check.

use std::fmt;

use serde::Serialize;

use crate::error::Error;
use crate::lincomb::{bilinear, LinComb, SymMonomial};
use crate::prelie::PreLie;
use crate::ring::{RingSpec, Scalar};
use crate::tree::{Forest, LabeledRootedTree};
use crate::Result;

/// An element of `Sym g`: a combination of commutative monomials in basis
/// keys.
pub type SymElement<K> = LinComb<SymMonomial<K>>;

/// One Sweedler term of a coproduct.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TensorPair<K: Ord> {
    pub left: SymMonomial<K>,
    pub right: SymMonomial<K>,
}

impl<K: Ord + fmt::Display> fmt::Display for TensorPair<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}⊗{}", self.left, self.right)
    }
}

/// The multiset-union product on `Sym g`.
pub fn sym_multiply<K: Ord + Clone>(
    a: &SymElement<K>,
    b: &SymElement<K>,
) -> Result<SymElement<K>> {
    let ring = a.ring().clone();
    bilinear(a, b, |ma, mb| Ok(LinComb::single(&ring, ma.mul(mb))))
}

/// The standard coproduct: generators are primitive and `Δ` is extended
/// multiplicatively, i.e. monomial factors are unshuffled over the two legs.
pub fn coproduct<K: Ord + Clone>(
    a: &SymElement<K>,
) -> Result<LinComb<TensorPair<K>>> {
    let ring = a.ring().clone();
    a.map_linear(|m| {
        let mut out = LinComb::zero(&ring);
        let one = Scalar::one(&ring);
        let n = m.degree();
        for mask in 0u64..(1u64 << n) {
            let mut left = Vec::new();
            let mut right = Vec::new();
            for (i, k) in m.factors().iter().enumerate() {
                if mask >> i & 1 == 1 {
                    left.push(k.clone());
                } else {
                    right.push(k.clone());
                }
            }
            out.add_term(
                TensorPair {
                    left: SymMonomial::from_factors(left),
                    right: SymMonomial::from_factors(right),
                },
                &one,
            )?;
        }
        Ok(out)
    })
}

/// The counit: the coefficient of the empty monomial.
pub fn counit<K: Ord + Clone>(a: &SymElement<K>) -> Scalar {
    a.coeff(&SymMonomial::unit())
}

/// `a ∘ b` on monomials, by structural recursion on `(deg a, deg b)`:
/// formula (2) splits the left factor, formula (1) peels the last factor on
/// the right, formula (0) and the pre-Lie product on keys are the base
/// cases.
fn circ_monomials<A: PreLie>(
    alg: &A,
    ma: &SymMonomial<A::Key>,
    mb: &SymMonomial<A::Key>,
) -> Result<SymElement<A::Key>> {
    let ring = alg.ring();
    // (0): a ∘ 1 = a.
    if mb.is_unit() {
        return Ok(LinComb::single(ring, ma.clone()));
    }
    // 1 ∘ b = ε(b)·1, and ε vanishes on nonunit monomials.
    if ma.is_unit() {
        return Ok(LinComb::zero(ring));
    }
    if ma.degree() == 1 {
        let a_key = &ma.factors()[0];
        if mb.degree() == 1 {
            let prod = alg.key_product(a_key, &mb.factors()[0])?;
            return prod.map_keys(|k| SymMonomial::singleton(k.clone()));
        }
        // (1): a ∘ (b'·x) = (a∘b')∘x - a∘(b'∘x).
        let (x, b_rest) = mb.split_at_factor(mb.degree() - 1);
        let x_mon = SymMonomial::singleton(x);
        let a_circ_brest = circ_ext_comb(alg, &LinComb::single(ring, ma.clone()), &LinComb::single(ring, b_rest.clone()))?;
        let first = circ_ext_comb(alg, &a_circ_brest, &LinComb::single(ring, x_mon.clone()))?;
        let brest_circ_x =
            circ_ext_comb(alg, &LinComb::single(ring, b_rest), &LinComb::single(ring, x_mon))?;
        let second = circ_ext_comb(alg, &LinComb::single(ring, ma.clone()), &brest_circ_x)?;
        return first.sub(&second);
    }
    // (2): (a1·arest) ∘ b = Σ (a1 ∘ b′)(arest ∘ b″).
    let (a1, a_rest) = ma.split_at_factor(0);
    let a1_mon = SymMonomial::singleton(a1);
    let delta_b = coproduct(&LinComb::single(ring, mb.clone()))?;
    let mut out = LinComb::zero(ring);
    for (pair, c) in delta_b.terms() {
        let l = circ_monomials(alg, &a1_mon, &pair.left)?;
        let r = circ_monomials(alg, &a_rest, &pair.right)?;
        let prod = sym_multiply(&l, &r)?.scale(c)?;
        out = out.add(&prod)?;
    }
    Ok(out)
}

fn circ_ext_comb<A: PreLie>(
    alg: &A,
    a: &SymElement<A::Key>,
    b: &SymElement<A::Key>,
) -> Result<SymElement<A::Key>> {
    bilinear(a, b, |ma, mb| circ_monomials(alg, ma, mb))
}

/// The extension of the pre-Lie product to all of `Sym g`. Not itself a
/// pre-Lie product; it exists to define the star product.
pub fn circ_ext<A: PreLie>(
    alg: &A,
    a: &SymElement<A::Key>,
    b: &SymElement<A::Key>,
) -> Result<SymElement<A::Key>> {
    circ_ext_comb(alg, a, b)
}

/// `a * b = Σ (a ∘ b′)·b″` over the coproduct of `b`.
pub fn star<A: PreLie>(
    alg: &A,
    a: &SymElement<A::Key>,
    b: &SymElement<A::Key>,
) -> Result<SymElement<A::Key>> {
    let ring = alg.ring();
    bilinear(a, b, |ma, mb| {
        let delta_b = coproduct(&LinComb::single(ring, mb.clone()))?;
        let mut out = LinComb::zero(ring);
        for (pair, c) in delta_b.terms() {
            let circ = circ_monomials(alg, ma, &pair.left)?;
            for (m, cm) in circ.terms() {
                out.add_term(m.mul(&pair.right), &c.mul(cm)?)?;
            }
        }
        Ok(out)
    })
}

/// Recovers `∘` from a homogeneous left argument: `a ∘ b = π_n(a * b)` where
/// `n` is the common monomial degree of `a`.
pub fn circ_from_star<A: PreLie>(
    alg: &A,
    a: &SymElement<A::Key>,
    b: &SymElement<A::Key>,
) -> Result<SymElement<A::Key>> {
    let mut degrees = a.keys().map(|m| m.degree());
    let Some(n) = degrees.next() else {
        return Ok(LinComb::zero(alg.ring()));
    };
    for d in degrees {
        if d != n {
            return Err(Error::NonHomogeneousInput(n, d));
        }
    }
    let s = star(alg, a, b)?;
    let mut out = LinComb::zero(alg.ring());
    for (m, c) in s.terms() {
        if m.degree() == n {
            out.add_term(m.clone(), c)?;
        }
    }
    Ok(out)
}

// --- the forest product ------------------------------------------------------

/// Preorder rebuild of one tree with extra children attached at indexed
/// vertices.
fn attach_extras(
    tree: &LabeledRootedTree,
    extras: &[Vec<LabeledRootedTree>],
    counter: &mut usize,
) -> LabeledRootedTree {
    let my_extras = extras[*counter].clone();
    *counter += 1;
    let mut children: Vec<LabeledRootedTree> = Vec::new();
    for c in tree.children() {
        children.push(attach_extras(c, extras, counter));
    }
    children.extend(my_extras);
    LabeledRootedTree::new(tree.label(), children).expect("labels came from valid trees")
}

/// The product dual to the Connes-Kreimer coproduct: every tree of `y`
/// either grafts onto one of the vertices of `x` or stays in the forest, all
/// `(v_x + 1)^{#trees(y)}` choices summed.
///
/// This is an independent route to `star` on the free pre-Lie algebra and is
/// used as its oracle.
pub fn ck_forest_product(
    ring: &RingSpec,
    x: &Forest,
    y: &Forest,
) -> Result<LinComb<Forest>> {
    let vx: usize = x.factors().iter().map(|t| t.vertices()).sum();
    let y_trees = y.factors();
    let mut out = LinComb::zero(ring);
    let one = Scalar::one(ring);
    let n_choices = vx + 1;
    let total = (n_choices as u64).pow(y_trees.len() as u32);
    for mut code in 0..total {
        // Decode one choice per tree of y: 0 = stay, v+1 = graft at vertex v.
        let mut extras: Vec<Vec<LabeledRootedTree>> = vec![Vec::new(); vx];
        let mut stayed: Vec<LabeledRootedTree> = Vec::new();
        for t in y_trees {
            let choice = (code % n_choices as u64) as usize;
            code /= n_choices as u64;
            if choice == 0 {
                stayed.push(t.clone());
            } else {
                extras[choice - 1].push(t.clone());
            }
        }
        let mut counter = 0usize;
        let mut factors: Vec<LabeledRootedTree> = Vec::new();
        for t in x.factors() {
            factors.push(attach_extras(t, &extras, &mut counter));
        }
        factors.extend(stayed);
        out.add_term(SymMonomial::from_factors(factors), &one)?;
    }
    Ok(out)
}

// --- theorem checks ----------------------------------------------------------

/// All monomials whose total key weight is at most `cap`, including the unit.
pub fn monomials_up_to_weight<K: Ord + Clone>(
    keys: &[K],
    weight: impl Fn(&K) -> usize,
    cap: usize,
) -> Vec<SymMonomial<K>> {
    fn go<K: Ord + Clone>(
        keys: &[K],
        weight: &dyn Fn(&K) -> usize,
        from: usize,
        budget: usize,
        cur: &mut Vec<K>,
        out: &mut Vec<SymMonomial<K>>,
    ) {
        out.push(SymMonomial::from_factors(cur.clone()));
        for i in from..keys.len() {
            let w = weight(&keys[i]).max(1);
            if w <= budget {
                cur.push(keys[i].clone());
                go(keys, weight, i, budget - w, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(keys, &weight, 0, cap, &mut Vec::new(), &mut out);
    out.sort();
    out.dedup();
    out
}

/// Outcome of the star-product checks; `None` per field means the check
/// passed, otherwise the first counterexample is described.
#[derive(Debug, Clone, Serialize)]
pub struct StarTheoremReport {
    pub associativity: Option<String>,
    pub coproduct_compat: Option<String>,
    pub graded_top: Option<String>,
    pub degree_floor: Option<String>,
}

impl StarTheoremReport {
    pub fn all_pass(&self) -> bool {
        self.associativity.is_none()
            && self.coproduct_compat.is_none()
            && self.graded_top.is_none()
            && self.degree_floor.is_none()
    }
}

impl fmt::Display for StarTheoremReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let line = |name: &str, v: &Option<String>| match v {
            None => format!("{name}: pass"),
            Some(ce) => format!("{name}: FAIL ({ce})"),
        };
        writeln!(f, "{}", line("associativity", &self.associativity))?;
        writeln!(f, "{}", line("coproduct-compat", &self.coproduct_compat))?;
        writeln!(f, "{}", line("graded-top", &self.graded_top))?;
        write!(f, "{}", line("degree-floor", &self.degree_floor))
    }
}

fn tensor_of<K: Ord + Clone>(
    u: &SymElement<K>,
    v: &SymElement<K>,
) -> Result<LinComb<TensorPair<K>>> {
    bilinear(u, v, |mu, mv| {
        Ok(LinComb::single(
            u.ring(),
            TensorPair { left: mu.clone(), right: mv.clone() },
        ))
    })
}

/// Componentwise star on tensor legs.
fn star_on_pairs<A: PreLie>(
    alg: &A,
    x: &LinComb<TensorPair<A::Key>>,
    y: &LinComb<TensorPair<A::Key>>,
) -> Result<LinComb<TensorPair<A::Key>>> {
    let ring = alg.ring();
    bilinear(x, y, |px, py| {
        let l = star(alg, &LinComb::single(ring, px.left.clone()), &LinComb::single(ring, py.left.clone()))?;
        let r = star(alg, &LinComb::single(ring, px.right.clone()), &LinComb::single(ring, py.right.clone()))?;
        tensor_of(&l, &r)
    })
}

/// Checks, over all monomials drawn from `keys` with total weight bounded by
/// `cap`: associativity of star, compatibility with the coproduct, that the
/// top-degree part of star is the commutative product, and the degree floor
/// `deg(term of a*b) >= deg(a)`.
pub fn verify_star_theorem<A: PreLie>(
    alg: &A,
    keys: &[A::Key],
    weight: impl Fn(&A::Key) -> usize + Copy,
    cap: usize,
) -> Result<StarTheoremReport> {
    let ring = alg.ring();
    let pool = monomials_up_to_weight(keys, weight, cap);
    let mono_weight =
        |m: &SymMonomial<A::Key>| m.factors().iter().map(|k| weight(k).max(1)).sum::<usize>();
    let single = |m: &SymMonomial<A::Key>| LinComb::single(ring, m.clone());

    let mut associativity = None;
    'assoc: for a in &pool {
        for b in &pool {
            if mono_weight(a) + mono_weight(b) > cap {
                continue;
            }
            for c in &pool {
                if mono_weight(a) + mono_weight(b) + mono_weight(c) > cap {
                    continue;
                }
                let ab_c = star(alg, &star(alg, &single(a), &single(b))?, &single(c))?;
                let a_bc = star(alg, &single(a), &star(alg, &single(b), &single(c))?)?;
                if ab_c != a_bc {
                    associativity = Some(format!(
                        "(a*b)*c != a*(b*c) at a={a}, b={b}, c={c}: difference {}",
                        ab_c.sub(&a_bc)?
                    ));
                    break 'assoc;
                }
            }
        }
    }

    let mut coproduct_compat = None;
    let mut graded_top = None;
    let mut degree_floor = None;
    'pairs: for a in &pool {
        for b in &pool {
            if mono_weight(a) + mono_weight(b) > cap {
                continue;
            }
            let prod = star(alg, &single(a), &single(b))?;
            if coproduct_compat.is_none() {
                let lhs = coproduct(&prod)?;
                let rhs = star_on_pairs(alg, &coproduct(&single(a))?, &coproduct(&single(b))?)?;
                if lhs != rhs {
                    coproduct_compat =
                        Some(format!("Δ(a*b) != Δ(a)*Δ(b) at a={a}, b={b}"));
                }
            }
            if graded_top.is_none() {
                let top_degree = a.degree() + b.degree();
                let mut top = LinComb::zero(ring);
                for (m, c) in prod.terms() {
                    if m.degree() > top_degree {
                        graded_top = Some(format!(
                            "term {m} of a*b exceeds deg(a)+deg(b) at a={a}, b={b}"
                        ));
                        continue 'pairs;
                    }
                    if m.degree() == top_degree {
                        top.add_term(m.clone(), c)?;
                    }
                }
                let expected = LinComb::single(ring, a.mul(b));
                if top != expected {
                    graded_top = Some(format!(
                        "top part of a*b is {top}, not a·b, at a={a}, b={b}"
                    ));
                }
            }
            if degree_floor.is_none() {
                for (m, _) in prod.terms() {
                    if m.degree() < a.degree() {
                        degree_floor = Some(format!(
                            "term {m} of a*b has degree below deg(a) at a={a}, b={b}"
                        ));
                        break;
                    }
                }
            }
        }
    }

    Ok(StarTheoremReport { associativity, coproduct_compat, graded_top, degree_floor })
}
