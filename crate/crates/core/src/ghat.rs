//! The noncommutative star product on tensor words over `g + <t>`.
//!
//! Words are sequences of letters from the basis of `g` together with a
//! formal letter `t`. The product is pinned down by `x*y = xy + (x∘y)t` on
//! generators, one-sided concatenation with `t`, and compatibility with the
//! unshuffle coproduct taken `k[t]`-linearly. Two independent constructions
//! are provided: a direct recursion that splits the left word and peels the
//! right word (the route through the extension formulas), and a recursion
//! that peels the right word only, mirroring how the enveloping-side
//! isomorphism is built degree by degree. Their agreement on all bounded
//! words is part of the verification report.

use std::fmt;

use crate::error::Error;
use crate::hopf::{star, SymElement};
use crate::lincomb::{bilinear, LinComb, SymMonomial, TensorWord};
use crate::prelie::PreLie;
use crate::ring::Scalar;
use crate::Result;

/// A letter of the extended alphabet: a basis element of `g` or the formal
/// letter `t`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GhatLetter<K: Ord> {
    Gen(K),
    T,
}

impl<K: Ord + fmt::Display> fmt::Display for GhatLetter<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GhatLetter::Gen(k) => write!(f, "{k}"),
            GhatLetter::T => write!(f, "t"),
        }
    }
}

pub type GhatWord<K> = TensorWord<GhatLetter<K>>;

/// An element of the tensor algebra on the extended alphabet.
pub type GhatElement<K> = LinComb<GhatWord<K>>;

/// The word whose letters are the given generators, with no `t`.
pub fn gen_word<K: Ord + Clone>(keys: &[K]) -> GhatWord<K> {
    TensorWord(keys.iter().cloned().map(GhatLetter::Gen).collect())
}

fn gen_count<K: Ord>(w: &GhatWord<K>) -> usize {
    w.0.iter().filter(|l| matches!(l, GhatLetter::Gen(_))).count()
}

fn is_t_free<K: Ord>(w: &GhatWord<K>) -> bool {
    w.0.iter().all(|l| matches!(l, GhatLetter::Gen(_)))
}

/// Splits off the `t`-letters: the count and the subword of generators in
/// their original order.
fn slot_normalize<K: Ord + Clone>(w: &GhatWord<K>) -> (usize, TensorWord<K>) {
    let mut gens = Vec::new();
    let mut ts = 0usize;
    for l in &w.0 {
        match l {
            GhatLetter::Gen(k) => gens.push(k.clone()),
            GhatLetter::T => ts += 1,
        }
    }
    (ts, TensorWord(gens))
}

/// The deep circle product: the left word acts on the consumed right word,
/// returning combinations of words of the same length as the left word. `t`
/// annihilates and is annihilated, a single generator against a single
/// generator is the pre-Lie product, a longer right word is peeled at its
/// last letter, and a longer left word distributes the right letters over
/// its first letter and the rest, keeping relative order.
fn deep_circ<A: PreLie>(
    alg: &A,
    a: &GhatWord<A::Key>,
    c: &GhatWord<A::Key>,
) -> Result<GhatElement<A::Key>> {
    let ring = alg.ring();
    if c.0.is_empty() {
        return Ok(LinComb::single(ring, a.clone()));
    }
    if a.0.is_empty() {
        return Ok(LinComb::zero(ring));
    }
    if a.0.len() == 1 {
        let GhatLetter::Gen(g) = &a.0[0] else {
            return Ok(LinComb::zero(ring));
        };
        if c.0.len() == 1 {
            let GhatLetter::Gen(h) = &c.0[0] else {
                return Ok(LinComb::zero(ring));
            };
            return alg
                .key_product(g, h)?
                .map_keys(|k| TensorWord(vec![GhatLetter::Gen(k.clone())]));
        }
        // a∘(c'·x) = (a∘c')∘x - a∘(c'∘x).
        let cp = TensorWord(c.0[..c.0.len() - 1].to_vec());
        let x = TensorWord(vec![c.0[c.0.len() - 1].clone()]);
        let first = deep_circ(alg, a, &cp)?.map_linear(|w| deep_circ(alg, w, &x))?;
        let inner = deep_circ(alg, &cp, &x)?;
        let second = inner.map_linear(|w| deep_circ(alg, a, w))?;
        return first.sub(&second);
    }
    // (a1·arest)∘c = Σ over order-preserving splits of c's letters.
    let a1 = TensorWord(vec![a.0[0].clone()]);
    let arest = TensorWord(a.0[1..].to_vec());
    let n = c.0.len();
    let mut out = LinComb::zero(ring);
    for mask in 0u64..(1u64 << n) {
        let mut ci = Vec::new();
        let mut cj = Vec::new();
        for (i, l) in c.0.iter().enumerate() {
            if mask >> i & 1 == 1 {
                ci.push(l.clone());
            } else {
                cj.push(l.clone());
            }
        }
        let left = deep_circ(alg, &a1, &TensorWord(ci))?;
        let right = deep_circ(alg, &arest, &TensorWord(cj))?;
        let part = bilinear(&left, &right, |u, v| {
            Ok(LinComb::single(ring, u.concat(v)))
        })?;
        out = out.add(&part)?;
    }
    Ok(out)
}

/// Star on single words by the extension formulas: each subset of the right
/// word's letters is consumed by the left word, and every consumed position
/// is replaced by `t` in place.
pub fn ghat_star_words<A: PreLie>(
    alg: &A,
    a: &GhatWord<A::Key>,
    b: &GhatWord<A::Key>,
) -> Result<GhatElement<A::Key>> {
    let ring = alg.ring();
    let n = b.0.len();
    let mut out = LinComb::zero(ring);
    for mask in 0u64..(1u64 << n) {
        // Consuming a t contributes nothing.
        if (0..n).any(|i| mask >> i & 1 == 1 && b.0[i] == GhatLetter::T) {
            continue;
        }
        let consumed: Vec<GhatLetter<A::Key>> = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| b.0[i].clone())
            .collect();
        let deep = deep_circ(alg, a, &TensorWord(consumed))?;
        let tail: Vec<GhatLetter<A::Key>> = (0..n)
            .map(|i| {
                if mask >> i & 1 == 1 {
                    GhatLetter::T
                } else {
                    b.0[i].clone()
                }
            })
            .collect();
        for (w, c) in deep.terms() {
            out.add_term(w.concat(&TensorWord(tail.clone())), c)?;
        }
    }
    Ok(out)
}

/// Star on single words by peeling the right word only: trailing `t`s come
/// off as one-sided concatenation, a single generator on the right acts on
/// every generator of the left word with a `t` appended, and a longer right
/// word is peeled with the correction dictated by the degree-by-degree
/// construction of the enveloping-side isomorphism.
pub fn ghat_star_words_peel<A: PreLie>(
    alg: &A,
    w: &GhatWord<A::Key>,
    v: &GhatWord<A::Key>,
) -> Result<GhatElement<A::Key>> {
    let ring = alg.ring();
    if v.0.is_empty() {
        return Ok(LinComb::single(ring, w.clone()));
    }
    if *v.0.last().unwrap() == GhatLetter::T {
        let vp = TensorWord(v.0[..v.0.len() - 1].to_vec());
        return ghat_star_words_peel(alg, w, &vp)?.map_keys(|u| {
            let mut u2 = u.0.clone();
            u2.push(GhatLetter::T);
            TensorWord(u2)
        });
    }
    let GhatLetter::Gen(x) = v.0.last().unwrap() else {
        unreachable!()
    };
    if v.0.len() == 1 {
        let mut appended = w.0.clone();
        appended.push(GhatLetter::Gen(x.clone()));
        let mut out = LinComb::single(ring, TensorWord(appended));
        for i in 0..w.0.len() {
            let GhatLetter::Gen(g) = &w.0[i] else {
                continue;
            };
            for (h, c) in alg.key_product(g, x)?.terms() {
                let mut replaced = w.0.clone();
                replaced[i] = GhatLetter::Gen(h.clone());
                replaced.push(GhatLetter::T);
                out.add_term(TensorWord(replaced), c)?;
            }
        }
        return Ok(out);
    }
    // w*(v'·x) = (w*v')*x - Σᵢ (w * v'[i -> v'ᵢ∘x])·t.
    let vp = TensorWord(v.0[..v.0.len() - 1].to_vec());
    let x_word = TensorWord(vec![GhatLetter::Gen(x.clone())]);
    let mut out = ghat_star_words_peel(alg, w, &vp)?
        .map_linear(|u| ghat_star_words_peel(alg, u, &x_word))?;
    for i in 0..vp.0.len() {
        let GhatLetter::Gen(g) = &vp.0[i] else {
            continue;
        };
        for (h, c) in alg.key_product(g, x)?.terms() {
            let mut replaced = vp.0.clone();
            replaced[i] = GhatLetter::Gen(h.clone());
            replaced.push(GhatLetter::T);
            let part = ghat_star_words_peel(alg, w, &TensorWord(replaced))?;
            out = out.sub(&part.scale(c)?)?;
        }
    }
    Ok(out)
}

fn cap_checked_bilinear<A: PreLie>(
    alg: &A,
    a: &GhatElement<A::Key>,
    b: &GhatElement<A::Key>,
    cap: usize,
    f: impl Fn(&GhatWord<A::Key>, &GhatWord<A::Key>) -> Result<GhatElement<A::Key>>,
) -> Result<GhatElement<A::Key>> {
    let _ = alg;
    for wa in a.keys() {
        for wb in b.keys() {
            let got = wa.len() + wb.len();
            if got > cap {
                return Err(Error::CapExceeded { got, cap });
            }
        }
    }
    bilinear(a, b, |wa, wb| f(wa, wb))
}

/// The star product, extended bilinearly; every term pair must have total
/// word length within the cap.
pub fn ghat_star<A: PreLie>(
    alg: &A,
    a: &GhatElement<A::Key>,
    b: &GhatElement<A::Key>,
    cap: usize,
) -> Result<GhatElement<A::Key>> {
    cap_checked_bilinear(alg, a, b, cap, |wa, wb| ghat_star_words(alg, wa, wb))
}

/// The star product computed by the right-peeling construction; used as the
/// independent second route in [`verify_ghat_theorem`].
pub fn ghat_star_peel<A: PreLie>(
    alg: &A,
    a: &GhatElement<A::Key>,
    b: &GhatElement<A::Key>,
    cap: usize,
) -> Result<GhatElement<A::Key>> {
    cap_checked_bilinear(alg, a, b, cap, |wa, wb| ghat_star_words_peel(alg, wa, wb))
}

/// Forgets `t`: drops the `t`-letters of every word and collects the
/// remaining generators into a commutative monomial.
pub fn project_t_to_one<K: Ord + Clone>(e: &GhatElement<K>) -> Result<SymElement<K>> {
    e.map_keys(|w| {
        let (_, gens) = slot_normalize(w);
        SymMonomial::from_factors(gens.0)
    })
}

/// All words over `{t} ∪ keys` whose total weight is within the cap; `t`
/// counts 1, generators count their given weight.
pub fn ghat_words_up_to<K: Ord + Clone>(
    keys: &[K],
    weight: impl Fn(&K) -> usize,
    cap: usize,
) -> Vec<GhatWord<K>> {
    let mut letters: Vec<(GhatLetter<K>, usize)> = vec![(GhatLetter::T, 1)];
    for k in keys {
        letters.push((GhatLetter::Gen(k.clone()), weight(k).max(1)));
    }
    let mut out: Vec<(Vec<GhatLetter<K>>, usize)> = vec![(Vec::new(), 0)];
    let mut frontier = out.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (w, used) in &frontier {
            for (l, lw) in &letters {
                if used + lw <= cap {
                    let mut w2 = w.clone();
                    w2.push(l.clone());
                    next.push((w2, used + lw));
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    let mut words: Vec<GhatWord<K>> = out.into_iter().map(|(w, _)| TensorWord(w)).collect();
    words.sort();
    words
}

/// The unshuffle coproduct taken `k[t]`-linearly: the `t`-letters of a word
/// are pulled out as a global exponent and only the generator letters are
/// distributed over the two legs, keeping relative order.
fn slotted_coproduct<K: Ord + Clone>(
    w: &GhatWord<K>,
    ring: &crate::ring::RingSpec,
) -> Result<LinComb<(usize, TensorWord<K>, TensorWord<K>)>> {
    let (ts, gens) = slot_normalize(w);
    let n = gens.0.len();
    let one = Scalar::one(ring);
    let mut out = LinComb::zero(ring);
    for mask in 0u64..(1u64 << n) {
        let mut left = Vec::new();
        let mut right = Vec::new();
        for (i, g) in gens.0.iter().enumerate() {
            if mask >> i & 1 == 1 {
                left.push(g.clone());
            } else {
                right.push(g.clone());
            }
        }
        out.add_term((ts, TensorWord(left), TensorWord(right)), &one)?;
    }
    Ok(out)
}

/// Outcome of the star-product checks on words over `{t} ∪ basis`; `None`
/// per field means the check passed.
#[derive(Debug, Clone, serde::Serialize)]
pub struct GhatTheoremReport {
    pub associativity: Option<String>,
    pub coproduct_compat: Option<String>,
    pub graded_top: Option<String>,
    pub t_central: Option<String>,
    pub degree_floor: Option<String>,
    pub routes_agree: Option<String>,
}

impl GhatTheoremReport {
    pub fn all_pass(&self) -> bool {
        self.associativity.is_none()
            && self.coproduct_compat.is_none()
            && self.graded_top.is_none()
            && self.t_central.is_none()
            && self.degree_floor.is_none()
            && self.routes_agree.is_none()
    }
}

impl fmt::Display for GhatTheoremReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let line = |name: &str, v: &Option<String>| match v {
            None => format!("{name}: pass"),
            Some(ce) => format!("{name}: FAIL ({ce})"),
        };
        writeln!(f, "{}", line("associativity", &self.associativity))?;
        writeln!(f, "{}", line("coproduct-compat", &self.coproduct_compat))?;
        writeln!(f, "{}", line("graded-top", &self.graded_top))?;
        writeln!(f, "{}", line("t-central", &self.t_central))?;
        writeln!(f, "{}", line("degree-floor", &self.degree_floor))?;
        write!(f, "{}", line("routes-agree", &self.routes_agree))
    }
}

/// Verifies the star product on all words of total weight within the cap:
/// associativity, compatibility with the `k[t]`-linear unshuffle coproduct,
/// the filtration by generator count with concatenation as top part,
/// one-sided concatenation with `t`, the floor condition that a `t`-free
/// left word of length `m` keeps its first `m` positions generator-valued,
/// and agreement of the two construction routes.
pub fn verify_ghat_theorem<A: PreLie>(
    alg: &A,
    keys: &[A::Key],
    weight: impl Fn(&A::Key) -> usize,
    cap: usize,
) -> Result<GhatTheoremReport> {
    let ring = alg.ring();
    let words = ghat_words_up_to(keys, &weight, cap);
    let wweight = |w: &GhatWord<A::Key>| -> usize {
        w.0.iter()
            .map(|l| match l {
                GhatLetter::Gen(k) => weight(k).max(1),
                GhatLetter::T => 1,
            })
            .sum()
    };

    let mut associativity = None;
    'assoc: for w1 in &words {
        for w2 in &words {
            if wweight(w1) + wweight(w2) > cap {
                continue;
            }
            for w3 in &words {
                if wweight(w1) + wweight(w2) + wweight(w3) > cap {
                    continue;
                }
                let left = ghat_star_words(alg, w1, w2)?
                    .map_linear(|u| ghat_star_words(alg, u, w3))?;
                let right = ghat_star_words(alg, w2, w3)?
                    .map_linear(|u| ghat_star_words(alg, w1, u))?;
                if left != right {
                    associativity =
                        Some(format!("(a*b)*c != a*(b*c) at a = {w1}, b = {w2}, c = {w3}"));
                    break 'assoc;
                }
            }
        }
    }

    let mut coproduct_compat = None;
    let mut graded_top = None;
    let mut degree_floor = None;
    let mut routes_agree = None;
    for a in &words {
        for b in &words {
            if wweight(a) + wweight(b) > cap {
                continue;
            }
            let prod = ghat_star_words(alg, a, b)?;

            if routes_agree.is_none() {
                let peeled = ghat_star_words_peel(alg, a, b)?;
                if prod != peeled {
                    routes_agree = Some(format!(
                        "formulas and peeling disagree at a = {a}, b = {b}: difference {}",
                        prod.sub(&peeled)?
                    ));
                }
            }

            if coproduct_compat.is_none() {
                let lhs = prod.map_linear(|w| slotted_coproduct(w, ring))?;
                let da = slotted_coproduct(a, ring)?;
                let db = slotted_coproduct(b, ring)?;
                let rhs = bilinear(&da, &db, |(ta, al, ar), (tb, bl, br)| {
                    let s1 = ghat_star_words(alg, &gen_word(&al.0), &gen_word(&bl.0))?;
                    let s2 = ghat_star_words(alg, &gen_word(&ar.0), &gen_word(&br.0))?;
                    bilinear(&s1, &s2, |u1, u2| {
                        let (t1, g1) = slot_normalize(u1);
                        let (t2, g2) = slot_normalize(u2);
                        Ok(LinComb::single(ring, (ta + tb + t1 + t2, g1, g2)))
                    })
                })?;
                if lhs != rhs {
                    coproduct_compat =
                        Some(format!("Δ(a*b) != Δ(a)*Δ(b) at a = {a}, b = {b}"));
                }
            }

            if graded_top.is_none() {
                let top_gens = gen_count(a) + gen_count(b);
                let concat = a.concat(b);
                for (w, c) in prod.terms() {
                    if w.len() != a.len() + b.len() {
                        graded_top = Some(format!(
                            "a*b has a term of the wrong length at a = {a}, b = {b}: {w}"
                        ));
                        break;
                    }
                    let gc = gen_count(w);
                    if gc > top_gens || (gc == top_gens && (*w != concat || !c.is_one())) {
                        graded_top = Some(format!(
                            "top part of a*b is not the concatenation at a = {a}, b = {b}: {c}·{w}"
                        ));
                        break;
                    }
                }
                if graded_top.is_none() && !prod.coeff(&concat).is_one() {
                    graded_top =
                        Some(format!("a*b misses the concatenation at a = {a}, b = {b}"));
                }
            }

            if degree_floor.is_none() && is_t_free(a) {
                let m = a.len();
                for w in prod.keys() {
                    if w.0.len() < m
                        || w.0[..m].iter().any(|l| matches!(l, GhatLetter::T))
                    {
                        degree_floor = Some(format!(
                            "term of a*b escapes the left floor at a = {a}, b = {b}: {w}"
                        ));
                        break;
                    }
                }
            }
        }
    }

    let mut t_central = None;
    let t_word = TensorWord(vec![GhatLetter::<A::Key>::T]);
    for w in &words {
        if wweight(w) + 1 > cap {
            continue;
        }
        let right = ghat_star_words(alg, w, &t_word)?;
        let left = ghat_star_words(alg, &t_word, w)?;
        if right != LinComb::single(ring, w.concat(&t_word)) {
            t_central = Some(format!("w*t != wt at w = {w}"));
            break;
        }
        if left != LinComb::single(ring, t_word.concat(w)) {
            t_central = Some(format!("t*w != tw at w = {w}"));
            break;
        }
    }

    Ok(GhatTheoremReport {
        associativity,
        coproduct_compat,
        graded_top,
        t_central,
        degree_floor,
        routes_agree,
    })
}
