//! The twisted symmetric algebra on an S-module and its star product.
//!
//! A degree-p basis monomial is an unordered collection of factors, each a
//! basis element of the underlying module together with the set of letter
//! slots it occupies; the slot sets partition `{0, …, p-1}`. Keeping slots
//! global makes the braiding a literal factor swap, so the commutative
//! product is concatenation, the coproduct enumerates factor subsets, and
//! the shuffle permutations of the twisted formulas never appear explicitly.
//! The only places a symmetric group acts are the slot permutation of a
//! monomial and the interleaving step when two factors combine through the
//! underlying bilinear operation.
//!
//! The star product extends the operation by the same three-step recursion
//! as in the plain commutative case: peel the last factor of the right
//! argument, split the left argument against the coproduct of the right,
//! and finish with `a★b = Σ (a∘b′)·b″`. It requires the operation to be
//! twisted pre-Lie and refuses otherwise.

use std::fmt;

use crate::error::Error;
use crate::lincomb::{bilinear, LinComb};
use crate::perm::Perm;
use crate::ring::Scalar;
use crate::smodule::{check_twisted_axiom, unit_vec, SModule, TwistedAxiom, TwistedBilinearOp};
use crate::Result;

/// A basis monomial of the twisted symmetric algebra: factors `(slots, b)`
/// hold a sorted set of global letter slots and a basis index of the module
/// in degree `slots.len()`. The factor list is kept sorted, so equal
/// monomials compare equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TwMonomial {
    factors: Vec<(Vec<usize>, usize)>,
}

impl TwMonomial {
    pub fn unit() -> Self {
        TwMonomial { factors: Vec::new() }
    }

    /// Build from factor data in any order; slots inside a factor and the
    /// factor list itself are sorted.
    pub fn from_parts(mut factors: Vec<(Vec<usize>, usize)>) -> Self {
        for (slots, _) in &mut factors {
            slots.sort_unstable();
        }
        factors.sort();
        TwMonomial { factors }
    }

    /// The standard layout for a list of `(degree, basis index)` factors:
    /// consecutive slot blocks in the given order.
    pub fn from_degrees(module: &SModule, parts: &[(usize, usize)]) -> Result<Self> {
        let mut factors = Vec::with_capacity(parts.len());
        let mut next = 0;
        for &(m, b) in parts {
            if b >= module.dim(m) {
                return Err(Error::UnknownBasisKey(format!("index {b} in degree {m}")));
            }
            factors.push(((next..next + m).collect(), b));
            next += m;
        }
        Ok(TwMonomial::from_parts(factors))
    }

    pub fn factors(&self) -> &[(Vec<usize>, usize)] {
        &self.factors
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.factors.iter().map(|(s, _)| s.len()).sum()
    }

    /// Slot sets must partition `{0, …, degree-1}` and basis indices must
    /// exist in the module.
    pub fn validate(&self, module: &SModule) -> Result<()> {
        let p = self.degree();
        let mut seen = vec![false; p];
        for (slots, b) in &self.factors {
            if *b >= module.dim(slots.len()) {
                return Err(Error::UnknownBasisKey(format!(
                    "index {b} in degree {}",
                    slots.len()
                )));
            }
            for &s in slots {
                if s >= p || seen[s] {
                    return Err(Error::Invalid(format!("slot sets do not partition 0..{p}")));
                }
                seen[s] = true;
            }
        }
        Ok(())
    }

    fn shifted(&self, offset: usize) -> TwMonomial {
        TwMonomial::from_parts(
            self.factors
                .iter()
                .map(|(slots, b)| (slots.iter().map(|s| s + offset).collect(), *b))
                .collect(),
        )
    }

    fn split_last(&self) -> (TwMonomial, TwMonomial) {
        let mut rest = self.factors.clone();
        let last = rest.pop().expect("split_last needs a factor");
        (TwMonomial { factors: rest }, TwMonomial { factors: vec![last] })
    }

    fn split_first(&self) -> (TwMonomial, TwMonomial) {
        let mut rest = self.factors.clone();
        let first = rest.remove(0);
        (TwMonomial { factors: vec![first] }, TwMonomial { factors: rest })
    }

    /// All splits of the factor multiset into an ordered pair of
    /// submonomials, one per index subset.
    fn splits(&self) -> Vec<(TwMonomial, TwMonomial)> {
        let r = self.factors.len();
        let mut out = Vec::with_capacity(1 << r);
        for mask in 0..(1u32 << r) {
            let mut left = Vec::new();
            let mut right = Vec::new();
            for (i, f) in self.factors.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    left.push(f.clone());
                } else {
                    right.push(f.clone());
                }
            }
            out.push((TwMonomial { factors: left }, TwMonomial { factors: right }));
        }
        out
    }
}

impl fmt::Display for TwMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(slots, b)| {
                let inner: Vec<String> = slots.iter().map(|s| s.to_string()).collect();
                format!("#{b}@[{}]", inner.join(","))
            })
            .collect();
        write!(f, "{}", parts.join("·"))
    }
}

/// An element of the twisted symmetric algebra.
pub type TwElement = LinComb<TwMonomial>;

/// An element of its tensor square, with global slots shared across the two
/// legs.
pub type TwPairElement = LinComb<(TwMonomial, TwMonomial)>;

/// Render a monomial with the module's basis names.
pub fn format_tw_monomial(module: &SModule, mono: &TwMonomial) -> String {
    if mono.is_unit() {
        return "1".to_string();
    }
    let parts: Vec<String> = mono
        .factors()
        .iter()
        .map(|(slots, b)| {
            let name = &module.basis(slots.len())[*b];
            let inner: Vec<String> = slots.iter().map(|s| s.to_string()).collect();
            format!("{name}@[{}]", inner.join(","))
        })
        .collect();
    parts.join("·")
}

/// The common degree of all monomials of a homogeneous element; zero
/// elements count as degree zero.
pub fn homogeneous_degree(elem: &TwElement) -> Result<usize> {
    let mut degree = None;
    for mono in elem.keys() {
        let d = mono.degree();
        match degree {
            None => degree = Some(d),
            Some(expected) if expected != d => {
                return Err(Error::NonHomogeneousInput(expected, d));
            }
            _ => {}
        }
    }
    Ok(degree.unwrap_or(0))
}

fn concat_raw(a: &TwMonomial, b: &TwMonomial) -> TwMonomial {
    let mut factors = a.factors.clone();
    factors.extend(b.factors.iter().cloned());
    TwMonomial::from_parts(factors)
}

/// Apply a slot permutation to a homogeneous element: factor slot sets move
/// to their images and each factor picks up the inner permutation given by
/// the induced reordering of its slots.
pub fn tw_act_perm(module: &SModule, tau: &Perm, elem: &TwElement) -> Result<TwElement> {
    let ring = module.ring().clone();
    elem.map_linear(|mono| {
        if tau.degree() != mono.degree() {
            return Err(Error::SizeMismatch(format!(
                "permutation of degree {} applied to a degree-{} monomial",
                tau.degree(),
                mono.degree()
            )));
        }
        let mut acc = LinComb::single(&ring, TwMonomial::unit());
        for (slots, b) in mono.factors() {
            let m = slots.len();
            let images: Vec<usize> = slots.iter().map(|&s| tau.apply(s)).collect();
            let mut sorted = images.clone();
            sorted.sort_unstable();
            let inner = Perm::new(
                images.iter().map(|x| sorted.binary_search(x).unwrap()).collect(),
            )?;
            let v = module.act_perm(m, &inner, &unit_vec(&ring, module.dim(m), *b))?;
            let mut factor_comb = LinComb::zero(&ring);
            for (k, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    factor_comb
                        .add_term(TwMonomial::from_parts(vec![(sorted.clone(), k)]), c)?;
                }
            }
            acc = bilinear(&acc, &factor_comb, |m1, m2| {
                Ok(LinComb::single(&ring, concat_raw(m1, m2)))
            })?;
        }
        Ok(acc)
    })
}

/// The twisted commutative product: the right argument's slots are shifted
/// past the left argument's degree and the factor lists concatenate.
pub fn tw_product(a: &TwElement, b: &TwElement) -> Result<TwElement> {
    let p = homogeneous_degree(a)?;
    homogeneous_degree(b)?;
    let shifted = b.map_keys(|m| m.shifted(p))?;
    bilinear(a, &shifted, |ma, mb| Ok(LinComb::single(a.ring(), concat_raw(ma, mb))))
}

/// The twisted coproduct: every split of the factor multiset, with each side
/// keeping its global slots.
pub fn tw_coproduct(elem: &TwElement) -> Result<TwPairElement> {
    let ring = elem.ring().clone();
    elem.map_linear(|mono| {
        let mut out = LinComb::zero(&ring);
        for pair in mono.splits() {
            out.add_term(pair, &Scalar::one(&ring))?;
        }
        Ok(out)
    })
}

fn circ_factors(
    op: &TwistedBilinearOp,
    (sx, bx): &(Vec<usize>, usize),
    (sy, by): &(Vec<usize>, usize),
) -> Result<TwElement> {
    let module = op.target();
    let ring = module.ring();
    let m = sx.len();
    let n = sy.len();
    let v = op.apply(
        m,
        n,
        &unit_vec(ring, op.left().dim(m), *bx),
        &unit_vec(ring, op.right().dim(n), *by),
    )?;
    let mut union: Vec<usize> = sx.iter().chain(sy.iter()).copied().collect();
    union.sort_unstable();
    let images: Vec<usize> = sx
        .iter()
        .chain(sy.iter())
        .map(|s| union.binary_search(s).unwrap())
        .collect();
    let interleave = Perm::new(images)?;
    let w = module.act_perm(m + n, &interleave, &v)?;
    let mut out = LinComb::zero(ring);
    for (k, c) in w.iter().enumerate() {
        if !c.is_zero() {
            out.add_term(TwMonomial::from_parts(vec![(union.clone(), k)]), c)?;
        }
    }
    Ok(out)
}

fn circ_elems(op: &TwistedBilinearOp, a: &TwElement, b: &TwElement) -> Result<TwElement> {
    bilinear(a, b, |ma, mb| circ_mono(op, ma, mb))
}

fn circ_mono(op: &TwistedBilinearOp, a: &TwMonomial, b: &TwMonomial) -> Result<TwElement> {
    let ring = op.target().ring();
    if b.is_unit() {
        return Ok(LinComb::single(ring, a.clone()));
    }
    if a.is_unit() {
        return Ok(LinComb::zero(ring));
    }
    if a.num_factors() == 1 {
        if b.num_factors() == 1 {
            return circ_factors(op, &a.factors()[0], &b.factors()[0]);
        }
        let (rest, last) = b.split_last();
        let peeled = circ_mono(op, a, &rest)?;
        let term1 = circ_elems(op, &peeled, &LinComb::single(ring, last.clone()))?;
        let absorbed = circ_mono(op, &rest, &last)?;
        let term2 = circ_elems(op, &LinComb::single(ring, a.clone()), &absorbed)?;
        return term1.sub(&term2);
    }
    let (head, tail) = a.split_first();
    let mut out = LinComb::zero(ring);
    for (left, right) in b.splits() {
        let first = circ_mono(op, &head, &left)?;
        let second = circ_mono(op, &tail, &right)?;
        let product = bilinear(&first, &second, |m1, m2| {
            Ok(LinComb::single(ring, concat_raw(m1, m2)))
        })?;
        out = out.add(&product)?;
    }
    Ok(out)
}

fn star_mono(op: &TwistedBilinearOp, a: &TwMonomial, b: &TwMonomial) -> Result<TwElement> {
    let ring = op.target().ring();
    let mut out = LinComb::zero(ring);
    for (left, right) in b.splits() {
        let circ = circ_mono(op, a, &left)?;
        for (mono, c) in circ.terms() {
            out.add_term(concat_raw(mono, &right), c)?;
        }
    }
    Ok(out)
}

fn check_inputs(
    op: &TwistedBilinearOp,
    a: &TwElement,
    b: &TwElement,
    cap: usize,
) -> Result<(usize, usize)> {
    let module = op.target();
    let p = homogeneous_degree(a)?;
    let q = homogeneous_degree(b)?;
    if p + q > cap {
        return Err(Error::CapExceeded { got: p + q, cap });
    }
    for mono in a.keys().chain(b.keys()) {
        mono.validate(module)?;
    }
    Ok((p, q))
}

fn star_of(op: &TwistedBilinearOp, a: &TwElement, b: &TwElement, cap: usize) -> Result<TwElement> {
    let (p, _) = check_inputs(op, a, b, cap)?;
    let shifted = b.map_keys(|m| m.shifted(p))?;
    bilinear(a, &shifted, |ma, mb| star_mono(op, ma, mb))
}

/// The extension of the operation itself: the right argument's slots are
/// shifted past the left argument's degree first.
pub fn twisted_circ(
    op: &TwistedBilinearOp,
    a: &TwElement,
    b: &TwElement,
    cap: usize,
) -> Result<TwElement> {
    let (p, _) = check_inputs(op, a, b, cap)?;
    let shifted = b.map_keys(|m| m.shifted(p))?;
    circ_elems(op, a, &shifted)
}

/// The star product on homogeneous elements, with the right argument's slots
/// shifted past the left argument's degree. The operation must satisfy the
/// twisted pre-Lie identity.
pub fn twisted_star(
    op: &TwistedBilinearOp,
    a: &TwElement,
    b: &TwElement,
    cap: usize,
) -> Result<TwElement> {
    if let Some(witness) = check_twisted_axiom(op, TwistedAxiom::PreLie)? {
        return Err(Error::NotTwistedPreLie(witness));
    }
    star_of(op, a, b, cap)
}

/// Standard-layout monomials: one representative per factor multiset, with
/// consecutive slot blocks in sorted factor order. Every basis monomial is a
/// slot permutation of exactly one of these.
pub fn tw_monomials_up_to(
    module: &SModule,
    max_degree: usize,
    max_factors: usize,
) -> Result<Vec<TwMonomial>> {
    let mut keys = Vec::new();
    for m in 0..=module.max_degree() {
        for b in 0..module.dim(m) {
            keys.push((m, b));
        }
    }
    let mut out = Vec::new();
    let mut current: Vec<(usize, usize)> = Vec::new();
    fn rec(
        module: &SModule,
        keys: &[(usize, usize)],
        start: usize,
        degree_left: usize,
        count_left: usize,
        current: &mut Vec<(usize, usize)>,
        out: &mut Vec<TwMonomial>,
    ) -> Result<()> {
        out.push(TwMonomial::from_degrees(module, current)?);
        if count_left == 0 {
            return Ok(());
        }
        for k in start..keys.len() {
            if keys[k].0 <= degree_left {
                current.push(keys[k]);
                rec(module, keys, k, degree_left - keys[k].0, count_left - 1, current, out)?;
                current.pop();
            }
        }
        Ok(())
    }
    rec(module, &keys, 0, max_degree, max_factors, &mut current, &mut out)?;
    Ok(out)
}

/// Outcome of sweeping the star product over standard monomials within the
/// degree cap: associativity, compatibility with the twisted coproduct, the
/// filtration by factor count with concatenation as top part, the floor
/// condition that left factors are never destroyed, and equivariance under
/// the slot actions of both arguments.
#[derive(Debug, Clone)]
pub struct TwistedStarReport {
    pub associativity: Option<String>,
    pub coproduct_compat: Option<String>,
    pub graded_top: Option<String>,
    pub degree_floor: Option<String>,
    pub equivariance: Option<String>,
    pub pairs: usize,
    pub triples: usize,
}

impl TwistedStarReport {
    pub fn all_pass(&self) -> bool {
        self.associativity.is_none()
            && self.coproduct_compat.is_none()
            && self.graded_top.is_none()
            && self.degree_floor.is_none()
            && self.equivariance.is_none()
    }
}

impl fmt::Display for TwistedStarReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let line = |name: &str, v: &Option<String>| match v {
            None => format!("{name}: pass"),
            Some(ce) => format!("{name}: FAIL ({ce})"),
        };
        writeln!(f, "{}", line("associativity", &self.associativity))?;
        writeln!(f, "{}", line("coproduct-compat", &self.coproduct_compat))?;
        writeln!(f, "{}", line("graded-top", &self.graded_top))?;
        writeln!(f, "{}", line("degree-floor", &self.degree_floor))?;
        write!(f, "{}", line("equivariance", &self.equivariance))
    }
}

/// Verifies the star product over all standard monomials whose degrees and
/// factor counts fit the cap. Refuses with `NotTwistedPreLie` when the
/// operation fails its own axiom.
pub fn verify_twisted_star(op: &TwistedBilinearOp, cap: usize) -> Result<TwistedStarReport> {
    if let Some(witness) = check_twisted_axiom(op, TwistedAxiom::PreLie)? {
        return Err(Error::NotTwistedPreLie(witness));
    }
    let module = op.target();
    let ring = module.ring();
    let monos = tw_monomials_up_to(module, cap, cap)?;
    let mut report = TwistedStarReport {
        associativity: None,
        coproduct_compat: None,
        graded_top: None,
        degree_floor: None,
        equivariance: None,
        pairs: 0,
        triples: 0,
    };
    let describe = |ms: &[&TwMonomial]| {
        let parts: Vec<String> = ms.iter().map(|m| format_tw_monomial(module, m)).collect();
        parts.join(" , ")
    };
    for am in &monos {
        for bm in &monos {
            let (p, q) = (am.degree(), bm.degree());
            if p + q > cap || am.num_factors() + bm.num_factors() > cap {
                continue;
            }
            report.pairs += 1;
            let a = LinComb::single(ring, am.clone());
            let b = LinComb::single(ring, bm.clone());
            let ab = star_of(op, &a, &b, cap)?;

            let total = am.num_factors() + bm.num_factors();
            let mut top = LinComb::zero(ring);
            let mut floor_ok = true;
            for (mono, c) in ab.terms() {
                if mono.num_factors() == total {
                    top.add_term(mono.clone(), c)?;
                }
                if mono.num_factors() < am.num_factors() {
                    floor_ok = false;
                }
            }
            if top != tw_product(&a, &b)? && report.graded_top.is_none() {
                report.graded_top = Some(describe(&[am, bm]));
            }
            if !floor_ok && report.degree_floor.is_none() {
                report.degree_floor = Some(describe(&[am, bm]));
            }

            let lhs = tw_coproduct(&ab)?;
            let b_shifted = b.map_keys(|m| m.shifted(p))?;
            let rhs = bilinear(
                &tw_coproduct(&a)?,
                &tw_coproduct(&b_shifted)?,
                |(a1, a2), (b1, b2)| {
                    bilinear(&star_mono(op, a1, b1)?, &star_mono(op, a2, b2)?, |l, r| {
                        Ok(LinComb::single(ring, (l.clone(), r.clone())))
                    })
                },
            )?;
            if lhs != rhs && report.coproduct_compat.is_none() {
                report.coproduct_compat = Some(describe(&[am, bm]));
            }

            if report.equivariance.is_none() {
                for i in 0..p.saturating_sub(1) {
                    let sa = tw_act_perm(module, &Perm::transposition(p, i)?, &a)?;
                    let lhs = star_of(op, &sa, &b, cap)?;
                    let rhs = tw_act_perm(module, &Perm::transposition(p + q, i)?, &ab)?;
                    if lhs != rhs {
                        report.equivariance = Some(describe(&[am, bm]));
                        break;
                    }
                }
            }
            if report.equivariance.is_none() {
                for j in 0..q.saturating_sub(1) {
                    let sb = tw_act_perm(module, &Perm::transposition(q, j)?, &b)?;
                    let lhs = star_of(op, &a, &sb, cap)?;
                    let rhs = tw_act_perm(module, &Perm::transposition(p + q, p + j)?, &ab)?;
                    if lhs != rhs {
                        report.equivariance = Some(describe(&[am, bm]));
                        break;
                    }
                }
            }
        }
    }
    for am in &monos {
        for bm in &monos {
            for cm in &monos {
                if am.degree() + bm.degree() + cm.degree() > cap
                    || am.num_factors() + bm.num_factors() + cm.num_factors() > cap
                {
                    continue;
                }
                report.triples += 1;
                let a = LinComb::single(ring, am.clone());
                let b = LinComb::single(ring, bm.clone());
                let c = LinComb::single(ring, cm.clone());
                let left = star_of(op, &star_of(op, &a, &b, cap)?, &c, cap)?;
                let right = star_of(op, &a, &star_of(op, &b, &c, cap)?, cap)?;
                if left != right && report.associativity.is_none() {
                    report.associativity = Some(describe(&[am, bm, cm]));
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebras;
    use crate::hopf;
    use crate::lincomb::SymMonomial;
    use crate::prelie::TablePreLie;
    use crate::ring::RingSpec;
    use crate::smodule::{
        degree_zero_product, random_graded_op, random_involution_module, suspend_circ,
    };
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeMap;

    fn q() -> RingSpec {
        RingSpec::rational()
    }

    fn fp(p: u64) -> RingSpec {
        RingSpec::prime_field(p).unwrap()
    }

    fn one_dim_scaled(ring: &RingSpec, lambda: i64) -> TablePreLie {
        let mut v = LinComb::zero(ring);
        v.add_term(0usize, &Scalar::from_integer(ring, lambda)).unwrap();
        TablePreLie::new(ring, &["e1"], vec![vec![v]]).unwrap()
    }

    #[test]
    fn unit_is_neutral_for_the_star() {
        let op = suspend_circ(&algebras::nilpotent_2dim(&q()).unwrap(), 2).unwrap();
        let module = op.target();
        let a = LinComb::single(
            module.ring(),
            TwMonomial::from_degrees(module, &[(1, 0), (2, 1)]).unwrap(),
        );
        let unit = LinComb::single(module.ring(), TwMonomial::unit());
        assert_eq!(twisted_star(&op, &a, &unit, 4).unwrap(), a);
        assert_eq!(twisted_star(&op, &unit, &a, 4).unwrap(), a);
    }

    #[test]
    fn generator_star_is_product_plus_operation() {
        let op = suspend_circ(&algebras::nilpotent_2dim(&q()).unwrap(), 2).unwrap();
        let module = op.target();
        let ring = module.ring();
        let x = LinComb::single(ring, TwMonomial::from_degrees(module, &[(1, 0)]).unwrap());
        let out = twisted_star(&op, &x, &x, 4).unwrap();
        // x★x = x·x + x∘x, where x∘x puts the product value in the slot of
        // the left letter: basis index 1 of degree 2 with slot set {0,1}.
        let mut expected = tw_product(&x, &x).unwrap();
        expected
            .add_term(TwMonomial::from_parts(vec![(vec![0, 1], 1)]), &Scalar::one(ring))
            .unwrap();
        assert_eq!(out, expected);
    }

    #[test]
    fn degree_zero_star_matches_the_commutative_star() {
        for (alg, cap) in [
            (algebras::nilpotent_2dim(&q()).unwrap(), 4),
            (algebras::chain_3dim(&fp(5)).unwrap(), 3),
        ] {
            let op = degree_zero_product(&alg).unwrap();
            let module = op.target();
            let ring = module.ring();
            let monos = tw_monomials_up_to(module, 0, cap).unwrap();
            for am in &monos {
                for bm in &monos {
                    if am.num_factors() + bm.num_factors() > cap {
                        continue;
                    }
                    let a = LinComb::single(ring, am.clone());
                    let b = LinComb::single(ring, bm.clone());
                    let twisted = twisted_star(&op, &a, &b, cap).unwrap();
                    let to_sym = |m: &TwMonomial| {
                        SymMonomial::from_factors(
                            m.factors().iter().map(|(_, b)| *b).collect::<Vec<_>>(),
                        )
                    };
                    let sym_a = LinComb::single(ring, to_sym(am));
                    let sym_b = LinComb::single(ring, to_sym(bm));
                    let classical = hopf::star(&alg, &sym_a, &sym_b).unwrap();
                    assert_eq!(twisted.map_keys(|m| to_sym(m)).unwrap(), classical);
                }
            }
        }
    }

    #[test]
    fn zero_operation_gives_a_twisted_commutative_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let ring = fp(5);
        let module = random_involution_module(&ring, 2, 2, &mut rng).unwrap().padded(4);
        let op = TwistedBilinearOp::new(
            module.clone(),
            module.clone(),
            module.clone(),
            BTreeMap::new(),
        )
        .unwrap();
        let monos = tw_monomials_up_to(&module, 2, 2).unwrap();
        for am in &monos {
            for bm in &monos {
                let (p, q) = (am.degree(), bm.degree());
                if p + q > 4 || am.is_unit() || bm.is_unit() {
                    continue;
                }
                let a = LinComb::single(&ring, am.clone());
                let b = LinComb::single(&ring, bm.clone());
                let ab = twisted_star(&op, &a, &b, 4).unwrap();
                assert_eq!(ab, tw_product(&a, &b).unwrap());
                let ba = twisted_star(&op, &b, &a, 4).unwrap();
                let swap = crate::perm::block_perm(&[1, 0], &[q, p]).unwrap();
                assert_eq!(tw_act_perm(&module, &swap, &ba).unwrap(), ab);
            }
        }
    }

    #[test]
    fn star_sweep_passes_for_suspensions() {
        let op = suspend_circ(&algebras::nilpotent_2dim(&q()).unwrap(), 3).unwrap();
        let report = verify_twisted_star(&op, 4).unwrap();
        assert!(report.all_pass(), "{report}");
        assert!(report.pairs > 0 && report.triples > 0);

        let op = suspend_circ(&one_dim_scaled(&fp(3), 2), 3).unwrap();
        let report = verify_twisted_star(&op, 4).unwrap();
        assert!(report.all_pass(), "{report}");
    }

    #[test]
    fn star_sweep_passes_for_random_graded_operations() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for p in [2u64, 3, 5] {
            let ring = fp(p);
            let d1 = rng.gen_range(1..=2);
            let d2 = rng.gen_range(1..=2);
            let op = random_graded_op(&ring, d1, d2, 4, &mut rng).unwrap();
            let report = verify_twisted_star(&op, 4).unwrap();
            assert!(report.all_pass(), "p={p}: {report}");
        }
    }

    #[test]
    fn non_prelie_operations_are_refused() {
        let op = suspend_circ(&algebras::non_prelie_control().unwrap(), 2).unwrap();
        let module = op.target();
        let x = LinComb::single(module.ring(), TwMonomial::from_degrees(module, &[(1, 0)]).unwrap());
        let err = twisted_star(&op, &x, &x, 4).unwrap_err();
        assert!(matches!(err, Error::NotTwistedPreLie(_)), "{err}");
        let err = verify_twisted_star(&op, 3).unwrap_err();
        assert!(matches!(err, Error::NotTwistedPreLie(_)), "{err}");
    }

    #[test]
    fn coproduct_is_coassociative_and_cocommutative() {
        let op = suspend_circ(&algebras::nilpotent_2dim(&q()).unwrap(), 3).unwrap();
        let module = op.target();
        let ring = module.ring();
        for mono in tw_monomials_up_to(module, 4, 4).unwrap() {
            let elem = LinComb::single(ring, mono);
            let delta = tw_coproduct(&elem).unwrap();
            let mut left = LinComb::zero(ring);
            let mut right = LinComb::zero(ring);
            let mut swapped = LinComb::zero(ring);
            for ((u, v), c) in delta.terms() {
                for (u1, u2) in u.splits() {
                    left.add_term((u1, u2, v.clone()), c).unwrap();
                }
                for (v1, v2) in v.splits() {
                    right.add_term((u.clone(), v1, v2), c).unwrap();
                }
                swapped.add_term((v.clone(), u.clone()), c).unwrap();
            }
            assert_eq!(left, right);
            assert_eq!(swapped, delta);
        }
    }

    #[test]
    fn slot_action_composes() {
        let op = suspend_circ(&algebras::chain_3dim(&q()).unwrap(), 2).unwrap();
        let module = op.target();
        let ring = module.ring();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for mono in tw_monomials_up_to(module, 3, 3).unwrap() {
            let p = mono.degree();
            let elem = LinComb::single(ring, mono);
            for _ in 0..4 {
                let sigma = Perm::random(p, &mut rng);
                let tau = Perm::random(p, &mut rng);
                let composed =
                    tw_act_perm(module, &sigma.compose(&tau).unwrap(), &elem).unwrap();
                let stepped =
                    tw_act_perm(module, &sigma, &tw_act_perm(module, &tau, &elem).unwrap())
                        .unwrap();
                assert_eq!(composed, stepped);
            }
        }
    }

    #[test]
    fn caps_and_homogeneity_are_enforced() {
        let op = suspend_circ(&algebras::nilpotent_2dim(&q()).unwrap(), 3).unwrap();
        let module = op.target();
        let ring = module.ring();
        let x = LinComb::single(ring, TwMonomial::from_degrees(module, &[(1, 0)]).unwrap());
        let u = LinComb::single(ring, TwMonomial::from_degrees(module, &[(2, 0)]).unwrap());
        let err = twisted_star(&op, &u, &u, 3).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { got: 4, cap: 3 }), "{err}");
        let mixed = x.add(&u).unwrap();
        let err = twisted_star(&op, &mixed, &x, 4).unwrap_err();
        assert!(matches!(err, Error::NonHomogeneousInput(1, 2)), "{err}");
    }
}
