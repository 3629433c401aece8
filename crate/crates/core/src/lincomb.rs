//! Finite linear combinations over a coefficient ring, plus the two shapes of
//! basis key used everywhere else: tensor words and commutative monomials.
//!
//! A [`LinComb`] stores only nonzero coefficients, so equality of values is
//! equality of the maps. All operations verify the rings of their operands
//! agree rather than coercing.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeSeq;
use serde::Serialize;

use crate::error::Error;
use crate::ring::{RingSpec, Scalar};
use crate::Result;

/// A finite `ring`-linear combination of keys of type `K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinComb<K: Ord + Clone> {
    ring: RingSpec,
    terms: BTreeMap<K, Scalar>,
}

impl<K: Ord + Clone> LinComb<K> {
    pub fn zero(ring: &RingSpec) -> Self {
        LinComb { ring: ring.clone(), terms: BTreeMap::new() }
    }

    /// The single key with coefficient 1.
    pub fn single(ring: &RingSpec, key: K) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(key, Scalar::one(ring));
        LinComb { ring: ring.clone(), terms }
    }

    pub fn with_coeff(ring: &RingSpec, key: K, coeff: Scalar) -> Result<Self> {
        let mut out = LinComb::zero(ring);
        out.add_term(key, &coeff)?;
        Ok(out)
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&K, &Scalar)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    /// Coefficient of `key`, zero if absent.
    pub fn coeff(&self, key: &K) -> Scalar {
        self.terms.get(key).cloned().unwrap_or_else(|| Scalar::zero(&self.ring))
    }

    /// Adds `coeff * key` in place, dropping the entry if it cancels.
    pub fn add_term(&mut self, key: K, coeff: &Scalar) -> Result<()> {
        if self.ring != *coeff.ring() {
            return Err(Error::RingMismatch(self.ring.to_string(), coeff.ring().to_string()));
        }
        let cur = match self.terms.remove(&key) {
            Some(c) => c.add(coeff)?,
            None => coeff.clone(),
        };
        if !cur.is_zero() {
            self.terms.insert(key, cur);
        }
        Ok(())
    }

    pub fn add(&self, other: &LinComb<K>) -> Result<LinComb<K>> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring.to_string(), other.ring.to_string()));
        }
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &LinComb<K>) -> Result<LinComb<K>> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LinComb<K> {
        LinComb {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Result<LinComb<K>> {
        if self.ring != *s.ring() {
            return Err(Error::RingMismatch(self.ring.to_string(), s.ring().to_string()));
        }
        let mut out = LinComb::zero(&self.ring);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), &c.mul(s)?)?;
        }
        Ok(out)
    }

    /// Extends `f` linearly: every key is sent to a combination and the
    /// results are summed with the original coefficients.
    pub fn map_linear<K2, F>(&self, mut f: F) -> Result<LinComb<K2>>
    where
        K2: Ord + Clone,
        F: FnMut(&K) -> Result<LinComb<K2>>,
    {
        let mut out = LinComb::zero(&self.ring);
        for (k, c) in &self.terms {
            let img = f(k)?;
            for (k2, c2) in &img.terms {
                out.add_term(k2.clone(), &c.mul(c2)?)?;
            }
        }
        Ok(out)
    }

    /// Renames keys without touching coefficients.
    pub fn map_keys<K2: Ord + Clone>(&self, mut f: impl FnMut(&K) -> K2) -> Result<LinComb<K2>> {
        let mut out = LinComb::zero(&self.ring);
        for (k, c) in &self.terms {
            out.add_term(f(k), c)?;
        }
        Ok(out)
    }
}

/// Extends a bilinear map of keys to combinations: the coefficient of each
/// output term is the product of the input coefficients.
pub fn bilinear<K1, K2, K3, F>(
    a: &LinComb<K1>,
    b: &LinComb<K2>,
    mut f: F,
) -> Result<LinComb<K3>>
where
    K1: Ord + Clone,
    K2: Ord + Clone,
    K3: Ord + Clone,
    F: FnMut(&K1, &K2) -> Result<LinComb<K3>>,
{
    if a.ring != b.ring {
        return Err(Error::RingMismatch(a.ring.to_string(), b.ring.to_string()));
    }
    let mut out = LinComb::zero(&a.ring);
    for (ka, ca) in &a.terms {
        for (kb, cb) in &b.terms {
            let c = ca.mul(cb)?;
            let img = f(ka, kb)?;
            for (k, ck) in &img.terms {
                out.add_term(k.clone(), &c.mul(ck)?)?;
            }
        }
    }
    Ok(out)
}

impl<K: Ord + Clone + fmt::Display> fmt::Display for LinComb<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = c.to_string();
            let ks = k.to_string();
            if cs == "1" {
                write!(f, "{ks}")?;
            } else if cs.contains(" + ") {
                write!(f, "({cs})*{ks}")?;
            } else {
                write!(f, "{cs}*{ks}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct TermRepr<'a, K> {
    key: &'a K,
    coeff: String,
}

impl<K: Ord + Clone + Serialize> Serialize for LinComb<K> {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = ser.serialize_seq(Some(self.terms.len()))?;
        for (k, c) in &self.terms {
            seq.serialize_element(&TermRepr { key: k, coeff: c.to_string() })?;
        }
        seq.end()
    }
}

/// A word in the tensor algebra over letters of type `L`. Ordered by length,
/// then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct TensorWord<L>(pub Vec<L>);

impl<L: Ord> PartialOrd for TensorWord<L> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl<L: Ord> Ord for TensorWord<L> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl<L> TensorWord<L> {
    pub fn empty() -> Self {
        TensorWord(Vec::new())
    }

    pub fn letter(l: L) -> Self {
        TensorWord(vec![l])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<L: Clone> TensorWord<L> {
    pub fn concat(&self, other: &TensorWord<L>) -> TensorWord<L> {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        TensorWord(v)
    }
}

impl<L: fmt::Display> fmt::Display for TensorWord<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join("·"))
    }
}

/// A commutative monomial: a multiset of keys, stored sorted. Ordered by
/// degree, then lexicographically on the sorted factor list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct SymMonomial<K: Ord>(Vec<K>);

impl<K: Ord> PartialOrd for SymMonomial<K> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl<K: Ord> Ord for SymMonomial<K> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl<K: Ord> SymMonomial<K> {
    /// The empty monomial, i.e. the unit of the symmetric algebra.
    pub fn unit() -> Self {
        SymMonomial(Vec::new())
    }

    pub fn singleton(k: K) -> Self {
        SymMonomial(vec![k])
    }

    pub fn from_factors(mut factors: Vec<K>) -> Self {
        factors.sort();
        SymMonomial(factors)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[K] {
        &self.0
    }
}

impl<K: Ord + Clone> SymMonomial<K> {
    pub fn mul(&self, other: &SymMonomial<K>) -> SymMonomial<K> {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        v.sort();
        SymMonomial(v)
    }

    /// The monomial with the factor at `idx` removed, together with that
    /// factor.
    pub fn split_at_factor(&self, idx: usize) -> (K, SymMonomial<K>) {
        let mut rest = self.0.clone();
        let k = rest.remove(idx);
        (k, SymMonomial(rest))
    }
}

impl<K: Ord + fmt::Display> fmt::Display for SymMonomial<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|k| k.to_string()).collect();
        write!(f, "{}", parts.join("·"))
    }
}
