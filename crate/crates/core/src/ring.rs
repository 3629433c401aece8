//! Coefficient rings: exact rationals, prime fields, and truncated polynomial
//! rings `F_p[v1..vk] / (v1^p, .., vk^p)`.
//!
//! A [`Scalar`] always remembers its [`RingSpec`]; binary operations check the
//! rings match and never coerce. Values are kept in canonical form (reduced
//! fractions, residues in `0..p`, polynomials without zero terms), so derived
//! equality is semantic equality.

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::Result;

/// Exponent vector of a monomial in the truncated polynomial ring, one entry
/// per ring variable. The empty vector is the monomial `1`.
pub type FpMonomial = Vec<u32>;

/// Largest prime for which scalars flatten into dense `F_p` vectors; residues
/// must fit in a byte.
pub const MAX_FLAT_PRIME: u64 = 251;

/// Description of a coefficient ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RingSpec {
    /// Arbitrary-precision rationals.
    Rational,
    /// Integers modulo a prime `p`.
    PrimeField { p: u64 },
    /// `F_p[vars] / (v^p for each v)`.
    TruncatedPoly { p: u64, vars: Vec<String> },
}

impl RingSpec {
    pub fn rational() -> Self {
        RingSpec::Rational
    }

    /// Prime field constructor; rejects composite or trivial moduli eagerly.
    pub fn prime_field(p: u64) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(RingSpec::PrimeField { p })
    }

    /// Truncated polynomial ring constructor. Variable names must be distinct,
    /// nonempty identifiers.
    pub fn truncated_poly(p: u64, vars: &[&str]) -> Result<Self> {
        let spec = RingSpec::TruncatedPoly {
            p,
            vars: vars.iter().map(|s| s.to_string()).collect(),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Re-checks the invariants; used after deserializing a spec from JSON,
    /// which bypasses the constructors.
    pub fn validate(&self) -> Result<()> {
        match self {
            RingSpec::Rational => Ok(()),
            RingSpec::PrimeField { p } => {
                if !is_prime_u64(*p) {
                    return Err(Error::NotPrime(*p));
                }
                Ok(())
            }
            RingSpec::TruncatedPoly { p, vars } => {
                if !is_prime_u64(*p) {
                    return Err(Error::NotPrime(*p));
                }
                for (i, v) in vars.iter().enumerate() {
                    if !is_identifier(v) {
                        return Err(Error::Invalid(format!("bad variable name {v:?}")));
                    }
                    if vars[..i].contains(v) {
                        return Err(Error::Invalid(format!("duplicate variable {v:?}")));
                    }
                }
                Ok(())
            }
        }
    }

    /// Characteristic: 0 for the rationals, `p` otherwise.
    pub fn characteristic(&self) -> u64 {
        match self {
            RingSpec::Rational => 0,
            RingSpec::PrimeField { p } | RingSpec::TruncatedPoly { p, .. } => *p,
        }
    }

    /// Whether scalars from this ring embed into vectors over `F_p` (anything
    /// of positive characteristic does).
    pub fn is_fp_flat(&self) -> bool {
        self.characteristic() != 0
    }

    /// Number of `F_p`-coordinates a single scalar occupies, cf. [`fp_basis`].
    pub fn fp_dimension(&self) -> Result<usize> {
        Ok(fp_basis(self)?.len())
    }

    fn vars(&self) -> &[String] {
        match self {
            RingSpec::TruncatedPoly { vars, .. } => vars,
            _ => &[],
        }
    }

    /// Renders an exponent vector against this ring's variables, e.g. `a*b^2`.
    pub fn format_monomial(&self, m: &[u32]) -> String {
        let vars = self.vars();
        let mut parts = Vec::new();
        for (v, &e) in vars.iter().zip(m) {
            match e {
                0 => {}
                1 => parts.push(v.clone()),
                _ => parts.push(format!("{v}^{e}")),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Rational => write!(f, "Q"),
            RingSpec::PrimeField { p } => write!(f, "F_{p}"),
            RingSpec::TruncatedPoly { p, vars } => {
                write!(f, "F_{p}[{}]/(v^{p})", vars.join(","))
            }
        }
    }
}

/// `F_p`-basis of the ring, as exponent vectors in graded lexicographic order
/// (total degree first, then ascending lex on the exponent tuple).
///
/// For a prime field this is the single empty monomial; for the rationals it
/// is an error, since `Q` is not finite-dimensional over any `F_p`.
pub fn fp_basis(ring: &RingSpec) -> Result<Vec<FpMonomial>> {
    match ring {
        RingSpec::Rational => Err(Error::UnsupportedRing("Q has no F_p basis".to_string())),
        RingSpec::PrimeField { .. } => Ok(vec![Vec::new()]),
        RingSpec::TruncatedPoly { p, vars } => {
            if *p > MAX_FLAT_PRIME {
                return Err(Error::PrimeTooLarge(*p, MAX_FLAT_PRIME));
            }
            let mut out: Vec<FpMonomial> = vec![Vec::new()];
            for _ in vars {
                out = out
                    .into_iter()
                    .flat_map(|m| {
                        (0..*p as u32).map(move |e| {
                            let mut m2 = m.clone();
                            m2.push(e);
                            m2
                        })
                    })
                    .collect();
            }
            out.sort_by_key(|m| (m.iter().sum::<u32>(), m.clone()));
            Ok(out)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Repr {
    Rat(BigRational),
    Fp(u64),
    /// Exponent vector -> nonzero residue. Truncation drops any monomial with
    /// an exponent `>= p`.
    Poly(BTreeMap<FpMonomial, u64>),
}

/// An immutable ring element in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    ring: RingSpec,
    repr: Repr,
}

impl Scalar {
    pub fn zero(ring: &RingSpec) -> Self {
        match ring {
            RingSpec::Rational => Scalar { ring: ring.clone(), repr: Repr::Rat(BigRational::zero()) },
            RingSpec::PrimeField { .. } => Scalar { ring: ring.clone(), repr: Repr::Fp(0) },
            RingSpec::TruncatedPoly { .. } => {
                Scalar { ring: ring.clone(), repr: Repr::Poly(BTreeMap::new()) }
            }
        }
    }

    pub fn one(ring: &RingSpec) -> Self {
        Scalar::from_integer(ring, 1)
    }

    pub fn from_integer(ring: &RingSpec, n: i64) -> Self {
        match ring {
            RingSpec::Rational => Scalar {
                ring: ring.clone(),
                repr: Repr::Rat(BigRational::from_integer(BigInt::from(n))),
            },
            RingSpec::PrimeField { p } => {
                Scalar { ring: ring.clone(), repr: Repr::Fp(reduce_i64(n, *p)) }
            }
            RingSpec::TruncatedPoly { p, vars } => {
                let mut terms = BTreeMap::new();
                let r = reduce_i64(n, *p);
                if r != 0 {
                    terms.insert(vec![0u32; vars.len()], r);
                }
                Scalar { ring: ring.clone(), repr: Repr::Poly(terms) }
            }
        }
    }

    /// Single monomial `c * vars^exps` in a truncated polynomial ring.
    pub fn monomial(ring: &RingSpec, exps: &[u32], c: i64) -> Result<Self> {
        let RingSpec::TruncatedPoly { p, vars } = ring else {
            return Err(Error::UnsupportedRing(format!("{ring} has no monomials")));
        };
        if exps.len() != vars.len() {
            return Err(Error::DimensionMismatch { expected: vars.len(), got: exps.len() });
        }
        let r = reduce_i64(c, *p);
        let mut terms = BTreeMap::new();
        if r != 0 && exps.iter().all(|&e| e < *p as u32) {
            terms.insert(exps.to_vec(), r);
        }
        Ok(Scalar { ring: ring.clone(), repr: Repr::Poly(terms) })
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Rat(r) => r.is_zero(),
            Repr::Fp(r) => *r == 0,
            Repr::Poly(t) => t.is_empty(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == Scalar::one(&self.ring)
    }

    fn check_ring(&self, other: &Scalar) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring.to_string(), other.ring.to_string()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar> {
        self.check_ring(other)?;
        let repr = match (&self.repr, &other.repr) {
            (Repr::Rat(a), Repr::Rat(b)) => Repr::Rat(a + b),
            (Repr::Fp(a), Repr::Fp(b)) => {
                let p = self.ring.characteristic();
                Repr::Fp(addmod(*a, *b, p))
            }
            (Repr::Poly(a), Repr::Poly(b)) => {
                let p = self.ring.characteristic();
                let mut out = a.clone();
                for (m, c) in b {
                    let e = out.entry(m.clone()).or_insert(0);
                    *e = addmod(*e, *c, p);
                    if *e == 0 {
                        out.remove(m);
                    }
                }
                Repr::Poly(out)
            }
            _ => unreachable!("ring checked"),
        };
        Ok(Scalar { ring: self.ring.clone(), repr })
    }

    pub fn neg(&self) -> Scalar {
        let repr = match &self.repr {
            Repr::Rat(a) => Repr::Rat(-a),
            Repr::Fp(a) => {
                let p = self.ring.characteristic();
                Repr::Fp(if *a == 0 { 0 } else { p - *a })
            }
            Repr::Poly(t) => {
                let p = self.ring.characteristic();
                Repr::Poly(t.iter().map(|(m, c)| (m.clone(), p - *c)).collect())
            }
        };
        Scalar { ring: self.ring.clone(), repr }
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar> {
        self.check_ring(other)?;
        let repr = match (&self.repr, &other.repr) {
            (Repr::Rat(a), Repr::Rat(b)) => Repr::Rat(a * b),
            (Repr::Fp(a), Repr::Fp(b)) => {
                let p = self.ring.characteristic();
                Repr::Fp(mulmod(*a, *b, p))
            }
            (Repr::Poly(a), Repr::Poly(b)) => {
                let p = self.ring.characteristic();
                let mut out: BTreeMap<FpMonomial, u64> = BTreeMap::new();
                for (ma, ca) in a {
                    for (mb, cb) in b {
                        let mut m = ma.clone();
                        let mut truncated = false;
                        for (e, eb) in m.iter_mut().zip(mb) {
                            *e += *eb;
                            if *e >= p as u32 {
                                truncated = true;
                                break;
                            }
                        }
                        if truncated {
                            continue;
                        }
                        let c = mulmod(*ca, *cb, p);
                        let e = out.entry(m).or_insert(0);
                        *e = addmod(*e, c, p);
                    }
                }
                out.retain(|_, c| *c != 0);
                Repr::Poly(out)
            }
            _ => unreachable!("ring checked"),
        };
        Ok(Scalar { ring: self.ring.clone(), repr })
    }

    /// Multiplicative inverse. Over the truncated polynomial ring an element
    /// is a unit exactly when its constant term is nonzero; the inverse is
    /// computed from the geometric series of the nilpotent part.
    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::NotInvertible(self.to_string()));
        }
        match &self.repr {
            Repr::Rat(a) => Ok(Scalar { ring: self.ring.clone(), repr: Repr::Rat(a.recip()) }),
            Repr::Fp(a) => {
                let p = self.ring.characteristic();
                Ok(Scalar { ring: self.ring.clone(), repr: Repr::Fp(invmod(*a, p)?) })
            }
            Repr::Poly(t) => {
                let p = self.ring.characteristic();
                let nvars = self.ring.vars().len();
                let unit_mon = vec![0u32; nvars];
                let c0 = *t.get(&unit_mon).unwrap_or(&0);
                if c0 == 0 {
                    return Err(Error::NotInvertible(self.to_string()));
                }
                let inv0 = invmod(c0, p)?;
                // self = c0 (1 + n) with n nilpotent; inverse is
                // c0^-1 (1 - n + n^2 - ..) which terminates.
                let n = self.mul(&unit_scalar(&self.ring, inv0))?.sub(&Scalar::one(&self.ring))?;
                let mut acc = Scalar::one(&self.ring);
                let mut pow = Scalar::one(&self.ring);
                loop {
                    pow = pow.mul(&n)?.neg();
                    if pow.is_zero() {
                        break;
                    }
                    acc = acc.add(&pow)?;
                }
                acc.mul(&unit_scalar(&self.ring, inv0))
            }
        }
    }

    /// Coefficient of the given monomial, as an `F_p` residue. Only valid for
    /// positive-characteristic rings.
    pub fn fp_coefficient(&self, m: &[u32]) -> Result<u64> {
        match &self.repr {
            Repr::Rat(_) => Err(Error::UnsupportedRing("Q scalar has no F_p coordinates".to_string())),
            Repr::Fp(r) => {
                if m.is_empty() {
                    Ok(*r)
                } else {
                    Err(Error::DimensionMismatch { expected: 0, got: m.len() })
                }
            }
            Repr::Poly(t) => Ok(*t.get(m).unwrap_or(&0)),
        }
    }

    /// Rebuilds a scalar from `F_p` coordinates in `fp_basis` order.
    pub fn from_fp_coordinates(ring: &RingSpec, coords: &[u64]) -> Result<Scalar> {
        let basis = fp_basis(ring)?;
        if basis.len() != coords.len() {
            return Err(Error::DimensionMismatch { expected: basis.len(), got: coords.len() });
        }
        let p = ring.characteristic();
        match ring {
            RingSpec::PrimeField { .. } => Ok(Scalar { ring: ring.clone(), repr: Repr::Fp(coords[0] % p) }),
            RingSpec::TruncatedPoly { .. } => {
                let mut terms = BTreeMap::new();
                for (m, &c) in basis.iter().zip(coords) {
                    if c % p != 0 {
                        terms.insert(m.clone(), c % p);
                    }
                }
                Ok(Scalar { ring: ring.clone(), repr: Repr::Poly(terms) })
            }
            RingSpec::Rational => unreachable!("fp_basis rejected Q"),
        }
    }

    /// Parses the textual syntax for this ring. Column numbers in errors are
    /// 1-based byte offsets into `src`.
    pub fn parse(ring: &RingSpec, src: &str) -> Result<Scalar> {
        parse_scalar(ring, src)
    }
}

fn unit_scalar(ring: &RingSpec, r: u64) -> Scalar {
    Scalar::from_integer(ring, r as i64)
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Repr::Fp(r) => write!(f, "{r}"),
            Repr::Poly(t) => {
                if t.is_empty() {
                    return write!(f, "0");
                }
                // Descending graded-lex, so `2*a*b + 1` prints in that order.
                let mut terms: Vec<(&FpMonomial, &u64)> = t.iter().collect();
                terms.sort_by(|(ma, _), (mb, _)| {
                    let da: u32 = ma.iter().sum();
                    let db: u32 = mb.iter().sum();
                    db.cmp(&da).then_with(|| ma.cmp(mb))
                });
                let mut first = true;
                for (m, c) in terms {
                    if !first {
                        write!(f, " + ")?;
                    }
                    first = false;
                    let mon = self.ring.format_monomial(m);
                    if mon == "1" {
                        write!(f, "{c}")?;
                    } else if *c == 1 {
                        write!(f, "{mon}")?;
                    } else {
                        write!(f, "{c}*{mon}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

fn reduce_i64(n: i64, p: u64) -> u64 {
    let r = n.rem_euclid(p as i64);
    r as u64
}

fn addmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

fn invmod(a: u64, p: u64) -> Result<u64> {
    let a = a % p;
    if a == 0 {
        return Err(Error::NotInvertible(format!("{a} mod {p}")));
    }
    Ok(powmod(a, p - 2, p))
}

/// Deterministic Miller-Rabin for u64 moduli.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

// --- textual scalar syntax ---------------------------------------------------

use crate::cursor::Cursor;

fn parse_scalar(ring: &RingSpec, src: &str) -> Result<Scalar> {
    let mut cur = Cursor::new(src);
    let v = parse_scalar_sum(ring, &mut cur)?;
    cur.skip_ws();
    if cur.peek().is_some() {
        return Err(cur.err("trailing input after scalar"));
    }
    Ok(v)
}

fn parse_scalar_sum(ring: &RingSpec, cur: &mut Cursor) -> Result<Scalar> {
    cur.skip_ws();
    let mut negate = false;
    if cur.peek() == Some(b'-') {
        cur.bump();
        negate = true;
    }
    let mut acc = parse_scalar_term(ring, cur)?;
    if negate {
        acc = acc.neg();
    }
    loop {
        cur.skip_ws();
        match cur.peek() {
            Some(b'+') => {
                cur.bump();
                let t = parse_scalar_term(ring, cur)?;
                acc = acc.add(&t)?;
            }
            Some(b'-') => {
                cur.bump();
                let t = parse_scalar_term(ring, cur)?;
                acc = acc.sub(&t)?;
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_scalar_term(ring: &RingSpec, cur: &mut Cursor) -> Result<Scalar> {
    let mut acc = parse_scalar_factor(ring, cur)?;
    loop {
        cur.skip_ws();
        if cur.peek() == Some(b'*') {
            cur.bump();
            let f = parse_scalar_factor(ring, cur)?;
            acc = acc.mul(&f)?;
        } else {
            return Ok(acc);
        }
    }
}

fn parse_scalar_factor(ring: &RingSpec, cur: &mut Cursor) -> Result<Scalar> {
    cur.skip_ws();
    match cur.peek() {
        Some(c) if c.is_ascii_digit() => {
            let n = cur.integer()?;
            cur.skip_ws();
            if *ring == RingSpec::Rational && cur.peek() == Some(b'/') {
                cur.bump();
                cur.skip_ws();
                let denom_pos = cur.pos();
                let d = cur.integer()?;
                if d == 0 {
                    return Err(cur.err_at(denom_pos, "zero denominator"));
                }
                let r = BigRational::new(BigInt::from(n), BigInt::from(d));
                return Ok(Scalar { ring: ring.clone(), repr: Repr::Rat(r) });
            }
            if n <= i64::MAX as u64 {
                Ok(Scalar::from_integer(ring, n as i64))
            } else {
                // Reduce large literals mod p where possible.
                match ring {
                    RingSpec::Rational => Ok(Scalar {
                        ring: ring.clone(),
                        repr: Repr::Rat(BigRational::from_integer(BigInt::from(n))),
                    }),
                    _ => Ok(Scalar::from_integer(ring, (n % ring.characteristic()) as i64)),
                }
            }
        }
        Some(c) if (c as char).is_ascii_alphabetic() => {
            let start = cur.pos();
            let name = cur.identifier().unwrap();
            let RingSpec::TruncatedPoly { p, vars } = ring else {
                return Err(cur.err_at(start, format!("variable {name:?} in ring {ring}")));
            };
            let Some(idx) = vars.iter().position(|v| *v == name) else {
                return Err(Error::UnknownLabel(name));
            };
            let mut exp = 1u32;
            cur.skip_ws();
            if cur.peek() == Some(b'^') {
                cur.bump();
                cur.skip_ws();
                exp = cur.integer()? as u32;
            }
            let mut exps = vec![0u32; vars.len()];
            exps[idx] = exp;
            if exp >= *p as u32 {
                // v^p = 0 by truncation.
                return Ok(Scalar::zero(ring));
            }
            Scalar::monomial(ring, &exps, 1)
        }
        Some(b'(') => {
            cur.bump();
            let v = parse_scalar_sum(ring, cur)?;
            cur.skip_ws();
            if cur.bump() != Some(b')') {
                return Err(cur.err("expected ')'"));
            }
            Ok(v)
        }
        _ => Err(cur.err("expected a scalar")),
    }
}

/// Entry point for the expression parser: one multiplicative scalar factor
/// (number, rational, ring variable with optional `^`, or a parenthesized
/// sum) read at the cursor.
pub(crate) fn scalar_factor_at(ring: &RingSpec, cur: &mut Cursor) -> Result<Scalar> {
    parse_scalar_factor(ring, cur)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_is_checked_eagerly() {
        assert!(RingSpec::prime_field(2).is_ok());
        assert!(RingSpec::prime_field(251).is_ok());
        assert_eq!(RingSpec::prime_field(1), Err(Error::NotPrime(1)));
        assert_eq!(RingSpec::prime_field(91), Err(Error::NotPrime(91)));
        assert_eq!(RingSpec::truncated_poly(4, &["a"]).unwrap_err(), Error::NotPrime(4));
    }

    #[test]
    fn rational_canonical_form() {
        let q = RingSpec::rational();
        let half = Scalar::parse(&q, "2/4").unwrap();
        assert_eq!(half, Scalar::parse(&q, "1/2").unwrap());
        assert_eq!(half.to_string(), "1/2");
        let s = half.add(&half).unwrap();
        assert_eq!(s, Scalar::one(&q));
        assert_eq!(s.to_string(), "1");
        assert_eq!(Scalar::parse(&q, "3/4").unwrap().to_string(), "3/4");
    }

    #[test]
    fn fp_arithmetic_wraps() {
        let f5 = RingSpec::prime_field(5).unwrap();
        let a = Scalar::from_integer(&f5, 3);
        let b = Scalar::from_integer(&f5, 4);
        assert_eq!(a.add(&b).unwrap(), Scalar::from_integer(&f5, 2));
        assert_eq!(a.mul(&b).unwrap(), Scalar::from_integer(&f5, 2));
        assert_eq!(a.neg(), Scalar::from_integer(&f5, 2));
        assert_eq!(a.inv().unwrap(), Scalar::from_integer(&f5, 2));
        assert_eq!(Scalar::from_integer(&f5, -1), Scalar::from_integer(&f5, 4));
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        let q = RingSpec::rational();
        let f2 = RingSpec::prime_field(2).unwrap();
        let e = Scalar::one(&q).add(&Scalar::one(&f2)).unwrap_err();
        assert!(matches!(e, Error::RingMismatch(..)));
    }

    #[test]
    fn truncated_poly_truncates() {
        let r = RingSpec::truncated_poly(2, &["a", "b"]).unwrap();
        let a = Scalar::parse(&r, "a").unwrap();
        assert!(a.mul(&a).unwrap().is_zero());
        let ab = Scalar::parse(&r, "a*b").unwrap();
        assert_eq!(a.mul(&Scalar::parse(&r, "b").unwrap()).unwrap(), ab);
        let s = Scalar::parse(&r, "2*a*b + 1").unwrap();
        // 2 = 0 mod 2, so only the constant survives.
        assert_eq!(s, Scalar::one(&r));
        let r3 = RingSpec::truncated_poly(3, &["a", "b"]).unwrap();
        let s3 = Scalar::parse(&r3, "2*a*b + 1").unwrap();
        assert_eq!(s3.to_string(), "2*a*b + 1");
    }

    #[test]
    fn poly_inverse_of_unit() {
        let r = RingSpec::truncated_poly(3, &["a"]).unwrap();
        let u = Scalar::parse(&r, "1 + a").unwrap();
        let inv = u.inv().unwrap();
        assert_eq!(u.mul(&inv).unwrap(), Scalar::one(&r));
        let nonunit = Scalar::parse(&r, "a").unwrap();
        assert!(nonunit.inv().is_err());
    }

    #[test]
    fn fp_basis_graded_lex() {
        // Independent oracle: enumerate all exponent vectors and sort by
        // (total degree, lex); the published order for F_2[a,b,g] is
        // 1, g, b, bg, a, ag, ab, abg.
        let r = RingSpec::truncated_poly(2, &["alpha", "beta", "gamma"]).unwrap();
        let mut expected = Vec::new();
        for a in 0..2u32 {
            for b in 0..2u32 {
                for g in 0..2u32 {
                    expected.push(vec![a, b, g]);
                }
            }
        }
        expected.sort_by_key(|m| (m.iter().sum::<u32>(), m.clone()));
        let got = fp_basis(&r).unwrap();
        assert_eq!(got, expected);
        assert_eq!(
            got,
            vec![
                vec![0, 0, 0],
                vec![0, 0, 1],
                vec![0, 1, 0],
                vec![1, 0, 0],
                vec![0, 1, 1],
                vec![1, 0, 1],
                vec![1, 1, 0],
                vec![1, 1, 1],
            ]
        );

        let f7 = RingSpec::prime_field(7).unwrap();
        assert_eq!(fp_basis(&f7).unwrap(), vec![Vec::<u32>::new()]);
        assert!(fp_basis(&RingSpec::rational()).is_err());
    }

    #[test]
    fn scalar_display_parse_round_trip() {
        let rings = [
            RingSpec::rational(),
            RingSpec::prime_field(5).unwrap(),
            RingSpec::truncated_poly(3, &["a", "b"]).unwrap(),
        ];
        let samples = [
            "0", "1", "2", "1/3", "7/2", "-5", "a", "b", "a*b", "2*a^2 + b", "2*a*b + 1",
        ];
        for ring in &rings {
            for s in &samples {
                let Ok(v) = Scalar::parse(ring, s) else { continue };
                let back = Scalar::parse(ring, &v.to_string()).unwrap();
                assert_eq!(v, back, "round trip failed for {s} over {ring}");
            }
        }
    }

    #[test]
    fn syntax_errors_carry_columns() {
        let q = RingSpec::rational();
        match Scalar::parse(&q, "1/0").unwrap_err() {
            Error::SyntaxError { column, .. } => assert_eq!(column, 3),
            e => panic!("unexpected error {e}"),
        }
        let r = RingSpec::truncated_poly(2, &["a"]).unwrap();
        assert_eq!(Scalar::parse(&r, "z").unwrap_err(), Error::UnknownLabel("z".to_string()));
    }
}
