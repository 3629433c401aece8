//! Characteristic-p power identities. Jacobson's decomposition produces the
//! degree-p Lie polynomial that corrects the p-th power of a sum; the module
//! verifies it against free associative and free pre-Lie expansions, checks
//! the matching statement for iterated adjoint maps on table algebras,
//! searches random tables for failures of the two restrictedness identities,
//! and builds the classical rank-deficient module over F_2[α,β,γ]/(squares)
//! whose graded enveloping comparison map has a kernel.

use std::fmt;

use crate::error::Error;
use crate::Result;
use crate::fplin::FpVectorSpace;
use crate::lincomb::{bilinear, LinComb, TensorWord};
use crate::prelie::{random_bilinear_table, PreLie, TablePreLie};
use crate::ring::{RingSpec, Scalar};

/// Largest prime accepted by [`lambda_p`]; the expansion has degree p.
pub const MAX_ZASSENHAUS_PRIME: u64 = 7;

/// Largest prime accepted by [`verify_touid`]; the free pre-Lie expansion
/// runs over trees with up to p vertices on two labels.
pub const MAX_TOUID_PRIME: u64 = 5;

/// A word in the free associative algebra on numbered letters.
pub type AssocWord = TensorWord<usize>;

/// An element of the free associative algebra on numbered letters.
pub type FreeAssocElement = LinComb<AssocWord>;

/// A left-normed bracket monomial `[[…[g₀,g₁],…],g_k]`, stored as its letter
/// sequence `g₀, g₁, …, g_k`.
pub type BracketWord = Vec<usize>;

/// Concatenation product of free associative elements.
pub fn assoc_mul(a: &FreeAssocElement, b: &FreeAssocElement) -> Result<FreeAssocElement> {
    let ring = a.ring().clone();
    bilinear(a, b, |u, v| Ok(LinComb::single(&ring, u.concat(v))))
}

/// `ab - ba` in the free associative algebra.
pub fn assoc_commutator(a: &FreeAssocElement, b: &FreeAssocElement) -> Result<FreeAssocElement> {
    assoc_mul(a, b)?.sub(&assoc_mul(b, a)?)
}

/// `a^n` under concatenation. The exponent must be positive.
pub fn assoc_pow(a: &FreeAssocElement, n: usize) -> Result<FreeAssocElement> {
    if n == 0 {
        return Err(Error::Invalid("powers start at exponent 1".to_string()));
    }
    let mut acc = a.clone();
    for _ in 1..n {
        acc = assoc_mul(&acc, a)?;
    }
    Ok(acc)
}

/// Expands a left-normed bracket word into the free associative algebra via
/// `[a,b] = ab - ba`.
pub fn expand_bracket_word(ring: &RingSpec, word: &[usize]) -> Result<FreeAssocElement> {
    let Some((&first, rest)) = word.split_first() else {
        return Err(Error::Invalid("empty bracket word".to_string()));
    };
    let mut acc: FreeAssocElement = LinComb::single(ring, AssocWord::letter(first));
    for &g in rest {
        acc = assoc_commutator(&acc, &LinComb::single(ring, AssocWord::letter(g)))?;
    }
    Ok(acc)
}

/// A Lie element carried in two forms at once: a combination of left-normed
/// bracket words, and its expansion in the free associative algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiePolynomial {
    ring: RingSpec,
    terms: LinComb<BracketWord>,
    expansion: FreeAssocElement,
}

impl LiePolynomial {
    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    /// The bracket words with their coefficients.
    pub fn terms(&self) -> &LinComb<BracketWord> {
        &self.terms
    }

    /// The image under `[a,b] ↦ ab - ba`, expanded to associative words.
    pub fn expansion(&self) -> &FreeAssocElement {
        &self.expansion
    }

    /// Re-expands every bracket word and compares against the stored
    /// expansion.
    pub fn check_consistency(&self) -> Result<bool> {
        let mut fresh = LinComb::zero(&self.ring);
        for (word, c) in self.terms.terms() {
            fresh = fresh.add(&expand_bracket_word(&self.ring, word)?.scale(c)?)?;
        }
        Ok(fresh == self.expansion)
    }

    /// Evaluates the bracket words in a pre-Lie algebra under the commutator
    /// bracket, substituting `letters[i]` for letter `i`.
    pub fn evaluate<A: PreLie>(
        &self,
        alg: &A,
        letters: &[LinComb<A::Key>],
    ) -> Result<LinComb<A::Key>> {
        if alg.ring() != &self.ring {
            return Err(Error::RingMismatch(
                self.ring.to_string(),
                alg.ring().to_string(),
            ));
        }
        let mut out = LinComb::zero(&self.ring);
        for (word, c) in self.terms.terms() {
            let mut val: Option<LinComb<A::Key>> = None;
            for &g in word {
                let letter = letters
                    .get(g)
                    .ok_or_else(|| Error::Invalid(format!("letter {g} has no substitution")))?;
                val = Some(match val {
                    None => letter.clone(),
                    Some(v) => alg.bracket(&v, letter)?,
                });
            }
            if let Some(v) = val {
                out = out.add(&v.scale(c)?)?;
            }
        }
        Ok(out)
    }

    /// Renders the bracket words with the given letter names.
    pub fn format(&self, letters: &[&str]) -> Result<String> {
        let mut parts = Vec::new();
        for (word, c) in self.terms.terms() {
            let mut nested = String::new();
            for (k, &g) in word.iter().enumerate() {
                let name = letters
                    .get(g)
                    .ok_or_else(|| Error::Invalid(format!("letter {g} has no name")))?;
                if k == 0 {
                    nested = name.to_string();
                } else {
                    nested = format!("[{nested},{name}]");
                }
            }
            if c.is_one() {
                parts.push(nested);
            } else {
                parts.push(format!("{c}·{nested}"));
            }
        }
        if parts.is_empty() {
            return Ok("0".to_string());
        }
        Ok(parts.join(" + "))
    }
}

/// The degree-p Lie polynomial `Λ_p` in two letters over F_p, with
/// `(x+y)^p - x^p - y^p ≡ Λ_p(x,y)` in the free associative algebra.
///
/// Jacobson's decomposition drives the computation: in the free Lie algebra
/// over F_p[λ]/(λ^p), the iterate `ad(λx+y)^{p-1}(x)` is a combination of
/// left-normed bracket words, the coefficient of `λ^{i-1}` equals `i·s_i`,
/// and `Λ_p = Σ_{i=1}^{p-1} s_i`. Each iteration step uses
/// `[λx+y, w] = -[w, λx] - [w, y]`, which appends a letter to a left-normed
/// word and flips the sign.
pub fn lambda_p(p: u64) -> Result<LiePolynomial> {
    if p > MAX_ZASSENHAUS_PRIME {
        return Err(Error::PrimeTooLarge(p, MAX_ZASSENHAUS_PRIME));
    }
    let fp = RingSpec::prime_field(p)?;
    let lam_ring = RingSpec::truncated_poly(p, &["l"])?;
    let minus_one = Scalar::from_integer(&lam_ring, -1);
    let minus_lambda = minus_one.mul(&Scalar::monomial(&lam_ring, &[1], 1)?)?;

    let mut w: LinComb<BracketWord> = LinComb::single(&lam_ring, vec![0]);
    for _ in 0..(p - 1) {
        let mut next = LinComb::zero(&lam_ring);
        for (word, c) in w.terms() {
            let mut with_x = word.clone();
            with_x.push(0);
            let mut with_y = word.clone();
            with_y.push(1);
            next.add_term(with_x, &c.mul(&minus_lambda)?)?;
            next.add_term(with_y, &c.mul(&minus_one)?)?;
        }
        w = next;
    }

    // Words whose λ-degree is p-1 are the pure-x iterates; they belong to
    // the i = p slot, which p·s_p kills mod p.
    let mut terms: LinComb<BracketWord> = LinComb::zero(&fp);
    for i in 1..p {
        let inv = Scalar::from_integer(&fp, i as i64).inv()?;
        for (word, c) in w.terms() {
            let residue = c.fp_coefficient(&[(i - 1) as u32])?;
            if residue == 0 {
                continue;
            }
            let coeff = Scalar::from_integer(&fp, residue as i64).mul(&inv)?;
            terms.add_term(word.clone(), &coeff)?;
        }
    }

    let mut expansion = LinComb::zero(&fp);
    for (word, c) in terms.terms() {
        expansion = expansion.add(&expand_bracket_word(&fp, word)?.scale(c)?)?;
    }
    Ok(LiePolynomial { ring: fp, terms, expansion })
}

/// Checks `(x+y)^p - x^p - y^p == Λ_p(x,y)` by full expansion in the free
/// associative algebra on two letters over F_p.
pub fn verify_zassenhaus(p: u64) -> Result<bool> {
    let lp = lambda_p(p)?;
    let ring = lp.ring().clone();
    let x: FreeAssocElement = LinComb::single(&ring, AssocWord::letter(0));
    let y: FreeAssocElement = LinComb::single(&ring, AssocWord::letter(1));
    let sum = x.add(&y)?;
    let lhs = assoc_pow(&sum, p as usize)?
        .sub(&assoc_pow(&x, p as usize)?)?
        .sub(&assoc_pow(&y, p as usize)?)?;
    Ok(lhs == *lp.expansion())
}

/// `x^{∘i} = x ∘^{i-1} x`, the right-iterated power `((x∘x)∘x)…∘x` with `i`
/// factors. The exponent must be positive.
pub fn prelie_power<A: PreLie>(
    alg: &A,
    x: &LinComb<A::Key>,
    i: usize,
) -> Result<LinComb<A::Key>> {
    if i == 0 {
        return Err(Error::Invalid("powers start at exponent 1".to_string()));
    }
    let mut acc = x.clone();
    for _ in 1..i {
        acc = alg.product(&acc, x)?;
    }
    Ok(acc)
}

/// `y ∘^i x = ((y∘x)∘x)…∘x` with `i` copies of `x` acting from the right;
/// `i = 0` returns `y`.
pub fn right_action_power<A: PreLie>(
    alg: &A,
    y: &LinComb<A::Key>,
    x: &LinComb<A::Key>,
    i: usize,
) -> Result<LinComb<A::Key>> {
    let mut acc = y.clone();
    for _ in 0..i {
        acc = alg.product(&acc, x)?;
    }
    Ok(acc)
}

/// Checks `(x+y)^{∘p} - x^{∘p} - y^{∘p} == Λ_p(x,y)` in the free pre-Lie
/// algebra on two labels over F_p, with the brackets of `Λ_p` interpreted
/// through the commutator of grafting.
pub fn verify_touid(p: u64) -> Result<bool> {
    if p > MAX_TOUID_PRIME {
        return Err(Error::PrimeTooLarge(p, MAX_TOUID_PRIME));
    }
    let lp = lambda_p(p)?;
    let free = crate::prelie::FreePreLie::new(lp.ring(), &["x", "y"])?;
    let x = free.generator("x")?;
    let y = free.generator("y")?;
    let sum = x.add(&y)?;
    let lhs = prelie_power(&free, &sum, p as usize)?
        .sub(&prelie_power(&free, &x, p as usize)?)?
        .sub(&prelie_power(&free, &y, p as usize)?)?;
    let rhs = lp.evaluate(&free, &[x, y])?;
    Ok(lhs == rhs)
}

fn ad_pow<A: PreLie>(
    alg: &A,
    x: &LinComb<A::Key>,
    z: &LinComb<A::Key>,
    p: u64,
) -> Result<LinComb<A::Key>> {
    let mut acc = z.clone();
    for _ in 0..p {
        acc = alg.bracket(x, &acc)?;
    }
    Ok(acc)
}

/// Checks `(ad^p(x+y) - ad^p(x) - ad^p(y))(z) == ad((x+y)^{∘p} - x^{∘p} -
/// y^{∘p})(z)` over all basis triples of a table algebra in characteristic p.
pub fn verify_adid(alg: &TablePreLie, p: u64) -> Result<bool> {
    if alg.ring().characteristic() != p {
        return Err(Error::UnsupportedRing(format!(
            "need characteristic {p}, the table lives over {}",
            alg.ring()
        )));
    }
    let dim = alg.dim();
    for xi in 0..dim {
        for yi in 0..dim {
            let x = alg.basis_element(xi)?;
            let y = alg.basis_element(yi)?;
            let sum = x.add(&y)?;
            let power_diff = prelie_power(alg, &sum, p as usize)?
                .sub(&prelie_power(alg, &x, p as usize)?)?
                .sub(&prelie_power(alg, &y, p as usize)?)?;
            for zi in 0..dim {
                let z = alg.basis_element(zi)?;
                let lhs = ad_pow(alg, &sum, &z, p)?
                    .sub(&ad_pow(alg, &x, &z, p)?)?
                    .sub(&ad_pow(alg, &y, &z, p)?)?;
                let rhs = alg.bracket(&power_diff, &z)?;
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Which of the two restrictedness identities a witness breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    /// `ad^p(x)(z) ≠ ad(x^{∘p})(z)`.
    AdPower,
    /// `z ∘^p x ≠ z ∘ x^{∘p}`.
    RightPower,
}

/// A basis pair in a concrete table algebra on which a p-th-power identity
/// fails, together with the two disagreeing values.
#[derive(Debug, Clone)]
pub struct NonrestrictedWitness {
    pub table: TablePreLie,
    pub kind: WitnessKind,
    pub p: u64,
    pub x: usize,
    pub z: usize,
    pub lhs: LinComb<usize>,
    pub rhs: LinComb<usize>,
}

impl fmt::Display for NonrestrictedWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = &self.table.names()[self.x];
        let z = &self.table.names()[self.z];
        let lhs = self.table.format_comb(&self.lhs);
        let rhs = self.table.format_comb(&self.rhs);
        match self.kind {
            WitnessKind::AdPower => write!(
                f,
                "ad^{p}({x}) sends {z} to {lhs}, but ad({x}^{{∘{p}}}) sends it to {rhs}",
                p = self.p
            ),
            WitnessKind::RightPower => write!(
                f,
                "{z} ∘^{p} {x} = {lhs}, but {z} ∘ ({x}^{{∘{p}}}) = {rhs}",
                p = self.p
            ),
        }
    }
}

/// Scans all basis pairs of a table algebra for a failure of either
/// restrictedness identity; `None` means both hold on the basis.
pub fn nonrestricted_witness_in(
    alg: &TablePreLie,
    p: u64,
) -> Result<Option<NonrestrictedWitness>> {
    if alg.ring().characteristic() != p {
        return Err(Error::UnsupportedRing(format!(
            "need characteristic {p}, the table lives over {}",
            alg.ring()
        )));
    }
    let dim = alg.dim();
    for xi in 0..dim {
        let x = alg.basis_element(xi)?;
        let x_power = prelie_power(alg, &x, p as usize)?;
        for zi in 0..dim {
            let z = alg.basis_element(zi)?;
            let ad_lhs = ad_pow(alg, &x, &z, p)?;
            let ad_rhs = alg.bracket(&x_power, &z)?;
            if ad_lhs != ad_rhs {
                return Ok(Some(NonrestrictedWitness {
                    table: alg.clone(),
                    kind: WitnessKind::AdPower,
                    p,
                    x: xi,
                    z: zi,
                    lhs: ad_lhs,
                    rhs: ad_rhs,
                }));
            }
            let right_lhs = right_action_power(alg, &z, &x, p as usize)?;
            let right_rhs = alg.product(&z, &x_power)?;
            if right_lhs != right_rhs {
                return Ok(Some(NonrestrictedWitness {
                    table: alg.clone(),
                    kind: WitnessKind::RightPower,
                    p,
                    x: xi,
                    z: zi,
                    lhs: right_lhs,
                    rhs: right_rhs,
                }));
            }
        }
    }
    Ok(None)
}

const WITNESS_SEARCH_ATTEMPTS: u64 = 500;

/// Draws seeded random bilinear tables over F_p with dimensions between 2 and
/// `dim_cap`, keeps the ones satisfying the pre-Lie identity, and returns the
/// first that breaks a restrictedness identity. Supports p ∈ {2,3} and
/// `dim_cap` ≤ 3.
pub fn find_nonrestricted_witness(
    p: u64,
    dim_cap: usize,
    seed: u64,
) -> Result<Option<NonrestrictedWitness>> {
    if p != 2 && p != 3 {
        return Err(Error::Invalid(format!(
            "the witness search runs over F_2 or F_3, got p = {p}"
        )));
    }
    if !(2..=3).contains(&dim_cap) {
        return Err(Error::Invalid(format!(
            "the dimension cap must be 2 or 3, got {dim_cap}"
        )));
    }
    let ring = RingSpec::prime_field(p)?;
    let mut draw = 0u64;
    for _ in 0..WITNESS_SEARCH_ATTEMPTS {
        for dim in 2..=dim_cap {
            let table = random_bilinear_table(&ring, dim, seed.wrapping_add(draw))?;
            draw += 1;
            if table.check_axiom()?.is_some() {
                continue;
            }
            if let Some(witness) = nonrestricted_witness_in(&table, p)? {
                return Ok(Some(witness));
            }
        }
    }
    Ok(None)
}

/// Outcome of the rank-deficient-module computation over
/// k = F_2[α,β,γ]/(α²,β²,γ²) with L = (kx ⊕ ky ⊕ kz)/(αx - βy - γz).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohnReport {
    /// F_2-dimension of L.
    pub l_dimension: usize,
    /// Rank of the span of the monomial multiples of the defining relation.
    pub relation_rank: usize,
    /// Rank of the relation insertions into the two tensor slots.
    pub insertion_rank: usize,
    /// Verdict (a): the commutator image of Λ_2(βy,γz) vanishes in L⊗L.
    pub vanishes_in_tensor_square: bool,
    /// Verdict (b): the class of Λ_2(βy,γz) survives in L⊗L/⟨w⊗w⟩.
    pub nonzero_in_wedge: bool,
}

impl CohnReport {
    /// Both verdicts together: a nonzero degree-2 Lie element whose
    /// enveloping image is zero, so the graded comparison map from the
    /// symmetric algebra has a kernel.
    pub fn pbw_fails(&self) -> bool {
        self.vanishes_in_tensor_square && self.nonzero_in_wedge
    }
}

impl fmt::Display for CohnReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let yes_no = |b: bool| if b { "yes" } else { "no" };
        writeln!(
            f,
            "coefficient module L: dimension {} over F_2 (relation span rank {})",
            self.l_dimension, self.relation_rank
        )?;
        writeln!(
            f,
            "tensor-square relation insertions: rank {} in a 72-dimensional ambient",
            self.insertion_rank
        )?;
        writeln!(
            f,
            "(a) commutator image of Λ_2(βy,γz) vanishes in L⊗L: {}",
            yes_no(self.vanishes_in_tensor_square)
        )?;
        writeln!(
            f,
            "(b) class of Λ_2(βy,γz) nonzero in L⊗L/⟨w⊗w⟩: {}",
            yes_no(self.nonzero_in_wedge)
        )?;
        write!(
            f,
            "graded enveloping comparison map injective: {}",
            yes_no(!self.pbw_fails())
        )
    }
}

// k-monomials are bitmasks over {α, β, γ}; squares vanish, so a product
// either merges disjoint masks or dies.
const COHN_MONOMIALS: usize = 8;
const COHN_ALPHA: usize = 1;
const COHN_BETA: usize = 2;
const COHN_GAMMA: usize = 4;
// The relation αx - βy - γz, componentwise; signs are invisible mod 2.
const COHN_RELATION: [(usize, usize); 3] =
    [(0, COHN_ALPHA), (1, COHN_BETA), (2, COHN_GAMMA)];

fn mul_mon(a: usize, b: usize) -> Option<usize> {
    if a & b != 0 {
        return None;
    }
    Some(a | b)
}

fn l_index(gen: usize, mon: usize) -> usize {
    gen * COHN_MONOMIALS + mon
}

fn t_index(left: usize, right: usize, mon: usize) -> usize {
    (left * 3 + right) * COHN_MONOMIALS + mon
}

/// Builds the classical module with a torsion relation among its three
/// generators and tests the two halves of the counterexample: over
/// k = F_2[α,β,γ]/(α²,β²,γ²), the element Λ_2(βy,γz) of the free Lie algebra
/// on L maps to zero in the tensor square (degree 2 of the enveloping
/// algebra T(L)) yet is nonzero in the degree-2 free-Lie model L⊗L/⟨w⊗w⟩,
/// the quotient by the additive span of all squares. Only p = 2 fits in
/// memory; the ambient spaces grow like p^3-fold tensor blocks for larger
/// primes.
pub fn cohn_counterexample(p: u64) -> Result<CohnReport> {
    if p != 2 {
        return Err(Error::Invalid(format!(
            "the counterexample is computed for p = 2 only; p = {p} blows past the \
             memory budget for the tensor-square ambient"
        )));
    }

    // L sits inside F_2^24: three generators, eight monomial coefficients.
    let mut relations = FpVectorSpace::new(2, 24)?;
    for m in 0..COHN_MONOMIALS {
        let mut v = vec![0u64; 24];
        for &(g, mon) in &COHN_RELATION {
            if let Some(prod) = mul_mon(m, mon) {
                v[l_index(g, prod)] ^= 1;
            }
        }
        relations.insert(&v)?;
    }
    let relation_rank = relations.rank();

    // Greedy complement: ambient unit vectors that are independent of the
    // relation span form an F_2-basis of L.
    let mut probe = relations.clone();
    let mut reps: Vec<(usize, usize)> = Vec::new();
    for g in 0..3 {
        for m in 0..COHN_MONOMIALS {
            let mut v = vec![0u64; 24];
            v[l_index(g, m)] = 1;
            if probe.insert(&v)? {
                reps.push((g, m));
            }
        }
    }
    let l_dimension = reps.len();

    // T(L)₂ sits inside F_2^72; the relation is inserted into either tensor
    // slot against every generator and every monomial multiplier.
    let mut insertions = FpVectorSpace::new(2, 72)?;
    for m in 0..COHN_MONOMIALS {
        for other in 0..3 {
            let mut left = vec![0u64; 72];
            let mut right = vec![0u64; 72];
            for &(g, mon) in &COHN_RELATION {
                if let Some(prod) = mul_mon(m, mon) {
                    left[t_index(g, other, prod)] ^= 1;
                    right[t_index(other, g, prod)] ^= 1;
                }
            }
            insertions.insert(&left)?;
            insertions.insert(&right)?;
        }
    }
    let insertion_rank = insertions.rank();

    // Substitute letter 0 ↦ βy and letter 1 ↦ γz in Λ_2. Over F_2 every
    // canonical coefficient is 1, so terms toggle ambient bits.
    let lp = lambda_p(2)?;
    let substitution = [(1, COHN_BETA), (2, COHN_GAMMA)];

    // Verdict (a): the associative expansion lands in T(L)₂.
    let mut tensor_image = vec![0u64; 72];
    for (word, _) in lp.expansion().terms() {
        if word.0.len() != 2 {
            return Err(Error::Invalid(format!(
                "expected a degree-2 expansion, found a word of length {}",
                word.0.len()
            )));
        }
        let (ga, ma) = substitution[word.0[0]];
        let (gb, mb) = substitution[word.0[1]];
        if let Some(mon) = mul_mon(ma, mb) {
            tensor_image[t_index(ga, gb, mon)] ^= 1;
        }
    }
    let vanishes_in_tensor_square = insertions.contains(&tensor_image)?;

    // Verdict (b): quotient the tensor square further by all squares w⊗w.
    // Expanding (u+v)⊗(u+v) shows the basis squares and the symmetrized
    // basis pairs span them.
    let mut wedge = insertions;
    for (i, &(ga, ma)) in reps.iter().enumerate() {
        let mut square = vec![0u64; 72];
        if let Some(mon) = mul_mon(ma, ma) {
            square[t_index(ga, ga, mon)] ^= 1;
        }
        wedge.insert(&square)?;
        for &(gb, mb) in reps.iter().skip(i + 1) {
            let mut pair = vec![0u64; 72];
            if let Some(mon) = mul_mon(ma, mb) {
                pair[t_index(ga, gb, mon)] ^= 1;
                pair[t_index(gb, ga, mon)] ^= 1;
            }
            wedge.insert(&pair)?;
        }
    }
    let mut wedge_class = vec![0u64; 72];
    for (word, _) in lp.terms().terms() {
        let (ga, ma) = substitution[word[0]];
        let (gb, mb) = substitution[word[1]];
        if let Some(mon) = mul_mon(ma, mb) {
            wedge_class[t_index(ga, gb, mon)] ^= 1;
        }
    }
    let nonzero_in_wedge = !wedge.contains(&wedge_class)?;

    Ok(CohnReport {
        l_dimension,
        relation_rank,
        insertion_rank,
        vanishes_in_tensor_square,
        nonzero_in_wedge,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebras::{
        abelian, chain_3dim, dual_numbers, nilpotent_2dim, truncated_free_4dim,
    };
    use crate::prelie::FreePreLie;
    use crate::tree::LabeledRootedTree;

    fn f(p: u64) -> RingSpec {
        RingSpec::prime_field(p).unwrap()
    }

    #[test]
    fn lambda_2_is_the_commutator() {
        let lp = lambda_p(2).unwrap();
        let ring = f(2);
        let mut expected_terms = LinComb::zero(&ring);
        expected_terms
            .add_term(vec![0, 1], &Scalar::one(&ring))
            .unwrap();
        assert_eq!(*lp.terms(), expected_terms);
        // Oracle: (x+y)² - x² - y² = xy + yx, and -yx ≡ yx mod 2.
        let mut expected_expansion = LinComb::zero(&ring);
        expected_expansion
            .add_term(TensorWord(vec![0, 1]), &Scalar::one(&ring))
            .unwrap();
        expected_expansion
            .add_term(TensorWord(vec![1, 0]), &Scalar::one(&ring))
            .unwrap();
        assert_eq!(*lp.expansion(), expected_expansion);
        assert_eq!(lp.format(&["x", "y"]).unwrap(), "[x,y]");
    }

    #[test]
    fn lambda_terms_each_involve_the_second_letter() {
        for p in [2, 3, 5, 7] {
            let lp = lambda_p(p).unwrap();
            assert!(!lp.terms().is_zero(), "Λ_{p} came out zero");
            for (word, _) in lp.terms().terms() {
                assert_eq!(word.len(), p as usize);
                assert!(word.contains(&1), "Λ_{p} has the pure-x word {word:?}");
            }
        }
        // Hence substituting y = 0 kills every term.
        let lp = lambda_p(3).unwrap();
        let free = FreePreLie::new(lp.ring(), &["x", "y"]).unwrap();
        let x = free.generator("x").unwrap();
        let zero = LinComb::zero(lp.ring());
        assert!(lp.evaluate(&free, &[x, zero]).unwrap().is_zero());
    }

    #[test]
    fn lambda_expansion_is_consistent() {
        for p in [2, 3, 5, 7] {
            assert!(lambda_p(p).unwrap().check_consistency().unwrap());
        }
    }

    #[test]
    fn lambda_rejects_bad_primes() {
        assert!(matches!(lambda_p(11), Err(Error::PrimeTooLarge(11, 7))));
        assert!(matches!(lambda_p(4), Err(Error::NotPrime(4))));
    }

    #[test]
    fn zassenhaus_identity_holds() {
        for p in [2, 3, 5, 7] {
            assert!(verify_zassenhaus(p).unwrap(), "failed at p = {p}");
        }
    }

    #[test]
    fn prelie_powers_match_grafting() {
        let ring = RingSpec::rational();
        let free = FreePreLie::new(&ring, &["x"]).unwrap();
        let x = free.generator("x").unwrap();
        assert_eq!(prelie_power(&free, &x, 1).unwrap(), x);
        let l2 = LinComb::single(&ring, LabeledRootedTree::parse("x[x]").unwrap());
        assert_eq!(prelie_power(&free, &x, 2).unwrap(), l2);
        let l3 = LinComb::single(&ring, LabeledRootedTree::parse("x[x[x]]").unwrap());
        let c2 = LinComb::single(&ring, LabeledRootedTree::parse("x[x,x]").unwrap());
        assert_eq!(prelie_power(&free, &x, 3).unwrap(), l3.add(&c2).unwrap());
        assert!(matches!(
            prelie_power(&free, &x, 0),
            Err(Error::Invalid(_))
        ));
    }

    #[test]
    fn right_action_power_iterates_from_the_right() {
        let ring = RingSpec::rational();
        let free = FreePreLie::new(&ring, &["x", "y"]).unwrap();
        let x = free.generator("x").unwrap();
        let y = free.generator("y").unwrap();
        assert_eq!(right_action_power(&free, &y, &x, 0).unwrap(), y);
        // (y∘x)∘x puts both x's directly under the root.
        let both_under_root =
            LinComb::single(&ring, LabeledRootedTree::parse("y[x,x]").unwrap());
        let chain = LinComb::single(&ring, LabeledRootedTree::parse("y[x[x]]").unwrap());
        assert_eq!(
            right_action_power(&free, &y, &x, 2).unwrap(),
            both_under_root.add(&chain).unwrap()
        );
    }

    #[test]
    fn touid_holds_for_small_primes() {
        for p in [2, 3, 5] {
            assert!(verify_touid(p).unwrap(), "failed at p = {p}");
        }
        assert!(matches!(verify_touid(7), Err(Error::PrimeTooLarge(7, 5))));
    }

    #[test]
    fn adid_holds_on_the_builtin_tables() {
        assert!(verify_adid(&abelian(&f(2), 2).unwrap(), 2).unwrap());
        assert!(verify_adid(&nilpotent_2dim(&f(2)).unwrap(), 2).unwrap());
        assert!(verify_adid(&chain_3dim(&f(2)).unwrap(), 2).unwrap());
        assert!(verify_adid(&truncated_free_4dim(&f(3)).unwrap(), 3).unwrap());
        assert!(matches!(
            verify_adid(&nilpotent_2dim(&f(2)).unwrap(), 3),
            Err(Error::UnsupportedRing(_))
        ));
    }

    #[test]
    fn witness_scan_clears_restricted_tables() {
        assert!(nonrestricted_witness_in(&abelian(&f(2), 3).unwrap(), 2)
            .unwrap()
            .is_none());
        // Associative products satisfy both power identities.
        assert!(nonrestricted_witness_in(&dual_numbers(&f(2)).unwrap(), 2)
            .unwrap()
            .is_none());
    }

    #[test]
    fn chain_algebra_is_not_restricted() {
        let alg = chain_3dim(&f(2)).unwrap();
        let w = nonrestricted_witness_in(&alg, 2).unwrap().unwrap();
        assert_eq!(w.kind, WitnessKind::AdPower);
        assert_eq!((w.x, w.z), (0, 0));
        // ad²(e1)(e1) = 0, while e1^{∘2} = e2 and [e2, e1] = e3.
        assert!(w.lhs.is_zero());
        assert_eq!(w.rhs, LinComb::single(&f(2), 2usize));
        assert_eq!(
            w.to_string(),
            "ad^2(e1) sends e1 to 0, but ad(e1^{∘2}) sends it to e3"
        );
    }

    #[test]
    fn seeded_search_finds_a_witness() {
        let w = find_nonrestricted_witness(2, 3, 0).unwrap().unwrap();
        assert!(w.table.check_axiom().unwrap().is_none());
        let replay = nonrestricted_witness_in(&w.table, 2).unwrap().unwrap();
        assert_eq!((replay.x, replay.z), (w.x, w.z));
        assert!(matches!(
            find_nonrestricted_witness(5, 3, 0),
            Err(Error::Invalid(_))
        ));
        assert!(matches!(
            find_nonrestricted_witness(2, 4, 0),
            Err(Error::Invalid(_))
        ));
    }

    #[test]
    fn cohn_report_certifies_the_failure() {
        let report = cohn_counterexample(2).unwrap();
        assert_eq!(report.relation_rank, 7);
        assert_eq!(report.l_dimension, 17);
        assert!(report.vanishes_in_tensor_square);
        assert!(report.nonzero_in_wedge);
        assert!(report.pbw_fails());
        let text = report.to_string();
        assert!(text.contains("dimension 17"));
        assert!(text.contains("injective: no"));
    }

    #[test]
    fn cohn_is_limited_to_p_2() {
        let err = cohn_counterexample(3).unwrap_err();
        assert!(err.to_string().contains("memory"));
    }

    #[test]
    fn bracket_expansion_rejects_the_empty_word() {
        assert!(matches!(
            expand_bracket_word(&f(2), &[]),
            Err(Error::Invalid(_))
        ));
    }
}
