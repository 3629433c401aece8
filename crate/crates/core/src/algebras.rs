//! A small stable of concrete algebras used by tests, the verification
//! suite, and the CLI's named-algebra flags.

use crate::lincomb::LinComb;
use crate::prelie::{LieTable, TablePreLie};
use crate::ring::RingSpec;
use crate::Result;

/// Two-dimensional nilpotent algebra: `e1∘e1 = e2`, all other products zero.
pub fn nilpotent_2dim(ring: &RingSpec) -> Result<TablePreLie> {
    let z = LinComb::zero(ring);
    let table = vec![
        vec![LinComb::single(ring, 1), z.clone()],
        vec![z.clone(), z.clone()],
    ];
    TablePreLie::new(ring, &["e1", "e2"], table)
}

/// Three-dimensional algebra `e1∘e1 = e2`, `e2∘e1 = e3`, all other products
/// zero. Nilpotent of length three; its commutator bracket is nonzero.
pub fn chain_3dim(ring: &RingSpec) -> Result<TablePreLie> {
    let z = LinComb::zero(ring);
    let e = |i: usize| LinComb::single(ring, i);
    let table = vec![
        vec![e(1), z.clone(), z.clone()],
        vec![e(2), z.clone(), z.clone()],
        vec![z.clone(), z.clone(), z.clone()],
    ];
    TablePreLie::new(ring, &["e1", "e2", "e3"], table)
}

/// The commutative associative algebra `k[ε]/(ε²)` viewed as pre-Lie through
/// its own product; basis `(1, ε)`.
pub fn dual_numbers(ring: &RingSpec) -> Result<TablePreLie> {
    let z = LinComb::zero(ring);
    let e = |i: usize| LinComb::single(ring, i);
    let table = vec![vec![e(0), e(1)], vec![e(1), z.clone()]];
    TablePreLie::new(ring, &["one", "eps"], table)
}

/// The free pre-Lie algebra on one generator truncated above three vertices:
/// basis `(•, ℓ2, ℓ3, c2)` with grafting products, terms with four or more
/// vertices dropped. Four-dimensional.
pub fn truncated_free_4dim(ring: &RingSpec) -> Result<TablePreLie> {
    let z = LinComb::zero(ring);
    let e = |i: usize| LinComb::single(ring, i);
    // Order: 0 = •, 1 = ℓ2 (chain), 2 = ℓ3 (3-chain), 3 = c2 (corolla).
    // •∘• = ℓ2; ℓ2∘• = ℓ3 + c2; •∘ℓ2 = ℓ3; all else leaves the truncation.
    let l2_dot = e(2).add(&e(3))?;
    let table = vec![
        vec![e(1), e(2), z.clone(), z.clone()],
        vec![l2_dot, z.clone(), z.clone(), z.clone()],
        vec![z.clone(), z.clone(), z.clone(), z.clone()],
        vec![z.clone(), z.clone(), z.clone(), z.clone()],
    ];
    TablePreLie::new(ring, &["dot", "l2", "l3", "c2"], table)
}

/// The abelian algebra of a given dimension: every product is zero.
pub fn abelian(ring: &RingSpec, dim: usize) -> Result<TablePreLie> {
    let z = LinComb::zero(ring);
    let names: Vec<String> = (0..dim).map(|i| format!("e{}", i + 1)).collect();
    let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    TablePreLie::new(ring, &name_refs, vec![vec![z; dim]; dim])
}

/// A table over F_2 that violates the pre-Lie identity; built unchecked on
/// purpose, for negative controls.
pub fn non_prelie_control() -> Result<TablePreLie> {
    let ring = RingSpec::prime_field(2)?;
    let e = |i: usize| LinComb::single(&ring, i);
    let z = LinComb::zero(&ring);
    let table = vec![vec![e(0), e(0)], vec![e(1), z]];
    TablePreLie::new_unchecked(&ring, &["e1", "e2"], table)
}

/// The 2-dimensional nonabelian Lie algebra `{e1,e2} = e1`.
pub fn affine_line_lie(ring: &RingSpec) -> Result<LieTable> {
    let e1 = LinComb::single(ring, 0usize);
    let z = LinComb::zero(ring);
    let bracket = vec![vec![z.clone(), e1.clone()], vec![e1.neg(), z.clone()]];
    LieTable::new(ring, &["e1", "e2"], bracket)
}

/// The abelian Lie algebra of a given dimension.
pub fn abelian_lie(ring: &RingSpec, dim: usize) -> Result<LieTable> {
    let z = LinComb::zero(ring);
    let names: Vec<String> = (0..dim).map(|i| format!("e{}", i + 1)).collect();
    let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    LieTable::new(ring, &name_refs, vec![vec![z; dim]; dim])
}
