//! Exact linear algebra over `F_p` and over `Q`.
//!
//! [`FpVectorSpace`] is an incremental row-reduced span: vectors go in one at
//! a time and the basis is kept in reduced echelon form, so membership tests
//! are a single elimination pass. Rows are bit-packed words for `p = 2` and
//! byte vectors for odd primes up to [`MAX_FLAT_PRIME`]; larger primes are
//! rejected rather than silently slow.

use num::rational::BigRational;
use num::Zero;

use crate::error::Error;
use crate::ring::{is_prime_u64, MAX_FLAT_PRIME};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Row {
    /// One bit per column, 64 columns per word.
    Bits(Vec<u64>),
    /// One residue per column.
    Bytes(Vec<u8>),
}

impl Row {
    fn zero(p: u64, width: usize) -> Row {
        if p == 2 {
            Row::Bits(vec![0u64; width.div_ceil(64)])
        } else {
            Row::Bytes(vec![0u8; width])
        }
    }

    fn from_slice(p: u64, width: usize, v: &[u64]) -> Row {
        let mut row = Row::zero(p, width);
        for (i, &x) in v.iter().enumerate() {
            row.set(i, x % p);
        }
        row
    }

    fn get(&self, col: usize) -> u64 {
        match self {
            Row::Bits(w) => (w[col / 64] >> (col % 64)) & 1,
            Row::Bytes(b) => b[col] as u64,
        }
    }

    fn set(&mut self, col: usize, val: u64) {
        match self {
            Row::Bits(w) => {
                let mask = 1u64 << (col % 64);
                if val & 1 == 1 {
                    w[col / 64] |= mask;
                } else {
                    w[col / 64] &= !mask;
                }
            }
            Row::Bytes(b) => b[col] = val as u8,
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Row::Bits(w) => w.iter().all(|&x| x == 0),
            Row::Bytes(b) => b.iter().all(|&x| x == 0),
        }
    }

    fn first_nonzero(&self, width: usize) -> Option<usize> {
        match self {
            Row::Bits(w) => {
                for (i, &word) in w.iter().enumerate() {
                    if word != 0 {
                        let col = i * 64 + word.trailing_zeros() as usize;
                        return (col < width).then_some(col);
                    }
                }
                None
            }
            Row::Bytes(b) => b.iter().position(|&x| x != 0),
        }
    }

    /// `self -= factor * other` (mod p). For `p = 2` the only nonzero factor
    /// is 1, which is a word-wise xor.
    fn sub_scaled(&mut self, factor: u64, other: &Row, p: u64) {
        if factor == 0 {
            return;
        }
        match (self, other) {
            (Row::Bits(a), Row::Bits(b)) => {
                for (x, y) in a.iter_mut().zip(b) {
                    *x ^= y;
                }
            }
            (Row::Bytes(a), Row::Bytes(b)) => {
                for (x, y) in a.iter_mut().zip(b) {
                    let v = (*x as u64 + (p - factor) * (*y as u64)) % p;
                    *x = v as u8;
                }
            }
            _ => unreachable!("row kinds are fixed per space"),
        }
    }

    /// `self *= factor` (mod p).
    fn scale(&mut self, factor: u64, p: u64) {
        match self {
            Row::Bits(_) => {}
            Row::Bytes(b) => {
                for x in b.iter_mut() {
                    *x = ((*x as u64 * factor) % p) as u8;
                }
            }
        }
    }

    fn to_vec(&self, width: usize) -> Vec<u64> {
        (0..width).map(|i| self.get(i)).collect()
    }
}

fn fp_inv(a: u64, p: u64) -> u64 {
    // p is prime and a nonzero mod p, so Fermat applies.
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// An `F_p`-subspace of `F_p^width`, built by inserting spanning vectors.
#[derive(Debug, Clone)]
pub struct FpVectorSpace {
    p: u64,
    width: usize,
    rows: Vec<Row>,
    pivots: Vec<usize>,
}

impl FpVectorSpace {
    pub fn new(p: u64, width: usize) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        if p > MAX_FLAT_PRIME {
            return Err(Error::PrimeTooLarge(p, MAX_FLAT_PRIME));
        }
        Ok(FpVectorSpace { p, width, rows: Vec::new(), pivots: Vec::new() })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Pivot columns in insertion order of the corresponding basis rows.
    pub fn pivot_columns(&self) -> &[usize] {
        &self.pivots
    }

    fn check_width(&self, v: &[u64]) -> Result<()> {
        if v.len() != self.width {
            return Err(Error::DimensionMismatch { expected: self.width, got: v.len() });
        }
        Ok(())
    }

    fn reduce_row(&self, row: &mut Row) {
        for (r, &pc) in self.rows.iter().zip(&self.pivots) {
            let f = row.get(pc);
            row.sub_scaled(f, r, self.p);
        }
    }

    /// Adds `v` to the span. Returns `true` when the rank grew.
    pub fn insert(&mut self, v: &[u64]) -> Result<bool> {
        self.check_width(v)?;
        let mut row = Row::from_slice(self.p, self.width, v);
        self.reduce_row(&mut row);
        let Some(pc) = row.first_nonzero(self.width) else {
            return Ok(false);
        };
        row.scale(fp_inv(row.get(pc), self.p), self.p);
        for r in self.rows.iter_mut() {
            let f = r.get(pc);
            r.sub_scaled(f, &row, self.p);
        }
        self.rows.push(row);
        self.pivots.push(pc);
        Ok(true)
    }

    /// The residual of `v` after eliminating against the basis; zero exactly
    /// when `v` is in the span.
    pub fn residual(&self, v: &[u64]) -> Result<Vec<u64>> {
        self.check_width(v)?;
        let mut row = Row::from_slice(self.p, self.width, v);
        self.reduce_row(&mut row);
        Ok(row.to_vec(self.width))
    }

    pub fn contains(&self, v: &[u64]) -> Result<bool> {
        self.check_width(v)?;
        let mut row = Row::from_slice(self.p, self.width, v);
        self.reduce_row(&mut row);
        Ok(row.is_zero())
    }

    /// The reduced basis rows as dense vectors.
    pub fn basis_rows(&self) -> Vec<Vec<u64>> {
        self.rows.iter().map(|r| r.to_vec(self.width)).collect()
    }
}

/// An [`FpVectorSpace`] that also remembers how each basis row was obtained
/// from the inserted generators, so vectors in the span can be expressed as
/// explicit combinations of those generators.
#[derive(Debug, Clone)]
pub struct TrackingSolver {
    space: FpVectorSpace,
    /// `combos[i]` is the coordinate vector of basis row `i` over the
    /// generators inserted so far; shorter vectors are implicitly
    /// zero-padded.
    combos: Vec<Vec<u64>>,
    inserted: usize,
}

impl TrackingSolver {
    pub fn new(p: u64, width: usize) -> Result<Self> {
        Ok(TrackingSolver { space: FpVectorSpace::new(p, width)?, combos: Vec::new(), inserted: 0 })
    }

    pub fn rank(&self) -> usize {
        self.space.rank()
    }

    pub fn generators(&self) -> usize {
        self.inserted
    }

    fn combo_add_scaled(dst: &mut Vec<u64>, factor: u64, src: &[u64], p: u64) {
        if dst.len() < src.len() {
            dst.resize(src.len(), 0);
        }
        for (x, &y) in dst.iter_mut().zip(src) {
            *x = (*x + factor * y) % p;
        }
    }

    /// Inserts generator number `generators()`; returns `true` when it was
    /// independent of the earlier ones.
    pub fn insert(&mut self, v: &[u64]) -> Result<bool> {
        let space = &mut self.space;
        space.check_width(v)?;
        let p = space.p;
        let mut row = Row::from_slice(p, space.width, v);
        let mut combo = vec![0u64; self.inserted + 1];
        combo[self.inserted] = 1;
        self.inserted += 1;
        for (k, (r, &pc)) in space.rows.iter().zip(&space.pivots).enumerate() {
            let f = row.get(pc);
            if f != 0 {
                row.sub_scaled(f, r, p);
                Self::combo_add_scaled(&mut combo, p - f, &self.combos[k], p);
            }
        }
        let Some(pc) = row.first_nonzero(space.width) else {
            return Ok(false);
        };
        let inv = fp_inv(row.get(pc), p);
        row.scale(inv, p);
        for c in combo.iter_mut() {
            *c = *c * inv % p;
        }
        for (k, r) in space.rows.iter_mut().enumerate() {
            let f = r.get(pc);
            if f != 0 {
                r.sub_scaled(f, &row, p);
                let combo_k = std::mem::take(&mut self.combos[k]);
                let mut ck = combo_k;
                Self::combo_add_scaled(&mut ck, p - f, &combo, p);
                self.combos[k] = ck;
            }
        }
        space.rows.push(row);
        space.pivots.push(pc);
        self.combos.push(combo);
        Ok(true)
    }

    /// If `v` lies in the span, returns coefficients `c` with
    /// `v = sum c[i] * generator[i]` (length `generators()`).
    pub fn express(&self, v: &[u64]) -> Result<Option<Vec<u64>>> {
        let space = &self.space;
        space.check_width(v)?;
        let p = space.p;
        let mut row = Row::from_slice(p, space.width, v);
        let mut acc = vec![0u64; self.inserted];
        for (k, (r, &pc)) in space.rows.iter().zip(&space.pivots).enumerate() {
            let f = row.get(pc);
            if f != 0 {
                row.sub_scaled(f, r, p);
                Self::combo_add_scaled(&mut acc, f, &self.combos[k], p);
            }
        }
        if !row.is_zero() {
            return Ok(None);
        }
        acc.resize(self.inserted, 0);
        Ok(Some(acc))
    }
}

/// Flattens a combination over a finite key basis into one `F_p` vector.
///
/// Each key occupies a block of `fp_basis(ring)` coordinates, in basis-index
/// order, so ring coefficients like `beta*gamma` become honest `F_p` entries.
pub fn flatten<K: Ord + Clone + std::fmt::Display>(
    v: &crate::lincomb::LinComb<K>,
    basis: &[K],
) -> Result<Vec<u64>> {
    let ring = v.ring();
    let ring_basis = crate::ring::fp_basis(ring)?;
    let block = ring_basis.len();
    let index: std::collections::BTreeMap<&K, usize> =
        basis.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut out = vec![0u64; basis.len() * block];
    for (k, c) in v.terms() {
        let Some(&i) = index.get(k) else {
            return Err(Error::UnknownBasisKey(k.to_string()));
        };
        for (j, m) in ring_basis.iter().enumerate() {
            out[i * block + j] = c.fp_coefficient(m)?;
        }
    }
    Ok(out)
}

/// Inverse of [`flatten`]: rebuilds the combination from block coordinates.
pub fn unflatten<K: Ord + Clone>(
    ring: &crate::ring::RingSpec,
    basis: &[K],
    coords: &[u64],
) -> Result<crate::lincomb::LinComb<K>> {
    let block = crate::ring::fp_basis(ring)?.len();
    if coords.len() != basis.len() * block {
        return Err(Error::DimensionMismatch { expected: basis.len() * block, got: coords.len() });
    }
    let mut out = crate::lincomb::LinComb::zero(ring);
    for (i, k) in basis.iter().enumerate() {
        let c = crate::ring::Scalar::from_fp_coordinates(ring, &coords[i * block..(i + 1) * block])?;
        if !c.is_zero() {
            out.add_term(k.clone(), &c)?;
        }
    }
    Ok(out)
}

/// Rank of a matrix over `Q`, by exact Gaussian elimination.
pub fn rational_rank(rows: &[Vec<BigRational>]) -> Result<usize> {
    let width = rows.first().map_or(0, |r| r.len());
    let mut mat: Vec<Vec<BigRational>> = Vec::with_capacity(rows.len());
    for r in rows {
        if r.len() != width {
            return Err(Error::DimensionMismatch { expected: width, got: r.len() });
        }
        mat.push(r.clone());
    }
    let mut rank = 0usize;
    for col in 0..width {
        let Some(pivot) = (rank..mat.len()).find(|&i| !mat[i][col].is_zero()) else {
            continue;
        };
        mat.swap(rank, pivot);
        let inv = mat[rank][col].recip();
        for x in mat[rank].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..mat.len() {
            if i != rank && !mat[i][col].is_zero() {
                let f = mat[i][col].clone();
                for c in col..width {
                    let delta = &f * &mat[rank][c];
                    mat[i][c] = &mat[i][c] - delta;
                }
            }
        }
        rank += 1;
        if rank == mat.len() {
            break;
        }
    }
    Ok(rank)
}
