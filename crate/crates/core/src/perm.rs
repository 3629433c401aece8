//! Permutations and block permutations.
//!
//! Permutations are stored as image vectors on 0-based letters. A block
//! permutation is a permutation of n slots together with a size for each
//! slot; it expands to a letter permutation that moves each block intact,
//! preserving the order inside every block. Degree-decorated symmetry data
//! is phrased everywhere in terms of these expansions.

use std::fmt;

use rand::Rng;

use crate::error::Error;
use crate::Result;

/// A permutation of `{0, 1, ..., n-1}`, stored as its image vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::Invalid(format!(
                    "image vector {images:?} is not a permutation of 0..{n}"
                )));
            }
            seen[i] = true;
        }
        Ok(Perm { images })
    }

    pub fn identity(n: usize) -> Self {
        Perm { images: (0..n).collect() }
    }

    /// The adjacent transposition swapping letters `i` and `i+1` in degree `n`.
    pub fn transposition(n: usize, i: usize) -> Result<Self> {
        if i + 1 >= n {
            return Err(Error::SizeMismatch(format!(
                "adjacent transposition ({i}, {}) does not fit in degree {n}",
                i + 1
            )));
        }
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(i, i + 1);
        Ok(Perm { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &im)| i == im)
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &Perm) -> Result<Perm> {
        if self.degree() != first.degree() {
            return Err(Error::SizeMismatch(format!(
                "cannot compose permutations of degrees {} and {}",
                self.degree(),
                first.degree()
            )));
        }
        Ok(Perm {
            images: (0..self.degree()).map(|i| self.apply(first.apply(i))).collect(),
        })
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.degree()];
        for (i, &im) in self.images.iter().enumerate() {
            images[im] = i;
        }
        Perm { images }
    }

    /// Indices `w` of adjacent transpositions with `self = s_{w[k-1]} ∘ … ∘
    /// s_{w[0]}`; when acting on a module, apply `w[0]` first. The word length
    /// equals the inversion count.
    pub fn adjacent_word(&self) -> Vec<usize> {
        let mut images = self.images.clone();
        let mut word = Vec::new();
        loop {
            let mut moved = false;
            for i in 0..images.len().saturating_sub(1) {
                if images[i] > images[i + 1] {
                    images.swap(i, i + 1);
                    word.push(i);
                    moved = true;
                    break;
                }
            }
            if !moved {
                break;
            }
        }
        word
    }

    pub fn random(n: usize, rng: &mut impl Rng) -> Perm {
        let mut images: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            images.swap(i, j);
        }
        Perm { images }
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, im) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{im}")?;
        }
        write!(f, "]")
    }
}

/// A permutation of block slots together with the size of each block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPermutation {
    sigma: Perm,
    sizes: Vec<usize>,
}

impl BlockPermutation {
    pub fn new(sigma: Perm, sizes: Vec<usize>) -> Result<Self> {
        if sigma.degree() != sizes.len() {
            return Err(Error::SizeMismatch(format!(
                "permutation of {} blocks given {} block sizes",
                sigma.degree(),
                sizes.len()
            )));
        }
        Ok(BlockPermutation { sigma, sizes })
    }

    pub fn sigma(&self) -> &Perm {
        &self.sigma
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Block sizes in target order, i.e. after the blocks have been moved.
    pub fn sizes_after(&self) -> Vec<usize> {
        let mut out = vec![0; self.sizes.len()];
        for (j, &s) in self.sizes.iter().enumerate() {
            out[self.sigma.apply(j)] = s;
        }
        out
    }

    /// The letter permutation moving source block `j` onto target slot
    /// `sigma(j)`, order-preserving inside each block.
    pub fn expand(&self) -> Perm {
        let n = self.sizes.len();
        let r: usize = self.sizes.iter().sum();
        let mut source_start = vec![0; n];
        for j in 1..n {
            source_start[j] = source_start[j - 1] + self.sizes[j - 1];
        }
        let after = self.sizes_after();
        let mut target_slot_start = vec![0; n];
        for s in 1..n {
            target_slot_start[s] = target_slot_start[s - 1] + after[s - 1];
        }
        let mut images = vec![0; r];
        for j in 0..n {
            let t0 = target_slot_start[self.sigma.apply(j)];
            for a in 0..self.sizes[j] {
                images[source_start[j] + a] = t0 + a;
            }
        }
        Perm { images }
    }
}

/// Shorthand: expand the block permutation with the given slot images and
/// block sizes.
pub fn block_perm(images: &[usize], sizes: &[usize]) -> Result<Perm> {
    Ok(BlockPermutation::new(Perm::new(images.to_vec())?, sizes.to_vec())?.expand())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn block_swap_examples() {
        // Swapping a block of 1 past a block of 2 in S_3.
        let p = block_perm(&[1, 0], &[1, 2]).unwrap();
        assert_eq!(p, Perm::new(vec![2, 0, 1]).unwrap());
        // Swapping two blocks of 2 in S_4.
        let p = block_perm(&[1, 0], &[2, 2]).unwrap();
        assert_eq!(p, Perm::new(vec![2, 3, 0, 1]).unwrap());
        let id = block_perm(&[0, 1, 2], &[2, 1, 3]).unwrap();
        assert!(id.is_identity());
    }

    #[test]
    fn two_block_swap_matches_case_formula() {
        // (12)^{h,g} sends a to a+g for a < h and to a-h otherwise.
        for h in 0..=4usize {
            for g in 0..=4usize {
                let p = block_perm(&[1, 0], &[h, g]).unwrap();
                for a in 0..(h + g) {
                    let expected = if a < h { a + g } else { a - h };
                    assert_eq!(p.apply(a), expected, "h={h} g={g} a={a}");
                }
            }
        }
    }

    #[test]
    fn three_block_identities() {
        for i in 0..=3usize {
            for j in 0..=3usize {
                for k in 0..=3usize {
                    let s12 = block_perm(&[1, 0, 2], &[i, j, k]).unwrap();
                    let s23 = block_perm(&[0, 2, 1], &[i, j, k]).unwrap();
                    let c123 = block_perm(&[1, 2, 0], &[i, j, k]).unwrap();
                    let c132 = block_perm(&[2, 0, 1], &[i, j, k]).unwrap();

                    // (12)^{i,j,k} = (12)^{i,j} x Id_k.
                    let mut images: Vec<usize> =
                        (0..(i + j)).map(|a| block_perm(&[1, 0], &[i, j]).unwrap().apply(a)).collect();
                    images.extend((i + j)..(i + j + k));
                    assert_eq!(s12, Perm::new(images).unwrap());

                    // (23)^{i,j,k} = Id_i x (23)^{j,k}.
                    let inner = block_perm(&[1, 0], &[j, k]).unwrap();
                    let mut images: Vec<usize> = (0..i).collect();
                    images.extend((0..(j + k)).map(|a| i + inner.apply(a)));
                    assert_eq!(s23, Perm::new(images).unwrap());

                    // (123)^{i,j,k} = (12)^{i,k,j} (23)^{i,j,k} and
                    // (132)^{i,j,k} = (23)^{j,i,k} (12)^{i,j,k}.
                    let s12_ikj = block_perm(&[1, 0, 2], &[i, k, j]).unwrap();
                    assert_eq!(c123, s12_ikj.compose(&s23).unwrap());
                    let s23_jik = block_perm(&[0, 2, 1], &[j, i, k]).unwrap();
                    assert_eq!(c132, s23_jik.compose(&s12).unwrap());
                }
            }
        }
    }

    #[test]
    fn composition_law_on_random_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(1..=5);
            let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
            let sigma = Perm::random(n, &mut rng);
            let tau = Perm::random(n, &mut rng);
            let tau_bp = BlockPermutation::new(tau.clone(), sizes.clone()).unwrap();
            let sigma_bp = BlockPermutation::new(sigma.clone(), tau_bp.sizes_after()).unwrap();
            let composite = BlockPermutation::new(sigma.compose(&tau).unwrap(), sizes).unwrap();
            assert_eq!(
                composite.expand(),
                sigma_bp.expand().compose(&tau_bp.expand()).unwrap()
            );
        }
    }

    #[test]
    fn adjacent_word_reconstructs_the_permutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let n = rng.gen_range(1..=6);
            let p = Perm::random(n, &mut rng);
            let mut acc = Perm::identity(n);
            for i in p.adjacent_word() {
                acc = Perm::transposition(n, i).unwrap().compose(&acc).unwrap();
            }
            assert_eq!(acc, p);
            let inversions = (0..n)
                .flat_map(|a| ((a + 1)..n).map(move |b| (a, b)))
                .filter(|&(a, b)| p.apply(a) > p.apply(b))
                .count();
            assert_eq!(p.adjacent_word().len(), inversions);
        }
    }

    #[test]
    fn bad_inputs_are_rejected() {
        assert!(Perm::new(vec![0, 0]).is_err());
        assert!(Perm::new(vec![1, 2]).is_err());
        match block_perm(&[1, 0], &[1, 2, 3]) {
            Err(Error::SizeMismatch(_)) => {}
            other => panic!("expected SizeMismatch, got {other:?}"),
        }
    }
}
