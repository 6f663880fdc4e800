//! Permutations, Koszul signs, and the unshuffle combinatorics that drive
//! every brace formula.
//!
//! Signs are computed by counting inverted pairs, never by manipulating a
//! symbolic exterior algebra: for a permutation `σ` and graded letters
//! `x_1 … x_n` the Koszul sign `ε(σ)` picks up one factor
//! `(-1)^{|x_i||x_j|}` for every pair transposed by `σ`, and the
//! antisymmetric variant is `χ(σ) = sgn(σ)·ε(σ)`.

use crate::error::{Error, Result};

/// A permutation of `{0, …, n-1}` stored as its image sequence: slot `t` of
/// the rearranged list holds the element originally at `images[t]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// Builds a permutation from its image sequence, checking bijectivity.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::Validation(format!(
                    "images {images:?} are not a bijection of 0..{n}"
                )));
            }
            seen[i] = true;
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// σ⁻¹, so that `inverse().images()[σ(t)] = t`.
    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (t, &i) in self.images.iter().enumerate() {
            inv[i] = t;
        }
        Self { images: inv }
    }

    /// Composition `self ∘ other`: first rearrange by `other`, then by `self`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(Self {
            images: self.images.iter().map(|&t| other.images[t]).collect(),
        })
    }

    /// (-1)^{number of inversions}.
    pub fn sign(&self) -> i64 {
        let mut sgn = 1i64;
        for t in 0..self.images.len() {
            for s in t + 1..self.images.len() {
                if self.images[t] > self.images[s] {
                    sgn = -sgn;
                }
            }
        }
        sgn
    }

    /// The permutation that sorts `keys` stably: applying it to `keys` yields
    /// the sorted sequence.
    pub fn sorting(keys: &[usize]) -> Self {
        let mut images: Vec<usize> = (0..keys.len()).collect();
        images.sort_by_key(|&t| (keys[t], t));
        Self { images }
    }
}

/// Koszul sign ε(σ; x_1…x_n) for letters with the given degrees:
/// the sign fixed by `x_1 ∧ … ∧ x_n = ε · x_{σ(1)} ∧ … ∧ x_{σ(n)}`.
pub fn koszul_sign(sigma: &Permutation, degrees: &[i64]) -> Result<i64> {
    if sigma.len() != degrees.len() {
        return Err(Error::LengthMismatch {
            expected: sigma.len(),
            got: degrees.len(),
        });
    }
    let im = sigma.images();
    let mut sgn = 1i64;
    for t in 0..im.len() {
        for s in t + 1..im.len() {
            if im[t] > im[s] && degrees[im[t]] % 2 != 0 && degrees[im[s]] % 2 != 0 {
                sgn = -sgn;
            }
        }
    }
    Ok(sgn)
}

/// Antisymmetric Koszul sign χ(σ) = sgn(σ)·ε(σ).
pub fn antisym_koszul_sign(sigma: &Permutation, degrees: &[i64]) -> Result<i64> {
    Ok(sigma.sign() * koszul_sign(sigma, degrees)?)
}

/// An ordered partition of a subset of `{0, …, n-1}` into blocks, each block
/// strictly increasing and the blocks pairwise disjoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unshuffle {
    pub blocks: Vec<Vec<usize>>,
}

impl Unshuffle {
    /// Concatenation of the blocks, i.e. the image sequence of the unshuffle
    /// permutation when the blocks partition all of `{0, …, n-1}`.
    pub fn flatten(&self) -> Vec<usize> {
        self.blocks.iter().flatten().copied().collect()
    }

    pub fn permutation(&self) -> Result<Permutation> {
        Permutation::new(self.flatten())
    }
}

/// All ordered partitions of `{0, …, n-1}` into `num_blocks` increasing
/// blocks, in lexicographic order of the block-assignment word. Empty blocks
/// are admitted iff `allow_empty`.
pub fn unshuffles(n: usize, num_blocks: usize, allow_empty: bool) -> Vec<Unshuffle> {
    assert!(num_blocks >= 1, "need at least one block");
    let mut out = Vec::new();
    let mut assignment = vec![0usize; n];
    loop {
        let mut blocks = vec![Vec::new(); num_blocks];
        for (elem, &b) in assignment.iter().enumerate() {
            blocks[b].push(elem);
        }
        if allow_empty || blocks.iter().all(|b| !b.is_empty()) {
            out.push(Unshuffle { blocks });
        }
        // increment the base-`num_blocks` word, most significant digit first
        let mut pos = n;
        while pos > 0 {
            pos -= 1;
            assignment[pos] += 1;
            if assignment[pos] < num_blocks {
                break;
            }
            assignment[pos] = 0;
            if pos == 0 {
                return out;
            }
        }
        if n == 0 {
            return out;
        }
    }
}

/// All unshuffles of `{0, …, Σ sizes - 1}` whose blocks have exactly the
/// prescribed sizes, in lexicographic order.
pub fn block_unshuffles(block_sizes: &[usize]) -> Vec<Unshuffle> {
    let n: usize = block_sizes.iter().sum();
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); block_sizes.len()];
    fn rec(
        elem: usize,
        n: usize,
        sizes: &[usize],
        blocks: &mut Vec<Vec<usize>>,
        out: &mut Vec<Unshuffle>,
    ) {
        if elem == n {
            out.push(Unshuffle {
                blocks: blocks.clone(),
            });
            return;
        }
        for b in 0..sizes.len() {
            if blocks[b].len() < sizes[b] {
                blocks[b].push(elem);
                rec(elem + 1, n, sizes, blocks, out);
                blocks[b].pop();
            }
        }
    }
    rec(0, n, block_sizes, &mut blocks, &mut out);
    out
}

/// All sequences `0 ≤ i_1 ≤ j_1 ≤ … ≤ i_m ≤ j_m ≤ n`, flattened as
/// `[i_1, j_1, …, i_m, j_m]`, in lexicographic order. These index the
/// insertion patterns of the nonsymmetric brace axiom.
pub fn brace_insertion_sequences(m: usize, n: usize) -> Vec<Vec<usize>> {
    assert!(m >= 1);
    let mut out = Vec::new();
    let mut seq = Vec::with_capacity(2 * m);
    fn rec(seq: &mut Vec<usize>, len: usize, low: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if seq.len() == len {
            out.push(seq.clone());
            return;
        }
        for v in low..=n {
            seq.push(v);
            rec(seq, len, v, n, out);
            seq.pop();
        }
    }
    rec(&mut seq, 2 * m, 0, n, &mut out);
    out
}

/// n! as u64; adequate for the desk-scale arities used here.
pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// All permutations of `{0, …, n-1}` in lexicographic order of images.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut out = Vec::with_capacity(factorial(n) as usize);
    let mut current: Vec<usize> = Vec::new();
    let mut used = vec![false; n];
    fn rec(
        n: usize,
        current: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Permutation>,
    ) {
        if current.len() == n {
            out.push(Permutation {
                images: current.clone(),
            });
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                current.push(i);
                rec(n, current, used, out);
                current.pop();
                used[i] = false;
            }
        }
    }
    rec(n, &mut current, &mut used, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(images: &[usize]) -> Permutation {
        Permutation::new(images.to_vec()).unwrap()
    }

    #[test]
    fn koszul_identity_is_plus_one() {
        for n in 0..5 {
            let id = Permutation::identity(n);
            let degs: Vec<i64> = (0..n as i64).collect();
            assert_eq!(koszul_sign(&id, &degs).unwrap(), 1);
        }
    }

    #[test]
    fn koszul_swap_of_two_odds_is_minus_one() {
        let swap = perm(&[1, 0]);
        assert_eq!(koszul_sign(&swap, &[1, 1]).unwrap(), -1);
        assert_eq!(koszul_sign(&swap, &[0, 1]).unwrap(), 1);
        assert_eq!(koszul_sign(&swap, &[2, 2]).unwrap(), 1);
    }

    #[test]
    fn koszul_three_cycle_on_odd_degrees() {
        // (x1,x2,x3) -> (x2,x3,x1): two inverted odd pairs, so ε = +1.
        let cycle = perm(&[1, 2, 0]);
        assert_eq!(koszul_sign(&cycle, &[1, 1, 1]).unwrap(), 1);
    }

    #[test]
    fn antisym_sign_is_sgn_times_koszul() {
        let swap = perm(&[1, 0]);
        assert_eq!(antisym_koszul_sign(&swap, &[0, 0]).unwrap(), -1);
        assert_eq!(antisym_koszul_sign(&swap, &[1, 1]).unwrap(), 1);
        assert_eq!(antisym_koszul_sign(&Permutation::identity(3), &[1, 2, 3]).unwrap(), 1);
    }

    #[test]
    fn koszul_sign_rejects_length_mismatch() {
        let swap = perm(&[1, 0]);
        assert!(koszul_sign(&swap, &[1]).is_err());
    }

    #[test]
    fn koszul_inverse_cancels() {
        // ε(σ; degs) · ε(σ⁻¹; degs permuted by σ) = 1 for all σ up to n = 6,
        // pseudo-random degrees in [-2, 2].
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for n in 0..=6 {
            for _ in 0..20 {
                let degs: Vec<i64> = (0..n).map(|_| (next() % 5) as i64 - 2).collect();
                let mut images: Vec<usize> = (0..n).collect();
                // Fisher–Yates with the same generator
                for i in (1..n).rev() {
                    let j = (next() as usize) % (i + 1);
                    images.swap(i, j);
                }
                let sigma = perm(&images);
                let permuted: Vec<i64> = sigma.images().iter().map(|&i| degs[i]).collect();
                let e1 = koszul_sign(&sigma, &degs).unwrap();
                let e2 = koszul_sign(&sigma.inverse(), &permuted).unwrap();
                assert_eq!(e1 * e2, 1);
            }
        }
    }

    #[test]
    fn koszul_cocycle_property() {
        // ε(στ; degs) = ε(σ; degs permuted by τ) · ε(τ; degs), exhaustively
        // for n ≤ 4 over a fixed degree vector with mixed parities.
        for n in 0..=4usize {
            let degs: Vec<i64> = (0..n).map(|i| [0i64, 1, -1, 2][i % 4]).collect();
            for sigma in all_permutations(n) {
                for tau in all_permutations(n) {
                    let st = sigma.compose(&tau).unwrap();
                    let degs_tau: Vec<i64> = tau.images().iter().map(|&i| degs[i]).collect();
                    let lhs = koszul_sign(&st, &degs).unwrap();
                    let rhs = koszul_sign(&sigma, &degs_tau).unwrap()
                        * koszul_sign(&tau, &degs).unwrap();
                    assert_eq!(lhs, rhs, "σ={sigma:?} τ={tau:?}");
                }
            }
        }
    }

    #[test]
    fn even_degrees_make_koszul_trivial() {
        for n in 0..=4usize {
            let degs = vec![2i64; n];
            for sigma in all_permutations(n) {
                assert_eq!(koszul_sign(&sigma, &degs).unwrap(), 1);
                assert_eq!(antisym_koszul_sign(&sigma, &degs).unwrap(), sigma.sign());
            }
        }
    }

    #[test]
    fn unshuffle_counts() {
        assert_eq!(unshuffles(2, 2, true).len(), 4);
        assert_eq!(unshuffles(0, 3, true).len(), 1);
        assert_eq!(unshuffles(3, 2, true).len(), 8);
        for n in 0..=4 {
            for k in 1..=3 {
                assert_eq!(unshuffles(n, k, true).len(), (k as u64).pow(n as u32) as usize);
            }
        }
    }

    #[test]
    fn unshuffle_blocks_increase_and_partition() {
        for u in unshuffles(4, 3, true) {
            let mut all: Vec<usize> = u.flatten();
            for b in &u.blocks {
                assert!(b.windows(2).all(|w| w[0] < w[1]));
            }
            all.sort_unstable();
            assert_eq!(all, vec![0, 1, 2, 3]);
        }
    }

    #[test]
    fn block_unshuffle_counts_are_multinomial() {
        assert_eq!(block_unshuffles(&[1, 1]).len(), 2);
        assert_eq!(block_unshuffles(&[2, 1]).len(), 3);
        assert_eq!(block_unshuffles(&[4]).len(), 1);
        // multinomial(4; 2,2) = 6, multinomial(5; 2,2,1) = 30
        assert_eq!(block_unshuffles(&[2, 2]).len(), 6);
        assert_eq!(block_unshuffles(&[2, 2, 1]).len(), 30);
    }

    #[test]
    fn insertion_sequences_small_cases() {
        assert_eq!(brace_insertion_sequences(1, 0), vec![vec![0, 0]]);
        assert_eq!(
            brace_insertion_sequences(1, 1),
            vec![vec![0, 0], vec![0, 1], vec![1, 1]]
        );
        assert_eq!(brace_insertion_sequences(2, 0), vec![vec![0, 0, 0, 0]]);
    }

    #[test]
    fn sorting_permutation_sorts() {
        let keys = vec![3usize, 1, 2, 1];
        let sigma = Permutation::sorting(&keys);
        let sorted: Vec<usize> = sigma.images().iter().map(|&t| keys[t]).collect();
        assert_eq!(sorted, vec![1, 1, 2, 3]);
    }
}
