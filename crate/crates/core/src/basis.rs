//! Orthonormal exterior basis of `Λ^k(R^n)`.
//!
//! A basis element `e_{i_1} ∧ … ∧ e_{i_k}` is labelled by the strictly
//! increasing index tuple `(i_1, …, i_k)`, stored as a bitmask. Index sets of
//! a fixed cardinality are ordered lexicographically; that order fixes the
//! array layout of every [`DoubleForm`](crate::DoubleForm) and the order of
//! serialized entries.

use std::fmt;
use std::sync::OnceLock;

use serde::{Serialize, Serializer};

use crate::error::{FormError, Result};

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 16;

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1usize;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// A strictly increasing set of basis indices in `[0, n)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct IndexSet {
    n: u8,
    bits: u32,
}

impl IndexSet {
    pub fn new(n: usize, indices: &[usize]) -> Result<Self> {
        check_dim(n)?;
        let mut bits = 0u32;
        let mut prev: Option<usize> = None;
        for &i in indices {
            if i >= n {
                return Err(FormError::InvalidIndexSet {
                    n,
                    indices: indices.to_vec(),
                    reason: "index out of range",
                });
            }
            if prev.is_some_and(|p| p >= i) {
                return Err(FormError::InvalidIndexSet {
                    n,
                    indices: indices.to_vec(),
                    reason: "indices must be strictly increasing",
                });
            }
            prev = Some(i);
            bits |= 1 << i;
        }
        Ok(Self { n: n as u8, bits })
    }

    /// Builds an index set from a bitmask; bits at or above `n` must be clear.
    pub fn from_bits(n: usize, bits: u32) -> Self {
        debug_assert!(n <= MAX_DIM);
        debug_assert!(n == 32 || bits >> n == 0);
        Self { n: n as u8, bits }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_bits(n, 0)
    }

    /// The full set `{0, …, n-1}`, the label of the volume element.
    pub fn full(n: usize) -> Self {
        Self::from_bits(n, full_mask(n))
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, i: usize) -> bool {
        i < 32 && self.bits & (1 << i) != 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        let bits = self.bits;
        (0..self.n()).filter(move |&i| bits & (1 << i) != 0)
    }

    pub fn indices(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Lexicographic rank among all subsets of `[0, n)` with the same cardinality.
    pub fn rank(&self) -> usize {
        let n = self.n();
        let k = self.len();
        let mut rank = 0;
        let mut next = 0;
        for (pos, c) in self.iter().enumerate() {
            for j in next..c {
                rank += binomial(n - 1 - j, k - 1 - pos);
            }
            next = c + 1;
        }
        rank
    }

    /// Inverse of [`rank`](Self::rank); `None` if `rank >= C(n, k)`.
    pub fn unrank(n: usize, k: usize, rank: usize) -> Option<Self> {
        if n > MAX_DIM || rank >= binomial(n, k) {
            return None;
        }
        let mut rest = rank;
        let mut bits = 0u32;
        let mut j = 0;
        for pos in 0..k {
            loop {
                let block = binomial(n - 1 - j, k - 1 - pos);
                if rest < block {
                    break;
                }
                rest -= block;
                j += 1;
            }
            bits |= 1 << j;
            j += 1;
        }
        Some(Self::from_bits(n, bits))
    }

    /// `e_I ∧ e_K = sign · e_{I∪K}`. Returns `None` when the sets overlap.
    pub fn wedge(&self, other: &IndexSet) -> Option<(i32, IndexSet)> {
        debug_assert_eq!(self.n, other.n);
        if self.bits & other.bits != 0 {
            return None;
        }
        Some((
            wedge_sign_bits(self.bits, other.bits),
            IndexSet {
                n: self.n,
                bits: self.bits | other.bits,
            },
        ))
    }

    /// Sign of `e_I ∧ e_K` relative to `e_{I∪K}`, zero on overlap.
    pub fn wedge_sign(&self, other: &IndexSet) -> i32 {
        self.wedge(other).map_or(0, |(s, _)| s)
    }

    /// Returns `(s, I^c)` with `e_I ∧ e_{I^c} = s · vol`, so that `*e_I = s · e_{I^c}`.
    pub fn complement(&self) -> (i32, IndexSet) {
        let comp = full_mask(self.n()) & !self.bits;
        (
            wedge_sign_bits(self.bits, comp),
            IndexSet {
                n: self.n,
                bits: comp,
            },
        )
    }

    pub fn complement_sign(&self) -> i32 {
        self.complement().0
    }

    /// Embeds the set into a larger ambient dimension, shifting every index by `offset`.
    pub fn shifted(&self, n: usize, offset: usize) -> IndexSet {
        IndexSet::from_bits(n, self.bits << offset)
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.iter()).finish()
    }
}

impl Serialize for IndexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

pub(crate) fn check_dim(n: usize) -> Result<()> {
    if n > MAX_DIM {
        return Err(FormError::DimensionOutOfRange { n, max: MAX_DIM });
    }
    Ok(())
}

fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// Parity of the shuffle sorting the concatenation `(I, K)`, for disjoint `I, K`.
pub(crate) fn wedge_sign_bits(left: u32, right: u32) -> i32 {
    let mut inversions = 0u32;
    let mut rest = right;
    while rest != 0 {
        let k = rest.trailing_zeros();
        rest &= rest - 1;
        inversions += (left >> k >> 1).count_ones();
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Sign of moving `e_j` past the elements of `set` smaller than `j`.
pub(crate) fn insertion_sign(j: usize, set: u32) -> i32 {
    if (set & ((1u32 << j) - 1)).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Lex-ordered subset lists and a bitmask → rank lookup for one dimension.
pub(crate) struct BasisTable {
    subsets: Vec<Vec<u32>>,
    rank: Vec<u32>,
}

impl BasisTable {
    fn build(n: usize) -> Self {
        let mut subsets = vec![Vec::new(); n + 1];
        let mut rank = vec![0u32; 1 << n];
        for (k, list) in subsets.iter_mut().enumerate() {
            push_lex(n, k, 0, 0, list);
            for (r, &bits) in list.iter().enumerate() {
                rank[bits as usize] = r as u32;
            }
        }
        Self { subsets, rank }
    }

    /// Bitmasks of all k-subsets in lex order; empty when `k > n`.
    pub(crate) fn subsets(&self, k: usize) -> &[u32] {
        self.subsets.get(k).map_or(&[], Vec::as_slice)
    }

    pub(crate) fn rank(&self, bits: u32) -> usize {
        self.rank[bits as usize] as usize
    }
}

fn push_lex(n: usize, k: usize, start: usize, acc: u32, out: &mut Vec<u32>) {
    if k == 0 {
        out.push(acc);
        return;
    }
    if start + k > n {
        return;
    }
    for i in start..=n - k {
        push_lex(n, k - 1, i + 1, acc | (1 << i), out);
    }
}

pub(crate) fn table(n: usize) -> &'static BasisTable {
    static TABLES: [OnceLock<BasisTable>; MAX_DIM + 1] = [const { OnceLock::new() }; MAX_DIM + 1];
    TABLES[n].get_or_init(|| BasisTable::build(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn set(n: usize, idx: &[usize]) -> IndexSet {
        IndexSet::new(n, idx).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(set(4, &[0, 1]).rank(), 0);
        assert_eq!(set(4, &[2, 3]).rank(), 5);
    }

    #[test]
    fn rank_matches_enumeration() {
        // brute force: position in itertools' lexicographic combination order
        let position = (0..5usize)
            .combinations(3)
            .position(|c| c == vec![0, 2, 4])
            .unwrap();
        assert_eq!(position, 4);
        assert_eq!(set(5, &[0, 2, 4]).rank(), position);

        for n in 0..=8 {
            for k in 0..=n {
                for (r, combo) in (0..n).combinations(k).enumerate() {
                    let s = set(n, &combo);
                    assert_eq!(s.rank(), r);
                    assert_eq!(IndexSet::unrank(n, k, r), Some(s));
                    assert_eq!(table(n).rank(s.bits()), r);
                    assert_eq!(table(n).subsets(k)[r], s.bits());
                }
                assert_eq!(IndexSet::unrank(n, k, binomial(n, k)), None);
            }
        }
    }

    #[test]
    fn wedge_examples() {
        assert_eq!(set(2, &[0]).wedge(&set(2, &[1])), Some((1, set(2, &[0, 1]))));
        assert_eq!(set(2, &[1]).wedge(&set(2, &[0])), Some((-1, set(2, &[0, 1]))));
        assert_eq!(set(2, &[0, 1]).wedge_sign(&set(2, &[0])), 0);
        assert_eq!(set(3, &[0, 1]).wedge(&set(3, &[0])), None);
    }

    #[test]
    fn complement_examples() {
        assert_eq!(set(2, &[0]).complement(), (1, set(2, &[1])));
        assert_eq!(set(2, &[1]).complement(), (-1, set(2, &[0])));
        assert_eq!(set(4, &[0, 1]).complement(), (1, set(4, &[2, 3])));
        assert_eq!(IndexSet::empty(3).complement(), (1, IndexSet::full(3)));
        assert_eq!(IndexSet::full(3).complement(), (1, IndexSet::empty(3)));
    }

    #[test]
    fn rejects_bad_sets() {
        assert!(IndexSet::new(3, &[0, 3]).is_err());
        assert!(IndexSet::new(3, &[1, 1]).is_err());
        assert!(IndexSet::new(3, &[2, 1]).is_err());
        assert!(IndexSet::new(17, &[]).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(16, 8), 12870);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(0, 0), 1);
    }

    // permutation parity by counting inversions of the concatenation
    fn concat_sign(i: &IndexSet, k: &IndexSet) -> i32 {
        let seq: Vec<usize> = i.iter().chain(k.iter()).collect();
        let inv = (0..seq.len())
            .flat_map(|a| (a + 1..seq.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| seq[a] > seq[b])
            .count();
        if inv % 2 == 0 {
            1
        } else {
            -1
        }
    }

    proptest::proptest! {
        #[test]
        fn graded_commutativity(n in 1usize..=8, a in 0u32..256, b in 0u32..256) {
            let mask = (1u32 << n) - 1;
            let (a, b) = (a & mask, b & mask & !a);
            let (i, k) = (IndexSet::from_bits(n, a), IndexSet::from_bits(n, b));
            let sign = if (i.len() * k.len()) % 2 == 0 { 1 } else { -1 };
            proptest::prop_assert_eq!(i.wedge_sign(&k), sign * k.wedge_sign(&i));
            proptest::prop_assert_eq!(i.wedge_sign(&k), concat_sign(&i, &k));
        }

        #[test]
        fn double_complement_sign(n in 0usize..=8, a in 0u32..256) {
            let i = IndexSet::from_bits(n, a & ((1u32 << n) - 1));
            let (s, c) = i.complement();
            let (t, back) = c.complement();
            proptest::prop_assert_eq!(back, i);
            let k = i.len();
            let expect = if (k * (n - k)) % 2 == 0 { 1 } else { -1 };
            proptest::prop_assert_eq!(s * t, expect);
        }
    }
}
