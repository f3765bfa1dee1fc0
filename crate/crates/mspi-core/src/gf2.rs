//! Dense bit-packed linear algebra over GF(2).
//!
//! Parity-check matrices in this crate have a few hundred columns at most, so
//! a dense `u64`-packed representation with XOR row operations is both the
//! simplest and the fastest option: rank, row reduction and rowspace
//! membership all run in microseconds at these sizes. Row reduction is fully
//! deterministic (first nonzero pivot, scanned in ascending row order) so
//! pivot lists are stable across runs and platforms.

use std::fmt;

const WORD_BITS: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

// ---------------------------------------------------------------------------
// BitVector
// ---------------------------------------------------------------------------

/// A binary vector packed into `u64` words. Bit `i` lives in word `i / 64`,
/// bit position `i % 64`. Unused trailing bits are always zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    /// All-zero vector of the given length.
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Build from a 0/1 slice.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                v.set(i, true);
            }
        }
        v
    }

    /// Build from the list of set positions.
    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in support {
            v.set(i, true);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Bit `i`.
    ///
    /// Panics if `i >= len`.
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range (len {})", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    /// Set bit `i` to `value`.
    ///
    /// Panics if `i >= len`.
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range (len {})", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range (len {})", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    /// GF(2) addition: `self ^= other`.
    ///
    /// Panics if lengths differ.
    pub fn xor_assign(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "length mismatch in xor_assign");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// `self ^ other` as a new vector.
    pub fn xor(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn clear(&mut self) {
        self.words.fill(0);
    }

    /// Indices of set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector(len={}, ones=[", self.len)?;
        for (k, i) in self.ones().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "])")
    }
}

// ---------------------------------------------------------------------------
// BitMatrix
// ---------------------------------------------------------------------------

/// A binary matrix with bit-packed rows.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_row = words_for(cols);
        Self {
            rows,
            cols,
            words_per_row,
            words: vec![0; rows * words_per_row],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Build from a row-major 0/1 slice of length `rows * cols`.
    pub fn from_dense(rows: usize, cols: usize, data: &[u8]) -> Self {
        assert_eq!(data.len(), rows * cols, "dense data length mismatch");
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if data[r * cols + c] != 0 {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        (self.row_words(r)[c / WORD_BITS] >> (c % WORD_BITS)) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        let w = r * self.words_per_row + c / WORD_BITS;
        let mask = 1u64 << (c % WORD_BITS);
        if value {
            self.words[w] |= mask;
        } else {
            self.words[w] &= !mask;
        }
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.words[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    /// Row `r` as an owned vector.
    pub fn row(&self, r: usize) -> BitVector {
        assert!(r < self.rows, "row {r} out of range");
        BitVector {
            len: self.cols,
            words: self.row_words(r).to_vec(),
        }
    }

    /// XOR row `src` into row `dst`.
    fn xor_rows(&mut self, dst: usize, src: usize) {
        let (d, s) = (dst * self.words_per_row, src * self.words_per_row);
        for k in 0..self.words_per_row {
            let v = self.words[s + k];
            self.words[d + k] ^= v;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.words_per_row {
            self.words.swap(a * self.words_per_row + k, b * self.words_per_row + k);
        }
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn col_weight(&self, c: usize) -> usize {
        (0..self.rows).filter(|&r| self.get(r, c)).count()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    /// Horizontal concatenation `[self | right]`.
    ///
    /// Panics if row counts differ.
    pub fn hstack(&self, right: &BitMatrix) -> BitMatrix {
        assert_eq!(self.rows, right.rows, "hstack row count mismatch");
        let mut out = BitMatrix::zeros(self.rows, self.cols + right.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    out.set(r, c, true);
                }
            }
            for c in 0..right.cols {
                if right.get(r, c) {
                    out.set(r, self.cols + c, true);
                }
            }
        }
        out
    }

    /// GF(2) matrix product `self * rhs`.
    ///
    /// Panics if inner dimensions disagree.
    pub fn multiply(&self, rhs: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, rhs.rows, "multiply dimension mismatch");
        let mut out = BitMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            // out_row = XOR of rhs rows selected by the set bits of self row r.
            for k in 0..self.cols {
                if self.get(r, k) {
                    let (d, s) = (r * out.words_per_row, k * rhs.words_per_row);
                    for w in 0..out.words_per_row {
                        out.words[d + w] ^= rhs.words[s + w];
                    }
                }
            }
        }
        out
    }

    /// `v * self^T` over GF(2): component `i` is the parity of `<row_i, v>`.
    ///
    /// This is the syndrome map when `self` is a parity-check matrix.
    /// Panics if `v.len() != cols`.
    pub fn mul_vec_t(&self, v: &BitVector) -> BitVector {
        let mut out = BitVector::zeros(self.rows);
        self.mul_vec_t_into(v, &mut out);
        out
    }

    /// In-place variant of [`mul_vec_t`](Self::mul_vec_t) for hot loops.
    pub fn mul_vec_t_into(&self, v: &BitVector, out: &mut BitVector) {
        assert_eq!(v.len(), self.cols, "vector length {} != cols {}", v.len(), self.cols);
        assert_eq!(out.len(), self.rows, "output length {} != rows {}", out.len(), self.rows);
        out.clear();
        for r in 0..self.rows {
            let parity = self
                .row_words(r)
                .iter()
                .zip(v.words())
                .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones());
            if parity & 1 == 1 {
                out.set(r, true);
            }
        }
    }

    /// Reduced row-echelon form and the (strictly increasing) pivot columns.
    ///
    /// Pivoting is deterministic: columns are scanned left to right and the
    /// first row with a nonzero entry at or below the current pivot row wins.
    pub fn row_reduce(&self) -> (BitMatrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = rref_in_place(&mut m);
        (m, pivots)
    }

    /// GF(2) rank via Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        rref_in_place(&mut m).len()
    }

    /// True iff `v` is a GF(2) linear combination of the rows of `self`.
    ///
    /// Panics if `v.len() != cols`.
    pub fn in_rowspace(&self, v: &BitVector) -> bool {
        self.row_space().contains(v)
    }

    /// Precomputed rowspace for repeated membership queries.
    pub fn row_space(&self) -> RowSpace {
        let (rref, pivots) = self.row_reduce();
        let rows = (0..pivots.len()).map(|r| rref.row(r)).collect();
        RowSpace {
            cols: self.cols,
            rows,
            pivots,
        }
    }

    /// A basis of the right nullspace `{ x : self * x = 0 }`.
    pub fn nullspace(&self) -> Vec<BitVector> {
        let (rref, pivots) = self.row_reduce();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for (free, &pivot_col) in is_pivot.iter().enumerate() {
            if pivot_col {
                continue;
            }
            let mut x = BitVector::zeros(self.cols);
            x.set(free, true);
            for (r, &p) in pivots.iter().enumerate() {
                if rref.get(r, free) {
                    x.set(p, true);
                }
            }
            basis.push(x);
        }
        basis
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix({}x{})", self.rows, self.cols)?;
        for r in 0..self.rows {
            for c in 0..self.cols {
                write!(f, "{}", u8::from(self.get(r, c)))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// In-place RREF; returns pivot columns in ascending order.
fn rref_in_place(m: &mut BitMatrix) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut pivot_row = 0;
    for col in 0..m.cols {
        if pivot_row == m.rows {
            break;
        }
        let hit = (pivot_row..m.rows).find(|&r| m.get(r, col));
        let Some(r) = hit else { continue };
        m.swap_rows(pivot_row, r);
        for other in 0..m.rows {
            if other != pivot_row && m.get(other, col) {
                m.xor_rows(other, pivot_row);
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    pivots
}

/// Rowspace of a matrix in reduced form, for fast membership tests.
///
/// Built once per matrix; `contains` then costs one sweep over the stored
/// pivot rows, which is what makes per-trial degeneracy classification cheap.
#[derive(Clone)]
pub struct RowSpace {
    cols: usize,
    rows: Vec<BitVector>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_len(&self) -> usize {
        self.cols
    }

    /// True iff `v` reduces to zero against the stored basis.
    ///
    /// Panics if `v.len()` differs from the matrix column count.
    pub fn contains(&self, v: &BitVector) -> bool {
        assert_eq!(v.len(), self.cols, "vector length {} != cols {}", v.len(), self.cols);
        let mut work = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if work.get(p) {
                work.xor_assign(row);
            }
        }
        work.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_matrix(rng: &mut StdRng, rows: usize, cols: usize) -> BitMatrix {
        let mut m = BitMatrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if rng.gen_bool(0.5) {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    #[test]
    fn rank_identity() {
        assert_eq!(BitMatrix::identity(3).rank(), 3);
    }

    #[test]
    fn rank_zero_matrix() {
        assert_eq!(BitMatrix::zeros(4, 7).rank(), 0);
    }

    #[test]
    fn row_reduce_identity() {
        let (rref, pivots) = BitMatrix::identity(3).row_reduce();
        assert_eq!(rref, BitMatrix::identity(3));
        assert_eq!(pivots, vec![0, 1, 2]);
    }

    #[test]
    fn row_reduce_dependent_rows() {
        let m = BitMatrix::from_dense(2, 2, &[1, 1, 1, 1]);
        let (rref, pivots) = m.row_reduce();
        assert_eq!(rref, BitMatrix::from_dense(2, 2, &[1, 1, 0, 0]));
        assert_eq!(pivots, vec![0]);
    }

    #[test]
    fn rank_equals_nonzero_rref_rows_random() {
        let mut rng = StdRng::seed_from_u64(11);
        for &(rows, cols) in &[(10usize, 20usize), (60, 31), (200, 400)] {
            let m = random_matrix(&mut rng, rows, cols);
            let (rref, pivots) = m.row_reduce();
            let nonzero = (0..rows).filter(|&r| rref.row_weight(r) > 0).count();
            assert_eq!(m.rank(), nonzero);
            assert_eq!(m.rank(), pivots.len());
            assert!(pivots.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn in_rowspace_zero_and_rows() {
        let mut rng = StdRng::seed_from_u64(3);
        let m = random_matrix(&mut rng, 12, 25);
        assert!(m.in_rowspace(&BitVector::zeros(25)));
        for r in 0..m.rows() {
            assert!(m.in_rowspace(&m.row(r)));
        }
    }

    #[test]
    #[should_panic(expected = "length")]
    fn in_rowspace_dimension_mismatch_panics() {
        let m = BitMatrix::identity(3);
        m.in_rowspace(&BitVector::zeros(4));
    }

    #[test]
    fn mul_vec_t_identity() {
        let m = BitMatrix::identity(3);
        let v = BitVector::from_bits(&[1, 0, 1]);
        assert_eq!(m.mul_vec_t(&v), v);
    }

    #[test]
    fn mul_vec_t_zero_error_gives_zero_syndrome() {
        let mut rng = StdRng::seed_from_u64(7);
        let m = random_matrix(&mut rng, 9, 18);
        assert!(m.mul_vec_t(&BitVector::zeros(18)).is_zero());
    }

    #[test]
    fn mul_vec_t_weight_one_extracts_column() {
        let mut rng = StdRng::seed_from_u64(19);
        let m = random_matrix(&mut rng, 14, 30);
        for j in 0..m.cols() {
            let e = BitVector::from_support(30, &[j]);
            let s = m.mul_vec_t(&e);
            for i in 0..m.rows() {
                assert_eq!(s.get(i), m.get(i, j));
            }
        }
    }

    #[test]
    fn nullspace_vectors_are_annihilated() {
        let mut rng = StdRng::seed_from_u64(23);
        let m = random_matrix(&mut rng, 20, 35);
        let basis = m.nullspace();
        assert_eq!(basis.len(), 35 - m.rank());
        for x in &basis {
            assert!(m.mul_vec_t(x).is_zero());
        }
    }

    #[test]
    fn multiply_against_identity() {
        let mut rng = StdRng::seed_from_u64(5);
        let m = random_matrix(&mut rng, 8, 8);
        assert_eq!(m.multiply(&BitMatrix::identity(8)), m);
        assert_eq!(BitMatrix::identity(8).multiply(&m), m);
    }

    #[test]
    fn transpose_involution() {
        let mut rng = StdRng::seed_from_u64(29);
        let m = random_matrix(&mut rng, 6, 13);
        assert_eq!(m.transpose().transpose(), m);
    }

    proptest! {
        #[test]
        fn prop_row_sums_stay_in_rowspace(seed in 0u64..500, rows in 2usize..12, cols in 2usize..24) {
            let mut rng = StdRng::seed_from_u64(seed);
            let m = random_matrix(&mut rng, rows, cols);
            let i = rng.gen_range(0..rows);
            let j = rng.gen_range(0..rows);
            let sum = m.row(i).xor(&m.row(j));
            prop_assert!(m.in_rowspace(&sum));
        }

        #[test]
        fn prop_mul_vec_t_is_linear(seed in 0u64..500) {
            let mut rng = StdRng::seed_from_u64(seed);
            let m = random_matrix(&mut rng, 10, 21);
            let u = random_matrix(&mut rng, 1, 21).row(0);
            let v = random_matrix(&mut rng, 1, 21).row(0);
            let lhs = m.mul_vec_t(&u.xor(&v));
            let rhs = m.mul_vec_t(&u).xor(&m.mul_vec_t(&v));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn prop_rank_matches_rref(seed in 0u64..200, rows in 1usize..40, cols in 1usize..60) {
            let mut rng = StdRng::seed_from_u64(seed);
            let m = random_matrix(&mut rng, rows, cols);
            let (rref, pivots) = m.row_reduce();
            let nonzero = (0..rows).filter(|&r| rref.row_weight(r) > 0).count();
            prop_assert_eq!(m.rank(), nonzero);
            prop_assert_eq!(m.rank(), pivots.len());
        }
    }
}
