//! Dense linear algebra over F₂ with bits packed into 64-bit words.
//!
//! Bit `i` of a [`BitVec`] lives in word `i / 64` at bit position `i % 64`.
//! Unused bits of the last word are always zero, so word-level equality,
//! popcount and parity need no masking. Matrices are row-major lists of
//! equal-length rows, and every inner loop (inner product, row addition,
//! elimination) runs a word at a time.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{check_len, Error, Result};

const WORD_BITS: usize = 64;

fn word_count(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

fn tail_mask(len: usize) -> u64 {
    match len % WORD_BITS {
        0 => !0,
        r => (1u64 << r) - 1,
    }
}

#[inline]
fn dot_words(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).fold(0u64, |acc, (x, y)| acc ^ (x & y)).count_ones() & 1 == 1
}

#[inline]
fn xor_words(acc: &mut [u64], v: &[u64]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a ^= b;
    }
}

/// A vector over F₂.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; word_count(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self {
            len,
            words: vec![!0; word_count(len)],
        };
        v.clear_tail();
        v
    }

    /// The standard basis vector with bit `i` set.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        Self::from_fn(bits.len(), |i| bits[i])
    }

    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            if f(i) {
                v.words[i / WORD_BITS] |= 1 << (i % WORD_BITS);
            }
        }
        v
    }

    /// Builds a vector from raw words; bits beyond `len` are discarded.
    pub fn from_words(len: usize, mut words: Vec<u64>) -> Result<Self> {
        check_len(word_count(len), words.len())?;
        if let Some(last) = words.last_mut() {
            *last &= tail_mask(len);
        }
        Ok(Self { len, words })
    }

    /// Uniformly random vector.
    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut v = Self {
            len,
            words: (0..word_count(len)).map(|_| rng.random()).collect(),
        };
        v.clear_tail();
        v
    }

    fn clear_tail(&mut self) {
        if let Some(last) = self.words.last_mut() {
            *last &= tail_mask(self.len);
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn to_bits(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    /// # Panics
    /// Panics if `i >= len`.
    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    /// # Panics
    /// Panics if `i >= len`.
    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    /// # Panics
    /// Panics if `i >= len`.
    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    /// Hamming weight.
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn parity(&self) -> bool {
        self.words.iter().fold(0u64, |acc, w| acc ^ w).count_ones() & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .position(|&w| w != 0)
            .map(|k| k * WORD_BITS + self.words[k].trailing_zeros() as usize)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * WORD_BITS + bit)
            })
        })
    }

    /// Inner product over F₂: parity of the bitwise AND.
    pub fn dot(&self, other: &BitVec) -> Result<bool> {
        check_len(self.len, other.len)?;
        Ok(dot_words(&self.words, &other.words))
    }

    /// `self ← self ⊕ other`.
    pub fn add_into(&mut self, other: &BitVec) -> Result<()> {
        check_len(self.len, other.len)?;
        xor_words(&mut self.words, &other.words);
        Ok(())
    }

    /// `self ⊕ other` as a new vector.
    pub fn sum(&self, other: &BitVec) -> Result<BitVec> {
        let mut out = self.clone();
        out.add_into(other)?;
        Ok(out)
    }

    pub fn and(&self, other: &BitVec) -> Result<BitVec> {
        check_len(self.len, other.len)?;
        Ok(BitVec {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        })
    }

    /// Packs bits MSB-first into bytes: bit `i` goes to byte `i / 8`, bit
    /// position `7 - i % 8`. The final byte is zero-padded.
    pub fn to_bytes_msb(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.len.div_ceil(8)];
        for i in self.iter_ones() {
            out[i / 8] |= 0x80 >> (i % 8);
        }
        out
    }

    /// Inverse of [`BitVec::to_bytes_msb`]. Rejects a byte count that does
    /// not match `len` and nonzero padding bits.
    pub fn from_bytes_msb(bytes: &[u8], len: usize) -> Result<Self> {
        if bytes.len() != len.div_ceil(8) {
            return Err(Error::Format(format!(
                "expected {} bytes for {len} bits, found {}",
                len.div_ceil(8),
                bytes.len()
            )));
        }
        let bit = |i: usize| bytes[i / 8] & (0x80 >> (i % 8)) != 0;
        if (len..bytes.len() * 8).any(bit) {
            return Err(Error::Format("nonzero padding bits".into()));
        }
        Ok(Self::from_fn(len, bit))
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

impl FromStr for BitVec {
    type Err = Error;

    /// Parses a string of `0`/`1` characters, bit 0 first.
    fn from_str(s: &str) -> Result<Self> {
        let mut v = BitVec::zeros(s.len());
        for (i, c) in s.bytes().enumerate() {
            match c {
                b'0' => {}
                b'1' => v.set(i, true),
                other => {
                    return Err(Error::Format(format!(
                        "invalid character {:?} at column {}",
                        other as char,
                        i + 1
                    )))
                }
            }
        }
        Ok(v)
    }
}

/// A row-major matrix over F₂.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVec>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            rows: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            cols: n,
            rows: (0..n).map(|i| BitVec::unit(n, i)).collect(),
        }
    }

    /// Builds a matrix from rows, all of which must have length `cols`.
    pub fn from_rows(rows: Vec<BitVec>, cols: usize) -> Result<Self> {
        for r in &rows {
            check_len(cols, r.len())?;
        }
        Ok(Self { cols, rows })
    }

    /// Matrix from `0`/`1` strings, one per row.
    pub fn from_strs(rows: &[&str]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows.iter().map(|r| r.parse()).collect::<Result<Vec<BitVec>>>()?;
        Self::from_rows(rows, cols)
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(columns: &[BitVec], rows: usize) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            check_len(rows, c.len())?;
            for i in c.iter_ones() {
                m.rows[i].set(j, true);
            }
        }
        Ok(m)
    }

    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        Self {
            cols,
            rows: (0..rows).map(|_| BitVec::random(cols, rng)).collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<BitVec> {
        self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value);
    }

    pub fn push_row(&mut self, row: BitVec) -> Result<()> {
        check_len(self.cols, row.len())?;
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, j: usize) -> BitVec {
        BitVec::from_fn(self.rows.len(), |i| self.rows[i].get(j))
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = Self::zeros(self.cols, self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.iter_ones() {
                t.rows[j].set(i, true);
            }
        }
        t
    }

    /// `A·x`: bit `i` of the result is `row_i · x`.
    pub fn mat_vec(&self, x: &BitVec) -> Result<BitVec> {
        check_len(self.cols, x.len())?;
        Ok(BitVec::from_fn(self.rows.len(), |i| dot_words(&self.rows[i].words, &x.words)))
    }

    /// Row vector times matrix, `xᵀ·A`: the XOR of the rows selected by `x`.
    pub fn vec_mat(&self, x: &BitVec) -> Result<BitVec> {
        check_len(self.rows.len(), x.len())?;
        let mut out = BitVec::zeros(self.cols);
        for i in x.iter_ones() {
            xor_words(&mut out.words, &self.rows[i].words);
        }
        Ok(out)
    }

    pub fn mul(&self, rhs: &BitMatrix) -> Result<BitMatrix> {
        check_len(self.cols, rhs.nrows())?;
        let rows = self
            .rows
            .iter()
            .map(|r| rhs.vec_mat(r))
            .collect::<Result<Vec<_>>>()?;
        BitMatrix::from_rows(rows, rhs.cols)
    }

    /// Rows `p` with `p · x = 1`, in their original order.
    pub fn rows_not_orthogonal_to(&self, x: &BitVec) -> Result<BitMatrix> {
        check_len(self.cols, x.len())?;
        Ok(BitMatrix {
            cols: self.cols,
            rows: self
                .rows
                .iter()
                .filter(|r| dot_words(&r.words, &x.words))
                .cloned()
                .collect(),
        })
    }

    /// XOR of all rows.
    pub fn row_sum(&self) -> BitVec {
        let mut acc = BitVec::zeros(self.cols);
        for r in &self.rows {
            xor_words(&mut acc.words, &r.words);
        }
        acc
    }

    pub fn rank(&self) -> usize {
        let mut work = self.rows.clone();
        eliminate(&mut work, self.cols, None, false).len()
    }

    /// Solves `A·x = b`.
    pub fn solve_affine(&self, b: &BitVec) -> Result<SolveOutcome> {
        check_len(self.rows.len(), b.len())?;
        let mut work = self.rows.clone();
        let mut rhs = b.clone();
        let pivots = eliminate(&mut work, self.cols, Some(&mut rhs), true);
        let rank = pivots.len();
        if (rank..work.len()).any(|i| rhs.get(i)) {
            return Ok(SolveOutcome::Infeasible { rank });
        }
        let mut particular = BitVec::zeros(self.cols);
        for (r, &c) in pivots.iter().enumerate() {
            particular.set(c, rhs.get(r));
        }
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let kernel_basis = (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = BitVec::unit(self.cols, f);
                for (r, &c) in pivots.iter().enumerate() {
                    if work[r].get(f) {
                        v.set(c, true);
                    }
                }
                v
            })
            .collect();
        Ok(SolveOutcome::Solved(AffineSolution {
            particular,
            kernel_basis,
            rank,
        }))
    }

    /// Inverse of a square matrix by Gauss-Jordan elimination.
    pub fn invert(&self) -> Result<BitMatrix> {
        let n = self.cols;
        check_len(n, self.rows.len())?;
        let mut a = self.rows.clone();
        let mut inv = BitMatrix::identity(n).rows;
        for c in 0..n {
            let (w, mask) = (c / WORD_BITS, 1u64 << (c % WORD_BITS));
            let p = (c..n).find(|&i| a[i].words[w] & mask != 0).ok_or(Error::Singular)?;
            a.swap(c, p);
            inv.swap(c, p);
            let pa = a[c].words.clone();
            let pi = inv[c].words.clone();
            for i in (0..n).filter(|&i| i != c) {
                if a[i].words[w] & mask != 0 {
                    xor_words(&mut a[i].words[w..], &pa[w..]);
                    xor_words(&mut inv[i].words, &pi);
                }
            }
        }
        Ok(BitMatrix { cols: n, rows: inv })
    }

    /// Random invertible `n × n` matrix, built as unit-lower-triangular ×
    /// unit-upper-triangular × permutation.
    ///
    /// # Panics
    /// Panics if `n == 0`.
    pub fn random_invertible<R: Rng + ?Sized>(n: usize, rng: &mut R) -> BitMatrix {
        assert!(n >= 1, "random_invertible requires n >= 1");
        let triangular = |rng: &mut R, lower: bool| {
            let rows = (0..n)
                .map(|i| {
                    let mut r = BitVec::random(n, rng);
                    for j in 0..n {
                        if (lower && j > i) || (!lower && j < i) {
                            r.set(j, false);
                        }
                    }
                    r.set(i, true);
                    r
                })
                .collect();
            BitMatrix { cols: n, rows }
        };
        let lower = triangular(rng, true);
        let upper = triangular(rng, false);
        let mut perm: Vec<usize> = (0..n).collect();
        rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), rng);
        let perm = BitMatrix {
            cols: n,
            rows: perm.iter().map(|&j| BitVec::unit(n, j)).collect(),
        };
        lower
            .mul(&upper)
            .and_then(|lu| lu.mul(&perm))
            .expect("square factors of equal size")
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows.len(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r}")?;
        }
        write!(f, "]")
    }
}

/// Row reduction in place. Returns the pivot column of each of the first
/// `rank` rows. With `full`, entries above pivots are cleared as well
/// (reduced row echelon form). `rhs`, when given, receives the same row
/// operations.
fn eliminate(rows: &mut [BitVec], cols: usize, mut rhs: Option<&mut BitVec>, full: bool) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let (w, mask) = (c / WORD_BITS, 1u64 << (c % WORD_BITS));
        let Some(p) = (r..rows.len()).find(|&i| rows[i].words[w] & mask != 0) else {
            continue;
        };
        rows.swap(r, p);
        if let Some(b) = rhs.as_deref_mut() {
            let (br, bp) = (b.get(r), b.get(p));
            b.set(r, bp);
            b.set(p, br);
        }
        let pivot: Vec<u64> = rows[r].words[w..].to_vec();
        let pivot_rhs = rhs.as_deref().is_some_and(|b| b.get(r));
        let start = if full { 0 } else { r + 1 };
        for (i, row) in rows.iter_mut().enumerate().skip(start) {
            if i != r && row.words[w] & mask != 0 {
                xor_words(&mut row.words[w..], &pivot);
                if pivot_rhs {
                    if let Some(b) = rhs.as_deref_mut() {
                        b.flip(i);
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Result of solving `A·x = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Solved(AffineSolution),
    /// `b` is not reachable; `rank` is the rank of `A`.
    Infeasible { rank: usize },
}

/// Solution set `particular ⊕ span(kernel_basis)` of a consistent system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: BitVec,
    pub kernel_basis: Vec<BitVec>,
    pub rank: usize,
}

/// Order in which coset members are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolutionOrder {
    /// Reflected Gray code over kernel subsets: one XOR per step.
    #[default]
    Gray,
    /// Subsets of the kernel basis by increasing size, lexicographic within
    /// a size; the particular solution comes first.
    ByWeight,
}

/// Output of [`enumerate_solutions`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub solutions: Vec<BitVec>,
    /// Set when the coset holds more than `cap` vectors.
    pub truncated: bool,
}

/// Default bound on the number of enumerated coset members.
pub const DEFAULT_CANDIDATE_CAP: usize = 1 << 16;

impl AffineSolution {
    /// log₂ of the number of solutions, `n - rank(A)`.
    pub fn solution_count_log2(&self) -> usize {
        self.kernel_basis.len()
    }

    /// Whether the coset has more than `cap` members.
    pub fn exceeds(&self, cap: usize) -> bool {
        let dim = self.kernel_basis.len();
        dim >= usize::BITS as usize || (1usize << dim) > cap
    }

    /// Lazily walks the whole coset in the given order.
    pub fn iter(&self, order: SolutionOrder) -> CosetIter<'_> {
        CosetIter {
            sol: self,
            order,
            current: self.particular.clone(),
            step: 0,
            subset: Vec::new(),
            done: false,
        }
    }
}

/// Enumerates `sol`'s coset in Gray-code order, stopping after `cap` vectors.
pub fn enumerate_solutions(sol: &AffineSolution, cap: usize) -> Enumeration {
    enumerate_solutions_ordered(sol, cap, SolutionOrder::Gray)
}

pub fn enumerate_solutions_ordered(sol: &AffineSolution, cap: usize, order: SolutionOrder) -> Enumeration {
    assert!(cap >= 1, "cap must be at least 1");
    Enumeration {
        solutions: sol.iter(order).take(cap).collect(),
        truncated: sol.exceeds(cap),
    }
}

/// Iterator over an affine coset. See [`AffineSolution::iter`].
pub struct CosetIter<'a> {
    sol: &'a AffineSolution,
    order: SolutionOrder,
    current: BitVec,
    step: u64,
    // ByWeight: indices of the current subset
    subset: Vec<usize>,
    done: bool,
}

impl CosetIter<'_> {
    fn advance_by_weight(&mut self) -> bool {
        let k = self.sol.kernel_basis.len();
        let w = self.subset.len();
        // next combination of the same size
        let mut i = w;
        while i > 0 {
            i -= 1;
            if self.subset[i] < k - w + i {
                self.subset[i] += 1;
                for j in i + 1..w {
                    self.subset[j] = self.subset[j - 1] + 1;
                }
                return true;
            }
        }
        if w == k {
            return false;
        }
        self.subset = (0..=w).collect();
        true
    }
}

impl Iterator for CosetIter<'_> {
    type Item = BitVec;

    fn next(&mut self) -> Option<BitVec> {
        if self.done {
            return None;
        }
        let k = self.sol.kernel_basis.len();
        let out = match self.order {
            SolutionOrder::Gray => {
                let out = self.current.clone();
                self.step += 1;
                if k < 64 && self.step >= 1u64 << k {
                    self.done = true;
                } else {
                    let flip = self.step.trailing_zeros() as usize;
                    xor_words(&mut self.current.words, &self.sol.kernel_basis[flip].words);
                }
                out
            }
            SolutionOrder::ByWeight => {
                let mut out = self.sol.particular.clone();
                for &i in &self.subset {
                    xor_words(&mut out.words, &self.sol.kernel_basis[i].words);
                }
                if !self.advance_by_weight() {
                    self.done = true;
                }
                out
            }
        };
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn bv(s: &str) -> BitVec {
        s.parse().unwrap()
    }

    #[test]
    fn dot_examples() {
        assert!(!bv("0000").dot(&bv("1111")).unwrap());
        assert!(!bv("1101").dot(&bv("1011")).unwrap());
        assert!(!bv("1101").dot(&bv("1001")).unwrap());
        assert!(bv("1101").dot(&bv("0100")).unwrap());
        assert_eq!(
            bv("1101").dot(&bv("110")),
            Err(Error::Dimension { expected: 4, found: 3 })
        );
    }

    #[test]
    fn add_examples() {
        let mut a = bv("1010");
        a.add_into(&bv("0110")).unwrap();
        assert_eq!(a, bv("1100"));
        let v = bv("1011");
        assert!(v.sum(&v).unwrap().is_zero());
        assert_eq!(v.sum(&BitVec::zeros(4)).unwrap(), v);
        assert!(a.add_into(&bv("1")).is_err());
    }

    #[test]
    fn tail_bits_stay_clear() {
        let v = BitVec::ones(70);
        assert_eq!(v.words()[1], (1 << 6) - 1);
        assert_eq!(v.count_ones(), 70);
        let mut rng = seeded(3);
        for len in [1, 63, 64, 65, 127, 129] {
            let r = BitVec::random(len, &mut rng);
            assert_eq!(r.words().last().unwrap() & !tail_mask(len), 0);
        }
        let w = BitVec::from_words(3, vec![!0]).unwrap();
        assert_eq!(w, bv("111"));
    }

    #[test]
    fn mat_vec_examples() {
        let x = bv("1011");
        assert_eq!(BitMatrix::identity(4).mat_vec(&x).unwrap(), x);
        let a = BitMatrix::from_strs(&["11", "01"]).unwrap();
        assert_eq!(a.mat_vec(&bv("11")).unwrap(), bv("01"));
        assert!(a.mat_vec(&bv("1")).is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BitMatrix::identity(9).rank(), 9);
        let a = BitMatrix::from_strs(&["1100", "0110", "1100"]).unwrap();
        assert_eq!(a.rank(), 2);
        assert_eq!(BitMatrix::zeros(3, 5).rank(), 0);
    }

    #[test]
    fn solve_examples() {
        let id = BitMatrix::identity(3);
        match id.solve_affine(&bv("101")).unwrap() {
            SolveOutcome::Solved(s) => {
                assert_eq!(s.particular, bv("101"));
                assert!(s.kernel_basis.is_empty());
            }
            other => panic!("{other:?}"),
        }

        let a = BitMatrix::from_strs(&["11"]).unwrap();
        let SolveOutcome::Solved(s) = a.solve_affine(&bv("1")).unwrap() else {
            panic!("expected solution")
        };
        assert_eq!(s.solution_count_log2(), 1);
        let mut all = enumerate_solutions(&s, 16).solutions;
        all.sort();
        assert_eq!(all.len(), 2);
        assert!(all.contains(&bv("01")) && all.contains(&bv("10")));

        let a = BitMatrix::from_strs(&["10", "10"]).unwrap();
        assert_eq!(
            a.solve_affine(&bv("10")).unwrap(),
            SolveOutcome::Infeasible { rank: 1 }
        );
    }

    #[test]
    fn enumerate_caps() {
        let sol = |dim: usize| AffineSolution {
            particular: BitVec::zeros(32),
            kernel_basis: (0..dim).map(|i| BitVec::unit(32, i)).collect(),
            rank: 32 - dim,
        };
        let e = enumerate_solutions(&sol(0), 4);
        assert_eq!(e.solutions, vec![BitVec::zeros(32)]);
        assert!(!e.truncated);

        let e = enumerate_solutions(&sol(2), 4);
        assert_eq!(e.solutions.len(), 4);
        assert!(!e.truncated);

        let e = enumerate_solutions(&sol(20), DEFAULT_CANDIDATE_CAP);
        assert_eq!(e.solutions.len(), 1 << 16);
        assert!(e.truncated);
        let mut distinct = e.solutions.clone();
        distinct.sort();
        distinct.dedup();
        assert_eq!(distinct.len(), 1 << 16);
    }

    #[test]
    fn by_weight_order() {
        let sol = AffineSolution {
            particular: BitVec::zeros(4),
            kernel_basis: (0..3).map(|i| BitVec::unit(4, i)).collect(),
            rank: 1,
        };
        let weights: Vec<usize> = sol.iter(SolutionOrder::ByWeight).map(|v| v.count_ones()).collect();
        assert_eq!(weights, vec![0, 1, 1, 1, 2, 2, 2, 3]);
        let mut all: Vec<_> = sol.iter(SolutionOrder::ByWeight).collect();
        all.sort();
        all.dedup();
        assert_eq!(all.len(), 8);
    }

    #[test]
    fn invert_examples() {
        let id = BitMatrix::identity(5);
        assert_eq!(id.invert().unwrap(), id);
        let a = BitMatrix::from_strs(&["11", "01"]).unwrap();
        let inv = a.invert().unwrap();
        assert_eq!(inv, a);
        assert_eq!(a.mul(&inv).unwrap(), BitMatrix::identity(2));
        assert_eq!(BitMatrix::zeros(3, 3).invert(), Err(Error::Singular));
        assert!(BitMatrix::zeros(2, 3).invert().is_err());
    }

    #[test]
    fn random_invertible_is_invertible() {
        let mut rng = seeded(11);
        assert_eq!(BitMatrix::random_invertible(1, &mut rng), BitMatrix::identity(1));
        for n in [2, 5, 63, 64, 65, 130] {
            let t = BitMatrix::random_invertible(n, &mut rng);
            assert_eq!(t.rank(), n);
            let inv = t.invert().unwrap();
            assert_eq!(inv.mul(&t).unwrap(), BitMatrix::identity(n));
            assert_eq!(t.mul(&inv).unwrap(), BitMatrix::identity(n));
        }
    }

    #[test]
    fn bytes_msb_first() {
        assert_eq!(bv("10000000").to_bytes_msb(), vec![0x80]);
        assert_eq!(bv("0000000011").to_bytes_msb(), vec![0x00, 0xc0]);
        assert_eq!(BitVec::from_bytes_msb(&[0xc0], 2).unwrap(), bv("11"));
        assert!(BitVec::from_bytes_msb(&[0xe0], 2).is_err());
        assert!(BitVec::from_bytes_msb(&[0, 0], 2).is_err());
    }

    #[test]
    fn vec_mat_and_transpose_agree() {
        let mut rng = seeded(5);
        let a = BitMatrix::random(13, 70, &mut rng);
        let x = BitVec::random(13, &mut rng);
        assert_eq!(a.vec_mat(&x).unwrap(), a.transpose().mat_vec(&x).unwrap());
        assert_eq!(a.transpose().transpose(), a);
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(BitMatrix::from_rows(vec![bv("101"), bv("10")], 3).is_err());
        assert!(BitMatrix::from_strs(&["10", "1x"]).is_err());
    }
}
