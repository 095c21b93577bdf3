//! Dense linear algebra over the two-element field.
//!
//! Matrices are stored row-major with each row packed into a run of `u64`
//! words, so adding one row to another is a word-wide XOR. Matrices with zero
//! rows or zero columns are ordinary values and have rank 0.

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[inline]
fn words_for(cols: usize) -> usize {
    cols.div_ceil(WORD)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BitMatrix {
            rows,
            cols,
            stride,
            bits: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn ones(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| true)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Builds a matrix from rows of 0/1 entries. All rows must have equal length.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, &b) in r.iter().enumerate() {
                if b & 1 == 1 {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.bits[r * self.stride + c / WORD] >> (c % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.bits[r * self.stride + c / WORD];
        let mask = 1u64 << (c % WORD);
        if v {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn toggle(&mut self, r: usize, c: usize) {
        self.bits[r * self.stride + c / WORD] ^= 1u64 << (c % WORD);
    }

    #[inline]
    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.bits[r * self.stride..(r + 1) * self.stride]
    }

    /// Row `r` as an integer bitmask. Only valid for matrices with at most 64 columns.
    #[inline]
    pub fn row_mask(&self, r: usize) -> u64 {
        assert!(self.cols <= WORD);
        if self.stride == 0 {
            0
        } else {
            self.bits[r * self.stride]
        }
    }

    /// `row[dst] ^= row[src]`.
    #[inline]
    pub fn add_row(&mut self, dst: usize, src: usize) {
        if dst == src {
            self.bits[dst * self.stride..(dst + 1) * self.stride].fill(0);
            return;
        }
        let s = self.stride;
        let (a, b) = if dst < src {
            let (lo, hi) = self.bits.split_at_mut(src * s);
            (&mut lo[dst * s..(dst + 1) * s], &hi[..s])
        } else {
            let (lo, hi) = self.bits.split_at_mut(dst * s);
            (&mut hi[..s], &lo[src * s..(src + 1) * s])
        };
        for (x, y) in a.iter_mut().zip(b) {
            *x ^= *y;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.stride {
            self.bits.swap(a * self.stride + k, b * self.stride + k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn row_is_zero(&self, r: usize) -> bool {
        self.row_words(r).iter().all(|&w| w == 0)
    }

    /// In-place Gauss-Jordan elimination. Pivots are taken in the leftmost
    /// available column, using the lowest row index holding a one. Returns the
    /// pivot columns in increasing order; pivot `k` sits in row `k`.
    pub fn reduce_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..self.cols {
            if next == self.rows {
                break;
            }
            let Some(p) = (next..self.rows).find(|&r| self.get(r, c)) else {
                continue;
            };
            self.swap_rows(next, p);
            for r in 0..self.rows {
                if r != next && self.get(r, c) {
                    self.add_row(r, next);
                }
            }
            pivots.push(c);
            next += 1;
        }
        pivots
    }

    /// Rank over the two-element field.
    pub fn rank(&self) -> usize {
        // forward elimination only; cheaper than the full reduction
        let mut m = self.clone();
        let mut next = 0;
        for c in 0..m.cols {
            if next == m.rows {
                break;
            }
            let Some(p) = (next..m.rows).find(|&r| m.get(r, c)) else {
                continue;
            };
            m.swap_rows(next, p);
            for r in next + 1..m.rows {
                if m.get(r, c) {
                    m.add_row(r, next);
                }
            }
            next += 1;
        }
        next
    }

    /// Reduced row-echelon form and pivot columns.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.reduce_in_place();
        (m, pivots)
    }

    pub fn pivot_cols(&self) -> Vec<usize> {
        self.rref().1
    }

    /// Factorises `self = U * W` with `U` of full column rank and `W` of full
    /// row rank, both of inner dimension `rank(self)`. `U` consists of the pivot
    /// columns of `self`; `W` is the nonzero part of the reduced echelon form.
    pub fn rank_factorize(&self) -> (BitMatrix, BitMatrix) {
        let (r, pivots) = self.rref();
        let w = r.select_rows(&(0..pivots.len()).collect::<Vec<_>>());
        let u = self.select_cols(&pivots);
        (u, w)
    }

    /// A matrix `V` with `V * self = I`.
    pub fn left_inverse(&self) -> Result<BitMatrix> {
        let k = self.cols;
        // solve self^T * X = I, then V = X^T
        let t = self.transpose();
        let sols = t.solve_many(&BitMatrix::identity(k))?;
        let rank = self.rank();
        match sols {
            Some(x) => Ok(x.transpose()),
            None => Err(Error::FullColumnRankRequired { rank, cols: k }),
        }
    }

    /// Solves `self * X = B` for `X` (one column of `X` per column of `B`).
    /// Free variables are set to zero. Returns `None` if some column is
    /// inconsistent.
    pub fn solve_many(&self, b: &BitMatrix) -> Result<Option<BitMatrix>> {
        let cols = self.solve_each(b)?;
        if cols.iter().any(Option::is_none) {
            return Ok(None);
        }
        let mut x = BitMatrix::zeros(self.cols, b.cols);
        for (j, col) in cols.into_iter().enumerate() {
            for i in col.unwrap() {
                x.set(i, j, true);
            }
        }
        Ok(Some(x))
    }

    /// Like [`solve_many`](Self::solve_many) but reports solvability per
    /// right-hand side. Each solution is the list of variables set to one.
    pub fn solve_each(&self, b: &BitMatrix) -> Result<Vec<Option<Vec<usize>>>> {
        if b.rows != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "solve: {}x{} system with {} right-hand rows",
                self.rows, self.cols, b.rows
            )));
        }
        let n = self.cols;
        let mut aug = self.hstack(b)?;
        // eliminate only over the coefficient columns
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..n {
            if next == aug.rows {
                break;
            }
            let Some(p) = (next..aug.rows).find(|&r| aug.get(r, c)) else {
                continue;
            };
            aug.swap_rows(next, p);
            for r in 0..aug.rows {
                if r != next && aug.get(r, c) {
                    aug.add_row(r, next);
                }
            }
            pivots.push(c);
            next += 1;
        }
        let rank = pivots.len();
        let mut out = Vec::with_capacity(b.cols);
        for j in 0..b.cols {
            let col = n + j;
            if (rank..aug.rows).any(|r| aug.get(r, col)) {
                out.push(None);
                continue;
            }
            let sol = pivots
                .iter()
                .enumerate()
                .filter(|&(r, _)| aug.get(r, col))
                .map(|(_, &c)| c)
                .collect();
            out.push(Some(sol));
        }
        Ok(out)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.ones_in_row(r) {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Column indices holding a one in row `r`.
    pub fn ones_in_row(&self, r: usize) -> impl Iterator<Item = usize> + '_ {
        self.row_words(r).iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * WORD + b)
                }
            })
        })
    }

    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        let s = out.stride;
        for r in 0..self.rows {
            for k in self.ones_in_row(r) {
                let src = other.row_words(k);
                let dst = &mut out.bits[r * s..(r + 1) * s];
                for (d, x) in dst.iter_mut().zip(src) {
                    *d ^= *x;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "add {}x{} to {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = self.clone();
        for (a, b) in out.bits.iter_mut().zip(&other.bits) {
            *a ^= *b;
        }
        Ok(out)
    }

    pub fn select_rows(&self, idx: &[usize]) -> BitMatrix {
        let mut out = BitMatrix::zeros(idx.len(), self.cols);
        for (i, &r) in idx.iter().enumerate() {
            let s = self.stride;
            out.bits[i * s..(i + 1) * s].copy_from_slice(self.row_words(r));
        }
        out
    }

    pub fn select_cols(&self, idx: &[usize]) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.rows, idx.len());
        for r in 0..self.rows {
            for (j, &c) in idx.iter().enumerate() {
                if self.get(r, c) {
                    out.set(r, j, true);
                }
            }
        }
        out
    }

    /// Submatrix on the given rows and columns.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> BitMatrix {
        let mut out = BitMatrix::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                if self.get(r, c) {
                    out.set(i, j, true);
                }
            }
        }
        out
    }

    pub fn vstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "vstack {}x{} over {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&other.bits);
        Ok(BitMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            stride: self.stride,
            bits,
        })
    }

    pub fn hstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "hstack {}x{} beside {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = BitMatrix::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in self.ones_in_row(r) {
                out.set(r, c, true);
            }
            for c in other.ones_in_row(r) {
                out.set(r, self.cols + c, true);
            }
        }
        Ok(out)
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let line: String = (0..self.cols)
                .map(|c| if self.get(r, c) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(rng: &mut impl Rng, r: usize, c: usize) -> BitMatrix {
        BitMatrix::from_fn(r, c, |_, _| rng.gen_bool(0.5))
    }

    /// Rank by enumerating the row span: rank = log2 |span|.
    fn span_rank(m: &BitMatrix) -> usize {
        assert!(m.rows() <= 16 && m.cols() <= 64);
        let rows: Vec<u64> = (0..m.rows()).map(|r| m.row_mask(r)).collect();
        let mut span = std::collections::HashSet::new();
        for sel in 0u32..(1 << rows.len()) {
            let mut v = 0u64;
            for (i, &r) in rows.iter().enumerate() {
                if sel >> i & 1 == 1 {
                    v ^= r;
                }
            }
            span.insert(v);
        }
        span.len().trailing_zeros() as usize
    }

    #[test]
    fn rank_small_cases() {
        assert_eq!(BitMatrix::identity(3).rank(), 3);
        assert_eq!(BitMatrix::ones(2, 2).rank(), 1);
        assert_eq!(BitMatrix::zeros(0, 5).rank(), 0);
        assert_eq!(BitMatrix::zeros(4, 0).rank(), 0);
    }

    #[test]
    fn rank_matches_span_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let m = random(&mut rng, 8, 8);
            assert_eq!(m.rank(), span_rank(&m));
        }
    }

    #[test]
    fn rref_examples() {
        let (r, p) = BitMatrix::zeros(3, 4).rref();
        assert!(r.is_zero());
        assert!(p.is_empty());
        let (r, p) = BitMatrix::identity(4).rref();
        assert_eq!(r, BitMatrix::identity(4));
        assert_eq!(p, vec![0, 1, 2, 3]);
        let m = BitMatrix::from_rows(&[[1, 1, 0], [1, 1, 1]]);
        let (r, p) = m.rref();
        assert_eq!(p, vec![0, 2]);
        assert_eq!(r, BitMatrix::from_rows(&[[1, 1, 0], [0, 0, 1]]));
        assert_eq!(p.len(), span_rank(&m));
    }

    #[test]
    fn rref_is_idempotent_and_keeps_row_space() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let m = random(&mut rng, 6, 10);
            let (r, p) = m.rref();
            let (r2, p2) = r.rref();
            assert_eq!(r, r2);
            assert_eq!(p, p2);
            // same row space: stacking does not raise the rank
            assert_eq!(m.vstack(&r).unwrap().rank(), m.rank());
            assert_eq!(p.len(), m.rank());
        }
    }

    #[test]
    fn rank_factorize_cases() {
        let (u, w) = BitMatrix::identity(4).rank_factorize();
        assert_eq!(u, BitMatrix::identity(4));
        assert_eq!(w, BitMatrix::identity(4));
        let z = BitMatrix::zeros(3, 5);
        let (u, w) = z.rank_factorize();
        assert_eq!((u.rows(), u.cols()), (3, 0));
        assert_eq!((w.rows(), w.cols()), (0, 5));
        assert_eq!(u.mul(&w).unwrap(), z);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let m = random(&mut rng, 6, 9);
            let (u, w) = m.rank_factorize();
            assert_eq!(u.mul(&w).unwrap(), m);
            assert_eq!(u.rank(), m.rank());
            assert_eq!(w.rank(), m.rank());
            assert_eq!(u.cols(), m.rank());
        }
    }

    #[test]
    fn left_inverse_cases() {
        assert_eq!(
            BitMatrix::identity(3).left_inverse().unwrap(),
            BitMatrix::identity(3)
        );
        let u = BitMatrix::from_rows(&[[1], [1]]);
        let v = u.left_inverse().unwrap();
        assert_eq!(v.mul(&u).unwrap(), BitMatrix::identity(1));
        let bad = BitMatrix::from_rows(&[[1, 1], [1, 1]]);
        assert_eq!(
            bad.left_inverse(),
            Err(Error::FullColumnRankRequired { rank: 1, cols: 2 })
        );
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut done = 0;
        while done < 50 {
            let u = random(&mut rng, 7, 4);
            if u.rank() < 4 {
                continue;
            }
            let v = u.left_inverse().unwrap();
            let p = v.mul(&u).unwrap();
            for i in 0..4 {
                for j in 0..4 {
                    assert_eq!(p.get(i, j), i == j);
                }
            }
            done += 1;
        }
    }

    #[test]
    fn arithmetic() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let a = random(&mut rng, 5, 5);
            let b = random(&mut rng, 5, 5);
            let c = random(&mut rng, 5, 5);
            let left = a.mul(&b.mul(&c).unwrap()).unwrap();
            let right = a.mul(&b).unwrap().mul(&c).unwrap();
            assert_eq!(left, right);
            assert_eq!(BitMatrix::identity(5).mul(&a).unwrap(), a);
            assert_eq!(a.transpose().transpose(), a);
            assert!(a.add(&a).unwrap().is_zero());
        }
        assert!(matches!(
            BitMatrix::zeros(2, 3).mul(&BitMatrix::zeros(2, 3)),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(BitMatrix::zeros(2, 3).add(&BitMatrix::zeros(3, 2)).is_err());
        assert!(BitMatrix::zeros(2, 3)
            .vstack(&BitMatrix::zeros(2, 2))
            .is_err());
        assert!(BitMatrix::zeros(2, 3)
            .hstack(&BitMatrix::zeros(3, 3))
            .is_err());
    }

    #[test]
    fn wide_rows_cross_word_boundaries() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let m = random(&mut rng, 70, 130);
        assert_eq!(m.rank(), m.transpose().rank());
        let (u, w) = m.rank_factorize();
        assert_eq!(u.mul(&w).unwrap(), m);
    }

    #[test]
    fn solve_each_reports_inconsistency() {
        let a = BitMatrix::from_rows(&[[1, 1], [1, 1]]);
        let b = BitMatrix::from_rows(&[[1, 1], [1, 0]]);
        let sols = a.solve_each(&b).unwrap();
        assert_eq!(sols[0], Some(vec![0]));
        assert_eq!(sols[1], None);
    }
}
