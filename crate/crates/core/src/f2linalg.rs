//! Dense linear algebra over the two-element field.
//!
//! Vectors are packed 64 bits per word; elimination XORs whole words. All
//! routines pivot deterministically (first nonzero column, lowest row), so
//! bases and preimages are reproducible across runs.

use std::fmt;

use thiserror::Error;

const WORD: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum F2Error {
    #[error("dimension mismatch: expected length {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Vector {
    len: usize,
    words: Vec<u64>,
}

impl F2Vector {
    pub fn zeros(len: usize) -> Self {
        Self { len, words: vec![0; words_for(len)] }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
    }

    /// Unit vector with a single one at `index`.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Vector of length `len` with ones at the given positions.
    pub fn from_support(len: usize, support: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in support {
            v.set(i, true);
        }
        v
    }

    /// Low `len` bits of `mask`, bit `i` of the mask becoming entry `i`.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        assert!(len <= WORD, "from_mask supports at most 64 entries");
        let mut v = Self::zeros(len);
        if len > 0 {
            let keep = if len == WORD { u64::MAX } else { (1u64 << len) - 1 };
            v.words[0] = mask & keep;
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        let bit = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= bit;
        } else {
            self.words[i / WORD] &= !bit;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Positions holding a one, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.iter_ones().collect()
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + t)
            })
        })
    }

    /// Lowest position holding a one.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(wi, &w)| wi * WORD + w.trailing_zeros() as usize)
    }

    pub fn xor_assign(&mut self, other: &F2Vector) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &F2Vector) -> F2Vector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Inner product mod 2.
    pub fn dot(&self, other: &F2Vector) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        let ones: u32 = self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum();
        ones % 2 == 1
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    fn check_len(&self, expected: usize) -> Result<(), F2Error> {
        if self.len == expected {
            Ok(())
        } else {
            Err(F2Error::DimensionMismatch { expected, found: self.len })
        }
    }
}

impl fmt::Debug for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F2Vector({self})")
    }
}

impl fmt::Display for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<F2Vector>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![F2Vector::zeros(cols); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<F2Vector>) -> Result<Self, F2Error> {
        for r in &rows {
            r.check_len(cols)?;
        }
        Ok(Self { rows: rows.len(), cols, data: rows })
    }

    /// Parses rows of `0`/`1` characters; handy in tests.
    pub fn from_strs(rows: &[&str]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged rows");
                F2Vector::from_bools(&r.bytes().map(|b| b == b'1').collect::<Vec<_>>())
            })
            .collect();
        Self { rows: rows.len(), cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &F2Vector {
        &self.data[i]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.data[r].set(c, value);
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        self.data[r].flip(c);
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F2Vector::is_zero)
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut t = F2Matrix::zeros(self.cols, self.rows);
        for (r, row) in self.data.iter().enumerate() {
            for c in row.iter_ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Column `c` as a vector of length `rows`.
    pub fn column(&self, c: usize) -> F2Vector {
        let mut v = F2Vector::zeros(self.rows);
        for r in 0..self.rows {
            if self.get(r, c) {
                v.set(r, true);
            }
        }
        v
    }

    pub fn mul_vec(&self, x: &F2Vector) -> Result<F2Vector, F2Error> {
        x.check_len(self.cols)?;
        let mut out = F2Vector::zeros(self.rows);
        for (r, row) in self.data.iter().enumerate() {
            if row.dot(x) {
                out.set(r, true);
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &F2Matrix) -> Result<F2Matrix, F2Error> {
        if self.cols != other.rows {
            return Err(F2Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = F2Matrix::zeros(self.rows, other.cols);
        for (r, row) in self.data.iter().enumerate() {
            for k in row.iter_ones() {
                out.data[r].xor_assign(&other.data[k]);
            }
        }
        Ok(out)
    }

    /// Rank over GF(2).
    pub fn rank(&self) -> usize {
        self.row_echelon().pivots.len()
    }

    /// Reduced row echelon form with pivot columns, ascending.
    pub fn row_echelon(&self) -> RowEchelon {
        let mut rows = self.data.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..self.cols {
            if next == rows.len() {
                break;
            }
            let Some(p) = (next..rows.len()).find(|&r| rows[r].get(c)) else {
                continue;
            };
            rows.swap(next, p);
            let pivot_row = rows[next].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != next && row.get(c) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(c);
            next += 1;
        }
        rows.truncate(next);
        RowEchelon { cols: self.cols, rows, pivots }
    }

    /// Basis of `{x : Mx = 0}`; one vector per non-pivot column.
    pub fn kernel_basis(&self) -> Vec<F2Vector> {
        let ech = self.row_echelon();
        let mut is_pivot = vec![false; self.cols];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut x = F2Vector::unit(self.cols, free);
                for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
                    if row.get(free) {
                        x.set(p, true);
                    }
                }
                x
            })
            .collect()
    }

    /// Some `x` with `Mx = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &F2Vector) -> Result<Option<F2Vector>, F2Error> {
        b.check_len(self.rows)?;
        Ok(ColumnSpace::new(self).preimage(b))
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{}", self.rows, self.cols)?;
        for row in &self.data {
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct RowEchelon {
    pub cols: usize,
    pub rows: Vec<F2Vector>,
    pub pivots: Vec<usize>,
}

/// Echelon basis of the column space of a matrix, remembering how each basis
/// vector was assembled from the original columns. Built once, it answers
/// many membership and preimage queries against the same matrix.
#[derive(Clone, Debug)]
pub struct ColumnSpace {
    ambient: usize,
    source: usize,
    // (pivot position, reduced vector, combination of source columns)
    basis: Vec<(usize, F2Vector, F2Vector)>,
}

impl ColumnSpace {
    pub fn new(m: &F2Matrix) -> Self {
        let t = m.transpose();
        Self::from_vectors(m.rows(), (0..m.cols()).map(|c| t.row(c).clone()))
    }

    /// Column space of the given vectors, each of length `ambient`.
    pub fn from_vectors(ambient: usize, vectors: impl IntoIterator<Item = F2Vector>) -> Self {
        let vectors: Vec<F2Vector> = vectors.into_iter().collect();
        let source = vectors.len();
        let mut space = Self { ambient, source, basis: Vec::new() };
        for (j, v) in vectors.into_iter().enumerate() {
            assert_eq!(v.len(), ambient, "vector length mismatch");
            space.insert(v, F2Vector::unit(source, j));
        }
        space
    }

    fn reduce(&self, v: &mut F2Vector, combo: &mut F2Vector) {
        for (p, bv, bc) in &self.basis {
            if v.get(*p) {
                v.xor_assign(bv);
                combo.xor_assign(bc);
            }
        }
    }

    fn insert(&mut self, mut v: F2Vector, mut combo: F2Vector) -> bool {
        self.reduce(&mut v, &mut combo);
        let Some(p) = v.first_one() else {
            return false;
        };
        // keep existing basis vectors reduced at the new pivot
        for (_, bv, bc) in self.basis.iter_mut() {
            if bv.get(p) {
                bv.xor_assign(&v);
                bc.xor_assign(&combo);
            }
        }
        self.basis.push((p, v, combo));
        true
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_len(&self) -> usize {
        self.ambient
    }

    pub fn contains(&self, b: &F2Vector) -> bool {
        assert_eq!(b.len(), self.ambient, "vector length mismatch");
        let mut v = b.clone();
        for (p, bv, _) in &self.basis {
            if v.get(*p) {
                v.xor_assign(bv);
            }
        }
        v.is_zero()
    }

    /// Coefficients `x` over the source vectors with `sum x_j v_j = b`.
    pub fn preimage(&self, b: &F2Vector) -> Option<F2Vector> {
        assert_eq!(b.len(), self.ambient, "vector length mismatch");
        let mut v = b.clone();
        let mut combo = F2Vector::zeros(self.source);
        self.reduce(&mut v, &mut combo);
        v.is_zero().then_some(combo)
    }

    /// Adds `v` to the spanning set; returns whether the rank grew.
    pub fn extend(&mut self, v: F2Vector) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        // new source index; widen every stored combination
        self.source += 1;
        for (_, _, c) in self.basis.iter_mut() {
            let mut wider = F2Vector::zeros(self.source);
            for i in c.iter_ones() {
                wider.set(i, true);
            }
            *c = wider;
        }
        let combo = F2Vector::unit(self.source, self.source - 1);
        self.insert(v, combo)
    }
}

/// Whether `v` lies in the span of `vectors`.
pub fn in_span(vectors: &[F2Vector], v: &F2Vector) -> Result<bool, F2Error> {
    for u in vectors {
        u.check_len(v.len())?;
    }
    Ok(ColumnSpace::from_vectors(v.len(), vectors.iter().cloned()).contains(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn circle_delta0() -> F2Matrix {
        // edges {0,1},{1,2},{0,2} against vertices 0,1,2
        F2Matrix::from_strs(&["110", "011", "101"])
    }

    fn brute_solve(m: &F2Matrix, b: &F2Vector) -> Option<F2Vector> {
        (0..1u64 << m.cols())
            .map(|mask| F2Vector::from_mask(m.cols(), mask))
            .find(|x| &m.mul_vec(x).unwrap() == b)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(F2Matrix::identity(3).rank(), 3);
        assert_eq!(F2Matrix::zeros(4, 5).rank(), 0);
        assert_eq!(circle_delta0().rank(), 2);
    }

    #[test]
    fn kernel_examples() {
        assert!(F2Matrix::identity(4).kernel_basis().is_empty());
        assert_eq!(F2Matrix::zeros(2, 3).kernel_basis().len(), 3);
        let k = circle_delta0().kernel_basis();
        assert_eq!(k, vec![F2Vector::ones(3)]);
    }

    #[test]
    fn solve_examples() {
        let b = F2Vector::from_mask(5, 0b10110);
        assert_eq!(F2Matrix::identity(5).solve(&b).unwrap(), Some(b.clone()));
        assert_eq!(F2Matrix::zeros(5, 5).solve(&b).unwrap(), None);
        let single_edge = F2Vector::unit(3, 0);
        let m = circle_delta0();
        assert_eq!(m.solve(&single_edge).unwrap(), None);
        assert_eq!(brute_solve(&m, &single_edge), None);
        assert!(matches!(
            m.solve(&F2Vector::zeros(4)),
            Err(F2Error::DimensionMismatch { expected: 3, found: 4 })
        ));
    }

    #[test]
    fn span_examples() {
        assert!(in_span(&[], &F2Vector::zeros(4)).unwrap());
        assert!(!in_span(&[], &F2Vector::unit(4, 2)).unwrap());
        let a = F2Matrix::from_strs(&["1100", "0110", "1010"]);
        assert!(in_span(&[a.row(0).clone(), a.row(1).clone()], a.row(2)).unwrap());
        assert!(in_span(&[F2Vector::zeros(3)], &F2Vector::zeros(4)).is_err());
    }

    #[test]
    fn extend_tracks_combinations() {
        let mut cs = ColumnSpace::from_vectors(3, [F2Vector::from_mask(3, 0b011)]);
        assert!(cs.extend(F2Vector::from_mask(3, 0b110)));
        assert!(!cs.extend(F2Vector::from_mask(3, 0b101)));
        let x = cs.preimage(&F2Vector::from_mask(3, 0b101)).unwrap();
        assert_eq!(x.len(), 3);
        assert!(x.get(0) && x.get(1) && !x.get(2));
    }

    fn arb_matrix(max: usize) -> impl Strategy<Value = F2Matrix> {
        (1..=max, 1..=max).prop_flat_map(|(r, c)| {
            prop::collection::vec(prop::collection::vec(any::<bool>(), c), r).prop_map(move |rows| {
                F2Matrix::from_rows(c, rows.iter().map(|b| F2Vector::from_bools(b)).collect()).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn rank_equals_transpose_rank(m in arb_matrix(12)) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn kernel_is_annihilated(m in arb_matrix(12)) {
            let k = m.kernel_basis();
            prop_assert_eq!(k.len() + m.rank(), m.cols());
            for x in &k {
                prop_assert!(m.mul_vec(x).unwrap().is_zero());
            }
            prop_assert_eq!(F2Matrix::from_rows(m.cols(), k.clone()).unwrap().rank(), k.len());
        }

        #[test]
        fn solve_agrees_with_exhaustive_search(m in arb_matrix(10), mask in any::<u64>()) {
            let b = F2Vector::from_mask(m.rows(), mask);
            match m.solve(&b).unwrap() {
                Some(x) => prop_assert_eq!(m.mul_vec(&x).unwrap(), b),
                None => prop_assert!(brute_solve(&m, &b).is_none()),
            }
        }
    }
}
