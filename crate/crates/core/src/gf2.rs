//! Linear algebra over GF(2).
//!
//! Vectors and matrix rows are packed into machine words: bit `i` of a word is
//! coordinate `i` (0-based). Dimensions are capped at [`MAX_DIM`] for algebra
//! and at [`MAX_ENUM_DIM`] for exhaustive enumeration of `GL_n(GF(2))`.

use std::fmt;
use std::str::FromStr;

use crate::error::{check_dim, check_size, Error, Result};

/// Largest dimension accepted by the algebra routines.
pub const MAX_DIM: usize = 24;
/// Largest `n` for which `GL_n(GF(2))` is enumerated element by element.
pub const MAX_ENUM_DIM: usize = 5;

const MAX_COLS: usize = 32;

#[inline]
pub(crate) fn parity(word: u32) -> bool {
    word.count_ones() & 1 == 1
}

#[inline]
pub(crate) fn low_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// A vector in `GF(2)^n`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf2Vector {
    dim: u8,
    bits: u32,
}

impl Gf2Vector {
    pub fn new(dim: usize, bits: u32) -> Result<Self> {
        check_dim(dim, 1, MAX_DIM)?;
        if bits & !low_mask(dim) != 0 {
            return Err(Error::InvalidParameters(format!(
                "bits {bits:#b} exceed dimension {dim}"
            )));
        }
        Ok(Self { dim: dim as u8, bits })
    }

    pub(crate) fn from_raw(dim: usize, bits: u32) -> Self {
        debug_assert!(dim <= MAX_DIM && bits & !low_mask(dim) == 0);
        Self { dim: dim as u8, bits }
    }

    pub fn zero(dim: usize) -> Result<Self> {
        Self::new(dim, 0)
    }

    /// The standard basis vector `e_i` (0-based).
    pub fn unit(dim: usize, i: usize) -> Result<Self> {
        if i >= dim {
            return Err(Error::InvalidParameters(format!(
                "index {i} out of range for dimension {dim}"
            )));
        }
        Self::new(dim, 1 << i)
    }

    pub fn from_bools(bits: &[bool]) -> Result<Self> {
        let word = bits
            .iter()
            .enumerate()
            .fold(0u32, |acc, (i, &b)| acc | (u32::from(b) << i));
        Self::new(bits.len(), word)
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.dim(), "coordinate {i} out of range");
        self.bits >> i & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Standard dot product mod 2.
    pub fn dot(&self, other: &Self) -> bool {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        parity(self.bits & other.bits)
    }

    /// All `2^dim` vectors in increasing integer order.
    pub fn all(dim: usize) -> Result<impl Iterator<Item = Gf2Vector>> {
        check_dim(dim, 1, MAX_DIM)?;
        Ok((0..=low_mask(dim)).map(move |bits| Gf2Vector::from_raw(dim, bits)))
    }
}

impl std::ops::Add for Gf2Vector {
    type Output = Gf2Vector;

    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        Self {
            dim: self.dim,
            bits: self.bits ^ rhs.bits,
        }
    }
}

impl fmt::Display for Gf2Vector {
    /// Coordinate 1 first, e.g. `e_1` in dimension 3 prints as `100`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim() {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Vector({self})")
    }
}

impl FromStr for Gf2Vector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .enumerate()
            .map(|(i, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse {
                    row: 1,
                    col: i + 1,
                    message: format!("expected '0' or '1', found {other:?}"),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        Gf2Vector::from_bools(&bits)
    }
}

/// A dense `rows x cols` matrix over GF(2), one word per row.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Gf2Matrix {
    pub fn zero(rows: usize, cols: usize) -> Result<Self> {
        check_dim(cols, 0, MAX_COLS)?;
        check_dim(rows, 0, MAX_COLS)?;
        Ok(Self {
            rows,
            cols,
            data: vec![0; rows],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zero(n, n)?;
        for (i, row) in m.data.iter_mut().enumerate() {
            *row = 1 << i;
        }
        Ok(m)
    }

    /// Builds a matrix from packed rows; bit `j` of `rows[i]` is entry `(i, j)`.
    pub fn from_rows(cols: usize, rows: &[u32]) -> Result<Self> {
        let mut m = Self::zero(rows.len(), cols)?;
        for (i, &r) in rows.iter().enumerate() {
            if r & !low_mask(cols) != 0 {
                return Err(Error::InvalidParameters(format!(
                    "row {i} has bits beyond column {cols}"
                )));
            }
            m.data[i] = r;
        }
        Ok(m)
    }

    /// Builds a square matrix whose column `j` is `columns[j]`.
    pub fn from_columns(n: usize, columns: &[u32]) -> Result<Self> {
        check_size(n, columns.len())?;
        let mut m = Self::zero(n, n)?;
        for (j, &c) in columns.iter().enumerate() {
            if c & !low_mask(n) != 0 {
                return Err(Error::InvalidParameters(format!(
                    "column {j} has bits beyond row {n}"
                )));
            }
            for i in 0..n {
                if c >> i & 1 == 1 {
                    m.data[i] |= 1 << j;
                }
            }
        }
        Ok(m)
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let mut m = Self::zero(rows, cols)?;
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.data[i] |= 1 << j;
                }
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        self.data[i] >> j & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        if value {
            self.data[i] |= 1 << j;
        } else {
            self.data[i] &= !(1 << j);
        }
    }

    pub fn row(&self, i: usize) -> u32 {
        self.data[i]
    }

    pub fn row_words(&self) -> &[u32] {
        &self.data
    }

    pub fn column(&self, j: usize) -> u32 {
        assert!(j < self.cols, "column {j} out of range");
        self.data
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &r)| acc | ((r >> j & 1) << i))
    }

    pub fn columns(&self) -> Vec<u32> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self {
            rows: self.cols,
            cols: self.rows,
            data: vec![0; self.cols],
        };
        for j in 0..self.cols {
            t.data[j] = self.column(j);
        }
        t
    }

    /// `M v` for a packed column vector `v`.
    pub fn mul_word(&self, v: u32) -> u32 {
        self.data
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &r)| acc | (u32::from(parity(r & v)) << i))
    }

    pub fn mul_vec(&self, v: &Gf2Vector) -> Result<Gf2Vector> {
        check_size(self.cols, v.dim())?;
        Gf2Vector::new(self.rows, self.mul_word(v.bits()))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_size(self.cols, other.rows)?;
        let mut out = Self::zero(self.rows, other.cols)?;
        for (i, &r) in self.data.iter().enumerate() {
            let mut acc = 0;
            let mut bits = r;
            while bits != 0 {
                let k = bits.trailing_zeros() as usize;
                acc ^= other.data[k];
                bits &= bits - 1;
            }
            out.data[i] = acc;
        }
        Ok(out)
    }

    /// GF(2) row rank.
    pub fn rank(&self) -> usize {
        let mut rows = self.data.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            let bit = 1 << col;
            let Some(pivot) = (rank..rows.len()).find(|&i| rows[i] & bit != 0) else {
                continue;
            };
            rows.swap(rank, pivot);
            let pivot_row = rows[rank];
            for (i, r) in rows.iter_mut().enumerate() {
                if i != rank && *r & bit != 0 {
                    *r ^= pivot_row;
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut left = self.data.clone();
        let mut right: Vec<u32> = (0..n).map(|i| 1 << i).collect();
        for col in 0..n {
            let bit = 1 << col;
            let pivot = (col..n).find(|&i| left[i] & bit != 0)?;
            left.swap(col, pivot);
            right.swap(col, pivot);
            for i in 0..n {
                if i != col && left[i] & bit != 0 {
                    left[i] ^= left[col];
                    right[i] ^= right[col];
                }
            }
        }
        Some(Self {
            rows: n,
            cols: n,
            data: right,
        })
    }

    /// Basis of the null space `{v : M v = 0}`; its size is `cols - rank`.
    pub fn kernel(&self) -> Vec<Gf2Vector> {
        let mut rows = self.data.clone();
        let mut pivots: Vec<usize> = Vec::new();
        let mut rank = 0;
        for col in 0..self.cols {
            let bit = 1 << col;
            let Some(pivot) = (rank..rows.len()).find(|&i| rows[i] & bit != 0) else {
                continue;
            };
            rows.swap(rank, pivot);
            let pivot_row = rows[rank];
            for (i, r) in rows.iter_mut().enumerate() {
                if i != rank && *r & bit != 0 {
                    *r ^= pivot_row;
                }
            }
            pivots.push(col);
            rank += 1;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = 1u32 << free;
            for (r, &p) in pivots.iter().enumerate() {
                if rows[r] >> free & 1 == 1 {
                    v |= 1 << p;
                }
            }
            basis.push(Gf2Vector::from_raw(self.cols, v));
        }
        basis
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|j| self.column(j) == self.data[j])
    }

    pub fn has_zero_diagonal(&self) -> bool {
        (0..self.rows.min(self.cols)).all(|i| !self.get(i, i))
    }

    /// The bilinear form `x^T M y`.
    pub fn bilinear(&self, x: u32, y: u32) -> bool {
        parity(x & self.mul_word(y))
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .data
            .iter()
            .map(|&r| (0..self.cols).map(|j| if r >> j & 1 == 1 { '1' } else { '0' }).collect())
            .collect();
        write!(f, "Gf2Matrix[{}]", rows.join("/"))
    }
}

/// `P^T E P`, the commutation matrix after the change of generators `P`.
pub fn congruence(e: &Gf2Matrix, p: &Gf2Matrix) -> Result<Gf2Matrix> {
    if !e.is_square() {
        return Err(Error::NotElementary("commutation matrix must be square".into()));
    }
    check_size(e.rows(), p.rows())?;
    if !p.is_invertible() {
        return Err(Error::NotABasisChange);
    }
    congruence_unchecked(e, p)
}

pub(crate) fn congruence_unchecked(e: &Gf2Matrix, p: &Gf2Matrix) -> Result<Gf2Matrix> {
    p.transpose().mul(&e.mul(p)?)
}

/// A subspace of `GF(2)^n` held as a reduced row-echelon basis.
///
/// Each basis vector owns a pivot (its lowest set bit) that no other basis
/// vector touches, so equal subspaces have equal bases.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    dim: usize,
    basis: Vec<u32>,
}

impl Subspace {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            basis: Vec::new(),
        }
    }

    pub fn full(dim: usize) -> Self {
        Self::span(dim, (0..dim).map(|i| 1u32 << i))
    }

    pub fn span(dim: usize, vectors: impl IntoIterator<Item = u32>) -> Self {
        let mut s = Self::zero(dim);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    /// Adds `v` to the spanning set; returns whether the dimension grew.
    pub fn insert(&mut self, v: u32) -> bool {
        let r = self.reduce(v);
        if r == 0 {
            return false;
        }
        let pivot = r & r.wrapping_neg();
        for b in self.basis.iter_mut() {
            if *b & pivot != 0 {
                *b ^= r;
            }
        }
        let pos = self.basis.partition_point(|&b| (b & b.wrapping_neg()) < pivot);
        self.basis.insert(pos, r);
        true
    }

    fn reduce(&self, mut v: u32) -> u32 {
        for &b in &self.basis {
            if v & b & b.wrapping_neg() != 0 {
                v ^= b;
            }
        }
        v
    }

    pub fn contains(&self, v: u32) -> bool {
        self.reduce(v) == 0
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the subspace itself.
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[u32] {
        &self.basis
    }

    /// All `2^rank` elements.
    pub fn elements(&self) -> Vec<u32> {
        let mut out = vec![0u32];
        for &b in &self.basis {
            let extra: Vec<u32> = out.iter().map(|&v| v ^ b).collect();
            out.extend(extra);
        }
        out.sort_unstable();
        out
    }

    /// Whether the subspace is spanned by standard basis vectors.
    pub fn coordinate_support(&self) -> Option<u32> {
        self.basis
            .iter()
            .all(|b| b.count_ones() == 1)
            .then(|| self.basis.iter().fold(0, |acc, b| acc | b))
    }
}

/// Iterator over `GL_n(GF(2))` in lexicographic order of the rows
/// `(row_0, row_1, ..., row_{n-1})`, each row compared as an integer.
pub struct InvertibleMatrices {
    n: usize,
    rows: Vec<u32>,
    // spans[k]: bitmask over GF(2)^n of the span of rows[..k]
    spans: Vec<u64>,
    started: bool,
    done: bool,
}

/// Every invertible `n x n` matrix over GF(2) exactly once, deterministic order.
pub fn enumerate_invertible(n: usize) -> Result<InvertibleMatrices> {
    if !(1..=MAX_ENUM_DIM).contains(&n) {
        return Err(Error::EnumerationTooLarge {
            n,
            max: MAX_ENUM_DIM,
        });
    }
    Ok(InvertibleMatrices {
        n,
        rows: vec![0; n],
        spans: vec![1; n + 1],
        started: false,
        done: false,
    })
}

/// `|GL_n(GF(2))| = prod_{k<n} (2^n - 2^k)`.
pub fn gl_order(n: usize) -> u64 {
    (0..n).map(|k| (1u64 << n) - (1u64 << k)).product()
}

impl InvertibleMatrices {
    fn extend_span(span: u64, row: u32) -> u64 {
        let mut out = span;
        let mut bits = span;
        while bits != 0 {
            let v = bits.trailing_zeros();
            out |= 1u64 << (v ^ row);
            bits &= bits - 1;
        }
        out
    }

    fn next_candidate(&self, level: usize, after: Option<u32>) -> Option<u32> {
        let start = after.map_or(0, |a| a + 1);
        (start..(1u32 << self.n)).find(|&c| self.spans[level] >> c & 1 == 0)
    }

    fn fill_from(&mut self, level: usize) {
        for k in level..self.n {
            let c = self
                .next_candidate(k, None)
                .expect("an independent set always extends to a basis");
            self.rows[k] = c;
            self.spans[k + 1] = Self::extend_span(self.spans[k], c);
        }
    }

    fn current(&self) -> Gf2Matrix {
        Gf2Matrix {
            rows: self.n,
            cols: self.n,
            data: self.rows.clone(),
        }
    }
}

impl Iterator for InvertibleMatrices {
    type Item = Gf2Matrix;

    fn next(&mut self) -> Option<Gf2Matrix> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.fill_from(0);
            return Some(self.current());
        }
        let mut level = self.n;
        while level > 0 {
            level -= 1;
            if let Some(c) = self.next_candidate(level, Some(self.rows[level])) {
                self.rows[level] = c;
                self.spans[level + 1] = Self::extend_span(self.spans[level], c);
                self.fill_from(level + 1);
                return Some(self.current());
            }
        }
        self.done = true;
        None
    }
}
