//! Bit-packed linear algebra over GF(2).
//!
//! Vectors pack 64 coordinates per `u64` word, coordinate `i` living in
//! word `i / 64` at bit `i % 64`. Matrices are row-major with the same
//! packing per row. Subspaces are stored by their reduced row-echelon
//! basis, which makes equality a direct comparison.

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A vector over GF(2) of fixed length.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GF2Vec {
    len: usize,
    words: Vec<u64>,
}

impl GF2Vec {
    pub fn zeros(len: usize) -> Self {
        GF2Vec {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
    }

    /// Unit vector with a single one at `i`.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut v = Self::zeros(bits.len());
        for (i, b) in bits.into_iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Parses a string of `0`/`1` characters.
    pub fn parse(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("unexpected character {other:?} in bit string"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::from_bits)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
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
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    /// `self += other`. Panics on length mismatch.
    #[inline]
    pub fn add_assign(&mut self, other: &GF2Vec) {
        assert_eq!(self.len, other.len, "GF2Vec length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn add(&self, other: &GF2Vec) -> GF2Vec {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn dot(&self, other: &GF2Vec) -> bool {
        assert_eq!(self.len, other.len, "GF2Vec length mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            & 1
            == 1
    }

    /// Index of the lowest set coordinate.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + tz)
            })
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Coordinates `start..start + len` as a new vector.
    pub fn slice(&self, start: usize, len: usize) -> GF2Vec {
        assert!(start + len <= self.len);
        let mut out = GF2Vec::zeros(len);
        for i in self.iter_ones().filter(|&i| i >= start && i < start + len) {
            out.set(i - start, true);
        }
        out
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Debug for GF2Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF2Vec({self})")
    }
}

impl fmt::Display for GF2Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Row-major bit-packed matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GF2Mat {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl GF2Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        GF2Mat {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from row vectors, all of length `cols`.
    pub fn from_rows(cols: usize, rows: &[GF2Vec]) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, v) in rows.iter().enumerate() {
            if v.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {r} has length {}, expected {cols}",
                    v.len()
                )));
            }
            m.row_words_mut(r).copy_from_slice(v.words());
        }
        Ok(m)
    }

    /// Builds a matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(rows: usize, columns: &[GF2Vec]) -> Result<Self> {
        Ok(Self::from_rows(rows, columns)?.transpose())
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
        (self.data[r * self.stride + c / WORD] >> (c % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let word = &mut self.data[r * self.stride + c / WORD];
        let mask = 1u64 << (c % WORD);
        if value {
            *word |= mask;
        } else {
            *word &= !mask;
        }
    }

    #[inline]
    fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> GF2Vec {
        GF2Vec {
            len: self.cols,
            words: self.row_words(r).to_vec(),
        }
    }

    pub fn column(&self, c: usize) -> GF2Vec {
        GF2Vec::from_bits((0..self.rows).map(|r| self.get(r, c)))
    }

    pub fn row_vectors(&self) -> Vec<GF2Vec> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn column_vectors(&self) -> Vec<GF2Vec> {
        self.transpose().row_vectors()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn transpose(&self) -> GF2Mat {
        let mut t = GF2Mat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            let row = self.row(r);
            for c in row.iter_ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// `self * x` for a column vector `x`.
    pub fn mul_vec(&self, x: &GF2Vec) -> Result<GF2Vec> {
        if x.len() != self.cols {
            return Err(Error::Dimension(format!(
                "matrix has {} columns, vector has length {}",
                self.cols,
                x.len()
            )));
        }
        Ok(self.mul_vec_unchecked(x))
    }

    pub(crate) fn mul_vec_unchecked(&self, x: &GF2Vec) -> GF2Vec {
        let mut out = GF2Vec::zeros(self.rows);
        for r in 0..self.rows {
            let parity = self
                .row_words(r)
                .iter()
                .zip(x.words())
                .map(|(a, b)| (a & b).count_ones())
                .sum::<u32>()
                & 1;
            if parity == 1 {
                out.set(r, true);
            }
        }
        out
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &GF2Mat) -> Result<GF2Mat> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = GF2Mat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in self.row(r).iter_ones() {
                let src = r * out.stride;
                let (dst, rhs) = (&mut out.data[src..src + out.stride], other.row_words(k));
                for (a, b) in dst.iter_mut().zip(rhs) {
                    *a ^= *b;
                }
            }
        }
        Ok(out)
    }

    /// Entrywise sum.
    pub fn add(&self, other: &GF2Mat) -> Result<GF2Mat> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a ^= *b;
        }
        Ok(out)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &GF2Mat) -> Result<GF2Mat> {
        if self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "cannot stack matrices with {} and {} columns",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(GF2Mat {
            rows: self.rows + other.rows,
            cols: self.cols,
            stride: self.stride,
            data,
        })
    }

    /// Row rank over GF(2).
    pub fn rank(&self) -> usize {
        let mut ech = Echelon::new(self.cols);
        for r in 0..self.rows {
            ech.insert(self.row(r));
        }
        ech.rank()
    }

    /// Null space `{x : self * x = 0}` as a subspace of GF(2)^cols.
    pub fn kernel_basis(&self) -> Subspace {
        let mut ech = Echelon::new(self.cols);
        for r in 0..self.rows {
            ech.insert(self.row(r));
        }
        let pivot_rows = ech.sorted_rows();
        let pivots: Vec<usize> = pivot_rows.iter().map(|(c, _)| *c).collect();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let basis = (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut x = GF2Vec::unit(self.cols, free);
                for (p, row) in &pivot_rows {
                    if row.get(free) {
                        x.set(*p, true);
                    }
                }
                x
            })
            .collect::<Vec<_>>();
        Subspace::span(self.cols, basis).expect("kernel vectors have ambient length")
    }

    /// Column space as a subspace of GF(2)^rows.
    pub fn image_basis(&self) -> Subspace {
        Subspace::span(self.rows, self.column_vectors()).expect("columns have ambient length")
    }

    /// Some `x` with `self * x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &GF2Vec) -> Result<Option<GF2Vec>> {
        if b.len() != self.rows {
            return Err(Error::Dimension(format!(
                "right-hand side has length {}, matrix has {} rows",
                b.len(),
                self.rows
            )));
        }
        let mut system = LinearSystem::new(self.cols);
        for r in 0..self.rows {
            system.add_equation(&self.row(r), b.get(r));
        }
        Ok(system.solution())
    }

    /// Text dump: `rows cols` then one line of `0`/`1` per row.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for r in 0..self.rows {
            s.push_str(&self.row(r).to_string());
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<GF2Mat> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty matrix dump".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad header {header:?}"))))
            .collect::<Result<_>>()?;
        let [rows, cols] = dims[..] else {
            return Err(Error::Parse(format!("bad header {header:?}")));
        };
        let vecs = lines
            .map(|l| GF2Vec::parse(l.trim()))
            .collect::<Result<Vec<_>>>()?;
        if vecs.len() != rows {
            return Err(Error::Parse(format!("expected {rows} rows, found {}", vecs.len())));
        }
        GF2Mat::from_rows(cols, &vecs)
    }
}

impl fmt::Debug for GF2Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF2Mat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "{}{}", if r == 0 { "" } else { " " }, self.row(r))?;
        }
        f.write_str("]")
    }
}

/// Incrementally maintained reduced row-echelon form.
///
/// Every stored row has a pivot column (its lowest set bit) and no stored
/// row has a one in another row's pivot column, so reducing a fresh vector
/// costs at most one xor per pivot it touches.
#[derive(Clone, Debug)]
pub struct Echelon {
    width: usize,
    rows: Vec<GF2Vec>,
    pivot_cols: Vec<usize>,
    row_of_col: Vec<Option<usize>>,
}

impl Echelon {
    pub fn new(width: usize) -> Self {
        Echelon {
            width,
            rows: Vec::new(),
            pivot_cols: Vec::new(),
            row_of_col: vec![None; width],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows in place.
    pub fn reduce(&self, v: &mut GF2Vec) {
        debug_assert_eq!(v.len(), self.width);
        let hits: Vec<usize> = v
            .iter_ones()
            .filter_map(|c| self.row_of_col[c])
            .collect();
        for r in hits {
            v.add_assign(&self.rows[r]);
        }
    }

    /// Inserts `v`; returns the new pivot column if `v` was independent.
    pub fn insert(&mut self, mut v: GF2Vec) -> Option<usize> {
        self.reduce(&mut v);
        let pivot = v.first_one()?;
        for row in &mut self.rows {
            if row.get(pivot) {
                row.add_assign(&v);
            }
        }
        self.row_of_col[pivot] = Some(self.rows.len());
        self.rows.push(v);
        self.pivot_cols.push(pivot);
        Some(pivot)
    }

    /// Reduces `v` in place and stores it if independent, leaving `v`
    /// zeroed either way. Avoids an allocation per dependent row.
    pub fn insert_reducing(&mut self, v: &mut GF2Vec) -> Option<usize> {
        self.reduce(v);
        if v.is_zero() {
            return None;
        }
        let row = std::mem::replace(v, GF2Vec::zeros(self.width));
        self.insert(row)
    }

    pub fn contains(&self, v: &GF2Vec) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w);
        w.is_zero()
    }

    pub fn pivot_row(&self, col: usize) -> Option<&GF2Vec> {
        self.row_of_col[col].map(|r| &self.rows[r])
    }

    /// `(pivot column, row)` pairs sorted by pivot column.
    pub fn sorted_rows(&self) -> Vec<(usize, GF2Vec)> {
        let mut out: Vec<(usize, GF2Vec)> = self
            .pivot_cols
            .iter()
            .copied()
            .zip(self.rows.iter().cloned())
            .collect();
        out.sort_by_key(|(c, _)| *c);
        out
    }
}

/// Incremental linear system `A x = b` over GF(2).
///
/// Equations are stored as augmented rows with the right-hand side in the
/// last column, so an inconsistent system shows up as a pivot there.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    unknowns: usize,
    augmented: Echelon,
}

impl LinearSystem {
    pub fn new(unknowns: usize) -> Self {
        LinearSystem {
            unknowns,
            augmented: Echelon::new(unknowns + 1),
        }
    }

    /// Wraps an echelon form of augmented rows of width `unknowns + 1`.
    pub fn from_echelon(unknowns: usize, augmented: Echelon) -> Self {
        assert_eq!(augmented.width(), unknowns + 1, "augmented width mismatch");
        LinearSystem { unknowns, augmented }
    }

    pub fn unknowns(&self) -> usize {
        self.unknowns
    }

    pub fn add_equation(&mut self, coefficients: &GF2Vec, rhs: bool) {
        assert_eq!(coefficients.len(), self.unknowns, "equation width mismatch");
        let mut row = GF2Vec::zeros(self.unknowns + 1);
        row.words[..coefficients.words.len()].copy_from_slice(&coefficients.words);
        // the copy may not spill into the rhs column because
        // coefficients has no bits at or above `unknowns`
        row.set(self.unknowns, rhs);
        self.augmented.insert(row);
    }

    /// Adds an equation given directly as an augmented row (rhs in the last column).
    pub fn add_augmented(&mut self, row: GF2Vec) {
        assert_eq!(row.len(), self.unknowns + 1, "augmented row width mismatch");
        self.augmented.insert(row);
    }

    pub fn is_consistent(&self) -> bool {
        self.augmented.pivot_row(self.unknowns).is_none()
    }

    /// Rank of the augmented matrix.
    pub fn augmented_rank(&self) -> usize {
        self.augmented.rank()
    }

    /// Rank of the coefficient matrix.
    pub fn coefficient_rank(&self) -> usize {
        self.augmented.rank() - usize::from(!self.is_consistent())
    }

    /// `augmented_rank - coefficient_rank`; 1 exactly when inconsistent.
    pub fn rank_gap(&self) -> usize {
        self.augmented_rank() - self.coefficient_rank()
    }

    /// Dimension of the solution space of the homogeneous system.
    pub fn nullity(&self) -> usize {
        self.unknowns - self.coefficient_rank()
    }

    /// A particular solution with all free unknowns set to zero.
    pub fn solution(&self) -> Option<GF2Vec> {
        if !self.is_consistent() {
            return None;
        }
        let mut x = GF2Vec::zeros(self.unknowns);
        for (col, row) in self.augmented.sorted_rows() {
            if row.get(self.unknowns) {
                x.set(col, true);
            }
        }
        Some(x)
    }
}

/// A linear subspace of GF(2)^ambient_dim held in reduced row-echelon form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<GF2Vec>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self::span(
            ambient_dim,
            (0..ambient_dim).map(|i| GF2Vec::unit(ambient_dim, i)),
        )
        .expect("unit vectors have ambient length")
    }

    /// Span of arbitrary vectors of length `ambient_dim`.
    pub fn span<I: IntoIterator<Item = GF2Vec>>(ambient_dim: usize, vectors: I) -> Result<Self> {
        let mut ech = Echelon::new(ambient_dim);
        for v in vectors {
            if v.len() != ambient_dim {
                return Err(Error::Dimension(format!(
                    "vector of length {} in ambient dimension {ambient_dim}",
                    v.len()
                )));
            }
            ech.insert(v);
        }
        Ok(Self::from_echelon(&ech))
    }

    fn from_echelon(ech: &Echelon) -> Self {
        let rows = ech.sorted_rows();
        Subspace {
            ambient_dim: ech.width(),
            pivots: rows.iter().map(|(c, _)| *c).collect(),
            basis: rows.into_iter().map(|(_, r)| r).collect(),
        }
    }

    fn echelon(&self) -> Echelon {
        let mut ech = Echelon::new(self.ambient_dim);
        for (p, row) in self.pivots.iter().zip(&self.basis) {
            ech.row_of_col[*p] = Some(ech.rows.len());
            ech.rows.push(row.clone());
            ech.pivot_cols.push(*p);
        }
        ech
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[GF2Vec] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check_ambient(&self, other_dim: usize) -> Result<()> {
        if self.ambient_dim != other_dim {
            return Err(Error::Dimension(format!(
                "ambient dimensions {} and {other_dim} differ",
                self.ambient_dim
            )));
        }
        Ok(())
    }

    /// Reduces `v` modulo the subspace; the result has zeros at every pivot.
    pub fn reduce(&self, v: &GF2Vec) -> Result<GF2Vec> {
        self.check_ambient(v.len())?;
        let mut w = v.clone();
        for (p, row) in self.pivots.iter().zip(&self.basis) {
            if w.get(*p) {
                w.add_assign(row);
            }
        }
        Ok(w)
    }

    pub fn contains(&self, v: &GF2Vec) -> Result<bool> {
        Ok(self.reduce(v)?.is_zero())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        self.check_ambient(other.ambient_dim)?;
        for v in &self.basis {
            if !other.contains(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other.ambient_dim)?;
        let mut ech = self.echelon();
        for v in &other.basis {
            ech.insert(v.clone());
        }
        Ok(Self::from_echelon(&ech))
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other.ambient_dim)?;
        // x in self ∩ other iff x is orthogonal to both annihilators
        let annihilators = self.annihilator().sum(&other.annihilator())?;
        let constraints = GF2Mat::from_rows(self.ambient_dim, annihilators.basis())?;
        Ok(constraints.kernel_basis())
    }

    /// `{y : y . x = 0 for all x in self}`.
    pub fn annihilator(&self) -> Subspace {
        GF2Mat::from_rows(self.ambient_dim, &self.basis)
            .expect("basis vectors have ambient length")
            .kernel_basis()
    }

    /// Coordinates that are not pivots of the basis; reducing modulo the
    /// subspace and reading these coordinates identifies the quotient.
    pub fn complement_coordinates(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient_dim];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient_dim).filter(|&c| !is_pivot[c]).collect()
    }

    /// Surjection onto GF(2)^(ambient - dim) whose kernel is exactly `self`.
    pub fn quotient_map(&self) -> (GF2Mat, usize) {
        let complement = self.complement_coordinates();
        let qdim = complement.len();
        let mut slot = vec![usize::MAX; self.ambient_dim];
        for (i, &c) in complement.iter().enumerate() {
            slot[c] = i;
        }
        let mut q = GF2Mat::zeros(qdim, self.ambient_dim);
        for (i, &c) in complement.iter().enumerate() {
            q.set(i, c, true);
        }
        for (p, row) in self.pivots.iter().zip(&self.basis) {
            for c in row.iter_ones().filter(|&c| c != *p) {
                q.set(slot[c], *p, true);
            }
        }
        (q, qdim)
    }

    /// Matrix whose columns are the basis vectors (`ambient x dim`).
    pub fn inclusion_matrix(&self) -> GF2Mat {
        GF2Mat::from_columns(self.ambient_dim, &self.basis).expect("basis vectors have ambient length")
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}: {:?})", self.dim(), self.ambient_dim, self.basis)
    }
}

pub fn rank(m: &GF2Mat) -> usize {
    m.rank()
}

pub fn solve(a: &GF2Mat, b: &GF2Vec) -> Result<Option<GF2Vec>> {
    a.solve(b)
}

pub fn kernel_basis(a: &GF2Mat) -> Subspace {
    a.kernel_basis()
}

pub fn image_basis(a: &GF2Mat) -> Subspace {
    a.image_basis()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&str]) -> GF2Mat {
        let vecs: Vec<GF2Vec> = rows.iter().map(|r| GF2Vec::parse(r).unwrap()).collect();
        GF2Mat::from_rows(vecs[0].len(), &vecs).unwrap()
    }

    #[test]
    fn rank_of_zero_and_identity() {
        assert_eq!(GF2Mat::zeros(3, 3).rank(), 0);
        assert_eq!(GF2Mat::identity(4).rank(), 4);
    }

    #[test]
    fn solve_identity_and_inconsistent() {
        let b = GF2Vec::parse("101").unwrap();
        assert_eq!(GF2Mat::identity(3).solve(&b).unwrap(), Some(b.clone()));
        let b = GF2Vec::parse("10").unwrap();
        assert_eq!(GF2Mat::zeros(2, 2).solve(&b).unwrap(), None);
    }

    #[test]
    fn solve_rejects_bad_rhs() {
        let b = GF2Vec::parse("10").unwrap();
        assert!(matches!(
            GF2Mat::identity(3).solve(&b),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn solve_verifies() {
        let a = mat(&["1100", "0110", "0011", "1001"]);
        let b = GF2Vec::parse("1010").unwrap();
        let x = a.solve(&b).unwrap().unwrap();
        assert_eq!(a.mul_vec(&x).unwrap(), b);
        // rows sum to zero so odd-weight right-hand sides are unsolvable
        assert_eq!(a.solve(&GF2Vec::parse("1000").unwrap()).unwrap(), None);
    }

    #[test]
    fn kernel_of_identity_is_zero() {
        assert_eq!(GF2Mat::identity(5).kernel_basis().dim(), 0);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let a = mat(&["11010", "01101", "11111"]);
        let k = a.kernel_basis();
        assert_eq!(k.dim() + a.rank(), 5);
        for v in k.basis() {
            assert!(a.mul_vec(v).unwrap().is_zero());
        }
    }

    #[test]
    fn sum_is_idempotent_and_equality_is_canonical() {
        let s = Subspace::span(
            4,
            ["1100", "0110"].iter().map(|r| GF2Vec::parse(r).unwrap()),
        )
        .unwrap();
        assert_eq!(s.sum(&s).unwrap(), s);
        let t = Subspace::span(
            4,
            ["1010", "0110"].iter().map(|r| GF2Vec::parse(r).unwrap()),
        )
        .unwrap();
        assert_eq!(s, t);
    }

    #[test]
    fn intersection_of_planes() {
        let s = Subspace::span(3, ["100", "010"].iter().map(|r| GF2Vec::parse(r).unwrap())).unwrap();
        let t = Subspace::span(3, ["010", "001"].iter().map(|r| GF2Vec::parse(r).unwrap())).unwrap();
        let i = s.intersection(&t).unwrap();
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&GF2Vec::parse("010").unwrap()).unwrap());
    }

    #[test]
    fn quotient_map_kills_exactly_the_subspace() {
        let s = Subspace::span(5, ["11000", "00111"].iter().map(|r| GF2Vec::parse(r).unwrap())).unwrap();
        let (q, d) = s.quotient_map();
        assert_eq!(d, 3);
        assert_eq!(q.rank(), 3);
        assert!(q.mul(&s.inclusion_matrix()).unwrap().is_zero());
        assert_eq!(q.kernel_basis(), s);
    }

    #[test]
    fn ambient_mismatch_is_rejected() {
        let a = Subspace::full(3);
        let b = Subspace::full(4);
        assert!(a.sum(&b).is_err());
        assert!(a.contains(&GF2Vec::zeros(4)).is_err());
    }

    #[test]
    fn text_dump_round_trip() {
        let a = mat(&["101", "011"]);
        let text = a.to_text();
        assert_eq!(text, "2 3\n101\n011\n");
        assert_eq!(GF2Mat::from_text(&text).unwrap(), a);
        assert!(GF2Mat::from_text("2 3\n101\n").is_err());
    }

    #[test]
    fn wide_vectors_cross_word_boundaries() {
        let mut v = GF2Vec::zeros(130);
        v.set(63, true);
        v.set(64, true);
        v.set(129, true);
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![63, 64, 129]);
        assert_eq!(v.first_one(), Some(63));
        let mut sys = LinearSystem::new(130);
        sys.add_equation(&v, true);
        let x = sys.solution().unwrap();
        assert!(x.dot(&v));
    }
}
