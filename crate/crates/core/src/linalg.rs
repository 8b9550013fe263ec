//! Dense linear algebra over F_q and F_{q^m}.
//!
//! [`MatFq`] stores one element per `u16`; over F_2 the elimination and
//! multiplication kernels repack rows into 64-bit words.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf::{BaseField, ExtElem, ExtField, Field};

/// Reduced row echelon form in place over any [`Field`]; returns pivot columns.
pub(crate) fn rref_generic<F: Field>(
    f: &F,
    rows: usize,
    cols: usize,
    data: &mut [F::Elem],
) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !f.is_zero(&data[i * cols + c])) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                data.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(&data[r * cols + c]).expect("pivot is nonzero");
        for j in c..cols {
            data[r * cols + j] = f.mul(&data[r * cols + j], &inv);
        }
        for i in 0..rows {
            if i == r || f.is_zero(&data[i * cols + c]) {
                continue;
            }
            let factor = data[i * cols + c].clone();
            for j in c..cols {
                let t = f.mul(&factor, &data[r * cols + j]);
                data[i * cols + j] = f.sub(&data[i * cols + j], &t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Row-packed F_2 matrix used by the binary fast paths.
#[derive(Clone)]
pub(crate) struct BitMat {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMat {
    pub(crate) fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64).max(1);
        BitMat {
            rows,
            cols,
            words,
            data: vec![0; rows * words],
        }
    }

    fn from_mat(m: &MatFq) -> Self {
        let mut out = BitMat::zeros(m.rows, m.cols);
        for i in 0..m.rows {
            for (j, &v) in m.row(i).iter().enumerate() {
                if v != 0 {
                    out.data[i * out.words + j / 64] |= 1 << (j % 64);
                }
            }
        }
        out
    }

    fn to_mat(&self, field: &BaseField) -> MatFq {
        let mut out = MatFq::zeros(field, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    out.data[i * self.cols + j] = 1;
                }
            }
        }
        out
    }

    #[inline]
    pub(crate) fn get(&self, i: usize, j: usize) -> bool {
        (self.data[i * self.words + j / 64] >> (j % 64)) & 1 == 1
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    fn xor_row_into(&mut self, src: usize, dst: usize, from_word: usize) {
        let w = self.words;
        let (s, d) = (src * w, dst * w);
        for k in from_word..w {
            let v = self.data[s + k];
            self.data[d + k] ^= v;
        }
    }

    pub(crate) fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c)) else {
                continue;
            };
            if p != r {
                let w = self.words;
                for k in 0..w {
                    self.data.swap(p * w + k, r * w + k);
                }
            }
            for i in 0..self.rows {
                if i != r && self.get(i, c) {
                    self.xor_row_into(r, i, c / 64);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn mul(&self, other: &BitMat) -> BitMat {
        let mut out = BitMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let dst = i * out.words;
            for k in 0..self.cols {
                if self.get(i, k) {
                    let src = other.row(k);
                    for (d, s) in out.data[dst..dst + out.words].iter_mut().zip(src) {
                        *d ^= s;
                    }
                }
            }
        }
        out
    }
}

/// Dense matrix over F_q, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct MatFq {
    field: BaseField,
    rows: usize,
    cols: usize,
    data: Vec<u16>,
}

impl fmt::Debug for MatFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatFq {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// A particular solution of `A·x = b` together with a basis of `ker A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub particular: Vec<u16>,
    pub kernel: Vec<Vec<u16>>,
}

impl MatFq {
    pub fn zeros(field: &BaseField, rows: usize, cols: usize) -> Self {
        MatFq {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &BaseField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_vec(field: &BaseField, rows: usize, cols: usize, data: Vec<u16>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|&v| v as u32 >= field.q()) {
            return Err(Error::FieldMismatch);
        }
        Ok(MatFq {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    pub fn from_rows(field: &BaseField, rows: &[Vec<u16>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::from_vec(field, rows.len(), cols, rows.concat())
    }

    pub fn random<R: Rng + ?Sized>(field: &BaseField, rows: usize, cols: usize, rng: &mut R) -> Self {
        let data = (0..rows * cols).map(|_| field.random(rng)).collect();
        MatFq {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    /// Uniform element of GL_n(F_q) by rejection sampling.
    pub fn random_gl<R: Rng + ?Sized>(field: &BaseField, n: usize, rng: &mut R) -> Self {
        Self::random_gl_counted(field, n, rng).0
    }

    /// Like [`MatFq::random_gl`], also returning the number of samples drawn.
    pub fn random_gl_counted<R: Rng + ?Sized>(
        field: &BaseField,
        n: usize,
        rng: &mut R,
    ) -> (Self, usize) {
        let mut attempts = 0;
        loop {
            attempts += 1;
            let m = Self::random(field, n, n, rng);
            if m.rank() == n {
                return (m, attempts);
            }
        }
    }

    /// Uniform matrix of rank exactly `r`, as the product of uniform
    /// full-rank `rows×r` and `r×cols` factors.
    pub fn random_rank<R: Rng + ?Sized>(
        field: &BaseField,
        rows: usize,
        cols: usize,
        r: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let max = rows.min(cols);
        if r > max {
            return Err(Error::RankTooLarge { rank: r, max });
        }
        if r == 0 {
            return Ok(Self::zeros(field, rows, cols));
        }
        let left = loop {
            let a = Self::random(field, rows, r, rng);
            if a.rank() == r {
                break a;
            }
        };
        let right = loop {
            let b = Self::random(field, r, cols, rng);
            if b.rank() == r {
                break b;
            }
        };
        Ok(left.mul(&right))
    }

    /// Inverse of [`MatFq::unfold`]: the j-th length-`rows` block of `v`
    /// becomes column j.
    pub fn fold(field: &BaseField, v: &[u16], rows: usize) -> Result<Self> {
        if rows == 0 || !v.len().is_multiple_of(rows) {
            return Err(Error::DimensionMismatch(format!(
                "cannot fold {} entries into {rows} rows",
                v.len()
            )));
        }
        let cols = v.len() / rows;
        let mut m = Self::zeros(field, rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m.data[i * cols + j] = v[j * rows + i];
            }
        }
        if m.data.iter().any(|&x| x as u32 >= field.q()) {
            return Err(Error::FieldMismatch);
        }
        Ok(m)
    }

    /// Column-major flattening: columns concatenated top to bottom.
    pub fn unfold(&self) -> Vec<u16> {
        let mut v = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                v.push(self.data[i * self.cols + j]);
            }
        }
        v
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &BaseField {
        &self.field
    }

    pub fn data(&self) -> &[u16] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u16 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u16) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u16] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<u16> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn add(&self, other: &MatFq) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix add dims");
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        MatFq {
            data,
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &MatFq) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix sub dims");
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        MatFq {
            data,
            ..self.clone()
        }
    }

    pub fn scale(&self, c: u16) -> Self {
        let f = &self.field;
        MatFq {
            data: self.data.iter().map(|&a| f.mul(c, a)).collect(),
            ..self.clone()
        }
    }

    /// `self += c·other`.
    pub fn add_scaled(&mut self, c: u16, other: &MatFq) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix add dims");
        if c == 0 {
            return;
        }
        let f = self.field.clone();
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = f.add(*a, f.mul(c, b));
        }
    }

    /// Matrix product. Panics on incompatible shapes; see [`MatFq::try_mul`].
    pub fn mul(&self, other: &MatFq) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product dims");
        if self.field.is_binary() {
            return BitMat::from_mat(self).mul(&BitMat::from_mat(other)).to_mat(&self.field);
        }
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                let src = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &s) in dst.iter_mut().zip(src) {
                    *d = f.add(*d, f.mul(a, s));
                }
            }
        }
        out
    }

    pub fn try_mul(&self, other: &MatFq) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(self.mul(other))
    }

    pub fn mul_vec(&self, v: &[u16]) -> Vec<u16> {
        assert_eq!(self.cols, v.len(), "matrix-vector dims");
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0u16, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        if self.field.is_binary() {
            let mut bits = BitMat::from_mat(self);
            let pivots = bits.rref();
            *self = bits.to_mat(&self.field);
            return pivots;
        }
        let f = self.field.clone();
        rref_generic(&f, self.rows, self.cols, &mut self.data)
    }

    pub fn rank(&self) -> usize {
        if self.field.is_binary() {
            return BitMat::from_mat(self).rref().len();
        }
        self.clone().rref().len()
    }

    /// Basis of the right kernel `{v : A·v = 0}`.
    pub fn null_space(&self) -> Vec<Vec<u16>> {
        let mut e = self.clone();
        let pivots = e.rref();
        kernel_from_rref(&e, &pivots, self.cols)
    }

    /// Solves `A·x = b`, returning one solution and a kernel basis.
    pub fn solve(&self, b: &[u16]) -> Result<Solution> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let n = self.cols;
        let mut aug = Self::zeros(&self.field, self.rows, n + 1);
        for i in 0..self.rows {
            aug.data[i * (n + 1)..i * (n + 1) + n].copy_from_slice(self.row(i));
            aug.data[i * (n + 1) + n] = b[i];
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&n) {
            return Err(Error::NoSolution);
        }
        let mut particular = vec![0u16; n];
        for (r, &c) in pivots.iter().enumerate() {
            particular[c] = aug.get(r, n);
        }
        Ok(Solution {
            particular,
            kernel: kernel_from_rref(&aug, &pivots, n),
        })
    }

    pub fn invert(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("only square matrices are invertible".into()));
        }
        let n = self.rows;
        let mut aug = Self::zeros(&self.field, n, 2 * n);
        for i in 0..n {
            aug.data[i * 2 * n..i * 2 * n + n].copy_from_slice(self.row(i));
            aug.data[i * 2 * n + n + i] = 1;
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let mut inv = Self::zeros(&self.field, n, n);
        for i in 0..n {
            inv.data[i * n..(i + 1) * n].copy_from_slice(&aug.row(i)[n..]);
        }
        Ok(inv)
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols, "submatrix out of range");
        let mut out = Self::zeros(&self.field, rows, cols);
        for i in 0..rows {
            out.data[i * cols..(i + 1) * cols]
                .copy_from_slice(&self.data[(r0 + i) * self.cols + c0..(r0 + i) * self.cols + c0 + cols]);
        }
        out
    }

    /// Writes `block` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &MatFq) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of range");
        for i in 0..block.rows {
            let dst = (r0 + i) * self.cols + c0;
            self.data[dst..dst + block.cols].copy_from_slice(block.row(i));
        }
    }

    /// `[[tl, tr], [bl, br]]`.
    pub fn from_blocks(tl: &MatFq, tr: &MatFq, bl: &MatFq, br: &MatFq) -> Result<Self> {
        if tl.rows != tr.rows || bl.rows != br.rows || tl.cols != bl.cols || tr.cols != br.cols {
            return Err(Error::DimensionMismatch("inconsistent block shapes".into()));
        }
        let mut out = Self::zeros(&tl.field, tl.rows + bl.rows, tl.cols + tr.cols);
        out.set_block(0, 0, tl);
        out.set_block(0, tl.cols, tr);
        out.set_block(tl.rows, 0, bl);
        out.set_block(tl.rows, tl.cols, br);
        Ok(out)
    }

    /// Serialized form: rows and cols as 4-byte little-endian integers, then
    /// the packed entries in row-major order.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 + crate::codec::packed_len(&self.field, self.data.len()));
        out.extend_from_slice(&(self.rows as u32).to_le_bytes());
        out.extend_from_slice(&(self.cols as u32).to_le_bytes());
        out.extend(crate::codec::pack(&self.field, &self.data));
        out
    }

    /// Parses [`MatFq::to_bytes`] output; returns the matrix and bytes consumed.
    pub fn from_bytes(field: &BaseField, bytes: &[u8]) -> Result<(Self, usize)> {
        if bytes.len() < 8 {
            return Err(Error::Truncated {
                expected: 8,
                got: bytes.len(),
            });
        }
        let rows = u32::from_le_bytes(bytes[0..4].try_into().unwrap()) as usize;
        let cols = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
        let count = rows
            .checked_mul(cols)
            .filter(|&c| c <= 1 << 28)
            .ok_or_else(|| Error::Malformed(format!("implausible matrix size {rows}x{cols}")))?;
        let len = crate::codec::packed_len(field, count);
        if bytes.len() < 8 + len {
            return Err(Error::Truncated {
                expected: 8 + len,
                got: bytes.len(),
            });
        }
        let data = crate::codec::unpack(field, &bytes[8..8 + len], count)?;
        Ok((Self::from_vec(field, rows, cols, data)?, 8 + len))
    }
}

fn kernel_from_rref(e: &MatFq, pivots: &[usize], n: usize) -> Vec<Vec<u16>> {
    let f = e.field();
    let mut is_pivot = vec![false; n];
    for &c in pivots {
        is_pivot[c] = true;
    }
    (0..n)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![0u16; n];
            v[free] = 1;
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = f.neg(e.get(r, free));
            }
            v
        })
        .collect()
}

/// Row space of a family of F_q-vectors, kept in reduced echelon form.
#[derive(Clone, Debug)]
pub struct RowSpace {
    echelon: MatFq,
    pivots: Vec<usize>,
}

impl RowSpace {
    /// Span of `vectors`, each of length `len`.
    pub fn new(field: &BaseField, len: usize, vectors: &[Vec<u16>]) -> Self {
        let mut m = MatFq::zeros(field, vectors.len(), len);
        for (i, v) in vectors.iter().enumerate() {
            assert_eq!(v.len(), len, "vector length");
            m.data[i * len..(i + 1) * len].copy_from_slice(v);
        }
        Self::from_matrix(m)
    }

    /// Row space of `m`.
    pub fn from_matrix(mut m: MatFq) -> Self {
        let pivots = m.rref();
        let echelon = m.submatrix(0, 0, pivots.len(), m.cols());
        RowSpace { echelon, pivots }
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn ambient(&self) -> usize {
        self.echelon.cols()
    }

    /// Reduced echelon basis, one vector per row.
    pub fn basis(&self) -> &MatFq {
        &self.echelon
    }

    pub fn contains(&self, v: &[u16]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Residue of `v` after clearing all pivot positions.
    pub fn reduce(&self, v: &[u16]) -> Vec<u16> {
        let f = self.echelon.field().clone();
        let mut w = v.to_vec();
        for (r, &c) in self.pivots.iter().enumerate() {
            let coef = w[c];
            if coef == 0 {
                continue;
            }
            for (x, &b) in w.iter_mut().zip(self.echelon.row(r)) {
                *x = f.sub(*x, f.mul(coef, b));
            }
        }
        w
    }

    /// Whether both spaces coincide.
    pub fn same_space(&self, other: &RowSpace) -> bool {
        self.dim() == other.dim() && (0..other.dim()).all(|i| self.contains(other.echelon.row(i)))
    }

    /// Dimension of the sum with `other`.
    pub fn sum_dim(&self, other: &RowSpace) -> usize {
        let f = self.echelon.field().clone();
        let mut rows: Vec<Vec<u16>> = (0..self.dim()).map(|i| self.echelon.row(i).to_vec()).collect();
        rows.extend((0..other.dim()).map(|i| other.echelon.row(i).to_vec()));
        RowSpace::new(&f, self.ambient(), &rows).dim()
    }

    /// Dimension of the intersection with `other`.
    pub fn intersection_dim(&self, other: &RowSpace) -> usize {
        self.dim() + other.dim() - self.sum_dim(other)
    }

    /// Basis of the orthogonal complement under the standard dot product.
    pub fn orthogonal(&self) -> Vec<Vec<u16>> {
        self.echelon.null_space()
    }
}

/// Dense matrix over F_{q^m}, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct MatExt {
    field: ExtField,
    rows: usize,
    cols: usize,
    data: Vec<ExtElem>,
}

impl fmt::Debug for MatExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatExt {}x{} over {:?}", self.rows, self.cols, self.field)
    }
}

impl MatExt {
    pub fn zeros(field: &ExtField, rows: usize, cols: usize) -> Self {
        MatExt {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn from_rows(field: &ExtField, rows: Vec<Vec<ExtElem>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        if rows.iter().flatten().any(|e| !field.contains(e)) {
            return Err(Error::FieldMismatch);
        }
        Ok(MatExt {
            field: field.clone(),
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn random<R: Rng + ?Sized>(field: &ExtField, rows: usize, cols: usize, rng: &mut R) -> Self {
        MatExt {
            field: field.clone(),
            rows,
            cols,
            data: (0..rows * cols).map(|_| field.random(rng)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &ExtField {
        &self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &ExtElem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ExtElem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[ExtElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Applies the Frobenius a ↦ a^{q^i} entrywise.
    pub fn frobenius(&self, i: usize) -> Self {
        MatExt {
            data: self.data.iter().map(|a| self.field.frobenius(a, i)).collect(),
            ..self.clone()
        }
    }

    /// Stacks `other` below `self`.
    pub fn stack(&self, other: &MatExt) -> Self {
        assert_eq!(self.cols, other.cols, "stack dims");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        MatExt {
            field: self.field.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn rref(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        rref_generic(&f, self.rows, self.cols, &mut self.data)
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right kernel over F_{q^m}.
    pub fn null_space(&self) -> Vec<Vec<ExtElem>> {
        let mut e = self.clone();
        let pivots = e.rref();
        let n = self.cols;
        let mut is_pivot = vec![false; n];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..n)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![self.field.zero(); n];
                v[free] = self.field.one();
                for (r, &c) in pivots.iter().enumerate() {
                    v[c] = self.field.neg(e.get(r, free));
                }
                v
            })
            .collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[ExtElem]) -> Vec<ExtElem> {
        assert_eq!(v.len(), self.rows, "vector-matrix dims");
        let f = &self.field;
        let mut out = vec![f.zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o = f.add(o, &f.mul(vi, a));
            }
        }
        out
    }
}
