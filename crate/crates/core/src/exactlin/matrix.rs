//! Sparse exact matrices.
//!
//! Rows are stored as column-sorted lists of nonzero entries; an entry that is
//! not stored is zero. No stored entry is ever zero, so structural equality of
//! two matrices is entrywise equality.

use std::fmt;

use super::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, Scalar)>>,
}

/// Location and values of the first entry where two equally shaped matrices differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryDifference {
    pub row: usize,
    pub col: usize,
    pub left: Scalar,
    pub right: Scalar,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let one = field.one();
        let data = (0..n).map(|i| vec![(i, one.clone())]).collect();
        Matrix { field, rows: n, cols: n, data }
    }

    /// Builds from dense row-major rows. All rows must have the same length.
    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Matrix::zeros(field, rows.len(), cols);
        for (r, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (c, v) in row.into_iter().enumerate() {
                m.set(r, c, v);
            }
        }
        m
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            field,
            rows.iter().map(|r| r.iter().map(|&v| Scalar::from_i64(field, v)).collect()).collect(),
        )
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        match self.data[r].binary_search_by_key(&c, |(col, _)| *col) {
            Ok(i) => self.data[r][i].1.clone(),
            Err(_) => self.field.zero(),
        }
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        assert_eq!(v.field(), self.field, "entry from a different field");
        let row = &mut self.data[r];
        match row.binary_search_by_key(&c, |(col, _)| *col) {
            Ok(i) if v.is_zero() => {
                row.remove(i);
            }
            Ok(i) => row[i].1 = v,
            Err(_) if v.is_zero() => {}
            Err(i) => row.insert(i, (c, v)),
        }
    }

    /// Nonzero entries of row `r`, column-ascending.
    pub fn row_entries(&self, r: usize) -> &[(usize, Scalar)] {
        &self.data[r]
    }

    /// All nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.data.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| (0..self.cols).map(|c| self.get(r, c)).collect()).collect()
    }

    /// `self · rhs`. Panics on a shape mismatch.
    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        assert_eq!(self.field, rhs.field, "field mismatch in product");
        let mut out = Matrix::zeros(self.field, self.rows, rhs.cols);
        let mut acc: Vec<Option<Scalar>> = vec![None; rhs.cols];
        let mut touched = Vec::new();
        for (r, row) in self.data.iter().enumerate() {
            for (k, a) in row {
                for (c, b) in &rhs.data[*k] {
                    let term = a * b;
                    match &mut acc[*c] {
                        Some(s) => *s = &*s + &term,
                        slot @ None => {
                            *slot = Some(term);
                            touched.push(*c);
                        }
                    }
                }
            }
            touched.sort_unstable();
            let out_row = &mut out.data[r];
            for c in touched.drain(..) {
                if let Some(v) = acc[c].take() {
                    if !v.is_zero() {
                        out_row.push((c, v));
                    }
                }
            }
        }
        out
    }

    /// Kronecker product with row-major index pairing: row `(r1, r2) ↦ r1·rows₂ + r2`.
    pub fn kron(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.field, rhs.field, "field mismatch in Kronecker product");
        let mut out = Matrix::zeros(self.field, self.rows * rhs.rows, self.cols * rhs.cols);
        for (r1, row1) in self.data.iter().enumerate() {
            for r2 in 0..rhs.rows {
                let out_row = &mut out.data[r1 * rhs.rows + r2];
                for (c1, a) in row1 {
                    for (c2, b) in &rhs.data[r2] {
                        out_row.push((c1 * rhs.cols + c2, a * b));
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.cols, self.rows);
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                out.data[*c].push((r, v.clone()));
            }
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows, self.cols);
        if s.is_zero() {
            return out;
        }
        for (r, row) in self.data.iter().enumerate() {
            out.data[r] = row.iter().map(|(c, v)| (*c, v * s)).collect();
        }
        out
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn place(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of bounds");
        for (r, c, v) in block.entries() {
            self.set(r0 + r, c0 + c, v.clone());
        }
    }

    /// The sub-matrix of rows `r0..r0+rows` and columns `c0..c0+cols`.
    pub fn slice(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        let mut out = Matrix::zeros(self.field, rows, cols);
        for r in 0..rows {
            out.data[r] = self.data[r0 + r]
                .iter()
                .filter(|(c, _)| *c >= c0 && *c < c0 + cols)
                .map(|(c, v)| (c - c0, v.clone()))
                .collect();
        }
        out
    }

    /// Exact rank by Gaussian elimination over the field.
    pub fn rank(&self) -> usize {
        let mut m = self.to_dense();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        for col in 0..cols {
            let Some(pivot) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(rank, pivot);
            let inv = m[rank][col].inverse().expect("pivot is nonzero");
            for r in 0..rows {
                if r != rank && !m[r][col].is_zero() {
                    let factor = &m[r][col] * &inv;
                    #[allow(clippy::needless_range_loop)]
                    for c in col..cols {
                        let delta = &factor * &m[rank][c];
                        m[r][c] = &m[r][c] - &delta;
                    }
                }
            }
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }

    /// The first entry (row-major) where `self` and `other` differ.
    pub fn first_difference(&self, other: &Matrix) -> Option<EntryDifference> {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in comparison");
        for r in 0..self.rows {
            let (a, b) = (&self.data[r], &other.data[r]);
            if a == b {
                continue;
            }
            let (mut i, mut j) = (0, 0);
            loop {
                let ca = a.get(i).map(|e| e.0);
                let cb = b.get(j).map(|e| e.0);
                let col = match (ca, cb) {
                    (None, None) => break,
                    (Some(x), Some(y)) => x.min(y),
                    (Some(x), None) | (None, Some(x)) => x,
                };
                let va = if ca == Some(col) { i += 1; a[i - 1].1.clone() } else { self.field.zero() };
                let vb = if cb == Some(col) { j += 1; b[j - 1].1.clone() } else { self.field.zero() };
                if va != vb {
                    return Some(EntryDifference { row: r, col, left: va, right: vb });
                }
            }
        }
        None
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}
