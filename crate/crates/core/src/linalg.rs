//! Dense matrices over a [`Field`] and a sparse incremental echelon form
//! used to count solutions of homogeneous linear systems.

use std::collections::BTreeMap;

use crate::field::Field;

/// Row-major dense matrix. Shapes may be degenerate (`0 x n`, `n x 0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_rows(rows: usize, cols: usize, data: Vec<E>) -> Self {
        assert_eq!(rows * cols, data.len(), "matrix data has the wrong length");
        Self { rows, cols, data }
    }

    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Self { rows, cols, data: vec![value; rows * cols] }
    }

    pub fn zeros<F: Field<Elem = E>>(field: &F, rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, field.zero())
    }

    pub fn identity<F: Field<Elem = E>>(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
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

    pub fn data(&self) -> &[E] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[E] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<E> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self[(r, c)].clone());
            }
        }
        Self { rows: self.cols, cols: self.rows, data }
    }

    pub fn mul<F: Field<Elem = E>>(&self, field: &F, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "incompatible shapes for product");
        let mut out = Self::zeros(field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if field.is_zero(a) {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = field.mul(a, &rhs[(k, j)]);
                    out[(i, j)] = field.add(&out[(i, j)], &prod);
                }
            }
        }
        out
    }

    pub fn apply<F: Field<Elem = E>>(&self, field: &F, v: &[E]) -> Vec<E> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(field.zero(), |acc, (a, b)| field.add(&acc, &field.mul(a, b)))
            })
            .collect()
    }

    pub fn add<F: Field<Elem = E>>(&self, field: &F, rhs: &Self) -> Self {
        assert_eq!(self.shape(), rhs.shape());
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| field.add(a, b)).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale<F: Field<Elem = E>>(&self, field: &F, s: &E) -> Self {
        let data = self.data.iter().map(|a| field.mul(a, s)).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn is_zero<F: Field<Elem = E>>(&self, field: &F) -> bool {
        self.data.iter().all(|a| field.is_zero(a))
    }

    /// Block-diagonal sum.
    pub fn direct_sum<F: Field<Elem = E>>(field: &F, blocks: &[&Self]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out[(r0 + r, c0 + c)] = b[(r, c)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Row-reduced echelon form; returns the reduced matrix and its pivot
    /// columns.
    pub fn rref<F: Field<Elem = E>>(&self, field: &F) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !field.is_zero(&m[(r, col)])) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = field.inv(&m[(row, col)]).expect("pivot is non-zero");
            for c in col..m.cols {
                m[(row, c)] = field.mul(&m[(row, c)], &inv);
            }
            for r in 0..m.rows {
                if r == row || field.is_zero(&m[(r, col)]) {
                    continue;
                }
                let factor = m[(r, col)].clone();
                for c in col..m.cols {
                    let t = field.mul(&factor, &m[(row, c)]);
                    m[(r, c)] = field.sub(&m[(r, c)], &t);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank<F: Field<Elem = E>>(&self, field: &F) -> usize {
        self.rref(field).1.len()
    }

    pub fn inverse<F: Field<Elem = E>>(&self, field: &F) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let mut aug = Self::zeros(field, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, n + r)] = field.one();
        }
        let (red, pivots) = aug.rref(field);
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut out = Self::zeros(field, n, n);
        for r in 0..n {
            for c in 0..n {
                out[(r, c)] = red[(r, n + c)].clone();
            }
        }
        Some(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl<E> std::ops::Index<(usize, usize)> for Matrix<E> {
    type Output = E;
    fn index(&self, (r, c): (usize, usize)) -> &E {
        assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl<E> std::ops::IndexMut<(usize, usize)> for Matrix<E> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut E {
        assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

/// Incremental echelon basis of a row space with sparse rows.
///
/// Rows are inserted one at a time and reduced against the pivots seen so
/// far; the number of stored rows is the rank of everything inserted. The
/// systems built for intertwiners have a handful of non-zeros per equation,
/// which keeps fill-in small.
#[derive(Debug, Clone)]
pub struct SparseEchelon<F: Field> {
    field: F,
    columns: usize,
    /// leading column -> monic row with that leading column
    pivots: BTreeMap<usize, Vec<(usize, F::Elem)>>,
}

impl<F: Field> SparseEchelon<F> {
    pub fn new(field: F, columns: usize) -> Self {
        Self { field, columns, pivots: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Dimension of the solution space of the inserted homogeneous system.
    pub fn nullity(&self) -> usize {
        self.columns - self.pivots.len()
    }

    /// Inserts a row given as `(column, coefficient)` pairs, in any order and
    /// possibly with repeated columns. Returns whether the rank grew.
    pub fn insert(&mut self, entries: impl IntoIterator<Item = (usize, F::Elem)>) -> bool {
        let mut acc: BTreeMap<usize, F::Elem> = BTreeMap::new();
        for (c, v) in entries {
            assert!(c < self.columns, "column {c} out of range");
            let slot = acc.entry(c).or_insert_with(|| self.field.zero());
            *slot = self.field.add(slot, &v);
        }
        let mut row: Vec<(usize, F::Elem)> =
            acc.into_iter().filter(|(_, v)| !self.field.is_zero(v)).collect();
        while let Some((lead, coeff)) = row.first().cloned() {
            match self.pivots.get(&lead) {
                Some(pivot) => row = self.axpy(&row, &coeff, pivot),
                None => {
                    let inv = self.field.inv(&coeff).expect("leading entry is non-zero");
                    let monic = row.into_iter().map(|(c, v)| (c, self.field.mul(&v, &inv))).collect();
                    self.pivots.insert(lead, monic);
                    return true;
                }
            }
        }
        false
    }

    /// `row - coeff * pivot`, both sorted by column.
    fn axpy(
        &self,
        row: &[(usize, F::Elem)],
        coeff: &F::Elem,
        pivot: &[(usize, F::Elem)],
    ) -> Vec<(usize, F::Elem)> {
        let f = &self.field;
        let mut out = Vec::with_capacity(row.len() + pivot.len());
        let (mut i, mut j) = (0, 0);
        while i < row.len() || j < pivot.len() {
            let take_row = j >= pivot.len() || (i < row.len() && row[i].0 < pivot[j].0);
            let take_piv = i >= row.len() || (j < pivot.len() && pivot[j].0 < row[i].0);
            if take_row {
                out.push(row[i].clone());
                i += 1;
            } else if take_piv {
                out.push((pivot[j].0, f.neg(&f.mul(coeff, &pivot[j].1))));
                j += 1;
            } else {
                let v = f.sub(&row[i].1, &f.mul(coeff, &pivot[j].1));
                if !f.is_zero(&v) {
                    out.push((row[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        out
    }
}
