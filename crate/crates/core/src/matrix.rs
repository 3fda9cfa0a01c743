//! Row-major sparse matrices over a [`Ring`].

use std::fmt;

use crate::ring::Ring;

#[derive(Clone, PartialEq)]
pub struct SparseMatrix<R> {
    rows: usize,
    cols: usize,
    // sorted by column, no stored zeros
    data: Vec<Vec<(usize, R)>>,
}

impl<R: Ring> SparseMatrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].push((i, R::one()));
        }
        m
    }

    /// Sums duplicate entries.
    pub fn from_triplets(rows: usize, cols: usize, entries: impl IntoIterator<Item = (usize, usize, R)>) -> Self {
        let mut data: Vec<Vec<(usize, R)>> = vec![Vec::new(); rows];
        for (r, c, v) in entries {
            assert!(r < rows && c < cols, "entry ({r},{c}) outside {rows}x{cols}");
            data[r].push((c, v));
        }
        for row in &mut data {
            row.sort_by_key(|e| e.0);
            let mut merged: Vec<(usize, R)> = Vec::with_capacity(row.len());
            for (c, v) in row.drain(..) {
                match merged.last_mut() {
                    Some(last) if last.0 == c => last.1 = last.1.clone() + v,
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|e| !e.1.is_zero());
            *row = merged;
        }
        SparseMatrix { rows, cols, data }
    }

    pub fn from_dense(rows: Vec<Vec<R>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Self::from_triplets(
            r,
            c,
            rows.into_iter().enumerate().flat_map(|(i, row)| row.into_iter().enumerate().map(move |(j, v)| (i, j, v))),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    pub fn row(&self, i: usize) -> &[(usize, R)] {
        &self.data[i]
    }

    pub(crate) fn into_rows(self) -> Vec<Vec<(usize, R)>> {
        self.data
    }

    pub(crate) fn from_rows(rows: usize, cols: usize, data: Vec<Vec<(usize, R)>>) -> Self {
        SparseMatrix { rows, cols, data }
    }

    pub fn get(&self, i: usize, j: usize) -> R {
        match self.data[i].binary_search_by_key(&j, |e| e.0) {
            Ok(p) => self.data[i][p].1.clone(),
            Err(_) => R::zero(),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &R)> + '_ {
        self.data.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn transpose(&self) -> Self {
        let mut data: Vec<Vec<(usize, R)>> = vec![Vec::new(); self.cols];
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row {
                data[*j].push((i, v.clone()));
            }
        }
        SparseMatrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn mul(&self, other: &SparseMatrix<R>) -> SparseMatrix<R> {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut data = Vec::with_capacity(self.rows);
        let mut acc: Vec<Option<R>> = vec![None; other.cols];
        let mut touched = Vec::new();
        for row in &self.data {
            for (k, a) in row {
                for (j, b) in &other.data[*k] {
                    let p = a.clone() * b.clone();
                    match &mut acc[*j] {
                        Some(v) => *v = v.clone() + p,
                        slot @ None => {
                            *slot = Some(p);
                            touched.push(*j);
                        }
                    }
                }
            }
            touched.sort_unstable();
            let mut out = Vec::with_capacity(touched.len());
            for &j in &touched {
                let v = acc[j].take().unwrap();
                if !v.is_zero() {
                    out.push((j, v));
                }
            }
            touched.clear();
            data.push(out);
        }
        SparseMatrix { rows: self.rows, cols: other.cols, data }
    }

    pub fn scale(&self, s: &R) -> SparseMatrix<R> {
        let entries = self.entries().map(|(i, j, v)| (i, j, v.clone() * s.clone()));
        Self::from_triplets(self.rows, self.cols, entries.collect::<Vec<_>>())
    }

    pub fn to_dense(&self) -> Vec<Vec<R>> {
        let mut out = vec![vec![R::zero(); self.cols]; self.rows];
        for (i, j, v) in self.entries() {
            out[i][j] = v.clone();
        }
        out
    }

    /// Converts entries through `f`, dropping any that become zero.
    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> SparseMatrix<S> {
        SparseMatrix::from_triplets(self.rows, self.cols, self.entries().map(|(i, j, v)| (i, j, f(v))).collect::<Vec<_>>())
    }
}

/// `row_t += f * row_s` on sorted sparse rows.
pub(crate) fn axpy<R: Ring>(target: &[(usize, R)], f: &R, source: &[(usize, R)]) -> Vec<(usize, R)> {
    let mut out = Vec::with_capacity(target.len() + source.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < source.len() {
        let ci = target.get(i).map_or(usize::MAX, |e| e.0);
        let cj = source.get(j).map_or(usize::MAX, |e| e.0);
        if ci < cj {
            out.push(target[i].clone());
            i += 1;
        } else if cj < ci {
            let v = f.clone() * source[j].1.clone();
            if !v.is_zero() {
                out.push((cj, v));
            }
            j += 1;
        } else {
            let v = target[i].1.clone() + f.clone() * source[j].1.clone();
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl<R: Ring> fmt::Debug for SparseMatrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} matrix", self.rows, self.cols)?;
        for row in self.to_dense() {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(" "))?;
        }
        Ok(())
    }
}
