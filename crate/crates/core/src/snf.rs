//! Smith normal form over a Euclidean [`Ring`], with a replayable certificate.
//!
//! The reduction logs every elementary row and column operation it performs.
//! `U` and `V` are the products of the logged operations, so they are
//! unimodular as long as every logged operation is; [`SmithForm::certify`]
//! checks that and replays the log against the input to confirm `U·A·V = D`
//! and the divisibility chain of `D`.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::matrix::{axpy, SparseMatrix};
use crate::ring::Ring;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SnfError {
    #[error("Smith form certificate rejected: {0}")]
    Certificate(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum ElementaryOp<R> {
    Swap(usize, usize),
    /// `line[target] += factor * line[source]`
    AddMultiple { target: usize, source: usize, factor: R },
    /// `line[index] *= unit`
    Scale { index: usize, unit: R },
}

#[derive(Clone, Debug)]
pub struct SmithForm<R> {
    rows: usize,
    cols: usize,
    /// Nonzero diagonal entries `d_1 | d_2 | ...` of `D`.
    pub invariant_factors: Vec<R>,
    row_ops: Vec<ElementaryOp<R>>,
    col_ops: Vec<ElementaryOp<R>>,
}

impl<R: Ring> SmithForm<R> {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    /// Invariant factors that are not units.
    pub fn torsion(&self) -> Vec<R> {
        self.invariant_factors.iter().filter(|d| !d.is_unit()).cloned().collect()
    }

    pub fn row_ops(&self) -> &[ElementaryOp<R>] {
        &self.row_ops
    }

    pub fn col_ops(&self) -> &[ElementaryOp<R>] {
        &self.col_ops
    }

    /// `D` as a sparse matrix.
    pub fn diagonal(&self) -> SparseMatrix<R> {
        SparseMatrix::from_triplets(
            self.rows,
            self.cols,
            self.invariant_factors.iter().enumerate().map(|(i, d)| (i, i, d.clone())).collect::<Vec<_>>(),
        )
    }

    /// Explicit transforms `(U, V)` with `U·A·V = D`.
    pub fn transforms(&self) -> (SparseMatrix<R>, SparseMatrix<R>) {
        let mut u = SparseMatrix::identity(self.rows).into_rows();
        apply_ops(&mut u, &self.row_ops).expect("logged operations are valid");
        // column operations on V are row operations on its transpose
        let mut vt = SparseMatrix::identity(self.cols).into_rows();
        apply_ops(&mut vt, &self.col_ops).expect("logged operations are valid");
        (
            SparseMatrix::from_rows(self.rows, self.rows, u),
            SparseMatrix::from_rows(self.cols, self.cols, vt).transpose(),
        )
    }

    /// Replays the operation log on `a` and checks the result is `D`.
    pub fn certify(&self, a: &SparseMatrix<R>) -> Result<(), SnfError> {
        if a.rows() != self.rows || a.cols() != self.cols {
            return Err(SnfError::Certificate("shape differs from the input".into()));
        }
        let mut rows = a.clone().into_rows();
        apply_ops(&mut rows, &self.row_ops)?;
        let mut cols = SparseMatrix::from_rows(self.rows, self.cols, rows).transpose().into_rows();
        apply_ops(&mut cols, &self.col_ops)?;
        for (j, col) in cols.iter().enumerate() {
            let ok = match self.invariant_factors.get(j) {
                Some(d) => col.len() == 1 && col[0].0 == j && &col[0].1 == d,
                None => col.is_empty(),
            };
            if !ok {
                return Err(SnfError::Certificate(format!("column {j} of U·A·V is not diagonal")));
            }
        }
        for w in self.invariant_factors.windows(2) {
            if !w[0].is_divisor_of(&w[1]) {
                return Err(SnfError::Certificate(format!("{} does not divide {}", w[0], w[1])));
            }
        }
        Ok(())
    }
}

fn apply_ops<R: Ring>(lines: &mut [Vec<(usize, R)>], ops: &[ElementaryOp<R>]) -> Result<(), SnfError> {
    for op in ops {
        match op {
            ElementaryOp::Swap(i, j) => lines.swap(*i, *j),
            ElementaryOp::AddMultiple { target, source, factor } => {
                if target == source {
                    return Err(SnfError::Certificate("adding a multiple of a line to itself".into()));
                }
                lines[*target] = axpy(&lines[*target], factor, &lines[*source]);
            }
            ElementaryOp::Scale { index, unit } => {
                if !unit.is_unit() {
                    return Err(SnfError::Certificate(format!("scaling by non-unit {unit}")));
                }
                for e in &mut lines[*index] {
                    e.1 = e.1.clone() * unit.clone();
                }
            }
        }
    }
    Ok(())
}

/// Computes and certifies the Smith normal form of `a`.
pub fn smith_normal_form<R: Ring>(a: &SparseMatrix<R>) -> Result<SmithForm<R>, SnfError> {
    let snf = reduce(a);
    snf.certify(a)?;
    Ok(snf)
}

fn reduce<R: Ring>(a: &SparseMatrix<R>) -> SmithForm<R> {
    let (m, n) = (a.rows(), a.cols());
    let mut rows = a.clone().into_rows();
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for (i, r) in rows.iter().enumerate() {
        for (j, _) in r {
            col_rows[*j].insert(i);
        }
    }
    let mut row_ops = Vec::new();
    let mut col_ops = Vec::new();
    let mut row_done = vec![false; m];
    let mut pivots: Vec<(usize, usize, R)> = Vec::new();

    // sparse elimination on unit pivots, Markowitz order
    loop {
        let mut best: Option<(usize, usize, usize)> = None;
        'scan: for i in 0..m {
            if row_done[i] || rows[i].is_empty() {
                continue;
            }
            let rl = rows[i].len() - 1;
            for (j, v) in &rows[i] {
                if v.is_unit() {
                    let cost = rl * (col_rows[*j].len() - 1);
                    if best.is_none_or(|b| cost < b.0) {
                        best = Some((cost, i, *j));
                        if cost == 0 {
                            break 'scan;
                        }
                    }
                }
            }
        }
        let Some((_, p, q)) = best else { break };
        let u = rows[p].iter().find(|e| e.0 == q).unwrap().1.clone();
        let uinv = u.inverse().expect("pivot is a unit");
        let others: Vec<usize> = col_rows[q].iter().copied().filter(|&i| i != p).collect();
        for i in others {
            let aiq = rows[i].iter().find(|e| e.0 == q).unwrap().1.clone();
            let f = -(aiq * uinv.clone());
            for (j, _) in &rows[i] {
                col_rows[*j].remove(&i);
            }
            rows[i] = axpy(&rows[i], &f, &rows[p]);
            for (j, _) in &rows[i] {
                col_rows[*j].insert(i);
            }
            row_ops.push(ElementaryOp::AddMultiple { target: i, source: p, factor: f });
        }
        for (k, apk) in &rows[p] {
            if *k != q {
                col_ops.push(ElementaryOp::AddMultiple {
                    target: *k,
                    source: q,
                    factor: -(apk.clone() * uinv.clone()),
                });
                col_rows[*k].remove(&p);
            }
        }
        rows[p] = vec![(q, u.clone())];
        row_done[p] = true;
        pivots.push((p, q, u));
    }

    // dense Euclidean reduction of whatever is left
    let rmap: Vec<usize> = (0..m).filter(|&i| !row_done[i] && !rows[i].is_empty()).collect();
    let cset: BTreeSet<usize> = rmap.iter().flat_map(|&i| rows[i].iter().map(|e| e.0)).collect();
    let cmap: Vec<usize> = cset.into_iter().collect();
    if !rmap.is_empty() {
        let mut d: Vec<Vec<R>> = vec![vec![R::zero(); cmap.len()]; rmap.len()];
        for (di, &i) in rmap.iter().enumerate() {
            for (j, v) in &rows[i] {
                let dj = cmap.binary_search(j).unwrap();
                d[di][dj] = v.clone();
            }
        }
        for (t, dv) in dense_reduce(&mut d, &rmap, &cmap, &mut row_ops, &mut col_ops).into_iter().enumerate() {
            pivots.push((rmap[t], cmap[t], dv));
        }
    }

    // move pivots onto the diagonal
    let mut row_at: Vec<usize> = (0..m).collect();
    let mut row_where: Vec<usize> = (0..m).collect();
    let mut col_at: Vec<usize> = (0..n).collect();
    let mut col_where: Vec<usize> = (0..n).collect();
    for (t, (p, q, _)) in pivots.iter().enumerate() {
        let cur = row_where[*p];
        if cur != t {
            row_ops.push(ElementaryOp::Swap(t, cur));
            let (a_, b_) = (row_at[t], row_at[cur]);
            row_at.swap(t, cur);
            row_where[a_] = cur;
            row_where[b_] = t;
        }
        let cur = col_where[*q];
        if cur != t {
            col_ops.push(ElementaryOp::Swap(t, cur));
            let (a_, b_) = (col_at[t], col_at[cur]);
            col_at.swap(t, cur);
            col_where[a_] = cur;
            col_where[b_] = t;
        }
    }
    let mut invariant_factors = Vec::with_capacity(pivots.len());
    for (t, (_, _, dv)) in pivots.into_iter().enumerate() {
        let u = dv.canonical_unit();
        if u.is_one() {
            invariant_factors.push(dv);
        } else {
            invariant_factors.push(u.clone() * dv);
            row_ops.push(ElementaryOp::Scale { index: t, unit: u });
        }
    }
    SmithForm { rows: m, cols: n, invariant_factors, row_ops, col_ops }
}

/// Reduces `d` in place to Smith form, logging operations in the global
/// indices `rmap`/`cmap`. Returns the diagonal.
fn dense_reduce<R: Ring>(
    d: &mut [Vec<R>],
    rmap: &[usize],
    cmap: &[usize],
    row_ops: &mut Vec<ElementaryOp<R>>,
    col_ops: &mut Vec<ElementaryOp<R>>,
) -> Vec<R> {
    let (dm, dn) = (d.len(), d[0].len());
    let mut diag = Vec::new();
    let swap_rows = |d: &mut [Vec<R>], ops: &mut Vec<ElementaryOp<R>>, a: usize, b: usize| {
        if a != b {
            d.swap(a, b);
            ops.push(ElementaryOp::Swap(rmap[a], rmap[b]));
        }
    };
    let swap_cols = |d: &mut [Vec<R>], ops: &mut Vec<ElementaryOp<R>>, a: usize, b: usize| {
        if a != b {
            for row in d.iter_mut() {
                row.swap(a, b);
            }
            ops.push(ElementaryOp::Swap(cmap[a], cmap[b]));
        }
    };
    for t in 0..dm.min(dn) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..dm {
            for j in t..dn {
                if !d[i][j].is_zero() && best.is_none_or(|(bi, bj)| d[i][j].norm() < d[bi][bj].norm()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        swap_rows(d, row_ops, t, pi);
        swap_cols(d, col_ops, t, pj);
        loop {
            // clear column t below the pivot
            for i in t + 1..dm {
                if !d[i][t].is_zero() {
                    let (q, _) = d[i][t].div_rem(&d[t][t]);
                    if !q.is_zero() {
                        let f = -q;
                        for j in t..dn {
                            d[i][j] = d[i][j].clone() + f.clone() * d[t][j].clone();
                        }
                        row_ops.push(ElementaryOp::AddMultiple { target: rmap[i], source: rmap[t], factor: f });
                    }
                }
            }
            if let Some(i) = (t + 1..dm).filter(|&i| !d[i][t].is_zero()).min_by_key(|&i| d[i][t].norm()) {
                swap_rows(d, row_ops, t, i);
                continue;
            }
            // clear row t right of the pivot
            for j in t + 1..dn {
                if !d[t][j].is_zero() {
                    let (q, _) = d[t][j].div_rem(&d[t][t]);
                    if !q.is_zero() {
                        let f = -q;
                        for row in d.iter_mut().skip(t) {
                            row[j] = row[j].clone() + f.clone() * row[t].clone();
                        }
                        col_ops.push(ElementaryOp::AddMultiple { target: cmap[j], source: cmap[t], factor: f });
                    }
                }
            }
            if let Some(j) = (t + 1..dn).filter(|&j| !d[t][j].is_zero()).min_by_key(|&j| d[t][j].norm()) {
                swap_cols(d, col_ops, t, j);
                continue;
            }
            // pivot must divide the rest of the block
            let bad = (t + 1..dm).find(|&i| (t + 1..dn).any(|j| !d[t][t].is_divisor_of(&d[i][j])));
            if let Some(i) = bad {
                for j in t..dn {
                    d[t][j] = d[t][j].clone() + d[i][j].clone();
                }
                row_ops.push(ElementaryOp::AddMultiple { target: rmap[t], source: rmap[i], factor: R::one() });
                continue;
            }
            break;
        }
        diag.push(d[t][t].clone());
    }
    diag
}
