//! Sparse exact linear algebra over the rationals.
//!
//! Rows are ordered maps from column index to a nonzero rational, so
//! elimination only touches stored entries and every result (rank, kernel,
//! solution) is exact. Pivot choice is deterministic: smallest leading
//! column first, ties broken by fewest stored entries and then input order,
//! which makes all downstream reports byte-reproducible.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{internal, TfResult};
use crate::scalar::{q1, Q};

/// A sparse row: column index to nonzero coefficient.
pub type SparseRow = BTreeMap<usize, Q>;

/// Sparse rational matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SparseMat {
    cols: usize,
    rows: Vec<SparseRow>,
}

impl SparseMat {
    /// Empty matrix with a fixed column count.
    pub fn new(cols: usize) -> Self {
        SparseMat { cols, rows: Vec::new() }
    }

    /// Matrix from dense rows (zeros dropped).
    pub fn from_dense(rows: &[Vec<Q>], cols: usize) -> Self {
        let mut m = SparseMat::new(cols);
        for r in rows {
            m.push_dense_row(r);
        }
        m
    }

    /// Append a dense row, dropping zero entries.
    pub fn push_dense_row(&mut self, row: &[Q]) {
        debug_assert_eq!(row.len(), self.cols);
        let sparse: SparseRow = row
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(j, v)| (j, v.clone()))
            .collect();
        self.rows.push(sparse);
    }

    /// Append an already-sparse row (caller guarantees nonzero entries).
    pub fn push_row(&mut self, row: SparseRow) {
        debug_assert!(row.keys().all(|&j| j < self.cols));
        debug_assert!(row.values().all(|v| !v.is_zero()));
        self.rows.push(row);
    }

    /// Number of stored rows.
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    /// Number of columns.
    pub fn ncols(&self) -> usize {
        self.cols
    }

    /// Borrow the stored rows.
    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    /// Entry accessor (zero when absent).
    pub fn get(&self, i: usize, j: usize) -> Q {
        self.rows[i].get(&j).cloned().unwrap_or_else(Q::zero)
    }

    /// Transposed copy.
    pub fn transpose(&self) -> SparseMat {
        let mut out = SparseMat::new(self.rows.len());
        let mut cols: Vec<SparseRow> = vec![SparseRow::new(); self.cols];
        for (i, row) in self.rows.iter().enumerate() {
            for (&j, v) in row {
                cols[j].insert(i, v.clone());
            }
        }
        out.rows = cols;
        out
    }

    /// Matrix–vector product (dense vector in, dense vector out).
    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        debug_assert_eq!(v.len(), self.cols);
        self.rows
            .iter()
            .map(|row| {
                let mut acc = Q::zero();
                for (&j, c) in row {
                    if !v[j].is_zero() {
                        acc += c * &v[j];
                    }
                }
                acc
            })
            .collect()
    }

    /// Rank via sparse elimination.
    pub fn rank(&self) -> usize {
        let mut t = SpanTracker::new(self.cols);
        for row in &self.rows {
            t.insert_sparse(row.clone());
        }
        t.rank()
    }

    /// Basis of the right kernel `{v : M v = 0}`, one dense vector per free
    /// column of the reduced echelon form, in ascending free-column order.
    pub fn kernel_basis(&self) -> Vec<Vec<Q>> {
        let mut t = SpanTracker::new(self.cols);
        for row in &self.rows {
            t.insert_sparse(row.clone());
        }
        let pivots: Vec<usize> = t.pivot_columns();
        let mut basis = Vec::new();
        for f in 0..self.cols {
            if pivots.binary_search(&f).is_ok() {
                continue;
            }
            let mut v = vec![Q::zero(); self.cols];
            v[f] = q1();
            for row in t.rows() {
                let (&p, _) = row.iter().next().expect("echelon rows are nonzero");
                if let Some(c) = row.get(&f) {
                    v[p] = -c.clone();
                }
            }
            basis.push(v);
        }
        basis
    }

    /// One exact solution of `M x = b`, or `None` when the system is
    /// inconsistent. Free variables are set to zero, so the answer is
    /// deterministic.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        debug_assert_eq!(b.len(), self.rows.len());
        // eliminate on rows augmented with the right-hand side
        let mut t = SpanTracker::new(self.cols + 1);
        for (i, row) in self.rows.iter().enumerate() {
            let mut aug = row.clone();
            if !b[i].is_zero() {
                aug.insert(self.cols, b[i].clone());
            }
            t.insert_sparse(aug);
        }
        let mut x = vec![Q::zero(); self.cols];
        for row in t.rows() {
            let (&p, _) = row.iter().next().expect("echelon rows are nonzero");
            if p == self.cols {
                return None; // pivot in the augmented column: inconsistent
            }
            if let Some(c) = row.get(&self.cols) {
                x[p] = c.clone();
            }
        }
        Some(x)
    }
}

/// Incrementally maintained row space in reduced echelon form (pivots
/// normalized to 1, each pivot column cleared in all other rows). Used for
/// rank counting, membership tests, canonical residues, and greedy basis
/// extension.
#[derive(Clone, Debug, Default)]
pub struct SpanTracker {
    cols: usize,
    // rows sorted by pivot column; invariant: reduced echelon form
    rows: Vec<SparseRow>,
}

impl SpanTracker {
    /// Empty span inside a space with `cols` coordinates.
    pub fn new(cols: usize) -> Self {
        SpanTracker { cols, rows: Vec::new() }
    }

    /// Ambient coordinate count.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Current rank.
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Echelon rows (sorted by pivot column).
    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    /// Pivot columns in ascending order.
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.rows
            .iter()
            .map(|r| *r.iter().next().expect("echelon rows are nonzero").0)
            .collect()
    }

    /// Reduce a sparse vector against the current rows; the result has no
    /// support on pivot columns and is the canonical residue of the vector
    /// modulo the span.
    pub fn reduce_sparse(&self, mut v: SparseRow) -> SparseRow {
        for row in &self.rows {
            let (&p, _) = row.iter().next().expect("echelon rows are nonzero");
            let Some(c) = v.get(&p).cloned() else { continue };
            // v -= c * row  (row has pivot coefficient 1)
            for (&j, w) in row {
                let entry = v.entry(j).or_insert_with(Q::zero);
                *entry -= &c * w;
                if entry.is_zero() {
                    v.remove(&j);
                }
            }
        }
        v
    }

    /// Dense-vector variant of [`reduce_sparse`].
    pub fn reduce(&self, v: &[Q]) -> Vec<Q> {
        let sparse = dense_to_sparse(v);
        sparse_to_dense(&self.reduce_sparse(sparse), self.cols)
    }

    /// Insert a vector; returns `true` when it enlarged the span.
    pub fn insert_sparse(&mut self, v: SparseRow) -> bool {
        let mut r = self.reduce_sparse(v);
        let Some(&p) = r.keys().next() else {
            return false;
        };
        // normalize the new pivot to 1
        let lead = r.get(&p).cloned().expect("leading entry present");
        for w in r.values_mut() {
            *w /= &lead;
        }
        // clear the new pivot column from existing rows to stay reduced
        for row in &mut self.rows {
            let Some(c) = row.get(&p).cloned() else { continue };
            for (&j, w) in &r {
                let entry = row.entry(j).or_insert_with(Q::zero);
                *entry -= &c * w;
                if entry.is_zero() {
                    row.remove(&j);
                }
            }
        }
        let at = self
            .rows
            .partition_point(|row| *row.iter().next().expect("nonzero").0 < p);
        self.rows.insert(at, r);
        true
    }

    /// Dense-vector variant of [`insert_sparse`].
    pub fn insert(&mut self, v: &[Q]) -> bool {
        debug_assert_eq!(v.len(), self.cols);
        self.insert_sparse(dense_to_sparse(v))
    }

    /// Membership test for the row span.
    pub fn contains(&self, v: &[Q]) -> bool {
        self.reduce_sparse(dense_to_sparse(v)).is_empty()
    }
}

/// Dense to sparse conversion, dropping zeros.
pub fn dense_to_sparse(v: &[Q]) -> SparseRow {
    v.iter()
        .enumerate()
        .filter(|(_, w)| !w.is_zero())
        .map(|(j, w)| (j, w.clone()))
        .collect()
}

/// Sparse to dense conversion.
pub fn sparse_to_dense(v: &SparseRow, cols: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); cols];
    for (&j, w) in v {
        out[j] = w.clone();
    }
    out
}

/// Express `target` as a linear combination of `basis` vectors (returned as
/// the coefficient vector), or `None` when it lies outside their span.
pub fn express_in_span(basis: &[Vec<Q>], target: &[Q]) -> Option<Vec<Q>> {
    let dim = target.len();
    let mut m = SparseMat::new(basis.len());
    for i in 0..dim {
        let row: SparseRow = basis
            .iter()
            .enumerate()
            .filter(|(_, b)| !b[i].is_zero())
            .map(|(k, b)| (k, b[i].clone()))
            .collect();
        m.push_row(row);
    }
    let b: Vec<Q> = target.to_vec();
    m.solve(&b)
}

/// Greedy complement: indices of `candidates` that extend the span of `sub`
/// to a larger space, taken in order. The returned indices give a basis of a
/// complement of `span(sub)` inside `span(sub ∪ candidates)`.
pub fn complement_indices(sub: &[Vec<Q>], candidates: &[Vec<Q>], cols: usize) -> Vec<usize> {
    let mut t = SpanTracker::new(cols);
    for v in sub {
        t.insert(v);
    }
    let mut picked = Vec::new();
    for (i, c) in candidates.iter().enumerate() {
        if t.insert(c) {
            picked.push(i);
        }
    }
    picked
}

/// Identity-checked dimensions: assert `rank + nullity == cols` for a
/// matrix; used as a cheap internal consistency probe by callers.
pub fn check_rank_nullity(m: &SparseMat) -> TfResult<()> {
    let r = m.rank();
    let k = m.kernel_basis().len();
    if r + k != m.ncols() {
        return Err(internal(format!(
            "rank {} + nullity {} != {} columns",
            r,
            k,
            m.ncols()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;

    fn dense(rows: &[&[i64]]) -> SparseMat {
        let cols = rows.first().map(|r| r.len()).unwrap_or(0);
        let rows: Vec<Vec<Q>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| qi(x)).collect())
            .collect();
        SparseMat::from_dense(&rows, cols)
    }

    #[test]
    fn rank_and_kernel_of_dependent_rows() {
        // [[1,1],[2,2]] has rank 1 and kernel spanned by (1,-1)
        let m = dense(&[&[1, 1], &[2, 2]]);
        assert_eq!(m.rank(), 1);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        let v = &k[0];
        // canonical kernel vector: free column 1 set to 1 → (-1, 1), a
        // scalar multiple of (1,-1)
        assert_eq!(v[0], -v[1].clone());
        assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn solve_finds_solutions_and_detects_inconsistency() {
        let m = dense(&[&[1, 2], &[3, 4]]);
        let x = m.solve(&[qi(5), qi(11)]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![qi(5), qi(11)]);

        let singular = dense(&[&[1, 1], &[2, 2]]);
        assert!(singular.solve(&[qi(1), qi(3)]).is_none());
        let consistent = singular.solve(&[qi(1), qi(2)]).unwrap();
        assert_eq!(singular.mul_vec(&consistent), vec![qi(1), qi(2)]);
    }

    #[test]
    fn tracker_reduces_and_extends() {
        let mut t = SpanTracker::new(3);
        assert!(t.insert(&[qi(1), qi(1), qi(0)]));
        assert!(t.insert(&[qi(0), qi(1), qi(1)]));
        assert!(!t.insert(&[qi(1), qi(2), qi(1)]));
        assert!(t.contains(&[qi(2), qi(3), qi(1)]));
        assert!(!t.contains(&[qi(0), qi(0), qi(1)]));
        assert_eq!(t.rank(), 2);
        // residues are canonical: repeated reduction is idempotent
        let r = t.reduce(&[qi(5), qi(7), qi(1)]);
        assert_eq!(t.reduce(&r), r);
    }

    #[test]
    fn express_in_span_solves_column_systems() {
        let basis = vec![
            vec![qi(1), qi(0), qi(1)],
            vec![qi(0), qi(1), qi(1)],
        ];
        let c = express_in_span(&basis, &[qi(2), qi(3), qi(5)]).unwrap();
        assert_eq!(c, vec![qi(2), qi(3)]);
        assert!(express_in_span(&basis, &[qi(0), qi(0), qi(1)]).is_none());
    }

    #[test]
    fn complement_extends_greedily() {
        let sub = vec![vec![qi(1), qi(1), qi(0)]];
        let cand = vec![
            vec![qi(2), qi(2), qi(0)], // dependent
            vec![qi(1), qi(0), qi(0)],
            vec![qi(0), qi(1), qi(0)], // dependent on previous two
            vec![qi(0), qi(0), qi(7)],
        ];
        assert_eq!(complement_indices(&sub, &cand, 3), vec![1, 3]);
    }
}
