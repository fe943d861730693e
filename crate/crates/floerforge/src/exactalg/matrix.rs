use std::collections::BTreeMap;

use super::scalar::{FieldKind, FieldScalar};

/// Sparse matrix over GF(2) or Q; only nonzero entries are stored.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    kind: FieldKind,
    entries: BTreeMap<(usize, usize), FieldScalar>,
}

/// A sparse column vector, indexed by row.
pub type SparseVec = BTreeMap<usize, FieldScalar>;

impl SparseMatrix {
    pub fn new(kind: FieldKind, rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, kind, entries: BTreeMap::new() }
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldScalar) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        assert_eq!(v.kind(), self.kind, "field mismatch");
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &FieldScalar) {
        let cur = self.get(r, c);
        self.set(r, c, cur.add(v));
    }

    pub fn get(&self, r: usize, c: usize) -> FieldScalar {
        self.entries
            .get(&(r, c))
            .cloned()
            .unwrap_or_else(|| FieldScalar::zero(self.kind))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &FieldScalar)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Applies the matrix to a sparse vector.
    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut out: SparseVec = BTreeMap::new();
        for ((r, c), a) in self.entries.iter() {
            if let Some(x) = v.get(c) {
                let t = a.mul(x);
                if t.is_zero() {
                    continue;
                }
                let cur = out
                    .remove(r)
                    .unwrap_or_else(|| FieldScalar::zero(self.kind))
                    .add(&t);
                if !cur.is_zero() {
                    out.insert(*r, cur);
                }
            }
        }
        out
    }

    /// Rank and a basis of the kernel, by fraction-free-enough Gaussian
    /// elimination on a dense copy. Sizes in this artifact are small, so
    /// clarity wins over asymptotics. rank + nullity = cols always holds.
    pub fn rank_and_kernel(&self) -> (usize, Vec<SparseVec>) {
        let zero = FieldScalar::zero(self.kind);
        let mut m: Vec<Vec<FieldScalar>> = vec![vec![zero.clone(); self.cols]; self.rows];
        for ((r, c), v) in self.entries.iter() {
            m[*r][*c] = v.clone();
        }
        // column operations tracked against the identity, so kernel vectors
        // fall out of the zero columns
        let mut ops: Vec<Vec<FieldScalar>> = (0..self.cols)
            .map(|j| {
                let mut col = vec![zero.clone(); self.cols];
                col[j] = FieldScalar::one(self.kind);
                col
            })
            .collect();
        let mut rank = 0usize;
        let mut pivot_rows: Vec<usize> = Vec::new();
        for col in 0..self.cols {
            // find a pivot row not yet used
            let mut pivot = None;
            for r in 0..self.rows {
                if pivot_rows.contains(&r) {
                    continue;
                }
                if !m[r][col].is_zero() {
                    pivot = Some(r);
                    break;
                }
            }
            let Some(pr) = pivot else { continue };
            pivot_rows.push(pr);
            rank += 1;
            let inv = m[pr][col].inv();
            // clear the pivot row to the right
            for j in (col + 1)..self.cols {
                if m[pr][j].is_zero() {
                    continue;
                }
                let f = m[pr][j].mul(&inv);
                for r in 0..self.rows {
                    let t = m[r][col].mul(&f);
                    m[r][j] = m[r][j].sub(&t);
                }
                for r in 0..self.cols {
                    let t = ops[col][r].mul(&f);
                    ops[j][r] = ops[j][r].sub(&t);
                }
            }
        }
        let mut kernel = Vec::new();
        for col in 0..self.cols {
            let col_zero = (0..self.rows).all(|r| m[r][col].is_zero());
            if col_zero {
                let mut v: SparseVec = BTreeMap::new();
                for (r, x) in ops[col].iter().enumerate() {
                    if !x.is_zero() {
                        v.insert(r, x.clone());
                    }
                }
                kernel.push(v);
            }
        }
        debug_assert_eq!(rank + kernel.len(), self.cols);
        (rank, kernel)
    }
}
