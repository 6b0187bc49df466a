//! Sparse row elimination producing the same Howell bases as the dense path.
//!
//! Rows are sorted `(column, value)` lists. Pending rows sit in buckets keyed
//! by their leading column, so a sweep over the columns only ever touches rows
//! that actually start there.

use super::howell::{CanonicalBasis, Pivot};
use super::{Mat, RingSpec};

pub type SparseVec = Vec<(u32, u32)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMat {
    ring: RingSpec,
    cols: usize,
    rows: Vec<SparseVec>,
}

impl SparseMat {
    pub fn new(ring: RingSpec, cols: usize) -> Self {
        SparseMat { ring, cols, rows: Vec::new() }
    }

    pub fn from_dense(m: &Mat) -> Self {
        let rows = (0..m.rows()).map(|i| dense_to_sparse(m.row(i))).collect();
        SparseMat { ring: m.ring(), cols: m.cols(), rows }
    }

    pub fn to_dense(&self) -> Mat {
        let mut m = Mat::zeros(self.ring, self.rows.len(), self.cols);
        for (i, r) in self.rows.iter().enumerate() {
            for &(c, v) in r {
                m.set(i, c as usize, v);
            }
        }
        m
    }

    /// Appends a row given as unsorted `(column, value)` pairs; values are
    /// reduced and repeated columns summed.
    pub fn push_entries(&mut self, entries: &[(usize, i64)]) {
        let mut es: Vec<(u32, i64)> = entries.iter().map(|&(c, v)| (c as u32, v)).collect();
        es.sort_unstable_by_key(|e| e.0);
        let mut row: SparseVec = Vec::with_capacity(es.len());
        for (c, v) in es {
            assert!((c as usize) < self.cols, "column out of range");
            let v = self.ring.reduce(v);
            match row.last_mut() {
                Some(last) if last.0 == c => last.1 = self.ring.add(last.1, v),
                _ => row.push((c, v)),
            }
        }
        row.retain(|e| e.1 != 0);
        self.rows.push(row);
    }

    pub fn push_row(&mut self, row: SparseVec) {
        debug_assert!(row.windows(2).all(|w| w[0].0 < w[1].0));
        self.rows.push(row);
    }

    pub fn push_dense(&mut self, row: &[u32]) {
        assert_eq!(row.len(), self.cols);
        self.rows.push(dense_to_sparse(row));
    }

    pub fn extend(&mut self, other: &SparseMat) {
        assert_eq!(self.cols, other.cols);
        self.rows.extend(other.rows.iter().cloned());
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &SparseVec {
        &self.rows[i]
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Renames column `c` to `perm[c]`.
    pub fn permute_cols(&self, perm: &[usize]) -> SparseMat {
        assert_eq!(perm.len(), self.cols);
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut nr: SparseVec = r.iter().map(|&(c, v)| (perm[c as usize] as u32, v)).collect();
                nr.sort_unstable_by_key(|e| e.0);
                nr
            })
            .collect();
        SparseMat { ring: self.ring, cols: self.cols, rows }
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &SparseMat) -> SparseMat {
        assert_eq!(self.cols, other.rows.len(), "dimension mismatch in product");
        let q = self.ring.modulus() as u64;
        let mut acc = vec![0u64; other.cols];
        let mut touched: Vec<u32> = Vec::new();
        let mut rows = Vec::with_capacity(self.rows.len());
        for r in &self.rows {
            for &(k, a) in r {
                for &(c, b) in &other.rows[k as usize] {
                    if acc[c as usize] == 0 {
                        touched.push(c);
                    }
                    acc[c as usize] += a as u64 * b as u64;
                }
            }
            touched.sort_unstable();
            let mut row = SparseVec::with_capacity(touched.len());
            for &c in &touched {
                let v = (acc[c as usize] % q) as u32;
                if v != 0 {
                    row.push((c, v));
                }
                acc[c as usize] = 0;
            }
            touched.clear();
            rows.push(row);
        }
        SparseMat { ring: self.ring, cols: other.cols, rows }
    }

    /// `self - I` for a square matrix.
    pub fn sub_identity(&self) -> SparseMat {
        assert_eq!(self.rows.len(), self.cols, "matrix must be square");
        let mut out = SparseMat::new(self.ring, self.cols);
        for (i, r) in self.rows.iter().enumerate() {
            let mut entries: Vec<(usize, i64)> = r.iter().map(|&(c, v)| (c as usize, v as i64)).collect();
            entries.push((i, -1));
            out.push_entries(&entries);
        }
        out
    }

    /// `x * self` for a dense row vector `x`.
    pub fn apply(&self, x: &[u32]) -> Vec<u32> {
        assert_eq!(x.len(), self.rows.len());
        let q = self.ring.modulus() as u64;
        let mut acc = vec![0u64; self.cols];
        for (r, &a) in self.rows.iter().zip(x) {
            if a == 0 {
                continue;
            }
            for &(c, v) in r {
                acc[c as usize] += a as u64 * v as u64;
            }
        }
        acc.into_iter().map(|a| (a % q) as u32).collect()
    }
}

pub fn dense_to_sparse(row: &[u32]) -> SparseVec {
    row.iter().enumerate().filter(|(_, &v)| v != 0).map(|(c, &v)| (c as u32, v)).collect()
}

pub fn sparse_to_dense(row: &SparseVec, n: usize) -> Vec<u32> {
    let mut d = vec![0u32; n];
    for &(c, v) in row {
        d[c as usize] = v;
    }
    d
}

/// `a - f * b` over the ring, both rows sorted.
fn sub_scaled(ring: RingSpec, a: &SparseVec, f: u32, b: &SparseVec) -> SparseVec {
    let nf = ring.neg(f);
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map_or(u32::MAX, |e| e.0);
        let cb = b.get(j).map_or(u32::MAX, |e| e.0);
        if ca < cb {
            out.push(a[i]);
            i += 1;
        } else if cb < ca {
            let v = ring.mul(nf, b[j].1);
            if v != 0 {
                out.push((cb, v));
            }
            j += 1;
        } else {
            let v = ring.add(a[i].1, ring.mul(nf, b[j].1));
            if v != 0 {
                out.push((ca, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Echelon basis held in sparse form. Reduction above the pivots is optional;
/// membership and normal forms work either way.
#[derive(Clone, Debug)]
pub struct SparseBasis {
    ring: RingSpec,
    ambient: usize,
    rows: Vec<SparseVec>,
    pivots: Vec<Pivot>,
    reduced: bool,
}

/// Eliminates `m` column by column.
pub fn sparse_echelon(m: &SparseMat) -> SparseBasis {
    let ring = m.ring;
    let ncols = m.cols;
    let mut buckets: Vec<Vec<SparseVec>> = vec![Vec::new(); ncols];
    for r in &m.rows {
        if let Some(&(c, _)) = r.first() {
            buckets[c as usize].push(r.clone());
        }
    }
    let mut rows = Vec::new();
    let mut pivots = Vec::new();
    for col in 0..ncols {
        let mut bucket = std::mem::take(&mut buckets[col]);
        if bucket.is_empty() {
            continue;
        }
        let idx = (0..bucket.len())
            .min_by_key(|&i| (ring.valuation(bucket[i][0].1), bucket[i].len()))
            .expect("bucket is nonempty");
        let mut piv = bucket.swap_remove(idx);
        let (k, uinv) = ring.split_unit(piv[0].1);
        if uinv != 1 {
            piv.iter_mut().for_each(|e| e.1 = ring.mul(e.1, uinv));
        }
        let pk = ring.p_pow(k);
        for r in bucket {
            let f = r[0].1 / pk;
            let nr = sub_scaled(ring, &r, f, &piv);
            debug_assert!(nr.first().is_none_or(|e| e.0 as usize > col));
            if let Some(&(c, _)) = nr.first() {
                buckets[c as usize].push(nr);
            }
        }
        if k > 0 {
            let ann = ring.p_pow(ring.e() - k);
            let extra: SparseVec =
                piv.iter().map(|&(c, v)| (c, ring.mul(v, ann))).filter(|e| e.1 != 0).collect();
            if let Some(&(c, _)) = extra.first() {
                buckets[c as usize].push(extra);
            }
        }
        rows.push(piv);
        pivots.push(Pivot { col, k });
    }
    SparseBasis { ring, ambient: ncols, rows, pivots, reduced: false }
}

/// Sparse Howell form; identical to [`super::howell_form`] on the same input.
pub fn sparse_howell(m: &SparseMat) -> CanonicalBasis {
    let mut b = sparse_echelon(m);
    b.reduce_above();
    b.to_canonical()
}

impl SparseBasis {
    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn pivots(&self) -> &[Pivot] {
        &self.pivots
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn length(&self) -> u32 {
        self.pivots.iter().map(|pv| self.ring.e() - pv.k).sum()
    }

    /// Reduces every row above the later pivots, bottom row first.
    pub fn reduce_above(&mut self) {
        if self.reduced {
            return;
        }
        let ring = self.ring;
        let q = ring.modulus();
        let n = self.rows.len();
        let mut scratch = vec![0u32; self.ambient];
        for i in (0..n).rev() {
            let start = self.pivots[i].col;
            for &(c, v) in &self.rows[i] {
                scratch[c as usize] = v;
            }
            let mut touched = false;
            for j in i + 1..n {
                let pv = self.pivots[j];
                let f = scratch[pv.col] / ring.p_pow(pv.k);
                if f != 0 {
                    touched = true;
                    for &(c, v) in &self.rows[j] {
                        let s = &mut scratch[c as usize];
                        *s = (*s + (q - f) * v) % q;
                    }
                }
            }
            if touched {
                let row: SparseVec = (start..self.ambient)
                    .filter(|&c| scratch[c] != 0)
                    .map(|c| (c as u32, scratch[c]))
                    .collect();
                self.rows[i] = row;
            }
            for &(c, _) in &self.rows[i] {
                scratch[c as usize] = 0;
            }
            if touched {
                scratch[start..].iter_mut().for_each(|s| *s = 0);
            }
        }
        self.reduced = true;
    }

    pub fn to_canonical(&self) -> CanonicalBasis {
        assert!(self.reduced, "basis must be reduced above the pivots first");
        let rows = self.rows.iter().map(|r| sparse_to_dense(r, self.ambient)).collect();
        CanonicalBasis::from_parts(self.ring, self.ambient, rows, self.pivots.clone())
    }

    pub fn reduce_in_place(&self, v: &mut [u32]) {
        assert_eq!(v.len(), self.ambient);
        let q = self.ring.modulus();
        for (row, pv) in self.rows.iter().zip(&self.pivots) {
            let f = v[pv.col] / self.ring.p_pow(pv.k);
            if f != 0 {
                for &(c, x) in row {
                    let s = &mut v[c as usize];
                    *s = (*s + (q - f) * x) % q;
                }
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce_in_place(&mut w);
        w.iter().all(|&a| a == 0)
    }
}

/// Length of the row span (the rank when `e = 1`), computed sparsely.
pub fn sparse_length(m: &SparseMat) -> u32 {
    sparse_echelon(m).length()
}

/// Left kernel `{x : x * m = 0}` as an echelon basis of `F^{rows}`.
pub fn sparse_kernel(m: &SparseMat) -> SparseBasis {
    let c = m.cols;
    let n = m.rows.len();
    let mut aug = SparseMat::new(m.ring, c + n);
    for (i, r) in m.rows.iter().enumerate() {
        let mut row = r.clone();
        row.push(((c + i) as u32, 1));
        aug.rows.push(row);
    }
    let full = sparse_echelon(&aug);
    let mut rows = Vec::new();
    let mut pivots = Vec::new();
    for (r, pv) in full.rows.into_iter().zip(full.pivots) {
        if pv.col >= c {
            rows.push(r.into_iter().map(|(j, v)| (j - c as u32, v)).collect());
            pivots.push(Pivot { col: pv.col - c, k: pv.k });
        }
    }
    SparseBasis { ring: m.ring, ambient: n, rows, pivots, reduced: false }
}

/// Solver for `x * m = b` built from one elimination of `[m | I]`, with the
/// columns of `m` taken in a caller-chosen order.
#[derive(Clone, Debug)]
pub struct SparseSolver {
    cols: usize,
    perm: Vec<usize>,
    basis: SparseBasis,
    kernel: SparseBasis,
}

impl SparseSolver {
    /// `perm[c]` is the elimination position of column `c`.
    pub fn new(m: &SparseMat, perm: &[usize]) -> SparseSolver {
        let c = m.cols;
        let n = m.rows.len();
        let pm = m.permute_cols(perm);
        let mut aug = SparseMat::new(m.ring, c + n);
        for (i, r) in pm.rows.into_iter().enumerate() {
            let mut row = r;
            row.push(((c + i) as u32, 1));
            aug.rows.push(row);
        }
        let full = sparse_echelon(&aug);
        let (mut brows, mut bpiv, mut krows, mut kpiv) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for (r, pv) in full.rows.into_iter().zip(full.pivots) {
            if pv.col < c {
                brows.push(r);
                bpiv.push(pv);
            } else {
                krows.push(r.into_iter().map(|(j, v)| (j - c as u32, v)).collect());
                kpiv.push(Pivot { col: pv.col - c, k: pv.k });
            }
        }
        let mut kernel = SparseBasis { ring: m.ring, ambient: n, rows: krows, pivots: kpiv, reduced: false };
        kernel.reduce_above();
        SparseSolver {
            cols: c,
            perm: perm.to_vec(),
            basis: SparseBasis { ring: m.ring, ambient: c + n, rows: brows, pivots: bpiv, reduced: false },
            kernel,
        }
    }

    /// Left kernel of the matrix.
    pub fn kernel(&self) -> &SparseBasis {
        &self.kernel
    }

    /// Some `x` with `x * m = b`, reduced modulo the kernel, or `None`.
    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.cols, "right-hand side length mismatch");
        let ring = self.basis.ring;
        let mut v = vec![0u32; self.basis.ambient];
        for (c, &x) in b.iter().enumerate() {
            v[self.perm[c]] = x;
        }
        for (row, pv) in self.basis.rows.iter().zip(&self.basis.pivots) {
            let pk = ring.p_pow(pv.k);
            let a = v[pv.col];
            if !a.is_multiple_of(pk) {
                return None;
            }
            let f = a / pk;
            if f != 0 {
                let nf = ring.neg(f);
                for &(c, x) in row {
                    let s = &mut v[c as usize];
                    *s = ring.add(*s, ring.mul(nf, x));
                }
            }
        }
        if v[..self.cols].iter().any(|&x| x != 0) {
            return None;
        }
        let mut x: Vec<u32> = v[self.cols..].iter().map(|&y| ring.neg(y)).collect();
        self.kernel.reduce_in_place(&mut x);
        Some(x)
    }
}
