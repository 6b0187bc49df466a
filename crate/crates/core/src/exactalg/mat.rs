use std::fmt;

use serde::{Deserialize, Serialize};

use super::{AlgebraError, RingSpec};

/// Dense matrix over `Z/p^e`, row-major, entries kept in `0..p^e`.
///
/// Vectors are rows and maps act on the right: a matrix `A` sends `x` to `x * A`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat {
    ring: RingSpec,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Mat {
    pub fn zeros(ring: RingSpec, rows: usize, cols: usize) -> Self {
        Mat { ring, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(ring: RingSpec, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn scalar(ring: RingSpec, n: usize, s: u32) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.data[i * n + i] = s % ring.modulus();
        }
        m
    }

    /// Builds a matrix from signed integer rows, reducing every entry.
    pub fn from_rows<R: AsRef<[i64]>>(ring: RingSpec, cols: usize, rows: &[R]) -> Result<Self, AlgebraError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(AlgebraError::Dimension(format!("row of length {} where {} expected", r.len(), cols)));
            }
            data.extend(r.iter().map(|&a| ring.reduce(a)));
        }
        Ok(Mat { ring, rows: rows.len(), cols, data })
    }

    /// Builds a matrix from rows that are already reduced.
    pub fn from_reduced_rows(ring: RingSpec, cols: usize, rows: &[Vec<u32>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row length mismatch");
            data.extend(r.iter().map(|&a| a % ring.modulus()));
        }
        Mat { ring, rows: rows.len(), cols, data }
    }

    pub fn from_vec(ring: RingSpec, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols);
        let q = ring.modulus();
        let data = data.into_iter().map(|a| a % q).collect();
        Mat { ring, rows, cols, data }
    }

    #[inline]
    pub fn ring(&self) -> RingSpec {
        self.ring
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
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.ring.modulus();
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [u32] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&a| a == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let q = self.ring.modulus() as u64;
        let mut out = Mat::zeros(self.ring, self.rows, other.cols);
        let mut acc = vec![0u64; other.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let orow = other.row(k);
                for (acc_j, &b) in acc.iter_mut().zip(orow) {
                    *acc_j += a * b as u64;
                }
            }
            for (o, a) in out.row_mut(i).iter_mut().zip(&acc) {
                *o = (a % q) as u32;
            }
        }
        out
    }

    /// `x * self` for a row vector `x`.
    pub fn apply(&self, x: &[u32]) -> Vec<u32> {
        assert_eq!(x.len(), self.rows, "vector length mismatch");
        let q = self.ring.modulus() as u64;
        let mut acc = vec![0u64; self.cols];
        for (k, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (acc_j, &b) in acc.iter_mut().zip(self.row(k)) {
                *acc_j += a as u64 * b as u64;
            }
        }
        acc.into_iter().map(|a| (a % q) as u32).collect()
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let r = self.ring;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| r.add(a, b)).collect();
        Mat { ring: r, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let r = self.ring;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| r.sub(a, b)).collect();
        Mat { ring: r, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: u32) -> Mat {
        let r = self.ring;
        let data = self.data.iter().map(|&a| r.mul(a, s % r.modulus())).collect();
        Mat { ring: r, rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Mat {
        self.scale(self.ring.modulus() - 1)
    }

    /// `self - I`.
    pub fn minus_identity(&self) -> Mat {
        assert!(self.is_square());
        let mut m = self.clone();
        for i in 0..self.rows {
            let v = m.get(i, i);
            m.data[i * self.cols + i] = self.ring.sub(v, 1);
        }
        m
    }

    pub fn pow(&self, mut k: u64) -> Mat {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Mat::identity(self.ring, self.rows);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    /// Rows stacked on top of each other.
    pub fn vstack(parts: &[&Mat]) -> Mat {
        assert!(!parts.is_empty());
        let cols = parts[0].cols;
        let ring = parts[0].ring;
        let mut data = Vec::new();
        let mut rows = 0;
        for m in parts {
            assert_eq!(m.cols, cols, "vstack column mismatch");
            data.extend_from_slice(&m.data);
            rows += m.rows;
        }
        Mat { ring, rows, cols, data }
    }

    /// Blocks placed side by side.
    pub fn hstack(parts: &[&Mat]) -> Mat {
        assert!(!parts.is_empty());
        let rows = parts[0].rows;
        let ring = parts[0].ring;
        let cols: usize = parts.iter().map(|m| m.cols).sum();
        let mut out = Mat::zeros(ring, rows, cols);
        let mut off = 0;
        for m in parts {
            assert_eq!(m.rows, rows, "hstack row mismatch");
            for i in 0..rows {
                out.data[i * cols + off..i * cols + off + m.cols].copy_from_slice(m.row(i));
            }
            off += m.cols;
        }
        out
    }

    /// Block-diagonal sum.
    pub fn block_diag(parts: &[&Mat]) -> Mat {
        assert!(!parts.is_empty());
        let ring = parts[0].ring;
        let rows: usize = parts.iter().map(|m| m.rows).sum();
        let cols: usize = parts.iter().map(|m| m.cols).sum();
        let mut out = Mat::zeros(ring, rows, cols);
        let (mut ro, mut co) = (0, 0);
        for m in parts {
            for i in 0..m.rows {
                out.data[(ro + i) * cols + co..(ro + i) * cols + co + m.cols].copy_from_slice(m.row(i));
            }
            ro += m.rows;
            co += m.cols;
        }
        out
    }

    /// Kronecker product `self ⊗ other`, row index `(i, k) -> i * other.rows + k`.
    pub fn kron(&self, other: &Mat) -> Mat {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Mat::zeros(self.ring, rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if b != 0 {
                            out.data[(i * other.rows + k) * cols + j * other.cols + l] = self.ring.mul(a, b);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Mat { ring: self.ring, rows: idx.len(), cols: self.cols, data }
    }

    pub fn to_i64_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|&a| a as i64).collect()).collect()
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat[{}x{} over {}]", self.rows, self.cols, self.ring)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// In-place `dst += s * src` over the ring.
#[inline]
pub(crate) fn axpy(ring: RingSpec, dst: &mut [u32], s: u32, src: &[u32]) {
    if s == 0 {
        return;
    }
    let q = ring.modulus();
    for (d, &a) in dst.iter_mut().zip(src) {
        *d = (*d + s * a) % q;
    }
}

pub fn vec_is_zero(v: &[u32]) -> bool {
    v.iter().all(|&a| a == 0)
}

pub fn vec_sub(ring: RingSpec, a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(&x, &y)| ring.sub(x, y)).collect()
}

pub fn vec_add(ring: RingSpec, a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(&x, &y)| ring.add(x, y)).collect()
}

pub fn vec_scale(ring: RingSpec, a: &[u32], s: u32) -> Vec<u32> {
    a.iter().map(|&x| ring.mul(x, s)).collect()
}
