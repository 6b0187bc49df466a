//! Howell normal form over `Z/p^e` and the submodule toolkit built on it.
//!
//! A row span is stored as its Howell basis: rows in echelon shape, every
//! pivot normalized to a power `p^k`, entries above a pivot reduced into
//! `0..p^k`, and the Howell property (the rows with pivot at or after column
//! `j` generate every span element vanishing before `j`). Two spans are equal
//! iff their Howell bases coincide entry by entry.

use serde::{Deserialize, Serialize};

use super::mat::{axpy, vec_is_zero};
use super::{Mat, RingSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pivot {
    pub col: usize,
    /// The pivot entry is `p^k`.
    pub k: u32,
}

/// Canonical generating set of a submodule of `Λ^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CanonicalBasis {
    ring: RingSpec,
    ambient: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<Pivot>,
}

/// Runs the column sweep on `rows` (all of length `ncols`) and returns the
/// echelon rows with their pivots, not yet reduced above the pivots.
pub(crate) fn echelon_rows(ring: RingSpec, ncols: usize, rows: Vec<Vec<u32>>) -> (Vec<Vec<u32>>, Vec<Pivot>) {
    let q = ring.modulus();
    let mut work: Vec<Vec<u32>> = rows.into_iter().filter(|r| !vec_is_zero(r)).collect();
    let mut out = Vec::new();
    let mut pivots = Vec::new();
    for col in 0..ncols {
        if work.is_empty() {
            break;
        }
        let Some(idx) = work
            .iter()
            .enumerate()
            .filter(|(_, r)| r[col] != 0)
            .min_by_key(|(_, r)| ring.valuation(r[col]))
            .map(|(i, _)| i)
        else {
            continue;
        };
        let mut piv = work.swap_remove(idx);
        let (k, uinv) = ring.split_unit(piv[col]);
        if uinv != 1 {
            piv.iter_mut().for_each(|a| *a = ring.mul(*a, uinv));
        }
        let pk = ring.p_pow(k);
        for w in work.iter_mut() {
            let a = w[col];
            if a != 0 {
                let f = a / pk;
                axpy(ring, w, q - f, &piv);
                debug_assert_eq!(w[col], 0);
            }
        }
        if k > 0 {
            let ann = ring.p_pow(ring.e() - k);
            let extra: Vec<u32> = piv.iter().map(|&a| ring.mul(a, ann)).collect();
            if !vec_is_zero(&extra) {
                work.push(extra);
            }
        }
        work.retain(|r| !vec_is_zero(r));
        out.push(piv);
        pivots.push(Pivot { col, k });
    }
    debug_assert!(work.is_empty());
    (out, pivots)
}

/// Reduces the entries above each pivot into `0..p^k`.
pub(crate) fn reduce_above(ring: RingSpec, rows: &mut [Vec<u32>], pivots: &[Pivot]) {
    let q = ring.modulus();
    for i in 0..rows.len() {
        let Pivot { col, k } = pivots[i];
        let pk = ring.p_pow(k);
        let (upper, lower) = rows.split_at_mut(i);
        let piv = &lower[0];
        for r in upper.iter_mut() {
            let f = r[col] / pk;
            if f != 0 {
                axpy(ring, r, q - f, piv);
            }
        }
    }
}

/// Howell form of a matrix's row span (dense path).
pub fn howell_form(m: &Mat) -> CanonicalBasis {
    CanonicalBasis::from_rows(m.ring(), m.cols(), m.row_vecs())
}

impl CanonicalBasis {
    pub fn zero(ring: RingSpec, ambient: usize) -> Self {
        CanonicalBasis { ring, ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ring: RingSpec, ambient: usize) -> Self {
        Self::from_mat(&Mat::identity(ring, ambient))
    }

    pub fn from_mat(m: &Mat) -> Self {
        howell_form(m)
    }

    /// Canonical basis of the span of `rows` (entries must already be reduced).
    pub fn from_rows(ring: RingSpec, ambient: usize, rows: Vec<Vec<u32>>) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == ambient));
        let (mut rows, pivots) = echelon_rows(ring, ambient, rows);
        reduce_above(ring, &mut rows, &pivots);
        CanonicalBasis { ring, ambient, rows, pivots }
    }

    /// Assembles a basis from parts already known to be in Howell form.
    pub(crate) fn from_parts(ring: RingSpec, ambient: usize, rows: Vec<Vec<u32>>, pivots: Vec<Pivot>) -> Self {
        CanonicalBasis { ring, ambient, rows, pivots }
    }

    #[inline]
    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    #[inline]
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[Pivot] {
        &self.pivots
    }

    /// Number of basis rows (equals the dimension when `e = 1`).
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Composition length as a `Λ`-module, i.e. `log_p` of the number of elements.
    pub fn length(&self) -> u32 {
        self.pivots.iter().map(|pv| self.ring.e() - pv.k).sum()
    }

    pub fn is_full(&self) -> bool {
        self.length() as usize == self.ambient * self.ring.e() as usize
    }

    pub fn as_mat(&self) -> Mat {
        if self.rows.is_empty() {
            return Mat::zeros(self.ring, 0, self.ambient);
        }
        Mat::from_reduced_rows(self.ring, self.ambient, &self.rows)
    }

    /// Normal form of `v` modulo the span. Zero iff `v` lies in the span.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        let mut v = v.to_vec();
        self.reduce_in_place(&mut v);
        v
    }

    pub fn reduce_in_place(&self, v: &mut [u32]) {
        let q = self.ring.modulus();
        for (row, pv) in self.rows.iter().zip(&self.pivots) {
            let f = v[pv.col] / self.ring.p_pow(pv.k);
            if f != 0 {
                axpy(self.ring, v, q - f, row);
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        vec_is_zero(&self.reduce(v))
    }

    pub fn contains_all(&self, other: &CanonicalBasis) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    pub fn sum(&self, other: &CanonicalBasis) -> CanonicalBasis {
        assert_eq!(self.ambient, other.ambient);
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Self::from_rows(self.ring, self.ambient, rows)
    }

    pub fn with_vectors(&self, extra: &[Vec<u32>]) -> CanonicalBasis {
        let mut rows = self.rows.clone();
        rows.extend(extra.iter().cloned());
        Self::from_rows(self.ring, self.ambient, rows)
    }

    /// Image of the span under `x -> x * f`.
    pub fn image(&self, f: &Mat) -> CanonicalBasis {
        assert_eq!(f.rows(), self.ambient);
        let rows = self.rows.iter().map(|r| f.apply(r)).collect();
        Self::from_rows(self.ring, f.cols(), rows)
    }

    /// The smallest span containing `self` and stable under every `op`
    /// (acting on rows from the right).
    pub fn stable_closure(&self, ops: &[Mat]) -> CanonicalBasis {
        let mut s = self.clone();
        loop {
            let mut extra = Vec::new();
            for a in ops {
                for r in s.rows() {
                    let v = a.apply(r);
                    if !s.contains(&v) {
                        extra.push(v);
                    }
                }
            }
            if extra.is_empty() {
                return s;
            }
            s = s.with_vectors(&extra);
        }
    }

    pub fn intersect(&self, other: &CanonicalBasis) -> CanonicalBasis {
        preimage(&self.as_mat(), &Mat::identity(self.ring, self.ambient), other)
    }
}

/// Left kernel `{x : x * m = 0}` as a canonical basis of `Λ^{rows}`.
pub fn kernel(m: &Mat) -> CanonicalBasis {
    let ring = m.ring();
    let (n, c) = (m.rows(), m.cols());
    let aug = Mat::hstack(&[m, &Mat::identity(ring, n)]);
    let (rows, pivots) = echelon_rows(ring, c + n, aug.row_vecs());
    let mut krows = Vec::new();
    let mut kpiv = Vec::new();
    for (r, pv) in rows.into_iter().zip(pivots) {
        if pv.col >= c {
            krows.push(r[c..].to_vec());
            kpiv.push(Pivot { col: pv.col - c, k: pv.k });
        }
    }
    reduce_above(ring, &mut krows, &kpiv);
    CanonicalBasis::from_parts(ring, n, krows, kpiv)
}

/// Row span of a matrix.
pub fn image(m: &Mat) -> CanonicalBasis {
    howell_form(m)
}

/// `{ x * gens : x * gens * f ∈ target }`, the part of `span(gens)` that `f`
/// maps into `target`.
pub fn preimage(gens: &Mat, f: &Mat, target: &CanonicalBasis) -> CanonicalBasis {
    let ring = gens.ring();
    let t = gens.rows();
    let img = gens.mul(f);
    let stacked = Mat::vstack(&[&img, &target.as_mat()]);
    let ker = kernel(&stacked);
    let rows = ker.rows().iter().map(|x| gens.apply(&x[..t])).collect();
    CanonicalBasis::from_rows(ring, gens.cols(), rows)
}

/// The Howell form of `a` together with, for every basis row, the combination
/// of rows of `a` that produces it, and the left kernel of `a`.
#[derive(Clone, Debug)]
pub struct HowellTransform {
    pub basis: CanonicalBasis,
    pub transforms: Vec<Vec<u32>>,
    pub kernel: CanonicalBasis,
}

impl HowellTransform {
    pub fn new(a: &Mat) -> Self {
        let ring = a.ring();
        let (n, c) = (a.rows(), a.cols());
        let aug = Mat::hstack(&[a, &Mat::identity(ring, n)]);
        let (mut rows, pivots) = echelon_rows(ring, c + n, aug.row_vecs());
        reduce_above(ring, &mut rows, &pivots);
        let mut brows = Vec::new();
        let mut bpiv = Vec::new();
        let mut transforms = Vec::new();
        let mut krows = Vec::new();
        let mut kpiv = Vec::new();
        for (r, pv) in rows.into_iter().zip(pivots) {
            if pv.col < c {
                brows.push(r[..c].to_vec());
                transforms.push(r[c..].to_vec());
                bpiv.push(pv);
            } else {
                krows.push(r[c..].to_vec());
                kpiv.push(Pivot { col: pv.col - c, k: pv.k });
            }
        }
        HowellTransform {
            basis: CanonicalBasis::from_parts(ring, c, brows, bpiv),
            transforms,
            kernel: CanonicalBasis::from_parts(ring, n, krows, kpiv),
        }
    }

    /// Some `x` with `x * a = b`, or `None`. The answer is the reduced
    /// representative of its coset modulo the kernel, so it is unique.
    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        let ring = self.basis.ring();
        let q = ring.modulus();
        assert_eq!(b.len(), self.basis.ambient(), "right-hand side length mismatch");
        let mut rem = b.to_vec();
        let mut x = vec![0u32; self.kernel.ambient()];
        for ((row, pv), t) in self.basis.rows().iter().zip(self.basis.pivots()).zip(&self.transforms) {
            let pk = ring.p_pow(pv.k);
            let a = rem[pv.col];
            if !a.is_multiple_of(pk) {
                return None;
            }
            let f = a / pk;
            if f != 0 {
                axpy(ring, &mut rem, q - f, row);
                axpy(ring, &mut x, f, t);
            }
        }
        if !vec_is_zero(&rem) {
            return None;
        }
        self.kernel.reduce_in_place(&mut x);
        Some(x)
    }
}

/// Solves `x * a = b`; deterministic, see [`HowellTransform::solve`].
pub fn solve(a: &Mat, b: &[u32]) -> Option<Vec<u32>> {
    HowellTransform::new(a).solve(b)
}

/// Number of elements of the span, computed from the Howell basis.
pub fn span_size(cb: &CanonicalBasis) -> u64 {
    (cb.ring().p() as u64).pow(cb.length())
}
