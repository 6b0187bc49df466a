use std::sync::Arc;

use crate::exactalg::{CanonicalBasis, Mat, RingSpec, SparseMat};
use crate::grouprep::{build_group, jbar, GroupData, GroupKind, JBar, RepError};

/// The endomorphism algebra of `jbar` for `GL_2(F_p)`, with basis the
/// double cosets `N \ G / N`. Basis element `D` acts on `jbar` from the left
/// by `e_{N y} -> sum over N z in D of e_{N z y}`; as a matrix on row vectors
/// this is `y -> y * op(D)`, so `op(a * b) = op(b) * op(a)`.
#[derive(Clone, Debug)]
pub struct HeckeAlgebra {
    ring: RingSpec,
    jbar: JBar,
    /// The right cosets making up each double coset; entry 0 is the unit.
    pub double_cosets: Vec<Vec<usize>>,
    ops: Vec<Mat>,
    /// `table[a][b]` holds the coordinates of `a * b`.
    table: Vec<Vec<Vec<u32>>>,
}

pub fn build_hecke(p: u32, ring: RingSpec) -> Result<HeckeAlgebra, RepError> {
    if p > 5 || ring.p() != p {
        return Err(RepError::UnsupportedPrime(p));
    }
    let group = build_group(GroupKind::GL2, p)?;
    let jb = jbar(group.clone(), ring)?;
    let n = jb.cosets.len();
    let unipotent = group.upper_unipotent().elements;
    let identity = jb.coset_of(group.identity());

    let mut class_of = vec![usize::MAX; n];
    let mut double_cosets: Vec<Vec<usize>> = Vec::new();
    let order = std::iter::once(identity).chain((0..n).filter(|&x| x != identity));
    for x in order {
        if class_of[x] != usize::MAX {
            continue;
        }
        let mut members: Vec<usize> = unipotent.iter().map(|&u| jb.coset_of(group.mul(jb.cosets[x], u))).collect();
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            class_of[m] = double_cosets.len();
        }
        double_cosets.push(members);
    }

    let ops: Vec<Mat> = double_cosets
        .iter()
        .map(|members| {
            let mut a = Mat::zeros(ring, n, n);
            for (y, &ye) in jb.cosets.iter().enumerate() {
                for &z in members {
                    let t = jb.coset_of(group.mul(jb.cosets[z], ye));
                    a.set(y, t, ring.add(a.get(y, t), 1));
                }
            }
            a
        })
        .collect();

    // a * b is read off the identity row of op(b) * op(a): its value on the
    // first coset of each double coset
    let h = double_cosets.len();
    let mut table = vec![vec![Vec::new(); h]; h];
    for (b, opb) in ops.iter().enumerate() {
        let row = opb.row(identity);
        for (a, opa) in ops.iter().enumerate() {
            let prod = opa.apply(row);
            table[a][b] = double_cosets.iter().map(|m| prod[m[0]]).collect();
        }
    }
    Ok(HeckeAlgebra { ring, jbar: jb, double_cosets, ops, table })
}

impl HeckeAlgebra {
    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn p(&self) -> u32 {
        self.ring.p()
    }

    pub fn group(&self) -> &Arc<GroupData> {
        self.jbar.module.group()
    }

    pub fn jbar(&self) -> &JBar {
        &self.jbar
    }

    pub fn dim(&self) -> usize {
        self.double_cosets.len()
    }

    /// Rank of `jbar`.
    pub fn jbar_rank(&self) -> usize {
        self.jbar.cosets.len()
    }

    pub fn unit(&self) -> Vec<u32> {
        let mut u = vec![0; self.dim()];
        u[0] = 1;
        u
    }

    pub fn basis_vector(&self, a: usize) -> Vec<u32> {
        let mut u = vec![0; self.dim()];
        u[a] = 1;
        u
    }

    pub fn op(&self, a: usize) -> &Mat {
        &self.ops[a]
    }

    /// The action on `jbar` of an arbitrary element.
    pub fn op_of(&self, x: &[u32]) -> Mat {
        let n = self.jbar_rank();
        let mut out = Mat::zeros(self.ring, n, n);
        for (c, &v) in x.iter().enumerate() {
            if v != 0 {
                out = out.add(&self.ops[c].scale(v));
            }
        }
        out
    }

    pub fn basis_mul(&self, a: usize, b: usize) -> &[u32] {
        &self.table[a][b]
    }

    pub fn mul(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let r = self.ring;
        let mut out = vec![0; self.dim()];
        for (a, &xa) in x.iter().enumerate() {
            if xa == 0 {
                continue;
            }
            for (b, &yb) in y.iter().enumerate() {
                if yb == 0 {
                    continue;
                }
                let f = r.mul(xa, yb);
                for (o, &t) in out.iter_mut().zip(&self.table[a][b]) {
                    *o = r.add(*o, r.mul(f, t));
                }
            }
        }
        out
    }

    /// `x -> a * x` on coordinate rows.
    pub fn left_regular(&self, a: usize) -> Mat {
        let rows: Vec<Vec<u32>> = (0..self.dim()).map(|c| self.table[a][c].clone()).collect();
        Mat::from_reduced_rows(self.ring, self.dim(), &rows)
    }

    /// `x -> x * b` on coordinate rows.
    pub fn right_regular(&self, b: usize) -> Mat {
        let rows: Vec<Vec<u32>> = (0..self.dim()).map(|c| self.table[c][b].clone()).collect();
        Mat::from_reduced_rows(self.ring, self.dim(), &rows)
    }

    /// `(a b) c = a (b c)` on every basis triple.
    pub fn is_associative(&self) -> bool {
        let h = self.dim();
        (0..h).all(|a| {
            (0..h).all(|b| {
                let ab = &self.table[a][b];
                (0..h).all(|c| {
                    let bc = &self.table[b][c];
                    self.mul(ab, &self.basis_vector(c)) == self.mul(&self.basis_vector(a), bc)
                })
            })
        })
    }

    pub fn unit_laws(&self) -> bool {
        (0..self.dim()).all(|a| {
            let e = self.basis_vector(a);
            self.table[0][a] == e && self.table[a][0] == e
        })
    }

    /// The structure constants describe the composition of the operators:
    /// `op(b) op(a) = op(a * b)` for all basis pairs.
    pub fn realizes_composition(&self) -> bool {
        let sparse: Vec<SparseMat> = self.ops.iter().map(SparseMat::from_dense).collect();
        (0..self.dim()).all(|a| {
            (0..self.dim()).all(|b| sparse[b].mul(&sparse[a]).to_dense() == self.op_of(&self.table[a][b]))
        })
    }

    /// A small set of basis elements generating the algebra, chosen greedily.
    pub fn algebra_generators(&self) -> Vec<usize> {
        let h = self.dim();
        let mut gens = Vec::new();
        let mut span = CanonicalBasis::from_rows(self.ring, h, vec![self.unit()]);
        for c in 1..h {
            if span.contains(&self.basis_vector(c)) {
                continue;
            }
            gens.push(c);
            let ops: Vec<Mat> = gens.iter().map(|&g| self.right_regular(g)).collect();
            span = span.with_vectors(&[self.basis_vector(c)]).stable_closure(&ops);
            if span.is_full() {
                break;
            }
        }
        gens
    }
}
