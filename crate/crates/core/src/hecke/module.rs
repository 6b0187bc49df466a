use rand::Rng;

use super::algebra::HeckeAlgebra;
use crate::exactalg::{howell_form, CanonicalBasis, Mat};
use crate::grouprep::{GModule, Presentation, RepError};

/// A finitely presented right module `H^u / R`, where `R` is the right
/// submodule generated by `relations`. Cover coordinates are `(j, c)` at
/// `j * dim H + c`.
#[derive(Clone, Debug)]
pub struct HeckeModule {
    h: usize,
    gens: usize,
    relations: Vec<Vec<u32>>,
    span: CanonicalBasis,
    /// Right action of each basis element on the cover.
    actions: Vec<Mat>,
}

fn right_actions(alg: &HeckeAlgebra, u: usize) -> Vec<Mat> {
    let id = Mat::identity(alg.ring(), u);
    (0..alg.dim()).map(|b| id.kron(&alg.right_regular(b))).collect()
}

impl HeckeModule {
    pub fn free(alg: &HeckeAlgebra, u: usize) -> Self {
        Self::quotient(alg, u, Vec::new())
    }

    pub fn quotient(alg: &HeckeAlgebra, u: usize, relations: Vec<Vec<u32>>) -> Self {
        assert!(u > 0, "at least one generator");
        let h = alg.dim();
        let actions = right_actions(alg, u);
        let gen_ops: Vec<Mat> = alg.algebra_generators().into_iter().map(|g| actions[g].clone()).collect();
        let span = CanonicalBasis::from_rows(alg.ring(), u * h, relations.clone()).stable_closure(&gen_ops);
        HeckeModule { h, gens: u, relations, span, actions }
    }

    /// The module `Λ^r` with right action `m * b = m * mats[b]`, presented
    /// on the generators `e_i` by `e_i g = sum_k mats[g][i][k] e_k` for
    /// algebra generators `g`. Fails unless the matrices form a unital
    /// right action.
    pub fn from_actions(alg: &HeckeAlgebra, mats: &[Mat]) -> Result<Self, RepError> {
        let ring = alg.ring();
        let h = alg.dim();
        if mats.len() != h || mats.iter().any(|m| m.rows() != mats[0].rows() || m.cols() != m.rows()) {
            return Err(RepError::Shape("one square matrix per basis element".into()));
        }
        let r = mats[0].rows();
        if mats[0] != Mat::identity(ring, r) {
            return Err(RepError::Shape("unit must act as the identity".into()));
        }
        for a in 0..h {
            for b in 0..h {
                let ab = alg.basis_mul(a, b);
                let mut expect = Mat::zeros(ring, r, r);
                for (c, &v) in ab.iter().enumerate() {
                    if v != 0 {
                        expect = expect.add(&mats[c].scale(v));
                    }
                }
                if mats[a].mul(&mats[b]) != expect {
                    return Err(RepError::Shape(format!("action law fails for basis pair ({a}, {b})")));
                }
            }
        }
        let mut relations = Vec::new();
        for g in alg.algebra_generators() {
            for i in 0..r {
                let mut rel = vec![0u32; r * h];
                rel[i * h + g] = 1;
                for k in 0..r {
                    rel[k * h] = ring.sub(rel[k * h], mats[g].get(i, k));
                }
                relations.push(rel);
            }
        }
        Ok(Self::quotient(alg, r, relations))
    }

    pub fn direct_sum(&self, other: &HeckeModule, alg: &HeckeAlgebra) -> HeckeModule {
        let h = self.h;
        let pad = |rel: &Vec<u32>, before: usize, after: usize| {
            let mut v = vec![0u32; before * h];
            v.extend_from_slice(rel);
            v.extend(std::iter::repeat_n(0, after * h));
            v
        };
        let mut relations: Vec<Vec<u32>> = self.relations.iter().map(|r| pad(r, 0, other.gens)).collect();
        relations.extend(other.relations.iter().map(|r| pad(r, self.gens, 0)));
        HeckeModule::quotient(alg, self.gens + other.gens, relations)
    }

    pub fn generators(&self) -> usize {
        self.gens
    }

    pub fn cover(&self) -> usize {
        self.gens * self.h
    }

    pub fn relations(&self) -> &[Vec<u32>] {
        &self.relations
    }

    pub fn span(&self) -> &CanonicalBasis {
        &self.span
    }

    pub fn action(&self, b: usize) -> &Mat {
        &self.actions[b]
    }

    pub fn presentation(&self) -> Presentation {
        Presentation { relations: self.span.clone() }
    }

    pub fn length(&self) -> u32 {
        self.cover() as u32 * self.span.ring().e() - self.span.length()
    }

    /// Right-module axioms on the cover and stability of the relations.
    pub fn axioms_hold(&self, alg: &HeckeAlgebra) -> bool {
        let ring = alg.ring();
        if self.actions[0] != Mat::identity(ring, self.cover()) {
            return false;
        }
        let stable = self.actions.iter().all(|a| self.span.rows().iter().all(|r| self.span.contains(&a.apply(r))));
        let gens = alg.algebra_generators();
        let law = gens.iter().all(|&a| {
            (0..alg.dim()).all(|b| {
                let mut expect = Mat::zeros(ring, self.cover(), self.cover());
                for (c, &v) in alg.basis_mul(a, b).iter().enumerate() {
                    if v != 0 {
                        expect = expect.add(&self.actions[c].scale(v));
                    }
                }
                self.actions[a].mul(&self.actions[b]) == expect
            })
        });
        stable && law
    }
}

/// A seeded quotient of `H^u` by the right submodule generated by `count`
/// random elements, retried until it is neither zero nor free.
pub fn random_quotient_module<R: Rng>(alg: &HeckeAlgebra, u: usize, count: usize, rng: &mut R) -> HeckeModule {
    let q = alg.ring().modulus();
    let full = (u * alg.dim()) as u32 * alg.ring().e();
    loop {
        let rels: Vec<Vec<u32>> = (0..count).map(|_| (0..u * alg.dim()).map(|_| rng.gen_range(0..q)).collect()).collect();
        let m = HeckeModule::quotient(alg, u, rels);
        let len = m.length();
        if len > 0 && len < full {
            return m;
        }
    }
}

/// `K(M) = M ⊗_H jbar`, presented as `jbar^u` modulo the images of the
/// relations, with the group acting diagonally; and `m -> m ⊗ φ`.
#[derive(Clone, Debug)]
pub struct TensorModule {
    pub module: GModule,
    /// `(u dim H) x (u rank jbar)`: the comparison map on covers.
    pub comparison: Mat,
}

pub fn tensor_k(alg: &HeckeAlgebra, m: &HeckeModule) -> Result<TensorModule, RepError> {
    let ring = alg.ring();
    let h = alg.dim();
    let n = alg.jbar_rank();
    let u = m.generators();
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for rel in m.relations() {
        let blocks: Vec<Mat> = (0..u).map(|j| alg.op_of(&rel[j * h..(j + 1) * h])).collect();
        let refs: Vec<&Mat> = blocks.iter().collect();
        rows.extend(Mat::hstack(&refs).row_vecs());
    }
    let relations = if rows.is_empty() {
        CanonicalBasis::zero(ring, u * n)
    } else {
        howell_form(&Mat::from_reduced_rows(ring, u * n, &rows))
    };
    let id = Mat::identity(ring, u);
    let gens: Vec<Mat> = alg.jbar().module.generator_actions().iter().map(|a| id.kron(a)).collect();
    let module = GModule::new(alg.group().clone(), gens, relations)?;

    let phi = alg.jbar().phi.iter().position(|&x| x == 1).expect("phi is a unit vector");
    let mut comparison = Mat::zeros(ring, u * h, u * n);
    for j in 0..u {
        for c in 0..h {
            comparison.row_mut(j * h + c)[j * n..(j + 1) * n].copy_from_slice(alg.op(c).row(phi));
        }
    }
    Ok(TensorModule { module, comparison })
}
