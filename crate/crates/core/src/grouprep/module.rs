use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::group::{Elem, GroupData};
use super::RepError;
use crate::exactalg::{howell_form, kernel, preimage, CanonicalBasis, HowellTransform, Mat, RingSpec};

/// A quotient `Λ^n / relations`. Submodules of it are carried as canonical
/// bases of `Λ^n` that contain the relations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub relations: CanonicalBasis,
}

impl Presentation {
    pub fn free(ring: RingSpec, n: usize) -> Self {
        Presentation { relations: CanonicalBasis::zero(ring, n) }
    }

    pub fn ring(&self) -> RingSpec {
        self.relations.ring()
    }

    pub fn cover(&self) -> usize {
        self.relations.ambient()
    }

    /// Length as a `Λ`-module; the dimension when `e = 1`.
    pub fn length(&self) -> u32 {
        self.cover() as u32 * self.ring().e() - self.relations.length()
    }

    pub fn is_zero(&self) -> bool {
        self.relations.is_full()
    }

    /// Unit vectors of `Λ^n` whose images form a basis (field case) or a
    /// generating set (general case) of the quotient.
    pub fn section_basis(&self) -> Vec<Vec<u32>> {
        let n = self.cover();
        let units: Vec<usize> = self.relations.pivots().iter().filter(|pv| pv.k == 0).map(|pv| pv.col).collect();
        (0..n)
            .filter(|c| !units.contains(c))
            .map(|c| {
                let mut v = vec![0; n];
                v[c] = 1;
                v
            })
            .collect()
    }

    /// Whether `f` (on covers) maps `self` into `target` at all.
    pub fn map_is_well_defined(&self, f: &Mat, target: &Presentation) -> bool {
        self.relations.rows().iter().all(|r| target.relations.contains(&f.apply(r)))
    }

    pub fn map_is_surjective(&self, f: &Mat, target: &Presentation) -> bool {
        let img = howell_form(f).sum(&target.relations);
        img.is_full()
    }

    pub fn map_is_injective(&self, f: &Mat, target: &Presentation) -> bool {
        let id = Mat::identity(self.ring(), self.cover());
        preimage(&id, f, &target.relations) == self.relations
    }
}

/// `H^1` of a procyclic group acting through an operator `c`, realized as
/// the coinvariants `M / (c - 1) M`.
pub type ProcyclicH1 = Presentation;

/// A module with a single operator, used for the cyclic groups acting on the
/// tree and for the unipotent subgroup.
#[derive(Clone, Debug)]
pub struct CyclicModule {
    pub presentation: Presentation,
    pub op: Mat,
}

impl CyclicModule {
    pub fn free(op: Mat) -> Self {
        CyclicModule { presentation: Presentation::free(op.ring(), op.rows()), op }
    }

    pub fn ring(&self) -> RingSpec {
        self.op.ring()
    }

    pub fn cover(&self) -> usize {
        self.op.rows()
    }

    pub fn invariants(&self) -> CanonicalBasis {
        let id = Mat::identity(self.ring(), self.cover());
        preimage(&id, &self.op.minus_identity(), &self.presentation.relations)
    }
}

/// `M / (c - 1) M` for the designated operator of `m`.
pub fn h1_procyclic(m: &CyclicModule) -> Result<ProcyclicH1, RepError> {
    if !howell_form(&m.op).sum(&m.presentation.relations).is_full() {
        return Err(RepError::NotInvertible);
    }
    let rel = m.presentation.relations.sum(&howell_form(&m.op.minus_identity()));
    Ok(Presentation { relations: rel })
}

/// Induction to a cyclic group of index `p^level`: basis pairs `(a, v)` with
/// `a < p^level`, the generator sends `(a, v)` to `(a + 1, v)` and
/// `(p^level - 1, v)` to `(0, v c)`. The result has operator order
/// `p^level * ord(c)`, so `depth` only bounds the level.
pub fn induce_cyclic(m: &CyclicModule, level: u32, depth: u32) -> Result<CyclicModule, RepError> {
    if level > depth {
        return Err(RepError::LevelExceedsDepth { level, depth });
    }
    let ring = m.ring();
    let n = m.cover();
    let blocks = (ring.p() as usize).pow(level);
    let mut g = Mat::zeros(ring, blocks * n, blocks * n);
    for a in 0..blocks {
        for i in 0..n {
            if a + 1 < blocks {
                g.set(a * n + i, (a + 1) * n + i, 1);
            } else {
                for j in 0..n {
                    g.set(a * n + i, j, m.op.get(i, j));
                }
            }
        }
    }
    let rows = (0..blocks)
        .flat_map(|a| {
            m.presentation.relations.rows().iter().map(move |r| {
                let mut v = vec![0; blocks * n];
                v[a * n..(a + 1) * n].copy_from_slice(r);
                v
            })
        })
        .collect();
    let relations = CanonicalBasis::from_rows(ring, blocks * n, rows);
    Ok(CyclicModule { presentation: Presentation { relations }, op: g })
}

/// A finitely generated `Λ[G]`-module: a free cover `Λ^n` with a `G`-stable
/// submodule of relations and the action of the group generators. Vectors
/// act on the right: `v -> v * action(g)` and `action(g h) = action(g) action(h)`.
#[derive(Clone, Debug)]
pub struct GModule {
    group: Arc<GroupData>,
    presentation: Presentation,
    gens: Vec<Mat>,
}

impl GModule {
    pub fn new(group: Arc<GroupData>, gens: Vec<Mat>, relations: CanonicalBasis) -> Result<Self, RepError> {
        if gens.len() != group.generators().len() {
            return Err(RepError::Shape("one action matrix per group generator".into()));
        }
        let n = relations.ambient();
        for a in &gens {
            if a.rows() != n || a.cols() != n || a.ring() != relations.ring() {
                return Err(RepError::Shape("action matrices must be square over the module ring".into()));
            }
            if !relations.rows().iter().all(|r| relations.contains(&a.apply(r))) {
                return Err(RepError::NotStable);
            }
            if !howell_form(a).sum(&relations).is_full() {
                return Err(RepError::NotInvertible);
            }
        }
        Ok(GModule { group, presentation: Presentation { relations }, gens })
    }

    pub fn free(group: Arc<GroupData>, gens: Vec<Mat>) -> Result<Self, RepError> {
        let ring = gens.first().map(Mat::ring).ok_or_else(|| RepError::Shape("no generators".into()))?;
        let n = gens[0].rows();
        Self::new(group, gens, CanonicalBasis::zero(ring, n))
    }

    /// Builds the generator matrices from a rule defined on group elements.
    pub fn from_rule(group: Arc<GroupData>, ring: RingSpec, n: usize, rule: impl Fn(Elem) -> Mat) -> Result<Self, RepError> {
        let gens: Vec<Mat> = group.generators().iter().map(|&g| rule(g)).collect();
        Self::new(group, gens, CanonicalBasis::zero(ring, n))
    }

    pub fn trivial(group: Arc<GroupData>, ring: RingSpec) -> Self {
        let gens = vec![Mat::identity(ring, 1); group.generators().len()];
        GModule { group, presentation: Presentation::free(ring, 1), gens }
    }

    pub fn group(&self) -> &Arc<GroupData> {
        &self.group
    }

    pub fn ring(&self) -> RingSpec {
        self.presentation.ring()
    }

    pub fn cover(&self) -> usize {
        self.presentation.cover()
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn relations(&self) -> &CanonicalBasis {
        &self.presentation.relations
    }

    pub fn generator_actions(&self) -> &[Mat] {
        &self.gens
    }

    pub fn is_free(&self) -> bool {
        self.relations().is_empty()
    }

    /// Length as a `Λ`-module (the dimension over `k` when `e = 1`).
    pub fn length(&self) -> u32 {
        self.presentation.length()
    }

    /// Length of a submodule given as a basis containing the relations.
    pub fn sub_length(&self, s: &CanonicalBasis) -> u32 {
        s.length() - self.relations().length()
    }

    pub fn act(&self, g: &Elem) -> Mat {
        let word = self.group.word(g).expect("element of the module's group");
        let mut out = Mat::identity(self.ring(), self.cover());
        for &k in word {
            out = out.mul(&self.gens[k]);
        }
        out
    }

    pub fn act_vec(&self, v: &[u32], g: &Elem) -> Vec<u32> {
        let word = self.group.word(g).expect("element of the module's group");
        let mut out = v.to_vec();
        for &k in word {
            out = self.gens[k].apply(&out);
        }
        out
    }

    /// Vectors of the cover fixed modulo the relations by every element of
    /// `gens` (the preimage of the fixed submodule).
    pub fn invariants(&self, gens: &[Elem]) -> CanonicalBasis {
        let ring = self.ring();
        let n = self.cover();
        if gens.is_empty() {
            return CanonicalBasis::full(ring, n);
        }
        let mats: Vec<Mat> = gens.iter().map(|g| self.act(g).minus_identity()).collect();
        let refs: Vec<&Mat> = mats.iter().collect();
        let f = Mat::hstack(&refs);
        let k = gens.len();
        let rows = (0..k)
            .flat_map(|b| {
                self.relations().rows().iter().map(move |r| {
                    let mut v = vec![0; n * k];
                    v[b * n..(b + 1) * n].copy_from_slice(r);
                    v
                })
            })
            .collect();
        let target = CanonicalBasis::from_rows(ring, n * k, rows);
        preimage(&Mat::identity(ring, n), &f, &target)
    }

    /// Relations of the coinvariants `M / sum (h - 1) M`.
    pub fn coinvariants(&self, gens: &[Elem]) -> Presentation {
        let mut rows: Vec<Vec<u32>> = self.relations().rows().to_vec();
        for g in gens {
            rows.extend(self.act(g).minus_identity().row_vecs());
        }
        Presentation { relations: CanonicalBasis::from_rows(self.ring(), self.cover(), rows) }
    }

    /// Smallest stable submodule containing the vectors and the relations.
    pub fn generated(&self, vectors: &[Vec<u32>]) -> CanonicalBasis {
        self.generated_by(vectors, &self.gens)
    }

    /// Closure under a chosen set of operators (e.g. a subgroup's generators).
    pub fn generated_by(&self, vectors: &[Vec<u32>], ops: &[Mat]) -> CanonicalBasis {
        let mut s = self.relations().with_vectors(vectors);
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

    pub fn generated_by_elements(&self, vectors: &[Vec<u32>], elems: &[Elem]) -> CanonicalBasis {
        let ops: Vec<Mat> = elems.iter().map(|g| self.act(g)).collect();
        self.generated_by(vectors, &ops)
    }

    pub fn is_stable(&self, s: &CanonicalBasis) -> bool {
        self.gens.iter().all(|a| s.rows().iter().all(|r| s.contains(&a.apply(r))))
    }

    /// The cyclic module given by the action of one element.
    pub fn restrict_cyclic(&self, g: &Elem) -> CyclicModule {
        CyclicModule { presentation: self.presentation.clone(), op: self.act(g) }
    }

    /// `self / s` on the same cover.
    pub fn quotient(&self, s: &CanonicalBasis) -> Result<GModule, RepError> {
        if !s.contains_all(self.relations()) {
            return Err(RepError::Shape("submodule must contain the relations".into()));
        }
        GModule::new(self.group.clone(), self.gens.clone(), s.clone())
    }

    /// The submodule `s` as a module in its own right, with the inclusion map.
    pub fn submodule(&self, s: &CanonicalBasis) -> Result<(GModule, Mat), RepError> {
        if !self.is_stable(s) || !s.contains_all(self.relations()) {
            return Err(RepError::NotStable);
        }
        let ring = self.ring();
        let t = s.len();
        let smat = s.as_mat();
        let stacked = Mat::vstack(&[&smat, &self.relations().as_mat()]);
        let ht = HowellTransform::new(&stacked);
        let mut gens = Vec::with_capacity(self.gens.len());
        for a in &self.gens {
            let img = smat.mul(a);
            let mut x = Mat::zeros(ring, t, t);
            for i in 0..t {
                let sol = ht.solve(img.row(i)).expect("stable submodule");
                x.row_mut(i).copy_from_slice(&sol[..t]);
            }
            gens.push(x);
        }
        let ker = kernel(&stacked);
        let rel_rows: Vec<Vec<u32>> = ker.rows().iter().map(|r| r[..t].to_vec()).collect();
        let relations = CanonicalBasis::from_rows(ring, t, rel_rows);
        let sub = GModule::new(self.group.clone(), gens, relations)?;
        Ok((sub, smat))
    }

    /// Over a field, an isomorphic free module together with the projection
    /// from this cover onto it.
    pub fn compact(&self) -> (GModule, Mat) {
        let ring = self.ring();
        assert!(ring.is_field(), "compact presentations need a field");
        let n = self.cover();
        let rel = self.relations();
        let keep: Vec<usize> = {
            let piv: Vec<usize> = rel.pivots().iter().map(|pv| pv.col).collect();
            (0..n).filter(|c| !piv.contains(c)).collect()
        };
        let m = keep.len();
        let mut proj = Mat::zeros(ring, n, m);
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            let nf = rel.reduce(&e);
            for (j, &c) in keep.iter().enumerate() {
                proj.set(i, j, nf[c]);
            }
        }
        let gens = self
            .gens
            .iter()
            .map(|a| {
                let mut lift = Mat::zeros(ring, m, n);
                for (j, &c) in keep.iter().enumerate() {
                    lift.row_mut(j).copy_from_slice(a.row(c));
                }
                lift.mul(&proj)
            })
            .collect();
        let out = GModule {
            group: self.group.clone(),
            presentation: Presentation::free(ring, m),
            gens,
        };
        (out, proj)
    }

    pub fn direct_sum(parts: &[&GModule]) -> GModule {
        assert!(!parts.is_empty());
        let group = parts[0].group.clone();
        let ring = parts[0].ring();
        let n: usize = parts.iter().map(|m| m.cover()).sum();
        let gens = (0..group.generators().len())
            .map(|k| {
                let blocks: Vec<&Mat> = parts.iter().map(|m| &m.gens[k]).collect();
                Mat::block_diag(&blocks)
            })
            .collect();
        let mut rows = Vec::new();
        let mut off = 0;
        for m in parts {
            for r in m.relations().rows() {
                let mut v = vec![0; n];
                v[off..off + m.cover()].copy_from_slice(r);
                rows.push(v);
            }
            off += m.cover();
        }
        let relations = CanonicalBasis::from_rows(ring, n, rows);
        GModule { group, presentation: Presentation { relations }, gens }
    }

    pub fn power(&self, r: usize) -> GModule {
        let parts: Vec<&GModule> = std::iter::repeat_n(self, r).collect();
        GModule::direct_sum(&parts)
    }

    /// Same generator matrices over another ring with the same prime, entries
    /// read as integers.
    pub fn with_ring(&self, ring: RingSpec) -> Result<GModule, RepError> {
        assert_eq!(ring.p(), self.ring().p());
        let conv = |m: &Mat| Mat::from_rows(ring, m.cols(), &m.to_i64_rows()).expect("shape preserved");
        let gens = self.gens.iter().map(conv).collect();
        let rows = self.relations().rows().to_vec();
        let relations = if rows.is_empty() {
            CanonicalBasis::zero(ring, self.cover())
        } else {
            CanonicalBasis::from_mat(&conv(&Mat::from_reduced_rows(self.ring(), self.cover(), &rows)))
        };
        GModule::new(self.group.clone(), gens, relations)
    }

    /// Checks `action(g) action(h) = action(g h)` on the sampled pairs.
    pub fn action_law_holds(&self, pairs: &[(Elem, Elem)]) -> bool {
        pairs.iter().all(|&(g, h)| {
            let lhs = self.act(&g).mul(&self.act(&h));
            let rhs = self.act(&self.group.mul(g, h));
            lhs.sub(&rhs).row_vecs().iter().all(|r| self.relations().contains(r))
        })
    }

    /// Checks that `f` (cover to cover) is a well-defined equivariant map.
    pub fn map_is_equivariant(&self, f: &Mat, target: &GModule) -> bool {
        if !self.presentation.map_is_well_defined(f, &target.presentation) {
            return false;
        }
        self.gens.iter().zip(&target.gens).all(|(a, b)| {
            let d = a.mul(f).sub(&f.mul(b));
            d.row_vecs().iter().all(|r| target.relations().contains(r))
        })
    }
}
