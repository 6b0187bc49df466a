use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::TreeError;
use crate::exactalg::{howell_form, sparse_echelon, Mat, RingSpec, SparseBasis, SparseMat};
use crate::grouprep::GModule;

/// The gluing isomorphism from the `N'`-invariants to the `N`-invariants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RhoChoice {
    /// `w -> w * w0`.
    W0,
    /// `w -> w * w0 * t^k` for the torus generator `t`.
    Twist(u32),
    /// `w -> s * (w * w0)` for a unit `s`.
    Scale(u32),
}

impl fmt::Display for RhoChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RhoChoice::W0 => write!(f, "w0"),
            RhoChoice::Twist(k) => write!(f, "twist:{k}"),
            RhoChoice::Scale(s) => write!(f, "scale:{s}"),
        }
    }
}

impl FromStr for RhoChoice {
    type Err = TreeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || TreeError::BadRho(s.to_string());
        if s == "w0" {
            return Ok(RhoChoice::W0);
        }
        let (kind, val) = s.split_once(':').ok_or_else(bad)?;
        let v: u32 = val.parse().map_err(|_| bad())?;
        match kind {
            "twist" => Ok(RhoChoice::Twist(v)),
            "scale" => Ok(RhoChoice::Scale(v)),
            _ => Err(bad()),
        }
    }
}

/// Index bookkeeping for the depth-`D` half-tree: level-`m` vertices are
/// `Z/p^m`, the edges between levels `m` and `m + 1` are `Z/p^{m+1}`, edge
/// `b` joins vertex `b mod p^m` to vertex `b` one level down.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfTreeTrunc {
    pub p: u32,
    pub depth: u32,
}

impl HalfTreeTrunc {
    pub fn vertices(&self, m: u32) -> usize {
        (self.p as usize).pow(m)
    }

    /// Edges between levels `m` and `m + 1`.
    pub fn edges(&self, m: u32) -> usize {
        (self.p as usize).pow(m + 1)
    }

    pub fn parent_vertex(&self, m: u32, b: usize) -> usize {
        b % self.vertices(m)
    }

    /// The digit of edge `b` above its parent vertex.
    pub fn edge_digit(&self, m: u32, b: usize) -> usize {
        b / self.vertices(m)
    }

    /// Order of the translation acting on the truncated tree.
    pub fn gamma_order(&self) -> u64 {
        (self.p as u64).pow(self.depth + 1)
    }
}

/// `+1` on even levels, `-1` on odd levels, as ring elements.
pub fn level_sign(ring: RingSpec, m: u32) -> u32 {
    if m.is_multiple_of(2) {
        1
    } else {
        ring.neg(1)
    }
}

/// The truncated chain complex `C_1 -> C_0` for the coefficient system built
/// from `W`, with the translation `g` acting on both sides.
#[derive(Clone, Debug)]
pub struct ChainComplexData {
    pub tree: HalfTreeTrunc,
    pub ring: RingSpec,
    pub module: GModule,
    pub rho_choice: RhoChoice,
    /// The unipotent generator used is `n^twist`.
    pub twist: u32,
    /// Basis of `W^{N'}` (rows).
    pub fixed_np: Mat,
    /// Basis of `W^N` (rows).
    pub fixed_n: Mat,
    /// `ρ` on the rows of `fixed_np`.
    pub rho: Mat,
    /// Action of `n^twist` on `W`.
    pub unipotent: Mat,
    pub vertex_offsets: Vec<usize>,
    pub edge_offsets: Vec<usize>,
    pub boundary: SparseMat,
    pub g0: SparseMat,
    pub g1: SparseMat,
}

impl ChainComplexData {
    pub fn n(&self) -> usize {
        self.module.cover()
    }

    pub fn d(&self) -> usize {
        self.fixed_np.rows()
    }

    pub fn dim_c0(&self) -> usize {
        *self.vertex_offsets.last().expect("offsets")
    }

    pub fn dim_c1(&self) -> usize {
        *self.edge_offsets.last().expect("offsets")
    }

    pub fn depth(&self) -> u32 {
        self.tree.depth
    }

    /// Column range of the vertex block `(m, a)` in `C_0`.
    pub fn vertex_block(&self, m: u32, a: usize) -> std::ops::Range<usize> {
        let start = self.vertex_offsets[m as usize] + a * self.n();
        start..start + self.n()
    }

    pub fn level_range0(&self, m: u32) -> std::ops::Range<usize> {
        self.vertex_offsets[m as usize]..self.vertex_offsets[m as usize + 1]
    }

    /// Row range of the edge block `(m, b)` in `C_1`.
    pub fn edge_block(&self, m: u32, b: usize) -> std::ops::Range<usize> {
        let start = self.edge_offsets[m as usize] + b * self.d();
        start..start + self.d()
    }

    pub fn level_range1(&self, m: u32) -> std::ops::Range<usize> {
        self.edge_offsets[m as usize]..self.edge_offsets[m as usize + 1]
    }

    /// Column order putting the deepest level first; elimination of the
    /// boundary in this order creates no fill.
    pub fn deep_first_order(&self) -> Vec<usize> {
        let mut perm = vec![0; self.dim_c0()];
        let mut next = 0;
        for m in (0..=self.depth()).rev() {
            for c in self.level_range0(m) {
                perm[c] = next;
                next += 1;
            }
        }
        perm
    }

    /// Echelon basis of the image of `∂` in deep-first column order.
    pub fn boundary_echelon(&self) -> (SparseBasis, Vec<usize>) {
        let perm = self.deep_first_order();
        (sparse_echelon(&self.boundary.permute_cols(&perm)), perm)
    }

    pub fn boundary_dense(&self) -> Mat {
        self.boundary.to_dense()
    }

    /// The level-0 embedding `W^N -> C_0` as rows.
    pub fn iota(&self) -> SparseMat {
        let mut s = SparseMat::new(self.ring, self.dim_c0());
        let r = self.vertex_block(0, 0);
        for i in 0..self.fixed_n.rows() {
            let mut v = vec![0; self.dim_c0()];
            v[r.clone()].copy_from_slice(self.fixed_n.row(i));
            s.push_dense(&v);
        }
        s
    }

    pub fn iota_vec(&self, w: &[u32]) -> Vec<u32> {
        let mut v = vec![0; self.dim_c0()];
        v[self.vertex_block(0, 0)].copy_from_slice(w);
        v
    }

    /// `∂ g_0 = g_1 ∂`.
    pub fn is_equivariant(&self) -> bool {
        self.boundary.mul(&self.g0) == self.g1.mul(&self.boundary)
    }

    /// Applies `g` to a 0-chain.
    pub fn act0(&self, c: &[u32]) -> Vec<u32> {
        self.g0.apply(c)
    }

    pub fn act1(&self, b: &[u32]) -> Vec<u32> {
        self.g1.apply(b)
    }

    pub fn apply_boundary(&self, b: &[u32]) -> Vec<u32> {
        self.boundary.apply(b)
    }
}

fn rho_matrix(w: &GModule, choice: RhoChoice) -> Result<Mat, TreeError> {
    let g = w.group();
    let ring = w.ring();
    let base = w.act(&g.w0());
    Ok(match choice {
        RhoChoice::W0 => base,
        RhoChoice::Twist(k) => base.mul(&w.act(&g.pow(g.torus_generator(), k as u64))),
        RhoChoice::Scale(s) => {
            let s = ring.reduce(s as i64);
            if !ring.is_unit(s) {
                return Err(TreeError::BadRho(format!("scale:{s} is not a unit")));
            }
            base.scale(s)
        }
    })
}

/// Builds the depth-`depth` complex for `W` with gluing `rho` and unipotent
/// generator `n^twist`.
pub fn build_complex_twisted(w: &GModule, depth: u32, rho_choice: RhoChoice, twist: u32) -> Result<ChainComplexData, TreeError> {
    let ring = w.ring();
    if !ring.is_field() {
        return Err(TreeError::NeedsField);
    }
    if depth == 0 {
        return Err(TreeError::Depth(depth));
    }
    let p = ring.p();
    if twist.is_multiple_of(p) {
        return Err(TreeError::BadRho(format!("twist {twist} is not a unit")));
    }
    let w = if w.is_free() { w.clone() } else { w.compact().0 };
    let g = w.group().clone();
    let n = w.cover();
    let fixed_np_cb = w.invariants(&[g.nbar_prime()]);
    if !w.generated(fixed_np_cb.rows()).is_full() {
        return Err(TreeError::NotGenerated);
    }
    let fixed_n_cb = w.invariants(&[g.nbar()]);
    let fixed_np = fixed_np_cb.as_mat();
    let fixed_n = fixed_n_cb.as_mat();
    let d = fixed_np.rows();
    let rho_full = rho_matrix(&w, rho_choice)?;
    let rho = fixed_np.mul(&rho_full);
    // ρ must be an isomorphism onto W^N
    if howell_form(&rho) != fixed_n_cb || d != fixed_n.rows() {
        return Err(TreeError::RhoNotIso);
    }
    let unipotent = w.act(&g.pow(g.nbar(), twist as u64));

    let tree = HalfTreeTrunc { p, depth };
    let mut vertex_offsets = vec![0];
    for m in 0..=depth {
        vertex_offsets.push(vertex_offsets[m as usize] + tree.vertices(m) * n);
    }
    let mut edge_offsets = vec![0];
    for m in 0..depth {
        edge_offsets.push(edge_offsets[m as usize] + tree.edges(m) * d);
    }
    let n0 = vertex_offsets[depth as usize + 1];
    let n1 = edge_offsets[depth as usize];

    // parent-side images w_i * n^{u j}
    let mut parent_images = Vec::with_capacity(p as usize);
    let mut power = Mat::identity(ring, n);
    for _ in 0..p {
        parent_images.push(fixed_np.mul(&power));
        power = power.mul(&unipotent);
    }

    let mut boundary = SparseMat::new(ring, n0);
    for m in 0..depth {
        let s_up = level_sign(ring, m) as i64;
        let s_down = level_sign(ring, m + 1) as i64;
        for b in 0..tree.edges(m) {
            let a = tree.parent_vertex(m, b);
            let j = tree.edge_digit(m, b);
            let pstart = vertex_offsets[m as usize] + a * n;
            let cstart = vertex_offsets[m as usize + 1] + b * n;
            for i in 0..d {
                let mut entries = Vec::with_capacity(2 * n);
                for (c, &v) in parent_images[j].row(i).iter().enumerate() {
                    if v != 0 {
                        entries.push((pstart + c, s_up * v as i64));
                    }
                }
                for (c, &v) in rho.row(i).iter().enumerate() {
                    if v != 0 {
                        entries.push((cstart + c, s_down * v as i64));
                    }
                }
                boundary.push_entries(&entries);
            }
        }
    }

    let mut g0 = SparseMat::new(ring, n0);
    for m in 0..=depth {
        let count = tree.vertices(m);
        for a in 0..count {
            for i in 0..n {
                if a + 1 < count {
                    g0.push_row(vec![((vertex_offsets[m as usize] + (a + 1) * n + i) as u32, 1)]);
                } else {
                    let start = vertex_offsets[m as usize];
                    let entries: Vec<(usize, i64)> =
                        unipotent.row(i).iter().enumerate().map(|(c, &v)| (start + c, v as i64)).collect();
                    g0.push_entries(&entries);
                }
            }
        }
    }
    let mut g1 = SparseMat::new(ring, n1);
    for m in 0..depth {
        let count = tree.edges(m);
        for b in 0..count {
            let nb = (b + 1) % count;
            for i in 0..d {
                g1.push_row(vec![((edge_offsets[m as usize] + nb * d + i) as u32, 1)]);
            }
        }
    }

    let cc = ChainComplexData {
        tree,
        ring,
        module: w,
        rho_choice,
        twist,
        fixed_np,
        fixed_n,
        rho,
        unipotent,
        vertex_offsets,
        edge_offsets,
        boundary,
        g0,
        g1,
    };
    check_conditions(&cc)?;
    Ok(cc)
}

pub fn build_complex(w: &GModule, depth: u32, rho_choice: RhoChoice) -> Result<ChainComplexData, TreeError> {
    build_complex_twisted(w, depth, rho_choice, 1)
}

/// The coefficient-system axioms in the finite model: edge spaces carry the
/// trivial action of their stabilizer, edges inject onto the stabilizer
/// invariants of the lower vertex, and at each vertex the child edges
/// generate everything.
fn check_conditions(cc: &ChainComplexData) -> Result<(), TreeError> {
    let ring = cc.ring;
    // (a): g^{p^{m+1}} fixes every level-m edge chain
    for m in 0..cc.depth() {
        let range = cc.level_range1(m);
        let mut v = vec![0u32; cc.dim_c1()];
        for (i, c) in range.clone().enumerate() {
            v[c] = (i as u32 % (ring.modulus() - 1)) + 1;
        }
        let mut x = v.clone();
        for _ in 0..cc.tree.edges(m) {
            x = cc.act1(&x);
        }
        if x[range.clone()] != v[range] {
            return Err(TreeError::Axiom("edge stabilizer acts nontrivially".into()));
        }
    }
    // (b): the child-side map is ρ, injective with image W^N; the parent-side
    // image of the digit-j edge is W^{N'} n^{u j}, of dimension d
    let fixed_n = howell_form(&cc.fixed_n);
    if howell_form(&cc.rho) != fixed_n {
        return Err(TreeError::RhoNotIso);
    }
    let mut power = Mat::identity(ring, cc.n());
    let mut images = Vec::new();
    for _ in 0..ring.p() {
        let img = cc.fixed_np.mul(&power);
        if howell_form(&img).len() != cc.d() {
            return Err(TreeError::Axiom("edge space does not inject".into()));
        }
        images.push(img);
        power = power.mul(&cc.unipotent);
    }
    // (c): the p child edges of a vertex generate W
    let refs: Vec<&Mat> = images.iter().collect();
    if !howell_form(&Mat::vstack(&refs)).is_full() {
        return Err(TreeError::NotGenerated);
    }
    Ok(())
}
