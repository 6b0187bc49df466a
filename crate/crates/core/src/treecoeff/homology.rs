use super::complex::ChainComplexData;
use crate::exactalg::{
    dense_to_sparse, kernel, sparse_echelon, sparse_kernel, sparse_to_dense, Mat, SparseBasis, SparseMat,
};

/// `H_0 = C_0 / im ∂`, presented by an echelon basis of the image in
/// deep-first column order, with the translation acting on `C_0`.
#[derive(Clone, Debug)]
pub struct H0 {
    pub image: SparseBasis,
    /// `perm[c]` is the position of original column `c` in the echelon order.
    pub perm: Vec<usize>,
    inv_perm: Vec<usize>,
    pub action: SparseMat,
}

impl H0 {
    pub fn new(cc: &ChainComplexData) -> H0 {
        let (image, perm) = cc.boundary_echelon();
        let mut inv_perm = vec![0; perm.len()];
        for (c, &p) in perm.iter().enumerate() {
            inv_perm[p] = c;
        }
        H0 { image, perm, inv_perm, action: cc.g0.clone() }
    }

    pub fn ambient(&self) -> usize {
        self.perm.len()
    }

    pub fn length(&self) -> u32 {
        self.image.ring().e() * self.ambient() as u32 - self.image.length()
    }

    /// The reduced representative of the class of `c`.
    pub fn normal_form(&self, c: &[u32]) -> Vec<u32> {
        let mut v = vec![0; c.len()];
        for (i, &x) in c.iter().enumerate() {
            v[self.perm[i]] = x;
        }
        self.image.reduce_in_place(&mut v);
        let mut out = vec![0; c.len()];
        for (i, &x) in v.iter().enumerate() {
            out[self.inv_perm[i]] = x;
        }
        out
    }

    pub fn is_zero(&self, c: &[u32]) -> bool {
        self.normal_form(c).iter().all(|&x| x == 0)
    }

    /// Original indices of the columns without a pivot; over a field their
    /// unit vectors form a basis of `H_0`.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient()];
        for pv in self.image.pivots() {
            is_pivot[pv.col] = true;
        }
        (0..self.ambient()).filter(|&i| !is_pivot[i]).map(|i| self.inv_perm[i]).collect()
    }

    pub fn act(&self, c: &[u32]) -> Vec<u32> {
        self.action.apply(c)
    }
}

#[derive(Clone, Debug)]
pub struct Homology {
    pub h0: H0,
    /// Basis of `ker ∂` as 1-chains.
    pub h1: Vec<Vec<u32>>,
}

pub fn homology(cc: &ChainComplexData) -> Homology {
    let h0 = H0::new(cc);
    let ker = sparse_kernel(&cc.boundary.permute_cols(&h0.perm));
    let h1 = ker.rows().iter().map(|r| sparse_to_dense(r, cc.dim_c1())).collect();
    Homology { h0, h1 }
}

/// `dim H_0^Γ`, computed as the dimension of the coinvariants
/// `C_0 / (im ∂ + im(g - 1))`.
pub fn h0_gamma_dim(cc: &ChainComplexData) -> usize {
    let mut stacked = cc.boundary.clone();
    stacked.extend(&cc.g0.sub_identity());
    let perm = cc.deep_first_order();
    cc.dim_c0() - sparse_echelon(&stacked.permute_cols(&perm)).len()
}

/// Dimension of the image of `W^N` in `H_0`.
pub fn iota_rank(cc: &ChainComplexData, h0: &H0) -> usize {
    let mut m = SparseMat::new(cc.ring, cc.dim_c0());
    for i in 0..cc.fixed_n.rows() {
        let nf = h0.normal_form(&cc.iota_vec(cc.fixed_n.row(i)));
        m.push_row(dense_to_sparse(&nf));
    }
    sparse_echelon(&m).len()
}

/// 0-chains whose classes form a basis of `H_0^Γ`, found as the kernel of
/// `g - 1` on the free-column basis of `H_0`. Dense in `dim H_0`.
pub fn fixed_class_lifts(cc: &ChainComplexData, h0: &H0) -> Vec<Vec<u32>> {
    let free = h0.free_columns();
    let mut pos = vec![usize::MAX; h0.ambient()];
    for (i, &c) in free.iter().enumerate() {
        pos[c] = i;
    }
    let ring = cc.ring;
    let mut t = Mat::zeros(ring, free.len(), free.len());
    for (i, &c) in free.iter().enumerate() {
        let mut v = sparse_to_dense(cc.g0.row(c), h0.ambient());
        v[c] = ring.sub(v[c], 1);
        let nf = h0.normal_form(&v);
        for (j, &x) in nf.iter().enumerate() {
            if x != 0 {
                debug_assert!(pos[j] != usize::MAX, "normal forms live on free columns");
                t.set(i, pos[j], x);
            }
        }
    }
    kernel(&t)
        .rows()
        .iter()
        .map(|k| {
            let mut c = vec![0; h0.ambient()];
            for (i, &x) in k.iter().enumerate() {
                c[free[i]] = x;
            }
            c
        })
        .collect()
}
