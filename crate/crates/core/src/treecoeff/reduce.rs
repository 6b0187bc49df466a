use rand::Rng;

use super::complex::{level_sign, ChainComplexData};
use super::TreeError;
use crate::exactalg::{howell_form, vec_add, vec_sub, CanonicalBasis, HowellTransform, SparseSolver};

/// Solvers reused across reductions on one complex.
pub struct ReduceContext<'a> {
    pub cc: &'a ChainComplexData,
    boundary: SparseSolver,
    rho: HowellTransform,
    fixed_n: CanonicalBasis,
}

impl<'a> ReduceContext<'a> {
    pub fn new(cc: &'a ChainComplexData) -> Self {
        ReduceContext {
            cc,
            boundary: SparseSolver::new(&cc.boundary, &cc.deep_first_order()),
            rho: HowellTransform::new(&cc.rho),
            fixed_n: howell_form(&cc.fixed_n),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    /// The level-0 vector, an element of `W^N`.
    pub w: Vec<u32>,
    /// 1-chain `B` with `c - ι(w) = ∂B`.
    pub certificate: Vec<u32>,
    pub rounds: usize,
    /// `n(c)` of the input.
    pub start_level: u32,
}

/// Deepest level on which the 0-chain is nonzero.
pub fn support_level(cc: &ChainComplexData, c: &[u32]) -> Option<u32> {
    (0..=cc.depth()).rev().find(|&m| c[cc.level_range0(m)].iter().any(|&x| x != 0))
}

fn fail(msg: String) -> TreeError {
    TreeError::AssertionFailed(msg)
}

/// Writes a 0-chain with translation-fixed class as `ι(w) + ∂B`, peeling the
/// deepest level one round at a time.
pub fn reduce_chain(ctx: &ReduceContext<'_>, c: &[u32]) -> Result<Reduction, TreeError> {
    let cc = ctx.cc;
    assert_eq!(c.len(), cc.dim_c0(), "0-chain has the wrong length");
    let start_level = support_level(cc, c).unwrap_or(0);
    let mut cur = c.to_vec();
    let mut cert = vec![0u32; cc.dim_c1()];
    let mut rounds = 0;
    let w = loop {
        let n = support_level(cc, &cur).unwrap_or(0);
        let diff = vec_sub(cc.ring, &cc.act0(&cur), &cur);
        let b = ctx.boundary.solve(&diff).ok_or(TreeError::NotFixed)?;

        for m in n..cc.depth() {
            if b[cc.level_range1(m)].iter().any(|&x| x != 0) {
                return Err(fail(format!("b({m},{}) nonzero at support level {n}", m + 1)));
            }
        }
        for m in 0..n {
            let range = cc.level_range1(m);
            let mut x = vec![0u32; cc.dim_c1()];
            x[range.clone()].copy_from_slice(&b[range]);
            let mut total = vec![0u32; cc.dim_c1()];
            for _ in 0..cc.tree.edges(m) {
                total = vec_add(cc.ring, &total, &x);
                x = cc.act1(&x);
            }
            if total.iter().any(|&v| v != 0) {
                return Err(fail(format!("orbit sum of b({m},{}) is nonzero", m + 1)));
            }
        }
        let top = cc.level_range0(n);
        let mut moved = cur.clone();
        for _ in 0..cc.tree.vertices(n) {
            moved = cc.act0(&moved);
        }
        if moved[top.clone()] != cur[top] {
            return Err(fail(format!("top level {n} not fixed by g^(p^{n})")));
        }

        if n == 0 {
            let w = cur[cc.vertex_block(0, 0)].to_vec();
            if !ctx.fixed_n.contains(&w) {
                return Err(fail("level-0 vector outside W^N".into()));
            }
            break w;
        }
        let s = level_sign(cc.ring, n);
        let mut delta = vec![0u32; cc.dim_c1()];
        for a in 0..cc.tree.vertices(n) {
            let block = &cur[cc.vertex_block(n, a)];
            if block.iter().all(|&x| x == 0) {
                continue;
            }
            let beta = ctx.rho.solve(block).ok_or_else(|| fail(format!("block ({n},{a}) outside W^N")))?;
            let range = cc.edge_block(n - 1, a);
            for (slot, x) in delta[range].iter_mut().zip(beta) {
                *slot = cc.ring.mul(s, x);
            }
        }
        cur = vec_sub(cc.ring, &cur, &cc.apply_boundary(&delta));
        cert = vec_add(cc.ring, &cert, &delta);
        rounds += 1;
        if support_level(cc, &cur).is_some_and(|m| m >= n) {
            return Err(fail(format!("peeling did not lower the support below {n}")));
        }
    };
    let rest = vec_sub(cc.ring, c, &cc.iota_vec(&w));
    if cc.apply_boundary(&cert) != rest {
        return Err(fail("certificate does not reproduce c - ι(w)".into()));
    }
    Ok(Reduction { w, certificate: cert, rounds, start_level })
}

/// A random combination of the given fixed-class lifts plus a random boundary.
pub fn random_fixed_class<R: Rng>(cc: &ChainComplexData, lifts: &[Vec<u32>], rng: &mut R) -> Vec<u32> {
    let q = cc.ring.modulus();
    let mut c = vec![0u32; cc.dim_c0()];
    for l in lifts {
        let f = rng.gen_range(0..q);
        for (x, &y) in c.iter_mut().zip(l) {
            *x = cc.ring.add(*x, cc.ring.mul(f, y));
        }
    }
    let b: Vec<u32> = (0..cc.dim_c1()).map(|_| rng.gen_range(0..q)).collect();
    vec_add(cc.ring, &c, &cc.apply_boundary(&b))
}
