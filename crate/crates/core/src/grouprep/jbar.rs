use std::collections::HashMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::group::{Elem, GroupData, GroupKind};
use super::module::GModule;
use super::RepError;
use crate::exactalg::{kernel, CanonicalBasis, Mat, RingSpec};

/// The permutation module on the right cosets of the upper unipotent
/// subgroup, with basis `e_{N x}` and `e_{N x} * g = e_{N x g}`.
#[derive(Clone, Debug)]
pub struct JBar {
    pub module: GModule,
    /// Smallest element of each coset, in basis order.
    pub cosets: Vec<Elem>,
    /// Indicator of the identity coset.
    pub phi: Vec<u32>,
    coset_index: HashMap<Elem, usize>,
}

impl JBar {
    pub fn new(group: Arc<GroupData>, ring: RingSpec) -> Result<Self, RepError> {
        if ring.p() != group.p() {
            return Err(RepError::Shape("ring and group have different primes".into()));
        }
        let n_elems = group.upper_unipotent().elements;
        let mut coset_index = HashMap::new();
        let mut cosets = Vec::new();
        for &x in group.elements() {
            let rep = n_elems.iter().map(|&n| group.mul(n, x)).min().expect("nonempty");
            if let std::collections::hash_map::Entry::Vacant(e) = coset_index.entry(rep) {
                e.insert(cosets.len());
                cosets.push(rep);
            }
        }
        let canon = |x: Elem| n_elems.iter().map(|&n| group.mul(n, x)).min().expect("nonempty");
        let n = cosets.len();
        let gens = group
            .generators()
            .iter()
            .map(|&g| {
                let mut a = Mat::zeros(ring, n, n);
                for (i, &x) in cosets.iter().enumerate() {
                    a.set(i, coset_index[&canon(group.mul(x, g))], 1);
                }
                a
            })
            .collect();
        let module = GModule::free(group.clone(), gens)?;
        let mut phi = vec![0; n];
        phi[coset_index[&group.identity()]] = 1;
        Ok(JBar { module, cosets, phi, coset_index })
    }

    fn canonical(&self, x: Elem) -> Elem {
        let g = self.module.group();
        let nb = g.nbar();
        let mut best = x;
        let mut y = x;
        for _ in 1..g.p() {
            y = g.mul(nb, y);
            best = best.min(y);
        }
        best
    }

    /// Index of the coset `N x`.
    pub fn coset_of(&self, x: Elem) -> usize {
        self.coset_index[&self.canonical(x)]
    }

    /// Left translation `e_{N x} -> e_{N t x}` by an element normalizing `N`;
    /// it commutes with the group action.
    pub fn left_translation(&self, t: Elem) -> Mat {
        let g = self.module.group();
        let n = self.cosets.len();
        let mut a = Mat::zeros(self.module.ring(), n, n);
        for (i, &x) in self.cosets.iter().enumerate() {
            a.set(i, self.coset_of(g.mul(t, x)), 1);
        }
        a
    }
}

pub fn jbar(group: Arc<GroupData>, ring: RingSpec) -> Result<JBar, RepError> {
    JBar::new(group, ring)
}

/// One summand of the eigenspace decomposition of `jbar` under left torus
/// translation.
#[derive(Clone, Debug)]
pub struct Summand {
    pub index: u32,
    pub eigenvalue: u32,
    /// The eigenspace inside `jbar`.
    pub span: CanonicalBasis,
    pub module: GModule,
}

/// Eigenspaces of `e_{N x} -> e_{N t x}` for `t = diag(z, 1/z)`; summand `i`
/// has eigenvalue `z^i`. Requires `SL_2` and a field.
pub fn decompose_jbar(jb: &JBar) -> Result<Vec<Summand>, RepError> {
    let g = jb.module.group();
    let ring = jb.module.ring();
    if !ring.is_field() {
        return Err(RepError::NeedsField);
    }
    if g.kind() != GroupKind::SL2 {
        return Err(RepError::Shape("decomposition is defined for SL2".into()));
    }
    let t = jb.left_translation(g.torus_generator());
    let z = ring.primitive_root();
    let mut out = Vec::new();
    let mut lambda = 1u32;
    for i in 0..ring.p() - 1 {
        let shifted = t.sub(&Mat::scalar(ring, t.rows(), lambda));
        let span = kernel(&shifted);
        let (module, _) = jb.module.submodule(&span)?;
        out.push(Summand { index: i, eigenvalue: lambda, span, module });
        lambda = ring.mul(lambda, z);
    }
    Ok(out)
}

/// The constant functions inside `jbar`.
pub fn constants(jb: &JBar) -> CanonicalBasis {
    let n = jb.cosets.len();
    CanonicalBasis::from_rows(jb.module.ring(), n, vec![vec![1; n]])
}

/// `jbar` modulo the nontrivial-eigenvalue summands and the constants: the
/// irreducible constituent of the trivial-character summand other than `k`.
pub fn steinberg(jb: &JBar) -> Result<GModule, RepError> {
    Ok(steinberg_quotient(jb)?.0)
}

/// The Steinberg quotient together with the projection from `jbar`.
pub fn steinberg_quotient(jb: &JBar) -> Result<(GModule, Mat), RepError> {
    let parts = decompose_jbar(jb)?;
    let mut kill = constants(jb);
    for s in parts.iter().filter(|s| s.index != 0) {
        kill = kill.sum(&s.span);
    }
    Ok(jb.module.quotient(&kill)?.compact())
}

/// Fixed lines of a free module over `k` under `N`, as normalized vectors, in
/// an order scrambled by `choice_seed` (0 keeps the natural order).
fn fixed_lines(m: &GModule, choice_seed: u64) -> Vec<Vec<u32>> {
    let g = m.group();
    let fixed = m.invariants(&[g.nbar()]);
    let basis = fixed.rows().to_vec();
    let d = basis.len();
    let ring = m.ring();
    let p = ring.p();
    let n = m.cover();
    let mut lines = Vec::new();
    // coefficient vectors whose first nonzero entry is 1
    let total = (p as u64).pow(d as u32);
    for code in 1..total {
        let mut coeffs = Vec::with_capacity(d);
        let mut c = code;
        for _ in 0..d {
            coeffs.push((c % p as u64) as u32);
            c /= p as u64;
        }
        if coeffs.iter().find(|&&a| a != 0) != Some(&1) {
            continue;
        }
        let mut v = vec![0u32; n];
        for (a, b) in coeffs.iter().zip(&basis) {
            for (x, y) in v.iter_mut().zip(b) {
                *x = ring.add(*x, ring.mul(*a, *y));
            }
        }
        lines.push(v);
    }
    if choice_seed != 0 {
        lines.shuffle(&mut ChaCha8Rng::seed_from_u64(choice_seed));
    }
    lines
}

/// A nonzero module over `k` is irreducible iff every fixed line of the
/// unipotent subgroup generates all of it.
pub fn is_irreducible(m: &GModule) -> bool {
    assert!(m.ring().is_field() && m.is_free());
    if m.cover() == 0 {
        return false;
    }
    fixed_lines(m, 0).iter().all(|v| m.generated(std::slice::from_ref(v)).is_full())
}

/// An irreducible submodule, found by repeatedly passing to the submodule
/// generated by a fixed line that does not generate everything.
fn minimal_submodule(m: &GModule, choice_seed: u64) -> CanonicalBasis {
    let mut cur = CanonicalBasis::full(m.ring(), m.cover());
    loop {
        let (sub, incl) = m.submodule(&cur).expect("stable");
        let (sub, proj) = sub.compact();
        debug_assert!(proj.is_square());
        let mut next = None;
        for v in fixed_lines(&sub, choice_seed) {
            let s = sub.generated(std::slice::from_ref(&v));
            if !s.is_full() {
                next = Some(s);
                break;
            }
        }
        match next {
            None => return cur,
            Some(s) => {
                // back to the ambient cover: sub coordinates -> cur rows
                let rows = s.rows().iter().map(|r| incl.apply(r)).collect();
                cur = CanonicalBasis::from_rows(m.ring(), m.cover(), rows);
            }
        }
    }
}

/// Length of a composition series over `k`, peeling one irreducible
/// submodule at a time.
pub fn composition_length(m: &GModule) -> usize {
    composition_length_with(m, 0)
}

pub fn composition_length_with(m: &GModule, choice_seed: u64) -> usize {
    assert!(m.ring().is_field());
    let mut cur = if m.is_free() { m.clone() } else { m.compact().0 };
    let mut len = 0;
    while cur.cover() > 0 {
        let s = minimal_submodule(&cur, choice_seed);
        cur = cur.quotient(&s).expect("stable").compact().0;
        len += 1;
    }
    len
}
