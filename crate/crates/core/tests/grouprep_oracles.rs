use std::sync::Arc;

use coefflab::exactalg::{Mat, RingSpec};
use coefflab::grouprep::{
    build_group, builtin_catalog, composition_length, composition_length_with, decompose_jbar, h1_procyclic,
    induce_cyclic, is_irreducible, jbar, steinberg, Catalog, CyclicModule, Elem, GModule, GroupData, GroupKind,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn brute_group_order(kind: GroupKind, p: u32) -> usize {
    let mut n = 0;
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                for d in 0..p {
                    let det = (a * d + p * p - b * c) % p;
                    let ok = match kind {
                        GroupKind::SL2 => det == 1,
                        GroupKind::GL2 => det != 0,
                    };
                    n += ok as usize;
                }
            }
        }
    }
    n
}

fn all_vectors(p: u32, n: usize) -> impl Iterator<Item = Vec<u32>> {
    let total = (p as u64).pow(n as u32);
    (0..total).map(move |mut c| {
        (0..n)
            .map(|_| {
                let d = (c % p as u64) as u32;
                c /= p as u64;
                d
            })
            .collect()
    })
}

/// Number of vectors of a free module over `F_p` fixed by all given elements.
fn brute_fixed_count(m: &GModule, elems: &[Elem]) -> usize {
    let mats: Vec<Mat> = elems.iter().map(|g| m.act(g)).collect();
    all_vectors(m.ring().p(), m.cover()).filter(|v| mats.iter().all(|a| a.apply(v) == *v)).count()
}

fn sl2(p: u32) -> Arc<GroupData> {
    build_group(GroupKind::SL2, p).unwrap()
}

#[test]
fn group_orders_match_enumeration() {
    for (kind, p, expect) in [(GroupKind::SL2, 2, 6), (GroupKind::SL2, 3, 24), (GroupKind::GL2, 3, 48)] {
        assert_eq!(brute_group_order(kind, p), expect);
        assert_eq!(build_group(kind, p).unwrap().order(), expect);
    }
    for p in [2, 3, 5, 7] {
        for kind in [GroupKind::SL2, GroupKind::GL2] {
            assert_eq!(build_group(kind, p).unwrap().order(), brute_group_order(kind, p));
        }
    }
    assert!(build_group(GroupKind::SL2, 11).is_err());
}

#[test]
fn distinguished_subgroups() {
    for p in [2, 3, 5, 7] {
        for kind in [GroupKind::SL2, GroupKind::GL2] {
            let g = build_group(kind, p).unwrap();
            let n = g.upper_unipotent();
            let np = g.lower_unipotent();
            assert_eq!(n.order(), p as usize);
            let w = g.w0();
            let mut conj: Vec<Elem> = np.elements.iter().map(|&x| g.conj(w, x)).collect();
            conj.sort();
            assert_eq!(conj, n.elements);
            let others = g.other_unipotent_radicals();
            assert_eq!(others.len(), p as usize);
            assert!(others.iter().all(|s| s.elements != n.elements));
        }
    }
}

#[test]
fn jbar_ranks_and_phi() {
    for (kind, p, rank) in [(GroupKind::SL2, 3, 8), (GroupKind::SL2, 2, 3), (GroupKind::GL2, 3, 16)] {
        let g = build_group(kind, p).unwrap();
        let jb = jbar(g.clone(), g.field()).unwrap();
        assert_eq!(jb.module.cover(), rank);
        assert_eq!(jb.module.cover(), g.order() / p as usize);
        assert!(jb.module.generated(std::slice::from_ref(&jb.phi)).is_full());
        let n = g.nbar();
        assert_eq!(jb.module.act_vec(&jb.phi, &n), jb.phi);
    }
}

#[test]
fn jbar_invariants_match_enumeration() {
    let g = sl2(3);
    let jb = jbar(g.clone(), g.field()).unwrap();
    let inv = jb.module.invariants(&[g.nbar()]);
    assert_eq!(inv.len(), 4);
    assert_eq!(brute_fixed_count(&jb.module, &[g.nbar()]), 3usize.pow(4));
    let whole = jb.module.invariants(g.generators());
    assert_eq!(whole.len(), 1);
    assert_eq!(brute_fixed_count(&jb.module, g.generators()), 3);
    let t = GModule::trivial(g.clone(), g.field());
    assert!(t.invariants(&[g.nbar()]).is_full());
    for p in [2, 3, 5] {
        let g = sl2(p);
        let jb = jbar(g.clone(), g.field()).unwrap();
        assert_eq!(jb.module.invariants(&[g.nbar()]).len(), 2 * (p as usize - 1));
    }
}

#[test]
fn coinvariants_examples() {
    let g = sl2(3);
    let k = g.field();
    let jb = jbar(g.clone(), k).unwrap();
    assert_eq!(jb.module.coinvariants(&[g.nbar()]).length(), 4);
    let t = GModule::trivial(g.clone(), k);
    assert_eq!(t.coinvariants(&[g.nbar()]).length(), 1);
    // the regular module of the unipotent subgroup
    let c = Mat::from_rows(k, 3, &[[0, 1, 0], [0, 0, 1], [1, 0, 0]]).unwrap();
    let reg = CyclicModule::free(c.clone());
    assert_eq!(h1_procyclic(&reg).unwrap().length(), 1);
    // cokernel by enumeration: image of c - 1 has 3^2 elements
    let d = c.minus_identity();
    let img: std::collections::BTreeSet<Vec<u32>> = all_vectors(3, 3).map(|v| d.apply(&v)).collect();
    assert_eq!(img.len(), 9);
}

#[test]
fn generated_submodules() {
    let g = sl2(3);
    let jb = jbar(g.clone(), g.field()).unwrap();
    let zero = jb.module.generated(&[vec![0; 8]]);
    assert!(zero.is_empty());
    let inv_np = jb.module.invariants(&[g.nbar_prime()]);
    let by_n = jb.module.generated_by_elements(inv_np.rows(), &[g.nbar()]);
    assert!(by_n.is_full());
}

#[test]
fn induction_from_trivial_is_regular() {
    let k = RingSpec::field(3).unwrap();
    let m = CyclicModule::free(Mat::identity(k, 1));
    let ind = induce_cyclic(&m, 1, 2).unwrap();
    let reg = Mat::from_rows(k, 3, &[[0, 1, 0], [0, 0, 1], [1, 0, 0]]).unwrap();
    assert_eq!(ind.op, reg);
}

#[test]
fn induction_rank_law_and_shapiro() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for p in [2u32, 3, 5] {
        let k = RingSpec::field(p).unwrap();
        for _ in 0..6 {
            let n = rng.gen_range(1..=4);
            // random unipotent operator: 1 + strictly upper triangular has order dividing p when n <= p
            let mut c = Mat::identity(k, n);
            for i in 0..n {
                for j in i + 1..n {
                    c.set(i, j, rng.gen_range(0..p));
                }
            }
            if n > p as usize {
                continue;
            }
            let m = CyclicModule::free(c.clone());
            for level in 0..=2 {
                let ind = induce_cyclic(&m, level, 2).unwrap();
                let blocks = (p as usize).pow(level);
                assert_eq!(ind.cover(), blocks * n);
                let gp = ind.op.pow(blocks as u64);
                for i in 0..n {
                    for j in 0..n {
                        assert_eq!(gp.get(i, j), c.get(i, j));
                    }
                }
                assert_eq!(h1_procyclic(&ind).unwrap().length(), h1_procyclic(&m).unwrap().length());
            }
        }
    }
}

#[test]
fn action_law_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (kind, p) in [(GroupKind::SL2, 3), (GroupKind::GL2, 3), (GroupKind::SL2, 5)] {
        let cat = builtin_catalog(kind, RingSpec::field(p).unwrap(), 1).unwrap();
        let g = cat.group.clone();
        for entry in &cat.entries {
            let m = &entry.module;
            for _ in 0..100 {
                let a = g.elements()[rng.gen_range(0..g.order())];
                let b = g.elements()[rng.gen_range(0..g.order())];
                let v: Vec<u32> = (0..m.cover()).map(|_| rng.gen_range(0..p)).collect();
                let lhs = m.act_vec(&m.act_vec(&v, &a), &b);
                let rhs = m.act_vec(&v, &g.mul(a, b));
                assert_eq!(lhs, rhs, "{}", entry.name);
            }
            assert_eq!(m.act(&g.identity()), Mat::identity(m.ring(), m.cover()));
        }
    }
}

#[test]
fn conjugate_unipotents_have_equal_invariants() {
    for (p, e) in [(2, 1), (3, 1), (5, 1), (3, 2), (2, 3)] {
        let cat = builtin_catalog(GroupKind::SL2, RingSpec::new(p, e).unwrap(), 2).unwrap();
        let g = &cat.group;
        for entry in &cat.entries {
            let m = &entry.module;
            let a = m.sub_length(&m.invariants(&[g.nbar()]));
            let b = m.sub_length(&m.invariants(&[g.nbar_prime()]));
            assert_eq!(a, b, "{}", entry.name);
        }
    }
}

#[test]
fn principal_series_decomposition() {
    for (p, count, dim) in [(2, 1, 3), (3, 2, 4), (5, 4, 6)] {
        let g = sl2(p);
        let jb = jbar(g.clone(), g.field()).unwrap();
        let parts = decompose_jbar(&jb).unwrap();
        assert_eq!(parts.len(), count);
        let mut total = 0;
        for s in &parts {
            assert_eq!(s.module.cover(), dim);
            assert!(jb.module.is_stable(&s.span));
            let m = s.module.compact().0;
            assert_eq!(m.invariants(&[g.nbar()]).len(), 2);
            assert_eq!(composition_length(&m), 2);
            total += s.module.cover();
        }
        assert_eq!(total, g.order() / p as usize);
        let sum = parts.iter().fold(coefflab::exactalg::CanonicalBasis::zero(g.field(), total), |acc, s| acc.sum(&s.span));
        assert!(sum.is_full());
    }
}

#[test]
fn composition_lengths() {
    let g = sl2(3);
    let k = g.field();
    assert_eq!(composition_length(&GModule::trivial(g.clone(), k)), 1);
    let jb = jbar(g.clone(), k).unwrap();
    assert_eq!(composition_length(&jb.module), 4);
    for seed in 1..4 {
        assert_eq!(composition_length_with(&jb.module, seed), 4);
    }
    assert!(!is_irreducible(&jb.module));
    assert!(is_irreducible(&steinberg(&jb).unwrap()));
}

#[test]
fn catalog_round_trip_and_names() {
    for (p, e) in [(2, 1), (3, 1), (3, 2)] {
        let cat = builtin_catalog(GroupKind::SL2, RingSpec::new(p, e).unwrap(), 9).unwrap();
        let text = cat.to_json();
        let back = Catalog::from_json(&text).unwrap();
        assert_eq!(back.to_file(), cat.to_file());
        for (a, b) in back.entries.iter().zip(&cat.entries) {
            assert_eq!(a.module.generator_actions(), b.module.generator_actions());
            assert_eq!(a.module.relations(), b.module.relations());
        }
    }
    let cat2 = builtin_catalog(GroupKind::SL2, RingSpec::field(2).unwrap(), 0).unwrap();
    assert_eq!(cat2.names().iter().filter(|n| n.starts_with("ps:")).count(), 1);
}
