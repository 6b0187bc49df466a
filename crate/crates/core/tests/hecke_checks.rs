use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use coefflab::exactalg::{howell_form, kernel, split_test, Mat, RingSpec};
use coefflab::grouprep::{build_group, GroupKind};
use coefflab::hecke::{
    build_hecke, check_associativity, check_flatness, check_hecke_dim, check_vytastra, find_section,
    invariants_jbar_star, random_quotient_module, tensor_k, HeckeAlgebra, HeckeModule,
};
use coefflab::lemmaverify::{LemmaReport, Verdict};
use proptest::prelude::*;

fn field(p: u32) -> HeckeAlgebra {
    build_hecke(p, RingSpec::field(p).unwrap()).unwrap()
}

fn all_pass(r: &LemmaReport) -> bool {
    !r.is_rejected() && r.claims.iter().all(|c| c.verdict == Verdict::Pass)
}

/// Number of sets `N g N` in `GL_2(F_p)`, by enumerating elements.
fn brute_double_cosets(p: u32) -> usize {
    let g = build_group(GroupKind::GL2, p).unwrap();
    let n = g.upper_unipotent().elements;
    let mut seen: BTreeSet<Vec<[u32; 4]>> = BTreeSet::new();
    for &x in g.elements() {
        let mut set: Vec<[u32; 4]> =
            n.iter().flat_map(|&a| n.iter().map(move |&b| (a, b))).map(|(a, b)| g.mul(g.mul(a, x), b).0).collect();
        set.sort_unstable();
        set.dedup();
        seen.insert(set);
    }
    seen.len()
}

#[test]
fn dimensions_follow_the_double_coset_count() {
    for (p, expected) in [(2, 2), (3, 8), (5, 32)] {
        let alg = field(p);
        assert_eq!(alg.dim(), expected);
        assert_eq!(brute_double_cosets(p), expected);
        let r = check_hecke_dim(&alg);
        assert!(all_pass(&r), "{r:?}");
        let (inv, h) = invariants_jbar_star(&alg);
        assert_eq!(inv, h);
        assert_eq!(alg.jbar_rank(), ((p * p - 1) * (p - 1)) as usize);
    }
}

#[test]
fn operators_span_the_commutant() {
    for p in [2, 3] {
        let alg = field(p);
        let k = alg.ring();
        let n = alg.jbar_rank();
        let actions = alg.jbar().module.generator_actions();
        // X with X A = A X for every generator, as a kernel in n^2 unknowns
        let mut sys = Mat::zeros(k, n * n, n * n * actions.len());
        for (gi, a) in actions.iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    let row = sys.row_mut(i * n + j);
                    for c in 0..n {
                        // (X A)_{i c} gets X_{ij} A_{jc}; (A X)_{c j} gets A_{c i} X_{ij}
                        let base = gi * n * n;
                        row[base + i * n + c] = k.add(row[base + i * n + c], a.get(j, c));
                        row[base + c * n + j] = k.sub(row[base + c * n + j], a.get(c, i));
                    }
                }
            }
        }
        assert_eq!(kernel(&sys).len(), alg.dim());
        for d in 0..alg.dim() {
            for a in actions {
                assert_eq!(alg.op(d).mul(a), a.mul(alg.op(d)));
            }
        }
        let flat: Vec<Vec<u32>> = (0..alg.dim()).map(|d| alg.op(d).data().to_vec()).collect();
        assert_eq!(howell_form(&Mat::from_reduced_rows(k, n * n, &flat)).len(), alg.dim());
    }
}

#[test]
fn structure_constants_match_convolution() {
    for p in [2, 3] {
        let alg = field(p);
        let g = build_group(GroupKind::GL2, p).unwrap();
        let unip = g.upper_unipotent().elements;
        let jb = alg.jbar();
        let order = g.order();
        // indicator of each double coset on group elements
        let mut class = vec![usize::MAX; order];
        for (d, members) in alg.double_cosets.iter().enumerate() {
            for &c in members {
                for &u in &unip {
                    class[g.index_of(&g.mul(u, jb.cosets[c])).unwrap()] = d;
                }
            }
        }
        assert!(class.iter().all(|&c| c != usize::MAX));
        let reps: Vec<_> = alg.double_cosets.iter().map(|m| jb.cosets[m[0]]).collect();
        for a in 0..alg.dim() {
            for b in 0..alg.dim() {
                for (k, &x) in reps.iter().enumerate() {
                    // (1_a * 1_b)(x) / |N| with (f * g)(x) = sum_z f(z) g(z^-1 x)
                    let count = g
                        .elements()
                        .iter()
                        .filter(|&&z| class[g.index_of(&z).unwrap()] == a)
                        .filter(|&&z| class[g.index_of(&g.mul(g.inv(z), x)).unwrap()] == b)
                        .count();
                    assert_eq!(count % unip.len(), 0);
                    let expect = (count / unip.len()) as u32 % p;
                    assert_eq!(alg.basis_mul(a, b)[k], expect, "p={p} a={a} b={b} k={k}");
                }
            }
        }
    }
}

#[test]
fn associativity_and_units() {
    for p in [2, 3, 5] {
        let r = check_associativity(&field(p));
        assert!(all_pass(&r), "{r:?}");
    }
    let alg = build_hecke(3, RingSpec::new(3, 2).unwrap()).unwrap();
    assert!(all_pass(&check_associativity(&alg)));
    assert!(build_hecke(7, RingSpec::field(7).unwrap()).is_err());
}

#[test]
fn tensor_of_free_and_zero_modules() {
    for p in [2, 3] {
        let alg = field(p);
        let n = alg.jbar_rank() as u32;
        let h1 = HeckeModule::free(&alg, 1);
        let k1 = tensor_k(&alg, &h1).unwrap();
        assert_eq!(k1.module.length(), n);
        assert_eq!(k1.module.generator_actions(), alg.jbar().module.generator_actions());
        let zero = HeckeModule::quotient(&alg, 1, vec![alg.unit()]);
        assert_eq!(zero.length(), 0);
        assert_eq!(tensor_k(&alg, &zero).unwrap().module.length(), 0);
        let h2 = h1.direct_sum(&h1, &alg);
        let k2 = tensor_k(&alg, &h2).unwrap();
        assert_eq!(k2.module.length(), 2 * n);
        assert_eq!(k2.module.cover(), 2 * n as usize);
    }
}

#[test]
fn tensor_is_additive() {
    let alg = field(3);
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..5 {
        let a = random_quotient_module(&alg, 1, 1, &mut rng);
        let b = random_quotient_module(&alg, 2, 2, &mut rng);
        let ka = tensor_k(&alg, &a).unwrap().module.length();
        let kb = tensor_k(&alg, &b).unwrap().module.length();
        let sum = a.direct_sum(&b, &alg);
        assert_eq!(sum.length(), a.length() + b.length());
        assert_eq!(tensor_k(&alg, &sum).unwrap().module.length(), ka + kb);
    }
}

#[test]
fn modules_from_action_matrices() {
    let alg = field(3);
    let regular: Vec<Mat> = (0..alg.dim()).map(|b| alg.right_regular(b)).collect();
    let m = HeckeModule::from_actions(&alg, &regular).unwrap();
    assert!(m.axioms_hold(&alg));
    assert_eq!(m.length(), alg.dim() as u32);
    assert_eq!(tensor_k(&alg, &m).unwrap().module.length(), alg.jbar_rank() as u32);
    assert!(all_pass(&check_vytastra(&alg, &m, "regular")));
    let mut bad = regular.clone();
    bad[1] = Mat::identity(alg.ring(), alg.dim());
    assert!(HeckeModule::from_actions(&alg, &bad).is_err());
}

#[test]
fn comparison_is_bijective_over_the_field() {
    for p in [2, 3, 5] {
        let alg = field(p);
        let r = check_vytastra(&alg, &HeckeModule::free(&alg, 1), "H");
        assert!(all_pass(&r), "{r:?}");
        assert_eq!(r.get_dim("K(M)^N"), Some(alg.dim() as u64));
    }
    let alg = field(3);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..12 {
        let m = random_quotient_module(&alg, 1 + i % 2, 1 + i % 3, &mut rng);
        let r = check_vytastra(&alg, &m, &format!("quotient:{i}"));
        assert!(all_pass(&r), "{r:?}");
        assert_eq!(r.get_dim("M"), r.get_dim("K(M)^N"));
    }
}

#[test]
fn jbar_is_projective_over_the_field() {
    for p in [2, 3, 5] {
        let r = check_flatness(&field(p));
        assert!(all_pass(&r), "{r:?}");
        assert!(!r.witnesses.is_empty());
    }
}

#[test]
fn section_search_agrees_with_split_test() {
    for (p, e) in [(2, 1), (3, 1), (2, 2)] {
        let alg = build_hecke(p, RingSpec::new(p, e).unwrap()).unwrap();
        let res = find_section(&alg);
        let t = res.generators.len();
        let id = Mat::identity(alg.ring(), t);
        let constraints: Vec<(Mat, Mat)> =
            (0..alg.dim()).map(|b| (alg.op(b).clone(), id.kron(&alg.left_regular(b)))).collect();
        let generic = split_test(&res.surjection, &constraints).unwrap();
        assert_eq!(generic.is_some(), res.section.is_some(), "p={p} e={e}");
    }
}

#[test]
fn prime_power_coefficients_are_recorded_only() {
    let alg = build_hecke(3, RingSpec::new(3, 2).unwrap()).unwrap();
    let r = check_flatness(&alg);
    assert_eq!(r.claim_verdict("section exists"), Some(&Verdict::Recorded));
    let r = check_vytastra(&alg, &HeckeModule::free(&alg, 1), "H");
    assert!(r.claims.iter().all(|c| c.verdict == Verdict::Recorded));
    assert!(r.passed());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_products_associate(a in prop::collection::vec(0u32..3, 8), b in prop::collection::vec(0u32..3, 8), c in prop::collection::vec(0u32..3, 8)) {
        let alg = field(3);
        prop_assert_eq!(alg.mul(&alg.mul(&a, &b), &c), alg.mul(&a, &alg.mul(&b, &c)));
        let ops = alg.op_of(&b).mul(&alg.op_of(&a));
        prop_assert_eq!(alg.op_of(&alg.mul(&a, &b)), ops);
    }
}
