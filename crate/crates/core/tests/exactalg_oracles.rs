use std::collections::BTreeSet;

use coefflab::exactalg::{
    howell_form, kernel, solve, span_size, sparse_howell, split_test, CanonicalBasis, Mat, RingSpec, SparseMat,
};
use proptest::prelude::*;

fn all_vectors(ring: RingSpec, n: usize) -> Vec<Vec<u32>> {
    let q = ring.modulus();
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u32>| {
                (0..q).map(move |a| {
                    let mut w = v.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
    }
    out
}

fn brute_span(m: &Mat) -> BTreeSet<Vec<u32>> {
    all_vectors(m.ring(), m.rows()).iter().map(|x| m.apply(x)).collect()
}

fn brute_kernel(m: &Mat) -> BTreeSet<Vec<u32>> {
    all_vectors(m.ring(), m.rows())
        .into_iter()
        .filter(|x| m.apply(x).iter().all(|&a| a == 0))
        .collect()
}

fn span_of(cb: &CanonicalBasis) -> BTreeSet<Vec<u32>> {
    if cb.is_empty() {
        return std::iter::once(vec![0; cb.ambient()]).collect();
    }
    brute_span(&cb.as_mat())
}

fn ring_strategy() -> impl Strategy<Value = RingSpec> {
    prop::sample::select(vec![(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1)])
        .prop_map(|(p, e)| RingSpec::new(p, e).unwrap())
}

fn small_mat() -> impl Strategy<Value = Mat> {
    (ring_strategy(), 1usize..=3, 1usize..=3).prop_flat_map(|(ring, r, c)| {
        prop::collection::vec(0..ring.modulus(), r * c).prop_map(move |d| Mat::from_vec(ring, r, c, d))
    })
}

fn mat_with_shape(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Mat> {
    (ring_strategy(), 0usize..=max_rows, 1usize..=max_cols).prop_flat_map(|(ring, r, c)| {
        prop::collection::vec(0..ring.modulus(), r * c).prop_map(move |d| Mat::from_vec(ring, r, c, d))
    })
}

#[test]
fn diagonal_two_over_z4_spans_four_elements() {
    let r = RingSpec::new(2, 2).unwrap();
    let m = Mat::from_rows(r, 2, &[[2, 0], [0, 2]]).unwrap();
    let h = howell_form(&m);
    assert_eq!(brute_span(&m).len(), 4);
    assert_eq!(span_size(&h), 4);
    assert_eq!(span_of(&h), brute_span(&m));
}

#[test]
fn multiplication_by_p_has_kernel_p() {
    for p in [2, 3, 5, 7] {
        let r = RingSpec::new(p, 2).unwrap();
        let m = Mat::from_rows(r, 1, &[[p as i64]]).unwrap();
        let k = kernel(&m);
        let expect: BTreeSet<Vec<u32>> = (0..p).map(|a| vec![a * p]).collect();
        assert_eq!(brute_kernel(&m), expect);
        assert_eq!(span_of(&k), expect);
        assert_eq!(k, howell_form(&Mat::from_rows(r, 1, &[[p as i64]]).unwrap()));
    }
}

#[test]
fn solve_picks_one_for_p_times_x_equals_p() {
    for p in [2, 3, 5, 7] {
        let r = RingSpec::new(p, 2).unwrap();
        let a = Mat::from_rows(r, 1, &[[p as i64]]).unwrap();
        let brute: Vec<u32> = (0..p * p).filter(|&x| r.mul(x, p) == p).collect();
        assert_eq!(brute.first(), Some(&1));
        assert_eq!(solve(&a, &[p]), Some(vec![1]));
    }
}

#[test]
fn residue_map_has_no_section_over_z_p2() {
    for p in [2, 3, 5] {
        let r = RingSpec::new(p, 2).unwrap();
        // a map s: Λ/p -> Λ is an element s(1) with p * s(1) = 0; a section
        // also needs s(1) = 1 mod p
        let candidates = (0..p * p).filter(|&s| r.mul(p, s) == 0 && s % p == 1);
        assert_eq!(candidates.count(), 0);
        // Λ/p as the generator of Λ with the relation "p acts as zero": the
        // section must intertwine multiplication by p with the zero map
        let pi = Mat::identity(r, 1);
        let rel = (Mat::scalar(r, 1, p), Mat::zeros(r, 1, 1));
        assert_eq!(split_test(&pi, &[rel]).unwrap(), None);
        // over the field the same relation is vacuous
        let k = RingSpec::new(p, 1).unwrap();
        let rel = (Mat::scalar(k, 1, p % p), Mat::zeros(k, 1, 1));
        assert!(split_test(&Mat::identity(k, 1), &[rel]).unwrap().is_some());
        let not_onto = Mat::from_rows(r, 1, &[[p as i64]]).unwrap();
        assert!(split_test(&not_onto, &[]).is_err());
    }
}

#[test]
fn split_test_handles_multiple_constraints() {
    let r = RingSpec::new(2, 1).unwrap();
    let pi = Mat::from_rows(r, 2, &[[1, 0], [0, 1], [1, 1]]).unwrap();
    let cyc3 = Mat::from_rows(r, 3, &[[0, 1, 0], [0, 0, 1], [1, 0, 0]]).unwrap();
    // no way to intertwine a 3-cycle on the source with the identity on Λ²
    // while hitting the identity: sections must be cycle-invariant rows
    let out = split_test(&pi, &[(Mat::identity(r, 2), cyc3)]).unwrap();
    assert!(out.is_none());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn howell_preserves_span_and_is_idempotent(m in small_mat()) {
        let h = howell_form(&m);
        prop_assert_eq!(span_of(&h), brute_span(&m));
        prop_assert_eq!(howell_form(&h.as_mat()), h.clone());
        for i in 0..m.rows() {
            prop_assert!(h.contains(m.row(i)));
        }
        prop_assert_eq!(span_size(&h) as usize, brute_span(&m).len());
    }

    #[test]
    fn howell_is_invariant_under_row_operations(m in small_mat(), seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let ring = m.ring();
        let mut rows = m.row_vecs();
        let n = rows.len();
        for _ in 0..6 {
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            if i != j {
                let f = rng.gen_range(0..ring.modulus());
                let src = rows[j].clone();
                for (a, b) in rows[i].iter_mut().zip(&src) {
                    *a = ring.add(*a, ring.mul(f, *b));
                }
            }
            rows.swap(i, j);
        }
        let unit = ring.units().nth(rng.gen_range(0..ring.units().count())).unwrap();
        rows[0].iter_mut().for_each(|a| *a = ring.mul(*a, unit));
        let m2 = Mat::from_reduced_rows(ring, m.cols(), &rows);
        prop_assert_eq!(howell_form(&m2), howell_form(&m));
    }

    #[test]
    fn kernel_matches_enumeration(m in small_mat()) {
        prop_assert_eq!(span_of(&kernel(&m)), brute_kernel(&m));
    }

    #[test]
    fn field_rank_law(m in mat_with_shape(7, 7)) {
        let ring = RingSpec::new(m.ring().p(), 1).unwrap();
        let m = Mat::from_vec(ring, m.rows(), m.cols(), m.data().iter().map(|&a| a % ring.p()).collect());
        prop_assert_eq!(kernel(&m).len() + howell_form(&m).len(), m.rows());
    }

    #[test]
    fn solve_is_sound_and_complete(m in small_mat(), pick in any::<u64>()) {
        let ring = m.ring();
        let targets = all_vectors(ring, m.cols());
        let b = &targets[(pick % targets.len() as u64) as usize];
        let reachable = brute_span(&m).contains(b);
        match solve(&m, b) {
            Some(x) => {
                prop_assert!(reachable);
                prop_assert_eq!(&m.apply(&x), b);
            }
            None => prop_assert!(!reachable),
        }
    }

    #[test]
    fn sparse_and_dense_agree(m in mat_with_shape(12, 12), density in 1u32..4) {
        let ring = m.ring();
        let d: Vec<u32> = m.data().iter().enumerate()
            .map(|(i, &a)| if (i as u32 * 7 + a).is_multiple_of(density) { a } else { 0 })
            .collect();
        let m = Mat::from_vec(ring, m.rows(), m.cols(), d);
        prop_assert_eq!(sparse_howell(&SparseMat::from_dense(&m)), howell_form(&m));
    }

    #[test]
    fn split_sections_are_exact(m in mat_with_shape(5, 3)) {
        let ring = m.ring();
        if m.rows() == 0 {
            return Ok(());
        }
        match split_test(&m, &[]) {
            Ok(Some(s)) => prop_assert_eq!(s.mul(&m), Mat::identity(ring, m.cols())),
            Ok(None) => prop_assert!(false, "surjection onto a free module always splits"),
            Err(_) => prop_assert!(!howell_form(&m).is_full()),
        }
    }
}
