use std::time::Instant;

use super::algebra::HeckeAlgebra;
use super::module::{tensor_k, HeckeModule};
use crate::exactalg::{howell_form, kernel, CanonicalBasis, HowellTransform, Mat};
use crate::lemmaverify::{Instance, LemmaReport};

fn instance(alg: &HeckeAlgebra, name: &str) -> Instance {
    let r = alg.ring();
    Instance { module: name.to_string(), group: "GL2".into(), p: r.p(), e: r.e(), ..Default::default() }
}

/// Asserted over the residue field, recorded otherwise.
fn claim_or_record(report: &mut LemmaReport, field: bool, name: &str, ok: bool) {
    if field {
        report.claim(name, ok);
    } else {
        report.record(name, ok, None);
    }
}

/// Lengths of `jbar^N` and of the algebra; equal when the invariants are
/// spanned by the double-coset sums.
pub fn invariants_jbar_star(alg: &HeckeAlgebra) -> (u32, u32) {
    let jb = alg.jbar();
    let g = alg.group();
    let inv = jb.module.invariants(&[g.nbar()]);
    (jb.module.sub_length(&inv), alg.dim() as u32 * alg.ring().e())
}

pub fn check_hecke_dim(alg: &HeckeAlgebra) -> LemmaReport {
    let started = Instant::now();
    let mut report = LemmaReport::new("hecke-dim", instance(alg, "H"));
    let p = alg.p() as usize;
    let expected = 2 * (p - 1) * (p - 1);
    let (inv_len, alg_len) = invariants_jbar_star(alg);
    report
        .dim("H", alg.dim())
        .dim("expected", expected)
        .dim("jbar", alg.jbar_rank())
        .dim("jbar^N length", inv_len)
        .dim("H length", alg_len);
    report.claim("dimension formula", alg.dim() == expected);
    report.claim("invariants match", inv_len == alg_len);
    report.finish(started)
}

pub fn check_associativity(alg: &HeckeAlgebra) -> LemmaReport {
    let started = Instant::now();
    let mut report = LemmaReport::new("hecke-assoc", instance(alg, "H"));
    report.dim("H", alg.dim()).dim("algebra generators", alg.algebra_generators().len());
    report.claim("unit laws", alg.unit_laws());
    report.claim("associative", alg.is_associative());
    report.claim("constants realize composition", alg.realizes_composition());
    report.finish(started)
}

/// `m -> m ⊗ φ` is a bijection `M -> K(M)^N`.
pub fn check_vytastra(alg: &HeckeAlgebra, m: &HeckeModule, name: &str) -> LemmaReport {
    let started = Instant::now();
    let mut report = LemmaReport::new("vytastra", instance(alg, name));
    let field = alg.ring().is_field();
    if !m.axioms_hold(alg) {
        report.reject("not a right module");
        return report.finish(started);
    }
    let t = match tensor_k(alg, m) {
        Ok(t) => t,
        Err(e) => {
            report.claim_with("tensor product built", false, e.to_string());
            return report.finish(started);
        }
    };
    let k = &t.module;
    let inv = k.invariants(&[alg.group().nbar()]);
    let src = m.presentation();
    let f = &t.comparison;
    let image = howell_form(f).sum(k.relations());
    report
        .dim("M", m.length())
        .dim("K(M)", k.length())
        .dim("K(M)^N", k.sub_length(&inv))
        .dim("image", k.sub_length(&image));
    claim_or_record(&mut report, field, "comparison well defined", src.map_is_well_defined(f, k.presentation()));
    claim_or_record(&mut report, field, "lands in invariants", inv.contains_all(&image));
    claim_or_record(&mut report, field, "comparison injective", src.map_is_injective(f, k.presentation()));
    claim_or_record(&mut report, field, "comparison onto invariants", image == inv);
    report.finish(started)
}

/// Outcome of the projectivity test for `jbar` as a left module.
#[derive(Clone, Debug)]
pub struct FlatnessResult {
    /// Elements of `jbar` generating it as a left module.
    pub generators: Vec<Vec<u32>>,
    /// `H^t -> jbar`, rows `(j, c) -> c · g_j`.
    pub surjection: Mat,
    /// A left-linear section, `rank jbar x t dim H`, when one exists.
    pub section: Option<Mat>,
}

/// Left action of `H` on `H^t`, one matrix per basis element.
fn left_actions(alg: &HeckeAlgebra, t: usize) -> Vec<Mat> {
    let id = Mat::identity(alg.ring(), t);
    (0..alg.dim()).map(|a| id.kron(&alg.left_regular(a))).collect()
}

/// Decides whether `jbar` is projective over `H` by looking for a left-linear
/// section of a surjection from a free module. A linear map out of `jbar` is
/// fixed by the images `x_j` of the generators; it is well defined iff every
/// generator `κ` of the kernel satisfies `sum_j κ_j x_j = 0`, and it is a
/// section iff each `x_j` maps back to `g_j`.
pub fn find_section(alg: &HeckeAlgebra) -> FlatnessResult {
    let ring = alg.ring();
    let h = alg.dim();
    let n = alg.jbar_rank();

    let mut generators = Vec::new();
    let mut span = CanonicalBasis::zero(ring, n);
    for x in 0..n {
        let mut e = vec![0u32; n];
        e[x] = 1;
        if span.contains(&e) {
            continue;
        }
        let orbit: Vec<Vec<u32>> = (0..h).map(|c| alg.op(c).apply(&e)).collect();
        span = span.with_vectors(&orbit);
        generators.push(e);
        if span.is_full() {
            break;
        }
    }
    let t = generators.len();
    let th = t * h;
    let mut surjection = Mat::zeros(ring, th, n);
    for (j, g) in generators.iter().enumerate() {
        for c in 0..h {
            surjection.row_mut(j * h + c).copy_from_slice(&alg.op(c).apply(g));
        }
    }

    let lefts = left_actions(alg, t);
    let gen_ops: Vec<Mat> = alg.algebra_generators().into_iter().map(|a| lefts[a].clone()).collect();
    let ker = kernel(&surjection);
    let mut kgens: Vec<Vec<u32>> = Vec::new();
    let mut kspan = CanonicalBasis::zero(ring, th);
    for r in ker.rows() {
        if kspan.contains(r) {
            continue;
        }
        kgens.push(r.clone());
        kspan = kspan.with_vectors(std::slice::from_ref(r)).stable_closure(&gen_ops);
        if kspan == ker {
            break;
        }
    }

    // unknown (j, i) at j * th + i; columns: one th-block per kernel
    // generator, then one n-block per generator for the section condition
    let cols = kgens.len() * th + t * n;
    let mut sys = Mat::zeros(ring, t * th, cols);
    for (ki, kappa) in kgens.iter().enumerate() {
        for j in 0..t {
            let mut act = Mat::zeros(ring, th, th);
            for c in 0..h {
                let v = kappa[j * h + c];
                if v != 0 {
                    act = act.add(&lefts[c].scale(v));
                }
            }
            for i in 0..th {
                sys.row_mut(j * th + i)[ki * th..(ki + 1) * th].copy_from_slice(act.row(i));
            }
        }
    }
    let base = kgens.len() * th;
    let mut rhs = vec![0u32; cols];
    for j in 0..t {
        for i in 0..th {
            sys.row_mut(j * th + i)[base + j * n..base + (j + 1) * n].copy_from_slice(surjection.row(i));
        }
        rhs[base + j * n..base + (j + 1) * n].copy_from_slice(&generators[j]);
    }
    let section = HowellTransform::new(&sys).solve(&rhs).map(|sol| {
        let pre = HowellTransform::new(&surjection);
        let mut s = Mat::zeros(ring, n, th);
        let mut e = vec![0u32; n];
        for y in 0..n {
            e[y] = 1;
            let v = pre.solve(&e).expect("surjection");
            e[y] = 0;
            let mut out = vec![0u32; th];
            for j in 0..t {
                let x = &sol[j * th..(j + 1) * th];
                for c in 0..h {
                    let f = v[j * h + c];
                    if f != 0 {
                        let moved = lefts[c].apply(x);
                        for (o, m) in out.iter_mut().zip(moved) {
                            *o = ring.add(*o, ring.mul(f, m));
                        }
                    }
                }
            }
            s.row_mut(y).copy_from_slice(&out);
        }
        s
    });
    FlatnessResult { generators, surjection, section }
}

/// `jbar` is flat, i.e. projective, as a left module over `H`.
pub fn check_flatness(alg: &HeckeAlgebra) -> LemmaReport {
    let started = Instant::now();
    let mut report = LemmaReport::new("flatness", instance(alg, "jbar"));
    let field = alg.ring().is_field();
    let res = find_section(alg);
    let t = res.generators.len();
    report.dim("H", alg.dim()).dim("jbar", alg.jbar_rank()).dim("generators", t);
    claim_or_record(&mut report, field, "section exists", res.section.is_some());
    if let Some(s) = &res.section {
        let n = alg.jbar_rank();
        let lefts = left_actions(alg, t);
        let splits = s.mul(&res.surjection) == Mat::identity(alg.ring(), n);
        let linear = (0..alg.dim()).all(|b| alg.op(b).mul(s) == s.mul(&lefts[b]));
        report.claim("section verified", splits && linear);
        report.witness("section", s.data().to_vec());
    }
    report.finish(started)
}
