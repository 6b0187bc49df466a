use std::time::Instant;

use super::complex::{build_complex_twisted, ChainComplexData, RhoChoice};
use super::homology::{fixed_class_lifts, h0_gamma_dim, homology, iota_rank, H0};
use super::TreeError;
use crate::grouprep::GModule;
use crate::lemmaverify::{EtaMap, Instance, LemmaReport};

/// Above this `dim H_0` the dense fixed-class cross-check is skipped.
const LIFT_CHECK_LIMIT: usize = 700;

fn instance(w: &GModule, name: &str, depth: Option<u32>, variant: Option<String>) -> Instance {
    let r = w.ring();
    Instance {
        module: name.to_string(),
        group: w.group().kind().to_string(),
        p: r.p(),
        e: r.e(),
        depth,
        variant,
        ..Default::default()
    }
}

/// Builds the complex, turning hypothesis failures into rejections and other
/// construction failures into a failed claim.
fn build_or_report(
    w: &GModule,
    depth: u32,
    rho: RhoChoice,
    twist: u32,
    report: &mut LemmaReport,
) -> Option<ChainComplexData> {
    match build_complex_twisted(w, depth, rho, twist) {
        Ok(cc) => Some(cc),
        Err(e @ (TreeError::NeedsField | TreeError::NotGenerated | TreeError::Depth(_))) => {
            report.reject(&e.to_string());
            None
        }
        Err(e) => {
            report.claim_with("complex built", false, e.to_string());
            None
        }
    }
}

fn block_dims(cc: &ChainComplexData, report: &mut LemmaReport) {
    for m in 0..=cc.depth() {
        report.dim(&format!("C0 level {m}"), cc.level_range0(m).len());
    }
    for m in 0..cc.depth() {
        report.dim(&format!("C1 level {m}"), cc.level_range1(m).len());
    }
}

/// `W^N -> H_0(T_D)^Γ` is injective, lands in the fixed part, and is onto it.
pub fn check_corrpro(w: &GModule, name: &str, depth: u32, rho: RhoChoice) -> LemmaReport {
    check_corrpro_twisted(w, name, depth, rho, 1)
}

pub fn check_corrpro_twisted(w: &GModule, name: &str, depth: u32, rho: RhoChoice, twist: u32) -> LemmaReport {
    let started = Instant::now();
    let variant = if twist == 1 { rho.to_string() } else { format!("{rho},unipotent^{twist}") };
    let mut report = LemmaReport::new("corrpro", instance(w, name, Some(depth), Some(variant)));
    let Some(cc) = build_or_report(w, depth, rho, twist, &mut report) else {
        return report.finish(started);
    };
    let h0 = H0::new(&cc);
    let rank = h0.image.len();
    let d = cc.fixed_n.rows();
    report
        .dim("W", cc.n())
        .dim("W^N", d)
        .dim("W^N'", cc.d())
        .dim("C0", cc.dim_c0())
        .dim("C1", cc.dim_c1())
        .dim("rank boundary", rank)
        .dim("H0", cc.dim_c0() - rank)
        .dim("H1", cc.dim_c1() - rank);
    block_dims(&cc, &mut report);

    report.claim("boundary equivariant", cc.is_equivariant());
    report.claim("boundary injective", rank == cc.dim_c1());

    let image = iota_rank(&cc, &h0);
    report.dim("image of W^N", image);
    report.claim("iota injective", image == d);

    let lands = (0..d).all(|i| {
        let v = cc.iota_vec(cc.fixed_n.row(i));
        let moved: Vec<u32> = cc.act0(&v).iter().zip(&v).map(|(&a, &b)| cc.ring.sub(a, b)).collect();
        h0.is_zero(&moved)
    });
    report.claim("iota lands in fixed part", lands);

    let fixed = h0_gamma_dim(&cc);
    report.dim("H0^Gamma", fixed);
    report.claim_with("iota onto fixed part", image == d && fixed == d, format!("dim H0^Gamma = {fixed}, dim W^N = {d}"));

    if cc.dim_c0() - rank <= LIFT_CHECK_LIMIT {
        let lifts = fixed_class_lifts(&cc, &h0);
        report.claim_with(
            "fixed part dimension cross-check",
            lifts.len() == fixed,
            format!("kernel of g - 1 on H0 has dimension {}", lifts.len()),
        );
    }
    report.finish(started)
}

/// `0 -> C_1 -> C_0 -> H_0 -> 0` is exact: the boundary is injective.
pub fn check_presentation(w: &GModule, name: &str, depth: u32) -> LemmaReport {
    let started = Instant::now();
    let mut report = LemmaReport::new("presentation", instance(w, name, Some(depth), None));
    let Some(cc) = build_or_report(w, depth, RhoChoice::W0, 1, &mut report) else {
        return report.finish(started);
    };
    let hom = homology(&cc);
    let rank = hom.h0.image.len();
    report
        .dim("C0", cc.dim_c0())
        .dim("C1", cc.dim_c1())
        .dim("rank boundary", rank)
        .dim("H0", hom.h0.length())
        .dim("H1", hom.h1.len());
    block_dims(&cc, &mut report);
    report.claim("boundary injective", rank == cc.dim_c1() && hom.h1.is_empty());
    report.claim("euler characteristic", hom.h0.length() as usize + cc.dim_c1() == cc.dim_c0() + hom.h1.len());
    report.finish(started)
}

/// At a single vertex: `(k[N] ⊗ W^{N'})_N -> W_N` is injective (and onto).
pub fn check_cogtri_hypothesis(w: &GModule, name: &str) -> LemmaReport {
    let started = Instant::now();
    let mut report = LemmaReport::new("cogtri", instance(w, name, None, None));
    if !w.ring().is_field() {
        report.reject(&TreeError::NeedsField.to_string());
        return report.finish(started);
    }
    let w = if w.is_free() { w.clone() } else { w.compact().0 };
    let g = w.group().clone();
    if !w.generated(w.invariants(&[g.nbar_prime()]).rows()).is_full() {
        report.reject(&TreeError::NotGenerated.to_string());
        return report.finish(started);
    }
    let em = EtaMap::new(&w, 1);
    let (src, tgt) = em.h1_pair();
    report.dim("source coinvariants", src.length()).dim("target coinvariants", tgt.length());
    report.claim("local map well defined", src.map_is_well_defined(&em.eta, &tgt));
    report.claim("local map injective", src.map_is_injective(&em.eta, &tgt));
    report.claim("local map bijective", src.map_is_surjective(&em.eta, &tgt));
    report.finish(started)
}
