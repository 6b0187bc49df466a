use std::time::Instant;

use super::report::{Instance, LemmaReport};
use crate::exactalg::{CanonicalBasis, Mat};
use crate::grouprep::GModule;

fn instance(m: &GModule, name: &str) -> Instance {
    let r = m.ring();
    Instance {
        module: name.to_string(),
        group: m.group().kind().to_string(),
        p: r.p(),
        e: r.e(),
        ..Default::default()
    }
}

/// Whether the module is generated by its `N`-invariants.
pub fn generated_by_n_invariants(m: &GModule) -> bool {
    let g = m.group().clone();
    let inv = m.invariants(&[g.nbar()]);
    m.generated(inv.rows()) == CanonicalBasis::full(m.ring(), m.cover())
}

/// For a surjection `f: V -> W` (on covers) of modules generated by their
/// `N`-invariants: `V^N -> W^N` is surjective.
pub fn check_qpfpspec_i(v: &GModule, w: &GModule, f: &Mat, name: &str) -> LemmaReport {
    let started = Instant::now();
    let mut report = LemmaReport::new("lemma22-i", instance(v, name));
    if !v.map_is_equivariant(f, w) {
        report.reject("map is not a well-defined equivariant map");
        return report.finish(started);
    }
    if !v.presentation().map_is_surjective(f, w.presentation()) {
        report.reject("map is not surjective");
        return report.finish(started);
    }
    if !generated_by_n_invariants(v) || !generated_by_n_invariants(w) {
        report.reject("module not generated by N-invariants");
        return report.finish(started);
    }
    let g = v.group().clone();
    let inv_v = v.invariants(&[g.nbar()]);
    let inv_w = w.invariants(&[g.nbar()]);
    let image = inv_v.image(f).sum(w.relations());
    report
        .dim("V", v.length())
        .dim("W", w.length())
        .dim("V^N", v.sub_length(&inv_v))
        .dim("W^N", w.sub_length(&inv_w))
        .dim("image", w.sub_length(&image));
    report.claim("invariants map surjective", image == inv_w);
    report.finish(started)
}

/// For an injection `f: V -> W` with `W` generated by its `N`-invariants:
/// `V` is generated by its `N`-invariants.
pub fn check_qpfpspec_ii(v: &GModule, w: &GModule, f: &Mat, name: &str) -> LemmaReport {
    let started = Instant::now();
    let mut report = LemmaReport::new("lemma22-ii", instance(w, name));
    if !v.map_is_equivariant(f, w) || !v.presentation().map_is_injective(f, w.presentation()) {
        report.reject("map is not an equivariant injection");
        return report.finish(started);
    }
    if !generated_by_n_invariants(w) {
        report.reject("ambient module not generated by N-invariants");
        return report.finish(started);
    }
    let g = v.group().clone();
    let inv_v = v.invariants(&[g.nbar()]);
    let gen = v.generated(inv_v.rows());
    report
        .dim("V", v.length())
        .dim("W", w.length())
        .dim("V^N", v.sub_length(&inv_v))
        .dim("generated", v.sub_length(&gen));
    report.claim("V generated by V^N", gen.is_full());
    report.finish(started)
}
