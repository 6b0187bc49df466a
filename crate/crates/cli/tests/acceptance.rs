use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use coefflab::exactalg::{howell_form, sparse_howell, CanonicalBasis, RingSpec};
use coefflab::grouprep::{build_group, builtin_catalog, composition_length, decompose_jbar, jbar, GroupKind};
use coefflab::lemmaverify::{LemmaReport, Verdict};
use coefflab::treecoeff::{
    build_complex, build_complex_twisted, check_corrpro, check_corrpro_twisted, fixed_class_lifts, random_fixed_class,
    reduce_chain, ReduceContext, RhoChoice, H0,
};
use coefflab_cli::{run_suite, Report, RunConfig, Target};

const SEED: u64 = 20240917;
const LIMIT_LEMMA21: Duration = Duration::from_secs(60);
const LIMIT_LEMMA22: Duration = Duration::from_secs(120);
const LIMIT_GRID_POINT: Duration = Duration::from_secs(300);
const GRID: [(u32, u32); 3] = [(2, 6), (3, 4), (5, 3)];
const CLASSES_PER_POINT: usize = 100;

type Outcome = Result<String, String>;

fn jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn suite(target: Target, p: u32, f: impl FnOnce(&mut RunConfig)) -> Result<Report, String> {
    let mut cfg = RunConfig::new(target, p);
    cfg.seed = Some(SEED);
    cfg.jobs = jobs();
    f(&mut cfg);
    run_suite(&cfg).map_err(|e| e.to_string())
}

fn clean(r: &Report) -> Result<(), String> {
    if !r.passed() {
        let f = &r.failures[0];
        return Err(format!("{} failures, first {} {} {:?}", r.failures.len(), f.lemma, f.instance.module, f.claims));
    }
    if let Some(x) = r.reports.iter().find(|x| x.is_rejected()) {
        return Err(format!("{} rejected: {:?}", x.instance.module, x.rejection));
    }
    Ok(())
}

fn all_pass(r: &LemmaReport) -> bool {
    !r.is_rejected() && r.claims.iter().all(|c| c.verdict == Verdict::Pass)
}

fn within(limit: Duration, started: Instant) -> Result<f64, String> {
    let t = started.elapsed();
    if t > limit {
        return Err(format!("took {:.1} s, limit {} s", t.as_secs_f64(), limit.as_secs()));
    }
    Ok(t.as_secs_f64())
}

fn lemma21() -> Outcome {
    let started = Instant::now();
    let mut total = 0;
    for p in [2, 3, 5] {
        let r = suite(Target::Lemma21, p, |c| c.random = 50)?;
        clean(&r)?;
        let catalog = builtin_catalog(GroupKind::SL2, RingSpec::field(p).unwrap(), SEED).unwrap().entries.len();
        if r.count("lemma21") < catalog + 50 {
            return Err(format!("p={p}: only {} instances", r.count("lemma21")));
        }
        total += r.reports.len();
    }
    let t = within(LIMIT_LEMMA21, started)?;
    Ok(format!("{total} instances, 0 failures, {t:.1} s (limit {} s)", LIMIT_LEMMA21.as_secs()))
}

fn lemma22() -> Outcome {
    let started = Instant::now();
    let mut total = 0;
    for p in [2, 3] {
        for e in 1..=3 {
            let r = suite(Target::Lemma22, p, |c| {
                c.e = e;
                c.random = 25;
            })?;
            clean(&r)?;
            let (s, i) = (r.count("lemma22-i"), r.count("lemma22-ii"));
            if s < 25 || i < 25 {
                return Err(format!("p={p} e={e}: {s} surjections, {i} injections"));
            }
            total += s + i;
        }
    }
    let t = within(LIMIT_LEMMA22, started)?;
    Ok(format!("{total} instances, 0 failures, {t:.1} s (limit {} s)", LIMIT_LEMMA22.as_secs()))
}

fn grid_points() -> impl Iterator<Item = (u32, u32)> {
    GRID.into_iter().flat_map(|(p, max)| (1..=max).map(move |d| (p, d)))
}

fn invariants_grid() -> Outcome {
    let mut slowest = (0.0f64, 0, 0);
    let mut count = 0;
    for (p, d) in grid_points() {
        let started = Instant::now();
        let r = suite(Target::Corrpro, p, |c| c.depth = d)?;
        clean(&r)?;
        for x in &r.reports {
            if x.get_dim("H0^Gamma") != x.get_dim("W^N") {
                return Err(format!("p={p} D={d} {}: H0^Gamma {:?} vs W^N {:?}", x.instance.module, x.get_dim("H0^Gamma"), x.get_dim("W^N")));
            }
        }
        let value = |name: &str| r.reports.iter().find(|x| x.instance.module == name).and_then(|x| x.get_dim("H0^Gamma"));
        if value("trivial") != Some(1) {
            return Err(format!("p={p} D={d}: trivial gives {:?}", value("trivial")));
        }
        if p == 3 && value("jbar") != Some(4) {
            return Err(format!("D={d}: jbar gives {:?}", value("jbar")));
        }
        let t = within(LIMIT_GRID_POINT, started).map_err(|e| format!("p={p} D={d}: {e}"))?;
        if t > slowest.0 {
            slowest = (t, p, d);
        }
        count += r.reports.len();
    }
    Ok(format!(
        "{count} instances, jbar p=3 gives 4 at D=1..4, trivial gives 1; slowest point p={} D={} {:.2} s (limit {} s)",
        slowest.1,
        slowest.2,
        slowest.0,
        LIMIT_GRID_POINT.as_secs()
    ))
}

fn boundary_injective() -> Outcome {
    let mut count = 0;
    for (p, d) in grid_points() {
        let r = suite(Target::Presentation, p, |c| c.depth = d)?;
        clean(&r)?;
        let c = suite(Target::Corrpro, p, |c| c.depth = d)?;
        for x in &c.reports {
            if x.claim_verdict("boundary injective") != Some(&Verdict::Pass) || x.get_dim("H1") != Some(0) {
                return Err(format!("p={p} D={d} {}: boundary not injective", x.instance.module));
            }
        }
        count += r.reports.len();
    }
    Ok(format!("{count} instances, exact rank, H1 = 0 everywhere"))
}

fn reductions() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut total = 0;
    for p in [2, 3] {
        let g = build_group(GroupKind::SL2, p).unwrap();
        let w = jbar(g.clone(), g.field()).unwrap().module;
        for d in 1..=4 {
            let cc = build_complex(&w, d, RhoChoice::W0).map_err(|e| e.to_string())?;
            let h0 = H0::new(&cc);
            let lifts = fixed_class_lifts(&cc, &h0);
            let ctx = ReduceContext::new(&cc);
            let fixed = CanonicalBasis::from_rows(cc.ring, cc.n(), cc.fixed_n.row_vecs());
            for i in 0..CLASSES_PER_POINT {
                let c = random_fixed_class(&cc, &lifts, &mut rng);
                let red = reduce_chain(&ctx, &c).map_err(|e| format!("p={p} D={d} class {i}: {e}"))?;
                let db = cc.apply_boundary(&red.certificate);
                let iw = cc.iota_vec(&red.w);
                let certified = c.iter().zip(iw.iter().zip(&db)).all(|(&x, (&a, &b))| x == cc.ring.add(a, b));
                if !certified || !fixed.contains(&red.w) {
                    return Err(format!("p={p} D={d} class {i}: certificate fails"));
                }
                total += 1;
            }
        }
    }
    Ok(format!("{total} classes reduced, every certificate and telescoping assertion holds"))
}

fn hecke() -> Outcome {
    let mut dims = Vec::new();
    for p in [2, 3, 5] {
        let r = suite(Target::Hecke, p, |c| c.random = 10)?;
        clean(&r)?;
        let h = &r.reports[0];
        let dim = h.get_dim("hecke-dim: H").ok_or("no dimension")?;
        if dim != 2 * (p as u64 - 1).pow(2) || h.get_dim("hecke-dim: jbar^N length") != Some(dim) {
            return Err(format!("p={p}: dim {dim}"));
        }
        let quotients = h.claims.iter().filter(|c| c.name.starts_with("vytastra[quotient:") && c.name.ends_with("onto invariants")).count();
        if quotients < 10 {
            return Err(format!("p={p}: {quotients} quotient modules"));
        }
        dims.push(dim);
    }
    let mut recorded = Vec::new();
    for p in [2, 3] {
        let r = suite(Target::Hecke, p, |c| {
            c.e = 2;
            c.random = 0;
            c.hecke_checks = vec![coefflab_cli::HeckeCheck::Flatness, coefflab_cli::HeckeCheck::Vytastra];
        })?;
        let h = &r.reports[0];
        let asserted = h.claims.iter().filter(|c| !c.name.contains("section verified")).any(|c| c.verdict != Verdict::Recorded);
        if asserted {
            return Err(format!("p={p} e=2: verdicts asserted"));
        }
        let flat = h.claims.iter().find(|c| c.name == "flatness: section exists").and_then(|c| c.value);
        recorded.push(format!("p={p} flat={flat:?}"));
    }
    Ok(format!("dims {dims:?}; e=2 recorded only ({})", recorded.join(", ")))
}

fn principal_series() -> Outcome {
    for p in [2, 3, 5] {
        let g = build_group(GroupKind::SL2, p).unwrap();
        let jb = jbar(g.clone(), g.field()).unwrap();
        let parts = decompose_jbar(&jb).map_err(|e| e.to_string())?;
        if parts.len() != p as usize - 1 {
            return Err(format!("p={p}: {} summands", parts.len()));
        }
        let mut total = 0;
        for s in &parts {
            let m = s.module.compact().0;
            let inv = m.invariants(&[g.nbar()]).len();
            let len = composition_length(&m);
            if inv != 2 || len != 2 {
                return Err(format!("p={p} summand {}: length {len}, invariants {inv}", s.index));
            }
            total += s.module.cover();
        }
        if total != (p * p - 1) as usize {
            return Err(format!("p={p}: total {total}"));
        }
    }
    Ok("p-1 summands of length 2 with 2-dim invariants, total p^2-1, p = 2, 3, 5".into())
}

fn robustness() -> Outcome {
    let mut compared = 0;
    for (p, max) in [(2, 4), (3, 3), (5, 2)] {
        let cat = builtin_catalog(GroupKind::SL2, RingSpec::field(p).unwrap(), SEED).unwrap();
        for entry in &cat.entries {
            for d in 1..=max {
                let base = check_corrpro(&entry.module, &entry.name, d, RhoChoice::W0);
                let mut variants = vec![
                    check_corrpro(&entry.module, &entry.name, d, RhoChoice::Twist(1)),
                    check_corrpro_twisted(&entry.module, &entry.name, d, RhoChoice::W0, p - 1),
                ];
                if p > 2 {
                    variants.push(check_corrpro(&entry.module, &entry.name, d, RhoChoice::Scale(2)));
                }
                for v in &variants {
                    if all_pass(v) != all_pass(&base) || v.get_dim("H0^Gamma") != base.get_dim("H0^Gamma") {
                        return Err(format!("p={p} D={d} {}: {:?} differs", entry.name, v.instance.variant));
                    }
                    compared += 1;
                }
                for cc in [
                    build_complex(&entry.module, d, RhoChoice::W0),
                    build_complex_twisted(&entry.module, d, RhoChoice::Twist(1), p - 1),
                ] {
                    let cc = cc.map_err(|e| e.to_string())?;
                    if sparse_howell(&cc.boundary) != howell_form(&cc.boundary_dense()) {
                        return Err(format!("p={p} D={d} {}: sparse and dense forms differ", entry.name));
                    }
                }
            }
        }
    }
    Ok(format!("{compared} variant verdicts match, sparse and dense forms identical"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("lemma21 suite", lemma21),
        ("lemma22 suite", lemma22),
        ("finite-depth invariants", invariants_grid),
        ("boundary injective", boundary_injective),
        ("reduction certificates", reductions),
        ("hecke suite", hecke),
        ("principal series", principal_series),
        ("robustness", robustness),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let t = started.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {} {name}: PASS ({t:.1} s) {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({t:.1} s) {msg}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
