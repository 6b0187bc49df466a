use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use coefflab::exactalg::RingSpec;
use coefflab::grouprep::{build_group, builtin_catalog, Catalog, GModule, GroupKind};
use coefflab::hecke::{
    build_hecke, check_associativity, check_flatness, check_hecke_dim, check_vytastra, random_quotient_module,
    HeckeModule,
};
use coefflab::lemmaverify::{
    check_herzjesu, check_qpfpspec_i, check_qpfpspec_ii, random_instance_stream, Instance, LemmaReport,
    RandomInstance, StreamKind, StreamShape,
};
use coefflab::treecoeff::{check_cogtri_hypothesis, check_corrpro, check_presentation};

use crate::config::{CatalogSource, ConfigError, HeckeCheck, RunConfig, Target};
use crate::report::Report;

type Job = Box<dyn FnOnce() -> LemmaReport + Send>;

struct Task {
    lemma: &'static str,
    instance: Instance,
    job: Job,
}

fn task(lemma: &'static str, instance: Instance, job: impl FnOnce() -> LemmaReport + Send + 'static) -> Task {
    Task { lemma, instance, job: Box::new(job) }
}

/// Runs the tasks on up to `jobs` threads; results keep the task order. A
/// panicking task becomes a failed report for its instance.
fn run_tasks(tasks: Vec<Task>, jobs: usize) -> Vec<LemmaReport> {
    let n = tasks.len();
    let slots: Vec<Mutex<Option<Task>>> = tasks.into_iter().map(|t| Mutex::new(Some(t))).collect();
    let results: Vec<Mutex<Option<LemmaReport>>> = (0..n).map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let worker = || loop {
        let i = next.fetch_add(1, Ordering::SeqCst);
        if i >= n {
            break;
        }
        let t = slots[i].lock().expect("task slot").take().expect("each task runs once");
        let Task { lemma, instance, job } = t;
        let report = catch_unwind(AssertUnwindSafe(job)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            let mut r = LemmaReport::new(lemma, instance);
            r.claim_with("completed", false, msg);
            r
        });
        *results[i].lock().expect("result slot") = Some(report);
    };
    std::thread::scope(|s| {
        for _ in 1..jobs.min(n.max(1)) {
            s.spawn(worker);
        }
        worker();
    });
    results.into_iter().map(|m| m.into_inner().expect("result slot").expect("every task ran")).collect()
}

fn instance(lemma_module: &str, cfg: &RunConfig, e: u32) -> Instance {
    Instance { module: lemma_module.to_string(), group: "SL2".into(), p: cfg.p, e, ..Default::default() }
}

/// The catalog for the configured ring, narrowed to the selected modules.
pub fn load_catalog(cfg: &RunConfig, ring: RingSpec) -> Result<Vec<(String, GModule)>, ConfigError> {
    let cat = match &cfg.catalog {
        CatalogSource::Builtin => builtin_catalog(GroupKind::SL2, ring, cfg.catalog_seed())
            .map_err(|e| ConfigError::Catalog(e.to_string()))?,
        CatalogSource::File(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Catalog(format!("{}: {e}", path.display())))?;
            let cat = Catalog::from_json(&text).map_err(|e| ConfigError::Catalog(e.to_string()))?;
            if cat.ring != ring || cat.group.kind() != GroupKind::SL2 {
                return Err(ConfigError::Catalog(format!(
                    "catalog is for {} over Z/{}^{}, run is SL2 over Z/{}^{}",
                    cat.group.kind(),
                    cat.ring.p(),
                    cat.ring.e(),
                    ring.p(),
                    ring.e()
                )));
            }
            cat
        }
    };
    let entries: Vec<(String, GModule)> = cat
        .entries
        .into_iter()
        .filter(|e| cfg.modules.is_empty() || cfg.modules.contains(&e.name))
        .map(|e| (e.name, e.module))
        .collect();
    if let Some(missing) = cfg.modules.iter().find(|m| !entries.iter().any(|(n, _)| n == *m)) {
        return Err(ConfigError::Catalog(format!("no module named {missing}")));
    }
    if entries.is_empty() {
        return Err(ConfigError::EmptySelection);
    }
    Ok(entries)
}

fn ring_of(cfg: &RunConfig) -> Result<RingSpec, ConfigError> {
    RingSpec::new(cfg.p, cfg.e).map_err(|e| ConfigError::Invalid(e.to_string()))
}

fn lemma21_tasks(cfg: &RunConfig, tasks: &mut Vec<Task>) -> Result<(), ConfigError> {
    let ring = ring_of(cfg)?;
    for (name, m) in load_catalog(cfg, ring)? {
        let inst = instance(&name, cfg, ring.e());
        tasks.push(task("lemma21", inst, move || check_herzjesu(&m, &name)));
    }
    if cfg.random > 0 {
        let group = build_group(GroupKind::SL2, cfg.p).map_err(|e| ConfigError::Invalid(e.to_string()))?;
        let seed = cfg.seed.ok_or(ConfigError::MissingSeed)?;
        let stream = random_instance_stream(group, ring, seed, StreamShape::default(), StreamKind::Modules)
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        for inst in stream.take(cfg.random) {
            let RandomInstance::Module { name, module, .. } = inst else { unreachable!("module stream") };
            let mut i = instance(&name, cfg, ring.e());
            i.seed = Some(seed);
            tasks.push(task("lemma21", i, move || {
                let mut r = check_herzjesu(&module, &name);
                r.instance.seed = Some(seed);
                r
            }));
        }
    }
    Ok(())
}

fn lemma22_tasks(cfg: &RunConfig, tasks: &mut Vec<Task>) -> Result<(), ConfigError> {
    let ring = ring_of(cfg)?;
    let seed = cfg.seed.ok_or(ConfigError::MissingSeed)?;
    let group = build_group(GroupKind::SL2, cfg.p).map_err(|e| ConfigError::Invalid(e.to_string()))?;
    let count = cfg.random.max(1);
    for (kind, offset) in [(StreamKind::Surjections, 0u64), (StreamKind::Injections, 1)] {
        let stream = random_instance_stream(group.clone(), ring, seed.wrapping_add(offset), StreamShape::default(), kind)
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        for inst in stream.take(count) {
            let mut i = instance(inst.name(), cfg, ring.e());
            i.seed = Some(seed);
            match inst {
                RandomInstance::Surjection { name, source, target, map, .. } => {
                    tasks.push(task("lemma22-i", i, move || {
                        let mut r = check_qpfpspec_i(&source, &target, &map, &name);
                        r.instance.seed = Some(seed);
                        r
                    }));
                }
                RandomInstance::Injection { name, sub, ambient, map, .. } => {
                    tasks.push(task("lemma22-ii", i, move || {
                        let mut r = check_qpfpspec_ii(&sub, &ambient, &map, &name);
                        r.instance.seed = Some(seed);
                        r
                    }));
                }
                RandomInstance::Module { .. } => unreachable!("map streams"),
            }
        }
    }
    Ok(())
}

fn tree_tasks(cfg: &RunConfig, which: Target, tasks: &mut Vec<Task>) -> Result<(), ConfigError> {
    let ring = ring_of(cfg)?;
    let depth = cfg.depth;
    let rho = cfg.rho;
    for (name, m) in load_catalog(cfg, ring)? {
        let mut inst = instance(&name, cfg, ring.e());
        match which {
            Target::Corrpro => {
                inst.depth = Some(depth);
                tasks.push(task("corrpro", inst, move || check_corrpro(&m, &name, depth, rho)));
            }
            Target::Presentation => {
                inst.depth = Some(depth);
                tasks.push(task("presentation", inst, move || check_presentation(&m, &name, depth)));
            }
            Target::Cogtri => tasks.push(task("cogtri", inst, move || check_cogtri_hypothesis(&m, &name))),
            _ => unreachable!("tree targets only"),
        }
    }
    Ok(())
}

fn hecke_tasks(cfg: &RunConfig, tasks: &mut Vec<Task>) -> Result<(), ConfigError> {
    let ring = ring_of(cfg)?;
    let mut inst = instance("H", cfg, ring.e());
    inst.group = "GL2".into();
    if cfg.p > 5 {
        tasks.push(task("hecke", inst.clone(), move || {
            let mut r = LemmaReport::new("hecke", inst);
            r.reject("the Hecke algebra is built for p <= 5");
            r
        }));
        return Ok(());
    }
    let checks = cfg.hecke_checks.clone();
    let random = cfg.random;
    let seed = cfg.seed;
    let p = cfg.p;
    // the algebra is shared by all checks, so they run as one task
    tasks.push(Task {
        lemma: "hecke",
        instance: inst,
        job: Box::new(move || {
            let alg = build_hecke(p, ring).expect("supported prime");
            let mut reports = Vec::new();
            for c in &checks {
                match c {
                    HeckeCheck::Dim => reports.push(check_hecke_dim(&alg)),
                    HeckeCheck::Assoc => reports.push(check_associativity(&alg)),
                    HeckeCheck::Flatness => reports.push(check_flatness(&alg)),
                    HeckeCheck::Vytastra => {
                        reports.push(check_vytastra(&alg, &HeckeModule::free(&alg, 1), "H"));
                        if let Some(seed) = seed {
                            let mut rng = ChaCha8Rng::seed_from_u64(seed);
                            for i in 0..random.min(25) {
                                let m = random_quotient_module(&alg, 1 + i % 2, 1 + i % 3, &mut rng);
                                let mut r = check_vytastra(&alg, &m, &format!("quotient:{i}"));
                                r.instance.seed = Some(seed);
                                reports.push(r);
                            }
                        }
                    }
                }
            }
            merge_hecke(reports)
        }),
    });
    Ok(())
}

/// Folds the Hecke reports into one, prefixing claim and dimension names with
/// the originating check and instance.
fn merge_hecke(reports: Vec<LemmaReport>) -> LemmaReport {
    let first = reports.first().expect("at least one hecke check");
    let mut out = LemmaReport::new("hecke", Instance { module: "H".into(), ..first.instance.clone() });
    let mut elapsed = 0.0;
    for r in reports {
        let prefix = if r.instance.module == "H" || r.instance.module == "jbar" {
            r.lemma.clone()
        } else {
            format!("{}[{}]", r.lemma, r.instance.module)
        };
        for mut c in r.claims {
            c.name = format!("{prefix}: {}", c.name);
            out.claims.push(c);
        }
        for (k, v) in r.dims {
            out.dims.insert(format!("{prefix}: {k}"), v);
        }
        for mut w in r.witnesses {
            w.label = format!("{prefix}: {}", w.label);
            out.witnesses.push(w);
        }
        if let Some(rej) = r.rejection {
            out.rejection.get_or_insert(rej);
        }
        elapsed += r.elapsed_ms;
    }
    out.elapsed_ms = elapsed;
    out
}

/// Runs the configured verification and collects the reports.
pub fn run_suite(cfg: &RunConfig) -> Result<Report, ConfigError> {
    cfg.validate()?;
    let started = Instant::now();
    let targets: Vec<Target> = if cfg.target == Target::All { Target::EACH.to_vec() } else { vec![cfg.target] };
    let mut tasks = Vec::new();
    for t in targets {
        match t {
            Target::Lemma21 => lemma21_tasks(cfg, &mut tasks)?,
            Target::Lemma22 => lemma22_tasks(cfg, &mut tasks)?,
            Target::Corrpro | Target::Presentation | Target::Cogtri => tree_tasks(cfg, t, &mut tasks)?,
            Target::Hecke => hecke_tasks(cfg, &mut tasks)?,
            Target::All => unreachable!("expanded above"),
        }
    }
    let reports = run_tasks(tasks, cfg.jobs);
    Ok(Report::new(cfg.clone(), reports, started.elapsed().as_secs_f64() * 1e3))
}
