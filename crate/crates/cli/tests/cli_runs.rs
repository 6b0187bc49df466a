use std::process::Command;

use coefflab::exactalg::RingSpec;
use coefflab::grouprep::{builtin_catalog, Catalog, GroupKind};
use coefflab_cli::{run_suite, CatalogSource, ConfigError, HeckeCheck, RunConfig, Target};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_coefflab"))
}

#[test]
fn replay_is_deterministic() {
    let mut cfg = RunConfig::new(Target::All, 3);
    cfg.seed = Some(11);
    cfg.random = 6;
    cfg.hecke_checks = vec![HeckeCheck::Dim, HeckeCheck::Vytastra];
    let a = run_suite(&cfg).unwrap();
    cfg.jobs = 4;
    let b = run_suite(&cfg).unwrap();
    assert!(a.passed());
    assert_eq!(a.without_timings().reports, b.without_timings().reports);
    let back: coefflab_cli::Report = serde_json::from_str(&a.to_json()).unwrap();
    assert_eq!(back.without_timings(), a.without_timings());
}

#[test]
fn configuration_errors() {
    let mut cfg = RunConfig::new(Target::Corrpro, 3);
    cfg.modules = vec!["nonexistent".into()];
    assert!(matches!(run_suite(&cfg), Err(ConfigError::Catalog(_))));
    let cfg = RunConfig::new(Target::Lemma22, 3);
    assert_eq!(run_suite(&cfg).unwrap_err(), ConfigError::MissingSeed);
    let cfg = RunConfig::new(Target::Corrpro, 11);
    assert!(matches!(run_suite(&cfg), Err(ConfigError::Invalid(_))));
    let mut cfg = RunConfig::new(Target::Hecke, 7);
    cfg.seed = Some(1);
    assert!(run_suite(&cfg).is_err());
    let mut cfg = RunConfig::new(Target::Corrpro, 3);
    cfg.depth = 0;
    assert!(run_suite(&cfg).is_err());
}

#[test]
fn empty_catalog_is_an_empty_selection() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.json");
    let mut cat = builtin_catalog(GroupKind::SL2, RingSpec::field(3).unwrap(), 0).unwrap();
    cat.entries.clear();
    std::fs::write(&path, cat.to_json()).unwrap();
    let mut cfg = RunConfig::new(Target::Cogtri, 3);
    cfg.catalog = CatalogSource::File(path);
    assert_eq!(run_suite(&cfg).unwrap_err(), ConfigError::EmptySelection);
}

#[test]
fn catalog_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cat.json");
    let out = bin().args(["catalog", "emit", "--p", "3", "--seed", "5", "--out"]).arg(&path).output().unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let cat = Catalog::from_json(&text).unwrap();
    let builtin = builtin_catalog(GroupKind::SL2, RingSpec::field(3).unwrap(), 5).unwrap();
    assert_eq!(cat.names(), builtin.names());
    for e in &builtin.entries {
        assert_eq!(cat.get(&e.name).unwrap().length(), e.module.length());
    }

    let mut from_file = RunConfig::new(Target::Corrpro, 3);
    from_file.catalog = CatalogSource::File(path.clone());
    let mut inline = RunConfig::new(Target::Corrpro, 3);
    inline.seed = Some(5);
    let a = run_suite(&from_file).unwrap();
    let b = run_suite(&inline).unwrap();
    assert_eq!(a.without_timings().reports, b.without_timings().reports);

    let mut wrong = RunConfig::new(Target::Corrpro, 5);
    wrong.catalog = CatalogSource::File(path);
    assert!(matches!(run_suite(&wrong), Err(ConfigError::Catalog(_))));
}

#[test]
fn catalog_names_for_p3() {
    let out = bin().args(["catalog", "list", "--p", "3"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let names: Vec<&str> = text.lines().filter_map(|l| l.split_whitespace().next()).collect();
    for n in ["trivial", "steinberg", "jbar", "ps:0", "ps:1"] {
        assert!(names.contains(&n), "{n} missing from {names:?}");
    }
}

#[test]
fn selected_module_report() {
    let mut cfg = RunConfig::new(Target::Corrpro, 3);
    cfg.modules = vec!["jbar".into(), "trivial".into()];
    cfg.depth = 3;
    let r = run_suite(&cfg).unwrap();
    assert!(r.passed());
    assert_eq!(r.reports.len(), 2);
    let jbar = r.reports.iter().find(|x| x.instance.module == "jbar").unwrap();
    assert_eq!(jbar.get_dim("H0^Gamma"), Some(4));
    assert_eq!(jbar.instance.depth, Some(3));
}

#[test]
fn exit_codes_and_json_output() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("out.json");
    let ok = bin()
        .args(["verify", "corrpro", "--p", "2", "--depth", "3", "--module", "jbar,trivial", "--json"])
        .arg(&json)
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["aggregate"], "pass");
    assert_eq!(report["reports"].as_array().unwrap().len(), 2);

    let missing_seed = bin().args(["verify", "lemma22", "--p", "2"]).output().unwrap();
    assert_eq!(missing_seed.status.code(), Some(2));
    let bad_target = bin().args(["verify", "nothing", "--p", "2"]).output().unwrap();
    assert_eq!(bad_target.status.code(), Some(2));
    let bad_rho = bin().args(["verify", "corrpro", "--p", "3", "--rho", "flip"]).output().unwrap();
    assert_eq!(bad_rho.status.code(), Some(2));

    let reduce = bin().args(["reduce", "--p", "3", "--depth", "2", "--count", "3"]).output().unwrap();
    assert_eq!(reduce.status.code(), Some(0));
    let text = String::from_utf8(reduce.stdout).unwrap();
    assert_eq!(text.matches("certificate ok").count(), 3);
}

#[test]
fn non_field_runs_reject_tree_checks() {
    let mut cfg = RunConfig::new(Target::Corrpro, 3);
    cfg.e = 2;
    let r = run_suite(&cfg).unwrap();
    assert!(r.passed());
    assert_eq!(r.rejected(), r.reports.len());
}
