use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use coefflab::exactalg::RingSpec;
use coefflab::grouprep::{builtin_catalog, GroupKind};
use coefflab::treecoeff::{
    build_complex, fixed_class_lifts, random_fixed_class, reduce_chain, support_level, ReduceContext, RhoChoice, H0,
};
use coefflab_cli::{load_catalog, run_suite, CatalogSource, ConfigError, HeckeCheck, RunConfig, Target};

#[derive(Parser)]
#[command(name = "coefflab", version, about = "Exact verification of mod p representation and Hecke computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification target and print one line per instance.
    Verify(VerifyArgs),
    /// Reduce random fixed classes of the tree complex back to the invariants.
    Reduce(ReduceArgs),
    /// Built-in module catalogs.
    #[command(subcommand)]
    Catalog(CatalogCommand),
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// lemma21, lemma22, corrpro, presentation, cogtri, hecke or all.
    target: Target,
    #[arg(long)]
    p: u32,
    #[arg(long, default_value_t = 1)]
    e: u32,
    #[arg(long, default_value_t = 2)]
    depth: u32,
    #[arg(long)]
    seed: Option<u64>,
    /// JSON catalog file; the built-in catalog when absent.
    #[arg(long)]
    catalog: Option<PathBuf>,
    #[arg(long = "module", value_delimiter = ',')]
    modules: Vec<String>,
    /// Random instances per family.
    #[arg(long, default_value_t = 50)]
    random: usize,
    /// w0, twist:K or scale:S.
    #[arg(long, default_value = "w0")]
    rho: String,
    #[arg(long = "check", value_delimiter = ',')]
    checks: Vec<HeckeCheck>,
    /// Write the full JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(clap::Args)]
struct ReduceArgs {
    #[arg(long)]
    p: u32,
    #[arg(long, default_value_t = 2)]
    depth: u32,
    #[arg(long, default_value = "jbar")]
    module: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    count: usize,
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// Write a catalog as JSON.
    Emit {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        e: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// List the module names of a catalog.
    List {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        e: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn verify(args: VerifyArgs) -> anyhow::Result<bool> {
    let mut cfg = RunConfig::new(args.target, args.p);
    cfg.e = args.e;
    cfg.depth = args.depth;
    cfg.seed = args.seed;
    cfg.catalog = args.catalog.map_or(CatalogSource::Builtin, CatalogSource::File);
    cfg.modules = args.modules;
    cfg.random = args.random;
    cfg.rho = args.rho.parse::<RhoChoice>().map_err(|e| ConfigError::Invalid(e.to_string()))?;
    if !args.checks.is_empty() {
        cfg.hecke_checks = args.checks;
    }
    cfg.output = args.json.clone();
    cfg.jobs = args.jobs;
    let report = run_suite(&cfg)?;
    for line in report.summary_lines() {
        println!("{line}");
    }
    for f in &report.failures {
        println!("failed: {} {} claims {:?}", f.lemma, f.instance.module, f.claims);
    }
    if let Some(path) = &args.json {
        std::fs::write(path, report.to_json()).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(report.passed())
}

fn reduce(args: ReduceArgs) -> anyhow::Result<bool> {
    let ring = RingSpec::field(args.p)?;
    let cat = builtin_catalog(GroupKind::SL2, ring, args.seed)?;
    let Some(w) = cat.get(&args.module) else { bail!("no module named {}", args.module) };
    let cc = build_complex(w, args.depth, RhoChoice::W0)?;
    let h0 = H0::new(&cc);
    let lifts = fixed_class_lifts(&cc, &h0);
    let ctx = ReduceContext::new(&cc);
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    println!("{} D={} dim H0^Gamma = {}", args.module, args.depth, lifts.len());
    let mut ok = true;
    for i in 0..args.count {
        let c = random_fixed_class(&cc, &lifts, &mut rng);
        let level = support_level(&cc, &c);
        match reduce_chain(&ctx, &c) {
            Ok(red) => {
                let db = cc.apply_boundary(&red.certificate);
                let iw = cc.iota_vec(&red.w);
                let certified = c.iter().zip(iw.iter().zip(&db)).all(|(&x, (&a, &b))| x == ring.add(a, b));
                ok &= certified;
                println!(
                    "class {i}: level {:?}, {} rounds, w = {:?}, certificate {}",
                    level,
                    red.rounds,
                    red.w,
                    if certified { "ok" } else { "WRONG" }
                );
            }
            Err(e) => {
                ok = false;
                println!("class {i}: {e}");
            }
        }
    }
    Ok(ok)
}

fn catalog(cmd: CatalogCommand) -> anyhow::Result<bool> {
    match cmd {
        CatalogCommand::Emit { p, e, seed, out } => {
            let cat = builtin_catalog(GroupKind::SL2, RingSpec::new(p, e)?, seed)?;
            std::fs::write(&out, cat.to_json()).with_context(|| format!("writing {}", out.display()))?;
            println!("{} modules written to {}", cat.entries.len(), out.display());
        }
        CatalogCommand::List { p, e, seed } => {
            let mut cfg = RunConfig::new(Target::Corrpro, p);
            cfg.e = e;
            cfg.seed = Some(seed);
            for (name, m) in load_catalog(&cfg, RingSpec::new(p, e)?)? {
                println!("{name:<28} length {}", m.length());
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(a) => verify(a),
        Command::Reduce(a) => reduce(a),
        Command::Catalog(c) => catalog(c),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
