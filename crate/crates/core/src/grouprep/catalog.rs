use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::group::{Elem, GroupData, GroupKind};
use super::jbar::{decompose_jbar, jbar, steinberg};
use super::module::GModule;
use super::RepError;
use crate::exactalg::{CanonicalBasis, Mat, RingSpec};

pub const CATALOG_FORMAT: &str = "coefflab-catalog";
pub const CATALOG_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionRecord {
    pub element: [[u32; 2]; 2],
    pub matrix: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleRecord {
    pub name: String,
    pub rank: usize,
    pub actions: Vec<ActionRecord>,
    #[serde(default)]
    pub relations: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogFile {
    pub format: String,
    pub version: u32,
    pub group: GroupKind,
    pub p: u32,
    pub e: u32,
    pub modules: Vec<ModuleRecord>,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub module: GModule,
}

#[derive(Clone, Debug)]
pub struct Catalog {
    pub group: Arc<GroupData>,
    pub ring: RingSpec,
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn get(&self, name: &str) -> Option<&GModule> {
        self.entries.iter().find(|e| e.name == name).map(|e| &e.module)
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.iter().map(|e| e.name.clone()).collect()
    }

    pub fn to_file(&self) -> CatalogFile {
        let modules = self
            .entries
            .iter()
            .map(|e| ModuleRecord {
                name: e.name.clone(),
                rank: e.module.cover(),
                actions: self
                    .group
                    .generators()
                    .iter()
                    .zip(e.module.generator_actions())
                    .map(|(g, a)| ActionRecord { element: g.rows(), matrix: a.row_vecs() })
                    .collect(),
                relations: e.module.relations().rows().to_vec(),
            })
            .collect();
        CatalogFile {
            format: CATALOG_FORMAT.into(),
            version: CATALOG_VERSION,
            group: self.group.kind(),
            p: self.ring.p(),
            e: self.ring.e(),
            modules,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("catalog serializes")
    }

    pub fn from_json(text: &str) -> Result<Catalog, RepError> {
        let file: CatalogFile = serde_json::from_str(text).map_err(|e| RepError::Catalog(e.to_string()))?;
        Catalog::from_file(&file)
    }

    pub fn from_file(file: &CatalogFile) -> Result<Catalog, RepError> {
        if file.format != CATALOG_FORMAT || file.version != CATALOG_VERSION {
            return Err(RepError::Catalog(format!("unsupported format {} v{}", file.format, file.version)));
        }
        let ring = RingSpec::new(file.p, file.e)?;
        let group = Arc::new(GroupData::build(file.group, file.p)?);
        let mut entries = Vec::new();
        for rec in &file.modules {
            let mut gens = Vec::new();
            for g in group.generators() {
                let act = rec
                    .actions
                    .iter()
                    .find(|a| Elem::new(a.element[0][0], a.element[0][1], a.element[1][0], a.element[1][1]) == *g)
                    .ok_or_else(|| RepError::Catalog(format!("{}: missing action of {:?}", rec.name, g.rows())))?;
                let rows: Vec<Vec<i64>> = act.matrix.iter().map(|r| r.iter().map(|&a| a as i64).collect()).collect();
                if rows.len() != rec.rank {
                    return Err(RepError::Catalog(format!("{}: action has wrong size", rec.name)));
                }
                gens.push(Mat::from_rows(ring, rec.rank, &rows)?);
            }
            let rel_rows: Vec<Vec<i64>> =
                rec.relations.iter().map(|r| r.iter().map(|&a| a as i64).collect()).collect();
            let relations = if rel_rows.is_empty() {
                CanonicalBasis::zero(ring, rec.rank)
            } else {
                CanonicalBasis::from_mat(&Mat::from_rows(ring, rec.rank, &rel_rows)?)
            };
            let module = GModule::new(group.clone(), gens, relations)?;
            entries.push(CatalogEntry { name: rec.name.clone(), module });
        }
        Ok(Catalog { group, ring, entries })
    }
}

/// Quotient of `jbar^r` by the submodule generated by `gens_count` random
/// vectors; retried until the quotient is neither zero nor everything.
pub fn random_jbar_quotient(base: &GModule, r: usize, gens_count: usize, rng: &mut ChaCha8Rng) -> GModule {
    let big = base.power(r);
    let ring = big.ring();
    let n = big.cover();
    loop {
        let vecs: Vec<Vec<u32>> =
            (0..gens_count).map(|_| (0..n).map(|_| rng.gen_range(0..ring.modulus())).collect()).collect();
        let sub = big.generated(&vecs);
        let len = big.sub_length(&sub);
        if len > 0 && len < big.length() {
            let q = big.quotient(&sub).expect("generated submodules are stable");
            return if ring.is_field() { q.compact().0 } else { q };
        }
    }
}

/// The built-in catalog: trivial, jbar, and seeded random quotients of
/// `jbar^r` for `r <= 3`; over a field for `SL_2` also the principal-series
/// summands `ps:i` and the Steinberg quotient.
pub fn builtin_catalog(kind: GroupKind, ring: RingSpec, seed: u64) -> Result<Catalog, RepError> {
    let group = Arc::new(GroupData::build(kind, ring.p())?);
    let jb = jbar(group.clone(), ring)?;
    let mut entries = vec![CatalogEntry { name: "trivial".into(), module: GModule::trivial(group.clone(), ring) }];
    if ring.is_field() && kind == GroupKind::SL2 {
        entries.push(CatalogEntry { name: "steinberg".into(), module: steinberg(&jb)? });
    }
    entries.push(CatalogEntry { name: "jbar".into(), module: jb.module.clone() });
    if ring.is_field() && kind == GroupKind::SL2 {
        for s in decompose_jbar(&jb)? {
            entries.push(CatalogEntry { name: format!("ps:{}", s.index), module: s.module.compact().0 });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for r in 1..=3usize {
        let module = random_jbar_quotient(&jb.module, r, 1, &mut rng);
        entries.push(CatalogEntry { name: format!("rq:{r}"), module });
    }
    Ok(Catalog { group, ring, entries })
}
