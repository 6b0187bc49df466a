use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactalg::{CanonicalBasis, Mat, RingSpec};
use crate::grouprep::{jbar, random_jbar_quotient, GModule, GroupData, RepError};

#[derive(Clone, Copy, Debug)]
pub struct StreamShape {
    /// Quotients are taken of `jbar^r` with `1 <= r <= max_power`.
    pub max_power: usize,
    /// Number of random vectors generating each killed or kept submodule.
    pub generators: usize,
}

impl Default for StreamShape {
    fn default() -> Self {
        StreamShape { max_power: 2, generators: 2 }
    }
}

#[derive(Clone, Debug)]
pub enum RandomInstance {
    Module { id: usize, name: String, module: GModule },
    Surjection { id: usize, name: String, source: GModule, target: GModule, map: Mat },
    Injection { id: usize, name: String, sub: GModule, ambient: GModule, map: Mat },
}

impl RandomInstance {
    pub fn id(&self) -> usize {
        match self {
            RandomInstance::Module { id, .. }
            | RandomInstance::Surjection { id, .. }
            | RandomInstance::Injection { id, .. } => *id,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            RandomInstance::Module { name, .. }
            | RandomInstance::Surjection { name, .. }
            | RandomInstance::Injection { name, .. } => name,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StreamKind {
    Modules,
    Surjections,
    Injections,
}

/// Seeded, endless stream of random instances built from `jbar`.
pub struct RandomStream {
    rng: ChaCha8Rng,
    base: GModule,
    shape: StreamShape,
    kind: StreamKind,
    next_id: usize,
}

pub fn random_instance_stream(
    group: Arc<GroupData>,
    ring: RingSpec,
    seed: u64,
    shape: StreamShape,
    kind: StreamKind,
) -> Result<RandomStream, RepError> {
    let base = jbar(group, ring)?.module;
    Ok(RandomStream { rng: ChaCha8Rng::seed_from_u64(seed), base, shape, kind, next_id: 0 })
}

impl RandomStream {
    fn random_vectors(&mut self, n: usize, count: usize) -> Vec<Vec<u32>> {
        let q = self.base.ring().modulus();
        (0..count).map(|_| (0..n).map(|_| self.rng.gen_range(0..q)).collect()).collect()
    }

    fn random_module(&mut self) -> (usize, GModule) {
        let r = self.rng.gen_range(1..=self.shape.max_power);
        let base = self.base.clone();
        (r, random_jbar_quotient(&base, r, self.shape.generators, &mut self.rng))
    }
}

impl Iterator for RandomStream {
    type Item = RandomInstance;

    fn next(&mut self) -> Option<RandomInstance> {
        let id = self.next_id;
        self.next_id += 1;
        let item = match self.kind {
            StreamKind::Modules => {
                let (r, module) = self.random_module();
                RandomInstance::Module { id, name: format!("random:{id}:jbar^{r}"), module }
            }
            StreamKind::Surjections => {
                let (r, source) = self.random_module();
                // kill a further generated submodule; the map is the identity on covers
                let n = source.cover();
                let vecs = self.random_vectors(n, 1);
                let sub = source.generated(&vecs);
                let target = source.quotient(&sub).expect("generated submodules are stable");
                let map = Mat::identity(source.ring(), n);
                RandomInstance::Surjection { id, name: format!("random:{id}:jbar^{r}->quotient"), source, target, map }
            }
            StreamKind::Injections => {
                let (r, ambient) = self.random_module();
                let ring = ambient.ring();
                let n = ambient.cover();
                // every fourth instance is p * W inside W when e > 1
                let sub = if !ring.is_field() && id % 4 == 3 {
                    let rows = Mat::scalar(ring, n, ring.p()).row_vecs();
                    ambient.relations().with_vectors(&rows)
                } else {
                    let count = self.rng.gen_range(1..=self.shape.generators);
                    let vecs = self.random_vectors(n, count);
                    ambient.generated(&vecs)
                };
                let (sub_mod, map) = ambient.submodule(&sub).expect("stable submodule");
                RandomInstance::Injection {
                    id,
                    name: format!("random:{id}:sub of jbar^{r}"),
                    sub: sub_mod,
                    ambient,
                    map,
                }
            }
        };
        Some(item)
    }
}

/// The submodule `p W` of `W` (the whole relations part when `e = 1`).
pub fn p_multiple(w: &GModule) -> CanonicalBasis {
    let ring = w.ring();
    let rows = Mat::scalar(ring, w.cover(), ring.p()).row_vecs();
    w.relations().with_vectors(&rows)
}
