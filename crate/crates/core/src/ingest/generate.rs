//! Synthetic evolving-graph traces: a uniform random base graph followed by
//! batches that delete random present edges and add random absent ones.

use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeTriple, VertexId, Weight};
use crate::ingest::series::DeltaBatch;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub num_vertices: usize,
    pub num_edges: usize,
    /// Number of delta batches; the trace has one more snapshot than this.
    pub transitions: usize,
    /// Updates per batch.
    pub batch_size: usize,
    /// Fraction of each batch that is additions, the rest deletions.
    pub add_fraction: f64,
    pub seed: u64,
    /// Integer weights are drawn uniformly from `min_weight..=max_weight`.
    pub min_weight: u32,
    pub max_weight: u32,
    /// A re-added pair gets the weight it had before it was deleted.
    pub restore_weights: bool,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            num_vertices: 1000,
            num_edges: 10_000,
            transitions: 8,
            batch_size: 100,
            add_fraction: 0.5,
            seed: 1,
            min_weight: 1,
            max_weight: 10,
            restore_weights: true,
        }
    }
}

impl GeneratorConfig {
    pub fn additions_per_batch(&self) -> usize {
        (self.batch_size as f64 * self.add_fraction).round() as usize
    }

    fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if !(0.0..=1.0).contains(&self.add_fraction) {
            return fail(format!("add fraction {} not in [0, 1]", self.add_fraction));
        }
        if self.batch_size > self.num_edges {
            return fail(format!(
                "batch size {} exceeds edge count {}",
                self.batch_size, self.num_edges
            ));
        }
        if self.min_weight == 0 || self.min_weight > self.max_weight {
            return fail(format!(
                "weight range {}..={} is empty or contains 0",
                self.min_weight, self.max_weight
            ));
        }
        if self.num_vertices > u32::MAX as usize {
            return fail("too many vertices".into());
        }
        let pairs = self
            .num_vertices
            .saturating_mul(self.num_vertices.saturating_sub(1));
        let adds = self.additions_per_batch();
        let dels = self.batch_size - adds;
        // live edge count before the last batch, at its extreme
        let earlier = self.transitions.saturating_sub(1);
        let most = self.num_edges + earlier * adds.saturating_sub(dels);
        let least = self.num_edges as i64 - (earlier * dels.saturating_sub(adds)) as i64;
        let needed = if self.transitions > 0 {
            most + adds
        } else {
            self.num_edges
        };
        if needed > pairs {
            return fail(format!(
                "{} vertices admit only {pairs} distinct edges, trace needs {needed}",
                self.num_vertices
            ));
        }
        if self.transitions > 0 && least < dels as i64 {
            return fail("deletions exhaust the edge set".into());
        }
        Ok(())
    }
}

type Pair = (u32, u32);

struct LiveEdges {
    list: Vec<Pair>,
    index: HashMap<Pair, usize>,
    weight: HashMap<Pair, Weight>,
}

impl LiveEdges {
    fn insert(&mut self, p: Pair, w: Weight) {
        self.index.insert(p, self.list.len());
        self.list.push(p);
        self.weight.insert(p, w);
    }

    fn remove_at(&mut self, i: usize) -> (Pair, Weight) {
        let p = self.list.swap_remove(i);
        self.index.remove(&p);
        if let Some(moved) = self.list.get(i) {
            self.index.insert(*moved, i);
        }
        (p, self.weight.remove(&p).expect("weight of live edge"))
    }

    fn triple(p: Pair, w: Weight) -> EdgeTriple {
        EdgeTriple {
            src: VertexId(p.0),
            dst: VertexId(p.1),
            weight: w,
        }
    }
}

fn random_weight(rng: &mut ChaCha8Rng, cfg: &GeneratorConfig) -> Weight {
    Weight::new(f64::from(rng.gen_range(cfg.min_weight..=cfg.max_weight)))
        .expect("positive integer weight")
}

fn random_absent_pair(
    rng: &mut ChaCha8Rng,
    n: u32,
    live: &LiveEdges,
    banned: &HashSet<Pair>,
) -> Pair {
    loop {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n - 1);
        let v = if v >= u { v + 1 } else { v };
        let p = (u, v);
        if !live.index.contains_key(&p) && !banned.contains(&p) {
            return p;
        }
    }
}

/// Base edge list (sorted) and `transitions` delta batches. Deterministic for a
/// given configuration. Self-loops are never generated and each vertex pair
/// carries at most one edge at a time.
pub fn generate_evolving(cfg: &GeneratorConfig) -> Result<(Vec<EdgeTriple>, Vec<DeltaBatch>)> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.num_vertices as u32;
    let mut live = LiveEdges {
        list: Vec::new(),
        index: HashMap::new(),
        weight: HashMap::new(),
    };
    let none = HashSet::new();
    for _ in 0..cfg.num_edges {
        let p = random_absent_pair(&mut rng, n, &live, &none);
        let w = random_weight(&mut rng, cfg);
        live.insert(p, w);
    }
    let mut base: Vec<EdgeTriple> = live
        .list
        .iter()
        .map(|p| LiveEdges::triple(*p, live.weight[p]))
        .collect();
    base.sort_unstable();

    let adds = cfg.additions_per_batch();
    let dels = cfg.batch_size - adds;
    let mut remembered: HashMap<Pair, Weight> = HashMap::new();
    let mut deltas = Vec::with_capacity(cfg.transitions);
    for _ in 0..cfg.transitions {
        let mut batch = DeltaBatch::default();
        let mut deleted = HashSet::with_capacity(dels);
        for _ in 0..dels {
            let i = rng.gen_range(0..live.list.len());
            let (p, w) = live.remove_at(i);
            remembered.insert(p, w);
            deleted.insert(p);
            batch.deletions.push(LiveEdges::triple(p, w));
        }
        for _ in 0..adds {
            let p = random_absent_pair(&mut rng, n, &live, &deleted);
            let fresh = random_weight(&mut rng, cfg);
            let w = match remembered.get(&p) {
                Some(&old) if cfg.restore_weights => old,
                _ => fresh,
            };
            live.insert(p, w);
            batch.additions.push(LiveEdges::triple(p, w));
        }
        batch.additions.sort_unstable();
        batch.deletions.sort_unstable();
        deltas.push(batch);
    }
    Ok((base, deltas))
}
