//! Adversarial instance families: the online worst case `I*(m)` and the
//! VC-restricted batched worst case `I*_z(m)`.
//!
//! Batch `k` (1-based) of `I*_z(m)` uses the window of sets
//! `S_k, ..., S_{2^z + k - 1}`. The `2^z` window sets are indexed by bitmasks
//! in window order, so the last one (`S_{2^z + k - 1}`, the pinned set) gets
//! the all-ones mask. Core element `q` lies in every window set whose mask
//! has bit `q` set, and every batch element lies in the pool
//! `S_{2^z + k - 1}, ..., S_m`. The final element of the batch lies in the
//! pool only.

use crate::error::{Error, Result};
use crate::harmonic::pow2;
use crate::instance::{Batch, Family, Instance, InstanceMeta, SetSystem};
use crate::solvers::FractionalState;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdversaryConfig {
    pub family: Family,
    pub m: usize,
    pub z: u32,
    pub adaptive: bool,
}

impl AdversaryConfig {
    pub fn online(m: usize) -> Self {
        AdversaryConfig {
            family: Family::OnlineWorst,
            m,
            z: 0,
            adaptive: false,
        }
    }

    pub fn batched(m: usize, z: u32) -> Self {
        AdversaryConfig {
            family: Family::BatchedWorst,
            m,
            z,
            adaptive: false,
        }
    }

    pub fn adaptive(mut self, adaptive: bool) -> Self {
        self.adaptive = adaptive;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::InvalidArguments("m must be at least 1".into()));
        }
        if self.family == Family::OnlineWorst && self.z != 0 {
            return Err(Error::InvalidArguments(
                "the online family has z = 0".into(),
            ));
        }
        window_size(self.m, self.z).map(|_| ())
    }

    pub fn num_batches(&self) -> usize {
        window_size(self.m, self.z).map_or(0, |w| self.m - w + 1)
    }

    fn meta(&self) -> InstanceMeta {
        InstanceMeta {
            family: self.family,
            z: self.z,
            m: self.m,
        }
    }
}

fn window_size(m: usize, z: u32) -> Result<usize> {
    match pow2(z) {
        Some(w) if w <= m => Ok(w),
        _ => Err(Error::AdversaryImpossible { m, z }),
    }
}

/// Batch `k` (1-based) of `I*_z(m)` in canonical labels, 0-based sets.
pub fn canonical_batch(m: usize, z: u32, k: usize) -> Batch {
    let window = 1usize << z;
    let first = k - 1;
    let pinned = window + k - 2;
    let pool = pinned..m;
    let mut memberships: Vec<Vec<usize>> = (0..z)
        .map(|bit| {
            (0..window)
                .filter(|mask| mask >> bit & 1 == 1)
                .map(|mask| first + mask)
                .chain(pool.clone())
                .collect()
        })
        .collect();
    memberships.push(pool.collect());
    Batch::from_memberships(k, memberships)
}

/// `I*(m)`: element `i` lies in `S_i, ..., S_m`, one element per batch.
pub fn gen_online_worst(m: usize) -> Result<Instance> {
    let config = AdversaryConfig::online(m);
    config.validate()?;
    let batches = (1..=m)
        .map(|k| Batch::from_memberships(k, std::iter::once(k - 1..m)))
        .collect();
    Ok(Instance {
        system: SetSystem::unweighted(m).with_name(format!("I*({m})")),
        batches,
        meta: Some(config.meta()),
    })
}

/// `I*_z(m)` in canonical labels: `m - 2^z + 1` batches of `z + 1` elements.
pub fn gen_batched_worst(m: usize, z: u32) -> Result<Instance> {
    let config = AdversaryConfig::batched(m, z);
    config.validate()?;
    let batches = (1..=config.num_batches())
        .map(|k| canonical_batch(m, z, k))
        .collect();
    Ok(Instance {
        system: SetSystem::unweighted(m).with_name(format!("I*_{z}({m})")),
        batches,
        meta: Some(config.meta()),
    })
}

pub fn generate(config: &AdversaryConfig) -> Result<Instance> {
    match config.family {
        Family::OnlineWorst => gen_online_worst(config.m),
        Family::BatchedWorst => gen_batched_worst(config.m, config.z),
    }
}

/// The `2^z` sets and `z`-element batch whose traces are the full power set:
/// element `q` lies in every set whose index has bit `q` set. For `z = 0`
/// the batch is empty.
pub fn minimal_shattering_batch(z: u32) -> (SetSystem, Batch) {
    let m = 1usize << z;
    let memberships: Vec<Vec<usize>> = (0..z)
        .map(|bit| (0..m).filter(|mask| mask >> bit & 1 == 1).collect())
        .collect();
    (
        SetSystem::unweighted(m),
        Batch::from_memberships(1, memberships),
    )
}

/// Bijection from canonical set labels to the labels the algorithm sees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelabelMap {
    facing: Vec<usize>,
}

impl RelabelMap {
    pub fn identity(m: usize) -> Self {
        RelabelMap {
            facing: (0..m).collect(),
        }
    }

    pub fn facing(&self, canonical: usize) -> usize {
        self.facing[canonical]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.facing
    }

    pub fn is_identity(&self) -> bool {
        self.facing.iter().enumerate().all(|(i, &f)| i == f)
    }

    pub fn is_bijection(&self) -> bool {
        let mut seen = vec![false; self.facing.len()];
        self.facing
            .iter()
            .all(|&f| f < seen.len() && !std::mem::replace(&mut seen[f], true))
    }

    /// Rewrites a canonical batch into algorithm-facing labels.
    pub fn apply(&self, batch: &Batch) -> Batch {
        let k = batch.elements.first().map_or(1, |e| e.batch_index);
        Batch::from_memberships(
            k,
            batch.elements.iter().map(|e| {
                e.member_of
                    .iter()
                    .map(|&j| self.facing[j])
                    .collect::<Vec<_>>()
            }),
        )
    }
}

/// After batch `k` (1-based), gives canonical label `2^z + k - 1` to the pool
/// set with the largest current `x` (ties go to the smallest facing index),
/// so that the next batch leaves that set out of its pool.
pub fn adaptive_relabel(
    state: &FractionalState,
    relabel: &RelabelMap,
    k: usize,
    m: usize,
    z: u32,
) -> RelabelMap {
    let window = 1usize << z;
    let pinned = window + k - 2;
    let x = state.x();
    let chosen = (pinned..m)
        .max_by(|&a, &b| {
            let (fa, fb) = (relabel.facing[a], relabel.facing[b]);
            x[fa].total_cmp(&x[fb]).then(fb.cmp(&fa))
        })
        .unwrap_or(pinned);
    let mut next = relabel.clone();
    next.facing.swap(pinned, chosen);
    next
}

/// Reveals `I*_z(m)` one batch at a time, optionally relabeling the pool
/// after each batch in response to the algorithm's primal values.
#[derive(Debug, Clone)]
pub struct Adversary {
    config: AdversaryConfig,
    relabel: RelabelMap,
    next_k: usize,
}

impl Adversary {
    pub fn new(config: AdversaryConfig) -> Result<Self> {
        config.validate()?;
        Ok(Adversary {
            relabel: RelabelMap::identity(config.m),
            config,
            next_k: 1,
        })
    }

    pub fn config(&self) -> &AdversaryConfig {
        &self.config
    }

    pub fn system(&self) -> SetSystem {
        SetSystem::unweighted(self.config.m)
    }

    pub fn relabel(&self) -> &RelabelMap {
        &self.relabel
    }

    pub fn num_batches(&self) -> usize {
        self.config.num_batches()
    }

    /// The next batch in algorithm-facing labels, or `None` when done.
    pub fn next_batch(&mut self) -> Option<Batch> {
        if self.next_k > self.num_batches() {
            return None;
        }
        let batch = canonical_batch(self.config.m, self.config.z, self.next_k);
        self.next_k += 1;
        Some(self.relabel.apply(&batch))
    }

    /// Called once the algorithm has covered the batch last returned.
    pub fn observe(&mut self, state: &FractionalState) {
        if !self.config.adaptive || self.next_k == 1 {
            return;
        }
        self.relabel = adaptive_relabel(
            state,
            &self.relabel,
            self.next_k - 1,
            self.config.m,
            self.config.z,
        );
    }

    pub fn meta(&self) -> InstanceMeta {
        self.config.meta()
    }
}
