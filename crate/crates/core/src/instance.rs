//! Set systems, batches and instances of the batched set cover problem.
//!
//! Set indices are 0-based in memory. The JSON wire format uses 1-based
//! indices (`S_1..S_m`); conversion happens only in [`Instance::from_json`]
//! and [`Instance::to_json`].

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The collection of `m` cost-weighted sets. Elements are revealed later, so
/// the system itself only carries costs.
#[derive(Debug, Clone, PartialEq)]
pub struct SetSystem {
    pub costs: Vec<f64>,
    pub name: Option<String>,
}

impl SetSystem {
    pub fn new(costs: Vec<f64>) -> Self {
        SetSystem { costs, name: None }
    }

    pub fn unweighted(m: usize) -> Self {
        SetSystem::new(vec![1.0; m])
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn num_sets(&self) -> usize {
        self.costs.len()
    }

    pub fn cost(&self, set: usize) -> f64 {
        self.costs[set]
    }

    pub fn is_unweighted(&self) -> bool {
        self.costs.iter().all(|&c| c == 1.0)
    }
}

/// Identifies `σ_{k,q}`: `batch` is 1-based (β_1 is the first batch),
/// `position` is 0-based within the batch. Displayed as `k.q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementId {
    pub batch: usize,
    pub position: usize,
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.batch, self.position)
    }
}

impl FromStr for ElementId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArguments(format!("malformed element id {s:?}, expected k.q"));
        let (k, q) = s.split_once('.').ok_or_else(bad)?;
        Ok(ElementId {
            batch: k.parse().map_err(|_| bad())?,
            position: q.parse().map_err(|_| bad())?,
        })
    }
}

/// One revealed element together with the sets containing it, `S(σ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub batch_index: usize,
    pub position: usize,
    /// 0-based set indices, sorted and duplicate-free.
    pub member_of: Vec<usize>,
}

impl Element {
    pub fn id(&self) -> ElementId {
        ElementId {
            batch: self.batch_index,
            position: self.position,
        }
    }

    pub fn contains(&self, set: usize) -> bool {
        self.member_of.binary_search(&set).is_ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Batch {
    pub elements: Vec<Element>,
}

impl Batch {
    /// Builds batch `batch_index` (1-based) from 0-based membership lists,
    /// sorting and deduplicating each list.
    pub fn from_memberships<I, M>(batch_index: usize, memberships: I) -> Self
    where
        I: IntoIterator<Item = M>,
        M: IntoIterator<Item = usize>,
    {
        let elements = memberships
            .into_iter()
            .enumerate()
            .map(|(position, members)| {
                let mut member_of: Vec<usize> = members.into_iter().collect();
                member_of.sort_unstable();
                member_of.dedup();
                Element {
                    batch_index,
                    position,
                    member_of,
                }
            })
            .collect();
        Batch { elements }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// `S(β_k)`: the union of the membership lists of a batch's elements.
pub fn covering_sets_of(batch: &Batch) -> BTreeSet<usize> {
    batch
        .elements
        .iter()
        .flat_map(|e| e.member_of.iter().copied())
        .collect()
}

/// Which adversarial family produced an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// The online worst case `I*(m)`: singleton batches of nested memberships.
    #[serde(rename = "I")]
    OnlineWorst,
    /// The VC-restricted batched worst case `I*_z(m)`.
    #[serde(rename = "Iz")]
    BatchedWorst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceMeta {
    pub family: Family,
    pub z: u32,
    pub m: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub system: SetSystem,
    pub batches: Vec<Batch>,
    pub meta: Option<InstanceMeta>,
}

impl Instance {
    pub fn new(system: SetSystem, batches: Vec<Batch>) -> Self {
        Instance {
            system,
            batches,
            meta: None,
        }
    }

    pub fn num_sets(&self) -> usize {
        self.system.num_sets()
    }

    pub fn elements(&self) -> impl Iterator<Item = &Element> {
        self.batches.iter().flat_map(|b| b.elements.iter())
    }

    /// `n`, the number of revealed elements.
    pub fn num_elements(&self) -> usize {
        self.batches.iter().map(Batch::len).sum()
    }

    /// `d = max |S(σ)|` over all revealed elements.
    pub fn max_row_sparsity(&self) -> usize {
        self.elements()
            .map(|e| e.member_of.len())
            .max()
            .unwrap_or(0)
    }

    pub fn max_batch_size(&self) -> usize {
        self.batches.iter().map(Batch::len).max().unwrap_or(0)
    }

    /// For each set, the ids of the revealed elements it contains.
    pub fn set_memberships(&self) -> Vec<Vec<ElementId>> {
        let mut sets = vec![Vec::new(); self.num_sets()];
        for e in self.elements() {
            for &j in &e.member_of {
                if let Some(list) = sets.get_mut(j) {
                    list.push(e.id());
                }
            }
        }
        sets
    }

    /// Checks every structural invariant; returns one message per violation.
    pub fn validate(&self) -> Vec<String> {
        validate_instance(self)
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let violations = self.validate();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidInstance(violations))
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let wire: InstanceFile = serde_json::from_str(text)?;
        wire.try_into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&InstanceFile::from(self)).expect("instance serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&InstanceFile::from(self)).expect("instance serializes")
    }
}

pub fn validate_instance(inst: &Instance) -> Vec<String> {
    let mut out = Vec::new();
    let m = inst.num_sets();
    if m == 0 {
        out.push("set system has no sets (m = 0)".to_string());
    }
    for (j, &c) in inst.system.costs.iter().enumerate() {
        if !(c > 0.0 && c.is_finite()) {
            out.push(format!(
                "set {} has non-positive or non-finite cost {c}",
                j + 1
            ));
        }
    }
    if let Some(meta) = &inst.meta {
        if meta.m != m {
            out.push(format!("meta.m = {} disagrees with num_sets = {m}", meta.m));
        }
    }
    for (i, batch) in inst.batches.iter().enumerate() {
        let k = i + 1;
        if batch.is_empty() {
            out.push(format!("batch {k} is empty"));
        }
        for (q, e) in batch.elements.iter().enumerate() {
            let id = e.id();
            if e.batch_index != k || e.position != q {
                out.push(format!("element {id} is stored at position {k}.{q}"));
            }
            if e.member_of.is_empty() {
                out.push(format!("element {id} uncoverable"));
            }
            for &j in &e.member_of {
                if j >= m {
                    out.push(format!("element {id} references set {} > m={m}", j + 1));
                }
            }
            if e.member_of.windows(2).any(|w| w[0] >= w[1]) {
                out.push(format!(
                    "element {id} member_of is not sorted and duplicate-free"
                ));
            }
        }
    }
    out
}

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    num_sets: usize,
    costs: Vec<f64>,
    batches: Vec<Vec<ElementFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    meta: Option<InstanceMeta>,
}

#[derive(Serialize, Deserialize)]
struct ElementFile {
    id: String,
    member_of: Vec<usize>,
}

impl From<&Instance> for InstanceFile {
    fn from(inst: &Instance) -> Self {
        InstanceFile {
            num_sets: inst.num_sets(),
            costs: inst.system.costs.clone(),
            batches: inst
                .batches
                .iter()
                .map(|b| {
                    b.elements
                        .iter()
                        .map(|e| {
                            let mut member_of: Vec<usize> =
                                e.member_of.iter().map(|j| j + 1).collect();
                            member_of.sort_unstable();
                            ElementFile {
                                id: e.id().to_string(),
                                member_of,
                            }
                        })
                        .collect()
                })
                .collect(),
            meta: inst.meta,
        }
    }
}

impl TryFrom<InstanceFile> for Instance {
    type Error = Error;

    fn try_from(wire: InstanceFile) -> Result<Self> {
        if wire.costs.len() != wire.num_sets {
            return Err(Error::InvalidInstance(vec![format!(
                "costs has {} entries but num_sets = {}",
                wire.costs.len(),
                wire.num_sets
            )]));
        }
        let mut batches = Vec::with_capacity(wire.batches.len());
        for elements in wire.batches {
            let mut batch = Vec::with_capacity(elements.len());
            for ef in elements {
                let id: ElementId = ef.id.parse()?;
                if ef.member_of.contains(&0) {
                    return Err(Error::InvalidInstance(vec![format!(
                        "element {id} references set 0; set indices are 1-based"
                    )]));
                }
                batch.push(Element {
                    batch_index: id.batch,
                    position: id.position,
                    member_of: ef.member_of.iter().map(|j| j - 1).collect(),
                });
            }
            batches.push(Batch { elements: batch });
        }
        Ok(Instance {
            system: SetSystem::new(wire.costs),
            batches,
            meta: wire.meta,
        })
    }
}
