//! Exact shattering tests and VC-dimension of a batch against the full
//! collection of sets.
//!
//! For a batch `B` and set `S_j`, the trace `S_j ∩ B` is encoded as a bitmask
//! over the positions of `B`. `B` is shattered iff the distinct traces number
//! `2^|B|`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::harmonic::pow2;
use crate::instance::{Batch, Element, Instance};

/// Largest batch for which shattering is decided by enumeration.
pub const MAX_SHATTER_SIZE: usize = 25;

/// `S ∩ B` for one set `S`, as a bitmask over the elements of `B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TracePattern(pub u32);

fn guard(len: usize) -> Result<()> {
    if len > MAX_SHATTER_SIZE {
        return Err(Error::TooLarge {
            what: "shattering candidate",
            size: len,
            limit: MAX_SHATTER_SIZE,
        });
    }
    Ok(())
}

fn trace_of(elements: &[&Element], set: usize) -> TracePattern {
    let mut mask = 0u32;
    for (i, e) in elements.iter().enumerate() {
        if e.contains(set) {
            mask |= 1 << i;
        }
    }
    TracePattern(mask)
}

/// Distinct traces `{S_j ∩ B : j < num_sets}`.
pub fn trace_patterns(elements: &[&Element], num_sets: usize) -> Result<BTreeSet<TracePattern>> {
    guard(elements.len())?;
    Ok((0..num_sets).map(|j| trace_of(elements, j)).collect())
}

/// Whether `elements` is shattered by the `num_sets` sets described by the
/// elements' membership lists. The empty subset must be realized too, by a
/// set disjoint from `B`.
pub fn is_shattered(elements: &[&Element], num_sets: usize) -> Result<bool> {
    let patterns = trace_patterns(elements, num_sets)?;
    Ok(patterns.len() == 1usize << elements.len())
}

/// Size of the largest shattered subset of `batch`.
///
/// Subsets of a shattered set are shattered, so the search goes top-down by
/// size and stops at the first hit. Sizes with `2^s` above the number of
/// distinct traces are skipped outright.
pub fn vc_dimension(batch: &Batch, num_sets: usize) -> Result<usize> {
    let n = batch.len();
    guard(n)?;
    let elements: Vec<&Element> = batch.elements.iter().collect();
    let traces: Vec<u32> = trace_patterns(&elements, num_sets)?
        .into_iter()
        .map(|p| p.0)
        .collect();
    if traces.is_empty() {
        return Ok(0);
    }
    let max_by_count = usize::BITS as usize - 1 - traces.len().leading_zeros() as usize;
    let mut projected = Vec::with_capacity(traces.len());
    for size in (1..=n.min(max_by_count)).rev() {
        let mut subset: u32 = (1u32 << size) - 1;
        let limit: u64 = 1u64 << n;
        while (subset as u64) < limit {
            projected.clear();
            projected.extend(traces.iter().map(|t| t & subset));
            projected.sort_unstable();
            projected.dedup();
            if projected.len() == 1 << size {
                return Ok(size);
            }
            subset = next_same_popcount(subset);
        }
    }
    Ok(0)
}

// Gosper's hack: next integer with the same number of set bits.
fn next_same_popcount(v: u32) -> u32 {
    let v = v as u64;
    let c = v & v.wrapping_neg();
    let r = v + c;
    ((((r ^ v) >> 2) / c) | r) as u32
}

/// VC-dimension of every batch of the instance, in order.
pub fn batch_vc_dimensions(inst: &Instance) -> Result<Vec<usize>> {
    inst.batches
        .iter()
        .map(|b| vc_dimension(b, inst.num_sets()))
        .collect()
}

/// True iff every batch has `VCD(β_k, S) ≥ z`.
pub fn check_adversary_restriction(inst: &Instance, z: u32) -> Result<bool> {
    let m = inst.num_sets();
    match pow2(z) {
        Some(w) if m >= w => {}
        _ => return Err(Error::AdversaryImpossible { m, z }),
    }
    if z == 0 {
        return Ok(true);
    }
    for batch in &inst.batches {
        if vc_dimension(batch, m)? < z as usize {
            return Ok(false);
        }
    }
    Ok(true)
}
