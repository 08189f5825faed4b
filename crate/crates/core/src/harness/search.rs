use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::instance::{Batch, Instance, SetSystem};
use crate::solvers::{offline_opt, Algorithm, PrimalDualSolver};

/// Exhaustive search is limited to `m <= 4`: `(2^m - 1)^len` sequences.
pub const MAX_SEARCH_SETS: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub best_ratio: f64,
    /// Membership lists (0-based) of the maximizing online sequence.
    pub best_sequence: Vec<Vec<usize>>,
    pub evaluated: usize,
}

/// Ratio of `algorithm` (with `d = m`) on the online sequence whose `i`-th
/// singleton batch has membership `sequence[i]`.
pub fn evaluate_sequence(
    m: usize,
    sequence: &[Vec<usize>],
    algorithm: Algorithm,
    epsilon: f64,
) -> Result<f64> {
    let inst = Instance::new(
        SetSystem::unweighted(m),
        sequence
            .iter()
            .enumerate()
            .map(|(i, members)| Batch::from_memberships(i + 1, [members.iter().copied()]))
            .collect(),
    );
    inst.ensure_valid()?;
    let mut solver =
        PrimalDualSolver::new(&inst.system, algorithm, epsilon, m, Default::default())?;
    for batch in &inst.batches {
        solver.process_batch(batch)?;
    }
    let opt = offline_opt(&inst)?;
    Ok(solver.finish(opt.cost).ratio)
}

/// Tries every online sequence of non-empty membership patterns of length
/// `1..=max_len` and keeps the first one reaching the largest ratio.
pub fn adversary_search(
    m: usize,
    algorithm: Algorithm,
    epsilon: f64,
    max_len: usize,
) -> Result<SearchOutcome> {
    if m == 0 || max_len == 0 {
        return Err(Error::InvalidArguments(
            "m and max_len must be positive".into(),
        ));
    }
    if m > MAX_SEARCH_SETS {
        return Err(Error::TooLarge {
            what: "adversary search over sets",
            size: m,
            limit: MAX_SEARCH_SETS,
        });
    }
    if max_len > m {
        return Err(Error::TooLarge {
            what: "adversary search sequence length",
            size: max_len,
            limit: m,
        });
    }
    let patterns: Vec<Vec<usize>> = (1u32..1 << m)
        .map(|mask| (0..m).filter(|j| mask >> j & 1 == 1).collect())
        .collect();
    let mut sequences: Vec<Vec<usize>> = Vec::new();
    for len in 1..=max_len {
        let total = patterns.len().pow(len as u32);
        sequences.extend((0..total).map(|mut code| {
            let mut seq = Vec::with_capacity(len);
            for _ in 0..len {
                seq.push(code % patterns.len());
                code /= patterns.len();
            }
            seq.reverse();
            seq
        }));
    }
    let ratios: Vec<f64> = sequences
        .par_iter()
        .map(|seq| {
            let memberships: Vec<Vec<usize>> = seq.iter().map(|&p| patterns[p].clone()).collect();
            evaluate_sequence(m, &memberships, algorithm, epsilon)
        })
        .collect::<Result<_>>()?;
    let mut best = 0;
    for (i, &r) in ratios.iter().enumerate() {
        if r > ratios[best] {
            best = i;
        }
    }
    Ok(SearchOutcome {
        best_ratio: ratios[best],
        best_sequence: sequences[best]
            .iter()
            .map(|&p| patterns[p].clone())
            .collect(),
        evaluated: sequences.len(),
    })
}

/// Whether `sequence` is an `I*(m)`-shaped chain: `m` memberships of sizes
/// `m, m - 1, ..., 1`, each contained in the previous one.
pub fn is_nested_chain(sequence: &[Vec<usize>], m: usize) -> bool {
    sequence.len() == m
        && sequence.iter().enumerate().all(|(i, s)| s.len() == m - i)
        && sequence
            .windows(2)
            .all(|w| w[1].iter().all(|j| w[0].contains(j)))
}
