//! Exact minimum-cost integral set cover of the revealed elements.

use crate::error::{Error, Result};
use crate::instance::Instance;

/// Exact search is restricted to at most this many sets.
pub const MAX_EXACT_SETS: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OptMode {
    #[default]
    Exact,
    /// Beyond [`MAX_EXACT_SETS`], return the greedy cover (an upper bound on
    /// the optimum) instead of failing.
    GreedyFallback,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OfflineSolution {
    pub cost: f64,
    /// 0-based indices, ascending.
    pub chosen_sets: Vec<usize>,
    /// False when the greedy fallback was used.
    pub exact: bool,
}

pub fn offline_opt(inst: &Instance) -> Result<OfflineSolution> {
    offline_opt_with(inst, OptMode::Exact)
}

pub fn offline_opt_with(inst: &Instance, mode: OptMode) -> Result<OfflineSolution> {
    if let Some(e) = inst.elements().find(|e| e.member_of.is_empty()) {
        return Err(Error::Infeasible(e.id().to_string()));
    }
    let m = inst.num_sets();
    if m > MAX_EXACT_SETS {
        return match mode {
            OptMode::GreedyFallback => {
                let rows: Vec<&[usize]> = inst.elements().map(|e| e.member_of.as_slice()).collect();
                let chosen = greedy_cover(&rows, &inst.system.costs);
                Ok(OfflineSolution {
                    cost: chosen.iter().map(|&j| inst.system.costs[j]).sum(),
                    chosen_sets: chosen,
                    exact: false,
                })
            }
            OptMode::Exact => Err(Error::TooLarge {
                what: "set system",
                size: m,
                limit: MAX_EXACT_SETS,
            }),
        };
    }
    let mut rows = Vec::with_capacity(inst.num_elements());
    for e in inst.elements() {
        let mut mask = 0u64;
        for &j in &e.member_of {
            if j >= m {
                return Err(Error::InvalidInstance(vec![format!(
                    "element {} references set {} > m={m}",
                    e.id(),
                    j + 1
                )]));
            }
            mask |= 1 << j;
        }
        rows.push(mask);
    }
    let (cost, chosen) = BranchAndBound::new(reduce_rows(rows), &inst.system.costs).solve();
    Ok(OfflineSolution {
        cost,
        chosen_sets: (0..m).filter(|j| chosen >> j & 1 == 1).collect(),
        exact: true,
    })
}

/// Drops duplicate rows and rows implied by a subset row: any cover of the
/// smaller row also covers the larger one.
fn reduce_rows(mut rows: Vec<u64>) -> Vec<u64> {
    rows.sort_unstable_by_key(|r| (r.count_ones(), *r));
    rows.dedup();
    let mut kept: Vec<u64> = Vec::with_capacity(rows.len());
    for r in rows {
        if !kept.iter().any(|&k| k & !r == 0) {
            kept.push(r);
        }
    }
    kept
}

/// Repeatedly takes the set with the lowest cost per newly covered row.
pub fn greedy_cover(rows: &[&[usize]], costs: &[f64]) -> Vec<usize> {
    let mut covered = vec![false; rows.len()];
    let mut chosen = Vec::new();
    let mut remaining = rows.len();
    while remaining > 0 {
        let mut gain = vec![0usize; costs.len()];
        for (row, _) in rows.iter().zip(&covered).filter(|(_, &c)| !c) {
            for &j in row.iter() {
                gain[j] += 1;
            }
        }
        let best = (0..costs.len()).filter(|&j| gain[j] > 0).min_by(|&a, &b| {
            (costs[a] / gain[a] as f64)
                .total_cmp(&(costs[b] / gain[b] as f64))
                .then(a.cmp(&b))
        });
        let Some(best) = best else { break };
        chosen.push(best);
        for (row, c) in rows.iter().zip(covered.iter_mut()) {
            if !*c && row.contains(&best) {
                *c = true;
                remaining -= 1;
            }
        }
    }
    chosen.sort_unstable();
    chosen
}

struct BranchAndBound<'a> {
    rows: Vec<u64>,
    costs: &'a [f64],
    best_cost: f64,
    best_sets: u64,
}

impl<'a> BranchAndBound<'a> {
    fn new(rows: Vec<u64>, costs: &'a [f64]) -> Self {
        let lists: Vec<Vec<usize>> = rows.iter().map(|&r| bits(r).collect()).collect();
        let slices: Vec<&[usize]> = lists.iter().map(Vec::as_slice).collect();
        let greedy = greedy_cover(&slices, costs);
        BranchAndBound {
            best_cost: greedy.iter().map(|&j| costs[j]).sum(),
            best_sets: greedy.iter().fold(0, |acc, &j| acc | 1 << j),
            rows,
            costs,
        }
    }

    fn solve(mut self) -> (f64, u64) {
        let rows = std::mem::take(&mut self.rows);
        self.search(&rows, 0, 0.0);
        (self.best_cost, self.best_sets)
    }

    // Neither bound uses an LP relaxation: the cheapest set of the hardest
    // row, and the best cost-per-row ratio times the number of rows left.
    fn lower_bound(&self, uncovered: &[u64]) -> f64 {
        let mut hardest: f64 = 0.0;
        let mut counts = vec![0usize; self.costs.len()];
        for &r in uncovered {
            let mut cheapest = f64::INFINITY;
            for j in bits(r) {
                counts[j] += 1;
                cheapest = cheapest.min(self.costs[j]);
            }
            hardest = hardest.max(cheapest);
        }
        let per_row = counts
            .iter()
            .enumerate()
            .filter(|(_, &n)| n > 0)
            .map(|(j, &n)| self.costs[j] / n as f64)
            .fold(f64::INFINITY, f64::min);
        hardest.max(per_row * uncovered.len() as f64)
    }

    fn search(&mut self, uncovered: &[u64], chosen: u64, cost: f64) {
        if uncovered.is_empty() {
            if cost < self.best_cost {
                self.best_cost = cost;
                self.best_sets = chosen;
            }
            return;
        }
        if cost + self.lower_bound(uncovered) >= self.best_cost - 1e-12 {
            return;
        }
        let pivot = *uncovered
            .iter()
            .min_by_key(|r| r.count_ones())
            .expect("non-empty");
        let mut options: Vec<usize> = bits(pivot).collect();
        options.sort_by(|&a, &b| self.costs[a].total_cmp(&self.costs[b]).then(a.cmp(&b)));
        for j in options {
            let rest: Vec<u64> = uncovered
                .iter()
                .copied()
                .filter(|r| r >> j & 1 == 0)
                .collect();
            self.search(&rest, chosen | 1 << j, cost + self.costs[j]);
        }
    }
}

fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let j = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(j)
        }
    })
}
