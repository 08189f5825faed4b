use std::ops::RangeInclusive;

use log::{debug, warn};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::{generate, Adversary, AdversaryConfig};
use crate::harmonic::{lower_bound, pow2};
use crate::instance::{Batch, Instance};
use crate::solvers::{offline_opt, Algorithm, DPolicy, PrimalDualSolver, RunResult, SolverConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentGrid {
    pub z_values: Vec<u32>,
    pub m_range: RangeInclusive<usize>,
    pub epsilon: f64,
    pub algorithms: Vec<Algorithm>,
    pub adaptive: bool,
    pub d_policy: DPolicy,
}

impl Default for ExperimentGrid {
    fn default() -> Self {
        ExperimentGrid {
            z_values: vec![0, 1, 2, 3, 4],
            m_range: 1..=30,
            epsilon: 0.001,
            algorithms: Algorithm::ALL.to_vec(),
            adaptive: true,
            d_policy: DPolicy::NumSets,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridRow {
    pub z: u32,
    pub m: usize,
    pub algorithm: Algorithm,
    pub epsilon: f64,
    pub alg_cost: f64,
    pub opt_cost: f64,
    pub ratio: f64,
    pub lower_bound: f64,
    pub dual_value: f64,
    pub d: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedCell {
    pub z: u32,
    pub m: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailedCell {
    pub z: u32,
    pub m: usize,
    pub algorithm: Algorithm,
    pub error: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct GridResult {
    /// Sorted by `(z, algorithm, m)` with trivial before dedicated.
    pub rows: Vec<GridRow>,
    pub skipped: Vec<SkippedCell>,
    pub failed: Vec<FailedCell>,
}

impl GridResult {
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows_for(&self, z: u32, algorithm: Algorithm) -> impl Iterator<Item = &GridRow> {
        self.rows
            .iter()
            .filter(move |r| r.z == z && r.algorithm == algorithm)
    }

    pub fn row(&self, z: u32, m: usize, algorithm: Algorithm) -> Option<&GridRow> {
        self.rows
            .iter()
            .find(|r| r.z == z && r.m == m && r.algorithm == algorithm)
    }

    pub fn sort(&mut self) {
        self.rows.sort_by_key(|r| (r.z, r.algorithm, r.m));
        self.skipped.sort_by_key(|s| (s.z, s.m));
        self.failed.sort_by_key(|f| (f.z, f.algorithm, f.m));
    }
}

/// Plays `config`'s adversary against one algorithm. Returns the run and the
/// instance as the algorithm saw it.
pub fn run_against_adversary(
    config: AdversaryConfig,
    solver: &SolverConfig,
) -> Result<(RunResult, Instance)> {
    let canonical = generate(&config)?;
    let d = solver.d_policy.resolve(&canonical)?;
    let mut adversary = Adversary::new(config)?;
    let system = adversary.system();
    let mut alg =
        PrimalDualSolver::new(&system, solver.algorithm, solver.epsilon, d, solver.order)?;
    let mut revealed: Vec<Batch> = Vec::with_capacity(adversary.num_batches());
    while let Some(batch) = adversary.next_batch() {
        alg.process_batch(&batch)?;
        adversary.observe(alg.state());
        revealed.push(batch);
    }
    let inst = Instance {
        system,
        batches: revealed,
        meta: Some(adversary.meta()),
    };
    let opt = offline_opt(&inst)?;
    Ok((alg.finish(opt.cost), inst))
}

/// One grid cell: `I*_z(m)` against `algorithm`.
pub fn run_cell(
    z: u32,
    m: usize,
    algorithm: Algorithm,
    epsilon: f64,
    d_policy: DPolicy,
    adaptive: bool,
) -> Result<GridRow> {
    let config = AdversaryConfig::batched(m, z).adaptive(adaptive);
    let solver = SolverConfig {
        d_policy,
        ..SolverConfig::new(algorithm, epsilon)
    };
    let (run, _) = run_against_adversary(config, &solver)?;
    Ok(GridRow {
        z,
        m,
        algorithm,
        epsilon,
        alg_cost: run.primal_cost,
        opt_cost: run.opt_cost,
        ratio: run.ratio,
        lower_bound: lower_bound(m, z)?,
        dual_value: run.dual_value,
        d: run.d,
    })
}

/// Runs every valid `(z, m, algorithm)` cell in parallel. Cells with
/// `m < 2^z` are skipped; failing cells are recorded without aborting.
pub fn run_grid(grid: &ExperimentGrid) -> GridResult {
    let mut result = GridResult::default();
    let mut cells = Vec::new();
    for &z in &grid.z_values {
        for m in grid.m_range.clone() {
            match pow2(z) {
                Some(w) if m >= w && m > 0 => {
                    cells.extend(grid.algorithms.iter().map(|&a| (z, m, a)));
                }
                _ => result.skipped.push(SkippedCell {
                    z,
                    m,
                    reason: Error::AdversaryImpossible { m, z }.to_string(),
                }),
            }
        }
    }
    let outcomes: Vec<_> = cells
        .par_iter()
        .map(|&(z, m, a)| {
            let row = run_cell(z, m, a, grid.epsilon, grid.d_policy, grid.adaptive);
            ((z, m, a), row)
        })
        .collect();
    for ((z, m, algorithm), outcome) in outcomes {
        match outcome {
            Ok(row) => {
                debug!("z={z} m={m} {algorithm}: ratio {:.6}", row.ratio);
                result.rows.push(row);
            }
            Err(err) => {
                warn!("cell z={z} m={m} {algorithm} failed: {err}");
                result.failed.push(FailedCell {
                    z,
                    m,
                    algorithm,
                    error: err.to_string(),
                });
            }
        }
    }
    result.sort();
    result
}
