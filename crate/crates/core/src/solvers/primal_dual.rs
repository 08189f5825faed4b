use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::offline::offline_opt;
use crate::error::{Error, Result};
use crate::instance::{covering_sets_of, Batch, Element, ElementId, Instance, SetSystem};

/// Closed-form primal value of a set with cost `cost` after `dual_mass` units
/// of dual have been routed through it:
/// `x = (exp(ln(1 + d) / cost * dual_mass) - 1) / d`.
///
/// `x` reaches exactly 1 when `dual_mass == cost`.
pub fn x_value(cost: f64, d: usize, dual_mass: f64) -> f64 {
    let d = d as f64;
    ((1.0 + d).ln() / cost * dual_mass).exp_m1() / d
}

/// Trivial runs the batch one element at a time; dedicated raises the duals
/// of all unsatisfied batch elements together.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Trivial,
    Dedicated,
}

impl Algorithm {
    pub const ALL: [Algorithm; 2] = [Algorithm::Trivial, Algorithm::Dedicated];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Trivial => "trivial",
            Algorithm::Dedicated => "dedicated",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trivial" => Ok(Algorithm::Trivial),
            "dedicated" => Ok(Algorithm::Dedicated),
            _ => Err(Error::InvalidArguments(format!(
                "unknown algorithm {s:?}, expected trivial or dedicated"
            ))),
        }
    }
}

/// How the sparsity parameter `d` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DPolicy {
    /// `d = m`, the only choice available to a truly online algorithm.
    #[default]
    NumSets,
    /// `d = max |S(σ)|` over the whole (known) instance.
    MaxRowSparsity,
    Fixed(usize),
}

impl DPolicy {
    pub fn resolve(self, inst: &Instance) -> Result<usize> {
        let d = match self {
            DPolicy::NumSets => inst.num_sets(),
            DPolicy::MaxRowSparsity => inst.max_row_sparsity(),
            DPolicy::Fixed(d) => d,
        };
        if d == 0 {
            return Err(Error::InvalidArguments("d must be at least 1".into()));
        }
        Ok(d)
    }
}

impl FromStr for DPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "m" => Ok(DPolicy::NumSets),
            "auto" => Ok(DPolicy::MaxRowSparsity),
            _ => match s.parse::<usize>() {
                Ok(d) if d >= 1 => Ok(DPolicy::Fixed(d)),
                _ => Err(Error::InvalidArguments(format!(
                    "invalid d {s:?}, expected auto, m or a positive integer"
                ))),
            },
        }
    }
}

/// The sequencing `f` used by the trivial algorithm inside a batch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ElementOrder {
    #[default]
    Position,
    Shuffled {
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    pub epsilon: f64,
    pub d_policy: DPolicy,
    pub order: ElementOrder,
}

impl SolverConfig {
    pub fn new(algorithm: Algorithm, epsilon: f64) -> Self {
        SolverConfig {
            algorithm,
            epsilon,
            d_policy: DPolicy::NumSets,
            order: ElementOrder::Position,
        }
    }
}

/// Primal `x`, dual `y` and the parameters of one run.
///
/// Duals are kept as integer counts of `epsilon` steps, both per element and
/// aggregated per set, so `Σ_{σ ∈ S_j} y_σ` is exact and `x_j` is always the
/// closed form of that sum.
#[derive(Debug, Clone)]
pub struct FractionalState {
    costs: Vec<f64>,
    d: usize,
    epsilon: f64,
    x: Vec<f64>,
    set_steps: Vec<u64>,
    y_steps: BTreeMap<ElementId, u64>,
    revealed: Vec<Element>,
    total_steps: u64,
}

impl FractionalState {
    pub fn new(system: &SetSystem, d: usize, epsilon: f64) -> Self {
        let m = system.num_sets();
        FractionalState {
            costs: system.costs.clone(),
            d,
            epsilon,
            x: vec![0.0; m],
            set_steps: vec![0; m],
            y_steps: BTreeMap::new(),
            revealed: Vec::new(),
            total_steps: 0,
        }
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn revealed(&self) -> &[Element] {
        &self.revealed
    }

    pub fn y(&self, id: ElementId) -> f64 {
        self.y_steps(id) as f64 * self.epsilon
    }

    /// `y_σ / ε`.
    pub fn y_steps(&self, id: ElementId) -> u64 {
        self.y_steps.get(&id).copied().unwrap_or(0)
    }

    /// `Σ_{σ ∈ S_j} y_σ`.
    pub fn dual_mass(&self, set: usize) -> f64 {
        self.set_steps[set] as f64 * self.epsilon
    }

    /// `Σ y`, the packing objective.
    pub fn dual_value(&self) -> f64 {
        self.total_steps as f64 * self.epsilon
    }

    /// `Σ c_j x_j`, the covering objective.
    pub fn primal_cost(&self) -> f64 {
        self.costs.iter().zip(&self.x).map(|(c, x)| c * x).sum()
    }

    /// `Σ_{j ∈ S(σ)} x_j`.
    pub fn coverage(&self, element: &Element) -> f64 {
        element.member_of.iter().map(|&j| self.x[j]).sum()
    }

    fn reveal(&mut self, element: &Element) {
        self.y_steps.entry(element.id()).or_insert(0);
        self.revealed.push(element.clone());
    }

    fn raise(&mut self, element: &Element) {
        *self.y_steps.entry(element.id()).or_insert(0) += 1;
        self.total_steps += 1;
        for &j in &element.member_of {
            self.set_steps[j] += 1;
        }
    }

    fn refresh(&mut self, set: usize) {
        self.x[set] = x_value(self.costs[set], self.d, self.dual_mass(set));
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub batch: usize,
    pub primal_cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub algorithm: Algorithm,
    pub epsilon: f64,
    pub d: usize,
    pub primal_cost: f64,
    pub dual_value: f64,
    pub opt_cost: f64,
    pub ratio: f64,
    pub per_batch_trace: Vec<TracePoint>,
}

/// Drives one algorithm batch by batch. Batches can be fed one at a time, so
/// an adaptive adversary may inspect [`PrimalDualSolver::state`] in between.
#[derive(Debug, Clone)]
pub struct PrimalDualSolver {
    algorithm: Algorithm,
    order: ElementOrder,
    rng: Option<ChaCha8Rng>,
    state: FractionalState,
    trace: Vec<TracePoint>,
}

impl PrimalDualSolver {
    pub fn new(
        system: &SetSystem,
        algorithm: Algorithm,
        epsilon: f64,
        d: usize,
        order: ElementOrder,
    ) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidArguments(format!(
                "epsilon must be positive and finite, got {epsilon}"
            )));
        }
        if d == 0 {
            return Err(Error::InvalidArguments("d must be at least 1".into()));
        }
        let rng = match order {
            ElementOrder::Shuffled { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
            ElementOrder::Position => None,
        };
        Ok(PrimalDualSolver {
            algorithm,
            order,
            rng,
            state: FractionalState::new(system, d, epsilon),
            trace: Vec::new(),
        })
    }

    pub fn algorithm(&self) -> Algorithm {
        self.algorithm
    }

    pub fn order(&self) -> ElementOrder {
        self.order
    }

    pub fn state(&self) -> &FractionalState {
        &self.state
    }

    pub fn trace(&self) -> &[TracePoint] {
        &self.trace
    }

    /// Reveals `batch` and raises duals until every element in it is covered.
    pub fn process_batch(&mut self, batch: &Batch) -> Result<()> {
        let m = self.state.x.len();
        for e in &batch.elements {
            if e.member_of.is_empty() {
                return Err(Error::Infeasible(e.id().to_string()));
            }
            if let Some(&j) = e.member_of.iter().find(|&&j| j >= m) {
                return Err(Error::InvalidInstance(vec![format!(
                    "element {} references set {} > m={m}",
                    e.id(),
                    j + 1
                )]));
            }
        }
        for e in &batch.elements {
            self.state.reveal(e);
        }
        match self.algorithm {
            Algorithm::Trivial => self.sequential(batch),
            Algorithm::Dedicated => self.simultaneous(batch),
        }
        let k = batch
            .elements
            .first()
            .map_or(self.trace.len() + 1, |e| e.batch_index);
        self.trace.push(TracePoint {
            batch: k,
            primal_cost: self.state.primal_cost(),
        });
        Ok(())
    }

    fn sequential(&mut self, batch: &Batch) {
        let mut order: Vec<usize> = (0..batch.len()).collect();
        if let Some(rng) = self.rng.as_mut() {
            order.shuffle(rng);
        }
        for idx in order {
            let e = &batch.elements[idx];
            while self.state.coverage(e) < 1.0 {
                self.state.raise(e);
                for &j in &e.member_of {
                    self.state.refresh(j);
                }
            }
        }
    }

    fn simultaneous(&mut self, batch: &Batch) {
        let touched: Vec<usize> = covering_sets_of(batch).into_iter().collect();
        let mut unsatisfied = Vec::with_capacity(batch.len());
        loop {
            unsatisfied.clear();
            unsatisfied.extend(
                batch
                    .elements
                    .iter()
                    .filter(|e| self.state.coverage(e) < 1.0),
            );
            if unsatisfied.is_empty() {
                break;
            }
            for e in &unsatisfied {
                self.state.raise(e);
            }
            for &j in &touched {
                self.state.refresh(j);
            }
        }
    }

    pub fn finish(self, opt_cost: f64) -> RunResult {
        let primal_cost = self.state.primal_cost();
        let ratio = if opt_cost > 0.0 {
            primal_cost / opt_cost
        } else if primal_cost == 0.0 {
            // nothing revealed
            1.0
        } else {
            f64::INFINITY
        };
        RunResult {
            algorithm: self.algorithm,
            epsilon: self.state.epsilon,
            d: self.state.d,
            primal_cost,
            dual_value: self.state.dual_value(),
            opt_cost,
            ratio,
            per_batch_trace: self.trace,
        }
    }
}

/// Runs `config.algorithm` over every batch of `inst` and measures the
/// result against the exact offline optimum.
pub fn run(inst: &Instance, config: &SolverConfig) -> Result<RunResult> {
    if let Some(e) = inst.elements().find(|e| e.member_of.is_empty()) {
        return Err(Error::Infeasible(e.id().to_string()));
    }
    inst.ensure_valid()?;
    let d = config.d_policy.resolve(inst)?;
    let mut solver = PrimalDualSolver::new(
        &inst.system,
        config.algorithm,
        config.epsilon,
        d,
        config.order,
    )?;
    for batch in &inst.batches {
        solver.process_batch(batch)?;
    }
    let opt = offline_opt(inst)?;
    Ok(solver.finish(opt.cost))
}

pub fn run_trivial(
    inst: &Instance,
    epsilon: f64,
    d_policy: DPolicy,
    order: ElementOrder,
) -> Result<RunResult> {
    run(
        inst,
        &SolverConfig {
            algorithm: Algorithm::Trivial,
            epsilon,
            d_policy,
            order,
        },
    )
}

pub fn run_dedicated(inst: &Instance, epsilon: f64, d_policy: DPolicy) -> Result<RunResult> {
    run(
        inst,
        &SolverConfig {
            algorithm: Algorithm::Dedicated,
            epsilon,
            d_policy,
            order: ElementOrder::Position,
        },
    )
}
