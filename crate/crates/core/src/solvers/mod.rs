//! Fractional primal-dual algorithms for batched set cover and an exact
//! offline oracle.

mod offline;
mod primal_dual;

pub use offline::{
    greedy_cover, offline_opt, offline_opt_with, OfflineSolution, OptMode, MAX_EXACT_SETS,
};
pub use primal_dual::{
    run, run_dedicated, run_trivial, x_value, Algorithm, DPolicy, ElementOrder, FractionalState,
    PrimalDualSolver, RunResult, SolverConfig, TracePoint,
};
