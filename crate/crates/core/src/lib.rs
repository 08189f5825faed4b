//! Fractional batched set cover.
//!
//! Elements arrive in batches; a fractional algorithm must keep every revealed
//! covering constraint satisfied while only ever increasing its primal
//! values. This crate provides:
//!
//! - [`instance`]: set systems, batches and the JSON instance format;
//! - [`harmonic`]: harmonic numbers and the bound `H_{m - 2^z + 1}`;
//! - [`vc`]: exact shattering and VC-dimension of batches;
//! - [`generators`]: the adversarial families `I*(m)` and `I*_z(m)`;
//! - [`solvers`]: the trivial and dedicated primal-dual algorithms and an
//!   exact offline optimum;
//! - [`harness`]: experiment grids, exhaustive adversary search, CSV/SVG;
//! - [`cli`]: the `batchcover` command-line tool.

pub mod cli;
pub mod error;
pub mod generators;
pub mod harmonic;
pub mod harness;
pub mod instance;
pub mod solvers;
pub mod vc;

pub use error::{Error, Result};
pub use generators::{gen_batched_worst, gen_online_worst, AdversaryConfig};
pub use harmonic::{harmonic, lemma3_holds, lower_bound};
pub use instance::{covering_sets_of, validate_instance, Batch, Element, Instance, SetSystem};
pub use solvers::{offline_opt, run_dedicated, run_trivial, x_value, Algorithm, RunResult};
pub use vc::{check_adversary_restriction, is_shattered, vc_dimension};
