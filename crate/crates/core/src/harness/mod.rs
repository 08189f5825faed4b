//! Experiment grid over the `I*_z(m)` families, brute-force adversary search
//! and CSV/SVG output.

mod emit;
mod grid;
mod search;

pub use emit::{emit_csv, emit_svg, render_svg, write_csv, PanelScale, STROKE_WIDTH};
pub use grid::{
    run_against_adversary, run_cell, run_grid, ExperimentGrid, FailedCell, GridResult, GridRow,
    SkippedCell,
};
pub use search::{
    adversary_search, evaluate_sequence, is_nested_chain, SearchOutcome, MAX_SEARCH_SETS,
};
