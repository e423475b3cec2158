//! Benchmark problems, load programs, the sweep harness and the
//! checkerboard diagnostic.

pub mod experiment;
pub mod load;
pub mod problems;
pub mod stability;

pub use experiment::{run_experiment, ExperimentConfig, ExperimentRow, RunSpec};
pub use load::{load_value, LoadKind, LoadProgram};
pub use problems::{
    make_free_swelling, make_linear_elasticity, make_problem, make_punch, BenchmarkProblem,
    FreeSwellingBc, ProblemKind,
};
pub use stability::checkerboard_indicator;
