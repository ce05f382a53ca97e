//! Heat diffusion on a 1D periodic ring, solved by an explicit
//! finite-difference stencil and parallelized three ways: a sequential
//! reference, a bulk-synchronous fork-join runner, and persistent workers
//! exchanging boundary ghost cells asynchronously over bounded SPSC queues.
//! All three produce bitwise-identical fields.
//!
//! The crate also carries the measurement side of the project: a wall-clock
//! throughput harness with a stable CSV format, scaling-law fits with
//! goodness of fit, source line counting, COCOMO effort estimates, and the
//! effort/speed classification plane.

pub mod analysis;
pub mod bench;
pub mod config;
pub mod exchange;
pub mod field;
pub mod partition;
pub mod solve;
pub mod stencil;

pub use config::{ConfigError, DenominatorMode, SolverConfig, Strategy, STABILITY_LIMIT};
pub use field::{init_field, total_heat, Field};
pub use partition::{make_partition, Partition, PartitionError, Segment};
pub use solve::{run_strategy, solve, solve_with_stats, SolveError};
pub use stencil::{stencil_update, sweep_sequential};
