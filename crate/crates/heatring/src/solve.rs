//! Strategy dispatch: the sequential reference, the bulk-synchronous runner,
//! and the queue-based asynchronous ring.

use std::thread;

use thiserror::Error;

use crate::config::{SolverConfig, Strategy};
use crate::exchange::{self, ExchangeStats, ProtocolError, DEFAULT_CAPACITY};
use crate::field::{init_field, Field};
use crate::partition::{make_partition, PartitionError};
use crate::stencil::{compute_range, sweep_sequential};
use crate::ConfigError;

#[derive(Debug, Error, PartialEq)]
pub enum SolveError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}

/// Checks the configuration, builds the initial field, and advances it
/// `config.steps` steps under the configured strategy.
pub fn solve(config: &SolverConfig) -> Result<Field, SolveError> {
    solve_with_stats(config).map(|(field, _)| field)
}

/// Like [`solve`], also returning the per-channel message counts when the
/// queues strategy ran (the other strategies move no messages).
pub fn solve_with_stats(
    config: &SolverConfig,
) -> Result<(Field, Option<ExchangeStats>), SolveError> {
    config.check()?;
    let mut field = init_field(config);
    let stats = run_strategy(&mut field, config)?;
    Ok((field, stats))
}

/// Advances an existing field in place. The caller is responsible for having
/// checked `config` and for `field.len() == config.nodes`.
pub fn run_strategy(
    field: &mut Field,
    config: &SolverConfig,
) -> Result<Option<ExchangeStats>, SolveError> {
    assert_eq!(field.len(), config.nodes, "field and config disagree on size");
    match config.strategy {
        Strategy::Sequential => {
            for _ in 0..config.steps {
                sweep_sequential(field, config);
            }
            Ok(None)
        }
        Strategy::Barrier => {
            run_barrier(field, config)?;
            Ok(None)
        }
        Strategy::Queues => {
            let partition = make_partition(config.nodes, config.threads)?;
            let stats = exchange::run_ring(field, &partition, config, DEFAULT_CAPACITY, None)?;
            Ok(Some(stats))
        }
    }
}

/// Fork-join reference parallelization: each step spawns scoped workers that
/// write disjoint chunks of `next` while all of `current` stays readable, then
/// the scope itself is the barrier. More threads than cells just means fewer
/// workers.
fn run_barrier(field: &mut Field, config: &SolverConfig) -> Result<(), PartitionError> {
    let workers = config.threads.min(field.len());
    let partition = make_partition(field.len(), workers)?;
    for _ in 0..config.steps {
        let current = &field.current;
        let mut rest = field.next.as_mut_slice();
        thread::scope(|scope| {
            for segment in partition.segments() {
                let (chunk, tail) = rest.split_at_mut(segment.len);
                rest = tail;
                scope.spawn(move || compute_range(current, segment.start, chunk, config));
            }
        });
        field.swap_buffers();
    }
    Ok(())
}
