//! The asynchronous ghost-cell exchange protocol.
//!
//! Segments form a ring: each one owns a contiguous block of cells and is
//! linked to both neighbors by a pair of bounded SPSC channels per direction.
//! Every step a segment first sends its two boundary values, then computes
//! the cells that need no remote data, and only then receives the ghosts it
//! needs for its own boundary cells. Because every send precedes every
//! receive within a step, at most two messages are ever in flight per channel
//! (the unconsumed one from the current step plus one from a neighbor running
//! a step ahead), so any capacity of at least two is deadlock-free. There is
//! no global barrier; neighbors may drift one step apart, and the bounded
//! queues are what stop the drift from growing unbounded.

pub mod channel;

use std::thread;

use thiserror::Error;

use crate::config::SolverConfig;
use crate::field::Field;
use crate::partition::Partition;
use crate::stencil::stencil_update;
pub use channel::{channel, CapacityError, ChannelProbe, Receiver, RecvError, SendError, Sender, MIN_CAPACITY};

/// Queue capacity used by the solver. Twice the proven minimum, leaving
/// headroom so a briefly stalled segment does not immediately backpressure
/// its neighbors.
pub const DEFAULT_CAPACITY: usize = 4;

/// One boundary cell value in flight between neighbors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GhostMessage {
    pub value: f64,
    /// The sender's step index, attached only in validate mode. The receiver
    /// consumes exactly one message per channel per step, so the tag must
    /// always equal the receiver's own step index.
    pub step_tag: Option<u64>,
}

/// The four channel endpoints owned by one segment.
pub struct SegmentLinks {
    pub send_left: Sender<GhostMessage>,
    pub send_right: Sender<GhostMessage>,
    pub recv_left: Receiver<GhostMessage>,
    pub recv_right: Receiver<GhostMessage>,
}

/// Read-only counters for every channel in the ring, indexed by the sending
/// segment.
pub struct RingProbes {
    /// Probe `i` watches the channel from segment `i` to segment `i+1`.
    pub rightward: Vec<ChannelProbe<GhostMessage>>,
    /// Probe `i` watches the channel from segment `i` to segment `i-1`.
    pub leftward: Vec<ChannelProbe<GhostMessage>>,
}

/// Message totals per channel after a run, same indexing as [`RingProbes`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExchangeStats {
    pub rightward: Vec<u64>,
    pub leftward: Vec<u64>,
}

impl ExchangeStats {
    fn from_probes(probes: &RingProbes) -> ExchangeStats {
        ExchangeStats {
            rightward: probes.rightward.iter().map(|p| p.messages_sent()).collect(),
            leftward: probes.leftward.iter().map(|p| p.messages_sent()).collect(),
        }
    }

    pub fn total_messages(&self) -> u64 {
        self.rightward.iter().sum::<u64>() + self.leftward.iter().sum::<u64>()
    }

    /// All per-channel counts: the rightward ring first, then the leftward.
    pub fn per_channel(&self) -> Vec<u64> {
        let mut counts = self.rightward.clone();
        counts.extend_from_slice(&self.leftward);
        counts
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ProtocolError {
    #[error(transparent)]
    Capacity(#[from] CapacityError),
    #[error("segment {segment}: ghost for step {expected} arrived tagged {got}")]
    StepTagMismatch {
        segment: usize,
        expected: u64,
        got: u64,
    },
    #[error("segment {segment}: untagged ghost while validation is on (expected step {expected})")]
    MissingStepTag { segment: usize, expected: u64 },
    #[error("segment {segment}: a neighbor endpoint disconnected mid-run")]
    Disconnected { segment: usize },
}

/// Test instrumentation: called at the top of every step with
/// `(segment_index, step)`. Lets a caller skew segment timing to stress the
/// protocol; must not touch the field.
pub type StepHook<'a> = &'a (dyn Fn(usize, u64) + Sync);

/// Builds the `2 * threads` channels wiring `threads` segments into a ring
/// and deals the endpoints out segment by segment. A single segment is wired
/// to itself, which keeps the periodic boundary correct down to one worker.
pub fn ring_links(
    threads: usize,
    capacity: usize,
) -> Result<(Vec<SegmentLinks>, RingProbes), CapacityError> {
    assert!(threads >= 1, "a ring needs at least one segment");
    let mut right_tx = Vec::with_capacity(threads);
    let mut right_rx = Vec::with_capacity(threads);
    let mut left_tx = Vec::with_capacity(threads);
    let mut left_rx = Vec::with_capacity(threads);
    for _ in 0..threads {
        let (tx, rx) = channel(capacity)?;
        right_tx.push(tx);
        right_rx.push(rx);
        let (tx, rx) = channel(capacity)?;
        left_tx.push(tx);
        left_rx.push(rx);
    }
    let probes = RingProbes {
        rightward: right_tx.iter().map(Sender::probe).collect(),
        leftward: left_tx.iter().map(Sender::probe).collect(),
    };
    // Segment i consumes the rightward channel of segment i-1 and the
    // leftward channel of segment i+1 (indices mod `threads`).
    right_rx.rotate_right(1);
    left_rx.rotate_left(1);
    let links = right_tx
        .into_iter()
        .zip(left_tx)
        .zip(right_rx.into_iter().zip(left_rx))
        .map(|((send_right, send_left), (recv_left, recv_right))| SegmentLinks {
            send_left,
            send_right,
            recv_left,
            recv_right,
        })
        .collect();
    Ok((links, probes))
}

fn recv_checked(
    rx: &Receiver<GhostMessage>,
    expected: u64,
    validate: bool,
    segment: usize,
) -> Result<f64, ProtocolError> {
    let message = rx
        .recv()
        .map_err(|RecvError| ProtocolError::Disconnected { segment })?;
    if validate {
        match message.step_tag {
            Some(tag) if tag == expected => {}
            Some(tag) => {
                return Err(ProtocolError::StepTagMismatch {
                    segment,
                    expected,
                    got: tag,
                })
            }
            None => return Err(ProtocolError::MissingStepTag { segment, expected }),
        }
    }
    Ok(message.value)
}

/// Runs one segment's share of the whole solve: `config.steps` steps over the
/// owned cells in `values`, exchanging boundary ghosts through `links`.
/// Returns the owned cells after the final step.
///
/// The per-step order is what makes the ring deadlock-free and is not
/// negotiable: both sends, then the interior, then receive right and finish
/// the right boundary cell, then receive left and finish the left one.
pub fn run_segment(
    index: usize,
    mut values: Vec<f64>,
    links: SegmentLinks,
    config: &SolverConfig,
    hook: Option<StepHook<'_>>,
) -> Result<Vec<f64>, ProtocolError> {
    let len = values.len();
    assert!(len >= 1, "segments own at least one cell");
    let mut scratch = vec![0.0; len];
    let SegmentLinks {
        send_left,
        send_right,
        recv_left,
        recv_right,
    } = links;
    let disconnected = |_| ProtocolError::Disconnected { segment: index };

    for step in 0..config.steps {
        if let Some(hook) = hook {
            hook(index, step);
        }
        let step_tag = config.validate.then_some(step);
        send_left
            .send(GhostMessage {
                value: values[0],
                step_tag,
            })
            .map_err(disconnected)?;
        send_right
            .send(GhostMessage {
                value: values[len - 1],
                step_tag,
            })
            .map_err(disconnected)?;
        if len == 1 {
            // The lone cell needs both ghosts before it can be updated.
            let right = recv_checked(&recv_right, step, config.validate, index)?;
            let left = recv_checked(&recv_left, step, config.validate, index)?;
            scratch[0] = stencil_update(left, values[0], right, config);
        } else {
            for i in 1..len - 1 {
                scratch[i] = stencil_update(values[i - 1], values[i], values[i + 1], config);
            }
            let right = recv_checked(&recv_right, step, config.validate, index)?;
            scratch[len - 1] = stencil_update(values[len - 2], values[len - 1], right, config);
            let left = recv_checked(&recv_left, step, config.validate, index)?;
            scratch[0] = stencil_update(left, values[0], values[1], config);
        }
        std::mem::swap(&mut values, &mut scratch);
    }
    Ok(values)
}

/// Drives a full queue-strategy solve: spawns one OS thread per segment of
/// `partition`, runs the exchange protocol to completion, and writes the
/// final cells back into `field.current`.
pub fn run_ring(
    field: &mut Field,
    partition: &Partition,
    config: &SolverConfig,
    capacity: usize,
    hook: Option<StepHook<'_>>,
) -> Result<ExchangeStats, ProtocolError> {
    assert_eq!(
        partition.nodes(),
        field.len(),
        "partition must cover the field exactly"
    );
    let (links, probes) = ring_links(partition.segment_count(), capacity)?;
    let seeds: Vec<Vec<f64>> = partition
        .segments()
        .iter()
        .map(|s| field.current[s.start..s.end()].to_vec())
        .collect();

    let results: Vec<Result<Vec<f64>, ProtocolError>> = thread::scope(|scope| {
        let workers: Vec<_> = links
            .into_iter()
            .zip(seeds)
            .enumerate()
            .map(|(index, (links, values))| {
                scope.spawn(move || run_segment(index, values, links, config, hook))
            })
            .collect();
        workers
            .into_iter()
            .map(|w| w.join().expect("segment worker panicked"))
            .collect()
    });

    let mut outputs = Vec::with_capacity(results.len());
    let mut disconnect = None;
    for result in results {
        match result {
            Ok(values) => outputs.push(values),
            // A tag violation is a root cause; the disconnects other workers
            // see afterwards are just the shutdown cascading around the ring.
            Err(e @ (ProtocolError::StepTagMismatch { .. } | ProtocolError::MissingStepTag { .. })) => {
                return Err(e)
            }
            Err(e) => disconnect = Some(e),
        }
    }
    if let Some(e) = disconnect {
        return Err(e);
    }
    for (segment, values) in partition.segments().iter().zip(outputs) {
        field.current[segment.start..segment.end()].copy_from_slice(&values);
    }
    field.step += config.steps;
    Ok(ExchangeStats::from_probes(&probes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::init_field;
    use crate::partition::make_partition;
    use crate::stencil::sweep_sequential;

    fn config(nodes: usize, steps: u64) -> SolverConfig {
        SolverConfig {
            nodes,
            steps,
            ..SolverConfig::default()
        }
    }

    fn sequential_reference(config: &SolverConfig) -> Vec<f64> {
        let mut field = init_field(config);
        for _ in 0..config.steps {
            sweep_sequential(&mut field, config);
        }
        field.current
    }

    fn queue_run(config: &SolverConfig, threads: usize, capacity: usize) -> (Vec<f64>, ExchangeStats) {
        let mut field = init_field(config);
        let partition = make_partition(config.nodes, threads).unwrap();
        let stats = run_ring(&mut field, &partition, config, capacity, None).unwrap();
        (field.current, stats)
    }

    #[test]
    fn two_segment_wiring() {
        let (mut links, _) = ring_links(2, 4).unwrap();
        let b = links.pop().unwrap();
        let a = links.pop().unwrap();
        let msg = |value| GhostMessage {
            value,
            step_tag: None,
        };
        a.send_right.send(msg(1.0)).unwrap();
        assert_eq!(b.recv_left.recv().unwrap().value, 1.0);
        a.send_left.send(msg(2.0)).unwrap();
        assert_eq!(b.recv_right.recv().unwrap().value, 2.0);
        b.send_right.send(msg(3.0)).unwrap();
        assert_eq!(a.recv_left.recv().unwrap().value, 3.0);
        b.send_left.send(msg(4.0)).unwrap();
        assert_eq!(a.recv_right.recv().unwrap().value, 4.0);
    }

    #[test]
    fn single_segment_is_self_wired() {
        let (mut links, _) = ring_links(1, 4).unwrap();
        let only = links.pop().unwrap();
        only.send_right
            .send(GhostMessage {
                value: 9.0,
                step_tag: None,
            })
            .unwrap();
        // With one segment the right neighbor is the segment itself.
        assert_eq!(only.recv_left.recv().unwrap().value, 9.0);
    }

    #[test]
    fn matches_sequential_across_segment_counts() {
        let config = config(10, 5);
        let expected = sequential_reference(&config);
        for threads in [1, 2, 3, 4, 10] {
            let (got, _) = queue_run(&config, threads, DEFAULT_CAPACITY);
            assert_eq!(got, expected, "threads={threads}");
        }
    }

    #[test]
    fn single_cell_segments_follow_the_protocol() {
        // 5 cells over 4 segments: sizes [2, 1, 1, 1].
        let config = config(5, 7);
        let expected = sequential_reference(&config);
        let (got, _) = queue_run(&config, 4, DEFAULT_CAPACITY);
        assert_eq!(got, expected);
    }

    #[test]
    fn minimum_capacity_is_live() {
        let config = config(12, 50);
        let expected = sequential_reference(&config);
        let (got, _) = queue_run(&config, 3, MIN_CAPACITY);
        assert_eq!(got, expected);
    }

    #[test]
    fn one_message_per_channel_per_step() {
        let config = config(8, 10);
        let (_, stats) = queue_run(&config, 4, DEFAULT_CAPACITY);
        assert_eq!(stats.rightward, vec![10; 4]);
        assert_eq!(stats.leftward, vec![10; 4]);
        assert_eq!(stats.total_messages(), 8 * 10);
        assert_eq!(stats.per_channel(), vec![10; 8]);
    }

    #[test]
    fn validate_mode_changes_nothing_numerically() {
        let plain = config(10, 20);
        let validating = SolverConfig {
            validate: true,
            ..plain.clone()
        };
        let (a, _) = queue_run(&plain, 3, DEFAULT_CAPACITY);
        let (b, _) = queue_run(&validating, 3, DEFAULT_CAPACITY);
        assert_eq!(a, b);
    }

    #[test]
    fn stale_tag_is_reported() {
        // Hand-built harness around one segment: we play the neighbors and
        // feed its right-ghost inbox a message from the wrong step.
        let (to_segment_right, segment_recv_right) = channel(4).unwrap();
        let (_to_segment_left, segment_recv_left) = channel::<GhostMessage>(4).unwrap();
        let (segment_send_left, _our_left_inbox) = channel(4).unwrap();
        let (segment_send_right, _our_right_inbox) = channel(4).unwrap();
        to_segment_right
            .send(GhostMessage {
                value: 0.0,
                step_tag: Some(7),
            })
            .unwrap();
        let links = SegmentLinks {
            send_left: segment_send_left,
            send_right: segment_send_right,
            recv_left: segment_recv_left,
            recv_right: segment_recv_right,
        };
        let config = SolverConfig {
            validate: true,
            ..config(1, 1)
        };
        let err = run_segment(3, vec![0.5], links, &config, None).unwrap_err();
        assert_eq!(
            err,
            ProtocolError::StepTagMismatch {
                segment: 3,
                expected: 0,
                got: 7
            }
        );
    }

    #[test]
    fn untagged_ghost_is_reported_in_validate_mode() {
        let (to_segment_right, segment_recv_right) = channel(4).unwrap();
        let (_to_segment_left, segment_recv_left) = channel::<GhostMessage>(4).unwrap();
        let (segment_send_left, _our_left_inbox) = channel(4).unwrap();
        let (segment_send_right, _our_right_inbox) = channel(4).unwrap();
        to_segment_right
            .send(GhostMessage {
                value: 0.0,
                step_tag: None,
            })
            .unwrap();
        let links = SegmentLinks {
            send_left: segment_send_left,
            send_right: segment_send_right,
            recv_left: segment_recv_left,
            recv_right: segment_recv_right,
        };
        let config = SolverConfig {
            validate: true,
            ..config(1, 1)
        };
        let err = run_segment(0, vec![0.5], links, &config, None).unwrap_err();
        assert_eq!(
            err,
            ProtocolError::MissingStepTag {
                segment: 0,
                expected: 0
            }
        );
    }

    #[test]
    fn vanished_neighbor_is_reported() {
        let (to_segment_right, segment_recv_right) = channel::<GhostMessage>(4).unwrap();
        let (_to_segment_left, segment_recv_left) = channel::<GhostMessage>(4).unwrap();
        let (segment_send_left, _our_left_inbox) = channel(4).unwrap();
        let (segment_send_right, _our_right_inbox) = channel(4).unwrap();
        drop(to_segment_right);
        let links = SegmentLinks {
            send_left: segment_send_left,
            send_right: segment_send_right,
            recv_left: segment_recv_left,
            recv_right: segment_recv_right,
        };
        let err = run_segment(1, vec![0.5], links, &config(1, 1), None).unwrap_err();
        assert_eq!(err, ProtocolError::Disconnected { segment: 1 });
    }

    #[test]
    fn step_hook_skew_does_not_change_results() {
        // Deterministic but irregular delays, heavier on segment 1.
        let hook: StepHook<'_> = &|segment: usize, step: u64| {
            if (segment + step as usize) % 3 == 0 {
                std::thread::sleep(std::time::Duration::from_micros(
                    200 * (segment as u64 + 1),
                ));
            }
        };
        let config = config(16, 30);
        let expected = sequential_reference(&config);
        let mut field = init_field(&config);
        let partition = make_partition(config.nodes, 4).unwrap();
        run_ring(&mut field, &partition, &config, DEFAULT_CAPACITY, Some(hook)).unwrap();
        assert_eq!(field.current, expected);
    }

    #[test]
    fn zero_steps_touch_nothing() {
        let config = config(6, 0);
        let (got, stats) = queue_run(&config, 2, DEFAULT_CAPACITY);
        assert_eq!(got, vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!(stats.total_messages(), 0);
    }
}
