//! Contiguous block decomposition of the ring across workers.

use thiserror::Error;

/// A contiguous run of cells owned by one worker.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    /// Index of the first owned cell.
    pub start: usize,
    /// Number of owned cells; always at least 1.
    pub len: usize,
}

impl Segment {
    /// One past the last owned cell.
    pub fn end(&self) -> usize {
        self.start + self.len
    }
}

/// An ordered, gapless cover of `0..nodes` by non-empty segments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    segments: Vec<Segment>,
}

impl Partition {
    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn segment_count(&self) -> usize {
        self.segments.len()
    }

    /// Total number of cells covered.
    pub fn nodes(&self) -> usize {
        self.segments.iter().map(|s| s.len).sum()
    }
}

/// Splits `nodes` cells into `threads` segments of size `floor(nodes/threads)`
/// or one more, remainder cells going to the lowest-indexed segments. Segment
/// sizes therefore differ by at most one.
pub fn make_partition(nodes: usize, threads: usize) -> Result<Partition, PartitionError> {
    if threads == 0 {
        return Err(PartitionError::ZeroThreads);
    }
    if threads > nodes {
        return Err(PartitionError::MoreThreadsThanNodes { threads, nodes });
    }
    let base = nodes / threads;
    let remainder = nodes % threads;
    let mut segments = Vec::with_capacity(threads);
    let mut start = 0;
    for i in 0..threads {
        let len = base + usize::from(i < remainder);
        segments.push(Segment { start, len });
        start += len;
    }
    debug_assert_eq!(start, nodes);
    Ok(Partition { segments })
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("cannot partition into zero segments")]
    ZeroThreads,
    #[error("cannot give {threads} workers at least one cell each out of {nodes}")]
    MoreThreadsThanNodes { threads: usize, nodes: usize },
}
