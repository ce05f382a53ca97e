//! The discrete temperature field, double-buffered so a sweep reads one
//! buffer while writing the other.

use crate::config::SolverConfig;

/// Temperatures on the ring at the current step, plus the scratch buffer the
/// next step is written into.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub current: Vec<f64>,
    pub next: Vec<f64>,
    /// Number of completed time steps.
    pub step: u64,
}

impl Field {
    /// An all-zero field of `nodes` cells.
    pub fn new(nodes: usize) -> Field {
        Field {
            current: vec![0.0; nodes],
            next: vec![0.0; nodes],
            step: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.current.len()
    }

    pub fn is_empty(&self) -> bool {
        self.current.is_empty()
    }

    /// Promotes `next` to `current` and advances the step counter. O(1); the
    /// buffers trade places, nothing is copied.
    pub fn swap_buffers(&mut self) {
        std::mem::swap(&mut self.current, &mut self.next);
        self.step += 1;
    }
}

/// The initial condition: a linear ramp `u[i] = i * dx`. Deliberately
/// discontinuous across the periodic seam (cell `nodes-1` wraps to cell 0),
/// which exercises the boundary exchange from the very first step.
pub fn init_field(config: &SolverConfig) -> Field {
    let mut field = Field::new(config.nodes);
    for (i, cell) in field.current.iter_mut().enumerate() {
        *cell = i as f64 * config.dx;
    }
    field
}

/// Sum of all cell values. The periodic explicit update only moves heat
/// between neighbors, so this is conserved up to rounding.
pub fn total_heat(field: &Field) -> f64 {
    field.current.iter().sum()
}
