//! The explicit three-point update and the sequential reference sweep.
//!
//! Every strategy funnels through [`stencil_update`], in the same expression
//! order, so results are bitwise identical regardless of how the work is
//! scheduled.

use crate::config::SolverConfig;
use crate::field::Field;

/// One explicit Euler step of one cell:
/// `mid + dt*alpha*(left - 2*mid + right) / denominator`.
///
/// Evaluation order is fixed left-to-right; callers must not refactor the
/// arithmetic (for example into a precomputed coefficient), or strategies
/// stop agreeing bitwise.
#[inline]
pub fn stencil_update(left: f64, mid: f64, right: f64, config: &SolverConfig) -> f64 {
    mid + config.dt * config.alpha * (left - 2.0 * mid + right) / config.denominator()
}

/// Updates cells `start .. start + out.len()` of the ring, reading neighbors
/// from `current` with periodic wraparound, writing into `out`.
pub(crate) fn compute_range(current: &[f64], start: usize, out: &mut [f64], config: &SolverConfig) {
    let n = current.len();
    debug_assert!(start + out.len() <= n);
    if n == 1 {
        // A one-cell ring is its own pair of neighbors.
        out[0] = stencil_update(current[0], current[0], current[0], config);
        return;
    }
    for (k, slot) in out.iter_mut().enumerate() {
        let g = start + k;
        let left = current[if g == 0 { n - 1 } else { g - 1 }];
        let right = current[if g + 1 == n { 0 } else { g + 1 }];
        *slot = stencil_update(left, current[g], right, config);
    }
}

/// Advances the whole field one step, single-threaded. The reference the
/// parallel strategies are checked against.
pub fn sweep_sequential(field: &mut Field, config: &SolverConfig) {
    let Field { current, next, .. } = field;
    compute_range(current, 0, next, config);
    field.swap_buffers();
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::DenominatorMode;
    use crate::field::init_field;

    fn defaults() -> SolverConfig {
        SolverConfig::default()
    }

    #[test]
    fn single_cell_update() {
        // 0 + 1*0.25*(3 - 0 + 1)/1
        assert_eq!(stencil_update(3.0, 0.0, 1.0, &defaults()), 1.0);
    }

    #[test]
    fn literal_denominator_halves_the_flux_at_unit_spacing() {
        let config = SolverConfig {
            denominator_mode: DenominatorMode::PaperLiteral,
            ..defaults()
        };
        // 0 + 1*0.25*(3 - 0 + 1)/(2*1)
        assert_eq!(stencil_update(3.0, 0.0, 1.0, &config), 0.5);
    }

    #[test]
    fn one_step_on_the_four_cell_ramp() {
        let config = SolverConfig {
            nodes: 4,
            ..defaults()
        };
        let mut field = init_field(&config);
        sweep_sequential(&mut field, &config);
        // Worked by hand. Interior cells sit on a straight line, so their
        // bracket (left - 2*mid + right) is zero and they keep their value;
        // the seam cells see the wrap: cell 0 reads 3 on its left, cell 3
        // reads 0 on its right.
        //   cell 0: 0 + 0.25*(3 - 0 + 1) = 1
        //   cell 1: 1 + 0.25*(0 - 2 + 2) = 1
        //   cell 2: 2 + 0.25*(1 - 4 + 3) = 2
        //   cell 3: 3 + 0.25*(2 - 6 + 0) = 2
        assert_eq!(field.current, vec![1.0, 1.0, 2.0, 2.0]);
        assert_eq!(field.step, 1);
    }

    #[test]
    fn two_steps_on_the_four_cell_ramp() {
        let config = SolverConfig {
            nodes: 4,
            ..defaults()
        };
        let mut field = init_field(&config);
        sweep_sequential(&mut field, &config);
        sweep_sequential(&mut field, &config);
        // From [1, 1, 2, 2]:
        //   cell 0: 1 + 0.25*(2 - 2 + 1) = 1.25
        //   cell 1: 1 + 0.25*(1 - 2 + 2) = 1.25
        //   cell 2: 2 + 0.25*(1 - 4 + 2) = 1.75
        //   cell 3: 2 + 0.25*(2 - 4 + 1) = 1.75
        assert_eq!(field.current, vec![1.25, 1.25, 1.75, 1.75]);
    }

    #[test]
    fn one_cell_ring_is_a_fixed_point() {
        let config = SolverConfig {
            nodes: 1,
            ..defaults()
        };
        let mut field = init_field(&config);
        for _ in 0..10 {
            sweep_sequential(&mut field, &config);
        }
        assert_eq!(field.current, vec![0.0]);
        assert_eq!(field.step, 10);
    }
}
