//! Browser bindings for the solver and the analysis helpers.
//!
//! The API sticks to numbers, strings and `Vec<f64>` so no serde layer is
//! needed. Multi-value results come back as flat vectors with a documented
//! layout; the page-side script unpacks them.

use wasm_bindgen::prelude::*;

use heatring::{
    analysis::{classify, cocomo, fit_scaling, t_average},
    init_field, total_heat, DenominatorMode, Field, SolverConfig, Strategy,
};

/// A sequential ring simulation the page can step and draw.
///
/// Construction never fails: unstable parameter sets are accepted, and the
/// page reads [`Simulation::stable`] to warn instead. The browser demo is
/// exactly the place to watch a violated stability bound blow up.
#[wasm_bindgen]
pub struct Simulation {
    field: Field,
    config: SolverConfig,
}

#[wasm_bindgen]
impl Simulation {
    /// `nodes` is clamped to at least 1 so a careless caller cannot build an
    /// empty ring.
    #[wasm_bindgen(constructor)]
    pub fn new(nodes: usize, alpha: f64, dt: f64, dx: f64, paper_denominator: bool) -> Simulation {
        let config = SolverConfig {
            nodes: nodes.max(1),
            alpha,
            dt,
            dx,
            strategy: Strategy::Sequential,
            denominator_mode: if paper_denominator {
                DenominatorMode::PaperLiteral
            } else {
                DenominatorMode::Squared
            },
            allow_unstable: true,
            ..SolverConfig::default()
        };
        Simulation {
            field: init_field(&config),
            config,
        }
    }

    /// Advances `n` steps. Stepping is separate from drawing so the page can
    /// run many steps per frame on small grids.
    pub fn step(&mut self, n: u32) {
        for _ in 0..n {
            heatring::sweep_sequential(&mut self.field, &self.config);
        }
    }

    /// Snapshot of the current field, one value per node.
    pub fn values(&self) -> Vec<f64> {
        self.field.current.clone()
    }

    pub fn total_heat(&self) -> f64 {
        total_heat(&self.field)
    }

    /// Steps taken since construction. f64 because u64 does not cross the
    /// boundary as a plain number.
    pub fn step_index(&self) -> f64 {
        self.field.step as f64
    }

    /// The stability coefficient alpha * dt / denominator.
    pub fn coefficient(&self) -> f64 {
        self.config.stability_coefficient()
    }

    /// True when the coefficient respects the explicit-scheme bound.
    pub fn stable(&self) -> bool {
        self.config.stability_coefficient() <= heatring::STABILITY_LIMIT
    }
}

/// Least-squares fit of `t(p) = serial + parallel / p`.
///
/// Returns `[serial_s, parallel_s, r_squared]`, or an empty vector when the
/// samples are unusable (fewer than two points, non-positive thread counts,
/// non-finite times, or all thread counts equal).
#[wasm_bindgen]
pub fn fit(threads: Vec<f64>, times: Vec<f64>) -> Vec<f64> {
    if threads.len() != times.len() {
        return Vec::new();
    }
    let samples: Vec<(f64, f64)> = threads.into_iter().zip(times).collect();
    match fit_scaling(&samples) {
        Ok(fit) => vec![fit.serial_s, fit.parallel_s, fit.r_squared],
        Err(_) => Vec::new(),
    }
}

/// Predicted runtimes from a fit, for drawing the curve through the samples.
#[wasm_bindgen]
pub fn predict_times(serial_s: f64, parallel_s: f64, threads: Vec<f64>) -> Vec<f64> {
    threads.iter().map(|p| serial_s + parallel_s / p).collect()
}

/// Mean of the runtimes at 2, 20 and 40 threads.
#[wasm_bindgen]
pub fn t_average_of(t2: f64, t20: f64, t40: f64) -> f64 {
    t_average(t2, t20, t40)
}

/// Basic-COCOMO organic estimate: `[kloc, effort_pm, schedule_months]`.
#[wasm_bindgen]
pub fn cocomo_numbers(loc: u32) -> Vec<f64> {
    let estimate = cocomo(u64::from(loc));
    vec![
        estimate.kloc,
        estimate.effort_pm,
        estimate.schedule_months,
    ]
}

/// Places entries on the effort/speed square.
///
/// Input vectors are per entry: development effort and t_average. Output is
/// `[x0, y0, x1, y1, ...]` in input order, each coordinate in [-1, 1].
/// Mismatched or empty inputs return an empty vector.
#[wasm_bindgen]
pub fn classify_scores(efforts: Vec<f64>, t_averages: Vec<f64>) -> Vec<f64> {
    if efforts.is_empty() || efforts.len() != t_averages.len() {
        return Vec::new();
    }
    let entries: Vec<(&str, f64, f64)> = efforts
        .iter()
        .zip(&t_averages)
        .map(|(&e, &t)| ("", e, t))
        .collect();
    classify(&entries)
        .iter()
        .flat_map(|point| [point.x, point.y])
        .collect()
}
