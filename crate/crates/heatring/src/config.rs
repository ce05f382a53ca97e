//! Run configuration: physical and numerical parameters, strategy selection,
//! and the explicit-Euler stability guard.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// How a run advances the field by one time step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Single-threaded reference sweep.
    Sequential,
    /// Bulk-synchronous: every worker updates its cells, then all join
    /// before the next step begins.
    Barrier,
    /// Asynchronous ghost-cell exchange over bounded SPSC queues; no global
    /// synchronization point.
    Queues,
}

impl Strategy {
    pub fn label(self) -> &'static str {
        match self {
            Strategy::Sequential => "sequential",
            Strategy::Barrier => "barrier",
            Strategy::Queues => "queues",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sequential" => Ok(Strategy::Sequential),
            "barrier" => Ok(Strategy::Barrier),
            "queues" => Ok(Strategy::Queues),
            other => Err(format!(
                "unknown strategy `{other}` (expected sequential, barrier, or queues)"
            )),
        }
    }
}

/// Denominator of the discrete diffusion term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DenominatorMode {
    /// dx^2 - the standard second-order central difference. Default.
    Squared,
    /// 2*dx - divides by twice the grid spacing instead. Kept selectable so
    /// that runs with either denominator can be reproduced; the update is
    /// cost-identical, only the divisor changes.
    PaperLiteral,
}

/// All parameters of a solver run.
///
/// `nodes` cells of spacing `dx` form a periodic ring of length
/// `nodes * dx`; the domain length is always derived, never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Number of discrete grid cells.
    pub nodes: usize,
    /// Number of explicit Euler time steps.
    pub steps: u64,
    /// Number of worker execution streams.
    pub threads: usize,
    /// Material diffusivity (length^2/time).
    pub alpha: f64,
    /// Time step (time).
    pub dt: f64,
    /// Grid spacing (length).
    pub dx: f64,
    pub strategy: Strategy,
    pub denominator_mode: DenominatorMode,
    /// Step-tag ghost messages and protocol checks. Never changes numerical
    /// results.
    pub validate: bool,
    /// Run even when the stability guard would reject the configuration.
    pub allow_unstable: bool,
}

impl Default for SolverConfig {
    /// The baseline problem: 10^6 cells, 10^3 steps, one worker, and
    /// integer-friendly parameters (alpha 0.25, dt 1, dx 1) that keep the
    /// update coefficient at 0.25, safely inside stability.
    fn default() -> Self {
        SolverConfig {
            nodes: 1_000_000,
            steps: 1_000,
            threads: 1,
            alpha: 0.25,
            dt: 1.0,
            dx: 1.0,
            strategy: Strategy::Queues,
            denominator_mode: DenominatorMode::Squared,
            validate: false,
            allow_unstable: false,
        }
    }
}

/// Largest stable update coefficient for the explicit scheme. The amplification
/// factor of the update `u + c*(left - 2*mid + right)` stays within [-1, 1]
/// exactly when `c <= 1/2`.
pub const STABILITY_LIMIT: f64 = 0.5;

impl SolverConfig {
    /// Denominator of the diffusion term under the selected mode.
    pub fn denominator(&self) -> f64 {
        match self.denominator_mode {
            DenominatorMode::Squared => self.dx * self.dx,
            DenominatorMode::PaperLiteral => 2.0 * self.dx,
        }
    }

    /// The update coefficient `c = alpha*dt / denominator`. In `Squared` mode
    /// this is the CFL number nu = alpha*dt/dx^2.
    pub fn stability_coefficient(&self) -> f64 {
        self.alpha * self.dt / self.denominator()
    }

    /// Ring length `nodes * dx`.
    pub fn domain_length(&self) -> f64 {
        self.nodes as f64 * self.dx
    }

    /// Validates every invariant a run depends on.
    pub fn check(&self) -> Result<(), ConfigError> {
        if self.nodes == 0 {
            return Err(ConfigError::ZeroNodes);
        }
        if self.threads == 0 {
            return Err(ConfigError::ZeroThreads);
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(ConfigError::BadDt(self.dt));
        }
        if !(self.dx > 0.0 && self.dx.is_finite()) {
            return Err(ConfigError::BadDx(self.dx));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(ConfigError::BadAlpha(self.alpha));
        }
        if self.strategy == Strategy::Queues && self.threads > self.nodes {
            return Err(ConfigError::ThreadsExceedNodes {
                threads: self.threads,
                nodes: self.nodes,
            });
        }
        let coefficient = self.stability_coefficient();
        if coefficient > STABILITY_LIMIT && !self.allow_unstable {
            return Err(ConfigError::Unstable {
                coefficient,
                limit: STABILITY_LIMIT,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("nodes must be at least 1")]
    ZeroNodes,
    #[error("threads must be at least 1")]
    ZeroThreads,
    #[error("dt must be positive and finite, got {0}")]
    BadDt(f64),
    #[error("dx must be positive and finite, got {0}")]
    BadDx(f64),
    #[error("alpha must be non-negative and finite, got {0}")]
    BadAlpha(f64),
    #[error("queues strategy needs threads <= nodes, got {threads} threads for {nodes} cells")]
    ThreadsExceedNodes { threads: usize, nodes: usize },
    #[error(
        "unstable explicit step: update coefficient {coefficient} exceeds {limit}; \
         reduce alpha*dt or set allow_unstable to run anyway"
    )]
    Unstable { coefficient: f64, limit: f64 },
}
